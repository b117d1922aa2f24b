//! Simulation time.
//!
//! All timestamps and delays are stored as integer femtoseconds so that
//! sums of per-element delays are exact. Table-level calibration values
//! such as 603.3 ps are representable without rounding, and identities like
//! `n * d_high - w * delta` hold bit-for-bit.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

const FS_PER_PS: i64 = 1_000;

/// A point in time or a duration, in femtoseconds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Time(i64);

impl Time {
    pub const ZERO: Time = Time(0);

    pub const fn from_fs(fs: i64) -> Self {
        Time(fs)
    }

    /// Rounds to the nearest femtosecond.
    pub fn from_ps(ps: f64) -> Self {
        Time((ps * FS_PER_PS as f64).round() as i64)
    }

    pub fn from_ns(ns: f64) -> Self {
        Self::from_ps(ns * 1_000.0)
    }

    pub const fn as_fs(self) -> i64 {
        self.0
    }

    pub fn as_ps(self) -> f64 {
        self.0 as f64 / FS_PER_PS as f64
    }

    pub fn as_ns(self) -> f64 {
        self.0 as f64 / (FS_PER_PS * 1_000) as f64
    }

    pub fn abs_diff(self, other: Time) -> Time {
        Time((self.0 - other.0).abs())
    }

    pub fn max(self, other: Time) -> Time {
        if other.0 > self.0 {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Time) -> Time {
        if other.0 < self.0 {
            other
        } else {
            self
        }
    }
}

impl Add for Time {
    type Output = Time;
    fn add(self, rhs: Time) -> Time {
        Time(self.0 + rhs.0)
    }
}

impl AddAssign for Time {
    fn add_assign(&mut self, rhs: Time) {
        self.0 += rhs.0;
    }
}

impl Sub for Time {
    type Output = Time;
    fn sub(self, rhs: Time) -> Time {
        Time(self.0 - rhs.0)
    }
}

impl Neg for Time {
    type Output = Time;
    fn neg(self) -> Time {
        Time(-self.0)
    }
}

impl Mul<i64> for Time {
    type Output = Time;
    fn mul(self, rhs: i64) -> Time {
        Time(self.0 * rhs)
    }
}

impl Mul<Time> for i64 {
    type Output = Time;
    fn mul(self, rhs: Time) -> Time {
        Time(self * rhs.0)
    }
}

impl Sum for Time {
    fn sum<I: Iterator<Item = Time>>(iter: I) -> Time {
        Time(iter.map(|t| t.0).sum())
    }
}

impl fmt::Display for Time {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ps", self.as_ps())
    }
}

// Config and data files carry picoseconds as plain numbers.
impl Serialize for Time {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.as_ps())
    }
}

impl<'de> Deserialize<'de> for Time {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let ps = f64::deserialize(d)?;
        if !ps.is_finite() {
            return Err(serde::de::Error::custom("time must be finite"));
        }
        Ok(Time::from_ps(ps))
    }
}
