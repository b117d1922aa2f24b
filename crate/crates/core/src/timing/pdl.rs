use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::noise::{noise_stream, NoiseDomain};
use super::{DelayProfile, TimingError};
use crate::bits::BitVector;
use crate::model::{Polarity, TmModel};
use crate::time::Time;

/// Converts clause outputs into PDL select bits. Positive lanes pass the
/// clause output through; negative lanes invert it, so a firing negative
/// clause selects the slow net.
///
/// The weight of the result is `pos_votes + (n_neg - neg_votes)`, which for a
/// balanced polarity map is `class_sum + n/2`.
pub fn select_bits(clause_outputs: &BitVector, polarity_map: &[Polarity]) -> Result<BitVector, TimingError> {
    if clause_outputs.len() != polarity_map.len() {
        return Err(TimingError::LengthMismatch {
            expected: polarity_map.len(),
            found: clause_outputs.len(),
        });
    }
    Ok(clause_outputs
        .iter()
        .zip(polarity_map)
        .map(|(out, pol)| match pol {
            Polarity::Positive => out,
            Polarity::Negative => !out,
        })
        .collect())
}

/// A physical delay line: `n` cascaded elements with frozen per-element
/// process variation.
#[derive(Clone, Debug, PartialEq)]
pub struct PdlInstance {
    id: u64,
    profile: DelayProfile,
    /// Offsets added to the (low, high) net of each element.
    static_offsets: Vec<(Time, Time)>,
    polarity_map: Vec<Polarity>,
}

impl PdlInstance {
    /// Builds an instance, drawing static offsets from the `(seed, id)` stream.
    pub fn new(id: u64, profile: DelayProfile, polarity_map: Vec<Polarity>, seed: u64) -> Result<Self, TimingError> {
        profile.validate()?;
        let n = polarity_map.len();
        let static_offsets = if profile.sigma_static > 0.0 {
            let normal = Normal::new(0.0, profile.sigma_static).expect("sigma validated");
            let mut rng = noise_stream(seed, NoiseDomain::Static, id, 0);
            (0..n)
                .map(|_| {
                    let lo = normal.sample(&mut rng);
                    let hi = normal.sample(&mut rng);
                    (Time::from_ps(lo), Time::from_ps(hi))
                })
                .collect()
        } else {
            vec![(Time::ZERO, Time::ZERO); n]
        };
        Ok(PdlInstance {
            id,
            profile,
            static_offsets,
            polarity_map,
        })
    }

    /// A line whose select bits are driven directly (every lane positive).
    pub fn uniform(id: u64, profile: DelayProfile, n: usize, seed: u64) -> Result<Self, TimingError> {
        Self::new(id, profile, vec![Polarity::Positive; n], seed)
    }

    /// The line for class `k` of a TM, with one element per clause.
    pub fn for_class(model: &TmModel, k: usize, profile: DelayProfile, seed: u64) -> Result<Self, TimingError> {
        Self::new(k as u64, profile, model.polarities(k), seed)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn n_elements(&self) -> usize {
        self.polarity_map.len()
    }

    pub fn profile(&self) -> &DelayProfile {
        &self.profile
    }

    pub fn polarity_map(&self) -> &[Polarity] {
        &self.polarity_map
    }

    pub fn static_offsets(&self) -> &[(Time, Time)] {
        &self.static_offsets
    }

    /// Traversal time for `select`, drawing per-element jitter from `rng`.
    ///
    /// With both sigmas zero this is exactly `base + n*d_high - w*delta`.
    pub fn delay_with<R: Rng>(&self, select: &BitVector, rng: &mut R) -> Result<Time, TimingError> {
        let n = self.n_elements();
        if select.len() != n {
            return Err(TimingError::LengthMismatch {
                expected: n,
                found: select.len(),
            });
        }
        let p = &self.profile;
        let w = select.count_ones();
        let mut total = p.affine_delay(n, w);
        if p.sigma_static > 0.0 {
            total += self
                .static_offsets
                .iter()
                .enumerate()
                .map(|(i, &(lo, hi))| if select.get(i) { lo } else { hi })
                .sum();
        }
        if p.sigma_dynamic > 0.0 {
            let normal = Normal::new(0.0, p.sigma_dynamic).expect("sigma validated");
            let jitter: f64 = (0..n).map(|_| normal.sample(rng)).sum();
            total += Time::from_ps(jitter);
        }
        Ok(total.max(Time::ZERO))
    }

    /// Traversal time for the `transition`-th launch under run seed `seed`.
    pub fn delay(&self, select: &BitVector, seed: u64, transition: u64) -> Result<Time, TimingError> {
        let mut rng = noise_stream(seed, NoiseDomain::Dynamic, self.id, transition);
        self.delay_with(select, &mut rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Polarity::{Negative as N, Positive as P};

    fn bits(s: &str) -> BitVector {
        BitVector::parse(s).unwrap()
    }

    #[test]
    fn select_bit_examples() {
        let s = select_bits(&bits("1101"), &[P, P, N, N]).unwrap();
        assert_eq!(s, bits("1110"));
        // class sum (2 - 1) + n/2
        assert_eq!(s.count_ones(), 3);
        assert_eq!(select_bits(&bits("0110"), &[P; 4]).unwrap(), bits("0110"));
        assert_eq!(select_bits(&bits("00"), &[P, N]).unwrap(), bits("01"));
        assert!(select_bits(&bits("00"), &[P]).is_err());
    }

    #[test]
    fn noiseless_delay_examples() {
        let pdl = PdlInstance::uniform(0, DelayProfile::default(), 4, 0).unwrap();
        assert_eq!(pdl.delay(&bits("1111"), 0, 0).unwrap().as_ps(), 1538.0);
        assert_eq!(pdl.delay(&bits("0000"), 0, 0).unwrap().as_ps(), 2470.4);
        assert_eq!(pdl.delay(&bits("1010"), 0, 0).unwrap().as_ps(), 2004.2);
        assert!(pdl.delay(&bits("101"), 0, 0).is_err());
    }

    #[test]
    fn noiseless_delay_is_position_independent() {
        let pdl = PdlInstance::uniform(0, DelayProfile::default(), 5, 0).unwrap();
        let a = pdl.delay(&bits("11000"), 1, 0).unwrap();
        let b = pdl.delay(&bits("00011"), 1, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn noisy_delay_is_reproducible_per_transition() {
        let profile = DelayProfile::default().with_sigmas(5.0, 20.0);
        let pdl = PdlInstance::uniform(3, profile, 16, 42).unwrap();
        let twin = PdlInstance::uniform(3, profile, 16, 42).unwrap();
        assert_eq!(pdl, twin);
        let sel = bits("1010101010101010");
        assert_eq!(pdl.delay(&sel, 5, 1).unwrap(), twin.delay(&sel, 5, 1).unwrap());
        assert_ne!(pdl.delay(&sel, 5, 1).unwrap(), pdl.delay(&sel, 5, 2).unwrap());
    }

    #[test]
    fn static_offsets_are_frozen_per_instance() {
        let profile = DelayProfile::default().with_sigmas(5.0, 0.0);
        let pdl = PdlInstance::uniform(1, profile, 8, 7).unwrap();
        assert!(pdl.static_offsets().iter().any(|&(lo, hi)| lo != Time::ZERO || hi != Time::ZERO));
        let sel = bits("11110000");
        let first = pdl.delay(&sel, 0, 0).unwrap();
        for t in 1..5 {
            assert_eq!(pdl.delay(&sel, 0, t).unwrap(), first);
        }
        let other = PdlInstance::uniform(2, profile, 8, 7).unwrap();
        assert_ne!(other.static_offsets(), pdl.static_offsets());
    }
}
