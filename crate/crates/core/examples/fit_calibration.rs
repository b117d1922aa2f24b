//! Refits the default cost-model calibration from the measured designs.
//!
//! Run with `cargo run -p tdpop-core --example fit_calibration`.

use tdpop::cost::{comparator_width, MEASURED_DESIGNS};

/// Least squares via the normal equations and Gaussian elimination.
fn lstsq(rows: &[Vec<f64>], y: &[f64]) -> Vec<f64> {
    let p = rows[0].len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (r, &yi) in rows.iter().zip(y) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += r[i] * r[j];
            }
            a[i][p] += r[i] * yi;
        }
    }
    for col in 0..p {
        let pivot = (col..p).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs())).unwrap();
        a.swap(col, pivot);
        for row in 0..p {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..=p {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    (0..p).map(|i| a[i][p] / a[i][i]).collect()
}

fn ceil_log2(n: usize) -> f64 {
    (n as f64).log2().ceil()
}

fn main() {
    // Joint latency fit, in ns: generic = s*d_stage + cmp, ripple = n*d_ripple + cmp,
    // with cmp = (k-1) * width * cmp_per_bit.
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for d in &MEASURED_DESIGNS {
        let cmp = (d.num_classes - 1) as f64 * comparator_width(d.clauses_per_class) as f64;
        rows.push(vec![ceil_log2(d.clauses_per_class), 0.0, cmp]);
        y.push(d.generic_latency_ns);
        rows.push(vec![0.0, d.clauses_per_class as f64, cmp]);
        y.push(d.fpt18_latency_ns);
    }
    let x = lstsq(&rows, &y);
    println!("d_stage     = {:.1} ps", x[0] * 1e3);
    println!("d_ripple    = {:.1} ps", x[1] * 1e3);
    println!("cmp_per_bit = {:.1} ps", x[2] * 1e3);

    // Resources: per_clause * k*C + per_class * k + fixed.
    let rows: Vec<Vec<f64>> = MEASURED_DESIGNS
        .iter()
        .map(|d| vec![(d.num_classes * d.clauses_per_class) as f64, d.num_classes as f64, 1.0])
        .collect();
    let series: [(&str, fn(&tdpop::cost::MeasuredDesign) -> u64); 4] = [
        ("generic", |d| d.generic_luts_ffs),
        ("fpt18", |d| d.fpt18_luts_ffs),
        ("time_domain", |d| d.time_domain_luts_ffs),
        ("async21", |d| d.async21_luts_ffs),
    ];
    for (name, get) in series {
        let y: Vec<f64> = MEASURED_DESIGNS.iter().map(|d| get(d) as f64).collect();
        let c = lstsq(&rows, &y);
        println!("{name:<12} per_clause = {:.3}, per_class = {:.3}, fixed = {:.3}", c[0], c[1], c[2]);
    }
}
