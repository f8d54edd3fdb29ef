//! Threshold amplitude above which g2(0) < 1, and where the minimum sits.
use std::f64::consts::PI;

use homodyne_g2::g2::{alpha_min_pi, alpha_threshold, alpha_threshold_pi};
use homodyne_g2::gaussian::{classical_squeezing_bound, nonclassical_depth};

fn main() -> homodyne_g2::error::Result<()> {
    let (r, n) = (0.5, 0.14);
    let th = alpha_threshold_pi(r, n)?;
    println!("depth T(r, N) = {:.6}", nonclassical_depth(r, n));
    println!("alpha_th = {:?}, alpha_min = {:?}", th.alpha_th, alpha_min_pi(r, n)?);

    // the threshold disappears once squeezing no longer beats the thermal noise
    let bound = classical_squeezing_bound(n);
    println!("classical for r <= {bound:.6}: exists at bound = {}", alpha_threshold_pi(bound, n)?.exists);

    println!("psi/pi  exists  alpha_th");
    for k in 0..=8 {
        let psi = k as f64 * PI / 4.0;
        let t = alpha_threshold(1.0, psi, 0.0)?;
        println!("{:>6.2}  {:>6}  {:?}", psi / PI, t.exists, t.alpha_th);
    }
    Ok(())
}
