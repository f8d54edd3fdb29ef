//! Total-intensity g2(0) of a two-mode squeezed thermal state.
use std::f64::consts::PI;

use homodyne_g2::g2::{alpha_threshold, alpha_threshold_two_mode_symmetric, g2_two_mode, two_mode_scale_threshold};
use homodyne_g2::gaussian::{check_physical, cm_two_mode, TwoModeState};

fn main() -> homodyne_g2::error::Result<()> {
    let state = TwoModeState::symmetric(1.5, 0.5, PI, 0.1)?;
    let (cm, x) = cm_two_mode(&state);
    let phys = check_physical(&cm);
    println!("symplectic eigenvalues {:?}, physical {}", phys.symplectic_eigenvalues, phys.physical);
    println!("g2_TM = {:.10}", g2_two_mode(&cm, &x)?.value);

    let single = alpha_threshold(0.5, PI, 0.1)?;
    let two = alpha_threshold_two_mode_symmetric(0.5, PI, 0.1)?;
    println!("thresholds at psi = pi: single {:?}, two-mode {:?}", single.alpha_th, two.alpha_th);

    let template = TwoModeState::new(1.0.into(), 0.5.into(), state.squeezing(), 0.0, 0.0)?;
    println!("scale factor where g2_TM crosses 1: {:?}", two_mode_scale_threshold(&template, 5.0, 400)?);
    Ok(())
}
