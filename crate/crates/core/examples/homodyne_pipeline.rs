//! Simulate homodyne data at four phases, then reconstruct sigma, the state
//! parameters and g2(0) with a bootstrap interval.
use std::f64::consts::PI;

use homodyne_g2::estimator::{reconstruct, EstimateOptions};
use homodyne_g2::g2::g2_single_closed_form;
use homodyne_g2::gaussian::SingleModeState;
use homodyne_g2::homodyne::{simulate_trace, PhaseSchedule};

fn main() -> homodyne_g2::error::Result<()> {
    let state = SingleModeState::real(2.0, 0.5, PI, 0.14)?;
    let trace = simulate_trace(&state, &PhaseSchedule::standard(100_000)?, 7)?;
    let options = EstimateOptions { resamples: 400, ..EstimateOptions::default() };
    let result = reconstruct(&trace, &options)?;

    println!("sigma = {:?}", result.cm.to_row_major());
    if let Some(fit) = result.fitted {
        let s = fit.state;
        println!("fit: alpha = {:.4}, r = {:.4}, psi = {:.4}, nth = {:.4}", s.alpha(), s.r(), s.psi(), s.n_th());
    }
    let ci = result.g2.ci.expect("estimates carry an interval");
    println!("g2 = {:.5} [{:.5}, {:.5}], true {:.5}", result.g2.value, ci.low, ci.high, g2_single_closed_form(&state)?.value);
    println!("gaussianity pass: {}, warnings: {:?}", result.diagnostics.pass, result.warnings);
    Ok(())
}
