//! g2(0) of a displaced squeezed thermal state, by closed form and by the
//! covariance-matrix moment pipeline.
use std::f64::consts::PI;

use homodyne_g2::g2::{g2_single_closed_form, g2_single_pipeline};
use homodyne_g2::gaussian::{cm_single, SingleModeState};

fn main() -> homodyne_g2::error::Result<()> {
    let state = SingleModeState::real(2.0, 0.5, PI, 0.14)?;
    let (cm, x) = cm_single(&state);
    println!("sigma = {:?}", cm.to_row_major());
    println!("X     = {:?}", x.to_vec());

    let closed = g2_single_closed_form(&state)?;
    let pipeline = g2_single_pipeline(&cm, &x)?;
    println!("closed form g2 = {:.12}", closed.value);
    println!("pipeline    g2 = {:.12}", pipeline.value);

    for (name, s) in [
        ("coherent", SingleModeState::real(2.0, 0.0, 0.0, 0.0)?),
        ("thermal", SingleModeState::thermal(0.5)?),
        ("squeezed vacuum", SingleModeState::squeezed_vacuum(0.5, 0.0)?),
    ] {
        println!("{name:>16}: g2 = {:.6}", g2_single_closed_form(&s)?.value);
    }
    Ok(())
}
