//! Brute-force check in a truncated Fock space.
use std::f64::consts::PI;

use homodyne_g2::fock::{build_single_auto, build_two_mode, g2_oracle, ModePartition};
use homodyne_g2::g2::{g2_single_state, g2_two_mode_state};
use homodyne_g2::gaussian::{SingleModeState, TwoModeState};

fn main() -> homodyne_g2::error::Result<()> {
    let state = SingleModeState::real(3.0, 1.0, 0.5 * PI, 0.5)?;
    let ts = build_single_auto(&state)?;
    println!("dim {}, tail mass {:.2e}, unitarity defect {:.2e}", ts.dim(), ts.tail_mass(), ts.unitarity_defect());
    println!("oracle {:.12}  gaussian {:.12}", g2_oracle(&ts, ModePartition::Whole)?.value, g2_single_state(&state)?.value);

    let tm = TwoModeState::symmetric(1.0, 0.4, PI, 0.1)?;
    let ts = build_two_mode(&tm, 40)?;
    println!("two-mode oracle {:.10}  gaussian {:.10}", g2_oracle(&ts, ModePartition::Whole)?.value, g2_two_mode_state(&tm)?.value);
    // each reduced mode of a two-mode squeezed state is thermal-like
    println!("mode 1 alone: g2 = {:.10}", g2_oracle(&ts, ModePartition::Mode(0))?.value);
    Ok(())
}
