//! Symmetrically ordered moments up to fourth order and <N^k>.
use homodyne_g2::fock::{build_single_auto, number_moment_oracle};
use homodyne_g2::gaussian::{cm_single, SingleModeState};
use homodyne_g2::moments::{number_powers_from_symmetric, SymmetricMoments};

fn main() -> homodyne_g2::error::Result<()> {
    let state = SingleModeState::real(1.5, 0.3, 1.0, 0.2)?;
    let (cm, x) = cm_single(&state);
    let sym = SymmetricMoments::gaussian(&cm, &x)?;
    let powers = number_powers_from_symmetric(&sym)?;
    let ts = build_single_auto(&state)?;
    for k in 1..=4 {
        let gaussian = powers.get(k, 0).expect("orders up to 4 are present");
        println!("<N^{k}> = {gaussian:.10}   oracle {:.10}", number_moment_oracle(&ts, &[k])?);
    }
    Ok(())
}
