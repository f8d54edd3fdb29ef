//! Parameter sweeps behind the threshold and sub-Poissonian region plots,
//! written as CSV to stdout.
use std::collections::BTreeMap;
use std::f64::consts::PI;

use homodyne_g2::scan::{run_scan, Cell, ScanMode, ScanSpec, Sweep};

fn main() -> homodyne_g2::error::Result<()> {
    // alpha_th against r at psi = pi for three thermal levels
    let spec = ScanSpec::new(
        ScanMode::Single,
        vec![Sweep::list("nth", vec![0.0, 0.1, 0.25])?, Sweep::range("r", 0.05, 1.5, 30)?],
        BTreeMap::from([("psi".to_string(), PI), ("alpha".to_string(), 1.0)]),
    )?;
    run_scan(&spec)?.write_csv(&mut std::io::stdout())?;

    // two-mode (alpha, beta) plane
    let spec = ScanSpec::new(
        ScanMode::TwoMode,
        vec![Sweep::range("alpha", 0.0, 4.0, 9)?, Sweep::range("beta", 0.0, 4.0, 9)?],
        BTreeMap::from([("r".to_string(), 0.5), ("psi".to_string(), PI)]),
    )?;
    let table = run_scan(&spec)?;
    let col = table.column("g2_tm").expect("two-mode tables carry g2_tm");
    let below = table.rows.iter().filter(|row| matches!(row[col], Cell::Num(g) if g < 1.0)).count();
    eprintln!("{below} of {} grid points have g2_TM < 1", table.rows.len());
    Ok(())
}
