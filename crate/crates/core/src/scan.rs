//! Parameter sweeps over `g²`, thresholds and nonclassical depth, written
//! as CSV for plotting.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::g2::{
    alpha_min_pi, alpha_threshold, alpha_threshold_two_mode_symmetric, g2_single_closed_form, g2_two_mode_state,
    ThresholdResult,
};
use crate::gaussian::{nonclassical_depth, normalize_angle, SingleModeState, SqueezingParam, TwoModeState};

/// Parameters a scan can sweep or fix.
pub const PARAMETERS: [&str; 6] = ["alpha", "beta", "r", "psi", "nth", "nth2"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanMode {
    Single,
    TwoMode,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub name: String,
    pub values: Vec<f64>,
}

impl Sweep {
    /// `steps` evenly spaced points from `min` to `max` inclusive.
    pub fn range(name: &str, min: f64, max: f64, steps: usize) -> Result<Self> {
        check_name(name)?;
        if steps < 2 {
            return Err(Error::validation(format!("sweep '{name}' needs at least 2 steps, got {steps}")));
        }
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(Error::validation(format!("sweep '{name}' needs finite min < max, got {min}..{max}")));
        }
        let values = (0..steps)
            .map(|i| if i + 1 == steps { max } else { min + (max - min) * i as f64 / (steps - 1) as f64 })
            .collect();
        Ok(Sweep { name: name.to_string(), values })
    }

    pub fn list(name: &str, values: Vec<f64>) -> Result<Self> {
        check_name(name)?;
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation(format!("sweep '{name}' needs finite values")));
        }
        Ok(Sweep { name: name.to_string(), values })
    }
}

fn check_name(name: &str) -> Result<()> {
    if PARAMETERS.contains(&name) {
        Ok(())
    } else {
        Err(Error::validation(format!("unknown scan parameter '{name}' (expected one of {})", PARAMETERS.join(", "))))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub mode: ScanMode,
    pub sweeps: Vec<Sweep>,
    pub fixed: BTreeMap<String, f64>,
}

impl ScanSpec {
    pub fn new(mode: ScanMode, sweeps: Vec<Sweep>, fixed: BTreeMap<String, f64>) -> Result<Self> {
        for name in fixed.keys() {
            check_name(name)?;
        }
        for (i, s) in sweeps.iter().enumerate() {
            check_name(&s.name)?;
            if sweeps[..i].iter().any(|t| t.name == s.name) || fixed.contains_key(&s.name) {
                return Err(Error::validation(format!("parameter '{}' given twice", s.name)));
            }
        }
        Ok(ScanSpec { mode, sweeps, fixed })
    }

    pub fn points(&self) -> usize {
        self.sweeps.iter().map(|s| s.values.len()).product()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Flag(bool),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => write!(f, "{v:?}"),
            Cell::Flag(b) => write!(f, "{b}"),
            Cell::Empty => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl ScanTable {
    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn write_csv(&self, out: &mut (impl Write + ?Sized)) -> Result<()> {
        writeln!(out, "{}", self.headers.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::to_string).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Point {
    alpha: f64,
    beta: f64,
    r: f64,
    psi: f64,
    nth: f64,
    nth2: f64,
}

fn value_or_undefined<T>(res: Result<T>) -> Result<Option<T>> {
    match res {
        Ok(v) => Ok(Some(v)),
        Err(Error::Undefined(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

fn threshold_cells(t: Option<ThresholdResult>) -> [Cell; 2] {
    match t {
        Some(t) => [Cell::Flag(t.exists), t.alpha_th.map_or(Cell::Empty, Cell::Num)],
        None => [Cell::Empty, Cell::Empty],
    }
}

fn single_row(p: &Point) -> Result<Vec<Cell>> {
    let state = SingleModeState::new(Complex64::new(p.alpha, 0.0), SqueezingParam::new(p.r, p.psi)?, p.nth)?;
    let g2 = value_or_undefined(g2_single_closed_form(&state))?;
    let threshold = value_or_undefined(alpha_threshold(p.r, p.psi, p.nth))?;
    let at_pi = (normalize_angle(p.psi) - std::f64::consts::PI).abs() < 1e-12;
    let alpha_min = if at_pi { value_or_undefined(alpha_min_pi(p.r, p.nth))?.flatten() } else { None };
    let [exists, alpha_th] = threshold_cells(threshold);
    Ok(vec![
        Cell::Num(p.alpha),
        Cell::Num(p.r),
        Cell::Num(p.psi),
        Cell::Num(p.nth),
        g2.map_or(Cell::Empty, |g| Cell::Num(g.value)),
        exists,
        alpha_th,
        alpha_min.map_or(Cell::Empty, Cell::Num),
        Cell::Num(nonclassical_depth(p.r, p.nth)),
    ])
}

fn two_mode_row(p: &Point) -> Result<Vec<Cell>> {
    let state = TwoModeState::new(
        Complex64::new(p.alpha, 0.0),
        Complex64::new(p.beta, 0.0),
        SqueezingParam::new(p.r, p.psi)?,
        p.nth,
        p.nth2,
    )?;
    let g2 = value_or_undefined(g2_two_mode_state(&state))?;
    let threshold = if p.nth == p.nth2 {
        value_or_undefined(alpha_threshold_two_mode_symmetric(p.r, p.psi, p.nth))?
    } else {
        None
    };
    let [exists, alpha_th] = threshold_cells(threshold);
    Ok(vec![
        Cell::Num(p.alpha),
        Cell::Num(p.beta),
        Cell::Num(p.r),
        Cell::Num(p.psi),
        Cell::Num(p.nth),
        Cell::Num(p.nth2),
        g2.map_or(Cell::Empty, |g| Cell::Num(g.value)),
        exists,
        alpha_th,
    ])
}

/// Evaluates every grid point, row-major over the sweeps (first sweep
/// outermost). Unset parameters default to 0; in two-mode scans `beta` and
/// `nth2` default to `alpha` and `nth`. Undefined quantities are left empty.
pub fn run_scan(spec: &ScanSpec) -> Result<ScanTable> {
    let headers: Vec<&str> = match spec.mode {
        ScanMode::Single => vec!["alpha", "r", "psi", "nth", "g2", "threshold_exists", "alpha_th", "alpha_min", "depth"],
        ScanMode::TwoMode => vec!["alpha", "beta", "r", "psi", "nth", "nth2", "g2_tm", "threshold_exists", "alpha_th"],
    };
    let mut rows = Vec::with_capacity(spec.points());
    let dims: Vec<usize> = spec.sweeps.iter().map(|s| s.values.len()).collect();
    let mut index = vec![0usize; dims.len()];
    for _ in 0..spec.points() {
        let mut values = spec.fixed.clone();
        for (s, &i) in spec.sweeps.iter().zip(&index) {
            values.insert(s.name.clone(), s.values[i]);
        }
        let get = |k: &str| values.get(k).copied();
        let alpha = get("alpha").unwrap_or(0.0);
        let nth = get("nth").unwrap_or(0.0);
        let point = Point {
            alpha,
            beta: get("beta").unwrap_or(alpha),
            r: get("r").unwrap_or(0.0),
            psi: get("psi").unwrap_or(0.0),
            nth,
            nth2: get("nth2").unwrap_or(nth),
        };
        rows.push(match spec.mode {
            ScanMode::Single => single_row(&point)?,
            ScanMode::TwoMode => two_mode_row(&point)?,
        });
        for d in (0..dims.len()).rev() {
            index[d] += 1;
            if index[d] < dims[d] {
                break;
            }
            index[d] = 0;
        }
    }
    Ok(ScanTable { headers: headers.into_iter().map(String::from).collect(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::classical_squeezing_bound;
    use crate::g2::alpha_threshold;
    use std::f64::consts::PI;

    fn num(c: &Cell) -> Option<f64> {
        match c {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }

    #[test]
    fn degenerate_two_step_scan() {
        let spec = ScanSpec::new(
            ScanMode::Single,
            vec![Sweep::range("r", 0.2, 0.4, 2).unwrap(), Sweep::range("nth", 0.0, 0.1, 2).unwrap()],
            BTreeMap::from([("psi".to_string(), PI), ("alpha".to_string(), 1.0)]),
        )
        .unwrap();
        let t = run_scan(&spec).unwrap();
        assert_eq!(t.rows.len(), 4);
        let r = t.column("r").unwrap();
        let n = t.column("nth").unwrap();
        let order: Vec<(f64, f64)> = t.rows.iter().map(|row| (num(&row[r]).unwrap(), num(&row[n]).unwrap())).collect();
        assert_eq!(order, vec![(0.2, 0.0), (0.2, 0.1), (0.4, 0.0), (0.4, 0.1)]);
    }

    #[test]
    fn amplitude_squeezing_threshold_diverges_at_boundary() {
        for nth in [0.0, 0.1, 0.25] {
            let spec = ScanSpec::new(
                ScanMode::Single,
                vec![Sweep::range("r", 0.0, 1.5, 151).unwrap()],
                BTreeMap::from([("psi".to_string(), PI), ("nth".to_string(), nth), ("alpha".to_string(), 1.0)]),
            )
            .unwrap();
            let t = run_scan(&spec).unwrap();
            let (rc, ac) = (t.column("r").unwrap(), t.column("alpha_th").unwrap());
            let bound = classical_squeezing_bound(nth);
            let mut present: Vec<(f64, f64)> = Vec::new();
            for row in &t.rows {
                let r = num(&row[rc]).unwrap();
                match num(&row[ac]) {
                    Some(a) => {
                        assert!(r > bound);
                        present.push((r, a));
                    }
                    None => assert!(r <= bound + 1e-12),
                }
            }
            if nth > 0.0 {
                // decreasing just above the boundary, divergent at it
                assert!(present[0].1 > present[1].1);
                let near = alpha_threshold(bound + 1e-9, PI, nth).unwrap().alpha_th.unwrap();
                assert!(near > 100.0 * present[0].1);
            }
        }
    }

    #[test]
    fn two_mode_region() {
        let count_below = |nth: f64, psi: f64| {
            let spec = ScanSpec::new(
                ScanMode::TwoMode,
                vec![Sweep::range("alpha", 0.0, 4.0, 41).unwrap(), Sweep::range("beta", 0.0, 4.0, 41).unwrap()],
                BTreeMap::from([("r".to_string(), 0.5), ("psi".to_string(), psi), ("nth".to_string(), nth)]),
            )
            .unwrap();
            let t = run_scan(&spec).unwrap();
            let g = t.column("g2_tm").unwrap();
            t.rows.iter().filter(|row| num(&row[g]).is_some_and(|v| v < 1.0)).count()
        };
        let clean = count_below(0.0, PI);
        assert!(clean > 0);
        assert!(count_below(0.15, PI) < clean);
        assert_eq!(count_below(0.0, 0.0), 0);
    }

    #[test]
    fn invalid_specs() {
        assert!(Sweep::range("r", 1.0, 0.0, 5).is_err());
        assert!(Sweep::range("r", 0.0, 1.0, 1).is_err());
        assert!(Sweep::range("gamma", 0.0, 1.0, 3).is_err());
        let dup = ScanSpec::new(
            ScanMode::Single,
            vec![Sweep::range("r", 0.0, 1.0, 2).unwrap()],
            BTreeMap::from([("r".to_string(), 0.5)]),
        );
        assert!(dup.is_err());
    }

    #[test]
    fn csv_has_empty_cells_for_undefined() {
        let spec = ScanSpec::new(ScanMode::Single, vec![Sweep::list("alpha", vec![0.0, 1.0]).unwrap()], BTreeMap::new()).unwrap();
        let t = run_scan(&spec).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "alpha,r,psi,nth,g2,threshold_exists,alpha_th,alpha_min,depth");
        assert_eq!(lines[1], "0.0,0.0,0.0,0.0,,,,,0.0");
        assert_eq!(lines[2], "1.0,0.0,0.0,0.0,1.0,,,,0.0");
    }
}
