//! Brute-force reference states in a truncated photon-number basis.
//!
//! States are built as mixtures: each thermal Fock component `|n⟩` (or
//! `|n₁, n₂⟩`) is pushed through the squeezer and the displacement, both
//! obtained by exponentiating the truncated generator in a working space a
//! little larger than the retained dimension. The phase of each generator
//! is split off as an exact diagonal rotation `e^{iφ a†a}`, leaving a real
//! antisymmetric generator.
//!
//! Whatever leaks out of the retained block is reported as `tail_mass`.

pub mod expm;

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::g2::{G2Method, G2Result, MIN_MEAN_PHOTONS};
use crate::gaussian::{SingleModeState, TwoModeState};
use expm::{expm, orthogonality_defect};

pub const DEFAULT_SINGLE_DIM: usize = 200;
pub const DEFAULT_TWO_MODE_DIM: usize = 60;
pub const MAX_SINGLE_DIM: usize = 800;
/// Dense two-mode states are `D² × D²`; larger truncations are refused.
pub const MAX_TWO_MODE_DIM: usize = 80;
/// Tail mass above which a build is flagged and auto-escalation continues.
pub const BUILD_TAIL_TOLERANCE: f64 = 1e-10;
/// Tail mass above which oracle quantities are refused.
pub const ORACLE_TAIL_TOLERANCE: f64 = 1e-8;
/// Maximum total operator count `Σ (h + k)` in a symmetrized product.
pub const MAX_ORACLE_ORDER: u32 = 8;

/// Thermal components lighter than this are folded into the tail.
const COMPONENT_CUTOFF: f64 = 1e-18;

fn working_dim(dim: usize) -> usize {
    dim + (dim / 4).max(16)
}

/// A truncated mixture `ρ = Σ_k w_k |ψ_k⟩⟨ψ_k|`, with the `ψ_k` already
/// projected onto the retained block (so `Σ_k w_k ‖ψ_k‖² = 1 − tail_mass`).
/// Two-mode vectors are flattened with index `n₁·D₂ + n₂`.
#[derive(Debug, Clone)]
pub struct TruncatedState {
    mode_dims: Vec<usize>,
    weights: Vec<f64>,
    vectors: DMatrix<Complex64>,
    tail_mass: f64,
    unitarity_defect: f64,
}

impl TruncatedState {
    fn assemble(mode_dims: Vec<usize>, weights: Vec<f64>, vectors: DMatrix<Complex64>, unitarity_defect: f64) -> Self {
        let retained: f64 = weights
            .iter()
            .zip(vectors.column_iter())
            .map(|(w, c)| w * c.norm_squared())
            .sum();
        TruncatedState { mode_dims, weights, vectors, tail_mass: (1.0 - retained).max(0.0), unitarity_defect }
    }

    /// Total dimension of the retained space.
    pub fn dim(&self) -> usize {
        self.mode_dims.iter().product()
    }

    pub fn mode_dims(&self) -> &[usize] {
        &self.mode_dims
    }

    pub fn modes(&self) -> usize {
        self.mode_dims.len()
    }

    pub fn tail_mass(&self) -> f64 {
        self.tail_mass
    }

    pub fn trace(&self) -> f64 {
        1.0 - self.tail_mass
    }

    /// True when the leakage exceeds [`BUILD_TAIL_TOLERANCE`], either as a
    /// probability or as [`weighted_tail`](Self::weighted_tail).
    pub fn tail_warning(&self) -> bool {
        self.tail_mass > BUILD_TAIL_TOLERANCE || self.weighted_tail() > BUILD_TAIL_TOLERANCE
    }

    /// Leaked probability times the squared truncation edge, relative to the
    /// retained `⟨n(n − 1)⟩` of the total photon number. Leaked population
    /// sits at `n ≥ D`, so this estimates the relative error it causes in `g²`.
    pub fn weighted_tail(&self) -> f64 {
        // below the rounding floor of the retained-trace sum
        if self.tail_mass <= self.dim() as f64 * f64::EPSILON {
            return 0.0;
        }
        let db = if self.modes() == 2 { self.mode_dims[1] } else { 1 };
        let second: f64 = self
            .populations()
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let n = (i / db + i % db) as f64;
                n * (n - 1.0) * p
            })
            .sum();
        let edge = self.mode_dims.iter().copied().max().unwrap_or(0) as f64;
        if second > 0.0 {
            self.tail_mass * edge * edge / second
        } else {
            f64::INFINITY
        }
    }

    /// Worst `max |UᵀU − I|` over the truncated squeeze and displacement
    /// matrices used in the build.
    pub fn unitarity_defect(&self) -> f64 {
        self.unitarity_defect
    }

    pub fn components(&self) -> usize {
        self.weights.len()
    }

    /// Dense density matrix. For two modes this is `D² × D²`.
    pub fn density_matrix(&self) -> DMatrix<Complex64> {
        let mut scaled = self.vectors.clone();
        for (mut col, &w) in scaled.column_iter_mut().zip(&self.weights) {
            col *= Complex64::from(w.sqrt());
        }
        &scaled * scaled.adjoint()
    }

    /// Diagonal of the density matrix.
    pub fn populations(&self) -> Vec<f64> {
        let mut pops = vec![0.0; self.dim()];
        for (col, &w) in self.vectors.column_iter().zip(&self.weights) {
            for (p, c) in pops.iter_mut().zip(col.iter()) {
                *p += w * c.norm_sqr();
            }
        }
        pops
    }

    /// Photon-number distribution of one mode.
    pub fn marginal_populations(&self, mode: usize) -> Result<Vec<f64>> {
        self.check_mode(mode)?;
        let pops = self.populations();
        if self.modes() == 1 {
            return Ok(pops);
        }
        let (da, db) = (self.mode_dims[0], self.mode_dims[1]);
        let mut out = vec![0.0; self.mode_dims[mode]];
        for n1 in 0..da {
            for n2 in 0..db {
                out[if mode == 0 { n1 } else { n2 }] += pops[n1 * db + n2];
            }
        }
        Ok(out)
    }

    /// Reduced single-mode state of a two-mode state.
    pub fn reduced(&self, mode: usize) -> Result<TruncatedState> {
        if self.modes() != 2 {
            return Err(Error::validation("partial trace needs a two-mode state"));
        }
        self.check_mode(mode)?;
        let (da, db) = (self.mode_dims[0], self.mode_dims[1]);
        let (keep, other) = if mode == 0 { (da, db) } else { (db, da) };
        let mut weights = Vec::new();
        let mut cols: Vec<DVector<Complex64>> = Vec::new();
        for (k, &w) in self.weights.iter().enumerate() {
            let psi = self.component_matrix(k);
            for j in 0..other {
                let v: DVector<Complex64> = if mode == 0 {
                    psi.column(j).into_owned()
                } else {
                    psi.row(j).transpose()
                };
                let norm2 = v.norm_squared();
                if norm2 > 1e-300 {
                    weights.push(w * norm2);
                    cols.push(v / Complex64::from(norm2.sqrt()));
                }
            }
        }
        let vectors = DMatrix::from_columns(&cols);
        let mut out = TruncatedState::assemble(vec![keep], weights, vectors, self.unitarity_defect);
        out.tail_mass = self.tail_mass;
        Ok(out)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode >= self.modes() {
            return Err(Error::DimensionMismatch { expected: self.modes(), found: mode + 1 });
        }
        Ok(())
    }

    fn check_tail(&self) -> Result<()> {
        if self.tail_mass > ORACLE_TAIL_TOLERANCE {
            return Err(Error::TailMass { tail_mass: self.tail_mass, tolerance: ORACLE_TAIL_TOLERANCE });
        }
        Ok(())
    }

    /// Component `k` as a matrix with one axis per mode (`D × 1` for one mode).
    fn component_matrix(&self, k: usize) -> DMatrix<Complex64> {
        let col = self.vectors.column(k);
        match self.mode_dims[..] {
            [d] => DMatrix::from_iterator(d, 1, col.iter().copied()),
            [da, db] => DMatrix::from_fn(da, db, |i, j| col[i * db + j]),
            _ => unreachable!("one or two modes"),
        }
    }
}

fn thermal_weights(n_th: f64, limit: usize) -> Vec<f64> {
    let ratio = n_th / (1.0 + n_th);
    let mut out = Vec::new();
    let mut p = 1.0 / (1.0 + n_th);
    while out.len() < limit && p > COMPONENT_CUTOFF {
        out.push(p);
        p *= ratio;
    }
    out
}

fn phases(phi: f64, len: usize) -> Vec<Complex64> {
    (0..len).map(|k| Complex64::from_polar(1.0, phi * k as f64)).collect()
}

/// `½ r (a†² − a²)` on `dim` levels.
fn squeeze_generator(r: f64, dim: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(dim, dim);
    for n in 0..dim.saturating_sub(2) {
        let c = 0.5 * r * (((n + 1) * (n + 2)) as f64).sqrt();
        g[(n + 2, n)] = c;
        g[(n, n + 2)] = -c;
    }
    g
}

/// `|α| (a† − a)` on `dim` levels.
fn displacement_generator(amplitude: f64, dim: usize) -> DMatrix<f64> {
    let mut g = DMatrix::zeros(dim, dim);
    for n in 0..dim - 1 {
        let c = amplitude * ((n + 1) as f64).sqrt();
        g[(n + 1, n)] = c;
        g[(n, n + 1)] = -c;
    }
    g
}

/// `D(α)` on `dim` levels as `R(arg α) exp(|α|(a† − a)) R(−arg α)`.
fn displacement(alpha: Complex64, dim: usize) -> Result<(DMatrix<Complex64>, f64)> {
    if alpha.norm() == 0.0 {
        return Ok((DMatrix::identity(dim, dim), 0.0));
    }
    let real = expm(&displacement_generator(alpha.norm(), dim))?;
    let defect = orthogonality_defect(&real);
    let ph = phases(alpha.arg(), dim);
    Ok((DMatrix::from_fn(dim, dim, |i, j| ph[i] * ph[j].conj() * real[(i, j)]), defect))
}

fn check_dim(dim: usize, max: usize) -> Result<()> {
    if dim < 2 {
        return Err(Error::validation(format!("truncation dimension must be at least 2, got {dim}")));
    }
    if dim > max {
        return Err(Error::validation(format!("truncation dimension {dim} exceeds the supported maximum {max}")));
    }
    Ok(())
}

/// `D(α) S(ξ) ν(N_th) S†(ξ) D†(α)` truncated to `dim` levels.
pub fn build_single(state: &SingleModeState, dim: usize) -> Result<TruncatedState> {
    check_dim(dim, MAX_SINGLE_DIM)?;
    let work = working_dim(dim);
    let weights = thermal_weights(state.n_th(), work);
    let count = weights.len();
    let mut defect = 0.0f64;

    let squeezed: DMatrix<f64> = if state.r() > 0.0 {
        let s = expm(&squeeze_generator(state.r(), work))?;
        defect = defect.max(orthogonality_defect(&s));
        s.columns(0, count).into_owned()
    } else {
        DMatrix::identity(work, count)
    };

    // S(ξ) = R(ψ/2) S(r) R(−ψ/2); the right rotation only rephases |n⟩
    let ph = phases(0.5 * state.psi(), work);
    let rotated = DMatrix::from_fn(work, count, |i, j| ph[i] * squeezed[(i, j)]);
    let (disp, d_defect) = displacement(state.alpha(), work)?;
    defect = defect.max(d_defect);
    let full = disp.rows(0, dim) * rotated;
    Ok(TruncatedState::assemble(vec![dim], weights, full, defect))
}

/// [`build_single`] starting at [`DEFAULT_SINGLE_DIM`], doubling the
/// truncation while [`TruncatedState::tail_warning`] is raised.
pub fn build_single_auto(state: &SingleModeState) -> Result<TruncatedState> {
    let mut dim = DEFAULT_SINGLE_DIM;
    loop {
        let ts = build_single(state, dim)?;
        if !ts.tail_warning() || dim >= MAX_SINGLE_DIM {
            return Ok(ts);
        }
        dim = (2 * dim).min(MAX_SINGLE_DIM);
    }
}

/// `exp[r(a†b† − ab)]` restricted to the chain `{|j + k, j⟩}` (`k ≥ 0`) or
/// `{|j, j − k⟩}` (`k < 0`), both indexed by `j`.
fn chain_propagator(r: f64, offset: usize, work: usize) -> Result<DMatrix<f64>> {
    let len = work - offset;
    let mut g = DMatrix::zeros(len, len);
    for j in 0..len - 1 {
        let c = r * (((j + offset + 1) * (j + 1)) as f64).sqrt();
        g[(j + 1, j)] = c;
        g[(j, j + 1)] = -c;
    }
    expm(&g)
}

/// `(D(α) ⊗ D(β)) S₂(ξ) (ν₁ ⊗ ν₂) S₂†(ξ) (D(α) ⊗ D(β))†` with `dim` levels
/// per mode.
pub fn build_two_mode(state: &TwoModeState, dim: usize) -> Result<TruncatedState> {
    check_dim(dim, MAX_TWO_MODE_DIM)?;
    let work = working_dim(dim);
    let wa = thermal_weights(state.n_th1(), work);
    let wb = thermal_weights(state.n_th2(), work);

    let (da, def_a) = displacement(state.alpha(), work)?;
    let (db, def_b) = displacement(state.beta(), work)?;
    let mut defect = def_a.max(def_b);
    let da = da.rows(0, dim).into_owned();
    let db = db.rows(0, dim).into_owned();
    // S₂(ξ) = R_a(ψ) S₂(r) R_a(−ψ)
    let ph = phases(state.psi(), work);

    let mut chains: HashMap<i64, DMatrix<f64>> = HashMap::new();
    let mut weights = Vec::new();
    let mut cols: Vec<DVector<Complex64>> = Vec::new();
    for (n1, &p1) in wa.iter().enumerate() {
        for (n2, &p2) in wb.iter().enumerate() {
            let w = p1 * p2;
            if w <= COMPONENT_CUTOFF {
                continue;
            }
            let k = n1 as i64 - n2 as i64;
            let offset = k.unsigned_abs() as usize;
            let chain = match chains.entry(k) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => {
                    let c = chain_propagator(state.r(), offset, work)?;
                    defect = defect.max(orthogonality_defect(&c));
                    e.insert(c)
                }
            };
            let start = n1.min(n2);
            let len = work - offset;
            let (row_a, row_b): (Vec<usize>, Vec<usize>) = if k >= 0 {
                ((0..len).map(|j| j + offset).collect(), (0..len).collect())
            } else {
                ((0..len).collect(), (0..len).map(|j| j + offset).collect())
            };
            // Ψ' = D_a Ψ D_bᵀ with Ψ = Σ_j c_j |m_a(j)⟩⟨m_b(j)|
            let left = DMatrix::from_fn(dim, len, |i, j| {
                da[(i, row_a[j])] * ph[row_a[j]] * chain[(j, start)]
            });
            let right = DMatrix::from_fn(len, dim, |j, i| db[(i, row_b[j])]);
            let psi = left * right;
            weights.push(w);
            cols.push(DVector::from_iterator(dim * dim, psi.transpose().iter().copied()));
        }
    }
    let vectors = DMatrix::from_columns(&cols);
    Ok(TruncatedState::assemble(vec![dim, dim], weights, vectors, defect))
}

/// [`build_two_mode`] at [`DEFAULT_TWO_MODE_DIM`], escalating to
/// [`MAX_TWO_MODE_DIM`] if [`TruncatedState::tail_warning`] is raised.
pub fn build_two_mode_auto(state: &TwoModeState) -> Result<TruncatedState> {
    let ts = build_two_mode(state, DEFAULT_TWO_MODE_DIM)?;
    if ts.tail_warning() {
        return build_two_mode(state, MAX_TWO_MODE_DIM);
    }
    Ok(ts)
}

/// Which intensity the oracle correlates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModePartition {
    /// The whole state: single-mode `g²` or the total two-mode intensity.
    Whole,
    /// A single mode of the state.
    Mode(usize),
}

fn factorial_moments(pops: &[f64]) -> (f64, f64) {
    pops.iter().enumerate().fold((0.0, 0.0), |(m1, m2), (n, &p)| {
        let n = n as f64;
        (m1 + n * p, m2 + n * (n - 1.0) * p)
    })
}

/// `g²(0)` straight from the photon-number distribution, normalized to the
/// retained trace.
pub fn g2_oracle(ts: &TruncatedState, partition: ModePartition) -> Result<G2Result> {
    ts.check_tail()?;
    let trace: f64 = ts.populations().iter().sum();
    let (mean, second) = match (partition, ts.modes()) {
        (ModePartition::Mode(m), _) => factorial_moments(&ts.marginal_populations(m)?),
        (ModePartition::Whole, 1) => factorial_moments(&ts.populations()),
        (ModePartition::Whole, _) => {
            let db = ts.mode_dims[1];
            let mut mean = 0.0;
            let mut second = 0.0;
            for (idx, p) in ts.populations().into_iter().enumerate() {
                let (n1, n2) = ((idx / db) as f64, (idx % db) as f64);
                mean += (n1 + n2) * p;
                second += (n1 * (n1 - 1.0) + n2 * (n2 - 1.0) + 2.0 * n1 * n2) * p;
            }
            (mean, second)
        }
    };
    let (mean, second) = (mean / trace, second / trace);
    if !(mean >= MIN_MEAN_PHOTONS) {
        return Err(Error::undefined(format!("g2 undefined for zero mean photon number (<N> = {mean:e})")));
    }
    G2Result::exact(second / (mean * mean), G2Method::Oracle)
}

/// `⟨Π_k N̂_k^{p_k}⟩` from the number distribution, normalized to the trace.
pub fn number_moment_oracle(ts: &TruncatedState, powers: &[u32]) -> Result<f64> {
    ts.check_tail()?;
    if powers.len() != ts.modes() {
        return Err(Error::DimensionMismatch { expected: ts.modes(), found: powers.len() });
    }
    let pops = ts.populations();
    let trace: f64 = pops.iter().sum();
    let db = if ts.modes() == 2 { ts.mode_dims[1] } else { 1 };
    let mut acc = 0.0;
    for (idx, p) in pops.iter().enumerate() {
        let ns = [idx / db, idx % db];
        let weight: f64 = powers
            .iter()
            .zip(ns)
            .map(|(&pw, n)| (n as f64).powi(pw as i32))
            .product();
        acc += weight * p;
    }
    Ok(acc / trace)
}

/// `a†` on the row index, dropping the top level.
fn raise(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for n in 0..m.nrows() - 1 {
        let c = ((n + 1) as f64).sqrt();
        out.row_mut(n + 1).copy_from(&(m.row(n) * Complex64::from(c)));
    }
    out
}

/// `a` on the row index.
fn lower(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let mut out = DMatrix::zeros(m.nrows(), m.ncols());
    for n in 0..m.nrows() - 1 {
        let c = ((n + 1) as f64).sqrt();
        out.row_mut(n).copy_from(&(m.row(n + 1) * Complex64::from(c)));
    }
    out
}

/// Sum over every distinct word with `h` creation and `k` annihilation
/// operators (acting on the row index), divided by the number of words.
fn symmetrized_word_sum(m: &DMatrix<Complex64>, h: usize, k: usize) -> DMatrix<Complex64> {
    // table[i][j]: sum of all words with i raisings and j lowerings
    let mut table: Vec<Vec<DMatrix<Complex64>>> = Vec::with_capacity(h + 1);
    for i in 0..=h {
        let mut row = Vec::with_capacity(k + 1);
        for j in 0..=k {
            let v = match (i, j) {
                (0, 0) => m.clone(),
                (0, _) => lower(&row[j - 1]),
                (_, 0) => raise(&table[i - 1][0]),
                _ => raise(&table[i - 1][j]) + lower(&row[j - 1]),
            };
            row.push(v);
        }
        table.push(row);
    }
    let words = binomial(h + k, h);
    table.swap_remove(h).swap_remove(k) / Complex64::from(words)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `⟨Π_k [(a_k†)^{h_k} a_k^{m_k}]_s⟩` with `orders[k] = (h_k, m_k)`, by explicit
/// symmetrization in the truncated basis. Normalized to the retained trace.
pub fn symmetric_ordered_moment(ts: &TruncatedState, orders: &[(u32, u32)]) -> Result<Complex64> {
    ts.check_tail()?;
    if orders.len() != ts.modes() {
        return Err(Error::DimensionMismatch { expected: ts.modes(), found: orders.len() });
    }
    let total: u32 = orders.iter().map(|&(h, k)| h + k).sum();
    if total > MAX_ORACLE_ORDER {
        return Err(Error::UnsupportedOrder(format!("total operator count {total} exceeds {MAX_ORACLE_ORDER}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (c, &w) in ts.weights.iter().enumerate() {
        let psi = ts.component_matrix(c);
        let (rows, cols) = psi.shape();
        // zero padding keeps every intermediate ladder step exact
        let (ha, ka) = (orders[0].0 as usize, orders[0].1 as usize);
        let pad_a = ha.max(ka) + 1;
        let mut work = DMatrix::zeros(rows + pad_a, cols);
        work.rows_mut(0, rows).copy_from(&psi);
        let mut work = symmetrized_word_sum(&work, ha, ka);
        if let Some(&(hb, kb)) = orders.get(1) {
            let (hb, kb) = (hb as usize, kb as usize);
            let pad_b = hb.max(kb) + 1;
            let mut t = DMatrix::zeros(cols + pad_b, rows + pad_a);
            t.rows_mut(0, cols).copy_from(&work.transpose());
            work = symmetrized_word_sum(&t, hb, kb).transpose();
        }
        let overlap: Complex64 = psi
            .iter()
            .enumerate()
            .map(|(idx, v)| v.conj() * work[(idx % rows, idx / rows)])
            .sum();
        acc += overlap * w;
    }
    let trace: f64 = ts.populations().iter().sum();
    Ok(acc / trace)
}

/// `⟨Π_k [(a_k†)^{n_k} a_k^{n_k}]_s⟩`, the oracle counterpart of
/// [`crate::moments::gaussian_symmetric_moment`].
pub fn symmetric_moment_oracle(ts: &TruncatedState, orders: &[u32]) -> Result<f64> {
    let pairs: Vec<(u32, u32)> = orders.iter().map(|&n| (n, n)).collect();
    let v = symmetric_ordered_moment(ts, &pairs)?;
    if v.im.abs() > 1e-9 * v.re.abs().max(1.0) {
        return Err(Error::Numerical(format!("symmetric moment has imaginary part {:e}", v.im)));
    }
    Ok(v.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::g2::{g2_single_closed_form, g2_single_state, g2_two_mode_state};
    use crate::gaussian::{cm_single, SqueezingParam};
    use crate::moments::gaussian_symmetric_moment;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn vacuum_is_ground_state() {
        let ts = build_single(&SingleModeState::vacuum(), 10).unwrap();
        assert!(ts.tail_mass() < 1e-14);
        let rho = ts.density_matrix();
        for i in 0..10 {
            for j in 0..10 {
                let target = if i == 0 && j == 0 { 1.0 } else { 0.0 };
                assert!((rho[(i, j)] - Complex64::from(target)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn coherent_is_poissonian() {
        let ts = build_single(&SingleModeState::coherent(Complex64::new(0.6, 0.8)).unwrap(), 50).unwrap();
        let pops = ts.populations();
        let mut poisson = (-1.0f64).exp();
        for (n, p) in pops.iter().enumerate() {
            assert!((p - poisson).abs() < 1e-12, "n = {n}");
            poisson /= (n + 1) as f64;
        }
    }

    #[test]
    fn squeezed_vacuum_even_only() {
        let ts = build_single(&SingleModeState::squeezed_vacuum(0.5, 1.0).unwrap(), 100).unwrap();
        let pops = ts.populations();
        assert!(pops.iter().skip(1).step_by(2).all(|&p| p < 1e-13));
        // p₀ = 1/cosh r
        assert_relative_eq!(pops[0], 1.0 / 0.5f64.cosh(), epsilon = 1e-12);
    }

    #[test]
    fn density_matrix_is_hermitian_psd() {
        let s = SingleModeState::new(Complex64::new(1.0, -0.5), SqueezingParam::new(0.4, 2.0).unwrap(), 0.2).unwrap();
        let ts = build_single(&s, 60).unwrap();
        let rho = ts.density_matrix();
        assert!((&rho - rho.adjoint()).iter().all(|z| z.norm() < 1e-12));
        let eig = rho.symmetric_eigen();
        assert!(eig.eigenvalues.iter().all(|&e| e > -1e-10));
        assert_relative_eq!(ts.trace(), 1.0, epsilon = 1e-10);
        assert!(ts.unitarity_defect() < 1e-10);
    }

    #[test]
    fn limits_of_the_oracle() {
        let coh = build_single(&SingleModeState::real(2.0, 0.0, 0.0, 0.0).unwrap(), 80).unwrap();
        assert_relative_eq!(g2_oracle(&coh, ModePartition::Whole).unwrap().value, 1.0, epsilon = 1e-10);
        let th = build_single(&SingleModeState::thermal(0.5).unwrap(), 100).unwrap();
        assert_relative_eq!(g2_oracle(&th, ModePartition::Whole).unwrap().value, 2.0, epsilon = 1e-10);
        let vac = build_single(&SingleModeState::vacuum(), 10).unwrap();
        assert!(matches!(g2_oracle(&vac, ModePartition::Whole), Err(Error::Undefined(_))));
    }

    #[test]
    fn benchmark_state_matches_closed_form() {
        let s = SingleModeState::real(2.0, 0.5, PI, 0.14).unwrap();
        let ts = build_single(&s, DEFAULT_SINGLE_DIM).unwrap();
        let oracle = g2_oracle(&ts, ModePartition::Whole).unwrap();
        assert_eq!(oracle.method, G2Method::Oracle);
        let exact = g2_single_closed_form(&s).unwrap().value;
        assert!((oracle.value - exact).abs() < 1e-6 * exact);
    }

    #[test]
    fn complex_amplitude_matches_pipeline() {
        let s = SingleModeState::new(Complex64::from_polar(1.5, 0.7), SqueezingParam::new(0.6, 2.2).unwrap(), 0.1).unwrap();
        let ts = build_single(&s, 150).unwrap();
        let oracle = g2_oracle(&ts, ModePartition::Whole).unwrap().value;
        let pipe = g2_single_state(&s).unwrap().value;
        assert!((oracle - pipe).abs() < 1e-8 * pipe);
    }

    #[test]
    fn tail_mass_flags_short_truncation() {
        let s = SingleModeState::real(3.0, 1.0, 0.0, 0.5).unwrap();
        let ts = build_single(&s, 20).unwrap();
        assert!(ts.tail_warning());
        assert!(matches!(g2_oracle(&ts, ModePartition::Whole), Err(Error::TailMass { .. })));
        assert!(build_single(&s, 1).is_err());
    }

    #[test]
    fn symmetric_moments_low_orders() {
        let vac = build_single(&SingleModeState::vacuum(), 10).unwrap();
        assert_relative_eq!(symmetric_moment_oracle(&vac, &[1]).unwrap(), 0.5, epsilon = 1e-14);
        let n = 0.3;
        let th = build_single(&SingleModeState::thermal(n).unwrap(), 80).unwrap();
        assert_relative_eq!(symmetric_moment_oracle(&th, &[2]).unwrap(), 2.0 * (n + 0.5).powi(2), epsilon = 1e-12);
        // ⟨[a†]_s⟩ = α*
        let coh = build_single(&SingleModeState::coherent(Complex64::new(0.3, 0.4)).unwrap(), 40).unwrap();
        let v = symmetric_ordered_moment(&coh, &[(1, 0)]).unwrap();
        assert!((v - Complex64::new(0.3, -0.4)).norm() < 1e-12);
        assert!(symmetric_ordered_moment(&coh, &[(5, 4)]).is_err());
    }

    #[test]
    fn order_three_matches_gaussian_generator() {
        let s = SingleModeState::real(1.2, 0.4, PI, 0.1).unwrap();
        let ts = build_single(&s, 120).unwrap();
        let (cm, x) = cm_single(&s);
        for n in 1..=4 {
            let oracle = symmetric_moment_oracle(&ts, &[n]).unwrap();
            let gauss = gaussian_symmetric_moment(&cm, &x, &[n]).unwrap();
            assert!((oracle - gauss).abs() < 1e-8 * gauss, "order {n}: {oracle} vs {gauss}");
        }
    }

    #[test]
    fn two_mode_vacuum() {
        let ts = build_two_mode(&TwoModeState::symmetric(0.0, 0.0, 0.0, 0.0).unwrap(), 8).unwrap();
        let pops = ts.populations();
        assert_relative_eq!(pops[0], 1.0, epsilon = 1e-14);
        assert!(pops[1..].iter().all(|&p| p < 1e-14));
    }

    #[test]
    fn two_mode_squeezed_vacuum_schmidt_weights() {
        let r = 0.5f64;
        let ts = build_two_mode(&TwoModeState::symmetric(0.0, r, 0.8, 0.0).unwrap(), 40).unwrap();
        assert_eq!(ts.components(), 1);
        let pops = ts.populations();
        for n1 in 0..40 {
            for n2 in 0..40 {
                let expected = if n1 == n2 { r.tanh().powi(2 * n1 as i32) / r.cosh().powi(2) } else { 0.0 };
                assert!((pops[n1 * 40 + n2] - expected).abs() < 1e-13);
            }
        }
        // Schmidt coefficients carry the squeezing phase
        let psi = ts.vectors.column(0);
        let c1 = psi[41] / psi[0];
        assert!((c1 - Complex64::from_polar(r.tanh(), 0.8)).norm() < 1e-12);

        let reduced = ts.reduced(1).unwrap();
        let th = r.sinh().powi(2);
        let pops = reduced.populations();
        for (n, p) in pops.iter().enumerate().take(30) {
            let expected = th.powi(n as i32) / (1.0 + th).powi(n as i32 + 1);
            assert!((p - expected).abs() < 1e-13);
        }
        assert_relative_eq!(g2_oracle(&reduced, ModePartition::Whole).unwrap().value, 2.0, epsilon = 1e-10);
    }

    #[test]
    fn two_mode_matches_closed_form() {
        for &(a, r, psi, n) in &[(1.0, 0.3, PI, 0.0), (1.5, 0.5, PI, 0.1), (0.8, 0.4, 1.0, 0.2)] {
            let s = TwoModeState::symmetric(a, r, psi, n).unwrap();
            let ts = build_two_mode(&s, 40).unwrap();
            let oracle = g2_oracle(&ts, ModePartition::Whole).unwrap().value;
            let exact = g2_two_mode_state(&s).unwrap().value;
            assert!((oracle - exact).abs() < 1e-8 * exact, "{oracle} vs {exact}");
        }
    }

    #[test]
    fn two_mode_product_moment() {
        let s = TwoModeState::new(
            Complex64::new(0.7, 0.2),
            Complex64::new(-0.4, 0.5),
            SqueezingParam::new(0.3, 2.5).unwrap(),
            0.1,
            0.05,
        )
        .unwrap();
        let ts = build_two_mode(&s, 40).unwrap();
        let (cm, x) = crate::gaussian::cm_two_mode(&s);
        for orders in [[1, 1], [2, 1], [1, 2], [2, 2]] {
            let oracle = symmetric_moment_oracle(&ts, &orders).unwrap();
            let gauss = gaussian_symmetric_moment(&cm, &x, &orders).unwrap();
            assert!((oracle - gauss).abs() < 1e-9 * gauss, "{orders:?}: {oracle} vs {gauss}");
        }
        let n_ab = number_moment_oracle(&ts, &[1, 1]).unwrap();
        let m11 = gaussian_symmetric_moment(&cm, &x, &[1, 1]).unwrap();
        let m10 = gaussian_symmetric_moment(&cm, &x, &[1, 0]).unwrap();
        let m01 = gaussian_symmetric_moment(&cm, &x, &[0, 1]).unwrap();
        assert!((n_ab - (m11 - 0.5 * m10 - 0.5 * m01 + 0.25)).abs() < 1e-10);
    }

    #[test]
    fn two_mode_dimension_cap() {
        let s = TwoModeState::symmetric(0.0, 0.1, 0.0, 0.0).unwrap();
        assert!(matches!(build_two_mode(&s, MAX_TWO_MODE_DIM + 1), Err(Error::Validation(_))));
    }

    #[test]
    fn truncation_convergence() {
        let s = SingleModeState::real(3.0, 1.0, PI, 0.5).unwrap();
        let a = g2_oracle(&build_single(&s, 200).unwrap(), ModePartition::Whole).unwrap().value;
        let b = g2_oracle(&build_single(&s, 400).unwrap(), ModePartition::Whole).unwrap().value;
        assert!((a - b).abs() < 1e-8);
    }
}
