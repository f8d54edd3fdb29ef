//! Parametric Gaussian states and their covariance-matrix representation.
//!
//! Conventions used throughout the crate:
//!
//! * quadratures are `x_θ = (a† e^{iθ} + a e^{-iθ}) / √2`, so `q = x_0`,
//!   `p = x_{π/2}` and the vacuum covariance matrix is `½·I`;
//! * the covariance matrix holds symmetrized covariances
//!   `σ_hk = ½⟨R_h R_k + R_k R_h⟩ − ⟨R_h⟩⟨R_k⟩` with `R = (q₁, p₁[, q₂, p₂])`;
//! * single-mode squeezing is `S(ξ) = exp[½ ξ a†² − ½ ξ* a²]` and two-mode
//!   squeezing is `S₂(ξ) = exp(ξ a†b† − ξ* a b)`, with `ξ = r e^{iψ}`.
//!
//! With these conventions `ψ = π` and real `α` is amplitude squeezing: the
//! reduced-noise quadrature is the one carrying the displacement.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Quadrature variance of the vacuum.
pub const VACUUM_VARIANCE: f64 = 0.5;

/// Tag written into every file the crate produces.
pub const CONVENTION_TAG: &str = "vacuum-variance = 1/2";

/// Slack allowed below `½` for symplectic eigenvalues.
pub const PHYSICALITY_TOL: f64 = 1e-9;

const SYMMETRY_TOL: f64 = 1e-12;

/// Squeezing parameter `ξ = r e^{iψ}` with `r ≥ 0` and `ψ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingParam {
    r: f64,
    psi: f64,
}

impl SqueezingParam {
    pub fn new(r: f64, psi: f64) -> Result<Self> {
        if !r.is_finite() || r < 0.0 {
            return Err(Error::validation(format!(
                "squeezing magnitude must be finite and non-negative, got {r}"
            )));
        }
        if !psi.is_finite() {
            return Err(Error::validation(format!("squeezing phase must be finite, got {psi}")));
        }
        Ok(SqueezingParam { r, psi: normalize_angle(psi) })
    }

    pub fn none() -> Self {
        SqueezingParam { r: 0.0, psi: 0.0 }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::from_polar(self.r, self.psi)
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid rounds tiny negative inputs up to exactly 2π
    if t >= TAU {
        0.0
    } else {
        t
    }
}

fn check_thermal(n: f64, name: &str) -> Result<()> {
    if !n.is_finite() || n < 0.0 {
        return Err(Error::validation(format!(
            "{name} must be finite and non-negative, got {n}"
        )));
    }
    Ok(())
}

fn check_amplitude(z: Complex64, name: &str) -> Result<()> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::validation(format!("{name} must be finite, got {z}")));
    }
    Ok(())
}

/// Displaced squeezed thermal state `D(α) S(ξ) ν(N_th) S†(ξ) D†(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleModeState {
    alpha: Complex64,
    xi: SqueezingParam,
    n_th: f64,
}

impl SingleModeState {
    pub fn new(alpha: Complex64, xi: SqueezingParam, n_th: f64) -> Result<Self> {
        check_amplitude(alpha, "alpha")?;
        check_thermal(n_th, "thermal photon number")?;
        Ok(SingleModeState { alpha, xi, n_th })
    }

    /// Real displacement, squeezing `(r, ψ)` and thermal occupation.
    pub fn real(alpha: f64, r: f64, psi: f64, n_th: f64) -> Result<Self> {
        Self::new(Complex64::new(alpha, 0.0), SqueezingParam::new(r, psi)?, n_th)
    }

    pub fn vacuum() -> Self {
        SingleModeState { alpha: Complex64::new(0.0, 0.0), xi: SqueezingParam::none(), n_th: 0.0 }
    }

    pub fn coherent(alpha: Complex64) -> Result<Self> {
        Self::new(alpha, SqueezingParam::none(), 0.0)
    }

    pub fn thermal(n_th: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), SqueezingParam::none(), n_th)
    }

    pub fn squeezed_vacuum(r: f64, psi: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), SqueezingParam::new(r, psi)?, 0.0)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn squeezing(&self) -> SqueezingParam {
        self.xi
    }

    pub fn r(&self) -> f64 {
        self.xi.r
    }

    pub fn psi(&self) -> f64 {
        self.xi.psi
    }

    pub fn n_th(&self) -> f64 {
        self.n_th
    }

    /// Mean photon number `⟨a†a⟩`.
    pub fn mean_photon_number(&self) -> f64 {
        let k = 1.0 + 2.0 * self.n_th;
        0.5 * (k * (2.0 * self.xi.r).cosh() - 1.0) + self.alpha.norm_sqr()
    }
}

/// Two-mode squeezed thermal state
/// `D_a(α) D_b(β) S₂(ξ) [ν(N₁) ⊗ ν(N₂)] S₂†(ξ) D_b†(β) D_a†(α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoModeState {
    alpha: Complex64,
    beta: Complex64,
    xi: SqueezingParam,
    n_th1: f64,
    n_th2: f64,
}

impl TwoModeState {
    pub fn new(
        alpha: Complex64,
        beta: Complex64,
        xi: SqueezingParam,
        n_th1: f64,
        n_th2: f64,
    ) -> Result<Self> {
        check_amplitude(alpha, "alpha")?;
        check_amplitude(beta, "beta")?;
        check_thermal(n_th1, "thermal photon number of mode 1")?;
        check_thermal(n_th2, "thermal photon number of mode 2")?;
        Ok(TwoModeState { alpha, beta, xi, n_th1, n_th2 })
    }

    /// Symmetric configuration `α = β` real, `N₁ = N₂`.
    pub fn symmetric(alpha: f64, r: f64, psi: f64, n_th: f64) -> Result<Self> {
        let a = Complex64::new(alpha, 0.0);
        Self::new(a, a, SqueezingParam::new(r, psi)?, n_th, n_th)
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn squeezing(&self) -> SqueezingParam {
        self.xi
    }

    pub fn r(&self) -> f64 {
        self.xi.r
    }

    pub fn psi(&self) -> f64 {
        self.xi.psi
    }

    pub fn n_th1(&self) -> f64 {
        self.n_th1
    }

    pub fn n_th2(&self) -> f64 {
        self.n_th2
    }
}

/// Symmetric `2×2` or `4×4` quadrature covariance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    m: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Validates shape, finiteness and symmetry. Physicality is checked
    /// separately by [`check_physical`].
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n || (n != 2 && n != 4) {
            return Err(Error::validation(format!(
                "covariance matrix must be 2x2 or 4x4, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("covariance matrix has non-finite entries"));
        }
        let scale = m.amax().max(1.0);
        for i in 0..n {
            for j in (i + 1)..n {
                if (m[(i, j)] - m[(j, i)]).abs() > SYMMETRY_TOL * scale {
                    return Err(Error::validation(format!(
                        "covariance matrix is not symmetric at ({i}, {j}): {} vs {}",
                        m[(i, j)],
                        m[(j, i)]
                    )));
                }
            }
        }
        Ok(CovarianceMatrix { m })
    }

    pub fn from_row_slice(dim: usize, data: &[f64]) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        Self::new(DMatrix::from_row_slice(dim, dim, data))
    }

    pub fn vacuum(modes: usize) -> Self {
        CovarianceMatrix { m: DMatrix::identity(2 * modes, 2 * modes) * VACUUM_VARIANCE }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn modes(&self) -> usize {
        self.m.nrows() / 2
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn det(&self) -> f64 {
        self.m.determinant()
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        let n = self.dim();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.m[(i, j)]).collect()
    }
}

/// Vector of quadrature means `(⟨q₁⟩, ⟨p₁⟩[, ⟨q₂⟩, ⟨p₂⟩])`.
#[derive(Debug, Clone, PartialEq)]
pub struct FirstMoments {
    v: DVector<f64>,
}

impl FirstMoments {
    pub fn new(v: DVector<f64>) -> Result<Self> {
        if v.len() != 2 && v.len() != 4 {
            return Err(Error::validation(format!(
                "first-moment vector must have 2 or 4 entries, got {}",
                v.len()
            )));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::validation("first-moment vector has non-finite entries"));
        }
        Ok(FirstMoments { v })
    }

    pub fn from_slice(data: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(data))
    }

    pub fn zeros(modes: usize) -> Self {
        FirstMoments { v: DVector::zeros(2 * modes) }
    }

    /// Means of a mode with coherent amplitude `α`: `√2 (Re α, Im α)`.
    fn push_amplitude(out: &mut Vec<f64>, alpha: Complex64) {
        out.push(std::f64::consts::SQRT_2 * alpha.re);
        out.push(std::f64::consts::SQRT_2 * alpha.im);
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn get(&self, i: usize) -> f64 {
        self.v[i]
    }

    pub fn vector(&self) -> &DVector<f64> {
        &self.v
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.v.iter().copied().collect()
    }
}

/// Covariance matrix and first moments of a single-mode state.
pub fn cm_single(state: &SingleModeState) -> (CovarianceMatrix, FirstMoments) {
    let k = 1.0 + 2.0 * state.n_th;
    let two_r = 2.0 * state.r();
    let (s2, c2) = (two_r.sinh(), two_r.cosh());
    let (sin_psi, cos_psi) = state.psi().sin_cos();
    let qq = 0.5 * k * (c2 + s2 * cos_psi);
    let pp = 0.5 * k * (c2 - s2 * cos_psi);
    let qp = 0.5 * k * s2 * sin_psi;
    let cm = CovarianceMatrix { m: DMatrix::from_row_slice(2, 2, &[qq, qp, qp, pp]) };
    let mut x = Vec::with_capacity(2);
    FirstMoments::push_amplitude(&mut x, state.alpha);
    (cm, FirstMoments { v: DVector::from_vec(x) })
}

/// Covariance matrix and first moments of a two-mode squeezed thermal state.
///
/// The matrix has the block form `½ [[A·I, C·R], [C·R, B·I]]` with
/// `R = [[cos ψ, sin ψ], [sin ψ, −cos ψ]]`.
pub fn cm_two_mode(state: &TwoModeState) -> (CovarianceMatrix, FirstMoments) {
    let r = state.r();
    let (n1, n2) = (state.n_th1, state.n_th2);
    let (sh, ch) = (r.sinh(), r.cosh());
    let c2 = (2.0 * r).cosh();
    let a = c2 + 2.0 * (n1 * ch * ch + n2 * sh * sh);
    let b = c2 + 2.0 * (n1 * sh * sh + n2 * ch * ch);
    let c = (1.0 + n1 + n2) * (2.0 * r).sinh();
    let (sin_psi, cos_psi) = state.psi().sin_cos();
    let (e, f) = (0.5 * c * cos_psi, 0.5 * c * sin_psi);
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        0.5 * a, 0.0,     e,       f,
        0.0,     0.5 * a, f,       -e,
        e,       f,       0.5 * b, 0.0,
        f,       -e,      0.0,     0.5 * b,
    ]);
    let mut x = Vec::with_capacity(4);
    FirstMoments::push_amplitude(&mut x, state.alpha);
    FirstMoments::push_amplitude(&mut x, state.beta);
    (CovarianceMatrix { m }, FirstMoments { v: DVector::from_vec(x) })
}

/// Purity `(1 + 2N_th)⁻¹` of a single-mode Gaussian state.
pub fn purity(state: &SingleModeState) -> f64 {
    1.0 / (1.0 + 2.0 * state.n_th)
}

/// `𝒯(r, N_th) = 1 − (1 + 2N_th) e^{−2r}`.
///
/// Returned raw: positive values are the nonclassical depth of the displaced
/// squeezed thermal state, zero or negative values mean the state is
/// classical. Negative `r` is accepted (the two-mode threshold uses
/// `𝒯(−r, N_th)`). Evaluated as `−expm1(ln(1 + 2N_th) − 2r)` so that it is
/// exactly zero at `r = ½ ln(1 + 2N_th)`.
pub fn nonclassical_depth(r: f64, n_th: f64) -> f64 {
    0.0 - ((1.0 + 2.0 * n_th).ln() - 2.0 * r).exp_m1()
}

/// Squeezing `r_Th = ½ ln(1 + 2N_th)` at which `𝒯` vanishes.
pub fn classical_squeezing_bound(n_th: f64) -> f64 {
    0.5 * (1.0 + 2.0 * n_th).ln()
}

/// Result of a physicality check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Physicality {
    pub physical: bool,
    /// Symplectic eigenvalues in ascending order; empty if the matrix is not
    /// positive definite.
    pub symplectic_eigenvalues: Vec<f64>,
}

/// Checks the uncertainty relation `σ + (i/2)Ω ≥ 0` through the symplectic
/// eigenvalues (all must be `≥ ½ − 1e−9`).
/// Symplectic eigenvalues as the singular values of `σ^{1/2} Ω σ^{1/2}`.
/// Both come from symmetric eigenproblems, so degenerate pairs (pure
/// two-mode states) keep full precision.
fn symplectic_spectrum(m: &DMatrix<f64>) -> Vec<f64> {
    let n = m.nrows();
    let eig = m.clone().symmetric_eigen();
    let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
    let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
    let mut omega = DMatrix::zeros(n, n);
    for k in 0..n / 2 {
        omega[(2 * k, 2 * k + 1)] = 1.0;
        omega[(2 * k + 1, 2 * k)] = -1.0;
    }
    let a = &root * omega * &root;
    let mut squares: Vec<f64> = (a.transpose() * &a).symmetric_eigen().eigenvalues.iter().copied().collect();
    squares.sort_by(|x, y| x.total_cmp(y));
    // each ν² appears twice
    squares.chunks(2).map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt()).collect()
}

pub fn check_physical(cm: &CovarianceMatrix) -> Physicality {
    let m = &cm.m;
    let positive_definite = m.clone().cholesky().is_some();
    if !positive_definite {
        return Physicality { physical: false, symplectic_eigenvalues: Vec::new() };
    }
    let mut nus = match cm.dim() {
        2 => vec![m.determinant().max(0.0).sqrt()],
        _ => symplectic_spectrum(m),
    };
    nus.sort_by(|a, b| a.total_cmp(b));
    let physical = nus.iter().all(|&nu| nu >= VACUUM_VARIANCE - PHYSICALITY_TOL);
    Physicality { physical, symplectic_eigenvalues: nus }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn vacuum_cm() {
        let (cm, x) = cm_single(&SingleModeState::vacuum());
        assert_eq!(cm.to_row_major(), vec![0.5, 0.0, 0.0, 0.5]);
        assert_eq!(x.to_vec(), vec![0.0, 0.0]);
    }

    #[test]
    fn amplitude_squeezed_thermal_cm() {
        // ψ = π squeezes q, the quadrature carrying a real displacement
        let s = SingleModeState::real(0.0, 0.5, PI, 0.14).unwrap();
        let (cm, _) = cm_single(&s);
        assert_relative_eq!(cm.get(0, 0), 0.64 * (-1.0f64).exp(), epsilon = 1e-12);
        assert_relative_eq!(cm.get(1, 1), 0.64 * 1.0f64.exp(), epsilon = 1e-12);
        assert!(cm.get(0, 1).abs() < 1e-15);
        assert_relative_eq!(cm.get(0, 0), 0.235_443, epsilon = 1e-6);
        assert_relative_eq!(cm.get(1, 1), 1.739_700, epsilon = 1e-6);
    }

    #[test]
    fn thermal_coherent_cm() {
        let s = SingleModeState::real(2.0, 0.0, 0.0, 0.15).unwrap();
        let (cm, x) = cm_single(&s);
        assert_relative_eq!(cm.get(0, 0), 0.65, epsilon = 1e-15);
        assert_relative_eq!(cm.get(1, 1), 0.65, epsilon = 1e-15);
        assert_relative_eq!(x.get(0), 2.0 * std::f64::consts::SQRT_2, epsilon = 1e-15);
        assert_eq!(x.get(1), 0.0);
    }

    #[test]
    fn two_mode_vacuum_and_squeezed() {
        let vac = TwoModeState::symmetric(0.0, 0.0, 0.0, 0.0).unwrap();
        let (cm, _) = cm_two_mode(&vac);
        assert_eq!(cm.matrix(), CovarianceMatrix::vacuum(2).matrix());

        let tms = TwoModeState::symmetric(0.0, 0.5, PI, 0.0).unwrap();
        let (cm, _) = cm_two_mode(&tms);
        let (ch, sh) = (1.0f64.cosh(), 1.0f64.sinh());
        assert_relative_eq!(cm.get(0, 0), 0.5 * ch, epsilon = 1e-15);
        assert_relative_eq!(cm.get(3, 3), 0.5 * ch, epsilon = 1e-15);
        assert_relative_eq!(cm.get(0, 2), -0.5 * sh, epsilon = 1e-15);
        assert_relative_eq!(cm.get(1, 3), 0.5 * sh, epsilon = 1e-15);
        let phys = check_physical(&cm);
        assert!(phys.physical, "{:?} {}", phys, cm.matrix());
        for nu in phys.symplectic_eigenvalues {
            assert_relative_eq!(nu, 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn off_diagonal_block_symmetric_traceless() {
        for k in 0..16 {
            let psi = k as f64 * TAU / 16.0;
            let s = TwoModeState::symmetric(1.0, 0.7, psi, 0.2).unwrap();
            let (cm, _) = cm_two_mode(&s);
            assert_eq!(cm.get(0, 3), cm.get(1, 2));
            assert!((cm.get(0, 2) + cm.get(1, 3)).abs() < 1e-15);
        }
    }

    #[test]
    fn purity_values() {
        assert_eq!(purity(&SingleModeState::vacuum()), 1.0);
        let s = SingleModeState::thermal(0.14).unwrap();
        assert_relative_eq!(purity(&s), 0.78125, epsilon = 1e-15);
        let mut last = 1.0;
        for n in [0.5, 1.0, 10.0, 1e3, 1e6] {
            let p = purity(&SingleModeState::thermal(n).unwrap());
            assert!(p < last);
            last = p;
        }
        assert!(last < 1e-6);
    }

    #[test]
    fn depth_values() {
        assert_eq!(nonclassical_depth(0.0, 0.0), 0.0);
        assert_relative_eq!(nonclassical_depth(0.5, 0.14), 1.0 - 1.28 * (-1.0f64).exp(), epsilon = 1e-15);
        assert_relative_eq!(nonclassical_depth(0.5, 0.14), 0.529_114, epsilon = 1e-6);
        for n in [0.0, 0.1, 0.25, 1.0, 3.7] {
            assert_eq!(nonclassical_depth(classical_squeezing_bound(n), n), 0.0);
        }
        assert!(nonclassical_depth(-0.3, 0.0) < 0.0);
    }

    #[test]
    fn physicality() {
        let vac = CovarianceMatrix::vacuum(1);
        let p = check_physical(&vac);
        assert!(p.physical);
        assert_eq!(p.symplectic_eigenvalues, vec![0.5]);

        let bad = CovarianceMatrix::from_row_slice(2, &[0.1, 0.0, 0.0, 0.1]).unwrap();
        let p = check_physical(&bad);
        assert!(!p.physical);
        assert_relative_eq!(p.symplectic_eigenvalues[0], 0.1, epsilon = 1e-15);

        let indefinite = CovarianceMatrix::from_row_slice(2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(!check_physical(&indefinite).physical);
    }

    #[test]
    fn rejects_non_symmetric_and_bad_params() {
        assert!(CovarianceMatrix::from_row_slice(2, &[1.0, 0.2, 0.1, 1.0]).is_err());
        assert!(CovarianceMatrix::from_row_slice(3, &[0.0; 9]).is_err());
        assert!(SqueezingParam::new(-0.1, 0.0).is_err());
        assert!(SingleModeState::real(1.0, 0.1, 0.0, -1.0).is_err());
        assert!(FirstMoments::from_slice(&[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn phase_normalization() {
        let xi = SqueezingParam::new(0.3, -PI / 2.0).unwrap();
        assert_relative_eq!(xi.psi(), 1.5 * PI, epsilon = 1e-15);
        let xi = SqueezingParam::new(0.3, -1e-300).unwrap();
        assert!(xi.psi() < TAU);
    }

    proptest! {
        #[test]
        fn determinant_is_thermal(alpha in -3.0..3.0f64, r in 0.0..2.0f64, psi in 0.0..TAU, n in 0.0..3.0f64) {
            let s = SingleModeState::real(alpha, r, psi, n).unwrap();
            let (cm, _) = cm_single(&s);
            let expected = (0.5 * (1.0 + 2.0 * n)).powi(2);
            prop_assert!((cm.det() - expected).abs() <= 1e-9 * expected.max(1.0) * (4.0 * r).cosh());
            prop_assert!(check_physical(&cm).physical);
        }

        #[test]
        fn psi_periodic(r in 0.0..2.0f64, psi in 0.0..TAU, n in 0.0..3.0f64) {
            let a = cm_single(&SingleModeState::real(1.0, r, psi, n).unwrap()).0;
            let b = cm_single(&SingleModeState::real(1.0, r, psi + TAU, n).unwrap()).0;
            for (x, y) in a.to_row_major().iter().zip(b.to_row_major()) {
                prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
            }
        }

        #[test]
        fn two_mode_always_physical(r in 0.0..2.0f64, psi in 0.0..TAU, n1 in 0.0..5.0f64, n2 in 0.0..5.0f64) {
            let s = TwoModeState::new(Complex64::new(0.3, -0.2), Complex64::new(1.0, 0.0),
                SqueezingParam::new(r, psi).unwrap(), n1, n2).unwrap();
            let (cm, _) = cm_two_mode(&s);
            let p = check_physical(&cm);
            prop_assert!(p.physical, "{:?}", p);
        }
    }
}
