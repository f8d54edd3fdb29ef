//! Characteristic-function coefficients and symmetrically ordered moments.
//!
//! Symmetrically ordered moments `⟨[(a†)ⁿ aⁿ]_s⟩` of a Gaussian state are the
//! moments of its Wigner function, a classical Gaussian with mean `X` and
//! covariance `σ`. Writing `z_k = (q_k + i p_k)/√2`, the moment of order
//! `(n₁, n₂)` is `E[|z₁|^{2n₁} |z₂|^{2n₂}]`.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{CovarianceMatrix, FirstMoments};

/// Largest total order `Σ nₖ` handled by [`gaussian_symmetric_moment`]
/// (derivative order 8).
pub const MAX_SYMMETRIC_ORDER: u32 = 4;

/// Relative imaginary residue tolerated in expectations of Hermitian
/// operators evaluated with complex arithmetic.
pub const IMAGINARY_RESIDUE_TOL: f64 = 1e-12;

/// Coefficients of the Gaussian characteristic function in complex notation.
///
/// In terms of the covariance entries
/// `σ = [[a, c, e, f], [c, b, g, h], [e, g, A, C], [f, h, C, B]]` and
/// `X = (X₁, Y₁, X₂, Y₂)`:
///
/// | field            | symbol | value                       |
/// |------------------|--------|-----------------------------|
/// | `mode1_variance` | 𝒜      | `(a + b)/2`                 |
/// | `mode2_variance` | ℬ      | `(A + B)/2`                 |
/// | `mode1_squeeze`  | 𝒞      | `(a − b − 2ic)/4`           |
/// | `mode2_squeeze`  | 𝒟      | `(A − B − 2iC)/4`           |
/// | `pair_anomalous` | ℰ      | `(e − h − i(f + g))/2`      |
/// | `pair_normal`    | ℱ      | `(e + h + i(f − g))/2`      |
/// | `mode1_mean`     | 𝒰      | `(X₁ + iY₁)/√2`             |
/// | `mode2_mean`     | 𝒱      | `(X₂ + iY₂)/√2`             |
///
/// In operator terms `𝒰 = ⟨a⟩`, `𝒞 = ½⟨δa†²⟩`, `ℰ = ⟨δa† δb†⟩` and
/// `ℱ = ⟨δa† δb⟩`. For single-mode input the mode-2 and pair coefficients
/// are zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiCoefficients {
    pub modes: usize,
    pub mode1_variance: f64,
    pub mode2_variance: f64,
    pub mode1_squeeze: Complex64,
    pub mode2_squeeze: Complex64,
    pub pair_anomalous: Complex64,
    pub pair_normal: Complex64,
    pub mode1_mean: Complex64,
    pub mode2_mean: Complex64,
}

impl ChiCoefficients {
    fn mode(&self, mode: usize) -> (f64, Complex64, Complex64) {
        match mode {
            1 => (self.mode1_variance, self.mode1_squeeze, self.mode1_mean),
            _ => (self.mode2_variance, self.mode2_squeeze, self.mode2_mean),
        }
    }
}

pub fn chi_coefficients(cm: &CovarianceMatrix, x: &FirstMoments) -> Result<ChiCoefficients> {
    if cm.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: cm.dim(), found: x.dim() });
    }
    let s = |i, j| cm.get(i, j);
    let zero = Complex64::new(0.0, 0.0);
    let mut chi = ChiCoefficients {
        modes: cm.modes(),
        mode1_variance: 0.5 * (s(0, 0) + s(1, 1)),
        mode2_variance: 0.0,
        mode1_squeeze: Complex64::new(s(0, 0) - s(1, 1), -2.0 * s(0, 1)) / 4.0,
        mode2_squeeze: zero,
        pair_anomalous: zero,
        pair_normal: zero,
        mode1_mean: Complex64::new(x.get(0), x.get(1)) / SQRT_2,
        mode2_mean: zero,
    };
    if cm.modes() == 2 {
        let (e, f, g, h) = (s(0, 2), s(0, 3), s(1, 2), s(1, 3));
        chi.mode2_variance = 0.5 * (s(2, 2) + s(3, 3));
        chi.mode2_squeeze = Complex64::new(s(2, 2) - s(3, 3), -2.0 * s(2, 3)) / 4.0;
        chi.pair_anomalous = Complex64::new(e - h, -(f + g)) / 2.0;
        chi.pair_normal = Complex64::new(e + h, f - g) / 2.0;
        chi.mode2_mean = Complex64::new(x.get(2), x.get(3)) / SQRT_2;
    }
    Ok(chi)
}

/// `(⟨[a†a]_s⟩, ⟨[(a†)² a²]_s⟩)` for `mode` (1 or 2):
///
/// `m₁ = 𝒜 + |𝒰|²`, `m₂ = 2𝒜² + 4𝒜|𝒰|² + |2𝒞 + 𝒰*²|²`.
///
/// The conjugate on `𝒰` pairs `⟨δa†²⟩` with `⟨a⟩²`; for real `𝒰` it is
/// immaterial.
pub fn symmetric_moments_order2(chi: &ChiCoefficients, mode: usize) -> Result<(f64, f64)> {
    if mode == 0 || mode > chi.modes {
        return Err(Error::validation(format!(
            "mode {mode} out of range for a {}-mode state",
            chi.modes
        )));
    }
    Ok(order2(chi, mode))
}

fn order2(chi: &ChiCoefficients, mode: usize) -> (f64, f64) {
    let (var, squeeze, mean) = chi.mode(mode);
    let u2 = mean.norm_sqr();
    let m1 = var + u2;
    let m2 = 2.0 * var * var + 4.0 * var * u2 + (2.0 * squeeze + mean.conj() * mean.conj()).norm_sqr();
    (m1, m2)
}

/// Single-mode shorthand for [`symmetric_moments_order2`] on mode 1.
pub fn symmetric_moments_order2_single(chi: &ChiCoefficients) -> (f64, f64) {
    order2(chi, 1)
}

/// `⟨[a†a]_s [b†b]_s⟩` of a two-mode state.
pub fn cross_moment(chi: &ChiCoefficients) -> Result<f64> {
    if chi.modes != 2 {
        return Err(Error::validation("cross moment needs a two-mode state"));
    }
    let (a, b) = (chi.mode1_variance, chi.mode2_variance);
    let (u, v) = (chi.mode1_mean, chi.mode2_mean);
    let (e, f) = (chi.pair_anomalous, chi.pair_normal);
    let real_part = e.norm_sqr() + f.norm_sqr() + u.norm_sqr() * v.norm_sqr()
        + a * v.norm_sqr()
        + b * u.norm_sqr()
        + a * b;
    // ⟨δa δb⟩ = ℰ*, ⟨δa† δb⟩ = ℱ
    let mixed = u.conj() * v.conj() * e.conj() + u * v * e + u * v.conj() * f + u.conj() * v * f.conj();
    let value = Complex64::new(real_part, 0.0) + mixed;
    check_real(value, "cross moment")
}

fn check_real(value: Complex64, what: &str) -> Result<f64> {
    if value.im.abs() > IMAGINARY_RESIDUE_TOL * value.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "{what} has imaginary residue {:e} (real part {:e})",
            value.im, value.re
        )));
    }
    Ok(value.re)
}

/// `⟨Π_k [(a_k†)^{n_k} a_k^{n_k}]_s⟩` for a Gaussian state, with
/// `orders[k] = n_k` (one entry per mode, `Σ n_k ≤ 4`).
///
/// Expands `Π_k ((q_k² + p_k²)/2)^{n_k}` into real monomials and evaluates
/// each with the Isserlis expansion for a Gaussian with non-zero mean: a sum
/// over all partial pairings, unpaired factors contributing their means.
pub fn gaussian_symmetric_moment(
    cm: &CovarianceMatrix,
    x: &FirstMoments,
    orders: &[u32],
) -> Result<f64> {
    if cm.dim() != x.dim() {
        return Err(Error::DimensionMismatch { expected: cm.dim(), found: x.dim() });
    }
    if orders.len() != cm.modes() {
        return Err(Error::DimensionMismatch { expected: cm.modes(), found: orders.len() });
    }
    let total: u32 = orders.iter().sum();
    if total > MAX_SYMMETRIC_ORDER {
        return Err(Error::UnsupportedOrder(format!(
            "total order {total} exceeds {MAX_SYMMETRIC_ORDER} (derivative order {})",
            2 * MAX_SYMMETRIC_ORDER
        )));
    }
    let mean = x.to_vec();
    let cov = |i: usize, j: usize| cm.get(i, j);

    // each mode contributes Σ_j C(n, j) q^{2j} p^{2(n−j)} / 2^n
    let mut terms: Vec<(f64, Vec<usize>)> = vec![(1.0, Vec::new())];
    for (mode, &n) in orders.iter().enumerate() {
        let (qi, pi) = (2 * mode, 2 * mode + 1);
        let mut next = Vec::new();
        for (coef, idx) in &terms {
            for j in 0..=n {
                let mut ix = idx.clone();
                ix.extend(std::iter::repeat_n(qi, 2 * j as usize));
                ix.extend(std::iter::repeat_n(pi, 2 * (n - j) as usize));
                let c = coef * binomial(n, j) / f64::from(1u32 << n);
                next.push((c, ix));
            }
        }
        terms = next;
    }
    Ok(terms.iter().map(|(c, ix)| c * isserlis(ix, &mean, &cov)).sum())
}

/// `E[Π x_i]` for a Gaussian vector: `E[x₁ F] = μ₁ E[F] + Σ_j σ₁ⱼ E[F without x_j]`.
fn isserlis(indices: &[usize], mean: &[f64], cov: &impl Fn(usize, usize) -> f64) -> f64 {
    let Some((&first, rest)) = indices.split_first() else {
        return 1.0;
    };
    let mut acc = mean[first] * isserlis(rest, mean, cov);
    for k in 0..rest.len() {
        let c = cov(first, rest[k]);
        if c != 0.0 {
            let mut reduced = Vec::with_capacity(rest.len() - 1);
            reduced.extend_from_slice(&rest[..k]);
            reduced.extend_from_slice(&rest[k + 1..]);
            acc += c * isserlis(&reduced, mean, cov);
        }
    }
    acc
}

fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * f64::from(n - i) / f64::from(i + 1))
}

/// Table of `⟨[(a†)ʰ aʰ]_s [(b†)ᵏ bᵏ]_s⟩` indexed by `(h, k)`; single-mode
/// tables use `k = 0`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SymmetricMoments {
    modes: usize,
    values: BTreeMap<(u32, u32), f64>,
}

impl SymmetricMoments {
    pub fn new(modes: usize) -> Self {
        let mut values = BTreeMap::new();
        values.insert((0, 0), 1.0);
        SymmetricMoments { modes, values }
    }

    /// All orders with `h + k ≤ 4` for a Gaussian state.
    pub fn gaussian(cm: &CovarianceMatrix, x: &FirstMoments) -> Result<Self> {
        let modes = cm.modes();
        let mut out = SymmetricMoments::new(modes);
        for h in 0..=MAX_SYMMETRIC_ORDER {
            let kmax = if modes == 2 { MAX_SYMMETRIC_ORDER - h } else { 0 };
            for k in 0..=kmax {
                if (h, k) == (0, 0) {
                    continue;
                }
                let orders: Vec<u32> = if modes == 2 { vec![h, k] } else { vec![h] };
                out.insert(h, k, gaussian_symmetric_moment(cm, x, &orders)?);
            }
        }
        Ok(out)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn insert(&mut self, h: u32, k: u32, value: f64) {
        self.values.insert((h, k), value);
    }

    pub fn get(&self, h: u32, k: u32) -> Option<f64> {
        self.values.get(&(h, k)).copied()
    }
}

/// `N̂ⁿ = Σ_h c[n][h] [(a†)ʰ aʰ]_s`, with `[(a†)⁰ a⁰]_s = 1`.
const NUMBER_FROM_SYMMETRIC: [[f64; 5]; 5] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [-0.5, 1.0, 0.0, 0.0, 0.0],
    [0.0, -1.0, 1.0, 0.0, 0.0],
    [0.25, -0.5, -1.5, 1.0, 0.0],
    [0.0, 2.0, -2.0, -2.0, 1.0],
];

/// Table of `⟨N̂₁ⁿ N̂₂ᵐ⟩` indexed by `(n, m)`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct NumberMoments {
    values: BTreeMap<(u32, u32), f64>,
}

impl NumberMoments {
    pub fn get(&self, n: u32, m: u32) -> Option<f64> {
        self.values.get(&(n, m)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }
}

/// Converts symmetric moments into moments of number-operator powers up to
/// total order 4, for every `(n, m)` whose required entries are present.
/// Errors if not even `⟨N̂⟩` can be formed.
pub fn number_powers_from_symmetric(sym: &SymmetricMoments) -> Result<NumberMoments> {
    let mut out = NumberMoments::default();
    let mmax = if sym.modes == 2 { MAX_SYMMETRIC_ORDER } else { 0 };
    for n in 0..=MAX_SYMMETRIC_ORDER {
        for m in 0..=mmax.min(MAX_SYMMETRIC_ORDER - n) {
            if let Ok(v) = number_power(sym, n, m) {
                out.values.insert((n, m), v);
            }
        }
    }
    if out.get(1, 0).is_none() {
        return Err(Error::MissingOrder(1, 0));
    }
    Ok(out)
}

/// `⟨N̂₁ⁿ N̂₂ᵐ⟩` from the symmetric moments, expanded distributively.
pub fn number_power(sym: &SymmetricMoments, n: u32, m: u32) -> Result<f64> {
    if n + m > MAX_SYMMETRIC_ORDER {
        return Err(Error::UnsupportedOrder(format!("number power ({n}, {m})")));
    }
    let mut acc = 0.0;
    for h in 0..=n {
        let ch = NUMBER_FROM_SYMMETRIC[n as usize][h as usize];
        if ch == 0.0 {
            continue;
        }
        for k in 0..=m {
            let ck = NUMBER_FROM_SYMMETRIC[m as usize][k as usize];
            if ck == 0.0 {
                continue;
            }
            let s = sym.get(h, k).ok_or(Error::MissingOrder(h, k))?;
            acc += ch * ck * s;
        }
    }
    Ok(acc)
}
