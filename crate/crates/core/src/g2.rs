//! Zero-delay second-order correlation `g²(0)` and the coherent-amplitude
//! thresholds below which it stays above 1.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    cm_single, cm_two_mode, nonclassical_depth, CovarianceMatrix, FirstMoments, SingleModeState,
    TwoModeState,
};
use crate::moments::{chi_coefficients, cross_moment, symmetric_moments_order2};

/// Mean photon number below which `g²(0)` is reported as undefined.
pub const MIN_MEAN_PHOTONS: f64 = 1e-12;

/// Threshold denominators must exceed this to report an existing threshold.
pub const THRESHOLD_DENOMINATOR_EPS: f64 = 1e-15;

const NEGATIVE_G2_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum G2Method {
    ClosedForm,
    MomentPipeline,
    Estimated,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub low: f64,
    pub high: f64,
    pub level: f64,
}

/// A `g²(0)` value together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G2Result {
    pub value: f64,
    pub method: G2Method,
    /// Standard error; present only for estimates.
    pub std_error: Option<f64>,
    pub ci: Option<ConfidenceInterval>,
    /// Set when a slightly negative value (rounding) was clamped to zero.
    #[serde(default)]
    pub clamped: bool,
}

impl G2Result {
    /// Exact (non-statistical) result. Values in `[−1e−9, 0)` are clamped to
    /// zero and flagged; anything more negative is a numerical failure.
    pub fn exact(value: f64, method: G2Method) -> Result<Self> {
        debug_assert!(method != G2Method::Estimated);
        if !value.is_finite() {
            return Err(Error::Numerical(format!("g2 evaluated to {value}")));
        }
        if value < -NEGATIVE_G2_TOL {
            return Err(Error::Numerical(format!("g2 evaluated to negative value {value:e}")));
        }
        let clamped = value < 0.0;
        Ok(G2Result { value: value.max(0.0), method, std_error: None, ci: None, clamped })
    }

    pub fn estimated(value: f64, std_error: f64, ci: ConfidenceInterval) -> Self {
        G2Result { value, method: G2Method::Estimated, std_error: Some(std_error), ci: Some(ci), clamped: false }
    }
}

/// `g²(0) = 2(2m₂ − 4m₁ + 1)/(2m₁ − 1)²` from `m₁ = ⟨[a†a]_s⟩` and
/// `m₂ = ⟨[(a†)²a²]_s⟩`.
pub fn g2_single_from_moments(m1: f64, m2: f64) -> Result<G2Result> {
    G2Result::exact(g2_single_value(m1, m2)?, G2Method::MomentPipeline)
}

pub(crate) fn g2_single_value(m1: f64, m2: f64) -> Result<f64> {
    let mean_n = m1 - 0.5;
    if !(mean_n >= MIN_MEAN_PHOTONS) {
        return Err(Error::undefined(format!(
            "g2 undefined for zero mean photon number (<N> = {mean_n:e})"
        )));
    }
    let d = 2.0 * m1 - 1.0;
    Ok(2.0 * (2.0 * m2 - 4.0 * m1 + 1.0) / (d * d))
}

/// Moment pipeline on a single-mode `(σ, X)` pair; any complex `α`.
///
/// Evaluated from the centered second moments as
/// `1 + [n_c² + |m_c|² + 2|α|² n_c + 2 Re(α*² m_c)] / ⟨N⟩²`, which equals the
/// `(m₁, m₂)` expression but keeps full relative precision at small `⟨N⟩`.
pub fn g2_single_pipeline(cm: &CovarianceMatrix, x: &FirstMoments) -> Result<G2Result> {
    if cm.modes() != 1 {
        return Err(Error::DimensionMismatch { expected: 2, found: cm.dim() });
    }
    let (sqq, spp, sqp) = (cm.get(0, 0), cm.get(1, 1), cm.get(0, 1));
    let alpha = Complex64::new(x.get(0), x.get(1)) * FRAC_1_SQRT_2;
    // ⟨δa†δa⟩ and ⟨δa δa⟩
    let n_c = 0.5 * (sqq + spp - 1.0);
    let m_c = Complex64::new(0.5 * (sqq - spp), sqp);
    let a2 = alpha.norm_sqr();
    let mean_n = n_c + a2;
    if !(mean_n >= MIN_MEAN_PHOTONS) {
        return Err(Error::undefined(format!(
            "g2 undefined for zero mean photon number (<N> = {mean_n:e})"
        )));
    }
    let excess = n_c * n_c + m_c.norm_sqr() + 2.0 * a2 * n_c + 2.0 * (alpha.conj() * alpha.conj() * m_c).re;
    G2Result::exact(1.0 + excess / (mean_n * mean_n), G2Method::MomentPipeline)
}

pub fn g2_single_state(state: &SingleModeState) -> Result<G2Result> {
    let (cm, x) = cm_single(state);
    g2_single_pipeline(&cm, &x)
}

fn require_real_alpha(state: &SingleModeState) -> Result<f64> {
    let alpha = state.alpha();
    if alpha.im != 0.0 {
        return Err(Error::validation(format!(
            "closed form requires a real coherent amplitude, got {alpha}"
        )));
    }
    Ok(alpha.re)
}

/// Closed form for a displaced squeezed thermal state with real `α`:
///
/// `g² = 2 + {K sinh 2r [K sinh 2r + 4α² cos ψ] − 4α⁴} / [K cosh 2r + 2α² − 1]²`
/// with `K = 1 + 2N_th`.
pub fn g2_single_closed_form(state: &SingleModeState) -> Result<G2Result> {
    let alpha = require_real_alpha(state)?;
    if !(state.mean_photon_number() >= MIN_MEAN_PHOTONS) {
        return Err(Error::undefined("g2 undefined for zero mean photon number (vacuum)"));
    }
    let value = closed_form_value(alpha, state.r(), state.psi(), state.n_th());
    G2Result::exact(value, G2Method::ClosedForm)
}

pub(crate) fn closed_form_value(alpha: f64, r: f64, psi: f64, n_th: f64) -> f64 {
    let k = 1.0 + 2.0 * n_th;
    let ks = k * (2.0 * r).sinh();
    let a2 = alpha * alpha;
    let d = k * (2.0 * r).cosh() + 2.0 * a2 - 1.0;
    2.0 + (ks * (ks + 4.0 * a2 * psi.cos()) - 4.0 * a2 * a2) / (d * d)
}

/// Threshold amplitude for `g²(0) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdResult {
    pub exists: bool,
    pub alpha_th: Option<f64>,
    /// Denominator under the square root; the threshold exists iff it is positive.
    pub denominator: f64,
}

impl ThresholdResult {
    fn from_parts(numerator: f64, denominator: f64) -> Self {
        if denominator > THRESHOLD_DENOMINATOR_EPS {
            ThresholdResult {
                exists: true,
                alpha_th: Some(0.5 * (numerator / denominator).sqrt()),
                denominator,
            }
        } else {
            ThresholdResult { exists: false, alpha_th: None, denominator }
        }
    }
}

fn check_threshold_inputs(r: f64, psi: f64, n_th: f64) -> Result<()> {
    if !(r.is_finite() && psi.is_finite() && n_th.is_finite()) {
        return Err(Error::validation("threshold parameters must be finite"));
    }
    if r < 0.0 {
        return Err(Error::validation(format!("squeezing magnitude must be non-negative, got {r}")));
    }
    if r == 0.0 {
        return Err(Error::undefined("no squeezing: threshold undefined"));
    }
    if n_th < 0.0 {
        return Err(Error::validation(format!("thermal photon number must be non-negative, got {n_th}")));
    }
    Ok(())
}

/// `K² sinh² 2r + (K cosh 2r − 1)²`.
fn threshold_numerator(r: f64, n_th: f64) -> f64 {
    let k = 1.0 + 2.0 * n_th;
    let ks = k * (2.0 * r).sinh();
    let kc = k * (2.0 * r).cosh() - 1.0;
    ks * ks + kc * kc
}

/// `α_Th(r, ψ, N_th) = ½ √(num / [𝒯(r, N_th) − K sinh 2r (1 + cos ψ)])`,
/// for real `α`.
pub fn alpha_threshold(r: f64, psi: f64, n_th: f64) -> Result<ThresholdResult> {
    check_threshold_inputs(r, psi, n_th)?;
    let k = 1.0 + 2.0 * n_th;
    let den = nonclassical_depth(r, n_th) - k * (2.0 * r).sinh() * (1.0 + psi.cos());
    Ok(ThresholdResult::from_parts(threshold_numerator(r, n_th), den))
}

/// Amplitude-squeezing threshold (`ψ = π`): the denominator is `𝒯(r, N_th)`,
/// so the threshold exists iff the state is nonclassical.
pub fn alpha_threshold_pi(r: f64, n_th: f64) -> Result<ThresholdResult> {
    check_threshold_inputs(r, 0.0, n_th)?;
    Ok(ThresholdResult::from_parts(threshold_numerator(r, n_th), nonclassical_depth(r, n_th)))
}

/// Amplitude of the `g²` minimum for `ψ = π`:
/// `α_min = √(K sinh 2r) √(K sinh 2r / 𝒯 − ½)`, present iff `𝒯 > 0`.
pub fn alpha_min_pi(r: f64, n_th: f64) -> Result<Option<f64>> {
    check_threshold_inputs(r, 0.0, n_th)?;
    let depth = nonclassical_depth(r, n_th);
    if depth <= THRESHOLD_DENOMINATOR_EPS {
        return Ok(None);
    }
    let ks = (1.0 + 2.0 * n_th) * (2.0 * r).sinh();
    let radicand = ks / depth - 0.5;
    if radicand < 0.0 {
        return Ok(None);
    }
    Ok(Some(ks.sqrt() * radicand.sqrt()))
}

/// Two-mode `g²(0)` of the total intensity from a `4×4` `(σ, X)`:
///
/// `[m₂ᵃ + m₂ᵇ − 3(m₁ᵃ + m₁ᵇ − ½) + 2⟨[a†a]_s[b†b]_s⟩] / (m₁ᵃ + m₁ᵇ − 1)²`.
pub fn g2_two_mode(cm: &CovarianceMatrix, x: &FirstMoments) -> Result<G2Result> {
    if cm.modes() != 2 {
        return Err(Error::DimensionMismatch { expected: 4, found: cm.dim() });
    }
    let chi = chi_coefficients(cm, x)?;
    let (m1a, m2a) = symmetric_moments_order2(&chi, 1)?;
    let (m1b, m2b) = symmetric_moments_order2(&chi, 2)?;
    let cross = cross_moment(&chi)?;
    let total = m1a + m1b - 1.0;
    if !(total >= MIN_MEAN_PHOTONS) {
        return Err(Error::undefined(format!(
            "two-mode g2 undefined for zero total mean photon number (<N> = {total:e})"
        )));
    }
    let value = (m2a + m2b - 3.0 * (m1a + m1b - 0.5) + 2.0 * cross) / (total * total);
    G2Result::exact(value, G2Method::MomentPipeline)
}

pub fn g2_two_mode_state(state: &TwoModeState) -> Result<G2Result> {
    let (cm, x) = cm_two_mode(state);
    g2_two_mode(&cm, &x)
}

/// Symmetric two-mode threshold (`α = β`, `N₁ = N₂ = N_th`):
/// denominator `½[𝒯(r, N) + 𝒯(−r, N)] − K sinh 2r cos ψ`.
pub fn alpha_threshold_two_mode_symmetric(r: f64, psi: f64, n_th: f64) -> Result<ThresholdResult> {
    check_threshold_inputs(r, psi, n_th)?;
    let k = 1.0 + 2.0 * n_th;
    let den = 0.5 * (nonclassical_depth(r, n_th) + nonclassical_depth(-r, n_th))
        - k * (2.0 * r).sinh() * psi.cos();
    Ok(ThresholdResult::from_parts(threshold_numerator(r, n_th), den))
}

/// Numerical threshold for an arbitrary two-mode configuration: the smallest
/// `s ∈ (0, s_max]` at which `g²_TM` of the state with amplitudes
/// `(s·α̂, s·β̂)` crosses 1, where `α̂, β̂` are the template's amplitudes.
/// Returns `None` if no crossing is bracketed on a uniform scan of `steps`
/// points.
pub fn two_mode_scale_threshold(template: &TwoModeState, s_max: f64, steps: usize) -> Result<Option<f64>> {
    if !(s_max > 0.0) || steps < 2 {
        return Err(Error::validation("scale search needs s_max > 0 and at least 2 steps"));
    }
    let eval = |s: f64| -> Result<f64> {
        let st = TwoModeState::new(
            template.alpha() * s,
            template.beta() * s,
            template.squeezing(),
            template.n_th1(),
            template.n_th2(),
        )?;
        Ok(g2_two_mode_state(&st)?.value - 1.0)
    };
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..=steps {
        let s = s_max * i as f64 / steps as f64;
        let f = match eval(s) {
            Ok(f) => f,
            Err(Error::Undefined(_)) => continue,
            Err(e) => return Err(e),
        };
        if let Some((s0, f0)) = prev {
            if f0 > 0.0 && f <= 0.0 || f0 < 0.0 && f >= 0.0 {
                let (mut lo, mut hi, mut flo) = (s0, s, f0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = eval(mid)?;
                    if (fm > 0.0) == (flo > 0.0) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                    if hi - lo <= 1e-15 * hi {
                        break;
                    }
                }
                return Ok(Some(0.5 * (lo + hi)));
            }
        }
        prev = Some((s, f));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{classical_squeezing_bound, SqueezingParam};
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    #[test]
    fn from_moments_limits() {
        assert_relative_eq!(g2_single_from_moments(1.5, 3.5).unwrap().value, 1.0, epsilon = 1e-15);
        assert_relative_eq!(g2_single_from_moments(1.0, 2.0).unwrap().value, 2.0, epsilon = 1e-15);
        assert!(matches!(g2_single_from_moments(0.5, 0.5), Err(Error::Undefined(_))));
        assert!(matches!(g2_single_from_moments(0.4, 0.5), Err(Error::Undefined(_))));
    }

    #[test]
    fn squeezed_vacuum_value() {
        let s = SingleModeState::squeezed_vacuum(0.5, 0.0).unwrap();
        let g = g2_single_state(&s).unwrap().value;
        let expected = 3.0 + 1.0 / 0.5f64.sinh().powi(2);
        assert_relative_eq!(g, expected, max_relative = 1e-13);
        assert_relative_eq!(g, 6.682_694, epsilon = 1e-6);
    }

    #[test]
    fn closed_form_limits_and_errors() {
        let thermal = SingleModeState::real(0.0, 0.0, 0.0, 0.3).unwrap();
        assert_relative_eq!(g2_single_closed_form(&thermal).unwrap().value, 2.0, epsilon = 1e-14);
        let coherent = SingleModeState::real(2.0, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(g2_single_closed_form(&coherent).unwrap().value, 1.0, epsilon = 1e-15);
        let amp = SingleModeState::real(2.0, 0.5, PI, 0.14).unwrap();
        let g = g2_single_closed_form(&amp).unwrap();
        assert_eq!(g.method, G2Method::ClosedForm);
        assert!(g.value < 1.0);

        let complex = SingleModeState::coherent(Complex64::new(1.0, 0.5)).unwrap();
        assert!(matches!(g2_single_closed_form(&complex), Err(Error::Validation(_))));
        assert!(matches!(
            g2_single_closed_form(&SingleModeState::vacuum()),
            Err(Error::Undefined(_))
        ));
    }

    #[test]
    fn pipeline_handles_complex_alpha_phase_covariantly() {
        // rotating α by φ and ψ by 2φ is a phase-space rotation; g² is invariant
        let base = g2_single_state(&SingleModeState::real(1.3, 0.4, PI, 0.2).unwrap()).unwrap().value;
        for phi in [0.3, 1.1, 2.5] {
            let s = SingleModeState::new(
                Complex64::from_polar(1.3, phi),
                SqueezingParam::new(0.4, PI + 2.0 * phi).unwrap(),
                0.2,
            )
            .unwrap();
            assert_relative_eq!(g2_single_state(&s).unwrap().value, base, max_relative = 1e-12);
        }
    }

    #[test]
    fn threshold_examples() {
        let t = alpha_threshold(0.5, PI, 0.0).unwrap();
        assert!(t.exists);
        assert_relative_eq!(t.denominator, 1.0 - (-1.0f64).exp(), epsilon = 1e-15);
        let t = alpha_threshold(0.5, 0.0, 0.0).unwrap();
        assert!(!t.exists);
        assert_relative_eq!(t.denominator, nonclassical_depth(0.5, 0.0) - 2.0 * 1.0f64.sinh(), epsilon = 1e-15);
        for n in [0.0, 0.1, 0.25, 1.0] {
            let rth = classical_squeezing_bound(n);
            if rth > 0.0 {
                assert!(!alpha_threshold(rth, PI, n).unwrap().exists);
                assert!(!alpha_threshold(0.5 * rth, PI, n).unwrap().exists);
            }
        }
        assert!(matches!(alpha_threshold(0.0, PI, 0.0), Err(Error::Undefined(_))));
        assert!(matches!(alpha_threshold(-0.1, PI, 0.0), Err(Error::Validation(_))));
    }

    #[test]
    fn threshold_is_root() {
        for &(r, psi, n) in &[(0.5, PI, 0.0), (0.5, PI, 0.14), (1.0, 2.9, 0.3), (0.3, 4.0, 0.05)] {
            let t = alpha_threshold(r, psi, n).unwrap();
            let a = t.alpha_th.unwrap();
            assert!((closed_form_value(a, r, psi, n) - 1.0).abs() < 1e-9);
            assert!(closed_form_value(1.01 * a, r, psi, n) < 1.0);
            assert!(closed_form_value(0.99 * a, r, psi, n) > 1.0);
        }
    }

    #[test]
    fn pi_specialization_agrees() {
        for i in 1..=15 {
            for j in 0..=10 {
                let (r, n) = (0.1 * i as f64, 0.2 * j as f64);
                let a = alpha_threshold(r, PI, n).unwrap();
                let b = alpha_threshold_pi(r, n).unwrap();
                assert_eq!(a.exists, b.exists);
                assert_eq!(b.exists, nonclassical_depth(r, n) > 0.0);
                if let (Some(x), Some(y)) = (a.alpha_th, b.alpha_th) {
                    assert!((x - y).abs() <= 1e-14 * y);
                }
            }
        }
    }

    #[test]
    fn threshold_grows_with_thermal_noise() {
        let mut last = 0.0;
        for n in [0.0, 0.05, 0.1, 0.2, 0.3] {
            let a = alpha_threshold_pi(1.0, n).unwrap().alpha_th.unwrap();
            assert!(a > last);
            last = a;
        }
    }

    #[test]
    fn minimum_location() {
        let (r, n) = (0.5, 0.0);
        let amin = alpha_min_pi(r, n).unwrap().unwrap();
        let ath = alpha_threshold_pi(r, n).unwrap().alpha_th.unwrap();
        assert!(amin > ath);
        // finite-difference derivative and golden-section oracle
        let f = |a: f64| closed_form_value(a, r, PI, n);
        let h = 1e-5;
        assert!(((f(amin + h) - f(amin - h)) / (2.0 * h)).abs() < 1e-6);
        let (mut lo, mut hi) = (ath, 10.0 * amin);
        let gr = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..200 {
            let c = hi - gr * (hi - lo);
            let d = lo + gr * (hi - lo);
            if f(c) < f(d) {
                hi = d;
            } else {
                lo = c;
            }
        }
        assert_relative_eq!(0.5 * (lo + hi), amin, max_relative = 1e-6);
        assert!(alpha_min_pi(0.1, 0.5).unwrap().is_none());
    }

    #[test]
    fn two_mode_examples() {
        let coh = TwoModeState::symmetric(1.0, 0.0, 0.0, 0.0).unwrap();
        assert_relative_eq!(g2_two_mode_state(&coh).unwrap().value, 1.0, epsilon = 1e-14);
        let th = TwoModeState::symmetric(0.0, 0.0, 0.0, 0.5).unwrap();
        assert_relative_eq!(g2_two_mode_state(&th).unwrap().value, 1.5, epsilon = 1e-14);
        let tms = TwoModeState::symmetric(2.0, 0.5, PI, 0.0).unwrap();
        assert!(g2_two_mode_state(&tms).unwrap().value < 1.0);
        let vac = TwoModeState::symmetric(0.0, 0.0, 0.0, 0.0).unwrap();
        assert!(matches!(g2_two_mode_state(&vac), Err(Error::Undefined(_))));
        assert!(g2_two_mode(&CovarianceMatrix::vacuum(1), &FirstMoments::zeros(1)).is_err());
    }

    #[test]
    fn two_mode_threshold_is_root_of_pipeline() {
        for &(r, psi, n) in &[(0.5, PI, 0.0), (0.5, PI, 0.15), (0.8, 2.4, 0.1), (0.2, 3.5, 0.0)] {
            let t = alpha_threshold_two_mode_symmetric(r, psi, n).unwrap();
            let a = t.alpha_th.expect("threshold should exist");
            let g = |x: f64| g2_two_mode_state(&TwoModeState::symmetric(x, r, psi, n).unwrap()).unwrap().value;
            assert!((g(a) - 1.0).abs() < 1e-9, "{}", g(a));
            assert!(g(1.01 * a) < 1.0);
            assert!(g(0.99 * a) > 1.0);
        }
    }

    #[test]
    fn two_mode_psi_zero_never_antibunched() {
        for i in 1..=20 {
            for n in [0.0, 0.1, 0.5, 2.0] {
                let r = 0.1 * i as f64;
                assert!(!alpha_threshold_two_mode_symmetric(r, 0.0, n).unwrap().exists);
            }
        }
    }

    #[test]
    fn two_mode_numeric_root_matches_symmetric_formula() {
        let template = TwoModeState::symmetric(1.0, 0.5, PI, 0.1).unwrap();
        let s = two_mode_scale_threshold(&template, 5.0, 200).unwrap().unwrap();
        let a = alpha_threshold_two_mode_symmetric(0.5, PI, 0.1).unwrap().alpha_th.unwrap();
        assert_relative_eq!(s, a, max_relative = 1e-10);

        let asym = TwoModeState::new(
            Complex64::new(2.0, 0.0),
            Complex64::new(1.0, 0.0),
            SqueezingParam::new(0.5, PI).unwrap(),
            0.05,
            0.2,
        )
        .unwrap();
        let s = two_mode_scale_threshold(&asym, 5.0, 400).unwrap().unwrap();
        let st = TwoModeState::new(asym.alpha() * s, asym.beta() * s, asym.squeezing(), 0.05, 0.2).unwrap();
        assert!((g2_two_mode_state(&st).unwrap().value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn existence_region_bounds() {
        for i in 0..=72 {
            let psi = TAU * i as f64 / 72.0;
            for r in [0.2, 0.5, 1.0] {
                for n in [0.0, 0.05, 0.2] {
                    if alpha_threshold(r, psi, n).unwrap().exists {
                        assert!((FRAC_PI_2..=1.5 * PI).contains(&psi));
                    }
                }
            }
        }
    }
}
