//! Reconstruction of `(σ, X)`, state parameters and `g²(0)` from a
//! single-mode homodyne trace, with bootstrap errors and a Gaussianity check.
//!
//! Quadrature moments are taken at four fixed phases: `q` and `p` from
//! `θ = 0, π/2`, and the symmetrized product from
//! `⟨qp + pq⟩ = ⟨x²_{π/4}⟩ − ⟨x²_{−π/4}⟩`.
//!
//! The reported `g²` is the plug-in value minus a jackknife bias estimate;
//! the interval is the percentile bootstrap of the plug-in value.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, SQRT_2, TAU};

use num_complex::Complex64;
use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::g2::{g2_single_value, ConfidenceInterval, G2Result};
use crate::gaussian::{
    check_physical, CovarianceMatrix, FirstMoments, SingleModeState, SqueezingParam, CONVENTION_TAG,
    PHYSICALITY_TOL, VACUUM_VARIANCE,
};
use crate::homodyne::{HomodyneTrace, StateParams};
use crate::moments::{chi_coefficients, symmetric_moments_order2_single};

pub const MIN_SAMPLES_PER_PHASE: usize = 100;
pub const MIN_RESAMPLES: usize = 100;
pub const DEFAULT_RESAMPLES: usize = 1000;
pub const DEFAULT_CONFIDENCE: f64 = 0.95;
/// Default Gaussianity tolerance in units of the sampling standard error.
pub const DEFAULT_TOLERANCE_SIGMAS: f64 = 5.0;
/// Phases closer than this (mod 2π) count as the same setting.
pub const PHASE_MATCH_TOL: f64 = 1e-9;
/// Groups for the delete-a-group jackknife bias correction.
pub const DEFAULT_JACKKNIFE_BLOCKS: usize = 20;

/// Sample moments of one phase, accumulated about a shift for accuracy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMoments {
    n: usize,
    shift: f64,
    sum: f64,
    sum_sq: f64,
}

impl PhaseMoments {
    pub fn from_values(values: &[f64]) -> Self {
        let shift = values.first().copied().unwrap_or(0.0);
        let mut m = PhaseMoments { n: 0, shift, sum: 0.0, sum_sq: 0.0 };
        for &v in values {
            m.push(v);
        }
        m
    }

    fn push(&mut self, v: f64) {
        let d = v - self.shift;
        self.n += 1;
        self.sum += d;
        self.sum_sq += d * d;
    }

    /// Moments of the samples counted here but not in `part`, which must
    /// share the shift.
    fn without(&self, part: &PhaseMoments) -> Self {
        PhaseMoments { n: self.n - part.n, shift: self.shift, sum: self.sum - part.sum, sum_sq: self.sum_sq - part.sum_sq }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.shift + self.sum / self.n as f64
    }

    /// Unbiased variance, `1/(N − 1)` normalization.
    pub fn variance(&self) -> f64 {
        let n = self.n as f64;
        let centered = self.sum_sq - self.sum * self.sum / n;
        (centered / (n - 1.0)).max(0.0)
    }

    /// Raw second moment `⟨x²⟩`.
    pub fn second_moment(&self) -> f64 {
        let n = self.n as f64;
        let m = self.sum / n;
        self.shift * self.shift + 2.0 * self.shift * m + self.sum_sq / n
    }
}

/// Moments at `θ = 0, π/2, π/4, −π/4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureMoments {
    pub q: PhaseMoments,
    pub p: PhaseMoments,
    pub plus: PhaseMoments,
    pub minus: PhaseMoments,
}

impl QuadratureMoments {
    fn from_array(m: [PhaseMoments; 4]) -> Self {
        QuadratureMoments { q: m[0], p: m[1], plus: m[2], minus: m[3] }
    }

    /// `(σ, X)` with `σqp = (⟨x²_{π/4}⟩ − ⟨x²_{−π/4}⟩)/2 − ⟨q⟩⟨p⟩`.
    pub fn gaussian_moments(&self) -> Result<(CovarianceMatrix, FirstMoments)> {
        let (mq, mp) = (self.q.mean(), self.p.mean());
        let sqp = 0.5 * (self.plus.second_moment() - self.minus.second_moment()) - mq * mp;
        let cm = CovarianceMatrix::from_row_slice(2, &[self.q.variance(), sqp, sqp, self.p.variance()])?;
        Ok((cm, FirstMoments::from_slice(&[mq, mp])?))
    }

    /// `g²(0)` via the moment pipeline, without clamping.
    pub fn g2(&self) -> Result<f64> {
        let (cm, x) = self.gaussian_moments()?;
        let (m1, m2) = symmetric_moments_order2_single(&chi_coefficients(&cm, &x)?);
        g2_single_value(m1, m2)
    }
}

fn same_phase(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d < PHASE_MATCH_TOL || TAU - d < PHASE_MATCH_TOL
}

/// Samples at the four estimator phases, in the order `0, π/2, π/4, −π/4`.
pub fn standard_phase_samples(trace: &HomodyneTrace) -> Result<[&[f64]; 4]> {
    let mut out: [&[f64]; 4] = [&[]; 4];
    for (slot, target) in out.iter_mut().zip([0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4]) {
        let phase = trace
            .phases()
            .iter()
            .find(|p| same_phase(p.theta, target))
            .ok_or_else(|| Error::validation(format!("trace has no samples at phase {target}")))?;
        if phase.values.len() < MIN_SAMPLES_PER_PHASE {
            return Err(Error::validation(format!(
                "phase {} has {} samples, at least {MIN_SAMPLES_PER_PHASE} needed",
                phase.theta,
                phase.values.len()
            )));
        }
        *slot = &phase.values;
    }
    Ok(out)
}

pub fn quadrature_moments(trace: &HomodyneTrace) -> Result<QuadratureMoments> {
    let s = standard_phase_samples(trace)?;
    Ok(QuadratureMoments::from_array(s.map(PhaseMoments::from_values)))
}

/// Fitted single-mode parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateFit {
    pub state: SingleModeState,
    /// The covariance matrix is isotropic, so `ψ` is undefined and set to 0.
    pub degenerate: bool,
}

/// Inverts the single-mode covariance formulas:
/// `1 + 2N_th = 2√det σ`, `K sinh 2r = |(σqq − σpp, 2σqp)|`,
/// `ψ = atan2(2σqp, σqq − σpp)`, `α = (X₁ + iX₂)/√2`.
pub fn fit_state_params(cm: &CovarianceMatrix, x: &FirstMoments) -> Result<StateFit> {
    if cm.modes() != 1 || x.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: cm.dim().max(x.dim()) });
    }
    let det = cm.det();
    let min_det = VACUUM_VARIANCE * VACUUM_VARIANCE;
    if det < min_det - PHYSICALITY_TOL || cm.get(0, 0) <= 0.0 {
        return Err(Error::validation(format!("covariance matrix is unphysical (det = {det}, needs >= 1/4)")));
    }
    let k = (2.0 * det.max(0.0).sqrt()).max(1.0);
    let (sqq, spp, sqp) = (cm.get(0, 0), cm.get(1, 1), cm.get(0, 1));
    let anisotropy = (sqq - spp).hypot(2.0 * sqp);
    let degenerate = anisotropy <= 1e-12 * (sqq + spp);
    let (r, psi) = if degenerate {
        (0.0, 0.0)
    } else {
        (0.5 * (anisotropy / k).asinh(), (2.0 * sqp).atan2(sqq - spp))
    };
    let alpha = Complex64::new(x.get(0), x.get(1)) / SQRT_2;
    let state = SingleModeState::new(alpha, SqueezingParam::new(r, psi)?, 0.5 * (k - 1.0))?;
    Ok(StateFit { state, degenerate })
}

/// Percentile bootstrap summary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub low: f64,
    pub high: f64,
    pub std_error: f64,
    pub level: f64,
    pub resamples: usize,
    /// Resamples on which the statistic was undefined.
    pub failed: usize,
}

fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let (lo, hi) = (h.floor() as usize, h.ceil() as usize);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Resamples each phase with replacement `resamples` times and returns the
/// percentile interval of `statistic`. Resample `b` uses stream `b` of a
/// ChaCha8 generator seeded with `seed`.
pub fn bootstrap_ci<F>(
    samples: &[&[f64]],
    statistic: F,
    resamples: usize,
    seed: u64,
    level: f64,
) -> Result<BootstrapSummary>
where
    F: Fn(&[PhaseMoments]) -> Result<f64>,
{
    if resamples < MIN_RESAMPLES {
        return Err(Error::validation(format!("at least {MIN_RESAMPLES} resamples needed, got {resamples}")));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::validation(format!("confidence level must lie in (0, 1), got {level}")));
    }
    if samples.iter().any(|s| s.is_empty()) {
        return Err(Error::validation("cannot resample an empty phase"));
    }
    let index_dists: Vec<Uniform<usize>> = samples
        .iter()
        .map(|s| Uniform::new(0, s.len()).map_err(|e| Error::validation(e.to_string())))
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(resamples);
    let mut failed = 0;
    let mut moments = Vec::with_capacity(samples.len());
    for b in 0..resamples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(b as u64);
        moments.clear();
        for (data, dist) in samples.iter().zip(&index_dists) {
            let mut m = PhaseMoments { n: 0, shift: data[0], sum: 0.0, sum_sq: 0.0 };
            for _ in 0..data.len() {
                m.push(data[dist.sample(&mut rng)]);
            }
            moments.push(m);
        }
        match statistic(&moments) {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) | Err(Error::Undefined(_)) | Err(Error::Validation(_)) => failed += 1,
            Err(e) => return Err(e),
        }
    }
    if values.len() * 2 < resamples {
        return Err(Error::Numerical(format!("statistic undefined on {failed} of {resamples} resamples")));
    }
    values.sort_by(f64::total_cmp);
    let tail = 0.5 * (1.0 - level);
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    Ok(BootstrapSummary {
        low: quantile(&values, tail),
        high: quantile(&values, 1.0 - tail),
        std_error: var.sqrt(),
        level,
        resamples,
        failed,
    })
}

/// Bootstrap of `g²` over the four estimator phases.
pub fn bootstrap_g2(trace: &HomodyneTrace, resamples: usize, seed: u64, level: f64) -> Result<BootstrapSummary> {
    let samples = standard_phase_samples(trace)?;
    bootstrap_ci(
        &samples,
        |m| QuadratureMoments::from_array([m[0], m[1], m[2], m[3]]).g2(),
        resamples,
        seed,
        level,
    )
}

/// Delete-a-group jackknife of the plug-in `g²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JackknifeSummary {
    /// `K ĝ − (K − 1) mean(ĝ₋ₖ)`; removes the `O(1/N)` bias of the plug-in ratio.
    pub estimate: f64,
    pub plug_in: f64,
    pub bias: f64,
    pub std_error: f64,
    pub blocks: usize,
}

/// Splits each phase into `blocks` contiguous groups and recomputes `g²` with
/// group `k` removed from every phase.
pub fn jackknife_g2(trace: &HomodyneTrace, blocks: usize) -> Result<JackknifeSummary> {
    if blocks < 2 {
        return Err(Error::validation(format!("jackknife needs at least 2 blocks, got {blocks}")));
    }
    let samples = standard_phase_samples(trace)?;
    if let Some(short) = samples.iter().find(|s| s.len() < 2 * blocks) {
        return Err(Error::validation(format!("{} samples are too few for {blocks} jackknife blocks", short.len())));
    }
    let totals = samples.map(PhaseMoments::from_values);
    let parts: Vec<[PhaseMoments; 4]> = (0..blocks)
        .map(|k| {
            std::array::from_fn(|p| {
                let data = samples[p];
                let (lo, hi) = (k * data.len() / blocks, (k + 1) * data.len() / blocks);
                let mut m = PhaseMoments { n: 0, shift: totals[p].shift, sum: 0.0, sum_sq: 0.0 };
                data[lo..hi].iter().for_each(|&v| m.push(v));
                m
            })
        })
        .collect();
    let plug_in = QuadratureMoments::from_array(totals).g2()?;
    let loo = parts
        .iter()
        .map(|part| QuadratureMoments::from_array(std::array::from_fn(|p| totals[p].without(&part[p]))).g2())
        .collect::<Result<Vec<f64>>>()?;
    let k = blocks as f64;
    let mean = loo.iter().sum::<f64>() / k;
    let bias = (k - 1.0) * (mean - plug_in);
    let spread = loo.iter().map(|v| (v - mean).powi(2)).sum::<f64>();
    Ok(JackknifeSummary {
        estimate: plug_in - bias,
        plug_in,
        bias,
        std_error: ((k - 1.0) / k * spread).sqrt(),
        blocks,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseGaussianity {
    pub theta: f64,
    pub n_samples: usize,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub skewness_threshold: f64,
    pub kurtosis_threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianityReport {
    pub phases: Vec<PhaseGaussianity>,
    /// Thresholds in units of `√(6/N)` (skewness) and `√(24/N)` (kurtosis).
    pub skewness_sigmas: f64,
    pub kurtosis_sigmas: f64,
    pub pass: bool,
}

/// Per-phase sample skewness and excess kurtosis against
/// `skew_sigmas·√(6/N)` and `kurtosis_sigmas·√(24/N)`.
pub fn gaussianity_check(trace: &HomodyneTrace, kurtosis_sigmas: f64, skew_sigmas: f64) -> Result<GaussianityReport> {
    if !(kurtosis_sigmas > 0.0 && skew_sigmas > 0.0) {
        return Err(Error::validation("Gaussianity tolerances must be positive"));
    }
    let mut phases = Vec::new();
    for p in trace.phases() {
        let n = p.values.len();
        if n < MIN_SAMPLES_PER_PHASE {
            return Err(Error::validation(format!(
                "phase {} has {n} samples, at least {MIN_SAMPLES_PER_PHASE} needed",
                p.theta
            )));
        }
        let nf = n as f64;
        let mean = p.values.iter().sum::<f64>() / nf;
        let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
        for v in &p.values {
            let d = v - mean;
            let d2 = d * d;
            m2 += d2;
            m3 += d2 * d;
            m4 += d2 * d2;
        }
        let (m2, m3, m4) = (m2 / nf, m3 / nf, m4 / nf);
        let (skewness, excess_kurtosis) = if m2 > 0.0 {
            (m3 / m2.powf(1.5), m4 / (m2 * m2) - 3.0)
        } else {
            (0.0, 0.0)
        };
        let skewness_threshold = skew_sigmas * (6.0 / nf).sqrt();
        let kurtosis_threshold = kurtosis_sigmas * (24.0 / nf).sqrt();
        let pass = skewness.abs() < skewness_threshold && excess_kurtosis.abs() < kurtosis_threshold;
        phases.push(PhaseGaussianity {
            theta: p.theta,
            n_samples: n,
            skewness,
            excess_kurtosis,
            skewness_threshold,
            kurtosis_threshold,
            pass,
        });
    }
    let pass = phases.iter().all(|p| p.pass);
    Ok(GaussianityReport { phases, skewness_sigmas: skew_sigmas, kurtosis_sigmas, pass })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateOptions {
    pub resamples: usize,
    pub seed: u64,
    pub level: f64,
    pub skewness_sigmas: f64,
    pub kurtosis_sigmas: f64,
    pub jackknife_blocks: usize,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            resamples: DEFAULT_RESAMPLES,
            seed: 0,
            level: DEFAULT_CONFIDENCE,
            skewness_sigmas: DEFAULT_TOLERANCE_SIGMAS,
            kurtosis_sigmas: DEFAULT_TOLERANCE_SIGMAS,
            jackknife_blocks: DEFAULT_JACKKNIFE_BLOCKS,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionResult {
    pub cm: CovarianceMatrix,
    pub x: FirstMoments,
    /// `None` when the reconstructed matrix is unphysical.
    pub fitted: Option<StateFit>,
    /// Bias-corrected point estimate with the percentile bootstrap interval.
    pub g2: G2Result,
    pub jackknife: JackknifeSummary,
    pub bootstrap: BootstrapSummary,
    pub diagnostics: GaussianityReport,
    pub physical: bool,
    pub warnings: Vec<String>,
}

/// Full single-mode pipeline on a trace.
pub fn reconstruct(trace: &HomodyneTrace, options: &EstimateOptions) -> Result<ReconstructionResult> {
    let moments = quadrature_moments(trace)?;
    let (cm, x) = moments.gaussian_moments()?;
    let jackknife = jackknife_g2(trace, options.jackknife_blocks)?;
    let bootstrap = bootstrap_g2(trace, options.resamples, options.seed, options.level)?;
    let diagnostics = gaussianity_check(trace, options.kurtosis_sigmas, options.skewness_sigmas)?;

    let mut warnings = Vec::new();
    let physical = check_physical(&cm).physical;
    let fitted = if physical {
        Some(fit_state_params(&cm, &x)?)
    } else {
        warnings.push(format!("reconstructed covariance matrix is unphysical (det = {:e})", cm.det()));
        None
    };
    if !diagnostics.pass {
        warnings.push("Gaussianity check failed on at least one phase".to_string());
    }
    if bootstrap.failed > 0 {
        warnings.push(format!("g2 undefined on {} bootstrap resamples", bootstrap.failed));
    }
    let ci = ConfidenceInterval { low: bootstrap.low, high: bootstrap.high, level: bootstrap.level };
    Ok(ReconstructionResult {
        cm,
        x,
        fitted,
        g2: G2Result::estimated(jackknife.estimate, bootstrap.std_error, ci),
        jackknife,
        bootstrap,
        diagnostics,
        physical,
        warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedParams {
    #[serde(flatten)]
    pub params: StateParams,
    pub degenerate: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct G2Estimate {
    pub value: f64,
    pub plug_in: f64,
    pub jackknife_bias: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub std_error: f64,
    pub level: f64,
}

/// JSON shape of an estimation result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub cm: Vec<f64>,
    pub x: Vec<f64>,
    pub fitted: Option<FittedParams>,
    pub g2: G2Estimate,
    pub physical: bool,
    pub diagnostics: GaussianityReport,
    pub bootstrap: BootstrapInfo,
    pub warnings: Vec<String>,
    pub convention: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapInfo {
    pub method: String,
    pub resamples: usize,
    pub failed: usize,
    pub seed: u64,
}

impl ReconstructionResult {
    pub fn report(&self, seed: u64) -> EstimateReport {
        EstimateReport {
            cm: self.cm.to_row_major(),
            x: self.x.to_vec(),
            fitted: self.fitted.map(|f| FittedParams { params: StateParams::from(&f.state), degenerate: f.degenerate }),
            g2: G2Estimate {
                value: self.g2.value,
                plug_in: self.jackknife.plug_in,
                jackknife_bias: self.jackknife.bias,
                ci_low: self.bootstrap.low,
                ci_high: self.bootstrap.high,
                std_error: self.bootstrap.std_error,
                level: self.bootstrap.level,
            },
            physical: self.physical,
            diagnostics: self.diagnostics.clone(),
            bootstrap: BootstrapInfo {
                method: "percentile".to_string(),
                resamples: self.bootstrap.resamples,
                failed: self.bootstrap.failed,
                seed,
            },
            warnings: self.warnings.clone(),
            convention: CONVENTION_TAG.to_string(),
        }
    }
}
