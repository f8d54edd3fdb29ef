//! Synthetic homodyne traces: phase-tagged quadrature samples drawn from
//! the exact normal marginals of a single-mode Gaussian state.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    check_physical, cm_single, CovarianceMatrix, FirstMoments, SingleModeState, SqueezingParam, CONVENTION_TAG,
};

/// Name recorded in trace metadata for the sample generator.
pub const RNG_NAME: &str = "ChaCha8 (rand_chacha), stream = phase index; normal via rand_distr::Normal";

/// Per-phase sample count used when none is given.
pub const DEFAULT_SAMPLES_PER_PHASE: usize = 100_000;

/// Phases at which the single-mode estimator needs data: `0, π/2, π/4, −π/4`.
pub const STANDARD_PHASES: [f64; 4] = [0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseSetting {
    pub theta: f64,
    pub n_samples: usize,
}

/// Ordered list of local-oscillator phases with their sample counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<PhaseSetting>", into = "Vec<PhaseSetting>")]
pub struct PhaseSchedule {
    entries: Vec<PhaseSetting>,
}

impl PhaseSchedule {
    pub fn new(entries: Vec<PhaseSetting>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::validation("phase schedule is empty"));
        }
        for (i, e) in entries.iter().enumerate() {
            if !e.theta.is_finite() {
                return Err(Error::validation(format!("phase {i} is not finite")));
            }
            if e.n_samples == 0 {
                return Err(Error::validation(format!("phase {i} has no samples")));
            }
            if entries[..i].iter().any(|p| p.theta.to_bits() == e.theta.to_bits()) {
                return Err(Error::validation(format!("phase {} listed twice", e.theta)));
            }
        }
        Ok(PhaseSchedule { entries })
    }

    /// `[(0, n), (π/2, n), (π/4, n), (−π/4, n)]`.
    pub fn standard(n_samples: usize) -> Result<Self> {
        Self::new(STANDARD_PHASES.iter().map(|&theta| PhaseSetting { theta, n_samples }).collect())
    }

    pub fn entries(&self) -> &[PhaseSetting] {
        &self.entries
    }

    pub fn total_samples(&self) -> usize {
        self.entries.iter().map(|e| e.n_samples).sum()
    }
}

impl TryFrom<Vec<PhaseSetting>> for PhaseSchedule {
    type Error = Error;
    fn try_from(entries: Vec<PhaseSetting>) -> Result<Self> {
        PhaseSchedule::new(entries)
    }
}

impl From<PhaseSchedule> for Vec<PhaseSetting> {
    fn from(s: PhaseSchedule) -> Self {
        s.entries
    }
}

/// Parameters of the generating state, as stored in metadata.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateParams {
    pub alpha_re: f64,
    pub alpha_im: f64,
    pub r: f64,
    pub psi: f64,
    pub n_th: f64,
}

impl From<&SingleModeState> for StateParams {
    fn from(s: &SingleModeState) -> Self {
        StateParams { alpha_re: s.alpha().re, alpha_im: s.alpha().im, r: s.r(), psi: s.psi(), n_th: s.n_th() }
    }
}

impl StateParams {
    pub fn to_state(&self) -> Result<SingleModeState> {
        SingleModeState::new(
            Complex64::new(self.alpha_re, self.alpha_im),
            SqueezingParam::new(self.r, self.psi)?,
            self.n_th,
        )
    }
}

/// Sidecar metadata of a trace file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceMetadata {
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub schedule: PhaseSchedule,
    pub convention: String,
    #[serde(default)]
    pub state: Option<StateParams>,
    #[serde(default)]
    pub timestamp: Option<String>,
    /// Reserved for a detection-efficiency model; always `None` for now.
    #[serde(default)]
    pub efficiency: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub theta: f64,
    pub value: f64,
}

/// Quadrature samples of one phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSamples {
    pub theta: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomodyneTrace {
    phases: Vec<PhaseSamples>,
    metadata: TraceMetadata,
}

impl HomodyneTrace {
    /// Groups records by phase (exact match) and checks them against the
    /// schedule in `metadata`. Without metadata the schedule is inferred in
    /// order of first appearance.
    pub fn from_records(records: &[Sample], metadata: Option<TraceMetadata>) -> Result<Self> {
        let mut phases: Vec<PhaseSamples> = Vec::new();
        for rec in records {
            match phases.iter_mut().find(|p| p.theta.to_bits() == rec.theta.to_bits()) {
                Some(p) => p.values.push(rec.value),
                None => phases.push(PhaseSamples { theta: rec.theta, values: vec![rec.value] }),
            }
        }
        let metadata = match metadata {
            Some(m) => m,
            None => TraceMetadata {
                seed: None,
                rng: None,
                schedule: PhaseSchedule::new(
                    phases.iter().map(|p| PhaseSetting { theta: p.theta, n_samples: p.values.len() }).collect(),
                )?,
                convention: CONVENTION_TAG.to_string(),
                state: None,
                timestamp: None,
                efficiency: None,
            },
        };
        Self::from_phases(phases, metadata)
    }

    fn from_phases(mut phases: Vec<PhaseSamples>, metadata: TraceMetadata) -> Result<Self> {
        if metadata.convention != CONVENTION_TAG {
            return Err(Error::validation(format!(
                "trace uses convention '{}', expected '{CONVENTION_TAG}'",
                metadata.convention
            )));
        }
        let schedule = metadata.schedule.entries();
        for p in &phases {
            if !schedule.iter().any(|e| e.theta.to_bits() == p.theta.to_bits()) {
                return Err(Error::validation(format!("phase {} is not in the schedule", p.theta)));
            }
        }
        let mut ordered = Vec::with_capacity(schedule.len());
        for e in schedule {
            let idx = phases.iter().position(|p| p.theta.to_bits() == e.theta.to_bits());
            let found = idx.map(|i| phases[i].values.len()).unwrap_or(0);
            if found != e.n_samples {
                return Err(Error::validation(format!(
                    "phase {} has {found} samples, schedule expects {}",
                    e.theta, e.n_samples
                )));
            }
            ordered.push(phases.swap_remove(idx.expect("count checked above")));
        }
        Ok(HomodyneTrace { phases: ordered, metadata })
    }

    pub fn phases(&self) -> &[PhaseSamples] {
        &self.phases
    }

    pub fn metadata(&self) -> &TraceMetadata {
        &self.metadata
    }

    /// Records in schedule order.
    pub fn records(&self) -> impl Iterator<Item = Sample> + '_ {
        self.phases
            .iter()
            .flat_map(|p| p.values.iter().map(move |&value| Sample { theta: p.theta, value }))
    }

    pub fn len(&self) -> usize {
        self.phases.iter().map(|p| p.values.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes the `theta,value` CSV.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        self.write_csv_to(&mut out)?;
        out.flush()?;
        Ok(())
    }

    pub fn write_csv_to(&self, out: &mut (impl Write + ?Sized)) -> Result<()> {
        writeln!(out, "theta,value")?;
        for s in self.records() {
            writeln!(out, "{:?},{:?}", s.theta, s.value)?;
        }
        Ok(())
    }

    pub fn write_metadata(&self, path: &Path) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut out, &self.metadata)?;
        writeln!(out)?;
        out.flush()?;
        Ok(())
    }

    /// Reads a trace CSV and, if given, its metadata sidecar.
    pub fn read(csv_path: &Path, metadata_path: Option<&Path>) -> Result<Self> {
        let records = read_csv(csv_path)?;
        let metadata = match metadata_path {
            Some(p) => Some(read_metadata(p)?),
            None => None,
        };
        Self::from_records(&records, metadata)
    }
}

pub fn read_metadata(path: &Path) -> Result<TraceMetadata> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format {
        path: path.display().to_string(),
        row: e.line(),
        message: e.to_string(),
    })
}

/// Parses a `theta,value` CSV. Row numbers in errors are file line numbers.
pub fn read_csv(path: &Path) -> Result<Vec<Sample>> {
    let display = path.display().to_string();
    let fail = |row: usize, message: String| Error::Format { path: display.clone(), row, message };
    let file = File::open(path)?;
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file);
    let headers = reader.headers().map_err(|e| fail(1, e.to_string()))?.clone();
    if headers.len() != 2 || &headers[0] != "theta" || &headers[1] != "value" {
        return Err(fail(1, format!("expected header 'theta,value', found '{}'", headers.iter().collect::<Vec<_>>().join(","))));
    }
    let mut out = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| {
            let row = e.position().map(|p| p.line() as usize).unwrap_or(0);
            fail(row, e.to_string())
        })?;
        let row = rec.position().map(|p| p.line() as usize).unwrap_or(0);
        if rec.len() != 2 {
            return Err(fail(row, format!("expected 2 fields, found {}", rec.len())));
        }
        let parse = |field: &str, name: &str| -> Result<f64> {
            let v: f64 = field.parse().map_err(|_| fail(row, format!("{name} '{field}' is not a number")))?;
            if !v.is_finite() {
                return Err(fail(row, format!("{name} '{field}' is not finite")));
            }
            Ok(v)
        };
        out.push(Sample { theta: parse(&rec[0], "theta")?, value: parse(&rec[1], "value")? });
    }
    if out.is_empty() {
        return Err(fail(1, "no samples".into()));
    }
    Ok(out)
}

/// Mean and variance of `x_θ = cos θ q + sin θ p`.
pub fn quadrature_stats(cm: &CovarianceMatrix, x: &FirstMoments, theta: f64) -> Result<(f64, f64)> {
    if cm.modes() != 1 || x.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: cm.dim().max(x.dim()) });
    }
    if !check_physical(cm).physical {
        return Err(Error::validation("covariance matrix is unphysical"));
    }
    let (c, s) = (theta.cos(), theta.sin());
    let mean = c * x.get(0) + s * x.get(1);
    let var = c * c * cm.get(0, 0) + s * s * cm.get(1, 1) + 2.0 * s * c * cm.get(0, 1);
    Ok((mean, var))
}

/// Draws i.i.d. normal samples per phase; phase `i` uses stream `i` of a
/// ChaCha8 generator seeded with `seed`.
pub fn simulate_trace(state: &SingleModeState, schedule: &PhaseSchedule, seed: u64) -> Result<HomodyneTrace> {
    let (cm, x) = cm_single(state);
    let mut phases = Vec::with_capacity(schedule.entries().len());
    for (i, e) in schedule.entries().iter().enumerate() {
        let (mean, var) = quadrature_stats(&cm, &x, e.theta)?;
        let normal = Normal::new(mean, var.sqrt()).map_err(|err| Error::Numerical(err.to_string()))?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64);
        let values = (0..e.n_samples).map(|_| normal.sample(&mut rng)).collect();
        phases.push(PhaseSamples { theta: e.theta, values });
    }
    let metadata = TraceMetadata {
        seed: Some(seed),
        rng: Some(RNG_NAME.to_string()),
        schedule: schedule.clone(),
        convention: CONVENTION_TAG.to_string(),
        state: Some(StateParams::from(state)),
        timestamp: Some(chrono::Utc::now().to_rfc3339()),
        efficiency: None,
    };
    HomodyneTrace::from_phases(phases, metadata)
}
