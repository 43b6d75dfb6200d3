//! Experiment sweeps and their CSV/JSON reports.

use serde::{Deserialize, Serialize};

use crate::algorithms::{lookup, Algorithm, GenerateParams};
use crate::analysis::run_monte_carlo;
use crate::circuit::{schedule, Circuit, DurationModel, Paradigm};
use crate::error::Result;
use crate::noise::NoiseModel;

/// A full experiment specification with the standard device defaults.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub algorithm: String,
    pub paradigms: Vec<Paradigm>,
    pub n_min: usize,
    pub n_max: usize,
    #[serde(default = "default_iterations")]
    pub iterations: usize,
    #[serde(default)]
    pub noise: crate::noise::NoiseConfig,
    #[serde(default = "default_gbar_mhz")]
    pub gbar_mhz: f64,
    #[serde(default = "default_sqg_ns")]
    pub sqg_time_ns: f64,
    #[serde(default = "default_tqg_ns")]
    pub tqg_time_ns: f64,
    #[serde(default = "default_trials")]
    pub calibration_trials: usize,
}

fn default_iterations() -> usize {
    crate::defaults::ITERATIONS
}
fn default_gbar_mhz() -> f64 {
    10.0
}
fn default_sqg_ns() -> f64 {
    crate::defaults::SQG_TIME * 1e9
}
fn default_tqg_ns() -> f64 {
    crate::defaults::TQG_TIME * 1e9
}
fn default_trials() -> usize {
    crate::defaults::CALIBRATION_TRIALS
}

impl ExperimentConfig {
    pub fn new(algorithm: &str, paradigms: Vec<Paradigm>, n_min: usize, n_max: usize) -> Self {
        ExperimentConfig {
            algorithm: algorithm.into(),
            paradigms,
            n_min,
            n_max,
            iterations: default_iterations(),
            noise: Default::default(),
            gbar_mhz: default_gbar_mhz(),
            sqg_time_ns: default_sqg_ns(),
            tqg_time_ns: default_tqg_ns(),
            calibration_trials: default_trials(),
        }
    }

    pub fn generate_params(&self) -> GenerateParams {
        GenerateParams {
            gbar: crate::hamiltonian::mhz_to_rad_per_s(self.gbar_mhz),
            sqg_time_s: self.sqg_time_ns * 1e-9,
        }
    }

    pub fn duration_model(&self) -> DurationModel {
        DurationModel {
            sqg_time_s: self.sqg_time_ns * 1e-9,
            tqg_time_s: self.tqg_time_ns * 1e-9,
            rz_virtual: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        lookup(&self.algorithm)?;
        if self.n_min < 2 || self.n_max < self.n_min {
            return Err(crate::error::DaqcError::InvalidInput(format!(
                "bad qubit range {}..{}",
                self.n_min, self.n_max
            )));
        }
        if self.paradigms.is_empty() {
            return Err(crate::error::DaqcError::InvalidInput("no paradigms".into()));
        }
        Ok(())
    }
}

/// Per-point outcome: measured values or an explicit skip with its reason.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
pub enum RowOutcome {
    Ok {
        mean_fidelity: f64,
        std_err: f64,
        duration_s: f64,
        n_ab: usize,
        n_tqt: usize,
        n_sqg: usize,
    },
    Skipped {
        reason: String,
    },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub algorithm: String,
    pub paradigm: Paradigm,
    pub n: usize,
    #[serde(flatten)]
    pub outcome: RowOutcome,
}

/// Two-qubit-term count of a circuit: TQG count for digital circuits,
/// blocks × couplings for digital-analog ones.
fn tqt_count(circuit: &Circuit) -> usize {
    let c = circuit
        .resource
        .as_ref()
        .map(|r| r.connectivity().len())
        .unwrap_or(0);
    if circuit.paradigm == Paradigm::Dqc {
        circuit.tqg_count()
    } else {
        circuit.analog_block_count() * c
    }
}

/// Generate, schedule and Monte-Carlo-average one sweep point.
fn sweep_point(
    alg: &dyn Algorithm,
    paradigm: Paradigm,
    n: usize,
    config: &ExperimentConfig,
    model: &NoiseModel,
) -> RowOutcome {
    let params = config.generate_params();
    let circuit = match alg.generate(n, paradigm, &params) {
        Ok(c) => c,
        Err(e) => return RowOutcome::Skipped { reason: e.to_string() },
    };
    let sched = match schedule(&circuit, &config.duration_model()) {
        Ok(s) => s,
        Err(e) => return RowOutcome::Skipped { reason: e.to_string() },
    };
    match run_monte_carlo(&circuit, alg.fidelity_kind(), model, config.iterations) {
        Ok(mc) => RowOutcome::Ok {
            mean_fidelity: mc.mean_fidelity,
            std_err: mc.std_err,
            duration_s: sched.total_duration_s,
            n_ab: circuit.analog_block_count(),
            n_tqt: tqt_count(&circuit),
            n_sqg: circuit.sqg_count(),
        },
        Err(e) => RowOutcome::Skipped { reason: e.to_string() },
    }
}

/// Monte-Carlo sweep across N and paradigms. Infeasible points produce
/// explicit skipped rows; row order is deterministic.
pub fn run_sweep(config: &ExperimentConfig, model: &NoiseModel) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let alg = lookup(&config.algorithm)?;
    let mut rows = Vec::new();
    for n in config.n_min..=config.n_max {
        for &paradigm in &config.paradigms {
            rows.push(SweepRow {
                algorithm: config.algorithm.clone(),
                paradigm,
                n,
                outcome: sweep_point(alg, paradigm, n, config, model),
            });
        }
    }
    Ok(rows)
}

/// Scheduling-only sweep (no simulation), so N can extend well past the
/// dense-simulation cap.
pub fn run_durations(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let alg = lookup(&config.algorithm)?;
    let params = config.generate_params();
    let dm = config.duration_model();
    let mut rows = Vec::new();
    for n in config.n_min..=config.n_max {
        for &paradigm in &config.paradigms {
            let outcome = match alg
                .generate(n, paradigm, &params)
                .and_then(|c| schedule(&c, &dm).map(|s| (c, s)))
            {
                Ok((c, s)) => RowOutcome::Ok {
                    mean_fidelity: f64::NAN,
                    std_err: f64::NAN,
                    duration_s: s.total_duration_s,
                    n_ab: c.analog_block_count(),
                    n_tqt: tqt_count(&c),
                    n_sqg: c.sqg_count(),
                },
                Err(e) => RowOutcome::Skipped { reason: e.to_string() },
            };
            rows.push(SweepRow { algorithm: config.algorithm.clone(), paradigm, n, outcome });
        }
    }
    Ok(rows)
}

/// Duration of one algorithm/paradigm/size point, if it compiles.
pub fn duration_of(
    alg: &dyn Algorithm,
    paradigm: Paradigm,
    n: usize,
    params: &GenerateParams,
    dm: &DurationModel,
) -> Result<f64> {
    let c = alg.generate(n, paradigm, params)?;
    Ok(schedule(&c, dm)?.total_duration_s)
}

/// Proportional (through-origin) fit of the stepwise durations over a range:
/// the O(N) duration model t(N) = slope · N used by the trade-off study.
pub fn daqc_duration_slope(
    alg: &dyn Algorithm,
    ns: impl Iterator<Item = usize>,
    params: &GenerateParams,
    dm: &DurationModel,
) -> Result<f64> {
    let mut num = 0.0;
    let mut den = 0.0;
    for n in ns {
        let t = duration_of(alg, Paradigm::Sdaqc, n, params, dm)?;
        num += t * n as f64;
        den += (n * n) as f64;
    }
    Ok(num / den)
}

/// CSV with one line per sweep row; formatting is fixed so identical seeds
/// produce byte-identical files.
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(
        "algorithm,paradigm,n,mean_fidelity,std_err,duration_s,n_ab,n_tqt,n_sqg,note\n",
    );
    for r in rows {
        match &r.outcome {
            RowOutcome::Ok { mean_fidelity, std_err, duration_s, n_ab, n_tqt, n_sqg } => {
                let fid = if mean_fidelity.is_nan() {
                    String::new()
                } else {
                    format!("{mean_fidelity:.12}")
                };
                let se = if std_err.is_nan() { String::new() } else { format!("{std_err:.6e}") };
                out.push_str(&format!(
                    "{},{},{},{},{},{:.9e},{},{},{},\n",
                    r.algorithm,
                    r.paradigm.as_str(),
                    r.n,
                    fid,
                    se,
                    duration_s,
                    n_ab,
                    n_tqt,
                    n_sqg
                ));
            }
            RowOutcome::Skipped { reason } => {
                out.push_str(&format!(
                    "{},{},{},,,,,,,skipped({})\n",
                    r.algorithm,
                    r.paradigm.as_str(),
                    r.n,
                    reason.replace(',', ";")
                ));
            }
        }
    }
    out
}

pub fn rows_to_json(rows: &[SweepRow]) -> String {
    serde_json::to_string_pretty(rows).expect("report serialization")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ghz_sweep_has_one_row_per_point() {
        let mut config =
            ExperimentConfig::new("star-ghz", vec![Paradigm::Dqc, Paradigm::Sdaqc], 2, 4);
        config.iterations = 5;
        let model = NoiseModel::noiseless(1);
        let rows = run_sweep(&config, &model).unwrap();
        assert_eq!(rows.len(), 6);
        for r in &rows {
            match &r.outcome {
                RowOutcome::Ok { mean_fidelity, .. } => {
                    assert!((mean_fidelity - 1.0).abs() < 1e-9, "noiseless mean");
                }
                RowOutcome::Skipped { reason } => panic!("unexpected skip: {reason}"),
            }
        }
    }

    #[test]
    fn ata4_point_is_skipped_with_reason() {
        let mut config = ExperimentConfig::new("ata-qft", vec![Paradigm::Sdaqc], 4, 4);
        config.iterations = 2;
        let rows = run_sweep(&config, &NoiseModel::noiseless(0)).unwrap();
        match &rows[0].outcome {
            RowOutcome::Skipped { reason } => assert!(reason.contains("singular")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn csv_is_deterministic() {
        let mut config = ExperimentConfig::new("star-ghz", vec![Paradigm::Sdaqc], 2, 3);
        config.iterations = 4;
        let model = NoiseModel::noiseless(9);
        let a = rows_to_csv(&run_sweep(&config, &model).unwrap());
        let b = rows_to_csv(&run_sweep(&config, &model).unwrap());
        assert_eq!(a, b);
        assert!(a.contains("star-ghz,sdaqc,2,"));
    }

    #[test]
    fn config_validation() {
        let config = ExperimentConfig::new("nope", vec![Paradigm::Dqc], 2, 3);
        assert!(config.validate().is_err());
        let config = ExperimentConfig::new("star-ghz", vec![], 2, 3);
        assert!(config.validate().is_err());
        let config = ExperimentConfig::new("star-ghz", vec![Paradigm::Dqc], 3, 2);
        assert!(config.validate().is_err());
    }
}
