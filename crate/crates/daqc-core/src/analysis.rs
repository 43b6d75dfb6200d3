//! Analytic error predictors, Monte-Carlo averaging, curve fits and the
//! control-vs-decoherence trade-off study.

use rayon::prelude::*;

use crate::algorithms::FidelityKind;
use crate::circuit::Circuit;
use crate::error::{DaqcError, Result};
use crate::noise::{perturb, NoiseModel};
use crate::simulator::{average_unitary_fidelity, simulate_state, simulate_unitary, state_fidelity};

/// Inputs to the compound (product-form) fidelity model.
#[derive(Debug, Clone, Copy)]
pub struct CompoundFidelityInputs {
    pub f_tqg: f64,
    pub f_sqg: f64,
    pub f_ramp: f64,
    pub f_coupling: f64,
    /// Two-qubit terms: TQG count for digital circuits, blocks × couplings
    /// for digital-analog ones.
    pub n_tqt: u64,
    pub n_sqg: u64,
    pub n_ab: u64,
    /// Connectivity size c.
    pub c: u64,
    pub num_qubits: u32,
    pub t_tot_s: f64,
    pub t1_s: Option<f64>,
    /// Per-block banged non-commutativity infidelity.
    pub eps_central: f64,
}

impl CompoundFidelityInputs {
    fn decoherence(&self) -> f64 {
        match self.t1_s {
            Some(t1) => (-(self.num_qubits as f64) * self.t_tot_s / t1).exp(),
            None => 1.0,
        }
    }
}

/// Which product-form fidelity model applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompoundParadigm {
    Dqc,
    Sdaqc,
    Bdaqc,
}

/// Product-form compound fidelity:
///   DQC:   f_TQG^{n_TQT} · e^{-N t/T1}
///   sDAQC: (f_ramp f_coupling)^{n_TQT} · f_SQG^{n_SQG} · e^{-N t/T1}
///   bDAQC: f_ramp^c · f_coupling^{n_TQT} · f_SQG^{n_SQG} · e^{-N t/T1} · (1-ε)^{n_AB}
pub fn compound_fidelity(paradigm: CompoundParadigm, inputs: &CompoundFidelityInputs) -> f64 {
    let dec = inputs.decoherence();
    match paradigm {
        CompoundParadigm::Dqc => inputs.f_tqg.powi(inputs.n_tqt as i32) * dec,
        CompoundParadigm::Sdaqc => {
            (inputs.f_ramp * inputs.f_coupling).powi(inputs.n_tqt as i32)
                * inputs.f_sqg.powi(inputs.n_sqg as i32)
                * dec
        }
        CompoundParadigm::Bdaqc => {
            inputs.f_ramp.powi(inputs.c as i32)
                * inputs.f_coupling.powi(inputs.n_tqt as i32)
                * inputs.f_sqg.powi(inputs.n_sqg as i32)
                * dec
                * (1.0 - inputs.eps_central).powi(inputs.n_ab as i32)
        }
    }
}

/// Closed-form banged central-block error for an X pulse on a qubit of
/// degree d overlapping a homogeneous ZZ resource:
///   e = (Δt³/4)·√((dḡ)⁴(2π/Δt)² + (2dḡ)²(π/Δt)⁴),
/// linear in Δt at leading order: e ≈ π²dḡΔt/2.
pub fn bdaqc_central_error(degree: usize, gbar: f64, sqg_time_s: f64) -> f64 {
    let d = degree as f64;
    let dt = sqg_time_s;
    let term1 = (d * gbar).powi(4) * (2.0 * std::f64::consts::PI / dt).powi(2);
    let term2 = (2.0 * d * gbar).powi(2) * (std::f64::consts::PI / dt).powi(4);
    dt.powi(3) / 4.0 * (term1 + term2).sqrt()
}

/// Mean, spread and standard error of a Monte-Carlo fidelity series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloResult {
    pub mean_fidelity: f64,
    pub std_dev: f64,
    pub std_err: f64,
    pub iterations: usize,
}

/// Average the noisy fidelity of a circuit against its own ideal over
/// independently-seeded draws.
///
/// Iterations run in parallel; each draw owns the RNG stream derived from
/// (model seed, iteration index), so the result is independent of the worker
/// count. Aggregation uses compensated summation over the index-ordered
/// values.
pub fn run_monte_carlo(
    circuit: &Circuit,
    kind: FidelityKind,
    model: &NoiseModel,
    iterations: usize,
) -> Result<MonteCarloResult> {
    if iterations == 0 {
        return Err(DaqcError::InvalidInput("zero iterations".into()));
    }
    let values: Vec<f64> = match kind {
        FidelityKind::Unitary => {
            let ideal = simulate_unitary(circuit)?;
            (0..iterations)
                .into_par_iter()
                .map(|i| {
                    let noisy = simulate_unitary(&perturb(circuit, model, i as u64))
                        .expect("noisy simulation");
                    average_unitary_fidelity(&ideal, &noisy).expect("dimensions")
                })
                .collect()
        }
        FidelityKind::State => {
            let ideal = simulate_state(circuit)?;
            (0..iterations)
                .into_par_iter()
                .map(|i| {
                    let noisy = simulate_state(&perturb(circuit, model, i as u64))
                        .expect("noisy simulation");
                    state_fidelity(&noisy, &ideal).expect("dimensions")
                })
                .collect()
        }
    };
    let mean = kahan_sum(values.iter().copied()) / iterations as f64;
    let var = kahan_sum(values.iter().map(|v| (v - mean) * (v - mean)))
        / (iterations.max(2) - 1) as f64;
    let std_dev = var.sqrt();
    Ok(MonteCarloResult {
        mean_fidelity: mean,
        std_dev,
        std_err: std_dev / (iterations as f64).sqrt(),
        iterations,
    })
}

fn kahan_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let y = v - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    sum
}

// ---------------------------------------------------------------------------
// Curve fits
// ---------------------------------------------------------------------------

/// Power-law-with-offset fit t(N) ≈ amplitude · N^exponent + offset,
/// log-domain linear least squares with the offset found by golden-section.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DurationFit {
    pub amplitude: f64,
    pub exponent: f64,
    pub offset: f64,
    pub residual: f64,
}

pub fn fit_duration_power(ns: &[f64], ts: &[f64]) -> Result<DurationFit> {
    if ns.len() != ts.len() || ns.len() < 4 {
        return Err(DaqcError::InvalidInput("need at least 4 points".into()));
    }
    let tmin = ts.iter().cloned().fold(f64::INFINITY, f64::min);
    let sse = |c: f64| -> (f64, f64, f64) {
        // linear LSQ of ln(t - c) on ln N
        let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
        let m = ns.len() as f64;
        for (&n, &t) in ns.iter().zip(ts) {
            let x = n.ln();
            let y = (t - c).ln();
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        let b = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        let a = ((sy - b * sx) / m).exp();
        let r: f64 = ns
            .iter()
            .zip(ts)
            .map(|(&n, &t)| {
                let e = a * n.powf(b) + c - t;
                e * e
            })
            .sum();
        (r, a, b)
    };
    let (mut lo, mut hi) = (-2.0 * tmin.abs().max(1e-300), 0.999 * tmin);
    const PHI: f64 = 0.618_033_988_749_894_9;
    for _ in 0..120 {
        let m1 = hi - PHI * (hi - lo);
        let m2 = lo + PHI * (hi - lo);
        if sse(m1).0 < sse(m2).0 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let c = 0.5 * (lo + hi);
    let (r, a, b) = sse(c);
    Ok(DurationFit { amplitude: a, exponent: b, offset: c, residual: r.sqrt() })
}

/// Fidelity-curve fit ⟨F⟩ ≈ f^{a·N^b} + c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    pub f: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub residual: f64,
}

impl FitResult {
    pub const fn new(f: f64, a: f64, b: f64, c: f64) -> Self {
        FitResult { f, a, b, c, residual: 0.0 }
    }

    pub fn eval(&self, n: f64) -> f64 {
        self.f.powf(self.a * n.powf(self.b)) + self.c
    }
}

/// Fitted fidelity-curve parameters used by the trade-off study of the star
/// QFT benchmarks.
pub mod tradeoff_fits {
    use super::FitResult;
    pub const DQC: FitResult = FitResult::new(0.99986, 0.92985, 2.3882, -1.58e-4);
    pub const SDAQC: FitResult = FitResult::new(0.99831, 0.06445, 3.8571, -2.94e-4);
    pub const BDAQC: FitResult = FitResult::new(0.99858, 0.42443, 2.8559, -0.02373);
}

/// Nonlinear least squares for the fidelity form, Nelder-Mead over bounded
/// transformed parameters. Deterministic given data and the initial guess
/// (f = single-op estimate, a = 1, b = 2, c = 0); b stays in (0, 6].
pub fn fit_fidelity_signomial(ns: &[f64], fs: &[f64], f_init: f64) -> Result<FitResult> {
    if ns.len() != fs.len() || ns.len() < 4 {
        return Err(DaqcError::InvalidInput("need at least 4 points".into()));
    }
    // transforms: f = exp(-e^{p0}), a = e^{p1}, b = 6/(1+e^{-p2}), c = p3
    let unpack = |p: &[f64; 4]| -> FitResult {
        FitResult {
            f: (-p[0].exp()).exp(),
            a: p[1].exp(),
            b: 6.0 / (1.0 + (-p[2]).exp()),
            c: p[3],
            residual: 0.0,
        }
    };
    let cost = |p: &[f64; 4]| -> f64 {
        let fit = unpack(p);
        ns.iter()
            .zip(fs)
            .map(|(&n, &y)| {
                let e = fit.eval(n) - y;
                e * e
            })
            .sum()
    };
    let f0 = f_init.clamp(1e-6, 1.0 - 1e-12);
    let p0 = [(-f0.ln()).ln(), 0.0, logit(2.0 / 6.0), 0.0];
    let best = nelder_mead(cost, p0, 4000);
    let mut fit = unpack(&best);
    fit.residual = cost(&best).sqrt();
    Ok(fit)
}

fn logit(x: f64) -> f64 {
    (x / (1.0 - x)).ln()
}

fn nelder_mead<F: Fn(&[f64; 4]) -> f64>(f: F, start: [f64; 4], max_iter: usize) -> [f64; 4] {
    const DIM: usize = 4;
    let mut simplex: Vec<[f64; 4]> = vec![start];
    for i in 0..DIM {
        let mut v = start;
        v[i] += if v[i].abs() > 1e-3 { 0.25 * v[i].abs() } else { 0.25 };
        simplex.push(v);
    }
    let mut vals: Vec<f64> = simplex.iter().map(&f).collect();
    for _ in 0..max_iter {
        // order ascending
        let mut idx: Vec<usize> = (0..=DIM).collect();
        idx.sort_by(|&a, &b| vals[a].partial_cmp(&vals[b]).unwrap());
        let ordered: Vec<[f64; 4]> = idx.iter().map(|&i| simplex[i]).collect();
        let ovals: Vec<f64> = idx.iter().map(|&i| vals[i]).collect();
        simplex = ordered;
        vals = ovals;
        if (vals[DIM] - vals[0]).abs() < 1e-16 * (1.0 + vals[0].abs()) {
            break;
        }
        let mut centroid = [0.0; 4];
        for p in simplex.iter().take(DIM) {
            for k in 0..DIM {
                centroid[k] += p[k] / DIM as f64;
            }
        }
        let worst = simplex[DIM];
        let lerp = |t: f64| {
            let mut v = [0.0; 4];
            for k in 0..DIM {
                v[k] = centroid[k] + t * (centroid[k] - worst[k]);
            }
            v
        };
        let refl = lerp(1.0);
        let fr = f(&refl);
        if fr < vals[0] {
            let exp = lerp(2.0);
            let fe = f(&exp);
            if fe < fr {
                simplex[DIM] = exp;
                vals[DIM] = fe;
            } else {
                simplex[DIM] = refl;
                vals[DIM] = fr;
            }
        } else if fr < vals[DIM - 1] {
            simplex[DIM] = refl;
            vals[DIM] = fr;
        } else {
            let contr = lerp(if fr < vals[DIM] { 0.5 } else { -0.5 });
            let fc = f(&contr);
            if fc < vals[DIM].min(fr) {
                simplex[DIM] = contr;
                vals[DIM] = fc;
            } else {
                // shrink toward the best vertex
                let best = simplex[0];
                for i in 1..=DIM {
                    for k in 0..DIM {
                        simplex[i][k] = best[k] + 0.5 * (simplex[i][k] - best[k]);
                    }
                    vals[i] = f(&simplex[i]);
                }
            }
        }
    }
    let mut bi = 0;
    for i in 1..=DIM {
        if vals[i] < vals[bi] {
            bi = i;
        }
    }
    simplex[bi]
}

// ---------------------------------------------------------------------------
// Trade-off study
// ---------------------------------------------------------------------------

/// One evaluated point of the trade-off study.
#[derive(Debug, Clone, Copy)]
pub struct TradeoffPoint {
    pub n: usize,
    pub f_dqc: f64,
    pub f_sdaqc: f64,
    pub f_bdaqc: f64,
}

#[derive(Debug, Clone)]
pub struct TradeoffResult {
    pub points: Vec<TradeoffPoint>,
    /// Interpolated crossover where the better digital-analog variant first
    /// exceeds the digital curve, if any.
    pub crossover_daqc: Option<f64>,
    pub crossover_sdaqc: Option<f64>,
    pub crossover_bdaqc: Option<f64>,
}

/// Total fidelity F ≈ ⟨F_U⟩ · e^{-N t / T1} per paradigm, over a range of N.
///
/// `durations` maps N to (digital, digital-analog) execution times in
/// seconds. Crossovers are located by linear interpolation between integer
/// evaluations.
pub fn total_fidelity_tradeoff(
    fits: (&FitResult, &FitResult, &FitResult),
    ns: &[usize],
    durations: &dyn Fn(usize) -> (f64, f64),
    t1_s: Option<f64>,
) -> TradeoffResult {
    let (fit_dqc, fit_sdaqc, fit_bdaqc) = fits;
    let dec = |n: usize, t: f64| match t1_s {
        Some(t1) => (-(n as f64) * t / t1).exp(),
        None => 1.0,
    };
    let points: Vec<TradeoffPoint> = ns
        .iter()
        .map(|&n| {
            let (td, ta) = durations(n);
            TradeoffPoint {
                n,
                f_dqc: fit_dqc.eval(n as f64) * dec(n, td),
                f_sdaqc: fit_sdaqc.eval(n as f64) * dec(n, ta),
                f_bdaqc: fit_bdaqc.eval(n as f64) * dec(n, ta),
            }
        })
        .collect();
    let crossover = |sel: &dyn Fn(&TradeoffPoint) -> f64| -> Option<f64> {
        for w in points.windows(2) {
            let (d0, a0) = (w[0].f_dqc, sel(&w[0]));
            let (d1, a1) = (w[1].f_dqc, sel(&w[1]));
            if a0 <= d0 && a1 > d1 {
                let g0 = a0 - d0;
                let g1 = a1 - d1;
                let frac = if (g1 - g0).abs() > 0.0 { -g0 / (g1 - g0) } else { 0.0 };
                return Some(w[0].n as f64 + frac * (w[1].n - w[0].n) as f64);
            }
        }
        if let Some(first) = points.first() {
            if sel(first) > first.f_dqc {
                return Some(first.n as f64);
            }
        }
        None
    };
    TradeoffResult {
        crossover_sdaqc: crossover(&|p| p.f_sdaqc),
        crossover_bdaqc: crossover(&|p| p.f_bdaqc),
        crossover_daqc: crossover(&|p| p.f_sdaqc.max(p.f_bdaqc)),
        points,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compound_fidelity_is_one_when_perfect() {
        let inputs = CompoundFidelityInputs {
            f_tqg: 1.0,
            f_sqg: 1.0,
            f_ramp: 1.0,
            f_coupling: 1.0,
            n_tqt: 9,
            n_sqg: 12,
            n_ab: 3,
            c: 3,
            num_qubits: 3,
            t_tot_s: 1e-6,
            t1_s: None,
            eps_central: 0.0,
        };
        for p in [CompoundParadigm::Dqc, CompoundParadigm::Sdaqc, CompoundParadigm::Bdaqc] {
            assert_eq!(compound_fidelity(p, &inputs), 1.0);
        }
    }

    #[test]
    fn compound_dqc_worked_value() {
        let mut inputs = CompoundFidelityInputs {
            f_tqg: 0.999,
            f_sqg: 1.0,
            f_ramp: 1.0,
            f_coupling: 1.0,
            n_tqt: 3,
            n_sqg: 0,
            n_ab: 0,
            c: 3,
            num_qubits: 3,
            t_tot_s: 0.0,
            t1_s: None,
            eps_central: 0.0,
        };
        let f = compound_fidelity(CompoundParadigm::Dqc, &inputs);
        assert!((f - 0.999f64.powi(3)).abs() < 1e-15);
        // one target Hamiltonian in sDAQC exposes c² two-qubit terms
        inputs.n_tqt = 9;
        inputs.f_ramp = 0.9995;
        inputs.f_coupling = 0.9995;
        let f = compound_fidelity(CompoundParadigm::Sdaqc, &inputs);
        assert!((f - (0.9995f64 * 0.9995).powi(9)).abs() < 1e-12);
    }

    #[test]
    fn compound_monotonicity() {
        let base = CompoundFidelityInputs {
            f_tqg: 0.999,
            f_sqg: 0.9999,
            f_ramp: 0.9995,
            f_coupling: 0.9995,
            n_tqt: 20,
            n_sqg: 10,
            n_ab: 5,
            c: 5,
            num_qubits: 4,
            t_tot_s: 1e-6,
            t1_s: Some(50e-6),
            eps_central: 1e-3,
        };
        let f0 = compound_fidelity(CompoundParadigm::Bdaqc, &base);
        let mut more = base;
        more.n_tqt += 5;
        assert!(compound_fidelity(CompoundParadigm::Bdaqc, &more) < f0);
        let mut better = base;
        better.f_coupling = 0.9999;
        assert!(compound_fidelity(CompoundParadigm::Bdaqc, &better) > f0);
    }

    #[test]
    fn central_error_scales_linearly_in_degree_and_dt() {
        let g = 1e7;
        let e1 = bdaqc_central_error(1, g, 5e-9);
        let e2 = bdaqc_central_error(2, g, 5e-9);
        assert!((e2 / e1 - 2.0).abs() < 0.05);
        let eh = bdaqc_central_error(1, g, 2.5e-9);
        assert!((e1 / eh - 2.0).abs() < 0.05);
        // leading term π² d ḡ Δt / 2
        let lead = std::f64::consts::PI.powi(2) * g * 5e-9 / 2.0;
        assert!((e1 - lead).abs() / lead < 0.05);
    }

    #[test]
    fn duration_fit_recovers_power_law() {
        let ns: Vec<f64> = (3..=20).map(|n| n as f64).collect();
        let ts: Vec<f64> = ns.iter().map(|n| 2.0 * n.powf(2.0) + 5.0).collect();
        let fit = fit_duration_power(&ns, &ts).unwrap();
        assert!((fit.exponent - 2.0).abs() < 0.05, "{fit:?}");
    }

    #[test]
    fn fidelity_fit_recovers_synthetic_parameters() {
        let ns: Vec<f64> = (2..=10).map(|n| n as f64).collect();
        let truth = FitResult::new(0.999, 1.0, 2.0, 0.0);
        let fs: Vec<f64> = ns.iter().map(|&n| truth.eval(n)).collect();
        let fit = fit_fidelity_signomial(&ns, &fs, 0.999).unwrap();
        assert!(fit.b >= 1.95 && fit.b <= 2.05, "recovered b = {}", fit.b);
    }

    #[test]
    fn tradeoff_without_decoherence_follows_the_fits() {
        let ns: Vec<usize> = (3..=15).collect();
        let fits = (&tradeoff_fits::DQC, &tradeoff_fits::SDAQC, &tradeoff_fits::BDAQC);
        let res = total_fidelity_tradeoff(fits, &ns, &|_| (1e-6, 1e-6), None);
        // digital fit dominates everywhere without decoherence
        assert!(res.crossover_daqc.is_none());
        for p in &res.points {
            assert!(p.f_dqc > p.f_sdaqc && p.f_dqc > p.f_bdaqc);
        }
    }
}
