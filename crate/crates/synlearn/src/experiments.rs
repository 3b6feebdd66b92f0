//! Scaling experiments: accuracy vs shots, shots vs physical rate, and the
//! sample-complexity comparison between predicted and directly sampled
//! logical error probability.
//!
//! Every run is driven by a JSON config naming a circuit file and a fault
//! template (per-location rate multipliers scaled by a global physical
//! rate). Trials are seeded by mixing the config seed with the grid index
//! and trial number, so reruns reproduce results byte for byte and
//! emitted points carry their seeds.

use crate::circuit::CircuitSpec;
use crate::code::SpacetimeCode;
use crate::estimator::{
    default_q_rows, draw_design, recover_from_lambdas, SubsampleDesign,
};
use crate::fault::{FaultModel, FaultTemplate, PriorDistribution};
use crate::lep::{build_decoder, exact_lep, predict_lep, sample_lep, DecoderTable};
use crate::pauli::SpacetimePauli;
use crate::sampler::sample_shots;
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Configuration for one experiment run.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct ExperimentConfig {
    /// Circuit file path, resolved against the config file's directory.
    pub circuit: String,
    /// Fault template file path (multiplier form), resolved the same way.
    pub faults: String,
    /// Physical rates; accuracy and comparison runs use the first entry.
    pub p_grid: Vec<f64>,
    /// Shot counts for the syndrome-sampling pipelines.
    pub shot_grid: Vec<usize>,
    /// Shot counts for the direct LEP sampling pipeline (comparison runs).
    #[serde(default)]
    pub sampled_shot_grid: Vec<usize>,
    /// Trials per grid point.
    #[serde(default = "default_trials")]
    pub trials: usize,
    /// Base seed; every trial seed is derived from it.
    #[serde(default)]
    pub seed: u64,
    /// Accuracy target for shots-vs-p interpolation.
    #[serde(default)]
    pub tau_target: Option<f64>,
    /// Relative-error target for the comparison run.
    #[serde(default)]
    pub rel_err_target: Option<f64>,
    /// Subset cardinality cutoff for predictions.
    #[serde(default = "default_max_order")]
    pub max_order: usize,
    /// Design rows; defaults to `max(4K, K + 16)`.
    #[serde(default)]
    pub q_rows: Option<usize>,
    /// Logical target: an index into the code's logical generators or a
    /// spacetime literal. Defaults to generator 0.
    #[serde(default)]
    pub logical: Option<String>,
    /// Decoder build horizon.
    #[serde(default = "default_decoder_weight")]
    pub decoder_weight: usize,
}

fn default_trials() -> usize {
    1
}
fn default_max_order() -> usize {
    4
}
fn default_decoder_weight() -> usize {
    2
}

impl ExperimentConfig {
    /// Loads a config, resolving relative file paths against the config's
    /// directory.
    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("config: {e}")))?;
        if let Some(dir) = path.parent() {
            cfg.circuit = resolve(dir, &cfg.circuit);
            cfg.faults = resolve(dir, &cfg.faults);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks grid and trial invariants.
    pub fn validate(&self) -> Result<()> {
        if self.p_grid.is_empty() {
            return Err(Error::Validation("p_grid must be nonempty".into()));
        }
        if self.shot_grid.is_empty() {
            return Err(Error::Validation("shot_grid must be nonempty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Validation("trials must be at least 1".into()));
        }
        if self.p_grid.iter().any(|&p| !(p > 0.0 && p < 0.5)) {
            return Err(Error::Validation("p_grid entries must lie in (0, 1/2)".into()));
        }
        Ok(())
    }
}

fn resolve(dir: &Path, p: &str) -> String {
    let pb = PathBuf::from(p);
    if pb.is_absolute() {
        p.to_string()
    } else {
        dir.join(pb).to_string_lossy().into_owned()
    }
}

/// A loaded experiment instance: the code plus the rate template.
pub struct Instance {
    /// The spacetime code of the configured circuit.
    pub code: SpacetimeCode,
    /// The fault template, instantiated per physical rate.
    pub template: FaultTemplate,
}

/// Reads the circuit and template files and builds the code.
pub fn load_instance(cfg: &ExperimentConfig) -> Result<Instance> {
    let circuit_text = std::fs::read_to_string(&cfg.circuit)
        .map_err(|e| Error::Io(format!("{}: {e}", cfg.circuit)))?;
    let circuit = CircuitSpec::from_json(&circuit_text)?;
    let n = circuit.n();
    let t_max = circuit.depth();
    let code = SpacetimeCode::build(circuit)?;
    let faults_text = std::fs::read_to_string(&cfg.faults)
        .map_err(|e| Error::Io(format!("{}: {e}", cfg.faults)))?;
    let template = FaultTemplate::from_json(n, t_max, &faults_text)?;
    Ok(Instance { code, template })
}

/// Resolves the configured logical target against the code.
pub fn resolve_logical(code: &SpacetimeCode, selector: Option<&str>) -> Result<SpacetimePauli> {
    let sel = selector.unwrap_or("0");
    if let Ok(idx) = sel.parse::<usize>() {
        let gens = code.logical_gens();
        return gens.get(idx).cloned().ok_or_else(|| {
            Error::Validation(format!(
                "logical index {idx} out of range ({} generators)",
                gens.len()
            ))
        });
    }
    let circuit = code.circuit();
    SpacetimePauli::parse(circuit.n(), circuit.depth(), sel)
}

/// Deterministic seed mixing (FNV-1a over the parts).
#[must_use]
pub fn mix_seed(base: u64, parts: &[u64]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    let mut absorb = |v: u64| {
        for b in v.to_le_bytes() {
            h ^= u64::from(b);
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    };
    absorb(base);
    for &p in parts {
        absorb(p);
    }
    h
}

/// A fitted line on log10-log10 axes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct FitLine {
    /// Slope in log10-log10 coordinates.
    pub slope: f64,
    /// Intercept at log10 x = 0.
    pub intercept: f64,
    /// Coefficient of determination.
    pub r2: f64,
}

/// Least-squares line through `(log10 x, log10 y)`.
///
/// # Errors
/// [`Error::Numeric`] with fewer than two points, nonpositive
/// coordinates, or degenerate x spread.
pub fn log_log_fit(points: &[(f64, f64)]) -> Result<FitLine> {
    if points.len() < 2 {
        return Err(Error::Numeric(format!(
            "fit needs at least 2 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::Numeric(
            "log-log fit needs strictly positive coordinates".into(),
        ));
    }
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (x.log10(), y.log10()))
        .collect();
    let n = logs.len() as f64;
    let sx: f64 = logs.iter().map(|p| p.0).sum();
    let sy: f64 = logs.iter().map(|p| p.1).sum();
    let sxx: f64 = logs.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = logs.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(Error::Numeric("fit x values are degenerate".into()));
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let mean_y = sy / n;
    let ss_tot: f64 = logs.iter().map(|p| (p.1 - mean_y) * (p.1 - mean_y)).sum();
    let ss_res: f64 = logs
        .iter()
        .map(|p| {
            let pred = intercept + slope * p.0;
            (p.1 - pred) * (p.1 - pred)
        })
        .sum();
    let r2 = if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { 1.0 };
    Ok(FitLine {
        slope,
        intercept,
        r2,
    })
}

/// The x at which the fitted line crosses `target` on the y axis.
#[must_use]
pub fn fit_crossing(fit: &FitLine, target: f64) -> f64 {
    10f64.powf((target.log10() - fit.intercept) / fit.slope)
}

/// In-place median (p50) of a sample.
fn quantile(values: &mut [f64], q: f64) -> f64 {
    values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN in samples"));
    if values.is_empty() {
        return f64::NAN;
    }
    let pos = q * (values.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    values[lo] * (1.0 - frac) + values[hi] * frac
}

fn sample_std(values: &[f64]) -> f64 {
    let n = values.len() as f64;
    if values.len() < 2 {
        return 0.0;
    }
    let mean: f64 = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// One trial of the prior-learning pipeline: sample shots, estimate row
/// eigenvalues, recover, and return the worst relative class error.
pub fn tau_for_trial(
    code: &SpacetimeCode,
    model: &FaultModel,
    prior: &PriorDistribution,
    q_rows: usize,
    shots: usize,
    seed: u64,
) -> Result<f64> {
    let design = draw_design(code, prior, q_rows, mix_seed(seed, &[1]))?;
    let shotset = sample_shots(model, code, shots, mix_seed(seed, &[2]))?;
    let lambdas = design
        .rows()
        .iter()
        .map(|mu| Ok(shotset.estimate_eigenvalue(mu)?.lambda_hat))
        .collect::<Result<Vec<f64>>>()?;
    let rec = recover_from_lambdas(&design, &lambdas, shots, false)?;
    Ok(max_rel_error(prior, &rec.q_bar))
}

/// Worst relative class-rate error of the noiseless pipeline (exact
/// eigenvalues in place of estimates); the infinite-shot surrogate.
pub fn tau_noiseless(
    code: &SpacetimeCode,
    model: &FaultModel,
    prior: &PriorDistribution,
    q_rows: usize,
    seed: u64,
) -> Result<f64> {
    let design = draw_design(code, prior, q_rows, mix_seed(seed, &[1]))?;
    let y = exact_observations(&design, code, model);
    let rec = crate::estimator::recover(&design, &y)?;
    Ok(max_rel_error(prior, &rec.q_bar))
}

fn exact_observations(
    design: &SubsampleDesign,
    code: &SpacetimeCode,
    model: &FaultModel,
) -> Vec<f64> {
    design
        .rows()
        .iter()
        .map(|mu| {
            -model
                .eigenvalue(&crate::sampler::selected_product(code, mu))
                .ln()
        })
        .collect()
}

fn max_rel_error(prior: &PriorDistribution, q_bar: &[f64]) -> f64 {
    prior
        .classes()
        .iter()
        .zip(q_bar)
        .map(|(c, &qb)| (qb - c.q).abs() / c.q)
        .fold(0.0, f64::max)
}

/// One grid point of an accuracy-vs-shots run.
#[derive(Clone, Debug, Serialize)]
pub struct AccuracyPoint {
    /// Shots per trial.
    pub shots: usize,
    /// Median worst relative class error.
    pub tau_median: f64,
    /// Lower quartile.
    pub tau_q25: f64,
    /// Upper quartile.
    pub tau_q75: f64,
    /// Trials behind the quantiles.
    pub trials: usize,
    /// Seed the trial seeds were mixed from.
    pub seed: u64,
}

/// Result of an accuracy-vs-shots run.
#[derive(Clone, Debug, Serialize)]
pub struct AccuracyResult {
    /// Physical rate of the instantiated model.
    pub p: f64,
    /// One point per shot-grid entry.
    pub points: Vec<AccuracyPoint>,
    /// Log-log fit of `tau_median` against shots.
    pub fit: FitLine,
}

/// Runs the accuracy-vs-shots experiment at `p = p_grid[0]`.
pub fn run_accuracy_vs_shots(cfg: &ExperimentConfig) -> Result<AccuracyResult> {
    cfg.validate()?;
    let inst = load_instance(cfg)?;
    let circuit = inst.code.circuit();
    let (n, t_max) = (circuit.n(), circuit.depth());
    let p = cfg.p_grid[0];
    let model = inst.template.at_rate(n, t_max, p)?;
    let prior = model.build_prior(&inst.code)?;
    let q_rows = cfg.q_rows.unwrap_or_else(|| default_q_rows(prior.len()));
    let mut points = Vec::new();
    let mut fit_input = Vec::new();
    for (gi, &shots) in cfg.shot_grid.iter().enumerate() {
        let mut taus = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let seed = mix_seed(cfg.seed, &[gi as u64, trial as u64]);
            taus.push(tau_for_trial(&inst.code, &model, &prior, q_rows, shots, seed)?);
        }
        let q25 = quantile(&mut taus, 0.25);
        let median = quantile(&mut taus, 0.5);
        let q75 = quantile(&mut taus, 0.75);
        fit_input.push((shots as f64, median));
        points.push(AccuracyPoint {
            shots,
            tau_median: median,
            tau_q25: q25,
            tau_q75: q75,
            trials: cfg.trials,
            seed: cfg.seed,
        });
    }
    let fit = log_log_fit(&fit_input)?;
    Ok(AccuracyResult { p, points, fit })
}

impl AccuracyResult {
    /// CSV rows: shots, tau quantiles, trials, seed.
    #[must_use]
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,shots,tau_median,tau_q25,tau_q75,trials,seed\n");
        for pt in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.p, pt.shots, pt.tau_median, pt.tau_q25, pt.tau_q75, pt.trials, pt.seed
            ));
        }
        out
    }
}

/// Per-rate outcome of a shots-vs-p run.
#[derive(Clone, Debug, Serialize)]
pub struct RatePoint {
    /// Physical rate.
    pub p: f64,
    /// Shots interpolated to reach the accuracy target.
    pub shots_needed: f64,
    /// The measured curve behind the interpolation.
    pub curve: Vec<AccuracyPoint>,
}

/// Result of a shots-vs-p run.
#[derive(Clone, Debug, Serialize)]
pub struct ShotsVsPResult {
    /// Accuracy target the interpolation solved for.
    pub tau_target: f64,
    /// One point per rate that reached the target.
    pub points: Vec<RatePoint>,
    /// Rates whose curves never crossed the target, with the reason.
    pub dropped: Vec<(f64, String)>,
    /// Log-log fit of shots-needed against p.
    pub fit: FitLine,
}

/// Runs the shots-vs-p experiment over the whole `p_grid`.
pub fn run_shots_vs_p(cfg: &ExperimentConfig) -> Result<ShotsVsPResult> {
    cfg.validate()?;
    let tau_target = cfg.tau_target.ok_or_else(|| {
        Error::Validation("shots-vs-p needs tau_target in the config".into())
    })?;
    let inst = load_instance(cfg)?;
    let circuit = inst.code.circuit();
    let (n, t_max) = (circuit.n(), circuit.depth());
    let mut points = Vec::new();
    let mut dropped = Vec::new();
    let mut fit_input = Vec::new();
    for (pi, &p) in cfg.p_grid.iter().enumerate() {
        let model = inst.template.at_rate(n, t_max, p)?;
        let prior = model.build_prior(&inst.code)?;
        let q_rows = cfg.q_rows.unwrap_or_else(|| default_q_rows(prior.len()));
        let mut curve = Vec::new();
        for (gi, &shots) in cfg.shot_grid.iter().enumerate() {
            let mut taus = Vec::with_capacity(cfg.trials);
            for trial in 0..cfg.trials {
                let seed = mix_seed(cfg.seed, &[pi as u64, gi as u64, trial as u64]);
                taus.push(tau_for_trial(&inst.code, &model, &prior, q_rows, shots, seed)?);
            }
            let q25 = quantile(&mut taus, 0.25);
            let median = quantile(&mut taus, 0.5);
            let q75 = quantile(&mut taus, 0.75);
            curve.push(AccuracyPoint {
                shots,
                tau_median: median,
                tau_q25: q25,
                tau_q75: q75,
                trials: cfg.trials,
                seed: cfg.seed,
            });
        }
        match interpolate_crossing(&curve, tau_target) {
            Some(n_star) => {
                fit_input.push((p, n_star));
                points.push(RatePoint {
                    p,
                    shots_needed: n_star,
                    curve,
                });
            }
            None => dropped.push((
                p,
                format!("median curve never crosses tau = {tau_target} on the shot grid"),
            )),
        }
    }
    let fit = log_log_fit(&fit_input)?;
    Ok(ShotsVsPResult {
        tau_target,
        points,
        dropped,
        fit,
    })
}

/// First log-log linear interpolation of the median curve through the
/// target, scanning shot points in ascending order.
fn interpolate_crossing(curve: &[AccuracyPoint], target: f64) -> Option<f64> {
    for w in curve.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if a.tau_median >= target && b.tau_median <= target {
            let (x0, y0) = ((a.shots as f64).log10(), a.tau_median.log10());
            let (x1, y1) = ((b.shots as f64).log10(), b.tau_median.log10());
            if (y1 - y0).abs() < 1e-12 {
                return Some(10f64.powf(x0));
            }
            let t = (target.log10() - y0) / (y1 - y0);
            return Some(10f64.powf(x0 + t * (x1 - x0)));
        }
    }
    None
}

impl ShotsVsPResult {
    /// CSV rows: p, shots_needed plus the curve points.
    #[must_use]
    pub fn to_csv(&self) -> String {
        let mut out = String::from("p,shots,tau_median,tau_q25,tau_q75,shots_needed\n");
        for rp in &self.points {
            for pt in &rp.curve {
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    rp.p, pt.shots, pt.tau_median, pt.tau_q25, pt.tau_q75, rp.shots_needed
                ));
            }
        }
        out
    }
}

/// One grid point of a LEP pipeline curve.
#[derive(Clone, Debug, Serialize)]
pub struct LepCurvePoint {
    /// Shots per trial.
    pub shots: usize,
    /// `std(p̂_L) / p_L_exact` across trials.
    pub rel_err: f64,
    /// Mean estimate across trials.
    pub mean: f64,
    /// Trials behind the statistics.
    pub trials: usize,
    /// Seed the trial seeds were mixed from.
    pub seed: u64,
}

/// Result of the predicted-vs-sampled LEP comparison.
#[derive(Clone, Debug, Serialize)]
pub struct LepComparisonResult {
    /// Physical rate.
    pub p: f64,
    /// Exact logical error probability (the reference).
    pub exact: f64,
    /// Relative-error target both pipelines are interpolated to.
    pub rel_err_target: f64,
    /// Curve of the prior-learning + prediction pipeline.
    pub predicted: Vec<LepCurvePoint>,
    /// Curve of the direct Monte Carlo pipeline.
    pub sampled: Vec<LepCurvePoint>,
    /// Fit of the predicted curve.
    pub fit_predicted: FitLine,
    /// Fit of the sampled curve.
    pub fit_sampled: FitLine,
    /// Shots for the predicted pipeline to reach the target.
    pub shots_predicted: f64,
    /// Shots for the sampled pipeline to reach the target.
    pub shots_sampled: f64,
    /// `shots_sampled / shots_predicted`.
    pub ratio: f64,
}

/// Runs the LEP sample-complexity comparison at `p = p_grid[0]`.
///
/// The predicted pipeline learns the prior from `shot_grid` syndrome
/// shots and predicts; the sampled pipeline measures failures directly
/// over `sampled_shot_grid`. Both relative-error curves are fitted
/// log-log and interpolated to `rel_err_target`.
pub fn run_lep_comparison(cfg: &ExperimentConfig) -> Result<LepComparisonResult> {
    cfg.validate()?;
    if cfg.sampled_shot_grid.is_empty() {
        return Err(Error::Validation(
            "lep comparison needs sampled_shot_grid in the config".into(),
        ));
    }
    let rel_err_target = cfg.rel_err_target.unwrap_or(0.1);
    let inst = load_instance(cfg)?;
    let circuit = inst.code.circuit();
    let (n, t_max) = (circuit.n(), circuit.depth());
    let p = cfg.p_grid[0];
    let model = inst.template.at_rate(n, t_max, p)?;
    let prior = model.build_prior(&inst.code)?;
    let q_rows = cfg.q_rows.unwrap_or_else(|| default_q_rows(prior.len()));
    let dec = build_decoder(&inst.code, &prior, cfg.decoder_weight)?;
    let l = resolve_logical(&inst.code, cfg.logical.as_deref())?;
    let exact = exact_lep(&model, &inst.code, &dec, &l)?;
    if exact <= 0.0 {
        return Err(Error::Validation(
            "instance has zero logical error probability; nothing to compare".into(),
        ));
    }
    let mut predicted = Vec::new();
    let mut fit_pred_input = Vec::new();
    for (gi, &shots) in cfg.shot_grid.iter().enumerate() {
        let mut estimates = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let seed = mix_seed(cfg.seed, &[0xA, gi as u64, trial as u64]);
            let est = predicted_lep_trial(
                &inst.code, &model, &prior, &dec, &l, q_rows, shots, cfg.max_order, seed,
            )?;
            estimates.push(est);
        }
        let rel_err = sample_std(&estimates) / exact;
        let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        fit_pred_input.push((shots as f64, rel_err));
        predicted.push(LepCurvePoint {
            shots,
            rel_err,
            mean,
            trials: cfg.trials,
            seed: cfg.seed,
        });
    }
    let mut sampled = Vec::new();
    let mut fit_samp_input = Vec::new();
    for (gi, &shots) in cfg.sampled_shot_grid.iter().enumerate() {
        let mut estimates = Vec::with_capacity(cfg.trials);
        for trial in 0..cfg.trials {
            let seed = mix_seed(cfg.seed, &[0xB, gi as u64, trial as u64]);
            let s = sample_lep(&model, &inst.code, &dec, &l, shots, seed)?;
            estimates.push(s.rate);
        }
        let rel_err = sample_std(&estimates) / exact;
        let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        fit_samp_input.push((shots as f64, rel_err));
        sampled.push(LepCurvePoint {
            shots,
            rel_err,
            mean,
            trials: cfg.trials,
            seed: cfg.seed,
        });
    }
    let fit_predicted = log_log_fit(&fit_pred_input)?;
    let fit_sampled = log_log_fit(&fit_samp_input)?;
    let shots_predicted = fit_crossing(&fit_predicted, rel_err_target);
    let shots_sampled = fit_crossing(&fit_sampled, rel_err_target);
    Ok(LepComparisonResult {
        p,
        exact,
        rel_err_target,
        predicted,
        sampled,
        fit_predicted,
        fit_sampled,
        shots_predicted,
        shots_sampled,
        ratio: shots_sampled / shots_predicted,
    })
}

/// One trial of the prediction pipeline: learn the prior from syndrome
/// shots, then predict the LEP with the estimated class rates.
#[allow(clippy::too_many_arguments)]
pub fn predicted_lep_trial(
    code: &SpacetimeCode,
    model: &FaultModel,
    prior: &PriorDistribution,
    dec: &DecoderTable,
    l: &SpacetimePauli,
    q_rows: usize,
    shots: usize,
    max_order: usize,
    seed: u64,
) -> Result<f64> {
    let design = draw_design(code, prior, q_rows, mix_seed(seed, &[1]))?;
    let shotset = sample_shots(model, code, shots, mix_seed(seed, &[2]))?;
    let lambdas = design
        .rows()
        .iter()
        .map(|mu| Ok(shotset.estimate_eigenvalue(mu)?.lambda_hat))
        .collect::<Result<Vec<f64>>>()?;
    let rec = recover_from_lambdas(&design, &lambdas, shots, false)?;
    let est_prior = prior.with_rates(&rec.q_bar)?;
    Ok(predict_lep(&est_prior, code, dec, l, max_order)?.p_l)
}

impl LepComparisonResult {
    /// CSV rows for both pipelines, labeled by column.
    #[must_use]
    pub fn to_csv(&self) -> String {
        let mut out = String::from("pipeline,p,shots,rel_err,mean,exact,trials,seed\n");
        for pt in &self.predicted {
            out.push_str(&format!(
                "predicted,{},{},{},{},{},{},{}\n",
                self.p, pt.shots, pt.rel_err, pt.mean, self.exact, pt.trials, pt.seed
            ));
        }
        for pt in &self.sampled {
            out.push_str(&format!(
                "sampled,{},{},{},{},{},{},{}\n",
                self.p, pt.shots, pt.rel_err, pt.mean, self.exact, pt.trials, pt.seed
            ));
        }
        out
    }
}

/// Binomial theory for the sampled pipeline's relative error.
#[must_use]
pub fn binomial_rel_err(p_l: f64, shots: usize) -> f64 {
    ((1.0 - p_l) / (p_l * shots as f64)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::repetition_circuit;
    use crate::fault::FaultGenerator;

    #[test]
    fn fit_recovers_exact_power_laws() {
        let pts: Vec<(f64, f64)> = (1..6)
            .map(|i| {
                let x = 10f64.powi(i);
                (x, 3.0 * x.powf(-0.5))
            })
            .collect();
        let fit = log_log_fit(&pts).unwrap();
        assert!((fit.slope + 0.5).abs() < 1e-12);
        assert!((fit.intercept - 3f64.log10()).abs() < 1e-12);
        assert!((fit.r2 - 1.0).abs() < 1e-12);
        // crossing inverts the line
        let x = fit_crossing(&fit, 0.03);
        assert!((x - 1e4).abs() / 1e4 < 1e-10);
        assert!(log_log_fit(&pts[..1]).is_err());
        assert!(log_log_fit(&[(1.0, 1.0), (1.0, 2.0)]).is_err());
    }

    #[test]
    fn quantiles_interpolate() {
        let mut v = vec![4.0, 1.0, 3.0, 2.0];
        assert_eq!(quantile(&mut v, 0.5), 2.5);
        assert_eq!(quantile(&mut v, 0.0), 1.0);
        assert_eq!(quantile(&mut v, 1.0), 4.0);
        let mut one = vec![7.0];
        assert_eq!(quantile(&mut one, 0.5), 7.0);
    }

    #[test]
    fn seed_mixing_separates_coordinates() {
        let a = mix_seed(5, &[1, 2]);
        let b = mix_seed(5, &[2, 1]);
        let c = mix_seed(6, &[1, 2]);
        assert_ne!(a, b);
        assert_ne!(a, c);
        // stable across calls
        assert_eq!(a, mix_seed(5, &[1, 2]));
    }

    #[test]
    fn noiseless_surrogate_has_vanishing_tau() {
        let code = crate::code::SpacetimeCode::build(repetition_circuit(3, 3).unwrap()).unwrap();
        let mut gens = Vec::new();
        for t in 0..=6 {
            for q in 1..=3 {
                gens.push(FaultGenerator {
                    op: SpacetimePauli::parse(3, 6, &format!("X{q}@t{t}")).unwrap(),
                    q: 5e-4,
                });
            }
        }
        let model = FaultModel::new(3, 6, gens).unwrap();
        let prior = model.build_prior(&code).unwrap();
        for seed in 0..3 {
            let tau = tau_noiseless(&code, &model, &prior, default_q_rows(prior.len()), seed)
                .unwrap();
            assert!(tau < 1e-8, "seed {seed}: tau = {tau}");
        }
    }

    #[test]
    fn tau_medians_shrink_with_shots() {
        let code = crate::code::SpacetimeCode::build(repetition_circuit(3, 3).unwrap()).unwrap();
        let mut gens = Vec::new();
        for t in 0..=6 {
            for q in 1..=3 {
                gens.push(FaultGenerator {
                    op: SpacetimePauli::parse(3, 6, &format!("X{q}@t{t}")).unwrap(),
                    q: 2e-3,
                });
            }
        }
        let model = FaultModel::new(3, 6, gens).unwrap();
        let prior = model.build_prior(&code).unwrap();
        let q_rows = default_q_rows(prior.len());
        let tau_at = |shots: usize| {
            let mut taus: Vec<f64> = (0..9)
                .map(|trial| {
                    tau_for_trial(
                        &code,
                        &model,
                        &prior,
                        q_rows,
                        shots,
                        mix_seed(17, &[shots as u64, trial]),
                    )
                    .unwrap()
                })
                .collect();
            quantile(&mut taus, 0.5)
        };
        let coarse = tau_at(2_000);
        let fine = tau_at(50_000);
        assert!(
            fine < coarse,
            "tau should shrink with shots: {fine} !< {coarse}"
        );
    }

    #[test]
    fn binomial_formula_shape() {
        assert!((binomial_rel_err(0.01, 99) - 1.0).abs() < 1e-12);
        // quadrupling shots halves the error
        let a = binomial_rel_err(0.001, 10_000);
        let b = binomial_rel_err(0.001, 40_000);
        assert!((a / b - 2.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation_catches_bad_grids() {
        let mut cfg = ExperimentConfig {
            circuit: "c.json".into(),
            faults: "f.json".into(),
            p_grid: vec![5e-4],
            shot_grid: vec![1000],
            sampled_shot_grid: vec![],
            trials: 4,
            seed: 0,
            tau_target: None,
            rel_err_target: None,
            max_order: 4,
            q_rows: None,
            logical: None,
            decoder_weight: 2,
        };
        assert!(cfg.validate().is_ok());
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        cfg.trials = 1;
        cfg.p_grid = vec![];
        assert!(cfg.validate().is_err());
        cfg.p_grid = vec![0.7];
        assert!(cfg.validate().is_err());
    }
}
