//! Command-line front end: build codes, classify learnability, estimate
//! class rates from sampled syndromes, predict logical error
//! probabilities, and drive the scaling experiments.
//!
//! Runs that persist files write a `manifest.json` provenance record
//! into the output directory before any heavy compute starts. All
//! randomness flows from an explicit seed, so every command is
//! reproducible byte for byte.

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use synlearn::circuit::CircuitSpec;
use synlearn::code::SpacetimeCode;
use synlearn::estimator::{
    default_q_rows, draw_design, recover_from_lambdas, rip_constant,
};
use synlearn::experiments::{
    run_accuracy_vs_shots, run_lep_comparison, run_shots_vs_p, ExperimentConfig,
};
use synlearn::fault::{FaultModel, FaultTemplate};
use synlearn::learnability::analyze;
use synlearn::lep::{build_decoder, exact_lep, predict_lep, sample_lep, LogicalReport};
use synlearn::manifest::RunManifest;
use synlearn::plot::{render_loglog, Series};
use synlearn::sampler::sample_shots;
use synlearn::{Error, Result};

const DEFAULT_SEED: u64 = 0;

#[derive(Parser)]
#[command(
    name = "synlearn",
    version,
    about = "Learn Pauli fault rates from syndrome data and predict logical error rates"
)]
struct Cli {
    /// Worker threads (0 keeps the library default). The
    /// SYNLEARN_THREADS environment variable overrides this flag.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the spacetime code of a circuit and report its dimensions.
    BuildCode(BuildCodeArgs),
    /// Classify a fault model's generators; exit 2 when the model is
    /// not logically learnable.
    CheckLearnability(FaultContextArgs),
    /// Sample syndromes and estimate per-class fault rates.
    Estimate(EstimateArgs),
    /// Predict a logical error probability from an estimate file.
    PredictLep(PredictLepArgs),
    /// Run a scaling experiment from a JSON config.
    Experiment(ExperimentArgs),
    /// Re-render the SVG chart of a stored experiment result.
    Plot(PlotArgs),
}

#[derive(Args)]
struct BuildCodeArgs {
    /// Circuit file (JSON).
    #[arg(long)]
    circuit: PathBuf,
    /// Directory for code.json and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FaultContextArgs {
    /// Circuit file (JSON).
    #[arg(long)]
    circuit: PathBuf,
    /// Fault file: explicit rates, or a multiplier template with --p.
    #[arg(long)]
    faults: PathBuf,
    /// Physical rate applied to a multiplier template.
    #[arg(long)]
    p: Option<f64>,
    /// Directory for report.json and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EstimateArgs {
    #[command(flatten)]
    ctx: FaultContextArgs,
    /// Syndrome shots to sample.
    #[arg(long)]
    shots: usize,
    /// Base seed for sampling and the design draw.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Design rows; defaults to max(4K, K + 16) for K classes.
    #[arg(long)]
    q_rows: Option<usize>,
    /// Floor nonpositive eigenvalue estimates at 1/shots instead of
    /// failing; the output is marked tainted.
    #[arg(long)]
    clamp: bool,
    /// Estimate even when the model is not logically learnable.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct PredictLepArgs {
    /// Estimate file produced by the estimate subcommand.
    #[arg(long)]
    estimate: PathBuf,
    /// Logical target: generator index or spacetime literal.
    #[arg(long, default_value = "0")]
    logical: String,
    /// Subset cardinality cutoff for the prediction.
    #[arg(long, default_value_t = 4)]
    max_order: usize,
    /// Decoder build horizon.
    #[arg(long, default_value_t = 2)]
    decoder_weight: usize,
    /// Also compute the exact value from the true rates (small models).
    #[arg(long)]
    exact: bool,
    /// Also sample the LEP directly with this many shots.
    #[arg(long)]
    sample_shots: Option<usize>,
    /// Seed for the direct sampling check.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Directory for report.json and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(subcommand)]
    kind: ExperimentKind,
}

#[derive(Subcommand)]
enum ExperimentKind {
    /// Accuracy against shot count at fixed physical rate.
    AccuracyVsShots(ExperimentRunArgs),
    /// Shots needed for a target accuracy, against physical rate.
    ShotsVsP(ExperimentRunArgs),
    /// Sample complexity of predicted vs directly sampled LEP.
    LepComparison(ExperimentRunArgs),
}

#[derive(Args)]
struct ExperimentRunArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for manifest, result.json, points.csv, chart.svg.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PlotArgs {
    /// result.json from an experiment run.
    #[arg(long)]
    result: PathBuf,
    /// SVG file to write.
    #[arg(long)]
    out: PathBuf,
}

/// Estimate artifact: everything needed to rebuild the prior with the
/// learned rates, plus solver diagnostics.
#[derive(Serialize, Deserialize)]
struct EstimateFile {
    circuit: String,
    faults: String,
    p: Option<f64>,
    shots: usize,
    seed: u64,
    q_rows: usize,
    rip_delta: f64,
    residual: f64,
    sigma_min: f64,
    sigma_max: f64,
    tainted: bool,
    clamped_rows: Vec<usize>,
    classes: Vec<ClassRecord>,
}

#[derive(Serialize, Deserialize)]
struct ClassRecord {
    syndrome: String,
    representative: String,
    members: usize,
    q_bar: f64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads(cli.threads);
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn configure_threads(flag: usize) {
    let n = std::env::var("SYNLEARN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .unwrap_or(flag);
    if n > 0 {
        // a failure here means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(cmd: Command) -> Result<ExitCode> {
    match cmd {
        Command::BuildCode(a) => cmd_build_code(&a),
        Command::CheckLearnability(a) => cmd_check_learnability(&a),
        Command::Estimate(a) => cmd_estimate(&a),
        Command::PredictLep(a) => cmd_predict_lep(&a),
        Command::Experiment(a) => cmd_experiment(&a),
        Command::Plot(a) => cmd_plot(&a),
    }
}

fn load_code(path: &Path) -> Result<SpacetimeCode> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    SpacetimeCode::build(CircuitSpec::from_json(&text)?)
}

/// Loads a fault file. Entries carrying explicit `q` form a model
/// directly; multiplier templates need the global rate `p`.
fn load_faults(n: usize, t_max: usize, path: &Path, p: Option<f64>) -> Result<FaultModel> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let probe: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("fault file: {e}")))?;
    let has_q = probe
        .as_array()
        .is_some_and(|entries| !entries.is_empty() && entries.iter().all(|e| e.get("q").is_some()));
    if has_q && p.is_none() {
        FaultModel::from_json(n, t_max, &text)
    } else {
        let p = p.ok_or_else(|| {
            Error::Validation(
                "fault file is a multiplier template; pass --p to set the physical rate".into(),
            )
        })?;
        FaultTemplate::from_json(n, t_max, &text)?.at_rate(n, t_max, p)
    }
}

fn write_out(dir: &Path, name: &str, content: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(name);
    std::fs::write(&path, content)?;
    Ok(path)
}

#[derive(Serialize)]
struct CodeFile {
    qubits: usize,
    depth: usize,
    spacetime_dim: usize,
    gauge_rank: usize,
    measured_gens: usize,
    logical_qubits: usize,
    meas_gens: Vec<String>,
    logical_gens: Vec<String>,
}

fn cmd_build_code(a: &BuildCodeArgs) -> Result<ExitCode> {
    let code = load_code(&a.circuit)?;
    let d = code.dims();
    let file = CodeFile {
        qubits: code.circuit().n(),
        depth: code.circuit().depth(),
        spacetime_dim: d.dim,
        gauge_rank: d.gauge_rank,
        measured_gens: d.meas_rank,
        logical_qubits: d.k,
        meas_gens: code.meas_gens().iter().map(|g| g.to_string()).collect(),
        logical_gens: code.logical_gens().iter().map(|g| g.to_string()).collect(),
    };
    println!("qubits          {}", file.qubits);
    println!("depth           {}", file.depth);
    println!("spacetime dim   {}", file.spacetime_dim);
    println!("gauge rank      {}", file.gauge_rank);
    println!("measured gens   {}", file.measured_gens);
    println!("logical qubits  {}", file.logical_qubits);
    if let Some(dir) = &a.out {
        let manifest = RunManifest::new(
            &format!("build-code --circuit {}", a.circuit.display()),
            None,
            &[],
            &[dir.join("code.json")],
        );
        manifest.write(dir)?;
        write_out(dir, "code.json", &serde_json::to_string_pretty(&file)?)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_check_learnability(a: &FaultContextArgs) -> Result<ExitCode> {
    let code = load_code(&a.circuit)?;
    let circuit = code.circuit();
    let model = load_faults(circuit.n(), circuit.depth(), &a.faults, a.p)?;
    let report = analyze(&model, &code)?;
    print!("{}", report.to_table(&model));
    if let Some(dir) = &a.out {
        let manifest = RunManifest::new(
            &format!(
                "check-learnability --circuit {} --faults {}",
                a.circuit.display(),
                a.faults.display()
            ),
            None,
            &[],
            &[dir.join("report.json")],
        );
        manifest.write(dir)?;
        write_out(
            dir,
            "report.json",
            &serde_json::to_string_pretty(&report.to_json(&model))?,
        )?;
    }
    if report.logical_learnable {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("model is not logically learnable");
        Ok(ExitCode::from(2))
    }
}

fn cmd_estimate(a: &EstimateArgs) -> Result<ExitCode> {
    let code = load_code(&a.ctx.circuit)?;
    let circuit = code.circuit();
    let (n, t_max) = (circuit.n(), circuit.depth());
    let model = load_faults(n, t_max, &a.ctx.faults, a.ctx.p)?;
    let report = analyze(&model, &code)?;
    if !report.logical_learnable && !a.force {
        return Err(Error::Unlearnable(
            "fault model is not logically learnable; estimates would not determine \
             logical failure rates (pass --force to estimate class rates anyway)"
                .into(),
        ));
    }
    let prior = model.build_prior(&code)?;
    let q_rows = a.q_rows.unwrap_or_else(|| default_q_rows(prior.len()));
    if let Some(dir) = &a.ctx.out {
        let manifest = RunManifest::new(
            &format!(
                "estimate --circuit {} --faults {} --shots {} --seed {}",
                a.ctx.circuit.display(),
                a.ctx.faults.display(),
                a.shots,
                a.seed
            ),
            None,
            &[a.seed],
            &[dir.join("estimate.json")],
        );
        manifest.write(dir)?;
    }
    let design = draw_design(&code, &prior, q_rows, a.seed.wrapping_add(1))?;
    let shotset = sample_shots(&model, &code, a.shots, a.seed)?;
    let lambdas = design
        .rows()
        .iter()
        .map(|mu| Ok(shotset.estimate_eigenvalue(mu)?.lambda_hat))
        .collect::<Result<Vec<f64>>>()?;
    let rec = recover_from_lambdas(&design, &lambdas, a.shots, a.clamp)?;
    let delta = rip_constant(&design);
    let classes: Vec<ClassRecord> = prior
        .classes()
        .iter()
        .zip(&rec.q_bar)
        .map(|(c, &qb)| ClassRecord {
            syndrome: c.syndrome.to_string(),
            representative: c.representative.to_string(),
            members: c.members.len(),
            q_bar: qb,
        })
        .collect();
    let file = EstimateFile {
        circuit: a.ctx.circuit.to_string_lossy().into_owned(),
        faults: a.ctx.faults.to_string_lossy().into_owned(),
        p: a.ctx.p,
        shots: a.shots,
        seed: a.seed,
        q_rows,
        rip_delta: delta,
        residual: rec.residual,
        sigma_min: rec.sigma_min,
        sigma_max: rec.sigma_max,
        tainted: rec.tainted,
        clamped_rows: rec.clamped_rows.clone(),
        classes,
    };
    let json = serde_json::to_string_pretty(&file)?;
    match &a.ctx.out {
        Some(dir) => {
            write_out(dir, "estimate.json", &json)?;
            println!("estimated {} classes from {} shots", prior.len(), a.shots);
            println!("rip delta {:.4}, residual {:.3e}", delta, rec.residual);
            if rec.tainted {
                println!(
                    "warning: {} eigenvalue estimate(s) floored at 1/shots; \
                     rates are upper bounds",
                    rec.clamped_rows.len()
                );
            }
        }
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_predict_lep(a: &PredictLepArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&a.estimate)
        .map_err(|e| Error::Io(format!("{}: {e}", a.estimate.display())))?;
    let est: EstimateFile =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("estimate file: {e}")))?;
    let code = load_code(Path::new(&est.circuit))?;
    let circuit = code.circuit();
    let (n, t_max) = (circuit.n(), circuit.depth());
    let model = load_faults(n, t_max, Path::new(&est.faults), est.p)?;
    let prior = model.build_prior(&code)?;
    // the estimate must describe the same class decomposition
    if prior.len() != est.classes.len()
        || prior
            .classes()
            .iter()
            .zip(&est.classes)
            .any(|(c, r)| c.syndrome.to_string() != r.syndrome)
    {
        return Err(Error::Validation(
            "estimate file classes do not match the rebuilt prior; \
             circuit or fault file changed since the estimate"
                .into(),
        ));
    }
    let q_bar: Vec<f64> = est.classes.iter().map(|c| c.q_bar).collect();
    let est_prior = prior.with_rates(&q_bar)?;
    let dec = build_decoder(&code, &prior, a.decoder_weight)?;
    let l = synlearn::experiments::resolve_logical(&code, Some(&a.logical))?;
    if let Some(dir) = &a.out {
        let manifest = RunManifest::new(
            &format!(
                "predict-lep --estimate {} --logical {} --max-order {}",
                a.estimate.display(),
                a.logical,
                a.max_order
            ),
            None,
            &[a.seed],
            &[dir.join("report.json")],
        );
        manifest.write(dir)?;
    }
    let pred = predict_lep(&est_prior, &code, &dec, &l, a.max_order)?;
    let p_l_true = if a.exact {
        Some(exact_lep(&model, &code, &dec, &l)?)
    } else {
        None
    };
    let p_l_sampled = match a.sample_shots {
        Some(shots) => Some(sample_lep(&model, &code, &dec, &l, shots, a.seed)?),
        None => None,
    };
    let report = LogicalReport {
        logical: l.to_string(),
        p_l_predicted: pred.p_l,
        p_l_true,
        p_l_sampled,
        truncation_order: pred.max_order,
        truncation_residual_bound: pred.truncation_residual,
    };
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(dir) = &a.out {
        write_out(dir, "report.json", &json)?;
    }
    println!("{json}");
    Ok(ExitCode::SUCCESS)
}

/// Tagged experiment result, so `plot` can re-render without guessing.
#[derive(Serialize)]
struct TaggedResult<T: Serialize> {
    kind: &'static str,
    result: T,
}

fn cmd_experiment(a: &ExperimentArgs) -> Result<ExitCode> {
    let (cfg_path, out) = match &a.kind {
        ExperimentKind::AccuracyVsShots(r)
        | ExperimentKind::ShotsVsP(r)
        | ExperimentKind::LepComparison(r) => (&r.config, &r.out),
    };
    let cfg_text = std::fs::read_to_string(cfg_path)
        .map_err(|e| Error::Io(format!("{}: {e}", cfg_path.display())))?;
    let cfg = ExperimentConfig::load(cfg_path)?;
    let kind_name = match &a.kind {
        ExperimentKind::AccuracyVsShots(_) => "accuracy-vs-shots",
        ExperimentKind::ShotsVsP(_) => "shots-vs-p",
        ExperimentKind::LepComparison(_) => "lep-comparison",
    };
    let manifest = RunManifest::new(
        &format!("experiment {kind_name} --config {}", cfg_path.display()),
        Some(&cfg_text),
        &[cfg.seed],
        &[
            out.join("result.json"),
            out.join("points.csv"),
            out.join("chart.svg"),
        ],
    );
    manifest.write(out)?;
    let (json, csv, svg) = match &a.kind {
        ExperimentKind::AccuracyVsShots(_) => {
            let res = run_accuracy_vs_shots(&cfg)?;
            let svg = render_accuracy(&res);
            println!(
                "accuracy-vs-shots: slope {:.3}, r2 {:.4} over {} points",
                res.fit.slope,
                res.fit.r2,
                res.points.len()
            );
            (
                serde_json::to_string_pretty(&TaggedResult {
                    kind: "accuracy_vs_shots",
                    result: &res,
                })?,
                res.to_csv(),
                svg,
            )
        }
        ExperimentKind::ShotsVsP(_) => {
            let res = run_shots_vs_p(&cfg)?;
            let svg = render_shots_vs_p(&res);
            println!(
                "shots-vs-p: exponent {:.3}, r2 {:.4}, {} rates fitted, {} dropped",
                res.fit.slope,
                res.fit.r2,
                res.points.len(),
                res.dropped.len()
            );
            for (p, why) in &res.dropped {
                println!("dropped p = {p}: {why}");
            }
            (
                serde_json::to_string_pretty(&TaggedResult {
                    kind: "shots_vs_p",
                    result: &res,
                })?,
                res.to_csv(),
                svg,
            )
        }
        ExperimentKind::LepComparison(_) => {
            let res = run_lep_comparison(&cfg)?;
            let svg = render_lep_comparison(&res);
            println!(
                "lep-comparison: sampled needs {:.3e} shots, predicted {:.3e} \
                 (ratio {:.1}) for {:.0}% relative error",
                res.shots_sampled,
                res.shots_predicted,
                res.ratio,
                res.rel_err_target * 100.0
            );
            (
                serde_json::to_string_pretty(&TaggedResult {
                    kind: "lep_comparison",
                    result: &res,
                })?,
                res.to_csv(),
                svg,
            )
        }
    };
    write_out(out, "result.json", &json)?;
    write_out(out, "points.csv", &csv)?;
    write_out(out, "chart.svg", &svg)?;
    Ok(ExitCode::SUCCESS)
}

fn render_accuracy(res: &synlearn::experiments::AccuracyResult) -> String {
    render_loglog(
        &format!("worst class error vs shots (p = {})", res.p),
        "shots",
        "tau median",
        &[Series {
            label: "tau median".into(),
            points: res
                .points
                .iter()
                .map(|pt| (pt.shots as f64, pt.tau_median))
                .collect(),
            fit: Some(res.fit),
        }],
    )
}

fn render_shots_vs_p(res: &synlearn::experiments::ShotsVsPResult) -> String {
    render_loglog(
        &format!("shots to reach tau = {}", res.tau_target),
        "physical rate p",
        "shots needed",
        &[Series {
            label: "shots needed".into(),
            points: res.points.iter().map(|pt| (pt.p, pt.shots_needed)).collect(),
            fit: Some(res.fit),
        }],
    )
}

fn render_lep_comparison(res: &synlearn::experiments::LepComparisonResult) -> String {
    render_loglog(
        &format!("logical error estimation error (p = {})", res.p),
        "shots",
        "relative error of p_L",
        &[
            Series {
                label: "predicted pipeline".into(),
                points: res
                    .predicted
                    .iter()
                    .map(|pt| (pt.shots as f64, pt.rel_err))
                    .collect(),
                fit: Some(res.fit_predicted),
            },
            Series {
                label: "sampled pipeline".into(),
                points: res
                    .sampled
                    .iter()
                    .map(|pt| (pt.shots as f64, pt.rel_err))
                    .collect(),
                fit: Some(res.fit_sampled),
            },
        ],
    )
}

fn cmd_plot(a: &PlotArgs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&a.result)
        .map_err(|e| Error::Io(format!("{}: {e}", a.result.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(format!("result file: {e}")))?;
    let kind = value
        .get("kind")
        .and_then(|k| k.as_str())
        .ok_or_else(|| Error::Parse("result file has no kind tag".into()))?;
    let res = value
        .get("result")
        .ok_or_else(|| Error::Parse("result file has no result payload".into()))?;
    let svg = match kind {
        "accuracy_vs_shots" => {
            let points = json_points(res, "points", "shots", "tau_median")?;
            render_loglog(
                "worst class error vs shots",
                "shots",
                "tau median",
                &[Series {
                    label: "tau median".into(),
                    points,
                    fit: json_fit(res, "fit"),
                }],
            )
        }
        "shots_vs_p" => {
            let points = json_points(res, "points", "p", "shots_needed")?;
            render_loglog(
                "shots to reach the accuracy target",
                "physical rate p",
                "shots needed",
                &[Series {
                    label: "shots needed".into(),
                    points,
                    fit: json_fit(res, "fit"),
                }],
            )
        }
        "lep_comparison" => {
            let pred = json_points(res, "predicted", "shots", "rel_err")?;
            let samp = json_points(res, "sampled", "shots", "rel_err")?;
            render_loglog(
                "logical error estimation error",
                "shots",
                "relative error of p_L",
                &[
                    Series {
                        label: "predicted pipeline".into(),
                        points: pred,
                        fit: json_fit(res, "fit_predicted"),
                    },
                    Series {
                        label: "sampled pipeline".into(),
                        points: samp,
                        fit: json_fit(res, "fit_sampled"),
                    },
                ],
            )
        }
        other => {
            return Err(Error::Parse(format!("unknown result kind {other:?}")));
        }
    };
    if let Some(dir) = a.out.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)?;
        }
    }
    std::fs::write(&a.out, svg)?;
    println!("wrote {}", a.out.display());
    Ok(ExitCode::SUCCESS)
}

fn json_points(
    res: &serde_json::Value,
    field: &str,
    xkey: &str,
    ykey: &str,
) -> Result<Vec<(f64, f64)>> {
    res.get(field)
        .and_then(|p| p.as_array())
        .ok_or_else(|| Error::Parse(format!("result file has no {field} array")))?
        .iter()
        .map(|pt| {
            let x = pt.get(xkey).and_then(serde_json::Value::as_f64);
            let y = pt.get(ykey).and_then(serde_json::Value::as_f64);
            match (x, y) {
                (Some(x), Some(y)) => Ok((x, y)),
                _ => Err(Error::Parse(format!("point missing {xkey}/{ykey}"))),
            }
        })
        .collect()
}

fn json_fit(res: &serde_json::Value, field: &str) -> Option<synlearn::experiments::FitLine> {
    let f = res.get(field)?;
    Some(synlearn::experiments::FitLine {
        slope: f.get("slope")?.as_f64()?,
        intercept: f.get("intercept")?.as_f64()?,
        r2: f.get("r2")?.as_f64()?,
    })
}
