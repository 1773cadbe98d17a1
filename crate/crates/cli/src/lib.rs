//! Command-line front end for orthkit.
//!
//! Every subcommand produces a [`Report`]; `--json` renders it as a single
//! object with the configuration echo, the result and its certificates.
//! Exit codes: 0 decided, 2 undetermined, 1 error.

pub mod plot;

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use orthkit_core::mapfile::load_map;
use orthkit_core::multilinear::{attainment_set, exact_norm, AttainmentRoute};
use orthkit_core::orthogonality::{
    bs_decide_hilbert, decide_orthogonality, maximal_numerical_range, omega_samples, oracle_min_norm, verify_verdict,
    Evidence, HilbertVerdict, VerifyCheck, VerifyReport,
};
use orthkit_core::smoothness::{decide_smooth, sip_orthogonality_probe, SmoothnessWitness};
use orthkit_core::spaces::lp_norm;
use orthkit_core::{Decision, MultilinearMap, OrthVerdict, SmoothDecision, SolverConfig, TuplePoint, C64};
use serde::Serialize;
use serde_json::{json, Value};

use plot::{emit_plot, PlotData, PlotFormat};

#[derive(Debug, Parser)]
#[command(name = "orthkit", version, about = "Birkhoff-James orthogonality and smoothness of multilinear maps")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Relative decision and attainment tolerance
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Random restarts of the norm ascent
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[arg(long, env = "ORTHKIT_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Angles sampled on numerical-range boundaries
    #[arg(long, default_value_t = 720)]
    pub angles: usize,
    /// Bracketing grid of the oracle line search
    #[arg(long, default_value_t = 16)]
    pub oracle_grid: usize,
    /// Structured JSON output
    #[arg(long)]
    pub json: bool,
    /// Include wall-clock timing in the output
    #[arg(long)]
    pub timing: bool,
}

impl Common {
    pub fn solver_config(&self) -> SolverConfig {
        SolverConfig {
            restarts: self.restarts,
            max_iter: self.max_iter,
            tol_decision: self.tol,
            tol_attain: self.tol,
            seed: self.seed,
            oracle_grid: self.oracle_grid,
            angle_count: self.angles,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Pair {
    /// Map file of T
    pub t: PathBuf,
    /// Map file of A
    pub a: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    /// Write the data as CSV
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Render the data as SVG
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Norm of T and a summary of its attainment set
    Norm {
        t: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Decide T _|_ A with a certificate
    Orth {
        #[command(flatten)]
        pair: Pair,
        /// Recompute the residuals of a previously written JSON report
        #[arg(long)]
        verify: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Minimize |T + lambda A| over the scalars
    Oracle {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
    /// Hilbert-space decision for Euclidean operators, with a witness vector
    Bs {
        #[command(flatten)]
        pair: Pair,
        /// Recompute the residuals of a previously written JSON report
        #[arg(long)]
        verify: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Maximal numerical range of A relative to T
    Maxnr {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        plot: PlotArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Sampled Omega'(T, A) point cloud
    Omega {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        plot: PlotArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Classify smoothness of T
    Smooth {
        t: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// Semi-inner-product limits along norming sequences
    SipCheck {
        #[command(flatten)]
        pair: Pair,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Norm { common, .. }
            | Command::Orth { common, .. }
            | Command::Oracle { common, .. }
            | Command::Bs { common, .. }
            | Command::Maxnr { common, .. }
            | Command::Omega { common, .. }
            | Command::Smooth { common, .. }
            | Command::SipCheck { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Norm { .. } => "norm",
            Command::Orth { .. } => "orth",
            Command::Oracle { .. } => "oracle",
            Command::Bs { .. } => "bs",
            Command::Maxnr { .. } => "maxnr",
            Command::Omega { .. } => "omega",
            Command::Smooth { .. } => "smooth",
            Command::SipCheck { .. } => "sip-check",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Decided,
    Undetermined,
    Failed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Decided => 0,
            Status::Undetermined => 2,
            Status::Failed => 1,
        }
    }
}

/// Result of one command, renderable as text or as a single JSON object.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub inputs: Vec<(String, String)>,
    pub config: SolverConfig,
    pub decision: Option<String>,
    pub status: Status,
    pub exit_code: i32,
    pub result: Value,
    pub outputs: Vec<String>,
    pub timing_ms: Option<f64>,
    pub summary: Vec<String>,
}

impl Report {
    pub fn render(&self, json: bool) -> String {
        if json {
            let inputs: serde_json::Map<String, Value> = self.inputs.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
            let mut obj = json!({
                "command": self.command,
                "inputs": inputs,
                "config": self.config,
                "decision": self.decision,
                "status": self.status,
                "exit_code": self.exit_code,
                "result": self.result,
                "outputs": self.outputs,
            });
            if let Some(ms) = self.timing_ms {
                obj["timing_ms"] = json!(ms);
            }
            serde_json::to_string_pretty(&obj).expect("reports serialize") + "\n"
        } else {
            let mut s = self.summary.join("\n");
            for o in &self.outputs {
                s.push_str(&format!("\nwrote {o}"));
            }
            if let Some(ms) = self.timing_ms {
                s.push_str(&format!("\nelapsed: {ms:.1} ms"));
            }
            s + "\n"
        }
    }
}

struct Body {
    decision: Option<String>,
    status: Status,
    result: Value,
    summary: Vec<String>,
    outputs: Vec<String>,
}

impl Body {
    fn new(decision: Option<String>, status: Status, result: impl Serialize, summary: Vec<String>) -> Result<Body> {
        Ok(Body { decision, status, result: serde_json::to_value(result)?, summary, outputs: Vec::new() })
    }
}

fn load(path: &Path) -> Result<MultilinearMap> {
    load_map(path).with_context(|| format!("loading {}", path.display()))
}

fn load_pair(pair: &Pair) -> Result<(MultilinearMap, MultilinearMap)> {
    let t = load(&pair.t)?;
    let a = load(&pair.a)?;
    t.check_compatible(&a)
        .with_context(|| format!("{} and {} do not have the same shape", pair.t.display(), pair.a.display()))?;
    Ok((t, a))
}

fn decision_label(d: Decision) -> String {
    serde_json::to_value(d).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn status_of(d: Decision) -> Status {
    match d {
        Decision::Undetermined => Status::Undetermined,
        _ => Status::Decided,
    }
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn evidence_lines(v: &OrthVerdict) -> Vec<String> {
    match &v.evidence {
        Evidence::Caratheodory(c) => {
            let mut l = vec![format!("certificate: convex combination with weights {:?}", c.weights)];
            for p in &c.points {
                l.push(format!("  lambda = {} (witness {}, attain residual {:.3e})", fmt_c(p.lambda), p.witness_id, p.attain_residual));
            }
            l.push(format!("  combination = {}", fmt_c(c.combination())));
            l
        }
        Evidence::Separation { direction, margin, theta, source } => {
            let mut l = vec![format!(
                "certificate: separating direction {} with margin {margin:.6e} ({source:?})",
                fmt_c(*direction)
            )];
            if let Some(th) = theta {
                l.push(format!("  theta = {th}"));
            }
            l
        }
        Evidence::Oracle(o) => vec![format!(
            "certificate: |T + lambda A| = {} < |T| = {} at lambda = {}",
            o.min_value,
            o.norm_t,
            fmt_c(o.lambda_star)
        )],
        Evidence::None => vec!["no certificate".into()],
    }
}

fn verdict_summary(v: &OrthVerdict) -> Vec<String> {
    let mut l = vec![format!("decision: {} ({})", decision_label(v.decision), v.decision), format!("|T| = {}", v.norm_t)];
    l.extend(evidence_lines(v));
    l.extend(v.notes.iter().map(|n| format!("note: {n}")));
    l
}

fn read_report(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("{} is not a JSON report", path.display()))?;
    Ok(v.get("result").cloned().unwrap_or(v))
}

fn verify_body(report: VerifyReport) -> Result<Body> {
    let mut summary = vec![format!("verification: {}", if report.ok { "ok" } else { "FAILED" })];
    for c in &report.checks {
        summary.push(format!("  [{}] {}: {:.3e} <= {:.3e}", if c.ok { "ok" } else { "!!" }, c.name, c.value, c.bound));
    }
    let status = if report.ok { Status::Decided } else { Status::Failed };
    Body::new(Some(if report.ok { "Verified" } else { "Rejected" }.into()), status, &report, summary)
}

fn verify_hilbert(t: &MultilinearMap, a: &MultilinearMap, h: &HilbertVerdict, cfg: &SolverConfig) -> Result<VerifyReport> {
    let mut report = verify_verdict(t, a, &h.verdict, cfg)?;
    if let Some(x0) = &h.witness {
        let norm = exact_norm(t).context("Hilbert witness needs a Euclidean linear T")?;
        let x = TuplePoint::single(x0.clone());
        let tx = t.evaluate(&x)?;
        let ax = a.evaluate(&x)?;
        let ip: C64 = ax.iter().zip(&tx).map(|(p, q)| p * q.conj()).sum();
        let unit = (lp_norm(x0, &t.factors()[0])? - 1.0).abs();
        let attain = (lp_norm(&tx, t.codomain())? - norm).abs();
        let bound = cfg.tol_attain * norm.max(1.0);
        let orth_bound = 1e-8 * norm.max(1.0) * a.basis_lower_bound().max(1.0);
        for (name, value, bound) in [
            ("witness is unit", unit, 1e-10),
            ("witness attains |T|", attain, bound),
            ("<A x0, T x0> vanishes", ip.norm(), orth_bound),
        ] {
            report.checks.push(VerifyCheck { name: name.into(), ok: value <= bound, value, bound });
        }
        report.ok = report.checks.iter().all(|c| c.ok);
    }
    Ok(report)
}

fn plot_outputs(data: PlotData<'_>, plot: &PlotArgs) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (path, format) in [(&plot.csv, PlotFormat::Csv), (&plot.svg, PlotFormat::Svg)] {
        if let Some(p) = path {
            emit_plot(data, p, format)?;
            out.push(p.display().to_string());
        }
    }
    Ok(out)
}

fn route_label(route: &AttainmentRoute) -> String {
    match route {
        AttainmentRoute::Spectral { basis } => format!("spectral (top singular subspace of dimension {})", basis.len()),
        AttainmentRoute::Vertex { vertices_checked } => format!("vertex enumeration ({vertices_checked} tuples)"),
        AttainmentRoute::Ascent { restarts, converged } => format!("ascent ({converged}/{restarts} restarts converged)"),
    }
}

fn execute(command: &Command, cfg: &SolverConfig) -> Result<Body> {
    match command {
        Command::Norm { t, .. } => {
            let t = load(t)?;
            let c = attainment_set(&t, cfg)?;
            let summary = vec![
                format!("norm: {}", c.value),
                format!("route: {}", route_label(&c.route)),
                format!("certified: {}", c.certified),
                format!("orbits found: {}", c.maximizers.len()),
                format!("single orbit: {}", c.is_single_orbit),
                format!("note: {}", c.note),
            ];
            let status = if c.certified { Status::Decided } else { Status::Undetermined };
            Body::new(None, status, &c, summary)
        }
        Command::Orth { pair, verify, .. } => {
            let (t, a) = load_pair(pair)?;
            if let Some(path) = verify {
                let v: OrthVerdict = serde_json::from_value(read_report(path)?)
                    .with_context(|| format!("{} does not hold an orthogonality verdict", path.display()))?;
                return verify_body(verify_verdict(&t, &a, &v, cfg)?);
            }
            let v = decide_orthogonality(&t, &a, cfg)?;
            Body::new(Some(decision_label(v.decision)), status_of(v.decision), &v, verdict_summary(&v))
        }
        Command::Oracle { pair, .. } => {
            let (t, a) = load_pair(pair)?;
            let o = oracle_min_norm(&t, &a, cfg)?;
            let below = o.is_below(cfg.tol_decision);
            let label = if below { "NotOrthogonal" } else { "Orthogonal" };
            let summary = vec![
                format!("lambda*: {}", fmt_c(o.lambda_star)),
                format!("min |T + lambda A|: {}", o.min_value),
                format!("|T|: {}", o.norm_t),
                format!("verdict: {}{}", if below { "not orthogonal" } else { "orthogonal" }, if o.heuristic { " (heuristic)" } else { "" }),
                format!("evaluations: {}", o.evaluations),
            ];
            let status = if o.heuristic { Status::Undetermined } else { Status::Decided };
            Body::new(Some(label.into()), status, &o, summary)
        }
        Command::Bs { pair, verify, .. } => {
            let (t, a) = load_pair(pair)?;
            if let Some(path) = verify {
                let h: HilbertVerdict = serde_json::from_value(read_report(path)?)
                    .with_context(|| format!("{} does not hold a Hilbert verdict", path.display()))?;
                return verify_body(verify_hilbert(&t, &a, &h, cfg)?);
            }
            let h = bs_decide_hilbert(&t, &a, cfg)?;
            let mut summary = verdict_summary(&h.verdict);
            summary.insert(1, format!("top singular subspace dimension: {}", h.top_dimension));
            if let (Some(w), Some(r)) = (&h.witness, h.witness_residual) {
                let w: Vec<String> = w.iter().map(|z| fmt_c(*z)).collect();
                summary.push(format!("witness x0: [{}]", w.join(", ")));
                summary.push(format!("|<A x0, T x0>| = {r:.3e}"));
            }
            summary.push(format!("min support of the numerical range: {}", h.range.min_support));
            Body::new(Some(decision_label(h.verdict.decision)), status_of(h.verdict.decision), &h, summary)
        }
        Command::Maxnr { pair, plot, .. } => {
            let (t, a) = load_pair(pair)?;
            let r = maximal_numerical_range(&t, &a, cfg)?;
            let (lo, hi) = r.support_values.iter().fold((f64::MAX, f64::MIN), |(l, h), &s| (l.min(s), h.max(s)));
            let summary = vec![
                format!("angles: {}", r.angles.len()),
                format!("support values in [{lo}, {hi}]"),
                format!("boundary points: {}", r.boundary_points.len()),
            ];
            let mut body = Body::new(None, Status::Decided, &r, summary)?;
            body.outputs = plot_outputs(PlotData::Range(&r), plot)?;
            Ok(body)
        }
        Command::Omega { pair, plot, .. } => {
            let (t, a) = load_pair(pair)?;
            let s = omega_samples(&t, &a, cfg)?;
            let mut summary = vec![format!("samples: {}", s.len())];
            let mut distinct: Vec<C64> = Vec::new();
            for p in &s {
                if !distinct.iter().any(|d| (d - p.lambda).norm() <= 1e-12) {
                    distinct.push(p.lambda);
                }
            }
            if distinct.len() <= 8 {
                summary.extend(distinct.iter().map(|z| format!("  lambda = {}", fmt_c(*z))));
            } else {
                summary.push(format!("distinct values: {}", distinct.len()));
            }
            let mut body = Body::new(None, Status::Decided, &s, summary)?;
            body.outputs = plot_outputs(PlotData::Omega(&s), plot)?;
            Ok(body)
        }
        Command::Smooth { t, .. } => {
            let t = load(t)?;
            let r = decide_smooth(&t, cfg)?;
            let label = serde_json::to_value(r.decision)?.as_str().unwrap_or_default().to_string();
            let mut summary = vec![
                format!("decision: {label} ({})", r.decision),
                format!("|T| = {}", r.norm),
                format!("single orbit: {}", r.orbit_ok),
                format!("smooth image: {}", r.image_smooth),
                format!(
                    "largest Omega' spread over {} probes: {:.3e}",
                    r.omega_spreads.len(),
                    r.omega_spreads.iter().map(|s| s.spread).fold(0.0, f64::max)
                ),
            ];
            for w in &r.witnesses {
                summary.push(match w {
                    SmoothnessWitness::SecondOrbit { value_gap, .. } => {
                        format!("witness: second attaining orbit (value gap {value_gap:.3e})")
                    }
                    SmoothnessWitness::ImageTie { extreme_functionals, .. } => {
                        format!("witness: image has {extreme_functionals} extreme support functionals")
                    }
                    SmoothnessWitness::Split(s) => format!(
                        "witness: split A1 ({}) + A2 ({}) gives {}",
                        s.a1_decision, s.a2_decision, s.sum_decision
                    ),
                });
            }
            summary.extend(r.notes.iter().map(|n| format!("note: {n}")));
            let status = if r.decision == SmoothDecision::Undetermined { Status::Undetermined } else { Status::Decided };
            Body::new(Some(label), status, &r, summary)
        }
        Command::SipCheck { pair, .. } => {
            let (t, a) = load_pair(pair)?;
            let r = sip_orthogonality_probe(&t, &a, cfg)?;
            let summary = vec![
                format!("limits: {}", r.limits.len()),
                format!("sup |[A x_n, T x_n]|: {:.3e} (tolerance {:.3e})", r.sup_modulus, r.tol),
                format!("limits vanish: {}", r.converges_to_zero),
                format!("limits inside Omega': {}", r.omega_consistent),
            ]
            .into_iter()
            .chain(r.notes.iter().map(|n| format!("note: {n}")))
            .collect();
            Body::new(None, Status::Decided, &r, summary)
        }
    }
}

fn inputs(command: &Command) -> Vec<(String, String)> {
    let s = |p: &PathBuf| p.display().to_string();
    let mut v = match command {
        Command::Norm { t, .. } | Command::Smooth { t, .. } => vec![("t".into(), s(t))],
        Command::Orth { pair, .. }
        | Command::Oracle { pair, .. }
        | Command::Bs { pair, .. }
        | Command::Maxnr { pair, .. }
        | Command::Omega { pair, .. }
        | Command::SipCheck { pair, .. } => vec![("t".into(), s(&pair.t)), ("a".into(), s(&pair.a))],
    };
    if let Command::Orth { verify: Some(p), .. } | Command::Bs { verify: Some(p), .. } = command {
        v.push(("verify".into(), s(p)));
    }
    v
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Result<Report> {
    let start = Instant::now();
    let common = cli.command.common();
    let cfg = common.solver_config();
    if let Err(e) = cfg.validate() {
        bail!("invalid configuration: {e}");
    }
    let body = execute(&cli.command, &cfg)?;
    Ok(Report {
        command: cli.command.name(),
        inputs: inputs(&cli.command),
        config: cfg,
        decision: body.decision,
        status: body.status,
        exit_code: body.status.exit_code(),
        result: body.result,
        outputs: body.outputs,
        timing_ms: common.timing.then(|| start.elapsed().as_secs_f64() * 1e3),
        summary: body.summary,
    })
}

pub fn wants_json(cli: &Cli) -> bool {
    cli.command.common().json
}
