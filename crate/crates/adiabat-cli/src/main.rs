//! One binary, subcommand style. Every run is fully determined by argv plus
//! the input files: no config files, no environment variables. Numeric output
//! carries 12 significant digits; exit code 0 is success, 1 a domain error
//! (machine-readable JSON on stderr), 2 a usage error.

mod jout;
mod state;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use adiabat::axioms::{run_axiom_suite, TrialConfig};
use adiabat::certificates::build_witness;
use adiabat::entropy::{self, EntropyReport};
use adiabat::scale::{
    self, entropy_flat, entropy_lower, entropy_upper, BatchConfig, Gauge, LambdaResult, LogBase,
};
use adiabat::spectra::LabeledState;
use adiabat::{Comparability, Error, Relation, Reservoir, Tag};

use jout::{fmt_f64, nums, Val};
use state::Params;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub kind: String,
    pub message: String,
}

impl CliError {
    pub fn domain(kind: &str, message: String) -> Self {
        Self {
            code: 1,
            kind: kind.to_string(),
            message,
        }
    }

    pub fn usage(message: String) -> Self {
        Self {
            code: 2,
            kind: "usage".to_string(),
            message,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match &e {
            Error::NegativeEntry { .. } => "NegativeEntry",
            Error::NotNormalized { .. } => "NotNormalized",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::NonpositiveBase { .. } => "NonpositiveBase",
            Error::NotHermitian { .. } => "NotHermitian",
            Error::NotPsd { .. } => "NotPSD",
            Error::NotUnitTrace { .. } => "NotUnitTrace",
            Error::WeightMismatch => "WeightMismatch",
            Error::GaugeDegenerate { .. } => "GaugeDegenerate",
            Error::NotFlat { .. } => "NotFlat",
            Error::NotMajorized { .. } => "NotMajorized",
            Error::MissingLabels => "MissingLabels",
            Error::BracketExceeded { .. } => "BracketExceeded",
            Error::InvalidConfig(_) => "InvalidConfig",
            _ => "Error",
        };
        let code = if matches!(e, Error::InvalidConfig(_)) { 2 } else { 1 };
        Self {
            code,
            kind: kind.to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum RelArg {
    M,
    T,
    Nt,
    J,
}

impl RelArg {
    fn tag(self) -> Tag {
        match self {
            RelArg::M => Tag::M,
            RelArg::T => Tag::T,
            RelArg::Nt => Tag::Nt,
            RelArg::J => Tag::J,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputMode {
    Json,
    Table,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Which {
    Minus,
    Plus,
    S,
}

#[derive(Parser, Debug)]
#[command(
    name = "adiabat",
    version,
    about = "Order relations over state spectra and the entropy scales they induce"
)]
struct Cli {
    /// Inverse temperature (heat and particle reservoirs).
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Chemical potential (particle reservoir).
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Field parameter (angular-momentum reservoir).
    #[arg(long, global = true)]
    gamma: Option<f64>,
    /// Boltzmann constant (affects reported temperatures only).
    #[arg(long, global = true, default_value_t = 1.0)]
    kb: f64,
    /// Seed for the randomized subcommands.
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    #[arg(long, global = true, value_enum)]
    output: Option<OutputMode>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Entropy and potential report for one state.
    Entropy {
        #[arg(long)]
        state: PathBuf,
        /// Comma-separated Rényi orders (e.g. "0,0.5,1,2,inf").
        #[arg(long, value_delimiter = ',')]
        alpha: Option<Vec<String>>,
    },
    /// Can the first state be transformed into the second?
    Order {
        #[arg(long, value_enum)]
        relation: RelArg,
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
    /// λ-scale of a state against a gauge pair of flat reference states.
    Ly {
        #[arg(long)]
        state: PathBuf,
        #[arg(long, value_enum)]
        relation: RelArg,
        /// Gauge as "Z0,Z1" (defaults to the relation's standard gauge).
        #[arg(long)]
        gauge: Option<String>,
        #[arg(long, value_enum)]
        which: Option<Which>,
    },
    /// Batch check that the λ-searches match their closed forms.
    Verify {
        #[arg(long, value_enum)]
        relation: RelArg,
        #[arg(long, default_value_t = 500)]
        trials: u32,
        #[arg(long = "dim-max", default_value_t = 8)]
        dim_max: usize,
    },
    /// Doubly stochastic certificate that one spectrum reaches another.
    Witness {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
    /// Randomized order-axiom suite.
    Axioms {
        #[arg(long, value_enum)]
        relation: RelArg,
        #[arg(long, default_value_t = 1000)]
        trials: u32,
        #[arg(long = "dim-max", default_value_t = 8)]
        dim_max: usize,
    },
    /// Lorenz-curve breakpoints of a state.
    Lorenz {
        #[arg(long)]
        state: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            let payload = Val::Obj(vec![
                ("kind".to_string(), Val::Str(e.kind.clone())),
                ("message".to_string(), Val::Str(e.message.clone())),
            ]);
            eprintln!("{}", payload.render());
            ExitCode::from(e.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let params = Params {
        beta: cli.beta,
        mu: cli.mu,
        gamma: cli.gamma,
        kb: cli.kb,
    };
    let output = cli.output;
    match cli.cmd {
        Cmd::Entropy { state, alpha } => cmd_entropy(&state, alpha, &params, output),
        Cmd::Order { relation, from, to } => cmd_order(relation.tag(), &from, &to, &params, output),
        Cmd::Ly {
            state,
            relation,
            gauge,
            which,
        } => cmd_ly(&state, relation.tag(), gauge, which, &params, output),
        Cmd::Verify {
            relation,
            trials,
            dim_max,
        } => cmd_verify(relation.tag(), trials, dim_max, cli.seed, &params, output),
        Cmd::Witness { from, to } => cmd_witness(&from, &to, output),
        Cmd::Axioms {
            relation,
            trials,
            dim_max,
        } => cmd_axioms(relation.tag(), trials, dim_max, cli.seed, &params, output),
        Cmd::Lorenz { state } => cmd_lorenz(&state, &params, output),
    }
}

fn require_json_or_table(mode: Option<OutputMode>) -> Result<OutputMode, CliError> {
    match mode.unwrap_or(OutputMode::Json) {
        OutputMode::Csv => Err(CliError::usage(
            "csv output is only available for the lorenz subcommand".to_string(),
        )),
        m => Ok(m),
    }
}

/// The reservoir kind a plain `entropy` invocation implies.
fn infer_tag(params: &Params, file: &state::StateFile) -> Tag {
    if params.beta.is_some() && params.mu.is_some() && file.particles.is_some() {
        Tag::Nt
    } else if params.beta.is_some() {
        Tag::T
    } else if params.gamma.is_some() && file.jz.is_some() {
        Tag::J
    } else {
        Tag::M
    }
}

fn parse_alphas(raw: Option<Vec<String>>) -> Result<Vec<f64>, CliError> {
    let Some(items) = raw else {
        return Ok(vec![0.0, 0.5, 1.0, 2.0, f64::INFINITY]);
    };
    let mut out = Vec::with_capacity(items.len());
    for item in items {
        let trimmed = item.trim();
        let v = if trimmed.eq_ignore_ascii_case("inf") || trimmed.eq_ignore_ascii_case("infinity") {
            f64::INFINITY
        } else {
            trimmed
                .parse::<f64>()
                .map_err(|_| CliError::usage(format!("bad Rényi order: {trimmed:?}")))?
        };
        if v.is_nan() || v < 0.0 {
            return Err(CliError::usage(format!("Rényi order must be >= 0, got {trimmed}")));
        }
        out.push(v);
    }
    Ok(out)
}

fn alpha_key(alpha: f64) -> String {
    if alpha.is_infinite() {
        "inf".to_string()
    } else {
        format!("{alpha}")
    }
}

fn cmd_entropy(
    path: &Path,
    alpha: Option<Vec<String>>,
    params: &Params,
    output: Option<OutputMode>,
) -> Result<u8, CliError> {
    let mode = require_json_or_table(output)?;
    let alphas = parse_alphas(alpha)?;
    let file = state::load(path)?;
    let tag = infer_tag(params, &file);
    let (probs, labels) = file.probabilities(tag)?;
    let res = state::reservoir(tag, &labels, params)?;
    let st = LabeledState::new(&probs, res).map_err(CliError::from)?;
    let report = entropy::report(st.spectrum(), st.reservoir(), &alphas).map_err(CliError::from)?;

    match mode {
        OutputMode::Json => println!("{}", entropy_json(&report).render()),
        OutputMode::Table => {
            println!("h      {}", fmt_f64(report.h));
            println!("h_min  {}", fmt_f64(report.h_min));
            println!("h_max  {}", fmt_f64(report.h_max));
            for &(a, v) in &report.renyi {
                println!("h_{:<5} {}", alpha_key(a), fmt_f64(v));
            }
            if let Some(f) = &report.free {
                println!("f      {}", fmt_f64(f.f));
                println!("f_min  {}", fmt_f64(f.f_min));
                println!("f_max  {}", fmt_f64(f.f_max));
            }
            if let Some(g) = &report.grand {
                println!("omega      {}", fmt_f64(g.omega));
                println!("omega_min  {}", fmt_f64(g.omega_min));
                println!("omega_max  {}", fmt_f64(g.omega_max));
            }
            if let Some(j) = &report.j {
                println!("s_j       {}", fmt_f64(j.reference));
                println!("sj_minus  {}", fmt_f64(j.lower));
                println!("sj_plus   {}", fmt_f64(j.upper));
            }
        }
        OutputMode::Csv => unreachable!(),
    }
    Ok(0)
}

fn entropy_json(report: &EntropyReport) -> Val {
    let mut fields = vec![
        ("h".to_string(), Val::Num(report.h)),
        ("h_min".to_string(), Val::Num(report.h_min)),
        ("h_max".to_string(), Val::Num(report.h_max)),
        (
            "renyi".to_string(),
            Val::Obj(
                report
                    .renyi
                    .iter()
                    .map(|&(a, v)| (alpha_key(a), Val::Num(v)))
                    .collect(),
            ),
        ),
    ];
    if let Some(f) = &report.free {
        fields.push(("f".to_string(), Val::Num(f.f)));
        fields.push(("f_min".to_string(), Val::Num(f.f_min)));
        fields.push(("f_max".to_string(), Val::Num(f.f_max)));
    }
    if let Some(g) = &report.grand {
        fields.push(("omega".to_string(), Val::Num(g.omega)));
        fields.push(("omega_min".to_string(), Val::Num(g.omega_min)));
        fields.push(("omega_max".to_string(), Val::Num(g.omega_max)));
    }
    if let Some(j) = &report.j {
        fields.push(("s_j".to_string(), Val::Num(j.reference)));
        fields.push(("sj_minus".to_string(), Val::Num(j.lower)));
        fields.push(("sj_plus".to_string(), Val::Num(j.upper)));
    }
    Val::Obj(fields)
}

fn cmd_order(
    tag: Tag,
    from: &Path,
    to: &Path,
    params: &Params,
    output: Option<OutputMode>,
) -> Result<u8, CliError> {
    let mode = require_json_or_table(output)?;
    let a = state::load_state(from, tag, params)?;
    let b = state::load_state(to, tag, params)?;
    let rel = relation_for(tag, params)?;
    let wa = a.weighted().map_err(CliError::from)?;
    let wb = b.weighted().map_err(CliError::from)?;
    let forward = rel.precedes(&wa, &wb).map_err(CliError::from)?;
    let reverse = rel.precedes(&wb, &wa).map_err(CliError::from)?;
    let class = match (forward, reverse) {
        (true, true) => Comparability::Equivalent,
        (true, false) => Comparability::ABeforeB,
        (false, true) => Comparability::BBeforeA,
        (false, false) => Comparability::Incomparable,
    };
    match mode {
        OutputMode::Json => {
            let payload = Val::Obj(vec![
                ("precedes".to_string(), Val::Bool(forward)),
                ("reverse".to_string(), Val::Bool(reverse)),
                ("class".to_string(), Val::Str(class.to_string())),
            ]);
            println!("{}", payload.render());
        }
        OutputMode::Table => {
            println!("precedes {forward}");
            println!("reverse  {reverse}");
            println!("class    {class}");
        }
        OutputMode::Csv => unreachable!(),
    }
    Ok(0)
}

fn relation_for(tag: Tag, params: &Params) -> Result<Relation, CliError> {
    let need = |o: Option<f64>, flag: &str| {
        o.ok_or_else(|| CliError::usage(format!("--{flag} is required for this relation")))
    };
    let res = match tag {
        Tag::M => Reservoir::none(),
        Tag::T => Reservoir::heat(need(params.beta, "beta")?, vec![]).with_k_b(params.kb),
        Tag::Nt => Reservoir::heat_particle(
            need(params.beta, "beta")?,
            need(params.mu, "mu")?,
            vec![],
            vec![],
        )
        .with_k_b(params.kb),
        Tag::J => Reservoir::angular_momentum(need(params.gamma, "gamma")?, vec![]),
    };
    Ok(Relation::new(res))
}

fn parse_gauge(raw: &str, base: LogBase) -> Result<Gauge, CliError> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::usage(format!("--gauge expects \"Z0,Z1\", got {raw:?}")));
    }
    let z0: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad gauge value {:?}", parts[0])))?;
    let z1: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad gauge value {:?}", parts[1])))?;
    Gauge::new(z0, z1, base).map_err(CliError::from)
}

fn lambda_json(r: &LambdaResult) -> Val {
    Val::Obj(vec![
        ("lambda_star".to_string(), Val::Num(r.lambda)),
        ("closed_form".to_string(), Val::Num(r.closed_form)),
        ("search_iterations".to_string(), Val::Int(r.iterations as i64)),
        ("residual".to_string(), Val::Num(r.residual)),
    ])
}

fn cmd_ly(
    path: &Path,
    tag: Tag,
    gauge: Option<String>,
    which: Option<Which>,
    params: &Params,
    output: Option<OutputMode>,
) -> Result<u8, CliError> {
    let mode = require_json_or_table(output)?;
    let st = state::load_state(path, tag, params)?;
    let rel = relation_for(tag, params)?;
    let base = if tag == Tag::M { LogBase::Log2 } else { LogBase::Ln };
    let g = match gauge {
        Some(raw) => parse_gauge(&raw, base)?,
        None => Gauge::for_reservoir(st.reservoir(), st.spectrum().dim()).map_err(CliError::from)?,
    };
    let x = st.weighted().map_err(CliError::from)?;

    let render = |r: &LambdaResult| -> String {
        match mode {
            OutputMode::Table => format!(
                "lambda_star {}\nclosed_form {}\nsearch_iterations {}\nresidual {}",
                fmt_f64(r.lambda),
                fmt_f64(r.closed_form),
                r.iterations,
                fmt_f64(r.residual)
            ),
            _ => lambda_json(r).render(),
        }
    };

    match which {
        Some(Which::Minus) => println!("{}", render(&entropy_lower(&rel, &x, &g)?)),
        Some(Which::Plus) => println!("{}", render(&entropy_upper(&rel, &x, &g)?)),
        Some(Which::S) => println!("{}", render(&entropy_flat(&rel, &x, &g)?)),
        None => {
            let lower = entropy_lower(&rel, &x, &g)?;
            let upper = entropy_upper(&rel, &x, &g)?;
            let flat = entropy_flat(&rel, &x, &g).ok();
            match mode {
                OutputMode::Table => {
                    println!("minus:\n{}", render(&lower));
                    println!("plus:\n{}", render(&upper));
                    if let Some(s) = &flat {
                        println!("s:\n{}", render(s));
                    }
                }
                _ => {
                    let mut fields = vec![
                        ("minus".to_string(), lambda_json(&lower)),
                        ("plus".to_string(), lambda_json(&upper)),
                    ];
                    if let Some(s) = &flat {
                        fields.push(("s".to_string(), lambda_json(s)));
                    }
                    fields.push((
                        "gauge".to_string(),
                        Val::Obj(vec![
                            ("z0".to_string(), Val::Num(g.z0())),
                            ("z1".to_string(), Val::Num(g.z1())),
                            (
                                "base".to_string(),
                                Val::Str(
                                    if base == LogBase::Log2 { "log2" } else { "ln" }.to_string(),
                                ),
                            ),
                        ]),
                    ));
                    println!("{}", Val::Obj(fields).render());
                }
            }
        }
    }
    Ok(0)
}

fn cmd_verify(
    tag: Tag,
    trials: u32,
    dim_max: usize,
    seed: u64,
    params: &Params,
    output: Option<OutputMode>,
) -> Result<u8, CliError> {
    let mode = require_json_or_table(output)?;
    let cfg = BatchConfig {
        tag,
        trials,
        seed,
        dim_max,
        beta: params.beta,
        mu: params.mu,
        gamma: params.gamma,
    };
    let report = scale::verify_batch(&cfg).map_err(CliError::from)?;
    match mode {
        OutputMode::Json => {
            let payload = Val::Obj(vec![
                ("relation".to_string(), Val::Str(tag.to_string())),
                ("trials".to_string(), Val::Int(report.trials as i64)),
                ("max_residual".to_string(), Val::Num(report.max_residual)),
                ("failures".to_string(), Val::Int(report.failures as i64)),
                ("pass".to_string(), Val::Bool(report.pass)),
            ]);
            println!("{}", payload.render());
        }
        OutputMode::Table => {
            let verdict = if report.pass { "PASS" } else { "FAIL" };
            println!(
                "{verdict} relation {tag}: {} trials, max residual {}",
                report.trials,
                fmt_f64(report.max_residual)
            );
            if let Some(worst) = &report.worst_case {
                println!("worst case: {worst}");
            }
        }
        OutputMode::Csv => unreachable!(),
    }
    Ok(if report.pass { 0 } else { 1 })
}

fn cmd_witness(from: &Path, to: &Path, output: Option<OutputMode>) -> Result<u8, CliError> {
    let mode = require_json_or_table(output)?;
    let a = state::load_state(from, Tag::M, &Params { beta: None, mu: None, gamma: None, kb: 1.0 })?;
    let b = state::load_state(to, Tag::M, &Params { beta: None, mu: None, gamma: None, kb: 1.0 })?;
    let w = build_witness(a.spectrum(), b.spectrum()).map_err(CliError::from)?;
    match mode {
        OutputMode::Json => {
            let steps = Val::Arr(
                w.steps()
                    .iter()
                    .map(|s| {
                        Val::Obj(vec![
                            ("i".to_string(), Val::Int(s.i as i64)),
                            ("j".to_string(), Val::Int(s.j as i64)),
                            ("t".to_string(), Val::Num(s.t)),
                        ])
                    })
                    .collect(),
            );
            let product = Val::Arr(
                (0..w.dim())
                    .map(|r| nums((0..w.dim()).map(|c| w.product_entry(r, c))))
                    .collect(),
            );
            let payload = Val::Obj(vec![
                ("dim".to_string(), Val::Int(w.dim() as i64)),
                ("steps".to_string(), steps),
                ("product".to_string(), product),
            ]);
            println!("{}", payload.render());
        }
        OutputMode::Table => {
            println!("dim {}", w.dim());
            for s in w.steps() {
                println!("mix ({}, {}) t = {}", s.i, s.j, fmt_f64(s.t));
            }
            for r in 0..w.dim() {
                let row: Vec<String> = (0..w.dim())
                    .map(|c| fmt_f64(w.product_entry(r, c)))
                    .collect();
                println!("{}", row.join(" "));
            }
        }
        OutputMode::Csv => unreachable!(),
    }
    Ok(0)
}

fn cmd_axioms(
    tag: Tag,
    trials: u32,
    dim_max: usize,
    seed: u64,
    params: &Params,
    output: Option<OutputMode>,
) -> Result<u8, CliError> {
    let mode = require_json_or_table(output)?;
    let mut cfg = TrialConfig::new(tag, trials, seed, dim_max).map_err(CliError::from)?;
    cfg.beta = params.beta;
    cfg.mu = params.mu;
    cfg.gamma = params.gamma;
    let report = run_axiom_suite(&cfg).map_err(CliError::from)?;

    if mode == OutputMode::Table {
        println!(
            "{:<26} {:>8} {:>8} {:>10}  first counterexample",
            "check", "checked", "vacuous", "violations"
        );
        for (name, s) in report.checks() {
            println!(
                "{:<26} {:>8} {:>8} {:>10}  {}",
                name,
                s.checked,
                s.vacuous,
                s.violations,
                s.first_counterexample.as_deref().unwrap_or("-")
            );
        }
    }
    let checks = Val::Obj(
        report
            .checks()
            .iter()
            .map(|(name, s)| {
                (
                    name.to_string(),
                    Val::Obj(vec![
                        ("checked".to_string(), Val::Int(s.checked as i64)),
                        ("vacuous".to_string(), Val::Int(s.vacuous as i64)),
                        ("violations".to_string(), Val::Int(s.violations as i64)),
                    ]),
                )
            })
            .collect(),
    );
    let payload = Val::Obj(vec![
        ("relation".to_string(), Val::Str(tag.to_string())),
        ("trials".to_string(), Val::Int(trials as i64)),
        ("seed".to_string(), Val::Int(seed as i64)),
        ("checks".to_string(), checks),
        (
            "violations".to_string(),
            Val::Int(report.total_violations() as i64),
        ),
    ]);
    println!("{}", payload.render());
    Ok(if report.total_violations() == 0 { 0 } else { 1 })
}

fn cmd_lorenz(
    path: &Path,
    params: &Params,
    output: Option<OutputMode>,
) -> Result<u8, CliError> {
    let file = state::load(path)?;
    let tag = infer_tag(params, &file);
    let (probs, labels) = file.probabilities(tag)?;
    let res = state::reservoir(tag, &labels, params)?;
    let st = LabeledState::new(&probs, res).map_err(CliError::from)?;
    let curve = st.weighted().map_err(CliError::from)?.lorenz();
    match output.unwrap_or(OutputMode::Json) {
        OutputMode::Csv => {
            let mut out = String::from("k,L\n");
            for (x, y) in curve.breakpoints() {
                out.push_str(&format!("{},{}\n", fmt_f64(x), fmt_f64(y)));
            }
            print!("{out}");
        }
        OutputMode::Json => {
            let pts = Val::Arr(
                curve
                    .breakpoints()
                    .map(|(x, y)| Val::Arr(vec![Val::Num(x), Val::Num(y)]))
                    .collect(),
            );
            println!(
                "{}",
                Val::Obj(vec![("breakpoints".to_string(), pts)]).render()
            );
        }
        OutputMode::Table => {
            println!("{:>18} {:>18}", "k", "L");
            for (x, y) in curve.breakpoints() {
                println!("{:>18} {:>18}", fmt_f64(x), fmt_f64(y));
            }
        }
    }
    Ok(0)
}
