//! Command-line front end. Every subcommand writes one JSON document or CSV
//! table to stdout or `--out`.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::acceptance::{all_required_pass, run_all, CriterionReport};
use crate::algebra::MultiIndex;
use crate::c_operator::build_c;
use crate::closed_forms::{
    binding_energy, thresholds, zeta_closed_with, AnharmonicParams, QuarticModel, ZetaInput, ZetaPrefactor,
};
use crate::matrix_model::{self, pt_inner, TwoLevelModel};
use crate::perturbation::degenerate::{even_class, level_states};
use crate::perturbation::{degenerate_block, first_order_state, pt_normalize, second_order_state_ix3, ModelId};
use crate::spectral::{diagonalize, zeta_numeric, HamiltonianFamily, SpectrumResult};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("writing output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

fn numeric(e: impl std::fmt::Display) -> CliError {
    CliError::Numeric(e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "ptsym", version, about = "PT-symmetric quantum mechanics: perturbation theory, C operators, spectra")]
pub struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for parameter sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues and PT norms of a Hamiltonian family.
    Spectrum(SpectrumArgs),
    /// Spectral zeta function sum 1/E_n of p^2 + x^2 (ix)^eps.
    Zeta(ZetaArgs),
    /// Exact perturbative eigenstates of a cubic-coupled oscillator.
    Perturb(PerturbArgs),
    /// The C operator kernel.
    Coperator(COperatorArgs),
    /// The 2x2 matrix model.
    Matrix2x2(MatrixArgs),
    /// Second-order splitting of a degenerate ixyz level.
    Degenerate(DegenerateArgs),
    /// Binding energies of the quartic oscillator.
    Bindings(BindingsArgs),
    /// Run every acceptance check and print a pass/fail table.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Eps,
    Cubic,
    Quartic,
}

/// Half-open range `start:stop:step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl FromStr for Sweep {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<f64> = s
            .split(':')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("'{p}': {e}")))
            .collect::<Result<_, _>>()?;
        let [start, stop, step] = parts[..] else {
            return Err(format!("expected start:stop:step, got '{s}'"));
        };
        if !(step > 0.0) || !(stop > start) {
            return Err(format!("empty sweep '{s}'"));
        }
        Ok(Sweep { start, stop, step })
    }
}

impl Sweep {
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step - 1e-9).ceil().max(0.0) as usize;
        // rounding keeps 0.1 * 3 printing as 0.3
        (0..count).map(|i| ((self.start + i as f64 * self.step) * 1e12).round() / 1e12).collect()
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Eps)]
    pub family: FamilyArg,
    /// eps for `eps` and `cubic`, the coupling g for `quartic`.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub param: f64,
    /// Oscillator mass for `quartic`.
    #[arg(long, default_value_t = 1.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 10)]
    pub levels: usize,
    #[arg(long, default_value_t = 200)]
    pub basis: usize,
    /// Half-open parameter range `start:stop:step`; keeps real levels only.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep: Option<Sweep>,
}

#[derive(Debug, Args)]
pub struct ZetaArgs {
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub compare_numeric: bool,
    #[arg(long, default_value_t = 400)]
    pub basis: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Ix3,
    Ix2y,
    Ixyz,
}

impl From<ModelArg> for ModelId {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Ix3 => ModelId::Ix3,
            ModelArg::Ix2y => ModelId::Ix2y,
            ModelArg::Ixyz => ModelId::Ixyz,
        }
    }
}

#[derive(Debug, Args)]
pub struct PerturbArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Ix3)]
    pub model: ModelArg,
    /// Unperturbed level; every state of the level for the multi-dimensional models.
    #[arg(long, default_value_t = 0)]
    pub n: u32,
    /// Explicit quantum numbers, e.g. `2,1`.
    #[arg(long, value_delimiter = ',')]
    pub index: Option<Vec<u32>>,
    #[arg(long, default_value_t = 1)]
    pub order: u32,
}

#[derive(Debug, Args)]
pub struct COperatorArgs {
    #[arg(long, value_enum, default_value_t = ModelArg::Ix3)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 1)]
    pub order: u32,
}

#[derive(Debug, Args)]
pub struct MatrixArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub r: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub s: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub theta: f64,
    /// Evolve `--psi0` to this time.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Initial state `re0,im0,re1,im1`.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub psi0: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct DegenerateArgs {
    #[arg(long, default_value_t = 2)]
    pub level: u32,
    /// Use every state of the level instead of the all-even ones.
    #[arg(long)]
    pub all: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuarticArg {
    Pt,
    Conventional,
}

#[derive(Debug, Args)]
pub struct BindingsArgs {
    #[arg(long, default_value_t = 1.0)]
    pub m: f64,
    #[arg(long)]
    pub g: f64,
    /// Largest particle number; rows run over `2..=k`.
    #[arg(long, default_value_t = 2)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = QuarticArg::Pt)]
    pub model: QuarticArg,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Exit 0 when the only failures are documented as unattainable.
    #[arg(long)]
    pub allow_known: bool,
}

/// Rendered result of one subcommand.
pub enum Output {
    Json(Value),
    Csv(String),
    Text(String),
}

impl Output {
    fn render(self) -> String {
        match self {
            Output::Json(v) => serde_json::to_string_pretty(&v).expect("JSON values serialize") + "\n",
            Output::Csv(s) | Output::Text(s) => s,
        }
    }
}

fn c64(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn csv_unsupported(cmd: &str) -> CliError {
    CliError::Usage(format!("--format csv is not available for {cmd}"))
}

fn spectrum_rows(res: &SpectrumResult, levels: usize, real_only: bool) -> Vec<(usize, Complex64, i8, bool)> {
    res.levels
        .iter()
        .enumerate()
        .filter(|(_, l)| l.converged && (l.real || !real_only))
        .take(levels)
        .map(|(n, l)| (n, l.energy, l.pt.filter(|_| l.real).map_or(0, |p| p.sign), l.converged))
        .collect()
}

fn spectrum(args: &SpectrumArgs, format: Format) -> Result<Output, CliError> {
    let base = match args.family {
        FamilyArg::Eps => HamiltonianFamily::Epsilon { eps: args.param },
        FamilyArg::Cubic => HamiltonianFamily::Cubic { eps: args.param },
        FamilyArg::Quartic => HamiltonianFamily::QuarticPlus { m: args.mass, g: args.param },
    };
    let points = args.sweep.map_or_else(|| vec![args.param], |s| s.points());
    for &p in &points {
        base.with_parameter(p).validate().map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let results: Vec<SpectrumResult> = points
        .par_iter()
        .map(|&p| diagonalize(base.with_parameter(p), args.basis))
        .collect::<Result<_, _>>()
        .map_err(numeric)?;
    let real_only = args.sweep.is_some();
    match format {
        Format::Csv => {
            let mut s = String::from("epsilon,n,re_E,im_E,pt_sign,converged\n");
            for (p, res) in points.iter().zip(&results) {
                for (n, e, sign, conv) in spectrum_rows(res, args.levels, real_only) {
                    s += &format!("{p},{n},{},{},{sign},{conv}\n", e.re, e.im);
                }
            }
            Ok(Output::Csv(s))
        }
        Format::Json => Ok(Output::Json(json!({
            "family": base,
            "basis": args.basis,
            "points": points.iter().zip(&results).map(|(p, res)| json!({
                "parameter": p,
                "converged_levels": res.converged_levels().count(),
                "levels": spectrum_rows(res, args.levels, real_only).into_iter().map(|(n, e, sign, conv)| json!({
                    "n": n,
                    "energy": c64(e),
                    "real": res.levels[n].real,
                    "pt_sign": sign,
                    "pt_magnitude": res.levels[n].pt.map(|p| p.magnitude),
                    "convergence": res.levels[n].convergence,
                    "converged": conv,
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }))),
    }
}

fn zeta(args: &ZetaArgs, format: Format) -> Result<Output, CliError> {
    if format == Format::Csv {
        return Err(csv_unsupported("zeta"));
    }
    let input = ZetaInput::new(args.epsilon).map_err(|e| CliError::Usage(e.to_string()))?;
    let closed = zeta_closed_with(input, ZetaPrefactor::Consistent).map_err(numeric)?;
    let alternate = zeta_closed_with(input, ZetaPrefactor::Alternate).map_err(numeric)?;
    let mut out = json!({ "epsilon": args.epsilon, "closed_form": closed, "alternate_prefactor": alternate });
    if args.compare_numeric {
        if !(args.epsilon < 2.0) {
            return Err(CliError::Usage(format!("numerical zeta needs eps < 2, got {}", args.epsilon)));
        }
        let z = zeta_numeric(args.epsilon, args.basis).map_err(numeric)?;
        out["numeric"] = json!({
            "value": z.value,
            "partial_sum": z.partial_sum,
            "tail": z.tail,
            "tail_error": z.tail_error,
            "levels": z.levels,
            "fit": { "amplitude": z.amplitude, "offset": z.offset, "exponent": z.exponent },
            "converged": z.converged,
            "basis": args.basis,
        });
        out["relative_difference"] = json!(z.value / closed - 1.0);
    }
    Ok(Output::Json(out))
}

fn perturb(args: &PerturbArgs, format: Format) -> Result<Output, CliError> {
    if format == Format::Csv {
        return Err(csv_unsupported("perturb"));
    }
    let model = ModelId::from(args.model);
    if args.order == 0 || args.order > 2 || (args.order == 2 && model != ModelId::Ix3) {
        return Err(CliError::Usage(format!("order {} is not available for {model}", args.order)));
    }
    let indices: Vec<MultiIndex> = match &args.index {
        Some(idx) => vec![MultiIndex::new(idx)],
        None => match model {
            ModelId::Ix3 => vec![MultiIndex::new(&[args.n])],
            ModelId::Ix2y => (0..=args.n).rev().map(|k| MultiIndex::new(&[k, args.n - k])).collect(),
            ModelId::Ixyz => level_states(args.n),
        },
    };
    let mut states = Vec::new();
    for idx in indices {
        let st = if args.order == 2 {
            second_order_state_ix3(idx.get(0)).map_err(numeric)?
        } else {
            first_order_state(model, &idx).map_err(|e| CliError::Usage(e.to_string()))?
        };
        let mut v = st.to_json();
        v["order"] = json!(args.order);
        if let Ok(norm) = pt_normalize(&st) {
            v["a_eps1"] = json!(crate::algebra::gauss::fmt_ratio(&norm.eps1));
        }
        states.push(v);
    }
    Ok(Output::Json(if states.len() == 1 { states.remove(0) } else { Value::Array(states) }))
}

fn coperator(args: &COperatorArgs, format: Format) -> Result<Output, CliError> {
    let k = build_c(args.model.into(), args.order).map_err(|e| CliError::Usage(e.to_string()))?;
    match format {
        Format::Json => {
            let mut v = k.to_json();
            v["c_squared_is_identity"] = json!(k.compose_c().map_err(numeric)?.iter().all(|r| r.is_zero()));
            Ok(Output::Json(v))
        }
        Format::Csv => {
            let mut s = String::from("order,x,d,re,im\n");
            for (order, l) in k.corrections.iter().enumerate() {
                for (key, c) in l.terms() {
                    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                    s += &format!(
                        "{order},{},{},{},{}\n",
                        join(&key.x),
                        join(&key.d),
                        crate::algebra::gauss::fmt_ratio(&c.re),
                        crate::algebra::gauss::fmt_ratio(&c.im)
                    );
                }
            }
            Ok(Output::Csv(s))
        }
    }
}

fn matrix2x2(args: &MatrixArgs, format: Format) -> Result<Output, CliError> {
    if format == Format::Csv {
        return Err(csv_unsupported("matrix2x2"));
    }
    if ![args.r, args.s, args.theta].iter().all(|v| v.is_finite()) {
        return Err(CliError::Usage("r, s and theta must be finite".into()));
    }
    let sol = matrix_model::solve(TwoLevelModel::new(args.r, args.s, args.theta));
    let mut v = sol.to_json();
    if let Some(p) = &args.psi0 {
        if p.len() != 4 {
            return Err(CliError::Usage(format!("--psi0 takes 4 numbers, got {}", p.len())));
        }
        let psi = [Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3])];
        let t = args.t.unwrap_or(0.0);
        let later = sol.evolve(&psi, t);
        v["evolution"] = json!({
            "t": t,
            "psi": [c64(later[0]), c64(later[1])],
            "pt_norm": [c64(pt_inner(&psi, &psi)), c64(pt_inner(&later, &later))],
            "cpt_norm": match (sol.cpt_inner(&psi, &psi), sol.cpt_inner(&later, &later)) {
                (Ok(a), Ok(b)) => json!([c64(a), c64(b)]),
                _ => Value::Null,
            },
        });
    } else if args.t.is_some() {
        return Err(CliError::Usage("--t needs --psi0".into()));
    }
    Ok(Output::Json(v))
}

fn degenerate(args: &DegenerateArgs, format: Format) -> Result<Output, CliError> {
    if format == Format::Csv {
        return Err(csv_unsupported("degenerate"));
    }
    let subset = (!args.all).then(|| even_class(args.level));
    let blk = degenerate_block(args.level, subset.as_deref()).map_err(numeric)?;
    Ok(Output::Json(blk.to_json()))
}

fn bindings(args: &BindingsArgs, format: Format) -> Result<Output, CliError> {
    let params = AnharmonicParams::new(args.m, args.g).map_err(|e| CliError::Usage(e.to_string()))?;
    if args.k < 2 {
        return Err(CliError::Usage(format!("--k must be at least 2, got {}", args.k)));
    }
    let model = match args.model {
        QuarticArg::Pt => QuarticModel::PtSymmetric,
        QuarticArg::Conventional => QuarticModel::Conventional,
    };
    let rows = (2..=args.k).map(|k| binding_energy(&params, k, model)).collect::<Result<Vec<_>, _>>().map_err(numeric)?;
    match format {
        Format::Csv => {
            let mut s = String::from("k,energy,mass,ratio,leading,bound\n");
            for b in &rows {
                s += &format!("{},{},{},{},{},{}\n", b.k, b.energy, b.mass, b.ratio, b.leading, b.is_bound());
            }
            Ok(Output::Csv(s))
        }
        Format::Json => Ok(Output::Json(json!({
            "m": args.m,
            "g": args.g,
            "nu": params.nu(),
            "model": match model { QuarticModel::PtSymmetric => "pt", QuarticModel::Conventional => "conventional" },
            "bindings": rows.iter().map(|b| json!({
                "k": b.k, "energy": b.energy, "mass": b.mass, "ratio": b.ratio, "leading": b.leading, "bound": b.is_bound(),
            })).collect::<Vec<_>>(),
            "reference_thresholds": {
                "two_particle_unbinds_nu": thresholds::TWO_PARTICLE_UNBINDS,
                "delta2_peak_nu": thresholds::DELTA2_PEAK_NU,
                "delta2_peak": thresholds::DELTA2_PEAK,
                "delta2_limit": thresholds::DELTA2_LIMIT,
                "k_particle_unbinds_nu": thresholds::K_PARTICLE_UNBINDS.iter().map(|(k, nu)| json!({"k": k, "nu": nu})).collect::<Vec<_>>(),
            },
        }))),
    }
}

fn verify_table(reports: &[CriterionReport]) -> String {
    let mut s = String::new();
    for r in reports {
        s += &format!("{r}\n");
        if let (false, Some(why)) = (r.passed, r.known_unattainable()) {
            s += &format!("{:13}reason: {why}\n", "");
        }
    }
    s
}

fn verify(args: &VerifyArgs, format: Option<Format>, seed: u64) -> Result<(Output, bool), CliError> {
    let reports = run_all(seed);
    let ok = if args.allow_known { all_required_pass(&reports) } else { reports.iter().all(|r| r.passed) };
    let out = match format {
        None => Output::Text(verify_table(&reports)),
        Some(Format::Json) => Output::Json(json!({
            "seed": seed,
            "passed": ok,
            "criteria": reports.iter().map(|r| {
                let mut v = serde_json::to_value(r).expect("plain data");
                v["known_unattainable"] = json!(r.known_unattainable());
                v
            }).collect::<Vec<_>>(),
        })),
        Some(Format::Csv) => {
            let mut s = String::from("id,passed,known_unattainable,seconds,detail\n");
            for r in &reports {
                s += &format!(
                    "{},{},{},{:.3},\"{}\"\n",
                    r.id,
                    r.passed,
                    r.known_unattainable().is_some(),
                    r.seconds,
                    r.detail.replace('"', "'")
                );
            }
            Output::Csv(s)
        }
    };
    Ok((out, ok))
}

/// Runs a parsed command line. Returns the rendered output and whether every
/// check the command performs passed.
pub fn run(cli: &Cli) -> Result<(String, bool), CliError> {
    faer::set_global_parallelism(faer::Par::Seq);
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let format = cli.format.unwrap_or(Format::Json);
    let (out, ok) = match &cli.command {
        Command::Spectrum(a) => (spectrum(a, format)?, true),
        Command::Zeta(a) => (zeta(a, format)?, true),
        Command::Perturb(a) => (perturb(a, format)?, true),
        Command::Coperator(a) => (coperator(a, format)?, true),
        Command::Matrix2x2(a) => (matrix2x2(a, format)?, true),
        Command::Degenerate(a) => (degenerate(a, format)?, true),
        Command::Bindings(a) => (bindings(a, format)?, true),
        Command::Verify(a) => verify(a, cli.format, cli.seed)?,
    };
    Ok((out.render(), ok))
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = run(&cli).and_then(|(text, ok)| {
        match &cli.out {
            Some(path) => fs::write(path, &text)?,
            None => std::io::stdout().write_all(text.as_bytes())?,
        }
        Ok(ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
