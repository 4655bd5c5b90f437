//! Command-line front end. [`run`] does all the work and returns the exit
//! code with the text for stdout and stderr; `main` only prints it.
//!
//! Exit codes: 0 success or check holds, 1 check failed (witnesses are in
//! the JSON output), 2 malformed input or refused request.

use std::fs;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::atiyah::{check_cocycle, check_higher_flatness, cocycle::default_degree_bound, gauge_transform, LieMap};
use crate::correspondence::{
    check_lemma21, check_order_bound, example_library, extract_rep, rep_to_liemap, validate_rep, Example,
    Representation,
};
use crate::error::Error;
use crate::formal::Scalar;
use crate::json;
use crate::lie::{build_algebra_with_limit, DEFAULT_MAX_DIM};
use crate::obstruction::{default_split_bound, obstruction, split_cocycle, CechP1Model, SplitOutcome};

pub const MAX_DIM_ENV: &str = "INFEQ_MAX_DIM";

#[derive(Parser, Debug)]
#[command(name = "infeq", version, about = "Exact checks for infinitesimally equivariant bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Truncated Lie algebras of formal vector fields.
    Algebra {
        #[arg(value_enum)]
        action: AlgebraAction,
        #[command(flatten)]
        params: AlgebraParams,
    },
    /// Representations of a truncated algebra, read from a JSON file.
    Rep {
        #[arg(value_enum)]
        action: RepAction,
        #[arg(long = "in", value_name = "FILE")]
        input: String,
    },
    /// Lie maps, read from a JSON file.
    Liemap {
        #[arg(value_enum)]
        action: LiemapAction,
        #[command(flatten)]
        params: LiemapParams,
    },
    /// Built-in examples as a (rep, liemap) pair.
    Examples {
        #[arg(value_enum)]
        name: ExampleName,
        /// Density weight, `p/q` or a Gaussian rational.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        lambda: String,
        /// Number of variables.
        #[arg(long, default_value_t = 1)]
        dim: usize,
        /// Order of the jets.
        #[arg(long, default_value_t = 2)]
        n: u32,
        /// Rank of the flat example.
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
    /// Gluing obstructions.
    Obstruction {
        #[command(subcommand)]
        model: ObstructionModel,
    },
}

#[derive(Args, Debug)]
struct AlgebraParams {
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    trunc: u32,
    /// Number of derived-series steps to report.
    #[arg(long)]
    depth: Option<usize>,
}

#[derive(Args, Debug)]
struct LiemapParams {
    #[arg(long = "in", value_name = "FILE")]
    input: String,
    /// Frame for `gauge`: `{"matrix": [[poly, ...], ...]}`.
    #[arg(long, value_name = "FILE")]
    frame: Option<String>,
    /// Largest monomial weight in the cocycle check (default order + 2).
    #[arg(long)]
    degree_bound: Option<u32>,
    /// Truncation for `extract-rep` (default: the order).
    #[arg(long)]
    trunc: Option<u32>,
    /// Weight cutoff for `gauge`; the output is exact below it.
    #[arg(long, default_value_t = 6)]
    cutoff: u32,
}

#[derive(Subcommand, Debug)]
enum ObstructionModel {
    /// `O(n)` on the two-chart projective line.
    P1 {
        #[arg(long, allow_negative_numbers = true)]
        degree: i64,
        #[arg(long, allow_hyphen_values = true)]
        rho: String,
        /// Also search for a splitting of the mismatch.
        #[arg(long)]
        split: bool,
        /// Degree bound of the splitting search (default |n| + 4).
        #[arg(long)]
        max_degree: Option<u32>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgebraAction {
    Info,
    Basis,
    Brackets,
    Derived,
    Abelianization,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RepAction {
    Validate,
    ToLiemap,
    Lemma21,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LiemapAction {
    Cocycle,
    Order,
    Flatness,
    ExtractRep,
    Gauge,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExampleName {
    Densities,
    Omega1,
    Jets,
    #[value(name = "sl2_order3", alias = "sl2-order3")]
    Sl2Order3,
    Flat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn json(code: i32, v: &Value) -> Self {
        Outcome { code, stdout: json::to_canonical_string(v) + "\n", stderr: String::new() }
    }

    fn error(e: &Error) -> Self {
        let mut body = json!({ "message": e.to_string() });
        if let Error::Format { path, message } = e {
            body = json!({ "path": path, "message": message });
        }
        Outcome {
            code: 2,
            stdout: json::to_canonical_string(&json!({ "error": body })) + "\n",
            stderr: format!("infeq: {e}\n"),
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match dispatch(cli.command) {
        Ok((code, v)) => Outcome::json(code, &v),
        Err(e) => Outcome::error(&e),
    }
}

type Res = Result<(i32, Value), Error>;

fn status(holds: bool) -> i32 {
    if holds {
        0
    } else {
        1
    }
}

fn max_dim() -> Result<usize, Error> {
    match std::env::var(MAX_DIM_ENV) {
        Ok(s) => s.trim().parse().map_err(|_| Error::Format { path: MAX_DIM_ENV.into(), message: format!("not a dimension: {s:?}") }),
        Err(_) => Ok(DEFAULT_MAX_DIM),
    }
}

fn read_json(path: &str, flag: &str) -> Result<Value, Error> {
    let text = if path == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Format { path: flag.into(), message: e.to_string() })?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Error::Format { path: flag.into(), message: format!("{path}: {e}") })?
    };
    json::parse_str(&text)
}

fn dispatch(cmd: Command) -> Res {
    match cmd {
        Command::Algebra { action, params } => algebra(action, &params),
        Command::Rep { action, input } => rep(action, &input),
        Command::Liemap { action, params } => liemap(action, &params),
        Command::Examples { name, lambda, dim, n, rank } => {
            let lambda: Scalar = lambda
                .parse()
                .map_err(|_| Error::Format { path: "--lambda".into(), message: format!("not a scalar: {lambda:?}") })?;
            let ex = match name {
                ExampleName::Densities => Example::Densities { lambda, d: dim },
                ExampleName::Omega1 => Example::Omega1 { d: dim },
                ExampleName::Jets => Example::Jets { n },
                ExampleName::Sl2Order3 => Example::Sl2Order3,
                ExampleName::Flat => Example::Flat { rank, d: dim },
            };
            Ok((0, json::example_to_json(&example_library(&ex)?)))
        }
        Command::Obstruction { model: ObstructionModel::P1 { degree, rho, split, max_degree } } => {
            let rho: Scalar =
                rho.parse().map_err(|_| Error::Format { path: "--rho".into(), message: format!("not a scalar: {rho:?}") })?;
            let model = CechP1Model::standard(degree, rho.clone());
            let value = obstruction(&model)?;
            let mut out = json!({
                "degree": degree,
                "rho": json::scalar_to_json(&rho),
                "obstruction": json::scalar_to_json(&value),
            });
            let mut code = 0;
            if split {
                let outcome = split_cocycle(&model, max_degree.unwrap_or_else(|| default_split_bound(degree)))?;
                code = status(matches!(outcome, SplitOutcome::Split { .. }));
                out["split"] = json::split_outcome_to_json(&outcome);
            }
            Ok((code, out))
        }
    }
}

fn algebra(action: AlgebraAction, p: &AlgebraParams) -> Res {
    if p.dim == 0 {
        return Err(Error::Format { path: "--dim".into(), message: "must be positive".into() });
    }
    let alg = build_algebra_with_limit(p.dim, p.trunc, max_dim()?)?;
    let v = match action {
        AlgebraAction::Info => json::algebra_info_json(&alg),
        AlgebraAction::Basis => json::algebra_basis_json(&alg),
        AlgebraAction::Brackets => json::algebra_brackets_json(&alg),
        AlgebraAction::Derived => json::algebra_derived_json(&alg, p.depth),
        AlgebraAction::Abelianization => json::algebra_abelianization_json(&alg),
    };
    Ok((0, v))
}

fn rep(action: RepAction, input: &str) -> Res {
    let rep: Representation = json::rep_from_json(&read_json(input, "--in")?, max_dim()?)?;
    let report = validate_rep(&rep);
    if !report.holds || matches!(action, RepAction::Validate) {
        return Ok((status(report.holds), json::rep_report_to_json(&rep, &report)));
    }
    match action {
        RepAction::Validate => unreachable!(),
        RepAction::ToLiemap => Ok((0, json::liemap_to_json(&rep_to_liemap(&rep)?))),
        RepAction::Lemma21 => {
            let r = check_lemma21(&rep)?;
            Ok((status(r.holds && r.eigen_identity), json::lemma21_report_to_json(&r)))
        }
    }
}

fn liemap(action: LiemapAction, p: &LiemapParams) -> Res {
    let l: LieMap = json::liemap_from_json(&read_json(&p.input, "--in")?)?;
    let bound = p.degree_bound.unwrap_or_else(|| default_degree_bound(&l));
    let cocycle = || check_cocycle(&l, bound);
    match action {
        LiemapAction::Cocycle => {
            let r = cocycle();
            Ok((status(r.holds), json::cocycle_report_to_json(&r)))
        }
        LiemapAction::Order => {
            let r = cocycle();
            if !r.holds {
                return Ok((1, json!({ "cocycle": json::cocycle_report_to_json(&r) })));
            }
            let order = check_order_bound(&l)?;
            Ok((status(order.bound_ok), json::order_report_to_json(&order)))
        }
        LiemapAction::Flatness => {
            let r = check_higher_flatness(&l);
            Ok((status(r.holds), json::flatness_report_to_json(&r)))
        }
        LiemapAction::ExtractRep => {
            let r = cocycle();
            if !r.holds {
                return Ok((1, json!({ "cocycle": json::cocycle_report_to_json(&r) })));
            }
            let trunc = p.trunc.unwrap_or_else(|| l.order());
            Ok((0, json::rep_to_json(&extract_rep(&l, trunc)?)))
        }
        LiemapAction::Gauge => {
            let path = p
                .frame
                .as_deref()
                .ok_or_else(|| Error::Format { path: "--frame".into(), message: "required for gauge".into() })?;
            if p.cutoff == 0 {
                return Err(Error::Format { path: "--cutoff".into(), message: "must be positive".into() });
            }
            let g = json::frame_from_json(&read_json(path, "--frame")?, l.dim(), l.rank())?;
            let out = gauge_transform(&l, &g, p.cutoff)?.truncate(p.cutoff - 1);
            Ok((0, json!({ "cutoff": p.cutoff, "liemap": json::liemap_to_json(&out) })))
        }
    }
}
