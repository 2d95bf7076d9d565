//! `virab`: exact checks for `W(a,b)`, `Vir(a,b)` and their modules `Φ`, `Θ`.
//!
//! Exit status: 0 when every check passes, 1 when a check fails, 2 on a
//! usage, parse or config error.

mod docs;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use virab::algebra::{bracket, verify_algebra, AlgebraParams, BasisSymbol, Case};
use virab::classify::{classify, isom_decide_specs, Outcome};
use virab::orbit::{
    find_invariance_violation, orbit_closure, MonomialPredicate, DEFAULT_BOUNDS, DEFAULT_ROUNDS, DEFAULT_WINDOW,
};
use virab::poly::{parse_poly, BiPoly};
use virab::report::Report;
use virab::repmod::{q_poly, verify_consistency, verify_freeness, verify_module, Representation};
use virab::Scalar;

use docs::{load, CandidateDoc, ClassifyDoc, ModuleSpecDoc};

/// Setting this variable zeroes the reported timings, for reproducible output.
const FIXED_CLOCK_VAR: &str = "VIRAB_FIXED_CLOCK";

#[derive(Parser, Debug)]
#[command(name = "virab", version, about = "Exact checks for W(a,b), Vir(a,b) and their free rank-one modules")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracket of two basis symbols such as L:2, W:-1, C:1.
    Bracket {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Antisymmetry and Jacobi on all symbols with index in [-N, N].
    VerifyAlgebra {
        #[command(flatten)]
        algebra: AlgebraArgs,
        #[arg(long, default_value_t = 5)]
        window: i64,
    },
    /// Action of one basis symbol on a polynomial in s, t.
    Act {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Module axioms, freeness, or agreement with the generic window action.
    VerifyModule {
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long, default_value_t = 3)]
        window: i64,
        /// Bound on the total degree of the test monomials.
        #[arg(long, default_value_t = 3)]
        deg: u32,
        #[arg(long, value_enum, default_value_t = Suite::Module)]
        suite: Suite,
    },
    /// The generating polynomial q_{n,k;alpha}(t).
    Qpoly {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        alpha: Scalar,
        #[arg(long, allow_hyphen_values = true)]
        b: Scalar,
    },
    /// Canonical parameters of a candidate family, or an infeasibility certificate.
    Classify {
        #[arg(long)]
        candidate: PathBuf,
    },
    /// Whether two modules are isomorphic.
    Isom {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Span of seeds under L_m, W_m (|m| <= N) in a degree box, or an
    /// invariance check of a monomial-spanned subspace.
    Orbit {
        #[arg(long)]
        spec: PathBuf,
        /// Seed polynomial; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        seed: Vec<String>,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: i64,
        #[arg(long, default_value_t = DEFAULT_BOUNDS.0)]
        ds: u32,
        #[arg(long, default_value_t = DEFAULT_BOUNDS.1)]
        dt: u32,
        #[arg(long, default_value_t = DEFAULT_ROUNDS)]
        rounds: usize,
        /// Check that the monomials satisfying this predicate (e.g. "j>=1")
        /// span an invariant subspace, instead of computing a closure.
        #[arg(long)]
        invariant: Option<String>,
    },
}

#[derive(Args, Debug)]
struct AlgebraArgs {
    /// One of w, vir00, vir0m1, vir120, vir-gen, vir01.
    #[arg(long, default_value = "w")]
    case: String,
    /// Required unless the case fixes it.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<Scalar>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<Scalar>,
}

impl AlgebraArgs {
    fn params(&self) -> Result<AlgebraParams> {
        let case = Case::from_name(&self.case).ok_or_else(|| anyhow!("unknown case {:?}", self.case))?;
        let fixed = case.fixed_params();
        let pick = |given: &Option<Scalar>, default: Option<Scalar>, name: &str| {
            given
                .clone()
                .or(default)
                .ok_or_else(|| anyhow!("--{name} is required for case {case}"))
        };
        let a = pick(&self.a, fixed.as_ref().map(|f| f.0.clone()), "a")?;
        let b = pick(&self.b, fixed.as_ref().map(|f| f.1.clone()), "b")?;
        Ok(AlgebraParams::new(a, b, case)?)
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct ModuleArgs {
    /// A phi/theta module document.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// A candidate family document; acts only on its window.
    #[arg(long)]
    candidate: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Module,
    Freeness,
    Consistency,
}

/// What a subcommand produced: its text and structured renderings, and
/// whether its checks passed.
struct Output {
    text: String,
    json: serde_json::Value,
    pass: bool,
}

impl Output {
    fn value(text: impl ToString, json: serde_json::Value) -> Output {
        Output { text: text.to_string(), json, pass: true }
    }

    fn report(mut report: Report) -> Output {
        if std::env::var_os(FIXED_CLOCK_VAR).is_some() {
            report.elapsed_us = 0;
        }
        Output {
            text: report.to_string(),
            json: to_json(&report),
            pass: report.is_pass(),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("documents serialize")
}

fn symbol(text: &str) -> Result<BasisSymbol> {
    text.parse().with_context(|| format!("symbol {text:?}"))
}

fn poly(text: &str) -> Result<BiPoly> {
    parse_poly(text).with_context(|| format!("polynomial {text:?}"))
}

fn run(command: Command) -> Result<Output> {
    Ok(match command {
        Command::Bracket { algebra, x, y } => {
            let p = algebra.params()?;
            let result = bracket(symbol(&x)?, symbol(&y)?, &p)?;
            Output::value(&result, json!({"case": p.case().name(), "x": x, "y": y, "result": result.to_string()}))
        }
        Command::VerifyAlgebra { algebra, window } => Output::report(verify_algebra(&algebra.params()?, window)),
        Command::Act { spec, x, poly: f } => {
            let spec = load::<ModuleSpecDoc>(&spec)?.to_spec()?;
            let result = spec.act_symbol(symbol(&x)?, &poly(&f)?)?;
            Output::value(&result, json!({"x": x, "poly": f, "result": result.to_string()}))
        }
        Command::VerifyModule { module, window, deg, suite } => {
            if let Some(path) = module.spec {
                let spec = load::<ModuleSpecDoc>(&path)?.to_spec()?;
                Output::report(match suite {
                    Suite::Module => verify_module(&spec, window, deg),
                    Suite::Freeness => verify_freeness(&spec, deg),
                    Suite::Consistency => verify_consistency(&spec, window, deg),
                })
            } else {
                let path = module.candidate.expect("clap requires one of the two");
                let fam = load::<CandidateDoc>(&path)?.to_family()?;
                Output::report(match suite {
                    Suite::Module => verify_module(&fam, window, deg),
                    Suite::Freeness => verify_freeness(&fam, deg),
                    Suite::Consistency => bail!("--suite consistency needs --spec"),
                })
            }
        }
        Command::Qpoly { n, k, alpha, b } => {
            let q = q_poly(n, k, &alpha, &b);
            Output::value(&q, json!({"n": n, "k": k, "alpha": alpha, "b": b, "result": q.to_string()}))
        }
        Command::Classify { candidate } => {
            let outcome = classify(&load::<CandidateDoc>(&candidate)?.to_family()?);
            let text = match &outcome {
                Outcome::Canonical(p) => p.to_string(),
                Outcome::Infeasible(cert) => format!("infeasible {cert}"),
            };
            Output {
                text,
                json: to_json(&ClassifyDoc::from_outcome(&outcome)),
                pass: outcome.canonical().is_some(),
            }
        }
        Command::Isom { left, right } => {
            let l = load::<ModuleSpecDoc>(&left)?.to_spec()?;
            let r = load::<ModuleSpecDoc>(&right)?.to_spec()?;
            let same = isom_decide_specs(&l, &r)?;
            let text = if same { "isomorphic" } else { "not isomorphic" };
            Output::value(text, json!({"isomorphic": same}))
        }
        Command::Orbit { spec, seed, window, ds, dt, rounds, invariant } => {
            let spec = load::<ModuleSpecDoc>(&spec)?.to_spec()?;
            let bounds = (ds, dt);
            if let Some(pred) = invariant {
                let pred: MonomialPredicate = pred.parse().with_context(|| format!("predicate {pred:?}"))?;
                let violation = find_invariance_violation(&spec, &|i, j| pred.holds(i, j), window, bounds);
                let text = match &violation {
                    None => format!("invariant {pred}"),
                    Some(v) => format!(
                        "not invariant {pred}: {} maps s^{}*t^{} to {}",
                        v.operator, v.monomial.0, v.monomial.1, v.image
                    ),
                };
                let witness = violation.as_ref().map(|v| {
                    json!({"operator": v.operator, "monomial": [v.monomial.0, v.monomial.1], "image": v.image.to_string()})
                });
                Output {
                    text,
                    json: json!({"predicate": pred.to_string(), "invariant": violation.is_none(), "witness": witness}),
                    pass: violation.is_none(),
                }
            } else {
                if seed.is_empty() {
                    bail!("orbit needs at least one --seed, or --invariant");
                }
                let seeds = seed.iter().map(|s| poly(s)).collect::<Result<Vec<_>>>()?;
                let report = orbit_closure(&spec, &seeds, window, bounds, rounds)?;
                Output::value(&report, to_json(&report))
            }
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output = match run(cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let mut rendered = match cli.format {
        Format::Text => output.text,
        Format::Json => serde_json::to_string_pretty(&output.json).expect("json renders"),
    };
    rendered.push('\n');
    let written = match &cli.out {
        Some(path) => fs::write(path, &rendered).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if output.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
