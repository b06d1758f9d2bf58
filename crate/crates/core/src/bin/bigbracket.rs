//! Command-line front end: structure checks on JSON instance files.
//!
//! Exit codes: 0 = verdict true and every cross-check consistent,
//! 1 = verdict false (or a cross-check disagreed), 2 = input error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bigbracket::cli_io::{document, report_json, run_selftest, InstanceFile};
use bigbracket::courant::{is_courant, is_lie_algebroid, CourantStructure};
use bigbracket::error::{Error, Result};
use bigbracket::hierarchy::{verify_hierarchy, verify_hierarchy_compatibility, Bounds, Family, HierarchyRequest, Seed};
use bigbracket::random::{random_instance, Instance, Profile};
use bigbracket::report::StructureKind;
use bigbracket::structures::{
    compatible_complementary, compatible_hitchin, compatible_omega_n, compatible_pn, compatible_pomega,
    is_compatible_pair, is_complementary_form, is_exact_pqn, is_exact_pqn_background, is_hitchin,
    is_nijenhuis_courant, is_nijenhuis_lie, is_omega_n, is_pn, is_pomega, is_pqn_background, j_n, j_omega, j_pi,
    LambdaMode,
};
use bigbracket::tensor_calculus::EndoTensor;
use bigbracket::{Element, Rational, Report};

#[derive(Parser)]
#[command(name = "bigbracket", version, about = "Exact big-bracket checks for Lie and Courant algebroid structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Args)]
struct Output {
    /// Format of the report on standard output.
    #[arg(long, value_enum, default_value_t)]
    report: ReportFormat,
    /// Also write the JSON report document (with the instance embedded) here.
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Structure {
    Pn,
    Omegan,
    Pomega,
    Hitchin,
    PqnBg,
    ExactPqn,
    Complementary,
    CompatiblePair,
}

#[derive(Clone, Copy, ValueEnum)]
enum PairKind {
    Pn,
    Omegan,
    Hitchin,
    Pomega,
    Complementary,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Pomega,
    Omegan,
    Complementary,
    PnCompat,
}

#[derive(Args)]
struct Names {
    #[arg(long, default_value = "pi")]
    pi: String,
    #[arg(long, default_value = "omega")]
    omega: String,
    #[arg(long = "tensor-n", id = "tensor_n", default_value = "N")]
    n_name: String,
    #[arg(long = "tensor-h", id = "tensor_h", default_value = "H")]
    h: String,
    #[arg(long, default_value = "phi")]
    phi: String,
    #[arg(long, default_value = "pi2")]
    pi2: String,
    #[arg(long, default_value = "omega2")]
    omega2: String,
    #[arg(long = "tensor-n2", id = "tensor_n2", default_value = "N2")]
    n2: String,
}

#[derive(Subcommand)]
enum Command {
    /// Check {μ,μ} = 0, or {Θ,Θ} = 0 for a named Θ.
    Validate {
        file: PathBuf,
        /// Name of a degree-3 element to check as a Courant structure.
        #[arg(long)]
        theta: Option<String>,
        /// Name of a 3-form H: check Θ = μ + H.
        #[arg(long)]
        background: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Big bracket of two named elements (`mu` names the algebroid).
    Bracket {
        file: PathBuf,
        a: String,
        b: String,
        #[arg(long, value_enum, default_value_t)]
        report: ReportFormat,
    },
    /// Nijenhuis torsion of a named tensor.
    Torsion {
        file: PathBuf,
        #[arg(long)]
        tensor: String,
        /// Deform this degree-3 element instead of μ (Courant level).
        #[arg(long)]
        theta: Option<String>,
        /// Accept a Θ with {Θ,Θ} ≠ 0 (pre-Courant / pre-Lie setting).
        #[arg(long)]
        pre: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Concomitant and anticommutator of two named tensors.
    Concomitant {
        file: PathBuf,
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        #[arg(long)]
        theta: Option<String>,
        /// Accept a Θ with {Θ,Θ} ≠ 0 (pre-Courant / pre-Lie setting).
        #[arg(long)]
        pre: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Check a structure built from named tensors.
    Check {
        file: PathBuf,
        #[arg(long, value_enum)]
        structure: Structure,
        #[command(flatten)]
        names: Names,
        /// For `compatible-pair`: the two tensors (default `pi` and `N`).
        #[arg(long)]
        first: Option<String>,
        #[arg(long)]
        second: Option<String>,
        /// For `compatible-pair`: compare two structures of this kind
        /// (the second one from `pi2`/`omega2`/`N2`) instead of two tensors.
        #[arg(long, value_enum)]
        pair: Option<PairKind>,
        /// For `exact-pqn` with a background: the constant λ (default: computed).
        #[arg(long)]
        lambda: Option<String>,
        #[command(flatten)]
        output: Output,
    },
    /// Verify a hierarchy and its pairwise compatibilities.
    Hierarchy {
        file: PathBuf,
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        #[command(flatten)]
        names: Names,
        #[command(flatten)]
        output: Output,
    },
    /// Seeded randomized self-test of the whole engine.
    Selftest {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Generate a deterministic random instance file.
    Random {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value = "lie-algebra-solvable")]
        profile: String,
        #[arg(long, default_value_t = 3)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        base_dim: usize,
        #[arg(long, short = 'o')]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Input(Error),
    /// Not an input error, but nothing to report (e.g. a search came up empty).
    Negative(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

struct Loaded {
    file: InstanceFile,
    inst: Instance,
}

impl Loaded {
    fn open(path: &Path) -> Result<Self> {
        let file = InstanceFile::load(path)?;
        let inst = file.to_instance()?;
        Ok(Loaded { file, inst })
    }

    fn mu(&self) -> Element {
        self.inst.mu()
    }

    fn element(&self, name: &str) -> Result<Element> {
        if name == "mu" {
            return Ok(self.mu());
        }
        if let Ok(m) = self.inst.matrix(name) {
            return Ok(j_n(m).to_function());
        }
        self.inst.element(name).cloned()
    }

    fn opt_element(&self, name: &str) -> Option<Element> {
        self.inst.element(name).ok().cloned()
    }

    /// A named tensor as an endomorphism of `A ⊕ A*`.
    fn tensor(&self, name: &str) -> Result<EndoTensor<Rational>> {
        if let Ok(m) = self.inst.matrix(name) {
            return Ok(j_n(m));
        }
        let e = self.inst.element(name)?;
        match e.bidegree() {
            Some((2, 0)) => Ok(j_pi(e)),
            Some((0, 2)) => Ok(j_omega(e)),
            _ => EndoTensor::from_function(e),
        }
    }

    /// The named Θ (μ by default), rejected when `{Θ,Θ} ≠ 0` unless `pre`.
    fn theta(&self, name: Option<&str>, pre: bool) -> Result<Element> {
        let t = match name {
            None => self.mu(),
            Some(n) => self.element(n)?,
        };
        let c = CourantStructure::new(t)?;
        let c = if pre { c.pre() } else { c };
        Ok(c.validated()?.theta().clone())
    }
}

fn emit(r: &Report, request: Value, inst: Option<&InstanceFile>, output: &Output) -> Result<ExitCode> {
    let doc = document(r, request, inst);
    match output.report {
        ReportFormat::Text => print!("{r}"),
        ReportFormat::Json => print!("{}", bigbracket::cli_io::report_json::to_pretty(&doc)),
    }
    if let Some(path) = &output.out {
        std::fs::write(path, bigbracket::cli_io::report_json::to_pretty(&doc))
            .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
    }
    Ok(if r.verdict && r.consistent() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn parse_rational(s: &str) -> Result<Rational> {
    s.parse::<Rational>().map_err(|e| Error::parse("--lambda", format!("{s:?}: {e}")))
}

fn check(
    l: &Loaded,
    structure: Structure,
    names: &Names,
    first: Option<&str>,
    second: Option<&str>,
    pair: Option<PairKind>,
    lambda: Option<&str>,
) -> Result<Report> {
    let mu = l.mu();
    let el = |n: &str| l.inst.element(n).cloned();
    let mat = |n: &str| l.inst.matrix(n).cloned();
    Ok(match structure {
        Structure::Pn => is_pn(&mu, &el(&names.pi)?, &mat(&names.n_name)?)?,
        Structure::Omegan => is_omega_n(&mu, &el(&names.omega)?, &mat(&names.n_name)?)?,
        Structure::Pomega => is_pomega(&mu, &el(&names.pi)?, &el(&names.omega)?)?,
        Structure::Hitchin => is_hitchin(&mu, &el(&names.omega)?, &mat(&names.n_name)?)?,
        Structure::PqnBg => is_pqn_background(&mu, &el(&names.pi)?, &mat(&names.n_name)?, &el(&names.phi)?, &el(&names.h)?)?,
        Structure::ExactPqn => {
            let (pi, n, omega) = (el(&names.pi)?, mat(&names.n_name)?, el(&names.omega)?);
            match l.opt_element(&names.h) {
                Some(h) => {
                    let mode = match lambda {
                        Some(s) => LambdaMode::Given(parse_rational(s)?),
                        None => LambdaMode::Computed,
                    };
                    is_exact_pqn_background(&mu, &pi, &n, &omega, &h, &mode)?
                }
                None => is_exact_pqn(&mu, &pi, &n, &omega)?.report,
            }
        }
        Structure::Complementary => is_complementary_form(&mu, &el(&names.pi)?, &el(&names.omega)?)?,
        Structure::CompatiblePair => match pair {
            None => {
                let i = l.tensor(first.unwrap_or(&names.pi))?;
                let j = l.tensor(second.unwrap_or(&names.n_name))?;
                is_compatible_pair(&mu, &i, &j)?
            }
            Some(PairKind::Pn) => {
                let (a, b) = ((el(&names.pi)?, mat(&names.n_name)?), (el(&names.pi2)?, mat(&names.n2)?));
                compatible_pn(&mu, (&a.0, &a.1), (&b.0, &b.1))?
            }
            Some(PairKind::Omegan) => {
                let (a, b) = ((el(&names.omega)?, mat(&names.n_name)?), (el(&names.omega2)?, mat(&names.n2)?));
                compatible_omega_n(&mu, (&a.0, &a.1), (&b.0, &b.1))?
            }
            Some(PairKind::Hitchin) => {
                let (a, b) = ((el(&names.omega)?, mat(&names.n_name)?), (el(&names.omega2)?, mat(&names.n2)?));
                compatible_hitchin(&mu, (&a.0, &a.1), (&b.0, &b.1))?
            }
            Some(PairKind::Pomega) => {
                let (a, b) = ((el(&names.pi)?, el(&names.omega)?), (el(&names.pi2)?, el(&names.omega2)?));
                compatible_pomega(&mu, (&a.0, &a.1), (&b.0, &b.1))?
            }
            Some(PairKind::Complementary) => {
                compatible_complementary(&mu, &el(&names.pi)?, &el(&names.omega)?, &el(&names.omega2)?)?
            }
        },
    })
}

fn hierarchy_seed(l: &Loaded, family: Family, names: &Names) -> Result<Seed<Rational>> {
    let el = |n: &str| l.inst.element(n).cloned();
    let mat = |n: &str| l.inst.matrix(n).cloned();
    Ok(match family {
        Family::POmega => {
            let second = match (l.opt_element(&names.pi2), l.opt_element(&names.omega2)) {
                (Some(p), Some(w)) => Some((p, w)),
                _ => None,
            };
            Seed::POmega { pi: el(&names.pi)?, omega: el(&names.omega)?, second }
        }
        Family::OmegaN => Seed::OmegaN { omega: el(&names.omega)?, n: mat(&names.n_name)? },
        Family::Complementary => Seed::Complementary { pi: el(&names.pi)?, omega: el(&names.omega)? },
        Family::PnCompat => Seed::PN { pi: el(&names.pi)?, n: mat(&names.n_name)? },
    })
}

fn run(cmd: Command) -> std::result::Result<ExitCode, Failure> {
    match cmd {
        Command::Validate { file, theta, background, output } => {
            let l = Loaded::open(&file)?;
            let r = match (&theta, &background) {
                (Some(_), Some(_)) => {
                    return Err(Error::parse("validate", "--theta and --background are exclusive").into())
                }
                (Some(t), None) => is_courant(&CourantStructure::new(l.element(t)?)?),
                (None, Some(h)) => is_courant(&CourantStructure::with_background(&l.mu(), &l.element(h)?)?),
                (None, None) => is_lie_algebroid(&l.mu()),
            };
            let req = json!({ "command": "validate", "theta": theta, "background": background });
            Ok(emit(&r, req, Some(&l.file), &output)?)
        }
        Command::Bracket { file, a, b, report } => {
            let l = Loaded::open(&file)?;
            let v = bigbracket::graded_algebra::big_bracket(&l.element(&a)?, &l.element(&b)?)?;
            match report {
                ReportFormat::Text => println!("{{{a}, {b}}} = {v}"),
                ReportFormat::Json => {
                    let doc = json!({
                        "kind": "bracket",
                        "request": { "command": "bracket", "a": a, "b": b },
                        "display": v.to_string(),
                        "terms": bigbracket::cli_io::instance::element_terms(&v)?,
                        "instance": l.file,
                    });
                    print!("{}", bigbracket::cli_io::report_json::to_pretty(&doc));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Torsion { file, tensor, theta, pre, output } => {
            let l = Loaded::open(&file)?;
            let t = l.theta(theta.as_deref(), pre)?;
            let r = match (&theta, l.inst.matrix(&tensor)) {
                (None, Ok(n)) => is_nijenhuis_lie(&t, n)?,
                _ => is_nijenhuis_courant(&t, &l.tensor(&tensor)?)?,
            };
            let req = json!({ "command": "torsion", "tensor": tensor, "theta": theta, "pre": pre });
            Ok(emit(&r, req, Some(&l.file), &output)?)
        }
        Command::Concomitant { file, first, second, theta, pre, output } => {
            let l = Loaded::open(&file)?;
            let r = is_compatible_pair(&l.theta(theta.as_deref(), pre)?, &l.tensor(&first)?, &l.tensor(&second)?)?;
            let req = json!({ "command": "concomitant", "first": first, "second": second, "theta": theta, "pre": pre });
            Ok(emit(&r, req, Some(&l.file), &output)?)
        }
        Command::Check { file, structure, names, first, second, pair, lambda, output } => {
            let l = Loaded::open(&file)?;
            let r = check(&l, structure, &names, first.as_deref(), second.as_deref(), pair, lambda.as_deref())?;
            let tag = structure.to_possible_value().expect("named").get_name().to_string();
            let req = json!({
                "command": "check",
                "structure": tag,
                "pair": pair.map(|p| p.to_possible_value().expect("named").get_name().to_string()),
                "first": first,
                "second": second,
                "lambda": lambda,
            });
            Ok(emit(&r, req, Some(&l.file), &output)?)
        }
        Command::Hierarchy { file, family, n, m, k, names, output } => {
            let l = Loaded::open(&file)?;
            let family = match family {
                FamilyArg::Pomega => Family::POmega,
                FamilyArg::Omegan => Family::OmegaN,
                FamilyArg::Complementary => Family::Complementary,
                FamilyArg::PnCompat => Family::PnCompat,
            };
            let d = Bounds::from_env()?;
            let bounds = Bounds::new(n.unwrap_or(d.n), m.unwrap_or(d.m), k.unwrap_or(d.k))?;
            let req = HierarchyRequest { mu: l.mu(), seed: hierarchy_seed(&l, family, &names)?, bounds };
            let mut r = Report::new(StructureKind::Hierarchy);
            for sub in [verify_hierarchy(&req)?, verify_hierarchy_compatibility(&req)?] {
                for c in sub.conditions {
                    r.push(c);
                }
                r.cross_checks.extend(sub.cross_checks);
            }
            let request = json!({
                "command": "hierarchy",
                "family": family.tag(),
                "n": bounds.n,
                "m": bounds.m,
                "k": bounds.k,
            });
            Ok(emit(&r, request, Some(&l.file), &output)?)
        }
        Command::Selftest { seed, cases, output } => {
            let summary = run_selftest(seed, cases);
            let r = summary.to_report();
            match output.report {
                ReportFormat::Text => {
                    println!("selftest seed {seed}, {cases} cases per suite");
                    print!("{r}");
                }
                ReportFormat::Json => {
                    let mut doc = report_json(&r);
                    doc["request"] = json!({ "command": "selftest", "seed": seed, "cases": cases });
                    doc["summary"] = summary.to_json();
                    print!("{}", bigbracket::cli_io::report_json::to_pretty(&doc));
                }
            }
            if let Some(path) = &output.out {
                let mut doc = report_json(&r);
                doc["request"] = json!({ "command": "selftest", "seed": seed, "cases": cases });
                doc["summary"] = summary.to_json();
                std::fs::write(path, bigbracket::cli_io::report_json::to_pretty(&doc))
                    .map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
            }
            Ok(if summary.all_passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Random { seed, profile, rank, base_dim, out } => {
            let p = Profile::from_tag(&profile).ok_or_else(|| Error::parse("--profile", format!("unknown profile {profile:?}")))?;
            let inst = match random_instance(seed, p, rank, base_dim) {
                Ok(i) => i,
                Err(Error::SearchExhausted(m)) => return Err(Failure::Negative(format!("no instance found: {m}"))),
                Err(e) => return Err(e.into()),
            };
            let file = InstanceFile::from_instance(&inst)?;
            match out {
                Some(path) => file.save(&path)?,
                None => print!("{}", file.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Negative(m)) => {
            eprintln!("{m}");
            ExitCode::from(1)
        }
    }
}
