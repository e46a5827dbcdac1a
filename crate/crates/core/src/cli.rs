//! Command-line front end. Exit codes: 0 success, 1 a property violation or
//! rejected proof, 2 an input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::dot::{fh_dot, lattice_dot};
use crate::enumerate::EnumConfig;
use crate::error::Error;
use crate::fh::{build_category, category_equivalence_suite};
use crate::genmodels::{gen_fh, gen_hms, gen_implicit, Caps};
use crate::hms::suite::explicit_laws;
use crate::hms::SuiteConfig;
use crate::implicit::{derivation_laws, derivation_suite, implicit_laws};
use crate::io::{dump_category, load_model, render_model, AnyModel};
use crate::lpa::{check_proof, fuzz_soundness, parse_proof, FuzzConfig, ModelClass};
use crate::report::Report;
use crate::transforms::{apply, equivalence_check, transform_equivalence_suite, Transform};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Data,
}

#[derive(Parser, Debug)]
#[command(name = "awarekit", version, about = "Model checking and transforms for epistemic models with unawareness")]
struct Cli {
    /// Output style: human-readable text or JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run every structural validator of the model's family.
    Validate {
        file: PathBuf,
        /// Also run the property suites.
        #[arg(long)]
        suites: bool,
        /// Write a Graphviz rendering of the model here.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Evaluate a formula.
    Check {
        file: PathBuf,
        #[arg(long)]
        formula: String,
        /// A single state (`key:id` on lattices, a world name otherwise).
        #[arg(long, conflicts_with = "all")]
        state: Option<String>,
        /// Every state (the default when no state is given).
        #[arg(long)]
        all: bool,
    },
    /// Convert a model to another family.
    Transform {
        file: PathBuf,
        #[arg(long, value_parser = parse_transform)]
        to: Transform,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write every sublanguage model and a morphism manifest here.
        #[arg(long)]
        dump_category: Option<PathBuf>,
        /// Quotient sublanguage models by bisimulation.
        #[arg(long)]
        minimize: bool,
    },
    /// Compare a model with its transform formula by formula.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_parser = parse_transform)]
        via: Transform,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Run every suite on generated models.
    Fuzz {
        #[arg(long, default_value_t = 20)]
        trials: usize,
        /// Maximum atoms, worlds and agents, as `k,m,n`.
        #[arg(long, value_parser = parse_caps, default_value = "3,5,2")]
        caps: Caps,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
    /// Proofs and soundness of the axiom system.
    Lpa {
        #[command(subcommand)]
        command: LpaCommand,
    },
    /// Generate a model file.
    Gen(GenArgs),
}

#[derive(Subcommand, Debug)]
enum LpaCommand {
    /// Check a proof file.
    Check { proof: PathBuf },
    /// Check random schema instances on random models.
    Fuzz {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_parser = parse_caps, default_value = "3,5,2")]
        caps: Caps,
        /// Restrict to one model class.
        #[arg(long, value_parser = parse_class)]
        class: Option<ModelClass>,
    },
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long, value_parser = parse_caps, default_value = "3,5,2")]
    caps: Caps,
    #[arg(long, value_enum, default_value_t = Family::Fh)]
    family: Family,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Fh,
    Hms,
    ImplicitHms,
}

fn parse_transform(s: &str) -> Result<Transform, String> {
    s.parse()
}

fn parse_class(s: &str) -> Result<ModelClass, String> {
    s.parse()
}

fn parse_caps(s: &str) -> Result<Caps, String> {
    let parts: Vec<usize> = s
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| format!("`{p}` is not a number")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [k, m, n] => Ok(Caps::new(*k, *m, *n)),
        _ => Err("expected three numbers `atoms,worlds,agents`".into()),
    }
}

/// Fatal outcome of a subcommand.
enum Failure {
    Input(String),
    Violation(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::Model(_) | Error::Syntax(_) | Error::InvalidCaps(_) => Failure::Input(e.to_string()),
            Error::PreconditionFailed(r)
            | Error::CandidateInvalid(r)
            | Error::DerivationInconsistent(r)
            | Error::TransformInvariantBroken { report: r, .. } => Failure::Violation(format!("{e}\n{r}")),
        }
    }
}

impl From<crate::error::ModelError> for Failure {
    fn from(e: crate::error::ModelError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

struct Out<'a> {
    format: Format,
    stdout: &'a mut dyn Write,
}

impl Out<'_> {
    fn text(&mut self, s: &str) {
        if self.format == Format::Text {
            let _ = self.stdout.write_all(s.as_bytes());
            if !s.ends_with('\n') {
                let _ = self.stdout.write_all(b"\n");
            }
        }
    }

    fn data<T: Serialize>(&mut self, value: &T) {
        if self.format == Format::Data {
            let s = serde_json::to_string_pretty(value).expect("output serializes");
            let _ = writeln!(self.stdout, "{s}");
        }
    }

    /// Prints a report in either format; violations exit 1.
    fn report(&mut self, title: &str, report: &Report) -> i32 {
        self.data(&json!({ "ok": report.is_empty(), "report": report }));
        self.text(&format!("{title}: {}", report));
        if report.is_empty() {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = stdout.write_all(text.as_bytes());
            } else {
                let _ = stderr.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let mut out = Out {
        format: cli.format,
        stdout,
    };
    match dispatch(cli.command, &mut out) {
        Ok(code) => code,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            EXIT_INPUT
        }
        Err(Failure::Violation(msg)) => {
            out.data(&json!({ "ok": false, "error": msg }));
            let _ = writeln!(stderr, "{msg}");
            EXIT_VIOLATION
        }
    }
}

fn dispatch(cmd: Command, out: &mut Out<'_>) -> Outcome {
    match cmd {
        Command::Validate { file, suites, dot } => validate(&file, suites, dot.as_deref(), out),
        Command::Check {
            file,
            formula,
            state,
            all: _,
        } => check(&file, &formula, state.as_deref(), out),
        Command::Transform {
            file,
            to,
            out: path,
            dump_category: dump,
            minimize,
        } => transform(&file, to, path.as_deref(), dump.as_deref(), minimize, out),
        Command::Equiv { a, b, via, depth } => {
            let (a, b) = (load_model(&a)?, load_model(&b)?);
            let r = equivalence_check((&a).try_into()?, (&b).try_into()?, via, &EnumConfig::with_depth(depth))?;
            Ok(out.report("counterexamples", &r))
        }
        Command::Fuzz {
            trials,
            caps,
            seed,
            depth,
        } => fuzz(trials, caps, seed, depth, out),
        Command::Lpa { command } => lpa(command, out),
        Command::Gen(args) => gen(args, out),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn validate(file: &Path, suites: bool, dot: Option<&Path>, out: &mut Out<'_>) -> Outcome {
    let model = load_model(file)?;
    let cfg = SuiteConfig::default();
    let mut report = model.validate();
    if suites && report.is_empty() {
        match &model {
            AnyModel::Fh(k) => {
                let c = build_category(k, false)?;
                report.extend(c.validate());
                report.extend(category_equivalence_suite(&c, &EnumConfig::default()));
            }
            AnyModel::Hms(h) => report.extend(explicit_laws(h, &cfg)),
            AnyModel::Complemented(c) => {
                report.extend(explicit_laws(c, &cfg));
                report.extend(implicit_laws(c, &cfg));
            }
            AnyModel::Implicit(im) => report.extend(derivation_suite(im, &cfg)?),
        }
    }
    if let Some(path) = dot {
        let text = match &model {
            AnyModel::Fh(k) => fh_dot(k),
            AnyModel::Hms(h) => lattice_dot(h.lattice(), &labelled("pi", &h.frame.agents, &h.pi)),
            AnyModel::Complemented(c) => {
                let mut rel = labelled("pi", &c.base.frame.agents, &c.base.pi);
                rel.extend(labelled("lambda", &c.base.frame.agents, &c.lambda));
                lattice_dot(c.lattice(), &rel)
            }
            AnyModel::Implicit(im) => lattice_dot(im.lattice(), &labelled("lambda*", &im.frame.agents, &im.lambda_star)),
        };
        write_file(path, &text)?;
    }
    Ok(out.report(&format!("{} model", model.family()), &report))
}

fn labelled<'a>(
    what: &str,
    agents: &[String],
    corrs: &'a [crate::hms::Correspondence],
) -> Vec<(String, &'a crate::hms::Correspondence)> {
    agents.iter().zip(corrs).map(|(a, c)| (format!("{what} {a}"), c)).collect()
}

fn check(file: &Path, formula: &str, state: Option<&str>, out: &mut Out<'_>) -> Outcome {
    let model = load_model(file)?;
    let values = model.evaluate(formula)?;
    let labels = model.state_labels();
    if let Some(s) = state {
        let i = model.state_index(s)?;
        out.data(&json!({ "state": labels[i], "value": values[i] }));
        out.text(&values[i].to_string());
        return Ok(EXIT_OK);
    }
    let rows: Vec<_> = labels.iter().zip(&values).map(|(s, v)| json!({ "state": s, "value": v })).collect();
    out.data(&json!({ "states": rows }));
    let text: String = labels.iter().zip(&values).map(|(s, v)| format!("{s}\t{v}\n")).collect();
    out.text(&text);
    Ok(EXIT_OK)
}

fn transform(
    file: &Path,
    to: Transform,
    path: Option<&Path>,
    dump: Option<&Path>,
    minimize: bool,
    out: &mut Out<'_>,
) -> Outcome {
    let model = load_model(file)?;
    let result = apply(&model, to, minimize)?;
    if let Some(dir) = dump {
        let AnyModel::Fh(k) = &model else {
            return Err(Failure::Input("--dump-category needs an awareness structure as input".into()));
        };
        dump_category(&build_category(k, minimize)?, dir)?;
    }
    let text = render_model(&result);
    match path {
        Some(p) => {
            write_file(p, &text)?;
            out.data(&json!({ "ok": true, "family": result.family(), "out": p }));
            out.text(&format!("wrote {} model to {}", result.family(), p.display()));
        }
        None => {
            // the model itself is the output in both formats
            let _ = out.stdout.write_all(text.as_bytes());
        }
    }
    Ok(EXIT_OK)
}

fn fuzz(trials: usize, caps: Caps, seed: u64, depth: usize, out: &mut Out<'_>) -> Outcome {
    caps.check()?;
    let cfg = SuiteConfig::default();
    let enum_cfg = EnumConfig::with_depth(depth);
    let mut report = Report::new();
    let tag = |report: &mut Report, seed: u64, stage: &str, r: Report| {
        for v in r.violations {
            report.push(v.law, format!("seed {seed} {stage}: {}", v.witness));
        }
        report.suppressed += r.suppressed;
    };
    for t in 0..trials {
        let s = seed.wrapping_add(t as u64);
        let k = gen_fh(s, caps)?;
        let c = build_category(&k, true)?;
        tag(&mut report, s, "category", c.validate());
        tag(&mut report, s, "category-equivalence", category_equivalence_suite(&c, &enum_cfg));
        let m = gen_hms(s, caps)?;
        tag(&mut report, s, "validate", m.validate());
        tag(&mut report, s, "explicit", explicit_laws(&m, &cfg));
        tag(&mut report, s, "implicit", implicit_laws(&m, &cfg));
        let im = gen_implicit(s, caps)?;
        let d = im.derive_pi_star()?;
        tag(&mut report, s, "derivation", derivation_laws(&d, &cfg));
        tag(&mut report, s, "transforms", transform_equivalence_suite(&k, true, &enum_cfg)?);
    }
    out.data(&json!({ "ok": report.is_empty(), "trials": trials, "report": report }));
    out.text(&format!("{trials} trials: {report}"));
    Ok(if report.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
}

fn lpa(cmd: LpaCommand, out: &mut Out<'_>) -> Outcome {
    match cmd {
        LpaCommand::Check { proof } => {
            let text = fs::read_to_string(&proof).map_err(|e| Failure::Input(format!("{}: {e}", proof.display())))?;
            let lines = parse_proof(&text).map_err(|e| Failure::Input(e.to_string()))?;
            let verdict = check_proof(&lines);
            out.data(&verdict);
            match &verdict.failure {
                None => out.text(&format!("accepted ({} lines)", verdict.lines)),
                Some(f) => out.text(&format!("rejected at line {}: {}", f.line, f.reason)),
            }
            Ok(if verdict.accepted { EXIT_OK } else { EXIT_VIOLATION })
        }
        LpaCommand::Fuzz {
            trials,
            depth,
            seed,
            caps,
            class,
        } => {
            caps.check()?;
            let cfg = FuzzConfig {
                trials,
                depth,
                seed,
                caps,
                ..FuzzConfig::default()
            };
            let classes: Vec<ModelClass> = class.map(|c| vec![c]).unwrap_or_else(|| ModelClass::ALL.to_vec());
            let mut report = Report::new();
            let mut summary = Vec::new();
            for c in classes {
                let o = fuzz_soundness(c, &cfg)?;
                summary.push(json!({ "class": c, "trials": o.trials, "tally": o.tally }));
                out.text(&format!(
                    "{c}: {} trials, {} schema instances, {} rule applications",
                    o.trials, o.tally.schema_instances, o.tally.rule_applications
                ));
                report.extend(o.report);
            }
            out.data(&json!({ "ok": report.is_empty(), "classes": summary, "report": report }));
            out.text(&format!("counterexamples: {report}"));
            Ok(if report.is_empty() { EXIT_OK } else { EXIT_VIOLATION })
        }
    }
}

fn gen(args: GenArgs, out: &mut Out<'_>) -> Outcome {
    let model = match args.family {
        Family::Fh => AnyModel::Fh(gen_fh(args.seed, args.caps)?),
        Family::Hms => AnyModel::Complemented(gen_hms(args.seed, args.caps)?),
        Family::ImplicitHms => AnyModel::Implicit(gen_implicit(args.seed, args.caps)?),
    };
    let text = render_model(&model);
    match args.out {
        Some(p) => {
            write_file(&p, &text)?;
            out.data(&json!({ "ok": true, "family": model.family(), "out": p }));
            out.text(&format!("wrote {} model to {}", model.family(), p.display()));
        }
        None => {
            let _ = out.stdout.write_all(text.as_bytes());
        }
    }
    Ok(EXIT_OK)
}
