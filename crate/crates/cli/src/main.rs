//! `mtc`: command-line verifier for modular tensor category data.
//!
//! Exit codes: 0 when every selected check passes or is skipped, 1 when a
//! check fails (or the data fails validation on load), 2 on usage, parse
//! and I/O errors.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use modular_data::catalog;
use modular_data::characters::{character_series, check_tau, eval_character, DEFAULT_ORDER};
use modular_data::data::{Label, ToleranceConfig};
use modular_data::error::Error;
use modular_data::format::{load_data_file, DataSet};
use modular_data::fusion::{quantum_dimension, verlinde_fusion};
use modular_data::suite::{run_checks, Check, SuiteOptions};

#[derive(Parser)]
#[command(name = "mtc", version, about = "Verify modular tensor category data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in data sets.
    Catalog,
    /// Summarize a data set, or print it in canonical file form.
    Show {
        source: String,
        /// Print the canonical `mtc-data v1` text instead of a summary.
        #[arg(long)]
        export: bool,
    },
    /// Run identity checks and report residuals.
    Verify {
        source: String,
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        #[command(flatten)]
        num: NumArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print the fusion tensor computed from S by the Verlinde formula.
    Verlinde {
        source: String,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Print character q-series, or evaluate them with `--tau`.
    Chars {
        source: String,
        /// Restrict to one label.
        #[arg(long)]
        label: Option<String>,
        /// Number of q-expansion coefficients [default: 12 when printing,
        /// 400 when evaluating].
        #[arg(long)]
        order: Option<usize>,
        /// Evaluate at this point instead of printing coefficients.
        #[arg(long, value_parser = parse_tau)]
        tau: Option<Complex64>,
    },
}

#[derive(Args)]
struct NumArgs {
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Character truncation order.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    order: usize,
    /// Evaluation point for character checks, as `re,im`.
    #[arg(long, value_parser = parse_tau, default_value = "0,2")]
    tau: Complex64,
}

fn parse_tau(s: &str) -> Result<Complex64, String> {
    let (re, im) = s.split_once(',').ok_or("expected `re,im`")?;
    let re: f64 = re.trim().parse().map_err(|e| format!("real part: {e}"))?;
    let im: f64 = im.trim().parse().map_err(|e| format!("imaginary part: {e}"))?;
    Ok(Complex64::new(re, im))
}

struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Validation(_)) { 1 } else { 2 };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

fn load(source: &str) -> Result<DataSet, Error> {
    match source.strip_prefix("catalog:") {
        Some(name) => catalog::get_entry(name),
        None => load_data_file(source),
    }
}

fn label(ds: &DataSet, name: &str) -> Result<Label, Failure> {
    ds.data.label_by_name(name).ok_or_else(|| usage(format!("no label `{name}` in {}", ds.name)))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Catalog => {
            for name in catalog::names() {
                let ds = catalog::get_entry(&name)?;
                let mut extras = Vec::new();
                if ds.fr.is_some() {
                    extras.push("F/R");
                }
                if ds.chars.is_some() {
                    extras.push("characters");
                }
                println!("{name:<10} {:>2} labels  c = {:<6} {}", ds.data.m(), ds.data.c(), extras.join(", "));
            }
        }
        Command::Show { source, export } => {
            let ds = load(&source)?;
            if export {
                print!("{}", ds.export());
                return Ok(0);
            }
            let tol = ToleranceConfig::default();
            println!("name   {}", ds.name);
            for note in &ds.notes {
                println!("note   {note}");
            }
            println!("labels {}", ds.data.names().join(" "));
            println!("c      {}", ds.data.c());
            for a in ds.data.labels() {
                let d = quantum_dimension(&ds.s, ds.data.unit(), a, &tol)?;
                println!(
                    "  {:<6} h = {:<8} dual = {:<6} d = {:.12}",
                    ds.data.name(a),
                    ds.data.h(a),
                    ds.data.name(ds.data.dual(a)),
                    d.re
                );
            }
            println!("F/R    {}", if ds.fr.is_some() { "yes" } else { "no" });
            println!("chars  {}", if ds.chars.is_some() { "yes" } else { "no" });
        }
        Command::Verify { source, checks, num, json } => {
            let checks = Check::parse_list(&checks).map_err(usage)?;
            let tol = ToleranceConfig::new(num.tol, ToleranceConfig::default().eps_det)?;
            check_tau(num.tau)?;
            let ds = match load(&source) {
                Err(Error::Validation(report)) => {
                    eprintln!("{source}: validation failed");
                    print!("{report}");
                    return Ok(1);
                }
                other => other?,
            };
            let opts = SuiteOptions { tol, tau: num.tau, order: num.order };
            let report = run_checks(&ds, &source, &checks, &opts);
            if json {
                println!("{}", report.to_json());
            } else {
                print!("{report}");
            }
            return Ok(report.exit_code() as u8);
        }
        Command::Verlinde { source, tol } => {
            let ds = load(&source)?;
            let cfg = ToleranceConfig { eps: tol, ..ToleranceConfig::default() };
            let v = verlinde_fusion(&ds.s, ds.data.duals(), ds.data.unit(), &cfg)?;
            for ((a, b, c), x) in v.iter() {
                if x.norm() > tol {
                    let (na, nb, nc) = (ds.data.name(a), ds.data.name(b), ds.data.name(c));
                    println!("N {na} {nb} {nc} = {:.12} {:+.1e}i", x.re, x.im);
                }
            }
            println!("integrality defect {:.3e}", v.integrality_defect());
        }
        Command::Chars { source, label: which, order, tau } => {
            let ds = load(&source)?;
            let gen = ds.chars.ok_or_else(|| Failure { code: 2, msg: format!("{}: no character data", ds.name) })?;
            let targets = match which {
                Some(n) => vec![label(&ds, &n)?],
                None => ds.data.labels().collect(),
            };
            let order = order.unwrap_or(if tau.is_some() { DEFAULT_ORDER } else { 12 });
            for a in targets {
                let chi = character_series(&gen, a, order)?;
                match tau {
                    Some(t) => {
                        let z = eval_character(&chi, t)?;
                        println!("{:<6} {:.15e} {:+.15e}i", ds.data.name(a), z.re, z.im);
                    }
                    None => {
                        let coeffs: Vec<String> = chi.coeffs.iter().map(ToString::to_string).collect();
                        println!("{:<6} q^({}) [{}]", ds.data.name(a), chi.alpha, coeffs.join(", "));
                    }
                }
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("mtc: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
