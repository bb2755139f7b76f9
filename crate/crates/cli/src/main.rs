use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bipartid::algebra::{BiSeries, PochhammerSpec};
use bipartid::automata::{derive_transfer_system, language_series, Dfa};
use bipartid::cylindric::{cw_fixed_point, enumerate_cylindric, Profile};
use bipartid::holonomic::*;
use bipartid::partitions::{enumerate_2colored, gen_fun, Conditions};
use bipartid::{data, Error};
use bipartid_cli::emit::{self, built_dfa, Format, SystemJson, Target};
use bipartid_cli::{run_all, RunReport, Status, SuiteConfig, Witness};
use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;

#[derive(Parser)]
#[command(name = "bipartid", version, about = "Exact checks for 2-colored and cylindric partition identities")]
struct Cli {
    /// Accepted for scripted runs; no command draws random numbers.
    #[arg(long, global = true)]
    seed_free: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Source {
    Enumeration,
    Sum,
    Product,
    Automaton,
}

#[derive(Subcommand)]
enum Cmd {
    /// List 2-colored partitions satisfying a set of conditions.
    Enumerate {
        /// `bir`, `birp`, `none` or a list such as `D1,D3`.
        #[arg(long, default_value = "bir")]
        conditions: String,
        #[arg(long, default_value_t = 10)]
        max_size: u32,
        /// Print the number of partitions of each size instead.
        #[arg(long)]
        counts: bool,
        #[arg(long)]
        json: bool,
    },
    /// Generating series of a class, computed along one route.
    Series {
        /// `bir`, `birp` or `auxiliary`.
        #[arg(long, default_value = "bir")]
        class: String,
        #[arg(long, value_enum, default_value = "enumeration")]
        source: Source,
        #[arg(long, default_value_t = 40)]
        qorder: usize,
        /// Specialize to x = 1.
        #[arg(long)]
        at_x_one: bool,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// The minimal automaton for the forbidden words.
    Dfa {
        /// Print the stored printed table rather than the built automaton.
        #[arg(long)]
        golden: bool,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Transfer system of the automaton.
    System {
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Cylindric partition series for a level-3 profile.
    Cylindric {
        #[arg(long, default_value = "3,0,0")]
        profile: String,
        #[arg(long, default_value_t = 40)]
        qorder: usize,
        /// Count partitions directly (the F series) instead of running the recursion.
        #[arg(long)]
        enumerate: bool,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Check a telescoping certificate.
    Certify {
        #[arg(long, requires = "cert", conflicts_with = "builtin")]
        term: Option<PathBuf>,
        #[arg(long, requires = "term")]
        cert: Option<PathBuf>,
        /// One of the shipped transcriptions: g111, g300, bir, birp.
        #[arg(long)]
        builtin: Option<String>,
        /// q-window for regeneration when the shipped data fails.
        #[arg(long, default_value_t = 1)]
        window: i32,
    },
    /// Search for a certificate of the given order.
    Celine {
        #[arg(long)]
        term: PathBuf,
        #[arg(long)]
        order: usize,
        #[arg(long)]
        deg: u32,
        #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
        qmin: i32,
        #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
        qmax: i32,
        /// Total degree in the shift letters.
        #[arg(long, default_value_t = 1)]
        kdeg: u32,
    },
    /// Scalar operator for one component of a first-order system.
    Uncouple {
        #[arg(long)]
        system: PathBuf,
        #[arg(long)]
        component: usize,
    },
    /// Run the whole verification suite.
    VerifyAll {
        #[arg(long, default_value_t = 30)]
        qorder: usize,
        #[arg(long, default_value_t = 18)]
        max_size: u32,
        /// Include wall times in the output.
        #[arg(long)]
        timings: bool,
        /// One line per task instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// Write a series, table or operator in a stable format.
    Emit {
        /// bir, birp, partitions:<conds>, cylindric[:<profile>], dfa, system,
        /// operator:<name>, certificate:<name>, term:<name>
        target: String,
        #[arg(long, default_value = "json")]
        format: String,
        #[arg(long, default_value_t = 40)]
        qorder: usize,
        #[arg(long, default_value = "3,0,0")]
        profile: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A command's printed result plus whether every check in it held.
struct Outcome {
    text: String,
    ok: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, ok: true }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(o) => {
            print!("{}", o.text);
            if o.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("bipartid: {e}");
            ExitCode::from(2)
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn bi_output(s: &BiSeries, at_x_one: bool, format: &str) -> Result<String, Error> {
    let format: Format = format.parse()?;
    if !at_x_one {
        return emit::series(s, format);
    }
    let q = s.at_x_one();
    match format {
        Format::Json => emit::json(&q),
        Format::Csv => Ok(emit::qseries_csv(&q)),
        Format::Dot => Err(Error::Config("series have no dot rendering".into())),
    }
}

fn class(name: &str) -> Result<Conditions, Error> {
    match name {
        "bir" => Ok(Conditions::BIR),
        "birp" => Ok(Conditions::BIRP),
        _ => Err(Error::Config(format!("class {name:?} is only available as bir or birp here"))),
    }
}

fn run(cmd: Cmd) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Enumerate { conditions, max_size, counts, json } => {
            let cond: Conditions = conditions.parse()?;
            let parts = enumerate_2colored(max_size, cond);
            let text = if counts {
                let mut by_size = vec![0u64; max_size as usize + 1];
                for p in &parts {
                    by_size[p.size() as usize] += 1;
                }
                if json {
                    emit::json(&by_size)?
                } else {
                    by_size.iter().enumerate().map(|(n, c)| format!("{n} {c}\n")).collect()
                }
            } else if json {
                emit::json(&parts)?
            } else {
                parts.iter().map(|p| format!("{p}\n")).collect()
            };
            Ok(Outcome::ok(text))
        }
        Cmd::Series { class: name, source, qorder, at_x_one, format } => {
            if qorder == 0 {
                return Err(Error::Domain("q-order must be at least 1".into()));
            }
            let s = match (source, name.as_str()) {
                (Source::Product, _) => {
                    let spec = match name.as_str() {
                        "bir" => PochhammerSpec::bir(),
                        "birp" => PochhammerSpec::birp(),
                        "auxiliary" => PochhammerSpec::auxiliary(),
                        _ => return Err(Error::Config(format!("unknown class {name:?}"))),
                    };
                    // products are only known at x = 1
                    let q = spec.expand(qorder)?;
                    let mut b = BiSeries::zero(qorder);
                    b.set_slice(0, q);
                    return bi_output(&b, true, &format).map(Outcome::ok);
                }
                (Source::Sum, "bir") => evaluate_ag_sum(&bir_sum(), qorder)?,
                (Source::Sum, "birp") => evaluate_ag_sum(&birp_sum(), qorder)?,
                (Source::Sum, "auxiliary") => evaluate_ag_sum(&auxiliary_sum(), qorder)?,
                (Source::Enumeration, c) => gen_fun(&enumerate_2colored(qorder as u32 - 1, class(c)?), qorder)?,
                (Source::Automaton, c) => {
                    let state = if class(c)? == Conditions::BIR { "q0" } else { "q2" };
                    let dfa = built_dfa()?;
                    let iso = dfa
                        .isomorphism(&data::golden_dfa()?)
                        .ok_or_else(|| Error::Structural("built automaton differs from the printed table".into()))?;
                    let s = (0..dfa.num_states()).find(|&s| Dfa::state_name(iso[s]) == state).expect("state of a six-state table");
                    language_series(&derive_transfer_system(&dfa), s, qorder)?
                }
                _ => return Err(Error::Config(format!("unknown class {name:?}"))),
            };
            bi_output(&s, at_x_one, &format).map(Outcome::ok)
        }
        Cmd::Dfa { golden, format } => {
            let d = if golden { data::golden_dfa()? } else { built_dfa()? };
            let text = match format.parse()? {
                Format::Json => emit::json(&d.to_json())?,
                Format::Dot => d.to_dot(),
                Format::Csv => emit::render(&Target::Dfa, Format::Csv, 1)?,
            };
            Ok(Outcome::ok(text))
        }
        Cmd::System { format } => emit::render(&Target::System, format.parse()?, 1).map(Outcome::ok),
        Cmd::Cylindric { profile, qorder, enumerate, format } => {
            if qorder == 0 {
                return Err(Error::Domain("q-order must be at least 1".into()));
            }
            let p: Profile = profile.parse()?;
            let s = if enumerate { enumerate_cylindric(&p, qorder as u32 - 1) } else { cw_fixed_point(&p, qorder)? };
            emit::series(&s, format.parse()?).map(Outcome::ok)
        }
        Cmd::Certify { term, cert, builtin, window } => certify(term, cert, builtin, window),
        Cmd::Celine { term, order, deg, qmin, qmax, kdeg } => {
            let term: HypTerm = read_json(&term)?;
            term.validate()?;
            let template = CelineTemplate::boxed(term.vars.len(), order, deg, (qmin, qmax), kdeg);
            match celine_solve(&term, &template)? {
                Some(c) => emit::json(&c.to_json()).map(Outcome::ok),
                None => {
                    eprintln!("no certificate among {} unknowns", template.len());
                    Ok(Outcome { text: String::new(), ok: false })
                }
            }
        }
        Cmd::Uncouple { system, component } => {
            let s: SystemJson = read_json(&system)?;
            let op = uncouple_polynomial_system(&s.polynomial_matrix()?, s.unit, component)?;
            emit::json(&op).map(Outcome::ok)
        }
        Cmd::VerifyAll { qorder, max_size, timings, text } => {
            let mut reports = run_all(SuiteConfig::new(qorder, max_size)?);
            if timings {
                for r in &mut reports {
                    r.wall_ms = Some(r.elapsed.as_millis() as u64);
                }
            }
            let ok = reports.iter().all(RunReport::passed);
            let out = if text { text_reports(&reports, timings) } else { emit::json(&reports)? };
            Ok(Outcome { text: out, ok })
        }
        Cmd::Emit { target, format, qorder, profile, out } => {
            let target = if target == "cylindric" { format!("cylindric:{profile}") } else { target };
            let rendered = emit::render(&Target::parse(&target)?, format.parse()?, qorder)?;
            match out {
                Some(path) => {
                    std::fs::write(&path, rendered).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                    Ok(Outcome::ok(String::new()))
                }
                None => Ok(Outcome::ok(rendered)),
            }
        }
    }
}

fn text_reports(reports: &[RunReport], timings: bool) -> String {
    let mut out = String::new();
    for r in reports {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        out.push_str(&format!("{status} [{:>2}] {}", r.criterion, r.task));
        if timings {
            out.push_str(&format!(" ({} ms)", r.elapsed.as_millis()));
        }
        if let Some(w) = &r.witness {
            out.push_str(&format!(": {}", w.detail));
            if let (Some(e), Some(a)) = (&w.expected, &w.actual) {
                out.push_str(&format!(" (expected {e}, got {a})"));
            }
        }
        out.push('\n');
    }
    out
}

fn certify(term: Option<PathBuf>, cert: Option<PathBuf>, builtin: Option<String>, window: i32) -> Result<Outcome, Error> {
    let start = Instant::now();
    let mut inputs = BTreeMap::new();
    let (status, witness) = match (term, cert, builtin) {
        (Some(t), Some(c), None) => {
            inputs.insert("term".to_string(), t.display().to_string());
            inputs.insert("cert".to_string(), c.display().to_string());
            let term: HypTerm = read_json(&t)?;
            term.validate()?;
            let cert = CertificateSet::from_json(&read_json(&c)?)?;
            let v = verify_certificate(&term, &cert)?;
            if v.holds {
                (Status::Pass, None)
            } else {
                (Status::Fail, Some(Witness::note(format!("residual {}", v.residual))))
            }
        }
        (None, None, Some(name)) => {
            inputs.insert("builtin".to_string(), name.clone());
            inputs.insert("window".to_string(), window.to_string());
            let outcome = certify_with_fallback(&data::certificate_term(&name)?, &data::certificate_source(&name)?, window)?;
            let how = match &outcome {
                CertifyOutcome::Verbatim(_) => "verbatim".to_string(),
                CertifyOutcome::Emended(_) => "emended".to_string(),
                CertifyOutcome::Regenerated { changed, .. } => format!("regenerated ({} families changed)", changed.len()),
                CertifyOutcome::Failed => "failed".to_string(),
            };
            inputs.insert("outcome".to_string(), how);
            match outcome {
                CertifyOutcome::Failed => (Status::Fail, Some(Witness::note("no emendation or regenerated certificate verifies"))),
                _ => (Status::Pass, None),
            }
        }
        _ => return Err(Error::Config("give either --term and --cert, or --builtin".into())),
    };
    let report = RunReport {
        task: "certify".to_string(),
        criterion: 9,
        inputs,
        status,
        witness,
        wall_ms: None,
        elapsed: start.elapsed(),
    };
    let ok = report.passed();
    Ok(Outcome { text: emit::json(&report)?, ok })
}
