//! The `jdm` command line.
//!
//! Exit codes: 0 on success, 1 for infeasible instances, invalid input or
//! usage errors, 2 when `realize-connected` answers with a certificate.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use jdm_core::io::{
    emit_certificate, emit_graph, emit_instance, parse_graph, parse_instance, GraphFormat,
    ParsedInstance, FORMAT_ENV,
};
use jdm_core::sampler::{run_chains, Histogram};
use jdm_core::star::{star_realization_defect, star_violations};
use jdm_core::summary::realization_defect;
use jdm_core::{
    balanced_realize, enumerate_omega, extract_jdm, feasibility_violations, realize_connected,
    realize_star, regroup_by_degree, simple_realize, switch_path, ConnectedOutcome, Error,
    JdmInstance, LabeledGraph, SwitchMove, Violation,
};

#[derive(Debug, Parser)]
#[command(name = "jdm", version, about = "Graphs with a prescribed joint-degree matrix")]
struct Cli {
    /// Seed for randomized commands.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Graph output format: edges, json or dot.
    #[arg(long, global = true, env = FORMAT_ENV)]
    format: Option<String>,

    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Method {
    Simple,
    Balanced,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Classes {
    /// Keep the classes written in the graph file.
    Labels,
    /// One class per distinct degree.
    Degree,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Report whether an instance passes the feasibility conditions.
    Check { instance: PathBuf },
    /// Build a realization.
    Realize {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Balanced)]
        method: Method,
    },
    /// Build a connected realization, or a certificate that none exists.
    RealizeConnected { instance: PathBuf },
    /// Realize an instance whose matrix may contain "*" entries.
    RealizeStar { instance: PathBuf },
    /// Run the switch chain and print the final graph.
    Sample {
        /// Instance to sample; derived from the start graph when omitted.
        #[arg(long)]
        instance: Option<PathBuf>,
        /// Start graph; a balanced realization when omitted.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        steps: u64,
        /// Record visit counts in the metadata.
        #[arg(long)]
        histogram: bool,
        /// Independent chains seeded `seed, seed + 1, ...`.
        #[arg(long, default_value_t = 1)]
        chains: u64,
        /// Where to write the metadata record; stderr when omitted.
        #[arg(long)]
        metadata: Option<PathBuf>,
    },
    /// Print legal switches leading from one realization to another.
    SwitchPath {
        #[arg(long)]
        from: PathBuf,
        #[arg(long)]
        to: PathBuf,
    },
    /// List every realization of a small instance.
    Enumerate {
        instance: PathBuf,
        #[arg(long, default_value_t = jdm_core::sampler::DEFAULT_OMEGA_CAP)]
        cap: usize,
    },
    /// Check that a graph realizes an instance.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        instance: PathBuf,
    },
    /// Print the instance a graph realizes.
    Extract {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = Classes::Labels)]
        classes: Classes,
    },
}

/// A failed command: its message and exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

/// What a command produced: main output, notes for stderr, exit code.
struct Outcome {
    text: String,
    notes: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            notes: String::new(),
            code: 0,
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn with_file<T>(path: &Path, parse: impl FnOnce(&str) -> Result<T, Error>) -> Result<T, Failure> {
    parse(&read(path)?).map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<ParsedInstance, Failure> {
    with_file(path, parse_instance)
}

fn load_plain(path: &Path) -> Result<JdmInstance, Failure> {
    load_instance(path)?
        .into_plain()
        .map_err(|e| fail(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<LabeledGraph, Failure> {
    with_file(path, parse_graph)
}

fn violation_report(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(|v| format!("violated: {v}\n"))
        .collect()
}

fn infeasible(violations: &[Violation]) -> Failure {
    Failure {
        code: 1,
        message: format!("infeasible instance\n{}", violation_report(violations).trim_end()),
    }
}

fn labeled_edge(g: &LabeledGraph, (a, b): (usize, usize)) -> Value {
    json!([g.layout().label(a), g.layout().label(b)])
}

fn move_value(g: &LabeledGraph, mv: &SwitchMove) -> Value {
    let [r1, r2] = mv.removed();
    let [a1, a2] = mv.added();
    let l = g.layout();
    json!({
        "switch": [l.label(mv.u), l.label(mv.v), l.label(mv.u2), l.label(mv.v2)],
        "remove": [labeled_edge(g, r1), labeled_edge(g, r2)],
        "add": [labeled_edge(g, a1), labeled_edge(g, a2)],
    })
}

fn histogram_value(g: &LabeledGraph, h: &Histogram) -> Value {
    let entries: Vec<Value> = h
        .counts
        .iter()
        .map(|(edges, &count)| {
            let edges: Vec<Value> = edges.iter().map(|&e| labeled_edge(g, e)).collect();
            json!({ "edges": edges, "count": count })
        })
        .collect();
    json!({ "total": h.total(), "states": entries.len(), "counts": entries })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let format = match &cli.format {
        Some(f) => f.parse::<GraphFormat>()?,
        None => GraphFormat::default(),
    };
    match &cli.command {
        Command::Check { instance } => {
            let parsed = load_instance(instance)?;
            let violations = match &parsed {
                ParsedInstance::Plain(i) => feasibility_violations(i),
                ParsedInstance::Star(s) => star_violations(s),
            };
            if violations.is_empty() {
                Ok(Outcome::ok("feasible\n".into()))
            } else {
                Ok(Outcome {
                    text: format!("infeasible\n{}", violation_report(&violations)),
                    notes: String::new(),
                    code: 1,
                })
            }
        }
        Command::Realize { instance, method } => {
            let inst = load_plain(instance)?;
            let violations = feasibility_violations(&inst);
            if !violations.is_empty() {
                return Err(infeasible(&violations));
            }
            let g = match method {
                Method::Simple => simple_realize(&inst)?,
                Method::Balanced => balanced_realize(&inst, None)?,
            };
            Ok(Outcome::ok(emit_graph(&g, format)))
        }
        Command::RealizeConnected { instance } => {
            let inst = load_plain(instance)?;
            let violations = feasibility_violations(&inst);
            if !violations.is_empty() {
                return Err(infeasible(&violations));
            }
            match realize_connected(&inst)? {
                ConnectedOutcome::Connected(g) => Ok(Outcome::ok(emit_graph(&g, format))),
                ConnectedOutcome::NoConnectedRealization(cert) => Ok(Outcome {
                    text: emit_certificate(&inst, &cert)?,
                    notes: "no connected realization exists; certificate written\n".into(),
                    code: 2,
                }),
            }
        }
        Command::RealizeStar { instance } => {
            let star = load_instance(instance)?.to_star();
            let violations = star_violations(&star);
            if !violations.is_empty() {
                return Err(infeasible(&violations));
            }
            Ok(Outcome::ok(emit_graph(&realize_star(&star)?, format)))
        }
        Command::Sample {
            instance,
            graph,
            steps,
            histogram,
            chains,
            metadata,
        } => {
            let inst = match instance {
                Some(path) => Some(load_plain(path)?),
                None => None,
            };
            let start = match (graph, &inst) {
                (Some(path), _) => load_graph(path)?,
                (None, Some(inst)) => balanced_realize(inst, None)?,
                (None, None) => return Err(fail("sample needs --instance or --graph")),
            };
            let inst = match inst {
                Some(inst) => inst,
                None => extract_jdm(&start).to_instance().ok_or_else(|| {
                    fail("the start graph is not class-regular; pass --instance")
                })?,
            };
            if *chains == 0 {
                return Err(fail("--chains must be at least 1"));
            }
            let seeds: Vec<u64> = (0..*chains).map(|i| cli.seed.wrapping_add(i)).collect();
            let (runs, merged) = run_chains(&inst, &start, *steps, &seeds, *histogram)?;
            let mut record = json!({
                "chains": runs.iter().map(|r| serde_json::to_value(&r.metadata).expect("metadata serializes")).collect::<Vec<_>>(),
            });
            if let Some(h) = &merged {
                record["histogram"] = histogram_value(&start, h);
            }
            let record = pretty(&record);
            let notes = match metadata {
                Some(path) => {
                    fs::write(path, &record).map_err(|e| fail(format!("{}: {e}", path.display())))?;
                    String::new()
                }
                None => record,
            };
            Ok(Outcome {
                text: emit_graph(&runs[0].graph, format),
                notes,
                code: 0,
            })
        }
        Command::SwitchPath { from, to } => {
            let g0 = load_graph(from)?;
            let g1 = load_graph(to)?;
            if extract_jdm(&g0) != extract_jdm(&g1) {
                return Err(fail("the two graphs realize different instances"));
            }
            let path = switch_path(&g0, &g1)?;
            let moves: Vec<Value> = path.moves.iter().map(|m| move_value(&g0, m)).collect();
            Ok(Outcome::ok(pretty(&json!({
                "length": path.moves.len(),
                "budget": path.budget,
                "initial_difference": path.initial_difference,
                "moves": moves,
            }))))
        }
        Command::Enumerate { instance, cap } => {
            let inst = load_plain(instance)?;
            let all = enumerate_omega(&inst, *cap)?;
            let text = match format {
                GraphFormat::Json => {
                    let graphs: Vec<Value> = all
                        .iter()
                        .map(|g| serde_json::from_str(&emit_graph(g, GraphFormat::Json)).expect("emitted JSON parses"))
                        .collect();
                    pretty(&json!({ "count": all.len(), "graphs": graphs }))
                }
                _ => {
                    let mut s = format!("# realizations {}\n", all.len());
                    for g in &all {
                        s.push('\n');
                        s.push_str(&emit_graph(g, format));
                    }
                    s
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Verify { graph, instance } => {
            let g = load_graph(graph)?;
            let defect = match load_instance(instance)? {
                ParsedInstance::Plain(inst) => realization_defect(&g, &inst)?,
                ParsedInstance::Star(star) => star_realization_defect(&g, &star)?,
            };
            Ok(match defect {
                None => Outcome::ok("valid\n".into()),
                Some(d) => Outcome {
                    text: format!("invalid: {d}\n"),
                    notes: String::new(),
                    code: 1,
                },
            })
        }
        Command::Extract { graph, classes } => {
            let g = load_graph(graph)?;
            let g = match classes {
                Classes::Labels => g,
                Classes::Degree => regroup_by_degree(&g),
            };
            let summary = extract_jdm(&g);
            let inst = summary.to_instance().ok_or_else(|| {
                let uneven: Vec<&str> = (0..g.layout().class_count())
                    .filter(|&c| summary.class_degrees[c].first() != summary.class_degrees[c].last())
                    .map(|c| g.layout().name(c))
                    .collect();
                fail(format!(
                    "classes {} have vertices of different degrees; try --classes degree",
                    uneven.join(", ")
                ))
            })?;
            Ok(Outcome::ok(emit_instance(&ParsedInstance::Plain(inst))))
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Main output goes to `out` unless `--output` names a file.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    0
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    1
                }
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => {
            let written = match &cli.output {
                Some(path) => fs::write(path, &outcome.text)
                    .map_err(|e| format!("{}: {e}", path.display())),
                None => out.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return 1;
            }
            let _ = err.write_all(outcome.notes.as_bytes());
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book {}
