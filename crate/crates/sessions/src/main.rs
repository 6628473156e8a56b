use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rand::prelude::*;
use rand::rngs::StdRng;

use sessions::calculus::{normalize_session, step_session};
use sessions::checker::{check_session, Ctx};
use sessions::dsl::{self, parse_model, DslError, Model};
use sessions::harness::{soundness_property, subject_reduction_property};
use sessions::report::Report;
use sessions::safety::check_safe_session;
use sessions::types::{participants, project, safe_type};
use sessions::{GlobalType, Participant, Session};

#[derive(Parser)]
#[command(name = "sessions", version, about = "Topic-aware secure multiparty sessions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Type-check a session against a global type.
    Check {
        file: PathBuf,
        /// Session name, when the model declares several.
        #[arg(long)]
        session: Option<String>,
        /// Global type name, when the model declares several.
        #[arg(long)]
        global: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Project a global type onto one or all participants.
    Project {
        file: PathBuf,
        participant: Option<String>,
        #[arg(long)]
        global: Option<String>,
        /// Append a safety verdict per printed type.
        #[arg(long)]
        check_safe: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Exhaustively check all traces up to a depth for AC/LF violations.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long)]
        session: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Random walk through the session transition system.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        session: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Soundness harness: typable implies safe, up to a depth.
    Soundness {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        depth: usize,
        #[arg(long)]
        session: Option<String>,
        #[arg(long)]
        global: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Subject-reduction harness: typability preserved along all runs.
    Sr {
        file: PathBuf,
        #[arg(long, default_value_t = 5)]
        steps: usize,
        #[arg(long)]
        session: Option<String>,
        #[arg(long)]
        global: Option<String>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

struct Style {
    color: bool,
}

impl Style {
    fn detect() -> Self {
        let color = match std::env::var("SESSIONS_COLOR").ok().as_deref() {
            Some("0") => false,
            Some("1") => true,
            _ => std::io::stdout().is_terminal(),
        };
        Style { color }
    }

    fn good(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[32m{s}\x1b[0m")
        } else {
            s.to_owned()
        }
    }

    fn bad(&self, s: &str) -> String {
        if self.color {
            format!("\x1b[31m{s}\x1b[0m")
        } else {
            s.to_owned()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let style = Style::detect();
    match run(cli, &style) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("{}", style.bad(&format!("error: {msg}")));
            ExitCode::from(2)
        }
    }
}

fn load(file: &PathBuf) -> Result<(String, Model), String> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| format!("cannot read {}: {e}", file.display()))?;
    let model = parse_model(&text).map_err(|e| e.to_string())?;
    Ok((text, model))
}

fn pick_session<'m>(model: &'m Model, name: &Option<String>) -> Result<&'m Session, String> {
    match name {
        Some(n) => model
            .sessions
            .get(n)
            .ok_or_else(|| DslError::UnknownIdentifier(n.clone()).to_string()),
        None => model.only_session().map(|(_, s)| s).map_err(|e| e.to_string()),
    }
}

fn pick_global<'m>(model: &'m Model, name: &Option<String>) -> Result<&'m GlobalType, String> {
    match name {
        Some(n) => model
            .globals
            .get(n)
            .ok_or_else(|| DslError::UnknownIdentifier(n.clone()).to_string()),
        None => model.only_global().map(|(_, g)| g).map_err(|e| e.to_string()),
    }
}

fn ctx(model: &Model) -> Ctx<'_> {
    Ctx {
        lattice: &model.lattice,
        universe: &model.universe,
        policy: &model.policy,
    }
}

fn emit(report: &Report, json: &Option<PathBuf>) -> Result<(), String> {
    if let Some(path) = json {
        // Written in one shot so a partial report never lands on disk.
        std::fs::write(path, report.to_json() + "\n")
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
    }
    Ok(())
}

fn run(cli: Cli, style: &Style) -> Result<ExitCode, String> {
    match cli.cmd {
        Cmd::Check {
            file,
            session,
            global,
            json,
        } => {
            let (text, model) = load(&file)?;
            let n = pick_session(&model, &session)?;
            let g = pick_global(&model, &global)?;
            let result = check_session(n, g, ctx(&model));
            let mut report = Report::new("check", &text, if result.ok() { "ok" } else { "fail" });
            for p in &result.participants {
                match &p.error {
                    None => println!("{}: {}", p.participant, style.good("ok")),
                    Some(e) => {
                        println!("{}: {}", p.participant, style.bad(&e.to_string()));
                        report.push_finding("type-error", format!("{}: {e}", p.participant));
                    }
                }
            }
            if let Some(e) = &result.global_error {
                println!("{}", style.bad(&e.to_string()));
                report.push_finding("type-error", e.to_string());
            }
            emit(&report, &json)?;
            Ok(if result.ok() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Project {
            file,
            participant,
            global,
            check_safe,
            json,
        } => {
            let (text, model) = load(&file)?;
            let g = pick_global(&model, &global)?;
            let targets: Vec<Participant> = match &participant {
                Some(p) => vec![Participant::from(p.as_str())],
                None => participants(g).into_iter().collect(),
            };
            let single = participant.is_some();
            let mut ok = true;
            let mut report = Report::new("project", &text, "ok");
            for p in &targets {
                match project(g, p) {
                    Ok(t) => {
                        let printed = dsl::print_type(&t);
                        if single {
                            println!("{printed}");
                        } else {
                            println!("{p}: {printed}");
                        }
                        if check_safe {
                            let safe = safe_type(&t, &model.policy, &model.universe, &model.lattice);
                            println!("{}", if safe { style.good("safe") } else { style.bad("unsafe") });
                            if !safe {
                                ok = false;
                                report.push_finding("unsafe-type", format!("{p}: {printed}"));
                            }
                        }
                    }
                    Err(e) => {
                        println!("{p}: {}", style.bad(&e.to_string()));
                        ok = false;
                        report.push_finding("not-projectable", format!("{p}: {e}"));
                    }
                }
            }
            report.verdict = if ok { "ok".into() } else { "fail".into() };
            emit(&report, &json)?;
            Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Oracle {
            file,
            depth,
            session,
            json,
        } => {
            let (text, model) = load(&file)?;
            let n = pick_session(&model, &session)?;
            let result =
                check_safe_session(n, depth, &model.policy, &model.universe, &model.lattice)
                    .map_err(|e| e.to_string())?;
            let mut report = Report::new(
                "oracle",
                &text,
                if result.safe() { "ok" } else { "fail" },
            );
            if result.safe() {
                println!(
                    "{}: 0 violations up to depth {depth}",
                    style.good("safe")
                );
            } else {
                for v in &result.violations {
                    println!(
                        "{}: {} [trace: {}]",
                        style.bad("violation"),
                        v.explanation,
                        dsl::print_trace(&v.trace)
                    );
                    report.push_violation(v);
                }
            }
            emit(&report, &json)?;
            Ok(if result.safe() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Simulate {
            file,
            depth,
            seed,
            session,
            json,
        } => {
            let (text, model) = load(&file)?;
            let n = pick_session(&model, &session)?;
            let mut rng = StdRng::seed_from_u64(seed);
            let mut node = normalize_session(n);
            let mut trace = Vec::new();
            for _ in 0..depth {
                let steps = step_session(&node, &model.lattice).map_err(|e| e.to_string())?;
                let Some((action, next)) = steps.into_iter().choose(&mut rng) else {
                    break;
                };
                println!("{}", dsl::print_action(&action));
                trace.push(action);
                node = next;
            }
            let mut report = Report::new("simulate", &text, "ok");
            report.findings.push(sessions::report::Finding {
                kind: "trace".into(),
                indices: (0..trace.len()).collect(),
                trace,
                detail: format!("random walk, depth {depth}, seed {seed}"),
            });
            emit(&report, &json)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Soundness {
            file,
            depth,
            session,
            global,
            json,
        } => {
            let (text, model) = load(&file)?;
            let n = pick_session(&model, &session)?;
            let g = pick_global(&model, &global)?;
            let r = soundness_property(n, g, ctx(&model), depth);
            print_property(style, &r);
            let mut report =
                Report::new("soundness", &text, if r.pass { "PASS" } else { "FAIL" });
            report.push_finding(
                if r.vacuous { "vacuous" } else { "result" },
                r.detail.clone(),
            );
            emit(&report, &json)?;
            Ok(if r.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Cmd::Sr {
            file,
            steps,
            session,
            global,
            json,
        } => {
            let (text, model) = load(&file)?;
            let n = pick_session(&model, &session)?;
            let g = pick_global(&model, &global)?;
            let r = subject_reduction_property(n, g, ctx(&model), steps);
            print_property(style, &r);
            let mut report = Report::new("sr", &text, if r.pass { "PASS" } else { "FAIL" });
            report.push_finding(
                if r.vacuous { "vacuous" } else { "result" },
                r.detail.clone(),
            );
            emit(&report, &json)?;
            Ok(if r.pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn print_property(style: &Style, r: &sessions::harness::PropertyReport) {
    let verdict = if r.pass {
        style.good("PASS")
    } else {
        style.bad("FAIL")
    };
    let suffix = if r.vacuous { " (vacuous)" } else { "" };
    println!("{verdict}{suffix}: {}", r.detail);
}
