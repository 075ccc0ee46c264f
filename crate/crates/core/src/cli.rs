//! The `causal-ground` command line.
//!
//! Exit codes: 0 when the check passes, 1 when it finds a counterexample,
//! 2 on any error (bad input, schema violation, guardrail).

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::abstraction::{
    check_naturality_capped, check_surjectivity_assumptions, naturality_closure_check,
    DEFAULT_FAILURE_CAP,
};
use crate::checkers::{
    check_commute, check_determination, check_effectiveness, check_invariance, check_overwrite,
    check_surgical_with, discover_mechanisms_with, DiscoverOptions, LawResult, SurgicalOptions,
};
use crate::domino::{build_bounded_model_with, AbstractionKind};
use crate::error::{Error, Result};
use crate::factored::VarSet;
use crate::io;
use crate::limits::Limits;
use crate::map::TotalMap;
use crate::model::{ActionModel, ActionWord};
use crate::report::{Report, Verdict};
use crate::scm::{encode_scm_with, random_scm, verify_scm_laws, LawKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "causal-ground",
    version,
    about = "Exhaustive checks on finite action models, encoded SCMs and domino worlds",
    after_help = "Words are comma-separated action labels; the rightmost label acts first.\n\
                  Exit status: 0 pass, 1 counterexample, 2 error.\n\
                  CAUSAL_GROUND_MAX_TABLE caps the size of any enumerated table (default 1000000)."
)]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Record wall-clock time in the report.
    #[arg(long, global = true)]
    pub timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Is outcome_J a function of outcome_I after the word?
    CheckDetermination {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value = "")]
        vars_i: String,
        #[arg(long)]
        vars_j: String,
    },
    /// Does the word fix outcome_J to a constant in the context?
    CheckEffectiveness {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        word: String,
        #[arg(long)]
        vars_j: String,
        #[arg(long, default_value = "")]
        context: String,
    },
    /// Does the determination after --word survive --after?
    CheckInvariance {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
        #[arg(long, default_value = "")]
        vars_i: String,
        #[arg(long)]
        vars_j: String,
        #[arg(long)]
        after: String,
        /// JSON object from I-tuple labels to J values; computed when absent.
        #[arg(long)]
        witness: Option<PathBuf>,
    },
    /// Do two generators commute?
    CheckCommute {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Does a after b equal a?
    CheckOverwrite {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Is the action a surgical intervention on the listed mechanisms?
    CheckSurgical {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        action: String,
        #[arg(long)]
        mechanisms: PathBuf,
        #[arg(long, default_value = "")]
        context: String,
        #[arg(long)]
        max_parents: Option<usize>,
    },
    /// Check the naturality squares of a morphism.
    CheckNaturality {
        #[arg(long)]
        morphism: PathBuf,
        /// Failures reported per square kind.
        #[arg(long, default_value_t = DEFAULT_FAILURE_CAP)]
        cap: usize,
        /// Also check every word up to this length.
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Report which abstract outcomes the micro process can reach.
    Image {
        #[arg(long)]
        morphism: PathBuf,
    },
    /// List minimal mechanisms holding in a context.
    Discover {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, default_value = "")]
        context: String,
        #[arg(long, default_value_t = 2)]
        max_parents: usize,
        /// Longest probe word used for invariance.
        #[arg(long, default_value_t = 1)]
        probe_depth: usize,
        /// Write a mechanisms file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Encode an SCM as an action model.
    EncodeScm {
        #[arg(long)]
        scm: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the five intervention laws on an encoded SCM.
    VerifyScmLaws {
        #[arg(long)]
        scm: PathBuf,
        /// Model to check; the SCM's own encoding when absent.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Generate a seeded random acyclic SCM.
    RandomScm {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        n_endo: usize,
        #[arg(long, default_value_t = 2)]
        exo_values: usize,
        #[arg(long, default_value_t = 2)]
        domain_size: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a domino scenario after a word.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value = "")]
        word: String,
    },
    /// Enumerate a scenario's bounded family and write the micro model,
    /// abstract model and morphism.
    BuildModel {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Abstract away barriers as well as tags.
        #[arg(long)]
        forget_barriers: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::CheckDetermination { .. } => "check-determination",
            Command::CheckEffectiveness { .. } => "check-effectiveness",
            Command::CheckInvariance { .. } => "check-invariance",
            Command::CheckCommute { .. } => "check-commute",
            Command::CheckOverwrite { .. } => "check-overwrite",
            Command::CheckSurgical { .. } => "check-surgical",
            Command::CheckNaturality { .. } => "check-naturality",
            Command::Image { .. } => "image",
            Command::Discover { .. } => "discover",
            Command::EncodeScm { .. } => "encode-scm",
            Command::VerifyScmLaws { .. } => "verify-scm-laws",
            Command::RandomScm { .. } => "random-scm",
            Command::Simulate { .. } => "simulate",
            Command::BuildModel { .. } => "build-model",
        }
    }
}

fn vars(model: &ActionModel, list: &str) -> Result<VarSet> {
    let ids: Vec<&str> = list.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    model.var_set(&ids)
}

fn map_json(f: &TotalMap) -> Value {
    Value::Object(
        f.entries()
            .map(|(k, v)| (k.to_string(), Value::String(v.to_string())))
            .collect::<Map<_, _>>(),
    )
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn law_report(check: &str, model: &Path, a: &str, b: &str, r: LawResult) -> Report {
    let mut rep = Report::new(check, Verdict::from_holds(r.holds))
        .input("model", path_str(model))
        .input("a", a)
        .input("b", b);
    if let Some(cx) = r.counterexample {
        rep = rep.counterexample(cx);
    }
    rep
}

/// Run one subcommand and build its report.
pub fn run(cmd: &Command, limits: &Limits) -> Result<Report> {
    let name = cmd.name();
    match cmd {
        Command::CheckDetermination {
            model,
            word,
            vars_i,
            vars_j,
        } => {
            let m = io::load_model(model, limits)?;
            let w = ActionWord::parse(word);
            let (i, j) = (vars(&m, vars_i)?, vars(&m, vars_j)?);
            let d = check_determination(&m, &w, &i, &j)?;
            let mut rep = Report::new(name, Verdict::from_holds(d.holds))
                .input("model", path_str(model))
                .input("word", &w)
                .input("vars_i", m.outcomes().var_ids(&i))
                .input("vars_j", m.outcomes().var_ids(&j));
            if let Some(f) = &d.witness {
                rep = rep.witness(map_json(f)).details(json!({"unique": d.unique}));
            }
            if let Some(cx) = d.counterexample {
                rep = rep.counterexample(cx);
            }
            Ok(rep)
        }
        Command::CheckEffectiveness {
            model,
            word,
            vars_j,
            context,
        } => {
            let m = io::load_model(model, limits)?;
            let (w, ctx) = (ActionWord::parse(word), ActionWord::parse(context));
            let j = vars(&m, vars_j)?;
            let r = check_effectiveness(&m, &w, &j, &ctx)?;
            let mut rep = Report::new(name, Verdict::from_holds(r.effective))
                .input("model", path_str(model))
                .input("word", &w)
                .input("vars_j", m.outcomes().var_ids(&j))
                .input("context", &ctx);
            if let Some(v) = r.value {
                rep = rep.witness(json!({"value": v}));
            }
            if let Some(cx) = r.counterexample {
                rep = rep.counterexample(cx);
            }
            Ok(rep)
        }
        Command::CheckInvariance {
            model,
            word,
            vars_i,
            vars_j,
            after,
            witness,
        } => {
            let m = io::load_model(model, limits)?;
            let (w, b) = (ActionWord::parse(word), ActionWord::parse(after));
            let (i, j) = (vars(&m, vars_i)?, vars(&m, vars_j)?);
            let f = match witness {
                Some(p) => {
                    let file = path_str(p);
                    let entries: indexmap::IndexMap<String, String> =
                        io::parse_json(&file, &io::read_text(p)?)?;
                    TotalMap::from_labels(
                        "witness",
                        m.outcomes().subspace(&i),
                        m.outcomes().subspace(&j),
                        entries.iter().map(|(k, v)| (k.as_str(), v.as_str())),
                    )
                    .map_err(|e| Error::Schema {
                        file,
                        path: String::new(),
                        reason: e.to_string(),
                    })?
                }
                None => {
                    let d = check_determination(&m, &w, &i, &j)?;
                    match d.witness {
                        Some(f) => f,
                        None => {
                            let cx = d.counterexample.expect("failed determination has a pair");
                            return Err(Error::BaseDeterminationFails(format!(
                                "states '{}' and '{}' agree on I but not on J",
                                cx.first, cx.second
                            )));
                        }
                    }
                }
            };
            let r = check_invariance(&m, &w, &f, &i, &j, &b)?;
            let mut rep = Report::new(name, Verdict::from_holds(r.holds))
                .input("model", path_str(model))
                .input("word", &w)
                .input("vars_i", m.outcomes().var_ids(&i))
                .input("vars_j", m.outcomes().var_ids(&j))
                .input("after", &b)
                .witness(map_json(&f));
            if let Some(cx) = r.counterexample {
                rep = rep.counterexample(cx);
            }
            Ok(rep)
        }
        Command::CheckCommute { model, a, b } => {
            let m = io::load_model(model, limits)?;
            Ok(law_report(name, model, a, b, check_commute(&m, a, b)?))
        }
        Command::CheckOverwrite { model, a, b } => {
            let m = io::load_model(model, limits)?;
            Ok(law_report(name, model, a, b, check_overwrite(&m, a, b)?))
        }
        Command::CheckSurgical {
            model,
            action,
            mechanisms,
            context,
            max_parents,
        } => {
            let m = io::load_model(model, limits)?;
            let recs = io::load_mechanisms(mechanisms, &m)?;
            let ctx = ActionWord::parse(context);
            let opts = SurgicalOptions {
                max_parents: *max_parents,
                ..SurgicalOptions::default()
            };
            let v = check_surgical_with(&m, action, &recs, &ctx, &opts)?;
            let describe = |ks: &[usize]| -> Vec<String> { ks.iter().map(|&k| recs[k].describe()).collect() };
            let mut rep = Report::new(name, Verdict::from_holds(v.surgical))
                .input("model", path_str(model))
                .input("action", action)
                .input("mechanisms", path_str(mechanisms))
                .input("context", &ctx)
                .details(json!({
                    "target": v.target,
                    "broken": describe(&v.broken),
                    "survived": describe(&v.survived),
                }));
            if let Some(nm) = &v.new_mechanism {
                rep = rep.witness(json!({
                    "parents": nm.parents,
                    "map": map_json(&nm.map),
                    "required_invariance": nm.required_invariance,
                    "fresh_invariance": nm.fresh_invariance,
                }));
            }
            if !v.surgical {
                rep = rep.counterexample(json!({"reasons": v.reasons}));
            }
            Ok(rep)
        }
        Command::CheckNaturality {
            morphism,
            cap,
            depth,
        } => {
            let mm = io::load_morphism(morphism, limits)?;
            let v = check_naturality_capped(&mm, *cap)?;
            let mut holds = v.natural;
            let mut details = json!({
                "action_failures": v.action_failures,
                "process_failures": v.process_failures,
                "outcome_failures": v.outcome_failures,
            });
            if let Some(d) = depth {
                let c = naturality_closure_check(&mm, *d)?;
                holds &= c.holds;
                details["closure"] = json!({
                    "depth": d,
                    "words_checked": c.words_checked,
                    "holds": c.holds,
                    "first_failure": c.first_failure,
                });
            }
            let mut rep = Report::new(name, Verdict::from_holds(holds))
                .input("morphism", path_str(morphism))
                .details(details);
            if !v.failures.is_empty() {
                rep = rep.counterexample(&v.failures);
            }
            Ok(rep)
        }
        Command::Image { morphism } => {
            let mm = io::load_morphism(morphism, limits)?;
            let s = check_surjectivity_assumptions(&mm)?;
            Ok(Report::new(name, Verdict::Pass)
                .input("morphism", path_str(morphism))
                .details(s))
        }
        Command::Discover {
            model,
            context,
            max_parents,
            probe_depth,
            out,
        } => {
            let m = io::load_model(model, limits)?;
            let ctx = ActionWord::parse(context);
            let opts = DiscoverOptions {
                max_parents: *max_parents,
                probe_depth: *probe_depth,
            };
            let recs = discover_mechanisms_with(&m, &ctx, &opts)?;
            let file = io::mechanisms_to_file(&recs);
            if let Some(p) = out {
                io::write_json(p, &file)?;
            }
            Ok(Report::new(name, Verdict::Pass)
                .input("model", path_str(model))
                .input("context", &ctx)
                .input("max_parents", max_parents)
                .details(file))
        }
        Command::EncodeScm { scm, out } => {
            let s = io::load_scm(scm)?;
            let m = encode_scm_with(&s, limits)?;
            io::write_json(out, &io::model_to_file(&m))?;
            Ok(Report::new(name, Verdict::Pass)
                .input("scm", path_str(scm))
                .details(json!({
                    "out": path_str(out),
                    "states": m.states().len(),
                    "outcomes": m.outcomes().total().len(),
                    "generators": m.generator_labels().collect::<Vec<_>>(),
                })))
        }
        Command::VerifyScmLaws { scm, model } => {
            let s = io::load_scm(scm)?;
            let m = match model {
                Some(p) => io::load_model(p, limits)?,
                None => encode_scm_with(&s, limits)?,
            };
            let r = verify_scm_laws(&m, &s)?;
            let checked: Map<String, Value> = LawKind::ALL
                .iter()
                .zip(r.checked)
                .map(|(k, n)| (serde_json::to_value(k).unwrap().as_str().unwrap().to_string(), json!(n)))
                .collect();
            let mut rep = Report::new(name, Verdict::from_holds(r.holds()))
                .input("scm", path_str(scm))
                .input("model", model.as_deref().map(path_str))
                .details(json!({"checked": checked}));
            if !r.holds() {
                rep = rep.counterexample(&r.violations);
            }
            Ok(rep)
        }
        Command::RandomScm {
            seed,
            n_endo,
            exo_values,
            domain_size,
            out,
        } => {
            let s = random_scm(*seed, *n_endo, *exo_values, *domain_size)?;
            io::write_json(out, &io::scm_to_file(&s))?;
            Ok(Report::new(name, Verdict::Pass)
                .input("seed", seed)
                .input("n_endo", n_endo)
                .input("exo_values", exo_values)
                .input("domain_size", domain_size)
                .details(json!({"out": path_str(out)})))
        }
        Command::Simulate { scenario, word } => {
            let sc = io::load_scenario(scenario)?;
            let w = ActionWord::parse(word);
            let (world, state, out) = sc.run(&w)?;
            let statuses: Map<String, Value> = world
                .census
                .iter()
                .zip(&out.0)
                .map(|(id, s)| (id.clone(), json!(s.to_string())))
                .collect();
            Ok(Report::new(name, Verdict::Pass)
                .input("scenario", path_str(scenario))
                .input("word", &w)
                .details(json!({
                    "state": world.state_label(&state),
                    "outcome": statuses,
                })))
        }
        Command::BuildModel {
            scenario,
            out,
            forget_barriers,
        } => {
            let sc = io::load_scenario(scenario)?;
            let params = sc.family()?;
            let kind = if *forget_barriers {
                AbstractionKind::ForgetTagsAndBarriers
            } else {
                AbstractionKind::ForgetTags
            };
            let built = build_bounded_model_with(&params, kind, limits)?;
            std::fs::create_dir_all(out).map_err(|e| Error::Io(format!("{}: {e}", out.display())))?;
            io::write_json(&out.join("micro.json"), &io::model_to_file(&built.micro))?;
            io::write_json(&out.join("abstract.json"), &io::model_to_file(&built.abstract_model))?;
            let mf = io::morphism_to_file(&built.morphism, json!("micro.json"), json!("abstract.json"));
            io::write_json(&out.join("morphism.json"), &mf)?;
            Ok(Report::new(name, Verdict::Pass)
                .input("scenario", path_str(scenario))
                .input("forget_barriers", forget_barriers)
                .details(json!({
                    "out": path_str(out),
                    "micro_states": built.micro.states().len(),
                    "micro_outcomes": built.micro.outcomes().total().len(),
                    "abstract_states": built.abstract_model.states().len(),
                    "generators": built.micro.generator_labels().collect::<Vec<_>>(),
                })))
        }
    }
}

fn render(rep: &Report, format: Format) -> String {
    match format {
        Format::Text => rep.to_text(),
        Format::Json => rep.to_json(),
    }
}

/// Parse `args`, run, print the report, and return the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let limits = Limits::from_env();
    let start = Instant::now();
    match run(&cli.command, &limits) {
        Ok(mut rep) => {
            if cli.timing {
                rep.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            print!("{}", render(&rep, cli.format));
            rep.verdict.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            if cli.format == Format::Json {
                let rep = Report::new(cli.command.name(), Verdict::Error)
                    .details(json!({"error": e.to_string()}));
                print!("{}", rep.to_json());
            }
            Verdict::Error.exit_code()
        }
    }
}

pub fn main() -> i32 {
    main_with(std::env::args_os())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(main_with(["causal-ground", "no-such-command"]), 2);
        assert_eq!(main_with(["causal-ground", "check-commute", "--a", "x"]), 2);
    }

    #[test]
    fn missing_file_is_an_error() {
        let code = main_with([
            "causal-ground",
            "check-commute",
            "--model",
            "/nonexistent/model.json",
            "--a",
            "x",
            "--b",
            "y",
        ]);
        assert_eq!(code, 2);
    }
}
