//! `pltr`: solve, check and benchmark energy-minimizing deadline schedules.
//!
//! Exit codes: 0 solved or feasible, 2 infeasible (a certificate is printed),
//! 1 any other error.

mod batch;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use pltr_core::flow::{self, Verdict};
use pltr_core::gantt::{render_svg, GanttOptions};
use pltr_core::generate::GenSpec;
use pltr_core::io::{self, BoundsDoc, ScheduleDoc};
use pltr_core::model::Instance;
use pltr_core::oracle::{self, ORACLE_CAP};
use pltr_core::pltr::{self, PltrOptions};
use pltr_core::volume::{self, SlotSet, PEAK_DENSITY_CAP};
use pltr_core::{schedule_build, Error};
use serde_json::json;

use crate::batch::Draw;

#[derive(Parser)]
#[command(
    name = "pltr",
    version,
    about = "Energy-minimizing deadline scheduling with power-down"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run PLTR on an instance and print bounds, schedule and cost
    Solve {
        instance: PathBuf,
        /// Include bound snapshots and the engagement tightness check
        #[arg(long)]
        diagnostics: bool,
        #[arg(long, value_name = "FILE")]
        schedule_out: Option<PathBuf>,
        #[arg(long, value_name = "FILE")]
        gantt_out: Option<PathBuf>,
    },
    /// Check feasibility under optional per-slot processor bounds
    Check {
        instance: PathBuf,
        #[arg(long, value_name = "FILE")]
        bounds: Option<PathBuf>,
    },
    /// Compare PLTR against the brute-force optimum
    Compare {
        instance: Option<PathBuf>,
        #[command(flatten)]
        gen: GenArgs,
        /// Largest number of candidate profiles the oracle may scan
        #[arg(long, default_value_t = ORACLE_CAP)]
        cap: u128,
        /// Print the report as JSON instead of a table
        #[arg(long)]
        json: bool,
    },
    /// Print the brute-force optimum of a small instance
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value_t = ORACLE_CAP)]
        cap: u128,
    },
    /// Render a schedule JSON file as an SVG Gantt chart
    Gantt {
        schedule: PathBuf,
        out: PathBuf,
        /// Wake-up cost used for shading; defaults to the file's "q"
        #[arg(long)]
        q: Option<u64>,
    },
    /// Generate random instances
    Gen {
        #[command(flatten)]
        gen: GenArgs,
        /// Write one file per trial here instead of printing
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Run PLTR on generated instances and report call counts and timings
    Bench {
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Volume, density, deficiency and excess of a slot set
    Analyze {
        instance: PathBuf,
        /// Slots on the instance's clock, e.g. "0,1,4"
        #[arg(long, value_delimiter = ',')]
        slots: Vec<i64>,
        #[arg(long, value_name = "FILE")]
        bounds: Option<PathBuf>,
    },
}

#[derive(Args, Clone)]
struct GenArgs {
    /// Generator spec such as "n=3,d=8,m=2,q=2,seed=7"
    #[arg(long = "gen", value_name = "SPEC")]
    spec: Option<GenSpec>,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    /// Overrides the spec's seed
    #[arg(long, env = "PLTR_SEED")]
    seed: Option<u64>,
    /// Redraw until the instance passes the flow check
    #[arg(long)]
    feasible_only: bool,
}

impl GenArgs {
    fn spec(&self) -> anyhow::Result<GenSpec> {
        let spec = self.spec.clone().context("--gen SPEC is required")?;
        Ok(match self.seed {
            Some(seed) => spec.with_seed(seed),
            None => spec,
        })
    }
}

/// Infeasibility is reported through the exit code, not as an error.
enum Outcome {
    Ok,
    Infeasible,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Infeasible) => ExitCode::from(2),
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    io::parse_instance(&text).with_context(|| format!("loading {}", path.display()))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn print_json(value: &serde_json::Value) {
    print!("{}", io::to_canonical_json(value));
}

fn run(command: Command) -> anyhow::Result<Outcome> {
    match command {
        Command::Solve {
            instance,
            diagnostics,
            schedule_out,
            gantt_out,
        } => {
            let instance = read_instance(&instance)?;
            let result = match pltr::run_with(&instance, PltrOptions { diagnostics }) {
                Ok(result) => result,
                Err(Error::Infeasible(cert)) => {
                    print_json(&report::infeasible(&cert, &instance, None));
                    return Ok(Outcome::Infeasible);
                }
                Err(e) => return Err(e.into()),
            };
            let (schedule, cost) = schedule_build::schedule_from_result(&instance, &result)?;
            let doc = ScheduleDoc::from_schedule(&schedule, &instance);
            if let Some(path) = schedule_out {
                write(&path, &io::to_canonical_json(&doc))?;
            }
            if let Some(path) = gantt_out {
                let names: Vec<String> = instance.jobs().iter().map(|j| j.id.clone()).collect();
                let options = GanttOptions {
                    q: instance.q(),
                    origin: instance.origin(),
                    processors: instance.effective_m(),
                };
                write(&path, &render_svg(&schedule, &names, &options))?;
            }
            print_json(&report::solved(&instance, &result, &doc, &cost, diagnostics));
            Ok(Outcome::Ok)
        }

        Command::Check { instance, bounds } => {
            let instance = read_instance(&instance)?;
            let profile = match bounds {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    let doc: BoundsDoc = io::from_json(&text)?;
                    doc.to_profile(&instance)?
                }
                None => instance.default_bounds(),
            };
            match flow::check(&instance, &profile) {
                Ok(Verdict::Feasible) => {
                    print_json(&json!({ "status": "feasible" }));
                    Ok(Outcome::Ok)
                }
                Ok(Verdict::Infeasible(cert)) | Err(Error::Infeasible(cert)) => {
                    print_json(&report::infeasible(&cert, &instance, Some(&profile)));
                    Ok(Outcome::Infeasible)
                }
                Err(e) => Err(e.into()),
            }
        }

        Command::Compare {
            instance,
            gen,
            cap,
            json,
        } => {
            let rows = match instance {
                Some(path) => {
                    let instance = read_instance(&path)?;
                    vec![batch::compare_one(0, Draw::Fixed(instance), cap)]
                }
                // OPT is undefined on infeasible draws, so they are always redrawn.
                None => batch::compare_trials(&gen.spec()?, gen.trials, true, cap),
            };
            for row in &rows {
                if let Some(notice) = &row.notice {
                    eprintln!("trial {}: skipped, {notice}", row.trial);
                }
            }
            if json {
                print_json(&serde_json::to_value(&rows)?);
            } else {
                print!("{}", report::compare_table(&rows));
            }
            let failed = rows.iter().filter(|r| r.bound_ok == Some(false)).count();
            if failed > 0 {
                eprintln!("{failed} trial(s) exceed 2*OPT + P");
                return Ok(Outcome::Failed);
            }
            Ok(Outcome::Ok)
        }

        Command::Oracle { instance, cap } => {
            let instance = read_instance(&instance)?;
            match oracle::brute_force_opt_with(&instance, cap) {
                Ok(opt) => {
                    let doc = ScheduleDoc::from_schedule(&opt.schedule, &instance);
                    print_json(&json!({
                        "status": "optimal",
                        "cost": opt.cost,
                        "profile": opt.profile,
                        "schedule": doc,
                    }));
                    Ok(Outcome::Ok)
                }
                Err(Error::Infeasible(cert)) => {
                    print_json(&report::infeasible(&cert, &instance, None));
                    Ok(Outcome::Infeasible)
                }
                Err(e) => Err(e.into()),
            }
        }

        Command::Gantt { schedule, out, q } => {
            let text = fs::read_to_string(&schedule).with_context(|| format!("reading {}", schedule.display()))?;
            let doc: ScheduleDoc = io::from_json(&text)?;
            let loaded = doc.load()?;
            let options = GanttOptions {
                q: q.or(doc.q).unwrap_or(0),
                origin: loaded.origin,
                processors: loaded.processors,
            };
            write(&out, &render_svg(&loaded.schedule, &loaded.job_names, &options))?;
            Ok(Outcome::Ok)
        }

        Command::Gen { gen, out_dir } => {
            let instances = batch::draw_trials(&gen.spec()?, gen.trials, gen.feasible_only)?;
            match out_dir {
                Some(dir) => {
                    fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                    for (i, instance) in instances.iter().enumerate() {
                        write(
                            &dir.join(format!("instance_{i:04}.json")),
                            &io::instance_to_json(instance),
                        )?;
                    }
                }
                None if instances.len() == 1 => print!("{}", io::instance_to_json(&instances[0])),
                None => {
                    let specs: Vec<_> = instances.iter().map(Instance::to_spec).collect();
                    print_json(&serde_json::to_value(specs)?);
                }
            }
            Ok(Outcome::Ok)
        }

        Command::Bench { gen } => {
            let rows = batch::bench_trials(&gen.spec()?, gen.trials, gen.feasible_only);
            let ok = rows.iter().all(|r| r.calls_ok && r.intervals_ok);
            print_json(&json!({ "spec": gen.spec()?.to_string(), "all_ok": ok, "trials": rows }));
            if !ok {
                eprintln!("call-count or busy-interval assertion failed");
                return Ok(Outcome::Failed);
            }
            Ok(Outcome::Ok)
        }

        Command::Analyze {
            instance,
            slots,
            bounds,
        } => {
            let instance = read_instance(&instance)?;
            let len = instance.slot_count() as i64;
            let mut set = Vec::with_capacity(slots.len());
            for t in slots {
                let local = t - instance.origin();
                if !(0..len).contains(&local) {
                    bail!("slot {t} lies outside the horizon");
                }
                set.push(local as usize);
            }
            let q: SlotSet = set.into_iter().collect();
            let profile = match bounds {
                Some(path) => {
                    let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    io::from_json::<BoundsDoc>(&text)?.to_profile(&instance)?
                }
                None => instance.default_bounds(),
            };
            let density = volume::density(&instance, &q).ok().map(|r| r.to_string());
            let peak = volume::peak_density(&instance, &q, PEAK_DENSITY_CAP)
                .ok()
                .map(|r| r.to_string());
            print_json(&json!({
                "Q": report::original_slots(&q, &instance),
                "forced_volume": volume::total_forced_volume(&instance, &q),
                "possible_volume": volume::total_possible_volume(&instance, &q),
                "density": density,
                "peak_density": peak,
                "deficiency": volume::deficiency(&instance, &profile, &q),
                "excess": volume::excess(&instance, &profile, &q),
            }));
            Ok(Outcome::Ok)
        }
    }
}
