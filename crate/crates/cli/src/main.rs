use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use gtoc12_cli::load_catalog;
use gtoc12_cli::response::{render_text, ValidateResponse};
use gtoc12_cli::service::{self, AppState};
use gtoc12_core::catalog::write_asteroid_catalog;
use gtoc12_core::synth::{fixture_catalog, FixtureSpec, SynthesisSpec, Synthesizer};
use gtoc12_core::{
    body_state, lint_solution, serialize_solution, validate_bytes, AsteroidCatalog, Body,
    BonusMode, BonusModel, Epoch, Planet, ValidationConfig, ValidationReport,
};

const EXIT_INVALID: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_CATALOG: u8 = 3;
const EXIT_OTHER: u8 = 4;

#[derive(Parser)]
#[command(
    name = "gtoc12",
    version,
    about = "Validate and score GTOC 12 solution files"
)]
struct Cli {
    /// Asteroid catalog file. Without it a built-in synthetic catalog is used.
    #[arg(long, global = true, env = "GTOC12_CATALOG")]
    catalog: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Static,
    Dynamic,
}

#[derive(clap::Args)]
struct Checks {
    /// Bonus applied to collected mass.
    #[arg(long, value_enum, default_value = "static")]
    mode: Mode,
    /// Position tolerance, km.
    #[arg(long)]
    pos_tol: Option<f64>,
    /// Velocity tolerance, km/s.
    #[arg(long)]
    vel_tol: Option<f64>,
    /// Mass tolerance, kg.
    #[arg(long)]
    mass_tol: Option<f64>,
}

impl Checks {
    fn config(&self) -> ValidationConfig {
        let mut config = ValidationConfig {
            bonus: BonusModel::with_mode(match self.mode {
                Mode::Static => BonusMode::Static,
                Mode::Dynamic => BonusMode::Dynamic,
            }),
            ..ValidationConfig::default()
        };
        let t = &mut config.tolerances;
        t.pos = self.pos_tol.unwrap_or(t.pos);
        t.vel = self.vel_tol.unwrap_or(t.vel);
        t.mass = self.mass_tol.unwrap_or(t.mass);
        config
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check every constraint and print violations and the score.
    Validate {
        solution: PathBuf,
        /// Print the JSON response instead of text.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        checks: Checks,
    },
    /// Print the per-asteroid score breakdown of a solution.
    Score {
        solution: PathBuf,
        #[command(flatten)]
        checks: Checks,
    },
    /// Run the HTTP validation service.
    Serve {
        #[arg(long, env = "GTOC12_BIND", default_value = "127.0.0.1:5000")]
        bind: String,
        #[command(flatten)]
        checks: Checks,
    },
    /// Print the heliocentric state of a planet or asteroid.
    Ephem {
        /// Venus, Earth, Mars or an asteroid ID.
        body: String,
        /// MJD.
        epoch: f64,
    },
    /// Write a synthetic solution that is valid for the catalog.
    Synth {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        ships: usize,
        #[arg(long, default_value_t = 1)]
        mining_ships: usize,
        /// Thrust arcs per non-mining ship.
        #[arg(long, default_value_t = 2)]
        burns: usize,
        /// Asteroids visited per mining ship.
        #[arg(long, default_value_t = 9)]
        members: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report formatting that parses but is not canonical.
    Lint { solution: PathBuf },
    /// Write the built-in synthetic asteroid catalog.
    Fixture {
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        rows: Option<usize>,
    },
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn io(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_IO,
        error: error.into(),
    }
}

fn other(error: impl Into<anyhow::Error>) -> Failure {
    Failure {
        code: EXIT_OTHER,
        error: error.into(),
    }
}

fn catalog(cli: &Cli) -> Result<AsteroidCatalog, Failure> {
    load_catalog(cli.catalog.as_deref()).map_err(|e| Failure {
        code: EXIT_CATALOG,
        error: anyhow::Error::new(e).context(match &cli.catalog {
            Some(p) => format!("loading catalog {}", p.display()),
            None => "building synthetic catalog".to_string(),
        }),
    })
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(io)
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .map_err(io)
}

fn verdict(report: &ValidationReport) -> u8 {
    if report.valid {
        0
    } else {
        EXIT_INVALID
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Validate {
            solution,
            json,
            checks,
        } => {
            let bytes = read(solution)?;
            let catalog = catalog(&cli)?;
            let report = validate_bytes(&bytes, &catalog, &checks.config());
            if *json {
                let body = serde_json::to_string_pretty(&ValidateResponse::from_report(&report))
                    .map_err(other)?;
                println!("{body}");
            } else {
                print!("{}", render_text(&report));
            }
            Ok(verdict(&report))
        }
        Command::Score { solution, checks } => {
            let bytes = read(solution)?;
            let catalog = catalog(&cli)?;
            let report = validate_bytes(&bytes, &catalog, &checks.config());
            println!("asteroid collected_kg cap_kg bonus contribution_kg");
            for a in &report.score.per_asteroid {
                let cap = a.cap.map_or("-".to_string(), |c| format!("{c:.6}"));
                println!(
                    "{} {:.6} {} {:.9} {:.6}{}",
                    a.asteroid,
                    a.collected,
                    cap,
                    a.bonus,
                    a.contribution,
                    if a.cap_exceeded { " cap_exceeded" } else { "" }
                );
            }
            println!("J={:.6}", report.score.total_j);
            if !report.valid {
                eprintln!("{}", gtoc12_cli::response::summary(&report));
            }
            Ok(verdict(&report))
        }
        Command::Serve { bind, checks } => {
            let state = Arc::new(AppState {
                catalog: catalog(&cli)?,
                config: checks.config(),
            });
            let runtime = tokio::runtime::Runtime::new().map_err(io)?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(bind.as_str())
                    .await
                    .with_context(|| format!("binding {bind}"))
                    .map_err(io)?;
                log::info!("listening on {}", listener.local_addr().map_err(io)?);
                let shutdown = async {
                    let _ = tokio::signal::ctrl_c().await;
                };
                service::serve(listener, state, shutdown).await.map_err(io)
            })?;
            Ok(0)
        }
        Command::Ephem { body, epoch } => {
            let target = match Planet::from_name(body) {
                Some(p) => Body::Planet(p),
                None => Body::Asteroid(
                    body.parse()
                        .map_err(|_| other(anyhow!("unknown body {body:?}")))?,
                ),
            };
            let catalog = match target {
                Body::Asteroid(_) => catalog(&cli)?,
                Body::Planet(_) => AsteroidCatalog::default(),
            };
            let s = body_state(&catalog, target, Epoch::from_mjd(*epoch)).map_err(other)?;
            println!(
                "{} {} {} {} {} {} {}",
                epoch,
                s.position.x,
                s.position.y,
                s.position.z,
                s.velocity.x,
                s.velocity.y,
                s.velocity.z
            );
            Ok(0)
        }
        Command::Synth {
            seed,
            ships,
            mining_ships,
            burns,
            members,
            out,
        } => {
            let catalog = catalog(&cli)?;
            let spec = SynthesisSpec {
                ships: *ships,
                mining_ships: *mining_ships,
                burns_per_leg: *burns,
                max_members: *members,
                seed: *seed,
                ..SynthesisSpec::default()
            };
            let doc = Synthesizer::new(&catalog)
                .synthesize(&spec)
                .map_err(other)?;
            let text = serialize_solution(&doc).map_err(other)?;
            match out {
                Some(path) => write(path, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Lint { solution } => {
            let bytes = read(solution)?;
            let text = String::from_utf8_lossy(&bytes);
            let warnings = lint_solution(&text);
            for w in &warnings {
                println!("{w}");
            }
            Ok(if warnings.is_empty() { 0 } else { EXIT_INVALID })
        }
        Command::Fixture { out, seed, rows } => {
            let defaults = FixtureSpec::default();
            let spec = FixtureSpec {
                seed: seed.unwrap_or(defaults.seed),
                rows: rows.unwrap_or(defaults.rows),
                ..defaults
            };
            write(out, &write_asteroid_catalog(&fixture_catalog(&spec)))?;
            Ok(0)
        }
    }
}

/// The error chain on one line, skipping causes already quoted by the
/// message above them.
fn describe(error: &anyhow::Error) -> String {
    let mut out = String::new();
    for cause in error.chain() {
        let text = cause.to_string();
        if !out.contains(&text) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&text);
        }
    }
    out
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_OTHER } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", describe(&f.error));
            ExitCode::from(f.code)
        }
    }
}
