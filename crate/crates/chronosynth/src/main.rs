use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chronosynth::check;
use chronosynth::commands::{self, CliError};
use chronosynth::config::{Config, Overrides};
use chronosynth::format::parse_automaton;
use chronosynth::session::{output_choice, run_session, SessionReport};
use chronosynth_core::continuous_synth::witness_to_player;
use chronosynth_core::game_sim::{adjudicate, run_play, RandomInput};
use chronosynth_core::{ParityAutomaton, Semantics};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Church synthesis over discrete time and over continuous-time signals.
#[derive(Parser, Debug)]
#[command(name = "chronosynth", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Class-table cap [env: CHRONOSYNTH_CAP_SIGNATURES]
    #[arg(long, global = true)]
    cap_signatures: Option<u64>,
    /// Strategy search cap [env: CHRONOSYNTH_CAP_STRATEGIES]
    #[arg(long, global = true)]
    cap_strategies: Option<u64>,
    /// Steps per simulated play [env: CHRONOSYNTH_CAP_ROUNDS]
    #[arg(long, global = true)]
    rounds: Option<u64>,
    /// Rounds of the scripted example play [env: CHRONOSYNTH_CAP_HORIZON]
    #[arg(long, global = true)]
    horizon: Option<u64>,
    /// Seed for random inputs and property suites
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of standard output
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// More logging on standard error (repeatable)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Sem {
    Rc,
    Fv,
}

impl From<Sem> for Semantics {
    fn from(s: Sem) -> Self {
        match s {
            Sem::Rc => Semantics::Rc,
            Sem::Fv => Semantics::Fv,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve the discrete-time synthesis game and print a witness machine
    SolveDiscrete {
        spec: PathBuf,
        /// Print the machine as DOT
        #[arg(long)]
        dot: bool,
    },
    /// Decide finite-state definability over FV signals
    Definable {
        spec: PathBuf,
        /// Ask for a strongly causal counter-operator instead
        #[arg(long)]
        sc: bool,
    },
    /// Decide continuous-time realizability
    Synth {
        spec: PathBuf,
        #[arg(long, value_enum)]
        semantics: Sem,
        /// Include arena and search statistics
        #[arg(long)]
        stats: bool,
        /// Worker threads for the strategy search
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Print the state-monoid class count, d_Q and |UP(Q)|
    Monoid {
        spec: PathBuf,
        /// Include every class and UP member
        #[arg(long)]
        table: bool,
        /// Only strings that are runs for some input letter
        #[arg(long)]
        paths: bool,
    },
    /// Export the game arena
    Arena {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "fv")]
        semantics: Sem,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Play the arena game as the input player against the synthesized strategy
    Play {
        spec: PathBuf,
        #[arg(long, value_enum, default_value = "fv")]
        semantics: Sem,
        /// Read moves from the terminal
        #[arg(long, conflicts_with = "script")]
        interactive: bool,
        /// Read moves from a file (transcripts replay as scripts)
        #[arg(long)]
        script: Option<PathBuf>,
        /// Accept percentage of the random input player
        #[arg(long, default_value_t = 20)]
        accept_percent: u32,
    },
    /// Run the seeded signal-operator and example suites
    CheckFixtures,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<ParityAutomaton, CliError> {
    parse_automaton(&read(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn finish_play(report: SessionReport) -> Result<String, CliError> {
    let text = report.render();
    match report.outcome {
        Ok(_) => Ok(text),
        Err(_) => {
            print!("{text}");
            Err(CliError::Undecided("play could not be adjudicated within the cap".into()))
        }
    }
}

fn play(spec: &ParityAutomaton, sem: Semantics, mode: PlayMode, cfg: &Config) -> Result<String, CliError> {
    let ar = commands::build_arena(spec, sem, cfg)?;
    let found = commands::search(&ar, cfg, 1)?;
    if found.witness.is_none() {
        log::warn!("spec is unrealizable; the output player uses the first enumerated choice");
    }
    let choice = output_choice(&ar, found.witness);
    match mode {
        PlayMode::Random(accept) => {
            let mut o = witness_to_player(&choice);
            let mut i = RandomInput::new(ChaCha8Rng::seed_from_u64(cfg.seed), accept);
            let p = run_play(&ar, &mut o, &mut i, cfg.rounds).map_err(|e| CliError::Input(e.to_string()))?;
            finish_play(SessionReport {
                transcript: p.transcript(),
                duration: p.time().clone(),
                outcome: adjudicate(&p),
            })
        }
        PlayMode::Script(path) => {
            let text = read(&path)?;
            let r = run_session(&ar, &choice, &mut text.as_bytes(), None, cfg.rounds).map_err(CliError::Input)?;
            finish_play(r)
        }
        PlayMode::Interactive => {
            let stdin = io::stdin();
            let mut input = BufReader::new(stdin.lock());
            let mut stderr = io::stderr();
            let r = run_session(&ar, &choice, &mut input, Some(&mut stderr), cfg.rounds).map_err(CliError::Input)?;
            finish_play(r)
        }
    }
}

enum PlayMode {
    Random(u32),
    Script(PathBuf),
    Interactive,
}

fn run(cli: Cli) -> Result<String, CliError> {
    let g = &cli.global;
    let o = Overrides {
        signatures: g.cap_signatures,
        strategies: g.cap_strategies,
        rounds: g.rounds,
        horizon: g.horizon,
        seed: g.seed,
    };
    let cfg = Config::from_env(&o).map_err(|e| CliError::Usage(e.to_string()))?;
    log::debug!("config: {cfg:?}");
    match cli.command {
        Command::SolveDiscrete { spec, dot } => Ok(commands::solve_discrete(&load_spec(&spec)?, dot)),
        Command::Definable { spec, sc } => commands::definable(&load_spec(&spec)?, sc),
        Command::Synth { spec, semantics, stats, jobs } => {
            if jobs == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            commands::synth(&load_spec(&spec)?, semantics.into(), stats, jobs, &cfg)
        }
        Command::Monoid { spec, table, paths } => commands::monoid(&load_spec(&spec)?, table, paths, &cfg),
        Command::Arena { spec, semantics, dot, json } => {
            if !dot && !json {
                return Err(CliError::Usage("choose --dot or --json".into()));
            }
            commands::arena(&load_spec(&spec)?, semantics.into(), dot, &cfg)
        }
        Command::Play { spec, semantics, interactive, script, accept_percent } => {
            let mode = match (interactive, script) {
                (true, _) => PlayMode::Interactive,
                (false, Some(p)) => PlayMode::Script(p),
                (false, None) => PlayMode::Random(accept_percent.min(100)),
            };
            play(&load_spec(&spec)?, semantics.into(), mode, &cfg)
        }
        Command::CheckFixtures => {
            log::info!("check-fixtures seed {}", cfg.seed);
            let results = check::run_all(&cfg);
            let mut out = format!("seed: {}\n", cfg.seed);
            for r in &results {
                out.push_str(&r.line());
                out.push('\n');
            }
            if results.iter().all(|r| r.passed) {
                Ok(out)
            } else {
                print!("{out}");
                Err(CliError::Failed("some fixture suites failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.global.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let output = cli.global.output.clone();
    match run(cli) {
        Ok(text) => {
            let written = match &output {
                Some(p) => fs::write(p, text.as_bytes()),
                None => io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
