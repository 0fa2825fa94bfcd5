use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use xorgame::graph::{build_pair_graph, hypergraph_dot, pair_graph_dot};
use xorgame::merp::{analytic_merp_value, simulate_merp_value, solve_merp, MAX_SIMULATED_PLAYERS};
use xorgame::oracle::{bounded_sigma_search, classical_value, DEFAULT_SEARCH_CAP};
use xorgame::refutation::DEFAULT_WORD_CAP;
use xorgame::word::{canon_letters, CanonStatus};
use xorgame::{
    decide, generate_random_game, parse_game, verify_certificate, Certificate, DecideOptions, Error, Format, Game,
    Status,
};

const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_NO_INPUT: u8 = 66;
const EXIT_INTERNAL: u8 = 70;
const EXIT_MISMATCH: u8 = 3;

#[derive(Parser)]
#[command(name = "pxor", version, about = "Decide perfect commuting-operator strategies for XOR games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Text,
    Dot,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a game and write a verified certificate.
    Decide {
        /// Game file; `-` or nothing reads stdin.
        game: Option<PathBuf>,
        /// Shape of the verdict printed on stdout.
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        /// Word-length guard for the refutation pipeline.
        #[arg(long, default_value_t = DEFAULT_WORD_CAP)]
        cap: usize,
        /// Certificate destination; printed on stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// Re-check a certificate against a game.
    Verify {
        certificate: PathBuf,
        game: PathBuf,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// Value of the GHZ strategy from a certificate, or from a fresh solve.
    Simulate {
        game: Option<PathBuf>,
        #[arg(long)]
        certificate: Option<PathBuf>,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// Best deterministic value, and optionally a bounded search for σ.
    Classical {
        game: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        /// Also search clause products of at most this many clauses for σ.
        #[arg(long)]
        max_len: Option<usize>,
        /// Visited-state cap for that search.
        #[arg(long, default_value_t = DEFAULT_SEARCH_CAP)]
        cap: usize,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// Canonical form of a one-player word modulo K.
    Canon {
        /// Letters as `zgabcdef` (a = 1) or as 1-based integers.
        word: Vec<String>,
    },
    /// Clause hypergraph, or one pair graph, as DOT.
    ExportGraph {
        game: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dot")]
        format: OutFormat,
        /// Two 1-based players, e.g. `2,3`.
        #[arg(long, value_delimiter = ',')]
        pair: Option<Vec<usize>>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// Random game from a seed.
    Gen {
        #[arg(long, default_value_t = 3)]
        players: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 4)]
        clauses: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: OutFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    NoInput(String),
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::NoInput(_) => EXIT_NO_INPUT,
            Failure::Mismatch(_) => EXIT_MISMATCH,
            Failure::Lib(e) => match e {
                Error::Parse { .. }
                | Error::InvalidGame(_)
                | Error::OutOfRange(_)
                | Error::Json(_)
                | Error::Dimension(_)
                | Error::OddLength
                | Error::TooShort(_)
                | Error::Precondition(_)
                | Error::TooLarge(_) => EXIT_DATA,
                Error::CapExceeded { .. } | Error::SearchCap(_) | Error::Internal(_) => EXIT_INTERNAL,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::NoInput(m) | Failure::Mismatch(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type CliResult = Result<u8, Failure>;

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    match path {
        None => read_stdin(),
        Some(p) if p.as_os_str() == "-" => read_stdin(),
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::NoInput(format!("{}: {e}", p.display()))),
    }
}

fn read_stdin() -> Result<String, Failure> {
    let mut s = String::new();
    io::stdin().read_to_string(&mut s).map_err(|e| Failure::NoInput(format!("stdin: {e}")))?;
    Ok(s)
}

/// JSON when the first non-blank character opens an object.
fn load_game(path: Option<&Path>, alphabet: Option<usize>) -> Result<Game, Failure> {
    let text = read_input(path)?;
    let format = if text.trim_start().starts_with('{') { Format::Json } else { Format::Text };
    Ok(parse_game(&text, format, alphabet)?)
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::NoInput(format!("{}: {e}", p.display()))),
        None => {
            // a closed pipe is not worth a panic
            let _ = io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    }
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Perfect | Status::ClassicallyPerfect => 0,
        Status::NotPerfect => 1,
        Status::Inconclusive => 2,
    }
}

fn cmd_decide(
    game: Option<&Path>,
    format: OutFormat,
    cap: usize,
    out: Option<&Path>,
    alphabet: Option<usize>,
) -> CliResult {
    let game = load_game(game, alphabet)?;
    let verdict = decide(&game, &DecideOptions { cap })?;
    let cert = verdict.certificate.to_json(Some(verdict.status))?;
    match format {
        OutFormat::Text => {
            let mut s = format!("{}\n", verdict.status);
            for (i, c) in verdict.components.iter().enumerate() {
                let clauses: Vec<String> = c.clauses.iter().map(|i| (i + 1).to_string()).collect();
                let tag = if c.member { "sigma-member" } else { "free" };
                s += &format!("component {}: {tag} clauses {}\n", i + 1, clauses.join(","));
            }
            match out {
                Some(p) => {
                    s += &format!("certificate {} written to {}\n", verdict.certificate.kind(), p.display());
                    emit(Some(p), &cert)?;
                    emit(None, &s)?;
                }
                None => emit(None, &(s + &cert))?,
            }
        }
        OutFormat::Json => {
            let components: Vec<serde_json::Value> = verdict
                .components
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "clauses": c.clauses.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        "member": c.member,
                    })
                })
                .collect();
            let mut report = serde_json::json!({
                "components": components,
                "status": verdict.status.label(),
            });
            match out {
                Some(p) => {
                    emit(Some(p), &cert)?;
                    report["certificate"] = serde_json::Value::String(p.display().to_string());
                }
                None => report["certificate"] = serde_json::from_str(&cert).map_err(Error::from)?,
            }
            let mut s = serde_json::to_string_pretty(&report).map_err(Error::from)?;
            s.push('\n');
            emit(None, &s)?;
        }
        OutFormat::Dot => return Err(Failure::Usage("decide prints text or json".into())),
    }
    Ok(status_code(verdict.status))
}

fn cmd_verify(cert: &Path, game: &Path, alphabet: Option<usize>) -> CliResult {
    let cert = Certificate::from_json(&read_input(Some(cert))?)?;
    let game = load_game(Some(game), alphabet)?;
    let report = match verify_certificate(&game, &cert) {
        Err(Error::Dimension(m)) => return Err(Failure::Mismatch(format!("certificate does not fit the game: {m}"))),
        other => other?,
    };
    let verdict = if report.passed { "PASS" } else { "FAIL" };
    println!("{verdict} {}: {}", cert.kind(), report.detail);
    Ok(if report.passed { 0 } else { 1 })
}

fn cmd_simulate(game: Option<&Path>, cert: Option<&Path>, alphabet: Option<usize>) -> CliResult {
    let game = load_game(game, alphabet)?;
    let strat = match cert {
        Some(p) => match Certificate::from_json(&read_input(Some(p))?)? {
            Certificate::Merp(s) => s,
            other => return Err(Failure::Usage(format!("a {} certificate has no strategy", other.kind()))),
        },
        None => match solve_merp(&game) {
            Some(s) => s,
            None => {
                println!("no perfect GHZ strategy exists");
                return Ok(1);
            }
        },
    };
    let analytic = match analytic_merp_value(&game, &strat) {
        Err(Error::Dimension(m)) => return Err(Failure::Mismatch(m)),
        other => other?,
    };
    if game.players() <= MAX_SIMULATED_PLAYERS {
        let sim = simulate_merp_value(&game, &strat)?;
        println!("simulated {:.12}", sim.value);
    }
    println!("analytic {analytic:.12}");
    Ok(if (analytic - 1.0).abs() <= 1e-9 { 0 } else { 1 })
}

fn cmd_classical(
    game: Option<&Path>,
    format: OutFormat,
    max_len: Option<usize>,
    cap: usize,
    alphabet: Option<usize>,
) -> CliResult {
    let game = load_game(game, alphabet)?;
    let r = classical_value(&game)?;
    let found = max_len.map(|l| bounded_sigma_search(&game, l, cap)).transpose()?;
    match format {
        OutFormat::Text => {
            println!("{}", r.value);
            for (a, row) in r.argmax_assignment.iter().enumerate() {
                let row: Vec<String> = row.iter().map(|x| format!("{x:+}")).collect();
                println!("player {}: {}", a + 1, row.join(" "));
            }
            if let (Some(l), Some(f)) = (max_len, &found) {
                match f {
                    Some(w) => {
                        let idx: Vec<String> = w.indices().iter().map(|i| (i + 1).to_string()).collect();
                        println!("sigma found: {}", idx.join(" "));
                    }
                    None => println!("no clause product of length <= {l} equals sigma"),
                }
            }
        }
        OutFormat::Json => {
            let mut v = serde_json::json!({
                "assignment": r.argmax_assignment,
                "value": r.value.to_string(),
            });
            if let Some(f) = &found {
                v["sigma_word"] = match f {
                    Some(w) => serde_json::json!(w.indices().iter().map(|i| i + 1).collect::<Vec<_>>()),
                    None => serde_json::Value::Null,
                };
            }
            println!("{}", serde_json::to_string_pretty(&v).map_err(Error::from)?);
        }
        OutFormat::Dot => return Err(Failure::Usage("classical prints text or json".into())),
    }
    Ok(0)
}

/// One alphabetic token (`a` = 1) or 1-based integers, returned 0-based.
fn parse_letters(tokens: &[String]) -> Result<(Vec<u32>, bool), Failure> {
    if let [t] = tokens {
        if !t.is_empty() && t.bytes().all(|b| b.is_ascii_lowercase()) {
            return Ok((t.bytes().map(|b| u32::from(b - b'a')).collect(), true));
        }
    }
    let nums = tokens
        .iter()
        .flat_map(|t| t.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<u32>() {
            Ok(n) if n >= 1 => Ok(n - 1),
            _ => Err(Failure::Usage(format!("`{t}` is not a letter index (1-based)"))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((nums, false))
}

fn cmd_canon(word: &[String]) -> CliResult {
    let (letters, alpha) = parse_letters(word)?;
    let (canon, status) = canon_letters(&letters);
    let shown = if alpha {
        canon.iter().map(|&l| char::from(b'a' + l as u8)).collect::<String>()
    } else {
        canon.iter().map(|l| (l + 1).to_string()).collect::<Vec<_>>().join(" ")
    };
    println!("{shown}");
    if status == CanonStatus::TooShort {
        eprintln!("note: fewer than 3 letters, returned unchanged");
    }
    Ok(0)
}

fn cmd_export_graph(
    game: Option<&Path>,
    format: OutFormat,
    pair: Option<&[usize]>,
    out: Option<&Path>,
    alphabet: Option<usize>,
) -> CliResult {
    if format != OutFormat::Dot {
        return Err(Failure::Usage("export-graph only writes dot".into()));
    }
    let game = load_game(game, alphabet)?;
    let dot = match pair {
        None => hypergraph_dot(&game),
        Some(&[a, b]) => {
            let k = game.players();
            if a == 0 || b == 0 || a > k || b > k || a == b {
                return Err(Failure::Usage(format!("--pair needs two distinct players in 1..={k}")));
            }
            pair_graph_dot(&game, &build_pair_graph(&game, a - 1, b - 1)?)
        }
        Some(_) => return Err(Failure::Usage("--pair takes two players".into())),
    };
    emit(out, &dot)?;
    Ok(0)
}

fn cmd_gen(
    players: usize,
    alphabet: usize,
    clauses: usize,
    seed: u64,
    format: OutFormat,
    out: Option<&Path>,
) -> CliResult {
    let fmt = match format {
        OutFormat::Text => Format::Text,
        OutFormat::Json => Format::Json,
        OutFormat::Dot => return Err(Failure::Usage("gen writes text or json".into())),
    };
    let game = generate_random_game(players, alphabet, clauses, seed)?;
    emit(out, &game.serialize(fmt))?;
    Ok(0)
}

fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Decide { game, format, cap, out, alphabet } => {
            cmd_decide(game.as_deref(), format, cap, out.as_deref(), alphabet)
        }
        Command::Verify { certificate, game, alphabet } => cmd_verify(&certificate, &game, alphabet),
        Command::Simulate { game, certificate, alphabet } => {
            cmd_simulate(game.as_deref(), certificate.as_deref(), alphabet)
        }
        Command::Classical { game, format, max_len, cap, alphabet } => {
            cmd_classical(game.as_deref(), format, max_len, cap, alphabet)
        }
        Command::Canon { word } => cmd_canon(&word),
        Command::ExportGraph { game, format, pair, out, alphabet } => {
            cmd_export_graph(game.as_deref(), format, pair.as_deref(), out.as_deref(), alphabet)
        }
        Command::Gen { players, alphabet, clauses, seed, format, out } => {
            cmd_gen(players, alphabet, clauses, seed, format, out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("pxor: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
