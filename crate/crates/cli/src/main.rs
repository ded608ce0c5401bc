use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use periodica::bounds::{deviation_table, growth_csv, growth_table, growth_text, DEVIATION_SECOND};
use periodica::forbidden::reduced_system;
use periodica::rauzy::build_graph;
use periodica::scheme::{parallel_drive, sequential_drive, RandomSchedule};
use periodica::search::{multi_letter_survey, rows_to_csv, verify_theorem, SurveyRow};
use periodica::words::{Alphabet, Necklace};
use periodica::Error;

#[derive(Parser)]
#[command(name = "periodica", version, about = "Forbidden-word systems of periodic words")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the reduced system of restrictions defining a periodic word.
    Forbid {
        word: String,
        /// Alphabet size; defaults to the smallest one covering the word.
        #[arg(long)]
        alphabet: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Check phi_c >= n for every necklace up to a period.
    Verify {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        n_max: u64,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, env = "PERIODICA_JOBS")]
        jobs: Option<usize>,
        /// JSON lines instead of CSV.
        #[arg(long)]
        json: bool,
    },
    /// Print the k-th Rauzy graph of a periodic word.
    Graph {
        word: String,
        k: usize,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        alphabet: Option<usize>,
    },
    /// Regenerate the growth (1), deviation (2) or scaled growth (3) table.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        which: u8,
        #[arg(long)]
        csv: bool,
    },
    /// Run the fork-collapse process on a word and print its event log.
    Drive {
        word: String,
        #[arg(long, value_enum, default_value_t = Mode::Parallel)]
        mode: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        alphabet: Option<usize>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Parallel,
    Sequential,
}

enum Failure {
    Usage(String),
    Falsified(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Falsified { .. } => Failure::Falsified(e.to_string()),
            e => Failure::Usage(e.to_string()),
        }
    }
}

fn parse_word(text: &str, alphabet: Option<usize>) -> Result<Necklace, Failure> {
    let size = match alphabet {
        Some(size) => size,
        None => {
            let top = text.chars().map(|c| c as u32).max().ok_or(Error::EmptyWord)?;
            ((top.saturating_sub('a' as u32)) as usize + 1).max(2)
        }
    };
    let alphabet = Alphabet::new(size)?;
    Ok(Necklace::parse(alphabet, text)?)
}

fn jobs_or_default(jobs: Option<usize>) -> usize {
    jobs.filter(|&j| j > 0).unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn print_rows(rows: &[SurveyRow], json: bool) {
    if json {
        for r in rows {
            println!("{}", r.to_json_line());
        }
    } else {
        print!("{}", rows_to_csv(rows));
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Forbid { word, alphabet, json } => {
            let w = parse_word(&word, alphabet)?;
            let s = reduced_system(&w);
            if json {
                println!("{}", serde_json::to_string(&s.to_json()).expect("system serializes"));
            } else {
                print!("{}", s.to_text());
            }
        }
        Command::Verify { n_max, alphabet, jobs, json } => {
            let jobs = jobs_or_default(jobs);
            let n_max = n_max as usize;
            let progress =
                |r: &SurveyRow| eprintln!("n={} done: {} necklaces, min c {}", r.n, r.count, r.min_c);
            if alphabet == 2 {
                let rows = verify_theorem(n_max, jobs, progress)?;
                print_rows(&rows, json);
            } else {
                let survey = multi_letter_survey(alphabet, n_max, jobs)?;
                print_rows(&survey.rows, json);
                for case in &survey.soft_bound_exceptions {
                    eprintln!("soft bound exceeded: {} (n={}, c={})", case.word, case.n, case.reduced);
                }
                if let Some(case) = survey.disagreements.first() {
                    return Err(Failure::Falsified(format!("restriction counts disagree for {}", case.word)));
                }
            }
        }
        Command::Graph { word, k, dot, alphabet } => {
            let w = parse_word(&word, alphabet)?;
            let g = build_graph(&w, k);
            if dot {
                print!("{}", g.to_dot());
            } else {
                let a = g.alphabet();
                println!("vertices: {}", g.vertices().len());
                println!("edges: {}", g.size());
                for e in g.edges() {
                    println!("{}", a.render(e));
                }
            }
        }
        Command::Tables { which, csv } => match which {
            2 => {
                let t = deviation_table(8, 8);
                print!("{}", if csv { t.to_csv() } else { t.to_text() });
            }
            _ => {
                let multiplier = if which == 1 { 1.0 } else { DEVIATION_SECOND };
                let t = growth_table(10, 6, multiplier);
                print!("{}", if csv { growth_csv(&t) } else { growth_text(&t) });
            }
        },
        Command::Drive { word, mode, seed, alphabet } => {
            let w = parse_word(&word, alphabet)?;
            let outcome = match mode {
                Mode::Parallel => parallel_drive(&w)?,
                Mode::Sequential => sequential_drive(&w, &mut RandomSchedule::new(seed))?,
            };
            let doc = serde_json::json!({
                "mode": match mode { Mode::Parallel => "parallel", Mode::Sequential => "sequential" },
                "summary": {
                    "n": outcome.final_cycle_length,
                    "crossroads": outcome.crossroads_total,
                    "restrictions": outcome.restrictions_total,
                },
                "outcome": outcome,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("outcome serializes"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Falsified(msg)) => {
            eprintln!("falsified: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
