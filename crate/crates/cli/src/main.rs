use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use agt_core::autostruct::{derive_shortlex_structure, AutLimits, AutomaticStructure, Derivation};
use agt_core::coxeter::CoxeterContext;
use agt_core::fsa::{boolean_op, BoolOp, Finiteness, DEFAULT_STATE_CAP};
use agt_core::groupcalc::{self, ConjugacyStatus};
use agt_core::io;
use agt_core::rewrite::{KbLimits, KbOutcome, RewriteSystem};
use agt_core::words::Word;
use agt_core::Error;

const EXIT_ABANDONED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

/// Shortlex automatic structures, Knuth-Bendix completion and Coxeter word acceptors.
#[derive(Parser)]
#[command(name = "agt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Limits {
    /// Largest number of rewriting rules
    #[arg(long, default_value_t = 10_000)]
    max_rules: usize,
    /// Longest rule left-hand side kept by completion
    #[arg(long, default_value_t = 50)]
    max_lhs_len: usize,
    /// Longest rule right-hand side kept by completion
    #[arg(long, default_value_t = 50)]
    max_rhs_len: usize,
    /// Time budget for one completion run
    #[arg(long, default_value_t = 600.0)]
    max_seconds: f64,
    /// Completion passes before giving up
    #[arg(long, default_value_t = 5)]
    max_passes: usize,
    /// Critical pairs without a new word difference before completion pauses
    #[arg(long, default_value_t = 500)]
    stability_window: usize,
    /// Largest automaton built by subset constructions [env: AGT_STATE_CAP]
    #[arg(long)]
    state_cap: Option<usize>,
}

impl Limits {
    fn state_cap(&self) -> Result<usize, Error> {
        if let Some(c) = self.state_cap {
            return Ok(c);
        }
        match std::env::var("AGT_STATE_CAP") {
            Ok(v) => v.trim().parse().map_err(|_| Error::usage(format!("AGT_STATE_CAP={v:?} is not a number"))),
            Err(_) => Ok(DEFAULT_STATE_CAP),
        }
    }

    fn kb(&self, stability: bool) -> KbLimits {
        KbLimits {
            max_rules: self.max_rules,
            max_lhs_len: self.max_lhs_len,
            max_rhs_len: self.max_rhs_len,
            max_seconds: self.max_seconds,
            stability_window: stability.then_some(self.stability_window),
        }
    }

    fn aut(&self) -> Result<AutLimits, Error> {
        let cap = self.state_cap()?;
        let mut l = AutLimits { kb: self.kb(true), max_passes: self.max_passes, state_cap: cap, ..AutLimits::default() };
        l.compose.state_cap = cap;
        Ok(l)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run Knuth-Bendix completion and print the rules
    Kb {
        presentation: PathBuf,
        /// Write the rules here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        limits: Limits,
    },
    /// Derive and verify a shortlex automatic structure, writing a bundle
    #[command(name = "autstructure")]
    AutStructure {
        presentation: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[command(flatten)]
        limits: Limits,
    },
    /// Normal forms of words
    Reduce { bundle: PathBuf, words: Vec<String> },
    /// Decide whether two words are equal in the group
    Wp { bundle: PathBuf, u: String, v: String },
    /// Order of the group
    Order { bundle: PathBuf },
    /// Growth series of the normal-form language
    Growth {
        bundle: PathBuf,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// List normal forms up to a length
    Enumerate {
        bundle: PathBuf,
        #[arg(long, default_value_t = 4)]
        max_len: usize,
    },
    /// Cone types seen in a ball of the Cayley graph
    #[command(name = "conetypes")]
    ConeTypes {
        bundle: PathBuf,
        #[arg(long, default_value_t = 8)]
        radius: usize,
        /// Write the quotient automaton here
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Search for a conjugating element
    Conj {
        bundle: PathBuf,
        u: String,
        v: String,
        #[arg(long, default_value_t = 6)]
        max_len: usize,
    },
    /// Coxeter group acceptors from a Coxeter matrix
    #[command(subcommand)]
    Cox(CoxCommand),
    /// Operations on automata files
    #[command(subcommand)]
    Fsa(FsaCommand),
}

#[derive(Subcommand)]
enum CoxCommand {
    /// Shortlex word acceptor
    Wa(CoxArgs),
    /// Acceptor of all geodesic words
    Geo(CoxArgs),
    /// The small roots
    Roots {
        matrix: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        cap: usize,
    },
}

#[derive(Args)]
struct CoxArgs {
    matrix: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = 100_000)]
    cap: usize,
}

#[derive(Subcommand)]
enum FsaCommand {
    /// Minimise
    Min { a: PathBuf },
    /// Intersection
    And { a: PathBuf, b: PathBuf },
    /// Union
    Or { a: PathBuf, b: PathBuf },
    /// Complement
    Not { a: PathBuf },
    /// Language equality
    Eq { a: PathBuf, b: PathBuf },
}

enum Outcome {
    Done,
    Abandoned,
    Resource,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Error> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Error::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::usage(format!("cannot write output: {e}"))),
                _ => Ok(()),
            }
        }
    }
}

fn word(s: &AutomaticStructure, text: &str) -> Result<Word, Error> {
    s.presentation.alphabet.parse_word(text)
}

fn load_fsa(path: &Path) -> Result<io::LoadedAutomaton, Error> {
    io::parse_automaton(&read(path)?)
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    match cli.command {
        Command::Kb { presentation, output, limits } => {
            let (p, warnings) = io::parse_presentation(&read(&presentation)?)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let mut sys = RewriteSystem::from_presentation(&p)?;
            let outcome = sys.knuth_bendix(&limits.kb(false));
            emit(output.as_deref(), &sys.dump())?;
            match outcome {
                KbOutcome::Complete => {
                    eprintln!("complete: {} rules", sys.rule_count());
                    Ok(Outcome::Done)
                }
                KbOutcome::Paused => Ok(Outcome::Abandoned),
                KbOutcome::LimitHit(which) => {
                    eprintln!("stopped at limit {which}: {} rules", sys.rule_count());
                    Ok(Outcome::Resource)
                }
            }
        }
        Command::AutStructure { presentation, output, limits } => {
            let (p, warnings) = io::parse_presentation(&read(&presentation)?)?;
            for w in warnings {
                eprintln!("warning: {w}");
            }
            match derive_shortlex_structure(&p, &limits.aut()?)? {
                Derivation::Verified(s) => {
                    io::write_bundle(&output, &s)?;
                    println!("verified: word acceptor {} states, k = {}", s.word_acceptor.state_count(), s.k);
                    Ok(Outcome::Done)
                }
                Derivation::Abandoned(report) => {
                    fs::create_dir_all(&output)
                        .map_err(|e| Error::usage(format!("cannot create {}: {e}", output.display())))?;
                    let mut t = report.transcript.join("\n");
                    t.push('\n');
                    fs::write(output.join("transcript.txt"), t).map_err(|e| Error::usage(e.to_string()))?;
                    eprintln!("abandoned: {}", report.reason);
                    Ok(if report.resource { Outcome::Resource } else { Outcome::Abandoned })
                }
            }
        }
        Command::Reduce { bundle, words } => {
            let s = io::read_bundle(&bundle)?;
            for w in words {
                let nf = groupcalc::normal_form(&s, &word(&s, &w)?)?;
                println!("{}", s.presentation.alphabet.display_word(&nf));
            }
            Ok(Outcome::Done)
        }
        Command::Wp { bundle, u, v } => {
            let s = io::read_bundle(&bundle)?;
            println!("{}", groupcalc::word_problem(&s, &word(&s, &u)?, &word(&s, &v)?)?);
            Ok(Outcome::Done)
        }
        Command::Order { bundle } => {
            let s = io::read_bundle(&bundle)?;
            match groupcalc::group_order(&s) {
                Finiteness::Finite(n) => println!("finite {n}"),
                Finiteness::Infinite => println!("infinite"),
            }
            Ok(Outcome::Done)
        }
        Command::Growth { bundle, terms } => {
            let s = io::read_bundle(&bundle)?;
            let g = groupcalc::growth(&s, terms);
            println!("{}", g.format_fraction());
            let c: Vec<String> = g.coefficients.iter().map(|c| c.to_string()).collect();
            println!("{}", c.join(" "));
            Ok(Outcome::Done)
        }
        Command::Enumerate { bundle, max_len } => {
            let s = io::read_bundle(&bundle)?;
            let mut text = String::new();
            for w in groupcalc::enumerate(&s, max_len) {
                text.push_str(&s.presentation.alphabet.display_word(&w));
                text.push('\n');
            }
            emit(None, &text)?;
            Ok(Outcome::Done)
        }
        Command::ConeTypes { bundle, radius, output } => {
            let s = io::read_bundle(&bundle)?;
            let c = groupcalc::cone_types(&s, radius)?;
            println!("{} cone types (approximate, radius {}, depth {})", c.count, c.radius, c.depth);
            if let Some(out) = output {
                emit(Some(&out), &io::dfa_to_json(&c.automaton, s.presentation.alphabet.names()))?;
            }
            Ok(Outcome::Done)
        }
        Command::Conj { bundle, u, v, max_len } => {
            let s = io::read_bundle(&bundle)?;
            let a = &s.presentation.alphabet;
            let ans = groupcalc::conjugacy_search(&s, &word(&s, &u)?, &word(&s, &v)?, max_len)?;
            match ans.status {
                ConjugacyStatus::Conjugate(g) => println!("conjugate {}", a.display_word(&g)),
                ConjugacyStatus::NotConjugateWithin(b) => println!("not conjugate (complete search to length {b})"),
                ConjugacyStatus::Unknown(b) => println!("unknown (searched to length {b})"),
            }
            Ok(Outcome::Done)
        }
        Command::Cox(cmd) => {
            let (args, geodesic) = match cmd {
                CoxCommand::Wa(a) => (a, false),
                CoxCommand::Geo(a) => (a, true),
                CoxCommand::Roots { matrix, cap } => {
                    let ctx = CoxeterContext::new(io::parse_coxeter(&read(&matrix)?)?);
                    let roots = ctx.small_roots(cap)?;
                    let mut text = String::new();
                    for r in &roots {
                        let xs: Vec<String> = ctx.root_to_f64(r).iter().map(|x| format!("{:.6}", x + 0.0)).collect();
                        text.push_str(&xs.join(" "));
                        text.push('\n');
                    }
                    emit(None, &text)?;
                    eprintln!("{} small roots", roots.len());
                    return Ok(Outcome::Done);
                }
            };
            let m = io::parse_coxeter(&read(&args.matrix)?)?;
            let names = m.alphabet().names().to_vec();
            let ctx = CoxeterContext::new(m);
            let d = if geodesic { ctx.geodesic_acceptor(args.cap)? } else { ctx.shortlex_acceptor(args.cap)? };
            let summary = match d.language_is_finite() {
                Finiteness::Finite(n) => format!("{n} accepted words, {} states", d.state_count()),
                Finiteness::Infinite => format!("infinitely many accepted words, {} states", d.state_count()),
            };
            let json = io::dfa_to_json(&d, &names);
            match args.output {
                Some(p) => {
                    emit(Some(&p), &json)?;
                    println!("{summary}");
                }
                None => {
                    emit(None, &json)?;
                    eprintln!("{summary}");
                }
            }
            Ok(Outcome::Done)
        }
        Command::Fsa(cmd) => {
            let (op, a, b) = match cmd {
                FsaCommand::Eq { a, b } => {
                    let (x, y) = (load_fsa(&a)?, load_fsa(&b)?);
                    if x.alphabet != y.alphabet || x.pair != y.pair {
                        return Err(Error::usage("automata have different alphabets"));
                    }
                    println!("{}", x.dfa.equivalent(&y.dfa));
                    return Ok(Outcome::Done);
                }
                FsaCommand::Min { a } => {
                    let x = load_fsa(&a)?;
                    let m = x.dfa.minimize();
                    let json = if x.pair {
                        io::pair_dfa_to_json(&agt_core::pairfsa::PairDfa::new(x.alphabet.len(), m)?, &x.alphabet)
                    } else {
                        io::dfa_to_json(&m, &x.alphabet)
                    };
                    emit(None, &json)?;
                    return Ok(Outcome::Done);
                }
                FsaCommand::Not { a } => (BoolOp::Not, a, None),
                FsaCommand::And { a, b } => (BoolOp::And, a, Some(b)),
                FsaCommand::Or { a, b } => (BoolOp::Or, a, Some(b)),
            };
            let x = load_fsa(&a)?;
            let y = b.map(|b| load_fsa(&b)).transpose()?;
            if let Some(y) = &y {
                if x.alphabet != y.alphabet || x.pair != y.pair {
                    return Err(Error::usage("automata have different alphabets"));
                }
            }
            if x.pair && op == BoolOp::Not {
                return Err(Error::usage("complement of a pair automaton is not supported"));
            }
            let r = boolean_op(op, &x.dfa, y.as_ref().map(|y| &y.dfa))?;
            let json = if x.pair {
                io::pair_dfa_to_json(&agt_core::pairfsa::PairDfa::new(x.alphabet.len(), r)?, &x.alphabet)
            } else {
                io::dfa_to_json(&r, &x.alphabet)
            };
            emit(None, &json)?;
            Ok(Outcome::Done)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::Abandoned) => ExitCode::from(EXIT_ABANDONED),
        Ok(Outcome::Resource) => ExitCode::from(EXIT_RESOURCE),
        Err(e) => {
            eprintln!("agt: {e}");
            ExitCode::from(match e {
                Error::Resource { .. } => EXIT_RESOURCE,
                Error::Integrity(_) => EXIT_ABANDONED,
                Error::Usage(_) | Error::Parse { .. } => EXIT_USAGE,
            })
        }
    }
}
