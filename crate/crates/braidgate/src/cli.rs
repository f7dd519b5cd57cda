//! The `braidgate` command line.
//!
//! Exit codes: 0 on success, 2 on domain errors (unparseable input, bad
//! parameters, usage mistakes), 3 on certificate failures (a compile or
//! verify that cannot meet its tolerance, a family file whose digest or
//! relator certificate does not hold).

use std::fs;
use std::path::PathBuf;

use braidgate_core::{
    all_pairs, brute_force_compile, certify, garside_normal_form, gate_set_from_family,
    phase_of_word, solovay_kitaev, transport, twist_table, words_equal, CompileResult,
    CompileTarget, Error as CoreError, RegularReal, SkParams,
};
use clap::{Args, Parser, Subcommand};

use crate::files::{self, FamilyFileError};
use crate::format::{self, ParseError, ParsedMatrix};
use crate::parallel;

#[derive(Parser)]
#[command(
    name = "braidgate",
    about = "Exact braid arithmetic, monodromy transport, and certified compilation",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact real constants rendered to decimal.
    Real {
        #[command(subcommand)]
        what: RealCmd,
    },
    /// The braid-group word problem: normal forms, permutations, equality.
    Braid {
        #[command(subcommand)]
        what: BraidCmd,
    },
    /// Abelian twist phase of a pure braid word.
    Phase {
        /// Twist parameters, `N=2;n=1;level=4;weights=1,1` or `ising:N` / `fibonacci:N`.
        #[arg(long)]
        params: String,
        /// Pure braid word on the N+n configuration strands, e.g. `+(1,2);-(2,3)`.
        #[arg(long)]
        pure_word: String,
    },
    /// Build and verify family files.
    Rep {
        #[command(subcommand)]
        what: RepCmd,
    },
    /// Monodromy transport of a pure braid word over a family.
    Transport {
        #[command(flatten)]
        family: FamilyArg,
        /// Pure braid word on the family's base strands.
        #[arg(long)]
        pure_word: String,
    },
    /// Compile a target matrix into a braid word over a family's gates.
    Compile {
        #[command(flatten)]
        family: FamilyArg,
        /// Matrix file holding the compile target.
        #[arg(long)]
        target: PathBuf,
        /// Longest word the brute-force search may return.
        #[arg(long)]
        max_len: usize,
        /// Tolerance: certification below it counts as success.
        #[arg(long)]
        eps: String,
        /// Solovay-Kitaev recursion depth; omit for pure brute force.
        #[arg(long)]
        sk_depth: Option<usize>,
        /// Brute-force net depth feeding the Solovay-Kitaev recursion.
        #[arg(long, default_value_t = 4)]
        sk_base: usize,
        /// Worker threads for the brute-force search.
        #[arg(long, default_value_t = 1)]
        workers: usize,
        /// Strand pairs to use as gates, e.g. `1,2;2,3`; all pairs if omitted.
        #[arg(long)]
        pairs: Option<String>,
    },
    /// Re-certify a stored word against a target.
    Verify {
        #[command(flatten)]
        family: FamilyArg,
        /// File of whitespace-separated gate labels.
        #[arg(long)]
        word: PathBuf,
        /// Matrix file holding the target.
        #[arg(long)]
        target: PathBuf,
        /// Tolerance the certificate must meet.
        #[arg(long)]
        eps: String,
    },
}

#[derive(Subcommand)]
enum RealCmd {
    /// Print pi to within the requested precision.
    Pi {
        /// Precision as a rational, e.g. `1/100000000`.
        #[arg(long)]
        prec: String,
    },
}

#[derive(Subcommand)]
enum BraidCmd {
    /// Left-greedy Garside normal form of a word.
    Normalize {
        #[arg(long)]
        strands: usize,
        /// Comma-separated Artin letters, e.g. `1,2,-1`.
        #[arg(long)]
        word: String,
    },
    /// The permutation a word induces on strand positions.
    Perm {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        word: String,
    },
    /// Decide whether two words are the same group element.
    Equal {
        #[arg(long)]
        strands: usize,
        #[arg(long)]
        word: String,
        #[arg(long)]
        word2: String,
    },
}

#[derive(Subcommand)]
enum RepCmd {
    /// Build the verified family a parameter set names and write it out.
    Build {
        #[arg(long)]
        params: String,
        /// Output path for the family file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-check a family file: digest first, then every relator.
    Verify {
        /// Family file to check.
        file: PathBuf,
    },
}

#[derive(Args)]
struct FamilyArg {
    /// Family file produced by `rep build`.
    #[arg(long)]
    family: PathBuf,
}

/// A command that failed after parsing: either bad input (exit 2) or a
/// certificate that does not hold (exit 3).
enum Failure {
    Domain(String),
    Certificate(String),
}

impl From<ParseError> for Failure {
    fn from(e: ParseError) -> Failure {
        Failure::Domain(e.to_string())
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Failure {
        Failure::Domain(e.to_string())
    }
}

impl From<FamilyFileError> for Failure {
    fn from(e: FamilyFileError) -> Failure {
        if e.is_certificate_failure() {
            Failure::Certificate(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

/// Entry point behind `main`; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders help/version as "errors" too; those exit 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Certificate(msg)) => {
            eprintln!("certificate failure: {msg}");
            3
        }
    }
}

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", path.display())))
}

fn load_family(arg: &FamilyArg) -> Result<braidgate_core::CohomologyFamily, Failure> {
    Ok(files::read_family(&read_text(&arg.family)?)?)
}

fn positive_rational(s: &str) -> Result<braidgate_core::Rational, Failure> {
    let r = format::parse_rational(s)?;
    if r <= braidgate_core::Rational::from_integer(0.into()) {
        return Err(Failure::Domain(format!("{s} is not a positive rational")));
    }
    Ok(r)
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Real { what: RealCmd::Pi { prec } } => {
            let prec = positive_rational(&prec)?;
            let half = &prec * &braidgate_core::Rational::new(1.into(), 2.into());
            let approx = RegularReal::pi().real_approx(&half)?;
            println!("{}", format::render_decimal(&approx, &prec));
            Ok(())
        }
        Cmd::Braid { what } => braid_cmd(what),
        Cmd::Phase { params, pure_word } => {
            let params = format::parse_twist_params(&params)?;
            let table = twist_table(&params);
            let word = format::parse_pure_word(params.strand_count(), &pure_word)?;
            let phase = phase_of_word(&table, &word)?;
            println!("{}", phase.exponent());
            Ok(())
        }
        Cmd::Rep { what } => rep_cmd(what),
        Cmd::Transport { family, pure_word } => {
            let family = load_family(&family)?;
            let word = format::parse_pure_word(family.strands(), &pure_word)?;
            let result = transport(&family, &word)?;
            print!("{}", format::render_matrix(result.matrix())?);
            Ok(())
        }
        Cmd::Compile { family, target, max_len, eps, sk_depth, sk_base, workers, pairs } => {
            let family = load_family(&family)?;
            let eps = positive_rational(&eps)?;
            let pairs = match pairs {
                Some(p) => format::parse_pairs(&p)?,
                None => all_pairs(family.strands()),
            };
            let gates = gate_set_from_family(&family, &pairs)?;
            let target = compile_target(&read_text(&target)?)?;
            let out = match sk_depth {
                Some(depth) => {
                    let params = SkParams { base_net_depth: sk_base, recursion_depth: depth };
                    solovay_kitaev(&gates, &target, &params, &eps)?
                }
                None if workers == 1 => brute_force_compile(&gates, &target, max_len, &eps)?,
                None => parallel::compile_parallel(&gates, &target, max_len, &eps, workers)?,
            };
            report(&out);
            if out.certified_error <= eps {
                Ok(())
            } else {
                Err(Failure::Certificate(format!(
                    "best word certifies at {}, above the tolerance {}",
                    out.certified_error, eps
                )))
            }
        }
        Cmd::Verify { family, word, target, eps } => {
            let family = load_family(&family)?;
            let eps = positive_rational(&eps)?;
            let gates = gate_set_from_family(&family, &all_pairs(family.strands()))?;
            let labels = format::parse_labels(&read_text(&word)?);
            let target = compile_target(&read_text(&target)?)?;
            let bound = certify(&gates, &labels, &target, &eps)?;
            println!("certified_error={bound}");
            if bound <= eps {
                Ok(())
            } else {
                Err(Failure::Certificate(format!(
                    "word certifies at {bound}, above the tolerance {eps}"
                )))
            }
        }
    }
}

fn braid_cmd(cmd: BraidCmd) -> Result<(), Failure> {
    match cmd {
        BraidCmd::Normalize { strands, word } => {
            let word = format::parse_braid_word(strands, &word)?;
            let nf = garside_normal_form(&word);
            println!("delta={}", nf.delta_power());
            println!("factors={}", nf.factors().len());
            for factor in nf.factor_words() {
                println!("{factor}");
            }
            Ok(())
        }
        BraidCmd::Perm { strands, word } => {
            let word = format::parse_braid_word(strands, &word)?;
            println!("{}", word.perm());
            Ok(())
        }
        BraidCmd::Equal { strands, word, word2 } => {
            let u = format::parse_braid_word(strands, &word)?;
            let v = format::parse_braid_word(strands, &word2)?;
            println!("{}", words_equal(&u, &v)?);
            Ok(())
        }
    }
}

fn rep_cmd(cmd: RepCmd) -> Result<(), Failure> {
    match cmd {
        RepCmd::Build { params, out } => {
            let params = format::parse_twist_params(&params)?;
            let family = braidgate_core::family_from_params(&params)?;
            let text = files::render_family(&family)?;
            fs::write(&out, text)
                .map_err(|e| Failure::Domain(format!("cannot write {}: {e}", out.display())))?;
            println!("wrote {}: {}", out.display(), family.certificate().summary());
            Ok(())
        }
        RepCmd::Verify { file } => {
            let family = files::read_family(&read_text(&file)?)?;
            println!("ok: {}", family.certificate().summary());
            Ok(())
        }
    }
}

fn compile_target(text: &str) -> Result<CompileTarget, Failure> {
    Ok(match format::parse_matrix(text)? {
        ParsedMatrix::Cyclo(m) => CompileTarget::exact(m)?,
        ParsedMatrix::Complex(m) => CompileTarget::numeric(m)?,
    })
}

fn report(out: &CompileResult) {
    println!("word={}", out.word.join(","));
    println!("certified_error={}", out.certified_error);
    println!("nodes={}", out.nodes);
    println!("depth={}", out.depth);
}
