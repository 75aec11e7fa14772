use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tuplesim::invariant::full_bundle_feasible;
use tuplesim::selftest::{run_selftest, SelftestConfig};
use tuplesim::sylvester::DEFAULT_TRIALS;
use tuplesim::tuple::matrix_to_json;
use tuplesim::{
    build_l, echelon_invariant, embed_rectangular, find_similarity, gelfand_ponomarev,
    general_tuple_to_pair, randomized_similarity_test, rnf, tuple_to_pair, BundleComparison, Error,
    ExactMatrix, Field, MatrixTuple, RectTuple, ScreenVerdict,
};

const EXIT_DISTINCT: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;
const EXIT_SELFTEST: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "tuplesim",
    version,
    about = "Exact invariants for simultaneous similarity of matrix tuples"
)]
struct Cli {
    #[command(flatten)]
    job: JobConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct JobConfig {
    /// Base field: `q` or `fp:<prime>`. Text matrices are read over it; JSON
    /// inputs must agree with it.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<Field>,

    /// Highest level of the invariant to compute.
    #[arg(long, global = true)]
    r_max: Option<usize>,

    /// Trials for randomized searches and screens.
    #[arg(long, global = true, default_value_t = DEFAULT_TRIALS)]
    trials: usize,

    #[arg(long, global = true, env = "TUPLESIM_SEED", default_value_t = 0)]
    seed: u64,

    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TUPLESIM_THREADS")]
    threads: Option<usize>,

    /// Write the result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonical serialization and digest of the echelon invariant.
    Invariant { tuple: PathBuf },
    /// Decide whether two tuples are simultaneously similar.
    Similar {
        a: PathBuf,
        b: PathBuf,
        /// Run the randomized rank screen before the exact decision.
        #[arg(long)]
        screen: bool,
        /// Also search for an explicit similarity S.
        #[arg(long)]
        certificate: bool,
    },
    /// Dimension of the space of Z with Z A_i = B_i Z.
    Homdim { a: PathBuf, b: PathBuf },
    /// Rational normal form of a single matrix.
    Rnf { matrix: PathBuf },
    /// Reduced row echelon form and pivot set.
    Rref { matrix: PathBuf },
    /// Orbit-preserving embeddings.
    Reduce { kind: ReduceKind, input: PathBuf },
    /// Randomized identity suites.
    Selftest {
        /// Smaller instance counts.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReduceKind {
    Rect,
    Sixpair,
    General,
    Gp,
}

fn parse_field(s: &str) -> Result<Field, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

struct Failure {
    code: u8,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: EXIT_INPUT,
            body: json!({ "error": e.kind(), "message": e.to_string() }),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INPUT,
        body: json!({ "error": "Io", "message": format!("{}: {e}", path.display()) }),
    }
}

fn infeasible(n: usize, p: usize) -> Failure {
    Failure {
        code: EXIT_INFEASIBLE,
        body: json!({
            "error": "Infeasible",
            "message": format!("full invariant for V({n},{p}) is beyond desk scale; pass --r-max for a partial bundle"),
        }),
    }
}

struct Outcome {
    code: u8,
    body: Value,
}

impl Outcome {
    fn ok(body: Value) -> Self {
        Outcome { code: 0, body }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_failure(path, e))
}

fn load_tuple(path: &Path, job: &JobConfig) -> Result<MatrixTuple, Failure> {
    let t = MatrixTuple::parse_json(&read(path)?)?;
    check_field(t.field(), job)?;
    Ok(t)
}

fn load_json(path: &Path) -> Result<Value, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Parse(e.to_string()).into())
}

fn load_matrix(path: &Path, job: &JobConfig) -> Result<ExactMatrix, Failure> {
    Ok(ExactMatrix::parse_text(
        job.field.unwrap_or(Field::Rationals),
        &read(path)?,
    )?)
}

fn check_field(found: Field, job: &JobConfig) -> Result<(), Failure> {
    match job.field {
        Some(f) if f != found => Err(Error::FieldMismatch(f.id(), found.id()).into()),
        _ => Ok(()),
    }
}

fn certificate_json(s: &ExactMatrix, seed: u64, trial: usize) -> Value {
    json!({ "s": matrix_to_json(s), "seed": seed, "trial": trial })
}

fn bundle_allowed(t: &MatrixTuple, job: &JobConfig) -> bool {
    job.r_max.is_some() || full_bundle_feasible(t.n(), t.p())
}

fn invariant(path: &Path, job: &JobConfig) -> Result<Outcome, Failure> {
    let t = load_tuple(path, job)?;
    if !bundle_allowed(&t, job) {
        return Err(infeasible(t.n(), t.p()));
    }
    let b = echelon_invariant(&t, job.r_max)?;
    Ok(Outcome::ok(json!({
        "n": b.n(),
        "p": b.p(),
        "field": b.field().id(),
        "r_max": b.r_max(),
        "complete": b.is_complete(),
        "ranks": b.ranks(),
        "canonical": b.canonical(),
        "digest": b.digest(),
        "seed": job.seed,
    })))
}

fn similar(
    a: &Path,
    b: &Path,
    screen: bool,
    certificate: bool,
    job: &JobConfig,
) -> Result<Outcome, Failure> {
    let ta = load_tuple(a, job)?;
    let tb = load_tuple(b, job)?;
    ta.check_compatible(&tb)?;
    let mut out = json!({ "seed": job.seed });
    if screen {
        match randomized_similarity_test(&ta, &tb, job.trials, job.seed)? {
            ScreenVerdict::Distinct {
                seed,
                trial,
                witness,
                rank_a,
                rank_b,
            } => {
                out["verdict"] = json!("DISTINCT");
                out["method"] = json!("screen");
                out["screen"] = json!({
                    "seed": seed,
                    "trial": trial,
                    "witness": witness.to_json(),
                    "rank_a": rank_a,
                    "rank_b": rank_b,
                });
                return Ok(Outcome {
                    code: EXIT_DISTINCT,
                    body: out,
                });
            }
            ScreenVerdict::Consistent { seed, trials } => {
                out["screen"] = json!({ "result": "CONSISTENT", "seed": seed, "trials": trials });
            }
        }
    }
    let mut certified = false;
    if certificate {
        match find_similarity(&ta, &tb, job.trials, job.seed)? {
            Some(c) => {
                out["certificate"] = certificate_json(&c.s, c.seed, c.trial);
                certified = true;
            }
            None => out["certificate"] = Value::Null,
        }
    }
    if !bundle_allowed(&ta, job) {
        if certified {
            out["verdict"] = json!("SIMILAR");
            out["method"] = json!("certificate");
            return Ok(Outcome::ok(out));
        }
        return Err(infeasible(ta.n(), ta.p()));
    }
    let ba = echelon_invariant(&ta, job.r_max)?;
    let bb = echelon_invariant(&tb, job.r_max)?;
    out["digests"] = json!([ba.digest(), bb.digest()]);
    out["method"] = json!("bundle");
    let code = match ba.compare(&bb)? {
        BundleComparison::Equal => {
            out["verdict"] = json!("SIMILAR");
            0
        }
        BundleComparison::Distinct { r } => {
            out["verdict"] = json!("DISTINCT");
            out["level"] = json!(r);
            EXIT_DISTINCT
        }
        BundleComparison::Undecided { levels } if certified => {
            out["verdict"] = json!("SIMILAR");
            out["method"] = json!("certificate");
            out["levels"] = json!(levels);
            0
        }
        BundleComparison::Undecided { levels } => {
            out["verdict"] = json!("UNDECIDED");
            out["levels"] = json!(levels);
            EXIT_INFEASIBLE
        }
    };
    Ok(Outcome { code, body: out })
}

fn homdim(a: &Path, b: &Path, job: &JobConfig) -> Result<Outcome, Failure> {
    let ta = load_tuple(a, job)?;
    let tb = load_tuple(b, job)?;
    let rank = build_l(&ta, &tb)?.rank();
    let nn = ta.n() * ta.n();
    Ok(Outcome::ok(
        json!({ "hom_dim": nn - rank, "rank_l": rank, "n": ta.n(), "p": ta.p() }),
    ))
}

fn rnf_cmd(path: &Path, job: &JobConfig) -> Result<Outcome, Failure> {
    let a = load_matrix(path, job)?;
    let f = rnf(&a)?;
    let cert = f.certificate(&a, job.trials, job.seed)?;
    Ok(Outcome::ok(json!({
        "field": a.field().id(),
        "invariant_factors": f.polys.iter().map(|p| p.literal()).collect::<Vec<_>>(),
        "partition": f.partition,
        "matrix": matrix_to_json(&f.matrix),
        "certificate": cert.map(|c| certificate_json(&c.s, c.seed, c.trial)),
        "seed": job.seed,
    })))
}

fn rref_cmd(path: &Path, job: &JobConfig) -> Result<Outcome, Failure> {
    let m = load_matrix(path, job)?;
    let e = m.rref();
    Ok(Outcome::ok(json!({
        "field": m.field().id(),
        "rank": e.rank(),
        "pivots": e.pivot_set(),
        "rref": matrix_to_json(&e.to_matrix()),
    })))
}

fn reduce(kind: ReduceKind, path: &Path, job: &JobConfig) -> Result<Outcome, Failure> {
    let out = match kind {
        ReduceKind::Rect => {
            let w = RectTuple::from_json(&load_json(path)?)?;
            check_field(w.field(), job)?;
            embed_rectangular(&w)?
        }
        ReduceKind::Sixpair => tuple_to_pair(&load_tuple(path, job)?)?,
        ReduceKind::General => general_tuple_to_pair(&load_tuple(path, job)?)?,
        ReduceKind::Gp => {
            let t = load_tuple(path, job)?;
            if t.p() != 2 {
                return Err(Error::WrongTupleLength {
                    expected: 2,
                    actual: t.p(),
                }
                .into());
            }
            gelfand_ponomarev(t.get(0), t.get(1))?
        }
    };
    Ok(Outcome::ok(out.to_json()))
}

fn selftest(quick: bool, job: &JobConfig) -> Outcome {
    let mut cfg = SelftestConfig {
        seed: job.seed,
        ..SelftestConfig::default()
    };
    if quick {
        cfg.cauchy_binet = 50;
        cfg.mixed_product = 50;
        cfg.conjugation = 20;
        cfg.dimension = 20;
        cfg.relations = 20;
    }
    let reports = run_selftest(&cfg);
    let passed = reports.iter().all(|r| r.passed());
    Outcome {
        code: if passed { 0 } else { EXIT_SELFTEST },
        body: json!({ "passed": passed, "suites": reports, "seed": job.seed }),
    }
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let job = &cli.job;
    match &cli.command {
        Command::Invariant { tuple } => invariant(tuple, job),
        Command::Similar {
            a,
            b,
            screen,
            certificate,
        } => similar(a, b, *screen, *certificate, job),
        Command::Homdim { a, b } => homdim(a, b, job),
        Command::Rnf { matrix } => rnf_cmd(matrix, job),
        Command::Rref { matrix } => rref_cmd(matrix, job),
        Command::Reduce { kind, input } => reduce(*kind, input, job),
        Command::Selftest { quick } => Ok(selftest(*quick, job)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let message = e.to_string();
            let message = message
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            eprintln!("{}", json!({ "error": "Usage", "message": message }));
            return ExitCode::from(EXIT_INPUT);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    if let Some(threads) = cli.job.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!(
                "{}",
                json!({ "error": "Threads", "message": e.to_string() })
            );
            return ExitCode::from(EXIT_INPUT);
        }
    }
    match run(&cli) {
        Ok(out) => {
            let text = serde_json::to_string_pretty(&out.body).expect("serializable") + "\n";
            match &cli.job.output {
                Some(path) => {
                    if let Err(e) = fs::write(path, text) {
                        eprintln!("{}", io_failure(path, e).body);
                        return ExitCode::from(EXIT_INPUT);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("{}", f.body);
            ExitCode::from(f.code)
        }
    }
}
