//! `matroid-kit`: load matroids and matrices, run kernel queries and
//! verification suites.
//!
//! Exit codes: 0 success or affirmative answer, 1 negative answer, 2 usage,
//! parse or kernel error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matroid_kit::connectivity::{is_3connected, is_connected};
use matroid_kit::fragility::{gadget_classify, GadgetOutcome, DEFAULT_QUANTIFIER_BUDGET};
use matroid_kit::io::{matroid_to_json, parse_context, parse_matroid, parse_pmatrix};
use matroid_kit::matroid::{has_minor, ElementClassification};
use matroid_kit::pmatrix::{incrimination_status, IncriminationStatus};
use matroid_kit::structure::{cosegments, delta_y, fans, segments, wye_delta};
use matroid_kit::verify::{run_suite, SuiteConfig};
use matroid_kit::{Label, Matroid};

const BUDGET_VAR: &str = "MATROID_KIT_BUDGET";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
}

#[derive(Parser)]
#[command(name = "matroid-kit", version, about = "Exact matroid toolkit")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Human, global = true)]
    format: Format,
    /// Worker threads for suites; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Rank, size, connectivity, triangles, triads, fans and segments.
    Info { matroid: PathBuf },
    /// Pivots a matrix on the entry in row `x`, column `y`.
    Pivot {
        matrix: PathBuf,
        #[arg(long)]
        x: Label,
        #[arg(long)]
        y: Label,
    },
    /// Exit 0 if every subdeterminant lies in the partial field.
    CheckPmatrix { matrix: PathBuf },
    /// The matroid `M[I|A]` of a matrix, as a basis list.
    MatroidFrom { matrix: PathBuf },
    /// Exit 0 if the matrix represents the matroid, 1 with the least
    /// incriminating set otherwise.
    Incriminate { matroid: PathBuf, matrix: PathBuf },
    /// Exit 0 with a witness if the second matroid is a minor of the first.
    Minor { matroid: PathBuf, minor: PathBuf },
    /// Classifies elements against target minors; exit 0 if fragile.
    Fragility {
        matroid: PathBuf,
        #[arg(long, required = true, num_args = 1..)]
        against: Vec<PathBuf>,
    },
    /// Classifies the gadget of a context file; exit 1 if a hypothesis fails.
    Gadget { context: PathBuf },
    /// Delta-wye exchange on a triangle, or wye-delta on a triad with
    /// `--wye`.
    Deltay {
        matroid: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        triple: Vec<Label>,
        #[arg(long)]
        wye: bool,
    },
    /// Runs a verification suite and prints one JSON report per line.
    Verify {
        #[arg(long, default_value = "core")]
        suite: String,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Random instances added to the catalog.
        #[arg(long, default_value_t = 200)]
        random: usize,
        /// Also write the report to this file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

struct Answer {
    json: Value,
    human: String,
    code: u8,
}

impl Answer {
    fn new(json: Value, human: impl Into<String>, ok: bool) -> Self {
        Answer { json, human: human.into(), code: if ok { 0 } else { 1 } }
    }
}

type Run = Result<Answer, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_matroid(path: &Path) -> Result<Matroid, String> {
    parse_matroid(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_matrix(path: &Path) -> Result<matroid_kit::PMatrix, String> {
    parse_pmatrix(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn budget() -> Result<u64, String> {
    match std::env::var(BUDGET_VAR) {
        Ok(v) => match v.parse::<u64>() {
            Ok(b) if b > 0 => Ok(b),
            _ => Err(format!("{BUDGET_VAR} must be a positive integer, got `{v}`")),
        },
        Err(_) => Ok(DEFAULT_QUANTIFIER_BUDGET),
    }
}

fn info(path: &Path) -> Run {
    let m = load_matroid(path)?;
    let fan_list: Vec<Vec<Label>> = fans(&m).into_iter().map(|f| f.elements).collect();
    let j = json!({
        "elements": m.len(),
        "rank": m.rank(),
        "connected": is_connected(&m),
        "three_connected": is_3connected(&m),
        "triangles": m.triangles(),
        "triads": m.triads(),
        "fans": fan_list,
        "segments": segments(&m),
        "cosegments": cosegments(&m),
    });
    let human = format!(
        "elements: {}\nrank: {}\nconnected: {}\n3-connected: {}\ntriangles: {:?}\ntriads: {:?}\nfans: {:?}\nsegments: {:?}\ncosegments: {:?}",
        m.len(),
        m.rank(),
        is_connected(&m),
        is_3connected(&m),
        m.triangles(),
        m.triads(),
        fan_list,
        segments(&m),
        cosegments(&m)
    );
    Ok(Answer::new(j, human, true))
}

fn pivot(path: &Path, x: Label, y: Label) -> Run {
    let a = load_matrix(path)?;
    let p = a.pivot(x, y).map_err(|e| e.to_string())?;
    let j = serde_json::to_value(p.to_json()).expect("serializable");
    Ok(Answer::new(j.clone(), j.to_string(), true))
}

fn check_pmatrix(path: &Path) -> Run {
    let a = load_matrix(path)?;
    match a.p_matrix_violation().map_err(|e| e.to_string())? {
        None => Ok(Answer::new(json!({ "p_matrix": true }), "P-matrix", true)),
        Some(z) => Ok(Answer::new(json!({ "p_matrix": false, "violation": z }), format!("not a P-matrix: {z:?}"), false)),
    }
}

fn matroid_from(path: &Path) -> Run {
    let m = load_matrix(path)?.matroid().map_err(|e| e.to_string())?;
    let j = matroid_to_json(&m);
    Ok(Answer::new(j.clone(), j.to_string(), true))
}

fn incriminate(matroid: &Path, matrix: &Path) -> Run {
    let m = load_matroid(matroid)?;
    let a = load_matrix(matrix)?;
    let status = incrimination_status(&m, &a).map_err(|e| e.to_string())?;
    let j = serde_json::to_value(&status).expect("serializable");
    Ok(match status {
        IncriminationStatus::Represents => Answer::new(j, "REPRESENTS", true),
        IncriminationStatus::Incriminated(w) => {
            Answer::new(j, format!("INCRIMINATED by {:?} ({:?})", w.z, w.condition), false)
        }
    })
}

fn minor(matroid: &Path, target: &Path) -> Run {
    let m = load_matroid(matroid)?;
    let n = load_matroid(target)?;
    Ok(match has_minor(&m, &n) {
        Some(w) => {
            let human = format!("minor: contract {:?}, delete {:?}", w.contract, w.delete);
            Answer::new(json!({ "minor": true, "witness": w }), human, true)
        }
        None => Answer::new(json!({ "minor": false }), "no minor", false),
    })
}

fn fragility(matroid: &Path, against: &[PathBuf]) -> Run {
    let m = load_matroid(matroid)?;
    let targets = against.iter().map(|p| load_matroid(p)).collect::<Result<Vec<_>, _>>()?;
    if !matroid_kit::matroid::has_minor_of_any(&m, &targets) {
        return Ok(Answer::new(json!({ "has_minor": false }), "no target minor", false));
    }
    let cls = ElementClassification::compute(&m, &targets);
    let fragile = cls.has_no_flexible();
    let j = json!({
        "has_minor": true,
        "fragile": fragile,
        "essential": cls.essential(),
        "flexible": cls.flexible(),
        "deletable": cls.deletable(),
        "contractible": cls.contractible(),
    });
    let human = format!(
        "{}\nessential: {:?}\nflexible: {:?}\ndeletable: {:?}\ncontractible: {:?}",
        if fragile { "fragile" } else { "not fragile" },
        cls.essential(),
        cls.flexible(),
        cls.deletable(),
        cls.contractible()
    );
    Ok(Answer::new(j, human, fragile))
}

fn gadget(path: &Path) -> Run {
    let ctx = parse_context(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let outcome = gadget_classify(&ctx).map_err(|e| e.to_string())?;
    let j = serde_json::to_value(&outcome).expect("serializable");
    Ok(match &outcome {
        GadgetOutcome::Gadget(g) => {
            let human = format!(
                "Type {:?}: x={} y={} u={} z={:?} w={:?} blocker={} fully_blocks={}",
                g.kind, g.x, g.y, g.u, g.z, g.w, g.blocker, g.fully_blocks
            );
            Answer::new(j, human, true)
        }
        GadgetOutcome::Fragile => Answer::new(j, "M \\ a, b is fragile; no gadget", true),
        GadgetOutcome::HypothesesUnmet { clause, detail } => {
            Answer::new(j, format!("HYPOTHESES_UNMET {clause}: {detail}"), false)
        }
    })
}

fn deltay(path: &Path, triple: &[Label], wye: bool) -> Run {
    let m = load_matroid(path)?;
    let t: [Label; 3] = triple.try_into().map_err(|_| "--triple takes three labels".to_string())?;
    let out = if wye { wye_delta(&m, t) } else { delta_y(&m, t) }.map_err(|e| e.to_string())?;
    let j = matroid_to_json(&out);
    Ok(Answer::new(j.clone(), j.to_string(), true))
}

fn verify(suite: &str, max_n: usize, seed: u64, random: usize, output: Option<&Path>, format: Format) -> Run {
    let mut config = SuiteConfig::new(suite, max_n, seed);
    config.random = random;
    config.budget = budget()?;
    let report = run_suite(&config).map_err(|e| e.to_string())?;
    let lines = report.to_json_lines();
    if let Some(p) = output {
        fs::write(p, &lines).map_err(|e| format!("{}: {e}", p.display()))?;
    }
    let c = report.counts();
    let human = match format {
        Format::Json => lines.trim_end().to_string(),
        Format::Human => {
            let mut h = format!("suite {suite} (max-n {max_n}, seed {seed})\n");
            for r in report.reports.iter().filter(|r| !r.outcome.is_pass()) {
                h.push_str(&r.to_json_line());
                h.push('\n');
            }
            h.push_str(&format!(
                "pass {} fail {} hypotheses-unmet {} undecided {} relaxed-fail {}",
                c.pass, c.fail, c.hypotheses_unmet, c.undecided, c.relaxed_fail
            ));
            h
        }
    };
    Ok(Answer { json: Value::Null, human, code: if report.has_fail() { 1 } else { 0 } })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Info { matroid } => info(matroid),
        Command::Pivot { matrix, x, y } => pivot(matrix, *x, *y),
        Command::CheckPmatrix { matrix } => check_pmatrix(matrix),
        Command::MatroidFrom { matrix } => matroid_from(matrix),
        Command::Incriminate { matroid, matrix } => incriminate(matroid, matrix),
        Command::Minor { matroid, minor: n } => minor(matroid, n),
        Command::Fragility { matroid, against } => fragility(matroid, against),
        Command::Gadget { context } => gadget(context),
        Command::Deltay { matroid, triple, wye } => deltay(matroid, triple, *wye),
        Command::Verify { suite, max_n, seed, random, output } => {
            verify(suite, *max_n, *seed, *random, output.as_deref(), cli.format)
        }
    };
    match result {
        Ok(answer) => {
            // verify renders its own output in both formats
            let text = if answer.json.is_null() || cli.format == Format::Human {
                answer.human
            } else {
                answer.json.to_string()
            };
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::from(answer.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
