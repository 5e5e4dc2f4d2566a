//! `edl`: construct extremal digraphs, compute their invariants, run
//! exhaustive searches and verification checks.
//!
//! Exit status: 0 on success (and on a CONFIRMED or inconclusive check),
//! 2 when a check is REFUTED, 1 on usage or runtime errors.

use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use edl::families::{closed_form, BoundName, BoundParams, FamilySpec, FAMILY_NAMES};
use edl::io::{parse, serialize, Format};
use edl::search::{classify_extremal, enumerate, BipartiteConstraint, Constraints, Mode, Objective, SearchTask};
use edl::verify::{list_checks, verify_theorem, CheckId, CheckParams, Depth, TheoremCheck, Verdict, SUMMARY_HEADER};
use edl::{metric_summary, DenseDigraph};

#[derive(Parser)]
#[command(name = "edl", version, about = "Extremal digraphs of given order and radius")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a member of a named family.
    Construct(ConstructArgs),
    /// Distance and degree invariants of a digraph file.
    Metrics(MetricsArgs),
    /// Evaluate a closed-form size bound.
    Formula(FormulaArgs),
    /// Exhaustive search for extremal digraphs.
    Search(SearchArgs),
    /// Run a verification check and store its report.
    Verify(VerifyArgs),
    /// Group digraph files into isomorphism classes.
    IsoClassify(IsoArgs),
    /// Convert between adm, json and dot.
    Convert(ConvertArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Adm,
    Dot,
}

#[derive(Clone, Copy, ValueEnum)]
enum InFormat {
    Adm,
    Json,
}

impl From<InFormat> for Format {
    fn from(f: InFormat) -> Format {
        match f {
            InFormat::Adm => Format::Adm,
            InFormat::Json => Format::Json,
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(FAMILY_NAMES))]
    family: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    /// Doubled radius (gamma-bar families).
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    b: Option<usize>,
    #[arg(long)]
    c: Option<usize>,
    /// First blown-up position (bip-digraph-extremal).
    #[arg(long)]
    j: Option<usize>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutFormat,
}

#[derive(Args)]
struct MetricsArgs {
    /// Digraph file, or `-` for stdin.
    input: PathBuf,
    /// Input format; inferred from the extension when absent.
    #[arg(long, value_enum)]
    from: Option<InFormat>,
}

#[derive(Args)]
struct FormulaArgs {
    #[arg(long)]
    bound: BoundName,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    /// Doubled radius (gamma-2r1).
    #[arg(long)]
    rad2: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    MaxSize,
    MinWiener,
    CountExtremal,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    RowCapped,
    Backtracking,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    strong: bool,
    #[arg(long)]
    symmetric: bool,
    /// `any`, or fixed class sizes as `P+Q`.
    #[arg(long)]
    bipartite: Option<String>,
    #[arg(long)]
    rad_out: Option<u32>,
    /// Doubled radius.
    #[arg(long)]
    rad2: Option<u32>,
    #[arg(long)]
    diameter: Option<u32>,
    #[arg(long, value_enum, default_value = "max-size")]
    objective: ObjectiveArg,
    #[arg(long, value_enum, default_value = "backtracking")]
    mode: ModeArg,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// `adm` prints the canonical form of each class.
    #[arg(long, value_enum, default_value = "json")]
    format: OutFormat,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "list")]
    check: Option<CheckId>,
    #[arg(long, default_value = "exhaustive")]
    depth: Depth,
    /// Smallest order; also the largest unless `--n-max` is given.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    n_max: Option<usize>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    r_max: Option<u32>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    #[arg(long, default_value = "reports")]
    reports_dir: PathBuf,
    /// Print the check registry and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args)]
struct IsoArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    from: Option<InFormat>,
}

#[derive(Args)]
struct ConvertArgs {
    input: PathBuf,
    #[arg(long, value_enum)]
    from: Option<InFormat>,
    #[arg(long, value_enum)]
    to: OutFormat,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Construct(a) => construct(a),
        Command::Metrics(a) => {
            let d = read_digraph(&a.input, a.from)?;
            emit(&serde_json::to_value(metric_summary(&d))?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Formula(a) => {
            let params = BoundParams {
                n: a.n,
                r: a.r,
                rad2: a.rad2,
            };
            let value = closed_form(a.bound, params)?;
            emit(&json!({"bound": a.bound, "params": params, "value": value}));
            Ok(ExitCode::SUCCESS)
        }
        Command::Search(a) => search(a),
        Command::Verify(a) => verify(a),
        Command::IsoClassify(a) => iso_classify(a),
        Command::Convert(a) => {
            let d = read_digraph(&a.input, a.from)?;
            print!("{}", render(&d, a.to));
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn emit(v: &Value) {
    println!("{v}");
}

fn render(d: &DenseDigraph, f: OutFormat) -> String {
    match f {
        OutFormat::Json => serialize(d, Format::Json) + "\n",
        OutFormat::Adm => serialize(d, Format::Adm),
        OutFormat::Dot => serialize(d, Format::Dot),
    }
}

fn read_digraph(path: &Path, from: Option<InFormat>) -> Result<DenseDigraph> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let format = match from {
        Some(f) => f.into(),
        None if path.extension().is_some_and(|e| e == "json") => Format::Json,
        None => Format::Adm,
    };
    parse(&text, format).with_context(|| format!("parsing {}", path.display()))
}

fn construct(a: ConstructArgs) -> Result<ExitCode> {
    let mut fields = Map::new();
    fields.insert("family".into(), a.family.clone().into());
    let given = [
        ("n", a.n),
        ("r", a.r),
        ("s", a.s),
        ("d", a.d),
        ("i", a.i),
        ("a", a.a),
        ("b", a.b),
        ("c", a.c),
        ("j", a.j),
    ];
    for (k, v) in given {
        if let Some(v) = v {
            fields.insert(k.into(), v.into());
        }
    }
    let spec: FamilySpec =
        serde_json::from_value(Value::Object(fields.clone())).map_err(|e| anyhow!("{}: {e}", a.family))?;
    let expected = serde_json::to_value(&spec)?;
    if let Some(extra) = fields.keys().find(|k| expected.get(k.as_str()).is_none()) {
        bail!("{} does not take --{extra}", a.family);
    }
    let built = spec.build()?;
    let d = &built.digraph;
    if !matches!(a.format, OutFormat::Json) {
        print!("{}", render(d, a.format));
        return Ok(ExitCode::SUCCESS);
    }
    let partition = built
        .partition
        .as_ref()
        .map(|p| (0..d.order()).filter(|&v| p.first() >> v & 1 == 1).collect::<Vec<_>>());
    emit(&json!({
        "spec": spec,
        "n": d.order(),
        "arc_count": d.arc_count(),
        "edge_count": d.edge_count(),
        "arcs": d.arcs().map(|(i, j)| [i, j]).collect::<Vec<_>>(),
        "first_class": partition,
        "extremal": built.extremal,
    }));
    Ok(ExitCode::SUCCESS)
}

fn parse_bipartite(s: &str) -> Result<BipartiteConstraint> {
    if s.eq_ignore_ascii_case("any") {
        return Ok(BipartiteConstraint::Any);
    }
    let (p, q) = s
        .split_once('+')
        .ok_or_else(|| anyhow!("--bipartite expects `any` or `P+Q`, got {s:?}"))?;
    Ok(BipartiteConstraint::Classes {
        p: p.trim().parse().context("class size")?,
        q: q.trim().parse().context("class size")?,
    })
}

fn search(a: SearchArgs) -> Result<ExitCode> {
    let constraints = Constraints {
        strong: a.strong,
        symmetric: a.symmetric,
        bipartite: a.bipartite.as_deref().map(parse_bipartite).transpose()?,
        rad_out_eq: a.rad_out,
        rad2_eq: a.rad2,
        diameter_eq: a.diameter,
    };
    let objective = match a.objective {
        ObjectiveArg::MaxSize => Objective::MaxSize,
        ObjectiveArg::MinWiener => Objective::MinWiener,
        ObjectiveArg::CountExtremal => Objective::CountExtremal,
    };
    let mode = match a.mode {
        ModeArg::Full => Mode::Full,
        ModeArg::RowCapped => Mode::RowCapped,
        ModeArg::Backtracking => Mode::Backtracking,
    };
    let mut task = SearchTask::new(a.n, constraints, objective, mode).with_threads(a.threads);
    if let Some(p) = &a.checkpoint {
        task = task.with_checkpoint(p);
    }
    let report = enumerate(&task)?;
    match a.format {
        OutFormat::Json => emit(&serde_json::to_value(&report)?),
        f => {
            let blocks: Vec<String> = report.iso_classes.iter().map(|c| render(&c.digraph(), f)).collect();
            print!("{}", blocks.join("\n"));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(a: VerifyArgs) -> Result<ExitCode> {
    if a.list {
        emit(&serde_json::to_value(list_checks())?);
        return Ok(ExitCode::SUCCESS);
    }
    let id = a.check.expect("clap requires --check without --list");
    let mut check = TheoremCheck::new(id, a.depth)?;
    let d = check.params;
    let n_min = a.n.unwrap_or(d.n_min);
    let r_min = a.r.unwrap_or(d.r_min);
    check = check.with_params(CheckParams {
        n_min,
        n_max: a.n_max.unwrap_or(if a.n.is_some() { n_min } else { d.n_max }),
        r_min,
        r_max: a.r_max.unwrap_or(if a.r.is_some() { r_min } else { d.r_max }),
    });
    check.threads = a.threads.max(1);
    let report = verify_theorem(&check)?;

    fs::create_dir_all(&a.reports_dir).with_context(|| format!("creating {}", a.reports_dir.display()))?;
    let path = a.reports_dir.join(format!("{}.json", check.file_stem()));
    fs::write(&path, serde_json::to_string_pretty(&report)?).with_context(|| format!("writing {}", path.display()))?;
    write_summary(&a.reports_dir)?;
    emit(&serde_json::to_value(&report)?);
    Ok(match report.verdict {
        Verdict::Refuted => ExitCode::from(2),
        _ => ExitCode::SUCCESS,
    })
}

/// Rebuilds `summary.md` from every report in the directory.
fn write_summary(dir: &Path) -> Result<()> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "json"))
        .collect();
    paths.sort();
    let mut out = format!("{SUMMARY_HEADER}\n");
    for p in paths {
        let text = fs::read_to_string(&p)?;
        if let Ok(r) = serde_json::from_str::<edl::verify::VerificationReport>(&text) {
            out.push_str(&r.summary_row());
            out.push('\n');
        }
    }
    fs::write(dir.join("summary.md"), out)?;
    Ok(())
}

fn iso_classify(a: IsoArgs) -> Result<ExitCode> {
    let digraphs = a
        .inputs
        .iter()
        .map(|p| read_digraph(p, a.from))
        .collect::<Result<Vec<_>>>()?;
    let classes = classify_extremal(&digraphs)?;
    let out: Vec<Value> = classes
        .iter()
        .map(|(canon, members)| {
            let adm = serialize(canon, Format::Adm);
            json!({
                "hash": edl::search::adm_hash(&adm),
                "adm": adm,
                "members": members.iter().map(|&i| a.inputs[i].display().to_string()).collect::<Vec<_>>(),
            })
        })
        .collect();
    emit(&Value::Array(out));
    Ok(ExitCode::SUCCESS)
}
