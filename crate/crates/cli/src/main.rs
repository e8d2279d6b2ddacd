//! diff-forge: construct and verify difference families and 2-designs.
//!
//! Exit codes: 0 on success/verified, 1 on verification failure or an
//! exhausted/failed search, 2 on malformed input or bad arguments.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use diff_forge::formats::*;

mod report;

use report::*;

#[derive(Parser)]
#[command(
    name = "diff-forge",
    about = "Difference families, strong difference families and 2-designs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the Q(d,m) bound report.
    Bound(BoundArgs),
    /// Emit a Paley difference multiset, scheme, or symbolic D_h table.
    Paley(PaleyArgs),
    /// Verify a strong difference family file.
    VerifySdf(InputArgs),
    /// Verify a relative difference family file.
    VerifyDf(InputArgs),
    /// Verify a 2-design file (JSON or JSON Lines).
    VerifyDesign(InputArgs),
    /// Run the fundamental construction on a lift-input file.
    Lift(LiftArgs),
    /// List catalog entries, or emit one (as SDF, lift input, or lifted DF).
    Catalog(CatalogArgs),
    /// Search for a witness making every D_h a lambda-transversal.
    Search(SearchArgs),
    /// Scan a range of q, searching each admissible value.
    Scan(ScanArgs),
    /// Compose a DF with an ingredient design into a 2-design.
    Compose(ComposeArgs),
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    d: u64,
    #[arg(long)]
    m: u64,
    /// Human-readable table instead of JSON.
    #[arg(long)]
    human: bool,
}

#[derive(Copy, Clone, ValueEnum)]
enum PaleyEmit {
    Sdf,
    Scheme,
    Table,
}

#[derive(Args)]
struct PaleyArgs {
    /// Odd prime power p.
    #[arg(long)]
    p: u64,
    /// Multiset type for --emit sdf.
    #[arg(long, value_parser = ["first", "second"], default_value = "first")]
    r#type: String,
    /// Scheme variant for --emit scheme/table.
    #[arg(long, value_parser = ["quarter", "half-first", "half-second"])]
    variant: Option<String>,
    #[arg(long, value_enum, default_value = "sdf")]
    emit: PaleyEmit,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct InputArgs {
    /// Input path; stdin when omitted.
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long)]
    human: bool,
}

#[derive(Args)]
struct LiftArgs {
    #[arg(long, short)]
    input: Option<PathBuf>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum CatalogEmit {
    Sdf,
    Input,
    Df,
}

#[derive(Args)]
struct CatalogArgs {
    /// Entry tag, e.g. "2.3" or "lemma-2.16-p81"; omit to list all.
    #[arg(long)]
    lemma: Option<String>,
    #[arg(long, value_enum, default_value = "df")]
    emit: CatalogEmit,
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long)]
    human: bool,
}

#[derive(Args)]
struct SearchArgs {
    /// Odd prime power p of the scheme.
    #[arg(long)]
    p: u64,
    #[arg(long, value_parser = ["quarter", "half-first", "half-second"])]
    variant: String,
    /// Prime power q of the companion field.
    #[arg(long)]
    q: u64,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    lambda: u64,
    /// Node budget; unlimited when omitted.
    #[arg(long)]
    budget: Option<u64>,
    /// Explore the full first-symbol domain instead of class representatives.
    #[arg(long)]
    no_normalize: bool,
    /// full: complete backtracking; greedy: stepwise constrained-element picks.
    #[arg(long, value_parser = ["full", "greedy"], default_value = "full")]
    strategy: String,
    /// result: the search result record; df: the lifted difference family.
    #[arg(long, value_parser = ["result", "df"], default_value = "result")]
    emit: String,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, value_parser = ["quarter", "half-first", "half-second"])]
    variant: String,
    #[arg(long)]
    d: u64,
    #[arg(long)]
    lambda: u64,
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
    /// Node budget per q; unlimited when omitted.
    #[arg(long)]
    budget: Option<u64>,
    /// Worker threads.
    #[arg(long, default_value = "1")]
    jobs: usize,
    /// Include prime powers, not just primes.
    #[arg(long)]
    prime_powers: bool,
    #[arg(long)]
    no_normalize: bool,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ComposeArgs {
    /// Relative difference family file.
    #[arg(long)]
    df: PathBuf,
    /// Ingredient design file.
    #[arg(long)]
    ingredient: PathBuf,
    /// 1 fills cosets of N; 2 adjoins a point at infinity.
    #[arg(long)]
    variant: u8,
    /// Output path for the composed design (JSON Lines); stdout when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Bound(a) => bound_cmd(a),
        Command::Paley(a) => paley_cmd(a),
        Command::VerifySdf(a) => verify_sdf_cmd(a),
        Command::VerifyDf(a) => verify_df_cmd(a),
        Command::VerifyDesign(a) => verify_design_cmd(a),
        Command::Lift(a) => lift_cmd(a),
        Command::Catalog(a) => catalog_cmd(a),
        Command::Search(a) => search_cmd(a),
        Command::Scan(a) => scan_cmd(a),
        Command::Compose(a) => compose_cmd(a),
    }
}

fn read_input(path: &Option<PathBuf>) -> anyhow::Result<String> {
    let mut buf = String::new();
    match path {
        Some(p) if p.as_os_str() != "-" => {
            File::open(p)?.read_to_string(&mut buf)?;
        }
        _ => {
            io::stdin().read_to_string(&mut buf)?;
        }
    }
    Ok(buf)
}

fn open_output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) if p.as_os_str() != "-" => Box::new(BufWriter::new(File::create(p)?)),
        _ => Box::new(BufWriter::new(io::stdout())),
    })
}

fn emit_json(path: &Option<PathBuf>, v: &Value) -> anyhow::Result<()> {
    let mut w = open_output(path)?;
    writeln!(w, "{v}")?;
    Ok(())
}

fn parse_json(text: &str) -> anyhow::Result<Value> {
    Ok(serde_json::from_str(text)?)
}

fn bound_cmd(a: BoundArgs) -> anyhow::Result<ExitCode> {
    if a.d < 1 || a.m < 1 {
        anyhow::bail!("bound requires d >= 1 and m >= 1");
    }
    let b = diff_forge::q_bound(a.d, a.m);
    if a.human {
        println!("Q({}, {})", a.d, a.m);
        println!("  U           = {}", b.u);
        println!("  Q (floor)   = {}", b.q_floor);
        println!("  Q (decimal) = {}", b.q_decimal);
        println!("  q threshold = {}  (q > Q iff q >= threshold)", b.q_threshold);
    } else {
        println!("{}", bound_report(&b));
    }
    Ok(ExitCode::SUCCESS)
}

fn paley_cmd(a: PaleyArgs) -> anyhow::Result<ExitCode> {
    let (p0, f0) = diff_forge::arith::prime_power(a.p)
        .ok_or_else(|| anyhow::anyhow!("p = {} is not a prime power", a.p))?;
    let field = diff_forge::FiniteField::new(p0, f0 as usize, None)?;
    match a.emit {
        PaleyEmit::Sdf => {
            let ty = match a.r#type.as_str() {
                "first" => diff_forge::PaleyType::First,
                _ => diff_forge::PaleyType::Second,
            };
            let sdf = diff_forge::paley_sdf(&field, ty)?;
            emit_json(&a.output, &sdf_to_json(&sdf)?)?;
        }
        PaleyEmit::Scheme | PaleyEmit::Table => {
            let variant = diff_forge::SchemeVariant::parse(
                a.variant
                    .as_deref()
                    .ok_or_else(|| anyhow::anyhow!("--variant is required for this emit"))?,
            )?;
            let scheme = diff_forge::build_scheme(&field, variant)?;
            if matches!(a.emit, PaleyEmit::Scheme) {
                emit_json(&a.output, &scheme_report(&scheme))?;
            } else {
                let table = diff_forge::symbolic_dh(&scheme)?;
                emit_json(&a.output, &table_report(&table))?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify_sdf_cmd(a: InputArgs) -> anyhow::Result<ExitCode> {
    let sdf = sdf_from_json(&parse_json(&read_input(&a.input)?)?)?;
    let v = sdf.verify()?;
    if a.human {
        println!(
            "SDF over group of order {}: {}",
            sdf.group.order(),
            if v.ok { "ok" } else { "NOT ok" }
        );
    } else {
        println!("{}", sdf_verdict_report(&sdf, &v)?);
    }
    Ok(exit_ok(v.ok))
}

fn verify_df_cmd(a: InputArgs) -> anyhow::Result<ExitCode> {
    let df = df_from_json(&parse_json(&read_input(&a.input)?)?)?;
    let v = df.verify()?;
    if a.human {
        println!(
            "DF with {} base blocks: {}",
            df.blocks.len(),
            if v.ok { "ok" } else { "NOT ok" }
        );
    } else {
        println!("{}", df_verdict_report(&df, &v)?);
    }
    Ok(exit_ok(v.ok))
}

fn verify_design_cmd(a: InputArgs) -> anyhow::Result<ExitCode> {
    let text = read_input(&a.input)?;
    let design = read_design(BufReader::new(text.as_bytes()))?;
    let v = design.verify();
    if a.human {
        println!(
            "2-({},{},{}) candidate with {} blocks: {}",
            design.v,
            design.k,
            design.lambda,
            design.blocks.len(),
            if v.ok { "ok" } else { "NOT ok" }
        );
    } else {
        println!("{}", design_verdict_report(&design, &v));
    }
    Ok(exit_ok(v.ok))
}

fn lift_cmd(a: LiftArgs) -> anyhow::Result<ExitCode> {
    let input = lift_input_from_json(&parse_json(&read_input(&a.input)?)?)?;
    let df = diff_forge::lift(&input)?;
    emit_json(&a.output, &df_to_json(&df)?)?;
    Ok(ExitCode::SUCCESS)
}

fn catalog_cmd(a: CatalogArgs) -> anyhow::Result<ExitCode> {
    match &a.lemma {
        None => {
            if a.human {
                for e in diff_forge::catalog() {
                    println!("{:<18} {}", e.tag, e.summary);
                }
            } else {
                let list: Vec<Value> = diff_forge::catalog()
                    .iter()
                    .map(|e| json!({"tag": e.tag, "summary": e.summary}))
                    .collect();
                println!("{}", Value::Array(list));
            }
            Ok(ExitCode::SUCCESS)
        }
        Some(tag) => {
            let entry = diff_forge::catalog_entry(tag)
                .ok_or_else(|| anyhow::anyhow!("no catalog entry `{tag}`"))?;
            match (a.emit, &entry.object) {
                (CatalogEmit::Sdf, _) => {
                    let sdf = entry.component_sdf()?;
                    emit_json(&a.output, &sdf_to_json(&sdf)?)?;
                }
                (CatalogEmit::Input, diff_forge::CatalogObject::Lift(input)) => {
                    emit_json(&a.output, &lift_input_to_json(input)?)?;
                }
                (CatalogEmit::Df, diff_forge::CatalogObject::Lift(input)) => {
                    let df = diff_forge::lift(input)?;
                    emit_json(&a.output, &df_to_json(&df)?)?;
                }
                (_, diff_forge::CatalogObject::Sdf(_)) => {
                    anyhow::bail!("entry `{}` is an SDF; use --emit sdf", entry.tag)
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_problem(
    p: u64,
    variant: &str,
    q: u64,
    d: u64,
    lambda: u64,
    normalize: bool,
) -> anyhow::Result<diff_forge::SearchProblem> {
    let (pc, pf) = diff_forge::arith::prime_power(p)
        .ok_or_else(|| anyhow::anyhow!("p = {p} is not a prime power"))?;
    let (qc, qf) = diff_forge::arith::prime_power(q)
        .ok_or_else(|| anyhow::anyhow!("q = {q} is not a prime power"))?;
    let field_p = diff_forge::FiniteField::new(pc, pf as usize, None)?;
    let field_q = diff_forge::FiniteField::new(qc, qf as usize, None)?;
    let scheme = diff_forge::build_scheme(&field_p, diff_forge::SchemeVariant::parse(variant)?)?;
    Ok(diff_forge::SearchProblem::new(scheme, field_q, d, lambda)?.with_normalize(normalize))
}

fn search_cmd(a: SearchArgs) -> anyhow::Result<ExitCode> {
    let problem = build_problem(a.p, &a.variant, a.q, a.d, a.lambda, !a.no_normalize)?;
    let result = match a.strategy.as_str() {
        "greedy" => match diff_forge::greedy_lift_search(&problem)? {
            diff_forge::GreedyOutcome::Found(r) => r,
            diff_forge::GreedyOutcome::TableUnsatisfiable => {
                emit_json(&a.output, &json!({"status": "greedy-table-unsatisfiable"}))?;
                return Ok(ExitCode::from(1));
            }
            diff_forge::GreedyOutcome::StepFailed { symbol } => {
                emit_json(
                    &a.output,
                    &json!({"status": "greedy-step-failed", "symbol": diff_forge::paley::symbol_name(symbol)}),
                )?;
                return Ok(ExitCode::from(1));
            }
        },
        _ => diff_forge::search(&problem, a.budget.unwrap_or(u64::MAX))?,
    };
    match a.emit.as_str() {
        "df" => {
            let Some(witness) = &result.witness else {
                emit_json(&a.output, &search_result_report(&problem, &result))?;
                return Ok(ExitCode::from(1));
            };
            let input = diff_forge::assemble_lift_input(&problem, witness)?;
            let df = diff_forge::lift(&input)?;
            emit_json(&a.output, &df_to_json(&df)?)?;
            Ok(ExitCode::SUCCESS)
        }
        _ => {
            emit_json(&a.output, &search_result_report(&problem, &result))?;
            Ok(exit_ok(result.status == diff_forge::SearchStatus::Found))
        }
    }
}

fn scan_cmd(a: ScanArgs) -> anyhow::Result<ExitCode> {
    let (pc, pf) = diff_forge::arith::prime_power(a.p)
        .ok_or_else(|| anyhow::anyhow!("p = {} is not a prime power", a.p))?;
    let field_p = diff_forge::FiniteField::new(pc, pf as usize, None)?;
    let variant = diff_forge::SchemeVariant::parse(&a.variant)?;
    let cfg = diff_forge::ScanConfig {
        q_from: a.from,
        q_to: a.to,
        budget: a.budget.unwrap_or(u64::MAX),
        prime_powers: a.prime_powers,
        normalize: !a.no_normalize,
        jobs: a.jobs,
    };
    let records = diff_forge::scan_range(&field_p, variant, a.d, a.lambda, &cfg)?;
    let mut w = open_output(&a.output)?;
    for r in &records {
        writeln!(w, "{}", scan_record_report(r))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn compose_cmd(a: ComposeArgs) -> anyhow::Result<ExitCode> {
    let df = df_from_json(&parse_json(&read_input(&Some(a.df.clone()))?)?)?;
    let ingredient_text = read_input(&Some(a.ingredient.clone()))?;
    let ingredient = read_design(BufReader::new(ingredient_text.as_bytes()))?;
    let variant = diff_forge::ComposeVariant::from_number(a.variant)?;
    let design = diff_forge::compose_design(&df, &ingredient, variant)?;
    let verdict = design.verify();
    {
        let mut w = open_output(&a.output)?;
        write_design_jsonl(&mut w, &design)?;
    }
    eprintln!(
        "composed 2-({},{},{}) with {} blocks: {}",
        design.v,
        design.k,
        design.lambda,
        design.blocks.len(),
        if verdict.ok { "ok" } else { "NOT ok" }
    );
    Ok(exit_ok(verdict.ok))
}

fn exit_ok(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
