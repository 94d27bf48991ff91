//! `nis`: compile directive measures and check organizations against them.

mod load;
mod report;
mod tree;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use nis_core::dsl;
use nis_core::gap::gap_report;
use nis_core::kb::{EntityKind, Iri, PrefixMap};
use nis_core::reasoner::{classify, Inference};
use nis_core::turtle::serialize;

use load::{load_kb, Failure};

const EXIT_GAPS: u8 = 1;
const EXIT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "nis",
    version,
    about = "Directive compliance checking over description-logic measures"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a measure DSL file into a Turtle ontology.
    Compile {
        dsl: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report inferred compliance and missing measures for one individual.
    Check(CheckArgs),
    /// Like `check`, printing only the missing-measure table.
    Gaps(CheckArgs),
    /// Print the inferred class hierarchy.
    Classify {
        #[arg(long)]
        ontology: PathBuf,
    },
    /// Parse inputs and check knowledge-base invariants.
    Validate {
        #[arg(long)]
        ontology: PathBuf,
        #[arg(long)]
        facts: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct CheckArgs {
    /// Ontology as Turtle (.ttl) or measure DSL (.dsl).
    #[arg(long)]
    ontology: PathBuf,
    /// Fact files, merged into one ABox.
    #[arg(long)]
    facts: Vec<PathBuf>,
    #[arg(long)]
    individual: String,
    #[arg(long, default_value = "nis:MemberState")]
    target: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Extra prefix binding, `name=expansion`.
    #[arg(long = "prefix", value_parser = parse_prefix)]
    prefixes: Vec<(String, String)>,
}

fn parse_prefix(s: &str) -> Result<(String, String), String> {
    let (name, ns) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=expansion, got `{s}`"))?;
    Ok((name.trim_end_matches(':').to_string(), ns.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compile { dsl, output } => cmd_compile(&dsl, output.as_ref()),
        Command::Check(args) => cmd_check(&args, false),
        Command::Gaps(args) => cmd_check(&args, true),
        Command::Classify { ontology } => cmd_classify(&ontology),
        Command::Validate { ontology, facts } => cmd_validate(&ontology, &facts),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}

fn cmd_compile(path: &PathBuf, output: Option<&PathBuf>) -> Result<u8, Failure> {
    let text = load::read(path)?;
    let kb = dsl::parse_measures(&text)
        .and_then(|ms| dsl::compile(&ms))
        .map_err(|e| Failure::at(path, e))?;
    let ttl = serialize(&kb);
    let definitions = kb.definitions().count();
    let summary = format!(
        "compiled {} axioms: {} classes, {} object properties, {} data properties, {} definitions",
        kb.tbox().len(),
        kb.declared(EntityKind::Class).count(),
        kb.declared(EntityKind::ObjectProperty).count(),
        kb.declared(EntityKind::DataProperty).count(),
        definitions,
    );
    match output {
        Some(out) => {
            fs::write(out, ttl).map_err(|e| Failure::at(out, e))?;
            println!("{summary}");
        }
        None => {
            print!("{ttl}");
            eprintln!("{summary}");
        }
    }
    Ok(0)
}

fn resolve(prefixes: &PrefixMap, text: &str, what: &str) -> Result<Iri, Failure> {
    prefixes
        .expand(text)
        .map_err(|e| Failure::new(format!("cannot resolve {what} `{text}`: {e}")))
}

fn cmd_check(args: &CheckArgs, table_only: bool) -> Result<u8, Failure> {
    let mut kb = load_kb(&args.ontology)?;
    for path in &args.facts {
        let facts = load_kb(path)?;
        kb.merge(&facts).map_err(|e| Failure::at(path, e))?;
    }
    let mut prefixes = kb.prefixes().clone();
    prefixes.absorb(&dsl::default_prefixes());
    for (name, ns) in &args.prefixes {
        prefixes.insert(name.clone(), ns.clone());
    }
    let individual = resolve(&prefixes, &args.individual, "individual")?;
    let target = resolve(&prefixes, &args.target, "target")?;

    let inference = Inference::new(&kb);
    let report = gap_report(&kb, &inference, &individual, &target).map_err(Failure::new)?;
    let out = match (args.format, table_only) {
        (Format::Json, _) => report::json(&report),
        (Format::Text, true) => report::table(&report, &prefixes),
        (Format::Text, false) => report::text(&report, &prefixes),
    };
    print!("{out}");
    Ok(if report.is_compliant() { 0 } else { EXIT_GAPS })
}

fn cmd_classify(path: &PathBuf) -> Result<u8, Failure> {
    let kb = load_kb(path)?;
    let subs = classify(&kb);
    print!("{}", tree::render(&kb, &subs));
    Ok(0)
}

fn cmd_validate(ontology: &PathBuf, facts: &[PathBuf]) -> Result<u8, Failure> {
    let mut kb = load_kb(ontology)?;
    for path in facts {
        let more = load_kb(path)?;
        kb.merge(&more).map_err(|e| Failure::at(path, e))?;
    }
    if !kb.indexes_consistent() {
        return Err(Failure::new("knowledge base indexes are inconsistent"));
    }
    println!(
        "ok: {} axioms, {} assertions, {} classes, {} individuals",
        kb.tbox().len(),
        kb.abox().len(),
        kb.classes().count(),
        kb.individuals().count()
    );
    Ok(0)
}
