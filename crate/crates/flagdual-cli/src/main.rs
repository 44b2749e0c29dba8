use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use flagdual::exactalg::{parse_matrix, Budget};
use flagdual::glsm::Chamber;
use flagdual::pipeline::{self, FieldSpec, Report, RunConfig, SectionSource, Stage};
use flagdual::{Mat, Q};

/// Exact checks for the dual Calabi-Yau threefolds X ⊂ G(2,5) and Y ⊂ G(3,5) cut out by a
/// 10x10 section matrix.
#[derive(Parser, Debug)]
#[command(name = "flagdual", version)]
struct Cli {
    /// QQ, a prime p, GF(p) or GF(4)
    #[arg(long, global = true, default_value = "17", visible_alias = "prime")]
    field: String,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Sample count of the main sweep of the command
    #[arg(long, global = true)]
    samples: Option<usize>,

    /// Gröbner budget: maximum number of polynomial reductions
    #[arg(long, global = true, env = "FLAGDUAL_BUDGET")]
    budget: Option<usize>,

    /// Gröbner budget: maximum basis size
    #[arg(long, global = true)]
    max_basis: Option<usize>,

    /// Largest field order the point counts may enumerate
    #[arg(long, global = true, default_value_t = 5)]
    max_q: u64,

    /// Write the JSON report here; "-" prints it instead of the summary
    #[arg(long, global = true)]
    report: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pushforwards, self-duality and the non-birationality certificate
    Duality {
        #[command(subcommand)]
        action: DualityAction,
    },
    /// Borel-Weil-Bott cohomology and the vanishing lemmas
    Bwb {
        #[command(subcommand)]
        action: BwbAction,
    },
    /// Replay of the mutation script and exceptional collection checks
    Mutations {
        #[command(subcommand)]
        action: MutationAction,
    },
    /// Point counts, the L-relation and the degree
    Motivic {
        #[command(subcommand)]
        action: MotivicAction,
    },
    /// Chambers and critical loci of the GLSM
    Glsm {
        #[command(subcommand)]
        action: GlsmAction,
    },
    /// Every stage in order, with one report
    VerifyPaper {
        /// Matrix file, "witness" or "random"
        #[arg(long, default_value = "witness")]
        section: String,
    },
}

#[derive(Subcommand, Debug)]
enum DualityAction {
    Build {
        #[arg(long, default_value = "witness")]
        section: String,
        /// Directory for quadrics.txt and quintics.txt
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Selfdual {
        #[arg(long, default_value = "witness")]
        section: String,
    },
    Nonbirational {
        #[arg(long, default_value = "witness")]
        section: String,
    },
}

#[derive(Subcommand, Debug)]
enum BwbAction {
    Cohomology {
        /// G25, G35 or F
        #[arg(long)]
        space: String,
        /// Blocks separated by '|', e.g. "2,2|1|0,0"
        #[arg(long, allow_hyphen_values = true)]
        weight: String,
    },
    Lemma {
        /// vanishingQO, vanishingOO or serre
        #[arg(long)]
        name: String,
        /// Inclusive range of a, e.g. 0..7
        #[arg(long, default_value = "0..7")]
        range: String,
    },
}

#[derive(Subcommand, Debug)]
enum MutationAction {
    Replay {
        /// Write the certified step log here
        #[arg(long)]
        log: Option<PathBuf>,
    },
    CheckCollection {
        #[arg(long)]
        name: String,
    },
}

#[derive(Subcommand, Debug)]
enum MotivicAction {
    Count {
        #[arg(long, default_value = "witness")]
        section: String,
        #[arg(long)]
        q: u64,
    },
    Degree,
    LRelation,
}

#[derive(Subcommand, Debug)]
enum GlsmAction {
    Stability {
        #[arg(long, default_value = "witness")]
        section: String,
        /// plus or minus
        #[arg(long, default_value = "minus")]
        chamber: String,
        /// Point file: five rows of B and one row of ω, three entries each
        #[arg(long)]
        point: Option<PathBuf>,
    },
}

#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn read_matrix(path: &Path) -> Result<Mat<Q>, UsageError> {
    let text = std::fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse_matrix::<Q>(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn section_source(arg: &str) -> Result<SectionSource, UsageError> {
    Ok(match arg {
        "witness" => SectionSource::Witness,
        "random" => SectionSource::Random,
        path => SectionSource::Given(read_matrix(Path::new(path))?),
    })
}

fn parse_range(s: &str) -> Result<(i64, i64), UsageError> {
    let (lo, hi) = s.split_once("..").ok_or_else(|| UsageError(format!("range {s:?} is not of the form a..b")))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let (lo, hi): (i64, i64) = (lo.trim().parse()?, hi.trim().parse()?);
    if lo > hi {
        return Err(UsageError(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

fn config(cli: &Cli) -> Result<RunConfig, UsageError> {
    let mut budget = Budget::default();
    if let Some(n) = cli.budget {
        budget.max_reductions = n;
    }
    if let Some(n) = cli.max_basis {
        budget.max_basis = n;
    }
    Ok(RunConfig {
        field: FieldSpec::parse(&cli.field)?,
        seed: cli.seed,
        samples: cli.samples,
        budget,
        max_q: cli.max_q,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), UsageError> {
    std::fs::write(path, contents).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<Report, UsageError> {
    let cfg = config(cli)?;
    let one = |name: &str, section: Option<&Mat<Q>>, stage: Stage| Report::new(name, &cfg, section, vec![stage]);
    let report = match &cli.command {
        Command::Duality { action } => match action {
            DualityAction::Build { section, out } => {
                let s = pipeline::resolve_section(&section_source(section)?, &cfg)?;
                if let Some(dir) = out {
                    std::fs::create_dir_all(dir)?;
                    let (quadrics, quintics) = pipeline::pushforward_texts(&cfg, &s)?;
                    write_file(&dir.join("quadrics.txt"), &quadrics)?;
                    write_file(&dir.join("quintics.txt"), &quintics)?;
                }
                one("duality build", Some(&s), pipeline::duality_build_stage(&cfg, &s))
            }
            DualityAction::Selfdual { section } => {
                let s = pipeline::resolve_section(&section_source(section)?, &cfg)?;
                one("duality selfdual", Some(&s), pipeline::selfdual_stage(&cfg, &s))
            }
            DualityAction::Nonbirational { section } => {
                let s = pipeline::resolve_section(&section_source(section)?, &cfg)?;
                one("duality nonbirational", Some(&s), pipeline::nonbirational_stage(&cfg, &s))
            }
        },
        Command::Bwb { action } => match action {
            BwbAction::Cohomology { space, weight } => {
                one("bwb cohomology", None, pipeline::bwb_cohomology_stage(space, weight))
            }
            BwbAction::Lemma { name, range } => {
                let (lo, hi) = parse_range(range)?;
                one("bwb lemma", None, pipeline::bwb_lemma_stage(&cfg, name, lo, hi))
            }
        },
        Command::Mutations { action } => match action {
            MutationAction::Replay { log } => {
                if let Some(path) = log {
                    write_file(path, &pipeline::replay_log_json()?)?;
                }
                one("mutations replay", None, pipeline::mutation_stage())
            }
            MutationAction::CheckCollection { name } => {
                one("mutations check-collection", None, pipeline::check_collection_stage(name))
            }
        },
        Command::Motivic { action } => match action {
            MotivicAction::Count { section, q } => {
                let s = pipeline::resolve_section(&section_source(section)?, &cfg)?;
                one("motivic count", Some(&s), pipeline::motivic_count_stage(&cfg, &s, *q))
            }
            MotivicAction::Degree => one("motivic degree", None, pipeline::degree_stage()),
            MotivicAction::LRelation => one("motivic l-relation", None, pipeline::l_relation_stage()),
        },
        Command::Glsm { action } => match action {
            GlsmAction::Stability { section, chamber, point } => {
                let s = pipeline::resolve_section(&section_source(section)?, &cfg)?;
                let chamber = Chamber::parse(chamber)?;
                let point = point.as_deref().map(read_matrix).transpose()?;
                one("glsm stability", Some(&s), pipeline::glsm_stability_stage(&cfg, &s, chamber, point.as_ref()))
            }
        },
        Command::VerifyPaper { section } => {
            let s = pipeline::resolve_section(&section_source(section)?, &cfg)?;
            pipeline::verify_paper(&cfg, &s)
        }
    };
    Ok(report)
}

fn print_summary(report: &Report) {
    for stage in &report.stages {
        let mark = if stage.pass { "PASS" } else { "FAIL" };
        println!("{mark}  {:<18} {}", stage.name, stage.status);
        if let Some(grid) = stage.detail.get("grid").and_then(|g| g.as_array()) {
            for line in grid.iter().filter_map(|l| l.as_str()) {
                println!("      {line}");
            }
        }
        if let Some(table) = stage.detail.get("rendered").and_then(|t| t.as_str()) {
            println!("      {table}");
        }
        if let Some(err) = stage.detail.get("error").and_then(|t| t.as_str()) {
            println!("      {err}");
        }
    }
    let failed = report.failed_stages();
    if failed.is_empty() {
        println!("all {} stage(s) passed", report.stages.len());
    } else {
        println!("failed: {}", failed.join(", "));
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(UsageError(msg)) => {
            eprintln!("flagdual: {msg}");
            return ExitCode::from(2);
        }
    };
    match cli.report.as_deref() {
        Some(p) if p == Path::new("-") => print!("{}", report.to_json()),
        Some(p) => {
            if let Err(UsageError(msg)) = write_file(p, &report.to_json()) {
                eprintln!("flagdual: {msg}");
                return ExitCode::from(2);
            }
            print_summary(&report);
        }
        None => print_summary(&report),
    }
    if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
