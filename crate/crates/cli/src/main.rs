//! `ctbl`: character tables, hybrid presentations and character stores from the command line.
//!
//! Exit codes: 0 on success, 2 when a table is valid but incomplete, 1 on any error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use ctbl::charstore::{self, StoreWriter};
use ctbl::class_data::Classes;
use ctbl::exec::{with_jobs, Exec};
use ctbl::groups::GroupFile;
use ctbl::hybrid::{self, HybridGroup, PermOracle, PresentationRecord};
use ctbl::pgroup::{PGroup, Shortcuts, WorkerAssignment};
use ctbl::table::{self, CharacterTable, Options};
use ctbl::{PermGroup, Permutation};

#[derive(Parser)]
#[command(name = "ctbl", version, about = "Exact character tables of permutation groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brauer,
    Oracle,
}

#[derive(Subcommand)]
enum Command {
    /// Print the table header: classes, centralizer orders and prime power maps.
    Header { group: PathBuf },
    /// Compute the irreducible characters.
    Irr {
        group: PathBuf,
        #[arg(long, value_enum, default_value = "brauer")]
        method: Method,
        /// Worker threads for the induction and p-group phases.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the irreducibles to this store file (relative paths resolve
        /// against CTBL_STORE_DIR when it is set).
        #[arg(long)]
        store: Option<PathBuf>,
        /// Compute every p-group character value by induction, skipping the shortcuts.
        #[arg(long)]
        no_shortcuts: bool,
    },
    /// Build a hybrid presentation and print it as JSON.
    Hybrid {
        group: PathBuf,
        /// Seed element in cycle notation, e.g. "(0 1)(2 3)"; chosen automatically if omitted.
        #[arg(long)]
        seed: Option<String>,
        /// Use this vector orbit (by increasing size) instead of searching.
        #[arg(long)]
        orbit: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check a presentation against the permutation group it was built from.
    Verify { presentation: PathBuf, group: PathBuf },
    /// Split the p-group pairs of a group over workers.
    PgroupPairs {
        group: PathBuf,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Compute the characters from one worker's pairs into a store segment.
    PgroupWorker {
        group: PathBuf,
        #[arg(long)]
        assignment: PathBuf,
        #[arg(long)]
        worker: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Merge store segments into one deduplicated, sorted store.
    Merge {
        #[arg(short, long)]
        output: PathBuf,
        #[arg(required = true)]
        segments: Vec<PathBuf>,
    },
    /// Print a store as text, one character per line.
    Export { store: PathBuf },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn load_group(path: &Path) -> Result<PermGroup> {
    let file = GroupFile::load(path).with_context(|| format!("reading group file {}", path.display()))?;
    Ok(file.to_group()?)
}

fn print_json(value: &serde_json::Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn store_path(path: &Path) -> PathBuf {
    match std::env::var_os("CTBL_STORE_DIR") {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Header { group } => {
            let g = load_group(&group)?;
            let classes = Classes::compute(&g)?;
            print_json(&classes.header.to_json())?;
            Ok(0)
        }
        Command::Irr { group, method, jobs, store, no_shortcuts } => {
            let g = load_group(&group)?;
            let classes = Classes::compute(&g)?;
            let opts = Options {
                exec: Exec::from_jobs(jobs),
                shortcuts: if no_shortcuts { Shortcuts::Off } else { Shortcuts::On },
            };
            let table: CharacterTable = match method {
                Method::Brauer => with_jobs(jobs, || table::brauer_table(&g, &classes, opts))?,
                Method::Oracle => table::oracle_table(&classes)?,
            };
            if let Some(path) = store {
                let path = store_path(&path);
                let mut writer = StoreWriter::create(&path, &table.header)?;
                for chi in &table.irreducibles {
                    writer.append(chi)?;
                }
                writer.finish()?;
            }
            print_json(&table.to_json())?;
            if table.is_complete() {
                Ok(0)
            } else {
                eprintln!(
                    "incomplete: found {} of {} irreducible characters",
                    table.irreducibles.len(),
                    table.header.num_classes()
                );
                Ok(2)
            }
        }
        Command::Hybrid { group, seed, orbit, output } => {
            let g = load_group(&group)?;
            let seed = match seed {
                Some(text) => Permutation::from_cycles(g.degree(), &text)?,
                None => hybrid::default_seed(&g)?,
            };
            let (h, report) = match orbit {
                Some(i) => hybrid::build_with_orbit(&g, &seed, i)?,
                None => hybrid::build_from_perm_group(&g, &seed)?,
            };
            eprintln!(
                "N = {}^{}, radical order {}, quotient order {}",
                report.prime,
                report.dimension,
                report.radical_order,
                h.quotient_order()
            );
            let text = h.export_presentation().to_json();
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Verify { presentation, group } => {
            let text = fs::read_to_string(&presentation)
                .with_context(|| format!("reading presentation {}", presentation.display()))?;
            let rec = PresentationRecord::from_json(&text)?;
            // loading checks the record's internal consistency
            HybridGroup::from_presentation(&rec)?;
            let g = load_group(&group)?;
            let Some(images) = &rec.images else { bail!("presentation carries no generator images") };
            if images.degree != g.degree() {
                bail!("images have degree {}, the group {}", images.degree, g.degree());
            }
            let perms: Vec<Permutation> = images.quotient.iter().chain(&images.radical).cloned().collect();
            if let Some(i) = perms.iter().position(|p| !g.contains(p).unwrap_or(false)) {
                bail!("image {i} is not in the group");
            }
            let verdict = hybrid::verify_presentation(&rec, &PermOracle { degree: g.degree() }, &perms, g.order())?;
            if let Some(err) = verdict.failure() {
                eprintln!("{err}");
                return Ok(1);
            }
            if !verdict.holds {
                eprintln!(
                    "images generate a group of order {}, expected {}",
                    verdict.generated_order.unwrap_or(0),
                    g.order()
                );
                return Ok(1);
            }
            println!("verified: presentation defines a group isomorphic to the input (order {})", g.order());
            Ok(0)
        }
        Command::PgroupPairs { group, workers } => {
            let pg = PGroup::new(load_group(&group)?)?;
            let pairs = pg.build_pairs();
            print_json(&serde_json::to_value(WorkerAssignment::round_robin(pairs.len(), workers))?)?;
            Ok(0)
        }
        Command::PgroupWorker { group, assignment, worker, output } => {
            let pg = PGroup::new(load_group(&group)?)?;
            let plan: WorkerAssignment = serde_json::from_str(&fs::read_to_string(&assignment)?)?;
            let pairs = pg.build_pairs();
            if plan.pairs != pairs.len() {
                bail!("assignment covers {} pairs, the group has {}", plan.pairs, pairs.len());
            }
            let Some(mine) = plan.workers.get(worker) else { bail!("no worker {worker} in the assignment") };
            let mut writer = StoreWriter::create(store_path(&output), pg.header())?;
            for &i in mine {
                for chi in pg.characters_from_pair(&pairs[i], Shortcuts::On) {
                    writer.append(&chi)?;
                }
            }
            writer.finish()?;
            Ok(0)
        }
        Command::Merge { output, segments } => {
            let segments: Vec<PathBuf> = segments.iter().map(|p| store_path(p)).collect();
            let store = charstore::merge(&segments, store_path(&output))?;
            eprintln!("merged {} characters", store.characters.len());
            Ok(0)
        }
        Command::Export { store } => {
            let store = charstore::read_store(store_path(&store))?;
            print!("{}", charstore::export_text(&store.characters));
            Ok(if store.truncated { 2 } else { 0 })
        }
    }
}
