//! Command-line front end: a small lattice-expression language plus
//! subcommands exposing construction, enumeration, representation search,
//! isometry testing, classification, and the claims registry.

mod eval;
mod parser;

use clap::{Parser, Subcommand};
use qlat::construct::{self, RootFamily, RootLatticeId};
use qlat::{catalog, claims, lattice, morphisms, rat, shortvec};
use qlat::{Lattice, Limits};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "qlat",
    about = "Exact-arithmetic toolkit for positive definite integral lattices",
    version
)]
struct Cli {
    /// Node budget for enumeration and embedding search
    /// (default 100000000; the QLAT_BUDGET environment variable overrides
    /// the default, and this flag overrides both).
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Worker threads for the claims registry.
    #[arg(long, global = true, default_value_t = 4)]
    threads: usize,

    /// Reserved; no randomness exists anywhere, so this flag is rejected.
    #[arg(long, global = true, default_value_t = false)]
    seedless: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an expression and print basic invariants.
    Eval {
        expr: String,
        /// Also print minimum, dual minimum, root count, and a known-name
        /// isometry match.
        #[arg(long)]
        props: bool,
        /// Print the lattice as JSON instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Representation test: does the second lattice represent the first?
    Rep {
        source: String,
        target: String,
        /// Require a primitive image.
        #[arg(long)]
        primitive: bool,
        /// Print a witness matrix when one exists.
        #[arg(long)]
        witness: bool,
    },
    /// Isometry test with witness.
    Isom { left: String, right: String },
    /// Orthogonal decomposition into indecomposable components.
    Decompose { expr: String },
    /// Primitive rank-(n+1) extensions with complement norm up to qmax.
    Extensions {
        expr: String,
        #[arg(long)]
        qmax: u64,
    },
    /// Short vectors up to a norm bound.
    Shortvec {
        expr: String,
        #[arg(long)]
        bound: String,
    },
    /// Enumerate isometry classes of small-rank lattices as JSON lines.
    Enumerate {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        bound: u64,
    },
    /// Truncated exceptional set of a lattice.
    Exceptional {
        expr: String,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        bound: u64,
    },
    /// Run the registered claims and print a report.
    Verify {
        /// Only claims whose id starts with this prefix.
        #[arg(long)]
        claim: Option<String>,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// List the claim manifest instead of running.
        #[arg(long)]
        manifest: bool,
    },
}

fn parse_eval(text: &str) -> Result<Lattice, String> {
    let ast = parser::parse_expression(text).map_err(|e| e.to_string())?;
    eval::evaluate(&ast).map_err(|e| e.to_string())
}

/// Registered named lattices for `--props` name matching.
fn known_names() -> Vec<Lattice> {
    let mut out = Vec::new();
    for n in 1..=9 {
        out.extend(construct::root_lattice(RootLatticeId::new(RootFamily::I, n)).ok());
    }
    for n in 1..=13 {
        out.extend(construct::root_lattice(RootLatticeId::new(RootFamily::A, n)).ok());
    }
    for n in 4..=10 {
        out.extend(construct::root_lattice(RootLatticeId::new(RootFamily::D, n)).ok());
    }
    out.extend(construct::root_lattice(RootLatticeId::new(RootFamily::E7, 7)).ok());
    out.extend(construct::root_lattice(RootLatticeId::new(RootFamily::E8, 8)).ok());
    for n in [4, 8, 12] {
        out.extend(construct::root_lattice(RootLatticeId::new(RootFamily::DPlus, n)).ok());
    }
    for c in 1..=4 {
        out.extend(construct::named_m(c).ok());
        out.extend(construct::named_k(c).ok());
    }
    for k in 0..=2 {
        for i in 1..=4 {
            out.extend(construct::named_aki(k, i).ok());
        }
    }
    out.extend(construct::l12().ok());
    out.extend(construct::l16().ok());
    out.extend(construct::m14().ok());
    out
}

fn run(cli: Cli, limits: &Limits) -> Result<ExitCode, String> {
    match cli.command {
        Command::Eval { expr, props, json } => {
            let l = parse_eval(&expr)?;
            if json {
                println!("{}", lattice::lattice_to_json(&l));
                return Ok(ExitCode::SUCCESS);
            }
            println!("rank: {}", l.rank());
            println!("disc: {}", rat::format_rat(&lattice::discriminant(&l)));
            println!("integral: {}", lattice::is_integral(&l));
            if let Some(label) = l.label() {
                println!("label: {label}");
            }
            if props {
                let min = shortvec::minimum(&l, limits).map_err(|e| e.to_string())?;
                println!("min: {}", rat::format_rat(&min));
                if lattice::is_integral(&l) {
                    let dm = shortvec::dual_minimum(&l, limits).map_err(|e| e.to_string())?;
                    println!("dual-min: {}", rat::format_rat(&dm));
                    let roots = shortvec::roots(&l, limits).map_err(|e| e.to_string())?;
                    println!("roots: {}", 2 * roots.len());
                    for known in known_names() {
                        if known.rank() == l.rank()
                            && lattice::discriminant(&known) == lattice::discriminant(&l)
                        {
                            if let Ok(Some(_)) = morphisms::is_isometric(&known, &l, limits) {
                                println!(
                                    "isometric-name: {}",
                                    known.label().unwrap_or("(unnamed)")
                                );
                                break;
                            }
                        }
                    }
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Rep {
            source,
            target,
            primitive,
            witness,
        } => {
            let m = parse_eval(&source)?;
            let l = parse_eval(&target)?;
            let reps = morphisms::find_representations(&m, &l, 1, limits)
                .map_err(|e| e.to_string())?;
            let exists = !reps.is_empty();
            print!("represents: {}", if exists { "yes" } else { "no" });
            if exists {
                let prim = morphisms::primitively_represents(&m, &l, limits)
                    .map_err(|e| e.to_string())?;
                println!(", primitive: {}", if prim { "yes" } else { "no" });
                if primitive && !prim {
                    return Ok(ExitCode::FAILURE);
                }
            } else {
                println!();
                if primitive {
                    return Ok(ExitCode::FAILURE);
                }
            }
            if witness {
                if let Some(e) = reps.first() {
                    println!("witness rows (images of source basis):");
                    for i in 0..e.matrix.nrows() {
                        let row: Vec<String> =
                            e.matrix.row(i).iter().map(|x| x.to_string()).collect();
                        println!("  [{}]", row.join(", "));
                    }
                }
            }
            Ok(if exists {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Isom { left, right } => {
            let a = parse_eval(&left)?;
            let b = parse_eval(&right)?;
            match morphisms::is_isometric(&a, &b, limits).map_err(|e| e.to_string())? {
                Some(w) => {
                    println!("isometric: yes");
                    for i in 0..w.matrix.nrows() {
                        let row: Vec<String> =
                            w.matrix.row(i).iter().map(|x| x.to_string()).collect();
                        println!("  [{}]", row.join(", "));
                    }
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    println!("isometric: no");
                    Ok(ExitCode::FAILURE)
                }
            }
        }
        Command::Decompose { expr } => {
            let l = parse_eval(&expr)?;
            let comps = morphisms::orthogonal_decomposition(&l, limits)
                .map_err(|e| e.to_string())?;
            println!("components: {}", comps.len());
            for c in comps {
                println!(
                    "  rank {} disc {}",
                    c.rank(),
                    rat::format_rat(&lattice::discriminant(&c))
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Extensions { expr, qmax } => {
            let l = parse_eval(&expr)?;
            let exts =
                construct::primitive_extensions(&l, &rat::rat_int(qmax as i64), limits)
                    .map_err(|e| e.to_string())?;
            println!("extensions: {}", exts.len());
            for e in exts {
                println!("{}", lattice::lattice_to_json(&e));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Shortvec { expr, bound } => {
            let l = parse_eval(&expr)?;
            let b = rat::parse_rat(&bound).map_err(|e| e.to_string())?;
            let vecs = shortvec::short_vectors(&l, &b, limits).map_err(|e| e.to_string())?;
            println!("vectors: {} (one per +- pair)", vecs.len());
            for v in vecs {
                let coords: Vec<String> = v.coords.iter().map(|x| x.to_string()).collect();
                println!("  norm {}: [{}]", rat::format_rat(&v.norm), coords.join(", "));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Enumerate { rank, bound } => {
            let forms =
                catalog::enumerate_lattices(rank, bound, limits).map_err(|e| e.to_string())?;
            for f in forms {
                println!("{}", f.to_json_line());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Exceptional { expr, rank, bound } => {
            let l = parse_eval(&expr)?;
            let exc = catalog::truncated_exceptional_set(&l, rank, bound, limits)
                .map_err(|e| e.to_string())?;
            println!(
                "exceptional classes (rank {}, reduced diagonal <= {}): {}",
                exc.rank,
                exc.diag_bound,
                exc.members.len()
            );
            for m in exc.members {
                println!("{}", m.to_json_line());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            claim,
            json,
            manifest,
        } => {
            if manifest {
                for entry in claims::claim_manifest() {
                    println!("{:<28} [{}] {}", entry.id, entry.cost, entry.statement);
                }
                return Ok(ExitCode::SUCCESS);
            }
            let reports = claims::run_claims(claim.as_deref(), cli.threads, limits);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&claims::reports_to_json(&reports))
                        .expect("report serialization")
                );
            } else {
                print!("{}", claims::render_table(&reports));
                let passed = reports
                    .iter()
                    .filter(|r| r.outcome == claims::Outcome::Pass)
                    .count();
                println!("{passed}/{} passed", reports.len());
            }
            if claims::any_failed(&reports) {
                Ok(ExitCode::FAILURE)
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.seedless {
        eprintln!("--seedless is reserved: no randomness exists in this tool");
        return ExitCode::from(2);
    }
    let default_budget = std::env::var("QLAT_BUDGET")
        .ok()
        .and_then(|s| s.parse::<u64>().ok())
        .unwrap_or(qlat::DEFAULT_BUDGET);
    let limits = Limits::with_budget(cli.budget.unwrap_or(default_budget));
    match run(cli, &limits) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
