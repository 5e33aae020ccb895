use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use parorient::eo2dec::solve_pco_2dec;
use parorient::fpt::{solve_fpt, solve_pco_ec_fpt, solve_pco_sc_fpt};
use parorient::hardness::{reduce_to_pco_2ec, reduce_to_pco_2sc, Label, SatInstance};
use parorient::io::{export_dot, parse_instance, parse_orientation, serialize_instance, serialize_orientation};
use parorient::oracle::{enumerate_best, DEFAULT_MAX_EDGES};
use parorient::pco::{solve_pco, solve_pco_max};
use parorient::reduction::{solve_pco_dec, solve_pco_dsc};
use parorient::{verify, ConflictKind, Error, Instance, Orientation};
use serde_json::json;

const EXIT_INFEASIBLE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(name = "parorient", version, about = "Parity-constrained orientations with conflicts")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance; prints the orientation (one head per line).
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverChoice::Auto)]
        solver: SolverChoice,
        /// Maximize satisfied parities instead of deciding (no conflicts, or
        /// disjoint exact pairs).
        #[arg(long)]
        max_parities: bool,
        /// Write the orientation here instead of stdout.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check an orientation against an instance.
    Verify { instance: PathBuf, orientation: PathBuf },
    /// Brute-force every orientation.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_EDGES)]
        max_edges: usize,
    },
    /// Build a hard instance from a DIMACS-style 1-in-3 formula.
    Generate {
        #[arg(value_enum)]
        kind: GenKind,
        formula: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Also write the vertex/edge labels as JSON.
        #[arg(long)]
        labels: Option<PathBuf>,
    },
    /// Graphviz rendering of an instance, directed if an orientation is given.
    ExportDot {
        instance: PathBuf,
        #[arg(long)]
        orientation: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SolverChoice {
    Auto,
    Pco,
    #[value(name = "pco-2dec")]
    Pco2dec,
    PcoDec,
    PcoDsc,
    Fpt,
    FptEc,
    FptSc,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Ec,
    Sc,
}

#[derive(Debug)]
enum Failure {
    Infeasible(String),
    Input(String),
    Unsupported(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::Unsupported(_) | Error::TooLarge { .. } => {
                Failure::Unsupported(e.to_string())
            }
            Error::Infeasible(_) => Failure::Infeasible(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_orientation(path: &Path) -> Result<Orientation, Failure> {
    parse_orientation(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn auto_select(inst: &Instance) -> SolverChoice {
    if inst.conflicts.is_empty() {
        return SolverChoice::Pco;
    }
    let disjoint = inst.pairwise_disjoint();
    if disjoint && inst.all_kind(ConflictKind::Subset) {
        return SolverChoice::PcoDsc;
    }
    if !inst.forced.is_empty() || !disjoint {
        return SolverChoice::Fpt;
    }
    if inst.all_kind(ConflictKind::Exact) {
        if inst.conflicts.iter().all(|c| c.size() == 2) {
            return SolverChoice::Pco2dec;
        }
        if inst.conflicts.iter().all(|c| c.size() >= 2) {
            return SolverChoice::PcoDec;
        }
    }
    SolverChoice::Fpt
}

fn solver_name(s: SolverChoice) -> &'static str {
    match s {
        SolverChoice::Auto => "auto",
        SolverChoice::Pco => "pco",
        SolverChoice::Pco2dec => "pco-2dec",
        SolverChoice::PcoDec => "pco-dec",
        SolverChoice::PcoDsc => "pco-dsc",
        SolverChoice::Fpt => "fpt",
        SolverChoice::FptEc => "fpt-ec",
        SolverChoice::FptSc => "fpt-sc",
    }
}

fn solve(path: &Path, choice: SolverChoice, max_parities: bool, output: Option<&Path>) -> Result<u8, Failure> {
    let inst = load_instance(path)?;
    let choice = if choice == SolverChoice::Auto { auto_select(&inst) } else { choice };
    let name = solver_name(choice);
    if max_parities {
        let (o, satisfied, feasible) = match choice {
            SolverChoice::Pco => {
                let r = solve_pco_max(&inst)?;
                (r.orientation.clone(), r.satisfied_count, r.is_feasible())
            }
            SolverChoice::Pco2dec => {
                let r = solve_pco_2dec(&inst)?;
                (r.orientation, r.satisfied, r.feasible)
            }
            _ => {
                return Err(Failure::Unsupported(format!(
                    "--max-parities needs the pco or pco-2dec solver, not {name}"
                )))
            }
        };
        eprintln!("{name}: {satisfied} of {} parity constraints satisfied", inst.parity.len());
        write_out(output, &serialize_orientation(&o))?;
        return Ok(if feasible { 0 } else { EXIT_INFEASIBLE });
    }
    let found: Option<Orientation> = match choice {
        SolverChoice::Auto => unreachable!(),
        SolverChoice::Pco => solve_pco(&inst)?.feasible_orientation().cloned(),
        SolverChoice::Pco2dec => {
            let r = solve_pco_2dec(&inst)?;
            r.feasible.then_some(r.orientation)
        }
        SolverChoice::PcoDec => solve_pco_dec(&inst)?.orientation,
        SolverChoice::PcoDsc => solve_pco_dsc(&inst)?.orientation,
        SolverChoice::Fpt => solve_fpt(&inst)?.result.feasible_orientation().cloned(),
        SolverChoice::FptEc => solve_pco_ec_fpt(&inst)?.result.feasible_orientation().cloned(),
        SolverChoice::FptSc => solve_pco_sc_fpt(&inst)?.result.feasible_orientation().cloned(),
    };
    match found {
        Some(o) => {
            debug_assert!(verify(&inst, &o).map(|r| r.is_feasible()).unwrap_or(false));
            eprintln!("{name}: feasible");
            write_out(output, &serialize_orientation(&o))?;
            Ok(0)
        }
        None => {
            eprintln!("{name}: infeasible");
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Solve {
            file,
            solver,
            max_parities,
            output,
        } => solve(&file, solver, max_parities, output.as_deref()),
        Command::Verify { instance, orientation } => {
            let inst = load_instance(&instance)?;
            let o = load_orientation(&orientation)?;
            let report = verify(&inst, &o).map_err(|e| Failure::Input(e.to_string()))?;
            let doc = json!({
                "conflict_violations": report.conflict_violations,
                "feasible": report.is_feasible(),
                "forced_violations": report.forced_violations,
                "parity_violations": report.parity_violations,
            });
            println!("{doc}");
            Ok(if report.is_feasible() { 0 } else { EXIT_INFEASIBLE })
        }
        Command::Oracle { file, max_edges } => {
            let inst = load_instance(&file)?;
            let r = enumerate_best(&inst, max_edges)?;
            let doc = json!({
                "best_satisfied_parities": r.best_satisfied_parities,
                "feasible": r.feasible,
                "min_odd_vertices": r.min_odd_vertices,
                "witness": r.witness.as_ref().map(|o| o.head.clone()),
            });
            println!("{doc}");
            Ok(if r.feasible { 0 } else { EXIT_INFEASIBLE })
        }
        Command::Generate {
            kind,
            formula,
            output,
            labels,
        } => {
            let f = SatInstance::parse_dimacs(&read(&formula)?).map_err(|e| Failure::Input(e.to_string()))?;
            let art = match kind {
                GenKind::Ec => reduce_to_pco_2ec(&f),
                GenKind::Sc => reduce_to_pco_2sc(&f),
            }
            .map_err(|e| Failure::Input(e.to_string()))?;
            write_out(output.as_deref(), &serialize_instance(&art.instance))?;
            if let Some(p) = labels {
                let map: serde_json::Map<String, serde_json::Value> = art
                    .labels
                    .iter()
                    .map(|(k, l)| {
                        let v = match l {
                            Label::Vertex(v) => json!({ "vertex": v }),
                            Label::Edge(e) => json!({ "edge": e }),
                        };
                        (k.clone(), v)
                    })
                    .collect();
                let text = serde_json::to_string_pretty(&map).expect("labels serialize") + "\n";
                fs::write(&p, text).map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
            }
            Ok(0)
        }
        Command::ExportDot { instance, orientation } => {
            let inst = load_instance(&instance)?;
            let o = orientation.as_deref().map(load_orientation).transpose()?;
            if let Some(o) = &o {
                verify(&inst, o).map_err(|e| Failure::Input(e.to_string()))?;
            }
            print!("{}", export_dot(&inst, o.as_ref()));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Infeasible(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(EXIT_INFEASIBLE)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INPUT)
        }
        Err(Failure::Unsupported(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_UNSUPPORTED)
        }
    }
}
