use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use shapesig::geometry::shape_boundaries;
use shapesig::io::{parse_complex_file, parse_poly, render_svg, serialize_complex, triangulate_polygon, Highlight, HighlightStyle};
use shapesig::nerve::{ground_set, leader_cover, nerve_union_betti_report};
use shapesig::signature::{distance_terms, to_canonical_json};
use shapesig::{
    build_signature, conjecture_report, h1_basis, homology_nerve, Complex, Cycle, DistanceWeights, ProximityConfig,
    Signature, SignatureConfig, SignatureError,
};

#[derive(Parser)]
#[command(name = "shapesig", version, about = "Homology-derived signatures of planar shapes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print β0, β1 and the ranks of Z₁ and B₁
    Betti { file: PathBuf },
    /// Print one H₁ representative per line as a vertex traversal
    Cycles { file: PathBuf },
    /// Print the homology nerve of the ground cycles (or the descriptive cover)
    Nerve {
        file: PathBuf,
        #[arg(long)]
        descriptive: bool,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
    /// Build a signature and write it as canonical JSON
    Signature {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
        #[arg(long, default_value_t = 0.05)]
        quant: f64,
        #[arg(long, default_value_t = 0.05)]
        tau: f64,
    },
    /// Distance between two signature files
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
    },
    /// Draw the complex as SVG
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, value_enum)]
        highlight: Option<Show>,
    },
    /// Triangulate a .poly polygon into a .cplx complex
    Triangulate {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Nerve/hole conjecture witnesses and nerve-versus-union Betti numbers
    Report {
        file: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Show {
    Holes,
    H1,
    All,
}

struct Failure {
    code: u8,
    message: String,
}

fn invalid(message: impl ToString) -> Failure {
    Failure {
        code: 2,
        message: message.to_string(),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Complex, Failure> {
    let text = read(path)?;
    let located = |e: &dyn std::fmt::Display| invalid(format!("{}: {e}", path.display()));
    if path.extension().is_some_and(|x| x == "poly") {
        let poly = parse_poly(&text).map_err(|e| located(&e))?;
        triangulate_polygon(&poly).map_err(|e| located(&e))
    } else {
        parse_complex_file(&text).map_err(|e| located(&e))
    }
}

fn ground_cycles(k: &Complex) -> Vec<Cycle> {
    ground_set(k, &h1_basis(k)).into_iter().map(|g| g.cycle).collect()
}

fn proximity(eps: f64) -> ProximityConfig {
    ProximityConfig {
        epsilon: eps,
        ..Default::default()
    }
}

fn describe(c: &Cycle, k: &Complex) -> String {
    match c.traversal() {
        Some(t) => t.iter().map(u32::to_string).collect::<Vec<_>>().join(" "),
        None => {
            let edges: Vec<String> = c
                .edges()
                .support()
                .into_iter()
                .map(|e| {
                    let [a, b] = k.edges()[e].endpoints;
                    format!("{a}-{b}")
                })
                .collect();
            format!("edges {}", edges.join(" "))
        }
    }
}

#[derive(Serialize)]
struct GroundEntry {
    index: usize,
    role: shapesig::nerve::CycleRole,
    traversal: String,
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Betti { file } => {
            let h = h1_basis(&load(&file)?);
            println!("b0={} b1={} rZ1={} rB1={}", h.betti0, h.rank_h1, h.rank_z1, h.rank_b1);
        }
        Command::Cycles { file } => {
            let k = load(&file)?;
            for c in h1_basis(&k).h1_representatives {
                println!("{}", describe(&c, &k));
            }
        }
        Command::Nerve { file, descriptive, eps } => {
            let k = load(&file)?;
            let h = h1_basis(&k);
            let ground = ground_set(&k, &h);
            let entries: Vec<GroundEntry> = ground
                .iter()
                .enumerate()
                .map(|(index, g)| GroundEntry {
                    index,
                    role: g.role,
                    traversal: describe(&g.cycle, &k),
                })
                .collect();
            let cycles: Vec<Cycle> = ground.into_iter().map(|g| g.cycle).collect();
            let body = if descriptive {
                let cover = leader_cover(&cycles, &k, &proximity(eps)).map_err(invalid)?;
                serde_json::json!({ "ground": entries, "leader_cover": cover })
            } else {
                let nerve = homology_nerve(&cycles).map_err(invalid)?;
                serde_json::json!({ "ground": entries, "nerve": nerve })
            };
            print!("{}", to_canonical_json(&body));
        }
        Command::Signature { file, output, eps, quant, tau } => {
            let mut cfg = SignatureConfig::default();
            cfg.proximity.epsilon = eps;
            cfg.proximity.phi.quant = quant;
            cfg.proximity.phi.tau = tau;
            let sig = build_signature(&load(&file)?, &cfg).map_err(invalid)?;
            emit(output.as_deref(), &sig.to_json())?;
        }
        Command::Compare { a, b, weights } => {
            let sa = Signature::from_json(&read(&a)?).map_err(invalid)?;
            let sb = Signature::from_json(&read(&b)?).map_err(invalid)?;
            let w: DistanceWeights = match weights {
                Some(p) => serde_json::from_str(&read(&p)?).map_err(|e| invalid(format!("{}: {e}", p.display())))?,
                None => DistanceWeights::default(),
            };
            let t = distance_terms(&sa, &sb, &w).map_err(|e| match e {
                SignatureError::ConfigMismatch => Failure {
                    code: 3,
                    message: e.to_string(),
                },
                other => invalid(other),
            })?;
            println!("distance={}", t.total());
            println!("rank={} cycle={} unmatched={} nerve={}", t.rank, t.cycle, t.unmatched, t.nerve);
        }
        Command::Render { file, output, highlight } => {
            let k = load(&file)?;
            let mut hl = Vec::new();
            if matches!(highlight, Some(Show::Holes | Show::All)) {
                hl.extend(shape_boundaries(&k).holes.into_iter().map(|cycle| Highlight {
                    cycle,
                    style: HighlightStyle::Hole,
                }));
            }
            if matches!(highlight, Some(Show::H1 | Show::All)) {
                hl.extend(h1_basis(&k).h1_representatives.into_iter().map(|cycle| Highlight {
                    cycle,
                    style: HighlightStyle::Representative,
                }));
            }
            write(&output, &render_svg(&k, &hl))?;
        }
        Command::Triangulate { file, output } => {
            let poly = parse_poly(&read(&file)?).map_err(|e| invalid(format!("{}: {e}", file.display())))?;
            let k = triangulate_polygon(&poly).map_err(|e| invalid(format!("{}: {e}", file.display())))?;
            emit(output.as_deref(), &serialize_complex(&k))?;
        }
        Command::Report { file, eps } => {
            let k = load(&file)?;
            let conj = conjecture_report(&k, &proximity(eps)).map_err(invalid)?;
            let cycles = ground_cycles(&k);
            let nerve = homology_nerve(&cycles).map_err(invalid)?;
            let union = nerve_union_betti_report(&k, &cycles, &nerve).map_err(invalid)?;
            let body = serde_json::json!({ "conjectures": conj, "nerve_vs_union": union });
            print!("{}", to_canonical_json(&body));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
