//! Command-line front end: presentations and tables, splitting verdicts,
//! oracle verification, and verdict matrices.
//!
//! Exit codes: 0 success (a theorem applies / zero mismatches), 1 no theorem
//! applies or mismatches found, 2 usage errors, 3 unsupported parameter
//! regime.

use clap::{Args, Parser, Subcommand, ValueEnum};
use stiefel_core::error::Error;
use stiefel_core::render::{
    cohomology_report, ss_trace_json, verdict_json, verdict_markdown, verdict_rows_csv,
    verdict_rows_json, verdict_table, verify_grid, verify_point, verify_points_csv,
    verify_points_json, TableFamily,
};
use stiefel_core::spaces::SpaceDescriptor;
use stiefel_core::verdict::full_verdict;

const EXIT_OK: i32 = 0;
const EXIT_NO_THEOREM: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_UNSUPPORTED: i32 = 3;

/// Safety caps for the verification grid; the spectral sequence at n = 7 is
/// already a few seconds per point.
const GRID_N_CAP: u32 = 7;
const GRID_P_CAP: u64 = 31;

#[derive(Parser)]
#[command(
    name = "stiefel",
    about = "Exact p-local cohomology and splitting verdicts for complex \
             Stiefel manifolds and their circle/cyclic quotients",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Markdown,
    Csv,
}

#[derive(Args)]
struct SpaceArgs {
    /// Space family: W, PW, PLW, WM, Y, Lens, Spheres, CP
    #[arg(long)]
    space: String,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    /// Cyclic order for WM and Lens
    #[arg(long)]
    m: Option<u64>,
    /// Weight tuple for PLW, comma-separated (e.g. --l 1,2)
    #[arg(long, allow_hyphen_values = true)]
    l: Option<String>,
    /// Dimension for Lens (odd)
    #[arg(long)]
    dim: Option<u32>,
    /// Sphere dimensions for Spheres, comma-separated odd integers
    #[arg(long)]
    degrees: Option<String>,
}

impl SpaceArgs {
    fn descriptor(&self) -> Result<SpaceDescriptor, String> {
        let need_n = || self.n.ok_or_else(|| "--n is required".to_string());
        let need_k = || self.k.ok_or_else(|| "--k is required".to_string());
        let need_m = || self.m.ok_or_else(|| "--m is required".to_string());
        let d = match self.space.as_str() {
            "W" => SpaceDescriptor::W { n: need_n()?, k: need_k()? },
            "PW" => SpaceDescriptor::PW { n: need_n()?, k: need_k()? },
            "PLW" => {
                let l = self
                    .l
                    .as_ref()
                    .ok_or_else(|| "--l is required for PLW".to_string())?
                    .split(',')
                    .map(|s| s.trim().parse::<i64>().map_err(|e| format!("bad weight: {e}")))
                    .collect::<Result<Vec<i64>, String>>()?;
                SpaceDescriptor::PLW { n: need_n()?, k: need_k()?, l }
            }
            "WM" => SpaceDescriptor::WM { n: need_n()?, k: need_k()?, m: need_m()? },
            "Y" => SpaceDescriptor::Y { n: need_n()?, k: need_k()? },
            "Lens" => SpaceDescriptor::Lens {
                m: need_m()?,
                dim: self.dim.ok_or_else(|| "--dim is required for Lens".to_string())?,
            },
            "Spheres" => {
                let degrees = self
                    .degrees
                    .as_ref()
                    .ok_or_else(|| "--degrees is required for Spheres".to_string())?
                    .split(',')
                    .map(|s| s.trim().parse::<u32>().map_err(|e| format!("bad degree: {e}")))
                    .collect::<Result<Vec<u32>, String>>()?;
                SpaceDescriptor::SphereProduct { degrees }
            }
            "CP" => SpaceDescriptor::CP { n: need_n()? },
            other => return Err(format!("unknown space family {other}")),
        };
        d.validate().map_err(|e| e.to_string())?;
        Ok(d)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Presentation and per-degree module table of a space over Z_(p)
    Cohomology {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Table truncation; defaults to manifold dimension + 2
        #[arg(long)]
        top_degree: Option<u32>,
    },
    /// Splitting-theorem verdict with every hypothesis checked exactly
    Verdict {
        #[command(flatten)]
        space: SpaceArgs,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Spectral-sequence oracle vs presentation tables
    Verify {
        /// Grid bounds: n-max p-max (runs all 2 <= n <= n-max, k <= n,
        /// odd primes p <= p-max on the diagonal quotient)
        #[arg(long, num_args = 2, value_names = ["N_MAX", "P_MAX"])]
        grid: Option<Vec<u64>>,
        #[command(flatten)]
        space: SinglePointArgs,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Deliberately perturb the presentation table (self-test: the
        /// comparison must report a mismatch)
        #[arg(long)]
        perturb: bool,
        /// Include the per-page trace in the JSON output (single point only)
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Verdict matrix over (n, k, p) ranges, deterministic row order
    Table {
        /// Family: PW, W or WM
        #[arg(long, default_value = "PW")]
        space: String,
        /// Cyclic order, required for WM
        #[arg(long)]
        m: Option<u64>,
        /// n range as A..B (inclusive)
        #[arg(long)]
        n_range: String,
        /// k range as A..B (inclusive), clamped to k <= n
        #[arg(long)]
        k_range: String,
        /// Primes, comma-separated
        #[arg(long)]
        p_set: String,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        workers: Option<usize>,
    },
}

/// Space arguments for single-point verify (all optional; grid mode needs
/// none of them).
#[derive(Args)]
struct SinglePointArgs {
    #[arg(long)]
    space: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    k: Option<u32>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long, allow_hyphen_values = true)]
    l: Option<String>,
}

fn color_enabled() -> bool {
    matches!(std::env::var("STIEFEL_COLOR").as_deref(), Ok("1") | Ok("true") | Ok("always"))
}

fn output_width() -> Option<usize> {
    std::env::var("STIEFEL_WIDTH").ok().and_then(|w| w.parse().ok())
}

/// Soft-wrap long lines at the configured width, breaking after commas.
fn apply_width(text: &str) -> String {
    let Some(width) = output_width() else { return text.to_string() };
    let mut out = String::new();
    for line in text.lines() {
        if line.len() <= width || line.starts_with('|') {
            out.push_str(line);
        } else {
            let mut col = 0usize;
            for piece in line.split_inclusive(", ") {
                if col > 0 && col + piece.len() > width {
                    out.push_str("\n    ");
                    col = 4;
                }
                out.push_str(piece);
                col += piece.len();
            }
        }
        out.push('\n');
    }
    out
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn fail(code: i32, msg: &str) -> ! {
    eprintln!("error: {msg}");
    std::process::exit(code);
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Domain(_) => EXIT_USAGE,
        Error::UnsupportedIdeal(_) | Error::UnsupportedRegime(_) | Error::Truncation(_) => {
            EXIT_UNSUPPORTED
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Cohomology { space, p, format, top_degree } => {
            let descriptor = space.descriptor().unwrap_or_else(|e| fail(EXIT_USAGE, &e));
            match cohomology_report(&descriptor, p, top_degree) {
                Ok(report) => {
                    match format {
                        Format::Json => print_json(&report.to_json()),
                        Format::Markdown => print!("{}", apply_width(&report.to_markdown())),
                        Format::Csv => {
                            println!("degree,free_rank,torsion");
                            for d in 0..=report.table.top_degree {
                                let e = report.table.entry(d);
                                if e.is_zero() {
                                    continue;
                                }
                                let torsion: Vec<String> =
                                    e.torsion.iter().map(|v| v.to_string()).collect();
                                println!("{d},{},{}", e.free_rank, torsion.join("+"));
                            }
                        }
                    }
                    EXIT_OK
                }
                Err(e) => fail(exit_code_for(&e), &e.to_string()),
            }
        }
        Command::Verdict { space, p, format } => {
            let descriptor = space.descriptor().unwrap_or_else(|e| fail(EXIT_USAGE, &e));
            match full_verdict(&descriptor, p) {
                Ok(v) => {
                    match format {
                        Format::Json => print_json(&verdict_json(&v)),
                        Format::Markdown => {
                            print!("{}", apply_width(&verdict_markdown(&v, color_enabled())))
                        }
                        Format::Csv => {
                            println!("space,p,dim,strongest,stable_only,conclusion");
                            let conclusion = match &v.conclusion {
                                Some(stiefel_core::verdict::Conclusion::Product { label, .. }) => {
                                    label.clone()
                                }
                                Some(stiefel_core::verdict::Conclusion::StableWedge {
                                    sphere_dimensions,
                                }) => {
                                    format!("stable wedge of {} spheres", sphere_dimensions.len())
                                }
                                None => "none".into(),
                            };
                            println!(
                                "{},{},{},{},{},{}",
                                v.space.label(),
                                v.prime,
                                v.dim,
                                v.strongest
                                    .map(|s| s.as_str().to_string())
                                    .unwrap_or_else(|| "none".into()),
                                v.stable_only,
                                conclusion
                            );
                        }
                    }
                    if v.some_theorem_applies() {
                        EXIT_OK
                    } else {
                        EXIT_NO_THEOREM
                    }
                }
                Err(e) => fail(exit_code_for(&e), &e.to_string()),
            }
        }
        Command::Verify { grid, space, p, format, perturb, trace, workers } => {
            let workers = workers.unwrap_or_else(|| {
                std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
            });
            if let Some(bounds) = grid {
                let (n_max, p_max) = (bounds[0] as u32, bounds[1]);
                if n_max > GRID_N_CAP || p_max > GRID_P_CAP {
                    fail(
                        EXIT_USAGE,
                        &format!(
                            "grid bounds exceed the safety cap (n <= {GRID_N_CAP}, p <= {GRID_P_CAP})"
                        ),
                    );
                }
                match verify_grid(n_max, p_max, workers) {
                    Ok(points) => {
                        match format {
                            Format::Json => print_json(&verify_points_json(&points)),
                            Format::Csv => print!("{}", verify_points_csv(&points)),
                            Format::Markdown => {
                                println!("| space | n | k | p | matches |\n|---|---|---|---|---|");
                                for pt in &points {
                                    println!(
                                        "| {} | {} | {} | {} | {} |",
                                        pt.space, pt.n, pt.k, pt.p, pt.matches
                                    );
                                }
                            }
                        }
                        if points.iter().all(|pt| pt.matches) {
                            EXIT_OK
                        } else {
                            EXIT_NO_THEOREM
                        }
                    }
                    Err(e) => fail(exit_code_for(&e), &e.to_string()),
                }
            } else {
                let family = space.space.clone().unwrap_or_else(|| {
                    fail(EXIT_USAGE, "single-point verify needs --space (or use --grid)")
                });
                let p = p.unwrap_or_else(|| fail(EXIT_USAGE, "single-point verify needs --p"));
                let args = SpaceArgs {
                    space: family,
                    n: space.n,
                    k: space.k,
                    m: space.m,
                    l: space.l.clone(),
                    dim: None,
                    degrees: None,
                };
                let descriptor = args.descriptor().unwrap_or_else(|e| fail(EXIT_USAGE, &e));
                match verify_point(&descriptor, p, perturb) {
                    Ok((point, run)) => {
                        match format {
                            Format::Json => {
                                let mut v = verify_points_json(std::slice::from_ref(&point));
                                if trace {
                                    v.as_object_mut()
                                        .expect("object")
                                        .insert("trace".into(), ss_trace_json(&run));
                                }
                                print_json(&v);
                            }
                            Format::Csv => {
                                print!("{}", verify_points_csv(std::slice::from_ref(&point)))
                            }
                            Format::Markdown => println!(
                                "{}: {}",
                                point.space,
                                if point.matches { "match" } else { "MISMATCH" }
                            ),
                        }
                        if point.matches {
                            EXIT_OK
                        } else {
                            EXIT_NO_THEOREM
                        }
                    }
                    Err(e) => fail(exit_code_for(&e), &e.to_string()),
                }
            }
        }
        Command::Table { space, m, n_range, k_range, p_set, format, workers } => {
            let workers = workers.unwrap_or_else(|| {
                std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
            });
            let family = match space.as_str() {
                "PW" => TableFamily::Pw,
                "W" => TableFamily::W,
                "WM" => TableFamily::Wm {
                    m: m.unwrap_or_else(|| fail(EXIT_USAGE, "--m is required for WM")),
                },
                other => fail(EXIT_USAGE, &format!("table supports PW, W, WM; got {other}")),
            };
            let parse_range = |s: &str| -> (u32, u32) {
                let parts: Vec<&str> = s.split("..").collect();
                match parts.as_slice() {
                    [a, b] => match (a.parse(), b.parse()) {
                        (Ok(a), Ok(b)) => (a, b),
                        _ => fail(EXIT_USAGE, &format!("bad range {s}")),
                    },
                    [a] => match a.parse() {
                        Ok(a) => (a, a),
                        _ => fail(EXIT_USAGE, &format!("bad range {s}")),
                    },
                    _ => fail(EXIT_USAGE, &format!("bad range {s}")),
                }
            };
            let n_range = parse_range(&n_range);
            let k_range = parse_range(&k_range);
            let p_set: Vec<u64> = p_set
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse()
                        .unwrap_or_else(|e| fail(EXIT_USAGE, &format!("bad prime: {e}")))
                })
                .collect();
            match verdict_table(&family, n_range, k_range, &p_set, workers) {
                Ok(rows) => {
                    match format {
                        Format::Json => print_json(&verdict_rows_json(&rows)),
                        Format::Csv => print!("{}", verdict_rows_csv(&rows)),
                        Format::Markdown => {
                            println!("| n | k | p | strongest | conclusion |\n|---|---|---|---|---|");
                            for r in &rows {
                                println!(
                                    "| {} | {} | {} | {} | {} |",
                                    r.n, r.k, r.p, r.strongest, r.conclusion
                                );
                            }
                        }
                    }
                    EXIT_OK
                }
                Err(e) => fail(exit_code_for(&e), &e.to_string()),
            }
        }
    };
    std::process::exit(code);
}
