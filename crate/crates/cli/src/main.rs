use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use gapbound::gap::{gb, gbe, verify_certificate, GapBoundCertificate, DEFAULT_MAX_ITER};
use gapbound::pipeline::{
    best_certificates, builtin_ancestors, filter_ancestors, parse_vertex_file, run_family,
    serialize_vertices, successor_sweep, survey,
};
use gapbound::polytope::is_vertex;
use gapbound::{rational, Rational, SepPoint};

#[derive(Parser)]
#[command(name = "gapbound", version, about = "Certified integrality gap bounds for subtour polytope vertices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Bounds {
    /// Target bound, as an integer or `num/den`.
    #[arg(long, default_value = "4/3", value_parser = parse_rational)]
    alpha: Rational,
    /// Maximum number of additional GB runs per point.
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every point of a vertex file is a vertex of the subtour polytope.
    CheckVertex { input: PathBuf },
    /// Run GB on every point of a vertex file.
    Gb {
        input: PathBuf,
        #[arg(long, default_value = "4/3", value_parser = parse_rational)]
        alpha: Rational,
        /// Directory for certificates and the JSON report.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run GBe on every point of a vertex file.
    Gbe {
        input: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the ancestors of family `k` in vertex-file format.
    Ancestors {
        #[arg(long)]
        k: usize,
        /// Vertex file to filter instead of the built-in data.
        input: Option<PathBuf>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run GBe over all ancestors of family `k`.
    RunFamily {
        #[arg(long)]
        k: usize,
        input: Option<PathBuf>,
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also check this many random successors per ancestor against its bound.
        #[arg(long, default_value_t = 0)]
        samples: usize,
        /// Seed for the successor sampling.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Gap⁺ of every vertex class on `n <= 6` nodes.
    Survey {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check certificates without solving any linear program.
    VerifyCert {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn write_certificates(dir: &Path, prefix: &str, certs: &[GapBoundCertificate]) -> Result<()> {
    for (i, c) in certs.iter().enumerate() {
        write(&dir.join("certificates").join(format!("{prefix}{i}.json")), &c.to_json())?;
    }
    Ok(())
}

fn emit_json(out: Option<&Path>, name: &str, value: &serde_json::Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match out {
        Some(dir) => write(&dir.join(name), &text),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Vec<SepPoint>> {
    parse_vertex_file(path).with_context(|| format!("reading {}", path.display()))
}

fn main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::CheckVertex { input } => {
            let mut ok = true;
            for (i, x) in load(&input)?.iter().enumerate() {
                let r = is_vertex(x)?;
                println!(
                    "{i}: n={} |E|={} tight={} rank={} vertex={}",
                    x.node_count(),
                    x.edge_count(),
                    r.tight_count,
                    r.tight_rank,
                    r.is_vertex
                );
                ok &= r.is_vertex;
            }
            Ok(exit(ok))
        }
        Command::Gb { input, alpha, out } => {
            let mut rows = Vec::new();
            let mut certs = Vec::new();
            println!("{:>5} {:>3} {:>4} {:>10} {:>10} {:>10}", "index", "n", "|E|", "Gap+", "C*", "GB");
            for (i, x) in load(&input)?.iter().enumerate() {
                let (r, cert) = gb(x)?;
                println!(
                    "{i:>5} {:>3} {:>4} {:>10} {:>10} {:>10}",
                    x.node_count(),
                    x.edge_count(),
                    r.gap_plus.to_string(),
                    r.c_star.to_string(),
                    r.bound.to_string()
                );
                rows.push(serde_json::json!({
                    "index": i,
                    "gap_plus": rational::format(&r.gap_plus),
                    "c_star": rational::format(&r.c_star),
                    "bound": rational::format(&r.bound),
                    "within_alpha": r.bound <= alpha,
                }));
                certs.push(cert);
            }
            let ok = certs.iter().all(|c| c.bound <= alpha);
            if let Some(dir) = &out {
                write_certificates(dir, "gb_", &certs)?;
            }
            emit_json(out.as_deref(), "gb_report.json", &serde_json::json!({ "alpha": rational::format(&alpha), "rows": rows }))?;
            Ok(exit(ok))
        }
        Command::Gbe { input, bounds, out } => {
            let mut rows = Vec::new();
            let mut certs = Vec::new();
            println!("{:>5} {:>3} {:>4} {:>10} {:>5}  moves", "index", "n", "|E|", "GBe", "iters");
            for (i, x) in load(&input)?.iter().enumerate() {
                let o = gbe(x, &bounds.alpha, bounds.max_iter)?;
                let moves: Vec<String> = o.moves.iter().map(|e| e.to_string()).collect();
                println!(
                    "{i:>5} {:>3} {:>4} {:>10} {:>5}  {}",
                    x.node_count(),
                    x.edge_count(),
                    o.bound.to_string(),
                    o.iterations,
                    moves.join(" ")
                );
                rows.push(serde_json::json!({
                    "index": i,
                    "bound": rational::format(&o.bound),
                    "iterations": o.iterations,
                    "moves": moves,
                    "within_alpha": o.bound <= bounds.alpha,
                }));
                certs.push(o.certificates[o.best].clone());
            }
            let ok = certs.iter().all(|c| c.bound <= bounds.alpha);
            if let Some(dir) = &out {
                write_certificates(dir, "gbe_", &certs)?;
            }
            let report = serde_json::json!({
                "alpha": rational::format(&bounds.alpha),
                "max_iter": bounds.max_iter,
                "rows": rows,
            });
            emit_json(out.as_deref(), "gbe_report.json", &report)?;
            Ok(exit(ok))
        }
        Command::Ancestors { k, input, out } => {
            let ancestors = match input {
                Some(path) => filter_ancestors(&load(&path)?, k),
                None => match builtin_ancestors(k)? {
                    Some(a) => a,
                    None => {
                        println!("k={k}: source data absent");
                        return Ok(ExitCode::FAILURE);
                    }
                },
            };
            let text = serialize_vertices(&ancestors);
            match out {
                Some(path) => write(&path, &text)?,
                None => print!("{text}"),
            }
            eprintln!("k={k}: {} ancestors", ancestors.len());
            Ok(ExitCode::SUCCESS)
        }
        Command::RunFamily {
            k,
            input,
            bounds,
            out,
            samples,
            seed,
        } => {
            let ancestors = match input {
                Some(path) => filter_ancestors(&load(&path)?, k),
                None => match builtin_ancestors(k)? {
                    Some(a) => a,
                    None => {
                        println!("k={k}: source data absent");
                        return Ok(ExitCode::FAILURE);
                    }
                },
            };
            let (report, outcomes) = run_family(k, &ancestors, &bounds.alpha, bounds.max_iter)?;
            print!("{}", report.table());
            let mut ok = report.all_within_alpha();
            let mut sweep = Vec::new();
            if samples > 0 {
                for (i, (x, o)) in ancestors.iter().zip(&outcomes).enumerate() {
                    let rows = successor_sweep(x, &o.bound, samples, 6, seed.wrapping_add(i as u64))?;
                    let bad = rows.iter().filter(|r| !r.within_bound).count();
                    println!("ancestor {i}: {samples} random successors, {bad} above the bound");
                    ok &= bad == 0;
                    sweep.push(serde_json::json!({ "index": i, "rows": rows }));
                }
            }
            let mut json = serde_json::to_value(&report)?;
            if samples > 0 {
                json["successor_sweep"] = serde_json::json!({ "seed": seed, "ancestors": sweep });
            }
            if let Some(dir) = &out {
                write_certificates(dir, &format!("k{k}_"), &best_certificates(&outcomes))?;
            }
            emit_json(out.as_deref(), &format!("family_k{k}.json"), &json)?;
            Ok(exit(ok))
        }
        Command::Survey { n, out } => {
            let rows = survey(n)?;
            println!("{:>4} {:>4} {:>10}", "id", "|E|", "Gap+");
            for r in &rows {
                println!("{:>4} {:>4} {:>10}", r.id, r.edges, r.gap_plus.to_string());
            }
            emit_json(out.as_deref(), &format!("survey_n{n}.json"), &serde_json::to_value(&rows)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyCert { files } => {
            let mut ok = true;
            for f in &files {
                let text = std::fs::read_to_string(f).with_context(|| format!("reading {}", f.display()))?;
                let verdict = GapBoundCertificate::from_json(&text)
                    .map_err(|e| e.to_string())
                    .and_then(|c| verify_certificate(&c).map(|_| c.bound).map_err(|e| e.to_string()));
                match verdict {
                    Ok(bound) => println!("{}: ok, bound {bound}", f.display()),
                    Err(e) => {
                        println!("{}: REJECTED, {e}", f.display());
                        ok = false;
                    }
                }
            }
            Ok(exit(ok))
        }
    }
}
