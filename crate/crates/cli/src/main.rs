//! One binary, subcommand style. Every numeric input parses as an exact
//! integer or rational before any computation runs; JSON and CSV output stay
//! exact, SVG uses floating point for coordinates only.
//!
//! Exit status: 0 for a positive verdict (Stable, SemistablePhase0, the
//! phase-zero biconditional), 2 for NotApplicable, 1 for errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num::{BigRational, Signed, Zero};

use k3stab::emit;
use k3stab::{
    boundary_decomposition, central_charge, certify_a11, certify_a5, certify_a6,
    classify_fine_moduli, enumerate_destabilizers, in_vx, lambda, mukai_pairing, region_of,
    region_vl_pos, scan_region, verify_certificate, wall_locus, Assumptions, Certificate,
    MukaiVector, ScanGrid, SearchBounds, StabilityPoint, SurfaceContext, Verdict,
};

#[derive(Parser)]
#[command(
    name = "k3stab",
    version,
    about = "Exact stability computations on a rank-one K3 lattice"
)]
struct Cli {
    /// Output format: plain (default), json, csv (scan), svg (scan)
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Write output to a file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
    Svg,
}

#[derive(Subcommand)]
enum Command {
    /// Mukai pairing of two classes
    Pairing {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        w: String,
    },
    /// Central charge and lambda of a class at a point
    Charge {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
    },
    /// Geometric-chamber membership of a point
    Vx {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
    },
    /// Stability certificate, dispatched by the sign of lambda
    Certify {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        /// Sheaf-level assumption to assert (repeatable):
        /// gieseker-stable | mu-stable-locally-free | mu-semistable
        #[arg(long = "assume")]
        assume: Vec<String>,
        /// Cross-check a Stable verdict against the destabilizer search
        #[arg(long)]
        verify: bool,
        /// Rank bound of the destabilizer search
        #[arg(long, default_value_t = 20)]
        max_rank: u32,
    },
    /// Fine-moduli classification of an isotropic class
    Classify {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
    },
    /// Chamber verdict of a class at a point; without --v, the twist region
    /// of the ample generator
    Region {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long, allow_hyphen_values = true)]
        v: Option<String>,
    },
    /// Boundary decompositions of the point class for a spherical class
    Boundary {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
    },
    /// Wall curve of a pair of classes, with exact samples
    Walls {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        e: String,
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Region scan over a rational grid x0,x1,y0,y1,step
    Scan {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Wall overlays for SVG output: pair each --a with one --e
        #[arg(long = "a", allow_hyphen_values = true)]
        wall_a: Vec<String>,
        #[arg(long = "e", allow_hyphen_values = true)]
        wall_e: Vec<String>,
    },
    /// Destabilizer candidate search at a point
    Enumerate {
        #[arg(long)]
        d: String,
        #[arg(long, allow_hyphen_values = true)]
        v: String,
        #[arg(long, allow_hyphen_values = true)]
        sigma: String,
        #[arg(long, default_value_t = 20)]
        max_rank: u32,
        /// Drop the subobject-shape pruning and report raw phase violations
        #[arg(long)]
        no_subobject_filter: bool,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let out_path = cli.out.clone();
    match run(cli) {
        Ok((text, code)) => {
            if let Some(path) = out_path {
                if let Err(e) = fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn parse_ctx(d: &str) -> Result<SurfaceContext> {
    SurfaceContext::from_str(d).with_context(|| format!("invalid --d {d:?}"))
}

fn parse_vec(tag: &str, s: &str) -> Result<MukaiVector> {
    MukaiVector::from_str(s).with_context(|| format!("invalid --{tag} {s:?}"))
}

fn parse_sigma(s: &str) -> Result<StabilityPoint> {
    StabilityPoint::from_str(s).with_context(|| format!("invalid --sigma {s:?}"))
}

fn parse_grid(s: &str) -> Result<ScanGrid> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 5 {
        bail!("--grid expects x0,x1,y0,y1,step, got {s:?}");
    }
    let r = |p: &str| -> Result<BigRational> {
        k3stab::parse_rational(p).map_err(|e| anyhow!("invalid grid entry {p:?}: {e}"))
    };
    Ok(ScanGrid {
        x0: r(parts[0])?,
        x1: r(parts[1])?,
        y0: r(parts[2])?,
        y1: r(parts[3])?,
        step: r(parts[4])?,
    })
}

fn parse_assumptions(flags: &[String]) -> Result<Assumptions> {
    let mut a = Assumptions::default();
    for f in flags {
        match f.as_str() {
            "gieseker-stable" => a.gieseker_stable = true,
            "mu-stable-locally-free" => a.mu_stable_locally_free = true,
            "mu-semistable" => a.mu_semistable = true,
            other => bail!(
                "unknown --assume {other:?} (expected gieseker-stable, \
                 mu-stable-locally-free or mu-semistable)"
            ),
        }
    }
    Ok(a)
}

fn json_line(v: serde_json::Value) -> String {
    format!("{v}\n")
}

fn certificate_plain(cert: &Certificate) -> String {
    let mut s = format!("{} {}\n", cert.theorem, cert.verdict);
    if !cert.assumptions.is_empty() {
        s.push_str(&format!("assumptions: {}\n", cert.assumptions.join(", ")));
    }
    for h in &cert.hypotheses {
        let mark = if h.holds { "ok" } else { "FAIL" };
        s.push_str(&format!("  [{mark}] {}: {}\n", h.name, h.instance));
    }
    for c in &cert.conclusions {
        s.push_str(&format!("conclusion: {c}\n"));
    }
    s
}

fn certificate_exit(verdict: Verdict) -> u8 {
    match verdict {
        Verdict::Stable | Verdict::SemistablePhase0 | Verdict::StableIffMuStableLocallyFree => 0,
        Verdict::NotApplicable | Verdict::OnBoundary => 2,
    }
}

fn run(cli: Cli) -> Result<(String, u8)> {
    let format = cli.format;
    match cli.command {
        Command::Pairing { d, v, w } => {
            let ctx = parse_ctx(&d)?;
            let v = parse_vec("v", &v)?;
            let w = parse_vec("w", &w)?;
            let p = mukai_pairing(&v, &w, &ctx);
            let text = match format {
                Format::Json => json_line(serde_json::json!({ "pairing": p.to_string() })),
                _ => format!("{p}\n"),
            };
            Ok((text, 0))
        }

        Command::Charge { d, v, sigma } => {
            let ctx = parse_ctx(&d)?;
            let v = parse_vec("v", &v)?;
            let sigma = parse_sigma(&sigma)?;
            let z = central_charge(&v, &sigma, &ctx);
            let lam = lambda(&v, &sigma);
            let text = match format {
                Format::Json => json_line(emit::charge_to_json(&z, &lam)),
                _ => format!("Z = {z}\nlambda = {}\n", k3stab::fmt_rational(&lam)),
            };
            Ok((text, 0))
        }

        Command::Vx { d, sigma } => {
            let ctx = parse_ctx(&d)?;
            let sigma = parse_sigma(&sigma)?;
            let r = in_vx(&sigma, &ctx);
            let text = match format {
                Format::Json => json_line(emit::vx_to_json(&r)),
                _ => match &r.witness {
                    Some(w) => format!("in V(X): false\nwitness: {w}\n"),
                    None => "in V(X): true\n".to_string(),
                },
            };
            Ok((text, 0))
        }

        Command::Certify {
            d,
            v,
            sigma,
            assume,
            verify,
            max_rank,
        } => {
            let ctx = parse_ctx(&d)?;
            let v = parse_vec("v", &v)?;
            let sigma = parse_sigma(&sigma)?;
            let flags = parse_assumptions(&assume)?;
            let lam = lambda(&v, &sigma);
            let cert = if lam.is_zero() {
                certify_a6(&v, &sigma, &ctx, &flags)
            } else if lam.is_positive() {
                certify_a5(&v, &sigma, &ctx, &flags)
            } else {
                certify_a11(&v, &sigma, &ctx, &flags)
            };

            let mut oracle_note = None;
            if verify && cert.verdict == Verdict::Stable {
                let bounds = SearchBounds::with_max_rank(max_rank);
                let outcome = verify_certificate(&v, &sigma, &cert, &bounds, &ctx)?;
                oracle_note = Some(outcome);
            }

            let text = match format {
                Format::Json => {
                    let mut j = emit::certificate_to_json(&cert);
                    if let Some(o) = &oracle_note {
                        j["oracle"] = emit::verify_outcome_to_json(o);
                    }
                    json_line(j)
                }
                _ => {
                    let mut s = certificate_plain(&cert);
                    if let Some(o) = &oracle_note {
                        s.push_str(&format!("oracle: {o}\n"));
                    }
                    s
                }
            };
            Ok((text, certificate_exit(cert.verdict)))
        }

        Command::Classify { d, v } => {
            let ctx = parse_ctx(&d)?;
            let v = parse_vec("v", &v)?;
            let m = classify_fine_moduli(&v, &ctx);
            let text = match format {
                Format::Json => json_line(emit::classification_to_json(&m)),
                _ => {
                    let head = match &m.witness {
                        Some(w) => format!("{}, witness {w}\n", m.verdict),
                        None => format!("{}\n", m.verdict),
                    };
                    format!(
                        "{head}gcd: {}\nfine: {}\nrank_square: {}\n",
                        m.gcd, m.fine, m.rank_square
                    )
                }
            };
            Ok((text, 0))
        }

        Command::Region { d, sigma, v } => {
            let ctx = parse_ctx(&d)?;
            let sigma = parse_sigma(&sigma)?;
            match v {
                Some(v) => {
                    let v = parse_vec("v", &v)?;
                    let r = region_of(&v, &sigma, &ctx)?;
                    let text = match format {
                        Format::Json => json_line(emit::region_to_json(&r)),
                        _ => {
                            let mut s = format!("region: {}\n", r.region);
                            for h in &r.inequalities {
                                let mark = if h.holds { "ok" } else { "FAIL" };
                                s.push_str(&format!("  [{mark}] {}: {}\n", h.name, h.instance));
                            }
                            if let Some(w) = &r.vx_witness {
                                s.push_str(&format!("witness: {w}\n"));
                            }
                            s
                        }
                    };
                    Ok((text, 0))
                }
                None => {
                    let cert = region_vl_pos(&sigma, &ctx);
                    let text = match format {
                        Format::Json => json_line(emit::certificate_to_json(&cert)),
                        _ => certificate_plain(&cert),
                    };
                    Ok((text, certificate_exit(cert.verdict)))
                }
            }
        }

        Command::Boundary { d, a } => {
            let ctx = parse_ctx(&d)?;
            let a = parse_vec("a", &a)?;
            let dec = boundary_decomposition(&a, &ctx)?;
            let text = match format {
                Format::Json => json_line(emit::decomposition_to_json(&dec)),
                _ => {
                    let mut s = String::new();
                    for (tag, factors) in
                        [("plus", &dec.plus_factors), ("minus", &dec.minus_factors)]
                    {
                        s.push_str(&format!("{tag} factors:\n"));
                        for f in factors {
                            s.push_str(&format!(
                                "  {} x{} shift={} ({})\n",
                                f.vector, f.multiplicity, f.shift, f.label
                            ));
                        }
                    }
                    s.push_str(&format!(
                        "signed sums: {} / {}\n",
                        dec.plus_sum(),
                        dec.minus_sum()
                    ));
                    s
                }
            };
            Ok((text, 0))
        }

        Command::Walls { d, a, e, samples } => {
            let ctx = parse_ctx(&d)?;
            let a = parse_vec("a", &a)?;
            let e = parse_vec("e", &e)?;
            let wall = wall_locus(&a, &e, &ctx)?;
            let points = wall.sample(samples, &ctx);
            let text = match format {
                Format::Json => json_line(emit::wall_to_json(&wall, &points)),
                _ => {
                    let f = k3stab::fmt_rational;
                    let mut s = format!(
                        "curve: ({})x^2 + ({})y^2 + ({})x + ({}) = 0\n",
                        f(&wall.xx),
                        f(&wall.yy),
                        f(&wall.cx),
                        f(&wall.c0)
                    );
                    for p in &points {
                        let y =
                            p.y.as_ref()
                                .map(|y| format!(" y={}", f(y)))
                                .unwrap_or_default();
                        s.push_str(&format!("  x={} y^2={}{y}\n", f(&p.x), f(&p.y_squared)));
                    }
                    if points.is_empty() {
                        s.push_str("  (locus misses the upper half plane)\n");
                    }
                    s
                }
            };
            Ok((text, 0))
        }

        Command::Scan {
            d,
            v,
            grid,
            wall_a,
            wall_e,
        } => {
            let ctx = parse_ctx(&d)?;
            let v = parse_vec("v", &v)?;
            let grid = parse_grid(&grid)?;
            if wall_a.len() != wall_e.len() {
                bail!("each --a needs a matching --e for wall overlays");
            }
            let scan = scan_region(&v, &grid, &ctx)?;
            let mut walls = Vec::new();
            for (a, e) in wall_a.iter().zip(wall_e.iter()) {
                walls.push(wall_locus(&parse_vec("a", a)?, &parse_vec("e", e)?, &ctx)?);
            }
            let text = match format {
                Format::Json => json_line(emit::scan_to_json(&scan)),
                Format::Svg => emit::scan_to_svg(&scan, &walls),
                _ => emit::scan_to_csv(&scan),
            };
            Ok((text, 0))
        }

        Command::Enumerate {
            d,
            v,
            sigma,
            max_rank,
            no_subobject_filter,
        } => {
            let ctx = parse_ctx(&d)?;
            let v = parse_vec("v", &v)?;
            let sigma = parse_sigma(&sigma)?;
            let bounds = SearchBounds {
                max_rank,
                subobject_filter: !no_subobject_filter,
            };
            let found = enumerate_destabilizers(&v, &sigma, &bounds, &ctx)?;
            let text = match format {
                Format::Json => json_line(emit::candidates_to_json(&found, max_rank)),
                _ => {
                    let mut s = String::new();
                    for c in &found {
                        let tag = if c.on_wall { " [on-wall]" } else { "" };
                        s.push_str(&format!(
                            "{} N={}{tag}\n",
                            c.vector,
                            k3stab::fmt_rational(&c.n_value)
                        ));
                    }
                    s.push_str(&format!("count: {}\n", found.len()));
                    s
                }
            };
            Ok((text, 0))
        }
    }
}
