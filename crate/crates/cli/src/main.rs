//! Command-line interface for the order-type inscription toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 domain error, 3 search budget
//! exhausted without a witness (distinguishable for scripting).

use std::io::Read;

use clap::{Parser, Subcommand};

use inscribe_core::counting::{
    conowheel_count, enumerate_order_types_two_interior, lozenge_count, two_interior_pair_total,
    Convention,
};
use inscribe_core::exec::Mode;
use inscribe_core::families::{
    make_interior_circle_gadget, make_non_pascal, make_pn, make_pn_default, make_pn_minus,
    make_star_default, pascal_collinear, PnDeletion, PnParams,
};
use inscribe_core::geometry::{CirclePoint, Configuration};
use inscribe_core::io as fio;
use inscribe_core::mobius::{inscribed_polygons, MapKind, QuadraticNumber};
use inscribe_core::order_type::{canonical_form, chirotope, contains_suborder, Chirotope};
use inscribe_core::rat::parse_rat;
use inscribe_core::search::{search_inscription, SearchBudget, Verdict};
use inscribe_core::staircase::{function_representation, inscribe_staircase, StaircasePair};

#[derive(Parser)]
#[command(name = "inscribe", version, about = "Exact planar order types on the circle")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a named configuration as a points file.
    Gen {
        #[command(subcommand)]
        what: GenCmd,
    },
    /// Convert a points file to a chirotope file.
    Chi { file: String },
    /// Function representation of a points file for distinguished labels.
    Repr {
        file: String,
        #[arg(long = "L")]
        l: String,
        #[arg(long = "R")]
        r: String,
    },
    /// Inscribe a staircase pair (text format) as a points file.
    #[command(name = "inscribe-pair")]
    InscribePair { file: String },
    /// Exact counts and the order-type census.
    Count {
        #[command(subcommand)]
        what: CountCmd,
    },
    /// Find the inscribed polygons through a set of crossing points.
    Polygons { file: String },
    /// Search for a sign-preserving injection of a pattern chirotope.
    Contains { host: String, pattern: String },
    /// Randomized inscription search with exact verification.
    Search {
        chi: String,
        /// Circle-bound labels: `hull` or comma-separated indices.
        #[arg(long = "B")]
        b: String,
        #[arg(long)]
        restarts: Option<u32>,
        #[arg(long)]
        iters: Option<u32>,
        /// Overrides the INSCRIBE_SEED environment variable.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Pascal collinearity check for six concyclic points.
    Pascal { file: String },
    /// Canonical order-type code of a points file, as lowercase hex.
    Canon { file: String },
    /// Best-effort SVG rendering of a points file.
    Svg { file: String },
}

#[derive(Subcommand)]
enum GenCmd {
    /// The minimally uninscribable configuration P_n.
    Pn {
        n: usize,
        /// Offset of the bisector lines, as num/den (default: auto schedule).
        #[arg(long)]
        eps: Option<String>,
    },
    /// Star configuration for a 1-based permutation like `2,3,1`.
    Star { sigma: String },
    /// The non-Pascal configuration (6 extreme, 3 interior).
    Nonpascal,
    /// The interior-on-circle gadget (3 extreme, 6 interior).
    Gadget,
    /// Inscribed realization of P_n minus one point (`a1`, `b1` or `dn`).
    Pnminus { n: usize, which: String },
}

#[derive(Subcommand)]
enum CountCmd {
    /// Conowheel order types of size n+1 (closed formula).
    Conowheel { n: u64 },
    /// Lozenge tilings of the (a, b, c) hexagon.
    Lozenge { a: u64, b: u64, c: u64 },
    /// Total number of staircase pairs of total degree n.
    Pairs { n: u64 },
    /// Census of order types with at most 2 interior points of size n+2.
    Census {
        n: usize,
        /// `orientation` (default) or `reflection`.
        #[arg(long)]
        convention: Option<String>,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes.
            if e.use_stderr() {
                eprint!("{e}");
                std::process::exit(1);
            }
            print!("{e}");
            std::process::exit(0);
        }
    };
    std::process::exit(run(cli));
}

fn read_input(path: &str) -> Result<String, String> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| e.to_string())?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))
    }
}

fn domain_err(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    2
}

fn load_points(path: &str) -> Result<Configuration, String> {
    fio::parse_points(&read_input(path)?).map_err(|e| e.to_string())
}

fn load_chirotope(path: &str) -> Result<Chirotope, String> {
    fio::parse_chirotope(&read_input(path)?).map_err(|e| e.to_string())
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Gen { what } => gen(what),
        Command::Chi { file } => with_points(&file, |cfg| {
            let chi = chirotope(&cfg).map_err(|e| e.to_string())?;
            print!("{}", fio::write_chirotope(&chi));
            Ok(0)
        }),
        Command::Repr { file, l, r } => with_points(&file, |cfg| {
            let pair = function_representation(&cfg, &l, &r).map_err(|e| e.to_string())?;
            print!("{}", pair.to_text());
            Ok(0)
        }),
        Command::InscribePair { file } => match read_input(&file)
            .and_then(|text| StaircasePair::from_text(&text).map_err(|e| e.to_string()))
        {
            Ok(pair) => match inscribe_staircase(&pair) {
                Ok(ins) => {
                    print!("{}", fio::write_points(&ins.config));
                    0
                }
                Err(e) => domain_err(e),
            },
            Err(e) => domain_err(e),
        },
        Command::Count { what } => count(what),
        Command::Polygons { file } => with_points(&file, |cfg| {
            let crossings: Vec<_> = cfg.iter().map(|p| p.point.clone()).collect();
            let out = inscribed_polygons(&crossings).map_err(|e| e.to_string())?;
            println!("polygons={}", out.polygons.len());
            let kind = match out.class.kind {
                MapKind::Identity => "identity",
                MapKind::Elliptic => "elliptic",
                MapKind::Parabolic => "parabolic",
                MapKind::Hyperbolic => "hyperbolic",
            };
            println!("kind={kind}");
            let field = out
                .class
                .fixed_points
                .iter()
                .find_map(|fp| match fp {
                    inscribe_core::mobius::QuadParam::Finite(q) => {
                        q.radicand().map(|d| d.to_string())
                    }
                    inscribe_core::mobius::QuadParam::Infinity => None,
                })
                .unwrap_or_else(|| "rational".into());
            println!("field={field}");
            if let Some(r) = &out.class.multiplier {
                let sign = r.sub(&QuadraticNumber::from_int(1)).sign();
                println!("r_minus_1_sign={sign}");
            }
            for (i, poly) in out.polygons.iter().enumerate() {
                let verts: Vec<String> = poly
                    .iter()
                    .map(|v| match v.as_circle_point() {
                        Some(t) => format!("{t}"),
                        None => format!("angle:{:.6}", v.angle_f64()),
                    })
                    .collect();
                println!("polygon{}={}", i + 1, verts.join(" "));
            }
            Ok(0)
        }),
        Command::Contains { host, pattern } => {
            let host_cfg = match load_points(&host) {
                Ok(c) => c,
                Err(e) => return domain_err(e),
            };
            let pat = match load_chirotope(&pattern) {
                Ok(c) => c,
                Err(e) => return domain_err(e),
            };
            let host_chi = match chirotope(&host_cfg) {
                Ok(c) => c,
                Err(e) => return domain_err(e),
            };
            match contains_suborder(&host_chi, &pat) {
                Some(inj) => {
                    for (i, h) in inj.iter().enumerate() {
                        println!("{i} -> {}", host_cfg.labeled(*h).label);
                    }
                    0
                }
                None => {
                    println!("none");
                    0
                }
            }
        }
        Command::Search { chi, b, restarts, iters, seed } => {
            let target = match load_chirotope(&chi) {
                Ok(c) => c,
                Err(e) => return domain_err(e),
            };
            let b_set: Vec<usize> = if b == "hull" {
                target.extreme_points()
            } else {
                match b.split(',').map(|s| s.trim().parse::<usize>()).collect() {
                    Ok(v) => v,
                    Err(_) => return domain_err("--B expects `hull` or comma-separated indices"),
                }
            };
            let env_seed = std::env::var("INSCRIBE_SEED").ok().and_then(|s| s.parse().ok());
            let mut budget = SearchBudget::default();
            budget.seed = seed.or(env_seed).unwrap_or(0);
            if let Some(r) = restarts {
                budget.restarts = r;
            }
            if let Some(i) = iters {
                budget.iterations = i;
            }
            match search_inscription(&target, &b_set, &budget) {
                Ok(Verdict::InscribedExact(witness)) => {
                    print!("{}", fio::write_points(&witness));
                    0
                }
                Ok(Verdict::NotFound(stats)) => {
                    println!("verdict=not-found");
                    println!("best_energy={:e}", stats.best_energy);
                    println!("restarts_used={}", stats.restarts_used);
                    3
                }
                Err(e) => domain_err(e),
            }
        }
        Command::Pascal { file } => with_points(&file, |cfg| {
            let params: Option<Vec<CirclePoint>> =
                cfg.iter().map(|p| p.circle.clone()).collect();
            let params = params.ok_or("every point needs an exact t= parameter")?;
            let six: [CirclePoint; 6] =
                params.try_into().map_err(|_| "need exactly 6 points".to_string())?;
            let collinear = pascal_collinear(&six).map_err(|e| e.to_string())?;
            println!("collinear={collinear}");
            Ok(0)
        }),
        Command::Canon { file } => with_points(&file, |cfg| {
            let chi = chirotope(&cfg).map_err(|e| e.to_string())?;
            let code = canonical_form(&chi).map_err(|e| e.to_string())?;
            println!("{code}");
            Ok(0)
        }),
        Command::Svg { file } => with_points(&file, |cfg| {
            print!("{}", fio::to_svg(&cfg));
            Ok(0)
        }),
    }
}

fn with_points(path: &str, f: impl FnOnce(Configuration) -> Result<i32, String>) -> i32 {
    match load_points(path).and_then(f) {
        Ok(code) => code,
        Err(e) => domain_err(e),
    }
}

fn gen(what: GenCmd) -> i32 {
    let result: Result<Configuration, String> = match what {
        GenCmd::Pn { n, eps } => {
            if n < 3 {
                Err("need n >= 3".into())
            } else {
                match eps {
                    Some(e) => match parse_rat(&e) {
                        Some(eps) => {
                            make_pn(&PnParams { n, epsilon: eps, d_weights: (1, 1, 1) })
                                .map_err(|e| e.to_string())
                        }
                        None => Err("--eps expects num/den".into()),
                    },
                    None => Ok(make_pn_default(n)),
                }
            }
        }
        GenCmd::Star { sigma } => {
            let parsed: Result<Vec<usize>, _> =
                sigma.split(',').map(|s| s.trim().parse::<usize>()).collect();
            match parsed {
                Ok(vals) if vals.iter().all(|&v| v >= 1) => {
                    let zero_based: Vec<usize> = vals.iter().map(|&v| v - 1).collect();
                    make_star_default(zero_based).map_err(|e| e.to_string())
                }
                _ => Err("sigma expects a comma-separated 1-based permutation".into()),
            }
        }
        GenCmd::Nonpascal => Ok(make_non_pascal()),
        GenCmd::Gadget => Ok(make_interior_circle_gadget()),
        GenCmd::Pnminus { n, which } => {
            let deletion = match which.as_str() {
                "a1" => Some(PnDeletion::A1),
                "b1" => Some(PnDeletion::B1),
                "dn" => Some(PnDeletion::Dn),
                _ => None,
            };
            match deletion {
                Some(d) if n >= 3 => make_pn_minus(n, d).map_err(|e| e.to_string()),
                Some(_) => Err("need n >= 3".into()),
                None => Err("which must be one of a1, b1, dn".into()),
            }
        }
    };
    match result {
        Ok(cfg) => {
            print!("{}", fio::write_points(&cfg));
            0
        }
        Err(e) => domain_err(e),
    }
}

fn count(what: CountCmd) -> i32 {
    match what {
        CountCmd::Conowheel { n } => {
            if n < 3 {
                return domain_err("need n >= 3");
            }
            println!("{}", conowheel_count(n));
            0
        }
        CountCmd::Lozenge { a, b, c } => {
            println!("{}", lozenge_count(a, b, c));
            0
        }
        CountCmd::Pairs { n } => {
            println!("{}", two_interior_pair_total(n));
            0
        }
        CountCmd::Census { n, convention } => {
            let convention = match convention.as_deref() {
                None | Some("orientation") => Convention::OrientationPreserving,
                Some("reflection") => Convention::ReflectionInclusive,
                Some(other) => {
                    return domain_err(format!(
                        "unknown convention {other:?}; use orientation or reflection"
                    ))
                }
            };
            if n > 9 {
                return domain_err("census limited to n <= 9");
            }
            let report = enumerate_order_types_two_interior(n, convention, Mode::Auto);
            print!("{}", report.to_text());
            0
        }
    }
}
