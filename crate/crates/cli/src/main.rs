//! `birat-surf`: exact birational-surface computations from the command
//! line.
//!
//! Exit codes: 0 on success, 1 on a domain-level negative verdict (a net
//! that is not homaloidal, an inconsistent invariant record, an impossible
//! classification case), 2 on malformed input.

mod io;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use birat_surf::classifier;
use birat_surf::cone;
use birat_surf::cremona;
use birat_surf::factorization;
use birat_surf::fibration;
use birat_surf::sarkisov;

#[derive(Parser)]
#[command(
    name = "birat-surf",
    version,
    about = "Exact-arithmetic birational geometry of rational surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct FormatOpt {
    /// JSON output.
    #[arg(long, global = false, conflicts_with = "text")]
    json: bool,
    /// Plain text output (default).
    #[arg(long)]
    text: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Quadratic Cremona transformations on homaloidal nets.
    Cremona {
        #[command(subcommand)]
        action: CremonaAction,
    },
    /// Noether-Castelnuovo factorization of a homaloidal net.
    Factor {
        /// Net file: {"class": {...}, "config": {...}}.
        #[arg(long)]
        net: String,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Sarkisov untwisting of a homaloidal net.
    Sarkisov {
        #[arg(long)]
        net: String,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Plurigenus table of an elliptic fibration.
    Plurigenus {
        /// Base genus.
        #[arg(long)]
        genus: i64,
        /// chi = deg (R^1 f_* O)^dual.
        #[arg(long)]
        chi: i64,
        /// Multiple-fibre multiplicities, comma separated (e.g. 2,6,6).
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        mults: Vec<i64>,
        /// Largest n in the table.
        #[arg(long, default_value_t = 12)]
        n_max: i64,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Zariski semidefiniteness check of a fibre matrix.
    Zariski {
        /// Matrix file: {"gram": [[...]], "weights": [...]}.
        #[arg(long)]
        matrix: String,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Kodaira-dimension classification of an invariant record.
    Classify {
        /// Invariants file.
        #[arg(long)]
        invariants: String,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Kleiman-Mori cone examples.
    Cone {
        #[command(subcommand)]
        action: ConeAction,
    },
}

#[derive(Subcommand)]
enum CremonaAction {
    /// Apply the quadratic map based at three points to a net.
    Apply {
        #[arg(long)]
        net: String,
        /// Base point ids, comma separated: i,j,k.
        #[arg(long, value_delimiter = ',')]
        base: Vec<u32>,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// Check the homaloidal conditions; exit 1 with a diagnostic if not.
    Check {
        #[arg(long)]
        net: String,
        #[command(flatten)]
        format: FormatOpt,
    },
}

#[derive(Subcommand)]
enum ConeAction {
    /// The cone of the Hirzebruch surface F_n.
    Hirzebruch {
        #[arg(long)]
        n: i64,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// All (-1)-classes on n general points (1 <= n <= 8).
    NegCurves {
        #[arg(long)]
        points: usize,
        #[command(flatten)]
        format: FormatOpt,
    },
    /// The three-collinear-points example with its exclusion checks.
    CollinearExample {
        #[command(flatten)]
        format: FormatOpt,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Cremona { action } => match action {
            CremonaAction::Apply { net, base, format } => {
                let (config, class) = io::load_net(&net)?;
                if base.len() != 3 {
                    anyhow::bail!("--base needs exactly three point ids, got {}", base.len());
                }
                let ids = [
                    birat_surf::PointId(base[0]),
                    birat_surf::PointId(base[1]),
                    birat_surf::PointId(base[2]),
                ];
                let map = match cremona::QuadraticMap::based_at(&config, ids) {
                    Ok(m) => m,
                    Err(e) => return domain_failure(&format!("invalid base: {e}")),
                };
                let (out_cfg, out_cls) = match cremona::quadratic_transform(&class, &config, &map)
                {
                    Ok(x) => x,
                    Err(e) => return domain_failure(&format!("transform failed: {e}")),
                };
                if format.json {
                    println!("{}", io::net_json(&out_cfg, &out_cls)?);
                } else {
                    println!("kind: {:?}", map.kind);
                    println!("net:  {out_cls}");
                }
                Ok(ExitCode::SUCCESS)
            }
            CremonaAction::Check { net, format } => {
                let (config, class) = io::load_net(&net)?;
                match cremona::homaloidal_diagnostics(&class, &config) {
                    Ok(()) => {
                        if format.json {
                            println!("{{\"homaloidal\":true}}");
                        } else {
                            println!("homaloidal: {class}");
                        }
                        Ok(ExitCode::SUCCESS)
                    }
                    Err(v) => {
                        if format.json {
                            println!(
                                "{}",
                                serde_json::json!({"homaloidal": false, "reason": v.to_string()})
                            );
                        } else {
                            println!("not homaloidal: {v}");
                        }
                        Ok(ExitCode::from(1))
                    }
                }
            }
        },
        Command::Factor { net, format } => {
            let (config, class) = io::load_net(&net)?;
            let net = match cremona::HomaloidalNet::new(class, config) {
                Ok(n) => n,
                Err(e) => return domain_failure(&format!("{e}")),
            };
            let trace = match factorization::factor(&net) {
                Ok(t) => t,
                Err(e) => return domain_failure(&format!("factorization failed: {e}")),
            };
            if format.json {
                println!("{}", io::factor_json(&trace)?);
            } else {
                println!(
                    "initial: {} simplicity {}",
                    net.cls, trace.initial_simplicity
                );
                for (i, step) in trace.steps.iter().enumerate() {
                    println!(
                        "step {:>2}: {}  base {},{},{}  ->  {}  simplicity {}",
                        i + 1,
                        step.case,
                        step.map.base[0],
                        step.map.base[1],
                        step.map.base[2],
                        step.net_after.cls,
                        step.simplicity_after
                    );
                }
                println!("terminal: {:?}", trace.terminal);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sarkisov { net, format } => {
            let (config, class) = io::load_net(&net)?;
            let trace = match sarkisov::run_sarkisov(&class, &config) {
                Ok(t) => t,
                Err(e) => return domain_failure(&format!("{e}")),
            };
            if format.json {
                println!("{}", serde_json::to_string_pretty(&trace)?);
            } else {
                println!("initial degree: {}", trace.initial_degree);
                for link in &trace.links {
                    println!(
                        "link {:>3}  center {:<4} model {:<3} degree {}",
                        link.kind.to_string(),
                        link.center.as_deref().unwrap_or("-"),
                        link.model.to_string(),
                        link.degree
                    );
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Plurigenus {
            genus,
            chi,
            mults,
            n_max,
            format,
        } => {
            let f = match fibration::EllipticFibration::new(genus, chi, mults) {
                Ok(f) => f,
                Err(e) => return domain_failure(&format!("{e}")),
            };
            let table: Vec<(i64, i64)> = (1..=n_max.max(1))
                .map(|n| (n, fibration::plurigenus_bound(&f, n)))
                .collect();
            if format.json {
                let summary = fibration::canonical_formula_summary(&f);
                println!(
                    "{}",
                    serde_json::json!({
                        "plurigenera": table.iter().map(|(n, p)| serde_json::json!({"n": n, "P": p})).collect::<Vec<_>>(),
                        "exact_for_isotrivial": summary.exact_for_isotrivial,
                        "pullback_power": summary.pullback_power,
                    })
                );
            } else {
                for (n, p) in table {
                    println!("P_{n} = {p}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Zariski { matrix, format } => {
            let m = io::load_matrix(&matrix)?;
            let verdict = fibration::zariski_check(&m);
            if format.json {
                println!("{}", serde_json::to_string_pretty(&verdict)?);
            } else {
                println!(
                    "semidefinite: {}  kernel dimension: {}  kernel = span(weights): {}",
                    verdict.semidefinite, verdict.kernel_dim, verdict.kernel_is_span_of_weights
                );
            }
            if verdict.semidefinite {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
        Command::Classify { invariants, format } => {
            let record = io::load_invariants(&invariants)?;
            let violations = classifier::consistency_check(&record);
            match classifier::classify(&record) {
                Ok(c) => {
                    if format.json {
                        println!(
                            "{}",
                            serde_json::json!({
                                "kappa": format!("{}", c.kappa),
                                "subclass": c.subclass,
                                "canonical_order": c.canonical_order,
                                "admissible_orders": c.admissible_orders,
                                "violations": violations.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                            })
                        );
                    } else {
                        println!("kappa = {}", c.kappa);
                        if let Some(sub) = c.subclass {
                            println!("class: {sub:?}");
                        }
                        if let Some(k) = c.canonical_order {
                            println!("canonical order: {k}");
                        }
                        if let Some(adm) = &c.admissible_orders {
                            println!("admissible orders: {adm:?}");
                        }
                    }
                    Ok(ExitCode::SUCCESS)
                }
                Err(e) => domain_failure(&format!("{e}")),
            }
        }
        Command::Cone { action } => match action {
            ConeAction::Hirzebruch { n, format } => {
                if n < 0 {
                    return domain_failure("n must be non-negative");
                }
                let cone = cone::hirzebruch_cone(n);
                if format.json {
                    println!("{}", serde_json::to_string_pretty(&cone)?);
                } else {
                    for ray in &cone.rays {
                        println!(
                            "ray ({}, {})  self-intersection {}",
                            ray.fibre,
                            ray.section,
                            ray.self_intersection(n)
                        );
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
            ConeAction::NegCurves { points, format } => {
                let config = birat_surf::PointConfig::proper_points(points);
                let classes = match cone::enumerate_minus_one_classes(&config) {
                    Ok(c) => c,
                    Err(e) => return domain_failure(&format!("{e}")),
                };
                if format.json {
                    println!("{}", serde_json::to_string_pretty(&classes)?);
                } else {
                    println!("{} classes", classes.len());
                    for c in &classes {
                        println!("{c}");
                    }
                }
                Ok(ExitCode::SUCCESS)
            }
            ConeAction::CollinearExample { format } => {
                let report = cone::collinear_blowup_cone();
                if format.json {
                    println!("{}", serde_json::to_string_pretty(&report)?);
                } else {
                    println!("(-K)^2 = {}", report.anticanonical_square);
                    for (ray, deg) in report.cone.rays.iter().zip(&report.anticanonical_degrees) {
                        println!("ray {ray}  -K.R = {deg}");
                    }
                    println!("K-trivial ray unique: {}", report.k_trivial_ray_unique);
                    println!("no other K-trivial class: {}", report.no_other_k_trivial);
                    println!("no other (-1)-class: {}", report.no_other_minus_one);
                    println!("all rays extremal: {}", report.rays_extremal);
                }
                Ok(ExitCode::SUCCESS)
            }
        },
    }
}

fn domain_failure(msg: &str) -> anyhow::Result<ExitCode> {
    eprintln!("{msg}");
    Ok(ExitCode::from(1))
}
