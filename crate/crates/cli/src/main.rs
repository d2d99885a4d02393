mod report;

use std::collections::BTreeMap;
use std::io::Read;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use eqkr::algebra::{parse_q, IndexConvention, Q};
use eqkr::corpus::CorpusParams;
use eqkr::couple::{couple_from_complex, couple_page_range, default_window};
use eqkr::decomposition::decompose;
use eqkr::frontend::delta::{default_lambdas, delta_battery, scaling_holds};
use eqkr::frontend::twobraid::expected_decomposition;
use eqkr::frontend::{build_sl2_cube, build_twobraid, LinkDiagram, Sl2Potential, TwoBraidSpec};
use eqkr::json::{self, FORMAT};
use eqkr::recovery::{recover, RecoveryError};
use eqkr::spectral::{assembled_pages, generic_pages};
use eqkr::verify::verify;
use serde_json::{json, Value};

use report::{format_table, Report};

/// Exit code for input that fails to parse or validate.
const EXIT_INVALID: u8 = 2;
/// Exit code for page sequences no decomposition produces.
const EXIT_INCONSISTENT: u8 = 3;
/// Exit code when `verify` finds a failing item.
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(name = "eqkr", version, about = "Equivariant sl(N) link homology: decompositions, pages, exact couples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Emit {
    /// Decomposition, tables, thickness, pages and rank of d1.
    Report,
    /// The complex itself, for the other subcommands.
    Complex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Index {
    /// Couple pages at `(homological degree, polynomial degree)`.
    Tilde,
    /// Couple pages moved to the matching spectral sequence positions.
    Hat,
}

#[derive(Subcommand)]
enum Command {
    /// Split a complex into free and torsion pieces.
    Decompose {
        /// complex JSON, or - for stdin
        input: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Spectral sequence pages of a complex.
    Pages {
        input: String,
        #[arg(long, default_value_t = 1)]
        from: u32,
        /// Last page; defaults to the collapse page plus one.
        #[arg(long)]
        to: Option<u32>,
        /// Module-valued pages over Q[a] instead of dimensions at a = 1.
        #[arg(long)]
        modules: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Recover the decomposition from a page sequence.
    Recover {
        input: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Pages of the exact couple of a complex, as a page sequence.
    Couple {
        input: String,
        /// Number of pages; defaults to tw + 2.
        #[arg(long)]
        r_max: Option<u32>,
        #[arg(long, value_enum, default_value = "tilde")]
        index: Index,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The closed 2-braid for general N.
    Twobraid {
        #[arg(long = "N", alias = "n")]
        n: u32,
        /// Use P_i = x^{N+1} + b x^i.
        #[arg(long)]
        i: Option<u32>,
        /// With --lambda, the degree parameter of the potential.
        #[arg(long)]
        k: Option<i64>,
        /// Coefficients as j=value, e.g. --lambda 2=1 for a^2 x^{N+1-2k}.
        #[arg(long, value_delimiter = ',')]
        lambda: Vec<String>,
        #[arg(long, value_enum, default_value = "report")]
        emit: Emit,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// A link diagram through the N = 2 cube of resolutions.
    Link {
        /// PD JSON file; omit when using --braid.
        input: Option<String>,
        #[arg(long)]
        braid: Option<String>,
        #[arg(long)]
        strands: Option<usize>,
        #[arg(long, default_value_t = 2)]
        k: i64,
        #[arg(long, default_value = "-1", allow_hyphen_values = true)]
        lambda1: String,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        lambda2: String,
        #[arg(long, value_enum, default_value = "report")]
        emit: Emit,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The δ_i differentials of the closed 2-braid.
    Delta {
        #[arg(long = "N", alias = "n")]
        n: u32,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Cross-check every pipeline on a seeded corpus.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, value_enum, default_value = "table")]
        format: Format,
    },
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure { code: 1, error: e.into() }
    }
}

fn invalid(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: EXIT_INVALID, error: e.into() }
}

fn read_input(path: &str) -> Result<String, Failure> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s)?;
    } else {
        s = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    }
    Ok(s)
}

fn parse_rational(s: &str) -> Result<Q, Failure> {
    parse_q(s).ok_or_else(|| invalid(anyhow::anyhow!("bad rational {s:?}")))
}

fn output(format: Format, v: &Value, table: impl FnOnce() -> String) {
    match format {
        Format::Json => print!("{}", json::to_string(v)),
        Format::Table => print!("{}", table()),
    }
}

fn seed_from_env(seed: u64) -> Result<u64, Failure> {
    match std::env::var("TW_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| invalid(anyhow::anyhow!("TW_SEED must be an unsigned integer, got {s:?}"))),
        Err(_) => Ok(seed),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Decompose { input, format } => {
            let c = json::complex_from_json(&read_input(&input)?).map_err(invalid)?;
            let d = decompose(&c).map_err(invalid)?;
            output(format, &json::decomposition_to_json(&d), || format!("{d}\n"));
        }
        Command::Pages { input, from, to, modules, format } => {
            let c = json::complex_from_json(&read_input(&input)?).map_err(invalid)?;
            let d = decompose(&c).map_err(invalid)?;
            let to = to.unwrap_or(eqkr::spectral::collapse_page(&d) + 1);
            if from < 1 || to < from {
                return Err(invalid(anyhow::anyhow!("page range {from}..={to} is empty or starts below 1")));
            }
            let hat = c.specialize_a_to_1();
            let pages: Vec<_> = (from..=to)
                .map(|r| if modules { assembled_pages(&d, false, r) } else { generic_pages(&hat, r) })
                .collect();
            let v = json!({
                "format": FORMAT,
                "type": "page_list",
                "pages": pages.iter().map(json::page_to_json).collect::<Vec<_>>(),
            });
            output(format, &v, || {
                pages
                    .iter()
                    .map(|p| match p.field() {
                        Some(t) => format!("E_{} (p, q): {}\n", p.r, format_table(t)),
                        None => {
                            let m = p.modules().unwrap();
                            let body: Vec<String> = m.iter().map(|((a, b), d)| format!("({a},{b}) {d}")).collect();
                            format!("E_{}: {}\n", p.r, if body.is_empty() { "0".into() } else { body.join("; ") })
                        }
                    })
                    .collect()
            });
        }
        Command::Recover { input, format } => {
            let ps = json::page_sequence_from_json(&read_input(&input)?).map_err(invalid)?;
            let d = recover(&ps).map_err(|e| match e {
                RecoveryError::InconsistentPages(_) => Failure { code: EXIT_INCONSISTENT, error: e.into() },
                other => invalid(other),
            })?;
            output(format, &json::decomposition_to_json(&d), || format!("{d}\n"));
        }
        Command::Couple { input, r_max, index, format } => {
            let c = json::complex_from_json(&read_input(&input)?).map_err(invalid)?;
            let d = decompose(&c).map_err(invalid)?;
            let r_max = r_max.unwrap_or(d.torsion_width() + 2).max(1);
            let couple = couple_from_complex(&c, default_window(&d, r_max));
            let pages = couple_page_range(&couple, r_max)?;
            let (convention, pages): (&str, Vec<_>) = match index {
                Index::Tilde => ("hom_poly", pages),
                Index::Hat => ("page", pages.iter().map(|t| t.to_convention(IndexConvention::Page)).collect()),
            };
            let v = json!({
                "format": FORMAT,
                "type": "page_sequence",
                "k": d.k,
                "kind": "tilde",
                "convention": convention,
                "pages": pages.iter().map(json::table_to_json).collect::<Vec<_>>(),
            });
            output(format, &v, || {
                pages.iter().enumerate().map(|(j, t)| format!("E~({}): {}\n", j + 1, format_table(t))).collect()
            });
        }
        Command::Twobraid { n, i, k, lambda, emit, format } => {
            let spec = match (i, k) {
                (Some(i), None) if lambda.is_empty() => TwoBraidSpec::p_i(n, i),
                (None, Some(k)) => {
                    let mut coeffs = BTreeMap::new();
                    for term in &lambda {
                        let (j, v) = term
                            .split_once('=')
                            .ok_or_else(|| invalid(anyhow::anyhow!("--lambda expects j=value, got {term:?}")))?;
                        let j: u32 = j.trim().parse().map_err(|_| invalid(anyhow::anyhow!("bad index in {term:?}")))?;
                        coeffs.insert(j, parse_rational(v)?);
                    }
                    TwoBraidSpec::new(n, k, coeffs)
                }
                _ => return Err(invalid(anyhow::anyhow!("give either --i, or --k with --lambda terms"))),
            }
            .map_err(invalid)?;
            let complex = build_twobraid(&spec);
            if emit == Emit::Complex {
                print!("{}", json::to_string(&json::complex_to_json(&complex)));
                return Ok(());
            }
            let report = Report::new(&complex)?;
            let expected = i.filter(|&i| i < n).map(|i| expected_decomposition(n, i) == report.decomposition);
            let lambdas: BTreeMap<String, Value> =
                spec.lambdas.iter().map(|(j, v)| (j.to_string(), json!(v.to_string()))).collect();
            let v = report.to_json(json!({"N": n, "k": spec.k, "lambda": lambdas, "matches_closed_form": expected}));
            output(format, &v, || {
                let mut s = report.to_table();
                if let Some(ok) = expected {
                    s.push_str(&format!("matches closed form: {}\n", if ok { "yes" } else { "NO" }));
                }
                s
            });
        }
        Command::Link { input, braid, strands, k, lambda1, lambda2, emit, format } => {
            let diagram = match (input, braid) {
                (Some(path), None) => json::pd_from_json(&read_input(&path)?).map_err(invalid)?,
                (None, Some(word)) => LinkDiagram::parse_braid(&word, strands).map_err(invalid)?,
                _ => return Err(invalid(anyhow::anyhow!("give either a PD file or --braid"))),
            };
            let p = Sl2Potential::new(k, parse_rational(&lambda1)?, parse_rational(&lambda2)?).map_err(invalid)?;
            let complex = build_sl2_cube(&diagram, &p);
            if emit == Emit::Complex {
                print!("{}", json::to_string(&json::complex_to_json(&complex)));
                return Ok(());
            }
            let report = Report::new(&complex)?;
            let v = report.to_json(json!({
                "pd": json::pd_to_json(&diagram),
                "k": k,
                "lambda1": p.lambda1.to_string(),
                "lambda2": p.lambda2.to_string(),
            }));
            output(format, &v, || report.to_table());
        }
        Command::Delta { n, format } => {
            if n < 2 {
                return Err(invalid(anyhow::anyhow!("N must be at least 2")));
            }
            let r = delta_battery(n);
            let scaling: Vec<Value> = (1..n)
                .flat_map(|i| default_lambdas().into_iter().map(move |l| (i, l)))
                .map(|(i, l)| json!({"i": i, "lambda": l.to_string(), "holds": scaling_holds(n, i, &l)}))
                .collect();
            let scaling_ok = scaling.iter().all(|s| s["holds"] == json!(true));
            let v = json!({
                "format": FORMAT,
                "type": "delta_report",
                "N": n,
                "classes": r.classes,
                "ranks": r.ranks,
                "nonzero_degrees": r.nonzero_degrees,
                "order_one_torsion": r.order_one_torsion,
                "support_ok": r.support_ok,
                "anticommute": r.anticommute,
                "rank_matches_torsion": r.rank_matches_torsion,
                "scaling": scaling,
            });
            output(format, &v, || {
                let mut s = String::new();
                for (j, (rank, nz)) in r.ranks.iter().zip(&r.nonzero_degrees).enumerate() {
                    s.push_str(&format!("delta_{}: rank {rank}, nonzero on degrees {nz:?}\n", j + 1));
                }
                let yn = |b: bool| if b { "yes" } else { "NO" };
                s.push_str(&format!("support as expected: {}\n", yn(r.support_ok)));
                s.push_str(&format!("anticommute: {}\n", yn(r.anticommute)));
                s.push_str(&format!("rank = m=1 torsion count: {}\n", yn(r.rank_matches_torsion)));
                s.push_str(&format!("d1 scales with lambda: {}\n", yn(scaling_ok)));
                s
            });
        }
        Command::Verify { seed, count, format } => {
            let seed = seed_from_env(seed)?;
            let summary = verify(seed, count, &CorpusParams::default());
            let failures: Vec<Value> = summary
                .items
                .iter()
                .filter_map(|v| v.failure.as_ref().map(|f| json!({"index": v.index, "failure": f})))
                .collect();
            let v = json!({
                "format": FORMAT,
                "type": "verify_summary",
                "seed": seed,
                "count": count,
                "passed": summary.passed(),
                "failures": failures,
            });
            output(format, &v, || {
                let mut s = String::new();
                for f in &failures {
                    s.push_str(&format!("item {}: {}\n", f["index"], f["failure"].as_str().unwrap_or("")));
                }
                s.push_str(&format!("{}/{} pass\n", summary.passed(), count));
                s
            });
            if !summary.all_passed() {
                return Err(Failure { code: EXIT_VERIFY, error: anyhow::anyhow!("{} item(s) failed", count - summary.passed()) });
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
