//! `reldav`: batch front end for relative Davenport constants and the
//! elasticity of non-maximal orders.
//!
//! Exit codes: 0 success, 1 a check failed or a conjecture violation was
//! found, 2 malformed input, 3 size guard, 4 any other error.

mod golden;
mod input;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use reldav_core::cache::DiskCache;
use reldav_core::elasticity::{elasticity_order, OrderClassData};
use reldav_core::group::{groups_up_to, FabGroup};
use reldav_core::quadratic::{run_pipeline, ClassNumberTable, QuadraticInput};
use reldav_core::zerosum::{ConjectureKind, ConjectureReport};
use reldav_core::{Engine, Error, Result};
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "reldav", version, about = "Relative Davenport constants and elasticity of orders")]
struct Cli {
    /// Worker threads for exhaustive searches (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Ignore the on-disk cache (location: $RELDAV_CACHE or ~/.cache/reldav).
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest group order searched exhaustively.
    #[arg(long, global = true, default_value_t = 255)]
    max_group_order: u64,
    /// Print the machine-readable report.
    #[arg(long, global = true)]
    json: bool,
    /// Add timing and cache counters to the report (not reproducible).
    #[arg(long, global = true)]
    diagnostics: bool,
    /// Extra class-number table (`d_K h` lines) overriding the bundled one.
    #[arg(long, global = true)]
    h_table: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// D(G), or D_S(G) with --subset.
    Davenport {
        /// Invariant factors, e.g. '[2,4]'.
        #[arg(long)]
        group: String,
        /// Subset S as a JSON list of elements.
        #[arg(long)]
        subset: Option<String>,
    },
    /// d_S(G) with a lexicographically least witness.
    Srel {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subset: String,
    },
    /// Run both conjecture checkers over a range of groups.
    Conjectures {
        /// Every abelian group up to this order.
        #[arg(long)]
        max_order: Option<u64>,
        /// Named family: 'cyclic' (Z_k) or 'ZmxZmk' such as 'Z2xZ2k'.
        #[arg(long)]
        family: Option<String>,
        /// Largest k in the family.
        #[arg(long, default_value_t = 4)]
        k_max: u64,
    },
    /// Elasticity from class-group data of an order.
    ElasticityOrder {
        /// JSON record: group, ker_tau, p_class, a, p_principal, conductor_principal.
        #[arg(long)]
        input: String,
        /// Number of maximal-order primes over the conductor prime.
        #[arg(long, default_value_t = 1)]
        primes_over_conductor: i64,
    },
    /// rho(R_n) for the order of conductor p^a in Q(sqrt d).
    ElasticityQuadratic {
        /// JSON spec, e.g. '{"d":-7,"p":3,"a":1}' with optional h, p_principal, ladder.
        #[arg(long)]
        spec: String,
    },
    /// Recompute the worked examples and print a verdict table.
    ReproducePaper {
        /// Run a single row.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(Serialize)]
struct Diagnostics {
    elapsed_ms: u128,
    cache_hits: u64,
    cache_misses: u64,
    cache_warnings: Vec<String>,
}

/// Self-contained record of one run. Without `--diagnostics` it depends only
/// on the echoed command, so re-running reproduces it byte for byte.
#[derive(Serialize)]
struct RunReport {
    command: String,
    inputs: Value,
    outputs: Value,
    notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<Diagnostics>,
}

/// Result of a command: report, human-readable text and whether it passed.
struct Outcome {
    inputs: Value,
    outputs: Value,
    notes: Vec<String>,
    text: String,
    ok: bool,
}

/// The command line without the flags that only affect how it runs.
fn echo_command() -> String {
    let mut out = vec!["reldav".to_string()];
    let mut args = std::env::args().skip(1);
    while let Some(a) = args.next() {
        match a.as_str() {
            "--jobs" => {
                args.next();
            }
            "--no-cache" | "--json" | "--diagnostics" => {}
            s if s.starts_with("--jobs=") => {}
            _ => out.push(a),
        }
    }
    out.join(" ")
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_)
        | Error::InvalidGroup(_)
        | Error::NotInGroup { .. }
        | Error::InvalidSubgroup(_)
        | Error::InvalidHom(_)
        | Error::InvalidArgument(_) => 2,
        Error::SizeGuard { .. } => 3,
        _ => 4,
    }
}

fn table_for(cli: &Cli) -> Result<ClassNumberTable> {
    match &cli.h_table {
        Some(path) => ClassNumberTable::bundled_with_override(path),
        None => Ok(ClassNumberTable::bundled()),
    }
}

fn cmd_davenport(engine: &Engine, group: &str, subset: Option<&str>) -> Result<Outcome> {
    let g = input::parse_group(group)?;
    match subset {
        None => {
            let r = engine.small_rel_davenport(&g, &reldav_core::group::SubsetS::whole(&g))?;
            let value = engine.davenport(&g)?;
            Ok(Outcome {
                inputs: json!({ "group": g }),
                outputs: json!({ "davenport": value, "witness": r.witness }),
                notes: vec![],
                text: format!(
                    "D({g}) = {value}\nlongest zero-sum-free sequence: {}",
                    r.witness.map_or("(empty)".into(), |w| w.to_string())
                ),
                ok: true,
            })
        }
        Some(s) => {
            let s = input::parse_subset(s, &g)?;
            let r = engine.small_rel_davenport(&g, &s)?;
            Ok(Outcome {
                inputs: json!({ "group": g, "subset": s }),
                outputs: json!({ "rel_davenport": r.big_d(), "small_rel_davenport": r.value, "witness": r.witness }),
                notes: vec![],
                text: format!(
                    "D_S({g}) = {} for S = {s}\nwitness of d_S = {}: {}",
                    r.big_d(),
                    r.value,
                    r.witness.map_or("(empty)".into(), |w| w.to_string())
                ),
                ok: true,
            })
        }
    }
}

fn cmd_srel(engine: &Engine, group: &str, subset: &str) -> Result<Outcome> {
    let g = input::parse_group(group)?;
    let s = input::parse_subset(subset, &g)?;
    let r = engine.small_rel_davenport(&g, &s)?;
    Ok(Outcome {
        inputs: json!({ "group": g, "subset": s }),
        outputs: json!({ "small_rel_davenport": r.value, "witness": r.witness }),
        notes: vec![],
        text: format!(
            "d_S({g}) = {} for S = {s}\nwitness: {}",
            r.value,
            r.witness.map_or("(empty)".into(), |w| w.to_string())
        ),
        ok: true,
    })
}

/// Groups `Z_m ⊕ Z_{mk}` for `k = 1..=k_max`, or `Z_k` for the cyclic family.
fn family_groups(family: &str, k_max: u64) -> Result<Vec<FabGroup>> {
    let bad = || Error::InvalidArgument(format!("unknown family {family:?}; use 'cyclic' or 'ZmxZmk'"));
    if family == "cyclic" {
        return (1..=k_max).map(|k| if k == 1 { Ok(FabGroup::trivial()) } else { FabGroup::new(&[k]) }).collect();
    }
    let (left, right) = family.split_once('x').ok_or_else(bad)?;
    let m: u64 = left.strip_prefix('Z').ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let right_m: u64 = right
        .strip_prefix('Z')
        .and_then(|r| r.strip_suffix('k'))
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    if m < 2 || right_m != m {
        return Err(bad());
    }
    (1..=k_max).map(|k| FabGroup::new(&[m, m * k])).collect()
}

/// Violations of the subgroup-difference check with `α = H1`, the case the
/// ladder formula relies on.
fn coset_is_subgroup_violations(r: &ConjectureReport) -> usize {
    r.violations.iter().filter(|v| v.sets[0] == v.subgroups[0]).count()
}

fn cmd_conjectures(engine: &Engine, max_order: Option<u64>, family: Option<&str>, k_max: u64) -> Result<Outcome> {
    let groups = match (max_order, family) {
        (Some(n), None) => groups_up_to(n),
        (None, Some(f)) => family_groups(f, k_max)?,
        (None, None) => groups_up_to(12),
        (Some(_), Some(_)) => {
            return Err(Error::InvalidArgument("use either --max-order or --family".into()));
        }
    };
    let mut rows = Vec::new();
    let mut text = vec![format!(
        "{:<16} {:<20} {:>8} {:>10} {:>12}",
        "group", "conjecture", "cases", "violations", "alpha=H1"
    )];
    let mut total = 0usize;
    for g in &groups {
        for r in [engine.check_conjecture_generator_all(g)?, engine.check_conjecture_subgroup_difference(g)?] {
            let restricted = match r.conjecture {
                ConjectureKind::SubgroupDifference => Some(coset_is_subgroup_violations(&r)),
                ConjectureKind::Generator => None,
            };
            let name = match r.conjecture {
                ConjectureKind::Generator => "generator",
                ConjectureKind::SubgroupDifference => "subgroup-difference",
            };
            text.push(format!(
                "{:<16} {:<20} {:>8} {:>10} {:>12}",
                g.to_string(),
                name,
                r.cases_checked,
                r.violations.len(),
                restricted.map_or("-".into(), |n| n.to_string())
            ));
            if let Some(v) = r.violations.first() {
                text.push(format!(
                    "  first violation: sets {} values {:?}",
                    v.sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "),
                    v.values
                ));
            }
            total += r.violations.len();
            rows.push(json!({
                "group": g,
                "conjecture": r.conjecture,
                "cases_checked": r.cases_checked,
                "violations": r.violations.len(),
                "violations_with_alpha_subgroup": restricted,
                "first_violation": r.violations.first(),
            }));
        }
    }
    text.push(format!("{} groups, {total} violations", groups.len()));
    Ok(Outcome {
        inputs: json!({ "max_order": max_order, "family": family, "k_max": k_max }),
        outputs: json!({ "rows": rows, "total_violations": total }),
        notes: vec![],
        text: text.join("\n"),
        ok: total == 0,
    })
}

fn cmd_elasticity_order(engine: &Engine, arg: &str, primes: i64) -> Result<Outcome> {
    let data: OrderClassData = input::parse(arg, "order class data")?;
    let rho = elasticity_order(engine, &data, primes)?;
    let big_d = engine.davenport(&data.cl_r)?;
    Ok(Outcome {
        inputs: json!({ "data": data, "primes_over_conductor": primes }),
        outputs: json!({ "elasticity": rho, "davenport": big_d }),
        notes: vec![],
        text: format!("rho(R) = {rho}"),
        ok: true,
    })
}

fn cmd_elasticity_quadratic(engine: &Engine, table: &ClassNumberTable, arg: &str) -> Result<Outcome> {
    let spec: QuadraticInput = input::parse(arg, "quadratic spec")?;
    let r = run_pipeline(engine, &spec, table)?;
    let mut text = vec![
        format!("order of conductor {} in Q(sqrt {}), p = {} {}", r.n, r.spec.d, r.spec.p, r.splitting),
        format!("L(p^i, d), i = 0..a: {:?}", r.l_values),
    ];
    if let Some(u) = &r.unit {
        text.push(format!("fundamental unit {u}, unit indices {:?}", r.unit_indices));
    }
    if let Some(h) = r.h {
        text.push(format!("h = {h}, class numbers along the ladder {:?}", r.class_numbers));
    }
    if let Some(c) = r.cyclicity {
        text.push(format!("Cl(R_n) of order {} is {c:?}", r.h_prime.unwrap_or(0)));
    }
    if !r.dj.is_empty() {
        let dj: Vec<String> = r.dj.iter().map(|v| format!("d_{} = {}", v.j, v.value)).collect();
        text.push(dj.join(", "));
    }
    text.push(format!("rho(R_n) = {}", r.elasticity));
    for n in &r.notes {
        text.push(format!("note: {n}"));
    }
    Ok(Outcome {
        inputs: serde_json::to_value(&spec).expect("spec serializes"),
        outputs: serde_json::to_value(&r).expect("report serializes"),
        notes: r.notes.clone(),
        text: text.join("\n"),
        ok: true,
    })
}

fn cmd_reproduce(engine: &Engine, table: &ClassNumberTable, only: Option<&str>) -> Result<Outcome> {
    let ids: Vec<&str> = match only {
        Some(id) => vec![id],
        None => golden::ROW_IDS.to_vec(),
    };
    let rows = ids.iter().map(|id| golden::run_row(engine, table, id)).collect::<Result<Vec<_>>>()?;
    let passed = rows.iter().filter(|r| r.pass).count();
    let mut text = vec![format!("{:<14} {:<10} {:<10} {}", "example", "expected", "got", "verdict")];
    for r in &rows {
        text.push(format!(
            "{:<14} {:<10} {:<10} {}",
            r.id,
            r.expected,
            r.got,
            if r.pass { "PASS" } else { "FAIL" }
        ));
    }
    text.push(format!("{passed}/{} PASS", rows.len()));
    Ok(Outcome {
        inputs: json!({ "only": only }),
        outputs: json!({ "rows": rows, "passed": passed, "total": rows.len() }),
        notes: vec![],
        text: text.join("\n"),
        ok: passed == rows.len(),
    })
}

fn run(cli: &Cli) -> Result<(Outcome, Engine)> {
    let jobs = cli.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let mut engine = Engine::new(cli.max_group_order, jobs.max(1));
    if !cli.no_cache {
        engine = engine.with_disk_cache(DiskCache::open(DiskCache::default_path()));
    }
    let outcome = match &cli.command {
        Command::Davenport { group, subset } => cmd_davenport(&engine, group, subset.as_deref())?,
        Command::Srel { group, subset } => cmd_srel(&engine, group, subset)?,
        Command::Conjectures { max_order, family, k_max } => {
            cmd_conjectures(&engine, *max_order, family.as_deref(), *k_max)?
        }
        Command::ElasticityOrder { input, primes_over_conductor } => {
            cmd_elasticity_order(&engine, input, *primes_over_conductor)?
        }
        Command::ElasticityQuadratic { spec } => cmd_elasticity_quadratic(&engine, &table_for(cli)?, spec)?,
        Command::ReproducePaper { only } => cmd_reproduce(&engine, &table_for(cli)?, only.as_deref())?,
    };
    Ok((outcome, engine))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let start = Instant::now();
    match run(&cli) {
        Ok((outcome, engine)) => {
            for w in engine.cache_warnings() {
                log::warn!("{w}");
            }
            if cli.json {
                let diagnostics = cli.diagnostics.then(|| {
                    let stats = engine.stats();
                    Diagnostics {
                        elapsed_ms: start.elapsed().as_millis(),
                        cache_hits: stats.hits,
                        cache_misses: stats.misses,
                        cache_warnings: engine.cache_warnings(),
                    }
                });
                let report = RunReport {
                    command: echo_command(),
                    inputs: outcome.inputs,
                    outputs: outcome.outputs,
                    notes: outcome.notes,
                    diagnostics,
                };
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("{}", outcome.text);
                if cli.diagnostics {
                    let stats = engine.stats();
                    println!(
                        "elapsed {} ms, cache hits {}, misses {}",
                        start.elapsed().as_millis(),
                        stats.hits,
                        stats.misses
                    );
                }
            }
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
