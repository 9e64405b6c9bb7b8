//! `wahl`: chain calculus, the verification ledger and construction search from the shell.
//!
//! Exit status: 0 on success, 1 when a verification ledger has failures, 2 on usage or
//! input errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};
use wahl_core::catalog::{
    incidence_table, parse_expected, parse_records, reconstruct_a0, shipped_constraints, verify_all, A0Model, Expected,
    ReconstructOptions, SurfaceRecord, VerifyOptions, RECORDS_TXT,
};
use wahl_core::config::geography_check;
use wahl_core::cqs::{
    blow_down_compose, discrepancies, fibonacci, hj_eval, hj_expand, is_wahl, length_bound, meridian_exponents,
    recognize_t, Chain, SurfaceClass,
};
use wahl_core::plan::{search_constructions, SearchParams};

#[derive(Parser)]
#[command(name = "wahl", version, about = "Wahl chains, K3 configurations and their ledgers")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Disable parallelism so logs are bit-identical between runs.
    #[arg(long, global = true)]
    seedless: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Class {
    K3,
    Elliptic,
    General,
}

#[derive(Subcommand)]
enum Command {
    /// Hirzebruch–Jung expansion of m/q.
    Expand { m: String, q: String },
    /// Evaluates a chain to m/q.
    Eval { chain: Chain },
    /// Recognizes a Wahl chain and prints (n,a).
    Wahl { chain: Chain },
    /// Discrepancies of the chain's curves.
    Disc { chain: Chain },
    /// Contracts [left, 1, right] to a cyclic quotient singularity.
    Join { left: Chain, right: Chain },
    /// Meridian exponents tᵢ (generator: meridian of the last curve).
    Meridians { chain: Chain },
    /// Length bound on a single Wahl chain and the matching index bound.
    Bounds {
        #[arg(long)]
        k2: i64,
        #[arg(long, value_enum, default_value_t = Class::K3)]
        class: Class,
        /// Smallest K² of the general-type class.
        #[arg(long, default_value_t = 1)]
        k2_min: i64,
    },
    /// Invariants forced by P chains and a given K².
    Geography {
        #[arg(long)]
        p: i64,
        #[arg(long)]
        k2: i64,
    },
    /// Runs the full verification ledger; exits 1 on any failure.
    Verify {
        #[command(flatten)]
        data: Data,
        #[arg(long)]
        expected: Option<PathBuf>,
        /// Skip plan inference (arithmetic checks only).
        #[arg(long)]
        no_infer: bool,
    },
    /// Searches the configuration for constructions and prints them as records.
    Search {
        #[arg(long, default_value_t = 1)]
        k2: i64,
        /// Last K² tried; defaults to --k2.
        #[arg(long)]
        k2_max: Option<i64>,
        #[arg(long, default_value_t = 8)]
        max_blowups: usize,
        #[arg(long, default_value_t = 2)]
        max_chains: usize,
        #[arg(long)]
        max_chain_len: Option<usize>,
        /// Restrict to these curves (comma-separated names).
        #[arg(long, value_delimiter = ',')]
        curves: Option<Vec<String>>,
        #[arg(long)]
        a0: Option<PathBuf>,
    },
    /// Recovers the section–fiber incidences from the stated matrices and determinants.
    ReconstructA0 {
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long)]
        expected: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        max_solutions: usize,
        /// Drop the height-pairing axioms.
        #[arg(long)]
        no_height: bool,
    },
}

#[derive(clap::Args)]
struct Data {
    #[arg(long)]
    records: Option<PathBuf>,
    #[arg(long)]
    a0: Option<PathBuf>,
}

struct Report {
    text: String,
    json: Value,
    failed: bool,
}

impl Report {
    fn ok(text: impl Into<String>, json: Value) -> Self {
        Report { text: text.into(), json, failed: false }
    }
}

type Result<T> = std::result::Result<T, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Text => print!("{}", with_newline(r.text)),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("json")),
            }
            if r.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn with_newline(mut s: String) -> String {
    if !s.ends_with('\n') {
        s.push('\n');
    }
    s
}

fn read(path: &PathBuf) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn model(path: Option<&PathBuf>) -> Result<A0Model> {
    match path {
        Some(p) => A0Model::parse(&read(p)?).map_err(|e| e.to_string()),
        None => Ok(A0Model::shipped()),
    }
}

fn records(path: Option<&PathBuf>) -> Result<Vec<SurfaceRecord>> {
    let text = match path {
        Some(p) => read(p)?,
        None => RECORDS_TXT.to_string(),
    };
    parse_records(&text).map_err(|e| e.to_string())
}

fn expected(path: Option<&PathBuf>) -> Result<Expected> {
    match path {
        Some(p) => parse_expected(&read(p)?).map_err(|e| e.to_string()),
        None => Ok(Expected::shipped()),
    }
}

fn big(s: &str) -> Result<BigInt> {
    s.trim().parse().map_err(|_| format!("not an integer: {s}"))
}

fn run(cli: &Cli) -> Result<Report> {
    let parallel = !cli.seedless;
    Ok(match &cli.command {
        Command::Expand { m, q } => {
            let (m, q) = (big(m)?, big(q)?);
            let c = hj_expand(&m, &q).map_err(|e| e.to_string())?;
            Report::ok(c.to_string(), json!({ "m": m.to_string(), "q": q.to_string(), "chain": c.entries() }))
        }
        Command::Eval { chain } => {
            let (m, q) = hj_eval(chain);
            Report::ok(format!("{m}/{q}"), json!({ "chain": chain.entries(), "m": m.to_string(), "q": q.to_string() }))
        }
        Command::Wahl { chain } => match is_wahl(chain) {
            Some(w) => Report::ok(
                w.to_string(),
                json!({ "chain": chain.entries(), "wahl": true, "n": w.n.to_string(), "a": w.a.to_string(),
                        "singularity": w.quotient().normalize().to_string() }),
            ),
            None => Report::ok("not a Wahl chain", json!({ "chain": chain.entries(), "wahl": false })),
        },
        Command::Disc { chain } => {
            let d: Vec<String> = discrepancies(chain).iter().map(ToString::to_string).collect();
            Report::ok(format!("[{}]", d.join(",")), json!({ "chain": chain.entries(), "discrepancies": d }))
        }
        Command::Join { left, right } => {
            let q = blow_down_compose(left, right).map_err(|e| e.to_string())?;
            let t = recognize_t(&q);
            let text = match &t {
                Some(t) => format!("{q} [{t}]"),
                None => q.to_string(),
            };
            let tj =
                t.map_or(Value::Null, |t| json!({ "d": t.d.to_string(), "n": t.n.to_string(), "a": t.a.to_string() }));
            Report::ok(text, json!({ "m": q.m.to_string(), "q": q.q.to_string(), "t": tj }))
        }
        Command::Meridians { chain } => {
            let mer = meridian_exponents(chain);
            let t: Vec<String> = mer.t.iter().map(ToString::to_string).collect();
            Report::ok(
                format!("t=[{}] t0={}", t.join(","), mer.t0),
                json!({ "chain": chain.entries(), "t": t, "t0": mer.t0.to_string() }),
            )
        }
        Command::Bounds { k2, class, k2_min } => {
            let (sc, name) = match class {
                Class::K3 => (SurfaceClass::K3, "k3"),
                Class::Elliptic => (SurfaceClass::ProperlyElliptic, "elliptic"),
                Class::General => (SurfaceClass::GeneralType { k2_min: *k2_min }, "general"),
            };
            let l = length_bound(sc, *k2).map_err(|e| e.to_string())?;
            let f = fibonacci(l as usize);
            Report::ok(
                format!("length ≤ {l}, n ≤ {f}"),
                json!({ "class": name, "k2": k2, "length": l, "max_n": f.to_string() }),
            )
        }
        Command::Geography { p, k2 } => {
            let g = geography_check(*p, *k2);
            let text = format!(
                "P={} K^2={}: r={} t2={} nodes_to_blow_up={} family_dim={} admissible={}",
                g.p, g.k2, g.r, g.t2, g.nodes_to_blow_up, g.family_dim, g.admissible
            );
            Report::ok(text, serde_json::to_value(&g).expect("json"))
        }
        Command::Verify { data, expected: e, no_infer } => {
            let (m, r, e) = (model(data.a0.as_ref())?, records(data.records.as_ref())?, expected(e.as_ref())?);
            let opts =
                VerifyOptions { infer_records: !no_infer, infer_main: !no_infer, parallel, ..VerifyOptions::default() };
            let ledger = verify_all(&m, &r, &e, &opts);
            Report {
                text: ledger.to_text(),
                json: serde_json::to_value(&ledger).expect("json"),
                failed: !ledger.passed(),
            }
        }
        Command::Search { k2, k2_max, max_blowups, max_chains, max_chain_len, curves, a0 } => {
            let m = model(a0.as_ref())?;
            let params = SearchParams {
                k2_min: *k2,
                k2_max: k2_max.unwrap_or(*k2),
                max_chains: *max_chains,
                max_blowups: *max_blowups,
                max_chain_len: *max_chain_len,
                curves: curves.clone(),
                parallel,
                ..SearchParams::default()
            };
            let out = search_constructions(&params, m.config()).map_err(|e| e.to_string())?;
            let mut text = String::new();
            for n in &out.notes {
                text.push_str(&format!("# {n}\n"));
            }
            text.push_str(&format!(
                "# {} subsets, {} leaves, {} records{}\n",
                out.subsets,
                out.leaves,
                out.records.len(),
                if out.exhausted { "" } else { " (partial)" }
            ));
            for r in &out.records {
                text.push_str(&format!("{r}\n"));
            }
            Report::ok(text, serde_json::to_value(&out).expect("json"))
        }
        Command::ReconstructA0 { records: rp, expected: ep, max_solutions, no_height } => {
            let cons = shipped_constraints(&expected(ep.as_ref())?, &records(rp.as_ref())?);
            let opts = ReconstructOptions { height_axioms: !no_height, max_solutions: *max_solutions };
            let rec = reconstruct_a0(&cons, &opts).map_err(|e| e.to_string())?;
            let shipped = A0Model::shipped();
            let mut text = format!(
                "{} solution(s){}, {} search nodes\n",
                rec.solutions.len(),
                if rec.truncated { " (truncated)" } else { "" },
                rec.nodes_visited
            );
            let tables: Vec<Value> = rec
                .solutions
                .iter()
                .map(|s| json!({ "incidence": incidence_table(s), "matches_shipped": s.incidence() == shipped.incidence() }))
                .collect();
            if let Some(first) = rec.solutions.first() {
                for (s, comps) in incidence_table(first) {
                    text.push_str(&format!("{s}: {}\n", comps.join(" ")));
                }
            }
            for (s, f, seen) in &rec.ambiguous {
                text.push_str(&format!("ambiguous: {s} on fiber {} → {}\n", f + 1, seen.join("|")));
            }
            let ambiguous: Vec<Value> = rec
                .ambiguous
                .iter()
                .map(|(s, f, seen)| json!({ "section": s, "fiber": f + 1, "components": seen }))
                .collect();
            Report::ok(
                text,
                json!({ "solutions": tables, "truncated": rec.truncated, "ambiguous": ambiguous, "nodes_visited": rec.nodes_visited }),
            )
        }
    })
}
