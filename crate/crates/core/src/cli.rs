//! Command-line front end.
//!
//! Every verb reads a matroid (a JSON file or a catalog spec), runs one
//! module operation and prints a JSON report. Exit status is 0 on success,
//! 1 on invalid input and 2 when a cross-check between independent
//! computations fails.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::catalog;
use crate::exec::Exec;
use crate::finfield::FiniteField;
use crate::flatconn::{self, ConnectionVector, HkVector};
use crate::matroid::{flats_from_projective_points, Matroid, MatroidJson, ProjectivePointConfig};
use crate::milnor;
use crate::nets;
use crate::obstruction::{self, Conclusion};
use crate::oracle;
use crate::projective::PointConfigJson;
use crate::resonance;

pub const DEFAULT_SEED: u64 = 20_240_917;

#[derive(Debug, Parser)]
#[command(name = "modres", version, about = "Resonance, nets and monodromy of rank-3 matroids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[arg(long, default_value_t = DEFAULT_SEED, global = true)]
    pub seed: u64,
    /// Run enumeration kernels on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

/// A matroid given as a file or as a catalog spec such as `monomial:3`.
#[derive(Debug, Clone, Args)]
pub struct Input {
    /// JSON file holding `{"n", "flats"}` or `{"points"}`.
    pub path: Option<PathBuf>,
    #[arg(long, conflicts_with = "path")]
    pub catalog: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Aomoto-Betti number over a field of the given order.
    Beta {
        #[command(flatten)]
        input: Input,
        /// Characteristic (or any prime power field order).
        #[arg(long, default_value_t = 3)]
        p: u32,
    },
    /// Orbits of k-nets, with Latin squares for 3-nets.
    Nets {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
    /// Cyclotomic factorization of the monodromy polynomial.
    Delta {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        conjectural: bool,
    },
    /// Non-realizability obstructions.
    Obstruct {
        #[command(flatten)]
        input: Input,
    },
    /// List the built-in catalog, or show one entry.
    Catalog { name: Option<String> },
    /// Check a connection file, or run seeded flatness checks.
    Flatcheck {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        connection: Option<PathBuf>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Brute-force cross-checks of the fast enumerations.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 3)]
        k: usize,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Invariant(_) => 2,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

/// Parses a matroid from JSON text: either explicit flats or homogeneous
/// point coordinates.
pub fn parse_matroid(text: &str) -> Result<Matroid, CliError> {
    let v: Value = serde_json::from_str(text).map_err(invalid)?;
    if v.get("points").is_some() {
        let j: PointConfigJson = serde_json::from_value(v).map_err(invalid)?;
        let cfg = ProjectivePointConfig::try_from(j).map_err(invalid)?;
        return flats_from_projective_points(&cfg).map_err(invalid);
    }
    let j: MatroidJson = serde_json::from_value(v).map_err(invalid)?;
    Matroid::try_from(j).map_err(invalid)
}

fn load(input: &Input) -> Result<Matroid, CliError> {
    match (&input.path, &input.catalog) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
            parse_matroid(&text)
        }
        (None, Some(spec)) => Ok(catalog::from_spec(spec).map_err(invalid)?.matroid),
        (None, None) => Err(invalid("expected an input file or --catalog")),
    }
}

/// Runs one command and returns its report.
pub fn run(cli: &Cli) -> Result<Value, CliError> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    match &cli.command {
        Command::Beta { input, p } => {
            let m = load(input)?;
            let field = FiniteField::of_order(*p).map_err(invalid)?;
            Ok(json!({ "beta": resonance::beta(&m, &field) }))
        }
        Command::Nets { input, k } => {
            let m = load(input)?;
            let orbits = nets::enumerate_net_orbits(&m, *k, exec).map_err(invalid)?;
            let mut out = Vec::with_capacity(orbits.len());
            for net in &orbits {
                let mut entry = json!({ "parts": net.assignment(), "class_size": net.class_size() });
                if *k == 3 {
                    let sq = nets::latin_square_of_3net(&m, net).map_err(|e| CliError::Invariant(e.to_string()))?;
                    entry["latin_square"] = json!(sq.entries());
                }
                out.push(entry);
            }
            Ok(json!({ "k": k, "count": orbits.len(), "orbits": out }))
        }
        Command::Delta { input, conjectural } => {
            let m = load(input)?;
            Ok(milnor::delta_polynomial(&m, *conjectural, exec).to_json())
        }
        Command::Obstruct { input } => {
            let m = load(input)?;
            let verdicts = obstruction::obstruct(&m, exec).map_err(invalid)?;
            let conclusion = if verdicts.iter().any(|v| v.conclusion == Conclusion::NotRealizable) {
                Conclusion::NotRealizable
            } else {
                Conclusion::Inconclusive
            };
            Ok(json!({ "conclusion": conclusion, "verdicts": verdicts }))
        }
        Command::Catalog { name } => match name {
            None => Ok(Value::Array(
                catalog::standard_catalog()
                    .iter()
                    .map(|e| {
                        json!({
                            "name": e.name,
                            "n": e.matroid.n(),
                            "long_flats": e.matroid.long_flats().len(),
                            "realized": e.coordinates.is_some(),
                        })
                    })
                    .collect(),
            )),
            Some(spec) => {
                let e = catalog::from_spec(spec).map_err(invalid)?;
                let mut out = json!({
                    "name": e.name,
                    "description": e.description,
                    "labels": e.labels,
                    "matroid": MatroidJson::from(&e.matroid),
                    "known_nets": e.known_nets.iter().map(|n| n.to_json()).collect::<Vec<_>>(),
                });
                if let Some(c) = catalog::coordinates(&e) {
                    out["points"] = json!(c.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>());
                }
                Ok(out)
            }
        },
        Command::Flatcheck { input, connection, samples } => {
            let m = load(input)?;
            match connection {
                Some(path) => {
                    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
                    let v: Value = serde_json::from_str(&text).map_err(invalid)?;
                    let w = ConnectionVector::from_json(&v).map_err(invalid)?;
                    check_connection(&m, &w)
                }
                None => flat_sampling(&m, *samples, cli.seed, exec),
            }
        }
        Command::Oracle { input, k } => {
            let m = load(input)?;
            let report = oracle::run(&m, *k, exec).map_err(invalid)?;
            if !report.agrees() {
                return Err(CliError::Invariant(
                    report.counterexample.clone().unwrap_or_else(|| "fast and brute-force results differ".into()),
                ));
            }
            Ok(serde_json::to_value(report).expect("serializable"))
        }
    }
}

fn check_connection(m: &Matroid, w: &ConnectionVector) -> Result<Value, CliError> {
    let flat = flatconn::is_flat(m, w).map_err(invalid)?;
    let brackets = flatconn::is_flat_brackets(m, w).map_err(invalid)?;
    if flat != brackets {
        return Err(CliError::Invariant(format!("flatness criteria disagree on {}", w.to_json())));
    }
    Ok(json!({ "flat": flat, "regular": flatconn::is_regular(w), "rank": w.rank() }))
}

/// Seeded checks: `ev_τ` images of random vectors for every net with `k ≤ 4`,
/// and agreement of the two flatness tests on random connections.
fn flat_sampling(m: &Matroid, samples: usize, seed: u64, exec: Exec) -> Result<Value, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ev_checked = 0usize;
    for k in 3..=4 {
        for net in nets::enumerate_net_orbits(m, k, exec).map_err(invalid)? {
            let tau = nets::lambda_of_net(&net);
            for _ in 0..samples {
                let x = HkVector::random(k, 5, &mut rng).expect("k >= 3");
                let w = flatconn::ev_tau(m, &tau, &x).map_err(|e| CliError::Invariant(e.to_string()))?;
                if !flatconn::is_flat(m, &w).map_err(invalid)? || w.rank() != x.rank() {
                    return Err(CliError::Invariant(format!("ev image of {:?} is not flat or changes rank", tau.values)));
                }
                ev_checked += 1;
            }
        }
    }
    let mut flat_count = 0usize;
    for _ in 0..samples {
        let w = flatconn::random_connection(m.n(), 3, &mut rng);
        let a = flatconn::is_flat(m, &w).map_err(invalid)?;
        if a != flatconn::is_flat_brackets(m, &w).map_err(invalid)? {
            return Err(CliError::Invariant(format!("flatness criteria disagree on {}", w.to_json())));
        }
        flat_count += a as usize;
    }
    Ok(json!({
        "seed": seed,
        "ev_images_checked": ev_checked,
        "random_connections": samples,
        "random_flat": flat_count,
        "criteria_agree": true,
    }))
}

/// Renders a report as indented `key: value` lines.
pub fn render_table(v: &Value) -> String {
    let mut out = String::new();
    table_rec(v, 0, &mut out);
    out
}

fn table_rec(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let scalarish = |x: &Value| match x {
        Value::Array(a) => a.iter().all(|y| !y.is_object()),
        Value::Object(_) => false,
        _ => true,
    };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if scalarish(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", compact(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    table_rec(x, depth + 1, out);
                }
            }
        }
        Value::Array(items) if !scalarish(v) => {
            for (i, x) in items.iter().enumerate() {
                let _ = writeln!(out, "{pad}[{i}]");
                table_rec(x, depth + 1, out);
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", compact(other));
        }
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Parses arguments, runs, prints, and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(v) => {
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&v).expect("serializable")),
                Format::Table => print!("{}", render_table(&v)),
            }
            0
        }
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string(), "exit": e.exit_code() }));
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<Value, CliError> {
        let cli = Cli::try_parse_from(std::iter::once("modres").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn beta_and_nets() {
        assert_eq!(run_args(&["beta", "--p", "3", "--catalog", "monomial:3"]).unwrap(), json!({ "beta": 2 }));
        let v = run_args(&["nets", "--k", "3", "--catalog", "braid"]).unwrap();
        assert_eq!(v["count"], 1);
        assert_eq!(v["orbits"][0]["latin_square"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn obstruct_m3() {
        let v = run_args(&["obstruct", "--catalog", "M:3"]).unwrap();
        assert_eq!(v["conclusion"], "NOT_REALIZABLE");
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(run_args(&["beta", "--p", "6", "--catalog", "braid"]).unwrap_err().exit_code(), 1);
        assert_eq!(run_args(&["beta", "--catalog", "nonsense"]).unwrap_err().exit_code(), 1);
        assert!(parse_matroid("{\"n\": 3, \"flats\": [[0, 1, 7]]}").is_err());
        assert!(parse_matroid("not json").is_err());
    }

    #[test]
    fn points_input() {
        let m = parse_matroid("{\"points\": [[1,0,0],[0,1,0],[0,0,1],[1,-1,0],[1,0,-1],[0,1,-1]]}").unwrap();
        assert_eq!(m.long_flats().len(), 4);
    }

    #[test]
    fn table_output() {
        let t = render_table(&json!({ "beta": 1, "nested": { "a": [1, 2] } }));
        assert_eq!(t, "beta: 1\nnested:\n  a: [1,2]\n");
    }
}
