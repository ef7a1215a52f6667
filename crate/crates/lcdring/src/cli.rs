//! The `lcdring` command line: reproducible experiments over the library,
//! emitting JSON (default), CSV or plain text.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on domain errors (with a
//! machine-readable `{"error": ...}` object on stdout).  Every command is
//! deterministic in its arguments; `LCDRING_THREADS` only caps the worker
//! count and never changes output bytes.

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::code::LinearCode;
use crate::consta::{self, ConstacyclicCode};
use crate::distance::{
    self, gray_image, gray_map, is_image_linear, min_pairwise_hamming, DistanceOptions,
    DistanceReport, DistanceStatus, SearchStrategy, WeightKind,
};
use crate::poly::FactorSet;
use crate::ring::Ring;
use crate::serial;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "lcdring",
    version,
    about = "LCD and constacyclic codes over finite commutative Frobenius rings"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Lee,
    Hamming,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe a ring spec: kind, cardinality, characteristic.
    RingInfo {
        #[arg(long)]
        ring: String,
    },
    /// Factor X^n - gamma into monic basic irreducibles over a chain ring.
    Factor {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        gamma: String,
    },
    /// Hensel-lift a residue-field factorisation of X^n - pi(gamma).
    HenselLift {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        gamma: String,
        /// Semicolon-separated monic factors over the residue field.
        #[arg(long)]
        field_factors: String,
    },
    /// Build a linear code from generators and report its profile.
    CodeNew {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        n: usize,
        /// Rows separated by ';', entries by ','; or @file with code JSON.
        #[arg(long)]
        generators: String,
    },
    /// The dual code.
    CodeDual {
        /// Code JSON (inline or @file).
        #[arg(long, conflicts_with_all = ["ring", "generators"])]
        code: Option<String>,
        #[arg(long, requires = "generators")]
        ring: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, requires = "ring")]
        generators: Option<String>,
    },
    /// Decide the LCD property and produce a hull witness when it fails.
    LcdCheck {
        #[arg(long, conflicts_with_all = ["ring", "generators"])]
        code: Option<String>,
        #[arg(long, requires = "generators")]
        ring: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, requires = "ring")]
        generators: Option<String>,
    },
    /// Minimum distance (exact, or honest bounds under the budgets).
    Distance {
        #[arg(long, conflicts_with_all = ["ring", "generators"])]
        code: Option<String>,
        #[arg(long, requires = "generators")]
        ring: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, requires = "ring")]
        generators: Option<String>,
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
        /// Cap on |C| for full enumeration (default 2^26).
        #[arg(long)]
        budget: Option<u64>,
        /// Cap on bounded-weight-search candidates (default 2^31).
        #[arg(long)]
        pattern_budget: Option<u64>,
        /// Expected distance hint; never changes correctness.
        #[arg(long)]
        target: Option<u64>,
    },
    /// Chinese product of codes over coprime component rings.
    CrtCompose {
        /// JSON array of code objects (inline or @file).
        #[arg(long)]
        codes: String,
    },
    /// Enumerate all nontrivial gamma-constacyclic LCD codes.
    ConstaEnumerate {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        gamma: String,
    },
    /// The LCD table: one row per code, optionally with distances.
    ConstaTable {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "1")]
        gamma: String,
        /// Compute the distance column.
        #[arg(long)]
        distances: bool,
        #[arg(long, value_enum)]
        metric: Option<MetricArg>,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long)]
        pattern_budget: Option<u64>,
    },
    /// Gray map of a Z4 vector, or the Gray-image profile of a Z4 code.
    Gray {
        #[arg(long, conflicts_with_all = ["code", "generators"])]
        vector: Option<String>,
        #[arg(long)]
        ring: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, conflicts_with = "code")]
        generators: Option<String>,
        #[arg(long)]
        code: Option<String>,
    },
}

/// Entry point for the binary: parses, runs, prints, maps errors to the
/// documented exit codes.
pub fn main_entry<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return 0;
        }
        Err(e) => {
            eprint!("{e}");
            return 1;
        }
    };
    let format = cli.output;
    match run(cli) {
        Ok(output) => {
            println!("{output}");
            0
        }
        Err(err) => {
            let obj = json!({ "error": { "kind": error_kind(&err), "message": err.to_string() } });
            match format {
                OutputFormat::Json | OutputFormat::Csv => println!("{obj}"),
                OutputFormat::Text => println!("error: {err}"),
            }
            2
        }
    }
}

fn error_kind(err: &Error) -> &'static str {
    match err {
        Error::NotPrime(_) => "not_prime",
        Error::ReducibleModulus(_) => "reducible_modulus",
        Error::NonCoprime => "non_coprime",
        Error::UnsupportedRing(_) => "unsupported_ring",
        Error::NonUnit(_) => "non_unit",
        Error::RepeatedRoot { .. } => "repeated_root",
        Error::NotDivisor(_, _) => "not_divisor",
        Error::NotFree => "not_free",
        Error::NotLcd => "not_lcd",
        Error::Parse(_) => "parse",
        Error::Domain(_) => "domain",
    }
}

/// Run a parsed command and render its output.
pub fn run(cli: Cli) -> Result<String> {
    let format = cli.output;
    match cli.command {
        Command::RingInfo { ring } => {
            let ring = Ring::parse(&ring)?;
            let mut obj = serde_json::Map::new();
            obj.insert("spec".into(), json!(ring.spec_string()));
            obj.insert(
                "kind".into(),
                json!(match ring.kind() {
                    crate::ring::RingKind::Chain { s: 1, m: 1, .. } => "prime_field",
                    crate::ring::RingKind::Chain { s: 1, .. } => "finite_field",
                    crate::ring::RingKind::Chain { m: 1, .. } => "integer_chain",
                    crate::ring::RingKind::Chain { .. } => "galois_ring",
                    crate::ring::RingKind::LocalAlgebra { .. } => "local_algebra",
                    crate::ring::RingKind::Composite { .. } => "composite",
                }),
            );
            obj.insert("cardinality".into(), json!(ring.cardinality().to_string()));
            obj.insert("characteristic".into(), json!(ring.characteristic()));
            obj.insert("local".into(), json!(ring.is_local()));
            obj.insert("chain".into(), json!(ring.is_chain()));
            if let Ok(q) = ring.residue_q() {
                obj.insert("residue_field_size".into(), json!(q));
            }
            if let crate::ring::RingKind::Composite { parts } = ring.kind() {
                obj.insert(
                    "components".into(),
                    json!(parts.iter().map(|p| p.spec_string()).collect::<Vec<_>>()),
                );
            }
            render_object(format, &Value::Object(obj))
        }
        Command::Factor { ring, n, gamma } => {
            let ring = Ring::parse(&ring)?;
            let gamma = serial::element_from_text(&ring, &gamma)?;
            let fs = FactorSet::build(&ring, n, &gamma)?;
            render_object(format, &factor_set_json(&fs))
        }
        Command::HenselLift {
            ring,
            n,
            gamma,
            field_factors,
        } => {
            let ring = Ring::parse(&ring)?;
            let gamma = serial::element_from_text(&ring, &gamma)?;
            let field = ring.residue_field()?;
            let factors = field_factors
                .split(';')
                .map(|t| serial::poly_from_text(&field, t))
                .collect::<Result<Vec<_>>>()?;
            let fs = FactorSet::lift(&factors, &ring, n, &gamma)?;
            render_object(format, &factor_set_json(&fs))
        }
        Command::CodeNew { ring, n, generators } => {
            let code = code_from_parts(&ring, Some(n), &generators)?;
            render_object(format, &serial::code_to_json(&code))
        }
        Command::CodeDual {
            code,
            ring,
            n,
            generators,
        } => {
            let code = code_input(code.as_deref(), ring.as_deref(), n, generators.as_deref())?;
            render_object(format, &serial::code_to_json(&code.dual()))
        }
        Command::LcdCheck {
            code,
            ring,
            n,
            generators,
        } => {
            let code = code_input(code.as_deref(), ring.as_deref(), n, generators.as_deref())?;
            let witness = code.hull_witness();
            let obj = json!({
                "lcd": witness.is_none(),
                "witness": witness.as_deref().map(serial::vector_to_json),
            });
            render_object(format, &obj)
        }
        Command::Distance {
            code,
            ring,
            n,
            generators,
            metric,
            budget,
            pattern_budget,
            target,
        } => {
            let code = code_input(code.as_deref(), ring.as_deref(), n, generators.as_deref())?;
            let kind = metric_for(&code, metric)?;
            let mut opts = DistanceOptions::default();
            if let Some(b) = budget {
                opts.enumeration_budget = b;
            }
            if let Some(b) = pattern_budget {
                opts.pattern_budget = b;
            }
            opts.target = target;
            let report = distance::min_distance(&code, kind, &opts)?;
            render_object(format, &serial::distance_report_to_json(&report))
        }
        Command::CrtCompose { codes } => {
            let text = read_inline_or_file(&codes)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
            let items = value
                .as_array()
                .ok_or_else(|| Error::Parse("--codes expects a JSON array".into()))?;
            let parts = items
                .iter()
                .map(serial::code_from_json)
                .collect::<Result<Vec<_>>>()?;
            let composite = LinearCode::crt_compose(&parts)?;
            render_object(format, &serial::code_to_json(&composite))
        }
        Command::ConstaEnumerate { ring, n, gamma } => {
            let ring = Ring::parse(&ring)?;
            let gamma = serial::element_from_text(&ring, &gamma)?;
            let codes = consta::enumerate_lcd(&ring, n, &gamma)?;
            let rows = codes
                .iter()
                .map(|c| consta_row(c, None))
                .collect::<Result<Vec<_>>>()?;
            render_rows(format, &rows)
        }
        Command::ConstaTable {
            ring,
            n,
            gamma,
            distances,
            metric,
            budget,
            pattern_budget,
        } => {
            let ring = Ring::parse(&ring)?;
            let gamma = serial::element_from_text(&ring, &gamma)?;
            let codes = consta::enumerate_lcd(&ring, n, &gamma)?;
            let mut opts = DistanceOptions::default();
            if let Some(b) = budget {
                opts.enumeration_budget = b;
            }
            if let Some(b) = pattern_budget {
                opts.pattern_budget = b;
            }
            let mut rows = Vec::with_capacity(codes.len());
            for c in &codes {
                let report = if distances {
                    let kind = metric_for(c.linear_code(), metric)?;
                    Some(distance::min_distance(c.linear_code(), kind, &opts)?)
                } else {
                    None
                };
                rows.push(consta_row(c, report.as_ref())?);
            }
            render_rows(format, &rows)
        }
        Command::Gray {
            vector,
            ring,
            n,
            generators,
            code,
        } => {
            if let Some(vector) = vector {
                let ring = Ring::parse(ring.as_deref().unwrap_or("Z4"))?;
                let v = serial::vector_from_text(&ring, &vector)?;
                let image = gray_map(&v)?;
                return render_object(cli.output, &json!({ "image": image }));
            }
            let code = code_input(code.as_deref(), ring.as_deref(), n, generators.as_deref())?;
            let image = gray_image(&code)?;
            let obj = json!({
                "image_size": image.len(),
                "image_length": image.first().map_or(0, Vec::len),
                "linear": is_image_linear(&image),
                "min_hamming": min_pairwise_hamming(&image),
            });
            render_object(format, &obj)
        }
    }
}

fn metric_for(code: &LinearCode, metric: Option<MetricArg>) -> Result<WeightKind> {
    Ok(match metric {
        Some(MetricArg::Lee) => WeightKind::Lee,
        Some(MetricArg::Hamming) => WeightKind::Hamming,
        None => {
            if code.ring().integer_modulus().is_some() {
                WeightKind::Lee
            } else {
                WeightKind::Hamming
            }
        }
    })
}

fn factor_set_json(fs: &FactorSet) -> Value {
    json!({
        "ring": fs.ring().spec_string(),
        "n": fs.n(),
        "gamma": serial::element_to_json(fs.gamma()),
        "modulus": format!("X^{}-{}", fs.n(), fs.gamma()),
        "factors": fs.factors().iter().map(serial::poly_to_text).collect::<Vec<_>>(),
        "reciprocal_pairing": fs.pairing(),
    })
}

fn consta_row(c: &ConstacyclicCode, report: Option<&DistanceReport>) -> Result<Value> {
    let mut obj = serde_json::Map::new();
    obj.insert("generator".into(), json!(serial::poly_to_text(c.generator())));
    obj.insert("n".into(), json!(c.length()));
    obj.insert("gamma".into(), serial::element_to_json(c.gamma()));
    obj.insert("rank".into(), json!(c.rank()));
    obj.insert("cardinality".into(), json!(c.cardinality().to_string()));
    obj.insert("lcd".into(), json!(c.is_lcd()?));
    obj.insert("reversible".into(), json!(c.is_reversible()?));
    if let Some(r) = report {
        obj.insert(
            "metric".into(),
            json!(match r.metric {
                WeightKind::Lee => "lee",
                WeightKind::Hamming => "hamming",
            }),
        );
        match &r.status {
            DistanceStatus::Exact(d) => {
                obj.insert("distance".into(), json!(d));
                obj.insert("status".into(), json!("exact"));
            }
            DistanceStatus::Bounds { lower, upper } => {
                obj.insert("distance".into(), json!([lower, upper]));
                obj.insert("status".into(), json!("bounds"));
            }
        }
        obj.insert(
            "strategy".into(),
            json!(match r.strategy {
                SearchStrategy::FullEnumeration => "full_enumeration",
                SearchStrategy::BoundedWeightSearch => "bounded_weight_search",
            }),
        );
    }
    Ok(Value::Object(obj))
}

// ---------------------------------------------------------------------------
// inputs
// ---------------------------------------------------------------------------

fn read_inline_or_file(arg: &str) -> Result<String> {
    if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn code_from_parts(ring: &str, n: Option<usize>, generators: &str) -> Result<LinearCode> {
    let ring = Ring::parse(ring)?;
    let text = read_inline_or_file(generators)?;
    let matrix = if text.trim_start().starts_with('[') {
        let value: Value =
            serde_json::from_str(&text).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
        serial::matrix_from_json(&ring, &value)?
    } else {
        serial::matrix_from_text(&ring, &text)?
    };
    let n = n.unwrap_or(matrix.cols());
    LinearCode::from_generators(&ring, n, matrix)
}

fn code_input(
    code: Option<&str>,
    ring: Option<&str>,
    n: Option<usize>,
    generators: Option<&str>,
) -> Result<LinearCode> {
    match (code, ring, generators) {
        (Some(code), _, _) => {
            let text = read_inline_or_file(code)?;
            let value: Value = serde_json::from_str(&text)
                .map_err(|e| Error::Parse(format!("bad code JSON: {e}")))?;
            serial::code_from_json(&value)
        }
        (None, Some(ring), Some(generators)) => code_from_parts(ring, n, generators),
        _ => Err(Error::Parse(
            "provide either --code, or --ring with --generators".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

fn render_object(format: OutputFormat, value: &Value) -> Result<String> {
    match format {
        OutputFormat::Json => Ok(serde_json::to_string_pretty(value).unwrap()),
        OutputFormat::Csv => {
            let obj = value.as_object().expect("scalar outputs are objects");
            let keys: Vec<&String> = obj.keys().collect();
            let header = keys
                .iter()
                .map(|k| csv_quote(k))
                .collect::<Vec<_>>()
                .join(",");
            let row = keys
                .iter()
                .map(|k| csv_quote(&csv_value(&obj[k.as_str()])))
                .collect::<Vec<_>>()
                .join(",");
            Ok(format!("{header}\r\n{row}"))
        }
        OutputFormat::Text => {
            let obj = value.as_object().expect("scalar outputs are objects");
            let mut out = String::new();
            for (k, v) in obj {
                out.push_str(&format!("{k}: {}\n", csv_value(v)));
            }
            Ok(out.trim_end().to_string())
        }
    }
}

fn render_rows(format: OutputFormat, rows: &[Value]) -> Result<String> {
    match format {
        OutputFormat::Json => {
            Ok(serde_json::to_string_pretty(&Value::Array(rows.to_vec())).unwrap())
        }
        OutputFormat::Csv => {
            let Some(first) = rows.first() else {
                return Ok(String::new());
            };
            let keys: Vec<String> = first
                .as_object()
                .expect("rows are objects")
                .keys()
                .cloned()
                .collect();
            let mut out = keys
                .iter()
                .map(|k| csv_quote(k))
                .collect::<Vec<_>>()
                .join(",");
            for row in rows {
                out.push_str("\r\n");
                let obj = row.as_object().unwrap();
                let line = keys
                    .iter()
                    .map(|k| csv_quote(&obj.get(k).map(csv_value).unwrap_or_default()))
                    .collect::<Vec<_>>()
                    .join(",");
                out.push_str(&line);
            }
            Ok(out)
        }
        OutputFormat::Text => {
            let mut out = String::new();
            for (i, row) in rows.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let obj = row.as_object().unwrap();
                let line = obj
                    .iter()
                    .map(|(k, v)| format!("{k}={}", csv_value(v)))
                    .collect::<Vec<_>>()
                    .join("  ");
                out.push_str(&line);
            }
            Ok(out)
        }
    }
}

fn csv_value(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// RFC 4180 quoting.
fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') || field.contains('\r') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
