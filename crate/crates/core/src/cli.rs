//! Command-line front end.
//!
//! Every subcommand builds one JSON record; the text and CSV renderings are
//! derived from that record, so all three carry the same numbers. Exit codes:
//! 0 on success, 1 on a usage or domain error, 2 when a resource cap is hit.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::ehrhart::ehrhart_polynomial;
use crate::error::{Error, Result};
use crate::estimators::{
    conj1_delta, conj1_interval, cor1_estimate, good_estimate, hypothesis_lhs, remark1_decompose,
    thm1_closed_estimate, thm1_estimate,
};
use crate::exact::{count_exact_with, ExactConfig, DEFAULT_MAX_STATES};
use crate::integral::{
    integral_numeric_with, lemma3_bound_check, lemma3_identity_check, lemma4_bound_check, reconstruct_m,
    QuadratureLimits, DEFAULT_ENVELOPE_CONSTANT, DEFAULT_MAX_EVALS, MAX_DIMENSION,
};
use crate::montecarlo::{mc_estimate, McEstimate};
use crate::numeric::{rational_to_f64, CountExact, EstimateInterval, LogEstimate};
use crate::table::TableSpec;

#[derive(Parser, Debug)]
#[command(
    name = "contab",
    version,
    about = "Count and estimate m × n nonnegative integer matrices with row sums s and column sums t"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Significant digits in scientific renderings.
    #[arg(long, default_value_t = 4, global = true, value_parser = clap::value_parser!(u8).range(1..=15))]
    digits: u8,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest DP frontier for exact counting.
    #[arg(long, global = true, env = "CONTAB_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
    max_states: u64,
    /// Largest number of integrand evaluations for quadrature.
    #[arg(long, global = true, env = "CONTAB_MAX_EVALS", default_value_t = DEFAULT_MAX_EVALS)]
    max_evals: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Good,
    Thm1,
    Thm1Closed,
    Cor1,
    Conj1,
}

#[derive(Args, Debug, Clone, Copy)]
struct SpecArgs {
    m: u64,
    s: u64,
    n: u64,
    t: u64,
}

impl SpecArgs {
    fn spec(&self) -> Result<TableSpec> {
        TableSpec::new(self.m, self.s, self.n, self.t)
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact count.
    Count(SpecArgs),
    /// One closed-form estimate.
    Estimate {
        #[arg(long, value_enum)]
        method: Method,
        #[command(flatten)]
        spec: SpecArgs,
    },
    /// Split the exact count as N·P1·P2·E.
    Decompose(SpecArgs),
    /// All estimates side by side, with the exact count when it fits the caps.
    Compare {
        #[command(flatten)]
        spec: SpecArgs,
        /// Add a Monte Carlo column with this many samples.
        #[arg(long)]
        mc_samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Leave the exact column empty.
        #[arg(long)]
        skip_exact: bool,
    },
    /// Importance-sampling estimate.
    Mc {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Counting polynomial of the m × n shape.
    Ehrhart {
        m: u64,
        n: u64,
        /// Also evaluate at this dilation.
        #[arg(long)]
        eval: Option<u64>,
    },
    /// Rebuild the count from the torus integral.
    VerifyIntegral {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long, default_value_t = 64)]
        grid: u64,
        /// Largest m + n accepted.
        #[arg(long, default_value_t = MAX_DIMENSION)]
        max_dim: u64,
    },
    /// Left side of the growth condition on λ, m and n.
    CheckHypothesis {
        #[command(flatten)]
        spec: SpecArgs,
        #[arg(long)]
        a: Option<f64>,
    },
    /// The offset Δ placing the exact count on the conjectured form.
    Delta(SpecArgs),
    /// Sample the integrand envelopes at one density.
    CheckLemmas {
        /// Density as an integer or a fraction `p/q`.
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 10_000)]
        k: u64,
        /// Constant in the envelope `exp(C(1/K + 1/(AK)))`.
        #[arg(long, default_value_t = DEFAULT_ENVELOPE_CONSTANT)]
        constant: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `args` (program name first), runs the command and writes the
/// record to `out` and diagnostics to `err`. Returns the exit code.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    0
                }
                _ => {
                    let _ = write!(err, "{}", e.render().ansi());
                    1
                }
            };
        }
    };
    let record = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::invalid(format!("thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    match record {
        Ok(record) => {
            let text = render(&record, cli.format);
            match writeln!(out, "{text}") {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(err, "error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_resource_limit() {
                2
            } else {
                1
            }
        }
    }
}

struct Ctx {
    digits: usize,
    exact: ExactConfig,
}

impl Ctx {
    fn sci(&self, x: LogEstimate) -> Value {
        Value::String(x.scientific(self.digits).to_string())
    }

    fn interval(&self, iv: &EstimateInterval) -> Value {
        json!({
            "rendered": iv.render(self.digits).to_string(),
            "low": self.sci(iv.low()),
            "mid": self.sci(iv.midpoint()),
            "high": self.sci(iv.high()),
        })
    }

    fn count(&self, c: &CountExact) -> Value {
        Value::String(c.to_string())
    }

    fn mc(&self, est: &McEstimate) -> Value {
        let se = if est.log_standard_error == f64::NEG_INFINITY {
            Value::String("0".into())
        } else {
            self.sci(est.standard_error())
        };
        json!({
            "estimate": self.sci(est.mean),
            "standard_error": se,
            "relative_standard_error": est.relative_standard_error(),
            "effective_sample_size": est.effective_sample_size,
            "samples": est.sample_count,
            "seed": est.seed,
        })
    }
}

fn spec_json(spec: &TableSpec) -> Value {
    json!({
        "m": spec.m(),
        "s": spec.s(),
        "n": spec.n(),
        "t": spec.t(),
        "lambda": spec.density().to_string(),
    })
}

fn record(command: &str, spec: Option<&TableSpec>, method: &str, result: Value, meta: Value) -> Value {
    json!({
        "command": command,
        "spec": spec.map(spec_json).unwrap_or(Value::Null),
        "method": method,
        "result": result,
        "meta": meta,
    })
}

fn omitted() -> Value {
    json!({ "error_terms": "omitted" })
}

fn method_name(method: Method) -> &'static str {
    match method {
        Method::Good => "good",
        Method::Thm1 => "thm1",
        Method::Thm1Closed => "thm1-closed",
        Method::Cor1 => "cor1",
        Method::Conj1 => "conj1",
    }
}

fn execute(cli: &Cli) -> Result<Value> {
    let ctx = Ctx {
        digits: cli.digits as usize,
        exact: ExactConfig {
            max_states: cli.max_states,
        },
    };
    match &cli.command {
        Command::Count(args) => {
            let spec = args.spec()?;
            let start = Instant::now();
            let count = count_exact_with(&spec, &ctx.exact)?;
            let result = json!({ "exact": ctx.count(&count), "scientific": ctx.sci(count.as_log()) });
            let meta = json!({ "runtime_s": start.elapsed().as_secs_f64() });
            Ok(record("count", Some(&spec), "exact", result, meta))
        }
        Command::Estimate { method, spec } => {
            let spec = spec.spec()?;
            let result = match method {
                Method::Conj1 => json!({ "interval": ctx.interval(&conj1_interval(&spec)?) }),
                Method::Good => json!({ "estimate": ctx.sci(good_estimate(&spec)?) }),
                Method::Thm1 => json!({ "estimate": ctx.sci(thm1_estimate(&spec)?) }),
                Method::Thm1Closed => json!({ "estimate": ctx.sci(thm1_closed_estimate(&spec)?) }),
                Method::Cor1 => json!({ "estimate": ctx.sci(cor1_estimate(&spec)?) }),
            };
            Ok(record("estimate", Some(&spec), method_name(*method), result, omitted()))
        }
        Command::Decompose(args) => {
            let spec = args.spec()?;
            let exact = count_exact_with(&spec, &ctx.exact)?;
            let d = remark1_decompose(&spec, &exact)?;
            let ln_rat = |r: &BigRational| ctx.sci(LogEstimate::from_ln(crate::numeric::ln_rational(r)));
            let result = json!({
                "exact": ctx.count(&exact),
                "N": ctx.count(&d.total_tables),
                "P1": d.row_probability.to_string(),
                "P1_value": ln_rat(&d.row_probability),
                "P2": d.column_probability.to_string(),
                "P2_value": ln_rat(&d.column_probability),
                "E": d.correction.to_string(),
                "E_value": rational_to_f64(&d.correction),
            });
            Ok(record("decompose", Some(&spec), "remark1", result, Value::Object(Default::default())))
        }
        Command::Compare {
            spec,
            mc_samples,
            seed,
            skip_exact,
        } => {
            let spec = spec.spec()?;
            compare(&ctx, &spec, *mc_samples, *seed, *skip_exact)
        }
        Command::Mc { spec, samples, seed } => {
            let spec = spec.spec()?;
            let start = Instant::now();
            let est = mc_estimate(&spec, *samples, *seed)?;
            let meta = json!({ "runtime_s": start.elapsed().as_secs_f64() });
            Ok(record("mc", Some(&spec), "importance-sampling", ctx.mc(&est), meta))
        }
        Command::Ehrhart { m, n, eval } => {
            let poly = ehrhart_polynomial(*m, *n, &ctx.exact)?;
            let (s0, t0) = poly.base_margins();
            let strings = |xs: &[BigRational]| xs.iter().map(|x| Value::String(x.to_string())).collect::<Vec<_>>();
            let evaluation = match eval {
                Some(q) => {
                    let spec = poly.spec_at(*q)?;
                    json!({ "q": q, "spec": spec_json(&spec), "value": ctx.count(&poly.evaluate(*q)?) })
                }
                None => Value::Null,
            };
            let result = json!({
                "m": m,
                "n": n,
                "s0": s0,
                "t0": t0,
                "degree": poly.degree(),
                "polynomial": poly.to_string(),
                "coefficients": strings(poly.coefficients()),
                "h_vector": strings(poly.h_vector()),
                "leading_coefficient": poly.leading_coefficient().to_string(),
                "leading_factored": poly.leading_factored(),
                "evaluation": evaluation,
            });
            Ok(record("ehrhart", None, "interpolation", result, Value::Object(Default::default())))
        }
        Command::VerifyIntegral { spec, grid, max_dim } => {
            let spec = spec.spec()?;
            let limits = QuadratureLimits {
                max_evals: cli.max_evals,
                max_dimension: *max_dim,
            };
            let start = Instant::now();
            let est = integral_numeric_with(&spec, *grid, &limits)?;
            let rebuilt = reconstruct_m(&spec, est.value)?;
            let exact = count_exact_with(&spec, &ctx.exact)?;
            let exact_f = rational_to_f64(&BigRational::from_integer(exact.value().clone().into()));
            let result = json!({
                "integral_re": est.value.re,
                "integral_im": est.value.im,
                "imaginary_residue": est.imaginary_residue(),
                "reconstructed": rebuilt,
                "exact": ctx.count(&exact),
                "relative_error": ((rebuilt - exact_f) / exact_f).abs(),
            });
            let meta = json!({
                "grid": grid,
                "evaluations": est.evaluations,
                "runtime_s": start.elapsed().as_secs_f64(),
            });
            Ok(record("verify-integral", Some(&spec), "trapezoid", result, meta))
        }
        Command::CheckHypothesis { spec, a } => {
            let spec = spec.spec()?;
            let report = hypothesis_lhs(&spec)?;
            let result = json!({
                "lhs": report.lhs.to_string(),
                "lhs_value": report.lhs_f64(),
                "min_a": report.min_a,
                "a": a,
                "holds": a.map(|a| report.holds_for(a)),
            });
            Ok(record("check-hypothesis", Some(&spec), "hypothesis", result, Value::Object(Default::default())))
        }
        Command::Delta(args) => {
            let spec = args.spec()?;
            let exact = count_exact_with(&spec, &ctx.exact)?;
            let delta = conj1_delta(&spec, &exact)?;
            let result = json!({
                "exact": ctx.count(&exact),
                "delta": delta,
                "in_range": delta > 0.0 && delta < 2.0,
            });
            Ok(record("delta", Some(&spec), "conj1", result, Value::Object(Default::default())))
        }
        Command::CheckLemmas {
            lambda,
            samples,
            k,
            constant,
            seed,
        } => check_lemmas(lambda, *samples, *k, *constant, *seed),
    }
}

fn compare(ctx: &Ctx, spec: &TableSpec, mc_samples: Option<u64>, seed: u64, skip_exact: bool) -> Result<Value> {
    let mc = match mc_samples {
        Some(samples) => ctx.mc(&mc_estimate(spec, samples, seed)?),
        None => Value::Null,
    };
    let (exact, reason) = if skip_exact {
        (Value::Null, Value::String("skipped".into()))
    } else {
        match count_exact_with(spec, &ctx.exact) {
            Ok(c) => (ctx.count(&c), Value::Null),
            Err(e) if e.is_resource_limit() => (Value::Null, Value::String(e.to_string())),
            Err(e) => return Err(e),
        }
    };
    let result = json!({
        "good": ctx.sci(good_estimate(spec)?),
        "thm1": ctx.sci(thm1_estimate(spec)?),
        "thm1_closed": ctx.sci(thm1_closed_estimate(spec)?),
        "cor1": ctx.sci(cor1_estimate(spec)?),
        "conj1": ctx.interval(&conj1_interval(spec)?),
        "mc": mc,
        "exact": exact,
        "exact_reason": reason,
    });
    Ok(record("compare", Some(spec), "table", result, omitted()))
}

fn check_lemmas(lambda: &str, samples: usize, k: u64, constant: f64, seed: u64) -> Result<Value> {
    let lam: BigRational = lambda
        .parse()
        .map_err(|_| Error::invalid(format!("cannot parse density {lambda:?}")))?;
    let pointwise = lemma3_bound_check(&lam, samples, seed)?;
    // a square spec with this density, for the modulus identity
    let (p, q) = (lam.numer().clone(), lam.denom().clone());
    let side = u64::try_from(q).map_err(|_| Error::invalid("density denominator too large"))?;
    let line = u64::try_from(p).map_err(|_| Error::invalid("density numerator too large"))?;
    let spec = TableSpec::new(side, line, side, line)?;
    let identity = lemma3_identity_check(&spec, 100, seed)?;
    let integral = lemma4_bound_check(&lam, k, constant)?;
    let result = json!({
        "lambda": lam.to_string(),
        "pointwise": {
            "samples": pointwise.samples,
            "z_max": pointwise.z_max,
            "violations": pointwise.violations.len(),
            "min_log_slack": pointwise.min_log_slack,
            "max_log_slack": pointwise.max_log_slack,
        },
        "modulus_identity_max_error": identity,
        "quartic_integral": {
            "k": k,
            "n_arc": integral.params.n_arc,
            "delta": integral.params.delta,
            "ratio": integral.ratio,
            "envelope": integral.envelope,
            "constant": constant,
            "within_upper_envelope": integral.within_upper_envelope(),
        },
    });
    Ok(record("check-lemmas", None, "sampling", result, json!({ "seed": seed })))
}

/// Leaves of a record as `(dotted path, scalar text)` in canonical order.
pub fn flatten(value: &Value) -> Vec<(String, String)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
        let join = |k: &str| {
            if prefix.is_empty() {
                k.to_string()
            } else {
                format!("{prefix}.{k}")
            }
        };
        match v {
            Value::Object(map) => {
                for (k, v) in map {
                    walk(&join(k), v, out);
                }
            }
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    walk(&join(&i.to_string()), v, out);
                }
            }
            Value::String(s) => out.push((prefix.to_string(), s.clone())),
            other => out.push((prefix.to_string(), other.to_string())),
        }
    }
    let mut out = Vec::new();
    walk("", value, &mut out);
    out
}

pub fn render(record: &Value, format: Format) -> String {
    match format {
        Format::Json => record.to_string(),
        Format::Csv => render_csv(record),
        Format::Text => render_text(record),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn render_csv(record: &Value) -> String {
    let leaves = flatten(record);
    let header: Vec<String> = leaves.iter().map(|(k, _)| csv_field(k)).collect();
    let row: Vec<String> = leaves.iter().map(|(_, v)| csv_field(v)).collect();
    format!("{}\n{}", header.join(","), row.join(","))
}

const COMPARE_COLUMNS: [(&str, &str); 7] = [
    ("G", "result.good"),
    ("thm1", "result.thm1"),
    ("thm1-closed", "result.thm1_closed"),
    ("Cor1", "result.cor1"),
    ("Conj1", "result.conj1.rendered"),
    ("MC", "result.mc.estimate"),
    ("Exact", "result.exact"),
];

fn render_text(record: &Value) -> String {
    let leaves = flatten(record);
    let mut lines = Vec::new();
    let mut shown: Vec<&str> = Vec::new();
    if record["command"] == "compare" {
        let lookup = |path: &str| {
            leaves
                .iter()
                .find(|(k, _)| k == path)
                .map(|(_, v)| v.as_str())
                .unwrap_or("-")
        };
        let spec = format!(
            "{},{},{},{}",
            record["spec"]["m"], record["spec"]["s"], record["spec"]["n"], record["spec"]["t"]
        );
        let mut cells = vec![("m,s,n,t".to_string(), spec)];
        for (title, path) in COMPARE_COLUMNS {
            let mut v = lookup(path).to_string();
            if path == "result.mc.estimate" && v != "-" {
                v = format!("{v} ± {}", lookup("result.mc.standard_error"));
                shown.push("result.mc.standard_error");
            }
            if v == "null" {
                v = "-".into();
            }
            cells.push((title.to_string(), v));
            shown.push(path);
        }
        let widths: Vec<usize> = cells
            .iter()
            .map(|(h, v)| h.chars().count().max(v.chars().count()))
            .collect();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
        let header: Vec<String> = cells.iter().zip(&widths).map(|((h, _), &w)| pad(h, w)).collect();
        let row: Vec<String> = cells.iter().zip(&widths).map(|((_, v), &w)| pad(v, w)).collect();
        lines.push(header.join("  ").trim_end().to_string());
        lines.push(row.join("  ").trim_end().to_string());
        shown.extend(["command", "spec.m", "spec.s", "spec.n", "spec.t"]);
    }
    for (k, v) in &leaves {
        if !shown.contains(&k.as_str()) {
            lines.push(format!("{k}: {v}"));
        }
    }
    lines.join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn run(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("contab").chain(args.iter().copied());
        let code = run_cli(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    fn json(args: &[&str]) -> Value {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let (code, out, err) = run(&full);
        assert_eq!(code, 0, "{err}");
        serde_json::from_str(&out).unwrap()
    }

    #[test]
    fn count_reports_the_exact_decimal() {
        let v = json(&["count", "3", "100", "3", "100"]);
        assert_eq!(v["result"]["exact"], "13268976");
        assert_eq!(v["spec"]["lambda"], "100/3");
        let (code, out, _) = run(&["count", "3", "100", "3", "100"]);
        assert_eq!(code, 0);
        assert!(out.contains("result.exact: 13268976"), "{out}");
    }

    #[test]
    fn balance_violation_exits_one() {
        let (code, out, err) = run(&["count", "2", "3", "3", "1"]);
        assert_eq!(code, 1);
        assert!(out.is_empty());
        assert!(err.contains("2·3 ≠ 3·1"), "{err}");
    }

    #[test]
    fn conj1_rendering() {
        let (code, out, _) = run(&["estimate", "--method", "conj1", "30", "3", "30", "3"]);
        assert_eq!(code, 0);
        assert!(out.contains("(2.242 ± 0.037)e92"), "{out}");
        let v = json(&["estimate", "--method", "good", "30", "3", "30", "3"]);
        assert_eq!(v["result"]["estimate"], "1.404e92");
        assert_eq!(v["meta"]["error_terms"], "omitted");
    }

    #[test]
    fn usage_errors_exit_one_and_help_exits_zero() {
        assert_eq!(run(&["frobnicate"]).0, 1);
        assert_eq!(run(&["count", "--bogus", "1", "1", "1", "1"]).0, 1);
        assert_eq!(run(&["estimate", "--method", "nope", "1", "1", "1", "1"]).0, 1);
        assert_eq!(run(&[]).0, 1);
        let (code, out, _) = run(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("compare"));
        assert_eq!(run(&["--version"]).0, 0);
    }

    #[test]
    fn resource_cap_exits_two() {
        let (code, _, err) = run(&["--max-states", "5", "count", "4", "8", "4", "8"]);
        assert_eq!(code, 2, "{err}");
        assert!(err.contains("cap 5"), "{err}");
        let (code, _, _) = run(&["--max-evals", "100", "verify-integral", "2", "2", "2", "2"]);
        assert_eq!(code, 2);
        assert_eq!(run(&["verify-integral", "4", "3", "3", "4", "--grid", "8"]).0, 1);
    }

    #[test]
    fn compare_row() {
        let v = json(&["compare", "3", "100", "3", "100"]);
        let r = &v["result"];
        assert_eq!(r["good"], "1.019e7");
        assert_eq!(r["thm1"], "1.680e7");
        assert_eq!(r["conj1"]["rendered"], "(1.316 ± 0.217)e7");
        assert_eq!(r["exact"], "13268976");
        assert!(r["mc"].is_null());

        let v = json(&["compare", "1", "6", "3", "2"]);
        assert_eq!(v["result"]["good"], "1.000e0");
        assert_eq!(v["result"]["exact"], "1");

        let v = json(&["--max-states", "3", "compare", "4", "8", "4", "8", "--mc-samples", "200", "--seed", "9"]);
        assert!(v["result"]["exact"].is_null());
        assert!(v["result"]["exact_reason"].as_str().unwrap().contains("cap 3"));
        assert_eq!(v["result"]["mc"]["seed"], 9);
        assert_eq!(v["result"]["mc"]["samples"], 200);

        let (_, text, _) = run(&["compare", "3", "100", "3", "100"]);
        let first = text.lines().next().unwrap();
        assert!(first.starts_with("m,s,n,t") && first.contains("Conj1"), "{text}");
    }

    #[test]
    fn remaining_commands() {
        let v = json(&["decompose", "2", "3", "3", "2"]);
        assert_eq!(v["result"]["E"], "539/450");
        assert_eq!(v["result"]["N"], "462");

        let v = json(&["ehrhart", "3", "3", "--eval", "100"]);
        assert_eq!(v["result"]["degree"], 4);
        assert_eq!(v["result"]["evaluation"]["value"], "13268976");

        let v = json(&["check-hypothesis", "4", "4", "4", "4", "--a", "3"]);
        assert_eq!(v["result"]["lhs"], "3");
        assert_eq!(v["result"]["holds"], true);

        let v = json(&["delta", "2", "3", "3", "2"]);
        assert_eq!(v["result"]["exact"], "7");

        let v = json(&["mc", "2", "2", "2", "2", "--samples", "1000", "--seed", "4"]);
        assert_eq!(v["result"]["seed"], 4);
        assert_eq!(v["result"]["estimate"], "3.000e0");

        let v = json(&["verify-integral", "2", "2", "2", "2", "--grid", "32"]);
        assert!(v["result"]["relative_error"].as_f64().unwrap() < 1e-6);

        let v = json(&["check-lemmas", "--lambda", "1/30", "--samples", "1000"]);
        assert_eq!(v["result"]["pointwise"]["violations"], 0);
        assert_eq!(v["result"]["quartic_integral"]["n_arc"], 6200);

        let (code, out, _) = run(&["--format", "csv", "estimate", "--method", "conj1", "2", "3", "3", "2"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        let header = lines.next().unwrap();
        assert!(header.contains("result.interval.low"));
        assert!(header.contains("result.interval.mid"));
        assert!(header.contains("result.interval.high"));
        assert_eq!(lines.next().unwrap().split(',').count(), header.split(',').count());
    }

    #[test]
    fn digits_flag() {
        let v = json(&["--digits", "6", "estimate", "--method", "good", "30", "3", "30", "3"]);
        assert_eq!(v["result"]["estimate"].as_str().unwrap().len(), "1.40400e92".len());
    }

    #[test]
    fn text_and_json_carry_the_same_numbers() {
        for args in [
            &["compare", "2", "3", "3", "2", "--mc-samples", "500"][..],
            &["decompose", "3", "2", "3", "2"],
            &["ehrhart", "2", "3"],
            &["check-hypothesis", "3", "100", "3", "100"],
        ] {
            let v = json(args);
            let (_, text, _) = run(args);
            for (path, value) in flatten(&v) {
                let numeric = value.chars().any(|c| c.is_ascii_digit());
                if path.ends_with("runtime_s") || !numeric {
                    continue;
                }
                assert!(text.contains(&value), "{path} = {value} missing from\n{text}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn json_round_trips(m in 1u64..4, n in 1u64..4, q in 1u64..4, method in 0usize..5) {
            let g = num_integer::gcd(m, n);
            let (s, t) = (q * n / g, q * m / g);
            let name = ["good", "thm1", "thm1-closed", "cor1", "conj1"][method];
            let args = ["--format", "json", "estimate", "--method", name,
                &m.to_string(), &s.to_string(), &n.to_string(), &t.to_string()].map(String::from);
            let argv: Vec<&str> = args.iter().map(String::as_str).collect();
            let (code, out, _) = run(&argv);
            prop_assert_eq!(code, 0);
            let parsed: Value = serde_json::from_str(&out).unwrap();
            prop_assert_eq!(format!("{}\n", parsed), out.clone());

            let count = ["--format", "json", "compare", &m.to_string(), &s.to_string(),
                &n.to_string(), &t.to_string(), "--mc-samples", "50"].map(String::from);
            let argv: Vec<&str> = count.iter().map(String::as_str).collect();
            let (_, out, _) = run(&argv);
            let parsed: Value = serde_json::from_str(&out).unwrap();
            prop_assert_eq!(format!("{}\n", parsed), out);
        }
    }
}
