//! Command-line surface for the null-cone toolkit.
//!
//! Subcommands wrap the library one-for-one: `nullcone` decides membership
//! (scaling, invariant witnesses, or both), `scale` runs the scaling loop,
//! `capacity` estimates orbit capacity, `deficiency` decides support
//! deficiency with exact certificates, `invariants` searches for nonzero
//! invariant witnesses, and `slicerank` reports slice-rank bounds with an
//! optional cross-check against scaling verdicts.
//!
//! All inputs and reports are JSON; tensors and supports use the shared
//! interchange format (1-based indices on disk). Reports are deterministic:
//! identical inputs, seed, and precision produce byte-identical output, and
//! tuple indices in reports are 1-based to match the input format. Exit
//! codes partition outcomes:
//!
//! * `0` — success; for verdict commands, certified *not* in the null cone
//! * `1` — usage error (bad flags, unreadable file, invalid operation input)
//! * `2` — parse error in an input document
//! * `3` — certified null-cone membership
//! * `4` — inconclusive (budget exhausted without a certificate)

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use nullcone_core::duality::{
    capacity_estimate, capacity_lower_bound, decide_deficiency, deficiency_value,
    DeficiencyDecision,
};
use nullcone_core::invariants::{nullcone_algebraic, AlgebraicOutcome, AlgebraicWitness};
use nullcone_core::scaling::{
    scale_with, GroupElement, NullConeReason, Precision, ScaleConfig, ScalingOutcome,
    ScalingVerdict, TraceRow, TRACE_CSV_HEADER,
};
use nullcone_core::slicerank::{
    instability_from_slice_rank, nullcone_vs_slicerank_check, slice_rank_report,
    SliceRankNullConeReport, SliceRankReport,
};
use nullcone_core::{Error, Support, Tensor};
use num_traits::ToPrimitive;
use serde_json::{json, Value};
use std::io::Write;
use std::path::{Path, PathBuf};

const EXIT_NOT_MEMBER: i32 = 0;
const EXIT_USAGE: i32 = 1;
const EXIT_PARSE: i32 = 2;
const EXIT_MEMBER: i32 = 3;
const EXIT_INCONCLUSIVE: i32 = 4;

#[derive(Parser)]
#[command(
    name = "nullcone",
    version,
    about = "Null-cone membership for tensors under products of special linear groups",
    long_about = "Decide or approximate null-cone membership of tensors acted on along axes \
                  1..=d by SL(n1) x ... x SL(nd). Inputs and reports are JSON; reports are \
                  byte-identical for identical inputs, seed, and precision. Exit codes: \
                  0 = not in the null cone (or plain success), 1 = usage error, 2 = parse \
                  error, 3 = in the null cone, 4 = inconclusive."
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide membership via scaling, invariant witnesses, or both
    Nullcone(NullconeArgs),
    /// Run the scaling loop; report the scaled tensor, group element, and trace
    Scale(ScaleArgs),
    /// Estimate the orbit capacity by cyclic alternating minimization
    Capacity(CapacityArgs),
    /// Decide support deficiency with an exact integer certificate
    Deficiency(DeficiencyArgs),
    /// Search for a nonzero invariant witness of non-membership
    Invariants(InvariantsArgs),
    /// Slice-rank bounds, optionally cross-checked against scaling verdicts
    Slicerank(SlicerankArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Scaling iteration only (certified verdicts on exact inputs)
    Scaling,
    /// Invariant-witness search only (needs exact entries)
    Algebraic,
    /// Run both and report their agreement
    Both,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Scaling => "scaling",
            Mode::Algebraic => "algebraic",
            Mode::Both => "both",
        }
    }
}

#[derive(Args)]
struct NullconeArgs {
    /// Tensor JSON file
    file: PathBuf,
    /// Target total marginal deviation for the scaling run
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Extra cap on scaling iterations (the certified bound always applies)
    #[arg(long)]
    max_iters: Option<u64>,
    /// Decision route
    #[arg(long, value_enum, default_value_t = Mode::Scaling)]
    mode: Mode,
    /// Seed for randomized invariant sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest invariant degree examined in algebraic mode
    #[arg(long = "degree-cap", alias = "degree", default_value_t = 12)]
    degree_cap: usize,
    /// Random invariants per degree once exhaustive enumeration is too large
    #[arg(long, default_value_t = 64)]
    samples: u64,
    /// Write the per-iteration scaling trace as CSV to this path
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Arithmetic for the scaling iteration: 'double' or 'truncated:<bits>'
    #[arg(long, value_parser = parse_precision, default_value = "double")]
    precision: Precision,
}

#[derive(Args)]
struct ScaleArgs {
    /// Tensor JSON file
    file: PathBuf,
    /// Target total marginal deviation
    #[arg(long, default_value_t = 1e-3)]
    eps: f64,
    /// Extra cap on iterations (the certified bound always applies)
    #[arg(long)]
    max_iters: Option<u64>,
    /// Write the per-iteration trace as CSV to this path
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Arithmetic for the iteration: 'double' or 'truncated:<bits>'
    #[arg(long, value_parser = parse_precision, default_value = "double")]
    precision: Precision,
}

#[derive(Args)]
struct CapacityArgs {
    /// Tensor JSON file
    file: PathBuf,
    /// Number of cyclic sweeps over the acted axes
    #[arg(long, default_value_t = 4)]
    sweeps: u64,
}

#[derive(Args)]
struct DeficiencyArgs {
    /// Support JSON file ({"dims", "tuples"}) or tensor JSON file
    file: PathBuf,
    /// Magnitude threshold when extracting the support of a floating tensor
    #[arg(long, default_value_t = 0.0)]
    threshold: f64,
}

#[derive(Args)]
struct InvariantsArgs {
    /// Tensor JSON file
    file: PathBuf,
    /// Expected dims (comma separated, e.g. 1,2,2); checked against the file
    #[arg(long)]
    dims: Option<String>,
    /// Largest invariant degree examined
    #[arg(long = "degree-cap", alias = "degree", default_value_t = 12)]
    degree_cap: usize,
    /// Random invariants per degree once exhaustive enumeration is too large
    #[arg(long, default_value_t = 64)]
    samples: u64,
    /// Seed for randomized sampling
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct SlicerankArgs {
    /// Tensor JSON file
    file: PathBuf,
    /// Also scale the tensor and its square and test every implication
    #[arg(long)]
    cross_check: bool,
}

fn parse_precision(s: &str) -> Result<Precision, String> {
    if s == "double" {
        return Ok(Precision::Double);
    }
    if let Some(bits) = s.strip_prefix("truncated:") {
        let bits: u32 = bits
            .parse()
            .map_err(|_| format!("truncation bits must be an integer, got '{bits}'"))?;
        if !(1..=60).contains(&bits) {
            return Err("truncation bits must lie in 1..=60".into());
        }
        return Ok(Precision::Truncated(bits));
    }
    Err(format!(
        "precision must be 'double' or 'truncated:<bits>', got '{s}'"
    ))
}

fn parse_dims(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("bad dims component '{part}'")))
        })
        .collect()
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => run(cli),
        Err(e) => match e.kind() {
            ErrorKind::DisplayHelp
            | ErrorKind::DisplayVersion
            | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                print!("{e}");
                0
            }
            _ => {
                eprint!("{e}");
                EXIT_USAGE
            }
        },
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Cmd::Nullcone(args) => cmd_nullcone(args),
        Cmd::Scale(args) => cmd_scale(args),
        Cmd::Capacity(args) => cmd_capacity(args),
        Cmd::Deficiency(args) => cmd_deficiency(args),
        Cmd::Invariants(args) => cmd_invariants(args),
        Cmd::Slicerank(args) => cmd_slicerank(args),
    };
    match outcome {
        Ok((report, code)) => {
            let text =
                serde_json::to_string_pretty(&report).expect("reports are valid JSON values");
            // A closed pipe (`nullcone ... | head`) is not an error: keep the
            // verdict exit code and stop writing.
            let mut out = std::io::stdout().lock();
            if let Err(e) = writeln!(out, "{text}").and_then(|()| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: cannot write report: {e}");
                    return EXIT_USAGE;
                }
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Parse(_) => EXIT_PARSE,
                Error::Inconclusive(_)
                | Error::NumericallySingular { .. }
                | Error::ResourceBudget(_) => EXIT_INCONCLUSIVE,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))
}

fn read_tensor(path: &Path) -> Result<Tensor, Error> {
    Tensor::from_json_str(&read_file(path)?)
}

fn complex_json(re: f64, im: f64) -> Value {
    json!([re, im])
}

fn group_json(group: &GroupElement) -> Value {
    let factors: Vec<Value> = group
        .factors
        .iter()
        .map(|a| {
            let rows: Vec<Value> = (0..a.rows())
                .map(|i| {
                    let row: Vec<Value> = (0..a.cols())
                        .map(|j| {
                            let v = a.get(i, j);
                            complex_json(v.re, v.im)
                        })
                        .collect();
                    Value::Array(row)
                })
                .collect();
            Value::Array(rows)
        })
        .collect();
    json!({
        "factors": factors,
        "max_det_deviation": group.max_det_deviation(),
    })
}

fn reason_json(reason: &NullConeReason) -> Value {
    match reason {
        NullConeReason::SingularMarginal { axis, rank, dim } => json!({
            "type": "singular_marginal",
            "axis": axis,
            "rank": rank,
            "dim": dim,
        }),
        NullConeReason::CapacityBoundViolated {
            norm_sq,
            floor,
            iterations,
        } => json!({
            "type": "capacity_floor_violated",
            "norm_sq": norm_sq,
            "floor": floor,
            "iterations": iterations,
        }),
        NullConeReason::IterationBudgetExhausted {
            iterations,
            best_ds,
        } => json!({
            "type": "certified_budget_exhausted",
            "iterations": iterations,
            "best_ds": best_ds,
        }),
    }
}

fn scaling_json(outcome: &ScalingOutcome) -> Value {
    match &outcome.verdict {
        ScalingVerdict::Scaled {
            group,
            ds_value,
            iterations,
            ..
        } => json!({
            "verdict": "not_in_null_cone",
            "ds": ds_value,
            "iterations": iterations,
            "group": group_json(group),
        }),
        ScalingVerdict::InNullCone { reason } => json!({
            "verdict": "in_null_cone",
            "reason": reason_json(reason),
        }),
    }
}

fn witness_json(witness: &AlgebraicWitness) -> Value {
    match witness {
        AlgebraicWitness::Spanning { invariant, value } => {
            let f = value.to_c64();
            json!({
                "kind": "spanning",
                "degree": invariant.m,
                "pairings": invariant.perms,
                "multiplicity_indices": invariant.idx,
                "value": value.to_string(),
                "value_float": complex_json(f.re, f.im),
            })
        }
        AlgebraicWitness::ProjectorImage {
            degree,
            exponents,
            value,
        } => {
            let f = value.to_c64();
            json!({
                "kind": "projector_image",
                "degree": degree,
                "exponents": exponents,
                "value": value.to_string(),
                "value_float": complex_json(f.re, f.im),
            })
        }
    }
}

fn algebraic_json(outcome: &AlgebraicOutcome) -> Value {
    let (witness, exhaustive, certified) = match &outcome.verdict {
        nullcone_core::invariants::AlgebraicVerdict::NotInNullCone(w) => {
            (witness_json(w), Value::Null, Value::Null)
        }
        nullcone_core::invariants::AlgebraicVerdict::NoWitnessFound {
            exhaustive,
            certified_null_cone,
        } => (Value::Null, json!(exhaustive), json!(certified_null_cone)),
    };
    json!({
        "witness_found": outcome.witness_found(),
        "witness": witness,
        "degrees_examined": outcome.degrees_examined,
        "samples_evaluated": outcome.samples_evaluated,
        "samples_skipped": outcome.samples_skipped,
        "exhaustive": exhaustive,
        "certified_null_cone": certified,
    })
}

fn write_trace(path: &Path, trace: &[TraceRow]) -> Result<(), Error> {
    let mut out = String::from(TRACE_CSV_HEADER);
    out.push('\n');
    for row in trace {
        out.push_str(&row.csv_row());
        out.push('\n');
    }
    std::fs::write(path, out)
        .map_err(|e| Error::InvalidArgument(format!("cannot write {}: {e}", path.display())))
}

fn cmd_nullcone(args: NullconeArgs) -> Result<(Value, i32), Error> {
    let x = read_tensor(&args.file)?;
    let mut report = serde_json::Map::new();
    report.insert("command".into(), json!("nullcone"));
    report.insert("dims".into(), json!(x.dims()));
    report.insert("mode".into(), json!(args.mode.name()));

    let mut scaling_member: Option<bool> = None;
    if matches!(args.mode, Mode::Scaling | Mode::Both) {
        let config = ScaleConfig {
            eps: args.eps,
            max_iters: args.max_iters,
            precision: args.precision,
            capacity_exit: true,
        };
        let outcome = scale_with(&x, &config)?;
        if let Some(path) = &args.trace {
            write_trace(path, &outcome.trace)?;
        }
        report.insert("eps".into(), json!(args.eps));
        report.insert("scaling".into(), scaling_json(&outcome));
        scaling_member = Some(outcome.in_null_cone());
    }

    let mut algebraic: Option<AlgebraicOutcome> = None;
    if matches!(args.mode, Mode::Algebraic | Mode::Both) {
        let outcome = nullcone_algebraic(&x, args.degree_cap, args.samples, args.seed)?;
        report.insert("degree_cap".into(), json!(args.degree_cap));
        report.insert("samples".into(), json!(args.samples));
        report.insert("seed".into(), json!(args.seed));
        report.insert("algebraic".into(), algebraic_json(&outcome));
        algebraic = Some(outcome);
    }

    let (verdict, code) = match (scaling_member, &algebraic) {
        (Some(true), _) => ("in_null_cone", EXIT_MEMBER),
        (Some(false), _) => ("not_in_null_cone", EXIT_NOT_MEMBER),
        (None, Some(out)) if out.witness_found() => ("not_in_null_cone", EXIT_NOT_MEMBER),
        (None, Some(out)) => {
            if matches!(
                out.verdict,
                nullcone_core::invariants::AlgebraicVerdict::NoWitnessFound {
                    certified_null_cone: true,
                    ..
                }
            ) {
                ("in_null_cone", EXIT_MEMBER)
            } else {
                ("inconclusive", EXIT_INCONCLUSIVE)
            }
        }
        (None, None) => unreachable!("some mode always runs"),
    };
    if let (Some(member), Some(out)) = (scaling_member, &algebraic) {
        // A nonzero invariant exists exactly outside the null cone, so a
        // found witness must pair with a non-membership verdict. The
        // converse direction is only as strong as the search coverage and
        // is reported, not asserted.
        report.insert("agreement".into(), json!(out.witness_found() == !member));
    }
    report.insert("verdict".into(), json!(verdict));
    Ok((Value::Object(report), code))
}

fn cmd_scale(args: ScaleArgs) -> Result<(Value, i32), Error> {
    let x = read_tensor(&args.file)?;
    let config = ScaleConfig {
        eps: args.eps,
        max_iters: args.max_iters,
        precision: args.precision,
        capacity_exit: true,
    };
    let outcome = scale_with(&x, &config)?;
    if let Some(path) = &args.trace {
        write_trace(path, &outcome.trace)?;
    }
    let code = if outcome.in_null_cone() {
        EXIT_MEMBER
    } else {
        EXIT_NOT_MEMBER
    };
    let report = json!({
        "command": "scale",
        "dims": x.dims(),
        "eps": args.eps,
        "steps_traced": outcome.trace.len(),
        "trace_file": args.trace.as_ref().map(|p| p.display().to_string()),
        "result": scaling_json(&outcome),
    });
    Ok((report, code))
}

fn cmd_capacity(args: CapacityArgs) -> Result<(Value, i32), Error> {
    let x = read_tensor(&args.file)?;
    let estimate = capacity_estimate(&x, args.sweeps)?;
    let floor = capacity_lower_bound(x.dims());
    let code = if estimate.null_cone {
        EXIT_MEMBER
    } else {
        EXIT_NOT_MEMBER
    };
    let report = json!({
        "command": "capacity",
        "dims": x.dims(),
        "sweeps": args.sweeps,
        "value": estimate.value,
        "iterations": estimate.iterations,
        "history": estimate.history,
        "null_cone": estimate.null_cone,
        "integral_floor": floor.to_f64(),
    });
    Ok((report, code))
}

fn cmd_deficiency(args: DeficiencyArgs) -> Result<(Value, i32), Error> {
    let text = read_file(&args.file)?;
    let probe: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("input JSON: {e}")))?;
    let support = if probe.get("tuples").is_some() {
        Support::from_json_str(&text)?
    } else {
        Tensor::from_json_str(&text)?.support(args.threshold)
    };
    let decision = decide_deficiency(&support)?;
    let value = deficiency_value(&support)?;
    let (deficient, certificate, witness) = match &decision {
        DeficiencyDecision::Deficient(cert) => {
            let cert_json: Value = serde_json::from_str(&cert.to_json_string()?)
                .expect("certificate serialization is valid JSON");
            (true, cert_json, Value::Null)
        }
        DeficiencyDecision::NotDeficient(w) => {
            let weights: Vec<Value> = w
                .weights
                .iter()
                .map(|(tuple, weight)| {
                    let one_based: Vec<usize> = tuple.iter().map(|j| j + 1).collect();
                    json!({"tuple": one_based, "weight": weight})
                })
                .collect();
            (false, Value::Null, json!({ "weights": weights }))
        }
    };
    let verified = match &decision {
        DeficiencyDecision::Deficient(cert) => json!(cert.verify(&support)),
        DeficiencyDecision::NotDeficient(_) => Value::Null,
    };
    let code = if deficient { EXIT_MEMBER } else { EXIT_NOT_MEMBER };
    let report = json!({
        "command": "deficiency",
        "dims": support.dims,
        "tuple_count": support.tuples.len(),
        "deficient": deficient,
        "value": value,
        "certificate": certificate,
        "certificate_verified": verified,
        "uniform_marginal_witness": witness,
    });
    Ok((report, code))
}

fn cmd_invariants(args: InvariantsArgs) -> Result<(Value, i32), Error> {
    let x = read_tensor(&args.file)?;
    if let Some(dims) = &args.dims {
        let expected = parse_dims(dims)?;
        if expected != x.dims() {
            return Err(Error::InvalidArgument(format!(
                "--dims {:?} does not match the file's dims {:?}",
                expected,
                x.dims()
            )));
        }
    }
    let outcome = nullcone_algebraic(&x, args.degree_cap, args.samples, args.seed)?;
    let code = if outcome.witness_found() {
        EXIT_NOT_MEMBER
    } else if matches!(
        outcome.verdict,
        nullcone_core::invariants::AlgebraicVerdict::NoWitnessFound {
            certified_null_cone: true,
            ..
        }
    ) {
        EXIT_MEMBER
    } else {
        EXIT_INCONCLUSIVE
    };
    let report = json!({
        "command": "invariants",
        "dims": x.dims(),
        "degree_cap": args.degree_cap,
        "samples": args.samples,
        "seed": args.seed,
        "result": algebraic_json(&outcome),
    });
    Ok((report, code))
}

fn slice_report_json(report: &SliceRankReport) -> Value {
    json!({
        "upper": report.upper,
        "lower": report.lower,
        "exact": report.exact,
        "notes": report.notes,
    })
}

fn cross_check_json(report: &SliceRankNullConeReport) -> Value {
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| json!({"name": c.name, "holds": c.holds}))
        .collect();
    json!({
        "eps": report.eps,
        "in_null_cone": report.in_null_cone,
        "in_null_cone_power": report.in_null_cone_power,
        "power_bounds": slice_report_json(&report.power),
        "checks": checks,
        "consistent": report.consistent,
    })
}

fn cmd_slicerank(args: SlicerankArgs) -> Result<(Value, i32), Error> {
    let x = read_tensor(&args.file)?;
    let bounds = slice_rank_report(&x)?;
    let m = x.dims()[1];
    let d = x.order();
    let instability = if bounds.upper < m {
        Some(instability_from_slice_rank(m, d))
    } else {
        None
    };
    let cross = if args.cross_check {
        Some(nullcone_vs_slicerank_check(&x)?)
    } else {
        None
    };
    let code = match &cross {
        Some(report) if report.in_null_cone => EXIT_MEMBER,
        Some(_) => EXIT_NOT_MEMBER,
        None if bounds.upper < m => EXIT_MEMBER,
        None => EXIT_NOT_MEMBER,
    };
    let report = json!({
        "command": "slicerank",
        "dims": x.dims(),
        "bounds": slice_report_json(&bounds),
        "instability_lower_bound": instability,
        "cross_check": cross.as_ref().map(cross_check_json),
    });
    Ok((report, code))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precision_strings_parse() {
        assert_eq!(parse_precision("double").unwrap(), Precision::Double);
        assert_eq!(
            parse_precision("truncated:24").unwrap(),
            Precision::Truncated(24)
        );
        assert!(parse_precision("truncated:0").is_err());
        assert!(parse_precision("single").is_err());
    }

    #[test]
    fn dims_strings_parse() {
        assert_eq!(parse_dims("1,2,2").unwrap(), vec![1, 2, 2]);
        assert_eq!(parse_dims(" 1, 2 ,3 ").unwrap(), vec![1, 2, 3]);
        assert!(parse_dims("1,x").is_err());
    }
}
