use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use weylbound::covering::{count_superlevel_boxes, first_clean_len, stability_survey};
use weylbound::dimension::upper_bound_formula;
use weylbound::meanvalue::vinogradov_count_capped;
use weylbound::{
    asymptotic_constants, box_side_lengths, completed_moment, dim_upper_bound, domination_check, dyadic_schedule,
    mc_moment, moment_exponent_fit, s_of, stability_check, theoretical_box_bound, weyl_sum_direct, weyl_sum_fast,
    Completer, CompletionMode, Error, PhasePoint, WeightSequence,
};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::output::Sink;

/// What a command produced, in the form stored in a run record.
pub struct Execution {
    /// Arguments with every defaulted or generated value filled in.
    pub params: Value,
    pub seed: Option<u64>,
    pub outputs: Value,
    /// Rows skipped because they exceeded a resource cap.
    pub capped: usize,
}

impl Execution {
    fn new(params: &impl Serialize, outputs: Value) -> CliResult<Self> {
        Ok(Execution {
            params: serde_json::to_value(params)?,
            seed: None,
            outputs,
            capped: 0,
        })
    }

    fn seeded(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// Format used when `--format` is absent: JSON for single results, CSV for series.
pub fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Moment(a) if a.len.len() > 1 => Format::Csv,
        Command::Boxes(_) | Command::Table(_) => Format::Csv,
        Command::Stability(a) if a.point.is_none() && a.i_min.is_some() => Format::Csv,
        _ => Format::Json,
    }
}

fn resolve_seed(seed: &mut Option<u64>) -> u64 {
    *seed.get_or_insert_with(|| {
        let s = rand::random::<u64>();
        eprintln!("seed: {s}");
        s
    })
}

fn parse_point(text: &str, d: usize) -> CliResult<PhasePoint> {
    let x: PhasePoint = text.parse()?;
    if x.degree() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x.degree(),
        }
        .into());
    }
    Ok(x)
}

pub fn execute(cmd: &Command, sink: &mut Sink) -> CliResult<Execution> {
    match cmd {
        Command::Sum(a) => sum(a),
        Command::Completed(a) => completed(a),
        Command::Moment(a) => moment(a.clone(), sink),
        Command::Vinogradov(a) => vinogradov(a),
        Command::Boxes(a) => boxes(a, sink),
        Command::Stability(a) => stability(a.clone(), sink),
        Command::Dimbound(a) => dimbound(a),
        Command::Table(a) => table(a, sink),
        Command::Replay(_) => Err(CliError::Usage("replay cannot be nested".into())),
    }
}

/// Rebuilds a command from a run record's name and parameters.
pub fn from_record(command: &str, params: Value) -> CliResult<Command> {
    Ok(match command {
        "sum" => Command::Sum(serde_json::from_value(params)?),
        "completed" => Command::Completed(serde_json::from_value(params)?),
        "moment" => Command::Moment(serde_json::from_value(params)?),
        "vinogradov" => Command::Vinogradov(serde_json::from_value(params)?),
        "boxes" => Command::Boxes(serde_json::from_value(params)?),
        "stability" => Command::Stability(serde_json::from_value(params)?),
        "dimbound" => Command::Dimbound(serde_json::from_value(params)?),
        "table" => Command::Table(serde_json::from_value(params)?),
        other => return Err(CliError::Usage(format!("cannot replay command `{other}`"))),
    })
}

fn sum(a: &SumArgs) -> CliResult<Execution> {
    let x = parse_point(&a.point, a.degree)?;
    let (s, method) = if a.direct {
        (weyl_sum_direct(&x, a.len)?, "direct")
    } else {
        (weyl_sum_fast(&x, a.len)?, "fast")
    };
    let out = json!({
        "d": a.degree,
        "N": a.len,
        "x": x.coords(),
        "method": method,
        "re": s.re,
        "im": s.im,
        "modulus": s.norm(),
    });
    Execution::new(a, out)
}

fn completed(a: &CompletedArgs) -> CliResult<Execution> {
    let x = parse_point(&a.point, a.degree)?;
    let mode = CompletionMode::from(a.mode);
    let mut report = Completer::new(a.len, mode)?.report(&x);
    if !a.spectrum {
        report = report.without_spectrum();
    }
    let mut out = serde_json::to_value(&report)?;
    out["x"] = json!(x.coords());
    if a.domination {
        out["domination"] = serde_json::to_value(domination_check(&x, a.len, mode)?)?;
    }
    Execution::new(a, out)
}

fn moment(mut a: MomentArgs, sink: &mut Sink) -> CliResult<Execution> {
    let seed = resolve_seed(&mut a.seed);
    let sd = s_of(a.degree);
    let s = *a.s.get_or_insert(sd);
    if a.functional == MomentFunctional::Completed && s != sd {
        return Err(CliError::Usage(format!("the completed moment uses s = s(d) = {sd}")));
    }
    if a.functional == MomentFunctional::Completed && a.weights != Weights::Unit {
        return Err(CliError::Usage("weights apply only to the Weyl functional".into()));
    }
    let mut estimates = Vec::with_capacity(a.len.len());
    for &n in &a.len {
        let est = match a.functional {
            MomentFunctional::Weyl => {
                let weights = match a.weights {
                    Weights::Unit => None,
                    Weights::Random => Some(WeightSequence::random_unimodular(n, seed ^ WEIGHT_STREAM)?),
                };
                mc_moment(a.degree, n, s, weights.as_ref(), a.samples, seed)?
            }
            MomentFunctional::Completed => completed_moment(a.degree, n, a.samples, seed, a.mode.into())?,
        };
        sink.row(vec![
            ("N", json!(n)),
            ("mean", json!(est.mean)),
            ("stderr", json!(est.stderr)),
        ])?;
        estimates.push(est);
    }
    let out = if let [single] = estimates[..] {
        serde_json::to_value(single)?
    } else {
        let points: Vec<(f64, f64)> = estimates.iter().map(|e| (e.len as f64, e.mean)).collect();
        let fit = if points.len() >= 3 {
            Some(moment_exponent_fit(&points)?)
        } else {
            None
        };
        if let Some(f) = &fit {
            eprintln!("slope: {} (residual {})", f.slope, f.residual);
        }
        json!({
            "d": a.degree,
            "s": s,
            "N": a.len,
            "mean": estimates.iter().map(|e| e.mean).collect::<Vec<_>>(),
            "stderr": estimates.iter().map(|e| e.stderr).collect::<Vec<_>>(),
            "samples": a.samples,
            "seed": seed,
            "slope": fit.map(|f| f.slope),
            "intercept": fit.map(|f| f.intercept),
            "residual": fit.map(|f| f.residual),
        })
    };
    Ok(Execution::new(&a, out)?.seeded(seed))
}

/// Keeps random weights independent of the torus samples drawn from the same seed.
const WEIGHT_STREAM: u64 = 0x5745_4947_4854_5331;

fn vinogradov(a: &VinogradovArgs) -> CliResult<Execution> {
    let count = vinogradov_count_capped(a.degree, a.s, a.len, a.cap)?;
    Execution::new(a, serde_json::to_value(count)?)
}

fn boxes(a: &BoxesArgs, sink: &mut Sink) -> CliResult<Execution> {
    let mode = CompletionMode::from(a.mode);
    let schedule = dyadic_schedule(a.i_min, a.i_max)?;
    let mut capped = 0;
    let mut rows = Vec::new();
    let mut exponent = None;
    for (i, &n) in (a.i_min..).zip(&schedule) {
        let start = Instant::now();
        let bound = theoretical_box_bound(a.degree, n, a.alpha, a.eps)?;
        exponent = Some(bound.exponent);
        let spec = box_side_lengths(a.degree, n, a.alpha, a.eps)?;
        let (lower, upper, status) = match count_superlevel_boxes(a.degree, n, a.alpha, a.eps, mode, a.cap as u128) {
            Ok(g) => (json!(g.counted_lower), json!(g.counted_upper), "ok"),
            Err(Error::CapExceeded { size, cap, .. }) => {
                eprintln!("N = {n}: {size} boxes exceed the cap of {cap}");
                capped += 1;
                (Value::Null, Value::Null, "cap_exceeded")
            }
            Err(e) => return Err(e.into()),
        };
        let row = vec![
            ("i", json!(i)),
            ("N", json!(n)),
            ("U", json!(u64::try_from(spec.box_count()).unwrap_or(u64::MAX))),
            ("counted_lower", lower),
            ("counted_upper", upper),
            ("bound_exponent", json!(bound.count_exponent)),
            ("status", json!(status)),
        ];
        rows.push(Value::Object(
            row.iter().map(|(k, v)| (k.to_string(), v.clone())).collect(),
        ));
        let mut timed = row;
        timed.push(("elapsed_ms", json!(start.elapsed().as_secs_f64() * 1e3)));
        sink.row(timed)?;
    }
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter_map(|r| Some((r["N"].as_f64()?, r["counted_upper"].as_f64()?)))
        .filter(|p| p.1 > 0.0)
        .collect();
    let slope = if points.len() >= 3 {
        Some(moment_exponent_fit(&points)?.slope)
    } else {
        None
    };
    let out = json!({
        "d": a.degree,
        "alpha": a.alpha,
        "eps": a.eps,
        "mode": mode,
        "exponent": exponent,
        "slope_counted_upper": slope,
        "rows": rows,
    });
    let mut exec = Execution::new(a, out)?;
    exec.capped = capped;
    Ok(exec)
}

fn stability(mut a: StabilityArgs, sink: &mut Sink) -> CliResult<Execution> {
    let seed = resolve_seed(&mut a.seed);
    let mode = CompletionMode::from(a.mode);
    if let Some(point) = &a.point {
        let len = a
            .len
            .ok_or_else(|| CliError::Usage("a base point needs a single -N".into()))?;
        let x = parse_point(point, a.degree)?;
        let report = stability_check(&x, len, a.alpha, a.eps, a.probes, seed, mode)?;
        return Ok(Execution::new(&a, serde_json::to_value(report)?)?.seeded(seed));
    }
    let lens: Vec<usize> = match (a.len, a.i_min, a.i_max) {
        (Some(n), _, _) => vec![n],
        (None, Some(lo), Some(hi)) => dyadic_schedule(lo, hi)?.into_iter().map(|n| n as usize).collect(),
        _ => return Err(CliError::Usage("give -N or both --i-min and --i-max".into())),
    };
    let mut rows = Vec::new();
    for n in lens {
        let s = stability_survey(a.degree, n, a.alpha, a.eps, a.bases, a.probes, seed, mode)?;
        sink.row(vec![
            ("N", json!(s.len)),
            ("bases_drawn", json!(s.bases_drawn)),
            ("bases_qualified", json!(s.bases_qualified)),
            ("bases_with_violations", json!(s.bases_with_violations)),
            ("violations", json!(s.violations)),
            ("probes", json!(s.probes)),
        ])?;
        rows.push(s);
    }
    let out = json!({
        "d": a.degree,
        "alpha": a.alpha,
        "eps": a.eps,
        "mode": mode,
        "seed": seed,
        "first_clean_N": first_clean_len(&rows),
        "rows": rows,
    });
    Ok(Execution::new(&a, out)?.seeded(seed))
}

fn dimbound(a: &DimboundArgs) -> CliResult<Execution> {
    let report = dim_upper_bound(a.degree, a.alpha)?;
    let (u_formula, k_formula) = upper_bound_formula(a.degree, a.alpha)?;
    let mut out = serde_json::to_value(&report)?;
    out["k"] = json!(report.argmin_k);
    out["u_formula"] = json!(u_formula);
    out["k_formula"] = json!(k_formula);
    Execution::new(a, out)
}

fn table(a: &TableArgs, sink: &mut Sink) -> CliResult<Execution> {
    if a.d_min > a.d_max {
        return Err(CliError::Usage("d-min exceeds d-max".into()));
    }
    if a.alpha_steps == 0 || (a.alpha_steps == 1 && a.alpha_min != a.alpha_max) {
        return Err(CliError::Usage("alpha-steps must be at least 2 for a range".into()));
    }
    let step = if a.alpha_steps > 1 {
        (a.alpha_max - a.alpha_min) / (a.alpha_steps - 1) as f64
    } else {
        0.0
    };
    for d in a.d_min..=a.d_max {
        let c = asymptotic_constants(d)?;
        for i in 0..a.alpha_steps {
            let alpha = if i + 1 == a.alpha_steps {
                a.alpha_max
            } else {
                a.alpha_min + i as f64 * step
            };
            let r = dim_upper_bound(d, alpha)?;
            sink.row(vec![
                ("d", json!(d)),
                ("alpha", json!(alpha)),
                ("k_min", json!(r.argmin_k)),
                ("u", json!(r.u)),
                ("bound_k0", json!(r.bound_k0)),
                ("bound_kd1", json!(r.bound_kd1)),
                ("c1", json!(c.c1)),
                ("c2", json!(c.c2)),
            ])?;
        }
    }
    let out = Value::Array(sink.rows().to_vec());
    Execution::new(a, out)
}
