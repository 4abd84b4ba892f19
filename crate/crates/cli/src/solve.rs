use std::fmt::Write as _;

use oblit_core::polarcone::FormSystem;
use oblit_core::solver::{
    find_linear_subspace, find_point, system_over, verify_point_exact, verify_point_numeric, verify_subspace,
    verify_values, ExportPoints, SolveOutcome, VerifyReport,
};
use oblit_core::solvfield::radical::{bits_for_digits, format_complex};
use oblit_core::{FieldContext, FiniteContext, Fq, NumericContext, Radical, RadicalCertificate, Rational};
use serde_json::{json, Value};

use crate::commands::{read_system, render};
use crate::{Cli, CliError, Format, SolveArgs, SolveMode, VerifyArgs};

fn run_solver<C: FieldContext>(
    sys: &FormSystem<C::Elem>,
    plane: Option<usize>,
    ctx: &mut C,
) -> Result<SolveOutcome<C::Elem>, CliError> {
    match plane {
        Some(j) => find_linear_subspace(sys, j, ctx),
        None => find_point(sys, ctx),
    }
    .map_err(CliError::compute)
}

fn witness_json<K: ExportPoints>(
    seed: u64,
    out: &SolveOutcome<K>,
    sys: &FormSystem<K>,
    reports: &[VerifyReport],
    digits: u32,
    plane: bool,
) -> Result<Value, CliError> {
    let mut v = json!({
        "seed": seed,
        "outcome": out.to_json(digits),
        "verification": reports.iter().map(VerifyReport::to_json).collect::<Vec<_>>(),
    });
    if plane {
        v["plane_contained"] = json!(verify_subspace(sys, out).map_err(CliError::compute)?);
    }
    Ok(v)
}

fn solve_numeric(s: &FormSystem<Rational>, args: &SolveArgs, seed: u64, digits: u32) -> Result<Value, CliError> {
    let sys = system_over::<Radical>(s).map_err(CliError::compute)?;
    let mut ctx = NumericContext::new(digits, seed);
    let out = run_solver(&sys, args.plane, &mut ctx)?;
    let tol = args.tolerance_exp.unwrap_or(-(digits as i32) / 2);
    let reports = out
        .points
        .iter()
        .map(|p| verify_point_numeric(s, p, digits, tol))
        .collect::<Result<Vec<_>, _>>()
        .map_err(CliError::compute)?;
    witness_json(seed, &out, &sys, &reports, digits, args.plane.is_some())
}

fn solve_finite<const P: u64>(s: &FormSystem<Rational>, args: &SolveArgs, seed: u64) -> Result<Value, CliError> {
    let sys = system_over::<Fq<P>>(s).map_err(CliError::compute)?;
    let mut ctx = FiniteContext::<P>::new(seed).map_err(|e| CliError::usage("--p", e))?;
    let out = run_solver(&sys, args.plane, &mut ctx)?;
    let reports: Vec<VerifyReport> = out.points.iter().map(|p| verify_point_exact(&sys, p)).collect();
    witness_json(seed, &out, &sys, &reports, 0, args.plane.is_some())
}

macro_rules! dispatch_prime {
    ($p:expr, $f:ident, $($arg:expr),*) => {
        match $p {
            5 => $f::<5>($($arg),*),
            7 => $f::<7>($($arg),*),
            11 => $f::<11>($($arg),*),
            13 => $f::<13>($($arg),*),
            17 => $f::<17>($($arg),*),
            19 => $f::<19>($($arg),*),
            23 => $f::<23>($($arg),*),
            29 => $f::<29>($($arg),*),
            31 => $f::<31>($($arg),*),
            37 => $f::<37>($($arg),*),
            41 => $f::<41>($($arg),*),
            43 => $f::<43>($($arg),*),
            47 => $f::<47>($($arg),*),
            53 => $f::<53>($($arg),*),
            59 => $f::<59>($($arg),*),
            61 => $f::<61>($($arg),*),
            67 => $f::<67>($($arg),*),
            71 => $f::<71>($($arg),*),
            73 => $f::<73>($($arg),*),
            79 => $f::<79>($($arg),*),
            83 => $f::<83>($($arg),*),
            89 => $f::<89>($($arg),*),
            97 => $f::<97>($($arg),*),
            other => Err(CliError::usage("--p", format!("{other} is not a supported prime (5..=97)"))),
        }
    };
}

fn witness_passed(w: &Value) -> bool {
    let reports_ok = w["verification"]
        .as_array()
        .is_some_and(|rs| rs.iter().all(|r| r["passed"] == json!(true)));
    reports_ok && w.get("plane_contained").map_or(true, |c| c == &json!(true))
}

fn text_witness(out: &mut String, w: &Value) {
    let o = &w["outcome"];
    let _ = writeln!(out, "seed {} field {}", w["seed"], o["field"].as_str().unwrap_or(""));
    if o["outside_guaranteed_range"] == json!(true) {
        let _ = writeln!(out, "outside guaranteed range");
    }
    for step in o["strategy_log"].as_array().into_iter().flatten() {
        let t: Vec<String> = step["type"].as_array().into_iter().flatten().map(|v| v.to_string()).collect();
        let _ = writeln!(
            out,
            "{}{} P^{} ({}) {}",
            "  ".repeat(step["level"].as_u64().unwrap_or(0) as usize),
            step["action"].as_str().unwrap_or(""),
            step["ambient_dim"],
            t.join(","),
            step["detail"].as_str().unwrap_or("")
        );
    }
    for (i, p) in o["result"]["points"].as_array().into_iter().flatten().enumerate() {
        let coords: Vec<String> = p
            .as_array()
            .into_iter()
            .flatten()
            .map(|c| match c.get("approx") {
                Some(a) => a.as_str().unwrap_or("").to_string(),
                None => c.to_string(),
            })
            .collect();
        let _ = writeln!(out, "x{i} = ({})", coords.join(" : "));
    }
    if let Some(m) = o["result"].get("modulus").filter(|m| !m.is_null()) {
        let _ = writeln!(out, "field modulus (low to high) {m}");
    }
    if let Some(d) = o["result"].get("root_depth") {
        let _ = writeln!(out, "certificate depth {d} max root degree {}", o["result"]["max_root_degree"]);
    }
    for (i, r) in w["verification"].as_array().into_iter().flatten().enumerate() {
        let res: Vec<String> = r["residuals"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|x| x["residual"].as_str().unwrap_or("").to_string())
            .collect();
        let _ = writeln!(out, "x{i} residuals [{}] {}", res.join(", "), if r["passed"] == json!(true) { "ok" } else { "FAILED" });
    }
    if let Some(c) = w.get("plane_contained") {
        let _ = writeln!(out, "plane contained {c}");
    }
}

pub fn solve(args: &SolveArgs, cli: &Cli) -> Result<String, CliError> {
    let s = read_system(&args.system)?;
    if let Some(&d) = s.degrees().iter().find(|&&d| d > 4) {
        return Err(CliError::usage("--system", format!("forms of degree {d} are not supported")));
    }
    if args.witnesses == 0 {
        return Err(CliError::usage("--witnesses", "must be at least 1"));
    }
    let mut witnesses = Vec::new();
    for k in 0..args.witnesses {
        let seed = cli.seed.wrapping_add(k);
        let w = match args.mode {
            SolveMode::Numeric => solve_numeric(&s, args, seed, cli.precision)?,
            SolveMode::Finite => dispatch_prime!(args.p, solve_finite, &s, args, seed)?,
        };
        witnesses.push(w);
    }
    let passed = witnesses.iter().all(witness_passed);
    let text = match cli.format {
        Format::Json if witnesses.len() == 1 => render(&witnesses[0]),
        Format::Json => render(&json!({ "witnesses": witnesses })),
        _ => {
            let mut out = String::new();
            for w in &witnesses {
                text_witness(&mut out, w);
            }
            out
        }
    };
    if passed {
        Ok(text)
    } else {
        print!("{text}");
        Err(CliError::Compute("verification failed".into()))
    }
}

/// Certificate and point grouping from either a bare certificate or a
/// `solve` output.
fn load_certificate(v: &Value) -> Result<(RadicalCertificate, Vec<Vec<usize>>), CliError> {
    let bad = |e: oblit_core::CertError| CliError::usage("--cert", e);
    if let Some(result) = v.get("outcome").map(|o| &o["result"]) {
        let cert = RadicalCertificate::from_json(&result["certificate"]).map_err(bad)?;
        let mut idx = 0;
        let groups = result["points"]
            .as_array()
            .ok_or_else(|| CliError::usage("--cert", "missing points"))?
            .iter()
            .map(|p| {
                let n = p.as_array().map_or(0, Vec::len);
                let g: Vec<usize> = (idx..idx + n).collect();
                idx += n;
                g
            })
            .collect();
        return Ok((cert, groups));
    }
    let cert = RadicalCertificate::from_json(v).map_err(bad)?;
    let groups = vec![(0..cert.outputs.len()).collect()];
    Ok((cert, groups))
}

pub fn verify(args: &VerifyArgs, cli: &Cli) -> Result<String, CliError> {
    let text = std::fs::read_to_string(&args.cert)
        .map_err(|e| CliError::usage("--cert", format!("{}: {e}", args.cert.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::usage("--cert", e))?;
    let (cert, groups) = load_certificate(&v)?;
    cert.validate().map_err(|e| CliError::usage("--cert", e))?;
    let digits = cli.precision;
    let values = cert.eval(digits).map_err(CliError::compute)?;
    let system = args.system.as_deref().map(read_system).transpose()?;
    let tol = args.tolerance_exp.unwrap_or(-(digits as i32) / 2);
    let bits = bits_for_digits(digits);
    let mut reports = Vec::new();
    if let Some(s) = &system {
        for g in &groups {
            if g.len() != s.ambient_dim() + 1 {
                return Err(CliError::usage(
                    "--system",
                    format!("point has {} coordinates, system needs {}", g.len(), s.ambient_dim() + 1),
                ));
            }
            let pt: Vec<_> = g.iter().map(|&i| values[i].clone()).collect();
            reports.push(verify_values(s, &pt, bits, tol));
        }
    }
    let approx: Vec<Vec<String>> = groups
        .iter()
        .map(|g| g.iter().map(|&i| format_complex(&values[i], digits as usize)).collect())
        .collect();
    let passed = reports.iter().all(|r| r.passed);
    let out = match cli.format {
        Format::Json => render(&json!({
            "precision": digits,
            "root_depth": cert.root_depth(),
            "max_root_degree": cert.max_root_degree(),
            "values": approx,
            "verification": reports.iter().map(VerifyReport::to_json).collect::<Vec<_>>(),
            "passed": passed,
        })),
        _ => {
            let mut out = format!("certificate depth {} max root degree {}\n", cert.root_depth(), cert.max_root_degree());
            for (i, a) in approx.iter().enumerate() {
                let _ = writeln!(out, "x{i} = ({})", a.join(" : "));
            }
            for (i, r) in reports.iter().enumerate() {
                let res: Vec<&str> = r.residuals.iter().map(|x| x.residual.as_str()).collect();
                let _ = writeln!(out, "x{i} residuals [{}] {}", res.join(", "), if r.passed { "ok" } else { "FAILED" });
            }
            out
        }
    };
    if passed {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Compute("verification failed".into()))
    }
}
