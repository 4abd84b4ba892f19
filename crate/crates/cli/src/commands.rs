use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigUint;
use oblit_core::bounds::{
    compare_with_appendix, comparison_bounds, emit_table, fj_bound, fj_search, golden_table,
    p_polynomial, q_polynomial, BoundQuery, TableFormat, TableKind,
};
use oblit_core::polarcone::{iterated_polar, FormSystem};
use oblit_core::typecalc::{deg_concat, raise_deg, raise_type, raise_type_once_iterated, type_add, type_of};
use oblit_core::{parse_poly, DegreeVector, QPoly, Rational, TypeVector};
use serde_json::{json, Value};

use crate::{BoundArgs, BoundMode, Cli, CliError, Command, Format, PolarArgs, QpolyArgs, TableArgs, TypeOp};

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Type { op } => type_op(op, cli.format),
        Command::Bound(args) => bound(args, cli.format),
        Command::Table(args) => table(args, cli.format),
        Command::Qpoly(args) => qpoly(args, cli.format),
        Command::Compare { degree, m } => compare(*degree, *m, cli.format),
        Command::Polar(args) => polar(args, cli.format),
        Command::Solve(args) => crate::solve::solve(args, cli),
        Command::Verify(args) => crate::solve::verify(args, cli),
        Command::Selftest => selftest(cli.format),
    }
}

pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn parse_arg<T: FromStr>(flag: &str, s: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    s.parse::<T>().map_err(|e| CliError::usage(flag, e))
}

fn type_op(op: &TypeOp, format: Format) -> Result<String, CliError> {
    let (label, value) = match op {
        TypeOp::Add { a, b } => {
            let r = type_add(&parse_arg::<TypeVector>("A", a)?, &parse_arg("B", b)?);
            ("type", r.to_string())
        }
        TypeOp::Concat { a, b } => {
            let r = deg_concat(&parse_arg::<DegreeVector>("A", a)?, &parse_arg("B", b)?);
            ("degrees", r.to_string())
        }
        TypeOp::Of { degrees } => ("type", type_of(&parse_arg("DEGREES", degrees)?).to_string()),
        TypeOp::Raise { m, j } => ("type", raise_type(&parse_arg("M", m)?, *j).to_string()),
        TypeOp::RaiseDeg { d, j } => ("degrees", raise_deg(&parse_arg("D", d)?, *j).to_string()),
    };
    Ok(match format {
        Format::Json => render(&json!({ label: value })),
        _ => format!("{value}\n"),
    })
}

fn bound(args: &BoundArgs, format: Format) -> Result<String, CliError> {
    let q = BoundQuery::new(args.j, args.m2, args.m3, args.m4);
    let r = match args.mode {
        BoundMode::Closed => fj_bound(q),
        BoundMode::Search => fj_search(q),
    }
    .map_err(CliError::compute)?;
    Ok(match format {
        Format::Json => render(&r.to_json(args.trace)),
        _ => {
            let mut out = format!("{}\n", r.value);
            if args.trace {
                for s in &r.trace {
                    let _ = writeln!(out, "{} {} +{}", s.rule.name(), s.query, s.added);
                }
            }
            out
        }
    })
}

fn table(args: &TableArgs, format: Format) -> Result<String, CliError> {
    let kind: TableKind = parse_arg("--kind", &args.kind)?;
    let fmt = match format {
        Format::Csv => TableFormat::Csv,
        Format::Json => TableFormat::Json,
        Format::Markdown | Format::Text => TableFormat::Markdown,
    };
    emit_table(kind, args.j_max, args.m_max, fmt).map_err(CliError::compute)
}

fn qpoly(args: &QpolyArgs, format: Format) -> Result<String, CliError> {
    let poly = if args.p { p_polynomial() } else { q_polynomial() };
    if args.check {
        let diffs = compare_with_appendix();
        let items: Vec<Value> = diffs
            .iter()
            .map(|d| json!({"monomial": d.monomial, "computed": d.computed.to_string(), "transcribed": d.transcribed.to_string()}))
            .collect();
        return Ok(match format {
            Format::Json => render(&json!({"terms": q_polynomial().num_terms(), "mismatches": items})),
            _ if diffs.is_empty() => format!("match: {} terms agree\n", q_polynomial().num_terms()),
            _ => {
                let mut out = String::new();
                for d in &diffs {
                    let _ = writeln!(out, "{}: computed {} transcribed {}", d.monomial, d.computed, d.transcribed);
                }
                out
            }
        });
    }
    if let Some(mono) = &args.coeff {
        let m = parse_poly(mono, poly.vars()).map_err(|e| CliError::usage("--coeff", e))?;
        let mut terms = m.terms();
        let (exps, c) = match (terms.next(), terms.next()) {
            (Some(t), None) => t,
            _ => return Err(CliError::usage("--coeff", "expected a single monomial")),
        };
        let coeff = poly.coeff(exps.exponents()) / c.clone();
        return Ok(match format {
            Format::Json => render(&json!({"monomial": mono, "coeff": coeff.to_string()})),
            _ => format!("{coeff}\n"),
        });
    }
    if let Some(at) = &args.at {
        let vals: Vec<Rational> = at
            .split(',')
            .map(|s| parse_arg::<Rational>("--at", s.trim()))
            .collect::<Result<_, _>>()?;
        if vals.len() != poly.nvars() {
            return Err(CliError::usage("--at", format!("expected {} values", poly.nvars())));
        }
        let v = poly.eval(&vals);
        return Ok(match format {
            Format::Json => render(&json!({"at": at, "value": v.to_string()})),
            _ => format!("{v}\n"),
        });
    }
    Ok(match format {
        Format::Json => render(&serde_json::to_value(poly.to_json()).expect("serializable")),
        _ => format!("{poly}\n"),
    })
}

fn compare(degree: u32, m: u64, format: Format) -> Result<String, CliError> {
    let c = comparison_bounds(degree, m).map_err(|e| CliError::usage("--degree/--m", e))?;
    Ok(match format {
        Format::Json => render(&c.to_json()),
        Format::Csv => format!("degree,m,wooley,corollary,ours\n{},{},{},{},{}\n", c.degree, c.m, c.wooley, c.corollary, c.ours),
        _ => format!("wooley {}\ncorollary {}\nours {}\n", c.wooley, c.corollary, c.ours),
    })
}

pub fn read_system(path: &std::path::Path) -> Result<FormSystem<Rational>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage("--system", format!("{}: {e}", path.display())))?;
    FormSystem::from_json_str(&text).map_err(|e| CliError::usage("--system", e))
}

pub fn parse_points(text: &str, n: usize) -> Result<Vec<Vec<Rational>>, CliError> {
    text.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let v: Vec<Rational> = p
                .trim()
                .trim_start_matches('(')
                .trim_end_matches(')')
                .split(',')
                .map(|c| parse_arg::<Rational>("--points", c.trim()))
                .collect::<Result<_, _>>()?;
            if v.len() != n {
                return Err(CliError::usage("--points", format!("expected {n} coordinates, found {}", v.len())));
            }
            Ok(v)
        })
        .collect()
}

fn polar(args: &PolarArgs, format: Format) -> Result<String, CliError> {
    let s = read_system(&args.system)?;
    let pts = parse_points(&args.points, s.ambient_dim() + 1)?;
    let j = args.iterate.unwrap_or(pts.len());
    if j > pts.len() {
        return Err(CliError::usage("--iterate", format!("only {} points given", pts.len())));
    }
    let cone = iterated_polar(&s, &pts[..j]).map_err(CliError::compute)?;
    Ok(match format {
        Format::Json => render(&cone.to_json_value()),
        _ => {
            let mut out = format!("degrees {}\ntype {}\n", cone.degree_vector(), cone.type_vector());
            for (f, d) in cone.forms().iter().zip(cone.degrees()) {
                let _ = writeln!(out, "[{d}] {f}");
            }
            out
        }
    })
}

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn selftest(format: Format) -> Result<String, CliError> {
    let mut checks = Vec::new();

    let mut cells = 0;
    let mut bad = Vec::new();
    for kind in [TableKind::Quadric, TableKind::Cubic, TableKind::Quartic] {
        for (mi, row) in golden_table(kind).iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                let q = match kind {
                    TableKind::Quadric => BoundQuery::new(j as u64, mi as u64 + 1, 0, 0),
                    TableKind::Cubic => BoundQuery::new(j as u64, 0, mi as u64 + 1, 0),
                    TableKind::Quartic => BoundQuery::new(j as u64, 0, 0, mi as u64 + 1),
                };
                cells += 1;
                match fj_bound(q) {
                    Ok(r) if r.value == BigUint::from(want) => {}
                    other => bad.push(format!("{q}: {:?}", other.map(|r| r.value.to_string()))),
                }
            }
        }
    }
    checks.push(Check {
        name: "tables",
        passed: bad.is_empty(),
        detail: if bad.is_empty() { format!("{cells} cells match") } else { bad.join("; ") },
    });

    let diffs = compare_with_appendix();
    checks.push(Check {
        name: "appendix_polynomial",
        passed: diffs.is_empty(),
        detail: format!("{} mismatching monomials", diffs.len()),
    });

    let q = q_polynomial();
    let spots = [("m4^8", "1/128"), ("j*m4^7", "1/16"), ("m3^4", "1/8"), ("m2^2", "1/2"), ("1", "1/4")];
    let spot_bad: Vec<String> = spots
        .iter()
        .filter_map(|(m, want)| {
            let mono: QPoly = parse_poly(m, q.vars()).ok()?;
            let (e, _) = mono.terms().next()?;
            let got = q.coeff(e.exponents()).to_string();
            (got != *want).then(|| format!("{m}: {got}"))
        })
        .collect();
    checks.push(Check {
        name: "spot_coefficients",
        passed: spot_bad.is_empty(),
        detail: if spot_bad.is_empty() { "5 coefficients match".into() } else { spot_bad.join("; ") },
    });

    let mut dominated = true;
    'grid: for j in 0..=8u64 {
        for m2 in 0..=8u64 {
            for m3 in 0..=8u64 {
                for m4 in 0..=8u64 {
                    let Ok(r) = fj_bound(BoundQuery::new(j, m2, m3, m4)) else {
                        dominated = false;
                        break 'grid;
                    };
                    let at: Vec<Rational> = [j, m2, m3, m4].iter().map(|&v| Rational::from_integer(v.into())).collect();
                    if q.eval(&at) < Rational::from_integer(r.value.into()) {
                        dominated = false;
                        break 'grid;
                    }
                }
            }
        }
    }
    checks.push(Check {
        name: "polynomial_dominates_bound",
        passed: dominated,
        detail: "grid j, m2, m3, m4 <= 8".into(),
    });

    let mut raise_ok = true;
    for a in 0..4u64 {
        for b in 0..4u64 {
            for c in 0..4u64 {
                let m = TypeVector::new([a, b, c, a + b]);
                for j in 0..6 {
                    raise_ok &= raise_type(&m, j) == raise_type_once_iterated(&m, j);
                }
            }
        }
    }
    checks.push(Check {
        name: "raise_closed_form",
        passed: raise_ok,
        detail: "closed form against iteration".into(),
    });

    let all = checks.iter().all(|c| c.passed);
    let out = match format {
        Format::Json => render(&json!({
            "passed": all,
            "checks": checks.iter().map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail})).collect::<Vec<_>>(),
        })),
        _ => {
            let mut out = String::new();
            for c in &checks {
                let _ = writeln!(out, "{} {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            out
        }
    };
    if all {
        Ok(out)
    } else {
        print!("{out}");
        Err(CliError::Compute("selftest failed".into()))
    }
}
