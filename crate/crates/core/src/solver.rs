//! Constructive obliteration: points and linear subspaces on systems of forms
//! of degree at most four, with every coordinate built from roots of
//! univariate polynomials of degree at most four.

use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{fj_bound, BoundQuery};
use crate::error::{CertError, ConeError, SolveError};
use crate::linalg::{mat_vec, rank};
use crate::polarcone::{
    eliminate_linear_forms, plane_in_variety_check, polar_system, restrict_to_complement, FormSystem, SpanningTuple,
};
use crate::polyring::{MultiPoly, UniPoly};
use crate::scalar::{Field, Rational};
use crate::solvfield::bigfloat::BigFloat;
use crate::solvfield::complex::{cabs_max, creal, CBig};
use crate::solvfield::radical::format_complex;
use crate::solvfield::{FieldContext, Fq, Radical, RadicalCertificate};

/// Per-step retry budget.
pub const RETRY_BUDGET: u32 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    /// Linear forms removed by passing to their common kernel.
    EliminateLinear,
    /// No forms left; any point will do.
    EmptySystem,
    /// One form cut by a random line.
    BaseLine,
    /// The highest-degree form is cut by a line found on the others.
    Obliterate,
    /// Two quadrics are cut by a plane found on the others.
    QuadricPair,
    /// The pencil of lines through a conic point, giving a quartic.
    ConicPencil,
    /// First polar cone at the newest point of a growing tuple.
    PolarCone,
    /// A fresh random attempt after a degenerate choice.
    Retry,
}

impl Action {
    pub fn name(self) -> &'static str {
        match self {
            Action::EliminateLinear => "eliminate_linear",
            Action::EmptySystem => "empty_system",
            Action::BaseLine => "base_line",
            Action::Obliterate => "obliterate",
            Action::QuadricPair => "quadric_pair",
            Action::ConicPencil => "conic_pencil",
            Action::PolarCone => "polar_cone",
            Action::Retry => "retry",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StrategyStep {
    /// Recursion depth.
    pub level: usize,
    pub action: Action,
    pub ambient_dim: usize,
    /// Number of forms of degree 1, 2, 3, 4.
    #[serde(rename = "type")]
    pub type_counts: [u64; 4],
    pub detail: String,
}

impl fmt::Display for StrategyStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.type_counts;
        write!(
            f,
            "{}{} P^{} type ({},{},{},{}) {}",
            "  ".repeat(self.level),
            self.action.name(),
            self.ambient_dim,
            t[0],
            t[1],
            t[2],
            t[3],
            self.detail
        )
    }
}

/// Points found by the solver together with how they were found.
#[derive(Clone, Debug)]
pub struct SolveOutcome<K> {
    /// One point, or the spanning tuple of a linear subspace.
    pub points: Vec<Vec<K>>,
    pub log: Vec<StrategyStep>,
    pub retries: u32,
    /// The ambient dimension is below the proven threshold for this system.
    pub outside_guaranteed_range: bool,
    pub field: String,
}

impl<K: Field> SolveOutcome<K> {
    pub fn point(&self) -> &[K] {
        &self.points[0]
    }

    pub fn tuple(&self) -> Result<SpanningTuple<K>, ConeError> {
        SpanningTuple::new(self.points.clone())
    }

    /// Type counts of the successive obliterated systems, cones and base
    /// forms, in the order visited.
    pub fn type_sequence(&self) -> Vec<[u64; 4]> {
        self.log
            .iter()
            .filter(|s| matches!(s.action, Action::Obliterate | Action::PolarCone | Action::BaseLine | Action::QuadricPair))
            .map(|s| s.type_counts)
            .collect()
    }
}

fn type_counts<K: Field>(s: &FormSystem<K>) -> [u64; 4] {
    let mut t = [0u64; 4];
    for &d in s.degrees() {
        if (1..=4).contains(&d) {
            t[d as usize - 1] += 1;
        }
    }
    t
}

fn curve_restriction<K: Field>(f: &MultiPoly<K>, coords: &[UniPoly<K>]) -> UniPoly<K> {
    let mut acc = UniPoly::zero();
    for (m, c) in f.terms() {
        let mut term = UniPoly::constant(c.clone());
        for (i, &e) in m.exponents().iter().enumerate() {
            for _ in 0..e {
                term = term.mul(&coords[i]);
            }
        }
        acc = acc.add(&term);
    }
    acc
}

fn line_coords<K: Field>(a: &[K], b: &[K]) -> Vec<UniPoly<K>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| UniPoly::new(vec![x.clone(), y.clone()]))
        .collect()
}

fn axpy<K: Field>(a: &[K], t: &K, b: &[K]) -> Vec<K> {
    a.iter().zip(b).map(|(x, y)| x.clone() + t.clone() * y.clone()).collect()
}

fn is_zero_vec<K: Field>(v: &[K]) -> bool {
    v.iter().all(|c| c.is_zero())
}

struct Run<'c, C: FieldContext> {
    ctx: &'c mut C,
    log: Vec<StrategyStep>,
    retries: u32,
    level: usize,
}

type Pt<C> = Vec<<C as FieldContext>::Elem>;

impl<C: FieldContext> Run<'_, C> {
    fn note(&mut self, action: Action, s: &FormSystem<C::Elem>, detail: impl Into<String>) {
        self.log.push(StrategyStep {
            level: self.level,
            action,
            ambient_dim: s.ambient_dim(),
            type_counts: type_counts(s),
            detail: detail.into(),
        });
    }

    fn random_point(&mut self, n: usize) -> Pt<C> {
        loop {
            let v: Pt<C> = (0..n).map(|_| self.ctx.random_element()).collect();
            if !is_zero_vec(&v) {
                return v;
            }
        }
    }

    fn random_independent(&mut self, n: usize, k: usize) -> Vec<Pt<C>> {
        loop {
            let pts: Vec<Pt<C>> = (0..k).map(|_| self.random_point(n)).collect();
            if rank(&pts) == k {
                return pts;
            }
        }
    }

    fn retrying<T>(
        &mut self,
        step: &str,
        s: &FormSystem<C::Elem>,
        mut attempt: impl FnMut(&mut Self) -> Result<T, SolveError>,
    ) -> Result<T, SolveError> {
        let mut last = None;
        for round in 0..RETRY_BUDGET {
            if round > 0 {
                self.retries += 1;
                let why = last.as_ref().map(|e: &SolveError| e.to_string()).unwrap_or_default();
                self.note(Action::Retry, s, format!("{step} attempt {}: {why}", round + 1));
            }
            let mark = self.log.len();
            let level = self.level;
            match attempt(self) {
                Ok(v) => return Ok(v),
                Err(e @ (SolveError::RetriesExhausted { .. } | SolveError::DegreeTooHigh(_))) => return Err(e),
                Err(e) => {
                    self.level = level;
                    self.log.truncate(mark);
                    last = Some(e);
                }
            }
        }
        Err(SolveError::RetriesExhausted {
            step: step.to_string(),
            last: last.map(|e| e.to_string()).unwrap_or_default(),
        })
    }

    /// A point on `s`, as coordinates in its ambient space.
    fn point(&mut self, s: &FormSystem<C::Elem>) -> Result<Pt<C>, SolveError> {
        if let Some(&d) = s.degrees().iter().find(|&&d| d > 4) {
            return Err(SolveError::DegreeTooHigh(d));
        }
        let has_linear = s.nonzero().any(|(_, d)| d == 1);
        let (sys, embedding) = if has_linear {
            let chart = eliminate_linear_forms(s).map_err(|e| match e {
                ConeError::DegenerateChart => SolveError::NoPoints,
                other => other.into(),
            })?;
            self.note(
                Action::EliminateLinear,
                s,
                format!("to P^{}", chart.system.ambient_dim()),
            );
            (chart.system, Some(chart.embedding))
        } else {
            (s.clone(), None)
        };
        let sys = sys.select(|_, f, _| !f.is_zero());
        let w = self.point_nonlinear(&sys)?;
        Ok(match embedding {
            Some(m) => mat_vec(&m, &w),
            None => w,
        })
    }

    fn point_nonlinear(&mut self, s: &FormSystem<C::Elem>) -> Result<Pt<C>, SolveError> {
        let n = s.ambient_dim() + 1;
        if s.is_empty() {
            self.note(Action::EmptySystem, s, "");
            return Ok(self.random_point(n));
        }
        if n == 1 {
            // every nonzero form c*z0^d misses the only point
            return Err(SolveError::NoPoints);
        }
        if s.len() == 1 {
            return self.base_line(s);
        }
        let top = s.max_degree();
        if top == 2 {
            return self.quadric_pair(s);
        }
        let yi = s.degrees().iter().position(|&d| d == top).expect("max degree present");
        self.note(Action::Obliterate, s, format!("form {yi} of degree {top}"));
        let y = s.forms()[yi].clone();
        let rest = s.select(|i, _, _| i != yi);
        self.level += 1;
        let line = self.retrying("line on remaining forms", &rest, |run| run.subspace(&rest, 1))?;
        self.level -= 1;
        self.cut_line(&y, &line[0], &line[1])
    }

    /// A point of `{f = 0}` on the line through `a` and `b`.
    fn cut_line(&mut self, f: &MultiPoly<C::Elem>, a: &[C::Elem], b: &[C::Elem]) -> Result<Pt<C>, SolveError> {
        let g = curve_restriction(f, &line_coords(a, b));
        let d = f.total_degree().unwrap_or(0) as usize;
        match g.degree() {
            None => Ok(a.to_vec()),
            Some(k) if k < d => Ok(b.to_vec()),
            Some(_) => {
                let t = self.ctx.pick_root(&g)?;
                let x = axpy(a, &t, b);
                if is_zero_vec(&x) {
                    return Err(SolveError::Degenerate("line cut at the zero vector".into()));
                }
                Ok(x)
            }
        }
    }

    fn base_line(&mut self, s: &FormSystem<C::Elem>) -> Result<Pt<C>, SolveError> {
        let f = s.forms()[0].clone();
        self.note(Action::BaseLine, s, format!("degree {}", s.degrees()[0]));
        let n = s.ambient_dim() + 1;
        self.retrying("random line", s, |run| {
            let ab = run.random_independent(n, 2);
            run.cut_line(&f, &ab[0], &ab[1])
        })
    }

    fn quadric_pair(&mut self, s: &FormSystem<C::Elem>) -> Result<Pt<C>, SolveError> {
        self.note(Action::QuadricPair, s, "forms 0 and 1");
        let q1 = s.forms()[0].clone();
        let q2 = s.forms()[1].clone();
        let rest = s.select(|i, _, _| i >= 2);
        if s.ambient_dim() < 2 {
            return Err(SolveError::Degenerate("two quadrics need a plane".into()));
        }
        self.level += 1;
        let plane = self.retrying("plane on remaining forms", &rest, |run| run.subspace(&rest, 2))?;
        let param = crate::linalg::transpose(&plane);
        let on_plane = FormSystem::with_degrees(s.ambient_dim(), vec![q1, q2], vec![2, 2])?.pull_back(&param)?;
        let w = self.retrying("conic pair on the plane", &on_plane, |run| run.conic_pair(&on_plane))?;
        self.level -= 1;
        Ok(mat_vec(&param, &w))
    }

    /// A common point of two conics in a projective plane.
    fn conic_pair(&mut self, s: &FormSystem<C::Elem>) -> Result<Pt<C>, SolveError> {
        let c1 = s.forms()[0].clone();
        let c2 = s.forms()[1].clone();
        if c1.is_zero() || c2.is_zero() {
            let live = s.select(|_, f, _| !f.is_zero());
            return self.point_nonlinear(&live);
        }
        let single = s.select(|i, _, _| i == 0);
        self.level += 1;
        let p = self.base_line(&single)?;
        self.level -= 1;
        self.note(Action::ConicPencil, s, "");
        let uv = self.random_independent(3, 2);
        let q = line_coords(&uv[0], &uv[1]);
        let c1q = curve_restriction(&c1, &q);
        let polar = c1.directional_derivative(&p);
        let bq = curve_restriction(&polar, &q);
        // second intersection of the line through p and q(t) with the conic
        let x: Vec<UniPoly<C::Elem>> = (0..3)
            .map(|i| c1q.scale(&p[i]).sub(&bq.mul(&q[i])))
            .collect();
        let g = curve_restriction(&c2, &x);
        let top = x.iter().filter_map(UniPoly::degree).max();
        let at = |t: &C::Elem| -> Pt<C> { x.iter().map(|xi| xi.eval(t)).collect() };
        let pt = match (g.degree(), top) {
            (_, None) => return Err(SolveError::Degenerate("conic pencil collapsed".into())),
            (None, _) => at(&C::Elem::zero()),
            (Some(k), Some(dx)) if k < 2 * dx => {
                let inf: Pt<C> = x.iter().map(|xi| xi.coeff(dx)).collect();
                inf
            }
            (Some(_), _) => {
                let t = self.ctx.pick_root(&g)?;
                at(&t)
            }
        };
        if is_zero_vec(&pt) {
            return Err(SolveError::Degenerate("conic pencil met the zero vector".into()));
        }
        Ok(pt)
    }

    /// Points spanning a `j`-plane on `s`.
    fn subspace(&mut self, s: &FormSystem<C::Elem>, j: usize) -> Result<Vec<Pt<C>>, SolveError> {
        let x0 = self.point(s)?;
        self.extend(s, x0, j)
    }

    fn extend(&mut self, s: &FormSystem<C::Elem>, x0: Pt<C>, j: usize) -> Result<Vec<Pt<C>>, SolveError> {
        let mut pts = vec![x0];
        let mut cone = s.clone();
        for _ in 0..j {
            cone = polar_system(&cone, pts.last().expect("nonempty"))?;
            self.note(Action::PolarCone, &cone, format!("at point {}", pts.len() - 1));
            let tuple = SpanningTuple::new(pts.clone())?;
            let chart = restrict_to_complement(&cone, &tuple).map_err(|e| match e {
                ConeError::DegenerateChart => SolveError::NoPoints,
                other => other.into(),
            })?;
            let sys = chart.system.clone();
            self.level += 1;
            let w = self.retrying("point in the cone chart", &sys, |run| run.point(&sys))?;
            self.level -= 1;
            pts.push(chart.to_ambient(&w));
        }
        Ok(pts)
    }
}

fn range_query<K: Field>(s: &FormSystem<K>, j: usize) -> BoundQuery {
    let t = type_counts(s);
    BoundQuery::new(j as u64, t[1], t[2], t[3])
}

fn outside_range<K: Field>(s: &FormSystem<K>, j: usize) -> bool {
    let t = type_counts(s);
    if t[1..].iter().all(|&m| m == 0) {
        return s.ambient_dim() < j + t[0] as usize;
    }
    match fj_bound(range_query(s, j)) {
        Ok(r) => BigUint::from(s.ambient_dim()) < r.value + BigUint::from(t[0]),
        Err(_) => true,
    }
}

fn finish<C: FieldContext>(
    run: Run<'_, C>,
    points: Vec<Pt<C>>,
    s: &FormSystem<C::Elem>,
    j: usize,
) -> SolveOutcome<C::Elem> {
    SolveOutcome {
        points,
        log: run.log,
        retries: run.retries,
        outside_guaranteed_range: outside_range(s, j),
        field: run.ctx.describe(),
    }
}

/// A point on `s` over the context's field.
pub fn find_point<C: FieldContext>(s: &FormSystem<C::Elem>, ctx: &mut C) -> Result<SolveOutcome<C::Elem>, SolveError> {
    let mut run = Run {
        ctx,
        log: Vec::new(),
        retries: 0,
        level: 0,
    };
    let x = run.retrying("point", s, |r| match r.point(s) {
        Err(SolveError::NoPoints) if r.level == 0 && r.log.len() <= 1 => Err(SolveError::NoPoints),
        other => other,
    });
    let x = match x {
        Err(SolveError::RetriesExhausted { last, .. }) if last == SolveError::NoPoints.to_string() => {
            return Err(SolveError::NoPoints)
        }
        other => other?,
    };
    Ok(finish(run, vec![x], s, 0))
}

/// Points spanning a `j`-plane contained in the zero set of `s`.
pub fn find_linear_subspace<C: FieldContext>(
    s: &FormSystem<C::Elem>,
    j: usize,
    ctx: &mut C,
) -> Result<SolveOutcome<C::Elem>, SolveError> {
    let mut run = Run {
        ctx,
        log: Vec::new(),
        retries: 0,
        level: 0,
    };
    let pts = run.retrying("subspace", s, |r| r.subspace(s, j))?;
    Ok(finish(run, pts, s, j))
}

/// Extends a given point of `s` to a `j`-plane through it.
pub fn extend_to_subspace<C: FieldContext>(
    s: &FormSystem<C::Elem>,
    x0: &[C::Elem],
    j: usize,
    ctx: &mut C,
) -> Result<SolveOutcome<C::Elem>, SolveError> {
    let mut run = Run {
        ctx,
        log: Vec::new(),
        retries: 0,
        level: 0,
    };
    let pts = run.retrying("extension", s, |r| r.extend(s, x0.to_vec(), j))?;
    Ok(finish(run, pts, s, j))
}

/// Removes linear forms by substitution; `None` when they leave no points.
pub fn eliminate_linear<K: Field>(s: &FormSystem<K>) -> Option<FormSystem<K>> {
    eliminate_linear_forms(s).ok().map(|c| c.system)
}

/// The system with coefficients mapped into another field.
pub fn system_over<K: Field>(s: &FormSystem<Rational>) -> Result<FormSystem<K>, SolveError> {
    for f in s.forms() {
        for (_, c) in f.terms() {
            if K::try_from_rational(c).is_none() {
                return Err(SolveError::Degenerate(format!(
                    "coefficient {c} has no image in characteristic {}",
                    K::characteristic()
                )));
            }
        }
    }
    Ok(s.map(K::from_rational))
}

/// Whether the tuple spans a plane inside the zero set, exactly.
pub fn verify_subspace<K: Field>(s: &FormSystem<K>, outcome: &SolveOutcome<K>) -> Result<bool, ConeError> {
    plane_in_variety_check(s, &outcome.tuple()?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FormResidual {
    pub form: usize,
    pub degree: u32,
    /// `|f(x)| / (|f|_1 |x|_max^deg)` in numeric mode, `0` or `1` in exact mode.
    pub residual: String,
    /// Base-10 logarithm of the residual, `None` when it is exactly zero.
    pub log10: Option<f64>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub tolerance: String,
    pub residuals: Vec<FormResidual>,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// Exact check: every form vanishes at `x`.
pub fn verify_point_exact<K: Field + fmt::Display>(s: &FormSystem<K>, x: &[K]) -> VerifyReport {
    let residuals: Vec<FormResidual> = s
        .forms()
        .iter()
        .zip(s.degrees())
        .enumerate()
        .map(|(i, (f, &d))| {
            let v = f.eval(x);
            FormResidual {
                form: i,
                degree: d,
                residual: v.to_string(),
                log10: None,
                passed: v.is_zero(),
            }
        })
        .collect();
    VerifyReport {
        passed: residuals.iter().all(|r| r.passed) && !is_zero_vec(x),
        tolerance: "0".into(),
        residuals,
    }
}

fn log10_of(x: &BigFloat) -> Option<f64> {
    let l = x.log2_floor()?;
    let shifted = x.mul_pow2(-l).to_f64();
    Some((l as f64 + shifted.log2()) * std::f64::consts::LOG10_2)
}

/// Relative residuals of rational forms at complex coordinates, evaluated at
/// `bits` of working precision; passes when each is at most `10^tol_exp10`.
pub fn verify_values(s: &FormSystem<Rational>, x: &[CBig], bits: u32, tol_exp10: i32) -> VerifyReport {
    let xnorm = x
        .iter()
        .map(cabs_max)
        .fold(BigFloat::zero(), |m, v| if v > m { v } else { m });
    let residuals: Vec<FormResidual> = s
        .forms()
        .iter()
        .zip(s.degrees())
        .enumerate()
        .map(|(i, (f, &d))| {
            let mut val = CBig::zero();
            let mut norm = BigFloat::zero();
            for (m, c) in f.terms() {
                let cf = BigFloat::from_rational(c, bits);
                norm = norm + cf.abs();
                let mut term = creal(cf);
                for (k, &e) in m.exponents().iter().enumerate() {
                    for _ in 0..e {
                        term = term * x[k].clone();
                    }
                }
                val = val + term;
            }
            let mut denom = norm;
            for _ in 0..d {
                denom = denom * xnorm.clone();
            }
            let size = cabs_max(&val);
            let rel = if denom.is_zero() {
                if size.is_zero() {
                    BigFloat::zero()
                } else {
                    BigFloat::from_int(1, bits)
                }
            } else {
                size / denom
            };
            let log10 = log10_of(&rel);
            FormResidual {
                form: i,
                degree: d,
                residual: rel.to_sci_string(6),
                log10,
                passed: log10.map_or(true, |l| l <= tol_exp10 as f64),
            }
        })
        .collect();
    VerifyReport {
        passed: residuals.iter().all(|r| r.passed) && !xnorm.is_zero(),
        tolerance: format!("1e{tol_exp10}"),
        residuals,
    }
}

/// Evaluates the point's certificate at `digits` and checks the residuals.
pub fn verify_point_numeric(
    s: &FormSystem<Rational>,
    x: &[Radical],
    digits: u32,
    tol_exp10: i32,
) -> Result<VerifyReport, CertError> {
    let cert = RadicalCertificate::extract(x);
    let vals = cert.eval(digits)?;
    let bits = crate::solvfield::radical::bits_for_digits(digits);
    Ok(verify_values(s, &vals, bits, tol_exp10))
}

/// Field-specific serialization of solver coordinates.
pub trait ExportPoints: Field {
    fn export_points(points: &[Vec<Self>], digits: u32) -> Value;
}

impl ExportPoints for Radical {
    fn export_points(points: &[Vec<Self>], digits: u32) -> Value {
        let flat: Vec<Radical> = points.iter().flatten().cloned().collect();
        let cert = RadicalCertificate::extract(&flat);
        let values = cert.eval(digits).ok();
        let n = points.first().map_or(0, Vec::len);
        let pts: Vec<Value> = points
            .iter()
            .enumerate()
            .map(|(pi, p)| {
                let coords: Vec<Value> = (0..p.len())
                    .map(|k| {
                        let idx = pi * n + k;
                        let approx = values
                            .as_ref()
                            .map(|v| format_complex(&v[idx], digits as usize))
                            .unwrap_or_default();
                        json!({ "node": cert.outputs[idx], "approx": approx })
                    })
                    .collect();
                Value::Array(coords)
            })
            .collect();
        json!({
            "points": pts,
            "certificate": cert.to_json(),
            "root_depth": cert.root_depth(),
            "max_root_degree": cert.max_root_degree(),
        })
    }
}

impl<const P: u64> ExportPoints for Fq<P> {
    fn export_points(points: &[Vec<Self>], _digits: u32) -> Value {
        let tower = points
            .iter()
            .flatten()
            .filter_map(|c| c.tower())
            .max_by_key(|t| t.degree())
            .cloned();
        let coords = |c: &Fq<P>| -> Value {
            match &tower {
                Some(t) => {
                    let cs = c.lift_to(t);
                    json!(if cs.is_empty() { vec![0] } else { cs })
                }
                None => json!(c.as_base().unwrap_or(0)),
            }
        };
        let pts: Vec<Value> = points.iter().map(|p| Value::Array(p.iter().map(coords).collect())).collect();
        json!({
            "characteristic": P,
            "extension_degree": tower.as_ref().map_or(1, |t| t.degree()),
            "modulus": tower.as_ref().map(|t| t.modulus().to_vec()),
            "points": pts,
        })
    }
}

impl<K: ExportPoints> SolveOutcome<K> {
    pub fn to_json(&self, digits: u32) -> Value {
        json!({
            "field": self.field,
            "outside_guaranteed_range": self.outside_guaranteed_range,
            "retries": self.retries,
            "strategy_log": self.log,
            "result": K::export_points(&self.points, digits),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::{parse_poly, var_names};
    use crate::solvfield::{FiniteContext, NumericContext, F5, F7};

    fn sys(n: usize, forms: &[&str]) -> FormSystem<Rational> {
        let v = var_names("z", n + 1);
        FormSystem::new(n, forms.iter().map(|f| parse_poly(f, &v).unwrap()).collect()).unwrap()
    }

    #[test]
    fn eliminate_examples() {
        let s = sys(3, &["z0", "z1^2 - z2*z3"]);
        let e = eliminate_linear(&s).unwrap();
        assert_eq!(e.ambient_dim(), 2);
        assert_eq!(e.degrees(), &[2]);
        let s = sys(2, &["z0", "z1", "z0 + z1", "z2^2 - z0*z1"]);
        assert_eq!(eliminate_linear(&s).unwrap().ambient_dim(), 0);
        let s = sys(1, &["z0", "z1"]);
        assert!(eliminate_linear(&s).is_none());
    }

    #[test]
    fn sqrt2_on_the_projective_line() {
        let s = sys(1, &["z0^2 - 2*z1^2"]);
        let mut ctx = NumericContext::new(60, 3);
        let out = find_point(&system_over::<Radical>(&s).unwrap(), &mut ctx).unwrap();
        let x = out.point();
        let cert = RadicalCertificate::extract(x);
        assert_eq!(cert.root_depth(), 1);
        let r = verify_point_numeric(&s, x, 60, -50).unwrap();
        assert!(r.passed, "{r:?}");
        let v = cert.eval(30).unwrap();
        let ratio = (v[0].clone() / v[1].clone()).re.to_f64().abs();
        assert!((ratio - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn quadric_cubic_numeric() {
        let s = sys(3, &[
            "z0^2 + 3*z1*z2 - z3^2 + 2*z0*z3",
            "z0^3 - 2*z1^3 + z2^2*z3 + 5*z0*z1*z3 - z3^3",
        ]);
        let mut ctx = NumericContext::new(100, 11);
        let out = find_point(&system_over::<Radical>(&s).unwrap(), &mut ctx).unwrap();
        assert!(!out.outside_guaranteed_range);
        let r = verify_point_numeric(&s, out.point(), 100, -50).unwrap();
        assert!(r.passed, "{r:?}");
        let cert = RadicalCertificate::extract(out.point());
        assert!(cert.root_depth() <= 3, "depth {}", cert.root_depth());
        assert!(cert.max_root_degree() <= 4);
        // perturbed point fails
        let mut vals = cert.eval(100).unwrap();
        vals[0] = vals[0].clone() + creal(BigFloat::from_rational(&crate::scalar::rat(1, 1000), 400));
        let bad = verify_values(&s, &vals, 400, -50);
        assert!(!bad.passed);
        assert!(bad.residuals.iter().any(|r| r.log10.is_some_and(|l| l > -10.0)));
    }

    #[test]
    fn determinism() {
        let s = sys(3, &["z0*z1 - z2^2 + z3^2", "z0^3 + z1^3 + z2^3 + z3^3"]);
        let go = |seed| {
            let mut ctx = NumericContext::new(50, seed);
            let out = find_point(&system_over::<Radical>(&s).unwrap(), &mut ctx).unwrap();
            (out.log.clone(), RadicalCertificate::extract(out.point()))
        };
        assert_eq!(go(5), go(5));
    }

    #[test]
    fn finite_mirror() {
        let s = sys(3, &[
            "z0^2 + 3*z1*z2 - z3^2 + 2*z0*z3",
            "z0^3 - 2*z1^3 + z2^2*z3 + 5*z0*z1*z3 - z3^3",
        ]);
        for seed in 0..5 {
            let mut ctx = FiniteContext::<7>::new(seed).unwrap();
            let s7 = system_over::<F7>(&s).unwrap();
            let out = find_point(&s7, &mut ctx).unwrap();
            assert!(verify_point_exact(&s7, out.point()).passed);
            let mut ctx = FiniteContext::<5>::new(seed).unwrap();
            let s5 = system_over::<F5>(&s).unwrap();
            let out = find_point(&s5, &mut ctx).unwrap();
            assert!(verify_point_exact(&s5, out.point()).passed);
        }
    }

    #[test]
    fn ruling_line_on_quadric_surface() {
        let s = sys(3, &["z0*z3 - z1*z2 + z0^2 - 2*z2*z3"]);
        let mut ctx = NumericContext::new(60, 2);
        let sr = system_over::<Radical>(&s).unwrap();
        let out = find_linear_subspace(&sr, 1, &mut ctx).unwrap();
        assert_eq!(out.points.len(), 2);
        assert!(verify_subspace(&sr, &out).unwrap());
        let mut ctx = FiniteContext::<5>::new(2).unwrap();
        let s5 = system_over::<F5>(&s).unwrap();
        let out = find_linear_subspace(&s5, 1, &mut ctx).unwrap();
        assert!(verify_subspace(&s5, &out).unwrap());
    }

    #[test]
    fn quadric_pair_branch() {
        let s = sys(4, &["z0^2 + z1*z2 - z3*z4", "z1^2 - 3*z0*z4 + z2*z3 + z4^2"]);
        let mut ctx = NumericContext::new(80, 9);
        let out = find_point(&system_over::<Radical>(&s).unwrap(), &mut ctx).unwrap();
        assert!(out.log.iter().any(|st| st.action == Action::QuadricPair));
        assert!(out.log.iter().any(|st| st.action == Action::ConicPencil));
        assert!(verify_point_numeric(&s, out.point(), 80, -50).unwrap().passed);
        let mut ctx = FiniteContext::<7>::new(4).unwrap();
        let s7 = system_over::<F7>(&s).unwrap();
        let out = find_point(&s7, &mut ctx).unwrap();
        assert!(verify_point_exact(&s7, out.point()).passed);
    }

    #[test]
    fn empty_and_inconsistent() {
        let s = sys(1, &["z0", "z1"]);
        let mut ctx = NumericContext::new(30, 1);
        assert_eq!(
            find_point(&system_over::<Radical>(&s).unwrap(), &mut ctx).unwrap_err(),
            SolveError::NoPoints
        );
        let s = FormSystem::<Radical>::empty(2);
        let out = find_point(&s, &mut ctx).unwrap();
        assert_eq!(out.point().len(), 3);
    }
}
