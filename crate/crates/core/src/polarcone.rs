//! Polar cones of form systems and the charts that turn a cone into a
//! system for the planes through a fixed span.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{ConeError, PolyError};
use crate::linalg::{kernel, rank, rref, Matrix};
use crate::polyring::{polarize, var_names, MultiPoly, PolyJson, Vars};
use crate::scalar::{Field, Rational};
use crate::typecalc::{type_of, DegreeVector, TypeVector};

/// Homogeneous forms in `ambient_dim + 1` variables, each with its degree.
///
/// A form may be identically zero (a vanishing polar); it still counts in
/// `degrees`. Constants are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct FormSystem<K> {
    ambient_dim: usize,
    vars: Vars,
    forms: Vec<MultiPoly<K>>,
    degrees: Vec<u32>,
}

impl<K: Field> FormSystem<K> {
    /// Degrees are read off the forms; every form must be nonzero.
    pub fn new(ambient_dim: usize, forms: Vec<MultiPoly<K>>) -> Result<Self, ConeError> {
        let mut degrees = Vec::with_capacity(forms.len());
        for f in &forms {
            match f.homogeneous_degree()? {
                Some(d) => degrees.push(d),
                None => return Err(ConeError::DegreeMismatch {
                    index: degrees.len(),
                    expected: 1,
                    found: 0,
                }),
            }
        }
        Self::with_degrees(ambient_dim, forms, degrees)
    }

    pub fn with_degrees(ambient_dim: usize, forms: Vec<MultiPoly<K>>, degrees: Vec<u32>) -> Result<Self, ConeError> {
        let vars = match forms.first() {
            Some(f) => f.vars().clone(),
            None => var_names("z", ambient_dim + 1),
        };
        if vars.len() != ambient_dim + 1 {
            return Err(PolyError::DimensionMismatch {
                expected: ambient_dim + 1,
                found: vars.len(),
            }
            .into());
        }
        if degrees.len() != forms.len() {
            return Err(PolyError::DimensionMismatch {
                expected: forms.len(),
                found: degrees.len(),
            }
            .into());
        }
        for (i, (f, &d)) in forms.iter().zip(&degrees).enumerate() {
            if f.vars() != &vars {
                return Err(PolyError::VariableMismatch.into());
            }
            let found = f.homogeneous_degree()?;
            if d == 0 || found.is_some_and(|e| e != d) {
                return Err(ConeError::DegreeMismatch {
                    index: i,
                    expected: d,
                    found: found.unwrap_or(0),
                });
            }
        }
        Ok(FormSystem {
            ambient_dim,
            vars,
            forms,
            degrees,
        })
    }

    pub fn empty(ambient_dim: usize) -> Self {
        FormSystem {
            ambient_dim,
            vars: var_names("z", ambient_dim + 1),
            forms: Vec::new(),
            degrees: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn forms(&self) -> &[MultiPoly<K>] {
        &self.forms
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn degree_vector(&self) -> DegreeVector {
        DegreeVector::new(self.degrees.iter().copied())
    }

    pub fn type_vector(&self) -> TypeVector {
        type_of(&self.degree_vector())
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Forms that are not identically zero, with their degrees.
    pub fn nonzero(&self) -> impl Iterator<Item = (&MultiPoly<K>, u32)> {
        self.forms
            .iter()
            .zip(self.degrees.iter().copied())
            .filter(|(f, _)| !f.is_zero())
    }

    pub fn max_degree(&self) -> u32 {
        self.degrees.iter().copied().max().unwrap_or(0)
    }

    pub fn map<L: Field, F: FnMut(&K) -> L>(&self, mut f: F) -> FormSystem<L> {
        FormSystem {
            ambient_dim: self.ambient_dim,
            vars: self.vars.clone(),
            forms: self.forms.iter().map(|p| p.map_coeffs(&mut f)).collect(),
            degrees: self.degrees.clone(),
        }
    }

    /// Index of the first form not vanishing at `x`.
    pub fn first_nonvanishing(&self, x: &[K]) -> Option<usize> {
        self.forms.iter().position(|f| !f.eval(x).is_zero())
    }

    pub fn contains_point(&self, x: &[K]) -> bool {
        self.first_nonvanishing(x).is_none()
    }

    /// Renames the variables to `z0..zN`.
    pub fn with_standard_vars(&self) -> Self {
        let vars = var_names("z", self.ambient_dim + 1);
        FormSystem {
            ambient_dim: self.ambient_dim,
            forms: self
                .forms
                .iter()
                .map(|f| f.with_vars(vars.clone()).expect("same length"))
                .collect(),
            vars,
            degrees: self.degrees.clone(),
        }
    }

    /// Pulls every form back along `z = matrix · w`; `matrix` is `(N+1) × (M+1)`.
    pub fn pull_back(&self, matrix: &[Vec<K>]) -> Result<Self, ConeError> {
        let cols = matrix.first().map_or(0, Vec::len);
        if cols == 0 {
            return Err(ConeError::DegenerateChart);
        }
        let w = var_names("z", cols);
        let forms = self
            .forms
            .iter()
            .map(|f| f.substitute_linear(matrix, w.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FormSystem {
            ambient_dim: cols - 1,
            vars: w,
            forms,
            degrees: self.degrees.clone(),
        })
    }

    /// Keeps the forms selected by `keep`.
    pub fn select<F: FnMut(usize, &MultiPoly<K>, u32) -> bool>(&self, mut keep: F) -> Self {
        let mut forms = Vec::new();
        let mut degrees = Vec::new();
        for (i, (f, &d)) in self.forms.iter().zip(&self.degrees).enumerate() {
            if keep(i, f, d) {
                forms.push(f.clone());
                degrees.push(d);
            }
        }
        FormSystem {
            ambient_dim: self.ambient_dim,
            vars: self.vars.clone(),
            forms,
            degrees,
        }
    }
}

fn check_point<K: Field>(s: &FormSystem<K>, x: &[K]) -> Result<(), ConeError> {
    if x.len() != s.ambient_dim + 1 {
        return Err(PolyError::DimensionMismatch {
            expected: s.ambient_dim + 1,
            found: x.len(),
        }
        .into());
    }
    if x.iter().all(|c| c.is_zero()) {
        return Err(ConeError::ZeroPoint);
    }
    Ok(())
}

/// The first polar cone `C^1(S; x0)`: every polar of positive degree of every
/// form at `x0`, in form order and then by degree.
pub fn polar_system<K: Field>(s: &FormSystem<K>, x0: &[K]) -> Result<FormSystem<K>, ConeError> {
    check_point(s, x0)?;
    if let Some(i) = s.first_nonvanishing(x0) {
        return Err(ConeError::PointNotOnSystem(i));
    }
    let mut forms = Vec::new();
    let mut degrees = Vec::new();
    for (f, &d) in s.forms.iter().zip(&s.degrees) {
        let p = if f.is_zero() {
            None
        } else {
            Some(polarize(f, x0)?)
        };
        for i in 1..=d {
            forms.push(match &p {
                Some(p) => p.entries[i as usize].clone(),
                None => MultiPoly::zero(s.vars.clone()),
            });
            degrees.push(i);
        }
    }
    Ok(FormSystem {
        ambient_dim: s.ambient_dim,
        vars: s.vars.clone(),
        forms,
        degrees,
    })
}

/// `C^j(S; x_0, .., x_{j-1})` by repeated polar cones. Each point must lie on
/// the previous cone and outside the span of its predecessors.
pub fn iterated_polar<K: Field>(s: &FormSystem<K>, pts: &[Vec<K>]) -> Result<FormSystem<K>, ConeError> {
    let mut cone = s.clone();
    for (k, x) in pts.iter().enumerate() {
        check_point(&cone, x)?;
        if rank(&pts[..=k]) <= k {
            return Err(ConeError::DependentPoint(k));
        }
        cone = polar_system(&cone, x)?;
    }
    Ok(cone)
}

/// Points spanning a `j`-plane: `j + 1` linearly independent coordinate vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SpanningTuple<K> {
    points: Vec<Vec<K>>,
}

impl<K: Field> SpanningTuple<K> {
    pub fn new(points: Vec<Vec<K>>) -> Result<Self, ConeError> {
        if points.is_empty() {
            return Err(ConeError::RankDeficient);
        }
        let n = points[0].len();
        if let Some(p) = points.iter().find(|p| p.len() != n) {
            return Err(PolyError::DimensionMismatch {
                expected: n,
                found: p.len(),
            }
            .into());
        }
        if rank(&points) < points.len() {
            return Err(ConeError::RankDeficient);
        }
        Ok(SpanningTuple { points })
    }

    pub fn points(&self) -> &[Vec<K>] {
        &self.points
    }

    pub fn span_dim(&self) -> usize {
        self.points.len() - 1
    }

    pub fn into_points(self) -> Vec<Vec<K>> {
        self.points
    }

    /// `(N+1) × (j+1)` matrix whose columns are the points.
    pub fn parametrization(&self) -> Matrix<K> {
        crate::linalg::transpose(&self.points)
    }
}

/// A system on a linear subspace together with its embedding `z = embedding · w`.
#[derive(Clone, Debug, PartialEq)]
pub struct Chart<K> {
    pub system: FormSystem<K>,
    /// `(N+1) × (M+1)`, full column rank.
    pub embedding: Matrix<K>,
}

impl<K: Field> Chart<K> {
    pub fn to_ambient(&self, w: &[K]) -> Vec<K> {
        crate::linalg::mat_vec(&self.embedding, w)
    }
}

/// Restricts to the common zero set of the linear forms, which is cut out
/// by a kernel basis. Fails with [`ConeError::DegenerateChart`] if the linear
/// forms leave only the zero vector.
pub fn eliminate_linear_forms<K: Field>(s: &FormSystem<K>) -> Result<Chart<K>, ConeError> {
    let n = s.ambient_dim + 1;
    let rows: Matrix<K> = s
        .nonzero()
        .filter(|(_, d)| *d == 1)
        .map(|(f, _)| {
            let mut row = vec![K::zero(); n];
            for (m, c) in f.terms() {
                let i = m.exponents().iter().position(|&e| e == 1).expect("linear monomial");
                row[i] = c.clone();
            }
            row
        })
        .collect();
    let rest = s.select(|_, _, d| d != 1);
    if rows.is_empty() {
        let id = identity(n);
        return Ok(Chart {
            system: rest,
            embedding: id,
        });
    }
    let basis = kernel(&rows, n);
    if basis.is_empty() {
        return Err(ConeError::DegenerateChart);
    }
    let embedding = crate::linalg::transpose(&basis);
    let system = rest.pull_back(&embedding)?;
    Ok(Chart { system, embedding })
}

fn identity<K: Field>(n: usize) -> Matrix<K> {
    (0..n)
        .map(|i| (0..n).map(|k| if i == k { K::one() } else { K::zero() }).collect())
        .collect()
}

/// Cuts the cone by the coordinate subspace complementary to the tuple's span
/// (coordinates at the pivot columns of its reduced echelon form are set to
/// zero), then eliminates the linear forms.
pub fn restrict_to_complement<K: Field>(
    cone: &FormSystem<K>,
    tuple: &SpanningTuple<K>,
) -> Result<Chart<K>, ConeError> {
    let n = cone.ambient_dim + 1;
    let k = tuple.points.len();
    if tuple.points[0].len() != n {
        return Err(PolyError::DimensionMismatch {
            expected: n,
            found: tuple.points[0].len(),
        }
        .into());
    }
    if n <= k {
        return Err(ConeError::AmbientTooSmall {
            ambient: cone.ambient_dim,
            span: k - 1,
        });
    }
    let mut m = tuple.points.clone();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let chart: Matrix<K> = (0..n)
        .map(|i| {
            free.iter()
                .map(|&c| if c == i { K::one() } else { K::zero() })
                .collect()
        })
        .collect();
    let cut = cone.pull_back(&chart)?;
    let inner = eliminate_linear_forms(&cut)?;
    let embedding = matmul(&chart, &inner.embedding);
    Ok(Chart {
        system: inner.system,
        embedding,
    })
}

pub(crate) fn matmul<K: Field>(a: &[Vec<K>], b: &[Vec<K>]) -> Matrix<K> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| {
                    row.iter()
                        .zip(b)
                        .fold(K::zero(), |acc, (x, brow)| acc + x.clone() * brow[c].clone())
                })
                .collect()
        })
        .collect()
}

/// Whether every form vanishes identically on the line through `x` and `y`.
pub fn line_in_variety_check<K: Field>(s: &FormSystem<K>, x: &[K], y: &[K]) -> Result<bool, ConeError> {
    let tuple = SpanningTuple::new(vec![x.to_vec(), y.to_vec()]).map_err(|e| match e {
        ConeError::RankDeficient => ConeError::DependentPoint(1),
        other => other,
    })?;
    plane_in_variety_check(s, &tuple)
}

/// Whether every form vanishes identically on the span of the tuple.
pub fn plane_in_variety_check<K: Field>(s: &FormSystem<K>, tuple: &SpanningTuple<K>) -> Result<bool, ConeError> {
    if tuple.points[0].len() != s.ambient_dim + 1 {
        return Err(PolyError::DimensionMismatch {
            expected: s.ambient_dim + 1,
            found: tuple.points[0].len(),
        }
        .into());
    }
    let t = var_names("t", tuple.points.len());
    let param = tuple.parametrization();
    for f in &s.forms {
        if !f.substitute_linear(&param, t.clone())?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SystemJson {
    ambient_dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    degrees: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vars: Option<Vec<String>>,
    forms: Vec<Value>,
}

impl FormSystem<Rational> {
    /// Reads `{"ambient_dim", "degrees"?, "vars"?, "forms"}`; each form is a
    /// polynomial string or a polynomial JSON object. Variables default to `z0..zN`.
    pub fn from_json_value(v: &Value) -> Result<Self, ConeError> {
        let raw: SystemJson =
            serde_json::from_value(v.clone()).map_err(|e| PolyError::Json(e.to_string()))?;
        let vars: Vars = match &raw.vars {
            Some(names) => names.clone().into(),
            None => var_names("z", raw.ambient_dim + 1),
        };
        let mut forms = Vec::with_capacity(raw.forms.len());
        for f in &raw.forms {
            let p = match f {
                Value::String(s) => crate::polyring::parse_poly(s, &vars)?,
                other => {
                    let pj: PolyJson = serde_json::from_value(other.clone())
                        .map_err(|e| PolyError::Json(e.to_string()))?;
                    let p = MultiPoly::from_json(&pj)?;
                    if p.vars() != &vars {
                        return Err(PolyError::VariableMismatch.into());
                    }
                    p
                }
            };
            forms.push(p);
        }
        if forms.is_empty() {
            let mut s = FormSystem::empty(raw.ambient_dim);
            s.vars = vars;
            return Ok(s);
        }
        match raw.degrees {
            Some(d) => FormSystem::with_degrees(raw.ambient_dim, forms, d),
            None => FormSystem::new(raw.ambient_dim, forms),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, ConeError> {
        let v: Value = serde_json::from_str(s).map_err(|e| PolyError::Json(e.to_string()))?;
        Self::from_json_value(&v)
    }

    pub fn to_json_value(&self) -> Value {
        let raw = SystemJson {
            ambient_dim: self.ambient_dim,
            degrees: Some(self.degrees.clone()),
            vars: Some(self.vars.to_vec()),
            forms: self
                .forms
                .iter()
                .map(|f| Value::String(f.to_string()))
                .collect(),
        };
        serde_json::to_value(raw).expect("serializable")
    }
}
