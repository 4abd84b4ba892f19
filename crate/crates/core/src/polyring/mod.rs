//! Sparse multivariate polynomials over any [`Field`].
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors under graded
//! lexicographic order, and zero coefficients are never stored, so two
//! polynomials over the same variables are equal iff their maps are equal.

mod json;
mod parse;
mod polar;
mod univariate;

pub use json::{PolyJson, TermJson};
pub use parse::parse_poly;
pub use polar::{polarize, polarize_via_derivatives, PolarCoefficients};
pub use univariate::UniPoly;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::PolyError;
use crate::scalar::Field;

/// Exponent vector, one entry per variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    /// Graded lexicographic, with the first variable largest.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub type Vars = Arc<[String]>;

/// Variable names `prefix0 .. prefix{n-1}`.
pub fn var_names(prefix: &str, n: usize) -> Vars {
    (0..n).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>().into()
}

pub fn named_vars<S: AsRef<str>>(names: &[S]) -> Vars {
    names.iter().map(|s| s.as_ref().to_string()).collect::<Vec<_>>().into()
}

#[derive(Clone, Debug, PartialEq)]
pub struct MultiPoly<C> {
    vars: Vars,
    terms: BTreeMap<Monomial, C>,
}

impl<C: Field> MultiPoly<C> {
    pub fn zero(vars: Vars) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, c: C) -> Self {
        let n = vars.len();
        Self::from_terms(vars, [(Monomial::one(n), c)])
    }

    pub fn var(vars: Vars, i: usize) -> Self {
        let n = vars.len();
        Self::from_terms(vars, [(Monomial::var(n, i), C::one())])
    }

    /// Linear form `sum coeffs[i] * x_i`.
    pub fn linear(vars: Vars, coeffs: &[C]) -> Self {
        let n = vars.len();
        Self::from_terms(
            vars,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i), c.clone())),
        )
    }

    /// Builds a canonical polynomial, merging repeated monomials.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(vars: Vars, terms: I) -> Self {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            assert_eq!(m.0.len(), p.vars.len(), "exponent length must match variable count");
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(m, s);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    /// Terms in increasing graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponents: &[u32]) -> C {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .cloned()
            .unwrap_or_else(C::zero)
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// The common degree of all terms; the zero polynomial is homogeneous of every degree.
    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Monomial::degree);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    pub fn homogeneous_degree(&self) -> Result<Option<u32>, PolyError> {
        if self.is_homogeneous() {
            Ok(self.total_degree())
        } else {
            Err(PolyError::NotHomogeneous)
        }
    }

    pub fn with_vars(&self, vars: Vars) -> Result<Self, PolyError> {
        if vars.len() != self.vars.len() {
            return Err(PolyError::DimensionMismatch {
                expected: self.vars.len(),
                found: vars.len(),
            });
        }
        Ok(MultiPoly {
            vars,
            terms: self.terms.clone(),
        })
    }

    fn check_vars(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.vars, &other.vars) || self.vars == other.vars,
            "polynomials over different variables: {:?} vs {:?}",
            self.vars,
            other.vars
        );
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero(self.vars.clone());
        }
        Self::from_terms(
            self.vars.clone(),
            self.terms.iter().map(|(m, a)| (m.clone(), a.clone() * c.clone())),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.vars.clone(), C::one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn map_coeffs<D: Field, F: FnMut(&C) -> D>(&self, mut f: F) -> MultiPoly<D> {
        MultiPoly::from_terms(
            self.vars.clone(),
            self.terms.iter().map(|(m, c)| (m.clone(), f(c))),
        )
    }

    pub fn eval(&self, point: &[C]) -> C {
        assert_eq!(point.len(), self.nvars(), "point dimension");
        // powers[k][e] = point[k]^e, up to the largest exponent of x_k
        let mut powers: Vec<Vec<C>> = point.iter().map(|_| vec![C::one()]).collect();
        for m in self.terms.keys() {
            for (k, &e) in m.0.iter().enumerate() {
                while powers[k].len() <= e as usize {
                    let next = powers[k].last().expect("nonempty").clone() * point[k].clone();
                    powers[k].push(next);
                }
            }
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = t * powers[k][e as usize].clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    /// Replaces each variable `x_i` by the polynomial `images[i]`.
    pub fn substitute(&self, images: &[MultiPoly<C>]) -> Result<MultiPoly<C>, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars(),
                found: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => {
                return Ok(MultiPoly::from_terms(
                    Vars::from(Vec::new()),
                    self.terms.values().map(|c| (Monomial(vec![]), c.clone())),
                ))
            }
        };
        for p in images {
            if p.vars != target {
                return Err(PolyError::VariableMismatch);
            }
        }
        // cache of powers images[i]^k
        let mut powers: Vec<Vec<MultiPoly<C>>> = images
            .iter()
            .map(|p| vec![MultiPoly::constant(target.clone(), C::one()), p.clone()])
            .collect();
        let mut out = MultiPoly::zero(target.clone());
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(target.clone(), c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
                if t.is_zero() {
                    break;
                }
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Linear change of coordinates `x_i = sum_k matrix[i][k] * w_k`.
    ///
    /// `matrix` has one row per current variable and one column per new variable.
    pub fn substitute_linear(&self, matrix: &[Vec<C>], new_vars: Vars) -> Result<MultiPoly<C>, PolyError> {
        if matrix.len() != self.nvars() {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars(),
                found: matrix.len(),
            });
        }
        if let Some(row) = matrix.iter().find(|r| r.len() != new_vars.len()) {
            return Err(PolyError::DimensionMismatch {
                expected: new_vars.len(),
                found: row.len(),
            });
        }
        let images: Vec<MultiPoly<C>> = matrix
            .iter()
            .map(|row| MultiPoly::linear(new_vars.clone(), row))
            .collect();
        if images.is_empty() {
            return Ok(MultiPoly::from_terms(
                new_vars.clone(),
                self.terms
                    .values()
                    .map(|c| (Monomial::one(new_vars.len()), c.clone())),
            ));
        }
        self.substitute(&images)
    }

    pub fn partial_derivative(&self, i: usize) -> Self {
        Self::from_terms(
            self.vars.clone(),
            self.terms.iter().filter(|(m, _)| m.0[i] > 0).map(|(m, c)| {
                let mut e = m.0.clone();
                let k = e[i];
                e[i] -= 1;
                (Monomial(e), c.clone() * C::from_i64(k as i64))
            }),
        )
    }

    /// `sum_i x_i * d/dz_i`.
    pub fn directional_derivative(&self, direction: &[C]) -> Self {
        let mut acc = Self::zero(self.vars.clone());
        for (i, x) in direction.iter().enumerate() {
            if !x.is_zero() {
                acc = &acc + &self.partial_derivative(i).scale(x);
            }
        }
        acc
    }

    /// Largest coefficient magnitude, 0 for the zero polynomial.
    pub fn max_magnitude(&self) -> f64 {
        self.terms.values().map(Field::magnitude).fold(0.0, f64::max)
    }
}

impl<C: Field> Add for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn add(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<C: Field> Sub for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn sub(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl<C: Field> Mul for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn mul(self, rhs: &MultiPoly<C>) -> MultiPoly<C> {
        self.check_vars(rhs);
        let mut out = MultiPoly::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<C: Field> Neg for &MultiPoly<C> {
    type Output = MultiPoly<C>;
    fn neg(self) -> MultiPoly<C> {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl<C: Field> $tr for MultiPoly<C> {
            type Output = MultiPoly<C>;
            fn $f(self, rhs: MultiPoly<C>) -> MultiPoly<C> {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

fn write_monomial(f: &mut fmt::Formatter<'_>, vars: &[String], m: &Monomial) -> fmt::Result {
    let mut first = true;
    for (name, &e) in vars.iter().zip(&m.0) {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        if e == 1 {
            write!(f, "{name}")?;
        } else {
            write!(f, "{name}^{e}")?;
        }
    }
    Ok(())
}

impl<C: Field + fmt::Display> fmt::Display for MultiPoly<C> {
    /// Highest terms first, e.g. `x0^2 + 2*x0*x1 - 1/2*x1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let (neg, mag) = if c.is_negative() {
                (true, -c.clone())
            } else {
                (false, c.clone())
            };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let constant = m.degree() == 0;
            if mag.is_one() {
                if constant {
                    write!(f, "1")?;
                }
            } else {
                write!(f, "{mag}")?;
                if !constant {
                    write!(f, "*")?;
                }
            }
            write_monomial(f, &self.vars, m)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;

    fn vars4() -> Vars {
        var_names("x", 4)
    }

    fn q(s: &str) -> MultiPoly<Rational> {
        parse_poly(s, &vars4()).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let a = Monomial(vec![2, 0, 0, 0]);
        let b = Monomial(vec![1, 1, 0, 0]);
        let c = Monomial(vec![0, 0, 0, 3]);
        assert!(a > b);
        assert!(c > a);
        assert_eq!(q("x1*x0 + x0^2").to_string(), "x0^2 + x0*x1");
    }

    #[test]
    fn arithmetic() {
        assert_eq!(&q("x0^2") * &q("x1"), q("x0^2*x1"));
        assert_eq!(&q("x0 + x1") - &q("x1"), q("x0"));
        assert!((&q("x0*x3 - x1*x2") - &q("x0*x3 - x1*x2")).is_zero());
        assert_eq!(q("x0 + 1").pow(2), q("x0^2 + 2*x0 + 1"));
        assert_eq!(q("x0 + x1").scale(&rat(1, 2)), q("1/2*x0 + 1/2*x1"));
    }

    #[test]
    fn hyperplane_restriction() {
        // x3 -> 0, other coordinates kept
        let f = q("x0*x3 - x1*x2");
        let mut m = vec![vec![Rational::from_integer(0.into()); 3]; 4];
        for i in 0..3 {
            m[i][i] = rat(1, 1);
        }
        let w = var_names("w", 3);
        let g = f.substitute_linear(&m, w.clone()).unwrap();
        assert_eq!(g, parse_poly("-w1*w2", &w).unwrap());
        assert!(f.substitute_linear(&m[..3], w).is_err());
    }

    #[test]
    fn derivatives() {
        let f = q("x0^3 + 2*x0*x1");
        assert_eq!(f.partial_derivative(0), q("3*x0^2 + 2*x1"));
        let dir = [rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)];
        assert_eq!(f.directional_derivative(&dir), q("3*x0^2 + 2*x1"));
    }

    #[test]
    fn evaluation_and_homogeneity() {
        let f = q("x0*x3 - x1*x2");
        let p = [rat(1, 1), rat(2, 1), rat(3, 1), rat(6, 1)];
        assert_eq!(f.eval(&p), rat(0, 1));
        assert!(f.is_homogeneous());
        assert!(!q("x0 + 1").is_homogeneous());
        assert_eq!(f.total_degree(), Some(2));
        assert_eq!(q("0").total_degree(), None);
    }

    pub(crate) fn arb_poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = MultiPoly<Rational>> {
        prop::collection::vec(
            (prop::collection::vec(0..=max_deg, nvars), -20i64..=20, 1i64..=5),
            0..6,
        )
        .prop_map(move |ts| {
            MultiPoly::from_terms(
                var_names("x", nvars),
                ts.into_iter().map(|(e, n, d)| (Monomial(e), rat(n, d))),
            )
        })
    }

    pub(crate) fn arb_homogeneous(nvars: usize, deg: u32) -> impl Strategy<Value = MultiPoly<Rational>> {
        prop::collection::vec((prop::collection::vec(0..nvars, deg as usize), -100i64..=100, 1i64..=7), 1..8)
            .prop_map(move |ts| {
                MultiPoly::from_terms(
                    var_names("x", nvars),
                    ts.into_iter().map(|(idx, n, d)| {
                        let mut e = vec![0u32; nvars];
                        for i in idx {
                            e[i] += 1;
                        }
                        (Monomial(e), rat(n, d))
                    }),
                )
            })
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(3, 3), b in arb_poly(3, 3), c in arb_poly(3, 3)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn text_round_trip(a in arb_poly(4, 4)) {
            let text = a.to_string();
            prop_assert_eq!(parse_poly(&text, a.vars()).unwrap(), a);
        }

        #[test]
        fn linear_change_preserves_degree(f in arb_homogeneous(3, 3),
                                          m in prop::collection::vec(-3i64..=3, 9)) {
            let a: Vec<Vec<Rational>> = (0..3).map(|i| (0..3).map(|k| rat(m[3 * i + k], 1)).collect()).collect();
            let g = f.substitute_linear(&a, var_names("w", 3)).unwrap();
            prop_assert!(g.is_homogeneous());
            if let Some(d) = g.total_degree() {
                prop_assert_eq!(Some(d), f.total_degree());
            }
        }
    }
}
