use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::complex;
use super::finite::{Extender, Fq};
use super::radical::{bits_for_digits, CertGraph, Radical};
use crate::error::FieldError;
use crate::polyring::UniPoly;
use crate::scalar::{rat, Field};

/// A coefficient field that can be enlarged by roots of polynomials of degree
/// at most four, together with the seeded randomness the solver draws from.
pub trait FieldContext {
    type Elem: Field + fmt::Display;

    fn rng(&mut self) -> &mut ChaCha8Rng;

    /// A random element for generic specializations.
    fn random_element(&mut self) -> Self::Elem;

    /// All roots of `g` with multiplicity. Degree 0 gives no roots; the zero
    /// polynomial is an error because every element is a root.
    fn solve_univariate(&mut self, g: &UniPoly<Self::Elem>) -> Result<Vec<Self::Elem>, FieldError>;

    /// Root number `index` of `coeffs[0] + coeffs[1] t + ...`, in the order
    /// [`FieldContext::solve_univariate`] reports them.
    fn adjoin_root(&mut self, coeffs: &[Self::Elem], index: usize) -> Result<Self::Elem, FieldError> {
        let d = coeffs.len().saturating_sub(1);
        if !(2..=4).contains(&d) {
            return Err(FieldError::DegreeOutOfRange(d));
        }
        if coeffs[d].is_zero() {
            return Err(FieldError::ZeroLeadingCoefficient);
        }
        if index >= d {
            return Err(FieldError::RootIndex { index, degree: d });
        }
        let roots = self.solve_univariate(&UniPoly::new(coeffs.to_vec()))?;
        Ok(roots[index].clone())
    }

    /// One root of `g` for the solver to continue with.
    fn pick_root(&mut self, g: &UniPoly<Self::Elem>) -> Result<Self::Elem, FieldError>;

    /// Whether `is_zero` is exact.
    fn is_exact(&self) -> bool;

    fn describe(&self) -> String;
}

fn check_degree<K: Field>(g: &UniPoly<K>) -> Result<Option<usize>, FieldError> {
    match g.degree() {
        None => Err(FieldError::ZeroPolynomial),
        Some(0) => Ok(None),
        Some(d) if d > 4 => Err(FieldError::DegreeOutOfRange(d)),
        Some(d) => Ok(Some(d)),
    }
}

/// Radical towers over the rationals, evaluated at a fixed working precision.
#[derive(Debug)]
pub struct NumericContext {
    digits: u32,
    graph: Arc<CertGraph>,
    rng: ChaCha8Rng,
}

impl NumericContext {
    pub fn new(digits: u32, seed: u64) -> Self {
        NumericContext {
            digits,
            graph: CertGraph::new(bits_for_digits(digits)),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn graph(&self) -> &Arc<CertGraph> {
        &self.graph
    }
}

impl FieldContext for NumericContext {
    type Elem = Radical;

    fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn random_element(&mut self) -> Radical {
        Radical::from_rational(&rat(self.rng.gen_range(-40..=40), 1))
    }

    fn solve_univariate(&mut self, g: &UniPoly<Radical>) -> Result<Vec<Radical>, FieldError> {
        let Some(d) = check_degree(g)? else {
            return Ok(vec![]);
        };
        let cs = g.coeffs();
        if d == 1 {
            return Ok(vec![-(cs[0].clone() / cs[1].clone())]);
        }
        let bits = self.graph.bits();
        let vals: Vec<_> = cs.iter().map(|c| c.value(bits)).collect();
        let roots = complex::roots(&vals, bits);
        Ok(roots
            .into_iter()
            .enumerate()
            .map(|(i, v)| Radical::root(&self.graph, cs, i, v))
            .collect())
    }

    fn pick_root(&mut self, g: &UniPoly<Radical>) -> Result<Radical, FieldError> {
        let roots = self.solve_univariate(g)?;
        if roots.is_empty() {
            return Err(FieldError::DegreeOutOfRange(0));
        }
        let i = self.rng.gen_range(0..roots.len());
        Ok(roots[i].clone())
    }

    fn is_exact(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        format!("numeric({})", self.digits)
    }
}

/// Exact arithmetic in a growing tower of extensions of `F_P`.
#[derive(Debug)]
pub struct FiniteContext<const P: u64> {
    ext: Extender<P>,
    rng: ChaCha8Rng,
}

impl<const P: u64> FiniteContext<P> {
    pub fn new(seed: u64) -> Result<Self, FieldError> {
        Ok(FiniteContext {
            ext: Extender::new()?,
            rng: ChaCha8Rng::seed_from_u64(seed),
        })
    }

    pub fn extender(&self) -> &Extender<P> {
        &self.ext
    }

    /// Degree of the current field over `F_P`.
    pub fn degree(&self) -> usize {
        self.ext.degree()
    }
}

impl<const P: u64> FieldContext for FiniteContext<P> {
    type Elem = Fq<P>;

    fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn random_element(&mut self) -> Fq<P> {
        self.ext.random_element(&mut self.rng)
    }

    fn solve_univariate(&mut self, g: &UniPoly<Fq<P>>) -> Result<Vec<Fq<P>>, FieldError> {
        if check_degree(g)?.is_none() {
            return Ok(vec![]);
        }
        self.ext.all_roots(g, &mut self.rng)
    }

    fn pick_root(&mut self, g: &UniPoly<Fq<P>>) -> Result<Fq<P>, FieldError> {
        if check_degree(g)?.is_none() {
            return Err(FieldError::DegreeOutOfRange(0));
        }
        self.ext.some_root(g, &mut self.rng)
    }

    fn is_exact(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        format!("finite({}^{})", P, self.ext.degree())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvfield::radical::RadicalCertificate;
    use crate::solvfield::{F5, F7};
    use num_traits::One;

    fn rpoly(cs: &[i64]) -> UniPoly<Radical> {
        UniPoly::new(cs.iter().map(|&c| Radical::from_i64(c)).collect())
    }

    #[test]
    fn sqrt2_at_50_digits() {
        let mut ctx = NumericContext::new(50, 1);
        let r = ctx.adjoin_root(&[Radical::from_i64(-2), Radical::zero(), Radical::one()], 0).unwrap();
        let cert = RadicalCertificate::extract(&[r.clone()]);
        assert_eq!(cert.root_count(), 1);
        assert_eq!(
            cert.to_json()["nodes"].as_array().unwrap().last().unwrap()["root_of"]["index"],
            0
        );
        let s = r.value(ctx.graph().bits()).re.to_sci_string(50);
        assert!(s.starts_with("1.4142135623730950488016887242096980785696718753769"), "{s}");
    }

    #[test]
    fn adjoin_errors() {
        let mut ctx = NumericContext::new(30, 1);
        let one = Radical::one();
        let z = Radical::zero();
        assert_eq!(
            ctx.adjoin_root(&[one.clone(), one.clone(), z.clone()], 0),
            Err(FieldError::ZeroLeadingCoefficient)
        );
        assert_eq!(
            ctx.adjoin_root(&vec![one.clone(); 6], 0),
            Err(FieldError::DegreeOutOfRange(5))
        );
        assert_eq!(
            ctx.adjoin_root(&[one.clone(), z, one], 2),
            Err(FieldError::RootIndex { index: 2, degree: 2 })
        );
        assert_eq!(ctx.solve_univariate(&UniPoly::zero()), Err(FieldError::ZeroPolynomial));
        assert_eq!(ctx.solve_univariate(&rpoly(&[3])).unwrap(), vec![]);
        assert_eq!(ctx.solve_univariate(&rpoly(&[-6, 3])).unwrap(), vec![Radical::from_i64(2)]);
    }

    #[test]
    fn cube_roots_of_two_satisfy_vieta() {
        let mut ctx = NumericContext::new(50, 3);
        let roots = ctx.solve_univariate(&rpoly(&[-2, 0, 0, 1])).unwrap();
        assert_eq!(roots.len(), 3);
        let bits = ctx.graph().bits();
        let v: Vec<_> = roots.iter().map(|r| r.value(bits)).collect();
        let e1 = v[0].clone() + v[1].clone() + v[2].clone();
        let e2 = v[0].clone() * v[1].clone() + v[0].clone() * v[2].clone() + v[1].clone() * v[2].clone();
        let e3 = v[0].clone() * v[1].clone() * v[2].clone();
        let tol = -150;
        assert!(complex::log2_size(&e1).map_or(true, |l| l < tol));
        assert!(complex::log2_size(&e2).map_or(true, |l| l < tol));
        let two = complex::creal(super::super::bigfloat::BigFloat::from_int(2, bits));
        assert!(complex::log2_size(&(e3 - two)).map_or(true, |l| l < tol));
    }

    #[test]
    fn finite_examples() {
        let mut ctx = FiniteContext::<5>::new(1).unwrap();
        let two = F5::new(2);
        let r = ctx.adjoin_root(&[-two.clone(), F5::zero(), F5::one()], 0).unwrap();
        assert_eq!(ctx.degree(), 2);
        assert_eq!(r.clone() * r, two);

        let mut ctx = FiniteContext::<7>::new(1).unwrap();
        let g = [F7::new(2), F7::from_i64(-3), F7::one()];
        assert_eq!(ctx.adjoin_root(&g, 0).unwrap(), F7::new(1));
        assert_eq!(ctx.adjoin_root(&g, 1).unwrap(), F7::new(2));
        assert_eq!(ctx.degree(), 1);
        assert!(FiniteContext::<3>::new(0).is_err());
        assert!(FiniteContext::<2>::new(0).is_err());
    }
}
