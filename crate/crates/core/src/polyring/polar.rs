//! Polars of a form at a point.
//!
//! For `f` homogeneous of degree `d`, expand
//! `f(λx + μy) = Σ_i (1/i!) P_i(y) λ^(d-i) μ^i` and keep the `P_i`.
//! `P_0 = f(x)` is a constant and `P_d = d!·f(y)`.

use super::{Monomial, MultiPoly};
use crate::error::PolyError;
use crate::scalar::{factorial, Field};

#[derive(Clone, Debug, PartialEq)]
pub struct PolarCoefficients<C> {
    pub degree: u32,
    /// `entries[i]` is homogeneous of degree `i` in the variables of `f`.
    pub entries: Vec<MultiPoly<C>>,
}

impl<C: Field> PolarCoefficients<C> {
    /// Polars of positive degree in `y`.
    pub fn nonconstant(&self) -> &[MultiPoly<C>] {
        &self.entries[1..]
    }
}

fn binomial<C: Field>(n: u32, k: u32) -> C {
    let mut num: u64 = 1;
    for i in 0..k as u64 {
        num = num * (n as u64 - i) / (i + 1);
    }
    C::from_i64(num as i64)
}

/// Coefficients of `f(λx + μy)`, by expanding every term binomially.
pub fn polarize<C: Field>(f: &MultiPoly<C>, x: &[C]) -> Result<PolarCoefficients<C>, PolyError> {
    let d = f.homogeneous_degree()?.unwrap_or(0);
    if x.len() != f.nvars() {
        return Err(PolyError::DimensionMismatch {
            expected: f.nvars(),
            found: x.len(),
        });
    }
    let n = f.nvars();
    let mut buckets: Vec<Vec<(Monomial, C)>> = vec![Vec::new(); d as usize + 1];
    for (m, c) in f.terms() {
        // choose how many of each variable's e_k factors come from y
        let support: Vec<usize> = (0..n).filter(|&k| m.0[k] > 0).collect();
        let mut stack: Vec<(usize, Vec<u32>, C, u32)> = vec![(0, vec![0; n], c.clone(), 0)];
        while let Some((pos, ys, coeff, mu)) = stack.pop() {
            if coeff.is_zero() {
                continue;
            }
            if pos == support.len() {
                buckets[mu as usize].push((Monomial(ys), coeff));
                continue;
            }
            let k = support[pos];
            let e = m.0[k];
            for a in 0..=e {
                let mut ys2 = ys.clone();
                ys2[k] = a;
                let c2 = coeff.clone() * binomial::<C>(e, a) * x[k].pow(e - a);
                stack.push((pos + 1, ys2, c2, mu + a));
            }
        }
    }
    let entries = buckets
        .into_iter()
        .enumerate()
        .map(|(i, ts)| MultiPoly::from_terms(f.vars().clone(), ts).scale(&factorial::<C>(i as u32)))
        .collect();
    Ok(PolarCoefficients { degree: d, entries })
}

/// Same coefficients via `P_i = i!/(d-i)! · D_x^(d-i) f`, with `D_x = Σ x_k ∂_k`.
pub fn polarize_via_derivatives<C: Field>(
    f: &MultiPoly<C>,
    x: &[C],
) -> Result<PolarCoefficients<C>, PolyError> {
    let d = f.homogeneous_degree()?.unwrap_or(0);
    if x.len() != f.nvars() {
        return Err(PolyError::DimensionMismatch {
            expected: f.nvars(),
            found: x.len(),
        });
    }
    // derivs[n] = D_x^n f
    let mut derivs = vec![f.clone()];
    for _ in 0..d {
        let next = derivs.last().expect("nonempty").directional_derivative(x);
        derivs.push(next);
    }
    let entries = (0..=d)
        .map(|i| {
            let w = factorial::<C>(i) / factorial::<C>(d - i);
            derivs[(d - i) as usize].scale(&w)
        })
        .collect();
    Ok(PolarCoefficients { degree: d, entries })
}
