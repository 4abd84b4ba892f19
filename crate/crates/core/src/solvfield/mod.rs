//! Coefficient fields closed under roots of degree at most four: radical
//! towers over the rationals with numeric certificates, and finite-field
//! extension towers.

pub mod bigfloat;
pub mod complex;
mod context;
pub mod finite;
pub mod radical;

pub use bigfloat::BigFloat;
pub use context::{FieldContext, FiniteContext, NumericContext};
pub use finite::{Extender, Fq, Tower, F5, F7};
pub use radical::{CertGraph, CertNode, Radical, RadicalCertificate};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::UniPoly;
    use crate::scalar::Field;
    use proptest::prelude::*;

    fn reconstruct<K: Field>(roots: &[K]) -> UniPoly<K> {
        roots.iter().fold(UniPoly::constant(K::one()), |acc, r| {
            acc.mul(&UniPoly::new(vec![-r.clone(), K::one()]))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn finite_vieta(cs in proptest::collection::vec(-20i64..20, 2..=5), seed in 0u64..1000) {
            let g = UniPoly::new(cs.iter().map(|&c| F7::from_i64(c)).collect::<Vec<_>>());
            prop_assume!(g.degree().unwrap_or(0) >= 1);
            let mut ctx = FiniteContext::<7>::new(seed).unwrap();
            let roots = ctx.solve_univariate(&g).unwrap();
            prop_assert_eq!(roots.len(), g.degree().unwrap());
            prop_assert_eq!(reconstruct(&roots), g.monic());
            if let Some(t) = ctx.extender().top() {
                prop_assert!(finite::is_irreducible_mod_p(t.modulus(), 7));
            }
        }

        #[test]
        fn numeric_vieta_and_stability(cs in proptest::collection::vec(-30i64..30, 2..=5), seed in 0u64..1000) {
            let g = UniPoly::new(cs.iter().map(|&c| Radical::from_i64(c)).collect::<Vec<_>>());
            prop_assume!(g.degree().unwrap_or(0) >= 2);
            let digits = 40;
            let mut ctx = NumericContext::new(digits, seed);
            let roots = ctx.solve_univariate(&g).unwrap();
            prop_assert_eq!(roots.len(), g.degree().unwrap());
            let bits = ctx.graph().bits();
            let lead = g.lead().unwrap().value(bits);
            // e_k of the roots against the coefficients
            let vals: Vec<_> = roots.iter().map(|r| r.value(bits)).collect();
            let mut e = vec![complex::creal(BigFloat::from_int(1, bits))];
            for v in &vals {
                let mut next = e.clone();
                next.push(complex::creal(BigFloat::from_int(0, bits)));
                for k in 1..next.len() {
                    next[k] = next[k].clone() + e[k - 1].clone() * v.clone();
                }
                e = next;
            }
            let d = vals.len();
            let scale = g.coeffs().iter().map(|c| complex::log2_size(&c.value(bits)).unwrap_or(0)).max().unwrap();
            for k in 0..=d {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let want = g.coeff(d - k).value(bits) * complex::creal(BigFloat::from_int(sign, bits));
                let got = e[k].clone() * lead.clone();
                let diff = complex::log2_size(&(got - want));
                prop_assert!(diff.map_or(true, |l| l < scale - 60), "e_{} off: 2^{:?}", k, diff);
            }
            // doubled precision moves each root by less than 10^-digits
            let cert = RadicalCertificate::extract(&roots);
            let lo = cert.eval(digits).unwrap();
            let hi = cert.eval(2 * digits).unwrap();
            for (a, b) in lo.iter().zip(&hi) {
                let size = complex::log2_size(b).unwrap_or(0).max(0);
                let diff = complex::log2_size(&(a.clone() - b.clone()));
                prop_assert!(diff.map_or(true, |l| l < size - 130));
            }
        }
    }
}
