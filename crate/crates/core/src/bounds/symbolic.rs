//! The bounding polynomials obtained by composing the closed forms with
//! floors dropped.

use std::sync::OnceLock;

use num_bigint::BigInt;

use crate::polyring::{named_vars, parse_poly, MultiPoly, Vars};
use crate::scalar::{rat, Rational};

/// Published expansion of `q(j, m2, m3, m4)`, transcribed term by term in
/// print order.
pub const APPENDIX_Q: &str = "\
1/128*m4^8 + 1/16*j*m4^7 + 1/96*m4^7 + 3/16*j^2*m4^6 + 5/48*j*m4^6 + 1/16*m3*m4^6
 + 17/576*m4^6 + 1/4*j^3*m4^5 + 17/48*j^2*m4^5 + 11/48*j*m4^5 + 5/48*m3*m4^5
 + 3/8*j*m3*m4^5 + 1/48*m4^5 + 1/8*j^4*m4^4 + 1/2*j^3*m4^4 + 29/48*j^2*m4^4
 + 3/16*m3^2*m4^4 + 11/48*j*m4^4 + 1/8*m2*m4^4 + 3/4*j^2*m3*m4^4 + 1/6*m3*m4^4
 + 17/24*j*m3*m4^4 + 169/1152*m4^4 + 1/4*j^4*m4^3 + 7/12*j^3*m4^3 + 31/48*j^2*m4^3
 + 7/24*m3^2*m4^3 + 3/4*j*m3^2*m4^3 + 17/24*j*m4^3 + 1/12*m2*m4^3 + 1/2*j*m2*m4^3
 + 1/2*j^3*m3*m4^3 + 3/2*j^2*m3*m4^3 + 3/16*m3*m4^3 + 23/24*j*m3*m4^3 + 3/32*m4^3
 + 1/8*j^4*m4^2 + 1/2*j^3*m4^2 + 1/4*m3^3*m4^2 + 23/24*j^2*m4^2 + 3/4*j^2*m3^2*m4^2
 + 5/16*m3^2*m4^2 + 5/4*j*m3^2*m4^2 + 2/3*j*m4^2 + 1/2*j^2*m2*m4^2 + 3/8*m2*m4^2
 + 1/2*j*m2*m4^2 + j^3*m3*m4^2 + 3/2*j^2*m3*m4^2 + 25/48*m3*m4^2 + 25/24*j*m3*m4^2
 + 1/2*m2*m3*m4^2 + 91/288*m4^2 + 1/6*j^3*m4 + 1/4*m3^3*m4 + 1/2*j*m3^3*m4
 + 3/4*j^2*m4 + 5/4*j^2*m3^2*m4 + 5/24*m3^2*m4 + j*m3^2*m4 + j*m4 + 1/2*j^2*m2*m4
 + j*m2*m4 + 5/12*m2*m4 + 1/2*j^3*m3*m4 + 5/4*j^2*m3*m4 + 17/12*j*m3*m4
 + 1/2*m2*m3*m4 + j*m2*m3*m4 + 11/24*m3*m4 + 3/8*m4 + 1/8*m3^4 + 1/2*j*m3^3
 + 1/12*m3^3 + 1/2*m2^2 + 1/2*j^2*m3^2 + 1/2*j*m3^2 + 1/2*m2*m3^2 + 3/8*m3^2 + j
 + j*m2 + 1/2*m2 + 1/2*j^2*m3 + j*m3 + j*m2*m3 + 1/2*m2*m3 + 5/12*m3 + 1/4";

type P = MultiPoly<Rational>;

fn q_vars() -> Vars {
    named_vars(&["j", "m2", "m3", "m4"])
}

fn c(vars: &Vars, n: i64, d: i64) -> P {
    MultiPoly::constant(vars.clone(), rat(n, d))
}

/// `C(x, k)` as a polynomial in `x`.
fn binom(x: &P, k: i64) -> P {
    let mut acc = c(x.vars(), 1, 1);
    for i in 0..k {
        acc = &acc * &(x - &c(x.vars(), i, 1));
    }
    let fact: i64 = (1..=k).product();
    acc.scale(&rat(1, fact))
}

fn f0q(a: &P) -> P {
    let v = a.vars();
    let u = &(a + &c(v, 1, 1)).scale(&rat(1, 2));
    let w = a.scale(&rat(1, 2));
    &(u * u) + &(&w * &w)
}

fn f0qc(a: &P, b: &P) -> P {
    let v = a.vars();
    let extra = &(b * &(&(&a.scale(&rat(3, 1)) + &(b * b)) + &c(v, 2, 1))).scale(&rat(1, 3));
    &f0q(&(a + &binom(b, 2))) + extra
}

fn f0full(a: &P, b: &P, d: &P) -> P {
    let v = a.vars();
    let two = c(v, 2, 1);
    let a2 = &(a + &(b * d)) + &(&two * &binom(&(d + &c(v, 1, 1)), 3));
    let b2 = b + &binom(d, 2);
    let quart = (&(&(d * &(d + &c(v, 3, 1))) * &(&(&(d * d) - d) + &two))).scale(&rat(1, 8));
    &(&(&f0qc(&a2, &b2) + &(a * d)) + &(b * &binom(&(d + &c(v, 1, 1)), 2))) + &quart
}

fn build_q() -> P {
    let v = q_vars();
    let j = MultiPoly::var(v.clone(), 0);
    let m2 = MultiPoly::var(v.clone(), 1);
    let m3 = MultiPoly::var(v.clone(), 2);
    let m4 = MultiPoly::var(v.clone(), 3);
    let one = c(&v, 1, 1);
    let cj1 = binom(&(&j + &one), 2);
    let cj2 = binom(&(&j + &c(&v, 2, 1)), 3);
    let a = &(&m2 + &(&j * &m3)) + &(&cj1 * &m4);
    let b = &m3 + &(&j * &m4);
    let shift = &(&(&j + &(&j * &m2)) + &(&cj1 * &m3)) + &(&cj2 * &m4);
    &f0full(&a, &b, &m4) + &shift
}

/// `q(j, m2, m3, m4)`, expanded exactly. Variables are named `j, m2, m3, m4`.
pub fn q_polynomial() -> P {
    static Q: OnceLock<P> = OnceLock::new();
    Q.get_or_init(build_q).clone()
}

/// `p(m2, m3, m4) = q(0, m2, m3, m4)`, over variables `m2, m3, m4`.
pub fn p_polynomial() -> P {
    let target = named_vars(&["m2", "m3", "m4"]);
    let zero = Rational::from_integer(BigInt::from(0));
    let one = Rational::from_integer(BigInt::from(1));
    let matrix: Vec<Vec<Rational>> = (0..4)
        .map(|i| {
            (0..3)
                .map(|k| if i == k + 1 { one.clone() } else { zero.clone() })
                .collect()
        })
        .collect();
    q_polynomial()
        .substitute_linear(&matrix, target)
        .expect("fixed dimensions")
}

/// The transcription [`APPENDIX_Q`] as a polynomial.
pub fn appendix_q_polynomial() -> P {
    parse_poly(APPENDIX_Q, &q_vars()).expect("transcription parses")
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientMismatch {
    pub monomial: String,
    pub computed: Rational,
    pub transcribed: Rational,
}

/// Monomials whose coefficient differs between the symbolic composition and
/// the transcription. Empty when they agree.
pub fn compare_with_appendix() -> Vec<CoefficientMismatch> {
    let q = q_polynomial();
    let t = appendix_q_polynomial();
    let diff = &q - &t;
    diff.terms()
        .rev()
        .map(|(m, _)| {
            let mono = MultiPoly::from_terms(q.vars().clone(), [(m.clone(), rat(1, 1))]);
            CoefficientMismatch {
                monomial: mono.to_string(),
                computed: q.coeff(m.exponents()),
                transcribed: t.coeff(m.exponents()),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selected_coefficients() {
        let q = q_polynomial();
        assert_eq!(q.total_degree(), Some(8));
        assert_eq!(q.num_terms(), 88);
        assert_eq!(q.coeff(&[0, 0, 0, 8]), rat(1, 128));
        assert_eq!(q.coeff(&[0, 0, 4, 0]), rat(1, 8));
        assert_eq!(q.coeff(&[0, 0, 0, 0]), rat(1, 4));
        assert_eq!(q.coeff(&[0, 2, 0, 0]), rat(1, 2));
    }

    #[test]
    fn transcription_matches() {
        assert_eq!(appendix_q_polynomial().num_terms(), 88);
        assert_eq!(compare_with_appendix(), vec![]);
    }

    #[test]
    fn p_restrictions() {
        let p = p_polynomial();
        assert_eq!(p.total_degree(), Some(8));
        let v = p.vars().clone();
        let zero = rat(0, 1);
        let one = rat(1, 1);
        let only = |keep: &[usize]| -> Vec<Vec<Rational>> {
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|k| if i == k && keep.contains(&i) { one.clone() } else { zero.clone() })
                        .collect()
                })
                .collect()
        };
        let p23 = p.substitute_linear(&only(&[0, 1]), v.clone()).unwrap();
        assert_eq!(p23.total_degree(), Some(4));
        let p2 = p.substitute_linear(&only(&[0]), v.clone()).unwrap();
        // (m2+1)^2/4 + m2^2/4
        assert_eq!(p2, parse_poly("1/2*m2^2 + 1/2*m2 + 1/4", &v).unwrap());
    }
}
