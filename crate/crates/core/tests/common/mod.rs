#![allow(dead_code)]

use oblit_core::polarcone::FormSystem;
use oblit_core::polyring::{var_names, Monomial, Vars};
use oblit_core::scalar::rat;
use oblit_core::{MultiPoly, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Exponent vectors of all monomials of degree `d` in `n` variables.
pub fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    let mut out = Vec::new();
    for a in (0..=d).rev() {
        for mut rest in monomials(n - 1, d - a) {
            rest.insert(0, a);
            out.push(rest);
        }
    }
    out
}

/// A dense form with integer coefficients in `-bound..=bound`.
pub fn random_form(vars: &Vars, d: u32, bound: i64, rng: &mut ChaCha8Rng) -> MultiPoly<Rational> {
    let terms = monomials(vars.len(), d)
        .into_iter()
        .map(|e| (Monomial(e), rat(rng.gen_range(-bound..=bound), 1)));
    MultiPoly::from_terms(vars.clone(), terms)
}

pub fn random_system(n: usize, degrees: &[u32], seed: u64) -> FormSystem<Rational> {
    let vars = var_names("z", n + 1);
    let mut r = rng(seed);
    let forms = degrees.iter().map(|&d| random_form(&vars, d, 9, &mut r)).collect();
    FormSystem::with_degrees(n, forms, degrees.to_vec()).unwrap()
}

/// `f` with every monomial in only the first `k` variables removed, so the
/// span of the first `k` coordinate points lies on it.
pub fn vanish_on_coordinate_span(f: &MultiPoly<Rational>, k: usize) -> MultiPoly<Rational> {
    let terms = f
        .terms()
        .filter(|(m, _)| m.exponents()[k..].iter().any(|&e| e > 0))
        .map(|(m, c)| (m.clone(), c.clone()));
    MultiPoly::from_terms(f.vars().clone(), terms)
}

/// A random unimodular integer matrix (lower times upper unitriangular).
pub fn random_unimodular(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<Rational>> {
    let mut l = vec![vec![rat(0, 1); n]; n];
    let mut u = vec![vec![rat(0, 1); n]; n];
    for i in 0..n {
        l[i][i] = rat(1, 1);
        u[i][i] = rat(1, 1);
        for j in 0..i {
            l[i][j] = rat(rng.gen_range(-2..=2), 1);
            u[j][i] = rat(rng.gen_range(-2..=2), 1);
        }
    }
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| &l[i][k] * &u[k][j]).sum()).collect())
        .collect()
}
