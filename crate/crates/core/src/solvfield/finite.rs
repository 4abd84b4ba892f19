//! Finite fields `F_p` and towers of extensions `F_p[s]/(h)` built on demand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::FieldError;
use crate::polyring::UniPoly;
use crate::scalar::{Field, Rational};

/// Largest extension degree a tower may reach.
pub const TOWER_CAP: usize = 256;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    acc
}

fn invm(a: u64, p: u64) -> u64 {
    assert!(a % p != 0, "inverse of zero in F_{p}");
    powm(a, p - 2, p)
}

// Dense polynomials over F_p, low degree first, no trailing zeros.

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn padd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn psub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
            .collect(),
    )
}

fn pscale(a: &[u64], c: u64, p: u64) -> Vec<u64> {
    trim(a.iter().map(|&x| mulm(x, c, p)).collect())
}

fn pmul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut acc = vec![0u128; a.len() + b.len() - 1];
    let pp = p as u128;
    let limit = u128::MAX / 2;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let slot = &mut acc[i + j];
            *slot += x as u128 * y as u128;
            if *slot > limit {
                *slot %= pp;
            }
        }
    }
    trim(acc.into_iter().map(|x| (x % pp) as u64).collect())
}

/// Remainder modulo a monic polynomial.
fn preduce(mut v: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let n = m.len() - 1;
    while v.len() > n {
        let top = v.len() - 1;
        let c = v[top];
        if c != 0 {
            let neg = p - c;
            for i in 0..n {
                let k = top - n + i;
                v[k] = ((v[k] as u128 + neg as u128 * m[i] as u128) % p as u128) as u64;
            }
        }
        v.pop();
    }
    trim(v)
}

fn pdivrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let b = trim(b.to_vec());
    assert!(!b.is_empty(), "polynomial division by zero");
    let inv = invm(*b.last().expect("nonzero"), p);
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![0u64; r.len() - db];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = mulm(*r.last().expect("nonzero"), inv, p);
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulm(c, bi, p)) % p;
        }
        r = trim(r);
    }
    (trim(q), r)
}

fn pmonic(a: &[u64], p: u64) -> Vec<u64> {
    match a.last() {
        None => vec![],
        Some(&l) => pscale(a, invm(l, p), p),
    }
}

fn pgcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = pdivrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    pmonic(&a, p)
}

/// `a^-1 mod m` for `a` coprime to `m`.
fn pinvmod(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let (mut r0, mut r1) = (m.to_vec(), trim(a.to_vec()));
    let (mut t0, mut t1): (Vec<u64>, Vec<u64>) = (vec![], vec![1]);
    while !r1.is_empty() {
        let (q, r) = pdivrem(&r0, &r1, p);
        let t = psub(&t0, &pmul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        t0 = std::mem::replace(&mut t1, t);
    }
    assert_eq!(r0.len(), 1, "element is not invertible modulo the tower");
    let c = invm(r0[0], p);
    preduce(pscale(&t0, c, p), m, p)
}

fn ppowmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = preduce(vec![1], m, p);
    let mut base = preduce(a.to_vec(), m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = preduce(pmul(&acc, &base, p), m, p);
        }
        e >>= 1;
        if e > 0 {
            base = preduce(pmul(&base, &base, p), m, p);
        }
    }
    acc
}

/// Rabin's test for a monic polynomial over `F_p`.
pub fn is_irreducible_mod_p(h: &[u64], p: u64) -> bool {
    let h = trim(h.to_vec());
    if h.len() < 2 {
        return false;
    }
    let n = h.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    // x^(p^k) mod h for k = 0..=n
    let mut powers = vec![preduce(x.clone(), &h, p)];
    for _ in 0..n {
        let last = powers.last().expect("nonempty");
        powers.push(ppowmod(last, p, &h, p));
    }
    if psub(&powers[n], &preduce(x.clone(), &h, p), p) != Vec::<u64>::new() {
        return false;
    }
    let mut m = n;
    let mut r = 2;
    while m > 1 {
        if m % r == 0 {
            let g = pgcd(&psub(&powers[n / r], &x, p), &h, p);
            if g.len() != 1 {
                return false;
            }
            while m % r == 0 {
                m /= r;
            }
        }
        r += 1;
    }
    true
}

/// One level of an extension tower: `F_p[s]/(modulus)`.
pub struct Tower {
    p: u64,
    degree: usize,
    modulus: Vec<u64>,
    depth: usize,
    /// `frobenius[j] = s^(j p)`.
    frobenius: Vec<Vec<u64>>,
    /// Parent tower and images of its powers `t^i`.
    parent: Option<(Arc<Tower>, Vec<Vec<u64>>)>,
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tower(F_{}^{}, depth {})", self.p, self.degree, self.depth)
    }
}

impl Tower {
    fn build(p: u64, modulus: Vec<u64>, parent: Option<(Arc<Tower>, Vec<u64>)>) -> Tower {
        let degree = modulus.len() - 1;
        let sp = ppowmod(&[0, 1], p, &modulus, p);
        let mut frobenius = Vec::with_capacity(degree);
        let mut cur = vec![1];
        for _ in 0..degree {
            frobenius.push(cur.clone());
            cur = preduce(pmul(&cur, &sp, p), &modulus, p);
        }
        let (depth, parent) = match parent {
            None => (1, None),
            Some((t, image)) => {
                let mut cols = Vec::with_capacity(t.degree);
                let mut cur = vec![1];
                for _ in 0..t.degree {
                    cols.push(cur.clone());
                    cur = preduce(pmul(&cur, &image, p), &modulus, p);
                }
                (t.depth + 1, Some((t, cols)))
            }
        };
        Tower {
            p,
            degree,
            modulus,
            depth,
            frobenius,
            parent,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    /// Monic modulus, low degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn parent(&self) -> Option<&Arc<Tower>> {
        self.parent.as_ref().map(|(t, _)| t)
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        preduce(pmul(a, b, self.p), &self.modulus, self.p)
    }

    fn frob(&self, a: &[u64]) -> Vec<u64> {
        let mut acc = vec![0u64; self.degree];
        for (j, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (k, &f) in self.frobenius[j].iter().enumerate() {
                acc[k] = (acc[k] + mulm(c, f, self.p)) % self.p;
            }
        }
        trim(acc)
    }

    fn embed_from_parent(&self, a: &[u64]) -> Vec<u64> {
        let (_, cols) = self.parent.as_ref().expect("tower has a parent");
        let mut acc = vec![0u64; self.degree];
        for (i, &c) in a.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (k, &f) in cols[i].iter().enumerate() {
                acc[k] = (acc[k] + mulm(c, f, self.p)) % self.p;
            }
        }
        trim(acc)
    }
}

fn same(a: Option<&Arc<Tower>>, b: Option<&Arc<Tower>>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => Arc::ptr_eq(x, y),
        _ => false,
    }
}

fn lift(c: &[u64], from: Option<&Arc<Tower>>, to: &Arc<Tower>) -> Vec<u64> {
    let mut path = Vec::new();
    let mut cur = Some(to.clone());
    while !same(cur.as_ref(), from) {
        let t = cur.expect("elements from unrelated towers");
        cur = t.parent().cloned();
        path.push(t);
    }
    let mut v = c.to_vec();
    for t in path.iter().rev() {
        if t.parent.is_some() {
            v = t.embed_from_parent(&v);
        }
    }
    v
}

/// Element of `F_P` or of an extension tower over it.
///
/// Elements with a constant representative drop their tower, so equality and
/// mixing with base-field values stay cheap.
#[derive(Clone)]
pub struct Fq<const P: u64> {
    c: Vec<u64>,
    tower: Option<Arc<Tower>>,
}

pub type F5 = Fq<5>;
pub type F7 = Fq<7>;

impl<const P: u64> Fq<P> {
    pub fn new(n: u64) -> Self {
        Fq {
            c: trim(vec![n % P]),
            tower: None,
        }
    }

    fn from_parts(c: Vec<u64>, tower: Option<Arc<Tower>>) -> Self {
        let c = trim(c);
        let tower = if c.len() <= 1 { None } else { tower };
        Fq { c, tower }
    }

    /// Coefficients in the tower generator, low degree first.
    pub fn coefficients(&self) -> &[u64] {
        &self.c
    }

    pub fn tower(&self) -> Option<&Arc<Tower>> {
        self.tower.as_ref()
    }

    /// Value in `F_P` when the element lies in the prime field.
    pub fn as_base(&self) -> Option<u64> {
        match self.c.len() {
            0 => Some(0),
            1 => Some(self.c[0]),
            _ => None,
        }
    }

    /// Representative in `tower`, which must contain this element's tower.
    pub fn lift_to(&self, tower: &Arc<Tower>) -> Vec<u64> {
        lift(&self.c, self.tower.as_ref(), tower)
    }

    fn align(&self, o: &Self) -> (Vec<u64>, Vec<u64>, Option<Arc<Tower>>) {
        match (&self.tower, &o.tower) {
            (None, None) => (self.c.clone(), o.c.clone(), None),
            (Some(a), Some(b)) if Arc::ptr_eq(a, b) => (self.c.clone(), o.c.clone(), Some(a.clone())),
            (a, b) => {
                let deeper = match (a, b) {
                    (Some(x), Some(y)) => {
                        if x.depth >= y.depth {
                            x
                        } else {
                            y
                        }
                    }
                    (Some(x), None) | (None, Some(x)) => x,
                    (None, None) => unreachable!(),
                }
                .clone();
                (self.lift_to(&deeper), o.lift_to(&deeper), Some(deeper))
            }
        }
    }

    /// `self^P`.
    pub fn frobenius(&self) -> Self {
        match &self.tower {
            None => self.clone(),
            Some(t) => Fq::from_parts(t.frob(&self.c), Some(t.clone())),
        }
    }

    fn cmp_key(&self, o: &Self) -> Ordering {
        let (a, b, _) = self.align(o);
        a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
    }
}

impl<const P: u64> fmt::Debug for Fq<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.tower {
            None => write!(f, "Fq<{P}>({})", self.c.first().copied().unwrap_or(0)),
            Some(t) => write!(f, "Fq<{P}>({:?} in degree {})", self.c, t.degree),
        }
    }
}

impl<const P: u64> fmt::Display for Fq<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.len() <= 1 {
            return write!(f, "{}", self.c.first().copied().unwrap_or(0));
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "s".into(),
                (1, c) => format!("{c}*s"),
                (i, 1) => format!("s^{i}"),
                (i, c) => format!("{c}*s^{i}"),
            })
            .collect();
        write!(f, "({})", terms.join(" + "))
    }
}

impl<const P: u64> PartialEq for Fq<P> {
    fn eq(&self, o: &Self) -> bool {
        if self.tower.is_none() && o.tower.is_none() {
            return self.c == o.c;
        }
        let (a, b, _) = self.align(o);
        a == b
    }
}

impl<const P: u64> Eq for Fq<P> {}

impl<const P: u64> Add for Fq<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let (a, b, t) = self.align(&o);
        Fq::from_parts(padd(&a, &b, P), t)
    }
}

impl<const P: u64> Sub for Fq<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        let (a, b, t) = self.align(&o);
        Fq::from_parts(psub(&a, &b, P), t)
    }
}

impl<const P: u64> Neg for Fq<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Fq::from_parts(psub(&[], &self.c, P), self.tower)
    }
}

impl<const P: u64> Mul for Fq<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b, t) = self.align(&o);
        let c = match &t {
            None => pmul(&a, &b, P),
            Some(t) => t.mul(&a, &b),
        };
        Fq::from_parts(c, t)
    }
}

impl<const P: u64> Div for Fq<P> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.inv()
    }
}

impl<const P: u64> Zero for Fq<P> {
    fn zero() -> Self {
        Fq {
            c: vec![],
            tower: None,
        }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
}

impl<const P: u64> One for Fq<P> {
    fn one() -> Self {
        Fq::new(1)
    }
}

fn residue(n: &num_bigint::BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&num_bigint::BigInt::from(p));
    r.to_u64().expect("residue fits")
}

impl<const P: u64> Field for Fq<P> {
    fn from_rational(q: &Rational) -> Self {
        Self::try_from_rational(q).expect("denominator divisible by the characteristic")
    }

    fn try_from_rational(q: &Rational) -> Option<Self> {
        let d = residue(q.denom(), P);
        if d == 0 {
            return None;
        }
        Some(Fq::new(mulm(residue(q.numer(), P), invm(d, P), P)))
    }

    fn magnitude(&self) -> f64 {
        if self.c.is_empty() {
            0.0
        } else {
            1.0
        }
    }

    fn characteristic() -> u64 {
        P
    }

    fn inv(&self) -> Self {
        assert!(!self.c.is_empty(), "inverse of zero");
        match &self.tower {
            None => Fq::new(invm(self.c[0], P)),
            Some(t) => Fq::from_parts(pinvmod(&self.c, &t.modulus, P), Some(t.clone())),
        }
    }
}

/// Extension tower state shared by all elements a finite solve creates.
#[derive(Debug, Clone)]
pub struct Extender<const P: u64> {
    top: Option<Arc<Tower>>,
}

impl<const P: u64> Default for Extender<P> {
    fn default() -> Self {
        Extender { top: None }
    }
}

type Poly<const P: u64> = UniPoly<Fq<P>>;

impl<const P: u64> Extender<P> {
    pub fn new() -> Result<Self, FieldError> {
        if P == 2 || P == 3 || !is_prime(P) {
            return Err(FieldError::BadCharacteristic(P));
        }
        Ok(Self::default())
    }

    pub fn top(&self) -> Option<&Arc<Tower>> {
        self.top.as_ref()
    }

    /// Extension degree of the current field over `F_P`.
    pub fn degree(&self) -> usize {
        self.top.as_ref().map_or(1, |t| t.degree)
    }

    pub fn order(&self) -> BigUint {
        BigUint::from(P).pow(self.degree() as u32)
    }

    pub fn random_element(&self, rng: &mut ChaCha8Rng) -> Fq<P> {
        let c: Vec<u64> = (0..self.degree()).map(|_| rng.gen_range(0..P)).collect();
        Fq::from_parts(c, self.top.clone())
    }

    /// `x^(q^k) mod g` for `q = P^degree`, applying the coefficientwise
    /// Frobenius to reuse `x^P mod g`.
    fn x_power_q(&self, g: &Poly<P>, k: usize) -> Poly<P> {
        let x = Poly::<P>::x();
        let r1 = x.powmod(&BigUint::from(P), g);
        let mut r = x.rem(g);
        for _ in 0..k * self.degree() {
            let sigma = r.map(|c| c.frobenius());
            // Horner in r1
            let mut acc = Poly::<P>::zero();
            for c in sigma.coeffs().iter().rev() {
                acc = acc.mul(&r1).add(&Poly::constant(c.clone())).rem(g);
            }
            r = acc;
        }
        r
    }

    /// Distinct roots of `g` in the current field, sorted.
    pub fn roots_in_field(&self, g: &Poly<P>, rng: &mut ChaCha8Rng) -> Vec<Fq<P>> {
        if g.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let g = g.monic();
        let xq = self.x_power_q(&g, 1);
        let h = xq.sub(&Poly::x()).gcd(&g);
        let mut out = Vec::new();
        self.split_linear(h, rng, &mut out);
        out.sort_by(|a, b| a.cmp_key(b));
        out
    }

    fn split_linear(&self, h: Poly<P>, rng: &mut ChaCha8Rng, out: &mut Vec<Fq<P>>) {
        match h.degree() {
            None | Some(0) => {}
            Some(1) => out.push(-h.coeff(0) / h.coeff(1)),
            Some(d) => {
                let e = (self.order() - 1u32) / 2u32;
                loop {
                    let a = self.random_element(rng);
                    let probe = Poly::new(vec![a, Fq::one()]);
                    let w = probe.powmod(&e, &h).sub(&Poly::constant(Fq::one()));
                    let f = w.gcd(&h);
                    let fd = f.degree().unwrap_or(0);
                    if fd > 0 && fd < d {
                        let other = h.divrem(&f).0;
                        self.split_linear(f, rng, out);
                        self.split_linear(other, rng, out);
                        return;
                    }
                }
            }
        }
    }

    /// An irreducible factor of smallest degree of a root-free `g`.
    fn smallest_factor(&self, g: &Poly<P>, rng: &mut ChaCha8Rng) -> Poly<P> {
        let g = g.monic();
        let sqf = g.divrem(&g.gcd(&g.derivative())).0.monic();
        if sqf.degree() != Some(4) {
            return sqf;
        }
        let x2 = self.x_power_q(&sqf, 2);
        let h2 = x2.sub(&Poly::x()).gcd(&sqf);
        match h2.degree() {
            Some(2) => h2,
            Some(4) => {
                let e = (self.order().pow(2u32) - 1u32) / 2u32;
                loop {
                    let a = Poly::new((0..4).map(|_| self.random_element(rng)).collect());
                    if a.degree().unwrap_or(0) == 0 {
                        continue;
                    }
                    let w = a.powmod(&e, &h2).sub(&Poly::constant(Fq::one()));
                    let f = w.gcd(&h2);
                    if f.degree() == Some(2) {
                        return f;
                    }
                }
            }
            _ => sqf,
        }
    }

    /// Grows the tower so that the irreducible `phi` acquires a root, and
    /// returns that root.
    pub fn extend(&mut self, phi: &Poly<P>, rng: &mut ChaCha8Rng) -> Result<Fq<P>, FieldError> {
        let phi = phi.monic();
        let d = phi.degree().expect("nonzero factor");
        let n = self.degree();
        let target = n * d;
        if target > TOWER_CAP {
            return Err(FieldError::TowerCapExceeded(target));
        }
        let Some(top) = self.top.clone() else {
            let modulus: Vec<u64> = phi.coeffs().iter().map(|c| c.as_base().expect("prime field coefficient")).collect();
            let tower = Arc::new(Tower::build(P, modulus, None));
            self.top = Some(tower.clone());
            return Ok(Fq::from_parts(vec![0, 1], Some(tower)));
        };
        let phi_c: Vec<Vec<u64>> = phi.coeffs().iter().map(|c| c.lift_to(&top)).collect();
        let algebra = Algebra {
            tower: &top,
            phi: &phi_c,
        };
        for _ in 0..64 {
            let gamma: Vec<Vec<u64>> = (0..d)
                .map(|_| (0..n).map(|_| rng.gen_range(0..P)).collect())
                .collect();
            let gamma: Vec<Vec<u64>> = gamma.into_iter().map(trim).collect();
            if let Some((modulus, t_img, y_img)) = algebra.primitive(&gamma, target) {
                let tower = Arc::new(Tower::build(P, modulus, Some((top.clone(), t_img))));
                self.top = Some(tower.clone());
                return Ok(Fq::from_parts(y_img, Some(tower)));
            }
        }
        Err(FieldError::Numeric("no primitive element found for the extension".into()))
    }

    /// All roots of `g` with multiplicity, extending the tower as needed.
    /// Roots already in the field come first.
    pub fn all_roots(&mut self, g: &Poly<P>, rng: &mut ChaCha8Rng) -> Result<Vec<Fq<P>>, FieldError> {
        let mut rest = match g.degree() {
            None => return Err(FieldError::ZeroPolynomial),
            Some(0) => return Ok(vec![]),
            Some(d) if d > 4 => return Err(FieldError::DegreeOutOfRange(d)),
            Some(_) => g.monic(),
        };
        let mut out = Vec::new();
        loop {
            for r in self.roots_in_field(&rest, rng) {
                let lin = Poly::new(vec![-r.clone(), Fq::one()]);
                loop {
                    let (q, rem) = rest.divrem(&lin);
                    if !rem.is_zero() {
                        break;
                    }
                    out.push(r.clone());
                    rest = q;
                }
            }
            if rest.degree().unwrap_or(0) == 0 {
                return Ok(out);
            }
            let phi = self.smallest_factor(&rest, rng);
            self.extend(&phi, rng)?;
        }
    }

    /// One root of `g`, preferring the current field and otherwise growing
    /// it by the smallest irreducible factor.
    pub fn some_root(&mut self, g: &Poly<P>, rng: &mut ChaCha8Rng) -> Result<Fq<P>, FieldError> {
        match g.degree() {
            None => return Err(FieldError::ZeroPolynomial),
            Some(0) => return Err(FieldError::DegreeOutOfRange(0)),
            Some(d) if d > 4 => return Err(FieldError::DegreeOutOfRange(d)),
            _ => {}
        }
        let rs = self.roots_in_field(g, rng);
        if !rs.is_empty() {
            let i = rng.gen_range(0..rs.len());
            return Ok(rs[i].clone());
        }
        let phi = self.smallest_factor(g, rng);
        self.extend(&phi, rng)
    }
}

/// `K[y]/(phi)` with `K` a tower level, flattened over `F_p` as
/// `index = b * n + a` for the basis `t^a y^b`.
struct Algebra<'a> {
    tower: &'a Tower,
    phi: &'a [Vec<u64>],
}

impl Algebra<'_> {
    fn d(&self) -> usize {
        self.phi.len() - 1
    }

    fn mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let p = self.tower.p;
        let d = self.d();
        let mut prod = vec![Vec::new(); 2 * d - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                if x.is_empty() || y.is_empty() {
                    continue;
                }
                prod[i + j] = padd(&prod[i + j], &self.tower.mul(x, y), p);
            }
        }
        for k in (d..prod.len()).rev() {
            let c = std::mem::take(&mut prod[k]);
            if c.is_empty() {
                continue;
            }
            for i in 0..d {
                let t = self.tower.mul(&c, &self.phi[i]);
                prod[k - d + i] = psub(&prod[k - d + i], &t, p);
            }
        }
        prod.truncate(d);
        prod
    }

    fn flatten(&self, a: &[Vec<u64>]) -> Vec<u64> {
        let n = self.tower.degree;
        let mut v = vec![0u64; n * self.d()];
        for (b, c) in a.iter().enumerate() {
            for (i, &x) in c.iter().enumerate() {
                v[b * n + i] = x;
            }
        }
        v
    }

    /// Minimal polynomial of `gamma` over `F_p` when it has full degree,
    /// together with the images of the tower generator and of `y`.
    fn primitive(&self, gamma: &[Vec<u64>], target: usize) -> Option<(Vec<u64>, Vec<u64>, Vec<u64>)> {
        let p = self.tower.p;
        let d = self.d();
        let mut one = vec![Vec::new(); d];
        one[0] = vec![1];
        let mut cols = Vec::with_capacity(target + 1);
        let mut cur = one;
        for _ in 0..=target {
            cols.push(self.flatten(&cur));
            cur = self.mul(&cur, gamma);
        }
        let mut t = vec![Vec::new(); d];
        t[0] = vec![0, 1];
        let mut y = vec![Vec::new(); d];
        y[1] = vec![1];
        let rhs = [cols[target].clone(), self.flatten(&t), self.flatten(&y)];
        let sol = solve_mod_p(&cols[..target], &rhs, p)?;
        let mut modulus: Vec<u64> = sol[0].iter().map(|&c| (p - c) % p).collect();
        modulus.push(1);
        Some((modulus, trim(sol[1].clone()), trim(sol[2].clone())))
    }
}

/// Solves `A x = b` for each right-hand side, `A` given by columns. `None`
/// when `A` is singular.
fn solve_mod_p(cols: &[Vec<u64>], rhs: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = cols.len();
    let w = n + rhs.len();
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|r| {
            let mut row: Vec<u64> = cols.iter().map(|c| c[r]).collect();
            row.extend(rhs.iter().map(|b| b[r]));
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        let inv = invm(m[col][col], p);
        for x in m[col].iter_mut() {
            *x = mulm(*x, inv, p);
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col] == 0 {
                continue;
            }
            let f = row[col];
            for k in col..w {
                row[k] = (row[k] + p - mulm(f, pivot_row[k], p)) % p;
            }
        }
    }
    Some((0..rhs.len()).map(|j| (0..n).map(|r| m[r][n + j]).collect()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn poly<const P: u64>(cs: &[i64]) -> Poly<P> {
        UniPoly::new(cs.iter().map(|&c| Fq::<P>::from_i64(c)).collect())
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn characteristic_guard() {
        assert_eq!(Extender::<2>::new().unwrap_err(), FieldError::BadCharacteristic(2));
        assert_eq!(Extender::<3>::new().unwrap_err(), FieldError::BadCharacteristic(3));
        assert_eq!(Extender::<9>::new().unwrap_err(), FieldError::BadCharacteristic(9));
        assert!(Extender::<5>::new().is_ok());
    }

    #[test]
    fn prime_field_arithmetic() {
        let a = F7::new(3);
        let b = F7::new(5);
        assert_eq!(a.clone() * b.clone(), F7::new(1));
        assert_eq!(a.clone() / b.clone(), F7::new(2));
        assert_eq!(-a.clone(), F7::new(4));
        assert_eq!(F7::from_rational(&crate::scalar::rat(1, 2)), F7::new(4));
        assert!(F7::try_from_rational(&crate::scalar::rat(1, 7)).is_none());
    }

    #[test]
    fn square_root_of_two_over_f5() {
        let mut ext = Extender::<5>::new().unwrap();
        let mut r = rng();
        let g = poly::<5>(&[-2, 0, 1]);
        assert!(ext.roots_in_field(&g, &mut r).is_empty());
        let roots = ext.all_roots(&g, &mut r).unwrap();
        assert_eq!(ext.degree(), 2);
        assert_eq!(roots.len(), 2);
        for x in &roots {
            assert_eq!(x.clone() * x.clone(), F5::new(2));
        }
        assert!(roots[0] != roots[1]);
        assert!(is_irreducible_mod_p(ext.top().unwrap().modulus(), 5));
    }

    #[test]
    fn split_case_leaves_tower() {
        let mut ext = Extender::<7>::new().unwrap();
        let roots = ext.all_roots(&poly::<7>(&[2, -3, 1]), &mut rng()).unwrap();
        assert_eq!(roots, vec![F7::new(1), F7::new(2)]);
        assert_eq!(ext.degree(), 1);
    }

    #[test]
    fn t4_plus_1_over_f5() {
        let mut ext = Extender::<5>::new().unwrap();
        let roots = ext.all_roots(&poly::<5>(&[1, 0, 0, 0, 1]), &mut rng()).unwrap();
        assert_eq!(ext.degree(), 2);
        assert_eq!(roots.len(), 4);
        for x in &roots {
            assert_eq!(Field::pow(x, 4), F5::new(4));
        }
    }

    #[test]
    fn nested_extensions_stay_irreducible() {
        let mut ext = Extender::<7>::new().unwrap();
        let mut r = rng();
        // x^3 - 2 has no root mod 7 (2 is not a cube)
        let a = ext.some_root(&poly::<7>(&[-2, 0, 0, 1]), &mut r).unwrap();
        assert_eq!(ext.degree(), 3);
        // 3 is a non-residue mod 7 and stays one in the odd-degree extension
        let c = F7::new(3) * a.clone() * a.clone();
        let g = UniPoly::new(vec![-c.clone(), Fq::zero(), Fq::one()]);
        let b = ext.some_root(&g, &mut r).unwrap();
        assert_eq!(b.clone() * b.clone(), c);
        assert_eq!(ext.degree(), 6);
        assert!(is_irreducible_mod_p(ext.top().unwrap().modulus(), 7));
        // mixing elements from both levels lifts correctly
        let s = a.clone() + b.clone();
        assert_eq!(s.clone() - b.clone(), a);
        assert_eq!(Field::pow(&a, 3), F7::new(2));
        assert_eq!((a.clone() * b.clone()).inv() * a.clone() * b, F7::one());
    }

    #[test]
    fn multiplicities_and_vieta() {
        let mut ext = Extender::<11>::new().unwrap();
        let g = poly::<11>(&[-2, 0, 1]).mul(&poly::<11>(&[-2, 0, 1]));
        let roots = ext.all_roots(&g, &mut rng()).unwrap();
        assert_eq!(roots.len(), 4);
        let rebuilt = roots
            .iter()
            .fold(UniPoly::constant(Fq::one()), |acc, r| acc.mul(&UniPoly::new(vec![-r.clone(), Fq::one()])));
        assert_eq!(rebuilt, g);
    }

    #[test]
    fn rabin_test() {
        assert!(is_irreducible_mod_p(&[3, 0, 1], 5));
        assert!(!is_irreducible_mod_p(&[1, 0, 1], 5));
        assert!(is_irreducible_mod_p(&[2, 1, 0, 1], 5) == (0..5).all(|x| (x * x * x + x + 2) % 5 != 0));
        assert!(!is_irreducible_mod_p(&[1, 0, 0, 0, 1], 5));
    }
}
