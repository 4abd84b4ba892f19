//! Complex arithmetic at arbitrary precision and the classical formulas for
//! polynomials of degree at most four.

use std::cmp::Ordering;

use num_complex::Complex;
use num_traits::{One, Zero};

use super::bigfloat::BigFloat;

pub type CBig = Complex<BigFloat>;

pub fn cfrom_f64(re: f64, im: f64, prec: u32) -> CBig {
    Complex::new(BigFloat::from_f64(re, prec), BigFloat::from_f64(im, prec))
}

pub fn creal(x: BigFloat) -> CBig {
    Complex::new(x, BigFloat::zero())
}

pub fn with_prec(z: &CBig, prec: u32) -> CBig {
    Complex::new(z.re.clone().with_prec(prec), z.im.clone().with_prec(prec))
}

/// `floor(log2 max(|re|, |im|))`, `None` for zero.
pub fn log2_size(z: &CBig) -> Option<i64> {
    match (z.re.log2_floor(), z.im.log2_floor()) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (a, b) => a.or(b),
    }
}

/// Max-norm, as a real.
pub fn cabs_max(z: &CBig) -> BigFloat {
    let a = z.re.abs();
    let b = z.im.abs();
    if a > b {
        a
    } else {
        b
    }
}

pub fn cabs(z: &CBig) -> BigFloat {
    (z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).sqrt()
}

pub fn to_f64_pair(z: &CBig) -> (f64, f64) {
    (z.re.to_f64(), z.im.to_f64())
}

fn scale_pow2(z: &CBig, k: i64) -> CBig {
    Complex::new(z.re.mul_pow2(k), z.im.mul_pow2(k))
}

/// Principal square root.
pub fn csqrt(z: &CBig, prec: u32) -> CBig {
    if z.is_zero() {
        return Complex::new(BigFloat::zero().with_prec(prec), BigFloat::zero().with_prec(prec));
    }
    let z = with_prec(z, prec);
    let r = cabs(&z);
    let two = BigFloat::from_int(2, prec);
    if !z.re.is_negative() {
        let t = ((r + z.re.clone()) / two.clone()).sqrt();
        let im = z.im.clone() / (t.clone() * two);
        Complex::new(t, im)
    } else {
        let t = ((r - z.re.clone()) / two.clone()).sqrt();
        let re = z.im.abs() / (t.clone() * two);
        let im = if z.im.is_negative() { -t } else { t };
        Complex::new(re, im)
    }
}

/// Principal cube root (argument in `(-pi/3, pi/3]`).
pub fn ccbrt(z: &CBig, prec: u32) -> CBig {
    let Some(size) = log2_size(z) else {
        return Complex::new(BigFloat::zero().with_prec(prec), BigFloat::zero().with_prec(prec));
    };
    let k = size.div_euclid(3);
    let w = scale_pow2(z, -3 * k);
    let (re, im) = to_f64_pair(&w);
    let r = re.hypot(im).cbrt();
    let a = im.atan2(re) / 3.0;
    let mut x = scale_pow2(&cfrom_f64(r * a.cos(), r * a.sin(), prec), k);
    let z = with_prec(z, prec);
    let three = creal(BigFloat::from_int(3, prec));
    for _ in 0..newton_steps(prec) {
        let x2 = x.clone() * x.clone();
        let step = (x2.clone() * x.clone() - z.clone()) / (three.clone() * x2);
        x = x - step;
    }
    x
}

fn newton_steps(prec: u32) -> u32 {
    let mut bits = 40u32;
    let mut n = 2;
    while bits < prec {
        bits *= 2;
        n += 1;
    }
    n
}

/// Value of `coeffs[0] + coeffs[1] t + ...` and its derivative.
fn eval_with_derivative(coeffs: &[CBig], t: &CBig) -> (CBig, CBig) {
    let mut v = CBig::zero();
    let mut d = CBig::zero();
    for c in coeffs.iter().rev() {
        d = d * t.clone() + v.clone();
        v = v * t.clone() + c.clone();
    }
    (v, d)
}

pub fn eval_poly(coeffs: &[CBig], t: &CBig) -> CBig {
    eval_with_derivative(coeffs, t).0
}

fn polish(coeffs: &[CBig], mut t: CBig, prec: u32) -> CBig {
    for _ in 0..newton_steps(prec) + 2 {
        let (v, d) = eval_with_derivative(coeffs, &t);
        if v.is_zero() {
            break;
        }
        let dsize = log2_size(&d);
        let tsize = log2_size(&t).unwrap_or(0).max(0);
        // near a multiple root the derivative vanishes; leave the formula value
        match dsize {
            Some(s) if s > tsize - (prec as i64) / 3 => {}
            _ => break,
        }
        let step = v / d;
        let before = eval_poly(coeffs, &t);
        let cand = t.clone() - step;
        let after = eval_poly(coeffs, &cand);
        if cabs_max(&after) > cabs_max(&before) {
            break;
        }
        t = cand;
    }
    t
}

fn quadratic(a: &CBig, b: &CBig, c: &CBig, prec: u32) -> Vec<CBig> {
    let four = creal(BigFloat::from_int(4, prec));
    let two = creal(BigFloat::from_int(2, prec));
    let disc = b.clone() * b.clone() - four * a.clone() * c.clone();
    let s = csqrt(&disc, prec);
    let p = b.clone() + s.clone();
    let m = b.clone() - s;
    let big = if cabs_max(&p) >= cabs_max(&m) { p } else { m };
    if big.is_zero() {
        let zero = creal(BigFloat::zero().with_prec(prec));
        return vec![zero.clone(), zero];
    }
    let q = -big / two;
    vec![q.clone() / a.clone(), c.clone() / q]
}

fn cubic_depressed(p: &CBig, q: &CBig, prec: u32) -> Vec<CBig> {
    let zero = creal(BigFloat::zero().with_prec(prec));
    if p.is_zero() && q.is_zero() {
        return vec![zero.clone(), zero.clone(), zero];
    }
    let two = creal(BigFloat::from_int(2, prec));
    let three = creal(BigFloat::from_int(3, prec));
    let half_q = q.clone() / two.clone();
    let third_p = p.clone() / three.clone();
    let disc = half_q.clone() * half_q.clone() + third_p.clone() * third_p.clone() * third_p.clone();
    let s = csqrt(&disc, prec);
    let u1 = s.clone() - half_q.clone();
    let u2 = -s - half_q;
    let u = if cabs_max(&u1) >= cabs_max(&u2) { u1 } else { u2 };
    let c = ccbrt(&u, prec);
    let sqrt3 = BigFloat::from_int(3, prec).sqrt();
    let half = BigFloat::from_int(1, prec) / BigFloat::from_int(2, prec);
    let omega = Complex::new(-half.clone(), sqrt3.clone() * half.clone());
    let omega2 = Complex::new(-half.clone(), -(sqrt3 * half));
    [CBig::one(), omega, omega2]
        .into_iter()
        .map(|w| {
            let wc = w * c.clone();
            wc.clone() - third_p.clone() / wc
        })
        .collect()
}

fn quartic_depressed(p: &CBig, q: &CBig, r: &CBig, prec: u32) -> Vec<CBig> {
    let two = creal(BigFloat::from_int(2, prec));
    if q.is_zero() {
        let zs = quadratic(&CBig::one(), p, r, prec);
        let mut out = Vec::new();
        for z in zs {
            let s = csqrt(&z, prec);
            out.push(s.clone());
            out.push(-s);
        }
        return out;
    }
    // 8m^3 + 8p m^2 + (2p^2 - 8r) m - q^2 = 0, monic after dividing by 8
    let eight = creal(BigFloat::from_int(8, prec));
    let b = p.clone();
    let c = (p.clone() * p.clone() * two.clone() - r.clone() * eight.clone()) / eight.clone();
    let d = -(q.clone() * q.clone()) / eight;
    let ms = cubic_roots(&[d, c, b, CBig::one()], prec);
    let m = ms
        .into_iter()
        .max_by(|x, y| cabs_max(x).partial_cmp(&cabs_max(y)).unwrap_or(Ordering::Equal))
        .expect("three resolvent roots");
    let s = csqrt(&(two.clone() * m.clone()), prec);
    let base = p.clone() / two.clone() + m;
    let shift = q.clone() / (two * s.clone());
    let mut out = quadratic(&CBig::one(), &(-s.clone()), &(base.clone() + shift.clone()), prec);
    out.extend(quadratic(&CBig::one(), &s, &(base - shift), prec));
    out
}

fn cubic_roots(c: &[CBig], prec: u32) -> Vec<CBig> {
    // c[3] t^3 + c[2] t^2 + c[1] t + c[0]
    let a = c[3].clone();
    let b = c[2].clone() / a.clone();
    let cc = c[1].clone() / a.clone();
    let d = c[0].clone() / a;
    let three = creal(BigFloat::from_int(3, prec));
    let shift = b.clone() / three.clone();
    let p = cc.clone() - b.clone() * shift.clone();
    let two = creal(BigFloat::from_int(2, prec));
    let q = two * shift.clone() * shift.clone() * shift.clone() - shift.clone() * cc + d;
    cubic_depressed(&p, &q, prec)
        .into_iter()
        .map(|u| u - shift.clone())
        .collect()
}

fn quartic_roots(c: &[CBig], prec: u32) -> Vec<CBig> {
    let a = c[4].clone();
    let b = c[3].clone() / a.clone();
    let cc = c[2].clone() / a.clone();
    let d = c[1].clone() / a.clone();
    let e = c[0].clone() / a;
    let four = creal(BigFloat::from_int(4, prec));
    let shift = b / four;
    let s2 = shift.clone() * shift.clone();
    let six = creal(BigFloat::from_int(6, prec));
    let eight = creal(BigFloat::from_int(8, prec));
    let three = creal(BigFloat::from_int(3, prec));
    // t = u - shift
    let p = cc.clone() - six * s2.clone();
    let q = d.clone() - two_times(&(cc.clone() * shift.clone())) + eight * s2.clone() * shift.clone();
    let r = e - d * shift.clone() + cc * s2.clone() - three * s2.clone() * s2;
    quartic_depressed(&p, &q, &r, prec)
        .into_iter()
        .map(|u| u - shift.clone())
        .collect()
}

fn two_times(z: &CBig) -> CBig {
    z.clone() + z.clone()
}

/// All roots of `coeffs[0] + ... + coeffs[d] t^d`, `1 <= d <= 4`, leading
/// coefficient nonzero, in [`root_order`].
pub fn roots(coeffs: &[CBig], prec: u32) -> Vec<CBig> {
    let coeffs: Vec<CBig> = coeffs.iter().map(|c| with_prec(c, prec)).collect();
    let deg = coeffs.len() - 1;
    let guard = prec + 32;
    let raw = match deg {
        1 => vec![-(coeffs[0].clone() / coeffs[1].clone())],
        2 => quadratic(&coeffs[2], &coeffs[1], &coeffs[0], guard),
        3 => cubic_roots(&coeffs, guard),
        4 => quartic_roots(&coeffs, guard),
        _ => panic!("degree {deg} outside 1..=4"),
    };
    let mut out: Vec<CBig> = raw
        .into_iter()
        .map(|t| with_prec(&polish(&coeffs, with_prec(&t, guard), guard), prec))
        .collect();
    out.sort_by(|a, b| root_order(a, b, prec));
    out
}

/// Descending real part, then descending imaginary part; components closer
/// than about half the working precision count as equal.
pub fn root_order(a: &CBig, b: &CBig, prec: u32) -> Ordering {
    let close = |x: &BigFloat, y: &BigFloat| -> bool {
        let d = x.clone() - y.clone();
        let Some(ld) = d.log2_floor() else {
            return true;
        };
        let scale = x.log2_floor().unwrap_or(0).max(y.log2_floor().unwrap_or(0)).max(0);
        ld < scale - (prec as i64) / 2
    };
    if !close(&a.re, &b.re) {
        return b.re.partial_cmp(&a.re).unwrap_or(Ordering::Equal);
    }
    if !close(&a.im, &b.im) {
        return b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal);
    }
    Ordering::Equal
}

/// True when two consecutive sorted roots are too close in one component to
/// be ordered reliably while still being distinct.
pub fn ambiguous_order(sorted: &[CBig], prec: u32) -> bool {
    sorted.windows(2).any(|w| {
        let (a, b) = (&w[0], &w[1]);
        if root_order(a, b, prec) != Ordering::Equal {
            return false;
        }
        let d = cabs_max(&(a.clone() - b.clone()));
        let scale = log2_size(a).unwrap_or(0).max(0);
        d.log2_floor().is_some_and(|l| l > scale - (prec as i64) / 4)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(cs: &[i64], prec: u32) -> Vec<CBig> {
        cs.iter().map(|&c| creal(BigFloat::from_int(c, prec))).collect()
    }

    fn assert_roots_of(cs: &[i64], prec: u32) -> Vec<CBig> {
        let coeffs = ints(cs, prec);
        let rs = roots(&coeffs, prec);
        assert_eq!(rs.len(), cs.len() - 1);
        for r in &rs {
            let v = eval_poly(&coeffs, r);
            let l = log2_size(&v);
            assert!(l.map_or(true, |l| l < -(prec as i64) / 2), "{cs:?}: residual 2^{l:?}");
        }
        rs
    }

    #[test]
    fn square_and_cube_roots() {
        let z = cfrom_f64(-4.0, 0.0, 200);
        let s = csqrt(&z, 200);
        assert!((s.re.to_f64()).abs() < 1e-30 && (s.im.to_f64() - 2.0).abs() < 1e-30);
        let c = ccbrt(&cfrom_f64(-8.0, 0.0, 200), 200);
        let (re, im) = to_f64_pair(&c);
        assert!((re - 1.0).abs() < 1e-12 && (im - 3f64.sqrt()).abs() < 1e-12);
        let c = ccbrt(&cfrom_f64(27.0, 0.0, 200).mul_scalar_pow2(300), 200);
        assert_eq!(log2_size(&c), Some(101));
    }

    trait Pow2 {
        fn mul_scalar_pow2(&self, k: i64) -> Self;
    }
    impl Pow2 for CBig {
        fn mul_scalar_pow2(&self, k: i64) -> Self {
            scale_pow2(self, k)
        }
    }

    #[test]
    fn each_degree() {
        let r = assert_roots_of(&[-2, 0, 1], 200);
        assert!(r[0].re > r[1].re);
        assert_roots_of(&[-2, 0, 0, 1], 300);
        assert_roots_of(&[1, 0, 0, 0, 1], 300);
        assert_roots_of(&[24, -50, 35, -10, 1], 300);
        assert_roots_of(&[3, -1, 4, 1, -5], 400);
        assert_roots_of(&[0, 0, 0, 1], 200);
        assert_roots_of(&[7, 3], 100);
    }

    #[test]
    fn real_roots_sorted() {
        let rs = assert_roots_of(&[24, -50, 35, -10, 1], 256);
        let vals: Vec<f64> = rs.iter().map(|r| r.re.to_f64()).collect();
        for (v, e) in vals.iter().zip([4.0, 3.0, 2.0, 1.0]) {
            assert!((v - e).abs() < 1e-40);
        }
    }

    #[test]
    fn double_root() {
        let rs = roots(&ints(&[1, -2, 1], 200), 200);
        for r in rs {
            assert!((r.re.to_f64() - 1.0).abs() < 1e-25);
        }
    }
}
