mod common;

use oblit_core::polarcone::{plane_in_variety_check, FormSystem, SpanningTuple};
use oblit_core::polyring::{parse_poly, var_names};
use oblit_core::solver::{
    extend_to_subspace, find_linear_subspace, find_point, system_over, verify_point_exact, verify_point_numeric,
    Action,
};
use oblit_core::typecalc::raise_type;
use oblit_core::{
    FiniteContext, NumericContext, Radical, RadicalCertificate, Rational, SolveError, TypeVector, F5,
};

use num_traits::Zero;

use common::random_system;

fn base_points(n: usize) -> Vec<Vec<F5>> {
    let mut out = Vec::new();
    for lead in 0..=n {
        let free = n - lead;
        for code in 0..5u64.pow(free as u32) {
            let mut v = vec![F5::new(0); n + 1];
            v[lead] = F5::new(1);
            let mut c = code;
            for k in 0..free {
                v[lead + 1 + k] = F5::new(c % 5);
                c /= 5;
            }
            out.push(v);
        }
    }
    out
}

fn proportional(a: &[F5], b: &[F5]) -> bool {
    let i = a.iter().position(|c| !c.is_zero()).unwrap();
    if b[i].is_zero() {
        return false;
    }
    let s = b[i].clone() / a[i].clone();
    a.iter().zip(b).all(|(x, y)| x.clone() * s.clone() == *y)
}

#[test]
fn finite_points_against_enumeration() {
    let shapes: [(usize, &[u32]); 4] = [(2, &[2]), (2, &[3]), (2, &[2, 2]), (3, &[2, 3])];
    let mut rational_hits = 0;
    for (n, degrees) in shapes {
        let pts = base_points(n);
        for seed in 0..8 {
            let s = random_system(n, degrees, 500 + seed);
            let s5 = system_over::<F5>(&s).unwrap();
            let on: Vec<&Vec<F5>> = pts.iter().filter(|x| s5.contains_point(x)).collect();
            let mut ctx = FiniteContext::<5>::new(seed).unwrap();
            let out = find_point(&s5, &mut ctx).expect("within the guaranteed range");
            let x = out.point();
            assert!(verify_point_exact(&s5, x).passed);
            if x.iter().all(|c| c.as_base().is_some()) {
                let base: Vec<F5> = x.iter().map(|c| F5::new(c.as_base().unwrap())).collect();
                assert!(on.iter().any(|p| proportional(p, &base)), "rational solver point missing from enumeration");
                rational_hits += 1;
            }
            // Chevalley-Warning guarantees base points when the degrees sum below n + 1
            if degrees.iter().sum::<u32>() <= n as u32 {
                assert!(!on.is_empty());
            }
        }
    }
    assert!(rational_hits > 0);

    // inconsistent linear forms: no points anywhere, and the solver says so
    let v = var_names("z", 3);
    let forms = ["z0 - z1", "z1 + 2*z2", "z0 + z2"].iter().map(|f| parse_poly(f, &v).unwrap()).collect();
    let s = FormSystem::new(2, forms).unwrap();
    let s5 = system_over::<F5>(&s).unwrap();
    assert!(base_points(2).iter().all(|x| !s5.contains_point(x)));
    let mut ctx = FiniteContext::<5>::new(0).unwrap();
    assert_eq!(find_point(&s5, &mut ctx).unwrap_err(), SolveError::NoPoints);
}

#[test]
fn extension_keeps_the_first_point() {
    for j in 1..=3usize {
        let n = 2 * j + 1;
        let s = random_system(n, &[2], 40 + j as u64);
        let sys = system_over::<Radical>(&s).unwrap();
        let mut ctx = NumericContext::new(60, j as u64);
        let x0 = find_point(&sys, &mut ctx).unwrap().point().to_vec();
        let out = extend_to_subspace(&sys, &x0, j, &mut ctx).unwrap();
        assert_eq!(out.points.len(), j + 1);
        assert_eq!(out.points[0], x0);
        let t = SpanningTuple::new(out.points.clone()).unwrap();
        assert!(plane_in_variety_check(&sys, &t).unwrap());
        for p in &out.points {
            assert!(verify_point_numeric(&s, p, 60, -30).unwrap().passed);
        }
    }
}

#[test]
fn cone_types_follow_the_raising_rule() {
    let s = random_system(10, &[3], 9);
    let sys = system_over::<Radical>(&s).unwrap();
    let mut ctx = NumericContext::new(40, 1);
    let out = find_linear_subspace(&sys, 2, &mut ctx).unwrap();
    let top_cones: Vec<[u64; 4]> = out
        .log
        .iter()
        .filter(|st| st.level == 0 && st.action == Action::PolarCone)
        .map(|st| st.type_counts)
        .collect();
    let m = TypeVector::new([0u64, 0, 1]);
    let want: Vec<[u64; 4]> = (1..=2)
        .map(|i| {
            let t = raise_type(&m, i).to_u64s().unwrap();
            let mut a = [0u64; 4];
            a[..t.len()].copy_from_slice(&t);
            a
        })
        .collect();
    assert_eq!(top_cones, want);
    assert!(!out.outside_guaranteed_range);
}

#[test]
fn same_seed_same_log_and_certificate() {
    let s = random_system(5, &[3, 4], 77);
    let sys = system_over::<Radical>(&s).unwrap();
    let run = |seed| {
        let mut ctx = NumericContext::new(50, seed);
        let out = find_point(&sys, &mut ctx).unwrap();
        (out.log.clone(), RadicalCertificate::extract(out.point()).to_json())
    };
    assert_eq!(run(3), run(3));
    assert_ne!(run(3).1, run(4).1);
}

#[test]
fn range_flag() {
    // one quadric and one cubic need N >= 3 for a guaranteed point; a line
    // pair in the plane still lets the method through
    let v = var_names("z", 3);
    let forms = ["z0*z1", "z0^3 + 2*z1^3 - z2^3 + z0*z1*z2"].iter().map(|f| parse_poly(f, &v).unwrap()).collect();
    let low = FormSystem::new(2, forms).unwrap();
    let mut ctx = NumericContext::new(40, 0);
    let out = find_point(&system_over::<Radical>(&low).unwrap(), &mut ctx).unwrap();
    assert!(out.outside_guaranteed_range);
    // a smooth conic has no line, so the same shape can fail
    let smooth = random_system(2, &[2, 3], 1);
    let res = find_point(&system_over::<Radical>(&smooth).unwrap(), &mut ctx);
    assert!(res.map_or(true, |o| o.outside_guaranteed_range));
    let ok = random_system(3, &[2, 3], 1);
    let out = find_point(&system_over::<Radical>(&ok).unwrap(), &mut ctx).unwrap();
    assert!(!out.outside_guaranteed_range);
}

#[test]
fn zero_dimensional_subspace_is_a_point() {
    let s = random_system(3, &[2, 2], 12);
    let sys = system_over::<Radical>(&s).unwrap();
    let a = find_point(&sys, &mut NumericContext::new(40, 8)).unwrap();
    let b = find_linear_subspace(&sys, 0, &mut NumericContext::new(40, 8)).unwrap();
    assert_eq!(a.points, b.points);
    assert!(a.log.iter().any(|s| s.action == Action::QuadricPair));
}

#[test]
fn outcome_json_shape() {
    let s = random_system(3, &[2, 3], 4);
    let out = find_point(&system_over::<Radical>(&s).unwrap(), &mut NumericContext::new(30, 0)).unwrap();
    let v = out.to_json(30);
    assert_eq!(v["field"], "numeric(30)");
    let cert = RadicalCertificate::from_json(&v["result"]["certificate"]).unwrap();
    assert_eq!(cert.outputs.len(), 4);
    assert!(v["strategy_log"].as_array().unwrap().iter().all(|s| s["type"].as_array().unwrap().len() == 4));

    let s7 = system_over::<oblit_core::F7>(&s).unwrap();
    let out = find_point(&s7, &mut FiniteContext::<7>::new(0).unwrap()).unwrap();
    let v = out.to_json(0);
    assert_eq!(v["result"]["characteristic"], 7);
    assert_eq!(v["result"]["points"][0].as_array().unwrap().len(), 4);
}

#[test]
fn unreducible_coefficients_are_rejected() {
    let v = var_names("z", 2);
    let s = FormSystem::new(1, vec![parse_poly("z0^2 - 1/5*z1^2", &v).unwrap()]).unwrap();
    assert!(system_over::<F5>(&s).is_err());
    assert!(system_over::<Rational>(&s).is_ok());
}
