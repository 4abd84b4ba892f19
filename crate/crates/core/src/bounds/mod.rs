//! Upper bounds on the ambient dimension that guarantees dense solvable
//! `j`-planes on an intersection of `m2` quadrics, `m3` cubics and `m4` quartics.

mod search;
mod symbolic;
mod tables;

pub use search::{fj_search, BoundSearcher};
pub use symbolic::{
    appendix_q_polynomial, compare_with_appendix, p_polynomial, q_polynomial, CoefficientMismatch,
    APPENDIX_Q,
};
pub use tables::{
    comparison_bounds, emit_table, golden_table, Comparison, TableFormat, TableKind,
};

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::BoundError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BoundQuery {
    pub j: u64,
    pub m2: u64,
    pub m3: u64,
    pub m4: u64,
}

impl BoundQuery {
    pub fn new(j: u64, m2: u64, m3: u64, m4: u64) -> Self {
        BoundQuery { j, m2, m3, m4 }
    }

    pub fn points(m2: u64, m3: u64, m4: u64) -> Self {
        Self::new(0, m2, m3, m4)
    }

    fn counts(&self) -> (BigUint, BigUint, BigUint) {
        (self.m2.into(), self.m3.into(), self.m4.into())
    }
}

impl fmt::Display for BoundQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f_{}({},{},{})", self.j, self.m2, self.m3, self.m4)
    }
}

/// One inference in a derivation. Each rule maps its query to a smaller one
/// (or to nothing) and contributes `added` to the bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    /// `f_j(m) <= f_0(shifted m) + shift`: pass from planes to points.
    LiftPlanes,
    /// Remove all quartics at once, closed form.
    ClearQuartics,
    /// Remove all cubics at once, closed form (query has no quartics).
    ClearCubics,
    /// Closed form for quadrics only; ends the derivation.
    QuadricClosedForm,
    /// Cut by one quadric along a line on the rest, then lift.
    ObliterateQuadric,
    /// Cut by two quadrics along a 2-plane on the rest, then lift.
    ObliterateQuadricPair,
    ObliterateCubic,
    ObliterateQuartic,
    /// `f_0(0,0,0) = 0`; ends the derivation.
    EmptySystem,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::LiftPlanes => "lift_planes",
            Rule::ClearQuartics => "clear_quartics",
            Rule::ClearCubics => "clear_cubics",
            Rule::QuadricClosedForm => "quadric_closed_form",
            Rule::ObliterateQuadric => "obliterate_quadric",
            Rule::ObliterateQuadricPair => "obliterate_quadric_pair",
            Rule::ObliterateCubic => "obliterate_cubic",
            Rule::ObliterateQuartic => "obliterate_quartic",
            Rule::EmptySystem => "empty_system",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    pub query: BoundQuery,
    pub added: BigUint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundResult {
    pub query: BoundQuery,
    pub value: BigUint,
    pub trace: Vec<TraceStep>,
}

/// JSON number when it fits in 64 bits, decimal string otherwise.
pub fn nat_json(n: &BigUint) -> Value {
    match n.to_u64() {
        Some(v) => json!(v),
        None => json!(n.to_string()),
    }
}

impl BoundResult {
    pub fn to_json(&self, with_trace: bool) -> Value {
        let mut v = json!({
            "query": self.query,
            "value": nat_json(&self.value),
        });
        if with_trace {
            v["trace"] = Value::Array(
                self.trace
                    .iter()
                    .map(|s| {
                        json!({
                            "rule": s.rule.name(),
                            "query": s.query,
                            "added": nat_json(&s.added),
                        })
                    })
                    .collect(),
            );
        }
        v
    }

    /// Recomputes the value from the trace alone, checking every step.
    pub fn replay(&self) -> Result<BigUint, BoundError> {
        replay(&self.query, &self.trace)
    }
}

fn binom(n: &BigUint, k: u32) -> BigUint {
    if *n < BigUint::from(k) {
        return BigUint::zero();
    }
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for i in 0..k {
        num *= n - BigUint::from(i);
        den *= BigUint::from(i + 1);
    }
    num / den
}

fn to_u64(n: BigUint) -> Result<u64, BoundError> {
    n.to_u64().ok_or(BoundError::Overflow)
}

/// `floor((m2+1)/2)^2 + floor(m2/2)^2`.
pub fn f0_quadrics(m2: impl Into<BigUint>) -> BigUint {
    let m2: BigUint = m2.into();
    let a = (&m2 + 1u32) >> 1;
    let b = &m2 >> 1;
    &a * &a + &b * &b
}

fn cubic_extra(m2: &BigUint, m3: &BigUint) -> BigUint {
    let t = m3 * (BigUint::from(3u32) * m2 + m3 * m3 + 2u32);
    debug_assert!(t.is_multiple_of(&BigUint::from(3u32)));
    t / 3u32
}

fn quartic_shift(m2: &BigUint, m3: &BigUint, m4: &BigUint) -> (BigUint, BigUint) {
    (
        m2 + m3 * m4 + binom(&(m4 + 1u32), 3) * 2u32,
        m3 + binom(m4, 2),
    )
}

fn quartic_extra(m2: &BigUint, m3: &BigUint, m4: &BigUint) -> BigUint {
    let t = m4 * (m4 + 3u32) * (m4 * m4 + 2u32 - m4);
    debug_assert!(t.is_multiple_of(&BigUint::from(8u32)));
    m2 * m4 + m3 * binom(&(m4 + 1u32), 2) + t / 8u32
}

/// Bound for quadrics and cubics: `f0_quadrics(m2 + C(m3,2)) + m3(3 m2 + m3^2 + 2)/3`.
pub fn f0_quadrics_cubics(m2: impl Into<BigUint>, m3: impl Into<BigUint>) -> BigUint {
    let (m2, m3) = (m2.into(), m3.into());
    f0_quadrics(&m2 + binom(&m3, 2)) + cubic_extra(&m2, &m3)
}

/// Bound on points for the full mixed system.
pub fn f0_full(m2: impl Into<BigUint>, m3: impl Into<BigUint>, m4: impl Into<BigUint>) -> BigUint {
    let (m2, m3, m4) = (m2.into(), m3.into(), m4.into());
    let (a, b) = quartic_shift(&m2, &m3, &m4);
    f0_quadrics_cubics(a, b) + quartic_extra(&m2, &m3, &m4)
}

/// The counts `j` points impose on the polar cone, and the dimension they cost.
fn lift(q: &BoundQuery) -> (BigUint, BigUint, BigUint, BigUint) {
    let j = BigUint::from(q.j);
    let (m2, m3, m4) = q.counts();
    let c2 = binom(&(&j + 1u32), 2);
    let c3 = binom(&(&j + 2u32), 3);
    let a = &m2 + &j * &m3 + &c2 * &m4;
    let b = &m3 + &j * &m4;
    let shift = &j + &j * &m2 + &c2 * &m3 + &c3 * &m4;
    (a, b, m4, shift)
}

/// Successor query and contribution of `rule` applied at `q`.
fn apply(rule: Rule, q: &BoundQuery) -> Result<(Option<BoundQuery>, BigUint), BoundError> {
    let bad = || BoundError::Replay(0);
    let (m2, m3, m4) = q.counts();
    Ok(match rule {
        Rule::LiftPlanes => {
            let (a, b, c, shift) = lift(q);
            (Some(BoundQuery::points(to_u64(a)?, to_u64(b)?, to_u64(c)?)), shift)
        }
        Rule::ClearQuartics => {
            if q.j != 0 {
                return Err(bad());
            }
            let (a, b) = quartic_shift(&m2, &m3, &m4);
            (
                Some(BoundQuery::points(to_u64(a)?, to_u64(b)?, 0)),
                quartic_extra(&m2, &m3, &m4),
            )
        }
        Rule::ClearCubics => {
            if q.j != 0 || q.m4 != 0 {
                return Err(bad());
            }
            let a = &m2 + binom(&m3, 2);
            (Some(BoundQuery::points(to_u64(a)?, 0, 0)), cubic_extra(&m2, &m3))
        }
        Rule::QuadricClosedForm => {
            if q.j != 0 || q.m3 != 0 || q.m4 != 0 {
                return Err(bad());
            }
            (None, f0_quadrics(m2))
        }
        Rule::EmptySystem => {
            if *q != BoundQuery::default() {
                return Err(bad());
            }
            (None, BigUint::zero())
        }
        Rule::ObliterateQuadric
        | Rule::ObliterateQuadricPair
        | Rule::ObliterateCubic
        | Rule::ObliterateQuartic => {
            if q.j != 0 {
                return Err(bad());
            }
            let planes = obliterate(rule, q).ok_or_else(bad)?;
            let (a, b, c, shift) = lift(&planes);
            (Some(BoundQuery::points(to_u64(a)?, to_u64(b)?, to_u64(c)?)), shift)
        }
    })
}

/// The plane query that one obliteration move reduces a point query to.
fn obliterate(rule: Rule, q: &BoundQuery) -> Option<BoundQuery> {
    match rule {
        Rule::ObliterateQuadric if q.m2 >= 1 => Some(BoundQuery::new(1, q.m2 - 1, q.m3, q.m4)),
        Rule::ObliterateQuadricPair if q.m2 >= 2 => Some(BoundQuery::new(2, q.m2 - 2, q.m3, q.m4)),
        Rule::ObliterateCubic if q.m3 >= 1 => Some(BoundQuery::new(1, q.m2, q.m3 - 1, q.m4)),
        Rule::ObliterateQuartic if q.m4 >= 1 => Some(BoundQuery::new(1, q.m2, q.m3, q.m4 - 1)),
        _ => None,
    }
}

fn replay(query: &BoundQuery, trace: &[TraceStep]) -> Result<BigUint, BoundError> {
    let mut current = Some(*query);
    let mut total = BigUint::zero();
    for (i, step) in trace.iter().enumerate() {
        if current != Some(step.query) {
            return Err(BoundError::Replay(i));
        }
        let (next, added) = apply(step.rule, &step.query).map_err(|e| match e {
            BoundError::Replay(_) => BoundError::Replay(i),
            other => other,
        })?;
        if added != step.added {
            return Err(BoundError::Replay(i));
        }
        total += added;
        current = next;
    }
    if current.is_some() {
        return Err(BoundError::Replay(trace.len()));
    }
    Ok(total)
}

fn run(query: BoundQuery, rules: &[Rule]) -> Result<BoundResult, BoundError> {
    let mut trace = Vec::with_capacity(rules.len());
    let mut current = query;
    let mut value = BigUint::zero();
    for &rule in rules {
        let (next, added) = apply(rule, &current)?;
        value += &added;
        trace.push(TraceStep {
            rule,
            query: current,
            added,
        });
        match next {
            Some(n) => current = n,
            None => break,
        }
    }
    Ok(BoundResult {
        query,
        value,
        trace,
    })
}

/// Closed-form bound: lift to points, then clear quartics, cubics and quadrics.
pub fn fj_bound(query: BoundQuery) -> Result<BoundResult, BoundError> {
    run(
        query,
        &[
            Rule::LiftPlanes,
            Rule::ClearQuartics,
            Rule::ClearCubics,
            Rule::QuadricClosedForm,
        ],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(q: BoundQuery) -> u64 {
        fj_bound(q).unwrap().value.to_u64().unwrap()
    }

    #[test]
    fn quadric_closed_form() {
        let got: Vec<_> = [0u32, 1, 5, 8].iter().map(|&m| f0_quadrics(m)).collect();
        assert_eq!(got, [0u32, 1, 13, 32].map(BigUint::from));
    }

    #[test]
    fn mixed_closed_forms() {
        assert_eq!(f0_quadrics_cubics(0u32, 1u32), 1u32.into());
        assert_eq!(f0_quadrics_cubics(1u32, 1u32), 3u32.into());
        assert_eq!(f0_quadrics_cubics(0u32, 3u32), 16u32.into());
        assert_eq!(f0_quadrics_cubics(5u32, 2u32), 32u32.into());
        assert_eq!(f0_full(0u32, 0u32, 1u32), 1u32.into());
        assert_eq!(f0_full(0u32, 1u32, 1u32), 5u32.into());
        assert_eq!(f0_full(0u32, 0u32, 2u32), 10u32.into());
        assert_eq!(f0_full(3u32, 2u32, 1u32), 38u32.into());
    }

    #[test]
    fn plane_bounds() {
        assert_eq!(v(BoundQuery::new(1, 1, 0, 0)), 3);
        assert_eq!(v(BoundQuery::new(8, 0, 8, 0)), 5216);
        assert_eq!(v(BoundQuery::new(8, 0, 0, 8)), 13636752);
        for j in 0..10 {
            assert_eq!(v(BoundQuery::new(j, 0, 0, 0)), j);
            assert_eq!(v(BoundQuery::new(j, 1, 0, 0)), 2 * j + 1);
        }
    }

    #[test]
    fn trace_replays() {
        let r = fj_bound(BoundQuery::new(3, 2, 1, 2)).unwrap();
        assert_eq!(r.trace.len(), 4);
        assert_eq!(r.trace[0].rule, Rule::LiftPlanes);
        assert_eq!(r.replay().unwrap(), r.value);
        let mut bad = r.clone();
        bad.trace[1].added += 1u32;
        assert_eq!(bad.replay(), Err(BoundError::Replay(1)));
        let mut short = r;
        short.trace.pop();
        assert!(short.replay().is_err());
    }

    #[test]
    fn json_shape() {
        let r = fj_bound(BoundQuery::new(1, 1, 0, 0)).unwrap();
        let j = r.to_json(true);
        assert_eq!(j["value"], 3);
        assert_eq!(j["query"]["m2"], 1);
        assert_eq!(j["trace"][0]["rule"], "lift_planes");
        assert!(r.to_json(false).get("trace").is_none());
    }

    #[test]
    fn overflow_is_reported() {
        assert_eq!(
            fj_bound(BoundQuery::new(2, u64::MAX, 1, 0)),
            Err(BoundError::Overflow)
        );
    }

    #[test]
    fn divisibility_of_rational_terms() {
        for m3 in 0u32..300 {
            for m2 in [0u32, 1, 2, 7, 1000] {
                let t = BigUint::from(m3) * (BigUint::from(3 * m2) + m3 * m3 + 2u32);
                assert!(t.is_multiple_of(&3u32.into()));
            }
        }
        for m4 in 0u64..10_000 {
            let m = BigUint::from(m4);
            let t = &m * (&m + 3u32) * (&m * &m + 2u32 - &m);
            assert!(t.is_multiple_of(&8u32.into()), "m4={m4}");
        }
    }

    #[test]
    fn lower_bound_and_monotonicity() {
        for j in 0..=8u64 {
            for a in 0..=12u64 {
                for b in 0..=12u64 {
                    for c in 0..=12u64 {
                        let here = v(BoundQuery::new(j, a, b, c));
                        assert!(here >= a + b + c);
                        assert!(v(BoundQuery::new(j + 1, a, b, c)) >= here);
                        assert!(v(BoundQuery::new(j, a + 1, b, c)) >= here);
                        assert!(v(BoundQuery::new(j, a, b + 1, c)) >= here);
                        assert!(v(BoundQuery::new(j, a, b, c + 1)) >= here);
                    }
                }
            }
        }
    }
}
