use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{apply, obliterate, BoundQuery, BoundResult, Rule, TraceStep};
use crate::error::BoundError;

type Key = (u64, u64, u64);

#[derive(Clone, Debug)]
struct Entry {
    value: BigUint,
    best: Option<(Rule, Key, BigUint)>,
}

const MOVES: [Rule; 4] = [
    Rule::ObliterateQuartic,
    Rule::ObliterateCubic,
    Rule::ObliterateQuadricPair,
    Rule::ObliterateQuadric,
];

/// Memoized minimum over obliteration strategies for point queries.
///
/// Each move removes one quartic, one cubic, one quadric or a pair of
/// quadrics and lifts the resulting plane query back to a point query. Only
/// moves whose lifted query is strictly smaller in `(m4, m3, m2)` lexicographic
/// order are explored, so the recursion is well founded.
#[derive(Debug, Default)]
pub struct BoundSearcher {
    memo: Mutex<HashMap<Key, Entry>>,
}

fn key(q: &BoundQuery) -> Key {
    (q.m2, q.m3, q.m4)
}

fn smaller(a: Key, b: Key) -> bool {
    (a.2, a.1, a.0) < (b.2, b.1, b.0)
}

fn moves(k: Key) -> Result<Vec<(Rule, Key, BigUint)>, BoundError> {
    let q = BoundQuery::points(k.0, k.1, k.2);
    let mut out = Vec::new();
    for rule in MOVES {
        if obliterate(rule, &q).is_none() {
            continue;
        }
        let (next, added) = apply(rule, &q)?;
        let next = key(&next.expect("obliteration has a successor"));
        if smaller(next, k) {
            out.push((rule, next, added));
        }
    }
    Ok(out)
}

impl BoundSearcher {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn cached_states(&self) -> usize {
        self.memo.lock().expect("memo lock").len()
    }

    pub fn search(&self, query: BoundQuery) -> Result<BoundResult, BoundError> {
        let mut trace = Vec::new();
        let mut value = BigUint::zero();
        let start = if query.j == 0 {
            query
        } else {
            let (next, added) = apply(Rule::LiftPlanes, &query)?;
            value += &added;
            trace.push(TraceStep {
                rule: Rule::LiftPlanes,
                query,
                added,
            });
            next.expect("lift has a successor")
        };

        let mut memo = self.memo.lock().expect("memo lock");
        let root = key(&start);
        let mut stack = vec![(root, false)];
        while let Some((k, expanded)) = stack.pop() {
            if memo.contains_key(&k) {
                continue;
            }
            if k == (0, 0, 0) {
                memo.insert(
                    k,
                    Entry {
                        value: BigUint::zero(),
                        best: None,
                    },
                );
                continue;
            }
            let options = moves(k)?;
            if !expanded {
                stack.push((k, true));
                for (_, next, _) in &options {
                    if !memo.contains_key(next) {
                        stack.push((*next, false));
                    }
                }
                continue;
            }
            let mut best: Option<Entry> = None;
            for (rule, next, added) in options {
                let total = &memo[&next].value + &added;
                if best.as_ref().map_or(true, |b| total < b.value) {
                    best = Some(Entry {
                        value: total,
                        best: Some((rule, next, added)),
                    });
                }
            }
            memo.insert(k, best.expect("every nonempty query has a move"));
        }

        value += &memo[&root].value;
        let mut k = root;
        loop {
            let q = BoundQuery::points(k.0, k.1, k.2);
            match &memo[&k].best {
                Some((rule, next, added)) => {
                    trace.push(TraceStep {
                        rule: *rule,
                        query: q,
                        added: added.clone(),
                    });
                    k = *next;
                }
                None => {
                    trace.push(TraceStep {
                        rule: Rule::EmptySystem,
                        query: q,
                        added: BigUint::zero(),
                    });
                    break;
                }
            }
        }
        Ok(BoundResult {
            query,
            value,
            trace,
        })
    }
}

/// Strategy search with a fresh memo table.
pub fn fj_search(query: BoundQuery) -> Result<BoundResult, BoundError> {
    BoundSearcher::new().search(query)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{f0_quadrics, fj_bound};

    #[test]
    fn small_point_queries() {
        assert_eq!(fj_search(BoundQuery::points(2, 0, 0)).unwrap().value, 2u32.into());
        let r = fj_search(BoundQuery::points(0, 1, 1)).unwrap();
        assert_eq!(r.value, 5u32.into());
        assert_eq!(r.trace[0].rule, Rule::ObliterateQuartic);
        assert_eq!(r.replay().unwrap(), r.value);
    }

    #[test]
    fn quadrics_match_closed_form() {
        let s = BoundSearcher::new();
        for m2 in 0..=20u64 {
            let r = s.search(BoundQuery::points(m2, 0, 0)).unwrap();
            assert_eq!(r.value, f0_quadrics(m2), "m2={m2}");
        }
        let r = s.search(BoundQuery::points(9, 0, 0)).unwrap();
        assert!(r.trace.iter().any(|t| t.rule == Rule::ObliterateQuadricPair));
    }

    #[test]
    fn never_worse_than_closed_form() {
        let s = BoundSearcher::new();
        for j in 0..=4u64 {
            for a in 0..=5u64 {
                for b in 0..=4u64 {
                    for c in 0..=3u64 {
                        let q = BoundQuery::new(j, a, b, c);
                        let r = s.search(q).unwrap();
                        assert!(r.value <= fj_bound(q).unwrap().value, "{q}");
                        assert_eq!(r.replay().unwrap(), r.value, "{q}");
                    }
                }
            }
        }
    }

    #[test]
    fn deep_chains_do_not_recurse() {
        let r = fj_search(BoundQuery::points(6000, 0, 0)).unwrap();
        assert_eq!(r.value, f0_quadrics(6000u32));
    }
}
