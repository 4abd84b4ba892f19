//! Type and degree monoids.
//!
//! A [`TypeVector`] counts defining equations by degree (entry `i` is the
//! number of degree-`i` forms), a [`DegreeVector`] lists the degrees in order.
//! Both are compactly supported sequences indexed from 1; trailing zeros of a
//! type and all zeros of a degree vector are stripped on construction, so
//! equality is structural.

use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::ParseError;

/// Counts of equations per degree, `entries[i - 1]` = number of degree-`i` forms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TypeVector {
    entries: Vec<BigUint>,
}

/// Ordered degrees of a tuple of forms. Concatenation is the monoid operation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DegreeVector {
    entries: Vec<u32>,
}

impl TypeVector {
    pub fn new<I, T>(entries: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigUint>,
    {
        let mut entries: Vec<BigUint> = entries.into_iter().map(Into::into).collect();
        while entries.last().is_some_and(Zero::is_zero) {
            entries.pop();
        }
        TypeVector { entries }
    }

    pub fn empty() -> Self {
        TypeVector::default()
    }

    pub fn entries(&self) -> &[BigUint] {
        &self.entries
    }

    /// Number of degree-`degree` equations (zero outside the support).
    pub fn get(&self, degree: usize) -> BigUint {
        if degree == 0 {
            return BigUint::zero();
        }
        self.entries.get(degree - 1).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries as `u64`, `None` if any entry overflows.
    pub fn to_u64s(&self) -> Option<Vec<u64>> {
        self.entries.iter().map(|e| u64::try_from(e).ok()).collect()
    }
}

impl DegreeVector {
    pub fn new<I: IntoIterator<Item = u32>>(entries: I) -> Self {
        DegreeVector {
            entries: entries.into_iter().filter(|&d| d != 0).collect(),
        }
    }

    pub fn empty() -> Self {
        DegreeVector::default()
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, degree: u32) {
        if degree != 0 {
            self.entries.push(degree);
        }
    }
}

/// Entrywise sum.
pub fn type_add(a: &TypeVector, b: &TypeVector) -> TypeVector {
    let n = a.len().max(b.len());
    TypeVector::new((1..=n).map(|i| a.get(i) + b.get(i)))
}

/// Concatenation `a ⊕ b`.
pub fn deg_concat(a: &DegreeVector, b: &DegreeVector) -> DegreeVector {
    DegreeVector::new(a.entries.iter().chain(&b.entries).copied())
}

/// The homomorphism from degrees to types: entry `i` counts occurrences of `i`.
pub fn type_of(d: &DegreeVector) -> TypeVector {
    let n = d.entries.iter().copied().max().unwrap_or(0) as usize;
    let mut counts = vec![BigUint::zero(); n];
    for &deg in &d.entries {
        counts[deg as usize - 1] += 1u32;
    }
    TypeVector::new(counts)
}

/// `m^j` through the binomial closed form
/// `(m^j)_l = sum_{i >= l} C(j + i - l - 1, i - l) m_i`.
pub fn raise_type(m: &TypeVector, j: u64) -> TypeVector {
    if j == 0 {
        return m.clone();
    }
    let n = m.len();
    // weights[k] = C(j - 1 + k, k)
    let mut weights = Vec::with_capacity(n);
    let mut w = BigUint::one();
    for k in 0..n {
        if k > 0 {
            w = w * BigUint::from(j - 1 + k as u64) / BigUint::from(k as u64);
        }
        weights.push(w.clone());
    }
    TypeVector::new((0..n).map(|l| {
        (l..n)
            .map(|i| &weights[i - l] * &m.entries[i])
            .fold(BigUint::zero(), |acc, t| acc + t)
    }))
}

/// `m^j` by iterating the suffix-sum step `j` times. Independent of the
/// closed form in [`raise_type`].
pub fn raise_type_once_iterated(m: &TypeVector, j: u64) -> TypeVector {
    let mut cur = m.entries.clone();
    for _ in 0..j {
        let mut acc = BigUint::zero();
        for e in cur.iter_mut().rev() {
            acc += &*e;
            *e = acc.clone();
        }
    }
    TypeVector::new(cur)
}

/// `d^j`: each degree `d_i` is replaced by the block `1, 2, ..., d_i`, `j` times.
pub fn raise_deg(d: &DegreeVector, j: u64) -> DegreeVector {
    let mut cur = d.entries.clone();
    for _ in 0..j {
        cur = cur.iter().flat_map(|&di| 1..=di).collect();
    }
    DegreeVector { entries: cur }
}

/// The l1 norm `|m|`.
pub fn norm1(m: &TypeVector) -> BigUint {
    m.entries.iter().sum()
}

impl Add for &TypeVector {
    type Output = TypeVector;
    fn add(self, rhs: &TypeVector) -> TypeVector {
        type_add(self, rhs)
    }
}

fn write_tuple<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    write!(f, "(")?;
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, ")")
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.entries)
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.entries)
    }
}

/// Splits `"(a,b,c)"`, `"a,b,c"` or `"()"` into trimmed items.
fn tuple_items(s: &str) -> Result<Vec<(usize, &str)>, ParseError> {
    let t = s.trim();
    let (body, offset) = match (t.strip_prefix('('), t.ends_with(')')) {
        (Some(rest), true) => (&rest[..rest.len() - 1], s.find('(').unwrap_or(0) + 1),
        (None, false) => (t, s.len() - s.trim_start().len()),
        _ => return Err(ParseError::new(0, "unbalanced parentheses")),
    };
    if body.trim().is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pos = offset;
    for item in body.split(',') {
        let lead = item.len() - item.trim_start().len();
        out.push((pos + lead, item.trim()));
        pos += item.len() + 1;
    }
    Ok(out)
}

impl FromStr for TypeVector {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let items = tuple_items(s)?;
        let mut entries = Vec::with_capacity(items.len());
        for (pos, item) in items {
            let v = item
                .parse::<BigUint>()
                .map_err(|_| ParseError::new(pos, format!("expected a natural number, found {item:?}")))?;
            entries.push(v);
        }
        Ok(TypeVector::new(entries))
    }
}

impl FromStr for DegreeVector {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let items = tuple_items(s)?;
        let mut entries = Vec::with_capacity(items.len());
        for (pos, item) in items {
            let v = item
                .parse::<u32>()
                .map_err(|_| ParseError::new(pos, format!("expected a degree, found {item:?}")))?;
            entries.push(v);
        }
        Ok(DegreeVector::new(entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(v: &[u32]) -> TypeVector {
        TypeVector::new(v.iter().copied())
    }
    fn d(v: &[u32]) -> DegreeVector {
        DegreeVector::new(v.iter().copied())
    }

    #[test]
    fn addition_and_identity() {
        assert_eq!(type_add(&t(&[0, 2]), &t(&[1, 0, 3])), t(&[1, 2, 3]));
        assert_eq!(type_add(&t(&[0, 1]), &t(&[0, 1])), t(&[0, 2]));
        assert_eq!(type_add(&t(&[4, 0, 1]), &TypeVector::empty()), t(&[4, 0, 1]));
    }

    #[test]
    fn canonical_forms_strip_zeros() {
        assert_eq!(t(&[1, 0, 0]), t(&[1]));
        assert_eq!(t(&[0, 0]), TypeVector::empty());
        assert_eq!(d(&[0, 2, 0, 3]), d(&[2, 3]));
    }

    #[test]
    fn concatenation() {
        assert_eq!(deg_concat(&d(&[2, 3]), &d(&[2])), d(&[2, 3, 2]));
        assert_eq!(deg_concat(&DegreeVector::empty(), &d(&[4, 1])), d(&[4, 1]));
        assert_eq!(deg_concat(&d(&[1]), &d(&[1])), d(&[1, 1]));
    }

    #[test]
    fn type_homomorphism() {
        assert_eq!(type_of(&d(&[1, 2, 3])), t(&[1, 1, 1]));
        assert_eq!(type_of(&d(&[2, 2, 3])), t(&[0, 2, 1]));
        assert_eq!(type_of(&DegreeVector::empty()), TypeVector::empty());
    }

    #[test]
    fn raising_types() {
        assert_eq!(raise_type(&t(&[0, 0, 1]), 1), t(&[1, 1, 1]));
        assert_eq!(raise_type(&t(&[0, 0, 0, 1]), 2), t(&[4, 3, 2, 1]));
        assert_eq!(raise_type(&t(&[3, 0, 5]), 0), t(&[3, 0, 5]));
        assert_eq!(raise_type_once_iterated(&t(&[0, 0, 0, 1]), 1), t(&[1, 1, 1, 1]));
        assert_eq!(raise_type_once_iterated(&t(&[0, 0, 0, 1]), 2), t(&[4, 3, 2, 1]));
        assert_eq!(raise_type_once_iterated(&t(&[0, 1]), 3), t(&[3, 1]));
    }

    #[test]
    fn raising_degrees() {
        assert_eq!(raise_deg(&d(&[3]), 1), d(&[1, 2, 3]));
        assert_eq!(raise_deg(&d(&[2, 3]), 1), d(&[1, 2, 1, 2, 3]));
        assert_eq!(raise_deg(&d(&[3]), 2), d(&[1, 1, 2, 1, 2, 3]));
        assert_eq!(raise_deg(&d(&[4]), 2), d(&[1, 1, 2, 1, 2, 3, 1, 2, 3, 4]));
    }

    #[test]
    fn norms() {
        assert_eq!(norm1(&t(&[4, 3, 2, 1])), BigUint::from(10u32));
        assert_eq!(norm1(&TypeVector::empty()), BigUint::zero());
        assert_eq!(norm1(&t(&[0, 2, 1])), BigUint::from(3u32));
    }

    #[test]
    fn text_round_trip() {
        assert_eq!("(0,2,1)".parse::<TypeVector>().unwrap(), t(&[0, 2, 1]));
        assert_eq!(" 1, 2 ".parse::<TypeVector>().unwrap(), t(&[1, 2]));
        assert_eq!("()".parse::<TypeVector>().unwrap(), TypeVector::empty());
        assert_eq!(t(&[4, 3, 2, 1]).to_string(), "(4,3,2,1)");
        assert_eq!(TypeVector::empty().to_string(), "()");
        assert_eq!("(2,3,2)".parse::<DegreeVector>().unwrap().to_string(), "(2,3,2)");
        let err = "(1,x)".parse::<TypeVector>().unwrap_err();
        assert_eq!(err.position, 3);
        assert!("(1,2".parse::<TypeVector>().is_err());
    }

    fn arb_type() -> impl Strategy<Value = TypeVector> {
        prop::collection::vec(0u32..=20, 0..6).prop_map(TypeVector::new)
    }
    fn arb_deg() -> impl Strategy<Value = DegreeVector> {
        prop::collection::vec(1u32..=4, 0..4).prop_map(DegreeVector::new)
    }

    proptest! {
        #[test]
        fn monoid_laws(a in arb_type(), b in arb_type(), c in arb_type(),
                       x in arb_deg(), y in arb_deg(), z in arb_deg()) {
            prop_assert_eq!(type_add(&type_add(&a, &b), &c), type_add(&a, &type_add(&b, &c)));
            prop_assert_eq!(type_add(&a, &b), type_add(&b, &a));
            prop_assert_eq!(deg_concat(&deg_concat(&x, &y), &z), deg_concat(&x, &deg_concat(&y, &z)));
            prop_assert_eq!(deg_concat(&x, &DegreeVector::empty()), x.clone());
        }

        #[test]
        fn closed_form_matches_iteration(m in arb_type(), j in 0u64..=10) {
            prop_assert_eq!(raise_type(&m, j), raise_type_once_iterated(&m, j));
        }

        #[test]
        fn raising_is_compatible(a in arb_type(), b in arb_type(), x in arb_deg(), y in arb_deg(),
                                 j in 0u64..=4, k in 0u64..=4) {
            prop_assert_eq!(raise_type(&type_add(&a, &b), j), type_add(&raise_type(&a, j), &raise_type(&b, j)));
            prop_assert_eq!(raise_deg(&deg_concat(&x, &y), j), deg_concat(&raise_deg(&x, j), &raise_deg(&y, j)));
            prop_assert_eq!(type_of(&raise_deg(&x, j)), raise_type(&type_of(&x), j));
            prop_assert_eq!(raise_type(&raise_type(&a, j), k), raise_type(&a, j + k));
        }
    }
}
