//! Numbers in a radical tower over the rationals, carried as a numeric value
//! plus the expression DAG that produced it.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::bigfloat::BigFloat;
use super::complex::{self, cabs_max, creal, log2_size, CBig};
use crate::error::CertError;
use crate::scalar::{Field, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertNode {
    Const(Rational),
    Add(usize, usize),
    Sub(usize, usize),
    Mul(usize, usize),
    Div(usize, usize),
    Neg(usize),
    /// Root number `index` (in the fixed approximation order) of
    /// `coeffs[0] + coeffs[1] t + ...`.
    RootOf { coeffs: Vec<usize>, index: usize },
}

impl CertNode {
    fn args(&self) -> Vec<usize> {
        match self {
            CertNode::Const(_) => vec![],
            CertNode::Add(a, b) | CertNode::Sub(a, b) | CertNode::Mul(a, b) | CertNode::Div(a, b) => {
                vec![*a, *b]
            }
            CertNode::Neg(a) => vec![*a],
            CertNode::RootOf { coeffs, .. } => coeffs.clone(),
        }
    }

    fn with_args(&self, map: &HashMap<usize, usize>) -> CertNode {
        let m = |i: &usize| map[i];
        match self {
            CertNode::Const(q) => CertNode::Const(q.clone()),
            CertNode::Add(a, b) => CertNode::Add(m(a), m(b)),
            CertNode::Sub(a, b) => CertNode::Sub(m(a), m(b)),
            CertNode::Mul(a, b) => CertNode::Mul(m(a), m(b)),
            CertNode::Div(a, b) => CertNode::Div(m(a), m(b)),
            CertNode::Neg(a) => CertNode::Neg(m(a)),
            CertNode::RootOf { coeffs, index } => CertNode::RootOf {
                coeffs: coeffs.iter().map(m).collect(),
                index: *index,
            },
        }
    }
}

#[derive(Debug, Default)]
struct GraphInner {
    nodes: Vec<CertNode>,
    depth: Vec<u32>,
    consts: HashMap<Rational, usize>,
}

/// Append-only store of certificate nodes shared by all values of one
/// numeric context.
#[derive(Debug)]
pub struct CertGraph {
    bits: u32,
    inner: Mutex<GraphInner>,
}

impl CertGraph {
    pub fn new(bits: u32) -> Arc<Self> {
        Arc::new(CertGraph {
            bits,
            inner: Mutex::new(GraphInner::default()),
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.inner.lock().expect("graph lock").nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn push(&self, node: CertNode) -> usize {
        let mut g = self.inner.lock().expect("graph lock");
        if let CertNode::Const(q) = &node {
            if let Some(&id) = g.consts.get(q) {
                return id;
            }
        }
        let depth = match &node {
            CertNode::RootOf { coeffs, .. } => 1 + coeffs.iter().map(|&i| g.depth[i]).max().unwrap_or(0),
            n => n.args().iter().map(|&i| g.depth[i]).max().unwrap_or(0),
        };
        let id = g.nodes.len();
        if let CertNode::Const(q) = &node {
            g.consts.insert(q.clone(), id);
        }
        g.nodes.push(node);
        g.depth.push(depth);
        id
    }

    fn depth(&self, id: usize) -> u32 {
        self.inner.lock().expect("graph lock").depth[id]
    }

    fn snapshot(&self) -> Vec<CertNode> {
        self.inner.lock().expect("graph lock").nodes.clone()
    }
}

/// An element of a radical tower over the rationals.
#[derive(Clone, Debug)]
pub enum Radical {
    Exact(Rational),
    Approx {
        value: CBig,
        node: usize,
        graph: Arc<CertGraph>,
    },
}

fn zero_bits(bits: u32) -> i64 {
    (bits as i64 * 3) / 5
}

impl Radical {
    pub fn value(&self, bits: u32) -> CBig {
        match self {
            Radical::Exact(q) => creal(BigFloat::from_rational(q, bits)),
            Radical::Approx { value, .. } => value.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Radical::Exact(q) => Some(q),
            Radical::Approx { .. } => None,
        }
    }

    /// Nesting depth of root adjunctions behind this value.
    pub fn root_depth(&self) -> u32 {
        match self {
            Radical::Exact(_) => 0,
            Radical::Approx { node, graph, .. } => graph.depth(*node),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        match self {
            Radical::Exact(q) => (q.to_f64().unwrap_or(f64::NAN), 0.0),
            Radical::Approx { value, .. } => complex::to_f64_pair(value),
        }
    }

    pub(crate) fn root(graph: &Arc<CertGraph>, coeffs: &[Radical], index: usize, value: CBig) -> Radical {
        let ids = coeffs.iter().map(|c| c.node_in(graph)).collect();
        let node = graph.push(CertNode::RootOf { coeffs: ids, index });
        Radical::Approx {
            value,
            node,
            graph: graph.clone(),
        }
    }

    fn node_in(&self, graph: &Arc<CertGraph>) -> usize {
        match self {
            Radical::Exact(q) => graph.push(CertNode::Const(q.clone())),
            Radical::Approx { node, graph: g, .. } => {
                assert!(Arc::ptr_eq(g, graph), "radicals from different contexts");
                *node
            }
        }
    }

    fn graph(&self) -> Option<&Arc<CertGraph>> {
        match self {
            Radical::Exact(_) => None,
            Radical::Approx { graph, .. } => Some(graph),
        }
    }

    fn combine(
        self,
        o: Radical,
        exact: impl FnOnce(&Rational, &Rational) -> Rational,
        numeric: impl FnOnce(CBig, CBig) -> CBig,
        node: impl FnOnce(usize, usize) -> CertNode,
        cancels: bool,
    ) -> Radical {
        if let (Radical::Exact(a), Radical::Exact(b)) = (&self, &o) {
            return Radical::Exact(exact(a, b));
        }
        let graph = self.graph().or(o.graph()).expect("one side is approximate").clone();
        let bits = graph.bits;
        let (va, vb) = (self.value(bits), o.value(bits));
        let scale = log2_size(&va).unwrap_or(i64::MIN).max(log2_size(&vb).unwrap_or(i64::MIN)).max(0);
        let value = numeric(va, vb);
        if cancels {
            match log2_size(&value) {
                None => return Radical::Exact(Rational::zero()),
                Some(l) if l < scale - zero_bits(bits) => return Radical::Exact(Rational::zero()),
                _ => {}
            }
        }
        let id = graph.push(node(self.node_in(&graph), o.node_in(&graph)));
        Radical::Approx {
            value,
            node: id,
            graph,
        }
    }

    fn is_exact_value(&self, v: i64) -> bool {
        matches!(self, Radical::Exact(q) if *q == Rational::from_integer(v.into()))
    }
}

impl PartialEq for Radical {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (Radical::Exact(a), Radical::Exact(b)) => a == b,
            _ => {
                let bits = self.graph().or(o.graph()).map(|g| g.bits).unwrap_or(64);
                let (a, b) = (self.value(bits), o.value(bits));
                let scale = log2_size(&a).unwrap_or(0).max(log2_size(&b).unwrap_or(0)).max(0);
                log2_size(&(a - b)).map_or(true, |l| l < scale - zero_bits(bits))
            }
        }
    }
}

impl Add for Radical {
    type Output = Radical;
    fn add(self, o: Radical) -> Radical {
        if self.is_exact_value(0) {
            return o;
        }
        if o.is_exact_value(0) {
            return self;
        }
        self.combine(o, |a, b| a + b, |a, b| a + b, CertNode::Add, true)
    }
}

impl Sub for Radical {
    type Output = Radical;
    fn sub(self, o: Radical) -> Radical {
        if o.is_exact_value(0) {
            return self;
        }
        self.combine(o, |a, b| a - b, |a, b| a - b, CertNode::Sub, true)
    }
}

impl Mul for Radical {
    type Output = Radical;
    fn mul(self, o: Radical) -> Radical {
        if self.is_exact_value(0) || o.is_exact_value(0) {
            return Radical::Exact(Rational::zero());
        }
        if self.is_exact_value(1) {
            return o;
        }
        if o.is_exact_value(1) {
            return self;
        }
        self.combine(o, |a, b| a * b, |a, b| a * b, CertNode::Mul, false)
    }
}

impl Div for Radical {
    type Output = Radical;
    fn div(self, o: Radical) -> Radical {
        assert!(!o.is_zero(), "division by zero radical");
        if o.is_exact_value(1) || self.is_exact_value(0) {
            return self;
        }
        self.combine(o, |a, b| a / b, |a, b| a / b, CertNode::Div, false)
    }
}

impl Neg for Radical {
    type Output = Radical;
    fn neg(self) -> Radical {
        match self {
            Radical::Exact(q) => Radical::Exact(-q),
            Radical::Approx { value, node, graph } => {
                let id = graph.push(CertNode::Neg(node));
                Radical::Approx {
                    value: -value,
                    node: id,
                    graph,
                }
            }
        }
    }
}

impl Zero for Radical {
    fn zero() -> Self {
        Radical::Exact(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        match self {
            Radical::Exact(q) => q.is_zero(),
            Radical::Approx { value, graph, .. } => {
                log2_size(value).map_or(true, |l| l < -zero_bits(graph.bits))
            }
        }
    }
}

impl One for Radical {
    fn one() -> Self {
        Radical::Exact(Rational::one())
    }
}

impl Field for Radical {
    fn from_rational(q: &Rational) -> Self {
        Radical::Exact(q.clone())
    }

    fn magnitude(&self) -> f64 {
        match self {
            Radical::Exact(q) => q.to_f64().unwrap_or(f64::MAX).abs(),
            Radical::Approx { value, .. } => {
                let m = cabs_max(value).to_f64();
                if m == 0.0 && !self.is_zero() {
                    f64::MIN_POSITIVE
                } else {
                    m
                }
            }
        }
    }

    fn is_negative(&self) -> bool {
        match self {
            Radical::Exact(q) => num_traits::Signed::is_negative(q),
            Radical::Approx { .. } => false,
        }
    }

    fn characteristic() -> u64 {
        0
    }
}

pub fn format_complex(z: &CBig, digits: usize) -> String {
    let re = z.re.to_sci_string(digits);
    if z.im.is_zero() {
        return re;
    }
    let im = z.im.abs().to_sci_string(digits);
    let sign = if z.im.is_negative() { '-' } else { '+' };
    if z.re.is_zero() {
        return format!("{}{im}i", if sign == '-' { "-" } else { "" });
    }
    format!("({re}{sign}{im}i)")
}

impl fmt::Display for Radical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radical::Exact(q) => write!(f, "{q}"),
            Radical::Approx { value, .. } => write!(f, "{}", format_complex(value, f.precision().unwrap_or(12))),
        }
    }
}

/// A self-contained expression DAG whose `outputs` are the certified values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RadicalCertificate {
    pub nodes: Vec<CertNode>,
    pub outputs: Vec<usize>,
}

const MAX_DIGITS: u32 = 4000;

fn digits_to_bits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 64
}

pub fn bits_for_digits(digits: u32) -> u32 {
    digits_to_bits(digits)
}

impl RadicalCertificate {
    /// The part of the shared graph needed by `values`, renumbered densely.
    pub fn extract(values: &[Radical]) -> Self {
        let graph = values.iter().find_map(|v| v.graph().cloned());
        let all = graph.as_ref().map(|g| g.snapshot()).unwrap_or_default();
        let mut needed = vec![false; all.len()];
        let mut stack: Vec<usize> = values
            .iter()
            .filter_map(|v| match v {
                Radical::Approx { node, .. } => Some(*node),
                Radical::Exact(_) => None,
            })
            .collect();
        while let Some(i) = stack.pop() {
            if !needed[i] {
                needed[i] = true;
                stack.extend(all[i].args());
            }
        }
        let mut map = HashMap::new();
        let mut nodes = Vec::new();
        for (i, n) in all.iter().enumerate() {
            if needed[i] {
                map.insert(i, nodes.len());
                nodes.push(n.with_args(&map));
            }
        }
        let mut consts: HashMap<Rational, usize> = HashMap::new();
        let outputs = values
            .iter()
            .map(|v| match v {
                Radical::Approx { node, .. } => map[node],
                Radical::Exact(q) => *consts.entry(q.clone()).or_insert_with(|| {
                    nodes.push(CertNode::Const(q.clone()));
                    nodes.len() - 1
                }),
            })
            .collect();
        RadicalCertificate { nodes, outputs }
    }

    pub fn validate(&self) -> Result<(), CertError> {
        for (i, n) in self.nodes.iter().enumerate() {
            for a in n.args() {
                if a >= i {
                    return Err(CertError::NotAcyclic { node: i, arg: a });
                }
            }
            if let CertNode::RootOf { coeffs, index } = n {
                if !(3..=5).contains(&coeffs.len()) {
                    return Err(CertError::RootDegree(i));
                }
                if *index >= coeffs.len() - 1 {
                    return Err(CertError::RootIndex { node: i, index: *index });
                }
            }
        }
        for &o in &self.outputs {
            if o >= self.nodes.len() {
                return Err(CertError::NotAcyclic {
                    node: self.nodes.len(),
                    arg: o,
                });
            }
        }
        Ok(())
    }

    fn depths(&self) -> Vec<u32> {
        let mut d: Vec<u32> = Vec::with_capacity(self.nodes.len());
        for n in &self.nodes {
            let inner = n.args().iter().map(|&a| d[a]).max().unwrap_or(0);
            d.push(match n {
                CertNode::RootOf { .. } => inner + 1,
                _ => inner,
            });
        }
        d
    }

    /// Longest chain of nested root adjunctions behind any output.
    pub fn root_depth(&self) -> u32 {
        let d = self.depths();
        self.outputs.iter().map(|&o| d[o]).max().unwrap_or(0)
    }

    pub fn max_root_degree(&self) -> usize {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                CertNode::RootOf { coeffs, .. } => Some(coeffs.len() - 1),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn root_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, CertNode::RootOf { .. })).count()
    }

    fn eval_bits(&self, bits: u32) -> Result<Vec<CBig>, EvalFailure> {
        let mut vals: Vec<CBig> = Vec::with_capacity(self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let v = match n {
                CertNode::Const(q) => creal(BigFloat::from_rational(q, bits)),
                CertNode::Add(a, b) => vals[*a].clone() + vals[*b].clone(),
                CertNode::Sub(a, b) => vals[*a].clone() - vals[*b].clone(),
                CertNode::Mul(a, b) => vals[*a].clone() * vals[*b].clone(),
                CertNode::Div(a, b) => {
                    if vals[*b].is_zero() {
                        return Err(EvalFailure::Hard(CertError::DivisionByZero(i)));
                    }
                    vals[*a].clone() / vals[*b].clone()
                }
                CertNode::Neg(a) => -vals[*a].clone(),
                CertNode::RootOf { coeffs, index } => {
                    let cs: Vec<CBig> = coeffs.iter().map(|&c| vals[c].clone()).collect();
                    let lead = cs.last().expect("validated degree");
                    let scale = cs.iter().filter_map(log2_size).max().unwrap_or(0);
                    if log2_size(lead).map_or(true, |l| l < scale - zero_bits(bits)) {
                        return Err(EvalFailure::Hard(CertError::LeadingZero(i)));
                    }
                    let rs = complex::roots(&cs, bits);
                    if complex::ambiguous_order(&rs, bits) {
                        return Err(EvalFailure::Precision);
                    }
                    rs[*index].clone()
                }
            };
            vals.push(v);
        }
        Ok(self.outputs.iter().map(|&o| vals[o].clone()).collect())
    }

    /// Values of the outputs, correct to `digits` significant digits relative
    /// to `max(1, |value|)`. Precision doubles until two evaluations agree.
    pub fn eval(&self, digits: u32) -> Result<Vec<CBig>, CertError> {
        self.validate()?;
        let mut work = digits.max(10) + 10;
        let mut prev: Option<Vec<CBig>> = None;
        while work <= MAX_DIGITS {
            match self.eval_bits(digits_to_bits(work)) {
                Ok(vals) => {
                    if let Some(p) = &prev {
                        if agree(p, &vals, digits) {
                            return Ok(vals);
                        }
                    }
                    prev = Some(vals);
                }
                Err(EvalFailure::Hard(e)) => return Err(e),
                Err(EvalFailure::Precision) => prev = None,
            }
            work *= 2;
        }
        Err(CertError::PrecisionCap(MAX_DIGITS))
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .nodes
            .iter()
            .map(|n| match n {
                CertNode::Const(q) => json!({ "const": q.to_string() }),
                CertNode::Add(a, b) => json!({ "op": "add", "args": [a, b] }),
                CertNode::Sub(a, b) => json!({ "op": "sub", "args": [a, b] }),
                CertNode::Mul(a, b) => json!({ "op": "mul", "args": [a, b] }),
                CertNode::Div(a, b) => json!({ "op": "div", "args": [a, b] }),
                CertNode::Neg(a) => json!({ "op": "neg", "args": [a] }),
                CertNode::RootOf { coeffs, index } => {
                    json!({ "root_of": { "coeffs": coeffs, "index": index } })
                }
            })
            .collect();
        json!({ "nodes": nodes, "outputs": self.outputs })
    }

    pub fn from_json(v: &Value) -> Result<Self, CertError> {
        let bad = |m: &str| CertError::Json(m.to_string());
        let nodes_v = v.get("nodes").and_then(Value::as_array).ok_or_else(|| bad("missing \"nodes\" array"))?;
        let ids = |x: &Value| -> Result<Vec<usize>, CertError> {
            x.as_array()
                .ok_or_else(|| bad("expected an array of node ids"))?
                .iter()
                .map(|i| i.as_u64().map(|i| i as usize).ok_or_else(|| bad("node id must be a natural number")))
                .collect()
        };
        let mut nodes = Vec::new();
        for n in nodes_v {
            let node = if let Some(c) = n.get("const") {
                let q = match c {
                    Value::String(s) => s.parse::<Rational>().map_err(|_| bad(&format!("bad rational {s:?}")))?,
                    Value::Number(x) => x
                        .as_i64()
                        .map(|i| Rational::from_integer(i.into()))
                        .ok_or_else(|| bad("constant must be an integer or \"a/b\" string"))?,
                    _ => return Err(bad("constant must be an integer or \"a/b\" string")),
                };
                CertNode::Const(q)
            } else if let Some(r) = n.get("root_of") {
                let coeffs = ids(r.get("coeffs").ok_or_else(|| bad("root_of needs coeffs"))?)?;
                let index = r
                    .get("index")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| bad("root_of needs a natural index"))? as usize;
                CertNode::RootOf { coeffs, index }
            } else {
                let op = n.get("op").and_then(Value::as_str).ok_or_else(|| bad("node needs const, op or root_of"))?;
                let args = ids(n.get("args").ok_or_else(|| bad("op node needs args"))?)?;
                let arity = if op == "neg" { 1 } else { 2 };
                if args.len() != arity {
                    return Err(bad(&format!("{op} takes {arity} arguments")));
                }
                match op {
                    "add" => CertNode::Add(args[0], args[1]),
                    "sub" => CertNode::Sub(args[0], args[1]),
                    "mul" => CertNode::Mul(args[0], args[1]),
                    "div" => CertNode::Div(args[0], args[1]),
                    "neg" => CertNode::Neg(args[0]),
                    _ => return Err(bad(&format!("unknown op {op:?}"))),
                }
            };
            nodes.push(node);
        }
        let outputs = match v.get("outputs") {
            Some(o) => ids(o)?,
            None if !nodes.is_empty() => vec![nodes.len() - 1],
            None => vec![],
        };
        let cert = RadicalCertificate { nodes, outputs };
        cert.validate()?;
        Ok(cert)
    }
}

enum EvalFailure {
    Hard(CertError),
    Precision,
}

fn agree(a: &[CBig], b: &[CBig], digits: u32) -> bool {
    let tol = -((digits as f64 * std::f64::consts::LOG2_10).ceil() as i64) - 2;
    a.iter().zip(b).all(|(x, y)| {
        let scale = log2_size(x).unwrap_or(0).max(0);
        log2_size(&(x.clone() - y.clone())).map_or(true, |l| l < scale + tol)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn sqrt2_cert() -> RadicalCertificate {
        RadicalCertificate::from_json(&json!({
            "nodes": [{"const": "-2"}, {"const": "0"}, {"const": "1"},
                      {"root_of": {"coeffs": [0, 1, 2], "index": 0}}],
            "outputs": [3]
        }))
        .unwrap()
    }

    #[test]
    fn sqrt2_to_100_digits() {
        let v = sqrt2_cert().eval(100).unwrap();
        let s = v[0].re.to_sci_string(100);
        assert!(s.starts_with(
            "1.41421356237309504880168872420969807856967187537694807317667973799073247846210703885038753432764157"
        ), "{s}");
        assert_eq!(sqrt2_cert().root_depth(), 1);
    }

    #[test]
    fn fourth_root_of_two() {
        let c = RadicalCertificate::from_json(&json!({
            "nodes": [{"const": "-2"}, {"const": "0"}, {"const": "1"},
                      {"root_of": {"coeffs": [0, 1, 2], "index": 0}},
                      {"op": "neg", "args": [3]},
                      {"root_of": {"coeffs": [4, 1, 2], "index": 0}}],
            "outputs": [5]
        }))
        .unwrap();
        let v = c.eval(60).unwrap();
        assert!(v[0].re.to_sci_string(16).starts_with("1.18920711500272"));
        let x = v[0].clone();
        let x4 = x.clone() * x.clone() * x.clone() * x;
        let err = x4.re - BigFloat::from_int(2, 300);
        assert!(err.log2_floor().map_or(true, |l| l < -190));
        assert_eq!(c.root_depth(), 2);
    }

    #[test]
    fn double_root_indices() {
        for index in 0..2 {
            let c = RadicalCertificate::from_json(&json!({
                "nodes": [{"const": 1}, {"const": -2}, {"const": 1},
                          {"root_of": {"coeffs": [0, 1, 2], "index": index}}]
            }))
            .unwrap();
            let v = c.eval(30).unwrap();
            assert!((v[0].re.to_f64() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn malformed_certificates() {
        let cyc = json!({"nodes": [{"op": "neg", "args": [0]}]});
        assert!(matches!(RadicalCertificate::from_json(&cyc), Err(CertError::NotAcyclic { .. })));
        let deg = json!({"nodes": [{"const": 1}, {"const": 2}, {"root_of": {"coeffs": [0, 1], "index": 0}}]});
        assert_eq!(RadicalCertificate::from_json(&deg), Err(CertError::RootDegree(2)));
        let idx = json!({"nodes": [{"const": 1}, {"root_of": {"coeffs": [0, 0, 0], "index": 2}}]});
        assert!(matches!(RadicalCertificate::from_json(&idx), Err(CertError::RootIndex { .. })));
        let lead = json!({"nodes": [{"const": 1}, {"const": 0}, {"root_of": {"coeffs": [0, 0, 1], "index": 0}}]});
        assert_eq!(RadicalCertificate::from_json(&lead).unwrap().eval(20), Err(CertError::LeadingZero(2)));
        let div = json!({"nodes": [{"const": 1}, {"const": 0}, {"op": "div", "args": [0, 1]}]});
        assert_eq!(RadicalCertificate::from_json(&div).unwrap().eval(20), Err(CertError::DivisionByZero(2)));
    }

    #[test]
    fn arithmetic_records_nodes_and_cancels() {
        let g = CertGraph::new(300);
        let r = Radical::root(&g, &[Radical::from_i64(-2), Radical::zero(), Radical::one()], 0, {
            creal(BigFloat::from_int(2, 300).sqrt())
        });
        let sq = r.clone() * r.clone();
        assert!(sq == Radical::from_i64(2));
        let diff = sq - Radical::from_i64(2);
        assert!(diff.is_zero());
        assert!(matches!(diff, Radical::Exact(_)));
        let x = (r.clone() + Radical::one()) / Radical::Exact(rat(1, 2));
        let cert = RadicalCertificate::extract(&[x.clone(), Radical::Exact(rat(3, 7))]);
        assert_eq!(cert.outputs.len(), 2);
        let v = cert.eval(50).unwrap();
        assert!((v[0].re.to_f64() - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!((v[1].re.to_f64() - 3.0 / 7.0).abs() < 1e-15);
        assert_eq!(x.root_depth(), 1);
        let back = RadicalCertificate::from_json(&cert.to_json()).unwrap();
        assert_eq!(back, cert);
    }
}
