use serde::{Deserialize, Serialize};

use super::{Monomial, MultiPoly, Vars};
use crate::error::PolyError;
use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl MultiPoly<Rational> {
    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.to_vec(),
            terms: self
                .terms()
                .rev()
                .map(|(m, c)| TermJson {
                    exp: m.0.clone(),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, PolyError> {
        let vars: Vars = j.vars.clone().into();
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exp.len() != vars.len() {
                return Err(PolyError::DimensionMismatch {
                    expected: vars.len(),
                    found: t.exp.len(),
                });
            }
            let c: Rational = t
                .coeff
                .trim()
                .parse()
                .map_err(|_| PolyError::Json(format!("bad coefficient {:?}", t.coeff)))?;
            terms.push((Monomial(t.exp.clone()), c));
        }
        Ok(MultiPoly::from_terms(vars, terms))
    }
}
