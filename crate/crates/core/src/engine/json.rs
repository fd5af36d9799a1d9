//! JSON forms of field elements and coefficient vectors. Elements are
//! written as coordinate arrays, low degree first; on input a bare integer
//! is accepted as an element of the prime field.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::coeff::CoeffVec;
use super::EngineError;
use crate::ffield::{FElem, Field};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemInput {
    Int(i64),
    Coords(Vec<u32>),
}

impl ElemInput {
    pub fn to_elem(&self, f: &Field) -> Result<FElem, EngineError> {
        match self {
            ElemInput::Int(k) => Ok(f.from_int(*k)),
            ElemInput::Coords(c) => Ok(f.from_coords(c)?),
        }
    }
}

pub type ElemJson = Vec<u32>;

/// `{"index": [coords], ...}` in increasing index order.
pub type CoeffJson = BTreeMap<i64, ElemJson>;

pub fn elem_json(f: &Field, x: FElem) -> ElemJson {
    f.coords(x)
}

pub fn coeff_json(f: &Field, v: &CoeffVec) -> CoeffJson {
    v.iter().map(|(i, c)| (i, f.coords(c))).collect()
}

pub fn parse_coeff(f: &Field, text: &str) -> Result<CoeffVec, EngineError> {
    let raw: BTreeMap<i64, ElemInput> =
        serde_json::from_str(text).map_err(|e| EngineError::Json(e.to_string()))?;
    let entries = raw
        .iter()
        .map(|(&i, e)| Ok((i, e.to_elem(f)?)))
        .collect::<Result<Vec<_>, EngineError>>()?;
    Ok(CoeffVec::new(f, entries))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_ints_and_coords() {
        let f = Field::new(5, 4).unwrap();
        let v = parse_coeff(&f, r#"{"0": 1, "3": [2, 0, 0, 0]}"#).unwrap();
        assert_eq!(v.support_len(), 2);
        assert_eq!(v.get(3), Some(f.from_int(2)));
        let out = serde_json::to_string(&coeff_json(&f, &v)).unwrap();
        assert_eq!(out, r#"{"0":[1,0,0,0],"3":[2,0,0,0]}"#);
        assert!(parse_coeff(&f, r#"{"0": [1, 0]}"#).is_err());
        assert!(parse_coeff(&f, "[1, 2]").is_err());
    }
}
