use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::json::ElemInput;
use super::EngineError;
use crate::ffield::{FElem, Field};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaMode {
    /// λ_i ≠ λ_0 for i ≠ 0; collisions elsewhere allowed.
    RandomSeparated,
    /// Pairwise distinct on the window.
    RandomDistinct,
    Constant,
    Explicit,
}

impl std::str::FromStr for LambdaMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random_separated" => Ok(LambdaMode::RandomSeparated),
            "random_distinct" => Ok(LambdaMode::RandomDistinct),
            "constant" => Ok(LambdaMode::Constant),
            "explicit" => Ok(LambdaMode::Explicit),
            other => Err(format!("unknown λ mode {other:?}")),
        }
    }
}

/// The scalars λ_i on the window `[-N, N]`, all nonzero.
#[derive(Debug, Clone)]
pub struct LambdaSeq {
    field: Arc<Field>,
    radius: i64,
    values: Vec<FElem>,
    mode: LambdaMode,
    seed: Option<u64>,
}

impl LambdaSeq {
    fn validated(
        field: Arc<Field>,
        radius: i64,
        values: Vec<FElem>,
        mode: LambdaMode,
        seed: Option<u64>,
    ) -> Result<LambdaSeq, EngineError> {
        if radius < 1 {
            return Err(EngineError::BadWindow(radius));
        }
        debug_assert_eq!(values.len() as i64, 2 * radius + 1);
        if let Some(pos) = values.iter().position(|v| v.is_zero()) {
            return Err(EngineError::ZeroLambda(pos as i64 - radius));
        }
        Ok(LambdaSeq {
            field,
            radius,
            values,
            mode,
            seed,
        })
    }

    pub fn from_fn(
        field: Arc<Field>,
        radius: i64,
        f: impl Fn(i64) -> FElem,
    ) -> Result<LambdaSeq, EngineError> {
        let values = (-radius..=radius).map(f).collect();
        Self::validated(field, radius, values, LambdaMode::Explicit, None)
    }

    /// Every index of the window must be present.
    pub fn explicit(
        field: Arc<Field>,
        radius: i64,
        values: &BTreeMap<i64, FElem>,
    ) -> Result<LambdaSeq, EngineError> {
        if radius < 1 {
            return Err(EngineError::BadWindow(radius));
        }
        let values = (-radius..=radius)
            .map(|i| values.get(&i).copied().ok_or(EngineError::MissingLambda(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::validated(field, radius, values, LambdaMode::Explicit, None)
    }

    pub fn constant(field: Arc<Field>, radius: i64, value: FElem) -> Result<LambdaSeq, EngineError> {
        let values = vec![value; (2 * radius + 1).max(0) as usize];
        Self::validated(field, radius, values, LambdaMode::Constant, None)
    }

    /// Constant sequence with a seeded random value.
    pub fn random_constant(field: Arc<Field>, radius: i64, seed: u64) -> Result<LambdaSeq, EngineError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let value = field.random_nonzero(&mut rng);
        let mut seq = Self::constant(field, radius, value)?;
        seq.seed = Some(seed);
        Ok(seq)
    }

    /// Rejection-sampled pairwise-distinct values, drawn in index order.
    pub fn random_distinct(field: Arc<Field>, radius: i64, seed: u64) -> Result<LambdaSeq, EngineError> {
        if radius < 1 {
            return Err(EngineError::BadWindow(radius));
        }
        let needed = 2 * radius + 1;
        let available = field.order() as i64 - 1;
        if needed > available {
            return Err(EngineError::NotEnoughElements { needed, available });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut used = std::collections::HashSet::new();
        let mut values = Vec::with_capacity(needed as usize);
        for _ in 0..needed {
            let v = loop {
                let v = field.random_nonzero(&mut rng);
                if used.insert(v) {
                    break v;
                }
            };
            values.push(v);
        }
        Self::validated(field, radius, values, LambdaMode::RandomDistinct, Some(seed))
    }

    /// λ_0 first, then every other index in increasing order, each drawn
    /// uniformly from the nonzero elements other than λ_0.
    pub fn random_separated(field: Arc<Field>, radius: i64, seed: u64) -> Result<LambdaSeq, EngineError> {
        if radius < 1 {
            return Err(EngineError::BadWindow(radius));
        }
        if field.order() < 3 {
            return Err(EngineError::NotEnoughElements {
                needed: 2,
                available: field.order() as i64 - 1,
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lambda0 = field.random_nonzero(&mut rng);
        let values = (-radius..=radius)
            .map(|i| {
                if i == 0 {
                    return lambda0;
                }
                loop {
                    let v = field.random_nonzero(&mut rng);
                    if v != lambda0 {
                        break v;
                    }
                }
            })
            .collect();
        Self::validated(field, radius, values, LambdaMode::RandomSeparated, Some(seed))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Field> {
        Arc::clone(&self.field)
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn mode(&self) -> LambdaMode {
        self.mode
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    pub fn contains(&self, i: i64) -> bool {
        (-self.radius..=self.radius).contains(&i)
    }

    pub fn get(&self, i: i64) -> Option<FElem> {
        self.contains(i).then(|| self.values[(i + self.radius) as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, FElem)> + '_ {
        (-self.radius..=self.radius).zip(self.values.iter().copied())
    }

    /// λ_i ≠ λ_0 for every i ≠ 0 in the window.
    pub fn separated_at_0(&self) -> bool {
        let l0 = self.values[self.radius as usize];
        self.iter().all(|(i, v)| i == 0 || v != l0)
    }

    pub fn pairwise_distinct(&self) -> bool {
        let set: std::collections::HashSet<FElem> = self.values.iter().copied().collect();
        set.len() == self.values.len()
    }

    pub fn to_spec(&self) -> LambdaSpec {
        LambdaSpec {
            p: self.field.p(),
            ext_degree: self.field.degree(),
            window: self.radius,
            mode: self.mode,
            seed: self.seed.unwrap_or(0),
            values: Some(
                self.iter()
                    .map(|(i, v)| (i, ElemInput::Coords(self.field.coords(v))))
                    .collect(),
            ),
        }
    }
}

/// λ-spec JSON. `ext_degree` is the full degree n of the λ field F_{p^n}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LambdaSpec {
    pub p: u32,
    #[serde(default = "default_ext_degree")]
    pub ext_degree: usize,
    pub window: i64,
    pub mode: LambdaMode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<BTreeMap<i64, ElemInput>>,
}

pub fn default_ext_degree() -> usize {
    4
}

impl LambdaSpec {
    pub fn build(&self) -> Result<LambdaSeq, EngineError> {
        let field = Arc::new(Field::new(self.p, self.ext_degree)?);
        self.build_in(field)
    }

    pub fn build_in(&self, field: Arc<Field>) -> Result<LambdaSeq, EngineError> {
        let parsed = self
            .values
            .as_ref()
            .map(|vals| {
                vals.iter()
                    .map(|(&i, e)| Ok((i, e.to_elem(&field)?)))
                    .collect::<Result<BTreeMap<i64, FElem>, EngineError>>()
            })
            .transpose()?;
        match self.mode {
            LambdaMode::RandomSeparated => LambdaSeq::random_separated(field, self.window, self.seed),
            LambdaMode::RandomDistinct => LambdaSeq::random_distinct(field, self.window, self.seed),
            LambdaMode::Constant => match parsed.as_ref().and_then(|v| v.get(&0)) {
                Some(&v) => LambdaSeq::constant(field, self.window, v),
                None => LambdaSeq::random_constant(field, self.window, self.seed),
            },
            LambdaMode::Explicit => {
                let vals = parsed.ok_or(EngineError::MissingLambda(0))?;
                LambdaSeq::explicit(field, self.window, &vals)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f625() -> Arc<Field> {
        Arc::new(Field::new(5, 4).unwrap())
    }

    #[test]
    fn modes_satisfy_their_predicates() {
        let f = f625();
        let d = LambdaSeq::random_distinct(f.clone(), 50, 7).unwrap();
        assert!(d.pairwise_distinct() && d.separated_at_0());
        let s = LambdaSeq::random_separated(f.clone(), 200, 7).unwrap();
        assert!(s.separated_at_0());
        let c = LambdaSeq::random_constant(f, 10, 1).unwrap();
        assert!(!c.separated_at_0());
        assert_eq!(c.get(-10), c.get(10));
        assert_eq!(c.get(11), None);
    }

    #[test]
    fn separated_mode_allows_collisions_away_from_zero() {
        // 401 values drawn from 623 admissible elements collide with near certainty
        let s = LambdaSeq::random_separated(f625(), 200, 3).unwrap();
        assert!(!s.pairwise_distinct());
    }

    #[test]
    fn seeded_generation_is_reproducible() {
        let a = LambdaSeq::random_distinct(f625(), 30, 99).unwrap();
        let b = LambdaSeq::random_distinct(f625(), 30, 99).unwrap();
        assert_eq!(a.values, b.values);
        let c = LambdaSeq::random_distinct(f625(), 30, 100).unwrap();
        assert_ne!(a.values, c.values);
    }

    #[test]
    fn window_and_capacity_errors() {
        let f25 = Arc::new(Field::new(5, 2).unwrap());
        assert!(matches!(
            LambdaSeq::random_distinct(f25, 12, 0),
            Err(EngineError::NotEnoughElements { needed: 25, available: 24 })
        ));
        assert!(matches!(
            LambdaSeq::random_separated(f625(), 0, 0),
            Err(EngineError::BadWindow(0))
        ));
        let f = f625();
        let mut vals = BTreeMap::new();
        vals.insert(-1, f.one());
        vals.insert(0, f.one());
        assert!(matches!(
            LambdaSeq::explicit(f.clone(), 1, &vals),
            Err(EngineError::MissingLambda(1))
        ));
        vals.insert(1, f.zero());
        assert!(matches!(
            LambdaSeq::explicit(f, 1, &vals),
            Err(EngineError::ZeroLambda(1))
        ));
    }

    #[test]
    fn spec_round_trip() {
        let s = LambdaSeq::random_separated(f625(), 5, 11).unwrap();
        let spec = s.to_spec();
        let text = serde_json::to_string(&spec).unwrap();
        let back: LambdaSpec = serde_json::from_str(&text).unwrap();
        let rebuilt = back.build().unwrap();
        assert_eq!(rebuilt.values, s.values);
        let explicit = LambdaSpec {
            mode: LambdaMode::Explicit,
            ..back
        };
        assert_eq!(explicit.build().unwrap().values, s.values);
    }
}
