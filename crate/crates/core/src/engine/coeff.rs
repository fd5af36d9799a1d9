use std::collections::BTreeMap;

use crate::ffield::{FElem, Field};

/// A finitely supported coefficient vector `(c_i)`, naming the line
/// `(Σ c_i ι_i)(D₀)`. Always stored in projective canonical form: zero
/// entries dropped, lowest-index entry scaled to 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CoeffVec {
    entries: BTreeMap<i64, FElem>,
}

impl CoeffVec {
    /// Duplicate indices are summed before canonicalizing.
    pub fn new(f: &Field, entries: impl IntoIterator<Item = (i64, FElem)>) -> CoeffVec {
        let mut acc: BTreeMap<i64, FElem> = BTreeMap::new();
        for (i, c) in entries {
            let slot = acc.entry(i).or_insert(FElem::ZERO);
            *slot = f.add(*slot, c);
        }
        acc.retain(|_, c| !c.is_zero());
        let mut v = CoeffVec { entries: acc };
        v.normalize(f);
        v
    }

    pub fn zero() -> CoeffVec {
        CoeffVec::default()
    }

    /// The unit vector e_i.
    pub fn unit(f: &Field, i: i64) -> CoeffVec {
        CoeffVec::new(f, [(i, f.one())])
    }

    fn normalize(&mut self, f: &Field) {
        if let Some((_, &lead)) = self.entries.iter().next() {
            let inv = f.inv(lead).expect("stored entries are nonzero");
            for c in self.entries.values_mut() {
                *c = f.mul(*c, inv);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `#(c_i)`, the number of nonzero entries.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_singleton(&self) -> bool {
        self.entries.len() == 1
    }

    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, FElem)> + '_ {
        self.entries.iter().map(|(&i, &c)| (i, c))
    }

    pub fn get(&self, i: i64) -> Option<FElem> {
        self.entries.get(&i).copied()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    pub fn max_abs_index(&self) -> i64 {
        self.entries.keys().map(|i| i.abs()).max().unwrap_or(0)
    }

    /// `max - min` over the support.
    pub fn span(&self) -> i64 {
        match (self.min_index(), self.max_index()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Every index moved by `by`; scaling is unaffected.
    pub fn shifted(&self, by: i64) -> CoeffVec {
        CoeffVec {
            entries: self.entries.iter().map(|(&i, &c)| (i + by, c)).collect(),
        }
    }

    pub fn fits_in(&self, radius: i64) -> bool {
        self.max_abs_index() <= radius
    }
}
