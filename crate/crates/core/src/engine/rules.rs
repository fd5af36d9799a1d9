//! The three closure rules on coefficient lines.
//!
//! * A (socle capture): a nonzero intersection of π' with a copy
//!   `(Σ c_i ι_i)(D_{0,σ})` or `(Σ c_i ι_i)(D_{0,σ^s})` forces the whole
//!   `(Σ c_i ι_i)(D₀)` into π'.
//! * B (shift): Π on the χ_τ and χ_τ^s lines moves a full line to its
//!   neighbours `c_i -> c_(i±1)`.
//! * C (twist-subtract): Π on the χ_τ' lines scales entry i by λ_i;
//!   subtracting μ times the χ_τ'^s lines leaves `((λ_i - μ) c_i)`.

use serde::{Deserialize, Serialize};

use super::coeff::CoeffVec;
use super::lambda::LambdaSeq;
use super::EngineError;
use crate::ffield::FElem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    A,
    B,
    C,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    pub fn offset(self) -> i64 {
        match self {
            Direction::Up => 1,
            Direction::Down => -1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ShiftOutcome {
    Shifted(CoeffVec),
    OutOfWindow,
}

/// Rule A. The returned vector is flagged full by the caller.
pub fn rule_socle_capture(v: &CoeffVec) -> Result<CoeffVec, EngineError> {
    if v.is_zero() {
        return Err(EngineError::ZeroVector);
    }
    Ok(v.clone())
}

/// Rule B. Any support index leaving `[-radius, radius]` is reported.
pub fn rule_shift(v: &CoeffVec, direction: Direction, radius: i64) -> ShiftOutcome {
    let w = v.shifted(direction.offset());
    if w.fits_in(radius) {
        ShiftOutcome::Shifted(w)
    } else {
        ShiftOutcome::OutOfWindow
    }
}

/// Values of λ on the support of `v`, deduplicated, in index order.
pub fn allowed_mus(v: &CoeffVec, lambda: &LambdaSeq) -> Result<Vec<FElem>, EngineError> {
    let mut out: Vec<FElem> = Vec::new();
    for i in v.support() {
        let l = lambda.get(i).ok_or(EngineError::OutsideWindow {
            index: i,
            radius: lambda.radius(),
        })?;
        if !out.contains(&l) {
            out.push(l);
        }
    }
    Ok(out)
}

/// Rule C. `mu` must be one of the λ_j with j in the support of `v`. The
/// result may be the zero vector.
pub fn rule_twist_subtract(v: &CoeffVec, lambda: &LambdaSeq, mu: FElem) -> Result<CoeffVec, EngineError> {
    if !allowed_mus(v, lambda)?.contains(&mu) {
        return Err(EngineError::MuNotAllowed);
    }
    let f = lambda.field();
    let entries = v.iter().map(|(i, c)| {
        let l = lambda.get(i).expect("checked by allowed_mus");
        (i, f.mul(f.sub(l, mu), c))
    });
    Ok(CoeffVec::new(f, entries))
}
