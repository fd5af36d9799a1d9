//! Directed certification: the minimal-support argument run as an
//! algorithm, followed by shifts across the window.
//!
//! Each reduction round shifts the live vector until its lowest support
//! index sits at 0, then applies rule C with μ = λ_0. λ is indexed by the
//! absolute position, so the pivot is always index 0 and only the
//! hypothesis λ_i ≠ λ_0 (i ≠ 0) is needed for every round to remove exactly
//! one index.

use std::collections::BTreeSet;

use serde::Serialize;

use super::coeff::CoeffVec;
use super::json::{coeff_json, elem_json, CoeffJson, ElemJson};
use super::lambda::LambdaSeq;
use super::rules::{
    allowed_mus, rule_shift, rule_socle_capture, rule_twist_subtract, Direction, Rule, ShiftOutcome,
};
use super::EngineError;
use crate::diamond::GaloisParams;
use crate::ffield::{FElem, Field};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Step {
    pub rule: Rule,
    pub input: CoeffVec,
    pub output: CoeffVec,
    pub mu: Option<FElem>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StepJson {
    pub rule: Rule,
    #[serde(rename = "in")]
    pub input: CoeffJson,
    #[serde(rename = "out")]
    pub output: CoeffJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<ElemJson>,
}

impl Step {
    pub fn to_json(&self, f: &Field) -> StepJson {
        StepJson {
            rule: self.rule,
            input: coeff_json(f, &self.input),
            output: coeff_json(f, &self.output),
            mu: self.mu.map(|m| elem_json(f, m)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Reduction {
    pub steps: Vec<Step>,
    pub terminal: CoeffVec,
    pub twist_steps: usize,
}

#[derive(Debug, Clone)]
pub struct StuckReport {
    /// The live vector, normalized so that 0 is in its support.
    pub stuck: CoeffVec,
    /// `(0, j)`: the first support index j ≠ 0 with λ_j = λ_0.
    pub collision: (i64, i64),
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, Serialize)]
pub struct StuckJson {
    pub stuck: CoeffJson,
    pub collision: [i64; 2],
}

impl StuckReport {
    pub fn to_json(&self, f: &Field) -> StuckJson {
        StuckJson {
            stuck: coeff_json(f, &self.stuck),
            collision: [self.collision.0, self.collision.1],
        }
    }
}

#[derive(Debug, Clone)]
pub enum Outcome<T> {
    Certified(T),
    Stuck(StuckReport),
}

impl<T> Outcome<T> {
    pub fn certified(self) -> Option<T> {
        match self {
            Outcome::Certified(t) => Some(t),
            Outcome::Stuck(_) => None,
        }
    }

    pub fn is_certified(&self) -> bool {
        matches!(self, Outcome::Certified(_))
    }
}

/// Smallest window radius in which [`reduce_support`] never leaves the
/// window, whatever λ is: the start must fit, and the first normalization
/// moves the support into `[0, max - min]`.
pub fn reduction_radius(start: &CoeffVec) -> i64 {
    start.max_abs_index().max(start.span())
}

/// `B = #supp + max|supp index|`.
pub fn shift_budget(start: &CoeffVec) -> i64 {
    start.support_len() as i64 + start.max_abs_index()
}

/// Smallest radius accepted by [`certify_irreducible`].
pub fn certify_radius(start: &CoeffVec) -> i64 {
    reduction_radius(start).max(shift_budget(start))
}

fn check_start(start: &CoeffVec, lambda: &LambdaSeq) -> Result<(), EngineError> {
    if start.is_zero() {
        return Err(EngineError::ZeroVector);
    }
    if let Some(i) = start.support().find(|&i| !lambda.contains(i)) {
        return Err(EngineError::OutsideWindow {
            index: i,
            radius: lambda.radius(),
        });
    }
    Ok(())
}

fn shift_until(
    mut v: CoeffVec,
    target_min: i64,
    radius: i64,
    steps: &mut Vec<Step>,
) -> Result<CoeffVec, EngineError> {
    while let Some(lo) = v.min_index().filter(|&lo| lo != target_min) {
        let dir = if lo > target_min {
            Direction::Down
        } else {
            Direction::Up
        };
        match rule_shift(&v, dir, radius) {
            ShiftOutcome::Shifted(w) => {
                steps.push(Step {
                    rule: Rule::B,
                    input: v,
                    output: w.clone(),
                    mu: None,
                });
                v = w;
            }
            ShiftOutcome::OutOfWindow => {
                return Err(EngineError::WindowOverflow {
                    required: radius + 1,
                    radius,
                })
            }
        }
    }
    Ok(v)
}

/// Runs rule A on `start`, then shift-and-twist rounds until one index
/// remains.
pub fn reduce_support(start: &CoeffVec, lambda: &LambdaSeq) -> Result<Outcome<Reduction>, EngineError> {
    check_start(start, lambda)?;
    let radius = lambda.radius();
    let required = reduction_radius(start);
    if required > radius {
        return Err(EngineError::WindowOverflow { required, radius });
    }
    let lambda0 = lambda.get(0).expect("window contains 0");
    let mut steps = vec![Step {
        rule: Rule::A,
        input: start.clone(),
        output: rule_socle_capture(start)?,
        mu: None,
    }];
    let mut v = start.clone();
    let mut twist_steps = 0;
    while !v.is_singleton() {
        v = shift_until(v, 0, radius, &mut steps)?;
        let w = rule_twist_subtract(&v, lambda, lambda0)?;
        steps.push(Step {
            rule: Rule::C,
            input: v.clone(),
            output: w.clone(),
            mu: Some(lambda0),
        });
        if w.is_zero() {
            let j = v
                .support()
                .find(|&j| j != 0 && lambda.get(j) == Some(lambda0))
                .expect("a zero twist needs a collision");
            return Ok(Outcome::Stuck(StuckReport {
                stuck: v,
                collision: (0, j),
                steps,
            }));
        }
        steps.push(Step {
            rule: Rule::A,
            input: w.clone(),
            output: rule_socle_capture(&w)?,
            mu: None,
        });
        twist_steps += 1;
        v = w;
    }
    Ok(Outcome::Certified(Reduction {
        steps,
        terminal: v,
        twist_steps,
    }))
}

#[derive(Debug, Clone)]
pub struct Certificate {
    pub params: GaloisParams,
    pub start: CoeffVec,
    pub steps: Vec<Step>,
    pub terminal: CoeffVec,
    pub twist_steps: usize,
    pub shift_budget: i64,
    pub covered_window: (i64, i64),
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CertificateJson {
    pub params: GaloisParams,
    pub start: CoeffJson,
    pub steps: Vec<StepJson>,
    pub terminal: CoeffJson,
    pub twist_steps: usize,
    pub shift_budget: i64,
    pub covered_window: [i64; 2],
    pub seed: Option<u64>,
}

impl Certificate {
    pub fn to_json(&self, f: &Field) -> CertificateJson {
        CertificateJson {
            params: self.params,
            start: coeff_json(f, &self.start),
            steps: self.steps.iter().map(|s| s.to_json(f)).collect(),
            terminal: coeff_json(f, &self.terminal),
            twist_steps: self.twist_steps,
            shift_budget: self.shift_budget,
            covered_window: [self.covered_window.0, self.covered_window.1],
            seed: self.seed,
        }
    }

    /// Every vector the certificate proves full, in order of appearance.
    pub fn full_vectors(&self) -> Vec<&CoeffVec> {
        let mut seen = BTreeSet::new();
        self.steps
            .iter()
            .filter(|s| s.rule != Rule::C)
            .map(|s| &s.output)
            .filter(|v| seen.insert(*v))
            .collect()
    }

    /// Replays the certificate against λ independently of how it was
    /// produced: each A consumes the start or a C output, each B and C
    /// consumes a vector already proven full, and every unit vector of the
    /// covered window must end up full.
    pub fn replay(&self, lambda: &LambdaSeq) -> Result<(), String> {
        let f = lambda.field();
        let radius = lambda.radius();
        let mut full: BTreeSet<CoeffVec> = BTreeSet::new();
        let mut pending: BTreeSet<CoeffVec> = BTreeSet::new();
        pending.insert(self.start.clone());
        let mut twists = 0;
        for (n, s) in self.steps.iter().enumerate() {
            let fail = |why: &str| Err(format!("step {n} ({:?}): {why}", s.rule));
            match s.rule {
                Rule::A => {
                    if !pending.contains(&s.input) || s.input.is_zero() || s.output != s.input {
                        return fail("not a socle capture of a known intersection");
                    }
                    full.insert(s.output.clone());
                }
                Rule::B => {
                    if !full.contains(&s.input) {
                        return fail("input not known to be full");
                    }
                    let ok = [Direction::Up, Direction::Down].iter().any(|&d| {
                        rule_shift(&s.input, d, radius) == ShiftOutcome::Shifted(s.output.clone())
                    });
                    if !ok {
                        return fail("output is not a neighbouring shift");
                    }
                    full.insert(s.output.clone());
                }
                Rule::C => {
                    if !full.contains(&s.input) {
                        return fail("input not known to be full");
                    }
                    let Some(mu) = s.mu else {
                        return fail("missing μ");
                    };
                    let allowed = allowed_mus(&s.input, lambda).map_err(|e| e.to_string())?;
                    if !allowed.contains(&mu) {
                        return fail("μ not among the support values of λ");
                    }
                    let out = rule_twist_subtract(&s.input, lambda, mu).map_err(|e| e.to_string())?;
                    if out != s.output {
                        return fail("twist output mismatch");
                    }
                    twists += 1;
                    pending.insert(out);
                }
            }
        }
        if twists != self.twist_steps {
            return Err(format!("twist count {twists} != declared {}", self.twist_steps));
        }
        if !full.contains(&self.terminal) || !self.terminal.is_singleton() {
            return Err("terminal vector is not a full singleton".into());
        }
        let (lo, hi) = self.covered_window;
        if let Some(j) = (lo..=hi).find(|&j| !full.contains(&CoeffVec::unit(f, j))) {
            return Err(format!("unit vector e_{j} not reached"));
        }
        Ok(())
    }
}

/// Reduces `start` to a singleton, then shifts it across the inner window
/// `[-N + B, N - B]`.
pub fn certify_irreducible(
    start: &CoeffVec,
    lambda: &LambdaSeq,
    params: &GaloisParams,
) -> Result<Outcome<Certificate>, EngineError> {
    check_start(start, lambda)?;
    let radius = lambda.radius();
    let required = certify_radius(start);
    if required > radius {
        return Err(EngineError::WindowOverflow { required, radius });
    }
    let reduction = match reduce_support(start, lambda)? {
        Outcome::Certified(r) => r,
        Outcome::Stuck(s) => return Ok(Outcome::Stuck(s)),
    };
    let budget = shift_budget(start);
    let (lo, hi) = (-radius + budget, radius - budget);
    let mut steps = reduction.steps;
    let terminal = reduction.terminal;
    let j = terminal.min_index().expect("singleton");
    let f = lambda.field();
    // walk down to lo, then up from the terminal to hi
    shift_until(terminal.clone(), lo.min(j), radius, &mut steps)?;
    shift_until(terminal.clone(), hi.max(j), radius, &mut steps)?;
    let cert = Certificate {
        params: *params,
        start: start.clone(),
        steps,
        terminal,
        twist_steps: reduction.twist_steps,
        shift_budget: budget,
        covered_window: (lo, hi),
        seed: lambda.seed(),
    };
    debug_assert!((lo..=hi).all(|k| cert.full_vectors().contains(&&CoeffVec::unit(f, k))));
    Ok(Outcome::Certified(cert))
}
