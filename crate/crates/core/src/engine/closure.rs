//! Exploratory fixpoint search: apply rules A/B/C breadth-first from a set
//! of starting lines until nothing new appears or a cap is hit.

use std::collections::{HashSet, VecDeque};

use super::certify::Step;
use super::coeff::CoeffVec;
use super::lambda::LambdaSeq;
use super::rules::{
    allowed_mus, rule_shift, rule_socle_capture, rule_twist_subtract, Direction, Rule, ShiftOutcome,
};
use super::EngineError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_states: usize,
    pub max_steps: usize,
}

impl Caps {
    pub fn states(max_states: usize) -> Caps {
        Caps {
            max_states,
            max_steps: max_states.saturating_mul(64),
        }
    }
}

impl Default for Caps {
    fn default() -> Self {
        Caps::states(100_000)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClosureStatus {
    Fixpoint,
    CapExceeded,
}

#[derive(Debug, Clone)]
pub struct ClosureState {
    known: HashSet<CoeffVec>,
    /// Full vectors in discovery order.
    order: Vec<CoeffVec>,
    worklist: VecDeque<CoeffVec>,
    trace: Vec<Step>,
    steps: usize,
    status: ClosureStatus,
}

impl ClosureState {
    fn new() -> ClosureState {
        ClosureState {
            known: HashSet::new(),
            order: Vec::new(),
            worklist: VecDeque::new(),
            trace: Vec::new(),
            steps: 0,
            status: ClosureStatus::Fixpoint,
        }
    }

    fn admit(&mut self, v: CoeffVec, step: Step) -> bool {
        if self.known.contains(&v) {
            return false;
        }
        self.known.insert(v.clone());
        self.order.push(v.clone());
        self.worklist.push_back(v);
        self.trace.push(step);
        true
    }

    pub fn contains(&self, v: &CoeffVec) -> bool {
        self.known.contains(v)
    }

    pub fn known_full(&self) -> &[CoeffVec] {
        &self.order
    }

    pub fn singletons(&self) -> impl Iterator<Item = &CoeffVec> {
        self.order.iter().filter(|v| v.is_singleton())
    }

    pub fn min_support(&self) -> Option<usize> {
        self.order.iter().map(CoeffVec::support_len).min()
    }

    pub fn trace(&self) -> &[Step] {
        &self.trace
    }

    pub fn pending(&self) -> usize {
        self.worklist.len()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn status(&self) -> ClosureStatus {
        self.status
    }
}

/// FIFO worklist; from each vector the shifts down then up are tried, then
/// rule C for every μ in [`allowed_mus`] order. Rule applications that give
/// zero, leave the window or repeat a known vector are counted as steps but
/// not traced.
pub fn closure_bfs(starts: &[CoeffVec], lambda: &LambdaSeq, caps: Caps) -> Result<ClosureState, EngineError> {
    let radius = lambda.radius();
    let mut state = ClosureState::new();
    for s in starts {
        if !s.fits_in(radius) {
            return Err(EngineError::OutsideWindow {
                index: s.max_abs_index(),
                radius,
            });
        }
        let full = rule_socle_capture(s)?;
        state.admit(
            full.clone(),
            Step {
                rule: Rule::A,
                input: s.clone(),
                output: full,
                mu: None,
            },
        );
    }
    while let Some(v) = state.worklist.pop_front() {
        if state.known.len() >= caps.max_states || state.steps >= caps.max_steps {
            state.worklist.push_front(v);
            state.status = ClosureStatus::CapExceeded;
            break;
        }
        for dir in [Direction::Down, Direction::Up] {
            state.steps += 1;
            if let ShiftOutcome::Shifted(w) = rule_shift(&v, dir, radius) {
                let step = Step {
                    rule: Rule::B,
                    input: v.clone(),
                    output: w.clone(),
                    mu: None,
                };
                state.admit(w, step);
            }
        }
        for mu in allowed_mus(&v, lambda)? {
            state.steps += 1;
            let w = rule_twist_subtract(&v, lambda, mu)?;
            if w.is_zero() || state.known.contains(&w) {
                continue;
            }
            state.trace.push(Step {
                rule: Rule::C,
                input: v.clone(),
                output: w.clone(),
                mu: Some(mu),
            });
            let step = Step {
                rule: Rule::A,
                input: w.clone(),
                output: w.clone(),
                mu: None,
            };
            state.admit(w, step);
        }
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::ffield::Field;

    fn f625() -> Arc<Field> {
        Arc::new(Field::new(5, 4).unwrap())
    }

    #[test]
    fn unit_start_reaches_every_unit() {
        let f = f625();
        let lambda = LambdaSeq::random_separated(f.clone(), 10, 1).unwrap();
        let st = closure_bfs(&[CoeffVec::unit(&f, 0)], &lambda, Caps::default()).unwrap();
        assert_eq!(st.status(), ClosureStatus::Fixpoint);
        assert_eq!(st.known_full().len(), 21);
        assert!((-10..=10).all(|j| st.contains(&CoeffVec::unit(&f, j))));
    }

    #[test]
    fn constant_lambda_never_yields_a_singleton() {
        let f = f625();
        let lambda = LambdaSeq::random_constant(f.clone(), 10, 1).unwrap();
        let start = CoeffVec::new(&f, [(0, f.one()), (1, f.from_int(-1))]);
        let st = closure_bfs(&[start], &lambda, Caps::default()).unwrap();
        assert_eq!(st.status(), ClosureStatus::Fixpoint);
        assert_eq!(st.singletons().count(), 0);
        assert_eq!(st.min_support(), Some(2));
        // the 20 translates e_j - e_(j+1) inside [-10, 10]
        assert_eq!(st.known_full().len(), 20);
    }

    #[test]
    fn one_twist_frees_e1() {
        let f = f625();
        let lambda = LambdaSeq::random_distinct(f.clone(), 6, 1).unwrap();
        let start = CoeffVec::new(&f, [(0, f.one()), (1, f.from_int(-1))]);
        let st = closure_bfs(&[start], &lambda, Caps::default()).unwrap();
        assert!(st.contains(&CoeffVec::unit(&f, 1)));
    }

    #[test]
    fn caps_truncate() {
        let f = f625();
        let lambda = LambdaSeq::random_distinct(f.clone(), 30, 1).unwrap();
        let st = closure_bfs(&[CoeffVec::unit(&f, 0)], &lambda, Caps::states(5)).unwrap();
        assert_eq!(st.status(), ClosureStatus::CapExceeded);
        assert!(st.pending() > 0);
        let st = closure_bfs(
            &[CoeffVec::unit(&f, 0)],
            &lambda,
            Caps {
                max_states: 1000,
                max_steps: 3,
            },
        )
        .unwrap();
        assert_eq!(st.status(), ClosureStatus::CapExceeded);
    }
}
