use std::collections::BTreeMap;

use serde::Serialize;

use super::lambda::LambdaSeq;
use crate::diamond::LineLabel;
use crate::ffield::FElem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiTarget {
    Line { label: LineLabel, index: i64, scalar: FElem },
    OutOfWindow,
}

/// Action of Π on the isotypic lines of D₁(∞) over the window of λ.
#[derive(Debug, Clone)]
pub struct PiActionTable {
    radius: i64,
    entries: BTreeMap<(LineLabel, i64), PiTarget>,
}

/// Forward rules on χ_σ, χ_τ, χ_τ'; the rules on the conjugate lines are
/// the inverses forced by Π² acting trivially.
pub fn build_pi_table(lambda: &LambdaSeq) -> PiActionTable {
    use LineLabel::*;
    let f = lambda.field();
    let radius = lambda.radius();
    let mut entries = BTreeMap::new();
    for i in -radius..=radius {
        let li = lambda.get(i).expect("index in window");
        for label in LineLabel::ALL {
            let (index, scalar) = match label {
                ChiSigma | ChiSigmaS => (i, f.one()),
                ChiTau => (i + 1, f.one()),
                ChiTauS => (i - 1, f.one()),
                ChiTauPrime => (i, li),
                ChiTauPrimeS => (i, f.inv(li).expect("λ is nonzero")),
            };
            let target = if lambda.contains(index) {
                PiTarget::Line {
                    label: label.conjugate(),
                    index,
                    scalar,
                }
            } else {
                PiTarget::OutOfWindow
            };
            entries.insert((label, i), target);
        }
    }
    PiActionTable { radius, entries }
}

impl PiActionTable {
    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn get(&self, label: LineLabel, index: i64) -> Option<PiTarget> {
        self.entries.get(&(label, index)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct InvolutionReport {
    pub checked: usize,
    pub skipped_out_of_window: usize,
    pub failures: Vec<(LineLabel, i64)>,
}

impl InvolutionReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Composes the table with itself wherever both steps stay in the window.
pub fn check_pi_involution(table: &PiActionTable, lambda: &LambdaSeq) -> InvolutionReport {
    let f = lambda.field();
    let mut report = InvolutionReport::default();
    for (&(label, index), &target) in &table.entries {
        let PiTarget::Line {
            label: l1,
            index: i1,
            scalar: s1,
        } = target
        else {
            report.skipped_out_of_window += 1;
            continue;
        };
        match table.get(l1, i1) {
            Some(PiTarget::Line {
                label: l2,
                index: i2,
                scalar: s2,
            }) => {
                report.checked += 1;
                if l2 != label || i2 != index || f.mul(s1, s2) != f.one() {
                    report.failures.push((label, index));
                }
            }
            _ => report.skipped_out_of_window += 1,
        }
    }
    report
}
