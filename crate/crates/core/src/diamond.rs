//! Diamond weights and D₁ characters for a generic reducible split
//! parameter `(p, r0, r1)`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::ffield::is_prime;
use crate::weights::{torus_character, units_order, weight_s, CharExp, Weight, WeightError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiamondError {
    #[error("p = {0} is not a prime >= 5")]
    BadPrime(u32),
    #[error("(r0, r1) = ({r0}, {r1}) is not generic for p = {p}: {reason}")]
    Genericity { p: u32, r0: i64, r1: i64, reason: String },
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error("characters {0:?} and {1:?} coincide")]
    DistinctnessFailure(LineLabel, LineLabel),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaloisParams {
    pub p: u32,
    pub r0: u32,
    pub r1: u32,
}

impl GaloisParams {
    /// Requires `0 <= r0, r1 <= p - 3`, excluding `(0, 0)` and `(p-3, p-3)`.
    pub fn new(p: u32, r0: i64, r1: i64) -> Result<GaloisParams, DiamondError> {
        if p < 5 || !is_prime(p) {
            return Err(DiamondError::BadPrime(p));
        }
        let top = p as i64 - 3;
        let fail = |reason: &str| DiamondError::Genericity {
            p,
            r0,
            r1,
            reason: reason.to_string(),
        };
        if !(0..=top).contains(&r0) || !(0..=top).contains(&r1) {
            return Err(fail("r0 and r1 must lie in [0, p-3]"));
        }
        if r0 == 0 && r1 == 0 {
            return Err(fail("r0 and r1 are both 0"));
        }
        if r0 == top && r1 == top {
            return Err(fail("r0 and r1 are both p-3"));
        }
        Ok(GaloisParams {
            p,
            r0: r0 as u32,
            r1: r1 as u32,
        })
    }

    fn ints(&self) -> (i64, i64, i64) {
        (self.p as i64, self.r0 as i64, self.r1 as i64)
    }
}

pub fn list_generic_params(p: u32) -> Result<Vec<GaloisParams>, DiamondError> {
    if p < 5 || !is_prime(p) {
        return Err(DiamondError::BadPrime(p));
    }
    let top = p as i64 - 3;
    Ok((0..=top)
        .flat_map(|r0| (0..=top).map(move |r1| (r0, r1)))
        .filter_map(|(r0, r1)| GaloisParams::new(p, r0, r1).ok())
        .collect())
}

fn weight(p: i64, a0: i64, a1: i64, m: i64) -> Weight {
    Weight::new(p as u32, a0, a1, m).expect("in range for generic parameters")
}

/// σ = (r0+1, p-2-r1) ⊗ det^(p-1+r1 p).
pub fn make_sigma(params: &GaloisParams) -> Weight {
    let (p, r0, r1) = params.ints();
    weight(p, r0 + 1, p - 2 - r1, p - 1 + r1 * p)
}

/// τ = (r0+2, r1) ⊗ det^(p-2+(p-1)p).
pub fn make_tau(params: &GaloisParams) -> Weight {
    let (p, r0, r1) = params.ints();
    weight(p, r0 + 2, r1, p - 2 + (p - 1) * p)
}

/// τ' = (p-1-r0, p-3-r1) ⊗ det^(r0+(r1+1)p).
pub fn make_tau_prime(params: &GaloisParams) -> Weight {
    let (p, r0, r1) = params.ints();
    weight(p, p - 1 - r0, p - 3 - r1, r0 + (r1 + 1) * p)
}

/// The weight (r0, r1) ⊗ det^0.
pub fn make_base_weight(params: &GaloisParams) -> Weight {
    let (p, r0, r1) = params.ints();
    weight(p, r0, r1, 0)
}

/// (p-3-r0, p-3-r1) ⊗ det^(r0+1+(r1+1)p).
pub fn make_fourth_weight(params: &GaloisParams) -> Weight {
    let (p, r0, r1) = params.ints();
    weight(p, p - 3 - r0, p - 3 - r1, r0 + 1 + (r1 + 1) * p)
}

/// The four Diamond weights, in the order (r0, r1), σ, σ^s, fourth.
pub fn diamond_weight_set(params: &GaloisParams) -> Result<Vec<Weight>, DiamondError> {
    let sigma = make_sigma(params);
    Ok(vec![
        make_base_weight(params),
        sigma,
        weight_s(params.p, &sigma)?,
        make_fourth_weight(params),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Sigma,
    SigmaS,
}

/// The six isotypic lines of D₁, in the order χ_σ, χ_τ, χ_τ^s, χ_σ^s,
/// χ_τ', χ_τ'^s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineLabel {
    ChiSigma,
    ChiTau,
    ChiTauS,
    ChiSigmaS,
    ChiTauPrime,
    ChiTauPrimeS,
}

impl LineLabel {
    pub const ALL: [LineLabel; 6] = [
        LineLabel::ChiSigma,
        LineLabel::ChiTau,
        LineLabel::ChiTauS,
        LineLabel::ChiSigmaS,
        LineLabel::ChiTauPrime,
        LineLabel::ChiTauPrimeS,
    ];

    /// Label of the Π-conjugate character.
    pub fn conjugate(self) -> LineLabel {
        use LineLabel::*;
        match self {
            ChiSigma => ChiSigmaS,
            ChiSigmaS => ChiSigma,
            ChiTau => ChiTauS,
            ChiTauS => ChiTau,
            ChiTauPrime => ChiTauPrimeS,
            ChiTauPrimeS => ChiTauPrime,
        }
    }

    pub fn branch(self) -> Branch {
        use LineLabel::*;
        match self {
            ChiSigma | ChiTau | ChiTauS => Branch::Sigma,
            ChiSigmaS | ChiTauPrime | ChiTauPrimeS => Branch::SigmaS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct D1Char {
    pub label: LineLabel,
    pub chi: CharExp,
    pub branch: Branch,
}

/// A socle-filtration entry. Tuples with a negative coordinate are kept as
/// raw integers and marked absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerEntry {
    Present(Weight),
    Absent { a0: i64, a1: i64, m: i64 },
}

impl LayerEntry {
    fn from_raw(p: i64, a0: i64, a1: i64, m: i64) -> LayerEntry {
        match Weight::new(p as u32, a0, a1, m) {
            Ok(w) => LayerEntry::Present(w),
            Err(_) => LayerEntry::Absent {
                a0,
                a1,
                m: m.rem_euclid(units_order(p as u32) as i64),
            },
        }
    }

    pub fn weight(&self) -> Option<Weight> {
        match self {
            LayerEntry::Present(w) => Some(*w),
            LayerEntry::Absent { .. } => None,
        }
    }
}

pub type Layer = Vec<LayerEntry>;

/// Graded pieces of the socle filtration of D_{0,σ}(ρ) or D_{0,σ^s}(ρ).
pub fn socle_filtration(params: &GaloisParams, branch: Branch) -> Result<Vec<Layer>, DiamondError> {
    let (p, r0, r1) = params.ints();
    let pu = params.p;
    let (head, second, third) = match branch {
        Branch::Sigma => {
            let tau = make_tau(params);
            (
                make_sigma(params),
                [tau, weight_s(pu, &tau)?],
                LayerEntry::from_raw(p, p - 4 - r0, r1 - 1, r0 + 2),
            )
        }
        Branch::SigmaS => {
            let tp = make_tau_prime(params);
            (
                weight_s(pu, &make_sigma(params))?,
                [tp, weight_s(pu, &tp)?],
                LayerEntry::from_raw(p, r0 - 1, p - 4 - r1, (r1 + 2) * p),
            )
        }
    };
    Ok(vec![
        vec![LayerEntry::Present(head)],
        second.iter().map(|&w| LayerEntry::Present(w)).collect(),
        vec![third],
    ])
}

/// The six D₁ characters with their branch tags.
pub fn d1_characters(params: &GaloisParams) -> Result<Vec<D1Char>, DiamondError> {
    let p = params.p;
    let chi_sigma = torus_character(p, &make_sigma(params));
    let chi_tau = torus_character(p, &make_tau(params));
    let chi_tau_prime = torus_character(p, &make_tau_prime(params));
    let chis = [
        chi_sigma,
        chi_tau,
        chi_tau.conjugate(),
        chi_sigma.conjugate(),
        chi_tau_prime,
        chi_tau_prime.conjugate(),
    ];
    let out: Vec<D1Char> = LineLabel::ALL
        .iter()
        .zip(chis)
        .map(|(&label, chi)| D1Char {
            label,
            chi,
            branch: label.branch(),
        })
        .collect();
    for (i, a) in out.iter().enumerate() {
        for b in &out[i + 1..] {
            if a.chi == b.chi {
                return Err(DiamondError::DistinctnessFailure(a.label, b.label));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiamondData {
    pub params: GaloisParams,
    pub diamond_weights: Vec<Weight>,
    pub sigma: Weight,
    pub tau: Weight,
    pub tau_prime: Weight,
    pub sigma_s: Weight,
    pub tau_s: Weight,
    pub tau_prime_s: Weight,
    pub filtration_sigma: Vec<Layer>,
    pub filtration_sigma_s: Vec<Layer>,
    pub d1_chars: Vec<D1Char>,
}

impl DiamondData {
    pub fn build(params: GaloisParams) -> Result<DiamondData, DiamondError> {
        let p = params.p;
        let sigma = make_sigma(&params);
        let tau = make_tau(&params);
        let tau_prime = make_tau_prime(&params);
        Ok(DiamondData {
            params,
            diamond_weights: diamond_weight_set(&params)?,
            sigma,
            tau,
            tau_prime,
            sigma_s: weight_s(p, &sigma)?,
            tau_s: weight_s(p, &tau)?,
            tau_prime_s: weight_s(p, &tau_prime)?,
            filtration_sigma: socle_filtration(&params, Branch::Sigma)?,
            filtration_sigma_s: socle_filtration(&params, Branch::SigmaS)?,
            d1_chars: d1_characters(&params)?,
        })
    }

    pub fn char_of(&self, label: LineLabel) -> CharExp {
        self.d1_chars
            .iter()
            .find(|c| c.label == label)
            .map(|c| c.chi)
            .expect("all six labels present")
    }

    /// Checks every structural invariant; returns the failures.
    pub fn verify(&self) -> Vec<String> {
        let p = self.params.p;
        let mut failures = Vec::new();
        let distinct: BTreeSet<Weight> = self.diamond_weights.iter().copied().collect();
        if self.diamond_weights.len() != 4 || distinct.len() != 4 {
            failures.push(format!("Diamond weights not 4 distinct: {:?}", self.diamond_weights));
        }
        let chars: BTreeSet<CharExp> = self.d1_chars.iter().map(|c| c.chi).collect();
        if chars.len() != 6 {
            failures.push("D1 characters not pairwise distinct".into());
        }
        let central = torus_character(p, &self.sigma).central(p);
        let all_central = self
            .d1_chars
            .iter()
            .map(|c| c.chi.central(p))
            .chain(
                self.diamond_weights
                    .iter()
                    .map(|w| torus_character(p, w).central(p)),
            )
            .all(|c| c == central);
        if !all_central {
            failures.push("central exponents differ".into());
        }
        for (w, ws) in [
            (self.sigma, self.sigma_s),
            (self.tau, self.tau_s),
            (self.tau_prime, self.tau_prime_s),
        ] {
            if torus_character(p, &w).conjugate() != torus_character(p, &ws) {
                failures.push(format!("conjugation incompatible for {w:?}"));
            }
        }
        for c in &self.d1_chars {
            if self.char_of(c.label.conjugate()) != c.chi.conjugate() {
                failures.push(format!("{:?} is not paired with its conjugate", c.label));
            }
            if c.branch != c.label.branch() {
                failures.push(format!("{:?} has the wrong branch", c.label));
            }
        }
        let all: BTreeSet<CharExp> = chars.iter().map(|c| c.conjugate()).collect();
        if all != chars {
            failures.push("D1 characters not closed under conjugation".into());
        }
        if self.char_of(LineLabel::ChiSigma).conjugate() != self.char_of(LineLabel::ChiSigmaS) {
            failures.push("conjugation does not exchange the branch heads".into());
        }
        if !self.d1_chars.iter().all(|c| {
            c.label.conjugate().branch() == c.branch
                || matches!(c.label, LineLabel::ChiSigma | LineLabel::ChiSigmaS)
        }) {
            failures.push("a τ or τ' pair straddles the two branches".into());
        }
        if !self.diamond_weights.contains(&self.sigma) || !self.diamond_weights.contains(&self.sigma_s) {
            failures.push("σ or σ^s missing from the Diamond weights".into());
        }
        failures
    }
}

#[derive(Debug, Clone)]
pub struct DiamondCheck {
    pub params: GaloisParams,
    pub failures: Vec<String>,
}

/// Builds and verifies the Diamond data of every generic pair for each prime.
pub fn sweep(primes: &[u32], exec: Exec) -> Result<Vec<DiamondCheck>, DiamondError> {
    let mut all = Vec::new();
    for &p in primes {
        all.extend(list_generic_params(p)?);
    }
    Ok(exec.map(&all, |params| DiamondCheck {
        params: *params,
        failures: match DiamondData::build(*params) {
            Ok(d) => d.verify(),
            Err(e) => vec![e.to_string()],
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(a0: u32, a1: u32, m: u32) -> Weight {
        Weight { a0, a1, m }
    }

    fn gp(p: u32, r0: i64, r1: i64) -> GaloisParams {
        GaloisParams::new(p, r0, r1).unwrap()
    }

    #[test]
    fn genericity() {
        assert_eq!(list_generic_params(5).unwrap().len(), 7);
        assert_eq!(list_generic_params(7).unwrap().len(), 23);
        for p in [5, 7, 11] {
            assert!(!list_generic_params(p)
                .unwrap()
                .iter()
                .any(|g| g.r0 == 0 && g.r1 == 0));
        }
        assert!(matches!(GaloisParams::new(5, 0, 0), Err(DiamondError::Genericity { .. })));
        assert!(matches!(GaloisParams::new(5, 2, 2), Err(DiamondError::Genericity { .. })));
        assert!(matches!(GaloisParams::new(5, 3, 0), Err(DiamondError::Genericity { .. })));
        assert!(matches!(GaloisParams::new(5, -1, 1), Err(DiamondError::Genericity { .. })));
        assert_eq!(GaloisParams::new(3, 0, 0), Err(DiamondError::BadPrime(3)));
        assert_eq!(list_generic_params(9).unwrap_err(), DiamondError::BadPrime(9));
    }

    #[test]
    fn companion_weights() {
        assert_eq!(make_sigma(&gp(5, 1, 0)), w(2, 3, 4));
        assert_eq!(make_sigma(&gp(5, 0, 1)), w(1, 2, 9));
        assert_eq!(make_sigma(&gp(7, 2, 3)), w(3, 2, 27));
        assert_eq!(make_tau(&gp(5, 1, 0)), w(3, 0, 23));
        assert_eq!(make_tau_prime(&gp(5, 1, 0)), w(3, 2, 6));
        assert_eq!(make_tau(&gp(7, 0, 1)), w(2, 1, 47));
    }

    #[test]
    fn diamond_set_p5() {
        let set = diamond_weight_set(&gp(5, 1, 0)).unwrap();
        assert_eq!(set, vec![w(1, 0, 0), w(2, 3, 4), w(2, 1, 21), w(1, 2, 7)]);
        for wt in &set {
            assert_eq!(torus_character(5, wt).central(5), 1);
        }
    }

    #[test]
    fn filtrations() {
        let layers = socle_filtration(&gp(5, 1, 0), Branch::Sigma).unwrap();
        assert_eq!(layers[0], vec![LayerEntry::Present(w(2, 3, 4))]);
        assert_eq!(layers[1][0], LayerEntry::Present(w(3, 0, 23)));
        assert_eq!(layers[2][0], LayerEntry::Absent { a0: 0, a1: -1, m: 3 });

        let layers = socle_filtration(&gp(5, 1, 1), Branch::Sigma).unwrap();
        assert_eq!(layers[2][0], LayerEntry::Present(w(0, 0, 3)));

        let layers = socle_filtration(&gp(7, 2, 3), Branch::SigmaS).unwrap();
        assert_eq!(layers[2][0], LayerEntry::Present(w(1, 0, 35)));
    }

    #[test]
    fn six_characters_p5() {
        let chars: Vec<(u32, u32)> = d1_characters(&gp(5, 1, 0))
            .unwrap()
            .iter()
            .map(|c| (c.chi.e_a, c.chi.e_d))
            .collect();
        assert_eq!(chars, vec![(21, 4), (2, 23), (23, 2), (4, 21), (19, 6), (6, 19)]);
    }

    #[test]
    fn label_conjugation_is_involutive() {
        for l in LineLabel::ALL {
            assert_eq!(l.conjugate().conjugate(), l);
            assert_ne!(l.conjugate(), l);
            let crosses = matches!(l, LineLabel::ChiSigma | LineLabel::ChiSigmaS);
            assert_eq!(l.conjugate().branch() != l.branch(), crosses);
        }
    }
}
