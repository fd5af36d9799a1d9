//! Symbolic model of the diagram D(λ) = (D₀(∞), D₁(∞), can).
//!
//! The engine works with coefficient lines `(Σ c_i ι_i)(D₀)` rather than
//! with vectors of D₀: a [`CoeffVec`] names such a line, and the rules in
//! [`rules`] describe how membership of one line in a G-subrepresentation
//! π' forces membership of others. [`certify_irreducible`] follows the
//! minimal-support argument directly; [`closure_bfs`] explores all rule
//! applications for experiments with degenerate λ.

pub mod certify;
pub mod closure;
pub mod coeff;
pub mod json;
pub mod lambda;
pub mod pi_table;
pub mod rules;

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::diamond::{DiamondError, GaloisParams};
use crate::exec::Exec;
use crate::ffield::{Field, FieldError};

pub use certify::{certify_irreducible, reduce_support, Certificate, Outcome, Reduction, Step, StuckReport};
pub use closure::{closure_bfs, Caps, ClosureState, ClosureStatus};
pub use coeff::CoeffVec;
pub use lambda::{LambdaMode, LambdaSeq, LambdaSpec};
pub use pi_table::{build_pi_table, check_pi_involution, InvolutionReport, PiActionTable, PiTarget};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Diamond(#[from] DiamondError),
    #[error("the zero vector has no socle")]
    ZeroVector,
    #[error("index {index} outside the window [-{radius}, {radius}]")]
    OutsideWindow { index: i64, radius: i64 },
    #[error("window radius {radius} too small; at least {required} is needed")]
    WindowOverflow { required: i64, radius: i64 },
    #[error("μ must be one of the λ_j on the support")]
    MuNotAllowed,
    #[error("window radius must be at least 1, got {0}")]
    BadWindow(i64),
    #[error("λ_{0} is zero")]
    ZeroLambda(i64),
    #[error("λ_{0} is missing")]
    MissingLambda(i64),
    #[error("{needed} distinct nonzero values requested, field has {available}")]
    NotEnoughElements { needed: i64, available: i64 },
    #[error("malformed JSON: {0}")]
    Json(String),
}

/// Dimension of soc_K D₀(∞) restricted to the indices `[-N, N]`:
/// `(2N + 1)(dim σ + dim σ^s)`.
pub fn socle_growth(window: u64, params: &GaloisParams) -> Result<u64, EngineError> {
    let sigma = crate::diamond::make_sigma(params);
    let sigma_s = crate::weights::weight_s(params.p, &sigma).map_err(DiamondError::from)?;
    Ok((2 * window + 1) * (sigma.dim() + sigma_s.dim()) as u64)
}

/// A random nonzero start: support size in `1..=max_support`, indices in
/// `[-index_bound, index_bound]`, coefficients random nonzero.
pub fn random_start<R: Rng + ?Sized>(f: &Field, rng: &mut R, max_support: usize, index_bound: i64) -> CoeffVec {
    let size = rng.gen_range(1..=max_support);
    let mut indices = std::collections::BTreeSet::new();
    while indices.len() < size {
        indices.insert(rng.gen_range(-index_bound..=index_bound));
    }
    CoeffVec::new(f, indices.into_iter().map(|i| (i, f.random_nonzero(rng))))
}

/// One certification run of a batch.
#[derive(Debug, Clone)]
pub struct CertJob {
    pub start: CoeffVec,
    pub lambda: Arc<LambdaSeq>,
}

#[derive(Debug, Clone, Copy)]
pub struct BatchConfig {
    pub params: GaloisParams,
    pub runs: usize,
    pub radius: i64,
    pub ext_degree: usize,
    pub max_support: usize,
    pub index_bound: i64,
    pub mode: LambdaMode,
    pub seed: u64,
}

impl BatchConfig {
    /// Seeded jobs; run k uses λ seed `seed + k` and draws its start from a
    /// generator seeded with `seed`.
    pub fn jobs(&self) -> Result<Vec<CertJob>, EngineError> {
        let field = Arc::new(Field::new(self.params.p, self.ext_degree)?);
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        (0..self.runs)
            .map(|k| {
                let lambda_seed = self.seed.wrapping_add(k as u64);
                let lambda = match self.mode {
                    LambdaMode::RandomDistinct => {
                        LambdaSeq::random_distinct(field.clone(), self.radius, lambda_seed)?
                    }
                    LambdaMode::RandomSeparated => {
                        LambdaSeq::random_separated(field.clone(), self.radius, lambda_seed)?
                    }
                    LambdaMode::Constant | LambdaMode::Explicit => {
                        LambdaSeq::random_constant(field.clone(), self.radius, lambda_seed)?
                    }
                };
                let start = random_start(&field, &mut rng, self.max_support, self.index_bound);
                Ok(CertJob {
                    start,
                    lambda: Arc::new(lambda),
                })
            })
            .collect()
    }
}

pub fn certify_batch(
    jobs: &[CertJob],
    params: &GaloisParams,
    exec: Exec,
) -> Vec<Result<Outcome<Certificate>, EngineError>> {
    exec.map(jobs, |job| certify_irreducible(&job.start, &job.lambda, params))
}
