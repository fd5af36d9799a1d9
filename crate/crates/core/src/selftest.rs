//! Invariant suite behind `diamond-lab selftest`. Groups are independent
//! and may run concurrently; each returns a pass/fail line.

use std::sync::Arc;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::diamond::{self, GaloisParams};
use crate::engine::{
    build_pi_table, certify_batch, check_pi_involution, closure_bfs, socle_growth, BatchConfig, Caps,
    ClosureStatus, CoeffVec, LambdaMode, LambdaSeq, Outcome,
};
use crate::exec::Exec;
use crate::ffield::Field;
use crate::weights::{all_weights, SymConvention, WeightModel};

#[derive(Debug, Clone, Copy)]
pub struct SelftestOptions {
    pub seed: u64,
    pub exec: Exec,
    pub caps: Caps,
    /// Mutation hook: build weight matrices with the transposed convention.
    pub convention: SymConvention,
    /// Mutation hook: certify with constant λ, where StuckReports are the
    /// expected outcome.
    pub constant_lambda: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            seed: 0,
            exec: Exec::default(),
            caps: Caps::default(),
            convention: SymConvention::Standard,
            constant_lambda: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GroupResult {
    pub group: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Group {
    WeightsP5,
    WeightsP7,
    DiamondSweep,
    PiInvolution,
    Certification,
    Obstruction,
    SocleGrowth,
}

const GROUPS: [Group; 7] = [
    Group::WeightsP5,
    Group::WeightsP7,
    Group::DiamondSweep,
    Group::PiInvolution,
    Group::Certification,
    Group::Obstruction,
    Group::SocleGrowth,
];

pub fn run(opts: &SelftestOptions) -> Vec<GroupResult> {
    // groups run concurrently; the work inside each stays sequential
    opts.exec.map(&GROUPS, |g| {
        let inner = SelftestOptions {
            exec: Exec::Sequential,
            ..*opts
        };
        run_group(*g, &inner)
    })
}

fn run_group(group: Group, opts: &SelftestOptions) -> GroupResult {
    let result = match group {
        Group::WeightsP5 => weights_group(5, None, opts),
        Group::WeightsP7 => weights_group(7, Some(200), opts),
        Group::DiamondSweep => diamond_group(opts),
        Group::PiInvolution => pi_group(opts),
        Group::Certification => certification_group(opts),
        Group::Obstruction => obstruction_group(opts),
        Group::SocleGrowth => socle_group(),
    };
    let name = match group {
        Group::WeightsP5 => "weights p=5 exhaustive",
        Group::WeightsP7 => "weights p=7 sampled",
        Group::DiamondSweep => "diamond sweep p=5,7",
        Group::PiInvolution => "pi involution",
        Group::Certification => "certification",
        Group::Obstruction => "reducibility obstruction",
        Group::SocleGrowth => "socle growth",
    };
    match result {
        Ok((passed, detail)) => GroupResult {
            group: name,
            passed,
            detail,
        },
        Err(e) => GroupResult {
            group: name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

type GroupOutcome = Result<(bool, String), Box<dyn std::error::Error + Send + Sync>>;

fn weights_group(p: u32, sample_size: Option<usize>, opts: &SelftestOptions) -> GroupOutcome {
    let model = WeightModel::with_convention(p, opts.convention)?;
    let all = all_weights(p);
    let chosen = match sample_size {
        Some(k) => {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut idx = sample(&mut rng, all.len(), k).into_vec();
            idx.sort_unstable();
            idx.into_iter().map(|i| all[i]).collect()
        }
        None => all,
    };
    let checks = model.sweep(&chosen, opts.exec);
    let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
    let detail = match failed.first() {
        None => format!("{} weights checked", checks.len()),
        Some(c) => format!(
            "{} of {} failed, first {:?}: invariant dim {}, closed {:?}, matrices {:?}",
            failed.len(),
            checks.len(),
            c.weight,
            c.invariant_dim,
            c.closed_form,
            c.from_matrices
        ),
    };
    Ok((failed.is_empty(), detail))
}

fn diamond_group(opts: &SelftestOptions) -> GroupOutcome {
    let checks = diamond::sweep(&[5, 7], opts.exec)?;
    let failed: Vec<_> = checks.iter().filter(|c| !c.failures.is_empty()).collect();
    let detail = match failed.first() {
        None => format!("{} generic pairs checked", checks.len()),
        Some(c) => format!("{:?}: {}", c.params, c.failures.join("; ")),
    };
    Ok((failed.is_empty(), detail))
}

fn pi_group(opts: &SelftestOptions) -> GroupOutcome {
    let field = Arc::new(Field::new(5, 4)?);
    let seeds: Vec<u64> = (0..20).map(|k| opts.seed.wrapping_add(k)).collect();
    let reports = opts.exec.map(&seeds, |&s| {
        LambdaSeq::random_distinct(field.clone(), 100, s)
            .map(|l| check_pi_involution(&build_pi_table(&l), &l))
    });
    let mut failures = 0;
    let mut checked = 0;
    for r in reports {
        let r = r?;
        failures += r.failures.len();
        checked += r.checked;
    }
    Ok((failures == 0, format!("{checked} compositions, {failures} failures")))
}

fn certification_group(opts: &SelftestOptions) -> GroupOutcome {
    let params = GaloisParams::new(5, 1, 0)?;
    let cfg = BatchConfig {
        params,
        runs: 100,
        radius: 64,
        ext_degree: 4,
        max_support: 10,
        index_bound: 10,
        mode: if opts.constant_lambda {
            LambdaMode::Constant
        } else {
            LambdaMode::RandomDistinct
        },
        seed: opts.seed,
    };
    let jobs = cfg.jobs()?;
    let results = certify_batch(&jobs, &params, opts.exec);
    let mut certified = 0;
    let mut stuck = 0;
    let mut unexpected = Vec::new();
    for (job, res) in jobs.iter().zip(results) {
        match res? {
            Outcome::Certified(cert) => {
                certified += 1;
                let expected_twists = job.start.support_len() - 1;
                if cert.twist_steps != expected_twists && !opts.constant_lambda {
                    unexpected.push(format!("twist count {} != {}", cert.twist_steps, expected_twists));
                }
                if let Err(e) = cert.replay(&job.lambda) {
                    unexpected.push(e);
                }
                if opts.constant_lambda && !job.start.is_singleton() {
                    unexpected.push("constant λ certified a multi-term start".into());
                }
            }
            Outcome::Stuck(report) => {
                stuck += 1;
                if !opts.constant_lambda {
                    unexpected.push(format!("stuck with collision {:?}", report.collision));
                }
            }
        }
    }
    let detail = format!(
        "{certified} certified, {stuck} stuck{}{}",
        if opts.constant_lambda {
            " (constant λ: stuck is expected)"
        } else {
            ""
        },
        unexpected.first().map(|e| format!("; {e}")).unwrap_or_default()
    );
    Ok((unexpected.is_empty(), detail))
}

fn obstruction_group(opts: &SelftestOptions) -> GroupOutcome {
    let field = Arc::new(Field::new(5, 4)?);
    let lambda = LambdaSeq::random_constant(field.clone(), 64, opts.seed)?;
    let start = CoeffVec::new(&field, [(0, field.one()), (1, field.from_int(-1))]);
    let state = closure_bfs(&[start], &lambda, opts.caps)?;
    let singletons = state.singletons().count();
    let ok = singletons == 0 && state.status() == ClosureStatus::Fixpoint;
    Ok((
        ok,
        format!(
            "{} full lines, {} singletons, {:?}",
            state.known_full().len(),
            singletons,
            state.status()
        ),
    ))
}

fn socle_group() -> GroupOutcome {
    let params = GaloisParams::new(5, 1, 0)?;
    let counts = (0..3)
        .map(|n| socle_growth(n, &params))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((counts == [18, 54, 90], format!("{counts:?}")))
}
