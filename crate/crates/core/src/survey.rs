//! Monte-Carlo rank surveys: optimize random invariant linear objectives
//! over a fixed Gram spectrahedron and histogram the ranks of the optimal
//! matrices at the SVD cutoff.

use crate::certify::{prepare, CertifyError, GroupId};
use crate::gramspec::BlockSpectrahedron;
use crate::linalg::Mat;
use crate::poly::SparsePoly;
use crate::sdp::{self, SdpOptions, SdpProblem, SdpStatus};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("polynomial is not SOS (survey requires a feasible spectrahedron)")]
    NotSos,
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Sdp(#[from] sdp::SdpError),
}

#[derive(Debug, Clone)]
pub struct SurveyRecord {
    pub sample_seed: u64,
    pub params: Vec<f64>,
    pub total_rank: usize,
}

#[derive(Debug, Clone)]
pub struct SurveyReport {
    pub instance: String,
    pub seed: u64,
    pub records: Vec<SurveyRecord>,
    pub histogram: BTreeMap<usize, usize>,
}

impl SurveyReport {
    /// `rank,count` lines, ranks ascending.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("rank,count\n");
        for (rank, count) in &self.histogram {
            out.push_str(&format!("{rank},{count}\n"));
        }
        out
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E3779B97F4A7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// Standard normal via Box-Muller from the sample's own stream.
fn normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// One optimization with a random invariant objective drawn in block
/// coordinates; returns the rank of the assembled Gram matrix at cutoff 1e-7.
fn one_sample(
    spec: &BlockSpectrahedron,
    sample_seed: u64,
    opts: &SdpOptions,
) -> Result<SurveyRecord, SurveyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(sample_seed);
    let costs: Vec<Mat> = spec
        .layout
        .entries
        .iter()
        .map(|e| {
            let mut c = Mat::zeros(e.mult, e.mult);
            for i in 0..e.mult {
                for j in 0..e.mult {
                    c[(i, j)] = normal(&mut rng);
                }
            }
            c.symmetrized()
        })
        .collect();
    let mut problem = SdpProblem {
        blocks: spec.blocks.clone(),
        num_params: spec.num_params(),
        objective: None,
    };
    problem.objective = Some(problem.block_objective(&costs));
    let sol = sdp::solve(&problem, opts)?;
    match sol.status {
        SdpStatus::Feasible | SdpStatus::Optimal => {}
        _ => return Err(SurveyError::NotSos),
    }
    let q = spec.assemble_q(&sol.params);
    let total_rank = sdp::numerical_rank(&q, 1e-7);
    Ok(SurveyRecord {
        sample_seed,
        params: sol.params,
        total_rank,
    })
}

/// Rank-distribution survey over `samples` random objectives. The polynomial
/// must be SOS; per-sample seeds are derived deterministically from `seed`,
/// so identical inputs give identical reports regardless of `jobs`.
pub fn rank_survey(
    f: &SparsePoly,
    group: &GroupId,
    samples: usize,
    seed: u64,
    opts: &SdpOptions,
    jobs: usize,
) -> Result<SurveyReport, SurveyError> {
    let (_rep, spec) = prepare(f, group)?;
    // Feasibility gate.
    let feas = sdp::solve(
        &SdpProblem {
            blocks: spec.blocks.clone(),
            num_params: spec.num_params(),
            objective: None,
        },
        opts,
    )?;
    match feas.status {
        SdpStatus::Feasible | SdpStatus::Optimal => {}
        _ => return Err(SurveyError::NotSos),
    }

    let seeds: Vec<u64> = (0..samples)
        .map(|i| splitmix64(seed ^ (i as u64).wrapping_mul(0xA076_1D64_78BD_642F)))
        .collect();
    let mut records: Vec<Option<SurveyRecord>> = vec![None; samples];
    let jobs = jobs.max(1).min(samples.max(1));
    if jobs <= 1 {
        for (i, &s) in seeds.iter().enumerate() {
            records[i] = Some(one_sample(&spec, s, opts)?);
        }
    } else {
        let chunks: Vec<Vec<usize>> = (0..jobs)
            .map(|w| (w..samples).step_by(jobs).collect())
            .collect();
        let results: Vec<Result<Vec<(usize, SurveyRecord)>, SurveyError>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = chunks
                    .iter()
                    .map(|chunk| {
                        let spec = &spec;
                        let seeds = &seeds;
                        scope.spawn(move || {
                            chunk
                                .iter()
                                .map(|&i| one_sample(spec, seeds[i], opts).map(|r| (i, r)))
                                .collect()
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
        for r in results {
            for (i, rec) in r? {
                records[i] = Some(rec);
            }
        }
    }
    let records: Vec<SurveyRecord> = records.into_iter().map(|r| r.unwrap()).collect();
    let mut histogram = BTreeMap::new();
    for r in &records {
        *histogram.entry(r.total_rank).or_insert(0usize) += 1;
    }
    Ok(SurveyReport {
        instance: f.render(),
        seed,
        records,
        histogram,
    })
}
