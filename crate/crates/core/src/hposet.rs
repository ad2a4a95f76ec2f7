//! Certifying inequalities `H_mu >= H_lambda` between term-normalized
//! complete homogeneous polynomials on the nonnegative orthant, via SOS of
//! the squared-variable substitution, and the dominance-annotated poset with
//! DOT export.

use crate::certify::{
    certify_on, prepare, CertifyError, CertifyOptions, CertifyOutcome, GroupId,
    SosCertificate,
};
use crate::poly::{Rat, SparsePoly};
use crate::symfunc::{
    basis_poly, dominance, partitions_of, term_normalize, BasisKind, Dominance, Partition,
    SymFuncError,
};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum HposetError {
    #[error(transparent)]
    SymFunc(#[from] SymFuncError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error("contradiction: certified {mu} >= {lambda} against strict dominance with refutation point {point:?}")]
    Contradiction {
        lambda: String,
        mu: String,
        point: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SosStatus {
    Certified,
    RefutedByPoint,
    Unknown,
}

/// Verdict on one ordered pair: does `H_mu >= H_lambda` hold on the
/// nonnegative orthant in `n_used` variables? `Certified` carries a
/// verifying SOS certificate; `RefutedByPoint` carries an exact nonnegative
/// point with a negative difference. SOS failure alone proves nothing, so
/// everything else is `Unknown`.
#[derive(Debug, Clone)]
pub struct EdgeVerdict {
    pub lambda: Partition,
    pub mu: Partition,
    pub dominance: Dominance,
    pub status: SosStatus,
    pub certificate: Option<Box<SosCertificate>>,
    pub refutation: Option<Vec<Rat>>,
    pub n_used: usize,
}

/// `H_mu - H_lambda` in `n` variables (term-normalized complete homogeneous).
pub fn h_difference(
    lambda: &Partition,
    mu: &Partition,
    n: usize,
) -> Result<SparsePoly, HposetError> {
    if lambda.weight() != mu.weight() {
        return Err(SymFuncError::WeightMismatch(lambda.weight(), mu.weight()).into());
    }
    let h_mu = term_normalize(&basis_poly(BasisKind::Homogeneous, mu, n))
        .expect("h is positive at the all-ones point");
    let h_lam = term_normalize(&basis_poly(BasisKind::Homogeneous, lambda, n))
        .expect("h is positive at the all-ones point");
    Ok(&h_mu - &h_lam)
}

/// Deterministic search for an exact nonnegative rational point where `g`
/// is negative: a small integer/half-integer grid, then seeded random
/// rational points.
pub fn find_negative_orthant_point(g: &SparsePoly, seed: u64, tries: usize) -> Option<Vec<Rat>> {
    let n = g.n;
    let grid: Vec<Rat> = [
        (0i64, 1i64),
        (1, 1),
        (2, 1),
        (3, 1),
        (1, 2),
        (3, 2),
        (1, 3),
        (5, 1),
    ]
    .iter()
    .map(|&(p, q)| crate::poly::ratio(p, q))
    .collect();
    let mut idx = vec![0usize; n];
    loop {
        let point: Vec<Rat> = idx.iter().map(|&i| grid[i].clone()).collect();
        if g.eval(&point).unwrap().is_negative() {
            return Some(point);
        }
        let mut carry = 0;
        loop {
            idx[carry] += 1;
            if idx[carry] < grid.len() {
                break;
            }
            idx[carry] = 0;
            carry += 1;
            if carry == n {
                // Grid exhausted; fall through to random points.
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..tries {
                    let point: Vec<Rat> = (0..n)
                        .map(|_| crate::poly::ratio(rng.gen_range(0..24), rng.gen_range(1..5)))
                        .collect();
                    if g.eval(&point).unwrap().is_negative() {
                        return Some(point);
                    }
                }
                return None;
            }
        }
    }
}

/// Certify (or refute by point) `H_mu >= H_lambda` on the nonnegative
/// orthant in `n` variables via SOS of `(H_mu - H_lambda)(x_1^2, ..., x_n^2)`.
pub fn certify_h_pair(
    lambda: &Partition,
    mu: &Partition,
    n: usize,
    opts: &CertifyOptions,
) -> Result<EdgeVerdict, HposetError> {
    let g = h_difference(lambda, mu, n)?;
    let dom = dominance(lambda, mu)?;
    let f = g.substitute_squares();
    let group = GroupId::Symmetric(n);
    let (rep, spec) = prepare(&f, &group)?;
    let outcome = certify_on(&f, &rep, &spec, &crate::certify::Objective::MinTrace, opts)?;
    let verdict = match outcome {
        CertifyOutcome::Certificate(cert) => {
            // Contradiction detector: a certificate against strict reverse
            // dominance plus an explicit negative point cannot coexist.
            if dom == Dominance::Greater {
                if let Some(point) = find_negative_orthant_point(&g, 1, 2000) {
                    return Err(HposetError::Contradiction {
                        lambda: lambda.to_string(),
                        mu: mu.to_string(),
                        point: point.iter().map(crate::poly::render_rat).collect(),
                    });
                }
            }
            EdgeVerdict {
                lambda: lambda.clone(),
                mu: mu.clone(),
                dominance: dom,
                status: SosStatus::Certified,
                certificate: Some(cert),
                refutation: None,
                n_used: n,
            }
        }
        CertifyOutcome::Infeasible | CertifyOutcome::Indeterminate => {
            let refutation = find_negative_orthant_point(&g, 1, 2000);
            EdgeVerdict {
                lambda: lambda.clone(),
                mu: mu.clone(),
                dominance: dom,
                status: if refutation.is_some() {
                    SosStatus::RefutedByPoint
                } else {
                    SosStatus::Unknown
                },
                certificate: None,
                refutation,
                n_used: n,
            }
        }
    };
    Ok(verdict)
}

#[derive(Debug, Clone)]
pub struct PosetReport {
    pub weight: u32,
    pub n: usize,
    pub verdicts: Vec<EdgeVerdict>,
    /// Certified edges surviving transitive reduction (Hasse-style).
    pub reduced: Vec<(Partition, Partition)>,
}

/// Test every ordered pair of distinct partitions of `weight` and compute
/// the transitive reduction of the certified edges. `max_pairs` caps the
/// number of pairs examined (0 = unlimited); pairs are processed in a fixed
/// order so budget runs are reproducible.
pub fn build_poset(
    weight: u32,
    n: usize,
    opts: &CertifyOptions,
    jobs: usize,
    max_pairs: usize,
) -> Result<PosetReport, HposetError> {
    let parts = partitions_of(weight, None);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..parts.len() {
        for j in 0..parts.len() {
            if i != j {
                pairs.push((i, j));
            }
        }
    }
    if max_pairs > 0 && pairs.len() > max_pairs {
        pairs.truncate(max_pairs);
    }
    // All pairs share the same representation; build it once.
    let probe = h_difference(&parts[0], &parts[1].clone(), n)?.substitute_squares();
    let group = GroupId::Symmetric(n);
    let (rep, _) = prepare(&probe, &group)?;
    let _ = rep;

    let run_pair = |&(i, j): &(usize, usize)| -> Result<EdgeVerdict, HposetError> {
        certify_h_pair(&parts[i], &parts[j], n, opts)
    };
    let jobs = jobs.max(1).min(pairs.len().max(1));
    let mut verdicts: Vec<Option<EdgeVerdict>> = vec![None; pairs.len()];
    if jobs <= 1 {
        for (k, p) in pairs.iter().enumerate() {
            verdicts[k] = Some(run_pair(p)?);
        }
    } else {
        let chunks: Vec<Vec<usize>> = (0..jobs)
            .map(|w| (w..pairs.len()).step_by(jobs).collect())
            .collect();
        let results: Vec<Result<Vec<(usize, EdgeVerdict)>, HposetError>> =
            std::thread::scope(|scope| {
                let handles: Vec<_> = chunks
                    .iter()
                    .map(|chunk| {
                        let pairs = &pairs;
                        scope.spawn(move || {
                            chunk
                                .iter()
                                .map(|&k| run_pair(&pairs[k]).map(|v| (k, v)))
                                .collect()
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
        for r in results {
            for (k, v) in r? {
                verdicts[k] = Some(v);
            }
        }
    }
    let verdicts: Vec<EdgeVerdict> = verdicts.into_iter().map(|v| v.unwrap()).collect();

    // Transitive reduction of the certified edge set.
    let node_of = |p: &Partition| parts.iter().position(|q| q == p).unwrap();
    let mut adj = vec![vec![false; parts.len()]; parts.len()];
    for v in verdicts.iter().filter(|v| v.status == SosStatus::Certified) {
        adj[node_of(&v.lambda)][node_of(&v.mu)] = true;
    }
    let mut reach = adj.clone();
    for k in 0..parts.len() {
        for i in 0..parts.len() {
            if reach[i][k] {
                for j in 0..parts.len() {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut reduced = Vec::new();
    for i in 0..parts.len() {
        for j in 0..parts.len() {
            if !adj[i][j] {
                continue;
            }
            let redundant = (0..parts.len())
                .any(|k| k != i && k != j && adj[i][k] && reach[k][j]);
            if !redundant {
                reduced.push((parts[i].clone(), parts[j].clone()));
            }
        }
    }
    Ok(PosetReport {
        weight,
        n,
        verdicts,
        reduced,
    })
}

/// DOT digraph of the certified edges: black for dominance-comparable pairs,
/// blue for incomparable ones (the counterexample arrows). Nodes and edges
/// are emitted in a deterministic order; self-loops are suppressed.
pub fn export_dot(verdicts: &[EdgeVerdict]) -> String {
    let mut nodes: Vec<Partition> = Vec::new();
    for v in verdicts {
        for p in [&v.lambda, &v.mu] {
            if !nodes.contains(p) {
                nodes.push(p.clone());
            }
        }
    }
    nodes.sort();
    let mut out = String::from("digraph hposet {\n  rankdir=BT;\n");
    for p in &nodes {
        let _ = writeln!(out, "  \"{p}\";");
    }
    let mut edges: Vec<(String, String, bool)> = verdicts
        .iter()
        .filter(|v| v.status == SosStatus::Certified && v.lambda != v.mu)
        .map(|v| {
            (
                v.lambda.to_string(),
                v.mu.to_string(),
                v.dominance == Dominance::Incomparable,
            )
        })
        .collect();
    edges.sort();
    edges.dedup();
    for (from, to, blue) in edges {
        let color = if blue { "blue" } else { "black" };
        let _ = writeln!(out, "  \"{from}\" -> \"{to}\" [color={color}];");
    }
    out.push_str("}\n");
    out
}
