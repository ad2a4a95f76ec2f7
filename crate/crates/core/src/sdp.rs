//! Dense semidefinite feasibility and optimization over small affine block
//! families. Phase 1 maximizes the worst block eigenvalue with a log-det
//! barrier in `(params, t)`; phase 2 follows the central path for a linear
//! objective. Eigenwork is cyclic Jacobi; everything is deterministic.

use crate::linalg::Mat;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SdpError {
    #[error("block size {0} exceeds the cap {1}")]
    BlockTooLarge(usize, usize),
    #[error("parameter count {0} exceeds the cap {1}")]
    TooManyParams(usize, usize),
    #[error("matrix is not PSD within tolerance (min eigenvalue {0:.3e})")]
    NotPsd(f64),
}

/// Symmetric-matrix-valued affine map `constant + sum_a params[a] * coeffs[a]`.
/// `copies` counts how many identical copies of this block sit inside the
/// full matrix (the irreducible dimension, for symmetry-adapted families).
#[derive(Debug, Clone)]
pub struct AffineBlock {
    pub dim: usize,
    pub copies: usize,
    pub constant: Mat,
    pub coeffs: Vec<Mat>,
}

impl AffineBlock {
    pub fn eval(&self, params: &[f64]) -> Mat {
        let mut m = self.constant.clone();
        for (a, c) in self.coeffs.iter().enumerate() {
            if params[a] != 0.0 {
                m.axpy(params[a], c);
            }
        }
        m
    }
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub blocks: Vec<AffineBlock>,
    pub num_params: usize,
    /// Linear objective on the parameters (minimized); `None` means pure
    /// feasibility.
    pub objective: Option<Vec<f64>>,
}

impl SdpProblem {
    /// Objective vector for minimizing the trace of the full assembled
    /// matrix (each block weighted by its copy count).
    pub fn trace_objective(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.num_params];
        for b in &self.blocks {
            for (a, coeff) in b.coeffs.iter().enumerate() {
                c[a] += b.copies as f64 * coeff.trace();
            }
        }
        c
    }

    /// Objective `sum_i <C_i, Q_i(p)>` for given per-block cost matrices.
    pub fn block_objective(&self, costs: &[Mat]) -> Vec<f64> {
        assert_eq!(costs.len(), self.blocks.len());
        let mut c = vec![0.0; self.num_params];
        for (b, cost) in self.blocks.iter().zip(costs) {
            for (a, coeff) in b.coeffs.iter().enumerate() {
                c[a] += cost.frobenius_inner(coeff);
            }
        }
        c
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    Feasible,
    Infeasible,
    Indeterminate,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub params: Vec<f64>,
    pub min_eig_per_block: Vec<f64>,
    pub status: SdpStatus,
    pub iterations: usize,
    /// Best value found for the phase-1 problem `max t : Q_i(p) >= t I`.
    pub phase1_value: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SdpOptions {
    pub feas_tol: f64,
    pub infeas_margin: f64,
    pub rank_tol: f64,
    pub max_iters: usize,
    pub block_cap: usize,
    pub param_cap: usize,
    pub mu_min: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        SdpOptions {
            feas_tol: 1e-8,
            infeas_margin: 1e-7,
            rank_tol: 1e-7,
            max_iters: 4000,
            block_cap: 64,
            param_cap: 512,
            mu_min: 1e-11,
        }
    }
}

struct BarrierState<'a> {
    problem: &'a SdpProblem,
    /// Shift added to every block (phase 2 boundary regularization).
    shift: f64,
}

impl BarrierState<'_> {
    fn eval_blocks(&self, p: &[f64]) -> Vec<Mat> {
        self.problem
            .blocks
            .iter()
            .map(|b| {
                let mut m = b.eval(p);
                for i in 0..m.rows {
                    m[(i, i)] += self.shift;
                }
                m
            })
            .collect()
    }

    fn strictly_feasible(&self, p: &[f64], t: f64) -> bool {
        self.eval_blocks(p).iter().all(|m| {
            let mut x = m.clone();
            for i in 0..x.rows {
                x[(i, i)] -= t;
            }
            x.cholesky(0.0).is_some()
        })
    }

    fn logdet_sum(&self, p: &[f64], t: f64) -> Option<f64> {
        let mut total = 0.0;
        for m in self.eval_blocks(p) {
            let mut x = m;
            for i in 0..x.rows {
                x[(i, i)] -= t;
            }
            total += x.logdet_spd()?;
        }
        Some(total)
    }
}

fn min_eig_over_blocks(blocks: &[Mat]) -> f64 {
    blocks
        .iter()
        .map(|m| m.min_eigenvalue())
        .fold(f64::INFINITY, f64::min)
}

/// Solve a barrier subproblem by damped Newton, generic over phase-1 (maximize
/// `t` with variables `(p, t)`) and phase-2 (minimize `c . p`). Returns the
/// iterate and the number of Newton steps taken.
#[allow(clippy::too_many_arguments)]
fn newton_path(
    state: &BarrierState,
    vars: &mut Vec<f64>,
    with_t: bool,
    objective: Option<&[f64]>,
    mu0: f64,
    mu_min: f64,
    iter_budget: usize,
) -> usize {
    let k = state.problem.num_params;
    let nvars = vars.len();
    let mut iters = 0usize;
    let mut mu = mu0;
    while mu > mu_min && iters < iter_budget {
        for _inner in 0..40 {
            if iters >= iter_budget {
                break;
            }
            iters += 1;
            let (p, t) = split_vars(vars, with_t);
            let xs = state.eval_blocks(&p);
            let xinvs: Vec<Mat> = xs
                .iter()
                .map(|m| {
                    let mut x = m.clone();
                    for i in 0..x.rows {
                        x[(i, i)] -= t;
                    }
                    x.inverse().expect("iterate must stay strictly feasible")
                })
                .collect();

            // Gradient and Hessian of the barrier objective.
            let mut grad = vec![0.0; nvars];
            let mut hess = Mat::zeros(nvars, nvars);
            // Per block: V_a = Xinv * A_a (with A_t = -I handled separately).
            for (bi, block) in state.problem.blocks.iter().enumerate() {
                let xinv = &xinvs[bi];
                let vmats: Vec<Mat> = block.coeffs.iter().map(|a| xinv.matmul(a)).collect();
                for a in 0..k {
                    grad[a] += mu * vmats[a].trace();
                    for b in a..k {
                        let tr: f64 = vmats[a].frobenius_inner(&vmats[b].transpose());
                        hess[(a, b)] -= mu * tr;
                    }
                }
                if with_t {
                    let ti = nvars - 1;
                    grad[ti] -= mu * xinv.trace();
                    for a in 0..k {
                        let tr = vmats[a].frobenius_inner(xinv);
                        hess[(a, ti)] += mu * tr;
                    }
                    hess[(ti, ti)] -= mu * xinv.frobenius_inner(xinv);
                }
            }
            for a in 0..nvars {
                for b in 0..a {
                    hess[(a, b)] = hess[(b, a)];
                }
            }
            if with_t {
                grad[nvars - 1] += 1.0;
            }
            if let Some(c) = objective {
                // Minimizing the objective = maximizing its negation.
                for a in 0..k {
                    grad[a] -= c[a];
                }
            }

            // Newton step for the concave model: solve H d = -g.
            let rhs: Vec<f64> = grad.iter().map(|g| -g).collect();
            let step = match hess.solve(&rhs) {
                Some(s) => s,
                None => {
                    // Tikhonov fallback.
                    let mut h2 = hess.clone();
                    for i in 0..nvars {
                        h2[(i, i)] -= 1e-12;
                    }
                    match h2.solve(&rhs) {
                        Some(s) => s,
                        None => break,
                    }
                }
            };
            let decrement: f64 = grad.iter().zip(&step).map(|(g, d)| g * d).sum();
            if !decrement.is_finite() {
                break;
            }
            if decrement.abs() < 1e-12 * (1.0 + mu) {
                break;
            }
            // Backtracking line search: stay strictly feasible and ascend.
            let phi0 = barrier_value(state, vars, with_t, objective, mu);
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..60 {
                let trial: Vec<f64> = vars
                    .iter()
                    .zip(&step)
                    .map(|(v, d)| v + alpha * d)
                    .collect();
                let (tp, tt) = split_vars(&trial, with_t);
                if state.strictly_feasible(&tp, tt) {
                    let phi = barrier_value(state, &trial, with_t, objective, mu);
                    if phi >= phi0 + 0.01 * alpha * decrement || phi >= phi0 {
                        *vars = trial;
                        accepted = true;
                        break;
                    }
                }
                alpha *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        mu *= 0.2;
    }
    iters
}

fn split_vars(vars: &[f64], with_t: bool) -> (Vec<f64>, f64) {
    if with_t {
        let (p, t) = vars.split_at(vars.len() - 1);
        (p.to_vec(), t[0])
    } else {
        (vars.to_vec(), 0.0)
    }
}

fn barrier_value(
    state: &BarrierState,
    vars: &[f64],
    with_t: bool,
    objective: Option<&[f64]>,
    mu: f64,
) -> f64 {
    let (p, t) = split_vars(vars, with_t);
    let ld = match state.logdet_sum(&p, t) {
        Some(v) => v,
        None => return f64::NEG_INFINITY,
    };
    let mut val = mu * ld;
    if with_t {
        val += t;
    }
    if let Some(c) = objective {
        let obj: f64 = c.iter().zip(&p).map(|(a, b)| a * b).sum();
        val -= obj;
    }
    val
}

/// Feasibility via max-min-eigenvalue phase 1, then (optionally) linear
/// objective optimization along the central path. `Infeasible` is reported
/// only when the phase-1 optimum is provably below `-infeas_margin`.
pub fn solve(problem: &SdpProblem, opts: &SdpOptions) -> Result<SdpSolution, SdpError> {
    for b in &problem.blocks {
        if b.dim > opts.block_cap {
            return Err(SdpError::BlockTooLarge(b.dim, opts.block_cap));
        }
    }
    if problem.num_params > opts.param_cap {
        return Err(SdpError::TooManyParams(problem.num_params, opts.param_cap));
    }
    let k = problem.num_params;
    let state = BarrierState { problem, shift: 0.0 };

    // No free parameters: read feasibility off the fixed blocks.
    if k == 0 {
        let blocks = state.eval_blocks(&[]);
        let eigs: Vec<f64> = blocks.iter().map(|m| m.min_eigenvalue()).collect();
        let worst = eigs.iter().copied().fold(f64::INFINITY, f64::min);
        let status = if worst >= -opts.feas_tol {
            SdpStatus::Feasible
        } else if worst < -opts.infeas_margin {
            SdpStatus::Infeasible
        } else {
            SdpStatus::Indeterminate
        };
        return Ok(SdpSolution {
            params: vec![],
            min_eig_per_block: eigs,
            status,
            iterations: 0,
            phase1_value: worst.min(0.0),
        });
    }

    // Phase 1: maximize t subject to Q_i(p) - t I > 0.
    let p0 = vec![0.0; k];
    let start_eig = min_eig_over_blocks(&state.eval_blocks(&p0));
    let t0 = start_eig - 1.0;
    let mut vars = p0;
    vars.push(t0);
    let mu0 = 1.0f64.max(t0.abs());
    let mut iterations = newton_path(
        &state,
        &mut vars,
        true,
        None,
        mu0,
        opts.mu_min,
        opts.max_iters / 2,
    );
    let (params1, t_star) = split_vars(&vars, true);
    let blocks1 = state.eval_blocks(&params1);
    let mineig1 = min_eig_over_blocks(&blocks1);
    let nu: f64 = problem.blocks.iter().map(|b| b.dim as f64).sum();
    // Central-path bound: the true optimum is within ~mu*nu of the iterate.
    let upper_estimate = t_star.max(mineig1) + 2.0 * opts.mu_min * nu.max(1.0) + 1e-12;

    let mut status;
    let mut best_params = params1.clone();
    if mineig1 >= -opts.feas_tol {
        status = SdpStatus::Feasible;
    } else if upper_estimate < -opts.infeas_margin {
        status = SdpStatus::Infeasible;
    } else {
        status = SdpStatus::Indeterminate;
    }

    // Phase 2: follow the central path for the requested objective, with a
    // tiny diagonal shift when the feasible set has empty interior.
    if status == SdpStatus::Feasible {
        if let Some(c) = &problem.objective {
            let shift = if mineig1 > 1e-7 {
                0.0
            } else {
                2.0 * (1e-9 + (-mineig1).max(0.0))
            };
            let state2 = BarrierState { problem, shift };
            let mut vars2 = best_params.clone();
            if !state2.strictly_feasible(&vars2, 0.0) {
                // Fall back to the raw phase-1 point with a larger shift.
                let state3 = BarrierState {
                    problem,
                    shift: shift + 1e-8,
                };
                if state3.strictly_feasible(&vars2, 0.0) {
                    let cnorm = c.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
                    iterations += newton_path(
                        &state3,
                        &mut vars2,
                        false,
                        Some(c),
                        cnorm,
                        opts.mu_min,
                        opts.max_iters - iterations,
                    );
                    best_params = vars2;
                    status = SdpStatus::Optimal;
                }
            } else {
                let cnorm = c.iter().map(|x| x * x).sum::<f64>().sqrt().max(1.0);
                iterations += newton_path(
                    &state2,
                    &mut vars2,
                    false,
                    Some(c),
                    cnorm,
                    opts.mu_min,
                    opts.max_iters - iterations,
                );
                best_params = vars2;
                status = SdpStatus::Optimal;
            }
        }
    }

    let final_blocks = state.eval_blocks(&best_params);
    let eigs: Vec<f64> = final_blocks.iter().map(|m| m.min_eigenvalue()).collect();
    Ok(SdpSolution {
        params: best_params,
        min_eig_per_block: eigs,
        status,
        iterations,
        phase1_value: t_star.max(mineig1),
    })
}

/// Count of eigenvalue magnitudes above `rel_tol` times the largest.
pub fn numerical_rank(m: &Mat, rel_tol: f64) -> usize {
    m.numerical_rank_sym(rel_tol)
}

/// Rank-revealing PSD factorization `M = sum_a w_a w_a^T`: one vector per
/// eigenvalue above `rank_tol * lambda_max`; negative eigenvalues within
/// `psd_tol` are clipped, anything worse is an error.
pub fn psd_factor(m: &Mat, rank_tol: f64, psd_tol: f64) -> Result<Vec<Vec<f64>>, SdpError> {
    let max = if m.rows == 0 {
        0.0
    } else {
        m.jacobi_eigh()
            .0
            .iter()
            .fold(0.0f64, |acc, &x| acc.max(x.abs()))
    };
    psd_factor_abs(m, rank_tol * max, psd_tol)
}

/// [`psd_factor`] with an absolute eigenvalue cutoff; certificate extraction
/// scales the cutoff by the largest block so that exactly-zero blocks do not
/// promote float noise to rank one.
pub fn psd_factor_abs(m: &Mat, abs_tol: f64, psd_tol: f64) -> Result<Vec<Vec<f64>>, SdpError> {
    if m.rows == 0 {
        return Ok(vec![]);
    }
    let (vals, vecs) = m.jacobi_eigh();
    if vals[0] < -psd_tol {
        return Err(SdpError::NotPsd(vals[0]));
    }
    let mut out = Vec::new();
    for (idx, &lam) in vals.iter().enumerate() {
        if lam > abs_tol {
            let s = lam.sqrt();
            out.push(vecs.column(idx).iter().map(|&x| s * x).collect());
        }
    }
    out.reverse(); // largest eigenvalue first
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadratic_problem(a: f64, b: f64, n: usize) -> SdpProblem {
        // Fixed blocks [a + (n-1) b] and [a - b]: no free parameters.
        let mut b1 = Mat::zeros(1, 1);
        b1[(0, 0)] = a + (n as f64 - 1.0) * b;
        let mut b2 = Mat::zeros(1, 1);
        b2[(0, 0)] = a - b;
        SdpProblem {
            blocks: vec![
                AffineBlock {
                    dim: 1,
                    copies: 1,
                    constant: b1,
                    coeffs: vec![],
                },
                AffineBlock {
                    dim: 1,
                    copies: n - 1,
                    constant: b2,
                    coeffs: vec![],
                },
            ],
            num_params: 0,
            objective: None,
        }
    }

    #[test]
    fn quadratic_boundary_and_infeasible() {
        let opts = SdpOptions::default();
        let sol = solve(&quadratic_problem(1.0, 1.0, 4), &opts).unwrap();
        assert_eq!(sol.status, SdpStatus::Feasible);
        assert!(sol.min_eig_per_block.iter().all(|&e| e >= -1e-12));
        let sol = solve(&quadratic_problem(1.0, 1.01, 4), &opts).unwrap();
        assert_eq!(sol.status, SdpStatus::Infeasible);
    }

    #[test]
    fn feasibility_with_free_params() {
        // Q(p) = [[1, p], [p, 1]] is feasible (interior) at p = 0.
        let mut c = Mat::identity(2);
        c[(0, 0)] = 1.0;
        let mut a = Mat::zeros(2, 2);
        a[(0, 1)] = 1.0;
        a[(1, 0)] = 1.0;
        let prob = SdpProblem {
            blocks: vec![AffineBlock {
                dim: 2,
                copies: 1,
                constant: c,
                coeffs: vec![a],
            }],
            num_params: 1,
            objective: None,
        };
        let sol = solve(&prob, &SdpOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Feasible);
        assert!(sol.phase1_value > 0.5, "phase1 {}", sol.phase1_value);
    }

    #[test]
    fn objective_pushes_to_vertex() {
        // minimize p s.t. [[1 + p, 0], [0, 1 - p]] >= 0: optimum p = -1.
        let mut a = Mat::zeros(2, 2);
        a[(0, 0)] = 1.0;
        a[(1, 1)] = -1.0;
        let prob = SdpProblem {
            blocks: vec![AffineBlock {
                dim: 2,
                copies: 1,
                constant: Mat::identity(2),
                coeffs: vec![a],
            }],
            num_params: 1,
            objective: Some(vec![1.0]),
        };
        let sol = solve(&prob, &SdpOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Optimal);
        assert!((sol.params[0] + 1.0).abs() < 1e-6, "p = {}", sol.params[0]);
    }

    #[test]
    fn infeasible_affine_family() {
        // [[p, 1], [1, -p]] can never be PSD (determinant = -p^2 - 1).
        let mut c = Mat::zeros(2, 2);
        c[(0, 1)] = 1.0;
        c[(1, 0)] = 1.0;
        let mut a = Mat::zeros(2, 2);
        a[(0, 0)] = 1.0;
        a[(1, 1)] = -1.0;
        let prob = SdpProblem {
            blocks: vec![AffineBlock {
                dim: 2,
                copies: 1,
                constant: c,
                coeffs: vec![a],
            }],
            num_params: 1,
            objective: None,
        };
        let sol = solve(&prob, &SdpOptions::default()).unwrap();
        assert_eq!(sol.status, SdpStatus::Infeasible);
    }

    #[test]
    fn rank_and_factor() {
        assert_eq!(numerical_rank(&Mat::zeros(3, 3), 1e-7), 0);
        assert_eq!(numerical_rank(&Mat::identity(4), 1e-7), 4);
        let mut m = Mat::zeros(2, 2);
        m[(0, 0)] = 4.0;
        let ws = psd_factor(&m, 1e-7, 1e-9).unwrap();
        assert_eq!(ws.len(), 1);
        assert!((ws[0][0].abs() - 2.0).abs() < 1e-12 && ws[0][1].abs() < 1e-12);
        let id = psd_factor(&Mat::identity(3), 1e-7, 1e-9).unwrap();
        assert_eq!(id.len(), 3);
        // Residual check against the trivial-component square scale.
        let mut blk = Mat::zeros(2, 2);
        blk[(0, 0)] = 4.0 / 108.0;
        blk[(0, 1)] = -2.0 * 2.0f64.sqrt() / 108.0;
        blk[(1, 0)] = blk[(0, 1)];
        blk[(1, 1)] = 2.0 / 108.0;
        let ws = psd_factor(&blk, 1e-7, 1e-9).unwrap();
        assert_eq!(ws.len(), 1);
        let mut rec = Mat::zeros(2, 2);
        for w in &ws {
            for i in 0..2 {
                for j in 0..2 {
                    rec[(i, j)] += w[i] * w[j];
                }
            }
        }
        assert!(rec.max_abs_diff(&blk) < 1e-12);
        let bad = Mat::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]);
        assert!(psd_factor(&bad, 1e-7, 1e-9).is_err());
    }
}
