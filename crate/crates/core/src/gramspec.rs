//! The symmetry-adapted Gram spectrahedron as an affine block family: exact
//! rational coefficient matching over monomial-pair orbits, with the leftover
//! degrees of freedom exposed as named free parameters, plus the structural
//! formulas for cone dimension, the trivial block, and extremal ranks.

use crate::linalg::Mat;
use crate::poly::{rat_to_f64, ExpVec, FloatPoly, Rat, SparsePoly};
use crate::repsn::{GroupElements, GroupRep};
use crate::sdp::AffineBlock;
use crate::symadapt::{BlockLayout, SymAdaptedBasis};
use crate::symfunc::Partition;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GramSpecError {
    #[error("polynomial is not invariant (worst coefficient violation {0:.3e})")]
    NotInvariant(f64),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("polynomial degree {0} does not match twice the basis degree {1}")]
    DegreeMismatch(u32, u32),
    #[error("coefficient matching is inconsistent")]
    Inconsistent,
    #[error("exact constraint solving needs a permutation group")]
    NonPermutationGroup,
    #[error("matrix is not invariant across orbit blocks (defect {0:.3e})")]
    NotOrbitInvariant(f64),
}

/// Group averaging `(1/|G|) sum_g D(g)^T Q D(g)`: the projection of a
/// symmetric matrix onto the invariant subspace.
pub fn reynolds(q: &Mat, rep: &GroupRep) -> Mat {
    let mut out = Mat::zeros(q.rows, q.cols);
    for d in &rep.action {
        out = out.add(&d.transpose().matmul(q).matmul(d));
    }
    out.scale(1.0 / rep.order() as f64).symmetrized()
}

/// Exact affine expression in the free parameters.
#[derive(Debug, Clone)]
pub struct RatAffine {
    pub constant: Rat,
    pub coeffs: Vec<Rat>,
}

impl RatAffine {
    pub fn eval_f64(&self, params: &[f64]) -> f64 {
        let mut v = rat_to_f64(&self.constant);
        for (c, p) in self.coeffs.iter().zip(params) {
            v += rat_to_f64(c) * p;
        }
        v
    }

    pub fn eval_exact(&self, params: &[Rat]) -> Rat {
        let mut v = self.constant.clone();
        for (c, p) in self.coeffs.iter().zip(params) {
            v += c * p;
        }
        v
    }
}

/// One orbit of unordered monomial-index pairs under the group action.
#[derive(Debug, Clone)]
pub struct PairClass {
    /// Lexicographically smallest member, as 0-based `(row, col)`.
    pub representative: (usize, usize),
    /// All ordered pairs in the orbit.
    pub ordered_pairs: Vec<(usize, usize)>,
}

impl PairClass {
    /// Paper-style name `q{i}{j}` from the 1-based representative.
    pub fn name(&self) -> String {
        format!("q{}{}", self.representative.0 + 1, self.representative.1 + 1)
    }
}

/// The affine-parameterized block family cut out by `f = m(x)^T Q m(x)` over
/// the invariant matrices, in the symmetry-adapted basis.
#[derive(Debug, Clone)]
pub struct BlockSpectrahedron {
    pub f: SparsePoly,
    pub n: usize,
    pub degree: u32,
    pub t: Mat,
    pub layout: BlockLayout,
    pub basis: Vec<ExpVec>,
    pub classes: Vec<PairClass>,
    /// Exact value of each pair class as an affine function of the free
    /// parameters.
    pub class_affine: Vec<RatAffine>,
    /// Indices into `classes` of the free parameters, in graded-lex order.
    pub free_classes: Vec<usize>,
    pub free_params: Vec<String>,
    pub blocks: Vec<AffineBlock>,
}

impl BlockSpectrahedron {
    pub fn num_params(&self) -> usize {
        self.free_classes.len()
    }

    /// Class values at a parameter point.
    pub fn class_values(&self, params: &[f64]) -> Vec<f64> {
        self.class_affine
            .iter()
            .map(|a| a.eval_f64(params))
            .collect()
    }

    /// The full invariant Gram matrix at a parameter point (monomial basis).
    pub fn assemble_q(&self, params: &[f64]) -> Mat {
        let nb = self.basis.len();
        let vals = self.class_values(params);
        let mut q = Mat::zeros(nb, nb);
        for (class, v) in self.classes.iter().zip(&vals) {
            for &(k, l) in &class.ordered_pairs {
                q[(k, l)] = *v;
            }
        }
        q
    }

    /// Expand `m(x)^T Q m(x)` at a parameter point.
    pub fn reconstruct(&self, params: &[f64]) -> FloatPoly {
        let q = self.assemble_q(params);
        let nb = self.basis.len();
        let mut f = FloatPoly::zero(self.n);
        for k in 0..nb {
            for l in 0..nb {
                f.add_term(self.basis[k].mul(&self.basis[l]), q[(k, l)]);
            }
        }
        f
    }

    /// Max coefficient deviation of the reconstruction from `f`.
    pub fn reconstruction_residual(&self, params: &[f64]) -> f64 {
        self.reconstruct(params).max_diff_exact(&self.f)
    }

    /// Evaluate the per-isotypic blocks at a parameter point.
    pub fn eval_blocks(&self, params: &[f64]) -> Vec<Mat> {
        self.blocks.iter().map(|b| b.eval(params)).collect()
    }
}

/// Orbits of unordered monomial-index pairs under a permutation group.
fn pair_classes(rep: &GroupRep) -> Result<Vec<PairClass>, GramSpecError> {
    let perms = match &rep.elements {
        GroupElements::Perms(v) => v,
        GroupElements::Mats { .. } => return Err(GramSpecError::NonPermutationGroup),
    };
    let nb = rep.basis.len();
    let index_of: HashMap<&ExpVec, usize> = rep
        .basis
        .iter()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    // Precompute the index action of each group element.
    let maps: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| {
            rep.basis
                .iter()
                .map(|e| index_of[&e.permuted(&p.0)])
                .collect()
        })
        .collect();
    let mut class_of: Vec<Vec<Option<usize>>> = vec![vec![None; nb]; nb];
    let mut classes: Vec<PairClass> = Vec::new();
    for i in 0..nb {
        for j in i..nb {
            if class_of[i][j].is_some() {
                continue;
            }
            let mut members = BTreeSet::new();
            for m in &maps {
                let (a, b) = (m[i], m[j]);
                members.insert((a.min(b), a.max(b)));
            }
            let rep_pair = *members.iter().next().unwrap();
            let id = classes.len();
            let mut ordered = Vec::new();
            for &(a, b) in &members {
                class_of[a][b] = Some(id);
                ordered.push((a, b));
                if a != b {
                    ordered.push((b, a));
                }
            }
            classes.push(PairClass {
                representative: rep_pair,
                ordered_pairs: ordered,
            });
        }
    }
    // Deterministic order: by representative pair, ascending.
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&i| classes[i].representative);
    Ok(order.into_iter().map(|i| classes[i].clone()).collect())
}

/// Check exact invariance of `f` under the group; returns the worst violated
/// coefficient on failure.
pub fn check_invariant(f: &SparsePoly, rep: &GroupRep) -> Result<(), GramSpecError> {
    match &rep.elements {
        GroupElements::Perms(_) => {
            for g in rep.generator_perms() {
                let moved = f.permute_vars(&g.0);
                if &moved != f {
                    let defect = moved.to_float().max_diff_exact(f);
                    return Err(GramSpecError::NotInvariant(defect));
                }
            }
            Ok(())
        }
        GroupElements::Mats { mats, .. } => {
            let ff = f.to_float();
            let mut worst = 0.0f64;
            for m in mats {
                let rows = m.to_rows();
                let mut images: Vec<FloatPoly> = Vec::new();
                for row in &rows {
                    let mut li = FloatPoly::zero(f.n);
                    for (j, &c) in row.iter().enumerate() {
                        li.add_term(ExpVec::var(f.n, j), c);
                    }
                    images.push(li);
                }
                let mut out = FloatPoly::zero(f.n);
                for (e, &c) in &ff.terms {
                    let mut term = FloatPoly {
                        n: f.n,
                        terms: [(ExpVec::zero(f.n), c)].into_iter().collect(),
                    };
                    for (i, &k) in e.0.iter().enumerate() {
                        for _ in 0..k {
                            term = term.mul(&images[i]);
                        }
                    }
                    out = out.add(&term);
                }
                worst = worst.max(out.max_coeff_diff(&ff));
            }
            if worst > 1e-9 {
                Err(GramSpecError::NotInvariant(worst))
            } else {
                Ok(())
            }
        }
    }
}

/// Build the affine block family for an invariant form of degree `2d`:
/// coefficient matching `f = m^T Q m` is solved exactly over the rationals on
/// the pair-orbit coordinates, pivoting from the graded-lex largest class so
/// that the earliest classes survive as free parameters.
pub fn build_spectrahedron(
    f: &SparsePoly,
    rep: &GroupRep,
    sab: &SymAdaptedBasis,
) -> Result<BlockSpectrahedron, GramSpecError> {
    let d = rep.degree;
    match f.homogeneous_degree() {
        None => return Err(GramSpecError::NotHomogeneous),
        Some(deg) if deg != 2 * d && !f.is_zero() => {
            return Err(GramSpecError::DegreeMismatch(deg, d))
        }
        _ => {}
    }
    check_invariant(f, rep)?;
    let classes = pair_classes(rep)?;
    let nclasses = classes.len();
    let nb = rep.basis.len();

    // One equation per orbit of degree-2d monomials; the representative is
    // the sorted-descending exponent vector.
    let mut eq_index: HashMap<ExpVec, usize> = HashMap::new();
    let mut eq_reps: Vec<ExpVec> = Vec::new();
    let mut rows: Vec<Vec<Rat>> = Vec::new(); // augmented with rhs
    let class_lookup: HashMap<(usize, usize), usize> = classes
        .iter()
        .enumerate()
        .flat_map(|(u, c)| c.ordered_pairs.iter().map(move |&p| (p, u)))
        .collect();
    for k in 0..nb {
        for l in 0..nb {
            let gamma = rep.basis[k].mul(&rep.basis[l]);
            // Only keep the orbit-representative equation.
            let mut sorted = gamma.0.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            if gamma.0 != sorted {
                continue;
            }
            let row = *eq_index.entry(gamma.clone()).or_insert_with(|| {
                eq_reps.push(gamma.clone());
                rows.push(vec![Rat::zero(); nclasses + 1]);
                rows.len() - 1
            });
            let u = class_lookup[&(k, l)];
            rows[row][u] += Rat::from_integer(1.into());
        }
    }
    for (row, gamma) in eq_reps.iter().enumerate() {
        rows[row][nclasses] = f.coeff(gamma);
    }

    // Gauss-Jordan over the rationals. The pivot scan prefers classes whose
    // representative sits in a later basis row and, within a row, closer to
    // the diagonal; the surviving free parameters are then the graded-lex
    // earliest classes (q12, q16, ... in the ternary cases).
    let nrows = rows.len();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; nclasses];
    let mut rank = 0usize;
    let mut scan: Vec<usize> = (0..nclasses).collect();
    scan.sort_by_key(|&c| {
        let (i, j) = classes[c].representative;
        (std::cmp::Reverse(i), j)
    });
    for col in scan {
        let Some(r) = (rank..nrows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, r);
        let inv = rows[rank][col].clone().recip();
        for v in rows[rank].iter_mut() {
            *v *= &inv;
        }
        for r2 in 0..nrows {
            if r2 != rank && !rows[r2][col].is_zero() {
                let factor = rows[r2][col].clone();
                for c2 in 0..=nclasses {
                    let s = &rows[rank][c2] * &factor;
                    rows[r2][c2] -= s;
                }
            }
        }
        pivot_of_col[col] = Some(rank);
        rank += 1;
    }
    for r in rank..nrows {
        if !rows[r][nclasses].is_zero() {
            return Err(GramSpecError::Inconsistent);
        }
    }

    let free_classes: Vec<usize> = (0..nclasses).filter(|&c| pivot_of_col[c].is_none()).collect();
    let kfree = free_classes.len();
    let free_pos: HashMap<usize, usize> = free_classes
        .iter()
        .enumerate()
        .map(|(a, &c)| (c, a))
        .collect();
    let mut class_affine: Vec<RatAffine> = Vec::with_capacity(nclasses);
    for c in 0..nclasses {
        if let Some(&a) = free_pos.get(&c) {
            let mut coeffs = vec![Rat::zero(); kfree];
            coeffs[a] = Rat::from_integer(1.into());
            class_affine.push(RatAffine {
                constant: Rat::zero(),
                coeffs,
            });
        } else {
            let r = pivot_of_col[c].unwrap();
            let mut coeffs = vec![Rat::zero(); kfree];
            for (&fc, &a) in &free_pos {
                coeffs[a] = -rows[r][fc].clone();
            }
            class_affine.push(RatAffine {
                constant: rows[r][nclasses].clone(),
                coeffs,
            });
        }
    }

    // Push the affine class values through the change of basis to get the
    // per-isotypic affine blocks (averaged over the repeated copies).
    let t = &sab.t;
    let mut blocks = Vec::new();
    for e in &sab.layout.entries {
        let m = e.mult;
        let mut constant = Mat::zeros(m, m);
        let mut coeffs = vec![Mat::zeros(m, m); kfree];
        for r in 0..m {
            for c in 0..m {
                // Weight of each class in this block entry.
                let mut w = vec![0.0f64; nclasses];
                for k in 0..e.dim {
                    let col_r = e.offset + k * m + r;
                    let col_c = e.offset + k * m + c;
                    for (u, class) in classes.iter().enumerate() {
                        let mut acc = 0.0;
                        for &(a, b) in &class.ordered_pairs {
                            acc += t[(a, col_r)] * t[(b, col_c)];
                        }
                        w[u] += acc;
                    }
                }
                let scale = 1.0 / e.dim as f64;
                let mut c0 = 0.0;
                for (u, aff) in class_affine.iter().enumerate() {
                    c0 += w[u] * rat_to_f64(&aff.constant);
                }
                constant[(r, c)] = c0 * scale;
                for a in 0..kfree {
                    let mut ca = 0.0;
                    for (u, aff) in class_affine.iter().enumerate() {
                        ca += w[u] * rat_to_f64(&aff.coeffs[a]);
                    }
                    coeffs[a][(r, c)] = ca * scale;
                }
            }
        }
        blocks.push(AffineBlock {
            dim: m,
            copies: e.dim,
            constant: constant.symmetrized(),
            coeffs: coeffs.into_iter().map(|m| m.symmetrized()).collect(),
        });
    }

    let free_params = free_classes.iter().map(|&c| classes[c].name()).collect();
    Ok(BlockSpectrahedron {
        f: f.clone(),
        n: rep.n,
        degree: 2 * d,
        t: t.clone(),
        layout: sab.layout.clone(),
        basis: rep.basis.clone(),
        classes,
        class_affine,
        free_classes,
        free_params,
        blocks,
    })
}

/// Dimension of the symmetry-adapted PSD cone: `sum_i C(m_i + 1, 2)`.
pub fn cone_dimension(multiplicities: &[usize]) -> usize {
    multiplicities.iter().map(|&m| m * (m + 1) / 2).sum()
}

/// The trivial-representation block of an invariant matrix given in an
/// orbit-grouped monomial basis: entry `(i, j)` is `s_j^2 / (s_i s_j)` times
/// the column sum of the `(i, j)` orbit submatrix, `s_i` the square root of
/// the orbit size. Errs when the column sums are not constant (matrix not
/// invariant).
pub fn trivial_block(
    q: &Mat,
    orbits: &[(Partition, usize, usize)],
    tol: f64,
) -> Result<Mat, GramSpecError> {
    let p = orbits.len();
    let mut out = Mat::zeros(p, p);
    let scale = q.max_abs().max(1.0);
    for (i, &(_, oi, li)) in orbits.iter().enumerate() {
        for (j, &(_, oj, lj)) in orbits.iter().enumerate() {
            let si = (li as f64).sqrt();
            let sj = (lj as f64).sqrt();
            // Column sums of the orbit submatrix must agree.
            let mut first = 0.0;
            for (cidx, c) in (oj..oj + lj).enumerate() {
                let mut colsum = 0.0;
                for r in oi..oi + li {
                    colsum += q[(r, c)];
                }
                if cidx == 0 {
                    first = colsum;
                } else if (colsum - first).abs() > tol * scale {
                    return Err(GramSpecError::NotOrbitInvariant((colsum - first).abs()));
                }
            }
            out[(i, j)] = sj * sj / (si * sj) * first;
        }
    }
    Ok(out)
}

/// Ranks attainable by extremal rays: the dimensions of the irreducibles
/// that appear with positive multiplicity.
pub fn extremal_ray_ranks(layout: &BlockLayout) -> BTreeSet<usize> {
    layout
        .entries
        .iter()
        .filter(|e| e.mult > 0)
        .map(|e| e.dim)
        .collect()
}

/// A point generates an extremal ray exactly when one block has rank one and
/// every other block is zero.
pub fn is_extremal(blocks: &[Mat], rank_tol: f64) -> bool {
    let mut rank_one = 0usize;
    for b in blocks {
        match b.numerical_rank_sym(rank_tol) {
            0 => {}
            1 => rank_one += 1,
            _ => return false,
        }
    }
    rank_one == 1
}
