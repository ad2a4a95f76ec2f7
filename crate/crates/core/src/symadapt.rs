//! Symmetry-adapted change of basis: isotypic projections, transfer
//! operators, and the column ordering that makes every invariant operator
//! block diagonal with repeated identical blocks.

use crate::linalg::Mat;
use crate::poly::{ExpVec, FloatPoly};
use crate::repsn::{GroupRep, RepsnError};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymAdaptError {
    #[error("projection for {label} has rank {got}, expected multiplicity {expected}")]
    RankMismatch {
        label: String,
        expected: usize,
        got: usize,
    },
    #[error("Gram-Schmidt breakdown (residual {0:.3e})")]
    GramSchmidtBreakdown(f64),
    #[error("invariant Gram matrix is numerically singular")]
    SingularGram,
    #[error("no irreducible data available for this group")]
    MissingIrreps,
    #[error(transparent)]
    Repsn(#[from] RepsnError),
}

/// Placement of one isotypic component inside the adapted basis: `mult`
/// columns for each of the `dim` repeated copies, starting at `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayoutEntry {
    pub label: String,
    pub mult: usize,
    pub dim: usize,
    pub offset: usize,
}

/// Block layout of the adapted basis; isotypic components in irrep order,
/// each spanning `mult * dim` columns ordered copy-major (all `mult`
/// multiplicity slots for copy 1, then copy 2, ...).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockLayout {
    pub entries: Vec<LayoutEntry>,
}

impl BlockLayout {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.mult * e.dim).sum()
    }

    /// Isotypic index and (copy, slot) of an absolute column, if any.
    pub fn locate(&self, col: usize) -> Option<(usize, usize, usize)> {
        for (i, e) in self.entries.iter().enumerate() {
            if col >= e.offset && col < e.offset + e.mult * e.dim {
                let rel = col - e.offset;
                return Some((i, rel / e.mult, rel % e.mult));
            }
        }
        None
    }
}

/// The change-of-basis matrix together with its layout and the adapted basis
/// as polynomials (columns of `t` over the representation's monomial basis).
#[derive(Debug, Clone)]
pub struct SymAdaptedBasis {
    pub t: Mat,
    pub layout: BlockLayout,
    pub basis_polys: Vec<FloatPoly>,
}

/// Group-averaged Gram matrix `S = (1/|G|) sum_g D(g)^T D(g)` of the action.
/// Symmetric positive definite, and invariant: `D(g)^T S D(g) = S`.
pub fn invariant_gram(rep: &GroupRep) -> Mat {
    let n = rep.dim();
    let mut s = Mat::zeros(n, n);
    for d in &rep.action {
        s = s.add(&d.transpose().matmul(d));
    }
    s.scale(1.0 / rep.order() as f64).symmetrized()
}

/// Stabilized Gram-Schmidt of the standard basis under the inner product
/// `<v, w> = v^T S w`. Returns `U` whose columns are the new basis and a
/// rewritten representation with orthogonal matrices `U^{-1} D(g) U`; the
/// inverse is available in closed form as `U^{-1} = U^T S`.
pub fn orthogonalize_rep(rep: &GroupRep, s: &Mat) -> Result<(Mat, GroupRep), SymAdaptError> {
    let n = rep.dim();
    let sdot = |v: &[f64], w: &[f64]| -> f64 {
        let sw = s.matvec(w);
        v.iter().zip(&sw).map(|(a, b)| a * b).sum()
    };
    let mut u = Mat::zeros(n, n);
    for j in 0..n {
        let mut v = vec![0.0; n];
        v[j] = 1.0;
        for prev in 0..j {
            let col = u.column(prev);
            let proj = sdot(&col, &v);
            for (vi, ci) in v.iter_mut().zip(&col) {
                *vi -= proj * ci;
            }
        }
        let norm2 = sdot(&v, &v);
        if !(norm2 > 1e-14) {
            return Err(SymAdaptError::SingularGram);
        }
        let inv = 1.0 / norm2.sqrt();
        for vi in v.iter_mut() {
            *vi *= inv;
        }
        u.set_column(j, &v);
    }
    let u_inv = u.transpose().matmul(s);
    debug_assert!(u_inv.matmul(&u).max_abs_diff(&Mat::identity(n)) < 1e-8);
    let mut new_rep = rep.clone();
    new_rep.action = rep
        .action
        .iter()
        .map(|d| u_inv.matmul(d).matmul(&u))
        .collect();
    Ok((u, new_rep))
}

/// The invariant polynomial carried by the identity Gram matrix in the
/// orthogonalized basis: `m(x)^T U U^T m(x)` expanded over monomials.
pub fn identity_gram_invariant(rep: &GroupRep, u: &Mat) -> FloatPoly {
    let n = rep.dim();
    let mut f = FloatPoly::zero(rep.n);
    for j in 0..n {
        let col = u.column(j);
        let mut poly = FloatPoly::zero(rep.n);
        for (row, c) in col.iter().enumerate() {
            poly.add_term(rep.basis[row].clone(), *c);
        }
        f = f.add(&poly.square());
    }
    f
}

fn column_poly(basis: &[ExpVec], nvars: usize, col: &[f64]) -> FloatPoly {
    let mut p = FloatPoly::zero(nvars);
    for (row, &c) in col.iter().enumerate() {
        p.add_term(basis[row].clone(), c);
    }
    p
}

/// Build the symmetry-adapted basis for an orthogonalized representation
/// with irreducible data:
///
/// 1. the projection `pi_i = sum_g d^i_11(g^{-1}) D(g)` has rank `m_i`;
///    choose `m_i` columns by greedy residual pivoting and orthonormalize;
/// 2. transfer operators `P_ik = (n_i/|G|) sum_g d^i_1k(g^{-1}) D(g)` fill in
///    the remaining copies `v_k^{ij} = P_ik v_1^{ij}`;
/// 3. columns are arranged copy-major: all multiplicity slots of copy 1,
///    then copy 2, and so on, isotypic by isotypic.
pub fn symmetry_adapted_basis(rep: &GroupRep) -> Result<SymAdaptedBasis, SymAdaptError> {
    if rep.irreps.is_empty() {
        return Err(SymAdaptError::MissingIrreps);
    }
    let nb = rep.dim();
    let order = rep.order();
    let mut t = Mat::zeros(nb, nb);
    let mut layout = BlockLayout::default();
    let mut offset = 0usize;

    // Inverse-element lookup once.
    let inv_idx: Vec<usize> = (0..order)
        .map(|i| rep.elements.inverse_index(i))
        .collect::<Result<_, _>>()?;

    for (which, irrep) in rep.irreps.iter().enumerate() {
        let mult = rep.multiplicities[which];
        let dim = irrep.dim;
        if mult == 0 {
            continue;
        }
        // Step 1: isotypic projection from the (1,1) entries.
        let mut proj = Mat::zeros(nb, nb);
        for g in 0..order {
            proj.axpy(irrep.mats[inv_idx[g]][(0, 0)], &rep.action[g]);
        }

        // Greedy pivoted selection of `mult` independent columns, then
        // modified Gram-Schmidt.
        let mut chosen: Vec<Vec<f64>> = Vec::with_capacity(mult);
        let mut residuals: Vec<Vec<f64>> = (0..nb).map(|c| proj.column(c)).collect();
        let norm2 = |v: &[f64]| -> f64 { v.iter().map(|x| x * x).sum() };
        let mut first_pick = 0.0f64;
        for pick in 0..mult {
            let (best, best_n2) = residuals
                .iter()
                .enumerate()
                .map(|(i, v)| (i, norm2(v)))
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap();
            if pick == 0 {
                first_pick = best_n2;
            }
            if best_n2 < 1e-16 * first_pick.max(1.0) {
                return Err(SymAdaptError::RankMismatch {
                    label: irrep.label.clone(),
                    expected: mult,
                    got: pick,
                });
            }
            let mut v = residuals[best].clone();
            let inv = 1.0 / norm2(&v).sqrt();
            for x in v.iter_mut() {
                *x *= inv;
            }
            // Deflate every residual against the new direction.
            for r in residuals.iter_mut() {
                let dot: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
                for (ri, vi) in r.iter_mut().zip(&v) {
                    *ri -= dot * vi;
                }
            }
            chosen.push(v);
        }
        // Rank must not exceed the multiplicity either.
        let leftover = residuals.iter().map(|v| norm2(v)).fold(0.0, f64::max);
        if leftover > 1e-8 * first_pick.max(1.0) {
            return Err(SymAdaptError::RankMismatch {
                label: irrep.label.clone(),
                expected: mult,
                got: mult + 1,
            });
        }

        // Step 2: transfer operators fill in copies k = 2..dim.
        let mut copies: Vec<Vec<Vec<f64>>> = vec![chosen.clone()];
        for k in 1..dim {
            let mut pik = Mat::zeros(nb, nb);
            for g in 0..order {
                pik.axpy(irrep.mats[inv_idx[g]][(0, k)], &rep.action[g]);
            }
            let pik = pik.scale(dim as f64 / order as f64);
            copies.push(chosen.iter().map(|v| pik.matvec(v)).collect());
        }

        // Step 3: copy-major column order.
        for (k, copy) in copies.iter().enumerate() {
            for (j, v) in copy.iter().enumerate() {
                t.set_column(offset + k * mult + j, v);
            }
        }
        layout.entries.push(LayoutEntry {
            label: irrep.label.clone(),
            mult,
            dim,
            offset,
        });
        offset += mult * dim;
    }
    debug_assert_eq!(offset, nb);
    let basis_polys = (0..nb)
        .map(|c| column_poly(&rep.basis, rep.n, &t.column(c)))
        .collect();
    Ok(SymAdaptedBasis {
        t,
        layout,
        basis_polys,
    })
}

/// Scan `T^{-1} D(g) T` over the whole group and report the largest entry
/// outside the permitted sparsity pattern: within one isotypic component only
/// entries that stay in the same multiplicity slot may be nonzero, and
/// nothing may cross between components.
pub fn verify_block_structure(rep: &GroupRep, t: &Mat, layout: &BlockLayout) -> f64 {
    let n = t.rows;
    let t_inv = match t.inverse() {
        Some(m) => m,
        None => return f64::INFINITY,
    };
    let mut worst = 0.0f64;
    for d in &rep.action {
        let b = t_inv.matmul(d).matmul(t);
        for r in 0..n {
            for c in 0..n {
                let allowed = match (layout.locate(r), layout.locate(c)) {
                    (Some((ir, _, jr)), Some((ic, _, jc))) => ir == ic && jr == jc,
                    _ => false,
                };
                if !allowed {
                    worst = worst.max(b[(r, c)].abs());
                }
            }
        }
    }
    worst
}

/// For an invariant `Q`, the adapted basis must produce `dim` identical
/// `mult x mult` diagonal cells per isotypic component and zeros elsewhere.
/// Returns the worst violation across both requirements.
pub fn repeated_copy_defect(t: &Mat, layout: &BlockLayout, q: &Mat) -> f64 {
    let t_inv = match t.inverse() {
        Some(m) => m,
        None => return f64::INFINITY,
    };
    let b = t_inv.matmul(q).matmul(t);
    let n = b.rows;
    let mut worst = 0.0f64;
    // Off-pattern: anything outside the diagonal mult x mult cells.
    for r in 0..n {
        for c in 0..n {
            let allowed = match (layout.locate(r), layout.locate(c)) {
                (Some((ir, kr, _)), Some((ic, kc, _))) => ir == ic && kr == kc,
                _ => false,
            };
            if !allowed {
                worst = worst.max(b[(r, c)].abs());
            }
        }
    }
    // Copy agreement within each isotypic component.
    for e in &layout.entries {
        let first = b.submatrix(e.offset, e.offset, e.mult, e.mult);
        for k in 1..e.dim {
            let cell = b.submatrix(
                e.offset + k * e.mult,
                e.offset + k * e.mult,
                e.mult,
                e.mult,
            );
            worst = worst.max(cell.max_abs_diff(&first));
        }
    }
    worst
}

/// Extract the per-isotypic blocks of an invariant `Q` in the adapted basis,
/// averaging over the repeated copies to suppress float noise.
pub fn extract_blocks(t: &Mat, layout: &BlockLayout, q: &Mat) -> Vec<Mat> {
    let t_inv = t.inverse().expect("change of basis invertible");
    let b = t_inv.matmul(q).matmul(t);
    layout
        .entries
        .iter()
        .map(|e| {
            let mut acc = Mat::zeros(e.mult, e.mult);
            for k in 0..e.dim {
                acc = acc.add(&b.submatrix(
                    e.offset + k * e.mult,
                    e.offset + k * e.mult,
                    e.mult,
                    e.mult,
                ));
            }
            acc.scale(1.0 / e.dim as f64).symmetrized()
        })
        .collect()
}

/// Reassemble a full invariant matrix from per-isotypic blocks:
/// `T diag(blocks repeated) T^T` (valid for orthogonal `T`).
pub fn assemble_full(t: &Mat, layout: &BlockLayout, blocks: &[Mat]) -> Mat {
    let n = t.rows;
    let mut inner = Mat::zeros(n, n);
    for (e, q) in layout.entries.iter().zip(blocks) {
        for k in 0..e.dim {
            for a in 0..e.mult {
                for b in 0..e.mult {
                    inner[(e.offset + k * e.mult + a, e.offset + k * e.mult + b)] = q[(a, b)];
                }
            }
        }
    }
    t.matmul(&inner).matmul(&t.transpose())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use crate::repsn::GroupRep;

    #[test]
    fn permutation_action_has_identity_gram() {
        let rep = GroupRep::symmetric_group(3, 2).unwrap();
        let s = invariant_gram(&rep);
        assert!(s.max_abs_diff(&Mat::identity(6)) < 1e-14);
        let (u, rep2) = orthogonalize_rep(&rep, &s).unwrap();
        assert!(u.max_abs_diff(&Mat::identity(6)) < 1e-12);
        for d in &rep2.action {
            assert!(d.transpose().matmul(d).max_abs_diff(&Mat::identity(6)) < 1e-9);
        }
    }

    #[test]
    fn adapted_basis_s3_quadratics() {
        let rep = GroupRep::symmetric_group(3, 2).unwrap();
        let sab = symmetry_adapted_basis(&rep).unwrap();
        assert_eq!(sab.layout.total(), 6);
        // trivial: mult 2 dim 1; standard: mult 2 dim 2.
        assert_eq!(sab.layout.entries[0].mult, 2);
        assert_eq!(sab.layout.entries[0].dim, 1);
        assert_eq!(sab.layout.entries[1].mult, 2);
        assert_eq!(sab.layout.entries[1].dim, 2);
        // T orthogonal.
        assert!(
            sab.t
                .transpose()
                .matmul(&sab.t)
                .max_abs_diff(&Mat::identity(6))
                < 1e-9
        );
        assert!(verify_block_structure(&rep, &sab.t, &sab.layout) < 1e-9);
        // The identity is a bad change of basis here.
        let bad = verify_block_structure(&rep, &Mat::identity(6), &sab.layout);
        assert!(bad > 0.1, "identity must fail the pattern scan, got {bad}");
    }

    #[test]
    fn repeated_copies_on_invariant_matrix() {
        let rep = GroupRep::symmetric_group(3, 3).unwrap();
        let sab = symmetry_adapted_basis(&rep).unwrap();
        // Reynolds-average a deterministic symmetric matrix.
        let n = rep.dim();
        let mut raw = Mat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                raw[(i, j)] = ((i * 7 + j * 3 + 1) % 11) as f64 / 11.0;
            }
        }
        let raw = raw.symmetrized();
        let mut q = Mat::zeros(n, n);
        for d in &rep.action {
            q = q.add(&d.transpose().matmul(&raw).matmul(d));
        }
        let q = q.scale(1.0 / rep.order() as f64);
        assert!(repeated_copy_defect(&sab.t, &sab.layout, &q) < 1e-9);
        // Round trip through blocks.
        let blocks = extract_blocks(&sab.t, &sab.layout, &q);
        let back = assemble_full(&sab.t, &sab.layout, &blocks);
        assert!(back.max_abs_diff(&q) < 1e-9);
    }

    #[test]
    fn binary_adapted_columns_pair_flipped_monomials() {
        // Columns of T couple monomial x^a y^b only with x^b y^a, entries
        // +-sqrt(2)/2, except a lone middle monomial for even degree.
        for d in [3u32, 4] {
            let rep = GroupRep::symmetric_group(2, d).unwrap();
            let sab = symmetry_adapted_basis(&rep).unwrap();
            let nb = rep.dim();
            for c in 0..nb {
                let col = sab.t.column(c);
                let support: Vec<usize> = (0..nb).filter(|&r| col[r].abs() > 1e-9).collect();
                match support.len() {
                    1 => {
                        let e = &rep.basis[support[0]];
                        assert_eq!(e.0[0], e.0[1], "lone column must be the middle monomial");
                        assert!((col[support[0]].abs() - 1.0).abs() < 1e-9);
                    }
                    2 => {
                        let a = &rep.basis[support[0]].0;
                        let b = &rep.basis[support[1]].0;
                        assert_eq!(a[0], b[1]);
                        assert_eq!(a[1], b[0]);
                        let half_sqrt2 = std::f64::consts::SQRT_2 / 2.0;
                        for &r in &support {
                            assert!((col[r].abs() - half_sqrt2).abs() < 1e-9);
                        }
                    }
                    k => panic!("unexpected column support {k}"),
                }
            }
            assert!(verify_block_structure(&rep, &sab.t, &sab.layout) < 1e-9);
        }
    }
}
