//! Representation data for the symmetric group (and user-supplied finite
//! matrix groups): Young's orthogonal irreducibles, isotypic multiplicities by
//! the hook-length counting rule, an independent character-theoretic oracle,
//! and induced actions on polynomial bases.

use crate::linalg::Mat;
use crate::poly::{monomials_of_degree, rat, rat_from_f64, ExpVec, FloatPoly, Rat};
use crate::symfunc::{partitions_of, Partition};
use num_traits::Zero;
use serde::Deserialize;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepsnError {
    #[error("group order {0} exceeds the factorial-enumeration limit (n <= {1})")]
    TooLarge(usize, usize),
    #[error("group closure exceeded the cap of {0} elements")]
    ClosureCap(usize),
    #[error("element not found in group (tolerance {0})")]
    ElementNotFound(f64),
    #[error("bad group file: {0}")]
    BadGroupFile(String),
}

/// One-line permutation: `perm[i]` is the image of `i` (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Perm(pub Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut p: Vec<usize> = (0..n).collect();
        p.swap(i, j);
        Perm(p)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// `self` after `other`: `(self * other)[i] = self[other[i]]`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &img) in self.0.iter().enumerate() {
            inv[img] = i;
        }
        Perm(inv)
    }

    pub fn cycle_type(&self) -> Partition {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut lens = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0u32;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.0[cur];
                len += 1;
            }
            lens.push(len);
        }
        Partition::new(lens)
    }

    /// Permutation matrix `P` with `P e_i = e_{perm[i]}`.
    pub fn matrix(&self) -> Mat {
        let n = self.0.len();
        let mut m = Mat::zeros(n, n);
        for (i, &img) in self.0.iter().enumerate() {
            m[(img, i)] = 1.0;
        }
        m
    }
}

/// All permutations of `{0..n}` in lexicographic one-line order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    fn rec(remaining: &mut Vec<usize>, prefix: &mut Vec<usize>, out: &mut Vec<Perm>) {
        if remaining.is_empty() {
            out.push(Perm(prefix.clone()));
            return;
        }
        for k in 0..remaining.len() {
            let v = remaining.remove(k);
            prefix.push(v);
            rec(remaining, prefix, out);
            prefix.pop();
            remaining.insert(k, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// Hook lengths and the `n(lambda)` statistic packaged together.
#[derive(Debug, Clone)]
pub struct HookData {
    pub lambda: Partition,
    pub hooks: Vec<u32>,
    pub n_stat: u32,
}

impl HookData {
    pub fn new(lambda: &Partition) -> Self {
        HookData {
            lambda: lambda.clone(),
            hooks: lambda.hook_lengths(),
            n_stat: lambda.n_stat(),
        }
    }
}

/// Number of solutions `y >= 0` of `sum coins[i] * y[i] = target`.
fn knapsack_count(coins: &[u32], target: i64) -> u64 {
    if target < 0 {
        return 0;
    }
    let t = target as usize;
    let mut dp = vec![0u64; t + 1];
    dp[0] = 1;
    for &c in coins {
        let c = c as usize;
        for v in c..=t {
            dp[v] += dp[v - c];
        }
    }
    dp[t]
}

/// Multiplicity of the irreducible indexed by `lambda` (a partition of `n`)
/// in the action on degree-`d` polynomials: the number of `y` in `N^n` with
/// `h_1 y_1 + ... + h_n y_n = d - n(lambda)`, where `h_i` are the hook
/// lengths of `lambda`. Zero when `d < n(lambda)`.
pub fn multiplicity(lambda: &Partition, d: u32) -> u64 {
    let hd = HookData::new(lambda);
    knapsack_count(&hd.hooks, d as i64 - hd.n_stat as i64)
}

/// Dimension of the irreducible indexed by `lambda`: `n! / prod(hooks)`.
pub fn irrep_dimension(lambda: &Partition) -> u64 {
    let n = lambda.weight() as u64;
    let mut num = 1u64;
    for k in 2..=n {
        num *= k;
    }
    let mut den = 1u64;
    for h in lambda.hook_lengths() {
        den *= h as u64;
    }
    debug_assert_eq!(num % den, 0);
    num / den
}

/// Murnaghan-Nakayama character value `chi_lambda(mu)` for `mu` a cycle type,
/// computed by border-strip removal on beta-sets with memoization. This is the
/// independent path used to cross-check the hook-length rule.
pub fn mn_character(lambda: &Partition, mu: &Partition) -> i64 {
    fn beta_set(lambda: &[u32]) -> Vec<i64> {
        let l = lambda.len();
        (0..l)
            .map(|i| lambda[i] as i64 + (l - 1 - i) as i64)
            .collect()
    }
    fn from_beta(mut beta: Vec<i64>) -> Vec<u32> {
        beta.sort_unstable_by(|a, b| b.cmp(a));
        let l = beta.len();
        let mut parts: Vec<u32> = (0..l)
            .map(|j| (beta[j] - (l - 1 - j) as i64) as u32)
            .collect();
        parts.retain(|&p| p > 0);
        parts
    }
    fn rec(
        lambda: Vec<u32>,
        mu: &[u32],
        memo: &mut HashMap<(Vec<u32>, Vec<u32>), i64>,
    ) -> i64 {
        if mu.is_empty() {
            return if lambda.is_empty() { 1 } else { 0 };
        }
        let key = (lambda.clone(), mu.to_vec());
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let t = mu[0] as i64;
        let beta = beta_set(&lambda);
        let mut total = 0i64;
        for (i, &b) in beta.iter().enumerate() {
            let nb = b - t;
            if nb < 0 || beta.contains(&nb) {
                continue;
            }
            let height = beta
                .iter()
                .enumerate()
                .filter(|&(j, &bj)| j != i && nb < bj && bj < b)
                .count();
            let mut new_beta = beta.clone();
            new_beta[i] = nb;
            let rest = rec(from_beta(new_beta), &mu[1..], memo);
            total += if height % 2 == 0 { rest } else { -rest };
        }
        memo.insert(key, total);
        total
    }
    rec(lambda.parts().to_vec(), mu.parts(), &mut HashMap::new())
}

/// `z_mu = prod_j j^{a_j} a_j!` so that the conjugacy class of cycle type
/// `mu` in `S_n` has `n! / z_mu` elements.
fn z_mu(mu: &Partition) -> u64 {
    let mut mult: HashMap<u32, u64> = HashMap::new();
    for &p in mu.parts() {
        *mult.entry(p).or_insert(0) += 1;
    }
    let mut z = 1u64;
    for (j, a) in mult {
        for _ in 0..a {
            z *= j as u64;
        }
        for k in 1..=a {
            z *= k;
        }
    }
    z
}

/// Character-theoretic multiplicity oracle: `(1/n!) sum_sigma chi_lambda *
/// chi_d`, where `chi_d(sigma)` counts the degree-`d` monomials fixed by
/// `sigma`. Evaluated over conjugacy classes with Murnaghan-Nakayama
/// characters; exact integers throughout. Independent of the hook-length
/// counting used by [`multiplicity`].
pub fn multiplicity_oracle(lambda: &Partition, d: u32) -> Result<u64, RepsnError> {
    let n = lambda.weight();
    if n > 8 {
        return Err(RepsnError::TooLarge(n as usize, 8));
    }
    let mut num = 0i128;
    let mut order = 1u64;
    for k in 2..=n as u64 {
        order *= k;
    }
    for mu in partitions_of(n, None) {
        let class_size = (order / z_mu(&mu)) as i128;
        let chi = mn_character(lambda, &mu) as i128;
        // Monomials fixed by sigma = exponent vectors constant on cycles.
        let fixed = knapsack_count(mu.parts(), d as i64) as i128;
        num += class_size * chi * fixed;
    }
    debug_assert!(num % order as i128 == 0, "inner product must be integral");
    Ok((num / order as i128) as u64)
}

/// The two quasi-polynomials counting trivial/standard multiplicities for
/// three variables: `Q` has six cases mod 6, `P` three cases mod 3. Exact
/// integer evaluation; both vanish on the small negative arguments that arise
/// from the degree shifts.
pub fn quasi_poly_check(d: i64) -> (u64, u64) {
    (q_quasi(d), p_quasi(d))
}

pub fn q_quasi(d: i64) -> u64 {
    // Q(d) = (d^2 + 6d + k)/12 with k per residue class mod 6.
    let k = match d.rem_euclid(6) {
        0 => 12,
        1 | 5 => 5,
        2 | 4 => 8,
        3 => 9,
        _ => unreachable!(),
    };
    let num = d * d + 6 * d + k;
    if num < 0 {
        return 0;
    }
    debug_assert_eq!(num % 12, 0);
    (num / 12) as u64
}

pub fn p_quasi(d: i64) -> u64 {
    // P(d) = (d^2 + 5d + k)/6 with k per residue class mod 3.
    let k = match d.rem_euclid(3) {
        0 | 1 => 6,
        2 => 4,
        _ => unreachable!(),
    };
    let num = d * d + 5 * d + k;
    if num < 0 {
        return 0;
    }
    debug_assert_eq!(num % 6, 0);
    (num / 6) as u64
}

/// A real orthogonal irreducible, with one matrix per group element (aligned
/// with the owning group's element order).
#[derive(Debug, Clone)]
pub struct IrrepData {
    pub label: String,
    pub partition: Option<Partition>,
    pub dim: usize,
    pub mats: Vec<Mat>,
}

impl IrrepData {
    pub fn character(&self) -> Vec<f64> {
        self.mats.iter().map(|m| m.trace()).collect()
    }
}

/// Standard Young tableaux of shape `lambda`, each as the `(row, col)` of the
/// entries `1..=n` in placement order.
fn standard_tableaux(lambda: &Partition) -> Vec<Vec<(usize, usize)>> {
    let n = lambda.weight() as usize;
    let shape = lambda.parts();
    let mut fill = vec![0usize; shape.len()];
    let mut pos: Vec<(usize, usize)> = Vec::with_capacity(n);
    let mut out = Vec::new();
    fn rec(
        entry: usize,
        n: usize,
        shape: &[u32],
        fill: &mut Vec<usize>,
        pos: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if entry == n {
            out.push(pos.clone());
            return;
        }
        for r in 0..shape.len() {
            if fill[r] < shape[r] as usize && (r == 0 || fill[r - 1] > fill[r]) {
                pos.push((r, fill[r]));
                fill[r] += 1;
                rec(entry + 1, n, shape, fill, pos, out);
                fill[r] -= 1;
                pos.pop();
            }
        }
    }
    rec(0, n, shape, &mut fill, &mut pos, &mut out);
    out
}

/// Young's orthogonal form for the irreducible of `S_n` indexed by `lambda`:
/// generator matrices on standard tableaux, extended to every element along
/// the Cayley graph of adjacent transpositions.
pub fn young_orthogonal_irrep(lambda: &Partition) -> Result<IrrepData, RepsnError> {
    let n = lambda.weight() as usize;
    if n > 8 {
        return Err(RepsnError::TooLarge(n, 8));
    }
    let tableaux = standard_tableaux(lambda);
    let dim = tableaux.len();
    let index_of: HashMap<Vec<(usize, usize)>, usize> = tableaux
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();

    // Generator matrices for the adjacent transpositions (k, k+1), 1-based.
    let mut gens: Vec<Mat> = Vec::new();
    for k in 1..n {
        let mut m = Mat::zeros(dim, dim);
        for (ti, tab) in tableaux.iter().enumerate() {
            let (r1, c1) = tab[k - 1];
            let (r2, c2) = tab[k];
            let rho = (c2 as i64 - r2 as i64) - (c1 as i64 - r1 as i64);
            if rho == 1 {
                m[(ti, ti)] = 1.0;
            } else if rho == -1 {
                m[(ti, ti)] = -1.0;
            } else {
                let inv = 1.0 / rho as f64;
                m[(ti, ti)] = inv;
                let mut swapped = tab.clone();
                swapped.swap(k - 1, k);
                let tj = index_of[&swapped];
                m[(ti, tj)] = (1.0 - inv * inv).sqrt();
            }
        }
        gens.push(m);
    }

    // Walk the Cayley graph from the identity.
    let elements = all_perms(n);
    let elem_index: HashMap<Perm, usize> = elements
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let mut mats: Vec<Option<Mat>> = vec![None; elements.len()];
    let id_idx = elem_index[&Perm::identity(n)];
    mats[id_idx] = Some(Mat::identity(dim));
    let mut queue = vec![id_idx];
    while let Some(cur) = queue.pop() {
        let cur_perm = elements[cur].clone();
        let cur_mat = mats[cur].clone().unwrap();
        for (k, gen_mat) in gens.iter().enumerate() {
            let s = Perm::transposition(n, k, k + 1);
            let next = cur_perm.compose(&s);
            let ni = elem_index[&next];
            if mats[ni].is_none() {
                mats[ni] = Some(cur_mat.matmul(gen_mat));
                queue.push(ni);
            }
        }
    }
    Ok(IrrepData {
        label: lambda.to_string(),
        partition: Some(lambda.clone()),
        dim,
        mats: mats.into_iter().map(|m| m.unwrap()).collect(),
    })
}

/// Matrix of the substitution `basis_j(g x)` expanded over `basis`: column
/// `j` holds the coefficients of `prod_i (sum_k g[i][k] x_k)^{e_{ij}}`.
/// For a permutation matrix this is a 0/1 permutation of the monomials.
pub fn induced_action(g: &Mat, basis: &[ExpVec]) -> Mat {
    let nvars = g.rows;
    let nb = basis.len();
    let index_of: HashMap<&ExpVec, usize> = basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let images: Vec<FloatPoly> = (0..nvars)
        .map(|i| {
            let mut li = FloatPoly::zero(nvars);
            for j in 0..nvars {
                li.add_term(ExpVec::var(nvars, j), g[(i, j)]);
            }
            li
        })
        .collect();
    let mut out = Mat::zeros(nb, nb);
    for (j, e) in basis.iter().enumerate() {
        let mut poly = FloatPoly {
            n: nvars,
            terms: [(ExpVec::zero(nvars), 1.0)].into_iter().collect(),
        };
        for (i, &k) in e.0.iter().enumerate() {
            for _ in 0..k {
                poly = poly.mul(&images[i]);
            }
        }
        for (mono, c) in &poly.terms {
            let row = *index_of
                .get(mono)
                .expect("monomial basis closed under linear substitution");
            out[(row, j)] = *c;
        }
    }
    out
}

/// Full element list generated by `generators` under matrix multiplication,
/// deduplicated entrywise at `tol`. Errors out at `cap` elements.
pub fn group_closure(generators: &[Mat], tol: f64, cap: usize) -> Result<Vec<Mat>, RepsnError> {
    let n = if generators.is_empty() {
        return Ok(vec![]);
    } else {
        generators[0].rows
    };
    let mut elements: Vec<Mat> = vec![Mat::identity(n)];
    let mut queue: Vec<usize> = vec![0];
    let find = |elements: &[Mat], m: &Mat| -> Option<usize> {
        elements.iter().position(|e| e.max_abs_diff(m) < tol)
    };
    while let Some(i) = queue.pop() {
        for g in generators {
            let prod = elements[i].matmul(g);
            if find(&elements, &prod).is_none() {
                if elements.len() >= cap {
                    return Err(RepsnError::ClosureCap(cap));
                }
                elements.push(prod);
                queue.push(elements.len() - 1);
            }
        }
    }
    Ok(elements)
}

/// Group element storage: symmetric-group permutations (exact) or explicit
/// matrices (composition resolved by tolerance lookup).
#[derive(Debug, Clone)]
pub enum GroupElements {
    Perms(Vec<Perm>),
    Mats { mats: Vec<Mat>, tol: f64 },
}

impl GroupElements {
    pub fn len(&self) -> usize {
        match self {
            GroupElements::Perms(v) => v.len(),
            GroupElements::Mats { mats, .. } => mats.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn square_index(&self, i: usize) -> Result<usize, RepsnError> {
        match self {
            GroupElements::Perms(v) => {
                let sq = v[i].compose(&v[i]);
                Ok(v.iter().position(|p| *p == sq).expect("closed group"))
            }
            GroupElements::Mats { mats, tol } => {
                let sq = mats[i].matmul(&mats[i]);
                mats.iter()
                    .position(|m| m.max_abs_diff(&sq) < *tol)
                    .ok_or(RepsnError::ElementNotFound(*tol))
            }
        }
    }

    pub fn inverse_index(&self, i: usize) -> Result<usize, RepsnError> {
        match self {
            GroupElements::Perms(v) => {
                let inv = v[i].inverse();
                Ok(v.iter().position(|p| *p == inv).expect("closed group"))
            }
            GroupElements::Mats { mats, tol } => {
                let n = mats[i].rows;
                let id = Mat::identity(n);
                mats.iter()
                    .position(|m| mats[i].matmul(m).max_abs_diff(&id) < *tol)
                    .ok_or(RepsnError::ElementNotFound(*tol))
            }
        }
    }
}

/// Frobenius-Schur indicator `(1/|G|) sum_g chi(g^2)`, exact over rational
/// character values. Value one means the irreducible is realizable over the
/// reals in its own dimension (type 2).
pub fn frobenius_schur(chi: &[Rat], elems: &GroupElements) -> Result<Rat, RepsnError> {
    let order = elems.len();
    assert_eq!(chi.len(), order);
    let mut total = Rat::zero();
    for i in 0..order {
        total += chi[elems.square_index(i)?].clone();
    }
    Ok(total / rat(order as i64))
}

/// Degree-`d` monomial basis grouped by orbits: orbits are labeled by the
/// partitions of `d` with at most `n` parts in reverse-lex order, and each
/// orbit is listed lexicographically descending. For `n = 3, d = 3` this is
/// `x1^3, x2^3, x3^3, x1^2 x2, ..., x2 x3^2, x1 x2 x3`.
pub fn orbit_basis(n: usize, d: u32) -> Vec<ExpVec> {
    let mut out = Vec::new();
    for lambda in partitions_of(d, Some(n)) {
        let mut orbit: Vec<ExpVec> = monomials_of_degree(n, d)
            .into_iter()
            .filter(|e| e.orbit_label() == lambda.parts())
            .collect();
        orbit.sort_by(|a, b| b.0.cmp(&a.0));
        out.extend(orbit);
    }
    out
}

/// Orbit segments of [`orbit_basis`]: `(partition label, offset, length)`.
pub fn orbit_ranges(n: usize, d: u32) -> Vec<(Partition, usize, usize)> {
    let basis = orbit_basis(n, d);
    let mut out: Vec<(Partition, usize, usize)> = Vec::new();
    for (i, e) in basis.iter().enumerate() {
        let label = Partition::new(e.orbit_label());
        match out.last_mut() {
            Some((l, _, len)) if *l == label => *len += 1,
            _ => out.push((label, i, 1)),
        }
    }
    out
}

/// A finite group together with its action on a degree-`d` monomial basis and
/// whatever irreducible data is available. For `S_n` the irreducibles are
/// built in (Young's orthogonal form); matrix groups carry only what the
/// caller supplies.
#[derive(Debug, Clone)]
pub struct GroupRep {
    pub name: String,
    pub n: usize,
    pub degree: u32,
    pub elements: GroupElements,
    /// `D(g)`, a homomorphism: for permutations the monomial permutation
    /// action, for matrix groups the substitution action of `g^{-1}`.
    pub action: Vec<Mat>,
    pub basis: Vec<ExpVec>,
    pub irreps: Vec<IrrepData>,
    pub multiplicities: Vec<usize>,
}

impl GroupRep {
    /// `S_n` acting on degree-`d` monomials (orbit-grouped basis order).
    /// Only irreducibles with nonzero multiplicity are materialized.
    pub fn symmetric_group(n: usize, d: u32) -> Result<Self, RepsnError> {
        if n > 8 {
            return Err(RepsnError::TooLarge(n, 8));
        }
        let perms = all_perms(n);
        let basis = orbit_basis(n, d);
        let nb = basis.len();
        let index_of: HashMap<&ExpVec, usize> =
            basis.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let mut action = Vec::with_capacity(perms.len());
        for p in &perms {
            let mut m = Mat::zeros(nb, nb);
            for (col, e) in basis.iter().enumerate() {
                let img = e.permuted(&p.0);
                m[(index_of[&img], col)] = 1.0;
            }
            action.push(m);
        }
        let mut irreps = Vec::new();
        let mut mults = Vec::new();
        for lambda in partitions_of(n as u32, None) {
            let m = multiplicity(&lambda, d) as usize;
            if m > 0 {
                irreps.push(young_orthogonal_irrep(&lambda)?);
                mults.push(m);
            }
        }
        let total: usize = irreps
            .iter()
            .zip(&mults)
            .map(|(ir, &m)| ir.dim * m)
            .sum();
        assert_eq!(total, nb, "isotypic dimensions must fill the basis");
        Ok(GroupRep {
            name: format!("s{n}"),
            n,
            degree: d,
            elements: GroupElements::Perms(perms),
            action,
            basis,
            irreps,
            multiplicities: mults,
        })
    }

    /// A finite matrix group (e.g. from [`group_closure`]) acting on the
    /// lex-ordered degree-`d` monomial basis. The stored action is the
    /// substitution matrix of each element's inverse so that the map is a
    /// homomorphism.
    pub fn from_matrix_group(
        name: &str,
        elements: Vec<Mat>,
        d: u32,
        tol: f64,
    ) -> Result<Self, RepsnError> {
        let n = elements[0].rows;
        let basis = monomials_of_degree(n, d);
        let mut action = Vec::with_capacity(elements.len());
        for g in &elements {
            let inv = g.inverse().ok_or(RepsnError::ElementNotFound(tol))?;
            action.push(induced_action(&inv, &basis));
        }
        Ok(GroupRep {
            name: name.to_string(),
            n,
            degree: d,
            elements: GroupElements::Mats { mats: elements, tol },
            action,
            basis,
            irreps: Vec::new(),
            multiplicities: Vec::new(),
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Generator indices sufficient to test invariance (for `S_n`: an
    /// adjacent transposition and an `n`-cycle; otherwise all elements).
    pub fn generator_perms(&self) -> Vec<Perm> {
        match &self.elements {
            GroupElements::Perms(v) => {
                let n = v[0].n();
                if n < 2 {
                    return vec![Perm::identity(n)];
                }
                let mut cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
                if n == 2 {
                    cycle = vec![1, 0];
                }
                vec![Perm::transposition(n, 0, 1), Perm(cycle)]
            }
            GroupElements::Mats { .. } => Vec::new(),
        }
    }
}

/// The four generators of the 120-element icosahedral symmetry group.
pub fn icosahedral_generators() -> Vec<Mat> {
    let s5 = 5.0f64.sqrt();
    let a = (s5 + 1.0) / 4.0;
    let b = 1.0 / (s5 + 1.0);
    vec![
        Mat::from_rows(&[
            vec![-1.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ]),
        Mat::from_rows(&[
            vec![0.0, 0.0, 1.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
        ]),
        Mat::from_rows(&[
            vec![0.5, -a, b],
            vec![a, b, -0.5],
            vec![b, 0.5, a],
        ]),
        Mat::from_rows(&[
            vec![-1.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, -1.0],
        ]),
    ]
}

#[derive(Debug, Deserialize)]
struct GroupFile {
    name: Option<String>,
    generators: Vec<Vec<Vec<serde_json::Value>>>,
    #[serde(default)]
    closure_tol: Option<f64>,
    #[serde(default)]
    closure_cap: Option<usize>,
}

/// Load generator matrices from JSON: entries may be numbers, decimal
/// strings, or exact `p/q` strings. Returns `(name, generators, tol, cap)`.
pub fn load_group_json(text: &str) -> Result<(String, Vec<Mat>, f64, usize), RepsnError> {
    let file: GroupFile =
        serde_json::from_str(text).map_err(|e| RepsnError::BadGroupFile(e.to_string()))?;
    let parse_entry = |v: &serde_json::Value| -> Result<f64, RepsnError> {
        match v {
            serde_json::Value::Number(x) => x
                .as_f64()
                .ok_or_else(|| RepsnError::BadGroupFile("bad number".into())),
            serde_json::Value::String(s) => {
                if let Some((p, q)) = s.split_once('/') {
                    let p: i64 = p
                        .trim()
                        .parse()
                        .map_err(|_| RepsnError::BadGroupFile(format!("bad rational {s}")))?;
                    let q: i64 = q
                        .trim()
                        .parse()
                        .map_err(|_| RepsnError::BadGroupFile(format!("bad rational {s}")))?;
                    if q == 0 {
                        return Err(RepsnError::BadGroupFile(format!("zero denominator {s}")));
                    }
                    Ok(crate::poly::rat_to_f64(&crate::poly::ratio(p, q)))
                } else {
                    s.trim()
                        .parse()
                        .map_err(|_| RepsnError::BadGroupFile(format!("bad entry {s}")))
                }
            }
            _ => Err(RepsnError::BadGroupFile("entry must be number or string".into())),
        }
    };
    let mut gens = Vec::new();
    for g in &file.generators {
        let rows: Result<Vec<Vec<f64>>, _> = g
            .iter()
            .map(|row| row.iter().map(parse_entry).collect())
            .collect();
        let rows = rows?;
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(RepsnError::BadGroupFile("generators must be square".into()));
        }
        gens.push(Mat::from_rows(&rows));
    }
    Ok((
        file.name.unwrap_or_else(|| "matrix-group".into()),
        gens,
        file.closure_tol.unwrap_or(1e-6),
        file.closure_cap.unwrap_or(10_000),
    ))
}

/// Exact conversion helper for tests that want rational matrices from floats.
pub fn mat_to_rational(m: &Mat) -> Vec<Vec<Rat>> {
    m.to_rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|&x| rat_from_f64(x).expect("finite"))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    #[test]
    fn multiplicity_small_cases() {
        // d = 2, n = 3: trivial 2, standard 2, alternating 0.
        assert_eq!(multiplicity(&Partition::new(vec![3]), 2), 2);
        assert_eq!(multiplicity(&Partition::new(vec![2, 1]), 2), 2);
        assert_eq!(multiplicity(&Partition::new(vec![1, 1, 1]), 2), 0);
        // d = 3, n = 3: three, three, one.
        assert_eq!(multiplicity(&Partition::new(vec![3]), 3), 3);
        assert_eq!(multiplicity(&Partition::new(vec![2, 1]), 3), 3);
        assert_eq!(multiplicity(&Partition::new(vec![1, 1, 1]), 3), 1);
        // n = 2, d = 4: trivial d/2+1 = 3, alternating 2.
        assert_eq!(multiplicity(&Partition::new(vec![2]), 4), 3);
        assert_eq!(multiplicity(&Partition::new(vec![1, 1]), 4), 2);
    }

    #[test]
    fn irrep_dimensions() {
        assert_eq!(irrep_dimension(&Partition::new(vec![3])), 1);
        assert_eq!(irrep_dimension(&Partition::new(vec![2, 1])), 2);
        assert_eq!(irrep_dimension(&Partition::new(vec![1, 1, 1])), 1);
        // Matches the number of standard tableaux that back the matrices.
        for lambda in partitions_of(5, None) {
            let ir = young_orthogonal_irrep(&lambda).unwrap();
            assert_eq!(ir.dim as u64, irrep_dimension(&lambda));
        }
    }

    #[test]
    fn group_json_loading() {
        let text = r#"{
            "name": "signs",
            "generators": [
                [["-1", "0"], ["0", "1"]],
                [["1/2", "0.8660254037844386"], ["-0.8660254037844386", "1/2"]]
            ],
            "closure_tol": 1e-7
        }"#;
        let (name, gens, tol, cap) = load_group_json(text).unwrap();
        assert_eq!(name, "signs");
        assert_eq!(gens.len(), 2);
        assert_eq!(tol, 1e-7);
        assert_eq!(cap, 10_000);
        assert_eq!(gens[0][(0, 0)], -1.0);
        assert!((gens[1][(0, 1)] - 0.8660254037844386).abs() < 1e-15);
        // The rotation has order 6; together with the reflection this closes
        // to the 12-element dihedral group.
        let elems = group_closure(&gens, tol, 100).unwrap();
        assert_eq!(elems.len(), 12);
    }

    #[test]
    fn oracle_trivial_cases() {
        for n in 2..=5u32 {
            let triv = Partition::new(vec![n]);
            assert_eq!(multiplicity_oracle(&triv, 0).unwrap(), 1);
            assert_eq!(multiplicity_oracle(&triv, 1).unwrap(), 1);
        }
    }

    #[test]
    fn oracle_agrees_with_hooks_for_s3() {
        for lambda in partitions_of(3, None) {
            for d in 0..=8u32 {
                assert_eq!(
                    multiplicity(&lambda, d),
                    multiplicity_oracle(&lambda, d).unwrap(),
                    "lambda = {lambda}, d = {d}"
                );
            }
        }
    }

    #[test]
    fn mn_characters_s3() {
        let std = Partition::new(vec![2, 1]);
        assert_eq!(mn_character(&std, &Partition::new(vec![1, 1, 1])), 2);
        assert_eq!(mn_character(&std, &Partition::new(vec![2, 1])), 0);
        assert_eq!(mn_character(&std, &Partition::new(vec![3])), -1);
        let sgn = Partition::new(vec![1, 1, 1]);
        assert_eq!(mn_character(&sgn, &Partition::new(vec![2, 1])), -1);
    }

    #[test]
    fn quasi_polynomial_values() {
        assert_eq!(q_quasi(0), 1);
        assert_eq!(q_quasi(2), 2);
        assert_eq!(p_quasi(-1), 0);
        for d in 0..=24i64 {
            assert_eq!(q_quasi(d), multiplicity(&Partition::new(vec![3]), d as u32));
            assert_eq!(
                p_quasi(d - 1),
                multiplicity(&Partition::new(vec![2, 1]), d as u32)
            );
            assert_eq!(
                q_quasi(d - 3),
                multiplicity(&Partition::new(vec![1, 1, 1]), d as u32)
            );
        }
    }

    #[test]
    fn young_orthogonal_s3_standard() {
        let ir = young_orthogonal_irrep(&Partition::new(vec![2, 1])).unwrap();
        assert_eq!(ir.dim, 2);
        let perms = all_perms(3);
        // Character on the three classes.
        for (i, p) in perms.iter().enumerate() {
            let tr = ir.mats[i].trace();
            let expect = match p.cycle_type().parts() {
                [1, 1, 1] => 2.0,
                [2, 1] => 0.0,
                [3] => -1.0,
                other => panic!("unexpected cycle type {other:?}"),
            };
            assert!((tr - expect).abs() < 1e-12);
        }
        // Orthogonality and homomorphism.
        let idx: HashMap<Perm, usize> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        for (i, p) in perms.iter().enumerate() {
            let m = &ir.mats[i];
            assert!(m.transpose().matmul(m).max_abs_diff(&Mat::identity(2)) < 1e-12);
            for (j, q) in perms.iter().enumerate() {
                let pq = p.compose(q);
                let expect = &ir.mats[idx[&pq]];
                assert!(m.matmul(&ir.mats[j]).max_abs_diff(expect) < 1e-12);
            }
        }
    }

    #[test]
    fn young_orthogonal_one_dimensional() {
        let triv = young_orthogonal_irrep(&Partition::new(vec![4])).unwrap();
        assert!(triv.mats.iter().all(|m| (m[(0, 0)] - 1.0).abs() < 1e-14));
        let sgn = young_orthogonal_irrep(&Partition::new(vec![1, 1, 1, 1])).unwrap();
        for (i, p) in all_perms(4).iter().enumerate() {
            let parity = p
                .cycle_type()
                .parts()
                .iter()
                .map(|&c| (c - 1) as usize)
                .sum::<usize>();
            let expect = if parity % 2 == 0 { 1.0 } else { -1.0 };
            assert!((sgn.mats[i][(0, 0)] - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn young_braid_relations() {
        for lambda in partitions_of(4, None) {
            let ir = young_orthogonal_irrep(&lambda).unwrap();
            let perms = all_perms(4);
            let idx: HashMap<Perm, usize> = perms
                .iter()
                .cloned()
                .enumerate()
                .map(|(i, p)| (p, i))
                .collect();
            let gen = |k: usize| &ir.mats[idx[&Perm::transposition(4, k, k + 1)]];
            for k in 0..2 {
                let a = gen(k);
                let b = gen(k + 1);
                let aba = a.matmul(b).matmul(a);
                let bab = b.matmul(a).matmul(b);
                assert!(aba.max_abs_diff(&bab) < 1e-12);
                assert!(a.matmul(a).max_abs_diff(&Mat::identity(ir.dim)) < 1e-12);
            }
        }
    }

    #[test]
    fn induced_action_examples() {
        // n = 2: the transposition acts antidiagonally in the lex basis.
        let basis = monomials_of_degree(2, 3);
        let swap = Perm(vec![1, 0]).matrix();
        let m = induced_action(&swap, &basis);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i + j == 3 { 1.0 } else { 0.0 };
                assert_eq!(m[(i, j)], expect);
            }
        }
        assert!(
            induced_action(&Mat::identity(3), &monomials_of_degree(3, 2))
                .max_abs_diff(&Mat::identity(6))
                < 1e-15
        );
        // Generic 3x3: entry (row x1x2, col x1^2) = 2 g11 g12.
        let g = Mat::from_rows(&[
            vec![1.5, -0.25, 0.75],
            vec![0.5, 2.0, -1.0],
            vec![0.25, 1.0, 3.0],
        ]);
        let basis = monomials_of_degree(3, 2);
        let m = induced_action(&g, &basis);
        // basis: x1^2, x1x2, x1x3, x2^2, x2x3, x3^2
        assert!((m[(1, 0)] - 2.0 * g[(0, 0)] * g[(0, 1)]).abs() < 1e-14);
        assert!((m[(0, 1)] - g[(0, 0)] * g[(1, 0)]).abs() < 1e-14);
    }

    #[test]
    fn closure_small_groups() {
        let id = Mat::identity(3);
        assert_eq!(group_closure(&[id.clone()], 1e-9, 10).unwrap().len(), 1);
        let neg = id.scale(-1.0);
        assert_eq!(
            group_closure(&[neg, Mat::identity(3)], 1e-9, 10)
                .unwrap()
                .len(),
            2
        );
    }

    #[test]
    fn icosahedral_closure_has_120_elements() {
        let gens = icosahedral_generators();
        let elems = group_closure(&gens, 1e-6, 1000).unwrap();
        assert_eq!(elems.len(), 120);
        // All orthogonal.
        for e in &elems {
            assert!(e.transpose().matmul(e).max_abs_diff(&Mat::identity(3)) < 1e-9);
        }
    }

    #[test]
    fn frobenius_schur_s3() {
        let perms = all_perms(3);
        let elems = GroupElements::Perms(perms.clone());
        let chi_of = |lambda: &Partition| -> Vec<Rat> {
            perms
                .iter()
                .map(|p| rat(mn_character(lambda, &p.cycle_type())))
                .collect()
        };
        for lambda in partitions_of(3, None) {
            let ind = frobenius_schur(&chi_of(&lambda), &elems).unwrap();
            assert_eq!(ind, ratio(1, 1), "lambda = {lambda}");
        }
    }

    #[test]
    fn orbit_basis_order() {
        let basis = orbit_basis(3, 3);
        let flat: Vec<Vec<u32>> = basis.iter().map(|e| e.0.clone()).collect();
        assert_eq!(
            flat,
            vec![
                vec![3, 0, 0],
                vec![0, 3, 0],
                vec![0, 0, 3],
                vec![2, 1, 0],
                vec![2, 0, 1],
                vec![1, 2, 0],
                vec![1, 0, 2],
                vec![0, 2, 1],
                vec![0, 1, 2],
                vec![1, 1, 1],
            ]
        );
        let ranges = orbit_ranges(3, 3);
        assert_eq!(ranges.len(), 3);
        assert_eq!(ranges[0], (Partition::new(vec![3]), 0, 3));
        assert_eq!(ranges[1], (Partition::new(vec![2, 1]), 3, 6));
        assert_eq!(ranges[2], (Partition::new(vec![1, 1, 1]), 9, 1));
    }

    #[test]
    fn symmetric_group_rep_is_homomorphism() {
        let rep = GroupRep::symmetric_group(3, 2).unwrap();
        assert_eq!(rep.dim(), 6);
        let perms = match &rep.elements {
            GroupElements::Perms(v) => v.clone(),
            _ => unreachable!(),
        };
        let idx: HashMap<Perm, usize> = perms
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        for (i, p) in perms.iter().enumerate() {
            for (j, q) in perms.iter().enumerate() {
                let pq = idx[&p.compose(q)];
                assert!(
                    rep.action[i]
                        .matmul(&rep.action[j])
                        .max_abs_diff(&rep.action[pq])
                        < 1e-12
                );
            }
        }
        assert_eq!(rep.multiplicities, vec![2, 2]);
    }
}
