//! Partitions, dominance order, and exact generators for the five classical
//! symmetric polynomial bases, with term normalization `g / g(1,...,1)`.

use crate::poly::{rat, ExpVec, PolyError, Rat, SparsePoly};
use num_traits::{One, Zero};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SymFuncError {
    #[error("partitions must have equal weight ({0} vs {1})")]
    WeightMismatch(u32, u32),
    #[error("bad partition literal: {0}")]
    BadPartition(String),
}

/// A partition: weakly decreasing positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `n(lambda) = sum_i (i - 1) lambda_i` (1-based rows).
    pub fn n_stat(&self) -> u32 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &p)| i as u32 * p)
            .sum()
    }

    /// Conjugate (transposed Young diagram).
    pub fn conjugate(&self) -> Partition {
        if self.0.is_empty() {
            return Partition::empty();
        }
        let cols = self.0[0] as usize;
        let mut out = vec![0u32; cols];
        for &p in &self.0 {
            for c in out.iter_mut().take(p as usize) {
                *c += 1;
            }
        }
        Partition(out)
    }

    /// Hook lengths of all boxes, row by row. There are `weight()` of them.
    pub fn hook_lengths(&self) -> Vec<u32> {
        let conj = self.conjugate();
        let mut hooks = Vec::with_capacity(self.weight() as usize);
        for (r, &row_len) in self.0.iter().enumerate() {
            for c in 0..row_len as usize {
                let arm = row_len - c as u32 - 1;
                let leg = conj.0[c] - r as u32 - 1;
                hooks.push(arm + leg + 1);
            }
        }
        hooks
    }

    /// Parse `5,2,1`.
    pub fn parse(s: &str) -> Result<Self, SymFuncError> {
        let parts: Result<Vec<u32>, _> = s
            .split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect();
        match parts {
            Ok(v) if !v.is_empty() && v.iter().all(|&p| p > 0) => {
                let sorted = v.windows(2).all(|w| w[0] >= w[1]);
                if !sorted {
                    return Err(SymFuncError::BadPartition(s.to_string()));
                }
                Ok(Partition(v))
            }
            _ => Err(SymFuncError::BadPartition(s.to_string())),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        f.write_str(&s.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    Less,
    Greater,
    Equal,
    Incomparable,
}

/// Dominance comparison of two partitions of the same weight: `Greater` when
/// every prefix sum of `lambda` is >= the corresponding prefix sum of `mu`.
pub fn dominance(lambda: &Partition, mu: &Partition) -> Result<Dominance, SymFuncError> {
    if lambda.weight() != mu.weight() {
        return Err(SymFuncError::WeightMismatch(lambda.weight(), mu.weight()));
    }
    if lambda == mu {
        return Ok(Dominance::Equal);
    }
    let k = lambda.len().max(mu.len());
    let part = |p: &Partition, i: usize| -> u32 { p.parts().get(i).copied().unwrap_or(0) };
    let (mut lam_ge, mut mu_ge) = (true, true);
    let (mut sl, mut sm) = (0u32, 0u32);
    for i in 0..k {
        sl += part(lambda, i);
        sm += part(mu, i);
        if sl < sm {
            lam_ge = false;
        }
        if sm < sl {
            mu_ge = false;
        }
    }
    Ok(match (lam_ge, mu_ge) {
        (true, false) => Dominance::Greater,
        (false, true) => Dominance::Less,
        (false, false) => Dominance::Incomparable,
        (true, true) => Dominance::Equal,
    })
}

/// All partitions of `total` with at most `max_parts` parts (`None` for
/// unlimited), in reverse lexicographic order: `(N), (N-1,1), ...`.
pub fn partitions_of(total: u32, max_parts: Option<usize>) -> Vec<Partition> {
    fn rec(
        remaining: u32,
        max_part: u32,
        slots: usize,
        prefix: &mut Vec<u32>,
        out: &mut Vec<Partition>,
    ) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        if slots == 0 {
            return;
        }
        let hi = max_part.min(remaining);
        for p in (1..=hi).rev() {
            prefix.push(p);
            rec(remaining - p, p, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let slots = max_parts.unwrap_or(total as usize);
    if total == 0 {
        out.push(Partition::empty());
        return out;
    }
    rec(total, total, slots, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Monomial,
    Elementary,
    PowerSum,
    Homogeneous,
    Schur,
}

impl BasisKind {
    pub fn from_char(c: char) -> Option<Self> {
        match c.to_ascii_lowercase() {
            'm' => Some(BasisKind::Monomial),
            'e' => Some(BasisKind::Elementary),
            'p' => Some(BasisKind::PowerSum),
            'h' => Some(BasisKind::Homogeneous),
            's' => Some(BasisKind::Schur),
            _ => None,
        }
    }
}

/// `e_k` in `n` variables (zero when `k > n`).
fn elementary_k(k: u32, n: usize) -> SparsePoly {
    let mut out = SparsePoly::zero(n);
    if k as usize > n {
        return out;
    }
    if k == 0 {
        return SparsePoly::constant(n, Rat::one());
    }
    // Iterate over k-subsets.
    let mut idx: Vec<usize> = (0..k as usize).collect();
    loop {
        let mut e = vec![0u32; n];
        for &i in &idx {
            e[i] = 1;
        }
        out.add_term(ExpVec(e), Rat::one());
        // next combination
        let k = idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `p_k = sum x_i^k`.
fn power_sum_k(k: u32, n: usize) -> SparsePoly {
    if k == 0 {
        return SparsePoly::constant(n, rat(n as i64));
    }
    let mut out = SparsePoly::zero(n);
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = k;
        out.add_term(ExpVec(e), Rat::one());
    }
    out
}

/// `h_k = sum of all degree-k monomials`.
fn homogeneous_k(k: u32, n: usize) -> SparsePoly {
    let mut out = SparsePoly::zero(n);
    for e in crate::poly::monomials_of_degree(n, k) {
        out.add_term(e, Rat::one());
    }
    out
}

/// Monomial symmetric polynomial: orbit expansion of the leading exponent
/// vector (zero when the partition has more parts than variables).
fn monomial_sym(lambda: &Partition, n: usize) -> SparsePoly {
    let mut out = SparsePoly::zero(n);
    if lambda.len() > n {
        return out;
    }
    let mut base = vec![0u32; n];
    for (i, &p) in lambda.parts().iter().enumerate() {
        base[i] = p;
    }
    base.sort_unstable();
    // Distinct permutations via BTreeSet of next_permutation sweep.
    let mut seen = BTreeSet::new();
    permute_distinct(&mut base, 0, &mut seen);
    for e in seen {
        out.add_term(ExpVec(e), Rat::one());
    }
    out
}

fn permute_distinct(v: &mut Vec<u32>, start: usize, out: &mut BTreeSet<Vec<u32>>) {
    if start == v.len() {
        out.insert(v.clone());
        return;
    }
    let mut used = BTreeSet::new();
    for i in start..v.len() {
        if used.insert(v[i]) {
            v.swap(start, i);
            permute_distinct(v, start + 1, out);
            v.swap(start, i);
        }
    }
}

/// Schur polynomial via the Jacobi-Trudi determinant over complete homogeneous
/// generators: `s_lambda = det(h_{lambda_i - i + j})`. Exact, and it reuses
/// the `h` generator instead of the numerically fragile bialternant ratio.
fn schur(lambda: &Partition, n: usize) -> SparsePoly {
    if lambda.len() > n {
        return SparsePoly::zero(n);
    }
    let l = lambda.len();
    if l == 0 {
        return SparsePoly::constant(n, Rat::one());
    }
    let h = |k: i64| -> SparsePoly {
        if k < 0 {
            SparsePoly::zero(n)
        } else {
            homogeneous_k(k as u32, n)
        }
    };
    // Laplace expansion over permutations; partitions here are short.
    let mut total = SparsePoly::zero(n);
    let mut perm: Vec<usize> = (0..l).collect();
    loop {
        let mut sign = 0usize;
        for i in 0..l {
            for j in i + 1..l {
                if perm[i] > perm[j] {
                    sign += 1;
                }
            }
        }
        let mut prod = SparsePoly::constant(n, Rat::one());
        for (i, &j) in perm.iter().enumerate() {
            let k = lambda.parts()[i] as i64 - i as i64 + j as i64;
            prod = &prod * &h(k);
            if prod.is_zero() {
                break;
            }
        }
        if sign % 2 == 1 {
            prod = -&prod;
        }
        total = &total + &prod;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    total
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Generator for one of the five classical bases, as a concrete polynomial in
/// `n` variables. Multiplicative bases (`e`, `p`, `h`) take products over the
/// parts; `m` and `s` return zero when the partition needs more variables.
pub fn basis_poly(kind: BasisKind, lambda: &Partition, n: usize) -> SparsePoly {
    match kind {
        BasisKind::Monomial => monomial_sym(lambda, n),
        BasisKind::Schur => schur(lambda, n),
        BasisKind::Elementary | BasisKind::PowerSum | BasisKind::Homogeneous => {
            let gen = |k: u32| match kind {
                BasisKind::Elementary => elementary_k(k, n),
                BasisKind::PowerSum => power_sum_k(k, n),
                _ => homogeneous_k(k, n),
            };
            let mut out = SparsePoly::constant(n, Rat::one());
            for &p in lambda.parts() {
                out = &out * &gen(p);
            }
            out
        }
    }
}

/// Term normalization `G = g / g(1,...,1)`; the result evaluates to one at
/// the all-ones point.
pub fn term_normalize(g: &SparsePoly) -> Result<SparsePoly, PolyError> {
    let ones = vec![Rat::one(); g.n];
    let total = g.eval(&ones)?;
    if total.is_zero() {
        return Err(PolyError::ZeroNormalizer);
    }
    Ok(g.scale(&total.recip()))
}
