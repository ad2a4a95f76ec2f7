//! Exact sparse multivariate polynomials over the rationals, plus a float
//! variant used downstream of the numerical change of basis.
//!
//! Coefficients are `BigRational` so every coefficient-matching step stays
//! exact. Terms are keyed by exponent vectors ordered graded-lex, which fixes
//! a deterministic rendering and matrix indexing order once and for all.

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

/// Exact rational scalar. Always stored reduced with positive denominator.
pub type Rat = BigRational;

/// `n` as a rational.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// `p/q` as a rational. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

/// Exact conversion of a finite `f64` (binary floats are rationals).
pub fn rat_from_f64(x: f64) -> Option<Rat> {
    Rat::from_float(x)
}

pub fn rat_to_f64(x: &Rat) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().expect("finite rational")
}

/// Render a rational as `p/q`, or `p` when the denominator is one.
pub fn render_rat(x: &Rat) -> String {
    if x.denom().is_one() {
        format!("{}", x.numer())
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Debug, Error)]
pub enum PolyError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("variable index {idx} out of range at byte {pos} (n = {n})")]
    VarIndex { pos: usize, idx: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("division by zero: polynomial vanishes at the all-ones point")]
    ZeroNormalizer,
}

/// Exponent vector of a monomial; length equals the ambient variable count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExpVec(pub Vec<u32>);

impl ExpVec {
    pub fn zero(n: usize) -> Self {
        ExpVec(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        ExpVec(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &ExpVec) -> ExpVec {
        ExpVec(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn doubled(&self) -> ExpVec {
        ExpVec(self.0.iter().map(|a| 2 * a).collect())
    }

    /// Image under the variable relabeling `x_i -> x_{sigma[i]}`.
    pub fn permuted(&self, sigma: &[usize]) -> ExpVec {
        let mut out = vec![0; self.0.len()];
        for (i, &e) in self.0.iter().enumerate() {
            out[sigma[i]] = e;
        }
        ExpVec(out)
    }

    /// Sorted (descending) exponents: the partition label of the monomial orbit.
    pub fn orbit_label(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.0.iter().copied().filter(|&e| e > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }
}

impl Ord for ExpVec {
    /// Graded lexicographic: degree first, then lex on the exponents.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExpVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All degree-`d` monomials in `n` variables, lexicographically descending,
/// e.g. `x1^2, x1x2, x1x3, x2^2, x2x3, x3^2` for `n = 3, d = 2`.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<ExpVec> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<ExpVec>) {
        if n == 1 {
            prefix.push(d);
            out.push(ExpVec(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(n - 1, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out
}

/// Sparse multivariate polynomial with exact rational coefficients.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsePoly {
    pub n: usize,
    pub terms: BTreeMap<ExpVec, Rat>,
}

impl SparsePoly {
    pub fn zero(n: usize) -> Self {
        SparsePoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: Rat) -> Self {
        let mut p = Self::zero(n);
        p.add_term(ExpVec::zero(n), c);
        p
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut p = Self::zero(n);
        p.add_term(ExpVec::var(n, i), Rat::one());
        p
    }

    pub fn monomial(n: usize, exps: &[u32], c: Rat) -> Self {
        assert_eq!(exps.len(), n);
        let mut p = Self::zero(n);
        p.add_term(ExpVec(exps.to_vec()), c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &ExpVec) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: ExpVec, c: Rat) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(e.len(), self.n);
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    /// `Some(d)` when every term has degree `d` (the zero polynomial is
    /// homogeneous of every degree; it reports `Some(0)`).
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let d = match it.next() {
            None => return Some(0),
            Some(e) => e.degree(),
        };
        if it.all(|e| e.degree() == d) {
            Some(d)
        } else {
            None
        }
    }

    pub fn scale(&self, c: &Rat) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.n);
        }
        SparsePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a * c))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> SparsePoly {
        let mut acc = SparsePoly::constant(self.n, Rat::one());
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Result<Rat, PolyError> {
        if point.len() != self.n {
            return Err(PolyError::Dimension {
                expected: self.n,
                got: point.len(),
            });
        }
        let mut acc = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, &k) in e.0.iter().enumerate() {
                for _ in 0..k {
                    term *= &point[i];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// `f(x_1^2, ..., x_n^2)`: every exponent doubled.
    pub fn substitute_squares(&self) -> SparsePoly {
        SparsePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.doubled(), c.clone()))
                .collect(),
        }
    }

    /// Linear substitution `x_i -> sum_j A[i][j] x_j`, expanded exactly.
    pub fn apply_linear_substitution(&self, a: &[Vec<Rat>]) -> Result<SparsePoly, PolyError> {
        if a.len() != self.n || a.iter().any(|row| row.len() != self.n) {
            return Err(PolyError::Dimension {
                expected: self.n,
                got: a.len(),
            });
        }
        let images: Vec<SparsePoly> = (0..self.n)
            .map(|i| {
                let mut li = SparsePoly::zero(self.n);
                for (j, c) in a[i].iter().enumerate() {
                    li.add_term(ExpVec::var(self.n, j), c.clone());
                }
                li
            })
            .collect();
        let mut out = SparsePoly::zero(self.n);
        for (e, c) in &self.terms {
            let mut term = SparsePoly::constant(self.n, c.clone());
            for (i, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    term = &term * &images[i].pow(k);
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Variable relabeling `x_i -> x_{sigma[i]}` (exact, no expansion needed).
    pub fn permute_vars(&self, sigma: &[usize]) -> SparsePoly {
        let mut out = SparsePoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.permuted(sigma), c.clone());
        }
        out
    }

    /// Float snapshot of the coefficients.
    pub fn to_float(&self) -> FloatPoly {
        FloatPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), rat_to_f64(c)))
                .collect(),
        }
    }

    /// Render in the text interchange format, terms in graded-lex descending
    /// order: `1/54*x1^6 + ... - 1/18*x1^2*x2^2*x3^2`.
    pub fn render(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.degree() == 0 {
                factors.push(render_rat(&abs));
            }
            for (i, &k) in e.0.iter().enumerate() {
                if k == 1 {
                    factors.push(format!("x{}", i + 1));
                } else if k > 1 {
                    factors.push(format!("x{}^{}", i + 1, k));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: Self) -> SparsePoly {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: Self) -> SparsePoly {
        assert_eq!(self.n, rhs.n);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: Self) -> SparsePoly {
        assert_eq!(self.n, rhs.n);
        let mut out = SparsePoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

/// Sparse polynomial with `f64` coefficients; the symmetry-adapted basis and
/// everything extracted from SDP output lives here.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatPoly {
    pub n: usize,
    pub terms: BTreeMap<ExpVec, f64>,
}

impl FloatPoly {
    pub fn zero(n: usize) -> Self {
        FloatPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, e: ExpVec, c: f64) {
        if c == 0.0 {
            return;
        }
        *self.terms.entry(e).or_insert(0.0) += c;
    }

    pub fn scale(&self, c: f64) -> FloatPoly {
        FloatPoly {
            n: self.n,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn add(&self, rhs: &FloatPoly) -> FloatPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), *c);
        }
        out
    }

    pub fn mul(&self, rhs: &FloatPoly) -> FloatPoly {
        let mut out = FloatPoly::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.mul(e2), c1 * c2);
            }
        }
        out
    }

    pub fn square(&self) -> FloatPoly {
        self.mul(self)
    }

    pub fn permute_vars(&self, sigma: &[usize]) -> FloatPoly {
        let mut out = FloatPoly::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.permuted(sigma), *c);
        }
        out
    }

    /// Maximum coefficient magnitude of `self - rhs`.
    pub fn max_coeff_diff(&self, rhs: &FloatPoly) -> f64 {
        let mut keys: std::collections::BTreeSet<&ExpVec> = self.terms.keys().collect();
        keys.extend(rhs.terms.keys());
        keys.into_iter()
            .map(|e| {
                (self.terms.get(e).copied().unwrap_or(0.0)
                    - rhs.terms.get(e).copied().unwrap_or(0.0))
                .abs()
            })
            .fold(0.0, f64::max)
    }

    /// Maximum coefficient deviation from an exact polynomial.
    pub fn max_diff_exact(&self, rhs: &SparsePoly) -> f64 {
        self.max_coeff_diff(&rhs.to_float())
    }

    /// Drop terms with |coefficient| below `eps`.
    pub fn pruned(&self, eps: f64) -> FloatPoly {
        FloatPoly {
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() >= eps)
                .map(|(e, c)| (e.clone(), *c))
                .collect(),
        }
    }

    pub fn render(&self, digits: usize) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = *c < 0.0;
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let mut factors = vec![format!("{:.*}", digits, c.abs())];
            for (i, &k) in e.0.iter().enumerate() {
                if k == 1 {
                    factors.push(format!("x{}", i + 1));
                } else if k > 1 {
                    factors.push(format!("x{}^{}", i + 1, k));
                }
            }
            out.push_str(&factors.join("*"));
        }
        out
    }
}

/// Parse the text interchange format: a `+`/`-` separated sum of terms
/// `c*x1^a1*...*xn^an` with rational `c` (integer or `p/q`).
pub fn parse_poly(text: &str, n: usize) -> Result<SparsePoly, PolyError> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;
    let mut out = SparsePoly::zero(n);

    fn skip_ws(bytes: &[u8], pos: &mut usize) {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    }

    fn parse_uint(bytes: &[u8], pos: &mut usize) -> Option<u64> {
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if *pos == start {
            return None;
        }
        std::str::from_utf8(&bytes[start..*pos]).ok()?.parse().ok()
    }

    skip_ws(bytes, &mut pos);
    if pos == bytes.len() {
        return Err(PolyError::Syntax {
            pos,
            msg: "empty input".into(),
        });
    }

    let mut first = true;
    while pos < bytes.len() {
        skip_ws(bytes, &mut pos);
        if pos == bytes.len() {
            break;
        }
        // Sign between terms (mandatory after the first term).
        let mut sign = 1i64;
        if bytes[pos] == b'+' || bytes[pos] == b'-' {
            if bytes[pos] == b'-' {
                sign = -1;
            }
            pos += 1;
            skip_ws(bytes, &mut pos);
        } else if !first {
            return Err(PolyError::Syntax {
                pos,
                msg: "expected '+' or '-' between terms".into(),
            });
        }
        first = false;

        // Term: coefficient and/or variable factors separated by '*'.
        let mut coeff = Rat::from_integer(sign.into());
        let mut exps = vec![0u32; n];
        loop {
            skip_ws(bytes, &mut pos);
            if pos < bytes.len() && bytes[pos].is_ascii_digit() {
                let p0 = pos;
                let num = parse_uint(bytes, &mut pos).ok_or(PolyError::Syntax {
                    pos: p0,
                    msg: "bad integer".into(),
                })?;
                let mut den = 1u64;
                if pos < bytes.len() && bytes[pos] == b'/' {
                    pos += 1;
                    let p1 = pos;
                    den = parse_uint(bytes, &mut pos).ok_or(PolyError::Syntax {
                        pos: p1,
                        msg: "bad denominator".into(),
                    })?;
                    if den == 0 {
                        return Err(PolyError::Syntax {
                            pos: p1,
                            msg: "zero denominator".into(),
                        });
                    }
                }
                coeff *= Rat::new((num as i64).into(), (den as i64).into());
            } else if pos < bytes.len() && (bytes[pos] == b'x' || bytes[pos] == b'X') {
                let p0 = pos;
                pos += 1;
                let idx = parse_uint(bytes, &mut pos).ok_or(PolyError::Syntax {
                    pos: p0,
                    msg: "expected variable index after 'x'".into(),
                })? as usize;
                if idx == 0 || idx > n {
                    return Err(PolyError::VarIndex { pos: p0, idx, n });
                }
                let mut exp = 1u32;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let p1 = pos;
                    exp = parse_uint(bytes, &mut pos).ok_or(PolyError::Syntax {
                        pos: p1,
                        msg: "expected exponent after '^'".into(),
                    })? as u32;
                }
                exps[idx - 1] += exp;
            } else {
                return Err(PolyError::Syntax {
                    pos,
                    msg: "expected coefficient or variable".into(),
                });
            }
            skip_ws(bytes, &mut pos);
            if pos < bytes.len() && bytes[pos] == b'*' {
                pos += 1;
                continue;
            }
            break;
        }
        out.add_term(ExpVec(exps), coeff);
    }
    Ok(out)
}
