//! Closed-form analyzers for the special families: binary forms under the
//! variable swap, symmetric quadratics, symmetric ternary quartics (conic
//! geometry of the two-parameter block family, vertex enumeration by a cubic
//! resultant), and symmetric ternary sextics (block formulas and the rank-3
//! obstruction relations).

use crate::linalg::Mat;
use crate::poly::{rat, rat_to_f64, ExpVec, Rat, SparsePoly};
use crate::sdp::{self, AffineBlock, SdpOptions, SdpProblem, SdpStatus};
use num_traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FamiliesError {
    #[error("matrix is not invariant under the antidiagonal flip (defect {0:.3e})")]
    NotFlipInvariant(f64),
    #[error("matrix must be square of size d+1, got {0}x{1}")]
    BadShape(usize, usize),
    #[error("point ({0}, {1}) is infeasible (min eigenvalue {2:.3e})")]
    InfeasiblePoint(f64, f64, f64),
}

// --- binary forms -------------------------------------------------------------

/// Explicit change of basis for binary forms of degree `d` in the lex
/// monomial basis `x^d, x^{d-1}y, ..., y^d`: sum columns
/// `(e_j + e_{N-1-j})/sqrt(2)` (plus the lone middle monomial when `d` is
/// even), then difference columns.
pub fn binary_adapted_t(d: u32) -> Mat {
    let n = (d + 1) as usize;
    let half = n / 2;
    let s = std::f64::consts::SQRT_2 / 2.0;
    let mut t = Mat::zeros(n, n);
    let mut col = 0;
    for j in 0..half {
        t[(j, col)] = s;
        t[(n - 1 - j, col)] = s;
        col += 1;
    }
    if n % 2 == 1 {
        t[(half, col)] = 1.0;
        col += 1;
    }
    for j in 0..half {
        t[(j, col)] = s;
        t[(n - 1 - j, col)] = -s;
        col += 1;
    }
    t
}

/// Sum/difference blocks of a flip-invariant symmetric matrix on the binary
/// monomial basis. Sizes: both `(d+1)/2` for odd `d`; `(d/2 + 1, d/2)` with a
/// `sqrt(2)`-scaled middle row and column for even `d`.
pub fn binary_blocks(d: u32, q: &Mat) -> Result<(Mat, Mat), FamiliesError> {
    let n = (d + 1) as usize;
    if q.rows != n || q.cols != n {
        return Err(FamiliesError::BadShape(q.rows, q.cols));
    }
    let scale = q.max_abs().max(1.0);
    let mut defect = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            defect = defect.max((q[(i, j)] - q[(n - 1 - i, n - 1 - j)]).abs());
        }
    }
    if defect > 1e-9 * scale {
        return Err(FamiliesError::NotFlipInvariant(defect));
    }
    let t = binary_adapted_t(d);
    let b = t.transpose().matmul(q).matmul(&t);
    let h1 = if n % 2 == 0 { n / 2 } else { n / 2 + 1 };
    let h2 = n / 2;
    Ok((b.submatrix(0, 0, h1, h1), b.submatrix(h1, h1, h2, h2)))
}

// --- symmetric quadratics -----------------------------------------------------

/// Analysis of the quadratic family. `(a, b)` are the Gram entries (diagonal
/// and off-diagonal), so the form itself is `a sum x_i^2 + 2b sum_{i<j} x_i x_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticAnalysis {
    pub sos: bool,
    /// Rank of the invariant Gram matrix when SOS: 0, 1, n-1, or n.
    pub rank: Option<usize>,
    /// `b = a` (rank drops to one).
    pub boundary_upper: bool,
    /// `b = -a/(n-1)` (rank drops to n-1).
    pub boundary_lower: bool,
}

/// Exact classification: SOS iff `-a/(n-1) <= b <= a`.
pub fn quadratic_analyze(a: &Rat, b: &Rat, n: usize) -> QuadraticAnalysis {
    assert!(n >= 2);
    let lower = -a.clone() / rat(n as i64 - 1);
    let sos = *b <= *a && *b >= lower;
    if !sos {
        return QuadraticAnalysis {
            sos: false,
            rank: None,
            boundary_upper: false,
            boundary_lower: false,
        };
    }
    let upper = *b == *a;
    let lowerb = *b == lower;
    let rank = if a.is_zero() && b.is_zero() {
        0
    } else if upper {
        1
    } else if lowerb {
        n - 1
    } else {
        n
    };
    QuadraticAnalysis {
        sos: true,
        rank: Some(rank),
        boundary_upper: upper,
        boundary_lower: lowerb,
    }
}

/// Angular fraction of the SOS cone `{ -a/(n-1) <= b <= a }` in the
/// `(a, b)`-plane: `(pi/4 + arctan(1/(n-1))) / (2 pi)`; tends to 1/8.
pub fn quadratic_sos_ratio(n: usize) -> f64 {
    assert!(n >= 2);
    (std::f64::consts::FRAC_PI_4 + (1.0 / (n as f64 - 1.0)).atan())
        / (2.0 * std::f64::consts::PI)
}

// --- symmetric ternary quartics ------------------------------------------------

/// Coefficients of `a sum x_i^4 + b sum_{i != j} x_i^3 x_j +
/// c sum_{i<j} x_i^2 x_j^2 + d sum_{i, j<k, j,k != i} x_i^2 x_j x_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuarticCoeffs {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl QuarticCoeffs {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Self {
        QuarticCoeffs { a, b, c, d }
    }

    /// The polynomial itself (three variables).
    pub fn poly(&self) -> SparsePoly {
        let mut f = SparsePoly::zero(3);
        for i in 0..3 {
            let mut e = vec![0u32; 3];
            e[i] = 4;
            f.add_term(ExpVec(e), self.a.clone());
        }
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    let mut e = vec![0u32; 3];
                    e[i] = 3;
                    e[j] = 1;
                    f.add_term(ExpVec(e), self.b.clone());
                }
            }
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let mut e = vec![0u32; 3];
                e[i] = 2;
                e[j] = 2;
                f.add_term(ExpVec(e), self.c.clone());
            }
        }
        for i in 0..3 {
            let mut e = vec![0u32; 3];
            for k in 0..3 {
                e[k] = if k == i { 2 } else { 1 };
            }
            f.add_term(ExpVec(e), self.d.clone());
        }
        f
    }

    /// Trivial block `K1(q12, q16)` as a 2x2 float matrix.
    pub fn k1(&self, q12: f64, q16: f64) -> Mat {
        let (a, b, c, d) = self.floats();
        Mat::from_rows(&[
            vec![a + 2.0 * q12, b + q16],
            vec![b + q16, c + d - 2.0 * q12 - 2.0 * q16],
        ])
    }

    /// Standard block `K2(q12, q16)` (appearing twice in the full matrix).
    pub fn k2(&self, q12: f64, q16: f64) -> Mat {
        let (a, b, c, d) = self.floats();
        Mat::from_rows(&[
            vec![a - q12, b / 2.0 - q16],
            vec![b / 2.0 - q16, c - d / 2.0 - 2.0 * q12 + q16],
        ])
    }

    fn floats(&self) -> (f64, f64, f64, f64) {
        (
            rat_to_f64(&self.a),
            rat_to_f64(&self.b),
            rat_to_f64(&self.c),
            rat_to_f64(&self.d),
        )
    }

    /// The 6x6 assembled matrix `diag(K1, K2, K2)` at a boundary point.
    pub fn full_matrix(&self, q12: f64, q16: f64) -> Mat {
        let k1 = self.k1(q12, q16);
        let k2 = self.k2(q12, q16);
        let mut m = Mat::zeros(6, 6);
        for (bi, blk) in [&k1, &k2, &k2].iter().enumerate() {
            for i in 0..2 {
                for j in 0..2 {
                    m[(2 * bi + i, 2 * bi + j)] = blk[(i, j)];
                }
            }
        }
        m
    }

    /// Affine two-parameter block family for the feasibility SDP.
    pub fn sdp_problem(&self) -> SdpProblem {
        let (a, b, c, d) = self.floats();
        let k1 = AffineBlock {
            dim: 2,
            copies: 1,
            constant: Mat::from_rows(&[vec![a, b], vec![b, c + d]]),
            coeffs: vec![
                Mat::from_rows(&[vec![2.0, 0.0], vec![0.0, -2.0]]),
                Mat::from_rows(&[vec![0.0, 1.0], vec![1.0, -2.0]]),
            ],
        };
        let k2 = AffineBlock {
            dim: 2,
            copies: 2,
            constant: Mat::from_rows(&[vec![a, b / 2.0], vec![b / 2.0, c - d / 2.0]]),
            coeffs: vec![
                Mat::from_rows(&[vec![-1.0, 0.0], vec![0.0, -2.0]]),
                Mat::from_rows(&[vec![0.0, -1.0], vec![-1.0, 1.0]]),
            ],
        };
        SdpProblem {
            blocks: vec![k1, k2],
            num_params: 2,
            objective: None,
        }
    }

    /// The 3x3 rational matrix of the homogenized trivial-block determinant
    /// quadric (rows/columns ordered `q12, q16, 1`).
    pub fn conic_matrix_k1(&self) -> Vec<Vec<Rat>> {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        vec![
            vec![rat(-4), rat(-2), -a.clone() + c + d],
            vec![rat(-2), rat(-1), -a.clone() - b],
            vec![
                -a.clone() + c + d,
                -a.clone() - b,
                a.clone() * c + a.clone() * d - b.clone() * b,
            ],
        ]
    }

    /// Same for the standard block.
    pub fn conic_matrix_k2(&self) -> Vec<Vec<Rat>> {
        let (a, b, c, d) = (&self.a, &self.b, &self.c, &self.d);
        let half = |x: Rat| x / rat(2);
        let quarter = |x: Rat| x / rat(4);
        vec![
            vec![
                rat(2),
                -half(rat(1)),
                -a.clone() - half(c.clone()) + quarter(d.clone()),
            ],
            vec![-half(rat(1)), rat(-1), half(a.clone() + b)],
            vec![
                -a.clone() - half(c.clone()) + quarter(d.clone()),
                half(a.clone() + b),
                a.clone() * c - half(a.clone() * d) - quarter(b.clone() * b),
            ],
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicKind {
    Parabola,
    DoubleLine,
    Hyperbola,
    CrossingLines,
}

#[derive(Debug, Clone)]
pub struct ConicClass {
    pub kind: ConicKind,
    pub matrix: Vec<Vec<Rat>>,
}

fn det3(m: &[Vec<Rat>]) -> Rat {
    let d = |r: usize, c: usize| m[r][c].clone();
    d(0, 0) * (d(1, 1) * d(2, 2) - d(1, 2) * d(2, 1))
        - d(0, 1) * (d(1, 0) * d(2, 2) - d(1, 2) * d(2, 0))
        + d(0, 2) * (d(1, 0) * d(2, 1) - d(1, 1) * d(2, 0))
}

/// Classify the two boundary conics: the trivial block's leading 2x2 minor
/// vanishes identically (parabola, degenerating to a double line exactly when
/// `a + 2b + c + d = 0`); the standard block's leading minor is nonzero
/// (hyperbola, or crossing lines when singular).
pub fn classify_conics(c: &QuarticCoeffs) -> (ConicClass, ConicClass) {
    let m1 = c.conic_matrix_k1();
    let m2 = c.conic_matrix_k2();
    let k1_kind = if det3(&m1).is_zero() {
        ConicKind::DoubleLine
    } else {
        ConicKind::Parabola
    };
    let k2_kind = if det3(&m2).is_zero() {
        ConicKind::CrossingLines
    } else {
        ConicKind::Hyperbola
    };
    (
        ConicClass {
            kind: k1_kind,
            matrix: m1,
        },
        ConicClass {
            kind: k2_kind,
            matrix: m2,
        },
    )
}

// Small complex arithmetic for the cubic solver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cpx {
    pub re: f64,
    pub im: f64,
}

impl Cpx {
    fn new(re: f64, im: f64) -> Self {
        Cpx { re, im }
    }
    fn add(self, o: Cpx) -> Cpx {
        Cpx::new(self.re + o.re, self.im + o.im)
    }
    fn sub(self, o: Cpx) -> Cpx {
        Cpx::new(self.re - o.re, self.im - o.im)
    }
    fn mul(self, o: Cpx) -> Cpx {
        Cpx::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
    fn div(self, o: Cpx) -> Cpx {
        let d = o.re * o.re + o.im * o.im;
        Cpx::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
    fn scale(self, s: f64) -> Cpx {
        Cpx::new(self.re * s, self.im * s)
    }
    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }
    fn sqrt(self) -> Cpx {
        let r = self.abs();
        let theta = self.im.atan2(self.re);
        Cpx::new(
            r.sqrt() * (theta / 2.0).cos(),
            r.sqrt() * (theta / 2.0).sin(),
        )
    }
    fn cbrt(self) -> Cpx {
        let r = self.abs();
        let theta = self.im.atan2(self.re);
        Cpx::new(
            r.cbrt() * (theta / 3.0).cos(),
            r.cbrt() * (theta / 3.0).sin(),
        )
    }
}

/// Roots of a real-coefficient polynomial of degree <= 3 (ascending
/// coefficients), by Cardano with a complex Newton polish.
fn poly_roots(coeffs: &[f64]) -> Vec<Cpx> {
    let mut cs: Vec<f64> = coeffs.to_vec();
    while let Some(&last) = cs.last() {
        if last.abs() < 1e-13 * cs.iter().fold(0.0f64, |m, &c| m.max(c.abs())) {
            cs.pop();
        } else {
            break;
        }
    }
    let eval = |z: Cpx| -> (Cpx, Cpx) {
        let mut v = Cpx::new(0.0, 0.0);
        let mut dv = Cpx::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            dv = dv.mul(z).add(v);
            v = v.mul(z).add(Cpx::new(c, 0.0));
        }
        (v, dv)
    };
    let mut roots: Vec<Cpx> = match cs.len() {
        0 | 1 => Vec::new(),
        2 => vec![Cpx::new(-cs[0] / cs[1], 0.0)],
        3 => {
            let (a, b, c) = (cs[2], cs[1], cs[0]);
            let disc = Cpx::new(b * b - 4.0 * a * c, 0.0).sqrt();
            vec![
                Cpx::new(-b, 0.0).add(disc).scale(1.0 / (2.0 * a)),
                Cpx::new(-b, 0.0).sub(disc).scale(1.0 / (2.0 * a)),
            ]
        }
        4 => {
            let (a3, a2, a1, a0) = (cs[3], cs[2], cs[1], cs[0]);
            let b = a2 / a3;
            let c = a1 / a3;
            let d = a0 / a3;
            let p = c - b * b / 3.0;
            let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
            let shift = -b / 3.0;
            if p.abs() < 1e-14 && q.abs() < 1e-14 {
                vec![Cpx::new(shift, 0.0); 3]
            } else {
                let inner = Cpx::new(q * q / 4.0 + p * p * p / 27.0, 0.0).sqrt();
                let mut u = Cpx::new(-q / 2.0, 0.0).add(inner);
                if u.abs() < 1e-14 {
                    u = Cpx::new(-q / 2.0, 0.0).sub(inner);
                }
                let u = u.cbrt();
                let omega = Cpx::new(-0.5, 3.0f64.sqrt() / 2.0);
                let mut out = Vec::new();
                let mut uk = u;
                for _ in 0..3 {
                    let v = Cpx::new(-p / 3.0, 0.0).div(uk);
                    out.push(uk.add(v).add(Cpx::new(shift, 0.0)));
                    uk = uk.mul(omega);
                }
                out
            }
        }
        _ => unreachable!("degree must be <= 3 after trimming"),
    };
    for z in roots.iter_mut() {
        for _ in 0..40 {
            let (v, dv) = eval(*z);
            if dv.abs() < 1e-300 || v.abs() < 1e-14 {
                break;
            }
            *z = z.sub(v.div(dv));
        }
    }
    roots
}

/// A rank-3 candidate: common zero of the two block determinants.
#[derive(Debug, Clone)]
pub struct QuarticVertex {
    pub q12: Cpx,
    pub q16: Cpx,
    pub real: bool,
    /// Both blocks PSD at the (real) point.
    pub psd: bool,
}

/// Exact univariate polynomial helpers (ascending coefficients).
fn upoly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn upoly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = a.to_vec();
    if out.len() < b.len() {
        out.resize(b.len(), Rat::zero());
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}

/// The exact elimination polynomial in `q12`: substituting the line
/// `q16 = -L0/L1` (from the difference of the two determinants) into the
/// standard-block determinant and clearing denominators. Degree four with an
/// identically vanishing leading coefficient - the shared intersection point
/// at infinity in direction `(1, -2, 0)` - so generically a cubic.
pub fn quartic_resultant(c: &QuarticCoeffs) -> Vec<Rat> {
    let (a, b, cc, d) = (&c.a, &c.b, &c.c, &c.d);
    let half = |x: Rat| x / rat(2);
    let quarter = |x: Rat| x / rat(4);
    // L = p1 - p2 = L0(q12) + L1(q12) q16.
    let l1 = vec![rat(-3) * (a.clone() + b), rat(-3)];
    let l0 = vec![
        rat(3) * half(a.clone() * d) - rat(3) * quarter(b.clone() * b),
        rat(3) * cc.clone() + rat(3) * half(d.clone()),
        rat(-6),
    ];
    // p2 = A2(q12) + B2(q12) q16 - q16^2.
    let a2 = vec![
        a.clone() * cc - half(a.clone() * d) - quarter(b.clone() * b),
        rat(-2) * a.clone() - cc.clone() + half(d.clone()),
        rat(2),
    ];
    let b2 = vec![a.clone() + b, rat(-1)];
    // R = A2 L1^2 - B2 L0 L1 - L0^2.
    let r = upoly_sub(
        &upoly_sub(&upoly_mul(&a2, &upoly_mul(&l1, &l1)), &upoly_mul(&b2, &upoly_mul(&l0, &l1))),
        &upoly_mul(&l0, &l0),
    );
    debug_assert!(r.len() == 5 && r[4].is_zero(), "quartic term must cancel");
    r
}

/// All rank-3 candidates of the block family: the (up to three) intersection
/// points of the two determinant conics, over the complex numbers, with PSD
/// flags on the real ones. Empty in the double-line degeneration.
pub fn quartic_vertices(c: &QuarticCoeffs) -> Vec<QuarticVertex> {
    let r = quartic_resultant(c);
    let rf: Vec<f64> = r.iter().take(4).map(rat_to_f64).collect();
    let (a, b, cc, d) = c.floats();
    let l1 = |z: Cpx| -> Cpx { z.scale(-3.0).add(Cpx::new(-3.0 * (a + b), 0.0)) };
    let l0 = |z: Cpx| -> Cpx {
        z.mul(z)
            .scale(-6.0)
            .add(z.scale(3.0 * cc + 1.5 * d))
            .add(Cpx::new(1.5 * a * d - 0.75 * b * b, 0.0))
    };
    let p1 = |x: f64, y: f64| c.k1(x, y).jacobi_eigh().0.iter().product::<f64>();
    let p2 = |x: f64, y: f64| c.k2(x, y).jacobi_eigh().0.iter().product::<f64>();
    let mut out = Vec::new();
    for z in poly_roots(&rf) {
        let denom = l1(z);
        let q16 = if denom.abs() > 1e-10 {
            l0(z).scale(-1.0).div(denom)
        } else {
            // Degenerate branch: fall back to the standard-block determinant.
            // det K2 = -q16^2 + (a - q12 + b) q16 + (a - q12)(c - d/2 - 2 q12) - b^2/4.
            let lin = z.scale(-1.0).add(Cpx::new(a + b, 0.0));
            let cst = Cpx::new(a, 0.0)
                .sub(z)
                .mul(Cpx::new(cc - d / 2.0, 0.0).sub(z.scale(2.0)))
                .sub(Cpx::new(b * b / 4.0, 0.0));
            let disc = lin.mul(lin).add(cst.scale(4.0)).sqrt();
            lin.add(disc).scale(0.5)
        };
        let scale = 1.0 + z.abs() + q16.abs();
        let real = z.im.abs() < 1e-7 * scale && q16.im.abs() < 1e-7 * scale;
        let (mut x, mut y) = (z.re, q16.re);
        let mut psd = false;
        if real {
            // 2D Newton polish on (det K1, det K2).
            for _ in 0..30 {
                let f1 = p1(x, y);
                let f2 = p2(x, y);
                if f1.abs() + f2.abs() < 1e-13 * (1.0 + x.abs() + y.abs()) {
                    break;
                }
                let h = 1e-7 * (1.0 + x.abs() + y.abs());
                let j11 = (p1(x + h, y) - p1(x - h, y)) / (2.0 * h);
                let j12 = (p1(x, y + h) - p1(x, y - h)) / (2.0 * h);
                let j21 = (p2(x + h, y) - p2(x - h, y)) / (2.0 * h);
                let j22 = (p2(x, y + h) - p2(x, y - h)) / (2.0 * h);
                let det = j11 * j22 - j12 * j21;
                if det.abs() < 1e-300 {
                    break;
                }
                x -= (f1 * j22 - f2 * j12) / det;
                y -= (j11 * f2 - j21 * f1) / det;
            }
            let eig_scale = c.k1(x, y).max_abs().max(c.k2(x, y).max_abs()).max(1.0);
            psd = c.k1(x, y).min_eigenvalue() >= -1e-8 * eig_scale
                && c.k2(x, y).min_eigenvalue() >= -1e-8 * eig_scale;
        }
        out.push(QuarticVertex {
            q12: if real { Cpx::new(x, 0.0) } else { z },
            q16: if real { Cpx::new(y, 0.0) } else { q16 },
            real,
            psd,
        });
    }
    out
}

/// Representative boundary and interior points of the feasible region.
#[derive(Debug, Clone, Default)]
pub struct BoundarySamples {
    /// On the trivial-block determinant only (rank 5 expected).
    pub parabola: Option<(f64, f64)>,
    /// On the standard-block determinant only (rank 4 expected).
    pub hyperbola: Option<(f64, f64)>,
    /// Midpoint of the two PSD vertices (interior; rank 6 expected).
    pub midpoint: Option<(f64, f64)>,
}

/// Scan between (and around) the PSD vertices for points lying on exactly
/// one determinant curve while the other block stays strictly definite.
pub fn quartic_boundary_samples(c: &QuarticCoeffs, vertices: &[QuarticVertex]) -> BoundarySamples {
    let psd: Vec<(f64, f64)> = vertices
        .iter()
        .filter(|v| v.real && v.psd)
        .map(|v| (v.q12.re, v.q16.re))
        .collect();
    let mut out = BoundarySamples::default();
    if psd.len() != 2 {
        return out;
    }
    let (v0, v1) = (psd[0], psd[1]);
    out.midpoint = Some(((v0.0 + v1.0) / 2.0, (v0.1 + v1.1) / 2.0));
    let (a, b, cc, d) = c.floats();
    let strict = 1e-7;
    for step in 1..40 {
        let t = step as f64 / 40.0;
        let q12 = v0.0 + t * (v1.0 - v0.0);
        let eig_scale = 1.0 + a.abs() + b.abs() + cc.abs() + d.abs();
        if out.parabola.is_none() {
            // det K1 = 0: -q16^2 - 2(b + alpha) q16 + (alpha beta - b^2) with
            // alpha = a + 2 q12, beta = c + d - 2 q12.
            let alpha = a + 2.0 * q12;
            let beta = cc + d - 2.0 * q12;
            let disc = (b + alpha) * (b + alpha) + (alpha * beta - b * b);
            if disc >= 0.0 {
                for sgn in [1.0, -1.0] {
                    let q16 = -(b + alpha) + sgn * disc.sqrt();
                    if c.k2(q12, q16).min_eigenvalue() > strict * eig_scale
                        && c.k1(q12, q16).min_eigenvalue() > -1e-9 * eig_scale
                    {
                        out.parabola = Some((q12, q16));
                        break;
                    }
                }
            }
        }
        if out.hyperbola.is_none() {
            // det K2 = 0: -q16^2 + (a - q12 + b) q16 + (a - q12)(c - d/2 - 2 q12) - b^2/4.
            let lin = a - q12 + b;
            let cst = (a - q12) * (cc - d / 2.0 - 2.0 * q12) - b * b / 4.0;
            let disc = lin * lin + 4.0 * cst;
            if disc >= 0.0 {
                for sgn in [1.0, -1.0] {
                    let q16 = (lin + sgn * disc.sqrt()) / 2.0;
                    if c.k1(q12, q16).min_eigenvalue() > strict * eig_scale
                        && c.k2(q12, q16).min_eigenvalue() > -1e-9 * eig_scale
                    {
                        out.hyperbola = Some((q12, q16));
                        break;
                    }
                }
            }
        }
        if out.parabola.is_some() && out.hyperbola.is_some() {
            break;
        }
    }
    out
}

/// Rank of the assembled 6x6 matrix at a feasible boundary point.
pub fn quartic_boundary_rank(
    c: &QuarticCoeffs,
    point: (f64, f64),
    tol: f64,
) -> Result<usize, FamiliesError> {
    let m = c.full_matrix(point.0, point.1);
    let scale = m.max_abs().max(1.0);
    let mineig = m.min_eigenvalue();
    if mineig < -tol * scale {
        return Err(FamiliesError::InfeasiblePoint(point.0, point.1, mineig));
    }
    Ok(sdp::numerical_rank(&m, 1e-7))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SosVerdict {
    Feasible,
    Infeasible,
    Indeterminate,
}

/// Full analysis of a symmetric ternary quartic: necessary linear
/// inequalities, conic classification, vertex enumeration, and the SDP
/// feasibility verdict (with an exact negativity witness when one is found).
#[derive(Debug, Clone)]
pub struct QuarticAnalysis {
    pub coeffs: QuarticCoeffs,
    /// `a >= 0`, `a + c >= 0`, `a + 2b + c + d >= 0`.
    pub necessary: [bool; 3],
    pub k1: ConicClass,
    pub k2: ConicClass,
    pub vertices: Vec<QuarticVertex>,
    pub psd_vertex_count: usize,
    pub sos: SosVerdict,
    pub witness: Option<Vec<Rat>>,
    /// Set when the trivial-block conic degenerates to a double line and the
    /// feasible slice is a ray rather than a parabola section.
    pub degenerate_ray: bool,
}

pub fn quartic_analyze(c: &QuarticCoeffs, opts: &SdpOptions) -> QuarticAnalysis {
    let necessary = [
        !c.a.is_negative(),
        !(c.a.clone() + &c.c).is_negative(),
        !(c.a.clone() + rat(2) * &c.b + &c.c + &c.d).is_negative(),
    ];
    let (k1, k2) = classify_conics(c);
    let degenerate_ray = k1.kind == ConicKind::DoubleLine;
    let vertices = if degenerate_ray {
        Vec::new()
    } else {
        quartic_vertices(c)
    };
    let psd_vertex_count = vertices.iter().filter(|v| v.real && v.psd).count();
    let sol = sdp::solve(&c.sdp_problem(), opts).expect("fixed-size problem within caps");
    let sos = match sol.status {
        SdpStatus::Feasible | SdpStatus::Optimal => SosVerdict::Feasible,
        SdpStatus::Infeasible => SosVerdict::Infeasible,
        SdpStatus::Indeterminate => SosVerdict::Indeterminate,
    };
    let witness = if sos != SosVerdict::Feasible {
        quartic_negative_point(c)
    } else {
        None
    };
    QuarticAnalysis {
        coeffs: c.clone(),
        necessary,
        k1,
        k2,
        vertices,
        psd_vertex_count,
        sos,
        witness,
        degenerate_ray,
    }
}

/// Deterministic search for an exact rational point where the quartic is
/// negative (a certificate of non-nonnegativity, hence non-SOS).
pub fn quartic_negative_point(c: &QuarticCoeffs) -> Option<Vec<Rat>> {
    let f = c.poly();
    let range: Vec<i64> = vec![0, 1, -1, 2, -2, 3, -3];
    for &x in &range {
        for &y in &range {
            for &z in &range {
                let point = vec![rat(x), rat(y), rat(z)];
                if f.eval(&point).unwrap().is_negative() {
                    return Some(point);
                }
            }
        }
    }
    None
}

// --- symmetric ternary sextics --------------------------------------------------

/// Coefficients `a1..a7` of a symmetric ternary sextic over the monomial
/// symmetric basis in reverse-lex order:
/// `(6), (5,1), (4,2), (4,1,1), (3,3), (3,2,1), (2,2,2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SexticCoeffs {
    pub a: [Rat; 7],
}

const SEXTIC_ORBITS: [&[u32]; 7] = [
    &[6],
    &[5, 1],
    &[4, 2],
    &[4, 1, 1],
    &[3, 3],
    &[3, 2, 1],
    &[2, 2, 2],
];

impl SexticCoeffs {
    pub fn new(a: [Rat; 7]) -> Self {
        SexticCoeffs { a }
    }

    pub fn poly(&self) -> SparsePoly {
        let mut f = SparsePoly::zero(3);
        for (ai, orbit) in self.a.iter().zip(SEXTIC_ORBITS.iter()) {
            let m = crate::symfunc::basis_poly(
                crate::symfunc::BasisKind::Monomial,
                &crate::symfunc::Partition::new(orbit.to_vec()),
                3,
            );
            f = &f + &m.scale(ai);
        }
        f
    }

    /// Read the seven orbit coefficients off a symmetric sextic.
    pub fn from_poly(f: &SparsePoly) -> Option<SexticCoeffs> {
        if f.homogeneous_degree() != Some(6) || f.n != 3 {
            return None;
        }
        let coeff_of = |orbit: &[u32]| -> Rat {
            let mut e = vec![0u32; 3];
            for (i, &p) in orbit.iter().enumerate() {
                e[i] = p;
            }
            f.coeff(&ExpVec(e))
        };
        let a: Vec<Rat> = SEXTIC_ORBITS.iter().map(|o| coeff_of(o)).collect();
        Some(SexticCoeffs {
            a: a.try_into().unwrap(),
        })
    }

    /// The three diagonal blocks at free parameters
    /// `(q12, q16, q18, q110, q49, q410)`.
    pub fn blocks(&self, p: &[f64; 6]) -> (Mat, Mat, Mat) {
        let a: Vec<f64> = self.a.iter().map(rat_to_f64).collect();
        let (a1, a2, a3, a4, a5, a6, a7) = (a[0], a[1], a[2], a[3], a[4], a[5], a[6]);
        let (q12, q16, q18, q110, q49, q410) = (p[0], p[1], p[2], p[3], p[4], p[5]);
        let s2 = std::f64::consts::SQRT_2;
        let s3 = 3.0f64.sqrt();
        let s6 = 6.0f64.sqrt();
        let alpha =
            a3 + a4 / 2.0 + a5 / 2.0 + a6 - q12 - 2.0 * q16 - 2.0 * q18 - q110 + q49 - 2.0 * q410;
        let beta1 = a3 + a4 / 2.0 - a5 / 4.0 - a6 / 2.0 + q12 / 2.0 - 2.0 * q16 + q18 - q110
            - q49 / 2.0
            + q410;
        let beta2 = a3 - a4 / 2.0 + a5 / 4.0 - a6 / 2.0 - q12 / 2.0 - 2.0 * q16
            + q18
            + q110
            + q49 / 2.0
            + q410;
        let trivial = Mat::from_rows(&[
            vec![a1 + 2.0 * q12, s2 * (a2 / 2.0 + q16 + q18), s3 * q110],
            vec![s2 * (a2 / 2.0 + q16 + q18), alpha, s6 * q410],
            vec![s3 * q110, s6 * q410, a7 - 6.0 * q49],
        ]);
        let standard = Mat::from_rows(&[
            vec![
                a1 - q12,
                s2 / 2.0 * (a2 - q16 - q18),
                s6 / 2.0 * (q16 - q18),
            ],
            vec![
                s2 / 2.0 * (a2 - q16 - q18),
                beta1,
                s3 / 2.0 * (a5 / 2.0 - q12 - q49),
            ],
            vec![
                s6 / 2.0 * (q16 - q18),
                s3 / 2.0 * (a5 / 2.0 - q12 - q49),
                beta2,
            ],
        ]);
        let alt = a3 - a4 / 2.0 - a5 / 2.0 + a6 + q12 - 2.0 * q16 - 2.0 * q18 + q110
            - q49
            - 2.0 * q410;
        let alternating = Mat::from_rows(&[vec![alt]]);
        (trivial, standard, alternating)
    }

    /// The two printed obstruction relations whose non-vanishing rules out
    /// rank-3 points with (a) a rank-3 trivial block, or (b) a rank-2
    /// trivial block plus the alternating block.
    pub fn rank3_obstructions(&self) -> (Rat, Rat) {
        let a = &self.a;
        let (a1, a2, a3, a4, a5, a6, a7) = (
            a[0].clone(),
            a[1].clone(),
            a[2].clone(),
            a[3].clone(),
            a[4].clone(),
            a[5].clone(),
            a[6].clone(),
        );
        let case_a = a5.clone() - rat(2) * &a1 - rat(2) * &a3 + rat(2) * &a2;
        let r = |p: i64, q: i64| crate::poly::ratio(p, q);
        let case_b = r(-10, 1) * &a1 * &a2 * &a2
            + r(-5, 4) * &a2 * &a2 * &a2
            + r(10, 1) * &a1 * &a2 * &a3
            + r(-5, 2) * &a2 * &a2 * &a3
            + r(-4, 1) * &a1 * &a3 * &a3
            + r(5, 2) * &a2 * &a2 * &a4
            + r(-3, 1) * &a2 * &a3 * &a4
            + r(3, 4) * &a2 * &a4 * &a4
            + r(-1, 2) * &a3 * &a4 * &a4
            + r(12, 1) * &a1 * &a2 * &a5
            + r(1, 4) * &a2 * &a2 * &a5
            + r(-6, 1) * &a1 * &a3 * &a5
            + r(3, 1) * &a2 * &a3 * &a5
            + r(-2, 1) * &a2 * &a4 * &a5
            + r(1, 1) * &a3 * &a4 * &a5
            + r(-1, 4) * &a4 * &a4 * &a5
            + r(-3, 1) * &a1 * &a5 * &a5
            + r(5, 4) * &a2 * &a5 * &a5
            + r(-1, 2) * &a3 * &a5 * &a5
            + r(1, 2) * &a4 * &a5 * &a5
            + r(-1, 4) * &a5 * &a5 * &a5
            + r(-2, 1) * &a1 * &a2 * &a6
            + r(1, 1) * &a2 * &a2 * &a6
            + r(4, 1) * &a1 * &a3 * &a6
            + r(1, 1) * &a2 * &a4 * &a6
            + r(-1, 1) * &a2 * &a5 * &a6
            + r(-1, 1) * &a1 * &a6 * &a6
            + r(-3, 1) * &a1 * &a2 * &a7
            + r(-1, 1) * &a2 * &a2 * &a7
            + r(2, 1) * &a1 * &a3 * &a7
            + r(1, 1) * &a1 * &a5 * &a7;
        (case_a, case_b)
    }
}
