//! End-to-end sum-of-squares certification: build the block family, run the
//! SDP, factor the blocks into squares grouped by isotypic component, verify
//! the reconstruction, and (de)serialize certificates as versioned JSON.

use crate::gramspec::{build_spectrahedron, BlockSpectrahedron, GramSpecError};
use crate::linalg::Mat;
use crate::poly::{ExpVec, FloatPoly, SparsePoly};
use crate::repsn::{GroupRep, RepsnError};
use crate::sdp::{self, SdpOptions, SdpProblem, SdpStatus};
use crate::symadapt::{symmetry_adapted_basis, BlockLayout, LayoutEntry, SymAdaptError};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("polynomial must be homogeneous of even degree (got {0})")]
    OddDegree(u32),
    #[error(transparent)]
    GramSpec(#[from] GramSpecError),
    #[error(transparent)]
    SymAdapt(#[from] SymAdaptError),
    #[error(transparent)]
    Repsn(#[from] RepsnError),
    #[error(transparent)]
    Sdp(#[from] sdp::SdpError),
    #[error("only symmetric groups are supported for certification, got {0}")]
    UnsupportedGroup(String),
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

/// Group descriptor for certification targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupId {
    Symmetric(usize),
}

impl GroupId {
    pub fn parse(s: &str) -> Option<GroupId> {
        let rest = s.strip_prefix('s').or_else(|| s.strip_prefix('S'))?;
        rest.parse::<usize>().ok().map(GroupId::Symmetric)
    }

    pub fn name(&self) -> String {
        match self {
            GroupId::Symmetric(n) => format!("s{n}"),
        }
    }
}

#[derive(Debug, Clone)]
pub enum Objective {
    /// Pure feasibility.
    None,
    /// Minimize the trace of the full Gram matrix (the default; tends to
    /// land on low-rank points).
    MinTrace,
    /// Minimize `sum_i <C_i, Q_i>` for given per-block cost matrices.
    Blocks(Vec<Mat>),
}

#[derive(Debug, Clone)]
pub struct SquareEntry {
    pub label: String,
    pub copy: usize,
    pub poly: FloatPoly,
}

/// A verifiable SOS certificate: the change of basis, the per-block PSD
/// matrices, and the extracted squares grouped by isotypic component.
#[derive(Debug, Clone)]
pub struct SosCertificate {
    pub f: SparsePoly,
    pub group: String,
    pub n: usize,
    pub degree: u32,
    pub t: Mat,
    pub layout: BlockLayout,
    pub basis: Vec<ExpVec>,
    pub blocks: Vec<Mat>,
    pub block_ranks: Vec<usize>,
    pub squares: Vec<SquareEntry>,
    pub residual: f64,
}

impl SosCertificate {
    /// Per-isotypic partial sums of squares.
    pub fn partial_sums(&self) -> Vec<(String, FloatPoly)> {
        let mut out: Vec<(String, FloatPoly)> = Vec::new();
        for e in &self.layout.entries {
            let mut sum = FloatPoly::zero(self.n);
            for sq in self.squares.iter().filter(|s| s.label == e.label) {
                sum = sum.add(&sq.poly.square());
            }
            out.push((e.label.clone(), sum));
        }
        out
    }

    /// `(total rank, per-block ranks)` where the total counts each block
    /// rank once per repeated copy.
    pub fn rank_profile(&self) -> (usize, Vec<usize>) {
        let total = self
            .layout
            .entries
            .iter()
            .zip(&self.block_ranks)
            .map(|(e, &r)| e.dim * r)
            .sum();
        (total, self.block_ranks.clone())
    }
}

#[derive(Debug, Clone)]
pub enum CertifyOutcome {
    Certificate(Box<SosCertificate>),
    Infeasible,
    Indeterminate,
}

#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    pub sdp: SdpOptions,
    /// Verification tolerance on the reconstruction residual.
    pub residual_tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            sdp: SdpOptions::default(),
            residual_tol: 1e-7,
        }
    }
}

fn resolve_objective(problem: &SdpProblem, objective: &Objective) -> Option<Vec<f64>> {
    match objective {
        Objective::None => None,
        Objective::MinTrace => Some(problem.trace_objective()),
        Objective::Blocks(costs) => Some(problem.block_objective(costs)),
    }
}

/// Build the spectrahedron for `f` under the given symmetric group.
pub fn prepare(
    f: &SparsePoly,
    group: &GroupId,
) -> Result<(GroupRep, BlockSpectrahedron), CertifyError> {
    let GroupId::Symmetric(n) = group;
    if *n != f.n {
        return Err(CertifyError::UnsupportedGroup(format!(
            "group s{n} does not act on {} variables",
            f.n
        )));
    }
    let deg = f
        .homogeneous_degree()
        .ok_or(GramSpecError::NotHomogeneous)?;
    if deg % 2 != 0 {
        return Err(CertifyError::OddDegree(deg));
    }
    let d = if f.is_zero() { 1 } else { deg / 2 };
    let rep = GroupRep::symmetric_group(*n, d)?;
    let sab = symmetry_adapted_basis(&rep)?;
    let spec = build_spectrahedron(f, &rep, &sab)?;
    Ok((rep, spec))
}

/// Decide SOS membership of an invariant form and extract a certificate on
/// success. `Infeasible` and `Indeterminate` mirror the SDP verdict.
pub fn certify(
    f: &SparsePoly,
    group: &GroupId,
    objective: &Objective,
    opts: &CertifyOptions,
) -> Result<CertifyOutcome, CertifyError> {
    let (rep, spec) = prepare(f, group)?;
    certify_on(f, &rep, &spec, objective, opts)
}

/// Certification entry point for an already-built spectrahedron.
pub fn certify_on(
    f: &SparsePoly,
    rep: &GroupRep,
    spec: &BlockSpectrahedron,
    objective: &Objective,
    opts: &CertifyOptions,
) -> Result<CertifyOutcome, CertifyError> {
    let mut problem = SdpProblem {
        blocks: spec.blocks.clone(),
        num_params: spec.num_params(),
        objective: None,
    };
    problem.objective = resolve_objective(&problem, objective);
    let sol = sdp::solve(&problem, &opts.sdp)?;
    match sol.status {
        SdpStatus::Infeasible => return Ok(CertifyOutcome::Infeasible),
        SdpStatus::Indeterminate => return Ok(CertifyOutcome::Indeterminate),
        SdpStatus::Feasible | SdpStatus::Optimal => {}
    }
    let cert = extract_certificate(f, rep, spec, &sol.params, opts)?;
    Ok(CertifyOutcome::Certificate(Box::new(cert)))
}

/// Build the certificate at a concrete feasible parameter point.
pub fn extract_certificate(
    f: &SparsePoly,
    rep: &GroupRep,
    spec: &BlockSpectrahedron,
    params: &[f64],
    opts: &CertifyOptions,
) -> Result<SosCertificate, CertifyError> {
    let sab_polys: Vec<FloatPoly> = (0..spec.t.rows)
        .map(|c| {
            let mut p = FloatPoly::zero(rep.n);
            for (row, e) in spec.basis.iter().enumerate() {
                p.add_term(e.clone(), spec.t[(row, c)]);
            }
            p
        })
        .collect();
    let blocks = spec.eval_blocks(params);
    // Rank cutoff scaled by the largest block so zero blocks stay rank zero.
    let scale = blocks.iter().map(|b| b.max_abs()).fold(0.0, f64::max);
    let cutoff = opts.sdp.rank_tol * scale.max(1e-12);
    let mut block_ranks = Vec::new();
    let mut squares = Vec::new();
    for (e, q) in spec.layout.entries.iter().zip(&blocks) {
        let ws = sdp::psd_factor_abs(q, cutoff, 10.0 * opts.sdp.feas_tol)?;
        block_ranks.push(ws.len());
        for copy in 0..e.dim {
            for w in &ws {
                let mut poly = FloatPoly::zero(rep.n);
                for (j, &wj) in w.iter().enumerate() {
                    let col = e.offset + copy * e.mult + j;
                    poly = poly.add(&sab_polys[col].scale(wj));
                }
                squares.push(SquareEntry {
                    label: e.label.clone(),
                    copy,
                    poly,
                });
            }
        }
    }
    let mut total = FloatPoly::zero(rep.n);
    for sq in &squares {
        total = total.add(&sq.poly.square());
    }
    let residual = total.max_diff_exact(f);
    Ok(SosCertificate {
        f: f.clone(),
        group: rep.name.clone(),
        n: rep.n,
        degree: spec.degree,
        t: spec.t.clone(),
        layout: spec.layout.clone(),
        basis: spec.basis.clone(),
        blocks,
        block_ranks,
        squares,
        residual,
    })
}

/// Certify and additionally search for a low-rank point: the trace objective
/// first, then seeded random block objectives, keeping the best total rank.
pub fn certify_min_rank(
    f: &SparsePoly,
    group: &GroupId,
    attempts: usize,
    seed: u64,
    opts: &CertifyOptions,
) -> Result<CertifyOutcome, CertifyError> {
    let (rep, spec) = prepare(f, group)?;
    let mut best: Option<Box<SosCertificate>> = None;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..=attempts {
        let objective = if attempt == 0 {
            Objective::MinTrace
        } else {
            let costs: Vec<Mat> = spec
                .layout
                .entries
                .iter()
                .map(|e| {
                    let mut c = Mat::zeros(e.mult, e.mult);
                    for i in 0..e.mult {
                        for j in 0..e.mult {
                            c[(i, j)] = rng.gen_range(-1.0..1.0);
                        }
                    }
                    c.symmetrized()
                })
                .collect();
            Objective::Blocks(costs)
        };
        match certify_on(f, &rep, &spec, &objective, opts)? {
            CertifyOutcome::Certificate(cert) => {
                let better = match &best {
                    None => true,
                    Some(b) => cert.rank_profile().0 < b.rank_profile().0,
                };
                if better {
                    best = Some(cert);
                }
            }
            CertifyOutcome::Infeasible => return Ok(CertifyOutcome::Infeasible),
            CertifyOutcome::Indeterminate => {
                if best.is_none() && attempt == attempts {
                    return Ok(CertifyOutcome::Indeterminate);
                }
            }
        }
    }
    match best {
        Some(cert) => Ok(CertifyOutcome::Certificate(cert)),
        None => Ok(CertifyOutcome::Indeterminate),
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    /// Max coefficient error of `f - sum of squares`.
    pub residual: f64,
    /// Worst per-generator coefficient change over all isotypic partial sums.
    pub invariance_defect: f64,
    /// Worst negative block eigenvalue (0 when all PSD).
    pub psd_defect: f64,
}

/// Independent re-expansion of a certificate: squares, partial sums, and
/// their invariance under the group generators.
pub fn verify(f: &SparsePoly, cert: &SosCertificate) -> Result<VerifyReport, CertifyError> {
    if cert.n != f.n {
        return Err(CertifyError::Malformed(
            "certificate variable count differs from polynomial".into(),
        ));
    }
    for sq in &cert.squares {
        if sq.poly.n != f.n {
            return Err(CertifyError::Malformed("square in wrong ring".into()));
        }
    }
    let mut total = FloatPoly::zero(f.n);
    for sq in &cert.squares {
        total = total.add(&sq.poly.square());
    }
    let residual = total.max_diff_exact(f);
    let gens: Vec<Vec<usize>> = match cert.group.strip_prefix('s') {
        Some(k) => {
            let k: usize = k
                .parse()
                .map_err(|_| CertifyError::Malformed("bad group name".into()))?;
            GroupRep::symmetric_group(k, 1)?
                .generator_perms()
                .into_iter()
                .map(|p| p.0)
                .collect()
        }
        None => Vec::new(),
    };
    let mut invariance_defect = 0.0f64;
    for (_, psum) in cert.partial_sums() {
        for g in &gens {
            invariance_defect = invariance_defect.max(psum.permute_vars(g).max_coeff_diff(&psum));
        }
    }
    let mut psd_defect = 0.0f64;
    for b in &cert.blocks {
        psd_defect = psd_defect.max((-b.min_eigenvalue()).max(0.0));
    }
    Ok(VerifyReport {
        residual,
        invariance_defect,
        psd_defect,
    })
}

// --- JSON schema (versioned) -------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
struct LayoutJson {
    label: String,
    mult: usize,
    dim: usize,
    offset: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct BlockJson {
    label: String,
    #[serde(rename = "Q")]
    q: Vec<Vec<f64>>,
    rank: usize,
}

#[derive(Debug, Serialize, Deserialize)]
struct SquareJson {
    label: String,
    copy: usize,
    poly: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    schema: u32,
    n: usize,
    degree: u32,
    group: String,
    f: String,
    basis: Vec<String>,
    #[serde(rename = "T")]
    t: Vec<Vec<f64>>,
    layout: Vec<LayoutJson>,
    blocks: Vec<BlockJson>,
    squares: Vec<SquareJson>,
    residual: f64,
}

fn render_exps(e: &ExpVec) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (i, &k) in e.0.iter().enumerate() {
        if k == 1 {
            parts.push(format!("x{}", i + 1));
        } else if k > 1 {
            parts.push(format!("x{}^{}", i + 1, k));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// Render a float polynomial for the certificate JSON (full precision).
pub fn render_float_poly(p: &FloatPoly) -> String {
    if p.terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (e, c)) in p.terms.iter().rev().enumerate() {
        if idx == 0 {
            if *c < 0.0 {
                out.push('-');
            }
        } else if *c < 0.0 {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        out.push_str(&format!("{:e}", c.abs()));
        if e.degree() > 0 {
            out.push('*');
            out.push_str(&render_exps(e));
        }
    }
    out
}

/// Parse the float polynomial format produced by [`render_float_poly`].
pub fn parse_float_poly(text: &str, n: usize) -> Result<FloatPoly, CertifyError> {
    let mut out = FloatPoly::zero(n);
    let text = text.trim();
    if text == "0" {
        return Ok(out);
    }
    // Split into signed terms at top level.
    let mut terms: Vec<(f64, String)> = Vec::new();
    let mut sign = 1.0;
    let mut cur = String::new();
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '+' | '-' if cur.trim().is_empty() && terms.is_empty() => {
                if c == '-' {
                    sign = -sign;
                }
            }
            '+' | '-' => {
                // Binary operator only when preceded by space (renderer always
                // spaces them); exponent signs like `1e-3` are glued.
                let prev_space = cur.ends_with(' ');
                if prev_space {
                    terms.push((sign, cur.trim().to_string()));
                    cur = String::new();
                    sign = if c == '-' { -1.0 } else { 1.0 };
                } else {
                    cur.push(c);
                }
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        terms.push((sign, cur.trim().to_string()));
    }
    for (sgn, term) in terms {
        let mut coeff = sgn;
        let mut exps = vec![0u32; n];
        for factor in term.split('*') {
            let f = factor.trim();
            if f.is_empty() {
                continue;
            }
            if let Some(rest) = f.strip_prefix('x') {
                let (idx_s, exp_s) = match rest.split_once('^') {
                    Some((a, b)) => (a, Some(b)),
                    None => (rest, None),
                };
                let idx: usize = idx_s
                    .parse()
                    .map_err(|_| CertifyError::Malformed(format!("bad variable {f}")))?;
                if idx == 0 || idx > n {
                    return Err(CertifyError::Malformed(format!("variable out of range {f}")));
                }
                let e: u32 = match exp_s {
                    Some(s) => s
                        .parse()
                        .map_err(|_| CertifyError::Malformed(format!("bad exponent {f}")))?,
                    None => 1,
                };
                exps[idx - 1] += e;
            } else {
                let v: f64 = f
                    .parse()
                    .map_err(|_| CertifyError::Malformed(format!("bad coefficient {f}")))?;
                coeff *= v;
            }
        }
        out.add_term(ExpVec(exps), coeff);
    }
    Ok(out)
}

pub fn certificate_to_json(cert: &SosCertificate) -> CertificateJson {
    CertificateJson {
        schema: 1,
        n: cert.n,
        degree: cert.degree,
        group: cert.group.clone(),
        f: cert.f.render(),
        basis: cert.basis.iter().map(render_exps).collect(),
        t: cert.t.to_rows(),
        layout: cert
            .layout
            .entries
            .iter()
            .map(|e| LayoutJson {
                label: e.label.clone(),
                mult: e.mult,
                dim: e.dim,
                offset: e.offset,
            })
            .collect(),
        blocks: cert
            .layout
            .entries
            .iter()
            .zip(&cert.blocks)
            .zip(&cert.block_ranks)
            .map(|((e, q), &rank)| BlockJson {
                label: e.label.clone(),
                q: q.to_rows(),
                rank,
            })
            .collect(),
        squares: cert
            .squares
            .iter()
            .map(|s| SquareJson {
                label: s.label.clone(),
                copy: s.copy,
                poly: render_float_poly(&s.poly),
            })
            .collect(),
        residual: cert.residual,
    }
}

pub fn certificate_from_json(json: &CertificateJson) -> Result<SosCertificate, CertifyError> {
    if json.schema != 1 {
        return Err(CertifyError::Malformed(format!(
            "unsupported schema {}",
            json.schema
        )));
    }
    let f = crate::poly::parse_poly(&json.f, json.n)
        .map_err(|e| CertifyError::Malformed(e.to_string()))?;
    let basis: Result<Vec<ExpVec>, CertifyError> = json
        .basis
        .iter()
        .map(|s| {
            parse_float_poly(s, json.n).and_then(|p| {
                p.terms
                    .keys()
                    .next()
                    .cloned()
                    .ok_or_else(|| CertifyError::Malformed("empty basis monomial".into()))
            })
        })
        .collect();
    let layout = BlockLayout {
        entries: json
            .layout
            .iter()
            .map(|e| LayoutEntry {
                label: e.label.clone(),
                mult: e.mult,
                dim: e.dim,
                offset: e.offset,
            })
            .collect(),
    };
    let squares: Result<Vec<SquareEntry>, CertifyError> = json
        .squares
        .iter()
        .map(|s| {
            parse_float_poly(&s.poly, json.n).map(|poly| SquareEntry {
                label: s.label.clone(),
                copy: s.copy,
                poly,
            })
        })
        .collect();
    Ok(SosCertificate {
        f,
        group: json.group.clone(),
        n: json.n,
        degree: json.degree,
        t: Mat::from_rows(&json.t),
        layout,
        basis: basis?,
        blocks: json.blocks.iter().map(|b| Mat::from_rows(&b.q)).collect(),
        block_ranks: json.blocks.iter().map(|b| b.rank).collect(),
        squares: squares?,
        residual: json.residual,
    })
}
