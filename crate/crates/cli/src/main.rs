//! Deterministic, file-based command line for the SOS toolkit.
//!
//! Exit codes: 0 on success/feasible/certified, 1 on infeasible/refuted,
//! 2 on indeterminate/unknown, 64 on usage errors.

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;
use symsos::certify::{
    self, certificate_from_json, certificate_to_json, CertifyOptions, CertifyOutcome, GroupId,
    Objective,
};
use symsos::families::{
    quadratic_analyze, quadratic_sos_ratio, quartic_analyze, QuarticCoeffs, SexticCoeffs,
    SosVerdict,
};
use symsos::hposet::{self, SosStatus};
use symsos::poly::{render_rat, Rat, SparsePoly};
use symsos::repsn::multiplicity;
use symsos::sdp::SdpOptions;
use symsos::survey::rank_survey;
use symsos::symfunc::{basis_poly, partitions_of, term_normalize, BasisKind, Dominance, Partition};

#[derive(Parser)]
#[command(name = "symsos", version, about = "Symmetry-adapted SOS certification toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Feasibility tolerance for the SDP verdicts.
    #[arg(long, global = true, default_value_t = 1e-8)]
    feas_tol: f64,
    /// Relative eigenvalue cutoff for numerical ranks.
    #[arg(long, global = true, default_value_t = 1e-7)]
    rank_tol: f64,
    /// Newton iteration budget for the SDP solver.
    #[arg(long, global = true, default_value_t = 4000)]
    max_iters: usize,
    /// Cap on the number of free parameters accepted by the solver.
    #[arg(long, global = true, default_value_t = 512)]
    param_cap: usize,
    /// Master seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct PolyInput {
    /// Path to a polynomial in the text format, e.g. `1/2*x1^2 - x1*x2`.
    #[arg(long, conflicts_with = "expr")]
    poly: Option<PathBuf>,
    /// Inline polynomial text (alternative to --poly).
    #[arg(long)]
    expr: Option<String>,
}

impl PolyInput {
    fn read(&self, n: usize) -> Result<SparsePoly, String> {
        let text = match (&self.poly, &self.expr) {
            (Some(path), None) => std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?,
            (None, Some(text)) => text.clone(),
            _ => return Err("exactly one of --poly or --expr is required".into()),
        };
        symsos::parse_poly(text.trim(), n).map_err(|e| e.to_string())
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Isotypic multiplicities of all irreducibles of S_n in degree d.
    Multiplicity {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        json: bool,
    },
    /// Print a classical symmetric basis polynomial.
    Basis {
        /// One of m, e, p, h, s.
        #[arg(long)]
        kind: char,
        /// Partition, e.g. `2,1`.
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        n: usize,
        /// Divide by the value at the all-ones point.
        #[arg(long)]
        normalize: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide SOS membership and emit a certificate.
    Certify {
        #[command(flatten)]
        input: PolyInput,
        /// Group, e.g. `s3`.
        #[arg(long)]
        group: String,
        /// Objective: `trace`, `none`, or `minrank:<attempts>`.
        #[arg(long, default_value = "trace")]
        objective: String,
        /// Write the certificate JSON here (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate against a polynomial.
    Verify {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        cert: PathBuf,
        /// Acceptance threshold on the residual and invariance defect.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
    },
    /// Analyze a symmetric ternary quartic `a,b,c,d`.
    Quartic {
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        json: bool,
    },
    /// Analyze the symmetric quadratic family at Gram entries (a, b).
    Quadratic {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Symmetric ternary sextic: blocks at given parameters and the rank-3
    /// obstruction residuals.
    Sextic {
        /// Seven coefficients `a1,...,a7` over the monomial symmetric basis.
        #[arg(long)]
        coeffs: String,
        /// Free parameters `q12,q16,q18,q110,q49,q410` (default zeros).
        #[arg(long)]
        params: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Certify or refute `H_mu >= H_lambda` on the nonnegative orthant.
    Hpair {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Build the full poset of certified term-normalized inequalities.
    Hposet {
        #[arg(long)]
        weight: u32,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Write the DOT digraph here.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the verdicts as JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Export only the transitive reduction in the DOT output.
        #[arg(long)]
        reduce: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Cap on the number of ordered pairs examined (0 = all).
        #[arg(long, default_value_t = 0)]
        max_pairs: usize,
        /// Refuse degrees above this cap (the SOS degree is 2 * weight).
        #[arg(long, default_value_t = 20)]
        degree_cap: u32,
    },
    /// Rank-distribution survey over random objectives.
    Survey {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        group: String,
        #[arg(long)]
        samples: usize,
        /// Write `rank,count` CSV here (stdout if omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let r = match body.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| format!("bad rational {s}"))?;
            let q: i64 = q.trim().parse().map_err(|_| format!("bad rational {s}"))?;
            if q == 0 {
                return Err(format!("zero denominator in {s}"));
            }
            symsos::poly::ratio(p, q)
        }
        None => {
            let p: i64 = body.trim().parse().map_err(|_| format!("bad integer {s}"))?;
            symsos::poly::rat(p)
        }
    };
    Ok(if neg { -r } else { r })
}

fn parse_rat_list(s: &str, expect: usize) -> Result<Vec<Rat>, String> {
    let vals: Result<Vec<Rat>, String> = s.split(',').map(parse_rat).collect();
    let vals = vals?;
    if vals.len() != expect {
        return Err(format!("expected {expect} comma-separated values, got {}", vals.len()));
    }
    Ok(vals)
}

fn sdp_options(cli: &Cli) -> SdpOptions {
    SdpOptions {
        feas_tol: cli.feas_tol,
        rank_tol: cli.rank_tol,
        max_iters: cli.max_iters,
        param_cap: cli.param_cap,
        ..SdpOptions::default()
    }
}

fn certify_options(cli: &Cli) -> CertifyOptions {
    CertifyOptions {
        sdp: sdp_options(cli),
        residual_tol: 1e-7,
    }
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<(), String> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => {
            println!("{content}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.cmd {
        Cmd::Multiplicity { n, d, json } => {
            let rows: Vec<(Partition, u64)> = partitions_of(*n, None)
                .into_iter()
                .map(|lam| {
                    let m = multiplicity(&lam, *d);
                    (lam, m)
                })
                .collect();
            if *json {
                let arr: Vec<_> = rows
                    .iter()
                    .map(|(lam, m)| json!({"lambda": lam.to_string(), "multiplicity": m}))
                    .collect();
                println!("{}", serde_json::to_string_pretty(&json!(arr)).unwrap());
            } else {
                println!("lambda\tmultiplicity");
                for (lam, m) in rows {
                    println!("{lam}\t{m}");
                }
            }
            Ok(0)
        }
        Cmd::Basis {
            kind,
            lambda,
            n,
            normalize,
            json,
        } => {
            let kind = BasisKind::from_char(*kind)
                .ok_or_else(|| format!("unknown basis kind {kind}, expected one of m,e,p,h,s"))?;
            let lam = Partition::parse(lambda).map_err(|e| e.to_string())?;
            let mut p = basis_poly(kind, &lam, *n);
            if *normalize {
                p = term_normalize(&p).map_err(|e| e.to_string())?;
            }
            if *json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "lambda": lam.to_string(),
                        "n": n,
                        "poly": p.render(),
                    }))
                    .unwrap()
                );
            } else {
                println!("{}", p.render());
            }
            Ok(0)
        }
        Cmd::Certify {
            input,
            group,
            objective,
            out,
        } => {
            let gid = GroupId::parse(group).ok_or_else(|| format!("bad group {group}"))?;
            let GroupId::Symmetric(nvars) = gid;
            let f = input.read(nvars)?;
            let opts = certify_options(cli);
            let outcome = if let Some(rest) = objective.strip_prefix("minrank") {
                let attempts: usize = rest
                    .strip_prefix(':')
                    .map(|s| s.parse().map_err(|_| format!("bad attempts in {objective}")))
                    .transpose()?
                    .unwrap_or(8);
                certify::certify_min_rank(&f, &gid, attempts, cli.seed, &opts)
            } else {
                let obj = match objective.as_str() {
                    "trace" => Objective::MinTrace,
                    "none" => Objective::None,
                    other => return Err(format!("unknown objective {other}")),
                };
                certify::certify(&f, &gid, &obj, &opts)
            }
            .map_err(|e| e.to_string())?;
            match outcome {
                CertifyOutcome::Certificate(cert) => {
                    let json = certificate_to_json(&cert);
                    let text = serde_json::to_string_pretty(&json).unwrap();
                    write_or_print(out, &text)?;
                    let (total, ranks) = cert.rank_profile();
                    eprintln!(
                        "feasible: total rank {total}, block ranks {ranks:?}, residual {:.3e}",
                        cert.residual
                    );
                    Ok(0)
                }
                CertifyOutcome::Infeasible => {
                    eprintln!("infeasible: not a sum of squares");
                    Ok(1)
                }
                CertifyOutcome::Indeterminate => {
                    eprintln!("indeterminate: SDP margins too tight");
                    Ok(2)
                }
            }
        }
        Cmd::Verify { input, cert, tol } => {
            let text = std::fs::read_to_string(cert)
                .map_err(|e| format!("cannot read {}: {e}", cert.display()))?;
            let parsed: certify::CertificateJson =
                serde_json::from_str(&text).map_err(|e| e.to_string())?;
            let cert = certificate_from_json(&parsed).map_err(|e| e.to_string())?;
            let f = input.read(cert.n)?;
            let report = certify::verify(&f, &cert).map_err(|e| e.to_string())?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "residual": report.residual,
                    "invariance_defect": report.invariance_defect,
                    "psd_defect": report.psd_defect,
                }))
                .unwrap()
            );
            if report.residual <= *tol && report.invariance_defect <= *tol {
                Ok(0)
            } else {
                Ok(1)
            }
        }
        Cmd::Quartic { coeffs, json } => {
            let v = parse_rat_list(coeffs, 4)?;
            let q = QuarticCoeffs::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone());
            let an = quartic_analyze(&q, &sdp_options(cli));
            let verdict = match an.sos {
                SosVerdict::Feasible => "sos",
                SosVerdict::Infeasible => "not-sos",
                SosVerdict::Indeterminate => "indeterminate",
            };
            let vertices: Vec<_> = an
                .vertices
                .iter()
                .map(|v| {
                    json!({
                        "q12": [v.q12.re, v.q12.im],
                        "q16": [v.q16.re, v.q16.im],
                        "real": v.real,
                        "psd": v.psd,
                    })
                })
                .collect();
            let body = json!({
                "coeffs": {
                    "a": render_rat(&q.a), "b": render_rat(&q.b),
                    "c": render_rat(&q.c), "d": render_rat(&q.d),
                },
                "necessary_inequalities": {
                    "a": an.necessary[0],
                    "a_plus_c": an.necessary[1],
                    "a_plus_2b_plus_c_plus_d": an.necessary[2],
                },
                "conics": {
                    "trivial": format!("{:?}", an.k1.kind),
                    "standard": format!("{:?}", an.k2.kind),
                },
                "vertices": vertices,
                "psd_vertex_count": an.psd_vertex_count,
                "verdict": verdict,
                "witness": an.witness.as_ref().map(|w| {
                    w.iter().map(render_rat).collect::<Vec<_>>()
                }),
                "degenerate_ray": an.degenerate_ray,
            });
            if *json {
                println!("{}", serde_json::to_string_pretty(&body).unwrap());
            } else {
                println!("verdict: {verdict}");
                println!(
                    "necessary inequalities: a>=0 {}, a+c>=0 {}, a+2b+c+d>=0 {}",
                    an.necessary[0], an.necessary[1], an.necessary[2]
                );
                println!("PSD rank-3 vertices: {}", an.psd_vertex_count);
                if let Some(w) = &an.witness {
                    let ws: Vec<String> = w.iter().map(render_rat).collect();
                    println!("negative at ({})", ws.join(", "));
                }
            }
            match an.sos {
                SosVerdict::Feasible => Ok(0),
                SosVerdict::Infeasible => Ok(1),
                SosVerdict::Indeterminate => Ok(2),
            }
        }
        Cmd::Quadratic { a, b, n, json } => {
            let a = parse_rat(a)?;
            let b = parse_rat(b)?;
            let an = quadratic_analyze(&a, &b, *n);
            if *json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "a": render_rat(&a), "b": render_rat(&b), "n": n,
                        "sos": an.sos,
                        "rank": an.rank,
                        "boundary_upper": an.boundary_upper,
                        "boundary_lower": an.boundary_lower,
                        "sos_ratio": quadratic_sos_ratio(*n),
                    }))
                    .unwrap()
                );
            } else {
                println!(
                    "sos: {}, rank: {:?}, ratio of SOS directions: {:.6}",
                    an.sos,
                    an.rank,
                    quadratic_sos_ratio(*n)
                );
            }
            Ok(if an.sos { 0 } else { 1 })
        }
        Cmd::Sextic {
            coeffs,
            params,
            json,
        } => {
            let v = parse_rat_list(coeffs, 7)?;
            let c = SexticCoeffs::new(v.try_into().unwrap());
            let p: [f64; 6] = match params {
                Some(s) => {
                    let vals = parse_rat_list(s, 6)?;
                    let mut out = [0.0; 6];
                    for (o, v) in out.iter_mut().zip(&vals) {
                        *o = symsos::poly::rat_to_f64(v);
                    }
                    out
                }
                None => [0.0; 6],
            };
            let (t, s, a) = c.blocks(&p);
            let (ca, cb) = c.rank3_obstructions();
            if *json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "poly": c.poly().render(),
                        "blocks": {
                            "trivial": t.to_rows(),
                            "standard": s.to_rows(),
                            "alternating": a.to_rows(),
                        },
                        "rank3_obstructions": {
                            "case_a": render_rat(&ca),
                            "case_b": render_rat(&cb),
                        },
                    }))
                    .unwrap()
                );
            } else {
                println!("f = {}", c.poly().render());
                println!("trivial block:     {:?}", t.to_rows());
                println!("standard block:    {:?}", s.to_rows());
                println!("alternating block: {:?}", a.to_rows());
                println!(
                    "rank-3 obstruction residuals: case (a) {}, case (b) {}",
                    render_rat(&ca),
                    render_rat(&cb)
                );
            }
            Ok(0)
        }
        Cmd::Hpair { lambda, mu, n, json } => {
            let lam = Partition::parse(lambda).map_err(|e| e.to_string())?;
            let mu = Partition::parse(mu).map_err(|e| e.to_string())?;
            let v = hposet::certify_h_pair(&lam, &mu, *n, &certify_options(cli))
                .map_err(|e| e.to_string())?;
            let status = match v.status {
                SosStatus::Certified => "certified",
                SosStatus::RefutedByPoint => "refuted-by-point",
                SosStatus::Unknown => "unknown",
            };
            let dom = match v.dominance {
                Dominance::Less => "less",
                Dominance::Greater => "greater",
                Dominance::Equal => "equal",
                Dominance::Incomparable => "incomparable",
            };
            if *json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "lambda": lam.to_string(),
                        "mu": mu.to_string(),
                        "n": v.n_used,
                        "status": status,
                        "dominance": dom,
                        "residual": v.certificate.as_ref().map(|c| c.residual),
                        "refutation": v.refutation.as_ref().map(|p| {
                            p.iter().map(render_rat).collect::<Vec<_>>()
                        }),
                    }))
                    .unwrap()
                );
            } else {
                println!("H_{mu} >= H_{lam} on the orthant (n = {}): {status} (dominance: {dom})", v.n_used);
                if let Some(c) = &v.certificate {
                    println!("certificate residual {:.3e}, {} squares", c.residual, c.squares.len());
                }
                if let Some(p) = &v.refutation {
                    let ps: Vec<String> = p.iter().map(render_rat).collect();
                    println!("counterexample point ({})", ps.join(", "));
                }
            }
            Ok(match v.status {
                SosStatus::Certified => 0,
                SosStatus::RefutedByPoint => 1,
                SosStatus::Unknown => 2,
            })
        }
        Cmd::Hposet {
            weight,
            n,
            dot,
            json,
            reduce,
            jobs,
            max_pairs,
            degree_cap,
        } => {
            if 2 * weight > *degree_cap {
                return Err(format!(
                    "SOS degree {} exceeds --degree-cap {degree_cap}",
                    2 * weight
                ));
            }
            let report = hposet::build_poset(*weight, *n, &certify_options(cli), *jobs, *max_pairs)
                .map_err(|e| e.to_string())?;
            let certified = report
                .verdicts
                .iter()
                .filter(|v| v.status == SosStatus::Certified)
                .count();
            let refuted = report
                .verdicts
                .iter()
                .filter(|v| v.status == SosStatus::RefutedByPoint)
                .count();
            let unknown = report.verdicts.len() - certified - refuted;
            eprintln!(
                "weight {weight}, n {n}: {} pairs, {certified} certified, {refuted} refuted, {unknown} unknown",
                report.verdicts.len()
            );
            if let Some(path) = dot {
                let text = if *reduce {
                    let keep: Vec<_> = report
                        .verdicts
                        .iter()
                        .filter(|v| {
                            report
                                .reduced
                                .iter()
                                .any(|(a, b)| *a == v.lambda && *b == v.mu)
                        })
                        .cloned()
                        .collect();
                    hposet::export_dot(&keep)
                } else {
                    hposet::export_dot(&report.verdicts)
                };
                std::fs::write(path, text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            if let Some(path) = json {
                let arr: Vec<_> = report
                    .verdicts
                    .iter()
                    .map(|v| {
                        json!({
                            "lambda": v.lambda.to_string(),
                            "mu": v.mu.to_string(),
                            "status": match v.status {
                                SosStatus::Certified => "certified",
                                SosStatus::RefutedByPoint => "refuted-by-point",
                                SosStatus::Unknown => "unknown",
                            },
                            "dominance": format!("{:?}", v.dominance),
                            "residual": v.certificate.as_ref().map(|c| c.residual),
                        })
                    })
                    .collect();
                let body = json!({
                    "weight": weight,
                    "n": n,
                    "verdicts": arr,
                    "reduced_edges": report.reduced.iter().map(|(a, b)| {
                        json!([a.to_string(), b.to_string()])
                    }).collect::<Vec<_>>(),
                });
                std::fs::write(path, serde_json::to_string_pretty(&body).unwrap())
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?;
            }
            Ok(0)
        }
        Cmd::Survey {
            input,
            group,
            samples,
            csv,
            jobs,
        } => {
            let gid = GroupId::parse(group).ok_or_else(|| format!("bad group {group}"))?;
            let GroupId::Symmetric(nvars) = gid;
            let f = input.read(nvars)?;
            let report = rank_survey(&f, &gid, *samples, cli.seed, &sdp_options(cli), *jobs)
                .map_err(|e| e.to_string())?;
            write_or_print(csv, &report.to_csv())?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 64,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(64)
        }
    }
}
