//! Eigenvalues of the small projected problem `B(lambda) z = 0`.
//!
//! Polynomial and rational problems are cleared of denominators, linearized into
//! a block companion matrix and polished by Newton-trace iteration. Roots that
//! sit on a cleared pole, or that fail the `sigma_min` test, are set aside as
//! spurious. Problems with exponential terms are solved by Newton from a grid.

use serde::{Deserialize, Serialize};

use crate::error::{NepError, Result};
use crate::linalg::{check_conditioning, eigenvalues, sigma_min, ComplexMatrix, Lu, Poly, C64, ONE, ZERO};
use crate::model::{MatrixFunction, ScalarFn};

/// Largest block companion dimension `d * m`.
pub const COMPANION_LIMIT: usize = 64;
/// Reverse roots at or below this modulus are counted as infinite eigenvalues.
/// A chain of length k at infinity perturbs them to about `eps^(1/k)`.
const INFINITE_ROOT: f64 = 1e-4;

#[derive(Clone, Debug)]
pub struct SolveOptions {
    /// Roots closer than this are merged; the cluster size is the multiplicity.
    pub cluster_radius: f64,
    /// Candidates must satisfy `sigma_min(B) <= accept_tol * max(1, ||B||)`.
    pub accept_tol: f64,
    /// Candidates within `pole_distance * (1 + |p|)` of a pole `p` are spurious.
    /// Cleared poles of order k scatter roots to about `eps^(1/k)`.
    pub pole_distance: f64,
    pub newton_max_iter: usize,
    /// Seeds per side of the Newton grid for exponential problems.
    pub grid: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            cluster_radius: 1e-8,
            accept_tol: 1e-8,
            pole_distance: 1e-6,
            newton_max_iter: 50,
            grid: 12,
        }
    }
}

/// `P(lambda) = q(lambda) B(lambda) = sum_k lambda^k C_k` with the roots of `q`.
#[derive(Clone, Debug)]
pub struct Polynomialized {
    pub coefficients: Vec<ComplexMatrix>,
    pub denominator: Poly,
    pub poles: Vec<C64>,
}

impl Polynomialized {
    pub fn eval(&self, lambda: C64) -> ComplexMatrix {
        let m = self.coefficients[0].rows();
        self.coefficients
            .iter()
            .rev()
            .fold(ComplexMatrix::zeros(m, m), |acc, c| acc.scale(lambda).add(c))
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// Clears rational denominators. The common denominator is the product of the
/// distinct monic denominators, so spurious roots only appear at poles.
pub fn polynomialize(b: &MatrixFunction) -> Result<Polynomialized> {
    let mut distinct: Vec<Poly> = Vec::new();
    for t in b.terms() {
        match &t.function {
            ScalarFn::Exponential { .. } => return Err(NepError::UnsupportedTerm),
            ScalarFn::Rational { denominator, .. } => {
                let d = denominator.monic();
                if d.degree() > 0 && !distinct.iter().any(|p| same_poly(p, &d)) {
                    distinct.push(d);
                }
            }
            ScalarFn::Polynomial(_) => {}
        }
    }
    let q = distinct.iter().fold(Poly::one(), |acc, p| acc.mul(p));
    let m = b.dim();
    let mut scalars: Vec<(Poly, &ComplexMatrix)> = Vec::with_capacity(b.terms().len());
    for t in b.terms() {
        let p = match &t.function {
            ScalarFn::Polynomial(p) => p.mul(&q),
            ScalarFn::Rational {
                numerator,
                denominator,
            } => {
                let lead = denominator.leading();
                let monic = denominator.monic();
                let cofactor = distinct
                    .iter()
                    .filter(|p| !same_poly(p, &monic))
                    .fold(Poly::one(), |acc, p| acc.mul(p));
                numerator.mul(&cofactor).scale(ONE / lead)
            }
            ScalarFn::Exponential { .. } => unreachable!("rejected above"),
        };
        scalars.push((p, &t.matrix));
    }
    let degree = scalars.iter().map(|(p, _)| p.degree()).max().unwrap_or(0);
    let mut coefficients = vec![ComplexMatrix::zeros(m, m); degree + 1];
    for (p, a) in scalars {
        for (k, c) in p.coeffs().iter().enumerate() {
            if *c != ZERO {
                coefficients[k].axpy(*c, a);
            }
        }
    }
    while coefficients.len() > 1 && coefficients.last().is_some_and(|c| c.max_abs() == 0.0) {
        coefficients.pop();
    }
    let mut poles = Vec::new();
    for p in &distinct {
        poles.extend(p.roots()?);
    }
    Ok(Polynomialized {
        coefficients,
        denominator: q,
        poles,
    })
}

fn same_poly(a: &Poly, b: &Poly) -> bool {
    a.degree() == b.degree()
        && a
            .coeffs()
            .iter()
            .zip(b.coeffs())
            .all(|(x, y)| (x - y).norm() <= 1e-14 * (1.0 + x.norm().max(y.norm())))
}

#[derive(Clone, Debug)]
pub struct CompanionRoots {
    /// Finite eigenvalues, ascending modulus then argument.
    pub roots: Vec<C64>,
    /// Eigenvalues at infinity dropped because the leading block is singular.
    pub infinite_dropped: usize,
}

/// Finite eigenvalues of `sum_k lambda^k C_k` via a block companion matrix.
///
/// A well-conditioned leading block is inverted directly. Otherwise the problem
/// is shifted to a point `s` near `anchor` where `P(s)` is nonsingular and
/// reversed, `R(eta) = eta^d P(s + 1/eta)`; zero roots of `R` are infinite.
pub fn companion_eigs(coefficients: &[ComplexMatrix], anchor: C64) -> Result<CompanionRoots> {
    let d = coefficients.len().saturating_sub(1);
    if d == 0 {
        return Ok(CompanionRoots {
            roots: Vec::new(),
            infinite_dropped: 0,
        });
    }
    let m = coefficients[0].rows();
    if d * m > COMPANION_LIMIT {
        return Err(NepError::DimensionGuard {
            dim: d * m,
            limit: COMPANION_LIMIT,
        });
    }
    let scale = coefficients.iter().map(|c| c.norm2()).fold(0.0, f64::max);
    let lead = &coefficients[d];
    if lead.max_abs() > 0.0 && sigma_min(lead)? > 1e-6 * scale {
        let roots = eigenvalues(&block_companion(coefficients)?)?;
        return Ok(CompanionRoots {
            roots,
            infinite_dropped: 0,
        });
    }

    let s = pick_shift(coefficients, anchor, scale)?;
    let reversed = shifted_reversal(coefficients, s);
    let etas = eigenvalues(&block_companion(&reversed)?)?;
    let mut roots = Vec::with_capacity(etas.len());
    let mut infinite_dropped = 0;
    for eta in etas {
        if eta.norm() <= INFINITE_ROOT {
            infinite_dropped += 1;
        } else {
            roots.push(s + ONE / eta);
        }
    }
    roots.sort_by(|a, b| crate::linalg::spectral_order(*a, *b));
    Ok(CompanionRoots {
        roots,
        infinite_dropped,
    })
}

/// First-companion form of the monic problem `lambda^d I + sum_k C_d^{-1} C_k lambda^k`.
fn block_companion(coefficients: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let d = coefficients.len() - 1;
    let m = coefficients[0].rows();
    let lu = Lu::factor(&coefficients[d])?;
    let normalized: Vec<ComplexMatrix> = coefficients[..d].iter().map(|c| lu.solve_matrix(c)).collect();
    let n = d * m;
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        let (bi, ii) = (i / m, i % m);
        let (bj, jj) = (j / m, j % m);
        if bi == 0 {
            // Top block row: -C_d^{-1} C_{d-1-bj}
            -normalized[d - 1 - bj][(ii, jj)]
        } else if bi == bj + 1 && ii == jj {
            ONE
        } else {
            ZERO
        }
    }))
}

fn pick_shift(coefficients: &[ComplexMatrix], anchor: C64, scale: f64) -> Result<C64> {
    let eval = |s: C64| {
        coefficients
            .iter()
            .rev()
            .fold(ComplexMatrix::zeros(coefficients[0].rows(), coefficients[0].rows()), |acc, c| {
                acc.scale(s).add(c)
            })
    };
    let mut best: Option<(f64, C64)> = None;
    for k in 0..16 {
        let radius = 0.37 * 1.45f64.powi(k);
        let angle = 0.71 + 2.39996 * k as f64;
        let s = anchor + C64::from_polar(radius, angle);
        let ps = eval(s);
        let pscale = scale * (1.0 + s.norm()).powi(coefficients.len() as i32 - 1);
        let ratio = sigma_min(&ps)? / pscale;
        if ratio > 1e-3 {
            return Ok(s);
        }
        if best.is_none_or(|(r, _)| ratio > r) {
            best = Some((ratio, s));
        }
    }
    match best {
        Some((r, s)) if r > 1e-12 => Ok(s),
        Some((r, _)) => Err(NepError::NearSingular { ratio: r }),
        None => unreachable!("at least one candidate"),
    }
}

/// Coefficients of `R(eta) = eta^d P(s + 1/eta)`:
/// `R_j = sum_{k >= d-j} C_k binom(k, d-j) s^{k-d+j}`.
fn shifted_reversal(coefficients: &[ComplexMatrix], s: C64) -> Vec<ComplexMatrix> {
    let d = coefficients.len() - 1;
    let m = coefficients[0].rows();
    (0..=d)
        .map(|j| {
            let i = d - j;
            let mut out = ComplexMatrix::zeros(m, m);
            for (k, c) in coefficients.iter().enumerate().skip(i) {
                out.axpy(s.powu((k - i) as u32) * binomial(k, i), c);
            }
            out
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Newton on `det B`: `lambda <- lambda - 1 / trace(B^{-1} B')`.
///
/// Stops at a numerically singular `B(lambda)` or once steps reach rounding
/// level; the result must satisfy `sigma_min(B) <= 1e-10 max(1, ||B||)`.
pub fn newton_trace_refine(b: &MatrixFunction, lambda0: C64, max_iter: usize) -> Result<C64> {
    let mut lambda = lambda0;
    let mut iterations = 0;
    while iterations < max_iter {
        let bl = b.eval(lambda, 0)?;
        if matches!(check_conditioning(&bl), Err(NepError::NearSingular { .. })) {
            break;
        }
        let lu = match Lu::factor(&bl) {
            Ok(lu) => lu,
            Err(NepError::NearSingular { .. }) => break,
            Err(e) => return Err(e),
        };
        let db = b.eval(lambda, 1)?;
        let tr = lu.solve_matrix(&db).trace();
        iterations += 1;
        if tr == ZERO || !tr.is_finite() {
            return Err(NepError::NonConverged {
                iterations,
                last: lambda,
            });
        }
        let step = ONE / tr;
        lambda -= step;
        if step.norm() <= 4.0 * f64::EPSILON * lambda.norm().max(1.0) {
            break;
        }
        // Multiple roots converge only linearly; accept once B is singular to rounding.
        let bl = b.eval(lambda, 0)?;
        if sigma_min(&bl)? <= 1e-14 * bl.norm2().max(1.0) {
            break;
        }
    }
    let bl = b.eval(lambda, 0)?;
    if sigma_min(&bl)? > 1e-10 * bl.norm2().max(1.0) {
        return Err(NepError::NonConverged {
            iterations,
            last: lambda,
        });
    }
    Ok(lambda)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    CompanionPolynomial,
    CompanionRationalized,
    NewtonOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectralEntry {
    pub value: C64,
    /// Cluster size among refined candidates.
    pub multiplicity: usize,
    /// `sigma_min(B(value))`
    pub residual: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<SpectralEntry>,
    pub method: SolveMethod,
    pub filtered_spurious: Vec<C64>,
    pub infinite_dropped: usize,
}

impl SpectrumResult {
    pub fn values(&self) -> Vec<C64> {
        self.eigenvalues.iter().map(|e| e.value).collect()
    }
}

pub fn solve_projected(b: &MatrixFunction, center: C64, radius: f64) -> Result<SpectrumResult> {
    solve_projected_with(b, center, radius, &SolveOptions::default())
}

pub fn solve_projected_with(
    b: &MatrixFunction,
    center: C64,
    radius: f64,
    options: &SolveOptions,
) -> Result<SpectrumResult> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(NepError::InvalidInput("region radius must be positive".into()));
    }
    let inside = |z: C64| (z - center).norm() <= radius;
    let (method, seeds, infinite_dropped, poles) = if b.has_exponential() {
        let g = options.grid.max(2);
        let mut seeds = Vec::with_capacity(g * g);
        for i in 0..g {
            for j in 0..g {
                let re = -radius + 2.0 * radius * (i as f64 + 0.5) / g as f64;
                let im = -radius + 2.0 * radius * (j as f64 + 0.5) / g as f64;
                let z = center + C64::new(re, im);
                if inside(z) {
                    seeds.push(z);
                }
            }
        }
        (SolveMethod::NewtonOnly, seeds, 0, b.poles().to_vec())
    } else {
        let p = polynomialize(b)?;
        let method = if p.poles.is_empty() && p.denominator.degree() == 0 {
            SolveMethod::CompanionPolynomial
        } else {
            SolveMethod::CompanionRationalized
        };
        let c = companion_eigs(&p.coefficients, center)?;
        let seeds = c.roots.into_iter().filter(|z| inside(*z)).collect();
        (method, seeds, c.infinite_dropped, p.poles)
    };

    let near_pole = |z: C64| poles.iter().any(|p| (p - z).norm() <= options.pole_distance * (1.0 + p.norm()));
    let mut accepted: Vec<(C64, f64)> = Vec::new();
    let mut filtered_spurious = Vec::new();
    for seed in seeds {
        if near_pole(seed) {
            filtered_spurious.push(seed);
            continue;
        }
        let refined = match newton_trace_refine(b, seed, options.newton_max_iter) {
            Ok(z) => z,
            Err(NepError::PoleHit(_)) => {
                filtered_spurious.push(seed);
                continue;
            }
            Err(NepError::NonConverged { .. }) if method == SolveMethod::NewtonOnly => continue,
            Err(NepError::NonConverged { .. }) => seed,
            Err(e) => return Err(e),
        };
        if near_pole(refined) {
            filtered_spurious.push(refined);
            continue;
        }
        let bl = match b.eval(refined, 0) {
            Ok(m) => m,
            Err(NepError::PoleHit(_)) => {
                filtered_spurious.push(refined);
                continue;
            }
            Err(e) => return Err(e),
        };
        let smin = sigma_min(&bl)?;
        if smin > options.accept_tol * bl.norm2().max(1.0) {
            filtered_spurious.push(refined);
            continue;
        }
        if !inside(refined) {
            continue;
        }
        accepted.push((refined, smin));
    }

    accepted.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
    let mut clusters: Vec<Vec<(C64, f64)>> = Vec::new();
    for cand in accepted {
        match clusters
            .iter_mut()
            .find(|cl| cl.iter().any(|(z, _)| (z - cand.0).norm() <= options.cluster_radius))
        {
            Some(cl) => cl.push(cand),
            None => clusters.push(vec![cand]),
        }
    }
    let mut eigenvalues: Vec<SpectralEntry> = clusters
        .into_iter()
        .map(|cl| {
            let (value, residual) = cl
                .iter()
                .copied()
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("clusters are nonempty");
            SpectralEntry {
                value,
                multiplicity: cl.len(),
                residual,
            }
        })
        .collect();
    eigenvalues.sort_by(|a, b| crate::linalg::spectral_order(a.value, b.value));
    if method == SolveMethod::NewtonOnly {
        // Grid seeds converge to the same roots many times; multiplicity is not meaningful.
        for e in eigenvalues.iter_mut() {
            e.multiplicity = 1;
        }
    }
    Ok(SpectrumResult {
        eigenvalues,
        method,
        filtered_spurious,
        infinite_dropped,
    })
}

/// How the Ritz value is picked from the projected spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selection {
    /// Closest to the known eigenvalue `lambda*`.
    Oracle(C64),
    /// Closest to a user target `tau`.
    Target(C64),
}

impl Selection {
    pub fn anchor(&self) -> C64 {
        match self {
            Self::Oracle(z) | Self::Target(z) => *z,
        }
    }
}

/// Closest eigenvalue to the anchor; distance ties (relative 1e-12) go to the
/// smaller modulus, then the smaller argument in `(-pi, pi]`.
pub fn select_ritz_value(spec: &SpectrumResult, selection: Selection) -> Result<C64> {
    let anchor = selection.anchor();
    let mut best: Option<C64> = None;
    for z in spec.values() {
        best = Some(match best {
            None => z,
            Some(b) => {
                let (db, dz) = ((b - anchor).norm(), (z - anchor).norm());
                if (db - dz).abs() <= 1e-12 * db.max(dz) {
                    if crate::linalg::spectral_order(z, b).is_lt() {
                        z
                    } else {
                        b
                    }
                } else if dz < db {
                    z
                } else {
                    b
                }
            }
        });
    }
    best.ok_or(NepError::EmptySpectrum)
}
