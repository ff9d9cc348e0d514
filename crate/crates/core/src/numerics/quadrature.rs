//! Quadrature for integrals carrying the Jacobi weight (1-z)^(γ-1) z^β on [0, 1].
//!
//! Two independent routes are provided:
//!
//! * Gauss–Jacobi rules built with the Golub–Welsch algorithm, where the
//!   singular weight is absorbed into the quadrature weights;
//! * a globally adaptive Simpson rule applied after the substitutions
//!   `v = z^(β+1)` on the left half and `w = (1-z)^γ` on the right half,
//!   which remove both endpoint singularities of the weight.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::gamma::beta_fn;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadratureKind {
    JacobiWeighted,
    PlainAdaptive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub order: usize,
    pub kind: QuadratureKind,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::jacobi(64)
    }
}

impl QuadratureSpec {
    pub fn jacobi(order: usize) -> Self {
        Self {
            order,
            kind: QuadratureKind::JacobiWeighted,
            rel_tol: 1e-10,
        }
    }

    pub fn adaptive(rel_tol: f64) -> Self {
        Self {
            order: 64,
            kind: QuadratureKind::PlainAdaptive,
            rel_tol,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 2 {
            return Err(invalid("order", format!("{} < 2", self.order)));
        }
        if !(self.rel_tol > 0.0) {
            return Err(invalid(
                "rel_tol",
                format!("{} is not positive", self.rel_tol),
            ));
        }
        Ok(())
    }
}

/// Nodes and weights of a Gauss rule on [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    /// Gauss–Jacobi rule for the weight (1-z)^(γ-1) z^β on [0, 1].
    pub fn jacobi(order: usize, beta: f64, gamma: f64) -> Result<Self> {
        check_weight(beta, gamma)?;
        if order < 1 {
            return Err(invalid("order", "must be positive"));
        }
        // Jacobi polynomials on [-1, 1] with weight (1-x)^a (1+x)^b
        let a = gamma - 1.0;
        let b = beta;
        let ab = a + b;
        let mut diag = vec![0.0; order];
        let mut off = vec![0.0; order.saturating_sub(1)];
        diag[0] = (b - a) / (ab + 2.0);
        for (n, d) in diag.iter_mut().enumerate().skip(1) {
            let nf = n as f64;
            let s = 2.0 * nf + ab;
            *d = (b * b - a * a) / (s * (s + 2.0));
        }
        for (i, o) in off.iter_mut().enumerate() {
            let n = (i + 1) as f64;
            let s = 2.0 * n + ab;
            let beta_n = if i == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * n * (n + a) * (n + b) * (n + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            *o = beta_n.sqrt();
        }
        let (values, first) = tridiagonal_eigen(&mut diag, &mut off)?;
        // total mass of the weight on [0, 1]
        let mass = beta_fn(beta + 1.0, gamma);
        let mut pairs: Vec<(f64, f64)> = values
            .iter()
            .zip(&first)
            .map(|(&x, &v)| (0.5 * (x + 1.0), mass * v * v))
            .collect();
        pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap_or(Ordering::Equal));
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    /// Gauss–Legendre rule on [0, 1].
    pub fn legendre(order: usize) -> Result<Self> {
        Self::jacobi(order, 0.0, 1.0)
    }

    pub fn apply(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * f(z))
            .sum()
    }
}

fn check_weight(beta: f64, gamma: f64) -> Result<()> {
    if !(beta > -1.0) {
        return Err(invalid("beta", format!("{beta} must exceed -1")));
    }
    if !(gamma > 0.0) {
        return Err(invalid("gamma", format!("{gamma} must be positive")));
    }
    Ok(())
}

/// Eigenvalues and first eigenvector components of a symmetric tridiagonal
/// matrix by implicit QL with Wilkinson shifts. `off[i]` couples rows i and i+1.
fn tridiagonal_eigen(diag: &mut [f64], off: &mut [f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = diag.len();
    let mut e = vec![0.0; n];
    e[..n - 1].copy_from_slice(off);
    // row 0 of the accumulated rotation matrix
    let mut z0 = vec![0.0; n];
    z0[0] = 1.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = diag[m].abs() + diag[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::ToleranceNotMet {
                    estimate: diag[l],
                    error: e[l],
                });
            }
            let mut g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = diag[m] - diag[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                let zf = z0[i + 1];
                z0[i + 1] = s * z0[i] + c * zf;
                z0[i] = c * z0[i] - s * zf;
            }
            if underflow {
                continue;
            }
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok((diag.to_vec(), z0))
}

/// ∫₀¹ (1-z)^(γ-1) z^β f(z) dz.
pub fn integrate_jacobi(
    f: impl Fn(f64) -> f64,
    beta: f64,
    gamma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    integrate_jacobi_from(f, 0.0, beta, gamma, spec)
}

/// ∫_lo^1 (1-z)^(γ-1) z^β f(z) dz for 0 ≤ lo < 1.
pub fn integrate_jacobi_from(
    f: impl Fn(f64) -> f64,
    lo: f64,
    beta: f64,
    gamma: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    spec.validate()?;
    check_weight(beta, gamma)?;
    if !(0.0..1.0).contains(&lo) {
        return Err(invalid("lo", format!("{lo} not in [0, 1)")));
    }
    match spec.kind {
        QuadratureKind::JacobiWeighted => {
            if lo == 0.0 {
                let rule = GaussRule::jacobi(spec.order, beta, gamma)?;
                Ok(rule.apply(f))
            } else {
                // z = lo + (1 - lo) t; the z^β factor is regular away from 0
                let span = 1.0 - lo;
                let rule = GaussRule::jacobi(spec.order, 0.0, gamma)?;
                let v = rule.apply(|t| {
                    let z = lo + span * t;
                    z.powf(beta) * f(z)
                });
                Ok(span.powf(gamma) * v)
            }
        }
        QuadratureKind::PlainAdaptive => adaptive_jacobi(&f, lo, beta, gamma, spec.rel_tol),
    }
}

fn adaptive_jacobi(
    f: &impl Fn(f64) -> f64,
    lo: f64,
    beta: f64,
    gamma: f64,
    rel_tol: f64,
) -> Result<f64> {
    const SPLIT: f64 = 0.5;
    let mut pieces: Vec<Box<dyn Fn(f64) -> f64 + '_>> = Vec::new();
    let mut ranges = Vec::new();
    if lo < SPLIT {
        // v = z^(β+1): (1-z)^(γ-1) f(z) dv / (β+1)
        let p = beta + 1.0;
        pieces.push(Box::new(move |v: f64| {
            let z = v.powf(1.0 / p);
            (1.0 - z).powf(gamma - 1.0) * f(z) / p
        }));
        ranges.push((lo.powf(p), SPLIT.powf(p)));
    }
    // w = (1-z)^γ: z^β f(z) dw / γ
    let top = 1.0 - lo.max(SPLIT);
    pieces.push(Box::new(move |w: f64| {
        let z = 1.0 - w.powf(1.0 / gamma);
        z.powf(beta) * f(z) / gamma
    }));
    ranges.push((0.0, top.powf(gamma)));

    let mut total = 0.0;
    let mut total_err = 0.0;
    let mut ok = true;
    // coarse pass fixes the absolute tolerance
    let coarse: f64 = pieces
        .iter()
        .zip(&ranges)
        .map(|(g, &(a, b))| composite_simpson(g, a, b, 64))
        .sum();
    let scale = coarse.abs().max(f64::MIN_POSITIVE);
    for (g, &(a, b)) in pieces.iter().zip(&ranges) {
        let r = adaptive_simpson(g, a, b, rel_tol * scale / ranges.len() as f64, 200_000);
        total += r.value;
        total_err += r.error;
        ok &= r.converged;
    }
    if !ok || !total.is_finite() {
        return Err(Error::ToleranceNotMet {
            estimate: total,
            error: total_err,
        });
    }
    Ok(total)
}

fn composite_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        let xm = x0 + 0.5 * h;
        s += h / 6.0 * (eval_finite(f, x0) + 4.0 * f(xm) + eval_finite(f, x0 + h));
    }
    s
}

/// Endpoint values of the transformed integrands can be infinite for weak
/// residual singularities; those points are nudged inward.
fn eval_finite(f: &impl Fn(f64) -> f64, x: f64) -> f64 {
    let v = f(x);
    if v.is_finite() {
        v
    } else {
        let nudged = if x == 0.0 { 1e-300 } else { x * (1.0 - 1e-15) };
        let w = f(nudged);
        if w.is_finite() {
            w
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct AdaptiveResult {
    pub value: f64,
    pub error: f64,
    pub converged: bool,
}

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    refined: f64,
    err: f64,
    fl: f64,
    fr: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.partial_cmp(&other.err).unwrap_or(Ordering::Equal)
    }
}

fn make_panel(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Panel {
    let m = 0.5 * (a + b);
    let fl = eval_finite(f, 0.5 * (a + m));
    let fr = eval_finite(f, 0.5 * (m + b));
    let h = b - a;
    let whole = h / 6.0 * (fa + 4.0 * fm + fb);
    let refined = h / 12.0 * (fa + 4.0 * fl + 2.0 * fm + 4.0 * fr + fb);
    Panel {
        a,
        b,
        fa,
        fm,
        fb,
        whole,
        refined,
        err: (refined - whole).abs() / 15.0,
        fl,
        fr,
    }
}

/// Globally adaptive Simpson: the panel with the largest error estimate is
/// bisected until the summed estimate drops below `abs_tol`.
pub fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    max_evals: usize,
) -> AdaptiveResult {
    if a == b {
        return AdaptiveResult {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    let mut heap = BinaryHeap::new();
    let mut evals = 0;
    let init = 16;
    let h = (b - a) / init as f64;
    let mut left = eval_finite(f, a);
    for i in 0..init {
        let x0 = a + i as f64 * h;
        let x1 = if i + 1 == init { b } else { x0 + h };
        let fm = eval_finite(f, 0.5 * (x0 + x1));
        let right = eval_finite(f, x1);
        heap.push(make_panel(f, x0, x1, left, fm, right));
        left = right;
        evals += 4;
    }
    let mut err: f64 = heap.iter().map(|p| p.err).sum();
    let mut converged = err <= abs_tol;
    while !converged && evals < max_evals {
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // panel can no longer be split in floating point
            heap.push(Panel { err: 0.0, ..p });
            err = heap.iter().map(|p| p.err).sum();
            converged = err <= abs_tol;
            break;
        }
        let l = make_panel(f, p.a, m, p.fa, p.fl, p.fm);
        let r = make_panel(f, m, p.b, p.fm, p.fr, p.fb);
        evals += 4;
        err += l.err + r.err - p.err;
        heap.push(l);
        heap.push(r);
        if heap.len() % 256 == 0 {
            // resum to keep the running total from drifting
            err = heap.iter().map(|p| p.err).sum();
        }
        converged = err <= abs_tol;
    }
    let value = heap
        .iter()
        .map(|p| p.refined + (p.refined - p.whole) / 15.0)
        .sum();
    AdaptiveResult {
        value,
        error: err,
        converged,
    }
}
