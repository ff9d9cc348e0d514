//! The Erdélyi–Kober fractional integral
//!
//! ```text
//! I^{β,γ}_δ U(η) = 1/Γ(γ) ∫₀¹ (1-z)^{γ-1} z^β U(η z^{1/δ}) dz
//! ```
//!
//! and its expansion in derivatives of U,
//! `I U(η) = Σ_k λ_k U^{(k)}(η) η^k / k!`, with the coefficient family λ_k.

mod profile;

pub use profile::{Constant, ExpDecay, FnProfile, PowerFront, Profile};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{
    gamma_fn, gamma_ratio, integrate_jacobi, integrate_jacobi_from, ln_beta, QuadratureSpec,
};

/// Parameters (β, γ, δ) of the operator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EKParams {
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl EKParams {
    pub fn new(beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        let p = Self { beta, gamma, delta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta > -1.0) {
            return Err(invalid("beta", format!("{} must exceed -1", self.beta)));
        }
        if !(self.gamma > 0.0) {
            return Err(invalid("gamma", format!("{} must be positive", self.gamma)));
        }
        if self.delta == 0.0 || !self.delta.is_finite() {
            return Err(invalid(
                "delta",
                format!("{} must be finite and non-zero", self.delta),
            ));
        }
        Ok(())
    }

    /// The operator appearing in the self-similar reduction of the
    /// time-fractional equation: β = a, γ = 1 − α, δ = −1/b.
    pub fn from_similarity(alpha: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(a, 1.0 - alpha, -1.0 / b)
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// λ₀ = Γ(β+1)/Γ(β+γ+1).
pub fn lambda_zero(p: &EKParams) -> Result<f64> {
    p.validate()?;
    gamma_ratio(p.beta + 1.0, p.beta + p.gamma + 1.0).map_err(|e| relabel(e, 0, 0))
}

fn relabel(e: Error, k: usize, j: usize) -> Error {
    match e {
        Error::Pole { arg, .. } => Error::Pole {
            arg,
            context: format!("lambda_{k}, binomial term j = {j}"),
        },
        other => other,
    }
}

/// Cancellation above this factor hands the evaluation to the positive series.
const CANCELLATION_LIMIT: f64 = 1e3;
const SERIES_MAX_TERMS: usize = 200_000;

/// λ_k by the Gamma-function binomial sum
///
/// ```text
/// λ_k = Σ_j C(k,j) (-1)^{k-j} Γ(β + j/δ + 1) / Γ(β + γ + j/δ + 1)
/// ```
///
/// For δ < 0 the Gamma values are continued analytically. For δ > 0 and
/// γ < 1 the alternating sum loses digits when λ_k is small; in that case
/// the same quantity is also evaluated from the term-wise integrated
/// expansion of (1 − s^δ)^{γ−1}, whose terms are all positive, and the
/// value with the smaller error estimate is returned.
pub fn lambda_coeff(k: usize, p: &EKParams) -> Result<f64> {
    p.validate()?;
    if k == 0 {
        return lambda_zero(p);
    }
    let mut sum = 0.0;
    let mut magnitude = 0.0;
    for j in 0..=k {
        let x = j as f64 / p.delta;
        let ratio = gamma_ratio(p.beta + x + 1.0, p.beta + p.gamma + x + 1.0)
            .map_err(|e| relabel(e, k, j))?;
        let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
        let term = sign * binomial(k, j) * ratio;
        sum += term;
        magnitude += term.abs();
    }
    let cancellation = magnitude / sum.abs().max(f64::MIN_POSITIVE);
    if p.delta < 0.0 || p.gamma >= 1.0 || cancellation <= CANCELLATION_LIMIT {
        return Ok(sum);
    }
    let binomial_err = 4.0 * f64::EPSILON * magnitude;
    let (series, series_err) = lambda_positive_series(k, p)?;
    Ok(if series_err < binomial_err {
        series
    } else {
        sum
    })
}

/// (−1)^k δ/Γ(γ) Σ_n c_n B(δ(β+1+n), k+1), with c_n = Γ(n+1−γ)/(n! Γ(1−γ)).
///
/// Returns the value and an estimate of its absolute error.
fn lambda_positive_series(k: usize, p: &EKParams) -> Result<(f64, f64)> {
    let kf = k as f64;
    let mut ln_c = 0.0;
    let mut sum = 0.0;
    let mut term = 0.0;
    let mut n = 0;
    while n < SERIES_MAX_TERMS {
        if n > 0 {
            ln_c += ((n as f64 - p.gamma) / n as f64).ln();
        }
        term = (ln_c + ln_beta(p.delta * (p.beta + 1.0 + n as f64), kf + 1.0)).exp();
        sum += term;
        if n > 8 && term < 1e-18 * sum {
            break;
        }
        n += 1;
    }
    // terms decay like n^{-(k+1+γ)}; first-order Euler–Maclaurin tail
    let nf = n.max(1) as f64;
    let tail = (term * nf / (kf + p.gamma) - 0.5 * term).max(0.0);
    let err = tail * (kf + 2.0) / nf + 1e-16 * sum;
    let prefactor = p.delta / gamma_fn(p.gamma)?;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok((sign * prefactor * (sum + tail), prefactor * err))
}

/// λ_k from its integral form (−1)^k/Γ(γ) ∫₀¹ (1−z)^{γ−1} z^β (1 − z^{1/δ})^k dz.
pub fn lambda_coeff_integral(k: usize, p: &EKParams, spec: &QuadratureSpec) -> Result<f64> {
    p.validate()?;
    if p.delta <= 0.0 {
        return Err(invalid(
            "delta",
            "integral form of lambda_k needs delta > 0",
        ));
    }
    let inv = 1.0 / p.delta;
    let ki = k as i32;
    let integral = integrate_jacobi(|z| (1.0 - z.powf(inv)).powi(ki), p.beta, p.gamma, spec)?;
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * integral / gamma_fn(p.gamma)?)
}

/// Large-k behaviour λ_k ~ (−1)^k Γ(δ(β+1)) δ / (Γ(γ) k^{δ(β+1)}).
pub fn lambda_asymptotic(k: usize, p: &EKParams) -> Result<f64> {
    p.validate()?;
    if k == 0 {
        return Err(invalid("k", "asymptotic form needs k >= 1"));
    }
    let s = p.delta * (p.beta + 1.0);
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * gamma_fn(s)? * p.delta / (gamma_fn(p.gamma)? * (k as f64).powf(s)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaLimitReport {
    /// |λ₀ − 1| at γ = eps.
    pub lambda0_deviation: f64,
    /// max_{1≤k≤k_max} |λ_k| at γ = eps.
    pub max_higher: f64,
}

/// Evaluates λ_k at γ = eps to exhibit λ₀ → 1 and λ_k → 0 (k > 0) as γ → 0⁺.
pub fn lambda_gamma_limit_check(p: &EKParams, k_max: usize, eps: f64) -> Result<GammaLimitReport> {
    if p.delta <= 0.0 {
        return Err(invalid("delta", "gamma-limit statement requires delta > 0"));
    }
    let q = EKParams::new(p.beta, eps, p.delta)?;
    let lambda0_deviation = (lambda_zero(&q)? - 1.0).abs();
    let mut max_higher: f64 = 0.0;
    for k in 1..=k_max {
        max_higher = max_higher.max(lambda_coeff(k, &q)?.abs());
    }
    Ok(GammaLimitReport {
        lambda0_deviation,
        max_higher,
    })
}

/// I^{β,γ}_δ U(η) by quadrature of its defining integral.
///
/// For δ < 0 the argument η z^{1/δ} grows as z → 0, so U must have a compact
/// support [0, η*]; the integrand then vanishes below z = (η/η*)^{−δ} and the
/// integral is taken over [(η/η*)^{−δ}, 1].
pub fn ek_apply_direct<U: Profile + ?Sized>(
    u: &U,
    eta: f64,
    p: &EKParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    p.validate()?;
    let support = u.support_end();
    if p.delta < 0.0 && support.is_none() {
        return Err(Error::MissingSupport);
    }
    if eta == 0.0 {
        return Ok(lambda_zero(p)? * u.eval(0.0));
    }
    let inv = 1.0 / p.delta;
    let integrand = |z: f64| u.eval(eta * z.powf(inv));
    let norm = gamma_fn(p.gamma)?;
    let integral = if p.delta > 0.0 {
        integrate_jacobi(integrand, p.beta, p.gamma, spec)?
    } else {
        let front = support.unwrap_or(f64::INFINITY);
        if eta >= front {
            return Ok(0.0);
        }
        let lo = (eta / front).powf(-p.delta);
        integrate_jacobi_from(integrand, lo, p.beta, p.gamma, spec)?
    };
    Ok(integral / norm)
}

/// Truncated derivative series Σ_{k<n} λ_k U^{(k)}(η) η^k / k!.
pub fn ek_apply_series<U: Profile + ?Sized>(
    u: &U,
    eta: f64,
    p: &EKParams,
    n_terms: usize,
) -> Result<f64> {
    p.validate()?;
    if n_terms == 0 {
        return Err(invalid("n_terms", "must be positive"));
    }
    let mut sum = 0.0;
    let mut scale = 1.0; // η^k / k!
    for k in 0..n_terms {
        if k > 0 {
            scale *= eta / k as f64;
        }
        let d = u
            .derivative(eta, k)
            .ok_or(Error::DerivativeUnavailable { order: k })?;
        let lambda = lambda_coeff(k, p)?;
        // 0 · ∞ at the support edge: the term vanishes with η^k when η = 0
        if scale != 0.0 {
            sum += lambda * d * scale;
        }
    }
    Ok(sum)
}

/// Bound ‖U^{(N)}‖ |λ_N| |η|^N / N! on the error of the N-term series (δ > 0).
pub fn ek_series_error_bound(u_norm: f64, eta: f64, p: &EKParams, n: usize) -> Result<f64> {
    p.validate()?;
    if p.delta <= 0.0 {
        return Err(invalid("delta", "series error bound requires delta > 0"));
    }
    if n == 0 {
        return Err(invalid("N", "must be positive"));
    }
    let mut scale = 1.0;
    for k in 1..=n {
        scale *= eta.abs() / k as f64;
    }
    Ok(u_norm * lambda_coeff(n, p)?.abs() * scale)
}

const SUP_SAMPLES: usize = 1024;

/// λ₀ · sup_{z∈[0,1]} |U(η z^{1/δ}) − U(η)|, the one-term error bound.
/// The supremum is taken over 1024 uniform samples plus both endpoints.
pub fn ek_one_term_error_bound<U: Profile + ?Sized>(u: &U, eta: f64, p: &EKParams) -> Result<f64> {
    let lambda0 = lambda_zero(p)?;
    if eta == 0.0 {
        return Ok(0.0);
    }
    let centre = u.eval(eta);
    let inv = 1.0 / p.delta;
    let mut sup: f64 = 0.0;
    for i in 0..=SUP_SAMPLES + 1 {
        let z = i as f64 / (SUP_SAMPLES + 1) as f64;
        let arg = eta * z.powf(inv);
        let v = if arg.is_finite() {
            u.eval(arg)
        } else if let Some(end) = u.support_end() {
            // z → 0 with δ < 0: argument beyond any compact support
            if end.is_finite() {
                0.0
            } else {
                continue;
            }
        } else {
            continue;
        };
        if v.is_finite() {
            sup = sup.max((v - centre).abs());
        }
    }
    Ok(lambda0 * sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::QuadratureSpec;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn p(beta: f64, gamma: f64, delta: f64) -> EKParams {
        EKParams::new(beta, gamma, delta).unwrap()
    }

    // reference values below come from 30-digit evaluations of the binomial
    // sum and of the defining integrals (mpmath, tanh-sinh after w = (1-z)^γ)

    #[test]
    fn params_validation() {
        assert!(EKParams::new(-1.0, 0.5, 1.0).is_err());
        assert!(EKParams::new(0.0, 0.0, 1.0).is_err());
        assert!(EKParams::new(0.0, 0.5, 0.0).is_err());
        let q = EKParams::from_similarity(0.9, 0.0, 0.45).unwrap();
        assert!((q.gamma - 0.1).abs() < 1e-15 && rel(q.delta, -2.0 / 0.9) < 1e-15);
    }

    #[test]
    fn lambda_zero_is_gamma_ratio() {
        let v = lambda_coeff(0, &p(0.0, 0.5, 1.0)).unwrap();
        assert!(rel(v, 1.128_379_167_095_512_6) < 1e-14);
    }

    #[test]
    fn lambda_reference_values() {
        let q = p(1.0, 0.1, 1.0);
        let expected = [
            0.955_579_096_465_252_55,
            -0.045_503_766_498_345_36,
            0.016_146_497_789_735_45,
            -0.008_270_157_404_498_645,
            0.005_026_958_422_342_314,
        ];
        for (k, e) in expected.iter().enumerate() {
            assert!(rel(lambda_coeff(k, &q).unwrap(), *e) < 1e-12, "k = {k}");
        }
        let neg = p(0.0, 0.1, -2.0 / 0.9);
        let expected = [
            1.051_137_006_111_777_7,
            0.115_912_376_405_923_1,
            0.789_316_953_985_697_6,
            -2.959_638_873_088_637,
        ];
        for (k, e) in expected.iter().enumerate() {
            assert!(rel(lambda_coeff(k, &neg).unwrap(), *e) < 1e-12, "k = {k}");
        }
    }

    #[test]
    fn integral_form_agrees() {
        let spec = QuadratureSpec::default();
        let q = p(0.0, 1.0, 1.0);
        assert!((lambda_coeff_integral(1, &q, &spec).unwrap() + 0.5).abs() < 1e-14);
        let q = p(1.0, 0.1, 2.0);
        let exact = -0.002_157_485_595_631_579_3;
        let adaptive = QuadratureSpec::adaptive(1e-12);
        assert!(rel(lambda_coeff_integral(3, &q, &adaptive).unwrap(), exact) < 1e-9);
        assert!(rel(lambda_coeff(3, &q).unwrap(), exact) < 1e-12);
        let q = p(1.0, 0.1, 1.0);
        for k in 0..6 {
            let a = lambda_coeff(k, &q).unwrap();
            let b = lambda_coeff_integral(k, &q, &spec).unwrap();
            assert!(rel(a, b) < 1e-10, "k = {k}");
        }
        assert!(lambda_coeff_integral(1, &p(0.0, 0.1, -2.0), &spec).is_err());
    }

    #[test]
    fn high_order_lambda_uses_stable_route() {
        // 150-digit binomial sum: λ_200 = 2.6121623576868398408e-6
        let q = p(1.0, 0.1, 1.0);
        let v = lambda_coeff(200, &q).unwrap();
        assert!(rel(v, 2.612_162_357_686_839_8e-6) < 1e-9);
        let ratio = v / lambda_asymptotic(200, &q).unwrap();
        assert!(rel(ratio, 0.994_033_068_001_057) < 1e-8);
    }

    #[test]
    fn asymptotic_sign_and_decay() {
        let q = p(1.0, 0.1, 1.0);
        let vals: Vec<f64> = (1..8).map(|k| lambda_asymptotic(k, &q).unwrap()).collect();
        for (i, w) in vals.windows(2).enumerate() {
            assert!(w[0] * w[1] < 0.0, "sign at {i}");
            assert!(w[1].abs() < w[0].abs());
        }
        assert!(lambda_asymptotic(0, &q).is_err());
        // δ(β+1) = 0 would need β = -1, excluded; δ(β+1) = -1 is a pole
        let pole = p(0.0, 0.5, -1.0);
        assert!(matches!(
            lambda_asymptotic(3, &pole),
            Err(Error::Pole { .. })
        ));
    }

    #[test]
    fn lambda_pole_reports_term() {
        // β + j/δ + 1 = 0 at j = 1 for β = 0, δ = -1
        let e = lambda_coeff(2, &p(0.0, 0.5, -1.0)).unwrap_err();
        match e {
            Error::Pole { context, .. } => assert!(context.contains("j = 1"), "{context}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn gamma_limit() {
        for (beta, delta) in [(1.0, 1.0), (0.0, 2.0), (-0.5, 1.0)] {
            let r = lambda_gamma_limit_check(&p(beta, 0.5, delta), 5, 1e-6).unwrap();
            assert!(r.lambda0_deviation < 1e-4, "{r:?}");
            assert!(r.max_higher < 1e-3, "{r:?}");
        }
    }

    #[test]
    fn direct_constant_and_origin() {
        let q = p(1.0, 0.1, 1.0);
        let spec = QuadratureSpec::default();
        let l0 = lambda_zero(&q).unwrap();
        assert!(rel(ek_apply_direct(&Constant(1.0), 1.7, &q, &spec).unwrap(), l0) < 1e-13);
        let u = ExpDecay;
        assert!(rel(ek_apply_direct(&u, 0.0, &q, &spec).unwrap(), l0) < 1e-15);
    }

    #[test]
    fn direct_exp_reference() {
        let q = p(1.0, 0.1, 1.0);
        let expected = [
            (0.1, 0.868_835_389_612_116_1),
            (1.0, 0.371_843_657_341_520_06),
            (2.0, 0.148_115_257_402_118_95),
        ];
        for (eta, e) in expected {
            let j = ek_apply_direct(&ExpDecay, eta, &q, &QuadratureSpec::default()).unwrap();
            let a = ek_apply_direct(&ExpDecay, eta, &q, &QuadratureSpec::adaptive(1e-12)).unwrap();
            assert!(rel(j, e) < 1e-12, "jacobi at {eta}");
            assert!(rel(a, e) < 1e-10, "adaptive at {eta}");
        }
    }

    #[test]
    fn direct_negative_delta_sqrt_support() {
        let q = p(0.0, 0.1, -2.0 / 0.9);
        let u = PowerFront::sqrt_unit();
        let v = ek_apply_direct(&u, 0.5, &q, &QuadratureSpec::adaptive(1e-12)).unwrap();
        assert!(rel(v, 0.703_632_283_503_930_9) < 1e-9);
        assert_eq!(
            ek_apply_direct(&u, 1.2, &q, &QuadratureSpec::default()).unwrap(),
            0.0
        );
        let e = ek_apply_direct(&ExpDecay, 0.5, &q, &QuadratureSpec::default());
        assert_eq!(e, Err(Error::MissingSupport));
    }

    #[test]
    fn series_single_term_and_missing_derivative() {
        let q = p(1.0, 0.1, 1.0);
        let l0 = lambda_zero(&q).unwrap();
        let s = ek_apply_series(&ExpDecay, 0.7, &q, 1).unwrap();
        assert!(rel(s, l0 * (-0.7f64).exp()) < 1e-15);
        let f = FnProfile::new(|x| x.sin());
        assert_eq!(
            ek_apply_series(&f, 0.7, &q, 2),
            Err(Error::DerivativeUnavailable { order: 1 })
        );
    }

    #[test]
    fn series_bound_zero_at_origin_and_vanishing_in_n() {
        let q = p(1.0, 0.1, 1.0);
        assert_eq!(ek_series_error_bound(1.0, 0.0, &q, 3).unwrap(), 0.0);
        let b: Vec<f64> = (1..12)
            .map(|n| ek_series_error_bound(1.0, 1.0, &q, n).unwrap())
            .collect();
        assert!(b.windows(2).all(|w| w[1] < w[0]));
        assert!(ek_series_error_bound(1.0, 1.0, &p(0.0, 0.1, -2.0), 2).is_err());
    }

    #[test]
    fn series_error_within_bound() {
        let q = p(1.0, 0.1, 1.0);
        let spec = QuadratureSpec::default();
        let direct = ek_apply_direct(&ExpDecay, 1.0, &q, &spec).unwrap();
        let series = ek_apply_series(&ExpDecay, 1.0, &q, 3).unwrap();
        let bound = ek_series_error_bound(1.0, 1.0, &q, 3).unwrap();
        assert!((direct - series).abs() <= bound);
    }

    #[test]
    fn one_term_bound() {
        let q = p(0.0, 0.1, -2.0 / 0.9);
        assert_eq!(
            ek_one_term_error_bound(&Constant(2.0), 0.5, &p(1.0, 0.1, 1.0)).unwrap(),
            0.0
        );
        let u = PowerFront::sqrt_unit();
        assert_eq!(ek_one_term_error_bound(&u, 0.0, &q).unwrap(), 0.0);
        let spec = QuadratureSpec::adaptive(1e-12);
        let actual = (ek_apply_direct(&u, 0.5, &q, &spec).unwrap()
            - lambda_zero(&q).unwrap() * u.eval(0.5))
        .abs();
        let bound = ek_one_term_error_bound(&u, 0.5, &q).unwrap();
        assert!(bound >= actual, "bound {bound} actual {actual}");
    }
}
