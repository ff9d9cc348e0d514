//! Profile functions U(η) that the Erdélyi–Kober operator acts on.

use std::fmt;
use std::sync::Arc;

/// A real profile η ↦ U(η), optionally with derivatives and a compact support.
///
/// Implementations must be re-entrant; evaluation may happen from several
/// threads at once.
pub trait Profile: Send + Sync {
    fn eval(&self, eta: f64) -> f64;

    /// k-th derivative, `None` when the profile does not provide it.
    fn derivative(&self, eta: f64, order: usize) -> Option<f64> {
        (order == 0).then(|| self.eval(eta))
    }

    /// Right end η* of the support, if the profile vanishes for η ≥ η*.
    fn support_end(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl Profile for Constant {
    fn eval(&self, _eta: f64) -> f64 {
        self.0
    }

    fn derivative(&self, _eta: f64, order: usize) -> Option<f64> {
        Some(if order == 0 { self.0 } else { 0.0 })
    }
}

/// U(η) = e^{-η}.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExpDecay;

impl Profile for ExpDecay {
    fn eval(&self, eta: f64) -> f64 {
        (-eta).exp()
    }

    fn derivative(&self, eta: f64, order: usize) -> Option<f64> {
        let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some(sign * (-eta).exp())
    }
}

/// U(η) = scale · (1 − η/front)^exponent on [0, front), zero beyond.
///
/// At η = front the derivatives report their left limits (possibly infinite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFront {
    pub front: f64,
    pub exponent: f64,
    pub scale: f64,
}

impl PowerFront {
    pub fn new(front: f64, exponent: f64, scale: f64) -> Self {
        Self {
            front,
            exponent,
            scale,
        }
    }

    /// √(1 − η) on [0, 1].
    pub fn sqrt_unit() -> Self {
        Self::new(1.0, 0.5, 1.0)
    }
}

impl Profile for PowerFront {
    fn eval(&self, eta: f64) -> f64 {
        if eta >= self.front {
            0.0
        } else {
            self.scale * (1.0 - eta / self.front).powf(self.exponent)
        }
    }

    fn derivative(&self, eta: f64, order: usize) -> Option<f64> {
        if order == 0 {
            return Some(self.eval(eta));
        }
        if eta > self.front {
            return Some(0.0);
        }
        // falling factorial p(p-1)...(p-k+1) times (-1/front)^k
        let mut coeff = self.scale;
        for i in 0..order {
            coeff *= (self.exponent - i as f64) * (-1.0 / self.front);
        }
        let power = self.exponent - order as f64;
        let base = 1.0 - eta / self.front;
        let v = if base > 0.0 {
            base.powf(power)
        } else if power > 0.0 {
            0.0
        } else if power == 0.0 {
            1.0
        } else {
            f64::INFINITY
        };
        Some(if coeff == 0.0 { 0.0 } else { coeff * v })
    }

    fn support_end(&self) -> Option<f64> {
        Some(self.front)
    }
}

type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type DerivFn = Arc<dyn Fn(f64, usize) -> Option<f64> + Send + Sync>;

/// Profile assembled from closures.
#[derive(Clone)]
pub struct FnProfile {
    eval: EvalFn,
    deriv: Option<DerivFn>,
    support_end: Option<f64>,
}

impl FnProfile {
    pub fn new(eval: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self {
            eval: Arc::new(eval),
            deriv: None,
            support_end: None,
        }
    }

    pub fn with_derivatives(
        mut self,
        deriv: impl Fn(f64, usize) -> Option<f64> + Send + Sync + 'static,
    ) -> Self {
        self.deriv = Some(Arc::new(deriv));
        self
    }

    pub fn with_support_end(mut self, end: f64) -> Self {
        self.support_end = Some(end);
        self
    }
}

impl fmt::Debug for FnProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FnProfile")
            .field("has_derivatives", &self.deriv.is_some())
            .field("support_end", &self.support_end)
            .finish()
    }
}

impl Profile for FnProfile {
    fn eval(&self, eta: f64) -> f64 {
        (self.eval)(eta)
    }

    fn derivative(&self, eta: f64, order: usize) -> Option<f64> {
        if order == 0 {
            return Some(self.eval(eta));
        }
        self.deriv.as_ref().and_then(|d| d(eta, order))
    }

    fn support_end(&self) -> Option<f64> {
        self.support_end
    }
}

impl<P: Profile + ?Sized> Profile for &P {
    fn eval(&self, eta: f64) -> f64 {
        (**self).eval(eta)
    }
    fn derivative(&self, eta: f64, order: usize) -> Option<f64> {
        (**self).derivative(eta, order)
    }
    fn support_end(&self) -> Option<f64> {
        (**self).support_end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_derivatives() {
        let u = PowerFront::sqrt_unit();
        let eta: f64 = 0.36;
        assert!((u.eval(eta) - 0.8).abs() < 1e-15);
        // d/dη √(1-η) = -1/(2√(1-η))
        assert!((u.derivative(eta, 1).unwrap() + 0.5 / 0.8).abs() < 1e-15);
        // d²/dη² = -1/(4 (1-η)^{3/2})
        assert!((u.derivative(eta, 2).unwrap() + 0.25 / 0.8f64.powi(3)).abs() < 1e-14);
        assert_eq!(u.eval(1.0), 0.0);
        assert_eq!(u.eval(1.5), 0.0);
        assert_eq!(u.derivative(1.0, 1), Some(f64::NEG_INFINITY));
        assert_eq!(u.derivative(2.0, 1), Some(0.0));
        assert_eq!(u.support_end(), Some(1.0));
    }

    #[test]
    fn linear_front_left_limits() {
        let u = PowerFront::new(2.0, 1.0, 3.0);
        assert_eq!(u.derivative(2.0, 1), Some(-1.5));
        assert_eq!(u.derivative(1.0, 2), Some(0.0));
    }

    #[test]
    fn exp_decay_derivatives_alternate() {
        let u = ExpDecay;
        assert!((u.derivative(0.0, 3).unwrap() + 1.0).abs() < 1e-15);
        assert!((u.derivative(0.0, 4).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn closure_profile() {
        let u = FnProfile::new(|x| x * x).with_support_end(3.0);
        assert_eq!(u.eval(2.0), 4.0);
        assert_eq!(u.derivative(2.0, 1), None);
        assert_eq!(u.support_end(), Some(3.0));
    }
}
