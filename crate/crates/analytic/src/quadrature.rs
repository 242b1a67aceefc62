use std::f64::consts::{FRAC_PI_2, PI};

use crate::AnalyticError;

const U_MAX: f64 = 6.5;
const MIN_LEVELS: usize = 3;
const MAX_LEVELS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// |I_k − I_{k−1}| at the accepted level.
    pub error: f64,
    /// The same difference at every level, finest last.
    pub history: Vec<f64>,
    pub evaluations: usize,
}

/// Tanh-sinh rule on [0, len]. The integrand receives the distances to both
/// ends, (x, len − x), each computed without cancellation, so endpoint
/// singularities can be handled in the caller's own variables.
pub fn tanh_sinh<F>(f: F, len: f64, tol: f64) -> Result<Quadrature, AnalyticError>
where
    F: Fn(f64, f64) -> f64,
{
    if len == 0.0 {
        return Ok(Quadrature { value: 0.0, error: 0.0, history: Vec::new(), evaluations: 0 });
    }
    let mut evaluations = 0;
    let mut node = |u: f64| -> f64 {
        let s = FRAC_PI_2 * u.sinh();
        // x = len/(1+e^{−2s}), len − x = len/(1+e^{2s})
        let left = len / (1.0 + (-2.0 * s).exp());
        let right = len / (1.0 + (2.0 * s).exp());
        let w = len * PI * u.cosh() / (2.0 + 2.0 * (2.0 * s).cosh());
        if left == 0.0 || right == 0.0 || w == 0.0 || !w.is_finite() {
            return 0.0;
        }
        evaluations += 1;
        let v = f(left, right);
        if v.is_finite() {
            w * v
        } else {
            f64::NAN
        }
    };
    let mut h = 1.0;
    let mut sum = node(0.0);
    let mut j = 1;
    while j as f64 * h <= U_MAX {
        let u = j as f64 * h;
        sum += node(u) + node(-u);
        j += 1;
    }
    let mut prev = sum * h;
    let mut history = Vec::new();
    for level in 1..=MAX_LEVELS {
        h /= 2.0;
        let mut j = 1;
        while j as f64 * h <= U_MAX {
            let u = j as f64 * h;
            sum += node(u) + node(-u);
            j += 2;
        }
        let cur = sum * h;
        if !cur.is_finite() {
            return Err(AnalyticError::NonConvergence { achieved: f64::INFINITY, requested: tol, levels: level });
        }
        let err = (cur - prev).abs();
        history.push(err);
        if level >= MIN_LEVELS && err <= tol {
            return Ok(Quadrature { value: cur, error: err, history, evaluations });
        }
        prev = cur;
    }
    Err(AnalyticError::NonConvergence {
        achieved: history.last().copied().unwrap_or(f64::INFINITY),
        requested: tol,
        levels: MAX_LEVELS,
    })
}

/// ∫_0^len x^α g(x) dx with g(x) = g0·exp(S(x)), S(0) = 0. For α > −1 this
/// is the ordinary integral; for −2 < α < −1 it is its analytic
/// continuation in α, ∫_0^len x^α(g(x) − g0)dx + g0·len^{α+1}/(α+1).
pub fn regularized_power_integral<S>(alpha: f64, g0: f64, log_ratio: S, len: f64, tol: f64) -> Result<Quadrature, AnalyticError>
where
    S: Fn(f64) -> f64,
{
    if alpha <= -2.0 || (alpha + 1.0).abs() < 1e-12 {
        return Err(AnalyticError::DivergentExponent { endpoint: usize::MAX, exponent: alpha });
    }
    if alpha > -1.0 {
        return tanh_sinh(|x, _| g0 * (alpha * x.ln() + log_ratio(x)).exp(), len, tol);
    }
    let mut q = tanh_sinh(|x, _| g0 * x.powf(alpha + 1.0) * (log_ratio(x).exp_m1() / x), len, tol)?;
    q.value += g0 * len.powf(alpha + 1.0) / (alpha + 1.0);
    Ok(q)
}
