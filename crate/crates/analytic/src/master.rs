use kzh_core::liealg::{ColorMap, RootData};

use crate::{to_f64, AnalyticError};

/// Φ = Π_{s<u}(z_s−z_u)^{(μ_s,μ_u)/κ} Π_{a,s}(t_a−z_s)^{−(μ_s,α_π(a))/κ}
///     Π_{a<b}(t_a−t_b)^{(α_π(a),α_π(b))/κ},
/// so that d ln Φ = (1/κ)ω. The real branch is taken: every factor enters
/// through its absolute value, which is the continuation of the positive
/// branch inside one chamber of the real arrangement.
#[derive(Clone, Debug)]
pub struct MasterFunction {
    pub n: usize,
    pub big_n: usize,
    pub kappa: f64,
    /// (s, u, (μ_s,μ_u)) for s < u
    pub zz: Vec<(usize, usize, f64)>,
    /// (s, a, −(μ_s,α_π(a)))
    pub zt: Vec<(usize, usize, f64)>,
    /// (a, b, (α_π(a),α_π(b))) for a < b
    pub tt: Vec<(usize, usize, f64)>,
}

impl MasterFunction {
    pub fn new(rd: &RootData, pi: &ColorMap, kappa: f64) -> Result<Self, AnalyticError> {
        if kappa == 0.0 || !kappa.is_finite() {
            return Err(AnalyticError::Shape(format!("kappa must be a finite nonzero number, got {kappa}")));
        }
        let n = rd.n();
        let big_n = pi.len();
        if let Some(&c) = pi.0.iter().find(|&&c| c >= rd.r()) {
            return Err(AnalyticError::Shape(format!("color {c} is not a root index < {}", rd.r())));
        }
        let mut zz = Vec::new();
        for s in 0..n {
            for u in (s + 1)..n {
                zz.push((s, u, to_f64(rd.mu_mu(s, u))));
            }
        }
        let mut zt = Vec::new();
        for s in 0..n {
            for a in 0..big_n {
                zt.push((s, a, -to_f64(rd.mu_alpha(s, pi.color(a)))));
            }
        }
        let mut tt = Vec::new();
        for a in 0..big_n {
            for b in (a + 1)..big_n {
                tt.push((a, b, to_f64(rd.alpha_alpha(pi.color(a), pi.color(b)))));
            }
        }
        Ok(MasterFunction { n, big_n, kappa, zz, zt, tt })
    }

    /// Exponent of |t_a − z_s| in Φ.
    pub fn zt_exponent(&self, s: usize, a: usize) -> f64 {
        self.zt.iter().find(|&&(s2, a2, _)| s2 == s && a2 == a).map_or(0.0, |&(_, _, c)| c / self.kappa)
    }

    /// ln Φ restricted to the z-variables: Σ_{s<u} ((μ_s,μ_u)/κ) ln|z_s−z_u|.
    pub fn log_abs_z(&self, z: &[f64]) -> f64 {
        self.zz.iter().map(|&(s, u, c)| c / self.kappa * (z[s] - z[u]).abs().ln()).sum()
    }

    pub fn log_abs(&self, z: &[f64], t: &[f64]) -> f64 {
        let mut v = self.log_abs_z(z);
        for &(s, a, c) in &self.zt {
            v += c / self.kappa * (t[a] - z[s]).abs().ln();
        }
        for &(a, b, c) in &self.tt {
            v += c / self.kappa * (t[a] - t[b]).abs().ln();
        }
        v
    }

    pub fn value(&self, z: &[f64], t: &[f64]) -> f64 {
        self.log_abs(z, t).exp()
    }

    /// Coefficients of (1/κ)ω: (∂ ln Φ/∂z_s, ∂ ln Φ/∂t_a).
    pub fn dlog(&self, z: &[f64], t: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut dz = vec![0.0; self.n];
        let mut dt = vec![0.0; self.big_n];
        for &(s, u, c) in &self.zz {
            let v = c / self.kappa / (z[s] - z[u]);
            dz[s] += v;
            dz[u] -= v;
        }
        for &(s, a, c) in &self.zt {
            let v = c / self.kappa / (t[a] - z[s]);
            dt[a] += v;
            dz[s] -= v;
        }
        for &(a, b, c) in &self.tt {
            let v = c / self.kappa / (t[a] - t[b]);
            dt[a] += v;
            dt[b] -= v;
        }
        (dz, dt)
    }

    /// Largest relative gap between 5-point centered differences of ln|Φ|
    /// and the analytic coefficients at the point. The step is `rel_h` times
    /// the distance to the nearest singular hyperplane.
    pub fn dlog_fd_gap(&self, z: &[f64], t: &[f64], rel_h: f64) -> f64 {
        let (dz, dt) = self.dlog(z, t);
        let mut dist = f64::INFINITY;
        for &(s, u, _) in &self.zz {
            dist = dist.min((z[s] - z[u]).abs());
        }
        for &(s, a, _) in &self.zt {
            dist = dist.min((t[a] - z[s]).abs());
        }
        for &(a, b, _) in &self.tt {
            dist = dist.min((t[a] - t[b]).abs());
        }
        let h = rel_h * dist.min(1.0);
        let stencil = |f: &dyn Fn(f64) -> f64| (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h);
        let mut worst: f64 = 0.0;
        for s in 0..self.n {
            let fd = stencil(&|o| {
                let mut zp = z.to_vec();
                zp[s] += o;
                self.log_abs(&zp, t)
            });
            worst = worst.max((fd - dz[s]).abs() / dz[s].abs().max(1.0));
        }
        for a in 0..self.big_n {
            let fd = stencil(&|o| {
                let mut tp = t.to_vec();
                tp[a] += o;
                self.log_abs(z, &tp)
            });
            worst = worst.max((fd - dt[a]).abs() / dt[a].abs().max(1.0));
        }
        worst
    }
}
