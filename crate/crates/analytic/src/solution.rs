use kzh_core::liealg::{casimir_sl2, e_matrix, ColorMap, MultiDegree, RootData};
use kzh_core::scalars::ExactMatrix;

use crate::quadrature::{regularized_power_integral, tanh_sinh};
use crate::{to_f64, AnalyticError, MasterFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regularization {
    /// Endpoint exponents must exceed −1.
    None,
    /// Exponents in (−2, −1) are continued analytically; below is rejected.
    EndpointExponent,
}

/// A real path from z_from to z_to, split at the given interior fractions
/// of its length. A plain segment is split at its midpoint.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour {
    pub from: usize,
    pub to: usize,
    pub vertices: Vec<f64>,
    pub regularization: Regularization,
}

impl Contour {
    pub fn segment(from: usize, to: usize) -> Self {
        Contour { from, to, vertices: vec![0.5], regularization: Regularization::EndpointExponent }
    }

    pub fn polyline(from: usize, to: usize, vertices: Vec<f64>) -> Result<Self, AnalyticError> {
        if vertices.is_empty() || vertices.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
            return Err(AnalyticError::Shape("polyline vertices must be fractions strictly inside (0, 1)".into()));
        }
        if vertices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(AnalyticError::Shape("polyline vertices must increase".into()));
        }
        Ok(Contour { from, to, vertices, regularization: Regularization::EndpointExponent })
    }

    pub fn with_regularization(mut self, r: Regularization) -> Self {
        self.regularization = r;
        self
    }
}

/// Base points ("centers"), each optionally surrounded by a 5-point stencil
/// of step h in every z-direction. Points are listed as center, then for
/// each i the offsets −2h, −h, +h, +2h along z_i.
#[derive(Clone, Debug, PartialEq)]
pub struct ZGrid {
    pub centers: Vec<Vec<f64>>,
    pub h: f64,
}

const OFFSETS: [f64; 4] = [-2.0, -1.0, 1.0, 2.0];

impl ZGrid {
    pub fn points_only(centers: Vec<Vec<f64>>) -> Self {
        ZGrid { centers, h: 0.0 }
    }

    pub fn stencils(centers: Vec<Vec<f64>>, h: f64) -> Self {
        ZGrid { centers, h }
    }

    fn per_center(&self) -> usize {
        let n = self.centers.first().map_or(0, |c| c.len());
        if self.h > 0.0 {
            1 + 4 * n
        } else {
            1
        }
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        for c in &self.centers {
            out.push(c.clone());
            if self.h > 0.0 {
                for i in 0..c.len() {
                    for o in OFFSETS {
                        let mut p = c.clone();
                        p[i] += o * self.h;
                        out.push(p);
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumericSolution {
    pub grid: ZGrid,
    pub points: Vec<Vec<f64>>,
    /// One vector per point, indexed like the basis f^{(s)}v of the weight
    /// component (f acting in factor s).
    pub values: Vec<Vec<f64>>,
    /// Summed quadrature error estimate per point.
    pub errors: Vec<f64>,
    pub regularized: bool,
}

fn ordering(z: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..z.len()).collect();
    idx.sort_by(|&a, &b| z[a].total_cmp(&z[b]));
    idx
}

/// ψ_s = ∫_c Φ(z,t)/(t − z_s) dt for every s, at one point z.
fn segment_vector(mf: &MasterFunction, c: &Contour, z: &[f64], tol: f64) -> Result<(Vec<f64>, f64, bool), AnalyticError> {
    let (a, b) = (c.from, c.to);
    let n = z.len();
    if a == b || z[a] == z[b] {
        return Ok((vec![0.0; n], 0.0, false));
    }
    let dir = (z[b] - z[a]).signum();
    let len = (z[b] - z[a]).abs();
    let log_cz = mf.log_abs_z(z);
    let cuts: Vec<f64> = std::iter::once(0.0).chain(c.vertices.iter().map(|f| f * len)).chain(std::iter::once(len)).collect();
    let mut values = Vec::with_capacity(n);
    let mut err = 0.0;
    let mut regularized = false;
    for s in 0..n {
        let e: Vec<f64> = (0..n).map(|u| mf.zt_exponent(u, 0) - if u == s { 1.0 } else { 0.0 }).collect();
        let sign = if s == a {
            dir
        } else if s == b {
            -dir
        } else {
            (z[a] - z[s]).signum()
        };
        for (end, alpha) in [(a, e[a]), (b, e[b])] {
            let ok = match c.regularization {
                Regularization::None => alpha > -1.0,
                Regularization::EndpointExponent => alpha > -2.0 && (alpha + 1.0).abs() >= 1e-12,
            };
            if !ok {
                return Err(AnalyticError::DivergentExponent { endpoint: end, exponent: alpha });
            }
            regularized |= alpha <= -1.0;
        }
        // expansion around an endpoint p moving inward with direction d
        let near = |p: usize, d: f64| {
            let g0 = sign * (log_cz + (0..n).filter(|&u| u != p).map(|u| e[u] * (z[p] - z[u]).abs().ln()).sum::<f64>()).exp();
            let e = e.clone();
            let zz = z.to_vec();
            let ratio = move |x: f64| -> f64 {
                (0..n).filter(|&u| u != p).map(|u| e[u] * (d * x / (zz[p] - zz[u])).ln_1p()).sum()
            };
            (g0, ratio)
        };
        let mut total = 0.0;
        let pieces = cuts.len() - 1;
        for k in 0..pieces {
            let (x0, x1) = (cuts[k], cuts[k + 1]);
            let q = if k == 0 {
                let (g0, ratio) = near(a, dir);
                regularized_power_integral(e[a], g0, ratio, x1 - x0, tol / (2.0 * pieces as f64))
            } else if k + 1 == pieces {
                let (g0, ratio) = near(b, -dir);
                regularized_power_integral(e[b], g0, ratio, x1 - x0, tol / (2.0 * pieces as f64))
            } else {
                let f = |l: f64, _r: f64| {
                    let t = z[a] + dir * (x0 + l);
                    let lg: f64 = (0..n).map(|u| e[u] * (t - z[u]).abs().ln()).sum();
                    sign * (log_cz + lg).exp()
                };
                tanh_sinh(f, x1 - x0, tol / (2.0 * pieces as f64))
            }
            .map_err(|err| match err {
                AnalyticError::DivergentExponent { exponent, .. } => {
                    AnalyticError::DivergentExponent { endpoint: if k == 0 { a } else { b }, exponent }
                }
                other => other,
            })?;
            total += q.value;
            err += q.error;
        }
        values.push(dir * total);
    }
    Ok((values, err, regularized))
}

/// Integrates the N = 1 hypergeometric vector over `c` at every grid point.
/// Every point must lie in the chamber (ordering of the z_i) of the first
/// one, so the real branch is the continuous transport of the base branch.
pub fn integrate_solution(mf: &MasterFunction, c: &Contour, grid: &ZGrid, tol: f64) -> Result<NumericSolution, AnalyticError> {
    if mf.big_n != 1 {
        return Err(AnalyticError::Unsupported(format!("numeric integration needs N = 1, got N = {}", mf.big_n)));
    }
    if c.from >= mf.n || c.to >= mf.n {
        return Err(AnalyticError::Shape(format!("contour endpoints must be among z1..z{}", mf.n)));
    }
    let points = grid.points();
    if let Some(p) = points.iter().find(|p| p.len() != mf.n) {
        return Err(AnalyticError::Shape(format!("grid point {p:?} does not have {} coordinates", mf.n)));
    }
    if let Some(base) = points.first() {
        let chamber = ordering(base);
        let pos = |i: usize| chamber.iter().position(|&x| x == i).unwrap();
        if c.from != c.to && pos(c.from).abs_diff(pos(c.to)) != 1 {
            return Err(AnalyticError::Shape("the contour passes through another singular point".into()));
        }
        for (idx, p) in points.iter().enumerate() {
            let distinct = chamber.windows(2).all(|w| p[w[0]] < p[w[1]]);
            if ordering(p) != chamber || !distinct {
                return Err(AnalyticError::BranchCrossing(idx));
            }
        }
    }
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(points.len().max(1));
    let chunk = points.len().div_ceil(workers.max(1)).max(1);
    let results: Vec<Result<(Vec<f64>, f64, bool), AnalyticError>> = std::thread::scope(|sc| {
        let handles: Vec<_> = points
            .chunks(chunk)
            .map(|ps| sc.spawn(move || ps.iter().map(|p| segment_vector(mf, c, p, tol)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("quadrature worker panicked")).collect()
    });
    let mut values = Vec::with_capacity(points.len());
    let mut errors = Vec::with_capacity(points.len());
    let mut regularized = false;
    for r in results {
        let (v, e, reg) = r?;
        values.push(v);
        errors.push(e);
        regularized |= reg;
    }
    Ok(NumericSolution { grid: grid.clone(), points, values, errors, regularized })
}

#[derive(Clone, Debug, PartialEq)]
pub struct KzResidual {
    /// max over centers, i and components of |∂_{z_i}X − (1/κ)Σ_j Ω_ij X/(z_i−z_j)|
    pub max_residual: f64,
    /// max over all points of |e·X| / Σ_s |e_s X_s|
    pub singular_relative: f64,
}

fn specialize_f64(m: &ExactMatrix) -> Result<Vec<Vec<f64>>, AnalyticError> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    m.get(i, j)
                        .as_rational()
                        .map(|r| to_f64(&r))
                        .ok_or_else(|| AnalyticError::Shape("operator entries must not depend on kappa".into()))
                })
                .collect()
        })
        .collect()
}

fn apply(m: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    m.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

pub fn kz_residual(sol: &NumericSolution, rd: &RootData, kappa: f64) -> Result<KzResidual, AnalyticError> {
    kz_residual_signed(sol, rd, kappa, 1.0)
}

/// The residual with the connection term scaled by `sign`; `sign = −1`
/// is the deliberately wrong connection used to test the checker.
pub fn kz_residual_signed(sol: &NumericSolution, rd: &RootData, kappa: f64, sign: f64) -> Result<KzResidual, AnalyticError> {
    let n = rd.n();
    let h = sol.grid.h;
    if h <= 0.0 {
        return Err(AnalyticError::Shape("the solution grid carries no finite-difference stencils".into()));
    }
    let k = MultiDegree::unit(rd.r(), 0);
    let dim = sol.values.first().map_or(0, |v| v.len());
    let mut omega = vec![vec![Vec::new(); n]; n];
    if n > 1 {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    omega[i][j] = specialize_f64(&casimir_sl2(rd, i, j, &k)?)?;
                }
            }
        }
        if omega[0][1].len() != dim {
            return Err(AnalyticError::Shape(format!("solution has {dim} components, the weight space has {}", omega[0][1].len())));
        }
    }
    let e = specialize_f64(&e_matrix(rd, 0, &MultiDegree::zero(rd.r()), None))?;
    let per = sol.grid.per_center();
    let mut worst: f64 = 0.0;
    for (ci, center) in sol.grid.centers.iter().enumerate() {
        let base = ci * per;
        let x = &sol.values[base];
        for i in 0..n {
            let at = |o: usize| &sol.values[base + 1 + 4 * i + o];
            for r in 0..dim {
                let d = (at(0)[r] - 8.0 * at(1)[r] + 8.0 * at(2)[r] - at(3)[r]) / (12.0 * h);
                let mut conn = 0.0;
                for j in (0..n).filter(|&j| j != i) {
                    conn += apply(&omega[i][j], x)[r] / (center[i] - center[j]);
                }
                worst = worst.max((d - sign * conn / kappa).abs());
            }
        }
    }
    let mut singular: f64 = 0.0;
    for x in &sol.values {
        for row in &e {
            let num: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            let den: f64 = row.iter().zip(x).map(|(a, b)| (a * b).abs()).sum();
            if den > 0.0 {
                singular = singular.max(num.abs() / den);
            }
        }
    }
    Ok(KzResidual { max_residual: worst, singular_relative: singular })
}

#[derive(Clone, Debug, PartialEq)]
pub struct CokerReport {
    /// max |KZ residual of x| before passing to the quotient
    pub unprojected: f64,
    /// the same residual after projecting away the image of e
    pub projected: f64,
    pub coker_dim: usize,
    pub vacuous: bool,
    /// How the horizontal coefficient of the 0-cycle is normalized.
    pub normalization: String,
}

/// At N = 1 the cycle is a point t*; x(z) = −κΦ(t*, z) spans the top
/// weight space. Its KZ residual is checked modulo the image of
/// e: M_{(1)} → M_{(0)}.
pub fn coker_solution_check(rd: &RootData, kappa: f64, t_star: f64, grid: &ZGrid) -> Result<CokerReport, AnalyticError> {
    let mf = MasterFunction::new(rd, &ColorMap(vec![0]), kappa)?;
    let n = rd.n();
    if grid.h <= 0.0 {
        return Err(AnalyticError::Shape("the coker check needs finite-difference stencils".into()));
    }
    let zero = MultiDegree::zero(rd.r());
    let omega0: Vec<Vec<f64>> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            if i == j {
                Ok(0.0)
            } else {
                Ok(specialize_f64(&casimir_sl2(rd, i, j, &zero)?)?[0][0])
            }
        })
        .collect::<Result<Vec<f64>, AnalyticError>>()?
        .chunks(n)
        .map(|c| c.to_vec())
        .collect();
    let e_exact = e_matrix(rd, 0, &zero, None);
    let rank = e_exact.rank();
    let coker_dim = e_exact.rows() - rank;
    let e = specialize_f64(&e_exact)?;
    let x = |z: &[f64]| -kappa * mf.value(z, &[t_star]);
    let mut unprojected: f64 = 0.0;
    let mut projected: f64 = 0.0;
    for center in &grid.centers {
        if center.iter().any(|&zi| zi == t_star) || ordering(center).windows(2).any(|w| center[w[0]] == center[w[1]]) {
            return Err(AnalyticError::Shape(format!("grid center {center:?} is not a regular point")));
        }
        let h = grid.h;
        let x0 = x(center);
        for i in 0..n {
            let shifted = |o: f64| {
                let mut p = center.clone();
                p[i] += o * h;
                x(&p)
            };
            let d = (shifted(-2.0) - 8.0 * shifted(-1.0) + 8.0 * shifted(1.0) - shifted(2.0)) / (12.0 * h);
            let conn: f64 = (0..n).filter(|&j| j != i).map(|j| omega0[i][j] * x0 / (center[i] - center[j])).sum();
            let r = d - conn / kappa;
            unprojected = unprojected.max(r.abs());
            // the target space is one-dimensional; im(e) is all of it or 0
            let in_image = e[0].iter().any(|&v| v != 0.0);
            projected = projected.max(if in_image { 0.0 } else { r.abs() });
        }
    }
    Ok(CokerReport {
        unprojected,
        projected,
        coker_dim,
        vacuous: coker_dim == 0,
        normalization: "x(z) = -k * Phi(t*, z) on the real branch of the base chamber".into(),
    })
}
