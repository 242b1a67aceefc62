use std::path::Path;

use kzh_core::liealg::{ColorMap, MultiDegree, RootData};
use kzh_core::scalars::{format_rational, parse_rational, Rational};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RawConfig {
    pub algebra: Option<RawAlgebra>,
    pub problem: Option<RawProblem>,
    pub kappa: Option<String>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub tolerances: Option<RawTolerances>,
    pub options: Option<RawOptions>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RawAlgebra {
    pub sl2: Option<Vec<String>>,
    pub r: Option<usize>,
    #[serde(rename = "B")]
    pub b: Option<Vec<Vec<String>>>,
    pub n: Option<usize>,
    pub mu_alpha: Option<Vec<Vec<String>>>,
    pub mu_mu: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RawProblem {
    #[serde(rename = "N")]
    pub big_n: Option<usize>,
    pub k: Option<Vec<usize>>,
    /// 1-based root index of each t-variable.
    pub color_map: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RawTolerances {
    pub quadrature: Option<f64>,
    pub grid_step: Option<f64>,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct RawOptions {
    /// Base point z for fiber computations.
    pub z: Option<Vec<String>>,
    /// Grid centers for `solve kz`.
    pub centers: Option<Vec<Vec<String>>>,
    /// 1-based endpoints (a, b) of the segment [z_a, z_b].
    pub contour: Option<[usize; 2]>,
    pub t_star: Option<String>,
    pub max_degree: Option<usize>,
    pub max_rank: Option<usize>,
    pub max_points: Option<usize>,
    /// Explicit Ω_ij on the weight component of degree `problem.k`.
    pub omega: Option<Vec<RawOmega>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct RawOmega {
    /// 1-based factor indices
    pub i: usize,
    pub j: usize,
    pub matrix: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KappaSetting {
    Formal,
    Value(Rational),
}

impl KappaSetting {
    pub fn parse(s: &str, path: &str) -> Result<Self, CliError> {
        if s.trim() == "formal" {
            return Ok(KappaSetting::Formal);
        }
        let v = parse_rational(s).map_err(|_| CliError::config(path, format!("expected `formal` or p/q, got `{s}`")))?;
        if v == Rational::from_integer(0.into()) {
            return Err(CliError::config(path, "kappa must be nonzero"));
        }
        Ok(KappaSetting::Value(v))
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            KappaSetting::Formal => None,
            KappaSetting::Value(v) => Some(v),
        }
    }

    fn echo(&self) -> String {
        match self {
            KappaSetting::Formal => "formal".into(),
            KappaSetting::Value(v) => format_rational(v),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tolerances {
    pub quadrature: f64,
    pub grid_step: f64,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct Job {
    pub rd: RootData,
    pub k: MultiDegree,
    pub pi: ColorMap,
    pub kappa: KappaSetting,
    pub seed: u64,
    pub trials: usize,
    pub tol: Tolerances,
    pub z: Option<Vec<Rational>>,
    pub centers: Vec<Vec<Rational>>,
    pub contour: (usize, usize),
    pub t_star: Option<Rational>,
    pub max_degree: usize,
    pub max_rank: usize,
    pub max_points: usize,
    /// (i, j, Ω_ij) with 0-based i < j.
    pub omega: Vec<(usize, usize, Vec<Vec<Rational>>)>,
}

/// Command-line values that take precedence over the file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub kappa: Option<String>,
}

pub fn read_raw(path: Option<&Path>) -> Result<RawConfig, CliError> {
    let Some(path) = path else {
        return Ok(RawConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::config("--config", format!("{}: {e}", path.display())))?;
    let de = &mut serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let p = e.path().to_string();
        CliError::config(if p == "." { "config".to_string() } else { p }, e.inner().to_string())
    })
}

fn rationals(v: &[String], path: &str) -> Result<Vec<Rational>, CliError> {
    v.iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|_| CliError::config(format!("{path}[{i}]"), format!("`{s}` is not p/q"))))
        .collect()
}

fn matrix(v: &[Vec<String>], path: &str) -> Result<Vec<Vec<Rational>>, CliError> {
    v.iter().enumerate().map(|(i, row)| rationals(row, &format!("{path}[{i}]"))).collect()
}

fn root_data(a: &RawAlgebra) -> Result<RootData, CliError> {
    if let Some(m) = &a.sl2 {
        if a.b.is_some() || a.mu_alpha.is_some() || a.mu_mu.is_some() {
            return Err(CliError::config("algebra", "give either the sl2 shorthand or Gram data, not both"));
        }
        if m.is_empty() {
            return Err(CliError::config("algebra.sl2", "at least one weight is required"));
        }
        let m = rationals(m, "algebra.sl2")?;
        return RootData::sl2(&m).map_err(|e| CliError::config("algebra.sl2", e.to_string()));
    }
    let b = matrix(a.b.as_deref().ok_or_else(|| CliError::config("algebra.B", "missing"))?, "algebra.B")?;
    let ma = matrix(a.mu_alpha.as_deref().ok_or_else(|| CliError::config("algebra.muAlpha", "missing"))?, "algebra.muAlpha")?;
    let mm = matrix(a.mu_mu.as_deref().ok_or_else(|| CliError::config("algebra.muMu", "missing"))?, "algebra.muMu")?;
    if let Some(r) = a.r {
        if r != b.len() {
            return Err(CliError::config("algebra.r", format!("r = {r} but B has {} rows", b.len())));
        }
    }
    if let Some(n) = a.n {
        if n != mm.len() {
            return Err(CliError::config("algebra.n", format!("n = {n} but muMu has {} rows", mm.len())));
        }
    }
    RootData::new(b, ma, mm).map_err(|e| CliError::config("algebra", e.to_string()))
}

fn positive(v: f64, path: &str) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::config(path, format!("must be a positive number, got {v}")))
    }
}

impl Job {
    pub fn from_raw(raw: &RawConfig, ov: &Overrides) -> Result<Self, CliError> {
        let default_alg = RawAlgebra { sl2: Some(vec!["1".into(), "1".into()]), ..Default::default() };
        let rd = root_data(raw.algebra.as_ref().unwrap_or(&default_alg))?;
        let r = rd.r();
        let prob = raw.problem.clone().unwrap_or_default();
        let k = match (&prob.k, prob.big_n) {
            (Some(k), big_n) => {
                if k.len() != r {
                    return Err(CliError::config("problem.k", format!("has {} entries, root data has r = {r}", k.len())));
                }
                let k = MultiDegree(k.clone());
                if let Some(nn) = big_n {
                    if nn != k.total() {
                        return Err(CliError::config("problem.N", format!("N = {nn} but |k| = {}", k.total())));
                    }
                }
                k
            }
            (None, Some(nn)) if r == 1 => MultiDegree(vec![nn]),
            (None, Some(_)) => return Err(CliError::config("problem.k", "required when r > 1")),
            (None, None) if r == 1 => MultiDegree(vec![1]),
            (None, None) => return Err(CliError::config("problem.k", "required when r > 1")),
        };
        let pi = match &prob.color_map {
            Some(cm) => {
                if let Some(i) = cm.iter().position(|&c| c == 0 || c > r) {
                    return Err(CliError::config(format!("problem.colorMap[{i}]"), format!("root indices run from 1 to {r}")));
                }
                let pi = ColorMap(cm.iter().map(|c| c - 1).collect());
                pi.validate(&k).map_err(|e| CliError::config("problem.colorMap", e.to_string()))?;
                pi
            }
            None => ColorMap::standard(&k),
        };
        let kappa_src = ov.kappa.clone().or_else(|| raw.kappa.clone()).unwrap_or_else(|| "formal".into());
        let kappa = KappaSetting::parse(&kappa_src, if ov.kappa.is_some() { "--kappa" } else { "kappa" })?;
        let t = raw.tolerances.clone().unwrap_or_default();
        let tol = Tolerances {
            quadrature: positive(t.quadrature.unwrap_or(1e-10), "tolerances.quadrature")?,
            grid_step: positive(t.grid_step.unwrap_or(1e-3), "tolerances.gridStep")?,
            residual: positive(t.residual.unwrap_or(1e-6), "tolerances.residual")?,
        };
        let o = raw.options.clone().unwrap_or_default();
        let n = rd.n();
        let z = match &o.z {
            Some(z) => {
                let z = rationals(z, "options.z")?;
                if z.len() != n {
                    return Err(CliError::config("options.z", format!("needs {n} coordinates, got {}", z.len())));
                }
                for i in 0..n {
                    for j in (i + 1)..n {
                        if z[i] == z[j] {
                            return Err(CliError::config("options.z", format!("z{} = z{}", i + 1, j + 1)));
                        }
                    }
                }
                Some(z)
            }
            None => None,
        };
        let centers = match &o.centers {
            Some(cs) => cs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let v = rationals(c, &format!("options.centers[{i}]"))?;
                    if v.len() != n {
                        return Err(CliError::config(format!("options.centers[{i}]"), format!("needs {n} coordinates")));
                    }
                    Ok(v)
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![(0..n as i64).map(|i| Rational::from_integer(i.into())).collect()],
        };
        let contour = match o.contour {
            Some([a, b]) => {
                if a == 0 || b == 0 || a > n || b > n {
                    return Err(CliError::config("options.contour", format!("endpoints are 1-based indices up to {n}")));
                }
                (a - 1, b - 1)
            }
            None => (0, 1.min(n - 1)),
        };
        let t_star = match &o.t_star {
            Some(s) => Some(parse_rational(s).map_err(|_| CliError::config("options.tStar", format!("`{s}` is not p/q")))?),
            None => None,
        };
        let mut omega = Vec::new();
        for (idx, o) in o.omega.iter().flatten().enumerate() {
            let path = format!("options.omega[{idx}]");
            if o.i == 0 || o.j == 0 || o.i > n || o.j > n || o.i == o.j {
                return Err(CliError::config(path, format!("i and j must be distinct 1-based indices up to {n}")));
            }
            let m = matrix(&o.matrix, &format!("{path}.matrix"))?;
            if m.iter().any(|row| row.len() != m.len()) {
                return Err(CliError::config(format!("{path}.matrix"), "must be square"));
            }
            omega.push((o.i.min(o.j) - 1, o.i.max(o.j) - 1, m));
        }
        let trials = ov.trials.or(raw.trials).unwrap_or(5);
        if trials == 0 {
            return Err(CliError::config("trials", "must be at least 1"));
        }
        Ok(Job {
            rd,
            k,
            pi,
            kappa,
            seed: ov.seed.or(raw.seed).unwrap_or(7),
            trials,
            tol,
            z,
            centers,
            contour,
            t_star,
            max_degree: o.max_degree.unwrap_or(5),
            max_rank: o.max_rank.unwrap_or(3),
            max_points: o.max_points.unwrap_or(3),
            omega,
        })
    }

    pub fn big_n(&self) -> usize {
        self.k.total()
    }

    /// Normalized echo of the effective configuration.
    pub fn echo(&self) -> Value {
        let r = self.rd.r();
        let n = self.rd.n();
        let grid = |f: &dyn Fn(usize, usize) -> String, rows: usize, cols: usize| -> Vec<Vec<String>> {
            (0..rows).map(|i| (0..cols).map(|j| f(i, j)).collect()).collect()
        };
        let rat_vec = |v: &[Rational]| v.iter().map(format_rational).collect::<Vec<_>>();
        json!({
            "algebra": {
                "r": r,
                "n": n,
                "B": grid(&|i, j| format_rational(self.rd.alpha_alpha(i, j)), r, r),
                "muAlpha": grid(&|s, i| format_rational(self.rd.mu_alpha(s, i)), n, r),
                "muMu": grid(&|s, u| format_rational(self.rd.mu_mu(s, u)), n, n),
            },
            "problem": {
                "N": self.big_n(),
                "k": self.k.0,
                "colorMap": self.pi.0.iter().map(|c| c + 1).collect::<Vec<_>>(),
            },
            "kappa": self.kappa.echo(),
            "trials": self.trials,
            "tolerances": {
                "quadrature": self.tol.quadrature,
                "gridStep": self.tol.grid_step,
                "residual": self.tol.residual,
            },
            "options": {
                "z": self.z.as_deref().map(rat_vec),
                "centers": self.centers.iter().map(|c| rat_vec(c)).collect::<Vec<_>>(),
                "contour": [self.contour.0 + 1, self.contour.1 + 1],
                "tStar": self.t_star.as_ref().map(format_rational),
                "maxDegree": self.max_degree,
                "maxRank": self.max_rank,
                "maxPoints": self.max_points,
                "omega": self.omega.iter().map(|(i, j, m)| json!({
                    "i": i + 1,
                    "j": j + 1,
                    "matrix": m.iter().map(|row| rat_vec(row)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            },
        })
    }
}
