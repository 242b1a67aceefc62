use std::collections::BTreeMap;

use kzh_core::connections::{CheckResult, VerificationReport};
use kzh_core::liealg::{casimir_sl2, MultiDegree, RootData};
use kzh_core::scalars::{format_rational, ExactMatrix, KappaScalar, Rational, SeededSampler};
use num_traits::One;

use crate::AnalyticError;

/// Linear forms L0 = z1 − z2, L1 = t − z1, L2 = t − z2.
const VARS: [&str; 3] = ["z1", "z2", "t"];
/// ∂L_k/∂v for v = z1, z2, t.
const DL: [[i32; 3]; 3] = [[1, -1, 0], [-1, 0, -1], [0, 1, 1]];

/// Laurent polynomial Σ c_e L0^{e0} L1^{e1} L2^{e2} over Q(κ). It stands
/// for Φ times itself; derivatives use the formal rule ∂Φ = Φ·∂ln Φ.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Laurent {
    pub terms: BTreeMap<[i32; 3], KappaScalar>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(e: [i32; 3], c: KappaScalar) -> Self {
        let mut l = Self::zero();
        l.add_term(e, c);
        l
    }

    fn add_term(&mut self, e: [i32; 3], c: KappaScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(KappaScalar::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &o.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &KappaScalar) -> Self {
        let mut out = Self::zero();
        for (&e, v) in &self.terms {
            out.add_term(e, v * c);
        }
        out
    }

    fn shift(&self, k: usize, by: i32) -> Self {
        let mut out = Self::zero();
        for (&e, v) in &self.terms {
            let mut e2 = e;
            e2[k] += by;
            out.add_term(e2, v.clone());
        }
        out
    }

    /// ∂_v(Φ·R)/Φ = ∂_v R + R·Σ_k β_k ∂_vL_k/L_k.
    fn derive(&self, v: usize, beta: &[KappaScalar; 3]) -> Self {
        let mut out = Self::zero();
        for (&e, c) in &self.terms {
            for k in 0..3 {
                let dl = DL[v][k];
                if dl == 0 {
                    continue;
                }
                let coeff = (&KappaScalar::from_int(e[k] as i64) + &beta[k]) * KappaScalar::from_int(dl as i64);
                let mut e2 = e;
                e2[k] -= 1;
                out.add_term(e2, c * &coeff);
            }
        }
        out
    }

    pub fn eval(&self, l: &[Rational; 3]) -> KappaScalar {
        let mut acc = KappaScalar::zero();
        for (e, c) in &self.terms {
            let mut v = Rational::one();
            for k in 0..3 {
                let p = if e[k] >= 0 { l[k].clone() } else { Rational::one() / &l[k] };
                for _ in 0..e[k].unsigned_abs() {
                    v *= &p;
                }
            }
            acc = &acc + &c.scale_rational(&v);
        }
        acc
    }
}

/// Vector-valued form in dz1, dz2, dt (bits 0, 1, 2).
#[derive(Clone, Debug, Default)]
struct VForm {
    comps: BTreeMap<u8, Vec<Laurent>>,
}

fn wedge_sign(bit: u8, mask: u8) -> i64 {
    if (mask & ((1 << bit) - 1)).count_ones() % 2 == 1 {
        -1
    } else {
        1
    }
}

impl VForm {
    fn add_at(&mut self, mask: u8, v: &[Laurent]) {
        let slot = self.comps.entry(mask).or_insert_with(|| vec![Laurent::zero(); v.len()]);
        for (s, x) in slot.iter_mut().zip(v) {
            *s = s.add(x);
        }
    }

    fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&m, v) in &o.comps {
            let neg: Vec<Laurent> = v.iter().map(|x| x.scale(&KappaScalar::from_int(-1))).collect();
            out.add_at(m, &neg);
        }
        out
    }

    fn scale(&self, c: i64) -> Self {
        let k = KappaScalar::from_int(c);
        VForm { comps: self.comps.iter().map(|(&m, v)| (m, v.iter().map(|x| x.scale(&k)).collect())).collect() }
    }

    /// Σ_{v ∈ vars} dv ∧ ∂_v.
    fn d(&self, vars: &[usize], beta: &[KappaScalar; 3]) -> Self {
        let mut out = VForm::default();
        for (&mask, v) in &self.comps {
            for &var in vars {
                let bit = var as u8;
                if mask & (1 << bit) != 0 {
                    continue;
                }
                let s = KappaScalar::from_int(wedge_sign(bit, mask));
                let dv: Vec<Laurent> = v.iter().map(|x| x.derive(var, beta).scale(&s)).collect();
                out.add_at(mask | (1 << bit), &dv);
            }
        }
        out
    }

    /// A ∧ self for A = Σ_i (M_i / L0) dz_i.
    fn connection(&self, mats: &[ExactMatrix; 2]) -> Self {
        let mut out = VForm::default();
        for (&mask, v) in &self.comps {
            for (i, m) in mats.iter().enumerate() {
                let bit = i as u8;
                if mask & (1 << bit) != 0 {
                    continue;
                }
                let s = KappaScalar::from_int(wedge_sign(bit, mask));
                let applied: Vec<Laurent> = (0..m.rows())
                    .map(|r| {
                        (0..m.cols())
                            .fold(Laurent::zero(), |acc, c| acc.add(&v[c].scale(m.get(r, c))))
                            .shift(0, -1)
                            .scale(&s)
                    })
                    .collect();
                out.add_at(mask | (1 << bit), &applied);
            }
        }
        out
    }

    /// Nonzero values at a point, attributed to covector and component.
    fn nonzero_at(&self, l: &[Rational; 3], label: &str) -> Vec<String> {
        let mut out = Vec::new();
        for (&mask, v) in &self.comps {
            for (r, x) in v.iter().enumerate() {
                let val = x.eval(l);
                if !val.is_zero() {
                    let cov: Vec<String> = (0..3).filter(|b| mask & (1 << b) != 0).map(|b| format!("d{}", VARS[b])).collect();
                    out.push(format!("{label}: component {} of {} = {val}", r + 1, cov.join("^")));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct DualKzReport {
    /// Ω_12 on the basis (f v1 ⊗ v2, v1 ⊗ f v2), images as columns.
    pub omega: ExactMatrix,
    pub checks: VerificationReport,
    /// d'ω^{01} − d_t ω^{10} with the plain t-differential (no Koszul sign).
    pub literal_dt_residual_zero: bool,
    /// The coordinate form −∂_{z2}J1 + ∂_{z1}J2 − ΩJ2/(κ(z1−z2)) + ΩJ1/(κ(z1−z2)).
    pub printed_coordinate_residual_zero: bool,
    pub points: Vec<[String; 3]>,
}

/// Exact check of the two-point, one-root dual KZ system: ω^{01} = Φ(L1^{−1}, L2^{−1})dt,
/// ω^{10} = J1 dz1 + J2 dz2 with J1 = (−Φ/L1, 0), J2 = (0, −Φ/L2),
/// d' = d_z + A with A = −(1/κ)Ω(dz1 − dz2)/(z1 − z2) and d'' = (−1)^p d_t
/// on forms of z-degree p.
pub fn dual_kz_check(rd: &RootData, s: &mut SeededSampler, count: usize) -> Result<DualKzReport, AnalyticError> {
    if rd.r() != 1 || rd.n() != 2 {
        return Err(AnalyticError::Unsupported("the dual KZ check is the n = 2, r = 1 example".into()));
    }
    let kappa_inv = KappaScalar::kappa().inv().expect("kappa is nonzero");
    let omega = casimir_sl2(rd, 0, 1, &MultiDegree(vec![1]))?;
    let beta = [
        KappaScalar::from_rational(rd.mu_mu(0, 1).clone()) * &kappa_inv,
        KappaScalar::from_rational(-rd.mu_alpha(0, 0).clone()) * &kappa_inv,
        KappaScalar::from_rational(-rd.mu_alpha(1, 0).clone()) * &kappa_inv,
    ];
    let a1 = omega.scale(&-kappa_inv.clone());
    let a2 = omega.scale(&kappa_inv);
    let one = KappaScalar::one();
    let neg = KappaScalar::from_int(-1);

    let mut w01 = VForm::default();
    w01.add_at(0b100, &[Laurent::monomial([0, -1, 0], one.clone()), Laurent::monomial([0, 0, -1], one.clone())]);
    let mut w10 = VForm::default();
    w10.add_at(0b001, &[Laurent::monomial([0, -1, 0], neg.clone()), Laurent::zero()]);
    w10.add_at(0b010, &[Laurent::zero(), Laurent::monomial([0, 0, -1], neg.clone())]);

    let dz = [0usize, 1];
    let dt = [2usize];
    let mats = [a1.clone(), a2.clone()];
    let d_prime = |f: &VForm| f.d(&dz, &beta).add_conn(f, &mats);
    let vertical = w01.d(&dt, &beta);
    let mixed = d_prime(&w01).sub(&w10.d(&dt, &beta).scale(-1));
    let literal = d_prime(&w01).sub(&w10.d(&dt, &beta));
    let dual = d_prime(&w10);
    // the coordinate expression as printed, coefficient of dz1^dz2
    let j1 = &w10.comps[&0b001];
    let j2 = &w10.comps[&0b010];
    let printed: Vec<Laurent> = (0..2)
        .map(|r| {
            let mut acc = j1[r].derive(1, &beta).scale(&neg).add(&j2[r].derive(0, &beta));
            for c in 0..2 {
                let om = omega.get(r, c) * &kappa_inv;
                acc = acc.add(&j2[c].shift(0, -1).scale(&-om.clone())).add(&j1[c].shift(0, -1).scale(&om));
            }
            acc
        })
        .collect();
    let mut printed_form = VForm::default();
    printed_form.add_at(0b011, &printed);

    let mut fails = [Vec::new(), Vec::new(), Vec::new()];
    let mut literal_zero = true;
    let mut printed_zero = true;
    let mut points = Vec::new();
    for idx in 0..count {
        let p = s.sample_point(2, 1)?;
        let l = [&p.z[0] - &p.z[1], &p.t[0] - &p.z[0], &p.t[0] - &p.z[1]];
        let label = format!("point {} (z1={}, z2={}, t={})", idx + 1, p.z[0], p.z[1], p.t[0]);
        fails[0].extend(vertical.nonzero_at(&l, &label));
        fails[1].extend(mixed.nonzero_at(&l, &label));
        fails[2].extend(dual.nonzero_at(&l, &label));
        literal_zero &= literal.nonzero_at(&l, &label).is_empty();
        printed_zero &= printed_form.nonzero_at(&l, &label).is_empty();
        points.push([format_rational(&p.z[0]), format_rational(&p.z[1]), format_rational(&p.t[0])]);
    }
    let [f0, f1, f2] = fails;
    let mut checks = VerificationReport::default();
    checks.push(CheckResult::from_failures("vertical_closed", f0));
    checks.push(CheckResult::from_failures("horizontal_equals_vertical", f1));
    checks.push(CheckResult::from_failures("dual_kz", f2));
    Ok(DualKzReport {
        omega,
        checks,
        literal_dt_residual_zero: literal_zero,
        printed_coordinate_residual_zero: printed_zero,
        points,
    })
}

impl VForm {
    fn add_conn(self, f: &VForm, mats: &[ExactMatrix; 2]) -> Self {
        let c = f.connection(mats);
        let mut out = self;
        for (&m, v) in &c.comps {
            out.add_at(m, v);
        }
        out
    }
}
