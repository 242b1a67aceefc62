use super::{
    alt_colored, build_w_a, build_w_b, multi_indices, omega_coulomb, Ambient, FormSpace, LogForm, LogFormError,
    LogGenerator,
};
use crate::chevalley::{homology_dims, Direction, GradedComplex};
use crate::liealg::{ColorMap, MultiDegree, RootData};
use crate::scalars::{ExactMatrix, KappaScalar, Rational, SeededSampler};

/// A cochain complex of fiber forms A^d(z), d = first_degree.., with
/// differential (1/κ)ω(z)∧ written in each space's chosen basis.
#[derive(Clone, Debug)]
pub struct FiberComplex {
    pub first_degree: usize,
    pub spaces: Vec<FormSpace>,
    pub omega: LogForm,
    pub complex: GradedComplex,
}

impl FiberComplex {
    /// Builds the complex from spanning families in consecutive degrees.
    pub fn from_families(
        families: Vec<Vec<LogForm>>,
        first_degree: usize,
        omega: LogForm,
        z: &[Rational],
        big_n: usize,
        s: &mut SeededSampler,
    ) -> Result<Self, LogFormError> {
        let amb = Ambient::fiber(z.to_vec(), big_n);
        let mut spaces = Vec::with_capacity(families.len());
        for (i, fam) in families.into_iter().enumerate() {
            let trials = amb.trials_for(fam.len(), first_degree + i);
            let mut child = s.child(i as u64);
            spaces.push(FormSpace::new(fam, amb.clone(), &mut child, trials)?);
        }
        let mut maps = Vec::new();
        for i in 0..spaces.len().saturating_sub(1) {
            let (lo, hi) = spaces.split_at_mut(i + 1);
            let src = &lo[i];
            let dst = &mut hi[0];
            let cols = (0..src.dim())
                .map(|j| dst.coords(&omega.wedge(src.basis_form(j))))
                .collect::<Result<Vec<_>, _>>()?;
            maps.push(ExactMatrix::from_columns(&cols, dst.dim()));
        }
        let dims = spaces.iter().map(|sp| sp.dim()).collect();
        let labels = spaces.iter().map(|sp| sp.basis().iter().map(|w| w.to_string()).collect()).collect();
        let complex = GradedComplex::new(Direction::Cohomological, dims, maps, labels);
        if complex.check_square_zero().is_err() {
            return Err(LogFormError::Shape("fiber differential does not square to zero".into()));
        }
        Ok(FiberComplex { first_degree, spaces, omega, complex })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.complex.dims.clone()
    }

    /// W^d = H^d dims over Q(κ), indexed from `first_degree`.
    pub fn cohomology_dims(&self) -> Vec<usize> {
        homology_dims(&self.complex)
    }

    /// Cohomology dims at κ = κ₀ (None at a pole of some entry).
    pub fn cohomology_dims_at(&self, k0: &Rational) -> Option<Vec<usize>> {
        Some(homology_dims(&self.complex.specialize(k0)?))
    }
}

/// (1/κ)·(fiber part of ω).
fn fiber_omega(rd: &RootData, pi: &ColorMap) -> LogForm {
    omega_coulomb(rd, pi).project_fiber().scale(&KappaScalar::kappa().inv().unwrap())
}

/// The w-model for sl2: A^{N−1}(z) spanned by the fiber restrictions of the
/// w_b, A^N(z) by those of the w_a.
pub fn aomoto_complex(
    rd: &RootData,
    big_n: usize,
    z: &[Rational],
    s: &mut SeededSampler,
) -> Result<FiberComplex, LogFormError> {
    if rd.r() != 1 {
        return Err(LogFormError::Shape(format!("w-forms need r = 1, root data has r = {}", rd.r())));
    }
    if big_n == 0 {
        return Err(LogFormError::Shape("N must be at least 1".into()));
    }
    let n = rd.n();
    if z.len() != n {
        return Err(LogFormError::Shape(format!("z has {} coordinates, expected {n}", z.len())));
    }
    let wb = multi_indices(n, big_n - 1).iter().map(|b| build_w_b(b).project_fiber()).collect();
    let wa = multi_indices(n, big_n).iter().map(|a| build_w_a(a).project_fiber()).collect();
    let pi = ColorMap::standard(&MultiDegree(vec![big_n]));
    FiberComplex::from_families(vec![wb, wa], big_n - 1, fiber_omega(rd, &pi), z, big_n, s)
}

/// The fiber generators dt_a/(t_a − z_i) and dln(t_a − t_b).
fn fiber_generators(n: usize, big_n: usize) -> Vec<LogGenerator> {
    let mut g = Vec::new();
    for i in 0..n {
        for a in 0..big_n {
            g.push(LogGenerator::FiberZT(i, a));
        }
    }
    for a in 0..big_n {
        for b in (a + 1)..big_n {
            g.push(LogGenerator::TT(a, b));
        }
    }
    g
}

/// All fiber log monomials of degree `d`.
pub fn fiber_monomials(n: usize, big_n: usize, d: usize) -> Vec<LogForm> {
    monomials_from(&fiber_generators(n, big_n), d)
}

/// All log monomials of degree `d` on U_{n,N}.
pub fn log_monomials(n: usize, big_n: usize, d: usize) -> Vec<LogForm> {
    let mut gens: Vec<LogGenerator> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            gens.push(LogGenerator::ZZ(i, j));
        }
    }
    for i in 0..n {
        for a in 0..big_n {
            gens.push(LogGenerator::ZT(i, a));
        }
    }
    for a in 0..big_n {
        for b in (a + 1)..big_n {
            gens.push(LogGenerator::TT(a, b));
        }
    }
    monomials_from(&gens, d)
}

fn monomials_from(gens: &[LogGenerator], d: usize) -> Vec<LogForm> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = Vec::with_capacity(d);
    fn rec(gens: &[LogGenerator], d: usize, start: usize, idx: &mut Vec<usize>, out: &mut Vec<LogForm>) {
        if idx.len() == d {
            out.push(LogForm::monomial(idx.iter().map(|&i| gens[i]).collect(), KappaScalar::one()));
            return;
        }
        for i in start..gens.len() {
            idx.push(i);
            rec(gens, d, i + 1, idx, out);
            idx.pop();
        }
    }
    rec(gens, d, 0, &mut idx, &mut out);
    out
}

/// Drops zeros and forms proportional (by ±1) to an earlier one.
pub fn dedup_forms(forms: Vec<LogForm>) -> Vec<LogForm> {
    let mut out: Vec<LogForm> = Vec::new();
    for w in forms {
        if w.is_zero() {
            continue;
        }
        let neg = w.scale(&KappaScalar::from_int(-1));
        if !out.iter().any(|u| *u == w || *u == neg) {
            out.push(w);
        }
    }
    out
}

/// The Σ_π-skew part of all fiber log forms, degrees 0..=N.
pub fn skew_fiber_complex(
    rd: &RootData,
    pi: &ColorMap,
    z: &[Rational],
    s: &mut SeededSampler,
) -> Result<FiberComplex, LogFormError> {
    let n = rd.n();
    let big_n = pi.len();
    if z.len() != n {
        return Err(LogFormError::Shape(format!("z has {} coordinates, expected {n}", z.len())));
    }
    let families = (0..=big_n)
        .map(|d| dedup_forms(fiber_monomials(n, big_n, d).iter().map(|m| alt_colored(m, pi)).collect()))
        .collect();
    FiberComplex::from_families(families, 0, fiber_omega(rd, pi), z, big_n, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::int;

    #[test]
    fn two_points_one_t() {
        let rd = RootData::sl2(&[int(1), int(2)]).unwrap();
        let z = [int(0), int(1)];
        let c = aomoto_complex(&rd, 1, &z, &mut SeededSampler::new(7)).unwrap();
        assert_eq!(c.dims(), vec![1, 2]);
        assert_eq!(c.cohomology_dims(), vec![0, 1]);
    }
}
