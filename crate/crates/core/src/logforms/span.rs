use std::collections::BTreeSet;

use super::{evaluate, evaluate_fiber, EvaluatedForm, LogForm, LogFormError};
use crate::scalars::{ExactMatrix, KappaScalar, Rational, SamplePoint, SeededSampler};

/// Where forms are evaluated: on U_{n,N} itself, or on the fiber over a
/// fixed z (dz-components dropped).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalMode {
    Full,
    Fiber(Vec<Rational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ambient {
    pub n: usize,
    pub big_n: usize,
    pub mode: EvalMode,
}

impl Ambient {
    pub fn full(n: usize, big_n: usize) -> Self {
        Ambient { n, big_n, mode: EvalMode::Full }
    }

    pub fn fiber(z: Vec<Rational>, big_n: usize) -> Self {
        Ambient { n: z.len(), big_n, mode: EvalMode::Fiber(z) }
    }

    /// Number of covector coordinates.
    pub fn coordinates(&self) -> usize {
        match self.mode {
            EvalMode::Full => self.n + self.big_n,
            EvalMode::Fiber(_) => self.big_n,
        }
    }

    /// Default number of sample points: coordinates + 4.
    pub fn default_trials(&self) -> usize {
        self.coordinates() + 4
    }

    /// Enough points to detect a span of `forms` degree-`degree` forms:
    /// the default, or more when one point carries too few exterior slots.
    pub fn trials_for(&self, forms: usize, degree: usize) -> usize {
        let slots = binomial(self.coordinates(), degree).max(1);
        self.default_trials().max(forms.div_ceil(slots) + 4)
    }

    pub fn sample(&self, s: &mut SeededSampler) -> Result<SamplePoint, LogFormError> {
        Ok(match &self.mode {
            EvalMode::Full => s.sample_point(self.n, self.big_n)?,
            EvalMode::Fiber(z) => s.sample_fiber_point(z, self.big_n)?,
        })
    }

    pub fn eval(&self, w: &LogForm, p: &SamplePoint) -> EvaluatedForm {
        match self.mode {
            EvalMode::Full => evaluate(w, p),
            EvalMode::Fiber(_) => evaluate_fiber(w, p),
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Stacks evaluations at each point into rows (one row per point and
/// exterior mask); one column per form.
fn stacked(evals: &[Vec<EvaluatedForm>], cols: usize) -> ExactMatrix {
    let mut rows: Vec<Vec<KappaScalar>> = Vec::new();
    for at_point in evals {
        let masks: BTreeSet<u64> = at_point.iter().flat_map(|e| e.terms.keys().copied()).collect();
        for m in masks {
            rows.push(
                at_point
                    .iter()
                    .map(|e| e.terms.get(&m).cloned().unwrap_or_else(KappaScalar::zero))
                    .collect(),
            );
        }
    }
    ExactMatrix::from_rows(rows, cols)
}

fn sample_points(amb: &Ambient, s: &mut SeededSampler, trials: usize) -> Result<Vec<SamplePoint>, LogFormError> {
    (0..trials).map(|_| amb.sample(s)).collect()
}

/// Evaluations at sampled points, stacked as in `stacked`. Starts with
/// `trials` points and keeps adding batches of `default_trials` points until
/// a batch leaves the rank unchanged: a single point can carry far fewer
/// independent rows than it has exterior slots (skew forms, for instance).
pub fn saturated_evaluations(
    amb: &Ambient,
    s: &mut SeededSampler,
    trials: usize,
    cols: usize,
    eval: impl Fn(&SamplePoint) -> Vec<EvaluatedForm>,
) -> Result<(Vec<SamplePoint>, Vec<Vec<EvaluatedForm>>, ExactMatrix), LogFormError> {
    let mut pts = sample_points(amb, s, trials)?;
    let mut evals: Vec<Vec<EvaluatedForm>> = pts.iter().map(&eval).collect();
    let mut m = stacked(&evals, cols);
    let mut rank = m.rank();
    while rank < cols {
        let more = sample_points(amb, s, amb.default_trials())?;
        evals.extend(more.iter().map(&eval));
        pts.extend(more);
        m = stacked(&evals, cols);
        let r = m.rank();
        if r == rank {
            break;
        }
        rank = r;
    }
    Ok((pts, evals, m))
}

/// Evaluation matrix of `forms` at (at least) `trials` sampled points.
pub fn evaluation_matrix(
    forms: &[LogForm],
    amb: &Ambient,
    s: &mut SeededSampler,
    trials: usize,
) -> Result<ExactMatrix, LogFormError> {
    Ok(saturated_evaluations(amb, s, trials, forms.len(), |p| forms.iter().map(|w| amb.eval(w, p)).collect())?.2)
}

/// Dimension of the Q(κ)-span of `forms`.
pub fn span_dim(forms: &[LogForm], amb: &Ambient, s: &mut SeededSampler, trials: usize) -> Result<usize, LogFormError> {
    Ok(evaluation_matrix(forms, amb, s, trials)?.rank())
}

/// Linear relations Σ c_j forms_j = 0, each certified at 3 fresh points.
pub fn relations(
    forms: &[LogForm],
    amb: &Ambient,
    s: &mut SeededSampler,
    trials: usize,
) -> Result<Vec<Vec<KappaScalar>>, LogFormError> {
    let m = evaluation_matrix(forms, amb, s, trials)?;
    let rels = m.kernel_basis();
    for (idx, rel) in rels.iter().enumerate() {
        let combo = combine(forms, rel);
        for _ in 0..3 {
            let p = amb.sample(s)?;
            if !amb.eval(&combo, &p).is_zero() {
                return Err(LogFormError::UnluckySample { what: format!("relation {idx}"), seed: s.seed() });
            }
        }
    }
    Ok(rels)
}

pub fn combine(forms: &[LogForm], coeffs: &[KappaScalar]) -> LogForm {
    let mut out = LogForm::zero();
    for (w, c) in forms.iter().zip(coeffs) {
        if !c.is_zero() {
            out = out.add(&w.scale(c));
        }
    }
    out
}

/// Finite-dimensional space spanned by some log forms, with a chosen basis
/// (an independent subfamily) and exact coordinates through evaluation.
#[derive(Clone, Debug)]
pub struct FormSpace {
    pub ambient: Ambient,
    pub spanning: Vec<LogForm>,
    /// Indices into `spanning` of the chosen basis.
    pub basis_idx: Vec<usize>,
    points: Vec<SamplePoint>,
    basis_evals: Vec<Vec<EvaluatedForm>>,
    /// (point, mask) pairs whose values determine coordinates.
    pivot_rows: Vec<(usize, u64)>,
    inverse: ExactMatrix,
    certifier: SeededSampler,
}

impl FormSpace {
    pub fn new(spanning: Vec<LogForm>, ambient: Ambient, s: &mut SeededSampler, trials: usize) -> Result<Self, LogFormError> {
        let (points, evals, m) =
            saturated_evaluations(&ambient, s, trials, spanning.len(), |p| spanning.iter().map(|w| ambient.eval(w, p)).collect())?;
        let basis_idx = m.pivot_columns();
        // row labels matching `stacked`
        let mut row_keys: Vec<(usize, u64)> = Vec::new();
        for (pi, at_point) in evals.iter().enumerate() {
            let masks: BTreeSet<u64> = at_point.iter().flat_map(|e| e.terms.keys().copied()).collect();
            row_keys.extend(masks.into_iter().map(|mk| (pi, mk)));
        }
        let restricted = m.select_columns(&basis_idx);
        let rows_sel = restricted.transpose().pivot_columns();
        let square = restricted.select_rows(&rows_sel);
        let inverse = square.inverse().expect("pivot rows of a full-rank block are invertible");
        let basis_evals = evals.iter().map(|at| basis_idx.iter().map(|&j| at[j].clone()).collect()).collect();
        Ok(FormSpace {
            ambient,
            spanning,
            basis_idx,
            points,
            basis_evals,
            pivot_rows: rows_sel.iter().map(|&r| row_keys[r]).collect(),
            inverse,
            certifier: s.child(0xC0FF_EE00),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis_idx.len()
    }

    pub fn basis(&self) -> Vec<LogForm> {
        self.basis_idx.iter().map(|&i| self.spanning[i].clone()).collect()
    }

    pub fn basis_form(&self, i: usize) -> &LogForm {
        &self.spanning[self.basis_idx[i]]
    }

    /// Coordinates of `w` in the chosen basis. Fails with `NotInSpan` if the
    /// stored evaluations disagree and `UnluckySample` if only a fresh point
    /// disagrees.
    pub fn coords(&mut self, w: &LogForm) -> Result<Vec<KappaScalar>, LogFormError> {
        let evals: Vec<EvaluatedForm> = self.points.iter().map(|p| self.ambient.eval(w, p)).collect();
        let v: Vec<KappaScalar> = self
            .pivot_rows
            .iter()
            .map(|&(pi, mk)| evals[pi].terms.get(&mk).cloned().unwrap_or_else(KappaScalar::zero))
            .collect();
        let c = self.inverse.mul_vec(&v);
        for (pi, e) in evals.iter().enumerate() {
            let mut r = e.clone();
            for (j, cj) in c.iter().enumerate() {
                if !cj.is_zero() {
                    r = r.sub(&self.basis_evals[pi][j].scale(cj));
                }
            }
            if !r.is_zero() {
                return Err(LogFormError::NotInSpan(w.to_string()));
            }
        }
        let residual = combine(&self.basis(), &c).sub(w);
        for _ in 0..2 {
            let p = self.ambient.sample(&mut self.certifier)?;
            if !self.ambient.eval(&residual, &p).is_zero() {
                return Err(LogFormError::UnluckySample { what: w.to_string(), seed: self.certifier.seed() });
            }
        }
        Ok(c)
    }
}
