use super::ConnectionError;
use crate::chevalley::{homology_dims, Direction, GradedComplex};
use crate::scalars::{ExactMatrix, KappaScalar};

fn unit(dim: usize, i: usize) -> Vec<KappaScalar> {
    let mut v = vec![KappaScalar::zero(); dim];
    v[i] = KappaScalar::one();
    v
}

/// Representatives of H^j of a cochain complex and the reduction of
/// cycles to class coordinates.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    pub dim: usize,
    pub reps: Vec<Vec<KappaScalar>>,
    boundaries: usize,
    solver: ExactMatrix,
}

impl CohomologyBasis {
    pub fn new(c: &GradedComplex, j: usize) -> Self {
        let dim = c.dims[j];
        let cycles: Vec<Vec<KappaScalar>> = match c.outgoing(j) {
            Some(m) => m.kernel_basis(),
            None => (0..dim).map(|i| unit(dim, i)).collect(),
        };
        let boundaries: Vec<Vec<KappaScalar>> = match c.incoming(j) {
            Some(m) => m.pivot_columns().into_iter().map(|k| m.column(k)).collect(),
            None => Vec::new(),
        };
        let nb = boundaries.len();
        let mut cols = boundaries;
        cols.extend(cycles);
        let all = ExactMatrix::from_columns(&cols, dim);
        let keep = all.pivot_columns();
        let reps: Vec<Vec<KappaScalar>> = keep.iter().filter(|&&k| k >= nb).map(|&k| cols[k].clone()).collect();
        let chosen: Vec<Vec<KappaScalar>> = keep.iter().map(|&k| cols[k].clone()).collect();
        CohomologyBasis { dim, reps, boundaries: nb, solver: ExactMatrix::from_columns(&chosen, dim) }
    }

    pub fn rank(&self) -> usize {
        self.reps.len()
    }

    /// Class coordinates of a cycle (None if it is not a cycle combination).
    pub fn class_of(&self, z: &[KappaScalar]) -> Option<Vec<KappaScalar>> {
        if self.solver.cols() == 0 {
            return z.iter().all(|x| x.is_zero()).then(Vec::new);
        }
        Some(self.solver.solve(z)?[self.boundaries..].to_vec())
    }
}

/// A cochain complex written in a basis adapted to a decreasing filtration
/// F^0 = C ⊃ F^1 ⊃ …; `levels[j][i]` is the largest p with basis vector i
/// of degree j in F^p. Basis vectors are sorted by level.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    pub complex: GradedComplex,
    pub levels: Vec<Vec<usize>>,
    /// Adapted basis vectors in the input coordinates, per degree.
    pub change_of_basis: Vec<ExactMatrix>,
}

/// E_1 data: H^j(Gr^p), the connecting maps H^j(Gr^p) → H^{j+1}(Gr^{p+1}),
/// and the complexes E^i: H^i(Gr^0) → H^{i+1}(Gr^1) → ….
#[derive(Clone, Debug)]
pub struct E1Page {
    /// graded_dims[p][j] = dim H^j(Gr^p).
    pub graded_dims: Vec<Vec<usize>>,
    pub complexes: Vec<GradedComplex>,
}

impl E1Page {
    pub fn cohomology(&self) -> Vec<Vec<usize>> {
        self.complexes.iter().map(homology_dims).collect()
    }
}

impl FilteredComplex {
    /// `levels` must already be adapted: d never lowers the level.
    pub fn from_levels(complex: GradedComplex, levels: Vec<Vec<usize>>) -> Result<Self, ConnectionError> {
        let change_of_basis = complex.dims.iter().map(|&d| ExactMatrix::identity(d)).collect();
        Self::check_and_sort(complex, levels, change_of_basis)
    }

    /// Builds an adapted basis from subspaces: `filtration[j][p - 1]` spans
    /// F^p C^j (p ≥ 1) as column vectors in the input basis.
    pub fn from_subspaces(
        complex: GradedComplex,
        filtration: Vec<Vec<Vec<Vec<KappaScalar>>>>,
    ) -> Result<Self, ConnectionError> {
        if complex.direction != Direction::Cohomological {
            return Err(ConnectionError::Shape("filtered complexes are cochain complexes".into()));
        }
        let mut levels = Vec::new();
        let mut bases = Vec::new();
        for (j, &dim) in complex.dims.iter().enumerate() {
            let steps = filtration.get(j).cloned().unwrap_or_default();
            let mut chosen: Vec<Vec<KappaScalar>> = Vec::new();
            let mut lv = Vec::new();
            let all: Vec<Vec<KappaScalar>> = (0..dim).map(|i| unit(dim, i)).collect();
            for p in (0..=steps.len()).rev() {
                let span = if p == 0 { &all } else { &steps[p - 1] };
                if span.iter().any(|v| v.len() != dim) {
                    return Err(ConnectionError::Shape(format!("filtration vector of wrong length in degree {j}")));
                }
                let r = ExactMatrix::from_columns(span, dim).rank();
                let mut cols = chosen.clone();
                cols.extend(span.iter().cloned());
                let m = ExactMatrix::from_columns(&cols, dim);
                let piv = m.pivot_columns();
                if piv.len() != r {
                    return Err(ConnectionError::Shape(format!("F^{} is not contained in F^{p} in degree {j}", p + 1)));
                }
                let nb = chosen.len();
                for k in piv.into_iter().filter(|&k| k >= nb) {
                    lv.push(p);
                    chosen.push(cols[k].clone());
                }
            }
            levels.push(lv);
            bases.push(ExactMatrix::from_columns(&chosen, dim));
        }
        let mut maps = Vec::new();
        for (j, d) in complex.maps.iter().enumerate() {
            let inv = bases[j + 1].inverse().expect("adapted basis is a basis");
            maps.push(inv.mul(d).mul(&bases[j]));
        }
        let adapted = GradedComplex::new(Direction::Cohomological, complex.dims.clone(), maps, complex.labels.clone());
        Self::check_and_sort(adapted, levels, bases)
    }

    fn check_and_sort(
        complex: GradedComplex,
        levels: Vec<Vec<usize>>,
        bases: Vec<ExactMatrix>,
    ) -> Result<Self, ConnectionError> {
        // sort each degree by level
        let orders: Vec<Vec<usize>> = levels
            .iter()
            .map(|lv| {
                let mut o: Vec<usize> = (0..lv.len()).collect();
                o.sort_by_key(|&i| (lv[i], i));
                o
            })
            .collect();
        let levels: Vec<Vec<usize>> = levels.iter().zip(&orders).map(|(lv, o)| o.iter().map(|&i| lv[i]).collect()).collect();
        let maps: Vec<ExactMatrix> = complex
            .maps
            .iter()
            .enumerate()
            .map(|(j, m)| m.select_rows(&orders[j + 1]).select_columns(&orders[j]))
            .collect();
        for (j, m) in maps.iter().enumerate() {
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    if levels[j + 1][r] < levels[j][c] && !m.get(r, c).is_zero() {
                        return Err(ConnectionError::Shape(format!("differential lowers the filtration in degree {j}")));
                    }
                }
            }
        }
        let labels = complex
            .labels
            .iter()
            .zip(&orders)
            .map(|(l, o)| if l.len() == o.len() { o.iter().map(|&i| l[i].clone()).collect() } else { l.clone() })
            .collect();
        let change_of_basis = bases.iter().zip(&orders).map(|(b, o)| b.select_columns(o)).collect();
        Ok(FilteredComplex {
            complex: GradedComplex::new(Direction::Cohomological, complex.dims, maps, labels),
            levels,
            change_of_basis,
        })
    }

    pub fn max_level(&self) -> usize {
        self.levels.iter().flatten().copied().max().unwrap_or(0)
    }

    fn at_level(&self, j: usize, p: usize) -> Vec<usize> {
        (0..self.levels[j].len()).filter(|&i| self.levels[j][i] == p).collect()
    }

    /// Gr^p = F^p/F^{p+1} with the induced differential.
    pub fn graded_piece(&self, p: usize) -> GradedComplex {
        let idx: Vec<Vec<usize>> = (0..self.levels.len()).map(|j| self.at_level(j, p)).collect();
        let maps = self
            .complex
            .maps
            .iter()
            .enumerate()
            .map(|(j, m)| m.select_rows(&idx[j + 1]).select_columns(&idx[j]))
            .collect();
        GradedComplex::new(Direction::Cohomological, idx.iter().map(|v| v.len()).collect(), maps, Vec::new())
    }

    /// Connecting map H^j(Gr^p) → H^{j+1}(Gr^{p+1}) of
    /// 0 → Gr^{p+1} → F^p/F^{p+2} → Gr^p → 0.
    fn connecting(&self, p: usize, j: usize, src: &CohomologyBasis, dst: &CohomologyBasis) -> ExactMatrix {
        let from = self.at_level(j, p);
        let to = self.at_level(j + 1, p + 1);
        let d = &self.complex.maps[j];
        let block = d.select_rows(&to).select_columns(&from);
        let cols: Vec<Vec<KappaScalar>> = src
            .reps
            .iter()
            .map(|z| dst.class_of(&block.mul_vec(z)).expect("image of a Gr^p cycle is a Gr^{p+1} cycle"))
            .collect();
        ExactMatrix::from_columns(&cols, dst.rank())
    }

    /// Differential C^j → C^{j+1} in the input coordinates.
    pub fn input_map(&self, j: usize) -> ExactMatrix {
        let inv = self.change_of_basis[j].inverse().expect("adapted basis is a basis");
        self.change_of_basis[j + 1].mul(&self.complex.maps[j]).mul(&inv)
    }

    pub fn piece_cohomology(&self, p: usize, j: usize) -> CohomologyBasis {
        CohomologyBasis::new(&self.graded_piece(p), j)
    }

    /// Map H^j(Gr^p) → H^j(Gr^p) induced by a filtered map `h` given in the
    /// input coordinates of both complexes.
    pub fn induced_map(src: &Self, tgt: &Self, h: &ExactMatrix, p: usize, j: usize) -> ExactMatrix {
        let inv = tgt.change_of_basis[j].inverse().expect("adapted basis is a basis");
        let adapted = inv.mul(h).mul(&src.change_of_basis[j]);
        let block = adapted.select_rows(&tgt.at_level(j, p)).select_columns(&src.at_level(j, p));
        let hs = src.piece_cohomology(p, j);
        let ht = tgt.piece_cohomology(p, j);
        let cols: Vec<Vec<KappaScalar>> = hs
            .reps
            .iter()
            .map(|z| ht.class_of(&block.mul_vec(z)).expect("a filtered chain map sends cycles to cycles"))
            .collect();
        ExactMatrix::from_columns(&cols, ht.rank())
    }

    /// Whether `h` (input coordinates, degree j) maps F^p into F^p for all p.
    pub fn is_filtered_map(src: &Self, tgt: &Self, h: &ExactMatrix, j: usize) -> bool {
        let inv = tgt.change_of_basis[j].inverse().expect("adapted basis is a basis");
        let adapted = inv.mul(h).mul(&src.change_of_basis[j]);
        (0..adapted.rows()).all(|r| {
            (0..adapted.cols()).all(|c| tgt.levels[j][r] >= src.levels[j][c] || adapted.get(r, c).is_zero())
        })
    }

    pub fn e1_page(&self) -> E1Page {
        let top_p = self.max_level();
        let degrees = self.levels.len();
        let pieces: Vec<GradedComplex> = (0..=top_p).map(|p| self.graded_piece(p)).collect();
        let bases: Vec<Vec<CohomologyBasis>> =
            pieces.iter().map(|g| (0..degrees).map(|j| CohomologyBasis::new(g, j)).collect()).collect();
        let graded_dims = bases.iter().map(|b| b.iter().map(|h| h.rank()).collect()).collect();
        let mut complexes = Vec::new();
        for i in 0..degrees {
            let mut dims = Vec::new();
            let mut maps = Vec::new();
            for p in 0..=top_p {
                let j = i + p;
                if j >= degrees {
                    break;
                }
                dims.push(bases[p][j].rank());
                if p < top_p && j + 1 < degrees {
                    maps.push(self.connecting(p, j, &bases[p][j], &bases[p + 1][j + 1]));
                }
            }
            maps.truncate(dims.len().saturating_sub(1));
            complexes.push(GradedComplex::new(Direction::Cohomological, dims, maps, Vec::new()));
        }
        E1Page { graded_dims, complexes }
    }
}
