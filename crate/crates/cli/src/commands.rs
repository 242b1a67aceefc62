use kzh_analytic::{
    coker_solution_check, dual_kz_check, integrate_solution, kz_residual, Contour, MasterFunction, ZGrid,
};
use kzh_core::chevalley::{build_chain_complex, homology_dims};
use kzh_core::connections::{
    build_cocycle, check_coulomb_flatness, check_flatness, e1_comparison, eta_from_cocycle, eta_tilde_lift,
    generic_quasi_iso, kz_form, source_model, target_model, verify_chain_map, verify_cocycle, QuasiIsoReport,
    ConnectionError, ExplicitOmega, OmegaProvider, Sl2Casimir,
};
use kzh_core::liealg::{lyndon_words, MultiDegree};
use kzh_core::logforms::{aomoto_complex, fiber_monomials, omega_coulomb, skew_fiber_complex, span_dim, Ambient};
use kzh_core::oracle::{fiber_poincare, free_lie_dim_brute_force};
use kzh_core::scalars::{format_rational, ExactMatrix, Rational, SeededSampler};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::config::Job;
use crate::report::Report;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    VerifyCocycle,
    VerifyEta,
    VerifyFlatness,
    VerifyDualKz,
    ReportHomology,
    ReportAomoto,
    ReportE1,
    SolveKz,
    OracleDims,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::VerifyCocycle,
        Command::VerifyEta,
        Command::VerifyFlatness,
        Command::VerifyDualKz,
        Command::ReportHomology,
        Command::ReportAomoto,
        Command::ReportE1,
        Command::SolveKz,
        Command::OracleDims,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyCocycle => "verify cocycle",
            Command::VerifyEta => "verify eta",
            Command::VerifyFlatness => "verify flatness",
            Command::VerifyDualKz => "verify dual-kz",
            Command::ReportHomology => "report homology",
            Command::ReportAomoto => "report aomoto",
            Command::ReportE1 => "report e1",
            Command::SolveKz => "solve kz",
            Command::OracleDims => "oracle dims",
        }
    }

    pub fn parse(group: &str, what: &str) -> Option<Self> {
        let name = format!("{group} {what}");
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

pub fn run(cmd: Command, job: &Job) -> Result<Report, CliError> {
    let mut rep = Report::new(cmd.name(), job.seed, job.echo());
    let mut s = SeededSampler::new(job.seed);
    match cmd {
        Command::VerifyCocycle => verify_cocycle_cmd(job, &mut s, &mut rep)?,
        Command::VerifyEta => verify_eta(job, &mut s, &mut rep)?,
        Command::VerifyFlatness => verify_flatness(job, &mut s, &mut rep)?,
        Command::VerifyDualKz => verify_dual_kz(job, &mut s, &mut rep)?,
        Command::ReportHomology => report_homology(job, &mut rep)?,
        Command::ReportAomoto => report_aomoto(job, &mut s, &mut rep)?,
        Command::ReportE1 => report_e1(job, &mut s, &mut rep)?,
        Command::SolveKz => solve_kz(job, &mut rep)?,
        Command::OracleDims => oracle_dims(job, &mut rep)?,
    }
    Ok(rep)
}

fn require_sl2(job: &Job) -> Result<(), CliError> {
    if job.rd.r() != 1 {
        return Err(CliError::config("algebra", format!("this command needs r = 1 data (sl2); got r = {}", job.rd.r())));
    }
    Ok(())
}

fn require_n(job: &Job) -> Result<(), CliError> {
    if job.big_n() == 0 {
        return Err(CliError::config("problem.N", "must be at least 1"));
    }
    Ok(())
}

fn matrix_json(m: &ExactMatrix) -> Value {
    json!((0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn rat_json(v: &[Rational]) -> Value {
    json!(v.iter().map(format_rational).collect::<Vec<_>>())
}

fn base_point(job: &Job, s: &mut SeededSampler) -> Result<Vec<Rational>, CliError> {
    match &job.z {
        Some(z) => Ok(z.clone()),
        None => Ok(s.sample_point(job.rd.n(), 0)?.z),
    }
}

fn verify_cocycle_cmd(job: &Job, s: &mut SeededSampler, rep: &mut Report) -> Result<(), CliError> {
    require_sl2(job)?;
    let c = build_cocycle(&job.rd, job.big_n())?;
    let r = verify_cocycle(&c, s, job.trials)?;
    rep.verdicts_from("", &r);
    rep.table("chainDims", json!(c.spaces.chains.complex.dims));
    rep.table("i0Terms", json!(c.i0.comps.iter().map(|w| w.terms.len()).collect::<Vec<_>>()));
    rep.table("i1Terms", json!(c.i1.comps.iter().map(|w| w.terms.len()).collect::<Vec<_>>()));
    Ok(())
}

fn quasi_json(q: &QuasiIsoReport) -> Value {
    json!({
        "chainDims": q.chain_dims,
        "formDims": q.form_dims,
        "etaRanks": q.eta_ranks,
        "chainHomology": q.chain_homology,
        "formCohomology": q.form_cohomology,
        "inducedRanks": q.induced_ranks,
        "chainMap": q.chain_map,
        "bijective": q.bijective,
        "quasiIso": q.quasi_iso,
    })
}

fn verify_eta(job: &Job, s: &mut SeededSampler, rep: &mut Report) -> Result<(), CliError> {
    require_sl2(job)?;
    require_n(job)?;
    let c = build_cocycle(&job.rd, job.big_n())?;
    let eta = eta_from_cocycle(&c);
    let et = eta_tilde_lift(&eta);
    let r = verify_chain_map(&et, &c.spaces, &c.omega, &mut s.child(1), job.trials)?;
    rep.verdicts_from("eta_tilde", &r);
    let z = base_point(job, s)?;
    let q = generic_quasi_iso(&c, &eta, &z, job.kappa.value(), &mut s.child(2))?;
    rep.verdict("eta_z.chain_map", q.chain_map, Vec::new());
    rep.verdict("eta_z.quasi_iso", q.quasi_iso, Vec::new());
    let mut t = quasi_json(&q);
    t["z"] = rat_json(&z);
    if let (Some(k0), Some(resonant)) = (job.kappa.value(), q.resonant) {
        t["kappa0"] = json!(format_rational(k0));
        t["resonant"] = json!(resonant);
        if let Some(sp) = &q.specialized {
            t["specialized"] = quasi_json(sp);
        }
        if resonant {
            rep.note(format!("kappa = {} is resonant: ranks drop relative to generic kappa", format_rational(k0)));
        }
    }
    rep.table("etaZ", t);
    Ok(())
}

fn omega_provider(job: &Job) -> Result<Box<dyn OmegaProvider>, CliError> {
    if job.omega.is_empty() {
        return Ok(Box::new(Sl2Casimir::new(&job.rd)?));
    }
    let mut ex = ExplicitOmega { n: job.rd.n(), ..Default::default() };
    for (i, j, m) in &job.omega {
        ex.matrices.insert((job.k.0.clone(), *i, *j), ExactMatrix::from_rationals(m));
    }
    Ok(Box::new(ex))
}

fn verify_flatness(job: &Job, s: &mut SeededSampler, rep: &mut Report) -> Result<(), CliError> {
    let provider = omega_provider(job)?;
    let form = kz_form(&job.rd, &job.k, provider.as_ref()).map_err(|e| match e {
        ConnectionError::Shape(m) => CliError::config("options.omega", m),
        other => other.into(),
    })?;
    rep.table("omegaSource", json!(if job.omega.is_empty() { "sl2 Casimir" } else { "options.omega" }));
    let f = check_flatness(&form, s, job.trials)?;
    rep.verdict("kz", f.passed, f.failures);
    let omega = omega_coulomb(&job.rd, &job.pi);
    let g = check_coulomb_flatness(&form, &omega, job.big_n(), s, job.trials)?;
    rep.verdict("kz_coulomb", g.passed, g.failures);
    rep.table("weightSpaceDim", json!(form.dim));
    Ok(())
}

fn verify_dual_kz(job: &Job, s: &mut SeededSampler, rep: &mut Report) -> Result<(), CliError> {
    if job.rd.r() != 1 || job.rd.n() != 2 || job.big_n() != 1 {
        return Err(CliError::config("algebra", "the dual KZ check is the sl2 example with n = 2, N = 1"));
    }
    let r = dual_kz_check(&job.rd, s, job.trials)?;
    rep.verdicts_from("", &r.checks);
    rep.table("omega", matrix_json(&r.omega));
    rep.table("points", json!(r.points));
    rep.table("literalDtResidualZero", json!(r.literal_dt_residual_zero));
    rep.table("printedCoordinateResidualZero", json!(r.printed_coordinate_residual_zero));
    if !r.literal_dt_residual_zero {
        rep.note("the horizontal/vertical identity holds with d'' = (-1)^p d_t on forms of z-degree p; with the plain d_t it fails");
    }
    if !r.printed_coordinate_residual_zero {
        rep.note("the coordinate form with +Omega J1/(k(z1-z2)) is nonzero; the connection form d'w10 = dz(J) + A^J gives -Omega J1/(k(z1-z2)) and vanishes");
    }
    Ok(())
}

fn report_homology(job: &Job, rep: &mut Report) -> Result<(), CliError> {
    let cc = build_chain_complex(&job.rd, &job.k)?;
    let square = cc.complex.check_square_zero();
    rep.verdict("square_zero", square.is_ok(), square.err().map(|d| vec![format!("degree {d}")]).unwrap_or_default());
    rep.table("lyndonCount", json!(cc.lyndon.len()));
    rep.table("chainDims", json!(cc.complex.dims));
    rep.table("degrees", json!((0..cc.complex.dims.len()).map(|i| cc.complex.display_degree(i)).collect::<Vec<_>>()));
    rep.table("homology", json!(homology_dims(&cc.complex)));
    rep.table("eulerCharacteristic", json!(cc.complex.euler_characteristic()));
    if let Some(k0) = job.kappa.value() {
        if let Some(sp) = cc.complex.specialize(k0) {
            rep.table("homologyAtKappa0", json!(homology_dims(&sp)));
        }
    }
    Ok(())
}

fn report_aomoto(job: &Job, s: &mut SeededSampler, rep: &mut Report) -> Result<(), CliError> {
    require_n(job)?;
    let z = base_point(job, s)?;
    rep.table("z", rat_json(&z));
    let skew = skew_fiber_complex(&job.rd, &job.pi, &z, &mut s.child(1))?;
    rep.verdict("skew_model.square_zero", true, Vec::new());
    let mut t = json!({"dims": skew.dims(), "cohomology": skew.cohomology_dims()});
    if let Some(k0) = job.kappa.value() {
        t["cohomologyAtKappa0"] = json!(skew.cohomology_dims_at(k0));
    }
    rep.table("skewModel", t);
    if job.rd.r() == 1 {
        let w = aomoto_complex(&job.rd, job.big_n(), &z, &mut s.child(2))?;
        rep.verdict("w_model.square_zero", true, Vec::new());
        let mut t = json!({"firstDegree": w.first_degree, "dims": w.dims(), "cohomology": w.cohomology_dims()});
        if let Some(k0) = job.kappa.value() {
            t["cohomologyAtKappa0"] = json!(w.cohomology_dims_at(k0));
        }
        rep.table("wModel", t);
        rep.note("the w-model spans degrees N-1 and N only; the skew model spans all degrees 0..N");
    }
    Ok(())
}

fn report_e1(job: &Job, s: &mut SeededSampler, rep: &mut Report) -> Result<(), CliError> {
    require_sl2(job)?;
    require_n(job)?;
    let big_n = job.big_n();
    let c = build_cocycle(&job.rd, big_n)?;
    let mut tgt = target_model(&job.rd, &job.pi, &mut s.child(1))?;
    let mut src = source_model(&c.spaces, big_n, &mut s.child(2))?;
    rep.verdicts_from("source", &src.axioms);
    let et = eta_tilde_lift(&eta_from_cocycle(&c));
    let cmp = e1_comparison(&mut src, &mut tgt, &et)?;
    rep.verdicts_from("eta_tilde", &cmp.chain_map);
    rep.verdict("e1_iso", cmp.iso, Vec::new());
    let z = base_point(job, s)?;
    let w = skew_fiber_complex(&job.rd, &job.pi, &z, &mut s.child(3))?.cohomology_dims();
    let row0 = &cmp.target.graded_dims[0];
    let matches = row0.len() >= w.len() && row0[..w.len()] == w[..] && row0[w.len()..].iter().all(|&d| d == 0);
    rep.verdict(
        "e1_row0_equals_fiber_cohomology",
        matches,
        if matches { Vec::new() } else { vec![format!("E1 row 0 {row0:?} vs fiber {w:?}")] },
    );
    rep.table("sourceGradedDims", json!(cmp.source.graded_dims));
    rep.table("targetGradedDims", json!(cmp.target.graded_dims));
    rep.table("inducedRanks", json!(cmp.induced_ranks));
    rep.table("fiberCohomology", json!(w));
    rep.table("z", rat_json(&z));
    Ok(())
}

fn f64_of(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn solve_kz(job: &Job, rep: &mut Report) -> Result<(), CliError> {
    require_sl2(job)?;
    if job.big_n() != 1 {
        return Err(CliError::config("problem.N", "numeric solutions are computed for N = 1"));
    }
    let k0 = job
        .kappa
        .value()
        .ok_or_else(|| CliError::config("kappa", "solve kz needs a numeric kappa (pass --kappa p/q)"))?;
    let kappa = f64_of(k0);
    let mf = MasterFunction::new(&job.rd, &job.pi, kappa)?;
    let centers: Vec<Vec<f64>> = job.centers.iter().map(|c| c.iter().map(f64_of).collect()).collect();
    let grid = ZGrid::stencils(centers.clone(), job.tol.grid_step);
    let contour = Contour::segment(job.contour.0, job.contour.1);
    let sol = integrate_solution(&mf, &contour, &grid, job.tol.quadrature)?;
    let worst_q = sol.errors.iter().cloned().fold(0.0, f64::max);
    rep.verdict(
        "quadrature",
        worst_q <= job.tol.quadrature,
        if worst_q <= job.tol.quadrature { Vec::new() } else { vec![format!("error estimate {worst_q:e}")] },
    );
    let res = kz_residual(&sol, &job.rd, kappa)?;
    let tol = job.tol.residual;
    let check = |v: f64, what: &str| if v < tol { Vec::new() } else { vec![format!("{what} = {v:e} >= {tol:e}")] };
    rep.verdict("kz_residual", res.max_residual < tol, check(res.max_residual, "max residual"));
    rep.verdict("singular_vector", res.singular_relative < tol, check(res.singular_relative, "|e.X| relative"));
    let per = sol.points.len() / centers.len().max(1);
    let values: Vec<Value> = (0..centers.len())
        .map(|i| json!({"z": job.centers[i].iter().map(format_rational).collect::<Vec<_>>(), "value": sol.values[i * per]}))
        .collect();
    rep.table("solution", json!(values));
    rep.table("kzResidual", json!(res.max_residual));
    rep.table("singularRelative", json!(res.singular_relative));
    rep.table("quadratureError", json!(worst_q));
    rep.table("regularized", json!(sol.regularized));
    if sol.regularized {
        rep.note("an endpoint exponent lies in (-2, -1); the integral is the analytic continuation in the exponent");
    }
    let t_star = match &job.t_star {
        Some(t) => f64_of(t),
        None => centers.iter().flatten().cloned().fold(f64::NEG_INFINITY, f64::max) + 1.0,
    };
    let ck = coker_solution_check(&job.rd, kappa, t_star, &grid)?;
    rep.verdict("coker", ck.projected < tol, check(ck.projected, "projected residual"));
    rep.table(
        "coker",
        json!({
            "tStar": t_star,
            "unprojected": ck.unprojected,
            "projected": ck.projected,
            "cokerDim": ck.coker_dim,
            "vacuous": ck.vacuous,
            "normalization": ck.normalization,
        }),
    );
    if ck.vacuous {
        rep.note("Coker(d) = 0 for these weights, so the projected coker check is vacuous");
    }
    Ok(())
}

/// All multidegrees of r letters with total between 1 and `max`.
fn multidegrees(r: usize, max: usize) -> Vec<MultiDegree> {
    let mut out = Vec::new();
    let mut cur = vec![0usize; r];
    fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<MultiDegree>) {
        if i == cur.len() {
            if cur.iter().sum::<usize>() > 0 {
                out.push(MultiDegree(cur.clone()));
            }
            return;
        }
        for v in 0..=left {
            cur[i] = v;
            rec(i + 1, left - v, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max, &mut cur, &mut out);
    out
}

fn oracle_dims(job: &Job, rep: &mut Report) -> Result<(), CliError> {
    let mut lie_fail = Vec::new();
    let mut lie_rows = Vec::new();
    for r in 1..=job.max_rank {
        for k in multidegrees(r, job.max_degree) {
            let a = lyndon_words(&k).len();
            let b = free_lie_dim_brute_force(&k);
            if a != b {
                lie_fail.push(format!("k = {:?}: lyndon {a}, brute force {b}", k.0));
            }
            lie_rows.push(json!({"k": k.0, "lyndon": a, "bruteForce": b}));
        }
    }
    rep.verdict("free_lie_dims", lie_fail.is_empty(), lie_fail);
    rep.table("freeLie", json!(lie_rows));
    let mut fib_fail = Vec::new();
    let mut fib_rows = Vec::new();
    for n in 1..=job.max_points {
        for big_n in 1..=job.max_points {
            let z: Vec<Rational> = (0..n as i64).map(|i| Rational::from_integer((3 * i - 1).into())).collect();
            let amb = Ambient::fiber(z, big_n);
            let expected = fiber_poincare(n, big_n);
            let mut got = Vec::new();
            for d in 0..expected.len() {
                let forms = fiber_monomials(n, big_n, d);
                let mut s = SeededSampler::new(job.seed).child((n * 100 + big_n * 10 + d) as u64);
                got.push(span_dim(&forms, &amb, &mut s, amb.trials_for(forms.len(), d))?);
            }
            if got != expected {
                fib_fail.push(format!("n = {n}, N = {big_n}: rank {got:?}, Poincare {expected:?}"));
            }
            fib_rows.push(json!({"n": n, "N": big_n, "rank": got, "poincare": expected}));
        }
    }
    rep.verdict("fiber_form_dims", fib_fail.is_empty(), fib_fail);
    rep.table("fiberForms", json!(fib_rows));
    Ok(())
}
