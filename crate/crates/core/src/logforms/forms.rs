use super::{LogForm, LogGenerator};
use crate::liealg::{ColorMap, RootData};
use crate::scalars::{int, KappaScalar, Rational};

/// All permutations of 0..n in lexicographic order, with their signs.
pub fn permutations(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn rec(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<(Vec<usize>, i32)>) {
        if cur.len() == n {
            out.push((cur.clone(), permutation_sign(cur)));
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                cur.push(i);
                rec(n, cur, used, out);
                cur.pop();
                used[i] = false;
            }
        }
    }
    rec(n, &mut cur, &mut used, &mut out);
    out
}

pub fn permutation_sign(p: &[usize]) -> i32 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Alt w = Σ_{σ ∈ Σ_N} (−1)^σ w(t_σ(1), …, t_σ(N)).
pub fn alt(w: &LogForm, big_n: usize) -> LogForm {
    let mut out = LogForm::zero();
    for (sigma, sign) in permutations(big_n) {
        let p = w.permute_t(&sigma);
        out = out.add(&if sign > 0 { p } else { p.scale(&KappaScalar::from_int(-1)) });
    }
    out
}

/// Permutations of the t-indices preserving the fibers of π.
pub fn color_preserving(pi: &ColorMap) -> Vec<(Vec<usize>, i32)> {
    permutations(pi.len())
        .into_iter()
        .filter(|(s, _)| (0..pi.len()).all(|a| pi.color(s[a]) == pi.color(a)))
        .collect()
}

/// Skew-symmetrization over Σ_π.
pub fn alt_colored(w: &LogForm, pi: &ColorMap) -> LogForm {
    let mut out = LogForm::zero();
    for (sigma, sign) in color_preserving(pi) {
        let p = w.permute_t(&sigma);
        out = out.add(&if sign > 0 { p } else { p.scale(&KappaScalar::from_int(-1)) });
    }
    out
}

/// σ·w = (−1)^σ w for every adjacent transposition inside a fiber of π.
pub fn is_skew(w: &LogForm, pi: &ColorMap) -> bool {
    let big_n = pi.len();
    (0..big_n.saturating_sub(1)).filter(|&a| pi.color(a) == pi.color(a + 1)).all(|a| {
        let mut sigma: Vec<usize> = (0..big_n).collect();
        sigma.swap(a, a + 1);
        w.permute_t(&sigma) == w.scale(&KappaScalar::from_int(-1))
    })
}

fn factorial(k: usize) -> Rational {
    (1..=k).fold(int(1), |acc, i| acc * int(i as i64))
}

/// dln(t_{s}−z_1)∧…, with the t-indices filled block by block from `start`.
fn block_product(blocks: &[usize], start: usize) -> LogForm {
    let mut gens = Vec::new();
    let mut pos = start;
    for (i, &len) in blocks.iter().enumerate() {
        for _ in 0..len {
            gens.push(LogGenerator::ZT(i, pos));
            pos += 1;
        }
    }
    LogForm::monomial(gens, KappaScalar::one())
}

/// u_a = Π_s dln(t_{·} − z_s) over consecutive blocks of sizes a_s.
pub fn build_u_a(a: &[usize]) -> LogForm {
    block_product(a, 0)
}

/// u_b = −κ · (the same product with t-indices starting at t_2).
pub fn build_u_b(b: &[usize]) -> LogForm {
    block_product(b, 1).scale(&-KappaScalar::kappa())
}

/// w_a = (1/(a_1!…a_n!)) Alt u_a with N = |a|.
pub fn build_w_a(a: &[usize]) -> LogForm {
    let big_n: usize = a.iter().sum();
    let norm: Rational = a.iter().map(|&x| factorial(x)).product();
    alt(&build_u_a(a), big_n).scale(&KappaScalar::from_rational(int(1) / norm))
}

/// w_b = (1/(b_1!…b_n!)) Alt u_b with N = |b| + 1.
pub fn build_w_b(b: &[usize]) -> LogForm {
    let big_n: usize = b.iter().sum::<usize>() + 1;
    let norm: Rational = b.iter().map(|&x| factorial(x)).product();
    alt(&build_u_b(b), big_n).scale(&KappaScalar::from_rational(int(1) / norm))
}

/// ω = Σ_{i<j} (μ_i,μ_j) dln(z_i−z_j) − Σ_{i,k} (μ_i,α_{π(k)}) dln(z_i−t_k)
///   + Σ_{k<l} (α_{π(k)},α_{π(l)}) dln(t_k−t_l).
pub fn omega_coulomb(rd: &RootData, pi: &ColorMap) -> LogForm {
    let mut w = LogForm::zero();
    let n = rd.n();
    let big_n = pi.len();
    for i in 0..n {
        for j in (i + 1)..n {
            w.add_term(single(LogGenerator::ZZ(i, j)), KappaScalar::from_rational(rd.mu_mu(i, j).clone()));
        }
    }
    for i in 0..n {
        for k in 0..big_n {
            w.add_term(
                single(LogGenerator::ZT(i, k)),
                KappaScalar::from_rational(-rd.mu_alpha(i, pi.color(k)).clone()),
            );
        }
    }
    for k in 0..big_n {
        for l in (k + 1)..big_n {
            w.add_term(
                single(LogGenerator::TT(k, l)),
                KappaScalar::from_rational(rd.alpha_alpha(pi.color(k), pi.color(l)).clone()),
            );
        }
    }
    w
}

fn single(g: LogGenerator) -> super::LogMonomial {
    super::LogMonomial(vec![g])
}

/// (ω_z, ω_t) with ω_t the fiber part (dt-components only) and
/// ω_z = ω − ω_t carrying every dz-component.
pub fn omega_split(omega: &LogForm) -> (LogForm, LogForm) {
    let t_part = omega.project_fiber();
    (omega.sub(&t_part), t_part)
}

/// Multi-indices a ∈ N^n with |a| = total, first entry decreasing first.
pub fn multi_indices(n: usize, total: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if n == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in multi_indices(n - 1, total - first) {
            let mut v = vec![first];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alt_of_two_blocks_doubles() {
        let w = LogForm::monomial(vec![LogGenerator::ZT(0, 0), LogGenerator::ZT(0, 1)], KappaScalar::one());
        assert_eq!(alt(&w, 2), w.scale(&KappaScalar::from_int(2)));
    }

    #[test]
    fn w_b_empty_product() {
        assert_eq!(build_w_b(&[0]), LogForm::constant(-KappaScalar::kappa()));
        assert_eq!(build_w_b(&[0, 0, 0]), LogForm::constant(-KappaScalar::kappa()));
    }

    #[test]
    fn multi_index_order() {
        assert_eq!(multi_indices(2, 1), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(multi_indices(3, 2).len(), 6);
    }
}
