//! Reconstruction of a perturbation from its resonances, from the spectra of
//! `J^+-`, or from the `omega` sequence; moving resonances.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{JresError, Result};
use crate::jacobi::{build_variants, variant_spectra};
use crate::jost::{jost_function, Perturbation};
use crate::poly::{
    multiset_distance, poly_from_roots, poly_roots, symmetric_laurent_to_lambda, LaurentPoly,
    RealPoly, RootSet,
};
use crate::spectral::{validate_rk, Verdict};
use crate::tolerance::Tolerances;

/// Increasing merge of two sorted sequences.
pub fn merge(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut v: Vec<f64> = a.iter().chain(b).copied().collect();
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    v
}

/// Spectra of `J^+` and `J^-`, each increasing and of length `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaPair {
    pub alpha_plus: Vec<f64>,
    pub alpha_minus: Vec<f64>,
}

impl AlphaPair {
    /// Validates `alpha^-_1 < alpha^+_1 < alpha^-_2 < ... < alpha^+_p`.
    pub fn new(alpha_plus: Vec<f64>, alpha_minus: Vec<f64>) -> Result<Self> {
        let p = alpha_plus.len();
        if p == 0 || alpha_minus.len() != p {
            return Err(JresError::InvalidInput(format!(
                "alpha sequences must be non-empty and of equal length ({} vs {})",
                p,
                alpha_minus.len()
            )));
        }
        if alpha_plus.iter().chain(&alpha_minus).any(|x| !x.is_finite()) {
            return Err(JresError::InvalidInput("non-finite alpha".into()));
        }
        for j in 0..p {
            let ok = alpha_minus[j] < alpha_plus[j]
                && (j + 1 == p || alpha_plus[j] < alpha_minus[j + 1]);
            if !ok {
                return Err(JresError::InvalidInput(format!(
                    "alphas do not interlace at index {}",
                    j + 1
                )));
            }
        }
        Ok(AlphaPair {
            alpha_plus,
            alpha_minus,
        })
    }

    pub fn p(&self) -> usize {
        self.alpha_plus.len()
    }
}

/// Strictly increasing sequence of `2p` points in `(-2, 2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OmegaSequence {
    omega: Vec<f64>,
}

impl OmegaSequence {
    pub fn new(omega: Vec<f64>) -> Result<Self> {
        if omega.is_empty() || !omega.len().is_multiple_of(2) {
            return Err(JresError::InvalidInput(format!(
                "omega needs a positive even length, got {}",
                omega.len()
            )));
        }
        if omega.iter().any(|&w| !(w > -2.0 && w < 2.0)) {
            return Err(JresError::InvalidInput("omega values must lie in (-2, 2)".into()));
        }
        if omega.windows(2).any(|w| w[1] <= w[0]) {
            return Err(JresError::InvalidInput("omega must be strictly increasing".into()));
        }
        Ok(OmegaSequence { omega })
    }

    pub fn values(&self) -> &[f64] {
        &self.omega
    }

    /// `alpha^-_j = omega_{2j-1}`, `alpha^+_j = omega_{2j}`.
    pub fn split(&self) -> Result<AlphaPair> {
        let minus = self.omega.iter().step_by(2).copied().collect();
        let plus = self.omega.iter().skip(1).step_by(2).copied().collect();
        AlphaPair::new(plus, minus)
    }
}

/// Intermediate quantities of the alpha inversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaInversion {
    pub q: Perturbation,
    pub a_p_squared: f64,
    /// Spectral weights of `J^+` at the last basis vector.
    pub weights: Vec<f64>,
    /// `((J^+)^n e_p, e_p)` for `n = 1, 2, 3`.
    pub moments: [f64; 3],
    /// Largest deviation between the input spectra and the spectra of the
    /// rebuilt `J^+-`.
    pub residual: f64,
}

/// Spectral weights `w_j = prod_i (a+_j - a-_i) / (2 a_p^2 prod_{i != j} (a+_j - a+_i))`.
pub fn weights(ap: &AlphaPair, ap2: f64) -> Vec<f64> {
    let (plus, minus) = (&ap.alpha_plus, &ap.alpha_minus);
    (0..plus.len())
        .map(|j| {
            let mut w = 1.0 / (2.0 * ap2);
            for i in 0..plus.len() {
                w *= plus[j] - minus[i];
                if i != j {
                    w /= plus[j] - plus[i];
                }
            }
            w
        })
        .collect()
}

/// Lanczos tridiagonalization of `diag(nodes)` from the unit vector
/// `sqrt(weights)`, with full reorthogonalization. Returns the diagonal and
/// off-diagonal of the Jacobi matrix whose spectral measure at its first
/// basis vector is `sum w_j delta(nodes_j)`.
pub fn lanczos(nodes: &[f64], weights: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = nodes.len();
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut v: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for step in 0..n {
        let mut r: Vec<f64> = v.iter().zip(nodes).map(|(x, l)| x * l).collect();
        let alpha: f64 = r.iter().zip(&v).map(|(a, b)| a * b).sum();
        diag.push(alpha);
        basis.push(v.clone());
        if step + 1 == n {
            break;
        }
        for _ in 0..2 {
            for u in &basis {
                let c: f64 = r.iter().zip(u).map(|(a, b)| a * b).sum();
                r.iter_mut().zip(u).for_each(|(a, b)| *a -= c * b);
            }
        }
        let beta = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(beta > 1e-300) {
            return Err(JresError::Numerical(format!("Lanczos breakdown at step {}", step + 1)));
        }
        off.push(beta);
        v = r.into_iter().map(|x| x / beta).collect();
    }
    Ok((diag, off))
}

fn invert_alphas_inner(
    ap: &AlphaPair,
    forced: Option<(f64, Option<f64>)>,
    tol: &Tolerances,
) -> Result<AlphaInversion> {
    let p = ap.p();
    let sp: f64 = ap.alpha_plus.iter().sum();
    let sm: f64 = ap.alpha_minus.iter().sum();
    if sp <= sm {
        return Err(JresError::InvalidInput("sum of alpha^+ must exceed sum of alpha^-".into()));
    }
    let ap2 = (sp - sm) / 2.0;
    let w = weights(ap, ap2);
    let total: f64 = w.iter().sum();
    if w.iter().any(|&x| x <= 0.0) {
        return Err(JresError::Inconsistent("non-positive spectral weight".into()));
    }
    if (total - 1.0).abs() > tol.weight {
        return Err(JresError::Inconsistent(format!("weights sum to {total}")));
    }
    let moment = |n: i32| -> f64 {
        w.iter()
            .zip(&ap.alpha_plus)
            .map(|(wj, l)| wj * l.powi(n))
            .sum()
    };
    let moments = [moment(1), moment(2), moment(3)];
    let (t_diag, t_off) = lanczos(&ap.alpha_plus, &w)?;
    // the Krylov basis starts at the last site
    let mut b: Vec<f64> = t_diag.iter().rev().copied().collect();
    let mut a: Vec<f64> = t_off.iter().rev().copied().collect();
    let (a_p, b_p) = match forced {
        Some((a_p, Some(b_p))) => (a_p, b_p),
        Some((a_p, None)) => (a_p, t_diag[0] - a_p * a_p),
        None => (ap2.sqrt(), t_diag[0] - ap2),
    };
    b[p - 1] = b_p;
    a.push(a_p);
    let q = Perturbation::with_tolerances(a, b, tol)?;
    let s = variant_spectra(&build_variants(&q)?);
    let residual = s
        .alpha_plus
        .iter()
        .zip(&ap.alpha_plus)
        .chain(s.alpha_minus.iter().zip(&ap.alpha_minus))
        .map(|(x, y)| (x - y).abs() / (1.0 + y.abs()))
        .fold(0.0, f64::max);
    if residual > tol.identity {
        return Err(JresError::integrity("rebuilt J+- reproduce the input spectra", residual, tol.identity));
    }
    Ok(AlphaInversion {
        q,
        a_p_squared: ap2,
        weights: w,
        moments,
        residual,
    })
}

/// Recover `q` from the spectra of `J^+` and `J^-`.
///
/// `a_p^2 = (sum alpha^+ - sum alpha^-) / 2`; `J^+` is rebuilt from its
/// spectral measure at the last basis vector and `b_p` is its corner entry
/// minus `a_p^2`.
pub fn invert_from_alphas(ap: &AlphaPair, tol: &Tolerances) -> Result<AlphaInversion> {
    invert_alphas_inner(ap, None, tol)
}

/// Recover `q` from the `omega` sequence by splitting it into the alternating
/// spectra of `J^-` and `J^+`. The result must have no Jost zeros in the
/// closed unit disc.
pub fn invert_from_omega(w: &OmegaSequence, tol: &Tolerances) -> Result<AlphaInversion> {
    let inv = invert_from_alphas(&w.split()?, tol)?;
    let psi0 = jost_function(&inv.q, tol)?;
    let roots = poly_roots(&psi0, tol)?;
    if let Some(r) = roots.roots.iter().find(|r| r.z.norm() <= 1.0 + tol.circle_band) {
        return Err(JresError::Inconsistent(format!(
            "omega sequence is infeasible: Jost function vanishes at {} in the closed disc",
            r.z
        )));
    }
    Ok(inv)
}

/// Intermediate quantities of the resonance inversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResonanceInversion {
    pub q: Perturbation,
    pub k: usize,
    /// `a_p` from the root product (1 for odd `k`).
    pub a_p: f64,
    /// `b_p = 1 / prod r` for odd `k`.
    pub b_p: Option<f64>,
    pub alphas: AlphaPair,
    pub weights: Vec<f64>,
    /// Relative distance between the input roots and the roots of the
    /// rebuilt Jost function.
    pub root_residual: f64,
}

/// `z^p (z^{p+1} psi(1/z) + sign z^{-p} psi(z))` as an ordinary polynomial of
/// degree `2p + 1`.
fn bridge(psi: &RealPoly, p: usize, sign: f64) -> RealPoly {
    let n = 2 * p + 2;
    let mut c = vec![0.0; n];
    for (j, &x) in psi.coeffs().iter().enumerate() {
        c[2 * p + 1 - j] += x;
        c[j] += sign * x;
    }
    RealPoly::new(c)
}

fn lambda_roots(poly_z: &RealPoly, p: usize, tol: &Tolerances) -> Result<Vec<f64>> {
    let g = LaurentPoly::new(-(p as i32), poly_z.coeffs().to_vec());
    let scale = g.max_abs_coeff();
    let d = symmetric_laurent_to_lambda(&g.scale(1.0 / scale), tol.division)?;
    if d.degree() != p as isize {
        return Err(JresError::integrity("characteristic polynomial has degree p", d.degree() as f64, p as f64));
    }
    let rs = poly_roots(&d, tol)?;
    let mut out = Vec::with_capacity(p);
    for r in &rs.roots {
        if r.z.im != 0.0 || r.mult != 1 {
            return Err(JresError::Integrity {
                check: format!("characteristic root {} is real and simple", r.z),
                residual: r.z.im.abs(),
                tolerance: tol.root_snap,
            });
        }
        out.push(r.z.re);
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}

/// Recover `q` from the roots of its Jost function, counted with
/// multiplicity.
///
/// 1. `a_p = sqrt(1 - 1 / prod r)` for even `k`; `a_p = 1`, `b_p = 1 / prod r`
///    for odd `k`.
/// 2. `psi0` is rebuilt as the monic polynomial with these roots.
/// 3. `(z + 1) u^+` and `(z - 1) u^-` are formed from `psi0(z)` and
///    `psi0(1/z)`, divided exactly and rewritten in `lambda = z + 1/z`.
/// 4. Their roots are the spectra of `J^+-`.
/// 5. `J_p` is rebuilt from those spectra.
///
/// The forward map of the result must reproduce the input roots.
pub fn invert_from_resonances(roots: &[Complex64], tol: &Tolerances) -> Result<ResonanceInversion> {
    let verdict = validate_rk(roots, tol);
    if !verdict.accepted {
        return Err(JresError::Rejected {
            rule: verdict.rule.unwrap(),
            detail: verdict.detail,
        });
    }
    let k = roots.len();
    let p = k.div_ceil(2);
    let set = RootSet::from_flat(roots);
    let prod = set.product().re;
    let (a_p, b_p) = if k.is_multiple_of(2) {
        let ap2 = 1.0 - 1.0 / prod;
        if !(ap2 > 0.0) {
            return Err(JresError::integrity("1 - 1/prod r is positive", ap2, 0.0));
        }
        (ap2.sqrt(), None)
    } else {
        (1.0, Some(1.0 / prod))
    };
    let psi = poly_from_roots(&set, 1.0, tol)?;
    let gp = bridge(&psi, p, 1.0).div_linear_exact(-1.0, tol.division)?;
    let gm = bridge(&psi, p, -1.0).div_linear_exact(1.0, tol.division)?;
    let alpha_plus = lambda_roots(&gp, p, tol)?;
    let alpha_minus = lambda_roots(&gm, p, tol)?;
    let alphas = AlphaPair::new(alpha_plus, alpha_minus)
        .map_err(|e| JresError::Integrity {
            check: format!("recovered spectra interlace: {e}"),
            residual: 0.0,
            tolerance: 0.0,
        })?;
    let inv = invert_alphas_inner(&alphas, Some((a_p, b_p)), tol)?;
    let fwd = jost_function(&inv.q, tol)?;
    let got = poly_roots(&fwd, tol)?.expanded();
    let root_residual = multiset_distance(&got, roots).unwrap_or(f64::INFINITY);
    if root_residual > tol.root_match {
        return Err(JresError::integrity("forward map reproduces the input roots", root_residual, tol.root_match));
    }
    Ok(ResonanceInversion {
        q: inv.q,
        k,
        a_p,
        b_p,
        alphas,
        weights: inv.weights,
        root_residual,
    })
}

/// Result of editing the root set of a perturbation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Surgery {
    pub verdict: Verdict,
    /// Perturbation with the edited roots.
    pub q: Option<Perturbation>,
    /// Perturbation whose roots are the original ones with the moved roots
    /// deleted.
    pub q_limit: Option<Perturbation>,
    /// Roots before and after the edit.
    pub before: Vec<Complex64>,
    pub after: Vec<Complex64>,
}

fn sort_by_modulus(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        a.norm()
            .partial_cmp(&b.norm())
            .unwrap()
            .then(a.arg().partial_cmp(&b.arg()).unwrap())
    });
}

fn take_nearest(pool: &mut Vec<Complex64>, z: Complex64) -> Result<Complex64> {
    let (i, d) = pool
        .iter()
        .enumerate()
        .map(|(i, r)| (i, (r - z).norm()))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .ok_or_else(|| JresError::InvalidInput("no roots to move".into()))?;
    if d > 1e-6 * (1.0 + z.norm()) {
        return Err(JresError::InvalidInput(format!("{z} is not a root (nearest off by {d:e})")));
    }
    Ok(pool.remove(i))
}

/// Replace `sources` (each matched to the nearest root) by `targets`,
/// revalidate and reinvert. A rejected edit yields a verdict naming the rule
/// and no perturbation.
pub fn move_roots(
    q: &Perturbation,
    sources: &[Complex64],
    targets: &[Complex64],
    tol: &Tolerances,
) -> Result<Surgery> {
    let psi0 = jost_function(q, tol)?;
    let mut before = poly_roots(&psi0, tol)?.expanded();
    sort_by_modulus(&mut before);
    let mut pool = before.clone();
    for &s in sources {
        take_nearest(&mut pool, s)?;
    }
    let mut kept = pool.clone();
    sort_by_modulus(&mut kept);
    pool.extend_from_slice(targets);
    let mut after = pool;
    sort_by_modulus(&mut after);
    let verdict = validate_rk(&after, tol);
    if !verdict.accepted {
        return Ok(Surgery {
            verdict,
            q: None,
            q_limit: None,
            before,
            after,
        });
    }
    let moved = invert_from_resonances(&after, tol)?.q;
    let q_limit = if kept.is_empty() {
        Some(Perturbation::trivial())
    } else if validate_rk(&kept, tol).accepted {
        Some(invert_from_resonances(&kept, tol)?.q)
    } else {
        None
    };
    Ok(Surgery {
        verdict,
        q: Some(moved),
        q_limit,
        before,
        after,
    })
}

/// Move the conjugate pair `{r, conj r}` to `{t, conj t}`. Real `r` and `t`
/// denote pairs of real points given as `(r, s)` via [`move_roots`] instead.
pub fn move_resonance_pair(
    q: &Perturbation,
    r: Complex64,
    target: Complex64,
    tol: &Tolerances,
) -> Result<Surgery> {
    if r.im == 0.0 || target.im == 0.0 {
        return Err(JresError::InvalidInput("conjugate pair moves need non-real points".into()));
    }
    move_roots(q, &[r, r.conj()], &[target, target.conj()], tol)
}

/// Move the single real root `r` to `target`.
pub fn move_single(q: &Perturbation, r: f64, target: f64, tol: &Tolerances) -> Result<Surgery> {
    move_roots(
        q,
        &[Complex64::new(r, 0.0)],
        &[Complex64::new(target, 0.0)],
        tol,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jacobi::{eig_sym_tridiag, FiniteJacobi};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn two_site_from_alphas() {
        let ap = AlphaPair::new(vec![-0.5, 1.0], vec![-1.0, 0.5]).unwrap();
        let inv = invert_from_alphas(&ap, &tol()).unwrap();
        assert!((inv.a_p_squared - 0.5).abs() < 1e-15);
        assert!((inv.weights[0] - 1.0 / 3.0).abs() < 1e-14);
        assert!((inv.weights[1] - 2.0 / 3.0).abs() < 1e-14);
        for (m, want) in inv.moments.iter().zip([0.5, 0.75, 0.625]) {
            assert!((m - want).abs() < 1e-14);
        }
        let q = inv.q;
        assert!((q.a()[0] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((q.a()[1] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(q.b().iter().all(|b| b.abs() < 1e-12));
    }

    #[test]
    fn one_site_from_alphas() {
        let (c, d) = (0.3, 0.8);
        let ap = AlphaPair::new(vec![c + d], vec![c - d]).unwrap();
        let q = invert_from_alphas(&ap, &tol()).unwrap().q;
        assert!((q.a()[0] - d.sqrt()).abs() < 1e-14);
        assert!((q.b()[0] - c).abs() < 1e-14);
    }

    #[test]
    fn alpha_validation() {
        assert!(AlphaPair::new(vec![1.0], vec![2.0]).is_err());
        assert!(AlphaPair::new(vec![0.0, 1.0], vec![-1.0]).is_err());
        assert!(OmegaSequence::new(vec![0.1, -0.1]).is_err());
        assert!(OmegaSequence::new(vec![-0.1, 0.1, 0.2]).is_err());
        assert!(OmegaSequence::new(vec![-2.0, 0.1]).is_err());
    }

    #[test]
    fn resonances_single_site() {
        let r = [Complex64::new(0.5, 0.0)];
        let inv = invert_from_resonances(&r, &tol()).unwrap();
        assert_eq!(inv.q.k(), 1);
        assert!((inv.q.b()[0] - 2.0).abs() < 1e-14);
        let r = [Complex64::new(2.0, 0.0)];
        assert!((invert_from_resonances(&r, &tol()).unwrap().q.b()[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn resonances_conjugate_pair() {
        let r = [Complex64::new(1.0, 1.0), Complex64::new(1.0, -1.0)];
        let q = invert_from_resonances(&r, &tol()).unwrap().q;
        // c_1 = 1 - a_1^2 = 1/|r|^2, b_1 = 2 Re r / |r|^2
        assert!((1.0 - q.a()[0].powi(2) - 0.5).abs() < 1e-13);
        assert!((q.b()[0] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn resonances_quartic() {
        let psi = RealPoly::new(vec![2.0, 0.0, 2.0, 0.0, 1.0]);
        let r = poly_roots(&psi, &tol()).unwrap().expanded();
        let q = invert_from_resonances(&r, &tol()).unwrap().q;
        for a in q.a() {
            assert!((a - FRAC_1_SQRT_2).abs() < 1e-12);
        }
        assert!(q.b().iter().all(|b| b.abs() < 1e-12));
    }

    #[test]
    fn rejected_input_names_rule() {
        let r = [Complex64::new(0.0, 0.5), Complex64::new(0.0, -0.5)];
        match invert_from_resonances(&r, &tol()) {
            Err(JresError::Rejected { rule, .. }) => assert_eq!(rule, crate::Rule::R3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn identity_move() {
        let q = Perturbation::new(vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2], vec![0.0, 0.0]).unwrap();
        let psi0 = jost_function(&q, &tol()).unwrap();
        let r = poly_roots(&psi0, &tol()).unwrap().expanded();
        let up = *r.iter().find(|z| z.im > 0.0).unwrap();
        let s = move_resonance_pair(&q, up, up, &tol()).unwrap();
        assert!(s.verdict.accepted);
        assert!(s.q.unwrap().distance(&q) < 1e-9);
    }

    #[test]
    fn lanczos_recovers_known_matrix() {
        let j = FiniteJacobi::new(vec![0.3, -0.2, 1.1], vec![0.7, 1.4]).unwrap();
        // spectral measure at the first basis vector via dense eigenvectors
        let lam = eig_sym_tridiag(&j);
        let w: Vec<f64> = lam
            .iter()
            .map(|&l| {
                // first component squared of the normalised eigenvector
                let mut v = [1.0, 0.0, 0.0];
                v[1] = (l - j.diag[0]) / j.offdiag[0];
                v[2] = ((l - j.diag[1]) * v[1] - j.offdiag[0] * v[0]) / j.offdiag[1];
                1.0 / v.iter().map(|x| x * x).sum::<f64>()
            })
            .collect();
        let (d, o) = lanczos(&lam, &w).unwrap();
        for (x, y) in d.iter().zip(&j.diag) {
            assert!((x - y).abs() < 1e-12);
        }
        for (x, y) in o.iter().zip(&j.offdiag) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    mod properties {
        use super::*;
        use crate::models::{random_empty_disc, random_perturbation};
        use crate::spectral::{omega_sequence, spectral_data};
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        fn tol() -> Tolerances {
            Tolerances::default()
        }

        fn arb_q() -> impl Strategy<Value = Perturbation> {
            (1usize..=12, any::<u64>()).prop_map(|(k, seed)| {
                random_perturbation(&mut ChaCha8Rng::seed_from_u64(seed), k)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(120))]

            #[test]
            fn weights_form_a_probability_vector(q in arb_q()) {
                let s = variant_spectra(&build_variants(&q).unwrap());
                let ap = AlphaPair::new(s.alpha_plus, s.alpha_minus).unwrap();
                let inv = invert_from_alphas(&ap, &tol()).unwrap();
                prop_assert!(inv.weights.iter().all(|&w| w > 0.0 && (w < 1.0 || q.p() == 1)));
                prop_assert!((inv.weights.iter().sum::<f64>() - 1.0).abs() < 1e-10);
            }

            #[test]
            fn alphas_determine_the_operator(q in arb_q()) {
                let s = variant_spectra(&build_variants(&q).unwrap());
                let ap = AlphaPair::new(s.alpha_plus, s.alpha_minus).unwrap();
                let got = invert_from_alphas(&ap, &tol()).unwrap().q;
                for x in 1..q.p() {
                    prop_assert!((got.a_at(x) - q.a_at(x)).abs() < 1e-7);
                    prop_assert!((got.b_at(x) - q.b_at(x)).abs() < 1e-7);
                }
                prop_assert!((got.a_p() - q.a_p()).abs() < 1e-7);
            }

            #[test]
            fn resonances_round_trip(q in arb_q()) {
                let roots = spectral_data(&q, &tol()).unwrap().roots().expanded();
                let got = invert_from_resonances(&roots, &tol()).unwrap().q;
                prop_assert_eq!(got.k(), q.k());
                prop_assert!(got.distance(&q) < 1e-6, "{:?} vs {:?}", got, q);
            }

            #[test]
            fn omega_round_trip(p in 1usize..=6, seed in any::<u64>()) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let q = random_empty_disc(&mut rng, p, &tol());
                let w = omega_sequence(&q, &tol()).unwrap();
                let got = invert_from_omega(&w, &tol()).unwrap().q;
                prop_assert!(got.distance(&q) < 1e-8);
            }
        }
    }
}
