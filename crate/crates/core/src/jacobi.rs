//! Finite Jacobi matrices, Sturm counts, eigenvalues and the fundamental
//! solutions of the three-term recurrence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{JresError, Result};
use crate::jost::Perturbation;
use crate::poly::RealPoly;

/// Real symmetric tridiagonal matrix with positive off-diagonal.
///
/// The empty (0 x 0) matrix is allowed and has no eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteJacobi {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl FiniteJacobi {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Result<Self> {
        let ok = if diag.is_empty() {
            offdiag.is_empty()
        } else {
            offdiag.len() + 1 == diag.len()
        };
        if !ok {
            return Err(JresError::InvalidInput(format!(
                "tridiagonal shape mismatch: {} diagonal, {} off-diagonal",
                diag.len(),
                offdiag.len()
            )));
        }
        if diag.iter().chain(&offdiag).any(|x| !x.is_finite()) {
            return Err(JresError::InvalidInput("non-finite matrix entry".into()));
        }
        if offdiag.iter().any(|&a| a <= 0.0) {
            return Err(JresError::InvalidInput("off-diagonal must be positive".into()));
        }
        Ok(FiniteJacobi { diag, offdiag })
    }

    pub fn empty() -> Self {
        FiniteJacobi {
            diag: Vec::new(),
            offdiag: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn norm_inf(&self) -> f64 {
        (0..self.dim())
            .map(|i| {
                let l = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
                let r = if i + 1 < self.dim() { self.offdiag[i] } else { 0.0 };
                self.diag[i].abs() + l + r
            })
            .fold(0.0, f64::max)
    }

    fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.dim() {
            let l = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
            let r = if i + 1 < self.dim() { self.offdiag[i] } else { 0.0 };
            lo = lo.min(self.diag[i] - l - r);
            hi = hi.max(self.diag[i] + l + r);
        }
        (lo, hi)
    }

    /// Number of negative pivots of `J - x = L D L^T`, or `None` when a pivot
    /// vanishes exactly.
    fn negative_pivots(&self, x: f64) -> Option<usize> {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..self.dim() {
            let off = if i > 0 { self.offdiag[i - 1] } else { 0.0 };
            d = self.diag[i] - x - if i > 0 { off * off / d } else { 0.0 };
            if d == 0.0 {
                return None;
            }
            if d < 0.0 {
                count += 1;
            }
        }
        Some(count)
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        self.count_shifted(x, -1.0)
    }

    /// Number of eigenvalues at or below `x`.
    pub fn count_at_or_below(&self, x: f64) -> usize {
        self.count_shifted(x, 1.0)
    }

    fn count_shifted(&self, x: f64, dir: f64) -> usize {
        if x == f64::INFINITY {
            return self.dim();
        }
        if x == f64::NEG_INFINITY {
            return 0;
        }
        let mut y = x;
        loop {
            if let Some(c) = self.negative_pivots(y) {
                return c;
            }
            y += dir * 1e-12 * (1.0 + y.abs());
        }
    }

    /// Dense row-major copy, mainly for tests and diagnostics.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dim();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            m[i][i] = self.diag[i];
            if i + 1 < n {
                m[i][i + 1] = self.offdiag[i];
                m[i + 1][i] = self.offdiag[i];
            }
        }
        m
    }

    /// Characteristic value `det(J - x)` and its derivative.
    fn det_and_derivative(&self, x: f64) -> (f64, f64) {
        let (mut f0, mut f1) = (1.0, self.diag.first().map_or(1.0, |d| d - x));
        let (mut g0, mut g1) = (0.0, -1.0);
        for i in 1..self.dim() {
            let a2 = self.offdiag[i - 1] * self.offdiag[i - 1];
            let f2 = (self.diag[i] - x) * f1 - a2 * f0;
            let g2 = (self.diag[i] - x) * g1 - f1 - a2 * g0;
            f0 = f1;
            f1 = f2;
            g0 = g1;
            g1 = g2;
        }
        (f1, g1)
    }
}

/// Number of eigenvalues of `j` in the open interval `(lo, hi)`.
///
/// Infinite endpoints are allowed. An endpoint hitting an eigenvalue exactly
/// is nudged by `1e-12 (1 + |e|)` away from the interval.
pub fn sturm_count(j: &FiniteJacobi, lo: f64, hi: f64) -> usize {
    if !(lo < hi) {
        return 0;
    }
    j.count_below(hi).saturating_sub(j.count_at_or_below(lo))
}

/// Eigenvalues in increasing order by Sturm bisection with a final Newton
/// step on the characteristic polynomial.
pub fn eig_sym_tridiag(j: &FiniteJacobi) -> Vec<f64> {
    let n = j.dim();
    if n == 0 {
        return Vec::new();
    }
    let (glo, ghi) = j.gershgorin();
    let pad = 1e-12 * (1.0 + glo.abs().max(ghi.abs()));
    let (glo, ghi) = (glo - pad, ghi + pad);
    let mut out = Vec::with_capacity(n);
    for idx in 0..n {
        let (mut lo, mut hi) = (glo, ghi);
        if let Some(&prev) = out.last() {
            lo = lo.max(prev);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if j.count_below(mid) > idx {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                break;
            }
        }
        let mut x = 0.5 * (lo + hi);
        let (f, df) = j.det_and_derivative(x);
        if df != 0.0 && f.is_finite() && df.is_finite() {
            let y = x - f / df;
            if y >= lo && y <= hi {
                x = y;
            }
        }
        out.push(x);
    }
    out
}

/// The matrices built from a perturbation of support `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variants {
    /// `J_p`, the leading `p x p` block.
    pub jp: FiniteJacobi,
    /// `J_p + a_p^2 e_p e_p^T`.
    pub plus: FiniteJacobi,
    /// `J_p - a_p^2 e_p e_p^T`.
    pub minus: FiniteJacobi,
    /// `J_p` without its last row and column.
    pub jp1: FiniteJacobi,
    /// `J_p` without its first row and column.
    pub jp_first: FiniteJacobi,
    /// `J_p` without first and last rows and columns; absent when `p < 2`.
    pub jp1_first: Option<FiniteJacobi>,
}

/// Sorted spectra of the matrices in [`Variants`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariantSpectra {
    /// Eigenvalues of `J_p`.
    pub mu: Vec<f64>,
    /// Eigenvalues of `J^+`.
    pub alpha_plus: Vec<f64>,
    /// Eigenvalues of `J^-`.
    pub alpha_minus: Vec<f64>,
    /// Eigenvalues of `J_{p,1}`.
    pub tau: Vec<f64>,
    /// Eigenvalues of `J_p` with the first site removed.
    pub mu_first: Vec<f64>,
    /// Eigenvalues with both end sites removed.
    pub tau_first: Option<Vec<f64>>,
}

fn sub_jacobi(diag: &[f64], off: &[f64]) -> FiniteJacobi {
    if diag.is_empty() {
        return FiniteJacobi::empty();
    }
    FiniteJacobi {
        diag: diag.to_vec(),
        offdiag: off.to_vec(),
    }
}

pub fn build_variants(q: &Perturbation) -> Result<Variants> {
    let p = q.p();
    if p == 0 {
        return Err(JresError::Domain("matrix variants need p >= 1".into()));
    }
    let b = q.b();
    let off = &q.a()[..p - 1];
    let ap2 = q.a_p() * q.a_p();
    let jp = sub_jacobi(b, off);
    let mut plus = jp.clone();
    plus.diag[p - 1] += ap2;
    let mut minus = jp.clone();
    minus.diag[p - 1] -= ap2;
    let jp1 = sub_jacobi(&b[..p - 1], if p >= 2 { &off[..p - 2] } else { &[] });
    let jp_first = sub_jacobi(&b[1..], if p >= 2 { &off[1..] } else { &[] });
    let jp1_first = if p >= 2 {
        Some(sub_jacobi(&b[1..p - 1], if p >= 3 { &off[1..p - 2] } else { &[] }))
    } else {
        None
    };
    Ok(Variants {
        jp,
        plus,
        minus,
        jp1,
        jp_first,
        jp1_first,
    })
}

pub fn variant_spectra(v: &Variants) -> VariantSpectra {
    VariantSpectra {
        mu: eig_sym_tridiag(&v.jp),
        alpha_plus: eig_sym_tridiag(&v.plus),
        alpha_minus: eig_sym_tridiag(&v.minus),
        tau: eig_sym_tridiag(&v.jp1),
        mu_first: eig_sym_tridiag(&v.jp_first),
        tau_first: v.jp1_first.as_ref().map(eig_sym_tridiag),
    }
}

fn strictly_increasing(xs: &[f64], margin: f64) -> Option<usize> {
    xs.windows(2).position(|w| !(w[1] - w[0] > margin))
}

/// Verify the strict interlacing relations between the variant spectra with
/// a separation of at least `margin`.
pub fn check_interlacing(s: &VariantSpectra, margin: f64) -> Result<()> {
    let p = s.mu.len();
    let mut chain = Vec::with_capacity(3 * p);
    for j in 0..p {
        chain.extend([s.alpha_minus[j], s.mu[j], s.alpha_plus[j]]);
    }
    if let Some(i) = strictly_increasing(&chain, margin) {
        return Err(JresError::Inconsistent(format!(
            "alpha-/mu/alpha+ interlacing fails at position {i}"
        )));
    }
    let inter = |outer: &[f64], inner: &[f64], what: &str| -> Result<()> {
        let mut merged = Vec::with_capacity(outer.len() + inner.len());
        for j in 0..outer.len() {
            merged.push(outer[j]);
            if j < inner.len() {
                merged.push(inner[j]);
            }
        }
        if inner.len() + 1 != outer.len() && !(outer.is_empty() && inner.is_empty()) {
            return Err(JresError::Inconsistent(format!("{what}: wrong sizes")));
        }
        if let Some(i) = strictly_increasing(&merged, margin) {
            return Err(JresError::Inconsistent(format!("{what} interlacing fails at {i}")));
        }
        Ok(())
    };
    inter(&s.mu, &s.tau, "mu/tau")?;
    inter(&s.mu, &s.mu_first, "mu/mu_first")?;
    if let Some(tf) = &s.tau_first {
        inter(&s.mu_first, tf, "mu_first/tau_first")?;
        inter(&s.tau, tf, "tau/tau_first")?;
    }
    Ok(())
}

/// Fundamental solutions `phi_x(lambda)` and `theta_x(lambda)` for
/// `x = 0..=p+1`, with `phi_0 = 0, phi_1 = 1, theta_0 = 1, theta_1 = 0` and
/// `a_x f_{x+1} = (lambda - b_x) f_x - a_{x-1} f_{x-1}`, `a_0 = 1`.
pub fn fundamental_polys(q: &Perturbation) -> (Vec<RealPoly>, Vec<RealPoly>) {
    let p = q.p();
    let run = |f0: f64, f1: f64| {
        let mut f = vec![RealPoly::constant(f0), RealPoly::constant(f1)];
        for x in 1..=p {
            let lam_minus_b = RealPoly::new(vec![-q.b_at(x), 1.0]);
            let next = &(&lam_minus_b * &f[x]) - &f[x - 1].scale(q.a_at(x - 1));
            f.push(next.scale(1.0 / q.a_at(x)));
        }
        f
    };
    (run(0.0, 1.0), run(1.0, 0.0))
}

/// `u^+ = phi_{p+1} - a_p phi_p` and `u^- = phi_{p+1} + a_p phi_p`.
pub fn u_pm(q: &Perturbation) -> (RealPoly, RealPoly) {
    let (phi, _) = fundamental_polys(q);
    let p = q.p();
    let ap = q.a_p();
    (
        &phi[p + 1] - &phi[p].scale(ap),
        &phi[p + 1] + &phi[p].scale(ap),
    )
}

/// Wronskian `{f, u}_x = a_x (f_x u_{x+1} - u_x f_{x+1})`.
pub fn wronskian(q: &Perturbation, f: &[Complex64], u: &[Complex64], x: usize) -> Complex64 {
    (f[x] * u[x + 1] - u[x] * f[x + 1]) * q.a_at(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jost::{jost_solutions, jost_values};
    use crate::tolerance::Tolerances;
    use nalgebra::DMatrix;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dense_eigs(j: &FiniteJacobi) -> Vec<f64> {
        let n = j.dim();
        let m = DMatrix::from_fn(n, n, |r, c| j.to_dense()[r][c]);
        let mut e: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
        e.sort_by(|a, b| a.partial_cmp(b).unwrap());
        e
    }

    fn random_q(rng: &mut ChaCha8Rng, pmax: usize) -> Perturbation {
        let p = rng.gen_range(1..=pmax);
        let a: Vec<f64> = (0..p).map(|_| rng.gen_range(0.2..3.0)).collect();
        let b: Vec<f64> = (0..p).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let mut a = a;
        if (a[p - 1] - 1.0).abs() < 1e-3 {
            a[p - 1] = 1.5;
        }
        Perturbation::new(a, b).unwrap()
    }

    #[test]
    fn eigenvalues_match_dense_solver() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let q = random_q(&mut rng, 12);
            let v = build_variants(&q).unwrap();
            let ours = eig_sym_tridiag(&v.plus);
            let theirs = dense_eigs(&v.plus);
            let scale = v.plus.norm_inf();
            for (x, y) in ours.iter().zip(&theirs) {
                assert!((x - y).abs() <= 1e-10 * scale, "{x} vs {y}");
            }
        }
    }

    fn interlacing_failures(margin: f64) -> Vec<(usize, String)> {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut bad = Vec::new();
        for i in 0..1000 {
            let q = random_q(&mut rng, 12);
            let s = variant_spectra(&build_variants(&q).unwrap());
            if let Err(e) = check_interlacing(&s, margin) {
                bad.push((i, e.to_string()));
            }
        }
        bad
    }

    #[test]
    fn interlacing_is_strict_on_random_matrices() {
        let bad = interlacing_failures(0.0);
        assert!(bad.is_empty(), "{bad:?}");
    }

    /// Required separation 1e-10 over 1000 draws with a in [0.2, 3],
    /// b in [-3, 3], p <= 12. About 4% of draws have true gaps below 1e-10
    /// because an eigenvector is exponentially small at an end site.
    #[test]
    fn interlacing_margin_on_random_matrices() {
        let bad = interlacing_failures(1e-10);
        assert!(bad.is_empty(), "{} of 1000 draws below margin: {:?}", bad.len(), &bad[..bad.len().min(5)]);
    }

    #[test]
    fn sturm_counts_agree_with_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let q = random_q(&mut rng, 12);
            let jp = build_variants(&q).unwrap().jp;
            let e = dense_eigs(&jp);
            let lo = rng.gen_range(-6.0..6.0);
            let hi = lo + rng.gen_range(0.0..6.0);
            let want = e.iter().filter(|&&x| x > lo && x < hi).count();
            assert_eq!(sturm_count(&jp, lo, hi), want);
        }
    }

    #[test]
    fn sturm_endpoint_on_eigenvalue() {
        let j = FiniteJacobi::new(vec![0.0, 0.0], vec![1.0]).unwrap();
        assert_eq!(sturm_count(&j, -1.0, 1.0), 0);
        assert_eq!(sturm_count(&j, -1.5, 1.0), 1);
        assert_eq!(sturm_count(&j, f64::NEG_INFINITY, f64::INFINITY), 2);
    }

    #[test]
    fn degenerate_single_site() {
        let q = Perturbation::new(vec![0.5], vec![1.0]).unwrap();
        let v = build_variants(&q).unwrap();
        assert_eq!(v.jp1.dim(), 0);
        assert_eq!(v.jp_first.dim(), 0);
        assert!(v.jp1_first.is_none());
        let s = variant_spectra(&v);
        assert_eq!(s.alpha_plus, vec![1.25]);
        assert_eq!(s.alpha_minus, vec![0.75]);
        assert!(s.tau.is_empty());
    }

    #[test]
    fn u_roots_are_variant_eigenvalues_and_scale() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let q = random_q(&mut rng, 8);
            let (up, um) = u_pm(&q);
            let s = variant_spectra(&build_variants(&q).unwrap());
            for (&x, u) in s.alpha_plus.iter().zip(std::iter::repeat(&up)) {
                let d = u.derivative().eval(x).abs().max(1e-300);
                assert!(u.eval(x).abs() / d < 1e-9);
            }
            for &x in &s.alpha_minus {
                let d = um.derivative().eval(x).abs().max(1e-300);
                assert!(um.eval(x).abs() / d < 1e-9);
            }
            // det(J^+ - lambda) has leading coefficient (-1)^p and equals
            // (-1)^p a_1 ... a_p u^+
            let p = q.p();
            let prod: f64 = q.a().iter().product();
            let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
            assert!((sign * prod * up.leading() - sign).abs() < 1e-12);
            let v = build_variants(&q).unwrap();
            let x = rng.gen_range(-3.0..3.0);
            let det = v.plus.det_and_derivative(x).0;
            let want = sign * prod * up.eval(x);
            assert!((det - want).abs() <= 1e-9 * (1.0 + det.abs()));
        }
    }

    #[test]
    fn wronskian_is_constant() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let tol = Tolerances::default();
        for _ in 0..100 {
            let q = random_q(&mut rng, 6);
            let z = Complex64::from_polar(rng.gen_range(0.2..0.9), rng.gen_range(-3.0..3.0));
            let psi = jost_solutions(&q, &tol).unwrap();
            let mut f = jost_values(&psi, z);
            f.push(z.powi(q.p() as i32 + 2));
            let g: Vec<Complex64> = (0..f.len()).map(|x| z.inv().powi(x as i32)).collect();
            let (phi, _) = fundamental_polys(&q);
            let lam = z + z.inv();
            let phiv: Vec<Complex64> = phi.iter().map(|p| p.eval_c(lam)).collect();
            // {psi, phi}_0 = psi_0
            let w0 = wronskian(&q, &f, &phiv, 0);
            assert!((w0 - f[0]).norm() <= 1e-9 * (1.0 + f[0].norm()));
            // {psi, psi(1/z)} far out equals 1/z - z and the psi/phi Wronskian
            // does not depend on x
            let far = q.p() + 1;
            let w = wronskian(&q, &f, &g, far);
            assert!((w - (z.inv() - z)).norm() < 1e-9 * (1.0 + w.norm()));
            for x in 1..=q.p() {
                let wx = wronskian(&q, &f, &phiv, x);
                assert!((wx - w0).norm() <= 1e-8 * (1.0 + w0.norm()));
            }
        }
    }

    #[test]
    fn boundary_value_scaling() {
        // a_p -> 0 collapses J^+ and J^- onto J_p; a_p -> infinity sends the
        // top of J^+ up and the bottom of J^- down.
        let mut q0 = Perturbation::new(vec![0.8, 1e-6], vec![0.3, -0.2]).unwrap();
        let s = variant_spectra(&build_variants(&q0).unwrap());
        for j in 0..2 {
            assert!((s.alpha_plus[j] - s.mu[j]).abs() < 1e-10);
            assert!((s.alpha_minus[j] - s.mu[j]).abs() < 1e-10);
        }
        q0 = Perturbation::new(vec![0.8, 1e3], vec![0.3, -0.2]).unwrap();
        let s = variant_spectra(&build_variants(&q0).unwrap());
        assert!(s.alpha_plus[1] > 1e5);
        assert!(s.alpha_minus[0] < -1e5);
        let v = build_variants(&q0).unwrap();
        // the remaining eigenvalues approach those of J_{p,1}
        let tau = eig_sym_tridiag(&v.jp1);
        assert!((s.alpha_plus[0] - tau[0]).abs() < 1e-5);
        assert!((s.alpha_minus[1] - tau[0]).abs() < 1e-5);
    }

    proptest! {
        #[test]
        fn eigenvalue_count_matches_dimension(
            b in prop::collection::vec(-3.0f64..3.0, 1..10),
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let off: Vec<f64> = (1..b.len()).map(|_| rng.gen_range(0.1..2.0)).collect();
            let j = FiniteJacobi::new(b, off).unwrap();
            let e = eig_sym_tridiag(&j);
            prop_assert_eq!(e.len(), j.dim());
            prop_assert_eq!(sturm_count(&j, f64::NEG_INFINITY, f64::INFINITY), j.dim());
        }
    }
}
