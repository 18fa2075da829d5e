//! Perturbations, their class `k`, and the Jost solution.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{JresError, Result};
use crate::poly::{poly_roots, LaurentPoly, RealPoly};
use crate::tolerance::Tolerances;

/// Finitely supported perturbation `(a_x, b_x)`, `x = 1..=p`, of the free
/// half-lattice Jacobi operator.
///
/// Stored with trailing free entries (`a = 1`, `b = 0`) removed, so `p` is
/// the support length and `k` the class: `2p` when `a_p != 1`, otherwise
/// `2p - 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    a: Vec<f64>,
    b: Vec<f64>,
    k: usize,
}

/// Class `k` of a perturbation given by its raw coefficient lists.
pub fn classify_k(a: &[f64], b: &[f64], tol: &Tolerances) -> Result<usize> {
    Ok(Perturbation::with_tolerances(a.to_vec(), b.to_vec(), tol)?.k)
}

impl Perturbation {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Perturbation::with_tolerances(a, b, &Tolerances::default())
    }

    pub fn with_tolerances(mut a: Vec<f64>, mut b: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if a.len() != b.len() {
            return Err(JresError::InvalidInput(format!(
                "a has {} entries but b has {}",
                a.len(),
                b.len()
            )));
        }
        for (x, (&ax, &bx)) in a.iter().zip(&b).enumerate() {
            if !ax.is_finite() || !bx.is_finite() {
                return Err(JresError::InvalidInput(format!("non-finite entry at x = {}", x + 1)));
            }
            if ax <= 0.0 {
                return Err(JresError::InvalidInput(format!(
                    "a_{} = {ax} must be positive",
                    x + 1
                )));
            }
        }
        while let (Some(&ax), Some(&bx)) = (a.last(), b.last()) {
            if (ax - 1.0).abs() <= tol.unit_band && bx == 0.0 {
                a.pop();
                b.pop();
            } else {
                break;
            }
        }
        let p = a.len();
        let k = if p == 0 {
            0
        } else if (a[p - 1] - 1.0).abs() <= tol.unit_band {
            a[p - 1] = 1.0;
            2 * p - 1
        } else {
            2 * p
        };
        Ok(Perturbation { a, b, k })
    }

    pub fn trivial() -> Self {
        Perturbation {
            a: Vec::new(),
            b: Vec::new(),
            k: 0,
        }
    }

    pub fn p(&self) -> usize {
        self.a.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_trivial(&self) -> bool {
        self.k == 0
    }

    pub fn is_even(&self) -> bool {
        self.k.is_multiple_of(2)
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    /// `a_x` for any `x >= 0`, with `a_0 = 1` and `a_x = 1` beyond the support.
    pub fn a_at(&self, x: usize) -> f64 {
        if x == 0 || x > self.p() {
            1.0
        } else {
            self.a[x - 1]
        }
    }

    /// `b_x` for any `x >= 1`, zero beyond the support.
    pub fn b_at(&self, x: usize) -> f64 {
        if x == 0 || x > self.p() {
            0.0
        } else {
            self.b[x - 1]
        }
    }

    pub fn a_p(&self) -> f64 {
        self.a_at(self.p())
    }

    pub fn b_p(&self) -> f64 {
        self.b_at(self.p())
    }

    /// `A_x = a_p a_{p-1} ... a_x`; `A_0 = A_1`.
    pub fn a_product(&self, x: usize) -> f64 {
        (x.max(1)..=self.p()).map(|i| self.a_at(i)).product()
    }

    /// Flat vector `(b_1, a_1 - 1, b_2, a_2 - 1, ...)`.
    pub fn q_vector(&self) -> Vec<f64> {
        self.a
            .iter()
            .zip(&self.b)
            .flat_map(|(&a, &b)| [b, a - 1.0])
            .collect()
    }

    /// Relative infinity-norm distance `||q - other|| / max(1, ||q||)`,
    /// padding the shorter support with free entries.
    pub fn distance(&self, other: &Perturbation) -> f64 {
        let n = self.p().max(other.p());
        let mut num = 0.0_f64;
        let mut den = 1.0_f64;
        for x in 1..=n {
            num = num
                .max((self.a_at(x) - other.a_at(x)).abs())
                .max((self.b_at(x) - other.b_at(x)).abs());
            den = den.max((self.a_at(x) - 1.0).abs()).max(self.b_at(x).abs());
        }
        num / den
    }

    /// Mirror image `b -> -b`, whose Jost function is `psi_0(-z)`.
    pub fn mirrored(&self) -> Perturbation {
        Perturbation {
            a: self.a.clone(),
            b: self.b.iter().map(|x| -x).collect(),
            k: self.k,
        }
    }
}

/// Jost solution polynomials `psi_x(z)` for `x = 0..=p+1`.
///
/// Built by the downward recursion
/// `a_{x-1} psi_{x-1} = (z + 1/z - b_x) psi_x - a_x psi_{x+1}` from
/// `psi_x = z^x` for `x > p`.
pub fn jost_solutions(q: &Perturbation, tol: &Tolerances) -> Result<Vec<RealPoly>> {
    let p = q.p();
    let mut laurent = vec![LaurentPoly::zero(); p + 3];
    laurent[p + 2] = LaurentPoly::monomial(p as i32 + 2, 1.0);
    laurent[p + 1] = LaurentPoly::monomial(p as i32 + 1, 1.0);
    for x in (1..=p + 1).rev() {
        let next = laurent[x]
            .mul_lambda_minus(q.b_at(x))
            .sub(&laurent[x + 1].scale(q.a_at(x)))
            .scale(1.0 / q.a_at(x - 1));
        laurent[x - 1] = next;
    }
    let mut out = Vec::with_capacity(p + 2);
    for l in laurent.iter().take(p + 2) {
        out.push(l.into_poly(tol.cancellation)?);
    }
    let deg = out[0].degree();
    if deg != q.k() as isize {
        return Err(JresError::integrity(
            "degree of psi_0 equals k",
            (deg - q.k() as isize).abs() as f64,
            0.0,
        ));
    }
    Ok(out)
}

/// The Jost function `psi_0`.
pub fn jost_function(q: &Perturbation, tol: &Tolerances) -> Result<RealPoly> {
    Ok(jost_solutions(q, tol)?.swap_remove(0))
}

/// Values `psi_x(z)` for `x = 0..=p+1`.
pub fn jost_values(psi: &[RealPoly], z: Complex64) -> Vec<Complex64> {
    psi.iter().map(|f| f.eval_c(z)).collect()
}

/// Residuals of the closed-form coefficient and root identities of `psi_0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub a0: f64,
    pub c_p: f64,
    /// Expected and computed coefficient of `z^k`.
    pub leading: (f64, f64),
    /// Expected and computed constant term `1 / A_0`.
    pub constant: (f64, f64),
    /// Expected and computed linear term `-(b_1 + ... + b_p) / A_0`.
    pub linear: (f64, f64),
    /// Expected and computed product of all roots.
    pub root_product: (f64, f64),
    /// Expected and computed sum of reciprocal roots.
    pub reciprocal_sum: (f64, f64),
    pub max_residual: f64,
}

fn rel(expected: f64, got: f64) -> f64 {
    (expected - got).abs() / expected.abs().max(1.0)
}

/// Check the closed-form coefficient identities of `psi_0` and the root
/// product and reciprocal-sum identities.
pub fn verify_identities(
    q: &Perturbation,
    psi0: &RealPoly,
    tol: &Tolerances,
) -> Result<AsymptoticReport> {
    let a0 = q.a_product(0);
    let c_p = 1.0 - q.a_p() * q.a_p();
    let sum_b: f64 = q.b().iter().sum();
    let k = q.k();
    let leading_expected = if q.is_trivial() {
        1.0
    } else if q.is_even() {
        c_p / a0
    } else {
        -q.b_p() / a0
    };
    let leading = (leading_expected, psi0.coeff(k));
    let constant = (1.0 / a0, psi0.coeff(0));
    let linear = (-sum_b / a0, psi0.coeff(1));
    let (root_product, reciprocal_sum) = if k == 0 {
        ((1.0, 1.0), (0.0, 0.0))
    } else {
        let rs = poly_roots(psi0, tol)?;
        let prod = rs.product();
        let recip: Complex64 = rs
            .roots
            .iter()
            .map(|r| r.z.inv() * r.mult as f64)
            .sum();
        let expected = if q.is_even() { 1.0 / c_p } else { 1.0 / q.b_p() };
        ((expected, prod.re), (sum_b, recip.re))
    };
    let max_residual = [
        rel(leading.0, leading.1),
        rel(constant.0, constant.1),
        rel(linear.0, linear.1),
        rel(root_product.0, root_product.1),
        rel(reciprocal_sum.0, reciprocal_sum.1),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    if max_residual > tol.identity {
        return Err(JresError::integrity("Jost coefficient identities", max_residual, tol.identity));
    }
    Ok(AsymptoticReport {
        a0,
        c_p,
        leading,
        constant,
        linear,
        root_product,
        reciprocal_sum,
        max_residual,
    })
}

/// True iff `b = 0`; in that case every `psi_x` has the parity of `x`.
///
/// Fails with an integrity error if the parity structure of the polynomials
/// disagrees with `b`.
pub fn check_symmetry(q: &Perturbation, psi: &[RealPoly]) -> Result<bool> {
    let zero_b = q.b().iter().all(|&x| x == 0.0);
    let parity_ok = psi.iter().enumerate().all(|(x, f)| {
        let scale = f.max_abs_coeff();
        f.coeffs()
            .iter()
            .enumerate()
            .all(|(n, c)| (n + x) % 2 == 0 || c.abs() <= 1e-14 * scale)
    });
    if zero_b && !parity_ok {
        return Err(JresError::integrity("parity of Jost solutions for b = 0", 1.0, 0.0));
    }
    Ok(zero_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn classification() {
        let t = tol();
        assert_eq!(classify_k(&[1.0], &[2.0], &t).unwrap(), 1);
        assert_eq!(classify_k(&[0.5], &[0.0], &t).unwrap(), 2);
        assert_eq!(classify_k(&[1.0, 1.0 + 1e-13], &[3.0, -1.0], &t).unwrap(), 3);
        assert_eq!(classify_k(&[0.5, 1.0], &[0.0, 0.0], &t).unwrap(), 2);
        assert_eq!(classify_k(&[], &[], &t).unwrap(), 0);
        assert!(classify_k(&[0.0], &[1.0], &t).is_err());
        assert!(classify_k(&[1.0, 2.0], &[1.0], &t).is_err());
    }

    #[test]
    fn single_site() {
        let q = Perturbation::new(vec![1.0], vec![2.0]).unwrap();
        let psi = jost_solutions(&q, &tol()).unwrap();
        assert_eq!(psi[0].coeffs(), &[1.0, -2.0]);
        assert_eq!(psi[1].coeffs(), &[0.0, 1.0]);
    }

    #[test]
    fn two_sites_quartic() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let q = Perturbation::new(vec![h, h], vec![0.0, 0.0]).unwrap();
        let psi0 = jost_function(&q, &tol()).unwrap();
        let want = [2.0, 0.0, 2.0, 0.0, 1.0];
        for (i, w) in want.iter().enumerate() {
            assert!((psi0.coeff(i) - w).abs() < 1e-13);
        }
        assert_eq!(psi0.degree(), 4);
        assert!(check_symmetry(&q, &jost_solutions(&q, &tol()).unwrap()).unwrap());
    }

    #[test]
    fn trivial_jost_is_one() {
        let q = Perturbation::trivial();
        let psi0 = jost_function(&q, &tol()).unwrap();
        assert_eq!(psi0.coeffs(), &[1.0]);
        let rep = verify_identities(&q, &psi0, &tol()).unwrap();
        assert_eq!(rep.max_residual, 0.0);
    }

    #[test]
    fn k2_closed_form() {
        // psi_0 = (c_1 z^2 - b_1 z + 1) / a_1
        let (a, b) = (0.6, -0.4);
        let q = Perturbation::new(vec![a], vec![b]).unwrap();
        let psi0 = jost_function(&q, &tol()).unwrap();
        let want = [1.0 / a, -b / a, (1.0 - a * a) / a];
        for (i, w) in want.iter().enumerate() {
            assert!((psi0.coeff(i) - w).abs() < 1e-14);
        }
    }

    /// Independent oracle: step the recursion numerically at a point.
    fn psi0_at(q: &Perturbation, z: Complex64) -> Complex64 {
        let p = q.p();
        let mut hi = z.powi(p as i32 + 2);
        let mut cur = z.powi(p as i32 + 1);
        for x in (1..=p + 1).rev() {
            let lam = z + z.inv();
            let next = ((lam - q.b_at(x)) * cur - hi * q.a_at(x)) / q.a_at(x - 1);
            hi = cur;
            cur = next;
        }
        cur
    }

    fn arb_q() -> impl Strategy<Value = Perturbation> {
        (1usize..7, any::<bool>())
            .prop_flat_map(|(p, odd)| {
                (
                    prop::collection::vec(0.3f64..2.0, p),
                    prop::collection::vec(-2.0f64..2.0, p),
                    Just(odd),
                )
            })
            .prop_map(|(mut a, mut b, odd)| {
                let p = a.len();
                if odd {
                    a[p - 1] = 1.0;
                    if b[p - 1].abs() < 0.05 {
                        b[p - 1] = 0.5;
                    }
                } else if (a[p - 1] - 1.0).abs() < 0.05 {
                    a[p - 1] = 0.5;
                }
                Perturbation::new(a, b).unwrap()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn degree_is_k_and_identities_hold(q in arb_q()) {
            let psi = jost_solutions(&q, &tol()).unwrap();
            prop_assert_eq!(psi[0].degree(), q.k() as isize);
            verify_identities(&q, &psi[0], &tol()).unwrap();
        }

        #[test]
        fn polynomial_matches_pointwise_recursion(q in arb_q(), re in -1.5f64..1.5, im in -1.5f64..1.5) {
            let z = Complex64::new(re, im);
            prop_assume!(z.norm() > 0.1);
            let psi0 = jost_function(&q, &tol()).unwrap();
            let want = psi0_at(&q, z);
            prop_assert!((psi0.eval_c(z) - want).norm() <= 1e-10 * (1.0 + want.norm()));
        }

        #[test]
        fn symmetry_iff_b_zero(q in arb_q()) {
            let psi = jost_solutions(&q, &tol()).unwrap();
            let zero_b = q.b().iter().all(|&x| x == 0.0);
            prop_assert_eq!(check_symmetry(&q, &psi).unwrap(), zero_b);
        }
    }
}
