//! Real polynomials, Laurent polynomials and polynomial root finding.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{JresError, Result};
use crate::tolerance::Tolerances;

/// Real polynomial with coefficients in ascending order.
///
/// Trailing exact zeros are trimmed, so the zero polynomial has no
/// coefficients and degree `-1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPoly {
    coeffs: Vec<f64>,
}

impl RealPoly {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        RealPoly { coeffs }
    }

    pub fn zero() -> Self {
        RealPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        RealPoly::new(vec![c])
    }

    /// `c * x^n`.
    pub fn monomial(n: usize, c: f64) -> Self {
        let mut v = vec![0.0; n + 1];
        v[n] = c;
        RealPoly::new(v)
    }

    /// `x - c`.
    pub fn linear_root(c: f64) -> Self {
        RealPoly::new(vec![-c, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `x^n`, zero beyond the degree.
    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative at `z` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> RealPoly {
        if self.coeffs.len() <= 1 {
            return RealPoly::zero();
        }
        RealPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: f64) -> RealPoly {
        RealPoly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    /// Multiply by `x^n`.
    pub fn shift(&self, n: usize) -> RealPoly {
        if self.is_zero() {
            return RealPoly::zero();
        }
        let mut v = vec![0.0; n];
        v.extend_from_slice(&self.coeffs);
        RealPoly::new(v)
    }

    /// Drop trailing coefficients with `|c| <= tol * max|c|`.
    pub fn trim_relative(&self, tol: f64) -> RealPoly {
        let scale = self.max_abs_coeff();
        let mut v = self.coeffs.clone();
        while let Some(&c) = v.last() {
            if c.abs() <= tol * scale {
                v.pop();
            } else {
                break;
            }
        }
        RealPoly::new(v)
    }

    /// Polynomial with the coefficient order reversed over `0..=n`.
    pub fn reversed(&self, n: usize) -> RealPoly {
        let mut v: Vec<f64> = (0..=n).map(|i| self.coeff(i)).collect();
        v.reverse();
        RealPoly::new(v)
    }

    /// Synthetic division by `x - c`, returning quotient and remainder.
    pub fn div_linear(&self, c: f64) -> (RealPoly, f64) {
        let n = self.coeffs.len();
        if n == 0 {
            return (RealPoly::zero(), 0.0);
        }
        let mut q = vec![0.0; n - 1];
        let mut acc = 0.0;
        for i in (0..n).rev() {
            acc = acc * c + self.coeffs[i];
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        (RealPoly::new(q), acc)
    }

    /// Divide by `x - c` and require the remainder to vanish relative to the
    /// coefficient scale.
    pub fn div_linear_exact(&self, c: f64, tol: f64) -> Result<RealPoly> {
        let (q, r) = self.div_linear(c);
        let scale = self.max_abs_coeff().max(f64::MIN_POSITIVE);
        let rel = r.abs() / scale;
        if rel > tol {
            return Err(JresError::integrity("synthetic division remainder", rel, tol));
        }
        Ok(q)
    }
}

impl Add for &RealPoly {
    type Output = RealPoly;
    fn add(self, rhs: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RealPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RealPoly {
    type Output = RealPoly;
    fn sub(self, rhs: &RealPoly) -> RealPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RealPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RealPoly {
    type Output = RealPoly;
    fn mul(self, rhs: &RealPoly) -> RealPoly {
        if self.is_zero() || rhs.is_zero() {
            return RealPoly::zero();
        }
        let mut v = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        RealPoly::new(v)
    }
}

impl Neg for &RealPoly {
    type Output = RealPoly;
    fn neg(self) -> RealPoly {
        self.scale(-1.0)
    }
}

/// Laurent polynomial `sum_{n} c_n z^n` for `n` from `min_degree` upward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentPoly {
    pub min_degree: i32,
    pub coeffs: Vec<f64>,
}

impl LaurentPoly {
    pub fn new(min_degree: i32, coeffs: Vec<f64>) -> Self {
        LaurentPoly { min_degree, coeffs }
    }

    pub fn zero() -> Self {
        LaurentPoly::new(0, Vec::new())
    }

    pub fn monomial(n: i32, c: f64) -> Self {
        LaurentPoly::new(n, vec![c])
    }

    pub fn from_poly(p: &RealPoly) -> Self {
        LaurentPoly::new(0, p.coeffs().to_vec())
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.coeffs.len() as i32 - 1
    }

    /// Coefficient of `z^n`.
    pub fn coeff(&self, n: i32) -> f64 {
        let i = n - self.min_degree;
        if i < 0 {
            return 0.0;
        }
        self.coeffs.get(i as usize).copied().unwrap_or(0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        if self.coeffs.is_empty() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if self.min_degree < 0 && z.norm() == 0.0 {
            return Err(JresError::Domain(
                "Laurent polynomial with negative powers evaluated at z = 0".into(),
            ));
        }
        let body = self
            .coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
        Ok(body * z.powi(self.min_degree))
    }

    /// Multiply by `z^n`.
    pub fn shift(&self, n: i32) -> LaurentPoly {
        LaurentPoly::new(self.min_degree + n, self.coeffs.clone())
    }

    pub fn scale(&self, s: f64) -> LaurentPoly {
        LaurentPoly::new(self.min_degree, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.coeffs.is_empty() {
            return rhs.clone();
        }
        if rhs.coeffs.is_empty() {
            return self.clone();
        }
        let lo = self.min_degree.min(rhs.min_degree);
        let hi = self.max_degree().max(rhs.max_degree());
        LaurentPoly::new(lo, (lo..=hi).map(|n| self.coeff(n) + rhs.coeff(n)).collect())
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add(&rhs.scale(-1.0))
    }

    /// Multiply by `z + 1/z - b`.
    pub fn mul_lambda_minus(&self, b: f64) -> LaurentPoly {
        self.shift(1).add(&self.shift(-1)).add(&self.scale(-b))
    }

    /// Drop negative powers whose coefficients are at most `tol` relative to
    /// the coefficient scale; fail if a larger one remains. Trailing exact
    /// zeros are trimmed.
    pub fn into_poly(&self, tol: f64) -> Result<RealPoly> {
        let scale = self.max_abs_coeff();
        let mut out = Vec::new();
        for n in self.min_degree..=self.max_degree() {
            let c = self.coeff(n);
            if n < 0 {
                if c.abs() > tol * scale {
                    return Err(JresError::integrity(
                        "negative-power cancellation",
                        c.abs() / scale.max(f64::MIN_POSITIVE),
                        tol,
                    ));
                }
            } else {
                out.push(c);
            }
        }
        // positive min_degree: pad leading zeros
        if self.min_degree > 0 {
            let mut v = vec![0.0; self.min_degree as usize];
            v.extend(out);
            return Ok(RealPoly::new(v));
        }
        Ok(RealPoly::new(out))
    }

    /// True if `c_n = c_{-n}` within `tol` relative to the coefficient scale.
    pub fn is_symmetric(&self, tol: f64) -> bool {
        let scale = self.max_abs_coeff();
        let m = self.min_degree.abs().max(self.max_degree().abs());
        (1..=m).all(|n| (self.coeff(n) - self.coeff(-n)).abs() <= tol * scale)
    }
}

/// Root with multiplicity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub z: Complex64,
    pub mult: usize,
}

/// Multiset of polynomial roots.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
}

impl RootSet {
    pub fn new(roots: Vec<Root>) -> Self {
        RootSet { roots }
    }

    /// Build from a flat list, one entry per root counted with multiplicity.
    pub fn from_flat(zs: &[Complex64]) -> Self {
        RootSet::new(zs.iter().map(|&z| Root { z, mult: 1 }).collect())
    }

    /// Total count including multiplicity.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|r| r.mult).sum()
    }

    /// Each root repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<Complex64> {
        self.roots
            .iter()
            .flat_map(|r| std::iter::repeat_n(r.z, r.mult))
            .collect()
    }

    pub fn sort_by_modulus(&mut self) {
        self.roots.sort_by(|a, b| {
            a.z.norm()
                .partial_cmp(&b.z.norm())
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(a.z.re.partial_cmp(&b.z.re).unwrap_or(std::cmp::Ordering::Equal))
                .then(a.z.im.partial_cmp(&b.z.im).unwrap_or(std::cmp::Ordering::Equal))
        });
    }

    /// Product of all roots counted with multiplicity.
    pub fn product(&self) -> Complex64 {
        self.roots
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, r| acc * r.z.powi(r.mult as i32))
    }
}

/// Bipartite match of two flat root lists; returns the largest relative
/// distance `|x - y| / max(1, |x|)` over the best greedy pairing, or `None` if
/// the lengths differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0_f64;
    // match the hardest (largest modulus first) entries greedily
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| a[j].norm().partial_cmp(&a[i].norm()).unwrap());
    for i in order {
        let mut best = None;
        let mut bd = f64::INFINITY;
        for (j, y) in b.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (a[i] - y).norm() / a[i].norm().max(1.0);
            if d < bd {
                bd = d;
                best = Some(j);
            }
        }
        used[best?] = true;
        worst = worst.max(bd);
    }
    Some(worst)
}

/// Initial Aberth iterates from the upper convex hull of `(i, log|c_i|)`.
fn initial_guesses(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let pts: Vec<(f64, f64)> = c
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let m = z.norm();
            (i as f64, if m > 0.0 { m.ln() } else { f64::NEG_INFINITY })
        })
        .collect();
    let mut hull: Vec<usize> = Vec::new();
    for i in 0..=n {
        if pts[i].1 == f64::NEG_INFINITY {
            continue;
        }
        while hull.len() >= 2 {
            let a = pts[hull[hull.len() - 2]];
            let b = pts[hull[hull.len() - 1]];
            let cross = (b.0 - a.0) * (pts[i].1 - a.1) - (b.1 - a.1) * (pts[i].0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    let mut out = Vec::with_capacity(n);
    let sigma = 0.7;
    for w in hull.windows(2) {
        let (i, j) = (w[0], w[1]);
        let m = j - i;
        let u = ((pts[i].1 - pts[j].1) / m as f64).exp();
        for t in 0..m {
            let ang = 2.0 * std::f64::consts::PI * t as f64 / m as f64
                + 2.0 * std::f64::consts::PI * i as f64 / n as f64
                + sigma;
            out.push(Complex64::from_polar(u, ang));
        }
    }
    out
}

/// Aberth–Ehrlich simultaneous iteration on a polynomial with nonzero
/// constant term. Returns one iterate per root.
fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len() - 1;
    let mut z = initial_guesses(c);
    let eval = |x: Complex64| {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &a in c.iter().rev() {
            dp = dp * x + p;
            p = p * x + a;
        }
        (p, dp)
    };
    let mut converged = vec![false; n];
    for _ in 0..2000 {
        let mut all = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = eval(z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 0.0 {
                        s += d.inv();
                    }
                }
            }
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 2.0 * f64::EPSILON * z[i].norm() {
                converged[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    z
}

/// Group iterates into clusters of nearby roots. A cluster of size `m` is
/// accepted when all members lie within `2 * tol^(1/m) * |z|` of each other
/// and the rounding uncertainty of a member, `8 eps B(|z|) / |p'(z)|` with
/// `B` the polynomial of absolute coefficients, is not small against the
/// distance to its neighbours.
fn cluster(p: &RealPoly, z: &[Complex64], tol: f64) -> Vec<(Root, f64)> {
    let n = z.len();
    let abs = RealPoly::new(p.coeffs().iter().map(|c| c.abs()).collect());
    let blur: Vec<f64> = z
        .iter()
        .map(|&x| {
            let df = p.derivative().eval_c(x).norm();
            8.0 * f64::EPSILON * abs.eval(x.norm()) / df
        })
        .collect();
    let mut nearest: Vec<Vec<(f64, usize)>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut d: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != i)
            .map(|j| ((z[i] - z[j]).norm(), j))
            .collect();
        d.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        nearest.push(d);
    }
    let radius = |m: usize, at: Complex64| 2.0 * tol.powf(1.0 / m as f64) * at.norm();
    let mut cand: Vec<(usize, usize)> = (0..n)
        .map(|i| {
            let mut m = 1;
            for (k, &(d, _)) in nearest[i].iter().enumerate() {
                if d <= radius(k + 2, z[i]) && blur[i] > 1e-2 * d {
                    m = k + 2;
                }
            }
            (m, i)
        })
        .collect();
    cand.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut used = vec![false; n];
    let mut out = Vec::new();
    for (m, i) in cand {
        if used[i] {
            continue;
        }
        let mut members = vec![i];
        for &(d, j) in &nearest[i] {
            if members.len() >= m {
                break;
            }
            if !used[j] && d <= radius(m, z[i]) {
                members.push(j);
            }
        }
        for &j in &members {
            used[j] = true;
        }
        let c = members.iter().map(|&j| z[j]).sum::<Complex64>() / members.len() as f64;
        let spread = members.iter().map(|&j| (z[j] - c).norm()).fold(0.0, f64::max);
        out.push((
            Root {
                z: c,
                mult: members.len(),
            },
            spread,
        ));
    }
    out
}

/// All complex roots of `p` with multiplicities.
///
/// Roots are snapped to the real axis when `|Im r| <= tol.root_snap * (1 + |r|)`,
/// complex roots are returned in exact conjugate pairs, and the set is sorted
/// by modulus.
pub fn poly_roots(p: &RealPoly, tol: &Tolerances) -> Result<RootSet> {
    if p.degree() < 1 {
        return Err(JresError::Domain(format!(
            "root finding needs degree >= 1, got {}",
            p.degree()
        )));
    }
    if p.coeffs().iter().any(|c| !c.is_finite()) {
        return Err(JresError::InvalidInput("non-finite coefficient".into()));
    }
    let mut roots = Vec::new();
    let zeros = p.coeffs().iter().take_while(|&&c| c == 0.0).count();
    if zeros > 0 {
        roots.push(Root {
            z: Complex64::new(0.0, 0.0),
            mult: zeros,
        });
    }
    let lead = p.leading();
    let c: Vec<Complex64> = p.coeffs()[zeros..]
        .iter()
        .map(|&x| Complex64::new(x / lead, 0.0))
        .collect();
    if c.len() > 1 {
        let mut z = aberth(&c);
        // Newton polish
        for zi in z.iter_mut() {
            for _ in 0..3 {
                let (f, df) = p.eval_with_derivative(*zi);
                if df.norm() == 0.0 {
                    break;
                }
                let step = f / df;
                let cand = *zi - step;
                if p.eval_c(cand).norm() < f.norm() {
                    *zi = cand;
                } else {
                    break;
                }
            }
        }
        let clustered = cluster(p, &z, tol.cluster);
        roots.extend(pair_conjugates(clustered, tol.root_snap)?);
    }
    let mut rs = RootSet::new(roots);
    rs.sort_by_modulus();
    Ok(rs)
}

/// Snap near-real clusters to the axis and average conjugate partners. A
/// cluster whose imaginary part is within its own spread contains its own
/// conjugate and is real.
fn pair_conjugates(mut rs: Vec<(Root, f64)>, snap: f64) -> Result<Vec<Root>> {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut out = Vec::new();
    for (r, spread) in rs.drain(..) {
        if r.z.im.abs() <= (snap * (1.0 + r.z.norm())).max(spread) {
            out.push(Root {
                z: Complex64::new(r.z.re, 0.0),
                mult: r.mult,
            });
        } else if r.z.im > 0.0 {
            upper.push(r);
        } else {
            lower.push(r);
        }
    }
    let mut taken = vec![false; lower.len()];
    for u in upper {
        let mut best = None;
        let mut bd = f64::INFINITY;
        for (j, l) in lower.iter().enumerate() {
            if taken[j] || l.mult != u.mult {
                continue;
            }
            let d = (u.z - l.z.conj()).norm();
            if d < bd {
                bd = d;
                best = Some(j);
            }
        }
        let j = best.ok_or_else(|| {
            JresError::Numerical(format!("root {} has no conjugate partner", u.z))
        })?;
        taken[j] = true;
        let z = (u.z + lower[j].z.conj()) * 0.5;
        out.push(Root { z, mult: u.mult });
        out.push(Root {
            z: z.conj(),
            mult: u.mult,
        });
    }
    if taken.iter().any(|t| !t) {
        return Err(JresError::Numerical("unpaired complex root".into()));
    }
    Ok(out)
}

/// Real polynomial `leading * prod (z - r)` over a conjugate-closed multiset.
pub fn poly_from_roots(roots: &RootSet, leading: f64, tol: &Tolerances) -> Result<RealPoly> {
    let flat = roots.expanded();
    let mut reals = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in flat {
        if z.im == 0.0 {
            reals.push(z.re);
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z);
        }
    }
    if upper.len() != lower.len() {
        return Err(JresError::Domain("root set is not closed under conjugation".into()));
    }
    let mut taken = vec![false; lower.len()];
    let mut p = RealPoly::constant(leading);
    for u in upper {
        let mut best = None;
        let mut bd = f64::INFINITY;
        for (j, l) in lower.iter().enumerate() {
            if !taken[j] {
                let d = (u - l.conj()).norm();
                if d < bd {
                    bd = d;
                    best = Some(j);
                }
            }
        }
        let j = best.unwrap();
        if bd > tol.root_snap * (1.0 + u.norm()) {
            return Err(JresError::Domain(format!(
                "root {u} has no conjugate partner (nearest off by {bd:.3e})"
            )));
        }
        taken[j] = true;
        let z = (u + lower[j].conj()) * 0.5;
        p = &p * &RealPoly::new(vec![z.norm_sqr(), -2.0 * z.re, 1.0]);
    }
    for r in reals {
        p = &p * &RealPoly::linear_root(r);
    }
    Ok(p)
}

/// Convert a symmetric Laurent polynomial `g(z) = c_0 + sum c_n (z^n + z^-n)`
/// to the polynomial `P` with `P(z + 1/z) = g(z)`.
pub fn symmetric_laurent_to_lambda(g: &LaurentPoly, tol: f64) -> Result<RealPoly> {
    if g.coeffs.is_empty() {
        return Ok(RealPoly::zero());
    }
    if !g.is_symmetric(tol) {
        return Err(JresError::Domain("Laurent polynomial is not symmetric".into()));
    }
    let m = g.min_degree.abs().max(g.max_degree().abs());
    // basis p_0 = 2, p_1 = x, p_n = x p_{n-1} - p_{n-2}
    let mut prev = RealPoly::constant(2.0);
    let mut cur = RealPoly::monomial(1, 1.0);
    let mut out = RealPoly::constant(g.coeff(0));
    for n in 1..=m {
        let c = 0.5 * (g.coeff(n) + g.coeff(-n));
        out = &out + &cur.scale(c);
        let next = &cur.shift(1) - &prev;
        prev = cur;
        cur = next;
    }
    Ok(out)
}
