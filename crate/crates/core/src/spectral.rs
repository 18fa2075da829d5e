//! Spectral data carried by the Jost function: root classification, norming
//! constants, sign and parity relations, the scattering phase, the `omega`
//! sequence, forbidden regions and the admissibility rules for resonance sets.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{JresError, Result, Rule};
use crate::inverse::OmegaSequence;
use crate::jacobi::{build_variants, sturm_count, variant_spectra, VariantSpectra};
use crate::jost::{jost_function, jost_solutions, Perturbation};
use crate::poly::{poly_roots, RealPoly, Root, RootSet};
use crate::tolerance::Tolerances;

/// Bound state `s` in `(-1, 1)` with eigenvalue `s + 1/s`.
///
/// Positive states are indexed `1, 2, ...` outward from zero, negative states
/// `-1, -2, ...` likewise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundState {
    pub index: i32,
    pub s: f64,
    pub lambda: f64,
    pub norming: f64,
}

/// Classified roots of a Jost function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralData {
    pub psi0: RealPoly,
    /// Negative states first (outermost first), then positive states
    /// (innermost first): increasing in `s`.
    pub bound_states: Vec<BoundState>,
    /// Roots outside the closed unit disc, sorted by modulus.
    pub resonances: Vec<Root>,
    pub virtual_plus: bool,
    pub virtual_minus: bool,
    pub n_plus: usize,
    pub n_minus: usize,
}

impl SpectralData {
    /// Positive bound state `s_j`, `j >= 1`.
    pub fn s_plus(&self, j: usize) -> Option<f64> {
        self.bound_states
            .iter()
            .find(|b| b.index == j as i32)
            .map(|b| b.s)
    }

    /// Negative bound state `s_{-j}`, `j >= 1`.
    pub fn s_minus(&self, j: usize) -> Option<f64> {
        self.bound_states
            .iter()
            .find(|b| b.index == -(j as i32))
            .map(|b| b.s)
    }

    /// Every root counted with multiplicity, sorted by modulus.
    pub fn roots(&self) -> RootSet {
        let mut v: Vec<Root> = self
            .bound_states
            .iter()
            .map(|b| Root {
                z: Complex64::new(b.s, 0.0),
                mult: 1,
            })
            .collect();
        if self.virtual_plus {
            v.push(Root {
                z: Complex64::new(1.0, 0.0),
                mult: 1,
            });
        }
        if self.virtual_minus {
            v.push(Root {
                z: Complex64::new(-1.0, 0.0),
                mult: 1,
            });
        }
        v.extend(self.resonances.iter().copied());
        let mut rs = RootSet::new(v);
        rs.sort_by_modulus();
        rs
    }

    pub fn resonance_count(&self) -> usize {
        self.resonances.iter().map(|r| r.mult).sum()
    }
}

/// Classify the roots of `psi0` into bound states, virtual states and
/// resonances, with norming constants `s psi0'(s) / psi0(1/s)`.
pub fn classify_roots(psi0: &RealPoly, tol: &Tolerances) -> Result<SpectralData> {
    let mut out = SpectralData {
        psi0: psi0.clone(),
        bound_states: Vec::new(),
        resonances: Vec::new(),
        virtual_plus: false,
        virtual_minus: false,
        n_plus: 0,
        n_minus: 0,
    };
    if psi0.degree() < 1 {
        return Ok(out);
    }
    let rs = poly_roots(psi0, tol)?;
    let dpsi = psi0.derivative();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for r in rs.roots {
        let m = r.z.norm();
        if (m - 1.0).abs() <= tol.circle_band {
            let side = if (r.z - 1.0).norm() <= tol.circle_band {
                &mut out.virtual_plus
            } else if (r.z + 1.0).norm() <= tol.circle_band {
                &mut out.virtual_minus
            } else {
                return Err(JresError::Integrity {
                    check: format!("unit-circle root {} is not +-1", r.z),
                    residual: r.z.im.abs(),
                    tolerance: tol.circle_band,
                });
            };
            if r.mult > 1 || *side {
                return Err(JresError::integrity("virtual state is simple", r.mult as f64, 1.0));
            }
            *side = true;
        } else if m < 1.0 {
            if r.z.im != 0.0 || r.mult > 1 {
                return Err(JresError::Integrity {
                    check: format!("disc root {} is real and simple", r.z),
                    residual: r.z.im.abs(),
                    tolerance: tol.root_snap,
                });
            }
            if r.z.re > 0.0 {
                pos.push(r.z.re);
            } else {
                neg.push(r.z.re);
            }
        } else {
            out.resonances.push(r);
        }
    }
    pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    neg.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mk = |s: f64, index: i32| {
        let norming = s * dpsi.eval(s) / psi0.eval(1.0 / s);
        BoundState {
            index,
            s,
            lambda: s + 1.0 / s,
            norming,
        }
    };
    let mut states: Vec<BoundState> = neg
        .iter()
        .enumerate()
        .map(|(i, &s)| mk(s, -(i as i32 + 1)))
        .chain(pos.iter().enumerate().map(|(i, &s)| mk(s, i as i32 + 1)))
        .collect();
    states.sort_by(|a, b| a.s.partial_cmp(&b.s).unwrap());
    out.n_plus = pos.len();
    out.n_minus = neg.len();
    out.bound_states = states;
    Ok(out)
}

/// Jost function of `q` and its classified roots.
pub fn spectral_data(q: &Perturbation, tol: &Tolerances) -> Result<SpectralData> {
    let psi0 = jost_function(q, tol)?;
    classify_roots(&psi0, tol)
}

/// `sum_{x >= 1} psi_x(s)^2`, with the free tail summed in closed form.
pub fn norming_sum(psi: &[RealPoly], s: f64) -> f64 {
    let p = psi.len() - 2;
    let head: f64 = psi[1..=p].iter().map(|f| f.eval(s).powi(2)).sum();
    head + s.powi(2 * (p as i32 + 1)) / (1.0 - s * s)
}

/// Verify every norming constant against the direct sum of `psi_x(s)^2`.
pub fn check_norming(q: &Perturbation, sd: &SpectralData, tol: &Tolerances) -> Result<f64> {
    let psi = jost_solutions(q, tol)?;
    let mut worst = 0.0_f64;
    for b in &sd.bound_states {
        let direct = norming_sum(&psi, b.s);
        worst = worst.max((direct - b.norming).abs() / direct.abs().max(1e-300));
    }
    if worst > tol.identity {
        return Err(JresError::integrity("norming constant equals sum of squares", worst, tol.identity));
    }
    Ok(worst)
}

fn count_real_in(roots: &[Complex64], lo: f64, hi: f64) -> usize {
    roots
        .iter()
        .filter(|z| z.im == 0.0 && z.re > lo && z.re < hi)
        .count()
}

/// Outcome of one named relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

/// Sign and parity relations of a Jost function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignReport {
    pub checks: Vec<Check>,
}

/// Check the derivative signs at bound states, the signs at their reciprocals
/// and the parity of root counts between and beyond them.
///
/// On the positive side `(-1)^j psi0'(s_j) > 0` and `(-1)^j psi0(1/s_j) > 0`;
/// the negative side is the mirror image under `z -> -z`.
pub fn sign_checks(q: &Perturbation, sd: &SpectralData) -> Result<SignReport> {
    let psi0 = &sd.psi0;
    let d = psi0.derivative();
    let roots = sd.roots().expanded();
    let mut checks = Vec::new();
    let mut push = |name: String, ok: bool| checks.push(Check { name, ok });
    for b in &sd.bound_states {
        let j = b.index;
        let sgn = if j.abs() % 2 == 0 { 1.0 } else { -1.0 };
        let mirror = if j > 0 { 1.0 } else { -1.0 };
        push(format!("derivative sign at s_{j}"), mirror * sgn * d.eval(b.s) > 0.0);
        push(format!("sign at 1/s_{j}"), sgn * psi0.eval(1.0 / b.s) > 0.0);
        push(format!("norming positive at s_{j}"), b.norming > 0.0);
    }
    let n_p = sd.n_plus;
    let n_m = sd.n_minus;
    let sp: Vec<f64> = (1..=n_p).map(|j| sd.s_plus(j).unwrap()).collect();
    let sm: Vec<f64> = (1..=n_m).map(|j| sd.s_minus(j).unwrap()).collect();
    for j in 1..n_p {
        let c = count_real_in(&roots, 1.0 / sp[j], 1.0 / sp[j - 1]);
        push(format!("odd count in (1/s_{}, 1/s_{})", j + 1, j), c % 2 == 1);
    }
    for j in 1..n_m {
        let c = count_real_in(&roots, 1.0 / sm[j - 1], 1.0 / sm[j]);
        push(format!("odd count in (1/s_-{}, 1/s_-{})", j, j + 1), c % 2 == 1);
    }
    if n_p > 0 {
        let s = sp[n_p - 1];
        let c = count_real_in(&roots, s, 1.0 / s);
        push(format!("even count in (s_{n_p}, 1/s_{n_p})"), c.is_multiple_of(2));
    }
    if n_m > 0 {
        let s = sm[n_m - 1];
        let c = count_real_in(&roots, 1.0 / s, s);
        push(format!("even count in (1/s_-{n_m}, s_-{n_m})"), c.is_multiple_of(2));
    }
    if !q.is_trivial() {
        // parity beyond the outermost reciprocal on each side
        let (odd_pos, odd_neg) = if q.is_even() {
            let small = q.a_p() < 1.0;
            (small, small)
        } else {
            let pos_b = q.b_p() > 0.0;
            (!pos_b, pos_b)
        };
        if n_p > 0 {
            let c = count_real_in(&roots, 1.0 / sp[0], f64::INFINITY);
            let want = if odd_pos { 1 } else { 0 };
            push(format!("count beyond 1/s_1 has parity {want}"), c % 2 == want);
            let c_all = count_real_in(&roots, 1.0 / sp[n_p - 1], f64::INFINITY);
            push(
                format!("at least {} roots beyond 1/s_{n_p}", n_p - 1 + want),
                c_all >= n_p - 1 + want,
            );
        }
        if n_m > 0 {
            let c = count_real_in(&roots, f64::NEG_INFINITY, 1.0 / sm[0]);
            let want = if odd_neg { 1 } else { 0 };
            push(format!("count beyond 1/s_-1 has parity {want}"), c % 2 == want);
            let c_all = count_real_in(&roots, f64::NEG_INFINITY, 1.0 / sm[n_m - 1]);
            push(
                format!("at least {} roots beyond 1/s_-{n_m}", n_m - 1 + want),
                c_all >= n_m - 1 + want,
            );
        }
    }
    let report = SignReport { checks };
    if let Some(bad) = report.checks.iter().find(|c| !c.ok) {
        return Err(JresError::Integrity {
            check: bad.name.clone(),
            residual: 1.0,
            tolerance: 0.0,
        });
    }
    Ok(report)
}

/// Eigenvalue counts from the variant matrices compared with the bound
/// states, and the interlacing of eigenvalues with the variant spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub n_plus: usize,
    pub n_minus: usize,
    pub sturm_plus: usize,
    pub sturm_minus: usize,
    /// Smallest separation in the eigenvalue sandwich.
    pub sandwich_margin: f64,
    pub resonance_count: usize,
    pub spectra: VariantSpectra,
}

/// Compare bound-state counts with Sturm counts of `J^+` above 2 and `J^-`
/// below -2, bound `n_+ + n_-` by `k/2 + 1`, check
/// `max(2, alpha^-_{p-j+1}) < lambda_j < alpha^+_{p-j+1}` (and the mirror
/// relation on the negative side), and require at least `p - 1` resonances
/// when `k > 1`.
pub fn eigenvalue_counts(q: &Perturbation, sd: &SpectralData, margin: f64) -> Result<CountReport> {
    let v = build_variants(q)?;
    let s = variant_spectra(&v);
    let p = q.p();
    let sturm_plus = sturm_count(&v.plus, 2.0, f64::INFINITY);
    let sturm_minus = sturm_count(&v.minus, f64::NEG_INFINITY, -2.0);
    let fail = |what: String| Err(JresError::Inconsistent(what));
    if sturm_plus != sd.n_plus || sturm_minus != sd.n_minus {
        return fail(format!(
            "counts: bound states ({}, {}) vs Sturm ({sturm_plus}, {sturm_minus})",
            sd.n_plus, sd.n_minus
        ));
    }
    if sd.n_plus + sd.n_minus > q.k() / 2 + 1 {
        return fail("too many bound states".into());
    }
    let mut worst = f64::INFINITY;
    for j in 1..=sd.n_plus {
        let lam = sd.bound_states.iter().find(|b| b.index == j as i32).unwrap().lambda;
        let lo = s.alpha_minus[p - j].max(2.0);
        let hi = s.alpha_plus[p - j];
        worst = worst.min(lam - lo).min(hi - lam);
    }
    for j in 1..=sd.n_minus {
        let lam = sd.bound_states.iter().find(|b| b.index == -(j as i32)).unwrap().lambda;
        let lo = s.alpha_minus[j - 1];
        let hi = s.alpha_plus[j - 1].min(-2.0);
        worst = worst.min(lam - lo).min(hi - lam);
    }
    if worst <= margin {
        return fail(format!("eigenvalue sandwich margin {worst:e}"));
    }
    let rc = sd.resonance_count();
    if q.k() > 1 && rc + 1 < p {
        return fail(format!("{rc} resonances, expected at least {}", p - 1));
    }
    Ok(CountReport {
        n_plus: sd.n_plus,
        n_minus: sd.n_minus,
        sturm_plus,
        sturm_minus,
        sandwich_margin: worst,
        resonance_count: rc,
        spectra: s,
    })
}

/// Continuous branch of `arg psi0` on the closed lower unit semicircle,
/// continued from `psi0(0) > 0` down the imaginary axis to `-i`.
///
/// The branch is stored at anchor angles spaced so that between neighbours
/// the phase provably changes by less than `pi/2`; any intermediate angle is
/// resolved from its left anchor by one principal-value step.
#[derive(Debug, Clone)]
pub struct PhaseTracker {
    psi0: RealPoly,
    roots: Vec<(Complex64, usize)>,
    anchors: Vec<(f64, f64)>,
}

/// Angle below which an endpoint with a root at `+-1` is treated as reached.
const END_GAP: f64 = 1e-11;

impl PhaseTracker {
    pub fn new(psi0: &RealPoly, tol: &Tolerances) -> Result<Self> {
        if psi0.is_zero() {
            return Err(JresError::Domain("zero polynomial has no phase".into()));
        }
        if psi0.coeff(0) <= 0.0 {
            return Err(JresError::Precondition("psi0(0) must be positive".into()));
        }
        let roots: Vec<(Complex64, usize)> = if psi0.degree() >= 1 {
            poly_roots(psi0, tol)?.roots.iter().map(|r| (r.z, r.mult)).collect()
        } else {
            Vec::new()
        };
        let mut t = PhaseTracker {
            psi0: psi0.clone(),
            roots,
            anchors: Vec::new(),
        };
        // segment 0 -> -i
        let mut xi = 0.0;
        let mut s = 0.0;
        let mut prev = t.psi0.eval_c(Complex64::new(0.0, 0.0));
        while s < 1.0 {
            let z = Complex64::new(0.0, -s);
            let h = t.safe_step(z);
            if h <= 0.0 {
                return Err(JresError::Precondition("psi0 vanishes on the imaginary axis".into()));
            }
            s = (s + h).min(1.0);
            let v = t.psi0.eval_c(Complex64::new(0.0, -s));
            xi += (v / prev).arg();
            prev = v;
        }
        let right = t.sweep(-FRAC_PI_2, xi, 1.0)?;
        let left = t.sweep(-FRAC_PI_2, xi, -1.0)?;
        let mut anchors: Vec<(f64, f64)> = left.into_iter().rev().collect();
        anchors.pop();
        anchors.extend(right);
        t.anchors = anchors;
        Ok(t)
    }

    /// Step length in `z` over which the phase moves by less than `pi/2`.
    fn safe_step(&self, z: Complex64) -> f64 {
        let mut rate = 0.0;
        let mut dmin = f64::INFINITY;
        for &(r, m) in &self.roots {
            let d = (z - r).norm();
            if d == 0.0 {
                return 0.0;
            }
            dmin = dmin.min(d);
            rate += 2.0 * m as f64 / d;
        }
        if rate == 0.0 {
            return 0.25;
        }
        (0.5 * dmin).min(FRAC_PI_4 / rate).min(0.25)
    }

    fn root_at(&self, z: Complex64) -> bool {
        self.roots.iter().any(|&(r, _)| (r - z).norm() < 1e-7)
    }

    /// Anchors from `theta0` towards `0` (dir = 1) or `-pi` (dir = -1).
    fn sweep(&self, theta0: f64, xi0: f64, dir: f64) -> Result<Vec<(f64, f64)>> {
        let end = if dir > 0.0 { 0.0 } else { -PI };
        let end_root = self.root_at(Complex64::from_polar(1.0, end));
        let mut out = vec![(theta0, xi0)];
        let mut theta = theta0;
        let mut xi = xi0;
        let mut prev = self.psi0.eval_c(Complex64::from_polar(1.0, theta));
        for _ in 0..1_000_000 {
            let remaining = (end - theta).abs();
            if remaining == 0.0 || (end_root && remaining <= END_GAP) {
                return Ok(out);
            }
            let h = self.safe_step(Complex64::from_polar(1.0, theta));
            if h <= 0.0 {
                return Err(JresError::Precondition("psi0 vanishes on the unit circle".into()));
            }
            theta = if h >= remaining { end } else { theta + dir * h };
            let v = self.psi0.eval_c(Complex64::from_polar(1.0, theta));
            if v.norm() == 0.0 {
                return Err(JresError::Precondition("psi0 vanishes on the unit circle".into()));
            }
            xi += (v / prev).arg();
            prev = v;
            out.push((theta, xi));
        }
        Err(JresError::Numerical("phase tracking did not terminate".into()))
    }

    /// `xi` at angle `theta` in `[-pi, 0]` on the lower semicircle.
    pub fn xi(&self, theta: f64) -> f64 {
        let a = &self.anchors;
        let i = match a.binary_search_by(|x| x.0.partial_cmp(&theta).unwrap()) {
            Ok(i) => return a[i].1,
            Err(0) => 0,
            Err(i) => i - 1,
        };
        let (t0, x0) = a[i.min(a.len() - 1)];
        let v0 = self.psi0.eval_c(Complex64::from_polar(1.0, t0));
        let v = self.psi0.eval_c(Complex64::from_polar(1.0, theta));
        x0 + (v / v0).arg()
    }

    /// `xi(z(lambda + 0i))` for `lambda` in `[-2, 2]`.
    pub fn xi_at_lambda(&self, lambda: f64) -> f64 {
        self.xi(lower_angle(lambda))
    }

    /// Limit of `xi` at `+1` along the lower semicircle.
    pub fn xi_one_lower(&self) -> f64 {
        self.anchors.last().unwrap().1
    }

    /// Limit of `xi` at `-1` along the lower semicircle.
    pub fn xi_minus_one_lower(&self) -> f64 {
        self.anchors[0].1
    }

    /// `d xi(z(lambda + 0i)) / d lambda` from the root sum
    /// `sqrt(1 - lambda^2/4) xi' = (1/2) sum_r Re(z / (z - r))`.
    pub fn derivative(&self, lambda: f64) -> f64 {
        let z = Complex64::from_polar(1.0, lower_angle(lambda));
        let sum: f64 = self
            .roots
            .iter()
            .map(|&(r, m)| m as f64 * (1.0 - (z * r.conj()).re) / (z - r).norm_sqr())
            .sum();
        0.5 * sum / (1.0 - lambda * lambda / 4.0).sqrt()
    }

    pub fn roots(&self) -> &[(Complex64, usize)] {
        &self.roots
    }
}

/// Angle of `z(lambda + 0i)`, the point of the lower semicircle with
/// `z + 1/z = lambda`.
pub fn lower_angle(lambda: f64) -> f64 {
    -(lambda / 2.0).clamp(-1.0, 1.0).acos()
}

/// Phase samples and endpoint limits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseProfile {
    pub theta: Vec<f64>,
    pub lambda: Vec<f64>,
    pub xi: Vec<f64>,
    /// `xi` at `+1` approached from below and from above.
    pub xi_one_lower: f64,
    pub xi_one_upper: f64,
    /// `xi` at `-1` approached from below and from above.
    pub xi_minus_one_lower: f64,
    pub xi_minus_one_upper: f64,
}

/// Sample the phase shift `xi = arg psi0` at `n_samples` interior angles of
/// the lower semicircle. On the upper semicircle `xi(conj z) = -xi(z)`.
pub fn phase_shift(psi0: &RealPoly, n_samples: usize, tol: &Tolerances) -> Result<PhaseProfile> {
    let t = PhaseTracker::new(psi0, tol)?;
    let theta: Vec<f64> = (0..n_samples)
        .map(|i| -PI + PI * (i as f64 + 0.5) / n_samples as f64)
        .collect();
    let xi = theta.iter().map(|&th| t.xi(th)).collect();
    Ok(PhaseProfile {
        lambda: theta.iter().map(|th| 2.0 * th.cos()).collect(),
        theta,
        xi,
        xi_one_lower: t.xi_one_lower(),
        xi_one_upper: -t.xi_one_lower(),
        xi_minus_one_lower: t.xi_minus_one_lower(),
        xi_minus_one_upper: -t.xi_minus_one_lower(),
    })
}

/// Endpoint limits predicted by the bound and virtual state counts:
/// `xi(1 - 0i) = pi n_+ + pi m_+ / 2` and `xi(-1 - 0i) = -pi n_- - pi m_- / 2`,
/// lower-side values; the upper side is the negative.
pub fn expected_endpoints(sd: &SpectralData) -> (f64, f64) {
    let mp = if sd.virtual_plus { 1.0 } else { 0.0 };
    let mm = if sd.virtual_minus { 1.0 } else { 0.0 };
    (
        PI * sd.n_plus as f64 + FRAC_PI_2 * mp,
        -PI * sd.n_minus as f64 - FRAC_PI_2 * mm,
    )
}

/// `F(lambda) = arg z - 2 xi(z) / (2p + 1)` with `z = z(lambda + 0i)`.
///
/// Increasing from `-pi` at `lambda = -2` to `0` at `lambda = 2` when `psi0`
/// has no roots in the closed disc; its level sets at `-pi n / (2p + 1)` are
/// the eigenvalues of `J^+` (odd `n`) and `J^-` (even `n`).
pub fn omega_function(t: &PhaseTracker, p: usize, lambda: f64) -> f64 {
    let th = lower_angle(lambda);
    th - 2.0 * t.xi(th) / (2 * p + 1) as f64
}

/// Solve `F(omega) = -pi n / (2p + 1)`, `n = 1..=2p`, and return the
/// solutions in increasing order after cross-checking them against the
/// merged spectra of `J^-` and `J^+`.
pub fn omega_sequence(q: &Perturbation, tol: &Tolerances) -> Result<OmegaSequence> {
    if q.is_trivial() {
        return Err(JresError::Domain("omega sequence needs p >= 1".into()));
    }
    let sd = spectral_data(q, tol)?;
    if sd.n_plus + sd.n_minus > 0 || sd.virtual_plus || sd.virtual_minus {
        return Err(JresError::Precondition(
            "omega sequence needs a Jost function without roots in the closed disc".into(),
        ));
    }
    let t = PhaseTracker::new(&sd.psi0, tol)?;
    let p = q.p();
    let g = |th: f64| th - 2.0 * t.xi(th) / (2 * p + 1) as f64;
    let mut omega = Vec::with_capacity(2 * p);
    for n in 1..=2 * p {
        let target = -PI * n as f64 / (2 * p + 1) as f64;
        let (mut lo, mut hi) = (-PI, 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        omega.push(2.0 * (0.5 * (lo + hi)).cos());
    }
    omega.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let s = variant_spectra(&build_variants(q)?);
    let merged = crate::inverse::merge(&s.alpha_minus, &s.alpha_plus);
    let worst = omega
        .iter()
        .zip(&merged)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if worst > tol.identity {
        return Err(JresError::integrity("omega agrees with merged J-/J+ spectra", worst, tol.identity));
    }
    OmegaSequence::new(omega)
}

/// Radii of the regions that can hold resonances, and multiplicity caps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    /// Non-real resonances and real resonances of multiplicity > 1 lie in
    /// `|z| <= r_o`.
    pub r_o: f64,
    /// Simple positive resonances lie in `(1, r_plus]`.
    pub r_plus: f64,
    /// Simple negative resonances lie in `[-r_minus, -1)`.
    pub r_minus: f64,
    pub max_complex_pairs: usize,
    pub max_real_multiplicity: usize,
}

fn r_plus_of(q: &Perturbation, s1: f64, sm1: f64) -> f64 {
    if q.is_even() {
        let ap2 = q.a_p() * q.a_p();
        let c = (1.0 - ap2).abs();
        if q.a_p() < 1.0 {
            1.0 / (s1 * c)
        } else {
            (1.0 / s1).max(1.0 / (sm1 * c))
        }
    } else {
        let bp = q.b_p().abs();
        if q.b_p() < 0.0 {
            1.0 / (s1 * sm1 * bp)
        } else {
            (1.0 / s1).max(1.0 / bp)
        }
    }
}

/// Forbidden-region radii from `a_p` (or `b_p`) and the innermost bound
/// states `s_1`, `s_-1` (taken as `1` in modulus when absent).
pub fn forbidden_radii(q: &Perturbation, sd: &SpectralData) -> Result<Bounds> {
    if q.is_trivial() {
        return Err(JresError::Domain("trivial perturbation has no resonances".into()));
    }
    let s1 = sd.s_plus(1).unwrap_or(1.0);
    let sm1 = sd.s_minus(1).map(f64::abs).unwrap_or(1.0);
    let p = q.p() as i64;
    let (r_o, pairs, mult) = if q.is_even() {
        let c = (1.0 - q.a_p() * q.a_p()).abs();
        if q.a_p() < 1.0 {
            let n = (sd.n_plus + sd.n_minus) as i64;
            (1.0 / c.sqrt(), p - n, 2 * p - 2 * n + 1)
        } else {
            let n = (sd.n_plus.max(1) + sd.n_minus.max(1)) as i64;
            (1.0 / (s1 * sm1 * c).sqrt(), p - n + 1, 2 * p - 2 * n + 3)
        }
    } else {
        let bp = q.b_p().abs();
        let (beta, n) = if q.b_p() < 0.0 {
            (sm1, sd.n_plus + sd.n_minus.max(1))
        } else {
            (s1, sd.n_plus.max(1) + sd.n_minus)
        };
        let n = n as i64;
        (1.0 / (beta * bp).sqrt(), p - n, 2 * p - 2 * n + 1)
    };
    let r_plus = r_plus_of(q, s1, sm1);
    let r_minus = r_plus_of(&q.mirrored(), sm1, s1);
    Ok(Bounds {
        r_o,
        r_plus,
        r_minus,
        max_complex_pairs: pairs.max(0) as usize,
        max_real_multiplicity: mult.max(0) as usize,
    })
}

/// Check that every resonance lies in its allowed region (relative slack
/// `tol`) and that the multiplicity caps hold.
pub fn check_containment(sd: &SpectralData, b: &Bounds, tol: f64) -> Result<()> {
    let mut pairs = 0;
    for r in &sd.resonances {
        let m = r.z.norm();
        let (limit, what) = if r.z.im != 0.0 || r.mult > 1 {
            (b.r_o, "R_o")
        } else if r.z.re > 0.0 {
            (b.r_plus, "R_+")
        } else {
            (b.r_minus, "R_-")
        };
        if m > limit * (1.0 + tol) {
            return Err(JresError::Inconsistent(format!(
                "resonance {} outside {what} = {limit}",
                r.z
            )));
        }
        if r.z.im > 0.0 {
            pairs += r.mult;
        }
        if r.z.im == 0.0 && r.mult > b.max_real_multiplicity {
            return Err(JresError::Inconsistent(format!("real multiplicity {} too large", r.mult)));
        }
    }
    if pairs > b.max_complex_pairs {
        return Err(JresError::Inconsistent(format!("{pairs} complex pairs exceed cap")));
    }
    Ok(())
}

/// Verdict of the admissibility rules on a candidate root list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub accepted: bool,
    pub rule: Option<Rule>,
    pub detail: String,
}

impl Verdict {
    fn reject(rule: Rule, detail: String) -> Self {
        Verdict {
            accepted: false,
            rule: Some(rule),
            detail,
        }
    }

    pub fn into_result(self) -> Result<()> {
        match self.rule {
            None => Ok(()),
            Some(rule) => Err(JresError::Rejected {
                rule,
                detail: self.detail,
            }),
        }
    }
}

/// Decide whether a list of roots (counted with multiplicity) is the root
/// set of some Jost function.
///
/// Rules are applied in order: R1 ordering by modulus with no zero root; R2
/// conjugate closure; R3 closed-disc roots real and simple, and no root at
/// the reciprocal of a bound state; R4 an odd number of real roots between
/// consecutive reciprocals of same-sign bound states and an even number
/// between the outermost bound state and its reciprocal on each side.
pub fn validate_rk(roots: &[Complex64], tol: &Tolerances) -> Verdict {
    let d = tol.distinct;
    if roots.is_empty() {
        return Verdict::reject(Rule::R1, "empty root list".into());
    }
    for (i, r) in roots.iter().enumerate() {
        if !(r.re.is_finite() && r.im.is_finite()) || r.norm() == 0.0 {
            return Verdict::reject(Rule::R1, format!("root {i} is zero or non-finite"));
        }
    }
    for (i, w) in roots.windows(2).enumerate() {
        if w[1].norm() < w[0].norm() - d * (1.0 + w[0].norm()) {
            return Verdict::reject(Rule::R1, format!("|r_{}| > |r_{}|", i + 1, i + 2));
        }
    }
    let near = |a: Complex64, b: Complex64| (a - b).norm() <= d * (1.0 + a.norm());
    let real = |a: Complex64| a.im.abs() <= d * (1.0 + a.norm());
    let mut used = vec![false; roots.len()];
    for i in 0..roots.len() {
        if used[i] || real(roots[i]) {
            continue;
        }
        let partner = (0..roots.len())
            .find(|&j| j != i && !used[j] && !real(roots[j]) && near(roots[j], roots[i].conj()));
        match partner {
            Some(j) => {
                used[i] = true;
                used[j] = true;
            }
            None => return Verdict::reject(Rule::R2, format!("{} has no conjugate", roots[i])),
        }
    }
    let in_disc = |a: Complex64| a.norm() <= 1.0 + tol.circle_band;
    let mut bound = Vec::new();
    for (i, r) in roots.iter().enumerate() {
        if !in_disc(*r) {
            continue;
        }
        if !real(*r) {
            return Verdict::reject(Rule::R3, format!("disc root {r} is not real"));
        }
        if roots.iter().enumerate().any(|(j, s)| j != i && near(*s, *r)) {
            return Verdict::reject(Rule::R3, format!("disc root {r} is not simple"));
        }
        if r.norm() < 1.0 - tol.circle_band {
            bound.push(r.re);
        }
    }
    for &s in &bound {
        let rec = Complex64::new(1.0 / s, 0.0);
        if roots.iter().any(|r| near(*r, rec)) {
            return Verdict::reject(Rule::R3, format!("root at reciprocal 1/{s} of a bound state"));
        }
    }
    let reals: Vec<Complex64> = roots
        .iter()
        .filter(|r| real(**r))
        .map(|r| Complex64::new(r.re, 0.0))
        .collect();
    let mut pos: Vec<f64> = bound.iter().copied().filter(|&s| s > 0.0).collect();
    let mut neg: Vec<f64> = bound.iter().copied().filter(|&s| s < 0.0).map(|s| -s).collect();
    pos.sort_by(|a, b| a.partial_cmp(b).unwrap());
    neg.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mirrored: Vec<Complex64> = reals.iter().map(|r| -r).collect();
    for (side, list, rs) in [("+", &pos, &reals), ("-", &neg, &mirrored)] {
        for j in 1..list.len() {
            let c = count_real_in(rs, 1.0 / list[j], 1.0 / list[j - 1]);
            if c.is_multiple_of(2) {
                return Verdict::reject(
                    Rule::R4,
                    format!("even count {c} between reciprocals of bound states {side}{j} and {side}{}", j + 1),
                );
            }
        }
        if let Some(&s) = list.last() {
            let c = count_real_in(rs, s, 1.0 / s);
            if c % 2 == 1 {
                return Verdict::reject(
                    Rule::R4,
                    format!("odd count {c} between outermost bound state {side}{s} and its reciprocal"),
                );
            }
        }
    }
    Verdict {
        accepted: true,
        rule: None,
        detail: String::new(),
    }
}

/// Equivalences tying the sign pattern of the resonances to `alpha^+_1 > 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignCharacterization {
    pub alpha_plus_min: f64,
    pub alpha_minus_min: f64,
    pub resonance_count: usize,
    pub all_positive: bool,
    pub negative_resonances: usize,
    /// `(left, right)` sides of the applicable equivalence or implication.
    pub sides: (bool, bool),
}

/// Evaluate the applicable sign characterization:
///
/// * even `k`, `a_p < 1`: exactly `p` resonances, all positive, iff
///   `alpha^+_1 > 2`;
/// * even `k`, `a_p > 1`, `alpha^+_1 > 2`: `p - 1` positive resonances plus
///   one negative resonance when `alpha^-_1 > -2` (none when `< -2`);
/// * odd `k`: exactly `p - 1` resonances, all positive, and `b_p > 0` iff
///   `alpha^+_1 > 2`.
pub fn sign_characterization(q: &Perturbation, tol: &Tolerances) -> Result<SignCharacterization> {
    let sd = spectral_data(q, tol)?;
    let s = variant_spectra(&build_variants(q)?);
    let p = q.p();
    let ap = s.alpha_plus[0];
    let am = s.alpha_minus[0];
    let rc = sd.resonance_count();
    let pos: usize = sd
        .resonances
        .iter()
        .filter(|r| r.z.im == 0.0 && r.z.re > 0.0)
        .map(|r| r.mult)
        .sum();
    let negc: usize = sd
        .resonances
        .iter()
        .filter(|r| r.z.im == 0.0 && r.z.re < 0.0)
        .map(|r| r.mult)
        .sum();
    let all_positive = pos == rc;
    let sides = if q.is_even() && q.a_p() < 1.0 {
        (rc == p && all_positive, ap > 2.0)
    } else if q.is_even() {
        if ap > 2.0 {
            let want_neg = if am < -2.0 { 0 } else { 1 };
            (true, pos == p - 1 && negc == want_neg && rc == p - 1 + want_neg)
        } else {
            (true, true)
        }
    } else {
        (rc == p - 1 && all_positive && q.b_p() > 0.0, ap > 2.0)
    };
    let out = SignCharacterization {
        alpha_plus_min: ap,
        alpha_minus_min: am,
        resonance_count: rc,
        all_positive,
        negative_resonances: negc,
        sides,
    };
    if sides.0 != sides.1 {
        return Err(JresError::Inconsistent(format!("sign characterization fails: {out:?}")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn q1(b: f64) -> Perturbation {
        Perturbation::new(vec![1.0], vec![b]).unwrap()
    }

    #[test]
    fn single_site_branches() {
        let sd = spectral_data(&q1(2.0), &tol()).unwrap();
        assert_eq!(sd.n_plus, 1);
        assert!((sd.bound_states[0].s - 0.5).abs() < 1e-14);
        assert!((sd.bound_states[0].lambda - 2.5).abs() < 1e-14);
        // norming constant s^2 / (1 - s^2)
        assert!((sd.bound_states[0].norming - 1.0 / 3.0).abs() < 1e-14);
        let sd = spectral_data(&q1(0.5), &tol()).unwrap();
        assert_eq!(sd.resonances.len(), 1);
        assert!((sd.resonances[0].z.re - 2.0).abs() < 1e-14);
        let sd = spectral_data(&q1(1.0), &tol()).unwrap();
        assert!(sd.virtual_plus);
        let sd = spectral_data(&q1(-1.0), &tol()).unwrap();
        assert!(sd.virtual_minus);
        let sd = spectral_data(&q1(-2.0), &tol()).unwrap();
        assert_eq!(sd.n_minus, 1);
        assert_eq!(sd.bound_states[0].index, -1);
    }

    #[test]
    fn norming_matches_direct_sum() {
        let q = Perturbation::new(vec![0.7, 1.3, 0.5], vec![2.5, -0.3, 2.2]).unwrap();
        let sd = spectral_data(&q, &tol()).unwrap();
        assert!(sd.n_plus > 0);
        check_norming(&q, &sd, &tol()).unwrap();
        sign_checks(&q, &sd).unwrap();
    }

    #[test]
    fn phase_endpoints_single_site() {
        let pi = PI;
        for (b, lower_one, lower_minus) in [
            (2.0, pi, 0.0),
            (-2.0, 0.0, -pi),
            (0.5, 0.0, 0.0),
            (1.0, pi / 2.0, 0.0),
            (-1.0, 0.0, -pi / 2.0),
        ] {
            let psi0 = jost_function(&q1(b), &tol()).unwrap();
            let prof = phase_shift(&psi0, 64, &tol()).unwrap();
            assert!((prof.xi_one_lower - lower_one).abs() < 1e-8, "b={b} {}", prof.xi_one_lower);
            assert!((prof.xi_minus_one_lower - lower_minus).abs() < 1e-8, "b={b}");
            assert!((prof.xi_one_upper + lower_one).abs() < 1e-8);
        }
    }

    #[test]
    fn phase_matches_principal_arg_for_small_degree() {
        // psi0 = 1 - z/2 has |psi0 - 1| < 1 on the circle, so arg is principal
        let psi0 = jost_function(&q1(0.5), &tol()).unwrap();
        let t = PhaseTracker::new(&psi0, &tol()).unwrap();
        for i in 1..50 {
            let th = -PI * i as f64 / 50.0;
            let z = Complex64::from_polar(1.0, th);
            assert!((t.xi(th) - psi0.eval_c(z).arg()).abs() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let q = Perturbation::new(vec![0.6, 1.4], vec![0.3, -0.7]).unwrap();
        let psi0 = jost_function(&q, &tol()).unwrap();
        let t = PhaseTracker::new(&psi0, &tol()).unwrap();
        for i in 1..20 {
            let lam = -1.9 + 3.8 * i as f64 / 20.0;
            let h = 1e-5;
            let fd = (t.xi_at_lambda(lam + h) - t.xi_at_lambda(lam - h)) / (2.0 * h);
            let d = t.derivative(lam);
            assert!((d - fd).abs() <= 1e-6 * fd.abs().max(1.0), "{lam}: {d} vs {fd}");
        }
    }

    #[test]
    fn omega_two_site_symmetric() {
        let q = Perturbation::new(vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2], vec![0.0, 0.0]).unwrap();
        let w = omega_sequence(&q, &tol()).unwrap();
        let want = [-1.0, -0.5, 0.5, 1.0];
        for (a, b) in w.values().iter().zip(want) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn omega_requires_empty_disc() {
        let e = omega_sequence(&q1(2.0), &tol()).unwrap_err();
        assert!(matches!(e, JresError::Precondition(_)));
    }

    #[test]
    fn radius_sharp_for_imaginary_pair() {
        let q = Perturbation::new(vec![FRAC_1_SQRT_2], vec![0.0]).unwrap();
        let sd = spectral_data(&q, &tol()).unwrap();
        let b = forbidden_radii(&q, &sd).unwrap();
        assert!((b.r_o * b.r_o - 2.0).abs() < 1e-12);
        for r in &sd.resonances {
            assert!((r.z.norm() - b.r_o).abs() < 1e-12);
        }
        check_containment(&sd, &b, 1e-9).unwrap();
    }

    #[test]
    fn single_site_positive_resonance_radius() {
        // psi0 = 1 - z/2: the resonance at 2 sits exactly on R_+
        let q = q1(0.5);
        let sd = spectral_data(&q, &tol()).unwrap();
        let b = forbidden_radii(&q, &sd).unwrap();
        assert!((b.r_plus - 2.0).abs() < 1e-14);
        check_containment(&sd, &b, 1e-9).unwrap();
    }

    #[test]
    fn validator_basic() {
        let c = |x: f64| Complex64::new(x, 0.0);
        let t = tol();
        assert!(validate_rk(&[c(0.5), c(3.0)], &t).accepted);
        assert!(validate_rk(&[c(0.5), c(3.0), c(4.0)], &t).accepted);
        assert_eq!(validate_rk(&[c(0.5), c(1.5)], &t).rule, Some(Rule::R4));
        assert_eq!(validate_rk(&[c(3.0), c(0.5)], &t).rule, Some(Rule::R1));
        assert_eq!(validate_rk(&[c(0.5), c(2.0)], &t).rule, Some(Rule::R3));
        assert_eq!(
            validate_rk(&[c(0.5), Complex64::new(1.0, 2.0)], &t).rule,
            Some(Rule::R2)
        );
        assert_eq!(validate_rk(&[c(0.25), c(0.5)], &t).rule, Some(Rule::R4));
    }

    #[test]
    fn characterization_single_site() {
        let c = sign_characterization(&q1(3.0), &tol()).unwrap();
        assert_eq!(c.sides, (true, true));
        let c = sign_characterization(&q1(-3.0), &tol()).unwrap();
        assert_eq!(c.sides, (false, false));
    }

    mod properties {
        use super::*;
        use crate::models::random_perturbation;
        use proptest::prelude::*;
        use rand::SeedableRng;
        use rand_chacha::ChaCha8Rng;

        fn arb_q() -> impl Strategy<Value = Perturbation> {
            (1usize..=12, any::<u64>()).prop_map(|(k, seed)| {
                random_perturbation(&mut ChaCha8Rng::seed_from_u64(seed), k)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(120))]

            #[test]
            fn forward_sets_are_admissible(q in arb_q()) {
                let sd = spectral_data(&q, &tol()).unwrap();
                let v = validate_rk(&sd.roots().expanded(), &tol());
                prop_assert!(v.accepted, "{:?}", v);
                prop_assert_eq!(sd.roots().expanded().len(), q.k());
            }

            #[test]
            fn norming_and_counts_hold(q in arb_q()) {
                let sd = spectral_data(&q, &tol()).unwrap();
                prop_assert!(sd.bound_states.iter().all(|b| b.norming > 0.0));
                check_norming(&q, &sd, &tol()).unwrap();
                sign_checks(&q, &sd).unwrap();
                let c = eigenvalue_counts(&q, &sd, 1e-10).unwrap();
                prop_assert!(sd.n_plus + sd.n_minus <= q.k() / 2 + 1);
                if q.k() > 1 {
                    prop_assert!(c.resonance_count + 1 >= q.p());
                }
            }

            #[test]
            fn s_matrix_is_unimodular_and_matches_phase(q in arb_q(), u in 0.01f64..0.99) {
                let sd = spectral_data(&q, &tol()).unwrap();
                let t = PhaseTracker::new(&sd.psi0, &tol()).unwrap();
                let theta = -PI * u;
                let z = Complex64::from_polar(1.0, theta);
                let s = sd.psi0.eval_c(z.inv()) / sd.psi0.eval_c(z);
                prop_assert!((s.norm() - 1.0).abs() < 1e-9);
                let e = Complex64::from_polar(1.0, -2.0 * t.xi(theta));
                prop_assert!((s - e).norm() < 1e-8, "{} vs {}", s, e);
            }

            #[test]
            fn roots_respect_forbidden_regions(q in arb_q()) {
                let sd = spectral_data(&q, &tol()).unwrap();
                let b = forbidden_radii(&q, &sd).unwrap();
                check_containment(&sd, &b, 1e-9).unwrap();
            }
        }
    }
}
