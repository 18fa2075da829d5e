//! Model operators with closed-form spectra, parameter sweeps and seeded
//! random corpora.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::Result;
use crate::inverse::{invert_from_omega, OmegaSequence};
use crate::jacobi::{build_variants, variant_spectra};
use crate::jost::Perturbation;
use crate::spectral::spectral_data;
use crate::tolerance::Tolerances;

/// Sweepable model families.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Model {
    /// `a = 1`, `b_x = h` for `x <= p`.
    Step,
    /// `a_x = kappa` for `x < p`, `a_p = sqrt(kappa)`, `b_x = h` for `x <= p`.
    Scaled { kappa: f64 },
}

impl Model {
    pub fn build(&self, p: usize, h: f64) -> Result<Perturbation> {
        match *self {
            Model::Step => step_potential(p, h),
            Model::Scaled { kappa } => scaled_model(p, kappa, h),
        }
    }
}

pub fn step_potential(p: usize, h: f64) -> Result<Perturbation> {
    Perturbation::new(vec![1.0; p], vec![h; p])
}

/// `J_p = kappa J_0 + h` on the first `p` sites, closed by `a_p^2 = kappa`
/// so that `J^+-` are `kappa` times the free rank-one modifications plus `h`.
pub fn scaled_model(p: usize, kappa: f64, h: f64) -> Result<Perturbation> {
    let mut a = vec![kappa; p];
    a[p - 1] = kappa.sqrt();
    Perturbation::new(a, vec![h; p])
}

/// Closed-form spectra of `J_p`, `J^+` and `J^-` for the step (`kappa = 1`)
/// and scaled models, each increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosedForms {
    pub mu: Vec<f64>,
    pub alpha_plus: Vec<f64>,
    pub alpha_minus: Vec<f64>,
}

pub fn closed_forms(p: usize, kappa: f64, h: f64) -> ClosedForms {
    let n = (2 * p + 1) as f64;
    ClosedForms {
        mu: (1..=p)
            .map(|j| h - 2.0 * kappa * (PI * j as f64 / (p + 1) as f64).cos())
            .collect(),
        alpha_plus: (1..=p)
            .map(|j| h - 2.0 * kappa * (2.0 * PI * j as f64 / n).cos())
            .collect(),
        alpha_minus: (1..=p)
            .map(|j| h - 2.0 * kappa * ((2.0 * j as f64 - 1.0) * PI / n).cos())
            .collect(),
    }
}

/// Largest `h` at which the step potential has a virtual state at `1`.
pub fn step_transition(p: usize) -> f64 {
    2.0 + 2.0 * (2.0 * PI / (2 * p + 1) as f64).cos()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootClass {
    Bound,
    Virtual,
    Resonance,
}

impl RootClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            RootClass::Bound => "bound",
            RootClass::Virtual => "virtual",
            RootClass::Resonance => "resonance",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifiedRoot {
    pub re: f64,
    pub im: f64,
    pub class: RootClass,
}

/// Spectral snapshot of a model at one parameter value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub h: f64,
    pub n_plus: usize,
    pub n_minus: usize,
    /// Roots with multiplicity, sorted by modulus.
    pub roots: Vec<ClassifiedRoot>,
    pub alpha_plus: Vec<f64>,
    pub alpha_minus: Vec<f64>,
    pub mu: Vec<f64>,
}

pub fn sweep_row(model: Model, p: usize, h: f64, tol: &Tolerances) -> Result<SweepRow> {
    let q = model.build(p, h)?;
    let sd = spectral_data(&q, tol)?;
    let s = if q.is_trivial() {
        closed_forms(p, 1.0, 0.0)
    } else {
        let v = variant_spectra(&build_variants(&q)?);
        ClosedForms {
            mu: v.mu,
            alpha_plus: v.alpha_plus,
            alpha_minus: v.alpha_minus,
        }
    };
    let roots = sd
        .roots()
        .expanded()
        .into_iter()
        .map(|z| ClassifiedRoot {
            re: z.re,
            im: z.im,
            class: classify_point(z, tol),
        })
        .collect();
    Ok(SweepRow {
        h,
        n_plus: sd.n_plus,
        n_minus: sd.n_minus,
        roots,
        alpha_plus: s.alpha_plus,
        alpha_minus: s.alpha_minus,
        mu: s.mu,
    })
}

fn classify_point(z: Complex64, tol: &Tolerances) -> RootClass {
    let m = z.norm();
    if (m - 1.0).abs() <= tol.circle_band {
        RootClass::Virtual
    } else if m < 1.0 {
        RootClass::Bound
    } else {
        RootClass::Resonance
    }
}

/// Uniform grid of `steps >= 2` points from `from` to `to`.
pub fn grid(from: f64, to: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| from + (to - from) * i as f64 / (steps - 1) as f64)
        .collect()
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let lx: Vec<f64> = x.iter().map(|v| v.abs().ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.abs().ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

/// Draw a random perturbation of class exactly `k >= 1` with
/// `a_x` in `[0.3, 2]`, `b_x` in `[-2, 2]`, keeping `|a_p - 1| >= 0.02`
/// (even `k`) or `|b_p| >= 0.02` (odd `k`).
pub fn random_perturbation<R: Rng>(rng: &mut R, k: usize) -> Perturbation {
    let p = k.div_ceil(2);
    let mut a: Vec<f64> = (0..p).map(|_| rng.gen_range(0.3..2.0)).collect();
    let mut b: Vec<f64> = (0..p).map(|_| rng.gen_range(-2.0..2.0)).collect();
    if k % 2 == 1 {
        a[p - 1] = 1.0;
        while b[p - 1].abs() < 0.02 {
            b[p - 1] = rng.gen_range(-2.0..2.0);
        }
    } else {
        while (a[p - 1] - 1.0).abs() < 0.02 {
            a[p - 1] = rng.gen_range(0.3..2.0);
        }
    }
    Perturbation::new(a, b).expect("generated perturbation is valid")
}

/// `n` random perturbations with `k` uniform in `1..=max_k`.
pub fn corpus(seed: u64, n: usize, max_k: usize) -> Vec<Perturbation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=max_k);
            random_perturbation(&mut rng, k)
        })
        .collect()
}

/// Random perturbation whose Jost function has no zeros in the closed disc,
/// drawn through a random `omega` sequence of length `2p`.
pub fn random_empty_disc<R: Rng>(rng: &mut R, p: usize, tol: &Tolerances) -> Perturbation {
    loop {
        let mut w: Vec<f64> = (0..2 * p).map(|_| rng.gen_range(-1.95..1.95)).collect();
        w.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if w.windows(2).any(|x| x[1] - x[0] < 1e-3) {
            continue;
        }
        let Ok(seq) = OmegaSequence::new(w) else { continue };
        if let Ok(inv) = invert_from_omega(&seq, tol) {
            return inv.q;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_closed_forms_match() {
        let tol = Tolerances::default();
        for p in 1..=5 {
            for h in [-3.0, -0.4, 0.7, 2.5] {
                let row = sweep_row(Model::Step, p, h, &tol).unwrap();
                let cf = closed_forms(p, 1.0, h);
                for (x, y) in row.mu.iter().zip(&cf.mu) {
                    assert!((x - y).abs() < 1e-12);
                }
                for (x, y) in row.alpha_plus.iter().zip(&cf.alpha_plus) {
                    assert!((x - y).abs() < 1e-12);
                }
                for (x, y) in row.alpha_minus.iter().zip(&cf.alpha_minus) {
                    assert!((x - y).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn scaled_closed_forms_match() {
        let tol = Tolerances::default();
        for kappa in [0.1, 0.5, 3.0, 20.0] {
            let q = scaled_model(4, kappa, 1.3).unwrap();
            let s = variant_spectra(&build_variants(&q).unwrap());
            let cf = closed_forms(4, kappa, 1.3);
            let err = s
                .alpha_plus
                .iter()
                .zip(&cf.alpha_plus)
                .chain(s.alpha_minus.iter().zip(&cf.alpha_minus))
                .chain(s.mu.iter().zip(&cf.mu))
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            assert!(err < 1e-10 * kappa.max(1.0), "{kappa}: {err}");
            spectral_data(&q, &tol).unwrap();
        }
    }

    #[test]
    fn zero_coupling_row_is_free() {
        let row = sweep_row(Model::Step, 3, 0.0, &Tolerances::default()).unwrap();
        assert!(row.roots.is_empty());
        assert_eq!(row.mu, closed_forms(3, 1.0, 0.0).mu);
    }

    #[test]
    fn step_is_odd_class() {
        assert_eq!(step_potential(3, 0.5).unwrap().k(), 5);
    }

    #[test]
    fn corpus_is_deterministic_and_classed() {
        let a = corpus(11, 50, 16);
        let b = corpus(11, 50, 16);
        assert_eq!(a, b);
        for q in &a {
            assert!(q.k() >= 1 && q.k() <= 16);
        }
    }

    #[test]
    fn slope_of_power_law() {
        let x = [1e-2, 1e-3, 1e-4];
        let y: Vec<f64> = x.iter().map(|v: &f64| 3.0 * v.powf(-0.2)).collect();
        assert!((log_log_slope(&x, &y) + 0.2).abs() < 1e-12);
    }
}
