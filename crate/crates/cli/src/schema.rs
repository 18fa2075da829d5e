//! File formats read and written by `jres`.
//!
//! Every document carries `"format": 1`. Inputs accept the field but do not
//! require it.

use jres_core::inverse::AlphaInversion;
use jres_core::spectral::{BoundState, Bounds, PhaseProfile, SpectralData};
use jres_core::{AsymptoticReport, Perturbation, Root};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub const FORMAT: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbationDoc {
    #[serde(default = "format")]
    pub format: u32,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

fn format() -> u32 {
    FORMAT
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RootDoc {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
    #[serde(default = "one")]
    pub mult: usize,
}

fn one() -> usize {
    1
}

impl From<&Root> for RootDoc {
    fn from(r: &Root) -> Self {
        RootDoc {
            re: r.z.re,
            im: r.z.im,
            mult: r.mult,
        }
    }
}

/// A root given as a bare real, a `[re, im]` pair or a `{re, im, mult}` object.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RootInput {
    Real(f64),
    Pair([f64; 2]),
    Full(RootDoc),
}

impl RootInput {
    pub fn expand(&self, out: &mut Vec<Complex64>) {
        match *self {
            RootInput::Real(x) => out.push(Complex64::new(x, 0.0)),
            RootInput::Pair([re, im]) => out.push(Complex64::new(re, im)),
            RootInput::Full(r) => {
                out.extend(std::iter::repeat_n(Complex64::new(r.re, r.im), r.mult))
            }
        }
    }
}

/// Resonance-mode payload: a bare list or any object with a `roots` field,
/// which includes the output of `jres forward`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum RootsInput {
    List(Vec<RootInput>),
    Doc { roots: Vec<RootInput> },
}

impl RootsInput {
    pub fn roots(&self) -> Vec<Complex64> {
        let list = match self {
            RootsInput::List(l) => l,
            RootsInput::Doc { roots } => roots,
        };
        let mut out = Vec::new();
        for r in list {
            r.expand(&mut out);
        }
        out
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum OmegaInput {
    List(Vec<f64>),
    Doc { omega: Vec<f64> },
}

impl OmegaInput {
    pub fn values(self) -> Vec<f64> {
        match self {
            OmegaInput::List(v) | OmegaInput::Doc { omega: v } => v,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct AlphasInput {
    pub plus: Vec<f64>,
    pub minus: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VirtualDoc {
    pub plus: bool,
    pub minus: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EndpointsDoc {
    pub xi_one_lower: f64,
    pub xi_one_upper: f64,
    pub xi_minus_one_lower: f64,
    pub xi_minus_one_upper: f64,
}

impl From<&PhaseProfile> for EndpointsDoc {
    fn from(p: &PhaseProfile) -> Self {
        EndpointsDoc {
            xi_one_lower: p.xi_one_lower,
            xi_one_upper: p.xi_one_upper,
            xi_minus_one_lower: p.xi_minus_one_lower,
            xi_minus_one_upper: p.xi_minus_one_upper,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumDoc {
    pub format: u32,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub k: usize,
    /// Ascending coefficients of the Jost function.
    pub psi0: Vec<f64>,
    pub bound_states: Vec<BoundState>,
    pub resonances: Vec<RootDoc>,
    #[serde(rename = "virtual")]
    pub virtual_states: VirtualDoc,
    pub n_plus: usize,
    pub n_minus: usize,
    /// All roots with multiplicity, by modulus.
    pub roots: Vec<RootDoc>,
    pub phase: Option<EndpointsDoc>,
    pub bounds: Option<Bounds>,
    pub asymptotics: Option<AsymptoticReport>,
}

impl SpectrumDoc {
    pub fn new(q: &Perturbation, sd: &SpectralData) -> Self {
        SpectrumDoc {
            format: FORMAT,
            a: q.a().to_vec(),
            b: q.b().to_vec(),
            k: q.k(),
            psi0: sd.psi0.coeffs().to_vec(),
            bound_states: sd.bound_states.clone(),
            resonances: sd.resonances.iter().map(RootDoc::from).collect(),
            virtual_states: VirtualDoc {
                plus: sd.virtual_plus,
                minus: sd.virtual_minus,
            },
            n_plus: sd.n_plus,
            n_minus: sd.n_minus,
            roots: sd.roots().roots.iter().map(RootDoc::from).collect(),
            phase: None,
            bounds: None,
            asymptotics: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InverseDoc {
    pub format: u32,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub k: usize,
    /// Residual of the forward re-check.
    pub residual: f64,
    pub alpha_plus: Vec<f64>,
    pub alpha_minus: Vec<f64>,
    pub weights: Vec<f64>,
}

impl InverseDoc {
    pub fn from_alphas(inv: &AlphaInversion, alpha_plus: Vec<f64>, alpha_minus: Vec<f64>) -> Self {
        InverseDoc {
            format: FORMAT,
            a: inv.q.a().to_vec(),
            b: inv.q.b().to_vec(),
            k: inv.q.k(),
            residual: inv.residual,
            alpha_plus,
            alpha_minus,
            weights: inv.weights.clone(),
        }
    }
}
