/// Numerical tolerances shared by every module.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Roots with `|Im r| <= root_snap * (1 + |r|)` are snapped to the real axis.
    pub root_snap: f64,
    /// Base radius for multiplicity clustering; a cluster of size `m` may
    /// spread up to `cluster^(1/m) * |r|`.
    pub cluster: f64,
    /// Roots with `||r| - 1| <= circle_band` are virtual states.
    pub circle_band: f64,
    /// `|a_p - 1| <= unit_band` means `a_p = 1`.
    pub unit_band: f64,
    /// Relative size allowed for negative powers left by the Jost recursion.
    pub cancellation: f64,
    /// Relative residual for analytic identities and round-trip checks.
    pub identity: f64,
    /// Final root-match tolerance when re-running the forward map.
    pub root_match: f64,
    /// Remainder allowed by exact synthetic division.
    pub division: f64,
    /// Weight positivity and normalisation in the alpha inversion.
    pub weight: f64,
    /// Distinctness threshold used by the admissibility rules.
    pub distinct: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            root_snap: 1e-9,
            cluster: 1e-10,
            circle_band: 1e-8,
            unit_band: 1e-12,
            cancellation: 1e-12,
            identity: 1e-8,
            root_match: 1e-7,
            division: 1e-9,
            weight: 1e-9,
            distinct: 1e-9,
        }
    }
}

impl Tolerances {
    /// Defaults with the verification tolerances (`identity`, `root_match`)
    /// replaced by `tol`.
    pub fn with_verification(tol: f64) -> Self {
        Tolerances {
            identity: tol,
            root_match: tol,
            ..Tolerances::default()
        }
    }
}
