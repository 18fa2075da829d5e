use std::fs;
use std::io::Write;
use std::path::Path;

use jres_core::inverse::{invert_from_alphas, invert_from_omega, invert_from_resonances, AlphaPair, OmegaSequence};
use jres_core::jacobi::{build_variants, variant_spectra};
use jres_core::jost::verify_identities;
use jres_core::models::{grid, sweep_row, Model, SweepRow};
use jres_core::spectral::{
    check_containment, expected_endpoints, forbidden_radii, phase_shift, spectral_data, validate_rk, Bounds,
};
use jres_core::{fixtures, Perturbation, Tolerances};
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::schema::{
    AlphasInput, EndpointsDoc, InverseDoc, OmegaInput, PerturbationDoc, RootsInput, SpectrumDoc, FORMAT,
};
use crate::{CliError, Mode, ModelArg};

type CliResult = std::result::Result<(), CliError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> std::result::Result<T, CliError> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn read_q(path: &Path) -> std::result::Result<Perturbation, CliError> {
    let doc: PerturbationDoc = read_json(path)?;
    if doc.format != FORMAT {
        return Err(CliError::Input(format!("unsupported format {}", doc.format)));
    }
    Ok(Perturbation::new(doc.a, doc.b)?)
}

fn write_bytes(out: Option<&Path>, bytes: &[u8]) -> CliResult {
    let res = match out {
        Some(p) => fs::write(p, bytes),
        None => std::io::stdout().lock().write_all(bytes),
    };
    res.map_err(|e| CliError::Input(format!("write failed: {e}")))
}

fn write_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    write_bytes(out, s.as_bytes())
}

fn radii(q: &Perturbation, sd: &jres_core::spectral::SpectralData) -> Option<Bounds> {
    if q.is_trivial() {
        None
    } else {
        forbidden_radii(q, sd).ok()
    }
}

pub fn forward(input: &Path, out: Option<&Path>, tol: &Tolerances) -> CliResult {
    let q = read_q(input)?;
    let sd = spectral_data(&q, tol)?;
    let mut doc = SpectrumDoc::new(&q, &sd);
    doc.phase = Some(EndpointsDoc::from(&phase_shift(&sd.psi0, 2, tol)?));
    doc.bounds = radii(&q, &sd);
    if !q.is_trivial() {
        doc.asymptotics = Some(verify_identities(&q, &sd.psi0, tol)?);
    }
    write_json(out, &doc)
}

pub fn spectrum(input: &Path, out: Option<&Path>) -> CliResult {
    let q = read_q(input)?;
    let s = variant_spectra(&build_variants(&q)?);
    write_json(
        out,
        &json!({
            "format": FORMAT,
            "mu": s.mu,
            "alpha_plus": s.alpha_plus,
            "alpha_minus": s.alpha_minus,
        }),
    )
}

pub fn inverse(mode: Mode, input: &Path, out: Option<&Path>, tol: &Tolerances) -> CliResult {
    let doc = match mode {
        Mode::Resonances => {
            let roots = read_json::<RootsInput>(input)?.roots();
            let inv = invert_from_resonances(&roots, tol)?;
            InverseDoc {
                format: FORMAT,
                a: inv.q.a().to_vec(),
                b: inv.q.b().to_vec(),
                k: inv.k,
                residual: inv.root_residual,
                alpha_plus: inv.alphas.alpha_plus.clone(),
                alpha_minus: inv.alphas.alpha_minus.clone(),
                weights: inv.weights,
            }
        }
        Mode::Omega => {
            let seq = OmegaSequence::new(read_json::<OmegaInput>(input)?.values())?;
            let ap = seq.split()?;
            let inv = invert_from_omega(&seq, tol)?;
            InverseDoc::from_alphas(&inv, ap.alpha_plus, ap.alpha_minus)
        }
        Mode::Alphas => {
            let a: AlphasInput = read_json(input)?;
            let ap = AlphaPair::new(a.plus, a.minus)?;
            let inv = invert_from_alphas(&ap, tol)?;
            InverseDoc::from_alphas(&inv, ap.alpha_plus, ap.alpha_minus)
        }
    };
    write_json(out, &doc)
}

pub fn validate(input: &Path, out: Option<&Path>, tol: &Tolerances) -> CliResult {
    let roots = read_json::<RootsInput>(input)?.roots();
    let v = validate_rk(&roots, tol);
    write_json(
        out,
        &json!({
            "format": FORMAT,
            "accepted": v.accepted,
            "rule": v.rule,
            "detail": v.detail,
        }),
    )?;
    v.into_result().map_err(CliError::from)
}

pub fn bounds(input: &Path, out: Option<&Path>, tol: &Tolerances) -> CliResult {
    let q = read_q(input)?;
    let sd = spectral_data(&q, tol)?;
    let b = forbidden_radii(&q, &sd)?;
    let contained = check_containment(&sd, &b, 1e-9);
    write_json(
        out,
        &json!({
            "format": FORMAT,
            "bounds": b,
            "contained": contained.is_ok(),
        }),
    )?;
    contained.map_err(CliError::from)
}

pub fn phase(input: &Path, samples: usize, out: Option<&Path>, tol: &Tolerances) -> CliResult {
    if samples == 0 {
        return Err(CliError::Input("--samples must be positive".into()));
    }
    let q = read_q(input)?;
    let sd = spectral_data(&q, tol)?;
    let profile = phase_shift(&sd.psi0, samples, tol)?;
    let (one, minus_one) = expected_endpoints(&sd);
    write_json(
        out,
        &json!({
            "format": FORMAT,
            "profile": profile,
            "expected": { "xi_one_lower": one, "xi_minus_one_lower": minus_one },
        }),
    )
}

#[allow(clippy::too_many_arguments)]
pub fn sweep(
    model: ModelArg,
    kappa: f64,
    p: usize,
    h_from: f64,
    h_to: f64,
    steps: usize,
    out: Option<&Path>,
    tol: &Tolerances,
) -> CliResult {
    if p == 0 || steps < 2 || !(h_from.is_finite() && h_to.is_finite()) {
        return Err(CliError::Input("sweep needs --p >= 1, --steps >= 2 and finite h".into()));
    }
    let model = match model {
        ModelArg::Step => Model::Step,
        ModelArg::Scaled if kappa > 0.0 => Model::Scaled { kappa },
        ModelArg::Scaled => return Err(CliError::Input("--kappa must be positive".into())),
    };
    let rows: Vec<SweepRow> = grid(h_from, h_to, steps)
        .par_iter()
        .map(|&h| sweep_row(model, p, h, tol))
        .collect::<jres_core::Result<_>>()?;
    write_bytes(out, &sweep_csv(&rows, p)?)
}

fn sweep_csv(rows: &[SweepRow], p: usize) -> std::result::Result<Vec<u8>, CliError> {
    let width = rows.iter().map(|r| r.roots.len()).max().unwrap_or(0);
    let mut header = vec!["h".to_string(), "n_plus".into(), "n_minus".into()];
    for i in 1..=width {
        header.extend([format!("root{i}_re"), format!("root{i}_im"), format!("root{i}_class")]);
    }
    for name in ["alpha_plus", "alpha_minus", "mu"] {
        header.extend((1..=p).map(|j| format!("{name}{j}")));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Input(format!("csv: {e}"));
    w.write_record(&header).map_err(io)?;
    for r in rows {
        let mut rec = vec![r.h.to_string(), r.n_plus.to_string(), r.n_minus.to_string()];
        for i in 0..width {
            match r.roots.get(i) {
                Some(z) => rec.extend([z.re.to_string(), z.im.to_string(), z.class.as_str().into()]),
                None => rec.extend([String::new(), String::new(), String::new()]),
            }
        }
        for v in [&r.alpha_plus, &r.alpha_minus, &r.mu] {
            rec.extend((0..p).map(|j| v.get(j).map(f64::to_string).unwrap_or_default()));
        }
        w.write_record(&rec).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::Input(format!("csv: {e}")))
}

pub fn repro(id: u8, out: Option<&Path>, tol: &Tolerances) -> CliResult {
    let report = fixtures::run(id, tol)?;
    let mut text = format!("fixture {}: {}\n", report.id, report.title);
    for l in &report.lines {
        text.push_str(&format!(
            "[{}] {}: {}\n",
            if l.ok { "PASS" } else { "FAIL" },
            l.name,
            l.detail
        ));
    }
    let passed = report.lines.iter().filter(|l| l.ok).count();
    text.push_str(&format!("{passed}/{} checks passed\n", report.lines.len()));
    write_bytes(out, text.as_bytes())
}
