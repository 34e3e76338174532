use std::f64::consts::TAU;

use rydpol_core::dressing::{
    envelopes_approx, envelopes_exact, numeric_envelopes, EigenSpectrum, EnvelopePair, DEFAULT_DEGENERACY_TOL,
};
use rydpol_core::eitsim::uniform_grid;
use rydpol_core::{spectrogram, TransitionClass};
use serde::{Deserialize, Serialize};

use super::{class_from_flags, Ctx};
use crate::args::{EnvelopeChoice, EnvelopeMode, EnvelopesArgs, SpectrogramArgs};
use crate::error::{CliError, Result};
use crate::output::{Cell, Outputs, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrogramJob {
    pub class: TransitionClass,
    pub phi_steps: usize,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelopes: Option<EnvelopeMode>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnvelopesJob {
    pub class: TransitionClass,
    pub phi_steps: usize,
    pub kinds: Vec<EnvelopeMode>,
}

fn check_steps(n: usize) -> Result<()> {
    if n < 2 {
        return Err(CliError::Usage(format!("--phi-steps must be at least 2, got {n}")));
    }
    Ok(())
}

fn check_mode(cls: TransitionClass, mode: EnvelopeMode) -> Result<()> {
    let closed = cls.j() == TransitionClass::THREE_HALF_PLUS.j() && cls.p() != 0;
    if mode != EnvelopeMode::Numeric && !closed {
        return Err(CliError::Usage(format!(
            "{} envelopes exist in closed form for J=3/2, p=+-1 only; use --envelopes numeric for {cls}",
            label(mode)
        )));
    }
    Ok(())
}

pub fn resolve(a: &SpectrogramArgs) -> Result<SpectrogramJob> {
    let class = class_from_flags(a.class.j2, a.class.p)?;
    check_steps(a.phi_steps)?;
    if !(a.tol > 0.0 && a.tol.is_finite()) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", a.tol)));
    }
    if let Some(mode) = a.envelopes {
        check_mode(class, mode)?;
    }
    Ok(SpectrogramJob { class, phi_steps: a.phi_steps, tol: a.tol, envelopes: a.envelopes })
}

pub fn resolve_envelopes(a: &EnvelopesArgs) -> Result<EnvelopesJob> {
    let class = class_from_flags(a.j2, a.p)?;
    check_steps(a.phi_steps)?;
    let kinds = match a.kind {
        EnvelopeChoice::Exact => vec![EnvelopeMode::Exact],
        EnvelopeChoice::Approx => vec![EnvelopeMode::Approx],
        EnvelopeChoice::Numeric => vec![EnvelopeMode::Numeric],
        EnvelopeChoice::All => vec![EnvelopeMode::Exact, EnvelopeMode::Approx, EnvelopeMode::Numeric],
    };
    for &k in &kinds {
        check_mode(class, k)?;
    }
    Ok(EnvelopesJob { class, phi_steps: a.phi_steps, kinds })
}

fn label(mode: EnvelopeMode) -> &'static str {
    match mode {
        EnvelopeMode::Exact => "exact",
        EnvelopeMode::Approx => "approx",
        EnvelopeMode::Numeric => "numeric",
    }
}

/// `spectra` must be present for numeric envelopes.
fn envelope_rows(
    cls: TransitionClass,
    mode: EnvelopeMode,
    grid: &[f64],
    spectra: Option<&[EigenSpectrum<f64>]>,
) -> Vec<EnvelopePair<f64>> {
    match mode {
        EnvelopeMode::Exact => grid.iter().map(|&p| envelopes_exact(p)).collect(),
        EnvelopeMode::Approx => grid.iter().map(|&p| envelopes_approx(p)).collect(),
        EnvelopeMode::Numeric => {
            spectra.expect("numeric envelopes need spectra").iter().map(|s| numeric_envelopes(cls, s)).collect()
        }
    }
}

#[derive(Serialize)]
struct EnvelopeColumns {
    kind: &'static str,
    eo_plus: Vec<f64>,
    eo_minus: Vec<f64>,
    ei_plus: Vec<f64>,
    ei_minus: Vec<f64>,
}

impl EnvelopeColumns {
    fn new(mode: EnvelopeMode, rows: &[EnvelopePair<f64>]) -> Self {
        EnvelopeColumns {
            kind: label(mode),
            eo_plus: rows.iter().map(|e| e.outer_plus).collect(),
            eo_minus: rows.iter().map(|e| e.outer_minus).collect(),
            ei_plus: rows.iter().map(|e| e.inner_plus).collect(),
            ei_minus: rows.iter().map(|e| e.inner_minus).collect(),
        }
    }
}

fn envelope_table(ctx: &Ctx, blocks: &[(EnvelopeMode, Vec<EnvelopePair<f64>>)], phi: &[f64]) -> Result<Table> {
    let mut t = Table::new(&["phi", "eo_plus", "eo_minus", "ei_plus", "ei_minus", "exact_or_approx"])?;
    for (mode, rows) in blocks {
        for (&p, e) in phi.iter().zip(rows) {
            t.row(&[
                Cell::Num(ctx.angle_out(p)),
                Cell::Num(e.outer_plus),
                Cell::Num(e.outer_minus),
                Cell::Num(e.inner_plus),
                Cell::Num(e.inner_minus),
                Cell::Text(label(*mode)),
            ])?;
        }
    }
    Ok(t)
}

#[derive(Serialize)]
struct SpectrogramFile<'a> {
    class: TransitionClass,
    angle_unit: &'static str,
    phi: Vec<f64>,
    /// One row of ascending eigenvalues per phase angle.
    eigenvalues: Vec<&'a [f64]>,
    distinct_counts: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    envelopes: Option<EnvelopeColumns>,
}

pub fn run(job: &SpectrogramJob, ctx: &Ctx) -> Result<Outputs> {
    let grid = uniform_grid(0.0, TAU, job.phi_steps);
    let spectra = spectrogram(job.class, &grid, job.tol)?;
    let phi_out: Vec<f64> = grid.iter().map(|&p| ctx.angle_out(p)).collect();

    let mut out = Outputs::default();
    let mut t = Table::new(&["phi", "band_index", "eigenvalue"])?;
    for s in &spectra {
        for (k, &e) in s.eigenvalues.iter().enumerate() {
            t.row(&[Cell::Num(ctx.angle_out(s.phi)), Cell::Int(k), Cell::Num(e)])?;
        }
    }
    out.csv("spectrogram.csv", t)?;

    let env = job.envelopes.map(|mode| (mode, envelope_rows(job.class, mode, &grid, Some(&spectra))));
    if let Some(block) = &env {
        out.csv("envelopes.csv", envelope_table(ctx, std::slice::from_ref(block), &grid)?)?;
    }
    let file = SpectrogramFile {
        class: job.class,
        angle_unit: ctx.unit(),
        phi: phi_out,
        eigenvalues: spectra.iter().map(|s| s.eigenvalues.as_slice()).collect(),
        distinct_counts: spectra.iter().map(|s| s.distinct_count()).collect(),
        envelopes: env.as_ref().map(|(m, rows)| EnvelopeColumns::new(*m, rows)),
    };
    out.json("spectrogram.json", &file)?;

    let counts = &file.distinct_counts;
    out.summary.push(format!(
        "{}: {} bands x {} phase angles; distinct eigenvalues {}..{}",
        job.class,
        job.class.dim(),
        spectra.len(),
        counts.iter().min().unwrap_or(&0),
        counts.iter().max().unwrap_or(&0)
    ));
    Ok(out)
}

#[derive(Serialize)]
struct EnvelopesFile {
    class: TransitionClass,
    angle_unit: &'static str,
    phi: Vec<f64>,
    envelopes: Vec<EnvelopeColumns>,
}

pub fn run_envelopes(job: &EnvelopesJob, ctx: &Ctx) -> Result<Outputs> {
    let grid = uniform_grid(0.0, TAU, job.phi_steps);
    let spectra = if job.kinds.contains(&EnvelopeMode::Numeric) {
        Some(spectrogram(job.class, &grid, DEFAULT_DEGENERACY_TOL)?)
    } else {
        None
    };
    let blocks: Vec<(EnvelopeMode, Vec<EnvelopePair<f64>>)> =
        job.kinds.iter().map(|&m| (m, envelope_rows(job.class, m, &grid, spectra.as_deref()))).collect();

    let mut out = Outputs::default();
    out.csv("envelopes.csv", envelope_table(ctx, &blocks, &grid)?)?;
    let file = EnvelopesFile {
        class: job.class,
        angle_unit: ctx.unit(),
        phi: grid.iter().map(|&p| ctx.angle_out(p)).collect(),
        envelopes: blocks.iter().map(|(m, rows)| EnvelopeColumns::new(*m, rows)).collect(),
    };
    out.json("envelopes.json", &file)?;
    for (m, rows) in &blocks {
        let r: Vec<f64> = rows.iter().map(|e| e.outer_over_inner()).collect();
        let lo = r.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = r.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        out.summary.push(format!("{}: outer/inner span ratio in [{lo:.9}, {hi:.9}]", label(*m)));
    }
    Ok(out)
}
