//! Single-configuration runs.

use rayon::prelude::*;

use phasemix_core::closed_form::ClosedFormModel;
use phasemix_core::entanglement::negativity;
use phasemix_core::oracle::oracle_reduced_density;
use phasemix_core::phase::{evolve_mixed, partial_trace_field};
use phasemix_core::reduction::reduced_density_with;
use phasemix_core::{AtomLabel, ThermalFieldSpec, TwoQubitDensity};

use crate::config::{Mode, RunConfig};
use crate::error::Result;
use crate::output::{csv_table, fmt_value, joint_dump_path, preamble, write_atomic, JointDump};

pub const DENSITY_HEADER: [&str; 9] = [
    "t",
    "xi",
    "upsilon",
    "B_ee",
    "B_egeg",
    "B_gege",
    "B_gg",
    "Re(B_coh)",
    "Im(B_coh)",
];

pub const VALIDATE_HEADER: [&str; 5] = [
    "t",
    "xi",
    "closed_vs_oracle",
    "closed_vs_quadrature",
    "quadrature_vs_oracle",
];

#[derive(Debug, Clone, PartialEq)]
pub struct Validation {
    pub closed_vs_oracle: f64,
    pub closed_vs_quadrature: f64,
    pub quadrature_vs_oracle: f64,
    /// Largest `| |X|^2 - 1 |` over labels, retained photon numbers and times.
    pub unitarity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub rows: usize,
    pub max_xi: f64,
    pub argmax_t: f64,
    pub truncation: usize,
    pub nodes: usize,
    pub validation: Option<Validation>,
}

fn density_row(t: f64, rho: &TwoQubitDensity) -> Result<(f64, Vec<f64>)> {
    let r = negativity(rho)?;
    let coh = rho.b_coh();
    Ok((
        r.xi,
        vec![
            t,
            r.xi,
            r.upsilon,
            rho.b_ee(),
            rho.b_egeg(),
            rho.b_gege(),
            rho.b_gg(),
            coh.re,
            coh.im,
        ],
    ))
}

fn quadrature_density(
    model: &ClosedFormModel,
    spec: &ThermalFieldSpec,
    parts: &[(f64, AtomLabel)],
    t: f64,
    nodes: usize,
) -> Result<TwoQubitDensity> {
    let joint = evolve_mixed(model, spec, parts, t, nodes)?;
    Ok(partial_trace_field(&joint)?)
}

fn unitarity_defect(model: &ClosedFormModel, truncation: usize, times: &[f64]) -> f64 {
    times
        .par_iter()
        .map(|&t| {
            let mut worst = 0.0f64;
            for label in AtomLabel::ALL {
                for n in 0..=truncation {
                    worst = worst.max((model.amplitudes(label, n, t).norm_sqr() - 1.0).abs());
                }
            }
            worst
        })
        .reduce(|| 0.0, f64::max)
}

/// Computes the configured time series and writes it to `cfg.output_path`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    cfg.validate()?;
    let spec = cfg.field()?;
    let couplings = cfg.coupling_pair()?;
    let mixture = cfg.mixture();
    let parts: Vec<(f64, AtomLabel)> = mixture.components().to_vec();
    let model = ClosedFormModel::new(couplings, spec.truncation());
    let nodes = cfg.node_count(spec.truncation());
    let times = cfg.times();

    let mut meta = vec![
        ("truncation", spec.truncation().to_string()),
        ("nodes", nodes.to_string()),
        ("retained_mass", fmt_value(spec.retained_mass())),
    ];

    type Table = (
        &'static [&'static str],
        Vec<Vec<f64>>,
        Vec<f64>,
        Option<Validation>,
    );
    let (header, rows, xis, validation): Table = match cfg.mode {
        Mode::Reduced | Mode::Joint => {
            let out: Vec<(f64, Vec<f64>)> = times
                .par_iter()
                .map(|&t| {
                    let rho = if cfg.mode == Mode::Reduced {
                        reduced_density_with(&model, spec.probabilities(), &mixture, t)
                    } else {
                        quadrature_density(&model, &spec, &parts, t, nodes)?
                    };
                    density_row(t, &rho)
                })
                .collect::<Result<_>>()?;
            let (xis, rows) = out.into_iter().unzip();
            (&DENSITY_HEADER, rows, xis, None)
        }
        Mode::Validate => {
            let out: Vec<(f64, Vec<f64>)> = times
                .par_iter()
                .map(|&t| {
                    let closed = reduced_density_with(&model, spec.probabilities(), &mixture, t);
                    let oracle = oracle_reduced_density(&spec, &mixture, &couplings, t);
                    let quad = quadrature_density(&model, &spec, &parts, t, nodes)?;
                    let xi = negativity(&closed)?.xi;
                    Ok((
                        xi,
                        vec![
                            t,
                            xi,
                            closed.max_abs_diff(&oracle),
                            closed.max_abs_diff(&quad),
                            quad.max_abs_diff(&oracle),
                        ],
                    ))
                })
                .collect::<Result<_>>()?;
            let (xis, rows): (Vec<f64>, Vec<Vec<f64>>) = out.into_iter().unzip();
            let col_max = |c: usize| rows.iter().map(|r| r[c]).fold(0.0, f64::max);
            let v = Validation {
                closed_vs_oracle: col_max(2),
                closed_vs_quadrature: col_max(3),
                quadrature_vs_oracle: col_max(4),
                unitarity: unitarity_defect(&model, spec.truncation(), &times),
            };
            meta.extend([
                ("max_closed_vs_oracle", fmt_value(v.closed_vs_oracle)),
                (
                    "max_closed_vs_quadrature",
                    fmt_value(v.closed_vs_quadrature),
                ),
                (
                    "max_quadrature_vs_oracle",
                    fmt_value(v.quadrature_vs_oracle),
                ),
                ("max_unitarity_defect", fmt_value(v.unitarity)),
            ]);
            (&VALIDATE_HEADER, rows, xis, Some(v))
        }
    };

    // First maximum wins on ties.
    let (mut max_xi, mut argmax_t) = (f64::NEG_INFINITY, f64::NAN);
    for (&xi, &t) in xis.iter().zip(&times) {
        if xi > max_xi {
            max_xi = xi;
            argmax_t = t;
        }
    }

    let mut text = preamble(cfg, &meta);
    text.push_str(&csv_table(header, &rows));

    if cfg.mode == Mode::Joint {
        let t = *times.last().expect("steps >= 1");
        let joint = evolve_mixed(&model, &spec, &parts, t, nodes)?;
        let json = serde_json::to_vec(&JointDump::new(&joint, t)).expect("plain data serialises");
        write_atomic(&joint_dump_path(&cfg.output_path), &json)?;
    }
    write_atomic(&cfg.output_path, text.as_bytes())?;

    Ok(RunSummary {
        rows: rows.len(),
        max_xi,
        argmax_t,
        truncation: spec.truncation(),
        nodes,
        validation,
    })
}
