//! CSV and SVG emission of `Omega'` point clouds and numerical-range
//! boundaries.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, Context, Result};
use orthkit_core::{OmegaSample, RangeRegion, C64};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotFormat {
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy)]
pub enum PlotData<'a> {
    Omega(&'a [OmegaSample]),
    Range(&'a RangeRegion),
}

impl PlotData<'_> {
    fn is_empty(&self) -> bool {
        match self {
            PlotData::Omega(s) => s.is_empty(),
            PlotData::Range(r) => r.is_empty(),
        }
    }
}

#[derive(Serialize)]
struct OmegaRow {
    re: f64,
    im: f64,
    attain_residual: f64,
    witness_id: usize,
}

#[derive(Serialize)]
struct RangeRow {
    theta: f64,
    support_value: f64,
    boundary_re: f64,
    boundary_im: f64,
}

/// Boundary point of the region in direction `theta`. Complex regions carry
/// one per angle; real ones only their two endpoints.
fn boundary_at(region: &RangeRegion, j: usize) -> C64 {
    if region.boundary_points.len() == region.angles.len() {
        return region.boundary_points[j];
    }
    let rot = C64::from_polar(1.0, -region.angles[j]);
    region
        .boundary_points
        .iter()
        .copied()
        .max_by(|a, b| (rot * a).re.total_cmp(&(rot * b).re))
        .unwrap_or_default()
}

fn csv_text(data: PlotData<'_>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    match data {
        PlotData::Omega(samples) => {
            for s in samples {
                w.serialize(OmegaRow {
                    re: s.lambda.re,
                    im: s.lambda.im,
                    attain_residual: s.attain_residual,
                    witness_id: s.witness_id,
                })?;
            }
        }
        PlotData::Range(r) => {
            for (j, (&theta, &support_value)) in r.angles.iter().zip(&r.support_values).enumerate() {
                let b = boundary_at(r, j);
                w.serialize(RangeRow { theta, support_value, boundary_re: b.re, boundary_im: b.im })?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

const SIZE: f64 = 400.0;

fn svg_text(data: PlotData<'_>) -> String {
    let points: Vec<C64> = match data {
        PlotData::Omega(s) => s.iter().map(|s| s.lambda).collect(),
        PlotData::Range(r) => (0..r.angles.len()).map(|j| boundary_at(r, j)).collect(),
    };
    let zero = C64::new(0.0, 0.0);
    let (mut lo, mut hi) = (zero, zero);
    for p in &points {
        lo = C64::new(lo.re.min(p.re), lo.im.min(p.im));
        hi = C64::new(hi.re.max(p.re), hi.im.max(p.im));
    }
    let span = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12) * 1.2;
    let mid = (lo + hi) / 2.0;
    let map = |z: C64| ((z.re - mid.re) / span * SIZE + SIZE / 2.0, (mid.im - z.im) / span * SIZE + SIZE / 2.0);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    match data {
        PlotData::Omega(_) => {
            for p in &points {
                let (x, y) = map(*p);
                let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="3" fill="steelblue"/>"#);
            }
        }
        PlotData::Range(_) => {
            let coords: Vec<String> = points
                .iter()
                .map(|p| {
                    let (x, y) = map(*p);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(out, r#"<polygon points="{}" fill="lightsteelblue" stroke="steelblue"/>"#, coords.join(" "));
        }
    }
    let (ox, oy) = map(zero);
    let _ = writeln!(
        out,
        r#"<g id="origin" stroke="crimson"><line x1="{:.3}" y1="{oy:.3}" x2="{:.3}" y2="{oy:.3}"/><line x1="{ox:.3}" y1="{:.3}" x2="{ox:.3}" y2="{:.3}"/></g>"#,
        ox - 6.0,
        ox + 6.0,
        oy - 6.0,
        oy + 6.0
    );
    out.push_str("</svg>\n");
    out
}

/// Writes `data` to `path`. Empty data is rejected before anything is
/// created.
pub fn emit_plot(data: PlotData<'_>, path: &Path, format: PlotFormat) -> Result<()> {
    if data.is_empty() {
        bail!("nothing to plot: empty input");
    }
    let text = match format {
        PlotFormat::Csv => csv_text(data)?,
        PlotFormat::Svg => svg_text(data),
    };
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}
