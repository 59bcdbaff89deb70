//! Output files: RFC-4180 CSV traces and standalone SVG 1.1 charts.
//! Files are written to a temporary sibling and renamed into place.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use num_complex::Complex64;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f",
];

pub struct TraceData {
    pub label: String,
    /// Absolute residual norms, starting with `||b||`.
    pub absolute: Vec<f64>,
    pub rhs_norm: f64,
    /// Optional per-step bound column (aligned with iterations 1..).
    pub bound: Option<Vec<f64>>,
}

impl TraceData {
    pub fn relative(&self) -> Vec<f64> {
        self.absolute.iter().map(|r| r / self.rhs_norm).collect()
    }
}

fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let tmp: PathBuf = path.with_extension("tmp");
    fs::write(&tmp, content).with_context(|| format!("cannot write {}", tmp.display()))?;
    fs::rename(&tmp, path).with_context(|| format!("cannot move into {}", path.display()))?;
    Ok(())
}

/// `iter,residual,relresid[,bound]`, one row per recorded iterate.
pub fn write_trace_csv(path: &Path, trace: &TraceData) -> Result<()> {
    let mut out = String::new();
    if trace.bound.is_some() {
        out.push_str("iter,residual,relresid,bound\n");
    } else {
        out.push_str("iter,residual,relresid\n");
    }
    for (i, r) in trace.absolute.iter().enumerate() {
        let rel = r / trace.rhs_norm;
        match &trace.bound {
            Some(b) => {
                // the bound applies from iteration 1 on
                let bv = if i == 0 {
                    trace.rhs_norm
                } else {
                    b.get(i - 1).copied().unwrap_or(f64::NAN)
                };
                writeln!(out, "{i},{r},{rel},{bv}").unwrap();
            }
            None => writeln!(out, "{i},{r},{rel}").unwrap(),
        }
    }
    write_atomic(path, &out)
}

/// One CSV row for a Monte Carlo estimate.
pub fn randmat_csv_row(
    n: usize,
    kind: &str,
    samples: u64,
    hits: u64,
    p_hat: f64,
    stderr: f64,
    expected: f64,
) -> String {
    format!("{n},{kind},{samples},{hits},{p_hat},{stderr},{expected}")
}

fn chart_frame(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0}\" height=\"{:.0}\" viewBox=\"0 0 {:.0} {:.0}\">\n\
         <rect width=\"{:.0}\" height=\"{:.0}\" fill=\"white\"/>\n",
        width, height, width, height, width, height
    )
}

/// Line chart of log10 relative residual against iteration index.
pub fn write_residual_chart(path: &Path, traces: &[TraceData]) -> Result<()> {
    let (w, h) = (800.0, 500.0);
    let (ml, mr, mt, mb) = (70.0, 20.0, 20.0, 45.0);
    let pw = w - ml - mr;
    let ph = h - mt - mb;

    let mut max_iter = 1usize;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    let series: Vec<(String, Vec<f64>)> = traces
        .iter()
        .map(|t| {
            let ys: Vec<f64> = t
                .relative()
                .iter()
                .map(|r| r.max(1e-40).log10())
                .collect();
            max_iter = max_iter.max(ys.len().saturating_sub(1));
            for y in &ys {
                ymin = ymin.min(*y);
                ymax = ymax.max(*y);
            }
            (t.label.clone(), ys)
        })
        .collect();
    if !ymin.is_finite() || !ymax.is_finite() {
        ymin = -1.0;
        ymax = 0.0;
    }
    if (ymax - ymin).abs() < 1e-12 {
        ymin -= 1.0;
    }

    let xmap = |i: f64| ml + pw * i / max_iter as f64;
    let ymap = |y: f64| mt + ph * (ymax - y) / (ymax - ymin);

    let mut svg = chart_frame(w, h);
    // axes
    writeln!(
        svg,
        "<rect x=\"{ml}\" y=\"{mt}\" width=\"{pw}\" height=\"{ph}\" fill=\"none\" stroke=\"black\"/>"
    )
    .unwrap();
    // y grid lines at integer powers
    let y0 = ymin.floor() as i64;
    let y1 = ymax.ceil() as i64;
    let step = (((y1 - y0) as f64 / 8.0).ceil() as i64).max(1);
    let mut tick = y0;
    while tick <= y1 {
        let y = ymap(tick as f64);
        if y >= mt - 1.0 && y <= mt + ph + 1.0 {
            writeln!(
                svg,
                "<line x1=\"{ml}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#dddddd\"/>",
                ml + pw
            )
            .unwrap();
            writeln!(
                svg,
                "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"end\">1e{tick}</text>",
                ml - 6.0,
                y + 4.0
            )
            .unwrap();
        }
        tick += step;
    }
    // x ticks
    let xstep = (max_iter as f64 / 10.0).ceil().max(1.0) as usize;
    let mut i = 0;
    while i <= max_iter {
        let x = xmap(i as f64);
        writeln!(
            svg,
            "<line x1=\"{x:.1}\" y1=\"{:.1}\" x2=\"{x:.1}\" y2=\"{:.1}\" stroke=\"#dddddd\"/>",
            mt,
            mt + ph
        )
        .unwrap();
        writeln!(
            svg,
            "<text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"12\" text-anchor=\"middle\">{i}</text>",
            mt + ph + 16.0
        )
        .unwrap();
        i += xstep;
    }
    writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\">iteration</text>",
        ml + pw / 2.0,
        h - 10.0
    )
    .unwrap();
    writeln!(
        svg,
        "<text x=\"16\" y=\"{:.1}\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 {:.1})\">log10 relative residual</text>",
        mt + ph / 2.0,
        mt + ph / 2.0
    )
    .unwrap();

    for (k, (label, ys)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let mut points = String::new();
        for (i, y) in ys.iter().enumerate() {
            write!(points, "{:.2},{:.2} ", xmap(i as f64), ymap(*y)).unwrap();
        }
        writeln!(
            svg,
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>",
            points.trim_end()
        )
        .unwrap();
        // legend
        let ly = mt + 18.0 * (k as f64 + 1.0);
        writeln!(
            svg,
            "<line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" stroke=\"{color}\" stroke-width=\"2\"/>",
            ml + pw - 130.0,
            ml + pw - 105.0
        )
        .unwrap();
        writeln!(
            svg,
            "<text x=\"{:.1}\" y=\"{ly:.1}\" font-size=\"12\" dominant-baseline=\"middle\">{label}</text>",
            ml + pw - 100.0
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    write_atomic(path, &svg)
}

/// Scatter plot of complex points (the diagonal spectrum panels).
pub fn write_spectrum_scatter(path: &Path, points: &[Complex64]) -> Result<()> {
    let (w, h) = (520.0, 520.0);
    let margin = 40.0;
    let mut extent: f64 = 1e-12;
    for z in points {
        extent = extent.max(z.re.abs()).max(z.im.abs());
    }
    extent *= 1.08;
    let scale = (w - 2.0 * margin) / (2.0 * extent);
    let cx = w / 2.0;
    let cy = h / 2.0;

    let mut svg = chart_frame(w, h);
    // axes through the origin
    writeln!(
        svg,
        "<line x1=\"{margin}\" y1=\"{cy}\" x2=\"{:.1}\" y2=\"{cy}\" stroke=\"#bbbbbb\"/>",
        w - margin
    )
    .unwrap();
    writeln!(
        svg,
        "<line x1=\"{cx}\" y1=\"{margin}\" x2=\"{cx}\" y2=\"{:.1}\" stroke=\"#bbbbbb\"/>",
        h - margin
    )
    .unwrap();
    writeln!(
        svg,
        "<text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{:.1}</text>",
        w - margin - 28.0,
        cy - 6.0,
        extent / 1.08
    )
    .unwrap();
    for z in points {
        let x = cx + z.re * scale;
        let y = cy - z.im * scale;
        writeln!(
            svg,
            "<circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"2.2\" fill=\"#1f77b4\"/>"
        )
        .unwrap();
    }
    svg.push_str("</svg>\n");
    write_atomic(path, &svg)
}
