//! Report assembly and deterministic emission: JSON (serde_json, shortest
//! round-trip floats), a CSV variant carrying the same sample values, and a
//! static SVG rendering of the solution curve against the ideal parabola
//! 2c^{n−1}x(1−x). Output files are written atomically (temp + rename).

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::calabi::{ode_residual_max, OdeSolution, PositivityCertificate, RuledParams};
use crate::rational::{rat_powi, rat_to_string, to_f64};
use crate::ruled::{conformal_scalar, fiber_profile, fundamental_constant, RuledError};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ParamsBlock {
    pub m: u32,
    pub p: String,
    pub c: String,
    pub a: String,
    pub b: String,
    pub lambda: String,
}

impl ParamsBlock {
    pub fn from_params(params: &RuledParams) -> Self {
        ParamsBlock {
            m: params.m,
            p: rat_to_string(&params.p),
            c: rat_to_string(&params.c),
            a: rat_to_string(&params.a),
            b: rat_to_string(&params.b),
            lambda: rat_to_string(&params.lambda()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualsBlock {
    pub bc: [f64; 4],
    pub ode_max: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstantBlock {
    pub value: f64,
    pub closed_form: Option<f64>,
    pub volume: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeometryBlock {
    pub h_samples: Vec<[f64; 2]>,
    pub sh_samples: Vec<[f64; 2]>,
    pub sh_tilde_samples: Vec<[f64; 2]>,
    pub constant_value: f64,
    pub max_deviation: f64,
    pub c: ConstantBlock,
}

/// Combined solve-ruled output: solver coefficients, the exact solution in
/// canonical text form, certification data, and the geometric profile.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub params: ParamsBlock,
    #[serde(rename = "A")]
    pub coeff_a: f64,
    #[serde(rename = "B")]
    pub coeff_b: f64,
    #[serde(rename = "C")]
    pub coeff_c: f64,
    #[serde(rename = "D")]
    pub coeff_d: f64,
    pub f: String,
    pub condition_number: f64,
    pub positivity: PositivityCertificate,
    pub residuals: ResidualsBlock,
    /// 2c^{n−1}, the coefficient of the ideal large-c parabola.
    pub ideal_coefficient: f64,
    /// [x, f(x+λ)] on the uniform grid over [0, 1].
    pub f_samples: Vec<[f64; 2]>,
    pub geometry: GeometryBlock,
}

pub fn build_solve_report(
    params: &RuledParams,
    sol: &OdeSolution,
    grid: usize,
) -> Result<SolveReport, RuledError> {
    let profile = fiber_profile(sol, params)?;
    let curvature = conformal_scalar(&profile, params, sol, grid);
    let constant = fundamental_constant(&profile, params, sol.coeff_b)?;
    let mut f_samples = Vec::with_capacity(grid);
    let mut h_samples = Vec::with_capacity(grid);
    for i in 0..grid {
        let x = i as f64 / (grid - 1) as f64;
        f_samples.push([x, profile.f_shifted(x)]);
        h_samples.push([x, profile.h(x)]);
    }
    Ok(SolveReport {
        params: ParamsBlock::from_params(params),
        coeff_a: sol.coeff_a,
        coeff_b: sol.coeff_b,
        coeff_c: sol.coeff_c,
        coeff_d: sol.coeff_d,
        f: sol.f.to_canonical_string(),
        condition_number: sol.condition_number,
        positivity: sol.positivity.clone(),
        residuals: ResidualsBlock {
            bc: sol.bc_residuals,
            ode_max: ode_residual_max(sol, params, 64),
        },
        ideal_coefficient: 2.0 * to_f64(&rat_powi(&params.c, params.n() as i64 - 1)),
        f_samples,
        geometry: GeometryBlock {
            h_samples,
            sh_samples: curvature.sh_samples,
            sh_tilde_samples: curvature.sh_tilde_samples,
            constant_value: curvature.constant_value,
            max_deviation: curvature.max_deviation,
            c: ConstantBlock {
                value: constant.c_value,
                closed_form: constant.c_closed_form,
                volume: constant.volume,
            },
        },
    })
}

/// Shortest round-trip decimal, identical to the serde_json rendering.
pub fn format_f64(x: f64) -> String {
    let mut buf = ryu::Buffer::new();
    buf.format(x).to_string()
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// CSV with one row per grid node; numbers use the same shortest round-trip
/// formatting as the JSON output.
pub fn solve_report_to_csv(report: &SolveReport) -> String {
    let mut out = String::from("x,f,h,s_h,s_h_tilde\n");
    for (((f, h), sh), sht) in report
        .f_samples
        .iter()
        .zip(&report.geometry.h_samples)
        .zip(&report.geometry.sh_samples)
        .zip(&report.geometry.sh_tilde_samples)
    {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            format_f64(f[0]),
            format_f64(f[1]),
            format_f64(h[1]),
            format_f64(sh[1]),
            format_f64(sht[1]),
        );
    }
    out
}

const SVG_W: f64 = 640.0;
const SVG_H: f64 = 480.0;
const SVG_MARGIN: f64 = 48.0;

/// Static SVG comparing the solved f(x+λ) (solid) with the ideal parabola
/// 2c^{n−1}x(1−x) (dashed). Byte-deterministic for fixed input.
pub fn figure_svg(f_samples: &[[f64; 2]], ideal_coefficient: f64) -> Result<String, RuledError> {
    if f_samples.is_empty() {
        return Err(RuledError::InvalidInput("empty sample grid".into()));
    }
    let ideal: Vec<[f64; 2]> = f_samples
        .iter()
        .map(|s| [s[0], ideal_coefficient * s[0] * (1.0 - s[0])])
        .collect();
    let x_min = 0.0;
    let x_max = 1.0;
    let mut y_min = 0.0_f64;
    let mut y_max = f64::MIN;
    for s in f_samples.iter().chain(&ideal) {
        y_min = y_min.min(s[1]);
        y_max = y_max.max(s[1]);
    }
    if y_max <= y_min {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    y_max += pad;
    let sx = |x: f64| SVG_MARGIN + (x - x_min) / (x_max - x_min) * (SVG_W - 2.0 * SVG_MARGIN);
    let sy =
        |y: f64| SVG_H - SVG_MARGIN - (y - y_min) / (y_max - y_min) * (SVG_H - 2.0 * SVG_MARGIN);
    let polyline = |pts: &[[f64; 2]]| -> String {
        let mut s = String::new();
        for (i, p) in pts.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{:.3},{:.3}", sx(p[0]), sy(p[1]));
        }
        s
    };
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_W}\" height=\"{SVG_H}\" viewBox=\"0 0 {SVG_W} {SVG_H}\">"
    );
    let _ = writeln!(
        svg,
        "  <rect width=\"{SVG_W}\" height=\"{SVG_H}\" fill=\"white\"/>"
    );
    // axes
    let x_axis_y = sy(0.0);
    let _ = writeln!(
        svg,
        "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\"/>",
        sx(x_min),
        x_axis_y,
        sx(x_max),
        x_axis_y
    );
    let _ = writeln!(
        svg,
        "  <line x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\" stroke=\"black\"/>",
        sx(0.0),
        sy(y_min),
        sx(0.0),
        sy(y_max)
    );
    for tick in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            svg,
            "  <line x1=\"{0:.3}\" y1=\"{1:.3}\" x2=\"{0:.3}\" y2=\"{2:.3}\" stroke=\"black\"/>",
            sx(tick),
            x_axis_y - 4.0,
            x_axis_y + 4.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            sx(tick),
            x_axis_y + 18.0,
            tick
        );
    }
    let mut ytick = 1.0;
    while ytick < y_max {
        let _ = writeln!(
            svg,
            "  <line x1=\"{1:.3}\" y1=\"{0:.3}\" x2=\"{2:.3}\" y2=\"{0:.3}\" stroke=\"black\"/>",
            sy(ytick),
            sx(0.0) - 4.0,
            sx(0.0) + 4.0
        );
        let _ = writeln!(
            svg,
            "  <text x=\"{:.3}\" y=\"{:.3}\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            sx(0.0) - 8.0,
            sy(ytick) + 4.0,
            ytick
        );
        ytick += 1.0;
    }
    let _ = writeln!(
        svg,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
        polyline(f_samples)
    );
    let _ = writeln!(
        svg,
        "  <polyline points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>",
        polyline(&ideal)
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Write-to-temp-then-rename; the destination is never partially written.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name()
            .map(|s| s.to_string_lossy().to_string())
            .unwrap_or_else(|| "out".into()),
        std::process::id()
    ));
    {
        let mut file = std::fs::File::create(&tmp)?;
        file.write_all(content.as_bytes())?;
        file.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}
