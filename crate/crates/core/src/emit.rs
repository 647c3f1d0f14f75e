//! Deterministic CSV and SVG emission for scenario series.
//!
//! CSV: long format, header `T_deg,kappa,<observable>`, one row per
//! (grid point, kappa) pair, observable values with 12 significant digits,
//! UNIX newlines. SVG: static 1.1 line plot, one polyline per kappa.
//! Re-emitting an unchanged series reproduces the files byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scenario::{Observable, ObservableSeries};

/// Twelve significant digits, scientific notation.
fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

/// Render one observable of the series as long-format CSV.
pub fn render_csv(series: &ObservableSeries, observable: Observable) -> Result<String> {
    let cols = series
        .columns
        .get(&observable)
        .ok_or_else(|| Error::DimensionMismatch(format!("series has no column {observable}")))?;
    if series.t_deg.is_empty() || cols.is_empty() {
        return Err(Error::InvalidParams("series is empty".into()));
    }
    let mut out = String::new();
    let _ = writeln!(out, "T_deg,kappa,{}", observable.name());
    for (ki, kappa) in series.kappas.iter().enumerate() {
        for (ti, t) in series.t_deg.iter().enumerate() {
            let _ = writeln!(out, "{t},{kappa},{}", sig12(cols[ki][ti]));
        }
    }
    Ok(out)
}

/// Write one observable of the series to a CSV file.
pub fn emit_csv(series: &ObservableSeries, observable: Observable, path: &Path) -> Result<()> {
    std::fs::write(path, render_csv(series, observable)?)?;
    Ok(())
}

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 150.0;
const MARGIN_T: f64 = 50.0;
const MARGIN_B: f64 = 55.0;
const PALETTE: [&str; 6] = [
    "#1f6fb2", "#d9541e", "#2a9d3f", "#8e44ad", "#c7a008", "#4d4d4d",
];

/// Render one observable of the series as a static SVG line plot with one
/// polyline per kappa.
pub fn render_svg(series: &ObservableSeries, observable: Observable) -> Result<String> {
    let cols = series
        .columns
        .get(&observable)
        .ok_or_else(|| Error::DimensionMismatch(format!("series has no column {observable}")))?;
    if series.t_deg.is_empty() || cols.is_empty() {
        return Err(Error::InvalidParams("series is empty".into()));
    }

    let x_min = series.t_deg.first().copied().unwrap();
    let x_max = series.t_deg.last().copied().unwrap().max(x_min + 1e-9);
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for col in cols {
        for &v in col {
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
    }
    if !(y_max > y_min) {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    let (y_lo, y_hi) = (y_min - pad, y_max + pad);

    let plot_w = WIDTH - MARGIN_L - MARGIN_R;
    let plot_h = HEIGHT - MARGIN_T - MARGIN_B;
    let to_x = |t: f64| MARGIN_L + (t - x_min) / (x_max - x_min) * plot_w;
    let to_y = |v: f64| MARGIN_T + (y_hi - v) / (y_hi - y_lo) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="28" font-family="sans-serif" font-size="16" text-anchor="middle">{} as a function of scaled time variable T</text>"#,
        MARGIN_L + plot_w / 2.0,
        observable.name()
    );
    // frame
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="black"/>"#
    );
    // axis ticks and labels
    for k in 0..=4 {
        let t = x_min + (x_max - x_min) * k as f64 / 4.0;
        let x = to_x(t);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#,
            MARGIN_T + plot_h,
            MARGIN_T + plot_h + 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{t:.1}</text>"#,
            MARGIN_T + plot_h + 20.0
        );
        let v = y_lo + (y_hi - y_lo) * k as f64 / 4.0;
        let y = to_y(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_L}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_L - 5.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{v:.3}</text>"#,
            MARGIN_L - 9.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle">T (deg), T = a11 t</text>"#,
        MARGIN_L + plot_w / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 18 {:.1})">{}</text>"#,
        MARGIN_T + plot_h / 2.0,
        MARGIN_T + plot_h / 2.0,
        observable.name()
    );

    for (ki, kappa) in series.kappas.iter().enumerate() {
        let color = PALETTE[ki % PALETTE.len()];
        let mut points = String::new();
        for (ti, t) in series.t_deg.iter().enumerate() {
            let _ = write!(points, "{:.2},{:.2} ", to_x(*t), to_y(cols[ki][ti]));
        }
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.trim_end()
        );
        let ly = MARGIN_T + 18.0 * ki as f64 + 12.0;
        let lx = MARGIN_L + plot_w + 12.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            lx + 22.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">kappa = {kappa}</text>"#,
            lx + 28.0,
            ly + 4.0
        );
    }
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

/// Write one observable of the series to an SVG file.
pub fn emit_svg(series: &ObservableSeries, observable: Observable, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(series, observable)?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::{run_scenario, ScenarioConfig};
    use std::collections::BTreeMap;

    fn tiny_series() -> ObservableSeries {
        let mut columns = BTreeMap::new();
        columns.insert(Observable::Pghz, vec![vec![0.5]]);
        ObservableSeries {
            t_deg: vec![0.0],
            kappas: vec![0.0],
            columns,
        }
    }

    #[test]
    fn single_point_csv_is_two_lines() {
        let csv = render_csv(&tiny_series(), Observable::Pghz).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "T_deg,kappa,pghz");
        assert_eq!(lines[1], "0,0,5.00000000000e-1");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn csv_rows_cover_grid_times_kappas() {
        let cfg = ScenarioConfig {
            kappas: vec![0.0, 0.01],
            grid_points: 5,
            t_max_deg: 90.0,
            outputs: [Observable::Pghz].into_iter().collect(),
            ..ScenarioConfig::default()
        };
        let series = run_scenario(&cfg).unwrap();
        let csv = render_csv(&series, Observable::Pghz).unwrap();
        assert_eq!(csv.lines().count(), 1 + 5 * 2);
    }

    #[test]
    fn reemission_is_byte_identical() {
        let cfg = ScenarioConfig {
            kappas: vec![0.0, 0.001, 0.01, 0.1],
            grid_points: 13,
            t_max_deg: 90.0,
            outputs: [Observable::Pghz].into_iter().collect(),
            ..ScenarioConfig::default()
        };
        let series = run_scenario(&cfg).unwrap();
        assert_eq!(
            render_csv(&series, Observable::Pghz).unwrap(),
            render_csv(&series, Observable::Pghz).unwrap()
        );
        let svg1 = render_svg(&series, Observable::Pghz).unwrap();
        let svg2 = render_svg(&series, Observable::Pghz).unwrap();
        assert_eq!(svg1, svg2);
        // one polyline per kappa
        assert_eq!(svg1.matches("<polyline").count(), 4);
        assert!(svg1.contains("as a function of scaled time variable T"));
    }

    #[test]
    fn missing_column_is_an_error() {
        assert!(render_csv(&tiny_series(), Observable::Inversion).is_err());
    }
}
