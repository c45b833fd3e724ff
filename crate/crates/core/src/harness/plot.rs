use std::collections::BTreeSet;
use std::fmt::Write;
use std::str::FromStr;

use super::CellSummary;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotMetric {
    SuccessRate,
    MeanRuntime,
    MeanSqr,
    MeanRoots,
    MeanTspCalls,
}

impl PlotMetric {
    fn label(&self) -> &'static str {
        match self {
            PlotMetric::SuccessRate => "success rate",
            PlotMetric::MeanRuntime => "mean runtime (s)",
            PlotMetric::MeanSqr => "mean SQR",
            PlotMetric::MeanRoots => "mean roots generated",
            PlotMetric::MeanTspCalls => "mean TSP solver calls",
        }
    }

    fn value(&self, c: &CellSummary) -> f64 {
        match self {
            PlotMetric::SuccessRate => c.success_rate,
            PlotMetric::MeanRuntime => c.mean_runtime,
            PlotMetric::MeanSqr => c.mean_sqr.unwrap_or(0.0),
            PlotMetric::MeanRoots => c.mean_roots_generated,
            PlotMetric::MeanTspCalls => c.mean_tsp_calls,
        }
    }
}

impl FromStr for PlotMetric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "success" | "success-rate" => Ok(PlotMetric::SuccessRate),
            "runtime" => Ok(PlotMetric::MeanRuntime),
            "sqr" => Ok(PlotMetric::MeanSqr),
            "roots" => Ok(PlotMetric::MeanRoots),
            "tsp-calls" => Ok(PlotMetric::MeanTspCalls),
            other => Err(format!("unknown metric '{other}' (success, runtime, sqr, roots, tsp-calls)")),
        }
    }
}

const PALETTE: [&str; 8] = ["#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#9c755f"];

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Grouped bar chart: one group per (map, N, M) cell, one bar per (variant, omega).
pub fn render_svg(summary: &[CellSummary], metric: PlotMetric) -> String {
    let groups: BTreeSet<(String, usize, usize)> = summary.iter().map(|c| (c.map.clone(), c.n_agents, c.n_tasks)).collect();
    let series: BTreeSet<(String, u64)> = summary.iter().map(|c| (c.variant.to_string(), c.omega.to_bits())).collect();
    let groups: Vec<_> = groups.into_iter().collect();
    let series: Vec<_> = series.into_iter().collect();

    let bar_w = 18.0;
    let group_w = bar_w * series.len().max(1) as f64 + 24.0;
    let (left, top, plot_h) = (70.0, 40.0, 260.0);
    let width = left + group_w * groups.len().max(1) as f64 + 180.0;
    let height = top + plot_h + 90.0;
    let max = summary.iter().map(|c| metric.value(c)).fold(0.0_f64, f64::max);
    let max = if max > 0.0 { max } else { 1.0 };

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(svg, r#"<text x="{left}" y="20" font-size="14">{}</text>"#, metric.label());
    let axis_y = top + plot_h;
    let _ = writeln!(svg, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{axis_y}" stroke="black"/>"#);
    let _ = writeln!(svg, r#"<line x1="{left}" y1="{axis_y}" x2="{:.1}" y2="{axis_y}" stroke="black"/>"#, width - 170.0);
    for k in 0..=4 {
        let v = max * k as f64 / 4.0;
        let y = axis_y - plot_h * k as f64 / 4.0;
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{v:.2}</text>"#, left - 6.0, y + 4.0);
    }
    for (gi, (map, n, m)) in groups.iter().enumerate() {
        let gx = left + 12.0 + gi as f64 * group_w;
        for (si, (variant, omega)) in series.iter().enumerate() {
            let Some(cell) = summary.iter().find(|c| {
                &c.map == map && c.n_agents == *n && c.n_tasks == *m && &c.variant.to_string() == variant && c.omega.to_bits() == *omega
            }) else {
                continue;
            };
            let h = plot_h * metric.value(cell) / max;
            let _ = writeln!(
                svg,
                r#"<rect x="{:.1}" y="{:.1}" width="{:.1}" height="{h:.1}" fill="{}"/>"#,
                gx + si as f64 * bar_w,
                axis_y - h,
                bar_w - 2.0,
                PALETTE[si % PALETTE.len()]
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            gx + bar_w * series.len() as f64 / 2.0,
            axis_y + 16.0,
            escape(map)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">N={n} M={m}</text>"#,
            gx + bar_w * series.len() as f64 / 2.0,
            axis_y + 30.0
        );
    }
    let lx = width - 160.0;
    for (si, (variant, omega)) in series.iter().enumerate() {
        let y = top + si as f64 * 18.0;
        let _ = writeln!(svg, r#"<rect x="{lx:.1}" y="{y:.1}" width="12" height="12" fill="{}"/>"#, PALETTE[si % PALETTE.len()]);
        let _ = writeln!(svg, r#"<text x="{:.1}" y="{:.1}">{} w={}</text>"#, lx + 18.0, y + 10.0, escape(variant), f64::from_bits(*omega));
    }
    svg.push_str("</svg>\n");
    svg
}
