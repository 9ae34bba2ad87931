//! Output rendering: dependency-free SVG line plots and the tabular
//! summaries used by the CLI (effect-transfer and bootstrap tables).

use crate::metrics::MetricsCurve;
use crate::resample::BootstrapSummary;

/// One plotted line.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// A minimal line plot over the unit square (rates against rates), with
/// axes, ticks, and a legend. Output is deterministic.
pub fn line_plot_svg(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (w, h) = (640.0, 480.0);
    let (ml, mr, mt, mb) = (62.0, 18.0, 42.0, 52.0);
    let (pw, ph) = (w - ml - mr, h - mt - mb);
    let sx = |x: f64| ml + x.clamp(0.0, 1.0) * pw;
    let sy = |y: f64| mt + (1.0 - y.clamp(0.0, 1.0)) * ph;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" \
         viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\">\n"
    ));
    out.push_str(&format!(
        "  <rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>\n"
    ));
    out.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n",
        ml + pw / 2.0,
        escape(title)
    ));
    // frame
    out.push_str(&format!(
        "  <rect x=\"{ml:.1}\" y=\"{mt:.1}\" width=\"{pw:.1}\" height=\"{ph:.1}\" \
         fill=\"none\" stroke=\"#333\" stroke-width=\"1\"/>\n"
    ));
    // ticks at every 0.2
    for k in 0..=5 {
        let v = k as f64 * 0.2;
        out.push_str(&format!(
            "  <line x1=\"{0:.1}\" y1=\"{1:.1}\" x2=\"{0:.1}\" y2=\"{2:.1}\" stroke=\"#333\"/>\n",
            sx(v),
            mt + ph,
            mt + ph + 5.0
        ));
        out.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"11\">{v:.1}</text>\n",
            sx(v),
            mt + ph + 18.0
        ));
        out.push_str(&format!(
            "  <line x1=\"{0:.1}\" y1=\"{1:.1}\" x2=\"{2:.1}\" y2=\"{1:.1}\" stroke=\"#333\"/>\n",
            ml - 5.0,
            sy(v),
            ml
        ));
        out.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\" font-size=\"11\">{v:.1}</text>\n",
            ml - 8.0,
            sy(v) + 4.0
        ));
    }
    out.push_str(&format!(
        "  <text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"13\">{}</text>\n",
        ml + pw / 2.0,
        h - 12.0,
        escape(x_label)
    ));
    out.push_str(&format!(
        "  <text x=\"16\" y=\"{:.1}\" text-anchor=\"middle\" font-size=\"13\" \
         transform=\"rotate(-90 16 {:.1})\">{}</text>\n",
        mt + ph / 2.0,
        mt + ph / 2.0,
        escape(y_label)
    ));
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        out.push_str(&format!(
            "  <polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            pts.join(" ")
        ));
        let ly = mt + 16.0 + 18.0 * i as f64;
        out.push_str(&format!(
            "  <line x1=\"{:.1}\" y1=\"{ly:.1}\" x2=\"{:.1}\" y2=\"{ly:.1}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n",
            ml + pw - 120.0,
            ml + pw - 96.0
        ));
        out.push_str(&format!(
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-size=\"12\">{}</text>\n",
            ml + pw - 90.0,
            ly + 4.0,
            escape(&s.label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Power-vs-Type-I and TDR-vs-Type-I plots for a set of curves on one
/// scenario.
pub fn curve_plots(scenario: &str, curves: &[MetricsCurve]) -> (String, String) {
    let power_series: Vec<Series> = curves
        .iter()
        .map(|c| Series {
            label: c.method.to_string(),
            points: c.points.iter().map(|p| (p.type1, p.power)).collect(),
        })
        .collect();
    let tdr_series: Vec<Series> = curves
        .iter()
        .map(|c| Series {
            label: c.method.to_string(),
            points: c
                .points
                .iter()
                .filter_map(|p| p.tdr.map(|t| (p.type1, t)))
                .collect(),
        })
        .collect();
    (
        line_plot_svg(
            &format!("Power vs Type I error — {scenario}"),
            "Type I error",
            "Power",
            &power_series,
        ),
        line_plot_svg(
            &format!("Conditional TDR vs Type I error — {scenario}"),
            "Type I error",
            "Conditional true discovery rate",
            &tdr_series,
        ),
    )
}

/// Row of an effect-transfer table.
#[derive(Debug, Clone)]
pub struct TransferRow {
    pub group: String,
    pub first: f64,
    pub second: Option<f64>,
}

/// Estimated-treatment-effect table across two datasets: overall, inside
/// the signature, and outside it.
pub fn transfer_table_markdown(rows: &[TransferRow]) -> String {
    let mut out = String::from(
        "| Patient Group | First dataset | Second dataset |\n|---|---|---|\n",
    );
    for r in rows {
        let second = r
            .second
            .map(|v| format!("{v:.3}"))
            .unwrap_or_else(|| "—".into());
        out.push_str(&format!("| {} | {:.3} | {second} |\n", r.group, r.first));
    }
    out
}

/// Bootstrap summary in the subgroup / mean-effect / CI layout, with the
/// between-subgroup difference as the final row.
pub fn bootstrap_table_markdown(
    member_label: &str,
    nonmember_label: &str,
    s: &BootstrapSummary,
) -> String {
    let pct = (s.level * 100.0).round() as u32;
    let mut out = format!("| Subgroup | Mean Effect | {pct}% CI |\n|---|---|---|\n");
    let mut row = |label: &str, point: f64, ci: (f64, f64)| {
        out.push_str(&format!(
            "| {label} | {point:.3} | ({:.3}, {:.3}) |\n",
            ci.0, ci.1
        ));
    };
    row(member_label, s.point_member, s.member_ci);
    row(nonmember_label, s.point_nonmember, s.nonmember_ci);
    row(
        "Difference between Above Two Subgroups",
        s.point_difference,
        s.difference_ci,
    );
    if s.excluded > 0 {
        out.push_str(&format!(
            "\n{} of {} replicates excluded (empty subgroup in the resample).\n",
            s.excluded, s.b
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svg_is_wellformed_and_deterministic() {
        let series = vec![
            Series {
                label: "vg".into(),
                points: vec![(0.0, 0.0), (0.2, 0.8), (1.0, 1.0)],
            },
            Series {
                label: "vt".into(),
                points: vec![(0.0, 0.0), (0.5, 0.5)],
            },
        ];
        let a = line_plot_svg("Power", "Type I error", "Power", &series);
        let b = line_plot_svg("Power", "Type I error", "Power", &series);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert!(a.contains("polyline"));
        assert!(a.contains("vg"));
    }

    #[test]
    fn transfer_table_shape() {
        let rows = vec![
            TransferRow {
                group: "Overall".into(),
                first: 0.91,
                second: Some(0.07),
            },
            TransferRow {
                group: "X1 <= 3.55".into(),
                first: 1.24,
                second: Some(0.0),
            },
            TransferRow {
                group: "X1 > 3.55".into(),
                first: 0.24,
                second: Some(0.15),
            },
        ];
        let md = transfer_table_markdown(&rows);
        assert!(md.contains("| Overall | 0.910 | 0.070 |"));
        assert!(md.lines().count() == 5);
    }
}
