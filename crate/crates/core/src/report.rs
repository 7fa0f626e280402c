//! Table and chart rendering for results, deltas, domain breakdowns and
//! choice distributions. Markdown uses ▲/▼ direction markers; CSV uses
//! plain +/- signs.

use crate::bias::{ChoiceDistribution, MAX_OPTIONS};
use crate::evaluator::{DeltaTable, DomainDeltaTable, EvalResult};

fn marker_md(delta: f64) -> String {
    if delta >= 0.0 {
        format!("\u{25B2} {:.2}", delta.abs())
    } else {
        format!("\u{25BC} {:.2}", delta.abs())
    }
}

fn marker_csv(delta: f64) -> String {
    if delta >= 0.0 {
        format!("+{:.2}", delta.abs())
    } else {
        format!("-{:.2}", delta.abs())
    }
}

fn option_letter(position: usize) -> char {
    (b'A' + position as u8) as char
}

/// Accuracy table for one run, percentages at two decimals.
pub fn results_markdown(results: &[EvalResult]) -> String {
    let mut out = String::from("| Benchmark | Lang | Accuracy | Items | Unscored |\n");
    out.push_str("|---|---|---|---|---|\n");
    for result in results {
        out.push_str(&format!(
            "| {} | {} | {:.2} | {} | {} |\n",
            result.benchmark,
            result.language,
            result.accuracy * 100.0,
            result.n_items,
            result.unscored.len()
        ));
    }
    out
}

pub fn results_csv(results: &[EvalResult]) -> String {
    let mut out = String::from("benchmark,lang,accuracy,n_items,n_correct,unscored\n");
    for result in results {
        out.push_str(&format!(
            "{},{},{:.4},{},{},{}\n",
            result.benchmark,
            result.language,
            result.accuracy * 100.0,
            result.n_items,
            result.n_correct,
            result.unscored.len()
        ));
    }
    out
}

/// Baseline/candidate comparison in the layout of the published score
/// tables: one row per benchmark and language, then averages.
pub fn delta_markdown(table: &DeltaTable) -> String {
    let mut out = String::from("| Benchmark | Lang | Baseline | Candidate | Change |\n");
    out.push_str("|---|---|---|---|---|\n");
    for cell in &table.cells {
        out.push_str(&format!(
            "| {} | {} | {:.2} | {:.2} | {} |\n",
            cell.benchmark,
            cell.language,
            cell.baseline,
            cell.candidate,
            marker_md(cell.delta)
        ));
    }
    for average in &table.averages {
        out.push_str(&format!(
            "| **Average** | **{}** | **{:.2}** | **{:.2}** | **{}** |\n",
            average.language,
            average.baseline,
            average.candidate,
            marker_md(average.delta)
        ));
    }
    if let Some(overall) = &table.overall {
        out.push_str(&format!(
            "| **Overall** | | **{:.2}** | **{:.2}** | **{}** |\n",
            overall.baseline,
            overall.candidate,
            marker_md(overall.delta)
        ));
    }
    out
}

pub fn delta_csv(table: &DeltaTable) -> String {
    let mut out = String::from("benchmark,lang,baseline,candidate,change\n");
    for cell in &table.cells {
        out.push_str(&format!(
            "{},{},{:.2},{:.2},{}\n",
            cell.benchmark,
            cell.language,
            cell.baseline,
            cell.candidate,
            marker_csv(cell.delta)
        ));
    }
    for average in &table.averages {
        out.push_str(&format!(
            "Average,{},{:.2},{:.2},{}\n",
            average.language,
            average.baseline,
            average.candidate,
            marker_csv(average.delta)
        ));
    }
    if let Some(overall) = &table.overall {
        out.push_str(&format!(
            "Overall,,{:.2},{:.2},{}\n",
            overall.baseline,
            overall.candidate,
            marker_csv(overall.delta)
        ));
    }
    out
}

fn optional_pct(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.2}")).unwrap_or_else(|| "-".into())
}

pub fn domain_markdown(table: &DomainDeltaTable) -> String {
    let mut out =
        String::from("| Domain | Baseline | Candidate | Change | Training Data Used |\n");
    out.push_str("|---|---|---|---|---|\n");
    for row in &table.rows {
        let change = row
            .delta
            .map(marker_md)
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} |\n",
            row.domain,
            optional_pct(row.baseline_accuracy),
            optional_pct(row.candidate_accuracy),
            change,
            row.coverage.label()
        ));
    }
    out
}

pub fn domain_csv(table: &DomainDeltaTable) -> String {
    let mut out = String::from("domain,baseline,candidate,change,training_data_used\n");
    for row in &table.rows {
        let change = row
            .delta
            .map(marker_csv)
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.domain,
            optional_pct(row.baseline_accuracy),
            optional_pct(row.candidate_accuracy),
            change,
            row.coverage.label()
        ));
    }
    out
}

/// Histogram CSV for one or more labelled distributions.
pub fn distributions_csv(series: &[(String, ChoiceDistribution)]) -> String {
    let mut out = String::from("label,position,count,availability,frequency,baseline\n");
    for (label, distribution) in series {
        let frequencies = distribution.frequencies();
        let baseline = distribution.baseline();
        for position in 0..MAX_OPTIONS {
            out.push_str(&format!(
                "{label},{},{},{},{:.6},{:.6}\n",
                option_letter(position),
                distribution.counts[position],
                distribution.availability[position],
                frequencies[position],
                baseline[position]
            ));
        }
    }
    out
}

/// Grouped bar chart of choice frequencies, one group per option position
/// and one bar per labelled series.
pub fn distribution_svg(series: &[(String, ChoiceDistribution)]) -> String {
    const WIDTH: f64 = 900.0;
    const HEIGHT: f64 = 420.0;
    const MARGIN_LEFT: f64 = 60.0;
    const MARGIN_BOTTOM: f64 = 60.0;
    const MARGIN_TOP: f64 = 30.0;
    const PALETTE: [&str; 6] = [
        "#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#b279a2",
    ];

    let plot_width = WIDTH - MARGIN_LEFT - 20.0;
    let plot_height = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let max_frequency = series
        .iter()
        .flat_map(|(_, d)| d.frequencies())
        .fold(0.0f64, f64::max)
        .max(0.05);

    let mut svg = format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    svg.push_str(&format!(
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    ));

    // Axes.
    let axis_y = HEIGHT - MARGIN_BOTTOM;
    svg.push_str(&format!(
        r#"<line x1="{MARGIN_LEFT}" y1="{axis_y}" x2="{}" y2="{axis_y}" stroke="black"/>"#,
        MARGIN_LEFT + plot_width
    ));
    svg.push_str(&format!(
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{axis_y}" stroke="black"/>"#
    ));
    for tick in 0..=4 {
        let fraction = tick as f64 / 4.0;
        let value = max_frequency * fraction;
        let y = axis_y - plot_height * fraction;
        svg.push_str(&format!(
            r#"<text x="{}" y="{:.1}" font-size="11" text-anchor="end">{:.2}</text>"#,
            MARGIN_LEFT - 6.0,
            y + 4.0,
            value
        ));
        svg.push_str(&format!(
            r##"<line x1="{MARGIN_LEFT}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="#dddddd"/>"##,
            MARGIN_LEFT + plot_width
        ));
    }

    let group_width = plot_width / MAX_OPTIONS as f64;
    let bar_width = (group_width * 0.8) / series.len().max(1) as f64;

    for (series_index, (label, distribution)) in series.iter().enumerate() {
        let color = PALETTE[series_index % PALETTE.len()];
        let frequencies = distribution.frequencies();
        for (position, &frequency) in frequencies.iter().enumerate() {
            let bar_height = plot_height * frequency / max_frequency;
            let x = MARGIN_LEFT
                + position as f64 * group_width
                + group_width * 0.1
                + series_index as f64 * bar_width;
            let y = axis_y - bar_height;
            svg.push_str(&format!(
                r#"<rect x="{x:.1}" y="{y:.1}" width="{bar_width:.1}" height="{bar_height:.1}" fill="{color}"><title>{label} {}: {frequency:.4}</title></rect>"#,
                option_letter(position)
            ));
        }
        // Legend.
        let legend_x = MARGIN_LEFT + 10.0 + series_index as f64 * 150.0;
        svg.push_str(&format!(
            r#"<rect x="{legend_x:.1}" y="8" width="10" height="10" fill="{color}"/>"#
        ));
        svg.push_str(&format!(
            r#"<text x="{:.1}" y="17" font-size="12">{label}</text>"#,
            legend_x + 14.0
        ));
    }

    for position in 0..MAX_OPTIONS {
        let x = MARGIN_LEFT + position as f64 * group_width + group_width / 2.0;
        svg.push_str(&format!(
            r#"<text x="{x:.1}" y="{:.1}" font-size="12" text-anchor="middle">{}</text>"#,
            axis_y + 18.0,
            option_letter(position)
        ));
    }
    svg.push_str(&format!(
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">option position</text>"#,
        MARGIN_LEFT + plot_width / 2.0,
        HEIGHT - 16.0
    ));

    svg.push_str("</svg>");
    svg
}
