//! Self-contained SVG rendering of benchmark CSVs: a mean-distance-vs-n
//! line chart plus distance and Hamming histograms, no plotting
//! dependencies.

use crate::error::{Error, Result};
use crate::harness::{BenchResultRow, CSV_HEADER};
use std::collections::BTreeMap;

const PANEL_WIDTH: f64 = 460.0;
const PANEL_HEIGHT: f64 = 360.0;
const MARGIN: f64 = 52.0;
const PALETTE: [&str; 6] = [
    "#1f3b70", "#e07b39", "#2e8540", "#6db3d9", "#8c4d9e", "#b03a3a",
];

/// Parses benchmark CSV text (comment lines ignored) into rows.
pub fn parse_bench_csv(csv: &str) -> Result<Vec<BenchResultRow>> {
    let mut lines = csv
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::InvalidArgument("empty CSV".into()))?;
    if header.trim() != CSV_HEADER {
        return Err(Error::InvalidArgument(format!(
            "unexpected CSV header '{header}'"
        )));
    }
    lines.map(BenchResultRow::from_csv_line).collect()
}

/// Renders the three benchmark panels as a standalone SVG document.
pub fn render_svg(rows: &[BenchResultRow]) -> String {
    let width = 3.0 * PANEL_WIDTH;
    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{PANEL_HEIGHT}\" \
         viewBox=\"0 0 {width} {PANEL_HEIGHT}\" font-family=\"sans-serif\" font-size=\"12\">\n"
    ));
    svg.push_str(&format!(
        "<rect width=\"{width}\" height=\"{PANEL_HEIGHT}\" fill=\"white\"/>\n"
    ));

    let methods: Vec<String> = {
        let mut m: Vec<String> = rows.iter().map(|r| r.method.clone()).collect();
        m.sort();
        m.dedup();
        m
    };

    render_distance_vs_n(&mut svg, rows, &methods, 0.0);
    render_distance_histogram(&mut svg, rows, &methods, PANEL_WIDTH);
    render_hamming_histogram(&mut svg, rows, &methods, 2.0 * PANEL_WIDTH);

    // legend
    for (i, method) in methods.iter().enumerate() {
        let x = 10.0 + 110.0 * i as f64;
        let color = PALETTE[i % PALETTE.len()];
        svg.push_str(&format!(
            "<rect x=\"{x}\" y=\"6\" width=\"12\" height=\"12\" fill=\"{color}\"/>\
             <text x=\"{}\" y=\"16\">{method}</text>\n",
            x + 16.0
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

fn axes(svg: &mut String, offset_x: f64, title: &str) {
    let left = offset_x + MARGIN;
    let right = offset_x + PANEL_WIDTH - 12.0;
    let top = 30.0;
    let bottom = PANEL_HEIGHT - MARGIN;
    svg.push_str(&format!(
        "<line x1=\"{left}\" y1=\"{bottom}\" x2=\"{right}\" y2=\"{bottom}\" stroke=\"black\"/>\n\
         <line x1=\"{left}\" y1=\"{top}\" x2=\"{left}\" y2=\"{bottom}\" stroke=\"black\"/>\n\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        offset_x + PANEL_WIDTH / 2.0,
        top - 8.0
    ));
}

fn no_data(svg: &mut String, offset_x: f64) {
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" fill=\"#777\">no data</text>\n",
        offset_x + PANEL_WIDTH / 2.0,
        PANEL_HEIGHT / 2.0
    ));
}

fn render_distance_vs_n(
    svg: &mut String,
    rows: &[BenchResultRow],
    methods: &[String],
    offset_x: f64,
) {
    axes(svg, offset_x, "mean distance to optimum vs sample size");
    if rows.is_empty() {
        no_data(svg, offset_x);
        return;
    }
    let mut series: BTreeMap<&str, BTreeMap<usize, (f64, usize)>> = BTreeMap::new();
    for row in rows {
        let cell = series
            .entry(row.method.as_str())
            .or_default()
            .entry(row.n_samples)
            .or_insert((0.0, 0));
        cell.0 += row.distance;
        cell.1 += 1;
    }
    let n_min = rows.iter().map(|r| r.n_samples).min().unwrap() as f64;
    let n_max = rows.iter().map(|r| r.n_samples).max().unwrap() as f64;
    let y_max = series
        .values()
        .flat_map(|points| points.values().map(|&(sum, count)| sum / count as f64))
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let left = offset_x + MARGIN;
    let right = offset_x + PANEL_WIDTH - 12.0;
    let top = 30.0;
    let bottom = PANEL_HEIGHT - MARGIN;
    let x_of = |n: f64| {
        if n_max > n_min {
            left + (n - n_min) / (n_max - n_min) * (right - left)
        } else {
            (left + right) / 2.0
        }
    };
    let y_of = |v: f64| bottom - v / y_max * (bottom - top - 10.0);
    for (i, method) in methods.iter().enumerate() {
        let Some(points) = series.get(method.as_str()) else {
            continue;
        };
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = points
            .iter()
            .map(|(&n, &(sum, count))| {
                let (x, y) = (x_of(n as f64), y_of(sum / count as f64));
                format!("{x:.1},{y:.1}")
            })
            .collect();
        svg.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"/>\n",
            path.join(" ")
        ));
        for (&n, &(sum, count)) in points {
            let (x, y) = (x_of(n as f64), y_of(sum / count as f64));
            svg.push_str(&format!(
                "<circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"3\" fill=\"{color}\"/>\n"
            ));
        }
    }
    svg.push_str(&format!(
        "<text x=\"{left}\" y=\"{}\" font-size=\"11\">n={n_min:.0}..{n_max:.0}, \
         max mean distance={y_max:.3}</text>\n",
        PANEL_HEIGHT - 18.0
    ));
}

fn render_bars(
    svg: &mut String,
    methods: &[String],
    buckets: &[String],
    counts: &BTreeMap<&str, Vec<usize>>,
    offset_x: f64,
) {
    let left = offset_x + MARGIN;
    let right = offset_x + PANEL_WIDTH - 12.0;
    let top = 30.0;
    let bottom = PANEL_HEIGHT - MARGIN;
    let max_count = counts
        .values()
        .flat_map(|v| v.iter().copied())
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let group_width = (right - left) / buckets.len() as f64;
    let bar_width = (group_width * 0.8 / methods.len() as f64).max(1.0);
    for (b, label) in buckets.iter().enumerate() {
        let group_x = left + b as f64 * group_width;
        for (i, method) in methods.iter().enumerate() {
            let Some(histogram) = counts.get(method.as_str()) else {
                continue;
            };
            let count = histogram[b] as f64;
            let height = count / max_count * (bottom - top - 10.0);
            let x = group_x + group_width * 0.1 + i as f64 * bar_width;
            let color = PALETTE[i % PALETTE.len()];
            svg.push_str(&format!(
                "<rect x=\"{x:.1}\" y=\"{:.1}\" width=\"{bar_width:.1}\" height=\"{height:.1}\" \
                 fill=\"{color}\"/>\n",
                bottom - height
            ));
        }
        if buckets.len() <= 16 || b % 2 == 0 {
            svg.push_str(&format!(
                "<text x=\"{:.1}\" y=\"{}\" text-anchor=\"middle\" font-size=\"10\">{label}</text>\n",
                group_x + group_width / 2.0,
                bottom + 14.0
            ));
        }
    }
}

fn render_distance_histogram(
    svg: &mut String,
    rows: &[BenchResultRow],
    methods: &[String],
    offset_x: f64,
) {
    axes(svg, offset_x, "distance distribution (share of trials)");
    if rows.is_empty() {
        no_data(svg, offset_x);
        return;
    }
    let f_opt = rows
        .iter()
        .map(|r| r.f_opt)
        .fold(0.0f64, f64::max)
        .max(1e-12);
    let buckets = 10usize;
    let mut counts: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for row in rows {
        let histogram = counts
            .entry(row.method.as_str())
            .or_insert_with(|| vec![0; buckets]);
        let b = ((row.distance / f_opt * buckets as f64).floor() as usize).min(buckets - 1);
        histogram[b] += 1;
    }
    let labels: Vec<String> = (0..buckets)
        .map(|b| format!("{:.1}", f_opt * (b as f64 + 0.5) / buckets as f64))
        .collect();
    render_bars(svg, methods, &labels, &counts, offset_x);
}

fn render_hamming_histogram(
    svg: &mut String,
    rows: &[BenchResultRow],
    methods: &[String],
    offset_x: f64,
) {
    axes(svg, offset_x, "Hamming distance distribution");
    if rows.is_empty() {
        no_data(svg, offset_x);
        return;
    }
    let max_h = rows.iter().map(|r| r.hamming_dist).max().unwrap() as usize;
    let mut counts: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for row in rows {
        let histogram = counts
            .entry(row.method.as_str())
            .or_insert_with(|| vec![0; max_h + 1]);
        histogram[row.hamming_dist as usize] += 1;
    }
    let labels: Vec<String> = (0..=max_h).map(|h| h.to_string()).collect();
    render_bars(svg, methods, &labels, &counts, offset_x);
}

/// CSV text to SVG text.
pub fn plot_csv(csv: &str) -> Result<String> {
    let rows = parse_bench_csv(csv)?;
    Ok(render_svg(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_csv_renders_no_data_label() {
        let svg = plot_csv(&format!("{CSV_HEADER}\n")).unwrap();
        assert!(svg.contains("no data"));
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn single_point_series_renders() {
        let csv = format!("{CSV_HEADER}\nquad,quadruplet,50,0,7,8.0e0,8.0e0,0.0e0,0,50,none\n");
        let svg = plot_csv(&csv).unwrap();
        assert!(svg.contains("circle"));
        assert!(svg.contains("quad"));
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(plot_csv("not,a,header\n1,2,3\n").is_err());
        assert!(plot_csv(&format!("{CSV_HEADER}\nbad,row\n")).is_err());
        assert!(plot_csv("").is_err());
    }
}
