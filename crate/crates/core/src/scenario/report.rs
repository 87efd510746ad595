//! Comparison reports: one row per exploration regime, rendered as an
//! aligned text table or as CSV.
//!
//! Counts follow the funnel (p configurations, l placements, n complete
//! solutions) and timings carry a min/max pair: min assumes every sub-space
//! runs in parallel (critical path), max assumes strictly sequential work.

use std::io::{self, Write};

use serde::Serialize;

/// Seconds per year in report durations (365 days).
const SECONDS_PER_YEAR: u128 = 365 * 86_400;

/// The exploration regime a report row describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Undivided enumeration of the whole solution space.
    Brute,
    /// Layered exploration, filters applied after each generation stage.
    IsseV1,
    /// Layered exploration, filters integrated into the generators.
    IsseV2,
}

impl Method {
    /// The mode name used on the command line.
    pub fn label(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::IsseV1 => "issev1",
            Method::IsseV2 => "issev2",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// One report row. `None` means the regime does not produce that figure
/// (brute force has no per-layer split; a skipped enumeration has no counts).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub method: Method,
    /// Configurations surviving the first layer.
    pub p: Option<u64>,
    /// Placements surviving the second layer.
    pub l: Option<u64>,
    /// Complete solutions.
    pub n: Option<u64>,
    /// Time spent in the configuration layer, in seconds.
    pub t_p_s: Option<f64>,
    /// Time spent in the layout layer, in seconds.
    pub t_l_s: Option<f64>,
    /// Longest single parameter-layer node (fully parallel bound).
    pub t_n_min_s: Option<f64>,
    /// Summed parameter-layer time (strictly sequential bound).
    pub t_n_max_s: Option<f64>,
    /// Critical-path total, in seconds.
    pub t_tot_min_s: Option<f64>,
    /// Strictly sequential total, in seconds.
    pub t_tot_max_s: Option<f64>,
    /// Projected size of the undivided enumeration.
    pub estimated_count: u128,
    /// Projected undivided-enumeration time at the per-evaluation cost.
    pub estimated_time_s: Option<f64>,
    /// True when enumeration was skipped and the row holds projections only.
    pub estimated_only: bool,
}

/// Report output formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    /// Aligned, human-readable text table.
    Table,
    /// Machine-readable CSV with raw second values.
    Csv,
}

/// Writes the rows in the requested format.
pub fn write_report(
    rows: &[ReportRow],
    format: ReportFormat,
    out: &mut impl Write,
) -> io::Result<()> {
    match format {
        ReportFormat::Table => write_table(rows, out),
        ReportFormat::Csv => write_csv(rows, out),
    }
}

const HEADERS: [&str; 12] = [
    "method", "p", "l", "n", "t_p", "t_l", "t_n min", "t_n max", "t_tot min", "t_tot max",
    "est. candidates", "est. time",
];

fn table_cells(row: &ReportRow) -> [String; 12] {
    let count = |v: Option<u64>| v.map_or("-".to_string(), |v| thousands(u128::from(v)));
    let time = |v: Option<f64>| v.map_or("-".to_string(), format_duration);
    let method = if row.estimated_only {
        format!("{} (projected)", row.method)
    } else {
        row.method.to_string()
    };
    [
        method,
        count(row.p),
        count(row.l),
        count(row.n),
        time(row.t_p_s),
        time(row.t_l_s),
        time(row.t_n_min_s),
        time(row.t_n_max_s),
        time(row.t_tot_min_s),
        time(row.t_tot_max_s),
        thousands(row.estimated_count),
        time(row.estimated_time_s),
    ]
}

fn write_table(rows: &[ReportRow], out: &mut impl Write) -> io::Result<()> {
    let body: Vec<[String; 12]> = rows.iter().map(table_cells).collect();
    let widths: Vec<usize> = HEADERS
        .iter()
        .enumerate()
        .map(|(i, h)| body.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
        .collect();
    let line = |cells: &[String]| {
        cells
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    let headers: Vec<String> = HEADERS.iter().map(|h| h.to_string()).collect();
    writeln!(out, "{}", line(&headers))?;
    writeln!(out, "{}", widths.iter().map(|w| "-".repeat(*w)).collect::<Vec<_>>().join("  "))?;
    for row in &body {
        writeln!(out, "{}", line(row))?;
    }
    Ok(())
}

fn write_csv(rows: &[ReportRow], out: &mut impl Write) -> io::Result<()> {
    writeln!(
        out,
        "method,p,l,n,t_p_s,t_l_s,t_n_min_s,t_n_max_s,t_tot_min_s,t_tot_max_s,\
         estimated_candidates,estimated_time_s,estimated_only"
    )?;
    for row in rows {
        let count = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
        let time = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            row.method,
            count(row.p),
            count(row.l),
            count(row.n),
            time(row.t_p_s),
            time(row.t_l_s),
            time(row.t_n_min_s),
            time(row.t_n_max_s),
            time(row.t_tot_min_s),
            time(row.t_tot_max_s),
            row.estimated_count,
            time(row.estimated_time_s),
            row.estimated_only,
        )?;
    }
    Ok(())
}

/// Formats seconds compactly: fractional seconds below one minute, then a
/// `years/days/hours/minutes/seconds` cascade with 365-day years. Years get
/// thousands separators, so very large projections stay readable.
pub fn format_duration(seconds: f64) -> String {
    if !seconds.is_finite() {
        return "inf".to_string();
    }
    let seconds = seconds.max(0.0);
    if seconds < 60.0 {
        return format!("{seconds:.3}s");
    }
    let total = seconds.round() as u128;
    let (years, rem) = (total / SECONDS_PER_YEAR, total % SECONDS_PER_YEAR);
    let (days, rem) = (rem / 86_400, rem % 86_400);
    let (hours, rem) = (rem / 3_600, rem % 3_600);
    let (minutes, secs) = (rem / 60, rem % 60);
    let mut out = String::new();
    if years > 0 {
        out.push_str(&format!("{}a ", thousands(years)));
    }
    if days > 0 || !out.is_empty() {
        out.push_str(&format!("{days}d "));
    }
    if hours > 0 || !out.is_empty() {
        out.push_str(&format!("{hours}h "));
    }
    if minutes > 0 || !out.is_empty() {
        out.push_str(&format!("{minutes}m "));
    }
    out.push_str(&format!("{secs}s"));
    out
}

/// Groups digits with commas: `1234567` → `"1,234,567"`.
pub fn thousands(value: u128) -> String {
    let digits = value.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row() -> ReportRow {
        ReportRow {
            method: Method::IsseV2,
            p: Some(4),
            l: Some(12),
            n: Some(24),
            t_p_s: Some(0.5),
            t_l_s: Some(1.25),
            t_n_min_s: Some(2.0),
            t_n_max_s: Some(8.0),
            t_tot_min_s: Some(3.0),
            t_tot_max_s: Some(9.75),
            estimated_count: 84_480,
            estimated_time_s: Some(84_480.0),
            estimated_only: false,
        }
    }

    #[test]
    fn durations_below_a_minute_keep_milliseconds() {
        assert_eq!(format_duration(0.0), "0.000s");
        assert_eq!(format_duration(12.5), "12.500s");
        assert_eq!(format_duration(59.9994), "59.999s");
    }

    #[test]
    fn durations_cascade_through_all_units() {
        assert_eq!(format_duration(90.0), "1m 30s");
        assert_eq!(format_duration(3_600.0), "1h 0m 0s");
        assert_eq!(format_duration(90_061.0), "1d 1h 1m 1s");
        assert_eq!(format_duration(31_536_000.0), "1a 0d 0h 0m 0s");
    }

    #[test]
    fn enormous_projections_render_in_years() {
        assert_eq!(format_duration(1_900_000_000_027.0), "60,248a 220d 17h 47m 7s");
        assert_eq!(format_duration(f64::INFINITY), "inf");
    }

    #[test]
    fn thousands_groups_digits() {
        assert_eq!(thousands(0), "0");
        assert_eq!(thousands(999), "999");
        assert_eq!(thousands(1_000), "1,000");
        assert_eq!(thousands(1_234_567), "1,234,567");
        assert_eq!(thousands(1_900_000_000_027), "1,900,000,000,027");
    }

    #[test]
    fn table_renders_aligned_columns_and_dashes() {
        let mut skipped = sample_row();
        skipped.method = Method::Brute;
        skipped.p = None;
        skipped.l = None;
        skipped.n = None;
        skipped.t_p_s = None;
        skipped.t_l_s = None;
        skipped.t_n_min_s = None;
        skipped.t_n_max_s = None;
        skipped.t_tot_min_s = None;
        skipped.t_tot_max_s = None;
        skipped.estimated_only = true;

        let mut buffer = Vec::new();
        write_report(&[sample_row(), skipped], ReportFormat::Table, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4, "header, separator and two rows");
        assert!(lines[0].contains("t_tot min"));
        assert!(lines[3].contains("brute (projected)"));
        assert!(lines[3].contains('-'), "missing figures render as dashes");
        assert!(text.contains("84,480"));
        let width = lines[0].len();
        assert!(lines.iter().all(|l| l.len() == width), "all lines align");
    }

    #[test]
    fn csv_renders_raw_seconds_and_empty_missing_cells() {
        let mut buffer = Vec::new();
        write_report(&[sample_row()], ReportFormat::Csv, &mut buffer).unwrap();
        let text = String::from_utf8(buffer).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(
            lines[0],
            "method,p,l,n,t_p_s,t_l_s,t_n_min_s,t_n_max_s,t_tot_min_s,t_tot_max_s,\
             estimated_candidates,estimated_time_s,estimated_only"
        );
        assert_eq!(lines[1], "issev2,4,12,24,0.5,1.25,2,8,3,9.75,84480,84480,false");
    }

    #[test]
    fn method_labels_match_the_cli_modes() {
        assert_eq!(Method::Brute.label(), "brute");
        assert_eq!(Method::IsseV1.label(), "issev1");
        assert_eq!(Method::IsseV2.label(), "issev2");
    }
}
