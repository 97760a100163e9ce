//! CSV artifacts with a `#` metadata header, and a minimal SVG line chart.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const TOOL: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Header block: `# key: value` pairs, then the generating config as
/// `#| ` lines.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metadata {
    pub tool_version: String,
    pub experiment: String,
    pub config_hash: String,
    pub seed: Option<u64>,
    pub extra: Vec<(String, String)>,
    pub config: String,
}

impl Metadata {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.extra.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.extra.push((key.into(), value.to_string()));
    }

    fn write(&self, out: &mut String) {
        let seed = self.seed.map_or_else(|| "none".to_string(), |s| s.to_string());
        let fixed = [
            ("tool", self.tool_version.as_str()),
            ("experiment", self.experiment.as_str()),
            ("config_hash", self.config_hash.as_str()),
            ("seed", seed.as_str()),
        ];
        for (k, v) in fixed.into_iter().chain(self.extra.iter().map(|(k, v)| (k.as_str(), v.as_str()))) {
            let _ = writeln!(out, "# {k}: {v}");
        }
        for line in self.config.lines() {
            let _ = writeln!(out, "#| {line}");
        }
    }

    /// Splits `text` into its metadata and the CSV body.
    fn parse(text: &str) -> Result<(Metadata, &str)> {
        let mut meta = Metadata::default();
        let mut config = Vec::new();
        let mut consumed = 0;
        for raw in text.split_inclusive('\n') {
            let line = raw.trim_end_matches(['\n', '\r']);
            if !line.starts_with('#') {
                break;
            }
            consumed += raw.len();
            if let Some(c) = line.strip_prefix("#|") {
                config.push(c.strip_prefix(' ').unwrap_or(c));
                continue;
            }
            let body = line[1..].trim_start();
            let (k, v) = body
                .split_once(':')
                .ok_or_else(|| Error::Artifact(format!("header line without key: {line:?}")))?;
            let v = v.trim();
            match k.trim() {
                "tool" => meta.tool_version = v.into(),
                "experiment" => meta.experiment = v.into(),
                "config_hash" => meta.config_hash = v.into(),
                "seed" => {
                    meta.seed = match v {
                        "none" => None,
                        s => Some(s.parse().map_err(|_| Error::Artifact(format!("bad seed {s:?}")))?),
                    }
                }
                other => meta.extra.push((other.into(), v.into())),
            }
        }
        if meta.tool_version.is_empty() || meta.experiment.is_empty() || meta.config_hash.is_empty() {
            return Err(Error::Artifact("missing tool, experiment or config_hash header".into()));
        }
        meta.config = config.iter().map(|l| format!("{l}\n")).collect();
        Ok((meta, &text[consumed..]))
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Artifact(e.to_string())
}

fn write_records(out: &mut String, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Artifact(e.to_string()))?;
    out.push_str(&String::from_utf8(bytes).expect("csv of utf-8 input"));
    Ok(())
}

fn read_records(body: &str) -> Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
    let header: Vec<String> = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if header.is_empty() || header.iter().all(String::is_empty) {
        return Err(Error::Artifact("missing column header".into()));
    }
    let rows = r
        .records()
        .map(|rec| rec.map(|r| r.iter().map(str::to_string).collect()).map_err(csv_err))
        .collect::<Result<Vec<Vec<String>>>>()?;
    Ok((header, rows))
}

/// `(x, y)` samples, sorted by `x`.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveArtifact {
    pub metadata: Metadata,
    pub x_label: String,
    pub y_label: String,
    pub points: Vec<(f64, f64)>,
}

impl CurveArtifact {
    pub fn new(metadata: Metadata, x_label: &str, y_label: &str, mut points: Vec<(f64, f64)>) -> Self {
        points.sort_by(|a, b| a.0.total_cmp(&b.0));
        Self { metadata, x_label: x_label.into(), y_label: y_label.into(), points }
    }

    /// Floats are written in shortest round-trip form, so parsing the CSV
    /// gives back identical values.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        self.metadata.write(&mut out);
        let rows: Vec<Vec<String>> = self.points.iter().map(|(x, y)| vec![format!("{x:?}"), format!("{y:?}")]).collect();
        write_records(&mut out, &[self.x_label.clone(), self.y_label.clone()], &rows).expect("in-memory write");
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let (metadata, body) = Metadata::parse(text)?;
        let (header, rows) = read_records(body)?;
        let [x_label, y_label] = <[String; 2]>::try_from(header)
            .map_err(|h| Error::Artifact(format!("expected two columns, got {}", h.len())))?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| Error::Artifact(format!("not a number: {s:?}")));
        let points = rows
            .iter()
            .map(|r| match r.as_slice() {
                [x, y] => Ok((num(x)?, num(y)?)),
                _ => Err(Error::Artifact(format!("row with {} fields", r.len()))),
            })
            .collect::<Result<Vec<_>>>()?;
        if points.windows(2).any(|w| w[0].0 > w[1].0) {
            return Err(Error::Artifact("rows not sorted by the first column".into()));
        }
        Ok(Self { metadata, x_label, y_label, points })
    }

    pub fn to_svg(&self, title: &str) -> String {
        line_chart(title, &self.x_label, &self.y_label, &self.points)
    }
}

/// Rows of labeled string columns.
#[derive(Clone, Debug, PartialEq)]
pub struct TableArtifact {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TableArtifact {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        self.metadata.write(&mut out);
        write_records(&mut out, &self.columns, &self.rows).expect("in-memory write");
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let (metadata, body) = Metadata::parse(text)?;
        let (columns, rows) = read_records(body)?;
        if let Some(bad) = rows.iter().find(|r| r.len() != columns.len()) {
            return Err(Error::Artifact(format!("row with {} fields, header has {}", bad.len(), columns.len())));
        }
        Ok(Self { metadata, columns, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn tick(v: f64) -> String {
    if v != 0.0 && (v.abs() < 1e-2 || v.abs() >= 1e4) {
        format!("{v:.2e}")
    } else {
        format!("{:.3}", v).trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// A single-series line chart.
pub fn line_chart(title: &str, x_label: &str, y_label: &str, points: &[(f64, f64)]) -> String {
    const W: f64 = 640.0;
    const H: f64 = 400.0;
    const L: f64 = 70.0;
    const R: f64 = 20.0;
    const T: f64 = 40.0;
    const B: f64 = 50.0;
    let finite: Vec<(f64, f64)> = points.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = finite.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if finite.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    y0 = y0.min(0.0);
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    let px = |x: f64| L + (x - x0) / (x1 - x0) * (W - L - R);
    let py = |y: f64| H - B - (y - y0) / (y1 - y0) * (H - T - B);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" font-size="15" text-anchor="middle">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<path d="M{L},{T} V{} H{}" fill="none" stroke="black"/>"#,
        H - B,
        W - R
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{}" font-size="11" text-anchor="middle">{}</text>"#,
            px(fx),
            H - B + 16.0,
            tick(fx)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"#,
            L - 6.0,
            py(fy) + 4.0,
            tick(fy)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#,
        (L + W - R) / 2.0,
        H - 12.0,
        escape(x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    let pts: Vec<String> = finite.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
    let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="steelblue" stroke-width="1.5"/>"#, pts.join(" "));
    s.push_str("</svg>\n");
    s
}
