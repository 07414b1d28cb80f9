//! CSV, JSON and SVG output. Every writer here is a pure function of its
//! inputs (plus the seed, for word clouds): rerunning produces the same bytes.

use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analysis::{AreaScores, SimilarityMatrix, TermWeights};
use crate::corpus::Document;
use crate::error::{Error, Result};
use crate::textsim::{AggregationPolicy, JaroWinklerParams};

pub const TOOL_VERSION: &str = concat!("plansim ", env!("CARGO_PKG_VERSION"));

fn write_bytes(out: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(out, bytes).map_err(|e| Error::io(out, e))
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish_csv(w: csv::Writer<Vec<u8>>, out: &Path) -> Result<()> {
    let bytes = w.into_inner().map_err(|e| Error::io(out, e.into_error()))?;
    write_bytes(out, &bytes)
}

fn csv_err(out: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |source| Error::Csv {
        path: out.to_path_buf(),
        source,
    }
}

// header: empty cell then column labels; rows: label then 6-decimal values
fn write_labeled_csv(
    row_labels: &[String],
    col_labels: &[String],
    row_values: impl Iterator<Item = Vec<f64>>,
    out: &Path,
) -> Result<()> {
    let mut w = csv_writer();
    let header = std::iter::once("").chain(col_labels.iter().map(String::as_str));
    w.write_record(header).map_err(csv_err(out))?;
    for (label, values) in row_labels.iter().zip(row_values) {
        let record = std::iter::once(label.clone()).chain(values.iter().map(|v| format!("{v:.6}")));
        w.write_record(record).map_err(csv_err(out))?;
    }
    finish_csv(w, out)
}

pub fn write_matrix_csv(m: &SimilarityMatrix, out: &Path) -> Result<()> {
    write_labeled_csv(
        m.row_labels(),
        m.col_labels(),
        (0..m.rows()).map(|r| m.row(r).to_vec()),
        out,
    )
}

/// Documents by areas, in the same layout as [`write_matrix_csv`].
pub fn write_areas_csv(scores: &[AreaScores], out: &Path) -> Result<()> {
    let areas: Vec<String> = scores
        .first()
        .map(|s| s.scores.iter().map(|(a, _)| a.clone()).collect())
        .unwrap_or_default();
    let rows: Vec<String> = scores.iter().map(|s| s.document_id.clone()).collect();
    write_labeled_csv(
        &rows,
        &areas,
        scores
            .iter()
            .map(|s| s.scores.iter().map(|(_, f)| *f).collect()),
        out,
    )
}

/// `term,count,weight` with one row per entry.
pub fn write_terms_csv(tw: &TermWeights, out: &Path) -> Result<()> {
    let mut w = csv_writer();
    w.write_record(["term", "count", "weight"])
        .map_err(csv_err(out))?;
    for e in &tw.entries {
        w.write_record([
            e.term.clone(),
            e.count.to_string(),
            format!("{:.6}", e.weight),
        ])
        .map_err(csv_err(out))?;
    }
    finish_csv(w, out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentSummary {
    pub id: String,
    pub title: String,
    pub sentences: usize,
    pub tokens: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusSummary {
    pub document_count: usize,
    pub documents: Vec<DocumentSummary>,
}

impl CorpusSummary {
    pub fn from_documents(docs: &[Document]) -> Self {
        CorpusSummary {
            document_count: docs.len(),
            documents: docs
                .iter()
                .map(|d| DocumentSummary {
                    id: d.id.clone(),
                    title: d.title.clone(),
                    sentences: d.sentences.len(),
                    tokens: d.tokens.len(),
                })
                .collect(),
        }
    }
}

/// Every setting that influenced the reported numbers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamsEcho {
    pub jaro_winkler: JaroWinklerParams,
    pub doc_aggregation: AggregationPolicy,
    pub alignment_aggregation: AggregationPolicy,
    pub top_n: usize,
    pub seed: u64,
    pub stopwords: String,
    pub lexicon: String,
    pub goals: Option<String>,
    pub tool_version: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportBundle {
    pub corpus_summary: CorpusSummary,
    pub term_weights: Vec<TermWeights>,
    pub area_scores: Vec<AreaScores>,
    pub doc_matrix: SimilarityMatrix,
    pub alignment_matrix: Option<SimilarityMatrix>,
    pub params_echo: ParamsEcho,
}

/// Round to 9 significant digits.
fn sig9(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

#[derive(Serialize)]
struct JsonTerm<'a> {
    term: &'a str,
    count: usize,
    weight: f64,
}

#[derive(Serialize)]
struct JsonTermWeights<'a> {
    document_id: &'a str,
    entries: Vec<JsonTerm<'a>>,
}

#[derive(Serialize)]
struct JsonArea<'a> {
    area: &'a str,
    fraction: f64,
}

#[derive(Serialize)]
struct JsonAreaScores<'a> {
    document_id: &'a str,
    scores: Vec<JsonArea<'a>>,
}

#[derive(Serialize)]
struct JsonMatrix<'a> {
    row_labels: &'a [String],
    col_labels: &'a [String],
    values: Vec<Vec<f64>>,
}

impl<'a> JsonMatrix<'a> {
    fn from(m: &'a SimilarityMatrix) -> Self {
        JsonMatrix {
            row_labels: m.row_labels(),
            col_labels: m.col_labels(),
            values: (0..m.rows())
                .map(|r| m.row(r).iter().map(|v| sig9(*v)).collect())
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct JsonParams<'a> {
    prefix_scale: f64,
    max_prefix: usize,
    doc_aggregation: &'a AggregationPolicy,
    alignment_aggregation: &'a AggregationPolicy,
    top_n: usize,
    seed: u64,
    stopwords: &'a str,
    lexicon: &'a str,
    goals: Option<&'a str>,
    tool_version: &'a str,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    corpus_summary: &'a CorpusSummary,
    term_weights: Vec<JsonTermWeights<'a>>,
    area_scores: Vec<JsonAreaScores<'a>>,
    doc_matrix: JsonMatrix<'a>,
    alignment_matrix: Option<JsonMatrix<'a>>,
    params_echo: JsonParams<'a>,
}

pub fn json_report(bundle: &ReportBundle) -> String {
    let p = &bundle.params_echo;
    let report = JsonReport {
        corpus_summary: &bundle.corpus_summary,
        term_weights: bundle
            .term_weights
            .iter()
            .map(|tw| JsonTermWeights {
                document_id: &tw.document_id,
                entries: tw
                    .entries
                    .iter()
                    .map(|e| JsonTerm {
                        term: &e.term,
                        count: e.count,
                        weight: sig9(e.weight),
                    })
                    .collect(),
            })
            .collect(),
        area_scores: bundle
            .area_scores
            .iter()
            .map(|a| JsonAreaScores {
                document_id: &a.document_id,
                scores: a
                    .scores
                    .iter()
                    .map(|(area, f)| JsonArea {
                        area,
                        fraction: sig9(*f),
                    })
                    .collect(),
            })
            .collect(),
        doc_matrix: JsonMatrix::from(&bundle.doc_matrix),
        alignment_matrix: bundle.alignment_matrix.as_ref().map(JsonMatrix::from),
        params_echo: JsonParams {
            prefix_scale: p.jaro_winkler.prefix_scale(),
            max_prefix: p.jaro_winkler.max_prefix(),
            doc_aggregation: &p.doc_aggregation,
            alignment_aggregation: &p.alignment_aggregation,
            top_n: p.top_n,
            seed: p.seed,
            stopwords: &p.stopwords,
            lexicon: &p.lexicon,
            goals: p.goals.as_deref(),
            tool_version: &p.tool_version,
        },
    };
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    text
}

pub fn write_json_report(bundle: &ReportBundle, out: &Path) -> Result<()> {
    write_bytes(out, json_report(bundle).as_bytes())
}

fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const RAMP_LOW: [f64; 3] = [255.0, 255.0, 255.0];
const RAMP_HIGH: [f64; 3] = [8.0, 48.0, 107.0];

/// Heatmap fill for a value in `[0, 1]`: white at 0, dark blue at 1.
pub fn heat_color(value: f64) -> String {
    let v = value.clamp(0.0, 1.0);
    let c: Vec<u8> = (0..3)
        .map(|i| (RAMP_LOW[i] + (RAMP_HIGH[i] - RAMP_LOW[i]) * v).round() as u8)
        .collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

const CELL: f64 = 28.0;
const LABEL_CHAR: f64 = 7.0;

pub fn heatmap_svg(m: &SimilarityMatrix) -> String {
    let longest = |labels: &[String]| labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
    let left = 12.0 + LABEL_CHAR * longest(m.row_labels()) as f64;
    let top = 12.0 + LABEL_CHAR * longest(m.col_labels()) as f64;
    let width = left + CELL * m.cols() as f64 + 12.0;
    let height = top + CELL * m.rows() as f64 + 12.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    for (r, label) in m.row_labels().iter().enumerate() {
        let y = top + CELL * (r as f64 + 0.5);
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{y:.1}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            left - 6.0,
            xml_escape(label)
        );
    }
    for (c, label) in m.col_labels().iter().enumerate() {
        let x = left + CELL * (c as f64 + 0.5);
        let y = top - 6.0;
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{y:.1}" transform="rotate(-90 {x:.1} {y:.1})" dominant-baseline="middle">{}</text>"#,
            xml_escape(label)
        );
    }
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            let v = m.get(r, c);
            let _ = writeln!(
                s,
                r#"<rect class="cell" x="{:.1}" y="{:.1}" width="{CELL:.1}" height="{CELL:.1}" fill="{}"><title>{} / {}: {v:.6}</title></rect>"#,
                left + CELL * c as f64,
                top + CELL * r as f64,
                heat_color(v),
                xml_escape(&m.row_labels()[r]),
                xml_escape(&m.col_labels()[c]),
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn render_heatmap_svg(m: &SimilarityMatrix, out: &Path) -> Result<()> {
    if m.values().is_empty() {
        return Err(Error::EmptyMatrix);
    }
    write_bytes(out, heatmap_svg(m).as_bytes())
}

/// Canvas and typography of a word cloud.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WordCloudConfig {
    pub width: f64,
    pub height: f64,
    pub min_font: f64,
    pub max_font: f64,
    /// Estimated glyph width as a fraction of the font size.
    pub char_width: f64,
    /// Radius growth per radian of the placement spiral.
    pub spiral_spacing: f64,
    /// Angle increment per placement attempt, radians.
    pub spiral_step: f64,
    pub padding: f64,
}

impl Default for WordCloudConfig {
    fn default() -> Self {
        WordCloudConfig {
            width: 800.0,
            height: 600.0,
            min_font: 12.0,
            max_font: 64.0,
            char_width: 0.6,
            spiral_spacing: 1.5,
            spiral_step: 0.1,
            padding: 2.0,
        }
    }
}

impl WordCloudConfig {
    /// Linear in weight: `min + (max - min) * weight`.
    pub fn font_size(&self, weight: f64) -> f64 {
        self.min_font + (self.max_font - self.min_font) * weight
    }
}

const PALETTE: [&str; 6] = [
    "#08306b", "#2171b5", "#6a51a3", "#238b45", "#d94801", "#a50f15",
];

#[derive(Debug, Clone, Copy)]
struct Rect {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Rect {
    fn overlaps(&self, o: &Rect) -> bool {
        self.x0 < o.x1 && o.x0 < self.x1 && self.y0 < o.y1 && o.y0 < self.y1
    }
}

/// A laid-out word cloud and the terms that did not fit.
#[derive(Debug, Clone, PartialEq)]
pub struct WordCloud {
    pub svg: String,
    pub skipped: Vec<String>,
}

/// Lay terms out largest first along an Archimedean spiral from the canvas
/// center; each term starts the spiral at a seeded random angle and takes the
/// first position whose bounding box stays on the canvas and clears every
/// box placed so far.
pub fn wordcloud_svg(tw: &TermWeights, seed: u64, cfg: &WordCloudConfig) -> WordCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cx, cy) = (cfg.width / 2.0, cfg.height / 2.0);
    let max_radius = cx.hypot(cy);
    let mut placed: Vec<Rect> = Vec::new();
    let mut skipped = Vec::new();

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}" font-family="sans-serif">"#,
        cfg.width, cfg.height, cfg.width, cfg.height
    );
    for entry in &tw.entries {
        let size = cfg.font_size(entry.weight);
        let half_w = cfg.char_width * size * entry.term.chars().count() as f64 / 2.0 + cfg.padding;
        let half_h = size / 2.0 + cfg.padding;
        let phase = rng.gen_range(0.0..TAU);
        let color = PALETTE[rng.gen_range(0..PALETTE.len())];

        let mut theta = 0.0f64;
        let spot = loop {
            let r = cfg.spiral_spacing * theta;
            if r > max_radius {
                break None;
            }
            let x = cx + r * (theta + phase).cos();
            let y = cy + r * (theta + phase).sin();
            let b = Rect {
                x0: x - half_w,
                y0: y - half_h,
                x1: x + half_w,
                y1: y + half_h,
            };
            let on_canvas = b.x0 >= 0.0 && b.y0 >= 0.0 && b.x1 <= cfg.width && b.y1 <= cfg.height;
            if on_canvas && !placed.iter().any(|p| p.overlaps(&b)) {
                break Some((x, y, b));
            }
            theta += cfg.spiral_step;
        };
        match spot {
            Some((x, y, b)) => {
                placed.push(b);
                let _ = writeln!(
                    s,
                    r#"<text x="{x:.2}" y="{y:.2}" font-size="{size:.2}" fill="{color}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
                    xml_escape(&entry.term)
                );
            }
            None => skipped.push(entry.term.clone()),
        }
    }
    s.push_str("</svg>\n");
    WordCloud { svg: s, skipped }
}

/// Write a word cloud; returns the terms that could not be placed.
pub fn render_wordcloud_svg(tw: &TermWeights, out: &Path, seed: u64) -> Result<Vec<String>> {
    if tw.entries.is_empty() {
        return Err(Error::EmptyTerms);
    }
    let cloud = wordcloud_svg(tw, seed, &WordCloudConfig::default());
    if !cloud.skipped.is_empty() {
        log::warn!(
            "{}: {} term(s) did not fit: {}",
            tw.document_id,
            cloud.skipped.len(),
            cloud.skipped.join(", ")
        );
    }
    write_bytes(out, cloud.svg.as_bytes())?;
    Ok(cloud.skipped)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::TermEntry;

    fn labels(ls: &[&str]) -> Vec<String> {
        ls.iter().map(|s| s.to_string()).collect()
    }

    fn terms(entries: &[(&str, f64)]) -> TermWeights {
        TermWeights {
            document_id: "d".into(),
            entries: entries
                .iter()
                .map(|(t, w)| TermEntry {
                    term: t.to_string(),
                    count: 1,
                    weight: *w,
                })
                .collect(),
        }
    }

    #[test]
    fn matrix_csv_format() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("m.csv");
        let m = SimilarityMatrix::new(
            labels(&["a", "b"]),
            labels(&["a", "b"]),
            vec![1.0, 0.0, 0.0, 1.0],
        )
        .unwrap();
        write_matrix_csv(&m, &out).unwrap();
        assert_eq!(
            fs::read_to_string(&out).unwrap(),
            ",a,b\na,1.000000,0.000000\nb,0.000000,1.000000\n"
        );
    }

    #[test]
    fn terms_csv_format() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("t.csv");
        write_terms_csv(&terms(&[("salud", 1.0), ("programa", 0.5)]), &out).unwrap();
        assert_eq!(
            fs::read_to_string(&out).unwrap(),
            "term,count,weight\nsalud,1,1.000000\nprograma,1,0.500000\n"
        );
    }

    #[test]
    fn unwritable_path_is_an_error() {
        let m = SimilarityMatrix::new(labels(&["a"]), labels(&["a"]), vec![1.0]).unwrap();
        let err = write_matrix_csv(&m, Path::new("/nonexistent-dir/x/m.csv")).unwrap_err();
        assert!(err.to_string().contains("nonexistent-dir"));
    }

    #[test]
    fn sig9_rounding() {
        assert_eq!(sig9(17.0 / 18.0), 0.944444444);
        assert_eq!(sig9(1.0), 1.0);
        assert_eq!(sig9(0.0), 0.0);
        assert_eq!(sig9(0.1), 0.1);
    }

    #[test]
    fn heat_ramp_endpoints() {
        assert_eq!(heat_color(0.0), "#ffffff");
        assert_eq!(heat_color(1.0), "#08306b");
    }

    #[test]
    fn single_cell_heatmap() {
        let m = SimilarityMatrix::new(labels(&["a"]), labels(&["a"]), vec![1.0]).unwrap();
        let svg = heatmap_svg(&m);
        assert_eq!(svg.matches("<rect").count(), 1);
        assert!(svg.contains(r##"fill="#08306b""##));
        assert!(svg.contains("<title>a / a: 1.000000</title>"));
    }

    #[test]
    fn heatmap_escapes_labels() {
        let m = SimilarityMatrix::new(labels(&["a&b"]), labels(&["<g>"]), vec![0.5]).unwrap();
        let svg = heatmap_svg(&m);
        assert!(svg.contains("a&amp;b") && svg.contains("&lt;g&gt;"));
    }

    #[test]
    fn single_term_sits_at_center_with_max_font() {
        let cfg = WordCloudConfig::default();
        let cloud = wordcloud_svg(&terms(&[("salud", 1.0)]), 7, &cfg);
        assert!(cloud.skipped.is_empty());
        assert_eq!(cloud.svg.matches("<text").count(), 1);
        assert!(cloud
            .svg
            .contains(r#"x="400.00" y="300.00" font-size="64.00""#));
    }

    #[test]
    fn font_size_is_linear_in_weight() {
        let cfg = WordCloudConfig::default();
        let cloud = wordcloud_svg(&terms(&[("salud", 1.0), ("programa", 0.5)]), 42, &cfg);
        assert!(cloud.svg.contains(r#"font-size="64.00""#));
        let mid = cfg.min_font + (cfg.max_font - cfg.min_font) * 0.5;
        assert!(cloud.svg.contains(&format!(r#"font-size="{mid:.2}""#)));
    }

    #[test]
    fn oversized_terms_are_skipped() {
        let cfg = WordCloudConfig {
            width: 100.0,
            height: 40.0,
            ..WordCloudConfig::default()
        };
        let cloud = wordcloud_svg(&terms(&[("desnutricion", 1.0), ("ok", 0.0)]), 1, &cfg);
        assert_eq!(cloud.skipped, ["desnutricion"]);
        assert_eq!(cloud.svg.matches("<text").count(), 1);
    }

    #[test]
    fn seeded_layout_is_reproducible() {
        let tw = terms(&[
            ("a", 1.0),
            ("bb", 0.8),
            ("ccc", 0.6),
            ("dddd", 0.4),
            ("eeeee", 0.2),
        ]);
        let cfg = WordCloudConfig::default();
        assert_eq!(wordcloud_svg(&tw, 3, &cfg), wordcloud_svg(&tw, 3, &cfg));
        assert_ne!(
            wordcloud_svg(&tw, 3, &cfg).svg,
            wordcloud_svg(&tw, 4, &cfg).svg
        );
    }
}
