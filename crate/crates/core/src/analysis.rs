//! Failure-factor diagnostics: the 18-feature extraction, failure rates,
//! Z-scores, impact matrix, Fisher's exact test, and report export.

use crate::corpus::{GenerationRecord, Problem};
use crate::langkit::{self, LanguageId};
use crate::quality;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("need at least 2 samples, got {0}")]
    InsufficientData(usize),
    #[error("io error writing reports: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

pub const FEATURE_NAMES: [&str; 18] = [
    "func_name_change",
    "docstring_change",
    "code_change",
    "prompt_change",
    "comment_percentage_p_prompt",
    "scope_delimiter_count",
    "generated_code_change",
    "nominal_code_change",
    "perturbed_code_change",
    "nominal_LOC",
    "perturbed_LOC",
    "reference_LOC",
    "nominal_tokens",
    "perturbed_tokens",
    "reference_tokens",
    "nominal_complexity",
    "perturbed_complexity",
    "reference_complexity",
];

/// The 18 features of one (nominal, perturbed) sample pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub func_name_change: f64,
    pub docstring_change: f64,
    pub code_change: f64,
    pub prompt_change: f64,
    pub comment_percentage_p_prompt: f64,
    pub scope_delimiter_count: f64,
    pub generated_code_change: f64,
    pub nominal_code_change: f64,
    pub perturbed_code_change: f64,
    pub nominal_loc: f64,
    pub perturbed_loc: f64,
    pub reference_loc: f64,
    pub nominal_tokens: f64,
    pub perturbed_tokens: f64,
    pub reference_tokens: f64,
    pub nominal_complexity: f64,
    pub perturbed_complexity: f64,
    pub reference_complexity: f64,
}

impl FeatureVector {
    pub fn as_array(&self) -> [f64; 18] {
        [
            self.func_name_change,
            self.docstring_change,
            self.code_change,
            self.prompt_change,
            self.comment_percentage_p_prompt,
            self.scope_delimiter_count,
            self.generated_code_change,
            self.nominal_code_change,
            self.perturbed_code_change,
            self.nominal_loc,
            self.perturbed_loc,
            self.reference_loc,
            self.nominal_tokens,
            self.perturbed_tokens,
            self.reference_tokens,
            self.nominal_complexity,
            self.perturbed_complexity,
            self.reference_complexity,
        ]
    }
}

fn dissimilarity(a: &str, b: &str, language: LanguageId) -> f64 {
    let ta = langkit::tokenize(a, language);
    let tb = langkit::tokenize(b, language);
    let ta: Vec<&str> = ta.iter().map(|t| t.text.as_str()).collect();
    let tb: Vec<&str> = tb.iter().map(|t| t.text.as_str()).collect();
    quality::token_dissimilarity(&ta, &tb)
}

/// Texts describing the prompts behind a sample pair, split so the
/// input-perturbation features can compare like with like.
#[derive(Debug, Clone)]
pub struct PromptPair {
    pub nominal_text: String,
    pub perturbed_text: String,
    pub nominal_docstring: String,
    pub perturbed_docstring: String,
    pub nominal_func_name: String,
    pub perturbed_func_name: String,
}

impl PromptPair {
    /// Build from prompt texts, decomposing to find docstrings and names.
    pub fn from_texts(
        nominal_text: &str,
        perturbed_text: &str,
        language: LanguageId,
        entry_point: &str,
        rename: Option<&(String, String)>,
    ) -> PromptPair {
        let doc_of = |text: &str, entry: &str| -> String {
            langkit::decompose_prompt(text, language, Some(entry))
                .map(|p| p.doc.nl_text())
                .unwrap_or_default()
        };
        let perturbed_name = rename
            .map(|(_, new)| new.clone())
            .unwrap_or_else(|| entry_point.to_string());
        PromptPair {
            nominal_text: nominal_text.to_string(),
            perturbed_text: perturbed_text.to_string(),
            nominal_docstring: doc_of(nominal_text, entry_point),
            perturbed_docstring: doc_of(perturbed_text, &perturbed_name),
            nominal_func_name: entry_point.to_string(),
            perturbed_func_name: perturbed_name,
        }
    }

    fn code_part(text: &str, doc: &str) -> String {
        // Code parts = prompt minus its docstring text.
        match text.find(doc) {
            Some(pos) if !doc.is_empty() => {
                let mut out = text[..pos].to_string();
                out.push_str(&text[pos + doc.len()..]);
                out
            }
            _ => text.to_string(),
        }
    }
}

/// Extract the 18 features for one sample pair.
pub fn extract_features(
    nominal: &GenerationRecord,
    perturbed: &GenerationRecord,
    problem: &Problem,
    prompts: &PromptPair,
) -> FeatureVector {
    assert_eq!(nominal.problem_id, perturbed.problem_id);
    let language = problem.language;

    let nominal_code_parts = PromptPair::code_part(&prompts.nominal_text, &prompts.nominal_docstring);
    let perturbed_code_parts =
        PromptPair::code_part(&prompts.perturbed_text, &prompts.perturbed_docstring);

    let perturbed_prompt_metrics = langkit::structural_metrics(&prompts.perturbed_text, language);
    let nominal_gen = langkit::structural_metrics(&nominal.cleaned_code, language);
    let perturbed_gen = langkit::structural_metrics(&perturbed.cleaned_code, language);
    let reference = langkit::structural_metrics(&problem.canonical_solution, language);

    FeatureVector {
        func_name_change: dissimilarity(
            &prompts.nominal_func_name,
            &prompts.perturbed_func_name,
            language,
        ),
        docstring_change: dissimilarity(
            &prompts.nominal_docstring,
            &prompts.perturbed_docstring,
            language,
        ),
        code_change: dissimilarity(&nominal_code_parts, &perturbed_code_parts, language),
        prompt_change: dissimilarity(&prompts.nominal_text, &prompts.perturbed_text, language),
        comment_percentage_p_prompt: perturbed_prompt_metrics.comment_token_ratio,
        scope_delimiter_count: perturbed_prompt_metrics.scope_delimiters as f64,
        generated_code_change: dissimilarity(
            &nominal.cleaned_code,
            &perturbed.cleaned_code,
            language,
        ),
        nominal_code_change: dissimilarity(
            &problem.canonical_solution,
            &nominal.cleaned_code,
            language,
        ),
        perturbed_code_change: dissimilarity(
            &problem.canonical_solution,
            &perturbed.cleaned_code,
            language,
        ),
        nominal_loc: nominal_gen.loc as f64,
        perturbed_loc: perturbed_gen.loc as f64,
        reference_loc: reference.loc as f64,
        nominal_tokens: nominal_gen.tokens as f64,
        perturbed_tokens: perturbed_gen.tokens as f64,
        reference_tokens: reference.tokens as f64,
        nominal_complexity: nominal_gen.cyclomatic as f64,
        perturbed_complexity: perturbed_gen.cyclomatic as f64,
        reference_complexity: reference.cyclomatic as f64,
    }
}

/// One labeled sample for the impact computation: true = the perturbed
/// generation failed.
#[derive(Debug, Clone, Copy)]
pub struct LabeledSample {
    pub features: FeatureVector,
    pub failed: bool,
}

/// FR = failed / total over samples that passed nominally. Zero (flagged)
/// when the scoped set is empty.
pub fn failure_rate(samples: &[LabeledSample]) -> (f64, bool) {
    if samples.is_empty() {
        return (0.0, true);
    }
    let failed = samples.iter().filter(|s| s.failed).count();
    (failed as f64 / samples.len() as f64, false)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpactCell {
    pub z: f64,
    pub impact: f64,
    /// σ = 0: the feature is constant across samples, Z defined as 0.
    pub constant_feature: bool,
}

/// Z_F = (mean_fail(F) − mean_all(F)) / σ_all(F); I_F = Z_F × FR.
/// σ is the population standard deviation over all samples.
pub fn impact_scores(
    samples: &[LabeledSample],
    failure_rate: f64,
) -> Result<BTreeMap<String, ImpactCell>, AnalysisError> {
    if samples.len() < 2 {
        return Err(AnalysisError::InsufficientData(samples.len()));
    }
    let n = samples.len() as f64;
    let mut out = BTreeMap::new();
    for (idx, name) in FEATURE_NAMES.iter().enumerate() {
        let values: Vec<f64> = samples.iter().map(|s| s.features.as_array()[idx]).collect();
        let mean_all = values.iter().sum::<f64>() / n;
        let variance = values.iter().map(|v| (v - mean_all).powi(2)).sum::<f64>() / n;
        let sigma = variance.sqrt();

        let failed: Vec<f64> = samples
            .iter()
            .filter(|s| s.failed)
            .map(|s| s.features.as_array()[idx])
            .collect();
        let (z, constant) = if sigma == 0.0 || failed.is_empty() {
            (0.0, sigma == 0.0)
        } else {
            let mean_fail = failed.iter().sum::<f64>() / failed.len() as f64;
            ((mean_fail - mean_all) / sigma, false)
        };
        out.insert(
            name.to_string(),
            ImpactCell {
                z,
                impact: z * failure_rate,
                constant_feature: constant,
            },
        );
    }
    Ok(out)
}

/// Languages × features grid of impact scores.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct ImpactMatrix {
    pub cells: BTreeMap<LanguageId, BTreeMap<String, ImpactCell>>,
    pub failure_rates: BTreeMap<LanguageId, f64>,
}

impl ImpactMatrix {
    pub fn insert_language(
        &mut self,
        language: LanguageId,
        fr: f64,
        cells: BTreeMap<String, ImpactCell>,
    ) {
        self.failure_rates.insert(language, fr);
        self.cells.insert(language, cells);
    }
}

// ---------------------------------------------------------------------
// Fisher's exact test
// ---------------------------------------------------------------------

/// Two-sided Fisher's exact test on a 2×2 table
/// `[[a, b], [c, d]]`: sums the probabilities of all tables with the
/// observed margins whose probability does not exceed the observed
/// table's.
pub fn fisher_exact(table: [[u64; 2]; 2]) -> f64 {
    let [[a, b], [c, d]] = table;
    let row1 = a + b;
    let row2 = c + d;
    let col1 = a + c;
    let n = row1 + row2;
    if n == 0 {
        return 1.0;
    }
    // P(a) = C(row1, a) * C(row2, col1 - a) / C(n, col1)
    let ln_p = |x: u64| -> Option<f64> {
        if x > row1 || col1 < x || (col1 - x) > row2 {
            return None;
        }
        Some(ln_choose(row1, x) + ln_choose(row2, col1 - x) - ln_choose(n, col1))
    };
    let observed = match ln_p(a) {
        Some(p) => p,
        None => return 1.0,
    };
    let mut total = 0.0f64;
    let lo = col1.saturating_sub(row2);
    let hi = col1.min(row1);
    for x in lo..=hi {
        if let Some(lp) = ln_p(x) {
            // Tolerance absorbs float noise between equal-probability tails.
            if lp <= observed + 1e-7 {
                total += lp.exp();
            }
        }
    }
    total.min(1.0)
}

fn ln_choose(n: u64, k: u64) -> f64 {
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

fn ln_factorial(n: u64) -> f64 {
    (2..=n).map(|i| (i as f64).ln()).sum()
}

// ---------------------------------------------------------------------
// Report export
// ---------------------------------------------------------------------

/// Write the impact matrix as CSV
/// (`language, feature, z, failure_rate, impact`).
pub fn write_impact_csv(matrix: &ImpactMatrix, path: &Path) -> Result<(), AnalysisError> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["language", "feature", "z", "failure_rate", "impact"])?;
    for (language, cells) in &matrix.cells {
        let fr = matrix.failure_rates.get(language).copied().unwrap_or(0.0);
        for feature in FEATURE_NAMES {
            if let Some(cell) = cells.get(feature) {
                writer.write_record([
                    language.as_str(),
                    feature,
                    &format!("{:.12}", cell.z),
                    &format!("{:.12}", fr),
                    &format!("{:.12}", cell.impact),
                ])?;
            }
        }
    }
    writer.flush()?;
    Ok(())
}

/// Impact scores are clipped to ±0.2 on a blue-white-red diverging scale
/// centered at zero.
const HEATMAP_CLIP: f64 = 0.2;

fn heatmap_color(value: f64) -> String {
    let t = (value / HEATMAP_CLIP).clamp(-1.0, 1.0);
    let (r, g, b) = if t >= 0.0 {
        // white → red
        let f = t;
        (255.0, 255.0 * (1.0 - f), 255.0 * (1.0 - f))
    } else {
        // white → blue
        let f = -t;
        (255.0 * (1.0 - f), 255.0 * (1.0 - f), 255.0)
    };
    format!("rgb({},{},{})", r.round() as u8, g.round() as u8, b.round() as u8)
}

/// Render the languages × features impact grid as a self-contained SVG
/// (inline styles, no scripts).
pub fn render_heatmap_svg(matrix: &ImpactMatrix, title: &str) -> String {
    const CELL_W: usize = 64;
    const CELL_H: usize = 28;
    const LEFT: usize = 110;
    const TOP: usize = 150;
    let languages: Vec<LanguageId> = matrix.cells.keys().copied().collect();
    let width = LEFT + FEATURE_NAMES.len() * CELL_W + 20;
    let height = TOP + languages.len().max(1) * CELL_H + 30;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    svg.push_str(&format!(
        "  <text x=\"{LEFT}\" y=\"24\" style=\"font:16px sans-serif\">{}</text>\n",
        xml_escape(title)
    ));
    for (i, feature) in FEATURE_NAMES.iter().enumerate() {
        let x = LEFT + i * CELL_W + CELL_W / 2;
        svg.push_str(&format!(
            "  <text x=\"{x}\" y=\"{}\" style=\"font:10px sans-serif\" transform=\"rotate(-60 {x} {})\">{}</text>\n",
            TOP - 8,
            TOP - 8,
            xml_escape(feature)
        ));
    }
    for (row, language) in languages.iter().enumerate() {
        let y = TOP + row * CELL_H;
        svg.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" style=\"font:12px sans-serif\">{}</text>\n",
            8,
            y + CELL_H / 2 + 4,
            language.as_str()
        ));
        let cells = &matrix.cells[language];
        for (col, feature) in FEATURE_NAMES.iter().enumerate() {
            let x = LEFT + col * CELL_W;
            let cell = cells.get(*feature);
            let value = cell.map(|c| c.impact).unwrap_or(0.0);
            svg.push_str(&format!(
                "  <rect x=\"{x}\" y=\"{y}\" width=\"{CELL_W}\" height=\"{CELL_H}\" fill=\"{}\" stroke=\"#888\"/>\n",
                heatmap_color(value)
            ));
            svg.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" style=\"font:9px sans-serif\" text-anchor=\"middle\">{:.2}</text>\n",
                x + CELL_W / 2,
                y + CELL_H / 2 + 3,
                value
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Write CSV, JSON, and one SVG heatmap per perturbation family.
pub fn export_reports(
    impact_by_family: &BTreeMap<String, ImpactMatrix>,
    destination: &Path,
) -> Result<Vec<std::path::PathBuf>, AnalysisError> {
    std::fs::create_dir_all(destination)?;
    let mut written = Vec::new();
    for (family, matrix) in impact_by_family {
        let csv_path = destination.join(format!("impact_{family}.csv"));
        write_impact_csv(matrix, &csv_path)?;
        written.push(csv_path);

        let json_path = destination.join(format!("impact_{family}.json"));
        let mut file = std::fs::File::create(&json_path)?;
        file.write_all(serde_json::to_string_pretty(matrix).expect("serializes").as_bytes())?;
        written.push(json_path);

        let svg_path = destination.join(format!("heatmap_{family}.svg"));
        std::fs::write(&svg_path, render_heatmap_svg(matrix, family))?;
        written.push(svg_path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_features(fill: f64) -> FeatureVector {
        FeatureVector {
            func_name_change: fill,
            docstring_change: fill,
            code_change: fill,
            prompt_change: fill,
            comment_percentage_p_prompt: fill,
            scope_delimiter_count: fill,
            generated_code_change: fill,
            nominal_code_change: fill,
            perturbed_code_change: fill,
            nominal_loc: fill,
            perturbed_loc: fill,
            reference_loc: fill,
            nominal_tokens: fill,
            perturbed_tokens: fill,
            reference_tokens: fill,
            nominal_complexity: fill,
            perturbed_complexity: fill,
            reference_complexity: fill,
        }
    }

    #[test]
    fn failure_rate_basics() {
        let mk = |failed| LabeledSample {
            features: constant_features(0.0),
            failed,
        };
        let samples: Vec<LabeledSample> = (0..100).map(|i| mk(i < 30)).collect();
        let (fr, flagged) = failure_rate(&samples);
        assert!((fr - 0.3).abs() < 1e-12);
        assert!(!flagged);
        let (fr, flagged) = failure_rate(&[]);
        assert_eq!(fr, 0.0);
        assert!(flagged);
    }

    #[test]
    fn impact_is_z_times_fr() {
        // Z = 0.3 with FR = 0.5 must give I = 0.15 exactly.
        let cell = ImpactCell {
            z: 0.3,
            impact: 0.3 * 0.5,
            constant_feature: false,
        };
        assert!((cell.impact - 0.15).abs() < 1e-15);
    }

    #[test]
    fn constant_feature_has_zero_impact() {
        let samples: Vec<LabeledSample> = (0..10)
            .map(|i| LabeledSample {
                features: constant_features(7.0),
                failed: i % 2 == 0,
            })
            .collect();
        let scores = impact_scores(&samples, 0.5).unwrap();
        for (_, cell) in scores {
            assert_eq!(cell.z, 0.0);
            assert_eq!(cell.impact, 0.0);
            assert!(cell.constant_feature);
        }
    }

    #[test]
    fn insufficient_data_is_an_error() {
        let samples = [LabeledSample {
            features: constant_features(1.0),
            failed: false,
        }];
        assert!(matches!(
            impact_scores(&samples, 0.0),
            Err(AnalysisError::InsufficientData(1))
        ));
    }

    #[test]
    fn fisher_degenerate_table_is_one() {
        assert_eq!(fisher_exact([[0, 0], [0, 0]]), 1.0);
    }

    #[test]
    fn fisher_reference_value() {
        let p = fisher_exact([[1, 9], [11, 3]]);
        assert!((p - 0.00276).abs() < 5e-5, "{p}");
    }

    #[test]
    fn fisher_identical_rows_is_one() {
        let p = fisher_exact([[5, 5], [5, 5]]);
        assert!((p - 1.0).abs() < 1e-9, "{p}");
    }

    #[test]
    fn heatmap_colors_diverge() {
        assert_eq!(heatmap_color(0.0), "rgb(255,255,255)");
        assert_eq!(heatmap_color(0.2), "rgb(255,0,0)");
        assert_eq!(heatmap_color(-0.2), "rgb(0,0,255)");
        assert_eq!(heatmap_color(10.0), "rgb(255,0,0)"); // clipped
    }

    #[test]
    fn empty_impact_matrix_renders_valid_svg() {
        let svg = render_heatmap_svg(&ImpactMatrix::default(), "empty");
        assert!(svg.starts_with("<svg"));
        assert!(svg.ends_with("</svg>\n"));
    }

    #[test]
    fn dimensional_svg_has_language_rows() {
        let mut matrix = ImpactMatrix::default();
        for lang in LanguageId::ALL {
            let cells: BTreeMap<String, ImpactCell> = FEATURE_NAMES
                .iter()
                .map(|f| {
                    (
                        f.to_string(),
                        ImpactCell {
                            z: 0.1,
                            impact: 0.05,
                            constant_feature: false,
                        },
                    )
                })
                .collect();
            matrix.insert_language(lang, 0.5, cells);
        }
        let svg = render_heatmap_svg(&matrix, "all");
        assert_eq!(svg.matches("<rect").count(), 3 * 18);
    }
}
