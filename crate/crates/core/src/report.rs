//! Glue surveys and the serialized report formats used by the command-line
//! tool.
//!
//! JSON output is wrapped in [`Envelope`], which carries a schema version.
//! Everything placed in a report is a pure function of the inputs, so the
//! same configuration always renders to the same bytes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::glue::{
    d6xd6_symmetries, enumerate_glue_groups, glued_generator, is_product_group, symmetry_classes, GlueGroup,
    GlueWords,
};
use crate::nsm::{estimate_nsm, NsmEstimate};
use crate::rng::derive_seed;

pub const SCHEMA_VERSION: u32 = 1;

/// Top-level JSON document.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope<T: Serialize> {
    pub schema_version: u32,
    pub command: String,
    pub result: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: impl Into<String>, result: T) -> Self {
        Envelope { schema_version: SCHEMA_VERSION, command: command.into(), result }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::InvalidArgument(e.to_string()))
    }
}

/// Bases a survey can run on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SurveyBase {
    E6xE6,
    D6xD6,
}

impl SurveyBase {
    pub fn parse(name: &str) -> Result<Self> {
        match name {
            "E6xE6" => Ok(SurveyBase::E6xE6),
            "D6xD6" => Ok(SurveyBase::D6xD6),
            other => Err(Error::UnknownLattice(format!("no glue survey for `{other}`"))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SurveyBase::E6xE6 => "E6xE6",
            SurveyBase::D6xD6 => "D6xD6",
        }
    }

    fn components(self) -> [&'static str; 2] {
        match self {
            SurveyBase::E6xE6 => ["E6", "E6"],
            SurveyBase::D6xD6 => ["D6", "D6"],
        }
    }
}

/// Group counts at each stage of the selection pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurveyCounts {
    pub groups: usize,
    pub inequivalent: usize,
    pub nonproduct: usize,
}

/// The groups a survey reports on, before any sampling.
#[derive(Debug, Clone)]
pub struct SurveySelection {
    pub base: SurveyBase,
    pub counts: SurveyCounts,
    pub groups: Vec<GlueGroup>,
}

/// Enumerates the glue groups of `base` and applies the selection rules.
///
/// For `D6xD6` the groups are reduced by the coordinate swap and the two
/// per-factor exchanges `g1 ↔ g3`, and product groups are dropped. For
/// `E6xE6` every group is kept.
pub fn select_groups(base: SurveyBase) -> Result<SurveySelection> {
    let words = GlueWords::from_catalog(&base.components())?;
    let all = enumerate_glue_groups(&words);
    match base {
        SurveyBase::E6xE6 => Ok(SurveySelection {
            base,
            counts: SurveyCounts { groups: all.len(), inequivalent: all.len(), nonproduct: all.len() },
            groups: all,
        }),
        SurveyBase::D6xD6 => {
            let classes = symmetry_classes(&all, &d6xd6_symmetries(&words)?)?;
            let inequivalent = classes.len();
            let groups: Vec<GlueGroup> =
                classes.into_iter().map(|c| c.representative).filter(|g| !is_product_group(g)).collect();
            Ok(SurveySelection {
                base,
                counts: SurveyCounts { groups: all.len(), inequivalent, nonproduct: groups.len() },
                groups,
            })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyRow {
    pub id: usize,
    pub glue_words: String,
    pub order: usize,
    pub product: bool,
    pub det_gram: f64,
    pub seed: u64,
    pub estimate: NsmEstimate,
}

#[derive(Debug, Clone, Serialize)]
pub struct SurveyReport {
    pub base: SurveyBase,
    pub counts: SurveyCounts,
    pub samples: u64,
    pub seed: u64,
    pub streams: u64,
    pub rows: Vec<SurveyRow>,
}

impl SurveyReport {
    /// Row with the smallest estimate.
    pub fn best(&self) -> Option<&SurveyRow> {
        self.rows.iter().min_by(|a, b| a.estimate.g_hat.total_cmp(&b.estimate.g_hat))
    }
}

/// Estimates the NSM of every selected lattice. Row `k` uses the seed
/// `derive_seed(seed, k)`, which is recorded so rows can be rerun alone.
pub fn glue_survey(base: SurveyBase, samples: u64, seed: u64, streams: u64) -> Result<SurveyReport> {
    let selection = select_groups(base)?;
    let mut rows = Vec::with_capacity(selection.groups.len());
    for (id, group) in selection.groups.iter().enumerate() {
        let glued = glued_generator(group)?;
        glued.verify()?;
        let row_seed = derive_seed(seed, id as u64);
        let estimate = estimate_nsm(&glued.result, samples, row_seed, streams)?;
        rows.push(SurveyRow {
            id,
            glue_words: group.display_labels(),
            order: group.order(),
            product: is_product_group(group),
            det_gram: glued.result.det_gram(),
            seed: row_seed,
            estimate,
        });
    }
    Ok(SurveyReport { base, counts: selection.counts, samples, seed, streams, rows })
}

/// Quotes a CSV field when needed.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn survey_csv(report: &SurveyReport) -> String {
    let mut out = String::from("group_id,glue_words,order,product,seed,g_hat,two_sigma\n");
    for r in &report.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{:.9},{:.9}\n",
            r.id,
            csv_field(&r.glue_words),
            r.order,
            r.product,
            r.seed,
            r.estimate.g_hat,
            2.0 * r.estimate.sigma_hat
        ));
    }
    out
}

pub fn survey_text(report: &SurveyReport) -> String {
    let c = &report.counts;
    let mut out = format!(
        "{} glue survey: {} groups, {} inequivalent, {} nonproduct; {} samples per row\n",
        report.base.name(),
        c.groups,
        c.inequivalent,
        c.nonproduct,
        report.samples
    );
    let width = report.rows.iter().map(|r| r.glue_words.chars().count()).max().unwrap_or(0);
    for r in &report.rows {
        let pad = width - r.glue_words.chars().count();
        out.push_str(&format!(
            "{:>3}  {}{}  {}{}\n",
            r.id,
            r.glue_words,
            " ".repeat(pad),
            r.estimate.display(),
            if r.product { "  (product)" } else { "" }
        ));
    }
    out
}

pub fn nsm_csv(est: &NsmEstimate) -> String {
    format!(
        "lattice,samples,seed,streams,g_hat,two_sigma\n{},{},{},{},{:.12},{:.12}\n",
        csv_field(&est.lattice_id),
        est.samples,
        est.seed,
        est.streams,
        est.g_hat,
        2.0 * est.sigma_hat
    )
}
