//! JSON interchange for sampled diagrams.

use bulletlab_core::model::label_mismatches;
use bulletlab_core::{
    extract_stats, validate_configuration, ConfigStats, Configuration, Error, InitialLaw, Parameter, Point, Rectangle,
    Segment,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const DIAGRAM_SCHEMA: &str = "bulletlab.diagram/1";

/// A configuration with the model and law it was drawn from. Coordinates
/// are written in shortest round-trip decimal form, so decoding restores
/// every bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct DiagramDocument {
    pub schema: String,
    pub params: Parameter,
    pub law: InitialLaw,
    pub rect: Rectangle,
    pub seed: u64,
    pub segments: Vec<Segment>,
    pub crossings: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<ConfigStats>,
}

impl DiagramDocument {
    pub fn new(u: &Configuration, params: Parameter, law: InitialLaw, seed: u64, with_stats: bool) -> CliResult<Self> {
        let u = Configuration::new(u.rect, u.segments.clone(), u.crossings.clone());
        let stats = if with_stats { Some(extract_stats(&u)?) } else { None };
        Ok(DiagramDocument {
            schema: DIAGRAM_SCHEMA.to_owned(),
            params,
            law,
            rect: u.rect,
            seed,
            segments: u.segments,
            crossings: u.crossings,
            stats,
        })
    }

    pub fn configuration(&self) -> Configuration {
        Configuration::new(self.rect, self.segments.clone(), self.crossings.clone())
    }
}

pub fn encode_diagram(doc: &DiagramDocument) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

/// Parses and checks a document: schema, parameters, law, geometry,
/// stored point kinds and, when present, stored statistics.
pub fn decode_diagram(bytes: &[u8]) -> CliResult<DiagramDocument> {
    let doc: DiagramDocument = serde_json::from_slice(bytes)?;
    if doc.schema != DIAGRAM_SCHEMA {
        return Err(CliError::Schema { found: doc.schema, expected: DIAGRAM_SCHEMA });
    }
    doc.params.validate()?;
    doc.law.validate(&doc.rect)?;
    let u = doc.configuration();
    let violations = validate_configuration(&u);
    if !violations.is_empty() {
        return Err(Error::InvalidConfiguration(violations).into());
    }
    let mismatches = label_mismatches(&u)?;
    if let Some(first) = mismatches.first() {
        return Err(CliError::Labels(format!("{} mismatches, first {first:?}", mismatches.len())));
    }
    if let Some(stored) = &doc.stats {
        if *stored != extract_stats(&u)? {
            return Err(CliError::Labels("stored stats differ from recomputed ones".into()));
        }
    }
    Ok(doc)
}
