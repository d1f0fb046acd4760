//! The `gqs-1` spline document: a small JSON object with a version tag,
//! knots, β values, B-coefficients and free-form string metadata.
//!
//! Numbers are written with 17 significant digits, so parsing and writing
//! again reproduces the text byte for byte.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use gqs::{BetaSequence, GqsError, GqsSpace, GqsSpline, Partition};
use serde_json::Value;
use thiserror::Error;

pub const VERSION: &str = "gqs-1";

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("document is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported document version {0:?}, expected {VERSION:?}")]
    Version(String),
    #[error("field `{0}` is missing or has the wrong type")]
    Field(&'static str),
    #[error("`{field}[{index}]` is not a number")]
    NotNumber { field: &'static str, index: usize },
    #[error("invalid spline geometry: {0}")]
    Geometry(#[from] GqsError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplineDocument {
    pub knots: Vec<f64>,
    pub betas: Vec<f64>,
    pub coeffs: Vec<f64>,
    pub meta: BTreeMap<String, String>,
}

impl SplineDocument {
    pub fn from_spline(spline: &GqsSpline, meta: BTreeMap<String, String>) -> Self {
        Self {
            knots: spline.space().knots().to_vec(),
            betas: spline.space().betas().as_slice().to_vec(),
            coeffs: spline.coeffs().to_vec(),
            meta,
        }
    }

    /// Rebuilds the spline, re-validating partition, β range and lengths.
    pub fn to_spline(&self) -> Result<GqsSpline, GqsError> {
        let partition = Partition::new(self.knots.clone())?;
        let space = GqsSpace::new(partition, BetaSequence::new(self.betas.clone())?)?;
        GqsSpline::new(space, self.coeffs.clone())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("{\n");
        let _ = writeln!(out, "  \"version\": \"{VERSION}\",");
        for (name, values) in [("knots", &self.knots), ("betas", &self.betas), ("coeffs", &self.coeffs)] {
            let items: Vec<String> = values.iter().map(|v| format_number(*v)).collect();
            let _ = writeln!(out, "  \"{name}\": [{}],", items.join(", "));
        }
        out.push_str("  \"meta\": {");
        let entries: Vec<String> = self
            .meta
            .iter()
            .map(|(k, v)| format!("\n    {}: {}", quote(k), quote(v)))
            .collect();
        out.push_str(&entries.join(","));
        if !entries.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("}\n}\n");
        out
    }

    /// Parses and validates a document; the geometry must form a valid
    /// spline.
    pub fn parse(text: &str) -> Result<Self, DocumentError> {
        let root: Value = serde_json::from_str(text)?;
        let version = root.get("version").and_then(Value::as_str).ok_or(DocumentError::Field("version"))?;
        if version != VERSION {
            return Err(DocumentError::Version(version.to_owned()));
        }
        let numbers = |field: &'static str| -> Result<Vec<f64>, DocumentError> {
            root.get(field)
                .and_then(Value::as_array)
                .ok_or(DocumentError::Field(field))?
                .iter()
                .enumerate()
                .map(|(index, v)| v.as_f64().ok_or(DocumentError::NotNumber { field, index }))
                .collect()
        };
        let mut meta = BTreeMap::new();
        if let Some(m) = root.get("meta") {
            for (k, v) in m.as_object().ok_or(DocumentError::Field("meta"))? {
                meta.insert(k.clone(), v.as_str().ok_or(DocumentError::Field("meta"))?.to_owned());
            }
        }
        let doc = Self {
            knots: numbers("knots")?,
            betas: numbers("betas")?,
            coeffs: numbers("coeffs")?,
            meta,
        };
        doc.to_spline()?;
        Ok(doc)
    }
}

/// 17 significant digits in scientific notation.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use gqs::geometry::build_space;

    fn sample_doc() -> SplineDocument {
        let space = build_space(vec![0.0, 0.1, 1.0 / 3.0, 2.0], vec![-1.0, -0.3, -2.0 / 3.0]).unwrap();
        let coeffs = vec![0.1, -1e-300, 1.0 / 7.0, 5e300, -0.0, 2.0_f64.sqrt(), std::f64::consts::PI, 1e-7];
        let mut meta = BTreeMap::new();
        meta.insert("command".into(), "fit \"hermite\"".into());
        meta.insert("a".into(), "ünï\ncode".into());
        SplineDocument::from_spline(&GqsSpline::new(space, coeffs).unwrap(), meta)
    }

    #[test]
    fn round_trip_is_byte_identical() {
        let doc = sample_doc();
        let text = doc.to_text();
        let back = SplineDocument::parse(&text).unwrap();
        assert_eq!(back.to_text(), text);
        for (a, b) in back.coeffs.iter().zip(&doc.coeffs) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        assert_eq!(back.meta, doc.meta);
    }

    #[test]
    fn empty_meta_round_trips() {
        let mut doc = sample_doc();
        doc.meta.clear();
        let text = doc.to_text();
        assert!(text.contains("\"meta\": {}"));
        assert_eq!(SplineDocument::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn number_format_has_17_digits() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        assert_eq!(format_number(-2.0), "-2.0000000000000000e0");
    }

    #[test]
    fn parse_rejects_bad_documents() {
        let good = sample_doc().to_text();
        assert!(matches!(
            SplineDocument::parse(&good.replace("gqs-1", "gqs-0")),
            Err(DocumentError::Version(_))
        ));
        assert!(matches!(SplineDocument::parse("{"), Err(DocumentError::Json(_))));
        assert!(matches!(
            SplineDocument::parse(r#"{"version": "gqs-1", "knots": [0, 1], "betas": [-1]}"#),
            Err(DocumentError::Field("coeffs"))
        ));
        assert!(matches!(
            SplineDocument::parse(r#"{"version": "gqs-1", "knots": [1, 0], "betas": [-1], "coeffs": [0, 0, 0, 0]}"#),
            Err(DocumentError::Geometry(GqsError::KnotsNotIncreasing { .. }))
        ));
        assert!(matches!(
            SplineDocument::parse(r#"{"version": "gqs-1", "knots": [0, 1], "betas": [0.5], "coeffs": [0, 0, 0, 0]}"#),
            Err(DocumentError::Geometry(GqsError::BetaOutOfRange { .. }))
        ));
        assert!(matches!(
            SplineDocument::parse(r#"{"version": "gqs-1", "knots": [0, 1], "betas": [-1], "coeffs": [0, 0, 0]}"#),
            Err(DocumentError::Geometry(GqsError::LengthMismatch { .. }))
        ));
        assert!(matches!(
            SplineDocument::parse(r#"{"version": "gqs-1", "knots": [0, "x"], "betas": [-1], "coeffs": [0, 0, 0, 0]}"#),
            Err(DocumentError::NotNumber { field: "knots", index: 1 })
        ));
    }
}
