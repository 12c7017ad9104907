//! File formats: population JSON, concept JSON, stakes JSON, sample CSV,
//! classifier CSV, and curve CSV.
//!
//! All output is deterministic: JSON is pretty-printed with a trailing
//! newline, CSV uses LF line endings, and every CSV float is printed in
//! scientific notation with 12 significant digits.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::concepts::{ConceptSpec, UtilityValue};
use crate::error::Error;
use crate::population::{AlphaTable, Cell, Group, Population, SampleRow};
use crate::solver::{Classifier, ConcaveCurve};

/// The stable CSV float format: 12 significant digits, scientific.
pub fn format_float(v: f64) -> String {
    format!("{v:.11e}")
}

/// Pretty JSON with a trailing newline, the format of every JSON file
/// this crate writes.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String, Error> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    Ok(text)
}

/// Writes any serializable value as a JSON file.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), Error> {
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Error> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

#[derive(Serialize, Deserialize)]
struct PopulationFile {
    cells: Vec<Cell>,
}

/// Parses and validates a population from its JSON text.
pub fn parse_population_json(text: &str) -> Result<Population, Error> {
    let file: PopulationFile = serde_json::from_str(text)?;
    Population::new(file.cells)
}

/// Reads a population JSON file: `{"cells": [{x, a, mass, p,
/// alpha_plus, alpha_minus}, ...]}`.
pub fn read_population_json(path: &Path) -> Result<Population, Error> {
    parse_population_json(&fs::read_to_string(path)?)
}

/// Writes a population as JSON in canonical cell order.
pub fn write_population_json(path: &Path, pop: &Population) -> Result<(), Error> {
    write_json(
        path,
        &PopulationFile {
            cells: pop.cells().to_vec(),
        },
    )
}

/// Reads a stakes file: `{label: {"alpha_plus": .., "alpha_minus": ..}}`.
pub fn read_alpha_json(path: &Path) -> Result<AlphaTable, Error> {
    read_json(path)
}

fn invalid_concept(reason: impl Into<String>) -> Error {
    Error::InvalidConcept {
        reason: reason.into(),
    }
}

fn known_fields(
    obj: &serde_json::Map<String, Value>,
    kind: &str,
    allowed: &[&str],
) -> Result<(), Error> {
    for key in obj.keys() {
        if key != "kind" && !allowed.contains(&key.as_str()) {
            return Err(invalid_concept(format!(
                "unexpected field {key:?} for kind {kind:?}"
            )));
        }
    }
    Ok(())
}

fn number_field(obj: &serde_json::Map<String, Value>, kind: &str, key: &str) -> Result<f64, Error> {
    obj.get(key)
        .and_then(Value::as_f64)
        .ok_or_else(|| invalid_concept(format!("kind {kind:?} requires a number field {key:?}")))
}

fn group_value(value: &Value) -> Result<Group, Error> {
    value
        .as_u64()
        .and_then(|a| u8::try_from(a).ok())
        .and_then(|a| Group::try_from(a).ok())
        .ok_or_else(|| invalid_concept(format!("group must be 0 or 1, got {value}")))
}

/// Parses a concept from its JSON text.
///
/// Malformed JSON is a parse error; well-formed JSON that does not
/// describe a concept (unknown kind, missing or extra fields) is an
/// `InvalidConcept` validation error.
pub fn parse_concept_json(text: &str) -> Result<ConceptSpec, Error> {
    let value: Value = serde_json::from_str(text)?;
    concept_from_value(&value)
}

/// Reads a concept JSON file; see [`parse_concept_json`].
pub fn read_concept_json(path: &Path) -> Result<ConceptSpec, Error> {
    parse_concept_json(&fs::read_to_string(path)?)
}

fn concept_from_value(value: &Value) -> Result<ConceptSpec, Error> {
    let obj = value
        .as_object()
        .ok_or_else(|| invalid_concept("concept must be a JSON object"))?;
    let kind = obj
        .get("kind")
        .and_then(Value::as_str)
        .ok_or_else(|| invalid_concept("concept requires a string field \"kind\""))?;
    match kind {
        "demographic_parity" => {
            known_fields(obj, kind, &[])?;
            Ok(ConceptSpec::DemographicParity)
        }
        "equal_opportunity" => {
            known_fields(obj, kind, &["normalized"])?;
            let normalized = match obj.get("normalized") {
                None => true,
                Some(v) => v
                    .as_bool()
                    .ok_or_else(|| invalid_concept("field \"normalized\" must be a boolean"))?,
            };
            Ok(ConceptSpec::EqualOpportunity { normalized })
        }
        "equalized_odds_member" => {
            known_fields(obj, kind, &["alpha", "beta"])?;
            Ok(ConceptSpec::EqualizedOddsMember {
                alpha: number_field(obj, kind, "alpha")?,
                beta: number_field(obj, kind, "beta")?,
            })
        }
        "heterogeneous_eo" => {
            known_fields(obj, kind, &["m"])?;
            let m = obj.get("m").and_then(Value::as_object).ok_or_else(|| {
                invalid_concept("kind \"heterogeneous_eo\" requires an object field \"m\"")
            })?;
            let amounts = m
                .iter()
                .map(|(label, amount)| {
                    amount.as_f64().map(|v| (label.clone(), v)).ok_or_else(|| {
                        invalid_concept(format!("amount for label {label:?} must be a number"))
                    })
                })
                .collect::<Result<_, _>>()?;
            Ok(ConceptSpec::HeterogeneousEqualOpportunity { amounts })
        }
        "custom" => {
            known_fields(obj, kind, &["u"])?;
            let entries = obj
                .get("u")
                .and_then(Value::as_array)
                .ok_or_else(|| invalid_concept("kind \"custom\" requires an array field \"u\""))?;
            let entries = entries
                .iter()
                .map(utility_value_from)
                .collect::<Result<_, _>>()?;
            Ok(ConceptSpec::Custom { entries })
        }
        other => Err(invalid_concept(format!("unknown kind {other:?}"))),
    }
}

fn utility_value_from(value: &Value) -> Result<UtilityValue, Error> {
    let obj = value
        .as_object()
        .ok_or_else(|| invalid_concept("each \"u\" entry must be an object"))?;
    for key in obj.keys() {
        if !["x", "a", "y", "value"].contains(&key.as_str()) {
            return Err(invalid_concept(format!(
                "unexpected field {key:?} in a \"u\" entry"
            )));
        }
    }
    let x = obj
        .get("x")
        .and_then(Value::as_str)
        .ok_or_else(|| invalid_concept("\"u\" entries require a string field \"x\""))?;
    let a = group_value(
        obj.get("a")
            .ok_or_else(|| invalid_concept("\"u\" entries require a field \"a\""))?,
    )?;
    let y = match obj.get("y").and_then(Value::as_u64) {
        Some(0) => false,
        Some(1) => true,
        _ => {
            return Err(invalid_concept(
                "\"u\" entries require a field \"y\" of 0 or 1",
            ))
        }
    };
    let value = obj
        .get("value")
        .and_then(Value::as_f64)
        .ok_or_else(|| invalid_concept("\"u\" entries require a number field \"value\""))?;
    Ok(UtilityValue {
        x: x.to_owned(),
        a,
        y,
        value,
    })
}

#[derive(Debug, Deserialize)]
struct RawSample {
    x: String,
    a: u8,
    y: u8,
    #[serde(default)]
    weight: Option<f64>,
}

/// Reads a samples CSV with header `x,a,y,weight`; the weight column is
/// optional and defaults to 1.
pub fn read_samples_csv(path: &Path) -> Result<Vec<SampleRow>, Error> {
    parse_samples_csv(fs::File::open(path)?)
}

/// Parses samples CSV from any reader; see [`read_samples_csv`].
pub fn parse_samples_csv(reader: impl std::io::Read) -> Result<Vec<SampleRow>, Error> {
    let mut rows = Vec::new();
    for (i, record) in csv::Reader::from_reader(reader).deserialize().enumerate() {
        let raw: RawSample = record?;
        let context = format!("samples CSV row {}", i + 2);
        let a = Group::try_from(raw.a).map_err(|reason| Error::InvalidFormat {
            context: context.clone(),
            reason,
        })?;
        let y = match raw.y {
            0 => false,
            1 => true,
            other => {
                return Err(Error::InvalidFormat {
                    context,
                    reason: format!("y must be 0 or 1, got {other}"),
                })
            }
        };
        rows.push(SampleRow {
            x: raw.x,
            a,
            y,
            weight: raw.weight.unwrap_or(1.0),
        });
    }
    Ok(rows)
}

/// Writes a classifier as CSV with header `x,a,c`, one row per cell in
/// (label, group) order.
pub fn write_classifier_csv(path: &Path, c: &Classifier) -> Result<(), Error> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["x", "a", "c"])?;
    for (x, a, value) in c.entries() {
        writer.write_record([x, &a.to_string(), &format_float(value)])?;
    }
    writer.flush().map_err(std::io::Error::from)?;
    Ok(())
}

/// Reads a classifier CSV with header `x,a,c`.
pub fn read_classifier_csv(path: &Path) -> Result<Classifier, Error> {
    #[derive(Deserialize)]
    struct Row {
        x: String,
        a: u8,
        c: f64,
    }
    let mut values = std::collections::BTreeMap::new();
    for (i, record) in csv::Reader::from_path(path)?.deserialize().enumerate() {
        let row: Row = record?;
        let context = format!("classifier CSV row {}", i + 2);
        let a = Group::try_from(row.a).map_err(|reason| Error::InvalidFormat {
            context: context.clone(),
            reason,
        })?;
        if values.insert((row.x.clone(), a), row.c).is_some() {
            return Err(Error::InvalidFormat {
                context,
                reason: format!("duplicate cell ({}, {a})", row.x),
            });
        }
    }
    Classifier::new(values)
}

/// Writes a curve as CSV with header `w,R`, one row per breakpoint.
pub fn write_curve_csv(path: &Path, curve: &ConcaveCurve) -> Result<(), Error> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["w", "R"])?;
    for pt in curve.points() {
        writer.write_record([format_float(pt.w), format_float(pt.value)])?;
    }
    writer.flush().map_err(std::io::Error::from)?;
    Ok(())
}

/// Writes the mixed objective as CSV with header `w,F`, one row per
/// breakpoint of F.
pub fn write_objective_csv(path: &Path, points: &[(f64, f64)]) -> Result<(), Error> {
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["w", "F"])?;
    for (w, f) in points {
        writer.write_record([format_float(*w), format_float(*f)])?;
    }
    writer.flush().map_err(std::io::Error::from)?;
    Ok(())
}
