//! Report documents and their serialization.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which is
//! lossless for `f64`; parsing an emitted document and writing it again
//! reproduces it byte for byte.

use std::collections::BTreeMap;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::configuration::Configuration;
use crate::ga_values::FCoefficients;
use crate::lhv::LhvModel;
use crate::optimizer::{OptimizationResult, SweepPoint};
use crate::{CLASSICAL_BOUND, TSIRELSON_BOUND};

use super::Track;

pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A report counts as attaining its bound when the margin is at most this.
pub const ATTAINED_TOL: f64 = 1e-6;

/// Reports with a margin below `−VIOLATION_TOL` signal a bound violation.
pub const VIOLATION_TOL: f64 = 1e-9;

/// Formats a float with 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    ChshClassicalValue,
    ChshQmValue,
    ChshOperatorNorm,
    SPrime,
    GaBoundExpression,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::ChshClassicalValue => "chsh_classical_value",
            Quantity::ChshQmValue => "chsh_qm_value",
            Quantity::ChshOperatorNorm => "chsh_operator_norm",
            Quantity::SPrime => "s_prime",
            Quantity::GaBoundExpression => "ga_bound_expression",
        }
    }

    pub fn bound(self) -> f64 {
        match self {
            Quantity::ChshClassicalValue => CLASSICAL_BOUND,
            _ => TSIRELSON_BOUND,
        }
    }

    /// The inequality or identity this quantity is checked against.
    pub fn relation(self) -> &'static str {
        match self {
            Quantity::ChshClassicalValue => {
                "Bell-CHSH inequality: |c(a,b) + c(a,b') + c(a',b) - c(a',b')| <= 2 for local models"
            }
            Quantity::ChshQmValue => {
                "singlet CHSH value |<A,B> + <A,B'> + <A',B> - <A',B'>| with <A,B> = -cos(theta_ab), Tsirelson bound 2*sqrt(2)"
            }
            Quantity::ChshOperatorNorm => {
                "||B|| <= 2*sqrt(2) from B^2 = 4*1 - [A,A'][B,B'] and ||[A,A'][B,B']|| <= 4"
            }
            Quantity::SPrime => {
                "S' = |F(a,b) + F(a,b')| + |F(a',b) - F(a',b')| <= 2*sqrt(2) for vector-valued F"
            }
            Quantity::GaBoundExpression => "|alpha b + beta b'| + |alpha b - beta b'| <= |b + b'| + |b - b'| <= 2*sqrt(2)",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct InputsEcho {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub configuration: Option<Configuration>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<FCoefficients>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lhv_model: Option<LhvModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub track: Track,
    pub quantity: Quantity,
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
    pub attained: bool,
    pub inputs: InputsEcho,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
    pub tool_version: String,
    pub seed: u64,
}

impl BoundReport {
    pub fn new(track: Track, quantity: Quantity, value: f64, inputs: InputsEcho, seed: u64) -> Self {
        let bound = quantity.bound();
        let margin = bound - value;
        Self {
            track,
            quantity,
            value,
            bound,
            margin,
            attained: margin <= ATTAINED_TOL,
            inputs,
            details: BTreeMap::new(),
            tool_version: TOOL_VERSION.to_string(),
            seed,
        }
    }

    pub fn with_detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }

    pub fn violated(&self) -> bool {
        self.margin < -VIOLATION_TOL
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyDocument {
    pub tool: String,
    pub command: String,
    pub reports: Vec<BoundReport>,
}

impl VerifyDocument {
    pub fn new(reports: Vec<BoundReport>) -> Self {
        Self {
            tool: TOOL_NAME.to_string(),
            command: "verify".to_string(),
            reports,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximizerCounts {
    pub signed: usize,
    pub absolute: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizeDocument {
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub track: Track,
    pub seed: u64,
    pub restarts: usize,
    pub bound: f64,
    pub margin: f64,
    pub attained: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maximizers: Option<MaximizerCounts>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub result: OptimizationResult,
}

impl OptimizeDocument {
    pub fn violated(&self) -> bool {
        self.margin < -VIOLATION_TOL || self.result.max_evaluated > self.bound + VIOLATION_TOL
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub theta_rad: f64,
    pub classical_bound: f64,
    pub qm_value: f64,
    pub tsirelson_bound: f64,
}

impl From<SweepPoint> for SweepRow {
    fn from(p: SweepPoint) -> Self {
        Self {
            theta_rad: p.theta,
            classical_bound: CLASSICAL_BOUND,
            qm_value: p.value,
            tsirelson_bound: TSIRELSON_BOUND,
        }
    }
}

pub const SWEEP_CSV_HEADER: [&str; 4] = ["theta_rad", "classical_bound", "qm_value", "tsirelson_bound"];

/// Pretty JSON with 17-significant-digit floats.
struct SigDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SigDigits<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(format_f64(value).as_bytes())
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Serializes `value` as pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits(PrettyFormatter::new()));
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serde_json emits UTF-8"))
}

pub fn verify_csv(doc: &VerifyDocument) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["track", "quantity", "value", "bound", "margin", "attained", "seed", "tool_version"])?;
    for r in &doc.reports {
        w.write_record([
            r.track.name().to_string(),
            r.quantity.name().to_string(),
            format_f64(r.value),
            format_f64(r.bound),
            format_f64(r.margin),
            r.attained.to_string(),
            r.seed.to_string(),
            r.tool_version.clone(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("UTF-8"))
}

pub fn sweep_csv(rows: &[SweepRow]) -> csv::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_CSV_HEADER)?;
    for r in rows {
        w.write_record([r.theta_rad, r.classical_bound, r.qm_value, r.tsirelson_bound].map(format_f64))?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_f64(TSIRELSON_BOUND), "2.8284271247461903e0");
        assert_eq!(format_f64(2.0), "2.0000000000000000e0");
        assert_eq!(format_f64(-1e-13), "-1.0000000000000000e-13");
    }

    #[test]
    fn attained_and_violated_flags() {
        let r = BoundReport::new(Track::Quantum, Quantity::ChshQmValue, TSIRELSON_BOUND, InputsEcho::default(), 0);
        assert!(r.attained && !r.violated());
        let r = BoundReport::new(Track::Classical, Quantity::ChshClassicalValue, 1.5, InputsEcho::default(), 0);
        assert!(!r.attained && !r.violated());
        let r = BoundReport::new(Track::Classical, Quantity::ChshClassicalValue, 2.1, InputsEcho::default(), 0);
        assert!(r.violated());
    }

    #[test]
    fn sweep_csv_header() {
        let csv = sweep_csv(&[]).unwrap();
        assert_eq!(csv, "theta_rad,classical_bound,qm_value,tsirelson_bound\n");
    }

    proptest! {
        #[test]
        fn float_format_is_lossless(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
            let s = format_f64(v);
            let back: f64 = s.parse().unwrap();
            prop_assert_eq!(back.to_bits(), v.to_bits());
            let json: f64 = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(json.to_bits(), v.to_bits());
        }
    }
}
