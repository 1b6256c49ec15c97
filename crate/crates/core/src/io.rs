//! Text formats: the space file and the box certificate file.
//!
//! Both are JSON documents. Every number is written either as a JSON number
//! in plain decimal notation or as a string holding a decimal or a fraction
//! `"p/q"`; see [`crate::number::parse_real`] for the grammar. Numbers are
//! read from their source text, never through `f64`, so decimal inputs
//! round-trip exactly. Writers emit a JSON number when the value has a
//! terminating decimal expansion and a `"p/q"` string otherwise.
//!
//! Space file:
//!
//! ```text
//! {
//!   "labels": ["a", "b"],          // distinct point names
//!   "dist": [[0, 1], [1, 0]],      // n × n distance matrix
//!   "mass": [0.5, 0.5],            // optional: point masses
//!   "coords": [[0, 0], [1, 0]]     // optional: planar coordinates
//! }
//! ```
//!
//! Certificate file:
//!
//! ```text
//! {
//!   "pi": [[0.5, 0], [0, 0.5]],    // coupling, |X| × |Y|
//!   "S": [[0, 0], [1, 1]],         // relation as index pairs
//!   "claimed_value": 0.2           // claimed max{1 − π(S), dis S}
//! }
//! ```

use std::fmt::Write as _;

use num_traits::One;
use serde_json::{Map, Number, Value};

use crate::error::{Error, Result};
use crate::number::{exact_decimal, format_fraction, parse_real, Real};
use crate::relation::{distortion, mass_on, Coupling, Relation};
use crate::space::{validate, FiniteMMSpace, FiniteMetricSpace, ValidationReport};
use crate::transport::is_coupling;

/// A parsed but not yet validated space file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceDoc {
    pub labels: Vec<String>,
    pub dist: Vec<Vec<Real>>,
    pub mass: Option<Vec<Real>>,
    pub coords: Option<Vec<[Real; 2]>>,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn real_from_value(v: &Value, at: &str) -> Result<Real> {
    match v {
        Value::Number(n) => parse_real(&n.to_string()),
        Value::String(s) => parse_real(s),
        _ => Err(parse_err(format!("{at}: expected a number"))),
    }
    .map_err(|e| parse_err(format!("{at}: {e}")))
}

fn array<'a>(v: &'a Value, at: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{at}: expected an array")))
}

fn real_vec(v: &Value, at: &str) -> Result<Vec<Real>> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, x)| real_from_value(x, &format!("{at}[{i}]")))
        .collect()
}

fn real_matrix(v: &Value, at: &str) -> Result<Vec<Vec<Real>>> {
    array(v, at)?
        .iter()
        .enumerate()
        .map(|(i, row)| real_vec(row, &format!("{at}[{i}]")))
        .collect()
}

fn object(root: &Value) -> Result<&Map<String, Value>> {
    root.as_object().ok_or_else(|| parse_err("document must be a JSON object"))
}

impl SpaceDoc {
    pub fn parse(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text)?;
        let obj = object(&root)?;
        let dist = real_matrix(obj.get("dist").ok_or_else(|| parse_err("missing field `dist`"))?, "dist")?;
        let labels = match obj.get("labels") {
            Some(v) => array(v, "labels")?
                .iter()
                .enumerate()
                .map(|(i, l)| {
                    l.as_str().map(str::to_owned).ok_or_else(|| parse_err(format!("labels[{i}]: expected a string")))
                })
                .collect::<Result<Vec<_>>>()?,
            None => return Err(parse_err("missing field `labels`")),
        };
        let mass = obj.get("mass").map(|v| real_vec(v, "mass")).transpose()?;
        let coords = obj
            .get("coords")
            .map(|v| {
                real_matrix(v, "coords")?
                    .into_iter()
                    .enumerate()
                    .map(|(i, p)| {
                        <[Real; 2]>::try_from(p).map_err(|_| parse_err(format!("coords[{i}]: expected two numbers")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .transpose()?;
        for key in obj.keys() {
            if !matches!(key.as_str(), "labels" | "dist" | "mass" | "coords") {
                return Err(parse_err(format!("unknown field `{key}`")));
            }
        }
        Ok(SpaceDoc { labels, dist, mass, coords })
    }

    pub fn validate(&self) -> ValidationReport {
        validate(&self.labels, &self.dist, self.mass.as_deref())
    }

    pub fn to_metric(&self) -> Result<FiniteMetricSpace> {
        let x = FiniteMetricSpace::new(self.labels.clone(), self.dist.clone())?;
        match &self.coords {
            Some(c) => x.with_coords(c.clone()),
            None => Ok(x),
        }
    }

    /// Builds the mm-space, renormalizing masses that are within the
    /// ingestion tolerance of summing to 1.
    pub fn to_mm(&self) -> Result<FiniteMMSpace> {
        let mass = self
            .mass
            .clone()
            .ok_or_else(|| Error::InvalidParameter("space file has no `mass` field".into()))?;
        FiniteMMSpace::ingest(self.to_metric()?, mass)
    }

    pub fn from_metric(x: &FiniteMetricSpace) -> Self {
        SpaceDoc {
            labels: x.labels().to_vec(),
            dist: x.matrix().to_vec(),
            mass: None,
            coords: x.coords().map(<[_]>::to_vec),
        }
    }

    pub fn from_mm(x: &FiniteMMSpace) -> Self {
        SpaceDoc { mass: Some(x.mass().to_vec()), ..SpaceDoc::from_metric(x.space()) }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("{\n");
        let labels: Vec<String> = self.labels.iter().map(|l| Value::String(l.clone()).to_string()).collect();
        let _ = writeln!(out, "  \"labels\": [{}],", labels.join(", "));
        out.push_str("  \"dist\": ");
        write_matrix(&mut out, &self.dist);
        if let Some(m) = &self.mass {
            let _ = write!(out, ",\n  \"mass\": {}", vec_text(m));
        }
        if let Some(c) = &self.coords {
            let rows: Vec<Vec<Real>> = c.iter().map(|p| p.to_vec()).collect();
            out.push_str(",\n  \"coords\": ");
            write_matrix(&mut out, &rows);
        }
        out.push_str("\n}\n");
        out
    }
}

/// JSON text for one exact number.
pub fn number_text(v: &Real) -> String {
    match exact_decimal(v) {
        Some(d) => d,
        None => Value::String(format_fraction(v)).to_string(),
    }
}

pub fn number_value(v: &Real) -> Value {
    match exact_decimal(v) {
        Some(d) => Value::Number(serde_json::from_str::<Number>(&d).expect("plain decimal is valid JSON")),
        None => Value::String(format_fraction(v)),
    }
}

fn vec_text(v: &[Real]) -> String {
    let items: Vec<String> = v.iter().map(number_text).collect();
    format!("[{}]", items.join(", "))
}

fn write_matrix(out: &mut String, rows: &[Vec<Real>]) {
    if rows.is_empty() {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (i, row) in rows.iter().enumerate() {
        let sep = if i + 1 == rows.len() { "" } else { "," };
        let _ = writeln!(out, "    {}{sep}", vec_text(row));
    }
    out.push_str("  ]");
}

/// A claimed upper bound on the box distance, with its witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub pi: Coupling,
    pub s: Relation,
    pub claimed_value: Real,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateCheck {
    pub coupling_valid: bool,
    /// `max{1 − π(S), dis S}` recomputed from the witness.
    pub recomputed: Real,
    pub claimed: Real,
}

impl CertificateCheck {
    /// The witness is a genuine coupling and its value does not exceed the claim.
    pub fn holds(&self) -> bool {
        self.coupling_valid && self.recomputed <= self.claimed
    }
}

impl Certificate {
    pub fn parse(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text)?;
        let obj = object(&root)?;
        let pi = Coupling::new(real_matrix(obj.get("pi").ok_or_else(|| parse_err("missing field `pi`"))?, "pi")?)?;
        let pairs = array(obj.get("S").ok_or_else(|| parse_err("missing field `S`"))?, "S")?
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let p = p.as_array().filter(|p| p.len() == 2);
                let idx = |v: &Value| v.as_u64().map(|u| u as usize);
                p.and_then(|p| Some((idx(&p[0])?, idx(&p[1])?)))
                    .ok_or_else(|| parse_err(format!("S[{k}]: expected a pair of indices")))
            })
            .collect::<Result<Relation>>()?;
        let claimed_value = real_from_value(
            obj.get("claimed_value").ok_or_else(|| parse_err("missing field `claimed_value`"))?,
            "claimed_value",
        )?;
        Ok(Certificate { pi, s: pairs, claimed_value })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("{\n  \"pi\": ");
        write_matrix(&mut out, self.pi.matrix());
        let pairs: Vec<String> = self.s.iter().map(|(i, j)| format!("[{i}, {j}]")).collect();
        let _ = write!(out, ",\n  \"S\": [{}]", pairs.join(", "));
        let _ = write!(out, ",\n  \"claimed_value\": {}\n}}\n", number_text(&self.claimed_value));
        out
    }

    pub fn check(&self, x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<CertificateCheck> {
        if self.pi.rows() != x.len() || self.pi.cols() != y.len() {
            return Err(Error::DimensionMismatch(format!(
                "certificate coupling is {}x{}, spaces are {}x{}",
                self.pi.rows(),
                self.pi.cols(),
                x.len(),
                y.len()
            )));
        }
        let dis = distortion(&self.s, x.space(), y.space())?;
        let missing = Real::one() - mass_on(&self.pi, &self.s)?;
        Ok(CertificateCheck {
            coupling_valid: is_coupling(&self.pi, x.mass(), y.mass()),
            recomputed: dis.max(missing),
            claimed: self.claimed_value.clone(),
        })
    }
}
