//! JSON document formats for tables, vector fields and solver input.
//!
//! A series is stored as a list of `[i, j, "num/den"]` entries. Table
//! documents carry a frame tag selecting which coefficient names are
//! legal; unknown names and unknown top-level keys are rejected. Parsing
//! then serializing is bit-stable for documents this module writes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::euler::{MeroSeries2, VectorField};
use crate::rat::{format_rat, parse_rat};
use crate::series::Series2;
use crate::tangent::{AbcFrame, GhFrame, MultTable};
use crate::{Error, Result};

pub const TABLE_FORMAT: &str = "fmankit-table/1";
pub const FIELD_FORMAT: &str = "fmankit-field/1";
pub const PDE_INIT_FORMAT: &str = "fmankit-pde-init/1";

const TILDE_NAMES: [&str; 9] = ["at1", "at2", "a3", "bt1", "b2", "b3", "ct1", "c2", "ct3"];
const ABC_NAMES: [&str; 9] = ["a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3"];
const GH_NAMES: [&str; 6] = ["g2", "g1", "g0", "h2", "h1", "h0"];

/// One series entry: exponents and an exact rational literal.
pub type SeriesEntry = (u32, u32, String);

/// On-disk form of a multiplication table.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct TableDocument {
    pub format: String,
    pub truncation: u32,
    pub frame: String,
    pub coefficients: BTreeMap<String, Vec<SeriesEntry>>,
}

/// On-disk form of a meromorphic series component.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct MeroEntry {
    pub pole: u32,
    pub series: Vec<SeriesEntry>,
}

/// On-disk form of an Euler-field candidate.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct FieldDocument {
    pub format: String,
    pub c: String,
    pub eps1: Vec<SeriesEntry>,
    pub eps2: MeroEntry,
    pub eps3: MeroEntry,
}

/// On-disk form of the solver's initial data.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct PdeInitDocument {
    pub format: String,
    pub truncation: u32,
    pub g2_0: Vec<SeriesEntry>,
    pub g1_0: Vec<SeriesEntry>,
    pub g0_0: Vec<SeriesEntry>,
    pub h2: Vec<SeriesEntry>,
    pub h1: Vec<SeriesEntry>,
    pub h0: Vec<SeriesEntry>,
}

pub fn series_to_entries(s: &Series2) -> Vec<SeriesEntry> {
    s.terms().map(|(i, j, c)| (i, j, format_rat(c))).collect()
}

pub fn entries_to_series(entries: &[SeriesEntry], d: u32) -> Result<Series2> {
    let mut pairs = Vec::with_capacity(entries.len());
    for (i, j, lit) in entries {
        let c = parse_rat(lit)
            .ok_or_else(|| Error::ParseError(format!("bad rational literal '{lit}'")))?;
        if i + j >= d {
            return Err(Error::ParseError(format!(
                "entry t2^{i} t3^{j} exceeds truncation {d}"
            )));
        }
        pairs.push((*i, *j, c));
    }
    Ok(Series2::from_entries(pairs, d))
}

impl TableDocument {
    pub fn from_table(table: &MultTable) -> Self {
        let coeffs = table.coeffs();
        let mut map = BTreeMap::new();
        for (name, s) in TILDE_NAMES.iter().zip(coeffs.iter()) {
            if !s.is_zero() {
                map.insert(name.to_string(), series_to_entries(s));
            }
        }
        TableDocument {
            format: TABLE_FORMAT.into(),
            truncation: table.truncation(),
            frame: "tilde".into(),
            coefficients: map,
        }
    }

    pub fn from_gh(gh: &GhFrame) -> Self {
        let mut map = BTreeMap::new();
        let series = [&gh.g2, &gh.g1, &gh.g0, &gh.h2, &gh.h1, &gh.h0];
        for (name, s) in GH_NAMES.iter().zip(series.iter()) {
            if !s.is_zero() {
                map.insert(name.to_string(), series_to_entries(s));
            }
        }
        TableDocument {
            format: TABLE_FORMAT.into(),
            truncation: gh.truncation(),
            frame: "gh".into(),
            coefficients: map,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.format != TABLE_FORMAT {
            return Err(Error::ParseError(format!(
                "unsupported format '{}', expected {TABLE_FORMAT}",
                self.format
            )));
        }
        if self.truncation < 1 {
            return Err(Error::ParseError("truncation must be >= 1".into()));
        }
        let legal: &[&str] = match self.frame.as_str() {
            "tilde" => &TILDE_NAMES,
            "abc" => &ABC_NAMES,
            "gh" => &GH_NAMES,
            other => {
                return Err(Error::ParseError(format!(
                    "unknown frame '{other}' (expected tilde, abc or gh)"
                )))
            }
        };
        for name in self.coefficients.keys() {
            if !legal.contains(&name.as_str()) {
                return Err(Error::ParseError(format!(
                    "coefficient '{name}' is not legal in the {} frame",
                    self.frame
                )));
            }
        }
        Ok(())
    }

    fn series(&self, name: &str) -> Result<Series2> {
        match self.coefficients.get(name) {
            None => Ok(Series2::zero(self.truncation)),
            Some(entries) => entries_to_series(entries, self.truncation),
        }
    }

    /// Decodes into a multiplication table, converting from the document
    /// frame when necessary.
    pub fn to_table(&self) -> Result<MultTable> {
        self.validate()?;
        match self.frame.as_str() {
            "tilde" => {
                let mut cs = Vec::with_capacity(9);
                for name in TILDE_NAMES {
                    cs.push(self.series(name)?);
                }
                Ok(MultTable::new(cs.try_into().unwrap()))
            }
            "abc" => {
                let f = AbcFrame {
                    a1: self.series("a1")?,
                    a2: self.series("a2")?,
                    a3: self.series("a3")?,
                    b1: self.series("b1")?,
                    b2: self.series("b2")?,
                    b3: self.series("b3")?,
                    c1: self.series("c1")?,
                    c2: self.series("c2")?,
                    c3: self.series("c3")?,
                };
                Ok(f.to_table())
            }
            "gh" => self.to_gh()?.to_table(),
            _ => unreachable!("validated above"),
        }
    }

    /// Decodes the power-frame data; only for `frame = "gh"` documents.
    pub fn to_gh(&self) -> Result<GhFrame> {
        self.validate()?;
        if self.frame != "gh" {
            return Err(Error::ParseError(format!(
                "document frame is '{}', not 'gh'",
                self.frame
            )));
        }
        Ok(GhFrame {
            g2: self.series("g2")?,
            g1: self.series("g1")?,
            g0: self.series("g0")?,
            h2: self.series("h2")?,
            h1: self.series("h1")?,
            h0: self.series("h0")?,
        })
    }
}

impl FieldDocument {
    pub fn from_field(e: &VectorField) -> Self {
        FieldDocument {
            format: FIELD_FORMAT.into(),
            c: format_rat(&e.c),
            eps1: series_to_entries(&e.eps1),
            eps2: MeroEntry {
                pole: e.eps2.pole(),
                series: series_to_entries(e.eps2.numerator()),
            },
            eps3: MeroEntry {
                pole: e.eps3.pole(),
                series: series_to_entries(e.eps3.numerator()),
            },
        }
    }

    pub fn to_field(&self, d: u32) -> Result<VectorField> {
        if self.format != FIELD_FORMAT {
            return Err(Error::ParseError(format!(
                "unsupported format '{}', expected {FIELD_FORMAT}",
                self.format
            )));
        }
        let c = parse_rat(&self.c)
            .ok_or_else(|| Error::ParseError(format!("bad rational literal '{}'", self.c)))?;
        let eps1 = entries_to_series(&self.eps1, d)?;
        let decode = |m: &MeroEntry| -> Result<MeroSeries2> {
            Ok(MeroSeries2::new(m.pole, entries_to_series(&m.series, d)?))
        };
        Ok(VectorField {
            c,
            eps1,
            eps2: decode(&self.eps2)?,
            eps3: decode(&self.eps3)?,
        })
    }
}

impl PdeInitDocument {
    pub fn to_initial_data(&self, order: u32) -> Result<crate::pde::InitialData> {
        if self.format != PDE_INIT_FORMAT {
            return Err(Error::ParseError(format!(
                "unsupported format '{}', expected {PDE_INIT_FORMAT}",
                self.format
            )));
        }
        let d = self.truncation;
        Ok(crate::pde::InitialData {
            g2_0: entries_to_series(&self.g2_0, d)?,
            g1_0: entries_to_series(&self.g1_0, d)?,
            g0_0: entries_to_series(&self.g0_0, d)?,
            h2: entries_to_series(&self.h2, d)?,
            h1: entries_to_series(&self.h1, d)?,
            h0: entries_to_series(&self.h0, d)?,
            order,
        })
    }
}

/// Canonical pretty serialization used for every document this crate
/// writes; round-trips byte for byte.
pub fn to_json_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serialization cannot fail");
    s.push('\n');
    s
}

pub fn parse_table_document(text: &str) -> Result<TableDocument> {
    let doc: TableDocument =
        serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))?;
    doc.validate()?;
    Ok(doc)
}

pub fn parse_field_document(text: &str) -> Result<FieldDocument> {
    serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))
}

pub fn parse_pde_init_document(text: &str) -> Result<PdeInitDocument> {
    serde_json::from_str(text).map_err(|e| Error::ParseError(e.to_string()))
}
