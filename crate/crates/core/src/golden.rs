//! Bundled reference tables of admissible triples with named representatives.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Realization marker attached to a reference row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Marker {
    /// ♣: realized by a natural automorphism.
    Club,
    /// ♮: realized by a non-natural induced automorphism.
    Natural,
    /// ♦: realized only by twisted induced automorphisms.
    Diamond,
    /// ★: realized through the Torelli theorem.
    Star,
    None,
}

impl Marker {
    pub fn symbol(&self) -> &'static str {
        match self {
            Marker::Club => "♣",
            Marker::Natural => "♮",
            Marker::Diamond => "♦",
            Marker::Star => "★",
            Marker::None => "",
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Marker::Club => "club",
            Marker::Natural => "natural",
            Marker::Diamond => "diamond",
            Marker::Star => "star",
            Marker::None => "none",
        }
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRow {
    pub p: i64,
    pub m: i64,
    pub a: i64,
    #[serde(rename = "S")]
    pub s: String,
    #[serde(rename = "T")]
    pub t: String,
    pub marker: Marker,
}

impl GoldenRow {
    pub fn triple(&self) -> (i64, i64, i64) {
        (self.p, self.m, self.a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenTable {
    pub n: i64,
    pub p: i64,
    pub rows: Vec<GoldenRow>,
}

impl GoldenTable {
    pub fn from_json(text: &str) -> Result<GoldenTable> {
        let table: GoldenTable = serde_json::from_str(text).map_err(|e| Error::Data(e.to_string()))?;
        if let Some(r) = table.rows.iter().find(|r| r.p != table.p) {
            return Err(Error::Data(format!("row ({}, {}, {}) has p different from the table", r.p, r.m, r.a)));
        }
        Ok(table)
    }

    pub fn row(&self, m: i64, a: i64) -> Option<&GoldenRow> {
        self.rows.iter().find(|r| r.m == m && r.a == a)
    }
}

const N3_P3: &str = include_str!("../data/golden/n3_p3.json");
const N4_P3: &str = include_str!("../data/golden/n4_p3.json");
const K3_ORDER_3: &str = include_str!("../data/k3_order3.json");

/// The bundled table for `(n, p)`, if any.
pub fn bundled(n: i64, p: i64) -> Option<GoldenTable> {
    let text = match (n, p) {
        (3, 3) => N3_P3,
        (4, 3) => N4_P3,
        _ => return None,
    };
    Some(GoldenTable::from_json(text).expect("bundled table is well formed"))
}

/// Invariant and co-invariant lattices of order-3 non-symplectic automorphisms
/// of K3 surfaces realized by natural automorphisms, used for corroboration.
pub fn bundled_k3_order_3() -> GoldenTable {
    GoldenTable::from_json(K3_ORDER_3).expect("bundled K3 data is well formed")
}
