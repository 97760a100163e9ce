//! Orbit tables with normal forms, and the marked-set examples of the
//! appendix tables.

use super::{Format, OrbitLabel};
use crate::error::{Error, Result};
use crate::tensor::{QuditSystem, RationalState};

/// `(index, normal form, orbit closure, projective dimension)`.
type Row = (u8, &'static str, &'static str, u32);

const T222: [Row; 6] = [
    (1, "000", "P¹×P¹×P¹", 3),
    (2, "010 111", "σ(P¹×P̲¹×P¹)×P¹", 4),
    (3, "100 111", "P¹×σ(P¹×P¹)", 4),
    (4, "001 111", "σ(P¹×P¹)×P¹", 4),
    (5, "100 010 001", "τ(P¹×P¹×P¹)", 6),
    (6, "000 111", "P⁷", 7),
];

const T223: [Row; 8] = [
    (1, "000", "X=P¹×P¹×P²", 4),
    (2, "000 110", "σ(P¹×P¹)×P²≃P³×P²", 5),
    (3, "000 101", "σ(P¹×P̲¹×P²)×P¹", 6),
    (4, "000 011", "P¹×σ(P¹×P²)≃P¹×P⁵", 6),
    (5, "000 011 101", "τ(X)", 8),
    (6, "000 111", "σ(X)", 9),
    (7, "000 011 102", "J(X,Ō_IV)", 10),
    (8, "000 011 101 112", "P¹¹", 11),
];

const T233: [Row; 17] = [
    (1, "000", "X=P¹×P²×P²", 5),
    (2, "000 110", "σ(P¹×P²)×P²≃P⁵×P²", 7),
    (3, "000 101", "σ(P¹×P̲²×P²)×P²", 7),
    (4, "000 011", "P¹×σ(P²×P²)", 8),
    (5, "000 011 101", "τ(X)", 10),
    (6, "000 111", "σ(X)", 11),
    (7, "000 011 120", "J(X,P⁵×P²)", 12),
    (8, "000 011 110 121", "σ(P⁵×P²)", 13),
    (9, "000 011 022", "P¹×σ₃(P²×P²)≃P¹×P⁸", 9),
    (10, "000 011 102", "J(X,σ(P¹×P̲²×P²)×P²)", 12),
    (11, "000 011 121 102", "J(P⁵×P²,σ(P¹×P̲²×P²)×P²)", 13),
    (12, "000 011 101 112", "σ(σ(P¹×P̲²×P²)×P²)", 13),
    (13, "000 011 022 101", "T(X,P¹×σ(P²×P²))", 13),
    (14, "000 011 122", "J(X,P¹×σ(P²×P²))", 14),
    (15, "000 011 022 101 112", "T(X,τ(X))", 15),
    (16, "000 011 101 122", "J(X,τ(X))", 16),
    (17, "000 011 100 122", "P¹⁷", 17),
];

fn rows(format: Format) -> &'static [Row] {
    match format {
        Format::F222 => &T222,
        Format::F223 => &T223,
        Format::F233 => &T233,
    }
}

pub fn orbit(format: Format, index: u8) -> Result<OrbitLabel> {
    rows(format)
        .iter()
        .find(|r| r.0 == index)
        .map(|&(index, _, variety_desc, dimension)| OrbitLabel { format, index, variety_desc, dimension })
        .ok_or_else(|| Error::NotApplicable(format!("no orbit O{index} in the {format} table")))
}

/// A table row: orbit label with its normal form as a list of kets.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub orbit: OrbitLabel,
    pub kets: Vec<Vec<usize>>,
}

fn parse_kets(text: &str) -> Vec<Vec<usize>> {
    text.split_whitespace()
        .map(|k| k.bytes().map(|b| usize::from(b - b'0')).collect())
        .collect()
}

pub fn normal_forms(format: Format) -> Vec<NormalForm> {
    rows(format)
        .iter()
        .map(|&(index, kets, variety_desc, dimension)| NormalForm {
            orbit: OrbitLabel { format, index, variety_desc, dimension },
            kets: parse_kets(kets),
        })
        .collect()
}

/// The normal form as the unnormalized exact sum of its kets.
pub fn normal_form_state(nf: &NormalForm) -> RationalState {
    let sys = QuditSystem::new(nf.orbit.format.dims().to_vec()).expect("fixed format");
    let kets: Vec<&[usize]> = nf.kets.iter().map(Vec::as_slice).collect();
    RationalState::from_kets(sys, &kets).expect("normal forms are valid")
}

/// A cell of an appendix table: `marked` is `None` for a "---" cell, which
/// claims no marked set of that size reaches the orbit.
#[derive(Clone, Debug)]
pub struct AppendixRow {
    pub format: Format,
    pub orbit: u8,
    pub size: usize,
    pub marked: Option<Vec<Vec<usize>>>,
}

const A222: &[(u8, [&str; 1])] = &[(6, ["000"]), (5, [""]), (4, [""]), (3, [""]), (2, [""]), (1, [""])];

const A223: &[(u8, [&str; 2])] = &[
    (8, ["", "000 111"]),
    (7, ["", "000 101"]),
    (6, ["000", "000 110"]),
    (5, ["", ""]),
    (4, ["", "000 100"]),
    (3, ["", "000 010"]),
    (2, ["", ""]),
    (1, ["", ""]),
];

const A233: &[(u8, [&str; 4])] = &[
    (17, ["", "000 111", "000 001 110", "000 001 010 102"]),
    (16, ["", "", "000 011 101", "000 001 010 100"]),
    (15, ["", "", "", ""]),
    (14, ["", "000 011", "000 001 010", "000 001 010 012"]),
    (13, ["", "", "", ""]),
    (12, ["", "", "000 010 121", "000 001 110 120"]),
    (11, ["", "", "", ""]),
    (10, ["", "000 101", "000 001 100", "000 001 010 020"]),
    (9, ["", "", "", "000 011 100 111"]),
    (8, ["", "", "000 001 112", "000 001 012 102"]),
    (7, ["", "000 110", "000 001 012", "000 001 002 010"]),
    (6, ["000", "000 001", "000 001 102", "000 001 002 100"]),
    (5, ["", "", "", ""]),
    (4, ["", "000 100", "", "000 001 100 101"]),
    (3, ["", "", "000 010 020", ""]),
    (2, ["", "", "000 001 002", ""]),
    (1, ["", "", "", ""]),
];

fn expand<const C: usize>(format: Format, table: &[(u8, [&str; C])]) -> Vec<AppendixRow> {
    let mut out = Vec::new();
    for &(orbit, cells) in table {
        for (col, cell) in cells.iter().enumerate() {
            out.push(AppendixRow {
                format,
                orbit,
                size: col + 1,
                marked: (!cell.is_empty()).then(|| parse_kets(cell)),
            });
        }
    }
    out
}

/// Every cell of the appendix table for `format`.
pub fn appendix_rows(format: Format) -> Vec<AppendixRow> {
    match format {
        Format::F222 => expand(format, A222),
        Format::F223 => expand(format, A223),
        Format::F233 => expand(format, A233),
    }
}
