use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use regsub_core::census::{CensusReport, Status};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// One CSV row per (p, k): the report document with nested fields flattened.
#[derive(Serialize)]
struct Row {
    p: u32,
    k: u32,
    #[serde(rename = "dims.I_k")]
    dim_ik: usize,
    #[serde(rename = "dims.I_k1")]
    dim_ik1: usize,
    #[serde(rename = "dims.A_k")]
    dim_ak: usize,
    #[serde(rename = "dims.B_k")]
    dim_bk: usize,
    gamma_order_exp: u32,
    reg_count_exp: u32,
    reg_count_enumerated: Option<u64>,
    d: u32,
    #[serde(rename = "b_H")]
    b_h: Option<u64>,
    /// `size:count` pairs joined by ';'
    orbit_sizes: String,
    m_k: Option<u64>,
    #[serde(rename = "M_k")]
    max_orbit: Option<u64>,
    #[serde(rename = "bounds.eq090616a_lower")]
    lower: Option<bool>,
    #[serde(rename = "bounds.eq090616a_upper")]
    upper: Option<bool>,
    #[serde(rename = "bounds.lemma070616a3")]
    sandwich: Option<bool>,
    #[serde(rename = "bounds.theorem251015b")]
    k_eq_p: Option<bool>,
    checks_passed: usize,
    checks_failed: String,
    skipped: String,
}

fn row(r: &CensusReport) -> Row {
    let failed: Vec<&str> = r
        .checks
        .iter()
        .filter(|c| c.status == Status::Fail)
        .map(|c| c.name.as_str())
        .collect();
    Row {
        p: r.p,
        k: r.k,
        dim_ik: r.dims.ik,
        dim_ik1: r.dims.ik1,
        dim_ak: r.dims.ak,
        dim_bk: r.dims.bk,
        gamma_order_exp: r.gamma_order_exp,
        reg_count_exp: r.reg_count_expected_exp,
        reg_count_enumerated: r.reg_count_enumerated,
        d: r.d,
        b_h: r.b_h,
        orbit_sizes: r
            .orbit_sizes
            .as_ref()
            .map(|h| {
                h.iter()
                    .map(|(s, m)| format!("{s}:{m}"))
                    .collect::<Vec<_>>()
                    .join(";")
            })
            .unwrap_or_default(),
        m_k: r.m_k,
        max_orbit: r.max_orbit,
        lower: r.bounds.eq090616a_lower,
        upper: r.bounds.eq090616a_upper,
        sandwich: r.bounds.lemma070616a3,
        k_eq_p: r.bounds.theorem251015b,
        checks_passed: r.checks.iter().filter(|c| c.status == Status::Pass).count(),
        checks_failed: failed.join(";"),
        skipped: r.skipped.join(";"),
    }
}

pub fn csv(reports: &[CensusReport]) -> io::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in reports {
        w.serialize(row(r)).map_err(io::Error::other)?;
    }
    let bytes = w.into_inner().map_err(|e| io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn json<T: Serialize + ?Sized>(value: &T) -> io::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write(out: Option<&Path>, text: &str) -> io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}
