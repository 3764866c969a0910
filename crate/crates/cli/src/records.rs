//! Row types written by the CLI, plus readers for each output format.

use std::fmt;
use std::io::Read;

use cv_entangle::ghz::{ScalingRow, SweepRecord};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `f64` that writes `+inf` as the string `"inf"`.
pub mod inf_float {
    use super::*;

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if *v == f64::INFINITY {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = f64;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
                Ok(v)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
                Ok(v as f64)
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
                match v {
                    "inf" => Ok(f64::INFINITY),
                    _ => v
                        .parse()
                        .map_err(|_| E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// One `1 x K` entry of a GHZ hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HierarchyRow {
    pub k: usize,
    #[serde(rename = "E_N")]
    pub e_n: f64,
    pub n_tilde_minus: f64,
    pub entangled: bool,
    /// Infinite-squeezing limit for the same `K`.
    #[serde(with = "inf_float")]
    pub limit: f64,
}

/// CSV layout of [`HierarchyRow`]: `k,E_N,n_tilde_minus,limit`.
#[derive(Debug, Serialize, Deserialize)]
struct HierarchyCsv {
    k: usize,
    #[serde(rename = "E_N")]
    e_n: f64,
    n_tilde_minus: f64,
    #[serde(with = "inf_float")]
    limit: f64,
}

/// Negativity of a single bipartition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativityRecord {
    pub k: usize,
    #[serde(rename = "E_N")]
    pub e_n: f64,
    pub n_tilde_minus: f64,
    pub entangled: bool,
    #[serde(rename = "E_N_bits", skip_serializing_if = "Option::is_none", default)]
    pub e_n_bits: Option<f64>,
}

fn csv_bytes<T: Serialize>(rows: impl IntoIterator<Item = T>) -> csv::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

fn read_csv<T: for<'de> Deserialize<'de>>(input: impl Read) -> csv::Result<Vec<T>> {
    csv::Reader::from_reader(input).deserialize().collect()
}

pub fn hierarchy_csv(rows: &[HierarchyRow]) -> csv::Result<Vec<u8>> {
    csv_bytes(rows.iter().map(|r| HierarchyCsv {
        k: r.k,
        e_n: r.e_n,
        n_tilde_minus: r.n_tilde_minus,
        limit: r.limit,
    }))
}

pub fn read_hierarchy_csv(input: impl Read) -> csv::Result<Vec<HierarchyRow>> {
    let rows: Vec<HierarchyCsv> = read_csv(input)?;
    Ok(rows
        .into_iter()
        .map(|r| HierarchyRow {
            k: r.k,
            e_n: r.e_n,
            n_tilde_minus: r.n_tilde_minus,
            entangled: r.n_tilde_minus < 1.0,
            limit: r.limit,
        })
        .collect())
}

pub fn read_hierarchy_json(input: impl Read) -> serde_json::Result<Vec<HierarchyRow>> {
    serde_json::from_reader(input)
}

/// Wide layout: `b,n,e_1x1,e_1xNm1,e_1xN`.
pub fn scaling_csv(rows: &[ScalingRow]) -> csv::Result<Vec<u8>> {
    csv_bytes(rows)
}

pub fn read_scaling_csv(input: impl Read) -> csv::Result<Vec<ScalingRow>> {
    read_csv(input)
}

pub fn read_scaling_json(input: impl Read) -> serde_json::Result<Vec<ScalingRow>> {
    serde_json::from_reader(input)
}

/// Long layout: `b,n_total,k,E_N,n_tilde_minus`.
pub fn sweep_csv(rows: &[SweepRecord]) -> csv::Result<Vec<u8>> {
    csv_bytes(rows)
}

pub fn read_sweep_csv(input: impl Read) -> csv::Result<Vec<SweepRecord>> {
    read_csv(input)
}

pub fn read_sweep_json(input: impl Read) -> serde_json::Result<Vec<SweepRecord>> {
    serde_json::from_reader(input)
}
