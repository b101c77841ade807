//! File formats of the CLI.
//!
//! A net file is `{"class": {"degree": d, "mults": [...]}, "config": {...}}`
//! where the configuration block is optional: absent, the points are taken
//! proper and in general position with ids `0..n`.

use anyhow::Context;
use serde::Deserialize;

use birat_surf::factorization::FactorizationTrace;
use birat_surf::fibration::FibreMatrix;
use birat_surf::{DivisorClass, PointConfig};

#[derive(Deserialize)]
struct ClassJson {
    degree: i64,
    mults: Vec<i64>,
}

#[derive(Deserialize)]
struct NetJson {
    class: ClassJson,
    #[serde(default)]
    config: Option<PointConfig>,
}

pub fn load_net(path: &str) -> anyhow::Result<(PointConfig, DivisorClass)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let raw: NetJson = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
    let config = raw
        .config
        .unwrap_or_else(|| PointConfig::proper_points(raw.class.mults.len()));
    let class = DivisorClass::over(&config, raw.class.degree, raw.class.mults)
        .with_context(|| format!("binding the class of {path} to its configuration"))?;
    Ok((config, class))
}

pub fn net_json(config: &PointConfig, class: &DivisorClass) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(&serde_json::json!({
        "class": class,
        "config": config,
    }))?)
}

#[derive(Deserialize)]
struct MatrixJson {
    gram: Vec<Vec<i64>>,
    weights: Vec<i64>,
}

pub fn load_matrix(path: &str) -> anyhow::Result<FibreMatrix> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let raw: MatrixJson = serde_json::from_str(&text).with_context(|| format!("parsing {path}"))?;
    Ok(FibreMatrix::new(raw.gram, raw.weights)?)
}

pub fn load_invariants(path: &str) -> anyhow::Result<birat_surf::classifier::SurfaceInvariants> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {path}"))
}

pub fn factor_json(trace: &FactorizationTrace) -> anyhow::Result<String> {
    let steps: Vec<serde_json::Value> = trace
        .steps
        .iter()
        .map(|s| {
            serde_json::json!({
                "case": s.case,
                "base": s.map.base,
                "kind": s.map.kind,
                "net": s.net_after.cls,
                "simplicity": s.simplicity_after,
            })
        })
        .collect();
    Ok(serde_json::to_string_pretty(&serde_json::json!({
        "initial_simplicity": trace.initial_simplicity,
        "steps": steps,
        "terminal": trace.terminal,
    }))?)
}
