//! Per-shape signatures and a distance between them.
//!
//! A signature gathers five optional parts: geometry of the ground cycles,
//! homology ranks, nerve statistics, closure-finiteness counts and the
//! descriptions of arcs shared between cycles. Everything is derived from the
//! canonical form of the complex, so reordering the input changes nothing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::complex::{Complex, VertexId};
use crate::geometry::{phi, Arc, Element, FeatureVector, GeometryError};
use crate::homology::{h1_basis, Cycle};
use crate::nerve::{ground_set, homology_nerve, leader_cover, NerveError};
use crate::par::{self, Execution};
use crate::proximity::ProximityConfig;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignatureError {
    #[error("signatures were built with different configurations")]
    ConfigMismatch,
    #[error(transparent)]
    Nerve(#[from] NerveError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("invalid signature json: {0}")]
    Json(String),
}

/// Which parts of the signature to compute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Components {
    pub geometry: bool,
    pub ranks: bool,
    pub nerve: bool,
    pub closure: bool,
    pub shared_arcs: bool,
}

impl Default for Components {
    fn default() -> Self {
        Self {
            geometry: true,
            ranks: true,
            nerve: true,
            closure: true,
            shared_arcs: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SignatureConfig {
    pub proximity: ProximityConfig,
    pub components: Components,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ranks {
    pub betti0: usize,
    pub rank_z1: usize,
    pub rank_b1: usize,
    pub rank_h1: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NerveFeatures {
    pub max_face_size: usize,
    pub cluster_count: usize,
    pub largest_cluster: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Signature {
    pub ranks: Option<Ranks>,
    /// Descriptions of the ground cycles, longest first.
    pub cycle_features: Vec<FeatureVector>,
    pub nerve_features: Option<NerveFeatures>,
    /// Descriptions of the maximal arcs shared by two or more ground cycles.
    pub shared_arc_features: Vec<FeatureVector>,
    /// For each shared arc, in the same order, how many ground cycles touch it.
    pub closure_finite_count: Vec<usize>,
    pub config: SignatureConfig,
}

fn cycle_order(a: &FeatureVector, b: &FeatureVector) -> std::cmp::Ordering {
    let key = |f: &FeatureVector, k: &str| f.get(k).unwrap_or(0.0);
    key(b, "length")
        .total_cmp(&key(a, "length"))
        .then(key(b, "enclosed_area").total_cmp(&key(a, "enclosed_area")))
        .then_with(|| a.cmp_lex(b))
}

/// Maximal paths in the edge set shared by two simple cycles, each oriented
/// from its smaller end id.
fn shared_paths(complex: &Complex, a: &Cycle, b: &Cycle) -> Vec<Vec<VertexId>> {
    let shared: Vec<usize> = a.edges().bits().and(b.edges().bits()).ones().collect();
    let mut adj: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
    for &e in &shared {
        let ed = complex.edges()[e];
        let [u, v] = ed.endpoints;
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut used: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    let mut paths = Vec::new();
    let ends: Vec<VertexId> = adj.iter().filter(|(_, n)| n.len() == 1).map(|(&v, _)| v).collect();
    for start in ends {
        let mut path = vec![start];
        let mut cur = start;
        loop {
            let next = adj[&cur]
                .iter()
                .copied()
                .find(|&n| !used.contains(&(cur.min(n), cur.max(n))));
            match next {
                Some(n) => {
                    used.insert((cur.min(n), cur.max(n)));
                    path.push(n);
                    cur = n;
                }
                None => break,
            }
        }
        if path.len() >= 2 {
            paths.push(path);
        }
    }
    // two distinct simple cycles cannot share a closed loop, so every shared
    // component is a path and has been walked
    paths
}

/// Builds the signature of one complex.
pub fn build_signature(complex: &Complex, config: &SignatureConfig) -> Result<Signature, SignatureError> {
    let homology = h1_basis(complex);
    let ground = ground_set(complex, &homology);
    let cycles: Vec<Cycle> = ground.into_iter().map(|g| g.cycle).collect();
    let phi_cfg = &config.proximity.phi;
    let on = &config.components;

    let ranks = on.ranks.then_some(Ranks {
        betti0: homology.betti0,
        rank_z1: homology.rank_z1,
        rank_b1: homology.rank_b1,
        rank_h1: homology.rank_h1,
    });

    let mut cycle_features = Vec::new();
    if on.geometry {
        for c in &cycles {
            cycle_features.push(phi(complex, &Element::Cycle(c.clone()), phi_cfg)?);
        }
        cycle_features.sort_by(cycle_order);
    }

    let nerve_features = if on.nerve {
        let nerve = homology_nerve(&cycles)?;
        let cover = leader_cover(&cycles, complex, &config.proximity)?;
        Some(NerveFeatures {
            max_face_size: nerve.max_face_size(),
            cluster_count: cover.distinct_clusters(),
            largest_cluster: cover.largest_cluster(),
        })
    } else {
        None
    };

    let mut arcs: Vec<(FeatureVector, usize)> = Vec::new();
    if on.shared_arcs || on.closure {
        let mut seen = BTreeSet::new();
        for i in 0..cycles.len() {
            for j in i + 1..cycles.len() {
                for mut path in shared_paths(complex, &cycles[i], &cycles[j]) {
                    if path[0] > path[path.len() - 1] {
                        path.reverse();
                    }
                    if !seen.insert(path.clone()) {
                        continue;
                    }
                    let touching = cycles
                        .iter()
                        .filter(|c| path.iter().any(|v| c.vertex_ids().binary_search(v).is_ok()))
                        .count();
                    let arc = Arc::new(complex, path)?;
                    arcs.push((phi(complex, &Element::Arc(arc), phi_cfg)?, touching));
                }
            }
        }
        arcs.sort_by(|a, b| a.0.cmp_lex(&b.0).then(a.1.cmp(&b.1)));
    }
    let (shared_arc_features, closure_finite_count) = arcs.into_iter().unzip::<_, _, Vec<_>, Vec<_>>();

    Ok(Signature {
        ranks,
        cycle_features,
        nerve_features,
        shared_arc_features: if on.shared_arcs { shared_arc_features } else { vec![] },
        closure_finite_count: if on.closure { closure_finite_count } else { vec![] },
        config: config.clone(),
    })
}

/// Signatures of many complexes, in input order.
pub fn build_signatures(
    complexes: &[Complex],
    config: &SignatureConfig,
    exec: Execution,
) -> Vec<Result<Signature, SignatureError>> {
    par::map(exec, complexes, |k| build_signature(k, config))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DistanceWeights {
    pub rank: f64,
    pub cycle: f64,
    pub nerve: f64,
    pub unmatched: f64,
}

impl Default for DistanceWeights {
    fn default() -> Self {
        Self {
            rank: 10.0,
            cycle: 1.0,
            nerve: 1.0,
            unmatched: 1.0,
        }
    }
}

/// The weighted parts of a signature distance, before summing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct DistanceTerms {
    pub rank: f64,
    pub cycle: f64,
    pub unmatched: f64,
    pub nerve: f64,
}

impl DistanceTerms {
    pub fn total(&self) -> f64 {
        self.rank + self.cycle + self.unmatched + self.nerve
    }
}

fn abs_diff(a: usize, b: usize) -> f64 {
    a.abs_diff(b) as f64
}

pub fn distance_terms(
    a: &Signature,
    b: &Signature,
    weights: &DistanceWeights,
) -> Result<DistanceTerms, SignatureError> {
    if a.config != b.config {
        return Err(SignatureError::ConfigMismatch);
    }
    let mut t = DistanceTerms::default();
    if let (Some(x), Some(y)) = (a.ranks, b.ranks) {
        t.rank = weights.rank * (abs_diff(x.betti0, y.betti0) + abs_diff(x.rank_h1, y.rank_h1));
    }
    // matched in sorted order; each side is sorted by the same rule
    t.cycle = weights.cycle
        * a.cycle_features
            .iter()
            .zip(&b.cycle_features)
            .map(|(x, y)| x.padded_distance(y))
            .sum::<f64>();
    t.unmatched = weights.unmatched * abs_diff(a.cycle_features.len(), b.cycle_features.len());
    if let (Some(x), Some(y)) = (a.nerve_features, b.nerve_features) {
        t.nerve = weights.nerve
            * (abs_diff(x.max_face_size, y.max_face_size)
                + abs_diff(x.cluster_count, y.cluster_count)
                + abs_diff(x.largest_cluster, y.largest_cluster));
    }
    Ok(t)
}

/// Weighted difference of rank, cycle-geometry and nerve parts.
pub fn signature_distance(
    a: &Signature,
    b: &Signature,
    weights: &DistanceWeights,
) -> Result<f64, SignatureError> {
    Ok(distance_terms(a, b, weights)?.total())
}

/// All pairwise distances, row by row.
pub fn distance_matrix(
    signatures: &[Signature],
    weights: &DistanceWeights,
    exec: Execution,
) -> Result<Vec<Vec<f64>>, SignatureError> {
    par::map(exec, signatures, |a| {
        signatures
            .iter()
            .map(|b| signature_distance(a, b, weights))
            .collect::<Result<Vec<_>, _>>()
    })
    .into_iter()
    .collect()
}

/// Rounds to nine significant digits, with `-0` written as `0`.
fn round_sig(x: f64) -> f64 {
    let r: f64 = format!("{x:.8e}").parse().expect("formatted float parses");
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |n: usize| "  ".repeat(n);
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => write!(out, "{u}").unwrap(),
            (_, Some(i), _) => write!(out, "{i}").unwrap(),
            (_, _, Some(f)) => write!(out, "{:?}", round_sig(f)).unwrap(),
            _ => unreachable!("json numbers are u64, i64 or f64"),
        },
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            let sorted: BTreeMap<&String, &Value> = map.iter().collect();
            out.push_str("{\n");
            for (i, (k, item)) in sorted.iter().enumerate() {
                out.push_str(&pad(indent + 1));
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, item, indent + 1);
                out.push_str(if i + 1 < sorted.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(indent));
            out.push('}');
        }
    }
}

/// Byte-deterministic JSON: sorted keys, reals at nine significant digits,
/// two-space indentation and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("signature types serialize");
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    out
}

impl Signature {
    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_json(text: &str) -> Result<Signature, SignatureError> {
        serde_json::from_str(text).map_err(|e| SignatureError::Json(e.to_string()))
    }

    /// True iff every real component is finite.
    pub fn is_finite(&self) -> bool {
        self.cycle_features
            .iter()
            .chain(&self.shared_arc_features)
            .all(FeatureVector::is_finite)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn sig(k: &Complex) -> Signature {
        build_signature(k, &SignatureConfig::default()).unwrap()
    }

    #[test]
    fn tri_has_one_contour_and_no_h1() {
        let s = sig(&fixtures::tri());
        let r = s.ranks.unwrap();
        assert_eq!((r.betti0, r.rank_h1), (1, 0));
        assert_eq!(s.cycle_features.len(), 1);
        assert_eq!(s.cycle_features[0].get("edge_count"), Some(3.0));
        assert!(s.shared_arc_features.is_empty());
    }

    #[test]
    fn fig2_shares_e3() {
        let s = sig(&fixtures::fig2());
        let r = s.ranks.unwrap();
        assert_eq!((r.betti0, r.rank_z1, r.rank_b1, r.rank_h1), (1, 5, 4, 1));
        // contour pentagon and hole triangle
        assert_eq!(s.cycle_features.len(), 2);
        assert_eq!(s.shared_arc_features.len(), 1);
        // |v3 v4| = 2
        assert_eq!(s.shared_arc_features[0].get("arc_length"), Some(2.0));
        assert_eq!(s.closure_finite_count, vec![2]);
        assert!(s.is_finite());
    }

    #[test]
    fn distance_to_self_is_zero() {
        let s = sig(&fixtures::fig2());
        assert_eq!(signature_distance(&s, &s, &DistanceWeights::default()).unwrap(), 0.0);
    }

    #[test]
    fn tri_vs_fig2_is_mostly_rank() {
        let (a, b) = (sig(&fixtures::tri()), sig(&fixtures::fig2()));
        let t = distance_terms(&a, &b, &DistanceWeights::default()).unwrap();
        assert_eq!(t.rank, 10.0);
        assert!(t.rank > t.cycle + t.unmatched + t.nerve);
        let back = signature_distance(&b, &a, &DistanceWeights::default()).unwrap();
        assert_eq!(t.total(), back);
    }

    #[test]
    fn config_mismatch() {
        let a = sig(&fixtures::tri());
        let mut cfg = SignatureConfig::default();
        cfg.proximity.epsilon = 0.1;
        let b = build_signature(&fixtures::tri(), &cfg).unwrap();
        assert_eq!(
            signature_distance(&a, &b, &DistanceWeights::default()),
            Err(SignatureError::ConfigMismatch)
        );
    }

    #[test]
    fn suppressed_components_are_empty() {
        let cfg = SignatureConfig {
            components: Components {
                geometry: false,
                ranks: false,
                nerve: false,
                closure: false,
                shared_arcs: false,
            },
            ..Default::default()
        };
        let s = build_signature(&fixtures::fig2(), &cfg).unwrap();
        assert!(s.ranks.is_none() && s.nerve_features.is_none());
        assert!(s.cycle_features.is_empty() && s.shared_arc_features.is_empty());
        assert!(s.closure_finite_count.is_empty());
    }

    #[test]
    fn json_round_trip_is_stable() {
        let s = sig(&fixtures::fig2());
        let text = s.to_json();
        assert!(text.ends_with("}\n"));
        let back = Signature::from_json(&text).unwrap();
        assert_eq!(back.to_json(), text);
    }

    #[test]
    fn nine_significant_digits() {
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333);
        assert_eq!(round_sig(-0.0).to_bits(), 0.0f64.to_bits());
        assert_eq!(round_sig(123456789012.0), 123456789000.0);
        let text = to_canonical_json(&serde_json::json!({"b": 2.0, "a": [0.1, -0.0]}));
        assert_eq!(text, "{\n  \"a\": [\n    0.1,\n    0.0\n  ],\n  \"b\": 2.0\n}\n");
    }

    #[test]
    fn batch_strategies_agree() {
        let ks = vec![fixtures::tri(), fixtures::fig2(), fixtures::twohole()];
        let cfg = SignatureConfig::default();
        let seq: Vec<_> = build_signatures(&ks, &cfg, Execution::Sequential)
            .into_iter()
            .map(Result::unwrap)
            .collect();
        let par: Vec<_> = build_signatures(&ks, &cfg, Execution::Parallel)
            .into_iter()
            .map(Result::unwrap)
            .collect();
        assert_eq!(seq, par);
        let w = DistanceWeights::default();
        assert_eq!(
            distance_matrix(&seq, &w, Execution::Sequential).unwrap(),
            distance_matrix(&par, &w, Execution::Parallel).unwrap()
        );
    }
}
