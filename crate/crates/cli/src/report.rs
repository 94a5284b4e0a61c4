//! JSON report assembly. All rationals are echoed exactly; quantities that
//! are typically non-integral additionally carry an 8-digit decimal
//! rendering.

use serde_json::{json, Value};

use secfan_core::error::Error;
use secfan_core::exactgeom::QVector;
use secfan_core::jsonio::rational_to_string;
use secfan_core::metrics::{self, DissimilarityMap, RayOrbit, SplitDecomposition};
use secfan_core::secfan::{self, CoarsestCatalog, TriangulationCatalog};
use secfan_core::subdivide::{self, DualGraph, Subdivision, TightSpan};

use crate::Lifting;

fn qvec(v: &QVector) -> Value {
    Value::Array(v.iter().map(|x| Value::String(rational_to_string(x))).collect())
}

fn histogram(h: &std::collections::BTreeMap<usize, usize>) -> Value {
    Value::Object(
        h.iter()
            .map(|(k, v)| (k.to_string(), Value::from(*v)))
            .collect(),
    )
}

pub fn subdivision_report(l: &Lifting, checked: bool) -> Result<Value, Error> {
    let config = &l.config;
    let s = subdivide::regular_subdivision(config, &l.heights)?;
    if checked {
        subdivide::verify_subdivision(config, &s)?;
    }
    let g = subdivide::dual_graph(config, &s)?;
    let coarsest = match secfan::is_coarsest(config, &l.heights) {
        Ok(b) => Value::from(b),
        Err(Error::TrivialSubdivision) => Value::String("trivial".into()),
        Err(e) => return Err(e),
    };
    let (is_multi, l_param) = subdivide::is_multisplit(config, &s)?;
    let spec = config.hypersimplex_spec();
    let pluecker = match spec {
        Some(_) => Value::from(subdivide::is_tropical_pluecker(config, &l.heights)?),
        None => Value::Null,
    };
    let volume = secfan::total_volume(config)?;
    let mut report = json!({
        "lifting": l.source,
        "spread": s.spread(),
        "cells": s.cells,
        "is_triangulation": s.is_triangulation(config),
        "volume": rational_to_string(&volume),
        "dual_graph": {
            "edges": g.edges.len(),
            "connected": g.is_connected(),
            "complete": g.is_complete(),
        },
        "is_split": subdivide::is_split(&s),
        "coarsest_by_complete_dual": subdivide::is_coarsest_by_complete_dual(config, &s)?,
        "is_coarsest": coarsest,
        "all_cells_matroidal": subdivide::all_cells_matroidal(config, &s)?,
        "tropical_pluecker": pluecker,
        "multisplit": { "is_multisplit": is_multi, "l": l_param },
    });
    if let Some(spec) = spec {
        report["k"] = Value::from(spec.k);
        report["n"] = Value::from(spec.n);
    }
    if let Some(d) = &l.metric {
        report["is_pseudometric"] = Value::from(d.is_pseudometric());
        report["is_metric"] = Value::from(d.is_metric());
    }
    Ok(report)
}

pub fn dual_graph_dot(s: &Subdivision, g: &DualGraph) -> String {
    let mut out = String::from("graph dual {\n  node [shape=circle];\n");
    for (i, cell) in s.cells.iter().enumerate() {
        out.push_str(&format!("  c{i} [label=\"c{i}\\n{} pts\"];\n", cell.len()));
    }
    for (a, b, _) in &g.edges {
        out.push_str(&format!("  c{a} -- c{b};\n"));
    }
    out.push_str("}\n");
    out
}

pub fn tight_span_report(l: &Lifting, ts: &TightSpan) -> Result<Value, Error> {
    let vertices: Vec<Value> = ts
        .envelope
        .vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            json!({
                "coords": qvec(v),
                "dual_cell": ts.envelope.dual_cell(i),
            })
        })
        .collect();
    Ok(json!({
        "lifting": l.source,
        "vertices": vertices,
        "edges": ts.edges(),
        "face_counts": ts.face_counts(),
        "is_simplex": ts.is_simplex(),
        "max_dim_computed": ts.max_dim_computed,
    }))
}

pub fn seccone_report(l: &Lifting) -> Result<Value, Error> {
    let config = &l.config;
    let s = subdivide::regular_subdivision(config, &l.heights)?;
    let v = secfan::secondary_cone_rays(config, &s)?;
    let n = config.hypersimplex_spec().map(|sp| sp.n);
    let rays: Vec<Value> = secfan::secondary_rays(config, &s)?
        .into_iter()
        .map(|(ray, sub)| {
            let class = match (n, config.hypersimplex_spec()) {
                (Some(n), Some(sp)) if sp.k == 2 => {
                    let metric_side: QVector = ray.iter().map(|x| -x.clone()).collect();
                    Some(format!("{}", metrics::classify_ray(n, &metric_side)?))
                }
                _ => None,
            };
            Ok(json!({
                "ray": qvec(&ray),
                "spread": sub.spread(),
                "class": class,
            }))
        })
        .collect::<Result<_, Error>>()?;
    Ok(json!({
        "lifting": l.source,
        "spread": s.spread(),
        "dim": v.dim(),
        "lineality_dim": v.lineality_dim(),
        "pointed_dim": v.dim() - v.lineality_dim(),
        "simplicial": v.is_simplicial(),
        "rays": rays,
    }))
}

pub fn enumeration_report(
    catalog: &TriangulationCatalog,
    coarsest: Option<&CoarsestCatalog>,
) -> Result<Value, Error> {
    let mut report = json!({
        "status": "complete",
        "triangulations": catalog,
        "orbits": catalog.orbits(),
        "total": catalog.total,
        "nonregular_orbits": catalog.nonregular_orbits,
        "triangulation_spread_histogram": histogram(&catalog.spread_histogram()),
    });
    if let Some(c) = coarsest {
        report["coarsest"] = coarsest_report(c)?;
    }
    Ok(report)
}

pub fn coarsest_report(c: &CoarsestCatalog) -> Result<Value, Error> {
    Ok(json!({
        "orbits": c.orbits(),
        "total_rays": c.orbit_sizes.iter().sum::<u64>(),
        "spread_histogram": histogram(&c.spread_histogram()),
        "catalog": c,
    }))
}

pub fn decomposition_report(
    d: &DissimilarityMap,
    dec: &SplitDecomposition,
) -> Result<Value, Error> {
    let splits: Vec<Value> = dec
        .splits
        .iter()
        .map(|c| {
            json!({
                "part": c.part.iter().map(|i| i + 1).collect::<Vec<_>>(),
                "coefficient": rational_to_string(&c.coefficient),
                "decimal": metrics::decimal_string(&c.coefficient, 8),
            })
        })
        .collect();
    let rays: Vec<Value> = dec
        .rays
        .iter()
        .map(|r| {
            json!({
                "metric_rep": qvec(&r.metric_rep),
                "class": format!("{}", r.class),
                "spread": r.spread,
                "coherency": rational_to_string(&r.coherency),
                "coherency_decimal": metrics::decimal_string(&r.coherency, 8),
            })
        })
        .collect();
    // the split-prime part written back on the metric side
    let prime_metric: QVector = dec.prime_part.values.iter().map(|x| -x.clone()).collect();
    let n = d.n();
    let mut matrix: Vec<Vec<String>> = vec![vec!["0".into(); n]; n];
    for (idx, (i, j)) in metrics::pairs(n).into_iter().enumerate() {
        let s = metrics::decimal_string(&prime_metric[idx], 8);
        matrix[i][j] = s.clone();
        matrix[j][i] = s;
    }
    Ok(json!({
        "n": n,
        "is_pseudometric": d.is_pseudometric(),
        "splits": splits,
        "rays": rays,
        "prime_part_heights": qvec(&dec.prime_part.values),
        "prime_part_metric": qvec(&prime_metric),
        "prime_part_matrix_decimal": matrix,
    }))
}

pub fn metric_fan_report(
    n: usize,
    vcone: &secfan_core::exactgeom::VCone,
    mc_orbits: &[RayOrbit],
    mf_orbits: Option<&[RayOrbit]>,
) -> Result<Value, Error> {
    let orbit_json = |orbits: &[RayOrbit]| -> Vec<Value> {
        orbits
            .iter()
            .map(|o| {
                json!({
                    "rep": qvec(&o.rep),
                    "orbit_size": o.orbit_size,
                    "class": format!("{}", o.class),
                })
            })
            .collect()
    };
    let mut report = json!({
        "n": n,
        "metric_cone": {
            "rays": vcone.rays.len(),
            "orbits": mc_orbits.len(),
            "orbit_reps": orbit_json(mc_orbits),
        },
    });
    if let Some(mf) = mf_orbits {
        report["metric_fan"] = json!({
            "orbits": mf.len(),
            "orbit_reps": orbit_json(mf),
        });
    }
    Ok(report)
}
