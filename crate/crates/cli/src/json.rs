//! JSON forms of maps, interval sets and reports.
//!
//! A map is the array of its breakpoints, `[["0","0"],["1/2^1","1/2^2"],…]`,
//! every number in dyadic text form. Words are DSL strings.

use serde_json::{json, Value};
use thompson_core::dsl;
use thompson_core::interval::{format_point, parse_point};
use thompson_core::oscillation::{CellStatus, Classification};
use thompson_core::solver::{Route, SystemWitness, Witness};
use thompson_core::{Dyadic, DyadicInterval, Error, IntervalSet, PLMap, Result, Word};

pub fn map_to_json(f: &PLMap) -> Value {
    Value::Array(f.breakpoints().iter().map(|(x, y)| json!([x.to_string(), y.to_string()])).collect())
}

fn bad(msg: &str) -> Error {
    Error::Parse { position: 0, message: msg.to_string() }
}

pub fn map_from_json(v: &Value) -> Result<PLMap> {
    let pairs = v.as_array().ok_or_else(|| bad("a map is an array of breakpoint pairs"))?;
    let mut bps = Vec::with_capacity(pairs.len());
    for p in pairs {
        let pair = p.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("a breakpoint is a pair"))?;
        let coord = |c: &Value| -> Result<Dyadic> {
            match c {
                Value::String(s) => s.parse(),
                Value::Number(n) => n.to_string().parse(),
                _ => Err(bad("breakpoint coordinates are strings")),
            }
        };
        bps.push((coord(&pair[0])?, coord(&pair[1])?));
    }
    PLMap::from_breakpoints(bps)
}

pub fn set_to_json(s: &IntervalSet) -> Value {
    Value::Array(s.intervals().iter().map(|i| json!([format_point(&i.lo), format_point(&i.hi)])).collect())
}

pub fn set_from_json(v: &Value) -> Result<IntervalSet> {
    let items = v.as_array().ok_or_else(|| bad("an interval set is an array of pairs"))?;
    let mut out = IntervalSet::empty();
    for item in items {
        let pair = item.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("an interval is a pair"))?;
        let lo = parse_point(pair[0].as_str().ok_or_else(|| bad("endpoints are strings"))?)?;
        let hi = parse_point(pair[1].as_str().ok_or_else(|| bad("endpoints are strings"))?)?;
        out = out.union(&IntervalSet::from_interval(lo, hi));
    }
    Ok(out)
}

pub fn interval_to_json(i: &DyadicInterval) -> Value {
    Value::String(i.to_string())
}

pub fn word_to_json(w: &Word) -> Value {
    Value::String(dsl::format(w))
}

fn path_to_json(path: &[Vec<bool>]) -> Value {
    Value::Array(
        path.iter()
            .map(|eps| Value::String(eps.iter().map(|&b| if b { '1' } else { '0' }).collect()))
            .collect(),
    )
}

pub fn classification_to_json(c: &Classification) -> Value {
    let cells: Vec<Value> = c
        .cells
        .iter()
        .map(|cell| {
            let status = match cell.status {
                CellStatus::Trivial => "trivial",
                CellStatus::Oscillating => "oscillating",
                CellStatus::Refined => "refined",
                CellStatus::Dropped => "dropped",
            };
            json!({
                "depth": cell.depth,
                "path": path_to_json(&cell.path),
                "region": set_to_json(&cell.region),
                "word": word_to_json(&cell.word),
                "status": status,
            })
        })
        .collect();
    let witnesses: Vec<Value> = c
        .witness_cells
        .iter()
        .map(|w| {
            json!({
                "path": path_to_json(&w.path),
                "region": set_to_json(&w.region),
                "word": word_to_json(&w.word),
                "word_oscillation_set": set_to_json(&w.word_oscillation_set),
                "restricted": set_to_json(&w.restricted),
            })
        })
        .collect();
    json!({
        "verdict": format!("{:?}", c.verdict),
        "oscillation_set": set_to_json(&c.oscillation_set),
        "depth": c.depth,
        "constants_product": map_to_json(&c.constants_product),
        "product_support": set_to_json(&c.product_support),
        "witness_cells": witnesses,
        "cells": cells,
    })
}

pub fn witness_to_json(w: &Witness) -> Value {
    json!({
        "tuple": w.tuple.iter().map(map_to_json).collect::<Vec<_>>(),
        "solved": word_to_json(&w.solved),
        "region": interval_to_json(&w.region),
        "point": w.point.to_string(),
        "trace": w.trace.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "corrections": w.corrections.len(),
    })
}

pub fn system_to_json(s: &SystemWitness) -> Value {
    let balls: Vec<Value> = s
        .balls
        .iter()
        .map(|b| {
            let route = match &b.route {
                Route::ConstantsProduct => json!("constants-product"),
                Route::Oscillating => json!("oscillating"),
                Route::AlmostOscillating { cell, derived } => {
                    json!({"cell": set_to_json(cell), "derived": word_to_json(derived)})
                }
            };
            json!({"interval": interval_to_json(&b.interval), "footprint": set_to_json(&b.footprint), "route": route})
        })
        .collect();
    json!({"tuple": s.tuple.iter().map(map_to_json).collect::<Vec<_>>(), "balls": balls})
}
