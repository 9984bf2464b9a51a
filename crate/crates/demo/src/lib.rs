//! WebAssembly entry points for the browser demo. Each returns a JSON
//! string; the plain functions are usable natively for testing.

use serde_json::json;
use wasm_bindgen::prelude::*;

use tmgraph::bounds::{bound_report, crossing_lower_bound, LowerBound};
use tmgraph::constructions::{empty_lens_gadget, separated_arc_construction, Family};
use tmgraph::drawing::{Drawing, LensKind, LensOptions};
use tmgraph::io::{render_svg, SvgOptions};
use tmgraph::styles::Style;
use tmgraph::transforms::{planarize, reroute_empty_lens_step, RerouteOutcome};

/// Largest arc family the page offers; larger ones take seconds.
pub const MAX_ARC_N: usize = 6;

fn summary(d: &Drawing) -> Result<serde_json::Value, String> {
    let cr = d.crossing_number().map_err(|e| e.to_string())?;
    let lenses = d.empty_lenses().map_err(|e| e.to_string())?.len();
    let separated = Style::Separated.holds(d).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": d.num_vertices(),
        "e": d.num_edges(),
        "cr": cr,
        "empty_lenses": lenses,
        "separated": separated,
        "svg": render_svg(d, &SvgOptions::full()),
    }))
}

/// The extremal separated arc family on `n` vertices with its bound report.
pub fn arc_family_json(n: usize, resolution: usize) -> Result<String, String> {
    if !(3..=MAX_ARC_N).contains(&n) {
        return Err(format!("n must be between 3 and {MAX_ARC_N}"));
    }
    let d = separated_arc_construction(n, resolution.max(2)).map_err(|e| e.to_string())?;
    let mut out = summary(&d)?;
    let params = Style::Separated.params(None).map_err(|e| e.to_string())?;
    let report = bound_report(d.num_vertices(), d.num_edges(), out["cr"].as_u64().unwrap_or(0) as usize, &params)
        .map_err(|e| e.to_string())?;
    out["bound"] = serde_json::to_value(&report).map_err(|e| e.to_string())?;
    Ok(out.to_string())
}

/// Sampled lower bound `cr >= alpha e^(x+2)/n^(x+1)` over `e` for fixed
/// `n`, for one style name (`m` is used by the multiplicity style).
pub fn bound_curve_json(style: &str, m: usize, n: usize, e_max: usize, samples: usize) -> Result<String, String> {
    let s = Style::from_parts(style, Some(m.max(1)), Some(1)).map_err(|e| e.to_string())?;
    let params = s.params(Some(tmgraph::geometry::int(1))).map_err(|e| e.to_string())?;
    let samples = samples.clamp(2, 2000);
    let mut points = Vec::with_capacity(samples);
    for k in 0..samples {
        let e = 1 + (e_max.saturating_sub(1)) * k / (samples - 1);
        let b = match crossing_lower_bound(n, e, &params).map_err(|e| e.to_string())? {
            LowerBound::Bound(v) => Some(v),
            LowerBound::NotApplicable => None,
        };
        points.push(json!({"e": e, "bound": b}));
    }
    let report = bound_report(n, e_max, 0, &params).map_err(|e| e.to_string())?;
    Ok(json!({
        "style": s.to_string(),
        "n": n,
        "threshold": report.threshold.to_string(),
        "alpha": report.alpha,
        "beta": report.beta,
        "points": points,
    })
    .to_string())
}

/// Frames of rerouting a lens gadget to a fixpoint, then planarizing.
pub fn reroute_frames_json(gadget: &str) -> Result<String, String> {
    let family: Family = gadget.parse().map_err(|e: tmgraph::constructions::ConstructionError| e.to_string())?;
    let mut d = match family {
        Family::Gadget(kind) => empty_lens_gadget(kind),
        Family::SeparatedGadget => tmgraph::constructions::separated_lens_gadget(),
        _ => return Err(format!("{gadget} is not a lens gadget")),
    };
    let mut frames = Vec::new();
    let mut label = "input".to_string();
    loop {
        let mut f = summary(&d)?;
        f["label"] = json!(label);
        frames.push(f);
        if frames.len() > 64 {
            return Err("too many rerouting steps".into());
        }
        match reroute_empty_lens_step(&d, LensOptions::default()).map_err(|e| e.to_string())? {
            RerouteOutcome::Changed(next) => {
                label = format!("reroute step {}", frames.len());
                d = next;
            }
            RerouteOutcome::NoEmptyLens => break,
        }
    }
    let p = planarize(&d).map_err(|e| e.to_string())?;
    let mut f = summary(&p)?;
    f["label"] = json!("planarized");
    frames.push(f);
    Ok(serde_json::Value::Array(frames).to_string())
}

/// Gadget names accepted by [`reroute_frames`].
pub fn gadget_names() -> Vec<&'static str> {
    vec![
        Family::Gadget(LensKind::BetweenCrossings).name(),
        Family::Gadget(LensKind::EndpointToCrossing).name(),
        Family::Gadget(LensKind::FullParallelPair).name(),
        Family::SeparatedGadget.name(),
    ]
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn arc_family(n: usize, resolution: usize) -> Result<String, JsError> {
    js(arc_family_json(n, resolution))
}

#[wasm_bindgen]
pub fn bound_curve(style: &str, m: usize, n: usize, e_max: usize, samples: usize) -> Result<String, JsError> {
    js(bound_curve_json(style, m, n, e_max, samples))
}

#[wasm_bindgen]
pub fn reroute_frames(gadget: &str) -> Result<String, JsError> {
    js(reroute_frames_json(gadget))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arc_family_has_expected_edges() {
        let v: serde_json::Value = serde_json::from_str(&arc_family_json(4, 4).unwrap()).unwrap();
        assert_eq!(v["e"], 12);
        assert_eq!(v["separated"], true);
        assert_eq!(v["svg"].as_str().unwrap().matches("class=\"edge\"").count(), 12);
        assert!(arc_family_json(9, 4).is_err());
    }

    #[test]
    fn bound_curve_starts_inapplicable() {
        let v: serde_json::Value = serde_json::from_str(&bound_curve_json("separated", 1, 10, 200, 5).unwrap()).unwrap();
        let pts = v["points"].as_array().unwrap();
        assert_eq!(pts.len(), 5);
        assert!(pts[0]["bound"].is_null());
        assert!(pts[4]["bound"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn reroute_frames_end_planar() {
        for g in gadget_names() {
            let v: serde_json::Value = serde_json::from_str(&reroute_frames_json(g).unwrap()).unwrap();
            let frames = v.as_array().unwrap();
            assert_eq!(frames.last().unwrap()["cr"], 0, "{g}");
            assert_eq!(frames.last().unwrap()["label"], "planarized");
        }
        assert!(reroute_frames_json("random").is_err());
    }
}
