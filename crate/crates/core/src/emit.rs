//! Serialization of results: CSV for scans, a JSON shape for certificates,
//! classifications, walls and searches, and an SVG rendering of scans with
//! wall overlays. Every number in CSV and JSON is an exact integer or
//! rational string; floating point appears only in SVG coordinates.

use num::{BigRational, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::charge::{fmt_rational, ExactComplex, VxVerdict};
use crate::criteria::{
    BoundaryDecomposition, Certificate, ModuliClassification, Region, RegionVerdict,
};
use crate::lattice::MukaiVector;
use crate::oracle::{DestabilizerCandidate, Scan, VerifyOutcome, WallCurve, WallSample};

fn vec_json(v: &MukaiVector) -> Value {
    Value::String(v.to_string())
}

fn opt_vec_json(v: &Option<MukaiVector>) -> Value {
    v.as_ref().map(vec_json).unwrap_or(Value::Null)
}

fn rat_json(q: &BigRational) -> Value {
    Value::String(fmt_rational(q))
}

pub fn certificate_to_json(cert: &Certificate) -> Value {
    json!({
        "theorem": cert.theorem.to_string(),
        "verdict": cert.verdict.to_string(),
        "assumptions": cert.assumptions,
        "hypotheses": cert.hypotheses.iter().map(|h| json!({
            "name": h.name,
            "instance": h.instance,
            "holds": h.holds,
        })).collect::<Vec<_>>(),
        "geometric_chamber": {
            "holds": cert.vx.holds,
            "witness": opt_vec_json(&cert.vx.witness),
        },
        "conclusions": cert.conclusions,
    })
}

pub fn classification_to_json(m: &ModuliClassification) -> Value {
    json!({
        "verdict": m.verdict.to_string(),
        "gcd": m.gcd.to_string(),
        "fine": m.fine,
        "rank_square": m.rank_square,
        "witness": opt_vec_json(&m.witness),
    })
}

pub fn region_to_json(r: &RegionVerdict) -> Value {
    json!({
        "region": r.region.to_string(),
        "inequalities": r.inequalities.iter().map(|h| json!({
            "name": h.name,
            "instance": h.instance,
            "holds": h.holds,
        })).collect::<Vec<_>>(),
        "witness": opt_vec_json(&r.vx_witness),
    })
}

pub fn charge_to_json(z: &ExactComplex, lambda: &BigRational) -> Value {
    json!({
        "re": rat_json(&z.re),
        "im": rat_json(&z.im),
        "lambda": rat_json(lambda),
    })
}

pub fn vx_to_json(v: &VxVerdict) -> Value {
    json!({
        "holds": v.holds,
        "witness": opt_vec_json(&v.witness),
    })
}

pub fn decomposition_to_json(d: &BoundaryDecomposition) -> Value {
    let factors = |fs: &[crate::criteria::BoundaryFactor]| {
        fs.iter()
            .map(|f| {
                json!({
                    "vector": vec_json(&f.vector),
                    "multiplicity": f.multiplicity.to_string(),
                    "shift": f.shift,
                    "sign": f.sign,
                    "label": f.label,
                })
            })
            .collect::<Vec<_>>()
    };
    json!({
        "plus_factors": factors(&d.plus_factors),
        "minus_factors": factors(&d.minus_factors),
        "sign_convention": d.sign_convention,
        "plus_sum": vec_json(&d.plus_sum()),
        "minus_sum": vec_json(&d.minus_sum()),
    })
}

pub fn wall_to_json(wall: &WallCurve, samples: &[WallSample]) -> Value {
    json!({
        "generators": { "a": vec_json(&wall.a), "e": vec_json(&wall.e) },
        "coefficients": {
            "xx": rat_json(&wall.xx),
            "xy": rat_json(&wall.xy),
            "yy": rat_json(&wall.yy),
            "x": rat_json(&wall.cx),
            "y": rat_json(&wall.cy),
            "const": rat_json(&wall.c0),
        },
        "is_line": wall.is_line(),
        "samples": samples.iter().map(|s| json!({
            "x": rat_json(&s.x),
            "y_squared": rat_json(&s.y_squared),
            "y": s.y.as_ref().map(rat_json).unwrap_or(Value::Null),
        })).collect::<Vec<_>>(),
    })
}

pub fn candidates_to_json(cands: &[DestabilizerCandidate], max_rank: u32) -> Value {
    json!({
        "max_rank": max_rank,
        "count": cands.len(),
        "candidates": cands.iter().map(|c| json!({
            "vector": vec_json(&c.vector),
            "n_value": rat_json(&c.n_value),
            "on_wall": c.on_wall,
        })).collect::<Vec<_>>(),
    })
}

pub fn verify_outcome_to_json(out: &VerifyOutcome) -> Value {
    match out {
        VerifyOutcome::NoNumericalDestabilizer { on_wall } => json!({
            "outcome": "no-numerical-destabilizer",
            "on_wall": on_wall.iter().map(|c| vec_json(&c.vector)).collect::<Vec<_>>(),
        }),
        VerifyOutcome::StrictViolator { candidate } => json!({
            "outcome": "falsified",
            "violator": vec_json(&candidate.vector),
            "n_value": rat_json(&candidate.n_value),
        }),
        VerifyOutcome::Unconfirmed { reason } => json!({
            "outcome": "unconfirmed",
            "reason": reason,
        }),
    }
}

/// CSV rows of a scan under the header `x,y,in_VX,region,certificates`.
/// Certificate verdicts join with `;` so the row stays comma-clean.
pub fn scan_to_csv(scan: &Scan) -> String {
    let mut out = String::from("x,y,in_VX,region,certificates\n");
    for cell in &scan.cells {
        let certs = cell
            .certificates
            .iter()
            .map(|(id, v)| format!("{id}:{v}"))
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_rational(&cell.x),
            fmt_rational(&cell.y),
            cell.in_vx,
            cell.region,
            certs
        ));
    }
    out
}

pub fn scan_to_json(scan: &Scan) -> Value {
    json!({
        "vector": vec_json(&scan.vector),
        "cells": scan.cells.iter().map(|cell| json!({
            "x": rat_json(&cell.x),
            "y": rat_json(&cell.y),
            "in_VX": cell.in_vx,
            "region": cell.region.to_string(),
            "witness": opt_vec_json(&cell.vx_witness),
            "certificates": cell.certificates.iter()
                .map(|(id, v)| format!("{id}:{v}"))
                .collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

fn region_fill(region: Region) -> &'static str {
    match region {
        Region::VPlus => "#7fc97f",
        Region::VZero => "#fdc086",
        Region::VMinus => "#80b1d3",
        Region::Outside => "#d9d9d9",
    }
}

fn f(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(0.0)
}

/// Render a scan as an SVG with one cell per grid point and optional wall
/// overlays. Coordinates are floating point here and nowhere else.
pub fn scan_to_svg(scan: &Scan, walls: &[WallCurve]) -> String {
    const SCALE: f64 = 120.0;
    let g = &scan.grid;
    let (x0, x1) = (f(&g.x0), f(&g.x1));
    let (y0, y1) = (f(&g.y0), f(&g.y1));
    let step = f(&g.step);
    let width = (x1 - x0 + step) * SCALE;
    let height = (y1 - y0 + step) * SCALE;
    let px = |x: f64| (x - x0) * SCALE;
    let py = |y: f64| (y1 + step - y) * SCALE;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.1}\" height=\"{height:.1}\" \
         viewBox=\"0 0 {width:.1} {height:.1}\">\n"
    ));
    svg.push_str(&format!(
        "<rect x=\"0\" y=\"0\" width=\"{width:.1}\" height=\"{height:.1}\" fill=\"#ffffff\"/>\n"
    ));
    for cell in &scan.cells {
        let cx = f(&cell.x);
        let cy = f(&cell.y);
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\" \
             fill-opacity=\"0.9\"/>\n",
            px(cx) - 0.5 * step * SCALE,
            py(cy) - 0.5 * step * SCALE,
            step * SCALE,
            step * SCALE,
            region_fill(cell.region),
        ));
    }
    for wall in walls {
        if let Some((center, r_squared)) = wall.circle() {
            if r_squared.is_positive() {
                let c = f(&center);
                let r = f(&r_squared).sqrt();
                // upper semicircle from (c - r, 0) to (c + r, 0)
                svg.push_str(&format!(
                    "<path d=\"M {:.2} {:.2} A {:.2} {:.2} 0 0 1 {:.2} {:.2}\" fill=\"none\" \
                     stroke=\"#333333\" stroke-width=\"1.5\"/>\n",
                    px(c - r),
                    py(0.0),
                    r * SCALE,
                    r * SCALE,
                    px(c + r),
                    py(0.0),
                ));
            }
        } else if !wall.cx.is_zero() {
            let x = f(&(-&wall.c0 / &wall.cx));
            svg.push_str(&format!(
                "<line x1=\"{:.2}\" y1=\"{:.2}\" x2=\"{:.2}\" y2=\"{:.2}\" stroke=\"#333333\" \
                 stroke-width=\"1.5\"/>\n",
                px(x),
                py(y1 + step),
                px(x),
                py(0.0),
            ));
        }
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charge::StabilityPoint;
    use crate::criteria::{certify_a5, Assumptions};
    use crate::lattice::SurfaceContext;
    use crate::oracle::{scan_region, wall_locus, ScanGrid};
    use num::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn csv_has_the_fixed_header_and_one_row_per_cell() {
        let ctx = SurfaceContext::new(3).unwrap();
        let grid = ScanGrid {
            x0: q(0, 1),
            x1: q(1, 1),
            y0: q(1, 1),
            y1: q(2, 1),
            step: q(1, 1),
        };
        let scan = scan_region(&MukaiVector::new(12, 10, 25), &grid, &ctx).unwrap();
        let csv = scan_to_csv(&scan);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,in_VX,region,certificates");
        assert_eq!(lines.len(), 1 + scan.cells.len());
        assert!(lines[1].starts_with("0,1,"));
    }

    #[test]
    fn certificate_json_carries_exact_strings() {
        let ctx = SurfaceContext::new(3).unwrap();
        let sigma = StabilityPoint::new(q(0, 1), q(2, 1)).unwrap();
        let cert = certify_a5(
            &MukaiVector::new(12, 10, 25),
            &sigma,
            &ctx,
            &Assumptions::gieseker(),
        );
        let j = certificate_to_json(&cert);
        assert_eq!(j["theorem"], "A5");
        assert_eq!(j["verdict"], "Stable");
        let hyps = j["hypotheses"].as_array().unwrap();
        assert!(hyps.iter().any(|h| h["name"] == "slope_bound"));
    }

    #[test]
    fn svg_contains_cells_and_wall_overlays() {
        let ctx = SurfaceContext::new(3).unwrap();
        let grid = ScanGrid {
            x0: q(-1, 1),
            x1: q(2, 1),
            y0: q(1, 2),
            y1: q(3, 1),
            step: q(1, 2),
        };
        let scan = scan_region(&MukaiVector::new(12, 10, 25), &grid, &ctx).unwrap();
        let wall =
            wall_locus(&MukaiVector::new(1, 1, 4), &MukaiVector::new(1, 0, 1), &ctx).unwrap();
        let line =
            wall_locus(&MukaiVector::new(1, 0, 1), &MukaiVector::new(0, 0, 1), &ctx).unwrap();
        let svg = scan_to_svg(&scan, &[wall, line]);
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<rect"));
        assert!(svg.contains("<path"));
        assert!(svg.contains("<line"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
