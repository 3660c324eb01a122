//! SVG picture of the moment cross-section `{R . v = 1}`.

use std::fmt::Write;

use crate::cone::GoodCone;
use crate::error::{Error, Result};
use crate::reeb::{is_admissible, isotropy_profile, moment_polygon, ReebVector};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// Chart coordinates: the slice projected by dropping the coordinate where
/// `|R|` is largest (lowest index on ties).
fn chart(r: &ReebVector) -> (usize, usize) {
    let vals: Vec<f64> = r.value().iter().map(|x| x.to_f64().abs()).collect();
    let mut drop = 0;
    for i in 1..3 {
        if vals[i] > vals[drop] {
            drop = i;
        }
    }
    match drop {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Face `i` runs from vertex `i - 1` to vertex `i`. Faces are labeled with
/// their index and, for rank-2 rays, their k-value; flat faces are drawn thick
/// and red.
pub fn render_svg(cone: &GoodCone, r: &ReebVector) -> Result<String> {
    if !is_admissible(cone, r)? {
        return Err(Error::Inadmissible);
    }
    let poly = moment_polygon(cone, r)?;
    let profile = if r.rank() == 2 { Some(isotropy_profile(cone, r)?) } else { None };
    let (a, b) = chart(r);
    let pts: Vec<(f64, f64)> = poly.vertices.iter().map(|p| (p[a].to_f64(), p[b].to_f64())).collect();

    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0);
    let s = if span > 0.0 { SIZE / span } else { 1.0 };
    let screen: Vec<(f64, f64)> = pts.iter().map(|&(x, y)| (MARGIN + (x - x0) * s, MARGIN + (y1 - y) * s)).collect();
    let (cx, cy) = screen.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let (cx, cy) = (cx / screen.len() as f64, cy / screen.len() as f64);

    let full = SIZE + 2.0 * MARGIN;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{full:.0}\" height=\"{full:.0}\" viewBox=\"0 0 {full:.0} {full:.0}\">"
    );
    let points: Vec<String> = screen.iter().map(|(x, y)| format!("{x:.4},{y:.4}")).collect();
    let _ = writeln!(out, "<polygon points=\"{}\" fill=\"#eef2f8\" stroke=\"none\"/>", points.join(" "));
    let m = screen.len();
    for i in 0..m {
        let (p, q) = (screen[(i + m - 1) % m], screen[i]);
        let flat = profile.as_ref().is_some_and(|pr| pr.flats.contains(&i));
        let (color, width) = if flat { ("#c0392b", 3) } else { ("#333333", 1) };
        let _ = writeln!(
            out,
            "<line class=\"face{}\" x1=\"{:.4}\" y1=\"{:.4}\" x2=\"{:.4}\" y2=\"{:.4}\" stroke=\"{color}\" stroke-width=\"{width}\"/>",
            if flat { " flat" } else { "" },
            p.0,
            p.1,
            q.0,
            q.1
        );
        // label slightly outside the midpoint
        let (mx, my) = ((p.0 + q.0) / 2.0, (p.1 + q.1) / 2.0);
        let (dx, dy) = (mx - cx, my - cy);
        let len = (dx * dx + dy * dy).sqrt().max(1e-9);
        let (lx, ly) = (mx + 14.0 * dx / len, my + 14.0 * dy / len);
        let label = match &profile {
            Some(pr) => format!("F{i} k={}", pr.k[i]),
            None => format!("F{i}"),
        };
        let _ = writeln!(
            out,
            "<text x=\"{lx:.4}\" y=\"{ly:.4}\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">{label}</text>"
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
