//! Reeb rays, moment cross-sections and the rank-2 isotropy profile.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::cone::GoodCone;
use crate::error::{Error, Result};
use crate::exactnum::{
    check_discriminant, det3, det3_quad, plane_lattice_basis, qv3, qv3_from_int, rational_direction, Mat3,
    Quad, QV3, V3,
};
use crate::json;

/// Default box radius for [`choose_transverse_circle`].
pub const DEFAULT_RADIUS: u32 = 32;

/// `R = p + sqrt(d) q` with rational `p`, `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReebVector {
    p: [BigRational; 3],
    q: [BigRational; 3],
    d: u64,
}

fn rat_cross(a: &[BigRational; 3], b: &[BigRational; 3]) -> [BigRational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

fn mat_rat(u: &Mat3, v: &[BigRational; 3]) -> [BigRational; 3] {
    [0, 1, 2].map(|r| {
        let row = u.row(r);
        (0..3).fold(BigRational::zero(), |acc, j| acc + &v[j] * BigRational::from_integer(row.0[j].clone()))
    })
}

impl ReebVector {
    pub fn new(p: [BigRational; 3], q: [BigRational; 3], d: u64) -> Result<ReebVector> {
        check_discriminant(d)?;
        if p.iter().chain(q.iter()).all(Zero::is_zero) {
            return Err(Error::Degenerate("Reeb vector is zero".into()));
        }
        Ok(ReebVector { p, q, d })
    }

    pub fn from_ints(p: &V3, q: &V3, d: u64) -> Result<ReebVector> {
        ReebVector::new(p.to_rational(), q.to_rational(), d)
    }

    pub fn p(&self) -> &[BigRational; 3] {
        &self.p
    }

    pub fn q(&self) -> &[BigRational; 3] {
        &self.q
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn value(&self) -> QV3 {
        qv3(&self.p, &self.q, self.d)
    }

    /// `R . v`.
    pub fn pair(&self, v: &V3) -> Quad {
        v.dot_quad(&self.value())
    }

    /// 1 when `R` is a real multiple of an integer vector, else 2.
    pub fn rank(&self) -> u8 {
        if rat_cross(&self.p, &self.q).iter().all(Zero::is_zero) {
            1
        } else {
            2
        }
    }

    /// Image under `u` acting on the Lie algebra (the same action as on normals).
    pub fn transform(&self, u: &Mat3) -> ReebVector {
        ReebVector { p: mat_rat(u, &self.p), q: mat_rat(u, &self.q), d: self.d }
    }

    pub fn negated(&self) -> ReebVector {
        ReebVector { p: self.p.clone().map(|x| -x), q: self.q.clone().map(|x| -x), d: self.d }
    }

    pub fn to_json(&self) -> Value {
        json!({"p": json::rat3(&self.p), "q": json::rat3(&self.q), "d": self.d})
    }

    pub fn from_json(v: &Value) -> Result<ReebVector> {
        let p = json::parse_rat3(v.get("p").ok_or_else(|| Error::Parse("reeb lacks \"p\"".into()))?)?;
        let q = match v.get("q") {
            Some(q) => json::parse_rat3(q)?,
            None => [BigRational::zero(), BigRational::zero(), BigRational::zero()],
        };
        let d = match v.get("d") {
            Some(d) => d.as_u64().ok_or_else(|| Error::Parse("\"d\" must be a positive integer".into()))?,
            None => crate::exactnum::DEFAULT_D,
        };
        ReebVector::new(p, q, d)
    }
}

pub fn rank_of(r: &ReebVector) -> u8 {
    r.rank()
}

/// `R . e_i > 0` on every edge ray.
pub fn is_admissible(cone: &GoodCone, r: &ReebVector) -> Result<bool> {
    Ok(cone.edge_rays()?.iter().all(|e| r.pair(e).is_positive()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentPolygon {
    /// `P_i = e_i / (R . e_i)`, the vertex between faces `i` and `i+1`.
    pub vertices: Vec<QV3>,
}

impl MomentPolygon {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.vertices
                .iter()
                .map(|p| Value::Array(p.iter().map(json::quad).collect()))
                .collect(),
        )
    }
}

pub fn moment_polygon(cone: &GoodCone, r: &ReebVector) -> Result<MomentPolygon> {
    let mut vertices = Vec::with_capacity(cone.len());
    for e in cone.edge_rays()? {
        let s = r.pair(&e);
        if !s.is_positive() {
            return Err(Error::Inadmissible);
        }
        vertices.push(e.0.clone().map(|x| Quad::from_bigint(x, r.d()) / &s));
    }
    Ok(MomentPolygon { vertices })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyProfile {
    /// Primitive normal of the plane Lie(G), first nonzero coordinate positive.
    pub v0: V3,
    /// `v0 . n^i`.
    pub signed: Vec<BigInt>,
    /// `|v0 . n^i|`.
    pub k: Vec<BigInt>,
    pub flats: Vec<usize>,
    /// `gcd(k_i, k_{i+1})` with `gcd(0, k) = k`.
    pub vertex_orders: Vec<BigInt>,
    pub lie_g_basis: (V3, V3),
}

impl IsotropyProfile {
    pub fn from_v0(cone: &GoodCone, v0: &V3) -> Result<IsotropyProfile> {
        let v0 = v0
            .primitive()
            .ok_or_else(|| Error::Degenerate("zero normal for Lie(G)".into()))?
            .sign_normalized();
        let signed: Vec<BigInt> = cone.normals().iter().map(|n| v0.dot(n)).collect();
        let k: Vec<BigInt> = signed.iter().map(|s| s.abs()).collect();
        let flats = (0..k.len()).filter(|&i| k[i].is_zero()).collect();
        let m = k.len();
        let vertex_orders = (0..m).map(|i| k[i].gcd(&k[(i + 1) % m])).collect();
        let lie_g_basis = plane_lattice_basis(&v0)?;
        Ok(IsotropyProfile { v0, signed, k, flats, vertex_orders, lie_g_basis })
    }

    /// Coordinates of `w` in Lie(G)_Z w.r.t. `(u1, u2)`; `None` if `w` is not in the lattice.
    pub fn lie_coords(&self, w: &V3) -> Option<(BigInt, BigInt)> {
        let (u1, u2) = &self.lie_g_basis;
        if !self.v0.dot(w).is_zero() {
            return None;
        }
        let den = det3(u1, u2, &self.v0);
        let a = det3(w, u2, &self.v0);
        let b = det3(u1, w, &self.v0);
        if a.is_multiple_of(&den) && b.is_multiple_of(&den) {
            Some((a / &den, b / den))
        } else {
            None
        }
    }

    /// Rational coordinates of a quadratic vector in Lie(G) w.r.t. `(u1, u2)`.
    pub fn lie_coords_quad(&self, w: &QV3) -> Result<(Quad, Quad)> {
        let d = w[0].d();
        let (u1, u2) = (qv3_from_int(&self.lie_g_basis.0, d), qv3_from_int(&self.lie_g_basis.1, d));
        let v0 = qv3_from_int(&self.v0, d);
        let den = det3_quad(&u1, &u2, &v0)?;
        Ok((det3_quad(w, &u2, &v0)? / &den, det3_quad(&u1, w, &v0)? / den))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "v0": json::v3(&self.v0),
            "k": json::ints(&self.k),
            "flats": self.flats,
            "vertex_orders": json::ints(&self.vertex_orders),
            "lie_g_basis": [json::v3(&self.lie_g_basis.0), json::v3(&self.lie_g_basis.1)],
        })
    }
}

/// Primitive normal of the rational plane spanned by `p` and `q`.
pub fn lie_g_normal(r: &ReebVector) -> Result<V3> {
    if r.rank() != 2 {
        return Err(Error::RankOne);
    }
    rational_direction(&rat_cross(r.p(), r.q()))
        .map(|v| v.sign_normalized())
        .ok_or(Error::RankOne)
}

pub fn isotropy_profile(cone: &GoodCone, r: &ReebVector) -> Result<IsotropyProfile> {
    cone.require_good()?;
    let v0 = lie_g_normal(r)?;
    IsotropyProfile::from_v0(cone, &v0)
}

/// A primitive `Y` in Lie(G) ∩ Z^3 pairing positively with every edge ray,
/// searched over `a u1 + b u2` in boxes of growing radius, then solved exactly
/// when the box is too small.
pub fn choose_transverse_circle(cone: &GoodCone, r: &ReebVector, radius: u32) -> Result<V3> {
    let prof = isotropy_profile(cone, r)?;
    if !is_admissible(cone, r)? {
        return Err(Error::Inadmissible);
    }
    let edges = cone.edge_rays()?;
    let (u1, u2) = &prof.lie_g_basis;
    let radius = radius as i64;
    for rad in 1..=radius {
        for a in -rad..=rad {
            for b in -rad..=rad {
                if a.abs().max(b.abs()) != rad || a.gcd(&b) != 1 {
                    continue;
                }
                let y = &u1.scale(&a.into()) + &u2.scale(&b.into());
                if edges.iter().all(|e| y.dot(e).is_positive()) {
                    return Ok(y);
                }
            }
        }
    }
    transverse_in_cone(u1, u2, &edges)
        .ok_or_else(|| Error::SearchExhausted(format!("no transverse circle within box radius {radius}")))
}

/// Exact fallback: in the coordinates `(a, b)` of `a u1 + b u2` the admissible
/// set is an open cone cut out by the edge rays. Its closure is bounded by rays
/// orthogonal to some constraint, so the sum of two such rays (or a constraint
/// itself, for a half-plane) is interior.
fn transverse_in_cone(u1: &V3, u2: &V3, edges: &[V3]) -> Option<V3> {
    let cons: Vec<[BigInt; 2]> = edges.iter().map(|e| [u1.dot(e), u2.dot(e)]).collect();
    let mut rays: Vec<[BigInt; 2]> = Vec::new();
    for [x, y] in &cons {
        rays.push([-y, x.clone()]);
        rays.push([y.clone(), -x]);
        rays.push([x.clone(), y.clone()]);
    }
    let feasible = |p: &[BigInt; 2]| cons.iter().all(|c| (&c[0] * &p[0] + &c[1] * &p[1]).is_positive());
    let size = |q: &[BigInt; 2]| q[0].abs().max(q[1].abs());
    let mut best: Option<[BigInt; 2]> = None;
    for i in 0..rays.len() {
        for j in i..rays.len() {
            let p = [&rays[i][0] + &rays[j][0], &rays[i][1] + &rays[j][1]];
            if (p[0].is_zero() && p[1].is_zero()) || !feasible(&p) {
                continue;
            }
            let g = p[0].gcd(&p[1]);
            let p = [&p[0] / &g, &p[1] / &g];
            if best.as_ref().is_none_or(|b| (size(&p), &p) < (size(b), b)) {
                best = Some(p);
            }
        }
    }
    best.map(|[a, b]| &u1.scale(&a) + &u2.scale(&b))
}

/// Chart `(x, y, z) = (Y . v, v0 . v, R . v)` on points; a normal `n` is
/// written `n = n'_1 Y + n'_2 v0 + n'_3 R` so that `n . v = n' . (x, y, z)`.
pub struct Chart {
    pub ybar: V3,
    pub v0: V3,
    basis: [QV3; 3],
    den: Quad,
}

impl Chart {
    pub fn new(ybar: &V3, v0: &V3, r: &ReebVector) -> Result<Chart> {
        let d = r.d();
        let basis = [qv3_from_int(ybar, d), qv3_from_int(v0, d), r.value()];
        let den = det3_quad(&basis[0], &basis[1], &basis[2])?;
        if den.is_zero() {
            return Err(Error::Degenerate("chart vectors are dependent".into()));
        }
        Ok(Chart { ybar: ybar.clone(), v0: v0.clone(), basis, den })
    }

    /// Determinant of `(Y, v0, R)`.
    pub fn det(&self) -> &Quad {
        &self.den
    }

    pub fn normal_coords(&self, n: &V3) -> Result<[Quad; 3]> {
        let nq = qv3_from_int(n, self.den.d());
        let [a, b, c] = &self.basis;
        Ok([
            det3_quad(&nq, b, c)? / &self.den,
            det3_quad(a, &nq, c)? / &self.den,
            det3_quad(a, b, &nq)? / &self.den,
        ])
    }

    pub fn point_coords(&self, p: &QV3) -> (Quad, Quad) {
        (self.ybar.dot_quad(p), self.v0.dot_quad(p))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatWidth {
    /// `|v0 . P_i - v0 . P_{i-1}|` along the face segment.
    pub chord: Quad,
    /// Determinant expression from the two neighbouring face lines.
    pub formula: Quad,
}

pub fn flat_face_widths(cone: &GoodCone, r: &ReebVector, ybar: &V3, i: usize) -> Result<FlatWidth> {
    let prof = isotropy_profile(cone, r)?;
    if !prof.k[i].is_zero() {
        return Err(Error::Precondition(format!("face {i} is not flat")));
    }
    let poly = moment_polygon(cone, r)?;
    let chart = Chart::new(ybar, &prof.v0, r)?;
    let i = i as isize;
    let (_, ya) = chart.point_coords(&poly.vertices[cone.idx(i - 1)]);
    let (_, yb) = chart.point_coords(&poly.vertices[cone.idx(i)]);
    let chord = (yb - ya).abs();
    let n1 = chart.normal_coords(cone.n(i - 1))?;
    let n2 = chart.normal_coords(cone.n(i + 1))?;
    let d = r.d();
    let xb = chart.point_coords(&poly.vertices[cone.idx(i)]).0;
    let third = [Quad::from_int(-1, d), Quad::zero(d), xb];
    let den = &n1[1] * &n2[1];
    if den.is_zero() {
        return Err(Error::Degenerate("neighbouring face is flat".into()));
    }
    let formula = (-(det3_quad(&n1, &n2, &third)?) / den).abs();
    Ok(FlatWidth { chord, formula })
}

/// Width of a flat face inside the level set of `Y`; both computations must agree.
pub fn width_of_flat_face(cone: &GoodCone, r: &ReebVector, ybar: &V3, i: usize) -> Result<Quad> {
    let w = flat_face_widths(cone, r, ybar, i)?;
    if w.chord != w.formula {
        return Err(Error::Identity(format!("face {i}: chord {} but formula {}", w.chord, w.formula)));
    }
    Ok(w.chord)
}

/// Checks, for every non-flat face, that the chart slope of its polygon segment equals
/// `-n'_1 / n'_2`, and that consecutive slope differences equal
/// `det3(n, n', R) / (det(Y, v0, R) n'_2 n''_2)`.
pub fn check_slopes(cone: &GoodCone, r: &ReebVector, ybar: &V3) -> Result<()> {
    let prof = isotropy_profile(cone, r)?;
    let poly = moment_polygon(cone, r)?;
    let chart = Chart::new(ybar, &prof.v0, r)?;
    let m = cone.len() as isize;
    let mut slopes: Vec<Option<Quad>> = Vec::new();
    for i in 0..m {
        let (xa, ya) = chart.point_coords(&poly.vertices[cone.idx(i - 1)]);
        let (xb, yb) = chart.point_coords(&poly.vertices[cone.idx(i)]);
        let nc = chart.normal_coords(cone.n(i))?;
        if nc[1].is_zero() {
            if xa != xb {
                return Err(Error::Identity(format!("flat face {i} is not a level segment")));
            }
            slopes.push(None);
            continue;
        }
        let direct = (yb - ya) / (xb - xa);
        let law = -(&nc[0] / &nc[1]);
        if direct != law {
            return Err(Error::Identity(format!("face {i}: slope {direct} but normal gives {law}")));
        }
        slopes.push(Some(direct));
    }
    let rq = r.value();
    for i in 0..m {
        let j = cone.idx(i + 1);
        let (Some(si), Some(sj)) = (&slopes[i as usize], &slopes[j]) else { continue };
        let ni = chart.normal_coords(cone.n(i))?;
        let nj = chart.normal_coords(cone.n(i + 1))?;
        let d = r.d();
        let det = det3_quad(&qv3_from_int(cone.n(i), d), &qv3_from_int(cone.n(i + 1), d), &rq)?;
        let predicted = det / (chart.det() * &ni[1] * &nj[1]);
        if sj - si != predicted {
            return Err(Error::Identity(format!("slope change at vertex {i} is {} not {predicted}", sj - si)));
        }
    }
    Ok(())
}

/// `sum det3(m_c, m_{c+1}, Y) / (s_c s_{c+1})` over cyclically consecutive non-flat normals.
pub fn closure_sum(cone: &GoodCone, prof: &IsotropyProfile, y: &V3) -> BigRational {
    let idx: Vec<usize> = (0..cone.len()).filter(|&i| !prof.signed[i].is_zero()).collect();
    let mut acc = BigRational::zero();
    for c in 0..idx.len() {
        let (a, b) = (idx[c], idx[(c + 1) % idx.len()]);
        let num = det3(&cone.normals()[a], &cone.normals()[b], y);
        acc += BigRational::new(num, &prof.signed[a] * &prof.signed[b]);
    }
    acc
}

/// The closure identity on the basis of Lie(G) and on `Y`.
pub fn polygon_closure_holds(cone: &GoodCone, r: &ReebVector, ybar: &V3) -> Result<bool> {
    let prof = isotropy_profile(cone, r)?;
    let (u1, u2) = &prof.lie_g_basis;
    Ok([u1, u2, ybar].iter().all(|y| closure_sum(cone, &prof, y).is_zero()))
}

/// Minimum of quadratic numbers by exact comparison.
pub fn quad_cmp(a: &Quad, b: &Quad) -> Ordering {
    a.checked_cmp(b).expect("matching discriminants")
}
