//! Contact blow-ups and blow-downs as exact cone surgeries.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cone::GoodCone;
use crate::error::{Error, Result};
use crate::exactnum::{
    bezout3, delzant_witness, det3, is_delzant_pair, plane_lattice_basis, prime_in_progression, Mat3, Quad, V3,
};
use crate::json;

/// Default box radius of the fallback searches.
pub const DEFAULT_BOX: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CutKind {
    /// A closed orbit (polygon vertex) replaced by a lens space.
    OrbitBlowup { vertex: usize },
    /// A lens space face moved inward; the vertex count is unchanged.
    LensBlowup { face: usize },
}

#[derive(Clone, Debug)]
pub struct SurgeryResult {
    pub cone: GoodCone,
    pub kind: CutKind,
    /// Index of `t` in the new cone.
    pub inserted: usize,
    pub diagnostics: Vec<String>,
}

impl SurgeryResult {
    pub fn to_json(&self) -> Value {
        let kind = match &self.kind {
            CutKind::OrbitBlowup { vertex } => json!({"orbit_blowup": vertex}),
            CutKind::LensBlowup { face } => json!({"lens_blowup": face}),
        };
        json!({"cone": self.cone.to_json(), "kind": kind, "inserted": self.inserted, "diagnostics": self.diagnostics})
    }
}

/// Intersects the cone with `{t . v >= 0}` and classifies the cut by the edge rays it removes.
pub fn cut(cone: &GoodCone, t: &V3) -> Result<SurgeryResult> {
    cone.require_good()?;
    if !t.is_primitive() {
        return Err(Error::Precondition(format!("cutting normal {t} is not primitive")));
    }
    let m = cone.len();
    let edges = cone.edge_rays()?;
    let s: Vec<BigInt> = edges.iter().map(|e| t.dot(e)).collect();
    if let Some(i) = s.iter().position(Zero::is_zero) {
        return Err(Error::CutRejected(format!("the cutting plane passes through vertex {i}")));
    }
    let cut_set: Vec<usize> = (0..m).filter(|&i| s[i].is_negative()).collect();
    let mut ns = cone.normals().to_vec();
    let (kind, inserted) = match cut_set.as_slice() {
        [] => return Err(Error::CutRejected("no edge ray is strictly cut".into())),
        [i] => {
            ns.insert(i + 1, t.clone());
            (CutKind::OrbitBlowup { vertex: *i }, i + 1)
        }
        [a, b] if (a + 1) % m == *b || (b + 1) % m == *a => {
            // vertices f-1 and f bound face f
            let f = if (a + 1) % m == *b { *b } else { *a };
            ns[f] = t.clone();
            (CutKind::LensBlowup { face: f }, f)
        }
        _ => {
            return Err(Error::CutRejected(format!(
                "cut removes vertices {cut_set:?}; only one vertex or the two ends of one face may be removed"
            )))
        }
    };
    let out = GoodCone::new(ns)?;
    if !out.is_good() {
        return Err(Error::CutRejected(format!("result is not good: {}", out.validate())));
    }
    let diagnostics = vec![format!("edge pairings with t: {}", s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))];
    Ok(SurgeryResult { cone: out, kind, inserted, diagnostics })
}

/// Removes normal `i`; the result must be good.
pub fn blowdown_delete(cone: &GoodCone, i: usize) -> Result<GoodCone> {
    cone.require_good()?;
    if i >= cone.len() {
        return Err(Error::Precondition(format!("face {i} out of range")));
    }
    if cone.len() <= 3 {
        return Err(Error::Degenerate("cannot delete a face of a simplicial cone".into()));
    }
    let mut ns = cone.normals().to_vec();
    ns.remove(i);
    let out = GoodCone::new(ns)?;
    out.require_good()?;
    Ok(out)
}

/// Replaces the normals `a..=b` (no wrap) by the single normal `t`; the new
/// cone must be good and contain the old one.
pub fn replace_range(cone: &GoodCone, a: usize, b: usize, t: &V3) -> Result<GoodCone> {
    cone.require_good()?;
    let m = cone.len();
    if a > b || b >= m {
        return Err(Error::Precondition(format!("range [{a}, {b}] is not a contiguous range of 0..{m}")));
    }
    if m - (b - a + 1) + 1 < 3 {
        return Err(Error::Precondition("replacement would leave fewer than 3 normals".into()));
    }
    let mut ns: Vec<V3> = cone.normals()[..a].to_vec();
    ns.push(t.clone());
    ns.extend_from_slice(&cone.normals()[b + 1..]);
    let out = GoodCone::new(ns)?;
    out.require_good()?;
    for (j, e) in cone.edge_rays()?.iter().enumerate() {
        if t.dot(e).is_negative() {
            return Err(Error::Precondition(format!("new face {t} cuts off old vertex {j}")));
        }
    }
    Ok(out)
}

/// The open cone Θ of admissible blow-down normals for face `i`.
pub fn in_theta(cone: &GoodCone, i: isize, t: &V3) -> bool {
    let (a, b, c) = (cone.n(i - 1), cone.n(i), cone.n(i + 1));
    det3(a, b, t).is_positive() && det3(b, c, t).is_positive() && det3(a, c, t).is_negative()
}

fn base_accept(cone: &GoodCone, i: isize, constraint: Option<&(V3, BigInt)>, t: &V3) -> bool {
    if !t.is_primitive() || !in_theta(cone, i, t) {
        return false;
    }
    if let Some((v0, value)) = constraint {
        if &v0.dot(t) != value {
            return false;
        }
    }
    if !is_delzant_pair(cone.n(i - 1), t) || !is_delzant_pair(t, cone.n(i + 1)) {
        return false;
    }
    let ix = cone.idx(i);
    replace_range(cone, ix, ix, t).is_ok()
}

/// Candidates from the prime-progression construction, in normalized
/// coordinates where `n^{i+1} = e3` and `n^{i+2} = e2`.
fn prime_candidates(cone: &GoodCone, i: isize, primes: usize) -> Result<Vec<V3>> {
    let (p0, p1, p2, p3) = (cone.n(i - 1), cone.n(i), cone.n(i + 1), cone.n(i + 2));
    if cone.idx(i + 2) == cone.idx(i - 1) {
        return Ok(Vec::new());
    }
    let Some(w) = delzant_witness(p3, p2)? else { return Ok(Vec::new()) };
    let bm = Mat3::from_cols(w, p3.clone(), p2.clone());
    let Some(am) = bm.inverse() else { return Ok(Vec::new()) };
    let x = am.mul_vec(p0);
    let y = am.mul_vec(p1);
    let Some(z) = delzant_witness(&x, &y)? else { return Ok(Vec::new()) };
    let (x1, x2, x3) = (&x.0[0], &x.0[1], &x.0[2]);
    let (y1, y2, y3) = (&y.0[0], &y.0[1], &y.0[2]);
    let z1 = &z.0[0];
    let d1 = y1 * x2 - x1 * y2;
    let d2 = y1 * x3 - x1 * y3;
    if d1.is_zero() || d2.is_zero() {
        return Ok(Vec::new());
    }
    let eps = if d1.is_positive() { BigInt::one() } else { -BigInt::one() };
    // smallest positive pair (lex) with s1 x1 + s2 y1 coprime to z1 and nonzero
    let mut s0 = None;
    'outer: for s1 in 1..=64i64 {
        for s2 in 1..=64i64 {
            let v = x1 * s1 + y1 * s2;
            if !v.is_zero() && v.gcd(z1).is_one() {
                s0 = Some((BigInt::from(s1), BigInt::from(s2)));
                break 'outer;
            }
        }
    }
    let Some((s10, s20)) = s0 else { return Ok(Vec::new()) };
    let mp = &eps * (&s10 * x1 + &s20 * y1);
    // q = c m' + z1 with c > 0; search |q| prime in the matching progression
    let (modulus, residue, sign) = if mp.is_positive() {
        (mp.clone(), z1.mod_floor(&mp), BigInt::one())
    } else {
        let m = -&mp;
        (m.clone(), (-z1).mod_floor(&m), -BigInt::one())
    };
    let mut out = Vec::new();
    let mut lower = BigInt::from(2);
    for _ in 0..primes {
        let p = prime_in_progression(&residue, &modulus, &lower)?;
        lower = &p + 1;
        let q = &sign * &p;
        let c = (&q - z1) / &mp;
        if !c.is_positive() || !q.gcd(&d1).is_one() || !q.gcd(&d2).is_one() {
            continue;
        }
        let a = &c * &eps * &s10;
        let b = &c * &eps * &s20;
        for j in 0..3i64 {
            let s1 = &a - y1 * j;
            let s2 = &b + x1 * j;
            let tn = &(&x.scale(&s1) + &y.scale(&s2)) + &z;
            out.push(bm.mul_vec(&tn));
        }
    }
    Ok(out)
}

fn ring(r: i64) -> impl Iterator<Item = (i64, i64)> {
    (-r..=r).flat_map(move |a| (-r..=r).map(move |b| (a, b))).filter(move |(a, b)| a.abs().max(b.abs()) == r)
}

fn search_normal(
    cone: &GoodCone,
    i: isize,
    constraint: Option<&(V3, BigInt)>,
    radius: u32,
    accept: &mut dyn FnMut(&V3) -> bool,
) -> Result<Option<V3>> {
    cone.require_good()?;
    let r = radius as i64;
    if let Some((v0, value)) = constraint {
        let v0p = v0.primitive().ok_or_else(|| Error::Degenerate("zero constraint normal".into()))?;
        if &v0p != v0 && !value.is_multiple_of(&v0.content()) {
            return Ok(None);
        }
        let (u1, u2) = plane_lattice_basis(v0)?;
        let g = v0.content();
        let t0 = bezout3(v0).scale(&(value / &g));
        // start near the ray n^{i-1} + n^{i+1}, which lies on the boundary of Θ in Lie(G)
        let dir = cone.n(i - 1) + cone.n(i + 1);
        for mult in 0..=r {
            let base = &t0 + &dir.scale(&BigInt::from(mult));
            for rad in 0..=r.min(16) {
                for (a, b) in ring(rad).chain(if rad == 0 { Some((0, 0)) } else { None }) {
                    let t = &(&base + &u1.scale(&a.into())) + &u2.scale(&b.into());
                    if base_accept(cone, i, constraint, &t) && accept(&t) {
                        return Ok(Some(t));
                    }
                }
            }
        }
        return Ok(None);
    }
    for t in prime_candidates(cone, i, 200)? {
        if base_accept(cone, i, None, &t) && accept(&t) {
            return Ok(Some(t));
        }
    }
    for rad in 1..=r {
        for (a, b) in ring(rad) {
            for c in -rad..=rad {
                let t = crate::exactnum::v3(a, b, c);
                if base_accept(cone, i, None, &t) && accept(&t) {
                    return Ok(Some(t));
                }
            }
        }
        for c in [-rad, rad] {
            for (a, b) in ring(rad - 1).chain(if rad == 1 { Some((0, 0)) } else { None }) {
                let t = crate::exactnum::v3(a, b, c);
                if base_accept(cone, i, None, &t) && accept(&t) {
                    return Ok(Some(t));
                }
            }
        }
    }
    Ok(None)
}

/// A primitive `t` in Θ, Delzant-paired with `n^{i-1}` and `n^{i+1}`, whose
/// replacement of face `i` is a good cone; optionally with `v0 . t = value`.
pub fn find_blowdown_normal(
    cone: &GoodCone,
    i: usize,
    constraint: Option<(V3, BigInt)>,
    radius: u32,
) -> Result<Option<V3>> {
    search_normal(cone, i as isize, constraint.as_ref(), radius, &mut |_| true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOp {
    Cut { t: V3 },
    Delete { i: usize },
    Replace { range: (usize, usize), t: V3 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanStep {
    pub op: StepOp,
    pub pre: String,
    pub post: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurgeryPlan {
    pub steps: Vec<PlanStep>,
}

impl StepOp {
    pub fn apply(&self, cone: &GoodCone) -> Result<GoodCone> {
        match self {
            StepOp::Cut { t } => Ok(cut(cone, t)?.cone),
            StepOp::Delete { i } => blowdown_delete(cone, *i),
            StepOp::Replace { range, t } => replace_range(cone, range.0, range.1, t),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            StepOp::Cut { t } => json!({"op": "cut", "t": json::v3(t)}),
            StepOp::Delete { i } => json!({"op": "delete", "i": i}),
            StepOp::Replace { range, t } => json!({"op": "replace", "range": [range.0, range.1], "t": json::v3(t)}),
        }
    }

    pub fn from_json(v: &Value) -> Result<StepOp> {
        let op = v.get("op").and_then(Value::as_str).ok_or_else(|| Error::Parse("step lacks \"op\"".into()))?;
        let idx = |x: &Value| {
            x.as_u64().map(|u| u as usize).ok_or_else(|| Error::Parse(format!("expected an index, found {x}")))
        };
        let field = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("\"{op}\" step lacks \"{k}\"")));
        match op {
            "cut" => Ok(StepOp::Cut { t: json::parse_v3(field("t")?)? }),
            "delete" => Ok(StepOp::Delete { i: idx(field("i")?)? }),
            "replace" => {
                let r = field("range")?
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| Error::Parse("\"range\" must be [a, b]".into()))?;
                Ok(StepOp::Replace { range: (idx(&r[0])?, idx(&r[1])?), t: json::parse_v3(field("t")?)? })
            }
            other => Err(Error::Parse(format!("unknown step op \"{other}\""))),
        }
    }
}

impl SurgeryPlan {
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.steps
                .iter()
                .map(|s| {
                    let mut v = s.op.to_json();
                    v["pre"] = json!(s.pre);
                    v["post"] = json!(s.post);
                    v
                })
                .collect(),
        )
    }

    /// Parses a plan; hashes are optional and, when absent, are not checked on replay.
    pub fn from_json(v: &Value) -> Result<SurgeryPlan> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("plan must be an array".into()))?;
        let steps = arr
            .iter()
            .map(|s| {
                Ok(PlanStep {
                    op: StepOp::from_json(s)?,
                    pre: s.get("pre").and_then(Value::as_str).unwrap_or("").to_string(),
                    post: s.get("post").and_then(Value::as_str).unwrap_or("").to_string(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SurgeryPlan { steps })
    }

    /// Applies every step, checking recorded hashes; returns the final cone.
    pub fn replay(&self, start: &GoodCone) -> Result<GoodCone> {
        let mut cur = start.clone();
        for (k, s) in self.steps.iter().enumerate() {
            let h = cur.canonical_hash();
            if !s.pre.is_empty() && s.pre != h {
                return Err(Error::Replay { step: k, reason: format!("pre-hash {h} differs from recorded {}", s.pre) });
            }
            cur = s.op.apply(&cur).map_err(|e| Error::Replay { step: k, reason: e.to_string() })?;
            let h = cur.canonical_hash();
            if !s.post.is_empty() && s.post != h {
                return Err(Error::Replay { step: k, reason: format!("post-hash {h} differs from recorded {}", s.post) });
            }
        }
        Ok(cur)
    }
}

/// Plans blow-downs collapsing the complement of `keep` (a contiguous,
/// non-wrapping index range) to a single new normal, peeling from its low end:
/// face `a + 1` is deleted outright when that is already a blow-down, otherwise
/// face `a` is first replaced so that it becomes one.
pub fn plan_blowdown_sequence(cone: &GoodCone, keep: &[usize], radius: u32) -> Result<SurgeryPlan> {
    cone.require_good()?;
    let m = cone.len();
    if let Some(k) = keep.iter().find(|&&k| k >= m) {
        return Err(Error::Precondition(format!("keep index {k} out of range")));
    }
    let removed: Vec<usize> = (0..m).filter(|i| !keep.contains(i)).collect();
    let mut steps = Vec::new();
    if removed.len() <= 1 {
        return Ok(SurgeryPlan { steps });
    }
    let (a, b) = (removed[0], *removed.last().unwrap());
    if b - a + 1 != removed.len() {
        return Err(Error::Precondition(format!("removed faces {removed:?} are not contiguous")));
    }
    if keep.len() < 2 {
        return Err(Error::Precondition("keep at least two faces".into()));
    }
    let mut cur = cone.clone();
    for step in 0..(b - a) {
        if let Ok(del) = blowdown_delete(&cur, a + 1) {
            steps.push(PlanStep { op: StepOp::Delete { i: a + 1 }, pre: cur.canonical_hash(), post: del.canonical_hash() });
            cur = del;
            continue;
        }
        let ai = a as isize;
        let mut found: Option<(GoodCone, GoodCone)> = None;
        let probe = cur.clone();
        let t = search_normal(&probe, ai, None, radius, &mut |t| {
            let Ok(rep) = replace_range(&probe, a, a, t) else { return false };
            match blowdown_delete(&rep, a + 1) {
                Ok(del) => {
                    found = Some((rep, del));
                    true
                }
                Err(_) => false,
            }
        })?;
        let (Some(t), Some((rep, del))) = (t, found) else {
            return Err(Error::SearchExhausted(format!(
                "step {step}: no blow-down normal for face {a} of {cur} lets face {} be deleted",
                a + 1
            )));
        };
        steps.push(PlanStep {
            op: StepOp::Replace { range: (a, a), t },
            pre: cur.canonical_hash(),
            post: rep.canonical_hash(),
        });
        steps.push(PlanStep { op: StepOp::Delete { i: a + 1 }, pre: rep.canonical_hash(), post: del.canonical_hash() });
        cur = del;
    }
    Ok(SurgeryPlan { steps })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalBlowupSolution {
    pub l: Quad,
    pub u: BigInt,
    pub v: BigInt,
    pub r1: Quad,
    pub r2: Quad,
    pub a0: BigInt,
    pub a1: BigInt,
    pub a2: BigInt,
}

impl LocalBlowupSolution {
    pub fn to_json(&self) -> Value {
        json!({
            "l": json::quad(&self.l),
            "u_over_v": json::rat(&BigRational::new(self.u.clone(), self.v.clone())),
            "r1": json::quad(&self.r1),
            "r2": json::quad(&self.r2),
            "a0": json::int(&self.a0),
            "a1": json::int(&self.a1),
            "a2": json::int(&self.a2),
        })
    }

    /// Independent re-check of the free-action, radius and coplanarity conditions.
    pub fn check(&self, m1: &BigInt, m2: &BigInt, bound: &BigRational) -> bool {
        let b = Quad::from_rational(bound.clone(), self.l.d());
        self.a0.gcd(&self.a1).is_one()
            && self.a0.gcd(&self.a2).is_one()
            && self.r1.checked_cmp(&b).map(|o| o.is_gt()).unwrap_or(false)
            && self.r2.checked_cmp(&b).map(|o| o.is_gt()).unwrap_or(false)
            && (&self.a1 * m2 - &self.a2 * m1).is_zero()
    }
}

/// Chooses `l = λ1 - (u/v) λ0` of minimal height `max(|u|, v)` with
/// `gcd(u, v) = gcd(v, m1) = gcd(v, m2) = 1` and `l m_i > bound`.
pub fn solve_local_blowup(
    lambda0: &Quad,
    lambda1: &Quad,
    m1: &BigInt,
    m2: &BigInt,
    bound: &BigRational,
    max_height: u64,
) -> Result<LocalBlowupSolution> {
    if lambda0.is_zero() {
        return Err(Error::Precondition("λ0 must be nonzero".into()));
    }
    let ratio = lambda1.checked_div(lambda0)?;
    if ratio.is_rational() {
        return Err(Error::RankOne);
    }
    if m1.is_zero() || m2.is_zero() || !m1.gcd(m2).is_one() {
        return Err(Error::Precondition(format!("weights ({m1}, {m2}) must be nonzero and coprime")));
    }
    let d = lambda0.d();
    let bq = Quad::from_rational(bound.clone(), d);
    // x = u/v must satisfy x < T_i when λ0 m_i > 0 and x > T_i otherwise
    let mut lower: Option<Quad> = None;
    let mut upper: Option<Quad> = None;
    for m in [m1, m2] {
        let lm = lambda0.scale_int(m);
        let t = (lambda1.scale_int(m) - &bq) / &lm;
        if lm.is_positive() {
            if upper.as_ref().map_or(true, |u| t.checked_cmp(u).map(|o| o.is_lt()).unwrap_or(false)) {
                upper = Some(t);
            }
        } else if lower.as_ref().map_or(true, |l| t.checked_cmp(l).map(|o| o.is_gt()).unwrap_or(false)) {
            lower = Some(t);
        }
    }
    let mm = m1 * m2;
    let mut best: Option<(BigInt, BigInt, BigInt)> = None; // (height, u, v)
    for v in 1..=max_height {
        let vb = BigInt::from(v);
        if let Some((h, _, _)) = &best {
            if &vb > h {
                break;
            }
        }
        if !vb.gcd(&mm).is_one() {
            continue;
        }
        let lo: Option<BigInt> = lower.as_ref().map(|l| l.scale_int(&vb).floor() + 1);
        let hi: Option<BigInt> = upper.as_ref().map(|u| u.scale_int(&vb).ceil() - 1);
        if let (Some(lo), Some(hi)) = (&lo, &hi) {
            if lo > hi {
                continue;
            }
        }
        // walk outward from the admissible integer nearest 0
        let start = match (&lo, &hi) {
            (Some(lo), _) if lo.is_positive() => lo.clone(),
            (_, Some(hi)) if hi.is_negative() => hi.clone(),
            _ => BigInt::zero(),
        };
        let inside = |u: &BigInt| lo.as_ref().map_or(true, |l| u >= l) && hi.as_ref().map_or(true, |h| u <= h);
        let mut pick = None;
        for off in 0..=(max_height as i64) {
            let cands = if off == 0 { vec![start.clone()] } else { vec![&start - off, &start + off] };
            let mut any_inside = false;
            for u in cands {
                if !inside(&u) {
                    continue;
                }
                any_inside = true;
                if u.gcd(&vb).is_one() && pick.as_ref().map_or(true, |p: &BigInt| u.abs() < p.abs()) {
                    pick = Some(u);
                }
            }
            if pick.is_some() || !any_inside {
                break;
            }
        }
        if let Some(u) = pick {
            let h = u.abs().max(vb.clone());
            if best.as_ref().map_or(true, |(bh, _, _)| &h < bh) {
                best = Some((h, u, vb.clone()));
            }
        }
    }
    let (_, u, v) = best.ok_or_else(|| Error::SearchExhausted(format!("no admissible u/v of height <= {max_height}")))?;
    let x = BigRational::new(u.clone(), v.clone());
    let l = lambda1 - &lambda0.scale(&x);
    let r1 = l.scale_int(m1);
    let r2 = l.scale_int(m2);
    Ok(LocalBlowupSolution { l, a0: v.clone(), a1: &u * m1, a2: &u * m2, u, v, r1, r2 })
}

/// `(k0 = k1 = 1 and L2 closes up to B_max) or (L0 closes up to B_min and k1 = k2 = 1)`.
pub fn can_blowdown_by_multiplicities(k0: &BigInt, k1: &BigInt, k2: &BigInt, l0_is_bmin: bool, l2_is_bmax: bool) -> bool {
    (k0.is_one() && k1.is_one() && l2_is_bmax) || (l0_is_bmin && k1.is_one() && k2.is_one())
}
