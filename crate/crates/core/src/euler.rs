//! Rational Euler numbers of locally free circle actions and the global sum identity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::cone::GoodCone;
use crate::error::{Error, Result};
use crate::exactnum::{det3, Quad, V3};
use crate::json;
use crate::reeb::{isotropy_profile, moment_polygon, quad_cmp, IsotropyProfile, ReebVector};

fn q(n: BigInt, d: BigInt) -> Result<BigRational> {
    if d.is_zero() {
        return Err(Error::Degenerate("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

/// `-gcd(|m1|, |m2|) / (m1 m2)`.
pub fn euler_s3(m1: &BigInt, m2: &BigInt) -> Result<BigRational> {
    q(-m1.gcd(m2), m1 * m2)
}

/// `-a0 / ((a0 b1 - a1 b0)(a0 b2 - a2 b0))`.
pub fn euler_quotient(a: &[BigInt; 3], b: &[BigInt; 3]) -> Result<BigRational> {
    if !a[0].is_positive() {
        return Err(Error::Precondition("a0 must be positive".into()));
    }
    let x = &a[0] * &b[1] - &a[1] * &b[0];
    let y = &a[0] * &b[2] - &a[2] * &b[0];
    q(-a[0].clone(), x * y)
}

/// `-p gcd(|m1|, |m2|) / (m1 (p m1 - q m2))`.
pub fn euler_lens(p: &BigInt, qq: &BigInt, m1: &BigInt, m2: &BigInt) -> Result<BigRational> {
    if !p.is_positive() || !p.gcd(qq).is_one() {
        return Err(Error::Precondition(format!("lens parameters ({p}, {qq}) must have p >= 1 and gcd 1")));
    }
    q(-(p * m1.gcd(m2)), m1 * (p * m1 - qq * m2))
}

/// `-a / (m n)` near a minimal closed orbit, `+a / (m n)` near a maximal one.
pub fn euler_near_b_orbit(a: &BigInt, m: &BigInt, n: &BigInt, is_max: bool) -> Result<BigRational> {
    let v = q(a.clone(), m * n)?;
    Ok(if is_max { v } else { -v })
}

/// `+det3(n1, n2, Y) / (k1 k2)` near a minimal lens space, negated near a maximal one.
pub fn euler_near_b_lens(n1: &V3, n2: &V3, y: &V3, k1: &BigInt, k2: &BigInt, is_max: bool) -> Result<BigRational> {
    let v = q(det3(n1, n2, y), k1 * k2)?;
    Ok(if is_max { -v } else { v })
}

/// `a / (k k')`.
pub fn critical_jump(a: &BigInt, k: &BigInt, k2: &BigInt) -> Result<BigRational> {
    q(a.clone(), k * k2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainDescriptor {
    pub k: Vec<BigInt>,
    pub a: Vec<BigInt>,
}

impl ChainDescriptor {
    pub fn new(k: Vec<BigInt>, a: Vec<BigInt>) -> Result<ChainDescriptor> {
        if k.is_empty() || a.len() + 1 != k.len() {
            return Err(Error::Precondition(format!("{} multiplicities need {} weights", k.len(), k.len().max(1) - 1)));
        }
        if k.iter().chain(a.iter()).any(|x| !x.is_positive()) {
            return Err(Error::Precondition("chain entries must be positive".into()));
        }
        Ok(ChainDescriptor { k, a })
    }
}

/// `(sum a/(k k'), sum * lcm(k_1, k_l))`. A single-face chain has no jumps and
/// reports `(0, 0)`; longer chains must give a positive integer.
pub fn chain_euler_sum(chain: &ChainDescriptor) -> Result<(BigRational, BigInt)> {
    let mut sum = BigRational::zero();
    for i in 0..chain.a.len() {
        sum += critical_jump(&chain.a[i], &chain.k[i], &chain.k[i + 1])?;
    }
    let l = chain.k[0].lcm(chain.k.last().unwrap());
    let d = &sum * BigRational::from_integer(l);
    if chain.a.is_empty() {
        return Ok((sum, BigInt::zero()));
    }
    if !d.is_integer() || !d.is_positive() {
        return Err(Error::Identity(format!("chain sum {sum} gives d = {d}, not a positive integer")));
    }
    Ok((sum, d.to_integer()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extreme {
    /// Closed orbit at polygon vertex `c`.
    Vertex(usize),
    /// Lens space over flat face `f`.
    Flat(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub index: usize,
    pub faces: Vec<usize>,
    pub k: Vec<BigInt>,
    pub a: Vec<BigInt>,
    pub sum: BigRational,
    pub d: BigInt,
    pub lcm: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub min: Extreme,
    pub max: Extreme,
    pub e_min: BigRational,
    pub e_max: BigRational,
    pub lhs: BigRational,
    pub rhs: BigRational,
    pub per_chain: Vec<ChainReport>,
    pub failures: Vec<String>,
    pub ok: bool,
}

fn extreme_json(e: &Extreme) -> Value {
    match e {
        Extreme::Vertex(c) => json!({"vertex": c}),
        Extreme::Flat(f) => json!({"flat": f}),
    }
}

impl EulerReport {
    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok,
            "lhs": json::rat(&self.lhs),
            "rhs": json::rat(&self.rhs),
            "min": extreme_json(&self.min),
            "max": extreme_json(&self.max),
            "e_min": json::rat(&self.e_min),
            "e_max": json::rat(&self.e_max),
            "per_chain": self.per_chain.iter().map(|c| json!({
                "index": c.index,
                "faces": c.faces,
                "k": json::ints(&c.k),
                "a": json::ints(&c.a),
                "sum": json::rat(&c.sum),
                "d": json::int(&c.d),
                "lcm": json::int(&c.lcm),
            })).collect::<Vec<_>>(),
            "failures": self.failures,
        })
    }
}

/// Locates the extremes of `Y` on the polygon from the vertex heights `h`.
pub fn extremes(h: &[Quad], flats: &[usize]) -> Result<(Extreme, Extreme)> {
    let m = h.len();
    let find = |want: std::cmp::Ordering| -> Result<Extreme> {
        let mut best = 0;
        for i in 1..m {
            if quad_cmp(&h[i], &h[best]) == want {
                best = i;
            }
        }
        let ties: Vec<usize> = (0..m).filter(|&i| h[i] == h[best]).collect();
        match ties.len() {
            1 => Ok(Extreme::Vertex(best)),
            2 => {
                // vertices c-1 and c bound face c
                let (a, b) = (ties[0], ties[1]);
                let f = if (a + 1) % m == b { b } else if (b + 1) % m == a { a } else {
                    return Err(Error::Identity(format!("non-adjacent extreme vertices {a}, {b}")));
                };
                if !flats.contains(&f) {
                    return Err(Error::Identity(format!("level face {f} is not flat")));
                }
                Ok(Extreme::Flat(f))
            }
            _ => Err(Error::Identity("more than two vertices share an extreme value".into())),
        }
    };
    Ok((find(std::cmp::Ordering::Less)?, find(std::cmp::Ordering::Greater)?))
}

/// Faces of the two boundary arcs from the minimum to the maximum.
fn arcs(m: usize, min: &Extreme, max: &Extreme) -> [Vec<usize>; 2] {
    let add = |i: usize, s: isize| ((i as isize + s).rem_euclid(m as isize)) as usize;
    let (fw_start, bw_start) = match min {
        Extreme::Vertex(c) => (add(*c, 1), *c),
        Extreme::Flat(f) => (add(*f, 1), add(*f, -1)),
    };
    let (fw_end, bw_end) = match max {
        Extreme::Vertex(c) => (*c, add(*c, 1)),
        Extreme::Flat(f) => (add(*f, -1), add(*f, 1)),
    };
    let walk = |start: usize, end: usize, step: isize| {
        let mut out = vec![start];
        let mut i = start;
        while i != end && out.len() <= m {
            i = add(i, step);
            out.push(i);
        }
        out
    };
    [walk(fw_start, fw_end, 1), walk(bw_start, bw_end, -1)]
}

/// Checks `e_max - e_min = sum of critical jumps` for `(cone, R, Y)`.
pub fn verify_global_identity(cone: &GoodCone, r: &ReebVector, y: &V3) -> Result<EulerReport> {
    let prof = isotropy_profile(cone, r)?;
    verify_global_identity_with(cone, r, y, &prof)
}

/// As [`verify_global_identity`] but with a caller-supplied profile; used as a
/// negative control with tampered multiplicities.
pub fn verify_global_identity_with(
    cone: &GoodCone,
    r: &ReebVector,
    y: &V3,
    prof: &IsotropyProfile,
) -> Result<EulerReport> {
    let m = cone.len();
    if prof.k.len() != m {
        return Err(Error::Precondition("profile does not match the cone".into()));
    }
    if !prof.v0.dot(y).is_zero() {
        return Err(Error::Precondition(format!("{y} is not in Lie(G)")));
    }
    let poly = moment_polygon(cone, r)?;
    let edges = cone.edge_rays()?;
    if let Some(i) = (0..m).find(|&i| !y.dot(&edges[i]).is_positive()) {
        return Err(Error::Precondition(format!("{y} is not transverse at vertex {i}")));
    }
    let h: Vec<Quad> = poly.vertices.iter().map(|p| y.dot_quad(p)).collect();
    let mut failures = Vec::new();
    for i in 0..m {
        let expect = prof.v0.dot(&cone.normals()[i]).abs();
        if expect != prof.k[i] {
            failures.push(format!("face {i}: k = {} but |v0 . n| = {expect}", prof.k[i]));
        }
    }
    let (min, max) = extremes(&h, &prof.flats)?;
    let k = &prof.k;
    let nrm = |i: usize| &cone.normals()[i];
    let side = |e: &Extreme, is_max: bool| -> Result<BigRational> {
        match e {
            Extreme::Vertex(c) => {
                let c1 = (c + 1) % m;
                euler_near_b_orbit(&y.dot(&edges[*c]), &k[*c], &k[c1], is_max)
            }
            Extreme::Flat(f) => {
                let (fp, fm) = ((f + 1) % m, (f + m - 1) % m);
                euler_near_b_lens(nrm(fp), nrm(fm), y, &k[fp], &k[fm], is_max)
            }
        }
    };
    let e_min = side(&min, false)?;
    let e_max = side(&max, true)?;
    let lhs = &e_max - &e_min;
    let mut rhs = BigRational::zero();
    let mut per_chain = Vec::new();
    for (index, faces) in arcs(m, &min, &max).into_iter().enumerate() {
        let ks: Vec<BigInt> = faces.iter().map(|&f| k[f].clone()).collect();
        if let Some(p) = faces.iter().position(|&f| k[f].is_zero()) {
            failures.push(format!("chain {index}: interior face {} is flat", faces[p]));
            continue;
        }
        // the vertex between consecutive chain faces
        let a: Vec<BigInt> = faces
            .windows(2)
            .map(|w| {
                let c = if (w[0] + 1) % m == w[1] { w[0] } else { w[1] };
                y.dot(&edges[c])
            })
            .collect();
        let chain = ChainDescriptor { k: ks.clone(), a: a.clone() };
        let lcm = ks[0].lcm(ks.last().unwrap());
        let (sum, d) = match chain_euler_sum(&chain) {
            Ok(x) => x,
            Err(e) => {
                failures.push(format!("chain {index}: {e}"));
                let mut s = BigRational::zero();
                for i in 0..a.len() {
                    s += critical_jump(&a[i], &ks[i], &ks[i + 1])?;
                }
                (s.clone(), (s * BigRational::from_integer(lcm.clone())).floor().to_integer())
            }
        };
        rhs += &sum;
        per_chain.push(ChainReport { index, faces, k: ks, a, sum, d, lcm });
    }
    if lhs != rhs {
        failures.push(format!("e_max - e_min = {lhs} but the critical jumps sum to {rhs}"));
    }
    let ok = failures.is_empty();
    Ok(EulerReport { min, max, e_min, e_max, lhs, rhs, per_chain, failures, ok })
}
