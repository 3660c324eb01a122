//! Explicit families of good cones and the chain-closing vector.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cone::{validate_normals, GoodCone};
use crate::error::{Error, Result};
use crate::exactnum::{bezout3, cross_primitive, det3, plane_lattice_basis, V3};
use crate::reeb::ReebVector;

/// Normals `(1, i, i^2 - i + 1)` for `0 <= i <= k + 1`, closed by `(1, 1, k + 2)`,
/// with Reeb ray `n^0 + sqrt(d) n^{k+1}`.
pub fn example_family_d(k: u64, d: u64) -> Result<(GoodCone, ReebVector)> {
    if k < 2 {
        return Err(Error::Precondition(format!("k = {k} must be at least 2")));
    }
    let mut ns: Vec<V3> = (0..=k + 1)
        .map(|i| {
            let i = BigInt::from(i);
            V3::new(BigInt::one(), i.clone(), &i * &i - &i + 1)
        })
        .collect();
    ns.push(V3::new(BigInt::one(), BigInt::one(), BigInt::from(k + 2)));
    let r = ReebVector::from_ints(&ns[0], &ns[k as usize + 1], d)?;
    let cone = GoodCone::good(ns)?;
    Ok((cone, r))
}

pub fn example_family(k: u64) -> Result<(GoodCone, ReebVector)> {
    example_family_d(k, crate::exactnum::DEFAULT_D)
}

/// Third coordinate of the cross product.
fn cross3(a: &V3, b: &V3) -> BigInt {
    &a.0[0] * &b.0[1] - &a.0[1] * &b.0[0]
}

/// Coefficients `(a, c, e)` of one inductive step `n^{s+1} = a n^{s-1} + c l^{s-1} + e n^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub a: BigInt,
    pub c: BigInt,
    pub e: BigInt,
}

#[derive(Clone, Debug)]
pub struct Obstructed {
    pub cone: GoodCone,
    pub reeb: ReebVector,
    pub steps: Vec<Step>,
}

/// The obstructed family: a chain of `k` lens-space faces none of which blows
/// down to an orbit, closed by [`close_chain`].
pub fn obstructed_family(k: u64, seed: u64) -> Result<Obstructed> {
    if k < 2 {
        return Err(Error::Precondition(format!("k = {k} must be at least 2")));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut ns = vec![V3::new(1.into(), 0.into(), 1.into()), V3::new(1.into(), 1.into(), 1.into())];
    let mut ls = vec![V3::new(0.into(), 0.into(), 1.into())];
    let mut steps = Vec::new();
    let c = BigInt::from(2);
    for s in 1..=(k as usize) {
        let (prev, cur, lprev) = (&ns[s - 1], &ns[s], &ls[s - 1]);
        // a odd negative with a (n^s x n^{s-1})_3 + c (n^s x l^{s-1})_3 > 0
        let mut a = -BigInt::from(2 * rng.gen_range(0..8i64) + 1);
        let back = cross3(cur, prev);
        let lift = cross3(cur, lprev);
        while !(&a * &back + &c * &lift).is_positive() {
            a = &a * 2 - 1;
        }
        let mut e = BigInt::from(2 * rng.gen_range(1..9i64));
        let n0 = &ns[0];
        let fixed = &a * cross3(n0, prev) + &c * cross3(n0, lprev);
        let fwd = cross3(n0, cur);
        if !fwd.is_positive() {
            return Err(Error::Identity(format!("(n^0 x n^{s})_3 = {fwd} is not positive")));
        }
        while !(&fixed + &e * &fwd).is_positive() {
            e *= 2;
        }
        let next = &(&prev.scale(&a) + &lprev.scale(&c)) + &cur.scale(&e);
        // with d = 1, f = 0 the matrix has determinant -1, so det(n^s, n^{s+1}, l^s) = 1
        let b = (&a + 1) / 2;
        let lnext = &prev.scale(&b) + lprev;
        if !det3(cur, &next, &lnext).is_one() {
            return Err(Error::Identity(format!("step {s}: det(n^s, n^(s+1), l^s) != 1")));
        }
        ns.push(next);
        ls.push(lnext);
        steps.push(Step { a, c: c.clone(), e });
    }
    let t = close_chain(&ns, 1 << 20)?;
    let reeb = ReebVector::from_ints(&ns[0], &ns[k as usize + 1], crate::exactnum::DEFAULT_D)?;
    ns.push(t);
    let cone = GoodCone::good(ns)?;
    Ok(Obstructed { cone, reeb, steps })
}

/// Independent re-check of the six construction conditions on a cone with
/// `k + 3` normals; returns the list of violations.
pub fn construction_violations(cone: &GoodCone, k: usize) -> Vec<String> {
    let mut out = Vec::new();
    let ns = cone.normals();
    if ns.len() != k + 3 {
        return vec![format!("expected {} normals, found {}", k + 3, ns.len())];
    }
    for i in 1..=k + 1 {
        if !cross3(&ns[0], &ns[i]).is_positive() {
            out.push(format!("(i) fails at {i}"));
        }
    }
    for i in 0..=k {
        if !cross3(&ns[i], &ns[i + 1]).is_positive() {
            out.push(format!("(ii) fails at {i}"));
        }
    }
    for i in 0..k {
        if !det3(&ns[i], &ns[i + 1], &ns[i + 2]).is_positive() {
            out.push(format!("(iii) fails at {i}"));
        }
    }
    for j in 0..=k {
        if !det3(&ns[k + 1], &ns[k + 2], &ns[j]).is_positive() {
            out.push(format!("(iv) fails for n^(k+1), n^(k+2), n^{j}"));
        }
    }
    for j in 1..=k + 1 {
        if !det3(&ns[k + 2], &ns[0], &ns[j]).is_positive() {
            out.push(format!("(iv) fails for n^(k+2), n^0, n^{j}"));
        }
    }
    for i in 0..ns.len() {
        if !ns[i].cross(&ns[(i + 1) % ns.len()]).content().is_one() {
            out.push(format!("(v) fails at {i}"));
        }
    }
    for i in 0..k {
        match cone.gluing_matrix(i as isize) {
            Ok(m) => {
                let (c, e) = (m.at(1, 0), m.at(2, 0));
                if c.gcd(e).is_one() {
                    out.push(format!("(vi) fails at {i}: gcd(e, c) = gcd({e}, {c}) = 1"));
                }
            }
            Err(err) => out.push(format!("(vi) gluing matrix at {i}: {err}")),
        }
    }
    out
}

fn closes(chain: &[V3], t: &V3) -> bool {
    let m = chain.len();
    let (first, last) = (&chain[0], &chain[m - 1]);
    for j in 0..m - 1 {
        if !det3(last, t, &chain[j]).is_positive() {
            return false;
        }
    }
    for j in 1..m {
        if !det3(t, first, &chain[j]).is_positive() {
            return false;
        }
    }
    let mut all = chain.to_vec();
    all.push(t.clone());
    validate_normals(&all).is_good
}

/// A normal `t` closing the chain into a good cone, searched on the slice
/// `v0 . t = 1` where `v0` is the normal of span(first, last): translates of
/// `first + last` grow a ball inside the admissible cone.
pub fn close_chain(chain: &[V3], max_scale: u64) -> Result<V3> {
    if chain.len() < 2 {
        return Err(Error::Precondition("a chain needs at least two normals".into()));
    }
    for i in 0..chain.len().saturating_sub(2) {
        if !det3(&chain[i], &chain[i + 1], &chain[i + 2]).is_positive() {
            return Err(Error::Precondition(format!("chain is not convex at {i}")));
        }
    }
    let (first, last) = (&chain[0], &chain[chain.len() - 1]);
    let v0 = cross_primitive(first, last)?;
    let u = bezout3(&v0);
    let (u1, u2) = plane_lattice_basis(&v0)?;
    let w = first + last;
    let mut scales: Vec<u64> = (0..64).collect();
    let mut s = 64u64;
    while s <= max_scale {
        scales.push(s);
        s *= 2;
    }
    for m in scales {
        let base = &u + &w.scale(&BigInt::from(m));
        for r in 0..=3i64 {
            for a in -r..=r {
                for b in -r..=r {
                    if a.abs().max(b.abs()) != r {
                        continue;
                    }
                    let t = &(&base + &u1.scale(&a.into())) + &u2.scale(&b.into());
                    if closes(chain, &t) {
                        return Ok(t);
                    }
                }
            }
        }
    }
    Err(Error::SearchExhausted(format!(
        "no closing normal with v0 . t = 1 up to scale {max_scale} (one exists for chains meeting the convexity hypothesis)"
    )))
}

/// `true` iff `w . a = d` for every exponent vector `a`.
pub fn weighted_homogeneous_check(exponents: &[Vec<BigInt>], w: &[BigInt], d: &BigInt) -> bool {
    !exponents.is_empty()
        && exponents.iter().all(|a| {
            a.len() == w.len() && a.iter().zip(w).fold(BigInt::zero(), |acc, (x, y)| acc + x * y) == *d
        })
}
