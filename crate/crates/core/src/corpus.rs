//! Seeded random good cones, Reeb rays and unimodular matrices for tests and
//! examples.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::cone::GoodCone;
use crate::error::Result;
use crate::exactnum::{delzant_witness, v3, Mat3, V3};
use crate::reeb::ReebVector;
use crate::surgery::{cut, find_blowdown_normal, CutKind};

/// A product of random elementary matrices, a coordinate permutation and signs.
pub fn random_unimodular<R: Rng>(rng: &mut R) -> Mat3 {
    let mut m = Mat3::identity();
    for _ in 0..rng.gen_range(2..7) {
        let i = rng.gen_range(0..3);
        let j = (i + rng.gen_range(1..3)) % 3;
        let s: i64 = rng.gen_range(-2..=2);
        let mut rows = [[0i64; 3]; 3];
        for (r, row) in rows.iter_mut().enumerate() {
            row[r] = 1;
        }
        rows[i][j] = s;
        m = Mat3::from_rows(rows).mul(&m);
    }
    let mut perm = [0usize, 1, 2];
    perm.shuffle(rng);
    let mut rows = [[0i64; 3]; 3];
    for (r, &c) in perm.iter().enumerate() {
        rows[r][c] = if rng.gen_bool(0.5) { 1 } else { -1 };
    }
    Mat3::from_rows(rows).mul(&m)
}

/// Smooth corner cut at vertex `i`: `t = a n^i + b n^{i+1} - l` with `det3(n^i, n^{i+1}, l) = 1`.
pub fn corner_cut_normal(cone: &GoodCone, i: usize, a: i64, b: i64) -> Result<Option<V3>> {
    let (n1, n2) = (cone.n(i as isize), cone.n(i as isize + 1));
    let Some(l) = delzant_witness(n1, n2)? else { return Ok(None) };
    Ok(Some(&(&n1.scale(&a.into()) + &n2.scale(&b.into())) - &l))
}

/// Applies a random orbit blow-up; returns the new cone and the inserted index.
pub fn random_orbit_blowup<R: Rng>(rng: &mut R, cone: &GoodCone) -> Option<(GoodCone, usize, V3)> {
    for _ in 0..32 {
        let i = rng.gen_range(0..cone.len());
        let (a, b) = (rng.gen_range(0..4), rng.gen_range(0..4));
        let Ok(Some(t)) = corner_cut_normal(cone, i, a, b) else { continue };
        if let Ok(r) = cut(cone, &t) {
            if matches!(r.kind, CutKind::OrbitBlowup { .. }) {
                return Some((r.cone, r.inserted, t));
            }
        }
    }
    None
}

/// A random good cone built from the simplex by `cuts` corner cuts and a unimodular change of basis.
pub fn random_good_cone<R: Rng>(rng: &mut R, cuts: usize) -> GoodCone {
    let mut c = GoodCone::from_ints(&[[1, 0, 0], [0, 1, 0], [0, 0, 1]]).expect("simplex");
    for _ in 0..cuts {
        if let Some((next, _, _)) = random_orbit_blowup(rng, &c) {
            c = next;
        }
    }
    c.transform(&random_unimodular(rng)).expect("unimodular image")
}

/// A cone `big` and face `i` such that cutting `big` by the old normal `n` is a
/// lens blow-up back to `cone`.
pub fn lens_blowup_pair<R: Rng>(rng: &mut R, cone: &GoodCone) -> Option<(GoodCone, usize, V3)> {
    if cone.len() < 4 {
        return None;
    }
    let i = rng.gen_range(0..cone.len());
    let t = find_blowdown_normal(cone, i, None, 8).ok()??;
    let big = crate::surgery::replace_range(cone, i, i, &t).ok()?;
    Some((big, i, cone.normals()[i].clone()))
}

/// A rank-2 admissible Reeb ray. With `flats` the ray is `n^a + sqrt(2) n^b`
/// for non-adjacent faces, so both faces are flat.
pub fn random_reeb<R: Rng>(rng: &mut R, cone: &GoodCone, flats: bool) -> ReebVector {
    let m = cone.len();
    let ns = cone.normals();
    if flats && m >= 4 {
        loop {
            let a = rng.gen_range(0..m);
            let b = rng.gen_range(0..m);
            let gap = (b + m - a) % m;
            if gap >= 2 && gap <= m - 2 {
                return ReebVector::from_ints(&ns[a], &ns[b], 2).expect("nonzero");
            }
        }
    }
    loop {
        let mut p = V3::zero();
        let mut q = V3::zero();
        for n in ns {
            p = &p + &n.scale(&BigInt::from(rng.gen_range(1..4)));
            q = &q + &n.scale(&BigInt::from(rng.gen_range(0..3)));
        }
        let r = ReebVector::from_ints(&p, &q, 2).expect("nonzero");
        if r.rank() == 2 {
            return r;
        }
    }
}

/// A cone together with an admissible rank-2 Reeb ray.
#[derive(Clone, Debug)]
pub struct Instance {
    pub cone: GoodCone,
    pub reeb: ReebVector,
}

pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let cuts = rng.gen_range(1..6);
    let cone = random_good_cone(rng, cuts);
    let flats = rng.gen_bool(0.5);
    let reeb = random_reeb(rng, &cone, flats);
    Instance { cone, reeb }
}

/// Sign-flipped control: `-R` is never admissible.
pub fn sign_flipped(r: &ReebVector) -> ReebVector {
    r.negated()
}

/// `true` if all coordinates of `v` are at most `bound` in absolute value.
pub fn within_box(v: &V3, bound: i64) -> bool {
    v.0.iter().all(|x| x.abs() <= BigInt::from(bound))
}

/// The standard simplex, for examples.
pub fn simplex() -> GoodCone {
    GoodCone::new(vec![v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)]).expect("simplex")
}
