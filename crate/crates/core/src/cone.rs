//! Good cones in Z^3 and the lens-space invariants of their faces.
//!
//! A cone is a cyclic list of primitive inward normals `n^0, ..., n^k`.
//! Vertex `i` of the cross-section polygon lies between faces `i` and `i+1`,
//! so face `j` has vertices `j-1` and `j`.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::exactnum::{cross_primitive, delzant_witness, det3, is_delzant_pair, Mat3, V3};
use crate::json;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureKind {
    /// Adjacent normals are parallel.
    FaceOrder,
    /// Some `det3(n^i, n^{i+1}, n^j)` is not positive.
    ConvexityDet,
    /// Adjacent normals cannot be completed to a Z-basis.
    DelzantPair,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    pub indices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityReport {
    pub is_good: bool,
    pub failures: Vec<Failure>,
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_good {
            return write!(f, "good");
        }
        let parts: Vec<String> = self
            .failures
            .iter()
            .map(|x| format!("{:?}{:?}", x.kind, x.indices))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceInvariants {
    /// Order of the fundamental group of the face's lens space.
    pub b: BigInt,
    /// Euler class of the normal bundle, as the residue in `[0, b)`.
    pub f: BigInt,
    pub gluing: Mat3,
}

impl FaceInvariants {
    pub fn to_json(&self) -> Value {
        json!({"b": json::int(&self.b), "f": json::int(&self.f), "gluing": json::mat3(&self.gluing)})
    }
}

#[derive(Clone, Debug)]
pub struct GoodCone {
    normals: Vec<V3>,
    report: OnceLock<ValidityReport>,
}

impl PartialEq for GoodCone {
    fn eq(&self, o: &GoodCone) -> bool {
        self.normals == o.normals
    }
}

impl Eq for GoodCone {}

impl GoodCone {
    /// Builds a cone from primitive normals; goodness is checked lazily by [`GoodCone::validate`].
    pub fn new(normals: Vec<V3>) -> Result<GoodCone> {
        if normals.len() < 3 {
            return Err(Error::Degenerate(format!("a cone needs at least 3 normals, got {}", normals.len())));
        }
        if let Some(n) = normals.iter().find(|n| !n.is_primitive()) {
            return Err(Error::Precondition(format!("normal {n} is not primitive")));
        }
        Ok(GoodCone { normals, report: OnceLock::new() })
    }

    pub fn from_ints(rows: &[[i64; 3]]) -> Result<GoodCone> {
        GoodCone::new(rows.iter().map(|r| crate::exactnum::v3(r[0], r[1], r[2])).collect())
    }

    /// Builds a cone and requires it to be good.
    pub fn good(normals: Vec<V3>) -> Result<GoodCone> {
        let c = GoodCone::new(normals)?;
        c.require_good()?;
        Ok(c)
    }

    pub fn normals(&self) -> &[V3] {
        &self.normals
    }

    pub fn len(&self) -> usize {
        self.normals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normals.is_empty()
    }

    /// Cyclic index.
    pub fn idx(&self, i: isize) -> usize {
        i.rem_euclid(self.len() as isize) as usize
    }

    /// Normal at a cyclic index.
    pub fn n(&self, i: isize) -> &V3 {
        &self.normals[self.idx(i)]
    }

    pub fn validate(&self) -> &ValidityReport {
        self.report.get_or_init(|| validate_normals(&self.normals))
    }

    pub fn is_good(&self) -> bool {
        self.validate().is_good
    }

    pub fn require_good(&self) -> Result<()> {
        if self.is_good() {
            Ok(())
        } else {
            Err(Error::NotGood(self.validate().clone()))
        }
    }

    /// Same normals in the opposite cyclic order.
    pub fn reversed(&self) -> GoodCone {
        let mut ns = self.normals.clone();
        ns.reverse();
        GoodCone { normals: ns, report: OnceLock::new() }
    }

    /// Reverses the order when `det3(n^0, n^1, n^2) < 0`; the flag reports whether it did.
    pub fn oriented(&self) -> (GoodCone, bool) {
        if det3(&self.normals[0], &self.normals[1], &self.normals[2]).is_negative() {
            (self.reversed(), true)
        } else {
            (self.clone(), false)
        }
    }

    /// Image under a unimodular `u`; the order is reversed when `det u = -1`
    /// so that the orientation convention survives.
    pub fn transform(&self, u: &Mat3) -> Result<GoodCone> {
        let d = u.det();
        if !d.abs().is_one() {
            return Err(Error::Precondition(format!("matrix {u} is not unimodular")));
        }
        let mut ns: Vec<V3> = self.normals.iter().map(|n| u.mul_vec(n)).collect();
        if d.is_negative() {
            ns.reverse();
        }
        GoodCone::new(ns)
    }

    /// Primitive inward edge ray between faces `i` and `i+1`.
    pub fn edge_ray(&self, i: isize) -> Result<V3> {
        self.require_good()?;
        cross_primitive(self.n(i), self.n(i + 1))
    }

    pub fn edge_rays(&self) -> Result<Vec<V3>> {
        (0..self.len() as isize).map(|i| self.edge_ray(i)).collect()
    }

    /// `det3(n^{i-1}, n^i, n^{i+1})`.
    pub fn b(&self, i: isize) -> BigInt {
        det3(self.n(i - 1), self.n(i), self.n(i + 1))
    }

    fn witness(&self, a: isize, b: isize) -> Result<V3> {
        delzant_witness(self.n(a), self.n(b))?
            .ok_or_else(|| Error::NotDelzant(self.idx(a), self.idx(b)))
    }

    pub fn face_invariants(&self, i: isize) -> Result<FaceInvariants> {
        self.require_good()?;
        let (n1, n2, n3) = (self.n(i - 1), self.n(i), self.n(i + 1));
        let l2 = self.witness(i, i + 1)?;
        let l1 = self.witness(i - 1, i)?;
        face_invariants_with(n1, n2, n3, &l1, &l2)
    }

    pub fn can_blowdown_to_orbit(&self, i: isize) -> Result<bool> {
        let fi = self.face_invariants(i)?;
        Ok(fi.b.gcd(&fi.f).is_one())
    }

    /// Transition matrix `(n^i l^i n^{i+1})^{-1} (n^{i+2} l^{i+1} n^{i+1})`.
    pub fn gluing_matrix(&self, i: isize) -> Result<Mat3> {
        let li = self.witness(i, i + 1)?;
        let lj = self.witness(i + 1, i + 2)?;
        gluing_matrix_for(self.n(i), self.n(i + 1), self.n(i + 2), &li, &lj)
    }

    /// Hex SHA-256 of the canonical text form `a,b,c;a,b,c;...`.
    pub fn canonical_hash(&self) -> String {
        hash_normals(&self.normals)
    }

    pub fn to_json(&self) -> Value {
        json!({"normals": self.normals.iter().map(json::v3).collect::<Vec<_>>()})
    }
}

impl fmt::Display for GoodCone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.normals.iter().map(|n| n.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

pub fn hash_normals(ns: &[V3]) -> String {
    let text: Vec<String> = ns
        .iter()
        .map(|n| format!("{},{},{}", n.0[0], n.0[1], n.0[2]))
        .collect();
    let digest = Sha256::digest(text.join(";").as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn validate_normals(ns: &[V3]) -> ValidityReport {
    let m = ns.len();
    let mut failures = Vec::new();
    for i in 0..m {
        let j = (i + 1) % m;
        if ns[i].cross(&ns[j]).is_zero() {
            failures.push(Failure { kind: FailureKind::FaceOrder, indices: vec![i, j] });
        }
    }
    for i in 0..m {
        let j = (i + 1) % m;
        let e = ns[i].cross(&ns[j]);
        for (l, n) in ns.iter().enumerate() {
            if l == i || l == j {
                continue;
            }
            if !n.dot(&e).is_positive() {
                failures.push(Failure { kind: FailureKind::ConvexityDet, indices: vec![i, j, l] });
            }
        }
    }
    for i in 0..m {
        let j = (i + 1) % m;
        if !is_delzant_pair(&ns[i], &ns[j]) {
            failures.push(Failure { kind: FailureKind::DelzantPair, indices: vec![i, j] });
        }
    }
    ValidityReport { is_good: failures.is_empty(), failures }
}

/// Face invariants of the middle face of `(n1, n2, n3)` from explicit witnesses
/// `det3(n1, n2, l1) = 1` and `det3(n2, n3, l2) = 1`.
pub fn face_invariants_with(n1: &V3, n2: &V3, n3: &V3, l1: &V3, l2: &V3) -> Result<FaceInvariants> {
    if !det3(n1, n2, l1).is_one() || !det3(n2, n3, l2).is_one() {
        return Err(Error::Precondition("witnesses must have determinant 1".into()));
    }
    let b = det3(n1, n2, n3);
    if !b.is_positive() {
        return Err(Error::Precondition(format!("det3{n1}{n2}{n3} = {b} is not positive")));
    }
    let f = det3(n1, n3, l2).mod_floor(&b);
    let right = Mat3::from_cols(l2.clone(), n3.clone(), n2.clone());
    let left = Mat3::from_cols(l1.clone(), n1.clone(), n2.clone());
    let gluing = right
        .inv_mul(&left)
        .ok_or_else(|| Error::Degenerate("gluing system has no integer solution".into()))?;
    Ok(FaceInvariants { b, f, gluing })
}

pub fn gluing_matrix_for(a: &V3, b: &V3, c: &V3, la: &V3, lb: &V3) -> Result<Mat3> {
    let left = Mat3::from_cols(a.clone(), la.clone(), b.clone());
    let right = Mat3::from_cols(c.clone(), lb.clone(), b.clone());
    left.inv_mul(&right)
        .ok_or_else(|| Error::Degenerate(format!("{a}, {la}, {b} is not a Z-basis")))
}
