use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::quad::Quad;
use crate::error::{Error, Result};

/// Integer vector in Z^3.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct V3(pub [BigInt; 3]);

pub fn v3(a: i64, b: i64, c: i64) -> V3 {
    V3([a.into(), b.into(), c.into()])
}

impl V3 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> V3 {
        V3([a, b, c])
    }

    pub fn zero() -> V3 {
        v3(0, 0, 0)
    }

    pub fn unit(i: usize) -> V3 {
        let mut v = V3::zero();
        v.0[i] = BigInt::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, o: &V3) -> BigInt {
        &self.0[0] * &o.0[0] + &self.0[1] * &o.0[1] + &self.0[2] * &o.0[2]
    }

    pub fn cross(&self, o: &V3) -> V3 {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &o.0;
        V3([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])
    }

    pub fn scale(&self, s: &BigInt) -> V3 {
        V3([&self.0[0] * s, &self.0[1] * s, &self.0[2] * s])
    }

    /// gcd of the absolute coordinates; 0 for the zero vector.
    pub fn content(&self) -> BigInt {
        self.0[0].gcd(&self.0[1]).gcd(&self.0[2])
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// `self / content`, sign preserved. `None` for the zero vector.
    pub fn primitive(&self) -> Option<V3> {
        let g = self.content();
        if g.is_zero() {
            return None;
        }
        Some(V3([&self.0[0] / &g, &self.0[1] / &g, &self.0[2] / &g]))
    }

    /// Flips the sign so the first nonzero coordinate is positive.
    pub fn sign_normalized(&self) -> V3 {
        match self.0.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => -self,
            _ => self.clone(),
        }
    }

    pub fn dot_quad(&self, q: &[Quad; 3]) -> Quad {
        let mut acc = Quad::zero(q[0].d());
        for i in 0..3 {
            acc = acc + q[i].scale_int(&self.0[i]);
        }
        acc
    }

    pub fn to_rational(&self) -> [BigRational; 3] {
        self.0.clone().map(BigRational::from_integer)
    }
}

impl fmt::Display for V3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl Add for &V3 {
    type Output = V3;
    fn add(self, o: &V3) -> V3 {
        V3([&self.0[0] + &o.0[0], &self.0[1] + &o.0[1], &self.0[2] + &o.0[2]])
    }
}

impl Sub for &V3 {
    type Output = V3;
    fn sub(self, o: &V3) -> V3 {
        V3([&self.0[0] - &o.0[0], &self.0[1] - &o.0[1], &self.0[2] - &o.0[2]])
    }
}

impl Neg for &V3 {
    type Output = V3;
    fn neg(self) -> V3 {
        V3([-&self.0[0], -&self.0[1], -&self.0[2]])
    }
}

impl Add for V3 {
    type Output = V3;
    fn add(self, o: V3) -> V3 {
        &self + &o
    }
}

impl Sub for V3 {
    type Output = V3;
    fn sub(self, o: V3) -> V3 {
        &self - &o
    }
}

impl Neg for V3 {
    type Output = V3;
    fn neg(self) -> V3 {
        -&self
    }
}

/// Integer vector in Z^2.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct V2(pub [BigInt; 2]);

pub fn v2(a: i64, b: i64) -> V2 {
    V2([a.into(), b.into()])
}

impl V2 {
    pub fn is_primitive(&self) -> bool {
        self.0[0].gcd(&self.0[1]).is_one()
    }

    pub fn det(&self, o: &V2) -> BigInt {
        &self.0[0] * &o.0[1] - &self.0[1] * &o.0[0]
    }
}

impl fmt::Display for V2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}

pub fn det3(u: &V3, v: &V3, w: &V3) -> BigInt {
    u.dot(&v.cross(w))
}

pub fn det3_quad(u: &[Quad; 3], v: &[Quad; 3], w: &[Quad; 3]) -> Result<Quad> {
    let c0 = v[1].checked_mul(&w[2])?.checked_sub(&v[2].checked_mul(&w[1])?)?;
    let c1 = v[2].checked_mul(&w[0])?.checked_sub(&v[0].checked_mul(&w[2])?)?;
    let c2 = v[0].checked_mul(&w[1])?.checked_sub(&v[1].checked_mul(&w[0])?)?;
    u[0].checked_mul(&c0)?.checked_add(&u[1].checked_mul(&c1)?)?.checked_add(&u[2].checked_mul(&c2)?)
}

pub fn cross_primitive(u: &V3, v: &V3) -> Result<V3> {
    u.cross(v)
        .primitive()
        .ok_or_else(|| Error::Degenerate(format!("{u} and {v} are parallel")))
}

/// 3x3 integer matrix stored by columns.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mat3 {
    pub cols: [V3; 3],
}

impl Mat3 {
    pub fn from_cols(a: V3, b: V3, c: V3) -> Mat3 {
        Mat3 { cols: [a, b, c] }
    }

    pub fn from_rows(rows: [[i64; 3]; 3]) -> Mat3 {
        let c = |j: usize| v3(rows[0][j], rows[1][j], rows[2][j]);
        Mat3 { cols: [c(0), c(1), c(2)] }
    }

    pub fn identity() -> Mat3 {
        Mat3::from_cols(V3::unit(0), V3::unit(1), V3::unit(2))
    }

    /// Entry at row `r`, column `c` (0-based).
    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.cols[c].0[r]
    }

    pub fn row(&self, r: usize) -> V3 {
        V3([self.at(r, 0).clone(), self.at(r, 1).clone(), self.at(r, 2).clone()])
    }

    pub fn transpose(&self) -> Mat3 {
        Mat3::from_cols(self.row(0), self.row(1), self.row(2))
    }

    pub fn det(&self) -> BigInt {
        det3(&self.cols[0], &self.cols[1], &self.cols[2])
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn mul_vec(&self, v: &V3) -> V3 {
        let mut out = V3::zero();
        for j in 0..3 {
            out = &out + &self.cols[j].scale(&v.0[j]);
        }
        out
    }

    pub fn mul(&self, o: &Mat3) -> Mat3 {
        Mat3 { cols: o.cols.clone().map(|c| self.mul_vec(&c)) }
    }

    /// Adjugate, so that `M * adj(M) = det(M) I`.
    pub fn adjugate(&self) -> Mat3 {
        let [a, b, c] = &self.cols;
        // Rows of the adjugate are the pairwise cross products of the columns.
        Mat3::from_cols(b.cross(c), c.cross(a), a.cross(b)).transpose()
    }

    /// Exact integer inverse; `None` unless unimodular.
    pub fn inverse(&self) -> Option<Mat3> {
        let d = self.det();
        if !d.abs().is_one() {
            return None;
        }
        let adj = self.adjugate();
        Some(Mat3 { cols: adj.cols.map(|c| c.scale(&d)) })
    }

    /// `self^{-1} * other` when it is an integer matrix.
    pub fn inv_mul(&self, other: &Mat3) -> Option<Mat3> {
        let d = self.det();
        if d.is_zero() {
            return None;
        }
        let p = self.adjugate().mul(other);
        let mut cols = p.cols.clone();
        for c in cols.iter_mut() {
            for x in c.0.iter_mut() {
                if !x.is_multiple_of(&d) {
                    return None;
                }
                *x = &*x / &d;
            }
        }
        Some(Mat3 { cols })
    }

    /// Applies `self` to a quadratic vector.
    pub fn mul_quad(&self, v: &[Quad; 3]) -> [Quad; 3] {
        let r = |i: usize| self.row(i).dot_quad(v);
        [r(0), r(1), r(2)]
    }
}

impl fmt::Display for Mat3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; {}; {}]", self.row(0), self.row(1), self.row(2))
    }
}

/// Extended gcd: returns (g, x, y) with a*x + b*y = g >= 0.
pub fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = r0.div_floor(&r1);
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
        let t2 = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_negative() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Integer vector `x` with `w . x = content(w)`.
pub fn bezout3(w: &V3) -> V3 {
    let (g01, x0, x1) = egcd(&w.0[0], &w.0[1]);
    let (_, y, z) = egcd(&g01, &w.0[2]);
    V3([&x0 * &y, &x1 * &y, z])
}

/// Row Hermite normal form of the lattice spanned by `rows`; returns the
/// nonzero rows with their pivot columns.
pub fn hermite_rows(rows: &[V3]) -> Vec<(usize, V3)> {
    let mut rs: Vec<V3> = rows.to_vec();
    let mut out: Vec<(usize, V3)> = Vec::new();
    for col in 0..3 {
        loop {
            let nz: Vec<usize> = (0..rs.len()).filter(|&i| !rs[i].0[col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| rs[i].0[col].abs()).unwrap();
            let piv = rs[p].clone();
            for &i in &nz {
                if i != p {
                    let q = rs[i].0[col].div_floor(&piv.0[col]);
                    rs[i] = &rs[i] - &piv.scale(&q);
                }
            }
        }
        if let Some(i) = (0..rs.len()).find(|&i| !rs[i].0[col].is_zero()) {
            let mut piv = rs.remove(i);
            if piv.0[col].is_negative() {
                piv = -piv;
            }
            for (_, r) in out.iter_mut() {
                let q = r.0[col].div_floor(&piv.0[col]);
                *r = &*r - &piv.scale(&q);
            }
            out.push((col, piv));
        }
        rs.retain(|r| !r.is_zero());
    }
    out
}

/// Canonical representative of `x` modulo the lattice with the given Hermite rows.
pub fn reduce_mod_lattice(x: &V3, hnf: &[(usize, V3)]) -> V3 {
    let mut x = x.clone();
    for (col, r) in hnf {
        let q = x.0[*col].div_floor(&r.0[*col]);
        x = &x - &r.scale(&q);
    }
    x
}

/// `true` when the 2x2 minors of the pair have gcd 1.
pub fn is_delzant_pair(n: &V3, m: &V3) -> bool {
    n.cross(m).content().is_one()
}

/// Vector `l` with `det3(n, m, l) = 1`, reduced modulo span(n, m).
pub fn delzant_witness(n: &V3, m: &V3) -> Result<Option<V3>> {
    if !n.is_primitive() || !m.is_primitive() {
        return Err(Error::Precondition(format!("{n} and {m} must be primitive")));
    }
    let w = n.cross(m);
    if !w.content().is_one() {
        return Ok(None);
    }
    // det3(n, m, l) = l . (n x m)
    let l = bezout3(&w);
    let hnf = hermite_rows(&[n.clone(), m.clone()]);
    Ok(Some(reduce_mod_lattice(&l, &hnf)))
}

fn round_div(p: &BigInt, q: &BigInt) -> BigInt {
    // q > 0
    let num: BigInt = p * 2 + q;
    num.div_floor(&(q * 2))
}

/// Basis (u1, u2) of the lattice Z^3 ∩ v0^⊥ with det3(u1, u2, v0) > 0.
pub fn plane_lattice_basis(v0: &V3) -> Result<(V3, V3)> {
    let v0 = v0
        .primitive()
        .ok_or_else(|| Error::Degenerate("zero normal vector".into()))?;
    // Column reduction of the 1x3 relation row, tracking the unimodular transform.
    let mut row = v0.0.clone();
    let mut u = [V3::unit(0), V3::unit(1), V3::unit(2)];
    loop {
        let nz: Vec<usize> = (0..3).filter(|&j| !row[j].is_zero()).collect();
        if nz.len() <= 1 {
            break;
        }
        let p = *nz.iter().min_by_key(|&&j| row[j].abs()).unwrap();
        for &j in &nz {
            if j != p {
                let q = row[j].div_floor(&row[p]);
                row[j] = &row[j] - &q * &row[p];
                u[j] = &u[j] - &u[p].scale(&q);
            }
        }
    }
    let kernel: Vec<V3> = (0..3).filter(|&j| row[j].is_zero()).map(|j| u[j].clone()).collect();
    let (mut b1, mut b2) = (kernel[0].clone(), kernel[1].clone());
    // Lagrange reduction.
    loop {
        if b1.dot(&b1) > b2.dot(&b2) {
            std::mem::swap(&mut b1, &mut b2);
        }
        let mu = round_div(&b1.dot(&b2), &b1.dot(&b1));
        if mu.is_zero() {
            break;
        }
        b2 = &b2 - &b1.scale(&mu);
    }
    let (b1, b2) = (b1.sign_normalized(), b2.sign_normalized());
    let (u1, mut u2) = if b1 > b2 { (b1, b2) } else { (b2, b1) };
    if det3(&u1, &u2, &v0).is_negative() {
        u2 = -u2;
    }
    Ok((u1, u2))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det3_examples() {
        assert_eq!(det3(&V3::unit(0), &V3::unit(1), &V3::unit(2)), BigInt::from(1));
        assert_eq!(det3(&v3(1, 0, 1), &v3(1, 1, 1), &v3(1, 2, 3)), BigInt::from(2));
        assert_eq!(det3(&v3(1, 1, 1), &v3(1, 0, 1), &v3(1, 2, 3)), BigInt::from(-2));
    }

    #[test]
    fn cross_primitive_examples() {
        assert_eq!(cross_primitive(&v3(1, 0, 0), &v3(0, 1, 0)).unwrap(), v3(0, 0, 1));
        assert_eq!(cross_primitive(&v3(1, 0, 1), &v3(1, 3, 7)).unwrap(), v3(-1, -2, 1));
        assert_eq!(cross_primitive(&v3(2, 0, 0), &v3(0, 2, 0)).unwrap(), v3(0, 0, 1));
        assert!(cross_primitive(&v3(1, 2, 3), &v3(-2, -4, -6)).is_err());
    }

    #[test]
    fn witness_examples() {
        assert_eq!(delzant_witness(&v3(0, 1, 0), &v3(0, 0, 1)).unwrap(), Some(v3(1, 0, 0)));
        let l = delzant_witness(&v3(1, 2, 3), &v3(1, 1, 1)).unwrap().unwrap();
        assert_eq!(det3(&v3(1, 2, 3), &v3(1, 1, 1), &l), BigInt::from(1));
        assert_eq!(delzant_witness(&v3(1, 0, 0), &v3(-1, 0, 2)).unwrap(), None);
        assert!(delzant_witness(&v3(2, 0, 0), &v3(0, 1, 0)).is_err());
    }

    #[test]
    fn plane_basis_coordinate_plane() {
        assert_eq!(plane_lattice_basis(&v3(0, 0, 1)).unwrap(), (v3(1, 0, 0), v3(0, 1, 0)));
        assert!(plane_lattice_basis(&V3::zero()).is_err());
    }

    #[test]
    fn plane_basis_saturates() {
        let v0 = v3(1, 2, -1);
        let (u1, u2) = plane_lattice_basis(&v0).unwrap();
        assert!(det3(&u1, &u2, &v0).is_positive());
        // every kernel point in a box is an integer combination
        let d = det3(&u1, &u2, &v0);
        for x in -4..=4i64 {
            for y in -4..=4i64 {
                for z in -4..=4i64 {
                    let p = v3(x, y, z);
                    if !p.dot(&v0).is_zero() {
                        continue;
                    }
                    let a = det3(&p, &u2, &v0);
                    let b = det3(&u1, &p, &v0);
                    assert!(a.is_multiple_of(&d) && b.is_multiple_of(&d), "{p}");
                }
            }
        }
    }

    #[test]
    fn matrix_inverse_round_trip() {
        let m = Mat3::from_rows([[2, 1, 0], [1, 1, 0], [3, 5, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Mat3::identity());
        assert_eq!(m.inv_mul(&m).unwrap(), Mat3::identity());
        assert!(Mat3::from_rows([[2, 0, 0], [0, 1, 0], [0, 0, 1]]).inverse().is_none());
    }

    #[test]
    fn egcd_signs() {
        let (g, x, y) = egcd(&BigInt::from(-12), &BigInt::from(18));
        assert_eq!(g, BigInt::from(6));
        assert_eq!(BigInt::from(-12) * x + BigInt::from(18) * y, g);
        let w = v3(6, 10, 15);
        assert_eq!(w.dot(&bezout3(&w)), BigInt::from(1));
    }
}
