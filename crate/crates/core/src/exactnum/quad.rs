use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default discriminant, matching the Reeb rays `p + sqrt(2) q` used throughout.
pub const DEFAULT_D: u64 = 2;

/// An exact element `rat + irr * sqrt(d)` of the real quadratic field `Q(sqrt d)`.
///
/// Arithmetic operators panic when the discriminants differ; the `checked_*`
/// methods report that case as [`Error::Discriminant`] instead.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quad {
    rat: BigRational,
    irr: BigRational,
    d: u64,
}

/// Checks that `d` is a square-free integer at least 2.
pub fn check_discriminant(d: u64) -> Result<()> {
    if d < 2 {
        return Err(Error::Precondition(format!("discriminant {d} must be at least 2")));
    }
    let mut p = 2u64;
    while p * p <= d {
        if d % (p * p) == 0 {
            return Err(Error::Precondition(format!("discriminant {d} is not square-free")));
        }
        p += 1;
    }
    Ok(())
}

fn sign_of(x: &BigRational) -> Ordering {
    if x.is_positive() {
        Ordering::Greater
    } else if x.is_negative() {
        Ordering::Less
    } else {
        Ordering::Equal
    }
}

impl Quad {
    pub fn new(rat: BigRational, irr: BigRational, d: u64) -> Self {
        Quad { rat, irr, d }
    }

    pub fn from_int(n: i64, d: u64) -> Self {
        Quad::from_bigint(BigInt::from(n), d)
    }

    pub fn from_bigint(n: BigInt, d: u64) -> Self {
        Quad { rat: BigRational::from_integer(n), irr: BigRational::zero(), d }
    }

    pub fn from_rational(r: BigRational, d: u64) -> Self {
        Quad { rat: r, irr: BigRational::zero(), d }
    }

    pub fn zero(d: u64) -> Self {
        Quad::from_int(0, d)
    }

    pub fn one(d: u64) -> Self {
        Quad::from_int(1, d)
    }

    /// The generator `sqrt(d)`.
    pub fn sqrt_d(d: u64) -> Self {
        Quad { rat: BigRational::zero(), irr: BigRational::one(), d }
    }

    pub fn rat(&self) -> &BigRational {
        &self.rat
    }

    pub fn irr(&self) -> &BigRational {
        &self.irr
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    /// Exact sign, decided by comparing `rat^2` with `d * irr^2` when the parts disagree.
    pub fn sign(&self) -> Ordering {
        let sa = sign_of(&self.rat);
        let sb = sign_of(&self.irr);
        if sb == Ordering::Equal {
            return sa;
        }
        if sa == Ordering::Equal || sa == sb {
            return sb;
        }
        let a2 = &self.rat * &self.rat;
        let db2 = &self.irr * &self.irr * BigRational::from_integer(BigInt::from(self.d));
        if a2 > db2 {
            sa
        } else {
            sb
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn abs(&self) -> Quad {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn conj(&self) -> Quad {
        Quad { rat: self.rat.clone(), irr: -&self.irr, d: self.d }
    }

    /// Field norm `rat^2 - d irr^2`.
    pub fn norm(&self) -> BigRational {
        &self.rat * &self.rat - &self.irr * &self.irr * BigRational::from_integer(BigInt::from(self.d))
    }

    fn same_d(&self, other: &Quad) -> Result<()> {
        if self.d == other.d {
            Ok(())
        } else {
            Err(Error::Discriminant(self.d, other.d))
        }
    }

    pub fn checked_add(&self, other: &Quad) -> Result<Quad> {
        self.same_d(other)?;
        Ok(Quad { rat: &self.rat + &other.rat, irr: &self.irr + &other.irr, d: self.d })
    }

    pub fn checked_sub(&self, other: &Quad) -> Result<Quad> {
        self.same_d(other)?;
        Ok(Quad { rat: &self.rat - &other.rat, irr: &self.irr - &other.irr, d: self.d })
    }

    pub fn checked_mul(&self, other: &Quad) -> Result<Quad> {
        self.same_d(other)?;
        let d = BigRational::from_integer(BigInt::from(self.d));
        Ok(Quad {
            rat: &self.rat * &other.rat + &self.irr * &other.irr * d,
            irr: &self.rat * &other.irr + &self.irr * &other.rat,
            d: self.d,
        })
    }

    pub fn checked_div(&self, other: &Quad) -> Result<Quad> {
        self.same_d(other)?;
        let n = other.norm();
        if n.is_zero() {
            return Err(Error::Degenerate("division by zero".into()));
        }
        let num = self.checked_mul(&other.conj())?;
        Ok(Quad { rat: num.rat / &n, irr: num.irr / n, d: self.d })
    }

    pub fn checked_cmp(&self, other: &Quad) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.sign())
    }

    pub fn scale(&self, r: &BigRational) -> Quad {
        Quad { rat: &self.rat * r, irr: &self.irr * r, d: self.d }
    }

    pub fn scale_int(&self, n: &BigInt) -> Quad {
        self.scale(&BigRational::from_integer(n.clone()))
    }

    /// Exact floor.
    pub fn floor(&self) -> BigInt {
        // Write the value as (alpha + s*sqrt(beta)) / gamma with integers and gamma > 0.
        let d = BigInt::from(self.d);
        let (an, ad) = (self.rat.numer().clone(), self.rat.denom().clone());
        let (bn, bd) = (self.irr.numer().clone(), self.irr.denom().clone());
        if bn.is_zero() {
            return an.div_floor(&ad);
        }
        // irr * sqrt(d) = sign(bn) * sqrt(bn^2 d) / bd
        let gamma = &ad * &bd;
        let alpha = &an * &bd;
        let beta = &bn * &bn * &d * &ad * &ad;
        let r = beta.sqrt();
        let exact = &r * &r == beta;
        let top = if bn.is_positive() {
            alpha + r
        } else if exact {
            alpha - r
        } else {
            alpha - r - BigInt::one()
        };
        top.div_floor(&gamma)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// Floating-point approximation, for presentation only.
    pub fn to_f64(&self) -> f64 {
        let a = self.rat.to_f64().unwrap_or(f64::NAN);
        let b = self.irr.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }
}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Quad) -> Option<Ordering> {
        self.checked_cmp(other).ok()
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irr.is_zero() {
            write!(f, "{}", self.rat)
        } else if self.rat.is_zero() {
            write!(f, "{}*sqrt({})", self.irr, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.rat, self.irr, self.d)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Quad> for &Quad {
            type Output = Quad;
            fn $m(self, rhs: &Quad) -> Quad {
                self.$checked(rhs).expect(concat!("Quad::", stringify!($m)))
            }
        }
        impl $tr<Quad> for Quad {
            type Output = Quad;
            fn $m(self, rhs: Quad) -> Quad {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Quad> for Quad {
            type Output = Quad;
            fn $m(self, rhs: &Quad) -> Quad {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad { rat: -&self.rat, irr: -&self.irr, d: self.d }
    }
}

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: (i64, i64), b: (i64, i64)) -> Quad {
        Quad::new(
            BigRational::new(a.0.into(), a.1.into()),
            BigRational::new(b.0.into(), b.1.into()),
            2,
        )
    }

    #[test]
    fn signs_by_case() {
        assert_eq!(q((3, 2), (-1, 1)).sign(), Ordering::Greater); // 1.5 - 1.414
        assert_eq!(q((7, 5), (-1, 1)).sign(), Ordering::Less); // 1.4 - 1.414
        assert_eq!(q((0, 1), (0, 1)).sign(), Ordering::Equal);
        assert_eq!(q((-1, 1), (0, 1)).sign(), Ordering::Less);
        assert_eq!(q((-140, 99), (1, 1)).sign(), Ordering::Greater);
    }

    #[test]
    fn division_inverts_multiplication() {
        let x = q((3, 4), (-5, 7));
        let y = q((1, 1), (1, 1));
        assert_eq!(&(&x * &y) / &y, x);
        assert!(y.checked_div(&Quad::zero(2)).is_err());
    }

    #[test]
    fn mixed_discriminants_rejected() {
        let x = Quad::sqrt_d(2);
        let y = Quad::sqrt_d(3);
        assert!(matches!(x.checked_add(&y), Err(Error::Discriminant(2, 3))));
        assert_eq!(x.partial_cmp(&y), None);
    }

    #[test]
    fn floor_matches_known_values() {
        assert_eq!(Quad::sqrt_d(2).floor(), BigInt::from(1));
        assert_eq!((-Quad::sqrt_d(2)).floor(), BigInt::from(-2));
        assert_eq!(q((-1, 1), (1, 1)).floor(), BigInt::from(0));
        assert_eq!(q((5, 2), (0, 1)).floor(), BigInt::from(2));
        assert_eq!(q((1, 3), (-3, 2)).ceil(), BigInt::from(-1)); // 0.333 - 2.121
    }

    #[test]
    fn discriminant_checks() {
        assert!(check_discriminant(2).is_ok());
        assert!(check_discriminant(30).is_ok());
        assert!(check_discriminant(12).is_err());
        assert!(check_discriminant(1).is_err());
    }
}
