//! Exact scalars and lattice algebra in Z^3.

mod lattice;
mod primes;
mod quad;

pub use lattice::{
    bezout3, cross_primitive, delzant_witness, det3, det3_quad, egcd, hermite_rows, is_delzant_pair,
    plane_lattice_basis, reduce_mod_lattice, v2, v3, Mat3, V2, V3,
};
pub use primes::{is_prime, prime_in_progression};
pub use quad::{check_discriminant, Quad, DEFAULT_D};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Vector over Q(sqrt d).
pub type QV3 = [Quad; 3];

pub fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

pub fn int(n: i64) -> BigInt {
    BigInt::from(n)
}

/// gcd with the convention gcd(0, k) = |k|.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    a.lcm(b)
}

pub fn qv3_from_int(v: &V3, d: u64) -> QV3 {
    v.0.clone().map(|x| Quad::from_bigint(x, d))
}

/// `p + sqrt(d) q` for rational vectors p, q.
pub fn qv3(p: &[BigRational; 3], q: &[BigRational; 3], d: u64) -> QV3 {
    [0, 1, 2].map(|i| Quad::new(p[i].clone(), q[i].clone(), d))
}

/// Clears denominators of a rational vector and returns the primitive integer direction.
pub fn rational_direction(v: &[BigRational; 3]) -> Option<V3> {
    let den = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let w = V3(v.clone().map(|x| (x * BigRational::from_integer(den.clone())).to_integer()));
    w.primitive()
}

pub fn abs(x: &BigInt) -> BigInt {
    x.abs()
}
