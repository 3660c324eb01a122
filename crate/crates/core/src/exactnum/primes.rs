use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use crate::error::{Error, Result};

const BASES: [u32; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin with the first 13 prime bases; deterministic below 3.3e24.
/// Above that bound a composite passing all bases is astronomically unlikely
/// but not excluded.
pub fn is_prime(n: &BigInt) -> bool {
    if *n < BigInt::from(2) {
        return false;
    }
    for &p in &BASES {
        let p = BigInt::from(p);
        if *n == p {
            return true;
        }
        if n.is_multiple_of(&p) {
            return false;
        }
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let mut d = nm1.clone();
    let mut s = 0u32;
    while d.is_even() {
        d >>= 1;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Smallest prime `p >= lower` with `p ≡ a (mod m)`.
pub fn prime_in_progression(a: &BigInt, m: &BigInt, lower: &BigInt) -> Result<BigInt> {
    if !m.is_positive() {
        return Err(Error::Precondition(format!("modulus {m} must be positive")));
    }
    if !a.gcd(m).is_one() {
        return Err(Error::Precondition(format!("no primes in {a} mod {m}: gcd is not 1")));
    }
    let lo = if *lower < BigInt::from(2) { BigInt::from(2) } else { lower.clone() };
    let mut x = &lo + (a - &lo).mod_floor(m);
    // Dirichlet guarantees termination; the step count is only bounded for sanity.
    let cap = 10_000_000u64.max(m.to_u64().unwrap_or(u64::MAX).saturating_mul(64));
    for _ in 0..cap {
        if is_prime(&x) {
            return Ok(x);
        }
        x += m;
    }
    Err(Error::SearchExhausted(format!("no prime ≡ {a} mod {m} found above {lower}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in 0..5000u64 {
            assert_eq!(is_prime(&BigInt::from(n)), trial(n), "{n}");
        }
        // strong pseudoprime to bases 2..37 below 3.3e24 is excluded by base 41
        assert!(!is_prime(&"318665857834031151167461".parse::<BigInt>().unwrap()));
        assert!(is_prime(&BigInt::from(1_000_000_007u64)));
    }

    #[test]
    fn progression_examples() {
        let p = |a: i64, m: i64, l: i64| {
            prime_in_progression(&a.into(), &m.into(), &l.into()).unwrap()
        };
        assert_eq!(p(1, 4, 10), BigInt::from(13));
        assert_eq!(p(1, 1, 2), BigInt::from(2));
        assert_eq!(p(3, 10, 100), BigInt::from(103));
        assert_eq!(p(-1, 6, 0), BigInt::from(5));
        assert!(prime_in_progression(&2.into(), &4.into(), &0.into()).is_err());
    }
}
