//! Exact rational scalars and small number-theory helpers.
//!
//! The scalar type of the whole crate is [`Rational`] = `Ratio<BigInt>`:
//! always in lowest terms with a positive denominator, which makes structural
//! equality mathematical equality. This module adds the string codec used by
//! the JSON order format ("n" or "n/d"), gcd/lcm semantics for fractional
//! ideals of ℚ, perfect-square certification, and the trial-division prime
//! utilities that the ramification and search code relies on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational number, always normalized.
pub type Rational = num_rational::BigRational;

/// Parses `"n"` or `"n/d"` (optionally signed) into a normalized rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num_str
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?;
    let den: BigInt = match den_str {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid rational {s:?}")))?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Renders a rational as `"n"` or `"n/d"` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Positive generator of the fractional ℤ-ideal generated by two rationals:
/// gcd(a/b, c/d) = gcd(ad, cb)/(bd). `gcd(x, 0) = |x|`.
pub fn rational_gcd(a: &Rational, b: &Rational) -> Rational {
    if a.is_zero() {
        return b.abs();
    }
    if b.is_zero() {
        return a.abs();
    }
    let num = (a.numer() * b.denom()).gcd(&(b.numer() * a.denom()));
    Rational::new(num, a.denom() * b.denom())
}

/// Exact square root: `Some(r)` with `r² = n` for nonnegative perfect squares.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn exact_sqrt_rational(q: &Rational) -> Option<Rational> {
    let num = exact_sqrt(q.numer())?;
    let den = exact_sqrt(q.denom())?;
    Some(Rational::new(num, den))
}

/// Deterministic primality test by trial division; intended for the small
/// primes (levels, discriminants, neighbor primes) this crate works with.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// All primes ≤ `bound`, ascending.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&n| is_prime(n)).collect()
}

/// Smallest prime strictly greater than `n`.
pub fn next_prime(n: u64) -> u64 {
    let mut c = n + 1;
    while !is_prime(c) {
        c += 1;
    }
    c
}

/// Factors `|n|` by trial division into ascending `(prime, exponent)` pairs.
///
/// Fails if a remaining cofactor does not fit in `u64` — inputs here are
/// discriminant-sized, so this bound is never hit in practice.
pub fn factor(n: &BigInt) -> Result<Vec<(u64, u32)>> {
    let mut m = n.abs();
    if m.is_zero() {
        return Err(Error::Parse("cannot factor zero".into()));
    }
    let mut out = Vec::new();
    let mut p = 2u64;
    while m > BigInt::one() {
        let pb = BigInt::from(p);
        if &pb * &pb > m {
            // The remaining cofactor is prime.
            let q = u64::try_from(&m).map_err(|_| {
                Error::Parse(format!("prime factor {m} too large for this domain"))
            })?;
            out.push((q, 1));
            break;
        }
        let mut e = 0u32;
        while (&m % &pb).is_zero() {
            m /= &pb;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    Ok(out)
}

/// p-adic valuation of a nonzero rational.
pub fn valuation(q: &Rational, p: u64) -> i64 {
    assert!(!q.is_zero(), "valuation of zero");
    let pb = BigInt::from(p);
    let count = |mut n: BigInt| -> i64 {
        let mut v = 0;
        while (&n % &pb).is_zero() {
            n /= &pb;
            v += 1;
        }
        v
    };
    count(q.numer().clone()) - count(q.denom().clone())
}

/// Residue of a rational with denominator coprime to the modulus, in
/// `[0, modulus)`: numer·denom⁻¹ mod modulus.
pub fn rational_mod(q: &Rational, modulus: u64) -> Result<u64> {
    let m = BigInt::from(modulus);
    let den = ((q.denom() % &m) + &m) % &m;
    let den = u64::try_from(&den).expect("reduced residue fits");
    let inv = mod_inverse(den, modulus).ok_or_else(|| Error::NormNotCoprime {
        q: q.clone(),
        n: BigInt::from(modulus),
    })?;
    let num = ((q.numer() % &m) + &m) % &m;
    let num = u64::try_from(&num).expect("reduced residue fits");
    Ok(mulmod(num, inv, modulus))
}

/// Modular inverse in `(ℤ/m)×`, or `None` if not coprime.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

/// `a·b mod m` without overflow.
pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-3", "1/2", "-7/3", "22/7"] {
            let r = parse_rational(s).unwrap();
            assert_eq!(format_rational(&r), s);
        }
        // Non-lowest-terms input normalizes.
        assert_eq!(format_rational(&parse_rational("6/4").unwrap()), "3/2");
        assert_eq!(format_rational(&parse_rational("4/-2").unwrap()), "-2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", "a", "1/0", "1/2/3", "1.5"] {
            assert!(parse_rational(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn gcd_of_fractional_ideals() {
        let g = rational_gcd(
            &parse_rational("1/2").unwrap(),
            &parse_rational("1/3").unwrap(),
        );
        assert_eq!(g, parse_rational("1/6").unwrap());
        let g = rational_gcd(&parse_rational("4").unwrap(), &parse_rational("6").unwrap());
        assert_eq!(g, parse_rational("2").unwrap());
        let g = rational_gcd(&parse_rational("-3/4").unwrap(), &Rational::zero());
        assert_eq!(g, parse_rational("3/4").unwrap());
    }

    #[test]
    fn square_certification() {
        assert_eq!(exact_sqrt(&BigInt::from(729)), Some(BigInt::from(27)));
        assert_eq!(exact_sqrt(&BigInt::from(728)), None);
        assert_eq!(exact_sqrt(&BigInt::from(-4)), None);
        assert_eq!(
            exact_sqrt_rational(&parse_rational("9/16").unwrap()),
            Some(parse_rational("3/4").unwrap())
        );
    }

    #[test]
    fn prime_utilities() {
        assert_eq!(primes_up_to(20), vec![2, 3, 5, 7, 11, 13, 17, 19]);
        assert_eq!(next_prime(13), 17);
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1_000_001)); // 101 × 9901
    }

    #[test]
    fn factoring() {
        let f = factor(&BigInt::from(720)).unwrap();
        assert_eq!(f, vec![(2, 4), (3, 2), (5, 1)]);
        let f = factor(&BigInt::from(-13)).unwrap();
        assert_eq!(f, vec![(13, 1)]);
    }

    #[test]
    fn valuations_and_residues() {
        let q = parse_rational("24/25").unwrap();
        assert_eq!(valuation(&q, 2), 3);
        assert_eq!(valuation(&q, 5), -2);
        assert_eq!(valuation(&q, 7), 0);
        // 3/5 mod 8: 5⁻¹ = 5, 3·5 = 15 ≡ 7.
        assert_eq!(rational_mod(&parse_rational("3/5").unwrap(), 8).unwrap(), 7);
        assert!(rational_mod(&parse_rational("1/2").unwrap(), 8).is_err());
    }
}
