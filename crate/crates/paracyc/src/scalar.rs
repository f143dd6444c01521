//! The exact scalar type: arbitrary-precision rationals.
//!
//! All arithmetic in the engine is performed over the rationals with zero
//! tolerance; `num`'s `BigRational` keeps values canonical (positive
//! denominator, reduced fraction) by construction.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

/// Exact rational scalar. Canonical form (reduced, positive denominator) is
/// maintained by the underlying implementation.
pub type Scalar = BigRational;

/// The rational `n / d`. Panics if `d == 0`.
pub fn q(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a scalar.
pub fn qi(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Zero.
pub fn zero() -> Scalar {
    Scalar::zero()
}

/// One.
pub fn one() -> Scalar {
    Scalar::one()
}

/// `(-1)^n` as a scalar.
pub fn sign(n: usize) -> Scalar {
    if n % 2 == 0 {
        one()
    } else {
        -one()
    }
}

/// `n!` as a scalar.
pub fn factorial(n: usize) -> Scalar {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    BigRational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let x = q(2, -4);
        assert_eq!(x, q(-1, 2));
        assert!(x.denom() > &BigInt::zero());
    }

    #[test]
    fn factorial_and_sign() {
        assert_eq!(factorial(0), qi(1));
        assert_eq!(factorial(4), qi(24));
        assert_eq!(sign(3), qi(-1));
        assert_eq!(sign(0), qi(1));
    }
}
