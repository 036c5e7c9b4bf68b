//! Closed forms for the dot count and the LP optimum.
//!
//! ```text
//! nf(n)  = ⌊(2n+1)/3⌋
//! lpf(3t)   = 2t + t/(3t+1)
//! lpf(3t+1) = 2t + 1
//! lpf(3t+2) = 2t + 1 + (2t+1)/(3t+2)
//! ```

use crate::geometry::TriangleSize;
use crate::rational::Rational;

/// `n = 3t + residue`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResidueParam {
    pub t: u64,
    pub residue: u8,
}

impl ResidueParam {
    pub fn of(size: TriangleSize) -> Self {
        let n = u64::from(size.get());
        Self { t: n / 3, residue: (n % 3) as u8 }
    }
}

/// Maximum number of non-attacking dots, `⌊(2n+1)/3⌋`.
pub fn nf(size: TriangleSize) -> u64 {
    (2 * u64::from(size.get()) + 1) / 3
}

/// The three-case form of [`nf`]: `2t`, `2t+1`, `2t+1`.
pub fn nf_by_cases(size: TriangleSize) -> u64 {
    let ResidueParam { t, residue } = ResidueParam::of(size);
    match residue {
        0 => 2 * t,
        _ => 2 * t + 1,
    }
}

/// Conjectured optimum of the LP relaxation, as an exact rational.
pub fn lpf(size: TriangleSize) -> Rational {
    let ResidueParam { t, residue } = ResidueParam::of(size);
    let t = t as i64;
    match residue {
        0 => Rational::from(2 * t) + Rational::ratio(t, 3 * t + 1),
        1 => Rational::from(2 * t + 1),
        _ => Rational::from(2 * t + 1) + Rational::ratio(2 * t + 1, 3 * t + 2),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn size(n: i64) -> TriangleSize {
        TriangleSize::new(n).unwrap()
    }

    #[test]
    fn nf_examples() {
        assert_eq!(nf(size(7)), 5);
        assert_eq!(nf(size(1)), 1);
        assert_eq!(nf(size(12)), 8);
    }

    #[test]
    fn lpf_examples() {
        assert_eq!(lpf(size(6)), Rational::ratio(30, 7));
        assert_eq!(lpf(size(4)), Rational::from(3));
        assert_eq!(lpf(size(11)), Rational::ratio(84, 11));
    }

    #[test]
    fn residue_param_recovers_n() {
        for n in 1..=300 {
            let p = ResidueParam::of(size(n));
            assert_eq!(3 * p.t + u64::from(p.residue), n as u64);
            assert!(p.residue < 3);
        }
    }

    #[test]
    fn floor_of_lpf_is_nf() {
        for n in 1..=10_000 {
            let s = size(n);
            assert_eq!(nf(s), nf_by_cases(s), "n = {n}");
            assert_eq!(lpf(s).floor(), BigInt::from(nf(s)), "n = {n}");
        }
    }

    #[test]
    fn lpf_integral_exactly_when_n_is_1_mod_3() {
        for n in 1..=3000 {
            assert_eq!(lpf(size(n)).is_integer(), n % 3 == 1, "n = {n}");
        }
    }
}
