//! Closed-form dual certificates and the upper bound they prove.
//!
//! With `n = 3t + s`, the certificate assigns each line a weight depending only
//! on its length `i`:
//!
//! | `s` | rows `r_i`, columns `c_i`   | diagonals `d_i`        |
//! |-----|-----------------------------|------------------------|
//! | 1   | `max(0, (i-t-1)/(3t+1))`    | `max(0, (i-t)/(3t+1))` |
//! | 2   | `max(0, (i-t-1)/(3t+2))`    | same as rows           |
//! | 0   | `max(0, (i-t)/(3t+1))`      | same as rows           |
//!
//! A certificate is feasible for the dual LP when every cell's three lines carry
//! total weight at least 1. By weak duality its objective then bounds the LP
//! optimum, and hence `N(n)`, from above.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::closed_forms::ResidueParam;
use crate::error::{Error, Result};
use crate::geometry::{all_cells, line_indices_unchecked, Cell, LineFamily, TriangleSize};
use crate::lp_model::line_var_index;
use crate::rational::Rational;

/// Weights for every row, column and diagonal, each indexed by line length
/// (`r[i - 1]` is the weight of the row with `i` cells).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualCertificate {
    pub size: TriangleSize,
    pub r: Vec<Rational>,
    pub c: Vec<Rational>,
    pub d: Vec<Rational>,
}

impl DualCertificate {
    /// Fails unless each vector has exactly `n` entries.
    pub fn new(size: TriangleSize, r: Vec<Rational>, c: Vec<Rational>, d: Vec<Rational>) -> Result<Self> {
        let n = size.get() as usize;
        for (family, v) in LineFamily::ALL.into_iter().zip([&r, &c, &d]) {
            if v.len() != n {
                return Err(Error::Domain(format!(
                    "{family} weights have length {}, expected {n}",
                    v.len()
                )));
            }
        }
        Ok(Self { size, r, c, d })
    }

    /// Every entry set to `value`.
    pub fn uniform(size: TriangleSize, value: Rational) -> Self {
        let v = vec![value; size.get() as usize];
        Self { size, r: v.clone(), c: v.clone(), d: v }
    }

    pub fn weights(&self, family: LineFamily) -> &[Rational] {
        match family {
            LineFamily::Row => &self.r,
            LineFamily::Column => &self.c,
            LineFamily::Diagonal => &self.d,
        }
    }

    /// The certificate as a point of [`crate::lp_model::build_dual`].
    pub fn to_dual_point(&self) -> Vec<Rational> {
        let mut point = vec![Rational::zero(); 3 * self.size.get() as usize];
        for family in LineFamily::ALL {
            for (idx, w) in self.weights(family).iter().enumerate() {
                point[line_var_index(family, idx as u32 + 1, self.size)] = w.clone();
            }
        }
        point
    }

    /// `{"n", "r", "c", "d", "objective", "feasible"}` with `"p/q"` strings.
    pub fn to_json(&self) -> CertificateJson {
        CertificateJson {
            n: self.size,
            r: self.r.clone(),
            c: self.c.clone(),
            d: self.d.clone(),
            objective: certificate_objective(self),
            feasible: verify_feasible(self).is_ok(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub n: TriangleSize,
    pub r: Vec<Rational>,
    pub c: Vec<Rational>,
    pub d: Vec<Rational>,
    pub objective: Rational,
    pub feasible: bool,
}

impl CertificateJson {
    /// Rebuilds the certificate; the stored `objective` and `feasible` fields
    /// are recomputed rather than trusted.
    pub fn into_certificate(self) -> Result<DualCertificate> {
        DualCertificate::new(self.n, self.r, self.c, self.d)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FeasibilityReport {
    /// Lines with a negative weight.
    pub negative: Vec<(LineFamily, u32)>,
    /// Cells whose three lines carry total weight below 1, in board order.
    pub violated: Vec<Cell>,
    /// Cells whose constraint holds with equality.
    pub tight: u64,
}

impl FeasibilityReport {
    pub fn is_ok(&self) -> bool {
        self.negative.is_empty() && self.violated.is_empty()
    }
}

fn weight(numer: i64, denom: i64) -> Rational {
    Rational::ratio(numer, denom).clamp_nonnegative()
}

pub fn build_certificate(size: TriangleSize) -> DualCertificate {
    let ResidueParam { t, residue } = ResidueParam::of(size);
    let t = t as i64;
    let n = i64::from(size.get());
    let line = |shift: i64, denom: i64| -> Vec<Rational> {
        (1..=n).map(|i| weight(i - shift, denom)).collect()
    };
    let (r, d) = match residue {
        1 => (line(t + 1, 3 * t + 1), line(t, 3 * t + 1)),
        2 => {
            let w = line(t + 1, 3 * t + 2);
            (w.clone(), w)
        }
        _ => {
            let w = line(t, 3 * t + 1);
            (w.clone(), w)
        }
    };
    DualCertificate { size, c: r.clone(), r, d }
}

/// Sum of all weights. Numerators are accumulated per denominator so the usual
/// single-denominator certificate costs one reduction instead of one per line.
pub fn certificate_objective(cert: &DualCertificate) -> Rational {
    let mut by_denom: BTreeMap<&BigInt, BigInt> = BTreeMap::new();
    for w in LineFamily::ALL.into_iter().flat_map(|f| cert.weights(f)) {
        if !w.is_zero() {
            *by_denom.entry(w.denom()).or_default() += w.numer();
        }
    }
    by_denom
        .into_iter()
        .map(|(denom, numer)| Rational::from(BigRational::new(numer, denom.clone())))
        .sum()
}

/// Weights scaled to a common integer denominator, when everything fits in `i64`
/// with room for three-term sums.
struct ScaledWeights {
    denom: i64,
    r: Vec<i64>,
    c: Vec<i64>,
    d: Vec<i64>,
}

impl ScaledWeights {
    fn try_new(cert: &DualCertificate) -> Option<Self> {
        let all = || LineFamily::ALL.into_iter().flat_map(|f| cert.weights(f));
        let lcm = all().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let limit = i64::MAX / 4;
        let denom = lcm.to_i64().filter(|d| *d <= limit)?;
        let scale = |v: &[Rational]| -> Option<Vec<i64>> {
            v.iter()
                .map(|w| (w.numer() * (&lcm / w.denom())).to_i64().filter(|x| x.abs() <= limit))
                .collect()
        };
        Some(Self { denom, r: scale(&cert.r)?, c: scale(&cert.c)?, d: scale(&cert.d)? })
    }
}

/// Checks `r_i + c_j + d_k >= 1` for every cell and nonnegativity of every
/// weight, exactly. Weights are brought to a common denominator so the per-cell
/// test is integer addition; huge denominators fall back to rational sums.
pub fn verify_feasible(cert: &DualCertificate) -> FeasibilityReport {
    let mut report = FeasibilityReport::default();
    for family in LineFamily::ALL {
        for (idx, w) in cert.weights(family).iter().enumerate() {
            if w.is_negative() {
                report.negative.push((family, idx as u32 + 1));
            }
        }
    }

    let size = cert.size;
    let n = size.get();
    match ScaledWeights::try_new(cert) {
        Some(scaled) => {
            // Along row `row`, pos = 1..=row meets column j = n - pos + 1 and
            // diagonal k = n - row + pos.
            let c_by_pos: Vec<i64> = scaled.c.iter().rev().copied().collect();
            for row in 1..=n {
                let ri = scaled.r[row as usize - 1];
                let cols = &c_by_pos[..row as usize];
                let diags = &scaled.d[(n - row) as usize..];
                let (mut below, mut equal) = (0u64, 0u64);
                for (c, d) in cols.iter().zip(diags) {
                    // Bounded by try_new, so wrapping never actually wraps.
                    let total = ri.wrapping_add(*c).wrapping_add(*d);
                    below = below.wrapping_add(u64::from(total < scaled.denom));
                    equal = equal.wrapping_add(u64::from(total == scaled.denom));
                }
                report.tight += equal;
                if below > 0 {
                    for (pos, (c, d)) in (1..).zip(cols.iter().zip(diags)) {
                        if ri + c + d < scaled.denom {
                            report.violated.push(Cell::new(row, pos));
                        }
                    }
                }
            }
        }
        None => {
            let one = Rational::one();
            for cell in all_cells(size) {
                let li = line_indices_unchecked(cell, size);
                let total = &cert.r[li.row_len as usize - 1]
                    + &cert.c[li.col_len as usize - 1]
                    + &cert.d[li.diag_len as usize - 1];
                if total < one {
                    report.violated.push(cell);
                } else if total == one {
                    report.tight += 1;
                }
            }
        }
    }
    report
}

/// A proven upper bound on `N(n)`: the floor of the objective of the
/// closed-form certificate, which is re-verified on every call.
pub fn upper_bound(size: TriangleSize) -> Result<u64> {
    let cert = build_certificate(size);
    let report = verify_feasible(&cert);
    if !report.is_ok() {
        return Err(Error::Internal(format!(
            "certificate for n = {size} is infeasible at {} cells",
            report.violated.len() + report.negative.len()
        )));
    }
    certificate_objective(&cert)
        .floor()
        .to_u64()
        .ok_or_else(|| Error::Internal("bound does not fit in u64".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::{lpf, nf};
    use crate::lp_model::build_dual;

    fn size(n: i64) -> TriangleSize {
        TriangleSize::new(n).unwrap()
    }

    fn r(p: i64, q: i64) -> Rational {
        Rational::ratio(p, q)
    }

    fn z() -> Rational {
        Rational::zero()
    }

    #[test]
    fn four_by_hand() {
        let cert = build_certificate(size(4));
        assert_eq!(cert.r, vec![z(), z(), r(1, 4), r(2, 4)]);
        assert_eq!(cert.c, cert.r);
        assert_eq!(cert.d, vec![z(), r(1, 4), r(2, 4), r(3, 4)]);

        // Enumerate the ten cells directly through the dual LP.
        let dual = build_dual(size(4));
        assert_eq!(dual.constraints.len(), 10);
        assert!(dual.is_feasible(&cert.to_dual_point()));
        assert!(verify_feasible(&cert).is_ok());
        assert_eq!(certificate_objective(&cert), Rational::from(3));
    }

    #[test]
    fn one_and_six() {
        let one = build_certificate(size(1));
        assert_eq!((one.r.clone(), one.c.clone(), one.d.clone()), (vec![z()], vec![z()], vec![Rational::one()]));
        assert_eq!(certificate_objective(&one), Rational::one());

        // t = 2: max(0, (i - 2)/7).
        let six = build_certificate(size(6));
        let expected = vec![z(), z(), r(1, 7), r(2, 7), r(3, 7), r(4, 7)];
        assert_eq!(six.r, expected);
        assert_eq!(six.c, expected);
        assert_eq!(six.d, expected);
        assert_eq!(certificate_objective(&six), r(30, 7));
    }

    #[test]
    fn objective_examples() {
        assert_eq!(certificate_objective(&build_certificate(size(7))), Rational::from(5));
        assert_eq!(certificate_objective(&build_certificate(size(8))), r(45, 8));
        for t in 0..200 {
            let s = size(3 * t + 1);
            assert_eq!(certificate_objective(&build_certificate(s)), Rational::from(2 * t + 1));
        }
    }

    #[test]
    fn zero_certificate_fails_everywhere() {
        let cert = DualCertificate::uniform(size(2), z());
        let report = verify_feasible(&cert);
        assert_eq!(
            report.violated,
            vec![Cell::new(1, 1), Cell::new(2, 1), Cell::new(2, 2)]
        );
    }

    #[test]
    fn thirds_are_tight_everywhere() {
        let cert = DualCertificate::uniform(size(5), r(1, 3));
        let report = verify_feasible(&cert);
        assert!(report.is_ok());
        assert_eq!(report.tight, 15);
    }

    #[test]
    fn negative_weights_are_reported() {
        let mut cert = DualCertificate::uniform(size(3), Rational::one());
        cert.c[1] = r(-1, 2);
        let report = verify_feasible(&cert);
        assert_eq!(report.negative, vec![(LineFamily::Column, 2)]);
        assert!(report.violated.is_empty());
        assert!(!report.is_ok());
    }

    #[test]
    fn length_mismatch_is_rejected() {
        assert!(DualCertificate::new(size(2), vec![z()], vec![z(), z()], vec![z(), z()]).is_err());
    }

    #[test]
    fn rational_fallback_agrees_with_integer_path() {
        // Denominators whose lcm overflows i64 force the rational route.
        let mut cert = build_certificate(size(9));
        let huge = Rational::new(BigInt::one(), BigInt::from(10u8).pow(30)).unwrap();
        cert.r[0] = huge.clone();
        assert!(ScaledWeights::try_new(&cert).is_none());
        let slow = verify_feasible(&cert);
        cert.r[0] = z();
        let fast = verify_feasible(&cert);
        assert!(slow.is_ok() && fast.is_ok());
        // The tiny weight only moves row 1 off equality if it was tight there.
        assert!(slow.tight <= fast.tight);

        let broken = DualCertificate::uniform(size(4), huge);
        assert_eq!(verify_feasible(&broken).violated.len(), 10);
    }

    #[test]
    fn feasible_with_matching_objective() {
        for n in 1..=400 {
            let s = size(n);
            let cert = build_certificate(s);
            assert!(verify_feasible(&cert).is_ok(), "n = {n}");
            assert_eq!(certificate_objective(&cert), lpf(s), "n = {n}");
            assert_eq!(upper_bound(s).unwrap(), nf(s), "n = {n}");
        }
    }

    #[test]
    fn tight_exactly_when_no_truncation_is_active() {
        for t in 0..40u32 {
            let s = size(3 * i64::from(t) + 1);
            let cert = build_certificate(s);
            let denom = Rational::from(3 * i64::from(t) + 1);
            for cell in all_cells(s) {
                let li = line_indices_unchecked(cell, s);
                let (i, j, k) = (li.row_len, li.col_len, li.diag_len);
                let total = &cert.r[i as usize - 1] + &cert.c[j as usize - 1] + &cert.d[k as usize - 1];
                let untruncated = i > t && j > t && k >= t;
                if untruncated {
                    // (i + j + k - (3t + 2)) / (3t + 1) with i + j + k = 6t + 3.
                    let chain = Rational::from(i64::from(i + j + k) - (3 * i64::from(t) + 2)) / denom.clone();
                    assert_eq!(chain, Rational::one());
                    assert_eq!(total, Rational::one(), "{cell}");
                } else {
                    assert!(total > Rational::one(), "{cell}");
                }
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let cert = build_certificate(size(6));
        let json = serde_json::to_string(&cert.to_json()).unwrap();
        assert!(json.starts_with(r#"{"n":6,"r":["0","0","1/7","2/7","3/7","4/7"]"#), "{json}");
        assert!(json.ends_with(r#""objective":"30/7","feasible":true}"#), "{json}");
        let back: CertificateJson = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_certificate().unwrap(), cert);
    }
}
