//! Exact integer power series with explicit horizons, the reference
//! series (1+z)^n / prod(1+z^d_i) whose first non-positive coefficient
//! predicts regularity degrees, and the rational-slope certificates
//! that bound its index from below.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default search ceiling for slope certificates.
pub const SLOPE_SEARCH_LIMIT: usize = 512;

/// A list of generator degrees, nonempty with entries >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct DegreeVector(Vec<usize>);

impl DegreeVector {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() || entries.contains(&0) {
            return Err(Error::InvalidDegreeVector);
        }
        Ok(DegreeVector(entries))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }
}

impl TryFrom<Vec<usize>> for DegreeVector {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        DegreeVector::new(v)
    }
}

impl From<DegreeVector> for Vec<usize> {
    fn from(d: DegreeVector) -> Vec<usize> {
        d.0
    }
}

impl fmt::Display for DegreeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|d| d.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl FromStr for DegreeVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for tok in s.split(',') {
            let d: usize = tok.trim().parse().map_err(|e| Error::Parse {
                message: format!("bad degree entry '{tok}': {e}"),
            })?;
            entries.push(d);
        }
        DegreeVector::new(entries)
    }
}

/// An integer power series known exactly up to (excluding) its horizon.
/// Coefficients beyond the horizon are never assumed zero; asking for
/// them is an error.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntSeries {
    coeffs: Vec<BigInt>,
}

impl IntSeries {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        IntSeries { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntSeries {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn horizon(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Result<&BigInt> {
        self.coeffs.get(k).ok_or(Error::HorizonExceeded {
            needed: k,
            horizon: self.coeffs.len(),
        })
    }

    /// First position with a non-positive coefficient, if one occurs
    /// within the horizon. `None` means the search was inconclusive and
    /// the caller must extend the horizon, not that no index exists.
    pub fn index(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_positive())
    }

    /// Zeroes every coefficient at position `t` or later.
    pub fn truncate_at(&self, t: usize) -> Result<IntSeries> {
        if t > self.coeffs.len() {
            return Err(Error::HorizonExceeded {
                needed: t,
                horizon: self.coeffs.len(),
            });
        }
        let mut coeffs = self.coeffs.clone();
        for c in coeffs.iter_mut().skip(t) {
            *c = BigInt::zero();
        }
        Ok(IntSeries { coeffs })
    }

    /// Truncates at the first non-positive coefficient.
    pub fn truncate_at_index(&self) -> Result<IntSeries> {
        match self.index() {
            Some(t) => self.truncate_at(t),
            None => Err(Error::HorizonExceeded {
                needed: self.coeffs.len(),
                horizon: self.coeffs.len(),
            }),
        }
    }

    /// Product, exact up to the smaller horizon.
    pub fn mul(&self, other: &IntSeries) -> IntSeries {
        let horizon = self.horizon().min(other.horizon());
        let mut coeffs = vec![BigInt::zero(); horizon];
        for (i, a) in self.coeffs.iter().take(horizon).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (b, c) in other.coeffs.iter().zip(coeffs[i..].iter_mut()) {
                *c += a * b;
            }
        }
        IntSeries { coeffs }
    }

    pub fn add(&self, other: &IntSeries) -> IntSeries {
        let horizon = self.horizon().min(other.horizon());
        let coeffs = (0..horizon)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        IntSeries { coeffs }
    }

    /// Decimal strings of the coefficients, for exact serialization.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for IntSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if !wrote {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact binomial coefficient; zero outside `0 <= k <= n`.
pub fn binom(n: usize, k: isize) -> BigInt {
    if k < 0 || k as usize > n {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// C(n, k) mod 2 by the halving recursion: an even n with an odd k
/// forces an even coefficient, otherwise both arguments halve.
pub fn binom_parity(n: usize, k: usize) -> u8 {
    let (mut n, mut k) = (n, k);
    if k > n {
        return 0;
    }
    loop {
        if k == 0 {
            return 1;
        }
        if n % 2 == 0 && k % 2 == 1 {
            return 0;
        }
        n /= 2;
        k /= 2;
    }
}

/// Alternating sum `sum_j (-1)^j C(n, k - j d)`, the degree-`k`
/// coefficient of (1+z)^n / (1+z^d).
pub fn gamma(n: usize, k: usize, d: usize) -> BigInt {
    assert!(d >= 1, "gamma requires d >= 1");
    let mut total = BigInt::zero();
    let mut j = 0usize;
    loop {
        let shift = j * d;
        if shift > k {
            break;
        }
        let term = binom(n, (k - shift) as isize);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
        j += 1;
    }
    total
}

/// The series (1+z)^n / prod_i (1+z^{d_i}), exact to `horizon`
/// coefficients. Expansion of the numerator followed by one division
/// recurrence b_k = a_k - b_{k-d} per degree entry.
pub fn t_series(d: &DegreeVector, n: usize, horizon: usize) -> Result<IntSeries> {
    if horizon == 0 {
        return Err(Error::HorizonExceeded {
            needed: 1,
            horizon: 0,
        });
    }
    let mut coeffs: Vec<BigInt> = (0..horizon).map(|k| binom(n, k as isize)).collect();
    for &di in d.entries() {
        for k in 0..horizon {
            if k >= di {
                let prev = coeffs[k - di].clone();
                coeffs[k] -= prev;
            }
        }
    }
    Ok(IntSeries { coeffs })
}

/// Verifies the truncation laws `[uv]_t = [[u]_t [v]_t]_t = [u [v]_t]_t`
/// together with idempotence of truncation, on the given pair.
pub fn truncation_algebra_check(u: &IntSeries, v: &IntSeries, t: usize) -> Result<bool> {
    let uv = u.mul(v).truncate_at(t)?;
    let both = u.truncate_at(t)?.mul(&v.truncate_at(t)?).truncate_at(t)?;
    let right_only = u.mul(&v.truncate_at(t)?).truncate_at(t)?;
    let idem = v.truncate_at(t)?.truncate_at(t)? == v.truncate_at(t)?;
    Ok(uv == both && uv == right_only && idem)
}

/// Index of the reference series for the degree list at `n`: the first
/// non-positive coefficient. A horizon of n + 2 always suffices: the
/// numerator's coefficient at n + 1 vanishes, so if every earlier
/// quotient coefficient were positive the division recurrence would
/// force a non-positive one at n + 1.
pub fn tau(d: &DegreeVector, n: usize) -> usize {
    let mut horizon = n + 2;
    let cap = 8 * (n + d.sum() + 2) + 64;
    loop {
        let s = t_series(d, n, horizon).expect("horizon is positive");
        if let Some(k) = s.index() {
            return k;
        }
        horizon *= 2;
        assert!(
            horizon <= cap,
            "index of the reference series must appear by degree n + 1"
        );
    }
}

/// A witness that the single-degree reference index grows with slope
/// above one half: at `n`, the index minus the degree exceeds n/2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeCertificate {
    pub degree: usize,
    pub n: usize,
    pub tau_at_n: usize,
}

impl SlopeCertificate {
    /// (tau - degree) / n as an exact rational.
    pub fn slope(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.tau_at_n as i64 - self.degree as i64),
            BigInt::from(self.n),
        )
    }
}

/// Smallest `N <= search_limit` whose slope witness exceeds one half.
pub fn single_degree_slope_certificate(d: usize, search_limit: usize) -> Result<SlopeCertificate> {
    if d == 0 {
        return Err(Error::InvalidDegreeVector);
    }
    let dv = DegreeVector::new(vec![d])?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for n in 1..=search_limit {
        let t = tau(&dv, n);
        let cert = SlopeCertificate {
            degree: d,
            n,
            tau_at_n: t,
        };
        if cert.slope() > half {
            return Ok(cert);
        }
    }
    Err(Error::SearchLimitExceeded {
        limit: search_limit,
    })
}

/// An affine lower bound `tau_d(n) >= slope * n + constant` valid for
/// every n >= 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearLowerBound {
    pub slope: BigRational,
    pub constant: BigRational,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Builds the affine lower bound on the reference index for a degree
/// list from per-degree slope certificates.
///
/// The chain follows the existence proof: order the per-entry
/// certificates by descending slope; the first gives the base bound
/// with constant `min(tau(1) - r(1 + N), tau(0))`, and each further
/// entry with slope `s <= r` and witness point `N` lowers the constant
/// to `min(c - 2sN, -sN, 0)` while the slope drops to `s`.
pub fn linear_lower_bound(
    d: &DegreeVector,
    certs: &[SlopeCertificate],
) -> Result<LinearLowerBound> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut chain: Vec<&SlopeCertificate> = Vec::with_capacity(d.len());
    for &di in d.entries() {
        let cert =
            certs
                .iter()
                .find(|c| c.degree == di)
                .ok_or_else(|| Error::InvalidCertificate {
                    reason: format!("no slope certificate supplied for degree {di}"),
                })?;
        chain.push(cert);
    }
    for cert in certs {
        let single = DegreeVector::new(vec![cert.degree])?;
        if tau(&single, cert.n) != cert.tau_at_n {
            return Err(Error::InvalidCertificate {
                reason: format!(
                    "certificate for degree {} states index {} at n = {}, recomputation disagrees",
                    cert.degree, cert.tau_at_n, cert.n
                ),
            });
        }
        if cert.slope() <= half {
            return Err(Error::InvalidCertificate {
                reason: format!(
                    "certificate for degree {} has slope {} <= 1/2",
                    cert.degree,
                    cert.slope()
                ),
            });
        }
    }
    // Descending slope, stable over the original entry order.
    chain.sort_by_key(|c| std::cmp::Reverse(c.slope()));

    let first = chain[0];
    let single = DegreeVector::new(vec![first.degree])?;
    let r1 = first.slope();
    let base = rat(tau(&single, 1) as i64) - &r1 * rat(1 + first.n as i64);
    let at_zero = rat(tau(&single, 0) as i64);
    let mut constant = base.min(at_zero);
    let mut slope = r1;

    for cert in &chain[1..] {
        let s = cert.slope();
        debug_assert!(s <= slope);
        let sn = &s * rat(cert.n as i64);
        constant = (constant - rat(2) * &sn).min(-sn).min(rat(0));
        slope = s;
    }
    Ok(LinearLowerBound { slope, constant })
}

/// Scans `0..=n_max` for a violation of the bound; `None` means the
/// bound held everywhere in range.
pub fn verify_lower_bound(
    d: &DegreeVector,
    bound: &LinearLowerBound,
    n_max: usize,
) -> Option<usize> {
    (0..=n_max).find(|&n| {
        let lhs = rat(tau(d, n) as i64);
        let rhs = &bound.slope * rat(n as i64) + &bound.constant;
        lhs < rhs
    })
}

/// Everything needed to check a nonexistence threshold by hand: the
/// per-degree slope certificates, the affine bound they produce, the
/// pivot degree, and the resulting cutoff.
#[derive(Debug, Clone)]
pub struct ThresholdCertificate {
    pub degrees: DegreeVector,
    pub certificates: Vec<SlopeCertificate>,
    pub bound: LinearLowerBound,
    /// Smallest entry >= 2; the comparison degree in the final inequality.
    pub pivot_degree: usize,
    /// For every n >= this value, slope * n + constant > n/2 + pivot/2 + 1.
    pub threshold: u64,
}

/// Smallest `N` such that the affine lower bound forces the reference
/// index above `n/2 + d_j/2 + 1` for every `n >= N`, where `d_j` is the
/// smallest degree entry that is at least 2. Beyond the returned
/// threshold the index outgrows the first fall degree, which rules the
/// whole regime out.
pub fn nonexistence_threshold(d: &DegreeVector) -> Result<ThresholdCertificate> {
    let pivot = match d.entries().iter().filter(|&&di| di >= 2).min() {
        Some(&p) => p,
        None => {
            return Err(Error::Inapplicable {
                reason: "every degree is 1; linear sequences are semi-regular exactly when \
                         linearly independent, so no threshold exists"
                    .into(),
            })
        }
    };
    let mut degrees: Vec<usize> = d.entries().to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    let mut certificates = Vec::with_capacity(degrees.len());
    for &di in &degrees {
        certificates.push(single_degree_slope_certificate(di, SLOPE_SEARCH_LIMIT)?);
    }
    let bound = linear_lower_bound(d, &certificates)?;
    // slope * n + constant > n/2 + pivot/2 + 1 for all n >= N: solve
    // (slope - 1/2) n > pivot/2 + 1 - constant exactly and take the next
    // integer.
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let gap = &bound.slope - &half;
    debug_assert!(gap > rat(0));
    let rhs = (rat(pivot as i64) * &half + rat(1) - &bound.constant) / gap;
    let floor = rhs.floor().to_integer();
    let threshold = if floor < BigInt::zero() {
        1u64
    } else {
        let f: u64 = floor.try_into().map_err(|_| Error::InvalidCertificate {
            reason: "threshold does not fit in 64 bits".into(),
        })?;
        (f + 1).max(1)
    };
    Ok(ThresholdCertificate {
        degrees: d.clone(),
        certificates,
        bound,
        pivot_degree: pivot,
        threshold,
    })
}

/// A place where strict positivity of `gamma(2n, k, d)` fails on the
/// claimed range `0 <= k <= n + floor(d/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaViolation {
    /// Even first argument passed to gamma.
    pub even_n: usize,
    pub k: usize,
    pub d: usize,
    /// Decimal value of the offending gamma.
    pub value: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GammaPositivityReport {
    pub n_max: usize,
    pub d_max: usize,
    pub checked: u64,
    pub violations: Vec<GammaViolation>,
}

/// Exhaustively tests `gamma(2n, k, d) > 0` for `1 <= n <= n_max`,
/// `1 <= d <= d_max`, `0 <= k <= n + floor(d/2)` and reports every
/// failure verbatim.
pub fn gamma_positivity_check(n_max: usize, d_max: usize) -> GammaPositivityReport {
    let mut checked = 0u64;
    let mut violations = Vec::new();
    for n in 1..=n_max {
        for d in 1..=d_max {
            for k in 0..=(n + d / 2) {
                checked += 1;
                let g = gamma(2 * n, k, d);
                if !g.is_positive() {
                    violations.push(GammaViolation {
                        even_n: 2 * n,
                        k,
                        d,
                        value: g.to_string(),
                    });
                }
            }
        }
    }
    GammaPositivityReport {
        n_max,
        d_max,
        checked,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(entries: &[usize]) -> DegreeVector {
        DegreeVector::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn degree_vector_validation_and_text() {
        assert!(DegreeVector::new(vec![]).is_err());
        assert!(DegreeVector::new(vec![2, 0]).is_err());
        let d: DegreeVector = "2,2,4".parse().unwrap();
        assert_eq!(d.entries(), &[2, 2, 4]);
        assert_eq!(d.to_string(), "2,2,4");
        assert!("2,x".parse::<DegreeVector>().is_err());
        assert!("".parse::<DegreeVector>().is_err());
    }

    #[test]
    fn binomials_are_exact_and_vanish_outside_range() {
        assert_eq!(binom(12, 6), BigInt::from(924));
        assert_eq!(binom(7, 0), BigInt::from(1));
        assert_eq!(binom(5, 7), BigInt::zero());
        assert_eq!(binom(5, -1), BigInt::zero());
        assert_eq!(binom(0, 0), BigInt::from(1));
        for n in 1..=40usize {
            for k in 1..=n {
                assert_eq!(
                    binom(n, k as isize),
                    binom(n - 1, k as isize - 1) + binom(n - 1, k as isize)
                );
            }
        }
    }

    #[test]
    fn parity_recursion_matches_submask_rule_and_exact_values() {
        assert_eq!(binom_parity(4, 2), 0);
        assert_eq!(binom_parity(5, 4), 1);
        for n in 0..=64usize {
            for k in 0..=64usize {
                let by_mask = if k & n == k { 1 } else { 0 };
                assert_eq!(binom_parity(n, k), by_mask, "n={n} k={k}");
                let by_exact = if (binom(n, k as isize) % 2u8) == BigInt::zero() {
                    0
                } else {
                    1
                };
                assert_eq!(binom_parity(n, k), by_exact, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn parity_vanishes_just_above_power_of_two_multiples() {
        // C(2^m l + j, k) is even whenever 0 <= j <= k - 1 <= 2^m - 2.
        for m in 1..=4usize {
            for l in 1..=4usize {
                let p = 1usize << m;
                for k in 1..=(p - 1) {
                    for j in 0..k {
                        assert_eq!(binom_parity(p * l + j, k), 0, "m={m} l={l} k={k} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_values() {
        assert_eq!(gamma(12, 8, 2), BigInt::from(1));
        assert_eq!(gamma(12, 7, 2), BigInt::from(208));
        assert_eq!(gamma(10, 7, 2), BigInt::from(-22));
        assert_eq!(gamma(11, 8, 2), BigInt::from(-21));
        // Single-term region.
        for d in 2..=6usize {
            for k in 0..d {
                assert_eq!(gamma(9, k, d), binom(9, k as isize));
            }
        }
        // gamma(3d, 2d, d) collapses to 1.
        for d in 2..=8usize {
            assert_eq!(gamma(3 * d, 2 * d, d), BigInt::one(), "d={d}");
        }
    }

    #[test]
    fn gamma_is_the_single_degree_series_coefficient() {
        for n in 0..=20usize {
            for d in 1..=6usize {
                let s = t_series(&dv(&[d]), n, n + 3).unwrap();
                for k in 0..n + 3 {
                    assert_eq!(*s.coeff(k).unwrap(), gamma(n, k, d), "n={n} d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn reference_series_frozen_coefficients() {
        let s = t_series(&dv(&[2]), 12, 12).unwrap();
        let expect = [1i64, 12, 65, 208, 430, 584, 494, 208, 1, 12, 65, 0];
        for (k, &e) in expect.iter().enumerate() {
            assert_eq!(*s.coeff(k).unwrap(), BigInt::from(e), "k={k}");
        }
        assert_eq!(s.index(), Some(11));

        let s = t_series(&dv(&[2, 2]), 4, 7).unwrap();
        let expect = [1i64, 4, 4, -4, -8, 4, 12];
        assert_eq!(s, IntSeries::from_i64(&expect));

        // Dividing (1+z)^n by (1+z) just drops the exponent.
        for n in 1..=10usize {
            let s = t_series(&dv(&[1]), n, n + 2).unwrap();
            for k in 0..n + 2 {
                assert_eq!(*s.coeff(k).unwrap(), binom(n - 1, k as isize));
            }
        }
    }

    #[test]
    fn index_of_small_series() {
        assert_eq!(IntSeries::from_i64(&[1, 2, -1]).index(), Some(2));
        assert_eq!(IntSeries::from_i64(&[1, 2, 3]).index(), None);
        assert_eq!(IntSeries::from_i64(&[0]).index(), Some(0));
        let s = t_series(&dv(&[2]), 10, 12).unwrap();
        assert_eq!(s.index(), Some(7));
        assert_eq!(*s.coeff(7).unwrap(), BigInt::from(-22));
    }

    #[test]
    fn horizon_is_explicit_and_enforced() {
        let s = IntSeries::from_i64(&[1, 3]);
        assert_eq!(s.horizon(), 2);
        assert!(matches!(
            s.coeff(2),
            Err(Error::HorizonExceeded {
                needed: 2,
                horizon: 2
            })
        ));
        assert!(s.truncate_at(3).is_err());
        // No non-positive coefficient in sight: bare truncation refuses.
        assert!(s.truncate_at_index().is_err());
        assert!(t_series(&dv(&[2]), 5, 0).is_err());
    }

    #[test]
    fn truncation_examples() {
        let s = IntSeries::from_i64(&[1, 3, -1]);
        assert_eq!(
            s.truncate_at_index().unwrap(),
            IntSeries::from_i64(&[1, 3, 0])
        );

        let t4 = t_series(&dv(&[2]), 4, 6).unwrap();
        assert_eq!(
            t4.truncate_at_index().unwrap(),
            IntSeries::from_i64(&[1, 4, 5, 0, 0, 0])
        );

        // Degree 4 in twelve variables: the truncated series carries the
        // two-term coefficients below 8 and a bare z^8.
        let t = t_series(&dv(&[4]), 12, 14).unwrap();
        assert_eq!(t.index(), Some(9));
        let cut = t.truncate_at_index().unwrap();
        for k in 0..8 {
            assert_eq!(
                *cut.coeff(k).unwrap(),
                binom(12, k as isize) - binom(12, k as isize - 4),
                "k={k}"
            );
        }
        assert_eq!(*cut.coeff(8).unwrap(), BigInt::one());
        for k in 9..14 {
            assert_eq!(*cut.coeff(k).unwrap(), BigInt::zero());
        }
    }

    #[test]
    fn truncation_algebra_laws() {
        let u = IntSeries::from_coeffs((0..6).map(|k| binom(3, k)).collect());
        assert!(truncation_algebra_check(&u, &u, 3).unwrap());

        let twelve = IntSeries::from_coeffs((0..10).map(|k| binom(12, k)).collect());
        let inv = t_series(&dv(&[2]), 0, 10).unwrap();
        assert!(truncation_algebra_check(&twelve, &inv, 8).unwrap());

        // Deterministic pseudo-random pairs.
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 19) as i64 - 9
        };
        for _ in 0..200 {
            let u = IntSeries::from_coeffs((0..24).map(|_| BigInt::from(next())).collect());
            let v = IntSeries::from_coeffs((0..24).map(|_| BigInt::from(next())).collect());
            for t in [0usize, 1, 7, 20] {
                assert!(truncation_algebra_check(&u, &v, t).unwrap());
            }
        }
    }

    #[test]
    fn tau_frozen_values_and_closed_forms() {
        let expect = [2usize, 2, 3, 3, 4, 5, 5, 6, 6, 7, 8, 11, 12, 13, 13, 14];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(tau(&dv(&[2]), i + 1), e, "n={}", i + 1);
        }
        assert_eq!(tau(&dv(&[2]), 11), 8);
        assert_eq!(tau(&dv(&[2]), 12), 11);
        assert_eq!(tau(&dv(&[2, 2]), 12), 7);
        assert_eq!(tau(&dv(&[2, 2, 2, 2]), 13), 6);
        assert_eq!(tau(&dv(&[2, 2, 2, 2]), 14), 6);
        assert_eq!(tau(&dv(&[2, 2, 2, 2, 2, 2]), 12), 5);

        // Between d and 3d the index is the ceiling of (n + d) / 2.
        for d in 2..=12usize {
            for n in (d + 1)..(3 * d) {
                assert_eq!(tau(&dv(&[d]), n), (n + d).div_ceil(2), "d={d} n={n}");
            }
        }
        // At exactly n = 3d the index is 2d + 1.
        for d in 2..=8usize {
            assert_eq!(tau(&dv(&[d]), 3 * d), 2 * d + 1, "d={d}");
        }
        // tau at n = 0 exists and equals 1 for d >= 2.
        assert_eq!(tau(&dv(&[2]), 0), 1);
        assert_eq!(tau(&dv(&[5]), 0), 1);
    }

    #[test]
    fn slope_certificates() {
        let c2 = single_degree_slope_certificate(2, SLOPE_SEARCH_LIMIT).unwrap();
        assert_eq!((c2.degree, c2.n, c2.tau_at_n), (2, 11, 8));
        assert_eq!(
            c2.slope(),
            BigRational::new(BigInt::from(6), BigInt::from(11))
        );

        // Degree 1 starts at slope 0 and only crosses one half at n = 3.
        let c1 = single_degree_slope_certificate(1, SLOPE_SEARCH_LIMIT).unwrap();
        assert_eq!((c1.n, c1.tau_at_n), (3, 3));
        assert_eq!(
            c1.slope(),
            BigRational::new(BigInt::from(2), BigInt::from(3))
        );

        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        for d in 1..=6usize {
            let c = single_degree_slope_certificate(d, SLOPE_SEARCH_LIMIT).unwrap();
            assert!(c.slope() > half, "d={d}");
        }

        assert!(matches!(
            single_degree_slope_certificate(2, 5),
            Err(Error::SearchLimitExceeded { limit: 5 })
        ));
    }

    #[test]
    fn linear_lower_bound_chain() {
        let c2 = single_degree_slope_certificate(2, SLOPE_SEARCH_LIMIT).unwrap();

        let b = linear_lower_bound(&dv(&[2]), std::slice::from_ref(&c2)).unwrap();
        assert_eq!(b.slope, BigRational::new(BigInt::from(6), BigInt::from(11)));
        assert_eq!(
            b.constant,
            BigRational::new(BigInt::from(-50), BigInt::from(11))
        );
        assert_eq!(verify_lower_bound(&dv(&[2]), &b, 60), None);

        let b2 = linear_lower_bound(&dv(&[2, 2]), std::slice::from_ref(&c2)).unwrap();
        assert_eq!(
            b2.slope,
            BigRational::new(BigInt::from(6), BigInt::from(11))
        );
        assert_eq!(
            b2.constant,
            BigRational::new(BigInt::from(-182), BigInt::from(11))
        );
        assert_eq!(verify_lower_bound(&dv(&[2, 2]), &b2, 60), None);
    }

    #[test]
    fn invalid_certificates_are_rejected() {
        // Slope 0 <= 1/2: the degenerate degree-1 witness at n = 1.
        let degenerate = SlopeCertificate {
            degree: 1,
            n: 1,
            tau_at_n: 1,
        };
        assert!(matches!(
            linear_lower_bound(&dv(&[1]), &[degenerate]),
            Err(Error::InvalidCertificate { .. })
        ));

        // Tampered index value.
        let forged = SlopeCertificate {
            degree: 2,
            n: 11,
            tau_at_n: 9,
        };
        assert!(matches!(
            linear_lower_bound(&dv(&[2]), &[forged]),
            Err(Error::InvalidCertificate { .. })
        ));

        // Missing certificate for one of the degrees.
        let c2 = single_degree_slope_certificate(2, SLOPE_SEARCH_LIMIT).unwrap();
        assert!(matches!(
            linear_lower_bound(&dv(&[2, 3]), &[c2]),
            Err(Error::InvalidCertificate { .. })
        ));
    }

    #[test]
    fn nonexistence_thresholds() {
        let t = nonexistence_threshold(&dv(&[2])).unwrap();
        assert_eq!(t.threshold, 145);
        assert_eq!(t.pivot_degree, 2);

        let t22 = nonexistence_threshold(&dv(&[2, 2])).unwrap();
        assert_eq!(t22.threshold, 409);

        // Mixed degrees pick the smallest entry >= 2 as pivot.
        let tm = nonexistence_threshold(&dv(&[1, 2])).unwrap();
        assert_eq!(tm.pivot_degree, 2);
        assert_eq!(verify_lower_bound(&dv(&[1, 2]), &tm.bound, 80), None);
        // At the threshold itself the strict inequality holds.
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let n = rat(tm.threshold as i64);
        let lhs = &tm.bound.slope * &n + &tm.bound.constant;
        let rhs = &n * &half + rat(tm.pivot_degree as i64) * &half + rat(1);
        assert!(lhs > rhs);
        // And just below it fails, so the threshold is tight.
        let n = rat(tm.threshold as i64 - 1);
        let lhs = &tm.bound.slope * &n + &tm.bound.constant;
        let rhs = &n * &half + rat(tm.pivot_degree as i64) * &half + rat(1);
        assert!(lhs <= rhs);

        assert!(matches!(
            nonexistence_threshold(&dv(&[1, 1])),
            Err(Error::Inapplicable { .. })
        ));

        // The threshold never undercuts the structural bound 3d + 1 for a
        // single degree.
        for d in 2..=5usize {
            let t = nonexistence_threshold(&dv(&[d])).unwrap();
            assert!(t.threshold as usize > 3 * d, "d={d}");
        }
    }

    #[test]
    fn gamma_positivity_boundary() {
        // Every failure of strict positivity on the claimed range is an
        // exact zero sitting below the 2n >= 3d regime; no negative value
        // ever appears, and the count is stable.
        let report = gamma_positivity_check(40, 8);
        assert_eq!(report.violations.len(), 34);
        for v in &report.violations {
            assert_eq!(v.value, "0", "violation at {v:?}");
            assert!(v.even_n < 3 * v.d, "violation at {v:?}");
        }
        // Strictly positive throughout once 2n >= 3d.
        for n in 1..=40usize {
            for d in 1..=8usize {
                if 2 * n >= 3 * d {
                    for k in 0..=(n + d / 2) {
                        assert!(gamma(2 * n, k, d).is_positive(), "n={n} d={d} k={k}");
                    }
                }
            }
        }
        assert!(gamma(12, 7, 2).is_positive());
    }

    #[test]
    fn series_display() {
        assert_eq!(
            IntSeries::from_i64(&[1, 12, 65]).to_string(),
            "1 + 12z + 65z^2"
        );
        assert_eq!(IntSeries::from_i64(&[1, 0, -22]).to_string(), "1 - 22z^2");
        assert_eq!(IntSeries::from_i64(&[0, 0]).to_string(), "0");
        assert_eq!(IntSeries::from_i64(&[-1, 1]).to_string(), "-1 + z");
    }
}
