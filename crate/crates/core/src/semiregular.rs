//! Decision procedures for graded ideals in the squarefree quotient:
//! Hilbert series, semi-regularity (full and degree-bounded), first
//! fall degree, the quadratic rank classification, and the closed-form
//! predictions they are checked against.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{mult_map_matrix, stacked_ideal_matrix, BitMatrix, HARD_BIT_CAP};
use crate::ring::{choose64, Element, GradedBasisIndex, MAX_VARS};
use crate::series::{t_series, tau, DegreeVector};

/// Memory ceiling for any single matrix, in bits. The default of 2^33
/// bits is one GiB.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_matrix_bits: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_matrix_bits: 1 << 33,
        }
    }
}

impl Budget {
    pub fn check(&self, rows: u64, cols: u64, degree: usize) -> Result<()> {
        let limit = self.max_matrix_bits.min(HARD_BIT_CAP);
        let bits = rows.saturating_mul(cols);
        if bits > limit {
            return Err(Error::ResourceLimit {
                degree,
                rows,
                cols,
                limit_bits: limit,
            });
        }
        Ok(())
    }
}

/// An ordered sequence of nonzero homogeneous generators of positive
/// degree in a common ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    n: usize,
    gens: Vec<Element>,
    degrees: DegreeVector,
}

impl IdealSpec {
    pub fn new(n: usize, gens: Vec<Element>) -> Result<Self> {
        if n > MAX_VARS {
            return Err(Error::TooManyVariables { n });
        }
        for (i, g) in gens.iter().enumerate() {
            if g.n() != n {
                return Err(Error::DimensionMismatch {
                    left: n,
                    right: g.n(),
                });
            }
            if g.is_zero() {
                return Err(Error::ZeroGenerator { position: i });
            }
        }
        let degrees = DegreeVector::new(gens.iter().map(|g| g.degree()).collect())?;
        Ok(IdealSpec { n, gens, degrees })
    }

    pub fn single(gen: Element) -> Result<Self> {
        let n = gen.n();
        IdealSpec::new(n, vec![gen])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> &[Element] {
        &self.gens
    }

    pub fn degrees(&self) -> &DegreeVector {
        &self.degrees
    }
}

/// Graded dimensions of the quotient by the ideal, with the first
/// degree at which it vanishes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HilbertData {
    /// dims[k] for k = 0..=n.
    pub dims: Vec<u64>,
    /// First k with dims[k] = 0. Always <= n for a nonzero ideal: any
    /// nonzero generator times the complement of one of its monomials
    /// hits the top monomial.
    pub index: usize,
}

fn stacked_shape(ideal: &IdealSpec, k: usize) -> (u64, u64) {
    let rows = choose64(ideal.n, k);
    let cols = ideal
        .gens
        .iter()
        .filter(|g| g.degree() <= k)
        .map(|g| choose64(ideal.n, k - g.degree()))
        .sum();
    (rows, cols)
}

fn stacked_rank(ideal: &IdealSpec, k: usize) -> Result<u64> {
    let m = stacked_ideal_matrix(ideal.n, &ideal.gens, k)?;
    Ok(m.rank() as u64)
}

/// Quotient dimensions at every degree, one rank computation each.
/// Degrees are independent and computed in parallel.
pub fn hilbert_series_with_ranks(
    ideal: &IdealSpec,
    budget: &Budget,
) -> Result<(HilbertData, Vec<u64>)> {
    let n = ideal.n;
    for k in 0..=n {
        let (rows, cols) = stacked_shape(ideal, k);
        budget.check(rows, cols, k)?;
    }
    let ranks: Vec<u64> = (0..=n)
        .into_par_iter()
        .map(|k| stacked_rank(ideal, k))
        .collect::<Result<_>>()?;
    let dims: Vec<u64> = ranks
        .iter()
        .enumerate()
        .map(|(k, &r)| choose64(n, k) - r)
        .collect();
    let index = dims.iter().position(|&d| d == 0).unwrap_or(n + 1);
    // Strong grading: once the quotient vanishes it stays vanished.
    debug_assert!(dims.iter().skip(index).all(|&d| d == 0));
    Ok((HilbertData { dims, index }, ranks))
}

pub fn hilbert_series(ideal: &IdealSpec, budget: &Budget) -> Result<HilbertData> {
    hilbert_series_with_ranks(ideal, budget).map(|(h, _)| h)
}

/// First degree at which the quotient vanishes. Computed bottom-up and
/// stops at the first zero dimension.
pub fn ideal_index(ideal: &IdealSpec, budget: &Budget) -> Result<usize> {
    let n = ideal.n;
    for k in 0..=n {
        let (rows, cols) = stacked_shape(ideal, k);
        budget.check(rows, cols, k)?;
        let rank = stacked_rank(ideal, k)?;
        if choose64(n, k) == rank {
            return Ok(k);
        }
    }
    Ok(n + 1)
}

/// Where the quotient dimensions first left the reference series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub degree: usize,
    pub hilbert_dim: u64,
    /// Reference coefficient at that degree (zero when past its index).
    pub reference: BigInt,
    /// hilbert_dim - reference; positive whenever the reference theory
    /// applies (dimensions can only exceed the reference).
    pub gap: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiregularReport {
    pub verdict: bool,
    /// Index of the reference series for the generator degrees.
    pub t_index: usize,
    /// Reference coefficients for 0..=min(t_index, n).
    pub t_coeffs: Vec<BigInt>,
    /// Quotient dimensions for the degrees actually checked.
    pub checked_dims: Vec<u64>,
    /// Ideal ranks for the degrees actually checked.
    pub ranks: Vec<u64>,
    pub first_divergence: Option<Divergence>,
}

/// A sequence is semi-regular exactly when its quotient dimensions
/// follow the truncated reference series. Degrees are checked bottom-up
/// with an early exit at the first divergence; past the reference index
/// the strong grading makes checking the index degree itself
/// sufficient (a zero dimension never comes back).
pub fn is_semiregular(ideal: &IdealSpec, budget: &Budget) -> Result<SemiregularReport> {
    let n = ideal.n;
    let d_t = tau(ideal.degrees(), n);
    let horizon = n + 2;
    let reference = t_series(ideal.degrees(), n, horizon)?;
    let stop = d_t.min(n);
    let t_coeffs: Vec<BigInt> = (0..=stop)
        .map(|k| reference.coeff(k).cloned())
        .collect::<Result<_>>()?;

    let mut checked_dims = Vec::with_capacity(stop + 1);
    let mut ranks = Vec::with_capacity(stop + 1);
    let mut first_divergence = None;
    // k is a degree driving shapes and budget checks, not a plain index.
    #[allow(clippy::needless_range_loop)]
    for k in 0..=stop {
        let (rows, cols) = stacked_shape(ideal, k);
        budget.check(rows, cols, k)?;
        let rank = stacked_rank(ideal, k)?;
        let dim = choose64(n, k) - rank;
        checked_dims.push(dim);
        ranks.push(rank);
        let expected = if k < d_t {
            t_coeffs[k].clone()
        } else {
            BigInt::zero()
        };
        if BigInt::from(dim) != expected {
            first_divergence = Some(Divergence {
                degree: k,
                hilbert_dim: dim,
                reference: expected.clone(),
                gap: BigInt::from(dim) - expected,
            });
            break;
        }
    }
    Ok(SemiregularReport {
        verdict: first_divergence.is_none(),
        t_index: d_t,
        t_coeffs,
        checked_dims,
        ranks,
        first_divergence,
    })
}

/// Degree-bounded semi-regularity, decided by the definitional kernel
/// bookkeeping: for every prefix i and every source degree e with
/// e + d_i < bound, the defect
/// `s_i(e) - s_{i-1}(e + d_i) + s_i(e + d_i)` must vanish, where
/// `s_i(k)` is the quotient dimension at degree k modulo the first i
/// generators.
pub fn is_d_semiregular(ideal: &IdealSpec, bound: usize, budget: &Budget) -> Result<bool> {
    let n = ideal.n;
    let m = ideal.gens.len();
    // Quotient dimension caches per prefix length, filled on demand.
    let mut dims: Vec<std::collections::HashMap<usize, i64>> =
        vec![std::collections::HashMap::new(); m + 1];
    let dim_at = |i: usize,
                  k: usize,
                  cache: &mut Vec<std::collections::HashMap<usize, i64>>|
     -> Result<i64> {
        if k > n {
            return Ok(0);
        }
        if let Some(&v) = cache[i].get(&k) {
            return Ok(v);
        }
        let v = if i == 0 {
            choose64(n, k) as i64
        } else {
            let p = IdealSpec::new(n, ideal.gens[..i].to_vec())?;
            let (rows, cols) = stacked_shape(&p, k);
            budget.check(rows, cols, k)?;
            (choose64(n, k) - stacked_rank(&p, k)?) as i64
        };
        cache[i].insert(k, v);
        Ok(v)
    };

    for i in 1..=m {
        let di = ideal.gens[i - 1].degree();
        let mut e = 0usize;
        while e + di < bound {
            if e > n {
                break;
            }
            let s_i_e = dim_at(i, e, &mut dims)?;
            let s_prev = dim_at(i - 1, e + di, &mut dims)?;
            let s_i = dim_at(i, e + di, &mut dims)?;
            if s_i_e - s_prev + s_i != 0 {
                return Ok(false);
            }
            e += 1;
        }
    }
    Ok(true)
}

/// Smallest degree `k = deg(g) + d` admitting a `g` with `g * lambda = 0`
/// outside the ideal of `lambda` itself: the kernel of multiplication
/// at source degree `e = k - d` is compared against the image of
/// multiplication from degree `e - d`. `None` means no fall up to the
/// hard cap `k = n + d`, beyond which everything vanishes anyway.
pub fn first_fall_degree(lambda: &Element, budget: &Budget) -> Result<Option<usize>> {
    if lambda.is_zero() {
        return Err(Error::ZeroGenerator { position: 0 });
    }
    let n = lambda.n();
    let d = lambda.degree();
    if d == 0 {
        // Multiplication by the unit is the identity: no fall, ever.
        return Ok(None);
    }
    for e in 0..=n {
        let kernel_dim = if e + d > n {
            // The target component is zero, so everything is kernel.
            choose64(n, e)
        } else {
            let rows = choose64(n, e + d);
            let cols = choose64(n, e);
            budget.check(rows, cols, e + d)?;
            let map = mult_map_matrix(lambda, e)?;
            (map.cols() - map.rank()) as u64
        };
        let image_below = if e < d {
            0
        } else {
            let rows = choose64(n, e);
            let cols = choose64(n, e - d);
            budget.check(rows, cols, e)?;
            mult_map_matrix(lambda, e - d)?.rank() as u64
        };
        if kernel_dim > image_below {
            return Ok(Some(e + d));
        }
    }
    Ok(None)
}

/// Necessary-condition prefilter: a sequence whose index exceeds some
/// generator's first fall degree cannot be semi-regular. Returns true
/// when that veto fires.
pub fn ffd_vs_index_veto(ideal: &IdealSpec, budget: &Budget) -> Result<bool> {
    let index = ideal_index(ideal, budget)?;
    for gen in &ideal.gens {
        if let Some(ffd) = first_fall_degree(gen, budget)? {
            if ffd < index {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Minimal number of linear elements generating a quadratic: the GF(2)
/// rank of its support's adjacency matrix, viewed as an alternating
/// bilinear form (squares vanish, so no diagonal correction is needed).
/// Always even.
pub fn quadratic_rank(q: &Element) -> Result<usize> {
    if q.degree() != 2 {
        return Err(Error::NotQuadratic { degree: q.degree() });
    }
    let n = q.n();
    let mut adj = BitMatrix::new(n, n);
    for m in q.monomials() {
        let vars = m.vars();
        let (i, j) = (vars[0] - 1, vars[1] - 1);
        adj.set(i, j, true);
        adj.set(j, i, true);
    }
    Ok(adj.rank())
}

/// Closed-form index of a semi-regular single element of degree d:
/// the ceiling of (n + d)/2 below n = 3d, and 2d + 1 at n = 3d. Above
/// 3d no semi-regular element of that degree exists.
pub fn predicted_index_if_semiregular(n: usize, d: usize) -> Result<usize> {
    if d < 2 || n < d {
        return Err(Error::Inapplicable {
            reason: format!("prediction requires 2 <= d <= n, got n = {n}, d = {d}"),
        });
    }
    if n > 3 * d {
        return Err(Error::Inapplicable {
            reason: format!(
                "no semi-regular element of degree {d} exists in {n} variables (n > 3d)"
            ),
        });
    }
    if n == 3 * d {
        Ok(2 * d + 1)
    } else {
        Ok((n + d).div_ceil(2))
    }
}

/// Closed-form semi-regularity of the full symmetric element of degree
/// d in n variables. Writing d = 2^m * l with l odd: for l > 1 it is
/// semi-regular exactly for n up to d + 2^(m+1) - 1, for l = 1 up to
/// d + 2^(m+1). Linear symmetric elements are semi-regular for every n.
pub fn sigma_semiregular_predicted(d: usize, n: usize) -> Result<bool> {
    if d == 0 || n < d {
        return Err(Error::Inapplicable {
            reason: format!("symmetric element of degree {d} needs d >= 1 and n >= d, got n = {n}"),
        });
    }
    if d == 1 {
        return Ok(true);
    }
    let m = d.trailing_zeros();
    let l = d >> m;
    let reach = 1usize << (m + 1);
    let upper = if l > 1 { d + reach - 1 } else { d + reach };
    Ok(n <= upper)
}

/// Semi-regularity of a single element of degree d >= n/3 from rank
/// computations at the two or three critical degrees only.
///
/// For n < 3d, with D the predicted index: multiplication must be
/// injective into degree D - 1 and surjective onto degree D. At
/// n = 3d exactly: injective into degree 2d - 1, kernel of dimension
/// exactly one at degree d (the element itself), and surjective onto
/// degree 2d + 1.
pub fn semiregular_via_maps(lambda: &Element, budget: &Budget) -> Result<bool> {
    if lambda.is_zero() {
        return Err(Error::ZeroGenerator { position: 0 });
    }
    let n = lambda.n();
    let d = lambda.degree();
    if 3 * d < n {
        return Err(Error::Inapplicable {
            reason: format!("map criterion needs d >= n/3, got n = {n}, d = {d}"),
        });
    }
    let checked_map = |k: usize| -> Result<BitMatrix> {
        budget.check(choose64(n, k + d), choose64(n, k), k + d)?;
        mult_map_matrix(lambda, k)
    };
    if n == 3 * d {
        let inj = checked_map(d - 1)?;
        if inj.rank() < inj.cols() {
            return Ok(false);
        }
        let middle = checked_map(d)?;
        if middle.cols() - middle.rank() != 1 {
            return Ok(false);
        }
        let surj = checked_map(d + 1)?;
        Ok(surj.rank() == surj.rows())
    } else {
        let big_d = (n + d).div_ceil(2);
        // Source degree D - 1 - d is -1 when n = d; injectivity is then
        // vacuous.
        if big_d > d {
            let inj = checked_map(big_d - 1 - d)?;
            if inj.rank() < inj.cols() {
                return Ok(false);
            }
        }
        let surj = checked_map(big_d - d)?;
        Ok(surj.rank() == surj.rows())
    }
}

/// Sufficient condition only: the generators of minimal degree span
/// their whole graded component, which forces the quotient to vanish
/// there; every other generator has degree at least that, which keeps
/// the sequence semi-regular. False only means inconclusive.
pub fn is_trivially_semiregular(ideal: &IdealSpec, budget: &Budget) -> Result<bool> {
    let n = ideal.n;
    let min_degree = *ideal
        .degrees
        .entries()
        .iter()
        .min()
        .expect("degree vector is nonempty");
    let basis = GradedBasisIndex::new(n, min_degree)?;
    let dim = basis.count();
    let same: Vec<&Element> = ideal
        .gens
        .iter()
        .filter(|g| g.degree() == min_degree)
        .collect();
    if (same.len() as u64) < dim {
        return Ok(false);
    }
    budget.check(dim, same.len() as u64, min_degree)?;
    let mut m = BitMatrix::new(dim as usize, same.len());
    for (col, g) in same.iter().enumerate() {
        for &s in g.support_masks() {
            m.set(basis.rank_mask(s) as usize, col, true);
        }
    }
    Ok(m.rank() as u64 == dim)
}
