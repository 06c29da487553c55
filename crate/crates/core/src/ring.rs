//! Arithmetic in the quotient of a GF(2) polynomial ring by the squares
//! of all variables. The ring is graded by degree; every graded piece
//! has the squarefree monomials of that degree as a basis, so a
//! monomial is a set of variables and fits in one machine word.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Monomials are stored as 64-bit masks, which caps the variable count.
pub const MAX_VARS: usize = 64;

/// Supports larger than this are refused by [`random_element`]; a draw
/// needs one coin per basis monomial and holds about half of them.
const RANDOM_SUPPORT_CAP: u64 = 1 << 24;

/// Binomial coefficients C(n, k) for n <= 64 all fit in a u64
/// (the largest is C(64, 32) ~ 1.8e18).
pub(crate) fn choose64(n: usize, k: usize) -> u64 {
    static TABLE: OnceLock<Vec<[u64; MAX_VARS + 1]>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut t = vec![[0u64; MAX_VARS + 1]; MAX_VARS + 1];
        for n in 0..=MAX_VARS {
            t[n][0] = 1;
            for k in 1..=n {
                t[n][k] = t[n - 1][k - 1] + if k < n { t[n - 1][k] } else { 0 };
            }
        }
        t
    });
    if n > MAX_VARS || k > n {
        0
    } else {
        table[n][k]
    }
}

/// Mask with the low `n` bits set. `n == 64` needs care: shifting a u64
/// by 64 is undefined.
pub(crate) fn full_mask(n: usize) -> u64 {
    debug_assert!(n <= MAX_VARS);
    if n == 0 {
        0
    } else {
        u64::MAX >> (MAX_VARS - n)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n > MAX_VARS {
        return Err(Error::TooManyVariables { n });
    }
    Ok(())
}

/// A squarefree monomial in `n` variables. Bit `i` of the mask set
/// means variable `i + 1` divides the monomial (variables are 1-based
/// in all textual interfaces).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    n: u8,
    mask: u64,
}

impl Monomial {
    /// Builds a monomial from 1-based variable indices.
    pub fn new(n: usize, vars: &[usize]) -> Result<Self> {
        check_n(n)?;
        let mut mask = 0u64;
        for &v in vars {
            if v == 0 || v > n {
                return Err(Error::InvalidVariable { index: v, n });
            }
            let bit = 1u64 << (v - 1);
            if mask & bit != 0 {
                return Err(Error::DuplicateVariable { index: v });
            }
            mask |= bit;
        }
        Ok(Monomial { n: n as u8, mask })
    }

    pub fn from_mask(n: usize, mask: u64) -> Result<Self> {
        check_n(n)?;
        if mask & !full_mask(n) != 0 {
            return Err(Error::InvalidVariable {
                index: 64 - mask.leading_zeros() as usize,
                n,
            });
        }
        Ok(Monomial { n: n as u8, mask })
    }

    /// The multiplicative unit (empty variable set).
    pub fn unit(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Monomial {
            n: n as u8,
            mask: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn degree(&self) -> usize {
        self.mask.count_ones() as usize
    }

    /// 1-based variable indices in ascending order.
    pub fn vars(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degree());
        let mut m = self.mask;
        while m != 0 {
            out.push(m.trailing_zeros() as usize + 1);
            m &= m - 1;
        }
        out
    }

    /// The product of the variables not dividing this monomial.
    pub fn complement(&self) -> Self {
        Monomial {
            n: self.n,
            mask: full_mask(self.n as usize) & !self.mask,
        }
    }

    /// A monomial annihilates exactly the ideal generated by its own
    /// variables, so those variables form a basis of the annihilator
    /// in degree 1.
    pub fn annihilator_basis(&self) -> Vec<usize> {
        self.vars()
    }
}

/// Product of two monomials: the union of the variable sets if they are
/// disjoint, otherwise zero (a repeated variable squares to zero).
pub fn monomial_mul(a: Monomial, b: Monomial) -> Result<Option<Monomial>> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n as usize,
            right: b.n as usize,
        });
    }
    if a.mask & b.mask != 0 {
        Ok(None)
    } else {
        Ok(Some(Monomial {
            n: a.n,
            mask: a.mask | b.mask,
        }))
    }
}

/// A homogeneous element: a GF(2) sum of distinct monomials of one
/// degree, stored as a sorted mask list. The zero element has empty
/// support and only a nominal degree; zeros of any nominal degree
/// compare equal.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ElementRepr", into = "ElementRepr")]
pub struct Element {
    n: u8,
    degree: u32,
    support: Vec<u64>,
}

impl PartialEq for Element {
    fn eq(&self, other: &Self) -> bool {
        if self.n != other.n {
            return false;
        }
        if self.support.is_empty() && other.support.is_empty() {
            return true;
        }
        self.degree == other.degree && self.support == other.support
    }
}

impl Eq for Element {}

impl std::hash::Hash for Element {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        // Degree is omitted: zeros of different nominal degrees are equal.
        self.n.hash(state);
        self.support.hash(state);
    }
}

impl Element {
    pub fn zero(n: usize, degree: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Element {
            n: n as u8,
            degree: degree as u32,
            support: Vec::new(),
        })
    }

    pub fn unit(n: usize) -> Result<Self> {
        check_n(n)?;
        Ok(Element {
            n: n as u8,
            degree: 0,
            support: vec![0],
        })
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Element {
            n: m.n,
            degree: m.degree() as u32,
            support: vec![m.mask],
        }
    }

    /// Builds an element from monomial masks. Duplicate masks cancel in
    /// pairs (coefficients live in GF(2)).
    pub fn from_masks(n: usize, degree: usize, masks: &[u64]) -> Result<Self> {
        check_n(n)?;
        if degree > u32::MAX as usize {
            return Err(Error::DegreeOutOfRange { degree, n });
        }
        for &m in masks {
            if m & !full_mask(n) != 0 {
                return Err(Error::InvalidVariable {
                    index: 64 - m.leading_zeros() as usize,
                    n,
                });
            }
            if m.count_ones() as usize != degree {
                return Err(Error::DegreeMismatch {
                    left: degree,
                    right: m.count_ones() as usize,
                });
            }
        }
        let mut support = masks.to_vec();
        canonicalize(&mut support);
        Ok(Element {
            n: n as u8,
            degree: degree as u32,
            support,
        })
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Nominal degree; meaningful modulo the zero-element convention.
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.support.len()
    }

    /// Monomial masks in ascending order.
    pub fn support_masks(&self) -> &[u64] {
        &self.support
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        let n = self.n;
        self.support.iter().map(move |&mask| Monomial { n, mask })
    }
}

/// Sorts masks and cancels pairs of equal ones.
fn canonicalize(masks: &mut Vec<u64>) {
    masks.sort_unstable();
    let mut out = 0usize;
    let mut i = 0usize;
    while i < masks.len() {
        let mut j = i + 1;
        while j < masks.len() && masks[j] == masks[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            masks[out] = masks[i];
            out += 1;
        }
        i = j;
    }
    masks.truncate(out);
}

/// Graded addition. Zero is the identity at every degree; adding two
/// nonzero elements of different degrees is refused.
pub fn element_add(a: &Element, b: &Element) -> Result<Element> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n as usize,
            right: b.n as usize,
        });
    }
    if a.is_zero() {
        return Ok(b.clone());
    }
    if b.is_zero() {
        return Ok(a.clone());
    }
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch {
            left: a.degree as usize,
            right: b.degree as usize,
        });
    }
    let mut support = Vec::with_capacity(a.support.len() + b.support.len());
    support.extend_from_slice(&a.support);
    support.extend_from_slice(&b.support);
    canonicalize(&mut support);
    Ok(Element {
        n: a.n,
        degree: a.degree,
        support,
    })
}

/// Bilinear product: every pair of support monomials is multiplied and
/// the results cancel in pairs over GF(2).
pub fn element_mul(a: &Element, b: &Element) -> Result<Element> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n as usize,
            right: b.n as usize,
        });
    }
    let degree = a.degree + b.degree;
    let mut support = Vec::new();
    for &ma in &a.support {
        for &mb in &b.support {
            if ma & mb == 0 {
                support.push(ma | mb);
            }
        }
    }
    canonicalize(&mut support);
    Ok(Element {
        n: a.n,
        degree,
        support,
    })
}

/// The sum of all squarefree monomials of degree `d` in `n` variables.
/// For `d > n` there are none and the result is zero (not an error);
/// `d == 0` gives the unit.
pub fn sigma(d: usize, n: usize) -> Result<Element> {
    check_n(n)?;
    if d > n {
        return Element::zero(n, d);
    }
    let basis = GradedBasisIndex::new(n, d)?;
    let support: Vec<u64> = basis.iter_masks().collect();
    Ok(Element {
        n: n as u8,
        degree: d as u32,
        support,
    })
}

/// Checks the splitting of the degree-`d` symmetric element over the
/// variable split `{1..k} | {k+1..n}`: summing the products of the
/// degree-`j` symmetric element in the first block with the
/// degree-`(d-j)` one in the second block, over all `j`, reproduces it.
pub fn sigma_split_identity_check(d: usize, n: usize, k: usize) -> Result<bool> {
    check_n(n)?;
    if k > n {
        return Err(Error::InvalidVariable { index: k, n });
    }
    let mut support = Vec::new();
    for j in 0..=d {
        if j > k || d - j > n - k {
            continue;
        }
        let left = GradedBasisIndex::new(k, j)?;
        let right = GradedBasisIndex::new(n - k, d - j)?;
        for lo in left.iter_masks() {
            for hi in right.iter_masks() {
                support.push(lo | (hi << k));
            }
        }
    }
    canonicalize(&mut support);
    let direct = sigma(d, n)?;
    Ok(support == direct.support)
}

/// Draws a uniformly random nonzero homogeneous element of degree `d`:
/// one fair coin per basis monomial, resampling if every coin came up
/// zero.
pub fn random_element<R: Rng + ?Sized>(n: usize, d: usize, rng: &mut R) -> Result<Element> {
    check_n(n)?;
    if d > n {
        return Err(Error::DegreeOutOfRange { degree: d, n });
    }
    let count = choose64(n, d);
    if count > RANDOM_SUPPORT_CAP {
        return Err(Error::ResourceLimit {
            degree: d,
            rows: count,
            cols: 1,
            limit_bits: RANDOM_SUPPORT_CAP,
        });
    }
    let basis = GradedBasisIndex::new(n, d)?;
    loop {
        let mut support = Vec::new();
        for mask in basis.iter_masks() {
            if rng.gen::<bool>() {
                support.push(mask);
            }
        }
        if !support.is_empty() {
            return Ok(Element {
                n: n as u8,
                degree: d as u32,
                support,
            });
        }
    }
}

/// Ranks and unranks the squarefree monomials of one degree. The basis
/// order is colexicographic on variable sets, which coincides with
/// numeric order of the masks, so ranks are stable and iteration is a
/// word trick per step.
#[derive(Debug, Clone)]
pub struct GradedBasisIndex {
    n: usize,
    degree: usize,
    count: u64,
}

impl GradedBasisIndex {
    pub fn new(n: usize, degree: usize) -> Result<Self> {
        check_n(n)?;
        if degree > n {
            return Err(Error::DegreeOutOfRange { degree, n });
        }
        Ok(GradedBasisIndex {
            n,
            degree,
            count: choose64(n, degree),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn rank(&self, m: &Monomial) -> Result<u64> {
        if m.n() != self.n {
            return Err(Error::DimensionMismatch {
                left: m.n(),
                right: self.n,
            });
        }
        if m.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                left: m.degree(),
                right: self.degree,
            });
        }
        Ok(self.rank_mask(m.mask()))
    }

    /// Combinatorial number system: with 0-based bit positions
    /// p_0 < p_1 < ... the rank is the sum of C(p_j, j + 1).
    pub(crate) fn rank_mask(&self, mask: u64) -> u64 {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        let mut rank = 0u64;
        let mut m = mask;
        let mut j = 1usize;
        while m != 0 {
            let p = m.trailing_zeros() as usize;
            rank += choose64(p, j);
            j += 1;
            m &= m - 1;
        }
        rank
    }

    pub fn unrank(&self, rank: u64) -> Result<Monomial> {
        if rank >= self.count {
            return Err(Error::DegreeOutOfRange {
                degree: rank as usize,
                n: self.count as usize,
            });
        }
        let mut mask = 0u64;
        let mut r = rank;
        for j in (1..=self.degree).rev() {
            // Largest position p with C(p, j) <= r; positions below j - 1
            // contribute nothing.
            let mut p = j - 1;
            while p < MAX_VARS && choose64(p + 1, j) <= r {
                p += 1;
            }
            mask |= 1u64 << p;
            r -= choose64(p, j);
        }
        Ok(Monomial {
            n: self.n as u8,
            mask,
        })
    }

    /// All masks of the basis in ascending (colex) order.
    pub fn iter_masks(&self) -> impl Iterator<Item = u64> {
        let count = self.count;
        let first = full_mask(self.degree);
        let mut next = Some(first);
        let mut produced = 0u64;
        std::iter::from_fn(move || {
            if produced >= count {
                return None;
            }
            let cur = next?;
            produced += 1;
            next = if produced < count {
                // Gosper's hack: next mask with the same popcount.
                let u = cur & cur.wrapping_neg();
                let v = cur + u;
                Some(v | (((cur ^ v) / u) >> 2))
            } else {
                None
            };
            Some(cur)
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ElementRepr {
    n: usize,
    degree: usize,
    support: Vec<Vec<usize>>,
}

impl TryFrom<ElementRepr> for Element {
    type Error = Error;

    fn try_from(repr: ElementRepr) -> Result<Element> {
        let mut masks = Vec::with_capacity(repr.support.len());
        for vars in &repr.support {
            let m = Monomial::new(repr.n, vars)?;
            if m.degree() != repr.degree {
                return Err(Error::DegreeMismatch {
                    left: repr.degree,
                    right: m.degree(),
                });
            }
            masks.push(m.mask());
        }
        Element::from_masks(repr.n, repr.degree, &masks)
    }
}

impl From<Element> for ElementRepr {
    fn from(e: Element) -> ElementRepr {
        ElementRepr {
            n: e.n(),
            degree: e.degree(),
            support: e.monomials().map(|m| m.vars()).collect(),
        }
    }
}

/// Text format: `degree:n:{support}` with monomials as dot-joined
/// 1-based variable indices, comma-separated. The zero element prints
/// an empty brace pair; the unit prints `0:n:{1}` where the token `1`
/// in a degree-0 context denotes the empty monomial.
impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{{", self.degree, self.n)?;
        for (i, m) in self.monomials().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            if m.degree() == 0 {
                write!(f, "1")?;
            } else {
                let vars: Vec<String> = m.vars().iter().map(|v| v.to_string()).collect();
                write!(f, "{}", vars.join("."))?;
            }
        }
        write!(f, "}}")
    }
}

impl FromStr for Element {
    type Err = Error;

    fn from_str(s: &str) -> Result<Element> {
        let parse_err = |message: String| Error::Parse { message };
        let s = s.trim();
        let open = s
            .find('{')
            .ok_or_else(|| parse_err(format!("missing '{{' in element '{s}'")))?;
        if !s.ends_with('}') {
            return Err(parse_err(format!("missing trailing '}}' in element '{s}'")));
        }
        let head = &s[..open];
        let body = &s[open + 1..s.len() - 1];
        let mut parts = head.split(':');
        let degree: usize = parts
            .next()
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .ok_or_else(|| parse_err("missing degree field".into()))?
            .parse()
            .map_err(|e| parse_err(format!("bad degree: {e}")))?;
        let n: usize = parts
            .next()
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .ok_or_else(|| parse_err("missing variable-count field".into()))?
            .parse()
            .map_err(|e| parse_err(format!("bad variable count: {e}")))?;
        match parts.next() {
            Some(rest) if rest.trim().is_empty() => {}
            None => return Err(parse_err("expected 'degree:n:{{...}}'".into())),
            Some(junk) => {
                return Err(parse_err(format!(
                    "unexpected text '{junk}' before support"
                )))
            }
        }
        check_n(n).map_err(|e| parse_err(e.to_string()))?;
        let mut masks = Vec::new();
        for token in body.split(',') {
            let token = token.trim();
            if token.is_empty() {
                if body.trim().is_empty() {
                    break;
                }
                return Err(parse_err("empty monomial token".into()));
            }
            if token == "1" && degree == 0 {
                masks.push(0u64);
                continue;
            }
            let mut vars = Vec::new();
            for piece in token.split('.') {
                let v: usize = piece
                    .trim()
                    .parse()
                    .map_err(|e| parse_err(format!("bad variable index '{piece}': {e}")))?;
                vars.push(v);
            }
            let m = Monomial::new(n, &vars).map_err(|e| parse_err(e.to_string()))?;
            if m.degree() != degree {
                return Err(parse_err(format!(
                    "monomial '{token}' has degree {}, element declares degree {degree}",
                    m.degree()
                )));
            }
            masks.push(m.mask());
        }
        Element::from_masks(n, degree, &masks)
    }
}
