//! Exact counts of vacillating parking functions from the subset
//! recurrences, the monotone recurrences and the residue-class product
//! formula.
//!
//! For every length `n` the table stores one row holding, for each car
//! `i`, the number of lists where car `i` prefers and takes spot `n`
//! ("paren") and where car `i` prefers spot `n - 1` but takes spot `n`
//! ("bracket"). Rows are built bottom-up in `n`; rows 1 and 2 are fixed
//! initial conditions and every later row is computed. Weighted sums over
//! an earlier row are read off prefix sums cached with that row, so a new
//! row costs `O(n)` big-integer operations.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A counted family of vacillating parking functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CountFamily {
    /// `|VPF_n|`.
    Total(usize),
    /// Spot `n` is occupied by car `i`.
    Spot(usize, usize),
    /// Car `i` prefers spot `n` and parks there.
    Paren(usize, usize),
    /// Car `i` prefers spot `n - 1` and parks in spot `n`.
    Bracket(usize, usize),
    /// Non-decreasing lists of length `n`.
    NonDec(usize),
    /// Non-increasing lists of length `n`.
    NonInc(usize),
}

/// `(n, i, paren, bracket)` initial conditions for lengths 1 to 3.
pub const INITIAL_CONDITIONS: [(usize, usize, u32, u32); 6] = [
    (1, 1, 1, 0),
    (2, 1, 2, 0),
    (2, 2, 1, 1),
    (3, 1, 7, 0),
    (3, 2, 5, 0),
    (3, 3, 4, 4),
];

/// One length of the subset table plus prefix sums used by later rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Row {
    pub(crate) paren: Vec<BigUint>,
    pub(crate) bracket: Vec<BigUint>,
    pub(crate) total: BigUint,
    // prefix sums, index j covers cars 1..=j
    paren_sum: Vec<BigUint>,
    paren_moment: Vec<BigUint>,
    paren_triangular: Vec<BigUint>,
    bracket_sum: Vec<BigUint>,
    spot_sum: Vec<BigUint>,
}

impl Row {
    pub(crate) fn new(paren: Vec<BigUint>, bracket: Vec<BigUint>) -> Self {
        let m = paren.len();
        debug_assert_eq!(m, bracket.len());
        let mut paren_sum = Vec::with_capacity(m + 1);
        let mut paren_moment = Vec::with_capacity(m + 1);
        let mut paren_triangular = Vec::with_capacity(m + 1);
        let mut bracket_sum = Vec::with_capacity(m + 1);
        let mut spot_sum = Vec::with_capacity(m + 1);
        let (mut ps, mut pm, mut pt, mut bs, mut ss) = (
            BigUint::zero(),
            BigUint::zero(),
            BigUint::zero(),
            BigUint::zero(),
            BigUint::zero(),
        );
        for v in [
            &mut paren_sum,
            &mut paren_moment,
            &mut paren_triangular,
            &mut bracket_sum,
            &mut spot_sum,
        ] {
            v.push(BigUint::zero());
        }
        for l in 1..=m {
            let p = &paren[l - 1];
            let b = &bracket[l - 1];
            ps += p;
            pm += p * l;
            pt += p * (l * (l + 1) / 2);
            bs += b;
            ss += p + b;
            paren_sum.push(ps.clone());
            paren_moment.push(pm.clone());
            paren_triangular.push(pt.clone());
            bracket_sum.push(bs.clone());
            spot_sum.push(ss.clone());
        }
        Self {
            paren,
            bracket,
            total: ss,
            paren_sum,
            paren_moment,
            paren_triangular,
            bracket_sum,
            spot_sum,
        }
    }

    /// Sum of paren counts over `lo..=hi`, clamped to the row; empty ranges give 0.
    fn paren_range(&self, lo: usize, hi: usize) -> BigUint {
        range_sum(&self.paren_sum, lo, hi)
    }

    /// `sum_{l=lo}^{hi} l * paren[l]`, clamped to the row.
    fn paren_moment_range(&self, lo: usize, hi: usize) -> BigUint {
        range_sum(&self.paren_moment, lo, hi)
    }

    /// `sum_{l=1}^{hi} l(l+1)/2 * paren[l]`.
    fn paren_triangular_upto(&self, hi: usize) -> BigUint {
        range_sum(&self.paren_triangular, 1, hi)
    }

    fn bracket_upto(&self, hi: usize) -> BigUint {
        range_sum(&self.bracket_sum, 1, hi)
    }

    fn spot_upto(&self, hi: usize) -> BigUint {
        range_sum(&self.spot_sum, 1, hi)
    }
}

fn range_sum(prefix: &[BigUint], lo: usize, hi: usize) -> BigUint {
    let m = prefix.len() - 1;
    let lo = lo.max(1);
    let hi = hi.min(m);
    if lo > hi {
        return BigUint::zero();
    }
    &prefix[hi] - &prefix[lo - 1]
}

fn triangle(x: usize) -> usize {
    // (x)(x-1)/2 written for x = i - 1
    x * x.saturating_sub(1) / 2
}

/// Memoized counts, extended bottom-up on demand. Entries already present
/// never change.
#[derive(Clone, Debug, Default)]
pub struct CountTable {
    // rows[m - 1] is the row for length m
    rows: Vec<Row>,
    nondec: Vec<BigUint>,
    noninc: Vec<BigUint>,
}

impl CountTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Largest length with a computed subset row.
    pub fn max_len(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub(crate) fn from_rows(rows: Vec<Row>) -> Self {
        Self {
            rows,
            ..Self::default()
        }
    }

    fn total_at(&self, m: usize) -> BigUint {
        if m == 0 {
            BigUint::one()
        } else {
            self.rows[m - 1].total.clone()
        }
    }

    fn row(&self, m: usize) -> Option<&Row> {
        m.checked_sub(1).and_then(|idx| self.rows.get(idx))
    }

    /// Computes subset rows up to length `n`.
    pub fn ensure(&mut self, n: usize) {
        while self.rows.len() < n {
            let m = self.rows.len() + 1;
            let row = match m {
                1 | 2 => initial_row(m),
                _ => self.compute_row(m),
            };
            self.rows.push(row);
        }
    }

    pub(crate) fn compute_row(&self, n: usize) -> Row {
        debug_assert!(n >= 3 && self.rows.len() == n - 1);
        let total_1 = self.total_at(n - 1);
        let total_2 = self.total_at(n - 2);
        let total_3 = self.total_at(n - 3);
        let empty = Row::new(Vec::new(), Vec::new());
        let row_1 = self.row(n - 1).unwrap_or(&empty);
        let row_2 = self.row(n - 2).unwrap_or(&empty);
        let row_3 = self.row(n - 3).unwrap_or(&empty);

        let mut paren = Vec::with_capacity(n);
        let mut bracket = Vec::with_capacity(n);
        for i in 1..=n {
            // sum_{l=i}^{n-2} (l + 1 - i) P[n-2][l]
            //   = sum l P - (i - 1) sum P, nonnegative since l >= i
            let weighted =
                row_2.paren_moment_range(i, n - 2) - row_2.paren_range(i, n - 2) * (i - 1);
            paren.push(&total_1 + &total_2 * (n - i) + weighted);

            let pairs = triangle(i - 1);
            let mut b = &total_3 * pairs;
            b += row_1.bracket_upto(i - 1);
            if i >= 3 {
                b += row_2.spot_upto(i - 2) * (i - 1);
            }
            if i >= 4 {
                b += row_3.paren_triangular_upto(i - 3);
            }
            if i >= 3 {
                b += row_3.paren_range(i - 2, n - 3) * pairs;
            }
            bracket.push(b);
        }
        Row::new(paren, bracket)
    }

    fn check_index(n: usize, i: usize) -> Result<()> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { n, i });
        }
        Ok(())
    }

    pub fn vpf_total(&mut self, n: usize) -> BigUint {
        self.ensure(n);
        self.total_at(n)
    }

    pub fn vpf_paren(&mut self, n: usize, i: usize) -> Result<BigUint> {
        Self::check_index(n, i)?;
        self.ensure(n);
        Ok(self.rows[n - 1].paren[i - 1].clone())
    }

    pub fn vpf_bracket(&mut self, n: usize, i: usize) -> Result<BigUint> {
        Self::check_index(n, i)?;
        self.ensure(n);
        Ok(self.rows[n - 1].bracket[i - 1].clone())
    }

    pub fn vpf_spot(&mut self, n: usize, i: usize) -> Result<BigUint> {
        Ok(self.vpf_paren(n, i)? + self.vpf_bracket(n, i)?)
    }

    /// Non-decreasing count: `c_n = 2 c_{n-1} + c_{n-2}` from 1, 3.
    pub fn nondec_count(&mut self, n: usize) -> Result<BigUint> {
        if n < 1 {
            return Err(Error::LengthTooSmall { n, min: 1 });
        }
        if self.nondec.is_empty() {
            self.nondec
                .extend([BigUint::from(1u32), BigUint::from(3u32)]);
        }
        while self.nondec.len() < n {
            let m = self.nondec.len();
            let next = &self.nondec[m - 1] * 2u32 + &self.nondec[m - 2];
            self.nondec.push(next);
        }
        Ok(self.nondec[n - 1].clone())
    }

    /// Non-increasing count: `c_n = 2 c_{n-1} + c_{n-3}` from 1, 3, 6.
    pub fn noninc_count(&mut self, n: usize) -> Result<BigUint> {
        if n < 1 {
            return Err(Error::LengthTooSmall { n, min: 1 });
        }
        if self.noninc.is_empty() {
            self.noninc
                .extend([1u32, 3, 6].into_iter().map(BigUint::from));
        }
        while self.noninc.len() < n {
            let m = self.noninc.len();
            let next = &self.noninc[m - 1] * 2u32 + &self.noninc[m - 3];
            self.noninc.push(next);
        }
        Ok(self.noninc[n - 1].clone())
    }

    pub fn get(&mut self, family: CountFamily) -> Result<BigUint> {
        match family {
            CountFamily::Total(n) => Ok(self.vpf_total(n)),
            CountFamily::Spot(n, i) => self.vpf_spot(n, i),
            CountFamily::Paren(n, i) => self.vpf_paren(n, i),
            CountFamily::Bracket(n, i) => self.vpf_bracket(n, i),
            CountFamily::NonDec(n) => self.nondec_count(n),
            CountFamily::NonInc(n) => self.noninc_count(n),
        }
    }

    /// Product-formula count of `VPF_n(k)`.
    pub fn k_vacillating_count(&mut self, n: usize, k: usize) -> Result<BigUint> {
        if n == 0 {
            return Ok(BigUint::one());
        }
        let placements = multinomial(n, k)?;
        let (a, b) = (n / k, n % k);
        let big = self.vpf_total(a + 1);
        let small = self.vpf_total(a);
        Ok(placements * big.pow(b as u32) * small.pow((k - b) as u32))
    }
}

fn initial_row(m: usize) -> Row {
    let (paren, bracket) = INITIAL_CONDITIONS
        .iter()
        .filter(|(n, ..)| *n == m)
        .map(|&(_, _, p, b)| (BigUint::from(p), BigUint::from(b)))
        .unzip();
    Row::new(paren, bracket)
}

/// `n! / prod_{t=0}^{k-1} floor((n+t)/k)!`, the number of ways to interleave
/// the `k` residue classes of `[n]`.
///
/// Evaluated as a product of binomials so every intermediate is an exact
/// integer.
pub fn multinomial(n: usize, k: usize) -> Result<BigUint> {
    if k == 0 || k > n {
        return Err(Error::InvalidStep { k, n });
    }
    let mut acc = BigUint::one();
    let mut placed = 0usize;
    for t in 0..k {
        let size = (n + t) / k;
        placed += size;
        acc *= binomial(placed, size);
    }
    debug_assert_eq!(placed, n);
    Ok(acc)
}

pub(crate) fn binomial(m: usize, r: usize) -> BigUint {
    let r = r.min(m - r);
    let mut acc = BigUint::one();
    for j in 0..r {
        // acc = C(m, j) here; C(m, j+1) = C(m, j) * (m - j) / (j + 1)
        acc *= m - j;
        acc /= j + 1;
    }
    acc
}

pub fn vpf_total(n: usize) -> BigUint {
    CountTable::new().vpf_total(n)
}

pub fn vpf_spot(n: usize, i: usize) -> Result<BigUint> {
    CountTable::new().vpf_spot(n, i)
}

pub fn vpf_paren(n: usize, i: usize) -> Result<BigUint> {
    CountTable::new().vpf_paren(n, i)
}

pub fn vpf_bracket(n: usize, i: usize) -> Result<BigUint> {
    CountTable::new().vpf_bracket(n, i)
}

pub fn nondec_count(n: usize) -> Result<BigUint> {
    CountTable::new().nondec_count(n)
}

pub fn noninc_count(n: usize) -> Result<BigUint> {
    CountTable::new().noninc_count(n)
}

pub fn k_vacillating_count(n: usize, k: usize) -> Result<BigUint> {
    CountTable::new().k_vacillating_count(n, k)
}
