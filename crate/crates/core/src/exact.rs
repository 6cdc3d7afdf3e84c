//! Exact counting of constant-margin matrices.
//!
//! Rows share a common sum, so they are exchangeable: after any number of
//! columns have been filled, only the multiset of remaining row deficits
//! matters. The counter walks column by column over sorted deficit vectors.
//! Each column is itself filled one row at a time, with the intermediate
//! state `(new deficits of filled rows, old deficits of pending rows,
//! remaining column sum)`, which keeps the branching factor at `t + 1`
//! instead of the number of compositions of `t`.
//!
//! Only the first half of the columns is walked. With `H_j(d)` the number of
//! `m × j` fillings leaving deficit vector `d`, the full count is
//! `Σ_d H_k(d)·H_{n−k}(s − d)`, and `H` depends only on the sorted vector.

use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::numeric::{binomial, factorial, CountExact};
use crate::table::TableSpec;

/// Default cap on the number of stored DP states, `2^28`.
pub const DEFAULT_MAX_STATES: u64 = 1 << 28;

/// Hard limits for [`count_bruteforce`].
pub const BRUTEFORCE_MAX_CELLS: u64 = 12;
pub const BRUTEFORCE_MAX_ROW_SUM: u64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConfig {
    /// Largest number of states held in any frontier before giving up.
    pub max_states: u64,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            max_states: DEFAULT_MAX_STATES,
        }
    }
}

/// A column-boundary state of the counting recursion.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DpState {
    sorted_deficits: Vec<u64>,
    columns_remaining: u64,
}

impl DpState {
    /// Builds a state, checking that the deficits are nonincreasing, bounded
    /// by the row sum, and conserve mass: `Σ deficits = columns_remaining·t`.
    pub fn new(sorted_deficits: Vec<u64>, columns_remaining: u64, s: u64, t: u64) -> Result<Self> {
        if sorted_deficits.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::invalid("deficits must be nonincreasing"));
        }
        if sorted_deficits.iter().any(|&d| d > s) {
            return Err(Error::invalid("deficit exceeds row sum"));
        }
        let mass: u128 = sorted_deficits.iter().map(|&d| d as u128).sum();
        if mass != columns_remaining as u128 * t as u128 {
            return Err(Error::invalid(format!(
                "mass {mass} ≠ {columns_remaining}·{t}"
            )));
        }
        Ok(DpState {
            sorted_deficits,
            columns_remaining,
        })
    }

    pub fn sorted_deficits(&self) -> &[u64] {
        &self.sorted_deficits
    }

    pub fn columns_remaining(&self) -> u64 {
        self.columns_remaining
    }
}

/// Counts `M(m, s; n, t)` with the default resource cap.
pub fn count_exact(spec: &TableSpec) -> Result<CountExact> {
    count_exact_with(spec, &ExactConfig::default())
}

pub fn count_exact_with(spec: &TableSpec, config: &ExactConfig) -> Result<CountExact> {
    // track the shorter side
    let spec = if spec.m() > spec.n() {
        spec.transpose()
    } else {
        *spec
    };
    if spec.s() == 0 || spec.m() == 1 {
        return Ok(CountExact::from(1));
    }
    let (m, s, n, t) = (spec.m(), spec.s(), spec.n(), spec.t());
    if m > u16::MAX as u64 || s > u16::MAX as u64 || t > u16::MAX as u64 {
        return Err(Error::ResourceLimit {
            what: "row count and margins must fit in 16 bits".into(),
            cap: u16::MAX as u128,
        });
    }
    let shape = Shape {
        m: m as usize,
        s: s as u16,
        t: t as u16,
        n,
        max_states: config.max_states,
    };

    let fits_u128 = half_count_bound(&shape) < (BigUint::one() << 127u32);
    let bits = (64 - s.max(t).leading_zeros() as usize).max(1);
    let packed = (shape.m + 1) * bits.max(1) <= 128;
    let count = match (packed, fits_u128) {
        (true, true) => count_halves::<Packed, u128>(&shape, Packed { bits }),
        (true, false) => count_halves::<Packed, BigUint>(&shape, Packed { bits }),
        (false, true) => count_halves::<Unpacked, u128>(&shape, Unpacked),
        (false, false) => count_halves::<Unpacked, BigUint>(&shape, Unpacked),
    }?;
    Ok(CountExact::new(count))
}

struct Shape {
    m: usize,
    s: u16,
    t: u16,
    n: u64,
    max_states: u64,
}

/// Upper bound on any stored DP value: every partial filling of up to
/// `⌈n/2⌉` columns is a choice of one composition of `t` per column.
fn half_count_bound(shape: &Shape) -> BigUint {
    let per_column = binomial(shape.m as u64 + shape.t as u64 - 1, shape.t as u64);
    let cols = shape.n - shape.n / 2;
    num_traits::pow(per_column, cols as usize)
}

trait Codec {
    type Key: Hash + Eq + Clone;
    fn encode(&self, values: &[u16]) -> Self::Key;
    fn decode(&self, key: &Self::Key, out: &mut [u16]);
}

struct Packed {
    bits: usize,
}

impl Codec for Packed {
    type Key = u128;

    #[inline]
    fn encode(&self, values: &[u16]) -> u128 {
        values
            .iter()
            .rev()
            .fold(0u128, |acc, &v| (acc << self.bits) | v as u128)
    }

    #[inline]
    fn decode(&self, key: &u128, out: &mut [u16]) {
        let mask = (1u128 << self.bits) - 1;
        let mut k = *key;
        for slot in out.iter_mut() {
            *slot = (k & mask) as u16;
            k >>= self.bits;
        }
    }
}

struct Unpacked;

impl Codec for Unpacked {
    type Key = Box<[u16]>;

    fn encode(&self, values: &[u16]) -> Box<[u16]> {
        values.into()
    }

    fn decode(&self, key: &Box<[u16]>, out: &mut [u16]) {
        out.copy_from_slice(key);
    }
}

trait Counter: Clone {
    fn empty() -> Self;
    fn unit() -> Self;
    fn add_from(&mut self, other: &Self) -> Result<()>;
    fn to_big(&self) -> BigUint;
}

impl Counter for u128 {
    fn empty() -> Self {
        0
    }

    fn unit() -> Self {
        1
    }

    #[inline]
    fn add_from(&mut self, other: &Self) -> Result<()> {
        *self = self
            .checked_add(*other)
            .ok_or_else(|| Error::Verification("128-bit DP counter overflowed its bound".into()))?;
        Ok(())
    }

    fn to_big(&self) -> BigUint {
        BigUint::from(*self)
    }
}

impl Counter for BigUint {
    fn empty() -> Self {
        Zero::zero()
    }

    fn unit() -> Self {
        One::one()
    }

    #[inline]
    fn add_from(&mut self, other: &Self) -> Result<()> {
        *self += other;
        Ok(())
    }

    fn to_big(&self) -> BigUint {
        self.clone()
    }
}

type Frontier<K, C> = FxHashMap<K, C>;

fn check_cap(len: usize, shape: &Shape) -> Result<()> {
    if len as u64 > shape.max_states {
        Err(Error::ResourceLimit {
            what: "stored DP states".into(),
            cap: shape.max_states as u128,
        })
    } else {
        Ok(())
    }
}

/// Fills one column. Keys are `m + 1` slots: `m` deficits sorted
/// nonincreasing followed by the remaining column sum (zero at column
/// boundaries).
fn column_step<K: Codec, C: Counter>(
    codec: &K,
    shape: &Shape,
    frontier: Frontier<K::Key, C>,
) -> Result<Frontier<K::Key, C>> {
    let m = shape.m;
    let mut buf = vec![0u16; m + 1];
    let mut out = vec![0u16; m + 1];

    let mut current: Frontier<K::Key, C> = FxHashMap::default();
    current.reserve(frontier.len());
    for (key, count) in frontier {
        codec.decode(&key, &mut buf);
        buf[..m].reverse();
        buf[m] = shape.t;
        current.insert(codec.encode(&buf), count);
    }

    for filled in 0..m {
        let mut next: Frontier<K::Key, C> = FxHashMap::default();
        next.reserve(current.len() * 2);
        for (key, count) in current.drain() {
            codec.decode(&key, &mut buf);
            let (done, rest) = buf[..m].split_at(filled);
            let t_rem = buf[m];
            let deficit = rest[0];
            let pending: u32 = rest[1..].iter().map(|&d| d as u32).sum();
            let lo = (t_rem as u32).saturating_sub(pending) as u16;
            let hi = deficit.min(t_rem);
            for take in lo..=hi {
                let left = deficit - take;
                // insert `left` into the nonincreasing prefix
                let pos = done.partition_point(|&d| d >= left);
                out[..pos].copy_from_slice(&done[..pos]);
                out[pos] = left;
                out[pos + 1..=filled].copy_from_slice(&done[pos..]);
                out[filled + 1..m].copy_from_slice(&rest[1..]);
                out[m] = t_rem - take;
                next.entry(codec.encode(&out))
                    .or_insert_with(C::empty)
                    .add_from(&count)?;
            }
        }
        check_cap(next.len(), shape)?;
        current = next;
    }

    if cfg!(debug_assertions) {
        for key in current.keys() {
            codec.decode(key, &mut buf);
            debug_assert_eq!(buf[m], 0, "column sum not exhausted");
        }
    }
    Ok(current)
}

fn permutations_of(sorted: &[u16]) -> BigUint {
    let mut result = factorial(sorted.len() as u64);
    let mut run = 1u64;
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            result /= factorial(run);
            run = 1;
        }
    }
    result / factorial(run)
}

fn count_halves<K: Codec, C: Counter>(shape: &Shape, codec: K) -> Result<BigUint> {
    let m = shape.m;
    let first_half = shape.n / 2;
    let second_half = shape.n - first_half;

    let mut start = vec![shape.s; m + 1];
    start[m] = 0;
    let mut frontier: Frontier<K::Key, C> = FxHashMap::default();
    frontier.insert(codec.encode(&start), C::unit());

    let mut buf = vec![0u16; m + 1];
    let mut stored_first: Option<Frontier<K::Key, C>> = None;
    for col in 1..=second_half {
        frontier = column_step(&codec, shape, frontier)?;
        if cfg!(debug_assertions) {
            let remaining = shape.n - col;
            for key in frontier.keys() {
                codec.decode(key, &mut buf);
                let state = DpState::new(
                    buf[..m].iter().map(|&d| d as u64).collect(),
                    remaining,
                    shape.s as u64,
                    shape.t as u64,
                );
                debug_assert!(state.is_ok(), "{:?}", state);
            }
        }
        if col == first_half && first_half != second_half {
            stored_first = Some(frontier.clone());
        }
    }
    let late = frontier;
    let early = stored_first.as_ref().unwrap_or(&late);

    // M = Σ_D P_k(D)·P_{n−k}(s − D) / perm(D)
    let mut total = BigUint::zero();
    let mut complement = vec![0u16; m + 1];
    for (key, count) in early {
        codec.decode(key, &mut buf);
        for i in 0..m {
            complement[i] = shape.s - buf[m - 1 - i];
        }
        complement[m] = 0;
        if let Some(other) = late.get(&codec.encode(&complement)) {
            let product = count.to_big() * other.to_big();
            total += product / permutations_of(&buf[..m]);
        }
    }
    Ok(total)
}

/// Exhaustive enumeration for tiny instances: every row is a composition
/// of `s` into `n` parts, kept only while column sums stay within `t`.
pub fn count_bruteforce(spec: &TableSpec) -> Result<CountExact> {
    if spec.cells() > BRUTEFORCE_MAX_CELLS as u128 || spec.s() > BRUTEFORCE_MAX_ROW_SUM {
        return Err(Error::ResourceLimit {
            what: format!(
                "brute force limited to m·n ≤ {BRUTEFORCE_MAX_CELLS} and s ≤ {BRUTEFORCE_MAX_ROW_SUM}"
            ),
            cap: BRUTEFORCE_MAX_CELLS as u128,
        });
    }
    let m = spec.m() as usize;
    let n = spec.n() as usize;
    let mut cols = vec![0u64; n];
    let mut row = vec![0u64; n];
    let count = fill_rows(m, spec.s(), spec.t(), &mut cols, &mut row);
    Ok(CountExact::from(count))
}

fn fill_rows(rows_left: usize, s: u64, t: u64, cols: &mut [u64], row: &mut [u64]) -> u64 {
    if rows_left == 0 {
        return cols.iter().all(|&c| c == t) as u64;
    }
    let mut total = 0;
    let mut rows = Vec::new();
    compositions(s, 0, cols, t, row, &mut rows);
    for r in rows {
        for (c, x) in cols.iter_mut().zip(&r) {
            *c += x;
        }
        total += fill_rows(rows_left - 1, s, t, cols, row);
        for (c, x) in cols.iter_mut().zip(&r) {
            *c -= x;
        }
    }
    total
}

fn compositions(left: u64, at: usize, cols: &[u64], t: u64, row: &mut [u64], out: &mut Vec<Vec<u64>>) {
    if at + 1 == row.len() {
        if cols[at] + left <= t {
            row[at] = left;
            out.push(row.to_vec());
        }
        return;
    }
    let room = t - cols[at];
    for x in 0..=left.min(room) {
        row[at] = x;
        compositions(left - x, at + 1, cols, t, row, out);
    }
}

/// Reads `count` as a `u64` when it fits; handy in tests and examples.
pub fn small_value(count: &CountExact) -> Option<u64> {
    count.value().to_u64()
}
