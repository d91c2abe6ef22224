use std::fmt;
use std::sync::Arc;

use crate::combinatorics::{binomial, colex_rank, colex_unrank, BinomialTable};
use crate::error::{Error, Result};

/// Largest ambient dimension a point bitmask can hold.
pub const MAX_N: usize = 62;

/// Largest slice that can carry a function table.
pub const MAX_TABLE_POINTS: u64 = 1 << 22;

/// The slice: all length-`n` bit vectors of Hamming weight `k`, ordered colexicographically.
#[derive(Clone)]
pub struct SliceDomain {
    n: usize,
    k: usize,
    size: u64,
    table: Arc<BinomialTable>,
}

impl SliceDomain {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be positive".into()));
        }
        if n > MAX_N {
            return Err(Error::Capacity {
                what: "ambient dimension n",
                actual: n as u64,
                limit: MAX_N as u64,
            });
        }
        if k > n {
            return Err(Error::InvalidArgument(format!("weight k={k} exceeds n={n}")));
        }
        let size = binomial(n as u64, k as u64).ok_or(Error::Capacity {
            what: "slice size",
            actual: u64::MAX,
            limit: u64::MAX,
        })?;
        Ok(SliceDomain {
            n,
            k,
            size,
            table: Arc::new(BinomialTable::new(n)),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of points, `C(n, k)`.
    pub fn size(&self) -> u64 {
        self.size
    }

    /// `min(k, n - k)`, the largest degree any function on this slice can have.
    pub fn max_degree(&self) -> usize {
        self.k.min(self.n - self.k)
    }

    pub fn rank(&self, point: SlicePoint) -> Result<u64> {
        if point.n != self.n {
            return Err(Error::InvalidArgument(format!(
                "point has {} coordinates, domain has {}",
                point.n, self.n
            )));
        }
        if point.weight() != self.k {
            return Err(Error::InvalidArgument(format!(
                "point has weight {}, domain weight is {}",
                point.weight(),
                self.k
            )));
        }
        Ok(colex_rank(&self.table, point.bits))
    }

    pub fn unrank(&self, rank: u64) -> Result<SlicePoint> {
        if rank >= self.size {
            return Err(Error::InvalidArgument(format!(
                "rank {rank} out of range 0..{}",
                self.size
            )));
        }
        Ok(self.point_unchecked(rank))
    }

    #[inline]
    pub(crate) fn point_unchecked(&self, rank: u64) -> SlicePoint {
        SlicePoint {
            n: self.n,
            bits: colex_unrank(&self.table, self.n, self.k, rank),
        }
    }

    #[inline]
    pub(crate) fn rank_bits(&self, bits: u64) -> u64 {
        colex_rank(&self.table, bits)
    }

    /// Points in rank order.
    pub fn points(&self) -> impl Iterator<Item = SlicePoint> + '_ {
        (0..self.size).map(move |r| self.point_unchecked(r))
    }

    /// Support bitmasks in rank order.
    pub fn point_masks(&self) -> Vec<u64> {
        self.points().map(|p| p.bits).collect()
    }

    pub(crate) fn check_table_capacity(&self) -> Result<()> {
        if self.size > MAX_TABLE_POINTS {
            return Err(Error::Capacity {
                what: "slice size C(n,k)",
                actual: self.size,
                limit: MAX_TABLE_POINTS,
            });
        }
        Ok(())
    }

    pub(crate) fn check_coord(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::InvalidArgument(format!(
                "coordinate {} out of range 1..={}",
                i + 1,
                self.n
            )));
        }
        Ok(())
    }

    pub(crate) fn ensure_same(&self, other: &SliceDomain) -> Result<()> {
        if self != other {
            return Err(Error::DomainMismatch(self.n, self.k, other.n, other.k));
        }
        Ok(())
    }
}

impl PartialEq for SliceDomain {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k
    }
}

impl Eq for SliceDomain {}

impl fmt::Debug for SliceDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SliceDomain(C({},{}))", self.n, self.k)
    }
}

/// A point of `{0,1}^n`, stored as the bitmask of its support (bit `i` is `x_{i+1}`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SlicePoint {
    n: usize,
    bits: u64,
}

impl SlicePoint {
    pub fn from_bits(n: usize, bits: u64) -> Result<Self> {
        if n > MAX_N || (n < 64 && bits >> n != 0) {
            return Err(Error::InvalidArgument(format!(
                "bitmask {bits:#b} does not fit in {n} coordinates"
            )));
        }
        Ok(SlicePoint { n, bits })
    }

    /// Builds a point from 0-based support coordinates.
    pub fn from_support(n: usize, support: &[usize]) -> Result<Self> {
        let mut bits = 0u64;
        for &i in support {
            if i >= n {
                return Err(Error::InvalidArgument(format!("coordinate {i} out of range")));
            }
            bits |= 1 << i;
        }
        Ok(SlicePoint { n, bits })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    /// Sorted 0-based support.
    pub fn support(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.get(i)).collect()
    }

    /// The point with coordinates `i` and `j` switched.
    pub fn transposed(&self, i: usize, j: usize) -> SlicePoint {
        SlicePoint {
            n: self.n,
            bits: swap_bits(self.bits, i, j),
        }
    }
}

impl fmt::Debug for SlicePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            write!(f, "{}", if self.get(i) { 1 } else { 0 })?;
        }
        Ok(())
    }
}

#[inline]
pub(crate) fn swap_bits(bits: u64, i: usize, j: usize) -> u64 {
    let bi = bits >> i & 1;
    let bj = bits >> j & 1;
    if bi == bj {
        bits
    } else {
        bits ^ (1 << i) ^ (1 << j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c42_rank_order() {
        let dom = SliceDomain::new(4, 2).unwrap();
        let supports: Vec<Vec<usize>> = dom.points().map(|p| p.support()).collect();
        // 1-based {1,2},{1,3},{2,3},{1,4},{2,4},{3,4}
        let expected = vec![
            vec![0, 1],
            vec![0, 2],
            vec![1, 2],
            vec![0, 3],
            vec![1, 3],
            vec![2, 3],
        ];
        assert_eq!(supports, expected);
    }

    #[test]
    fn rank_base_case() {
        let dom = SliceDomain::new(4, 2).unwrap();
        let p = SlicePoint::from_support(4, &[0, 1]).unwrap();
        assert_eq!(dom.rank(p).unwrap(), 0);
    }

    #[test]
    fn round_trip_c63() {
        let dom = SliceDomain::new(6, 3).unwrap();
        assert_eq!(dom.size(), 20);
        for r in 0..20 {
            let p = dom.unrank(r).unwrap();
            assert_eq!(dom.rank(p).unwrap(), r);
        }
    }

    #[test]
    fn errors() {
        let dom = SliceDomain::new(4, 2).unwrap();
        assert!(dom.unrank(6).is_err());
        let heavy = SlicePoint::from_support(4, &[0, 1, 2]).unwrap();
        assert!(dom.rank(heavy).is_err());
        assert!(SliceDomain::new(3, 4).is_err());
        assert!(SliceDomain::new(0, 0).is_err());
    }

    #[test]
    fn max_degree() {
        assert_eq!(SliceDomain::new(8, 3).unwrap().max_degree(), 3);
        assert_eq!(SliceDomain::new(8, 6).unwrap().max_degree(), 2);
        assert_eq!(SliceDomain::new(5, 0).unwrap().max_degree(), 0);
    }
}
