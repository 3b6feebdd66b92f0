//! Bit-packed GF(2) linear algebra.
//!
//! Everything downstream (Pauli groups, syndrome maps, decoder tables)
//! reduces to rank / solve / kernel questions over GF(2). Vectors are packed
//! into `u64` words; the echelon [`Basis`] supports incremental membership
//! and independence queries, and [`TrackedBasis`] additionally remembers how
//! each stored row decomposes over the originally inserted generators.

use crate::{Error, Result};

/// A fixed-length vector over GF(2), packed LSB-first into `u64` words.
///
/// Trailing bits beyond `len` are kept at zero; `Eq` and `Hash` rely on it.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    /// All-zero vector of `len` bits.
    #[must_use]
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Vector with ones exactly at `indices`.
    ///
    /// # Panics
    /// Panics if any index is out of range.
    #[must_use]
    pub fn from_indices(len: usize, indices: &[usize]) -> Self {
        let mut v = BitVec::zeros(len);
        for &i in indices {
            v.set(i, true);
        }
        v
    }

    /// Parses a string of `0`/`1` characters, most significant index last.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => {
                    return Err(Error::Parse(format!(
                        "bit string may contain only 0 and 1, found {c:?}"
                    )))
                }
            }
        }
        Ok(v)
    }

    /// Number of bits.
    #[must_use]
    pub fn len(&self) -> usize {
        self.len
    }

    /// True when the vector has no bits at all.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit at `i`.
    ///
    /// # Panics
    /// Panics if `i >= len`.
    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    /// Sets bit `i` to `value`.
    ///
    /// # Panics
    /// Panics if `i >= len`.
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    /// Flips bit `i`.
    pub fn flip(&mut self, i: usize) {
        let cur = self.get(i);
        self.set(i, !cur);
    }

    /// In-place XOR with another vector of the same length.
    ///
    /// # Panics
    /// Panics on length mismatch.
    pub fn xor_assign(&mut self, other: &BitVec) {
        assert_eq!(self.len, other.len, "xor of mismatched lengths");
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w ^= o;
        }
    }

    /// Parity of the AND with `other`: the GF(2) dot product.
    ///
    /// # Panics
    /// Panics on length mismatch.
    #[must_use]
    pub fn dot(&self, other: &BitVec) -> bool {
        assert_eq!(self.len, other.len, "dot of mismatched lengths");
        let mut acc = 0u64;
        for (w, o) in self.words.iter().zip(&other.words) {
            acc ^= w & o;
        }
        acc.count_ones() % 2 == 1
    }

    /// Number of ones.
    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// True when all bits are zero.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    #[must_use]
    pub fn leading_one(&self) -> Option<usize> {
        for (k, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(k * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Iterator over the indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut rem = w;
            std::iter::from_fn(move || {
                if rem == 0 {
                    None
                } else {
                    let b = rem.trailing_zeros() as usize;
                    rem &= rem - 1;
                    Some(k * 64 + b)
                }
            })
        })
    }

    /// Raw words, LSB-first. Trailing bits beyond `len` are zero.
    #[must_use]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Concatenation `self ++ other`.
    #[must_use]
    pub fn concat(&self, other: &BitVec) -> BitVec {
        let mut out = BitVec::zeros(self.len + other.len);
        for i in self.ones() {
            out.set(i, true);
        }
        for i in other.ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl std::fmt::Display for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

impl std::fmt::Debug for BitVec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVec({self})")
    }
}

/// Anything that behaves like a GF(2) vector for echelon reduction.
pub trait Gf2Vector: Clone {
    /// In-place XOR.
    fn xor_with(&mut self, other: &Self);
    /// Index of the lowest set coordinate, if any.
    fn pivot(&self) -> Option<usize>;
    /// Coordinate at `i`.
    fn coord(&self, i: usize) -> bool;
}

impl Gf2Vector for BitVec {
    fn xor_with(&mut self, other: &Self) {
        self.xor_assign(other);
    }
    fn pivot(&self) -> Option<usize> {
        self.leading_one()
    }
    fn coord(&self, i: usize) -> bool {
        self.get(i)
    }
}

/// An incrementally built echelon basis of a GF(2) subspace.
///
/// Rows are kept with strictly increasing pivot positions. `insert` returns
/// whether the vector enlarged the span, and `contains` answers membership
/// without mutating the basis.
pub struct Basis<V: Gf2Vector> {
    rows: Vec<V>,
}

impl<V: Gf2Vector> Default for Basis<V> {
    fn default() -> Self {
        Basis { rows: Vec::new() }
    }
}

impl<V: Gf2Vector> Basis<V> {
    /// Empty basis.
    #[must_use]
    pub fn new() -> Self {
        Self::default()
    }

    /// Reduces `v` against the stored rows; the residual has a pivot not yet
    /// present in the basis, or is zero when `v` lies in the span.
    #[must_use]
    pub fn reduce(&self, v: &V) -> V {
        let mut cur = v.clone();
        for row in &self.rows {
            let p = row.pivot().expect("basis rows are nonzero");
            match cur.pivot() {
                Some(cp) if cp > p => continue,
                Some(cp) if cp == p => cur.xor_with(row),
                _ => break,
            }
        }
        cur
    }

    /// True when `v` lies in the current span.
    #[must_use]
    pub fn contains(&self, v: &V) -> bool {
        self.reduce(v).pivot().is_none()
    }

    /// Inserts `v`; returns `true` when it was independent of the span.
    pub fn insert(&mut self, v: &V) -> bool {
        let red = self.reduce(v);
        match red.pivot() {
            None => false,
            Some(p) => {
                let pos = self
                    .rows
                    .binary_search_by_key(&p, |r| r.pivot().expect("nonzero"))
                    .unwrap_err();
                self.rows.insert(pos, red);
                true
            }
        }
    }

    /// Current rank.
    #[must_use]
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// True when the basis spans only the zero vector.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The echelon rows, pivots ascending.
    #[must_use]
    pub fn rows(&self) -> &[V] {
        &self.rows
    }
}

/// Echelon basis that also tracks how each row decomposes over the inserted
/// generators, enabling `solve`: express a vector as an XOR of generators.
pub struct TrackedBasis<V: Gf2Vector> {
    rows: Vec<(V, BitVec)>,
    capacity: usize,
    inserted: usize,
}

impl<V: Gf2Vector> TrackedBasis<V> {
    /// Basis prepared for up to `capacity` generator insertions.
    #[must_use]
    pub fn with_capacity(capacity: usize) -> Self {
        TrackedBasis {
            rows: Vec::new(),
            capacity,
            inserted: 0,
        }
    }

    /// Reduces `v`, returning the residual and the generator combination
    /// that was XORed into `v` to produce it.
    #[must_use]
    pub fn reduce_tracked(&self, v: &V) -> (V, BitVec) {
        let mut cur = v.clone();
        let mut combo = BitVec::zeros(self.capacity);
        for (row, rc) in &self.rows {
            let p = row.pivot().expect("basis rows are nonzero");
            match cur.pivot() {
                Some(cp) if cp > p => continue,
                Some(cp) if cp == p => {
                    cur.xor_with(row);
                    combo.xor_assign(rc);
                }
                _ => break,
            }
        }
        (cur, combo)
    }

    /// Inserts the next generator (its index is the insertion count so far).
    /// Returns `true` when it was independent.
    ///
    /// # Panics
    /// Panics when more than `capacity` generators are inserted.
    pub fn insert(&mut self, v: &V) -> bool {
        assert!(self.inserted < self.capacity, "tracked basis capacity");
        let idx = self.inserted;
        self.inserted += 1;
        let (red, mut combo) = self.reduce_tracked(v);
        combo.flip(idx);
        match red.pivot() {
            None => false,
            Some(p) => {
                let pos = self
                    .rows
                    .binary_search_by_key(&p, |(r, _)| r.pivot().expect("nonzero"))
                    .unwrap_err();
                self.rows.insert(pos, (red, combo));
                true
            }
        }
    }

    /// True when `v` lies in the span of the inserted generators.
    #[must_use]
    pub fn contains(&self, v: &V) -> bool {
        self.reduce_tracked(v).0.pivot().is_none()
    }

    /// Expresses `v` as an XOR of inserted generators, when possible. The
    /// returned vector is indexed by insertion order.
    #[must_use]
    pub fn solve(&self, v: &V) -> Option<BitVec> {
        let (res, combo) = self.reduce_tracked(v);
        if res.pivot().is_none() {
            Some(combo)
        } else {
            None
        }
    }

    /// Current rank.
    #[must_use]
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// True when nothing independent has been inserted.
    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Number of generators inserted so far.
    #[must_use]
    pub fn inserted(&self) -> usize {
        self.inserted
    }
}

/// Row rank of a matrix given as rows.
#[must_use]
pub fn rank(rows: &[BitVec]) -> usize {
    let mut b = Basis::new();
    for r in rows {
        b.insert(r);
    }
    b.len()
}

/// Reduced row echelon form. Returns the nonzero rows and their pivot
/// columns, ascending. Column order is the natural bit order.
#[must_use]
pub fn rref(rows: &[BitVec], ncols: usize) -> (Vec<BitVec>, Vec<usize>) {
    let mut work: Vec<BitVec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(pos) = (r..work.len()).find(|&i| work[i].get(col)) else {
            continue;
        };
        work.swap(r, pos);
        let pivot_row = work[r].clone();
        for (i, row) in work.iter_mut().enumerate() {
            if i != r && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        r += 1;
        if r == work.len() {
            break;
        }
    }
    work.truncate(r);
    (work, pivots)
}

/// Basis of the right kernel: all `v` with `row · v = 0` for every row.
/// Deterministic: one basis vector per free column, ascending.
#[must_use]
pub fn kernel_basis(rows: &[BitVec], ncols: usize) -> Vec<BitVec> {
    let (rr, pivots) = rref(rows, ncols);
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = BitVec::zeros(ncols);
        v.set(free, true);
        for (row, &p) in rr.iter().zip(&pivots) {
            if row.get(free) {
                v.set(p, true);
            }
        }
        basis.push(v);
    }
    basis
}

/// Solves `A v = b` for `v`, with `A` given by rows. Returns any solution,
/// chosen deterministically (free coordinates set to zero).
#[must_use]
pub fn solve(rows: &[BitVec], ncols: usize, b: &BitVec) -> Option<BitVec> {
    assert_eq!(rows.len(), b.len(), "rhs length must match row count");
    // Augment each row with its rhs bit, then run RREF on the widened system.
    let aug: Vec<BitVec> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut w = BitVec::zeros(ncols + 1);
            for j in r.ones() {
                w.set(j, true);
            }
            if b.get(i) {
                w.set(ncols, true);
            }
            w
        })
        .collect();
    let (rr, pivots) = rref(&aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None; // a row reduced to 0 = 1
    }
    let mut v = BitVec::zeros(ncols);
    for (row, &p) in rr.iter().zip(&pivots) {
        if row.get(ncols) {
            v.set(p, true);
        }
    }
    Some(v)
}

/// Transpose of a matrix given as rows over `ncols` columns.
#[must_use]
pub fn transpose(rows: &[BitVec], ncols: usize) -> Vec<BitVec> {
    let mut out = vec![BitVec::zeros(rows.len()); ncols];
    for (i, row) in rows.iter().enumerate() {
        for j in row.ones() {
            out[j].set(i, true);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVec {
        BitVec::from_bit_str(s).unwrap()
    }

    #[test]
    fn bit_ops_round_trip() {
        let mut v = BitVec::zeros(70);
        v.set(0, true);
        v.set(63, true);
        v.set(64, true);
        v.set(69, true);
        assert_eq!(v.count_ones(), 4);
        assert_eq!(v.ones().collect::<Vec<_>>(), vec![0, 63, 64, 69]);
        assert_eq!(v.leading_one(), Some(0));
        v.flip(0);
        assert_eq!(v.leading_one(), Some(63));
        let s = v.to_string();
        assert_eq!(BitVec::from_bit_str(&s).unwrap(), v);
    }

    #[test]
    fn dot_is_parity_of_overlap() {
        let a = bv("1101");
        let b = bv("1011");
        // overlap at positions 0 and 3: even parity
        assert!(!a.dot(&b));
        let c = bv("0111");
        // overlap of a and c at positions 1 and 3: even; flip one bit
        assert!(!a.dot(&c));
        assert!(a.dot(&bv("0100")));
    }

    #[test]
    fn rank_matches_naive_elimination() {
        // Oracle: textbook elimination over a dense bool matrix.
        fn naive_rank(rows: &[Vec<bool>]) -> usize {
            let mut m: Vec<Vec<bool>> = rows.to_vec();
            let ncols = m.first().map_or(0, Vec::len);
            let mut rank = 0;
            for col in 0..ncols {
                if let Some(pos) = (rank..m.len()).find(|&i| m[i][col]) {
                    m.swap(rank, pos);
                    let pivot = m[rank].clone();
                    for (i, row) in m.iter_mut().enumerate() {
                        if i != rank && row[col] {
                            for (x, p) in row.iter_mut().zip(&pivot) {
                                *x ^= p;
                            }
                        }
                    }
                    rank += 1;
                }
            }
            rank
        }

        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..50 {
            let nrows = (next() % 8 + 1) as usize;
            let ncols = (next() % 12 + 1) as usize;
            let dense: Vec<Vec<bool>> = (0..nrows)
                .map(|_| (0..ncols).map(|_| next() % 2 == 1).collect())
                .collect();
            let packed: Vec<BitVec> = dense
                .iter()
                .map(|r| {
                    let mut v = BitVec::zeros(ncols);
                    for (i, &b) in r.iter().enumerate() {
                        if b {
                            v.set(i, true);
                        }
                    }
                    v
                })
                .collect();
            assert_eq!(rank(&packed), naive_rank(&dense));
        }
    }

    #[test]
    fn basis_membership_and_independence() {
        let mut b = Basis::new();
        assert!(b.insert(&bv("1100")));
        assert!(b.insert(&bv("0110")));
        assert!(!b.insert(&bv("1010"))); // sum of the first two
        assert!(b.contains(&bv("1010")));
        assert!(!b.contains(&bv("0001")));
        assert_eq!(b.len(), 2);
    }

    #[test]
    fn tracked_basis_solves_combinations() {
        let gens = [bv("1100"), bv("0110"), bv("0011")];
        let mut tb = TrackedBasis::with_capacity(gens.len());
        for g in &gens {
            tb.insert(g);
        }
        // 1001 = gens[0] + gens[1] + gens[2]
        let combo = tb.solve(&bv("1001")).unwrap();
        assert_eq!(combo.ones().collect::<Vec<_>>(), vec![0, 1, 2]);
        // verify by substitution
        let mut acc = BitVec::zeros(4);
        for i in combo.ones() {
            acc.xor_assign(&gens[i]);
        }
        assert_eq!(acc, bv("1001"));
        assert!(tb.solve(&bv("0001")).is_none());
    }

    #[test]
    fn kernel_vectors_annihilate_rows() {
        let rows = vec![bv("110101"), bv("011011"), bv("101110")];
        let ker = kernel_basis(&rows, 6);
        assert_eq!(ker.len(), 6 - rank(&rows));
        for v in &ker {
            for r in &rows {
                assert!(!r.dot(v));
            }
        }
        // kernel vectors are independent
        assert_eq!(rank(&ker), ker.len());
    }

    #[test]
    fn solve_finds_a_witness_or_proves_none() {
        let rows = vec![bv("1100"), bv("0110")];
        let b = BitVec::from_indices(2, &[0]);
        let v = solve(&rows, 4, &b).unwrap();
        // substitute
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.dot(&v), b.get(i));
        }
        // inconsistent system: x1+x2 = 1 and x1+x2 = 0
        let rows2 = vec![bv("11"), bv("11")];
        assert!(solve(&rows2, 2, &BitVec::from_indices(2, &[0])).is_none());
    }

    #[test]
    fn transpose_involution() {
        let rows = vec![bv("10110"), bv("01011")];
        let t = transpose(&rows, 5);
        assert_eq!(t.len(), 5);
        let tt = transpose(&t, 2);
        assert_eq!(tt, rows);
    }
}
