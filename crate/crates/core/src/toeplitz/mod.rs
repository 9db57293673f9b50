//! Toeplitz matrices given by their first row and first column, and the
//! exact rank, nullity and kernel computations on them.
//!
//! A spec of order `n` holds `a_0..a_n` (first row) and `b_1..b_n` (first
//! column below the diagonal) and materializes to the `(n+1) x (n+1)` matrix
//! with `entry(i, j) = a_{j-i}` for `j >= i` and `b_{i-j}` otherwise. The
//! spec of order `n` is the top-left corner of every spec extending it.
//!
//! Over GF(2) rank and kernel computations go through the bit-packed
//! [`BitMatrix`]; the generic path on [`DenseMatrix`] is always available
//! and the two agree exactly.

mod bits;
mod dense;

use std::fmt;

pub use bits::BitMatrix;

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::kernel_structure::{NullityString, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ToeplitzSpec {
    field: PrimeField,
    a: Vec<u32>,
    b: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankNullity {
    pub rank: usize,
    pub nullity: usize,
}

impl ToeplitzSpec {
    /// `a` holds `a_0..a_n`, `b` holds `b_1..b_n`.
    pub fn new(field: PrimeField, a: Vec<u32>, b: Vec<u32>) -> Result<Self> {
        if a.is_empty() {
            return Err(Error::InvalidArgument("first row must contain a_0".into()));
        }
        if b.len() + 1 != a.len() {
            return Err(Error::InvalidArgument(format!(
                "need length(b) = length(a) - 1, got {} and {}",
                b.len(),
                a.len()
            )));
        }
        let q = field.modulus();
        if let Some(&v) = a.iter().chain(&b).find(|&&v| v >= q) {
            return Err(Error::NotInField {
                value: u64::from(v),
                q,
            });
        }
        Ok(Self { field, a, b })
    }

    pub fn from_elements(field: PrimeField, a: &[FieldElement], b: &[FieldElement]) -> Result<Self> {
        let q = field.modulus();
        if let Some(x) = a.iter().chain(b).find(|x| x.modulus() != q) {
            return Err(Error::FieldMismatch {
                left: q,
                right: x.modulus(),
            });
        }
        Self::new(
            field,
            a.iter().map(|x| x.value()).collect(),
            b.iter().map(|x| x.value()).collect(),
        )
    }

    pub fn zero(field: PrimeField, order: usize) -> Self {
        Self {
            field,
            a: vec![0; order + 1],
            b: vec![0; order],
        }
    }

    pub fn identity(field: PrimeField, order: usize) -> Self {
        let mut s = Self::zero(field, order);
        s.a[0] = 1;
        s
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// The order index `n`; the matrix is `(n+1) x (n+1)`.
    pub fn order(&self) -> usize {
        self.b.len()
    }

    pub fn size(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[u32] {
        &self.a
    }

    /// `b_1..b_n`; `b()[0]` is `b_1`.
    pub fn b(&self) -> &[u32] {
        &self.b
    }

    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        toeplitz_entry(&self.a, &self.b, i, j)
    }

    pub fn extend(&self, b_new: FieldElement, a_new: FieldElement) -> Result<Self> {
        let q = self.field.modulus();
        for x in [b_new, a_new] {
            if x.modulus() != q {
                return Err(Error::FieldMismatch {
                    left: q,
                    right: x.modulus(),
                });
            }
        }
        let mut next = self.clone();
        next.a.push(a_new.value());
        next.b.push(b_new.value());
        Ok(next)
    }

    /// All `q^2` one-step extensions, ordered by `(b_new, a_new)`.
    pub fn extensions(&self) -> impl Iterator<Item = ToeplitzSpec> + '_ {
        let q = self.field.modulus();
        (0..q).flat_map(move |bn| {
            (0..q).map(move |an| {
                let mut next = self.clone();
                next.a.push(an);
                next.b.push(bn);
                next
            })
        })
    }

    pub fn truncate(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::Domain("cannot truncate a 1x1 matrix".into()));
        }
        self.prefix(self.order() - 1)
    }

    /// The spec of order `m <= n` sitting in the top-left corner.
    pub fn prefix(&self, m: usize) -> Result<Self> {
        if m > self.order() {
            return Err(Error::Domain(format!(
                "prefix order {m} exceeds order {}",
                self.order()
            )));
        }
        Ok(Self {
            field: self.field,
            a: self.a[..=m].to_vec(),
            b: self.b[..m].to_vec(),
        })
    }

    /// The transposed matrix is again Toeplitz, with the roles of `a` and `b` swapped.
    pub fn transpose(&self) -> Self {
        let mut a = Vec::with_capacity(self.a.len());
        a.push(self.a[0]);
        a.extend_from_slice(&self.b);
        Self {
            field: self.field,
            a,
            b: self.a[1..].to_vec(),
        }
    }

    pub fn materialize(&self) -> DenseMatrix {
        let size = self.size();
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                entries.push(self.entry(i, j));
            }
        }
        DenseMatrix {
            field: self.field,
            size,
            entries,
        }
    }

    /// Bit-packed form, only for GF(2).
    pub fn materialize_bits(&self) -> Option<BitMatrix> {
        if self.field.modulus() != 2 {
            return None;
        }
        let size = self.size();
        let mut m = BitMatrix::zeros(size, size);
        for i in 0..size {
            for j in 0..size {
                if self.entry(i, j) == 1 {
                    m.set(i, j, true);
                }
            }
        }
        Some(m)
    }

    pub fn rank_nullity(&self) -> RankNullity {
        let rank = match self.materialize_bits() {
            Some(bits) => bits.rank(),
            None => self.materialize().rank(),
        };
        RankNullity {
            rank,
            nullity: self.size() - rank,
        }
    }

    pub fn nullity(&self) -> usize {
        self.rank_nullity().nullity
    }

    pub fn kernel_basis(&self) -> KernelBasis {
        match self.materialize_bits() {
            Some(bits) => KernelBasis::from_bit_vectors(self.size(), bits.kernel_vectors()),
            None => self.materialize().kernel_basis(),
        }
    }

    /// `nu_0..nu_n`, the nullities of every top-left prefix.
    pub fn nullity_string(&self) -> NullityString {
        let mut elim = Eliminator::new(self.field);
        NullityString::from(
            (0..=self.order())
                .map(|m| elim.nullity(&self.a[..=m], &self.b[..m]))
                .collect::<Vec<_>>(),
        )
    }
}

impl fmt::Display for ToeplitzSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} n={} a={:?} b={:?}",
            self.field,
            self.order(),
            self.a,
            self.b
        )
    }
}

#[inline]
fn toeplitz_entry(a: &[u32], b: &[u32], i: usize, j: usize) -> u32 {
    if j >= i {
        a[j - i]
    } else {
        b[i - j - 1]
    }
}

/// Materialized square matrix over GF(q), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseMatrix {
    field: PrimeField,
    size: usize,
    entries: Vec<u32>,
}

impl DenseMatrix {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.size + j]
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.size).map(|r| r.to_vec()).collect()
    }

    /// Rank by generic Gaussian elimination, whatever the field.
    pub fn rank(&self) -> usize {
        let mut data = self.entries.clone();
        dense::rank_in_place(self.field, &mut data, self.size, self.size)
    }

    /// Right kernel by generic Gaussian elimination, whatever the field.
    pub fn kernel_basis(&self) -> KernelBasis {
        let mut data = self.entries.clone();
        let pivots = dense::rref_in_place(self.field, &mut data, self.size, self.size);
        let raw = dense::kernel_from_rref(self.field, &data, self.size, &pivots);
        KernelBasis::from_raw(self.field, self.size, &raw)
    }

    pub fn mul_vector(&self, v: &[u32]) -> Vec<u32> {
        let f = self.field;
        self.entries
            .chunks(self.size)
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(0, |acc, (&x, &y)| f.add_raw(acc, f.mul_raw(x, y)))
            })
            .collect()
    }
}

/// Canonical basis of a subspace of `GF(q)^len`: reduced echelon form,
/// leading entries 1, ordered by leading index. Two kernels are the same
/// subspace iff their `KernelBasis` values compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KernelBasis {
    field: PrimeField,
    len: usize,
    vectors: Vec<Vector>,
}

impl KernelBasis {
    /// Canonical basis of the span of arbitrary vectors of length `len`.
    pub fn span(field: PrimeField, len: usize, vectors: &[Vector]) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != len) {
            return Err(Error::InvalidArgument(format!(
                "vector of length {} in a span of length-{len} vectors",
                v.len()
            )));
        }
        let q = field.modulus();
        if vectors.iter().flat_map(|v| v.entries()).any(|&x| x >= q) {
            return Err(Error::InvalidArgument(format!("entry outside GF({q})")));
        }
        let raw: Vec<Vec<u32>> = vectors.iter().map(|v| v.entries().to_vec()).collect();
        Ok(Self::from_raw(field, len, &raw))
    }

    fn from_raw(field: PrimeField, len: usize, raw: &[Vec<u32>]) -> Self {
        let vectors = dense::canonical_span(field, raw, len)
            .into_iter()
            .map(Vector::from)
            .collect();
        Self { field, len, vectors }
    }

    fn from_bit_vectors(len: usize, words: Vec<Vec<u64>>) -> Self {
        let vectors = words
            .into_iter()
            .map(|w| {
                Vector::from(
                    (0..len)
                        .map(|j| ((w[j / 64] >> (j % 64)) & 1) as u32)
                        .collect::<Vec<_>>(),
                )
            })
            .collect();
        Self {
            field: PrimeField::gf2(),
            len,
            vectors,
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Length of the ambient vectors (the matrix size).
    pub fn ambient_len(&self) -> usize {
        self.len
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    /// Image under appending a trailing zero to every vector.
    pub fn omega(&self) -> Self {
        let shifted: Vec<Vec<u32>> = self
            .vectors
            .iter()
            .map(|v| v.shift_omega().entries().to_vec())
            .collect();
        Self::from_raw(self.field, self.len + 1, &shifted)
    }

    /// Image under prepending a leading zero to every vector.
    pub fn sigma(&self) -> Self {
        let shifted: Vec<Vec<u32>> = self
            .vectors
            .iter()
            .map(|v| v.shift_sigma().entries().to_vec())
            .collect();
        Self::from_raw(self.field, self.len + 1, &shifted)
    }

    /// Canonical basis of the sum of two subspaces of the same ambient space.
    pub fn join(&self, other: &Self) -> Result<Self> {
        if self.field != other.field || self.len != other.len {
            return Err(Error::InvalidArgument("join of incompatible subspaces".into()));
        }
        let raw: Vec<Vec<u32>> = self
            .vectors
            .iter()
            .chain(&other.vectors)
            .map(|v| v.entries().to_vec())
            .collect();
        Ok(Self::from_raw(self.field, self.len, &raw))
    }
}

/// Reusable scratch buffers for computing many nullities without allocating.
#[derive(Debug, Clone)]
pub struct Eliminator {
    field: PrimeField,
    dense: Vec<u32>,
    bits: Vec<u64>,
}

impl Eliminator {
    pub fn new(field: PrimeField) -> Self {
        Self {
            field,
            dense: Vec::new(),
            bits: Vec::new(),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Nullity of the Toeplitz matrix with first row `a` and first column `(a_0, b...)`.
    pub fn nullity(&mut self, a: &[u32], b: &[u32]) -> usize {
        let size = a.len();
        debug_assert_eq!(b.len() + 1, size);
        if self.field.modulus() == 2 {
            let wpr = bits::words_for(size);
            self.bits.clear();
            self.bits.resize(size * wpr, 0);
            for i in 0..size {
                let row = &mut self.bits[i * wpr..(i + 1) * wpr];
                for j in 0..size {
                    if toeplitz_entry(a, b, i, j) != 0 {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
            }
            size - bits::rank_in_place(&mut self.bits, size, size, wpr)
        } else {
            self.dense.clear();
            self.dense.reserve(size * size);
            for i in 0..size {
                for j in 0..size {
                    self.dense.push(toeplitz_entry(a, b, i, j));
                }
            }
            size - dense::rank_in_place(self.field, &mut self.dense, size, size)
        }
    }

    pub fn spec_nullity(&mut self, spec: &ToeplitzSpec) -> usize {
        self.nullity(spec.a(), spec.b())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> PrimeField {
        PrimeField::new(q).unwrap()
    }

    fn spec(q: u32, a: &[u32], b: &[u32]) -> ToeplitzSpec {
        ToeplitzSpec::new(gf(q), a.to_vec(), b.to_vec()).unwrap()
    }

    fn vecs(k: &KernelBasis) -> Vec<Vec<u32>> {
        k.vectors().iter().map(|v| v.entries().to_vec()).collect()
    }

    #[test]
    fn materialize_examples() {
        assert_eq!(
            spec(2, &[1, 1], &[1]).materialize().rows(),
            vec![vec![1, 1], vec![1, 1]]
        );
        assert_eq!(
            spec(2, &[0, 1], &[0]).materialize().rows(),
            vec![vec![0, 1], vec![0, 0]]
        );
        assert_eq!(
            spec(3, &[1, 0, 2], &[1, 0]).materialize().rows(),
            vec![vec![1, 0, 2], vec![1, 1, 0], vec![0, 1, 1]]
        );
    }

    #[test]
    fn bit_packed_materialization_matches_dense() {
        let s = spec(2, &[1, 0, 1, 1], &[0, 1, 1]);
        let dense = s.materialize();
        let packed = s.materialize_bits().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(packed.get(i, j), dense.entry(i, j) == 1);
            }
        }
        assert!(spec(3, &[1], &[]).materialize_bits().is_none());
    }

    #[test]
    fn rank_nullity_examples() {
        assert_eq!(
            spec(2, &[1], &[]).rank_nullity(),
            RankNullity { rank: 1, nullity: 0 }
        );
        assert_eq!(
            spec(2, &[0], &[]).rank_nullity(),
            RankNullity { rank: 0, nullity: 1 }
        );
        assert_eq!(
            spec(2, &[1, 1], &[1]).rank_nullity(),
            RankNullity { rank: 1, nullity: 1 }
        );
    }

    #[test]
    fn kernel_basis_examples() {
        let k = spec(2, &[1, 1], &[1]).kernel_basis();
        assert_eq!(vecs(&k), vec![vec![1, 1]]);
        let k = spec(2, &[0, 1], &[0]).kernel_basis();
        assert_eq!(vecs(&k), vec![vec![1, 0]]);
        let k = ToeplitzSpec::zero(gf(2), 1).kernel_basis();
        assert_eq!(k.dim(), 2);
        assert_eq!(vecs(&k), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let s = spec(5, &[1, 2, 3, 4], &[2, 4, 1]);
        let m = s.materialize();
        let k = s.kernel_basis();
        assert_eq!(k.dim(), s.nullity());
        for v in k.vectors() {
            assert!(m.mul_vector(v.entries()).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn extend_examples() {
        let f = gf(2);
        let s = spec(2, &[1], &[]);
        let e = s.extend(f.one(), f.one()).unwrap();
        assert_eq!((e.a(), e.b()), (&[1, 1][..], &[1][..]));
        let all_ones = e.extend(f.one(), f.one()).unwrap();
        assert_eq!(all_ones.nullity(), 2);
        assert_eq!(s.extensions().count(), 4);
        let distinct: std::collections::HashSet<_> = s.extensions().collect();
        assert_eq!(distinct.len(), 4);
        let other = gf(3).one();
        assert!(matches!(
            s.extend(other, f.one()),
            Err(Error::FieldMismatch { .. })
        ));
    }

    #[test]
    fn truncate_examples() {
        let t = spec(2, &[1, 1], &[1]).truncate().unwrap();
        assert_eq!((t.a(), t.b()), (&[1][..], &[][..]));
        let t = spec(2, &[0, 1, 0], &[0, 0]).truncate().unwrap();
        assert_eq!((t.a(), t.b()), (&[0, 1][..], &[0][..]));
        assert!(matches!(spec(2, &[1], &[]).truncate(), Err(Error::Domain(_))));
        let f = gf(3);
        let s = spec(3, &[2, 1], &[0]);
        let back = s.extend(f.one(), f.zero()).unwrap().truncate().unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn nullity_string_examples() {
        assert_eq!(spec(2, &[1, 1], &[1]).nullity_string().values(), &[0, 1]);
        assert_eq!(spec(2, &[0, 0], &[0]).nullity_string().values(), &[1, 2]);
        assert_eq!(spec(2, &[1, 0], &[0]).nullity_string().values(), &[0, 0]);
    }

    #[test]
    fn invalid_specs_are_rejected() {
        assert!(ToeplitzSpec::new(gf(2), vec![], vec![]).is_err());
        assert!(ToeplitzSpec::new(gf(2), vec![1, 1], vec![]).is_err());
        assert!(ToeplitzSpec::new(gf(3), vec![3], vec![]).is_err());
    }

    #[test]
    fn transpose_swaps_row_and_column() {
        let s = spec(3, &[1, 2, 0], &[0, 1]);
        let t = s.transpose();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(s.entry(i, j), t.entry(j, i));
            }
        }
    }
}
