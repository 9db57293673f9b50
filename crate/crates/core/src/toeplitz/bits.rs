//! Bit-packed GF(2) matrices with word-parallel row reduction.
//!
//! Row `i` occupies `words_per_row` consecutive `u64`s; column `j` lives in
//! word `j / 64` at bit `j % 64` (least significant bit = column 0). The
//! exhaustive scans in [`crate::enumeration`] build rows directly in this
//! layout.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    data: Vec<u64>,
}

#[inline]
pub(crate) fn words_for(cols: usize) -> usize {
    cols.div_ceil(64).max(1)
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words_per_row = words_for(cols);
        Self {
            rows,
            cols,
            words_per_row,
            data: vec![0; rows * words_per_row],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn words_per_row(&self) -> usize {
        self.words_per_row
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words_per_row..(i + 1) * self.words_per_row]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.words_per_row + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        let w = &mut self.data[i * self.words_per_row + j / 64];
        let mask = 1u64 << (j % 64);
        if bit {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rank_in_place(&mut data, self.rows, self.cols, self.words_per_row)
    }

    /// Reduced row echelon form in place; returns the pivot column of each nonzero row.
    pub fn rref(&mut self) -> Vec<usize> {
        rref_in_place(&mut self.data, self.rows, self.cols, self.words_per_row)
    }

    /// Basis of the right kernel, one bit vector per free column, in canonical form.
    pub fn kernel_vectors(&self) -> Vec<Vec<u64>> {
        let mut reduced = self.clone();
        let pivots = reduced.rref();
        let wpr = self.words_per_row;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; wpr];
            v[free / 64] |= 1 << (free % 64);
            for (r, &p) in pivots.iter().enumerate() {
                if reduced.get(r, free) {
                    v[p / 64] |= 1 << (p % 64);
                }
            }
            basis.push(v);
        }
        canonical_span(&mut basis, self.cols);
        basis
    }
}

#[inline]
fn xor_row(data: &mut [u64], dst: usize, src: usize, wpr: usize, from_word: usize) {
    for w in from_word..wpr {
        let s = data[src * wpr + w];
        data[dst * wpr + w] ^= s;
    }
}

#[inline]
fn swap_rows(data: &mut [u64], a: usize, b: usize, wpr: usize) {
    if a != b {
        for w in 0..wpr {
            data.swap(a * wpr + w, b * wpr + w);
        }
    }
}

/// Forward elimination only. Destroys `data`.
pub(crate) fn rank_in_place(data: &mut [u64], rows: usize, cols: usize, wpr: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let word = col / 64;
        let mask = 1u64 << (col % 64);
        let Some(p) = (rank..rows).find(|&r| data[r * wpr + word] & mask != 0) else {
            continue;
        };
        swap_rows(data, p, rank, wpr);
        for r in rank + 1..rows {
            if data[r * wpr + word] & mask != 0 {
                xor_row(data, r, rank, wpr, word);
            }
        }
        rank += 1;
    }
    rank
}

pub(crate) fn rref_in_place(data: &mut [u64], rows: usize, cols: usize, wpr: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    for col in 0..cols {
        let rank = pivots.len();
        if rank == rows {
            break;
        }
        let word = col / 64;
        let mask = 1u64 << (col % 64);
        let Some(p) = (rank..rows).find(|&r| data[r * wpr + word] & mask != 0) else {
            continue;
        };
        swap_rows(data, p, rank, wpr);
        for r in 0..rows {
            if r != rank && data[r * wpr + word] & mask != 0 {
                xor_row(data, r, rank, wpr, word);
            }
        }
        pivots.push(col);
    }
    pivots
}

/// Row-reduces a list of bit vectors of length `len` into the canonical basis
/// of their span: zero vectors dropped, sorted by leading index, and every
/// leading index cleared in all other vectors.
pub(crate) fn canonical_span(vectors: &mut Vec<Vec<u64>>, len: usize) {
    let rows = vectors.len();
    if rows == 0 {
        return;
    }
    let wpr = words_for(len);
    let mut flat: Vec<u64> = vectors.iter().flat_map(|v| v.iter().copied()).collect();
    let pivots = rref_in_place(&mut flat, rows, len, wpr);
    *vectors = flat.chunks(wpr).take(pivots.len()).map(|c| c.to_vec()).collect();
}
