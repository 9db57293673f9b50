//! Gaussian elimination over GF(q) on row-major `u32` buffers.

use crate::field::PrimeField;

#[inline]
fn swap_rows(data: &mut [u32], a: usize, b: usize, cols: usize) {
    if a != b {
        for c in 0..cols {
            data.swap(a * cols + c, b * cols + c);
        }
    }
}

/// `data[dst] -= factor * data[src]`, starting at column `from`.
#[inline]
fn axpy_row(f: PrimeField, data: &mut [u32], dst: usize, src: usize, factor: u32, cols: usize, from: usize) {
    let neg = f.neg_raw(factor);
    for c in from..cols {
        let s = data[src * cols + c];
        if s != 0 {
            let d = &mut data[dst * cols + c];
            *d = f.add_raw(*d, f.mul_raw(neg, s));
        }
    }
}

pub(crate) fn rank_in_place(f: PrimeField, data: &mut [u32], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        swap_rows(data, p, rank, cols);
        let inv = f.inv_raw(data[rank * cols + col]);
        for r in rank + 1..rows {
            let x = data[r * cols + col];
            if x != 0 {
                axpy_row(f, data, r, rank, f.mul_raw(x, inv), cols, col);
            }
        }
        rank += 1;
    }
    rank
}

/// Reduced row echelon form with unit pivots. Returns pivot columns.
pub(crate) fn rref_in_place(f: PrimeField, data: &mut [u32], rows: usize, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    for col in 0..cols {
        let rank = pivots.len();
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| data[r * cols + col] != 0) else {
            continue;
        };
        swap_rows(data, p, rank, cols);
        let inv = f.inv_raw(data[rank * cols + col]);
        for c in col..cols {
            let x = &mut data[rank * cols + c];
            *x = f.mul_raw(*x, inv);
        }
        for r in 0..rows {
            let x = data[r * cols + col];
            if r != rank && x != 0 {
                axpy_row(f, data, r, rank, x, cols, col);
            }
        }
        pivots.push(col);
    }
    pivots
}

/// Kernel basis (one vector per free column) of an already row-reduced matrix.
pub(crate) fn kernel_from_rref(f: PrimeField, data: &[u32], cols: usize, pivots: &[usize]) -> Vec<Vec<u32>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0u32; cols];
            v[free] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = f.neg_raw(data[r * cols + free]);
            }
            v
        })
        .collect()
}

/// Canonical basis of the span of `vectors` (each of length `len`): reduced
/// echelon form with leading entries 1, ordered by leading index.
pub(crate) fn canonical_span(f: PrimeField, vectors: &[Vec<u32>], len: usize) -> Vec<Vec<u32>> {
    if vectors.is_empty() || len == 0 {
        return Vec::new();
    }
    let mut flat: Vec<u32> = vectors.iter().flat_map(|v| v.iter().copied()).collect();
    let pivots = rref_in_place(f, &mut flat, vectors.len(), len);
    flat.chunks(len).take(pivots.len()).map(|c| c.to_vec()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_over_gf3() {
        let f = PrimeField::new(3).unwrap();
        // rows 1,2 and 2,1: det = 1 - 4 = -3 = 0 mod 3
        let mut m = vec![1, 2, 2, 1];
        assert_eq!(rank_in_place(f, &mut m, 2, 2), 1);
        // det = 2
        let mut m = vec![1, 0, 1, 1, 1, 0, 0, 1, 1];
        assert_eq!(rank_in_place(f, &mut m, 3, 3), 3);
    }

    #[test]
    fn canonical_span_is_order_independent() {
        let f = PrimeField::new(5).unwrap();
        let a = canonical_span(f, &[vec![0, 2, 4], vec![3, 1, 0]], 3);
        let b = canonical_span(f, &[vec![3, 3, 4], vec![0, 1, 2], vec![0, 0, 0]], 3);
        assert_eq!(a, b);
        assert_eq!(a, vec![vec![1, 0, 1], vec![0, 1, 2]]);
    }
}
