//! Word-array bitset primitives shared by the search kernels.
//!
//! Rows are `&[u64]` slices of a fixed word count; all operations assume the
//! operands have equal length. Bits beyond the logical size must be kept
//! zero by the caller.

/// Number of 64-bit words needed for `n` bits.
#[inline(always)]
pub const fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline(always)]
pub fn set_bit(row: &mut [u64], i: usize) {
    row[i >> 6] |= 1u64 << (i & 63);
}

#[inline(always)]
pub fn clear_bit(row: &mut [u64], i: usize) {
    row[i >> 6] &= !(1u64 << (i & 63));
}

#[inline(always)]
pub fn test_bit(row: &[u64], i: usize) -> bool {
    (row[i >> 6] >> (i & 63)) & 1 != 0
}

#[inline(always)]
pub fn count_ones(row: &[u64]) -> usize {
    row.iter().map(|w| w.count_ones() as usize).sum()
}

/// Writes `a & b` into `dst`.
#[inline(always)]
pub fn and_into(dst: &mut [u64], a: &[u64], b: &[u64]) {
    for ((d, x), y) in dst.iter_mut().zip(a).zip(b) {
        *d = x & y;
    }
}

#[inline(always)]
pub fn intersection_count(a: &[u64], b: &[u64]) -> usize {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
}

#[inline(always)]
pub fn is_disjoint(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x & y == 0)
}

#[inline(always)]
pub fn is_empty(row: &[u64]) -> bool {
    row.iter().all(|w| *w == 0)
}

/// Index of the lowest set bit, if any.
#[inline(always)]
pub fn first_one(row: &[u64]) -> Option<usize> {
    for (w, word) in row.iter().enumerate() {
        if *word != 0 {
            return Some((w << 6) + word.trailing_zeros() as usize);
        }
    }
    None
}

/// Iterates set-bit indices in increasing order.
pub fn iter_ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let base = w << 6;
        std::iter::successors(
            if word == 0 { None } else { Some(word) },
            |&rem| {
                let rem = rem & (rem - 1);
                if rem == 0 {
                    None
                } else {
                    Some(rem)
                }
            },
        )
        .map(move |rem| base + rem.trailing_zeros() as usize)
    })
}

/// Collects set-bit indices into a vector.
pub fn to_vec(row: &[u64]) -> Vec<usize> {
    iter_ones(row).collect()
}

/// Builds a row of `words` words with the given bits set.
pub fn from_indices(words: usize, indices: &[usize]) -> Vec<u64> {
    let mut row = vec![0u64; words];
    for &i in indices {
        set_bit(&mut row, i);
    }
    row
}

/// Sets bits `0..n`.
pub fn fill_upto(row: &mut [u64], n: usize) {
    for w in 0..row.len() {
        let lo = w << 6;
        if n >= lo + 64 {
            row[w] = u64::MAX;
        } else if n > lo {
            row[w] = (1u64 << (n - lo)) - 1;
        } else {
            row[w] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bit_roundtrip_and_iteration() {
        let mut row = vec![0u64; 3];
        for &i in &[0, 5, 63, 64, 100, 191] {
            set_bit(&mut row, i);
        }
        assert!(test_bit(&row, 63) && test_bit(&row, 64));
        assert_eq!(to_vec(&row), vec![0, 5, 63, 64, 100, 191]);
        assert_eq!(count_ones(&row), 6);
        clear_bit(&mut row, 63);
        assert!(!test_bit(&row, 63));
        assert_eq!(first_one(&row), Some(0));
    }

    #[test]
    fn fill_matches_counts() {
        for n in [0usize, 1, 63, 64, 65, 130, 192] {
            let mut row = vec![0u64; 3];
            fill_upto(&mut row, n);
            assert_eq!(count_ones(&row), n);
        }
    }
}
