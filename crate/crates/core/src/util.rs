//! Small counting helpers shared across modules.

/// `binom(n, k)` or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// `binom(n, k)` saturating at `u128::MAX`.
pub fn binomial_sat(n: u64, k: u64) -> u128 {
    binomial(n, k).unwrap_or(u128::MAX)
}

/// Falling factorial `n (n-1) ... (n-k+1)`, saturating.
pub fn falling_factorial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128);
    }
    acc
}

/// Advances `idx` (strictly increasing indices into `0..n`) to the next
/// k-combination in lexicographic order. Returns `false` when exhausted.
pub fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Calls `visit` with every k-subset of `items` in lexicographic order of
/// positions. Stops early when `visit` returns `false`.
pub fn for_each_subset<T: Copy>(items: &[T], k: usize, mut visit: impl FnMut(&[T]) -> bool) {
    if k > items.len() {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    let mut buf: Vec<T> = Vec::with_capacity(k);
    loop {
        buf.clear();
        buf.extend(idx.iter().map(|&i| items[i]));
        if !visit(&buf) {
            return;
        }
        if k == 0 || !next_combination(&mut idx, items.len()) {
            return;
        }
    }
}

/// Vertex set `{1..n}` as a bitmask (bit `v` for vertex `v`).
pub fn full_mask(n: usize) -> u128 {
    debug_assert!(n < 128);
    ((1u128 << (n + 1)) - 1) & !1
}

pub fn mask_of(vertices: &[usize]) -> u128 {
    vertices.iter().fold(0u128, |m, &v| m | (1u128 << v))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), Some(10));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(40, 20), Some(137_846_528_820));
        assert_eq!(falling_factorial(20, 2), 380);
    }

    #[test]
    fn subsets_are_enumerated_in_order() {
        let mut seen = Vec::new();
        for_each_subset(&[1, 2, 3, 4], 2, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![1, 2]);
        assert_eq!(seen[5], vec![3, 4]);

        let mut empty = 0;
        for_each_subset(&[1, 2], 0, |s| {
            assert!(s.is_empty());
            empty += 1;
            true
        });
        assert_eq!(empty, 1);
    }
}
