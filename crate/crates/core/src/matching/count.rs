//! Size of the labelling space and of the search tree.

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

/// Number of labellings from `n` AG vertices into `m` FDG vertices plus a
/// shared null vertex.
pub fn count_labellings(n: usize, m: usize) -> u128 {
    let num = factorial(n) * factorial(m);
    if n >= m {
        (0..=m).map(|k| num / (factorial(k + n - m) * factorial(m - k) * factorial(k))).sum()
    } else {
        (0..=n).map(|k| num / (factorial(k + m - n) * factorial(n - k) * factorial(k))).sum()
    }
}

/// Number of nodes of the full search tree, root included.
pub fn count_search_nodes(n: usize, m: usize) -> u128 {
    (0..=n).map(|i| count_labellings(i, m)).sum()
}
