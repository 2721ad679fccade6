//! Perfect matchings in small bipartite graphs given as bit-mask rows.

/// A perfect matching of `adj` (row `a` is the mask of admissible `b`s), as
/// `b = matching[a]`, or `None`. Kuhn's augmenting paths, trying candidates
/// in increasing order, so the result is the lexicographically first matching
/// found by the greedy-then-augment order.
pub(crate) fn perfect_matching(adj: &[u64], m: usize) -> Option<Vec<u32>> {
    let n = adj.len();
    if n != m {
        return None;
    }
    let mut match_b = vec![u32::MAX; m];
    for a in 0..n {
        let mut seen = 0u64;
        if !augment(a, adj, &mut match_b, &mut seen) {
            return None;
        }
    }
    let mut out = vec![0u32; n];
    for (b, &a) in match_b.iter().enumerate() {
        out[a as usize] = b as u32;
    }
    Some(out)
}

fn augment(a: usize, adj: &[u64], match_b: &mut [u32], seen: &mut u64) -> bool {
    let mut cand = adj[a] & !*seen;
    while cand != 0 {
        let b = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        *seen |= 1 << b;
        if match_b[b] == u32::MAX || augment(match_b[b] as usize, adj, match_b, seen) {
            match_b[b] = a as u32;
            return true;
        }
    }
    false
}

/// Whether a perfect matching exists.
pub(crate) fn has_perfect_matching(adj: &[u64], m: usize) -> bool {
    // Cheap necessary conditions first.
    if adj.len() != m || adj.contains(&0) {
        return false;
    }
    perfect_matching(adj, m).is_some()
}
