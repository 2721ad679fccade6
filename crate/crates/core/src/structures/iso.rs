//! Isomorphism search and brute-force canonical forms.

use super::{Structure, StructureMap};

/// Calls `f` on every permutation of `0..n` in lexicographic order.
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[u32])) {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    loop {
        f(&perm);
        // Next lexicographic permutation.
        let Some(i) = (1..n).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return;
        };
        let j = (i..n).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn encode_under(s: &Structure, perm: &[u32], out: &mut Vec<u32>) {
    let n = s.size() as u32;
    out.clear();
    out.push(s.size() as u32);
    out.push(s.point().map_or(u32::MAX, |p| perm[p as usize]));
    let mut codes = Vec::new();
    for r in 0..s.signature().len() {
        codes.clear();
        codes.extend(
            s.tuples(r)
                .iter()
                .map(|t| t.iter().fold(0u32, |acc, &e| acc * n + perm[e as usize])),
        );
        codes.sort_unstable();
        out.push(codes.len() as u32);
        out.extend_from_slice(&codes);
    }
}

/// A canonical code: two structures over the same signature are isomorphic iff
/// their codes are equal. Computed by minimising over all relabellings, so it
/// is only meant for very small universes.
pub fn canonical_code(s: &Structure) -> Vec<u32> {
    let mut best: Option<Vec<u32>> = None;
    let mut cur = Vec::new();
    for_each_permutation(s.size(), |perm| {
        encode_under(s, perm, &mut cur);
        if best.as_ref().is_none_or(|b| cur < *b) {
            best = Some(cur.clone());
        }
    });
    best.unwrap_or_default()
}

/// Searches for an isomorphism `a -> b` (point-preserving when pointed).
pub fn find_isomorphism(a: &Structure, b: &Structure) -> Option<StructureMap> {
    find_isomorphism_with(a, b, |_, _| true)
}

/// Per-element incidence: for each relation and each argument position, the
/// tuples (by index into `list`) in which the element occurs there.
struct Incidence {
    tuples: Vec<(usize, Vec<u32>)>,
    by_elem: Vec<Vec<usize>>,
    profile: Vec<Vec<u32>>,
}

impl Incidence {
    fn new(s: &Structure) -> Self {
        let sig = s.signature();
        let mut tuples = Vec::new();
        let mut by_elem = vec![Vec::new(); s.size()];
        let width: usize = sig.relations().iter().map(|(_, a)| a + 1).sum();
        let mut profile = vec![vec![0u32; width]; s.size()];
        let mut base = 0;
        for r in 0..sig.len() {
            let ar = sig.arity(r);
            for t in s.tuples(r) {
                let id = tuples.len();
                tuples.push((r, t.clone()));
                let mut seen = Vec::new();
                for (pos, &e) in t.iter().enumerate() {
                    profile[e as usize][base + pos] += 1;
                    if !seen.contains(&e) {
                        seen.push(e);
                        by_elem[e as usize].push(id);
                    }
                }
                // Tuples with a repeated element (loops) are counted separately.
                if seen.len() < t.len() {
                    for &e in &seen {
                        profile[e as usize][base + ar] += 1;
                    }
                }
            }
            base += ar + 1;
        }
        Incidence {
            tuples,
            by_elem,
            profile,
        }
    }
}

/// Isomorphism search restricted to pairs accepted by `compatible`.
pub fn find_isomorphism_with(
    a: &Structure,
    b: &Structure,
    compatible: impl Fn(u32, u32) -> bool,
) -> Option<StructureMap> {
    if a.signature() != b.signature()
        || a.size() != b.size()
        || a.is_pointed() != b.is_pointed()
        || (0..a.signature().len()).any(|r| a.tuples(r).len() != b.tuples(r).len())
    {
        return None;
    }
    let n = a.size();
    let ia = Incidence::new(a);
    let ib = Incidence::new(b);
    let cands: Vec<Vec<u32>> = (0..n)
        .map(|x| {
            (0..n as u32)
                .filter(|&y| {
                    ia.profile[x] == ib.profile[y as usize]
                        && compatible(x as u32, y)
                        && match (a.point(), b.point()) {
                            (Some(p), Some(q)) => (x as u32 == p) == (y == q),
                            _ => true,
                        }
                })
                .collect()
        })
        .collect();
    if cands.iter().any(|c| c.is_empty()) {
        return None;
    }
    // Most constrained elements first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (cands[x].len(), std::cmp::Reverse(ia.by_elem[x].len())));
    let mut fwd = vec![u32::MAX; n];
    let mut bwd = vec![u32::MAX; n];
    if search(0, &order, &cands, &ia, &ib, a, b, &mut fwd, &mut bwd) {
        Some(StructureMap::new(fwd))
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn search(
    depth: usize,
    order: &[usize],
    cands: &[Vec<u32>],
    ia: &Incidence,
    ib: &Incidence,
    a: &Structure,
    b: &Structure,
    fwd: &mut [u32],
    bwd: &mut [u32],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let x = order[depth];
    for &y in &cands[x] {
        if bwd[y as usize] != u32::MAX {
            continue;
        }
        fwd[x] = y;
        bwd[y as usize] = x as u32;
        if consistent(x, y as usize, ia, ib, a, b, fwd, bwd) && search(depth + 1, order, cands, ia, ib, a, b, fwd, bwd)
        {
            return true;
        }
        fwd[x] = u32::MAX;
        bwd[y as usize] = u32::MAX;
    }
    false
}

#[allow(clippy::too_many_arguments)]
fn consistent(
    x: usize,
    y: usize,
    ia: &Incidence,
    ib: &Incidence,
    a: &Structure,
    b: &Structure,
    fwd: &[u32],
    bwd: &[u32],
) -> bool {
    let mut img = Vec::new();
    for &id in &ia.by_elem[x] {
        let (r, t) = &ia.tuples[id];
        img.clear();
        for &e in t {
            let f = fwd[e as usize];
            if f == u32::MAX {
                break;
            }
            img.push(f);
        }
        if img.len() == t.len() && !b.holds(*r, &img) {
            return false;
        }
    }
    for &id in &ib.by_elem[y] {
        let (r, t) = &ib.tuples[id];
        img.clear();
        for &e in t {
            let f = bwd[e as usize];
            if f == u32::MAX {
                break;
            }
            img.push(f);
        }
        if img.len() == t.len() && !a.holds(*r, &img) {
            return false;
        }
    }
    true
}
