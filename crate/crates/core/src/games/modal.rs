//! Depth-bounded simulation, bisimulation and graded bisimulation between
//! pointed structures over a modal signature.

use crate::structures::Structure;

use super::matching::has_perfect_matching;
use super::Rule;

/// Successor lists per binary relation and unary truth sets.
struct Kripke {
    n: usize,
    succ: Vec<Vec<Vec<u32>>>,
    props: Vec<Vec<bool>>,
}

impl Kripke {
    fn new(s: &Structure) -> Self {
        let sig = s.signature();
        let n = s.size();
        let mut succ = Vec::new();
        let mut props = Vec::new();
        for r in 0..sig.len() {
            if sig.arity(r) == 2 {
                let mut lists = vec![Vec::new(); n];
                for t in s.tuples(r) {
                    lists[t[0] as usize].push(t[1]);
                }
                succ.push(lists);
            } else {
                let mut truth = vec![false; n];
                for t in s.tuples(r) {
                    truth[t[0] as usize] = true;
                }
                props.push(truth);
            }
        }
        Kripke { n, succ, props }
    }
}

/// One refinement step: the pairs of `prev` that keep satisfying the
/// transfer condition of `rule` against `prev`.
fn refine(ka: &Kripke, kb: &Kripke, rule: Rule, prev: &[bool]) -> Vec<bool> {
    let m = kb.n;
    let rel = |x: u32, y: u32| prev[x as usize * m + y as usize];
    (0..ka.n * m)
        .map(|i| {
            let (a, b) = (i / m, i % m);
            prev[i]
                && ka.succ.iter().zip(&kb.succ).all(|(sa, sb)| {
                    let (xs, ys) = (&sa[a], &sb[b]);
                    match rule {
                        Rule::Forth | Rule::Exist => xs.iter().all(|&x| ys.iter().any(|&y| rel(x, y))),
                        Rule::BackForth => {
                            xs.iter().all(|&x| ys.iter().any(|&y| rel(x, y)))
                                && ys.iter().all(|&y| xs.iter().any(|&x| rel(x, y)))
                        }
                        Rule::Bijective => {
                            xs.len() == ys.len()
                                && xs.len() <= 64
                                && has_perfect_matching(
                                    &xs.iter()
                                        .map(|&x| {
                                            ys.iter()
                                                .enumerate()
                                                .filter(|&(_, &y)| rel(x, y))
                                                .fold(0u64, |acc, (j, _)| acc | 1 << j)
                                        })
                                        .collect::<Vec<_>>(),
                                    ys.len(),
                                )
                        }
                    }
                })
        })
        .collect()
}

fn layer0(ka: &Kripke, kb: &Kripke, rule: Rule) -> Vec<bool> {
    let m = kb.n;
    (0..ka.n * m)
        .map(|i| {
            let (a, b) = (i / m, i % m);
            ka.props.iter().zip(&kb.props).all(|(pa, pb)| match rule {
                Rule::Forth | Rule::Exist => !pa[a] || pb[b],
                _ => pa[a] == pb[b],
            })
        })
        .collect()
}

/// The relations of depth `0..=k`, each as a row-major `|A| × |B|` table.
pub(crate) fn layers(a: &Structure, b: &Structure, k: usize, rule: Rule) -> Vec<Vec<bool>> {
    let (ka, kb) = (Kripke::new(a), Kripke::new(b));
    let mut out = vec![layer0(&ka, &kb, rule)];
    for _ in 0..k {
        let next = refine(&ka, &kb, rule, out.last().unwrap());
        out.push(next);
    }
    out
}

/// Whether `layers` (pair lists by depth) certify the relation at depth
/// `layers.len() - 1` between the two points.
pub(crate) fn replay(a: &Structure, b: &Structure, rule: Rule, layers: &[Vec<(u32, u32)>]) -> bool {
    let (ka, kb) = (Kripke::new(a), Kripke::new(b));
    let m = kb.n;
    let table = |pairs: &[(u32, u32)]| {
        let mut t = vec![false; ka.n * m];
        for &(x, y) in pairs {
            if (x as usize) < ka.n && (y as usize) < m {
                t[x as usize * m + y as usize] = true;
            }
        }
        t
    };
    let Some(top) = layers.last() else { return false };
    let (Some(p), Some(q)) = (a.point(), b.point()) else {
        return false;
    };
    if !top.contains(&(p, q)) {
        return false;
    }
    let base = layer0(&ka, &kb, rule);
    let mut prev: Option<Vec<bool>> = None;
    for pairs in layers {
        let t = table(pairs);
        let allowed = match &prev {
            None => base.clone(),
            Some(prev) => {
                let r = refine(&ka, &kb, rule, prev);
                r.iter().zip(&base).map(|(x, y)| *x && *y).collect()
            }
        };
        if t.iter().zip(&allowed).any(|(in_t, ok)| *in_t && !ok) {
            return false;
        }
        prev = Some(t);
    }
    true
}
