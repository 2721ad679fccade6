//! Signature translations: equality, connectivity, the global modality and
//! weak (silent-step) closure.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

use super::Structure;

/// Reserved name of the equality relation.
pub const EQUALITY: &str = "I";
/// Reserved name of the same-component relation.
pub const CONNECTIVITY: &str = "Con";
/// Reserved name of the global-modality relation.
pub const GLOBAL: &str = "G";

/// Extends `a` by new relations, each given as a full tuple set.
fn extend(a: &Structure, extra: Vec<(&str, usize, BTreeSet<Vec<u32>>)>) -> Result<Structure> {
    let mut sig = a.signature().clone();
    for (name, arity, _) in &extra {
        sig = sig.with_relation(name, *arity)?;
    }
    let mut out = Structure::new(sig.clone(), a.size()).with_point(a.point())?;
    for r in 0..a.signature().len() {
        let idx = sig.index_of(a.signature().name(r)).unwrap();
        for t in a.tuples(r) {
            out.insert(idx, t.clone())?;
        }
    }
    for (name, _, set) in extra {
        let idx = sig.index_of(name).unwrap();
        for t in set {
            out.insert(idx, t)?;
        }
    }
    Ok(out)
}

fn diagonal(n: usize) -> BTreeSet<Vec<u32>> {
    (0..n as u32).map(|x| vec![x, x]).collect()
}

/// Adds the binary relation `I`, interpreted as equality.
pub fn translate_equality(a: &Structure) -> Result<Structure> {
    extend(a, vec![(EQUALITY, 2, diagonal(a.size()))])
}

/// Connected components of the Gaifman graph, as a component id per element.
pub(crate) fn gaifman_components(a: &Structure) -> Vec<u32> {
    let n = a.size();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for r in 0..a.signature().len() {
        for t in a.tuples(r) {
            for w in t.windows(2) {
                let (x, y) = (find(&mut parent, w[0] as usize), find(&mut parent, w[1] as usize));
                if x != y {
                    parent[x.max(y)] = x.min(y);
                }
            }
        }
    }
    (0..n).map(|x| find(&mut parent, x) as u32).collect()
}

/// Adds equality `I` and `Con`, relating elements in the same component of the
/// Gaifman graph (elements co-occurring in some tuple are adjacent).
pub fn translate_connectivity(a: &Structure) -> Result<Structure> {
    let comp = gaifman_components(a);
    let n = a.size() as u32;
    let con = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .filter(|&(x, y)| comp[x as usize] == comp[y as usize])
        .map(|(x, y)| vec![x, y])
        .collect();
    extend(a, vec![(EQUALITY, 2, diagonal(a.size())), (CONNECTIVITY, 2, con)])
}

fn require_pointed_modal(a: &Structure) -> Result<()> {
    if !a.signature().is_modal() {
        return Err(Error::NotModal);
    }
    if !a.is_pointed() {
        return Err(Error::Pointedness(
            "this translation requires a pointed structure".into(),
        ));
    }
    Ok(())
}

/// Adds the binary relation `G`, interpreted as the full square.
pub fn translate_global(a: &Structure) -> Result<Structure> {
    require_pointed_modal(a)?;
    let n = a.size() as u32;
    let full = (0..n).flat_map(|x| (0..n).map(move |y| vec![x, y])).collect();
    extend(a, vec![(GLOBAL, 2, full)])
}

/// How the weak translation treats the silent relation itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum SilentMode {
    /// The silent relation is interpreted as empty after translation, so only
    /// visible steps remain (each absorbing silent steps before and after it).
    /// This is the variant under which the translation commutes with
    /// merge/vee.
    #[default]
    Erase,
    /// The silent relation is replaced by its own closure `S*∘S∘S*`, like
    /// every other binary relation.
    Close,
    /// The silent relation is left untouched.
    Raw,
}

/// Reflexive-transitive closure of a binary relation as a reachability matrix.
fn reflexive_transitive_closure(n: usize, set: &BTreeSet<Vec<u32>>) -> Vec<Vec<bool>> {
    let mut reach = vec![vec![false; n]; n];
    for (x, row) in reach.iter_mut().enumerate() {
        row[x] = true;
    }
    for t in set {
        reach[t[0] as usize][t[1] as usize] = true;
    }
    for m in 0..n {
        for x in 0..n {
            if reach[x][m] {
                for y in 0..n {
                    if reach[m][y] {
                        reach[x][y] = true;
                    }
                }
            }
        }
    }
    reach
}

/// Weak translation over the silent relation `silent`: every binary relation
/// `R` other than `silent` becomes `S*∘R∘S*` where `S*` is the
/// reflexive-transitive closure of `silent`. Unary relations are unchanged;
/// `silent` itself is handled according to `mode`.
pub fn translate_weak(a: &Structure, silent: &str, mode: SilentMode) -> Result<Structure> {
    require_pointed_modal(a)?;
    let sig = a.signature();
    let s = sig
        .index_of(silent)
        .ok_or_else(|| Error::UnknownRelation(silent.to_string()))?;
    if sig.arity(s) != 2 {
        return Err(Error::InvalidInput(format!(
            "silent relation `{silent}` must be binary"
        )));
    }
    let n = a.size();
    let star = reflexive_transitive_closure(n, a.tuples(s));
    let close = |set: &BTreeSet<Vec<u32>>| -> BTreeSet<Vec<u32>> {
        let mut out = BTreeSet::new();
        for t in set {
            let (u, v) = (t[0] as usize, t[1] as usize);
            for x in 0..n {
                if !star[x][u] {
                    continue;
                }
                for y in 0..n {
                    if star[v][y] {
                        out.insert(vec![x as u32, y as u32]);
                    }
                }
            }
        }
        out
    };
    let rels = (0..sig.len())
        .map(|r| {
            if sig.arity(r) != 2 {
                a.tuples(r).clone()
            } else if r != s {
                close(a.tuples(r))
            } else {
                match mode {
                    SilentMode::Erase => BTreeSet::new(),
                    SilentMode::Close => close(a.tuples(r)),
                    SilentMode::Raw => a.tuples(r).clone(),
                }
            }
        })
        .collect();
    Ok(Structure::from_parts(sig.clone(), n, rels, a.point()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{disjoint_union, product, Signature};

    #[test]
    fn equality_is_the_diagonal() {
        let a = Structure::digraph(3, &[(0, 1)]).unwrap();
        let t = translate_equality(&a).unwrap();
        let i = t.signature().index_of(EQUALITY).unwrap();
        assert_eq!(t.tuples(i).len(), 3);
        assert!(t.holds(t.signature().index_of("E").unwrap(), &[0, 1]));
        assert!(matches!(translate_equality(&t), Err(Error::NameClash(_))));
    }

    #[test]
    fn equality_commutes_with_union() {
        let a = Structure::digraph(2, &[(0, 1)]).unwrap();
        let b = Structure::digraph(1, &[(0, 0)]).unwrap();
        let lhs = translate_equality(&disjoint_union(&a, &b).unwrap()).unwrap();
        let rhs = disjoint_union(&translate_equality(&a).unwrap(), &translate_equality(&b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn connectivity_components() {
        let two = Structure::new(Signature::graph(), 2);
        let t = translate_connectivity(&two).unwrap();
        let c = t.signature().index_of(CONNECTIVITY).unwrap();
        let tuples: Vec<_> = t.tuples(c).iter().cloned().collect();
        assert_eq!(tuples, vec![vec![0, 0], vec![1, 1]]);
        let path = Structure::digraph(3, &[(0, 1), (2, 1)]).unwrap();
        let t = translate_connectivity(&path).unwrap();
        assert_eq!(t.tuples(c).len(), 9);
    }

    #[test]
    fn global_is_full_square() {
        let a = Structure::digraph(3, &[(0, 1)]).unwrap().with_point(Some(0)).unwrap();
        let g = translate_global(&a).unwrap();
        let gi = g.signature().index_of(GLOBAL).unwrap();
        assert_eq!(g.tuples(gi).len(), 9);
        let p = product(&[a.clone(), a.clone()]).unwrap();
        let gp = translate_global(&p).unwrap();
        let pg = product(&[g.clone(), g.clone()]).unwrap();
        assert_eq!(gp, pg);
        assert!(translate_global(&Structure::new(Signature::graph(), 1)).is_err());
    }

    fn sr() -> Signature {
        Signature::new([("R", 2), ("S", 2)]).unwrap()
    }

    #[test]
    fn weak_translation_absorbs_silent_steps() {
        let mut a = Structure::new(sr(), 3).with_point(Some(0)).unwrap();
        a.insert_named("S", vec![0, 1]).unwrap();
        a.insert_named("R", vec![1, 2]).unwrap();
        let t = translate_weak(&a, "S", SilentMode::Erase).unwrap();
        let r = sr().index_of("R").unwrap();
        assert!(t.holds(r, &[0, 2]));
        assert!(t.holds(r, &[1, 2]));
        assert!(t.tuples(sr().index_of("S").unwrap()).is_empty());
        let again = translate_weak(&t, "S", SilentMode::Erase).unwrap();
        assert_eq!(again, t);
    }

    #[test]
    fn weak_translation_with_empty_silent_is_identity_on_visible() {
        let mut a = Structure::new(sr(), 2).with_point(Some(0)).unwrap();
        a.insert_named("R", vec![0, 1]).unwrap();
        for mode in [SilentMode::Erase, SilentMode::Close, SilentMode::Raw] {
            assert_eq!(translate_weak(&a, "S", mode).unwrap(), a);
        }
    }

    #[test]
    fn close_mode_is_idempotent() {
        let mut a = Structure::new(sr(), 3).with_point(Some(0)).unwrap();
        a.insert_named("S", vec![0, 1]).unwrap();
        a.insert_named("S", vec![1, 2]).unwrap();
        a.insert_named("R", vec![2, 0]).unwrap();
        let once = translate_weak(&a, "S", SilentMode::Close).unwrap();
        // After one pass the silent relation is transitive, hence its own closure.
        let twice = translate_weak(&once, "S", SilentMode::Close).unwrap();
        assert_eq!(twice, once);
    }
}
