//! Composition operations. Each operation exists at two levels: on plain
//! structures, and on [`Labeled`] structures where the result's element names
//! are built from the operands' names (`Inj`, `Tuple`, `Star`).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::term::Term;

use super::{Labeled, Signature, Structure};

fn same_signature(a: &Structure, b: &Structure) -> Result<()> {
    if a.signature() != b.signature() {
        return Err(Error::IncompatibleSignatures);
    }
    Ok(())
}

fn map_tuples<'a>(set: &'a BTreeSet<Vec<u32>>, f: impl Fn(u32) -> u32 + 'a) -> impl Iterator<Item = Vec<u32>> + 'a {
    set.iter().map(move |t| t.iter().map(|&e| f(e)).collect::<Vec<u32>>())
}

/// Disjoint union. Encoding: elements of `a` keep their indices, element `x`
/// of `b` becomes `|a| + x`.
pub fn disjoint_union(a: &Structure, b: &Structure) -> Result<Structure> {
    same_signature(a, b)?;
    if a.is_pointed() || b.is_pointed() {
        return Err(Error::Pointedness(
            "disjoint union of pointed structures: use pointed_coproduct".into(),
        ));
    }
    let off = a.size() as u32;
    let rels = (0..a.signature().len())
        .map(|r| {
            let mut set = a.tuples(r).clone();
            set.extend(map_tuples(b.tuples(r), |e| e + off));
            set
        })
        .collect();
    Ok(Structure::from_parts(
        a.signature().clone(),
        a.size() + b.size(),
        rels,
        None,
    ))
}

/// Position of `x` in the pointed coproduct when it comes from the summand
/// pointed at `point`, with `offset` elements of earlier summands before it.
fn coproduct_slot(x: u32, point: u32, offset: u32) -> u32 {
    if x == point {
        0
    } else if x < point {
        offset + 1 + x
    } else {
        offset + x
    }
}

/// Index maps `(inj_a, inj_b)` of the pointed coproduct.
pub(crate) fn pointed_coproduct_injections(a: &Structure, b: &Structure) -> (Vec<u32>, Vec<u32>) {
    let pa = a.point().expect("pointed");
    let pb = b.point().expect("pointed");
    let off_b = a.size() as u32 - 1;
    let ia = (0..a.size() as u32).map(|x| coproduct_slot(x, pa, 0)).collect();
    let ib = (0..b.size() as u32).map(|x| coproduct_slot(x, pb, off_b)).collect();
    (ia, ib)
}

/// Coproduct of pointed structures: the disjoint union with the two points
/// identified. Encoding: the merged point is `0`, then the non-point elements
/// of `a` in order, then those of `b`. Relations are the images of the summand
/// relations, so unary predicates of the two points are combined by union.
pub fn pointed_coproduct(a: &Structure, b: &Structure) -> Result<Structure> {
    same_signature(a, b)?;
    if !a.is_pointed() || !b.is_pointed() {
        return Err(Error::Pointedness(
            "pointed_coproduct requires both operands to be pointed".into(),
        ));
    }
    let (ia, ib) = pointed_coproduct_injections(a, b);
    let rels = (0..a.signature().len())
        .map(|r| {
            let mut set: BTreeSet<Vec<u32>> = map_tuples(a.tuples(r), |e| ia[e as usize]).collect();
            set.extend(map_tuples(b.tuples(r), |e| ib[e as usize]));
            set
        })
        .collect();
    Ok(Structure::from_parts(
        a.signature().clone(),
        a.size() + b.size() - 1,
        rels,
        Some(0),
    ))
}

/// Row-major index of a tuple of factor elements (first factor most significant).
pub fn product_index(sizes: &[usize], coords: &[u32]) -> u32 {
    coords.iter().zip(sizes).fold(0u32, |acc, (&c, &n)| acc * n as u32 + c)
}

/// Inverse of [`product_index`].
pub fn product_tuple(sizes: &[usize], mut idx: u32) -> Vec<u32> {
    let mut out = vec![0; sizes.len()];
    for i in (0..sizes.len()).rev() {
        let n = sizes[i] as u32;
        out[i] = idx % n;
        idx /= n;
    }
    out
}

/// Categorical product of a non-empty finite family. Encoding: row-major over
/// the factors, first factor most significant. A tuple holds iff it holds in
/// every coordinate.
pub fn product(family: &[Structure]) -> Result<Structure> {
    let first = family
        .first()
        .ok_or_else(|| Error::InvalidInput("product of an empty family".into()))?;
    for s in family {
        same_signature(first, s)?;
    }
    let pointed = first.is_pointed();
    if family.iter().any(|s| s.is_pointed() != pointed) {
        return Err(Error::Pointedness(
            "product operands must be all pointed or all unpointed".into(),
        ));
    }
    let sizes: Vec<usize> = family.iter().map(|s| s.size()).collect();
    let size = sizes.iter().product();
    let sig = first.signature().clone();
    let mut rels = Vec::with_capacity(sig.len());
    for r in 0..sig.len() {
        let arity = sig.arity(r);
        // Combine the factor relations one coordinate at a time.
        let mut partial: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); arity]];
        for s in family {
            let mut next = Vec::new();
            for p in &partial {
                for t in s.tuples(r) {
                    let mut q = p.clone();
                    for (slot, &e) in q.iter_mut().zip(t) {
                        slot.push(e);
                    }
                    next.push(q);
                }
            }
            partial = next;
        }
        let set: BTreeSet<Vec<u32>> = partial
            .into_iter()
            .map(|coords| coords.iter().map(|c| product_index(&sizes, c)).collect())
            .collect();
        rels.push(set);
    }
    let point = if pointed {
        let coords: Vec<u32> = family.iter().map(|s| s.point().unwrap()).collect();
        Some(product_index(&sizes, &coords))
    } else {
        None
    };
    Ok(Structure::from_parts(sig, size, rels, point))
}

fn binary_relation(sig: &Signature, rel: &str) -> Result<usize> {
    let r = sig
        .index_of(rel)
        .ok_or_else(|| Error::UnknownRelation(rel.to_string()))?;
    if sig.arity(r) != 2 {
        return Err(Error::InvalidInput(format!("relation `{rel}` must be binary")));
    }
    Ok(r)
}

fn star_union(a: &Structure, b: &Structure) -> Result<(Vec<BTreeSet<Vec<u32>>>, u32, u32)> {
    same_signature(a, b)?;
    if !a.signature().is_modal() {
        return Err(Error::NotModal);
    }
    let (pa, pb) = match (a.point(), b.point()) {
        (Some(pa), Some(pb)) => (pa, pb),
        _ => return Err(Error::Pointedness("both operands must be pointed".into())),
    };
    let off_b = 1 + a.size() as u32;
    let rels = (0..a.signature().len())
        .map(|r| {
            let mut set: BTreeSet<Vec<u32>> = map_tuples(a.tuples(r), |e| e + 1).collect();
            set.extend(map_tuples(b.tuples(r), |e| e + off_b));
            set
        })
        .collect();
    Ok((rels, 1 + pa, off_b + pb))
}

/// Joins two pointed structures below a fresh point `⋆` with `R`-edges to both
/// old points. Encoding: `⋆` is `0`, then `a` shifted by one, then `b`.
pub fn merge(a: &Structure, b: &Structure, rel: &str) -> Result<Structure> {
    let (mut rels, pa, pb) = star_union(a, b)?;
    let r = binary_relation(a.signature(), rel)?;
    rels[r].insert(vec![0, pa]);
    rels[r].insert(vec![0, pb]);
    Ok(Structure::from_parts(
        a.signature().clone(),
        1 + a.size() + b.size(),
        rels,
        Some(0),
    ))
}

/// Joins two pointed structures below a fresh point `⋆` that copies the
/// outgoing binary edges of both old points. Same encoding as [`merge`].
pub fn vee(a: &Structure, b: &Structure) -> Result<Structure> {
    let (mut rels, pa, pb) = star_union(a, b)?;
    let off_b = 1 + a.size() as u32;
    let sig = a.signature();
    for r in 0..sig.len() {
        if sig.arity(r) != 2 {
            continue;
        }
        let mut fresh = Vec::new();
        for t in &rels[r] {
            if (t[0] == pa && t[1] < off_b && t[1] > 0) || (t[0] == pb && t[1] >= off_b) {
                fresh.push(vec![0, t[1]]);
            }
        }
        rels[r].extend(fresh);
    }
    Ok(Structure::from_parts(
        sig.clone(),
        1 + a.size() + b.size(),
        rels,
        Some(0),
    ))
}

/// Restriction of `a` to the relations of the subsignature `tau`.
pub fn reduct(a: &Structure, tau: &Signature) -> Result<Structure> {
    if !tau.is_subsignature_of(a.signature()) {
        return Err(Error::InvalidSignature("reduct target is not a subsignature".into()));
    }
    let rels = tau
        .relations()
        .iter()
        .map(|(n, _)| a.tuples(a.signature().index_of(n).unwrap()).clone())
        .collect();
    Ok(Structure::from_parts(tau.clone(), a.size(), rels, a.point()))
}

impl Labeled {
    /// Disjoint union; element names become `Inj(0, _)` and `Inj(1, _)`.
    pub fn disjoint_union(a: &Labeled, b: &Labeled) -> Result<Labeled> {
        let s = disjoint_union(&a.structure, &b.structure)?;
        let labels = a
            .labels()
            .iter()
            .map(|t| Term::inj(0, t.clone()))
            .chain(b.labels().iter().map(|t| Term::inj(1, t.clone())))
            .collect();
        Labeled::new(s, labels)
    }

    /// Pointed coproduct; the merged point is named after the first operand's point.
    pub fn pointed_coproduct(a: &Labeled, b: &Labeled) -> Result<Labeled> {
        let s = pointed_coproduct(&a.structure, &b.structure)?;
        let (ia, ib) = pointed_coproduct_injections(&a.structure, &b.structure);
        let mut labels = vec![Term::Star; s.size()];
        for (x, &i) in ia.iter().enumerate() {
            labels[i as usize] = Term::inj(0, a.label(x as u32).clone());
        }
        for (x, &i) in ib.iter().enumerate() {
            if i != 0 {
                labels[i as usize] = Term::inj(1, b.label(x as u32).clone());
            }
        }
        Labeled::new(s, labels)
    }

    /// Product; element names become `Tuple`s of factor names.
    pub fn product(family: &[&Labeled]) -> Result<Labeled> {
        let structs: Vec<Structure> = family.iter().map(|l| l.structure.clone()).collect();
        let s = product(&structs)?;
        let sizes: Vec<usize> = structs.iter().map(|s| s.size()).collect();
        let labels = (0..s.size() as u32)
            .map(|i| {
                let coords = product_tuple(&sizes, i);
                Term::Tuple(coords.iter().zip(family).map(|(&c, l)| l.label(c).clone()).collect())
            })
            .collect();
        Labeled::new(s, labels)
    }

    fn star_labels(a: &Labeled, b: &Labeled) -> Vec<Term> {
        std::iter::once(Term::Star)
            .chain(a.labels().iter().map(|t| Term::inj(0, t.clone())))
            .chain(b.labels().iter().map(|t| Term::inj(1, t.clone())))
            .collect()
    }

    pub fn merge(a: &Labeled, b: &Labeled, rel: &str) -> Result<Labeled> {
        let s = merge(&a.structure, &b.structure, rel)?;
        Labeled::new(s, Labeled::star_labels(a, b))
    }

    pub fn vee(a: &Labeled, b: &Labeled) -> Result<Labeled> {
        let s = vee(&a.structure, &b.structure)?;
        Labeled::new(s, Labeled::star_labels(a, b))
    }
}
