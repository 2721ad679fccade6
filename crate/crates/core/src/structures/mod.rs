//! Finite relational signatures and structures, structure maps, the
//! composition operations and the signature translations.
//!
//! Universes are always `0..n`. Operations that build new universes use fixed
//! index encodings (documented on each operation) so that results are
//! reproducible byte-for-byte.

mod enumerate;
mod hom;
mod iso;
mod json;
mod labeled;
mod ops;
mod translate;

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub use enumerate::{enumerate_pointed, enumerate_structures, EnumerateOptions};
pub use hom::{find_homomorphism, find_homomorphism_within, for_each_homomorphism, random_homomorphism, Visit};
#[cfg(test)]
pub(crate) use iso::for_each_permutation;
pub use iso::{canonical_code, find_isomorphism, find_isomorphism_with};
pub use json::{parse_structure, serialize_structure, structure_from_value, structure_to_value};
pub use labeled::Labeled;
pub use ops::{disjoint_union, merge, pointed_coproduct, product, product_index, product_tuple, reduct, vee};
pub use translate::{
    translate_connectivity, translate_equality, translate_global, translate_weak, SilentMode, CONNECTIVITY, EQUALITY,
    GLOBAL,
};

/// A relational signature. Relations are kept sorted by name, which makes
/// signature equality independent of declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Signature {
    relations: Vec<(String, usize)>,
}

impl Signature {
    pub fn new<S: Into<String>>(relations: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut rels: Vec<(String, usize)> = relations.into_iter().map(|(n, a)| (n.into(), a)).collect();
        rels.sort();
        for w in rels.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::InvalidSignature(format!("duplicate relation name `{}`", w[0].0)));
            }
        }
        if let Some((n, _)) = rels.iter().find(|(_, a)| *a == 0) {
            return Err(Error::InvalidSignature(format!("relation `{n}` has arity 0")));
        }
        Ok(Signature { relations: rels })
    }

    /// The signature `{E: 2}` of directed graphs.
    pub fn graph() -> Self {
        Signature {
            relations: vec![("E".into(), 2)],
        }
    }

    pub fn empty() -> Self {
        Signature::default()
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.binary_search_by(|(n, _)| n.as_str().cmp(name)).ok()
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.relations[idx].0
    }

    pub fn arity(&self, idx: usize) -> usize {
        self.relations[idx].1
    }

    pub fn max_arity(&self) -> usize {
        self.relations.iter().map(|r| r.1).max().unwrap_or(0)
    }

    /// True iff every relation has arity 1 or 2.
    pub fn is_modal(&self) -> bool {
        self.relations.iter().all(|(_, a)| *a == 1 || *a == 2)
    }

    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        self.relations
            .iter()
            .all(|(n, a)| other.index_of(n).map(|i| other.arity(i)) == Some(*a))
    }

    pub fn with_relation(&self, name: &str, arity: usize) -> Result<Signature> {
        if self.index_of(name).is_some() {
            return Err(Error::NameClash(name.to_string()));
        }
        let mut rels = self.relations.clone();
        rels.push((name.to_string(), arity));
        Signature::new(rels)
    }
}

/// A finite structure over `0..size`, optionally pointed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Structure {
    sig: Signature,
    size: usize,
    rels: Vec<BTreeSet<Vec<u32>>>,
    point: Option<u32>,
}

impl Structure {
    /// The structure of the given size with every relation empty.
    pub fn new(sig: Signature, size: usize) -> Self {
        let rels = vec![BTreeSet::new(); sig.len()];
        Structure {
            sig,
            size,
            rels,
            point: None,
        }
    }

    /// A directed graph over `{E: 2}`.
    pub fn digraph(size: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut s = Structure::new(Signature::graph(), size);
        for &(a, b) in edges {
            s.insert(0, vec![a, b])?;
        }
        Ok(s)
    }

    /// An undirected loopless graph over `{E: 2}`; each edge is stored in both directions.
    pub fn graph(size: usize, edges: &[(u32, u32)]) -> Result<Self> {
        let mut s = Structure::new(Signature::graph(), size);
        for &(a, b) in edges {
            s.insert(0, vec![a, b])?;
            s.insert(0, vec![b, a])?;
        }
        Ok(s)
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn point(&self) -> Option<u32> {
        self.point
    }

    pub fn is_pointed(&self) -> bool {
        self.point.is_some()
    }

    pub fn with_point(mut self, point: Option<u32>) -> Result<Self> {
        if let Some(p) = point {
            self.check_element(p)?;
        }
        self.point = point;
        Ok(self)
    }

    pub fn tuples(&self, rel: usize) -> &BTreeSet<Vec<u32>> {
        &self.rels[rel]
    }

    pub fn holds(&self, rel: usize, tuple: &[u32]) -> bool {
        self.rels[rel].contains(tuple)
    }

    pub fn tuple_count(&self) -> usize {
        self.rels.iter().map(|r| r.len()).sum()
    }

    fn check_element(&self, e: u32) -> Result<()> {
        if (e as usize) < self.size {
            Ok(())
        } else {
            Err(Error::OutOfRange {
                element: e,
                size: self.size,
            })
        }
    }

    /// Adds a tuple to relation `rel`, validating arity and range.
    pub fn insert(&mut self, rel: usize, tuple: Vec<u32>) -> Result<bool> {
        let arity = self.sig.arity(rel);
        if tuple.len() != arity {
            return Err(Error::ArityMismatch {
                relation: self.sig.name(rel).to_string(),
                len: tuple.len(),
                tuple,
                arity,
            });
        }
        for &e in &tuple {
            self.check_element(e)?;
        }
        Ok(self.rels[rel].insert(tuple))
    }

    pub fn insert_named(&mut self, rel: &str, tuple: Vec<u32>) -> Result<bool> {
        let idx = self
            .sig
            .index_of(rel)
            .ok_or_else(|| Error::UnknownRelation(rel.to_string()))?;
        self.insert(idx, tuple)
    }

    pub fn remove(&mut self, rel: usize, tuple: &[u32]) -> bool {
        self.rels[rel].remove(tuple)
    }

    /// Re-checks every structure invariant.
    pub fn validate(&self) -> Result<()> {
        if self.rels.len() != self.sig.len() {
            return Err(Error::InvalidInput("relation tables do not match the signature".into()));
        }
        for (r, set) in self.rels.iter().enumerate() {
            for t in set {
                if t.len() != self.sig.arity(r) {
                    return Err(Error::ArityMismatch {
                        relation: self.sig.name(r).to_string(),
                        tuple: t.clone(),
                        len: t.len(),
                        arity: self.sig.arity(r),
                    });
                }
                for &e in t {
                    self.check_element(e)?;
                }
            }
        }
        if let Some(p) = self.point {
            self.check_element(p)?;
        }
        Ok(())
    }

    /// Relabels elements along a permutation `perm[old] = new`.
    pub fn permute(&self, perm: &[u32]) -> Structure {
        let rels = self
            .rels
            .iter()
            .map(|set| {
                set.iter()
                    .map(|t| t.iter().map(|&e| perm[e as usize]).collect())
                    .collect()
            })
            .collect();
        Structure {
            sig: self.sig.clone(),
            size: self.size,
            rels,
            point: self.point.map(|p| perm[p as usize]),
        }
    }

    /// The substructure induced on `elems` (in the given order), with the point
    /// kept if it lies inside.
    pub fn induced(&self, elems: &[u32]) -> Structure {
        let mut pos = vec![u32::MAX; self.size];
        for (i, &e) in elems.iter().enumerate() {
            pos[e as usize] = i as u32;
        }
        let rels = self
            .rels
            .iter()
            .map(|set| {
                set.iter()
                    .filter(|t| t.iter().all(|&e| pos[e as usize] != u32::MAX))
                    .map(|t| t.iter().map(|&e| pos[e as usize]).collect())
                    .collect()
            })
            .collect();
        let point = self
            .point
            .and_then(|p| (pos[p as usize] != u32::MAX).then_some(pos[p as usize]));
        Structure {
            sig: self.sig.clone(),
            size: elems.len(),
            rels,
            point,
        }
    }

    pub(crate) fn from_parts(
        sig: Signature,
        size: usize,
        rels: Vec<BTreeSet<Vec<u32>>>,
        point: Option<u32>,
    ) -> Structure {
        debug_assert_eq!(rels.len(), sig.len());
        Structure { sig, size, rels, point }
    }
}

/// A total function between universes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StructureMap {
    pub table: Vec<u32>,
}

impl StructureMap {
    pub fn new(table: Vec<u32>) -> Self {
        StructureMap { table }
    }

    pub fn identity(n: usize) -> Self {
        StructureMap {
            table: (0..n as u32).collect(),
        }
    }

    pub fn constant(n: usize, value: u32) -> Self {
        StructureMap { table: vec![value; n] }
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.table[x as usize]
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &StructureMap) -> StructureMap {
        StructureMap {
            table: inner.table.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    fn check_shape(&self, source: &Structure, target: &Structure) -> Result<()> {
        if source.signature() != target.signature() {
            return Err(Error::IncompatibleSignatures);
        }
        if self.table.len() != source.size() {
            return Err(Error::InvalidInput(format!(
                "map has {} entries but the source has {} elements",
                self.table.len(),
                source.size()
            )));
        }
        for &y in &self.table {
            target.check_element(y)?;
        }
        Ok(())
    }

    /// Relation preservation, plus point preservation when both ends are pointed.
    pub fn is_homomorphism(&self, source: &Structure, target: &Structure) -> Result<bool> {
        self.check_shape(source, target)?;
        Ok(self.first_unpreserved(source, target).is_none() && self.preserves_point(source, target))
    }

    fn preserves_point(&self, source: &Structure, target: &Structure) -> bool {
        match (source.point(), target.point()) {
            (Some(p), Some(q)) => self.apply(p) == q,
            _ => true,
        }
    }

    /// The first source tuple whose image is missing in the target, if any.
    pub fn first_unpreserved(&self, source: &Structure, target: &Structure) -> Option<(usize, Vec<u32>)> {
        let mut img = Vec::new();
        for r in 0..source.signature().len() {
            for t in source.tuples(r) {
                img.clear();
                img.extend(t.iter().map(|&x| self.apply(x)));
                if !target.holds(r, &img) {
                    return Some((r, t.clone()));
                }
            }
        }
        None
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.table.iter().all(|y| seen.insert(*y))
    }

    /// Injective homomorphism that also reflects every relation.
    pub fn is_embedding(&self, source: &Structure, target: &Structure) -> Result<bool> {
        if !self.is_homomorphism(source, target)? || !self.is_injective() {
            return Ok(false);
        }
        let mut preimage = vec![u32::MAX; target.size()];
        for (x, &y) in self.table.iter().enumerate() {
            preimage[y as usize] = x as u32;
        }
        let mut back = Vec::new();
        for r in 0..target.signature().len() {
            'tuples: for t in target.tuples(r) {
                back.clear();
                for &y in t {
                    let x = preimage[y as usize];
                    if x == u32::MAX {
                        continue 'tuples;
                    }
                    back.push(x);
                }
                if !source.holds(r, &back) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `true` iff `f` is a homomorphism `source -> target`.
pub fn is_homomorphism(f: &StructureMap, source: &Structure, target: &Structure) -> Result<bool> {
    f.is_homomorphism(source, target)
}

/// `true` iff `f` is an injective, relation-reflecting homomorphism.
pub fn is_embedding(f: &StructureMap, source: &Structure, target: &Structure) -> Result<bool> {
    f.is_embedding(source, target)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge() -> Structure {
        Structure::digraph(2, &[(0, 1)]).unwrap()
    }

    fn loop1() -> Structure {
        Structure::digraph(1, &[(0, 0)]).unwrap()
    }

    #[test]
    fn identity_is_homomorphism_and_embedding() {
        let a = Structure::digraph(3, &[(0, 1), (1, 2), (2, 2)]).unwrap();
        let id = StructureMap::identity(3);
        assert!(is_homomorphism(&id, &a, &a).unwrap());
        assert!(is_embedding(&id, &a, &a).unwrap());
    }

    #[test]
    fn edge_collapses_onto_loop() {
        let f = StructureMap::constant(2, 0);
        assert!(is_homomorphism(&f, &edge(), &loop1()).unwrap());
        let bare = Structure::new(Signature::graph(), 1);
        assert!(!is_homomorphism(&f, &edge(), &bare).unwrap());
    }

    #[test]
    fn embedding_must_reflect() {
        let bare = Structure::new(Signature::graph(), 1);
        let inc = StructureMap::identity(1);
        assert!(is_homomorphism(&inc, &bare, &loop1()).unwrap());
        assert!(!is_embedding(&inc, &bare, &loop1()).unwrap());
    }

    #[test]
    fn induced_substructure_inclusion_is_embedding() {
        let b = Structure::digraph(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 1)]).unwrap();
        let elems = [1u32, 2, 3];
        let sub = b.induced(&elems);
        let inc = StructureMap::new(elems.to_vec());
        assert!(is_embedding(&inc, &sub, &b).unwrap());
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let other = Structure::new(Signature::new([("P", 1)]).unwrap(), 1);
        let f = StructureMap::identity(1);
        assert_eq!(
            is_homomorphism(&f, &loop1(), &other),
            Err(Error::IncompatibleSignatures)
        );
    }

    #[test]
    fn pointed_maps_must_preserve_points() {
        let a = loop1().with_point(Some(0)).unwrap();
        let b = Structure::digraph(2, &[(0, 0), (1, 1)])
            .unwrap()
            .with_point(Some(1))
            .unwrap();
        assert!(!is_homomorphism(&StructureMap::new(vec![0]), &a, &b).unwrap());
        assert!(is_homomorphism(&StructureMap::new(vec![1]), &a, &b).unwrap());
    }

    #[test]
    fn signature_rejects_duplicates_and_nullary() {
        assert!(Signature::new([("E", 2), ("E", 1)]).is_err());
        assert!(Signature::new([("Z", 0)]).is_err());
        let s = Signature::new([("R", 2), ("P", 1)]).unwrap();
        assert!(s.is_modal());
        assert_eq!(s.name(0), "P");
        assert!(!Signature::new([("T", 3)]).unwrap().is_modal());
    }

    #[test]
    fn insert_validates() {
        let mut s = Structure::new(Signature::graph(), 2);
        assert!(matches!(
            s.insert(0, vec![0, 2]),
            Err(Error::OutOfRange { element: 2, .. })
        ));
        assert!(matches!(s.insert(0, vec![0]), Err(Error::ArityMismatch { .. })));
    }
}
