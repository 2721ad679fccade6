use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::term::Term;

use super::Structure;

/// A structure whose elements carry symbolic [`Term`] names.
///
/// Labels make it possible to describe maps between constructed structures
/// (unions, products, comonad carriers) by what they do to element names,
/// independently of the index encoding chosen for each universe.
#[derive(Clone, Debug)]
pub struct Labeled {
    pub structure: Structure,
    labels: Vec<Term>,
    index: HashMap<Term, u32>,
}

impl PartialEq for Labeled {
    fn eq(&self, other: &Self) -> bool {
        self.structure == other.structure && self.labels == other.labels
    }
}

impl Eq for Labeled {}

impl Labeled {
    /// Labels element `i` as `Atom(i)`.
    pub fn plain(structure: Structure) -> Self {
        let labels = (0..structure.size() as u32).map(Term::Atom).collect();
        Labeled::new(structure, labels).expect("atom labels are distinct")
    }

    pub fn new(structure: Structure, labels: Vec<Term>) -> Result<Self> {
        if labels.len() != structure.size() {
            return Err(Error::InvalidInput(format!(
                "{} labels for a universe of size {}",
                labels.len(),
                structure.size()
            )));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, t) in labels.iter().enumerate() {
            if index.insert(t.clone(), i as u32).is_some() {
                return Err(Error::InvalidInput(format!("duplicate element label {t}")));
            }
        }
        Ok(Labeled {
            structure,
            labels,
            index,
        })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Term] {
        &self.labels
    }

    pub fn label(&self, i: u32) -> &Term {
        &self.labels[i as usize]
    }

    pub fn index_of(&self, t: &Term) -> Option<u32> {
        self.index.get(t).copied()
    }

    /// Index of a label that must exist; a missing label is reported as an error.
    pub fn lookup(&self, t: &Term) -> Result<u32> {
        self.index_of(t)
            .ok_or_else(|| Error::InvalidInput(format!("element {t} is not in the universe")))
    }

    pub fn point_label(&self) -> Option<&Term> {
        self.structure.point().map(|p| self.label(p))
    }
}
