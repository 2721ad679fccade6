//! Composing componentwise Kleisli morphisms through a Kleisli law.

use crate::comonads::{ComonadInstance, KleisliMorphism};
use crate::error::{Error, Result};
use crate::structures::{Labeled, StructureMap};

use super::KleisliLaw;

/// `H(f₁, …, fₙ) ∘ κ: D(H(A⃗)) -> H(B⃗)`.
#[derive(Clone, Debug)]
pub struct ComposedWitness {
    /// `D(H(A⃗))`.
    pub source: ComonadInstance,
    /// `H(B⃗)`.
    pub target: Labeled,
    pub map: StructureMap,
    /// Whether `map` is a homomorphism (it always should be).
    pub is_homomorphism: bool,
}

impl ComposedWitness {
    pub fn into_kleisli_morphism(self) -> Result<KleisliMorphism> {
        KleisliMorphism::new(self.source, self.target, self.map)
    }
}

/// Turns Kleisli morphisms `fᵢ: CᵢAᵢ -> Bᵢ` into a Kleisli morphism
/// `D(H(A⃗)) -> H(B⃗)`, so relations witnessed on the operands are witnessed
/// on the composites.
pub fn fvm_compose_witness(law: &KleisliLaw, fs: &[KleisliMorphism]) -> Result<ComposedWitness> {
    if fs.len() != law.arity() {
        return Err(Error::InvalidInput(format!(
            "{} takes {} morphisms, got {}",
            law.name,
            law.arity(),
            fs.len()
        )));
    }
    for (i, (f, p)) in fs.iter().zip(&law.operands).enumerate() {
        if f.source.params != *p {
            return Err(Error::InvalidInput(format!(
                "morphism {i} is over {} k={} trunc={}, the law expects {} k={} trunc={}",
                f.source.params.kind, f.source.params.k, f.source.params.trunc, p.kind, p.k, p.trunc
            )));
        }
    }
    let bases: Vec<_> = fs.iter().map(|f| f.source.base.structure.clone()).collect();
    law.check_operands(&bases)?;
    let base_refs: Vec<&Labeled> = fs.iter().map(|f| &f.source.base).collect();
    let source = law.source.build_labeled(law.compose(&base_refs)?)?;
    let target_refs: Vec<&Labeled> = fs.iter().map(|f| &f.target).collect();
    let target = law.compose(&target_refs)?;
    let table = source
        .carrier
        .labels()
        .iter()
        .map(|t| {
            let x = law.kappa_term(t)?;
            let y = law.h_term(&x, |i, s| fs[i].apply_term(s))?;
            target.lookup(&y)
        })
        .collect::<Result<Vec<u32>>>()?;
    let map = StructureMap::new(table);
    let is_homomorphism = map.is_homomorphism(&source.carrier.structure, &target.structure)?;
    Ok(ComposedWitness {
        source,
        target,
        map,
        is_homomorphism,
    })
}
