//! Brute-force deciders that work directly with comonad carriers.

use crate::comonads::{coextend_into, ComonadInstance, Kind, Params};
use crate::error::{Error, Result};
use crate::structures::{find_homomorphism, for_each_homomorphism, Structure, StructureMap, Visit};

use super::{Backend, Fragment, Verdict, Witness};

/// Largest bases and resource accepted by [`kleisli_iso_search`].
pub const KLEISLI_SEARCH_MAX_BASE: usize = 3;
pub const KLEISLI_SEARCH_MAX_K: usize = 2;

/// Whether a Kleisli morphism `C(A) -> B` exists, by homomorphism search from
/// the materialised carrier. The witness is the map.
pub fn hom_exists(c: &ComonadInstance, b: &Structure) -> Result<Verdict> {
    match c.kind() {
        Kind::Ef | Kind::Modal => {}
        Kind::Pebble => {
            return Err(Error::Unsupported(
                "undecidable via truncated carrier; use pebble_forth".into(),
            ))
        }
        Kind::Cos => return Err(Error::Unsupported("no game for the closed-walk comonad".into())),
    }
    if c.base.structure.signature() != b.signature() {
        return Err(Error::IncompatibleSignatures);
    }
    if c.carrier.structure.is_pointed() != b.is_pointed() {
        return Err(Error::Pointedness(
            "the carrier and the target must both be pointed or both unpointed".into(),
        ));
    }
    let found = find_homomorphism(&c.carrier.structure, b)?;
    Ok(Verdict {
        fragment: Fragment::Pe,
        kind: c.kind(),
        k: c.k(),
        result: found.is_some(),
        backend: Backend::Homomorphism,
        witness: found.map(|f| Witness::Homomorphism { table: f.table }),
    })
}

/// Searches for a Kleisli isomorphism: `f: C(A) -> B` and `g: C(B) -> A`
/// with `g ∘ f* = ε_A` and `f ∘ g* = ε_B`. Then `f*` is a bijection and
/// `g = ε_A ∘ (f*)⁻¹`, so it suffices to enumerate `f`.
pub fn kleisli_iso_search(ca: &ComonadInstance, cb: &ComonadInstance) -> Result<Verdict> {
    if !matches!(ca.kind(), Kind::Ef | Kind::Modal) || ca.kind() != cb.kind() || ca.k() != cb.k() {
        return Err(Error::Unsupported(
            "Kleisli isomorphism search needs two EF or two modal instances with the same k".into(),
        ));
    }
    if ca.base.structure.signature() != cb.base.structure.signature() {
        return Err(Error::IncompatibleSignatures);
    }
    for size in [ca.base.size(), cb.base.size()] {
        crate::error::guard("Kleisli isomorphism search base", size, KLEISLI_SEARCH_MAX_BASE)?;
    }
    crate::error::guard("Kleisli isomorphism search k", ca.k(), KLEISLI_SEARCH_MAX_K)?;
    let mut found = None;
    if ca.size() == cb.size() {
        let mut failure = None;
        for_each_homomorphism(
            &ca.carrier.structure,
            &cb.base.structure,
            |table| match kleisli_partner(ca, cb, &StructureMap::new(table.to_vec())) {
                Ok(Some(g)) => {
                    found = Some((table.to_vec(), g));
                    Visit::Stop
                }
                Ok(None) => Visit::Continue,
                Err(e) => {
                    failure = Some(e);
                    Visit::Stop
                }
            },
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
    }
    Ok(Verdict {
        fragment: Fragment::Count,
        kind: ca.kind(),
        k: ca.k(),
        result: found.is_some(),
        backend: Backend::KleisliSearch,
        witness: found.map(|(f, g)| Witness::KleisliPair { f, g }),
    })
}

/// The inverse `g` of a Kleisli morphism `f`, if `f` is a Kleisli isomorphism.
fn kleisli_partner(ca: &ComonadInstance, cb: &ComonadInstance, f: &StructureMap) -> Result<Option<Vec<u32>>> {
    let fstar = coextend_into(ca, f, &cb.base, cb)?;
    let mut inverse = vec![u32::MAX; cb.size()];
    for (i, &j) in fstar.table.iter().enumerate() {
        if inverse[j as usize] != u32::MAX {
            return Ok(None);
        }
        inverse[j as usize] = i as u32;
    }
    let g = ca.counit.after(&StructureMap::new(inverse));
    if !g.is_homomorphism(&cb.carrier.structure, &ca.base.structure)? {
        return Ok(None);
    }
    let gstar = coextend_into(cb, &g, &ca.base, ca)?;
    Ok((f.after(&gstar) == cb.counit).then_some(g.table))
}

/// Checks a Kleisli pair `(f, g)` between `A` and `B` from scratch.
pub(crate) fn replay_kleisli_pair(
    kind: Kind,
    k: usize,
    a: &Structure,
    b: &Structure,
    f: &[u32],
    g: &[u32],
) -> Result<bool> {
    let ca = Params::new(kind, k).build(a)?;
    let cb = Params::new(kind, k).build(b)?;
    if f.len() != ca.size() || g.len() != cb.size() {
        return Ok(false);
    }
    if f.iter().any(|&y| y as usize >= b.size()) || g.iter().any(|&y| y as usize >= a.size()) {
        return Ok(false);
    }
    let (f, g) = (StructureMap::new(f.to_vec()), StructureMap::new(g.to_vec()));
    if !f.is_homomorphism(&ca.carrier.structure, b)? || !g.is_homomorphism(&cb.carrier.structure, a)? {
        return Ok(false);
    }
    let fstar = coextend_into(&ca, &f, &cb.base, &cb)?;
    let gstar = coextend_into(&cb, &g, &ca.base, &ca)?;
    Ok(g.after(&fstar) == ca.counit && f.after(&gstar) == cb.counit)
}
