//! Lifting a structure operation `H` to coalgebras along a Kleisli law
//! `κ: D ∘ H ⇒ H ∘ (C₁ × … × Cₙ)`, and the bimorphisms that classify maps
//! into the lifted operation.
//!
//! `Ĥ(α⃗)` is the equaliser of `κ* ` and `D(H(α⃗))`, two coalgebra morphisms
//! from the cofree coalgebra `(D(H(A⃗)), δ)` to `(D(H(C₁A₁, …)), δ)`. Both
//! are evaluated on names, so the (much larger) second cofree coalgebra is
//! never built.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{coalgebra_morphisms, cofree, greatest_closed, is_coalgebra_morphism, is_path, Coalgebra};
use crate::comonads::{coextend_term, counit_term, fmap_term, Kind};
use crate::error::{Error, Result};
use crate::kleisli::{KleisliLaw, Operation};
use crate::structures::{for_each_homomorphism, Labeled, Structure, StructureMap, Visit};
use crate::term::Term;

/// Most composites checked by [`bimorph_correspondence`] for the
/// composition and distribution properties.
pub const MAX_COMPOSITES: usize = 256;

/// `Ĥ(α⃗)` together with the maps that present it.
#[derive(Clone, Debug)]
pub struct Lifted {
    pub law: KleisliLaw,
    pub operands: Vec<Coalgebra>,
    /// `H(A⃗)`.
    pub composite: Labeled,
    /// `(D(H(A⃗)), δ)`.
    pub cofree: Coalgebra,
    /// `Ĥ(α⃗)`, a sub-coalgebra of the cofree one.
    pub coalgebra: Coalgebra,
    /// The inclusion of `Ĥ(α⃗)` into `D(H(A⃗))`.
    pub inclusion: StructureMap,
    /// The universal bimorphism `u = ε ∘ inclusion: Ĥ(α⃗) -> H(A⃗)`.
    pub universal: StructureMap,
}

fn check_law_operands(law: &KleisliLaw, operands: &[Coalgebra]) -> Result<()> {
    if !matches!(law.source.kind, Kind::Ef | Kind::Modal) || law.operation == Operation::Identity {
        return Err(Error::Unsupported(format!(
            "{law} does not lift to coalgebras (it needs an operation between EF or modal comonads)"
        )));
    }
    if operands.len() != law.arity() {
        return Err(Error::InvalidInput(format!(
            "{law} takes {} operands, got {}",
            law.arity(),
            operands.len()
        )));
    }
    for (i, (c, p)) in operands.iter().zip(&law.operands).enumerate() {
        if c.params != *p {
            return Err(Error::InvalidInput(format!(
                "operand {} is a coalgebra for {} k={}, the law expects {} k={}",
                i + 1,
                c.params.kind,
                c.params.k,
                p.kind,
                p.k
            )));
        }
    }
    Ok(())
}

/// `H(α⃗)` on a name of `H(A⃗)`.
fn h_alpha(law: &KleisliLaw, operands: &[Coalgebra], x: &Term) -> Result<Term> {
    law.h_term(x, |i, y| operands[i].alpha_named(y))
}

/// Computes `Ĥ(α⃗)`: the largest sub-coalgebra of `(D(H(A⃗)), δ)` on which
/// `κ*` and `D(H(α⃗))` agree.
pub fn lifted_op(law: &KleisliLaw, operands: &[Coalgebra]) -> Result<Lifted> {
    check_law_operands(law, operands)?;
    let instance = law.instantiate_labeled(operands.iter().map(|c| c.base.clone()).collect())?;
    let cofree = cofree(&instance.source)?;
    let names = cofree.base.labels();
    let keep = greatest_closed(&cofree, |t| {
        let t = &names[t as usize];
        let lhs = fmap_term(t, |x| h_alpha(law, operands, x));
        let rhs = coextend_term(t, |p| law.kappa_term(p));
        Ok(matches!((lhs, rhs), (Ok(a), Ok(b)) if a == b))
    })?;
    let (coalgebra, inclusion) = cofree.restrict(&keep)?;
    let composite = instance.composite;
    let universal = coalgebra
        .base
        .labels()
        .iter()
        .map(|t| composite.lookup(counit_term(t)?))
        .collect::<Result<Vec<u32>>>()?;
    Ok(Lifted {
        law: law.clone(),
        operands: operands.to_vec(),
        composite,
        cofree,
        coalgebra,
        inclusion,
        universal: StructureMap::new(universal),
    })
}

/// `H(f⃗)` on a name of `H(A⃗)`, for maps `fᵢ` between operand bases.
fn h_map(law: &KleisliLaw, from: &[&Labeled], to: &[&Labeled], fs: &[StructureMap], x: &Term) -> Result<Term> {
    law.h_term(x, |i, y| Ok(to[i].label(fs[i].apply(from[i].lookup(y)?)).clone()))
}

/// `Ĥ(f⃗): Ĥ(α⃗) -> Ĥ(β⃗)`, the restriction of `D(H(f⃗))`, for coalgebra
/// morphisms `fᵢ` between the operands.
pub fn lifted_map(fs: &[StructureMap], from: &Lifted, to: &Lifted) -> Result<StructureMap> {
    if from.law != to.law || fs.len() != from.operands.len() {
        return Err(Error::InvalidInput(
            "lifted maps need one map per operand of the same law".into(),
        ));
    }
    for ((f, a), b) in fs.iter().zip(&from.operands).zip(&to.operands) {
        if !is_coalgebra_morphism(f, a, b)? {
            return Err(Error::InvalidInput("operand maps must be coalgebra morphisms".into()));
        }
    }
    let fb: Vec<&Labeled> = from.operands.iter().map(|c| &c.base).collect();
    let tb: Vec<&Labeled> = to.operands.iter().map(|c| &c.base).collect();
    let table = from
        .coalgebra
        .base
        .labels()
        .iter()
        .map(|t| {
            let image = fmap_term(t, |x| h_map(&from.law, &fb, &tb, fs, x))?;
            to.coalgebra.base.lookup(&image)
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(StructureMap::new(table))
}

/// The comparison between the cofree coalgebra on `H(B⃗)` and the lifted
/// operation on the cofree operands `(Cᵢ(Bᵢ), δ)`.
#[derive(Clone, Debug, Serialize)]
pub struct CofreeComparison {
    pub law: String,
    /// `|D(H(B⃗))|`.
    pub cofree_size: usize,
    /// `|Ĥ(δ⃗)|`.
    pub lifted_size: usize,
    /// `φ = κ*` by index, when every image lies in the lifted coalgebra.
    pub map: Option<Vec<u32>>,
    pub bijective: bool,
    /// `φ` is an isomorphism of structures.
    pub isomorphism: bool,
    pub coalgebra_morphism: bool,
}

impl CofreeComparison {
    pub fn passed(&self) -> bool {
        self.bijective && self.isomorphism && self.coalgebra_morphism
    }
}

/// Exhibits `κ*: (D(H(B⃗)), δ) -> Ĥ((C₁B₁, δ), …)` and checks that it is an
/// isomorphism of coalgebras.
pub fn cofree_comparison(law: &KleisliLaw, bases: &[Structure]) -> Result<CofreeComparison> {
    let instance = law.instantiate(bases)?;
    let source = cofree(&instance.source)?;
    let operands = instance.operands.iter().map(cofree).collect::<Result<Vec<_>>>()?;
    let lifted = lifted_op(law, &operands)?;
    let target = &lifted.coalgebra;
    let mut report = CofreeComparison {
        law: law.name.clone(),
        cofree_size: source.size(),
        lifted_size: target.size(),
        map: None,
        bijective: false,
        isomorphism: false,
        coalgebra_morphism: false,
    };
    let table: Option<Vec<u32>> = source
        .base
        .labels()
        .iter()
        .map(|t| {
            let image = coextend_term(t, |p| law.kappa_term(p)).ok()?;
            target.base.index_of(&image)
        })
        .collect();
    let Some(table) = table else { return Ok(report) };
    let phi = StructureMap::new(table);
    let covered: BTreeSet<u32> = phi.table.iter().copied().collect();
    report.bijective = phi.is_injective() && covered.len() == target.size();
    report.isomorphism = report.bijective && phi.is_embedding(&source.base.structure, &target.base.structure)?;
    report.coalgebra_morphism = is_coalgebra_morphism(&phi, &source, target)?;
    report.map = Some(phi.table);
    Ok(report)
}

/// Whether `g: A -> H(B⃗)` is a bimorphism `α -> [β⃗]`: a homomorphism with
/// `H(β⃗) ∘ g = κ ∘ D(g) ∘ α`.
pub fn is_bimorphism(law: &KleisliLaw, g: &StructureMap, alpha: &Coalgebra, betas: &[Coalgebra]) -> Result<bool> {
    check_law_operands(law, betas)?;
    if alpha.params != law.source {
        return Err(Error::InvalidInput(format!(
            "the source is a coalgebra for {} k={}, the law needs {} k={}",
            alpha.params.kind, alpha.params.k, law.source.kind, law.source.k
        )));
    }
    let bases: Vec<&Labeled> = betas.iter().map(|c| &c.base).collect();
    let composite = law.compose(&bases)?;
    bimorphism_on(law, &composite, g, alpha, betas)
}

fn bimorphism_on(
    law: &KleisliLaw,
    composite: &Labeled,
    g: &StructureMap,
    alpha: &Coalgebra,
    betas: &[Coalgebra],
) -> Result<bool> {
    if g.table.len() != alpha.size() || g.table.iter().any(|&y| y as usize >= composite.size()) {
        return Ok(false);
    }
    if !g.is_homomorphism(&alpha.base.structure, &composite.structure)? {
        return Ok(false);
    }
    for x in 0..alpha.size() as u32 {
        let lhs = law.h_term(composite.label(g.apply(x)), |i, y| betas[i].alpha_named(y))?;
        let pushed = fmap_term(alpha.alpha_term(x), |t| {
            Ok(composite.label(g.apply(alpha.base.lookup(t)?)).clone())
        })?;
        if law.kappa_term(&pushed).ok() != Some(lhs) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of [`bimorph_correspondence`].
#[derive(Clone, Debug, Serialize)]
pub struct BimorphismReport {
    pub law: String,
    /// Coalgebra morphisms `α -> Ĥ(β⃗)`.
    pub morphisms: usize,
    /// Bimorphisms `α -> [β⃗]`.
    pub bimorphisms: usize,
    /// `f ↦ u ∘ f` is a bijection between the two sets.
    pub bijective: bool,
    /// Composites `H(g⃗) ∘ b ∘ h` checked (coalgebra morphisms `gᵢ`, `h`).
    pub composites: usize,
    /// Every checked composite is a bimorphism.
    pub composition: bool,
    /// Every checked composite corresponds to `Ĥ(g⃗) ∘ f ∘ h`, where `f`
    /// corresponds to `b`.
    pub distribution: bool,
    pub failure: Option<String>,
}

impl BimorphismReport {
    pub fn passed(&self) -> bool {
        self.bijective && self.composition && self.distribution
    }
}

/// Enumerates the coalgebra morphisms into `Ĥ(β⃗)` and the bimorphisms into
/// `[β⃗]`, and checks that composing with the universal bimorphism is a
/// bijection; also checks that bimorphisms are closed under composition with
/// coalgebra endomorphisms on both sides, compatibly with the bijection.
pub fn bimorph_correspondence(law: &KleisliLaw, alpha: &Coalgebra, betas: &[Coalgebra]) -> Result<BimorphismReport> {
    bimorph_correspondence_with(law, law, alpha, betas)
}

/// [`bimorph_correspondence`] with `Ĥ` computed from `lift_law` while
/// bimorphisms are judged by `law`. The correspondence holds for any `κ`
/// used consistently on both sides, so a corrupted law is detected by
/// lifting along it and counting bimorphisms with the intact one.
pub fn bimorph_correspondence_with(
    lift_law: &KleisliLaw,
    law: &KleisliLaw,
    alpha: &Coalgebra,
    betas: &[Coalgebra],
) -> Result<BimorphismReport> {
    check_law_operands(law, betas)?;
    if alpha.params != law.source {
        return Err(Error::InvalidInput(
            "the source coalgebra does not match the law".into(),
        ));
    }
    let lifted = lifted_op(lift_law, betas)?;
    let composite = &lifted.composite;
    let morphisms = coalgebra_morphisms(alpha, &lifted.coalgebra)?;
    let mut candidates = Vec::new();
    for_each_homomorphism(&alpha.base.structure, &composite.structure, |t| {
        candidates.push(StructureMap::new(t.to_vec()));
        Visit::Continue
    })?;
    let mut bimorphisms = Vec::new();
    for g in candidates {
        if bimorphism_on(law, composite, &g, alpha, betas)? {
            bimorphisms.push(g);
        }
    }
    let images: Vec<StructureMap> = morphisms.iter().map(|f| lifted.universal.after(f)).collect();
    let image_set: BTreeSet<&Vec<u32>> = images.iter().map(|m| &m.table).collect();
    let bimorph_set: BTreeSet<&Vec<u32>> = bimorphisms.iter().map(|m| &m.table).collect();
    let mut report = BimorphismReport {
        law: law.name.clone(),
        morphisms: morphisms.len(),
        bimorphisms: bimorphisms.len(),
        bijective: image_set.len() == images.len() && image_set == bimorph_set,
        composites: 0,
        composition: true,
        distribution: true,
        failure: None,
    };
    if !report.bijective {
        report.failure = Some(format!(
            "{} coalgebra morphisms give {} distinct bimorphisms out of {}",
            morphisms.len(),
            image_set.len(),
            bimorphisms.len()
        ));
        return Ok(report);
    }

    // Composites H(g⃗) ∘ b ∘ h over endomorphisms g⃗ of the operands and h of
    // the source, visited in a fixed order up to MAX_COMPOSITES.
    let source_endos = coalgebra_morphisms(alpha, alpha)?;
    let operand_endos = betas
        .iter()
        .map(|b| coalgebra_morphisms(b, b))
        .collect::<Result<Vec<_>>>()?;
    let bases: Vec<&Labeled> = betas.iter().map(|c| &c.base).collect();
    let combos: usize = operand_endos.iter().map(Vec::len).product();
    'outer: for (f, b) in morphisms.iter().zip(&images) {
        for h in &source_endos {
            for c in 0..combos {
                if report.composites == MAX_COMPOSITES {
                    break 'outer;
                }
                report.composites += 1;
                let mut rest = c;
                let gs: Vec<StructureMap> = operand_endos
                    .iter()
                    .map(|e| {
                        let g = e[rest % e.len()].clone();
                        rest /= e.len();
                        g
                    })
                    .collect();
                let hg = composite
                    .labels()
                    .iter()
                    .map(|x| composite.lookup(&h_map(law, &bases, &bases, &gs, x)?))
                    .collect::<Result<Vec<u32>>>()?;
                let composed = StructureMap::new(hg).after(&b.after(h));
                if !bimorphism_on(law, composite, &composed, alpha, betas)? {
                    report.composition = false;
                    report.failure = Some(format!("H(g⃗) ∘ {:?} ∘ {:?} is not a bimorphism", b.table, h.table));
                    break 'outer;
                }
                let expected = lifted_map(&gs, &lifted, &lifted)?.after(&f.after(h));
                if lifted.universal.after(&expected) != composed {
                    report.distribution = false;
                    report.failure = Some(format!(
                        "the composite of {:?} does not correspond to Ĥ(g⃗) ∘ f ∘ h",
                        b.table
                    ));
                    break 'outer;
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of [`check_coproduct_decompositions`].
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub paths: usize,
    pub bimorphisms: usize,
    /// Bimorphisms whose preimage decomposition consists of path coalgebras
    /// with coalgebra morphisms into the summands.
    pub decomposed: usize,
    /// Bimorphisms with exactly one decomposition (enumerated over all pairs
    /// of subsets).
    pub unique: usize,
    pub failure: Option<String>,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.decomposed == self.bimorphisms && self.unique == self.bimorphisms
    }
}

/// The path coalgebra on `elems ⊆ P` whose `α` keeps only the letters in
/// `elems`, and the corresponding summand map, if both are valid.
fn summand_part(
    law: &KleisliLaw,
    path: &Coalgebra,
    g: &StructureMap,
    composite: &Labeled,
    tag: u8,
    elems: &[u32],
    beta: &Coalgebra,
) -> Result<bool> {
    if elems.is_empty() {
        return Ok(true);
    }
    let inside: BTreeSet<&Term> = elems.iter().map(|&e| path.base.label(e)).collect();
    let alpha = elems
        .iter()
        .map(|&e| match path.alpha_term(e) {
            Term::Word(w) => Ok(Term::Word(w.iter().filter(|t| inside.contains(t)).cloned().collect())),
            t => Err(Error::InvalidInput(format!("{t} is not a word"))),
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = elems.iter().map(|&e| path.base.label(e).clone()).collect();
    let base = Labeled::new(path.base.structure.induced(elems), labels)?;
    let Ok(part) = Coalgebra::new(law.operands[tag as usize], base, alpha) else {
        return Ok(false);
    };
    if !super::check_coalgebra(&part)?.passed() || !is_path(&part)? {
        return Ok(false);
    }
    let table = elems
        .iter()
        .map(|&e| match composite.label(g.apply(e)) {
            Term::Inj(i, y) if *i == tag => beta.base.lookup(y).ok(),
            _ => None,
        })
        .collect::<Option<Vec<u32>>>();
    let Some(table) = table else { return Ok(false) };
    is_coalgebra_morphism(&StructureMap::new(table), &part, beta)
}

/// For disjoint unions of EF coalgebras: every bimorphism from a path
/// coalgebra `P` into `[β₁, β₂]` splits `P` into two path coalgebras mapped
/// into the summands by coalgebra morphisms, and this decomposition is the
/// only one (all pairs of subsets of `P` are tried).
pub fn check_coproduct_decompositions(
    law: &KleisliLaw,
    paths: &[Coalgebra],
    betas: &[Coalgebra],
) -> Result<DecompositionReport> {
    if law.operation != Operation::Coproduct || law.source.kind != Kind::Ef {
        return Err(Error::Unsupported(
            "decompositions are checked for EF disjoint unions".into(),
        ));
    }
    check_law_operands(law, betas)?;
    let bases: Vec<&Labeled> = betas.iter().map(|c| &c.base).collect();
    let composite = law.compose(&bases)?;
    let mut report = DecompositionReport {
        paths: paths.len(),
        bimorphisms: 0,
        decomposed: 0,
        unique: 0,
        failure: None,
    };
    for path in paths {
        if !is_path(path)? {
            return Err(Error::InvalidInput("decompositions start from path coalgebras".into()));
        }
        let mut maps = Vec::new();
        for_each_homomorphism(&path.base.structure, &composite.structure, |t| {
            maps.push(StructureMap::new(t.to_vec()));
            Visit::Continue
        })?;
        for g in maps {
            if !bimorphism_on(law, &composite, &g, path, betas)? {
                continue;
            }
            report.bimorphisms += 1;
            let n = path.size();
            let tag_of = |e: u32| match composite.label(g.apply(e)) {
                Term::Inj(i, _) => *i,
                _ => u8::MAX,
            };
            let preimage = |tag: u8| -> Vec<u32> { (0..n as u32).filter(|&e| tag_of(e) == tag).collect() };
            let ok = |p0: &[u32], p1: &[u32]| -> Result<bool> {
                let covers = (0..n as u32).all(|e| p0.contains(&e) || p1.contains(&e));
                Ok(covers
                    && summand_part(law, path, &g, &composite, 0, p0, &betas[0])?
                    && summand_part(law, path, &g, &composite, 1, p1, &betas[1])?)
            };
            if ok(&preimage(0), &preimage(1))? {
                report.decomposed += 1;
            } else {
                report
                    .failure
                    .get_or_insert_with(|| format!("bimorphism {:?} does not decompose", g.table));
            }
            let mut count = 0;
            for m0 in 0u32..1 << n {
                for m1 in 0u32..1 << n {
                    let p0: Vec<u32> = (0..n as u32).filter(|e| m0 >> e & 1 == 1).collect();
                    let p1: Vec<u32> = (0..n as u32).filter(|e| m1 >> e & 1 == 1).collect();
                    if ok(&p0, &p1)? {
                        count += 1;
                    }
                }
            }
            if count == 1 {
                report.unique += 1;
            } else {
                report
                    .failure
                    .get_or_insert_with(|| format!("bimorphism {:?} has {count} decompositions", g.table));
            }
        }
    }
    Ok(report)
}
