//! Kleisli laws `κ: D ∘ H ⇒ H ∘ (C₁ × … × Cₙ)` for structure operations `H`,
//! and comonad morphisms (the case `H = Id`).
//!
//! Laws act on element names: `κ` turns an element of `D(H(A⃗))` into an
//! element of `H(C₁A₁, …, CₙAₙ)` without looking at the bases, so the same
//! function serves every base, and the axioms can be evaluated on names
//! (including names over carriers that are never materialised).

mod check;
mod compose;

use std::fmt;

use serde::Serialize;

use crate::comonads::{counit_term, fmap_term, ComonadInstance, Kind, Params};
use crate::error::{Error, Result};
use crate::structures::{Labeled, Structure, StructureMap};
use crate::term::Term;

pub use check::{
    check_kleisli_law, exhaustive_bases, KleisliLawReport, LAW_HOMOMORPHISM, LAW_K1, LAW_K2, LAW_KLEISLI_COMPOSITION,
    LAW_KLEISLI_UNIT, LAW_NATURALITY,
};
pub use compose::{fvm_compose_witness, ComposedWitness};

/// The operation `H` of a law.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Operation {
    /// Disjoint union of unpointed structures.
    Coproduct,
    /// Joining two pointed structures below a fresh point with edges of one relation.
    Merge,
    /// Cartesian product.
    Product,
    /// `H = Id`: a comonad morphism `D ⇒ C`.
    Identity,
}

/// Names of the registered laws.
pub const LAW_NAMES: [&str; 9] = [
    "coproduct-ef",
    "coproduct-pebble",
    "merge-modal",
    "product-ef",
    "product-pebble",
    "product-modal",
    "ef-pebble",
    "modal-p2",
    "cos-p3",
];

/// A Kleisli law: the operation, the comonad `D` on composites and the
/// comonads `Cᵢ` on operands.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KleisliLaw {
    pub name: String,
    pub operation: Operation,
    pub source: Params,
    pub operands: Vec<Params>,
    /// The merge relation; `None` selects the first binary relation.
    pub relation: Option<String>,
    /// Two element names of `D(H(A⃗))` whose images are exchanged, for
    /// testing that the checker notices a broken law.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fault: Option<(Term, Term)>,
}

impl fmt::Display for KleisliLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// Looks up a registered law at resource `k`. `trunc` overrides the carrier
/// truncation for the pebbling and closed-walk comonads.
pub fn law(name: &str, k: usize, trunc: Option<usize>) -> Result<KleisliLaw> {
    if k == 0 {
        return Err(Error::InvalidInput("the resource k must be at least 1".into()));
    }
    let pebble = |k: usize, min: usize| -> Result<Params> {
        let p = Params::new(Kind::Pebble, k);
        let t = trunc.unwrap_or(p.trunc.max(min));
        if t < min {
            return Err(Error::InvalidInput(format!("{name} needs trunc ≥ {min}")));
        }
        Ok(p.with_trunc(t))
    };
    let make = |operation, source: Params, operands: Vec<Params>| KleisliLaw {
        name: name.to_string(),
        operation,
        source,
        operands,
        relation: None,
        fault: None,
    };
    Ok(match name {
        "coproduct-ef" => {
            let p = Params::new(Kind::Ef, k);
            make(Operation::Coproduct, p, vec![p, p])
        }
        "coproduct-pebble" => {
            let p = pebble(k, 1)?;
            make(Operation::Coproduct, p, vec![p, p])
        }
        "merge-modal" => make(
            Operation::Merge,
            Params::new(Kind::Modal, k + 1),
            vec![Params::new(Kind::Modal, k); 2],
        ),
        "product-ef" | "product-modal" => {
            let kind = if name == "product-ef" { Kind::Ef } else { Kind::Modal };
            let p = Params::new(kind, k);
            make(Operation::Product, p, vec![p, p])
        }
        "product-pebble" => {
            let p = pebble(k, 1)?;
            make(Operation::Product, p, vec![p, p])
        }
        "ef-pebble" => make(Operation::Identity, Params::new(Kind::Ef, k), vec![pebble(k, k)?]),
        "modal-p2" => make(
            Operation::Identity,
            Params::new(Kind::Modal, k),
            vec![pebble(2, k + 1)?],
        ),
        "cos-p3" => {
            let t = trunc.unwrap_or(COS_P3_TRUNC);
            make(
                Operation::Identity,
                Params::new(Kind::Cos, k).with_trunc(t),
                vec![Params::new(Kind::Pebble, 3).with_trunc(t)],
            )
        }
        _ => {
            return Err(Error::InvalidInput(format!(
                "unknown Kleisli law `{name}` (known: {})",
                LAW_NAMES.join(", ")
            )))
        }
    })
}

/// Default walk length for the closed-walk morphism: longer walks make the
/// `P₃` carrier impractically large.
pub const COS_P3_TRUNC: usize = 4;

fn bad_name(t: &Term) -> Error {
    Error::InvalidInput(format!("{t} is not in the domain of this Kleisli law"))
}

/// Pebble index of position `j` in the image of a closed walk.
fn walk_pebble(j: usize) -> u8 {
    if j == 0 {
        2
    } else if j % 2 == 1 {
        1
    } else {
        0
    }
}

impl KleisliLaw {
    pub fn arity(&self) -> usize {
        self.operands.len()
    }

    /// A product law over `n` factors.
    pub fn with_arity(mut self, n: usize) -> Result<Self> {
        if self.operation != Operation::Product || n == 0 {
            return Err(Error::InvalidInput("only product laws take an arity".into()));
        }
        self.operands = vec![self.operands[0]; n];
        Ok(self)
    }

    pub fn with_relation(mut self, rel: &str) -> Self {
        self.relation = Some(rel.to_string());
        self
    }

    pub fn with_fault(mut self, a: Term, b: Term) -> Self {
        self.fault = Some((a, b));
        self
    }

    /// The merge relation for bases over `sig`.
    fn merge_relation(&self, s: &Structure) -> Result<String> {
        if let Some(r) = &self.relation {
            return Ok(r.clone());
        }
        let sig = s.signature();
        (0..sig.len())
            .find(|&r| sig.arity(r) == 2)
            .map(|r| sig.name(r).to_string())
            .ok_or_else(|| Error::InvalidInput("the merge needs a binary relation".into()))
    }

    /// Checks the operand count, signatures and pointedness.
    pub fn check_operands(&self, bases: &[Structure]) -> Result<()> {
        if bases.len() != self.arity() {
            return Err(Error::InvalidInput(format!(
                "{} takes {} operands, got {}",
                self.name,
                self.arity(),
                bases.len()
            )));
        }
        if bases.iter().any(|b| b.signature() != bases[0].signature()) {
            return Err(Error::IncompatibleSignatures);
        }
        let pointed = matches!(self.source.kind, Kind::Modal);
        if bases.iter().any(|b| b.is_pointed() != pointed) {
            return Err(Error::Pointedness(format!(
                "{} takes {} operands",
                self.name,
                if pointed { "pointed" } else { "unpointed" }
            )));
        }
        Ok(())
    }

    /// `H(A⃗)` with element names built from the operand names.
    pub fn compose(&self, bases: &[&Labeled]) -> Result<Labeled> {
        match self.operation {
            Operation::Coproduct => Labeled::disjoint_union(bases[0], bases[1]),
            Operation::Product => Labeled::product(bases),
            Operation::Merge => {
                let rel = self.merge_relation(&bases[0].structure)?;
                Labeled::merge(bases[0], bases[1], &rel)
            }
            Operation::Identity => Ok(bases[0].clone()),
        }
    }

    /// The action of `H` on maps, on one element name of `H(A⃗)`: component
    /// `i` of the name is replaced by `f(i, component)`.
    pub fn h_term(&self, x: &Term, mut f: impl FnMut(usize, &Term) -> Result<Term>) -> Result<Term> {
        match (self.operation, x) {
            (Operation::Coproduct, Term::Inj(i, y)) | (Operation::Merge, Term::Inj(i, y)) => {
                Ok(Term::inj(*i, f(*i as usize, y)?))
            }
            (Operation::Merge, Term::Star) => Ok(Term::Star),
            (Operation::Product, Term::Tuple(ys)) if ys.len() == self.arity() => Ok(Term::Tuple(
                ys.iter().enumerate().map(|(i, y)| f(i, y)).collect::<Result<_>>()?,
            )),
            (Operation::Identity, _) => f(0, x),
            _ => Err(bad_name(x)),
        }
    }

    /// `κ` on an element name of `D(H(A⃗))`.
    pub fn kappa_term(&self, t: &Term) -> Result<Term> {
        if let Some((a, b)) = &self.fault {
            if t == a {
                return self.kappa_exact(b);
            }
            if t == b {
                return self.kappa_exact(a);
            }
        }
        self.kappa_exact(t)
    }

    fn kappa_exact(&self, t: &Term) -> Result<Term> {
        match self.operation {
            Operation::Coproduct => {
                let tag = match counit_term(t)? {
                    Term::Inj(i, _) => *i,
                    _ => return Err(bad_name(t)),
                };
                let strip = |x: &Term| match x {
                    Term::Inj(i, y) if *i == tag => Some((**y).clone()),
                    _ => None,
                };
                let restricted = match t {
                    Term::Word(w) => Term::Word(w.iter().filter_map(strip).collect()),
                    Term::Pebbled(w) => {
                        Term::Pebbled(w.iter().filter_map(|(p, x)| strip(x).map(|y| (*p, y))).collect())
                    }
                    _ => return Err(bad_name(t)),
                };
                Ok(Term::inj(tag, restricted))
            }
            Operation::Merge => match t {
                Term::Path(start, steps) if **start == Term::Star => {
                    let Some(((_, first), rest)) = steps.split_first() else {
                        return Ok(Term::Star);
                    };
                    let Term::Inj(tag, c0) = first else {
                        return Err(bad_name(t));
                    };
                    let rest = rest
                        .iter()
                        .map(|(r, x)| match x {
                            Term::Inj(i, y) if i == tag => Ok((*r, (**y).clone())),
                            _ => Err(bad_name(t)),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Term::inj(*tag, Term::path((**c0).clone(), rest)))
                }
                _ => Err(bad_name(t)),
            },
            Operation::Product => {
                let n = self.arity();
                let parts = (0..n)
                    .map(|i| {
                        fmap_term(t, |x| match x {
                            Term::Tuple(ys) if ys.len() == n => Ok(ys[i].clone()),
                            _ => Err(bad_name(x)),
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Term::Tuple(parts))
            }
            Operation::Identity => match (self.source.kind, t) {
                (Kind::Ef, Term::Word(w)) => Ok(Term::Pebbled(
                    w.iter().enumerate().map(|(j, a)| (j as u8, a.clone())).collect(),
                )),
                (Kind::Modal, Term::Path(start, steps)) => Ok(Term::Pebbled(
                    std::iter::once((0u8, (**start).clone()))
                        .chain(
                            steps
                                .iter()
                                .enumerate()
                                .map(|(j, (_, a))| (((j + 1) % 2) as u8, a.clone())),
                        )
                        .collect(),
                )),
                (Kind::Cos, Term::Walk(walk, i)) => Ok(Term::Pebbled(
                    walk[..=*i as usize]
                        .iter()
                        .enumerate()
                        .map(|(j, v)| (walk_pebble(j), v.clone()))
                        .collect(),
                )),
                _ => Err(bad_name(t)),
            },
        }
    }

    /// Materialises `D(H(A⃗))`, the operand comonads and the names needed to
    /// evaluate the law on `bases`.
    pub fn instantiate(&self, bases: &[Structure]) -> Result<LawInstance> {
        self.instantiate_labeled(bases.iter().cloned().map(Labeled::plain).collect())
    }

    /// [`KleisliLaw::instantiate`] on operands with arbitrary element names.
    pub fn instantiate_labeled(&self, labeled: Vec<Labeled>) -> Result<LawInstance> {
        let structures: Vec<Structure> = labeled.iter().map(|b| b.structure.clone()).collect();
        self.check_operands(&structures)?;
        let refs: Vec<&Labeled> = labeled.iter().collect();
        let composite = self.compose(&refs)?;
        let source = self.source.build_labeled(composite.clone())?;
        let operands = self
            .operands
            .iter()
            .zip(&labeled)
            .map(|(p, b)| p.build_labeled(b.clone()))
            .collect::<Result<Vec<_>>>()?;
        Ok(LawInstance {
            law: self.clone(),
            bases: labeled,
            composite,
            source,
            operands,
        })
    }
}

/// A law evaluated on concrete operands.
#[derive(Clone, Debug)]
pub struct LawInstance {
    pub law: KleisliLaw,
    pub bases: Vec<Labeled>,
    /// `H(A⃗)`.
    pub composite: Labeled,
    /// `D(H(A⃗))`.
    pub source: ComonadInstance,
    /// `Cᵢ(Aᵢ)`.
    pub operands: Vec<ComonadInstance>,
}

impl LawInstance {
    /// `κ` on every element of `D(H(A⃗))`, by index.
    pub fn images(&self) -> Result<Vec<Term>> {
        self.source
            .carrier
            .labels()
            .iter()
            .map(|t| self.law.kappa_term(t))
            .collect()
    }

    /// Whether `x` names an element of `H(C₁A₁, …)` (evaluated on the
    /// operand carriers without building the composite).
    pub fn in_target(&self, x: &Term) -> bool {
        let mut ok = true;
        let shaped = self.law.h_term(x, |i, y| {
            ok &= self.operands.get(i).is_some_and(|c| c.carrier.index_of(y).is_some());
            Ok(y.clone())
        });
        shaped.is_ok() && ok
    }

    /// Whether relation `r` holds on the names `xs` in `H(C₁A₁, …)`.
    pub fn target_holds(&self, r: usize, xs: &[Term]) -> Result<bool> {
        let component = |i: usize, ys: &[&Term]| -> Result<bool> {
            let c = &self.operands[i].carrier;
            let idx = ys.iter().map(|y| c.lookup(y)).collect::<Result<Vec<u32>>>()?;
            Ok(c.structure.holds(r, &idx))
        };
        match self.law.operation {
            Operation::Identity => component(0, &xs.iter().collect::<Vec<_>>()),
            Operation::Coproduct | Operation::Merge => {
                if self.law.operation == Operation::Merge && xs.first() == Some(&Term::Star) {
                    // Edges from the fresh point go to the operand points.
                    let rel = self.law.merge_relation(&self.bases[0].structure)?;
                    if xs.len() != 2 || self.source.base.structure.signature().name(r) != rel {
                        return Ok(false);
                    }
                    return Ok(match &xs[1] {
                        Term::Inj(i, y) => self.operands[*i as usize].carrier.point_label() == Some(&**y),
                        _ => false,
                    });
                }
                let mut tag = None;
                let mut ys = Vec::new();
                for x in xs {
                    match x {
                        Term::Inj(i, y) if tag.is_none_or(|t| t == *i) => {
                            tag = Some(*i);
                            ys.push(&**y);
                        }
                        _ => return Ok(false),
                    }
                }
                component(tag.unwrap_or(0) as usize, &ys)
            }
            Operation::Product => {
                for i in 0..self.law.arity() {
                    let ys = xs
                        .iter()
                        .map(|x| match x {
                            Term::Tuple(ys) => Ok(&ys[i]),
                            _ => Err(bad_name(x)),
                        })
                        .collect::<Result<Vec<_>>>()?;
                    if !component(i, &ys)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// The distinguished element of `H(C₁A₁, …)`, if the operands are pointed.
    pub fn target_point(&self) -> Result<Option<Term>> {
        let points: Vec<Option<&Term>> = self.operands.iter().map(|c| c.carrier.point_label()).collect();
        if points.iter().any(Option::is_none) {
            return Ok(None);
        }
        Ok(Some(match self.law.operation {
            Operation::Merge => Term::Star,
            Operation::Product => Term::Tuple(points.into_iter().map(|p| p.unwrap().clone()).collect()),
            Operation::Identity => points[0].unwrap().clone(),
            Operation::Coproduct => return Ok(None),
        }))
    }

    /// The first tuple of `D(H(A⃗))` whose image under `κ` is not a tuple of
    /// the target (or whose image leaves the target), described.
    pub fn homomorphism_failure(&self) -> Result<Option<String>> {
        let images = self.images()?;
        for (t, x) in self.source.carrier.labels().iter().zip(&images) {
            if !self.in_target(x) {
                return Ok(Some(format!("κ({t}) = {x} is not an element of the target")));
            }
        }
        let s = &self.source.carrier.structure;
        for r in 0..s.signature().len() {
            for tuple in s.tuples(r) {
                let xs: Vec<Term> = tuple.iter().map(|&e| images[e as usize].clone()).collect();
                if !self.target_holds(r, &xs)? {
                    let names: Vec<String> = tuple
                        .iter()
                        .map(|&e| self.source.carrier.label(e).to_string())
                        .collect();
                    return Ok(Some(format!(
                        "{}({}) is not preserved",
                        s.signature().name(r),
                        names.join(", ")
                    )));
                }
            }
        }
        if let Some(p) = self.source.carrier.structure.point() {
            let img = &images[p as usize];
            if self.target_point()?.as_ref() != Some(img) {
                return Ok(Some(format!("the point is sent to {img}")));
            }
        }
        Ok(None)
    }

    /// Materialises `H(C₁A₁, …)` and `κ` as a map into it.
    pub fn materialize(&self) -> Result<(Labeled, StructureMap)> {
        let carriers: Vec<&Labeled> = self.operands.iter().map(|c| &c.carrier).collect();
        let target = self.law.compose(&carriers)?;
        let table = self
            .images()?
            .iter()
            .map(|x| target.lookup(x))
            .collect::<Result<Vec<u32>>>()?;
        Ok((target, StructureMap::new(table)))
    }
}

/// `κ` materialised: the map from `D(H(A⃗))` into `H(C₁A₁, …)`.
#[derive(Clone, Debug)]
pub struct KappaMap {
    pub instance: LawInstance,
    pub target: Labeled,
    pub map: StructureMap,
}

fn kappa(law: KleisliLaw, bases: &[Structure]) -> Result<KappaMap> {
    let instance = law.instantiate(bases)?;
    let (target, map) = instance.materialize()?;
    Ok(KappaMap { instance, target, map })
}

/// `κ` for disjoint unions: a word over `A₁ ⊎ A₂` goes to the subword of
/// letters from the summand of its last letter.
pub fn kappa_coproduct(kind: Kind, k: usize, a1: &Structure, a2: &Structure) -> Result<KappaMap> {
    let name = match kind {
        Kind::Ef => "coproduct-ef",
        Kind::Pebble => "coproduct-pebble",
        _ => return Err(Error::Unsupported(format!("no coproduct law for {kind}"))),
    };
    kappa(law(name, k, None)?, &[a1.clone(), a2.clone()])
}

/// `κ` for the merge along `rel`, from `M_{k+1}` on the merge to the merge of
/// the `M_k` carriers.
pub fn kappa_merge(k: usize, a1: &Structure, a2: &Structure, rel: &str) -> Result<KappaMap> {
    kappa(
        law("merge-modal", k, None)?.with_relation(rel),
        &[a1.clone(), a2.clone()],
    )
}

/// `κ = ⟨C(π₁), …, C(πₙ)⟩` for products.
pub fn kappa_product(kind: Kind, k: usize, family: &[Structure]) -> Result<KappaMap> {
    let name = match kind {
        Kind::Ef => "product-ef",
        Kind::Pebble => "product-pebble",
        Kind::Modal => "product-modal",
        Kind::Cos => return Err(Error::Unsupported("no product law for the closed-walk comonad".into())),
    };
    kappa(law(name, k, None)?.with_arity(family.len())?, family)
}

/// `[a₁, …, aₙ] ↦ [(0, a₁), …, (n−1, aₙ)]` from `E_k` to `P_k`.
pub fn morphism_ef_to_pebble(k: usize, a: &Structure) -> Result<KappaMap> {
    kappa(law("ef-pebble", k, None)?, std::slice::from_ref(a))
}

/// Paths to words pebbled by the parity of their position, from `M_k` to
/// `P₂` over pointed structures.
pub fn morphism_modal_to_p2(k: usize, a: &Structure) -> Result<KappaMap> {
    kappa(law("modal-p2", k, None)?, std::slice::from_ref(a))
}

/// Closed walks marked at `vᵢ` to `[(2,v₀), (1,v₁), (0,v₂), (1,v₃), …]`.
pub fn morphism_cos_to_p3(g: &Structure, trunc: usize) -> Result<KappaMap> {
    kappa(law("cos-p3", 1, Some(trunc))?, std::slice::from_ref(g))
}

#[cfg(test)]
mod tests;
