//! Coalgebras of the EF and modal comonads on finite structures: validation,
//! the forest orders they induce, path embeddings, pathwise-embeddings, open
//! maps, equalisers, and the lifting of structure operations along Kleisli
//! laws.
//!
//! A coalgebra `α: A -> C(A)` sends each element to a word (or path) that
//! ends in the element itself; the earlier letters are its predecessors, so
//! `x ⊑ y` iff `α(x)` is a prefix of `α(y)`. Coalgebras keep `α` as element
//! names, and membership and relations of `C(A)` are evaluated on names, so
//! the carrier is only built when an index-based map is asked for.

mod lifting;

use serde::Serialize;

use crate::comonads::{counit_term, delta_term, fmap_term, ComonadInstance, Kind, Params};
use crate::error::{Error, Result};
use crate::structures::{Labeled, Structure, StructureMap};
use crate::term::Term;

pub use lifting::{
    bimorph_correspondence, bimorph_correspondence_with, check_coproduct_decompositions, cofree_comparison,
    is_bimorphism, lifted_map, lifted_op, BimorphismReport, CofreeComparison, DecompositionReport, Lifted,
};

/// `(A, α)` for the comonad described by `params`.
#[derive(Clone, Debug)]
pub struct Coalgebra {
    pub params: Params,
    pub base: Labeled,
    /// `α(x)` for every element, as a name in `C(A)`.
    pub alpha: Vec<Term>,
}

fn finite_kind(kind: Kind) -> Result<()> {
    match kind {
        Kind::Ef | Kind::Modal => Ok(()),
        _ => Err(Error::Unsupported(format!(
            "coalgebras are handled for the EF and modal comonads only ({kind} has an infinite cofree carrier)"
        ))),
    }
}

/// Whether `t` names an element of `C(A)`.
pub(crate) fn in_carrier(params: &Params, base: &Labeled, t: &Term) -> bool {
    match (params.kind, t) {
        (Kind::Ef, Term::Word(w)) => {
            !w.is_empty() && w.len() <= params.k && w.iter().all(|a| base.index_of(a).is_some())
        }
        (Kind::Modal, Term::Path(start, steps)) => {
            let s = &base.structure;
            if steps.len() > params.k || base.point_label() != Some(&**start) {
                return false;
            }
            let mut prev = s.point().expect("modal bases are pointed");
            for (r, y) in steps {
                let (r, Some(y)) = (*r as usize, base.index_of(y)) else {
                    return false;
                };
                if r >= s.signature().len() || s.signature().arity(r) != 2 || !s.holds(r, &[prev, y]) {
                    return false;
                }
                prev = y;
            }
            true
        }
        _ => false,
    }
}

/// Whether relation `r` holds on the names `ts` in `C(A)` (all of which must
/// be carrier elements).
pub(crate) fn carrier_holds(params: &Params, base: &Labeled, r: usize, ts: &[&Term]) -> Result<bool> {
    let last = |t: &Term| -> Result<u32> { base.lookup(counit_term(t)?) };
    match params.kind {
        Kind::Ef => {
            for (i, a) in ts.iter().enumerate() {
                for b in &ts[i + 1..] {
                    if !a.is_prefix_of(b) && !b.is_prefix_of(a) {
                        return Ok(false);
                    }
                }
            }
            let xs = ts.iter().map(|t| last(t)).collect::<Result<Vec<u32>>>()?;
            Ok(base.structure.holds(r, &xs))
        }
        Kind::Modal => match ts {
            [t] => Ok(base.structure.holds(r, &[last(t)?])),
            [Term::Path(s0, a), Term::Path(s1, b)] => Ok(s0 == s1
                && b.len() == a.len() + 1
                && b[..a.len()] == a[..]
                && b.last().map(|(q, _)| *q as usize) == Some(r)),
            _ => Ok(false),
        },
        _ => finite_kind(params.kind).map(|_| false),
    }
}

/// The distinguished element of `C(A)` for a pointed base.
pub(crate) fn carrier_point(params: &Params, base: &Labeled) -> Option<Term> {
    let p = base.point_label()?.clone();
    Some(match params.kind {
        Kind::Modal => Term::path(p, vec![]),
        _ => Term::Word(vec![p]),
    })
}

impl Coalgebra {
    /// A coalgebra candidate; [`check_coalgebra`] decides whether the laws hold.
    pub fn new(params: Params, base: Labeled, alpha: Vec<Term>) -> Result<Self> {
        finite_kind(params.kind)?;
        if params.k == 0 {
            return Err(Error::InvalidInput("resource index k must be at least 1".into()));
        }
        if params.kind == Kind::Modal {
            if !base.structure.signature().is_modal() {
                return Err(Error::NotModal);
            }
            if !base.structure.is_pointed() {
                return Err(Error::Pointedness("the modal comonad needs a pointed base".into()));
            }
        }
        if alpha.len() != base.size() {
            return Err(Error::InvalidInput(format!(
                "α has {} entries, the base has {}",
                alpha.len(),
                base.size()
            )));
        }
        if let Some(t) = alpha.iter().find(|t| !in_carrier(&params, &base, t)) {
            return Err(Error::InvalidInput(format!(
                "α value {t} is not an element of the carrier"
            )));
        }
        Ok(Coalgebra { params, base, alpha })
    }

    /// `α` given by carrier indices of a materialised comonad.
    pub fn from_map(comonad: &ComonadInstance, alpha: &StructureMap) -> Result<Self> {
        if alpha.table.len() != comonad.base.size() {
            return Err(Error::InvalidInput("α must have one entry per base element".into()));
        }
        let terms = alpha
            .table
            .iter()
            .map(|&i| {
                if (i as usize) < comonad.size() {
                    Ok(comonad.carrier.label(i).clone())
                } else {
                    Err(Error::OutOfRange {
                        element: i,
                        size: comonad.size(),
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Coalgebra::new(comonad.params, comonad.base.clone(), terms)
    }

    /// The coalgebra sending each element to the one-letter word (or empty
    /// path) on it.
    pub fn singleton(params: Params, base: Labeled) -> Result<Self> {
        let alpha = base
            .labels()
            .iter()
            .map(|t| match params.kind {
                Kind::Modal => Term::path(t.clone(), vec![]),
                _ => Term::Word(vec![t.clone()]),
            })
            .collect();
        Coalgebra::new(params, base, alpha)
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }

    /// Materialises `C(A)` and returns `α` as a map into it.
    pub fn materialize(&self) -> Result<(ComonadInstance, StructureMap)> {
        let c = self.params.build_labeled(self.base.clone())?;
        let table = self
            .alpha
            .iter()
            .map(|t| c.carrier.lookup(t))
            .collect::<Result<Vec<_>>>()?;
        Ok((c, StructureMap::new(table)))
    }

    /// `α(x)`.
    pub fn alpha_term(&self, x: u32) -> &Term {
        &self.alpha[x as usize]
    }

    /// `α` on element names.
    pub fn alpha_named(&self, t: &Term) -> Result<Term> {
        Ok(self.alpha_term(self.base.lookup(t)?).clone())
    }

    /// The elements named by the letters of `α(x)`, in order.
    pub fn chain(&self, x: u32) -> Result<Vec<u32>> {
        self.alpha_term(x)
            .letters()
            .into_iter()
            .map(|t| self.base.lookup(t))
            .collect()
    }

    /// `x ⊑ y`.
    pub fn below(&self, x: u32, y: u32) -> bool {
        self.alpha_term(x).is_prefix_of(self.alpha_term(y))
    }

    /// The sub-coalgebra on `elems` (closed under taking letters of `α`),
    /// with the inclusion into `self`.
    pub fn restrict(&self, elems: &[u32]) -> Result<(Coalgebra, StructureMap)> {
        let structure = self.base.structure.induced(elems);
        if self.base.structure.is_pointed() && !structure.is_pointed() {
            return Err(Error::Pointedness("a sub-coalgebra must contain the point".into()));
        }
        let labels = elems.iter().map(|&e| self.base.label(e).clone()).collect();
        let base = Labeled::new(structure, labels)?;
        let alpha = elems.iter().map(|&e| self.alpha_term(e).clone()).collect();
        let sub = Coalgebra::new(self.params, base, alpha)?;
        Ok((sub, StructureMap::new(elems.to_vec())))
    }
}

/// Outcome of [`check_coalgebra`].
#[derive(Clone, Debug, Serialize)]
pub struct CoalgebraReport {
    pub homomorphism: bool,
    pub counit_law: bool,
    pub comultiplication_law: bool,
    /// The first offending element or tuple.
    pub failure: Option<String>,
}

impl CoalgebraReport {
    pub fn passed(&self) -> bool {
        self.homomorphism && self.counit_law && self.comultiplication_law
    }
}

/// Checks that `α` is a homomorphism, `ε ∘ α = id` and `δ ∘ α = C(α) ∘ α`.
pub fn check_coalgebra(c: &Coalgebra) -> Result<CoalgebraReport> {
    finite_kind(c.params.kind)?;
    let base = &c.base;
    let s = &base.structure;
    let mut report = CoalgebraReport {
        homomorphism: true,
        counit_law: true,
        comultiplication_law: true,
        failure: None,
    };
    'rels: for r in 0..s.signature().len() {
        for t in s.tuples(r) {
            let images: Vec<&Term> = t.iter().map(|&x| c.alpha_term(x)).collect();
            if !carrier_holds(&c.params, base, r, &images)? {
                let names: Vec<String> = t.iter().map(|&x| base.label(x).to_string()).collect();
                report.homomorphism = false;
                report.failure = Some(format!(
                    "α does not preserve {}({})",
                    s.signature().name(r),
                    names.join(", ")
                ));
                break 'rels;
            }
        }
    }
    if let Some(p) = s.point() {
        if Some(c.alpha_term(p)) != carrier_point(&c.params, base).as_ref() {
            report.homomorphism = false;
            report
                .failure
                .get_or_insert_with(|| "α does not preserve the point".into());
        }
    }
    for x in 0..base.size() as u32 {
        let a = c.alpha_term(x);
        let last = counit_term(a)?;
        if last != base.label(x) {
            report.counit_law = false;
            report
                .failure
                .get_or_insert_with(|| format!("ε(α({})) = {last}", base.label(x)));
        }
        let lhs = delta_term(a)?;
        let rhs = fmap_term(a, |y| c.alpha_named(y));
        if rhs.as_ref().ok() != Some(&lhs) {
            report.comultiplication_law = false;
            report
                .failure
                .get_or_insert_with(|| format!("δ(α({0})) ≠ C(α)(α({0}))", base.label(x)));
        }
    }
    Ok(report)
}

/// The cofree coalgebra `(C(A), δ)`.
pub fn cofree(c: &ComonadInstance) -> Result<Coalgebra> {
    finite_kind(c.kind())?;
    let alpha = c.carrier.labels().iter().map(delta_term).collect::<Result<Vec<_>>>()?;
    Coalgebra::new(c.params, c.carrier.clone(), alpha)
}

/// The order `⊑` induced by a coalgebra.
#[derive(Clone, Debug, Serialize)]
pub struct ForestOrder {
    /// `leq[x][y]` iff `x ⊑ y`.
    pub leq: Vec<Vec<bool>>,
    /// The immediate predecessor of each element (`None` for roots).
    pub parent: Vec<Option<u32>>,
    /// Height of each element, roots at 1 (at most `k` for EF, `k + 1` for
    /// modal paths, whose root is the empty path).
    pub height: Vec<usize>,
}

impl ForestOrder {
    pub fn depth(&self) -> usize {
        self.height.iter().copied().max().unwrap_or(0)
    }

    pub fn roots(&self) -> Vec<u32> {
        (0..self.parent.len() as u32)
            .filter(|&x| self.parent[x as usize].is_none())
            .collect()
    }

    pub fn children(&self) -> Vec<Vec<u32>> {
        let mut children = vec![Vec::new(); self.parent.len()];
        for (x, p) in self.parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p as usize].push(x as u32);
            }
        }
        children
    }
}

/// The forest order of a coalgebra. Errors if the predecessors of some
/// element are not named by its own `α` chain, or if a relation tuple
/// contains two incomparable elements.
pub fn forest_order(c: &Coalgebra) -> Result<ForestOrder> {
    let n = c.size();
    let leq: Vec<Vec<bool>> = (0..n as u32)
        .map(|x| (0..n as u32).map(|y| c.below(x, y)).collect())
        .collect();
    let mut parent = vec![None; n];
    let mut height = vec![0; n];
    for x in 0..n as u32 {
        let chain = c.chain(x)?;
        if chain.last() != Some(&x) || chain.iter().any(|&p| !leq[p as usize][x as usize]) {
            return Err(Error::InvalidInput(format!(
                "the predecessors of {} do not form a chain",
                c.base.label(x)
            )));
        }
        height[x as usize] = chain.len();
        parent[x as usize] = chain.len().checked_sub(2).map(|i| chain[i]);
    }
    let s = &c.base.structure;
    for r in 0..s.signature().len() {
        for t in s.tuples(r) {
            let comparable = t.iter().all(|&x| {
                t.iter()
                    .all(|&y| leq[x as usize][y as usize] || leq[y as usize][x as usize])
            });
            if !comparable {
                let names: Vec<String> = t.iter().map(|&e| c.base.label(e).to_string()).collect();
                return Err(Error::InvalidInput(format!(
                    "the forest order is not compatible with {}({})",
                    s.signature().name(r),
                    names.join(", ")
                )));
            }
        }
    }
    Ok(ForestOrder { leq, parent, height })
}

/// Whether the forest order is a (non-empty) linear order.
pub fn is_path(c: &Coalgebra) -> Result<bool> {
    let n = c.size() as u32;
    Ok(n > 0 && (0..n).all(|x| (0..n).all(|y| c.below(x, y) || c.below(y, x))))
}

/// Whether `f` is a coalgebra morphism `(A, α) -> (B, β)`: a homomorphism
/// with `β ∘ f = C(f) ∘ α`.
pub fn is_coalgebra_morphism(f: &StructureMap, alpha: &Coalgebra, beta: &Coalgebra) -> Result<bool> {
    if alpha.params != beta.params {
        return Err(Error::InvalidInput("the coalgebras are over different comonads".into()));
    }
    if f.table.len() != alpha.size() || f.table.iter().any(|&y| y as usize >= beta.size()) {
        return Ok(false);
    }
    if !f.is_homomorphism(&alpha.base.structure, &beta.base.structure)? {
        return Ok(false);
    }
    let fname = |t: &Term| -> Result<Term> { Ok(beta.base.label(f.apply(alpha.base.lookup(t)?)).clone()) };
    for x in 0..alpha.size() as u32 {
        if &fmap_term(alpha.alpha_term(x), fname)? != beta.alpha_term(f.apply(x)) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn require_morphism(f: &StructureMap, alpha: &Coalgebra, beta: &Coalgebra) -> Result<()> {
    if !is_coalgebra_morphism(f, alpha, beta)? {
        return Err(Error::InvalidInput("the map is not a coalgebra morphism".into()));
    }
    Ok(())
}

/// All coalgebra morphisms `(A, α) -> (B, β)`, in lexicographic order of
/// their tables.
///
/// Morphisms preserve the forest: roots go to roots and the children of `x`
/// to children of `f(x)` (along the same relation, for modal paths), so the
/// search follows the forest of `A` instead of trying every function.
pub fn coalgebra_morphisms(alpha: &Coalgebra, beta: &Coalgebra) -> Result<Vec<StructureMap>> {
    if alpha.params != beta.params {
        return Err(Error::InvalidInput("the coalgebras are over different comonads".into()));
    }
    let fa = forest_order(alpha)?;
    let fb = forest_order(beta)?;
    let mut order: Vec<u32> = (0..alpha.size() as u32).collect();
    order.sort_by_key(|&x| (fa.height[x as usize], x));
    let roots_b = fb.roots();
    let children_b = fb.children();
    let mut out = Vec::new();
    let mut table = vec![u32::MAX; alpha.size()];
    search_morphisms(alpha, beta, &fa, &roots_b, &children_b, &order, 0, &mut table, &mut out)?;
    out.sort_by(|a: &StructureMap, b| a.table.cmp(&b.table));
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search_morphisms(
    alpha: &Coalgebra,
    beta: &Coalgebra,
    fa: &ForestOrder,
    roots_b: &[u32],
    children_b: &[Vec<u32>],
    order: &[u32],
    i: usize,
    table: &mut Vec<u32>,
    out: &mut Vec<StructureMap>,
) -> Result<()> {
    if i == order.len() {
        let f = StructureMap::new(table.clone());
        if is_coalgebra_morphism(&f, alpha, beta)? {
            out.push(f);
        }
        return Ok(());
    }
    let x = order[i];
    let candidates = match fa.parent[x as usize] {
        None => roots_b,
        Some(p) => &children_b[table[p as usize] as usize][..],
    };
    for &y in candidates {
        // C(f)(α(x)) must be β(y); the letters before the last are fixed by
        // the ancestors already placed.
        let expected = fmap_term(alpha.alpha_term(x), |t| {
            let e = alpha.base.lookup(t)?;
            Ok(beta.base.label(if e == x { y } else { table[e as usize] }).clone())
        })?;
        if &expected != beta.alpha_term(y) {
            continue;
        }
        table[x as usize] = y;
        search_morphisms(alpha, beta, fa, roots_b, children_b, order, i + 1, table, out)?;
        table[x as usize] = u32::MAX;
    }
    Ok(())
}

/// The path sub-coalgebras `↓x` as chains from a root. Every path embedding
/// factors through one of these.
pub fn path_chains(c: &Coalgebra) -> Result<Vec<Vec<u32>>> {
    (0..c.size() as u32).map(|x| c.chain(x)).collect()
}

/// Whether `f` is an embedding on every path sub-coalgebra of its source.
pub fn is_pathwise_embedding(f: &StructureMap, alpha: &Coalgebra, beta: &Coalgebra) -> Result<bool> {
    require_morphism(f, alpha, beta)?;
    let (xs, ys) = (&alpha.base.structure, &beta.base.structure);
    for chain in path_chains(alpha)? {
        let image = StructureMap::new(chain.iter().map(|&e| f.apply(e)).collect());
        if !image.is_embedding(&xs.induced(&chain), ys)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `f` has the path-lifting property: for path embeddings
/// `e: P ↪ X`, `m: Q ↪ Y` and a path embedding `g: P ↪ Q` with
/// `f ∘ e = m ∘ g`, there is a coalgebra morphism `d: Q -> X` with
/// `d ∘ g = e` and `f ∘ d = m`.
///
/// Up to isomorphism the path embeddings into a coalgebra are the inclusions
/// of `↓x`, and morphisms preserve heights, so a square is a pair of chains
/// `↓x`, `↓y` with `f(↓x)` a prefix of `↓y`; a diagonal is a chain through
/// `x` mapped by `f` onto `↓y` whose section is a homomorphism.
pub fn is_open(f: &StructureMap, alpha: &Coalgebra, beta: &Coalgebra) -> Result<bool> {
    require_morphism(f, alpha, beta)?;
    let (xs, ys) = (&alpha.base.structure, &beta.base.structure);
    let children = forest_order(alpha)?.children();
    let beta_chains = path_chains(beta)?;
    for p in path_chains(alpha)? {
        let image: Vec<u32> = p.iter().map(|&e| f.apply(e)).collect();
        let prefix: Vec<u32> = (0..p.len() as u32).collect();
        for q in &beta_chains {
            if image.len() > q.len() || image[..] != q[..image.len()] {
                continue;
            }
            let qs = ys.induced(q);
            let g = StructureMap::new(prefix.clone());
            if !g.is_embedding(&xs.induced(&p), &qs.induced(&prefix))? {
                continue;
            }
            if !has_diagonal(f, xs, &qs, q, &mut p.clone(), &children)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Depth-first search for a chain extending `chain` that `f` maps onto `q`
/// and whose section `q_i ↦ chain_i` is a homomorphism from `qs` (the
/// structure induced on `q`).
fn has_diagonal(
    f: &StructureMap,
    xs: &Structure,
    qs: &Structure,
    q: &[u32],
    chain: &mut Vec<u32>,
    children: &[Vec<u32>],
) -> Result<bool> {
    if chain.len() == q.len() {
        return StructureMap::new(chain.clone()).is_homomorphism(qs, xs);
    }
    let target = q[chain.len()];
    let last = *chain.last().expect("paths are non-empty");
    for &c in &children[last as usize] {
        if f.apply(c) == target {
            chain.push(c);
            if has_diagonal(f, xs, qs, q, chain, children)? {
                return Ok(true);
            }
            chain.pop();
        }
    }
    Ok(false)
}

/// The largest set of elements satisfying `ok` and closed under taking the
/// letters of `α`.
pub fn greatest_closed(c: &Coalgebra, mut ok: impl FnMut(u32) -> Result<bool>) -> Result<Vec<u32>> {
    let n = c.size();
    let mut inside = (0..n as u32).map(&mut ok).collect::<Result<Vec<bool>>>()?;
    let chains = path_chains(c)?;
    loop {
        let next: Vec<bool> = (0..n)
            .map(|x| inside[x] && chains[x].iter().all(|&p| inside[p as usize]))
            .collect();
        if next == inside {
            break;
        }
        inside = next;
    }
    Ok((0..n as u32).filter(|&x| inside[x as usize]).collect())
}

/// The equaliser of two coalgebra morphisms `f, g: (A, α) -> (B, β)`: the
/// largest sub-coalgebra of `A` on which they agree, with its inclusion.
pub fn equalizer_em(
    f: &StructureMap,
    g: &StructureMap,
    alpha: &Coalgebra,
    beta: &Coalgebra,
) -> Result<(Coalgebra, StructureMap)> {
    require_morphism(f, alpha, beta)?;
    require_morphism(g, alpha, beta)?;
    let keep = greatest_closed(alpha, |x| Ok(f.apply(x) == g.apply(x)))?;
    alpha.restrict(&keep)
}
