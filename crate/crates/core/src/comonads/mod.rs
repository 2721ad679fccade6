//! Game comonads in Kleisli form, materialised on finite structures.
//!
//! * `EF` (`E_k`): non-empty words of length at most `k`.
//! * `Pebble` (`P_k`): non-empty pebbled words with pebbles `0..k`, truncated
//!   at length `trunc` (default `2k`); the untruncated carrier is infinite.
//! * `Modal` (`M_k`): paths of at most `k` steps from the point.
//! * `Cos`: closed walks of length at most `trunc` (default 6) with a marked
//!   position.
//!
//! Carrier elements are named by [`Term`]s whose letters are the names of
//! base elements, so the same formulas apply to labelled composite bases.

mod laws;
mod terms;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{guard, Error, Result};
use crate::structures::{Labeled, Structure, StructureMap};
use crate::term::Term;

pub(crate) use laws::sample_rng;
pub use laws::{check_comonad_laws, LawCheck, LawReport};
pub use terms::{coextend_term, counit_term, delta_term, fmap_term, positions, relabel};

/// Default bound on carrier sizes.
pub const DEFAULT_CARRIER_LIMIT: usize = 50_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Ef,
    Pebble,
    Modal,
    Cos,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Ef => "ef",
            Kind::Pebble => "pebble",
            Kind::Modal => "modal",
            Kind::Cos => "cos",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ef" => Ok(Kind::Ef),
            "pebble" => Ok(Kind::Pebble),
            "modal" => Ok(Kind::Modal),
            "cos" => Ok(Kind::Cos),
            other => Err(Error::InvalidInput(format!("unknown comonad kind `{other}`"))),
        }
    }
}

/// Everything that determines a comonad besides its base.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    pub kind: Kind,
    /// Resource index (word length, pebble count, path depth). Unused for `Cos`.
    pub k: usize,
    /// Maximum word / walk length of the materialised carrier.
    pub trunc: usize,
    /// Carrier size guard.
    pub limit: usize,
}

impl Params {
    /// Parameters with the default truncation and guard.
    pub fn new(kind: Kind, k: usize) -> Self {
        let trunc = match kind {
            Kind::Ef | Kind::Modal => k,
            Kind::Pebble => 2 * k,
            Kind::Cos => 6,
        };
        Params {
            kind,
            k,
            trunc,
            limit: DEFAULT_CARRIER_LIMIT,
        }
    }

    pub fn with_trunc(mut self, trunc: usize) -> Self {
        if matches!(self.kind, Kind::Pebble | Kind::Cos) {
            self.trunc = trunc;
        }
        self
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn build(&self, base: &Structure) -> Result<ComonadInstance> {
        self.build_labeled(Labeled::plain(base.clone()))
    }

    pub fn build_labeled(&self, base: Labeled) -> Result<ComonadInstance> {
        build_labeled(*self, base)
    }
}

/// A materialised comonad on one base structure.
#[derive(Clone, Debug)]
pub struct ComonadInstance {
    pub params: Params,
    pub base: Labeled,
    pub carrier: Labeled,
    pub counit: StructureMap,
}

/// Builds `C(base)` for the given kind and resource index. `trunc` is
/// required for `Pebble` and `Cos`; `None` selects the default.
pub fn build(kind: Kind, base: &Structure, k: usize, trunc: Option<usize>) -> Result<ComonadInstance> {
    let mut p = Params::new(kind, k);
    if let Some(t) = trunc {
        p = p.with_trunc(t);
    }
    p.build(base)
}

fn checked_word_count(n: usize, letters_per_slot: usize, max_len: usize, limit: usize, what: &str) -> Result<usize> {
    let per = n.saturating_mul(letters_per_slot);
    let mut total: usize = 0;
    let mut layer: usize = 1;
    for _ in 0..max_len {
        layer = layer.saturating_mul(per);
        total = total.saturating_add(layer);
    }
    guard(what, total, limit)?;
    Ok(total)
}

fn validate(params: &Params, base: &Structure) -> Result<()> {
    let sig = base.signature();
    match params.kind {
        Kind::Ef | Kind::Pebble | Kind::Modal if params.k == 0 => {
            Err(Error::InvalidInput("resource index k must be at least 1".into()))
        }
        Kind::Pebble | Kind::Cos if params.trunc == 0 => {
            Err(Error::InvalidInput("truncation must be at least 1".into()))
        }
        Kind::Pebble if params.k > u8::MAX as usize => Err(Error::InvalidInput("too many pebbles".into())),
        Kind::Modal => {
            if !sig.is_modal() {
                return Err(Error::NotModal);
            }
            if !base.is_pointed() {
                return Err(Error::Pointedness("the modal comonad needs a pointed base".into()));
            }
            Ok(())
        }
        Kind::Cos => {
            if !sig.is_modal() {
                return Err(Error::NotModal);
            }
            let binaries: Vec<usize> = (0..sig.len()).filter(|&r| sig.arity(r) == 2).collect();
            let [e] = binaries[..] else {
                return Err(Error::InvalidInput(
                    "the closed-walk comonad needs exactly one binary relation".into(),
                ));
            };
            for t in base.tuples(e) {
                if t[0] == t[1] || !base.holds(e, &[t[1], t[0]]) {
                    return Err(Error::InvalidInput(
                        "the closed-walk comonad needs a loopless undirected graph".into(),
                    ));
                }
            }
            Ok(())
        }
        _ => Ok(()),
    }
}

fn build_labeled(params: Params, base: Labeled) -> Result<ComonadInstance> {
    validate(&params, &base.structure)?;
    let (carrier, counit) = match params.kind {
        Kind::Ef | Kind::Pebble => build_words(&params, &base)?,
        Kind::Modal => build_paths(&params, &base)?,
        Kind::Cos => build_walks(&params, &base)?,
    };
    Ok(ComonadInstance {
        params,
        base,
        carrier,
        counit,
    })
}

/// Words (plain or pebbled) in length-lexicographic order, with relations
/// generated from the chain of prefixes of each word.
fn build_words(params: &Params, base: &Labeled) -> Result<(Labeled, StructureMap)> {
    let pebbled = params.kind == Kind::Pebble;
    let n = base.size();
    let pebbles = if pebbled { params.k } else { 1 };
    let max_len = if pebbled { params.trunc } else { params.k };
    let what = format!("{} carrier", params.kind);
    let total = checked_word_count(n, pebbles, max_len, params.limit, &what)?;

    // Letters are (pebble, element) codes; a word is a sequence of codes.
    let letters = n * pebbles;
    let mut words: Vec<Vec<usize>> = Vec::with_capacity(total);
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(layer.len() * letters);
        for w in &layer {
            for c in 0..letters {
                let mut v = w.clone();
                v.push(c);
                next.push(v);
            }
        }
        words.extend(next.iter().cloned());
        layer = next;
    }
    // Codes are pebble-major so that pebbled words sort by (pebble, element).
    let split = |c: usize| ((c / n) as u8, c % n);
    let term = |w: &[usize]| -> Term {
        if pebbled {
            Term::Pebbled(
                w.iter()
                    .map(|&c| {
                        let (p, a) = split(c);
                        (p, base.label(a as u32).clone())
                    })
                    .collect(),
            )
        } else {
            Term::Word(w.iter().map(|&c| base.label(c as u32).clone()).collect())
        }
    };

    // Index of every word: layers are contiguous blocks, each in lexicographic order.
    let mut offsets = vec![0usize; max_len + 1];
    let mut block = 1usize;
    for l in 1..=max_len {
        block *= letters;
        offsets[l] = offsets[l - 1] + block;
    }
    let index_of = |w: &[usize]| -> u32 {
        let code = w.iter().fold(0usize, |acc, &c| acc * letters + c);
        (offsets[w.len() - 1] + code) as u32
    };

    let sig = base.structure.signature().clone();
    let mut carrier = Structure::new(sig.clone(), words.len());
    let mut counit = Vec::with_capacity(words.len());
    let mut prefix_ids = Vec::new();
    let mut lens = Vec::new();
    let mut last = Vec::new();
    for (idx, w) in words.iter().enumerate() {
        debug_assert_eq!(index_of(w) as usize, idx);
        let len = w.len();
        counit.push(split(w[len - 1]).1 as u32);
        prefix_ids.clear();
        prefix_ids.extend((1..=len).map(|l| index_of(&w[..l])));
        for r in 0..sig.len() {
            let ar = sig.arity(r);
            lens.clear();
            lens.resize(ar, 1usize);
            // Enumerate prefix-length tuples in which the full word occurs.
            loop {
                if lens.contains(&len) {
                    last.clear();
                    last.extend(lens.iter().map(|&l| split(w[l - 1]).1 as u32));
                    let ok = base.structure.holds(r, &last) && (!pebbled || pebble_condition(w, &lens, n));
                    if ok {
                        let t = lens.iter().map(|&l| prefix_ids[l - 1]).collect();
                        carrier.insert(r, t)?;
                    }
                }
                // Odometer increment.
                let mut done = true;
                let mut i = ar;
                while i > 0 {
                    i -= 1;
                    if lens[i] < len {
                        lens[i] += 1;
                        for l in lens.iter_mut().skip(i + 1) {
                            *l = 1;
                        }
                        done = false;
                        break;
                    }
                }
                if done {
                    break;
                }
            }
        }
    }
    let labels = words.iter().map(|w| term(w)).collect();
    let point = base.structure.point().map(|p| {
        let code = p as usize; // pebble 0, element p
        index_of(&[code])
    });
    let carrier = carrier.with_point(point)?;
    Ok((Labeled::new(carrier, labels)?, StructureMap::new(counit)))
}

/// For prefixes of `w` of the given lengths: whenever one is a proper prefix of
/// another (equivalently, of the whole word), its last pebble does not occur
/// again in the remainder of the whole word.
fn pebble_condition(w: &[usize], lens: &[usize], n: usize) -> bool {
    let len = w.len();
    lens.iter().all(|&l| {
        l == len || {
            let p = w[l - 1] / n;
            w[l..].iter().all(|&c| c / n != p)
        }
    })
}

/// Paths from the point, breadth first; within a length, ordered by
/// (relation, successor) sequences.
fn build_paths(params: &Params, base: &Labeled) -> Result<(Labeled, StructureMap)> {
    let s = &base.structure;
    let sig = s.signature().clone();
    let point = s.point().expect("validated");
    let binaries: Vec<usize> = (0..sig.len()).filter(|&r| sig.arity(r) == 2).collect();
    let unaries: Vec<usize> = (0..sig.len()).filter(|&r| sig.arity(r) == 1).collect();
    let mut succ: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); s.size()]; sig.len()];
    for &r in &binaries {
        for t in s.tuples(r) {
            succ[r][t[0] as usize].push(t[1]);
        }
    }
    // (end element, steps as (relation, element)) per path
    let mut paths: Vec<(u32, Vec<(u16, u32)>)> = vec![(point, Vec::new())];
    let mut edges: Vec<(usize, u32, u32)> = Vec::new();
    let mut frontier = 0..1usize;
    for _ in 0..params.k {
        let start = paths.len();
        for parent in frontier.clone() {
            let (end, steps) = paths[parent].clone();
            for &r in &binaries {
                for &y in &succ[r][end as usize] {
                    let mut st = steps.clone();
                    st.push((r as u16, y));
                    edges.push((r, parent as u32, paths.len() as u32));
                    paths.push((y, st));
                    guard(format!("{} carrier", params.kind), paths.len(), params.limit)?;
                }
            }
        }
        frontier = start..paths.len();
    }
    let mut carrier = Structure::new(sig, paths.len());
    for (r, from, to) in edges {
        carrier.insert(r, vec![from, to])?;
    }
    for (i, (end, _)) in paths.iter().enumerate() {
        for &r in &unaries {
            if s.holds(r, &[*end]) {
                carrier.insert(r, vec![i as u32])?;
            }
        }
    }
    let carrier = carrier.with_point(Some(0))?;
    let start = base.label(point).clone();
    let labels = paths
        .iter()
        .map(|(_, steps)| {
            Term::path(
                start.clone(),
                steps.iter().map(|&(r, y)| (r, base.label(y).clone())).collect(),
            )
        })
        .collect();
    let counit = paths.iter().map(|(end, _)| *end).collect();
    Ok((Labeled::new(carrier, labels)?, StructureMap::new(counit)))
}

/// Closed walks `v0 .. v(L-1)` (with `v(L-1)` adjacent to `v0`) of length
/// `2..=trunc`, each with every marked position.
fn build_walks(params: &Params, base: &Labeled) -> Result<(Labeled, StructureMap)> {
    let s = &base.structure;
    let sig = s.signature().clone();
    let e = (0..sig.len()).find(|&r| sig.arity(r) == 2).expect("validated");
    let unaries: Vec<usize> = (0..sig.len()).filter(|&r| sig.arity(r) == 1).collect();
    let n = s.size() as u32;
    let mut walks: Vec<Vec<u32>> = Vec::new();
    for len in 2..=params.trunc {
        let mut stack: Vec<Vec<u32>> = (0..n).rev().map(|v| vec![v]).collect();
        while let Some(w) = stack.pop() {
            if w.len() == len {
                if s.holds(e, &[w[len - 1], w[0]]) {
                    walks.push(w);
                    guard(format!("{} carrier", params.kind), walks.len() * len, params.limit)?;
                }
                continue;
            }
            let x = *w.last().unwrap();
            for y in (0..n).rev() {
                if s.holds(e, &[x, y]) {
                    let mut v = w.clone();
                    v.push(y);
                    stack.push(v);
                }
            }
        }
    }
    let total: usize = walks.iter().map(|w| w.len()).sum();
    guard(format!("{} carrier", params.kind), total, params.limit)?;
    let mut carrier = Structure::new(sig, total);
    let mut labels = Vec::with_capacity(total);
    let mut counit = Vec::with_capacity(total);
    let mut offset = 0u32;
    for w in &walks {
        let len = w.len() as u32;
        let named: Vec<Term> = w.iter().map(|&v| base.label(v).clone()).collect();
        for i in 0..len {
            labels.push(Term::Walk(named.clone(), i as u16));
            counit.push(w[i as usize]);
            let j = (i + 1) % len;
            carrier.insert(e, vec![offset + i, offset + j])?;
            carrier.insert(e, vec![offset + j, offset + i])?;
            for &r in &unaries {
                if s.holds(r, &[w[i as usize]]) {
                    carrier.insert(r, vec![offset + i])?;
                }
            }
        }
        offset += len;
    }
    Ok((Labeled::new(carrier, labels)?, StructureMap::new(counit)))
}

/// A Kleisli morphism `C(A) -> B`: a homomorphism from the carrier of
/// `source` to `target`, by carrier index.
#[derive(Clone, Debug)]
pub struct KleisliMorphism {
    pub source: ComonadInstance,
    pub target: Labeled,
    pub map: StructureMap,
}

impl KleisliMorphism {
    /// Checks that `map` is a homomorphism `C(A) -> B`.
    pub fn new(source: ComonadInstance, target: Labeled, map: StructureMap) -> Result<Self> {
        source.check_source(&map, &target)?;
        if !map.is_homomorphism(&source.carrier.structure, &target.structure)? {
            return Err(Error::InvalidInput(
                "a Kleisli morphism must be a homomorphism from the carrier".into(),
            ));
        }
        Ok(KleisliMorphism { source, target, map })
    }

    /// The counit `ε: C(A) -> A`.
    pub fn counit(source: &ComonadInstance) -> Self {
        KleisliMorphism {
            source: source.clone(),
            target: source.base.clone(),
            map: source.counit.clone(),
        }
    }

    /// The name of the image of a carrier element name.
    pub fn apply_term(&self, t: &Term) -> Result<Term> {
        self.source.apply_named(&self.map, &self.target, t)
    }
}

impl ComonadInstance {
    pub fn kind(&self) -> Kind {
        self.params.kind
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn size(&self) -> usize {
        self.carrier.size()
    }

    /// The same comonad applied to another base.
    pub fn rebuild_on(&self, base: Labeled) -> Result<ComonadInstance> {
        self.params.build_labeled(base)
    }

    /// Counit on a carrier element name, as a base index.
    pub fn counit_index(&self, t: &Term) -> Result<u32> {
        self.base.lookup(counit_term(t)?)
    }

    /// Human-readable names of carrier elements, by index.
    pub fn legend(&self) -> Vec<String> {
        self.carrier.labels().iter().map(|t| t.to_string()).collect()
    }

    fn check_source(&self, f: &StructureMap, target: &Labeled) -> Result<()> {
        if f.table.len() != self.size() {
            return Err(Error::InvalidInput(format!(
                "Kleisli morphism has {} entries, carrier has {}",
                f.table.len(),
                self.size()
            )));
        }
        if let Some(&y) = f.table.iter().find(|&&y| y as usize >= target.size()) {
            return Err(Error::OutOfRange {
                element: y,
                size: target.size(),
            });
        }
        Ok(())
    }

    /// The name of `f(t)` for a carrier element name `t`.
    fn apply_named(&self, f: &StructureMap, target: &Labeled, t: &Term) -> Result<Term> {
        let i = self.carrier.lookup(t)?;
        Ok(target.label(f.apply(i)).clone())
    }
}

/// `ε: C(A) -> A`.
pub fn counit(c: &ComonadInstance) -> StructureMap {
    c.counit.clone()
}

/// `f*: C(A) -> C(B)` for a Kleisli morphism `f: C(A) -> B`. Returns the
/// materialised `C(B)` together with the map.
pub fn coextend(c: &ComonadInstance, f: &StructureMap, target: &Labeled) -> Result<(ComonadInstance, StructureMap)> {
    c.check_source(f, target)?;
    let cb = c.rebuild_on(target.clone())?;
    let map = coextend_into(c, f, target, &cb)?;
    Ok((cb, map))
}

/// `f*` into an already materialised `C(B)`.
pub fn coextend_into(
    c: &ComonadInstance,
    f: &StructureMap,
    target: &Labeled,
    cb: &ComonadInstance,
) -> Result<StructureMap> {
    c.check_source(f, target)?;
    let table = c
        .carrier
        .labels()
        .iter()
        .map(|t| {
            let img = coextend_term(t, |p| c.apply_named(f, target, p))?;
            cb.carrier.lookup(&img)
        })
        .collect::<Result<Vec<u32>>>()?;
    Ok(StructureMap::new(table))
}

/// `δ = id*: C(A) -> C(C(A))`. Returns the materialised `C(C(A))` (subject to
/// the carrier guard) together with the map.
pub fn comultiplication(c: &ComonadInstance) -> Result<(ComonadInstance, StructureMap)> {
    let id = StructureMap::identity(c.size());
    coextend(c, &id, &c.carrier)
}

/// `C(g) = (g ∘ ε)*: C(A) -> C(B)` for a homomorphism `g: A -> B`.
pub fn fmap(c: &ComonadInstance, g: &StructureMap, target: &Labeled) -> Result<(ComonadInstance, StructureMap)> {
    if g.table.len() != c.base.size() {
        return Err(Error::InvalidInput(format!(
            "map has {} entries, base has {}",
            g.table.len(),
            c.base.size()
        )));
    }
    let kleisli = g.after(&c.counit);
    coextend(c, &kleisli, target)
}
