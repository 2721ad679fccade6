//! Weisfeiler–Leman refinement of `d`-tuples for the counting game without
//! equality.
//!
//! The colour of a `d`-tuple `t` starts as its atomic type (which relations
//! hold on which index tuples over `t`; equal entries are not recorded) and is
//! refined by the multiset, over all elements `x`, of the atomic type of
//! `(t, x)` together with the colours of `t[1/x], …, t[d/x]`. Colours are
//! interned jointly for both structures, so equal colours mean the same thing
//! on both sides. Two structures are compared through the multisets of
//! stable colours of their constant tuples `(a, …, a)`: a pebble position
//! with repeated pairs is the same as one with fewer pebbles, so the constant
//! tuples stand for the positions Duplicator reaches after the first round.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::structures::Structure;

use super::atoms::Dense;

/// Largest number of `(d+1)`-tuples per structure.
pub const MAX_WL_TUPLES: usize = 1 << 22;

struct Interner(HashMap<Vec<u32>, u32>);

impl Interner {
    fn id(&mut self, key: Vec<u32>) -> u32 {
        let next = self.0.len() as u32;
        *self.0.entry(key).or_insert(next)
    }
}

/// Bits of the atomic type of `elems` (no equality), as a key.
fn atomic_type(d: &Dense, elems: &[u32]) -> Vec<u32> {
    let len = elems.len();
    let mut key = Vec::new();
    let mut idx = Vec::new();
    for r in 0..d.relations() {
        let ar = d.arity(r);
        let count = len.pow(ar as u32);
        let mut word = 0u32;
        let mut bit = 0;
        for code in 0..count {
            idx.clear();
            let mut c = code;
            for _ in 0..ar {
                idx.push(elems[c % len]);
                c /= len;
            }
            if d.holds(r, &idx) {
                word |= 1 << bit;
            }
            bit += 1;
            if bit == 32 {
                key.push(word);
                word = 0;
                bit = 0;
            }
        }
        key.push(word);
    }
    key
}

struct Side {
    n: usize,
    /// `atp[t * n + x]`: interned atomic type of `(t, x)`.
    atp: Vec<u32>,
    colour: Vec<u32>,
}

fn tuple_elems(t: usize, n: usize, d: usize) -> Vec<u32> {
    let mut out = vec![0u32; d];
    let mut c = t;
    for slot in out.iter_mut().rev() {
        *slot = (c % n) as u32;
        c /= n;
    }
    out
}

/// Whether the stable `d`-dimensional colourings of `a` and `b` have the same
/// multiset of colours on constant tuples (`d ≥ 1`).
pub(crate) fn wl_equivalent(a: &Structure, b: &Structure, d: usize) -> Result<bool> {
    if d == 0 {
        return Err(Error::InvalidInput("WL dimension must be at least 1".into()));
    }
    if a.size() != b.size() {
        return Ok(false);
    }
    let n = a.size();
    let tuples = n.checked_pow(d as u32 + 1).filter(|&t| t <= MAX_WL_TUPLES);
    if tuples.is_none() {
        return Err(Error::GuardExceeded {
            what: "WL tuples".into(),
            size: n.saturating_pow(d as u32 + 1),
            limit: MAX_WL_TUPLES,
        });
    }
    let (da, db) = (Dense::new(a), Dense::new(b));
    let mut types = Interner(HashMap::new());
    let mut colours = Interner(HashMap::new());
    let count = n.pow(d as u32);
    let mut sides: Vec<Side> = [&da, &db]
        .iter()
        .map(|dense| {
            let mut atp = Vec::with_capacity(count * n);
            let mut colour = Vec::with_capacity(count);
            for t in 0..count {
                let mut elems = tuple_elems(t, n, d);
                colour.push(colours.id(atomic_type(dense, &elems)));
                elems.push(0);
                for x in 0..n as u32 {
                    elems[d] = x;
                    atp.push(types.id(atomic_type(dense, &elems)));
                }
            }
            Side { n, atp, colour }
        })
        .collect();
    let distinct = |sides: &[Side]| {
        let mut all: Vec<u32> = sides.iter().flat_map(|s| s.colour.iter().copied()).collect();
        all.sort_unstable();
        all.dedup();
        all.len()
    };
    let mut classes = distinct(&sides);
    let weights: Vec<usize> = (0..d).map(|i| n.pow((d - 1 - i) as u32)).collect();
    loop {
        let mut next = Interner(HashMap::new());
        let refined: Vec<Vec<u32>> = sides
            .iter()
            .map(|side| {
                (0..count)
                    .map(|t| {
                        let elems = tuple_elems(t, side.n, d);
                        let mut multiset: Vec<Vec<u32>> = (0..side.n)
                            .map(|x| {
                                let mut entry = Vec::with_capacity(d + 1);
                                entry.push(side.atp[t * side.n + x]);
                                for i in 0..d {
                                    let moved = t - elems[i] as usize * weights[i] + x * weights[i];
                                    entry.push(side.colour[moved]);
                                }
                                entry
                            })
                            .collect();
                        multiset.sort_unstable();
                        let mut key = vec![side.colour[t]];
                        key.extend(multiset.into_iter().flatten());
                        next.id(key)
                    })
                    .collect()
            })
            .collect();
        for (side, colour) in sides.iter_mut().zip(refined) {
            side.colour = colour;
        }
        let now = distinct(&sides);
        if now == classes {
            break;
        }
        classes = now;
    }
    let diagonal = |side: &Side| {
        let step: usize = weights.iter().sum();
        let mut cs: Vec<u32> = (0..n).map(|a| side.colour[a * step]).collect();
        cs.sort_unstable();
        cs
    };
    Ok(diagonal(&sides[0]) == diagonal(&sides[1]))
}

/// Whether `a` and `b` have the same multiset of atomic one-element types.
pub(crate) fn same_unary_types(a: &Structure, b: &Structure) -> bool {
    let (da, db) = (Dense::new(a), Dense::new(b));
    let hist = |d: &Dense| {
        let mut v: Vec<Vec<u32>> = (0..d.n as u32).map(|x| atomic_type(d, &[x])).collect();
        v.sort();
        v
    };
    a.size() == b.size() && hist(&da) == hist(&db)
}
