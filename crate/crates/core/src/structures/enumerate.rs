use std::collections::HashSet;

use crate::error::{guard, Error, Result};

use super::{canonical_code, Signature, Structure};

/// Options for [`enumerate_structures`].
#[derive(Clone, Debug)]
pub struct EnumerateOptions {
    pub min_size: usize,
    pub max_size: usize,
    /// Keep one representative per isomorphism class (the first in enumeration order).
    pub up_to_iso: bool,
    /// Largest universe allowed without `allow_large`.
    pub size_guard: usize,
    pub allow_large: bool,
}

impl EnumerateOptions {
    pub fn new(max_size: usize) -> Self {
        EnumerateOptions {
            min_size: 1,
            max_size,
            up_to_iso: false,
            size_guard: 4,
            allow_large: false,
        }
    }

    pub fn up_to_iso(mut self) -> Self {
        self.up_to_iso = true;
        self
    }

    pub fn min_size(mut self, min: usize) -> Self {
        self.min_size = min;
        self
    }

    fn check(&self, sig: &Signature) -> Result<()> {
        if !self.allow_large {
            guard("enumeration universe", self.max_size, self.size_guard)?;
        }
        for n in self.min_size..=self.max_size {
            let bits = tuple_space(sig, n).len();
            if bits > 30 {
                return Err(Error::GuardExceeded {
                    what: format!("tuple space at size {n}"),
                    size: bits,
                    limit: 30,
                });
            }
        }
        Ok(())
    }
}

/// All candidate tuples at universe size `n`, relation by relation, each in
/// lexicographic order.
fn tuple_space(sig: &Signature, n: usize) -> Vec<(usize, Vec<u32>)> {
    let mut out = Vec::new();
    for r in 0..sig.len() {
        let ar = sig.arity(r);
        let total = n.pow(ar as u32);
        for code in 0..total {
            let mut t = vec![0u32; ar];
            let mut c = code;
            for slot in t.iter_mut().rev() {
                *slot = (c % n) as u32;
                c /= n;
            }
            out.push((r, t));
        }
    }
    out
}

fn structures_of_size(sig: &Signature, n: usize) -> impl Iterator<Item = Structure> + '_ {
    let space = tuple_space(sig, n);
    let count: u64 = 1 << space.len();
    (0..count).map(move |mask| {
        let mut s = Structure::new(sig.clone(), n);
        for (bit, (r, t)) in space.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                s.insert(*r, t.clone()).expect("tuple space is well-formed");
            }
        }
        s
    })
}

/// All structures over `sig` with universe sizes in `min_size..=max_size`, in a
/// deterministic order (by size, then by the bitmask over the lexicographic
/// tuple space), optionally one per isomorphism class.
pub fn enumerate_structures(sig: &Signature, opts: &EnumerateOptions) -> Result<Vec<Structure>> {
    opts.check(sig)?;
    let mut out = Vec::new();
    for n in opts.min_size..=opts.max_size {
        let mut seen = HashSet::new();
        for s in structures_of_size(sig, n) {
            if !opts.up_to_iso || seen.insert(canonical_code(&s)) {
                out.push(s);
            }
        }
    }
    Ok(out)
}

/// Like [`enumerate_structures`] but every structure is pointed, with each
/// possible point in turn. Sizes below 1 are skipped.
pub fn enumerate_pointed(sig: &Signature, opts: &EnumerateOptions) -> Result<Vec<Structure>> {
    opts.check(sig)?;
    let mut out = Vec::new();
    for n in opts.min_size.max(1)..=opts.max_size {
        let mut seen = HashSet::new();
        for s in structures_of_size(sig, n) {
            for p in 0..n as u32 {
                let sp = s.clone().with_point(Some(p)).expect("point in range");
                if !opts.up_to_iso || seen.insert(canonical_code(&sp)) {
                    out.push(sp);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        let empty = Signature::empty();
        assert_eq!(
            enumerate_structures(&empty, &EnumerateOptions::new(2)).unwrap().len(),
            2
        );
        let p = Signature::new([("P", 1)]).unwrap();
        assert_eq!(enumerate_structures(&p, &EnumerateOptions::new(1)).unwrap().len(), 2);
        let e = Signature::graph();
        assert_eq!(enumerate_structures(&e, &EnumerateOptions::new(1)).unwrap().len(), 2);
        assert_eq!(
            enumerate_structures(&e, &EnumerateOptions::new(2)).unwrap().len(),
            2 + 16
        );
    }

    #[test]
    fn digraph_isomorphism_classes() {
        let e = Signature::graph();
        let classes = enumerate_structures(&e, &EnumerateOptions::new(3).up_to_iso()).unwrap();
        let by_size: Vec<usize> = (1..=3)
            .map(|n| classes.iter().filter(|s| s.size() == n).count())
            .collect();
        assert_eq!(by_size, vec![2, 10, 104]);
    }

    #[test]
    fn pointed_classes() {
        let e = Signature::graph();
        let classes = enumerate_pointed(&e, &EnumerateOptions::new(2).up_to_iso()).unwrap();
        // size 1: 2; size 2: 16 structures x 2 points with the swap symmetry -> 16 classes
        assert_eq!(classes.len(), 2 + 16);
    }

    #[test]
    fn guard_applies() {
        let e = Signature::graph();
        assert!(matches!(
            enumerate_structures(&e, &EnumerateOptions::new(5)),
            Err(Error::GuardExceeded { .. })
        ));
    }
}
