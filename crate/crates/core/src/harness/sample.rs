//! Random operand pairs. Every sample draws from its own stream of a seeded
//! generator, so a sample depends only on the seed and its index.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::structures::{Signature, Structure};

/// Densities for independently drawn tuples.
const DENSITIES: [f64; 3] = [0.2, 0.35, 0.5];

/// A structure of the given size with each tuple present independently.
pub(crate) fn random_structure(sig: &Signature, size: usize, pointed: bool, rng: &mut ChaCha8Rng) -> Structure {
    let density = DENSITIES[rng.gen_range(0..DENSITIES.len())];
    let mut s = Structure::new(sig.clone(), size);
    for r in 0..sig.len() {
        let arity = sig.arity(r);
        let count = size.pow(arity as u32);
        for code in 0..count {
            if rng.gen_bool(density) {
                let mut tuple = vec![0u32; arity];
                let mut c = code;
                for slot in tuple.iter_mut().rev() {
                    *slot = (c % size) as u32;
                    c /= size;
                }
                s.insert(r, tuple).expect("tuple in range");
            }
        }
    }
    if pointed {
        let p = rng.gen_range(0..size as u32);
        s = s.with_point(Some(p)).expect("point in range");
    }
    s
}

fn random_permutation(n: usize, rng: &mut ChaCha8Rng) -> Vec<u32> {
    let mut perm: Vec<u32> = (0..n as u32).collect();
    perm.shuffle(rng);
    perm
}

/// Adds a twin `x'` of `x`: every tuple through `x` is copied with any
/// subset of its occurrences of `x` replaced by `x'`. Without equality the
/// twin satisfies exactly the formulas `x` does, so the result agrees with
/// `s` on every fragment except counting.
pub(crate) fn clone_element(s: &Structure, x: u32) -> Structure {
    let twin = s.size() as u32;
    let mut out = Structure::new(s.signature().clone(), s.size() + 1)
        .with_point(s.point())
        .expect("point in range");
    for r in 0..s.signature().len() {
        for t in s.tuples(r) {
            let slots: Vec<usize> = (0..t.len()).filter(|&i| t[i] == x).collect();
            for mask in 0..1u32 << slots.len() {
                let mut u = t.clone();
                for (b, &i) in slots.iter().enumerate() {
                    if mask >> b & 1 == 1 {
                        u[i] = twin;
                    }
                }
                out.insert(r, u).expect("tuple in range");
            }
        }
    }
    out
}

/// Flips the presence of one uniformly chosen tuple.
fn toggle_tuple(s: &Structure, rng: &mut ChaCha8Rng) -> Structure {
    let mut out = s.clone();
    let sig = s.signature();
    if sig.is_empty() || s.size() == 0 {
        return out;
    }
    let r = rng.gen_range(0..sig.len());
    let tuple: Vec<u32> = (0..sig.arity(r)).map(|_| rng.gen_range(0..s.size() as u32)).collect();
    if !out.remove(r, &tuple) {
        out.insert(r, tuple).expect("tuple in range");
    }
    out
}

/// An operand pair `(a, b)` with sizes in `1..=max_size`. `b` is built from
/// `a` by a relabelling, an element twin, a single tuple flip, or drawn
/// independently; the roles are swapped half of the time so that both
/// directions of the one-way fragments are exercised.
pub(crate) fn operand_pair(
    sig: &Signature,
    max_size: usize,
    pointed: bool,
    rng: &mut ChaCha8Rng,
) -> (Structure, Structure) {
    let size = rng.gen_range(1..=max_size);
    let a = random_structure(sig, size, pointed, rng);
    let b = match rng.gen_range(0..10) {
        0..=1 => a.clone(),
        2..=4 if size < max_size => {
            let x = rng.gen_range(0..size as u32);
            clone_element(&a, x)
        }
        2..=7 => toggle_tuple(&a, rng),
        _ => {
            let size = rng.gen_range(1..=max_size);
            random_structure(sig, size, pointed, rng)
        }
    };
    let perm = random_permutation(b.size(), rng);
    let b = b.permute(&perm);
    if rng.gen_bool(0.5) {
        (b, a)
    } else {
        (a, b)
    }
}
