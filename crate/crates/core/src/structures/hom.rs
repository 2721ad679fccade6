//! Homomorphism search as a constraint-satisfaction problem: one variable per
//! source element, one constraint per source tuple, backtracking with
//! smallest-domain-first ordering and forward checking.

use rand::seq::SliceRandom;
use rand::RngCore;

use crate::error::{Error, Result};

use super::{Structure, StructureMap};

/// Largest target universe supported (domains are 64-bit masks).
pub const MAX_TARGET: usize = 64;

struct Problem<'a> {
    b: &'a Structure,
    constraints: Vec<(usize, Vec<u32>)>,
    by_var: Vec<Vec<usize>>,
    target_tuples: Vec<Vec<Vec<u32>>>,
}

/// What to do with each solution found.
pub enum Visit {
    Continue,
    Stop,
}

impl<'a> Problem<'a> {
    fn new(a: &'a Structure, b: &'a Structure) -> Result<Self> {
        if a.signature() != b.signature() {
            return Err(Error::IncompatibleSignatures);
        }
        if b.size() > MAX_TARGET {
            return Err(Error::GuardExceeded {
                what: "homomorphism target".into(),
                size: b.size(),
                limit: MAX_TARGET,
            });
        }
        let mut constraints = Vec::new();
        let mut by_var = vec![Vec::new(); a.size()];
        for r in 0..a.signature().len() {
            for t in a.tuples(r) {
                let id = constraints.len();
                let mut seen: Vec<u32> = Vec::new();
                for &x in t {
                    if !seen.contains(&x) {
                        seen.push(x);
                        by_var[x as usize].push(id);
                    }
                }
                constraints.push((r, t.clone()));
            }
        }
        let target_tuples = (0..b.signature().len())
            .map(|r| b.tuples(r).iter().cloned().collect())
            .collect();
        Ok(Problem {
            b,
            constraints,
            by_var,
            target_tuples,
        })
    }

    /// Values for each variable of constraint `c` supported by some target
    /// tuple consistent with the current assignment and domains, as one mask
    /// per argument position.
    fn supports(&self, c: usize, assign: &[u32], doms: &[u64]) -> Vec<u64> {
        let (r, t) = &self.constraints[c];
        let mut out = vec![0u64; t.len()];
        'tuples: for bt in &self.target_tuples[*r] {
            for (pos, &x) in t.iter().enumerate() {
                let y = bt[pos];
                let v = assign[x as usize];
                if v != u32::MAX {
                    if v != y {
                        continue 'tuples;
                    }
                } else if doms[x as usize] >> y & 1 == 0 {
                    continue 'tuples;
                }
                // Repeated variables must receive repeated values.
                for (p2, &x2) in t.iter().enumerate().take(pos) {
                    if x2 == x && bt[p2] != y {
                        continue 'tuples;
                    }
                }
            }
            for (pos, slot) in out.iter_mut().enumerate() {
                *slot |= 1 << bt[pos];
            }
        }
        out
    }

    /// Restricts the domains of all variables in constraint `c`; false on wipe-out.
    fn revise(&self, c: usize, assign: &[u32], doms: &mut [u64]) -> bool {
        let sup = self.supports(c, assign, doms);
        let t = &self.constraints[c].1;
        for (pos, &x) in t.iter().enumerate() {
            if assign[x as usize] != u32::MAX {
                if sup[pos] == 0 {
                    return false;
                }
                continue;
            }
            doms[x as usize] &= sup[pos];
            if doms[x as usize] == 0 {
                return false;
            }
        }
        true
    }
}

fn initial_domains(a: &Structure, b: &Structure) -> Vec<u64> {
    let full = if b.size() == 64 {
        u64::MAX
    } else {
        (1u64 << b.size()) - 1
    };
    let mut doms = vec![full; a.size()];
    if let (Some(p), Some(q)) = (a.point(), b.point()) {
        doms[p as usize] = 1 << q;
    }
    doms
}

struct Search<'p, 'a, 'r> {
    problem: &'p Problem<'a>,
    assign: Vec<u32>,
    rng: Option<&'r mut dyn RngCore>,
}

impl Search<'_, '_, '_> {
    fn run(&mut self, doms: Vec<u64>, visit: &mut dyn FnMut(&[u32]) -> Visit) -> bool {
        // Pick the unassigned variable with the smallest domain.
        let mut best: Option<(u32, usize)> = None;
        for (x, &d) in doms.iter().enumerate() {
            if self.assign[x] == u32::MAX {
                let c = d.count_ones();
                if best.is_none_or(|(bc, _)| c < bc) {
                    best = Some((c, x));
                    if c == 1 {
                        break;
                    }
                }
            }
        }
        let Some((_, x)) = best else {
            return matches!(visit(&self.assign), Visit::Stop);
        };
        let mut values: Vec<u32> = (0..self.problem.b.size() as u32)
            .filter(|&y| doms[x] >> y & 1 == 1)
            .collect();
        if let Some(rng) = self.rng.as_deref_mut() {
            values.shuffle(rng);
        }
        for y in values {
            self.assign[x] = y;
            let mut next = doms.clone();
            next[x] = 1 << y;
            let ok = self.problem.by_var[x]
                .iter()
                .all(|&c| self.problem.revise(c, &self.assign, &mut next));
            if ok && self.run(next, visit) {
                self.assign[x] = u32::MAX;
                return true;
            }
        }
        self.assign[x] = u32::MAX;
        false
    }
}

fn solve(
    a: &Structure,
    b: &Structure,
    doms: Option<Vec<u64>>,
    rng: Option<&mut dyn RngCore>,
    visit: &mut dyn FnMut(&[u32]) -> Visit,
) -> Result<()> {
    let problem = Problem::new(a, b)?;
    let mut doms = doms.unwrap_or_else(|| initial_domains(a, b));
    let none = vec![u32::MAX; a.size()];
    for c in 0..problem.constraints.len() {
        if !problem.revise(c, &none, &mut doms) {
            return Ok(());
        }
    }
    if doms.contains(&0) {
        return Ok(());
    }
    let mut search = Search {
        problem: &problem,
        assign: none,
        rng,
    };
    search.run(doms, visit);
    Ok(())
}

/// The first homomorphism `a -> b` in the solver's deterministic order.
pub fn find_homomorphism(a: &Structure, b: &Structure) -> Result<Option<StructureMap>> {
    let mut found = None;
    solve(a, b, None, None, &mut |m| {
        found = Some(StructureMap::new(m.to_vec()));
        Visit::Stop
    })?;
    Ok(found)
}

/// A homomorphism `a -> b` found with randomised value ordering.
pub fn random_homomorphism(a: &Structure, b: &Structure, rng: &mut dyn RngCore) -> Result<Option<StructureMap>> {
    let mut found = None;
    solve(a, b, None, Some(rng), &mut |m| {
        found = Some(StructureMap::new(m.to_vec()));
        Visit::Stop
    })?;
    Ok(found)
}

/// Homomorphism search with per-element candidate sets `allowed[x]` (bit masks
/// over the target universe).
pub fn find_homomorphism_within(a: &Structure, b: &Structure, allowed: &[u64]) -> Result<Option<StructureMap>> {
    let mut doms = initial_domains(a, b);
    for (d, m) in doms.iter_mut().zip(allowed) {
        *d &= m;
    }
    let mut found = None;
    solve(a, b, Some(doms), None, &mut |m| {
        found = Some(StructureMap::new(m.to_vec()));
        Visit::Stop
    })?;
    Ok(found)
}

/// Calls `visit` on every homomorphism `a -> b` until it returns [`Visit::Stop`].
pub fn for_each_homomorphism(a: &Structure, b: &Structure, mut visit: impl FnMut(&[u32]) -> Visit) -> Result<()> {
    solve(a, b, None, None, &mut visit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{enumerate_structures, EnumerateOptions, Signature};
    use rand::SeedableRng;

    /// Brute-force oracle: try every function.
    fn brute_count(a: &Structure, b: &Structure) -> usize {
        let n = a.size();
        let m = b.size();
        let total = m.pow(n as u32);
        (0..total)
            .filter(|&code| {
                let mut table = vec![0u32; n];
                let mut c = code;
                for slot in table.iter_mut() {
                    *slot = (c % m) as u32;
                    c /= m;
                }
                StructureMap::new(table).is_homomorphism(a, b).unwrap()
            })
            .count()
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let sig = Signature::new([("E", 2), ("P", 1)]).unwrap();
        let all = enumerate_structures(&sig, &EnumerateOptions::new(2)).unwrap();
        for a in all.iter().step_by(7) {
            for b in all.iter().step_by(5) {
                let mut count = 0;
                for_each_homomorphism(a, b, |m| {
                    assert!(StructureMap::new(m.to_vec()).is_homomorphism(a, b).unwrap());
                    count += 1;
                    Visit::Continue
                })
                .unwrap();
                assert_eq!(count, brute_count(a, b), "{a:?} -> {b:?}");
                assert_eq!(find_homomorphism(a, b).unwrap().is_some(), count > 0);
            }
        }
    }

    #[test]
    fn random_search_finds_valid_maps() {
        let a = Structure::digraph(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let b = Structure::graph(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let f = random_homomorphism(&a, &b, &mut rng).unwrap().unwrap();
            assert!(f.is_homomorphism(&a, &b).unwrap());
        }
    }

    #[test]
    fn pointed_search_fixes_the_point() {
        let a = Structure::digraph(1, &[(0, 0)]).unwrap().with_point(Some(0)).unwrap();
        let b = Structure::digraph(2, &[(1, 1)]).unwrap().with_point(Some(0)).unwrap();
        assert!(find_homomorphism(&a, &b).unwrap().is_none());
    }
}
