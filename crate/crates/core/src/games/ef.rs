//! Ehrenfeucht–Fraïssé games of bounded length, solved by memoised recursion.

use std::collections::{HashMap, HashSet};

use super::atoms::{agree, Dense};
use super::matching::has_perfect_matching;
use super::Rule;

pub(crate) type Pairs = Vec<(u32, u32)>;

/// The position after playing `(a, b)`: positions are sorted multisets of
/// pairs, and repeating a pair changes nothing (there is no equality). `None`
/// when the new pair breaks atomic agreement.
pub(crate) fn step(da: &Dense, db: &Dense, pos: &[(u32, u32)], pair: (u32, u32), both: bool) -> Option<Pairs> {
    match pos.binary_search(&pair) {
        Ok(_) => Some(pos.to_vec()),
        Err(i) => {
            let mut next = Vec::with_capacity(pos.len() + 1);
            next.extend_from_slice(&pos[..i]);
            next.push(pair);
            next.extend_from_slice(&pos[i..]);
            agree(da, db, &next, Some(i), both).then_some(next)
        }
    }
}

pub(crate) struct EfGame<'d> {
    da: &'d Dense,
    db: &'d Dense,
    rule: Rule,
    memo: HashMap<(usize, Pairs), bool>,
}

impl<'d> EfGame<'d> {
    pub fn new(da: &'d Dense, db: &'d Dense, rule: Rule) -> Self {
        EfGame {
            da,
            db,
            rule,
            memo: HashMap::new(),
        }
    }

    /// Whether Duplicator survives `rounds` more rounds from `pos`.
    pub fn wins(&mut self, rounds: usize, pos: &Pairs) -> bool {
        if rounds == 0 {
            return true;
        }
        if let Some(&v) = self.memo.get(&(rounds, pos.clone())) {
            return v;
        }
        let (n, m) = (self.da.n as u32, self.db.n as u32);
        let v = match self.rule {
            Rule::Forth | Rule::Exist => (0..n).all(|a| (0..m).any(|b| self.answer(rounds, pos, a, b))),
            Rule::BackForth => {
                (0..n).all(|a| (0..m).any(|b| self.answer(rounds, pos, a, b)))
                    && (0..m).all(|b| (0..n).any(|a| self.answer(rounds, pos, a, b)))
            }
            Rule::Bijective => {
                let adj: Vec<u64> = (0..n)
                    .map(|a| {
                        (0..m)
                            .filter(|&b| self.answer(rounds, pos, a, b))
                            .fold(0u64, |acc, b| acc | 1 << b)
                    })
                    .collect();
                has_perfect_matching(&adj, m as usize)
            }
        };
        self.memo.insert((rounds, pos.clone()), v);
        v
    }

    fn answer(&mut self, rounds: usize, pos: &Pairs, a: u32, b: u32) -> bool {
        match step(self.da, self.db, pos, (a, b), self.rule.both()) {
            Some(next) => self.wins(rounds - 1, &next),
            None => false,
        }
    }

    /// Every position found winning, sorted: a set closed under the game rule.
    pub fn winning_positions(&self) -> Vec<(usize, Pairs)> {
        let mut out: Vec<(usize, Pairs)> = self
            .memo
            .iter()
            .filter(|(_, &v)| v)
            .map(|(key, _)| key.clone())
            .collect();
        out.sort();
        out
    }
}

/// Checks that `set` contains `(k, [])` and is closed under the game rule: at
/// every listed position with rounds left, Duplicator has answers (a
/// bijection under the bijective rule) leading to atomically safe positions
/// that are listed, or that have no rounds left.
pub(crate) fn replay(da: &Dense, db: &Dense, rule: Rule, k: usize, set: &[(usize, Pairs)]) -> bool {
    let members: HashSet<&(usize, Pairs)> = set.iter().collect();
    if !members.contains(&(k, Vec::new())) {
        return false;
    }
    let (n, m) = (da.n as u32, db.n as u32);
    let good = |rounds: usize, pos: &Pairs, a: u32, b: u32| match step(da, db, pos, (a, b), rule.both()) {
        Some(next) => rounds == 1 || members.contains(&(rounds - 1, next)),
        None => false,
    };
    set.iter().all(|(rounds, pos)| {
        if *rounds == 0 || !agree(da, db, pos, None, rule.both()) {
            return *rounds == 0;
        }
        match rule {
            Rule::Forth | Rule::Exist => (0..n).all(|a| (0..m).any(|b| good(*rounds, pos, a, b))),
            Rule::BackForth => {
                (0..n).all(|a| (0..m).any(|b| good(*rounds, pos, a, b)))
                    && (0..m).all(|b| (0..n).any(|a| good(*rounds, pos, a, b)))
            }
            Rule::Bijective => {
                let adj: Vec<u64> = (0..n)
                    .map(|a| {
                        (0..m)
                            .filter(|&b| good(*rounds, pos, a, b))
                            .fold(0u64, |acc, b| acc | 1 << b)
                    })
                    .collect();
                has_perfect_matching(&adj, m as usize)
            }
        }
    })
}
