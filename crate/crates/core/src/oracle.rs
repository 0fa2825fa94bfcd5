//! Brute-force ground truth for small games.

use std::collections::HashMap;

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::game::Game;
use crate::word::{clause_to_word, ClauseWord, GroupWord};

/// Largest `kN` accepted by [`classical_value`].
pub const MAX_CLASSICAL_VARIABLES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalResult {
    /// Best fraction of satisfied clauses.
    pub value: Rational64,
    /// An optimal ±1 answer per (player, question).
    pub argmax_assignment: Vec<Vec<i8>>,
}

/// Exhaustive maximum over deterministic strategies, walking assignments in
/// Gray-code order so each step flips one answer. Among optimal
/// assignments the lexicographically smallest (+1 before -1, player-major)
/// is reported.
///
/// ```
/// use xorgame::{oracle::classical_value, Game};
/// let chsh = Game::from_tuples(&[(&[1, 1], 1), (&[2, 1], 0), (&[1, 2], 0), (&[2, 2], 0)]).unwrap();
/// assert_eq!(classical_value(&chsh).unwrap().value.to_string(), "3/4");
/// ```
pub fn classical_value(game: &Game) -> Result<ClassicalResult> {
    let n = game.alphabet();
    let vars = game.players() * n;
    if vars > MAX_CLASSICAL_VARIABLES {
        return Err(Error::TooLarge(format!("{vars} answer bits exceeds {MAX_CLASSICAL_VARIABLES}")));
    }
    let mut touching = vec![Vec::new(); vars];
    for (i, c) in game.clauses().iter().enumerate() {
        for (a, &q) in c.questions.iter().enumerate() {
            touching[a * n + q as usize].push(i);
        }
    }
    // all answers +1 (bit 0): clause satisfied iff parity 0
    let mut sat: Vec<bool> = game.clauses().iter().map(|c| !c.parity).collect();
    let mut count = sat.iter().filter(|&&s| s).count();
    let key = |mask: u32| if vars == 0 { 0 } else { mask.reverse_bits() >> (32 - vars) };
    let (mut best, mut best_mask) = (count, 0u32);
    let mut mask = 0u32;
    for step in 1u64..(1u64 << vars) {
        let bit = step.trailing_zeros() as usize;
        mask ^= 1 << bit;
        for &i in &touching[bit] {
            sat[i] = !sat[i];
            if sat[i] {
                count += 1;
            } else {
                count -= 1;
            }
        }
        if count > best || (count == best && key(mask) < key(best_mask)) {
            best = count;
            best_mask = mask;
        }
    }
    let argmax_assignment = (0..game.players())
        .map(|a| (0..n).map(|q| if best_mask >> (a * n + q) & 1 == 1 { -1 } else { 1 }).collect())
        .collect();
    Ok(ClassicalResult { value: Rational64::new(best as i64, game.num_clauses() as i64), argmax_assignment })
}

/// Fraction of clauses an explicit ±1 assignment satisfies.
pub fn assignment_value(game: &Game, assignment: &[Vec<i8>]) -> Rational64 {
    let hits = game
        .clauses()
        .iter()
        .filter(|c| {
            let neg = c.questions.iter().enumerate().filter(|(a, &q)| assignment[*a][q as usize] < 0).count();
            (neg % 2 == 1) == c.parity
        })
        .count();
    Rational64::new(hits as i64, game.num_clauses() as i64)
}

/// Whether every clause can be satisfied at once, by Gaussian elimination
/// over GF(2) on the augmented system.
pub fn gf2_solvable(game: &Game) -> bool {
    let n = game.alphabet();
    let vars = game.players() * n;
    let words = (vars + 1).div_ceil(64);
    let mut rows: Vec<Vec<u64>> = game
        .clauses()
        .iter()
        .map(|c| {
            let mut r = vec![0u64; words];
            for (a, &q) in c.questions.iter().enumerate() {
                let v = a * n + q as usize;
                r[v / 64] ^= 1 << (v % 64);
            }
            if c.parity {
                r[vars / 64] ^= 1 << (vars % 64);
            }
            r
        })
        .collect();
    let get = |r: &Vec<u64>, v: usize| r[v / 64] >> (v % 64) & 1 == 1;
    let mut pivot_row = 0;
    for v in 0..vars {
        let Some(p) = (pivot_row..rows.len()).find(|&i| get(&rows[i], v)) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let pr = rows[pivot_row].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i != pivot_row && get(r, v) {
                r.iter_mut().zip(&pr).for_each(|(x, y)| *x ^= y);
            }
        }
        pivot_row += 1;
    }
    // inconsistent iff some row reads 0 = 1
    rows[pivot_row..].iter().all(|r| !get(r, vars))
}

/// Default bound on visited states for [`bounded_sigma_search`].
pub const DEFAULT_SEARCH_CAP: usize = 1_000_000;

/// Breadth-first search for a clause product equal to `σ` of at most
/// `max_len` clauses, deduplicating by normal form. `Ok(None)` means none
/// exists within the bound; exceeding `cap` visited states is an error.
pub fn bounded_sigma_search(game: &Game, max_len: usize, cap: usize) -> Result<Option<ClauseWord>> {
    let k = game.players();
    let clauses: Vec<GroupWord> = (0..game.num_clauses()).map(|i| clause_to_word(game, i)).collect::<Result<_>>()?;
    let mut seen: HashMap<GroupWord, Option<(usize, usize)>> = HashMap::new();
    let mut nodes: Vec<GroupWord> = vec![GroupWord::identity(k)];
    seen.insert(nodes[0].clone(), None);
    let mut frontier = vec![0usize];
    let mut parents: Vec<Option<(usize, usize)>> = vec![None];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for &id in &frontier {
            for (c, h) in clauses.iter().enumerate() {
                let mut w = nodes[id].clone();
                w.mul_assign(h);
                if seen.contains_key(&w) {
                    continue;
                }
                if seen.len() >= cap {
                    return Err(Error::SearchCap(cap));
                }
                seen.insert(w.clone(), Some((id, c)));
                let found = w.is_sigma();
                nodes.push(w);
                parents.push(Some((id, c)));
                let new_id = nodes.len() - 1;
                if found {
                    let mut path = Vec::new();
                    let mut cur = new_id;
                    while let Some((p, c)) = parents[cur] {
                        path.push(c);
                        cur = p;
                    }
                    path.reverse();
                    return Ok(Some(ClauseWord::from_indices(path)));
                }
                next.push(new_id);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::reduce_clause_word;

    fn ghz() -> Game {
        Game::from_tuples(&[(&[1, 1, 1], 0), (&[1, 2, 2], 1), (&[2, 1, 2], 1), (&[2, 2, 1], 1)]).unwrap()
    }

    #[test]
    fn ghz_classical_value() {
        let g = ghz();
        let r = classical_value(&g).unwrap();
        assert_eq!(r.value, Rational64::new(3, 4));
        assert_eq!(assignment_value(&g, &r.argmax_assignment), r.value);
        assert!(!gf2_solvable(&g));
    }

    #[test]
    fn chsh_classical_value() {
        let g = Game::from_tuples(&[(&[1, 1], 1), (&[2, 1], 0), (&[1, 2], 0), (&[2, 2], 0)]).unwrap();
        assert_eq!(classical_value(&g).unwrap().value, Rational64::new(3, 4));
    }

    #[test]
    fn single_clause_value() {
        let g = Game::from_tuples(&[(&[1, 2, 1], 1)]).unwrap();
        let r = classical_value(&g).unwrap();
        assert_eq!(r.value, Rational64::from_integer(1));
        // smallest optimal: flip the last answer bit
        assert_eq!(r.argmax_assignment, vec![vec![1, 1], vec![1, 1], vec![-1, 1]]);
        assert!(gf2_solvable(&g));
    }

    #[test]
    fn too_large() {
        let g = Game::new(3, 9, vec![crate::game::Clause::new(vec![0, 0, 0], false)]).unwrap();
        assert!(classical_value(&g).is_err());
    }

    #[test]
    fn sigma_search() {
        let g = Game::from_tuples(&[(&[1, 1, 1], 0), (&[1, 1, 1], 1)]).unwrap();
        let w = bounded_sigma_search(&g, 2, DEFAULT_SEARCH_CAP).unwrap().unwrap();
        assert_eq!(w.len(), 2);
        assert!(reduce_clause_word(&g, &w).unwrap().is_sigma());
        assert!(bounded_sigma_search(&ghz(), 8, DEFAULT_SEARCH_CAP).unwrap().is_none());
        assert!(matches!(bounded_sigma_search(&ghz(), 8, 10), Err(Error::SearchCap(10))));
    }
}
