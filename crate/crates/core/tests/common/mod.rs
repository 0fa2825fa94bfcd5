#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use xorgame::graph::{build_pair_graph, decompose_components, Vertex};
use xorgame::word::reduce_letters;
use xorgame::{generate_random_game, ClauseWord, Game};

pub fn ghz() -> Game {
    Game::from_tuples(&[(&[1, 1, 1], 0), (&[1, 2, 2], 1), (&[2, 1, 2], 1), (&[2, 2, 1], 1)]).unwrap()
}

pub fn chsh() -> Game {
    Game::from_tuples(&[(&[1, 1], 1), (&[2, 1], 0), (&[1, 2], 0), (&[2, 2], 0)]).unwrap()
}

/// The largest connected piece of a seeded random game, compacted.
pub fn connected_game(k: usize, n: usize, m: usize, seed: u64) -> Game {
    let g = generate_random_game(k, n, m, seed).unwrap();
    decompose_components(&g).into_iter().max_by_key(|p| p.game.num_clauses()).unwrap().game
}

/// Questions some clause asks `player`, ascending.
pub fn asked(game: &Game, player: usize) -> Vec<u32> {
    let mut qs: Vec<u32> = game.clauses().iter().map(|c| c.questions[player]).collect();
    qs.sort_unstable();
    qs.dedup();
    qs
}

/// Even-length letter sequence over the questions asked to `player`.
pub fn even_word(rng: &mut ChaCha8Rng, game: &Game, player: usize, max_pairs: usize) -> Vec<u32> {
    let qs = asked(game, player);
    let len = 2 * rng.gen_range(0..=max_pairs);
    (0..len).map(|_| qs[rng.gen_range(0..qs.len())]).collect()
}

/// Product of clause pairs agreeing on `player`'s question, so its
/// `player` projection is trivial.
pub fn pairs_agreeing_on(rng: &mut ChaCha8Rng, game: &Game, player: usize, count: usize) -> ClauseWord {
    let m = game.num_clauses();
    let mut cw = ClauseWord::new();
    for _ in 0..count {
        let a = rng.gen_range(0..m);
        let same: Vec<usize> = (0..m).filter(|&b| game.question(b, player) == game.question(a, player)).collect();
        cw.push(a);
        cw.push(same[rng.gen_range(0..same.len())]);
    }
    cw
}

/// `π_β ∘ φ_{α,β}` computed from representatives alone: each letter of the
/// even word goes to the representative of its component.
pub fn rep_image(game: &Game, alpha: usize, beta: usize, letters: &[u32]) -> Vec<u32> {
    let pg = build_pair_graph(game, alpha, beta).unwrap();
    let reps: Vec<u32> = letters.iter().map(|&q| pg.representative(Vertex::new(alpha, q)).unwrap().unwrap()).collect();
    reduce_letters(&reps)
}

/// Commutator of two letter pairs conjugated by an even word; lies in `K`.
pub fn conjugated_commutator(rng: &mut ChaCha8Rng, qs: &[u32]) -> Vec<u32> {
    let mut pick = || qs[rng.gen_range(0..qs.len())];
    let (a, b, c, d) = (pick(), pick(), pick(), pick());
    let u: Vec<u32> = (0..2 * (pick() as usize % 2)).map(|_| pick()).collect();
    let mut w = u.clone();
    w.extend([a, b, c, d, b, a, d, c]);
    w.extend(u.iter().rev());
    w
}

/// Signed letter counts with the first letter negative, the abelian image
/// of an even single-player word.
pub fn signed_counts(letters: &[u32], alphabet: usize) -> Vec<i64> {
    let mut v = vec![0; alphabet];
    for (t, &l) in letters.iter().enumerate() {
        v[l as usize] += if t % 2 == 0 { -1 } else { 1 };
    }
    v
}

/// Shuffles the odd-position and even-position letters separately, which
/// leaves a word unchanged modulo `K`.
pub fn shuffle_parity_classes(rng: &mut ChaCha8Rng, letters: &[u32]) -> Vec<u32> {
    use rand::seq::SliceRandom;
    let mut odd: Vec<u32> = letters.iter().step_by(2).copied().collect();
    let mut even: Vec<u32> = letters.iter().skip(1).step_by(2).copied().collect();
    odd.shuffle(rng);
    even.shuffle(rng);
    let mut even = even.into_iter();
    odd.into_iter().flat_map(|o| std::iter::once(o).chain(even.next())).collect()
}

pub mod checks {
    use super::*;
    use xorgame::decider::abelianize_clause_word;
    use xorgame::graph::base_question;
    use xorgame::refutation::HomomorphismTable;
    use xorgame::word::reduce_clause_word;
    use xorgame::GroupWord;

    fn reduce(t: &HomomorphismTable, cw: &ClauseWord) -> GroupWord {
        reduce_clause_word(t.game(), cw).unwrap()
    }

    fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
        if ok {
            Ok(())
        } else {
            Err(what())
        }
    }

    /// A1 on a random even word and A2 on a word known to satisfy its
    /// hypothesis.
    pub fn pair_inverse(t: &HomomorphismTable, alpha: usize, beta: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
        let g = t.game();
        let w = even_word(rng, g, alpha, 6);
        let img = reduce(t, &t.pair_right_inverse(alpha, beta, &w).unwrap());
        ensure(img.player(alpha) == reduce_letters(&w), || format!("A1 fails on {w:?}"))?;
        ensure(img.player(beta) == rep_image(g, alpha, beta, &w), || format!("beta image of {w:?}"))?;
        let h = reduce(t, &pairs_agreeing_on(rng, g, beta, 4));
        let v = h.player(alpha).to_vec();
        let img = reduce(t, &t.pair_right_inverse(alpha, beta, &v).unwrap());
        ensure(img.player(beta).is_empty(), || format!("A2 fails on {v:?}"))
    }

    /// B1 to B4 for `f_β`, plus `K` mapping into `K`.
    pub fn gadget_map(t: &HomomorphismTable, beta: usize, rng: &mut ChaCha8Rng) -> Result<(), String> {
        let g = t.game();
        let alpha = 1 - beta;
        let phi = |a: usize, v: &[u32]| reduce(t, &t.pair_right_inverse(2, a, v).unwrap());
        let hyp = pairs_agreeing_on(rng, g, beta, 3);
        let targeted = reduce(t, &hyp).player(2).to_vec();
        for v in [even_word(rng, g, 2, 6), targeted] {
            let f = reduce(t, &t.gadget_map(beta, &v).unwrap());
            let pb = phi(beta, &v);
            if pb.player(beta).is_empty() {
                ensure(f.player(beta).is_empty(), || format!("B1 fails on {v:?}"))?;
            }
            ensure(f.player(alpha) == pb.player(alpha), || format!("B2 fails on {v:?}"))?;
            let u = f.player(2).to_vec();
            ensure(phi(beta, &u).player(beta).is_empty(), || format!("B3 fails on {v:?}"))?;
            ensure(phi(alpha, &u).player(alpha) == phi(alpha, &v).player(alpha), || format!("B4 fails on {v:?}"))?;
        }
        let v = conjugated_commutator(rng, &asked(g, 2));
        let a = abelianize_clause_word(g, &t.gadget_map(beta, &v).unwrap()).unwrap();
        ensure(a.lattice_is_zero() && !a.sigma, || format!("f of {v:?} leaves K"))
    }

    /// C1 and the representative form of C2 for `γ_β(x_q^(3))`.
    pub fn gadget_word(t: &HomomorphismTable, beta: usize, q: u32) -> Result<(), String> {
        let g = t.game();
        let w = reduce(t, t.gadget(beta, q).unwrap());
        ensure(w.player(1 - beta).is_empty(), || format!("C1 fails at question {q}"))?;
        let pg = t.pair_graph(2, beta);
        let r = pg.representative(Vertex::new(2, q)).unwrap().unwrap();
        let rho = pg.representative(Vertex::new(beta, base_question(g, beta))).unwrap().unwrap();
        let lhs = rep_image(g, 2, beta, w.player(2));
        ensure(lhs == reduce_letters(&[r, rho]), || format!("C2 fails at question {q}: {lhs:?} vs [{r}, {rho}]"))
    }
}
