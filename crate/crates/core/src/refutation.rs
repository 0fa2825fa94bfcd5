//! Explicit products of clauses equal to `σ` for three-player games.
//!
//! Starting from a clause word that equals `σ` modulo `K`, the pipeline
//! first clears players 1 and 2 with right inverses of the projections,
//! then rewrites the player-3 residue through the gadget maps `f1`, `f2`,
//! and finally cancels what is left against commutators whose player-1
//! and player-2 parts vanish. Every stage is checked exactly.
//!
//! Players are 0-based here: "player 3" is index 2.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::decider::{abelianize_clause_word, witness_clause_word};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::graph::{base_question, build_hypergraph, build_pair_graph, gadget_word, PairGraph, Vertex};
use crate::word::{reduce_clause_word, reduce_letters, ClauseWord, GroupWord};

/// Default cap on clause-word length at any stage.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// Precomputed right inverses and gadget words for one connected game.
#[derive(Clone, Debug)]
pub struct HomomorphismTable {
    game: Game,
    /// `simple[α][q]`: the first clause asking `q` to `α`.
    simple: Vec<Vec<Option<usize>>>,
    pairs: HashMap<(usize, usize), PairGraph>,
    /// `gadgets[β][q]`: gadget word of player-3 question `q`, `β ∈ {0, 1}`.
    gadgets: [Vec<Option<ClauseWord>>; 2],
    /// Base letter of player 3 used to write even words as pair products.
    base3: u32,
}

impl HomomorphismTable {
    pub fn new(game: &Game) -> Result<Self> {
        let (k, n) = (game.players(), game.alphabet());
        let hg = build_hypergraph(game);
        if !hg.is_connected() {
            return Err(Error::Precondition("game is not connected; decompose it first".into()));
        }
        let mut simple = vec![vec![None; n]; k];
        for (i, c) in game.clauses().iter().enumerate() {
            for (a, &q) in c.questions.iter().enumerate() {
                simple[a][q as usize].get_or_insert(i);
            }
        }
        let mut pairs = HashMap::new();
        for a in 0..k {
            for b in 0..k {
                if a != b {
                    pairs.insert((a, b), build_pair_graph(game, a, b)?);
                }
            }
        }
        let mut gadgets: [Vec<Option<ClauseWord>>; 2] = [vec![None; n], vec![None; n]];
        if k == 3 {
            for (beta, table) in gadgets.iter_mut().enumerate() {
                for q in 0..n as u32 {
                    if simple[2][q as usize].is_some() {
                        let gw = gadget_word(game, &hg, &pairs[&(2, beta)], beta, q)?;
                        table[q as usize] = Some(gw.to_clause_word());
                    }
                }
            }
        }
        let base3 = if k == 3 { base_question(game, 2) } else { 0 };
        Ok(HomomorphismTable { game: game.clone(), simple, pairs, gadgets, base3 })
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn pair_graph(&self, alpha: usize, beta: usize) -> &PairGraph {
        &self.pairs[&(alpha, beta)]
    }

    /// `φ_α`: replaces each letter by a clause asking it.
    pub fn simple_right_inverse(&self, alpha: usize, letters: &[u32]) -> Result<ClauseWord> {
        let mut cw = ClauseWord::new();
        for &q in letters {
            let c = self.simple.get(alpha).and_then(|row| row.get(q as usize)).copied().flatten().ok_or_else(|| {
                Error::Precondition(format!("question {} is never asked to player {}", q + 1, alpha + 1))
            })?;
            cw.push(c);
        }
        Ok(cw)
    }

    /// Tree path from `x_q^(α)` to its representative on the `β` side.
    pub fn path(&self, alpha: usize, beta: usize, q: u32) -> Result<ClauseWord> {
        self.pairs
            .get(&(alpha, beta))
            .ok_or_else(|| Error::Precondition("bad player pair".into()))?
            .path_word(Vertex::new(alpha, q))
    }

    /// `φ_{α,β}` on an even word: `x_i x_j ↦ P(x_i) P(x_j)⁻¹`.
    pub fn pair_right_inverse(&self, alpha: usize, beta: usize, letters: &[u32]) -> Result<ClauseWord> {
        if letters.len() % 2 == 1 {
            return Err(Error::OddLength);
        }
        let mut cw = ClauseWord::new();
        for p in letters.chunks(2) {
            cw.extend(&self.path(alpha, beta, p[0])?);
            cw.extend(&self.path(alpha, beta, p[1])?.inverse());
        }
        Ok(cw)
    }

    /// `γ_β(x_q^(3))`.
    pub fn gadget(&self, beta: usize, q: u32) -> Result<&ClauseWord> {
        self.gadgets
            .get(beta)
            .and_then(|t| t.get(q as usize))
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Precondition(format!("no gadget for question {} and player {}", q + 1, beta + 1)))
    }

    fn gadget_generator(&self, beta: usize, q: u32) -> Result<ClauseWord> {
        Ok(self.path(2, beta, q)?.concat(self.gadget(beta, q)?))
    }

    /// `f_β` on an even player-3 word: `x_i x_j ↦ g(x_i) g(x_j)⁻¹` with
    /// `g(x) = P(x) γ_β(x)`.
    pub fn gadget_map(&self, beta: usize, letters: &[u32]) -> Result<ClauseWord> {
        if self.game.players() != 3 || beta > 1 {
            return Err(Error::Precondition("gadget maps need 3 players and beta in {1, 2}".into()));
        }
        if letters.len() % 2 == 1 {
            return Err(Error::OddLength);
        }
        let mut cw = ClauseWord::new();
        for p in letters.chunks(2) {
            cw.extend(&self.gadget_generator(beta, p[0])?);
            cw.extend(&self.gadget_generator(beta, p[1])?.inverse());
        }
        Ok(cw)
    }

    fn reduce(&self, cw: &ClauseWord) -> GroupWord {
        reduce_clause_word(&self.game, cw).expect("indices come from this game")
    }

    /// `F = π3 ∘ f2 ∘ π3 ∘ f1` on an even player-3 word.
    pub fn composite(&self, letters: &[u32]) -> Result<Vec<u32>> {
        let v1 = self.reduce(&self.gadget_map(0, letters)?).player(2).to_vec();
        Ok(self.reduce(&self.gadget_map(1, &v1)?).player(2).to_vec())
    }
}

/// `w' = w · φ1(π1(w⁻¹)) · φ21(π2((w φ1(π1(w⁻¹)))⁻¹))`, which still equals
/// `σ` modulo `K` and has trivial player-1 and player-2 parts.
pub fn preprocess(table: &HomomorphismTable, w: &ClauseWord) -> Result<ClauseWord> {
    let game = table.game();
    if !abelianize_clause_word(game, w)?.is_sigma() {
        return Err(Error::Precondition("word is not σ modulo K".into()));
    }
    let inv1: Vec<u32> = table.reduce(w).player(0).iter().rev().copied().collect();
    let h = w.concat(&table.simple_right_inverse(0, &inv1)?);
    let inv2: Vec<u32> = table.reduce(&h).player(1).iter().rev().copied().collect();
    let out = h.concat(&table.pair_right_inverse(1, 0, &inv2)?).cancel_adjacent();
    let r = table.reduce(&out);
    if !r.player(0).is_empty() || !r.player(1).is_empty() {
        return Err(Error::Internal("preprocessing left a player-1 or player-2 residue".into()));
    }
    if !abelianize_clause_word(game, &out)?.is_sigma() {
        return Err(Error::Internal("preprocessing changed the class modulo K".into()));
    }
    Ok(out)
}

/// `u [x_a x_b, x_c x_d] u⁻¹` in one player's factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugatedCommutator {
    pub conjugator: Vec<u32>,
    pub left: [u32; 2],
    pub right: [u32; 2],
}

impl ConjugatedCommutator {
    /// Letters of the element, freely reduced.
    pub fn letters(&self) -> Vec<u32> {
        let [a, b] = self.left;
        let [c, d] = self.right;
        let mut seq = self.conjugator.clone();
        seq.extend([a, b, c, d, b, a, d, c]);
        seq.extend(self.conjugator.iter().rev());
        reduce_letters(&seq)
    }
}

/// Product of the factors, freely reduced.
pub fn multiply_commutators(factors: &[ConjugatedCommutator]) -> Vec<u32> {
    let mut seq = Vec::new();
    for f in factors {
        seq.extend(f.letters());
        seq = reduce_letters(&seq);
    }
    seq
}

/// A generator `y_j = x_b x_j` of the even subgroup (`b` fixed) or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct YLetter {
    gen: u32,
    inverse: bool,
}

impl YLetter {
    fn pair(self, base: u32) -> [u32; 2] {
        if self.inverse {
            [self.gen, base]
        } else {
            [base, self.gen]
        }
    }

    fn inv(self) -> YLetter {
        YLetter { gen: self.gen, inverse: !self.inverse }
    }
}

fn y_letters_to_word(ys: &[YLetter], base: u32) -> Vec<u32> {
    reduce_letters(&ys.iter().flat_map(|y| y.pair(base)).collect::<Vec<_>>())
}

/// Writes an even word with zero abelian image as a product of conjugated
/// commutators of letter pairs.
///
/// The word is rewritten over the free generators `y_j = x_base x_j` and
/// insertion-sorted by generator. Each adjacent swap `u x → x u` emits one
/// factor, `A [u, x] A⁻¹` or `B⁻¹ [u⁻¹, x⁻¹] B` (whichever conjugator is
/// shorter), where `A` and `B` are the letters before and after the pair.
///
/// ```
/// use xorgame::refutation::{decompose_into_commutators, multiply_commutators};
/// // [x0 x1, x0 x2] = x0 x1 x0 x2 x1 x0 x2 x0
/// let w = vec![0, 1, 0, 2, 1, 0, 2, 0];
/// let factors = decompose_into_commutators(&w, 0).unwrap();
/// assert_eq!(multiply_commutators(&factors), w);
/// ```
pub fn decompose_into_commutators(letters: &[u32], base: u32) -> Result<Vec<ConjugatedCommutator>> {
    let letters = reduce_letters(letters);
    if letters.len() % 2 == 1 {
        return Err(Error::OddLength);
    }
    let mut rest: Vec<YLetter> = Vec::with_capacity(letters.len());
    for p in letters.chunks(2) {
        if p[0] != base {
            rest.push(YLetter { gen: p[0], inverse: true });
        }
        if p[1] != base {
            rest.push(YLetter { gen: p[1], inverse: false });
        }
    }
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut sorted: Vec<YLetter> = Vec::with_capacity(rest.len());
    for t in 0..rest.len() {
        let x = rest[t];
        let mut pos = sorted.len();
        while pos > 0 && sorted[pos - 1].gen > x.gen {
            let u = sorted[pos - 1];
            let before = pos - 1;
            let after = sorted.len() - pos + rest.len() - t - 1;
            if before <= after {
                left.push(ConjugatedCommutator {
                    conjugator: y_letters_to_word(&sorted[..before], base),
                    left: u.pair(base),
                    right: x.pair(base),
                });
            } else {
                let mut b: Vec<YLetter> = sorted[pos..].to_vec();
                b.extend_from_slice(&rest[t + 1..]);
                let conj: Vec<u32> = y_letters_to_word(&b, base).into_iter().rev().collect();
                right.push(ConjugatedCommutator {
                    conjugator: conj,
                    left: u.inv().pair(base),
                    right: x.inv().pair(base),
                });
            }
            pos -= 1;
        }
        if pos > 0 && sorted[pos - 1] == x.inv() {
            sorted.remove(pos - 1);
        } else {
            sorted.insert(pos, x);
        }
    }
    if !sorted.is_empty() {
        return Err(Error::Precondition("word has nonzero abelian image".into()));
    }
    right.reverse();
    left.extend(right);
    Ok(left)
}

/// Explicit refutation: `sigma_word` multiplies out to exactly `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefutationCertificate {
    pub z: Vec<BigInt>,
    pub sigma_word: ClauseWord,
    pub reduced: GroupWord,
    pub stats: PipelineStats,
}

/// Clause-word lengths at each stage, for reporting.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PipelineStats {
    pub witness: usize,
    pub preprocessed: usize,
    pub residue_letters: usize,
    pub commutators: usize,
    pub gadget_stage: usize,
    pub final_len: usize,
}

fn check_cap(cw: &ClauseWord, cap: usize, stage: &'static str) -> Result<()> {
    if cw.len() > cap {
        Err(Error::CapExceeded { cap, stage })
    } else {
        Ok(())
    }
}

/// Appends with cancellation of repeated adjacent clauses.
fn append_reduced(acc: &mut Vec<usize>, cw: &ClauseWord) {
    for e in cw.entries() {
        if acc.last() == Some(&e.index) {
            acc.pop();
        } else {
            acc.push(e.index);
        }
    }
}

/// Runs the whole pipeline on a connected three-player game with witness `z`.
///
/// ```
/// use xorgame::{decider::decide_mod_k, refutation::construct_sigma_word, Game};
/// let g = Game::from_tuples(&[(&[1, 1, 1], 0), (&[1, 1, 1], 1)]).unwrap();
/// let z = decide_mod_k(&g).obstruction_z.unwrap();
/// let cert = construct_sigma_word(&g, &z, 1_000_000).unwrap();
/// assert!(cert.reduced.is_sigma());
/// ```
pub fn construct_sigma_word(game: &Game, z: &[BigInt], cap: usize) -> Result<RefutationCertificate> {
    if game.players() != 3 {
        return Err(Error::Precondition("explicit refutations need exactly 3 players".into()));
    }
    let table = HomomorphismTable::new(game)?;
    let mut stats = PipelineStats::default();

    let w = witness_clause_word(game, z)?;
    check_cap(&w, cap, "witness")?;
    stats.witness = w.len();

    let w1 = preprocess(&table, &w)?;
    check_cap(&w1, cap, "preprocessing")?;
    stats.preprocessed = w1.len();
    let v = table.reduce(&w1).player(2).to_vec();
    stats.residue_letters = v.len();

    // w'' = w' φ31(v)⁻¹ f1(v)
    let w2 =
        w1.concat(&table.pair_right_inverse(2, 0, &v)?.inverse()).concat(&table.gadget_map(0, &v)?).cancel_adjacent();
    check_cap(&w2, cap, "first gadget map")?;
    let r2 = table.reduce(&w2);
    if !r2.player(0).is_empty() || !r2.player(1).is_empty() {
        return Err(Error::Internal("first gadget stage left a player-1 or player-2 residue".into()));
    }
    let v2 = r2.player(2).to_vec();

    // w''' = w'' φ32(v2)⁻¹ f2(v2)
    let w3 =
        w2.concat(&table.pair_right_inverse(2, 1, &v2)?.inverse()).concat(&table.gadget_map(1, &v2)?).cancel_adjacent();
    check_cap(&w3, cap, "second gadget map")?;
    stats.gadget_stage = w3.len();
    let r3 = table.reduce(&w3);
    if !r3.player(0).is_empty() || !r3.player(1).is_empty() {
        return Err(Error::Internal("second gadget stage left a player-1 or player-2 residue".into()));
    }

    let factors = decompose_into_commutators(&v, table.base3)?;
    stats.commutators = factors.len();
    let mut memo: HashMap<[u32; 2], Vec<u32>> = HashMap::new();
    let mut image = |letters: &[u32]| -> Result<Vec<u32>> {
        let mut out = Vec::new();
        for p in letters.chunks(2) {
            let key = [p[0], p[1]];
            if let std::collections::hash_map::Entry::Vacant(e) = memo.entry(key) {
                e.insert(table.composite(&key)?);
            }
            out.extend_from_slice(&memo[&key]);
            out = reduce_letters(&out);
        }
        Ok(out)
    };
    if image(&v)? != r3.player(2) {
        return Err(Error::Internal("player-3 residue is not the composite image".into()));
    }

    // w'''' = Π φ3(F(u)) [φ31(F(p)), φ32(F(q))] φ3(F(u))⁻¹
    let mut w4: Vec<usize> = Vec::new();
    for f in &factors {
        let conj = table.simple_right_inverse(2, &image(&f.conjugator)?)?;
        let a = table.pair_right_inverse(2, 0, &image(&f.left)?)?;
        let b = table.pair_right_inverse(2, 1, &image(&f.right)?)?;
        for part in [&conj, &a, &b, &a.inverse(), &b.inverse(), &conj.inverse()] {
            append_reduced(&mut w4, part);
        }
        if w4.len() > cap {
            return Err(Error::CapExceeded { cap, stage: "commutator assembly" });
        }
    }
    let w4 = ClauseWord::from_indices(w4);

    let sigma_word = w3.concat(&w4.inverse()).cancel_adjacent();
    check_cap(&sigma_word, cap, "final word")?;
    stats.final_len = sigma_word.len();
    let reduced = table.reduce(&sigma_word);
    if !reduced.is_sigma() {
        return Err(Error::Internal(format!("final word reduces to {reduced}, not σ")));
    }
    Ok(RefutationCertificate { z: z.to_vec(), sigma_word, reduced, stats })
}
