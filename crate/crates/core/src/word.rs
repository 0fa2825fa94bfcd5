//! Exact arithmetic in the game group `(Z2 * ... * Z2)^k x Z2`.
//!
//! Every element has a unique normal form: one reduced letter sequence per
//! player (no two equal adjacent letters) and the `σ` bit.

use std::fmt;

use crate::error::{Error, Result};
use crate::game::Game;

/// Normal form of a game-group element. Letters are 0-based question indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    per_player: Vec<Vec<u32>>,
    sigma: bool,
}

/// Appends `letter` to a reduced sequence, cancelling if it repeats the last one.
fn push_letter(seq: &mut Vec<u32>, letter: u32) {
    if seq.last() == Some(&letter) {
        seq.pop();
    } else {
        seq.push(letter);
    }
}

/// Freely reduces a letter sequence using `x x = 1`.
pub fn reduce_letters(letters: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(letters.len());
    for &l in letters {
        push_letter(&mut out, l);
    }
    out
}

impl GroupWord {
    pub fn identity(players: usize) -> Self {
        GroupWord { per_player: vec![Vec::new(); players], sigma: false }
    }

    /// The central element `σ`.
    pub fn sigma(players: usize) -> Self {
        GroupWord { per_player: vec![Vec::new(); players], sigma: true }
    }

    /// Builds the element from arbitrary (unreduced) per-player letters.
    pub fn from_letters(per_player: Vec<Vec<u32>>, sigma: bool) -> Self {
        GroupWord { per_player: per_player.iter().map(|s| reduce_letters(s)).collect(), sigma }
    }

    /// A word supported on a single player.
    pub fn single_player(players: usize, alpha: usize, letters: &[u32]) -> Self {
        let mut w = GroupWord::identity(players);
        w.per_player[alpha] = reduce_letters(letters);
        w
    }

    pub fn players(&self) -> usize {
        self.per_player.len()
    }

    pub fn player(&self, alpha: usize) -> &[u32] {
        &self.per_player[alpha]
    }

    pub fn per_player(&self) -> &[Vec<u32>] {
        &self.per_player
    }

    pub fn sigma_bit(&self) -> bool {
        self.sigma
    }

    pub fn is_identity(&self) -> bool {
        !self.sigma && self.per_player.iter().all(Vec::is_empty)
    }

    pub fn is_sigma(&self) -> bool {
        self.sigma && self.per_player.iter().all(Vec::is_empty)
    }

    /// True when every player's reduced length is even (membership in `G^E`).
    pub fn is_even(&self) -> bool {
        self.per_player.iter().all(|s| s.len() % 2 == 0)
    }

    pub fn len(&self) -> usize {
        self.per_player.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// In-place right multiplication.
    pub fn mul_assign(&mut self, other: &GroupWord) {
        debug_assert_eq!(self.players(), other.players());
        for (a, b) in self.per_player.iter_mut().zip(&other.per_player) {
            for &l in b {
                push_letter(a, l);
            }
        }
        self.sigma ^= other.sigma;
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            per_player: self.per_player.iter().map(|s| s.iter().rev().copied().collect()).collect(),
            sigma: self.sigma,
        }
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (alpha, seq) in self.per_player.iter().enumerate() {
            if seq.is_empty() {
                write!(f, "-")?;
            }
            for (i, q) in seq.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "x{}^({})", q + 1, alpha + 1)?;
            }
            write!(f, " | ")?;
        }
        write!(f, "{}", if self.sigma { "σ" } else { "1" })
    }
}

/// One factor of a clause word. Clauses are involutions, so `inverted`
/// carries no meaning for the group element; it records how the factor arose.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ClauseRef {
    pub index: usize,
    pub inverted: bool,
}

/// An explicit product of clauses `h_{i1} h_{i2} ...` (0-based indices).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ClauseWord {
    entries: Vec<ClauseRef>,
}

impl ClauseWord {
    pub fn new() -> Self {
        ClauseWord::default()
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        ClauseWord { entries: indices.into_iter().map(|index| ClauseRef { index, inverted: false }).collect() }
    }

    pub fn entries(&self) -> &[ClauseRef] {
        &self.entries
    }

    pub fn indices(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.index).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, index: usize) {
        self.entries.push(ClauseRef { index, inverted: false });
    }

    pub fn extend(&mut self, other: &ClauseWord) {
        self.entries.extend_from_slice(&other.entries);
    }

    pub fn concat(&self, other: &ClauseWord) -> ClauseWord {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    /// Reversed sequence with every factor marked inverted.
    pub fn inverse(&self) -> ClauseWord {
        ClauseWord {
            entries: self.entries.iter().rev().map(|e| ClauseRef { index: e.index, inverted: !e.inverted }).collect(),
        }
    }

    /// Cancels adjacent repeated clauses (`h h = 1`). The group element is
    /// unchanged and the length parity is preserved.
    pub fn cancel_adjacent(&self) -> ClauseWord {
        let mut out: Vec<ClauseRef> = Vec::with_capacity(self.entries.len());
        for &e in &self.entries {
            if out.last().map(|l| l.index) == Some(e.index) {
                out.pop();
            } else {
                out.push(e);
            }
        }
        ClauseWord { entries: out }
    }

    /// Rewrites clause indices through `map` (used to lift words out of sub-games).
    pub fn map_indices(&self, map: &[usize]) -> ClauseWord {
        ClauseWord {
            entries: self.entries.iter().map(|e| ClauseRef { index: map[e.index], inverted: e.inverted }).collect(),
        }
    }
}

/// The group element of clause `i`.
pub fn clause_to_word(game: &Game, i: usize) -> Result<GroupWord> {
    let c = game.clause(i)?;
    Ok(GroupWord { per_player: c.questions.iter().map(|&q| vec![q]).collect(), sigma: c.parity })
}

pub fn multiply(a: &GroupWord, b: &GroupWord) -> Result<GroupWord> {
    if a.players() != b.players() {
        return Err(Error::Dimension(format!("{} vs {} players", a.players(), b.players())));
    }
    let mut out = a.clone();
    out.mul_assign(b);
    Ok(out)
}

/// Product of the referenced clauses in normal form.
pub fn reduce_clause_word(game: &Game, cw: &ClauseWord) -> Result<GroupWord> {
    let mut w = GroupWord::identity(game.players());
    for e in cw.entries() {
        let c = game.clause(e.index)?;
        for (seq, &q) in w.per_player.iter_mut().zip(&c.questions) {
            push_letter(seq, q);
        }
        w.sigma ^= c.parity;
    }
    Ok(w)
}

/// Projection onto player `alpha`'s factor; `σ` maps to the identity.
pub fn project_player(w: &GroupWord, alpha: usize) -> GroupWord {
    let mut out = GroupWord::identity(w.players());
    out.per_player[alpha] = w.per_player[alpha].clone();
    out
}

pub fn project_sigma(w: &GroupWord) -> bool {
    w.sigma
}

/// Whether the canonical-form algorithm actually ran.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CanonStatus {
    Canonical,
    /// Fewer than three letters; returned as given.
    TooShort,
}

/// Canonical representative modulo `K` of a single-player letter sequence,
/// with letters ordered by index.
///
/// Letters at odd positions (1st, 3rd, ...) and even positions are split
/// apart, letters common to both parts cancel against each other, each part
/// is sorted, and the parts are interleaved starting with the odd part.
pub fn canon_letters(letters: &[u32]) -> (Vec<u32>, CanonStatus) {
    if letters.len() < 3 {
        return (letters.to_vec(), CanonStatus::TooShort);
    }
    let mut odd: Vec<u32> = letters.iter().step_by(2).copied().collect();
    let mut even: Vec<u32> = letters.iter().skip(1).step_by(2).copied().collect();
    odd.sort_unstable();
    even.sort_unstable();
    let (mut odd_q, mut even_q) = (Vec::with_capacity(odd.len()), Vec::with_capacity(even.len()));
    let (mut i, mut j) = (0, 0);
    while i < odd.len() || j < even.len() {
        let v = match (odd.get(i), even.get(j)) {
            (Some(&a), Some(&b)) => a.min(b),
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        let o = odd[i..].iter().take_while(|&&x| x == v).count();
        let e = even[j..].iter().take_while(|&&x| x == v).count();
        let c = o.min(e);
        odd_q.extend(std::iter::repeat_n(v, o - c));
        even_q.extend(std::iter::repeat_n(v, e - c));
        i += o;
        j += e;
    }
    let mut out = Vec::with_capacity(odd_q.len() + even_q.len());
    for t in 0..odd_q.len().max(even_q.len()) {
        out.extend(odd_q.get(t));
        out.extend(even_q.get(t));
    }
    (out, CanonStatus::Canonical)
}

/// Canonical form modulo `K` of a word supported on one player.
///
/// ```
/// use xorgame::word::{canon_mod_k, GroupWord};
/// // "zgabcdef" with a..z as 1..26 (0-based 0..25)
/// let letters: Vec<u32> = "zgabcdef".bytes().map(|b| (b - b'a') as u32).collect();
/// let w = GroupWord::single_player(1, 0, &letters);
/// let c = canon_mod_k(&w).unwrap();
/// let text: String = c.player(0).iter().map(|&l| (b'a' + l as u8) as char).collect();
/// assert_eq!(text, "abcdefzg");
/// ```
pub fn canon_mod_k(w: &GroupWord) -> Result<GroupWord> {
    let used: Vec<usize> = (0..w.players()).filter(|&a| !w.per_player[a].is_empty()).collect();
    if used.len() > 1 {
        return Err(Error::Precondition("canonical form is defined for single-player words".into()));
    }
    let alpha = used.first().copied().unwrap_or(0);
    let (letters, status) = canon_letters(&w.per_player[alpha]);
    if status == CanonStatus::TooShort {
        return Err(Error::TooShort(letters.len()));
    }
    let mut out = GroupWord::identity(w.players());
    out.per_player[alpha] = letters;
    out.sigma = w.sigma;
    Ok(out)
}
