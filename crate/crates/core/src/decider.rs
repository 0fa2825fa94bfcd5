//! Membership of `σ` in the clause subgroup modulo `K`.
//!
//! On even words the quotient by `K` is the abelianization: each player
//! contributes a zero-sum vector in `Z^N` and `σ` a bit. Clause word
//! `h_{r1} ... h_{r2L}` maps to `Σ_t (-1)^t e(question of r_t)` per player,
//! so `σ` is reachable iff some integer `z` balances every
//! (player, question) column of the incidence matrix `B` while `zᵀs` is odd.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::linalg::{integer_kernel_basis, IntMatrix};
use crate::word::ClauseWord;

/// Image of an even clause word in the abelianized even subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbelianVector {
    pub per_player: Vec<Vec<i64>>,
    pub sigma: bool,
}

impl AbelianVector {
    pub fn zero(players: usize, alphabet: usize) -> Self {
        AbelianVector { per_player: vec![vec![0; alphabet]; players], sigma: false }
    }

    pub fn lattice_is_zero(&self) -> bool {
        self.per_player.iter().flatten().all(|&x| x == 0)
    }

    /// True for the image of `σ`.
    pub fn is_sigma(&self) -> bool {
        self.sigma && self.lattice_is_zero()
    }
}

/// Rejects odd-length words, which have no image in the even quotient.
///
/// The first clause of the word carries sign `-1`.
pub fn abelianize_clause_word(game: &Game, cw: &ClauseWord) -> Result<AbelianVector> {
    if cw.len() % 2 == 1 {
        return Err(Error::OddLength);
    }
    let mut v = AbelianVector::zero(game.players(), game.alphabet());
    for (t, e) in cw.entries().iter().enumerate() {
        let c = game.clause(e.index)?;
        let sign = if t % 2 == 0 { -1 } else { 1 };
        for (a, &q) in c.questions.iter().enumerate() {
            v.per_player[a][q as usize] += sign;
        }
        v.sigma ^= c.parity;
    }
    Ok(v)
}

/// The `m x kN` clause incidence matrix; column `α N + q` is question `q` of
/// player `α`.
pub fn incidence_matrix(game: &Game) -> IntMatrix {
    let n = game.alphabet();
    let rows: Vec<Vec<i64>> = game
        .clauses()
        .iter()
        .map(|c| {
            let mut r = vec![0; game.players() * n];
            for (a, &q) in c.questions.iter().enumerate() {
                r[a * n + q as usize] += 1;
            }
            r
        })
        .collect();
    IntMatrix::from_rows(&rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecisionOutcome {
    /// Whether `σ` lies in the even clause subgroup modulo `K`.
    pub member: bool,
    /// A witness `z` over clauses, present iff `member`.
    pub obstruction_z: Option<Vec<BigInt>>,
}

/// Decides membership via a lattice basis of `ker Bᵀ`: some `z` has odd
/// `zᵀs` iff some basis vector does, because parity is linear.
///
/// ```
/// use xorgame::{decider::decide_mod_k, Game};
/// let g = Game::from_tuples(&[(&[1, 1, 1], 0), (&[1, 1, 1], 1)]).unwrap();
/// let out = decide_mod_k(&g);
/// assert!(out.member);
/// let z = out.obstruction_z.unwrap();
/// assert!(z == vec![1.into(), (-1).into()] || z == vec![(-1).into(), 1.into()]);
/// ```
pub fn decide_mod_k(game: &Game) -> DecisionOutcome {
    let bt = incidence_matrix(game).transpose();
    let s = game.parities();
    for z in integer_kernel_basis(&bt) {
        let parity: BigInt = z.iter().zip(&s).filter(|(_, &si)| si).map(|(x, _)| x.clone()).sum();
        if parity.is_odd() {
            let g = z.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let mut z: Vec<BigInt> = z.into_iter().map(|x| x / &g).collect();
            // first nonzero entry positive, so the sign is reproducible
            if z.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                z.iter_mut().for_each(|x| *x = -&*x);
            }
            return DecisionOutcome { member: true, obstruction_z: Some(z) };
        }
    }
    DecisionOutcome { member: false, obstruction_z: None }
}

/// Checks that `z` balances every (player, question) and has odd parity.
pub fn is_valid_obstruction(game: &Game, z: &[BigInt]) -> bool {
    if z.len() != game.num_clauses() {
        return false;
    }
    let mut balance = vec![vec![BigInt::zero(); game.alphabet()]; game.players()];
    let mut parity = BigInt::zero();
    for (c, zi) in game.clauses().iter().zip(z) {
        for (a, &q) in c.questions.iter().enumerate() {
            balance[a][q as usize] += zi;
        }
        if c.parity {
            parity += zi;
        }
    }
    balance.iter().flatten().all(Zero::is_zero) && parity.is_odd()
}

/// The even clause word `Π_{i≥2} (h_1 h_i)^{z_i}`, which equals `σ` modulo `K`.
pub fn witness_clause_word(game: &Game, z: &[BigInt]) -> Result<ClauseWord> {
    if !is_valid_obstruction(game, z) {
        return Err(Error::Precondition("z does not balance the clauses with odd parity".into()));
    }
    let mut cw = ClauseWord::new();
    let pair = |i: usize| ClauseWord::from_indices([0, i]);
    for (i, zi) in z.iter().enumerate().skip(1) {
        let reps =
            zi.abs().to_usize().ok_or_else(|| Error::TooLarge(format!("z entry {zi} is too large to expand")))?;
        let factor = if zi.is_positive() { pair(i) } else { pair(i).inverse() };
        for _ in 0..reps {
            cw.extend(&factor);
        }
    }
    Ok(cw)
}
