//! Relative-phase strategies on a GHZ state.
//!
//! Player `α` answers question `q` by measuring
//! `M(θ) = exp(iθZ) X exp(-iθZ)` with `θ = φ[α][q] · π/2`. On
//! `(|0…0⟩ + |1…1⟩)/√2` a clause has expectation `cos(π Σ φ)`, so the
//! strategy is perfect iff every clause sum is congruent to its parity
//! mod 2.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::game::Game;
use crate::graph::base_question;
use crate::linalg::{mod2, solve_mod2_over_rationals, IntMatrix, Mod2Solution};

/// Phase table `φ[player][question]`, entries in `[0, 2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MerpStrategy {
    pub phi: Vec<Vec<BigRational>>,
}

impl MerpStrategy {
    pub fn zeros(players: usize, alphabet: usize) -> Self {
        MerpStrategy { phi: vec![vec![BigRational::zero(); alphabet]; players] }
    }

    /// Phases as `"p/q"` strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.phi.iter().map(|row| row.iter().map(|p| format!("{}/{}", p.numer(), p.denom())).collect()).collect()
    }

    /// Parses `"p/q"` (or integer) strings, reducing each phase mod 2.
    pub fn from_strings(rows: &[Vec<String>]) -> Result<Self> {
        let phi = rows
            .iter()
            .map(|row| row.iter().map(|s| parse_fraction(s).map(|x| mod2(&x))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(MerpStrategy { phi })
    }

    fn check_shape(&self, game: &Game) -> Result<()> {
        if self.phi.len() != game.players() || self.phi.iter().any(|r| r.len() != game.alphabet()) {
            return Err(Error::Dimension(format!(
                "strategy table does not match {} players x {} questions",
                game.players(),
                game.alphabet()
            )));
        }
        Ok(())
    }

    /// Exact phase sum of clause `i`.
    fn clause_sum(&self, game: &Game, i: usize) -> BigRational {
        game.clauses()[i].questions.iter().enumerate().map(|(a, &q)| self.phi[a][q as usize].clone()).sum()
    }
}

pub fn parse_fraction(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse { line: 0, msg: format!("bad fraction `{s}`") };
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// A perfect strategy, or `None` when the congruences are inconsistent.
///
/// Gauge: shifting all of one player's phases by `c` and another's by `-c`
/// preserves every clause sum, so each player after the first has the phase
/// of its smallest asked question pinned to 0. Questions nobody asks also get 0.
///
/// ```
/// use xorgame::{merp::solve_merp, Game};
/// let g = Game::from_tuples(&[(&[1, 1, 1], 0), (&[1, 2, 2], 1), (&[2, 1, 2], 1), (&[2, 2, 1], 1)]).unwrap();
/// let s = solve_merp(&g).unwrap();
/// let strings = s.to_strings();
/// assert!(strings.iter().all(|row| row == &["0/1", "1/2"]));
/// ```
pub fn solve_merp(game: &Game) -> Option<MerpStrategy> {
    let (k, n) = (game.players(), game.alphabet());
    let mut used = vec![vec![false; n]; k];
    for c in game.clauses() {
        for (a, &q) in c.questions.iter().enumerate() {
            used[a][q as usize] = true;
        }
    }
    for a in 1..k {
        used[a][base_question(game, a) as usize] = false;
    }
    let columns: Vec<(usize, usize)> =
        (0..k).flat_map(|a| (0..n).map(move |q| (a, q))).filter(|&(a, q)| used[a][q]).collect();
    let rows: Vec<Vec<i64>> = game
        .clauses()
        .iter()
        .map(|c| columns.iter().map(|&(a, q)| (c.questions[a] as usize == q) as i64).collect())
        .collect();
    let s: Vec<i64> = game.clauses().iter().map(|c| c.parity as i64).collect();
    match solve_mod2_over_rationals(&IntMatrix::from_rows(&rows), &s).expect("dimensions agree") {
        Mod2Solution::Solution(x) => {
            let mut strat = MerpStrategy::zeros(k, n);
            for (&(a, q), v) in columns.iter().zip(x) {
                strat.phi[a][q] = v;
            }
            Some(strat)
        }
        Mod2Solution::Obstruction(_) => None,
    }
}

/// Exact check of every clause congruence `Σ φ ≡ s (mod 2)`.
pub fn verify_merp_symbolic(game: &Game, strat: &MerpStrategy) -> Result<bool> {
    strat.check_shape(game)?;
    Ok((0..game.num_clauses()).all(|i| {
        let d = strat.clause_sum(game, i) - BigRational::from_integer(BigInt::from(game.clauses()[i].parity as u8));
        d.is_integer() && d.to_integer().is_even()
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrategyValue {
    pub value: f64,
    pub exact_perfect: bool,
}

/// The single-qubit observable `[[0, e^{2iθ}], [e^{-2iθ}, 0]]`.
pub fn observable(theta: f64) -> [[Complex64; 2]; 2] {
    let z = Complex64::new(0.0, 0.0);
    [[z, Complex64::from_polar(1.0, 2.0 * theta)], [Complex64::from_polar(1.0, -2.0 * theta), z]]
}

fn angle(phi: &BigRational) -> f64 {
    phi.to_f64().expect("finite phase") * PI / 2.0
}

/// Largest player count the state-vector simulator accepts.
pub const MAX_SIMULATED_PLAYERS: usize = 12;

/// Score by explicit state-vector simulation.
pub fn simulate_merp_value(game: &Game, strat: &MerpStrategy) -> Result<StrategyValue> {
    strat.check_shape(game)?;
    let k = game.players();
    if k > MAX_SIMULATED_PLAYERS {
        return Err(Error::TooLarge(format!("{k} qubits")));
    }
    let dim = 1usize << k;
    let amp = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let mut ghz = vec![Complex64::new(0.0, 0.0); dim];
    ghz[0] = amp;
    ghz[dim - 1] = amp;
    let mut total = 0.0;
    for c in game.clauses() {
        let mut state = ghz.clone();
        for (a, &q) in c.questions.iter().enumerate() {
            let m = observable(angle(&strat.phi[a][q as usize]));
            let bit = 1usize << a;
            for i0 in (0..dim).filter(|i| i & bit == 0) {
                let (x0, x1) = (state[i0], state[i0 | bit]);
                state[i0] = m[0][0] * x0 + m[0][1] * x1;
                state[i0 | bit] = m[1][0] * x0 + m[1][1] * x1;
            }
        }
        let expect: Complex64 = ghz.iter().zip(&state).map(|(a, b)| a.conj() * b).sum();
        total += if c.parity { -expect.re } else { expect.re };
    }
    Ok(StrategyValue {
        value: 0.5 + total / (2.0 * game.num_clauses() as f64),
        exact_perfect: verify_merp_symbolic(game, strat)?,
    })
}

/// Closed form `1/2 + (1/2m) Σ_j cos(π Σφ) (-1)^{s_j}`.
pub fn analytic_merp_value(game: &Game, strat: &MerpStrategy) -> Result<f64> {
    strat.check_shape(game)?;
    let total: f64 = (0..game.num_clauses())
        .map(|i| {
            let c = (PI * mod2(&strat.clause_sum(game, i)).to_f64().unwrap()).cos();
            if game.clauses()[i].parity {
                -c
            } else {
                c
            }
        })
        .sum();
    Ok(0.5 + total / (2.0 * game.num_clauses() as f64))
}

fn mat_mul(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Checks `M1 M2 M3 M4 = M3 M4 M1 M2` entrywise to `1e-12`: products of two
/// observables commute, as the relations modulo `K` require.
pub fn merp_observables_respect_k(thetas: [f64; 4]) -> bool {
    let m = thetas.map(observable);
    let p12 = mat_mul(&m[0], &m[1]);
    let p34 = mat_mul(&m[2], &m[3]);
    let lhs = mat_mul(&p12, &p34);
    let rhs = mat_mul(&p34, &p12);
    (0..2).all(|i| (0..2).all(|j| (lhs[i][j] - rhs[i][j]).norm() <= 1e-12))
}
