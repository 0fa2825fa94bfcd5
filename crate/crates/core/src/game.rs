//! XOR game instances: validation, the text and JSON formats, and seeded
//! random generation.
//!
//! Question indices are 1-based in both external formats and 0-based in
//! memory.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One round of the game: a question for each player and the target parity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    /// 0-based question index per player.
    pub questions: Vec<u32>,
    pub parity: bool,
}

impl Clause {
    pub fn new(questions: Vec<u32>, parity: bool) -> Self {
        Clause { questions, parity }
    }
}

/// A kXOR game with `players` players, `alphabet` questions per player and
/// a multiset of clauses (kept in input order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Game {
    players: usize,
    alphabet: usize,
    clauses: Vec<Clause>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Game {
    pub fn new(players: usize, alphabet: usize, clauses: Vec<Clause>) -> Result<Self> {
        if players < 2 {
            return Err(Error::InvalidGame(format!("need at least 2 players, got {players}")));
        }
        if alphabet < 1 {
            return Err(Error::InvalidGame("alphabet must be nonempty".into()));
        }
        if clauses.is_empty() {
            return Err(Error::InvalidGame("no clauses".into()));
        }
        for (i, c) in clauses.iter().enumerate() {
            if c.questions.len() != players {
                return Err(Error::InvalidGame(format!(
                    "clause {} has {} questions, expected {players}",
                    i + 1,
                    c.questions.len()
                )));
            }
            if let Some(q) = c.questions.iter().find(|&&q| q as usize >= alphabet) {
                return Err(Error::OutOfRange(format!(
                    "clause {} asks question {} but the alphabet has {alphabet}",
                    i + 1,
                    q + 1
                )));
            }
        }
        Ok(Game { players, alphabet, clauses })
    }

    /// Builds a game from 1-based question tuples, inferring `N`.
    ///
    /// ```
    /// use xorgame::Game;
    /// let g = Game::from_tuples(&[(&[1, 1, 1], 0), (&[1, 2, 2], 1)]).unwrap();
    /// assert_eq!((g.players(), g.alphabet(), g.num_clauses()), (3, 2, 2));
    /// ```
    pub fn from_tuples(rows: &[(&[u32], u8)]) -> Result<Self> {
        let players = rows.first().map_or(0, |r| r.0.len());
        let mut clauses = Vec::with_capacity(rows.len());
        let mut alphabet = 1;
        for (qs, s) in rows {
            if qs.contains(&0) {
                return Err(Error::OutOfRange("question indices start at 1".into()));
            }
            if *s > 1 {
                return Err(Error::InvalidGame(format!("parity {s} is not a bit")));
            }
            alphabet = alphabet.max(qs.iter().copied().max().unwrap_or(1) as usize);
            clauses.push(Clause::new(qs.iter().map(|q| q - 1).collect(), *s == 1));
        }
        Game::new(players, alphabet, clauses)
    }

    pub fn players(&self) -> usize {
        self.players
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clause(&self, i: usize) -> Result<&Clause> {
        self.clauses.get(i).ok_or_else(|| Error::OutOfRange(format!("clause {} of {}", i + 1, self.clauses.len())))
    }

    /// Question asked to player `alpha` in clause `i` (both 0-based).
    pub fn question(&self, i: usize, alpha: usize) -> u32 {
        self.clauses[i].questions[alpha]
    }

    pub fn parities(&self) -> Vec<bool> {
        self.clauses.iter().map(|c| c.parity).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("alphabet {}\n", self.alphabet);
        for c in &self.clauses {
            for q in &c.questions {
                out.push_str(&(q + 1).to_string());
                out.push(' ');
            }
            out.push(if c.parity { '1' } else { '0' });
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = JsonGame {
            alphabet: Some(self.alphabet),
            clauses: self
                .clauses
                .iter()
                .map(|c| JsonClause { q: c.questions.iter().map(|&q| q as i64 + 1).collect(), s: c.parity as i64 })
                .collect(),
            players: Some(self.players),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("game serializes");
        s.push('\n');
        s
    }

    pub fn serialize(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }
}

// Field order is alphabetical so the output is both fixed-order and
// key-sorted.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonGame {
    #[serde(skip_serializing_if = "Option::is_none")]
    alphabet: Option<usize>,
    clauses: Vec<JsonClause>,
    #[serde(skip_serializing_if = "Option::is_none")]
    players: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonClause {
    q: Vec<i64>,
    s: i64,
}

/// Parses a game. `alphabet` overrides any size declared in the input.
///
/// The text format is one clause per line (question indices, then the parity
/// bit) with `#` comments and an optional `alphabet N` line.
pub fn parse_game(input: &str, format: Format, alphabet: Option<usize>) -> Result<Game> {
    match format {
        Format::Text => parse_text(input, alphabet),
        Format::Json => parse_json(input, alphabet),
    }
}

fn parse_text(input: &str, declared: Option<usize>) -> Result<Game> {
    let mut header: Option<usize> = None;
    let mut rows: Vec<(usize, Vec<i64>, i64)> = Vec::new();
    for (n, raw) in input.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = body.split_whitespace().collect();
        if tokens[0] == "alphabet" {
            if tokens.len() != 2 || !rows.is_empty() || header.is_some() {
                return Err(Error::Parse { line, msg: "misplaced or malformed `alphabet` line".into() });
            }
            let n = tokens[1]
                .parse::<usize>()
                .map_err(|_| Error::Parse { line, msg: format!("bad alphabet size `{}`", tokens[1]) })?;
            header = Some(n);
            continue;
        }
        let mut nums = Vec::with_capacity(tokens.len());
        for t in &tokens {
            nums.push(t.parse::<i64>().map_err(|_| Error::Parse { line, msg: format!("not an integer: `{t}`") })?);
        }
        let s = nums.pop().unwrap();
        rows.push((line, nums, s));
    }
    build(rows, declared.or(header))
}

fn parse_json(input: &str, declared: Option<usize>) -> Result<Game> {
    let doc: JsonGame = serde_json::from_str(input)?;
    let rows: Vec<(usize, Vec<i64>, i64)> =
        doc.clauses.into_iter().enumerate().map(|(i, c)| (i + 1, c.q, c.s)).collect();
    if let (Some(k), Some((line, q, _))) = (doc.players, rows.first()) {
        if q.len() != k {
            return Err(Error::Parse {
                line: *line,
                msg: format!("`players` is {k} but clause has {} questions", q.len()),
            });
        }
    }
    build(rows, declared.or(doc.alphabet))
}

// `line` is a line number for text input and a clause number for JSON.
fn build(rows: Vec<(usize, Vec<i64>, i64)>, declared: Option<usize>) -> Result<Game> {
    let Some(first) = rows.first() else {
        return Err(Error::InvalidGame("no clauses".into()));
    };
    let k = first.1.len();
    if k < 2 {
        return Err(Error::Parse { line: first.0, msg: format!("need at least 2 players, got {k}") });
    }
    let mut max_q = 1i64;
    let mut clauses = Vec::with_capacity(rows.len());
    for (line, qs, s) in rows {
        if qs.len() != k {
            return Err(Error::Parse { line, msg: format!("expected {k} questions, found {}", qs.len()) });
        }
        if s != 0 && s != 1 {
            return Err(Error::Parse { line, msg: format!("parity must be 0 or 1, got {s}") });
        }
        let mut q0 = Vec::with_capacity(k);
        for &q in &qs {
            if q < 1 || q > u32::MAX as i64 {
                return Err(Error::OutOfRange(format!("line {line}: question index {q}")));
            }
            if let Some(n) = declared {
                if q as usize > n {
                    return Err(Error::OutOfRange(format!("line {line}: question {q} exceeds declared alphabet {n}")));
                }
            }
            max_q = max_q.max(q);
            q0.push((q - 1) as u32);
        }
        clauses.push(Clause::new(q0, s == 1));
    }
    Game::new(k, declared.unwrap_or(max_q as usize), clauses)
}

/// Uniformly random game, a pure function of its arguments.
pub fn generate_random_game(players: usize, alphabet: usize, clauses: usize, seed: u64) -> Result<Game> {
    if players < 2 || alphabet < 1 || clauses < 1 {
        return Err(Error::Precondition(format!("need k >= 2, N >= 1, m >= 1 (got {players}, {alphabet}, {clauses})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cs = (0..clauses)
        .map(|_| {
            let qs = (0..players).map(|_| rng.gen_range(0..alphabet as u32)).collect();
            Clause::new(qs, rng.gen_range(0..2u8) == 1)
        })
        .collect();
    Game::new(players, alphabet, cs)
}
