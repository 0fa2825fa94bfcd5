//! End-to-end decision with certificates, and certificate checking.

use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::decider::{decide_mod_k, is_valid_obstruction};
use crate::error::{Error, Result};
use crate::game::Game;
use crate::graph::decompose_components;
use crate::merp::{simulate_merp_value, solve_merp, verify_merp_symbolic, MerpStrategy, MAX_SIMULATED_PLAYERS};
use crate::oracle::gf2_solvable;
use crate::refutation::{construct_sigma_word, DEFAULT_WORD_CAP};
use crate::word::{reduce_clause_word, ClauseWord};

/// Tolerance for the simulated value of a perfect strategy.
pub const SIMULATION_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    /// A perfect GHZ strategy exists (and no deterministic one does).
    Perfect,
    /// Every clause can be satisfied at once; the strategy is still reported.
    ClassicallyPerfect,
    /// Three players and an explicit product of clauses equals `σ`.
    NotPerfect,
    /// `σ` is in the clause subgroup modulo `K` but the game does not have
    /// three players, so the value is left open.
    Inconclusive,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Perfect => "PERFECT",
            Status::ClassicallyPerfect => "CLASSICALLY_PERFECT",
            Status::NotPerfect => "NOT_PERFECT",
            Status::Inconclusive => "NO_PERFECT_MERP_INCONCLUSIVE",
        }
    }

    pub fn from_label(s: &str) -> Option<Status> {
        [Status::Perfect, Status::ClassicallyPerfect, Status::NotPerfect, Status::Inconclusive]
            .into_iter()
            .find(|st| st.label() == s)
    }

    pub fn is_perfect(self) -> bool {
        matches!(self, Status::Perfect | Status::ClassicallyPerfect)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    Merp(MerpStrategy),
    Refutation {
        z: Vec<BigInt>,
        sigma_word: ClauseWord,
    },
    /// Witness `z` alone, for games where no explicit word is built.
    Obstruction {
        z: Vec<BigInt>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    phi: Option<Vec<Vec<String>>>,
    /// 1-based clause indices.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma_word: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    status: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    z: Option<Vec<i64>>,
}

fn z_to_i64(z: &[BigInt]) -> Result<Vec<i64>> {
    z.iter().map(|x| x.to_i64().ok_or_else(|| Error::TooLarge(format!("z entry {x}")))).collect()
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Merp(_) => "merp",
            Certificate::Refutation { .. } => "refutation",
            Certificate::Obstruction { .. } => "obstruction",
        }
    }

    /// JSON with sorted keys. `status` is informational; verification
    /// ignores it and the `verified` flag.
    pub fn to_json(&self, status: Option<Status>) -> Result<String> {
        let mut file = CertificateFile {
            kind: self.kind().into(),
            phi: None,
            sigma_word: None,
            status: status.map(|s| s.label().to_string()),
            verified: status.map(|_| true),
            z: None,
        };
        match self {
            Certificate::Merp(s) => file.phi = Some(s.to_strings()),
            Certificate::Refutation { z, sigma_word } => {
                file.z = Some(z_to_i64(z)?);
                file.sigma_word = Some(sigma_word.indices().iter().map(|i| i + 1).collect());
            }
            Certificate::Obstruction { z } => file.z = Some(z_to_i64(z)?),
        }
        let mut s = serde_json::to_string_pretty(&file)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(input: &str) -> Result<Certificate> {
        let file: CertificateFile = serde_json::from_str(input)?;
        let missing = |f: &str| Error::Parse { line: 0, msg: format!("certificate lacks `{f}`") };
        let z = || -> Result<Vec<BigInt>> {
            Ok(file.z.clone().ok_or_else(|| missing("z"))?.into_iter().map(BigInt::from).collect())
        };
        match file.kind.as_str() {
            "merp" => {
                Ok(Certificate::Merp(MerpStrategy::from_strings(&file.phi.clone().ok_or_else(|| missing("phi"))?)?))
            }
            "refutation" => {
                let word = file.sigma_word.clone().ok_or_else(|| missing("sigma_word"))?;
                if word.contains(&0) {
                    return Err(Error::Parse { line: 0, msg: "clause indices start at 1".into() });
                }
                Ok(Certificate::Refutation {
                    z: z()?,
                    sigma_word: ClauseWord::from_indices(word.into_iter().map(|i| i - 1)),
                })
            }
            "obstruction" => Ok(Certificate::Obstruction { z: z()? }),
            other => Err(Error::Parse { line: 0, msg: format!("unknown certificate kind `{other}`") }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentReport {
    /// Original 0-based clause indices in this component.
    pub clauses: Vec<usize>,
    pub member: bool,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub status: Status,
    pub certificate: Certificate,
    pub components: Vec<ComponentReport>,
}

#[derive(Clone, Copy, Debug)]
pub struct DecideOptions {
    /// Cap on clause-word length inside the refutation pipeline.
    pub cap: usize,
}

impl Default for DecideOptions {
    fn default() -> Self {
        DecideOptions { cap: DEFAULT_WORD_CAP }
    }
}

/// Decides the game component by component and returns a certificate that
/// has already been checked by [`verify_certificate`].
pub fn decide(game: &Game, opts: &DecideOptions) -> Result<Verdict> {
    let parts = decompose_components(game);
    let outcomes: Vec<_> = parts.iter().map(|p| decide_mod_k(&p.game)).collect();
    let components: Vec<ComponentReport> = parts
        .iter()
        .zip(&outcomes)
        .map(|(p, o)| ComponentReport { clauses: p.clause_map.clone(), member: o.member })
        .collect();
    let member_at = outcomes.iter().position(|o| o.member);
    let (status, certificate) = match member_at {
        None => {
            let strat = solve_merp(game).ok_or_else(|| {
                Error::Internal("no component is a member yet the phase system is inconsistent".into())
            })?;
            let status = if gf2_solvable(game) { Status::ClassicallyPerfect } else { Status::Perfect };
            (status, Certificate::Merp(strat))
        }
        Some(c) => {
            let part = &parts[c];
            let z_sub = outcomes[c].obstruction_z.clone().expect("members carry z");
            let mut z = vec![BigInt::from(0); game.num_clauses()];
            for (i, zi) in z_sub.iter().enumerate() {
                z[part.clause_map[i]] = zi.clone();
            }
            if game.players() == 3 {
                let cert = construct_sigma_word(&part.game, &z_sub, opts.cap)?;
                (
                    Status::NotPerfect,
                    Certificate::Refutation { z, sigma_word: cert.sigma_word.map_indices(&part.clause_map) },
                )
            } else {
                (Status::Inconclusive, Certificate::Obstruction { z })
            }
        }
    };
    let check = verify_certificate(game, &certificate)?;
    if !check.passed {
        return Err(Error::Internal(format!("fresh certificate failed verification: {}", check.detail)));
    }
    Ok(Verdict { status, certificate, components })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerifyReport {
    pub passed: bool,
    pub detail: String,
    /// Simulated value, for strategy certificates.
    pub simulated: Option<f64>,
}

impl VerifyReport {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        VerifyReport { passed, detail: detail.into(), simulated: None }
    }
}

/// Rechecks a certificate against a game from scratch. A certificate whose
/// shape does not fit the game is an error (`Error::Dimension`), not a
/// failed check.
pub fn verify_certificate(game: &Game, cert: &Certificate) -> Result<VerifyReport> {
    let m = game.num_clauses();
    let z_shape = |z: &[BigInt]| {
        if z.len() != m {
            Err(Error::Dimension(format!("z has {} entries for {m} clauses", z.len())))
        } else {
            Ok(())
        }
    };
    match cert {
        Certificate::Merp(strat) => {
            let exact = verify_merp_symbolic(game, strat)?;
            if !exact {
                return Ok(VerifyReport::new(false, "some clause sum misses its parity mod 2"));
            }
            if game.players() > MAX_SIMULATED_PLAYERS {
                return Ok(VerifyReport::new(true, "clause congruences hold (too many players to simulate)"));
            }
            let v = simulate_merp_value(game, strat)?.value;
            let ok = (v - 1.0).abs() <= SIMULATION_TOLERANCE;
            let mut r = VerifyReport::new(ok, format!("clause congruences hold, simulated value {v:.12}"));
            r.simulated = Some(v);
            Ok(r)
        }
        Certificate::Refutation { z, sigma_word } => {
            z_shape(z)?;
            if let Some(bad) = sigma_word.entries().iter().find(|e| e.index >= m) {
                return Err(Error::Dimension(format!("clause {} of {m}", bad.index + 1)));
            }
            if !is_valid_obstruction(game, z) {
                return Ok(VerifyReport::new(false, "z does not balance the clauses with odd parity"));
            }
            let w = reduce_clause_word(game, sigma_word)?;
            if !w.is_sigma() {
                return Ok(VerifyReport::new(false, format!("word reduces to {w}")));
            }
            Ok(VerifyReport::new(true, format!("{} clauses multiply to σ", sigma_word.len())))
        }
        Certificate::Obstruction { z } => {
            z_shape(z)?;
            let ok = is_valid_obstruction(game, z);
            Ok(VerifyReport::new(
                ok,
                if ok { "z balances every question with odd parity" } else { "z is not a valid witness" },
            ))
        }
    }
}
