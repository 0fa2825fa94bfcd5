//! Decide whether an XOR nonlocal game has a perfect commuting-operator
//! strategy, and produce a certificate either way.
//!
//! A game is perfect exactly when the central element `σ` does not lie in
//! the subgroup generated by its clauses. The crate decides the weaker
//! question "is `σ` in that subgroup modulo `K`" by exact integer linear
//! algebra, which settles three-player games completely:
//!
//! * not a member: a perfect strategy on a GHZ state exists and is returned
//!   as a table of rational phases ([`merp`]);
//! * a member: for three players an explicit product of clauses equal to `σ`
//!   is built ([`refutation`]).
//!
//! ```
//! use xorgame::{decide, parse_game, Format, Status};
//! let g = parse_game("1 1 1 0\n1 2 2 1\n2 1 2 1\n2 2 1 1", Format::Text, None).unwrap();
//! assert_eq!(decide(&g, &Default::default()).unwrap().status, Status::Perfect);
//! ```

pub mod decider;
pub mod driver;
pub mod error;
pub mod game;
pub mod graph;
pub mod linalg;
pub mod merp;
pub mod oracle;
pub mod refutation;
pub mod word;

pub use driver::{decide, verify_certificate, Certificate, DecideOptions, Status, Verdict};
pub use error::{Error, Result};
pub use game::{generate_random_game, parse_game, Clause, Format, Game};
pub use word::{ClauseWord, GroupWord};
