//! Guessing cards with full feedback against a deck shuffled once on a shelf.
//!
//! A deck `1..=n` is shelf-shuffled once: cards are taken from the bottom
//! and put on top of a pile with probability `p`, else on its bottom. The
//! cards are then drawn one at a time; before each draw a player guesses
//! its label and the card is shown regardless.
//!
//! This crate models the shuffle ([`shuffle`]), plays the optimal strategy
//! ([`strategy`]), computes exact laws of the number of correct guesses
//! and of its split into pure-luck and certified guesses ([`exact`]),
//! checks all of it against brute-force enumeration ([`oracle`]) and runs
//! seeded simulations ([`montecarlo`]).
//!
//! ```
//! use shelf_guess::{exact, Bias};
//! use num_rational::BigRational;
//!
//! let law = exact::xn_pmf::<BigRational>(4, &Bias::half()).unwrap();
//! assert_eq!(law.mean(), BigRational::from_integer(3.into()));
//! ```

pub mod checks;
pub mod document;
pub mod errata;
pub mod error;
pub mod exact;
pub mod montecarlo;
pub mod oracle;
pub mod scalar;
pub mod shuffle;
pub mod strategy;

pub use error::{Error, Result};
pub use scalar::{Backend, Bias, Scalar};
pub use shuffle::{deck_from_placements, first_card_law, position_matrix, shelf_shuffle, PlacementSequence, ShuffledDeck};
pub use strategy::{play_game, Classification, GameRecord, GuesserState, Strategy, Totals};
