//! Game sessions and the in-memory store that holds them.

use std::collections::HashMap;
use std::sync::{Arc, RwLock};
use std::time::{Duration, Instant};

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use shelf_guess::document::Prob;
use shelf_guess::oracle::{conditional_closed_form, NextCardLaw};
use shelf_guess::{shelf_shuffle, Bias, Classification, GuesserState, ShuffledDeck, Strategy, Totals};

use crate::error::ApiError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Active,
    Finished,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub guess: usize,
    pub shown: usize,
    pub classification: Classification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GuessOutcome {
    pub shown: usize,
    pub correct: bool,
    pub classification: Classification,
    pub totals: Totals,
    pub remaining_count: usize,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deck: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hint {
    pub optimal_guess: usize,
    /// `[label, probability]` pairs for the next card.
    pub conditional_law: Vec<(usize, Prob)>,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SessionView {
    pub session_id: String,
    pub n: usize,
    pub p: Bias,
    pub status: Status,
    pub remaining_count: usize,
    pub totals: Totals,
    pub history: Vec<Step>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub deck: Option<Vec<usize>>,
}

/// One game. The deck stays private until every card has been shown.
#[derive(Debug)]
pub struct Session {
    id: String,
    bias: Bias,
    deck: ShuffledDeck,
    guesser: GuesserState,
    history: Vec<Step>,
    totals: Totals,
    created: Instant,
}

impl Session {
    pub fn new(id: String, bias: Bias, deck: ShuffledDeck) -> Result<Self, ApiError> {
        let guesser = GuesserState::new(deck.len(), Strategy::optimal(&bias)?)?;
        Ok(Session { id, bias, deck, guesser, history: Vec::new(), totals: Totals::default(), created: Instant::now() })
    }

    pub fn n(&self) -> usize {
        self.deck.len()
    }

    pub fn status(&self) -> Status {
        if self.history.len() == self.n() {
            Status::Finished
        } else {
            Status::Active
        }
    }

    fn revealed(&self) -> &[usize] {
        &self.deck.order()[..self.history.len()]
    }

    fn visible_deck(&self) -> Option<Vec<usize>> {
        (self.status() == Status::Finished).then(|| self.deck.order().to_vec())
    }

    fn next_card_law(&self) -> Result<NextCardLaw, ApiError> {
        Ok(conditional_closed_form(self.n(), &self.bias, self.revealed())?)
    }

    fn ensure_active(&self) -> Result<(), ApiError> {
        match self.status() {
            Status::Active => Ok(()),
            Status::Finished => Err(ApiError::conflict(format!("session {} is finished", self.id))),
        }
    }

    /// Reveals the next card and scores `label` against it. A correct guess
    /// is certified when the posterior gave the revealed card probability 1.
    pub fn guess(&mut self, label: usize) -> Result<GuessOutcome, ApiError> {
        self.ensure_active()?;
        let n = self.n();
        if !(1..=n).contains(&label) {
            return Err(ApiError::invalid(format!("label must be between 1 and {n}, got {label}")));
        }
        if !self.guesser.is_unseen(label) {
            return Err(ApiError::invalid(format!("label {label} has already been revealed")));
        }
        let law = self.next_card_law()?;
        let shown = self.deck.order()[self.history.len()];
        let classification = if label != shown {
            Classification::Incorrect
        } else if law.iter().any(|(l, x)| *l == shown && x.is_one()) {
            Classification::CertifiedCorrect
        } else {
            Classification::LuckCorrect
        };
        self.guesser.observe(shown, label)?;
        self.totals.record(classification);
        self.history.push(Step { guess: label, shown, classification });
        Ok(GuessOutcome {
            shown,
            correct: classification.is_correct(),
            classification,
            totals: self.totals,
            remaining_count: self.guesser.remaining(),
            status: self.status(),
            deck: self.visible_deck(),
        })
    }

    pub fn hint(&self) -> Result<Hint, ApiError> {
        self.ensure_active()?;
        let optimal_guess = self.guesser.next_guess()?;
        let law = self.next_card_law()?;
        let certified = law.iter().any(|(l, x)| *l == optimal_guess && x.is_one());
        Ok(Hint {
            optimal_guess,
            conditional_law: law.iter().map(|(l, x)| (*l, Prob::of(x))).collect(),
            certified,
        })
    }

    pub fn view(&self) -> SessionView {
        SessionView {
            session_id: self.id.clone(),
            n: self.n(),
            p: self.bias.clone(),
            status: self.status(),
            remaining_count: self.guesser.remaining(),
            totals: self.totals,
            history: self.history.clone(),
            deck: self.visible_deck(),
        }
    }
}

pub type SharedSession = Arc<RwLock<Session>>;

/// Sessions keyed by id. A session expires `ttl` after it was created.
#[derive(Debug)]
pub struct SessionStore {
    ttl: Duration,
    sessions: RwLock<HashMap<String, SharedSession>>,
}

impl SessionStore {
    pub fn new(ttl: Duration) -> Self {
        SessionStore { ttl, sessions: RwLock::new(HashMap::new()) }
    }

    /// Shuffles a hidden deck, from `seed` when given.
    pub fn create(&self, n: usize, bias: Bias, seed: Option<u64>) -> Result<String, ApiError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or_else(rand::random));
        let deck = shelf_shuffle(n, &bias, &mut rng)?;
        self.create_with_deck(bias, deck)
    }

    /// Starts a session on a given deck, for scripted replays.
    pub fn create_with_deck(&self, bias: Bias, deck: ShuffledDeck) -> Result<String, ApiError> {
        let id = uuid::Uuid::new_v4().simple().to_string();
        let session = Session::new(id.clone(), bias, deck)?;
        self.sessions.write().expect("session map poisoned").insert(id.clone(), Arc::new(RwLock::new(session)));
        Ok(id)
    }

    pub fn get(&self, id: &str) -> Result<SharedSession, ApiError> {
        let found = self.sessions.read().expect("session map poisoned").get(id).cloned();
        let session = found.ok_or_else(|| ApiError::not_found(id))?;
        let expired = session.read().expect("session poisoned").created.elapsed() >= self.ttl;
        if expired {
            self.sessions.write().expect("session map poisoned").remove(id);
            return Err(ApiError::not_found(id));
        }
        Ok(session)
    }

    /// Drops expired sessions and returns how many were removed.
    pub fn purge_expired(&self) -> usize {
        let mut map = self.sessions.write().expect("session map poisoned");
        let before = map.len();
        map.retain(|_, s| s.read().map(|s| s.created.elapsed() < self.ttl).unwrap_or(false));
        before - map.len()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().expect("session map poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
