//! The two-player sequencing game: Alice and Bob append points in turn and
//! whoever first breaks `ell`-goodness loses.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::designs::{BlockSystem, Kind, Point};
use crate::goodness::completes_block;
use crate::sequencer::tail;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("the game needs ell >= 3, got {0}")]
    EllTooSmall(usize),
    #[error("point {0} was already played")]
    PointUsed(Point),
    #[error("point {point} out of range for n = {n}")]
    PointOutOfRange { point: Point, n: usize },
    #[error("the game is over")]
    GameOver,
    #[error("it is not Bob's turn")]
    NotBobsTurn,
    #[error("the system is not a Hamming triple system")]
    NotHammingSystem,
    #[error("strategy invariant broken: {0}")]
    StrategyInvariant(String),
    #[error("exhaustive search is limited to r <= 4, got r = {0}")]
    TooLarge(usize),
    #[error("player could not move: {0}")]
    Player(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Turn {
    Alice,
    Bob,
}

impl Turn {
    fn other(self) -> Turn {
        match self {
            Turn::Alice => Turn::Bob,
            Turn::Bob => Turn::Alice,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    AliceLoses,
    BobLoses,
    Draw,
}

impl Outcome {
    fn lost_by(turn: Turn) -> Outcome {
        match turn {
            Turn::Alice => Outcome::AliceLoses,
            Turn::Bob => Outcome::BobLoses,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::AliceLoses => "alice-loses",
            Outcome::BobLoses => "bob-loses",
            Outcome::Draw => "draw",
        }
    }
}

/// Whether the system is the Hamming triple system: `n = 2^r - 1` and every
/// block's labels (`id + 1`) XOR to zero.
pub fn is_hamming(sys: &BlockSystem) -> bool {
    let n = sys.n();
    sys.kind() == Kind::Sts
        && (n + 1).is_power_of_two()
        && n >= 3
        && sys
            .blocks()
            .iter()
            .all(|b| b.points().iter().fold(0, |acc, &p| acc ^ (p + 1)) == 0)
}

#[derive(Clone, Debug)]
pub struct GameState<'a> {
    sys: &'a BlockSystem,
    ell: usize,
    seq: Vec<Point>,
    used: Vec<bool>,
    turn: Turn,
    bob_u: Option<Point>,
    outcome: Option<Outcome>,
    hamming: bool,
}

pub fn new_game(sys: &BlockSystem, ell: usize) -> Result<GameState<'_>, GameError> {
    if ell < 3 {
        return Err(GameError::EllTooSmall(ell));
    }
    Ok(GameState {
        sys,
        ell,
        seq: Vec::with_capacity(sys.n()),
        used: vec![false; sys.n()],
        turn: Turn::Alice,
        bob_u: None,
        outcome: None,
        hamming: is_hamming(sys),
    })
}

impl<'a> GameState<'a> {
    pub fn system(&self) -> &'a BlockSystem {
        self.sys
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn moves(&self) -> &[Point] {
        &self.seq
    }

    pub fn turn(&self) -> Turn {
        self.turn
    }

    /// Bob's pairing label, once chosen.
    pub fn bob_u(&self) -> Option<Point> {
        self.bob_u
    }

    pub fn outcome(&self) -> Option<Outcome> {
        self.outcome
    }

    pub fn is_used(&self, p: Point) -> bool {
        self.used.get(p as usize).copied().unwrap_or(false)
    }

    pub fn legal_moves(&self) -> Vec<Point> {
        if self.outcome.is_some() {
            return Vec::new();
        }
        (0..self.sys.n() as Point).filter(|&p| !self.used[p as usize]).collect()
    }

    /// Whether playing `p` now would break goodness.
    pub fn is_losing(&self, p: Point) -> bool {
        completes_block(self.sys, tail(&self.seq, self.ell - 1), p)
    }

    pub fn apply_move(&self, p: Point) -> Result<GameState<'a>, GameError> {
        let mut next = self.clone();
        next.play_in_place(p)?;
        Ok(next)
    }

    fn play_in_place(&mut self, p: Point) -> Result<(), GameError> {
        if self.outcome.is_some() {
            return Err(GameError::GameOver);
        }
        let n = self.sys.n();
        if p as usize >= n {
            return Err(GameError::PointOutOfRange { point: p, n });
        }
        if self.used[p as usize] {
            return Err(GameError::PointUsed(p));
        }
        let losing = self.is_losing(p);
        self.seq.push(p);
        self.used[p as usize] = true;
        if losing {
            self.outcome = Some(Outcome::lost_by(self.turn));
        } else if self.seq.len() == n {
            self.outcome = Some(Outcome::Draw);
        }
        self.turn = self.turn.other();
        Ok(())
    }

    /// Ends the game with the player to move losing.
    pub fn resign(&self) -> Result<GameState<'a>, GameError> {
        if self.outcome.is_some() {
            return Err(GameError::GameOver);
        }
        let mut next = self.clone();
        next.outcome = Some(Outcome::lost_by(self.turn));
        Ok(next)
    }

    /// Checks that the used points pair up as `{x, x ^ u}` in label terms.
    pub fn pairing_holds(&self) -> bool {
        let Some(u) = self.bob_u else {
            return self.seq.is_empty();
        };
        self.seq.iter().all(|&x| {
            let partner = (x + 1) ^ u;
            partner != 0 && self.is_used(partner - 1)
        })
    }
}

/// Bob's reply in the Hamming system: pick `u` once (the smallest label other
/// than Alice's first), then answer every `x` with `x ^ u` (labels).
pub fn bob_reply(state: &GameState<'_>) -> Result<(Point, Point), GameError> {
    if !state.hamming {
        return Err(GameError::NotHammingSystem);
    }
    if state.outcome.is_some() {
        return Err(GameError::GameOver);
    }
    if state.turn != Turn::Bob {
        return Err(GameError::NotBobsTurn);
    }
    let v = state.seq.last().copied().expect("Alice has moved") + 1;
    let u = state.bob_u.unwrap_or(if v == 1 { 2 } else { 1 });
    let reply = v ^ u;
    if reply == 0 {
        return Err(GameError::StrategyInvariant(format!(
            "Alice played Bob's pairing label {u}"
        )));
    }
    if state.is_used(reply - 1) {
        return Err(GameError::StrategyInvariant(format!("reply label {reply} already used")));
    }
    Ok((reply - 1, u))
}

/// Applies Bob's strategic reply and checks the pairing invariant.
pub fn apply_bob_reply<'a>(state: &GameState<'a>) -> Result<GameState<'a>, GameError> {
    let (p, u) = bob_reply(state)?;
    let mut next = state.clone();
    next.bob_u = Some(u);
    next.play_in_place(p)?;
    if !next.pairing_holds() {
        return Err(GameError::StrategyInvariant("used points do not pair up".into()));
    }
    Ok(next)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Move {
    Play(Point),
    Resign,
}

pub trait Player {
    fn choose(&mut self, state: &GameState<'_>) -> Result<Move, GameError>;

    /// Whether this player is the Hamming strategy, which records `u`.
    fn is_hamming_bob(&self) -> bool {
        false
    }
}

pub struct RandomPlayer {
    rng: ChaCha8Rng,
}

impl RandomPlayer {
    pub fn new(seed: u64) -> RandomPlayer {
        RandomPlayer {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Player for RandomPlayer {
    fn choose(&mut self, state: &GameState<'_>) -> Result<Move, GameError> {
        let moves = state.legal_moves();
        let p = moves.choose(&mut self.rng).ok_or(GameError::GameOver)?;
        Ok(Move::Play(*p))
    }
}

/// Plays a fixed list of points, then the smallest unused point.
pub struct ScriptPlayer {
    script: std::vec::IntoIter<Point>,
}

impl ScriptPlayer {
    pub fn new(script: Vec<Point>) -> ScriptPlayer {
        ScriptPlayer {
            script: script.into_iter(),
        }
    }
}

impl Player for ScriptPlayer {
    fn choose(&mut self, state: &GameState<'_>) -> Result<Move, GameError> {
        match self.script.next() {
            Some(p) => Ok(Move::Play(p)),
            None => state.legal_moves().first().map(|&p| Move::Play(p)).ok_or(GameError::GameOver),
        }
    }
}

pub struct HammingBob;

impl Player for HammingBob {
    fn choose(&mut self, state: &GameState<'_>) -> Result<Move, GameError> {
        bob_reply(state).map(|(p, _)| Move::Play(p))
    }

    fn is_hamming_bob(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameRecord {
    pub moves: Vec<Point>,
    pub outcome: Outcome,
}

pub fn play(
    sys: &BlockSystem,
    ell: usize,
    alice: &mut dyn Player,
    bob: &mut dyn Player,
) -> Result<GameRecord, GameError> {
    let mut state = new_game(sys, ell)?;
    while state.outcome.is_none() {
        let player: &mut dyn Player = match state.turn {
            Turn::Alice => &mut *alice,
            Turn::Bob => &mut *bob,
        };
        state = if state.turn == Turn::Bob && player.is_hamming_bob() {
            apply_bob_reply(&state)?
        } else {
            match player.choose(&state)? {
                Move::Play(p) => state.apply_move(p)?,
                Move::Resign => state.resign()?,
            }
        };
    }
    Ok(GameRecord {
        moves: state.seq,
        outcome: state.outcome.expect("loop ends with an outcome"),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ExhaustiveReport {
    pub lines: u64,
    pub alice_losses: u64,
    pub bob_losses: u64,
    pub draws: u64,
}

impl ExhaustiveReport {
    pub fn bob_never_loses(&self) -> bool {
        self.lines > 0 && self.alice_losses == self.lines
    }

    fn add(self, o: ExhaustiveReport) -> ExhaustiveReport {
        ExhaustiveReport {
            lines: self.lines + o.lines,
            alice_losses: self.alice_losses + o.alice_losses,
            bob_losses: self.bob_losses + o.bob_losses,
            draws: self.draws + o.draws,
        }
    }

    fn single(o: Outcome) -> ExhaustiveReport {
        ExhaustiveReport {
            lines: 1,
            alice_losses: u64::from(o == Outcome::AliceLoses),
            bob_losses: u64::from(o == Outcome::BobLoses),
            draws: u64::from(o == Outcome::Draw),
        }
    }
}

fn explore(state: &GameState<'_>) -> Result<ExhaustiveReport, GameError> {
    let mut total = ExhaustiveReport::default();
    for p in state.legal_moves() {
        let after_alice = state.apply_move(p)?;
        let report = match after_alice.outcome {
            Some(o) => ExhaustiveReport::single(o),
            None => {
                let after_bob = apply_bob_reply(&after_alice)?;
                match after_bob.outcome {
                    Some(o) => ExhaustiveReport::single(o),
                    None => explore(&after_bob)?,
                }
            }
        };
        total = total.add(report);
    }
    Ok(total)
}

/// Every line of Alice's play against the Hamming strategy, each run until
/// the game ends.
pub fn exhaustive_bob_never_loses(r: usize, ell: usize) -> Result<ExhaustiveReport, GameError> {
    if r > 4 {
        return Err(GameError::TooLarge(r));
    }
    let sys = crate::constructions::hamming_sts(r).map_err(|e| GameError::Player(e.to_string()))?;
    let start = new_game(&sys, ell)?;
    start
        .legal_moves()
        .into_par_iter()
        .map(|p| {
            let after_alice = start.apply_move(p)?;
            if let Some(o) = after_alice.outcome {
                return Ok(ExhaustiveReport::single(o));
            }
            let after_bob = apply_bob_reply(&after_alice)?;
            match after_bob.outcome {
                Some(o) => Ok(ExhaustiveReport::single(o)),
                None => explore(&after_bob),
            }
        })
        .try_reduce(ExhaustiveReport::default, |a, b| Ok(a.add(b)))
}
