use std::io::{BufRead, Write};

use anyhow::Context;
use seqdesign::constructions::hamming_sts;
use seqdesign::game::{
    apply_bob_reply, exhaustive_bob_never_loses, new_game, play, GameError, GameRecord, HammingBob, Outcome,
    RandomPlayer, Turn,
};
use seqdesign::{BlockSystem, Point};
use serde_json::json;

use crate::io::{print_json, CmdResult, ExitContext, Failure, ALGORITHM, OK, REFUTED, USAGE};
use crate::{GameArgs, GameMode};

fn game_failure(e: GameError) -> Failure {
    let code = match e {
        GameError::StrategyInvariant(_) => ALGORITHM,
        _ => USAGE,
    };
    Failure::new(code, e)
}

fn labels(moves: &[Point]) -> Vec<Point> {
    moves.iter().map(|&p| p + 1).collect()
}

fn joined(moves: &[Point]) -> String {
    labels(moves).iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn run(args: GameArgs) -> CmdResult {
    let sys = hamming_sts(args.r).usage()?;
    match args.mode {
        GameMode::Exhaustive => exhaustive(&args),
        GameMode::Random => random(&sys, &args),
        GameMode::Interactive => {
            let stdin = std::io::stdin();
            let stdout = std::io::stdout();
            let record = interactive(&sys, args.ell, stdin.lock(), stdout.lock())?;
            if args.json {
                print_json(json!({
                    "v": 1,
                    "command": "game",
                    "mode": "interactive",
                    "r": args.r,
                    "ell": args.ell,
                    "moves": labels(&record.moves),
                    "outcome": record.outcome.as_str(),
                }));
            }
            Ok(OK)
        }
    }
}

fn exhaustive(args: &GameArgs) -> CmdResult {
    let report = exhaustive_bob_never_loses(args.r, args.ell).map_err(game_failure)?;
    if args.json {
        print_json(json!({
            "v": 1,
            "command": "game",
            "mode": "exhaustive",
            "r": args.r,
            "ell": args.ell,
            "bob_never_loses": report.bob_never_loses(),
            "lines": report.lines,
            "alice_losses": report.alice_losses,
            "bob_losses": report.bob_losses,
            "draws": report.draws,
        }));
    } else {
        println!(
            "lines {} alice-loses {} bob-loses {} draws {}",
            report.lines, report.alice_losses, report.bob_losses, report.draws
        );
        println!("bob never loses: {}", report.bob_never_loses());
    }
    Ok(if report.bob_never_loses() { OK } else { REFUTED })
}

fn random(sys: &BlockSystem, args: &GameArgs) -> CmdResult {
    let mut records = Vec::new();
    for trial in 0..args.trials {
        let seed = args.seed.wrapping_add(trial);
        let record = play(sys, args.ell, &mut RandomPlayer::new(seed), &mut HammingBob).map_err(game_failure)?;
        if !args.json {
            println!("game {trial} seed {seed}: {} -> {}", joined(&record.moves), record.outcome.as_str());
        }
        records.push((seed, record));
    }
    let all_lost = records.iter().all(|(_, r)| r.outcome == Outcome::AliceLoses);
    if args.json {
        print_json(json!({
            "v": 1,
            "command": "game",
            "mode": "random",
            "r": args.r,
            "ell": args.ell,
            "games": records.iter().map(|(seed, r)| json!({
                "seed": seed,
                "moves": labels(&r.moves),
                "outcome": r.outcome.as_str(),
            })).collect::<Vec<_>>(),
            "alice_always_loses": all_lost,
        }));
    }
    Ok(if all_lost { OK } else { REFUTED })
}

fn say(out: &mut dyn Write, text: String) -> Result<(), Failure> {
    writeln!(out, "{text}").context("writing transcript").usage()
}

const HELP: &str = "enter a point label to play it, `legal` to list free points, `resign` to give up";

/// Alice is the user, Bob plays the Hamming strategy. Points are shown by
/// their labels `1..n`.
pub fn interactive(
    sys: &BlockSystem,
    ell: usize,
    mut input: impl BufRead,
    mut out: impl Write,
) -> Result<GameRecord, Failure> {
    let mut state = new_game(sys, ell).map_err(game_failure)?;
    say(
        &mut out,
        format!("Hamming STS({}), ell = {ell}. You are Alice; {HELP}.", sys.n()),
    )?;
    let mut line = String::new();
    while state.outcome().is_none() {
        if state.turn() == Turn::Bob {
            state = apply_bob_reply(&state).map_err(game_failure)?;
            say(&mut out, format!("bob plays {}", state.moves().last().unwrap() + 1))?;
            continue;
        }
        write!(out, "> ").and_then(|_| out.flush()).context("writing prompt").usage()?;
        line.clear();
        let read = input.read_line(&mut line).context("reading move").usage()?;
        let word = line.trim();
        if read == 0 || word == "resign" {
            state = state.resign().map_err(game_failure)?;
            say(&mut out, "alice resigns".into())?;
            continue;
        }
        match word {
            "" => {}
            "help" => say(&mut out, HELP.into())?,
            "legal" => say(&mut out, format!("free: {}", joined(&state.legal_moves())))?,
            _ => match word.parse::<Point>() {
                Ok(label) if label >= 1 => match state.apply_move(label - 1) {
                    Ok(next) => {
                        state = next;
                        say(&mut out, format!("alice plays {label}"))?;
                    }
                    Err(e) => say(&mut out, format!("illegal: {e}"))?,
                },
                _ => say(&mut out, format!("unknown input `{word}`; {HELP}"))?,
            },
        }
    }
    let outcome = state.outcome().expect("loop ends with an outcome");
    say(&mut out, format!("outcome {}", outcome.as_str()))?;
    Ok(GameRecord {
        moves: state.moves().to_vec(),
        outcome,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scripted_session() {
        let sys = hamming_sts(3).unwrap();
        let mut out = Vec::new();
        let rec = interactive(&sys, 3, "legal\n1\nxyz\n1\n2\n".as_bytes(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("free: 1 2 3 4 5 6 7"));
        assert!(text.contains("bob plays 3"));
        assert!(text.contains("illegal"));
        assert_eq!(labels(&rec.moves), vec![1, 3, 2]);
        assert_eq!(rec.outcome, Outcome::AliceLoses);
    }

    #[test]
    fn end_of_input_resigns() {
        let sys = hamming_sts(3).unwrap();
        let rec = interactive(&sys, 3, "".as_bytes(), Vec::new()).unwrap();
        assert!(rec.moves.is_empty());
        assert_eq!(rec.outcome, Outcome::AliceLoses);
    }
}
