use seqdesign::constructions::hamming_sts;
use seqdesign::game::{
    apply_bob_reply, bob_reply, new_game, play, GameError, HammingBob, Outcome, RandomPlayer, Turn,
};

#[test]
fn random_alices_always_lose() {
    for r in 3..=5 {
        let sys = hamming_sts(r).unwrap();
        for ell in 3..=5 {
            for seed in 0..25 {
                let rec = play(&sys, ell, &mut RandomPlayer::new(seed), &mut HammingBob).unwrap();
                assert_eq!(rec.outcome, Outcome::AliceLoses, "r={r} ell={ell} seed={seed}");
                assert_eq!(rec.moves.len() % 2, 1);
            }
        }
    }
}

#[test]
fn pairing_invariant_holds_after_each_bob_move() {
    let sys = hamming_sts(4).unwrap();
    let mut g = new_game(&sys, 3).unwrap();
    let mut alice = [0u32, 4, 9, 12, 6].into_iter();
    while g.outcome().is_none() {
        g = match g.turn() {
            Turn::Alice => {
                let legal = g.legal_moves();
                let p = alice.by_ref().find(|p| legal.contains(p)).unwrap_or(legal[0]);
                g.apply_move(p).unwrap()
            }
            Turn::Bob => {
                let next = apply_bob_reply(&g).unwrap();
                assert!(next.pairing_holds());
                assert!(next.outcome().is_none());
                next
            }
        };
    }
    assert_eq!(g.outcome(), Some(Outcome::AliceLoses));
}

#[test]
fn alice_playing_u_is_caught() {
    let sys = hamming_sts(3).unwrap();
    let g = new_game(&sys, 3).unwrap().apply_move(0).unwrap();
    let g = apply_bob_reply(&g).unwrap();
    assert_eq!(g.bob_u(), Some(2));
    let g = g.apply_move(1).unwrap();
    assert_eq!(g.outcome(), Some(Outcome::AliceLoses));
    assert_eq!(bob_reply(&g).unwrap_err(), GameError::GameOver);
}
