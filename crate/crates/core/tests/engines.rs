use seqdesign::constructions::{boolean_sqs, hamming_sts, skolem_sts, sqs_quadruple};
use seqdesign::oracle::{backtrack_sequencing, OracleLimits};
use seqdesign::sequencer::{
    constants_for_system, cyclic_staged_greedy, cyclic_staged_greedy_state, naive_greedy, staged_greedy,
    staged_greedy_state, threshold_cyclic, threshold_general, SequencerError,
};
use seqdesign::{first_violation, BlockSystem, TieRule};

fn systems() -> Vec<(String, BlockSystem)> {
    let mut out = Vec::new();
    for m in [6, 10, 14] {
        out.push((format!("skolem {m}"), skolem_sts(m).unwrap().0));
    }
    for r in 3..=6 {
        out.push((format!("hamming {r}"), hamming_sts(r).unwrap()));
    }
    let sqs8 = boolean_sqs(3).unwrap();
    out.push(("sqs32".into(), sqs_quadruple(&sqs8).unwrap().0));
    out.push(("sqs8".into(), sqs8));
    out
}

#[test]
fn engines_succeed_above_threshold() {
    for (name, sys) in systems() {
        let n = sys.n() as u64;
        for ell in 1..=sys.n() {
            let c = constants_for_system(&sys, ell).unwrap();
            if n >= threshold_general(&c, ell) {
                let seq = staged_greedy(&sys, ell, TieRule::Min).unwrap_or_else(|e| panic!("{name} ell={ell}: {e}"));
                assert!(first_violation(&sys, &seq, ell, false).is_none(), "{name} ell={ell}");
            }
            if n >= threshold_cyclic(&c, ell).unwrap() {
                let seq = cyclic_staged_greedy(&sys, ell, TieRule::Min)
                    .unwrap_or_else(|e| panic!("{name} cyclic ell={ell}: {e}"));
                assert!(first_violation(&sys, &seq, ell, true).is_none(), "{name} cyclic ell={ell}");
            }
        }
    }
}

#[test]
fn random_ties_still_succeed() {
    let sys = hamming_sts(6).unwrap();
    for seed in 0..5 {
        let seq = staged_greedy(&sys, 4, TieRule::Random(seed)).unwrap();
        assert!(first_violation(&sys, &seq, 4, false).is_none());
        let seq = cyclic_staged_greedy(&sys, 3, TieRule::Random(seed)).unwrap();
        assert!(first_violation(&sys, &seq, 3, true).is_none());
    }
}

#[test]
fn staged_state_is_consistent() {
    let sys = hamming_sts(6).unwrap();
    let st = staged_greedy_state(&sys, 4, TieRule::Min).unwrap();
    assert!(st.unfortunate.is_subset(&st.vprime));
    let placed: usize = st.segments.iter().map(Vec::len).sum::<usize>() + st.gaps.len() + st.tail.len();
    assert_eq!(placed, sys.n());
    let cst = cyclic_staged_greedy_state(&sys, 4, TieRule::Min).unwrap();
    assert_eq!(cst.sequencing.len(), sys.n());
}

#[test]
fn below_threshold_errors_are_typed() {
    let (sys, _) = skolem_sts(6).unwrap();
    for ell in 5..=13 {
        match staged_greedy(&sys, ell, TieRule::Min) {
            Ok(seq) => assert!(first_violation(&sys, &seq, ell, false).is_none()),
            Err(
                SequencerError::StageFailed { .. }
                | SequencerError::ReachabilityFailed { .. }
                | SequencerError::CompletionFailed { .. },
            ) => {}
            Err(e) => panic!("unexpected {e}"),
        }
    }
    assert_eq!(staged_greedy(&sys, 0, TieRule::Min), Err(SequencerError::EllZero));
}

#[test]
fn oracle_finds_what_engines_find() {
    let limits = OracleLimits::default();
    let fano = hamming_sts(3).unwrap();
    let sts15 = hamming_sts(4).unwrap();
    for (sys, ell) in [(&fano, 2), (&fano, 3), (&sts15, 3), (&sts15, 4)] {
        if staged_greedy(sys, ell, TieRule::Min).is_ok() {
            assert!(backtrack_sequencing(sys, ell, false, &limits).unwrap().is_some());
        }
        if let Some(seq) = naive_greedy(sys, ell, false, TieRule::Min) {
            assert!(first_violation(sys, &seq, ell, false).is_none());
            assert!(backtrack_sequencing(sys, ell, false, &limits).unwrap().is_some());
        }
    }
}
