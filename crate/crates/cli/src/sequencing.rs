use seqdesign::format::write_seq;
use seqdesign::oracle::{backtrack_sequencing, oracle_max_ell, OracleLimits};
use seqdesign::sequencer::{
    constants_for_system, cyclic_staged_greedy, naive_greedy, staged_greedy, threshold_cyclic, threshold_general,
};
use seqdesign::{first_violation, max_good_ell, BlockSystem, TieRule};
use serde_json::json;

use crate::io::{
    algorithm_error, check_lengths, emit, load_design, load_seq, print_json, usage_error, CmdResult, ExitContext, OK,
    REFUTED,
};
use crate::{Algo, MaxellArgs, OracleArgs, SequenceArgs, Tie, VerifyArgs};

fn threshold(sys: &BlockSystem, ell: usize, cyclic: bool) -> Result<u64, crate::io::Failure> {
    let c = constants_for_system(sys, ell).usage()?;
    if cyclic {
        threshold_cyclic(&c, ell).usage()
    } else {
        Ok(threshold_general(&c, ell))
    }
}

pub fn sequence(args: SequenceArgs) -> CmdResult {
    let sys = load_design(&args.design)?;
    let tie = match args.tie {
        Tie::Min => TieRule::Min,
        Tie::Random => TieRule::Random(args.seed),
    };
    if args.cyclic && args.algo != Algo::Naive {
        return Err(usage_error("--cyclic only applies to --algo naive; use --algo cyclic"));
    }
    if args.strict {
        if args.algo == Algo::Naive {
            return Err(usage_error("--strict applies to the staged and cyclic engines"));
        }
        let min = threshold(&sys, args.ell, args.algo == Algo::Cyclic)?;
        if (sys.n() as u64) < min {
            return Err(usage_error(format!(
                "n = {} is below the threshold {min} for ell = {}",
                sys.n(),
                args.ell
            )));
        }
    }
    let seq = match args.algo {
        Algo::Staged => staged_greedy(&sys, args.ell, tie).algorithm()?,
        Algo::Cyclic => cyclic_staged_greedy(&sys, args.ell, tie).algorithm()?,
        Algo::Naive => naive_greedy(&sys, args.ell, args.cyclic, tie)
            .ok_or_else(|| algorithm_error("naive greedy found no eligible point"))?,
    };
    emit(&args.output, &write_seq(&seq))?;
    Ok(OK)
}

pub fn verify(args: VerifyArgs) -> CmdResult {
    let sys = load_design(&args.design)?;
    let seq = load_seq(&args.seq)?;
    check_lengths(&sys, &seq)?;
    let violation = first_violation(&sys, &seq, args.ell, args.cyclic);
    if args.json {
        print_json(json!({
            "v": 1,
            "command": "verify",
            "ell": args.ell,
            "cyclic": args.cyclic,
            "good": violation.is_none(),
            "violation": violation.as_ref().map(|v| json!({
                "window_start": v.window_start,
                "window_len": v.window_len,
                "block": v.block.points(),
                "positions": v.subsequence_positions,
            })),
        }));
    } else {
        match &violation {
            None => println!("good: {}-good{}", args.ell, if args.cyclic { " (cyclic)" } else { "" }),
            Some(v) => println!(
                "violation: window start {} length {} contains block {:?} at positions {:?}",
                v.window_start,
                v.window_len,
                v.block.points(),
                v.subsequence_positions
            ),
        }
    }
    Ok(if violation.is_none() { OK } else { REFUTED })
}

pub fn maxell(args: MaxellArgs) -> CmdResult {
    let sys = load_design(&args.design)?;
    let seq = load_seq(&args.seq)?;
    check_lengths(&sys, &seq)?;
    let ell = max_good_ell(&sys, &seq, args.cyclic);
    if args.json {
        print_json(json!({"v": 1, "command": "maxell", "cyclic": args.cyclic, "max_ell": ell}));
    } else {
        println!("{ell}");
    }
    Ok(OK)
}

pub fn oracle(args: OracleArgs) -> CmdResult {
    let sys = load_design(&args.design)?;
    let mut limits = OracleLimits::default();
    if let Some(limit) = args.limit {
        limits.backtrack = limit;
        limits.max_ell = limit;
    }
    if args.max_ell {
        let ell = oracle_max_ell(&sys, args.cyclic, &limits).usage()?;
        if args.json {
            print_json(json!({"v": 1, "command": "oracle", "cyclic": args.cyclic, "max_ell": ell}));
        } else {
            println!("{ell}");
        }
        return Ok(OK);
    }
    let ell = args.ell.expect("clap requires --ell or --max-ell");
    let found = backtrack_sequencing(&sys, ell, args.cyclic, &limits).usage()?;
    if args.json {
        print_json(json!({
            "v": 1,
            "command": "oracle",
            "ell": ell,
            "cyclic": args.cyclic,
            "sequencing": found.as_ref().map(|s| s.order()),
        }));
    } else if let Some(seq) = &found {
        emit(&args.output, &write_seq(seq))?;
    } else {
        println!("no {ell}-good sequencing exists");
    }
    Ok(if found.is_some() { OK } else { REFUTED })
}
