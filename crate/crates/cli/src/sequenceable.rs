use seqdesign::format::write_seq;
use seqdesign::sequenceable::{
    alspach_sequencing, first_bad_segment, BadSegment, SequenceableError, SequenceableInstance,
};
use seqdesign::{BlockSystem, Sequencing};
use serde_json::json;

use crate::io::{check_lengths, emit, load_design, load_seq, print_json, CmdResult, Failure, ALGORITHM, OK, REFUTED, USAGE};
use crate::SequenceableArgs;

fn classify(e: SequenceableError) -> Failure {
    let code = match e {
        SequenceableError::NotTripleSystem { .. } => USAGE,
        _ => ALGORITHM,
    };
    Failure::new(code, e)
}

fn describe(sys: &BlockSystem, bad: &BadSegment) -> String {
    let blocks: Vec<String> = bad
        .blocks
        .iter()
        .map(|&id| format!("{:?}", sys.block(id).points()))
        .collect();
    format!(
        "segment start {} length {} is the union of {}",
        bad.start,
        bad.len,
        blocks.join(" ")
    )
}

pub fn run(args: SequenceableArgs) -> CmdResult {
    let sys = load_design(&args.design)?;
    let (seq, k): (Sequencing, Option<usize>) = match &args.check {
        Some(path) => {
            let seq = load_seq(path)?;
            check_lengths(&sys, &seq)?;
            (seq, None)
        }
        None => {
            let inst = SequenceableInstance::new(sys.clone()).map_err(classify)?;
            let seq = alspach_sequencing(&inst).map_err(classify)?;
            (seq, Some(inst.k))
        }
    };
    let bad = first_bad_segment(&sys, &seq);
    if let Some(path) = &args.output {
        emit(path, &write_seq(&seq))?;
    }
    if args.json {
        print_json(json!({
            "v": 1,
            "command": "sequenceable",
            "mode": if args.construct { "construct" } else { "check" },
            "k": k,
            "verified": bad.is_none(),
            "sequencing": seq.order(),
            "segment": bad.as_ref().map(|b| json!({
                "start": b.start,
                "len": b.len,
                "blocks": b.blocks.iter().map(|&id| sys.block(id).points()).collect::<Vec<_>>(),
            })),
        }));
    } else {
        if let Some(k) = k {
            println!("disjoint blocks k = {k}");
        }
        match &bad {
            None => println!("verified: no segment is a union of disjoint blocks"),
            Some(b) => println!("refuted: {}", describe(&sys, b)),
        }
    }
    Ok(if bad.is_none() { OK } else { REFUTED })
}
