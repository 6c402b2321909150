use seqdesign::constructions::{boolean_sqs, hamming_sts, natural_sequencing, skolem_sts, sqs_quadruple};
use seqdesign::format::{write_design, write_seq};
use seqdesign::Sequencing;

use crate::io::{emit, load_design, usage_error, CmdResult, ExitContext, OK};
use crate::{GenArgs, GenKind};

pub fn run(args: GenArgs) -> CmdResult {
    let (design, seq): (String, Option<Sequencing>) = match args.what {
        GenKind::SkolemSts { m } => {
            let (sys, seq) = skolem_sts(m).usage()?;
            (write_design(&sys), Some(seq))
        }
        GenKind::Hamming { r } => (write_design(&hamming_sts(r).usage()?), None),
        GenKind::BooleanSqs { r } => (write_design(&boolean_sqs(r).usage()?), None),
        GenKind::SqsQuadruple { base } => {
            let (sys, seq) = sqs_quadruple(&load_design(&base)?).usage()?;
            (write_design(&sys), Some(seq))
        }
        GenKind::Natural { n } => {
            emit(&args.output, &write_seq(&natural_sequencing(n).usage()?))?;
            return Ok(OK);
        }
    };
    emit(&args.output, &design)?;
    if let Some(path) = args.seq_out {
        let seq = seq.ok_or_else(|| usage_error("this construction has no built-in sequencing"))?;
        emit(&path, &write_seq(&seq))?;
    }
    Ok(OK)
}
