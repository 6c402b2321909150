use seqdesign::bounds::{
    bi_solve, contradiction_margin, cyclic_lp_bound, displayed_identities, easy_bound_max_ell, pair_identities,
    profile_name, segment_profile_counts, shift_equalities, shift_sums, small_end, sqs_alpha_root, sv_bound_sts,
    svgen_max_ell, Family,
};
use seqdesign::constructions::skolem_sts;
use serde_json::{json, Value};

use crate::io::{check_lengths, load_design, load_seq, print_json, sig9, usage_error, CmdResult, ExitContext, OK, REFUTED};
use crate::{BoundsArgs, BoundsMode, ProfilesArgs};

pub fn run(args: BoundsArgs) -> CmdResult {
    let json = args.json;
    let (text, record) = match args.mode {
        BoundsMode::Sv { n } => {
            let ell = sv_bound_sts(n);
            (ell.to_string(), json!({"mode": "sv", "n": n, "max_ell": ell}))
        }
        BoundsMode::SvGeneral { t, lambda, n, ell: None } => {
            let ell = svgen_max_ell(t, lambda, n).usage()?;
            (
                ell.to_string(),
                json!({"mode": "sv-general", "t": t, "lambda": lambda, "n": n, "max_ell": ell}),
            )
        }
        BoundsMode::SvGeneral { t, lambda, n, ell: Some(ell) } => {
            let v = bi_solve(t, lambda, n, ell).usage()?;
            let b: Vec<String> = v.b.iter().map(ToString::to_string).collect();
            (
                b.join(" "),
                json!({"mode": "sv-general", "t": t, "lambda": lambda, "n": n, "ell": ell, "b": b}),
            )
        }
        BoundsMode::Easy { t, k, lambda, n } => {
            let ell = easy_bound_max_ell(t, k, lambda, n).usage()?;
            (
                ell.to_string(),
                json!({"mode": "easy", "t": t, "k": k, "lambda": lambda, "n": n, "max_ell": ell}),
            )
        }
        BoundsMode::SqsRoot => {
            let root = sqs_alpha_root();
            (sig9(root), json!({"mode": "sqs-root", "value": root}))
        }
        BoundsMode::Lp { delta, eps, alpha: None } => {
            let value = cyclic_lp_bound(delta, eps).usage()?;
            (sig9(value), json!({"mode": "lp", "delta": delta, "eps": eps, "value": value}))
        }
        BoundsMode::Lp { alpha: Some(alpha), .. } => {
            let (delta, eps) = (alpha / 2.0, 1.0 - 3.0 * alpha);
            let value = cyclic_lp_bound(delta, eps).usage()?;
            let margin = contradiction_margin(alpha, value);
            (
                format!("{}\nmargin {}", sig9(value), sig9(margin)),
                json!({"mode": "lp", "alpha": alpha, "delta": delta, "eps": eps, "value": value, "margin": margin}),
            )
        }
        BoundsMode::Profiles(p) => return profiles(p, json),
    };
    if json {
        print_json(envelope(record));
    } else {
        println!("{text}");
    }
    Ok(OK)
}

fn envelope(mut record: Value) -> Value {
    record["v"] = json!(1);
    record["command"] = json!("bounds");
    record
}

fn profiles(args: ProfilesArgs, json: bool) -> CmdResult {
    let (sys, seq) = match (args.m, &args.design, &args.seq) {
        (Some(m), _, _) => skolem_sts(m).usage()?,
        (None, Some(d), Some(s)) => (load_design(d)?, load_seq(s)?),
        _ => return Err(usage_error("give either --m or both --design and --seq")),
    };
    check_lengths(&sys, &seq)?;
    let n = sys.n();
    let eps = match args.eps {
        Some(e) => e,
        None => n
            .checked_sub(6 * args.delta)
            .ok_or_else(|| usage_error(format!("6 * {} exceeds n = {n}", args.delta)))?,
    };
    let c = segment_profile_counts(&sys, &seq, args.shift, args.delta, eps).usage()?;
    let raw = pair_identities(&c);
    let displayed: Vec<_> = Family::ALL
        .iter()
        .map(|&f| (f, displayed_identities(&c, f)))
        .collect();
    let forced = c.nonzero_forced_zero();
    let (se_lhs, se_rhs) = small_end(&c);
    let shifts = if args.all_shifts {
        Some(shift_equalities(&shift_sums(&sys, &seq, args.delta, eps).usage()?))
    } else {
        None
    };

    let raw_ok = raw.iter().all(|i| i.holds());
    let displayed_ok = displayed.iter().all(|(_, ids)| ids.iter().all(|i| i.holds()));
    let shifts_ok = shifts
        .as_ref()
        .is_none_or(|rows| rows.iter().all(|row| row.iter().all(|&(_, v)| v == row[0].1)));
    let all_ok = raw_ok && displayed_ok && forced.is_empty() && se_lhs <= se_rhs && shifts_ok;

    if json {
        let counts: serde_json::Map<String, Value> = c
            .counts
            .iter()
            .map(|(p, &v)| (profile_name(p), json!(v)))
            .collect();
        print_json(envelope(json!({
            "mode": "profiles",
            "n": n,
            "delta": args.delta,
            "eps": eps,
            "shift": args.shift,
            "counts": counts,
            "raw_identities_hold": raw_ok,
            "displayed": displayed.iter().map(|(f, ids)| json!({
                "family": f.name(),
                "holds": ids.iter().all(|i| i.holds()),
                "identities": ids.iter().map(|i| json!([i.i, i.j, i.lhs, i.rhs])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "nonzero_forced_zero": forced.iter().map(|(p, v)| json!([profile_name(p), v])).collect::<Vec<_>>(),
            "small_end": [se_lhs, se_rhs],
            "shift_equalities": shifts,
            "all_hold": all_ok,
        })));
    } else {
        print!("{c}");
        let held = raw.iter().filter(|i| i.holds()).count();
        println!("raw identities {held}/{}", raw.len());
        for (f, ids) in &displayed {
            for i in ids {
                println!(
                    "{} ({},{}) {} = {} {}",
                    f.name(),
                    i.i,
                    i.j,
                    i.lhs,
                    i.rhs,
                    if i.holds() { "ok" } else { "FAILS" }
                );
            }
        }
        for (p, v) in &forced {
            println!("forced-zero b{} = {v}", profile_name(p));
        }
        println!("small end {se_lhs} <= {se_rhs}");
        if let Some(rows) = &shifts {
            for row in rows {
                let cells: Vec<String> = row.iter().map(|(name, v)| format!("a{name}={v}")).collect();
                println!("shift sums {}", cells.join(" "));
            }
        }
    }
    Ok(if all_ok { OK } else { REFUTED })
}
