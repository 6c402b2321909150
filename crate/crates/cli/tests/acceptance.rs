//! Acceptance criteria, one `[PASS]` or `[FAIL]` line each. Runs without the
//! test harness so the lines always show; exits 1 if any criterion fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use itertools::Itertools;
use num::{BigInt, BigRational};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use seqdesign::bounds::{
    bi_solve, contradiction_margin, cyclic_lp_bound, displayed_identities, easy_bound_max_ell, forced_zero_profiles,
    profile_name, segment_profile_counts, shift_equalities, shift_sums, sqs_alpha_root, svgen_max_ell, Family,
};
use seqdesign::constructions::{boolean_sqs, hamming_sts, natural_sequencing, skolem_sts, sqs_quadruple};
use seqdesign::format::{parse_design, parse_seq, write_design, write_seq};
use seqdesign::game::exhaustive_bob_never_loses;
use seqdesign::oracle::{brute_sequenceable, enumerate_psts, oracle_max_ell, OracleLimits};
use seqdesign::sequenceable::{
    alspach_sequencing, alspach_threshold, pattern_properties_check, pattern_sequence, verify_sequenceable,
    SequenceableInstance,
};
use seqdesign::sequencer::{
    constants_for, constants_for_system, cyclic_staged_greedy, staged_greedy, threshold_cyclic, threshold_general,
    threshold_psts,
};
use seqdesign::{first_violation, max_good_ell, validate_system, BlockSystem, Kind, Point, Sequencing, TieRule};

fn criterion(id: &str, what: &str, budget: Duration, body: impl FnOnce() -> Result<String, String>) -> bool {
    let start = Instant::now();
    let result = body();
    let took = start.elapsed();
    let result = match result {
        Ok(detail) if took > budget => Err(format!("{detail}; took {took:.1?}, budget {budget:?}")),
        other => other,
    };
    match result {
        Ok(detail) => {
            println!("[PASS] {id} {what}: {detail} ({took:.1?})");
            true
        }
        Err(reason) => {
            println!("[FAIL] {id} {what}: {reason} ({took:.1?})");
            false
        }
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn ac01_skolem_construction() -> bool {
    criterion("AC1", "Skolem STS natural sequencing", Duration::from_secs(5), || {
        let mut got = Vec::new();
        for (m, expect) in [(6, 10), (10, 16), (14, 22)] {
            let (sys, seq) = skolem_sts(m).map_err(|e| e.to_string())?;
            let n = 6 * m + 1;
            ensure(sys.kind() == Kind::Sts && sys.n() == n && validate_system(&sys).valid, || {
                format!("m={m}: not a valid STS({n})")
            })?;
            ensure(seq == natural_sequencing(n).unwrap(), || format!("m={m}: sequencing is not natural"))?;
            let plain = max_good_ell(&sys, &seq, false);
            let cyclic = max_good_ell(&sys, &seq, true);
            ensure(plain == n.div_ceil(4) && cyclic == n.div_ceil(4) && plain == expect, || {
                format!("m={m}: max ell {plain} / cyclic {cyclic}, expected {expect}")
            })?;
            got.push(cyclic);
        }
        Ok(format!("max ell {got:?}"))
    })
}

fn ac02_sqs_quadruple() -> bool {
    criterion("AC2", "SQS(32) from SQS(8)", Duration::from_secs(10), || {
        let (sys, seq) = sqs_quadruple(&boolean_sqs(3).unwrap()).map_err(|e| e.to_string())?;
        ensure(sys.kind() == Kind::Sqs && sys.n() == 32 && validate_system(&sys).valid, || {
            "not a valid SQS(32)".into()
        })?;
        ensure(sys.blocks().len() == 1240, || format!("{} blocks", sys.blocks().len()))?;
        let cyclic = max_good_ell(&sys, &seq, true);
        ensure(cyclic == 9, || format!("cyclic max ell {cyclic}"))?;
        Ok("1240 blocks, cyclic max ell 9".into())
    })
}

fn ac03_thresholds() -> bool {
    criterion("AC3", "threshold arithmetic", Duration::from_secs(1), || {
        let psts = [3, 4, 5].map(threshold_psts);
        let c = constants_for(Kind::Sts, 4, 2, 3, 1).map_err(|e| e.to_string())?;
        let general = threshold_general(&c, 4);
        let cyclic = threshold_cyclic(&c, 4).map_err(|e| e.to_string())?;
        ensure(psts == [12, 55, 173] && general == 50 && cyclic == 123, || {
            format!("psts {psts:?}, general {general}, cyclic {cyclic}")
        })?;
        Ok(format!("psts {psts:?}, general {general}, cyclic {cyclic}"))
    })
}

fn ac04_engine_sweep() -> bool {
    criterion("AC4", "engine soundness sweep", Duration::from_secs(120), || {
        let mut systems: Vec<(String, BlockSystem)> = Vec::new();
        for m in [6, 10, 14] {
            systems.push((format!("skolem {m}"), skolem_sts(m).unwrap().0));
        }
        for r in 3..=7 {
            systems.push((format!("hamming {r}"), hamming_sts(r).unwrap()));
        }
        let sqs8 = boolean_sqs(3).unwrap();
        systems.push(("sqs32".into(), sqs_quadruple(&sqs8).unwrap().0));
        systems.push(("sqs8".into(), sqs8));
        let jobs: Vec<(usize, usize, bool)> = systems
            .iter()
            .enumerate()
            .flat_map(|(i, (_, sys))| {
                (1..=sys.n()).flat_map(move |ell| {
                    let c = constants_for_system(sys, ell).unwrap();
                    let n = sys.n() as u64;
                    let mut out = Vec::new();
                    if n >= threshold_general(&c, ell) {
                        out.push((i, ell, false));
                    }
                    if n >= threshold_cyclic(&c, ell).unwrap() {
                        out.push((i, ell, true));
                    }
                    out
                })
            })
            .collect();
        let failures: Vec<String> = jobs
            .par_iter()
            .filter_map(|&(i, ell, cyclic)| {
                let (name, sys) = &systems[i];
                let run = if cyclic {
                    cyclic_staged_greedy(sys, ell, TieRule::Min)
                } else {
                    staged_greedy(sys, ell, TieRule::Min)
                };
                match run {
                    Ok(seq) if first_violation(sys, &seq, ell, cyclic).is_none() => None,
                    Ok(_) => Some(format!("{name} ell={ell} cyclic={cyclic}: output not good")),
                    Err(e) => Some(format!("{name} ell={ell} cyclic={cyclic}: {e}")),
                }
            })
            .collect();
        ensure(failures.is_empty(), || failures.join("; "))?;
        Ok(format!("{} engine runs verified, 0 failures", jobs.len()))
    })
}

fn ac05_oracle_ground_truth() -> bool {
    criterion("AC5", "exhaustive max ell of STS(7) and STS(9)", Duration::from_secs(30), || {
        let limits = OracleLimits::default();
        let fano = parse_design(&fs::read_to_string(fixtures().join("fano.design")).unwrap()).unwrap();
        let sts9 = parse_design(&fs::read_to_string(fixtures().join("sts9.design")).unwrap()).unwrap();
        let a = oracle_max_ell(&fano, false, &limits).map_err(|e| e.to_string())?;
        let b = oracle_max_ell(&sts9, false, &limits).map_err(|e| e.to_string())?;
        ensure(a == 3 && b == 3, || format!("STS(7) {a}, STS(9) {b}"))?;
        Ok("STS(7) 3, STS(9) 3".into())
    })
}

fn ac06_linear_program() -> bool {
    criterion("AC6", "cyclic LP and contradiction margin", Duration::from_secs(1), || {
        let t = cyclic_lp_bound(0.1645, 0.013).map_err(|e| e.to_string())?;
        ensure((t - 0.00225352).abs() <= 1e-6, || format!("LP optimum {t}"))?;
        let good = contradiction_margin(0.329, t);
        ensure(good > 0.0, || format!("margin at 0.329 is {good}"))?;
        let t328 = cyclic_lp_bound(0.164, 0.016).map_err(|e| e.to_string())?;
        let bad = contradiction_margin(0.328, t328);
        ensure(bad < 0.0, || format!("margin at 0.328 is {bad}"))?;
        Ok(format!("optimum {t:.8}, margin(0.329) {good:.3e}, margin(0.328) {bad:.3e}"))
    })
}

fn ac07_count_identities() -> bool {
    criterion("AC7", "profile identities on STS(37), delta 6, eps 1", Duration::from_secs(30), || {
        let (sys, seq) = skolem_sts(6).unwrap();
        let (delta, eps) = (6, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut problems = Vec::new();
        for _ in 0..10 {
            let r = rng.random_range(0..sys.n());
            let c = segment_profile_counts(&sys, &seq, r, delta, eps).map_err(|e| e.to_string())?;
            for family in Family::ALL {
                for id in displayed_identities(&c, family) {
                    if !id.holds() {
                        problems.push(format!("r={r} {} ({},{}): {} != {}", family.name(), id.i, id.j, id.lhs, id.rhs));
                    }
                }
            }
            for p in forced_zero_profiles(delta, eps) {
                let v = c.get(&p);
                if v != 0 {
                    problems.push(format!("r={r} b{} = {v}", profile_name(&p)));
                }
            }
        }
        let sums = shift_sums(&sys, &seq, delta, eps).map_err(|e| e.to_string())?;
        for row in shift_equalities(&sums) {
            if row.iter().any(|&(_, v)| v != row[0].1) {
                problems.push(format!("shift sums {row:?}"));
            }
        }
        let cyclic = max_good_ell(&sys, &seq, true);
        ensure(problems.is_empty(), || {
            format!(
                "{} failures, first: {}; the sequencing is only cyclically {cyclic}-good, below 2 delta = {}",
                problems.len(),
                problems.iter().take(3).join("; "),
                2 * delta
            )
        })?;
        Ok("all displayed identities, vanishing profiles and shift equalities hold".into())
    })
}

fn binom(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn ac08_general_bounds() -> bool {
    criterion("AC8", "counting bounds for general designs", Duration::from_secs(60), || {
        let v = bi_solve(2, 1, 7, 3).map_err(|e| e.to_string())?;
        let expect: Vec<BigRational> = [1, 3, 3, 0].iter().map(|&x| BigRational::from_integer(x.into())).collect();
        ensure(v.b == expect, || format!("bi_solve(2,1,7,3) = {:?}", v.b))?;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..200 {
            let t = rng.random_range(2..=5u64);
            let lambda = rng.random_range(1..=4u64);
            let n = rng.random_range(t + 1..=80);
            let ell = rng.random_range(0..=n);
            let v = bi_solve(t, lambda, n, ell).map_err(|e| e.to_string())?;
            let expected = BigRational::new(BigInt::from(lambda) * binom(n, t), BigInt::from(t + 1));
            ensure(v.total() == expected, || format!("total mismatch at ({t},{lambda},{n},{ell})"))?;
        }
        let sv37 = svgen_max_ell(2, 1, 37).map_err(|e| e.to_string())?;
        ensure(sv37 == 13, || format!("svgen(2,1,37) = {sv37}"))?;
        let sv1000 = svgen_max_ell(3, 1, 1000).map_err(|e| e.to_string())?;
        ensure((sv1000 as f64 - 408.0).abs() <= 4.08, || format!("svgen(3,1,1000) = {sv1000}"))?;
        let easy = easy_bound_max_ell(3, 4, 1, 1000).map_err(|e| e.to_string())?;
        ensure((easy as f64 - 674.0).abs() <= 6.74, || format!("easy(3,4,1,1000) = {easy}"))?;
        let root = sqs_alpha_root();
        ensure((root - 0.408248290).abs() <= 1e-9, || format!("root {root}"))?;
        Ok(format!("b = (1,3,3,0), 200 totals exact, sv 13 / {sv1000}, easy {easy}, root {root:.9}"))
    })
}

fn every_order_fails(sys: &BlockSystem) -> bool {
    let n = sys.n() as Point;
    (0..n)
        .permutations(n as usize)
        .all(|order| !verify_sequenceable(sys, &Sequencing::from_order(order).unwrap()))
}

fn stars(centers: u32, n: usize) -> BlockSystem {
    let per = (n as u32 - centers) / (2 * centers);
    let blocks = (0..centers)
        .flat_map(|c| (0..per).map(move |i| vec![c, centers + 2 * (c * per + i), centers + 2 * (c * per + i) + 1]))
        .collect();
    BlockSystem::assemble(Kind::Psts, n, 2, 3, 1, blocks).unwrap()
}

fn ac09_sequenceable() -> bool {
    criterion("AC9", "sequenceable partial triple systems", Duration::from_secs(180), || {
        let bad_k: Vec<u64> = (1..=1000u64)
            .into_par_iter()
            .filter(|&k| !pattern_sequence(k, alspach_threshold(k)).is_ok_and(|p| pattern_properties_check(&p)))
            .collect();
        ensure(bad_k.is_empty(), || format!("pattern properties fail for k in {bad_k:?}"))?;
        for k in 1..=3u32 {
            let n = alspach_threshold(k as u64) as usize;
            let inst = SequenceableInstance::new(stars(k, n)).map_err(|e| e.to_string())?;
            ensure(inst.k == k as usize, || format!("star system has k = {}", inst.k))?;
            let seq = alspach_sequencing(&inst).map_err(|e| e.to_string())?;
            ensure(verify_sequenceable(&inst.system, &seq), || format!("k={k}: construction refuted"))?;
        }
        let limits = OracleLimits::default();
        let mut systems = Vec::new();
        for n in 3..=8 {
            systems.extend(enumerate_psts(n, 4, &limits).map_err(|e| e.to_string())?);
        }
        let disagreements: Vec<String> = systems
            .par_iter()
            .filter_map(|sys| {
                let agree = match brute_sequenceable(sys, &limits).unwrap() {
                    Some(w) => verify_sequenceable(sys, &w),
                    None => every_order_fails(sys),
                };
                (!agree).then(|| format!("{:?}", sys.blocks()))
            })
            .collect();
        ensure(disagreements.is_empty(), || format!("disagree on {}", disagreements.join(" ")))?;
        Ok(format!("k <= 1000 patterns, stars k = 1..3, {} small systems agree", systems.len()))
    })
}

fn ac10_hamming_game() -> bool {
    criterion("AC10", "exhaustive game against the Hamming strategy", Duration::from_secs(120), || {
        let mut seen = Vec::new();
        let mut wrong = Vec::new();
        for (r, lines) in [(3, 105u64), (4, 2_027_025)] {
            let report = exhaustive_bob_never_loses(r, 3).map_err(|e| e.to_string())?;
            ensure(report.bob_never_loses(), || format!("r={r}: {report:?}"))?;
            seen.push(format!("r={r}: {} lines all lost by Alice", report.lines));
            if report.lines != lines {
                wrong.push(format!("r={r} expected {lines} lines"));
            }
        }
        ensure(wrong.is_empty(), || format!("{}; {}", seen.join(", "), wrong.join(", ")))?;
        Ok(seen.join(", "))
    })
}

fn seqdesign(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_seqdesign"))
        .args(args)
        .output()
        .expect("binary runs")
        .status
        .code()
        .unwrap_or(-1)
}

fn ac11_formats_and_exit_codes() -> bool {
    criterion("AC11", "format round-trips and exit codes", Duration::from_secs(5), || {
        let mut names: Vec<PathBuf> = fs::read_dir(fixtures())
            .unwrap()
            .map(|e| e.unwrap().path())
            .filter(|p| p.extension().is_some_and(|x| x == "design"))
            .collect();
        names.sort();
        for path in &names {
            let sys = parse_design(&fs::read_to_string(path).unwrap()).map_err(|e| e.to_string())?;
            let text = write_design(&sys);
            let again = parse_design(&text).map_err(|e| e.to_string())?;
            ensure(again == sys && write_design(&again) == text, || {
                format!("{} does not round-trip", path.display())
            })?;
        }
        let nat = natural_sequencing(5).unwrap();
        ensure(write_seq(&nat) == "seq 5\n0 1 2 3 4\n", || "write_seq(natural 5)".into())?;
        ensure(parse_seq(&write_seq(&nat)).ok() == Some(nat), || "seq round-trip".into())?;

        let dir = tempfile::tempdir().unwrap();
        let design = dir.path().join("sts37.design");
        let seq = dir.path().join("nat37.seq");
        let broken = dir.path().join("broken.design");
        fs::write(&broken, "kind STS\nparams 2 3 1\nn 7\nblock 0 1\n").unwrap();
        let d = design.to_str().unwrap();
        let s = seq.to_str().unwrap();
        let codes = [
            seqdesign(&["gen", "skolem-sts", "--m", "6", "-o", d, "--seq-out", s]),
            seqdesign(&["verify", "--ell", "10", "--cyclic", "--design", d, "--seq", s]),
            seqdesign(&["verify", "--ell", "11", "--cyclic", "--design", d, "--seq", s]),
            seqdesign(&["verify", "--ell", "3", "--design", broken.to_str().unwrap(), "--seq", s]),
        ];
        ensure(codes == [0, 0, 1, 2], || format!("exit codes {codes:?}, expected [0, 0, 1, 2]"))?;
        Ok(format!("{} fixtures round-trip; exit codes good 0, violation 1, parse error 2", names.len()))
    })
}

fn main() {
    let checks: [fn() -> bool; 11] = [
        ac01_skolem_construction,
        ac02_sqs_quadruple,
        ac03_thresholds,
        ac04_engine_sweep,
        ac05_oracle_ground_truth,
        ac06_linear_program,
        ac07_count_identities,
        ac08_general_bounds,
        ac09_sequenceable,
        ac10_hamming_game,
        ac11_formats_and_exit_codes,
    ];
    let passed = checks.iter().filter(|check| check()).count();
    println!("acceptance: {passed}/{} criteria pass", checks.len());
    if passed < checks.len() {
        std::process::exit(1);
    }
}
