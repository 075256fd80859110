//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fail.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use invseq_core::automaton::{dfao_eval, inversion_dfao, morphism_g};
use invseq_core::digits::i_direct;
use invseq_core::recurrence::{i_rec2, i_rec4, v};
use invseq_core::summatory::{
    check_dividing_identities, check_floor_bound, check_jk_form, check_lower_ratio, check_parity, check_ratio_limits,
    check_upper_ratio, g_periodicity, g_sample, interval_extrema, ratio_limit_table, s_count_digits, s_fast, s_stream,
};
use invseq_core::words::{claimed_square_periods, scan_palindromes, scan_powers};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn table_values() -> Outcome {
    let s: Vec<i64> = s_stream(7).map(|p| p.value).collect();
    ensure(s == [1, 2, 1, 2, 3, 2, 3, 4], || format!("S(0..7) = {s:?}"))?;
    let s23 = s_fast(23).map_err(|e| e.to_string())?;
    ensure(s23 == 4, || format!("S(23) = {s23}"))?;
    Ok("S(0..7) = 1,2,1,2,3,2,3,4 and S(23) = 4".into())
}

fn definition_equivalence() -> Outcome {
    let dfao = inversion_dfao();
    let g = morphism_g();
    let fixed: Vec<char> = g.fixed_point().map_err(|e| e.to_string())?.take(1 << 16).collect();
    for n in 0..1u64 << 16 {
        let want = i_direct(n);
        let got = [
            dfao_eval(&dfao, n).1,
            g.coding(fixed[n as usize]).expect("letter"),
            i_rec2(n),
            i_rec4(n),
        ];
        ensure(got.iter().all(|&s| s == want), || {
            format!("n = {n}: direct {want}, others {got:?}")
        })?;
        let vn = v(n);
        ensure(vn.top == want && vn.bottom == i_direct(2 * n), || {
            format!("v({n}) = {vn:?}")
        })?;
    }
    Ok("5 evaluators and v(n) agree for n < 2^16".into())
}

fn fast_sum() -> Outcome {
    let mut checked = 0u64;
    for p in s_stream(1 << 20) {
        let fast = s_fast(p.index).map_err(|e| e.to_string())?;
        ensure(fast == p.value, || {
            format!("S({}) stream {} fast {fast}", p.index, p.value)
        })?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0xac_ce97);
    for _ in 0..10_000 {
        let n = rng.random_range(0..1u64 << 50);
        let fast = s_fast(n).map_err(|e| e.to_string())?;
        let oracle = s_count_digits(n);
        ensure(fast == oracle, || format!("S({n}) digit count {oracle} fast {fast}"))?;
        let m = n >> 2;
        let (a, b) = (s_fast(4 * m + 3).unwrap(), s_fast(m).unwrap());
        ensure(a == 2 * b, || format!("S(4*{m}+3) = {a}, 2*S({m}) = {b}"))?;
    }
    Ok(format!("{checked} streamed N and 10^4 random N < 2^50"))
}

fn sweeps() -> Outcome {
    let reports = [
        check_parity(1 << 22),
        check_floor_bound(1 << 22),
        check_upper_ratio(1 << 24),
        check_lower_ratio(1 << 24),
    ];
    let mut cases = 0;
    for rep in reports {
        let rep = rep.map_err(|e| e.to_string())?;
        ensure(rep.passed(), || format!("{}: {:?}", rep.name, rep.first_violation()))?;
        cases += rep.cases;
    }
    for k in 1..=8 {
        let rep = check_dividing_identities(k).map_err(|e| e.to_string())?;
        ensure(rep.passed(), || {
            format!("identities k={k}: {:?}", rep.first_violation())
        })?;
        cases += rep.cases;
    }
    for k in 1..=9 {
        let e = interval_extrema(k).map_err(|e| e.to_string())?;
        ensure(e.holds(), || format!("extrema k={k}: {:?}", e.observed))?;
        let j = check_jk_form(k).map_err(|e| e.to_string())?;
        ensure(j.holds(), || {
            format!(
                "form set k={k}: {} members, {} attaining, {} sign, {} closure failures",
                j.form_set.len(),
                j.attaining.len(),
                j.sign_failures.len(),
                j.closure_failures.len()
            )
        })?;
    }
    Ok(format!("{cases} exact sweep cases, extrema and form sets for k <= 9"))
}

fn limits() -> Outcome {
    let rows = ratio_limit_table(12).map_err(|e| e.to_string())?;
    let rep = check_ratio_limits(&rows);
    ensure(rep.passed(), || format!("{:?}", rep.first_violation()))?;
    let last = rows.last().expect("k = 12 row");
    let (dmax, dmin) = (
        (last.max_ratio - std::f64::consts::SQRT_2).abs(),
        (last.min_ratio - 1.0 / 3f64.sqrt()).abs(),
    );
    ensure(dmax < 1e-5 && dmin < 1e-5, || {
        format!("k=12 distances {dmax:e}, {dmin:e}")
    })?;
    Ok(format!(
        "k=12: |max - sqrt2| = {dmax:.2e}, |min - 1/sqrt3| = {dmin:.2e}"
    ))
}

fn g_samples() -> Outcome {
    let samples = g_sample(10, 4096).map_err(|e| e.to_string())?;
    ensure(samples.len() == 4096, || format!("{} distinct samples", samples.len()))?;
    let bad = samples.iter().find(|s| !(0.577 < s.y && s.y < 1.52));
    ensure(bad.is_none(), || format!("out of range: {bad:?}"))?;
    let per = g_periodicity(9, 4096).map_err(|e| e.to_string())?;
    ensure(per.pairs > 0 && per.max_dy < 0.02, || format!("{per:?}"))?;
    Ok(format!(
        "4096 samples in range, {} octave pairs, max |dy| = {:.4}",
        per.pairs, per.max_dy
    ))
}

fn words() -> Outcome {
    const PREFIX: usize = 1 << 14;
    let squares = scan_powers(2, PREFIX).map_err(|e| e.to_string())?.period_set();
    let claimed = claimed_square_periods(1 << 12);
    let cubes = scan_powers(3, PREFIX).map_err(|e| e.to_string())?.period_set();
    let fifths = scan_powers(5, PREFIX).map_err(|e| e.to_string())?.period_set();
    let mut maxima = Vec::new();
    for e in 10..=14 {
        maxima.push(scan_palindromes(1 << e).map_err(|e| e.to_string())?.max_length);
    }
    let mut problems = Vec::new();
    if squares != claimed {
        let missing: Vec<_> = claimed.iter().filter(|p| !squares.contains(p)).collect();
        let extra: Vec<_> = squares.iter().filter(|p| !claimed.contains(p)).collect();
        problems.push(format!("square periods missing {missing:?}, unexpected {extra:?}"));
    }
    if cubes != [3] {
        problems.push(format!("cube periods {cubes:?}"));
    }
    if !fifths.is_empty() {
        problems.push(format!("5th power periods {fifths:?}"));
    }
    if maxima.first() >= maxima.last() {
        problems.push(format!("palindrome maxima {maxima:?}"));
    }
    ensure(problems.is_empty(), || problems.join("; "))?;
    Ok(format!("squares {squares:?}, cubes [3], palindrome maxima {maxima:?}"))
}

fn cli_contract() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_invseq");
    let clean = Command::new(bin)
        .args(["verify", "all"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure(clean.status.code() == Some(0), || {
        format!(
            "verify all exited {:?}: {}",
            clean.status.code(),
            String::from_utf8_lossy(&clean.stdout)
        )
    })?;
    let bad = Command::new(bin)
        .args(["verify", "all", "--corrupt-gamma", "1,0,1,2"])
        .output()
        .map_err(|e| e.to_string())?;
    let stdout = String::from_utf8_lossy(&bad.stdout);
    let named = stdout
        .lines()
        .find(|l| l.starts_with("failed suites:"))
        .unwrap_or("")
        .to_string();
    ensure(bad.status.code() == Some(1) && !named.is_empty(), || {
        format!("corrupted run exited {:?}: {stdout}", bad.status.code())
    })?;
    Ok(format!("clean run exits 0; corrupted Gamma_1 exits 1 with \"{named}\""))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("table reproduction", table_values),
        ("definition equivalence", definition_equivalence),
        ("fast-sum correctness", fast_sum),
        ("exact sweeps", sweeps),
        ("limit behaviour", limits),
        ("G sampling", g_samples),
        ("words", words),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
