//! Verification suites driving every check in the crate, with the outcome
//! type and exit-code contract used by the command line.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::{dfao_eval, inversion_dfao, morphism_g};
use crate::digits::{i_direct, Sign};
use crate::error::{Error, Result};
use crate::recurrence::{i_rec2, i_rec4, GammaSet, TransferMatrix};
use crate::report::{violation, CheckReport, Violation, MAX_RECORDED};
use crate::summatory::{
    check_dividing_identities, check_floor_bound_strided, check_jk_form, check_lower_ratio_strided,
    check_pair_sum_scaling, check_parity_strided, check_ratio_limits, check_upper_ratio_strided, g_periodicity,
    g_sample, interval_extrema, ratio_limit_table, s_count_digits, s_fast_with, SumStream, DEFAULT_STRIDE,
};
use crate::words::{
    claimed_square_periods, inversion_prefix, is_claimed_square_period, palindromes_in, scan_powers_in,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VERIFICATION_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Exit code for a library error: range and resource problems map to 3,
/// malformed arguments to 2.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::OutOfRange { .. } | Error::ResourceLimit(_) | Error::CountOverflow => EXIT_RESOURCE,
        _ => EXIT_USAGE,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Definitions,
    Fastsum,
    Parity,
    Floor,
    Identities,
    Extrema,
    Jkform,
    Bounds,
    Limits,
    Gsample,
    Words,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Definitions,
        Suite::Fastsum,
        Suite::Parity,
        Suite::Floor,
        Suite::Identities,
        Suite::Extrema,
        Suite::Jkform,
        Suite::Bounds,
        Suite::Limits,
        Suite::Gsample,
        Suite::Words,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Definitions => "definitions",
            Suite::Fastsum => "fastsum",
            Suite::Parity => "parity",
            Suite::Floor => "floor",
            Suite::Identities => "identities",
            Suite::Extrema => "extrema",
            Suite::Jkform => "jkform",
            Suite::Bounds => "bounds",
            Suite::Limits => "limits",
            Suite::Gsample => "gsample",
            Suite::Words => "words",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// Parameters shared by all suites.
#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Largest interval index for the identity, extrema, form-set and limit suites.
    pub kmax: u32,
    /// Upper end of the parity, floor and ratio-bound sweeps.
    pub nmax: u64,
    /// Prefix length for the combinatorics-on-words suite.
    pub prefix_len: usize,
    /// Sampling stride above the full-sweep limit.
    pub stride: u64,
    /// Exhaustive range for the evaluator agreement checks.
    pub definitions_limit: u64,
    /// Exhaustive range for the fast-sum comparison.
    pub fastsum_limit: u64,
    /// Random large indices checked against the digit-counting oracle.
    pub random_samples: usize,
    pub seed: u64,
    pub gammas: GammaSet,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            kmax: 8,
            nmax: 1 << 22,
            prefix_len: 1 << 14,
            stride: DEFAULT_STRIDE,
            definitions_limit: 1 << 16,
            fastsum_limit: 1 << 20,
            random_samples: 10_000,
            seed: 0x1f0_5eed,
            gammas: GammaSet::default(),
        }
    }
}

/// Largest `kmax` the suites accept (the limits suite scans `I_kmax` in full).
pub const MAX_KMAX: u32 = 14;

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        if self.kmax == 0 {
            return Err(Error::InvalidParameter("kmax must be at least 1".into()));
        }
        if self.kmax > MAX_KMAX {
            return Err(Error::ResourceLimit(format!("kmax {} exceeds {MAX_KMAX}", self.kmax)));
        }
        if self.nmax < 8 {
            return Err(Error::InvalidParameter("nmax must be at least 8".into()));
        }
        if self.prefix_len < 16 {
            return Err(Error::InvalidParameter("prefix length must be at least 16".into()));
        }
        if self.stride == 0 {
            return Err(Error::InvalidParameter("stride must be positive".into()));
        }
        crate::error::check_index(self.nmax)?;
        if self.prefix_len > crate::words::MAX_PREFIX_LEN {
            return Err(Error::ResourceLimit(format!(
                "prefix length {} is too large",
                self.prefix_len
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationOutcome {
    pub suite: Suite,
    pub cases_run: u64,
    pub failure_count: u64,
    pub failures: Vec<Violation>,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
    pub notes: Vec<String>,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

impl VerificationOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Collects sub-reports into one outcome.
struct Collector {
    cases: u64,
    failure_count: u64,
    failures: Vec<Violation>,
    notes: Vec<String>,
}

impl Collector {
    fn new() -> Self {
        Collector {
            cases: 0,
            failure_count: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn add(&mut self, rep: CheckReport) {
        self.cases += rep.cases;
        self.failure_count += rep.violations;
        for mut v in rep.recorded {
            if self.failures.len() >= MAX_RECORDED {
                break;
            }
            v.input = format!("{}: {}", rep.name, v.input);
            self.failures.push(v);
        }
    }

    fn check(&mut self, name: &str, ok: bool, v: impl FnOnce() -> Violation) {
        let mut rep = CheckReport::new(name);
        rep.check(ok, v);
        self.add(rep);
    }

    fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    fn finish(self, suite: Suite, started: Instant) -> VerificationOutcome {
        VerificationOutcome {
            suite,
            cases_run: self.cases,
            failure_count: self.failure_count,
            failures: self.failures,
            elapsed: started.elapsed(),
            notes: self.notes,
        }
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<VerificationOutcome> {
    cfg.validate()?;
    let started = Instant::now();
    let mut c = Collector::new();
    match suite {
        Suite::Definitions => definitions(cfg, &mut c),
        Suite::Fastsum => fastsum(cfg, &mut c)?,
        Suite::Parity => c.add(check_parity_strided(cfg.nmax, cfg.stride)?),
        Suite::Floor => c.add(check_floor_bound_strided(cfg.nmax, cfg.stride)?),
        Suite::Identities => {
            for k in 1..=cfg.kmax {
                c.add(check_dividing_identities(k)?);
            }
        }
        Suite::Extrema => {
            for k in 1..=cfg.kmax {
                let e = interval_extrema(k)?;
                c.check("extrema", e.holds(), || {
                    violation(
                        format!("k={k}"),
                        format!(
                            "max {} at [{}], min {} at [{}]",
                            e.expected_max, e.expected_argmax, e.expected_min, e.expected_argmin
                        ),
                        format!(
                            "max {} at {:?}, min {} at {:?}",
                            e.observed.max_value, e.observed.argmax, e.observed.min_value, e.observed.argmin
                        ),
                    )
                });
                c.note(format!(
                    "k={k}: max {} at {:?}, min {} at {:?}",
                    e.observed.max_value, e.observed.argmax, e.observed.min_value, e.observed.argmin
                ));
            }
        }
        Suite::Jkform => {
            for k in 1..=cfg.kmax {
                let r = check_jk_form(k)?;
                c.check("jkform", r.holds(), || {
                    violation(
                        format!("k={k}"),
                        format!("S = 2^{k} exactly on {} form members, max 2^{k}", r.form_set.len()),
                        format!(
                            "{} attaining, max {}, {} sign failures, {} closure failures",
                            r.attaining.len(),
                            r.max_on_jk,
                            r.sign_failures.len(),
                            r.closure_failures.len()
                        ),
                    )
                });
            }
        }
        Suite::Bounds => {
            c.add(check_upper_ratio_strided(cfg.nmax, cfg.stride)?);
            c.add(check_lower_ratio_strided(cfg.nmax, cfg.stride)?);
        }
        Suite::Limits => {
            let rows = ratio_limit_table(cfg.kmax)?;
            c.add(check_ratio_limits(&rows));
            if let Some(last) = rows.last() {
                c.note(format!(
                    "k={}: max ratio {:.7}, min ratio {:.7}",
                    last.k, last.max_ratio, last.min_ratio
                ));
            }
        }
        Suite::Gsample => gsample(&mut c)?,
        Suite::Words => words(cfg, &mut c)?,
    }
    Ok(c.finish(suite, started))
}

/// Runs the suites in parallel; results keep the requested order.
pub fn run_suites(suites: &[Suite], cfg: &VerifyConfig) -> Result<Vec<VerificationOutcome>> {
    suites.par_iter().map(|&s| run_suite(s, cfg)).collect()
}

fn definitions(cfg: &VerifyConfig, c: &mut Collector) {
    let dfao = inversion_dfao();
    let g = morphism_g();
    let limit = cfg.definitions_limit;
    let coded: Vec<Sign> = g
        .fixed_point()
        .expect("g is prolongable")
        .take(limit as usize)
        .map(|l| g.coding(l).expect("letter of the alphabet"))
        .collect();
    let mut rep = CheckReport::new("evaluators");
    for n in 0..limit {
        let want = i_direct(n);
        let got = [dfao_eval(&dfao, n).1, coded[n as usize], i_rec2(n), i_rec4(n)];
        rep.check(got.iter().all(|&s| s == want), || {
            violation(
                n,
                want,
                format!("dfao {} morphism {} rec2 {} rec4 {}", got[0], got[1], got[2], got[3]),
            )
        });
        let vn = cfg.gammas.v_raw(n);
        let want_v = [want.value(), i_direct(2 * n).value()];
        rep.check(vn == want_v, || {
            violation(format!("V_{n}"), format!("{want_v:?}"), format!("{vn:?}"))
        });
    }
    c.add(rep);

    let mut steps = CheckReport::new("matrix-step");
    for n in 0..limit.min(1 << 12) {
        let vn = cfg.gammas.v_raw(n);
        for r in 0..4u64 {
            let lhs = cfg.gammas.0[r as usize].apply(vn);
            let rhs = [i_direct(4 * n + r).value(), i_direct(8 * n + 2 * r).value()];
            steps.check(lhs == rhs, || {
                violation(format!("Gamma_{r} V_{n}"), format!("{rhs:?}"), format!("{lhs:?}"))
            });
        }
    }
    c.add(steps);

    let sum = cfg.gammas.sum();
    c.check("gamma-sum", sum == TransferMatrix::IDENTITY.scale(2), || {
        violation("sum of Gamma_r", TransferMatrix::IDENTITY.scale(2), sum)
    });
    c.add(check_pair_sum_scaling(limit.min(1 << 16)).expect("bounded table"));
}

fn fastsum(cfg: &VerifyConfig, c: &mut Collector) -> Result<()> {
    let g = &cfg.gammas;
    let limit = cfg.fastsum_limit;
    let chunk = 1u64 << 16;
    let exhaustive = (0..limit / chunk + 1)
        .into_par_iter()
        .map(|j| {
            let lo = j * chunk;
            let mut rep = CheckReport::new("stream");
            if lo > limit {
                return rep;
            }
            let hi = (lo + chunk - 1).min(limit);
            for p in SumStream::starting_at(lo).take_while(|p| p.index <= hi) {
                let fast = s_fast_with(g, p.index).expect("in range");
                rep.check(fast == p.value, || violation(format!("S({})", p.index), p.value, fast));
            }
            rep
        })
        .collect::<Vec<_>>();
    c.add(
        exhaustive
            .into_iter()
            .fold(CheckReport::new("stream"), CheckReport::merge),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<u64> = (0..cfg.random_samples)
        .map(|_| rng.random_range(0..1u64 << 50))
        .collect();
    let random = samples
        .par_iter()
        .map(|&n| {
            let mut rep = CheckReport::new("random");
            let fast = s_fast_with(g, n).expect("in range");
            let oracle = s_count_digits(n);
            rep.check(fast == oracle, || violation(format!("S({n})"), oracle, fast));
            // self-consistency of the base-4 step at m = n >> 2
            let m = n >> 2;
            let sm = s_fast_with(g, m).expect("in range");
            let s4m3 = s_fast_with(g, 4 * m + 3).expect("in range");
            let twice = sm.wrapping_mul(2);
            rep.check(s4m3 == twice, || violation(format!("S(4*{m}+3)"), twice, s4m3));
            rep
        })
        .reduce(|| CheckReport::new("random"), CheckReport::merge);
    c.add(random);
    Ok(())
}

/// Bounds of `G` at octave 10 with 4096 samples, and agreement between octaves 9 and 10.
pub const G_OCTAVE: u32 = 10;
pub const G_COUNT: usize = 4096;
pub const G_Y_RANGE: (f64, f64) = (0.577, 1.52);
pub const G_PERIODICITY_TOLERANCE: f64 = 0.02;

fn gsample(c: &mut Collector) -> Result<()> {
    let samples = g_sample(G_OCTAVE, G_COUNT)?;
    let mut rep = CheckReport::new("g-range");
    for s in &samples {
        rep.check(s.y > G_Y_RANGE.0 && s.y < G_Y_RANGE.1, || {
            violation(format!("N={}", s.index), format!("{:?}", G_Y_RANGE), s.y)
        });
    }
    c.add(rep);
    let per = g_periodicity(G_OCTAVE - 1, G_COUNT)?;
    c.check(
        "g-periodicity",
        per.pairs > 0 && per.max_dy < G_PERIODICITY_TOLERANCE,
        || {
            violation(
                format!("octaves {}/{}", G_OCTAVE - 1, G_OCTAVE),
                format!("|dy| < {G_PERIODICITY_TOLERANCE}"),
                format!("{} over {} pairs", per.max_dy, per.pairs),
            )
        },
    );
    c.note(format!(
        "periodicity: {} pairs, max |dy| = {:.5}",
        per.pairs, per.max_dy
    ));
    Ok(())
}

/// Claimed periods must be witnessed up to `prefix_len / PRESENCE_DIVISOR`;
/// nothing outside the claims may be witnessed at any scannable period.
pub const PRESENCE_DIVISOR: usize = 8;

fn words(cfg: &VerifyConfig, c: &mut Collector) -> Result<()> {
    let w = inversion_prefix(cfg.prefix_len);
    let window = cfg.prefix_len / PRESENCE_DIVISOR;

    let squares = scan_powers_in(&w, 2)?;
    let found = squares.period_set();
    let stray: Vec<usize> = found
        .iter()
        .copied()
        .filter(|&p| !is_claimed_square_period(p))
        .collect();
    c.check("squares", stray.is_empty(), || {
        violation("unclaimed square periods", "[]", format!("{stray:?}"))
    });
    let missing: Vec<usize> = claimed_square_periods(window)
        .into_iter()
        .filter(|p| !squares.periods.contains_key(p))
        .collect();
    c.check("squares", missing.is_empty(), || {
        violation(
            format!("claimed square periods <= {window}"),
            "all witnessed",
            format!("missing {missing:?}"),
        )
    });
    c.check("squares", squares.witnesses_valid(&w), || {
        violation("square witnesses", "valid", "invalid")
    });

    let cubes = scan_powers_in(&w, 3)?;
    c.check("cubes", cubes.period_set() == [3], || {
        violation("cube periods", "[3]", format!("{:?}", cubes.period_set()))
    });
    c.check("cubes", cubes.witnesses_valid(&w), || {
        violation("cube witnesses", "valid", "invalid")
    });
    let cube_not_square: Vec<usize> = cubes
        .period_set()
        .into_iter()
        .filter(|p| !squares.periods.contains_key(p))
        .collect();
    c.check("cubes", cube_not_square.is_empty(), || {
        violation("cube periods also square periods", "[]", format!("{cube_not_square:?}"))
    });

    let fourth = scan_powers_in(&w, 4)?;
    c.note(format!("4th powers (informational): periods {:?}", fourth.period_set()));

    let fifth = scan_powers_in(&w, 5)?;
    c.check("fifth", fifth.periods.is_empty(), || {
        violation("5th power periods", "[]", format!("{:?}", fifth.period_set()))
    });

    let mut lengths = Vec::new();
    let mut len = 1usize << 10;
    while len <= cfg.prefix_len {
        let rep = palindromes_in(&w[..len])?;
        c.check("palindromes", rep.witnesses_valid(&w[..len]), || {
            violation(format!("palindrome witnesses at {len}"), "valid", "invalid")
        });
        lengths.push((len, rep.max_length));
        len *= 2;
    }
    c.note(format!("palindrome maxima by prefix: {lengths:?}"));
    for pair in lengths.windows(2) {
        c.check("palindromes", pair[1].1 >= pair[0].1, || {
            violation(
                format!("prefix {} -> {}", pair[0].0, pair[1].0),
                "non-decreasing",
                format!("{} -> {}", pair[0].1, pair[1].1),
            )
        });
    }
    if let (Some(first), Some(last)) = (lengths.first(), lengths.last()) {
        if last.0 > first.0 {
            c.check("palindromes", last.1 > first.1, || {
                violation(
                    format!("prefix {} -> {}", first.0, last.0),
                    "strictly increasing",
                    format!("{} -> {}", first.1, last.1),
                )
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            kmax: 4,
            nmax: 1 << 12,
            prefix_len: 1 << 11,
            definitions_limit: 1 << 10,
            fastsum_limit: 1 << 10,
            random_samples: 50,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass() {
        let outcomes = run_suites(&Suite::ALL, &small()).unwrap();
        for o in outcomes {
            assert!(o.passed(), "{} failed: {:?}", o.suite, o.failures);
            assert!(o.cases_run > 0, "{} ran nothing", o.suite);
        }
    }

    #[test]
    fn corrupted_gamma_is_caught() {
        let cfg = VerifyConfig {
            gammas: GammaSet::default().with_entry(1, 0, 1, 0).unwrap(),
            ..small()
        };
        let defs = run_suite(Suite::Definitions, &cfg).unwrap();
        assert!(!defs.passed());
        let fast = run_suite(Suite::Fastsum, &cfg).unwrap();
        assert!(!fast.passed());
        assert_eq!(fast.failures.len(), MAX_RECORDED);
        assert!(fast.failure_count as usize >= MAX_RECORDED);
        assert!(run_suite(Suite::Parity, &cfg).unwrap().passed());
    }

    #[test]
    fn config_limits() {
        let mut cfg = small();
        cfg.kmax = MAX_KMAX + 1;
        assert_eq!(
            exit_code_for(&run_suite(Suite::Limits, &cfg).unwrap_err()),
            EXIT_RESOURCE
        );
        cfg.kmax = 0;
        assert_eq!(exit_code_for(&run_suite(Suite::Limits, &cfg).unwrap_err()), EXIT_USAGE);
        let cfg = VerifyConfig {
            nmax: u64::MAX,
            ..small()
        };
        assert_eq!(
            exit_code_for(&run_suite(Suite::Parity, &cfg).unwrap_err()),
            EXIT_RESOURCE
        );
    }
}
