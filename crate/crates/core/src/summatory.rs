//! The summatory function `S(N) = Σ_{0 ≤ n ≤ N} i_n`.
//!
//! The sum is inclusive (`S(0) = 1`). Three independent routes are provided:
//!
//! * [`SumStream`], a running sum over `n` (the linear-time oracle);
//! * [`s_count_digits`], which counts the integers `0..=N` by the automaton
//!   state they reach, one binary digit of `N` at a time;
//! * [`s_fast`], the base-4 recursion
//!   `S(4n) = S(4n+2) = 2S(n) - i_n`, `S(4n+1) = 2S(n) - i_n + i_{2n}`,
//!   `S(4n+3) = 2S(n)`, driven by the transfer matrices.
//!
//! The `check_*` functions sweep ranges of `N` and compare exact integers
//! only; floating point is confined to the emitted ratio tables and samples
//! of `G(x) = S(N)/√N` with `x = frac(log₄ N)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::{inversion_dfao, Dfao};
use crate::digits::{i_direct, inv2_parity, Sign};
use crate::error::{check_index, Error, Result, MAX_INDEX};
use crate::recurrence::{base4_digits_msb_first, GammaSet};
use crate::report::{violation, CheckReport};

/// Sweeps visit every `n` up to this bound; beyond it they sample with a stride.
pub const FULL_SWEEP_LIMIT: u64 = 1 << 24;
pub const DEFAULT_STRIDE: u64 = 4099;
const CHUNK: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SummatoryPoint {
    #[serde(rename = "N")]
    pub index: u64,
    #[serde(rename = "S")]
    pub value: i64,
}

impl SummatoryPoint {
    /// `|S(N)| ≤ N + 1` and `S(N) ≡ N + 1 (mod 2)`.
    pub fn satisfies_invariants(&self) -> bool {
        let bound = i128::from(self.index) + 1;
        i128::from(self.value).abs() <= bound && (i128::from(self.value) - bound).rem_euclid(2) == 0
    }
}

/// `i_n` as `±1`.
#[inline]
pub fn i_value(n: u64) -> i64 {
    1 - 2 * i64::from(inv2_parity(n))
}

/// Running inclusive sum of `i_n`.
#[derive(Clone, Debug)]
pub struct SumStream {
    next: u64,
    sum: i64,
}

impl SumStream {
    pub fn new() -> Self {
        SumStream { next: 0, sum: 0 }
    }

    /// Stream whose first item is `S(start)`. The carried-in sum `S(start-1)`
    /// comes from [`s_count_digits`].
    pub fn starting_at(start: u64) -> Self {
        let sum = if start == 0 { 0 } else { s_count_digits(start - 1) };
        SumStream { next: start, sum }
    }
}

impl Default for SumStream {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for SumStream {
    type Item = SummatoryPoint;

    fn next(&mut self) -> Option<SummatoryPoint> {
        let index = self.next;
        self.sum += i_value(index);
        self.next = index.checked_add(1)?;
        Some(SummatoryPoint { index, value: self.sum })
    }
}

/// `S(0), .., S(n_max)`.
pub fn s_stream(n_max: u64) -> impl Iterator<Item = SummatoryPoint> {
    SumStream::new().take_while(move |p| p.index <= n_max)
}

/// Number of integers in `0..=n` whose binary representation drives `a`
/// into each state.
pub fn count_by_state(a: &Dfao, n: u64) -> Vec<u64> {
    let states = a.states();
    let mut counts = vec![0u64; states];
    let bits = 64 - n.leading_zeros();
    let mut q = a.initial();
    for pos in (0..bits).rev() {
        let bit = ((n >> pos) & 1) as u8;
        if bit == 1 {
            // same prefix, 0 here, then every suffix of length `pos`
            let mut dist = vec![0u64; states];
            dist[a.transition(q, 0)] = 1;
            for _ in 0..pos {
                let mut nxt = vec![0u64; states];
                for (s, &c) in dist.iter().enumerate() {
                    nxt[a.transition(s, 0)] += c;
                    nxt[a.transition(s, 1)] += c;
                }
                dist = nxt;
            }
            for (acc, c) in counts.iter_mut().zip(dist) {
                *acc += c;
            }
        }
        q = a.transition(q, bit);
    }
    counts[q] += 1;
    counts
}

/// `S(n)` by counting `0..=n` per automaton state.
pub fn s_count_digits(n: u64) -> i64 {
    let a = inversion_dfao();
    count_by_state(&a, n)
        .into_iter()
        .enumerate()
        .map(|(q, c)| c as i64 * a.output(q).1.value())
        .sum()
}

/// `S(n)` in `O(log n)` through the base-4 recursion.
pub fn s_fast(n: u64) -> Result<i64> {
    s_fast_with(&GammaSet::default(), n)
}

/// [`s_fast`] with an explicit transfer-matrix table; `(i_m, i_{2m})` is
/// carried along the same digit recursion as `V_m`.
pub fn s_fast_with(gammas: &GammaSet, n: u64) -> Result<i64> {
    let n = check_index(n)?;
    let mut s: i64 = 1;
    let mut v = [1i64, 1];
    for d in base4_digits_msb_first(n) {
        let [i_m, i_2m] = v;
        let twice = s.wrapping_mul(2);
        s = match d {
            0 | 2 => twice.wrapping_sub(i_m),
            1 => twice.wrapping_sub(i_m).wrapping_add(i_2m),
            _ => twice,
        };
        v = gammas.0[d].apply(v);
    }
    Ok(s)
}

/// Forward-only random access to `S`, restarting when asked to go back.
#[derive(Debug, Default)]
pub struct Cursor {
    stream: Option<SumStream>,
    current: Option<SummatoryPoint>,
}

impl Cursor {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn at(&mut self, n: u64) -> i64 {
        match self.current {
            Some(p) if p.index == n => return p.value,
            Some(p) if p.index < n && n - p.index <= CHUNK => {}
            _ => {
                self.stream = Some(SumStream::starting_at(n));
                self.current = None;
            }
        }
        let stream = self.stream.as_mut().expect("stream initialised above");
        loop {
            let p = stream.next().expect("index below u64::MAX");
            self.current = Some(p);
            if p.index == n {
                return p.value;
            }
        }
    }
}

/// Parallel fold over `S(lo..=hi)`, chunked; partial results are merged in
/// index order.
pub fn par_scan<T, I, F, M>(lo: u64, hi: u64, init: I, step: F, merge: M) -> T
where
    T: Send,
    I: Fn() -> T + Sync + Send,
    F: Fn(&mut T, SummatoryPoint, &mut Cursor) + Sync + Send,
    M: Fn(T, T) -> T + Sync + Send,
{
    if lo > hi {
        return init();
    }
    let chunks = (hi - lo) / CHUNK + 1;
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let a = lo + c * CHUNK;
            let b = (a + CHUNK - 1).min(hi);
            let mut acc = init();
            let mut aux = Cursor::new();
            for p in SumStream::starting_at(a).take_while(|p| p.index <= b) {
                step(&mut acc, p, &mut aux);
            }
            acc
        })
        .reduce(&init, &merge)
}

/// Sweeps `lo..=n_max`: every index up to [`FULL_SWEEP_LIMIT`], then every
/// `stride`-th index evaluated with [`s_fast`].
fn sweep<F>(name: &str, lo: u64, n_max: u64, stride: u64, pred: F) -> Result<CheckReport>
where
    F: Fn(u64, i64, &mut dyn FnMut(u64) -> i64, &mut CheckReport) + Sync + Send,
{
    check_index(n_max)?;
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be positive".into()));
    }
    let full_hi = n_max.min(FULL_SWEEP_LIMIT);
    let full = par_scan(
        lo,
        full_hi,
        || CheckReport::new(name),
        |rep, p, aux| pred(p.index, p.value, &mut |m| aux.at(m), rep),
        CheckReport::merge,
    );
    if n_max <= full_hi {
        return Ok(full);
    }
    let first = full_hi + 1;
    let samples = (n_max - first) / stride + 1;
    let lookup = |m: u64| s_fast(m).expect("index already range-checked");
    let sampled = (0..samples)
        .into_par_iter()
        .fold(
            || CheckReport::new(name),
            |mut rep, j| {
                let n = first + j * stride;
                pred(n, lookup(n), &mut |m| lookup(m), &mut rep);
                rep
            },
        )
        .reduce(|| CheckReport::new(name), CheckReport::merge);
    Ok(full.merge(sampled))
}

/// `S(n)` and `n` have opposite parity for `1 ≤ n ≤ n_max`.
pub fn check_parity(n_max: u64) -> Result<CheckReport> {
    check_parity_strided(n_max, DEFAULT_STRIDE)
}

pub fn check_parity_strided(n_max: u64, stride: u64) -> Result<CheckReport> {
    sweep("parity", 1, n_max, stride, |n, s, _, rep| {
        rep.check((s as u64 ^ n) & 1 == 1, || {
            violation(n, "S(n) of parity opposite to n", s)
        })
    })
}

/// `S(n) - 2 ≤ 2·S(⌊n/4⌋) ≤ S(n) + 2` for `1 ≤ n ≤ n_max`.
pub fn check_floor_bound(n_max: u64) -> Result<CheckReport> {
    check_floor_bound_strided(n_max, DEFAULT_STRIDE)
}

pub fn check_floor_bound_strided(n_max: u64, stride: u64) -> Result<CheckReport> {
    sweep("floor", 1, n_max, stride, |n, s, lookup, rep| {
        let q = lookup(n / 4);
        rep.check((s - 2..=s + 2).contains(&(2 * q)), || {
            violation(n, format!("2*S(n/4) in [{}, {}]", s - 2, s + 2), 2 * q)
        })
    })
}

/// One of the four shift identities `S(n + shift) = sign·S(n) + constant`
/// holding on `lo ≤ n ≤ hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftIdentity {
    pub label: &'static str,
    pub k: u32,
    pub shift: u64,
    pub negate: bool,
    pub constant: i64,
    pub lo: u64,
    pub hi: u64,
}

/// The four identities relating `S` on `[0, 2^{2k+3})` to `S` on lower blocks.
pub fn dividing_identities(k: u32) -> [ShiftIdentity; 4] {
    let p = |e: u32| 1u64 << e;
    let c = |e: u32| 1i64 << e;
    [
        ShiftIdentity {
            label: "S(n+2^2k) = -S(n) + 3*2^k",
            k,
            shift: p(2 * k),
            negate: true,
            constant: 3 * c(k),
            lo: p(2 * k),
            hi: p(2 * k + 1) - 1,
        },
        ShiftIdentity {
            label: "S(n+3*2^2k) = S(n) + 2^k",
            k,
            shift: 3 * p(2 * k),
            negate: false,
            constant: c(k),
            lo: 0,
            hi: p(2 * k) - 1,
        },
        ShiftIdentity {
            label: "S(n+2^(2k+1)) = -S(n) + 2^(k+2)",
            k,
            shift: p(2 * k + 1),
            negate: true,
            constant: c(k + 2),
            lo: p(2 * k + 1),
            hi: p(2 * k + 2) - 1,
        },
        ShiftIdentity {
            label: "S(n+3*2^(2k+1)) = S(n) + 2^(k+1)",
            k,
            shift: 3 * p(2 * k + 1),
            negate: false,
            constant: c(k + 1),
            lo: 0,
            hi: p(2 * k + 1) - 1,
        },
    ]
}

/// Largest `k` for which the interval-based checks accept input.
pub const MAX_K: u32 = 29;

fn check_k(k: u32) -> Result<u32> {
    if k == 0 {
        Err(Error::InvalidParameter("k must be at least 1".into()))
    } else if k > MAX_K {
        Err(Error::OutOfRange {
            value: k.into(),
            max: MAX_K.into(),
        })
    } else {
        Ok(k)
    }
}

/// Verifies the four shift identities at `k` over their full domains.
pub fn check_dividing_identities(k: u32) -> Result<CheckReport> {
    check_k(k)?;
    let reports: Vec<CheckReport> = dividing_identities(k)
        .par_iter()
        .map(|id| {
            let mut rep = CheckReport::new("identities");
            let base = SumStream::starting_at(id.lo);
            let shifted = SumStream::starting_at(id.lo + id.shift);
            for (p, q) in base.zip(shifted).take_while(|(p, _)| p.index <= id.hi) {
                let want = if id.negate { -p.value } else { p.value } + id.constant;
                rep.check(q.value == want, || {
                    violation(format!("k={} n={} [{}]", id.k, p.index, id.label), want, q.value)
                });
            }
            rep
        })
        .collect();
    Ok(reports
        .into_iter()
        .fold(CheckReport::new("identities"), CheckReport::merge))
}

/// `I_k = [2^{2k-1}, 2^{2k+1} - 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalIk {
    pub k: u32,
    pub lo: u64,
    pub hi: u64,
}

impl IntervalIk {
    pub fn new(k: u32) -> Result<Self> {
        check_k(k)?;
        Ok(IntervalIk {
            k,
            lo: 1 << (2 * k - 1),
            hi: (1 << (2 * k + 1)) - 1,
        })
    }

    /// The four pieces of `I_k` minus its right endpoint.
    pub fn pieces(&self) -> [(u64, u64); 4] {
        let k = self.k;
        let p = |e: u32| 1u64 << e;
        let q = |e: u32| 3u64 << e;
        [
            (p(2 * k - 1), q(2 * k - 2) - 1),
            (q(2 * k - 2), p(2 * k) - 1),
            (p(2 * k), q(2 * k - 1) - 1),
            (q(2 * k - 1), p(2 * k + 1) - 2),
        ]
    }

    /// `J_k = [2^{2k-1} - 1, 2^{2k} - 1]`.
    pub fn j_interval(&self) -> (u64, u64) {
        ((1 << (2 * self.k - 1)) - 1, (1 << (2 * self.k)) - 1)
    }

    pub fn contains(&self, n: u64) -> bool {
        (self.lo..=self.hi).contains(&n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Extremes {
    pub max_value: i64,
    pub argmax: Vec<u64>,
    pub min_value: i64,
    pub argmin: Vec<u64>,
}

impl Extremes {
    fn empty() -> Self {
        Extremes {
            max_value: i64::MIN,
            argmax: Vec::new(),
            min_value: i64::MAX,
            argmin: Vec::new(),
        }
    }

    fn push(&mut self, p: SummatoryPoint) {
        use std::cmp::Ordering::*;
        match p.value.cmp(&self.max_value) {
            Greater => {
                self.max_value = p.value;
                self.argmax = vec![p.index];
            }
            Equal => self.argmax.push(p.index),
            Less => {}
        }
        match p.value.cmp(&self.min_value) {
            Less => {
                self.min_value = p.value;
                self.argmin = vec![p.index];
            }
            Equal => self.argmin.push(p.index),
            Greater => {}
        }
    }

    fn merge(mut self, other: Extremes) -> Extremes {
        use std::cmp::Ordering::*;
        match other.max_value.cmp(&self.max_value) {
            Greater => {
                self.max_value = other.max_value;
                self.argmax = other.argmax;
            }
            Equal => self.argmax.extend(other.argmax),
            Less => {}
        }
        match other.min_value.cmp(&self.min_value) {
            Less => {
                self.min_value = other.min_value;
                self.argmin = other.argmin;
            }
            Equal => self.argmin.extend(other.argmin),
            Greater => {}
        }
        self
    }
}

/// Maximum and minimum of `S` over `lo..=hi` with every position attaining them.
pub fn extremes(lo: u64, hi: u64) -> Extremes {
    par_scan(lo, hi, Extremes::empty, |e, p, _| e.push(p), Extremes::merge)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtremaReport {
    pub interval: IntervalIk,
    pub observed: Extremes,
    pub expected_max: i64,
    pub expected_argmax: u64,
    pub expected_min: i64,
    pub expected_argmin: u64,
}

impl ExtremaReport {
    /// Maximum `2^{k+1}` only at `2^{2k+1}-1`, minimum `2^{k-1}` only at `3·4^{k-1}-1`.
    pub fn holds(&self) -> bool {
        self.observed.max_value == self.expected_max
            && self.observed.argmax == [self.expected_argmax]
            && self.observed.min_value == self.expected_min
            && self.observed.argmin == [self.expected_argmin]
    }
}

pub fn interval_extrema(k: u32) -> Result<ExtremaReport> {
    let interval = IntervalIk::new(k)?;
    Ok(ExtremaReport {
        interval,
        observed: extremes(interval.lo, interval.hi),
        expected_max: 1 << (k + 1),
        expected_argmax: (1 << (2 * k + 1)) - 1,
        expected_min: 1 << (k - 1),
        expected_argmin: 3 * (1u64 << (2 * (k - 1))) - 1,
    })
}

/// `n = 2^{2k} - 1 - Σ_{r=0}^{k-2} ε_r·3·2^{2r+1} - β` with `ε_r ∈ {0,1}`, `β ∈ {0,2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FormRep {
    pub k: u32,
    pub epsilons: Vec<bool>,
    pub beta: u8,
}

impl FormRep {
    pub fn encode(&self) -> u64 {
        let sub: u64 = self
            .epsilons
            .iter()
            .enumerate()
            .filter(|(_, &e)| e)
            .map(|(r, _)| 3u64 << (2 * r + 1))
            .sum();
        (1u64 << (2 * self.k)) - 1 - sub - u64::from(self.beta)
    }
}

/// Every `(n, representation)` of the form above lying in `J_k`, sorted by `n`.
pub fn jk_form_set(k: u32) -> Result<Vec<(u64, FormRep)>> {
    let interval = IntervalIk::new(k)?;
    if k > 25 {
        return Err(Error::ResourceLimit(format!("form set at k = {k} has 2^{k} members")));
    }
    let (lo, hi) = interval.j_interval();
    let eps_len = (k - 1) as usize;
    let mut out: Vec<(u64, FormRep)> = (0..1u64 << eps_len)
        .flat_map(|mask| {
            [0u8, 2].map(|beta| FormRep {
                k,
                epsilons: (0..eps_len).map(|r| (mask >> r) & 1 == 1).collect(),
                beta,
            })
        })
        .map(|f| (f.encode(), f))
        .filter(|(n, _)| (lo..=hi).contains(n))
        .collect();
    out.sort_by_key(|(n, _)| *n);
    out.dedup_by_key(|(n, _)| *n);
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JkReport {
    pub k: u32,
    pub form_set: Vec<u64>,
    /// Positions in `J_k` where `S = 2^k`.
    pub attaining: Vec<u64>,
    pub max_on_jk: i64,
    /// Form members with `i_n = -1`.
    pub sign_failures: Vec<u64>,
    /// Form members `m` for which `4m + 3` is not a form member at `k + 1`.
    pub closure_failures: Vec<u64>,
}

impl JkReport {
    pub fn holds(&self) -> bool {
        self.form_set == self.attaining
            && self.max_on_jk == 1 << self.k
            && self.sign_failures.is_empty()
            && self.closure_failures.is_empty()
    }
}

/// Form-set equality on `J_k`, the maximum `2^k`, `i_n = +1` on members and
/// closure under `m ↦ 4m + 3`.
pub fn check_jk_form(k: u32) -> Result<JkReport> {
    let interval = IntervalIk::new(k)?;
    let form_set: Vec<u64> = jk_form_set(k)?.into_iter().map(|(n, _)| n).collect();
    let next: std::collections::BTreeSet<u64> = jk_form_set(k + 1)?.into_iter().map(|(n, _)| n).collect();
    let (lo, hi) = interval.j_interval();
    let target = 1i64 << k;
    let ext = extremes(lo, hi);
    let attaining = if ext.max_value == target {
        ext.argmax
    } else {
        par_scan(
            lo,
            hi,
            Vec::new,
            |v, p, _| {
                if p.value == target {
                    v.push(p.index)
                }
            },
            |mut a, b| {
                a.extend(b);
                a
            },
        )
    };
    Ok(JkReport {
        k,
        sign_failures: form_set
            .iter()
            .copied()
            .filter(|&n| i_direct(n) != Sign::Plus)
            .collect(),
        closure_failures: form_set
            .iter()
            .copied()
            .filter(|&m| !next.contains(&(4 * m + 3)))
            .collect(),
        form_set,
        attaining,
        max_on_jk: ext.max_value,
    })
}

/// `n = 2^{2k+1} - 1` for some `k ≥ 1`: an odd-length all-ones bit pattern of length ≥ 3.
pub fn is_upper_exception(n: u64) -> bool {
    let m = n.wrapping_add(1);
    m.is_power_of_two() && m.trailing_zeros() % 2 == 1 && m.trailing_zeros() >= 3
}

/// `S(n)² < 2n` for `8 ≤ n ≤ n_max` off the family `2^{2k+1}-1`, and
/// `S(n)² > 2n` on it.
pub fn check_upper_ratio(n_max: u64) -> Result<CheckReport> {
    check_upper_ratio_strided(n_max, DEFAULT_STRIDE)
}

pub fn check_upper_ratio_strided(n_max: u64, stride: u64) -> Result<CheckReport> {
    if n_max < 8 {
        return Err(Error::InvalidParameter("upper ratio sweep needs n_max >= 8".into()));
    }
    sweep("upper-ratio", 8, n_max, stride, |n, s, _, rep| {
        let sq = i128::from(s) * i128::from(s);
        let twice = 2 * i128::from(n);
        if is_upper_exception(n) {
            rep.check(sq > twice, || violation(n, format!("S^2 > {twice}"), sq));
        } else {
            rep.check(sq < twice, || violation(n, format!("S^2 < {twice}"), sq));
        }
    })
}

/// `S(n) > 0` and `3·S(n)² > n` for `1 ≤ n ≤ n_max`.
pub fn check_lower_ratio(n_max: u64) -> Result<CheckReport> {
    check_lower_ratio_strided(n_max, DEFAULT_STRIDE)
}

pub fn check_lower_ratio_strided(n_max: u64, stride: u64) -> Result<CheckReport> {
    sweep("lower-ratio", 1, n_max, stride, |n, s, _, rep| {
        let thrice = 3 * i128::from(s) * i128::from(s);
        rep.check(s > 0 && thrice > i128::from(n), || {
            violation(n, format!("S > 0 and 3*S^2 > {n}"), s)
        })
    })
}

/// `A(4n+3) = 2·A(n)` where `A(n) = Σ_{j ≤ n} V_j`.
pub fn check_pair_sum_scaling(n_max: u64) -> Result<CheckReport> {
    if n_max > 1 << 24 {
        return Err(Error::ResourceLimit(
            "pair-sum table is limited to n_max <= 2^24".into(),
        ));
    }
    let top = 4 * n_max + 3;
    let mut acc = [0i64; 2];
    let mut a = Vec::with_capacity(top as usize + 1);
    for n in 0..=top {
        acc[0] += i_value(n);
        acc[1] += i_value(2 * n);
        a.push(acc);
    }
    let mut rep = CheckReport::new("pair-sum");
    for n in 0..=n_max {
        let lhs = a[(4 * n + 3) as usize];
        let rhs = [2 * a[n as usize][0], 2 * a[n as usize][1]];
        rep.check(lhs == rhs, || violation(n, format!("{rhs:?}"), format!("{lhs:?}")));
    }
    Ok(rep)
}

/// Extreme values of `S(n)/√n` over `I_k`, located with exact comparisons.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioRow {
    pub k: u32,
    pub max_ratio: f64,
    pub min_ratio: f64,
    #[serde(skip)]
    pub max_at: SummatoryPoint,
    #[serde(skip)]
    pub min_at: SummatoryPoint,
}

/// `a/√x < b/√y` compared through `a|a|·y < b|b|·x`.
fn ratio_less(a: SummatoryPoint, b: SummatoryPoint) -> bool {
    let key = |p: SummatoryPoint| i128::from(p.value) * i128::from(p.value).abs();
    key(a) * i128::from(b.index) < key(b) * i128::from(a.index)
}

fn ratio(p: SummatoryPoint) -> f64 {
    p.value as f64 / (p.index as f64).sqrt()
}

pub fn ratio_limit_table(k_max: u32) -> Result<Vec<RatioRow>> {
    check_k(k_max)?;
    if k_max > 16 {
        return Err(Error::ResourceLimit(format!(
            "scanning I_{k_max} exceeds the desk-scale budget"
        )));
    }
    (1..=k_max)
        .map(|k| {
            let interval = IntervalIk::new(k)?;
            let first = SummatoryPoint {
                index: interval.lo,
                value: s_count_digits(interval.lo),
            };
            let (max_at, min_at) = par_scan(
                interval.lo,
                interval.hi,
                || (first, first),
                |(hi, lo), p, _| {
                    if ratio_less(*hi, p) {
                        *hi = p;
                    }
                    if ratio_less(p, *lo) {
                        *lo = p;
                    }
                },
                |(h1, l1), (h2, l2)| {
                    (
                        if ratio_less(h1, h2) { h2 } else { h1 },
                        if ratio_less(l2, l1) { l2 } else { l1 },
                    )
                },
            );
            Ok(RatioRow {
                k,
                max_ratio: ratio(max_at),
                min_ratio: ratio(min_at),
                max_at,
                min_at,
            })
        })
        .collect()
}

/// Absolute tolerance on the reported ratios against `√2` and `1/√3`.
pub const LIMIT_TOLERANCE: f64 = 1e-5;
/// First `k` at which both extreme ratios are within [`LIMIT_TOLERANCE`] of their limits.
pub const LIMIT_CLOSE_FROM_K: u32 = 8;

/// Closed forms `2^{k+1}/√(2^{2k+1}-1)` and `2^{k-1}/√(3·4^{k-1}-1)` (exact),
/// strict decrease in `k` (exact), and closeness to the limits from
/// [`LIMIT_CLOSE_FROM_K`] on.
pub fn check_ratio_limits(rows: &[RatioRow]) -> CheckReport {
    let mut rep = CheckReport::new("limits");
    let same = |p: SummatoryPoint, s: i64, n: u64| {
        let q = SummatoryPoint { index: n, value: s };
        !ratio_less(p, q) && !ratio_less(q, p)
    };
    for row in rows {
        let k = row.k;
        let (smax, nmax) = (1i64 << (k + 1), (1u64 << (2 * k + 1)) - 1);
        let (smin, nmin) = (1i64 << (k - 1), 3 * (1u64 << (2 * (k - 1))) - 1);
        rep.check(same(row.max_at, smax, nmax), || {
            violation(
                format!("k={k} max"),
                format!("{smax}/sqrt({nmax})"),
                format!("{}/sqrt({})", row.max_at.value, row.max_at.index),
            )
        });
        rep.check(same(row.min_at, smin, nmin), || {
            violation(
                format!("k={k} min"),
                format!("{smin}/sqrt({nmin})"),
                format!("{}/sqrt({})", row.min_at.value, row.min_at.index),
            )
        });
        let closed_max = smax as f64 / (nmax as f64).sqrt();
        let closed_min = smin as f64 / (nmin as f64).sqrt();
        rep.check((row.max_ratio - closed_max).abs() < 1e-12, || {
            violation(format!("k={k} max float"), closed_max, row.max_ratio)
        });
        rep.check((row.min_ratio - closed_min).abs() < 1e-12, || {
            violation(format!("k={k} min float"), closed_min, row.min_ratio)
        });
        if k >= LIMIT_CLOSE_FROM_K {
            let sqrt2 = std::f64::consts::SQRT_2;
            let inv_sqrt3 = 1.0 / 3f64.sqrt();
            rep.check((row.max_ratio - sqrt2).abs() < LIMIT_TOLERANCE, || {
                violation(format!("k={k} max vs sqrt 2"), sqrt2, row.max_ratio)
            });
            rep.check((row.min_ratio - inv_sqrt3).abs() < LIMIT_TOLERANCE, || {
                violation(format!("k={k} min vs 1/sqrt 3"), inv_sqrt3, row.min_ratio)
            });
        }
    }
    for w in rows.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        rep.check(ratio_less(b.max_at, a.max_at), || {
            violation(
                format!("k={}..{} max", a.k, b.k),
                "strictly decreasing",
                format!("{} -> {}", a.max_ratio, b.max_ratio),
            )
        });
        rep.check(ratio_less(b.min_at, a.min_at), || {
            violation(
                format!("k={}..{} min", a.k, b.k),
                "strictly decreasing",
                format!("{} -> {}", a.min_ratio, b.min_ratio),
            )
        });
    }
    rep
}

/// One sample of `G`: `x = frac(log₄ N)`, `y = S(N)/√N`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GSample {
    pub x: f64,
    pub y: f64,
    #[serde(rename = "N")]
    pub index: u64,
}

impl GSample {
    pub fn at(n: u64) -> Result<GSample> {
        if n == 0 {
            return Err(Error::InvalidParameter("G is sampled at N >= 1".into()));
        }
        let s = s_fast(n)?;
        let l = (n as f64).log2() / 2.0;
        Ok(GSample {
            x: l - l.floor(),
            y: s as f64 / (n as f64).sqrt(),
            index: n,
        })
    }
}

/// Largest octave whose upper end `4^{m+1}` stays within the index range.
pub const MAX_OCTAVE: u32 = 30;

/// `count` geometrically spaced samples over `[4^m, 4^{m+1})`, sorted by `x`,
/// duplicates after rounding removed.
pub fn g_sample(m: u32, count: usize) -> Result<Vec<GSample>> {
    if m < 2 || count < 2 {
        return Err(Error::InvalidParameter(
            "g_sample needs octave >= 2 and count >= 2".into(),
        ));
    }
    if m > MAX_OCTAVE {
        return Err(Error::OutOfRange {
            value: 1u128 << (2 * (m + 1)).min(127),
            max: MAX_INDEX.into(),
        });
    }
    let lo = 1u64 << (2 * m);
    let hi = (1u64 << (2 * m + 2)) - 1;
    let mut indices: Vec<u64> = (0..count)
        .map(|j| {
            let n = (lo as f64 * 4f64.powf(j as f64 / count as f64)).round() as u64;
            n.clamp(lo, hi)
        })
        .collect();
    indices.dedup();
    indices.into_par_iter().map(GSample::at).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicityReport {
    pub octave: u32,
    pub pairs: usize,
    pub max_dy: f64,
    pub worst: Option<(u64, u64)>,
}

/// Pairs samples of octaves `m` and `m+1` whose `x` differ by less than
/// `2^-12` and reports the largest difference in `y`.
pub fn g_periodicity(m: u32, count: usize) -> Result<PeriodicityReport> {
    let lower = g_sample(m, count)?;
    let upper = g_sample(m + 1, count)?;
    let tol = 2f64.powi(-12);
    let mut rep = PeriodicityReport {
        octave: m,
        pairs: 0,
        max_dy: 0.0,
        worst: None,
    };
    for a in &lower {
        let j = upper.partition_point(|b| b.x < a.x);
        let nearest = [j.checked_sub(1), Some(j)]
            .into_iter()
            .flatten()
            .filter_map(|j| upper.get(j))
            .min_by(|p, q| (p.x - a.x).abs().total_cmp(&(q.x - a.x).abs()));
        if let Some(b) = nearest {
            if (b.x - a.x).abs() < tol {
                rep.pairs += 1;
                let dy = (b.y - a.y).abs();
                if dy > rep.max_dy || rep.worst.is_none() {
                    rep.max_dy = rep.max_dy.max(dy);
                    rep.worst = Some((a.index, b.index));
                }
            }
        }
    }
    Ok(rep)
}
