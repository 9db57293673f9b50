//! Exact counting of Toeplitz matrices by nullity.
//!
//! The number of one-step extensions `A_n ⇀ A_{n+1}` reaching each nullity
//! depends only on the pair `(nu_{n-1}, nu_n)`. That makes the nullity
//! sequence a weighted automaton over [`PairState`]s, and a forward DP over
//! it yields `N(n, nu)` for every order. The empty `0x0` matrix before `A_0`
//! counts as invertible, so order 0 carries mass `q-1` in state `(0,0)` and
//! mass `1` in state `(0,1)`.
//!
//! The GF(2) closed forms live here too, each next to the DP quantity it is
//! checked against.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::kernel_structure::{validate_nullity_string, NullityString};

/// Terminal pair `(nu_{n-1}, nu_n)` of a nullity string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairState {
    prev: usize,
    cur: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PairClass {
    /// `(0, 0)`, including the virtual start before an invertible `A_0`.
    ZeroZero,
    /// `(1, 0)`.
    OneZero,
    /// `(d-1, d)` for `d >= 1`.
    Ascending,
    /// `(d, d)` for `d >= 1`.
    Plateau,
    /// `(d, d-1)` for `d >= 2`.
    Descending,
}

impl PairClass {
    pub const ALL: [PairClass; 5] = [
        PairClass::ZeroZero,
        PairClass::OneZero,
        PairClass::Ascending,
        PairClass::Plateau,
        PairClass::Descending,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PairClass::ZeroZero => "(0,0)",
            PairClass::OneZero => "(1,0)",
            PairClass::Ascending => "(d-1,d)",
            PairClass::Plateau => "(d,d)",
            PairClass::Descending => "(d,d-1)",
        }
    }

    /// Transition rules of this class as `(nullity offset, weight polynomial in q)`.
    pub fn rules(self) -> &'static [TransitionRule] {
        match self {
            PairClass::ZeroZero => &ZERO_ZERO,
            PairClass::OneZero => &ONE_ZERO,
            PairClass::Ascending => &ASCENDING,
            PairClass::Plateau => &PLATEAU,
            PairClass::Descending => &DESCENDING,
        }
    }
}

const fn rule(offset: i64, c0: i64, c1: i64, c2: i64) -> TransitionRule {
    TransitionRule {
        offset,
        weight: WeightPoly::new(c0, c1, c2),
    }
}

const ZERO_ZERO: [TransitionRule; 2] = [rule(0, 1, -1, 1), rule(1, -1, 1, 0)];
const ONE_ZERO: [TransitionRule; 2] = [rule(0, 0, -1, 1), rule(1, 0, 1, 0)];
const ASCENDING: [TransitionRule; 3] = [rule(1, 1, 0, 0), rule(0, -2, 2, 0), rule(-1, 1, -2, 1)];
const PLATEAU: [TransitionRule; 2] = [rule(0, 0, 1, 0), rule(-1, 0, -1, 1)];
const DESCENDING: [TransitionRule; 1] = [rule(-1, 0, 0, 1)];

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl PairState {
    pub fn new(prev: usize, cur: usize) -> Result<Self> {
        if prev.abs_diff(cur) > 1 {
            return Err(Error::Domain(format!(
                "pair ({prev},{cur}) changes nullity by more than one"
            )));
        }
        Ok(Self { prev, cur })
    }

    /// The state of `A_0`, with the empty matrix before it counted as invertible.
    pub fn initial(nu0: usize) -> Result<Self> {
        if nu0 > 1 {
            return Err(Error::Domain(format!("nu_0 = {nu0} is impossible")));
        }
        Ok(Self { prev: 0, cur: nu0 })
    }

    pub fn prev(self) -> usize {
        self.prev
    }

    pub fn cur(self) -> usize {
        self.cur
    }

    pub fn class(self) -> PairClass {
        let (p, c) = (self.prev, self.cur);
        match (p, c) {
            (0, 0) => PairClass::ZeroZero,
            (1, 0) => PairClass::OneZero,
            _ if p + 1 == c => PairClass::Ascending,
            _ if p == c => PairClass::Plateau,
            // p == c + 1 with c >= 1, so p >= 2
            _ => PairClass::Descending,
        }
    }

    /// Next state after moving to nullity `next`.
    pub fn advance(self, next: usize) -> PairState {
        PairState {
            prev: self.cur,
            cur: next,
        }
    }
}

impl fmt::Display for PairState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.prev, self.cur)
    }
}

/// `c0 + c1*q + c2*q^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightPoly {
    pub c0: i64,
    pub c1: i64,
    pub c2: i64,
}

impl WeightPoly {
    pub const fn new(c0: i64, c1: i64, c2: i64) -> Self {
        Self { c0, c1, c2 }
    }

    pub fn eval(self, q: u32) -> u64 {
        let q = i64::from(q);
        let v = self.c0 + self.c1 * q + self.c2 * q * q;
        debug_assert!(v >= 0);
        v as u64
    }
}

impl fmt::Display for WeightPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (c, mono) in [(self.c2, "q^2"), (self.c1, "q"), (self.c0, "")] {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            let body = match (mag, mono) {
                (_, "") => mag.to_string(),
                (1, m) => m.to_string(),
                (k, m) => format!("{k}{m}"),
            };
            out.push_str(sign);
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransitionRule {
    pub offset: i64,
    pub weight: WeightPoly,
}

/// The weighted transitions out of `state`, as `(next nullity, weight)`.
pub fn transition_weights(state: PairState, field: PrimeField) -> Vec<(usize, u64)> {
    let q = field.modulus();
    state
        .class()
        .rules()
        .iter()
        .map(|r| ((state.cur as i64 + r.offset) as usize, r.weight.eval(q)))
        .collect()
}

fn weight_of(state: PairState, next: usize, field: PrimeField) -> Option<u64> {
    transition_weights(state, field)
        .into_iter()
        .find(|&(n, _)| n == next)
        .map(|(_, w)| w)
}

/// `N(m, nu)` for `m = 0..=n`, exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    q: u32,
    rows: Vec<Vec<BigUint>>,
}

impl CountTable {
    /// Rows must have length `m + 2` for row `m`.
    pub fn from_rows(q: u32, rows: Vec<Vec<BigUint>>) -> Result<Self> {
        if let Some((m, r)) = rows.iter().enumerate().find(|(m, r)| r.len() != m + 2) {
            return Err(Error::InvalidArgument(format!(
                "row {m} has {} entries, expected {}",
                r.len(),
                m + 2
            )));
        }
        Ok(Self { q, rows })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Largest order in the table.
    pub fn max_order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn row(&self, m: usize) -> &[BigUint] {
        &self.rows[m]
    }

    pub fn rows(&self) -> &[Vec<BigUint>] {
        &self.rows
    }

    /// `N(m, nu)`; zero outside `0..=m+1`.
    pub fn get(&self, m: usize, nu: usize) -> BigUint {
        self.rows
            .get(m)
            .and_then(|r| r.get(nu))
            .cloned()
            .unwrap_or_default()
    }

    pub fn row_sum(&self, m: usize) -> BigUint {
        self.rows[m].iter().sum()
    }
}

type Distribution = BTreeMap<PairState, BigUint>;

fn initial_distribution(field: PrimeField) -> Distribution {
    let mut d = Distribution::new();
    d.insert(PairState { prev: 0, cur: 0 }, BigUint::from(field.modulus() - 1));
    d.insert(PairState { prev: 0, cur: 1 }, BigUint::one());
    d
}

fn step(dist: &Distribution, field: PrimeField, keep: impl Fn(usize) -> bool) -> Distribution {
    let mut out = Distribution::new();
    for (&state, mass) in dist {
        for (next, w) in transition_weights(state, field) {
            if keep(next) {
                *out.entry(state.advance(next)).or_default() += mass * w;
            }
        }
    }
    out
}

/// Pair-state distributions of all order-`m` matrices, `m = 0..=n`.
pub fn state_distributions(n: usize, field: PrimeField) -> Vec<BTreeMap<PairState, BigUint>> {
    let mut out = vec![initial_distribution(field)];
    for _ in 0..n {
        let next = step(out.last().unwrap(), field, |_| true);
        out.push(next);
    }
    out
}

pub fn count_table(n: usize, field: PrimeField) -> CountTable {
    let rows = state_distributions(n, field)
        .iter()
        .enumerate()
        .map(|(m, dist)| {
            let mut row = vec![BigUint::zero(); m + 2];
            for (state, mass) in dist {
                row[state.cur] += mass;
            }
            row
        })
        .collect();
    CountTable {
        q: field.modulus(),
        rows,
    }
}

/// Order-`n` rank spectrum: rank `n + 1 - nu` mapped to its count.
pub fn rank_spectrum(n: usize, field: PrimeField) -> BTreeMap<usize, BigUint> {
    let table = count_table(n, field);
    table
        .row(n)
        .iter()
        .enumerate()
        .map(|(nu, c)| (n + 1 - nu, c.clone()))
        .collect()
}

/// `C(string)`: the number of extension chains from one fixed matrix in
/// state `start` realizing `string`, whose first entry is `start`'s
/// current nullity.
pub fn count_string(start: PairState, string: &NullityString, field: PrimeField) -> Result<BigUint> {
    let values = string.values();
    match values.first() {
        None => {
            return Err(Error::InvalidString {
                position: 0,
                reason: "empty string".into(),
            })
        }
        Some(&v) if v != start.cur => {
            return Err(Error::InvalidString {
                position: 0,
                reason: format!("string starts at {v} but the start state is {start}"),
            })
        }
        _ => {}
    }
    let mut state = start;
    let mut count = BigUint::one();
    for (i, &next) in values.iter().enumerate().skip(1) {
        let Some(w) = weight_of(state, next, field) else {
            return Err(Error::InvalidString {
                position: i,
                reason: format!("{} -> {next} is impossible from state {state}", state.cur),
            });
        };
        count *= w;
        state = state.advance(next);
    }
    Ok(count)
}

/// Chains from a fixed nullity-1 matrix entered from nullity 0 that stay
/// positive for `n - 1` steps and reach nullity 0 at step `n`.
pub fn positive_excursion_count(n: usize, field: PrimeField) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("excursion length must be at least 1".into()));
    }
    let mut dist = Distribution::new();
    dist.insert(PairState { prev: 0, cur: 1 }, BigUint::one());
    for _ in 1..n {
        dist = step(&dist, field, |next| next > 0);
    }
    let last = step(&dist, field, |next| next == 0);
    Ok(last.values().sum())
}

/// Order-`n` matrices whose whole nullity string is positive and ends in `k`.
pub fn positive_terminal_count(n: usize, k: usize, field: PrimeField) -> BigUint {
    // only A_0 = [0] starts positive
    let mut dist = Distribution::new();
    dist.insert(PairState { prev: 0, cur: 1 }, BigUint::one());
    for _ in 0..n {
        dist = step(&dist, field, |next| next > 0);
    }
    dist.iter().filter(|(s, _)| s.cur == k).map(|(_, m)| m).sum()
}

/// GF(2): order-`n` matrices with an everywhere-positive string ending in 1.
pub fn nullity1_structured_count(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("defined for n >= 1".into()));
    }
    Ok(positive_terminal_count(n, 1, PrimeField::gf2()))
}

/// `(n + 3) 2^(n-2)` for `n >= 1`.
pub fn nullity1_structured_closed(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("defined for n >= 1".into()));
    }
    Ok((BigUint::from(n + 3) << (n - 1)) >> 1)
}

/// `n 2^(n-1)` for `n >= 1`.
pub fn positive_excursion_closed(n: usize) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::Domain("defined for n >= 1".into()));
    }
    Ok(BigUint::from(n) << (n - 1))
}

/// Counts of order-`n` matrices over GF(2) ending in state `(0,0)` and `(1,0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaEta {
    pub n: usize,
    pub theta: BigUint,
    pub eta: BigUint,
}

/// `theta(n)` and `eta(n)` read off the DP, for any field.
pub fn theta_eta_dp(n: usize, field: PrimeField) -> ThetaEta {
    let dist = state_distributions(n, field).pop().unwrap();
    let get = |prev, cur| dist.get(&PairState { prev, cur }).cloned().unwrap_or_default();
    ThetaEta {
        n,
        theta: get(0, 0),
        eta: get(1, 0),
    }
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("defined for n >= 1".into()))
    } else {
        Ok(())
    }
}

/// `(2^(2n+1) + 1) / 3`.
pub fn closed_theta(n: usize) -> Result<BigUint> {
    require_positive(n)?;
    Ok(((BigUint::one() << (2 * n + 1)) + 1u32) / 3u32)
}

/// `(2^(2n) - 1) / 3`.
pub fn closed_eta(n: usize) -> Result<BigUint> {
    require_positive(n)?;
    Ok(((BigUint::one() << (2 * n)) - 1u32) / 3u32)
}

/// Number of invertible order-`n` matrices over GF(2), summed term by term
/// over where the last zero before position `n` sits.
pub fn invertible_formula(n: usize) -> Result<BigUint> {
    if n < 2 {
        return Err(Error::Domain(format!("the sum is stated for n >= 2, got {n}")));
    }
    let pow2 = |e: usize| BigUint::one() << e;
    let mut total = BigUint::from(n) * pow2(n - 1) + BigUint::from(n - 1) * pow2(n - 2);
    for j in 1..=n - 2 {
        let weight = closed_theta(j)? + closed_eta(j)? * 2u32;
        total += weight * BigUint::from(n - 1 - j) * pow2(n - 2 - j);
    }
    total += closed_theta(n - 1)? * 3u32 + closed_eta(n - 1)? * 2u32;
    Ok(total)
}

/// GF(2) count of order-`n` matrices with nullity `k`.
pub fn nullity_count_closed(n: usize, k: usize) -> Result<BigUint> {
    if k > n + 1 {
        return Err(Error::Domain(format!("nullity {k} exceeds the size {}", n + 1)));
    }
    Ok(if k == n + 1 {
        BigUint::one()
    } else if k == 0 {
        BigUint::one() << (2 * n)
    } else {
        BigUint::from(3u32) << (2 * (n - k))
    })
}

/// `P(m, k)`: valid nullity strings `nu_0..nu_m`, all positive, ending in `k`.
/// Counted by enumerating the strings themselves.
pub fn positive_string_counts(m: usize, k: usize) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("P(m, k) needs k >= 1".into()));
    }
    fn extend(prefix: &mut Vec<usize>, remaining: usize, k: usize) -> u64 {
        if remaining == 0 {
            return u64::from(prefix.last() == Some(&k));
        }
        let cur = *prefix.last().unwrap();
        let mut total = 0;
        for next in [cur - 1, cur, cur + 1] {
            if next == 0 {
                continue;
            }
            prefix.push(next);
            if validate_nullity_string(&NullityString::from(prefix.clone())) {
                total += extend(prefix, remaining - 1, k);
            }
            prefix.pop();
        }
        total
    }
    // nu_0 is 0 or 1, and must be positive
    Ok(extend(&mut vec![1], m, k))
}
