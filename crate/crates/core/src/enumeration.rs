//! Exhaustive and sampled enumeration of Toeplitz specs: the ground truth
//! the counting automaton and the kernel-structure predicates are checked
//! against.
//!
//! Specs of order `n` are indexed lexicographically by their digits
//! `(a_0, a_1, b_1, .., a_n, b_n)` with `a_0` most significant, so every
//! counterexample is addressable by `(order, index)`. Scans split the index
//! range into disjoint chunks, run them on a rayon pool of `jobs` threads and
//! merge the chunk results in index order, so the output never depends on
//! `jobs`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Range;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;
use rayon::prelude::*;

use crate::counting::{transition_weights, CountTable, PairClass, PairState, ThetaEta};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::kernel_structure::{
    check_ascent_span, check_descent_interior_zeros, check_plateau_shift, check_single_generator_ends,
    NullityString,
};
use crate::toeplitz::{Eliminator, ToeplitzSpec};

/// Default cap on the number of matrices a single scan may enumerate.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanOptions {
    /// Worker threads; 1 scans on the calling thread.
    pub jobs: usize,
    /// Refuse scans needing more than this many matrices of one order.
    pub budget: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        Self {
            jobs: 1,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl ScanOptions {
    pub fn with_jobs(mut self, jobs: usize) -> Self {
        self.jobs = jobs;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

/// Number of order-`n` specs, `q^(2n+1)`, if it fits the budget.
pub fn spec_count(n: usize, field: PrimeField, budget: u64) -> Result<u64> {
    let required = BigUint::from(field.modulus()).pow(2 * n as u32 + 1);
    match required.to_u64() {
        Some(v) if v <= budget => Ok(v),
        _ => Err(Error::BudgetExceeded { required, budget }),
    }
}

fn decode(index: u64, q: u32, a: &mut [u32], b: &mut [u32]) {
    let q = u64::from(q);
    let mut rest = index;
    for k in (1..a.len()).rev() {
        b[k - 1] = (rest % q) as u32;
        rest /= q;
        a[k] = (rest % q) as u32;
        rest /= q;
    }
    a[0] = (rest % q) as u32;
}

/// The spec at position `index` of the order-`n` enumeration.
pub fn spec_at_index(n: usize, field: PrimeField, index: u64) -> Result<ToeplitzSpec> {
    let total = spec_count(n, field, u64::MAX)?;
    if index >= total {
        return Err(Error::InvalidArgument(format!(
            "index {index} is out of range for {total} specs"
        )));
    }
    let mut a = vec![0; n + 1];
    let mut b = vec![0; n];
    decode(index, field.modulus(), &mut a, &mut b);
    ToeplitzSpec::new(field, a, b)
}

/// Every order-`n` spec exactly once, in lexicographic order.
pub fn enumerate_all(n: usize, field: PrimeField, budget: u64) -> Result<impl Iterator<Item = ToeplitzSpec>> {
    let total = spec_count(n, field, budget)?;
    Ok((0..total).map(move |i| {
        let mut a = vec![0; n + 1];
        let mut b = vec![0; n];
        decode(i, field.modulus(), &mut a, &mut b);
        ToeplitzSpec::new(field, a, b).expect("decoded digits lie in the field")
    }))
}

/// Runs `work` over disjoint chunks of `0..total` and folds the chunk results
/// in index order.
fn scan<T, W, M>(total: u64, jobs: usize, work: W, merge: M) -> T
where
    T: Send,
    W: Fn(Range<u64>) -> T + Sync,
    M: Fn(T, T) -> T,
{
    let jobs = jobs.max(1);
    if jobs == 1 || total < 2 {
        return work(0..total);
    }
    let chunks = (jobs as u64 * 8).min(total);
    let ranges: Vec<Range<u64>> = (0..chunks)
        .map(|c| (total * c / chunks)..(total * (c + 1) / chunks))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool");
    let parts: Vec<T> = pool.install(|| ranges.into_par_iter().map(&work).collect());
    parts.into_iter().reduce(merge).expect("at least one chunk")
}

/// Scratch state for walking one index range of an order.
struct Walker {
    field: PrimeField,
    a: Vec<u32>,
    b: Vec<u32>,
    elim: Eliminator,
}

impl Walker {
    fn new(n: usize, field: PrimeField) -> Self {
        Self {
            field,
            a: vec![0; n + 1],
            b: vec![0; n],
            elim: Eliminator::new(field),
        }
    }

    fn load(&mut self, index: u64) {
        decode(index, self.field.modulus(), &mut self.a, &mut self.b);
    }

    fn order(&self) -> usize {
        self.b.len()
    }

    fn nullity(&mut self) -> usize {
        self.elim.nullity(&self.a, &self.b)
    }

    /// `nu_{n-1}`, with the virtual `nu_{-1} = 0`.
    fn prev_nullity(&mut self) -> usize {
        let n = self.order();
        if n == 0 {
            0
        } else {
            self.elim.nullity(&self.a[..n], &self.b[..n - 1])
        }
    }

    fn nullity_string(&mut self) -> Vec<usize> {
        (0..=self.order())
            .map(|m| self.elim.nullity(&self.a[..=m], &self.b[..m]))
            .collect()
    }

    fn spec(&self) -> ToeplitzSpec {
        ToeplitzSpec::new(self.field, self.a.clone(), self.b.clone()).expect("valid digits")
    }

    fn census(&mut self) -> BTreeMap<usize, u64> {
        let q = self.field.modulus();
        let mut a = self.a.clone();
        let mut b = self.b.clone();
        a.push(0);
        b.push(0);
        let mut counts = BTreeMap::new();
        for bn in 0..q {
            for an in 0..q {
                *a.last_mut().unwrap() = an;
                *b.last_mut().unwrap() = bn;
                *counts.entry(self.elim.nullity(&a, &b)).or_insert(0) += 1;
            }
        }
        counts
    }
}

/// How the `q^2` one-step extensions of a spec distribute over nullities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionCensus {
    pub base: ToeplitzSpec,
    pub counts: BTreeMap<usize, u64>,
}

impl ExtensionCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

pub fn extension_census(spec: &ToeplitzSpec) -> ExtensionCensus {
    let mut w = Walker::new(spec.order(), spec.field());
    w.a.copy_from_slice(spec.a());
    w.b.copy_from_slice(spec.b());
    ExtensionCensus {
        base: spec.clone(),
        counts: w.census(),
    }
}

/// A spec that breaks a rule, addressable by its enumeration index (or trial
/// number for sampled scans).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub order: usize,
    pub index: u64,
    pub spec: ToeplitzSpec,
    pub detail: String,
}

fn earliest(x: Option<Counterexample>, y: Option<Counterexample>) -> Option<Counterexample> {
    match (x, y) {
        (Some(x), Some(y)) => Some(if (y.order, y.index) < (x.order, x.index) {
            y
        } else {
            x
        }),
        (x, y) => x.or(y),
    }
}

/// Observed censuses for one rule class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassReport {
    pub class: PairClass,
    /// Specs whose terminal pair fell in this class.
    pub checked: u64,
    /// Each distinct census seen, as `(state, census)`, with its multiplicity.
    pub observed: BTreeMap<(PairState, BTreeMap<usize, u64>), u64>,
    pub counterexample: Option<Counterexample>,
}

impl ClassReport {
    fn empty(class: PairClass) -> Self {
        Self {
            class,
            checked: 0,
            observed: BTreeMap::new(),
            counterexample: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }

    fn merge(mut self, other: Self) -> Self {
        self.checked += other.checked;
        for (k, v) in other.observed {
            *self.observed.entry(k).or_insert(0) += v;
        }
        self.counterexample = earliest(self.counterexample, other.counterexample);
        self
    }
}

/// Outcome of checking extension censuses against the transition rules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleReport {
    pub q: u32,
    /// One entry per [`PairClass`], in [`PairClass::ALL`] order.
    pub classes: Vec<ClassReport>,
    /// A terminal pair violating the step bound, which no rule class covers.
    pub unclassified: Option<Counterexample>,
}

impl RuleReport {
    fn empty(q: u32) -> Self {
        Self {
            q,
            classes: PairClass::ALL.iter().map(|&c| ClassReport::empty(c)).collect(),
            unclassified: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.unclassified.is_none() && self.classes.iter().all(ClassReport::passed)
    }

    pub fn checked(&self) -> u64 {
        self.classes.iter().map(|c| c.checked).sum()
    }

    pub fn class(&self, class: PairClass) -> &ClassReport {
        self.classes
            .iter()
            .find(|c| c.class == class)
            .expect("all classes present")
    }

    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        self.classes
            .iter()
            .filter_map(|c| c.counterexample.as_ref())
            .chain(&self.unclassified)
            .min_by_key(|c| (c.order, c.index))
    }

    fn merge(mut self, other: Self) -> Self {
        self.classes = self
            .classes
            .into_iter()
            .zip(other.classes)
            .map(|(x, y)| x.merge(y))
            .collect();
        self.unclassified = earliest(self.unclassified, other.unclassified);
        self
    }
}

/// Expected census of a state, zero weights dropped.
pub fn expected_census(state: PairState, field: PrimeField) -> BTreeMap<usize, u64> {
    transition_weights(state, field)
        .into_iter()
        .filter(|&(_, w)| w > 0)
        .collect()
}

fn record_census(report: &mut RuleReport, w: &mut Walker, order: usize, index: u64) {
    let (prev, cur) = (w.prev_nullity(), w.nullity());
    let state = match PairState::new(prev, cur) {
        Ok(s) => s,
        Err(e) => {
            let cx = Counterexample {
                order,
                index,
                spec: w.spec(),
                detail: e.to_string(),
            };
            report.unclassified = earliest(report.unclassified.take(), Some(cx));
            return;
        }
    };
    let census = w.census();
    let expected = expected_census(state, w.field);
    let slot = PairClass::ALL.iter().position(|&c| c == state.class()).unwrap();
    let class = &mut report.classes[slot];
    class.checked += 1;
    if census != expected && class.counterexample.is_none() {
        class.counterexample = Some(Counterexample {
            order,
            index,
            spec: w.spec(),
            detail: format!("state {state}: census {census:?}, expected {expected:?}"),
        });
    }
    *class.observed.entry((state, census)).or_insert(0) += 1;
}

/// Checks the census of every spec of order `< n_max` against the rule for
/// its terminal pair. The extensions reach order `n_max`, which is what the
/// budget is measured against.
pub fn verify_transition_rules(n_max: usize, field: PrimeField, opts: &ScanOptions) -> Result<RuleReport> {
    if n_max > 0 {
        spec_count(n_max, field, opts.budget)?;
    }
    let mut report = RuleReport::empty(field.modulus());
    for order in 0..n_max {
        let total = spec_count(order, field, opts.budget)?;
        let part = scan(
            total,
            opts.jobs,
            |range| {
                let mut r = RuleReport::empty(field.modulus());
                let mut w = Walker::new(order, field);
                for i in range {
                    w.load(i);
                    record_census(&mut r, &mut w, order, i);
                }
                r
            },
            RuleReport::merge,
        );
        report = report.merge(part);
    }
    Ok(report)
}

/// Checks `trials` specs of order `n` drawn from a xoshiro256** stream seeded
/// with `seed`. Digits are drawn in enumeration order as `next_u64() % q`.
pub fn sample_census(n: usize, field: PrimeField, trials: u64, seed: u64) -> RuleReport {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    let q = u64::from(field.modulus());
    let mut report = RuleReport::empty(field.modulus());
    let mut w = Walker::new(n, field);
    for trial in 0..trials {
        w.a[0] = (rng.next_u64() % q) as u32;
        for k in 1..=n {
            w.a[k] = (rng.next_u64() % q) as u32;
            w.b[k - 1] = (rng.next_u64() % q) as u32;
        }
        record_census(&mut report, &mut w, n, trial);
    }
    report
}

/// `N(m, nu)` for all `m <= n_max` by computing every nullity directly.
pub fn brute_force_table(n_max: usize, field: PrimeField, opts: &ScanOptions) -> Result<CountTable> {
    spec_count(n_max, field, opts.budget)?;
    let mut rows = Vec::with_capacity(n_max + 1);
    for m in 0..=n_max {
        let total = spec_count(m, field, opts.budget)?;
        let counts = scan(
            total,
            opts.jobs,
            |range| {
                let mut counts = vec![0u64; m + 2];
                let mut w = Walker::new(m, field);
                for i in range {
                    w.load(i);
                    counts[w.nullity()] += 1;
                }
                counts
            },
            |mut x, y| {
                x.iter_mut().zip(y).for_each(|(x, y)| *x += y);
                x
            },
        );
        rows.push(counts.into_iter().map(BigUint::from).collect());
    }
    CountTable::from_rows(field.modulus(), rows)
}

/// Order-`n` rank spectrum by direct counting.
pub fn brute_force_spectrum(
    n: usize,
    field: PrimeField,
    opts: &ScanOptions,
) -> Result<BTreeMap<usize, BigUint>> {
    let table = brute_force_table(n, field, opts)?;
    Ok(table
        .row(n)
        .iter()
        .enumerate()
        .map(|(nu, c)| (n + 1 - nu, c.clone()))
        .collect())
}

/// `theta(n)` and `eta(n)` over GF(2) by classifying terminal pairs.
pub fn brute_force_theta_eta(n: usize, opts: &ScanOptions) -> Result<ThetaEta> {
    let field = PrimeField::gf2();
    let total = spec_count(n, field, opts.budget)?;
    let (theta, eta) = scan(
        total,
        opts.jobs,
        |range| {
            let mut w = Walker::new(n, field);
            let (mut theta, mut eta) = (0u64, 0u64);
            for i in range {
                w.load(i);
                if w.nullity() == 0 {
                    match w.prev_nullity() {
                        0 => theta += 1,
                        1 => eta += 1,
                        _ => {}
                    }
                }
            }
            (theta, eta)
        },
        |x, y| (x.0 + y.0, x.1 + y.1),
    );
    Ok(ThetaEta {
        n,
        theta: theta.into(),
        eta: eta.into(),
    })
}

/// Every nullity string realized by an order-`n` spec.
pub fn realized_strings(n: usize, field: PrimeField, opts: &ScanOptions) -> Result<BTreeSet<NullityString>> {
    let total = spec_count(n, field, opts.budget)?;
    Ok(scan(
        total,
        opts.jobs,
        |range| {
            let mut w = Walker::new(n, field);
            let mut seen = BTreeSet::new();
            for i in range {
                w.load(i);
                seen.insert(NullityString::from(w.nullity_string()));
            }
            seen
        },
        |mut x, y| {
            x.extend(y);
            x
        },
    ))
}

/// The kernel-structure predicates checked by [`verify_structure`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum StructureCheck {
    /// `(0, 1)`: the kernel generator has nonzero ends.
    SingleGeneratorEnds,
    /// Ascent from positive nullity: the kernel is spanned by the two shifts.
    AscentSpan,
    /// Plateau: kernels move by a single shift direction.
    PlateauShift,
    /// Strict descent to positive nullity: kernel vectors have zero ends.
    DescentInteriorZeros,
}

impl StructureCheck {
    pub const ALL: [StructureCheck; 4] = [
        StructureCheck::SingleGeneratorEnds,
        StructureCheck::AscentSpan,
        StructureCheck::PlateauShift,
        StructureCheck::DescentInteriorZeros,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StructureCheck::SingleGeneratorEnds => "single_generator_ends",
            StructureCheck::AscentSpan => "ascent_span",
            StructureCheck::PlateauShift => "plateau_shift",
            StructureCheck::DescentInteriorZeros => "descent_interior_zeros",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateReport {
    pub check: StructureCheck,
    /// Qualifying configurations examined.
    pub checked: u64,
    pub counterexample: Option<Counterexample>,
}

impl PredicateReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub q: u32,
    pub predicates: Vec<PredicateReport>,
}

impl StructureReport {
    fn empty(q: u32) -> Self {
        Self {
            q,
            predicates: StructureCheck::ALL
                .iter()
                .map(|&check| PredicateReport {
                    check,
                    checked: 0,
                    counterexample: None,
                })
                .collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.predicates.iter().all(PredicateReport::passed)
    }

    pub fn predicate(&self, check: StructureCheck) -> &PredicateReport {
        self.predicates
            .iter()
            .find(|p| p.check == check)
            .expect("all checks present")
    }

    pub fn first_counterexample(&self) -> Option<&Counterexample> {
        self.predicates
            .iter()
            .filter_map(|p| p.counterexample.as_ref())
            .min_by_key(|c| (c.order, c.index))
    }

    fn merge(mut self, other: Self) -> Self {
        for (x, y) in self.predicates.iter_mut().zip(other.predicates) {
            x.checked += y.checked;
            x.counterexample = earliest(x.counterexample.take(), y.counterexample);
        }
        self
    }
}

/// Which predicates apply at the last position of `s`, per the terminal
/// pair. For a plateau the run starts at the returned index.
fn applicable(s: &[usize]) -> Option<(StructureCheck, usize)> {
    let n = s.len() - 1;
    if n == 0 {
        return None;
    }
    let (p, c) = (s[n - 1], s[n]);
    if (p, c) == (0, 1) {
        Some((StructureCheck::SingleGeneratorEnds, n - 1))
    } else if p > 0 && c == p + 1 {
        Some((StructureCheck::AscentSpan, n - 1))
    } else if p > 0 && c == p {
        let mut j = n - 1;
        while j > 0 && s[j - 1] == c {
            j -= 1;
        }
        Some((StructureCheck::PlateauShift, j))
    } else if p > c && c > 0 {
        Some((StructureCheck::DescentInteriorZeros, n - 1))
    } else {
        None
    }
}

fn run_check(check: StructureCheck, spec: &ToeplitzSpec, from: usize) -> Result<bool> {
    let n = spec.order();
    match check {
        StructureCheck::SingleGeneratorEnds => check_single_generator_ends(&spec.prefix(from)?, spec),
        StructureCheck::AscentSpan => check_ascent_span(&spec.prefix(from)?, spec),
        StructureCheck::PlateauShift => {
            let run = (from..=n).map(|m| spec.prefix(m)).collect::<Result<Vec<_>>>()?;
            check_plateau_shift(&run)
        }
        StructureCheck::DescentInteriorZeros => check_descent_interior_zeros(spec),
    }
}

/// Runs the kernel-structure predicates on every spec of order `<= n_max`,
/// each at its terminal position (earlier positions are covered by the
/// shorter specs). A plateau is checked over its maximal run ending there.
pub fn verify_structure(n_max: usize, field: PrimeField, opts: &ScanOptions) -> Result<StructureReport> {
    spec_count(n_max, field, opts.budget)?;
    let mut report = StructureReport::empty(field.modulus());
    for order in 1..=n_max {
        let total = spec_count(order, field, opts.budget)?;
        let part = scan(
            total,
            opts.jobs,
            |range| {
                let mut r = StructureReport::empty(field.modulus());
                let mut w = Walker::new(order, field);
                for i in range {
                    w.load(i);
                    let s = w.nullity_string();
                    let Some((check, from)) = applicable(&s) else {
                        continue;
                    };
                    let slot = StructureCheck::ALL.iter().position(|&c| c == check).unwrap();
                    let pred = &mut r.predicates[slot];
                    pred.checked += 1;
                    if pred.counterexample.is_some() {
                        continue;
                    }
                    let spec = w.spec();
                    let detail = match run_check(check, &spec, from) {
                        Ok(true) => continue,
                        Ok(false) => format!("nullity string {}", NullityString::from(s)),
                        Err(e) => e.to_string(),
                    };
                    pred.counterexample = Some(Counterexample {
                        order,
                        index: i,
                        spec,
                        detail,
                    });
                }
                r
            },
            StructureReport::merge,
        );
        report = report.merge(part);
    }
    Ok(report)
}

/// `q^e` as an exact integer.
pub fn power(q: u32, e: usize) -> BigUint {
    let mut v = BigUint::one();
    for _ in 0..e {
        v *= q;
    }
    v
}
