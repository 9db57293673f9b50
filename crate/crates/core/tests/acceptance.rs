//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use toepnull::counting::{
    closed_eta, closed_theta, count_table, invertible_formula, nullity1_structured_closed,
    nullity1_structured_count, positive_excursion_closed, positive_excursion_count, positive_string_counts,
    rank_spectrum, theta_eta_dp,
};
use toepnull::enumeration::{
    brute_force_spectrum, brute_force_table, brute_force_theta_eta, realized_strings, verify_structure,
    verify_transition_rules, ScanOptions,
};
use toepnull::kernel_structure::{is_block_concatenation_prefix, validate_nullity_string};
use toepnull::{NullityString, PairClass, PrimeField};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn gf(q: u32) -> PrimeField {
    PrimeField::new(q).unwrap()
}

fn opts() -> ScanOptions {
    let jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    ScanOptions::default().with_jobs(jobs)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn dp_matches_oracle() -> Outcome {
    for (q, n) in [(2, 10), (3, 6), (5, 4)] {
        let dp = count_table(n, gf(q));
        let bf = brute_force_table(n, gf(q), &opts()).map_err(|e| e.to_string())?;
        for m in 0..=n {
            ensure(dp.row(m) == bf.row(m), || {
                format!("q={q} m={m}: dp {:?} vs brute force {:?}", dp.row(m), bf.row(m))
            })?;
        }
    }
    Ok("tables equal at q=2 n<=10, q=3 n<=6, q=5 n<=4".into())
}

fn published_values() -> Outcome {
    let f = gf(2);
    let dp = count_table(3, f);
    let bf = brute_force_table(3, f, &opts()).map_err(|e| e.to_string())?;
    for (m, nu, want) in [(1, 1, 3), (2, 1, 12), (2, 0, 16), (3, 1, 48)] {
        ensure(dp.get(m, nu) == big(want) && bf.get(m, nu) == big(want), || {
            format!(
                "N({m},{nu}): dp {} brute force {}, want {want}",
                dp.get(m, nu),
                bf.get(m, nu)
            )
        })?;
    }
    for (n, theta, eta) in [(1, 3, 1), (2, 11, 5)] {
        let b = brute_force_theta_eta(n, &opts()).map_err(|e| e.to_string())?;
        let d = theta_eta_dp(n, f);
        let c = (closed_theta(n).unwrap(), closed_eta(n).unwrap());
        for (src, got) in [
            ("brute force", (b.theta, b.eta)),
            ("dp", (d.theta, d.eta)),
            ("closed form", c),
        ] {
            ensure(got == (big(theta), big(eta)), || {
                format!("theta/eta({n}) from {src}: {got:?}, want ({theta}, {eta})")
            })?;
        }
    }
    let want: BTreeMap<usize, BigUint> = [(3, big(16)), (2, big(12)), (1, big(3)), (0, big(1))].into();
    let bf_spec = brute_force_spectrum(2, f, &opts()).map_err(|e| e.to_string())?;
    ensure(rank_spectrum(2, f) == want && bf_spec == want, || {
        format!("spectrum at n=2: {:?}", rank_spectrum(2, f))
    })?;
    Ok("N(1,1)=3 N(2,1)=12 N(2,0)=16 N(3,1)=48, theta/eta(1)=(3,1), theta/eta(2)=(11,5), spectrum {16,12,3,1}".into())
}

fn closed_form_battery() -> Outcome {
    let f = gf(2);
    let t = count_table(40, f);
    let pow2 = |e: usize| BigUint::from(1u32) << e;
    for n in 0..=40 {
        ensure(t.get(n, 0) == pow2(2 * n), || {
            format!("N({n},0) = {}", t.get(n, 0))
        })?;
        if n >= 1 {
            ensure(t.get(n, 1) == pow2(2 * n - 2) * 3u32, || {
                format!("N({n},1) = {}", t.get(n, 1))
            })?;
        }
    }
    for n in 2..=20 {
        let v = invertible_formula(n).unwrap();
        ensure(v == pow2(2 * n), || format!("invertible_formula({n}) = {v}"))?;
    }
    for n in 1..=20 {
        let d = theta_eta_dp(n, f);
        ensure(
            d.theta == closed_theta(n).unwrap() && d.eta == closed_eta(n).unwrap(),
            || format!("theta/eta({n}) from dp = ({}, {})", d.theta, d.eta),
        )?;
        let s = nullity1_structured_count(n).unwrap();
        ensure(s == nullity1_structured_closed(n).unwrap(), || {
            format!("structured nullity-1 count at {n} = {s}")
        })?;
        let e = positive_excursion_count(n, f).unwrap();
        ensure(e == positive_excursion_closed(n).unwrap(), || {
            format!("excursions at {n} = {e}")
        })?;
    }
    let t = count_table(27, f);
    for n in 1..=20 {
        for k in 1..=8 {
            ensure(t.get(n + k - 1, k) == t.get(n, 1), || {
                format!(
                    "T({},{k}) = {} but T({n},1) = {}",
                    n + k - 1,
                    t.get(n + k - 1, k),
                    t.get(n, 1)
                )
            })?;
        }
    }
    Ok(
        "N(n,0), N(n,1) to n=40; invertible sum, theta/eta, T-shift, structured and excursion counts to n=20"
            .into(),
    )
}

fn transition_rules() -> Outcome {
    let mut checked = 0;
    for (q, n) in [(2, 8), (3, 5), (5, 3)] {
        let r = verify_transition_rules(n, gf(q), &opts()).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("q={q}: {:?}", r.first_counterexample()))?;
        checked += r.checked();
        if q == 3 {
            let zz = r.class(PairClass::ZeroZero);
            let want = BTreeMap::from([(0, 7), (1, 2)]);
            ensure(zz.checked > 0, || "no (0,0) states at q=3".into())?;
            for (state, census) in zz.observed.keys() {
                ensure(*census == want, || format!("q=3 {state}: census {census:?}"))?;
            }
        }
    }
    Ok(format!("{checked} censuses match; (0,0) at q=3 is {{0:7, 1:2}}"))
}

fn structure_predicates() -> Outcome {
    let mut summary = Vec::new();
    for (q, n) in [(2, 8), (3, 5)] {
        let r = verify_structure(n, gf(q), &opts()).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("q={q}: {:?}", r.first_counterexample()))?;
        for p in &r.predicates {
            ensure(p.checked > 0, || {
                format!("q={q}: {} never applied", p.check.name())
            })?;
        }
        let counts: Vec<String> = r
            .predicates
            .iter()
            .map(|p| format!("{}={}", p.check.name(), p.checked))
            .collect();
        summary.push(format!("q={q}: {}", counts.join(" ")));
    }
    Ok(summary.join("; "))
}

fn step_bounded_strings(max_len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    let mut frontier: Vec<Vec<usize>> = (0..=2).map(|v| vec![v]).collect();
    for _ in 1..=max_len {
        let mut next = Vec::new();
        for s in &frontier {
            out.push(s.clone());
            if s.len() == max_len {
                continue;
            }
            let cur = *s.last().unwrap();
            for v in [cur.wrapping_sub(1), cur, cur + 1] {
                if v != usize::MAX {
                    let mut t = s.clone();
                    t.push(v);
                    next.push(t);
                }
            }
        }
        frontier = next;
    }
    out
}

fn grammar_equivalence() -> Outcome {
    let candidates = step_bounded_strings(12);
    let mut valid = BTreeSet::new();
    for s in &candidates {
        let ns = NullityString::from(s.clone());
        let (x, y) = (validate_nullity_string(&ns), is_block_concatenation_prefix(&ns));
        ensure(x == y, || format!("validators disagree on {ns}: {x} vs {y}"))?;
        if x && (1..=9).contains(&s.len()) {
            valid.insert(ns);
        }
    }
    let full = realized_strings(8, gf(2), &opts()).map_err(|e| e.to_string())?;
    let realized: BTreeSet<NullityString> = full
        .iter()
        .flat_map(|s| (1..=s.len()).map(move |l| NullityString::from(s.values()[..l].to_vec())))
        .collect();
    ensure(realized == valid, || {
        let missing: Vec<_> = valid
            .difference(&realized)
            .take(5)
            .map(|s| s.to_string())
            .collect();
        let extra: Vec<_> = realized
            .difference(&valid)
            .take(5)
            .map(|s| s.to_string())
            .collect();
        format!("unrealized valid strings {missing:?}, realized invalid strings {extra:?}")
    })?;
    Ok(format!(
        "{} step-bounded strings agree; {} valid strings of length <= 9 all realized at q=2",
        candidates.len(),
        valid.len()
    ))
}

fn p_identity() -> Outcome {
    let p = |m, k| positive_string_counts(m, k).unwrap();
    for k in 1..=6 {
        for m in 0..=12 {
            ensure(p(m, 1) == p(m + k - 1, k), || {
                format!(
                    "P({m},1) = {} vs P({},{k}) = {}",
                    p(m, 1),
                    m + k - 1,
                    p(m + k - 1, k)
                )
            })?;
        }
        ensure(p(k - 1, k) == 1, || format!("P({},{k}) = {}", k - 1, p(k - 1, k)))?;
        for m in 0..k.saturating_sub(1) {
            ensure(p(m, k) == 0, || format!("P({m},{k}) = {}", p(m, k)))?;
        }
    }
    Ok("P(m,1) = P(m+k-1,k) for m <= 12, k <= 6; boundary values hold".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 7] = [
        ("dp equals exhaustive oracle", dp_matches_oracle),
        ("published values", published_values),
        ("GF(2) closed forms", closed_form_battery),
        ("transition rules", transition_rules),
        ("kernel structure predicates", structure_predicates),
        ("grammar equivalence and realizability", grammar_equivalence),
        ("positive string identity", p_identity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS {} {name} ({secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
