use std::collections::BTreeMap;

use num_bigint::BigUint;
use serde_json::{json, Map, Value};
use toepnull::counting::{
    closed_eta, closed_theta, count_string, count_table, invertible_formula, nullity1_structured_closed,
    nullity1_structured_count, nullity_count_closed, positive_excursion_closed, positive_excursion_count,
    rank_spectrum, theta_eta_dp,
};
use toepnull::enumeration::{
    brute_force_spectrum, brute_force_table, expected_census, sample_census, verify_structure,
    verify_transition_rules, Counterexample, RuleReport,
};
use toepnull::{Error, NullityString, PairState, PrimeField, ScanOptions};

use crate::args::{Common, CountStringArgs, VerifyArgs};
use crate::report::Report;

/// Failures that end a command before it produces a report.
#[derive(Debug)]
pub enum CliError {
    Budget(String),
    Invalid(String),
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Budget(_) => 3,
            CliError::Invalid(_) => 4,
            CliError::Unsupported(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Budget(m) | CliError::Invalid(m) | CliError::Unsupported(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            Error::ModulusTooLarge { .. } => CliError::Unsupported(e.to_string()),
            _ => CliError::Invalid(e.to_string()),
        }
    }
}

type CmdResult = Result<Report, CliError>;

fn field(c: &Common) -> Result<PrimeField, CliError> {
    Ok(PrimeField::new(c.q)?)
}

fn scan_options(c: &Common) -> ScanOptions {
    ScanOptions::default().with_jobs(c.jobs()).with_budget(c.budget)
}

fn params(c: &Common) -> Map<String, Value> {
    let mut p = Map::new();
    p.insert("n".into(), json!(c.n));
    p.insert("q".into(), json!(c.q));
    if let Some(k) = c.nullity {
        p.insert("nullity".into(), json!(k));
    }
    p
}

fn counts_json<K: ToString>(m: &BTreeMap<K, BigUint>) -> Value {
    Value::Object(
        m.iter()
            .map(|(k, v)| (k.to_string(), json!(v.to_string())))
            .collect(),
    )
}

fn describe(cx: &Counterexample) -> String {
    format!(
        "order {} index {}: {} ({})",
        cx.order, cx.index, cx.spec, cx.detail
    )
}

pub fn table(c: &Common) -> CmdResult {
    let f = field(c)?;
    let mut p = params(c);
    p.insert("check_brute_force".into(), json!(c.check_brute_force));
    let mut report = Report::new("table", Value::Object(p));
    let t = count_table(c.n, f);
    let keep = |nu: usize| c.nullity.is_none_or(|k| k == nu);

    let mut rows = Vec::new();
    report.text.push(format!("N(m, nu) over {f}, m = 0..{}", c.n));
    report.csv_header = vec!["m", "nu", "count"];
    for m in 0..=c.n {
        let row: BTreeMap<usize, BigUint> = t
            .row(m)
            .iter()
            .enumerate()
            .filter(|&(nu, _)| keep(nu))
            .map(|(nu, v)| (nu, v.clone()))
            .collect();
        let cells: Vec<String> = row.iter().map(|(nu, v)| format!("N({m},{nu})={v}")).collect();
        report.text.push(format!("m={m}: {}", cells.join(" ")));
        for (nu, v) in &row {
            report
                .csv_rows
                .push(vec![m.to_string(), nu.to_string(), v.to_string()]);
        }
        rows.push(counts_json(&row));
    }
    report.results = json!({ "rows": rows });

    if c.check_brute_force {
        let bf = brute_force_table(c.n, f, &scan_options(c))?;
        let mismatch = (0..=c.n).find(|&m| bf.row(m) != t.row(m));
        let detail = match mismatch {
            None => format!("all {} rows agree", c.n + 1),
            Some(m) => format!("row {m}: automaton {:?}, enumeration {:?}", t.row(m), bf.row(m)),
        };
        report.check("brute_force", mismatch.is_none(), detail);
    }
    Ok(report)
}

pub fn spectrum(c: &Common) -> CmdResult {
    let f = field(c)?;
    let mut p = params(c);
    p.insert("check_brute_force".into(), json!(c.check_brute_force));
    let mut report = Report::new("spectrum", Value::Object(p));
    let n = c.n;
    let mut spec = rank_spectrum(n, f);
    if let Some(k) = c.nullity {
        spec.retain(|&r, _| n + 1 - r == k);
    }

    report.text.push(format!("rank spectrum of order {n} over {f}"));
    report.csv_header = vec!["rank", "nu", "count"];
    for (r, v) in spec.iter().rev() {
        report.text.push(format!("rank {r}: {v}"));
        report
            .csv_rows
            .push(vec![r.to_string(), (n + 1 - r).to_string(), v.to_string()]);
    }
    let total: BigUint = spec.values().sum();
    report.text.push(format!("total: {total}"));
    report.results = json!({ "spectrum": counts_json(&spec), "total": total.to_string() });

    if f.modulus() == 2 {
        let bad = spec
            .iter()
            .find(|(&r, v)| nullity_count_closed(n, n + 1 - r).ok().as_ref() != Some(*v));
        let detail = match bad {
            None => "every rank matches its GF(2) closed form".to_string(),
            Some((r, v)) => format!("rank {r}: automaton {v}"),
        };
        report.check("closed_form", bad.is_none(), detail);
    }
    if c.check_brute_force {
        let mut bf = brute_force_spectrum(n, f, &scan_options(c))?;
        if let Some(k) = c.nullity {
            bf.retain(|&r, _| n + 1 - r == k);
        }
        let ok = bf == spec;
        let detail = if ok {
            "enumeration agrees".to_string()
        } else {
            format!("enumeration gives {bf:?}")
        };
        report.check("brute_force", ok, detail);
    }
    Ok(report)
}

fn rule_results(r: &RuleReport, f: PrimeField, report: &mut Report, label: &str) -> Vec<Value> {
    let mut out = Vec::new();
    for class in &r.classes {
        let censuses: Vec<Value> = class
            .observed
            .iter()
            .map(|((state, census), times)| {
                let counts: BTreeMap<usize, BigUint> = census.iter().map(|(&k, &v)| (k, v.into())).collect();
                let expected: BTreeMap<usize, BigUint> = expected_census(*state, f)
                    .into_iter()
                    .map(|(k, v)| (k, v.into()))
                    .collect();
                json!({
                    "state": state.to_string(),
                    "census": counts_json(&counts),
                    "expected": counts_json(&expected),
                    "specs": times,
                })
            })
            .collect();
        let rules: Vec<String> = class
            .class
            .rules()
            .iter()
            .map(|r| format!("{:+}:{}", r.offset, r.weight))
            .collect();
        report.text.push(format!(
            "{label} {}: {} checked, rules {}, {}",
            class.class,
            class.checked,
            rules.join(" "),
            if class.passed() { "pass" } else { "FAIL" }
        ));
        report.csv_rows.push(vec![
            label.to_string(),
            class.class.to_string(),
            class.checked.to_string(),
            class.passed().to_string(),
        ]);
        let cx = class.counterexample.as_ref().map(describe);
        report.check(
            format!("{label} {}", class.class),
            class.passed(),
            cx.clone().unwrap_or_else(|| format!("{} checked", class.checked)),
        );
        out.push(json!({
            "class": class.class.to_string(),
            "checked": class.checked,
            "passed": class.passed(),
            "censuses": censuses,
            "counterexample": cx,
        }));
    }
    if let Some(cx) = &r.unclassified {
        report.check(format!("{label} step bound"), false, describe(cx));
    }
    out
}

pub fn verify(v: &VerifyArgs) -> CmdResult {
    let c = &v.common;
    let f = field(c)?;
    let opts = scan_options(c);
    let mut p = params(c);
    p.insert("samples".into(), json!(v.samples));
    if v.samples > 0 {
        p.insert("sample_order".into(), json!(v.sample_order));
        p.insert("seed".into(), json!(c.seed));
    }
    let mut report = Report::new("verify", Value::Object(p));
    report.csv_header = vec!["scope", "check", "checked", "passed"];

    let rules = verify_transition_rules(c.n, f, &opts)?;
    let structure = verify_structure(c.n, f, &opts)?;
    report.text.push(format!(
        "transition rules over {f}: every spec of order < {}",
        c.n
    ));
    let rule_json = rule_results(&rules, f, &mut report, "rules");

    report.text.push(format!(
        "kernel structure over {f}: every spec of order <= {}",
        c.n
    ));
    let mut pred_json = Vec::new();
    for pr in &structure.predicates {
        let name = pr.check.name();
        report.text.push(format!(
            "structure {name}: {} checked, {}",
            pr.checked,
            if pr.passed() { "pass" } else { "FAIL" }
        ));
        report.csv_rows.push(vec![
            "structure".into(),
            name.into(),
            pr.checked.to_string(),
            pr.passed().to_string(),
        ]);
        let cx = pr.counterexample.as_ref().map(describe);
        report.check(
            format!("structure {name}"),
            pr.passed(),
            cx.clone().unwrap_or_else(|| format!("{} checked", pr.checked)),
        );
        pred_json.push(json!({
            "predicate": name,
            "checked": pr.checked,
            "passed": pr.passed(),
            "counterexample": cx,
        }));
    }

    let mut sampled = Value::Null;
    if v.samples > 0 {
        let s = sample_census(v.sample_order, f, v.samples, c.seed);
        report.text.push(format!(
            "sampled censuses: {} specs of order {} from seed {}",
            v.samples, v.sample_order, c.seed
        ));
        sampled = json!(rule_results(&s, f, &mut report, "sampled"));
    }

    if let Some(cx) = rules.first_counterexample().or(structure.first_counterexample()) {
        report
            .text
            .push(format!("first counterexample: {}", describe(cx)));
    }
    report.results = json!({
        "transition_rules": rule_json,
        "structure": pred_json,
        "sampled": sampled,
    });
    Ok(report)
}

fn parse_start(s: &str) -> Result<PairState, CliError> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [p, c] = parts.as_slice() else {
        return Err(CliError::Invalid(format!(
            "--start expects \"prev,cur\", got {s:?}"
        )));
    };
    let num = |x: &str| {
        x.parse::<usize>()
            .map_err(|_| CliError::Invalid(format!("--start: {x:?} is not a nullity")))
    };
    Ok(PairState::new(num(p)?, num(c)?)?)
}

pub fn count_string_cmd(a: &CountStringArgs) -> CmdResult {
    let c = &a.common;
    let f = field(c)?;
    let start = parse_start(&a.start)?;
    let string: NullityString = a.string.parse()?;
    let mut report = Report::new(
        "count-string",
        json!({ "q": c.q, "start": start.to_string(), "string": string.to_string() }),
    );
    let count = count_string(start, &string, f)?;
    report
        .text
        .push(format!("C({string}) from {start} over {f} = {count}"));
    report.csv_header = vec!["start", "string", "count"];
    report
        .csv_rows
        .push(vec![start.to_string(), string.to_string(), count.to_string()]);
    report.results = json!({ "count": count.to_string() });
    Ok(report)
}

pub fn closed_forms(c: &Common) -> CmdResult {
    if c.q != 2 {
        return Err(CliError::Unsupported("closed forms are GF(2)-specific".into()));
    }
    let f = PrimeField::gf2();
    let n = c.n;
    let mut report = Report::new("closed-forms", Value::Object(params(c)));
    report.csv_header = vec!["quantity", "m", "closed", "automaton", "match"];
    let table = count_table(n, f);

    let mut rows = Vec::new();
    let mut failures: BTreeMap<&'static str, Vec<usize>> = BTreeMap::new();
    let mut record = |report: &mut Report,
                      rows: &mut Vec<Value>,
                      name: &'static str,
                      m: usize,
                      closed: BigUint,
                      dp: BigUint| {
        let ok = closed == dp;
        if !ok {
            failures.entry(name).or_default().push(m);
        }
        report.text.push(format!(
            "{name}({m}) = {closed} (automaton {dp}) {}",
            if ok { "ok" } else { "MISMATCH" }
        ));
        report.csv_rows.push(vec![
            name.into(),
            m.to_string(),
            closed.to_string(),
            dp.to_string(),
            ok.to_string(),
        ]);
        rows.push(json!({
            "quantity": name,
            "m": m,
            "closed": closed.to_string(),
            "automaton": dp.to_string(),
            "match": ok,
        }));
    };

    for m in 1..=n {
        let te = theta_eta_dp(m, f);
        record(&mut report, &mut rows, "theta", m, closed_theta(m)?, te.theta);
        record(&mut report, &mut rows, "eta", m, closed_eta(m)?, te.eta);
        if m >= 2 {
            record(
                &mut report,
                &mut rows,
                "invertible",
                m,
                invertible_formula(m)?,
                table.get(m, 0),
            );
        }
        record(
            &mut report,
            &mut rows,
            "nullity1_structured",
            m,
            nullity1_structured_closed(m)?,
            nullity1_structured_count(m)?,
        );
        record(
            &mut report,
            &mut rows,
            "positive_excursions",
            m,
            positive_excursion_closed(m)?,
            positive_excursion_count(m, f)?,
        );
    }
    for m in 0..=n {
        let keep = |k: usize| c.nullity.is_none_or(|want| want == k);
        for k in (0..=m + 1).filter(|&k| keep(k)) {
            let closed = nullity_count_closed(m, k)?;
            let dp = table.get(m, k);
            let ok = closed == dp;
            if !ok {
                failures.entry("nullity_count").or_default().push(m);
            }
            report.csv_rows.push(vec![
                format!("N(m,{k})"),
                m.to_string(),
                closed.to_string(),
                dp.to_string(),
                ok.to_string(),
            ]);
            rows.push(json!({
                "quantity": format!("N(m,{k})"),
                "m": m,
                "closed": closed.to_string(),
                "automaton": dp.to_string(),
                "match": ok,
            }));
        }
    }

    for name in [
        "theta",
        "eta",
        "invertible",
        "nullity1_structured",
        "positive_excursions",
        "nullity_count",
    ] {
        match failures.get(name) {
            None if name == "invertible" && n < 2 => report.check(name, true, "stated for m >= 2 only"),
            None => report.check(name, true, format!("holds for m <= {n}")),
            Some(ms) => report.check(name, false, format!("fails at m = {ms:?}")),
        }
    }
    report.results = json!({ "rows": rows });
    Ok(report)
}
