use std::collections::BTreeMap;

use num_rational::BigRational;
use serde_json::{json, Value};

use super::output::Report;
use super::{CacheAction, CacheArgs, ChannelArgs, Command, Config, DimensionArgs, IntegrateArgs, TableArgs, VerifyArgs, WgArgs};
use crate::error::{Error, Result};
use crate::exactmath::RationalFunction;
use crate::haar_integrate::{integrate_with, parse_monomial, Dimension};
use crate::montecarlo::{channel_demo, degree_queries, moment_report, trace_clt_demo, RngSpec};
use crate::symmetric::Permutation;
use crate::weingarten::{
    free_sign_survey, parse_rational, series_check, three_path_check, uniform_bound_check,
    wg_unitary_character_table, wg_unitary_recursion_check, GroupKind, Mode, TableCache, TableKey,
    WeingartenTable, THREE_PATH_SERIES_ORDER,
};

pub(crate) fn dispatch(command: &Command, config: &Config) -> Result<Report> {
    match command {
        Command::Wg(a) => wg(a, config),
        Command::Integrate(a) => integrate(a, config),
        Command::Verify(a) => verify(a, config),
        Command::Channel(a) => channel(a),
        Command::Table(a) => table(a, config),
        Command::Cache(a) => cache(a, config),
    }
}

fn mode_of(dim: &DimensionArgs) -> Result<Mode> {
    match &dim.n {
        Some(n) => parse_rational(n).map(Mode::Numeric),
        None => Ok(Mode::Symbolic),
    }
}

fn integer_n(dim: &DimensionArgs) -> Result<Option<i64>> {
    match &dim.n {
        None => Ok(None),
        Some(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Parse(format!("--n expects an integer here, got {s:?}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Method {
    Gram,
    Character,
    Series(usize),
}

impl Method {
    fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "gram" => Ok(Method::Gram),
            "character" | "char" => Ok(Method::Character),
            other => match other.strip_prefix("series:") {
                Some(order) => order
                    .parse()
                    .map(Method::Series)
                    .map_err(|_| Error::Parse(format!("bad series order in {other:?}"))),
                None => Err(Error::Parse(format!("unknown method {other:?}"))),
            },
        }
    }

    fn name(&self) -> String {
        match self {
            Method::Gram => "gram".into(),
            Method::Character => "character".into(),
            Method::Series(l) => format!("series:{l}"),
        }
    }
}

fn wg(a: &WgArgs, config: &Config) -> Result<Report> {
    let group: GroupKind = a.group.parse()?;
    let mode = mode_of(&a.dim)?;
    let mut methods = a.methods.iter().map(|m| Method::parse(m)).collect::<Result<Vec<_>>>()?;
    if methods.is_empty() {
        methods.push(Method::Gram);
    }
    if group != GroupKind::Unitary && methods.iter().any(|m| *m != Method::Gram) {
        return Err(Error::Unsupported(format!(
            "only the gram method is available for the {group} group"
        )));
    }
    let base = config.cache().get(group, a.k, &mode)?;
    let keys: Vec<TableKey> = match (&a.key, a.all_classes) {
        (_, true) => base.entries().map(|(k, _)| k.clone()).collect(),
        (Some(text), false) => vec![TableKey::resolve(group, a.k, text)?],
        (None, false) => {
            return Err(Error::InvalidArgument(
                "give a permutation, class or pairing key, or --all-classes".into(),
            ))
        }
    };
    let character = if methods.contains(&Method::Character) {
        Some(wg_unitary_character_table(a.k, &mode)?)
    } else {
        None
    };

    let mut rows = Vec::new();
    let mut entries_json = Vec::new();
    let mut passed = true;
    let mut last_value = String::new();
    for key in &keys {
        let reference = lookup(&base, key)?;
        let mut values = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for m in &methods {
            let (value, diff, ok) = match m {
                Method::Gram => (reference.to_string(), "0".to_string(), true),
                Method::Character => {
                    let v = lookup(character.as_ref().expect("built above"), key)?;
                    let d = v.sub(&reference);
                    let ok = d.is_zero();
                    (v.to_string(), d.to_string(), ok)
                }
                Method::Series(order) => {
                    let Mode::Numeric(n0) = &mode else {
                        return Err(Error::InvalidArgument("the series method needs --n".into()));
                    };
                    let TableKey::Class(class) = key else {
                        unreachable!("unitary keys are classes")
                    };
                    let sigma = Permutation::class_representative(class);
                    let exact = reference
                        .as_constant()
                        .ok_or_else(|| Error::InvalidArgument("numeric table entry is not constant".into()))?;
                    let check = series_check(&sigma, *order, &exact, n0)?;
                    (check.truncated.clone(), check.remainder.clone(), check.within_bounds)
                }
            };
            passed &= ok;
            if methods.len() > 1 || a.all_classes {
                let mut row = vec![key.to_string()];
                if methods.len() > 1 {
                    row.push(m.name());
                }
                row.push(value.clone());
                if methods.len() > 1 {
                    row.push(diff.clone());
                }
                rows.push(row);
            }
            last_value = value.clone();
            values.insert(m.name(), value);
            diffs.insert(m.name(), diff);
        }
        entries_json.push(json!({"key": key.to_string(), "values": values, "diffs": diffs}));
    }
    let json = json!({
        "group": group.name(),
        "k": a.k,
        "mode": mode.to_string(),
        "entries": entries_json,
    });
    let single = keys.len() == 1 && methods.len() == 1 && !a.all_classes;
    let report = if single {
        Report::value(last_value.clone(), vec!["key", "value"], vec![keys[0].to_string(), last_value], json)
    } else if methods.len() > 1 {
        Report::table(vec!["key", "method", "value", "diff"], rows, json).with_verdict(passed)
    } else {
        Report::table(vec!["key", "value"], rows, json)
    };
    Ok(report)
}

fn lookup(table: &WeingartenTable, key: &TableKey) -> Result<RationalFunction> {
    table
        .get(key)
        .cloned()
        .ok_or_else(|| Error::InvalidArgument(format!("{key} is not an entry of the degree-{} table", table.k())))
}

fn integrate(a: &IntegrateArgs, config: &Config) -> Result<Report> {
    let group: GroupKind = a.group.parse()?;
    let n = match integer_n(&a.dim)? {
        Some(n) => Dimension::Integer(n),
        None => Dimension::Symbolic,
    };
    let q = parse_monomial(&a.monomial)?.with_group(group).with_n(n);
    let value = integrate_with(&config.cache(), &q)?.to_string();
    let n_text = match n {
        Dimension::Integer(n) => n.to_string(),
        Dimension::Symbolic => "n".into(),
    };
    let json = json!({"query": q.monomial(), "group": group.name(), "n": n_text, "value": value});
    Ok(Report::value(
        value.clone(),
        vec!["query", "group", "n", "value"],
        vec![q.monomial(), group.name().to_string(), n_text, value],
        json,
    ))
}

fn require_seed(seed: Option<u64>) -> Result<u64> {
    seed.ok_or_else(|| Error::InvalidArgument("Monte-Carlo suites require --seed".into()))
}

fn verify(a: &VerifyArgs, config: &Config) -> Result<Report> {
    let suite = a.suite.trim();
    let (name, samples) = match suite.split_once(':') {
        Some((name, count)) => {
            let count: usize = count
                .parse()
                .map_err(|_| Error::Parse(format!("bad sample count in {suite:?}")))?;
            (name, Some(count))
        }
        None => (suite, None),
    };
    match (name, samples) {
        ("recursion", None) => {
            let r = wg_unitary_recursion_check(a.k.unwrap_or(4), &mode_of(&a.dim)?)?;
            let rows = r.violations.iter().map(|(s, d)| vec![s.clone(), d.clone()]).collect();
            let mut report = Report::table(vec!["sigma", "defect"], rows, serde_json::to_value(&r).map_err(json_err)?);
            report.rows.insert(0, vec![format!("k={} mode={} checked={}", r.k, r.mode, r.checked)]);
            Ok(report.with_verdict(r.passed()))
        }
        ("bounds", None) => {
            let n = integer_n(&a.dim)?.ok_or_else(|| Error::InvalidArgument("bounds needs --n".into()))?;
            let r = uniform_bound_check(a.k.unwrap_or(3), n)?;
            let rows = r
                .rows
                .iter()
                .map(|row| {
                    vec![
                        row.class.to_string(),
                        row.ratio.clone(),
                        row.lower.clone(),
                        flag(row.lower_ok),
                        if row.upper_applicable { flag(row.upper_ok) } else { "n/a".into() },
                    ]
                })
                .collect();
            let report = Report::table(
                vec!["class", "ratio", "lower", "lower_ok", "upper_ok"],
                rows,
                serde_json::to_value(&r).map_err(json_err)?,
            );
            Ok(report.with_verdict(r.passed()))
        }
        ("three-path", None) => {
            let order = a.order.unwrap_or(THREE_PATH_SERIES_ORDER);
            let r = three_path_check(a.k.unwrap_or(4), &mode_of(&a.dim)?, order)?;
            let mut rows: Vec<Vec<String>> = r
                .mismatches
                .iter()
                .map(|(c, g, ch)| vec![c.clone(), format!("gram={g}"), format!("character={ch}")])
                .collect();
            rows.extend(r.series.iter().map(|s| {
                vec![
                    s.sigma.clone(),
                    format!("n0={}", s.n0),
                    format!("order={}", s.order),
                    format!("remainder={}", s.remainder),
                    flag(s.within_bounds),
                ]
            }));
            rows.insert(0, vec![format!("k={} mode={} classes={} gram=character:{}", r.k, r.mode, r.classes, flag(r.mismatches.is_empty()))]);
            let report = Report::table(vec!["item", "detail"], rows, serde_json::to_value(&r).map_err(json_err)?);
            Ok(report.with_verdict(r.passed()))
        }
        ("free-survey", None) => {
            let points: Vec<BigRational> = match &a.dim.n {
                Some(list) => list.split(',').map(parse_rational).collect::<Result<_>>()?,
                None => ["2", "5/2", "3", "10"].iter().map(|s| parse_rational(s)).collect::<Result<_>>()?,
            };
            let r = free_sign_survey(a.k.unwrap_or(6), &points)?;
            let mut rows = vec![vec![format!(
                "k={} points={} entries={}",
                r.k,
                r.samples.join(","),
                r.entries
            )]];
            rows.extend(r.zeros.iter().map(|z| vec![format!("zero {z}")]));
            rows.extend(r.monotonicity_violations.iter().map(|z| vec![format!("increase {z}")]));
            rows.extend(r.sign_changes.iter().map(|z| vec![format!("sign change {z}")]));
            let report = Report::table(vec!["detail"], rows, serde_json::to_value(&r).map_err(json_err)?);
            Ok(report.with_verdict(r.passed()))
        }
        ("mc", count) => {
            let seed = require_seed(a.seed)?;
            let k = a.k.unwrap_or(2);
            let n = integer_n(&a.dim)?.unwrap_or(10);
            let n = usize::try_from(n).map_err(|_| Error::InvalidArgument("--n must be positive".into()))?;
            let samples = count.unwrap_or(config.mc_samples);
            let cache = config.cache();
            let reports = degree_queries(k)
                .iter()
                .enumerate()
                .map(|(i, q)| moment_report(&cache, q, n, samples, RngSpec { seed, stream: i as u64 }))
                .collect::<Result<Vec<_>>>()?;
            let passed = reports.iter().all(|r| r.passed);
            let rows = reports
                .iter()
                .map(|r| {
                    vec![
                        r.group.name().to_string(),
                        r.query.clone(),
                        format!("{:.6}", r.estimate_re),
                        format!("{:.6}", r.se),
                        r.exact.clone(),
                        format!("{:.2}", r.z),
                        flag(r.passed),
                    ]
                })
                .collect();
            let json = json!({"suite": "mc", "k": k, "n": n, "samples": samples, "seed": seed, "queries": reports});
            Ok(Report::table(vec!["group", "query", "estimate", "se", "exact", "z", "ok"], rows, json).with_verdict(passed))
        }
        ("clt", count) => {
            let seed = require_seed(a.seed)?;
            let n = integer_n(&a.dim)?.unwrap_or(30);
            let n = usize::try_from(n).map_err(|_| Error::InvalidArgument("--n must be positive".into()))?;
            let r = trace_clt_demo(n, count.unwrap_or(config.mc_samples), RngSpec::new(seed))?;
            let rows = r
                .moments
                .iter()
                .map(|m| {
                    vec![
                        m.order.to_string(),
                        format!("{:.6}", m.empirical),
                        format!("{}", m.expected),
                        format!("{:.6}", m.se),
                        format!("{:.2}", m.z),
                    ]
                })
                .collect();
            let passed = r.passed;
            let report = Report::table(
                vec!["order", "empirical", "expected", "se", "z"],
                rows,
                serde_json::to_value(&r).map_err(json_err)?,
            );
            Ok(report.with_verdict(passed))
        }
        _ => Err(Error::Parse(format!(
            "unknown suite {suite:?}; expected recursion, bounds, three-path, free-survey, mc:<samples> or clt:<samples>"
        ))),
    }
}

fn flag(ok: bool) -> String {
    if ok { "ok" } else { "FAIL" }.to_string()
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Io(e.to_string())
}

fn channel(a: &ChannelArgs) -> Result<Report> {
    let t = parse_rational(&a.t)?;
    let r = channel_demo(a.n, a.k, &t, a.samples, RngSpec::new(a.seed))?;
    let mut rows: Vec<Vec<String>> = r
        .eigenvalues
        .iter()
        .zip(&r.expected)
        .zip(&r.relative_errors)
        .enumerate()
        .map(|(i, ((e, g), rel))| vec![(i + 1).to_string(), format!("{e:.6}"), format!("{g:.6}"), format!("{rel:.4}")])
        .collect();
    rows.push(vec!["residual".into(), format!("{:.3e}", r.residual), "0".into(), String::new()]);
    let passed = r.passed;
    let report = Report::table(
        vec!["index", "eigenvalue", "limit", "relative_error"],
        rows,
        serde_json::to_value(&r).map_err(json_err)?,
    );
    Ok(report.with_verdict(passed))
}

fn table(a: &TableArgs, config: &Config) -> Result<Report> {
    let group: GroupKind = a.group.parse()?;
    let mode = mode_of(&a.dim)?;
    let t = config.cache().get(group, a.k, &mode)?;
    let rows: Vec<Vec<String>> = t.entries().map(|(k, v)| vec![k.to_string(), v.to_string()]).collect();
    let entries: Vec<Value> = rows.iter().map(|r| json!({"key": r[0], "value": r[1]})).collect();
    let json = json!({"group": group.name(), "k": a.k, "mode": mode.to_string(), "entries": entries});
    Ok(Report::table(vec!["key", "value"], rows, json))
}

fn cache(a: &CacheArgs, config: &Config) -> Result<Report> {
    let dir = config
        .cache_dir
        .as_ref()
        .ok_or_else(|| Error::Cache("no cache directory is configured".into()))?;
    match a.action {
        CacheAction::Path => {
            let text = dir.display().to_string();
            Ok(Report::value(text.clone(), vec!["path"], vec![text.clone()], json!({"path": text})))
        }
        CacheAction::Clear => {
            let removed = TableCache::with_dir(dir).clear_disk()?;
            let text = format!("removed {removed} file(s)");
            Ok(Report::value(text, vec!["removed"], vec![removed.to_string()], json!({"removed": removed})))
        }
    }
}
