use anyhow::{bail, Result};
use guesswork::oracle::{
    build_guess_table_capped, gaps_strictly_decreasing, naive_enumeration_crosscheck_capped,
    Quantity, SeriesPoint,
};
use guesswork::{Error, ScgfModel};
use serde_json::{json, Value};

use super::{Outcome, Status};
use crate::cli::{parse_distribution, parse_list, source_kind, Format, GlobalArgs, KindArg};
use crate::output::{fmt_num, json_num, json_opt, render_json, CsvDoc};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Trend {
    Pass,
    Fail,
    /// Fewer than two word lengths with a nonempty typical set.
    Insufficient,
}

impl Trend {
    fn as_str(self) -> &'static str {
        match self {
            Trend::Pass => "pass",
            Trend::Fail => "fail",
            Trend::Insufficient => "insufficient",
        }
    }
}

pub fn run(
    g: &GlobalArgs,
    kind: KindArg,
    ks: &str,
    alphas: &str,
    crosscheck: bool,
    format: Format,
) -> Result<Outcome> {
    let p = parse_distribution(g.p.as_deref())?;
    let kind = source_kind(kind, p, g.epsilon)?;
    let mut ks: Vec<usize> = parse_list(ks, "k")?;
    ks.sort_unstable();
    ks.dedup();
    if ks[0] == 0 {
        return Err(Error::InvalidWordLength(0).into());
    }
    let alphas: Vec<f64> = parse_list(alphas, "alpha")?;
    if let Some(&a) = alphas.iter().find(|a| !a.is_finite()) {
        bail!("alpha must be finite, got {a}");
    }
    let model = ScgfModel::new(kind.clone())?;

    let quantities: Vec<Quantity> = alphas
        .iter()
        .map(|&a| Quantity::Scgf(a))
        .chain([
            Quantity::ELogG,
            Quantity::G,
            Quantity::Gamma,
            Quantity::TypicalSizeRate,
        ])
        .collect();
    let targets: Vec<f64> = quantities.iter().map(|q| q.target(&model)).collect();
    let mut series: Vec<Vec<SeriesPoint>> = vec![Vec::new(); quantities.len()];
    let mut checks = Vec::new();

    for &k in &ks {
        let table = match build_guess_table_capped(&kind, k, g.max_types) {
            Ok(t) => Some(t),
            Err(Error::EmptyTypicalSet { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        if crosscheck && table.is_some() {
            let agree = naive_enumeration_crosscheck_capped(&kind, k, g.max_words)?;
            if !agree {
                bail!("word-by-word and type-based moments disagree at k={k}");
            }
            checks.push(k);
        }
        for ((q, &target), s) in quantities.iter().zip(&targets).zip(series.iter_mut()) {
            let value = table.as_ref().map(|t| q.value(t));
            s.push(SeriesPoint {
                k,
                value,
                target,
                gap: value.map(|v| (v - target).abs()),
            });
        }
    }

    let trends: Vec<Trend> = series
        .iter()
        .map(|s| {
            if s.iter().filter(|pt| pt.gap.is_some()).count() < 2 {
                Trend::Insufficient
            } else if gaps_strictly_decreasing(s) {
                Trend::Pass
            } else {
                Trend::Fail
            }
        })
        .collect();
    let status = if trends.contains(&Trend::Fail) {
        Status::TrendFailure
    } else {
        Status::Success
    };

    let text = match format {
        Format::Csv => {
            let mut doc = CsvDoc::new([
                "series",
                "alpha",
                "k",
                "exact",
                "asymptotic",
                "gap",
                "status",
            ]);
            doc.comment(format!(
                "exact-compare kind={} p={}{}",
                kind.name(),
                kind.p()
                    .probs()
                    .iter()
                    .map(|&x| fmt_num(x))
                    .collect::<Vec<_>>()
                    .join(";"),
                kind.epsilon()
                    .map(|e| format!(" epsilon={}", fmt_num(e)))
                    .unwrap_or_default()
            ));
            for (q, t) in quantities.iter().zip(&trends) {
                doc.comment(format!("trend {q}: {}", t.as_str()));
            }
            if !checks.is_empty() {
                let ks: Vec<String> = checks.iter().map(|k| k.to_string()).collect();
                doc.comment(format!(
                    "word-by-word crosscheck agrees at k={}",
                    ks.join(";")
                ));
            }
            for (q, s) in quantities.iter().zip(&series) {
                for pt in s {
                    doc.row(vec![
                        series_name(q),
                        alpha_cell(q),
                        pt.k.to_string(),
                        pt.value.map(fmt_num).unwrap_or_default(),
                        fmt_num(pt.target),
                        pt.gap.map(fmt_num).unwrap_or_default(),
                        if pt.value.is_some() {
                            "ok"
                        } else {
                            "empty_typical_set"
                        }
                        .into(),
                    ]);
                }
            }
            doc.render()?
        }
        Format::Json => {
            let series_json: Vec<Value> = quantities
                .iter()
                .zip(&series)
                .zip(&trends)
                .map(|((q, s), t)| {
                    json!({
                        "series": series_name(q),
                        "alpha": match q { Quantity::Scgf(a) => json_num(*a), _ => Value::Null },
                        "trend": t.as_str(),
                        "points": s.iter().map(|pt| json!({
                            "k": pt.k,
                            "exact": json_opt(pt.value),
                            "asymptotic": json_num(pt.target),
                            "gap": json_opt(pt.gap),
                            "status": if pt.value.is_some() { "ok" } else { "empty_typical_set" },
                        })).collect::<Vec<_>>(),
                    })
                })
                .collect();
            render_json(&json!({
                "kind": kind.name(),
                "p": kind.p().probs().iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
                "epsilon": json_opt(kind.epsilon()),
                "crosschecked_k": checks,
                "series": series_json,
            }))?
        }
    };
    Ok(Outcome { text, status })
}

fn series_name(q: &Quantity) -> String {
    match q {
        Quantity::Scgf(_) => "scgf".into(),
        other => other.to_string(),
    }
}

fn alpha_cell(q: &Quantity) -> String {
    match q {
        Quantity::Scgf(a) => fmt_num(*a),
        _ => String::new(),
    }
}
