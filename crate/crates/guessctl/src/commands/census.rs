use anyhow::Result;
use guesswork::oracle::{smallest_nonempty_k, typical_set_census_capped};
use guesswork::tilt::boundary_types;
use serde_json::json;

use super::Outcome;
use crate::cli::{parse_distribution, parse_list, require_epsilon, Format, GlobalArgs};
use crate::output::{fmt_num, json_num, render_json, CsvDoc};

/// How far the scan for a nonempty typical set goes.
const NONEMPTY_SCAN_LIMIT: usize = 1000;

pub fn run(g: &GlobalArgs, ks: &str, format: Format) -> Result<Outcome> {
    let p = parse_distribution(g.p.as_deref())?;
    let eps = require_epsilon(g.epsilon)?;
    let ks: Vec<usize> = parse_list(ks, "k")?;
    let h_minus = boundary_types(&p, eps)?.h_minus();

    let censuses = ks
        .iter()
        .map(|&k| typical_set_census_capped(&p, eps, k, g.max_types))
        .collect::<guesswork::Result<Vec<_>>>()?;
    let smallest = if censuses.iter().any(|c| c.is_empty()) {
        smallest_nonempty_k(&p, eps, NONEMPTY_SCAN_LIMIT)?
    } else {
        None
    };

    let text = match format {
        Format::Csv => {
            let mut doc = CsvDoc::new([
                "k",
                "types",
                "cardinality",
                "log_cardinality",
                "scaled_log_cardinality",
                "prob_mass",
            ]);
            doc.comment(format!(
                "census p={} epsilon={}",
                p.probs()
                    .iter()
                    .map(|&x| fmt_num(x))
                    .collect::<Vec<_>>()
                    .join(";"),
                fmt_num(eps)
            ));
            doc.comment(format!("growth rate limit h(l-)={}", fmt_num(h_minus)));
            for c in censuses.iter().filter(|c| c.is_empty()) {
                doc.comment(empty_note(c.k(), smallest));
            }
            for c in &censuses {
                let k = c.k() as f64;
                doc.row(vec![
                    c.k().to_string(),
                    c.types().len().to_string(),
                    c.cardinality().to_string(),
                    fmt_num(c.log_cardinality()),
                    fmt_num(c.log_cardinality() / k),
                    fmt_num(c.prob_mass()),
                ]);
            }
            doc.render()?
        }
        Format::Json => {
            let rows: Vec<_> = censuses
                .iter()
                .map(|c| {
                    json!({
                        "k": c.k(),
                        "types": c.types().iter().map(|t| t.counts().map(|n| n.to_vec())).collect::<Vec<_>>(),
                        "cardinality": c.cardinality().to_string(),
                        "log_cardinality": json_num(c.log_cardinality()),
                        "scaled_log_cardinality": json_num(c.log_cardinality() / c.k() as f64),
                        "prob_mass": json_num(c.prob_mass()),
                        "note": c.is_empty().then(|| empty_note(c.k(), smallest)),
                    })
                })
                .collect();
            render_json(&json!({
                "p": p.probs().iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
                "epsilon": json_num(eps),
                "h_minus": json_num(h_minus),
                "smallest_nonempty_k": smallest,
                "rows": rows,
            }))?
        }
    };
    Ok(Outcome::ok(text))
}

fn empty_note(k: usize, smallest: Option<usize>) -> String {
    match smallest {
        Some(s) => format!("empty typical set at k={k}; smallest nonempty k is {s}"),
        None => format!("empty typical set at k={k}; none nonempty up to k={NONEMPTY_SCAN_LIMIT}"),
    }
}
