use anyhow::Result;
use guesswork::asymptotics::{admissible_epsilon_upper, check_epsilon_admissible};
use guesswork::tilt::BoundaryTypes;
use guesswork::{ScgfModel, SourceKind};
use serde_json::{json, Map, Value};

use super::Outcome;
use crate::cli::{parse_distribution, require_epsilon, Format, GlobalArgs};
use crate::output::{fmt_num, json_num, json_opt, json_vec, render_json, CsvDoc};

pub fn run(g: &GlobalArgs, format: Format) -> Result<Outcome> {
    let p = parse_distribution(g.p.as_deref())?;
    let eps = require_epsilon(g.epsilon)?;
    check_epsilon_admissible(&p, eps)?;

    let models = SourceKind::all(&p, eps)?
        .into_iter()
        .map(ScgfModel::new)
        .collect::<guesswork::Result<Vec<_>>>()?;
    let conditioned = &models[1];
    let tilt = conditioned
        .constrained_tilt()
        .expect("conditioned model has a tilt");
    let b: &BoundaryTypes = tilt.bounds();

    let mut sources = Map::new();
    for m in &models {
        let e = m.growth_exponents();
        sources.insert(
            m.kind().name().to_string(),
            json!({
                "e_G": json_num(e.e_g),
                "e_log_G": json_num(e.e_log_g),
                "g": json_num(e.g),
                "gamma": json_num(m.gamma_closed_form()),
                "gamma_numeric": json_num(e.gamma),
                "slope_ceiling": json_num(m.slope_ceiling()),
            }),
        );
    }
    let a = conditioned.growth_exponents().regime_indicator;
    let report = json!({
        "p": json_vec(p.probs()),
        "epsilon": json_num(eps),
        "m": p.alphabet_size(),
        "admissible_interval": admissible_epsilon_upper(&p).map(|u| json!([0, json_num(u)])),
        "entropy": json_num(p.entropy()),
        "h_minus": json_num(b.h_minus()),
        "h_plus": json_opt(b.h_plus()),
        "l_minus": json_vec(b.l_minus().freqs()),
        "l_plus": b.l_plus_opt().map_or(Value::Null, |l| json_vec(l.freqs())),
        "clamped_to_log_m": b.clamped_to_log_m(),
        "regime_indicator_A": json_opt(a),
        "regime_at_alpha_1": conditioned.regime(1.0).map(|r| r.as_str()),
        "breakpoints": {
            "alpha_plus": if b.exists_plus() { json_num(b.alpha_plus()) } else { Value::Null },
            "alpha_minus": json_num(b.alpha_minus()),
        },
        "sources": sources,
    });

    let text = match format {
        Format::Json => render_json(&report)?,
        Format::Csv => {
            let mut doc = CsvDoc::new(["key", "value"]);
            flatten("", &report, &mut doc);
            doc.render()?
        }
    };
    Ok(Outcome::ok(text))
}

fn flatten(prefix: &str, v: &Value, doc: &mut CsvDoc) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&join(k), v, doc)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(&join(&i.to_string()), v, doc)),
        Value::Number(n) => {
            let text = match n.as_u64() {
                Some(u) => u.to_string(),
                None => fmt_num(n.as_f64().unwrap_or(f64::NAN)),
            };
            doc.row(vec![prefix.to_string(), text])
        }
        Value::String(s) => doc.row(vec![prefix.to_string(), s.clone()]),
        Value::Bool(b) => doc.row(vec![prefix.to_string(), b.to_string()]),
        Value::Null => doc.row(vec![prefix.to_string(), String::new()]),
    }
}
