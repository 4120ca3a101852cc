use anyhow::{bail, Result};
use guesswork::asymptotics::{binary_closed_forms, check_epsilon_admissible};
use guesswork::{ScgfModel, SourceKind};
use serde_json::{json, Value};

use super::Outcome;
use crate::cli::{parse_distribution, parse_grid, require_epsilon, Format, GlobalArgs};
use crate::output::{fmt_num, json_num, render_json, CsvDoc};

pub fn fig1(g: &GlobalArgs, grid: &str, format: Format) -> Result<Outcome> {
    let eps = require_epsilon(g.epsilon)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(guesswork::Error::InvalidEpsilon(eps).into());
    }
    let grid = parse_grid(grid)?;

    let mut doc = CsvDoc::new(["p0", "top", "middle", "bottom", "a", "admissible"]);
    doc.comment(format!("fig1 epsilon={}", fmt_num(eps)));
    doc.comment("top = h(l-) - h(p)");
    doc.comment("middle = lim (1/k) log(E G(U) / E G(W_eps))");
    doc.comment("bottom = h(l-) - Lambda_W(1)");
    doc.comment("a = eta(1) - h(p) - epsilon; middle = bottom when a <= 0, D(l- || p) otherwise");
    doc.comment("admissible iff 0 < epsilon < log(p0/(1-p0)) min(p0 - 1/2, 1 - p0)");
    let mut rows = Vec::new();
    for &p0 in &grid {
        let row = match binary_closed_forms(p0, eps) {
            Ok(c) => {
                doc.row(vec![
                    fmt_num(p0),
                    fmt_num(c.top),
                    fmt_num(c.middle),
                    fmt_num(c.bottom),
                    fmt_num(c.a),
                    "true".into(),
                ]);
                json!({
                    "p0": json_num(p0),
                    "top": json_num(c.top),
                    "middle": json_num(c.middle),
                    "bottom": json_num(c.bottom),
                    "a": json_num(c.a),
                    "admissible": true,
                })
            }
            Err(_) => {
                doc.row(vec![
                    fmt_num(p0),
                    "".into(),
                    "".into(),
                    "".into(),
                    "".into(),
                    "false".into(),
                ]);
                json!({
                    "p0": json_num(p0),
                    "top": Value::Null,
                    "middle": Value::Null,
                    "bottom": Value::Null,
                    "a": Value::Null,
                    "admissible": false,
                })
            }
        };
        rows.push(row);
    }
    let text = match format {
        Format::Csv => doc.render()?,
        Format::Json => render_json(&json!({ "epsilon": json_num(eps), "rows": rows }))?,
    };
    Ok(Outcome::ok(text))
}

pub fn fig2(g: &GlobalArgs, x_points: usize, format: Format) -> Result<Outcome> {
    let p = parse_distribution(g.p.as_deref())?;
    let eps = require_epsilon(g.epsilon)?;
    check_epsilon_admissible(&p, eps)?;
    if x_points < 2 {
        bail!("--x-points must be at least 2, got {x_points}");
    }
    let models = SourceKind::all(&p, eps)?
        .into_iter()
        .map(ScgfModel::new)
        .collect::<guesswork::Result<Vec<_>>>()?;
    let log_m = (p.alphabet_size() as f64).ln();
    let xs: Vec<f64> = (0..x_points)
        .map(|i| {
            if i + 1 == x_points {
                log_m
            } else {
                i as f64 * log_m / (x_points - 1) as f64
            }
        })
        .collect();

    let names: Vec<&str> = models.iter().map(|m| m.kind().name()).collect();
    let mut doc = CsvDoc::new(std::iter::once("x").chain(names.iter().copied()));
    doc.comment(format!(
        "fig2 p={} epsilon={}",
        p.probs()
            .iter()
            .map(|&x| fmt_num(x))
            .collect::<Vec<_>>()
            .join(";"),
        fmt_num(eps)
    ));
    doc.comment("columns: -x - rate(x); inf marks x outside the finite domain of the rate");
    for m in &models {
        let name = m.kind().name();
        doc.comment(format!("gamma_{name}={}", fmt_num(m.gamma_closed_form())));
        doc.comment(format!("g_{name}={}", fmt_num(m.g())));
        doc.comment(format!("domain_end_{name}={}", fmt_num(m.slope_ceiling())));
    }

    let mut rows = Vec::new();
    for &x in &xs {
        let values: Vec<f64> = models.iter().map(|m| curve_value(m, x)).collect();
        let mut fields = vec![fmt_num(x)];
        fields.extend(values.iter().map(|&v| cell(v)));
        doc.row(fields);
        let mut obj = serde_json::Map::new();
        obj.insert("x".into(), json_num(x));
        for (name, &v) in names.iter().zip(&values) {
            obj.insert(
                (*name).into(),
                if v.is_finite() {
                    json_num(v)
                } else {
                    json!("inf")
                },
            );
        }
        rows.push(Value::Object(obj));
    }

    let text = match format {
        Format::Csv => doc.render()?,
        Format::Json => {
            let meta: serde_json::Map<String, Value> = models
                .iter()
                .map(|m| {
                    (
                        m.kind().name().to_string(),
                        json!({
                            "gamma": json_num(m.gamma_closed_form()),
                            "g": json_num(m.g()),
                            "domain_end": json_num(m.slope_ceiling()),
                        }),
                    )
                })
                .collect();
            render_json(&json!({
                "p": p.probs().iter().map(|&x| json_num(x)).collect::<Vec<_>>(),
                "epsilon": json_num(eps),
                "sources": meta,
                "rows": rows,
            }))?
        }
    };
    Ok(Outcome::ok(text))
}

/// `-x - rate(x)`, infinite outside the rate's domain.
fn curve_value(m: &ScgfModel, x: f64) -> f64 {
    let r = m.rate_function().eval(x);
    if r.is_finite() {
        -x - r
    } else {
        f64::INFINITY
    }
}

fn cell(v: f64) -> String {
    if v.is_finite() {
        fmt_num(v)
    } else {
        "inf".into()
    }
}
