//! CSV tables laid out like the paper's parameter tables: one row per
//! quantity, one column per fit.

use scurve::FitReport;

use crate::run::FitRecord;

fn fmt(v: f64) -> String {
    format!("{v}")
}

fn joined(values: impl Iterator<Item = f64>) -> String {
    values.map(fmt).collect::<Vec<_>>().join(" ")
}

/// Quantity rows for one fit, keyed by name. Single-curve fits carry no
/// weights and no NL row, as in the n = 1 tables.
fn quantities(n: usize, report: &FitReport) -> Vec<(String, String)> {
    let p = &report.params;
    let mut rows = vec![("a".to_string(), fmt(p.a))];
    if n == 1 {
        rows.push(("m".into(), fmt(p.components[0].slope)));
    } else {
        for (i, c) in p.components.iter().enumerate() {
            rows.push((format!("p_{}", i + 1), fmt(c.weight)));
            rows.push((format!("m_{}", i + 1), fmt(c.slope)));
        }
    }
    rows.push(("x_c".into(), joined(p.components.iter().map(|c| c.x_c))));
    rows.push(("y_c".into(), joined(p.components.iter().map(|c| c.y_c))));
    let m = &report.measures;
    if n > 1 {
        rows.push(("m_max".into(), fmt(m.m_max)));
        rows.push(("NL".into(), m.nl_percent.map(fmt).unwrap_or_default()));
    }
    rows.push(("m/(1+a)".into(), fmt(m.ratio)));
    rows.push(("m_bar".into(), m.m_bar.map(fmt).unwrap_or_default()));
    rows.push(("SSE".into(), fmt(report.sse)));
    rows.push(("converged".into(), report.converged.to_string()));
    rows
}

/// A `Quantities` table with one column per record. Row order follows the
/// first record with the most components; missing cells stay empty and
/// failed fits show their error in the `a` row.
pub fn quantity_table(headers: &[String], records: &[&FitRecord]) -> String {
    let cols: Vec<Vec<(String, String)>> = records
        .iter()
        .map(|r| match &r.report {
            Some(rep) => quantities(r.n, rep),
            None => vec![(
                "a".into(),
                format!("error: {}", r.error.as_deref().unwrap_or("")),
            )],
        })
        .collect();
    let mut names: Vec<String> = Vec::new();
    for col in &cols {
        for (k, _) in col {
            if !names.contains(k) {
                names.push(k.clone());
            }
        }
    }
    // Keep the paper's order: parameters, inflections, measures. Weights
    // and slopes (rank 1) keep their insertion order.
    let rank = |k: &str| match k {
        "a" => 0,
        "x_c" => 2,
        "y_c" => 3,
        "m_max" => 4,
        "NL" => 5,
        "m/(1+a)" => 6,
        "m_bar" => 7,
        "SSE" => 8,
        "converged" => 9,
        _ => 1,
    };
    names.sort_by_key(|k| rank(k));

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut head = vec!["Quantities".to_string()];
    head.extend(headers.iter().cloned());
    w.write_record(&head).expect("in-memory write");
    for name in &names {
        let mut row = vec![name.clone()];
        for col in &cols {
            row.push(
                col.iter()
                    .find(|(k, _)| k == name)
                    .map(|(_, v)| v.clone())
                    .unwrap_or_default(),
            );
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}

/// One row per fit: the measures as a long-form table.
pub fn measures_table(records: &[(String, &FitRecord)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "run",
        "source",
        "n",
        "a",
        "m",
        "m/(1+a)",
        "NL",
        "m_bar",
        "SSE",
        "iterations",
        "converged",
        "error",
    ])
    .expect("in-memory write");
    for (run, r) in records {
        let mut row = vec![run.clone(), r.source.label(), r.n.to_string()];
        match &r.report {
            Some(rep) => {
                let m = &rep.measures;
                row.extend([
                    fmt(rep.params.a),
                    fmt(m.m_max),
                    fmt(m.ratio),
                    m.nl_percent.map(fmt).unwrap_or_default(),
                    m.m_bar.map(fmt).unwrap_or_default(),
                    fmt(rep.sse),
                    rep.iterations.to_string(),
                    rep.converged.to_string(),
                    String::new(),
                ]);
            }
            None => {
                row.extend(std::iter::repeat_n(String::new(), 8));
                row.push(r.error.clone().unwrap_or_default());
            }
        }
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
}
