//! Rendering of library results in the three output formats.
//!
//! Tables are for human eyes and round to a few significant digits; CSV and
//! JSON are machine formats and carry full round-trip precision (JSON
//! renders non-finite statistics as null).

use lomax::estimators::EstimateResult;
use lomax::gof::GofResult;
use lomax::simulation::{reports_to_csv, reports_to_json, MCReport};

/// Format a statistic for a table cell: fixed point in a readable range,
/// scientific outside it, "-" when undefined.
pub fn fmt_num(v: f64) -> String {
    if !v.is_finite() {
        return "-".to_string();
    }
    let a = v.abs();
    if a != 0.0 && (a >= 1e6 || a < 1e-4) {
        format!("{v:.4e}")
    } else {
        format!("{v:.4}")
    }
}

pub fn fit_table(rows: &[EstimateResult]) -> String {
    let mut out = format!(
        "{:<9} {:>12} {:>12} {:<9} {:>10}  {}\n",
        "method", "sigma", "beta", "converged", "iterations", "note"
    );
    for r in rows {
        let (sigma, beta) = match r.params {
            Some(p) => (fmt_num(p.sigma()), fmt_num(p.beta())),
            None => ("-".to_string(), "-".to_string()),
        };
        out.push_str(&format!(
            "{:<9} {:>12} {:>12} {:<9} {:>10}  {}\n",
            r.method.to_string(),
            sigma,
            beta,
            if r.converged { "yes" } else { "no" },
            r.iterations,
            r.reason.as_deref().unwrap_or("-"),
        ));
    }
    out
}

pub fn fit_csv(rows: &[EstimateResult]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "method",
        "sigma",
        "beta",
        "converged",
        "objective_value",
        "iterations",
        "reason",
    ])
    .expect("in-memory write");
    for r in rows {
        let (sigma, beta) = match r.params {
            Some(p) => (p.sigma().to_string(), p.beta().to_string()),
            None => (String::new(), String::new()),
        };
        w.write_record([
            r.method.to_string(),
            sigma,
            beta,
            r.converged.to_string(),
            r.objective_value.map(|v| v.to_string()).unwrap_or_default(),
            r.iterations.to_string(),
            r.reason.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 csv")
}

pub fn fit_json(rows: &[EstimateResult]) -> String {
    serde_json::to_string_pretty(rows).expect("fit rows serialize")
}

pub fn report_table(report: &MCReport) -> String {
    let mut out = format!(
        "cell: n={} sigma={} beta={} replications={} seed={} trim={}%\n",
        report.n, report.sigma, report.beta, report.replications, report.seed,
        report.trim_percent
    );
    out.push_str(&format!(
        "{:<9} {:>5} {:>5} {:>11} {:>11} {:>11} {:>9} {:>11} {:>11} {:>11} {:>11} {:>9} {:>11} {:>11}\n",
        "method", "conv", "fail",
        "mean(b)", "var(b)", "tvar(b)", "RB%(b)", "MSE(b)",
        "mean(s)", "var(s)", "tvar(s)", "RB%(s)", "MSE(s)", "TMSE"
    ));
    for e in &report.estimators {
        out.push_str(&format!(
            "{:<9} {:>5} {:>5} {:>11} {:>11} {:>11} {:>9} {:>11} {:>11} {:>11} {:>11} {:>9} {:>11} {:>11}\n",
            e.method.to_string(),
            e.n_converged,
            e.n_failed,
            fmt_num(e.beta.mean),
            fmt_num(e.beta.variance),
            fmt_num(e.beta.trimmed_variance),
            fmt_num(e.beta.rb_pct),
            fmt_num(e.beta.mse),
            fmt_num(e.sigma.mean),
            fmt_num(e.sigma.variance),
            fmt_num(e.sigma.trimmed_variance),
            fmt_num(e.sigma.rb_pct),
            fmt_num(e.sigma.mse),
            fmt_num(e.tmse),
        ));
    }
    let mut failures = String::new();
    for e in &report.estimators {
        for (reason, count) in &e.failure_reasons {
            failures.push_str(&format!("  {}: {} ({} replications)\n", e.method, reason, count));
        }
    }
    if !failures.is_empty() {
        out.push_str("failures:\n");
        out.push_str(&failures);
    }
    out
}

pub fn reports_table(reports: &[MCReport]) -> String {
    reports
        .iter()
        .map(report_table)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn reports_csv(reports: &[MCReport]) -> String {
    reports_to_csv(reports)
}

pub fn reports_json(reports: &[MCReport]) -> String {
    reports_to_json(reports)
}

pub fn gof_table(g: &GofResult) -> String {
    format!(
        "method: {}\nfitted: sigma={} beta={}\nKS statistic: {}\n\
         bootstrap p-value: {}\nreplications: {} (kept {}, refits failed {})\n",
        g.method,
        fmt_num(g.fitted.sigma()),
        fmt_num(g.fitted.beta()),
        fmt_num(g.statistic),
        fmt_num(g.p_value),
        g.bootstrap_reps,
        g.kept,
        g.refits_failed,
    )
}

pub fn gof_csv(g: &GofResult) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "method",
        "statistic",
        "p_value",
        "bootstrap_reps",
        "kept",
        "refits_failed",
        "fitted_sigma",
        "fitted_beta",
    ])
    .expect("in-memory write");
    w.write_record([
        g.method.to_string(),
        g.statistic.to_string(),
        g.p_value.to_string(),
        g.bootstrap_reps.to_string(),
        g.kept.to_string(),
        g.refits_failed.to_string(),
        g.fitted.sigma().to_string(),
        g.fitted.beta().to_string(),
    ])
    .expect("in-memory write");
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 csv")
}

pub fn gof_json(g: &GofResult) -> String {
    serde_json::to_string_pretty(g).expect("gof result serializes")
}

pub fn values_plain(values: &[f64]) -> String {
    lomax::data::format_sample(values)
}

pub fn values_csv(values: &[f64]) -> String {
    let mut out = String::from("value\n");
    out.push_str(&values_plain(values));
    out
}

pub fn values_json(values: &[f64]) -> String {
    serde_json::to_string_pretty(values).expect("values serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_format_readably() {
        assert_eq!(fmt_num(f64::NAN), "-");
        assert_eq!(fmt_num(1.23456789), "1.2346");
        assert_eq!(fmt_num(0.0), "0.0000");
        assert_eq!(fmt_num(5.3e7), "5.3000e7");
        assert_eq!(fmt_num(2.0e-5), "2.0000e-5");
    }

    #[test]
    fn values_round_trip_through_csv_body() {
        let vals = [1.5, 0.1 + 0.2];
        let text = values_csv(&vals);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("value"));
        let parsed: Vec<f64> = lines.map(|l| l.parse().unwrap()).collect();
        assert_eq!(parsed, vals);
    }
}
