//! Text and CSV renderings of simulation reports.
//!
//! The text tables put each estimate on one line and its MSE (or interval
//! width) in parentheses on the line beneath, one column per quantity.

use std::fmt::Write;

use super::{CellReport, QuantityReport};

const QUANTITY_HEADERS: [&str; 3] = ["alpha", "beta", "R(t)"];

fn cell_columns(r: &CellReport) -> [String; 6] {
    let c = &r.cell;
    [
        c.n.to_string(),
        c.m.to_string(),
        c.k.to_string(),
        format!("{}", c.threshold),
        c.scheme.to_string(),
        c.replications.to_string(),
    ]
}

fn render_rows(
    reports: &[CellReport],
    headers: &[&str],
    row: impl Fn(&QuantityReport) -> Vec<(String, String)>,
) -> String {
    let mut head: Vec<String> = ["n", "m", "k", "T", "scheme", "reps"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    for name in QUANTITY_HEADERS {
        for h in headers {
            head.push(format!("{h} {name}"));
        }
    }
    let mut lines: Vec<Vec<String>> = vec![head];
    for r in reports {
        let mut top = cell_columns(r).to_vec();
        let mut bottom = vec![String::new(); top.len()];
        for (_, q) in r.quantities() {
            for (a, b) in row(q) {
                top.push(a);
                bottom.push(b);
            }
        }
        lines.push(top);
        lines.push(bottom);
    }
    let ncol = lines[0].len();
    let widths: Vec<usize> = (0..ncol)
        .map(|j| lines.iter().map(|l| l[j].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, line) in lines.iter().enumerate() {
        let cells: Vec<String> = line
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:>w$}"))
            .collect();
        writeln!(out, "| {} |", cells.join(" | ")).unwrap();
        if i == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            writeln!(out, "|-{}-|", rule.join("-|-")).unwrap();
        }
    }
    out
}

/// Average estimates with MSEs beneath, MLE and Bayes per quantity.
pub fn render_estimate_table(reports: &[CellReport]) -> String {
    let mut out = String::from(
        "AE of MLE and Bayes (posterior-mean) estimates; MSE in parentheses beneath.\n\
         beta is the rate parameter, time^(-alpha).\n\n",
    );
    out.push_str(&render_rows(reports, &["MLE", "Bayes"], |q| {
        vec![
            (format!("{:.4}", q.ae_mle), format!("({:.4})", q.mse_mle)),
            (format!("{:.4}", q.ae_bayes), format!("({:.4})", q.mse_bayes)),
        ]
    }));
    out
}

/// Average interval bounds with average widths beneath; the last two
/// columns per quantity are coverage proportions (an extension).
pub fn render_interval_table(reports: &[CellReport]) -> String {
    let method = reports
        .first()
        .map(|r| r.cell.hpd_method.interval_method().to_string())
        .unwrap_or_else(|| "HPD-minwidth".into());
    let mut out = format!(
        "Average 95% intervals; AW in parentheses beneath. ACI widths are unclamped.\n\
         Credible intervals: {method}. Coverage columns are an extension.\n\n"
    );
    out.push_str(&render_rows(reports, &["ACI", "HPD", "cover ACI/HPD"], |q| {
        vec![
            (
                format!("({:.4}, {:.4})", q.aci_lower, q.aci_upper),
                format!("({:.4})", q.aw_aci),
            ),
            (
                format!("({:.4}, {:.4})", q.hpd_lower, q.hpd_upper),
                format!("({:.4})", q.aw_hpd),
            ),
            (
                format!("{:.3}/{:.3}", q.coverage_aci, q.coverage_hpd),
                String::new(),
            ),
        ]
    }));
    out
}

/// One row per cell per quantity. Elapsed time is left out so that
/// identical runs give identical files.
pub fn to_csv(reports: &[CellReport]) -> String {
    let mut out = String::from(
        "cell,n,m,k,T,scheme,replications,B,burn_in,seed,hpd_method,quantity,truth,\
         ae_mle,mse_mle,ae_bayes,mse_bayes,aci_lower,aci_upper,aw_aci,hpd_lower,hpd_upper,\
         aw_hpd,aw_minwidth,aw_percentile,coverage_aci,coverage_hpd,failures\n",
    );
    for (i, r) in reports.iter().enumerate() {
        let c = &r.cell;
        for (name, q) in r.quantities() {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                i + 1,
                c.n,
                c.m,
                c.k,
                c.threshold,
                c.scheme,
                c.replications,
                c.draws,
                c.burn_in,
                c.seed,
                c.hpd_method.interval_method(),
                name,
                q.truth,
                q.ae_mle,
                q.mse_mle,
                q.ae_bayes,
                q.mse_bayes,
                q.aci_lower,
                q.aci_upper,
                q.aw_aci,
                q.hpd_lower,
                q.hpd_upper,
                q.aw_hpd,
                q.aw_minwidth,
                q.aw_percentile,
                q.coverage_aci,
                q.coverage_hpd,
                r.failures
            )
            .unwrap();
        }
    }
    out
}
