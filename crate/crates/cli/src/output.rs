//! Human-readable report layouts.

use std::fmt::Write;

use koon_gphcs::analysis::{AnalysisReport, BETA_LABEL};
use koon_gphcs::dataset::Dataset;
use koon_gphcs::frequentist::{FitResult, IntervalEstimate, KsResult};
use koon_gphcs::mcsim::Design;

pub fn gof_text(data: &Dataset, fit: &FitResult, ks: &KsResult) -> String {
    let mut s = String::new();
    writeln!(s, "# koon-gphcs gof").unwrap();
    writeln!(s, "data:  {} ({} values)", data.source, data.times.len()).unwrap();
    writeln!(s, "fit:   complete-sample Weibull MLE, F(x) = 1 - exp(-beta x^alpha)").unwrap();
    writeln!(s, "alpha  {:.4}", fit.params_hat.alpha()).unwrap();
    writeln!(s, "beta   {:.4}  ({BETA_LABEL})", fit.params_hat.beta()).unwrap();
    writeln!(s, "K-S statistic  {:.4}", ks.statistic).unwrap();
    writeln!(s, "K-S p-value    {:.4}  (asymptotic Kolmogorov law)", ks.p_value).unwrap();
    s
}

fn interval(i: &IntervalEstimate) -> String {
    format!("({:.4}, {:.4})", i.lower, i.upper)
}

pub fn analysis_text(data: &Dataset, r: &AnalysisReport) -> String {
    let st = &r.settings;
    let smp = &r.sample;
    let mut s = String::new();
    writeln!(s, "# koon-gphcs analyze  seed={}", st.seed).unwrap();
    writeln!(
        s,
        "data:     {} ({} values, {} input)",
        data.source,
        data.times.len(),
        match st.mode {
            koon_gphcs::analysis::InputMode::Progressive => "progressive-sample",
            koon_gphcs::analysis::InputMode::Raw => "raw",
        }
    )
    .unwrap();
    writeln!(
        s,
        "plan:     n={} m={} k={} T={} removals={:?}",
        smp.n, smp.m, smp.k, smp.threshold, st.plan.removals()
    )
    .unwrap();
    writeln!(
        s,
        "sample:   case {}, D={}, T*={}, R*={}",
        smp.case_tag, smp.big_d, smp.t_star, smp.r_star
    )
    .unwrap();
    writeln!(
        s,
        "system:   {}-out-of-{}, t={}",
        st.spec.required(),
        st.spec.components(),
        st.t
    )
    .unwrap();
    writeln!(
        s,
        "prior:    gamma(a={}, b={}) on alpha, gamma(c={}, d={}) on beta",
        st.prior.a, st.prior.b, st.prior.c, st.prior.d
    )
    .unwrap();
    writeln!(
        s,
        "MCMC:     B={}, burn-in={}, acceptance alpha={:.3} beta={:.3}",
        st.mcmc.draws, st.mcmc.burn_in, r.accept_rate_alpha, r.accept_rate_beta
    )
    .unwrap();
    writeln!(s, "beta:     {BETA_LABEL}").unwrap();
    writeln!(s).unwrap();

    let rel = format!("R_{},{}({})", st.spec.components(), st.spec.required(), st.t);
    writeln!(s, "Point estimates").unwrap();
    writeln!(s, "{:<8} {:>10} {:>10} {:>14}", "", "alpha", "beta", rel).unwrap();
    for (name, p) in [("MLE", &r.mle), ("Bayes", &r.bayes_estimates)] {
        writeln!(
            s,
            "{:<8} {:>10.4} {:>10.4} {:>14.4}",
            name, p.alpha, p.beta, p.reliability
        )
        .unwrap();
    }
    writeln!(s).unwrap();

    let level = (1.0 - st.gamma) * 100.0;
    writeln!(s, "{level}% intervals").unwrap();
    writeln!(s, "{:<14} {:>18} {:>18} {:>18}", "", "alpha", "beta", rel).unwrap();
    for set in [&r.aci, &r.credible] {
        let name = set.alpha.method.to_string();
        writeln!(
            s,
            "{:<14} {:>18} {:>18} {:>18}",
            name,
            interval(&set.alpha),
            interval(&set.beta),
            interval(&set.reliability)
        )
        .unwrap();
        writeln!(
            s,
            "{:<14} {:>18} {:>18} {:>18}",
            "  width",
            format!("{:.4}", set.alpha.width()),
            format!("{:.4}", set.beta.width()),
            format!("{:.4}", set.reliability.width())
        )
        .unwrap();
    }
    if r.aci.reliability.raw_width() != r.aci.reliability.width() {
        writeln!(
            s,
            "note: reliability ACI clamped to [0, 1]; unclamped ({:.4}, {:.4})",
            r.aci.reliability.raw_lower.unwrap_or(f64::NAN),
            r.aci.reliability.raw_upper.unwrap_or(f64::NAN)
        )
        .unwrap();
    }
    if let Some(ks) = &r.gof {
        writeln!(s).unwrap();
        writeln!(s, "K-S statistic {:.4}, p-value {:.4}", ks.statistic, ks.p_value).unwrap();
    }
    s
}

pub fn simulate_header(design: &Design, fast: bool) -> String {
    let mut s = String::from("# koon-gphcs simulate");
    if fast {
        s.push_str("  (fast profile)");
    }
    s.push('\n');
    for (i, c) in design.cells.iter().enumerate() {
        writeln!(
            s,
            "# cell {}: {}  reps={} B={} burn-in={} seed={} truth alpha={} beta={} system {}-out-of-{} t={}",
            i + 1,
            c.name(),
            c.replications,
            c.draws,
            c.burn_in,
            c.seed,
            c.true_params.alpha(),
            c.true_params.beta(),
            c.spec.required(),
            c.spec.components(),
            c.t_eval
        )
        .unwrap();
    }
    s
}
