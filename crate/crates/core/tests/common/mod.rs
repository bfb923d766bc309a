//! Checks shared by the property suite and the acceptance run. Each returns
//! `Ok` with a short summary or `Err` describing the first violation.

#![allow(dead_code)]

use koon_gphcs::bayes::{credible_interval, mh_sample, CredibleMethod, McmcOptions, PriorSpec};
use koon_gphcs::censoring::{generate_gphcs, CaseTag};
use koon_gphcs::frequentist::{fit, log_likelihood, observed_info, score, SolverOptions};
use koon_gphcs::koon::{system_reliability, system_reliability_gradient};
use koon_gphcs::mcsim::{run_design, to_csv, SchemeId, SimCell};
use koon_gphcs::special::kolmogorov_sf;
use koon_gphcs::{CensoringPlan, GphcsSample, SystemSpec, WeibullParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Gamma};

pub type Check = Result<String, String>;

pub fn params(alpha: f64, beta: f64) -> WeibullParams {
    WeibullParams::new(alpha, beta).unwrap()
}

/// A censored sample drawn from a random plan.
pub fn random_sample(rng: &mut ChaCha8Rng) -> (GphcsSample, WeibullParams) {
    let n = rng.random_range(10..60);
    let m = rng.random_range(3..=n);
    let k = rng.random_range(1..m);
    let mut removals = vec![0; m];
    for _ in 0..(n - m) {
        removals[rng.random_range(0..m)] += 1;
    }
    let p = params(rng.random_range(0.5..3.0), rng.random_range(0.3..3.0));
    let threshold = p.quantile(rng.random_range(0.05..0.95)).unwrap();
    let plan = CensoringPlan::new(n, m, k, threshold, removals).unwrap();
    (generate_gphcs(&plan, &p, rng), p)
}

/// Score against central differences of the log-likelihood and observed
/// information against central differences of the score.
pub fn score_and_hessian_vs_fd(cases: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut worst_score, mut worst_info) = (0.0f64, 0.0f64);
    for _ in 0..cases {
        let (s, truth) = random_sample(&mut rng);
        // evaluate near, but not at, the truth
        let p = params(
            truth.alpha() * rng.random_range(0.8..1.2),
            truth.beta() * rng.random_range(0.8..1.2),
        );
        let (a, b) = (p.alpha(), p.beta());
        let (ha, hb) = (1e-6 * a.max(1.0), 1e-6 * b.max(1.0));
        let ll = |a: f64, b: f64| log_likelihood(&s, &params(a, b)).unwrap();
        let sc = |a: f64, b: f64| score(&s, &params(a, b)).unwrap();

        let fd = [
            (ll(a + ha, b) - ll(a - ha, b)) / (2.0 * ha),
            (ll(a, b + hb) - ll(a, b - hb)) / (2.0 * hb),
        ];
        let an = sc(a, b);
        let scale = ll(a, b).abs().max(1.0);
        for (x, y) in [(an.0, fd[0]), (an.1, fd[1])] {
            let err = (x - y).abs() / (y.abs().max(scale * 1e-3));
            worst_score = worst_score.max(err);
        }

        let info = observed_info(&s, &p).unwrap();
        let (hd_a, hd_b) = (1e-5 * a.max(1.0), 1e-5 * b);
        let fd_info = [
            [
                -(sc(a + hd_a, b).0 - sc(a - hd_a, b).0) / (2.0 * hd_a),
                -(sc(a, b + hd_b).0 - sc(a, b - hd_b).0) / (2.0 * hd_b),
            ],
            [
                -(sc(a + hd_a, b).1 - sc(a - hd_a, b).1) / (2.0 * hd_a),
                -(sc(a, b + hd_b).1 - sc(a, b - hd_b).1) / (2.0 * hd_b),
            ],
        ];
        for i in 0..2 {
            for j in 0..2 {
                let err = (info[i][j] - fd_info[i][j]).abs()
                    / fd_info[i][j].abs().max(info[i][i].abs() * 1e-3);
                worst_info = worst_info.max(err);
            }
        }
    }
    if worst_score < 1e-6 && worst_info < 1e-5 {
        Ok(format!(
            "{cases} samples; worst relative error score {worst_score:.1e}, information {worst_info:.1e}"
        ))
    } else {
        Err(format!(
            "worst relative error score {worst_score:.2e} (tol 1e-6), information {worst_info:.2e} (tol 1e-5)"
        ))
    }
}

/// Probability that at least `k` of `n` independent components with
/// reliability `r` work, by summing over all 2^n states.
pub fn enumerate_states(n: u32, k: u32, r: f64) -> f64 {
    (0u32..(1 << n))
        .filter(|mask| mask.count_ones() >= k)
        .map(|mask| {
            let up = mask.count_ones() as i32;
            r.powi(up) * (1.0 - r).powi(n as i32 - up)
        })
        .sum()
}

pub fn brute_force_small_systems() -> Check {
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in 1..=6 {
        for k in 1..=n {
            for &(a, b, t) in &[(1.5, 1.0, 0.5), (0.7, 0.02, 50.0), (3.0, 2.0, 0.9), (1.0, 0.1, 4.0)] {
                let p = params(a, b);
                let got = system_reliability(&SystemSpec::new(n, k).unwrap(), &p, t).unwrap();
                let want = enumerate_states(n, k, p.reliability(t).unwrap());
                worst = worst.max((got - want).abs());
                count += 1;
            }
        }
    }
    if worst < 1e-12 {
        Ok(format!("{count} (N, K, params, t) cases; worst |diff| {worst:.1e}"))
    } else {
        Err(format!("worst |diff| {worst:.2e} exceeds 1e-12"))
    }
}

/// Analytic system-reliability gradient against central differences
/// (step 1e-6) over a grid of systems, parameters and times.
pub fn gradient_fd_grid() -> Check {
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in [1u32, 3, 5, 10] {
        for k in [1, n.div_ceil(2), n] {
            for &(a, b) in &[(1.5, 1.0), (0.9, 0.023), (2.0, 0.5)] {
                for &t in &[0.25, 0.5, 1.0, 2.0] {
                    let spec = SystemSpec::new(n, k).unwrap();
                    let g = system_reliability_gradient(&spec, &params(a, b), t).unwrap();
                    let r = |a: f64, b: f64| system_reliability(&spec, &params(a, b), t).unwrap();
                    let h = 1e-6;
                    let fa = (r(a + h, b) - r(a - h, b)) / (2.0 * h);
                    let fb = (r(a, b + h) - r(a, b - h)) / (2.0 * h);
                    for (x, y) in [(g.d_alpha, fa), (g.d_beta, fb)] {
                        // differences below the rounding floor of the
                        // difference quotient are judged absolutely
                        worst = worst.max((x - y).abs() / y.abs().max(1e-4));
                    }
                    count += 1;
                }
            }
        }
    }
    if worst < 1e-5 {
        Ok(format!("{count} grid points; worst relative error {worst:.1e}"))
    } else {
        Err(format!("worst relative error {worst:.2e} exceeds 1e-5"))
    }
}

/// Unit conservation and case logic on random plans.
pub fn conservation_and_cases(cases: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = [0usize; 3];
    for _ in 0..cases {
        let (s, _) = random_sample(&mut rng);
        s.validate().map_err(|e| e.to_string())?;
        let removed: usize = s.removals_applied.iter().sum();
        if s.big_d + removed + s.r_star != s.n {
            return Err(format!("units not conserved: {s:?}"));
        }
        if s.times.len() != s.big_d || s.removals_applied.len() != s.big_d {
            return Err(format!("lengths disagree with D: {s:?}"));
        }
        if s.times.windows(2).any(|w| w[0] >= w[1]) {
            return Err(format!("times not strictly increasing: {s:?}"));
        }
        let last = *s.times.last().unwrap();
        let ok = match s.case_tag {
            CaseTag::I => s.big_d == s.m && last < s.threshold && s.t_star == last,
            CaseTag::II => {
                s.big_d >= s.k && s.big_d < s.m && last < s.threshold && s.t_star == s.threshold
            }
            CaseTag::III => s.big_d == s.k && last >= s.threshold && s.t_star == last,
        };
        if !ok {
            return Err(format!("case logic violated: {s:?}"));
        }
        seen[s.case_tag as usize] += 1;
    }
    Ok(format!(
        "{cases} samples; cases I/II/III seen {}/{}/{}",
        seen[0], seen[1], seen[2]
    ))
}

/// With alpha held fixed, the sampled beta follows the gamma law with shape
/// `D + c` and rate `d + W(alpha)`.
pub fn conjugate_beta_oracle(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plan = CensoringPlan::new(40, 25, 15, 1.2, {
        let mut r = vec![1; 15];
        r.extend([0; 10]);
        r
    })
    .unwrap();
    let s = generate_gphcs(&plan, &params(1.5, 1.0), &mut rng);
    let f = fit(&s, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let prior = PriorSpec::new(2.0, 1.0, 3.0, 0.5).unwrap();
    let opts = McmcOptions {
        draws: 10_000,
        burn_in: 500,
        thin: 25,
        hold_alpha: true,
        ..McmcOptions::default()
    };
    let ps = mh_sample(&s, &prior, &f, None, &opts, &mut rng).map_err(|e| e.to_string())?;

    let alpha = f.params_hat.alpha();
    let w: f64 = s
        .times
        .iter()
        .zip(&s.removals_applied)
        .map(|(x, r)| (*r as f64 + 1.0) * x.powf(alpha))
        .sum::<f64>()
        + s.r_star as f64 * s.t_star.powf(alpha);
    let law = Gamma::new(s.big_d as f64 + prior.c, prior.d + w).unwrap();

    let mut draws = ps.draws_beta.clone();
    draws.sort_by(f64::total_cmp);
    let n = draws.len() as f64;
    let stat = draws
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let c = law.cdf(x);
            (c - i as f64 / n).max((i + 1) as f64 / n - c)
        })
        .fold(0.0, f64::max);
    let p = kolmogorov_sf(n.sqrt() * stat);
    if p > 0.01 {
        Ok(format!("10^4 thinned draws; K-S statistic {stat:.4}, p = {p:.3}"))
    } else {
        Err(format!("K-S statistic {stat:.4}, p = {p:.2e} <= 0.01"))
    }
}

pub fn minwidth_not_wider(cases: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let b = rng.random_range(50..2000);
        let shape: f64 = rng.random_range(0.3..4.0);
        let draws: Vec<f64> = (0..b).map(|_| rng.random::<f64>().powf(shape) * 10.0).collect();
        let gamma = rng.random_range(0.05..0.3);
        let p = credible_interval(&draws, gamma, CredibleMethod::Percentile).unwrap();
        let m = credible_interval(&draws, gamma, CredibleMethod::MinWidth).unwrap();
        if m.width() > p.width() {
            return Err(format!("minwidth {} > percentile {}", m.width(), p.width()));
        }
    }
    Ok(format!("{cases} random draw sets"))
}

/// Identical simulation reports (as CSV) on 1, 2 and 4 worker threads.
pub fn determinism_across_threads() -> Check {
    let mut cell = SimCell::new(30, 15, 8, 1.0, SchemeId::III);
    cell.replications = 40;
    cell.draws = 200;
    cell.burn_in = 50;
    cell.seed = 99;
    let cells = vec![cell.clone(), cell];
    let mut repeated_equal = true;
    let runs: Vec<String> = [1, 2, 4]
        .iter()
        .map(|&t| {
            let reports = run_design(&cells, Some(t)).unwrap();
            repeated_equal &= reports[0].quantities() == reports[1].quantities();
            to_csv(&reports)
        })
        .collect();
    if repeated_equal && runs.windows(2).all(|w| w[0] == w[1]) {
        Ok("identical reports on 1, 2 and 4 threads, and for repeated cells".into())
    } else {
        Err("reports differ across thread counts".into())
    }
}
