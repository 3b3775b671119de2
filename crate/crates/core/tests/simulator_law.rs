//! Statistical and structural checks of simulated paths.

use fracqueue::sampling::RngStream;
use fracqueue::simulator::{extract_sojourns, occupancy_at, simulate_path, simulate_sojourns, StopRule};
use fracqueue::specfun::ml;
use fracqueue::transient::{classical_p, fractional_distribution, QuadratureControl, QueueParams, TransientQuery};
use fracqueue::SeriesControl;
use proptest::prelude::*;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

fn fig_params(alpha: f64) -> QueueParams {
    QueueParams::new(5.0, 3.0, 1.0, alpha).unwrap()
}

/// Pearson statistic of observed counts against probabilities.
fn chi_square(counts: &[usize], probs: &[f64]) -> f64 {
    let n: usize = counts.iter().sum();
    counts
        .iter()
        .zip(probs)
        .map(|(&c, &p)| {
            let e = p * n as f64;
            (c as f64 - e).powi(2) / e
        })
        .sum()
}

#[test]
fn event_type_split_is_multinomial() {
    let s = simulate_sojourns(&fig_params(0.8), 1, 1_000_000, RngStream::new(10, 0)).unwrap();
    assert_eq!(s.n(), 1_000_000);
    let stat = chi_square(&[s.n_a, s.n_s, s.n_c], &[5.0 / 9.0, 3.0 / 9.0, 1.0 / 9.0]);
    // chi-square(2) upper 1% point
    assert!(stat < 9.210, "chi2 = {stat}");
}

#[test]
fn path_sojourns_follow_the_waiting_time_law() {
    let alpha = 0.7;
    let path = simulate_path(&fig_params(alpha), 1, StopRule::MaxEvents(60_000), RngStream::new(3, 0)).unwrap();
    let s = extract_sojourns(&path).unwrap();
    let mut w = s.waiting_times.clone();
    w.sort_by(f64::total_cmp);
    let n = w.len() as f64;
    let d = w
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            let f = 1.0 - ml(1, alpha, 1.0, -9.0 * t.powf(alpha)).unwrap();
            (f - k as f64 / n).max((k + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    assert!(d * n.sqrt() < 1.6276, "sqrt(n) D = {}", d * n.sqrt());

    let logs: Vec<f64> = s.waiting_times.iter().map(|x| x.ln()).collect();
    let m = logs.iter().sum::<f64>() / n;
    let sd = (logs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / n).sqrt();
    let exact = -9f64.ln() / alpha - EULER_GAMMA;
    assert!((m - exact).abs() < 3.0 * sd / n.sqrt(), "{m} vs {exact}");
}

#[test]
fn plain_mm1_long_run_empty_fraction() {
    // xi = 0, alpha = 1: stationary P(empty) = 1 - lambda/mu; batch means give the error bar
    let p = QueueParams::new(2.0, 3.0, 0.0, 1.0).unwrap();
    let horizon = 200_000.0;
    let path = simulate_path(&p, 0, StopRule::MaxTime(horizon), RngStream::new(77, 0)).unwrap();
    let batches = 100;
    let width = horizon / batches as f64;
    let mut frac = vec![0.0; batches];
    let (mut state, mut last) = (path.initial_state, 0.0);
    let add_empty = |from: f64, to: f64, frac: &mut Vec<f64>| {
        let mut a = from;
        while a < to {
            let b_idx = ((a / width) as usize).min(batches - 1);
            let b_end = ((b_idx + 1) as f64 * width).min(to);
            frac[b_idx] += (b_end - a) / width;
            a = b_end;
        }
    };
    for e in &path.events {
        if state == 0 {
            add_empty(last, e.time, &mut frac);
        }
        state = e.state;
        last = e.time;
    }
    if state == 0 {
        add_empty(last, horizon, &mut frac);
    }
    let m = frac.iter().sum::<f64>() / batches as f64;
    let sd = (frac.iter().map(|f| (f - m).powi(2)).sum::<f64>() / (batches as f64 - 1.0)).sqrt();
    let se = sd / (batches as f64).sqrt();
    assert!((m - 1.0 / 3.0).abs() < 3.0 * se, "{m} ± {se}");
}

fn occupancy_histogram(p: &QueueParams, i: usize, t: f64, paths: usize, seed: u64, bins: usize) -> Vec<f64> {
    let mut counts = vec![0usize; bins];
    for r in 0..paths {
        let path = simulate_path(p, i, StopRule::MaxTime(t), RngStream::new(seed, r as u64)).unwrap();
        let x = occupancy_at(&path, t).unwrap();
        if x < bins {
            counts[x] += 1;
        }
    }
    counts.into_iter().map(|c| c as f64 / paths as f64).collect()
}

#[test]
fn classical_empty_probability_matches_monte_carlo() {
    let p = fig_params(1.0);
    let paths = 100_000;
    let h = occupancy_histogram(&p, 1, 2.0, paths, 5, 1);
    let exact = classical_p(&p, TransientQuery::new(1, 0, 2.0).unwrap(), SeriesControl::default()).unwrap();
    let se = (exact * (1.0 - exact) / paths as f64).sqrt();
    assert!((h[0] - exact).abs() < 3.0 * se, "{} vs {exact}", h[0]);
}

#[test]
fn fractional_histogram_matches_distribution() {
    let p = fig_params(0.8);
    let paths = 100_000;
    let bins = 25;
    let h = occupancy_histogram(&p, 1, 2.0, paths, 6, bins);
    let d = fractional_distribution(&p, 1, 2.0, bins - 1, QuadratureControl::default(), SeriesControl::default()).unwrap();
    for (n, (&q, &emp)) in d.probs.iter().zip(&h).enumerate() {
        if q < 0.005 {
            continue;
        }
        let se = (q * (1.0 - q) / paths as f64).sqrt();
        assert!((emp - q).abs() < 3.0 * se, "n={n}: {emp} vs {q}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]
    #[test]
    fn generated_paths_are_valid(
        lambda in 0.1f64..10.0,
        mu in 0.1f64..10.0,
        xi in 0.0f64..5.0,
        alpha in 0.1f64..=1.0,
        i0 in 0usize..6,
        events in 1usize..40,
        seed: u64,
    ) {
        let p = QueueParams::new(lambda, mu, xi, alpha).unwrap();
        let path = simulate_path(&p, i0, StopRule::MaxEvents(events), RngStream::new(seed, 0)).unwrap();
        prop_assert_eq!(path.events.len(), events);
        prop_assert!(path.validate().is_ok());
        if let Ok(s) = extract_sojourns(&path) {
            prop_assert_eq!(s.waiting_times.len(), s.n());
            prop_assert!(s.waiting_times.iter().all(|w| *w > 0.0));
        }
    }
}
