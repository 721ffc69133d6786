#![allow(dead_code)]

use curvecode::rational::{int, ratio};
use curvecode::{DiscretizationSystem, PlFunction, Rational};
use rand::Rng;
use std::sync::OnceLock;

/// PL function with 2 to `max_points` breakpoints on the `1/x_denom` grid and
/// values `k/y_denom` with `|k| ≤ y_span`.
pub fn random_pl(rng: &mut impl Rng, max_points: usize, x_denom: i64, y_denom: i64, y_span: i64) -> PlFunction {
    let inner = rng.gen_range(0..max_points.saturating_sub(1).max(1));
    let mut xs: Vec<i64> = (0..inner).map(|_| rng.gen_range(1..x_denom)).collect();
    xs.sort_unstable();
    xs.dedup();
    let mut points = vec![(int(0), ratio(rng.gen_range(-y_span..=y_span), y_denom))];
    for x in xs {
        points.push((ratio(x, x_denom), ratio(rng.gen_range(-y_span..=y_span), y_denom)));
    }
    points.push((int(1), ratio(rng.gen_range(-y_span..=y_span), y_denom)));
    PlFunction::new(points).unwrap()
}

/// Base-2 uniform, base-3 uniform, and an irregular nested system.
pub fn test_systems() -> &'static [DiscretizationSystem] {
    static SYSTEMS: OnceLock<Vec<DiscretizationSystem>> = OnceLock::new();
    SYSTEMS.get_or_init(build_systems)
}

fn build_systems() -> Vec<DiscretizationSystem> {
    // thirds of the dyadic step left of 1/2, the dyadic step right of it
    let irregular = DiscretizationSystem::explicit(
        (1..=7u32)
            .map(|n| {
                let fine = 3 * 2i64.pow(n);
                let coarse = 2i64.pow(n);
                let mut pts: Vec<Rational> = (0..fine / 2).map(|i| ratio(i, fine)).collect();
                pts.extend((coarse / 2..=coarse).map(|i| ratio(i, coarse)));
                pts
            })
            .collect(),
    )
    .unwrap();
    vec![
        DiscretizationSystem::uniform(2, 8).unwrap(),
        DiscretizationSystem::uniform(3, 5).unwrap(),
        irregular,
    ]
}

/// Occurrences of `w` in `v` by direct comparison at every start.
pub fn naive_occurrences(w: &[i64], v: &[i64]) -> usize {
    if w.len() > v.len() {
        return 0;
    }
    (0..=v.len() - w.len()).filter(|&i| v[i..i + w.len()] == *w).count()
}

/// Least `k ≥ 1` such that `w` occurs at position `k` of `w·u` for some
/// `u` of length `k`. The only candidate `u` is the suffix that would
/// complete the shifted copy, so it is built and the concatenation searched.
pub fn brute_period(w: &[i64]) -> usize {
    (1..=w.len())
        .find(|&k| {
            let mut joined = w.to_vec();
            joined.extend_from_slice(&w[w.len() - k..]);
            naive_occurrences(w, &joined[k..k + w.len()]) == 1
        })
        .unwrap_or(1)
}
