//! Independent oracles shared by the integration tests. Nothing here calls the
//! library's distance, assignment, or update code.

#![allow(dead_code)]

use std::path::PathBuf;

use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture readable")
}

pub fn l1(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]).abs();
    }
    s
}

pub fn l2(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        s += (a[i] - b[i]) * (a[i] - b[i]);
    }
    s.sqrt()
}

/// First index holding the smallest value, by plain linear scan.
pub fn linear_scan_argmin(distances: &[f64]) -> usize {
    let mut best = 0;
    for i in 1..distances.len() {
        if distances[i] < distances[best] {
            best = i;
        }
    }
    best
}

pub fn mean_of(points: &[&Vec<f64>]) -> Vec<f64> {
    let mut m = vec![0.0; points[0].len()];
    for p in points {
        for i in 0..m.len() {
            m[i] += p[i];
        }
    }
    for v in &mut m {
        *v /= points.len() as f64;
    }
    m
}

/// Squared-Euclidean WCSS of a labeling with means recomputed from scratch.
pub fn labeling_wcss(points: &[Vec<f64>], labels: &[usize], k: usize) -> f64 {
    let mut total = 0.0;
    for c in 0..k {
        let members: Vec<&Vec<f64>> = points.iter().zip(labels).filter(|(_, l)| **l == c).map(|(p, _)| p).collect();
        if members.is_empty() {
            continue;
        }
        let m = mean_of(&members);
        for p in members {
            let d = l2(p, &m);
            total += d * d;
        }
    }
    total
}

/// Minimum WCSS over every labeling of `points` into at most `k` groups.
pub fn brute_force_optimum(points: &[Vec<f64>], k: usize) -> f64 {
    let n = points.len();
    let mut labels = vec![0usize; n];
    let mut best = f64::INFINITY;
    loop {
        best = best.min(labeling_wcss(points, &labels, k));
        let mut i = 0;
        loop {
            if i == n {
                return best;
            }
            labels[i] += 1;
            if labels[i] < k {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// Random points with small integer coordinates, so ties and duplicates occur.
pub fn random_points<R: Rng>(rng: &mut R, n: usize, dim: usize, max: u32) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0..=max) as f64).collect())
        .collect()
}

/// Random points with real coordinates.
pub fn random_real_points<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(0.0..300.0)).collect())
        .collect()
}

pub fn distinct_count(points: &[Vec<f64>]) -> usize {
    let mut seen: Vec<&Vec<f64>> = Vec::new();
    for p in points {
        if !seen.contains(&p) {
            seen.push(p);
        }
    }
    seen.len()
}

/// Truncates (not rounds) to two decimals, as the worked example prints.
pub fn truncate2(x: f64) -> String {
    format!("{:.2}", (x * 100.0 + 1e-9).floor() / 100.0)
}

/// Textbook Lloyd iteration: nearest mean (first index on ties), arithmetic
/// mean update, empty clusters frozen, stop when labels repeat.
pub fn oracle_lloyd(points: &[Vec<f64>], init: &[Vec<f64>], manhattan: bool, max_iter: usize) -> (Vec<usize>, Vec<Vec<f64>>) {
    let mut means = init.to_vec();
    let mut labels: Vec<usize> = Vec::new();
    for _ in 0..max_iter {
        let next: Vec<usize> = points
            .iter()
            .map(|p| {
                let d: Vec<f64> = means.iter().map(|m| if manhattan { l1(p, m) } else { l2(p, m) }).collect();
                linear_scan_argmin(&d)
            })
            .collect();
        for (c, mean) in means.iter_mut().enumerate() {
            let members: Vec<&Vec<f64>> = points.iter().zip(&next).filter(|(_, l)| **l == c).map(|(p, _)| p).collect();
            if !members.is_empty() {
                *mean = mean_of(&members);
            }
        }
        if next == labels {
            break;
        }
        labels = next;
    }
    (labels, means)
}
