use std::f64::consts::PI;

fn g_rastrigin(tail: &[f64]) -> f64 {
    let k = tail.len() as f64;
    let s: f64 = tail
        .iter()
        .map(|x| (x - 0.5).powi(2) - (20.0 * PI * (x - 0.5)).cos())
        .sum();
    100.0 * (k + s)
}

fn g_sphere(tail: &[f64]) -> f64 {
    tail.iter().map(|x| (x - 0.5).powi(2)).sum()
}

pub(super) fn dtlz1(x: &[f64], m: usize) -> Vec<f64> {
    let g = g_rastrigin(&x[m - 1..]);
    (0..m)
        .map(|i| {
            let mut v = 0.5 * (1.0 + g);
            for xj in &x[..m - 1 - i] {
                v *= xj;
            }
            if i > 0 {
                v *= 1.0 - x[m - 1 - i];
            }
            v
        })
        .collect()
}

fn spherical(angles: &[f64], m: usize, g: f64) -> Vec<f64> {
    (0..m)
        .map(|i| {
            let mut v = 1.0 + g;
            for a in &angles[..m - 1 - i] {
                v *= (a * PI / 2.0).cos();
            }
            if i > 0 {
                v *= (angles[m - 1 - i] * PI / 2.0).sin();
            }
            v
        })
        .collect()
}

pub(super) fn dtlz2(x: &[f64], m: usize) -> Vec<f64> {
    spherical(&x[..m - 1], m, g_sphere(&x[m - 1..]))
}

pub(super) fn dtlz3(x: &[f64], m: usize) -> Vec<f64> {
    spherical(&x[..m - 1], m, g_rastrigin(&x[m - 1..]))
}

pub(super) fn dtlz4(x: &[f64], m: usize) -> Vec<f64> {
    const ALPHA: i32 = 100;
    let angles: Vec<f64> = x[..m - 1].iter().map(|v| v.powi(ALPHA)).collect();
    spherical(&angles, m, g_sphere(&x[m - 1..]))
}
