//! The WFG toolkit problems, built from their transformation and shape
//! functions. `k` position parameters come first, then `l` distance
//! parameters.

use std::f64::consts::PI;

use super::ProblemName;

const EPS: f64 = 1e-10;

fn correct_to_01(a: f64) -> f64 {
    if a <= 0.0 && a >= -EPS {
        0.0
    } else if a >= 1.0 && a <= 1.0 + EPS {
        1.0
    } else {
        a
    }
}

pub(crate) fn s_linear(y: f64, a: f64) -> f64 {
    correct_to_01((y - a).abs() / ((a - y).floor() + a).abs())
}

pub(crate) fn s_deceptive(y: f64, a: f64, b: f64, c: f64) -> f64 {
    let t1 = (y - a + b).floor() * (1.0 - c + (a - b) / b) / (a - b);
    let t2 = (a + b - y).floor() * (1.0 - c + (1.0 - a - b) / b) / (1.0 - a - b);
    correct_to_01(1.0 + ((y - a).abs() - b) * (t1 + t2 + 1.0 / b))
}

pub(crate) fn s_multi(y: f64, a: f64, b: f64, c: f64) -> f64 {
    let t1 = (y - c).abs() / (2.0 * ((c - y).floor() + c));
    let t2 = (4.0 * a + 2.0) * PI * (0.5 - t1);
    correct_to_01((1.0 + t2.cos() + 4.0 * b * t1 * t1) / (b + 2.0))
}

pub(crate) fn b_flat(y: f64, a: f64, b: f64, c: f64) -> f64 {
    let t1 = (y - b).floor().min(0.0) * a * (b - y) / b;
    let t2 = (c - y).floor().min(0.0) * (1.0 - a) * (y - c) / (1.0 - c);
    correct_to_01(a + t1 - t2)
}

pub(crate) fn b_poly(y: f64, alpha: f64) -> f64 {
    correct_to_01(y.powf(alpha))
}

pub(crate) fn b_param(y: f64, u: f64, a: f64, b: f64, c: f64) -> f64 {
    let v = a - (1.0 - 2.0 * u) * ((0.5 - u).floor() + a).abs();
    correct_to_01(y.powf(b + (c - b) * v))
}

pub(crate) fn r_sum(y: &[f64], w: &[f64]) -> f64 {
    let num: f64 = y.iter().zip(w).map(|(a, b)| a * b).sum();
    let den: f64 = w.iter().sum();
    correct_to_01(num / den)
}

fn r_sum_uniform(y: &[f64]) -> f64 {
    correct_to_01(y.iter().sum::<f64>() / y.len() as f64)
}

pub(crate) fn r_nonsep(y: &[f64], a: usize) -> f64 {
    let n = y.len();
    let mut num = 0.0;
    for j in 0..n {
        num += y[j];
        for k in 0..a.saturating_sub(1) {
            num += (y[j] - y[(1 + j + k) % n]).abs();
        }
    }
    let half = a.div_ceil(2) as f64;
    let a = a as f64;
    let den = n as f64 * half * (1.0 + 2.0 * a - 2.0 * half) / a;
    correct_to_01(num / den)
}

// Shape functions. `x` holds the M - 1 position values; `m` is 1-based.

fn linear(x: &[f64], m: usize) -> f64 {
    let big_m = x.len() + 1;
    let mut r: f64 = x[..big_m - m].iter().product();
    if m != 1 {
        r *= 1.0 - x[big_m - m];
    }
    correct_to_01(r)
}

fn convex(x: &[f64], m: usize) -> f64 {
    let big_m = x.len() + 1;
    let mut r: f64 = x[..big_m - m]
        .iter()
        .map(|v| 1.0 - (v * PI / 2.0).cos())
        .product();
    if m != 1 {
        r *= 1.0 - (x[big_m - m] * PI / 2.0).sin();
    }
    correct_to_01(r)
}

fn concave(x: &[f64], m: usize) -> f64 {
    let big_m = x.len() + 1;
    let mut r: f64 = x[..big_m - m].iter().map(|v| (v * PI / 2.0).sin()).product();
    if m != 1 {
        r *= (x[big_m - m] * PI / 2.0).cos();
    }
    correct_to_01(r)
}

fn mixed(x: &[f64], a: f64, alpha: f64) -> f64 {
    let t = 2.0 * a * PI;
    correct_to_01((1.0 - x[0] - (t * x[0] + PI / 2.0).cos() / t).powf(alpha))
}

fn disc(x: &[f64], a: f64, alpha: f64, beta: f64) -> f64 {
    let c = (a * x[0].powf(beta) * PI).cos();
    correct_to_01(1.0 - x[0].powf(alpha) * c * c)
}

/// Reduces `y` (length k + l') to M values: M-1 position groups of equal
/// size, then one distance group.
fn reduce_sum(y: &[f64], k: usize, m: usize, weighted: bool) -> Vec<f64> {
    let group = k / (m - 1);
    let weight = |idx: usize| if weighted { 2.0 * (idx + 1) as f64 } else { 1.0 };
    let mut t = Vec::with_capacity(m);
    for i in 0..m - 1 {
        let range = i * group..(i + 1) * group;
        let w: Vec<f64> = range.clone().map(weight).collect();
        t.push(r_sum(&y[range], &w));
    }
    let w: Vec<f64> = (k..y.len()).map(weight).collect();
    t.push(r_sum(&y[k..], &w));
    t
}

fn reduce_nonsep(y: &[f64], k: usize, m: usize) -> Vec<f64> {
    let group = k / (m - 1);
    let mut t = Vec::with_capacity(m);
    for i in 0..m - 1 {
        t.push(r_nonsep(&y[i * group..(i + 1) * group], group));
    }
    t.push(r_nonsep(&y[k..], y.len() - k));
    t
}

fn underlying(t: &[f64], degenerate: bool) -> Vec<f64> {
    let m = t.len();
    let last = t[m - 1];
    let mut x = Vec::with_capacity(m);
    for (i, ti) in t[..m - 1].iter().enumerate() {
        let a = if degenerate && i > 0 { 0.0 } else { 1.0 };
        x.push(last.max(a) * (ti - 0.5) + 0.5);
    }
    x.push(last);
    x
}

fn objectives(x: &[f64], shape: impl Fn(&[f64], usize) -> f64) -> Vec<f64> {
    let m = x.len();
    let dist = x[m - 1];
    (1..=m).map(|i| dist + 2.0 * i as f64 * shape(x, i)).collect()
}

pub(super) fn evaluate(name: ProblemName, z: &[f64], m: usize, k: usize) -> Vec<f64> {
    let n = z.len();
    let y: Vec<f64> = z
        .iter()
        .enumerate()
        .map(|(i, v)| v / (2.0 * (i + 1) as f64))
        .collect();

    let linear_distance = |y: &[f64]| -> Vec<f64> {
        y.iter()
            .enumerate()
            .map(|(i, &v)| if i < k { v } else { s_linear(v, 0.35) })
            .collect()
    };
    // WFG2/3 pairwise non-separable reduction of the distance parameters.
    let pair_distance = |y: &[f64]| -> Vec<f64> {
        let mut out = y[..k].to_vec();
        for pair in y[k..].chunks(2) {
            out.push(r_nonsep(pair, 2));
        }
        out
    };

    match name {
        ProblemName::Wfg1 => {
            let y = linear_distance(&y);
            let y: Vec<f64> = y
                .iter()
                .enumerate()
                .map(|(i, &v)| if i < k { v } else { b_flat(v, 0.8, 0.75, 0.85) })
                .collect();
            let y: Vec<f64> = y.iter().map(|&v| b_poly(v, 0.02)).collect();
            let x = underlying(&reduce_sum(&y, k, m, true), false);
            objectives(&x, |x, i| {
                let pos = &x[..x.len() - 1];
                if i < m {
                    convex(pos, i)
                } else {
                    mixed(pos, 5.0, 1.0)
                }
            })
        }
        ProblemName::Wfg2 | ProblemName::Wfg3 => {
            let y = pair_distance(&linear_distance(&y));
            let degenerate = name == ProblemName::Wfg3;
            let x = underlying(&reduce_sum(&y, k, m, false), degenerate);
            objectives(&x, |x, i| {
                let pos = &x[..x.len() - 1];
                if degenerate {
                    linear(pos, i)
                } else if i < m {
                    convex(pos, i)
                } else {
                    disc(pos, 5.0, 1.0, 1.0)
                }
            })
        }
        ProblemName::Wfg4 => {
            let y: Vec<f64> = y.iter().map(|&v| s_multi(v, 30.0, 10.0, 0.35)).collect();
            concave_front(&reduce_sum(&y, k, m, false))
        }
        ProblemName::Wfg5 => {
            let y: Vec<f64> = y
                .iter()
                .map(|&v| s_deceptive(v, 0.35, 0.001, 0.05))
                .collect();
            concave_front(&reduce_sum(&y, k, m, false))
        }
        ProblemName::Wfg6 => {
            let y = linear_distance(&y);
            concave_front(&reduce_nonsep(&y, k, m))
        }
        ProblemName::Wfg7 => {
            let biased: Vec<f64> = (0..n)
                .map(|i| {
                    if i < k {
                        b_param(y[i], r_sum_uniform(&y[i + 1..]), 0.98 / 49.98, 0.02, 50.0)
                    } else {
                        y[i]
                    }
                })
                .collect();
            concave_front(&reduce_sum(&linear_distance(&biased), k, m, false))
        }
        ProblemName::Wfg8 => {
            let biased: Vec<f64> = (0..n)
                .map(|i| {
                    if i < k {
                        y[i]
                    } else {
                        b_param(y[i], r_sum_uniform(&y[..i]), 0.98 / 49.98, 0.02, 50.0)
                    }
                })
                .collect();
            concave_front(&reduce_sum(&linear_distance(&biased), k, m, false))
        }
        ProblemName::Wfg9 => {
            let biased: Vec<f64> = (0..n)
                .map(|i| {
                    if i + 1 < n {
                        b_param(y[i], r_sum_uniform(&y[i + 1..]), 0.98 / 49.98, 0.02, 50.0)
                    } else {
                        y[i]
                    }
                })
                .collect();
            let shifted: Vec<f64> = biased
                .iter()
                .enumerate()
                .map(|(i, &v)| {
                    if i < k {
                        s_deceptive(v, 0.35, 0.001, 0.05)
                    } else {
                        s_multi(v, 30.0, 95.0, 0.35)
                    }
                })
                .collect();
            concave_front(&reduce_nonsep(&shifted, k, m))
        }
        _ => unreachable!("not a WFG problem: {name}"),
    }
}

fn concave_front(t: &[f64]) -> Vec<f64> {
    let x = underlying(t, false);
    objectives(&x, |x, i| concave(&x[..x.len() - 1], i))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Frozen from an independent implementation of the WFG toolkit.
    const TRANSFORMS: &[(&str, &[f64])] = &[
        ("s_linear", &[1.0, 0.7142857142857143, 0.0028571428571428597, 0.0, 0.23076923076923078, 0.6, 0.6307692307692307, 0.7538461538461538, 0.7846153846153846, 0.9984615384615385, 1.0]),
        ("s_deceptive", &[0.050000000000029354, 0.3222063037249494, 1.0, 0.0, 0.7818952234206376, 0.43058551617871166, 0.40130970724188453, 0.2842064714945759, 0.25493066255774877, 0.05146379044679994, 0.04999999999995863]),
        ("s_multi", &[1.0, 0.48995999019751785, 0.012189260998726132, 0.0, 0.046800213439347815, 0.40908474953124685, 0.40885528539085736, 0.4736673341545053, 0.5207782214084123, 0.9938422534871562, 1.0]),
        ("s_multi95", &[1.0, 0.5076996579499559, 0.0015151031910900414, 0.0, 0.05245597711553696, 0.36607234014819545, 0.39922884882405046, 0.556578866202973, 0.6038881371936962, 0.9965440181828801, 1.0]),
        ("b_flat", &[0.0, 0.10666666666666669, 0.3722666666666667, 0.3733333333333333, 0.5333333333333334, 0.7893333333333333, 0.8, 0.8, 0.8133333333333334, 0.9986666666666666, 1.0]),
        ("b_poly", &[0.0, 0.954992586021436, 0.9791664141026407, 0.9792224481569406, 0.9862327044933592, 0.9939959946551351, 0.9945262986810341, 0.996519005017067, 0.9969880871431024, 0.9999799901935271, 1.0]),
        ("b_param", &[0.0, 0.0, 0.0, 0.0, 0.0, 0.954992586021436, 0.38725764492161724, 0.10000000000000003, 2.5118864315096365e-21, 1.0000000000000027e-50, 0.9791664141026407, 0.6481030658800938, 0.34900000000000003, 3.821235425992503e-10, 1.3844311038005694e-23, 0.9792224481569406, 0.648867518216738, 0.35000000000000003, 4.0532343415945463e-10, 1.5973578394644918e-23, 0.9862327044933592, 0.7515807390327813, 0.5, 6.291904023994935e-07, 8.881784197001252e-16, 0.9939959946551351, 0.88333099289442, 0.74, 0.0020238271905829324, 2.8945828626897365e-07, 0.9945262986810341, 0.8930899454145964, 0.76, 0.0035055809564645047, 1.098195384290063e-06, 0.996519005017067, 0.93068575322039, 0.84, 0.027552010347276657, 0.0001636681988555372, 0.9969880871431024, 0.9397522234203076, 0.86, 0.044737127533122346, 0.0005307897921650072, 0.9999799901935271, 0.9995878788078414, 0.999, 0.9796006338330496, 0.9512056281970312, 1.0, 1.0, 1.0, 1.0, 1.0]),
    ];
    const NONSEP_INPUT: [f64; 6] = [0.1, 0.9, 0.35, 0.6, 0.2, 0.75];
    const NONSEP: &[(usize, f64)] = &[(1, 0.4833333333333334), (2, 0.6777777777777778), (3, 0.6), (6, 0.7000000000000002)];
    const WSUM: f64 = 0.5166666666666666;

    const YS: [f64; 11] = [0.0, 0.1, 0.349, 0.35, 0.5, 0.74, 0.76, 0.84, 0.86, 0.999, 1.0];
    const US: [f64; 5] = [0.0, 0.2, 0.5, 0.7, 1.0];

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn single_variable_transformations() {
        for &(name, expected) in TRANSFORMS {
            let got: Vec<f64> = match name {
                "s_linear" => YS.iter().map(|&y| s_linear(y, 0.35)).collect(),
                "s_deceptive" => YS.iter().map(|&y| s_deceptive(y, 0.35, 0.001, 0.05)).collect(),
                "s_multi" => YS.iter().map(|&y| s_multi(y, 30.0, 10.0, 0.35)).collect(),
                "s_multi95" => YS.iter().map(|&y| s_multi(y, 30.0, 95.0, 0.35)).collect(),
                "b_flat" => YS.iter().map(|&y| b_flat(y, 0.8, 0.75, 0.85)).collect(),
                "b_poly" => YS.iter().map(|&y| b_poly(y, 0.02)).collect(),
                "b_param" => YS
                    .iter()
                    .flat_map(|&y| US.iter().map(move |&u| b_param(y, u, 0.98 / 49.98, 0.02, 50.0)))
                    .collect(),
                other => panic!("unknown transformation {other}"),
            };
            assert_eq!(got.len(), expected.len());
            for (i, (g, e)) in got.iter().zip(expected.iter()).enumerate() {
                assert!(close(*g, *e), "{name}[{i}]: got {g}, want {e}");
            }
        }
    }

    #[test]
    fn reductions() {
        for &(a, expected) in NONSEP {
            assert!(close(r_nonsep(&NONSEP_INPUT, a), expected), "r_nonsep A={a}");
        }
        let w = [2.0, 4.0, 6.0, 8.0, 10.0, 12.0];
        assert!(close(r_sum(&NONSEP_INPUT, &w), WSUM));
    }
}
