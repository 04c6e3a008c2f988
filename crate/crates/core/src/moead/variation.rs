//! Real-coded variation: simulated binary crossover and bounded polynomial
//! mutation.

use rand::Rng;

/// SBX spread factor for a uniform draw `u` in [0, 1).
pub fn sbx_spread_factor(u: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(exponent)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(exponent)
    }
}

/// The two SBX children of one variable for spread factor `beta`, before
/// clipping. Their midpoint is the parents' midpoint.
pub fn sbx_children(p1: f64, p2: f64, beta: f64) -> (f64, f64) {
    let mid = 0.5 * (p1 + p2);
    let half = 0.5 * beta * (p1 - p2);
    (mid + half, mid - half)
}

/// Simulated binary crossover with distribution index `eta`.
///
/// With probability `prob` the crossover fires; each variable is then
/// recombined with probability 0.5, with a random sign on the spread
/// factor. Children are clipped to `[lower, upper]`.
pub fn sbx_crossover<R: Rng + ?Sized>(
    p1: &[f64],
    p2: &[f64],
    lower: &[f64],
    upper: &[f64],
    eta: f64,
    prob: f64,
    rng: &mut R,
) -> (Vec<f64>, Vec<f64>) {
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.random::<f64>() >= prob {
        return (c1, c2);
    }
    for i in 0..p1.len() {
        let u: f64 = rng.random();
        let flip: bool = rng.random();
        let recombine = rng.random::<f64>() < 0.5;
        if !recombine {
            continue;
        }
        let mut beta = sbx_spread_factor(u, eta);
        if flip {
            beta = -beta;
        }
        let (a, b) = sbx_children(p1[i], p2[i], beta);
        c1[i] = a.clamp(lower[i], upper[i]);
        c2[i] = b.clamp(lower[i], upper[i]);
    }
    (c1, c2)
}

/// Bounded polynomial perturbation of one variable for a uniform draw `u`.
pub fn polynomial_perturbation(x: f64, lower: f64, upper: f64, u: f64, eta: f64) -> f64 {
    let range = upper - lower;
    if range <= 0.0 {
        return x;
    }
    let d1 = (x - lower) / range;
    let d2 = (upper - x) / range;
    let pow = 1.0 / (eta + 1.0);
    let dq = if u < 0.5 {
        let xy = 1.0 - d1;
        let val = 2.0 * u + (1.0 - 2.0 * u) * xy.powf(eta + 1.0);
        val.powf(pow) - 1.0
    } else {
        let xy = 1.0 - d2;
        let val = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * xy.powf(eta + 1.0);
        1.0 - val.powf(pow)
    };
    (x + dq * range).clamp(lower, upper)
}

/// Polynomial mutation: each variable is perturbed independently with
/// probability `prob`.
pub fn polynomial_mutation<R: Rng + ?Sized>(
    x: &[f64],
    lower: &[f64],
    upper: &[f64],
    eta: f64,
    prob: f64,
    rng: &mut R,
) -> Vec<f64> {
    x.iter()
        .enumerate()
        .map(|(i, &v)| {
            if rng.random::<f64>() < prob {
                let u: f64 = rng.random();
                polynomial_perturbation(v, lower[i], upper[i], u, eta)
            } else {
                v
            }
        })
        .collect()
}
