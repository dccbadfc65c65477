//! Bessel functions of integer order for real arguments.
//!
//! `J_n` uses its power series for `|x| <= 1` and Miller's backward recurrence,
//! normalized with `J_0 + 2 Σ J_2k = 1`, everywhere else. `K_0` and `K_1` use
//! their logarithmic series up to `x = 2` and Steed's continued fraction above;
//! higher orders follow from the upward recurrence, which is stable for `K`.

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT_J: f64 = 1.0;
const SERIES_LIMIT_K: f64 = 2.0;

/// Bessel function of the first kind `J_n(x)`.
pub fn bessel_j(order: u32, x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x < 0.0 {
        let v = bessel_j(order, -x);
        return if order.is_multiple_of(2) { v } else { -v };
    }
    if x == 0.0 {
        return if order == 0 { 1.0 } else { 0.0 };
    }
    if x <= SERIES_LIMIT_J {
        return j_series(order, x);
    }
    j_miller(order, x)
}

fn j_series(order: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=order {
        term *= half / k as f64;
    }
    let q = -half * half;
    let mut sum = term;
    let n = order as f64;
    for k in 1..60 {
        let k = k as f64;
        term *= q / (k * (k + n));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    sum
}

fn j_miller(order: u32, x: f64) -> f64 {
    // Start well above both the order and the argument; the recurrence loses
    // the dominant Y_n contamination at a rate ~ (x / 2k)^k.
    let start = {
        let m = (x.max(order as f64) + 30.0 + 6.0 * x.sqrt()).ceil() as u32;
        m + (m % 2)
    };
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-30; // J_k
    let mut norm = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let prev = k as f64 * two_over_x * cur - next; // J_{k-1}
        next = cur;
        cur = prev;
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
        let idx = k - 1;
        if idx == order {
            wanted = cur;
        }
        if idx % 2 == 0 && idx > 0 {
            norm += 2.0 * cur;
        }
    }
    norm += cur;
    wanted / norm
}

/// Derivative `J_n'(x)` from the standard recurrences.
pub fn bessel_j_prime(order: u32, x: f64) -> f64 {
    if order == 0 {
        -bessel_j(1, x)
    } else {
        0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x))
    }
}

/// Modified Bessel function of the second kind `K_n(x)`, `x > 0`.
pub fn bessel_k(order: u32, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("bessel_k requires finite x > 0, got {x}")));
    }
    let (k0, k1) = k0_k1(x);
    Ok(k_upward(order, x, k0, k1))
}

/// `K_{n-1}`, `K_n`, `K_{n+1}` in one pass, used by the mode solver.
pub(crate) fn bessel_k_triple(order: u32, x: f64) -> [f64; 3] {
    let (k0, k1) = k0_k1(x);
    let lower = if order == 0 { k1 } else { k_upward(order - 1, x, k0, k1) };
    [lower, k_upward(order, x, k0, k1), k_upward(order + 1, x, k0, k1)]
}

/// Derivative `K_n'(x)`.
pub fn bessel_k_prime(order: u32, x: f64) -> Result<f64> {
    if order == 0 {
        return Ok(-bessel_k(1, x)?);
    }
    Ok(-0.5 * (bessel_k(order - 1, x)? + bessel_k(order + 1, x)?))
}

fn k_upward(order: u32, x: f64, k0: f64, k1: f64) -> f64 {
    match order {
        0 => k0,
        1 => k1,
        _ => {
            let (mut km, mut k) = (k0, k1);
            for n in 1..order {
                let kp = km + 2.0 * n as f64 / x * k;
                km = k;
                k = kp;
            }
            k
        }
    }
}

fn k0_k1(x: f64) -> (f64, f64) {
    if x <= SERIES_LIMIT_K {
        k0_k1_series(x)
    } else {
        k0_k1_steed(x)
    }
}

fn k0_k1_series(x: f64) -> (f64, f64) {
    let y = 0.25 * x * x;
    let log_term = (0.5 * x).ln();

    // I0, I1 and the harmonic-number sums share the same (y^k / k!^2) weights.
    let mut i0 = 1.0;
    let mut i1 = 0.5 * x;
    let mut k0_sum = 0.0;
    let mut k1_sum = 0.0;
    let mut w0 = 1.0; // y^k / (k!)^2
    let mut w1 = 1.0; // y^k / (k! (k+1)!)
    let mut harmonic = 0.0;
    // k = 0 term of the K1 sum: psi(1) + psi(2) = -2γ + 1
    k1_sum += (-2.0 * EULER_GAMMA + 1.0) * w1;
    for k in 1..80 {
        let kf = k as f64;
        w0 *= y / (kf * kf);
        w1 *= y / (kf * (kf + 1.0));
        harmonic += 1.0 / kf;
        let harmonic_next = harmonic + 1.0 / (kf + 1.0);
        i0 += w0;
        i1 += 0.5 * x * w1;
        k0_sum += harmonic * w0;
        k1_sum += (-2.0 * EULER_GAMMA + harmonic + harmonic_next) * w1;
        if w0 < 1e-18 && w1 < 1e-18 {
            break;
        }
    }
    let k0 = -(log_term + EULER_GAMMA) * i0 + k0_sum;
    let k1 = 1.0 / x + log_term * i1 - 0.25 * x * k1_sum;
    (k0, k1)
}

fn k0_k1_steed(x: f64) -> (f64, f64) {
    // Steed's algorithm for the continued fraction CF2 (Temme's normalization),
    // specialised to order zero.
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 1..10_000 {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (std::f64::consts::PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exponentially convergent trapezoid rule on the periodic Bessel integral
    /// J_n(x) = (1/π) ∫_0^π cos(nτ − x sin τ) dτ.
    fn j_oracle(n: u32, x: f64) -> f64 {
        let m = 400;
        let h = std::f64::consts::PI / m as f64;
        let mut s = 0.0;
        for i in 0..=m {
            let t = i as f64 * h;
            let w = if i == 0 || i == m { 0.5 } else { 1.0 };
            s += w * (n as f64 * t - x * t.sin()).cos();
        }
        s * h / std::f64::consts::PI
    }

    /// K_n(x) = ∫_0^∞ exp(−x cosh t) cosh(n t) dt, trapezoid on a truncated range.
    fn k_oracle(n: u32, x: f64) -> f64 {
        let upper = (800.0 / x).acosh() + 1.0;
        let m = 20_000;
        let h = upper / m as f64;
        let mut s = 0.0;
        for i in 0..=m {
            let t = i as f64 * h;
            let w = if i == 0 || i == m { 0.5 } else { 1.0 };
            s += w * (-x * t.cosh() + n as f64 * t).exp() * 0.5 + w * (-x * t.cosh() - n as f64 * t).exp() * 0.5;
        }
        s * h
    }

    #[test]
    fn j_origin_and_known_values() {
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
        assert!((bessel_j(1, 1.0) - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!(bessel_j(0, 2.404_825_557_695_773).abs() < 1e-14);
    }

    #[test]
    fn j_matches_integral_oracle() {
        for n in 0..=5 {
            let mut x = 0.05;
            while x <= 50.0 {
                let got = bessel_j(n, x);
                let want = j_oracle(n, x);
                let scale = want.abs().max(1e-3);
                assert!((got - want).abs() <= 1e-10 * scale, "J_{n}({x}): {got} vs {want}");
                x += 0.37;
            }
        }
    }

    #[test]
    fn k_matches_integral_oracle() {
        for n in 0..=5 {
            for &x in &[1e-3, 0.01, 0.3, 1.0, 1.999, 2.0, 2.001, 3.7, 9.0, 20.0, 49.5] {
                let got = bessel_k(n, x).unwrap();
                let want = k_oracle(n, x);
                assert!(((got - want) / want).abs() <= 1e-10, "K_{n}({x}): {got} vs {want}");
            }
        }
    }

    #[test]
    fn k_rejects_non_positive() {
        assert!(bessel_k(0, 0.0).is_err());
        assert!(bessel_k(1, -1.0).is_err());
    }

    #[test]
    fn negative_argument_parity() {
        assert_eq!(bessel_j(1, -2.0), -bessel_j(1, 2.0));
        assert_eq!(bessel_j(2, -2.0), bessel_j(2, 2.0));
    }
}
