//! Wigner 3j/6j symbols and Clebsch–Gordan coefficients by Racah's formulas.
//!
//! All angular momenta are passed doubled (`2j`, `2m`) so half-integers stay
//! exact. Arguments are small here (j ≤ 6), so plain f64 factorials suffice.

fn factorial(n: i32) -> f64 {
    debug_assert!(n >= 0);
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn is_int(twice: i32) -> bool {
    twice % 2 == 0
}

fn triangle(a: i32, b: i32, c: i32) -> bool {
    c >= (a - b).abs() && c <= a + b && is_int(a + b + c)
}

fn delta(a: i32, b: i32, c: i32) -> f64 {
    (factorial((a + b - c) / 2) * factorial((a - b + c) / 2) * factorial((-a + b + c) / 2)
        / factorial((a + b + c) / 2 + 1))
    .sqrt()
}

/// Wigner 3j symbol with doubled arguments.
pub fn wigner_3j(j1: i32, j2: i32, j3: i32, m1: i32, m2: i32, m3: i32) -> f64 {
    if m1 + m2 + m3 != 0 || !triangle(j1, j2, j3) {
        return 0.0;
    }
    if m1.abs() > j1 || m2.abs() > j2 || m3.abs() > j3 {
        return 0.0;
    }
    if !is_int(j1 + m1) || !is_int(j2 + m2) || !is_int(j3 + m3) {
        return 0.0;
    }
    let pre = delta(j1, j2, j3)
        * (factorial((j1 + m1) / 2)
            * factorial((j1 - m1) / 2)
            * factorial((j2 + m2) / 2)
            * factorial((j2 - m2) / 2)
            * factorial((j3 + m3) / 2)
            * factorial((j3 - m3) / 2))
        .sqrt();
    // summation bounds: all factorial arguments non-negative
    let k_min = 0.max((j2 - j3 - m1) / 2).max((j1 - j3 + m2) / 2);
    let k_max = ((j1 + j2 - j3) / 2).min((j1 - m1) / 2).min((j2 + m2) / 2);
    let mut sum = 0.0;
    for k in k_min..=k_max {
        let denom = factorial(k)
            * factorial((j3 - j2 + m1) / 2 + k)
            * factorial((j3 - j1 - m2) / 2 + k)
            * factorial((j1 + j2 - j3) / 2 - k)
            * factorial((j1 - m1) / 2 - k)
            * factorial((j2 + m2) / 2 - k);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign / denom;
    }
    let phase = if ((j1 - j2 - m3) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * pre * sum
}

/// ⟨j1 m1; j2 m2 | J M⟩, doubled arguments.
pub fn clebsch_gordan(j1: i32, m1: i32, j2: i32, m2: i32, j: i32, m: i32) -> f64 {
    let phase = if ((j1 - j2 + m) / 2).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    phase * ((j + 1) as f64).sqrt() * wigner_3j(j1, j2, j, m1, m2, -m)
}

/// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}, doubled arguments.
pub fn wigner_6j(j1: i32, j2: i32, j3: i32, j4: i32, j5: i32, j6: i32) -> f64 {
    if !(triangle(j1, j2, j3) && triangle(j1, j5, j6) && triangle(j4, j2, j6) && triangle(j4, j5, j3)) {
        return 0.0;
    }
    let pre = delta(j1, j2, j3) * delta(j1, j5, j6) * delta(j4, j2, j6) * delta(j4, j5, j3);
    let a1 = (j1 + j2 + j3) / 2;
    let a2 = (j1 + j5 + j6) / 2;
    let a3 = (j4 + j2 + j6) / 2;
    let a4 = (j4 + j5 + j3) / 2;
    let b1 = (j1 + j2 + j4 + j5) / 2;
    let b2 = (j2 + j3 + j5 + j6) / 2;
    let b3 = (j3 + j1 + j6 + j4) / 2;
    let t_min = a1.max(a2).max(a3).max(a4);
    let t_max = b1.min(b2).min(b3);
    let mut sum = 0.0;
    for t in t_min..=t_max {
        let sign = if t % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * factorial(t + 1)
            / (factorial(t - a1)
                * factorial(t - a2)
                * factorial(t - a3)
                * factorial(t - a4)
                * factorial(b1 - t)
                * factorial(b2 - t)
                * factorial(b3 - t));
    }
    pre * sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        // ⟨1/2 1/2; 1 -1 | 1/2 -1/2⟩² = 2/3
        let c = clebsch_gordan(1, 1, 2, -2, 1, -1);
        assert!((c * c - 2.0 / 3.0).abs() < 1e-14);
        // ⟨1/2 1/2; 1 0 | 3/2 1/2⟩² = 2/3
        let c = clebsch_gordan(1, 1, 2, 0, 3, 1);
        assert!((c * c - 2.0 / 3.0).abs() < 1e-14);
        assert!((clebsch_gordan(8, 8, 2, 2, 10, 10) - 1.0).abs() < 1e-14);
        assert!((wigner_6j(2, 2, 2, 2, 2, 2) - 1.0 / 6.0).abs() < 1e-14);
        // {1/2 1/2 1; 1/2 1/2 0} = 1/2 · (-1)^{...}: |value| = 1/2
        assert!((wigner_6j(1, 1, 2, 1, 1, 0).abs() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn clebsch_gordan_orthonormality() {
        // Σ_{m1,m2} ⟨j1 m1 j2 m2|J M⟩⟨j1 m1 j2 m2|J' M⟩ = δ_JJ'
        let (j1, j2): (i32, i32) = (7, 1);
        for big_m in (-8..=8).step_by(2) {
            for j in [6, 8] {
                for jp in [6, 8] {
                    let mut s = 0.0;
                    for m1 in (-j1..=j1).step_by(2) {
                        let m2 = big_m - m1;
                        if m2.abs() > j2 {
                            continue;
                        }
                        s += clebsch_gordan(j1, m1, j2, m2, j, big_m) * clebsch_gordan(j1, m1, j2, m2, jp, big_m);
                    }
                    let want = if j == jp && big_m.abs() <= j { 1.0 } else { 0.0 };
                    assert!((s - want).abs() < 1e-13, "J={j} J'={jp} M={big_m}: {s}");
                }
            }
        }
    }

    #[test]
    fn selection_rules_give_zero() {
        assert_eq!(wigner_3j(2, 2, 2, 2, 2, 2), 0.0);
        assert_eq!(wigner_3j(2, 2, 8, 0, 0, 0), 0.0);
    }
}
