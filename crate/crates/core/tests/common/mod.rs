//! Independent reference computations shared by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use nanofiber::fiber::{ComplexVector, LightField, Position};
use num_complex::Complex64;

const C: f64 = 299_792_458.0;
const MU0: f64 = 1.256_637_062_12e-6;

pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    #[allow(clippy::too_many_arguments)]
    fn step<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Fourth-order derivative; `side` 0 is central, ±1 one-sided toward ±x.
fn deriv<F: Fn(f64) -> ComplexVector>(f: F, x: f64, h: f64, side: i32) -> ComplexVector {
    let c = |v: f64| Complex64::new(v, 0.0);
    if side == 0 {
        return (f(x - 2.0 * h) - f(x - h) * c(8.0) + f(x + h) * c(8.0) - f(x + 2.0 * h)) / c(12.0 * h);
    }
    let s = side as f64 * h;
    let sum = f(x) * c(-25.0) + f(x + s) * c(48.0) - f(x + 2.0 * s) * c(36.0) + f(x + 3.0 * s) * c(16.0)
        - f(x + 4.0 * s) * c(3.0);
    sum / c(12.0 * s)
}

/// Axial Poynting flux ½Re(E×H*)·ẑ with H from a finite-difference curl of E.
/// `inside` selects which side of the surface the radial stencil may use.
fn flux(field: &LightField, r: f64, phi: f64, inside: bool) -> f64 {
    let a = field.mode.radius;
    let e = |r: f64, phi: f64, z: f64| field.field_at(Position::new(r, phi, z)).unwrap();
    let h = 1e-3 * a;
    let side = match (inside, r + 2.0 * h < a, r - 2.0 * h > a) {
        (true, true, _) if r > 2.0 * h => 0,
        (true, true, _) => 1,
        (true, false, _) => -1,
        (false, _, true) => 0,
        (false, _, false) => 1,
    };
    let dr = deriv(|x| e(x, phi, 0.0), r, h, side);
    let dphi = deriv(|x| e(r, x, 0.0), phi, 1e-3, 0);
    let dz = deriv(|x| e(r, phi, x), 0.0, field.wavelength() * 1e-3, 0);
    let (s, c) = phi.sin_cos();
    let dx_ez = dr.z * c - dphi.z * s / r;
    let dy_ez = dr.z * s + dphi.z * c / r;
    let omega = 2.0 * PI * C / field.wavelength();
    let k = Complex64::new(0.0, omega * MU0);
    let hx = (dy_ez - dz.y) / k;
    let hy = (dz.x - dx_ez) / k;
    let e0 = e(r, phi, 0.0);
    0.5 * (e0.x * hy.conj() - e0.y * hx.conj()).re
}

/// Guided power of `field` integrated over the whole cross-section.
pub fn guided_power(field: &LightField) -> f64 {
    let a = field.mode.radius;
    let n_phi = 16;
    let ring = |r: f64, inside: bool| -> f64 {
        if r == 0.0 {
            return 0.0;
        }
        let r = if inside { r.min(a * (1.0 - 1e-13)) } else { r.max(a * (1.0 + 1e-13)) };
        let sum: f64 = (0..n_phi).map(|j| flux(field, r, 2.0 * PI * (j as f64 + 0.5) / n_phi as f64, inside)).sum();
        r * sum * 2.0 * PI / n_phi as f64
    };
    let scale = ring(0.5 * a, true).abs() * a;
    let inner = adaptive_simpson(&|r| ring(r, true), 0.0, a, 1e-10 * scale);
    let outer = adaptive_simpson(&|r| ring(r, false), a, a + 10e-6, 1e-10 * scale);
    inner + outer
}
