mod common;

use std::f64::consts::PI;

use nanofiber::fiber::{Direction, FiberSpec, LightField, Position};
use nanofiber::light_matter::ellipticity;
use proptest::prelude::*;

fn beam(nm: f64, angle: f64) -> LightField {
    let mode = FiberSpec::silica(250e-9).unwrap().solve_he11(nm * 1e-9).unwrap();
    LightField::running(mode, 1.0, angle, Direction::Forward).unwrap()
}

#[test]
fn unit_power_from_curl() {
    for nm in [783.0, 852.0, 1064.0] {
        let p = common::guided_power(&beam(nm, 0.3)).abs();
        assert!((p - 1.0).abs() < 1e-6, "{nm} nm: {p}");
    }
}

#[test]
fn boundary_conditions() {
    for nm in [783.0, 852.0, 1064.0] {
        let f = beam(nm, 0.0);
        let a = f.mode.radius;
        let (n1, n2) = (f.mode.core_index, f.mode.exterior_index);
        for phi in [0.1, 0.9, 2.0, 4.0] {
            let inside = f.field_at(Position::new(a * (1.0 - 1e-12), phi, 0.0)).unwrap();
            let outside = f.field_at(Position::new(a * (1.0 + 1e-12), phi, 0.0)).unwrap();
            let (s, c) = phi.sin_cos();
            let radial = |e: &nanofiber::fiber::ComplexVector| e.x * c + e.y * s;
            let azimuthal = |e: &nanofiber::fiber::ComplexVector| -e.x * s + e.y * c;
            let scale = outside.norm();
            assert!((azimuthal(&inside) - azimuthal(&outside)).norm() < 1e-9 * scale);
            assert!((inside.z - outside.z).norm() < 1e-9 * scale);
            let d = radial(&inside) * n1 * n1 - radial(&outside) * n2 * n2;
            assert!(d.norm() < 1e-9 * scale, "{nm} nm φ={phi}: {d}");
        }
    }
}

#[test]
fn divergence_free() {
    let f = beam(852.0, 0.4);
    let a = f.mode.radius;
    let k = 2.0 * PI / f.wavelength();
    let h = 1e-10;
    let e = |x: f64, y: f64, z: f64| f.field_at(Position::from_cartesian([x, y, z])).unwrap();
    for (r, phi) in [(0.3 * a, 0.7f64), (0.8 * a, 2.5), (1.2 * a, 0.2), (2.0 * a, 4.0)] {
        let (x, y) = (r * phi.cos(), r * phi.sin());
        let d = |g: &dyn Fn(f64) -> nanofiber::fiber::ComplexVector| {
            (g(h) - g(-h)) / num_complex::Complex64::new(2.0 * h, 0.0)
        };
        let div = d(&|t| e(x + t, y, 0.0)).x + d(&|t| e(x, y + t, 0.0)).y + d(&|t| e(x, y, t)).z;
        let scale = k * e(x, y, 0.0).norm();
        assert!(div.norm() < 1e-5 * scale, "r = {r:e}: {div}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ellipticity_flips_across_fiber(nm in 700.0f64..1100.0, height in 20e-9f64..800e-9, phi in 0.0f64..(2.0 * PI)) {
        let f = beam(nm, 0.0);
        let r = f.mode.radius + height;
        let here = f.field_at(Position::new(r, phi, 0.0)).unwrap();
        let there = f.field_at(Position::new(r, phi + PI, 0.0)).unwrap();
        if let (Ok(a), Ok(b)) = (ellipticity(&here), ellipticity(&there)) {
            prop_assert!((a + b).norm() < 1e-12, "{a:?} {b:?}");
        }
    }

    #[test]
    fn ellipticity_is_bounded(nm in 700.0f64..1100.0, r in 1e-9f64..1e-6, phi in 0.0f64..(2.0 * PI), angle in 0.0f64..PI) {
        let f = beam(nm, angle);
        if let Ok(eps) = ellipticity(&f.field_at(Position::new(r, phi, 0.0)).unwrap()) {
            prop_assert!(eps.norm() <= 1.0 + 1e-12);
        }
    }
}
