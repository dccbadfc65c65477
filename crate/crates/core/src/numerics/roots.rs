use crate::error::{Error, Result};

/// Brent's method on a sign-changing bracket.
///
/// Returns `x` with the final bracket no wider than `tol` (plus a few ulps of
/// `x`). Endpoint order does not matter; a zero at either endpoint is returned
/// as is.
pub fn find_root<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    if !(tol > 0.0) {
        return Err(Error::domain(format!("find_root tolerance must be > 0, got {tol}")));
    }
    let eval = |f: &mut F, x: f64| {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation(format!("f({x}) = {v}")))
        }
    };

    let (mut a, mut b) = (lo, hi);
    let mut fa = eval(&mut f, a)?;
    let mut fb = eval(&mut f, b)?;
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Bracket { lo, hi, f_lo: fa, f_hi: fb });
    }

    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..1000 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * tol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation, or secant when only two points
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = eval(&mut f, b)?;
    }
    Err(Error::Evaluation(format!("find_root did not converge on [{lo}, {hi}]")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::bessel_j;

    #[test]
    fn known_zeros() {
        let x = find_root(f64::cos, 1.0, 2.0, 1e-12).unwrap();
        assert!((x - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
        let x = find_root(|x| x * x - 2.0, 0.0, 2.0, 1e-12).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-12);
        let x = find_root(|x| bessel_j(0, x), 2.0, 3.0, 1e-9).unwrap();
        assert!((x - 2.404_826).abs() < 1e-6);
    }

    #[test]
    fn errors() {
        assert!(matches!(find_root(|x| x * x + 1.0, -1.0, 1.0, 1e-9), Err(Error::Bracket { .. })));
        assert!(matches!(
            find_root(|x| if x > 0.5 { f64::NAN } else { x - 0.7 }, 0.0, 1.0, 1e-9),
            Err(Error::Evaluation(_))
        ));
        assert!(find_root(|x| x, -1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn endpoint_zero_and_reversed_bracket() {
        assert_eq!(find_root(|x| x - 1.0, 1.0, 3.0, 1e-9).unwrap(), 1.0);
        let x = find_root(|x| x * x - 2.0, 2.0, 0.0, 1e-12).unwrap();
        assert!((x - 2f64.sqrt()).abs() < 1e-12);
    }
}
