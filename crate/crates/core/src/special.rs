//! Riccati–Bessel functions in the normalization used for radial waves:
//! `j_l(x) = x * sph_j_l(x)`, `n_l(x) = -x * sph_y_l(x)`, so that
//! `j_0 = sin x`, `n_0 = cos x`, `j_l ~ x^(l+1)/(2l+1)!!` and
//! `n_l ~ (2l-1)!! x^(-l)` near the origin.
//!
//! The modified pair is the continuation to imaginary argument:
//! `j_l(i x) = i^(l+1) i_l(x)` and `n_l(i x) = i^(-l) k_l(x)`,
//! giving `i_0 = sinh x`, `k_0 = cosh x`.

use crate::error::{Error, Result};

/// Function values and first derivatives of a regular/irregular pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialPair {
    pub regular: f64,
    pub irregular: f64,
    pub d_regular: f64,
    pub d_irregular: f64,
}

/// `(2l+1)!!`, with `(-1)!! = 1`.
pub fn double_factorial(n: i64) -> f64 {
    if n <= 0 {
        return 1.0;
    }
    let mut acc = 1.0;
    let mut m = n;
    while m > 1 {
        acc *= m as f64;
        m -= 2;
    }
    acc
}

pub fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

fn check_arg(x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Riccati-Bessel argument must be positive, got {x}")))
    }
}

/// Power series of the regular function, `sign = -1` for `j_l`, `+1` for `i_l`.
fn regular_series(l: u32, x: f64, sign: f64) -> f64 {
    let lead = x.powi(l as i32 + 1) / double_factorial(2 * l as i64 + 1);
    let y = sign * 0.5 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for m in 1..200u32 {
        term *= y / (m as f64 * (2 * l + 2 * m + 1) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    lead * sum
}

/// Riccati–Bessel `(j_l(x), n_l(x))`.
pub fn riccati_bessel(l: u32, x: f64) -> Result<(f64, f64)> {
    let p = riccati_bessel_pair(l, x)?;
    Ok((p.regular, p.irregular))
}

pub fn riccati_bessel_pair(l: u32, x: f64) -> Result<RadialPair> {
    check_arg(x)?;
    let (s, c) = x.sin_cos();
    let lf = l as f64;

    // irregular: upward recurrence is stable
    let mut n_prev = c;
    let mut n_cur = c / x + s;
    let n_lm1;
    let n_l;
    if l == 0 {
        n_l = c;
        n_lm1 = f64::NAN;
    } else {
        for m in 1..l {
            let next = (2 * m + 1) as f64 / x * n_cur - n_prev;
            n_prev = n_cur;
            n_cur = next;
        }
        n_l = n_cur;
        n_lm1 = n_prev;
    }

    let (j_l, j_lm1) = if l == 0 {
        (s, f64::NAN)
    } else if x > lf {
        let mut j_prev = s;
        let mut j_cur = s / x - c;
        for m in 1..l {
            let next = (2 * m + 1) as f64 / x * j_cur - j_prev;
            j_prev = j_cur;
            j_cur = next;
        }
        (j_cur, j_prev)
    } else {
        (regular_series(l, x, -1.0), regular_series(l - 1, x, -1.0))
    };

    let (dj, dn) = if l == 0 {
        (c, -s)
    } else {
        (j_lm1 - lf / x * j_l, n_lm1 - lf / x * n_l)
    };
    Ok(RadialPair { regular: j_l, irregular: n_l, d_regular: dj, d_irregular: dn })
}

/// Modified Riccati–Bessel pair `(i_l(x), k_l(x))` with derivatives.
pub fn modified_riccati_bessel(l: u32, x: f64) -> Result<RadialPair> {
    check_arg(x)?;
    let (sh, ch) = (x.sinh(), x.cosh());
    let lf = l as f64;

    let mut k_prev = ch;
    let mut k_cur = ch / x - sh;
    let (k_l, k_lm1) = if l == 0 {
        (ch, f64::NAN)
    } else {
        for m in 1..l {
            let next = (2 * m + 1) as f64 / x * k_cur + k_prev;
            k_prev = k_cur;
            k_cur = next;
        }
        (k_cur, k_prev)
    };

    let (i_l, i_lm1) = if l == 0 {
        (sh, f64::NAN)
    } else if x > 20.0 {
        let mut i_prev = sh;
        let mut i_cur = ch - sh / x;
        for m in 1..l {
            let next = i_prev - (2 * m + 1) as f64 / x * i_cur;
            i_prev = i_cur;
            i_cur = next;
        }
        (i_cur, i_prev)
    } else {
        (regular_series(l, x, 1.0), regular_series(l - 1, x, 1.0))
    };

    let (di, dk) = if l == 0 {
        (ch, sh)
    } else {
        (i_lm1 - lf / x * i_l, -k_lm1 - lf / x * k_l)
    };
    Ok(RadialPair { regular: i_l, irregular: k_l, d_regular: di, d_irregular: dk })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn l0_closed_form() {
        let (j, n) = riccati_bessel(0, FRAC_PI_2).unwrap();
        assert_relative_eq!(j, 1.0, epsilon = 1e-15);
        assert!(n.abs() < 1e-15);
    }

    #[test]
    fn l1_small_argument_asymptotics() {
        let (j, n) = riccati_bessel(1, 0.01).unwrap();
        assert!(((j - 0.01f64.powi(2) / 3.0) / j).abs() < 1e-4);
        assert!(((n - 100.0) / n).abs() < 1e-4);
    }

    #[test]
    fn closed_forms_l1_l2() {
        for &x in &[0.3, 1.0, 2.5, 7.0, 30.0] {
            let (s, c) = (f64::sin(x), f64::cos(x));
            let (j1, n1) = riccati_bessel(1, x).unwrap();
            assert_relative_eq!(j1, s / x - c, epsilon = 1e-13, max_relative = 1e-12);
            assert_relative_eq!(n1, c / x + s, epsilon = 1e-13, max_relative = 1e-12);
            let (j2, n2) = riccati_bessel(2, x).unwrap();
            let j2_ref = (3.0 / (x * x) - 1.0) * s - 3.0 * c / x;
            let n2_ref = (3.0 / (x * x) - 1.0) * c + 3.0 * s / x;
            assert_relative_eq!(j2, j2_ref, epsilon = 1e-12, max_relative = 1e-10);
            assert_relative_eq!(n2, n2_ref, epsilon = 1e-12, max_relative = 1e-10);
        }
    }

    #[test]
    fn wronskian_is_minus_one() {
        // W(j, n) = j n' - j' n = -1 in this normalization
        for l in 0..5 {
            for &x in &[0.2, 1.0, 3.3, 12.0] {
                let p = riccati_bessel_pair(l, x).unwrap();
                let w = p.regular * p.d_irregular - p.d_regular * p.irregular;
                assert!((w + 1.0).abs() < 1e-10, "l={l} x={x} w={w}");
            }
        }
    }

    #[test]
    fn modified_closed_forms_and_wronskian() {
        for &x in &[0.05, 0.7, 3.0, 25.0] {
            let p = modified_riccati_bessel(1, x).unwrap();
            assert_relative_eq!(p.regular, x.cosh() - x.sinh() / x, max_relative = 1e-10);
            assert_relative_eq!(p.irregular, x.cosh() / x - x.sinh(), max_relative = 1e-10);
            for l in 0..4 {
                let p = modified_riccati_bessel(l, x).unwrap();
                // W(i, k) = -1 for every l in this sign convention
                let w = p.regular * p.d_irregular - p.d_regular * p.irregular;
                let expect = -1.0;
                let scale = (p.regular * p.d_irregular).abs().max(1.0);
                assert!((w - expect).abs() < 1e-9 * scale, "l={l} x={x} w={w}");
            }
        }
    }

    #[test]
    fn nonpositive_argument_is_domain_error() {
        assert!(riccati_bessel(0, 0.0).is_err());
        assert!(riccati_bessel(2, -1.0).is_err());
    }

    #[test]
    fn double_factorials() {
        assert_eq!(double_factorial(-1), 1.0);
        assert_eq!(double_factorial(0), 1.0);
        assert_eq!(double_factorial(5), 15.0);
        assert_eq!(double_factorial(6), 48.0);
    }
}
