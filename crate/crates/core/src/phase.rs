use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;

/// `e^{2πi p/q}` with the argument reduced exactly before the float
/// evaluation. Multiples of a quarter turn come out exact.
pub fn root_of_unity(p: i64, q: i64) -> Complex64 {
    assert!(q != 0, "root_of_unity with zero denominator");
    let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
    let g = p.gcd(&q).max(1);
    let (p, q) = (p / g, q / g);
    let r = p.rem_euclid(q);
    if (4 * r) % q == 0 {
        return match 4 * r / q {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    // fold into (-1/2, 1/2] turns
    let r = if 2 * r > q { r - q } else { r };
    let angle = std::f64::consts::TAU * (r as f64) / (q as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// `e^{2πi r}` for a rational `r`.
pub fn phase(r: Rational64) -> Complex64 {
    root_of_unity(*r.numer(), *r.denom())
}

/// `e^{πi r}` for a rational `r`.
pub fn half_phase(r: Rational64) -> Complex64 {
    root_of_unity(*r.numer(), 2 * *r.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quarter_turns_exact() {
        assert_eq!(root_of_unity(1, 4), Complex64::new(0.0, 1.0));
        assert_eq!(root_of_unity(-1, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(root_of_unity(7, 7), Complex64::new(1.0, 0.0));
        assert_eq!(root_of_unity(3, -4), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn matches_float_definition() {
        for (p, q) in [(2, 5), (-3, 16), (11, 10), (1, 48)] {
            let want = Complex64::from_polar(1.0, std::f64::consts::TAU * p as f64 / q as f64);
            assert!((root_of_unity(p, q) - want).norm() < 1e-14);
        }
        assert!((half_phase(Rational64::new(1, 8)) - root_of_unity(1, 16)).norm() < 1e-15);
    }
}
