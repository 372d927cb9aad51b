//! Resultant of `p(x+y)` and `q(y)` with respect to `y`.

use super::Poly2;
use crate::berkowitz::determinant;
use crate::error::Result;

/// `Res_y(p(x+y), q(y))`. Its roots are the sums `α + β` of roots of `p`
/// and `q`, so it is the characteristic polynomial of a Cartesian product
/// when `p` and `q` are characteristic polynomials of the factors.
pub fn resultant_shift(p: &Poly2, q: &Poly2) -> Result<Poly2> {
    let a = p.deg()?;
    let b = q.deg()?;
    // Coefficient of y^j in p(x+y): by Lucas, binom(i, j) is odd iff j ⊆ i.
    let mut coeffs = vec![Poly2::zero(); a + 1];
    for i in p.exponents() {
        for (j, c) in coeffs.iter_mut().enumerate().take(i + 1) {
            if j & i == j {
                c.flip(i - j);
            }
        }
    }
    let n = a + b;
    let mut s = vec![vec![Poly2::zero(); n]; n];
    for i in 0..b {
        for (j, c) in coeffs.iter().enumerate() {
            s[i][i + a - j] = c.clone();
        }
    }
    for i in 0..a {
        for j in 0..=b {
            if q.coeff(j) {
                s[b + i][i + b - j] = Poly2::one();
            }
        }
    }
    Ok(determinant(&s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn p(s: &str) -> Poly2 {
        s.parse().unwrap()
    }

    #[test]
    fn linear_cases() {
        assert_eq!(resultant_shift(&p("x"), &p("x")).unwrap(), p("x"));
        assert_eq!(resultant_shift(&p("x+1"), &p("x")).unwrap(), p("x+1"));
        assert_eq!(resultant_shift(&p("x^2"), &p("x+1")).unwrap(), p("x^2+1"));
        assert_eq!(resultant_shift(&p("x^2+x+1"), &p("x")).unwrap(), p("x^2+x+1"));
        assert_eq!(resultant_shift(&Poly2::zero(), &p("x")), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn degree_is_product() {
        for (a, b) in [("x^3+x+1", "x^2+x+1"), ("x^4+x^3+1", "x^5+x^2+1"), ("x^3", "x^3+x")] {
            let r = resultant_shift(&p(a), &p(b)).unwrap();
            assert_eq!(r.degree(), Some(p(a).degree().unwrap() * p(b).degree().unwrap()));
        }
    }

    #[test]
    fn constant_factor() {
        assert_eq!(resultant_shift(&Poly2::one(), &p("x^3+x")).unwrap(), Poly2::one());
    }
}
