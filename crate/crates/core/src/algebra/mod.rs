//! Scalars, dense polynomials and finite-difference operators.
//!
//! Two arithmetic modes are available: exact Gaussian rationals ([`Scalar`])
//! and double-precision complex numbers. Polynomials are generic over both.

mod difference;
mod poly;
mod scalar;

pub use difference::{delta_pow, lattice_divided_difference, nabla_pow, to_lattice_poly, Lattice};
pub use poly::{CPoly, Coeff, Poly, QPoly, Var};
pub use scalar::Scalar;

/// Rising factorial `(a)_n = a(a+1)…(a+n-1)`, with `(a)_0 = 1`.
pub fn pochhammer<T: Coeff>(a: &T, n: usize) -> T {
    let mut acc = T::one();
    let mut term = a.clone();
    for _ in 0..n {
        acc = acc * &term;
        term = term + T::one();
    }
    acc
}

/// Horner evaluation of `p` at `z`.
pub fn poly_eval<T: Coeff>(p: &Poly<T>, z: &T) -> T {
    p.eval(z)
}

/// `p(u·x + v)`.
pub fn affine_substitute<T: Coeff>(p: &Poly<T>, u: &T, v: &T) -> Poly<T> {
    p.affine_substitute(u, v)
}

/// `n!` as an exact scalar.
pub fn factorial(n: usize) -> Scalar {
    pochhammer(&Scalar::one(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(&Scalar::ratio(7, 3), 0), Scalar::one());
        assert_eq!(pochhammer(&Scalar::from_i64(1), 3), Scalar::from_i64(6));
        assert_eq!(pochhammer(&Scalar::from_i64(-3), 5), Scalar::zero());
        assert_eq!(pochhammer(&Scalar::from_i64(-3), 3), Scalar::from_i64(-6));
        let z = pochhammer(&Complex64::new(0.5, 0.0), 2);
        assert!((z - Complex64::new(0.75, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), Scalar::one());
        assert_eq!(factorial(5), Scalar::from_i64(120));
    }
}
