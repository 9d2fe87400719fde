use serde::Serialize;

use super::poly::{Coeff, Poly, QPoly, Var};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// `k`-fold forward difference `Δf(x) = f(x+1) - f(x)`.
pub fn delta_pow<T: Coeff>(p: &Poly<T>, k: usize) -> Poly<T> {
    let mut out = p.clone();
    for _ in 0..k {
        if out.is_zero() {
            break;
        }
        out = out.shift(&T::one()).sub(&out);
    }
    out
}

/// `k`-fold backward difference `∇f(x) = f(x) - f(x-1)`.
pub fn nabla_pow<T: Coeff>(p: &Poly<T>, k: usize) -> Poly<T> {
    let mut out = p.clone();
    for _ in 0..k {
        if out.is_zero() {
            break;
        }
        out = out.sub(&out.shift(&-T::one()));
    }
    out
}

/// The lattice `λ(x)` on which a family lives.
///
/// A quadratic lattice is `λ(x) = x(x + s)`. After one divided difference a
/// symmetric polynomial in `λ` becomes a polynomial in `x(x + s + 1)`, so each
/// application moves the lattice to `s + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Lattice {
    Linear,
    Quadratic { s: Scalar },
}

impl Lattice {
    pub fn quadratic(s: Scalar) -> Self {
        Lattice::Quadratic { s }
    }

    /// The variable tag of polynomials on this lattice.
    pub fn var(&self) -> Var {
        match self {
            Lattice::Linear => Var::X,
            Lattice::Quadratic { .. } => Var::Lambda,
        }
    }

    /// `λ(x)` as a polynomial in x.
    pub fn lambda_poly(&self) -> QPoly {
        match self {
            Lattice::Linear => QPoly::identity(Var::X),
            Lattice::Quadratic { s } => QPoly::new(vec![Scalar::zero(), s.clone(), Scalar::one()], Var::X),
        }
    }

    /// `λ(x)` at a point.
    pub fn lambda_at(&self, x: &Scalar) -> Scalar {
        match self {
            Lattice::Linear => x.clone(),
            Lattice::Quadratic { s } => x * &(x + s),
        }
    }

    /// `λ(x+1) - λ(x)` as a polynomial in x.
    pub fn step(&self) -> QPoly {
        let l = self.lambda_poly();
        l.shift(&Scalar::one()).sub(&l)
    }

    /// The lattice reached after `k` divided differences.
    pub fn shifted(&self, k: usize) -> Self {
        match self {
            Lattice::Linear => Lattice::Linear,
            Lattice::Quadratic { s } => Lattice::Quadratic {
                s: s + &Scalar::from_i64(k as i64),
            },
        }
    }

    /// Rewrites a polynomial on this lattice as a polynomial in x.
    pub fn to_x(&self, p: &QPoly) -> QPoly {
        match self {
            Lattice::Linear => p.clone().with_var(Var::X),
            Lattice::Quadratic { .. } => p.clone().with_var(Var::X).compose(&self.lambda_poly()),
        }
    }

    /// Rewrites a polynomial in x as a polynomial on this lattice.
    pub fn from_x(&self, p: &QPoly) -> Result<QPoly> {
        match self {
            Lattice::Linear => Ok(p.clone()),
            Lattice::Quadratic { .. } => to_lattice_poly(p, &self.lambda_poly()),
        }
    }
}

/// Expresses `p(x)` as `q(λ(x))` for a monic quadratic `λ`, or fails with
/// [`Error::NotLatticeSymmetric`].
pub fn to_lattice_poly(p: &QPoly, lambda: &QPoly) -> Result<QPoly> {
    debug_assert_eq!(lambda.degree(), 2);
    let mut rest = p.clone();
    let mut out: Vec<Scalar> = Vec::new();
    while !rest.is_zero() {
        let d = rest.degree() as usize;
        if d % 2 == 1 {
            return Err(Error::NotLatticeSymmetric);
        }
        let c = rest.leading().cloned().unwrap_or_else(Scalar::zero);
        let j = d / 2;
        if out.len() <= j {
            out.resize(j + 1, Scalar::zero());
        }
        out[j] = c.clone();
        rest = rest.sub(&lambda.pow(j).scale(&c));
    }
    Ok(QPoly::new(out, Var::Lambda))
}

/// Applies `f ↦ Δf / Δλ` `k` times and returns the result with its lattice.
///
/// On a linear lattice this is `Δ^k`. On a quadratic lattice the input is a
/// polynomial in λ; the result is a polynomial in the lattice `s + k`.
pub fn lattice_divided_difference(p: &QPoly, lat: &Lattice, k: usize) -> Result<(QPoly, Lattice)> {
    let mut cur_lat = lat.clone();
    let mut cur = p.clone();
    for _ in 0..k {
        if cur.is_zero() {
            return Ok((QPoly::zero(lat.var()), lat.shifted(k)));
        }
        let step = cur_lat.step();
        if step.is_zero() {
            return Err(Error::ZeroLatticeStep);
        }
        let fx = cur_lat.to_x(&cur);
        let num = delta_pow(&fx, 1);
        let quot = num.exact_div(&step)?;
        cur_lat = cur_lat.shifted(1);
        cur = cur_lat.from_x(&quot)?;
    }
    Ok((cur, cur_lat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(cs: &[i64]) -> QPoly {
        QPoly::new(cs.iter().map(|&c| Scalar::from_i64(c)).collect(), Var::X)
    }

    #[test]
    fn forward_and_backward_examples() {
        let x2 = q(&[0, 0, 1]);
        assert_eq!(delta_pow(&x2, 1), q(&[1, 2]));
        assert_eq!(nabla_pow(&x2, 1), q(&[-1, 2]));
        assert_eq!(nabla_pow(&q(&[0, 1]), 1), q(&[1]));
        assert!(delta_pow(&q(&[3, 1, 4, 1]), 4).is_zero());
    }

    #[test]
    fn divided_difference_examples() {
        let lat = Lattice::quadratic(Scalar::ratio(5, 2));
        let c = QPoly::constant(Scalar::from_i64(3), Var::Lambda);
        assert!(lattice_divided_difference(&c, &lat, 1).unwrap().0.is_zero());
        let lam = QPoly::identity(Var::Lambda);
        assert_eq!(
            lattice_divided_difference(&lam, &lat, 1).unwrap().0,
            QPoly::one(Var::Lambda)
        );
        // (λ(x+1)^2 - λ(x)^2)/(2x+1+s) = λ(x+1) + λ(x) = 2 x(x+s+1) + (s+1)
        let (d, new_lat) = lattice_divided_difference(&lam.pow(2), &lat, 1).unwrap();
        assert_eq!(d.coeffs(), &[Scalar::ratio(7, 2), Scalar::from_i64(2)]);
        assert_eq!(new_lat, Lattice::quadratic(Scalar::ratio(7, 2)));
        assert_eq!(lat.step(), QPoly::new(vec![Scalar::ratio(7, 2), Scalar::from_i64(2)], Var::X));
    }

    #[test]
    fn linear_lattice_is_forward_difference() {
        let p = q(&[1, -2, 0, 5]);
        let (d, _) = lattice_divided_difference(&p, &Lattice::Linear, 2).unwrap();
        assert_eq!(d, delta_pow(&p, 2));
    }

    #[test]
    fn odd_polynomial_is_not_on_the_lattice() {
        let lat = Lattice::quadratic(Scalar::one());
        assert_eq!(lat.from_x(&q(&[0, 1])), Err(Error::NotLatticeSymmetric));
    }

    fn small_poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec((-9i64..=9, 1i64..=4), 0..=10).prop_map(|cs| {
            QPoly::new(cs.into_iter().map(|(n, d)| Scalar::ratio(n, d)).collect(), Var::X)
        })
    }

    proptest! {
        #[test]
        fn delta_and_nabla_commute(p in small_poly()) {
            prop_assert_eq!(delta_pow(&nabla_pow(&p, 1), 1), nabla_pow(&delta_pow(&p, 1), 1));
        }

        #[test]
        fn delta_powers_compose(p in small_poly(), j in 0usize..4, k in 0usize..4) {
            prop_assert_eq!(delta_pow(&p, j + k), delta_pow(&delta_pow(&p, j), k));
        }

        #[test]
        fn delta_lowers_degree_by_one(p in small_poly()) {
            let d = delta_pow(&p, 1);
            if p.degree() >= 1 {
                prop_assert_eq!(d.degree(), p.degree() - 1);
            } else {
                prop_assert!(d.is_zero());
            }
        }

        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        }

        #[test]
        fn affine_composition(p in small_poly(), u1 in 1i64..5, v1 in -5i64..5, u2 in -5i64..5, v2 in -5i64..5) {
            let (u1, v1, u2, v2) = (Scalar::from_i64(u1), Scalar::from_i64(v1), Scalar::from_i64(u2), Scalar::from_i64(v2));
            // p(u2·(u1·x + v1) + v2)
            let two_step = p.affine_substitute(&u2, &v2).affine_substitute(&u1, &v1);
            let one_step = p.affine_substitute(&(&u1 * &u2), &(&(&u2 * &v1) + &v2));
            prop_assert_eq!(two_step, one_step);
        }

        #[test]
        fn float_eval_tracks_exact(p in small_poly(), re in -100i64..=100, im in -100i64..=100) {
            let z = Scalar::new(Scalar::from_i64(re).re().clone(), Scalar::from_i64(im).re().clone());
            if z.abs_f64() <= 100.0 {
                let exact = p.eval(&z).to_complex();
                let float = p.to_c64().eval(&z.to_complex());
                let scale: f64 = p.coeffs().iter().enumerate()
                    .map(|(k, c)| c.abs_f64() * z.abs_f64().powi(k as i32)).sum();
                prop_assert!((exact - float).norm() <= 1e-10 * scale.max(1e-300));
            }
        }

        #[test]
        fn divided_difference_drops_lambda_degree(cs in prop::collection::vec(-5i64..=5, 1..=6), s in 0i64..6) {
            let lat = Lattice::quadratic(Scalar::ratio(2 * s + 1, 2));
            let p = QPoly::new(cs.into_iter().map(Scalar::from_i64).collect(), Var::Lambda);
            let (d, _) = lattice_divided_difference(&p, &lat, 1).unwrap();
            if p.degree() >= 1 {
                prop_assert_eq!(d.degree(), p.degree() - 1);
            } else {
                prop_assert!(d.is_zero());
            }
        }
    }
}
