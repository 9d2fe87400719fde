use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Field operations shared by the exact and floating coefficient types.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_i64(v: i64) -> Self;
    fn to_c64(&self) -> Complex64;
}

impl Coeff for Scalar {
    fn zero() -> Self {
        Scalar::zero()
    }
    fn one() -> Self {
        Scalar::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn from_i64(v: i64) -> Self {
        Scalar::from_i64(v)
    }
    fn to_c64(&self) -> Complex64 {
        self.to_complex()
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

/// The variable a polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Var {
    /// The plain variable x.
    X,
    /// The quadratic-lattice variable lambda(x) = x(x + s).
    Lambda,
}

/// Dense univariate polynomial; `coeffs[k]` multiplies `var^k`.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient vector and degree -1.
#[derive(Clone, PartialEq)]
pub struct Poly<T: Coeff = Scalar> {
    coeffs: Vec<T>,
    var: Var,
}

/// Exact polynomial with Gaussian-rational coefficients.
pub type QPoly = Poly<Scalar>;
/// Floating polynomial with complex coefficients.
pub type CPoly = Poly<Complex64>;

impl<T: Coeff> Poly<T> {
    pub fn new(mut coeffs: Vec<T>, var: Var) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs, var }
    }

    pub fn zero(var: Var) -> Self {
        Poly { coeffs: Vec::new(), var }
    }

    pub fn constant(c: T, var: Var) -> Self {
        Poly::new(vec![c], var)
    }

    pub fn one(var: Var) -> Self {
        Poly::constant(T::one(), var)
    }

    /// The polynomial `var`.
    pub fn identity(var: Var) -> Self {
        Poly::new(vec![T::zero(), T::one()], var)
    }

    /// `c · var^k`.
    pub fn monomial(c: T, k: usize, var: Var) -> Self {
        let mut coeffs = vec![T::zero(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs, var)
    }

    /// `var + a`.
    pub fn linear(a: T, var: Var) -> Self {
        Poly::new(vec![a, T::one()], var)
    }

    /// The rising factorial `(var + a)_n = (var+a)(var+a+1)…(var+a+n-1)`.
    pub fn rising(a: &T, n: usize, var: Var) -> Self {
        let mut out = Poly::one(var);
        let mut shift = a.clone();
        for _ in 0..n {
            out = out.mul(&Poly::linear(shift.clone(), var));
            shift = shift + T::one();
        }
        out
    }

    /// `∏ (var - r)` over the given roots.
    pub fn from_roots(roots: &[T], var: Var) -> Self {
        roots
            .iter()
            .fold(Poly::one(var), |acc, r| acc.mul(&Poly::linear(-r.clone(), var)))
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// The same coefficients relabelled with another variable.
    pub fn with_var(mut self, var: Var) -> Self {
        self.var = var;
        self
    }

    /// Degree, with -1 for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `var^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> T {
        self.coeffs.get(k).cloned().unwrap_or_else(T::zero)
    }

    pub fn leading(&self) -> Option<&T> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == T::one())
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &T) -> T {
        let mut acc = T::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Horner evaluation in double precision.
    pub fn eval_c64(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c.to_c64();
        }
        acc
    }

    pub fn to_c64(&self) -> CPoly {
        Poly::new(self.coeffs.iter().map(Coeff::to_c64).collect(), self.var)
    }

    fn check_var(&self, other: &Self) {
        debug_assert_eq!(self.var, other.var, "mixing polynomials in different variables");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_var(other);
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), other.coeffs.get(k)) {
                (Some(a), Some(b)) => a.clone() + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        Poly::new(coeffs, self.var)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            var: self.var,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_var(other);
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.var);
        }
        let mut out = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let t = out[i + j].clone() + a.clone() * b;
                out[i + j] = t;
            }
        }
        Poly::new(out, self.var)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Poly::zero(self.var);
        }
        Poly::new(self.coeffs.iter().map(|a| a.clone() * c).collect(), self.var)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Poly::one(self.var);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// Composition `self(inner(y))`; the result carries the variable of `inner`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Poly::zero(inner.var);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone(), inner.var));
        }
        acc
    }

    /// `p(u·var + v)`.
    pub fn affine_substitute(&self, u: &T, v: &T) -> Self {
        self.compose(&Poly::new(vec![v.clone(), u.clone()], self.var))
    }

    /// `p(var + h)`.
    pub fn shift(&self, h: &T) -> Self {
        self.affine_substitute(&T::one(), h)
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        self.check_var(divisor);
        let lead = divisor
            .leading()
            .ok_or_else(|| Error::InvalidArgument("division by the zero polynomial".into()))?
            .clone();
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(self.var), self.clone()));
        }
        let mut quot = vec![T::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd].clone() / lead.clone();
            if !q.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    let t = rem[k + j].clone() - q.clone() * d;
                    rem[k + j] = t;
                }
            }
            rem[k + dd] = T::zero();
            quot[k] = q;
        }
        Ok((Poly::new(quot, self.var), Poly::new(rem, self.var)))
    }

    /// Division that must leave a zero remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(Error::ExactDivisionFailed)
        }
    }

    /// Largest coefficient modulus, as a float.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_c64().norm()).fold(0.0, f64::max)
    }
}

impl QPoly {
    /// Parses coefficient strings, lowest degree first.
    pub fn parse_coeffs<S: AsRef<str>>(coeffs: &[S], var: Var) -> Result<Self> {
        let cs = coeffs
            .iter()
            .map(|s| s.as_ref().parse::<Scalar>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(cs, var))
    }

    /// Canonical coefficient strings, lowest degree first; the zero polynomial gives `["0"]`.
    pub fn coeff_strings(&self) -> Vec<String> {
        if self.is_zero() {
            return vec!["0".to_string()];
        }
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    /// True when every coefficient has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    /// Largest coefficient distance to `other`, as a float.
    pub fn max_coeff_distance(&self, other: &QPoly) -> f64 {
        self.sub(other).max_abs_coeff()
    }
}

impl<T: Coeff> fmt::Display for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let name = match self.var {
            Var::X => "x",
            Var::Lambda => "λ",
        };
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c}){name}")?,
                _ => write!(f, "({c}){name}^{k}")?,
            }
        }
        Ok(())
    }
}

impl<T: Coeff> fmt::Debug for Poly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly[{:?}]({})", self.var, self)
    }
}

impl<'a, T: Coeff> Add<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn add(self, rhs: &'a Poly<T>) -> Poly<T> {
        Poly::add(self, rhs)
    }
}

impl<'a, T: Coeff> Sub<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn sub(self, rhs: &'a Poly<T>) -> Poly<T> {
        Poly::sub(self, rhs)
    }
}

impl<'a, T: Coeff> Mul<&'a Poly<T>> for &'a Poly<T> {
    type Output = Poly<T>;
    fn mul(self, rhs: &'a Poly<T>) -> Poly<T> {
        Poly::mul(self, rhs)
    }
}

impl Serialize for QPoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(serializer)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(cs: &[&str]) -> QPoly {
        QPoly::parse_coeffs(cs, Var::X).unwrap()
    }

    #[test]
    fn degree_and_trimming() {
        assert_eq!(q(&["0"]).degree(), -1);
        assert_eq!(q(&["1", "2", "0", "0"]).degree(), 1);
    }

    #[test]
    fn eval_examples() {
        let p = q(&["4", "-5", "1"]);
        assert_eq!(p.eval(&Scalar::from_i64(1)), Scalar::zero());
        assert_eq!(p.eval(&Scalar::from_i64(0)), Scalar::from_i64(4));
        assert_eq!(QPoly::zero(Var::X).eval(&Scalar::from_i64(7)), Scalar::zero());
    }

    #[test]
    fn affine_examples() {
        let x = QPoly::identity(Var::X);
        assert_eq!(x.affine_substitute(&Scalar::one(), &Scalar::zero()), x);
        let x2 = x.pow(2);
        assert_eq!(x2.affine_substitute(&Scalar::i(), &Scalar::zero()), x2.neg());
        let shifted = q(&["-5", "1"]).affine_substitute(&Scalar::one(), &Scalar::one());
        assert_eq!(shifted, q(&["-4", "1"]));
    }

    #[test]
    fn division() {
        let a = q(&["4", "-5", "1"]);
        let b = q(&["-1", "1"]);
        assert_eq!(a.exact_div(&b).unwrap(), q(&["-4", "1"]));
        assert_eq!(q(&["1", "0", "1"]).exact_div(&b), Err(Error::ExactDivisionFailed));
    }

    #[test]
    fn rising_factorial_poly() {
        // (x-2)_3 = (x-2)(x-1)x
        let r = QPoly::rising(&Scalar::from_i64(-2), 3, Var::X);
        assert_eq!(r, q(&["0", "2", "-3", "1"]));
    }

    #[test]
    fn float_copy() {
        let p = q(&["1/2", "1/3"]).to_c64();
        assert!((p.eval(&Complex64::new(3.0, 0.0)) - Complex64::new(1.5, 0.0)).norm() < 1e-15);
    }
}
