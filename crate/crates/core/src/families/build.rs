use serde::Serialize;

use super::FamilySpec;
use crate::algebra::{pochhammer, QPoly, Scalar, Var};
use crate::error::{degenerate, Result};

/// Monic three-term recurrence `x p_n = p_{n+1} + beta_n p_n + gamma_n p_{n-1}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceCoefficients {
    pub n: usize,
    pub beta_n: Scalar,
    pub gamma_n: Scalar,
}

fn sc(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

fn checked_div(num: Scalar, den: Scalar, label: impl FnOnce() -> String) -> Result<Scalar> {
    if den.is_zero() {
        Err(degenerate(label()))
    } else {
        Ok(num / den)
    }
}

/// `Σ_k (-n)_k / k! · coef(k) · B_k`, where `B_{k+1} = B_k · factor(k)` and `B_0 = 1`.
fn reduced_sum(n: usize, var: Var, factor: impl Fn(usize) -> QPoly, coef: impl Fn(usize) -> Scalar) -> QPoly {
    let mut out = QPoly::zero(var);
    let mut basis = QPoly::one(var);
    // (-n)_k / k! = (-1)^k C(n, k)
    let mut binom = Scalar::one();
    for k in 0..=n {
        out = out.add(&basis.scale(&(&binom * &coef(k))));
        if k < n {
            basis = basis.mul(&factor(k));
            binom = &binom * &Scalar::ratio(-((n - k) as i64), (k + 1) as i64);
        }
    }
    out
}

/// `j - x`, the factors of `(-x)_k`.
fn falling_x(j: usize) -> QPoly {
    QPoly::new(vec![sc(j as i64), sc(-1)], Var::X)
}

/// `j(j+s) - λ`, the factors of `(-x)_k (x+s)_k` on the lattice `x(x+s)`.
fn lattice_factor(s: &Scalar, j: usize) -> QPoly {
    let j = sc(j as i64);
    QPoly::new(vec![&j * &(&j + s), sc(-1)], Var::Lambda)
}

/// `(a+j)^2 + y`, the factors of `(a+ix)_k (a-ix)_k` with `y = x^2`.
fn wilson_factor(a: &Scalar, j: usize) -> QPoly {
    let t = a + &sc(j as i64);
    QPoly::new(vec![&t * &t, Scalar::one()], Var::Lambda)
}

fn shifted_poch(a: &Scalar, k: usize, n: usize) -> Scalar {
    pochhammer(&(a + &sc(k as i64)), n - k)
}

fn nonzero_poch(a: &Scalar, n: usize, label: impl FnOnce() -> String) -> Result<Scalar> {
    let v = pochhammer(a, n);
    if v.is_zero() {
        Err(degenerate(label()))
    } else {
        Ok(v)
    }
}

/// Monic polynomial of degree `n` from the reduced hypergeometric sum.
///
/// Each denominator Pochhammer of the classical series is moved into the
/// numerator, so the construction is valid for every `n`, including `n > N`.
pub fn hypergeometric_build(spec: &FamilySpec, n: usize) -> Result<QPoly> {
    let one = Scalar::one();
    let ni = sc(n as i64);
    let out = match spec {
        FamilySpec::Hahn { alpha, beta, big_n } => {
            let top = &(&(alpha + beta) + &ni) + &one;
            let norm = nonzero_poch(&top, n, || format!("(alpha+beta+n+1)_n at n={n}"))?;
            let a1 = alpha + &one;
            let m = sc(-big_n);
            reduced_sum(n, Var::X, falling_x, |k| {
                &(&pochhammer(&top, k) * &shifted_poch(&m, k, n)) * &shifted_poch(&a1, k, n)
            })
            .scale(&norm.checked_inv().expect("nonzero"))
        }
        FamilySpec::ContinuousHahn { a, b, c, d } => {
            let s = &(&(a + b) + c) + d;
            let top = &(&s + &ni) - &one;
            let norm = nonzero_poch(&top, n, || format!("(n+a+b+c+d-1)_n at n={n}"))?;
            let (ac, ad) = (a + c, a + d);
            let i = Scalar::i();
            reduced_sum(
                n,
                Var::X,
                |j| QPoly::new(vec![a + &sc(j as i64), i.clone()], Var::X),
                |k| &(&pochhammer(&top, k) * &shifted_poch(&ac, k, n)) * &shifted_poch(&ad, k, n),
            )
            .scale(&(&Scalar::i().powi(n as i64) / &norm))
        }
        FamilySpec::Racah { alpha, beta, gamma, delta, .. } => {
            let top = &(&(alpha + beta) + &ni) + &one;
            let norm = nonzero_poch(&top, n, || format!("(n+alpha+beta+1)_n at n={n}"))?;
            let s = &(gamma + delta) + &one;
            let (a1, bd1, g1) = (alpha + &one, &(beta + delta) + &one, gamma + &one);
            reduced_sum(
                n,
                Var::Lambda,
                |j| lattice_factor(&s, j),
                |k| {
                    &(&(&pochhammer(&top, k) * &shifted_poch(&a1, k, n)) * &shifted_poch(&bd1, k, n))
                        * &shifted_poch(&g1, k, n)
                },
            )
            .scale(&norm.checked_inv().expect("nonzero"))
        }
        FamilySpec::Wilson { a, b, c, d } => {
            let s = &(&(a + b) + c) + d;
            let top = &(&s + &ni) - &one;
            let norm = nonzero_poch(&top, n, || format!("(n+a+b+c+d-1)_n at n={n}"))?;
            let (ab, ac, ad) = (a + b, a + c, a + d);
            reduced_sum(
                n,
                Var::Lambda,
                |j| wilson_factor(a, j),
                |k| {
                    &(&(&pochhammer(&top, k) * &shifted_poch(&ab, k, n)) * &shifted_poch(&ac, k, n))
                        * &shifted_poch(&ad, k, n)
                },
            )
            .scale(&(&sc(-1).powi(n as i64) / &norm))
        }
        FamilySpec::DualHahn { gamma, delta, big_n } => {
            let s = &(gamma + delta) + &one;
            let g1 = gamma + &one;
            let m = sc(-big_n);
            reduced_sum(
                n,
                Var::Lambda,
                |j| lattice_factor(&s, j),
                |k| &shifted_poch(&g1, k, n) * &shifted_poch(&m, k, n),
            )
        }
        FamilySpec::ContinuousDualHahn { a, b, c } => {
            let (ab, ac) = (a + b, a + c);
            reduced_sum(
                n,
                Var::Lambda,
                |j| wilson_factor(a, j),
                |k| &shifted_poch(&ab, k, n) * &shifted_poch(&ac, k, n),
            )
            .scale(&sc(-1).powi(n as i64))
        }
        FamilySpec::Krawtchouk { p, big_n } => {
            let m = sc(-big_n);
            reduced_sum(n, Var::X, falling_x, |k| &shifted_poch(&m, k, n) * &p.powi((n - k) as i64))
        }
        FamilySpec::Meixner { beta, c } => {
            let q = checked_div(c.clone(), c - &one, || "c-1".into())?;
            reduced_sum(n, Var::X, falling_x, |k| &shifted_poch(beta, k, n) * &q.powi((n - k) as i64))
        }
    };
    debug_assert!(out.is_monic(), "{spec} n={n} not monic: {out}");
    Ok(out)
}

/// Exact recurrence coefficients `(beta_n, gamma_n)`.
pub fn recurrence_coefficients(spec: &FamilySpec, n: usize) -> Result<RecurrenceCoefficients> {
    let one = Scalar::one();
    let ni = sc(n as i64);
    let nm1 = sc(n as i64 - 1);
    let (beta_n, gamma_n) = match spec {
        FamilySpec::Hahn { alpha, beta, big_n } => {
            let nn = sc(*big_n);
            let ab = alpha + beta;
            // x h_n = h_{n+1} + (A_n + C_n) h_n + A_{n-1} C_n h_{n-1}
            let a_of = |m: usize| -> Result<Scalar> {
                let mi = sc(m as i64);
                if m == 0 {
                    return checked_div(&(alpha + &one) * &nn, &ab + &sc(2), || "alpha+beta+2".into());
                }
                let num = &(&(&(&mi + &ab) + &one) * &(&(&mi + alpha) + &one)) * &(&nn - &mi);
                let d1 = &(&sc(2 * m as i64) + &ab) + &one;
                let d2 = &(&sc(2 * m as i64) + &ab) + &sc(2);
                checked_div(num, &d1 * &d2, || format!("(2n+alpha+beta+1)(2n+alpha+beta+2) at n={m}"))
            };
            let c_n = if n == 0 {
                Scalar::zero()
            } else {
                let num = &(&ni * &(&(&(&ni + &ab) + &nn) + &one)) * &(&ni + beta);
                let d1 = &sc(2 * n as i64) + &ab;
                let d2 = &d1 + &one;
                checked_div(num, &d1 * &d2, || format!("(2n+alpha+beta)(2n+alpha+beta+1) at n={n}"))?
            };
            let a_n = a_of(n)?;
            let gamma_n = if n == 0 { Scalar::zero() } else { &a_of(n - 1)? * &c_n };
            (&a_n + &c_n, gamma_n)
        }
        FamilySpec::ContinuousHahn { a, b, c, d } => {
            let s = &(&(a + b) + c) + d;
            let a_of = |m: usize| -> Result<Scalar> {
                let mi = sc(m as i64);
                if m == 0 {
                    return checked_div(-(&(a + c) * &(a + d)), s.clone(), || "a+b+c+d".into());
                }
                let num = &(&(&(&mi + &s) - &one) * &(&(&mi + a) + c)) * &(&(&mi + a) + d);
                let d1 = &(&sc(2 * m as i64) + &s) - &one;
                let d2 = &sc(2 * m as i64) + &s;
                checked_div(-num, &d1 * &d2, || format!("(2n+s-1)(2n+s) at n={m}"))
            };
            let c_n = if n == 0 {
                Scalar::zero()
            } else {
                let num = &(&ni * &(&(&ni + b) + &(c - &one))) * &(&(&ni + b) + &(d - &one));
                let d1 = &(&sc(2 * n as i64) + &s) - &sc(2);
                let d2 = &d1 + &one;
                checked_div(num, &d1 * &d2, || format!("(2n+s-2)(2n+s-1) at n={n}"))?
            };
            let a_n = a_of(n)?;
            let gamma_n = if n == 0 { Scalar::zero() } else { -(&a_of(n - 1)? * &c_n) };
            (&Scalar::i() * &(&(&a_n + &c_n) + a), gamma_n)
        }
        FamilySpec::Racah { alpha, beta, gamma, delta, .. } => {
            let ab = alpha + beta;
            let a_of = |m: usize| -> Result<Scalar> {
                let mi = sc(m as i64);
                if m == 0 {
                    let num = &(&(alpha + &one) * &(&(beta + delta) + &one)) * &(gamma + &one);
                    return checked_div(num, &ab + &sc(2), || "alpha+beta+2".into());
                }
                let num = &(&(&(&(&mi + alpha) + &one) * &(&(&mi + &ab) + &one)) * &(&(&(&mi + beta) + delta) + &one))
                    * &(&(&mi + gamma) + &one);
                let d1 = &(&sc(2 * m as i64) + &ab) + &one;
                let d2 = &d1 + &one;
                checked_div(num, &d1 * &d2, || format!("(2n+alpha+beta+1)(2n+alpha+beta+2) at n={m}"))
            };
            let c_n = if n == 0 {
                Scalar::zero()
            } else {
                let num = &(&(&ni * &(&(&ni + &ab) - gamma)) * &(&(&ni + alpha) - delta)) * &(&ni + beta);
                let d1 = &sc(2 * n as i64) + &ab;
                let d2 = &d1 + &one;
                checked_div(num, &d1 * &d2, || format!("(2n+alpha+beta)(2n+alpha+beta+1) at n={n}"))?
            };
            let a_n = a_of(n)?;
            let gamma_n = if n == 0 { Scalar::zero() } else { &a_of(n - 1)? * &c_n };
            (-(&a_n + &c_n), gamma_n)
        }
        FamilySpec::Wilson { a, b, c, d } => {
            let s = &(&(a + b) + c) + d;
            let a_of = |m: usize| -> Result<Scalar> {
                let mi = sc(m as i64);
                if m == 0 {
                    let num = &(&(a + b) * &(a + c)) * &(a + d);
                    return checked_div(num, s.clone(), || "a+b+c+d".into());
                }
                let num = &(&(&(&(&mi + &s) - &one) * &(&(&mi + a) + b)) * &(&(&mi + a) + c)) * &(&(&mi + a) + d);
                let d1 = &(&sc(2 * m as i64) + &s) - &one;
                let d2 = &sc(2 * m as i64) + &s;
                checked_div(num, &d1 * &d2, || format!("(2n+s-1)(2n+s) at n={m}"))
            };
            let c_n = if n == 0 {
                Scalar::zero()
            } else {
                let num = &(&(&ni * &(&(&nm1 + b) + c)) * &(&(&nm1 + b) + d)) * &(&(&nm1 + c) + d);
                let d1 = &(&sc(2 * n as i64) + &s) - &sc(2);
                let d2 = &d1 + &one;
                checked_div(num, &d1 * &d2, || format!("(2n+s-2)(2n+s-1) at n={n}"))?
            };
            let a_n = a_of(n)?;
            let gamma_n = if n == 0 { Scalar::zero() } else { &a_of(n - 1)? * &c_n };
            (&(&a_n + &c_n) - &(a * a), gamma_n)
        }
        FamilySpec::DualHahn { gamma, delta, big_n } => {
            let nn = sc(*big_n);
            let a_of = |m: usize| {
                let mi = sc(m as i64);
                &(&(&mi + gamma) + &one) * &(&mi - &nn)
            };
            let c_n = &ni * &(&(&(&ni - delta) - &nn) - &one);
            let gamma_n = if n == 0 { Scalar::zero() } else { &a_of(n - 1) * &c_n };
            (-(&a_of(n) + &c_n), gamma_n)
        }
        FamilySpec::ContinuousDualHahn { a, b, c } => {
            let a_of = |m: usize| {
                let mi = sc(m as i64);
                &(&(&mi + a) + b) * &(&(&mi + a) + c)
            };
            let c_n = &ni * &(&(&nm1 + b) + c);
            let gamma_n = if n == 0 { Scalar::zero() } else { &a_of(n - 1) * &c_n };
            (&(&a_of(n) + &c_n) - &(a * a), gamma_n)
        }
        FamilySpec::Krawtchouk { p, big_n } => {
            let nn = sc(*big_n);
            let q = &one - p;
            let beta_n = &(p * &(&nn - &ni)) + &(&ni * &q);
            let gamma_n = &(&(&ni * p) * &q) * &(&(&nn + &one) - &ni);
            (beta_n, gamma_n)
        }
        FamilySpec::Meixner { beta, c } => {
            let beta_n = checked_div(&ni + &(c * &(&ni + beta)), &one - c, || "1-c".into())?;
            let cm1 = c - &one;
            let gamma_n = checked_div(&(&ni * c) * &(&(&ni + beta) - &one), &cm1 * &cm1, || "(c-1)^2".into())?;
            (beta_n, gamma_n)
        }
    };
    Ok(RecurrenceCoefficients { n, beta_n, gamma_n })
}

/// Monic polynomial of degree `n` by iterating the three-term recurrence.
pub fn ttrr_build(spec: &FamilySpec, n: usize) -> Result<QPoly> {
    let var = spec.var();
    let mut prev = QPoly::zero(var);
    let mut cur = QPoly::one(var);
    for k in 0..n {
        let rc = recurrence_coefficients(spec, k)?;
        let next = cur
            .mul(&QPoly::linear(-rc.beta_n, var))
            .sub(&prev.scale(&rc.gamma_n));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}
