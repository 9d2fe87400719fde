use super::{all_of, compare, CheckReport, Verdict};
use crate::algebra::{delta_pow, nabla_pow, pochhammer, QPoly, Scalar, Var};
use crate::error::{degenerate, Error, Result};
use crate::families::{hahn_weight_zero_extended, hypergeometric_build, FamilySpec};

fn hahn_params(spec: &FamilySpec) -> Result<(&Scalar, &Scalar, i64)> {
    match spec {
        FamilySpec::Hahn { alpha, beta, big_n } => Ok((alpha, beta, *big_n)),
        other => Err(Error::InvalidArgument(format!("expected a Hahn family, got {}", other.name()))),
    }
}

fn sc(v: i64) -> Scalar {
    Scalar::from_i64(v)
}

/// `Δ^k h_n = (n-k+1)_k h_{n-k}^{α+k,β+k}(x; N-k)` and the backward form
/// `∇^k h_n(x) = (n-k+1)_k h_{n-k}^{α+k,β+k}(x-k; N-k)`.
///
/// `N - k` may be negative; the construction is polynomial in `N`.
pub fn check_delta_relations(spec: &FamilySpec, n: usize, k: usize) -> Result<CheckReport> {
    let (alpha, beta, big_n) = hahn_params(spec)?;
    if k > n {
        return Err(Error::InvalidArgument(format!("k = {k} exceeds n = {n}")));
    }
    let h = hypergeometric_build(spec, n)?;
    let shifted = FamilySpec::hahn(alpha + &sc(k as i64), beta + &sc(k as i64), big_n - k as i64);
    let lower = hypergeometric_build(&shifted, n - k)?.scale(&pochhammer(&sc((n - k + 1) as i64), k));
    let forward = compare("forward", &delta_pow(&h, k), &lower);
    let backward = compare("backward", &nabla_pow(&h, k), &lower.shift(&sc(-(k as i64))));
    Ok(CheckReport::new("delta-relations", spec, n, Some(k), all_of([forward, backward])))
}

/// `x(β+N+1-x) ∇Δh_n + ((α+1)N - (α+β+2)x) Δh_n + n(n+α+β+1) h_n = 0`.
pub fn check_difference_equation(spec: &FamilySpec, n: usize) -> Result<CheckReport> {
    let (alpha, beta, big_n) = hahn_params(spec)?;
    let h = hypergeometric_build(spec, n)?;
    let nn = sc(big_n);
    let one = Scalar::one();
    let x = Var::X;
    let a = QPoly::new(vec![Scalar::zero(), &(beta + &nn) + &one, -one.clone()], x);
    let b = QPoly::new(vec![&(alpha + &one) * &nn, -(&(alpha + beta) + &sc(2))], x);
    let lambda = &sc(n as i64) * &(&(&sc(n as i64) + alpha) + &(beta + &one));
    let dh = delta_pow(&h, 1);
    let lhs = a.mul(&nabla_pow(&dh, 1)).add(&b.mul(&dh)).add(&h.scale(&lambda));
    let verdict = compare("difference equation", &lhs, &QPoly::zero(x));
    Ok(CheckReport::new("difference-equation", spec, n, None, verdict))
}

/// `h_n(x) ρ(x) = (-1)^n (α+1)_n (β+1)_n / (α+β+n+1)_n · ∇^n ρ^{α+n,β+n}(x; N-n)`
/// at `x = 0..N`, with `ρ^{α,β}(x;N) = (α+1)_x (β+1)_{N-x} / (x! (N-x)!)` set to
/// zero off its support.
pub fn check_rodrigues(spec: &FamilySpec, n: usize) -> Result<CheckReport> {
    let (alpha, beta, big_n) = hahn_params(spec)?;
    let h = hypergeometric_build(spec, n)?;
    let one = Scalar::one();
    let den = pochhammer(&(&(alpha + beta) + &sc(n as i64 + 1)), n);
    if den.is_zero() {
        return Err(degenerate("(alpha+beta+n+1)_n"));
    }
    let pre = &(&(&sc(-1).powi(n as i64) * &pochhammer(&(alpha + &one), n)) * &pochhammer(&(beta + &one), n)) / &den;
    let (a_n, b_n) = (alpha + &sc(n as i64), beta + &sc(n as i64));
    let binom: Vec<Scalar> = (0..=n)
        .scan(Scalar::one(), |c, j| {
            let out = c.clone();
            *c = &*c * &Scalar::ratio((n - j) as i64, (j + 1) as i64);
            Some(out)
        })
        .collect();
    let mut verdict = Verdict::ExactPass;
    for x in 0..=big_n.max(0) {
        let lhs = &h.eval(&sc(x)) * &hahn_weight_zero_extended(alpha, beta, big_n, x);
        let mut nabla = Scalar::zero();
        for (j, c) in binom.iter().enumerate() {
            let term = c * &hahn_weight_zero_extended(&a_n, &b_n, big_n - n as i64, x - j as i64);
            nabla = if j % 2 == 0 { &nabla + &term } else { &nabla - &term };
        }
        let rhs = &pre * &nabla;
        if lhs != rhs {
            verdict = Verdict::Fail(format!("x = {x}: left {lhs}, right {rhs}"));
            break;
        }
    }
    Ok(CheckReport::new("rodrigues", spec, n, None, verdict))
}
