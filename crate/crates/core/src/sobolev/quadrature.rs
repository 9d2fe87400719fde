use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::ContinuousWeight;

/// Panel rule used along the line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Rule {
    GaussLegendreComposite,
    Trapezoid,
}

/// Truncation and resolution of a vertical-line integral.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadratureSpec {
    /// Integrate over `Im z ∈ [-T, T]`.
    pub truncation: f64,
    /// Number of equal panels over `[-T, T]`; the error estimate also uses twice as many.
    pub panels: usize,
    /// Points per panel.
    pub order: usize,
    pub rule: Rule,
    /// Allowed tail mass relative to the peak integrand magnitude.
    pub tail_tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            truncation: 40.0,
            panels: 80,
            order: 64,
            rule: Rule::GaussLegendreComposite,
            tail_tolerance: 1e-14,
        }
    }
}

/// A vertical line `Re z = σ` and the pole sequences it has to separate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Contour {
    pub sigma: f64,
    pub increasing_poles: Vec<Complex64>,
    pub decreasing_poles: Vec<Complex64>,
    pub separation_ok: bool,
}

impl Contour {
    pub fn new(sigma: f64, increasing_poles: Vec<Complex64>, decreasing_poles: Vec<Complex64>) -> Self {
        let separation_ok =
            increasing_poles.iter().all(|p| p.re > sigma) && decreasing_poles.iter().all(|p| p.re < sigma);
        Contour { sigma, increasing_poles, decreasing_poles, separation_ok }
    }

    /// The open strip `(max Re decreasing, min Re increasing)`, if any.
    pub fn strip(weight: &ContinuousWeight) -> Option<(f64, f64)> {
        let lo = weight.decreasing_poles().iter().map(|p| p.re).fold(f64::NEG_INFINITY, f64::max);
        let hi = weight.increasing_poles().iter().map(|p| p.re).fold(f64::INFINITY, f64::min);
        (lo < hi).then_some((lo, hi))
    }

    /// The line through the middle of the separating strip.
    pub fn for_weight(weight: &ContinuousWeight) -> Result<Self> {
        let (lo, hi) = Contour::strip(weight).ok_or_else(|| {
            Error::ContourInvalid("no vertical line separates the increasing from the decreasing poles".into())
        })?;
        let sigma = if lo.is_finite() && hi.is_finite() {
            0.5 * (lo + hi)
        } else if lo.is_finite() {
            lo + 0.5
        } else if hi.is_finite() {
            hi - 0.5
        } else {
            0.0
        };
        Ok(Contour::new(sigma, weight.increasing_poles(), weight.decreasing_poles()))
    }

    /// A line at a caller-chosen abscissa.
    pub fn at(weight: &ContinuousWeight, sigma: f64) -> Self {
        Contour::new(sigma, weight.increasing_poles(), weight.decreasing_poles())
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n <= 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Parameters `t_j` and weights `w_j` for `∫_{-T}^{T} f(t) dt ≈ Σ w_j f(t_j)`.
fn line_rule(quad: &QuadratureSpec, panels: usize) -> Vec<(f64, f64)> {
    let t = quad.truncation;
    let h = 2.0 * t / panels as f64;
    match quad.rule {
        Rule::GaussLegendreComposite => {
            let (x, w) = gauss_legendre(quad.order);
            (0..panels)
                .flat_map(|p| {
                    let mid = -t + h * (p as f64 + 0.5);
                    x.iter().zip(w.iter()).map(move |(xi, wi)| (mid + 0.5 * h * xi, 0.5 * h * wi)).collect::<Vec<_>>()
                })
                .collect()
        }
        Rule::Trapezoid => {
            let m = panels * quad.order.max(1);
            let step = 2.0 * t / m as f64;
            (0..=m)
                .map(|j| {
                    let w = if j == 0 || j == m { 0.5 * step } else { step };
                    (-t + step * j as f64, w)
                })
                .collect()
        }
    }
}

/// Neumaier-compensated complex sum.
#[derive(Default, Clone, Copy)]
pub struct CompensatedSum {
    sum: Complex64,
    comp: Complex64,
}

impl CompensatedSum {
    pub fn add(&mut self, v: Complex64) {
        fn step(s: &mut f64, c: &mut f64, v: f64) {
            let t = *s + v;
            if s.abs() >= v.abs() {
                *c += (*s - t) + v;
            } else {
                *c += (v - t) + *s;
            }
            *s = t;
        }
        step(&mut self.sum.re, &mut self.comp.re, v.re);
        step(&mut self.sum.im, &mut self.comp.im, v.im);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.comp
    }
}

/// Weighted nodes of one resolution: `∫ F dz ≈ Σ weights_j · F(z_j)`.
#[derive(Clone, Debug)]
pub(crate) struct NodeSet {
    /// Points at which the polynomials are evaluated.
    pub points: Vec<Complex64>,
    /// Quadrature weight × `dz/dt` × Jacobian × weight function.
    pub weights: Vec<Complex64>,
    /// The bare rule weights, for recovering integrand magnitudes.
    pub rule_weights: Vec<f64>,
}

/// Precomputed nodes at `P` and `2P` panels plus the endpoint data for tails.
#[derive(Clone, Debug)]
pub struct ContourRule {
    pub(crate) coarse: NodeSet,
    pub(crate) fine: NodeSet,
    /// `(point, weight value incl. Jacobian)` at `t = ±T` and `t = ±(T-1)`.
    pub(crate) ends: Vec<(Complex64, Complex64)>,
    pub(crate) tail_tolerance: f64,
}

/// A contour integral with its error diagnostics.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ContourValue {
    pub value: Complex64,
    /// `|I_P - I_2P|`.
    pub error: f64,
    /// Estimated mass outside `[-T, T]`.
    pub tail: f64,
    /// Largest integrand magnitude on the nodes.
    pub peak: f64,
}

impl ContourRule {
    pub fn new(weight: &ContinuousWeight, contour: &Contour, quad: &QuadratureSpec) -> Result<Self> {
        if !contour.separation_ok {
            return Err(Error::ContourInvalid(format!(
                "line Re z = {} does not separate the pole sequences",
                contour.sigma
            )));
        }
        if !(quad.truncation > 1.0) || quad.panels == 0 || quad.order == 0 {
            return Err(Error::InvalidArgument("quadrature needs T > 1, panels > 0, order > 0".into()));
        }
        let i = Complex64::new(0.0, 1.0);
        let jac = i * weight.measure();
        let sigma = contour.sigma;
        let build = |panels: usize| -> Result<NodeSet> {
            let rule = line_rule(quad, panels);
            let vals: Vec<Result<(Complex64, Complex64)>> = rule
                .par_iter()
                .map(|&(t, w)| {
                    let z = Complex64::new(sigma, t);
                    let lw = weight.log_weight(z)?;
                    Ok((weight.point(z), jac * w * lw.exp()))
                })
                .collect();
            let mut points = Vec::with_capacity(vals.len());
            let mut weights = Vec::with_capacity(vals.len());
            for v in vals {
                let (p, w) = v?;
                points.push(p);
                weights.push(w);
            }
            let rule_weights = rule.iter().map(|r| r.1).collect();
            Ok(NodeSet { points, weights, rule_weights })
        };
        let coarse = build(quad.panels)?;
        let fine = build(2 * quad.panels)?;
        let t = quad.truncation;
        let mut ends = Vec::new();
        for &tt in &[t, t - 1.0, -t, -(t - 1.0)] {
            let z = Complex64::new(sigma, tt);
            ends.push((weight.point(z), jac * weight.log_weight(z)?.exp()));
        }
        Ok(ContourRule { coarse, fine, ends, tail_tolerance: quad.tail_tolerance })
    }

    pub fn points(&self) -> &[Complex64] {
        &self.fine.points
    }

    pub fn coarse_points(&self) -> &[Complex64] {
        &self.coarse.points
    }

    pub fn end_points(&self) -> Vec<Complex64> {
        self.ends.iter().map(|e| e.0).collect()
    }

    /// Integrates a product given its values on the coarse nodes, fine nodes and endpoints.
    pub fn integrate_values(&self, coarse: &[Complex64], fine: &[Complex64], ends: &[Complex64]) -> Result<ContourValue> {
        let sum = |set: &NodeSet, vals: &[Complex64]| {
            let mut acc = CompensatedSum::default();
            let mut peak: f64 = 0.0;
            for ((w, q), v) in set.weights.iter().zip(&set.rule_weights).zip(vals) {
                let term = w * v;
                peak = peak.max(term.norm() / q);
                acc.add(term);
            }
            (acc.value(), peak)
        };
        let (ic, _) = sum(&self.coarse, coarse);
        let (ifine, peak) = sum(&self.fine, fine);
        let f: Vec<f64> = self.ends.iter().zip(ends).map(|((_, w), v)| (w * v).norm()).collect();
        let tail = tail_bound(f[0], f[1]) + tail_bound(f[2], f[3]);
        if tail > self.tail_tolerance * peak {
            return Err(Error::TailTooFat { tail, tolerance: self.tail_tolerance * peak });
        }
        Ok(ContourValue { value: ifine, error: (ifine - ic).norm(), tail, peak })
    }

    /// `∫ f(x) g(x) w(z) dz` for two polynomials given as evaluators.
    pub fn integrate<F>(&self, eval: F) -> Result<ContourValue>
    where
        F: Fn(Complex64) -> Complex64 + Sync,
    {
        let coarse: Vec<Complex64> = self.coarse.points.par_iter().map(|&p| eval(p)).collect();
        let fine: Vec<Complex64> = self.fine.points.par_iter().map(|&p| eval(p)).collect();
        let ends: Vec<Complex64> = self.ends.iter().map(|&(p, _)| eval(p)).collect();
        self.integrate_values(&coarse, &fine, &ends)
    }
}

/// Tail mass beyond `T` given `|F(T)|` and `|F(T-1)|`, assuming exponential decay.
fn tail_bound(at_t: f64, at_t_minus_one: f64) -> f64 {
    if at_t == 0.0 {
        return 0.0;
    }
    let rate = (at_t_minus_one / at_t).ln();
    if rate <= 0.0 || !rate.is_finite() {
        return f64::INFINITY;
    }
    at_t / rate
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        for n in [1, 2, 5, 16, 64] {
            let (x, w) = gauss_legendre(n);
            let total: f64 = w.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "n={n}");
            for k in 0..(2 * n).min(40) {
                let approx: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
                let exact = if k % 2 == 1 { 0.0 } else { 2.0 / (k as f64 + 1.0) };
                assert!((approx - exact).abs() < 1e-13, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(Complex64::new(1e16, 0.0));
        s.add(Complex64::new(1.0, 0.0));
        s.add(Complex64::new(-1e16, 0.0));
        assert_eq!(s.value().re, 1.0);
    }

    #[test]
    fn tail_bound_of_exponential() {
        let r = 2.0_f64;
        let tb = tail_bound((-r * 10.0).exp(), (-r * 9.0).exp());
        assert!((tb - (-r * 10.0).exp() / r).abs() < 1e-15);
        assert!(tail_bound(1.0, 0.5).is_infinite());
    }
}
