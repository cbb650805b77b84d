//! Reference integrator for the spatially homogeneous reduction of the
//! model. With all gradients zero the system collapses to three ODEs per
//! point:
//!
//!   p' = lambda p (1 - p),    c' = -c - mu p c,    w' = gamma p (1 - w)
//!
//! which a classical fourth-order one-step method resolves to far below the
//! solver's splitting error. The w component additionally has the closed
//! form 1 - w = (1 - w0) exp(-gamma Int_0^t p), cross-checked here with
//! Simpson quadrature of the computed p(s).

use angio_core::{Params, SimError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeState {
    pub p: f64,
    pub c: f64,
    pub w: f64,
    pub t: f64,
}

impl OdeState {
    pub fn new(p: f64, c: f64, w: f64) -> Self {
        OdeState { p, c, w, t: 0.0 }
    }
}

fn rhs(params: &Params, y: [f64; 3]) -> [f64; 3] {
    let [p, c, w] = y;
    [
        params.lambda * p * (1.0 - p),
        -c - params.mu * p * c,
        params.gamma * p * (1.0 - w),
    ]
}

/// Classical RK4 trace of the homogeneous system, including the initial
/// state; the horizon is reached exactly (last step shortened if needed).
pub fn ode_oracle(params: &Params, init: OdeState, horizon: f64, dt: f64) -> Result<Vec<OdeState>, SimError> {
    if !(dt > 0.0) {
        return Err(SimError::Invalid(format!("oracle dt must be positive, got {dt}")));
    }
    if horizon < 0.0 {
        return Err(SimError::Invalid(format!("oracle horizon must be nonnegative, got {horizon}")));
    }
    let mut out = Vec::with_capacity((horizon / dt).ceil() as usize + 2);
    let mut y = [init.p, init.c, init.w];
    let mut t = 0.0;
    out.push(OdeState { p: y[0], c: y[1], w: y[2], t });
    while t < horizon - 1e-12 * dt.max(1.0) {
        let h = dt.min(horizon - t);
        let k1 = rhs(params, y);
        let k2 = rhs(params, add(y, scale(k1, 0.5 * h)));
        let k3 = rhs(params, add(y, scale(k2, 0.5 * h)));
        let k4 = rhs(params, add(y, scale(k3, h)));
        for i in 0..3 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        t += h;
        out.push(OdeState { p: y[0], c: y[1], w: y[2], t });
    }
    Ok(out)
}

fn add(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

/// Logistic closed form p(t) = p0 / (p0 + (1 - p0) e^{-lambda t}).
pub fn logistic_exact(p0: f64, lambda: f64, t: f64) -> f64 {
    p0 / (p0 + (1.0 - p0) * (-lambda * t).exp())
}

/// Largest gap between the integrated w and the closed form
/// 1 - w = (1 - w0) exp(-gamma Int p), with the integral of p by composite
/// Simpson over the trace (checked at every even index).
pub fn w_closed_form_gap(params: &Params, trace: &[OdeState]) -> f64 {
    if trace.len() < 3 {
        return 0.0;
    }
    let w0 = trace[0].w;
    let mut gap = 0.0_f64;
    let mut integral = 0.0;
    let mut k = 2;
    while k < trace.len() {
        let h = trace[k].t - trace[k - 1].t;
        integral += h / 3.0 * (trace[k - 2].p + 4.0 * trace[k - 1].p + trace[k].p);
        let w_closed = 1.0 - (1.0 - w0) * (-params.gamma * integral).exp();
        gap = gap.max((trace[k].w - w_closed).abs());
        k += 2;
    }
    gap
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equilibrium_stays_fixed() {
        let trace = ode_oracle(&Params::default(), OdeState::new(1.0, 0.0, 1.0), 5.0, 0.01).unwrap();
        for s in &trace {
            assert!((s.p - 1.0).abs() < 1e-12);
            assert!(s.c.abs() < 1e-12);
            assert!((s.w - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn logistic_reaches_three_quarters_at_ln_3() {
        // lambda = 1, p0 = 0.5: p(t) = 1/(1 + e^{-t}), so p(ln 3) = 3/4
        let params = Params::default();
        let t_star = 3.0_f64.ln();
        let trace = ode_oracle(&params, OdeState::new(0.5, 0.0, 1.0), t_star, 1e-3).unwrap();
        let last = trace.last().unwrap();
        assert!((last.t - t_star).abs() < 1e-12);
        assert!((last.p - 0.75).abs() < 1e-10, "p = {}", last.p);
        assert!((logistic_exact(0.5, 1.0, t_star) - 0.75).abs() < 1e-14);
    }

    #[test]
    fn c_decays_linearly_when_p_is_pinned_at_one() {
        // p0 = 1 keeps p = 1, so c' = -(1 + mu) c exactly
        let params = Params::default();
        let trace = ode_oracle(&params, OdeState::new(1.0, 1.0, 1.0), 2.0, 1e-3).unwrap();
        let last = trace.last().unwrap();
        let exact = (-(1.0 + params.mu) * 2.0).exp();
        assert!((last.c - exact).abs() < 1e-11, "c = {} vs {exact}", last.c);
    }

    #[test]
    fn rk4_order_at_least_three_point_nine() {
        // gap to the closed-form logistic at t = 1 under dt halving
        let params = Params::default();
        let exact = logistic_exact(0.5, params.lambda, 1.0);
        let errs: Vec<f64> = [0.2, 0.1, 0.05]
            .iter()
            .map(|&dt| {
                let trace = ode_oracle(&params, OdeState::new(0.5, 0.0, 1.0), 1.0, dt).unwrap();
                (trace.last().unwrap().p - exact).abs()
            })
            .collect();
        let o1 = (errs[0] / errs[1]).log2();
        let o2 = (errs[1] / errs[2]).log2();
        let fitted = 0.5 * (o1 + o2);
        assert!(fitted >= 3.9, "orders {o1} {o2}");
    }

    #[test]
    fn w_matches_closed_form_via_simpson() {
        let params = Params::default();
        let trace = ode_oracle(&params, OdeState::new(0.5, 1.0, 0.8), 10.0, 1e-3).unwrap();
        let gap = w_closed_form_gap(&params, &trace);
        assert!(gap <= 1e-8, "gap {gap}");
    }
}
