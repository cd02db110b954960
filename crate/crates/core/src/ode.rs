//! Adaptive Dormand-Prince 5(4) integrator for autonomous linear and
//! nonlinear systems on real or complex state vectors.

use nalgebra::{ComplexField, DVector};

use crate::error::{Error, Result};

/// Integrator settings. Defaults match the solver tolerances used across
/// the crate: relative 1e-9, absolute 1e-12.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// Optional cap on the step size.
    pub max_step: Option<f64>,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 5_000_000,
            max_step: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

/// Optional per-step hooks.
pub struct Hooks<'a, T: ComplexField<RealField = f64>> {
    /// Extra acceptance test on `(previous, candidate)`; a `false` halves the step.
    pub accept: Option<&'a dyn Fn(&DVector<T>, &DVector<T>) -> bool>,
    /// Applied to every accepted state (e.g. re-symmetrisation).
    pub post_step: Option<&'a dyn Fn(&mut DVector<T>)>,
}

impl<T: ComplexField<RealField = f64>> Default for Hooks<'_, T> {
    fn default() -> Self {
        Self {
            accept: None,
            post_step: None,
        }
    }
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo<T: ComplexField<RealField = f64> + Copy>(
    y: &DVector<T>,
    h: f64,
    terms: &[(f64, &DVector<T>)],
    out: &mut DVector<T>,
) {
    out.copy_from(y);
    for (a, k) in terms {
        if *a != 0.0 {
            out.axpy(T::from_real(h * a), k, T::one());
        }
    }
}

fn error_norm<T: ComplexField<RealField = f64> + Copy>(
    err: &DVector<T>,
    y0: &DVector<T>,
    y1: &DVector<T>,
    rtol: f64,
    atol: f64,
) -> f64 {
    let n = err.len().max(1) as f64;
    let mut acc = 0.0;
    for i in 0..err.len() {
        let sc = atol + rtol * y0[i].modulus().max(y1[i].modulus());
        let r = err[i].modulus() / sc;
        acc += r * r;
    }
    (acc / n).sqrt()
}

impl Dopri5 {
    /// Integrates `y' = f(t, y)` from `t_grid[0]`, reporting the state at every
    /// grid point (including the first) through `on_output`. Steps are clipped
    /// to land exactly on grid points.
    pub fn solve<T, F, O>(
        &self,
        mut rhs: F,
        y0: DVector<T>,
        t_grid: &[f64],
        hooks: Hooks<'_, T>,
        mut on_output: O,
    ) -> Result<Stats>
    where
        T: ComplexField<RealField = f64> + Copy,
        F: FnMut(f64, &DVector<T>, &mut DVector<T>),
        O: FnMut(usize, f64, &DVector<T>) -> Result<()>,
    {
        let mut stats = Stats::default();
        if t_grid.is_empty() {
            return Ok(stats);
        }
        if t_grid.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter {
                name: "t_grid".into(),
                reason: "time grid must be non-decreasing".into(),
            });
        }
        let n = y0.len();
        let mut y = y0;
        let mut t = t_grid[0];
        on_output(0, t, &y)?;
        if t_grid.len() == 1 {
            return Ok(stats);
        }

        let mut k1 = DVector::<T>::zeros(n);
        let mut k2 = k1.clone();
        let mut k3 = k1.clone();
        let mut k4 = k1.clone();
        let mut k5 = k1.clone();
        let mut k6 = k1.clone();
        let mut k7 = k1.clone();
        let mut tmp = k1.clone();
        let mut y_new = k1.clone();
        let mut err = k1.clone();

        rhs(t, &y, &mut k1);
        stats.rhs_evals += 1;

        let span = t_grid[t_grid.len() - 1] - t;
        let mut h = self.initial_step(&mut rhs, t, &y, &k1, span, &mut stats);
        if let Some(m) = self.max_step {
            h = h.min(m);
        }

        for (idx, &t_target) in t_grid.iter().enumerate().skip(1) {
            while t < t_target {
                if stats.accepted + stats.rejected >= self.max_steps {
                    return Err(Error::StepUnderflow { t, step: h });
                }
                let remaining = t_target - t;
                let mut step = h.min(remaining);
                let landing = remaining - step <= 1e-12 * remaining.max(t.abs());
                if landing {
                    step = remaining;
                }
                if step < 1e-14 * t.abs().max(span).max(1e-300) {
                    return Err(Error::StepUnderflow { t, step });
                }

                combo(&y, step, &[(A21, &k1)], &mut tmp);
                rhs(t + C2 * step, &tmp, &mut k2);
                combo(&y, step, &[(A31, &k1), (A32, &k2)], &mut tmp);
                rhs(t + C3 * step, &tmp, &mut k3);
                combo(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)], &mut tmp);
                rhs(t + C4 * step, &tmp, &mut k4);
                combo(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], &mut tmp);
                rhs(t + C5 * step, &tmp, &mut k5);
                combo(
                    &y,
                    step,
                    &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
                    &mut tmp,
                );
                rhs(t + step, &tmp, &mut k6);
                combo(
                    &y,
                    step,
                    &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
                    &mut y_new,
                );
                rhs(t + step, &y_new, &mut k7);
                stats.rhs_evals += 6;

                err.fill(T::zero());
                for (e, k) in [(E1, &k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)] {
                    err.axpy(T::from_real(step * e), k, T::one());
                }
                let en = error_norm(&err, &y, &y_new, self.rtol, self.atol);
                let hook_ok = hooks.accept.map_or(true, |f| f(&y, &y_new));

                if en <= 1.0 && hook_ok {
                    stats.accepted += 1;
                    t = if landing { t_target } else { t + step };
                    std::mem::swap(&mut y, &mut y_new);
                    if let Some(post) = hooks.post_step {
                        post(&mut y);
                        rhs(t, &y, &mut k1);
                        stats.rhs_evals += 1;
                    } else {
                        std::mem::swap(&mut k1, &mut k7);
                    }
                    let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                    // keep the natural step, not the grid-clipped one
                    let base = if landing && step < h { h } else { step };
                    h = base * fac;
                    if let Some(m) = self.max_step {
                        h = h.min(m);
                    }
                } else {
                    stats.rejected += 1;
                    h = if hook_ok {
                        step * (0.9 * en.powf(-0.2)).clamp(0.1, 1.0)
                    } else {
                        step * 0.5
                    };
                }
            }
            on_output(idx, t, &y)?;
        }
        Ok(stats)
    }

    fn initial_step<T, F>(
        &self,
        rhs: &mut F,
        t: f64,
        y: &DVector<T>,
        f0: &DVector<T>,
        span: f64,
        stats: &mut Stats,
    ) -> f64
    where
        T: ComplexField<RealField = f64> + Copy,
        F: FnMut(f64, &DVector<T>, &mut DVector<T>),
    {
        let scale = |v: &DVector<T>| -> f64 {
            let n = v.len().max(1) as f64;
            let mut acc = 0.0;
            for i in 0..v.len() {
                let sc = self.atol + self.rtol * y[i].modulus();
                acc += (v[i].modulus() / sc).powi(2);
            }
            (acc / n).sqrt()
        };
        let d0 = scale(y);
        let d1 = scale(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        let h0 = h0.min(span.max(f64::MIN_POSITIVE));
        let mut y1 = y.clone();
        y1.axpy(T::from_real(h0), f0, T::one());
        let mut f1 = DVector::<T>::zeros(y.len());
        rhs(t + h0, &y1, &mut f1);
        stats.rhs_evals += 1;
        let d2 = scale(&(&f1 - f0)) / h0;
        let h1 = if d1.max(d2) <= 1e-15 {
            (h0 * 1e-3).max(1e-6)
        } else {
            (0.01 / d1.max(d2)).powf(0.2)
        };
        (100.0 * h0).min(h1).min(span.max(f64::MIN_POSITIVE))
    }
}

/// Evenly spaced grid `start..=stop` with `points` entries.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..points)
            .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
            .collect(),
    }
}
