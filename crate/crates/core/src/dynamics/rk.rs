//! Dormand-Prince 5(4) for `dy/dt = A y` with complex `y`.

use nalgebra::DVector;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qcore::CMatrix;

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
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type CVec = DVector<C64>;

/// Adaptive integrator state for a fixed generator.
pub(crate) struct DormandPrince<'a> {
    a: &'a CMatrix,
    rtol: f64,
    atol: f64,
    h: f64,
    pub(crate) steps: usize,
    pub(crate) rejected: usize,
}

pub(crate) const MAX_STEPS: usize = 20_000_000;

impl<'a> DormandPrince<'a> {
    pub(crate) fn new(a: &'a CMatrix, rtol: f64, atol: f64) -> DormandPrince<'a> {
        DormandPrince { a, rtol, atol, h: 0.0, steps: 0, rejected: 0 }
    }

    fn initial_step(&self, y: &CVec, f0: &CVec, span: f64) -> f64 {
        let scale = |v: &CVec| {
            let n = v.len() as f64;
            (v.iter()
                .zip(y.iter())
                .map(|(vi, yi)| (vi.norm() / (self.atol + self.rtol * yi.norm())).powi(2))
                .sum::<f64>()
                / n)
                .sqrt()
        };
        let d0 = scale(y);
        let d1 = scale(f0);
        let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h0.min(span)
    }

    /// Advances `y` from `t` to `t_end` exactly (internal time units).
    pub(crate) fn advance(&mut self, y: &mut CVec, t: f64, t_end: f64) -> Result<()> {
        let span = t_end - t;
        if span <= 0.0 {
            return Ok(());
        }
        let a = self.a;
        let mut k1 = a * &*y;
        if self.h <= 0.0 {
            self.h = self.initial_step(y, &k1, span);
        }
        let mut t = t;
        let min_step = 1e-14 * t_end.abs().max(1.0);
        while t < t_end {
            let last = t + self.h >= t_end;
            let h = if last { t_end - t } else { self.h };
            if h < min_step || self.steps >= MAX_STEPS {
                return Err(Error::Stiffness { t_reached_ns: crate::physics::internal_to_ns(t) });
            }
            let hc = |x: f64| C64::new(h * x, 0.0);
            let k2 = a * (&*y + &k1 * hc(A21));
            let k3 = a * (&*y + &k1 * hc(A31) + &k2 * hc(A32));
            let k4 = a * (&*y + &k1 * hc(A41) + &k2 * hc(A42) + &k3 * hc(A43));
            let k5 = a * (&*y + &k1 * hc(A51) + &k2 * hc(A52) + &k3 * hc(A53) + &k4 * hc(A54));
            let k6 = a
                * (&*y + &k1 * hc(A61) + &k2 * hc(A62) + &k3 * hc(A63) + &k4 * hc(A64) + &k5 * hc(A65));
            let y_new = &*y + &k1 * hc(B1) + &k3 * hc(B3) + &k4 * hc(B4) + &k5 * hc(B5) + &k6 * hc(B6);
            let k7 = a * &y_new;
            let err = &k1 * hc(E1) + &k3 * hc(E3) + &k4 * hc(E4) + &k5 * hc(E5) + &k6 * hc(E6) + &k7 * hc(E7);

            let n = y.len() as f64;
            let norm = (err
                .iter()
                .zip(y.iter().zip(y_new.iter()))
                .map(|(e, (y0, y1))| {
                    let sc = self.atol + self.rtol * y0.norm().max(y1.norm());
                    (e.norm() / sc).powi(2)
                })
                .sum::<f64>()
                / n)
                .sqrt();

            if norm <= 1.0 {
                t = if last { t_end } else { t + h };
                *y = y_new;
                k1 = k7;
                self.steps += 1;
                let factor = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                // a shortened final step says nothing about the natural step size
                if !last || h >= self.h {
                    self.h = h * factor;
                }
            } else {
                self.rejected += 1;
                self.h = h * (0.9 * norm.powf(-0.2)).clamp(0.2, 1.0);
            }
        }
        Ok(())
    }
}
