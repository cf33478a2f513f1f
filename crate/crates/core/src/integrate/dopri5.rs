//! Dormand–Prince 5(4) stepper with the free 4th-order dense output.

use crate::error::{f as f64_of, Error, Result};
use crate::scalar::{c, Scalar};

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

const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// Step-size controller settings.
#[derive(Debug, Clone, Copy)]
pub struct StepControl<T> {
    pub rtol: T,
    pub atol: T,
    /// Zero means "no limit".
    pub h_max: T,
    pub max_steps: usize,
    pub safety: T,
    pub fac_min: T,
    pub fac_max: T,
    /// PI stabilization exponent; zero gives the classic controller.
    pub beta: T,
}

impl<T: Scalar> StepControl<T> {
    pub fn new(rtol: T, atol: T) -> Self {
        Self {
            rtol,
            atol,
            h_max: T::zero(),
            max_steps: 5_000_000,
            safety: c(0.9),
            fac_min: c(0.2),
            fac_max: c(10.0),
            beta: c(0.04),
        }
    }

    pub(crate) fn validate(&self) -> Result<()> {
        for (name, v) in [("rtol", self.rtol), ("atol", self.atol)] {
            if !(v.is_finite() && v > T::zero()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("tolerance must be positive, got {v}"),
                });
            }
        }
        Ok(())
    }
}

/// Why a step could not be completed.
#[derive(Debug, Clone, PartialEq)]
pub enum StepFailure {
    /// The field refused to evaluate (guard, domain) and the step could not
    /// be shrunk further.
    Singular(Error),
    StepSizeUnderflow,
    TooManySteps,
}

/// Dense-output polynomial of the last accepted step.
#[derive(Debug, Clone, Copy)]
pub struct DenseStep<T, const N: usize> {
    pub t0: T,
    pub h: T,
    cont: [[T; N]; 5],
}

impl<T: Scalar, const N: usize> DenseStep<T, N> {
    /// State at `t` in `[t0, t0 + h]`.
    pub fn eval(&self, t: T) -> [T; N] {
        let s = (t - self.t0) / self.h;
        let s1 = T::one() - s;
        let mut out = [T::zero(); N];
        for (i, o) in out.iter_mut().enumerate() {
            let [c0, c1, c2, c3, c4] = [
                self.cont[0][i],
                self.cont[1][i],
                self.cont[2][i],
                self.cont[3][i],
                self.cont[4][i],
            ];
            *o = c0 + s * (c1 + s1 * (c2 + s * (c3 + s1 * c4)));
        }
        out
    }

    pub fn t1(&self) -> T {
        self.t0 + self.h
    }
}

/// Adaptive integrator over fixed-size state arrays, forward in time.
pub struct Dopri5<T, F, const N: usize> {
    field: F,
    ctl: StepControl<T>,
    t: T,
    y: [T; N],
    k1: [T; N],
    h: T,
    err_old: T,
    steps: usize,
    last: Option<DenseStep<T, N>>,
}

fn axpy<T: Scalar, const N: usize>(y: &[T; N], h: T, terms: &[(f64, &[T; N])]) -> [T; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = T::zero();
        for (a, k) in terms {
            acc = acc + c::<T>(*a) * k[i];
        }
        *o = *o + h * acc;
    }
    out
}

impl<T, F, const N: usize> Dopri5<T, F, N>
where
    T: Scalar,
    F: FnMut(T, &[T; N]) -> Result<[T; N]>,
{
    /// Evaluates the field at the initial state; its errors are returned as is.
    pub fn new(mut field: F, t0: T, y0: [T; N], ctl: StepControl<T>) -> Result<Self> {
        ctl.validate()?;
        let k1 = field(t0, &y0)?;
        let mut s = Self {
            field,
            ctl,
            t: t0,
            y: y0,
            k1,
            h: T::zero(),
            err_old: c(1e-4),
            steps: 0,
            last: None,
        };
        s.h = s.initial_step();
        Ok(s)
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn y(&self) -> &[T; N] {
        &self.y
    }

    /// Derivative at the current state.
    pub fn dy(&self) -> &[T; N] {
        &self.k1
    }

    pub fn last_step(&self) -> Option<&DenseStep<T, N>> {
        self.last.as_ref()
    }

    fn scale(&self, a: T, b: T) -> T {
        self.ctl.atol + self.ctl.rtol * a.abs().max(b.abs())
    }

    fn norm(&self, v: &[T; N], reference: &[T; N]) -> T {
        let mut acc = T::zero();
        for i in 0..N {
            let r = v[i] / self.scale(reference[i], reference[i]);
            acc = acc + r * r;
        }
        (acc / T::from_count(N)).sqrt()
    }

    fn initial_step(&mut self) -> T {
        let d0 = self.norm(&self.y, &self.y);
        let d1 = self.norm(&self.k1, &self.y);
        let small = c::<T>(1e-5);
        let mut h0 = if d0 < small || d1 < small {
            c::<T>(1e-6)
        } else {
            c::<T>(0.01) * d0 / d1
        };
        if self.ctl.h_max > T::zero() {
            h0 = h0.min(self.ctl.h_max);
        }
        let y1 = axpy(&self.y, h0, &[(1.0, &self.k1)]);
        let Ok(f1) = (self.field)(self.t + h0, &y1) else {
            return h0 * c(0.01);
        };
        let mut diff = [T::zero(); N];
        for i in 0..N {
            diff[i] = f1[i] - self.k1[i];
        }
        let d2 = self.norm(&diff, &self.y) / h0;
        let dmax = d1.max(d2);
        let h1 = if dmax <= c(1e-15) {
            (h0 * c(1e-3)).max(c(1e-6))
        } else {
            (c::<T>(0.01) / dmax).powf(c(0.2))
        };
        let mut h = (c::<T>(100.0) * h0).min(h1);
        if self.ctl.h_max > T::zero() {
            h = h.min(self.ctl.h_max);
        }
        h
    }

    fn underflow(&self, h: T) -> bool {
        !(h > c::<T>(1e-14) * self.t.abs()) || h == T::zero()
    }

    /// Takes one accepted step, never passing `t_limit`.
    pub fn step(&mut self, t_limit: T) -> std::result::Result<(), StepFailure> {
        let mut last_field_error: Option<Error> = None;
        loop {
            if self.steps >= self.ctl.max_steps {
                return Err(StepFailure::TooManySteps);
            }
            let mut h = self.h;
            if self.ctl.h_max > T::zero() {
                h = h.min(self.ctl.h_max);
            }
            let remaining = t_limit - self.t;
            if !(remaining > T::zero()) {
                return Ok(());
            }
            let last = h * c(1.01) >= remaining;
            if last {
                h = remaining;
            }
            if self.underflow(h) {
                return Err(match last_field_error {
                    Some(e) => StepFailure::Singular(e),
                    None => StepFailure::StepSizeUnderflow,
                });
            }
            self.steps += 1;
            match self.attempt(h) {
                Ok(trial) => {
                    if trial.err <= T::one() {
                        let fac = self.next_factor(trial.err, true);
                        self.accept(h, trial, last, t_limit);
                        self.h = h * fac;
                        return Ok(());
                    }
                    self.h = h * self.next_factor(trial.err, false);
                }
                Err(e) => {
                    last_field_error = Some(e);
                    self.h = h * c(0.25);
                }
            }
        }
    }

    fn accept(&mut self, h: T, trial: Trial<T, N>, last: bool, t_limit: T) {
        let [k1, _, k3, k4, k5, k6, k7] = trial.k;
        let y0 = self.y;
        let y1 = trial.y_new;
        let mut cont = [[T::zero(); N]; 5];
        for i in 0..N {
            let ydiff = y1[i] - y0[i];
            let bspl = h * k1[i] - ydiff;
            cont[0][i] = y0[i];
            cont[1][i] = ydiff;
            cont[2][i] = bspl;
            cont[3][i] = ydiff - h * k7[i] - bspl;
            cont[4][i] = h
                * (c::<T>(D1) * k1[i]
                    + c::<T>(D3) * k3[i]
                    + c::<T>(D4) * k4[i]
                    + c::<T>(D5) * k5[i]
                    + c::<T>(D6) * k6[i]
                    + c::<T>(D7) * k7[i]);
        }
        self.last = Some(DenseStep { t0: self.t, h, cont });
        self.t = if last { t_limit } else { self.t + h };
        self.y = y1;
        self.k1 = k7;
    }

    fn next_factor(&mut self, err: T, accepted: bool) -> T {
        let ctl = self.ctl;
        let expo = c::<T>(0.2) - ctl.beta * c(0.75);
        let err = err.max(c(1e-10));
        let mut fac = ctl.safety * err.powf(-expo);
        if accepted {
            fac = fac * self.err_old.powf(ctl.beta);
            self.err_old = err.max(c(1e-4));
            fac.max(ctl.fac_min).min(ctl.fac_max)
        } else {
            fac.max(ctl.fac_min).min(T::one())
        }
    }

    fn attempt(&mut self, h: T) -> Result<Trial<T, N>> {
        let t = self.t;
        let y = self.y;
        let k1 = self.k1;
        let f = &mut self.field;
        let k2 = f(t + c::<T>(C2) * h, &axpy(&y, h, &[(A21, &k1)]))?;
        let k3 = f(t + c::<T>(C3) * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]))?;
        let k4 = f(t + c::<T>(C4) * h, &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]))?;
        let k5 = f(
            t + c::<T>(C5) * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        )?;
        let k6 = f(
            t + h,
            &axpy(&y, h, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)]),
        )?;
        let y_new = axpy(&y, h, &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)]);
        let k7 = f(t + h, &y_new)?;

        let mut acc = T::zero();
        for i in 0..N {
            let e = h
                * (c::<T>(E1) * k1[i]
                    + c::<T>(E3) * k3[i]
                    + c::<T>(E4) * k4[i]
                    + c::<T>(E5) * k5[i]
                    + c::<T>(E6) * k6[i]
                    + c::<T>(E7) * k7[i]);
            let r = e / self.scale(y[i], y_new[i]);
            acc = acc + r * r;
        }
        let err = (acc / T::from_count(N)).sqrt();
        if !err.is_finite() {
            return Err(Error::IntegrationFailed {
                t: f64_of(t),
                reason: "non-finite error estimate".into(),
            });
        }
        Ok(Trial {
            y_new,
            k: [k1, k2, k3, k4, k5, k6, k7],
            err,
        })
    }
}

struct Trial<T, const N: usize> {
    y_new: [T; N],
    k: [[T; N]; 7],
    err: T,
}
