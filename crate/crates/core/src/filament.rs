//! Closed filaments sampled at uniform parameter spacing and the right-hand
//! side
//!
//! ```text
//! X_t = Γ1 (X' × X'') / |X'|³ − α Γ2 Y' × (X − Y) / |X − Y|³
//! ```
//!
//! with samples of `X` and `Y` paired at equal parameter.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{f, Error, Result};
use crate::fullode::field_physical;
use crate::model::{ModelParams, PhysicalState};
use crate::scalar::{c, Scalar};

pub const MIN_SAMPLES: usize = 16;

/// Pointwise distance under which paired samples are in contact.
pub const CONTACT_GUARD: f64 = 1e-12;

pub type Vec3<T> = [T; 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum Stencil {
    #[default]
    FourthOrder,
    Spectral,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteFilament<T> {
    points: Vec<Vec3<T>>,
    strength: T,
}

impl<T: Scalar> DiscreteFilament<T> {
    pub fn new(points: Vec<Vec3<T>>, strength: T) -> Result<Self> {
        let n = points.len();
        if n < MIN_SAMPLES || n % 2 != 0 {
            return Err(Error::InvalidParameter {
                name: "n",
                reason: format!("need an even number of samples >= {MIN_SAMPLES}, got {n}"),
            });
        }
        Ok(Self { points, strength })
    }

    pub fn points(&self) -> &[Vec3<T>] {
        &self.points
    }

    pub fn strength(&self) -> T {
        self.strength
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sample `i` with periodic wrap-around.
    pub fn point(&self, i: isize) -> Vec3<T> {
        let n = self.points.len() as isize;
        self.points[i.rem_euclid(n) as usize]
    }

    /// The same curve moved by `shift`.
    pub fn translated(&self, shift: Vec3<T>) -> Self {
        let points = self
            .points
            .iter()
            .map(|p| [p[0] + shift[0], p[1] + shift[1], p[2] + shift[2]])
            .collect();
        Self {
            points,
            strength: self.strength,
        }
    }

    pub fn with_strength(&self, strength: T) -> Self {
        Self {
            points: self.points.clone(),
            strength,
        }
    }
}

fn sub<T: Scalar>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross<T: Scalar>(a: Vec3<T>, b: Vec3<T>) -> Vec3<T> {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm<T: Scalar>(a: Vec3<T>) -> T {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// First and second ξ-derivatives at every sample.
fn derivatives<T: Scalar>(fil: &DiscreteFilament<T>, stencil: Stencil) -> (Vec<Vec3<T>>, Vec<Vec3<T>>) {
    match stencil {
        Stencil::FourthOrder => fourth_order(fil),
        Stencil::Spectral => spectral(fil),
    }
}

fn fourth_order<T: Scalar>(fil: &DiscreteFilament<T>) -> (Vec<Vec3<T>>, Vec<Vec3<T>>) {
    let n = fil.len();
    let h = T::TAU() / T::from_count(n);
    let (c8, c12, c16, c30) = (c::<T>(8.0), c::<T>(12.0), c::<T>(16.0), c::<T>(30.0));
    let mut d1 = Vec::with_capacity(n);
    let mut d2 = Vec::with_capacity(n);
    for i in 0..n as isize {
        let (pm2, pm1, p0, pp1, pp2) = (
            fil.point(i - 2),
            fil.point(i - 1),
            fil.point(i),
            fil.point(i + 1),
            fil.point(i + 2),
        );
        let mut a = [T::zero(); 3];
        let mut b = [T::zero(); 3];
        for k in 0..3 {
            a[k] = (-pp2[k] + c8 * pp1[k] - c8 * pm1[k] + pm2[k]) / (c12 * h);
            b[k] = (-pp2[k] + c16 * pp1[k] - c30 * p0[k] + c16 * pm1[k] - pm2[k]) / (c12 * h * h);
        }
        d1.push(a);
        d2.push(b);
    }
    (d1, d2)
}

/// Fourier differentiation by a direct transform; the Nyquist mode is
/// dropped from the first derivative and kept in the second.
fn spectral<T: Scalar>(fil: &DiscreteFilament<T>) -> (Vec<Vec3<T>>, Vec<Vec3<T>>) {
    let n = fil.len();
    let nf = T::from_count(n);
    let twiddle: Vec<Complex<T>> = (0..n)
        .map(|j| Complex::from_polar(T::one(), -T::TAU() * T::from_count(j) / nf))
        .collect();
    let wavenumber = |k: usize| -> T {
        if k <= n / 2 {
            T::from_count(k)
        } else {
            -T::from_count(n - k)
        }
    };
    let mut d1 = vec![[T::zero(); 3]; n];
    let mut d2 = vec![[T::zero(); 3]; n];
    for comp in 0..3 {
        let coeffs: Vec<Complex<T>> = (0..n)
            .map(|k| {
                (0..n).fold(Complex::new(T::zero(), T::zero()), |acc, j| {
                    acc + twiddle[(k * j) % n] * fil.points[j][comp]
                })
            })
            .collect();
        for (j, (o1, o2)) in d1.iter_mut().zip(d2.iter_mut()).enumerate() {
            let mut s1 = Complex::new(T::zero(), T::zero());
            let mut s2 = Complex::new(T::zero(), T::zero());
            for (k, ck) in coeffs.iter().enumerate() {
                let kw = wavenumber(k);
                // inverse twiddle is the conjugate
                let e = twiddle[(k * j) % n].conj();
                if k != n / 2 {
                    s1 = s1 + *ck * e * Complex::new(T::zero(), kw);
                }
                s2 = s2 + *ck * e * (-kw * kw);
            }
            o1[comp] = s1.re / nf;
            o2[comp] = s2.re / nf;
        }
    }
    (d1, d2)
}

/// Velocity of every sample of `fx` induced by itself and by `fy`.
pub fn pde_rhs<T: Scalar>(
    fx: &DiscreteFilament<T>,
    fy: &DiscreteFilament<T>,
    alpha: T,
    stencil: Stencil,
) -> Result<Vec<Vec3<T>>> {
    if fx.len() != fy.len() {
        return Err(Error::InvalidParameter {
            name: "n",
            reason: format!("filaments have {} and {} samples", fx.len(), fy.len()),
        });
    }
    for (i, (x, y)) in fx.points.iter().zip(&fy.points).enumerate() {
        let dist = norm(sub(*x, *y));
        if !(dist > c(CONTACT_GUARD)) {
            return Err(Error::FilamentContact {
                index: i,
                distance: f(dist),
            });
        }
    }
    let (x1, x2) = derivatives(fx, stencil);
    let (y1, _) = derivatives(fy, stencil);
    let g1 = fx.strength;
    let g2 = fy.strength;
    Ok((0..fx.len())
        .map(|i| {
            let speed = norm(x1[i]);
            let selfind = cross(x1[i], x2[i]);
            let sep = sub(fx.points[i], fy.points[i]);
            let r = norm(sep);
            let inter = cross(y1[i], sep);
            let s3 = speed * speed * speed;
            let r3 = r * r * r;
            let mut v = [T::zero(); 3];
            for k in 0..3 {
                v[k] = g1 * selfind[k] / s3 - alpha * g2 * inter[k] / r3;
            }
            v
        })
        .collect())
}

/// Uniform samples of the coaxial circles of `phys` carrying strengths
/// `gammas`.
pub fn sample_circular_pair<T: Scalar>(
    phys: &PhysicalState<T>,
    gammas: (T, T),
    n: usize,
) -> Result<(DiscreteFilament<T>, DiscreteFilament<T>)> {
    let circle = |r: T, z: T| {
        (0..n)
            .map(|j| {
                let xi = T::TAU() * T::from_count(j) / T::from_count(n);
                [r * xi.cos(), r * xi.sin(), z]
            })
            .collect::<Vec<_>>()
    };
    Ok((
        DiscreteFilament::new(circle(phys.r1, phys.z1), gammas.0)?,
        DiscreteFilament::new(circle(phys.r2, phys.z2), gammas.1)?,
    ))
}

/// Largest deviations of the sampled right-hand side of a circular pair
/// from the coaxial-circle field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PdeCheck<T> {
    pub n: usize,
    pub max_radial_error: T,
    pub max_axial_error: T,
    pub max_azimuthal: T,
}

impl<T: Scalar> PdeCheck<T> {
    pub fn max_error(&self) -> T {
        self.max_radial_error.max(self.max_axial_error)
    }
}

/// Evaluates both filaments of the circular pair `phys` under the canonical
/// strengths of `params` and compares with [`field_physical`].
pub fn pde_check<T: Scalar>(
    phys: &PhysicalState<T>,
    params: &ModelParams<T>,
    n: usize,
    stencil: Stencil,
) -> Result<PdeCheck<T>> {
    let expected = field_physical(phys, params)?;
    let (fx, fy) = sample_circular_pair(phys, (params.signed_ratio(), T::one()), n)?;
    let vx = pde_rhs(&fx, &fy, params.alpha(), stencil)?;
    let vy = pde_rhs(&fy, &fx, params.alpha(), stencil)?;
    let mut out = PdeCheck {
        n,
        max_radial_error: T::zero(),
        max_axial_error: T::zero(),
        max_azimuthal: T::zero(),
    };
    for (vel, fil, dr, dz) in [
        (&vx, &fx, expected.r1, expected.z1),
        (&vy, &fy, expected.r2, expected.z2),
    ] {
        for (v, p) in vel.iter().zip(fil.points()) {
            let rho = p[0].hypot(p[1]);
            let (cs, sn) = (p[0] / rho, p[1] / rho);
            let radial = v[0] * cs + v[1] * sn;
            let azimuthal = -v[0] * sn + v[1] * cs;
            out.max_radial_error = out.max_radial_error.max((radial - dr).abs());
            out.max_axial_error = out.max_axial_error.max((v[2] - dz).abs());
            out.max_azimuthal = out.max_azimuthal.max(azimuthal.abs());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_self_induction() {
        let (fx, fy) = sample_circular_pair(&PhysicalState::new(2.0f64, 0.0, 1.0, 5.0), (1.5, 0.0), 256).unwrap();
        for stencil in [Stencil::FourthOrder, Stencil::Spectral] {
            let v = pde_rhs(&fx, &fy, 0.1, stencil).unwrap();
            for p in &v {
                assert!(p[0].abs() < 1e-6 && p[1].abs() < 1e-6);
                assert!((p[2] - 0.75).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn rejects_odd_or_short_sampling() {
        assert!(DiscreteFilament::new(vec![[0.0f64; 3]; 15], 1.0).is_err());
        assert!(DiscreteFilament::new(vec![[0.0f64; 3]; 17], 1.0).is_err());
        assert!(DiscreteFilament::new(vec![[0.0f64; 3]; 16], 1.0).is_ok());
    }

    #[test]
    fn contact_is_reported() {
        let (fx, fy) = sample_circular_pair(&PhysicalState::new(1.0f64, 0.0, 1.0, 0.0), (1.0, 1.0), 16).unwrap();
        assert!(matches!(
            pde_rhs(&fx, &fy, 0.1, Stencil::FourthOrder),
            Err(Error::FilamentContact { index: 0, .. })
        ));
    }

    #[test]
    fn sampled_circle_closes() {
        let (fx, _) = sample_circular_pair(&PhysicalState::new(1.3f64, 0.2, 0.7, 0.0), (1.0, 1.0), 32).unwrap();
        assert_eq!(fx.point(0), fx.point(32));
        assert!(fx
            .points()
            .iter()
            .all(|p| p[2] == 0.2 && (p[0].hypot(p[1]) - 1.3).abs() < 1e-15));
    }
}
