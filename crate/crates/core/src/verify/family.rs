//! Named test-function families used by suites and the command line.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bandlimited::{fejer_kernel, BandLimited};
use crate::error::{invalid, Error, Result};
use crate::geometry::Manifold;
use crate::random::{random_function, random_polynomial, random_real_function};

/// Monomials per polynomial in [`Family::Polynomial`].
pub const POLYNOMIAL_TERMS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// `e^{int}` on the circle, `e^{i n t_1}` on a torus, `Y_n^n` on the sphere.
    Monomial,
    /// Fejer kernel `F_n` (circle).
    Fejer,
    /// `Y_n^0` (sphere).
    Zonal,
    /// Reproducing kernel of degree `n` at the base point: the Dirichlet
    /// kernel on the circle, `sum_l sqrt((2l+1)/4pi) Y_l^0` on the sphere.
    Kernel,
    /// Gaussian coefficients.
    Random,
    /// Real-valued Gaussian coefficients.
    RealRandom,
    /// Restriction of a random polynomial in `(x, y, z)` (sphere).
    Polynomial,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::Monomial,
        Family::Fejer,
        Family::Zonal,
        Family::Kernel,
        Family::Random,
        Family::RealRandom,
        Family::Polynomial,
    ];

    /// Whether the family depends on the seed.
    pub fn is_random(&self) -> bool {
        matches!(self, Family::Random | Family::RealRandom | Family::Polynomial)
    }

    /// Member of degree `n`; random families draw from `(seed, stream)`.
    pub fn build(&self, manifold: Manifold, n: usize, seed: u64, stream: u64) -> Result<BandLimited> {
        let unsupported = || invalid(format!("family {self} is not defined on {manifold}"));
        match (self, manifold) {
            (Family::Monomial, Manifold::Sphere2) => BandLimited::spherical_harmonic(n, n, n as i64),
            (Family::Monomial, Manifold::Circle) => BandLimited::circle_mode(n, n as i64),
            (Family::Monomial, Manifold::Torus(m)) => {
                let mut k = vec![0; m];
                k[0] = n as i64;
                BandLimited::torus_mode(m, n, &k)
            }
            (Family::Fejer, Manifold::Circle) => Ok(fejer_kernel(n)),
            (Family::Zonal, Manifold::Sphere2) => BandLimited::spherical_harmonic(n, n, 0),
            (Family::Kernel, Manifold::Circle) => {
                BandLimited::from_coeffs(manifold, n, vec![Complex64::new(1.0, 0.0); 2 * n + 1])
            }
            (Family::Kernel, Manifold::Sphere2) => {
                let mut c = vec![Complex64::default(); (n + 1) * (n + 1)];
                for l in 0..=n {
                    c[l * l + l] = Complex64::new(((2 * l + 1) as f64 / (4.0 * std::f64::consts::PI)).sqrt(), 0.0);
                }
                BandLimited::from_coeffs(manifold, n, c)
            }
            (Family::Random, _) => Ok(random_function(manifold, n, seed, stream)),
            (Family::RealRandom, _) => Ok(random_real_function(manifold, n, seed, stream)),
            (Family::Polynomial, Manifold::Sphere2) => random_polynomial(n, POLYNOMIAL_TERMS, seed, stream),
            _ => Err(unsupported()),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Monomial => "monomial",
            Family::Fejer => "fejer",
            Family::Zonal => "zonal",
            Family::Kernel => "kernel",
            Family::Random => "random",
            Family::RealRandom => "real_random",
            Family::Polynomial => "polynomial",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string() == s)
            .ok_or_else(|| invalid(format!("unknown function family {s:?}")))
    }
}
