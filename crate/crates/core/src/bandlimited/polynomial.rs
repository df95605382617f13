use num_complex::Complex64;

use super::{project, BandLimited};
use crate::error::{Error, Result};
use crate::geometry::Manifold;
use crate::norms::build_quadrature;

/// `coeff * x_1^a x_2^b x_3^c` in the ambient coordinates of `R^3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub powers: [u32; 3],
}

impl Monomial {
    pub fn new(coeff: f64, powers: [u32; 3]) -> Self {
        Monomial {
            coeff: Complex64::new(coeff, 0.0),
            powers,
        }
    }

    pub fn degree(&self) -> usize {
        self.powers.iter().sum::<u32>() as usize
    }

    pub fn eval(&self, v: &[f64; 3]) -> Complex64 {
        self.coeff
            * v[0].powi(self.powers[0] as i32)
            * v[1].powi(self.powers[1] as i32)
            * v[2].powi(self.powers[2] as i32)
    }
}

/// Spherical-harmonic expansion, up to degree `n`, of the restriction of an
/// ambient polynomial to the unit sphere.
pub fn restrict_polynomial(terms: &[Monomial], n: usize) -> Result<BandLimited> {
    if let Some(t) = terms.iter().find(|t| t.degree() > n) {
        return Err(Error::DegreeOverflow {
            found: t.degree(),
            limit: n,
        });
    }
    let rule = build_quadrature(Manifold::Sphere2, 2 * n);
    let samples: Vec<Complex64> = rule
        .nodes()
        .iter()
        .map(|x| {
            let v = match x {
                crate::geometry::Point::Sphere(v) => v,
                _ => unreachable!(),
            };
            terms.iter().map(|t| t.eval(v)).sum()
        })
        .collect();
    let mut f = project(&samples, &rule, n)?;
    if terms.iter().all(|t| t.coeff.im == 0.0) {
        // real polynomial: record the flag, symmetric up to quadrature rounding
        f.real_valued = f.is_conjugate_symmetric(1e-12);
    }
    Ok(f)
}
