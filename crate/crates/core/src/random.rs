//! Seeded random test functions and rotations.
//!
//! Every generator is a ChaCha8 stream selected by `(seed, stream)`, so a
//! function is reproducible from the two integers recorded in a report.

use nalgebra::{Matrix3, UnitQuaternion};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bandlimited::{coeff_len, restrict_polynomial, BandLimited, Monomial};
use crate::geometry::{GroupElement, Manifold};

/// Seed of the auxiliary rotations used by sampled sup-over-group searches.
pub const ROTATION_SEED: u64 = 0x5EED;

pub fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn gaussian(r: &mut ChaCha8Rng) -> f64 {
    r.sample(StandardNormal)
}

/// Coefficients with i.i.d. standard normal real and imaginary parts.
pub fn random_function(manifold: Manifold, degree: usize, seed: u64, stream: u64) -> BandLimited {
    let mut r = rng(seed, stream);
    let coeffs = (0..coeff_len(manifold, degree))
        .map(|_| {
            let re = gaussian(&mut r);
            Complex64::new(re, gaussian(&mut r))
        })
        .collect();
    BandLimited::from_coeffs(manifold, degree, coeffs).expect("length matches layout")
}

/// A real-valued random function: the conjugate-symmetric part of
/// [`random_function`].
pub fn random_real_function(manifold: Manifold, degree: usize, seed: u64, stream: u64) -> BandLimited {
    let f = random_function(manifold, degree, seed, stream);
    let c = f.coeffs();
    let len = c.len();
    let sym: Vec<Complex64> = match manifold {
        Manifold::Circle | Manifold::Torus(_) => (0..len).map(|i| (c[i] + c[len - 1 - i].conj()) * 0.5).collect(),
        Manifold::Sphere2 => {
            let mut out = vec![Complex64::default(); len];
            for l in 0..=degree {
                let base = l * l + l;
                for m in -(l as i64)..=l as i64 {
                    let mirror = c[(base as i64 - m) as usize].conj();
                    let mirror = if m % 2 == 0 { mirror } else { -mirror };
                    out[(base as i64 + m) as usize] = (c[(base as i64 + m) as usize] + mirror) * 0.5;
                }
            }
            out
        }
    };
    BandLimited::from_coeffs(manifold, degree, sym)
        .and_then(BandLimited::into_real)
        .expect("symmetrized coefficients")
}

/// Restriction to the sphere of a random polynomial in `(x, y, z)`:
/// `terms` monomials with standard normal coefficients, the first of
/// total degree exactly `degree`, the rest of random degree `<= degree`.
pub fn random_polynomial(degree: usize, terms: usize, seed: u64, stream: u64) -> crate::Result<BandLimited> {
    let mut r = rng(seed, stream);
    let monomials: Vec<Monomial> = (0..terms.max(1))
        .map(|i| {
            let d = if i == 0 {
                degree as u32
            } else {
                r.random_range(0..=degree as u32)
            };
            let a = r.random_range(0..=d);
            let b = r.random_range(0..=d - a);
            Monomial::new(gaussian(&mut r), [a, b, d - a - b])
        })
        .collect();
    restrict_polynomial(&monomials, degree)
}

/// Uniformly distributed rotation (normalized Gaussian quaternion).
pub fn random_rotation(r: &mut ChaCha8Rng) -> GroupElement {
    let q = nalgebra::Quaternion::new(gaussian(r), gaussian(r), gaussian(r), gaussian(r));
    let m: Matrix3<f64> = UnitQuaternion::from_quaternion(q).to_rotation_matrix().into_inner();
    GroupElement::Rotation(m)
}
