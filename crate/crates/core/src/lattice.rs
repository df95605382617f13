//! `(r, N)`-lattices: centers whose `r`-balls are disjoint, whose
//! `2r`-balls cover the manifold and whose `4r`-balls overlap at most `N`
//! times, together with the lattice-sampled `p`-norms built on them.
//!
//! Supported on the circle and the sphere.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::bandlimited::BandLimited;
use crate::error::{invalid, Result};
use crate::geometry::{geodesic_distance, GroupElement, Manifold, Point};
use crate::norms::NormParams;
use crate::random::{random_rotation, rng, ROTATION_SEED};
use crate::summation::pairwise_sum;

/// Number of seeded random rotations added to the Euler grid.
pub const EXTRA_ROTATIONS: usize = 64;

/// Candidates per `r`-ball in [`build_lattice`].
const CANDIDATE_DENSITY: f64 = 200.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "LatticeRepr", try_from = "LatticeRepr")]
pub struct Lattice {
    manifold: Manifold,
    r: f64,
    centers: Vec<Point>,
    group_elements: Vec<GroupElement>,
    multiplicity: usize,
}

#[derive(Serialize, Deserialize)]
struct LatticeRepr {
    manifold: Manifold,
    r: f64,
    centers: Vec<Vec<f64>>,
    multiplicity: usize,
}

impl From<Lattice> for LatticeRepr {
    fn from(l: Lattice) -> Self {
        LatticeRepr {
            manifold: l.manifold,
            r: l.r,
            centers: l.centers.iter().map(Point::coords).collect(),
            multiplicity: l.multiplicity,
        }
    }
}

impl TryFrom<LatticeRepr> for Lattice {
    type Error = crate::Error;
    fn try_from(r: LatticeRepr) -> Result<Self> {
        let centers = r
            .centers
            .iter()
            .map(|c| Point::from_coords(r.manifold, c))
            .collect::<Result<Vec<_>>>()?;
        let mut lat = Lattice::from_centers(r.manifold, r.r, centers)?;
        lat.multiplicity = r.multiplicity;
        Ok(lat)
    }
}

impl Lattice {
    /// A lattice from explicit centers; the multiplicity is measured by
    /// [`verify_lattice`] with the default probe count.
    pub fn from_centers(manifold: Manifold, r: f64, centers: Vec<Point>) -> Result<Self> {
        supported(manifold)?;
        if !(r > 0.0 && r.is_finite()) {
            return Err(invalid(format!("lattice radius must be positive, got {r}")));
        }
        for c in &centers {
            manifold.expect(c.manifold())?;
        }
        let group_elements = centers.iter().map(GroupElement::carrying_origin_to).collect();
        let mut lat = Lattice {
            manifold,
            r,
            centers,
            group_elements,
            multiplicity: 0,
        };
        lat.multiplicity = verify_lattice(&lat, DEFAULT_PROBES).multiplicity;
        Ok(lat)
    }

    pub fn manifold(&self) -> Manifold {
        self.manifold
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn centers(&self) -> &[Point] {
        &self.centers
    }

    /// `g_i` with `g_i . o = x_i`.
    pub fn group_elements(&self) -> &[GroupElement] {
        &self.group_elements
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    pub fn len(&self) -> usize {
        self.centers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.centers.is_empty()
    }

    /// A copy without center `i` (the multiplicity is re-measured).
    pub fn without_center(&self, i: usize) -> Result<Self> {
        let mut c = self.centers.clone();
        c.remove(i);
        Lattice::from_centers(self.manifold, self.r, c)
    }

    /// A copy with center `i` listed twice.
    pub fn with_duplicate(&self, i: usize) -> Result<Self> {
        let mut c = self.centers.clone();
        c.push(c[i].clone());
        Lattice::from_centers(self.manifold, self.r, c)
    }
}

fn supported(manifold: Manifold) -> Result<()> {
    match manifold {
        Manifold::Circle | Manifold::Sphere2 => Ok(()),
        m => Err(invalid(format!(
            "lattices are implemented on the circle and the sphere, not {m}"
        ))),
    }
}

/// Embedding into `R^3` in which chord length is monotone in geodesic
/// distance (the circle sits in the plane `z = 0`).
fn embed(x: &Point) -> [f64; 3] {
    match x {
        Point::Circle(t) => [t.cos(), t.sin(), 0.0],
        Point::Sphere(v) => *v,
        Point::Torus(_) => unreachable!("lattices are not built on tori"),
    }
}

/// Uniform grid of cubes over embedded points; a query for geodesic
/// radius `rho` inspects the 27 cubes around the query point.
struct CellIndex {
    size: f64,
    cells: HashMap<(i64, i64, i64), Vec<usize>>,
    points: Vec<[f64; 3]>,
}

impl CellIndex {
    fn new(rho: f64) -> Self {
        // chord length of geodesic distance rho
        let size = 2.0 * (rho.min(PI) / 2.0).sin();
        CellIndex {
            size: size.max(1e-9),
            cells: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, v: &[f64; 3]) -> (i64, i64, i64) {
        (
            (v[0] / self.size).floor() as i64,
            (v[1] / self.size).floor() as i64,
            (v[2] / self.size).floor() as i64,
        )
    }

    fn insert(&mut self, v: [f64; 3]) {
        let k = self.key(&v);
        self.cells.entry(k).or_default().push(self.points.len());
        self.points.push(v);
    }

    /// Indices of stored points within chord distance `size` of `v`,
    /// a superset of those within the geodesic radius.
    fn near(&self, v: &[f64; 3], mut visit: impl FnMut(usize)) {
        let (a, b, c) = self.key(v);
        for da in -1..=1 {
            for db in -1..=1 {
                for dc in -1..=1 {
                    if let Some(ids) = self.cells.get(&(a + da, b + db, c + dc)) {
                        for &i in ids {
                            visit(i);
                        }
                    }
                }
            }
        }
    }
}

fn distance(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (a[0] * b[0] + a[1] * b[1] + a[2] * b[2]).clamp(-1.0, 1.0).acos()
}

/// `n` points of the Fibonacci sphere, from the north pole southwards.
pub fn fibonacci_sphere(n: usize) -> Vec<Point> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let s = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Point::Sphere([s * phi.cos(), s * phi.sin(), z])
        })
        .collect()
}

/// Greedy maximal `2r`-separated set over a fixed candidate stream that
/// starts at the base point `o`: an equispaced grid on the circle, the
/// Fibonacci sphere on `S^2`, with about 200 candidates per `r`-ball.
/// Maximality gives the `2r`-cover and separation `> 2r` the disjoint
/// `r`-balls.
pub fn build_lattice(manifold: Manifold, r: f64) -> Result<Lattice> {
    supported(manifold)?;
    if !(r > 0.0 && r < PI / 4.0 && r < manifold.diameter() / 2.0) {
        return Err(invalid(format!("lattice radius must lie in (0, pi/4), got {r}")));
    }
    let candidates: Vec<Point> = match manifold {
        Manifold::Circle => {
            let count = (CANDIDATE_DENSITY * TAU / (2.0 * r)).ceil() as usize;
            (0..count)
                .map(|i| Point::Circle(TAU * i as f64 / count as f64))
                .collect()
        }
        _ => {
            let cap = TAU * (1.0 - r.cos());
            let count = (CANDIDATE_DENSITY * 4.0 * PI / cap).ceil() as usize;
            std::iter::once(manifold.origin())
                .chain(fibonacci_sphere(count))
                .collect()
        }
    };
    let mut index = CellIndex::new(2.0 * r);
    let mut centers = Vec::new();
    for c in candidates {
        let v = embed(&c);
        let mut free = true;
        index.near(&v, |i| {
            if free && distance(&index.points[i], &v) <= 2.0 * r {
                free = false;
            }
        });
        if free {
            index.insert(v);
            centers.push(c);
        }
    }
    Lattice::from_centers(manifold, r, centers)
}

/// Outcome of [`verify_lattice`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeReport {
    pub disjoint: bool,
    pub cover: bool,
    pub multiplicity: usize,
    pub min_separation: f64,
    pub max_cover_distance: f64,
    pub probes: usize,
}

/// Probe count used when a lattice is constructed.
pub const DEFAULT_PROBES: usize = 20_000;

/// Deterministic probes: `count` grid points (equispaced on the circle,
/// Fibonacci on the sphere) plus all centers.
fn default_probes(lat: &Lattice, count: usize) -> Vec<Point> {
    let grid: Vec<Point> = match lat.manifold {
        Manifold::Circle => (0..count)
            .map(|i| Point::Circle(TAU * (i as f64 + 0.5) / count as f64))
            .collect(),
        _ => fibonacci_sphere(count),
    };
    grid.into_iter().chain(lat.centers.iter().cloned()).collect()
}

/// Separation is checked exactly over all pairs; cover (`<= 2r`) and the
/// multiplicity of the `4r`-balls (open balls: distance `< 4r`) over
/// `probes` grid points plus all centers.
pub fn verify_lattice(lat: &Lattice, probes: usize) -> LatticeReport {
    let pts = default_probes(lat, probes.max(1));
    verify_lattice_with_probes(lat, &pts)
}

pub fn verify_lattice_with_probes(lat: &Lattice, probes: &[Point]) -> LatticeReport {
    let r = lat.r;
    let embedded: Vec<[f64; 3]> = lat.centers.iter().map(embed).collect();

    let mut near = CellIndex::new(2.0 * r);
    let mut min_sep = f64::INFINITY;
    for v in &embedded {
        near.near(v, |i| min_sep = min_sep.min(distance(&near.points[i], v)));
        near.insert(*v);
    }
    // pairs farther apart than the cell reach are separated by > 2r anyway
    let disjoint = min_sep > 2.0 * r;

    let mut wide = CellIndex::new(4.0 * r);
    for v in &embedded {
        wide.insert(*v);
    }
    let per_probe = crate::par::map_slice(probes, |p| {
        let v = embed(p);
        let mut nearest = f64::INFINITY;
        let mut count = 0usize;
        wide.near(&v, |i| {
            let d = distance(&wide.points[i], &v);
            nearest = nearest.min(d);
            if d < 4.0 * r {
                count += 1;
            }
        });
        (nearest, count)
    });
    let max_cover = per_probe.iter().map(|x| x.0).fold(0.0, f64::max);
    LatticeReport {
        disjoint,
        cover: !lat.centers.is_empty() && max_cover <= 2.0 * r * (1.0 + 1e-12),
        multiplicity: per_probe.iter().map(|x| x.1).max().unwrap_or(0),
        min_separation: min_sep,
        max_cover_distance: max_cover,
        probes: probes.len(),
    }
}

/// Which sample points a sampled norm uses for a group element `g`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleOrder {
    /// `f(g . x_i)`.
    #[default]
    Translated,
    /// `f(g_i g . o)`.
    Composed,
}

fn sample_points(lat: &Lattice, g: &GroupElement, order: SampleOrder) -> Result<Vec<Point>> {
    match order {
        SampleOrder::Translated => lat.centers.iter().map(|x| g.act(x)).collect(),
        SampleOrder::Composed => {
            let go = g.act(&lat.manifold.origin())?;
            lat.group_elements.iter().map(|gi| gi.act(&go)).collect()
        }
    }
}

/// `r^{m/p} (sum_i |v_i|^p)^{1/p}`, `max_i |v_i|` for `p = inf`.
fn sampled_from_abs(abs: &[f64], r: f64, dim: usize, p: NormParams) -> f64 {
    if p.is_inf() {
        return abs.iter().cloned().fold(0.0, f64::max);
    }
    let terms: Vec<f64> = abs.iter().map(|a| a.powf(p.p())).collect();
    r.powf(dim as f64 / p.p()) * pairwise_sum(&terms).powf(1.0 / p.p())
}

/// `r^{m/p} (sum_i |f(g . x_i)|^p)^{1/p}` (or `max_i` for `p = inf`).
pub fn sampled_pnorm(f: &BandLimited, lat: &Lattice, p: NormParams, g: &GroupElement) -> Result<f64> {
    Ok(sampled_pnorms(f, lat, &[p], g, SampleOrder::Translated)?[0])
}

/// Several exponents from one set of samples.
pub fn sampled_pnorms(
    f: &BandLimited,
    lat: &Lattice,
    ps: &[NormParams],
    g: &GroupElement,
    order: SampleOrder,
) -> Result<Vec<f64>> {
    lat.manifold.expect(f.manifold())?;
    let pts = sample_points(lat, g, order)?;
    let abs: Vec<f64> = f.eval_many(&pts).iter().map(|v| v.norm()).collect();
    Ok(ps
        .iter()
        .map(|&p| sampled_from_abs(&abs, lat.r, lat.manifold.dim(), p))
        .collect())
}

/// Deterministic sample of the group: `G^3` equispaced shifts on the
/// circle; on the sphere the Euler grid `(2 pi a/G, pi b/G, 2 pi c/G)`
/// plus [`EXTRA_ROTATIONS`] seeded random rotations. Doubling `G` gives a
/// superset.
pub fn group_sample(manifold: Manifold, grid: usize) -> Vec<GroupElement> {
    match manifold {
        Manifold::Sphere2 => {
            let mut out = Vec::with_capacity(grid.pow(3) + EXTRA_ROTATIONS);
            for a in 0..grid {
                for b in 0..grid {
                    for c in 0..grid {
                        out.push(GroupElement::euler_zyz(
                            TAU * a as f64 / grid as f64,
                            PI * b as f64 / grid as f64,
                            TAU * c as f64 / grid as f64,
                        ));
                    }
                }
            }
            let mut r = rng(ROTATION_SEED, 0);
            out.extend((0..EXTRA_ROTATIONS).map(|_| random_rotation(&mut r)));
            out
        }
        m => {
            let count = grid.pow(3);
            (0..count)
                .map(|i| {
                    let mut s = vec![0.0; m.dim()];
                    s[0] = TAU * i as f64 / count as f64;
                    GroupElement::Shift(s)
                })
                .collect()
        }
    }
}

/// `max_g` of [`sampled_pnorms`] over [`group_sample`]: a lower bound for
/// the supremum over the whole group.
pub fn sup_sampled_pnorms(
    f: &BandLimited,
    lat: &Lattice,
    ps: &[NormParams],
    grid: usize,
    order: SampleOrder,
) -> Result<Vec<f64>> {
    if grid < 8 {
        return Err(invalid(format!("group grid size must be at least 8, got {grid}")));
    }
    lat.manifold.expect(f.manifold())?;
    let sample = group_sample(lat.manifold, grid);
    let per_g = crate::par::map_slice(&sample, |g| sampled_pnorms(f, lat, ps, g, order));
    let mut best = vec![0.0f64; ps.len()];
    for v in per_g {
        for (b, x) in best.iter_mut().zip(v?) {
            *b = b.max(x);
        }
    }
    Ok(best)
}

pub fn sup_sampled_pnorm(f: &BandLimited, lat: &Lattice, p: NormParams, grid: usize) -> Result<f64> {
    Ok(sup_sampled_pnorms(f, lat, &[p], grid, SampleOrder::Translated)?[0])
}

/// Geodesic distance between two lattice centers.
pub fn center_distance(lat: &Lattice, i: usize, j: usize) -> f64 {
    geodesic_distance(&lat.centers[i], &lat.centers[j])
}
