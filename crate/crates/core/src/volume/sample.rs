use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::charts::{
    assemble_system, cut_along_forest, solution_vector, surface_from_solution, ChartError, ChartSystem,
    CutSurface,
};
use crate::linalg::CVector;
use crate::scalar::{Complex, Real};
use crate::surface::FlatSurface;

use super::VolumeError;

const ATTEMPTS: usize = 100;

struct Chart<T: Real> {
    cut: CutSurface<T>,
    system: ChartSystem<T>,
    z: CVector<T>,
}

impl<T: Real> Chart<T> {
    fn new(surface: &FlatSurface<T>) -> Result<Self, VolumeError> {
        let cut = cut_along_forest(surface)?;
        let system = assemble_system(&cut)?;
        let z = solution_vector(&cut);
        Ok(Chart { cut, system, z })
    }

    fn draw<R: Rng>(&self, radius: T, rng: &mut R) -> Result<FlatSurface<T>, VolumeError> {
        let d = self.system.dim();
        for _ in 0..ATTEMPTS {
            let coeffs = CVector::from_iterator(
                d,
                (0..d).map(|_| {
                    Complex::new(
                        T::of(rng.random_range(-1.0..1.0)),
                        T::of(rng.random_range(-1.0..1.0)),
                    )
                }),
            );
            let step = &self.system.kernel * coeffs;
            let norm = step.norm();
            if !(norm > T::zero()) {
                continue;
            }
            let factor = radius * self.z.norm() / norm;
            let moved = &self.z + step.map(|x| x * factor);
            match surface_from_solution(&self.cut, &self.system, &moved) {
                Ok(s) => {
                    let mean = s.total_area() / T::of(s.num_triangles() as f64);
                    if (0..s.num_triangles()).all(|t| s.triangle_area(t) >= T::of(1e-10) * mean) {
                        return Ok(s);
                    }
                }
                Err(ChartError::DegenerateTriangle(_)) => {}
                Err(e) => return Err(e.into()),
            }
        }
        Err(VolumeError::SamplingFailed(ATTEMPTS))
    }
}

/// A random point of the chart at relative distance `radius` from the
/// surface, in the same triangulation. Draws whose triangles degenerate
/// (area below `1e-10` of the mean) are rejected and redrawn.
pub fn perturb<T: Real, R: Rng>(
    surface: &FlatSurface<T>,
    radius: T,
    rng: &mut R,
) -> Result<FlatSurface<T>, VolumeError> {
    Chart::new(surface)?.draw(radius, rng)
}

/// `count` perturbations at 1% of the solution norm, seeded.
pub fn sample_nearby<T: Real>(
    surface: &FlatSurface<T>,
    count: usize,
    seed: u64,
) -> Result<Vec<FlatSurface<T>>, VolumeError> {
    let chart = Chart::new(surface)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| chart.draw(T::of(0.01), &mut rng)).collect()
}
