use crate::error::ConfigError;
use rand::Rng;

/// Axis-aligned box `∏ [lower_i, upper_i]`. A coordinate with
/// `lower == upper` is pinned to that value.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxSet {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

/// Finite grid `lower + h·i` inside a box, with axis-aligned neighbourhoods
/// of `radius` cells.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSet {
    bounds: BoxSet,
    h: f64,
    radius: usize,
    counts: Vec<usize>,
}

/// The parameter set searched by the annealer.
#[derive(Debug, Clone, PartialEq)]
pub enum ParameterSet {
    Box(BoxSet),
    Grid(GridSet),
}

impl BoxSet {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, ConfigError> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(ConfigError::new(
                "set",
                format!(
                    "lower and upper must be non-empty and of equal length ({} vs {})",
                    lower.len(),
                    upper.len()
                ),
            ));
        }
        for (i, (&lo, &hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite()) {
                return Err(ConfigError::new(format!("set.lower[{i}]"), "bounds must be finite"));
            }
            if lo > hi {
                return Err(ConfigError::new(
                    format!("set.upper[{i}]"),
                    format!("upper bound {hi} below lower bound {lo}"),
                ));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.lower.len()
            && point
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(&x, (&lo, &hi))| x >= lo && x <= hi)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(&lo, &hi)| {
                let u: f64 = rng.random();
                (lo + u * (hi - lo)).min(hi)
            })
            .collect()
    }
}

impl GridSet {
    pub fn new(bounds: BoxSet, h: f64, radius: usize) -> Result<Self, ConfigError> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(ConfigError::new("set.h", format!("resolution must be positive, got {h}")));
        }
        if radius == 0 {
            return Err(ConfigError::new("set.radius", "neighbourhood radius must be at least 1"));
        }
        let counts = bounds
            .lower
            .iter()
            .zip(&bounds.upper)
            .map(|(&lo, &hi)| ((hi - lo) / h + 1e-9).floor() as usize + 1)
            .collect();
        Ok(Self {
            bounds,
            h,
            radius,
            counts,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of grid points along each axis.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn point(&self, index: &[usize]) -> Vec<f64> {
        index
            .iter()
            .zip(&self.bounds.lower)
            .map(|(&i, &lo)| lo + self.h * i as f64)
            .collect()
    }

    /// Grid index of `point`, if it lies on the grid.
    pub fn index_of(&self, point: &[f64]) -> Option<Vec<usize>> {
        if point.len() != self.counts.len() {
            return None;
        }
        point
            .iter()
            .zip(&self.bounds.lower)
            .zip(&self.counts)
            .map(|((&x, &lo), &n)| {
                let i = ((x - lo) / self.h).round();
                let ok = i >= 0.0 && (i as usize) < n && (lo + self.h * i - x).abs() <= 1e-9 * self.h.max(1.0);
                ok.then_some(i as usize)
            })
            .collect()
    }

    /// `B_λ`: the point itself plus every grid point reached by moving up
    /// to `radius` cells along a single axis, clipped at the boundary.
    pub fn neighbourhood(&self, index: &[usize]) -> Vec<Vec<usize>> {
        let mut out = vec![index.to_vec()];
        for axis in 0..index.len() {
            let lo = index[axis].saturating_sub(self.radius);
            let hi = (index[axis] + self.radius).min(self.counts[axis] - 1);
            for j in lo..=hi {
                if j != index[axis] {
                    let mut nb = index.to_vec();
                    nb[axis] = j;
                    out.push(nb);
                }
            }
        }
        out
    }

    pub fn sample_index<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<usize> {
        self.counts.iter().map(|&n| rng.random_range(0..n)).collect()
    }

    pub fn sample_neighbour<R: Rng + ?Sized>(&self, index: &[usize], rng: &mut R) -> Vec<usize> {
        let nbhd = self.neighbourhood(index);
        nbhd[rng.random_range(0..nbhd.len())].clone()
    }
}

impl ParameterSet {
    pub fn dim(&self) -> usize {
        self.bounds().lower.len()
    }

    pub fn bounds(&self) -> &BoxSet {
        match self {
            ParameterSet::Box(b) => b,
            ParameterSet::Grid(g) => &g.bounds,
        }
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        match self {
            ParameterSet::Box(b) => b.contains(point),
            ParameterSet::Grid(g) => g.index_of(point).is_some(),
        }
    }

    /// Uniform draw from the set: continuous for a box, over grid points for
    /// a grid.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            ParameterSet::Box(b) => b.sample(rng),
            ParameterSet::Grid(g) => {
                let idx = g.sample_index(rng);
                g.point(&idx)
            }
        }
    }

    pub fn as_grid(&self) -> Option<&GridSet> {
        match self {
            ParameterSet::Grid(g) => Some(g),
            ParameterSet::Box(_) => None,
        }
    }
}
