use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Interpolation {
    Linear,
    Geometric,
}

impl Interpolation {
    pub fn name(self) -> &'static str {
        match self {
            Interpolation::Linear => "linear",
            Interpolation::Geometric => "geometric",
        }
    }

    fn at(self, start: f64, end: f64, frac: f64) -> f64 {
        if frac >= 1.0 {
            return end;
        }
        match self {
            Interpolation::Linear => start + (end - start) * frac,
            Interpolation::Geometric => start * libm::pow(end / start, frac),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScheduleError {
    NoSweeps,
    BetaNotIncreasing,
    GeometricNeedsPositive,
    GammaNotDecreasing,
    NoSlices,
    BadEnergyScale,
}

impl fmt::Display for ScheduleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScheduleError::NoSweeps => "at least one sweep is required",
            ScheduleError::BetaNotIncreasing => "beta range must satisfy 0 <= start < end",
            ScheduleError::GeometricNeedsPositive => {
                "geometric interpolation needs positive endpoints"
            }
            ScheduleError::GammaNotDecreasing => "gamma range must satisfy start > end >= 0",
            ScheduleError::NoSlices => "at least one trotter slice is required",
            ScheduleError::BadEnergyScale => "energy scale must be positive and finite",
        })
    }
}

/// Annealing schedule shared by both samplers.
///
/// Inverse temperatures apply to energies divided by `energy_scale`; with
/// `None` the samplers use the smallest nonzero coefficient magnitude of the
/// model, so the same schedule works across weight ranges and penalty sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct Schedule {
    pub num_sweeps: usize,
    pub beta_range: (f64, f64),
    pub beta_interpolation: Interpolation,
    pub gamma_range: (f64, f64),
    pub gamma_interpolation: Interpolation,
    pub trotter_slices: usize,
    pub energy_scale: Option<f64>,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            num_sweeps: 1000,
            beta_range: (0.01, 10.0),
            beta_interpolation: Interpolation::Geometric,
            gamma_range: (3.0, 0.01),
            gamma_interpolation: Interpolation::Linear,
            trotter_slices: 8,
            energy_scale: None,
        }
    }
}

impl Schedule {
    pub fn validate(&self) -> Result<(), ScheduleError> {
        let (b0, b1) = self.beta_range;
        let (g0, g1) = self.gamma_range;
        if self.num_sweeps == 0 {
            return Err(ScheduleError::NoSweeps);
        }
        if !(b0 >= 0.0 && b0 < b1 && b1.is_finite()) {
            return Err(ScheduleError::BetaNotIncreasing);
        }
        if self.beta_interpolation == Interpolation::Geometric && b0 <= 0.0 {
            return Err(ScheduleError::GeometricNeedsPositive);
        }
        if !(g1 >= 0.0 && g0 > g1 && g0.is_finite()) {
            return Err(ScheduleError::GammaNotDecreasing);
        }
        if self.gamma_interpolation == Interpolation::Geometric && g1 <= 0.0 {
            return Err(ScheduleError::GeometricNeedsPositive);
        }
        if self.trotter_slices == 0 {
            return Err(ScheduleError::NoSlices);
        }
        if let Some(u) = self.energy_scale {
            if !(u > 0.0 && u.is_finite()) {
                return Err(ScheduleError::BadEnergyScale);
            }
        }
        Ok(())
    }

    fn frac(&self, sweep: usize) -> f64 {
        if self.num_sweeps == 1 {
            1.0
        } else {
            sweep as f64 / (self.num_sweeps - 1) as f64
        }
    }

    /// Inverse temperature at `sweep` in `0..num_sweeps`.
    pub fn beta(&self, sweep: usize) -> f64 {
        let (a, b) = self.beta_range;
        self.beta_interpolation.at(a, b, self.frac(sweep))
    }

    /// Transverse field at `sweep` in `0..num_sweeps`.
    pub fn gamma(&self, sweep: usize) -> f64 {
        let (a, b) = self.gamma_range;
        self.gamma_interpolation.at(a, b, self.frac(sweep))
    }
}
