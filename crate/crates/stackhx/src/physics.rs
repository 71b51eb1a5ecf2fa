//! Parameter types, the ideal-gas relation, nondimensionalization, and the
//! adiabatic-column temperature constraint.
//!
//! Units are SI throughout [`PhysicalParams`]. The dimensionless scales are
//! the exterior state: temperatures in units of `T_ext`, pressures in units
//! of `p_ext`, densities in units of `rho_ext = p_ext * m / (R * T_ext)`,
//! velocities in units of `sqrt(R * T_ext / m)`, and lengths in units of the
//! exchanger height `H`.

use thiserror::Error;

/// Molar gas constant, J/(mol·K).
pub const GAS_CONST: f64 = 8.314;
/// Molar mass of dry air, kg/mol.
pub const AIR_MOLAR_MASS: f64 = 0.028964;
/// Standard gravitational acceleration, m/s².
pub const STANDARD_GRAVITY: f64 = 9.81;
/// Standard atmospheric pressure, Pa.
pub const ATM_PRESSURE: f64 = 101325.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("physical parameter `{name}` must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("interior must be warmer than exterior: T_int = {t_int} K <= T_ext = {t_ext} K")]
    InteriorNotWarmer { t_int: f64, t_ext: f64 },
    #[error("temperature ratio t_int must exceed 1, got {t_int}")]
    TemperatureRatioTooLow { t_int: f64 },
    #[error("gravity parameter g must be strictly positive, got {g}")]
    GravityNotPositive { g: f64 },
    #[error("partition conductance sigma must be non-negative, got {sigma}")]
    NegativeConductance { sigma: f64 },
    #[error(
        "validity condition failed: (7/2)(t_int - 1) - g = {margin} <= 0 \
         (t_int = {t_int}, g = {g}); the buoyant steady state has a \
         non-positive power baseline and the model does not apply"
    )]
    InvalidRegime { t_int: f64, g: f64, margin: f64 },
}

/// Dimensional description of the exchanger and its environment.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalParams {
    /// Exterior air temperature, K.
    pub t_ext: f64,
    /// Interior air temperature, K. Must exceed `t_ext`.
    pub t_int: f64,
    /// Exchanger height, m.
    pub height: f64,
    /// Partition width, m.
    pub width: f64,
    /// Tube cross-sectional area, m².
    pub area: f64,
    /// Gravitational acceleration, m/s².
    pub g_accel: f64,
    /// Exterior pressure, Pa.
    pub p_ext: f64,
    /// Molar mass of the gas, kg/mol.
    pub molar_mass: f64,
    /// Molar gas constant, J/(mol·K).
    pub gas_const: f64,
    /// Partition thermal conductivity, W/(m·K).
    pub conductivity: f64,
    /// Partition thickness, m.
    pub thickness: f64,
}

impl Default for PhysicalParams {
    /// Freezing exterior, room-temperature interior, one-metre geometry,
    /// standard air constants.
    fn default() -> Self {
        PhysicalParams {
            t_ext: 273.15,
            t_int: 293.15,
            height: 1.0,
            width: 1.0,
            area: 1.0,
            g_accel: STANDARD_GRAVITY,
            p_ext: ATM_PRESSURE,
            molar_mass: AIR_MOLAR_MASS,
            gas_const: GAS_CONST,
            conductivity: 3.0,
            thickness: 0.02,
        }
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<(), ParamError> {
        let fields = [
            ("t_ext", self.t_ext),
            ("t_int", self.t_int),
            ("height", self.height),
            ("width", self.width),
            ("area", self.area),
            ("g_accel", self.g_accel),
            ("p_ext", self.p_ext),
            ("molar_mass", self.molar_mass),
            ("gas_const", self.gas_const),
            ("conductivity", self.conductivity),
            ("thickness", self.thickness),
        ];
        for (name, value) in fields {
            if !(value > 0.0) {
                return Err(ParamError::NonPositive { name, value });
            }
        }
        if self.t_int <= self.t_ext {
            return Err(ParamError::InteriorNotWarmer {
                t_int: self.t_int,
                t_ext: self.t_ext,
            });
        }
        Ok(())
    }

    /// Thermal velocity scale `sqrt(R * T_ext / m)`, m/s.
    pub fn velocity_scale(&self) -> f64 {
        (self.gas_const * self.t_ext / self.molar_mass).sqrt()
    }
}

/// The three dimensionless parameters governing the exchanger.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    /// Temperature ratio `T_int / T_ext`; greater than 1.
    pub t_int: f64,
    /// Height of the exchanger over the adiabatic-atmosphere thickness
    /// `R * T_ext / (m * g_accel)`; small and positive in practice.
    pub g: f64,
    /// Partition conductance folded with geometry and gas-state scales;
    /// non-negative, zero meaning a perfectly insulating partition.
    pub sigma: f64,
}

impl DimensionlessParams {
    /// Builds a validated parameter set.
    ///
    /// # Errors
    ///
    /// Rejects `t_int <= 1`, `g <= 0`, `sigma < 0`, and parameter sets whose
    /// power baseline `(7/2)(t_int - 1) - g` is not positive.
    pub fn new(t_int: f64, g: f64, sigma: f64) -> Result<Self, ParamError> {
        if !(t_int > 1.0) {
            return Err(ParamError::TemperatureRatioTooLow { t_int });
        }
        if !(g > 0.0) {
            return Err(ParamError::GravityNotPositive { g });
        }
        if !(sigma >= 0.0) {
            return Err(ParamError::NegativeConductance { sigma });
        }
        let params = DimensionlessParams { t_int, g, sigma };
        let margin = params.baseline_power_per_mass();
        if !(margin > 0.0) {
            return Err(ParamError::InvalidRegime { t_int, g, margin });
        }
        Ok(params)
    }

    /// Builds a parameter set without validation. Needed for degenerate
    /// reference states (e.g. `g = 0` rest states in tests); regular solves
    /// should go through [`DimensionlessParams::new`].
    pub fn new_unchecked(t_int: f64, g: f64, sigma: f64) -> Self {
        DimensionlessParams { t_int, g, sigma }
    }

    /// Power per unit mass flux with no heat exchange: `(7/2)(t_int - 1) - g`.
    ///
    /// Doubles as the efficiency denominator; the model only makes sense
    /// when it is positive.
    pub fn baseline_power_per_mass(&self) -> f64 {
        3.5 * (self.t_int - 1.0) - self.g
    }

    /// Scaled conductance `sigma / sqrt(g)` used by the asymptotic solution.
    pub fn sigma0(&self) -> f64 {
        self.sigma / self.g.sqrt()
    }
}

/// Dimensionless ideal gas law: pressure = density × temperature.
///
/// Callers guarantee `rho > 0` and `t > 0`.
#[inline]
pub fn ideal_gas(rho: f64, t: f64) -> f64 {
    rho * t
}

/// Maps dimensional inputs onto the governing dimensionless triple.
///
/// `t_int = T_int/T_ext`, `g = g_accel·H·m/(R·T_ext)`, and
/// `sigma = (W·H/A) · T_ext/(p_ext·sqrt(R·T_ext/m)) · k/d` where `k` is the
/// partition conductivity and `d` its thickness.
pub fn nondimensionalize(phys: &PhysicalParams) -> Result<DimensionlessParams, ParamError> {
    phys.validate()?;
    let t_int = phys.t_int / phys.t_ext;
    let g = phys.g_accel * phys.height * phys.molar_mass / (phys.gas_const * phys.t_ext);
    let conductance = phys.conductivity / phys.thickness;
    let sigma = (phys.width * phys.height / phys.area)
        * (phys.t_ext / (phys.p_ext * phys.velocity_scale()))
        * conductance;
    DimensionlessParams::new(t_int, g, sigma)
}

/// The unique interior/exterior temperature difference (K) admitting a
/// conservative steady column of height `height`: `(2/7)·g·H·m/R`.
///
/// Any other difference leaves the all-conservative system overdetermined,
/// which is why the exchanger model needs its dissipative outflow condition.
pub fn adiabatic_column_delta(height: f64, g_accel: f64, gas_const: f64, molar_mass: f64) -> f64 {
    (2.0 / 7.0) * g_accel * height * molar_mass / gas_const
}
