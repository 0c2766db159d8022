/// Numerical thresholds shared by validation, regime classification and audits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of `Σ|a_i|²` from one.
    pub norm: f64,
    /// Allowed residual for exact algebraic identities.
    pub identity: f64,
    /// Relative threshold below which one phasor counts as vanished.
    pub circular: f64,
    /// Absolute threshold below which both phasors count as vanished.
    pub dead: f64,
    /// Threshold on `|Im φ|` for the real-ratio (straight-line) regime.
    pub linear: f64,
}

impl Tolerances {
    pub const NORM: f64 = 1e-9;
    pub const IDENTITY: f64 = 1e-12;
    pub const CIRCULAR: f64 = 1e-9;
    pub const DEAD: f64 = 1e-12;
    pub const LINEAR: f64 = 1e-9;
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: Self::NORM,
            identity: Self::IDENTITY,
            circular: Self::CIRCULAR,
            dead: Self::DEAD,
            linear: Self::LINEAR,
        }
    }
}
