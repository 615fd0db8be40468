/// Tolerances shared by the structural checks and the iterative solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Exactness checks on closed-form constructions (orthogonality, symmetry, unitarity).
    pub structural: f64,
    /// Stopping tolerance of first-order optimization.
    pub optimization: f64,
    /// Slack allowed when a density is checked to sum to one.
    pub density_sum: f64,
    /// Slack allowed when a correlation row is checked to sum to one.
    pub correlation_sum: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        structural: 1e-9,
        optimization: 1e-7,
        density_sum: 1e-12,
        correlation_sum: 1e-9,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
