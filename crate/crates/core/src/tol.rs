//! Numerical tolerances shared by every module.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Structural checks: Hermiticity, unitarity, trace preservation.
    pub structural: f64,
    /// Comparisons between independently computed results.
    pub comparison: f64,
    /// Smallest eigenvalue still accepted as positive semidefinite.
    pub psd: f64,
    /// Concurrence at or below which a Choi state counts as separable.
    pub eb: f64,
    /// Width of the band in which concurrence and PPT verdicts may disagree.
    pub verdict_band: f64,
    /// Density-matrix eigenvalues below this are treated as outside the support.
    pub support: f64,
    /// Choi eigenvalues below this contribute no Kraus operator.
    pub kraus_cutoff: f64,
}

pub const TOL: Tolerances = Tolerances {
    structural: 1e-10,
    comparison: 1e-9,
    psd: 1e-9,
    eb: 1e-9,
    verdict_band: 1e-8,
    support: 1e-13,
    kraus_cutoff: 1e-14,
};

/// Kraus lists longer than this are compressed back to a minimal set.
pub const MAX_KRAUS: usize = 8;
