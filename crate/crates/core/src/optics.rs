//! Polarization-qubit simulation of the three double-interferometer (DIF)
//! experiment with lossy beam splitters and polarizing beam splitters.
//!
//! Each DIF acts on polarization × path (two paths). The photon enters on
//! path 0, a PBS splits H and V, half-wave plates U₀ and U_α act on paths 0
//! and 1, the PBS is traversed backwards, and path 1 picks up a random phase
//! ω before a final beam splitter. Postselecting the cross output port and
//! averaging over ω leaves two Kraus operators on the polarization qubit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{compose, unitary_channel, DensityMatrix, QuantumChannel};
use crate::entanglement::{concurrence, hv_bell_state, werner_state};
use crate::error::{Error, Result};
use crate::qmath::{c64, Complex64, ComplexMatrix, I};
use crate::tol::TOL;

/// Below this postselection probability a state is not renormalized.
pub const MIN_SUCCESS_PROBABILITY: f64 = 1e-12;

/// Half-wave plate [[cos2ξ, sin2ξ], [sin2ξ, −cos2ξ]].
pub fn hwp(xi: f64) -> ComplexMatrix {
    let (s, c) = (2.0 * xi).sin_cos();
    ComplexMatrix::from_fn(2, 2, |r, col| match (r, col) {
        (0, 0) => c64(c, 0.0),
        (1, 1) => c64(-c, 0.0),
        _ => c64(s, 0.0),
    })
}

/// Plate angle whose DIF realizes amplitude damping with transmission η.
pub fn alpha_for_eta(eta: f64) -> Result<f64> {
    Error::check_range("eta", eta, 0.0, 1.0)?;
    Ok((-eta.sqrt()).acos() / 2.0)
}

/// Lossy two-port element with transmissivity T and reflectivity R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterParams {
    pub transmissivity: f64,
    pub reflectivity: f64,
}

impl BeamSplitterParams {
    pub fn new(transmissivity: f64, reflectivity: f64) -> Result<Self> {
        let p = Self { transmissivity, reflectivity };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let (t, r) = (self.transmissivity, self.reflectivity);
        let ok = |v: f64| v.is_finite() && (0.0..=1.0).contains(&v);
        if !ok(t) || !ok(r) {
            return Err(Error::ElementInconsistent(format!("T = {t}, R = {r} must lie in [0, 1]")));
        }
        if t + r > 1.0 + 1e-12 {
            return Err(Error::ElementInconsistent(format!("T + R = {} exceeds 1", t + r)));
        }
        if t + r <= 0.0 {
            return Err(Error::ElementInconsistent("element transmits nothing".into()));
        }
        Ok(())
    }

    pub fn loss(&self) -> f64 {
        1.0 - self.transmissivity - self.reflectivity
    }

    /// (T′, R′) with T′ + R′ = 1.
    pub fn renormalized(&self) -> (f64, f64) {
        let kept = self.transmissivity + self.reflectivity;
        (self.transmissivity / kept, self.reflectivity / kept)
    }

    /// [[√T′, i√R′], [i√R′, √T′]]
    pub fn matrix(&self) -> ComplexMatrix {
        let (t, r) = self.renormalized();
        let (t, r) = (c64(t.sqrt(), 0.0), I * r.sqrt());
        ComplexMatrix::from_fn(2, 2, |a, b| if a == b { t } else { r })
    }
}

/// Polarizing beam splitter: separate T/R for H and for V.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PbsParams {
    pub h: BeamSplitterParams,
    pub v: BeamSplitterParams,
}

impl PbsParams {
    pub fn validate(&self) -> Result<()> {
        self.h.validate()?;
        self.v.validate()
    }
}

/// Power coupling efficiency of the direct and the delayed arm into the
/// output fiber.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeCoupling {
    pub main: f64,
    pub delayed: f64,
}

impl Default for ModeCoupling {
    fn default() -> Self {
        Self { main: 1.0, delayed: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DifElements {
    pub bs: BeamSplitterParams,
    pub pbs: PbsParams,
    #[serde(default)]
    pub coupling: ModeCoupling,
}

impl DifElements {
    pub const IDEAL: DifElements = DifElements {
        bs: BeamSplitterParams { transmissivity: 0.5, reflectivity: 0.5 },
        pbs: PbsParams {
            h: BeamSplitterParams { transmissivity: 1.0, reflectivity: 0.0 },
            v: BeamSplitterParams { transmissivity: 0.0, reflectivity: 1.0 },
        },
        coupling: ModeCoupling { main: 1.0, delayed: 1.0 },
    };

    /// Averages measured on the laboratory elements.
    pub const MEASURED: DifElements = DifElements {
        bs: BeamSplitterParams { transmissivity: 0.48, reflectivity: 0.44 },
        pbs: PbsParams {
            h: BeamSplitterParams { transmissivity: 0.965, reflectivity: 0.0185 },
            v: BeamSplitterParams { transmissivity: 0.004, reflectivity: 0.948 },
        },
        coupling: ModeCoupling { main: 1.0, delayed: 1.0 },
    };

    pub fn validate(&self) -> Result<()> {
        self.bs.validate()?;
        self.pbs.validate()?;
        for (name, v) in [("main", self.coupling.main), ("delayed", self.coupling.delayed)] {
            if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
                return Err(Error::ElementInconsistent(format!("{name} coupling {v} outside [0, 1]")));
            }
        }
        Ok(())
    }

    /// Amplitude factor for photons lost in the PBS (twice, averaged over
    /// polarization) and in the final beam splitter.
    fn loss_amplitude(&self) -> f64 {
        let pbs = 1.0 - (self.pbs.h.loss() + self.pbs.v.loss()) / 2.0;
        (pbs * pbs * (1.0 - self.bs.loss())).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementPreset {
    Ideal,
    Measured,
    /// One element set per DIF, in signal order.
    Custom(Box<[DifElements; 3]>),
}

impl ElementPreset {
    pub fn resolve(&self) -> Result<[DifElements; 3]> {
        let els = match self {
            ElementPreset::Ideal => [DifElements::IDEAL; 3],
            ElementPreset::Measured => [DifElements::MEASURED; 3],
            ElementPreset::Custom(e) => **e,
        };
        for e in &els {
            e.validate()?;
        }
        Ok(els)
    }

    pub fn name(&self) -> &'static str {
        match self {
            ElementPreset::Ideal => "ideal",
            ElementPreset::Measured => "measured",
            ElementPreset::Custom(_) => "custom",
        }
    }
}

/// The two polarization blocks of a DIF before the final beam splitter:
/// `main` leaves on path 0, `delayed` on path 1 (the arm carrying ω).
fn dif_blocks(alpha: f64, el: &DifElements) -> (ComplexMatrix, ComplexMatrix) {
    // mode index = 2·polarization + path
    let mh = el.pbs.h.matrix();
    let mv = el.pbs.v.matrix();
    let pbs = ComplexMatrix::from_fn(4, 4, |r, c| {
        let (pr, qr) = (r / 2, r % 2);
        let (pc, qc) = (c / 2, c % 2);
        match (pr, pc) {
            (0, 0) => mh[(qr, qc)],
            (1, 1) => mv[(qr, qc)],
            _ => Complex64::new(0.0, 0.0),
        }
    });
    let plates = [hwp(0.0), hwp(alpha)];
    let waveplates = ComplexMatrix::from_fn(4, 4, |r, c| {
        let (pr, qr) = (r / 2, r % 2);
        let (pc, qc) = (c / 2, c % 2);
        if qr == qc {
            plates[qr][(pr, pc)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let op = pbs.dagger() * waveplates * pbs;
    let block = |path: usize| ComplexMatrix::from_fn(2, 2, |a, b| op[(2 * a + path, 2 * b)]);
    (block(0), block(1))
}

/// Kraus amplitudes of the two arms at the postselected output port.
fn dif_arms(alpha: f64, el: &DifElements) -> Result<(ComplexMatrix, ComplexMatrix)> {
    el.validate()?;
    let (main, delayed) = dif_blocks(alpha, el);
    let bs = el.bs.matrix();
    let loss = el.loss_amplitude();
    let main = main.scale_c(bs[(1, 0)] * loss * el.coupling.main.sqrt());
    let delayed = delayed.scale_c(bs[(1, 1)] * loss * el.coupling.delayed.sqrt());
    Ok((main, delayed))
}

/// Trace-nonincreasing polarization map of one DIF, averaged exactly over ω.
pub fn dif_map(alpha: f64, el: &DifElements) -> Result<QuantumChannel> {
    let (main, delayed) = dif_arms(alpha, el)?;
    QuantumChannel::from_kraus(vec![main, delayed])
}

/// Same map averaged over `samples` uniformly drawn phases ω.
pub fn dif_map_sampled(alpha: f64, el: &DifElements, samples: usize, rng: &mut impl Rng) -> Result<QuantumChannel> {
    if samples == 0 {
        return Err(Error::OutOfRange { name: "omega samples", value: 0.0, lo: 1.0, hi: f64::INFINITY });
    }
    let (main, delayed) = dif_arms(alpha, el)?;
    let mut acc = ComplexMatrix::zeros(4, 4);
    for _ in 0..samples {
        let omega = rng.gen_range(0.0..std::f64::consts::TAU);
        let k = &main + delayed.scale_c(Complex64::from_polar(1.0, omega));
        acc = acc + crate::qmath::kron(&k.conj(), &k);
    }
    QuantumChannel::from_superop(acc.scale(1.0 / samples as f64), 2, 2)
}

/// How the interferometer phase ω is averaged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OmegaAverage {
    #[default]
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalSetup {
    pub alpha1: f64,
    pub alpha21: f64,
    pub alpha2: f64,
    /// Angle of the θ plates; `None` when they are removed.
    pub theta: Option<f64>,
    /// Angle of the φ plates; `None` when they are removed.
    pub phi: Option<f64>,
    pub elements: ElementPreset,
    /// Werner weight of the source state.
    pub werner: f64,
    /// Relative phase of (|HV⟩ + e^{iφ}|VH⟩)/√2.
    pub source_phase: f64,
    pub label: String,
}

pub const DEFAULT_WERNER: f64 = 0.96;
pub const DEFAULT_ETA: f64 = 0.3;

impl OpticalSetup {
    fn base(alpha1: f64, alpha21: f64, alpha2: f64, label: &str) -> Self {
        Self {
            alpha1,
            alpha21,
            alpha2,
            theta: None,
            phi: None,
            elements: ElementPreset::Ideal,
            werner: DEFAULT_WERNER,
            source_phase: std::f64::consts::PI,
            label: label.into(),
        }
    }

    /// All three DIFs realize damping; both plate pairs present.
    pub fn m_prime(eta1: f64, eta2: f64, theta: f64, phi: f64) -> Result<Self> {
        let mut s = Self::base(alpha_for_eta(eta1)?, alpha_for_eta(eta1 * eta2)?, alpha_for_eta(eta2)?, "M'");
        s.theta = Some(theta);
        s.phi = Some(phi);
        Ok(s)
    }

    /// First DIF transparent, φ plates removed: (A∘U_θ)∘(A∘U_θ).
    pub fn m1(eta: f64, theta: f64) -> Result<Self> {
        let a = alpha_for_eta(eta)?;
        let mut s = Self::base(std::f64::consts::FRAC_PI_2, a, a, "M1");
        s.theta = Some(theta);
        Ok(s)
    }

    /// Last DIF transparent, θ plates removed: (U_φ∘A)∘(U_φ∘A).
    pub fn m2(eta: f64, phi: f64) -> Result<Self> {
        let a = alpha_for_eta(eta)?;
        let mut s = Self::base(a, a, std::f64::consts::FRAC_PI_2, "M2");
        s.phi = Some(phi);
        Ok(s)
    }

    /// Every DIF transparent and no external plates.
    pub fn identity() -> Self {
        let h = std::f64::consts::FRAC_PI_2;
        Self::base(h, h, h, "identity")
    }

    pub fn with_elements(mut self, elements: ElementPreset) -> Self {
        self.elements = elements;
        self
    }

    pub fn with_werner(mut self, w: f64) -> Self {
        self.werner = w;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("alpha1", self.alpha1), ("alpha21", self.alpha21), ("alpha2", self.alpha2)] {
            if !v.is_finite() {
                return Err(Error::OutOfRange { name, value: v, lo: f64::MIN, hi: f64::MAX });
            }
        }
        for (name, v) in [("theta", self.theta), ("phi", self.phi)] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(Error::OutOfRange { name, value: v, lo: f64::MIN, hi: f64::MAX });
                }
            }
        }
        Error::check_range("W", self.werner, 0.0, 1.0)?;
        if !self.source_phase.is_finite() {
            return Err(Error::OutOfRange { name: "source_phase", value: self.source_phase, lo: f64::MIN, hi: f64::MAX });
        }
        self.elements.resolve().map(|_| ())
    }

    pub fn input_state(&self) -> Result<DensityMatrix> {
        werner_state(self.werner, &hv_bell_state(self.source_phase))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let setup: Self = serde_json::from_str(s)?;
        setup.validate()?;
        Ok(setup)
    }
}

/// The full chain in signal order: DIF₁, φ, θ, DIF₂, φ, θ, DIF₃.
pub fn setup_map(s: &OpticalSetup) -> Result<QuantumChannel> {
    setup_map_with(s, OmegaAverage::Exact)
}

pub fn setup_map_with(s: &OpticalSetup, average: OmegaAverage) -> Result<QuantumChannel> {
    s.validate()?;
    let els = s.elements.resolve()?;
    let mut rng = match average {
        OmegaAverage::MonteCarlo { seed, .. } => Some(ChaCha8Rng::seed_from_u64(seed)),
        OmegaAverage::Exact => None,
    };
    let mut dif = |alpha: f64, el: &DifElements| match (average, rng.as_mut()) {
        (OmegaAverage::MonteCarlo { samples, .. }, Some(rng)) => dif_map_sampled(alpha, el, samples, rng),
        _ => dif_map(alpha, el),
    };
    let plates: Vec<QuantumChannel> = [s.phi, s.theta]
        .into_iter()
        .flatten()
        .map(|xi| unitary_channel(&hwp(xi)))
        .collect::<Result<_>>()?;
    let mut map = dif(s.alpha1, &els[0])?;
    for (k, alpha) in [(1, s.alpha21), (2, s.alpha2)] {
        for p in &plates {
            map = compose(&map, p)?;
        }
        map = compose(&map, &dif(alpha, &els[k])?)?;
    }
    Ok(map)
}

/// Output of one configuration on its Werner input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResult {
    pub concurrence: f64,
    pub pre_clamp: f64,
    pub success_prob: f64,
}

pub fn evaluate(map: &QuantumChannel, input: &DensityMatrix) -> Result<PointResult> {
    let out = map.apply_on_first(input.matrix(), 2)?;
    let p = out.trace().re;
    if !(p >= MIN_SUCCESS_PROBABILITY) {
        return Err(Error::ZeroSuccessProbability(p));
    }
    let rho = DensityMatrix::new(out.scale(1.0 / p).hermitian_part())?;
    let c = concurrence(&rho)?;
    Ok(PointResult { concurrence: c.value, pre_clamp: c.pre_clamp, success_prob: p })
}

pub fn run_point(s: &OpticalSetup) -> Result<PointResult> {
    run_point_with(s, OmegaAverage::Exact)
}

pub fn run_point_with(s: &OpticalSetup, average: OmegaAverage) -> Result<PointResult> {
    evaluate(&setup_map_with(s, average)?, &s.input_state()?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAngle {
    Theta,
    Phi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub angle: f64,
    pub result: PointResult,
}

/// `run_point` on `steps` uniformly spaced angles of [lo, hi]; the swept
/// plates are inserted if the setup had them removed.
pub fn sweep(s: &OpticalSetup, vary: SweepAngle, lo: f64, hi: f64, steps: usize) -> Result<Vec<SweepPoint>> {
    sweep_with(s, vary, lo, hi, steps, OmegaAverage::Exact)
}

pub fn sweep_with(
    s: &OpticalSetup,
    vary: SweepAngle,
    lo: f64,
    hi: f64,
    steps: usize,
    average: OmegaAverage,
) -> Result<Vec<SweepPoint>> {
    if steps < 2 {
        return Err(Error::OutOfRange { name: "steps", value: steps as f64, lo: 2.0, hi: f64::INFINITY });
    }
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(Error::OutOfRange { name: "range", value: hi, lo, hi: f64::MAX });
    }
    let h = (hi - lo) / (steps - 1) as f64;
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let angle = if i + 1 == steps { hi } else { lo + i as f64 * h };
            let mut point = s.clone();
            match vary {
                SweepAngle::Theta => point.theta = Some(angle),
                SweepAngle::Phi => point.phi = Some(angle),
            }
            Ok(SweepPoint { angle, result: run_point_with(&point, average)? })
        })
        .collect()
}

/// Interior local maxima of the concurrence curve that rise above zero.
/// A flat top is reported once, at its right end.
pub fn find_peaks(points: &[SweepPoint]) -> Vec<SweepPoint> {
    let c: Vec<f64> = points.iter().map(|p| p.result.concurrence).collect();
    (1..c.len().saturating_sub(1))
        .filter(|&i| c[i] > TOL.eb && c[i] >= c[i - 1] && c[i] > c[i + 1])
        .filter(|&i| {
            // a plateau only counts if the curve rose into it
            let mut j = i;
            while j > 0 && c[j - 1] == c[i] {
                j -= 1;
            }
            j > 0 && c[j - 1] < c[i]
        })
        .map(|i| points[i])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ad_channel, choi_state, superop_distance};
    use crate::qmath::pauli;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    #[test]
    fn plates() {
        assert!(hwp(0.0).distance(&pauli::z()) < 1e-15);
        assert!(hwp(FRAC_PI_4).distance(&pauli::x()) < 1e-15);
        let a = alpha_for_eta(0.3).unwrap();
        assert!(((2.0 * a).cos() + 0.3f64.sqrt()).abs() < 1e-15);
        assert!((a - 1.0752180336).abs() < 1e-9);
        assert!((alpha_for_eta(1.0).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((alpha_for_eta(0.0).unwrap() - FRAC_PI_4).abs() < 1e-15);
        assert!(alpha_for_eta(1.2).is_err());
        for xi in [0.0, 0.3, 1.1, -2.0] {
            let u = hwp(xi);
            assert!((&u * &u).distance(&ComplexMatrix::identity(2)) < 1e-14);
            assert!(u.is_unitary(1e-14));
        }
    }

    #[test]
    fn element_validation() {
        let bs = BeamSplitterParams::new(0.48, 0.44).unwrap();
        assert!((bs.loss() - 0.08).abs() < 1e-12);
        let (t, r) = bs.renormalized();
        assert!((t + r - 1.0).abs() < 1e-12);
        assert!(bs.matrix().is_unitary(1e-12));
        assert!(matches!(BeamSplitterParams::new(0.7, 0.5), Err(Error::ElementInconsistent(_))));
        assert!(matches!(BeamSplitterParams::new(-0.1, 0.5), Err(Error::ElementInconsistent(_))));
        assert!(matches!(BeamSplitterParams::new(0.0, 0.0), Err(Error::ElementInconsistent(_))));
        let mut el = DifElements::MEASURED;
        el.coupling.main = 1.5;
        assert!(dif_map(1.0, &el).is_err());
    }

    #[test]
    fn ideal_dif_is_half_of_amplitude_damping() {
        for eta in [0.0, 0.09, 0.3, 0.8, 1.0] {
            let m = dif_map(alpha_for_eta(eta).unwrap(), &DifElements::IDEAL).unwrap();
            let target = ad_channel(eta).unwrap().scaled(0.5).unwrap();
            assert!(superop_distance(&m, &target) < 1e-10, "eta={eta}");
            let choi = m.choi_matrix();
            assert!((choi.trace().re / 2.0 - 0.5).abs() < 1e-12);
        }
        let id = dif_map(FRAC_PI_2, &DifElements::IDEAL).unwrap().scaled(2.0).unwrap();
        assert!(superop_distance(&id, &QuantumChannel::identity(2)) < 1e-12);
    }

    #[test]
    fn measured_dif_degrades_entanglement() {
        let m = dif_map(FRAC_PI_2, &DifElements::MEASURED).unwrap();
        assert!(!m.is_trace_preserving());
        let c = concurrence(&choi_state(&m).unwrap()).unwrap().value;
        assert!(c < 0.987, "{c}");
        let transmission = m.choi_matrix().trace().re / 2.0;
        assert!((0.25..=0.42).contains(&transmission), "{transmission}");
    }

    #[test]
    fn maps_never_amplify() {
        for el in [DifElements::IDEAL, DifElements::MEASURED] {
            for alpha in [0.0, 0.4, 1.0737, FRAC_PI_2] {
                let g = dif_map(alpha, &el).unwrap().kraus_gram();
                let top = crate::qmath::hermitian_eig(&g).unwrap().eigenvalues[1];
                assert!(top <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn monte_carlo_average_converges() {
        let el = DifElements::MEASURED;
        let exact = dif_map(1.0, &el).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mc = dif_map_sampled(1.0, &el, 20_000, &mut rng).unwrap();
        let d = superop_distance(&exact, &mc);
        assert!(d < 0.02, "{d}");
        assert!(d > 0.0);
    }

    #[test]
    fn identity_chain() {
        let s = OpticalSetup::identity();
        let m = setup_map(&s).unwrap();
        let target = QuantumChannel::identity(2).scaled(0.125).unwrap();
        assert!(superop_distance(&m, &target) < 1e-12);
        let r = run_point(&s).unwrap();
        assert!((r.concurrence - 0.94).abs() < 1e-6);
        assert!((r.success_prob - 0.125).abs() < 1e-12);
    }

    #[test]
    fn m_prime_collapses_to_fourth_power() {
        let s = OpticalSetup::m_prime(0.3, 0.3, FRAC_PI_4, FRAC_PI_4).unwrap().with_werner(1.0);
        let m = setup_map(&s).unwrap().scaled(8.0).unwrap();
        assert!(superop_distance(&m, &ad_channel(0.3f64.powi(4)).unwrap()) < 1e-9);
        let r = run_point(&s).unwrap();
        assert!((r.concurrence - 0.09).abs() < 1e-9);
    }

    #[test]
    fn m1_and_m2_are_eb_at_quarter_wave() {
        let s = OpticalSetup::m1(0.3, FRAC_PI_4).unwrap();
        assert!(crate::channels::is_eb(&setup_map(&s).unwrap()).unwrap().is_eb);
        for w in [0.5, 0.96, 1.0] {
            let s = OpticalSetup::m2(0.3, FRAC_PI_4).unwrap().with_werner(w);
            assert!(run_point(&s).unwrap().concurrence < 1e-9);
        }
    }

    #[test]
    fn ideal_m_prime_sweep_has_two_peaks() {
        let s = OpticalSetup::m_prime(0.3, 0.3, 0.0, FRAC_PI_4).unwrap();
        let pts = sweep(&s, SweepAngle::Theta, -FRAC_PI_2, FRAC_PI_2, 181).unwrap();
        let step = std::f64::consts::PI / 180.0;
        let peaks = find_peaks(&pts);
        assert_eq!(peaks.len(), 2, "{peaks:?}");
        assert!((peaks[0].angle + FRAC_PI_4).abs() <= step);
        assert!((peaks[1].angle - FRAC_PI_4).abs() <= step);
        assert!(pts.windows(2).all(|w| w[0].angle < w[1].angle));
    }

    #[test]
    fn m1_sweep_shape() {
        let s = OpticalSetup::m1(0.3, 0.0).unwrap();
        let pts = sweep(&s, SweepAngle::Theta, -FRAC_PI_2, FRAC_PI_2, 181).unwrap();
        assert!(pts[90].result.concurrence > 0.0);
        for k in [44, 45, 46, 134, 135, 136] {
            assert!(pts[k].result.concurrence < 1e-9, "{k}");
        }
    }

    #[test]
    fn json_round_trip() {
        let s = OpticalSetup::m_prime(0.3, 0.3, 0.2, -0.4)
            .unwrap()
            .with_elements(ElementPreset::Custom(Box::new([DifElements::MEASURED, DifElements::IDEAL, DifElements::MEASURED])));
        let back = OpticalSetup::from_json(&s.to_json().unwrap()).unwrap();
        assert_eq!(s, back);
        let bad = s.to_json().unwrap().replace("0.948", "1.948");
        assert!(matches!(OpticalSetup::from_json(&bad), Err(Error::ElementInconsistent(_))));
    }

    #[test]
    fn zero_success_is_reported() {
        // U_α = σz on both arms: nothing reaches the cross port of a 100/0 splitter
        let mut el = DifElements::IDEAL;
        el.bs = BeamSplitterParams::new(1.0, 0.0).unwrap();
        let mut s = OpticalSetup::identity();
        s.alpha1 = 0.0;
        s.elements = ElementPreset::Custom(Box::new([el, DifElements::IDEAL, DifElements::IDEAL]));
        assert!(matches!(run_point(&s), Err(Error::ZeroSuccessProbability(_))));
    }
}
