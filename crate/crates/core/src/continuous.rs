//! Continuous homogeneous channels generated by Lindblad Liouvillians, and
//! switched lines that alternate two generators slice by slice.

use std::sync::OnceLock;

use rayon::prelude::*;

use crate::channels::{apply_superop_on_first, DensityMatrix, QuantumChannel};
use crate::entanglement::concurrence;
use crate::error::{Error, Result};
use crate::qmath::{expm, hermitian_eig, kron, pauli, Complex64, ComplexMatrix, I};
use crate::tol::TOL;

/// Which of the two counter-rotating Hamiltonians ±Ωσx drives the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    /// H = +Ωσx
    First,
    /// H = −Ωσx
    Second,
}

impl Branch {
    fn sign(self) -> f64 {
        match self {
            Branch::First => 1.0,
            Branch::Second => -1.0,
        }
    }
}

/// Sign of the double-commutator dephasing term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DephasingSign {
    /// −(ε/2)[σz,[σz,ρ]]: coherences decay.
    #[default]
    Decaying,
    /// +(ε/2)[σz,[σz,ρ]]: coherences grow and the map is not CP.
    Growing,
}

/// Generator of dρ/dx = L(ρ) acting on column-stacked ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    dim: usize,
    generator: ComplexMatrix,
    label: String,
}

impl Liouvillian {
    /// Checks the shape and that tr L(ρ) = 0 for every ρ.
    pub fn new(dim: usize, generator: ComplexMatrix, label: impl Into<String>) -> Result<Self> {
        if generator.rows() != dim * dim || generator.cols() != dim * dim {
            return Err(Error::dims(format!(
                "{}x{} generator for a {dim}-dimensional system",
                generator.rows(),
                generator.cols()
            )));
        }
        // ⟨⟨I| picks out the diagonal entries i + i·dim.
        let mut defect: f64 = 0.0;
        for c in 0..dim * dim {
            let s: Complex64 = (0..dim).map(|i| generator[(i + i * dim, c)]).sum();
            defect = defect.max(s.norm());
        }
        if defect > TOL.structural * generator.max_abs().max(1.0) {
            return Err(Error::InvalidState(format!("generator does not preserve trace (defect {defect:e})")));
        }
        Ok(Self { dim, generator, label: label.into() })
    }

    pub fn zero(dim: usize) -> Self {
        Self { dim, generator: ComplexMatrix::zeros(dim * dim, dim * dim), label: "zero".into() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generator(&self) -> &ComplexMatrix {
        &self.generator
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// (L₁ + L₂)/2
    pub fn average(a: &Liouvillian, b: &Liouvillian) -> Result<Liouvillian> {
        if a.dim != b.dim {
            return Err(Error::dims("averaging generators of different dimension"));
        }
        let g = (&a.generator + &b.generator).scale(0.5);
        Ok(Self { dim: a.dim, generator: g, label: format!("avg({},{})", a.label, b.label) })
    }
}

/// ρ ↦ −i[H, ρ]
fn hamiltonian_superop(h: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(h.rows());
    (kron(&id, h) - kron(&h.transpose(), &id)).scale_c(-I)
}

/// ρ ↦ LρL† − ½{L†L, ρ}
fn dissipator_superop(l: &ComplexMatrix) -> ComplexMatrix {
    let id = ComplexMatrix::identity(l.rows());
    let ldl = l.dagger() * l;
    kron(&l.conj(), l) - kron(&id, &ldl).scale(0.5) - kron(&ldl.transpose(), &id).scale(0.5)
}

fn check_rates(omega: f64, eps: f64) -> Result<()> {
    Error::check_range("omega", omega, f64::MIN, f64::MAX)?;
    Error::check_range("eps", eps, 0.0, f64::MAX)
}

/// −i[±Ωσx, ρ] + (ε/2)(2σ₋ρσ₊ − σ₊σ₋ρ − ρσ₊σ₋), σ₋ = |0⟩⟨1|.
pub fn rotating_ad_liouvillian(branch: Branch, omega: f64, eps: f64) -> Result<Liouvillian> {
    check_rates(omega, eps)?;
    let h = pauli::x().scale(branch.sign() * omega);
    let g = hamiltonian_superop(&h) + dissipator_superop(&pauli::lowering()).scale(eps);
    Liouvillian::new(2, g, format!("ad{}", branch_index(branch)))
}

/// −i[±Ωσx, ρ] − (ε/2)[σz,[σz,ρ]]
pub fn rotating_pd_liouvillian(branch: Branch, omega: f64, eps: f64) -> Result<Liouvillian> {
    rotating_pd_liouvillian_with_sign(branch, omega, eps, DephasingSign::Decaying)
}

pub fn rotating_pd_liouvillian_with_sign(
    branch: Branch,
    omega: f64,
    eps: f64,
    sign: DephasingSign,
) -> Result<Liouvillian> {
    check_rates(omega, eps)?;
    let h = pauli::x().scale(branch.sign() * omega);
    // −(ε/2)[σz,[σz,ρ]] = ε(σzρσz − ρ)
    let dephasing = dissipator_superop(&pauli::z()).scale(eps);
    let dephasing = match sign {
        DephasingSign::Decaying => dephasing,
        DephasingSign::Growing => -dephasing,
    };
    Liouvillian::new(2, hamiltonian_superop(&h) + dephasing, format!("pd{}", branch_index(branch)))
}

fn branch_index(b: Branch) -> u8 {
    match b {
        Branch::First => 1,
        Branch::Second => 2,
    }
}

/// Anything that produces a superoperator S(x) with S(0) = id.
pub trait Propagator: Sync {
    fn dim(&self) -> usize;

    fn label(&self) -> &str;

    /// T with S(x1) = T·S(x0), for 0 ≤ x0 ≤ x1.
    fn advance(&self, x0: f64, x1: f64) -> Result<ComplexMatrix>;

    fn superop_at(&self, x: f64) -> Result<ComplexMatrix> {
        self.advance(0.0, x)
    }

    fn channel_at(&self, x: f64) -> Result<QuantumChannel> {
        let d = self.dim();
        QuantumChannel::from_superop(self.superop_at(x)?, d, d)
    }
}

fn check_interval(x0: f64, x1: f64) -> Result<()> {
    Error::check_range("x", x0, 0.0, f64::MAX)?;
    Error::check_range("x", x1, x0, f64::MAX)
}

impl Propagator for Liouvillian {
    fn dim(&self) -> usize {
        self.dim
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn advance(&self, x0: f64, x1: f64) -> Result<ComplexMatrix> {
        check_interval(x0, x1)?;
        expm(&self.generator.scale(x1 - x0))
    }
}

/// e^{Lx}
pub fn propagate(l: &Liouvillian, x: f64) -> Result<QuantumChannel> {
    l.channel_at(x)
}

/// Piecewise-constant generator: `gen_even` on slices 0, 2, 4, …, `gen_odd`
/// on slices 1, 3, 5, …, each of length `slice_len`.
#[derive(Debug, Clone)]
pub struct SwitchedLine {
    gen_even: Liouvillian,
    gen_odd: Liouvillian,
    slice_len: f64,
    label: String,
    full_slices: OnceLock<(ComplexMatrix, ComplexMatrix)>,
}

impl SwitchedLine {
    pub fn new(gen_even: Liouvillian, gen_odd: Liouvillian, slice_len: f64, label: impl Into<String>) -> Result<Self> {
        if gen_even.dim != gen_odd.dim {
            return Err(Error::dims("switched generators act on different dimensions"));
        }
        if !(slice_len > 0.0 && slice_len.is_finite()) {
            return Err(Error::OutOfRange { name: "slice_len", value: slice_len, lo: 0.0, hi: f64::INFINITY });
        }
        Ok(Self { gen_even, gen_odd, slice_len, label: label.into(), full_slices: OnceLock::new() })
    }

    pub fn gen_even(&self) -> &Liouvillian {
        &self.gen_even
    }

    pub fn gen_odd(&self) -> &Liouvillian {
        &self.gen_odd
    }

    pub fn slice_len(&self) -> f64 {
        self.slice_len
    }

    fn slice_index(&self, x: f64) -> usize {
        (x / self.slice_len + 1e-12).floor() as usize
    }

    fn generator_for(&self, k: usize) -> &Liouvillian {
        if k.is_multiple_of(2) {
            &self.gen_even
        } else {
            &self.gen_odd
        }
    }

    fn full_slice(&self, k: usize) -> Result<&ComplexMatrix> {
        if self.full_slices.get().is_none() {
            let e = expm(&self.gen_even.generator.scale(self.slice_len))?;
            let o = expm(&self.gen_odd.generator.scale(self.slice_len))?;
            let _ = self.full_slices.set((e, o));
        }
        let (e, o) = self.full_slices.get().expect("initialized above");
        Ok(if k.is_multiple_of(2) { e } else { o })
    }
}

impl Propagator for SwitchedLine {
    fn dim(&self) -> usize {
        self.gen_even.dim
    }

    fn label(&self) -> &str {
        &self.label
    }

    fn advance(&self, x0: f64, x1: f64) -> Result<ComplexMatrix> {
        check_interval(x0, x1)?;
        let d2 = self.dim() * self.dim();
        let mut acc = ComplexMatrix::identity(d2);
        let s = self.slice_len;
        let mut t = x0;
        while x1 - t > 1e-13 * s {
            let k = self.slice_index(t);
            let end = ((k + 1) as f64 * s).min(x1);
            let len = end - t;
            let step = if (len - s).abs() <= 1e-12 * s {
                self.full_slice(k)?.clone()
            } else {
                expm(&self.generator_for(k).generator.scale(len))?
            };
            acc = step * acc;
            t = end;
        }
        Ok(acc)
    }
}

pub fn switched_channel(line: &SwitchedLine, x: f64) -> Result<QuantumChannel> {
    line.channel_at(x)
}

/// Line alternating the two rotating amplitude-damping generators.
pub fn switched_ad_line(omega: f64, eps: f64, slice_len: f64) -> Result<SwitchedLine> {
    SwitchedLine::new(
        rotating_ad_liouvillian(Branch::First, omega, eps)?,
        rotating_ad_liouvillian(Branch::Second, omega, eps)?,
        slice_len,
        format!("ad-switched(s={slice_len})"),
    )
}

/// Line alternating the two rotating dephasing generators.
pub fn switched_pd_line(omega: f64, eps: f64, slice_len: f64) -> Result<SwitchedLine> {
    SwitchedLine::new(
        rotating_pd_liouvillian(Branch::First, omega, eps)?,
        rotating_pd_liouvillian(Branch::Second, omega, eps)?,
        slice_len,
        format!("pd-switched(s={slice_len})"),
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub x: f64,
    pub concurrence: f64,
    pub pre_clamp: f64,
}

/// Concurrence after the channel acts on one half of a singlet.
fn singlet_concurrence(superop: &ComplexMatrix, dim: usize) -> Result<(f64, f64)> {
    if dim != 2 {
        return Err(Error::BadDimension(dim * dim));
    }
    let out = apply_superop_on_first(superop, 2, 2, DensityMatrix::singlet().matrix(), 2)?;
    let rho = match DensityMatrix::new(out.clone()) {
        Ok(r) => r,
        Err(Error::InvalidState(_)) => {
            let min = hermitian_eig(&out.hermitian_part())?.eigenvalues[0];
            return Err(Error::NotCompletelyPositive(min));
        }
        Err(e) => return Err(e),
    };
    let c = concurrence(&rho)?;
    Ok((c.value, c.pre_clamp))
}

/// Concurrence on `steps` uniformly spaced points of [0, x_max].
pub fn concurrence_profile<P: Propagator + ?Sized>(prop: &P, x_max: f64, steps: usize) -> Result<Vec<ProfilePoint>> {
    if steps < 2 {
        return Err(Error::OutOfRange { name: "steps", value: steps as f64, lo: 2.0, hi: f64::INFINITY });
    }
    Error::check_range("x_max", x_max, 0.0, f64::MAX)?;
    let h = x_max / (steps - 1) as f64;
    (0..steps)
        .into_par_iter()
        .map(|i| {
            let x = if i + 1 == steps { x_max } else { i as f64 * h };
            let (concurrence, pre_clamp) = singlet_concurrence(&prop.superop_at(x)?, prop.dim())?;
            Ok(ProfilePoint { x, concurrence, pre_clamp })
        })
        .collect()
}

const SCAN_STEP: f64 = 0.01;
const BISECT_WIDTH: f64 = 1e-6;

/// First x at which the signed concurrence reaches zero.
///
/// Scans [0, x_hi] in steps of 0.01 and bisects the first bracketing step.
/// Returns `NoBracket` when the channel stays entanglement preserving.
pub fn eb_length<P: Propagator + ?Sized>(prop: &P, x_hi: f64) -> Result<f64> {
    Error::check_range("x_hi", x_hi, 0.0, f64::MAX)?;
    let d = prop.dim();
    let d2 = d * d;
    let pre = |s: &ComplexMatrix| singlet_concurrence(s, d).map(|(_, p)| p);
    let mut s_prev = ComplexMatrix::identity(d2);
    if pre(&s_prev)? <= 0.0 {
        return Ok(0.0);
    }
    let n = (x_hi / SCAN_STEP).ceil().max(1.0) as usize;
    let mut x_prev = 0.0;
    for i in 1..=n {
        let x = (i as f64 * SCAN_STEP).min(x_hi);
        let s = prop.advance(x_prev, x)? * &s_prev;
        if pre(&s)? <= 0.0 {
            let (mut lo, mut hi) = (x_prev, x);
            while hi - lo > BISECT_WIDTH {
                let mid = 0.5 * (lo + hi);
                let s_mid = prop.advance(x_prev, mid)? * &s_prev;
                if pre(&s_mid)? <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return Ok(0.5 * (lo + hi));
        }
        s_prev = s;
        x_prev = x;
    }
    Err(Error::NoBracket { x_hi })
}

/// Frobenius distance between the switched line at x and the averaged
/// generator propagated over the same length.
pub fn trotter_gap(line: &SwitchedLine, x: f64) -> Result<f64> {
    let avg = Liouvillian::average(&line.gen_even, &line.gen_odd)?;
    Ok(line.superop_at(x)?.distance(&avg.superop_at(x)?))
}
