//! Discrete channel algebra: density matrices, Kraus/superoperator channels,
//! composition, Choi states and entanglement-breaking classification.
//!
//! Superoperators act on column-stacked density matrices, so ρ ↦ AρB† is
//! represented by `conj(B) ⊗ A`.

use serde::{Deserialize, Serialize};

use crate::entanglement::{concurrence, min_partial_transpose_eigenvalue};
use crate::error::{Error, Result};
use crate::qmath::{c64, hermitian_eig, kron, pauli, Complex64, ComplexMatrix, ONE, ZERO};
use crate::tol::{MAX_KRAUS, TOL};

/// A positive semidefinite, unit-trace operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState(format!(
                "{}x{} matrix is not square",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > TOL.structural {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {defect:e})")));
        }
        let tr = matrix.trace();
        if (tr - ONE).norm() > TOL.structural {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = hermitian_eig(&matrix)?.eigenvalues[0];
        if min < -TOL.psd {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix: matrix.hermitian_part() })
    }

    /// Divides a nonzero positive operator by its trace.
    pub fn from_unnormalized(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr:e} cannot be normalized")));
        }
        Self::new(matrix.scale(1.0 / tr))
    }

    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v: Vec<Complex64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64) }
    }

    /// (|00⟩ + |11⟩)/√2, the reference for Choi states.
    pub fn omega() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure(&[c64(s, 0.0), ZERO, ZERO, c64(s, 0.0)]).expect("valid Bell state")
    }

    /// (|01⟩ − |10⟩)/√2
    pub fn singlet() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self::pure(&[ZERO, c64(s, 0.0), c64(-s, 0.0), ZERO]).expect("valid Bell state")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }
}

/// A completely positive map given by Kraus operators, with its superoperator
/// cached. Postselected branches are allowed to be trace-decreasing.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<ComplexMatrix>,
    superop: ComplexMatrix,
    trace_preserving: bool,
}

fn superop_from_kraus(kraus: &[ComplexMatrix], in_dim: usize, out_dim: usize) -> ComplexMatrix {
    kraus.iter().fold(ComplexMatrix::zeros(out_dim * out_dim, in_dim * in_dim), |acc, k| {
        acc + kron(&k.conj(), k)
    })
}

/// Reorders a superoperator into the unnormalized Choi matrix
/// Σᵢⱼ Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|, channel output as the first factor.
pub fn choi_from_superop(superop: &ComplexMatrix, in_dim: usize, out_dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(out_dim * in_dim, out_dim * in_dim, |r, c| {
        let (a, i) = (r / in_dim, r % in_dim);
        let (b, j) = (c / in_dim, c % in_dim);
        superop[(a + b * out_dim, i + j * in_dim)]
    })
}

/// Minimal Kraus set from the eigendecomposition of the Choi matrix.
fn kraus_from_choi(choi: &ComplexMatrix, in_dim: usize, out_dim: usize) -> Result<Vec<ComplexMatrix>> {
    let eig = hermitian_eig(&choi.hermitian_part())?;
    let scale = eig.eigenvalues.last().copied().unwrap_or(0.0).abs().max(1.0);
    if eig.eigenvalues[0] < -TOL.psd * scale {
        return Err(Error::NotCompletelyPositive(eig.eigenvalues[0]));
    }
    let mut kraus = Vec::new();
    for (k, &lambda) in eig.eigenvalues.iter().enumerate().rev() {
        if lambda <= TOL.kraus_cutoff * scale {
            continue;
        }
        let v = eig.eigenvector(k);
        let s = lambda.sqrt();
        kraus.push(ComplexMatrix::from_fn(out_dim, in_dim, |a, i| v[a * in_dim + i] * s));
    }
    if kraus.is_empty() {
        kraus.push(ComplexMatrix::zeros(out_dim, in_dim));
    }
    Ok(kraus)
}

/// Applies a superoperator to the first tensor factor of a bipartite operator.
pub fn apply_superop_on_first(
    superop: &ComplexMatrix,
    in_dim: usize,
    out_dim: usize,
    rho: &ComplexMatrix,
    anc_dim: usize,
) -> Result<ComplexMatrix> {
    if superop.rows() != out_dim * out_dim || superop.cols() != in_dim * in_dim {
        return Err(Error::dims("superoperator does not match the declared dimensions"));
    }
    if !rho.is_square() || rho.rows() != in_dim * anc_dim {
        return Err(Error::dims(format!(
            "state of dimension {} cannot carry a {in_dim}-dim system and {anc_dim}-dim ancilla",
            rho.rows()
        )));
    }
    let mut out = ComplexMatrix::zeros(out_dim * anc_dim, out_dim * anc_dim);
    for x in 0..anc_dim {
        for y in 0..anc_dim {
            let block = ComplexMatrix::from_fn(in_dim, in_dim, |i, j| rho[(i * anc_dim + x, j * anc_dim + y)]);
            let mapped = superop.mul_vec(&block.vec());
            for a in 0..out_dim {
                for b in 0..out_dim {
                    out[(a * anc_dim + x, b * anc_dim + y)] = mapped[a + b * out_dim];
                }
            }
        }
    }
    Ok(out)
}

/// Superoperator distance used for all channel comparisons (Frobenius).
pub fn superop_distance(a: &QuantumChannel, b: &QuantumChannel) -> f64 {
    a.superop.distance(&b.superop)
}

impl QuantumChannel {
    /// Builds a channel from Kraus operators, each `out_dim × in_dim`.
    pub fn from_kraus(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| Error::dims("empty Kraus list"))?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        if kraus.iter().any(|k| k.rows() != out_dim || k.cols() != in_dim) {
            return Err(Error::dims("Kraus operators have different shapes"));
        }
        let gram = kraus.iter().fold(ComplexMatrix::zeros(in_dim, in_dim), |acc, k| acc + k.dagger() * k);
        let id = ComplexMatrix::identity(in_dim);
        let trace_preserving = (&gram - &id).max_abs() <= TOL.structural;
        if !trace_preserving {
            let defect = hermitian_eig(&(&id - &gram).hermitian_part())?.eigenvalues[0];
            if defect < -TOL.structural {
                return Err(Error::TraceIncreasing(-defect));
            }
        }
        let superop = superop_from_kraus(&kraus, in_dim, out_dim);
        Ok(Self { in_dim, out_dim, kraus, superop, trace_preserving })
    }

    /// Builds a channel from its superoperator, extracting a minimal Kraus set.
    pub fn from_superop(superop: ComplexMatrix, in_dim: usize, out_dim: usize) -> Result<Self> {
        if superop.rows() != out_dim * out_dim || superop.cols() != in_dim * in_dim {
            return Err(Error::dims(format!(
                "{}x{} superoperator for {in_dim}->{out_dim} channel",
                superop.rows(),
                superop.cols()
            )));
        }
        let choi = choi_from_superop(&superop, in_dim, out_dim);
        let kraus = kraus_from_choi(&choi, in_dim, out_dim)?;
        let gram = kraus.iter().fold(ComplexMatrix::zeros(in_dim, in_dim), |acc, k| acc + k.dagger() * k);
        let id = ComplexMatrix::identity(in_dim);
        let trace_preserving = (&gram - &id).max_abs() <= TOL.structural;
        Ok(Self { in_dim, out_dim, kraus, superop, trace_preserving })
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_kraus(vec![ComplexMatrix::identity(dim)]).expect("identity is a channel")
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn superop(&self) -> &ComplexMatrix {
        &self.superop
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.trace_preserving
    }

    /// Σ K†K
    pub fn kraus_gram(&self) -> ComplexMatrix {
        self.kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.in_dim, self.in_dim), |acc, k| acc + k.dagger() * k)
    }

    /// Applies the channel through its superoperator.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !rho.is_square() || rho.rows() != self.in_dim {
            return Err(Error::dims(format!("{}x{} input for {}-dim channel", rho.rows(), rho.cols(), self.in_dim)));
        }
        ComplexMatrix::unvec(&self.superop.mul_vec(&rho.vec()), self.out_dim, self.out_dim)
    }

    /// Applies the channel through its Kraus operators.
    pub fn apply_kraus(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if !rho.is_square() || rho.rows() != self.in_dim {
            return Err(Error::dims(format!("{}x{} input for {}-dim channel", rho.rows(), rho.cols(), self.in_dim)));
        }
        Ok(self
            .kraus
            .iter()
            .fold(ComplexMatrix::zeros(self.out_dim, self.out_dim), |acc, k| acc + k * rho * k.dagger()))
    }

    /// (Φ ⊗ id)(ρ) with the channel on the first factor.
    pub fn apply_on_first(&self, rho: &ComplexMatrix, anc_dim: usize) -> Result<ComplexMatrix> {
        apply_superop_on_first(&self.superop, self.in_dim, self.out_dim, rho, anc_dim)
    }

    /// Multiplies every Kraus operator by √factor (the superoperator by factor).
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor >= 0.0) {
            return Err(Error::OutOfRange { name: "scale factor", value: factor, lo: 0.0, hi: f64::INFINITY });
        }
        let s = factor.sqrt();
        Self::from_kraus(self.kraus.iter().map(|k| k.scale(s)).collect())
    }

    /// Signal passes through `self` first, then through `then`.
    pub fn then(&self, then: &QuantumChannel) -> Result<QuantumChannel> {
        compose(self, then)
    }

    /// n-fold self-composition; `power(0)` is the identity.
    pub fn power(&self, n: usize) -> Result<QuantumChannel> {
        if self.in_dim != self.out_dim {
            return Err(Error::dims("only endomorphisms can be iterated"));
        }
        let mut acc = QuantumChannel::identity(self.in_dim);
        for _ in 0..n {
            acc = compose(&acc, self)?;
        }
        Ok(acc)
    }

    /// Unnormalized Choi matrix Σᵢⱼ Φ(|i⟩⟨j|) ⊗ |i⟩⟨j|.
    pub fn choi_matrix(&self) -> ComplexMatrix {
        choi_from_superop(&self.superop, self.in_dim, self.out_dim)
    }

    pub fn to_document(&self) -> ChannelDocument {
        ChannelDocument {
            in_dim: self.in_dim,
            out_dim: self.out_dim,
            kraus: self
                .kraus
                .iter()
                .map(|k| k.to_row_major().into_iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }

    pub fn from_document(doc: &ChannelDocument) -> Result<Self> {
        let kraus = doc
            .kraus
            .iter()
            .map(|entries| {
                let z: Vec<Complex64> = entries.iter().map(|&[re, im]| c64(re, im)).collect();
                ComplexMatrix::from_row_major(doc.out_dim, doc.in_dim, &z)
            })
            .collect::<Result<Vec<_>>>()?;
        let ch = Self::from_kraus(kraus)?;
        if ch.in_dim != doc.in_dim || ch.out_dim != doc.out_dim {
            return Err(Error::dims("document dimensions disagree with Kraus shapes"));
        }
        Ok(ch)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(s)?)
    }
}

/// Serialized form: each Kraus operator is a row-major list of `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelDocument {
    pub in_dim: usize,
    pub out_dim: usize,
    pub kraus: Vec<Vec<[f64; 2]>>,
}

/// Amplitude damping with transmission coefficient η.
pub fn ad_channel(eta: f64) -> Result<QuantumChannel> {
    Error::check_range("eta", eta, 0.0, 1.0)?;
    let e1 = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, eta.sqrt()])?;
    let e2 = ComplexMatrix::from_real(2, 2, &[0.0, (1.0 - eta).sqrt(), 0.0, 0.0])?;
    QuantumChannel::from_kraus(vec![e1, e2])
}

/// Phase damping ρ ↦ ½((1+p)ρ + (1−p)σzρσz).
pub fn pd_channel(p: f64) -> Result<QuantumChannel> {
    Error::check_range("p", p, 0.0, 1.0)?;
    QuantumChannel::from_kraus(vec![
        pauli::identity().scale(((1.0 + p) / 2.0).sqrt()),
        pauli::z().scale(((1.0 - p) / 2.0).sqrt()),
    ])
}

pub fn unitary_channel(u: &ComplexMatrix) -> Result<QuantumChannel> {
    let defect = u.unitarity_defect();
    if defect > TOL.structural {
        return Err(Error::NotUnitary(defect));
    }
    QuantumChannel::from_kraus(vec![u.clone()])
}

/// Signal-order composition: the output is `then ∘ first`.
pub fn compose(first: &QuantumChannel, then: &QuantumChannel) -> Result<QuantumChannel> {
    if then.in_dim != first.out_dim {
        return Err(Error::dims(format!(
            "cannot feed a {}-dim output into a {}-dim input",
            first.out_dim, then.in_dim
        )));
    }
    let superop = &then.superop * &first.superop;
    let mut kraus = Vec::with_capacity(first.kraus.len() * then.kraus.len());
    for b in &then.kraus {
        for a in &first.kraus {
            kraus.push(b * a);
        }
    }
    if kraus.len() > MAX_KRAUS {
        kraus = kraus_from_choi(&choi_from_superop(&superop, first.in_dim, then.out_dim), first.in_dim, then.out_dim)?;
    }
    let gram = kraus.iter().fold(ComplexMatrix::zeros(first.in_dim, first.in_dim), |acc, k| acc + k.dagger() * k);
    let trace_preserving = (&gram - &ComplexMatrix::identity(first.in_dim)).max_abs() <= TOL.structural;
    Ok(QuantumChannel { in_dim: first.in_dim, out_dim: then.out_dim, kraus, superop, trace_preserving })
}

/// Composes a sequence given in signal order.
pub fn compose_all<'a>(channels: impl IntoIterator<Item = &'a QuantumChannel>) -> Result<QuantumChannel> {
    let mut it = channels.into_iter();
    let first = it.next().ok_or_else(|| Error::dims("empty channel sequence"))?;
    it.try_fold(first.clone(), |acc, c| compose(&acc, c))
}

/// (Φ ⊗ id)(|Ω⟩⟨Ω|) with |Ω⟩ = Σᵢ|ii⟩/√d. Trace-decreasing maps are
/// renormalized by their postselection probability.
pub fn choi_state(c: &QuantumChannel) -> Result<DensityMatrix> {
    let choi = c.choi_matrix();
    if c.trace_preserving {
        DensityMatrix::new(choi.scale(1.0 / c.in_dim as f64))
    } else {
        DensityMatrix::from_unnormalized(choi)
    }
}

/// Two-qubit consistency between concurrence and the PPT test.
///
/// With N = 2·max(0, −λmin(ρ^Γ)), every two-qubit state satisfies
/// √((1−C)² + C²) − (1−C) ≤ N ≤ C. Near the separable boundary N ~ C²/2, so
/// a fixed threshold on both measures would disagree spuriously.
pub fn verdicts_consistent(pre_clamp: f64, min_pt_eigenvalue: f64) -> bool {
    let c = pre_clamp.max(0.0);
    let n = 2.0 * (-min_pt_eigenvalue).max(0.0);
    let lower = ((1.0 - c).powi(2) + c * c).sqrt() - (1.0 - c);
    let band = TOL.verdict_band;
    if pre_clamp <= TOL.eb {
        n <= band
    } else {
        n <= c + band && n >= lower - band
    }
}

/// Entanglement-breaking verdict with the quantities it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EbVerdict {
    pub is_eb: bool,
    /// Signed concurrence argument of the Choi state (negative deep inside EB).
    pub margin: f64,
    /// Smallest eigenvalue of the partially transposed Choi state.
    pub min_pt_eigenvalue: f64,
}

/// Classifies a qubit channel as entanglement breaking from the concurrence
/// of its Choi state, cross-checked against the PPT criterion.
pub fn is_eb(c: &QuantumChannel) -> Result<EbVerdict> {
    if c.in_dim != 2 || c.out_dim != 2 {
        return Err(Error::dims(format!("EB test needs a qubit channel, got {}->{}", c.in_dim, c.out_dim)));
    }
    let choi = choi_state(c)?;
    let conc = concurrence(&choi)?;
    let min_pt = min_partial_transpose_eigenvalue(&choi)?;
    let by_concurrence = conc.pre_clamp <= TOL.eb;
    if !verdicts_consistent(conc.pre_clamp, min_pt) {
        return Err(Error::ToleranceConflict { pre_clamp: conc.pre_clamp, min_pt_eigenvalue: min_pt });
    }
    Ok(EbVerdict { is_eb: by_concurrence, margin: conc.pre_clamp, min_pt_eigenvalue: min_pt })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbOrder {
    Finite(usize),
    /// No power up to the given bound is entanglement breaking.
    Unbounded(usize),
}

impl EbOrder {
    pub fn finite(self) -> Option<usize> {
        match self {
            EbOrder::Finite(n) => Some(n),
            EbOrder::Unbounded(_) => None,
        }
    }
}

impl std::fmt::Display for EbOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EbOrder::Finite(n) => write!(f, "{n}"),
            EbOrder::Unbounded(n) => write!(f, "unbounded(>{n})"),
        }
    }
}

/// Smallest n ≤ `max_n` with cⁿ entanglement breaking.
pub fn eb_order(c: &QuantumChannel, max_n: usize) -> Result<EbOrder> {
    if c.in_dim != 2 || c.out_dim != 2 {
        return Err(Error::dims("EB order needs a qubit channel"));
    }
    let mut acc = c.clone();
    for n in 1..=max_n.max(1) {
        if is_eb(&acc)?.is_eb {
            return Ok(EbOrder::Finite(n));
        }
        acc = compose(&acc, c)?;
    }
    Ok(EbOrder::Unbounded(max_n.max(1)))
}

/// The pair Φ = A∘U (U first) and Ψ = U†∘A (A first) built from a damping
/// channel A and a unitary U.
pub fn cut_and_paste_pair(damping: &QuantumChannel, u: &ComplexMatrix) -> Result<(QuantumChannel, QuantumChannel)> {
    let forward = unitary_channel(u)?;
    let backward = unitary_channel(&u.dagger())?;
    Ok((compose(&forward, damping)?, compose(damping, &backward)?))
}
