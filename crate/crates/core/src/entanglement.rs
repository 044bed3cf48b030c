//! Two-qubit entanglement measures.

use nalgebra::DMatrix;

use crate::channels::DensityMatrix;
use crate::error::{Error, Result};
use crate::qmath::{c64, hermitian_eig, kron, partial_transpose, pauli, Complex64, ComplexMatrix};
use crate::tol::TOL;

/// Wootters concurrence together with the signed quantity it clamps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Concurrence {
    /// max(0, pre_clamp)
    pub value: f64,
    /// λ₁ − λ₂ − λ₃ − λ₄; continuous through the separable boundary.
    pub pre_clamp: f64,
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 4 {
        return Err(Error::BadDimension(rho.dim()));
    }
    Ok(())
}

/// Wootters concurrence.
///
/// The λᵢ are the singular values of τ = Vᵀ(σy⊗σy)V, where the columns of V
/// are the eigenvectors of ρ scaled by the square roots of their eigenvalues.
/// This equals the usual √eig(ρ ρ̃) but never takes square roots of
/// round-off-sized eigenvalues of the spin-flipped product.
pub fn concurrence(rho: &DensityMatrix) -> Result<Concurrence> {
    require_two_qubits(rho)?;
    let eig = hermitian_eig(rho.matrix())?;
    let support: Vec<usize> = (0..4).filter(|&k| eig.eigenvalues[k] > TOL.support).collect();
    if support.is_empty() {
        return Err(Error::InvalidState("density matrix has empty support".into()));
    }
    let yy = kron(&pauli::y(), &pauli::y());
    let v = DMatrix::from_fn(4, support.len(), |r, c| {
        let k = support[c];
        eig.eigenvectors[(r, k)] * eig.eigenvalues[k].sqrt()
    });
    let tau = v.transpose() * yy.as_nalgebra() * &v;
    let mut lambda: Vec<f64> = tau.singular_values().iter().copied().collect();
    lambda.sort_by(|a, b| b.total_cmp(a));
    lambda.resize(4, 0.0);
    let pre_clamp = lambda[0] - lambda[1] - lambda[2] - lambda[3];
    Ok(Concurrence { value: pre_clamp.max(0.0), pre_clamp })
}

/// Spectrum of the partial transpose on the second qubit, ascending.
pub fn partial_transpose_spectrum(rho: &DensityMatrix) -> Result<Vec<f64>> {
    require_two_qubits(rho)?;
    let pt = partial_transpose(rho.matrix(), &[2, 2], 1)?;
    Ok(hermitian_eig(&pt)?.eigenvalues)
}

pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    Ok(partial_transpose_spectrum(rho)?[0])
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    Ok(partial_transpose_spectrum(rho)?.iter().filter(|&&l| l < 0.0).map(|l| -l).sum())
}

/// W|Ω⟩⟨Ω| + (1−W)I/4
pub fn werner_state(w: f64, omega: &DensityMatrix) -> Result<DensityMatrix> {
    Error::check_range("W", w, 0.0, 1.0)?;
    require_two_qubits(omega)?;
    let mixed = ComplexMatrix::identity(4).scale((1.0 - w) / 4.0);
    DensityMatrix::new(omega.matrix().scale(w) + mixed)
}

/// (|HV⟩ + e^{iφ}|VH⟩)/√2
pub fn hv_bell_state(phase: f64) -> DensityMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let z = Complex64::new(0.0, 0.0);
    DensityMatrix::pure(&[z, c64(s, 0.0), Complex64::from_polar(s, phase), z]).expect("valid Bell state")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{ad_channel, choi_state, pd_channel};

    /// Closed form for X-shaped two-qubit states.
    fn x_state_concurrence(m: &ComplexMatrix) -> f64 {
        let a = m[(0, 3)].norm() - (m[(1, 1)].re * m[(2, 2)].re).sqrt();
        let b = m[(1, 2)].norm() - (m[(0, 0)].re * m[(3, 3)].re).sqrt();
        2.0 * a.max(b).max(0.0)
    }

    /// √eig(ρ ρ̃) through the Hermitian similarity √ρ ρ̃ √ρ.
    fn textbook_concurrence(rho: &ComplexMatrix) -> f64 {
        let yy = kron(&pauli::y(), &pauli::y());
        let tilde = &yy * rho.conj() * &yy;
        let sqrt_rho = hermitian_eig(rho).unwrap().map_spectrum(|l| c64(l.max(0.0).sqrt(), 0.0));
        let r = (&sqrt_rho * &tilde * &sqrt_rho).hermitian_part();
        let mut l: Vec<f64> = hermitian_eig(&r).unwrap().eigenvalues.iter().map(|&x| x.max(0.0).sqrt()).collect();
        l.sort_by(|a, b| b.total_cmp(a));
        (l[0] - l[1] - l[2] - l[3]).max(0.0)
    }

    #[test]
    fn extreme_states() {
        let c = concurrence(&DensityMatrix::omega()).unwrap();
        assert!((c.value - 1.0).abs() < 1e-12);
        let c = concurrence(&DensityMatrix::maximally_mixed(4)).unwrap();
        assert_eq!(c.value, 0.0);
        assert!((c.pre_clamp + 0.5).abs() < 1e-12);
        assert!((concurrence(&DensityMatrix::singlet()).unwrap().value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ad_choi_concurrence_is_sqrt_eta() {
        for eta in [0.1f64, 0.3, 0.7] {
            let choi = choi_state(&ad_channel(eta).unwrap()).unwrap();
            let c = concurrence(&choi).unwrap().value;
            assert!((c - x_state_concurrence(choi.matrix())).abs() < 1e-12);
            assert!((c - textbook_concurrence(choi.matrix())).abs() < 1e-7);
            assert!((c - eta.sqrt()).abs() < 1e-12, "eta={eta}: {c}");
        }
        let c = concurrence(&choi_state(&ad_channel(0.3).unwrap()).unwrap()).unwrap().value;
        assert!((c - 0.5477225575).abs() < 1e-9);
    }

    #[test]
    fn pd_choi_concurrence_is_p() {
        let choi = choi_state(&pd_channel(0.4).unwrap()).unwrap();
        let c = concurrence(&choi).unwrap().value;
        assert!((c - 0.4).abs() < 1e-12);
        assert!((c - x_state_concurrence(choi.matrix())).abs() < 1e-12);
    }

    #[test]
    fn negativity_values() {
        assert!((negativity(&DensityMatrix::omega()).unwrap() - 0.5).abs() < 1e-12);
        let product = DensityMatrix::pure(&[c64(1.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0), c64(0.0, 0.0)]).unwrap();
        assert!(negativity(&product).unwrap() < 1e-15);
        let w = werner_state(1.0 / 3.0, &DensityMatrix::omega()).unwrap();
        assert!(negativity(&w).unwrap() < 1e-12);
        // smallest PT eigenvalue (1 - 3W)/4
        let w = werner_state(0.6, &DensityMatrix::omega()).unwrap();
        assert!((min_partial_transpose_eigenvalue(&w).unwrap() - (1.0 - 1.8) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn werner_family() {
        let om = DensityMatrix::omega();
        assert!(werner_state(1.0, &om).unwrap().matrix().distance(om.matrix()) < 1e-15);
        assert!(werner_state(0.0, &om).unwrap().matrix().distance(DensityMatrix::maximally_mixed(4).matrix()) < 1e-15);
        let c = concurrence(&werner_state(0.96, &om).unwrap()).unwrap().value;
        assert!((c - 0.94).abs() < 1e-12);
        for w in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8] {
            let c = concurrence(&werner_state(w, &om).unwrap()).unwrap().value;
            assert!((c - ((3.0 * w - 1.0) / 2.0).max(0.0)).abs() < 1e-12);
        }
        assert!(werner_state(1.1, &om).is_err());
    }

    #[test]
    fn rejects_wrong_dimension() {
        let q = DensityMatrix::maximally_mixed(2);
        assert!(matches!(concurrence(&q), Err(Error::BadDimension(2))));
        assert!(matches!(negativity(&q), Err(Error::BadDimension(2))));
    }

    #[test]
    fn hv_states_are_maximally_entangled() {
        for phase in [0.0, 1.0, std::f64::consts::PI] {
            assert!((concurrence(&hv_bell_state(phase)).unwrap().value - 1.0).abs() < 1e-12);
        }
        assert!(hv_bell_state(std::f64::consts::PI).matrix().distance(DensityMatrix::singlet().matrix()) < 1e-15);
    }
}
