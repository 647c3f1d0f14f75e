//! Tripartite index algebra, partial transpose, partial trace, negativity,
//! and linear entropy.
//!
//! Subsystem A is the ion internal state, B the phonon span {m-1, m}, C the
//! photon span {n-1, n}. The dynamics never leaves those two-level spans, so
//! each subsystem is a qubit and the composite space has dimension 8.

use crate::error::{Error, Result};
use crate::evolution::DensityOperator;
use crate::linalg::{hermitian_eigensystem, BasisTag, ComplexMatrix};

/// Eigenvalues above this (negative) floor are treated as zero when
/// summing negativity, so floating-point dust never reports entanglement.
pub const NEGATIVITY_FLOOR: f64 = 1e-10;

/// One of the three parties of the composite system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    /// Ion internal state.
    A,
    /// Vibrational (phonon) qubit.
    B,
    /// Cavity (photon) qubit.
    C,
}

impl Subsystem {
    pub const ALL: [Subsystem; 3] = [Subsystem::A, Subsystem::B, Subsystem::C];

    fn slot(self) -> usize {
        match self {
            Subsystem::A => 0,
            Subsystem::B => 1,
            Subsystem::C => 2,
        }
    }
}

/// Dimensions and index arithmetic for the 2 x 2 x 2 composite space,
/// plus the embedding of the 4-dim model basis into it.
///
/// Flat index convention: `4 i_A + 2 i_B + i_C`. The model kets map as
/// |g,m-1,n-1> -> (0,0,0), |e,m-1,n-1> -> (1,0,0), |g,m,n> -> (0,1,1),
/// |e,m,n> -> (1,1,1).
#[derive(Clone, Copy, Debug, Default)]
pub struct TripartiteIndex;

impl TripartiteIndex {
    pub const D_A: usize = 2;
    pub const D_B: usize = 2;
    pub const D_C: usize = 2;
    pub const DIM: usize = 8;

    /// Flat composite index from per-subsystem indices.
    #[inline]
    pub fn flat(&self, i_a: usize, i_b: usize, i_c: usize) -> usize {
        4 * i_a + 2 * i_b + i_c
    }

    /// Per-subsystem indices from a flat composite index.
    #[inline]
    pub fn split(&self, idx: usize) -> [usize; 3] {
        [(idx >> 2) & 1, (idx >> 1) & 1, idx & 1]
    }

    /// Composite index of model-basis element `k` (0..4).
    #[inline]
    pub fn embed(&self, k: usize) -> usize {
        const MAP: [usize; 4] = [0b000, 0b100, 0b011, 0b111];
        MAP[k]
    }
}

/// Lift a 4-dim model-basis state onto the 8-dim composite space; support
/// stays on the embedded subspace and the trace is preserved.
pub fn embed_tripartite(rho4: &DensityOperator, idx: &TripartiteIndex) -> Result<DensityOperator> {
    if rho4.dim() != 4 || rho4.basis() != BasisTag::MODEL {
        return Err(Error::DimensionMismatch(format!(
            "embedding needs a 4-dim model-basis state, got dim {} ({:?})",
            rho4.dim(),
            rho4.basis()
        )));
    }
    let mut out = ComplexMatrix::zeros(TripartiteIndex::DIM, BasisTag::TRIPARTITE);
    for i in 0..4 {
        for j in 0..4 {
            out.set(idx.embed(i), idx.embed(j), rho4.matrix().get(i, j));
        }
    }
    DensityOperator::new(out)
}

fn partial_transpose_matrix(
    m: &ComplexMatrix,
    idx: &TripartiteIndex,
    subsystem: Subsystem,
) -> ComplexMatrix {
    let slot = subsystem.slot();
    let mut out = ComplexMatrix::zeros(TripartiteIndex::DIM, BasisTag::TRIPARTITE);
    for r in 0..TripartiteIndex::DIM {
        for c in 0..TripartiteIndex::DIM {
            let mut ri = idx.split(r);
            let mut ci = idx.split(c);
            std::mem::swap(&mut ri[slot], &mut ci[slot]);
            out.set(
                idx.flat(ri[0], ri[1], ri[2]),
                idx.flat(ci[0], ci[1], ci[2]),
                m.get(r, c),
            );
        }
    }
    out
}

/// Transpose the named subsystem's indices between bra and ket:
/// `<i,m,n| rho^T_A |j,r,s> = <j,m,n| rho |i,r,s>` and cyclically for B, C.
/// The output stays Hermitian with unit trace but may be indefinite.
pub fn partial_transpose(
    rho: &DensityOperator,
    idx: &TripartiteIndex,
    subsystem: Subsystem,
) -> Result<ComplexMatrix> {
    if rho.dim() != TripartiteIndex::DIM {
        return Err(Error::DimensionMismatch(format!(
            "partial transpose needs the 8-dim composite state, got {}",
            rho.dim()
        )));
    }
    Ok(partial_transpose_matrix(rho.matrix(), idx, subsystem))
}

/// Negativity across the named cut: the summed magnitude of the negative
/// eigenvalues of the partial transpose.
pub fn negativity(
    rho: &DensityOperator,
    idx: &TripartiteIndex,
    subsystem: Subsystem,
) -> Result<f64> {
    let pt = partial_transpose(rho, idx, subsystem)?;
    let eig = hermitian_eigensystem(&pt)?;
    Ok(eig
        .values
        .iter()
        .filter(|&&l| l <= -NEGATIVITY_FLOOR)
        .map(|l| -l)
        .sum())
}

/// Reduced 2x2 state of the kept subsystem, tracing out the other two.
pub fn reduced_density(
    rho: &DensityOperator,
    idx: &TripartiteIndex,
    keep: Subsystem,
) -> Result<DensityOperator> {
    if rho.dim() != TripartiteIndex::DIM {
        return Err(Error::DimensionMismatch(format!(
            "partial trace needs the 8-dim composite state, got {}",
            rho.dim()
        )));
    }
    let slot = keep.slot();
    let mut out = ComplexMatrix::zeros(2, BasisTag::QUBIT);
    for r in 0..TripartiteIndex::DIM {
        let ri = idx.split(r);
        for c in 0..TripartiteIndex::DIM {
            let ci = idx.split(c);
            let traced_match = (0..3).filter(|&s| s != slot).all(|s| ri[s] == ci[s]);
            if traced_match {
                let v = out.get(ri[slot], ci[slot]) + rho.matrix().get(r, c);
                out.set(ri[slot], ci[slot], v);
            }
        }
    }
    DensityOperator::new(out)
}

/// Linear entropy of a qubit state: `2 (1 - Tr rho^2)`, in [0, 1];
/// 0 for pure states, 1 for the maximally mixed state.
pub fn linear_entropy(rho_red: &DensityOperator) -> f64 {
    debug_assert_eq!(
        rho_red.dim(),
        2,
        "linear entropy is defined for qubits here"
    );
    (2.0 * (1.0 - rho_red.purity())).clamp(0.0, 1.0)
}
