//! Dense complex linear algebra: matrix arithmetic, Hermitian
//! eigendecomposition, Hermitian matrix exponential.
//!
//! Everything here targets small operators (dim <= ~128), so the
//! eigensolver is a cyclic complex Jacobi iteration: unconditionally
//! stable, dependency-free, and plenty fast at these sizes.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Opaque label naming the basis ordering a matrix is expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisTag(pub &'static str);

impl BasisTag {
    /// Four-dimensional computational basis {|g,m-1,n-1>, |e,m-1,n-1>, |g,m,n>, |e,m,n>}.
    pub const MODEL: BasisTag = BasisTag("model-4");
    /// Eigenbasis of the truncated interaction Hamiltonian.
    pub const EIGEN: BasisTag = BasisTag("interaction-eigen");
    /// Tripartite qubit basis |i_A, i_B, i_C> with flat index 4*i_A + 2*i_B + i_C.
    pub const TRIPARTITE: BasisTag = BasisTag("tripartite-8");
    /// Truncated Fock basis |ion, phonon, photon> in lexicographic order.
    pub const FOCK: BasisTag = BasisTag("fock");
    /// Single-qubit basis of a reduced subsystem.
    pub const QUBIT: BasisTag = BasisTag("qubit");
}

/// Square complex matrix in row-major storage, tagged with its basis.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    basis: BasisTag,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize, basis: BasisTag) -> Self {
        Self {
            dim,
            basis,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize, basis: BasisTag) -> Self {
        let mut m = Self::zeros(dim, basis);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(
        dim: usize,
        basis: BasisTag,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Self {
        let mut m = Self::zeros(dim, basis);
        for i in 0..dim {
            for j in 0..dim {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Outer product |v><v|.
    pub fn outer(v: &[Complex64], basis: BasisTag) -> Self {
        Self::from_fn(v.len(), basis, |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn basis(&self) -> BasisTag {
        self.basis
    }

    pub fn with_basis(mut self, basis: BasisTag) -> Self {
        self.basis = basis;
        self
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.entries[i * self.dim + j] = v;
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, self.basis, |i, j| self.get(j, i).conj())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "matrix product needs equal dims");
        let n = self.dim;
        let mut out = Self::zeros(n, self.basis);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * rhs.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn scale(&self, f: Complex64) -> Self {
        let mut out = self.clone();
        for e in &mut out.entries {
            *e *= f;
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest |M_ij - conj(M_ji)| over all entries.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..self.dim {
            for j in i..self.dim {
                dev = dev.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        dev
    }
}

/// Relative Hermiticity tolerance enforced by the eigensolver.
pub const HERMITICITY_RTOL: f64 = 1e-12;
/// Sweep budget for the cyclic Jacobi iteration.
const MAX_SWEEPS: usize = 100;
/// Off-diagonal Frobenius norm threshold, relative to ||M||_F.
const OFF_DIAG_RTOL: f64 = 1e-13;

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
///
/// `vectors` holds the eigenvectors as columns; column `k` pairs with
/// `values[k]`, so `M = V diag(values) V^dag`.
#[derive(Clone, Debug)]
pub struct HermitianEigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigenSystem {
    /// Reassemble V diag(f(lambda)) V^dag.
    pub fn assemble(&self, mut f: impl FnMut(f64) -> Complex64) -> ComplexMatrix {
        let n = self.values.len();
        let phases: Vec<Complex64> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, self.vectors.basis(), |i, j| {
            (0..n)
                .map(|k| self.vectors.get(i, k) * phases[k] * self.vectors.get(j, k).conj())
                .sum()
        })
    }

    /// Eigenvector for column `k`.
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.values.len())
            .map(|i| self.vectors.get(i, k))
            .collect()
    }
}

/// Diagonalize a Hermitian matrix with cyclic complex Jacobi rotations.
///
/// Fails with [`Error::NonHermitianInput`] when the symmetry check misses
/// the 1e-12 relative tolerance, and with [`Error::NoConvergence`] if the
/// off-diagonal norm is still above threshold after the sweep budget.
pub fn hermitian_eigensystem(m: &ComplexMatrix) -> Result<HermitianEigenSystem> {
    let n = m.dim();
    let scale = m.max_abs();
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_RTOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NonHermitianInput {
            deviation: dev,
            tolerance: HERMITICITY_RTOL * scale,
        });
    }

    // Work on an exactly Hermitian copy so rounding in the input cannot leak
    // imaginary parts onto the diagonal.
    let mut h = ComplexMatrix::from_fn(n, m.basis(), |i, j| {
        if i == j {
            Complex64::new(m.get(i, i).re, 0.0)
        } else {
            (m.get(i, j) + m.get(j, i).conj()) * 0.5
        }
    });
    let mut v = ComplexMatrix::identity(n, m.basis());
    let threshold = OFF_DIAG_RTOL * m.frobenius_norm();

    let off_diag_norm = |h: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += 2.0 * h.get(p, q).norm_sqr();
            }
        }
        s.sqrt()
    };

    let mut off = off_diag_norm(&h);
    let mut sweeps = 0;
    while off > threshold {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diag: off,
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let hpq = h.get(p, q);
                let r = hpq.norm();
                if r == 0.0 {
                    continue;
                }
                let u = hpq / r;
                let alpha = h.get(p, p).re;
                let beta = h.get(q, q).re;
                // Zero h_pq: rotation angle from t^2 - 2*theta*t - 1 = 0,
                // keeping the root of smaller magnitude.
                let theta = (beta - alpha) / (2.0 * r);
                let t = if theta >= 0.0 {
                    -1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let su = u * s;
                for j in 0..n {
                    if j == p || j == q {
                        continue;
                    }
                    let hjp = h.get(j, p);
                    let hjq = h.get(j, q);
                    let np = hjp * c + hjq * su.conj();
                    let nq = -hjp * su + hjq * c;
                    h.set(j, p, np);
                    h.set(j, q, nq);
                    h.set(p, j, np.conj());
                    h.set(q, j, nq.conj());
                }
                let new_pp = alpha * c * c + 2.0 * r * s * c + beta * s * s;
                h.set(p, p, Complex64::new(new_pp, 0.0));
                h.set(q, q, Complex64::new(alpha + beta - new_pp, 0.0));
                h.set(p, q, Complex64::new(0.0, 0.0));
                h.set(q, p, Complex64::new(0.0, 0.0));

                for j in 0..n {
                    let vjp = v.get(j, p);
                    let vjq = v.get(j, q);
                    v.set(j, p, vjp * c + vjq * su.conj());
                    v.set(j, q, -vjp * su + vjq * c);
                }
            }
        }
        sweeps += 1;
        off = off_diag_norm(&h);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| h.get(a, a).re.partial_cmp(&h.get(b, b).re).unwrap());
    let values: Vec<f64> = order.iter().map(|&k| h.get(k, k).re).collect();
    let vectors = ComplexMatrix::from_fn(n, m.basis(), |i, j| v.get(i, order[j]));

    Ok(HermitianEigenSystem { values, vectors })
}

/// V diag(exp(i * scale * lambda)) V^dag for Hermitian `m`.
///
/// The propagator exp(-i H t) is `hermitian_expm(h, -t)`.
pub fn hermitian_expm(m: &ComplexMatrix, scale: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eigensystem(m)?;
    Ok(eig.assemble(|l| Complex64::from_polar(1.0, scale * l)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n, BasisTag("test"));
        for i in 0..n {
            m.set(i, i, Complex64::new(rng.gen_range(-2.0..2.0), 0.0));
            for j in (i + 1)..n {
                let z = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        m
    }

    /// det(M - x I) via complex LU with partial pivoting; real for Hermitian M.
    #[allow(clippy::needless_range_loop)] // two rows of `a` borrowed per step
    fn char_poly(m: &ComplexMatrix, x: f64) -> f64 {
        let n = m.dim();
        let mut a: Vec<Vec<Complex64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        m.get(i, j)
                            - if i == j {
                                Complex64::new(x, 0.0)
                            } else {
                                Complex64::new(0.0, 0.0)
                            }
                    })
                    .collect()
            })
            .collect();
        let mut det = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let piv = (k..n)
                .max_by(|&i, &j| a[i][k].norm().partial_cmp(&a[j][k].norm()).unwrap())
                .unwrap();
            if a[piv][k].norm() == 0.0 {
                return 0.0;
            }
            if piv != k {
                a.swap(piv, k);
                det = -det;
            }
            det *= a[k][k];
            for i in (k + 1)..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    let sub = f * a[k][j];
                    a[i][j] -= sub;
                }
            }
        }
        det.re
    }

    /// Roots of the characteristic polynomial by bracketing + bisection.
    fn eigenvalues_by_bisection(m: &ComplexMatrix) -> Vec<f64> {
        let n = m.dim();
        // Gershgorin bounds
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let radius: f64 = (0..n).filter(|&j| j != i).map(|j| m.get(i, j).norm()).sum();
            lo = lo.min(m.get(i, i).re - radius);
            hi = hi.max(m.get(i, i).re + radius);
        }
        let samples = 20_000;
        let mut roots = Vec::new();
        let mut x0 = lo;
        let mut f0 = char_poly(m, x0);
        for k in 1..=samples {
            let x1 = lo + (hi - lo) * k as f64 / samples as f64;
            let f1 = char_poly(m, x1);
            if f0 == 0.0 {
                roots.push(x0);
            } else if f0.signum() != f1.signum() {
                let (mut a, mut b, mut fa) = (x0, x1, f0);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    let fm = char_poly(m, mid);
                    if fm == 0.0 || (b - a) < 1e-12 {
                        a = mid;
                        b = mid;
                        break;
                    }
                    if fa.signum() != fm.signum() {
                        b = mid;
                    } else {
                        a = mid;
                        fa = fm;
                    }
                }
                roots.push(0.5 * (a + b));
            }
            x0 = x1;
            f0 = f1;
        }
        roots
    }

    #[test]
    fn identity_eigensystem() {
        let m = ComplexMatrix::identity(2, BasisTag("test"));
        let eig = hermitian_eigensystem(&m).unwrap();
        assert!((eig.values[0] - 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        // any orthonormal pair is fine
        let dot: Complex64 = (0..2)
            .map(|i| eig.vectors.get(i, 0).conj() * eig.vectors.get(i, 1))
            .sum();
        assert!(dot.norm() < 1e-12);
    }

    #[test]
    fn interaction_matrix_spectrum() {
        // Omega = sqrt(15), 2*a_mn = 2: eigenvalues are {-5, -3, 3, 5}
        let om = 15.0_f64.sqrt();
        let mut m = ComplexMatrix::zeros(4, BasisTag("test"));
        for (i, j, v) in [(0, 1, om), (1, 2, 2.0), (2, 3, om)] {
            m.set(i, j, Complex64::new(v, 0.0));
            m.set(j, i, Complex64::new(v, 0.0));
        }
        let eig = hermitian_eigensystem(&m).unwrap();
        for (got, want) in eig.values.iter().zip([-5.0, -3.0, 3.0, 5.0]) {
            assert!((got - want).abs() < 1e-10, "got {got}, want {want}");
        }
    }

    #[test]
    fn random_matrix_matches_char_poly_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let m = random_hermitian(4, &mut rng);
        let eig = hermitian_eigensystem(&m).unwrap();
        let roots = eigenvalues_by_bisection(&m);
        assert_eq!(roots.len(), 4, "oracle should bracket 4 simple roots");
        for (got, want) in eig.values.iter().zip(roots) {
            assert!((got - want).abs() < 1e-8, "got {got}, oracle {want}");
        }
    }

    #[test]
    fn eigenvectors_satisfy_residual_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [2usize, 4, 8, 16] {
            let m = random_hermitian(n, &mut rng);
            let eig = hermitian_eigensystem(&m).unwrap();
            let norm = m.frobenius_norm();
            for k in 0..n {
                let v = eig.vector(k);
                let mv = m.apply(&v);
                let res = mv
                    .iter()
                    .zip(&v)
                    .map(|(a, b)| (a - b * eig.values[k]).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(
                    res <= 1e-10 * norm.max(1.0),
                    "residual {res} at n={n}, k={k}"
                );
            }
            for a in 0..n {
                for b in 0..n {
                    let dot: Complex64 = (0..n)
                        .map(|i| eig.vectors.get(i, a).conj() * eig.vectors.get(i, b))
                        .sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((dot.norm() - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = ComplexMatrix::zeros(2, BasisTag("test"));
        m.set(0, 1, Complex64::new(1.0, 0.0));
        m.set(1, 0, Complex64::new(0.5, 0.0));
        assert!(matches!(
            hermitian_eigensystem(&m),
            Err(Error::NonHermitianInput { .. })
        ));
    }

    #[test]
    fn expm_zero_is_identity() {
        let m = ComplexMatrix::zeros(3, BasisTag("test"));
        let u = hermitian_expm(&m, 1.7).unwrap();
        assert!(u.max_abs_diff(&ComplexMatrix::identity(3, BasisTag("test"))) < 1e-14);
    }

    #[test]
    fn expm_diagonal_case() {
        let mut m = ComplexMatrix::zeros(2, BasisTag("test"));
        m.set(0, 0, Complex64::new(1.0, 0.0));
        m.set(1, 1, Complex64::new(-1.0, 0.0));
        let u = hermitian_expm(&m, std::f64::consts::PI).unwrap();
        let minus_one =
            ComplexMatrix::identity(2, BasisTag("test")).scale(Complex64::new(-1.0, 0.0));
        assert!(u.max_abs_diff(&minus_one) < 1e-12);
    }

    #[test]
    fn expm_matches_taylor_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = random_hermitian(4, &mut rng);
        let t = 0.5 / m.frobenius_norm(); // ||tM||_F = 0.5
        let u = hermitian_expm(&m, t).unwrap();
        // 20-term Taylor series of exp(i t M)
        let mut term = ComplexMatrix::identity(4, BasisTag("test"));
        let mut sum = term.clone();
        let itm = m.scale(Complex64::new(0.0, t));
        for k in 1..=20 {
            term = term.mul(&itm).scale(Complex64::new(1.0 / k as f64, 0.0));
            for i in 0..4 {
                for j in 0..4 {
                    let v = sum.get(i, j) + term.get(i, j);
                    sum.set(i, j, v);
                }
            }
        }
        assert!(u.max_abs_diff(&sum) < 1e-10);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn prop_expm_unitary(seed in 0u64..1000, scale in -3.0f64..3.0, n in 2usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_hermitian(n, &mut rng);
            let u = hermitian_expm(&m, scale).unwrap();
            let gram = u.adjoint().mul(&u);
            let id = ComplexMatrix::identity(n, BasisTag("test"));
            prop_assert!(gram.max_abs_diff(&id) <= 1e-10);
        }

        #[test]
        fn prop_spectrum_invariance_and_trace(seed in 0u64..1000, n in 2usize..9) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let m = random_hermitian(n, &mut rng);
            let eig = hermitian_eigensystem(&m).unwrap();
            // reconstruct and re-diagonalize
            let rebuilt = eig.assemble(|l| Complex64::new(l, 0.0));
            prop_assert!(rebuilt.max_abs_diff(&m) <= 1e-10 * m.frobenius_norm().max(1.0));
            let eig2 = hermitian_eigensystem(&rebuilt).unwrap();
            for (a, b) in eig.values.iter().zip(&eig2.values) {
                prop_assert!((a - b).abs() <= 1e-10 * m.frobenius_norm().max(1.0));
            }
            let tr = m.trace().re;
            let sum: f64 = eig.values.iter().sum();
            prop_assert!((tr - sum).abs() <= 1e-10 * m.frobenius_norm().max(1.0));
        }
    }
}
