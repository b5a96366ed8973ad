//! Finite-dimensional operator checks: any two functions of one Hermitian
//! matrix commute with each other, while truncated position and momentum
//! do not.
//!
//! Scalar functions are applied through the full eigendecomposition
//! (spectral calculus, f(S) = V f(L) V*); the matrices here are small, so
//! exactness wins over performance. Position and momentum live in an
//! n-level number-basis truncation, in units where their commutator targets
//! i times the identity. Truncation necessarily deforms that target at the
//! top level: the diagonal of [Z, P]/i is 1 everywhere except the last
//! entry, which is 1 - n. The profile report exposes the deformation rather
//! than hiding it — the non-commutation witness is the norm staying far
//! from zero, which the deformation only strengthens.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use std::fmt;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest allowed |m[i][j] - conj(m[j][i])| for a matrix to count as
/// Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

// ---------------------------------------------------------------------------
// HermitianMatrix
// ---------------------------------------------------------------------------

/// A square complex matrix validated to be conjugate-symmetric within
/// [`HERMITIAN_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: CMatrix,
}

impl HermitianMatrix {
    pub fn try_new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                left: m.nrows(),
                right: m.ncols(),
            });
        }
        let mut max_asymmetry = 0.0_f64;
        for i in 0..m.nrows() {
            for j in 0..=i {
                let asym = (m[(i, j)] - m[(j, i)].conj()).norm();
                max_asymmetry = max_asymmetry.max(asym);
            }
        }
        if max_asymmetry > HERMITIAN_TOL {
            return Err(Error::NotHermitian { max_asymmetry });
        }
        Ok(HermitianMatrix { inner: m })
    }

    /// A seeded random Hermitian matrix: (B + B*)/2 with entries of B drawn
    /// uniformly from the unit square of the complex plane.
    pub fn random(dim: usize, seed: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let b = CMatrix::from_fn(dim, dim, |_, _| {
            Complex64::new(
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            )
        });
        let h = (&b + b.adjoint()) * Complex64::new(0.5, 0.0);
        HermitianMatrix { inner: h }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let inner = CMatrix::from_fn(n, n, |i, j| {
            if i == j {
                Complex64::new(diag[i], 0.0)
            } else {
                Complex64::default()
            }
        });
        HermitianMatrix { inner }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianMatrix {
            inner: CMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> CMatrix {
        self.inner
    }
}

// ---------------------------------------------------------------------------
// ScalarFunction
// ---------------------------------------------------------------------------

/// A real scalar function applied to eigenvalues under spectral calculus.
///
/// Must be total on the spectrum of the matrix it is applied to (sqrt, for
/// instance, requires a nonnegative spectrum).
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarFunction {
    /// Coefficients in ascending degree: c0 + c1 x + c2 x^2 + ...
    Polynomial(Vec<f64>),
    Exp,
    Sin,
    Sqrt,
}

impl ScalarFunction {
    pub fn identity() -> Self {
        ScalarFunction::Polynomial(vec![0.0, 1.0])
    }

    pub fn square() -> Self {
        ScalarFunction::Polynomial(vec![0.0, 0.0, 1.0])
    }

    pub fn cube() -> Self {
        ScalarFunction::Polynomial(vec![0.0, 0.0, 0.0, 1.0])
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            ScalarFunction::Polynomial(coeffs) => {
                coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
            }
            ScalarFunction::Exp => x.exp(),
            ScalarFunction::Sin => x.sin(),
            ScalarFunction::Sqrt => x.sqrt(),
        }
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFunction::Polynomial(c) => {
                let terms: Vec<String> = c.iter().map(|x| format!("{x}")).collect();
                write!(f, "poly({})", terms.join(", "))
            }
            ScalarFunction::Exp => f.write_str("exp"),
            ScalarFunction::Sin => f.write_str("sin"),
            ScalarFunction::Sqrt => f.write_str("sqrt"),
        }
    }
}

// ---------------------------------------------------------------------------
// Spectral calculus and commutators
// ---------------------------------------------------------------------------

/// f(S) = V f(L) V* via full eigendecomposition. The reconstruction is
/// symmetrized, so the output satisfies the Hermitian invariant exactly.
pub fn apply_function(s: &HermitianMatrix, f: &ScalarFunction) -> HermitianMatrix {
    let eig = s.matrix().clone().symmetric_eigen();
    let mapped = DMatrix::from_diagonal(&eig.eigenvalues.map(|x| Complex64::new(f.eval(x), 0.0)));
    let rec = &eig.eigenvectors * mapped * eig.eigenvectors.adjoint();
    let sym = (&rec + rec.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianMatrix { inner: sym }
}

/// AB - BA for square matrices of equal dimension.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: a.ncols(),
        });
    }
    if a.nrows() != b.nrows() || !b.is_square() {
        return Err(Error::DimensionMismatch {
            left: a.nrows(),
            right: b.nrows(),
        });
    }
    Ok(a * b - b * a)
}

/// Frobenius norm of [c(S), d(S)]; zero up to eigendecomposition round-off,
/// for any Hermitian S and any two functions of it.
pub fn lemma_check(s: &HermitianMatrix, c: &ScalarFunction, d: &ScalarFunction) -> f64 {
    let cs = apply_function(s, c);
    let ds = apply_function(s, d);
    commutator(cs.matrix(), ds.matrix())
        .expect("same dimension by construction")
        .norm()
}

// ---------------------------------------------------------------------------
// Truncated position and momentum
// ---------------------------------------------------------------------------

/// Position (a + a*)/sqrt(2) and momentum i(a* - a)/sqrt(2) in an n-level
/// number-basis truncation, where a is the lowering ladder with entries
/// a[k, k+1] = sqrt(k + 1).
pub fn truncated_position_momentum(n: usize) -> Result<(HermitianMatrix, HermitianMatrix)> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { dim: n, min: 2 });
    }
    let lower = CMatrix::from_fn(n, n, |i, j| {
        if j == i + 1 {
            Complex64::new((j as f64).sqrt(), 0.0)
        } else {
            Complex64::default()
        }
    });
    let raise = lower.adjoint();
    let inv_sqrt2 = Complex64::new(1.0 / 2.0_f64.sqrt(), 0.0);
    let z = (&lower + &raise) * inv_sqrt2;
    let p = (&raise - &lower) * Complex64::new(0.0, 1.0) * inv_sqrt2;
    Ok((HermitianMatrix { inner: z }, HermitianMatrix { inner: p }))
}

/// Diagonal and residue profile of [Z, P]/i at dimension n.
#[derive(Debug, Clone, Serialize)]
pub struct CommutatorProfile {
    pub dim: usize,
    /// Real parts of the diagonal of [Z, P]/i. Expected: 1 everywhere
    /// except the last entry, which is 1 - n (the truncation artifact).
    pub diagonal: Vec<f64>,
    /// Largest imaginary residue on the diagonal.
    pub max_diag_imag: f64,
    /// Largest magnitude off the diagonal.
    pub max_offdiag: f64,
    /// |trace|; the trace of any commutator vanishes.
    pub trace_norm: f64,
    /// Frobenius norm of [Z, P]/i; at least sqrt(n - 1), so bounded away
    /// from zero for every n >= 2.
    pub frobenius_norm: f64,
}

pub fn zp_commutator_profile(n: usize) -> Result<CommutatorProfile> {
    let (z, p) = truncated_position_momentum(n)?;
    let comm = commutator(z.matrix(), p.matrix())?;
    let c = comm * Complex64::new(0.0, -1.0); // divide by i
    let mut diagonal = Vec::with_capacity(n);
    let mut max_diag_imag = 0.0_f64;
    let mut max_offdiag = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                diagonal.push(c[(i, i)].re);
                max_diag_imag = max_diag_imag.max(c[(i, i)].im.abs());
            } else {
                max_offdiag = max_offdiag.max(c[(i, j)].norm());
            }
        }
    }
    Ok(CommutatorProfile {
        dim: n,
        diagonal,
        max_diag_imag,
        max_offdiag,
        trace_norm: c.trace().norm(),
        frobenius_norm: c.norm(),
    })
}
