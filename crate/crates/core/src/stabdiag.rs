//! Stabilizer-diagonal states.
//!
//! A stabilizer-diagonal state is `ρ = 2^{-n} Σ_i c[i] S_i` where `S_i` runs
//! over the stabilizer group. Its eigenvalues are the Walsh–Hadamard
//! transform of the coefficients:
//! `λ[j] = 2^{-n} Σ_i (-1)^{popcount(i & j)} c[i]`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::stabilizer::{check_dense_cap, stabilizer_group, DenseMatrix, DEFAULT_DENSE_CAP};

/// Spectrum entries below `-ENTROPY_CLAMP_FLOOR` are rejected by [`entropy`];
/// entries between it and zero are treated as zero.
pub const ENTROPY_CLAMP_FLOOR: f64 = 1e-9;

/// Allowed deviation of `tr ρ` from one in [`twirl`].
pub const TRACE_TOLERANCE: f64 = 1e-9;

fn log2_len(len: usize, what: &str) -> Result<usize> {
    if len == 0 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "{what} length {len} is not a power of two"
        )));
    }
    Ok(len.trailing_zeros() as usize)
}

/// Stabilizer-basis coefficients `c[i]`, with `c[0] = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffVector {
    n: usize,
    c: Vec<f64>,
}

impl CoeffVector {
    /// Requires a power-of-two length and `c[0] = 1` (within `1e-12`).
    pub fn new(c: Vec<f64>) -> Result<Self> {
        let n = log2_len(c.len(), "coefficient vector")?;
        if (c[0] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "coefficient c[0] = {} must be 1",
                c[0]
            )));
        }
        Ok(Self { n, c })
    }

    /// The maximally mixed state `(1, 0, …, 0)`.
    pub fn maximally_mixed(n: usize) -> Self {
        let mut c = vec![0.0; 1 << n];
        c[0] = 1.0;
        Self { n, c }
    }

    /// The pure graph state: all coefficients one.
    pub fn pure(n: usize) -> Self {
        Self {
            n,
            c: vec![1.0; 1 << n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.c
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.c
    }

    /// Generator expectations `a_k = c[1 << k]`.
    pub fn generator_expectations(&self) -> Vec<f64> {
        (0..self.n).map(|k| self.c[1 << k]).collect()
    }

    /// True if every `|c[i]| <= 1 + tol`; necessary (not sufficient) for a
    /// physical state.
    pub fn is_bounded(&self, tol: f64) -> bool {
        self.c.iter().all(|v| v.abs() <= 1.0 + tol)
    }
}

/// Eigenvalues `λ[j]` of a stabilizer-diagonal state, indexed by eigenvector
/// bit string.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    n: usize,
    lambda: Vec<f64>,
}

impl Spectrum {
    pub fn new(lambda: Vec<f64>) -> Result<Self> {
        let n = log2_len(lambda.len(), "spectrum")?;
        Ok(Self { n, lambda })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.lambda
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.lambda
    }

    pub fn total(&self) -> f64 {
        self.lambda.iter().sum()
    }

    pub fn is_physical(&self, tol: f64) -> bool {
        self.lambda.iter().all(|&v| v >= -tol)
    }

    /// `Σ λ²`, equal to the purity.
    pub fn sum_of_squares(&self) -> f64 {
        self.lambda.iter().map(|v| v * v).sum()
    }
}

/// Unnormalized fast Walsh–Hadamard transform, in place, `O(n 2^n)`.
///
/// After the call `buf[j] = Σ_i (-1)^{popcount(i & j)} buf_old[i]`.
///
/// # Panics
/// If the length is not a power of two.
pub fn walsh_hadamard_in_place(buf: &mut [f64]) {
    let len = buf.len();
    assert!(len.is_power_of_two(), "length {len} is not a power of two");
    let mut half = 1;
    while half < len {
        for block in buf.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (s, d) = (*a + *b, *a - *b);
                *a = s;
                *b = d;
            }
        }
        half *= 2;
    }
}

pub fn eigenvalues(c: &CoeffVector) -> Spectrum {
    let mut lambda = c.c.clone();
    walsh_hadamard_in_place(&mut lambda);
    let scale = 1.0 / lambda.len() as f64;
    lambda.iter_mut().for_each(|v| *v *= scale);
    Spectrum { n: c.n, lambda }
}

/// Inverse of [`eigenvalues`]. Fails only if the spectrum does not sum to one
/// (within `1e-12`), since `c[0] = Σ λ`.
pub fn coefficients(s: &Spectrum) -> Result<CoeffVector> {
    let mut c = s.lambda.clone();
    walsh_hadamard_in_place(&mut c);
    CoeffVector::new(c)
}

/// `tr ρ² = 2^{-n} Σ c[i]²`.
pub fn purity(c: &CoeffVector) -> f64 {
    c.c.iter().map(|v| v * v).sum::<f64>() / c.c.len() as f64
}

/// `-x ln x` with the `0 ln 0 = 0` convention.
pub(crate) fn xlogx_neg(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.ln()
    } else {
        0.0
    }
}

/// Von Neumann entropy (natural log) of a spectrum. Entries in
/// `[-1e-9, 0)` are clamped to zero.
pub fn entropy(s: &Spectrum) -> Result<f64> {
    if let Some((index, &value)) = s
        .lambda
        .iter()
        .enumerate()
        .find(|(_, &v)| v < -ENTROPY_CLAMP_FLOOR)
    {
        return Err(Error::NonPhysicalSpectrum { index, value });
    }
    Ok(s.lambda.iter().map(|&v| xlogx_neg(v)).sum())
}

fn check_square(rho: &DenseMatrix, n: usize) -> Result<()> {
    let dim = 1usize << n;
    if rho.nrows() != dim || rho.ncols() != dim {
        return Err(Error::InvalidArgument(format!(
            "matrix is {}x{}, expected {dim}x{dim}",
            rho.nrows(),
            rho.ncols()
        )));
    }
    Ok(())
}

/// Projects a dense state onto stabilizer-diagonal form by reading
/// `c[i] = tr(ρ S_i)`.
pub fn twirl(rho: &DenseMatrix, graph: &GraphSpec) -> Result<CoeffVector> {
    let n = graph.n();
    check_dense_cap(n, DEFAULT_DENSE_CAP)?;
    check_square(rho, n)?;
    let trace = rho.trace().re;
    if (trace - 1.0).abs() > TRACE_TOLERANCE {
        return Err(Error::NonUnitTrace { trace });
    }
    let dim = 1usize << n;
    let c = stabilizer_group(graph)?
        .iter()
        .map(|s| {
            // tr(ρ S) = Σ_b ρ[b, row(b)] · S[row(b), b]
            let mut acc = Complex64::new(0.0, 0.0);
            for b in 0..dim {
                let (row, coeff) = s.apply_to_basis(b);
                acc += rho[(b, row)] * coeff;
            }
            acc.re / trace
        })
        .collect();
    CoeffVector::new(c)
}

/// Literal group average `2^{-n} Σ_i S_i ρ S_i`. Quadratic in `2^n` per
/// element; meant for cross-checking [`twirl`].
pub fn twirl_group_average(rho: &DenseMatrix, graph: &GraphSpec) -> Result<DenseMatrix> {
    let n = graph.n();
    check_dense_cap(n, DEFAULT_DENSE_CAP)?;
    check_square(rho, n)?;
    let dim = 1usize << n;
    let mut out = DenseMatrix::zeros(dim, dim);
    for s in stabilizer_group(graph)? {
        // (S ρ S)[r1, r2] = S[r1, b1] ρ[b1, b2] S[b2, r2]; S is Hermitian so
        // S[b2, r2] = conj(S[r2, b2]).
        let action: Vec<_> = (0..dim).map(|b| s.apply_to_basis(b)).collect();
        for b1 in 0..dim {
            let (r1, k1) = action[b1];
            for b2 in 0..dim {
                let (r2, k2) = action[b2];
                out[(r1, r2)] += k1 * rho[(b1, b2)] * k2.conj();
            }
        }
    }
    Ok(out / Complex64::new(dim as f64, 0.0))
}

/// `ρ = 2^{-n} Σ_i c[i] S_i` as a dense matrix.
pub fn assemble_dense(c: &CoeffVector, graph: &GraphSpec) -> Result<DenseMatrix> {
    let n = graph.n();
    check_dense_cap(n, DEFAULT_DENSE_CAP)?;
    if c.n != n {
        return Err(Error::InvalidArgument(format!(
            "coefficient vector has {} qubits, graph has {n}",
            c.n
        )));
    }
    let dim = 1usize << n;
    let mut rho = DenseMatrix::zeros(dim, dim);
    for (s, &ci) in stabilizer_group(graph)?.iter().zip(&c.c) {
        if ci == 0.0 {
            continue;
        }
        for col in 0..dim {
            let (row, coeff) = s.apply_to_basis(col);
            rho[(row, col)] += coeff * ci;
        }
    }
    Ok(rho / Complex64::new(dim as f64, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn slices_close(a: &[f64], b: &[f64], tol: f64) {
        assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(b) {
            assert_abs_diff_eq!(x, y, epsilon = tol);
        }
    }

    #[test]
    fn transform_matches_naive_sum() {
        let input: Vec<f64> = (0..16).map(|i| (i as f64 * 0.37).sin()).collect();
        let mut fast = input.clone();
        walsh_hadamard_in_place(&mut fast);
        for (j, v) in fast.iter().enumerate() {
            let naive: f64 = input
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    if (i & j).count_ones() % 2 == 0 {
                        *c
                    } else {
                        -c
                    }
                })
                .sum();
            assert_abs_diff_eq!(*v, naive, epsilon = 1e-12);
        }
    }

    #[test]
    fn eigenvalue_examples() {
        for n in 1..=5 {
            let s = eigenvalues(&CoeffVector::maximally_mixed(n));
            assert!(s
                .as_slice()
                .iter()
                .all(|&v| (v - 1.0 / (1 << n) as f64).abs() < 1e-15));
            let s = eigenvalues(&CoeffVector::pure(n));
            assert_eq!(s.as_slice()[0], 1.0);
            assert!(s.as_slice()[1..].iter().all(|&v| v == 0.0));
        }
        let (a1, a2) = (0.9, 0.7);
        let c = CoeffVector::new(vec![1.0, a1, a2, a1 + a2 - 1.0]).unwrap();
        slices_close(
            eigenvalues(&c).as_slice(),
            &[(a1 + a2) / 2.0, (1.0 - a1) / 2.0, (1.0 - a2) / 2.0, 0.0],
            1e-15,
        );
    }

    #[test]
    fn coefficient_examples() {
        let s = Spectrum::new(vec![0.25; 4]).unwrap();
        slices_close(
            coefficients(&s).unwrap().as_slice(),
            &[1.0, 0.0, 0.0, 0.0],
            0.0,
        );
        let s = Spectrum::new(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        slices_close(coefficients(&s).unwrap().as_slice(), &[1.0; 8], 0.0);
        assert!(coefficients(&Spectrum::new(vec![0.5, 0.1]).unwrap()).is_err());
    }

    #[test]
    fn purity_examples() {
        assert_eq!(purity(&CoeffVector::pure(3)), 1.0);
        assert_eq!(purity(&CoeffVector::maximally_mixed(3)), 0.125);
        let a = (-0.1f64).exp();
        let c = CoeffVector::new(vec![1.0, a, a, 2.0 * a - 1.0]).unwrap();
        assert_eq!(format!("{:.4}", purity(&c)), "0.8233");
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(
            entropy(&Spectrum::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap()).unwrap(),
            0.0
        );
        let uniform = entropy(&Spectrum::new(vec![0.25; 4]).unwrap()).unwrap();
        assert_abs_diff_eq!(uniform, 2.0 * 2f64.ln(), epsilon = 1e-15);
        let s = Spectrum::new(vec![0.904837, 0.047581, 0.047581, 0.0]).unwrap();
        assert_eq!(format!("{:.4}", entropy(&s).unwrap()), "0.3803");
    }

    #[test]
    fn entropy_clamps_and_rejects() {
        let s = Spectrum::new(vec![1.0 + 5e-10, -5e-10]).unwrap();
        assert!(entropy(&s).unwrap().abs() < 1e-8);
        let bad = Spectrum::new(vec![1.1, -0.1]).unwrap();
        assert!(matches!(
            entropy(&bad),
            Err(Error::NonPhysicalSpectrum { index: 1, .. })
        ));
    }

    #[test]
    fn twirl_and_assemble_examples() {
        let g = GraphSpec::path(2).unwrap();
        let mixed = DenseMatrix::identity(4, 4) / Complex64::new(4.0, 0.0);
        slices_close(
            twirl(&mixed, &g).unwrap().as_slice(),
            &[1.0, 0.0, 0.0, 0.0],
            1e-15,
        );
        let rho = assemble_dense(&CoeffVector::maximally_mixed(2), &g).unwrap();
        assert!((rho - mixed).norm() < 1e-15);

        let proj = assemble_dense(&CoeffVector::pure(2), &g).unwrap();
        assert!((&proj * &proj - &proj).norm() < 1e-14);
        assert!((proj.trace().re - 1.0).abs() < 1e-15);
        slices_close(twirl(&proj, &g).unwrap().as_slice(), &[1.0; 4], 1e-15);
    }

    #[test]
    fn twirl_errors() {
        let g = GraphSpec::path(2).unwrap();
        let doubled = DenseMatrix::identity(4, 4) / Complex64::new(2.0, 0.0);
        assert!(matches!(
            twirl(&doubled, &g),
            Err(Error::NonUnitTrace { .. })
        ));
        let wrong = DenseMatrix::identity(2, 2);
        assert!(matches!(twirl(&wrong, &g), Err(Error::InvalidArgument(_))));
        let big = GraphSpec::path(11).unwrap();
        assert!(matches!(
            assemble_dense(&CoeffVector::pure(11), &big),
            Err(Error::DenseCapExceeded { .. })
        ));
    }
}
