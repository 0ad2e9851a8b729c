//! Graph-state stabilizer generators, group elements and their dense
//! realization.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::GraphSpec;
use crate::pauli::{PauliString, Phase};

/// Complex dense matrix in the computational basis.
pub type DenseMatrix = DMatrix<Complex64>;

/// Largest qubit count for which dense `2^n × 2^n` matrices (and full `2^n`
/// coefficient vectors) are materialized.
pub const DEFAULT_DENSE_CAP: usize = 10;

/// Largest qubit count for which the full group is enumerated.
pub const MAX_GROUP_QUBITS: usize = 20;

pub(crate) fn check_dense_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::DenseCapExceeded { n, cap })
    } else {
        Ok(())
    }
}

/// `K_j = X_j Z_{N(j)}` for every vertex `j`.
pub fn generators(graph: &GraphSpec) -> Vec<PauliString> {
    let n = graph.n();
    (0..n)
        .map(|j| PauliString::new(n, 1 << j, graph.neighbor_mask(j), Phase::PlusOne))
        .collect()
}

/// `∏_j K_j^{i_j}` where bit `j` of `index` is `i_j`.
pub fn stabilizer_element(graph: &GraphSpec, index: usize) -> PauliString {
    let n = graph.n();
    assert!(
        n >= usize::BITS as usize || index >> n == 0,
        "index has more than {n} bits"
    );
    (0..n)
        .filter(|&j| index >> j & 1 == 1)
        .fold(PauliString::identity(n), |acc, j| {
            acc * PauliString::new(n, 1 << j, graph.neighbor_mask(j), Phase::PlusOne)
        })
}

/// All `2^n` stabilizer group elements, indexed by generator bit string.
///
/// Built incrementally: element `i` is element `i & (i - 1)` times the
/// generator of the lowest set bit.
pub fn stabilizer_group(graph: &GraphSpec) -> Result<Vec<PauliString>> {
    let n = graph.n();
    check_dense_cap(n, MAX_GROUP_QUBITS)?;
    let gens = generators(graph);
    let mut group = Vec::with_capacity(1 << n);
    group.push(PauliString::identity(n));
    for i in 1usize..1 << n {
        let low = i.trailing_zeros() as usize;
        group.push(group[i & (i - 1)] * gens[low]);
    }
    Ok(group)
}

pub fn dense_matrix(p: &PauliString) -> Result<DenseMatrix> {
    dense_matrix_with_cap(p, DEFAULT_DENSE_CAP)
}

pub fn dense_matrix_with_cap(p: &PauliString, cap: usize) -> Result<DenseMatrix> {
    check_dense_cap(p.n(), cap)?;
    let dim = 1usize << p.n();
    let mut m = DenseMatrix::zeros(dim, dim);
    for col in 0..dim {
        let (row, coeff) = p.apply_to_basis(col);
        m[(row, col)] = coeff;
    }
    Ok(m)
}

/// Amplitudes of the graph state `Π_{(u,v)} CZ_{uv} |+>^n`: basis state `x`
/// has amplitude `(-1)^{e(x)} / 2^{n/2}` where `e(x)` counts edges inside `x`.
pub fn graph_state_vector(graph: &GraphSpec) -> Result<Vec<f64>> {
    let n = graph.n();
    check_dense_cap(n, MAX_GROUP_QUBITS)?;
    let norm = (-(n as f64) / 2.0).exp2();
    Ok((0usize..1 << n)
        .map(|x| {
            let inside = graph
                .edges()
                .iter()
                .filter(|&&(u, v)| x >> u & 1 == 1 && x >> v & 1 == 1)
                .count();
            if inside % 2 == 0 {
                norm
            } else {
                -norm
            }
        })
        .collect())
}

/// `|G><G|` as a dense matrix.
pub fn graph_state_projector(graph: &GraphSpec) -> Result<DenseMatrix> {
    check_dense_cap(graph.n(), DEFAULT_DENSE_CAP)?;
    let psi = graph_state_vector(graph)?;
    let dim = psi.len();
    Ok(DenseMatrix::from_fn(dim, dim, |r, c| {
        Complex64::new(psi[r] * psi[c], 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_examples() {
        let names = |g: &GraphSpec| {
            generators(g)
                .iter()
                .map(|p| p.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(names(&GraphSpec::path(2).unwrap()), ["+XZ", "+ZX"]);
        assert_eq!(names(&GraphSpec::path(1).unwrap()), ["+X"]);
        assert_eq!(
            names(&GraphSpec::path(3).unwrap()),
            ["+XZI", "+ZXZ", "+IZX"]
        );
    }

    #[test]
    fn element_examples() {
        let g2 = GraphSpec::path(2).unwrap();
        assert_eq!(stabilizer_element(&g2, 0b11).to_string(), "+YY");
        assert!(stabilizer_element(&g2, 0).is_identity());
        assert_eq!(stabilizer_element(&g2, 0).phase(), Phase::PlusOne);
        let g1 = GraphSpec::path(1).unwrap();
        assert_eq!(stabilizer_element(&g1, 1).to_string(), "+X");
    }

    #[test]
    fn group_matches_elementwise() {
        let g = GraphSpec::ring(5).unwrap();
        let group = stabilizer_group(&g).unwrap();
        for (i, p) in group.iter().enumerate() {
            assert_eq!(*p, stabilizer_element(&g, i));
        }
    }

    #[test]
    fn graph_state_is_stabilized() {
        for g in [
            GraphSpec::path(3).unwrap(),
            GraphSpec::ring(4).unwrap(),
            GraphSpec::star(4).unwrap(),
        ] {
            let psi = graph_state_vector(&g).unwrap();
            for k in generators(&g) {
                let mut out = vec![Complex64::new(0.0, 0.0); psi.len()];
                for (col, amp) in psi.iter().enumerate() {
                    let (row, coeff) = k.apply_to_basis(col);
                    out[row] += coeff * amp;
                }
                for (o, p) in out.iter().zip(&psi) {
                    assert!((o - p).norm() < 1e-15, "{k} does not stabilize the state");
                }
            }
        }
    }

    #[test]
    fn dense_examples() {
        let x = dense_matrix(&PauliString::x_on(1, 0)).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        assert_eq!(
            x,
            DenseMatrix::from_row_slice(2, 2, &[zero, one, one, zero])
        );
        assert_eq!(
            dense_matrix(&PauliString::identity(2)).unwrap(),
            DenseMatrix::identity(4, 4)
        );
        assert_eq!(
            dense_matrix(&PauliString::identity(11)),
            Err(Error::DenseCapExceeded { n: 11, cap: 10 })
        );
    }
}
