use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::RationalMatrix;

/// Coefficients `c_0..c_n` of `det(I + tA)`; `c_j` is the trace of the
/// j-th exterior power of `A`.
///
/// Computed from the characteristic polynomial by Faddeev-LeVerrier:
/// `det(xI - A) = sum p_i x^i` gives `c_j = (-1)^j p_{n-j}`.
pub fn exterior_trace_poly(a: &RationalMatrix) -> Vec<BigRational> {
    assert!(a.is_square(), "exterior traces need a square matrix");
    let n = a.rows();
    let mut p = vec![BigRational::zero(); n + 1];
    p[n] = BigRational::one();
    let id = RationalMatrix::identity(n);
    let mut m = RationalMatrix::zeros(n, n);
    for k in 1..=n {
        m = a.mul(&m).add(&id.scale(&p[n - k + 1]));
        let am = a.mul(&m);
        p[n - k] = -am.trace() / BigRational::from_integer(BigInt::from(k));
    }
    (0..=n).map(|j| if j % 2 == 0 { p[n - j].clone() } else { -p[n - j].clone() }).collect()
}

/// All `j`-element subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, j: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, j: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == j {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if j <= n {
        go(0, n, j, &mut Vec::with_capacity(j), &mut out);
    }
    out
}

/// The matrix of `Λ^j A` on the wedge basis: entry `(I, J)` is the minor
/// `det A[I, J]`.
pub fn exterior_power(a: &RationalMatrix, j: usize) -> RationalMatrix {
    assert!(a.is_square(), "exterior powers need a square matrix");
    let basis = wedge_basis(a.rows(), j);
    let mut out = RationalMatrix::zeros(basis.len(), basis.len());
    for (r, rows) in basis.iter().enumerate() {
        for (c, cols) in basis.iter().enumerate() {
            let minor = RationalMatrix::from_vec(
                j,
                j,
                rows.iter().flat_map(|&i| cols.iter().map(move |&k| a[(i, k)].clone())).collect(),
            );
            out[(r, c)] = if j == 0 { BigRational::one() } else { minor.determinant() };
        }
    }
    out
}
