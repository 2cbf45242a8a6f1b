use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::hermite::hnf;
use super::matrix::{IntegerMatrix, IntegerVector};
use super::smith::snf;
use super::LinalgError;

/// A sublattice of `Z^n` given by a basis in row-style Hermite form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct LatticeBasis {
    dim: usize,
    #[serde(serialize_with = "crate::serde_util::int_rows")]
    vectors: Vec<IntegerVector>,
}

impl LatticeBasis {
    /// Lattice spanned by arbitrary integer generators, reduced to Hermite form.
    pub fn from_generators(dim: usize, generators: &[IntegerVector]) -> Self {
        assert!(generators.iter().all(|g| g.len() == dim), "generator of wrong length");
        if generators.is_empty() {
            return LatticeBasis { dim, vectors: Vec::new() };
        }
        let f = hnf(&IntegerMatrix::from_rows(generators));
        LatticeBasis { dim, vectors: f.nonzero_rows() }
    }

    pub fn standard(dim: usize) -> Self {
        Self::from_generators(dim, &IntegerMatrix::identity(dim).to_rows())
    }

    pub fn empty(dim: usize) -> Self {
        LatticeBasis { dim, vectors: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[IntegerVector] {
        &self.vectors
    }

    /// Basis vectors as the rows of a `rank x dim` matrix.
    pub fn as_rows(&self) -> IntegerMatrix {
        if self.vectors.is_empty() {
            return IntegerMatrix::zeros(0, self.dim);
        }
        IntegerMatrix::from_rows(&self.vectors)
    }

    pub fn contains(&self, x: &[BigInt]) -> bool {
        if self.vectors.is_empty() {
            return x.iter().all(Zero::is_zero);
        }
        solve_integer(&self.as_rows().transpose(), x).is_some()
    }

    /// A full-rank lattice is saturated iff it is all of `Z^n`; in general
    /// saturation means the elementary divisors are all 1.
    pub fn is_saturated(&self) -> bool {
        snf(&self.as_rows()).invariant_factors().iter().all(One::is_one)
    }
}

/// Saturated integer kernel `{x in Z^cols : M x = 0}`.
pub fn kernel_lattice(m: &IntegerMatrix) -> LatticeBasis {
    let s = snf(m);
    let r = s.rank();
    let gens: Vec<IntegerVector> = (r..m.cols()).map(|j| s.v.column(j)).collect();
    LatticeBasis::from_generators(m.cols(), &gens)
}

/// Some integer solution of `M x = b`, or `None` when there is none over `Z`.
pub fn solve_integer(m: &IntegerMatrix, b: &[BigInt]) -> Option<IntegerVector> {
    assert_eq!(b.len(), m.rows(), "right-hand side has wrong length");
    let s = snf(m);
    let ub = s.u.mul_vec(b);
    let r = s.rank();
    let mut y = vec![BigInt::zero(); m.cols()];
    for (i, c) in ub.iter().enumerate() {
        if i < r {
            let (q, rem) = c.div_rem(&s.d[(i, i)]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(s.v.mul_vec(&y))
}

/// A complement `B` with `Z^n = sub ⊕ B`, where `sub` is the saturated
/// kernel of `map`.
///
/// The complement is read off a unimodular completion of the Hermite
/// transform of `sub`, then put in Hermite form itself.
pub fn complement_in_lattice(sub: &LatticeBasis, map: &IntegerMatrix) -> Result<LatticeBasis, LinalgError> {
    let n = sub.dim();
    if map.cols() != n {
        return Err(LinalgError::DimensionMismatch { expected: n, found: map.cols() });
    }
    for v in sub.vectors() {
        if map.mul_vec(v).iter().any(|x| !x.is_zero()) {
            return Err(LinalgError::NotInKernel);
        }
    }
    let map_rank = snf(map).rank();
    if sub.rank() + map_rank != n {
        return Err(LinalgError::NotSaturated);
    }
    let r = sub.rank();
    if r == 0 {
        return Ok(LatticeBasis::standard(n));
    }
    // Row operations on sub^T are column operations on sub: U sub^T = [L; 0].
    let f = hnf(&sub.as_rows().transpose());
    let lead = f.h.block(0, r, 0, r);
    if !lead.determinant().abs().is_one() {
        return Err(LinalgError::NotSaturated);
    }
    // sub = [L^T 0] (U^T)^{-1}, so the rows of (U^{-1})^T beyond r complete sub.
    let u_inv = f.u.inverse().expect("Hermite transform is unimodular");
    let gens: Vec<IntegerVector> = (r..n).map(|j| u_inv.column(j)).collect();
    Ok(LatticeBasis::from_generators(n, &gens))
}

/// Vectors fixed by every generator: `⋂ ker(A - I)`, saturated.
pub fn fixed_sublattice(generators: &[IntegerMatrix]) -> Result<LatticeBasis, LinalgError> {
    let Some(first) = generators.first() else {
        return Err(LinalgError::Empty);
    };
    let n = first.rows();
    let id = IntegerMatrix::identity(n);
    let mut stacked = IntegerMatrix::zeros(0, n);
    for g in generators {
        if g.rows() != n || g.cols() != n {
            return Err(LinalgError::DimensionMismatch { expected: n, found: g.rows() });
        }
        stacked = stacked.stack(&g.sub(&id));
    }
    Ok(kernel_lattice(&stacked))
}

/// `|det|` of a full-rank lattice, i.e. its index in `Z^n`.
pub fn lattice_index(lattice: &LatticeBasis) -> Option<BigInt> {
    if lattice.rank() != lattice.dim() {
        return None;
    }
    if lattice.dim() == 0 {
        return Some(BigInt::one());
    }
    Some(lattice.as_rows().determinant().abs())
}
