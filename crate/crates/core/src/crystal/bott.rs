use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::affine::AffineElement;
use super::group::{CrystalGroup, DEFAULT_CLOSURE_BOUND};
use super::CrystalError;
use crate::linalg::{denominator_lcm, to_integer_matrix, IntegerMatrix, LatticeBasis, RationalMatrix};

/// Rewrites the group generated by `generators` over its own translation
/// lattice, so that the lattice becomes the standard `Z^n`.
///
/// The translation subgroup is found by Schreier's lemma over a
/// breadth-first transversal of the (finite) linear parts, then the whole
/// group is conjugated by a basis of it. Generators that become lattice
/// translations are dropped.
pub fn standardize(dim: usize, generators: &[AffineElement]) -> Result<CrystalGroup, CrystalError> {
    standardize_with_basis(dim, generators).map(|(g, _)| g)
}

/// [`standardize`], also returning the basis `P` of the translation lattice
/// (as columns): the result is the conjugate `x ↦ P^{-1} x`.
pub fn standardize_with_basis(
    dim: usize,
    generators: &[AffineElement],
) -> Result<(CrystalGroup, RationalMatrix), CrystalError> {
    if generators.iter().any(|g| g.dim() != dim) {
        return Err(CrystalError::Shape(format!("generators must be {dim}-dimensional")));
    }

    // Transversal: one word-product representative per linear part.
    let mut reps = vec![AffineElement::identity(dim)];
    let mut index: HashMap<RationalMatrix, usize> = HashMap::from([(RationalMatrix::identity(dim), 0)]);
    let mut queue = VecDeque::from([0usize]);
    let mut schreier: Vec<Vec<BigRational>> = Vec::new();
    while let Some(g) = queue.pop_front() {
        for s in generators {
            let sr = s.compose(&reps[g]);
            match index.get(sr.linear()) {
                Some(&t) => {
                    let shift = reps[t].inverse().compose(&sr);
                    debug_assert!(shift.is_translation());
                    schreier.push(shift.translation().clone());
                }
                None => {
                    if reps.len() == DEFAULT_CLOSURE_BOUND {
                        return Err(CrystalError::ClosureBound { bound: DEFAULT_CLOSURE_BOUND });
                    }
                    index.insert(sr.linear().clone(), reps.len());
                    queue.push_back(reps.len());
                    reps.push(sr);
                }
            }
        }
    }

    let scale = denominator_lcm(schreier.iter().flatten());
    let scaled: Vec<Vec<BigInt>> =
        schreier.iter().map(|v| v.iter().map(|x| (x * &scale).to_integer()).collect()).collect();
    let lattice = LatticeBasis::from_generators(dim, &scaled);
    if lattice.rank() != dim {
        return Err(CrystalError::NotCocompact { rank: lattice.rank() });
    }
    let scale_q = BigRational::from_integer(scale);
    let columns: Vec<Vec<BigRational>> = lattice
        .vectors()
        .iter()
        .map(|v| v.iter().map(|x| BigRational::from_integer(x.clone()) / &scale_q).collect())
        .collect();
    let p = RationalMatrix::from_columns(dim, &columns);
    let p_inv = p.inverse().expect("lattice basis has full rank");

    let mut gens = Vec::new();
    let mut vecs = Vec::new();
    for s in generators {
        let c = s.change_basis(&p, &p_inv);
        let a = to_integer_matrix(c.linear()).ok_or_else(|| {
            CrystalError::InternalInconsistency(format!("{s} does not preserve its lattice"))
        })?;
        if a.is_identity() {
            continue;
        }
        gens.push(a);
        vecs.push(c.translation().clone());
    }
    Ok((CrystalGroup::new(dim, gens, vecs)?, p))
}

/// The real Bott group of a strictly upper-triangular binary matrix:
/// generators `(D_i, e_i / 2)` where `D_i` flips the sign of coordinate
/// `j > i` exactly when `A_ij = 1`, presented on its own lattice.
pub fn from_bott_matrix(a: &IntegerMatrix) -> Result<CrystalGroup, CrystalError> {
    check_bott_matrix(a)?;
    let n = a.rows();
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let generators: Vec<AffineElement> = (0..n)
        .map(|i| {
            let diag: Vec<BigInt> = (0..n)
                .map(|j| if j > i && a[(i, j)].is_one() { BigInt::from(-1) } else { BigInt::one() })
                .collect();
            let mut v = vec![BigRational::zero(); n];
            v[i] = half.clone();
            AffineElement::from_integer(&IntegerMatrix::diagonal(&diag), v)
        })
        .collect();
    standardize(n, &generators)
}

pub fn check_bott_matrix(a: &IntegerMatrix) -> Result<(), CrystalError> {
    if !a.is_square() {
        return Err(CrystalError::BadMatrix(format!("{}x{} is not square", a.rows(), a.cols())));
    }
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let x = &a[(i, j)];
            if j <= i && !x.is_zero() {
                return Err(CrystalError::BadMatrix(format!(
                    "entry ({}, {}) on or below the diagonal is nonzero",
                    i + 1,
                    j + 1
                )));
            }
            if !x.is_zero() && !x.is_one() {
                return Err(CrystalError::BadMatrix(format!(
                    "entry ({}, {}) = {x} is not binary",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(())
}

/// Strict upper triangle of an `n x n` Bott matrix from its row-major bits.
pub fn bott_matrix_from_bits(n: usize, bits: &[bool]) -> Result<IntegerMatrix, CrystalError> {
    let expected = n * n.saturating_sub(1) / 2;
    if bits.len() != expected {
        return Err(CrystalError::BadMatrix(format!(
            "an {n}x{n} Bott matrix has {expected} free bits, got {}",
            bits.len()
        )));
    }
    let mut m = IntegerMatrix::zeros(n, n);
    let mut it = bits.iter();
    for i in 0..n {
        for j in i + 1..n {
            if *it.next().expect("length checked") {
                m[(i, j)] = BigInt::one();
            }
        }
    }
    Ok(m)
}

/// Inverse of [`bott_matrix_from_bits`].
pub fn bott_bits(a: &IntegerMatrix) -> Vec<bool> {
    let n = a.rows();
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].is_one()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::validate::validate;
    use crate::linalg::{int_vec, rat_vec};

    #[test]
    fn circle() {
        let g = from_bott_matrix(&IntegerMatrix::zeros(1, 1)).unwrap();
        assert_eq!(g, CrystalGroup::torus(1));
    }

    #[test]
    fn zero_matrix_gives_torus() {
        let g = from_bott_matrix(&IntegerMatrix::zeros(2, 2)).unwrap();
        assert_eq!(g, CrystalGroup::torus(2));
    }

    #[test]
    fn single_bit_gives_klein_bottle() {
        // Translations are spanned by (0, 1/2) and (1, 0); rescaling the
        // second axis turns s_1 into the standard glide (diag(1,-1), (1/2, 0)).
        let a = bott_matrix_from_bits(2, &[true]).unwrap();
        let g = from_bott_matrix(&a).unwrap();
        assert!(validate(&g).passed());
        assert_eq!(g.holonomy_gens(), &[IntegerMatrix::diagonal(&int_vec(&[1, -1]))]);
        assert_eq!(g.vectors(), &[rat_vec(&[(1, 2), (0, 1)])]);
    }

    #[test]
    fn rejects_bad_matrices() {
        let lower = IntegerMatrix::from_i64(&[&[0, 0], &[1, 0]]);
        assert!(matches!(from_bott_matrix(&lower), Err(CrystalError::BadMatrix(_))));
        let two = IntegerMatrix::from_i64(&[&[0, 2], &[0, 0]]);
        assert!(matches!(from_bott_matrix(&two), Err(CrystalError::BadMatrix(_))));
        assert!(bott_matrix_from_bits(3, &[true]).is_err());
    }

    #[test]
    fn bits_round_trip() {
        let bits = [true, false, true];
        let m = bott_matrix_from_bits(3, &bits).unwrap();
        assert_eq!(bott_bits(&m), bits);
    }
}
