use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::linalg::{to_rational_vector, IntegerMatrix, RationalMatrix, RationalVector};

/// A euclidean motion `x ↦ A x + a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AffineElement {
    #[serde(serialize_with = "rational_matrix")]
    linear: RationalMatrix,
    #[serde(serialize_with = "crate::serde_util::rat_list")]
    translation: RationalVector,
}

fn rational_matrix<S: serde::Serializer>(m: &RationalMatrix, s: S) -> Result<S::Ok, S::Error> {
    crate::serde_util::rat_rows(&m.to_rows(), s)
}

impl AffineElement {
    pub fn new(linear: RationalMatrix, translation: RationalVector) -> Self {
        assert!(linear.is_square() && linear.rows() == translation.len(), "shape mismatch");
        AffineElement { linear, translation }
    }

    pub fn from_integer(linear: &IntegerMatrix, translation: RationalVector) -> Self {
        Self::new(linear.to_rational(), translation)
    }

    pub fn identity(n: usize) -> Self {
        AffineElement { linear: RationalMatrix::identity(n), translation: vec![BigRational::zero(); n] }
    }

    pub fn translation_by(v: RationalVector) -> Self {
        AffineElement { linear: RationalMatrix::identity(v.len()), translation: v }
    }

    pub fn lattice_translation(v: &[BigInt]) -> Self {
        Self::translation_by(to_rational_vector(v))
    }

    pub fn dim(&self) -> usize {
        self.translation.len()
    }

    pub fn linear(&self) -> &RationalMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &RationalVector {
        &self.translation
    }

    /// `self ∘ rhs`: `(A, a)(B, b) = (AB, Ab + a)`.
    pub fn compose(&self, rhs: &AffineElement) -> AffineElement {
        let mut t = self.linear.mul_vec(&rhs.translation);
        for (x, a) in t.iter_mut().zip(&self.translation) {
            *x += a;
        }
        AffineElement { linear: self.linear.mul(&rhs.linear), translation: t }
    }

    /// `(A, a)^{-1} = (A^{-1}, -A^{-1} a)`.
    pub fn inverse(&self) -> AffineElement {
        let inv = self.linear.inverse().expect("affine element with singular linear part");
        let t = inv.mul_vec(&self.translation).into_iter().map(|x| -x).collect();
        AffineElement { linear: inv, translation: t }
    }

    pub fn pow(&self, e: i64) -> AffineElement {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut acc = AffineElement::identity(self.dim());
        for _ in 0..e.unsigned_abs() {
            acc = acc.compose(&base);
        }
        acc
    }

    pub fn apply(&self, x: &[BigRational]) -> RationalVector {
        let mut y = self.linear.mul_vec(x);
        for (yi, a) in y.iter_mut().zip(&self.translation) {
            *yi += a;
        }
        y
    }

    pub fn is_identity(&self) -> bool {
        self.is_translation() && self.translation.iter().all(Zero::is_zero)
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }

    /// Conjugate into new coordinates `y = P^{-1} x`: `(P^{-1} A P, P^{-1} a)`.
    pub fn change_basis(&self, p: &RationalMatrix, p_inv: &RationalMatrix) -> AffineElement {
        AffineElement {
            linear: p_inv.mul(&self.linear).mul(p),
            translation: p_inv.mul_vec(&self.translation),
        }
    }
}

impl fmt::Display for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, (", self.linear)?;
        for (i, x) in self.translation.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "))")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, rat_vec};

    fn klein_glide() -> AffineElement {
        AffineElement::from_integer(&IntegerMatrix::diagonal(&int_vec(&[1, -1])), rat_vec(&[(1, 2), (0, 1)]))
    }

    #[test]
    fn glide_squares_to_lattice_translation() {
        let g = klein_glide();
        assert_eq!(g.compose(&g), AffineElement::lattice_translation(&int_vec(&[1, 0])));
        assert_eq!(g.pow(2), g.compose(&g));
    }

    #[test]
    fn inverse_and_identity() {
        let g = klein_glide();
        assert!(g.compose(&g.inverse()).is_identity());
        assert!(g.pow(-3).compose(&g.pow(3)).is_identity());
        assert!(AffineElement::identity(3).is_identity());
    }

    #[test]
    fn composition_is_associative_on_a_sample() {
        let a = klein_glide();
        let b = AffineElement::lattice_translation(&int_vec(&[0, 1]));
        let c = AffineElement::from_integer(
            &IntegerMatrix::from_i64(&[&[0, 1], &[1, 0]]),
            rat_vec(&[(1, 3), (0, 1)]),
        );
        assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
    }
}
