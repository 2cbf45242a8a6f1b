use std::collections::{HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::affine::AffineElement;
use super::CrystalError;
use crate::linalg::{frac, IntegerMatrix, RationalVector};

pub const DEFAULT_CLOSURE_BOUND: usize = 1024;

/// A crystallographic group on the standard lattice `Z^n`: `Z^n` together
/// with one affine generator `(A_i, v_i)` per holonomy generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrystalGroup {
    dim: usize,
    holonomy_gens: Vec<IntegerMatrix>,
    vectors: Vec<RationalVector>,
}

impl CrystalGroup {
    /// Checks shapes only; group-theoretic conditions are checked by
    /// [`super::validate`].
    pub fn new(
        dim: usize,
        holonomy_gens: Vec<IntegerMatrix>,
        vectors: Vec<RationalVector>,
    ) -> Result<Self, CrystalError> {
        if holonomy_gens.len() != vectors.len() {
            return Err(CrystalError::Shape(format!(
                "{} generators but {} vectors",
                holonomy_gens.len(),
                vectors.len()
            )));
        }
        for (i, (a, v)) in holonomy_gens.iter().zip(&vectors).enumerate() {
            if a.rows() != dim || a.cols() != dim || v.len() != dim {
                return Err(CrystalError::Shape(format!("generator {} is not {dim}-dimensional", i + 1)));
            }
        }
        Ok(CrystalGroup { dim, holonomy_gens, vectors })
    }

    /// The free abelian group `Z^n`.
    pub fn torus(dim: usize) -> Self {
        CrystalGroup { dim, holonomy_gens: Vec::new(), vectors: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn holonomy_gens(&self) -> &[IntegerMatrix] {
        &self.holonomy_gens
    }

    pub fn vectors(&self) -> &[RationalVector] {
        &self.vectors
    }

    pub fn generator_element(&self, i: usize) -> AffineElement {
        AffineElement::from_integer(&self.holonomy_gens[i], self.vectors[i].clone())
    }
}

/// The finite group `π / Z^n` with one representative translation per element.
#[derive(Clone, Debug)]
pub struct HolonomyGroup {
    elements: Vec<IntegerMatrix>,
    vectors: Vec<RationalVector>,
    words: Vec<Vec<usize>>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    index: HashMap<IntegerMatrix, usize>,
}

impl HolonomyGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Elements in breadth-first discovery order; index 0 is the identity.
    pub fn elements(&self) -> &[IntegerMatrix] {
        &self.elements
    }

    pub fn matrix(&self, g: usize) -> &IntegerMatrix {
        &self.elements[g]
    }

    /// Representative translation of element `g`, reduced to `[0, 1)^n`.
    pub fn vector(&self, g: usize) -> &RationalVector {
        &self.vectors[g]
    }

    /// The coset representative `(A_g, v_g)`.
    pub fn representative(&self, g: usize) -> AffineElement {
        AffineElement::from_integer(&self.elements[g], self.vectors[g].clone())
    }

    /// Generator indices `s_1 s_2 ... s_m` with `A_g = A_{s_1} ... A_{s_m}`.
    pub fn word(&self, g: usize) -> &[usize] {
        &self.words[g]
    }

    /// Index of `A_g A_h`.
    pub fn product(&self, g: usize, h: usize) -> usize {
        self.table[g][h]
    }

    pub fn inverse(&self, g: usize) -> usize {
        self.inverses[g]
    }

    pub fn find(&self, m: &IntegerMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut cur = g;
        while cur != 0 {
            cur = self.product(g, cur);
            k += 1;
        }
        k
    }
}

pub fn generate_holonomy(group: &CrystalGroup) -> Result<HolonomyGroup, CrystalError> {
    generate_holonomy_bounded(group, DEFAULT_CLOSURE_BOUND)
}

/// Breadth-first closure of the holonomy generators under left
/// multiplication. Representative vectors are propagated along the
/// discovery words, `v_{sg} = A_s v_g + v_s`, then reduced mod `Z^n`.
pub fn generate_holonomy_bounded(group: &CrystalGroup, bound: usize) -> Result<HolonomyGroup, CrystalError> {
    let n = group.dim();
    for (i, a) in group.holonomy_gens().iter().enumerate() {
        if !a.determinant().abs().is_one() {
            return Err(CrystalError::NotUnimodular { generator: i + 1 });
        }
    }
    let reduce = |v: RationalVector| -> RationalVector { v.iter().map(frac).collect() };

    let identity = IntegerMatrix::identity(n);
    let mut elements = vec![identity.clone()];
    let mut vectors = vec![vec![BigRational::from_integer(0.into()); n]];
    let mut words: Vec<Vec<usize>> = vec![Vec::new()];
    let mut index = HashMap::from([(identity, 0usize)]);
    let mut queue = VecDeque::from([0usize]);

    while let Some(g) = queue.pop_front() {
        for (s, a) in group.holonomy_gens().iter().enumerate() {
            let m = a.mul(&elements[g]);
            if index.contains_key(&m) {
                continue;
            }
            if elements.len() == bound {
                return Err(CrystalError::ClosureBound { bound });
            }
            let mut v = a.to_rational().mul_vec(&vectors[g]);
            for (x, y) in v.iter_mut().zip(&group.vectors()[s]) {
                *x += y;
            }
            let mut w = vec![s];
            w.extend_from_slice(&words[g]);
            index.insert(m.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(m);
            vectors.push(reduce(v));
            words.push(w);
        }
    }

    let order = elements.len();
    let mut table = vec![vec![0; order]; order];
    let mut inverses = vec![0; order];
    for g in 0..order {
        for h in 0..order {
            let p = elements[g].mul(&elements[h]);
            table[g][h] = *index.get(&p).ok_or(CrystalError::ClosureBound { bound })?;
            if table[g][h] == 0 {
                inverses[g] = h;
            }
        }
    }

    Ok(HolonomyGroup { elements, vectors, words, table, inverses, index })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, rat_vec};

    fn diag(v: &[i64]) -> IntegerMatrix {
        IntegerMatrix::diagonal(&int_vec(v))
    }

    #[test]
    fn trivial_holonomy() {
        let h = generate_holonomy(&CrystalGroup::torus(2)).unwrap();
        assert_eq!(h.order(), 1);
        assert!(h.matrix(0).is_identity());
    }

    #[test]
    fn reflection_has_order_two() {
        let g = CrystalGroup::new(2, vec![diag(&[1, -1])], vec![rat_vec(&[(1, 2), (0, 1)])]).unwrap();
        let h = generate_holonomy(&g).unwrap();
        assert_eq!(h.order(), 2);
        assert_eq!(h.element_order(1), 2);
        assert_eq!(h.vector(1), &rat_vec(&[(1, 2), (0, 1)]));
    }

    #[test]
    fn klein_four_table() {
        let g = CrystalGroup::new(
            3,
            vec![diag(&[1, -1, -1]), diag(&[-1, 1, -1])],
            vec![rat_vec(&[(1, 2), (1, 2), (0, 1)]), rat_vec(&[(0, 1), (1, 2), (1, 2)])],
        )
        .unwrap();
        let h = generate_holonomy(&g).unwrap();
        assert_eq!(h.order(), 4);
        for a in 0..4 {
            assert_eq!(h.product(a, a), 0, "every element is an involution");
            assert_eq!(h.inverse(a), a);
            for b in 0..4 {
                assert_eq!(h.product(a, b), h.product(b, a), "abelian");
            }
        }
        // The third non-identity element is diag(-1,-1,1).
        assert!(h.find(&diag(&[-1, -1, 1])).is_some());
    }

    #[test]
    fn closure_bound_trips() {
        let g = CrystalGroup::new(
            2,
            vec![IntegerMatrix::from_i64(&[&[1, 1], &[0, 1]])],
            vec![rat_vec(&[(0, 1), (0, 1)])],
        )
        .unwrap();
        assert_eq!(generate_holonomy_bounded(&g, 50).unwrap_err(), CrystalError::ClosureBound { bound: 50 });
    }

    #[test]
    fn non_unimodular_rejected() {
        let g =
            CrystalGroup::new(1, vec![IntegerMatrix::from_i64(&[&[2]])], vec![rat_vec(&[(0, 1)])]).unwrap();
        assert!(matches!(generate_holonomy(&g), Err(CrystalError::NotUnimodular { generator: 1 })));
    }
}
