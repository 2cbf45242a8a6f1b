//! First homology, Betti numbers and center rank of `M = R^n / π`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::crystal::Bieberbach;
use crate::linalg::{
    exterior_power, exterior_trace_poly, fixed_sublattice, hnf, rank, snf, IntegerMatrix, IntegerVector,
    LatticeBasis, RationalMatrix,
};

/// Largest dimension for which the wedge-basis oracle is run.
pub const ORACLE_MAX_DIM: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("character average in degree {degree} is {value}, not an integer")]
    NonIntegralAverage { degree: usize, value: BigRational },
    #[error("dimension {dim} exceeds the oracle limit {ORACLE_MAX_DIM}")]
    DimensionTooLarge { dim: usize },
}

/// `H_1(M; Z) ≅ Z^k ⊕ ⊕ Z/d_i`, with explicit coordinate maps from the
/// abelianized presentation generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyH1 {
    pub free_rank: usize,
    #[serde(rename = "torsion", serialize_with = "crate::serde_util::int_list")]
    pub torsion_divisors: Vec<BigInt>,
    /// `generators x k`: row `i` is `ν(x_i)`, the free part of generator `i`.
    #[serde(skip)]
    pub projection: IntegerMatrix,
    /// `generators x t`: torsion coordinates, column `i` read mod `d_i`.
    #[serde(skip)]
    pub torsion_map: IntegerMatrix,
}

impl HomologyH1 {
    /// Free-part coordinates of an exponent-sum vector.
    pub fn nu(&self, exponents: &[BigInt]) -> IntegerVector {
        self.projection.vec_mul(exponents)
    }

    /// Torsion coordinates of an exponent-sum vector, reduced mod `d_i`.
    pub fn torsion_coords(&self, exponents: &[BigInt]) -> IntegerVector {
        self.torsion_map
            .vec_mul(exponents)
            .iter()
            .zip(&self.torsion_divisors)
            .map(|(x, d)| x.mod_floor(d))
            .collect()
    }

    /// `ν` restricted to the lattice generators, as a `k x n` matrix.
    pub fn lattice_projection(&self, n: usize) -> IntegerMatrix {
        self.projection.block(0, n, 0, self.free_rank).transpose()
    }

    /// Rank of the image of a sublattice of `Z^n` in the free part of `H_1`.
    pub fn image_rank(&self, sub: &LatticeBasis) -> usize {
        if sub.rank() == 0 || self.free_rank == 0 {
            return 0;
        }
        let n = sub.dim();
        let lattice_rows = self.projection.block(0, n, 0, self.free_rank);
        let images = sub.as_rows().mul(&lattice_rows);
        rank(&images.to_rational())
    }

    pub fn torsion_order(&self) -> BigInt {
        self.torsion_divisors.iter().product()
    }
}

impl fmt::Display for HomologyH1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            k => parts.push(format!("Z^{k}")),
        }
        parts.extend(self.torsion_divisors.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Abelianization of the finite presentation.
///
/// With `U R V = D` for the relator matrix `R`, the change of coordinates
/// `y = x V` carries the relation lattice onto `⊕ d_i Z`. The free
/// projection is the last `k` columns of `V`, brought to Hermite form so
/// that it does not depend on which unimodular `V` was found.
pub fn h1(group: &Bieberbach) -> HomologyH1 {
    let p = group.presentation();
    let gens = p.generator_count();
    let rows: Vec<Vec<BigInt>> = p.relators().iter().map(|r| r.exponent_sums(gens)).collect();
    let relations =
        if rows.is_empty() { IntegerMatrix::zeros(0, gens) } else { IntegerMatrix::from_rows(&rows) };
    let s = snf(&relations);
    let factors = s.invariant_factors();
    let r = factors.len();
    let free_rank = gens - r;

    let free_cols: Vec<usize> = (r..gens).collect();
    let raw = s.v.select_columns(&free_cols);
    let projection = if free_rank == 0 {
        IntegerMatrix::zeros(gens, 0)
    } else {
        let f = hnf(&raw.transpose());
        f.h.block(0, free_rank, 0, gens).transpose()
    };

    let torsion_idx: Vec<usize> = (0..r).filter(|&i| !factors[i].is_one()).collect();
    let torsion_divisors: Vec<BigInt> = torsion_idx.iter().map(|&i| factors[i].clone()).collect();
    let mut torsion_map = s.v.select_columns(&torsion_idx);
    for (c, d) in torsion_divisors.iter().enumerate() {
        for i in 0..gens {
            torsion_map[(i, c)] = torsion_map[(i, c)].mod_floor(d);
        }
    }

    HomologyH1 { free_rank, torsion_divisors, projection, torsion_map }
}

/// Betti numbers `b_0..b_n` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<u64>);

impl BettiVector {
    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.0.iter().enumerate().map(|(j, &b)| if j % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `b_j = (1/|G|) Σ_g c_j(g)` where `det(I + t A_g) = Σ c_j(g) t^j`: the
/// dimension of the holonomy-invariant part of `Λ^j R^n`.
pub fn betti(group: &Bieberbach) -> Result<BettiVector, TopologyError> {
    let n = group.dim();
    let hol = group.holonomy();
    let mut sums = vec![BigRational::zero(); n + 1];
    for a in hol.elements() {
        for (s, c) in sums.iter_mut().zip(exterior_trace_poly(&a.to_rational())) {
            *s += c;
        }
    }
    let order = BigRational::from_integer(BigInt::from(hol.order()));
    sums.into_iter()
        .enumerate()
        .map(|(degree, s)| {
            let value = s / &order;
            if !value.is_integer() || value.is_negative() {
                return Err(TopologyError::NonIntegralAverage { degree, value });
            }
            Ok(u64::try_from(value.to_integer()).expect("Betti number fits in u64"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(BettiVector)
}

/// Rank of the averaging projector `(1/|G|) Σ Λ^j(A_g)` built explicitly on
/// the wedge basis. Independent of [`betti`].
pub fn betti_oracle(group: &Bieberbach, j: usize) -> Result<u64, TopologyError> {
    let n = group.dim();
    if n > ORACLE_MAX_DIM {
        return Err(TopologyError::DimensionTooLarge { dim: n });
    }
    if j > n {
        return Ok(0);
    }
    let hol = group.holonomy();
    let mut projector: Option<RationalMatrix> = None;
    for a in hol.elements() {
        let w = exterior_power(&a.to_rational(), j);
        projector = Some(match projector {
            None => w,
            Some(p) => p.add(&w),
        });
    }
    let p = projector.expect("holonomy contains the identity");
    let p = p.scale(&BigRational::new(BigInt::one(), BigInt::from(hol.order())));
    Ok(rank(&p) as u64)
}

/// Rank of the holonomy-fixed lattice, i.e. of the translations central in `π`.
pub fn center_rank(group: &Bieberbach) -> usize {
    fixed_sublattice(group.holonomy().elements()).expect("holonomy always contains the identity").rank()
}

/// Rank of the image of `sub ⊆ Z^n` in `H_1(M; Z) / torsion`.
pub fn image_rank_in_h1(group: &Bieberbach, sub: &LatticeBasis) -> usize {
    h1(group).image_rank(sub)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::CrystalGroup;
    use crate::linalg::{int_vec, rat_vec};

    fn klein() -> Bieberbach {
        Bieberbach::new(
            CrystalGroup::new(
                2,
                vec![IntegerMatrix::diagonal(&int_vec(&[1, -1]))],
                vec![rat_vec(&[(1, 2), (0, 1)])],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn g2() -> Bieberbach {
        Bieberbach::new(
            CrystalGroup::new(
                3,
                vec![IntegerMatrix::diagonal(&int_vec(&[1, -1, -1]))],
                vec![rat_vec(&[(1, 2), (0, 1), (0, 1)])],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn hantzsche_wendt() -> Bieberbach {
        Bieberbach::new(
            CrystalGroup::new(
                3,
                vec![
                    IntegerMatrix::diagonal(&int_vec(&[1, -1, -1])),
                    IntegerMatrix::diagonal(&int_vec(&[-1, 1, -1])),
                ],
                vec![rat_vec(&[(1, 2), (1, 2), (0, 1)]), rat_vec(&[(0, 1), (1, 2), (1, 2)])],
            )
            .unwrap(),
        )
        .unwrap()
    }

    fn torus(n: usize) -> Bieberbach {
        Bieberbach::new(CrystalGroup::torus(n)).unwrap()
    }

    #[test]
    fn h1_of_torus() {
        let h = h1(&torus(3));
        assert_eq!(h.free_rank, 3);
        assert!(h.torsion_divisors.is_empty());
        let h = h1(&torus(1));
        assert_eq!(h.free_rank, 1);
    }

    #[test]
    fn h1_of_klein_bottle() {
        // Abelianized: 2 e2 = 0 and 2 g = e1, so H_1 = Z ⊕ Z/2 with ν(g) = 1.
        let k = klein();
        let h = h1(&k);
        assert_eq!(h.free_rank, 1);
        assert_eq!(h.torsion_divisors, int_vec(&[2]));
        assert_eq!(h.to_string(), "Z + Z/2");
        assert_eq!(h.lattice_projection(2), IntegerMatrix::from_i64(&[&[2, 0]]));
        assert_eq!(h.nu(&int_vec(&[0, 0, 1])), int_vec(&[1]));
        // e2 is the torsion class.
        assert_eq!(h.torsion_coords(&int_vec(&[0, 1, 0])), int_vec(&[1]));
        assert_eq!(h.torsion_coords(&int_vec(&[0, 2, 0])), int_vec(&[0]));
    }

    #[test]
    fn h1_of_hantzsche_wendt() {
        let h = h1(&hantzsche_wendt());
        assert_eq!(h.free_rank, 0);
        assert!(!h.torsion_divisors.is_empty());
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti(&torus(3)).unwrap().0, vec![1, 3, 3, 1]);
        // ((1+t)^2 + (1-t^2)) / 2 = 1 + t
        assert_eq!(betti(&klein()).unwrap().0, vec![1, 1, 0]);
        // ((1+t)^3 + (1+t)(1-t)^2) / 2 = 1 + t + t^2 + t^3
        assert_eq!(betti(&g2()).unwrap().0, vec![1, 1, 1, 1]);
        // ((1+t)^3 + 3 (1+t)(1-t)^2) / 4 = 1 + t^3
        assert_eq!(betti(&hantzsche_wendt()).unwrap().0, vec![1, 0, 0, 1]);
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(betti_oracle(&torus(2), 1).unwrap(), 2);
        assert_eq!(betti_oracle(&klein(), 2).unwrap(), 0);
        assert_eq!(betti_oracle(&g2(), 2).unwrap(), 1);
        assert_eq!(betti_oracle(&torus(7), 1), Err(TopologyError::DimensionTooLarge { dim: 7 }));
    }

    #[test]
    fn center_ranks() {
        assert_eq!(center_rank(&torus(4)), 4);
        assert_eq!(center_rank(&klein()), 1);
        assert_eq!(center_rank(&hantzsche_wendt()), 0);
    }

    #[test]
    fn image_ranks() {
        assert_eq!(image_rank_in_h1(&torus(2), &LatticeBasis::standard(2)), 2);
        let k = klein();
        let e1 = LatticeBasis::from_generators(2, &[int_vec(&[1, 0])]);
        let e2 = LatticeBasis::from_generators(2, &[int_vec(&[0, 1])]);
        assert_eq!(image_rank_in_h1(&k, &e1), 1);
        assert_eq!(image_rank_in_h1(&k, &e2), 0);
    }
}
