//! Toral rank bounds for flat manifolds and the finite-index
//! splitting subgroup of a homologically injective action.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::calabi::{certify, CalabiError};
use crate::crystal::{standardize_with_basis, validate, Bieberbach, CrystalError, CrystalGroup, Word};
use crate::linalg::{
    complement_in_lattice, kernel_lattice, lattice_index, snf, solve_integer, to_integer_vector,
    to_rational_vector, IntegerMatrix, IntegerVector, LatticeBasis,
};
use crate::report::{FullReport, Invariants};
use crate::serde_util::Int;
use crate::topology::{betti, center_rank, h1, BettiVector, HomologyH1};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HccError {
    #[error("torus lattice of rank {expected} has image rank {rank} in H_1: the action is not homologically injective")]
    NotInjective { rank: usize, expected: usize },
    #[error("torus lattice vector {vector:?} is not fixed by the holonomy")]
    NotCentral { vector: Vec<String> },
    #[error(transparent)]
    Crystal(#[from] CrystalError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn from_bool(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeBound {
    pub j: usize,
    pub binom: u64,
    pub betti: u64,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SumBound {
    pub two_k: u64,
    pub betti_sum: u64,
    pub pass: bool,
}

/// `C(k, j)`, zero for `j > k`.
pub fn binomial(k: usize, j: usize) -> u64 {
    if j > k {
        return 0;
    }
    let j = j.min(k - j);
    (0..j).fold(1u64, |acc, i| acc * (k - i) as u64 / (i + 1) as u64)
}

/// `C(k, j) ≤ b_j` in every degree.
pub fn binom_bound_check(k: usize, betti: &BettiVector) -> Vec<DegreeBound> {
    betti
        .values()
        .iter()
        .enumerate()
        .map(|(j, &b)| {
            let binom = binomial(k, j);
            DegreeBound { j, binom, betti: b, pass: binom <= b }
        })
        .collect()
}

/// `2^k ≤ Σ b_j`.
pub fn sum_bound_check(k: usize, betti: &BettiVector) -> SumBound {
    let two_k = 1u64 << k;
    let betti_sum = betti.sum();
    SumBound { two_k, betti_sum, pass: two_k <= betti_sum }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HccVerdict {
    pub k: usize,
    pub betti: BettiVector,
    pub per_degree: Vec<DegreeBound>,
    pub sum_bound: SumBound,
    pub homologically_injective: Verdict,
    pub maximal: Verdict,
}

impl HccVerdict {
    pub fn new(k: usize, betti: &BettiVector, injective: Option<bool>, center_rank: usize) -> Self {
        HccVerdict {
            k,
            betti: betti.clone(),
            per_degree: binom_bound_check(k, betti),
            sum_bound: sum_bound_check(k, betti),
            homologically_injective: match injective {
                None => Verdict::NotApplicable,
                Some(b) => Verdict::from_bool(b),
            },
            maximal: Verdict::from_bool(k == center_rank),
        }
    }

    pub fn passed(&self) -> bool {
        self.per_degree.iter().all(|d| d.pass)
            && self.sum_bound.pass
            && self.homologically_injective != Verdict::Fail
            && self.maximal == Verdict::Pass
    }
}

impl Serialize for HccVerdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("HccVerdict", 4)?;
        st.serialize_field("per_degree", &self.per_degree)?;
        st.serialize_field("sum_bound", &self.sum_bound)?;
        st.serialize_field("homologically_injective", &self.homologically_injective)?;
        st.serialize_field("maximal", &self.maximal)?;
        st.end()
    }
}

/// A finite-index subgroup `π' ⊆ π` in which the torus lattice is a direct
/// factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingSubgroup {
    pub index: BigInt,
    /// Invariant factors of `π / π'`.
    pub quotient: Vec<BigInt>,
    pub generators: Vec<Word>,
    pub generator_names: Vec<String>,
    /// `π' ∩ Z^n`.
    pub lattice: LatticeBasis,
    pub holonomy_order: usize,
    /// `π'` conjugated onto its own translation lattice.
    pub subgroup: CrystalGroup,
    pub verified_direct_product: bool,
}

impl Serialize for SplittingSubgroup {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SplittingSubgroup", 3)?;
        st.serialize_field("index", &Int(&self.index))?;
        st.serialize_field("generators", &self.generator_names)?;
        st.serialize_field("verified_direct_product", &self.verified_direct_product)?;
        st.end()
    }
}

/// Class of an exponent-sum vector in `Z^{free} ⊕ Z^{torsion}` coordinates.
fn h1_coords(h1: &HomologyH1, exponents: &[BigInt]) -> IntegerVector {
    let mut c = h1.nu(exponents);
    c.extend(h1.torsion_map.vec_mul(exponents));
    c
}

fn lattice_exponents(x: &[BigInt], generators: usize) -> IntegerVector {
    let mut e = x.to_vec();
    e.resize(generators, BigInt::zero());
    e
}

/// `π' = q^{-1}(H)` for `q : π → H_1(M; Z)` and
/// `H = q(T) ⊕ C'`, where `C'` complements the saturation of `ν(T)` in the
/// free part. Torsion of `H_1` is not included in `H`, so the index is
/// `[Z^{rank} : ν(T) ⊕ C'] · |torsion|`.
pub fn splitting_subgroup(
    group: &Bieberbach,
    h1: &HomologyH1,
    torus: &LatticeBasis,
) -> Result<SplittingSubgroup, HccError> {
    let n = group.dim();
    let k = torus.rank();
    let image_rank = h1.image_rank(torus);
    if image_rank < k {
        return Err(HccError::NotInjective { rank: image_rank, expected: k });
    }
    let hol = group.holonomy();
    for t in torus.vectors() {
        if hol.elements().iter().any(|a| &a.mul_vec(t) != t) {
            return Err(HccError::NotCentral { vector: t.iter().map(ToString::to_string).collect() });
        }
    }

    let pres = group.presentation();
    let gens = pres.generator_count();
    let free = h1.free_rank;
    let tors = h1.torsion_divisors.len();
    let width = free + tors;

    let mut rows: Vec<IntegerVector> =
        torus.vectors().iter().map(|t| h1_coords(h1, &lattice_exponents(t, gens))).collect();
    let nu_t: Vec<IntegerVector> = rows.iter().map(|r| r[..free].to_vec()).collect();
    let orth =
        if k == 0 { LatticeBasis::standard(free) } else { kernel_lattice(&IntegerMatrix::from_rows(&nu_t)) };
    let saturation = kernel_lattice(&orth.as_rows());
    for c in complement_in_lattice(&saturation, &orth.as_rows())
        .map_err(|e| CrystalError::InternalInconsistency(e.to_string()))?
        .vectors()
    {
        let mut r = c.clone();
        r.resize(width, BigInt::zero());
        rows.push(r);
    }
    for (j, d) in h1.torsion_divisors.iter().enumerate() {
        let mut r = vec![BigInt::zero(); width];
        r[free + j] = d.clone();
        rows.push(r);
    }

    let relations =
        if rows.is_empty() { IntegerMatrix::zeros(0, width) } else { IntegerMatrix::from_rows(&rows) };
    let s = snf(&relations);
    let factors = s.invariant_factors();
    if factors.len() != width {
        return Err(CrystalError::InternalInconsistency("π / π' is infinite".into()).into());
    }
    let kept: Vec<usize> = (0..width).filter(|&i| !factors[i].is_one()).collect();
    let moduli: Vec<BigInt> = kept.iter().map(|&i| factors[i].clone()).collect();
    let index: BigInt = moduli.iter().product();
    let phi = |exponents: &[BigInt]| -> IntegerVector {
        let y = s.v.vec_mul(&h1_coords(h1, exponents));
        kept.iter().zip(&moduli).map(|(&i, m)| y[i].mod_floor(m)).collect()
    };

    let r = moduli.len();
    let mut system = IntegerMatrix::zeros(r, n + r);
    for i in 0..n {
        let mut e = vec![BigInt::zero(); gens];
        e[i] = BigInt::one();
        for (row, v) in phi(&e).into_iter().enumerate() {
            system[(row, i)] = v;
        }
    }
    for (row, m) in moduli.iter().enumerate() {
        system[(row, n + row)] = -m.clone();
    }

    let lattice = if r == 0 {
        LatticeBasis::standard(n)
    } else {
        let gens_l: Vec<IntegerVector> =
            kernel_lattice(&system).vectors().iter().map(|v| v[..n].to_vec()).collect();
        LatticeBasis::from_generators(n, &gens_l)
    };

    let mut generators: Vec<Word> =
        lattice.vectors().iter().map(|v| pres.lattice_word(v)).collect::<Result<_, _>>()?;
    let mut holonomy_order = 1;
    for h in 1..hol.order() {
        let g = pres.holonomy_generator(h);
        let mut e = vec![BigInt::zero(); gens];
        e[g] = BigInt::one();
        let target: IntegerVector = phi(&e).into_iter().map(|x| -x).collect();
        let shift = if r == 0 { Some(vec![BigInt::zero(); n]) } else { solve_integer(&system, &target) };
        if let Some(x) = shift {
            let mut w = Word::letter(g, 1);
            w.append(&pres.lattice_word(&x[..n])?);
            generators.push(w);
            holonomy_order += 1;
        }
    }
    let generator_names = generators.iter().map(|w| pres.display_word(w)).collect();

    let images: Vec<_> = generators.iter().map(|w| w.evaluate(group.generator_images())).collect();
    let (subgroup, basis) = standardize_with_basis(n, &images)?;
    let lattice_idx = lattice_index(&lattice).expect("π' ∩ Z^n has full rank");
    if lattice_idx * BigInt::from(hol.order()) / BigInt::from(holonomy_order) != index {
        return Err(CrystalError::InternalInconsistency(
            "subgroup index disagrees with its coset decomposition".into(),
        )
        .into());
    }

    let verified_direct_product = torus.vectors().iter().all(|t| lattice.contains(t))
        && torus_is_direct_factor(&subgroup, &basis, torus)?;

    Ok(SplittingSubgroup {
        index,
        quotient: moduli,
        generators,
        generator_names,
        lattice,
        holonomy_order,
        subgroup,
        verified_direct_product,
    })
}

/// Whether the torus lattice, rewritten in the coordinates of `π'`, maps
/// onto a direct summand of rank `k` of `H_1(π')`.
fn torus_is_direct_factor(
    subgroup: &CrystalGroup,
    basis: &crate::linalg::RationalMatrix,
    torus: &LatticeBasis,
) -> Result<bool, CrystalError> {
    let k = torus.rank();
    let bg = Bieberbach::new(subgroup.clone())?;
    let p_inv = basis.inverse().expect("lattice basis is invertible");
    let mut rows = Vec::with_capacity(k);
    for t in torus.vectors() {
        let Some(local) = to_integer_vector(&p_inv.mul_vec(&to_rational_vector(t))) else {
            return Ok(false);
        };
        if bg.holonomy().elements().iter().any(|a| a.mul_vec(&local) != local) {
            return Ok(false);
        }
        rows.push(local);
    }
    if k == 0 {
        return Ok(true);
    }
    let h = h1(&bg);
    let gens = bg.presentation().generator_count();
    let images: Vec<IntegerVector> = rows.iter().map(|x| h.nu(&lattice_exponents(x, gens))).collect();
    let s = snf(&IntegerMatrix::from_rows(&images));
    let factors = s.invariant_factors();
    Ok(factors.len() == k && factors.iter().all(One::is_one))
}

/// Validation, invariants, the Calabi certificate, the bounds and the
/// splitting subgroup, collected into one report.
pub fn full_report(name: &str, group: &CrystalGroup) -> FullReport {
    let validation = validate(group);
    let mut report = FullReport::invalid(name, group.dim(), validation);
    if !report.validation.passed() {
        return report;
    }
    let bg = match Bieberbach::new(group.clone()) {
        Ok(bg) => bg,
        Err(e) => {
            report.errors.push(e.to_string());
            return report;
        }
    };
    let homology = h1(&bg);
    let betti = match betti(&bg) {
        Ok(b) => b,
        Err(e) => {
            report.errors.push(e.to_string());
            return report;
        }
    };
    let center = center_rank(&bg);
    let k = homology.free_rank;

    let mut injective = None;
    if k > 0 {
        match certify(&bg, &homology) {
            Ok(cert) => {
                let torus = cert.tilde_b.lattice_basis(bg.dim());
                injective = Some(homology.image_rank(&torus) == k);
                match splitting_subgroup(&bg, &homology, &torus) {
                    Ok(s) => report.splitting_subgroup = Some(s),
                    Err(e) => report.errors.push(e.to_string()),
                }
                report.certificate = Some(cert);
            }
            Err(CalabiError::RankZero) => {}
            Err(e) => {
                injective = Some(false);
                report.errors.push(e.to_string());
            }
        }
    }
    report.hcc = Some(HccVerdict::new(k, &betti, injective, center));
    report.invariants = Some(Invariants { h1: homology, betti, center_rank: center, k });
    report
}
