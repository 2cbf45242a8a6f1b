//! The Calabi construction: an adapted splitting `Z^n = Z^{n-k} ⊕ B`, a
//! faithful block-affine representation `ρ` of `π`, and the translation
//! subgroup `B̃` whose image spans the `T^k`-action.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::ser::{SerializeMap, SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::crystal::{AffineElement, Bieberbach, Check, CrystalError, Letter, Word};
use crate::linalg::{
    complement_in_lattice, denominator_lcm, kernel_lattice, lattice_index, rank, solve_rational,
    to_integer_vector, IntegerMatrix, IntegerVector, LatticeBasis, LinalgError, RationalMatrix,
    RationalVector,
};
use crate::serde_util::{Int, IntRow, RatRow};
use crate::topology::{h1, HomologyH1};

/// Number of words in the faithfulness sample.
pub const FAITHFUL_SAMPLE_SIZE: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalabiError {
    #[error("H_1 has free rank 0; there is no torus to act")]
    RankZero,
    #[error("conjugation by {generator} is not block upper-triangular with identity bottom block")]
    BlockStructureViolation { generator: String },
    #[error("the translation equations have no solution (relator {relator})")]
    NoSolution { relator: String },
    #[error("image of B̃ generator {index} is not a translation in the last k coordinates")]
    NotTranslation { index: usize },
    #[error("check `{check}` failed: {witness}")]
    CheckFailed { check: &'static str, witness: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Crystal(#[from] CrystalError),
}

/// `Z^n = K ⊕ B` with `K = ker ν|_{Z^n}` and `ν|_B` injective onto `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSplitting {
    pub k: usize,
    pub kernel_basis: LatticeBasis,
    pub complement_basis: LatticeBasis,
    /// `A = ν(Z^n) ⊆ Z^k`.
    pub image_lattice: LatticeBasis,
    pub image_index: BigInt,
    /// Columns: kernel basis, then complement basis.
    pub change_of_basis: IntegerMatrix,
    pub change_of_basis_inv: IntegerMatrix,
    /// `ν` on the lattice generators, `k x n`.
    pub nu: IntegerMatrix,
}

impl LatticeSplitting {
    pub fn dim(&self) -> usize {
        self.change_of_basis.rows()
    }

    /// Lattice vector in adapted coordinates `(y_K, y_B)`.
    pub fn adapted(&self, x: &[BigInt]) -> IntegerVector {
        self.change_of_basis_inv.mul_vec(x)
    }

    /// `ν` restricted to the complement, in complement coordinates.
    pub fn nu_on_complement(&self) -> IntegerMatrix {
        let n = self.dim();
        self.nu.mul(&self.change_of_basis).block(0, self.k, n - self.k, n)
    }
}

pub fn split_lattice(group: &Bieberbach, h1: &HomologyH1) -> Result<LatticeSplitting, CalabiError> {
    let k = h1.free_rank;
    if k == 0 {
        return Err(CalabiError::RankZero);
    }
    let n = group.dim();
    let nu = h1.lattice_projection(n);
    let kernel_basis = kernel_lattice(&nu);
    let complement_basis = complement_in_lattice(&kernel_basis, &nu)?;
    let image_lattice = LatticeBasis::from_generators(k, &nu.transpose().to_rows());
    let image_index = lattice_index(&image_lattice).ok_or_else(|| {
        CrystalError::InternalInconsistency(format!("ν(Z^n) has rank {} < {k}", image_lattice.rank()))
    })?;
    let columns: Vec<IntegerVector> =
        kernel_basis.vectors().iter().chain(complement_basis.vectors()).cloned().collect();
    let change_of_basis = IntegerMatrix::from_columns(n, &columns);
    let change_of_basis_inv = change_of_basis
        .inverse()
        .ok_or_else(|| CrystalError::InternalInconsistency("kernel and complement do not span Z^n".into()))?;
    Ok(LatticeSplitting {
        k,
        kernel_basis,
        complement_basis,
        image_lattice,
        image_index,
        change_of_basis,
        change_of_basis_inv,
        nu,
    })
}

/// Conjugation action of each holonomy element in adapted coordinates,
/// `C^{-1} A C = [[φ̄, ψ], [0, I_k]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugationBlocks {
    pub phi_bar: Vec<IntegerMatrix>,
    pub psi: Vec<IntegerMatrix>,
}

pub fn conjugation_blocks(
    group: &Bieberbach,
    splitting: &LatticeSplitting,
) -> Result<ConjugationBlocks, CalabiError> {
    let n = group.dim();
    let m = n - splitting.k;
    let hol = group.holonomy();
    let mut phi_bar = Vec::with_capacity(hol.order());
    let mut psi = Vec::with_capacity(hol.order());
    for h in 0..hol.order() {
        let adapted = splitting.change_of_basis_inv.mul(hol.matrix(h)).mul(&splitting.change_of_basis);
        if !adapted.block(m, n, 0, m).is_zero() || !adapted.block(m, n, m, n).is_identity() {
            return Err(CalabiError::BlockStructureViolation {
                generator: group.presentation().generator_name(holonomy_gen(group, h)),
            });
        }
        phi_bar.push(adapted.block(0, m, 0, m));
        psi.push(adapted.block(0, m, m, n));
    }
    Ok(ConjugationBlocks { phi_bar, psi })
}

fn holonomy_gen(group: &Bieberbach, h: usize) -> usize {
    if h == 0 {
        0
    } else {
        group.presentation().holonomy_generator(h)
    }
}

/// Images of the presentation generators in adapted coordinates, each with
/// linear part `diag(φ̄, I_k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRepresentation {
    pub k: usize,
    pub names: Vec<String>,
    pub images: Vec<AffineElement>,
}

impl BlockRepresentation {
    fn split(&self) -> usize {
        self.images.first().map_or(0, AffineElement::dim) - self.k
    }

    pub fn phi_bar(&self, i: usize) -> RationalMatrix {
        let m = self.split();
        self.images[i].linear().block(0, m, 0, m)
    }

    /// `λ(α)` plus the `Z^{n-k}` part.
    pub fn top_translation(&self, i: usize) -> RationalVector {
        self.images[i].translation()[..self.split()].to_vec()
    }

    /// `ν̂(α)`.
    pub fn bottom_translation(&self, i: usize) -> IntegerVector {
        to_integer_vector(&self.images[i].translation()[self.split()..])
            .expect("bottom translations are integral")
    }
}

impl Serialize for BlockRepresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            generator: &'a str,
            #[serde(serialize_with = "crate::serde_util::rat_rows")]
            phi_bar: Vec<RationalVector>,
            #[serde(serialize_with = "crate::serde_util::rat_list")]
            top: RationalVector,
            #[serde(serialize_with = "crate::serde_util::int_list")]
            bottom: IntegerVector,
        }
        let mut seq = s.serialize_seq(Some(self.images.len()))?;
        for i in 0..self.images.len() {
            seq.serialize_element(&Entry {
                generator: &self.names[i],
                phi_bar: self.phi_bar(i).to_rows(),
                top: self.top_translation(i),
                bottom: self.bottom_translation(i),
            })?;
        }
        seq.end()
    }
}

/// The solved translation cochain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaSolution {
    /// Top translation of `ρ(g_h)` per holonomy element (zero at the identity).
    pub mu: Vec<RationalVector>,
    /// `λ` on the complement basis, `(n-k) x k`.
    pub on_complement: RationalMatrix,
}

/// A word's image with translation linear in the unknowns: column `j < u`
/// holds the coefficient of unknown `j`, the last column the constant.
#[derive(Clone)]
struct Symbolic {
    linear: RationalMatrix,
    trans: RationalMatrix,
}

impl Symbolic {
    fn identity(n: usize, unknowns: usize) -> Self {
        Symbolic { linear: RationalMatrix::identity(n), trans: RationalMatrix::zeros(n, unknowns + 1) }
    }

    fn compose(&self, rhs: &Symbolic) -> Symbolic {
        Symbolic { linear: self.linear.mul(&rhs.linear), trans: self.linear.mul(&rhs.trans).add(&self.trans) }
    }

    fn inverse(&self) -> Symbolic {
        let inv = self.linear.inverse().expect("block linear parts are invertible");
        let minus_one = -BigRational::one();
        Symbolic { trans: inv.mul(&self.trans).scale(&minus_one), linear: inv }
    }
}

fn evaluate_symbolic(word: &Word, gens: &[Symbolic], inverses: &[Symbolic]) -> Symbolic {
    let (n, cols) = (gens[0].trans.rows(), gens[0].trans.cols());
    let mut acc = Symbolic::identity(n, cols - 1);
    for l in &word.0 {
        let g = if l.exponent > 0 { &gens[l.generator] } else { &inverses[l.generator] };
        for _ in 0..l.exponent.unsigned_abs() {
            acc = acc.compose(g);
        }
    }
    acc
}

/// Solves for `λ` so that `ρ` respects every relator, taking the particular
/// solution with all free unknowns zero.
///
/// Unknowns, in order: the top translation `μ(h)` of each `ρ(g_h)`, then the
/// entries of `λ` on the complement basis (row-major). A lattice vector with
/// adapted coordinates `(y_K, y_B)` maps to the translation
/// `(y_K + λ y_B, ν(y))`, so `λ` is additive on `B` by construction.
pub fn solve_lambda(
    group: &Bieberbach,
    h1: &HomologyH1,
    splitting: &LatticeSplitting,
    blocks: &ConjugationBlocks,
) -> Result<(LambdaSolution, BlockRepresentation), CalabiError> {
    let n = group.dim();
    let k = splitting.k;
    let m = n - k;
    let order = group.holonomy().order();
    let pres = group.presentation();
    let gens = pres.generator_count();
    let mu_var = |h: usize, r: usize| (h - 1) * m + r;
    let l_var = |r: usize, j: usize| (order - 1) * m + r * k + j;
    let u = (order - 1) * m + m * k;

    let mut symbolic = Vec::with_capacity(gens);
    for i in 0..gens {
        let mut trans = RationalMatrix::zeros(n, u + 1);
        for j in 0..k {
            trans[(m + j, u)] = BigRational::from_integer(h1.projection[(i, j)].clone());
        }
        let linear = match pres.holonomy_element(i) {
            None => {
                let y = splitting.change_of_basis_inv.column(i);
                for r in 0..m {
                    trans[(r, u)] = BigRational::from_integer(y[r].clone());
                    for j in 0..k {
                        trans[(r, l_var(r, j))] = BigRational::from_integer(y[m + j].clone());
                    }
                }
                RationalMatrix::identity(n)
            }
            Some(h) => {
                for r in 0..m {
                    trans[(r, mu_var(h, r))] = BigRational::one();
                }
                block_diagonal(&blocks.phi_bar[h], k)
            }
        };
        symbolic.push(Symbolic { linear, trans });
    }
    let inverses: Vec<Symbolic> = symbolic.iter().map(Symbolic::inverse).collect();

    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let mut rhs: Vec<BigRational> = Vec::new();
    let mut seen = HashSet::new();
    for relator in pres.relators() {
        let image = evaluate_symbolic(relator, &symbolic, &inverses);
        let fail = || CalabiError::NoSolution { relator: pres.display_word(relator) };
        if !image.linear.is_identity() {
            return Err(fail());
        }
        for r in 0..n {
            let row = image.trans.row(r);
            let (coeffs, constant) = row.split_at(u);
            match coeffs.iter().position(|c| !c.is_zero()) {
                None if constant[0].is_zero() => {}
                None => return Err(fail()),
                Some(_) if r >= m => return Err(fail()),
                Some(lead) => {
                    let scale = coeffs[lead].clone();
                    let key: Vec<BigRational> = row.iter().map(|x| x / &scale).collect();
                    if seen.insert(key) {
                        rows.push(coeffs.to_vec());
                        rhs.push(-constant[0].clone());
                    }
                }
            }
        }
    }

    let x = if rows.is_empty() {
        vec![BigRational::zero(); u]
    } else {
        let system = RationalMatrix::from_rows(&rows);
        match solve_rational(&system, &rhs) {
            Some(sol) => sol.particular,
            None => {
                return Err(CalabiError::NoSolution {
                    relator: first_inconsistent_relator(group, &symbolic, &inverses, u),
                })
            }
        }
    };

    let images: Vec<AffineElement> = symbolic
        .iter()
        .map(|s| {
            let t: RationalVector = (0..n)
                .map(|r| {
                    let row = s.trans.row(r);
                    row[..u].iter().zip(&x).map(|(c, v)| c * v).sum::<BigRational>() + &row[u]
                })
                .collect();
            AffineElement::new(s.linear.clone(), t)
        })
        .collect();

    let mut mu = vec![vec![BigRational::zero(); m]];
    mu.extend((1..order).map(|h| (0..m).map(|r| x[mu_var(h, r)].clone()).collect::<Vec<_>>()));
    let on_complement = RationalMatrix::from_vec(
        m,
        k,
        (0..m).flat_map(|r| (0..k).map(move |j| (r, j))).map(|(r, j)| x[l_var(r, j)].clone()).collect(),
    );
    let names = (0..gens).map(|i| pres.generator_name(i)).collect();
    Ok((LambdaSolution { mu, on_complement }, BlockRepresentation { k, names, images }))
}

fn first_inconsistent_relator(
    group: &Bieberbach,
    symbolic: &[Symbolic],
    inverses: &[Symbolic],
    u: usize,
) -> String {
    let pres = group.presentation();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for relator in pres.relators() {
        let image = evaluate_symbolic(relator, symbolic, inverses);
        for r in 0..image.trans.rows() {
            let row = image.trans.row(r);
            rows.push(row[..u].to_vec());
            rhs.push(-row[u].clone());
        }
        if solve_rational(&RationalMatrix::from_rows(&rows), &rhs).is_none() {
            return pres.display_word(relator);
        }
    }
    "unknown".into()
}

fn block_diagonal(top: &IntegerMatrix, k: usize) -> RationalMatrix {
    let m = top.rows();
    let mut out = RationalMatrix::identity(m + k);
    for i in 0..m {
        for j in 0..m {
            out[(i, j)] = BigRational::from_integer(top[(i, j)].clone());
        }
    }
    out
}

/// `B̃ = {(-ℓ λ(β), ℓ β) : β ∈ B}` and its images under `ρ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeB {
    pub ell: BigInt,
    /// Generators as vectors of the standard lattice.
    pub lattice: Vec<IntegerVector>,
    pub images: Vec<AffineElement>,
}

impl TildeB {
    pub fn lattice_basis(&self, n: usize) -> LatticeBasis {
        LatticeBasis::from_generators(n, &self.lattice)
    }
}

impl Serialize for TildeB {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            lattice_vector: IntRow<'a>,
            translation: RatRow<'a>,
        }
        let mut seq = s.serialize_seq(Some(self.lattice.len()))?;
        for (v, img) in self.lattice.iter().zip(&self.images) {
            seq.serialize_element(&Entry {
                lattice_vector: IntRow(v),
                translation: RatRow(img.translation()),
            })?;
        }
        seq.end()
    }
}

/// Builds `B̃` with `ℓ` the least common denominator of `λ` on the
/// complement basis, and checks that every `ρ(B̃)` generator is the
/// translation `(0, ℓ ν(β))`.
pub fn build_tilde_b(
    group: &Bieberbach,
    rho: &BlockRepresentation,
    lambda: &LambdaSolution,
    splitting: &LatticeSplitting,
) -> Result<TildeB, CalabiError> {
    let n = group.dim();
    let k = splitting.k;
    let m = n - k;
    let ell = denominator_lcm(lambda.on_complement.entries());
    let ell_q = BigRational::from_integer(ell.clone());
    let nu_b = splitting.nu_on_complement();
    let mut lattice = Vec::with_capacity(k);
    let mut images = Vec::with_capacity(k);
    for j in 0..k {
        let mut y: RationalVector = (0..m).map(|r| -&ell_q * &lambda.on_complement[(r, j)]).collect();
        y.extend((0..k).map(|i| if i == j { ell_q.clone() } else { BigRational::zero() }));
        let y = to_integer_vector(&y).ok_or(CalabiError::NotTranslation { index: j + 1 })?;
        let x = splitting.change_of_basis.mul_vec(&y);
        let image = group.presentation().lattice_word(&x)?.evaluate(&rho.images);
        let expected: RationalVector = std::iter::repeat_n(BigRational::zero(), m)
            .chain(nu_b.column(j).iter().map(|v| BigRational::from_integer(v * &ell)))
            .collect();
        if !image.is_translation() || image.translation() != &expected {
            return Err(CalabiError::NotTranslation { index: j + 1 });
        }
        lattice.push(x);
        images.push(image);
    }
    Ok(TildeB { ell, lattice, images })
}

/// A generator image that fails to commute with a basis translation of `0 × R^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CentralizerWitness {
    pub generator: usize,
    pub direction: usize,
}

impl fmt::Display for CentralizerWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "generator {} does not commute with t_{}", self.generator + 1, self.direction + 1)
    }
}

/// Every translation in `0 × R^k` commutes with every `ρ`-generator.
pub fn centralizer_check(rho: &BlockRepresentation) -> Result<(), CentralizerWitness> {
    let Some(first) = rho.images.first() else {
        return Ok(());
    };
    let n = first.dim();
    for j in 0..rho.k {
        let mut e = vec![BigInt::zero(); n];
        e[n - rho.k + j] = BigInt::one();
        let t = AffineElement::lattice_translation(&e);
        for (i, r) in rho.images.iter().enumerate() {
            if r.compose(&t) != t.compose(r) {
                return Err(CentralizerWitness { generator: i, direction: j });
            }
        }
    }
    Ok(())
}

/// The last-`k` translation parts of the given images span `Q^k`.
pub fn cocompactness_check(k: usize, images: &[AffineElement]) -> bool {
    if images.is_empty() {
        return k == 0;
    }
    let rows: Vec<RationalVector> = images.iter().map(|g| g.translation()[g.dim() - k..].to_vec()).collect();
    rank(&RationalMatrix::from_rows(&rows)) == k
}

/// Every relator maps to the identity under `ρ`.
pub fn rho_homomorphism(group: &Bieberbach, rho: &BlockRepresentation) -> Result<(), String> {
    let pres = group.presentation();
    match pres.relators().iter().find(|r| !r.evaluate(&rho.images).is_identity()) {
        None => Ok(()),
        Some(r) => Err(format!("relator {} does not map to the identity", pres.display_word(r))),
    }
}

/// The first `count` freely reduced words in shortlex order over the
/// letters `x_0, x_0^{-1}, x_1, x_1^{-1}, ...`.
pub fn sample_words(generators: usize, count: usize) -> Vec<Word> {
    let letters: Vec<Letter> = (0..generators)
        .flat_map(|g| [Letter { generator: g, exponent: 1 }, Letter { generator: g, exponent: -1 }])
        .collect();
    let mut out = vec![Word::default()];
    let mut frontier = vec![Word::default()];
    while out.len() < count && !letters.is_empty() {
        let mut next = Vec::new();
        for w in &frontier {
            for l in &letters {
                if w.0.last().is_some_and(|p| p.generator == l.generator && p.exponent == -l.exponent) {
                    continue;
                }
                let mut v = w.clone();
                v.0.push(*l);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out.truncate(count);
    out
}

/// On a sample of words, equal elements of `π` have equal `ρ`-images and
/// distinct elements have distinct images.
pub fn rho_faithful_sample(
    group: &Bieberbach,
    rho: &BlockRepresentation,
    count: usize,
) -> Result<usize, String> {
    let pres = group.presentation();
    let mut forward: HashMap<AffineElement, (AffineElement, usize)> = HashMap::new();
    let mut backward: HashMap<AffineElement, (AffineElement, usize)> = HashMap::new();
    let words = sample_words(pres.generator_count(), count);
    for (i, w) in words.iter().enumerate() {
        let a = w.evaluate(group.generator_images());
        let b = w.evaluate(&rho.images);
        if let Some((prev, j)) = forward.get(&a) {
            if *prev != b {
                return Err(format!(
                    "words `{}` and `{}` are equal in π but not under ρ",
                    pres.display_word(&words[*j]),
                    pres.display_word(w)
                ));
            }
        }
        if let Some((prev, j)) = backward.get(&b) {
            if *prev != a {
                return Err(format!(
                    "words `{}` and `{}` are distinct in π but equal under ρ",
                    pres.display_word(&words[*j]),
                    pres.display_word(w)
                ));
            }
        }
        forward.insert(a.clone(), (b.clone(), i));
        backward.insert(b, (a, i));
    }
    Ok(words.len())
}

/// Everything needed to reconstruct and re-check the `T^k`-action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusActionCertificate {
    pub k: usize,
    pub splitting: LatticeSplitting,
    pub blocks: ConjugationBlocks,
    pub rho: BlockRepresentation,
    pub lambda: LambdaSolution,
    pub tilde_b: TildeB,
    pub checks: Vec<Check>,
}

impl TorusActionCertificate {
    pub fn ell(&self) -> &BigInt {
        &self.tilde_b.ell
    }

    /// Generator name and top translation of its `ρ`-image.
    pub fn lambda_values(&self) -> Vec<(String, RationalVector)> {
        (0..self.rho.images.len()).map(|i| (self.rho.names[i].clone(), self.rho.top_translation(i))).collect()
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

struct LambdaMap<'a>(&'a TorusActionCertificate);

impl Serialize for LambdaMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let values = self.0.lambda_values();
        let mut map = s.serialize_map(Some(values.len()))?;
        for (name, v) in &values {
            map.serialize_entry(name, &RatRow(v))?;
        }
        map.end()
    }
}

impl Serialize for TorusActionCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TorusActionCertificate", 8)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("kernel_basis", &self.splitting.kernel_basis)?;
        st.serialize_field("complement_basis", &self.splitting.complement_basis)?;
        st.serialize_field("image_index", &Int(&self.splitting.image_index))?;
        st.serialize_field("lambda", &LambdaMap(self))?;
        st.serialize_field("ell", &Int(&self.tilde_b.ell))?;
        st.serialize_field("tilde_B", &self.tilde_b)?;
        st.serialize_field("checks", &self.checks)?;
        st.end()
    }
}

/// Runs the whole construction and records every check, passing or not.
pub fn certify(group: &Bieberbach, h1: &HomologyH1) -> Result<TorusActionCertificate, CalabiError> {
    let splitting = split_lattice(group, h1)?;
    let k = splitting.k;
    let blocks = conjugation_blocks(group, &splitting)?;
    let (lambda, rho) = solve_lambda(group, h1, &splitting, &blocks)?;
    let tilde_b = build_tilde_b(group, &rho, &lambda, &splitting)?;

    let mut checks = Vec::new();
    checks.push(match rho_homomorphism(group, &rho) {
        Ok(()) => Check::pass("rho_homomorphism"),
        Err(w) => Check::fail("rho_homomorphism", w),
    });
    checks.push(match rho_faithful_sample(group, &rho, FAITHFUL_SAMPLE_SIZE) {
        Ok(_) => Check::pass("rho_faithful_sample"),
        Err(w) => Check::fail("rho_faithful_sample", w),
    });
    let scaled = lambda.on_complement.scale(&BigRational::from_integer(tilde_b.ell.clone()));
    checks.push(if scaled.is_integral() && tilde_b.images.iter().all(AffineElement::is_translation) {
        Check::pass("tilde_B_translations")
    } else {
        Check::fail("tilde_B_translations", "ℓ·λ is not integral on the complement basis")
    });
    checks.push(match centralizer_check(&rho) {
        Ok(()) => Check::pass("centralizer"),
        Err(w) => Check::fail("centralizer", w.to_string()),
    });
    checks.push(if cocompactness_check(k, &tilde_b.images) {
        Check::pass("cocompact")
    } else {
        Check::fail("cocompact", "ρ(B̃) translations do not span R^k")
    });
    let image_rank = h1.image_rank(&tilde_b.lattice_basis(group.dim()));
    checks.push(if image_rank == k {
        Check::pass("homological_injectivity")
    } else {
        Check::fail("homological_injectivity", format!("B̃ has image rank {image_rank} < {k} in H_1"))
    });

    Ok(TorusActionCertificate { k, splitting, blocks, rho, lambda, tilde_b, checks })
}

/// The certificate of a homologically injective `T^k`-action with
/// `k = rank H_1`, or the first failing check.
pub fn torus_action(group: &Bieberbach) -> Result<TorusActionCertificate, CalabiError> {
    let cert = certify(group, &h1(group))?;
    if let Some(c) = cert.first_failure() {
        return Err(CalabiError::CheckFailed {
            check: c.name,
            witness: c.witness.clone().unwrap_or_default(),
        });
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::CrystalGroup;
    use crate::linalg::{int_vec, rat, rat_vec};

    fn bieberbach(dim: usize, gens: &[IntegerMatrix], vecs: &[RationalVector]) -> Bieberbach {
        Bieberbach::new(CrystalGroup::new(dim, gens.to_vec(), vecs.to_vec()).unwrap()).unwrap()
    }

    fn klein() -> Bieberbach {
        bieberbach(2, &[IntegerMatrix::diagonal(&int_vec(&[1, -1]))], &[rat_vec(&[(1, 2), (0, 1)])])
    }

    /// Holonomy swapping `e_1 + e_2` and `e_2` up to sign, with a half glide
    /// along `e_3`; `λ` on the complement has denominator 2.
    fn skew() -> Bieberbach {
        bieberbach(
            3,
            &[IntegerMatrix::from_i64(&[&[-1, 1, 0], &[0, 1, 0], &[0, 0, 1]])],
            &[rat_vec(&[(0, 1), (0, 1), (1, 2)])],
        )
    }

    fn g2() -> Bieberbach {
        bieberbach(
            3,
            &[IntegerMatrix::diagonal(&int_vec(&[1, -1, -1]))],
            &[rat_vec(&[(1, 2), (0, 1), (0, 1)])],
        )
    }

    #[test]
    fn splitting_of_torus() {
        let t = Bieberbach::new(CrystalGroup::torus(3)).unwrap();
        let s = split_lattice(&t, &h1(&t)).unwrap();
        assert_eq!(s.kernel_basis.rank(), 0);
        assert_eq!(s.complement_basis, LatticeBasis::standard(3));
        assert_eq!(s.image_index, BigInt::one());
    }

    #[test]
    fn splitting_of_klein_bottle() {
        let k = klein();
        let s = split_lattice(&k, &h1(&k)).unwrap();
        assert_eq!(s.kernel_basis.vectors(), &[int_vec(&[0, 1])]);
        assert_eq!(s.complement_basis.vectors(), &[int_vec(&[1, 0])]);
        assert_eq!(s.image_index, BigInt::from(2));
        let b = conjugation_blocks(&k, &s).unwrap();
        assert_eq!(b.phi_bar[1], IntegerMatrix::from_i64(&[&[-1]]));
        assert!(b.psi[1].is_zero());
    }

    #[test]
    fn splitting_of_g2() {
        let g = g2();
        let s = split_lattice(&g, &h1(&g)).unwrap();
        assert_eq!((s.kernel_basis.rank(), s.complement_basis.rank()), (2, 1));
    }

    #[test]
    fn rank_zero() {
        let hw = bieberbach(
            3,
            &[
                IntegerMatrix::diagonal(&int_vec(&[1, -1, -1])),
                IntegerMatrix::diagonal(&int_vec(&[-1, 1, -1])),
            ],
            &[rat_vec(&[(1, 2), (1, 2), (0, 1)]), rat_vec(&[(0, 1), (1, 2), (1, 2)])],
        );
        assert_eq!(torus_action(&hw), Err(CalabiError::RankZero));
    }

    #[test]
    fn klein_bottle_certificate() {
        let cert = torus_action(&klein()).unwrap();
        assert_eq!(cert.k, 1);
        assert_eq!(cert.ell(), &BigInt::one());
        assert!(cert.lambda.on_complement.is_zero());
        // ρ(g): x ↦ -x, w ↦ w + 1.
        let g = &cert.rho.images[2];
        assert_eq!(
            g,
            &AffineElement::from_integer(
                &IntegerMatrix::diagonal(&int_vec(&[-1, 1])),
                rat_vec(&[(0, 1), (1, 1)])
            )
        );
        assert_eq!(cert.tilde_b.lattice, vec![int_vec(&[1, 0])]);
        assert_eq!(cert.tilde_b.images[0].translation(), &rat_vec(&[(0, 1), (2, 1)]));
        assert_eq!(cert.checks.len(), 6);
    }

    #[test]
    fn torus_certificate() {
        let t = Bieberbach::new(CrystalGroup::torus(2)).unwrap();
        let cert = torus_action(&t).unwrap();
        assert_eq!(cert.k, 2);
        assert_eq!(cert.ell(), &BigInt::one());
        assert_eq!(cert.tilde_b.lattice, vec![int_vec(&[1, 0]), int_vec(&[0, 1])]);
    }

    #[test]
    fn half_integral_lambda_gives_ell_two() {
        let g = skew();
        let cert = torus_action(&g).unwrap();
        assert_eq!(cert.k, 2);
        assert_eq!(cert.ell(), &BigInt::from(2));
        assert_eq!(cert.lambda.on_complement.row(0)[0], rat(-1, 2));
        assert!(cert.lambda.on_complement.scale(&rat(2, 1)).is_integral());
    }

    #[test]
    fn corrupted_rho_fails_centralizer() {
        let mut cert = torus_action(&klein()).unwrap();
        cert.rho.images[2] = AffineElement::from_integer(
            &IntegerMatrix::diagonal(&int_vec(&[-1, -1])),
            rat_vec(&[(0, 1), (1, 1)]),
        );
        let w = centralizer_check(&cert.rho).unwrap_err();
        assert_eq!(w, CentralizerWitness { generator: 2, direction: 0 });
    }

    #[test]
    fn cocompactness_negative_control() {
        let t = AffineElement::translation_by(rat_vec(&[(0, 1), (1, 1), (2, 1)]));
        let u = AffineElement::translation_by(rat_vec(&[(5, 1), (2, 1), (4, 1)]));
        assert!(!cocompactness_check(2, &[t.clone(), u]));
        assert!(cocompactness_check(1, &[t]));
    }

    #[test]
    fn sample_is_shortlex() {
        let w = sample_words(2, 10);
        assert_eq!(w.len(), 10);
        assert!(w[0].0.is_empty());
        assert_eq!(w[1], Word::letter(0, 1));
        assert_eq!(
            w[5],
            Word(vec![Letter { generator: 0, exponent: 1 }, Letter { generator: 0, exponent: 1 }])
        );
        assert_eq!(sample_words(1, 100).len(), 100);
    }
}
