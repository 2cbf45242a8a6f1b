use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::affine::AffineElement;
use super::group::{generate_holonomy, CrystalGroup, HolonomyGroup};
use super::presentation::{presentation, Presentation};
use super::CrystalError;
use crate::linalg::{solve_integer, to_integer_vector, to_rational_vector, IntegerMatrix, RationalVector};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Check {
    pub fn pass(name: &'static str) -> Self {
        Check { name, passed: true, witness: None }
    }

    pub fn fail(name: &'static str, witness: impl Into<String>) -> Self {
        Check { name, passed: false, witness: Some(witness.into()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "  {:<20} {}", c.name, if c.passed { "pass" } else { "FAIL" })?;
            if let Some(w) = &c.witness {
                write!(f, "  ({w})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A nontrivial element of finite order in the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionWitness {
    pub element: AffineElement,
    pub order: usize,
}

impl fmt::Display for TorsionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "element {} has order {}", self.element, self.order)
    }
}

/// For each nontrivial holonomy element `(A, v)` of order `m`, with
/// `N = I + A + ... + A^{m-1}`: the coset contains an element of finite
/// order iff `N λ = -N v` has an integer solution `λ`.
pub fn torsion_free_check(holonomy: &HolonomyGroup) -> Result<(), TorsionWitness> {
    for g in 1..holonomy.order() {
        let a = holonomy.matrix(g);
        let m = holonomy.element_order(g);
        let n = a.rows();
        let mut norm = IntegerMatrix::zeros(n, n);
        let mut power = IntegerMatrix::identity(n);
        for _ in 0..m {
            norm = norm.add(&power);
            power = power.mul(a);
        }
        let nv = norm.to_rational().mul_vec(holonomy.vector(g));
        let Some(rhs) = to_integer_vector(&nv) else {
            continue;
        };
        let rhs: Vec<BigInt> = rhs.into_iter().map(|x| -x).collect();
        if let Some(lambda) = solve_integer(&norm, &rhs) {
            let mut w = holonomy.vector(g).clone();
            for (x, l) in w.iter_mut().zip(to_rational_vector(&lambda)) {
                *x += l;
            }
            return Err(TorsionWitness { element: AffineElement::from_integer(a, w), order: m });
        }
    }
    Ok(())
}

/// Runs every Bieberbach condition and reports each one.
pub fn validate(group: &CrystalGroup) -> ValidationReport {
    let mut checks = Vec::new();

    let bad = group.holonomy_gens().iter().position(|a| !a.determinant().abs().is_one());
    checks.push(match bad {
        None => Check::pass("lattice_invariance"),
        Some(i) => Check::fail(
            "lattice_invariance",
            format!("generator {} has determinant {}", i + 1, group.holonomy_gens()[i].determinant()),
        ),
    });

    let holonomy = match bad {
        Some(i) => Err(CrystalError::NotUnimodular { generator: i + 1 }),
        None => generate_holonomy(group),
    };
    let holonomy = match holonomy {
        Ok(h) => {
            checks.push(Check::pass("holonomy_finite"));
            h
        }
        Err(e) => {
            checks.push(Check::fail("holonomy_finite", e.to_string()));
            checks.push(Check::fail("cocycle", "skipped: no holonomy closure"));
            checks.push(Check::fail("torsion_free", "skipped: no holonomy closure"));
            return ValidationReport { checks };
        }
    };

    checks.push(match cocycle_defect(&holonomy) {
        None => Check::pass("cocycle"),
        Some((g, h, defect)) => Check::fail(
            "cocycle",
            format!(
                "A_g v_h + v_g - v_gh = {} is not integral for g = {}, h = {}",
                fmt_vec(&defect),
                holonomy.matrix(g),
                holonomy.matrix(h)
            ),
        ),
    });

    checks.push(match torsion_free_check(&holonomy) {
        Ok(()) => Check::pass("torsion_free"),
        Err(w) => Check::fail("torsion_free", w.to_string()),
    });

    ValidationReport { checks }
}

/// First table entry violating `v_{gh} ≡ A_g v_h + v_g (mod Z^n)`.
fn cocycle_defect(holonomy: &HolonomyGroup) -> Option<(usize, usize, RationalVector)> {
    for g in 0..holonomy.order() {
        let a = holonomy.matrix(g).to_rational();
        for h in 0..holonomy.order() {
            let gh = holonomy.product(g, h);
            let mut d = a.mul_vec(holonomy.vector(h));
            for ((x, vg), vgh) in d.iter_mut().zip(holonomy.vector(g)).zip(holonomy.vector(gh)) {
                *x += vg;
                *x -= vgh;
            }
            if !d.iter().all(BigRational::is_integer) {
                return Some((g, h, d));
            }
        }
    }
    None
}

fn fmt_vec(v: &[BigRational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// A crystal group that passed [`validate`], with its holonomy closure and
/// finite presentation.
#[derive(Clone, Debug)]
pub struct Bieberbach {
    group: CrystalGroup,
    holonomy: HolonomyGroup,
    presentation: Presentation,
    images: Vec<AffineElement>,
}

impl Bieberbach {
    pub fn new(group: CrystalGroup) -> Result<Self, CrystalError> {
        let report = validate(&group);
        if !report.passed() {
            return Err(CrystalError::Invalid(report));
        }
        let holonomy = generate_holonomy(&group)?;
        let presentation = presentation(&group, &holonomy)?;
        let images = presentation.tautological_images(&holonomy);
        Ok(Bieberbach { group, holonomy, presentation, images })
    }

    pub fn group(&self) -> &CrystalGroup {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn holonomy(&self) -> &HolonomyGroup {
        &self.holonomy
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    /// Affine images of the presentation generators.
    pub fn generator_images(&self) -> &[AffineElement] {
        &self.images
    }

    pub fn is_orientable(&self) -> bool {
        self.holonomy.elements().iter().all(|a| a.determinant().is_positive())
    }

    /// Whether `elem` is a lattice translate of some coset representative.
    pub fn contains(&self, elem: &AffineElement) -> bool {
        if elem.dim() != self.dim() || !elem.linear().is_integral() {
            return false;
        }
        let a = elem.linear().map(BigRational::to_integer);
        let Some(g) = self.holonomy.find(&a) else {
            return false;
        };
        elem.translation().iter().zip(self.holonomy.vector(g)).all(|(x, v)| (x - v).is_integer())
    }
}

pub fn element_in_group(group: &Bieberbach, elem: &AffineElement) -> bool {
    group.contains(elem)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{int_vec, rat_vec};

    fn klein() -> CrystalGroup {
        CrystalGroup::new(
            2,
            vec![IntegerMatrix::diagonal(&int_vec(&[1, -1]))],
            vec![rat_vec(&[(1, 2), (0, 1)])],
        )
        .unwrap()
    }

    #[test]
    fn klein_bottle_is_bieberbach() {
        let r = validate(&klein());
        assert!(r.passed(), "{r}");
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn point_inversion_has_torsion() {
        let g = CrystalGroup::new(
            2,
            vec![IntegerMatrix::diagonal(&int_vec(&[-1, -1]))],
            vec![rat_vec(&[(0, 1), (0, 1)])],
        )
        .unwrap();
        let r = validate(&g);
        let c = r.first_failure().unwrap();
        assert_eq!(c.name, "torsion_free");
        let h = generate_holonomy(&g).unwrap();
        let w = torsion_free_check(&h).unwrap_err();
        assert_eq!(w.order, 2);
        assert!(w.element.pow(2).is_identity());
        assert!(!w.element.is_identity());
    }

    #[test]
    fn inconsistent_vector_system() {
        // g is a quarter turn and h = g^2 is given a translation that
        // disagrees with v_{g^2} = A v_g + v_g = 0.
        let g = CrystalGroup::new(
            2,
            vec![IntegerMatrix::from_i64(&[&[0, -1], &[1, 0]]), IntegerMatrix::diagonal(&int_vec(&[-1, -1]))],
            vec![rat_vec(&[(0, 1), (0, 1)]), rat_vec(&[(1, 2), (0, 1)])],
        )
        .unwrap();
        let r = validate(&g);
        assert_eq!(r.first_failure().unwrap().name, "cocycle");
    }

    #[test]
    fn klein_torsion_free_by_parity() {
        // N = diag(2, 0); the first coordinate of N(v + λ) is 1 + 2λ_1 ≠ 0.
        let h = generate_holonomy(&klein()).unwrap();
        assert!(torsion_free_check(&h).is_ok());
        assert!(torsion_free_check(&generate_holonomy(&CrystalGroup::torus(3)).unwrap()).is_ok());
    }

    #[test]
    fn membership() {
        let k = Bieberbach::new(klein()).unwrap();
        assert!(element_in_group(&k, &AffineElement::lattice_translation(&int_vec(&[1, 0]))));
        assert!(!element_in_group(&k, &AffineElement::translation_by(rat_vec(&[(1, 2), (0, 1)]))));
        assert!(element_in_group(&k, &AffineElement::identity(2)));
        let glide = AffineElement::from_integer(
            &IntegerMatrix::diagonal(&int_vec(&[1, -1])),
            rat_vec(&[(-1, 2), (3, 1)]),
        );
        assert!(element_in_group(&k, &glide));
    }

    #[test]
    fn orientation() {
        assert!(!Bieberbach::new(klein()).unwrap().is_orientable());
        assert!(Bieberbach::new(CrystalGroup::torus(2)).unwrap().is_orientable());
    }
}
