use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::affine::AffineElement;
use super::group::{CrystalGroup, HolonomyGroup};
use super::CrystalError;
use crate::linalg::to_integer_vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: usize,
    pub exponent: i64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn letter(generator: usize, exponent: i64) -> Self {
        Word(vec![Letter { generator, exponent }])
    }

    pub fn push(&mut self, generator: usize, exponent: i64) {
        if exponent != 0 {
            self.0.push(Letter { generator, exponent });
        }
    }

    pub fn append(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| Letter { generator: l.generator, exponent: -l.exponent }).collect())
    }

    /// Exponent sum per generator, i.e. the image in the abelianization.
    pub fn exponent_sums(&self, generators: usize) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); generators];
        for l in &self.0 {
            out[l.generator] += l.exponent;
        }
        out
    }

    /// Evaluates the word with `images[i]` assigned to generator `i`.
    pub fn evaluate(&self, images: &[AffineElement]) -> AffineElement {
        let n = images.first().map_or(0, AffineElement::dim);
        self.0
            .iter()
            .fold(AffineElement::identity(n), |acc, l| acc.compose(&images[l.generator].pow(l.exponent)))
    }
}

/// `⟨ e_1..e_n, g_h (h ≠ 1) | [e_i, e_j], g e_i g^{-1} = A_g e_i,
/// g h = t_{g,h} (gh) ⟩`, where `t_{g,h} = A_g v_h + v_g - v_{gh}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    lattice_rank: usize,
    holonomy_elements: Vec<usize>,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    pub fn generator_count(&self) -> usize {
        self.lattice_rank + self.holonomy_elements.len()
    }

    /// Holonomy element represented by generator `i`, `None` for lattice
    /// generators.
    pub fn holonomy_element(&self, i: usize) -> Option<usize> {
        i.checked_sub(self.lattice_rank).map(|k| self.holonomy_elements[k])
    }

    /// Generator standing for holonomy element `h` (`h ≥ 1`).
    pub fn holonomy_generator(&self, h: usize) -> usize {
        debug_assert!(h >= 1);
        self.lattice_rank + h - 1
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn generator_name(&self, i: usize) -> String {
        match self.holonomy_element(i) {
            None => format!("e{}", i + 1),
            Some(h) => format!("g{h}"),
        }
    }

    /// The word `e_1^{x_1} ... e_n^{x_n}` for a lattice vector.
    pub fn lattice_word(&self, x: &[BigInt]) -> Result<Word, CrystalError> {
        let mut w = Word::default();
        for (i, c) in x.iter().enumerate() {
            let e = i64::try_from(c).map_err(|_| {
                CrystalError::InternalInconsistency(format!("lattice coefficient {c} overflows"))
            })?;
            w.push(i, e);
        }
        Ok(w)
    }

    /// Generator images `e_i ↦ (I, e_i)`, `g_h ↦ (A_h, v_h)`.
    pub fn tautological_images(&self, holonomy: &HolonomyGroup) -> Vec<AffineElement> {
        let n = self.lattice_rank;
        let mut out: Vec<AffineElement> = (0..n)
            .map(|i| {
                let mut e = vec![BigInt::zero(); n];
                e[i] = 1.into();
                AffineElement::lattice_translation(&e)
            })
            .collect();
        out.extend(self.holonomy_elements.iter().map(|&h| holonomy.representative(h)));
        out
    }

    fn holonomy_word(&self, h: usize) -> Word {
        if h == 0 {
            Word::default()
        } else {
            Word::letter(self.holonomy_generator(h), 1)
        }
    }
}

pub fn presentation(group: &CrystalGroup, holonomy: &HolonomyGroup) -> Result<Presentation, CrystalError> {
    let n = group.dim();
    let order = holonomy.order();
    let mut p =
        Presentation { lattice_rank: n, holonomy_elements: (1..order).collect(), relators: Vec::new() };

    for i in 0..n {
        for j in i + 1..n {
            p.relators.push(Word(vec![
                Letter { generator: i, exponent: 1 },
                Letter { generator: j, exponent: 1 },
                Letter { generator: i, exponent: -1 },
                Letter { generator: j, exponent: -1 },
            ]));
        }
    }

    for h in 1..order {
        let g = p.holonomy_generator(h);
        let a = holonomy.matrix(h);
        for i in 0..n {
            let mut w = Word(vec![
                Letter { generator: g, exponent: 1 },
                Letter { generator: i, exponent: 1 },
                Letter { generator: g, exponent: -1 },
            ]);
            w.append(&p.lattice_word(&a.column(i))?.inverse());
            p.relators.push(w);
        }
    }

    for g in 1..order {
        for h in 1..order {
            let gh = holonomy.product(g, h);
            let lhs = holonomy.representative(g).compose(&holonomy.representative(h));
            let t = lhs.compose(&holonomy.representative(gh).inverse());
            let t = match (t.is_translation(), to_integer_vector(t.translation())) {
                (true, Some(t)) => t,
                _ => {
                    return Err(CrystalError::InternalInconsistency(format!(
                        "g{g} g{h} is not a lattice translate of g{gh}"
                    )))
                }
            };
            let mut w = p.holonomy_word(g);
            w.append(&p.holonomy_word(h));
            w.append(&p.holonomy_word(gh).inverse());
            w.append(&p.lattice_word(&t)?.inverse());
            p.relators.push(w);
        }
    }

    let images = p.tautological_images(holonomy);
    for (k, r) in p.relators.iter().enumerate() {
        if !r.evaluate(&images).is_identity() {
            return Err(CrystalError::InternalInconsistency(format!(
                "relator {} ({}) does not evaluate to the identity",
                k + 1,
                p.display_word(r)
            )));
        }
    }
    Ok(p)
}

impl Presentation {
    pub fn display_word(&self, w: &Word) -> String {
        if w.0.is_empty() {
            return "1".into();
        }
        w.0.iter()
            .map(|l| match l.exponent {
                1 => self.generator_name(l.generator),
                e => format!("{}^{e}", self.generator_name(l.generator)),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.generator_count()).map(|i| self.generator_name(i)).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| self.display_word(r)).collect();
        write!(f, "< {} | {} >", gens.join(", "), rels.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::group::generate_holonomy;
    use crate::linalg::{int_vec, rat_vec, IntegerMatrix};

    #[test]
    fn torus_has_only_commutators() {
        let g = CrystalGroup::torus(2);
        let h = generate_holonomy(&g).unwrap();
        let p = presentation(&g, &h).unwrap();
        assert_eq!(p.generator_count(), 2);
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.display_word(&p.relators()[0]), "e1 e2 e1^-1 e2^-1");
    }

    #[test]
    fn klein_bottle_relators() {
        let g = CrystalGroup::new(
            2,
            vec![IntegerMatrix::diagonal(&int_vec(&[1, -1]))],
            vec![rat_vec(&[(1, 2), (0, 1)])],
        )
        .unwrap();
        let h = generate_holonomy(&g).unwrap();
        let p = presentation(&g, &h).unwrap();
        let shown: Vec<String> = p.relators().iter().map(|r| p.display_word(r)).collect();
        assert_eq!(shown, vec!["e1 e2 e1^-1 e2^-1", "g1 e1 g1^-1 e1^-1", "g1 e2 g1^-1 e2", "g1 g1 e1^-1"]);
    }

    #[test]
    fn word_inverse_cancels() {
        let w = Word(vec![Letter { generator: 0, exponent: 2 }, Letter { generator: 1, exponent: -1 }]);
        let mut ww = w.clone();
        ww.append(&w.inverse());
        let images = vec![
            AffineElement::from_integer(
                &IntegerMatrix::diagonal(&int_vec(&[1, -1])),
                rat_vec(&[(1, 2), (0, 1)]),
            ),
            AffineElement::lattice_translation(&int_vec(&[0, 1])),
        ];
        assert!(ww.evaluate(&images).is_identity());
        assert_eq!(ww.exponent_sums(2), int_vec(&[0, 0]));
    }
}
