//! Built-in groups: tori, the Klein bottle, the ten closed flat
//! 3-manifolds and the real Bott family.

use crate::crystal::{bott_bits, bott_matrix_from_bits, from_bott_matrix, CrystalError, CrystalGroup};
use crate::linalg::{rat_vec, IntegerMatrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{name}`; available: {available}")]
    UnknownEntry { name: String, available: String },
    #[error(transparent)]
    BadMatrix(#[from] CrystalError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: String,
    pub description: String,
    pub group: CrystalGroup,
}

type Gen = (&'static [&'static [i64]], &'static [(i64, i64)]);

struct Static {
    name: &'static str,
    description: &'static str,
    gens: &'static [Gen],
}

const ALPHA: Gen = (&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]], &[(1, 2), (0, 1), (0, 1)]);

const HW: &[Gen] = &[
    (&[&[1, 0, 0], &[0, -1, 0], &[0, 0, -1]], &[(1, 2), (1, 2), (0, 1)]),
    (&[&[-1, 0, 0], &[0, 1, 0], &[0, 0, -1]], &[(0, 1), (1, 2), (1, 2)]),
];

const STATIC: &[Static] = &[
    Static { name: "klein", description: "Klein bottle", gens: &[(&[&[1, 0], &[0, -1]], &[(1, 2), (0, 1)])] },
    Static { name: "g1", description: "3-torus", gens: &[] },
    Static { name: "g2", description: "dicosm, half turn", gens: &[ALPHA] },
    Static {
        name: "g3",
        description: "tricosm, third turn",
        gens: &[(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, -1]], &[(1, 3), (0, 1), (0, 1)])],
    },
    Static {
        name: "g4",
        description: "tetracosm, quarter turn",
        gens: &[(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, 0]], &[(1, 4), (0, 1), (0, 1)])],
    },
    Static {
        name: "g5",
        description: "hexacosm, sixth turn",
        gens: &[(&[&[1, 0, 0], &[0, 1, -1], &[0, 1, 0]], &[(1, 6), (0, 1), (0, 1)])],
    },
    Static { name: "g6", description: "didicosm (Hantzsche-Wendt)", gens: HW },
    Static { name: "hantzsche-wendt", description: "Hantzsche-Wendt manifold", gens: HW },
    Static {
        name: "b1",
        description: "first amphicosm",
        gens: &[(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]], &[(1, 2), (0, 1), (0, 1)])],
    },
    Static {
        name: "b2",
        description: "second amphicosm",
        gens: &[(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]], &[(1, 2), (0, 1), (0, 1)])],
    },
    Static {
        name: "b3",
        description: "first amphidicosm",
        gens: &[ALPHA, (&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]], &[(0, 1), (1, 2), (0, 1)])],
    },
    Static {
        name: "b4",
        description: "second amphidicosm",
        gens: &[ALPHA, (&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]], &[(0, 1), (1, 2), (1, 2)])],
    },
];

const MAX_TORUS: usize = 6;

fn build(s: &Static) -> CatalogEntry {
    let dim = s.gens.first().map_or(3, |g| g.0.len());
    let group = CrystalGroup::new(
        dim,
        s.gens.iter().map(|g| IntegerMatrix::from_i64(g.0)).collect(),
        s.gens.iter().map(|g| rat_vec(g.1)).collect(),
    )
    .expect("catalog data is well-formed");
    CatalogEntry { name: s.name.into(), description: s.description.into(), group }
}

/// Names of the built-in entries, sorted.
pub fn list() -> Vec<String> {
    let mut names: Vec<String> = (1..=MAX_TORUS).map(|n| format!("torus{n}")).collect();
    names.extend(STATIC.iter().map(|s| s.name.to_string()));
    names.sort();
    names
}

pub fn get(name: &str) -> Result<CatalogEntry, CatalogError> {
    if let Some(s) = STATIC.iter().find(|s| s.name == name) {
        return Ok(build(s));
    }
    if let Some(n) = name.strip_prefix("torus").and_then(|d| d.parse::<usize>().ok()) {
        if (1..=MAX_TORUS).contains(&n) {
            return Ok(CatalogEntry {
                name: name.into(),
                description: format!("{n}-torus"),
                group: CrystalGroup::torus(n),
            });
        }
    }
    if let Some(entry) = parse_bott_name(name) {
        return entry;
    }
    Err(CatalogError::UnknownEntry { name: name.into(), available: list().join(", ") })
}

/// Every entry of [`list`], in order.
pub fn all() -> Vec<CatalogEntry> {
    list().iter().map(|n| get(n).expect("listed entries exist")).collect()
}

/// `bott<n>` or `bott<n>-<bits>`, bits in row-major order of the strict
/// upper triangle.
fn parse_bott_name(name: &str) -> Option<Result<CatalogEntry, CatalogError>> {
    let rest = name.strip_prefix("bott")?;
    let (n, bits) = rest.split_once('-').unwrap_or((rest, ""));
    let n: usize = n.parse().ok()?;
    let bits = parse_bits(bits)?;
    Some(bott(n, &bits))
}

pub fn parse_bits(s: &str) -> Option<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Some(false),
            '1' => Some(true),
            _ => None,
        })
        .collect()
}

pub fn bott_name(n: usize, bits: &[bool]) -> String {
    if bits.is_empty() {
        format!("bott{n}")
    } else {
        let s: String = bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        format!("bott{n}-{s}")
    }
}

/// The real Bott group of the `n x n` matrix with the given upper-triangle bits.
pub fn bott(n: usize, bits: &[bool]) -> Result<CatalogEntry, CatalogError> {
    let m = bott_matrix_from_bits(n, bits)?;
    bott_from_matrix(&m)
}

pub fn bott_from_matrix(m: &IntegerMatrix) -> Result<CatalogEntry, CatalogError> {
    let group = from_bott_matrix(m)?;
    let n = m.rows();
    Ok(CatalogEntry {
        name: bott_name(n, &bott_bits(m)),
        description: format!("real Bott manifold of dimension {n}"),
        group,
    })
}

/// All `2^{n(n-1)/2}` real Bott groups of dimension `n`.
pub fn all_bott(n: usize) -> Vec<CatalogEntry> {
    let free = n * n.saturating_sub(1) / 2;
    (0u64..1 << free)
        .map(|mask| {
            let bits: Vec<bool> = (0..free).map(|i| mask >> (free - 1 - i) & 1 == 1).collect();
            bott(n, &bits).expect("bit patterns are valid Bott matrices")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::validate;
    use crate::linalg::int_vec;

    #[test]
    fn list_is_sorted_and_complete() {
        let names = list();
        assert_eq!(names.len(), 18);
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert!(names.contains(&"hantzsche-wendt".to_string()));
    }

    #[test]
    fn every_entry_validates() {
        for e in all() {
            let r = validate(&e.group);
            assert!(r.passed(), "{}: {r}", e.name);
        }
    }

    #[test]
    fn klein_data() {
        let k = get("klein").unwrap().group;
        assert_eq!(k.holonomy_gens(), &[IntegerMatrix::diagonal(&int_vec(&[1, -1]))]);
        assert_eq!(k.vectors(), &[rat_vec(&[(1, 2), (0, 1)])]);
        assert_eq!(get("torus3").unwrap().group, CrystalGroup::torus(3));
        assert_eq!(get("g1").unwrap().group, CrystalGroup::torus(3));
    }

    #[test]
    fn unknown_entry_lists_names() {
        let e = get("g7").unwrap_err();
        assert!(matches!(&e, CatalogError::UnknownEntry { available, .. } if available.contains("klein")));
        assert!(get("torus7").is_err());
    }

    #[test]
    fn bott_entries() {
        assert_eq!(get("bott2-0").unwrap().group, CrystalGroup::torus(2));
        assert_eq!(get("bott2-1").unwrap().group, get("klein").unwrap().group);
        assert_eq!(get("bott3-110").unwrap().name, "bott3-110");
        assert_eq!(get("bott1").unwrap().group, CrystalGroup::torus(1));
        assert!(matches!(get("bott3-11"), Err(CatalogError::BadMatrix(_))));
        assert_eq!(all_bott(4).len(), 64);
        assert_eq!(all_bott(3)[0].name, "bott3-000");
    }
}
