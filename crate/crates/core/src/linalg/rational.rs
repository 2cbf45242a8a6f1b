use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::matrix::{RationalMatrix, RationalVector};

/// Reduced row echelon form together with the pivot columns.
pub fn rref(m: &RationalMatrix) -> (RationalMatrix, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        let inv = a[(r, c)].recip();
        for j in c..a.cols() {
            a[(r, j)] = a[(r, j)].clone() * &inv;
        }
        for i in 0..a.rows() {
            if i != r && !a[(i, c)].is_zero() {
                let f = -a[(i, c)].clone();
                a.add_row_multiple(i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rank(m: &RationalMatrix) -> usize {
    rref(m).1.len()
}

/// Solution set of `M x = b` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineSolution {
    /// The solution with every free variable set to zero.
    pub particular: RationalVector,
    /// One vector per free variable, sign-normalized so the first nonzero
    /// entry is positive.
    pub kernel: Vec<RationalVector>,
}

pub fn solve_rational(m: &RationalMatrix, b: &[BigRational]) -> Option<AffineSolution> {
    assert_eq!(b.len(), m.rows(), "right-hand side has wrong length");
    let n = m.cols();
    let mut aug = RationalMatrix::zeros(m.rows(), n + 1);
    for i in 0..m.rows() {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n)] = b[i].clone();
    }
    let (red, pivots) = rref(&aug);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut particular = vec![BigRational::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = red[(r, n)].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::from_integer(1.into());
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -red[(r, f)].clone();
            }
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                for x in &mut v {
                    *x = -x.clone();
                }
            }
            v
        })
        .collect();
    Some(AffineSolution { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::{rat, rat_vec, IntegerMatrix};

    fn q(rows: &[&[i64]]) -> RationalMatrix {
        IntegerMatrix::from_i64(rows).to_rational()
    }

    #[test]
    fn identity_system() {
        let s = solve_rational(&q(&[&[1, 0], &[0, 1]]), &rat_vec(&[(1, 2), (1, 3)])).unwrap();
        assert_eq!(s.particular, rat_vec(&[(1, 2), (1, 3)]));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn underdetermined() {
        let s = solve_rational(&q(&[&[1, 1]]), &[rat(1, 1)]).unwrap();
        assert_eq!(s.particular, rat_vec(&[(1, 1), (0, 1)]));
        assert_eq!(s.kernel, vec![rat_vec(&[(1, 1), (-1, 1)])]);
    }

    #[test]
    fn inconsistent() {
        assert!(solve_rational(&q(&[&[1], &[2]]), &[rat(1, 1), rat(1, 1)]).is_none());
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&q(&[&[0, 0]])), 0);
        assert_eq!(rank(&q(&[&[1, 2], &[3, 4]])), 2);
    }
}
