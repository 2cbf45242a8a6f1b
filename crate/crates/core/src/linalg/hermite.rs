use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntegerMatrix;

/// Row-style Hermite normal form: `u * m = h`, `u` unimodular.
///
/// Nonzero rows of `h` come first, pivots are positive and strictly move
/// right, and entries above a pivot lie in `[0, pivot)`.
#[derive(Clone, Debug)]
pub struct HermiteForm {
    pub h: IntegerMatrix,
    pub u: IntegerMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl HermiteForm {
    pub fn nonzero_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank).map(|i| self.h.row(i).to_vec()).collect()
    }
}

pub fn hnf(m: &IntegerMatrix) -> HermiteForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut h = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h[(i, c)].is_zero())
                .min_by(|&a, &b| h[(a, c)].abs().cmp(&h[(b, c)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..rows {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let q = -(&h[(i, c)] / &h[(r, c)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                done &= h[(i, c)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, c)].is_zero() {
            continue;
        }
        if h[(r, c)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, c)].clone();
        for i in 0..r {
            let q: BigInt = -h[(i, c)].div_floor(&pivot);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        pivots.push(c);
        r += 1;
    }
    HermiteForm { h, u, rank: r, pivots }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn canonical_rows() {
        let m = IntegerMatrix::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let f = hnf(&m);
        assert_eq!(f.u.mul(&m), f.h);
        assert!(f.u.determinant().abs().is_one());
        assert_eq!(f.rank, 3);
        assert_eq!(f.h, IntegerMatrix::from_i64(&[&[2, 4, 4], &[0, 6, 0], &[0, 0, 12]]));
    }

    #[test]
    fn dependent_rows_drop_out() {
        let m = IntegerMatrix::from_i64(&[&[1, 2], &[2, 4], &[0, 0]]);
        let f = hnf(&m);
        assert_eq!(f.rank, 1);
        assert_eq!(f.nonzero_rows(), vec![vec![BigInt::from(1), BigInt::from(2)]]);
        assert_eq!(f.u.mul(&m), f.h);
    }
}
