//! Smith normal form over the integers.
//!
//! Convention: `U * M * V = S` with `U`, `V` unimodular and `S` diagonal,
//! each nonzero diagonal entry dividing the next. Every quotient group in the
//! crate is read off from this form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::intmat::IntMatrix;

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Inverse of `v`, kept for mapping canonical coordinates back.
    pub v_inv: IntMatrix,
    /// Diagonal entries of `s` greater than one.
    pub invariant_factors: Vec<BigInt>,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithForm {
    /// Diagonal of `S`, padded with zeros to the number of columns.
    pub fn column_diagonal(&self) -> Vec<BigInt> {
        (0..self.s.cols()).map(|j| if j < self.s.rows() { self.s[(j, j)].clone() } else { BigInt::zero() }).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows(), m.cols());
    let mut s = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block becomes the pivot
        let Some((pi, pj)) = smallest_entry(&s, t) else { break };
        s.swap_rows(t, pi);
        u.swap_rows(t, pi);
        swap_cols(&mut s, &mut v, &mut v_inv, t, pj);

        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                if !s[(i, t)].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                add_col(&mut s, &mut v, &mut v_inv, j, t, &q);
                if !s[(t, j)].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // a remainder is now smaller than the pivot; restart with it
                let (pi, pj) = smallest_in_cross(&s, t);
                s.swap_rows(t, pi);
                u.swap_rows(t, pi);
                swap_cols(&mut s, &mut v, &mut v_inv, t, pj);
                continue;
            }
            // row and column cleared; enforce divisibility on the trailing block
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !s[(i, j)].is_multiple_of(&s[(t, t)]));
            match bad {
                Some((i, _)) => {
                    let one = BigInt::one();
                    s.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }

    let rank = (0..rows.min(cols)).take_while(|&i| !s[(i, i)].is_zero()).count();
    let invariant_factors = (0..rank).map(|i| s[(i, i)].clone()).filter(|x| !x.is_one()).collect();
    SmithForm { u, s, v, v_inv, invariant_factors, rank }
}

fn smallest_entry(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..s.rows() {
        for j in t..s.cols() {
            let e = &s[(i, j)];
            if e.is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| e.abs() < s[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

fn smallest_in_cross(s: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let cand = (t..s.rows()).map(|i| (i, t)).chain((t..s.cols()).map(|j| (t, j)));
    for (i, j) in cand {
        let e = &s[(i, j)];
        if !e.is_zero() && (s[best].is_zero() || e.abs() < s[best].abs()) {
            best = (i, j);
        }
    }
    best
}

fn swap_cols(s: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, a: usize, b: usize) {
    s.swap_cols(a, b);
    v.swap_cols(a, b);
    v_inv.swap_rows(a, b);
}

// col[target] += k * col[source], mirrored on V and V^{-1}
fn add_col(s: &mut IntMatrix, v: &mut IntMatrix, v_inv: &mut IntMatrix, target: usize, source: usize, k: &BigInt) {
    s.add_col_multiple(target, source, k);
    v.add_col_multiple(target, source, k);
    v_inv.add_row_multiple(source, target, &-k);
}
