//! Exact Gaussian elimination for small dense systems.

use crate::scalar::Scalar;

/// Reduced row echelon form of an augmented system `A x = b`.
#[derive(Clone, Debug, PartialEq)]
pub struct Echelon<C> {
    cols: usize,
    /// Nonzero rows of `[A | b]` in reduced form; row `k` has its pivot in
    /// column `pivots[k]`.
    rows: Vec<Vec<C>>,
    rhs: Vec<C>,
    pivots: Vec<usize>,
    consistent: bool,
}

impl<C: Scalar> Echelon<C> {
    /// Row-reduces `a` (a list of rows of length `cols`) together with `b`.
    /// Pivots are chosen by largest magnitude within each column.
    pub fn new(cols: usize, a: Vec<Vec<C>>, b: Vec<C>) -> Self {
        assert_eq!(a.len(), b.len());
        let mut rows = a;
        let mut rhs = b;
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..cols {
            if top == rows.len() {
                break;
            }
            let mut best: Option<(usize, f64)> = None;
            for (r, row) in rows.iter().enumerate().skip(top) {
                if !row[col].is_zero() {
                    let size = row[col].pivot_size();
                    if best.is_none_or(|(_, s)| size > s) {
                        best = Some((r, size));
                    }
                }
            }
            let Some((r, _)) = best else { continue };
            rows.swap(top, r);
            rhs.swap(top, r);
            let inv = C::one() / rows[top][col].clone();
            for v in rows[top].iter_mut().skip(col) {
                *v = v.clone() * inv.clone();
            }
            rhs[top] = rhs[top].clone() * inv;
            let pivot_row = rows[top].clone();
            let pivot_rhs = rhs[top].clone();
            for r in 0..rows.len() {
                if r == top || rows[r][col].is_zero() {
                    continue;
                }
                let f = rows[r][col].clone();
                for c in col..cols {
                    if !pivot_row[c].is_zero() {
                        rows[r][c] = rows[r][c].clone() - f.clone() * pivot_row[c].clone();
                    }
                }
                rhs[r] = rhs[r].clone() - f * pivot_rhs.clone();
            }
            pivots.push(col);
            top += 1;
        }
        let consistent = rhs[top..].iter().all(|v| v.is_zero());
        rows.truncate(top);
        rhs.truncate(top);
        Echelon {
            cols,
            rows,
            rhs,
            pivots,
            consistent,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    pub fn is_consistent(&self) -> bool {
        self.consistent
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols).filter(|&c| !is_pivot[c]).collect()
    }

    /// The solution whose free variables take the values `free(col)`, or
    /// `None` if the system is inconsistent.
    pub fn solution_with(&self, mut free: impl FnMut(usize) -> C) -> Option<Vec<C>> {
        if !self.consistent {
            return None;
        }
        let mut x = vec![C::zero(); self.cols];
        for c in self.free_columns() {
            x[c] = free(c);
        }
        for (k, &p) in self.pivots.iter().enumerate() {
            let mut v = self.rhs[k].clone();
            for c in p + 1..self.cols {
                if !self.rows[k][c].is_zero() && !x[c].is_zero() {
                    v = v - self.rows[k][c].clone() * x[c].clone();
                }
            }
            x[p] = v;
        }
        Some(x)
    }

    /// Free variables set to zero.
    pub fn particular(&self) -> Option<Vec<C>> {
        self.solution_with(|_| C::zero())
    }

    /// One basis vector of the kernel of `A` per free column.
    pub fn nullspace(&self) -> Vec<Vec<C>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut x = vec![C::zero(); self.cols];
                x[f] = C::one();
                for (k, &p) in self.pivots.iter().enumerate() {
                    x[p] = -self.rows[k][f].clone();
                }
                x
            })
            .collect()
    }
}

/// `A x`.
pub fn apply<C: Scalar>(a: &[Vec<C>], x: &[C]) -> Vec<C> {
    a.iter()
        .map(|row| {
            row.iter().zip(x).fold(C::zero(), |acc, (r, v)| {
                if r.is_zero() || v.is_zero() {
                    acc
                } else {
                    acc + r.clone() * v.clone()
                }
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn q(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    #[test]
    fn solves_square_system() {
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let e = Echelon::new(2, a.clone(), vec![q(3), q(5)]);
        assert_eq!(e.rank(), 2);
        let x = e.particular().unwrap();
        assert_eq!(
            x,
            vec![Rational::from_ratio(4, 5), Rational::from_ratio(7, 5)]
        );
        assert_eq!(apply(&a, &x), vec![q(3), q(5)]);
    }

    #[test]
    fn reports_nullspace_and_inconsistency() {
        let a = vec![vec![q(1), q(1), q(0)], vec![q(2), q(2), q(0)]];
        let e = Echelon::new(3, a.clone(), vec![q(1), q(2)]);
        assert_eq!(e.nullity(), 2);
        for v in e.nullspace() {
            assert!(apply(&a, &v).iter().all(|c| *c == q(0)));
        }
        let x = e.solution_with(|c| q(c as i64)).unwrap();
        assert_eq!(x, vec![q(0), q(1), q(2)]);
        let bad = Echelon::new(3, a, vec![q(1), q(3)]);
        assert!(!bad.is_consistent());
        assert!(bad.particular().is_none());
    }
}
