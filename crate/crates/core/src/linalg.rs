//! Exact Gaussian elimination over the rationals.

use num_traits::Zero;

use crate::rational::Rational;

/// Rows kept in reduced echelon form, so new rows can be tested for
/// independence one at a time.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    width: usize,
    /// `(pivot column, row)`; each row has a 1 at its pivot and zeros at every
    /// other stored pivot column.
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Echelon {
    pub fn new(width: usize) -> Self {
        Self {
            width,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.width
    }

    /// Reduces `row` against the stored basis; returns the remainder.
    fn reduce(&self, mut row: Vec<Rational>) -> Vec<Rational> {
        for (p, basis) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let factor = row[*p].clone();
            for (r, b) in row.iter_mut().zip(basis) {
                if !b.is_zero() {
                    *r -= &factor * b;
                }
            }
        }
        row
    }

    pub fn is_independent(&self, row: &[Rational]) -> bool {
        self.reduce(row.to_vec()).iter().any(|v| !v.is_zero())
    }

    /// Adds `row` if it is independent of the stored rows.
    pub fn insert(&mut self, row: Vec<Rational>) -> bool {
        assert_eq!(row.len(), self.width, "row width mismatch");
        let mut row = self.reduce(row);
        let Some(p) = row.iter().position(|v| !v.is_zero()) else {
            return false;
        };
        let lead = row[p].clone();
        for v in row.iter_mut() {
            *v /= &lead;
        }
        for (_, basis) in self.rows.iter_mut() {
            if basis[p].is_zero() {
                continue;
            }
            let factor = basis[p].clone();
            for (b, r) in basis.iter_mut().zip(&row) {
                if !r.is_zero() {
                    *b -= &factor * r;
                }
            }
        }
        self.rows.push((p, row));
        true
    }

    /// A basis of `{v : row . v = 0 for every stored row}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let pivots: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        (0..self.width)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.width];
                v[free] = Rational::from_integer(1.into());
                for (p, row) in &self.rows {
                    v[*p] = -row[free].clone();
                }
                v
            })
            .collect()
    }
}

pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let Some(first) = rows.first() else {
        return 0;
    };
    let mut e = Echelon::new(first.len());
    for r in rows {
        e.insert(r.clone());
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn ranks() {
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[1, 2, 3], &[0, 1, 1], &[1, 3, 4]])), 2);
        assert_eq!(rank(&m(&[&[0, 0]])), 0);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn nullspace_is_orthogonal() {
        let rows = m(&[&[1, 1, 1, -1], &[1, 2, 1, -2], &[1, 2, 2, -4]]);
        let mut e = Echelon::new(4);
        for r in &rows {
            assert!(e.insert(r.clone()));
        }
        let ns = e.nullspace();
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot: Rational = r.iter().zip(&ns[0]).map(|(a, b)| a * b).sum();
            assert!(dot.is_zero());
        }
    }
}
