use rustc_hash::FxHashMap;

use super::{Polynomial, Rational};
use crate::error::{Error, Result};
use crate::roots::MirrorIndex;

/// A matrix of polynomials with mirror-index row and column labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: Vec<MirrorIndex>,
    cols: Vec<MirrorIndex>,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    pub fn zeros(rows: Vec<MirrorIndex>, cols: Vec<MirrorIndex>) -> Self {
        let entries = vec![Polynomial::zero(); rows.len() * cols.len()];
        PolyMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn identity(labels: Vec<MirrorIndex>) -> Self {
        let mut out = PolyMatrix::zeros(labels.clone(), labels);
        for k in 0..out.rows.len() {
            out.set_at(k, k, Polynomial::one());
        }
        out
    }

    pub fn from_rows(
        rows: Vec<MirrorIndex>,
        cols: Vec<MirrorIndex>,
        entries: Vec<Vec<Polynomial>>,
    ) -> Result<Self> {
        if entries.len() != rows.len() || entries.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::Construction("entry grid does not match labels".into()));
        }
        Ok(PolyMatrix {
            rows,
            cols,
            entries: entries.into_iter().flatten().collect(),
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn row_labels(&self) -> &[MirrorIndex] {
        &self.rows
    }

    pub fn col_labels(&self) -> &[MirrorIndex] {
        &self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Polynomial {
        &self.entries[r * self.cols.len() + c]
    }

    pub fn set_at(&mut self, r: usize, c: usize, p: Polynomial) {
        let w = self.cols.len();
        self.entries[r * w + c] = p;
    }

    fn row_pos(&self, i: MirrorIndex) -> Option<usize> {
        self.rows.iter().position(|&r| r == i)
    }

    fn col_pos(&self, j: MirrorIndex) -> Option<usize> {
        self.cols.iter().position(|&c| c == j)
    }

    /// Entry by labels.
    pub fn get(&self, i: MirrorIndex, j: MirrorIndex) -> &Polynomial {
        let r = self.row_pos(i).expect("row label");
        let c = self.col_pos(j).expect("column label");
        self.at(r, c)
    }

    pub fn set(&mut self, i: MirrorIndex, j: MirrorIndex, p: Polynomial) {
        let r = self.row_pos(i).expect("row label");
        let c = self.col_pos(j).expect("column label");
        self.set_at(r, c, p);
    }

    /// Submatrix on the given labels, in the order given.
    pub fn submatrix(&self, rows: &[MirrorIndex], cols: &[MirrorIndex]) -> PolyMatrix {
        let rp: Vec<usize> = rows.iter().map(|&i| self.row_pos(i).expect("row label")).collect();
        let cp: Vec<usize> = cols.iter().map(|&j| self.col_pos(j).expect("column label")).collect();
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in &rp {
            for &c in &cp {
                entries.push(self.at(r, c).clone());
            }
        }
        PolyMatrix {
            rows: rows.to_vec(),
            cols: cols.to_vec(),
            entries,
        }
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(Error::Construction("inner labels differ in product".into()));
        }
        let mut out = PolyMatrix::zeros(self.rows.clone(), other.cols.clone());
        for r in 0..self.nrows() {
            for k in 0..self.ncols() {
                let a = self.at(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.ncols() {
                    let b = other.at(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let w = out.cols.len();
                    out.entries[r * w + c].add_assign(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut out = self.clone();
        for (e, o) in out.entries.iter_mut().zip(&other.entries) {
            *e = e.sub(o);
        }
        out
    }

    /// Entrywise substitution.
    pub fn map<F: Fn(&Polynomial) -> Polynomial>(&self, f: F) -> PolyMatrix {
        PolyMatrix {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Polynomial::is_zero)
    }

    /// Exact determinant by Laplace expansion along rows, memoized on the
    /// set of columns still available.
    pub fn determinant(&self) -> Result<Polynomial> {
        let k = self.nrows();
        if k != self.ncols() {
            return Err(Error::NotSquare {
                rows: k,
                cols: self.ncols(),
            });
        }
        if k == 0 {
            return Ok(Polynomial::one());
        }
        if k > 63 {
            return Err(Error::Construction(format!("determinant of size {k} is too large")));
        }
        let mut memo: FxHashMap<u64, Polynomial> = FxHashMap::default();
        Ok(self.det_rec((1u64 << k) - 1, k, &mut memo))
    }

    fn det_rec(&self, mask: u64, k: usize, memo: &mut FxHashMap<u64, Polynomial>) -> Polynomial {
        if mask == 0 {
            return Polynomial::one();
        }
        if let Some(p) = memo.get(&mask) {
            return p.clone();
        }
        let row = k - mask.count_ones() as usize;
        let mut out = Polynomial::zero();
        let mut before = 0usize;
        for c in 0..k {
            if mask & (1 << c) == 0 {
                continue;
            }
            let entry = self.at(row, c);
            if !entry.is_zero() {
                let minor = self.det_rec(mask & !(1 << c), k, memo);
                if !minor.is_zero() {
                    let prod = entry.mul(&minor);
                    if before.is_multiple_of(2) {
                        out.add_assign(&prod);
                    } else {
                        out.add_assign(&prod.scale(&-Rational::one()));
                    }
                }
            }
            before += 1;
        }
        memo.insert(mask, out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Var;
    use proptest::prelude::*;

    fn x(i: i32, j: i32) -> Polynomial {
        Polynomial::var(Var::x(i, j))
    }

    fn labels(v: &[i32]) -> Vec<MirrorIndex> {
        v.iter().copied().map(MirrorIndex).collect()
    }

    #[test]
    fn two_by_two_minor() {
        let m = PolyMatrix::from_rows(
            labels(&[5, 6]),
            labels(&[7, 8]),
            vec![vec![x(5, 7), x(5, 8)], vec![x(6, 7), x(6, 8)]],
        )
        .unwrap();
        let want = x(5, 7).mul(&x(6, 8)).sub(&x(5, 8).mul(&x(6, 7)));
        assert_eq!(m.determinant().unwrap(), want);
    }

    #[test]
    fn small_cases() {
        let one = PolyMatrix::from_rows(labels(&[1]), labels(&[2]), vec![vec![x(1, 2)]]).unwrap();
        assert_eq!(one.determinant().unwrap(), x(1, 2));
        let zero_row = PolyMatrix::from_rows(
            labels(&[1, 2]),
            labels(&[3, 4]),
            vec![vec![x(1, 3), x(1, 4)], vec![Polynomial::zero(), Polynomial::zero()]],
        )
        .unwrap();
        assert!(zero_row.determinant().unwrap().is_zero());
        let rect = PolyMatrix::zeros(labels(&[1]), labels(&[2, 3]));
        assert!(matches!(rect.determinant(), Err(Error::NotSquare { .. })));
    }

    fn cofactor_along(m: &PolyMatrix, row: usize) -> Polynomial {
        let k = m.nrows();
        let mut out = Polynomial::zero();
        for c in 0..k {
            let rows: Vec<MirrorIndex> = (0..k).filter(|&r| r != row).map(|r| m.rows[r]).collect();
            let cols: Vec<MirrorIndex> = (0..k).filter(|&d| d != c).map(|d| m.cols[d]).collect();
            let minor = m.submatrix(&rows, &cols).determinant().unwrap();
            let term = m.at(row, c).mul(&minor);
            if (row + c).is_multiple_of(2) {
                out.add_assign(&term);
            } else {
                out = out.sub(&term);
            }
        }
        out
    }

    proptest! {
        #[test]
        fn agrees_with_cofactor_expansion(
            k in 1usize..5,
            cells in prop::collection::vec(-2i64..=2, 16),
            row in 0usize..4,
        ) {
            let lab: Vec<MirrorIndex> = (1..=k as i32).map(MirrorIndex).collect();
            let mut m = PolyMatrix::zeros(lab.clone(), lab.clone());
            for r in 0..k {
                for c in 0..k {
                    let v = cells[r * 4 + c];
                    let p = match v {
                        0 => Polynomial::zero(),
                        1 | -1 => x(r as i32 + 1, c as i32 + 1).scale(&Rational::from_int(v)),
                        _ => Polynomial::constant(Rational::from_int(v)).add(&x(1, 1)),
                    };
                    m.set_at(r, c, p);
                }
            }
            let row = row % k;
            prop_assert_eq!(m.determinant().unwrap(), cofactor_along(&m, row));
        }
    }
}
