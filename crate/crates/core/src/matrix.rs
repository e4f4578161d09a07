//! Exact matrix and vector algebra over any semiring, block constructions,
//! the max-plus norm, and proportionality.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::{BigInt, BigUint};
use num_traits::Signed;

use crate::error::AlgebraError;
use crate::semiring::Semiring;
use crate::value::{SemiringId, Value};
use crate::witness::Witness;

/// A dense row-major matrix over a semiring.
#[derive(Debug, Clone)]
pub struct Mat<S: Semiring> {
    sr: S,
    rows: usize,
    cols: usize,
    entries: Vec<S::Elem>,
}

// Equality, hashing and ordering look only at shape and entries. Mixing
// matrices over distinct semirings in one collection is a caller bug; the
// arithmetic operations do check.
impl<S: Semiring> PartialEq for Mat<S> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl<S: Semiring> Eq for Mat<S> {}

impl<S: Semiring> Hash for Mat<S> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.entries.hash(state);
    }
}

impl<S: Semiring> PartialOrd for Mat<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Semiring> Ord for Mat<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.rows, self.cols, &self.entries).cmp(&(other.rows, other.cols, &other.entries))
    }
}

impl<S: Semiring> Mat<S> {
    pub fn new(sr: S, rows: usize, cols: usize, entries: Vec<S::Elem>) -> Result<Self, AlgebraError> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(AlgebraError::ShapeMismatch(format!(
                "expected {rows}x{cols} = {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &entries {
            if !sr.contains(e) {
                return Err(AlgebraError::ShapeMismatch(format!(
                    "entry {} outside the carrier",
                    sr.render(e)
                )));
            }
        }
        Ok(Mat { sr, rows, cols, entries })
    }

    pub fn from_fn(sr: S, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S::Elem) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Mat { sr, rows, cols, entries }
    }

    pub fn zeros(sr: S, rows: usize, cols: usize) -> Self {
        let z = sr.zero();
        Mat::from_fn(sr, rows, cols, |_, _| z.clone())
    }

    pub fn identity(sr: S, n: usize) -> Self {
        let z = sr.zero();
        let o = sr.one();
        Mat::from_fn(sr, n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn semiring(&self) -> &S {
        &self.sr
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S::Elem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S::Elem) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[S::Elem] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.sr.is_zero(e))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.sr.is_one(self.get(i, j))
                    } else {
                        self.sr.is_zero(self.get(i, j))
                    }
                })
            })
    }

    /// `(AB)_{ij} = ⊕_k A_{ik} ⊗ B_{kj}`.
    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.sr != other.sr {
            return Err(AlgebraError::SemiringMismatch);
        }
        if self.cols != other.rows {
            return Err(AlgebraError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let sr = &self.sr;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = sr.zero();
                for k in 0..self.cols {
                    let term = sr.mul(self.get(i, k), other.get(k, j));
                    acc = sr.add(&acc, &term);
                }
                entries.push(acc);
            }
        }
        Ok(Mat {
            sr: self.sr.clone(),
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Block-diagonal matrix; off-diagonal blocks are filled with zeros.
    pub fn block_diag(blocks: &[Mat<S>]) -> Result<Mat<S>, AlgebraError> {
        let first = blocks
            .first()
            .ok_or_else(|| AlgebraError::ShapeMismatch("empty block list".into()))?;
        let sr = first.sr.clone();
        let mut n = 0;
        for b in blocks {
            if !b.is_square() {
                return Err(AlgebraError::ShapeMismatch(format!(
                    "block of shape {}x{} is not square",
                    b.rows, b.cols
                )));
            }
            if b.sr != sr {
                return Err(AlgebraError::SemiringMismatch);
            }
            n += b.rows;
        }
        let mut out = Mat::zeros(sr, n, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(off + i, off + j, b.get(i, j).clone());
                }
            }
            off += b.rows;
        }
        Ok(out)
    }

    /// Develops a square matrix into a row vector by concatenating its rows.
    pub fn vec_flatten(&self) -> Result<Mat<S>, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::ShapeMismatch(format!(
                "vec of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(Mat {
            sr: self.sr.clone(),
            rows: 1,
            cols: self.rows * self.cols,
            entries: self.entries.clone(),
        })
    }

    /// Copies a block of `other` into position `(i0, j0)`.
    pub fn paste(&mut self, i0: usize, j0: usize, other: &Mat<S>) {
        for i in 0..other.rows {
            for j in 0..other.cols {
                self.set(i0 + i, j0 + j, other.get(i, j).clone());
            }
        }
    }

    pub fn render(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> =
                    (0..self.cols).map(|j| self.sr.render(self.get(i, j))).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

impl<S: Semiring> fmt::Display for Mat<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A morphism from the free monoid on `r` letters into `n`x`n` matrices,
/// given by its generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism<S: Semiring> {
    n: usize,
    gens: Vec<Mat<S>>,
}

impl<S: Semiring> Morphism<S> {
    pub fn new(gens: Vec<Mat<S>>) -> Result<Self, AlgebraError> {
        let first = gens
            .first()
            .ok_or_else(|| AlgebraError::ShapeMismatch("morphism needs at least one generator".into()))?;
        if !first.is_square() {
            return Err(AlgebraError::ShapeMismatch("generators must be square".into()));
        }
        let n = first.rows();
        for g in &gens {
            if g.rows() != n || g.cols() != n {
                return Err(AlgebraError::ShapeMismatch(
                    "generators must share one dimension".into(),
                ));
            }
            if g.semiring() != first.semiring() {
                return Err(AlgebraError::SemiringMismatch);
            }
        }
        Ok(Morphism { n, gens })
    }

    /// Alphabet size.
    pub fn r(&self) -> usize {
        self.gens.len()
    }

    /// Matrix dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn semiring(&self) -> &S {
        self.gens[0].semiring()
    }

    pub fn generators(&self) -> &[Mat<S>] {
        &self.gens
    }

    pub fn generator(&self, letter0: usize) -> &Mat<S> {
        &self.gens[letter0]
    }

    /// The image of a word; the empty word maps to the identity.
    pub fn apply(&self, w: &Witness) -> Result<Mat<S>, AlgebraError> {
        let mut acc = Mat::identity(self.semiring().clone(), self.n);
        for &l in w.letters0() {
            let g = self.gens.get(l).ok_or(AlgebraError::LetterOutOfRange {
                letter: l + 1,
                letters: self.r(),
            })?;
            acc = acc.mul(g)?;
        }
        Ok(acc)
    }
}

/// `‖A‖ = max { |A_ij| : A_ij finite }` over zmax (or zmin); `None` when
/// every entry is the infinite absorbing element.
pub fn zmax_norm(a: &Mat<SemiringId>) -> Result<Option<BigUint>, AlgebraError> {
    match a.semiring() {
        SemiringId::Zmax | SemiringId::Zmin => {}
        other => {
            return Err(AlgebraError::Unsupported {
                semiring: other.name(),
                reason: "norm is defined for zmax and zmin",
            })
        }
    }
    let mut best: Option<BigUint> = None;
    for e in a.entries() {
        if let Value::Fin(v) = e {
            let mag = v.abs().to_biguint().expect("abs is nonnegative");
            best = Some(match best {
                Some(b) if b >= mag => b,
                _ => mag,
            });
        }
    }
    Ok(best)
}

/// Looks for an integer λ with `u = λ ⊗ v` entrywise over zmax/zmin, i.e.
/// `u_e = λ + v_e` with infinite entries matching.
pub fn proportional(u: &Mat<SemiringId>, v: &Mat<SemiringId>) -> Result<Option<BigInt>, AlgebraError> {
    match u.semiring() {
        SemiringId::Zmax | SemiringId::Zmin => {}
        other => {
            return Err(AlgebraError::Unsupported {
                semiring: other.name(),
                reason: "proportionality is defined for zmax and zmin",
            })
        }
    }
    if u.semiring() != v.semiring() {
        return Err(AlgebraError::SemiringMismatch);
    }
    if u.rows() != v.rows() || u.cols() != v.cols() {
        return Err(AlgebraError::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            u.rows(),
            u.cols(),
            v.rows(),
            v.cols()
        )));
    }
    let mut lambda: Option<BigInt> = None;
    for (x, y) in u.entries().iter().zip(v.entries()) {
        match (x, y) {
            (Value::Fin(a), Value::Fin(b)) => {
                let d = a - b;
                match &lambda {
                    None => lambda = Some(d),
                    Some(l) if *l == d => {}
                    Some(_) => return Ok(None),
                }
            }
            (a, b) if a == b => {} // matching infinities
            _ => return Ok(None),
        }
    }
    Ok(Some(lambda.unwrap_or_default()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::SemiringId::*;

    fn zmax_mat(rows: usize, cols: usize, vals: &[Option<i64>]) -> Mat<SemiringId> {
        let entries = vals
            .iter()
            .map(|v| v.map(Value::int).unwrap_or(Value::NegInf))
            .collect();
        Mat::new(Zmax, rows, cols, entries).unwrap()
    }

    #[test]
    fn zmax_product_example() {
        // [[0,1],[-inf,2]] * [[3,-inf],[0,5]] = [[3,6],[2,7]]
        let a = zmax_mat(2, 2, &[Some(0), Some(1), None, Some(2)]);
        let b = zmax_mat(2, 2, &[Some(3), None, Some(0), Some(5)]);
        let c = a.mul(&b).unwrap();
        assert_eq!(c, zmax_mat(2, 2, &[Some(3), Some(6), Some(2), Some(7)]));
    }

    #[test]
    fn identity_and_zero_laws() {
        let a = zmax_mat(2, 2, &[Some(0), Some(1), None, Some(2)]);
        let i = Mat::identity(Zmax, 2);
        let z = Mat::zeros(Zmax, 2, 2);
        assert_eq!(i.mul(&a).unwrap(), a);
        assert_eq!(a.mul(&i).unwrap(), a);
        assert_eq!(z.mul(&a).unwrap(), z);
        assert_eq!(a.mul(&z).unwrap(), z);
    }

    #[test]
    fn shape_and_semiring_mismatch() {
        let a = zmax_mat(2, 2, &[Some(0), Some(1), None, Some(2)]);
        let v = zmax_mat(1, 2, &[Some(0), Some(0)]);
        assert!(v.mul(&a).is_ok());
        assert!(matches!(a.mul(&v), Err(AlgebraError::ShapeMismatch(_))));
        let b = Mat::new(Nmin, 2, 2, vec![Value::int(0); 4]).unwrap();
        assert!(matches!(a.mul(&b), Err(AlgebraError::SemiringMismatch)));
    }

    #[test]
    fn block_diag_examples() {
        let i2 = Mat::identity(Zmax, 2);
        let z1 = Mat::zeros(Zmax, 1, 1);
        let d = Mat::block_diag(&[i2.clone(), z1]).unwrap();
        assert_eq!(d.rows(), 3);
        assert!(d.semiring().is_one(d.get(0, 0)));
        assert!(d.semiring().is_one(d.get(1, 1)));
        for (i, j) in [(0, 1), (0, 2), (1, 2), (2, 0), (2, 1), (2, 2)] {
            assert!(d.semiring().is_zero(d.get(i, j)));
        }
        assert_eq!(Mat::block_diag(std::slice::from_ref(&i2)).unwrap(), i2);
        let rect = zmax_mat(1, 2, &[Some(0), Some(0)]);
        assert!(Mat::block_diag(&[rect]).is_err());
    }

    #[test]
    fn vec_flatten_examples() {
        let a = Mat::new(Nat, 2, 2, vec![Value::int(1), Value::int(0), Value::int(0), Value::int(1)]).unwrap();
        let v = a.vec_flatten().unwrap();
        assert_eq!(v.rows(), 1);
        assert_eq!(v.cols(), 4);
        assert_eq!(
            v.entries(),
            &[Value::int(1), Value::int(0), Value::int(0), Value::int(1)]
        );
    }

    #[test]
    fn morphism_apply() {
        // nmin, n=1: gens (2), (3); a1 a1 a2 evaluates to 2+2+3 = 7.
        let g1 = Mat::new(Nmin, 1, 1, vec![Value::int(2)]).unwrap();
        let g2 = Mat::new(Nmin, 1, 1, vec![Value::int(3)]).unwrap();
        let mu = Morphism::new(vec![g1, g2]).unwrap();
        let w = Witness::from_letters0(vec![0, 0, 1]);
        assert_eq!(mu.apply(&w).unwrap().get(0, 0), &Value::int(7));
        assert!(mu.apply(&Witness::empty()).unwrap().is_identity());
        assert!(mu.apply(&Witness::from_letters0(vec![2])).is_err());
    }

    #[test]
    fn norm_examples() {
        let a = zmax_mat(2, 2, &[Some(0), Some(1), None, Some(2)]);
        assert_eq!(zmax_norm(&a).unwrap(), Some(BigUint::from(2u32)));
        let z = Mat::zeros(Zmax, 2, 2);
        assert_eq!(zmax_norm(&z).unwrap(), None);
        let n = Mat::new(Nat, 1, 1, vec![Value::int(1)]).unwrap();
        assert!(zmax_norm(&n).is_err());
        // over zmin the finite entries are those different from +inf
        let m = Mat::new(Zmin, 1, 2, vec![Value::int(-4), Value::PosInf]).unwrap();
        assert_eq!(zmax_norm(&m).unwrap(), Some(BigUint::from(4u32)));
    }

    #[test]
    fn proportional_examples() {
        let u = zmax_mat(1, 3, &[Some(3), Some(4), None]);
        let v = zmax_mat(1, 3, &[Some(1), Some(2), None]);
        assert_eq!(proportional(&u, &v).unwrap(), Some(BigInt::from(2)));
        assert_eq!(proportional(&u, &u).unwrap(), Some(BigInt::from(0)));
        let w = zmax_mat(1, 2, &[Some(3), Some(4)]);
        let x = zmax_mat(1, 2, &[Some(1), Some(3)]);
        assert_eq!(proportional(&w, &x).unwrap(), None);
        // mismatched -inf support
        let y = zmax_mat(1, 3, &[Some(3), Some(4), Some(0)]);
        assert_eq!(proportional(&u, &y).unwrap(), None);
    }
}
