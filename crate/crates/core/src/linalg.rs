//! Sparse exact linear algebra over the cyclotomic field.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::cyclotomic::{CycField, CycNumber};
use crate::error::{Error, Result};

/// A sparse vector: entries sorted by index, no stored zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Vector {
    entries: Vec<(usize, CycNumber)>,
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.entries.iter().map(|(i, c)| (i, c))).finish()
    }
}

impl Vector {
    pub fn zero() -> Vector {
        Vector { entries: Vec::new() }
    }

    pub fn basis(i: usize, field: &'static CycField) -> Vector {
        Vector {
            entries: alloc::vec![(i, field.one())],
        }
    }

    pub fn single(i: usize, c: CycNumber) -> Vector {
        if c.is_zero() {
            Vector::zero()
        } else {
            Vector {
                entries: alloc::vec![(i, c)],
            }
        }
    }

    /// Collects arbitrary `(index, coefficient)` pairs, summing duplicates and dropping zeros.
    pub fn from_unsorted(mut pairs: Vec<(usize, CycNumber)>) -> Vector {
        if pairs.len() > 1 {
            pairs.sort_unstable_by_key(|(i, _)| *i);
        }
        let mut entries: Vec<(usize, CycNumber)> = Vec::with_capacity(pairs.len());
        for (i, c) in pairs {
            match entries.last_mut() {
                Some((j, acc)) if *j == i => *acc += c,
                _ => {
                    if let Some((_, acc)) = entries.last() {
                        if acc.is_zero() {
                            entries.pop();
                        }
                    }
                    entries.push((i, c));
                }
            }
        }
        if let Some((_, acc)) = entries.last() {
            if acc.is_zero() {
                entries.pop();
            }
        }
        Vector { entries }
    }

    pub fn from_dense(values: &[CycNumber]) -> Vector {
        Vector {
            entries: values
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, dim: usize, field: &'static CycField) -> Vec<CycNumber> {
        let mut out = alloc::vec![field.zero(); dim];
        for (i, c) in &self.entries {
            out[*i] = c.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &CycNumber)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn entries(&self) -> &[(usize, CycNumber)] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<(usize, CycNumber)> {
        self.entries
    }

    pub fn get(&self, i: usize) -> Option<&CycNumber> {
        self.entries
            .binary_search_by_key(&i, |(j, _)| *j)
            .ok()
            .map(|k| &self.entries[k].1)
    }

    pub fn first(&self) -> Option<(usize, &CycNumber)> {
        self.entries.first().map(|(i, c)| (*i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.iter().map(|(i, _)| *i)
    }

    pub fn scale(&self, c: &CycNumber) -> Vector {
        if c.is_zero() {
            return Vector::zero();
        }
        Vector {
            entries: self.entries.iter().map(|(i, x)| (*i, x * c)).collect(),
        }
    }

    pub fn neg(&self) -> Vector {
        Vector {
            entries: self.entries.iter().map(|(i, x)| (*i, -x)).collect(),
        }
    }

    /// `self + c * other`, by merging.
    pub fn add_scaled(&self, other: &Vector, c: &CycNumber) -> Vector {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (self.entries.iter().peekable(), other.entries.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some((i, x)), Some((j, y))) => {
                    if i < j {
                        out.push((*i, x.clone()));
                        a.next();
                    } else if j < i {
                        out.push((*j, y * c));
                        b.next();
                    } else {
                        let s = x + &(y * c);
                        if !s.is_zero() {
                            out.push((*i, s));
                        }
                        a.next();
                        b.next();
                    }
                }
                (Some((i, x)), None) => {
                    out.push((*i, x.clone()));
                    a.next();
                }
                (None, Some((j, y))) => {
                    out.push((*j, y * c));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Vector { entries: out }
    }

    pub fn add(&self, other: &Vector) -> Vector {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &c.field().one()),
        }
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        match other.entries.first() {
            None => self.clone(),
            Some((_, c)) => self.add_scaled(other, &-c.field().one()),
        }
    }

    /// Reindexes entries through `f`; entries mapped to `None` are dropped.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> Option<usize>) -> Vector {
        Vector::from_unsorted(
            self.entries
                .iter()
                .filter_map(|(i, c)| f(*i).map(|j| (j, c.clone())))
                .collect(),
        )
    }

    /// Nonzero scalar `c` with `self = c * other`, if any.
    pub fn proportional_to(&self, other: &Vector) -> Option<CycNumber> {
        if self.is_zero() || other.is_zero() || self.len() != other.len() {
            return None;
        }
        let (i0, x0) = self.entries[0].clone();
        let (j0, y0) = other.entries[0].clone();
        if i0 != j0 {
            return None;
        }
        let c = x0.checked_div(&y0).ok()?;
        if *self == other.scale(&c) {
            Some(c)
        } else {
            None
        }
    }
}

/// Accumulates scaled sparse vectors; cheaper than repeated merges for many small terms.
#[derive(Default)]
pub struct Accumulator {
    pairs: Vec<(usize, CycNumber)>,
}

impl Accumulator {
    pub fn new() -> Accumulator {
        Accumulator { pairs: Vec::new() }
    }

    pub fn push(&mut self, i: usize, c: CycNumber) {
        if !c.is_zero() {
            self.pairs.push((i, c));
        }
    }

    pub fn add_scaled(&mut self, v: &Vector, c: &CycNumber) {
        if c.is_zero() {
            return;
        }
        if c.is_one() {
            self.pairs.extend(v.entries.iter().cloned());
        } else {
            self.pairs.extend(v.entries.iter().map(|(i, x)| (*i, x * c)));
        }
    }

    pub fn add(&mut self, v: &Vector) {
        self.pairs.extend(v.entries.iter().cloned());
    }

    pub fn finish(self) -> Vector {
        Vector::from_unsorted(self.pairs)
    }
}

/// A sparse matrix stored by columns.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: Vec<Vector>,
}

impl Matrix {
    pub fn from_columns(rows: usize, cols: Vec<Vector>) -> Matrix {
        debug_assert!(cols.iter().all(|c| c.max_index().map_or(true, |m| m < rows)));
        Matrix { rows, cols }
    }

    pub fn zero(rows: usize, ncols: usize) -> Matrix {
        Matrix {
            rows,
            cols: alloc::vec![Vector::zero(); ncols],
        }
    }

    pub fn identity(n: usize, field: &'static CycField) -> Matrix {
        Matrix {
            rows: n,
            cols: (0..n).map(|i| Vector::basis(i, field)).collect(),
        }
    }

    pub fn diagonal(values: &[CycNumber]) -> Matrix {
        Matrix {
            rows: values.len(),
            cols: values
                .iter()
                .enumerate()
                .map(|(i, c)| Vector::single(i, c.clone()))
                .collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &Vector {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Vector] {
        &self.cols
    }

    pub fn entry(&self, i: usize, j: usize) -> Option<&CycNumber> {
        self.cols[j].get(i)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        let mut acc = Accumulator::new();
        for (j, c) in v.iter() {
            acc.add_scaled(&self.cols[j], c);
        }
        acc.finish()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().zip(&other.cols).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &CycNumber) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols.iter().map(|v| v.scale(c)).collect(),
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut rows: Vec<Vec<(usize, CycNumber)>> = alloc::vec![Vec::new(); self.rows];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col.iter() {
                rows[i].push((j, c.clone()));
            }
        }
        Matrix {
            rows: self.cols.len(),
            cols: rows.into_iter().map(|r| Vector { entries: r }).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_zero())
    }

    pub fn pow(&self, e: u32, field: &'static CycField) -> Matrix {
        let mut acc = Matrix::identity(self.rows, field);
        for _ in 0..e {
            acc = self.mul(&acc);
        }
        acc
    }

    pub fn rank(&self) -> usize {
        let mut s = Subspace::new();
        for c in &self.cols {
            s.insert(c);
        }
        s.dim()
    }

    /// Basis of the null space.
    pub fn kernel(&self) -> Vec<Vector> {
        match self.any_field() {
            Some(f) => self.kernel_in(f),
            None => Vec::new(),
        }
    }

    /// Kernel basis, also correct for the zero matrix.
    pub fn kernel_in(&self, field: &'static CycField) -> Vec<Vector> {
        let mut t = TrackedEchelon::new();
        let mut out = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(k) = t.insert(c.clone(), Vector::basis(j, field)) {
                out.push(k);
            }
        }
        out
    }

    fn any_field(&self) -> Option<&'static CycField> {
        self.cols.iter().find_map(first_field)
    }

    /// Exact inverse; fails on singular or non-square input.
    pub fn inverse(&self, field: &'static CycField) -> Result<Matrix> {
        let n = self.cols.len();
        if n != self.rows {
            return Err(Error::Dimension(alloc::format!("{}x{} is not square", self.rows, n)));
        }
        let mut t = TrackedEchelon::new();
        for (j, c) in self.cols.iter().enumerate() {
            if t.insert(c.clone(), Vector::basis(j, field)).is_some() {
                return Err(Error::Singular);
            }
        }
        let cols = (0..n)
            .map(|i| t.express(&Vector::basis(i, field)).ok_or(Error::Singular))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix { rows: n, cols })
    }
}

fn first_field(v: &Vector) -> Option<&'static CycField> {
    v.entries.first().map(|(_, c)| c.field())
}

/// Semi-echelon basis of a subspace: each stored vector has a distinct leading index with coefficient 1.
#[derive(Clone, Debug, Default)]
pub struct Subspace {
    rows: BTreeMap<usize, Vector>,
}

impl Subspace {
    pub fn new() -> Subspace {
        Subspace { rows: BTreeMap::new() }
    }

    pub fn spanned_by<'a>(vs: impl IntoIterator<Item = &'a Vector>) -> Subspace {
        let mut s = Subspace::new();
        for v in vs {
            s.insert(v);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the subspace.
    pub fn reduce(&self, v: &Vector) -> Vector {
        let mut v = v.clone();
        let mut start = 0usize;
        loop {
            let hit = v
                .entries
                .iter()
                .find(|(i, _)| *i >= start && self.rows.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            match hit {
                None => return v,
                Some((i, c)) => {
                    v = v.add_scaled(&self.rows[&i], &-c);
                    start = i + 1;
                }
            }
        }
    }

    pub fn contains(&self, v: &Vector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &Vector) -> bool {
        let r = self.reduce(v);
        match r.entries.first() {
            None => false,
            Some((i, c)) => {
                let i = *i;
                let inv = c.inv().expect("leading coefficient is nonzero");
                self.rows.insert(i, r.scale(&inv));
                true
            }
        }
    }

    pub fn basis(&self) -> impl Iterator<Item = &Vector> {
        self.rows.values()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis().all(|v| self.contains(v))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // kernel of [A | -B] restricted to the A part
        let a: Vec<&Vector> = self.basis().collect();
        let b: Vec<&Vector> = other.basis().collect();
        let Some(field) = a.first().and_then(|v| first_field(v)) else {
            return Subspace::new();
        };
        let mut t = TrackedEchelon::new();
        let mut out = Subspace::new();
        let n = a.len();
        for (j, v) in a.iter().enumerate() {
            t.insert((*v).clone(), Vector::basis(j, field));
        }
        for (j, v) in b.iter().enumerate() {
            if let Some(k) = t.insert((*v).clone(), Vector::basis(n + j, field)) {
                let mut acc = Accumulator::new();
                for (idx, c) in k.iter() {
                    if idx < n {
                        acc.add_scaled(a[idx], c);
                    }
                }
                out.insert(&acc.finish());
            }
        }
        out
    }
}

/// Echelon form that remembers how each stored vector was combined from the inputs.
#[derive(Clone, Debug, Default)]
pub struct TrackedEchelon {
    rows: BTreeMap<usize, (Vector, Vector)>,
}

impl TrackedEchelon {
    pub fn new() -> TrackedEchelon {
        TrackedEchelon { rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, mut v: Vector, mut combo: Vector) -> (Vector, Vector) {
        let mut start = 0usize;
        loop {
            let hit = v
                .entries
                .iter()
                .find(|(i, _)| *i >= start && self.rows.contains_key(i))
                .map(|(i, c)| (*i, c.clone()));
            match hit {
                None => return (v, combo),
                Some((i, c)) => {
                    let (row, rc) = &self.rows[&i];
                    let m = -c;
                    v = v.add_scaled(row, &m);
                    combo = combo.add_scaled(rc, &m);
                    start = i + 1;
                }
            }
        }
    }

    /// Inserts `v` with its provenance `combo`. If `v` is dependent, returns the
    /// combination of inputs that sums to zero.
    pub fn insert(&mut self, v: Vector, combo: Vector) -> Option<Vector> {
        let (r, c) = self.reduce(v, combo);
        match r.entries.first() {
            None => Some(c),
            Some((i, lead)) => {
                let i = *i;
                let inv = lead.inv().expect("nonzero");
                self.rows.insert(i, (r.scale(&inv), c.scale(&inv)));
                None
            }
        }
    }

    /// Coefficients expressing `v` through the inserted inputs, if `v` is in their span.
    pub fn express(&self, v: &Vector) -> Option<Vector> {
        let (r, c) = self.reduce(v.clone(), Vector::zero());
        if r.is_zero() {
            Some(c.neg())
        } else {
            None
        }
    }
}

/// Coordinates with respect to a fixed basis of a subspace.
#[derive(Clone, Debug)]
pub struct Basis {
    vectors: Vec<Vector>,
    echelon: TrackedEchelon,
}

impl Basis {
    /// Fails when the vectors are dependent.
    pub fn new(vectors: Vec<Vector>, field: &'static CycField) -> Result<Basis> {
        let mut echelon = TrackedEchelon::new();
        for (j, v) in vectors.iter().enumerate() {
            if echelon.insert(v.clone(), Vector::basis(j, field)).is_some() {
                return Err(Error::Singular);
            }
        }
        Ok(Basis { vectors, echelon })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn coordinates(&self, v: &Vector) -> Option<Vector> {
        self.echelon.express(v)
    }

    pub fn from_coordinates(&self, c: &Vector) -> Vector {
        let mut acc = Accumulator::new();
        for (j, x) in c.iter() {
            acc.add_scaled(&self.vectors[j], x);
        }
        acc.finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> &'static CycField {
        CycField::get(3).unwrap()
    }

    #[test]
    fn from_unsorted_merges_and_drops_zeros() {
        let f = k();
        let v = Vector::from_unsorted(alloc::vec![(3, f.one()), (1, f.int(2)), (3, -f.one()), (1, f.one())]);
        assert_eq!(v.entries(), &[(1, f.int(3))]);
    }

    #[test]
    fn inverse_round_trip() {
        let f = k();
        let m = Matrix::from_columns(
            2,
            alloc::vec![
                Vector::from_dense(&[f.q(), f.one()]),
                Vector::from_dense(&[f.int(2), f.zeta()]),
            ],
        );
        let inv = m.inverse(f).unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(2, f));
        assert_eq!(inv.mul(&m), Matrix::identity(2, f));
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = k();
        let c = Vector::from_dense(&[f.one(), f.q()]);
        let m = Matrix::from_columns(2, alloc::vec![c.clone(), c.scale(&f.int(3))]);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        assert!(m.apply(&ker[0]).is_zero());
        assert_eq!(m.rank(), 1);
        assert!(m.inverse(f).is_err());
    }

    #[test]
    fn intersection_dimension() {
        let f = k();
        let e = |i| Vector::basis(i, f);
        let a = Subspace::spanned_by(&[e(0), e(1)]);
        let b = Subspace::spanned_by(&[e(1).add(&e(2)), e(1)]);
        let c = a.intersect(&b);
        assert_eq!(c.dim(), 1);
        assert!(c.contains(&e(1)));
    }

    #[test]
    fn basis_coordinates() {
        let f = k();
        let b = Basis::new(
            alloc::vec![Vector::from_dense(&[f.one(), f.one()]), Vector::from_dense(&[f.zero(), f.q()])],
            f,
        )
        .unwrap();
        let v = Vector::from_dense(&[f.int(2), f.int(5)]);
        let c = b.coordinates(&v).unwrap();
        assert_eq!(b.from_coordinates(&c), v);
    }

    #[test]
    fn proportionality() {
        let f = k();
        let v = Vector::from_dense(&[f.one(), f.q()]);
        assert_eq!(v.scale(&f.int(4)).proportional_to(&v), Some(f.int(4)));
        assert_eq!(v.proportional_to(&Vector::basis(0, f)), None);
    }
}
