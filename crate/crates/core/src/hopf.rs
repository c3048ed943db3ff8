//! Finite-dimensional Hopf algebras given by structure constants on an indexed basis.

use alloc::borrow::Cow;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use smallvec::SmallVec;

use crate::cyclotomic::{CycField, CycNumber};
use crate::error::{Error, Result};
use crate::linalg::{Accumulator, Basis, Matrix, Vector};
use crate::report::CheckReport;
use crate::sweep;

pub type AlgebraId = u64;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

pub fn fresh_id() -> AlgebraId {
    NEXT_ID.fetch_add(1, Ordering::Relaxed)
}

pub trait Algebra: Sync + Send {
    fn id(&self) -> AlgebraId;
    fn field(&self) -> &'static CycField;
    fn dim(&self) -> usize;
    fn unit(&self) -> Vector;
    fn mul_basis(&self, i: usize, j: usize) -> Cow<'_, Vector>;

    fn label(&self, i: usize) -> String {
        alloc::format!("e{}", i)
    }

    fn basis(&self, i: usize) -> Vector {
        Vector::basis(i, self.field())
    }

    fn mul(&self, x: &Vector, y: &Vector) -> Vector {
        let mut acc = Accumulator::new();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                acc.add_scaled(&self.mul_basis(i, j), &(a * b));
            }
        }
        acc.finish()
    }

    /// Product of a sequence, left to right; the empty product is the unit.
    fn mul_all(&self, xs: &[&Vector]) -> Vector {
        let mut acc = self.unit();
        for x in xs {
            acc = self.mul(&acc, x);
        }
        acc
    }

    fn pow(&self, x: &Vector, e: u32) -> Vector {
        let mut acc = self.unit();
        for _ in 0..e {
            acc = self.mul(&acc, x);
        }
        acc
    }

    fn format(&self, v: &Vector) -> String {
        if v.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = v
            .iter()
            .map(|(i, c)| alloc::format!("({})*{}", c, self.label(i)))
            .collect();
        parts.join(" + ")
    }
}

/// Coproduct values are vectors over the flattened tensor basis `i * dim + j`.
pub trait Coalgebra: Algebra {
    fn comul_basis(&self, i: usize) -> Cow<'_, Vector>;
    fn counit_basis(&self, i: usize) -> CycNumber;

    fn comul(&self, x: &Vector) -> Vector {
        let mut acc = Accumulator::new();
        for (i, c) in x.iter() {
            acc.add_scaled(&self.comul_basis(i), c);
        }
        acc.finish()
    }

    fn counit(&self, x: &Vector) -> CycNumber {
        let mut acc = self.field().zero();
        for (i, c) in x.iter() {
            acc += c * &self.counit_basis(i);
        }
        acc
    }
}

pub trait Hopf: Coalgebra {
    fn antipode_basis(&self, i: usize) -> Cow<'_, Vector>;
    fn antipode_inv_basis(&self, i: usize) -> Cow<'_, Vector>;

    fn antipode(&self, x: &Vector) -> Vector {
        let mut acc = Accumulator::new();
        for (i, c) in x.iter() {
            acc.add_scaled(&self.antipode_basis(i), c);
        }
        acc.finish()
    }

    fn antipode_inv(&self, x: &Vector) -> Vector {
        let mut acc = Accumulator::new();
        for (i, c) in x.iter() {
            acc.add_scaled(&self.antipode_inv_basis(i), c);
        }
        acc.finish()
    }
}

/// An element tagged with the algebra it belongs to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Element {
    pub algebra: AlgebraId,
    pub vec: Vector,
}

impl Element {
    pub fn new(algebra: &impl Algebra, vec: Vector) -> Result<Element> {
        if let Some(m) = vec.max_index() {
            if m >= algebra.dim() {
                return Err(Error::OutOfRange { index: m, dim: algebra.dim() });
            }
        }
        Ok(Element { algebra: algebra.id(), vec })
    }
}

pub fn multiply(a: &impl Algebra, x: &Element, y: &Element) -> Result<Element> {
    if x.algebra != a.id() || y.algebra != a.id() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(Element {
        algebra: a.id(),
        vec: a.mul(&x.vec, &y.vec),
    })
}

pub fn comultiply(a: &impl Coalgebra, x: &Element) -> Result<TensorElement> {
    if x.algebra != a.id() {
        return Err(Error::AlgebraMismatch);
    }
    Ok(TensorElement::new(&[a.dim(), a.dim()], a.comul(&x.vec)))
}

/// A sparse tensor over a product of bases, flattened in row-major order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    pub dims: SmallVec<[usize; 4]>,
    pub vec: Vector,
}

impl TensorElement {
    pub fn new(dims: &[usize], vec: Vector) -> TensorElement {
        TensorElement {
            dims: dims.iter().copied().collect(),
            vec,
        }
    }

    pub fn flatten(&self, legs: &[usize]) -> usize {
        legs.iter().zip(&self.dims).fold(0, |acc, (l, d)| acc * d + l)
    }

    pub fn legs(&self, mut k: usize) -> SmallVec<[usize; 4]> {
        let mut out: SmallVec<[usize; 4]> = SmallVec::from_elem(0, self.dims.len());
        for (slot, d) in out.iter_mut().zip(&self.dims).rev() {
            *slot = k % d;
            k /= d;
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (SmallVec<[usize; 4]>, &CycNumber)> + '_ {
        self.vec.iter().map(move |(k, c)| (self.legs(k), c))
    }
}

/// (Δ ⊗ id^{n-2}) ∘ ... ∘ Δ applied to `x`.
pub fn iterated_coproduct(h: &(impl Coalgebra + ?Sized), x: &Vector, n: usize) -> Result<TensorElement> {
    if n < 1 {
        return Err(Error::Dimension("iterated coproduct needs at least one leg".into()));
    }
    let d = h.dim();
    let mut cur = x.clone();
    let mut legs = 1usize;
    while legs < n {
        // split the first leg
        let rest = d.pow(legs as u32 - 1);
        let mut acc = Accumulator::new();
        for (k, c) in cur.iter() {
            let first = k / rest;
            let tail = k % rest;
            for (ij, e) in h.comul_basis(first).iter() {
                acc.push(ij * rest + tail, c * e);
            }
        }
        cur = acc.finish();
        legs += 1;
    }
    Ok(TensorElement::new(&alloc::vec![d; n], cur))
}

/// Product in A ⊗ A on flattened 2-tensors.
pub fn tensor_mul(a: &(impl Algebra + ?Sized), x: &Vector, y: &Vector) -> Vector {
    let d = a.dim();
    let mut acc = Accumulator::new();
    for (k1, c1) in x.iter() {
        let (i1, j1) = (k1 / d, k1 % d);
        for (k2, c2) in y.iter() {
            let (i2, j2) = (k2 / d, k2 % d);
            let l = a.mul_basis(i1, i2);
            if l.is_zero() {
                continue;
            }
            let r = a.mul_basis(j1, j2);
            let c = c1 * c2;
            for (u, cu) in l.iter() {
                let cu = &c * cu;
                for (v, cv) in r.iter() {
                    acc.push(u * d + v, &cu * cv);
                }
            }
        }
    }
    acc.finish()
}

/// Tensor product of two vectors in A ⊗ A.
pub fn tensor(x: &Vector, y: &Vector, d: usize) -> Vector {
    let mut acc = Accumulator::new();
    for (i, a) in x.iter() {
        for (j, b) in y.iter() {
            acc.push(i * d + j, a * b);
        }
    }
    acc.finish()
}

/// Swap of tensor factors in A ⊗ A.
pub fn flip(x: &Vector, d: usize) -> Vector {
    x.map_indices(|k| Some((k % d) * d + k / d))
}

/// Table-backed Hopf algebra.
#[derive(Clone, Debug)]
pub struct HopfData {
    id: AlgebraId,
    field: &'static CycField,
    dim: usize,
    pub p: Option<usize>,
    pub labels: Vec<String>,
    mult: Vec<Vector>,
    unit: Vector,
    comult: Vec<Vector>,
    counit: Vec<CycNumber>,
    antipode: Vec<Vector>,
    antipode_inv: Vec<Vector>,
}

impl HopfData {
    /// Builds from tables. `mult[i * dim + j]` is e_i e_j; the antipode inverse is computed.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        field: &'static CycField,
        labels: Vec<String>,
        mult: Vec<Vector>,
        unit: Vector,
        comult: Vec<Vector>,
        counit: Vec<CycNumber>,
        antipode: Vec<Vector>,
    ) -> Result<HopfData> {
        let dim = labels.len();
        let s = Matrix::from_columns(dim, antipode.clone());
        let inv = s.inverse(field).map_err(|_| Error::SingularAntipode)?;
        HopfData::with_antipode_inv(field, labels, mult, unit, comult, counit, antipode, inv.columns().to_vec())
    }

    #[allow(clippy::too_many_arguments)]
    pub fn with_antipode_inv(
        field: &'static CycField,
        labels: Vec<String>,
        mult: Vec<Vector>,
        unit: Vector,
        comult: Vec<Vector>,
        counit: Vec<CycNumber>,
        antipode: Vec<Vector>,
        antipode_inv: Vec<Vector>,
    ) -> Result<HopfData> {
        let dim = labels.len();
        let sq = dim * dim;
        if mult.len() != sq || comult.len() != dim || counit.len() != dim || antipode.len() != dim || antipode_inv.len() != dim {
            return Err(Error::Dimension(alloc::format!("inconsistent table sizes for dimension {}", dim)));
        }
        let bad = mult
            .iter()
            .chain(core::iter::once(&unit))
            .chain(&antipode)
            .chain(&antipode_inv)
            .filter_map(|v| v.max_index())
            .any(|m| m >= dim)
            || comult.iter().filter_map(|v| v.max_index()).any(|m| m >= sq);
        if bad {
            return Err(Error::Dimension("structure constant index out of range".into()));
        }
        Ok(HopfData {
            id: fresh_id(),
            field,
            dim,
            p: Some(field.p()),
            labels,
            mult,
            unit,
            comult,
            counit,
            antipode,
            antipode_inv,
        })
    }

    /// Tabulates any Hopf algebra.
    pub fn materialize(h: &(impl Hopf + ?Sized)) -> HopfData {
        let d = h.dim();
        let mult = sweep::map_indexed(d * d, |k| h.mul_basis(k / d, k % d).into_owned());
        HopfData {
            id: fresh_id(),
            field: h.field(),
            dim: d,
            p: Some(h.field().p()),
            labels: (0..d).map(|i| h.label(i)).collect(),
            mult,
            unit: h.unit(),
            comult: (0..d).map(|i| h.comul_basis(i).into_owned()).collect(),
            counit: (0..d).map(|i| h.counit_basis(i)).collect(),
            antipode: (0..d).map(|i| h.antipode_basis(i).into_owned()).collect(),
            antipode_inv: (0..d).map(|i| h.antipode_inv_basis(i).into_owned()).collect(),
        }
    }

    /// Group algebra of Z/n.
    pub fn cyclic_group(field: &'static CycField, n: usize) -> HopfData {
        let labels = (0..n).map(|i| alloc::format!("g^{}", i)).collect();
        let mult = (0..n * n).map(|k| Vector::basis((k / n + k % n) % n, field)).collect();
        let comult = (0..n).map(|i| Vector::basis(i * n + i, field)).collect();
        let antipode = (0..n).map(|i| Vector::basis((n - i) % n, field)).collect::<Vec<_>>();
        HopfData::with_antipode_inv(
            field,
            labels,
            mult,
            Vector::basis(0, field),
            comult,
            alloc::vec![field.one(); n],
            antipode.clone(),
            antipode,
        )
        .expect("well-formed tables")
    }

    pub fn mult_table(&self) -> &[Vector] {
        &self.mult
    }

    pub fn comult_table(&self) -> &[Vector] {
        &self.comult
    }

    pub fn counit_table(&self) -> &[CycNumber] {
        &self.counit
    }

    pub fn antipode_table(&self) -> &[Vector] {
        &self.antipode
    }

    pub fn antipode_inv_table(&self) -> &[Vector] {
        &self.antipode_inv
    }

    /// Replaces one product entry; used to build corrupted copies in mutation tests.
    pub fn with_mult_entry(&self, i: usize, j: usize, v: Vector) -> HopfData {
        let mut out = self.clone();
        out.id = fresh_id();
        out.mult[i * self.dim + j] = v;
        out
    }

    /// Re-expresses the structure in a new basis, given by vectors in the old coordinates.
    pub fn change_basis(&self, new_basis: Vec<Vector>, labels: Vec<String>) -> Result<HopfData> {
        let d = self.dim;
        if new_basis.len() != d || labels.len() != d {
            return Err(Error::Dimension("change of basis must be square".into()));
        }
        let f = self.field;
        let basis = Basis::new(new_basis, f)?;
        let coords = |v: &Vector| basis.coordinates(v).expect("a basis spans");
        let old_in_new: Vec<Vector> = (0..d).map(|a| coords(&Vector::basis(a, f))).collect();
        let t = basis.vectors();
        let mult = sweep::map_indexed(d * d, |k| coords(&self.mul(&t[k / d], &t[k % d])));
        let comult = t
            .iter()
            .map(|v| {
                let mut acc = Accumulator::new();
                for (ab, c) in self.comul(v).iter() {
                    acc.add_scaled(&tensor(&old_in_new[ab / d], &old_in_new[ab % d], d), c);
                }
                acc.finish()
            })
            .collect();
        let counit = t.iter().map(|v| self.counit(v)).collect();
        let antipode = t.iter().map(|v| coords(&self.antipode(v))).collect();
        let antipode_inv = t.iter().map(|v| coords(&self.antipode_inv(v))).collect();
        let unit = coords(&self.unit);
        HopfData::with_antipode_inv(f, labels, mult, unit, comult, counit, antipode, antipode_inv)
    }

    pub fn element(&self, vec: Vector) -> Result<Element> {
        Element::new(self, vec)
    }
}

impl Algebra for HopfData {
    fn id(&self) -> AlgebraId {
        self.id
    }
    fn field(&self) -> &'static CycField {
        self.field
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn unit(&self) -> Vector {
        self.unit.clone()
    }
    fn mul_basis(&self, i: usize, j: usize) -> Cow<'_, Vector> {
        Cow::Borrowed(&self.mult[i * self.dim + j])
    }
    fn label(&self, i: usize) -> String {
        self.labels[i].clone()
    }
}

impl Coalgebra for HopfData {
    fn comul_basis(&self, i: usize) -> Cow<'_, Vector> {
        Cow::Borrowed(&self.comult[i])
    }
    fn counit_basis(&self, i: usize) -> CycNumber {
        self.counit[i].clone()
    }
}

impl Hopf for HopfData {
    fn antipode_basis(&self, i: usize) -> Cow<'_, Vector> {
        Cow::Borrowed(&self.antipode[i])
    }
    fn antipode_inv_basis(&self, i: usize) -> Cow<'_, Vector> {
        Cow::Borrowed(&self.antipode_inv[i])
    }
}

/// The dual Hopf algebra in the dual basis e^I, with ⟨e^I, e_J⟩ = δ.
pub fn dual_hopf(b: &(impl Hopf + ?Sized)) -> HopfData {
    let d = b.dim();
    let f = b.field();
    let mut mult_pairs: Vec<Vec<(usize, CycNumber)>> = alloc::vec![Vec::new(); d * d];
    for k in 0..d {
        for (ij, c) in b.comul_basis(k).iter() {
            mult_pairs[ij].push((k, c.clone()));
        }
    }
    let mult = mult_pairs.into_iter().map(Vector::from_unsorted).collect();
    let mut comult_pairs: Vec<Vec<(usize, CycNumber)>> = alloc::vec![Vec::new(); d];
    for i in 0..d {
        for j in 0..d {
            for (k, c) in b.mul_basis(i, j).iter() {
                comult_pairs[k].push((i * d + j, c.clone()));
            }
        }
    }
    let comult = comult_pairs.into_iter().map(Vector::from_unsorted).collect();
    let unit = Vector::from_unsorted((0..d).map(|k| (k, b.counit_basis(k))).collect());
    let one = b.unit();
    let counit = (0..d).map(|k| one.get(k).cloned().unwrap_or_else(|| f.zero())).collect();
    let transpose = |cols: Vec<Vector>| Matrix::from_columns(d, cols).transpose().columns().to_vec();
    let antipode = transpose((0..d).map(|i| b.antipode_basis(i).into_owned()).collect());
    let antipode_inv = transpose((0..d).map(|i| b.antipode_inv_basis(i).into_owned()).collect());
    let labels = (0..d).map(|i| alloc::format!("({})*", b.label(i))).collect();
    HopfData::with_antipode_inv(f, labels, mult, unit, comult, counit, antipode, antipode_inv)
        .expect("transposed tables are well formed")
}

/// A Hopf algebra `b`, a Hopf algebra `bstar` in some basis {f_i}, and the
/// nondegenerate pairing between them.
#[derive(Debug)]
pub struct DualPair {
    pub b: Arc<HopfData>,
    pub bstar: Arc<HopfData>,
    /// `gram[i]` holds ⟨f_i, e_j⟩ indexed by j.
    gram: Vec<Vector>,
    /// e^J expressed in the f basis.
    dual_basis: Vec<Vector>,
}

impl DualPair {
    pub fn new(b: Arc<HopfData>, bstar: Arc<HopfData>, gram: Vec<Vector>) -> Result<DualPair> {
        let d = b.dim();
        if bstar.dim() != d || gram.len() != d {
            return Err(Error::Dimension("dual pair dimensions differ".into()));
        }
        let f = b.field();
        // rows of G are gram[i]; e^J = Σ_i X[J][i] f_i with X G = 1, i.e. X = G^{-1}
        let g = Matrix::from_columns(d, gram.clone()).transpose();
        let ginv = g.inverse(f).map_err(|_| Error::Verification("pairing is degenerate".into()))?;
        // ginv columns: column J of G^{-1}; we need rows of G^{-1}
        let dual_basis = ginv.transpose().columns().to_vec();
        Ok(DualPair { b, bstar, gram, dual_basis })
    }

    /// The pair (B, B*) in the canonical dual basis.
    pub fn canonical(b: Arc<HopfData>) -> DualPair {
        let bstar = Arc::new(dual_hopf(&*b));
        let f = b.field();
        let gram = (0..b.dim()).map(|i| Vector::basis(i, f)).collect();
        DualPair::new(b, bstar, gram).expect("identity pairing")
    }

    pub fn dim(&self) -> usize {
        self.b.dim()
    }

    pub fn field(&self) -> &'static CycField {
        self.b.field()
    }

    pub fn gram_row(&self, i: usize) -> &Vector {
        &self.gram[i]
    }

    /// e^J in the f basis.
    pub fn dual_basis(&self, j: usize) -> &Vector {
        &self.dual_basis[j]
    }

    pub fn pair_basis(&self, i: usize, j: usize) -> CycNumber {
        self.gram[i].get(j).cloned().unwrap_or_else(|| self.field().zero())
    }

    /// ⟨β, a⟩.
    pub fn pair(&self, beta: &Vector, a: &Vector) -> CycNumber {
        let mut acc = self.field().zero();
        for (i, x) in beta.iter() {
            let row = &self.gram[i];
            for (j, y) in a.iter() {
                if let Some(g) = row.get(j) {
                    acc += &(x * y) * g;
                }
            }
        }
        acc
    }

    /// h ⇀ β = ⟨β″, h⟩ β′.
    pub fn hit_left(&self, h: &Vector, beta: &Vector) -> Vector {
        let d = self.dim();
        let mut acc = Accumulator::new();
        for (i, c) in beta.iter() {
            for (xy, e) in self.bstar.comul_basis(i).iter() {
                let v = self.pair(&Vector::single(xy % d, self.field().one()), h);
                if !v.is_zero() {
                    acc.push(xy / d, &(c * e) * &v);
                }
            }
        }
        acc.finish()
    }

    /// β ↼ h = ⟨β′, h⟩ β″.
    pub fn hit_right(&self, beta: &Vector, h: &Vector) -> Vector {
        let d = self.dim();
        let mut acc = Accumulator::new();
        for (i, c) in beta.iter() {
            for (xy, e) in self.bstar.comul_basis(i).iter() {
                let v = self.pair(&Vector::single(xy / d, self.field().one()), h);
                if !v.is_zero() {
                    acc.push(xy % d, &(c * e) * &v);
                }
            }
        }
        acc.finish()
    }

    /// β ⇀ a = ⟨β, a″⟩ a′.
    pub fn dual_hit_left(&self, beta: &Vector, a: &Vector) -> Vector {
        let d = self.dim();
        let mut acc = Accumulator::new();
        for (j, c) in a.iter() {
            for (xy, e) in self.b.comul_basis(j).iter() {
                let v = self.pair(beta, &Vector::single(xy % d, self.field().one()));
                if !v.is_zero() {
                    acc.push(xy / d, &(c * e) * &v);
                }
            }
        }
        acc.finish()
    }

    /// a ↼ β = ⟨β, a′⟩ a″.
    pub fn dual_hit_right(&self, a: &Vector, beta: &Vector) -> Vector {
        let d = self.dim();
        let mut acc = Accumulator::new();
        for (j, c) in a.iter() {
            for (xy, e) in self.b.comul_basis(j).iter() {
                let v = self.pair(beta, &Vector::single(xy / d, self.field().one()));
                if !v.is_zero() {
                    acc.push(xy % d, &(c * e) * &v);
                }
            }
        }
        acc.finish()
    }

    /// Checks that the pairing is a Hopf pairing: products dualize coproducts, units dualize counits, antipodes match.
    pub fn verify(&self) -> CheckReport {
        let mut r = CheckReport::new("hopf_pairing");
        let d = self.dim();
        let f = self.field();
        let b = &*self.b;
        let bs = &*self.bstar;
        // ⟨αβ, a⟩ = ⟨α, a′⟩⟨β, a″⟩
        let w = sweep::find_first(d, |i| {
            for j in 0..d {
                let prod = bs.mul_basis(i, j);
                for a in 0..d {
                    let lhs = self.pair(&prod, &Vector::basis(a, f));
                    let mut rhs = f.zero();
                    for (xy, c) in b.comul_basis(a).iter() {
                        rhs += c * &(self.pair_basis(i, xy / d) * self.pair_basis(j, xy % d));
                    }
                    if lhs != rhs {
                        return Some((i, j, a));
                    }
                }
            }
            None
        });
        r.count("product_coproduct", (d * d * d) as u64);
        if let Some((i, j, a)) = w {
            r.mark_failed("product_coproduct", alloc::format!("{} {} {}", bs.label(i), bs.label(j), b.label(a)));
        }
        // ⟨α, ab⟩ = ⟨α′, a⟩⟨α″, b⟩
        let w = sweep::find_first(d, |i| {
            let cop = bs.comul_basis(i);
            for a in 0..d {
                for c in 0..d {
                    let lhs = self.pair(&Vector::basis(i, f), &b.mul_basis(a, c));
                    let mut rhs = f.zero();
                    for (xy, e) in cop.iter() {
                        rhs += e * &(self.pair_basis(xy / d, a) * self.pair_basis(xy % d, c));
                    }
                    if lhs != rhs {
                        return Some((i, a, c));
                    }
                }
            }
            None
        });
        if let Some((i, a, c)) = w {
            r.mark_failed("coproduct_product", alloc::format!("{} {} {}", bs.label(i), b.label(a), b.label(c)));
        }
        for i in 0..d {
            if self.pair(&Vector::basis(i, f), &b.unit()) != bs.counit_basis(i) {
                r.mark_failed("unit_counit", bs.label(i));
                break;
            }
        }
        for a in 0..d {
            if self.pair(&bs.unit(), &Vector::basis(a, f)) != b.counit_basis(a) {
                r.mark_failed("counit_unit", b.label(a));
                break;
            }
        }
        'outer: for i in 0..d {
            for a in 0..d {
                let lhs = self.pair(&bs.antipode_basis(i), &Vector::basis(a, f));
                let rhs = self.pair(&Vector::basis(i, f), &b.antipode_basis(a));
                if lhs != rhs {
                    r.mark_failed("antipode", alloc::format!("{} {}", bs.label(i), b.label(a)));
                    break 'outer;
                }
            }
        }
        r
    }
}

/// Sampling policy for axiom sweeps.
#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    /// Exhaustive up to this many cases per identity.
    pub exhaustive_limit: usize,
    pub samples: usize,
    pub seed: u64,
}

impl Default for SweepConfig {
    fn default() -> SweepConfig {
        SweepConfig {
            exhaustive_limit: 300 * 300 * 300,
            samples: 10_000,
            seed: 0,
        }
    }
}

impl SweepConfig {
    /// Exhaustive over triples when dim <= 300, else sampled.
    pub fn for_dim(dim: usize, seed: u64) -> SweepConfig {
        SweepConfig {
            exhaustive_limit: if dim <= 300 { usize::MAX } else { 0 },
            samples: 10_000,
            seed,
        }
    }
}


/// Runs a per-tuple predicate either exhaustively in lexicographic order or over seeded samples.
pub fn check_tuples(
    report: &mut CheckReport,
    key: &str,
    dim: usize,
    arity: usize,
    cfg: &SweepConfig,
    label: impl Fn(&[usize]) -> String + Sync,
    ok: impl Fn(&[usize]) -> bool + Sync + Send,
) {
    let total = dim.checked_pow(arity as u32).unwrap_or(usize::MAX);
    let witness = if total <= cfg.exhaustive_limit {
        report.count(alloc::format!("{}_cases", key), total as u64);
        // parallelize over the first index, scan the rest in order
        let inner = total / dim.max(1);
        sweep::find_first(dim, |i| {
            let mut t: SmallVec<[usize; 4]> = SmallVec::from_elem(0, arity);
            for k in 0..inner {
                t[0] = i;
                let mut r = k;
                for slot in t[1..].iter_mut().rev() {
                    *slot = r % dim;
                    r /= dim;
                }
                if !ok(&t) {
                    return Some(t.to_vec());
                }
            }
            None
        })
    } else {
        report.count(alloc::format!("{}_samples", key), cfg.samples as u64);
        let samples = sweep::sample_tuples(cfg.seed ^ fxhash(key), dim, arity, cfg.samples);
        sweep::find_first(samples.len(), |s| (!ok(&samples[s])).then(|| samples[s].clone()))
    };
    if let Some(t) = witness {
        report.mark_failed(key, label(&t));
    }
}

fn fxhash(s: &str) -> u64 {
    s.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3))
}

/// Checks every Hopf algebra axiom, reporting the first failing basis tuple per axiom.
pub fn verify_hopf(h: &(impl Hopf + ?Sized), cfg: &SweepConfig) -> CheckReport {
    verify_hopf_named(h, cfg, "hopf")
}

pub fn verify_hopf_named(h: &(impl Hopf + ?Sized), cfg: &SweepConfig, name: &str) -> CheckReport {
    let mut r = CheckReport::new(name);
    let d = h.dim();
    let f = h.field();
    let lab = |t: &[usize]| t.iter().map(|&i| h.label(i)).collect::<Vec<_>>().join(", ");
    let one = h.unit();

    check_tuples(&mut r, "associativity", d, 3, cfg, lab, |t| {
        let xy = h.mul_basis(t[0], t[1]);
        let yz = h.mul_basis(t[1], t[2]);
        let mut l = Accumulator::new();
        for (w, c) in xy.iter() {
            l.add_scaled(&h.mul_basis(w, t[2]), c);
        }
        let mut rr = Accumulator::new();
        for (w, c) in yz.iter() {
            rr.add_scaled(&h.mul_basis(t[0], w), c);
        }
        l.finish() == rr.finish()
    });
    check_tuples(&mut r, "unit", d, 1, cfg, lab, |t| {
        let e = Vector::basis(t[0], f);
        h.mul(&one, &e) == e && h.mul(&e, &one) == e
    });
    check_tuples(&mut r, "coassociativity", d, 1, cfg, lab, |t| {
        let e = Vector::basis(t[0], f);
        let a = iterated_coproduct(h, &e, 3).expect("n >= 1").vec;
        // (id ⊗ Δ) Δ
        let mut acc = Accumulator::new();
        for (ij, c) in h.comul_basis(t[0]).iter() {
            for (kl, e2) in h.comul_basis(ij % d).iter() {
                acc.push((ij / d) * d * d + kl, c * e2);
            }
        }
        a == acc.finish()
    });
    check_tuples(&mut r, "counit", d, 1, cfg, lab, |t| {
        let e = Vector::basis(t[0], f);
        let cop = h.comul_basis(t[0]);
        let mut left = Accumulator::new();
        let mut right = Accumulator::new();
        for (ij, c) in cop.iter() {
            left.push(ij % d, c * &h.counit_basis(ij / d));
            right.push(ij / d, c * &h.counit_basis(ij % d));
        }
        left.finish() == e && right.finish() == e
    });
    check_tuples(&mut r, "comultiplication_multiplicative", d, 2, cfg, lab, |t| {
        let lhs = h.comul(&h.mul_basis(t[0], t[1]));
        let rhs = tensor_mul(h, &h.comul_basis(t[0]), &h.comul_basis(t[1]));
        lhs == rhs
    });
    if h.comul(&one) != tensor(&one, &one, d) {
        r.mark_failed("comultiplication_unit", "Δ(1) ≠ 1⊗1");
    }
    check_tuples(&mut r, "counit_multiplicative", d, 2, cfg, lab, |t| {
        h.counit(&h.mul_basis(t[0], t[1])) == &h.counit_basis(t[0]) * &h.counit_basis(t[1])
    });
    if !h.counit(&one).is_one() {
        r.mark_failed("counit_unit", "ε(1) ≠ 1");
    }
    check_tuples(&mut r, "antipode", d, 1, cfg, lab, |t| {
        let cop = h.comul_basis(t[0]);
        let target = one.scale(&h.counit_basis(t[0]));
        let mut l = Accumulator::new();
        let mut rr = Accumulator::new();
        for (ij, c) in cop.iter() {
            let (i, j) = (ij / d, ij % d);
            let ei = Vector::basis(i, f);
            let ej = Vector::basis(j, f);
            l.add_scaled(&h.mul(&h.antipode_basis(i), &ej), c);
            rr.add_scaled(&h.mul(&ei, &h.antipode_basis(j)), c);
        }
        l.finish() == target && rr.finish() == target
    });
    check_tuples(&mut r, "antipode_inverse", d, 1, cfg, lab, |t| {
        let e = Vector::basis(t[0], f);
        h.antipode_inv(&h.antipode_basis(t[0])) == e && h.antipode(&h.antipode_inv_basis(t[0])) == e
    });
    r
}

/// Labels for a basis tuple.
pub fn tuple_label(h: &(impl Algebra + ?Sized), t: &[usize]) -> String {
    t.iter().map(|&i| h.label(i)).collect::<Vec<_>>().join(", ")
}

/// Scalars are displayed with their field; convenience for witnesses.
pub fn show(c: &CycNumber) -> String {
    c.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> &'static CycField {
        CycField::get(2).unwrap()
    }

    #[test]
    fn cyclic_group_is_hopf() {
        let g = HopfData::cyclic_group(f(), 2);
        let r = verify_hopf(&g, &SweepConfig::default());
        assert!(r.passed(), "{r}");
        let t = HopfData::cyclic_group(f(), 1);
        assert!(verify_hopf(&t, &SweepConfig::default()).passed());
    }

    #[test]
    fn corrupted_product_is_caught() {
        let g = HopfData::cyclic_group(f(), 3);
        let bad = g.with_mult_entry(1, 1, Vector::basis(0, f()));
        let r = verify_hopf(&bad, &SweepConfig::default());
        assert!(!r.passed());
        assert!(r.witness.contains_key("associativity"));
    }

    #[test]
    fn group_like_iterated_coproduct() {
        let g = HopfData::cyclic_group(f(), 4);
        let t = iterated_coproduct(&g, &Vector::basis(3, f()), 5).unwrap();
        let expect = t.flatten(&[3, 3, 3, 3, 3]);
        assert_eq!(t.vec, Vector::basis(expect, f()));
        assert_eq!(iterated_coproduct(&g, &Vector::basis(2, f()), 2).unwrap().vec, g.comul(&Vector::basis(2, f())));
    }

    #[test]
    fn double_dual_matches() {
        let g = HopfData::cyclic_group(f(), 3);
        let gd = dual_hopf(&dual_hopf(&g));
        assert_eq!(gd.mult_table(), g.mult_table());
        assert_eq!(gd.comult_table(), g.comult_table());
        assert_eq!(gd.antipode_table(), g.antipode_table());
        let pair = DualPair::canonical(Arc::new(g));
        assert!(pair.verify().passed());
    }

    #[test]
    fn element_algebra_mismatch() {
        let a = HopfData::cyclic_group(f(), 2);
        let b = HopfData::cyclic_group(f(), 2);
        let x = a.element(Vector::basis(1, f())).unwrap();
        let y = b.element(Vector::basis(1, f())).unwrap();
        assert_eq!(multiply(&a, &x, &y), Err(Error::AlgebraMismatch));
        assert_eq!(multiply(&a, &x, &x).unwrap().vec, Vector::basis(0, f()));
        assert!(a.element(Vector::basis(5, f())).is_err());
    }
}
