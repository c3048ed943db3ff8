//! Drinfeld double D(B), Heisenberg double H(B*), and the three actions of
//! D(B): on B*, on B, and the combined action on H(B*).

use alloc::borrow::Cow;
use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

use crate::cyclotomic::{CycField, CycNumber};
use crate::error::{Error, Result};
use crate::hopf::{fresh_id, tensor, Algebra, AlgebraId, Coalgebra, DualPair, Hopf, SweepConfig};
use crate::linalg::{Accumulator, Matrix, Vector};
use crate::report::CheckReport;
use crate::sweep;

/// Δ²(e_i) of a coalgebra as (a, b, c, coefficient) index triples.
fn double_coproduct(h: &(impl Coalgebra + ?Sized), i: usize) -> Vec<(usize, usize, usize, CycNumber)> {
    let d = h.dim();
    let mut out = Vec::new();
    for (ab, c) in h.comul_basis(i).iter() {
        for (xy, e) in h.comul_basis(ab / d).iter() {
            out.push((xy / d, xy % d, ab % d, c * e));
        }
    }
    out
}

/// Pairing table ⟨f_i, e_j⟩ as a dense row-major array of options.
struct PairTable {
    d: usize,
    vals: Vec<Option<CycNumber>>,
}

impl PairTable {
    fn new(pair: &DualPair) -> PairTable {
        let d = pair.dim();
        let mut vals = alloc::vec![None; d * d];
        for i in 0..d {
            for (j, c) in pair.gram_row(i).iter() {
                vals[i * d + j] = Some(c.clone());
            }
        }
        PairTable { d, vals }
    }

    fn get(&self, i: usize, j: usize) -> Option<&CycNumber> {
        self.vals[i * self.d + j].as_ref()
    }

    /// ⟨f_i, v⟩.
    fn pair_vec(&self, i: usize, v: &Vector, field: &'static CycField) -> CycNumber {
        let mut acc = field.zero();
        for (j, c) in v.iter() {
            if let Some(g) = self.get(i, j) {
                acc += c * g;
            }
        }
        acc
    }
}

/// An algebra on B* ⊗ B whose product is (α⊗a)(β⊗b) = Σ α x ⊗ y b with
/// x ⊗ y = cross(a, β). Both doubles have this shape.
struct Twisted {
    pair: Arc<DualPair>,
    db: usize,
    /// cross[m * db + ν] over the flattened index x * db + y.
    cross: Vec<Vector>,
    table: OnceBox<Vec<Vector>>,
}

impl Twisted {
    fn compute(&self, k1: usize, k2: usize) -> Vector {
        let db = self.db;
        let (i, m) = (k1 / db, k1 % db);
        let (nu, n) = (k2 / db, k2 % db);
        let mut acc = Accumulator::new();
        for (xy, c) in self.cross[m * db + nu].iter() {
            let left = self.pair.bstar.mul_basis(i, xy / db);
            if left.is_zero() {
                continue;
            }
            let right = self.pair.b.mul_basis(xy % db, n);
            for (u, cu) in left.iter() {
                let cu = c * cu;
                for (v, cv) in right.iter() {
                    acc.push(u * db + v, &cu * cv);
                }
            }
        }
        acc.finish()
    }

    fn mul_basis(&self, k1: usize, k2: usize) -> Cow<'_, Vector> {
        match self.table.get() {
            Some(t) => Cow::Borrowed(&t[k1 * self.db * self.db + k2]),
            None => Cow::Owned(self.compute(k1, k2)),
        }
    }

    fn materialize(&self) {
        let dim = self.db * self.db;
        if self.table.get().is_none() {
            let t = sweep::map_indexed(dim * dim, |k| self.compute(k / dim, k % dim));
            let _ = self.table.set(Box::new(t));
        }
    }

    fn unit(&self) -> Vector {
        tensor(&self.pair.bstar.unit(), &self.pair.b.unit(), self.db)
    }
}

/// The Drinfeld double D(B) on B* ⊗ B, basis index `i * dim(B) + m` for f_i ⊗ e_m.
pub struct DrinfeldDouble {
    id: AlgebraId,
    tw: Twisted,
}

impl DrinfeldDouble {
    pub fn new(pair: Arc<DualPair>) -> Result<DrinfeldDouble> {
        let b = &*pair.b;
        let db = b.dim();
        let f = b.field();
        for i in 0..db {
            let e = Vector::basis(i, f);
            if b.antipode_inv(&b.antipode_basis(i)) != e || b.antipode(&b.antipode_inv_basis(i)) != e {
                return Err(Error::SingularAntipode);
            }
        }
        let pt = PairTable::new(&pair);
        // ⟨f_x, S^{-1}(e_c)⟩
        let sinv_pair: Vec<Vec<CycNumber>> = (0..db)
            .map(|c| {
                let s = b.antipode_inv_basis(c);
                (0..db).map(|x| pt.pair_vec(x, &s, f)).collect()
            })
            .collect();
        let dstar: Vec<_> = (0..db).map(|nu| double_coproduct(&*pair.bstar, nu)).collect();
        let cross = sweep::map_indexed(db * db, |k| {
            let (m, nu) = (k / db, k % db);
            // (ε⊗e_m)(f_ν⊗1) = Σ ⟨f_x, S^{-1}(m‴)⟩ ⟨f_z, m′⟩ f_y ⊗ m″
            let mut acc = Accumulator::new();
            for (a, bb, c, cm) in double_coproduct(b, m) {
                for (x, y, z, cn) in &dstar[nu] {
                    let s = &sinv_pair[c][*x];
                    if s.is_zero() {
                        continue;
                    }
                    let Some(g) = pt.get(*z, a) else { continue };
                    acc.push(y * db + bb, &(&cm * cn) * &(s * g));
                }
            }
            acc.finish()
        });
        Ok(DrinfeldDouble {
            id: fresh_id(),
            tw: Twisted {
                pair,
                db,
                cross,
                table: OnceBox::new(),
            },
        })
    }

    pub fn pair(&self) -> &Arc<DualPair> {
        &self.tw.pair
    }

    pub fn factor_dim(&self) -> usize {
        self.tw.db
    }

    /// Tabulates the full product (dim⁴ entries of B); worthwhile for small B.
    pub fn materialize(&self) {
        self.tw.materialize();
    }

    pub fn index(&self, i: usize, m: usize) -> usize {
        i * self.tw.db + m
    }

    /// β ⊗ 1.
    pub fn embed_dual(&self, beta: &Vector) -> Vector {
        tensor(beta, &self.tw.pair.b.unit(), self.tw.db)
    }

    /// ε ⊗ a.
    pub fn embed_alg(&self, a: &Vector) -> Vector {
        tensor(&self.tw.pair.bstar.unit(), a, self.tw.db)
    }

    /// Terms (R⁽¹⁾, R⁽²⁾) = (ε⊗e_I, e^I⊗1) of the universal R-matrix.
    pub fn r_terms(&self) -> Vec<(Vector, Vector)> {
        let f = self.field();
        (0..self.tw.db)
            .map(|i| {
                (
                    self.embed_alg(&Vector::basis(i, f)),
                    self.embed_dual(self.tw.pair.dual_basis(i)),
                )
            })
            .collect()
    }

    /// R as a flattened element of D ⊗ D.
    pub fn r_matrix(&self) -> Vector {
        let d = self.dim();
        let mut acc = Accumulator::new();
        for (r1, r2) in self.r_terms() {
            acc.add(&tensor(&r1, &r2, d));
        }
        acc.finish()
    }
}

impl Algebra for DrinfeldDouble {
    fn id(&self) -> AlgebraId {
        self.id
    }
    fn field(&self) -> &'static CycField {
        self.tw.pair.field()
    }
    fn dim(&self) -> usize {
        self.tw.db * self.tw.db
    }
    fn unit(&self) -> Vector {
        self.tw.unit()
    }
    fn mul_basis(&self, i: usize, j: usize) -> Cow<'_, Vector> {
        self.tw.mul_basis(i, j)
    }
    fn label(&self, k: usize) -> String {
        let db = self.tw.db;
        alloc::format!("{} ⊗ {}", self.tw.pair.bstar.label(k / db), self.tw.pair.b.label(k % db))
    }
}

impl Coalgebra for DrinfeldDouble {
    /// Δ(μ⊗m) = (μ″⊗m′) ⊗ (μ′⊗m″).
    fn comul_basis(&self, k: usize) -> Cow<'_, Vector> {
        let db = self.tw.db;
        let d = db * db;
        let (i, m) = (k / db, k % db);
        let mut acc = Accumulator::new();
        let cm = self.tw.pair.b.comul_basis(m);
        for (xy, c) in self.tw.pair.bstar.comul_basis(i).iter() {
            let (mu1, mu2) = (xy / db, xy % db);
            for (uv, e) in cm.iter() {
                let (m1, m2) = (uv / db, uv % db);
                acc.push((mu2 * db + m1) * d + (mu1 * db + m2), c * e);
            }
        }
        Cow::Owned(acc.finish())
    }

    fn counit_basis(&self, k: usize) -> CycNumber {
        let db = self.tw.db;
        self.tw.pair.bstar.counit_basis(k / db) * self.tw.pair.b.counit_basis(k % db)
    }
}

impl Hopf for DrinfeldDouble {
    /// S_D(μ⊗m) = (ε⊗S(m)) (S*^{-1}(μ)⊗1).
    fn antipode_basis(&self, k: usize) -> Cow<'_, Vector> {
        let db = self.tw.db;
        let p = &self.tw.pair;
        let left = self.embed_alg(&p.b.antipode_basis(k % db));
        let right = self.embed_dual(&p.bstar.antipode_inv_basis(k / db));
        Cow::Owned(self.mul(&left, &right))
    }

    /// S_D^{-1}(μ⊗m) = (ε⊗S^{-1}(m)) (S*(μ)⊗1).
    fn antipode_inv_basis(&self, k: usize) -> Cow<'_, Vector> {
        let db = self.tw.db;
        let p = &self.tw.pair;
        let left = self.embed_alg(&p.b.antipode_inv_basis(k % db));
        let right = self.embed_dual(&p.bstar.antipode_basis(k / db));
        Cow::Owned(self.mul(&left, &right))
    }
}

/// The Heisenberg double H(B*) = B* # B, (α#a)(β#b) = α(a′⇀β) # a″b.
pub struct HeisenbergDouble {
    id: AlgebraId,
    tw: Twisted,
}

impl HeisenbergDouble {
    pub fn new(pair: Arc<DualPair>) -> HeisenbergDouble {
        let db = pair.dim();
        let f = pair.field();
        let pt = PairTable::new(&pair);
        let cross = sweep::map_indexed(db * db, |k| {
            let (m, nu) = (k / db, k % db);
            // (ε#e_m)(f_ν#1) = Σ ⟨f_y, m′⟩ f_x # m″
            let mut acc = Accumulator::new();
            for (ab, c) in pair.b.comul_basis(m).iter() {
                for (xy, e) in pair.bstar.comul_basis(nu).iter() {
                    if let Some(g) = pt.get(xy % db, ab / db) {
                        acc.push((xy / db) * db + ab % db, &(c * e) * g);
                    }
                }
            }
            let _ = f;
            acc.finish()
        });
        HeisenbergDouble {
            id: fresh_id(),
            tw: Twisted {
                pair,
                db,
                cross,
                table: OnceBox::new(),
            },
        }
    }

    pub fn pair(&self) -> &Arc<DualPair> {
        &self.tw.pair
    }

    pub fn factor_dim(&self) -> usize {
        self.tw.db
    }

    pub fn materialize(&self) {
        self.tw.materialize();
    }

    pub fn index(&self, i: usize, m: usize) -> usize {
        i * self.tw.db + m
    }

    /// α # a.
    pub fn smash(&self, alpha: &Vector, a: &Vector) -> Vector {
        tensor(alpha, a, self.tw.db)
    }
}

impl Algebra for HeisenbergDouble {
    fn id(&self) -> AlgebraId {
        self.id
    }
    fn field(&self) -> &'static CycField {
        self.tw.pair.field()
    }
    fn dim(&self) -> usize {
        self.tw.db * self.tw.db
    }
    fn unit(&self) -> Vector {
        self.tw.unit()
    }
    fn mul_basis(&self, i: usize, j: usize) -> Cow<'_, Vector> {
        self.tw.mul_basis(i, j)
    }
    fn label(&self, k: usize) -> String {
        let db = self.tw.db;
        alloc::format!("{} # {}", self.tw.pair.bstar.label(k / db), self.tw.pair.b.label(k % db))
    }
}

/// A linear action of an acting algebra (by basis index) on a host space.
pub trait Action: Sync + Send {
    fn acting_dim(&self) -> usize;
    fn host_dim(&self) -> usize;
    fn field(&self) -> &'static CycField;
    /// Image of host basis vector `x` under acting basis element `h`.
    fn act_basis(&self, h: usize, x: usize) -> Vector;

    fn act_on(&self, h: usize, v: &Vector) -> Vector {
        let mut acc = Accumulator::new();
        for (x, c) in v.iter() {
            acc.add_scaled(&self.act_basis(h, x), c);
        }
        acc.finish()
    }
}

/// An action together with lazily built matrices for each acting basis element.
pub struct ModuleAction<A: Action> {
    pub inner: A,
    cache: Vec<OnceBox<Matrix>>,
}

impl<A: Action> ModuleAction<A> {
    pub fn new(inner: A) -> ModuleAction<A> {
        let n = inner.acting_dim();
        ModuleAction {
            inner,
            cache: (0..n).map(|_| OnceBox::new()).collect(),
        }
    }

    pub fn matrix(&self, h: usize) -> &Matrix {
        self.cache[h].get_or_init(|| {
            let n = self.inner.host_dim();
            Box::new(Matrix::from_columns(n, (0..n).map(|x| self.inner.act_basis(h, x)).collect()))
        })
    }

    pub fn host_dim(&self) -> usize {
        self.inner.host_dim()
    }

    pub fn acting_dim(&self) -> usize {
        self.inner.acting_dim()
    }

    /// h ▷ v for arbitrary acting element and host vector.
    pub fn act(&self, h: &Vector, v: &Vector) -> Vector {
        let mut acc = Accumulator::new();
        for (i, c) in h.iter() {
            acc.add_scaled(&self.matrix(i).apply(v), c);
        }
        acc.finish()
    }

    /// The matrix of an arbitrary acting element.
    pub fn matrix_of(&self, h: &Vector) -> Matrix {
        let n = self.host_dim();
        let mut m = Matrix::zero(n, n);
        for (i, c) in h.iter() {
            m = m.add(&self.matrix(i).scale(c));
        }
        m
    }
}

/// Precomputed Sweedler data shared by the actions of D(B).
pub struct ActionData {
    pair: Arc<DualPair>,
    db: usize,
    pt: PairTable,
}

impl ActionData {
    pub fn new(pair: Arc<DualPair>) -> Arc<ActionData> {
        let pt = PairTable::new(&pair);
        Arc::new(ActionData { db: pair.dim(), pair, pt })
    }

    fn f(&self) -> &'static CycField {
        self.pair.field()
    }

    /// h ⇀ f_j = Σ ⟨f_y, h⟩ f_x over Δ(f_j) = f_x ⊗ f_y, for h = e_m.
    fn hit_left_basis(&self, m: usize, j: usize) -> Vector {
        let db = self.db;
        let mut acc = Accumulator::new();
        for (xy, c) in self.pair.bstar.comul_basis(j).iter() {
            if let Some(g) = self.pt.get(xy % db, m) {
                acc.push(xy / db, c * g);
            }
        }
        acc.finish()
    }


    /// a ↼ β = ⟨β, a′⟩ a″.
    fn dual_hit_right(&self, a: &Vector, beta: &Vector) -> Vector {
        let db = self.db;
        let f = self.f();
        let mut acc = Accumulator::new();
        for (j, c) in a.iter() {
            for (xy, e) in self.pair.b.comul_basis(j).iter() {
                let mut v = f.zero();
                for (i, bc) in beta.iter() {
                    if let Some(g) = self.pt.get(i, xy / db) {
                        v += bc * g;
                    }
                }
                if !v.is_zero() {
                    acc.push(xy % db, &(c * e) * &v);
                }
            }
        }
        acc.finish()
    }

    /// (μ⊗m) ⇀ α = μ″ (m ⇀ α) S*^{-1}(μ′) on basis elements.
    pub fn on_dual(&self, mu: usize, m: usize, alpha: usize) -> Vector {
        let db = self.db;
        let bs = &*self.pair.bstar;
        let hit = self.hit_left_basis(m, alpha);
        if hit.is_zero() {
            return hit;
        }
        let mut acc = Accumulator::new();
        for (xy, c) in bs.comul_basis(mu).iter() {
            let left = bs.mul(&bs.basis(xy % db), &hit);
            if left.is_zero() {
                continue;
            }
            acc.add_scaled(&bs.mul(&left, &bs.antipode_inv_basis(xy / db)), c);
        }
        acc.finish()
    }

    /// (μ⊗m) ▷ a = (m′ a S(m″)) ↼ S*^{-1}(μ) on basis elements.
    pub fn on_alg(&self, mu: usize, m: usize, a: usize) -> Vector {
        let db = self.db;
        let b = &*self.pair.b;
        let mut adj = Accumulator::new();
        for (xy, c) in b.comul_basis(m).iter() {
            let left = b.mul_basis(xy / db, a);
            if left.is_zero() {
                continue;
            }
            adj.add_scaled(&b.mul(&left, &b.antipode_basis(xy % db)), c);
        }
        let adj = adj.finish();
        self.dual_hit_right(&adj, &self.pair.bstar.antipode_inv_basis(mu))
    }

    /// μ‴(m′⇀α)S*^{-1}(μ″) # ((m″ a S(m‴)) ↼ S*^{-1}(μ′)), fully expanded.
    /// With `drop_right_twist`, the ↼S*^{-1}(μ′) factor is replaced by ε(μ′).
    fn heterotic_expanded(&self, mu: usize, m: usize, alpha: usize, a: usize, drop_right_twist: bool) -> Vector {
        let db = self.db;
        let f = self.f();
        let bs = &*self.pair.bstar;
        let b = &*self.pair.b;
        let mut acc = Accumulator::new();
        let dmu = double_coproduct(bs, mu);
        let dm = double_coproduct(b, m);
        for (m1, m2, m3, cm) in &dm {
            let hit = self.hit_left_basis(*m1, alpha);
            if hit.is_zero() {
                continue;
            }
            let mid = b.mul(&b.mul_basis(*m2, a), &b.antipode_basis(*m3));
            if mid.is_zero() {
                continue;
            }
            for (u1, u2, u3, cu) in &dmu {
                let left = bs.mul(&bs.mul(&bs.basis(*u3), &hit), &bs.antipode_inv_basis(*u2));
                if left.is_zero() {
                    continue;
                }
                let right = if drop_right_twist {
                    mid.scale(&bs.counit_basis(*u1))
                } else {
                    self.dual_hit_right(&mid, &bs.antipode_inv_basis(*u1))
                };
                let c = cm * cu;
                acc.add_scaled(&tensor(&left, &right, db), &c);
            }
        }
        let _ = f;
        acc.finish()
    }
}

/// Action (i): D(B) on B*.
pub struct DualAction(pub Arc<ActionData>);

impl Action for DualAction {
    fn acting_dim(&self) -> usize {
        self.0.db * self.0.db
    }
    fn host_dim(&self) -> usize {
        self.0.db
    }
    fn field(&self) -> &'static CycField {
        self.0.f()
    }
    fn act_basis(&self, h: usize, x: usize) -> Vector {
        self.0.on_dual(h / self.0.db, h % self.0.db, x)
    }
}

/// Action (ii): D(B) on B.
pub struct AlgAction(pub Arc<ActionData>);

impl Action for AlgAction {
    fn acting_dim(&self) -> usize {
        self.0.db * self.0.db
    }
    fn host_dim(&self) -> usize {
        self.0.db
    }
    fn field(&self) -> &'static CycField {
        self.0.f()
    }
    fn act_basis(&self, h: usize, x: usize) -> Vector {
        self.0.on_alg(h / self.0.db, h % self.0.db, x)
    }
}

/// The combined action of D(B) on H(B*): (h′ ⇀ α) # (h″ ▷ a) with the coproduct of D(B).
pub struct HeteroticAction {
    data: Arc<ActionData>,
    dual: ModuleAction<DualAction>,
    alg: ModuleAction<AlgAction>,
}

impl HeteroticAction {
    pub fn new(data: Arc<ActionData>) -> HeteroticAction {
        HeteroticAction {
            dual: ModuleAction::new(DualAction(data.clone())),
            alg: ModuleAction::new(AlgAction(data.clone())),
            data,
        }
    }

    pub fn dual_action(&self) -> &ModuleAction<DualAction> {
        &self.dual
    }

    pub fn alg_action(&self) -> &ModuleAction<AlgAction> {
        &self.alg
    }

    /// Second route: the fully expanded Sweedler formula.
    pub fn expanded(&self, h: usize, x: usize) -> Vector {
        let db = self.data.db;
        self.data.heterotic_expanded(h / db, h % db, x / db, x % db, false)
    }
}

impl Action for HeteroticAction {
    fn acting_dim(&self) -> usize {
        self.data.db * self.data.db
    }
    fn host_dim(&self) -> usize {
        self.data.db * self.data.db
    }
    fn field(&self) -> &'static CycField {
        self.data.f()
    }
    fn act_basis(&self, h: usize, x: usize) -> Vector {
        let db = self.data.db;
        let (mu, m) = (h / db, h % db);
        let (alpha, a) = (x / db, x % db);
        let bs = &*self.data.pair.bstar;
        let b = &*self.data.pair.b;
        let mut acc = Accumulator::new();
        let cm = b.comul_basis(m);
        // Δ_D(μ⊗m) = (μ″⊗m′) ⊗ (μ′⊗m″)
        for (xy, c) in bs.comul_basis(mu).iter() {
            let (mu1, mu2) = (xy / db, xy % db);
            for (uv, e) in cm.iter() {
                let (m1, m2) = (uv / db, uv % db);
                let left = self.dual.matrix(mu2 * db + m1).column(alpha);
                if left.is_zero() {
                    continue;
                }
                let right = self.alg.matrix(mu1 * db + m2).column(a);
                if right.is_zero() {
                    continue;
                }
                acc.add_scaled(&tensor(left, right, db), &(c * e));
            }
        }
        acc.finish()
    }
}

/// The heterotic formula with the ↼S*^{-1}(μ′) factor removed; not a module algebra action.
pub struct CorruptedHeteroticAction(pub Arc<ActionData>);

impl Action for CorruptedHeteroticAction {
    fn acting_dim(&self) -> usize {
        self.0.db * self.0.db
    }
    fn host_dim(&self) -> usize {
        self.0.db * self.0.db
    }
    fn field(&self) -> &'static CycField {
        self.0.f()
    }
    fn act_basis(&self, h: usize, x: usize) -> Vector {
        let db = self.0.db;
        self.0.heterotic_expanded(h / db, h % db, x / db, x % db, true)
    }
}

/// Checks the module law (gh)▷x = g▷(h▷x) for pairs of acting elements and the unit law.
pub fn verify_module_action<A: Action>(
    name: &str,
    act: &ModuleAction<A>,
    acting: &(impl Algebra + ?Sized),
    elements: &[(String, Vector)],
) -> CheckReport {
    let mut r = CheckReport::new(name);
    let n = act.host_dim();
    let f = acting.field();
    let unit = acting.unit();
    let um = act.matrix_of(&unit);
    if um != Matrix::identity(n, f) {
        r.mark_failed("unit", "1 does not act as the identity");
    }
    let mats: Vec<Matrix> = elements.iter().map(|(_, h)| act.matrix_of(h)).collect();
    for (gi, (gname, g)) in elements.iter().enumerate() {
        for (hi, (hname, h)) in elements.iter().enumerate() {
            let gh = act.matrix_of(&acting.mul(g, h));
            let comp = mats[gi].mul(&mats[hi]);
            r.count("pairs", 1);
            if gh != comp {
                let x = (0..n).find(|&x| gh.column(x) != comp.column(x)).unwrap_or(0);
                r.mark_failed("composition", alloc::format!("g={} h={} x={}", gname, hname, x));
                return r;
            }
        }
    }
    r
}

/// Checks h▷(xy) = (h′▷x)(h″▷y) and h▷1 = ε(h)1 for each listed acting element h.
pub fn verify_module_algebra<A: Action, H: Hopf + ?Sized, M: Algebra + ?Sized>(
    name: &str,
    act: &ModuleAction<A>,
    acting: &H,
    host: &M,
    gens: &[(String, Vector)],
    cfg: &SweepConfig,
) -> CheckReport {
    let mut r = CheckReport::new(name);
    let d = acting.dim();
    let n = host.dim();
    let one = host.unit();
    for (gname, h) in gens {
        let lhs1 = act.act(h, &one);
        if lhs1 != one.scale(&acting.counit(h)) {
            r.mark_failed("unit", alloc::format!("h={}", gname));
        }
        let cop = acting.comul(h);
        let legs: Vec<(Matrix, Matrix, CycNumber)> = cop
            .iter()
            .map(|(k, c)| (act.matrix(k / d).clone(), act.matrix(k % d).clone(), c.clone()))
            .collect();
        let hm = act.matrix_of(h);
        let total = n * n;
        let check = |x: usize, y: usize| -> bool {
            let lhs = hm.apply(&host.mul_basis(x, y));
            let mut acc = Accumulator::new();
            for (a, b, c) in &legs {
                let u = a.column(x);
                if u.is_zero() {
                    continue;
                }
                let v = b.column(y);
                if v.is_zero() {
                    continue;
                }
                acc.add_scaled(&host.mul(u, v), c);
            }
            lhs == acc.finish()
        };
        let witness = if total <= cfg.exhaustive_limit {
            r.count("pairs", total as u64);
            sweep::find_first(n, |x| (0..n).find(|&y| !check(x, y)).map(|y| (x, y)))
        } else {
            r.count("samples", cfg.samples as u64);
            let s = sweep::sample_tuples(cfg.seed, n, 2, cfg.samples);
            sweep::find_first(s.len(), |k| (!check(s[k][0], s[k][1])).then(|| (s[k][0], s[k][1])))
        };
        if let Some((x, y)) = witness {
            r.mark_failed(
                "module_algebra",
                alloc::format!("h={} x={} y={}", gname, host.label(x), host.label(y)),
            );
            return r;
        }
    }
    r
}

/// Evaluates x y against Σ (R⁽²⁾▷y)(R⁽¹⁾▷x) over the given host pairs.
pub fn verify_r_commutativity<A: Action, M: Algebra + ?Sized>(
    name: &str,
    act: &ModuleAction<A>,
    r_terms: &[(Vector, Vector)],
    host: &M,
    pairs: &[(Vector, Vector, String)],
) -> CheckReport {
    let mut r = CheckReport::new(name);
    let m1: Vec<Matrix> = r_terms.iter().map(|(a, _)| act.matrix_of(a)).collect();
    let m2: Vec<Matrix> = r_terms.iter().map(|(_, b)| act.matrix_of(b)).collect();
    let w = sweep::find_first(pairs.len(), |k| {
        let (x, y, _) = &pairs[k];
        let lhs = host.mul(x, y);
        let mut acc = Accumulator::new();
        for (a, b) in m1.iter().zip(&m2) {
            acc.add(&host.mul(&b.apply(y), &a.apply(x)));
        }
        (lhs != acc.finish()).then_some(k)
    });
    r.count("pairs", pairs.len() as u64);
    if let Some(k) = w {
        r.mark_failed("pair", pairs[k].2.clone());
    }
    r
}

/// R Δ(x) R^{-1} = Δ^op(x), (Δ⊗id)R = R₁₃R₂₃, (id⊗Δ)R = R₁₃R₁₂, with R^{-1} = (S⊗id)R.
pub fn quasitriangularity_check(dd: &DrinfeldDouble) -> CheckReport {
    let mut r = CheckReport::new("quasitriangularity");
    let d = dd.dim();
    let f = dd.field();
    let terms = dd.r_terms();
    let rmat = dd.r_matrix();
    let mut rinv = Accumulator::new();
    for (a, b) in &terms {
        rinv.add(&tensor(&dd.antipode(a), b, d));
    }
    let rinv = rinv.finish();
    let one = dd.unit();
    let one2 = tensor(&one, &one, d);
    if crate::hopf::tensor_mul(dd, &rmat, &rinv) != one2 || crate::hopf::tensor_mul(dd, &rinv, &rmat) != one2 {
        r.mark_failed("r_inverse", "(S⊗id)R is not inverse to R");
        return r;
    }
    // with R invertible, RΔ(x)R^{-1} = Δ^op(x) is RΔ(x) = Δ^op(x)R
    let check_x = |x: usize| -> bool {
        let dx = dd.comul_basis(x);
        let op = crate::hopf::flip(&dx, d);
        crate::hopf::tensor_mul(dd, &rmat, &dx) == crate::hopf::tensor_mul(dd, &op, &rmat)
    };
    r.count("conjugation_cases", d as u64);
    if let Some(x) = sweep::find_first(d, |x| (!check_x(x)).then_some(x)) {
        r.mark_failed("conjugation", dd.label(x));
    }
    // (Δ⊗id)R = R₁₃R₂₃
    let mut lhs = Accumulator::new();
    for (a, b) in &terms {
        for (k, c) in dd.comul(a).iter() {
            for (j, e) in b.iter() {
                lhs.push(k * d + j, c * e);
            }
        }
    }
    let mut rhs = Accumulator::new();
    for (a1, b1) in &terms {
        for (a2, b2) in &terms {
            let bb = dd.mul(b1, b2);
            for (i, c) in a1.iter() {
                for (j, e) in a2.iter() {
                    let ce = c * e;
                    for (k, g) in bb.iter() {
                        rhs.push((i * d + j) * d + k, &ce * g);
                    }
                }
            }
        }
    }
    if lhs.finish() != rhs.finish() {
        r.mark_failed("delta_first", "(Δ⊗id)R ≠ R13 R23");
    }
    // (id⊗Δ)R = R₁₃R₁₂
    let mut lhs = Accumulator::new();
    for (a, b) in &terms {
        for (i, c) in a.iter() {
            for (k, e) in dd.comul(b).iter() {
                lhs.push(i * d * d + k, c * e);
            }
        }
    }
    let mut rhs = Accumulator::new();
    for (a1, b1) in &terms {
        for (a2, b2) in &terms {
            let aa = dd.mul(a1, a2);
            for (i, c) in aa.iter() {
                for (j, e) in b2.iter() {
                    let ce = c * e;
                    for (k, g) in b1.iter() {
                        rhs.push((i * d + j) * d + k, &ce * g);
                    }
                }
            }
        }
    }
    if lhs.finish() != rhs.finish() {
        r.mark_failed("delta_second", "(id⊗Δ)R ≠ R13 R12");
    }
    let _ = f;
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{verify_hopf, HopfData};

    fn trivial() -> Arc<DualPair> {
        let f = CycField::get(2).unwrap();
        Arc::new(DualPair::canonical(Arc::new(HopfData::cyclic_group(f, 1))))
    }

    #[test]
    fn trivial_double() {
        let dd = DrinfeldDouble::new(trivial()).unwrap();
        assert_eq!(dd.dim(), 1);
        assert!(verify_hopf(&dd, &SweepConfig::default()).passed());
        let q = quasitriangularity_check(&dd);
        assert!(q.passed(), "{q}");
        assert_eq!(dd.r_matrix(), Vector::basis(0, dd.field()));
    }

    #[test]
    fn group_double_is_hopf_and_quasitriangular() {
        let f = CycField::get(3).unwrap();
        let pair = Arc::new(DualPair::canonical(Arc::new(HopfData::cyclic_group(f, 3))));
        let dd = DrinfeldDouble::new(pair.clone()).unwrap();
        assert!(verify_hopf(&dd, &SweepConfig::default()).passed());
        assert!(quasitriangularity_check(&dd).passed());
        let h = HeisenbergDouble::new(pair.clone());
        let data = ActionData::new(pair);
        let het = ModuleAction::new(HeteroticAction::new(data.clone()));
        let gens: Vec<(String, Vector)> = (0..dd.dim()).map(|i| (dd.label(i), dd.basis(i))).collect();
        let r = verify_module_algebra("het", &het, &dd, &h, &gens, &SweepConfig::default());
        assert!(r.passed(), "{r}");
        for x in 0..h.dim() {
            for g in 0..dd.dim() {
                assert_eq!(het.inner.act_basis(g, x), het.inner.expanded(g, x));
            }
        }
    }
}
