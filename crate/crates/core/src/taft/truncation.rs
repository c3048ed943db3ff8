//! D(B)/(κk − 1), the Hopf subalgebra U spanned by F^ℓ E^m k^{2n}, and the
//! quotient H̄ of the κk-invariants of H(B*) by Λ = 1.

use alloc::borrow::Cow;
use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

use super::{monomial, TaftContext};
use crate::cyclotomic::CycField;
use crate::doubles::{verify_module_action, verify_module_algebra, Action, ModuleAction};
use crate::error::{Error, Result};
use crate::hopf::{check_tuples, fresh_id, verify_hopf_named, Algebra, AlgebraId, Coalgebra, Hopf, HopfData, SweepConfig};
use crate::linalg::{Accumulator, Vector};
use crate::report::CheckReport;
use crate::sweep;

/// Index helpers for D̄(B) = span{F^a E^c k^e}, a, c < p, e < 4p.
#[derive(Clone, Copy, Debug)]
pub struct DbarIndex {
    pub p: usize,
}

impl DbarIndex {
    pub fn dim(&self) -> usize {
        4 * self.p * self.p * self.p
    }

    pub fn idx(&self, a: usize, c: usize, e: i64) -> usize {
        let n = 4 * self.p;
        (a * self.p + c) * n + e.rem_euclid(n as i64) as usize
    }

    pub fn exps(&self, i: usize) -> (usize, usize, usize) {
        let n = 4 * self.p;
        (i / n / self.p, (i / n) % self.p, i % n)
    }
}

/// π: F^aκ^b ⊗ E^c k^d ↦ q^{−bc} F^a E^c k^{d−b}.
pub fn project_d(ctx: &TaftContext, v: &Vector) -> Vector {
    let di = DbarIndex { p: ctx.p };
    let mut acc = Accumulator::new();
    for (k, c) in v.iter() {
        let (a, b, cc, d) = ctx.dh_exponents(k);
        acc.push(
            di.idx(a, cc, d as i64 - b as i64),
            c * &ctx.field.q_powi(-((b * cc) as i64)),
        );
    }
    acc.finish()
}

/// The section F^a E^c k^e ↦ F^a ⊗ E^c k^e.
pub fn lift_d(ctx: &TaftContext, v: &Vector) -> Vector {
    let di = DbarIndex { p: ctx.p };
    v.map_indices(|i| {
        let (a, c, e) = di.exps(i);
        Some(ctx.dh_idx(a, 0, c, e as i64))
    })
}

/// U basis (ℓ, m, n) for F^ℓ E^m k^{2n}, ℓ, m < p, n < 2p.
#[derive(Clone, Copy, Debug)]
pub struct UIndex {
    pub p: usize,
}

impl UIndex {
    pub fn dim(&self) -> usize {
        2 * self.p * self.p * self.p
    }

    pub fn idx(&self, l: usize, m: usize, n: i64) -> usize {
        let t = 2 * self.p;
        (l * self.p + m) * t + n.rem_euclid(t as i64) as usize
    }

    pub fn exps(&self, i: usize) -> (usize, usize, usize) {
        let t = 2 * self.p;
        (i / t / self.p, (i / t) % self.p, i % t)
    }

    /// The D(B) basis index of the lift F^ℓ ⊗ E^m k^{2n}.
    pub fn lift(&self, ctx: &TaftContext, i: usize) -> usize {
        let (l, m, n) = self.exps(i);
        ctx.dh_idx(l, 0, m, 2 * n as i64)
    }

    /// A D̄ vector supported on even k-powers, as U coordinates.
    fn from_dbar(&self, v: &Vector) -> Option<Vector> {
        let di = DbarIndex { p: self.p };
        let mut ok = true;
        let out = v.map_indices(|i| {
            let (a, c, e) = di.exps(i);
            if e % 2 == 1 {
                ok = false;
                return None;
            }
            Some(self.idx(a, c, (e / 2) as i64))
        });
        ok.then_some(out)
    }

    pub fn e(&self, f: &'static CycField) -> Vector {
        Vector::basis(self.idx(0, 1, 0), f)
    }

    pub fn f(&self, f: &'static CycField) -> Vector {
        Vector::basis(self.idx(1, 0, 0), f)
    }

    /// K = k².
    pub fn k(&self, f: &'static CycField) -> Vector {
        Vector::basis(self.idx(0, 0, 1), f)
    }

    pub fn k_inv(&self, f: &'static CycField) -> Vector {
        Vector::basis(self.idx(0, 0, -1), f)
    }
}

fn build_u(ctx: &TaftContext) -> Result<HopfData> {
    let f = ctx.field;
    let ui = UIndex { p: ctx.p };
    let dim = ui.dim();
    let lift = |i: usize| Vector::basis(ui.lift(ctx, i), f);
    let to_u = |v: &Vector, what: &str| -> Result<Vector> {
        ui.from_dbar(&project_d(ctx, v))
            .ok_or_else(|| Error::Verification(alloc::format!("U is not closed under {}", what)))
    };
    let mult: Vec<Result<Vector>> = sweep::map_indexed(dim * dim, |k| {
        to_u(&ctx.d.mul_basis(ui.lift(ctx, k / dim), ui.lift(ctx, k % dim)), "product")
    });
    let mult = mult.into_iter().collect::<Result<Vec<_>>>()?;
    let dd = ctx.d.dim();
    let mut comult = Vec::with_capacity(dim);
    let mut counit = Vec::with_capacity(dim);
    let mut antipode = Vec::with_capacity(dim);
    for i in 0..dim {
        let x = lift(i);
        let mut acc = Accumulator::new();
        for (ab, c) in ctx.d.comul(&x).iter() {
            let l = to_u(&Vector::basis(ab / dd, f), "coproduct")?;
            let r = to_u(&Vector::basis(ab % dd, f), "coproduct")?;
            acc.add_scaled(&crate::hopf::tensor(&l, &r, dim), c);
        }
        comult.push(acc.finish());
        counit.push(ctx.d.counit(&x));
        antipode.push(to_u(&ctx.d.antipode(&x), "antipode")?);
    }
    let labels = (0..dim)
        .map(|i| {
            let (l, m, n) = ui.exps(i);
            monomial(&[("F", l), ("E", m), ("k", 2 * n)])
        })
        .collect();
    HopfData::new(f, labels, mult, Vector::basis(ui.idx(0, 0, 0), f), comult, counit, antipode)
}

/// Index helpers for the κk-invariant span Ψ^{a,b,c} = F^aκ^b # E^c k^{b−2c}.
#[derive(Clone, Copy, Debug)]
pub struct PsiIndex {
    pub p: usize,
}

impl PsiIndex {
    /// 4p³.
    pub fn dim(&self) -> usize {
        4 * self.p * self.p * self.p
    }

    pub fn exps(&self, i: usize) -> (usize, usize, usize) {
        let n = 4 * self.p;
        (i / (n * self.p), (i / self.p) % n, i % self.p)
    }

    pub fn h_index(&self, ctx: &TaftContext, i: usize) -> usize {
        let (a, b, c) = self.exps(i);
        ctx.dh_idx(a, b as i64, c, b as i64 - 2 * c as i64)
    }
}

/// Whether an H(B*) basis index lies in the Ψ-span.
pub fn in_psi(ctx: &TaftContext, k: usize) -> bool {
    let (_, b, c, d) = ctx.dh_exponents(k);
    (b as i64 - 2 * c as i64 - d as i64).rem_euclid(ctx.n as i64) == 0
}

/// H̄ = Ψ-span / (Λ − 1), on the section b < 2p; basis index (a·2p + b)·p + c.
pub struct Hbar {
    id: AlgebraId,
    pub ctx: Arc<TaftContext>,
    table: Vec<OnceBox<Vector>>,
}

impl Hbar {
    pub fn new(ctx: Arc<TaftContext>) -> Hbar {
        let d = 2 * ctx.p * ctx.p * ctx.p;
        Hbar {
            id: fresh_id(),
            ctx,
            table: (0..d * d).map(|_| OnceBox::new()).collect(),
        }
    }

    pub fn idx(&self, a: usize, b: usize, c: usize) -> usize {
        let p = self.ctx.p;
        (a * 2 * p + b) * p + c
    }

    pub fn exps(&self, i: usize) -> (usize, usize, usize) {
        let p = self.ctx.p;
        (i / (2 * p * p), (i / p) % (2 * p), i % p)
    }

    /// H(B*) index of the section representative.
    pub fn lift_index(&self, i: usize) -> usize {
        let (a, b, c) = self.exps(i);
        self.ctx.dh_idx(a, b as i64, c, b as i64 - 2 * c as i64)
    }

    pub fn lift(&self, v: &Vector) -> Vector {
        v.map_indices(|i| Some(self.lift_index(i)))
    }

    /// ρ on one H basis index: Ψ^{a,b+2p,c} ↦ (−1)^b Ψ^{a,b,c}. None outside the Ψ-span.
    pub fn reduce_index(&self, k: usize) -> Option<(usize, bool)> {
        if !in_psi(&self.ctx, k) {
            return None;
        }
        let (a, b, c, _) = self.ctx.dh_exponents(k);
        let tp = 2 * self.ctx.p;
        if b >= tp {
            Some((self.idx(a, b - tp, c), b % 2 == 1))
        } else {
            Some((self.idx(a, b, c), false))
        }
    }

    /// ρ on an H vector, or None if it leaves the Ψ-span.
    pub fn reduce(&self, v: &Vector) -> Option<Vector> {
        let mut acc = Accumulator::new();
        for (k, c) in v.iter() {
            let (i, neg) = self.reduce_index(k)?;
            acc.push(i, if neg { -c } else { c.clone() });
        }
        Some(acc.finish())
    }

    pub fn z(&self) -> Vector {
        self.reduce(&self.ctx.z()).expect("z is invariant")
    }

    pub fn del(&self) -> Vector {
        self.reduce(&self.ctx.del()).expect("∂ is invariant")
    }

    pub fn lambda(&self) -> Vector {
        self.reduce(&self.ctx.lambda()).expect("λ is invariant")
    }
}

impl Algebra for Hbar {
    fn id(&self) -> AlgebraId {
        self.id
    }
    fn field(&self) -> &'static CycField {
        self.ctx.field
    }
    fn dim(&self) -> usize {
        2 * self.ctx.p * self.ctx.p * self.ctx.p
    }
    fn unit(&self) -> Vector {
        Vector::basis(0, self.ctx.field)
    }
    fn mul_basis(&self, i: usize, j: usize) -> Cow<'_, Vector> {
        let d = self.dim();
        Cow::Borrowed(self.table[i * d + j].get_or_init(|| {
            let v = self.ctx.h.mul_basis(self.lift_index(i), self.lift_index(j));
            Box::new(self.reduce(&v).expect("the Ψ-span is a subalgebra"))
        }))
    }
    fn label(&self, i: usize) -> String {
        self.ctx.h.label(self.lift_index(i))
    }
}

/// U acting on H̄ through lifts to D(B) and H(B*).
pub struct HbarAction {
    pub hbar: Arc<Hbar>,
    ui: UIndex,
}

impl Action for HbarAction {
    fn acting_dim(&self) -> usize {
        self.ui.dim()
    }
    fn host_dim(&self) -> usize {
        self.hbar.dim()
    }
    fn field(&self) -> &'static CycField {
        self.hbar.ctx.field
    }
    fn act_basis(&self, u: usize, x: usize) -> Vector {
        let ctx = &self.hbar.ctx;
        let v = ctx.heterotic.inner.act_basis(self.ui.lift(ctx, u), self.hbar.lift_index(x));
        self.hbar.reduce(&v).expect("the action preserves the Ψ-span")
    }
}

pub struct Truncation {
    pub ctx: Arc<TaftContext>,
    pub u: Arc<HopfData>,
    pub hbar: Arc<Hbar>,
    pub action: ModuleAction<HbarAction>,
    pub reports: Vec<CheckReport>,
}

impl Truncation {
    /// Builds U and H̄ and runs every check; failures are recorded in `reports`.
    pub fn build(ctx: Arc<TaftContext>, cfg: &SweepConfig) -> Result<Truncation> {
        let mut reports = Vec::new();
        reports.push(check_central(&ctx));
        let ui = UIndex { p: ctx.p };
        let u = Arc::new(build_u(&ctx)?);
        reports.push(verify_hopf_named(&*u, cfg, "u_hopf"));
        reports.push(check_psi(&ctx, cfg));
        reports.push(check_lambda(&ctx, cfg));
        let hbar = Arc::new(Hbar::new(ctx.clone()));
        reports.push(check_descent(&ctx, &hbar));
        let action = ModuleAction::new(HbarAction { hbar: hbar.clone(), ui });
        let f = ctx.field;
        let gens = alloc::vec![
            ("E".into(), ui.e(f)),
            ("F".into(), ui.f(f)),
            ("K".into(), ui.k(f)),
            ("K^-1".into(), ui.k_inv(f)),
        ];
        let mut r = verify_module_action("hbar_module", &action, &*u, &gens);
        let ma = verify_module_algebra("hbar_module_algebra", &action, &*u, &*hbar, &gens, cfg);
        r.absorb(&ma);
        reports.push(r);
        Ok(Truncation {
            ctx,
            u,
            hbar,
            action,
            reports,
        })
    }

    pub fn passed(&self) -> bool {
        self.reports.iter().all(|r| r.passed())
    }

    pub fn u_index(&self) -> UIndex {
        UIndex { p: self.ctx.p }
    }
}

/// Builds and aborts with the first failing witness.
pub fn truncate(ctx: Arc<TaftContext>, cfg: &SweepConfig) -> Result<Truncation> {
    let t = Truncation::build(ctx, cfg)?;
    if let Some(r) = t.reports.iter().find(|r| !r.passed()) {
        return Err(Error::Verification(alloc::format!("{}", r)));
    }
    Ok(t)
}

/// κk is central and group-like in D(B), and π identifies D(B)/(κk − 1) with D̄.
fn check_central(ctx: &TaftContext) -> CheckReport {
    let mut r = CheckReport::new("kappa_k_central");
    let f = ctx.field;
    let d = &ctx.d;
    let g = ctx.dh_basis(0, 1, 0, 1);
    for (name, x) in ctx.d_generators() {
        if d.mul(&g, &x) != d.mul(&x, &g) {
            r.mark_failed("central", alloc::format!("does not commute with {}", name));
            return r;
        }
    }
    if d.comul(&g) != crate::hopf::tensor(&g, &g, d.dim()) || !d.counit(&g).is_one() {
        r.mark_failed("group_like", "Δ(κk) ≠ κk ⊗ κk or ε(κk) ≠ 1");
        return r;
    }
    let dim = d.dim();
    r.count("basis", dim as u64);
    let w = sweep::find_first(dim, |x| {
        let xv = Vector::basis(x, f);
        let px = project_d(ctx, &xv);
        let (_, b, _, _) = ctx.dh_exponents(x);
        let gb = d.pow(&ctx.dh_basis(0, -1, 0, -1), b as u32);
        let ok = project_d(ctx, &d.mul(&g, &xv)) == px && d.mul(&gb, &xv) == lift_d(ctx, &px);
        (!ok).then_some(x)
    });
    if let Some(x) = w {
        r.mark_failed("projection", d.label(x));
    }
    r
}

/// The κk-fixed subspace of H(B*) is the Ψ-span; it is a subalgebra stable under D(B).
fn check_psi(ctx: &TaftContext, cfg: &SweepConfig) -> CheckReport {
    let mut r = CheckReport::new("psi_span");
    let f = ctx.field;
    let hd = ctx.h.dim();
    let g = ctx.dh_idx(0, 1, 0, 1);
    let act = &ctx.heterotic.inner;
    let w = sweep::find_first(hd, |x| {
        let v = act.act_basis(g, x);
        let diag = v.len() == 1 && v.first().map(|(i, _)| i) == Some(x);
        let fixed = v == Vector::basis(x, f);
        (!diag || fixed != in_psi(ctx, x)).then_some(x)
    });
    if let Some(x) = w {
        r.mark_failed("fixed_space", ctx.h.label(x));
        return r;
    }
    let pi = PsiIndex { p: ctx.p };
    let fixed = (0..hd).filter(|&x| in_psi(ctx, x)).count();
    r.count("dim", fixed as u64);
    if fixed != pi.dim() {
        r.mark_failed("dim", fixed);
        return r;
    }
    let lab = |t: &[usize]| {
        t.iter()
            .map(|&i| ctx.h.label(pi.h_index(ctx, i)))
            .collect::<Vec<_>>()
            .join(", ")
    };
    check_tuples(&mut r, "subalgebra", pi.dim(), 2, cfg, lab, |t| {
        ctx.h
            .mul_basis(pi.h_index(ctx, t[0]), pi.h_index(ctx, t[1]))
            .support()
            .all(|k| in_psi(ctx, k))
    });
    let gens: Vec<(String, usize)> = ctx
        .d_generators()
        .into_iter()
        .map(|(n, v)| (n, v.first().unwrap().0))
        .collect();
    let w = sweep::find_first(pi.dim(), |i| {
        gens.iter()
            .find(|(_, g)| !act.act_basis(*g, pi.h_index(ctx, i)).support().all(|k| in_psi(ctx, k)))
            .map(|(n, _)| (n.clone(), i))
    });
    r.count("stable_cases", (gens.len() * pi.dim()) as u64);
    if let Some((n, i)) = w {
        r.mark_failed("stable", alloc::format!("{} on {}", n, ctx.h.label(pi.h_index(ctx, i))));
    }
    r
}

/// Λ x = (−1)^b (...), x Λ = (−1)^d (...), Λ central on Ψ but not on H.
fn check_lambda(ctx: &TaftContext, cfg: &SweepConfig) -> CheckReport {
    let mut r = CheckReport::new("big_lambda");
    let f = ctx.field;
    let h = &ctx.h;
    let lam = ctx.big_lambda();
    let li = lam.first().unwrap().0;
    let tp = 2 * ctx.p as i64;
    let hd = h.dim();
    let w = sweep::find_first(hd, |x| {
        let (a, b, c, d) = ctx.dh_exponents(x);
        let shifted = ctx.dh_idx(a, b as i64 + tp, c, d as i64 + tp);
        let sign = |e: usize| if e % 2 == 1 { -f.one() } else { f.one() };
        let ok = *h.mul_basis(li, x) == Vector::single(shifted, sign(b))
            && *h.mul_basis(x, li) == Vector::single(shifted, sign(d));
        (!ok).then_some(x)
    });
    r.count("sign_rule_cases", hd as u64);
    if let Some(x) = w {
        r.mark_failed("sign_rule", h.label(x));
        return r;
    }
    let pi = PsiIndex { p: ctx.p };
    check_tuples(&mut r, "central_in_psi", pi.dim(), 1, cfg, |t| h.label(pi.h_index(ctx, t[0])), |t| {
        let x = pi.h_index(ctx, t[0]);
        h.mul_basis(li, x) == h.mul_basis(x, li)
    });
    match (0..hd).find(|&x| h.mul_basis(li, x) != h.mul_basis(x, li)) {
        Some(x) => r.detail("noncentral_witness", h.label(x)),
        None => r.mark_failed("noncentral_in_h", "Λ commutes with every basis element"),
    }
    r
}

/// ρ kills (Λ − 1)Ψ, and that kernel is stable under multiplication by z, ∂, λ and under
/// E, F, k^{±2}. The single k and κ act on Λ by −1, so only the U part of D(B) descends.
fn check_descent(ctx: &TaftContext, hbar: &Hbar) -> CheckReport {
    let mut r = CheckReport::new("descent");
    let h = &ctx.h;
    let pi = PsiIndex { p: ctx.p };
    let lam = ctx.big_lambda();
    let one = h.unit();
    let lm1 = lam.sub(&one);
    let mults = [("z", ctx.z()), ("∂", ctx.del()), ("λ", ctx.lambda())];
    let gens = [
        ("E", ctx.d_alg(1, 0)),
        ("F", ctx.d_dual(1, 0)),
        ("k^2", ctx.d_alg(0, 2)),
        ("k^-2", ctx.d_alg(0, -2)),
    ];
    let act = &ctx.heterotic;
    let w = sweep::find_first(pi.dim(), |i| {
        let y = Vector::basis(pi.h_index(ctx, i), ctx.field);
        let k = h.mul(&lm1, &y);
        let zero = |v: &Vector| hbar.reduce(v).map(|x| x.is_zero()).unwrap_or(false);
        if !zero(&k) {
            return Some(alloc::format!("(Λ−1)·{}", h.label(pi.h_index(ctx, i))));
        }
        for (n, g) in &mults {
            if !zero(&h.mul(g, &k)) || !zero(&h.mul(&k, g)) {
                return Some(alloc::format!("{} with (Λ−1)·{}", n, h.label(pi.h_index(ctx, i))));
            }
        }
        for (n, g) in &gens {
            if !zero(&act.act(g, &k)) {
                return Some(alloc::format!("{} ▷ (Λ−1)·{}", n, h.label(pi.h_index(ctx, i))));
            }
        }
        None
    });
    r.count("cases", pi.dim() as u64);
    if let Some(s) = w {
        r.mark_failed("kernel", s);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_p2() {
        let ctx = Arc::new(TaftContext::build(2).unwrap());
        ctx.materialize();
        let t = Truncation::build(ctx, &SweepConfig::default()).unwrap();
        for r in &t.reports {
            assert!(r.passed(), "{}", r);
        }
        assert_eq!(t.u.dim(), 16);
        assert_eq!(t.hbar.dim(), 16);
    }
}
