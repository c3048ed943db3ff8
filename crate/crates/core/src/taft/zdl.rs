//! The generators z, λ, ∂, κ of H(B*), their relations, the U action on
//! them, and C_q[z,∂] ≅ Mat_p.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::TaftContext;
use crate::cyclotomic::{CycField, CycNumber, HalfInt};
use crate::doubles::Action;
use crate::hopf::Algebra;
use crate::linalg::{Accumulator, Matrix, Subspace, Vector};
use crate::report::CheckReport;
use crate::rewrite::{PbwAlgebra, PowerRule, RewriteSystem, Strategy};
use crate::sweep;

pub const Z: usize = 0;
pub const L: usize = 1;
pub const K: usize = 2;
pub const D: usize = 3;

/// Rules for z < λ < κ < ∂, with λ^{4p} = `lambda_power`.
pub fn zdl_system(f: &'static CycField, lambda_power: CycNumber) -> RewriteSystem {
    let p = f.p() as u32;
    let mut s = RewriteSystem::new(
        f,
        &["z", "l", "K", "d"],
        &[
            PowerRule::Nilpotent(p),
            PowerRule::Cyclic(4 * p),
            PowerRule::Cyclic(4 * p),
            PowerRule::Nilpotent(p),
        ],
    );
    s.skew(L, Z, f.one());
    s.skew(K, Z, f.q_powi(-1));
    s.skew(K, L, f.q_pow(HalfInt::halves(1)));
    s.swap(D, Z, vec![(vec![Z, D], f.q_powi(-2)), (vec![], f.q_diff())]);
    s.skew(D, L, f.one());
    s.skew(D, K, f.q_powi(-1));
    s.set_power_scalar(L, lambda_power);
    s
}

/// C_q[z,∂] on z < ∂.
pub fn czd_system(f: &'static CycField) -> RewriteSystem {
    let p = f.p() as u32;
    let mut s = RewriteSystem::new(f, &["z", "d"], &[PowerRule::Nilpotent(p), PowerRule::Nilpotent(p)]);
    s.swap(1, 0, vec![(vec![0, 1], f.q_powi(-2)), (vec![], f.q_diff())]);
    s
}

pub struct ZdlPresentation {
    pub ctx: Arc<TaftContext>,
    /// z, λ, κ, ∂ as elements of H(B*), in rewriting-generator order.
    pub gens: [Vector; 4],
    pub pbw: PbwAlgebra,
}

impl ZdlPresentation {
    pub fn new(ctx: Arc<TaftContext>) -> crate::Result<ZdlPresentation> {
        let gens = [ctx.z(), ctx.lambda(), ctx.kappa(), ctx.del()];
        // λ^{4p} is −1 in H(B*), not 1
        let pbw = PbwAlgebra::new(zdl_system(ctx.field, -ctx.field.one()))?;
        Ok(ZdlPresentation { ctx, gens, pbw })
    }

    fn h(&self) -> &crate::doubles::HeisenbergDouble {
        &self.ctx.h
    }

    /// Images of all normal monomials in H(B*).
    pub fn images(&self) -> Vec<Vector> {
        let n = self.pbw.dim();
        let mut out: Vec<Vector> = Vec::with_capacity(n);
        for m in 0..n {
            let e = self.pbw.exponents(m);
            let v = match (0..4).rev().find(|&g| e[g] > 0) {
                None => self.h().unit(),
                Some(g) => {
                    let mut pe = e.clone();
                    pe[g] -= 1;
                    self.h().mul(&out[self.pbw.index(&pe)], &self.gens[g])
                }
            };
            out.push(v);
        }
        out
    }

    /// The relations among κ, z, λ, ∂ inside H(B*).
    pub fn relations(&self) -> CheckReport {
        let mut r = CheckReport::new("zdl_relations");
        let h = self.h();
        let f = self.ctx.field;
        let p = self.ctx.p as u32;
        let [z, l, k, d] = &self.gens;
        let one = h.unit();
        let m = |a: &Vector, b: &Vector| h.mul(a, b);
        let checks: Vec<(&str, Vector, Vector)> = vec![
            ("kappa^4p = 1", h.pow(k, 4 * p), one.clone()),
            ("lambda^4p = 1", h.pow(l, 4 * p), one.clone()),
            ("z^p = 0", h.pow(z, p), Vector::zero()),
            ("d^p = 0", h.pow(d, p), Vector::zero()),
            ("dz = (q - q^-1) + q^-2 zd", m(d, z), one.scale(&f.q_diff()).add(&m(z, d).scale(&f.q_powi(-2)))),
            ("lz = zl", m(l, z), m(z, l)),
            ("ld = dl", m(l, d), m(d, l)),
            ("Kz = q^-1 zK", m(k, z), m(z, k).scale(&f.q_powi(-1))),
            ("Kl = q^1/2 lK", m(k, l), m(l, k).scale(&f.q_pow(HalfInt::halves(1)))),
            ("Kd = q dK", m(k, d), m(d, k).scale(&f.q())),
        ];
        for (name, lhs, rhs) in checks {
            r.count("relations", 1);
            if lhs != rhs {
                r.mark_failed(name, alloc::format!("{} vs {}", h.format(&lhs), h.format(&rhs)));
            }
        }
        r.detail("lambda^4p", h.format(&h.pow(l, 4 * p)));
        for (name, g) in [("z", z), ("d", d)] {
            if h.pow(g, p - 1).is_zero() {
                r.mark_failed("nilpotency_order", alloc::format!("{}^(p-1) = 0", name));
            }
        }
        r
    }

    /// Normal monomials z^aλ^bκ^c∂^d map to a basis of H(B*) compatibly with products.
    pub fn pbw_isomorphism(&self) -> CheckReport {
        let mut r = CheckReport::new("zdl_basis");
        let h = self.h();
        let imgs = self.images();
        let n = self.pbw.dim();
        r.count("monomials", n as u64);
        if n != h.dim() {
            r.mark_failed("dim", alloc::format!("{} vs {}", n, h.dim()));
            return r;
        }
        let w = sweep::find_first(n, |m| {
            for g in 0..4 {
                let lhs = h.mul(&imgs[m], &self.gens[g]);
                let mut acc = Accumulator::new();
                for (t, c) in self.pbw.right_mul_gen(&self.pbw.basis(m), g).iter() {
                    acc.add_scaled(&imgs[t], c);
                }
                if lhs != acc.finish() {
                    return Some(alloc::format!("{} · {}", self.pbw.label(m), self.pbw.sys.names[g]));
                }
            }
            None
        });
        if let Some(s) = w {
            r.mark_failed("homomorphism", s);
            return r;
        }
        let mut sp = Subspace::new();
        for v in &imgs {
            sp.insert(v);
        }
        r.count("rank", sp.dim() as u64);
        if sp.dim() != n {
            r.mark_failed("rank", sp.dim());
        }
        // ∂-first monomials hit single basis vectors
        let p = self.ctx.p;
        let nn = self.ctx.n;
        let mut seen = vec![false; n];
        let mut bad = None;
        'outer: for a in 0..p {
            let da = h.pow(&self.gens[D], a as u32);
            for c in 0..nn {
                let dc = h.mul(&da, &h.pow(&self.gens[K], c as u32));
                for b in 0..nn {
                    let db = h.mul(&dc, &h.pow(&self.gens[L], b as u32));
                    for e in 0..p {
                        let v = h.mul(&db, &h.pow(&self.gens[Z], e as u32));
                        let want = self.ctx.dh_idx(a, (b + c) as i64, e, b as i64 - 2 * e as i64);
                        let single = v.len() == 1 && v.first().unwrap().0 == want;
                        if !single || seen[want] {
                            bad = Some(alloc::format!("d^{} K^{} l^{} z^{}", a, c, b, e));
                            break 'outer;
                        }
                        seen[want] = true;
                    }
                }
            }
        }
        if let Some(s) = bad {
            r.mark_failed("diagonal", s);
        }
        r
    }

    /// U generator acting on an H(B*) vector through the heterotic action.
    pub fn act(&self, g: UGen, v: &Vector) -> Vector {
        let hidx = match g {
            UGen::E => self.ctx.dh_idx(0, 0, 1, 0),
            UGen::F => self.ctx.dh_idx(1, 0, 0, 0),
            UGen::K => self.ctx.dh_idx(0, 0, 0, 2),
        };
        self.ctx.heterotic.inner.act_on(hidx, v)
    }

    /// The twelve table entries plus the three on κ, for all exponents.
    pub fn action_table(&self) -> CheckReport {
        let mut r = CheckReport::new("action_table");
        let f = self.ctx.field;
        let h = self.h();
        let p = self.ctx.p;
        let [z, l, k, d] = &self.gens;
        let qi = |n: i64| f.q_inti(n);
        let qh = |t: i64| f.zeta_pow(t);
        let half = |t: i64| f.q_int(HalfInt::from_twice(t));
        let mut entries: Vec<(String, Vector, Vector)> = Vec::new();
        for m in 0..p as i64 {
            let zm = h.pow(z, m as u32);
            let zm1 = h.pow(z, m as u32 + 1);
            let zl = if m > 0 { h.pow(z, m as u32 - 1) } else { Vector::zero() };
            entries.push((alloc::format!("E|>z^{}", m), self.act(UGen::E, &zm), zm1.scale(&-(&f.q_powi(m) * &qi(m)))));
            entries.push((alloc::format!("K|>z^{}", m), self.act(UGen::K, &zm), zm.scale(&f.q_powi(2 * m))));
            entries.push((alloc::format!("F|>z^{}", m), self.act(UGen::F, &zm), zl.scale(&(&qi(m) * &f.q_powi(1 - m)))));
            let dm = h.pow(d, m as u32);
            let dm1 = h.pow(d, m as u32 + 1);
            let dl = if m > 0 { h.pow(d, m as u32 - 1) } else { Vector::zero() };
            entries.push((alloc::format!("E|>d^{}", m), self.act(UGen::E, &dm), dl.scale(&(&f.q_powi(1 - m) * &qi(m)))));
            entries.push((alloc::format!("K|>d^{}", m), self.act(UGen::K, &dm), dm.scale(&f.q_powi(-2 * m))));
            entries.push((alloc::format!("F|>d^{}", m), self.act(UGen::F, &dm), dm1.scale(&-(&f.q_powi(m) * &qi(m)))));
        }
        for n in 0..4 * p as i64 {
            let ln = h.pow(l, n as u32);
            entries.push((alloc::format!("E|>l^{}", n), self.act(UGen::E, &ln), h.mul(&ln, z).scale(&(&qh(-n) * &half(n)))));
            entries.push((alloc::format!("K|>l^{}", n), self.act(UGen::K, &ln), ln.scale(&f.q_powi(-n))));
            entries.push((alloc::format!("F|>l^{}", n), self.act(UGen::F, &ln), h.mul(&ln, d).scale(&-(&qh(n) * &half(n)))));
        }
        let q1 = &f.q() + &f.one();
        let c = -f.q().checked_div(&q1).expect("q + 1 is nonzero");
        entries.push(("E|>K".into(), self.act(UGen::E, k), Vector::zero()));
        entries.push(("K|>K".into(), self.act(UGen::K, k), k.scale(&f.q_powi(-1))));
        entries.push(("F|>K".into(), self.act(UGen::F, k), h.mul(d, k).scale(&c)));
        for (name, lhs, rhs) in entries {
            r.count("entries", 1);
            if lhs != rhs {
                r.mark_failed(name, alloc::format!("{} vs {}", h.format(&lhs), h.format(&rhs)));
                break;
            }
        }
        r
    }

    /// ∂^j z^i from the ℓ-sum, the product in H(B*), and single-swap rewriting agree.
    pub fn power_commutation(&self) -> CheckReport {
        let mut r = CheckReport::new("power_commutation");
        let h = self.h();
        let p = self.ctx.p;
        let czd = czd_system(self.ctx.field);
        let [z, _, _, d] = &self.gens;
        let to_h = |ws: &crate::rewrite::WordSum| {
            let mut acc = Accumulator::new();
            for (w, c) in ws {
                let v = w.iter().fold(h.unit(), |v, &g| h.mul(&v, if g == 0 { z } else { d }));
                acc.add_scaled(&v, c);
            }
            acc.finish()
        };
        for j in 0..p {
            for i in 0..p {
                r.count("pairs", 1);
                let closed = match self.ctx.power_commutation(j, i) {
                    Ok(v) => v,
                    Err(e) => {
                        r.mark_failed("range", e);
                        return r;
                    }
                };
                let prod = h.mul(&h.pow(d, j as u32), &h.pow(z, i as u32));
                let mut word = vec![1usize; j];
                word.extend(core::iter::repeat(0).take(i));
                let rw = match czd.rewrite_word(&word, Strategy::Leftmost, 1_000_000) {
                    Ok(ws) => to_h(&ws),
                    Err(e) => {
                        r.mark_failed("rewrite", e);
                        return r;
                    }
                };
                if closed != prod || closed != rw {
                    r.mark_failed("mismatch", alloc::format!("j={} i={}", j, i));
                    return r;
                }
            }
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UGen {
    E,
    F,
    K,
}

/// Matrices of z and ∂ on span{1, z, …, z^{p−1}} = C_q[z,∂]/C_q[z,∂]∂.
pub fn matp_generators(f: &'static CycField) -> crate::Result<(Matrix, Matrix)> {
    let p = f.p();
    let czd = PbwAlgebra::new(czd_system(f))?;
    let zm = Matrix::from_columns(
        p,
        (0..p).map(|m| if m + 1 < p { Vector::basis(m + 1, f) } else { Vector::zero() }).collect(),
    );
    let dm = Matrix::from_columns(
        p,
        (0..p)
            .map(|m| {
                // ∂ z^m, dropping monomials that end in ∂
                let v = czd.mul(&czd.generator(1), &czd.basis(czd.index(&[m as u32, 0])));
                v.map_indices(|i| {
                    let e = czd.exponents(i);
                    (e[1] == 0).then_some(e[0] as usize)
                })
            })
            .collect(),
    );
    Ok((zm, dm))
}

fn flatten(m: &Matrix) -> Vector {
    let n = m.nrows();
    let mut acc = Accumulator::new();
    for (j, col) in m.columns().iter().enumerate() {
        for (i, c) in col.iter() {
            acc.push(j * n + i, c.clone());
        }
    }
    acc.finish()
}

/// C_q[z,∂] → Mat_p is an algebra isomorphism, and in H̄ λ is central with λ^{2p} = 1
/// and z^a∂^bλ^c form a basis.
pub fn matp_isomorphism(hbar: &super::truncation::Hbar) -> crate::Result<CheckReport> {
    let f = hbar.ctx.field;
    let p = f.p();
    let mut r = CheckReport::new("matp_isomorphism");
    let czd = PbwAlgebra::new(czd_system(f))?;
    let (zm, dm) = matp_generators(f)?;
    let id = Matrix::identity(p, f);
    let rel = dm.mul(&zm).sub(&zm.mul(&dm).scale(&f.q_powi(-2)));
    if rel != id.scale(&f.q_diff()) {
        r.mark_failed("relation", "∂z − q^{-2}z∂ is not (q − q^{-1})·1 on the module");
    }
    if !zm.pow(p as u32, f).is_zero() || !dm.pow(p as u32, f).is_zero() {
        r.mark_failed("nilpotent", "Z^p or D^p is nonzero");
    }
    let rho = |m: usize| {
        let e = czd.exponents(m);
        zm.pow(e[0], f).mul(&dm.pow(e[1], f))
    };
    let mats: Vec<Matrix> = (0..czd.dim()).map(rho).collect();
    if mats[0] != id {
        r.mark_failed("unit", "1 does not map to the identity");
    }
    let n = czd.dim();
    let w = sweep::find_first(n * n, |k| {
        let (i, j) = (k / n, k % n);
        let mut acc = Matrix::zero(p, p);
        for (t, c) in czd.mul_basis(i, j).iter() {
            acc = acc.add(&mats[t].scale(c));
        }
        (acc != mats[i].mul(&mats[j])).then_some(k)
    });
    r.count("pairs", (n * n) as u64);
    if let Some(k) = w {
        r.mark_failed("homomorphism", alloc::format!("{} * {}", czd.label(k / n), czd.label(k % n)));
    }
    let mut sp = Subspace::new();
    for m in &mats {
        sp.insert(&flatten(m));
    }
    r.count("rank", sp.dim() as u64);
    r.detail("rank", sp.dim());
    if sp.dim() != p * p {
        r.mark_failed("rank", sp.dim());
    }

    // inside H̄
    let z = hbar.z();
    let d = hbar.del();
    let l = hbar.lambda();
    if hbar.mul(&l, &z) != hbar.mul(&z, &l) || hbar.mul(&l, &d) != hbar.mul(&d, &l) {
        r.mark_failed("lambda_central", "λ does not commute with z, ∂");
    }
    let l2p = hbar.pow(&l, 2 * p as u32);
    r.detail("lambda^2p", hbar.format(&l2p));
    if l2p.len() != 1 || l2p.first().unwrap().0 != 0 {
        r.mark_failed("lambda_scalar", "λ^{2p} is not a scalar in H̄");
    } else if l2p != hbar.unit() {
        r.mark_failed("lambda_order", alloc::format!("λ^{{2p}} = {} in H̄", l2p.first().unwrap().1));
    }
    let mut sp = Subspace::new();
    for m in hbar_monomials(hbar) {
        sp.insert(&m);
    }
    r.count("hbar_rank", sp.dim() as u64);
    if sp.dim() != hbar.dim() {
        r.mark_failed("hbar_basis", sp.dim());
    }
    Ok(r)
}

/// z^a ∂^b λ^c in H̄, indexed (a·p + b)·2p + c.
pub fn hbar_monomials(hbar: &super::truncation::Hbar) -> Vec<Vector> {
    let p = hbar.ctx.p;
    let z = hbar.z();
    let d = hbar.del();
    let l = hbar.lambda();
    let mut out = Vec::with_capacity(2 * p * p * p);
    let mut za = hbar.unit();
    for _a in 0..p {
        let mut zd = za.clone();
        for _b in 0..p {
            let mut m = zd.clone();
            for _c in 0..2 * p {
                out.push(m.clone());
                m = hbar.mul(&m, &l);
            }
            zd = hbar.mul(&zd, &d);
        }
        za = hbar.mul(&za, &z);
    }
    out
}

/// The scalar c with v = c·w, if any.
pub fn ratio(v: &Vector, w: &Vector) -> Option<CycNumber> {
    v.proportional_to(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::SweepConfig;

    #[test]
    fn zdl_p2() {
        let ctx = Arc::new(TaftContext::build(2).unwrap());
        ctx.materialize();
        let z = ZdlPresentation::new(ctx.clone()).unwrap();
        for r in [z.pbw_isomorphism(), z.action_table(), z.power_commutation()] {
            assert!(r.passed(), "{}", r);
        }
        // every relation holds except λ^{4p}, which is −1
        let rel = z.relations();
        assert_eq!(rel.witness.keys().collect::<Vec<_>>(), ["lambda^4p = 1"]);
        assert_eq!(ctx.h.pow(&ctx.lambda(), 8), ctx.h.unit().neg());
        assert!(z.pbw.verify_confluence(300, 6, 5).passed());
        let t = super::super::truncation::Truncation::build(ctx, &SweepConfig::default()).unwrap();
        let m = matp_isomorphism(&t.hbar).unwrap();
        assert_eq!(m.witness.keys().collect::<Vec<_>>(), ["lambda_order"], "{}", m);
        assert_eq!(m.counts["rank"], 4);
    }
}
