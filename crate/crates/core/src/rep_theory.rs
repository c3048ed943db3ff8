//! Finite-dimensional U_q(sl2)-modules at q = e^{iπ/p}: irreducibles, the
//! Jacobson radical of U, projective multiplicities from the top of a module,
//! and the explicit submodules of H̄.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::{CycField, CycNumber, HalfInt};
use crate::error::{Error, Result};
use crate::hopf::{Algebra, HopfData};
use crate::linalg::{Accumulator, Basis, Matrix, Subspace, Vector};
use crate::report::CheckReport;
use crate::taft::truncation::{Truncation, UIndex};
use crate::taft::zdl::hbar_monomials;

/// A U-module given by the matrices of E, F and K = k².
#[derive(Clone, Debug)]
pub struct UModule {
    pub field: &'static CycField,
    pub dim: usize,
    pub e: Matrix,
    pub f: Matrix,
    pub k: Matrix,
    pub label: String,
}

impl UModule {
    fn p(&self) -> usize {
        self.field.p()
    }

    pub fn k_inv(&self) -> Matrix {
        self.k.pow(2 * self.p() as u32 - 1, self.field)
    }

    /// KE = q²EK, KF = q^{−2}FK, E^p = F^p = 0, K^{2p} = 1, [E,F] = (K − K^{−1})/(q − q^{−1}).
    pub fn check_relations(&self) -> CheckReport {
        let mut r = CheckReport::new("u_relations");
        let f = self.field;
        let p = self.p() as u32;
        let id = Matrix::identity(self.dim, f);
        let (e, ff, k) = (&self.e, &self.f, &self.k);
        let comm = e.mul(ff).sub(&ff.mul(e));
        let rhs = k.sub(&self.k_inv()).scale(&f.q_diff_inv());
        let checks = [
            ("KE = q^2 EK", k.mul(e) == e.mul(k).scale(&f.q_powi(2))),
            ("KF = q^-2 FK", k.mul(ff) == ff.mul(k).scale(&f.q_powi(-2))),
            ("E^p = 0", e.pow(p, f).is_zero()),
            ("F^p = 0", ff.pow(p, f).is_zero()),
            ("K^2p = 1", k.pow(2 * p, f) == id),
            ("[E,F]", comm == rhs),
        ];
        for (name, ok) in checks {
            r.count("relations", 1);
            if !ok {
                r.mark_failed(name, &self.label);
            }
        }
        r
    }

    /// ρ(F^ℓ E^m K^n).
    pub fn basis_matrix(&self, ui: UIndex, i: usize) -> Matrix {
        let (l, m, n) = ui.exps(i);
        self.f
            .pow(l as u32, self.field)
            .mul(&self.e.pow(m as u32, self.field))
            .mul(&self.k.pow(n as u32, self.field))
    }

    pub fn element_matrix(&self, ui: UIndex, x: &Vector) -> Matrix {
        let mut m = Matrix::zero(self.dim, self.dim);
        for (i, c) in x.iter() {
            m = m.add(&self.basis_matrix(ui, i).scale(c));
        }
        m
    }

    /// ρ(g)ρ(y) = ρ(g·y) for g ∈ {E, F, K} and every basis element y of U.
    pub fn check_representation(&self, u: &HopfData, ui: UIndex) -> CheckReport {
        let mut r = CheckReport::new("u_representation");
        let f = self.field;
        let mats: Vec<Matrix> = (0..u.dim()).map(|i| self.basis_matrix(ui, i)).collect();
        for (name, g, gm) in [("E", ui.e(f), &self.e), ("F", ui.f(f), &self.f), ("K", ui.k(f), &self.k)] {
            for y in 0..u.dim() {
                r.count("cases", 1);
                let prod = u.mul(&g, &u.basis(y));
                let mut acc = Matrix::zero(self.dim, self.dim);
                for (t, c) in prod.iter() {
                    acc = acc.add(&mats[t].scale(c));
                }
                if acc != gm.mul(&mats[y]) {
                    r.mark_failed("product", alloc::format!("{} · {}", name, u.label(y)));
                    return r;
                }
            }
        }
        r
    }

    /// The restriction of an action on a host space to a stable subspace with the given basis.
    pub fn restrict(label: &str, field: &'static CycField, e: &Matrix, f: &Matrix, k: &Matrix, carrier: &[Vector]) -> Result<UModule> {
        let basis = Basis::new(carrier.to_vec(), field)?;
        let restrict = |m: &Matrix| -> Result<Matrix> {
            let cols = carrier
                .iter()
                .map(|v| {
                    basis
                        .coordinates(&m.apply(v))
                        .ok_or_else(|| Error::Verification(alloc::format!("{} is not U-stable", label)))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Matrix::from_columns(carrier.len(), cols))
        };
        Ok(UModule {
            field,
            dim: carrier.len(),
            e: restrict(e)?,
            f: restrict(f)?,
            k: restrict(k)?,
            label: label.into(),
        })
    }

    /// The same module in the basis given by the columns of `t`.
    pub fn conjugate(&self, t: &Matrix) -> Result<UModule> {
        let ti = t.inverse(self.field)?;
        let c = |m: &Matrix| ti.mul(m).mul(t);
        Ok(UModule {
            field: self.field,
            dim: self.dim,
            e: c(&self.e),
            f: c(&self.f),
            k: c(&self.k),
            label: self.label.clone(),
        })
    }

    /// The smallest stable subspace containing the given vectors.
    pub fn generate(&self, seeds: &[Vector]) -> Subspace {
        let mut sp = Subspace::new();
        let mut todo: Vec<Vector> = seeds.to_vec();
        while let Some(v) = todo.pop() {
            if sp.insert(&v) {
                for m in [&self.e, &self.f, &self.k] {
                    todo.push(m.apply(&v));
                }
            }
        }
        sp
    }

    /// Simple iff the E-singular space is one-dimensional and generates the module.
    pub fn is_simple(&self) -> bool {
        let sing = self.e.kernel_in(self.field);
        sing.len() == 1 && self.generate(&sing).dim() == self.dim
    }
}

/// Sign of a highest weight ±q^{s−1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn scalar(self, f: &'static CycField) -> CycNumber {
        match self {
            Sign::Plus => f.one(),
            Sign::Minus => -f.one(),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// The s-dimensional irreducible of highest weight sign·q^{s−1}:
/// K v_n = sign q^{s−1−2n} v_n, F v_n = v_{n+1}, E v_n = sign [n][s−n] v_{n−1}.
pub fn irreducible_module(p: usize, sign: Sign, s: usize) -> Result<UModule> {
    if s < 1 || s > p {
        return Err(Error::OutOfRange { index: s, dim: p });
    }
    let f = CycField::get(p)?;
    let sg = sign.scalar(f);
    let e = Matrix::from_columns(
        s,
        (0..s)
            .map(|n| {
                if n == 0 {
                    Vector::zero()
                } else {
                    Vector::single(n - 1, &(&sg * &f.q_inti(n as i64)) * &f.q_inti((s - n) as i64))
                }
            })
            .collect(),
    );
    let ff = Matrix::from_columns(
        s,
        (0..s).map(|n| if n + 1 < s { Vector::basis(n + 1, f) } else { Vector::zero() }).collect(),
    );
    let k = Matrix::diagonal(&(0..s).map(|n| &sg * &f.q_powi(s as i64 - 1 - 2 * n as i64)).collect::<Vec<_>>());
    Ok(UModule {
        field: f,
        dim: s,
        e,
        f: ff,
        k,
        label: alloc::format!("L{}{}", sign.as_char(), s),
    })
}

/// dim P^±_s.
pub fn projective_dim(p: usize, s: usize) -> usize {
    if s == p {
        p
    } else {
        2 * p
    }
}

/// Σ over both signs of n·dim P_n, which should equal 2p³.
pub fn dimension_audit(p: usize) -> (usize, usize) {
    let total = 2 * (1..=p).map(|n| n * projective_dim(p, n)).sum::<usize>();
    (total, 2 * p * p * p)
}

/// rad U as a subspace of U.
pub struct Radical {
    pub basis: Vec<Vector>,
    pub quotient_dim: usize,
}

/// rad U = ∩ ker ρ over the 2p irreducibles.
pub fn jacobson_radical(u: &HopfData, ui: UIndex) -> Result<Radical> {
    let p = ui.p;
    let irr: Vec<UModule> = [Sign::Plus, Sign::Minus]
        .iter()
        .flat_map(|&sg| (1..=p).map(move |s| (sg, s)))
        .map(|(sg, s)| irreducible_module(p, sg, s))
        .collect::<Result<_>>()?;
    let rows: usize = irr.iter().map(|m| m.dim * m.dim).sum();
    let cols: Vec<Vector> = (0..u.dim())
        .map(|i| {
            let mut acc = Accumulator::new();
            let mut off = 0;
            for m in &irr {
                let bm = m.basis_matrix(ui, i);
                for (j, col) in bm.columns().iter().enumerate() {
                    for (r, c) in col.iter() {
                        acc.push(off + j * m.dim + r, c.clone());
                    }
                }
                off += m.dim * m.dim;
            }
            acc.finish()
        })
        .collect();
    let map = Matrix::from_columns(rows, cols);
    let basis = map.kernel_in(u.field());
    Ok(Radical {
        quotient_dim: u.dim() - basis.len(),
        basis,
    })
}

/// rad U is a two-sided ideal, nilpotent, and of codimension Σ 2s².
pub fn verify_radical(u: &HopfData, ui: UIndex, rad: &Radical) -> CheckReport {
    let mut r = CheckReport::new("jacobson_radical");
    let f = u.field();
    let p = ui.p;
    let expect = 2 * p * (p + 1) * (2 * p + 1) / 6;
    r.count("dim", rad.basis.len() as u64);
    r.count("quotient_dim", rad.quotient_dim as u64);
    if rad.quotient_dim != expect {
        r.mark_failed("quotient_dim", alloc::format!("{} vs {}", rad.quotient_dim, expect));
    }
    let sp = Subspace::spanned_by(&rad.basis);
    if sp.contains(&u.unit()) {
        r.mark_failed("unit", "1 ∈ rad U");
    }
    for g in [ui.e(f), ui.f(f), ui.k(f)] {
        for x in &rad.basis {
            if !sp.contains(&u.mul(&g, x)) || !sp.contains(&u.mul(x, &g)) {
                r.mark_failed("ideal", u.format(x));
                return r;
            }
        }
    }
    let mut power = rad.basis.clone();
    let mut n = 1;
    while !power.is_empty() {
        let mut next = Subspace::new();
        for a in &power {
            for b in &rad.basis {
                next.insert(&u.mul(a, b));
            }
        }
        power = next.basis().cloned().collect();
        n += 1;
        if n > u.dim() + 1 {
            r.mark_failed("nilpotent", "rad^N ≠ 0");
            return r;
        }
    }
    r.count("nilpotency_index", n as u64);
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    pub carrier: String,
    pub module_dim: usize,
    pub top_dim: usize,
    /// (sign, s) ↦ multiplicity of P^sign_s.
    pub multiplicities: BTreeMap<(Sign, usize), usize>,
    /// Σ mult · dim P.
    pub projective_total: usize,
}

impl DecompositionReport {
    pub fn get(&self, sign: Sign, s: usize) -> usize {
        self.multiplicities.get(&(sign, s)).copied().unwrap_or(0)
    }

    pub fn audit_passes(&self) -> bool {
        self.projective_total == self.module_dim
    }
}

impl core::fmt::Display for DecompositionReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} (dim {}):", self.carrier, self.module_dim)?;
        for ((sg, s), m) in &self.multiplicities {
            if *m > 0 {
                write!(f, " {}P{}{}", if *m > 1 { alloc::format!("{}", m) } else { String::new() }, sg.as_char(), s)?;
            }
        }
        Ok(())
    }
}

/// Multiplicities of projective covers from the top M/(rad U)M. Projectivity of M is assumed.
pub fn top_multiplicities(m: &UModule, rad: &Radical, ui: UIndex) -> DecompositionReport {
    let f = m.field;
    let p = ui.p;
    let mut rm = Subspace::new();
    for x in &rad.basis {
        let a = m.element_matrix(ui, x);
        for c in a.columns() {
            rm.insert(c);
        }
    }
    let n = m.dim;
    let mut mult = BTreeMap::new();
    let mut total = 0;
    for sg in [Sign::Plus, Sign::Minus] {
        for s in 1..=p {
            let w = &sg.scalar(f) * &f.q_powi(s as i64 - 1);
            let kw = m.k.sub(&Matrix::identity(n, f).scale(&w));
            let cols: Vec<Vector> = (0..n)
                .map(|i| {
                    let a = rm.reduce(m.e.column(i));
                    let b = rm.reduce(kw.column(i));
                    a.add(&b.map_indices(|j| Some(j + n)))
                })
                .collect();
            let k = Matrix::from_columns(2 * n, cols).kernel_in(f).len();
            let c = k - rm.dim();
            mult.insert((sg, s), c);
            total += c * projective_dim(p, s);
        }
    }
    DecompositionReport {
        carrier: m.label.clone(),
        module_dim: n,
        top_dim: n - rm.dim(),
        multiplicities: mult,
        projective_total: total,
    }
}

/// Named subspaces of H̄ in the monomial basis z^a∂^bλ^c.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Carrier {
    Czd,
    Hbar,
    LambdaPower(usize),
    OddSubalgebra,
}

impl Carrier {
    pub fn name(self) -> String {
        match self {
            Carrier::Czd => "czd".into(),
            Carrier::Hbar => "hbar".into(),
            Carrier::LambdaPower(k) => alloc::format!("lambda^{}", k),
            Carrier::OddSubalgebra => "odd-subalgebra".into(),
        }
    }
}

/// H̄ with its U action and monomial basis, ready for decompositions.
pub struct HbarModules<'a> {
    pub t: &'a Truncation,
    pub ui: UIndex,
    pub monomials: Vec<Vector>,
    pub e: Matrix,
    pub f: Matrix,
    pub k: Matrix,
    mono_basis: Basis,
    sigma_monomials: Vec<Vector>,
}

impl<'a> HbarModules<'a> {
    pub fn new(t: &'a Truncation) -> HbarModules<'a> {
        let ui = t.u_index();
        let fl = t.ctx.field;
        let p = ui.p;
        let hb = &*t.hbar;
        let mat = |v: Vector| t.action.matrix(v.first().unwrap().0).clone();
        let monomials = hbar_monomials(hb);
        let mono = |a: usize, b: usize, c: usize| &monomials[(a * p + b) * 2 * p + c];
        let c = mono(0, 0, 2 * p - 1);
        let lam_2p = hb.mul(c, mono(0, 0, 1));
        let scalar = lam_2p.get(hb.unit().first().unwrap().0).cloned().expect("λ^{2p} is a nonzero scalar");
        let s_lambda = c.scale(&fl.q_pow(HalfInt::halves(1)).checked_div(&scalar).expect("λ is invertible"));
        let mut s_pow = vec![hb.unit()];
        for l in 1..2 * p {
            s_pow.push(hb.mul(&s_pow[l - 1], &s_lambda));
        }
        let sigma_monomials = (0..monomials.len())
            .map(|i| {
                let (a, b, l) = (i / (2 * p) / p, (i / (2 * p)) % p, i % (2 * p));
                hb.mul(&s_pow[l], mono(b, a, 0))
            })
            .collect();
        HbarModules {
            t,
            ui,
            mono_basis: Basis::new(monomials.clone(), fl).expect("monomials are a basis"),
            sigma_monomials,
            monomials,
            e: mat(ui.e(fl)),
            f: mat(ui.f(fl)),
            k: mat(ui.k(fl)),
        }
    }

    fn p(&self) -> usize {
        self.ui.p
    }

    /// z^a ∂^b λ^c.
    pub fn monomial(&self, a: usize, b: usize, c: usize) -> &Vector {
        let p = self.p();
        &self.monomials[(a * p + b) * 2 * p + c % (2 * p)]
    }

    pub fn carrier(&self, c: Carrier) -> Vec<Vector> {
        let p = self.p();
        let block = |l: usize| -> Vec<Vector> {
            (0..p)
                .flat_map(|a| (0..p).map(move |b| (a, b)))
                .map(|(a, b)| self.monomial(a, b, l).clone())
                .collect()
        };
        match c {
            Carrier::Czd => block(0),
            Carrier::Hbar => self.monomials.clone(),
            Carrier::LambdaPower(k) => block(k % (2 * p)),
            Carrier::OddSubalgebra => {
                let mut v = block(0);
                v.extend(block(p));
                v
            }
        }
    }

    pub fn module(&self, c: Carrier) -> Result<UModule> {
        UModule::restrict(&c.name(), self.t.ctx.field, &self.e, &self.f, &self.k, &self.carrier(c))
    }

    pub fn decompose(&self, c: Carrier, rad: &Radical) -> Result<DecompositionReport> {
        Ok(top_multiplicities(&self.module(c)?, rad, self.ui))
    }

    /// The U action does not change the λ-degree.
    pub fn check_lambda_degree(&self) -> CheckReport {
        let mut r = CheckReport::new("lambda_degree");
        let p = self.p();
        for l in 0..2 * p {
            if let Err(e) = self.module(Carrier::LambdaPower(l)) {
                r.mark_failed("block", alloc::format!("λ^{}: {}", l, e));
                return r;
            }
            r.count("blocks", 1);
        }
        r
    }

    fn scalar(&self, v: &Vector, w: &Vector, r: &mut CheckReport, key: &str) -> Option<CycNumber> {
        match v.proportional_to(w) {
            Some(c) if !c.is_zero() && !w.is_zero() => {
                r.detail(key, &c);
                Some(c)
            }
            _ => {
                r.mark_failed(key, "not a nonzero multiple");
                None
            }
        }
    }

    /// The P⁺₁ diagram inside C_q[z,∂].
    pub fn verify_p1(&self) -> CheckReport {
        let mut r = CheckReport::new("P1");
        let f = self.t.ctx.field;
        let p = self.p();
        let hb = &*self.t.hbar;
        let one = hb.unit();
        let z = |m: usize| self.monomial(m, 0, 0).clone();
        let d = |m: usize| self.monomial(0, m, 0).clone();
        let mut top = Vector::zero();
        for i in 1..p {
            let c = f.q_inti(i as i64).inv().expect("[i] ≠ 0 for i < p");
            top = top.add_scaled(self.monomial(i, i, 0), &c);
        }
        let (e, ff, k) = (&self.e, &self.f, &self.k);
        if !e.apply(&one).is_zero() || !ff.apply(&one).is_zero() {
            r.mark_failed("unit", "E or F does not kill 1");
        }
        self.scalar(&e.apply(&top), &z(1), &mut r, "E top / z");
        self.scalar(&ff.apply(&top), &d(1), &mut r, "F top / d");
        self.scalar(&ff.apply(&z(1)), &one, &mut r, "F z / 1");
        self.scalar(&e.apply(&d(1)), &one, &mut r, "E d / 1");
        for m in 1..p - 1 {
            self.scalar(&e.apply(&z(m)), &z(m + 1), &mut r, &alloc::format!("E z^{} / z^{}", m, m + 1));
            self.scalar(&ff.apply(&z(m + 1)), &z(m), &mut r, &alloc::format!("F z^{} / z^{}", m + 1, m));
            self.scalar(&ff.apply(&d(m)), &d(m + 1), &mut r, &alloc::format!("F d^{} / d^{}", m, m + 1));
            self.scalar(&e.apply(&d(m + 1)), &d(m), &mut r, &alloc::format!("E d^{} / d^{}", m + 1, m));
        }
        if !e.apply(&z(p - 1)).is_zero() || !ff.apply(&d(p - 1)).is_zero() {
            r.mark_failed("chain_ends", "E z^{p-1} or F d^{p-1} nonzero");
        }
        // weights
        let mut vecs: Vec<(Vector, CycNumber)> = vec![(top.clone(), f.one()), (one.clone(), f.one())];
        for m in 1..p {
            vecs.push((z(m), f.q_powi(2 * m as i64)));
            vecs.push((d(m), f.q_powi(-2 * m as i64)));
        }
        for (v, w) in &vecs {
            if k.apply(v) != v.scale(w) {
                r.mark_failed("weight", hb.format(v));
            }
        }
        let all: Vec<Vector> = vecs.iter().map(|(v, _)| v.clone()).collect();
        let span = Subspace::spanned_by(&all);
        r.count("span_dim", span.dim() as u64);
        if span.dim() != 2 * p {
            r.mark_failed("span_dim", span.dim());
        }
        let stable = |vs: &[Vector], sp: &Subspace| vs.iter().all(|v| [e, ff, k].iter().all(|m| sp.contains(&m.apply(v))));
        if !stable(&all, &span) {
            r.mark_failed("submodule", "span is not U-stable");
        }
        let lower: Vec<Vector> = all[1..].to_vec();
        let lsp = Subspace::spanned_by(&lower);
        if !stable(&lower, &lsp) {
            r.mark_failed("no_inverse_arrows", "the chains reach back to the top vector");
        }
        r
    }

    /// The anti-automorphism z ↦ ∂, ∂ ↦ z, λ ↦ ζλ^{−1}. The factor ζ keeps λ^{2p} fixed,
    /// since λ^{2p} is a scalar c with c² = −1.
    pub fn sigma(&self, v: &Vector) -> Vector {
        let coords = self.mono_basis.coordinates(v).expect("in H̄");
        let mut acc = Accumulator::new();
        for (i, c) in coords.iter() {
            acc.add_scaled(&self.sigma_monomials[i], c);
        }
        acc.finish()
    }

    /// σ reverses products and exchanges E with F and K with K^{−1}.
    pub fn check_sigma(&self) -> CheckReport {
        let mut r = CheckReport::new("sigma");
        let hb = &*self.t.hbar;
        let n = hb.dim();
        let f = hb.field();
        let imgs: Vec<Vector> = (0..n).map(|i| self.sigma(&Vector::basis(i, f))).collect();
        let lin = |v: &Vector| {
            let mut acc = Accumulator::new();
            for (i, c) in v.iter() {
                acc.add_scaled(&imgs[i], c);
            }
            acc.finish()
        };
        let kinv = self.k.pow(2 * self.p() as u32 - 1, f);
        for x in 0..n {
            let sx = &imgs[x];
            if lin(&self.e.column(x).clone()) != self.f.apply(sx)
                || lin(&self.f.column(x).clone()) != self.e.apply(sx)
                || lin(&self.k.column(x).clone()) != kinv.apply(sx)
            {
                r.mark_failed("intertwining", hb.label(x));
                return r;
            }
            for y in 0..n {
                if lin(&hb.mul_basis(x, y)) != hb.mul(&imgs[y], sx) {
                    r.mark_failed("anti_multiplicative", alloc::format!("{} {}", hb.label(x), hb.label(y)));
                    return r;
                }
            }
        }
        r.count("pairs", (n * n) as u64);
        r
    }

    /// The λ-linear copy of P⁺₂ built from t₊, and its λ^{−1} image under σ.
    pub fn verify_p2(&self) -> CheckReport {
        let mut r = CheckReport::new("P2");
        let p = self.p();
        if p < 3 {
            return r.degenerate("the chains of length p − 2 are empty at p = 2");
        }
        let f = self.t.ctx.field;
        let (e, ff, k) = (&self.e, &self.f, &self.k);
        let hi = |t: i64| f.q_int(HalfInt::from_twice(t));
        let c_i = |i: usize| {
            let mut c = f.q_pow(HalfInt::halves(i as i64));
            for n in 1..=i as i64 {
                c = &c * &hi(2 * n - 1).checked_div(&f.q_inti(n)).expect("[n] ≠ 0");
            }
            c
        };
        let alpha = |i: usize| {
            let mut a = f.zero();
            for j in 1..=i as i64 {
                a += f.q_pow(HalfInt::from_twice(2 * j + 1)).checked_div(&hi(2 * j - 1)).expect("[j − 1/2] ≠ 0");
            }
            a
        };
        let q2p1 = &f.q_powi(2) + &f.one();
        let lz = |a: usize, b: usize| self.monomial(a, b, 1).clone();
        let mut t_plus = Vector::zero();
        for i in 1..=p - 2 {
            t_plus = t_plus.add_scaled(&lz(i + 1, i), &(&alpha(i) * &c_i(i)));
        }
        t_plus = t_plus.scale(&q2p1.inv().unwrap());
        let mut l1 = Vector::zero();
        for i in 0..=p - 3 {
            l1 = l1.add_scaled(&lz(i + 2, i), &c_i(i));
        }
        l1 = l1.scale(&f.q_powi(2).checked_div(&q2p1).unwrap());
        let mut b_plus = Vector::zero();
        for i in 0..=p - 2 {
            b_plus = b_plus.add_scaled(&lz(i + 1, i), &c_i(i));
        }
        if k.apply(&t_plus) != t_plus.scale(&f.q()) {
            r.mark_failed("t+_weight", "K t+ ≠ q t+");
        }
        self.scalar(&e.apply(&t_plus), &l1, &mut r, "E t+ / l1");
        self.scalar(&ff.apply(&l1), &b_plus, &mut r, "F l1 / b+");
        let mut l = l1.clone();
        for i in 1..p - 2 {
            let next = e.apply(&l);
            if next.is_zero() {
                r.mark_failed("l_chain", alloc::format!("E l{} = 0", i));
                return r;
            }
            l = next;
        }
        self.scalar(&l, &lz(p - 1, 0), &mut r, "l_{p-2} / l z^{p-1}");
        if !e.apply(&l).is_zero() {
            r.mark_failed("l_chain_end", "E l_{p-2} ≠ 0");
        }
        let t_minus = ff.apply(&t_plus);
        if t_minus.is_zero() {
            r.mark_failed("t-", "F t+ = 0");
        }
        if k.apply(&t_minus) != t_minus.scale(&f.q_powi(-1)) {
            r.mark_failed("t-_weight", "K t- ≠ q^-1 t-");
        }
        let r1 = ff.apply(&t_minus);
        if r1.is_zero() || k.apply(&r1) != r1.scale(&f.q_powi(-3)) {
            r.mark_failed("r1", "F t- is not a nonzero vector of weight q^-3");
        }
        self.scalar(&ff.apply(&b_plus), &e.apply(&r1), &mut r, "F b+ / E r1");
        let gen = self.generate(&[t_plus.clone()]);
        r.count("submodule_dim", gen.dim() as u64);
        if gen.dim() != 2 * p {
            r.mark_failed("submodule_dim", gen.dim());
        }

        // the copy linear in λ^{-1}
        let s_top = self.sigma(&t_plus);
        let mut rr = ff.apply(&s_top);
        self.scalar(&rr, &self.sigma(&l1), &mut r, "F σ(t+) / σ(l1)");
        for i in 1..p - 2 {
            let next = ff.apply(&rr);
            if next.is_zero() {
                r.mark_failed("r_chain", alloc::format!("F r{} = 0", i));
                return r;
            }
            rr = next;
        }
        self.scalar(&rr, self.monomial(0, p - 1, 2 * p - 1), &mut r, "r_{p-2} / l^-1 d^{p-1}");
        let gen2 = self.generate(&[s_top]);
        r.count("second_copy_dim", gen2.dim() as u64);
        if gen2.dim() != 2 * p {
            r.mark_failed("second_copy_dim", gen2.dim());
        }
        let mut both = gen.clone();
        for v in gen2.basis() {
            both.insert(v);
        }
        if both.dim() != 4 * p {
            r.mark_failed("direct_sum", both.dim());
        }
        r
    }

    fn generate(&self, seeds: &[Vector]) -> Subspace {
        let m = UModule {
            field: self.t.ctx.field,
            dim: self.t.hbar.dim(),
            e: self.e.clone(),
            f: self.f.clone(),
            k: self.k.clone(),
            label: "hbar".into(),
        };
        m.generate(seeds)
    }

    /// C_q[z,∂] + λ^p C_q[z,∂] is a subalgebra and a submodule containing each odd P^± once.
    pub fn odd_projective_subalgebra(&self, rad: &Radical) -> (CheckReport, Option<DecompositionReport>) {
        let mut r = CheckReport::new("odd_projective_subalgebra");
        let p = self.p();
        let hb = &*self.t.hbar;
        let vs = self.carrier(Carrier::OddSubalgebra);
        let sp = Subspace::spanned_by(&vs);
        r.count("dim", sp.dim() as u64);
        if sp.dim() != 2 * p * p {
            r.mark_failed("dim", sp.dim());
        }
        for x in &vs {
            for y in &vs {
                if !sp.contains(&hb.mul(x, y)) {
                    r.mark_failed("closed", alloc::format!("{} · {}", hb.format(x), hb.format(y)));
                    return (r, None);
                }
            }
        }
        let d = match self.decompose(Carrier::OddSubalgebra, rad) {
            Ok(d) => d,
            Err(e) => {
                r.mark_failed("submodule", e);
                return (r, None);
            }
        };
        for sg in [Sign::Plus, Sign::Minus] {
            for s in 1..=p {
                let want = usize::from(s % 2 == 1);
                if d.get(sg, s) != want {
                    r.mark_failed("multiplicity", alloc::format!("P{}{} = {}", sg.as_char(), s, d.get(sg, s)));
                }
            }
        }
        (r, Some(d))
    }
}

/// The expected multiplicities of C_q[z,∂]: P⁺_s once for odd s ≤ ν.
pub fn czd_expected(p: usize, sign: Sign, s: usize) -> usize {
    let nu = if p % 2 == 0 { p - 1 } else { p };
    usize::from(sign == Sign::Plus && s % 2 == 1 && s <= nu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::SweepConfig;
    use crate::taft::TaftContext;
    use alloc::sync::Arc;

    #[test]
    fn irreducibles_are_simple_modules() {
        for p in 2..=3 {
            for sg in [Sign::Plus, Sign::Minus] {
                for s in 1..=p {
                    let m = irreducible_module(p, sg, s).unwrap();
                    assert!(m.check_relations().passed(), "{}", m.label);
                    assert!(m.is_simple(), "{}", m.label);
                }
            }
        }
        assert!(irreducible_module(3, Sign::Plus, 4).is_err());
        let triv = irreducible_module(3, Sign::Plus, 1).unwrap();
        assert!(triv.e.is_zero() && triv.f.is_zero());
        assert_eq!(triv.k, Matrix::identity(1, triv.field));
        for sg in [Sign::Plus, Sign::Minus] {
            let m = irreducible_module(3, sg, 3).unwrap();
            let f = m.field;
            let v0 = Vector::basis(0, f);
            let want = v0.scale(&(&sg.scalar(f) * &f.q_inti(2)));
            assert_eq!(m.e.apply(&m.f.apply(&v0)), want);
        }
    }

    #[test]
    fn audit() {
        for p in 2..=6 {
            let (a, b) = dimension_audit(p);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn decompositions_p2() {
        let ctx = Arc::new(TaftContext::build(2).unwrap());
        ctx.materialize();
        let t = Truncation::build(ctx, &SweepConfig::default()).unwrap();
        let ui = t.u_index();
        for sg in [Sign::Plus, Sign::Minus] {
            for s in 1..=2 {
                let m = irreducible_module(2, sg, s).unwrap();
                assert!(m.check_representation(&t.u, ui).passed());
            }
        }
        let rad = jacobson_radical(&t.u, ui).unwrap();
        assert!(verify_radical(&t.u, ui, &rad).passed());
        let hm = HbarModules::new(&t);
        let d = hm.decompose(Carrier::Hbar, &rad).unwrap();
        for sg in [Sign::Plus, Sign::Minus] {
            for s in 1..=2 {
                assert_eq!(d.get(sg, s), s, "{}", d);
            }
        }
        let c = hm.decompose(Carrier::Czd, &rad).unwrap();
        assert_eq!(c.get(Sign::Plus, 1), 1);
        assert!(c.audit_passes());
        let p1 = hm.verify_p1();
        assert!(p1.passed(), "{}", p1);
        // [1] q^{1-1} from the action table
        assert_eq!(p1.details["F z / 1"], alloc::string::ToString::to_string(&t.ctx.field.one()));
        assert!(hm.check_sigma().passed());
        assert_eq!(hm.verify_p2().status, crate::report::Status::Degenerate);
        assert!(hm.check_lambda_degree().passed());
        let (o, _) = hm.odd_projective_subalgebra(&rad);
        assert!(o.passed(), "{}", o);
    }
}
