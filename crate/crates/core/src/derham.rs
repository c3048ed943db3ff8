//! Differential calculi ΩC_q[z,∂] and ΩH̄: graded PBW algebras with a
//! differential and a U action extended through the coproduct.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::{CycField, CycNumber};
use crate::error::{Error, Result};
use crate::hopf::{check_tuples, tensor, Algebra, Coalgebra, SweepConfig};
use crate::linalg::{Accumulator, Matrix, Subspace, Vector};
use crate::rep_theory::{HbarModules, UModule};
use crate::report::CheckReport;
use crate::rewrite::{PbwAlgebra, PowerRule, RewriteSystem, WordSum};
use crate::taft::truncation::Truncation;

/// Generator slots of an Ω algebra. The λ entries are present only for ΩH̄.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaGens {
    pub z: usize,
    pub del: usize,
    pub lambda: Option<usize>,
    pub dz: usize,
    pub ddel: usize,
    pub dlambda: Option<usize>,
}

const CZD: OmegaGens = OmegaGens {
    z: 0,
    del: 1,
    lambda: None,
    dz: 2,
    ddel: 3,
    dlambda: None,
};

const HBAR: OmegaGens = OmegaGens {
    z: 0,
    del: 1,
    lambda: Some(2),
    dz: 3,
    ddel: 4,
    dlambda: Some(5),
};

/// E, F, K, K^{−1}.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaOp {
    E,
    F,
    K,
    KInv,
}

/// The normal-ordered algebra with degrees and the differential on the basis.
pub struct GradedAlgebra {
    pub pbw: PbwAlgebra,
    pub gens: OmegaGens,
    /// Degree of each generator.
    pub degrees: Vec<u32>,
    /// d(g) as a generator index, or None when d(g) = 0.
    pub d_of: Vec<Option<usize>>,
    pub d: Matrix,
}

impl GradedAlgebra {
    pub fn dim(&self) -> usize {
        self.pbw.dim()
    }

    pub fn degree(&self, m: usize) -> u32 {
        self.pbw.exponents(m).iter().zip(&self.degrees).map(|(e, d)| e * d).sum()
    }

    pub fn generator(&self, g: usize) -> Vector {
        self.pbw.generator(g)
    }

    /// Evaluates a product of vectors.
    pub fn prod(&self, xs: &[&Vector]) -> Vector {
        self.pbw.mul_all(xs)
    }

    pub fn differential(&self, v: &Vector) -> Vector {
        self.d.apply(v)
    }

    /// d applied letter by letter to an arbitrary word, with the graded sign.
    pub fn d_word(&self, w: &[usize]) -> Vector {
        let f = self.pbw.field();
        let mut acc = Accumulator::new();
        let mut deg = 0;
        for (i, &g) in w.iter().enumerate() {
            if let Some(dg) = self.d_of[g] {
                let mut word = w.to_vec();
                word[i] = dg;
                let sign = if deg % 2 == 0 { f.one() } else { -f.one() };
                acc.add_scaled(&self.pbw.eval_word(&word), &sign);
            }
            deg += self.degrees[g];
        }
        acc.finish()
    }
}

/// The U action on a graded algebra.
pub struct OmegaAction {
    pub e: Matrix,
    pub f: Matrix,
    pub k: Matrix,
    pub k_inv: Matrix,
}

impl OmegaAction {
    pub fn matrix(&self, op: OmegaOp) -> &Matrix {
        match op {
            OmegaOp::E => &self.e,
            OmegaOp::F => &self.f,
            OmegaOp::K => &self.k,
            OmegaOp::KInv => &self.k_inv,
        }
    }
}

pub struct Omega {
    pub name: String,
    pub alg: GradedAlgebra,
    pub action: OmegaAction,
}

fn omega_system(f: &'static CycField, lambda_2p: Option<CycNumber>) -> (RewriteSystem, OmegaGens) {
    let p = f.p() as u32;
    let g = if lambda_2p.is_some() { HBAR } else { CZD };
    let (names, powers): (Vec<&str>, Vec<PowerRule>) = match lambda_2p {
        Some(_) => (
            vec!["z", "d", "l", "dz", "dd", "dl"],
            vec![
                PowerRule::Nilpotent(p),
                PowerRule::Nilpotent(p),
                PowerRule::Cyclic(2 * p),
                PowerRule::Nilpotent(2),
                PowerRule::Nilpotent(2),
                PowerRule::Nilpotent(2),
            ],
        ),
        None => (
            vec!["z", "d", "dz", "dd"],
            vec![
                PowerRule::Nilpotent(p),
                PowerRule::Nilpotent(p),
                PowerRule::Nilpotent(2),
                PowerRule::Nilpotent(2),
            ],
        ),
    };
    let mut s = RewriteSystem::new(f, &names, &powers);
    let one = f.one();
    s.swap(g.del, g.z, vec![(vec![g.z, g.del], f.q_powi(-2)), (vec![], f.q_diff())]);
    s.skew(g.dz, g.z, f.q_powi(-2));
    s.skew(g.dz, g.del, f.q_powi(2));
    s.skew(g.ddel, g.z, f.q_powi(-2));
    s.skew(g.ddel, g.del, f.q_powi(2));
    s.skew(g.ddel, g.dz, -f.q_powi(-2));
    if let (Some(l), Some(dl), Some(c)) = (g.lambda, g.dlambda, lambda_2p) {
        s.skew(l, g.z, one.clone());
        s.skew(l, g.del, one.clone());
        s.skew(g.dz, l, one.clone());
        s.skew(g.ddel, l, one.clone());
        s.skew(dl, g.z, one.clone());
        s.skew(dl, g.del, one.clone());
        s.skew(dl, l, f.q_powi(-1));
        s.skew(dl, g.dz, -one.clone());
        s.skew(dl, g.ddel, -one);
        s.set_power_scalar(l, c);
    }
    (s, g)
}

/// λ^{2p} in H̄, which is ζ^{−p(2p−1)} = ±i.
pub fn hbar_lambda_scalar(f: &'static CycField) -> CycNumber {
    let p = f.p() as i64;
    f.zeta_pow(-p * (2 * p - 1))
}

/// E, F, K on the generators, as elements of the algebra.
fn generator_actions(a: &GradedAlgebra, op: OmegaOp) -> Vec<Vector> {
    let f = a.pbw.field();
    let g = a.gens;
    let x = |i: usize| a.generator(i);
    let w = |ws: &[usize]| a.pbw.eval_word(ws);
    let q = |n: i64| f.q_powi(n);
    let q2 = f.q_int(crate::cyclotomic::HalfInt::from_twice(4));
    let q1 = &f.q() + &f.one();
    let e_l = q1.inv().expect("q + 1 ≠ 0");
    let f_l = -f.q().checked_div(&q1).expect("q + 1 ≠ 0");
    let mut out = vec![Vector::zero(); a.pbw.gens()];
    match op {
        OmegaOp::E => {
            out[g.z] = w(&[g.z, g.z]).scale(&-f.q());
            out[g.del] = a.pbw.unit();
            out[g.dz] = w(&[g.z, g.dz]).scale(&-q2.clone());
            out[g.ddel] = Vector::zero();
            if let (Some(l), Some(dl)) = (g.lambda, g.dlambda) {
                out[l] = w(&[g.z, l]).scale(&e_l);
                out[dl] = w(&[g.z, dl]).add(&w(&[l, g.dz])).scale(&e_l);
            }
        }
        OmegaOp::F => {
            out[g.z] = a.pbw.unit();
            out[g.del] = w(&[g.del, g.del]).scale(&-f.q());
            out[g.dz] = Vector::zero();
            out[g.ddel] = w(&[g.del, g.ddel]).scale(&-(&q(2) * &q2));
            if let (Some(l), Some(dl)) = (g.lambda, g.dlambda) {
                out[l] = w(&[g.del, l]).scale(&f_l);
                out[dl] = w(&[g.del, dl]).add(&w(&[l, g.ddel])).scale(&f_l);
            }
        }
        OmegaOp::K | OmegaOp::KInv => {
            let s = if op == OmegaOp::K { 1 } else { -1 };
            out[g.z] = x(g.z).scale(&q(2 * s));
            out[g.del] = x(g.del).scale(&q(-2 * s));
            out[g.dz] = x(g.dz).scale(&q(2 * s));
            out[g.ddel] = x(g.ddel).scale(&q(-2 * s));
            if let (Some(l), Some(dl)) = (g.lambda, g.dlambda) {
                out[l] = x(l).scale(&q(-s));
                out[dl] = x(dl).scale(&q(-s));
            }
        }
    }
    out
}

/// Splits a basis monomial as (first generator, rest).
fn split(pbw: &PbwAlgebra, m: usize) -> Option<(usize, usize)> {
    let mut e = pbw.exponents(m);
    let g = e.iter().position(|&x| x > 0)?;
    e[g] -= 1;
    Some((g, pbw.index(&e)))
}

fn build(name: &str, f: &'static CycField, lambda_2p: Option<CycNumber>) -> Result<Omega> {
    let (sys, gens) = omega_system(f, lambda_2p);
    let pbw = PbwAlgebra::new(sys)?;
    let n = pbw.gens();
    let mut degrees = vec![0u32; n];
    let mut d_of = vec![None; n];
    for (g, dg) in [(gens.z, gens.dz), (gens.del, gens.ddel)]
        .into_iter()
        .chain(gens.lambda.zip(gens.dlambda))
    {
        degrees[dg] = 1;
        d_of[g] = Some(dg);
    }
    let dim = pbw.dim();
    // basis monomials in order of increasing word length, so rests are done first
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by_key(|&m| pbw.word(m).len());
    let mut d_cols = vec![Vector::zero(); dim];
    let mut alg = GradedAlgebra {
        pbw,
        gens,
        degrees,
        d_of,
        d: Matrix::zero(dim, dim),
    };
    for &m in &order {
        if let Some((g, rest)) = split(&alg.pbw, m) {
            let x = alg.generator(g);
            let dx = alg.d_of[g].map(|dg| alg.generator(dg)).unwrap_or_else(Vector::zero);
            let sign = if alg.degrees[g] % 2 == 0 { f.one() } else { -f.one() };
            let rest_v = Vector::basis(rest, f);
            let v = alg.pbw.mul(&dx, &rest_v).add_scaled(&alg.pbw.mul(&x, &d_cols[rest]), &sign);
            d_cols[m] = v;
        }
    }
    alg.d = Matrix::from_columns(dim, d_cols);

    let ops = [OmegaOp::E, OmegaOp::F, OmegaOp::K, OmegaOp::KInv];
    let gen_act: Vec<Vec<Vector>> = ops.iter().map(|&op| generator_actions(&alg, op)).collect();
    let mut cols: Vec<Vec<Vector>> = vec![vec![Vector::zero(); dim]; 4];
    for c in cols.iter_mut() {
        c[0] = alg.pbw.unit();
    }
    cols[0][0] = Vector::zero();
    cols[1][0] = Vector::zero();
    for &m in &order {
        let Some((g, rest)) = split(&alg.pbw, m) else { continue };
        let x = alg.generator(g);
        let rest_v = Vector::basis(rest, f);
        let mul = |a: &Vector, b: &Vector| alg.pbw.mul(a, b);
        let k = mul(&gen_act[2][g], &cols[2][rest]);
        let ki = mul(&gen_act[3][g], &cols[3][rest]);
        // Δ(E) = 1⊗E + E⊗K, Δ(F) = K^{−1}⊗F + F⊗1
        let e = mul(&x, &cols[0][rest]).add(&mul(&gen_act[0][g], &cols[2][rest]));
        let ff = mul(&gen_act[3][g], &cols[1][rest]).add(&mul(&gen_act[1][g], &rest_v));
        cols[0][m] = e;
        cols[1][m] = ff;
        cols[2][m] = k;
        cols[3][m] = ki;
    }
    let mut it = cols.into_iter().map(|c| Matrix::from_columns(dim, c));
    let action = OmegaAction {
        e: it.next().unwrap(),
        f: it.next().unwrap(),
        k: it.next().unwrap(),
        k_inv: it.next().unwrap(),
    };
    Ok(Omega {
        name: name.into(),
        alg,
        action,
    })
}

/// ΩC_q[z,∂] on z, ∂, dz, d∂.
pub fn build_omega_czd(p: usize) -> Result<Omega> {
    let f = CycField::get(p)?;
    build("omega_czd", f, None)
}

/// ΩH̄ on z, ∂, λ, dz, d∂, dλ with λ^{2p} equal to its value in H̄.
pub fn build_omega_hbar(p: usize) -> Result<Omega> {
    let f = CycField::get(p)?;
    build_omega_hbar_with(p, hbar_lambda_scalar(f))
}

/// ΩH̄ with λ^{2p} = c.
pub fn build_omega_hbar_with(p: usize, c: CycNumber) -> Result<Omega> {
    let f = CycField::get(p)?;
    if c.is_zero() {
        return Err(Error::NotApplicable("λ^{2p} must be invertible".into()));
    }
    build("omega_hbar", f, Some(c))
}

impl Omega {
    pub fn field(&self) -> &'static CycField {
        self.alg.pbw.field()
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn act(&self, op: OmegaOp, v: &Vector) -> Vector {
        self.action.matrix(op).apply(v)
    }

    pub fn word(&self, w: &[usize]) -> Vector {
        self.alg.pbw.eval_word(w)
    }

    pub fn u_module(&self) -> UModule {
        UModule {
            field: self.field(),
            dim: self.dim(),
            e: self.action.e.clone(),
            f: self.action.f.clone(),
            k: self.action.k.clone(),
            label: self.name.clone(),
        }
    }

    /// The defining relations as (name, lhs word, rhs).
    fn relations(&self) -> Vec<(String, Vec<usize>, WordSum)> {
        let f = self.field();
        let g = self.alg.gens;
        let mut out: Vec<(String, Vec<usize>, WordSum)> = vec![
            ("dz dz = 0".into(), vec![g.dz, g.dz], vec![]),
            ("dd dd = 0".into(), vec![g.ddel, g.ddel], vec![]),
            ("dd dz = -q^-2 dz dd".into(), vec![g.ddel, g.dz], vec![(vec![g.dz, g.ddel], -f.q_powi(-2))]),
            ("dz z = q^-2 z dz".into(), vec![g.dz, g.z], vec![(vec![g.z, g.dz], f.q_powi(-2))]),
            ("dd d = q^2 d dd".into(), vec![g.ddel, g.del], vec![(vec![g.del, g.ddel], f.q_powi(2))]),
            ("dz d = q^2 d dz".into(), vec![g.dz, g.del], vec![(vec![g.del, g.dz], f.q_powi(2))]),
            ("dd z = q^-2 z dd".into(), vec![g.ddel, g.z], vec![(vec![g.z, g.ddel], f.q_powi(-2))]),
            (
                "d z = q^-2 z d + q - q^-1".into(),
                vec![g.del, g.z],
                vec![(vec![g.z, g.del], f.q_powi(-2)), (vec![], f.q_diff())],
            ),
        ];
        if let (Some(l), Some(dl)) = (g.lambda, g.dlambda) {
            let one = f.one();
            out.extend([
                ("dl l = q^-1 l dl".into(), vec![dl, l], vec![(vec![l, dl], f.q_powi(-1))]),
                ("dl z = z dl".into(), vec![dl, g.z], vec![(vec![g.z, dl], one.clone())]),
                ("dl d = d dl".into(), vec![dl, g.del], vec![(vec![g.del, dl], one.clone())]),
                ("dl dz = -dz dl".into(), vec![dl, g.dz], vec![(vec![g.dz, dl], -one.clone())]),
                ("dl dd = -dd dl".into(), vec![dl, g.ddel], vec![(vec![g.ddel, dl], -one.clone())]),
                ("l dz = dz l".into(), vec![l, g.dz], vec![(vec![g.dz, l], one.clone())]),
                ("l dd = dd l".into(), vec![l, g.ddel], vec![(vec![g.ddel, l], one.clone())]),
                ("dl dl = 0".into(), vec![dl, dl], vec![]),
            ]);
        }
        out
    }

    /// Rewriting consistency, the defining relations, d(λ^{2p}) = 0 and the U relations.
    pub fn check_relations(&self, cfg: &SweepConfig) -> CheckReport {
        let mut r = CheckReport::new("relations");
        let f = self.field();
        let a = &self.alg;
        let pbw = &a.pbw;
        r.count("dim", self.dim() as u64);
        r.absorb(&pbw.verify_consistency(cfg.samples.min(2000), cfg.seed));
        for (name, lhs, rhs) in self.relations() {
            r.count("relations", 1);
            if self.word(&lhs) != pbw.eval(&rhs) {
                r.mark_failed("relation", name);
            }
        }
        if self.action.k.mul(&self.action.k_inv) != Matrix::identity(self.dim(), f) {
            r.mark_failed("k_inverse", "K K^-1 ≠ 1");
        }
        r.absorb(&self.u_module().check_relations());
        if let Some(l) = a.gens.lambda {
            r.count("lambda_power_cases", 1);
            if !a.d_word(&vec![l; 2 * f.p()]).is_zero() {
                r.mark_failed("d(lambda^2p)", "nonzero");
            }
        }
        r
    }

    /// d(1) = 0, d(z) = dz, d² = 0 and the graded Leibniz rule on basis pairs.
    pub fn check_leibniz(&self, cfg: &SweepConfig) -> CheckReport {
        let mut r = CheckReport::new("leibniz");
        let f = self.field();
        let a = &self.alg;
        let pbw = &a.pbw;
        let n = self.dim();
        let g = a.gens;
        if !a.differential(&pbw.unit()).is_zero() {
            r.mark_failed("d(1)", "nonzero");
        }
        if a.differential(&a.generator(g.z)) != a.generator(g.dz) {
            r.mark_failed("d(z)", "≠ dz");
        }
        r.count("d2_cases", n as u64);
        if let Some(w) = sweep_first(n, |m| !a.d.apply(a.d.column(m)).is_zero()) {
            r.mark_failed("d^2", pbw.label(w));
        }
        check_tuples(
            &mut r,
            "leibniz",
            n,
            2,
            cfg,
            |t| alloc::format!("{} {}", pbw.label(t[0]), pbw.label(t[1])),
            |t| {
                let (x, y) = (Vector::basis(t[0], f), Vector::basis(t[1], f));
                let sign = if a.degree(t[0]) % 2 == 0 { f.one() } else { -f.one() };
                let lhs = a.differential(&pbw.mul_basis(t[0], t[1]));
                let rhs = pbw.mul(a.d.column(t[0]), &y).add_scaled(&pbw.mul(&x, a.d.column(t[1])), &sign);
                lhs == rhs
            },
        );
        r
    }

    /// d commutes with E, F, K, and the extended action satisfies the module-algebra axiom.
    pub fn check_equivariance(&self, cfg: &SweepConfig) -> CheckReport {
        let mut r = CheckReport::new("equivariance");
        let f = self.field();
        let a = &self.alg;
        let pbw = &a.pbw;
        let n = self.dim();
        for op in [OmegaOp::E, OmegaOp::F, OmegaOp::K] {
            let m = self.action.matrix(op);
            r.count("d_equivariance_cases", n as u64);
            if let Some(w) = sweep_first(n, |i| m.apply(a.d.column(i)) != a.d.apply(m.column(i))) {
                r.mark_failed("d_equivariance", alloc::format!("{:?} {}", op, pbw.label(w)));
            }
        }
        for (op, (l1, l2), (r1, r2)) in [
            (OmegaOp::E, (None, Some(OmegaOp::E)), (Some(OmegaOp::E), Some(OmegaOp::K))),
            (OmegaOp::F, (Some(OmegaOp::KInv), Some(OmegaOp::F)), (Some(OmegaOp::F), None)),
            (OmegaOp::K, (Some(OmegaOp::K), Some(OmegaOp::K)), (None, None)),
        ] {
            let app = |o: Option<OmegaOp>, i: usize| match o {
                Some(o) => self.action.matrix(o).column(i).clone(),
                None => Vector::basis(i, f),
            };
            check_tuples(
                &mut r,
                &alloc::format!("module_algebra_{:?}", op),
                n,
                2,
                cfg,
                |t| alloc::format!("{:?} {} {}", op, pbw.label(t[0]), pbw.label(t[1])),
                |t| {
                    let lhs = self.act(op, &pbw.mul_basis(t[0], t[1]));
                    let mut rhs = pbw.mul(&app(l1, t[0]), &app(l2, t[1]));
                    if op != OmegaOp::K {
                        rhs = rhs.add(&pbw.mul(&app(r1, t[0]), &app(r2, t[1])));
                    }
                    lhs == rhs
                },
            );
        }
        r
    }

    /// All of the above.
    pub fn verify(&self, cfg: &SweepConfig) -> CheckReport {
        let mut r = CheckReport::new(self.name.clone());
        r.absorb(&self.check_relations(cfg));
        r.absorb(&self.check_leibniz(cfg));
        r.absorb(&self.check_equivariance(cfg));
        r
    }

    /// The basis element with the given generator exponents.
    pub fn monomial(&self, exps: &[(usize, u32)]) -> Vector {
        let mut e = vec![0u32; self.alg.pbw.gens()];
        for &(g, k) in exps {
            e[g] = k;
        }
        Vector::basis(self.alg.pbw.index(&e), self.field())
    }
}

fn sweep_first(n: usize, bad: impl Fn(usize) -> bool + Sync + Send) -> Option<usize> {
    crate::sweep::find_first(n, |i| if bad(i) { Some(i) } else { None })
}

/// The degree-0 part of ΩH̄ against H̄: an algebra isomorphism intertwining the U actions,
/// and the assumed coproducts of E, F, K against those of U.
pub fn compare_with_hbar(omega: &Omega, t: &Truncation) -> CheckReport {
    let mut r = CheckReport::new("omega_degree0_vs_hbar");
    let f = omega.field();
    let g = omega.alg.gens;
    let Some(l) = g.lambda else {
        return r.fail("carrier", "ΩH̄ expected");
    };
    let hm = HbarModules::new(t);
    let p = f.p();
    let hb = &*t.hbar;
    let deg0: Vec<usize> = (0..omega.dim()).filter(|&m| omega.alg.degree(m) == 0).collect();
    r.count("degree0_dim", deg0.len() as u64);
    if deg0.len() != hb.dim() {
        r.mark_failed("dimension", alloc::format!("{} vs {}", deg0.len(), hb.dim()));
        return r;
    }
    let image = |m: usize| {
        let e = omega.alg.pbw.exponents(m);
        hm.monomial(e[g.z] as usize, e[g.del] as usize, e[l] as usize).clone()
    };
    let phi = |v: &Vector| {
        let mut acc = Accumulator::new();
        for (m, c) in v.iter() {
            acc.add_scaled(&image(m), c);
        }
        acc.finish()
    };
    let imgs: Vec<Vector> = deg0.iter().map(|&m| image(m)).collect();
    if Subspace::spanned_by(&imgs).dim() != hb.dim() {
        r.mark_failed("bijective", "rank deficit");
    }
    for &x in &deg0 {
        for &y in &deg0 {
            if phi(&omega.alg.pbw.mul_basis(x, y)) != hb.mul(&image(x), &image(y)) {
                r.mark_failed("multiplicative", alloc::format!("{} {}", omega.alg.pbw.label(x), omega.alg.pbw.label(y)));
                return r;
            }
        }
        for (op, hmat) in [(OmegaOp::E, &hm.e), (OmegaOp::F, &hm.f), (OmegaOp::K, &hm.k)] {
            if phi(omega.action.matrix(op).column(x)) != hmat.apply(&image(x)) {
                r.mark_failed("equivariant", alloc::format!("{:?} {}", op, omega.alg.pbw.label(x)));
                return r;
            }
        }
    }
    r.count("pairs", (deg0.len() * deg0.len()) as u64);
    // coproducts used to extend the action
    let u = &t.u;
    let ui = t.u_index();
    let d = u.dim();
    let (e, ff, k, ki, one) = (ui.e(f), ui.f(f), ui.k(f), ui.k_inv(f), u.unit());
    let want = [
        ("Delta(E)", &e, tensor(&one, &e, d).add(&tensor(&e, &k, d))),
        ("Delta(F)", &ff, tensor(&ki, &ff, d).add(&tensor(&ff, &one, d))),
        ("Delta(K)", &k, tensor(&k, &k, d)),
    ];
    for (name, x, w) in want {
        if u.comul(x) != w {
            r.mark_failed("coproduct", name);
        }
    }
    let _ = p;
    r
}

/// The cohomology corners of ΩC_q[z,∂] attached to the chains of 1-forms.
pub fn verify_corner_diagrams(omega: &Omega) -> CheckReport {
    let mut r = CheckReport::new("corner_diagrams");
    let f = omega.field();
    let p = f.p();
    let g = omega.alg.gens;
    let a = &omega.alg;
    let pw = |x: usize, k: u32| omega.monomial(&[(x, k)]);
    let e = |v: &Vector| omega.act(OmegaOp::E, v);
    let ff = |v: &Vector| omega.act(OmegaOp::F, v);
    let mut top_d = Vector::zero();
    let mut top_z = Vector::zero();
    for i in 1..p as u32 {
        let c = f.q_inti(i as i64).inv().expect("[i] ≠ 0 for i < p");
        top_d = top_d.add_scaled(&a.prod(&[&pw(g.z, i), &a.differential(&pw(g.del, i))]), &c);
        top_z = top_z.add_scaled(&a.prod(&[&a.differential(&pw(g.z, i)), &pw(g.del, i)]), &c);
    }
    let dd_chain: Vec<Vector> = (0..p as u32 - 1).map(|j| a.prod(&[&pw(g.del, j), &a.generator(g.ddel)])).collect();
    let dz_chain: Vec<Vector> = (0..p as u32 - 1).map(|j| a.prod(&[&pw(g.z, j), &a.generator(g.dz)])).collect();
    let corner_d = a.prod(&[&pw(g.del, p as u32 - 1), &a.generator(g.ddel)]);
    let corner_z = a.prod(&[&pw(g.z, p as u32 - 1), &a.generator(g.dz)]);

    let mut prop = |v: Vector, w: &Vector, key: String| match v.proportional_to(w) {
        Some(c) if !c.is_zero() && !w.is_zero() => r.detail(key, &c),
        _ => r.mark_failed(key, "not a nonzero multiple"),
    };
    prop(ff(&top_d), &dd_chain[0], "F top_d / dd".into());
    prop(e(&corner_d), &dd_chain[p - 2], "E d^{p-1}dd / d^{p-2}dd".into());
    prop(e(&top_z), &dz_chain[0], "E top_z / dz".into());
    prop(ff(&corner_z), &dz_chain[p - 2], "F z^{p-1}dz / z^{p-2}dz".into());
    for j in 0..p.saturating_sub(2) {
        prop(ff(&dd_chain[j]), &dd_chain[j + 1], alloc::format!("F d^{}dd", j));
        prop(e(&dd_chain[j + 1]), &dd_chain[j], alloc::format!("E d^{}dd", j + 1));
        prop(e(&dz_chain[j]), &dz_chain[j + 1], alloc::format!("E z^{}dz", j));
        prop(ff(&dz_chain[j + 1]), &dz_chain[j], alloc::format!("F z^{}dz", j + 1));
    }
    // the chains are submodules, so no arrow leads back to a corner
    for (name, chain, corners) in [("dd_chain", &dd_chain, [&top_d, &corner_d]), ("dz_chain", &dz_chain, [&top_z, &corner_z])] {
        let sp = Subspace::spanned_by(chain.iter());
        let stable = chain.iter().all(|v| {
            [OmegaOp::E, OmegaOp::F, OmegaOp::K].iter().all(|&op| sp.contains(&omega.act(op, v)))
        });
        if !stable {
            r.mark_failed("no_inverse_arrows", name);
        }
        let mut with = sp.clone();
        for c in corners {
            with.insert(c);
        }
        if with.dim() != sp.dim() + 2 {
            r.mark_failed("corners_independent", name);
        }
        r.count(alloc::format!("{}_len", name), chain.len() as u64);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_czd_p2() {
        let o = build_omega_czd(2).unwrap();
        let f = o.field();
        let g = o.alg.gens;
        assert_eq!(o.dim(), 16);
        let r = o.verify(&SweepConfig::default());
        assert!(r.passed(), "{}", r);
        assert!(o.act(OmegaOp::F, &o.alg.generator(g.dz)).is_zero());
        let z2 = o.word(&[g.z, g.z]);
        assert!(z2.is_zero());
        let c = verify_corner_diagrams(&o);
        assert!(c.passed(), "{}", c);
        let _ = f;
    }

    #[test]
    fn omega_czd_p3_d_of_z2() {
        let o = build_omega_czd(3).unwrap();
        let f = o.field();
        let g = o.alg.gens;
        let z2 = o.word(&[g.z, g.z]);
        let want = o.word(&[g.z, g.dz]).scale(&(&f.one() + &f.q_powi(-2)));
        assert_eq!(o.alg.differential(&z2), want);
        let r = o.verify(&SweepConfig::default());
        assert!(r.passed(), "{}", r);
        let c = verify_corner_diagrams(&o);
        assert!(c.passed(), "{}", c);
    }

    #[test]
    fn omega_hbar_p2() {
        for c in [hbar_lambda_scalar(CycField::get(2).unwrap()), CycField::get(2).unwrap().one()] {
            let o = build_omega_hbar_with(2, c).unwrap();
            let f = o.field();
            let g = o.alg.gens;
            assert_eq!(o.dim(), 16 * 8);
            let r = o.verify(&SweepConfig::default());
            assert!(r.passed(), "{}", r);
            let dl = o.alg.generator(g.dlambda.unwrap());
            assert_eq!(o.act(OmegaOp::K, &dl), dl.scale(&f.q_powi(-1)));
            assert!(o.alg.pbw.mul(&dl, &dl).is_zero());
        }
    }
}
