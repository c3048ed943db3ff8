//! Verification suites: each runs a list of checks and records their wall time.

use std::time::{Duration, Instant, SystemTime, UNIX_EPOCH};

use hopfdouble_core::derham::{
    build_omega_czd, build_omega_hbar_with, compare_with_hbar, verify_corner_diagrams, Omega,
};
use hopfdouble_core::doubles::{
    quasitriangularity_check, verify_module_action, verify_module_algebra, verify_r_commutativity, Action,
    CorruptedHeteroticAction, ModuleAction,
};
use hopfdouble_core::hopf::{check_tuples, verify_hopf_named, Algebra, Coalgebra, SweepConfig};
use hopfdouble_core::linalg::Vector;
use hopfdouble_core::rep_theory::{
    czd_expected, dimension_audit, irreducible_module, jacobson_radical, top_multiplicities, verify_radical, Carrier,
    DecompositionReport, HbarModules, Sign,
};
use hopfdouble_core::taft::zdl::{matp_isomorphism, ZdlPresentation};
use hopfdouble_core::taft::ActingGenerator;
use hopfdouble_core::{CheckReport, HalfInt, Matrix, Result, Status};
use serde_json::{json, Value};

use crate::json::report_to_json;
use crate::session::Session;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Hopf,
    Double,
    Heisenberg,
    ModuleAlgebra,
    ClosedForms,
    Truncate,
    Decompose,
    Derham,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Hopf => "hopf",
            Suite::Double => "double",
            Suite::Heisenberg => "heisenberg",
            Suite::ModuleAlgebra => "module-algebra",
            Suite::ClosedForms => "closed-forms",
            Suite::Truncate => "truncate",
            Suite::Decompose => "decompose",
            Suite::Derham => "derham",
            Suite::All => "all",
        }
    }

    pub const PARTS: [Suite; 8] = [
        Suite::Hopf,
        Suite::Double,
        Suite::Heisenberg,
        Suite::ModuleAlgebra,
        Suite::ClosedForms,
        Suite::Truncate,
        Suite::Decompose,
        Suite::Derham,
    ];
}

pub struct Timed {
    pub report: CheckReport,
    pub wall: Duration,
}

#[derive(Default)]
pub struct Checks(pub Vec<Timed>);

impl Checks {
    pub fn run(&mut self, f: impl FnOnce() -> CheckReport) {
        let t = Instant::now();
        let report = f();
        self.0.push(Timed { report, wall: t.elapsed() });
    }

    pub fn push(&mut self, report: CheckReport, wall: Duration) {
        self.0.push(Timed { report, wall });
    }
}

pub struct SuiteReport {
    pub suite: String,
    pub p: usize,
    pub seed: u64,
    pub samples: usize,
    pub checks: Vec<Timed>,
    pub started: SystemTime,
    pub wall: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.report.status != Status::Fail)
    }

    pub fn failures(&self) -> Vec<&CheckReport> {
        self.checks.iter().map(|c| &c.report).filter(|r| r.status == Status::Fail).collect()
    }

    pub fn get(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().map(|c| &c.report).find(|r| r.name == name)
    }

    /// Everything except the `timestamp` object is a function of (suite, p, seed, samples).
    pub fn to_json(&self) -> Value {
        let status = if self.passed() { "pass" } else { "fail" };
        let checks: Vec<Value> = self.checks.iter().map(|c| report_to_json(&c.report)).collect();
        let failures: Vec<Value> = self
            .failures()
            .iter()
            .map(|r| json!({"check": r.name, "witness": r.witness}))
            .collect();
        let walls: serde_json::Map<String, Value> = self
            .checks
            .iter()
            .map(|c| (c.report.name.clone(), json!(c.wall.as_secs_f64())))
            .collect();
        let started = self.started.duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        json!({
            "suite": self.suite,
            "p": self.p,
            "seed": self.seed,
            "samples": self.samples,
            "status": status,
            "checks": checks,
            "failures": failures,
            "timestamp": {
                "started_unix": started,
                "wall_seconds": self.wall.as_secs_f64(),
                "check_wall_seconds": walls,
            },
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "suite {} p={} seed={} samples={}\n",
            self.suite, self.p, self.seed, self.samples
        );
        for c in &self.checks {
            s.push_str(&format!("[{:>10}] {} ({:.2}s)\n", c.report.status.as_str(), c.report, c.wall.as_secs_f64()));
        }
        s.push_str(&format!(
            "{} in {:.2}s\n",
            if self.passed() { "PASS" } else { "FAIL" },
            self.wall.as_secs_f64()
        ));
        s
    }
}

pub fn run_suite(suite: Suite, sess: &Session) -> Result<SuiteReport> {
    let started = SystemTime::now();
    let t0 = Instant::now();
    let mut checks = Checks::default();
    let parts: Vec<Suite> = if suite == Suite::All { Suite::PARTS.to_vec() } else { vec![suite] };
    for s in parts {
        match s {
            Suite::Hopf => hopf(sess, &mut checks),
            Suite::Double => double(sess, &mut checks),
            Suite::Heisenberg => heisenberg(sess, &mut checks),
            Suite::ModuleAlgebra => module_algebra(sess, &mut checks),
            Suite::ClosedForms => closed_forms(sess, &mut checks)?,
            Suite::Truncate => truncate(sess, &mut checks)?,
            Suite::Decompose => decompose(sess, &mut checks)?,
            Suite::Derham => derham(sess, &mut checks, DerhamCheck::All)?,
            Suite::All => unreachable!(),
        }
    }
    let mut checks = checks.0;
    checks.sort_by(|a, b| a.report.name.cmp(&b.report.name));
    Ok(SuiteReport {
        suite: suite.name().into(),
        p: sess.p,
        seed: sess.cfg.seed,
        samples: sess.cfg.samples,
        checks,
        started,
        wall: t0.elapsed(),
    })
}

fn relation(r: &mut CheckReport, name: &str, lhs: &Vector, rhs: &Vector, fmt: impl Fn(&Vector) -> String) {
    r.count("relations", 1);
    if lhs != rhs {
        r.mark_failed(name, format!("{} vs {}", fmt(lhs), fmt(rhs)));
    }
}

pub fn hopf(sess: &Session, out: &mut Checks) {
    let c = &sess.ctx;
    out.run(|| verify_hopf_named(&*c.b, &sess.cfg, "hopf_b"));
    out.run(|| verify_hopf_named(&*c.bstar, &sess.cfg, "hopf_bstar"));
    out.run(|| c.pair.verify());
    out.run(|| {
        let mut r = CheckReport::new("taft_relations");
        let b = &*c.b;
        let f = c.field;
        let p = c.p as u32;
        let e = b.basis(c.b_idx(1, 0));
        let k = b.basis(c.b_idx(0, 1));
        relation(&mut r, "kE = qEk", &b.mul(&k, &e), &b.mul(&e, &k).scale(&f.q()), |v| b.format(v));
        relation(&mut r, "E^p = 0", &b.pow(&e, p), &Vector::zero(), |v| b.format(v));
        relation(&mut r, "k^4p = 1", &b.pow(&k, 4 * p), &b.unit(), |v| b.format(v));
        r.count("dim", b.dim() as u64);
        if b.dim() != 4 * c.p * c.p {
            r.mark_failed("dim", b.dim());
        }
        r
    });
}

pub fn double(sess: &Session, out: &mut Checks) {
    let c = &sess.ctx;
    let d = &c.d;
    out.run(|| verify_hopf_named(d, &sess.cfg, "double_hopf"));
    out.run(|| quasitriangularity_check(d));
    out.run(|| {
        let mut r = CheckReport::new("double_relations");
        let f = c.field;
        let p = c.p as u32;
        let (e, k) = (c.d_alg(1, 0), c.d_alg(0, 1));
        let (fg, kap) = (c.d_dual(1, 0), c.d_dual(0, 1));
        let m = |x: &Vector, y: &Vector| d.mul(x, y);
        let fmt = |v: &Vector| d.format(v);
        let k_inv = c.d_alg(0, -1);
        let kap_inv = c.d_dual(0, -1);
        relation(&mut r, "kE = qEk", &m(&k, &e), &m(&e, &k).scale(&f.q()), fmt);
        relation(&mut r, "E^p = 0", &d.pow(&e, p), &Vector::zero(), fmt);
        relation(&mut r, "k^4p = 1", &d.pow(&k, 4 * p), &d.unit(), fmt);
        relation(&mut r, "KF = qFK", &m(&kap, &fg), &m(&fg, &kap).scale(&f.q()), fmt);
        relation(&mut r, "F^p = 0", &d.pow(&fg, p), &Vector::zero(), fmt);
        relation(&mut r, "K^4p = 1", &d.pow(&kap, 4 * p), &d.unit(), fmt);
        relation(&mut r, "kK = Kk", &m(&k, &kap), &m(&kap, &k), fmt);
        relation(&mut r, "kFk^-1 = q^-1 F", &d.mul_all(&[&k, &fg, &k_inv]), &fg.scale(&f.q_powi(-1)), fmt);
        relation(&mut r, "KEK^-1 = q^-1 E", &d.mul_all(&[&kap, &e, &kap_inv]), &e.scale(&f.q_powi(-1)), fmt);
        let k2 = d.pow(&k, 2);
        let kap2 = d.pow(&kap, 2);
        let comm = m(&e, &fg).sub(&m(&fg, &e));
        relation(&mut r, "[E,F] = (k^2 - K^2)/(q - q^-1)", &comm, &k2.sub(&kap2).scale(&f.q_diff_inv()), fmt);
        // (ε⊗E)(F⊗1) rewritten in the F⊗E, ε⊗k², κ²⊗1 basis
        let qi = f.q_diff_inv();
        let want = c
            .dh_basis(1, 0, 1, 0)
            .add(&c.d_alg(0, 2).scale(&qi))
            .sub(&c.d_dual(0, 2).scale(&qi));
        relation(&mut r, "(e@E)(F@1)", &m(&e, &fg), &want, fmt);
        r
    });
}

pub fn heisenberg(sess: &Session, out: &mut Checks) {
    let c = &sess.ctx;
    let h = &c.h;
    out.run(|| {
        let mut r = CheckReport::new("heisenberg_associativity");
        let n = h.dim();
        let one = h.unit();
        let lab = |t: &[usize]| t.iter().map(|&i| h.label(i)).collect::<Vec<_>>().join(", ");
        check_tuples(&mut r, "unit", n, 1, &sess.cfg, lab, |t| {
            let x = h.basis(t[0]);
            h.mul(&one, &x) == x && h.mul(&x, &one) == x
        });
        check_tuples(&mut r, "associativity", n, 3, &sess.cfg, lab, |t| {
            let xy = h.mul_basis(t[0], t[1]);
            let yz = h.mul_basis(t[1], t[2]);
            h.mul(&xy, &h.basis(t[2])) == h.mul(&h.basis(t[0]), &yz)
        });
        r
    });
    out.run(|| {
        let mut r = CheckReport::new("heisenberg_factors");
        let db = c.b.dim();
        let bu = c.b_idx(0, 0);
        let su = c.bs_idx(0, 0);
        let f = c.field;
        for i in 0..db {
            for j in 0..db {
                r.count("pairs", 2);
                let lhs = h.mul_basis(h.index(i, bu), h.index(j, bu)).into_owned();
                let rhs = c.bstar.mul_basis(i, j).map_indices(|k| Some(h.index(k, bu)));
                if lhs != rhs {
                    r.mark_failed("dual_factor", format!("{} {}", c.bstar.label(i), c.bstar.label(j)));
                }
                let lhs = h.mul_basis(h.index(su, i), h.index(su, j)).into_owned();
                let rhs = c.b.mul_basis(i, j).map_indices(|k| Some(h.index(su, k)));
                if lhs != rhs {
                    r.mark_failed("alg_factor", format!("{} {}", c.b.label(i), c.b.label(j)));
                }
            }
        }
        // (ε#k)(κ#1) = q^{-1/2} κ#k
        let lhs = h.mul(&c.dh_basis(0, 0, 0, 1), &c.dh_basis(0, 1, 0, 0));
        let rhs = c.dh_basis(0, 1, 0, 1).scale(&f.q_pow(HalfInt::halves(-1)));
        relation(&mut r, "(e#k)(K#1) = q^-1/2 K#k", &lhs, &rhs, |v| h.format(v));
        r
    });
}

fn acting_gens(sess: &Session) -> Vec<(String, Vector)> {
    let c = &sess.ctx;
    vec![
        ("E".into(), c.d_alg(1, 0)),
        ("F".into(), c.d_dual(1, 0)),
        ("k".into(), c.d_alg(0, 1)),
        ("K".into(), c.d_dual(0, 1)),
    ]
}

pub fn module_algebra(sess: &Session, out: &mut Checks) {
    let c = &sess.ctx;
    let gens = acting_gens(sess);
    let het = &c.heterotic;
    let dual = het.inner.dual_action();
    let alg = het.inner.alg_action();
    out.run(|| verify_module_action("heterotic_module", het, &c.d, &gens));
    out.run(|| verify_module_algebra("heterotic_module_algebra", het, &c.d, &c.h, &gens, &sess.cfg));
    out.run(|| {
        let mut r = verify_module_action("dual_module", dual, &c.d, &gens);
        r.absorb(&verify_module_algebra("algebra", dual, &c.d, &*c.bstar, &gens, &sess.cfg));
        r
    });
    out.run(|| {
        let mut r = verify_module_action("alg_module", alg, &c.d, &gens);
        r.absorb(&verify_module_algebra("algebra", alg, &c.d, &*c.b, &gens, &sess.cfg));
        r
    });
    out.run(|| restrictions(sess));
    out.run(|| {
        let bad = ModuleAction::new(CorruptedHeteroticAction(c.actions.clone()));
        let inner = verify_module_algebra("corrupted", &bad, &c.d, &c.h, &gens, &sess.cfg);
        let mut r = CheckReport::new("corrupted_action_rejected");
        match inner.status {
            Status::Fail => {
                for (k, v) in &inner.witness {
                    r.detail(format!("witness.{}", k), v);
                }
            }
            _ => r.mark_failed("corrupted", "the corrupted action passed the module-algebra sweep"),
        }
        r
    });
    let terms = c.d.r_terms();
    let db = c.b.dim();
    let basis_pairs = |alg: &dyn Algebra| -> Vec<(Vector, Vector, String)> {
        (0..db)
            .flat_map(|i| (0..db).map(move |j| (i, j)))
            .map(|(i, j)| (alg.basis(i), alg.basis(j), format!("{} , {}", alg.label(i), alg.label(j))))
            .collect()
    };
    out.run(|| verify_r_commutativity("r_commutative_dual", dual, &terms, &*c.bstar, &basis_pairs(&*c.bstar)));
    out.run(|| verify_r_commutativity("r_commutative_alg", alg, &terms, &*c.b, &basis_pairs(&*c.b)));
    let h = &c.h;
    let (bu, su) = (c.b_idx(0, 0), c.bs_idx(0, 0));
    let cross = |swap: bool| -> Vec<(Vector, Vector, String)> {
        let mut v = Vec::new();
        for alpha in 0..db {
            for b in 0..db {
                let x = h.basis(h.index(alpha, bu));
                let y = h.basis(h.index(su, b));
                let label = format!("alpha={} b={}", c.bstar.label(alpha), c.b.label(b));
                v.push(if swap { (y, x, label) } else { (x, y, label) });
            }
        }
        v
    };
    out.run(|| verify_r_commutativity("r_cross_first_half", het, &terms, h, &cross(false)));
    out.run(|| {
        let inner = verify_r_commutativity("second", het, &terms, h, &cross(true));
        let mut r = CheckReport::new("r_cross_second_half_fails");
        r.count("pairs", inner.counts.get("pairs").copied().unwrap_or(0));
        match inner.witness.get("pair") {
            Some(w) if inner.status == Status::Fail => r.detail("witness", w),
            _ => r.mark_failed("second_half", "held on every pair"),
        }
        r
    });
}

/// The heterotic action restricts to the dual action on B*#1 and the algebra action on ε#B,
/// and h▷(ε#1) = ε(h)(ε#1).
fn restrictions(sess: &Session) -> CheckReport {
    let c = &sess.ctx;
    let mut r = CheckReport::new("heterotic_restrictions");
    let het = &c.heterotic;
    let (dual, alg) = (het.inner.dual_action(), het.inner.alg_action());
    let h = &c.h;
    let db = c.b.dim();
    let (bu, su) = (c.b_idx(0, 0), c.bs_idx(0, 0));
    let unit = h.unit();
    let w = hopfdouble_core::sweep::find_first(db * db, |g| {
        if het.inner.act_basis(g, h.index(su, bu)) != unit.scale(&c.d.counit_basis(g)) {
            return Some(format!("counit g={}", c.d.label(g)));
        }
        for x in 0..db {
            let lhs = het.inner.act_basis(g, h.index(x, bu));
            let rhs = dual.matrix(g).column(x).map_indices(|k| Some(h.index(k, bu)));
            if lhs != rhs {
                return Some(format!("dual g={} alpha={}", c.d.label(g), c.bstar.label(x)));
            }
            let lhs = het.inner.act_basis(g, h.index(su, x));
            let rhs = alg.matrix(g).column(x).map_indices(|k| Some(h.index(su, k)));
            if lhs != rhs {
                return Some(format!("alg g={} a={}", c.d.label(g), c.b.label(x)));
            }
        }
        None
    });
    r.count("cases", (db * db * (2 * db + 1)) as u64);
    if let Some(w) = w {
        r.mark_failed("restriction", w);
    }
    r
}

pub fn closed_forms(sess: &Session, out: &mut Checks) -> Result<()> {
    let c = &sess.ctx;
    let (p, n) = (c.p, c.n as i64);
    let f = c.field;
    let dual = c.heterotic.inner.dual_action();
    let alg = c.heterotic.inner.alg_action();
    let t = Instant::now();
    let mut r = CheckReport::new("closed_form_factor_actions");
    let idx: Vec<(usize, i64, usize, i64)> = (0..p)
        .flat_map(|m| (0..n).flat_map(move |k| (0..p).flat_map(move |a| (0..n).map(move |b| (m, k, a, b)))))
        .collect();
    r.count("cases", idx.len() as u64);
    let w = hopfdouble_core::sweep::find_first(idx.len(), |i| {
        let (m, k, a, b) = idx[i];
        let h = Vector::basis(c.b_idx(m, k), f);
        let beta = Vector::basis(c.bs_idx(a, b), f);
        let x = Vector::basis(c.b_idx(a, b), f);
        let mu = c.bstar.mul(&Vector::basis(c.bs_idx(0, k), f), &Vector::basis(c.bs_idx(m, 0), f));
        let checks: [(&str, Result<Vector>, Vector); 4] = [
            ("hit", c.closed_hit(m, k, a, b), c.pair.hit_left(&h, &beta)),
            ("dual_action", c.closed_dual_action(m, k, a, b), dual.matrix(c.dh_idx(m, k, 0, 0)).apply(&beta)),
            ("adjoint", c.closed_adjoint(m, k, a, b), alg.matrix(c.dh_idx(0, 0, m, k)).apply(&x)),
            (
                "dual_on_alg",
                c.closed_dual_on_alg(m, k, a, b),
                alg.act(&mu.map_indices(|i| Some(i * c.b.dim())), &x),
            ),
        ];
        checks
            .into_iter()
            .find(|(_, cf, g)| cf.as_ref().ok() != Some(g))
            .map(|(name, _, _)| format!("{} m={} k={} a={} b={}", name, m, k, a, b))
    });
    if let Some(w) = w {
        r.mark_failed("formula", w);
    }
    out.push(r, t.elapsed());

    let h = &c.h;
    let hd = h.dim();
    // exhaustive at p = 2, seeded samples above
    let cfg = SweepConfig {
        exhaustive_limit: if p == 2 { usize::MAX } else { 0 },
        ..sess.cfg
    };
    out.run(|| {
        let mut r = CheckReport::new("closed_form_product");
        let lab = |t: &[usize]| format!("{} * {}", h.label(t[0]), h.label(t[1]));
        check_tuples(&mut r, "product", hd, 2, &cfg, lab, |t| {
            let (rr, s, m, k) = c.dh_exponents(t[0]);
            let (a, b, cc, d) = c.dh_exponents(t[1]);
            let cf = c.closed_form_product(rr, s as i64, m, k as i64, a, b as i64, cc, d as i64);
            cf.ok().as_ref() == Some(&*h.mul_basis(t[0], t[1]))
        });
        r
    });
    out.run(|| {
        let mut r = CheckReport::new("closed_form_action");
        let mut gens = vec![ActingGenerator::K, ActingGenerator::Kappa];
        gens.extend((1..p).map(ActingGenerator::E));
        gens.extend((1..p).map(ActingGenerator::F));
        let cases: Vec<(ActingGenerator, usize)> =
            gens.iter().flat_map(|&g| (0..hd).map(move |i| (g, i))).collect();
        let sampled = p > 2 && cases.len() > cfg.samples;
        let picks: Vec<usize> = if sampled {
            hopfdouble_core::sweep::sample_tuples(cfg.seed ^ 0xac7, cases.len(), 1, cfg.samples)
                .into_iter()
                .map(|t| t[0])
                .collect()
        } else {
            (0..cases.len()).collect()
        };
        r.count(if sampled { "action_samples" } else { "action_cases" }, picks.len() as u64);
        let w = hopfdouble_core::sweep::find_first(picks.len(), |k| {
            let (g, i) = cases[picks[k]];
            let (a, b, cc, d) = c.dh_exponents(i);
            let cf = c.closed_form_action(g, a, b as i64, cc, d as i64).ok();
            (cf.as_ref() != Some(&c.generic_action(g, a, b as i64, cc, d as i64)))
                .then(|| format!("{} on {}", g, h.label(i)))
        });
        if let Some(w) = w {
            r.mark_failed("action", w);
        }
        r
    });
    Ok(())
}

pub fn truncate(sess: &Session, out: &mut Checks) -> Result<()> {
    let t0 = Instant::now();
    let t = sess.truncation()?;
    let build = t0.elapsed();
    for (i, rep) in t.reports.iter().enumerate() {
        // the build time is charged to the first report
        out.push(rep.clone(), if i == 0 { build } else { Duration::ZERO });
    }
    out.run(|| {
        let mut r = CheckReport::new("truncation_dims");
        let want = 2 * sess.p * sess.p * sess.p;
        r.count("dim_u", t.u.dim() as u64);
        r.count("dim_hbar", t.hbar.dim() as u64);
        if t.u.dim() != want || t.hbar.dim() != want {
            r.mark_failed("dim", format!("U {} H̄ {} expected {}", t.u.dim(), t.hbar.dim(), want));
        }
        r
    });
    let t1 = Instant::now();
    let zdl = ZdlPresentation::new(sess.ctx.clone())?;
    let zt = t1.elapsed();
    out.run(|| zdl.relations());
    out.push(zdl.action_table(), zt);
    out.run(|| zdl.pbw_isomorphism());
    out.run(|| zdl.power_commutation());
    out.run(|| {
        let mut r = zdl.pbw.verify_confluence(300, 6, sess.cfg.seed);
        r.name = "zdl_confluence".into();
        r
    });
    out.run(|| matp_isomorphism(&t.hbar).unwrap_or_else(|e| CheckReport::new("matp").fail("build", e)));
    Ok(())
}

fn decomposition_check(name: &str, d: &DecompositionReport, p: usize, want: impl Fn(Sign, usize) -> Option<usize>) -> CheckReport {
    let mut r = CheckReport::new(name);
    r.detail("decomposition", d);
    r.count("module_dim", d.module_dim as u64);
    r.count("top_dim", d.top_dim as u64);
    if !d.audit_passes() {
        r.mark_failed("audit", format!("projective total {} vs dim {}", d.projective_total, d.module_dim));
    }
    for sg in [Sign::Plus, Sign::Minus] {
        for s in 1..=p {
            if let Some(w) = want(sg, s) {
                if d.get(sg, s) != w {
                    r.mark_failed(format!("P{}{}", sg.as_char(), s), format!("{} expected {}", d.get(sg, s), w));
                }
            }
        }
    }
    r
}

fn flip(s: Sign) -> Sign {
    match s {
        Sign::Plus => Sign::Minus,
        Sign::Minus => Sign::Plus,
    }
}

/// A unitriangular change of basis, fixed by the seed.
fn unitriangular(n: usize, seed: u64, f: &'static hopfdouble_core::CycField) -> Matrix {
    let cols = (0..n)
        .map(|j| {
            let mut v = vec![(j, f.one())];
            for i in 0..j {
                let x = (seed.wrapping_mul(6364136223846793005).wrapping_add((i * n + j) as u64) >> 33) % 5;
                if x != 0 {
                    v.push((i, f.int(x as i64 - 2)));
                }
            }
            Vector::from_unsorted(v)
        })
        .collect();
    Matrix::from_columns(n, cols)
}

pub fn decompose(sess: &Session, out: &mut Checks) -> Result<()> {
    let p = sess.p;
    let t = sess.truncation()?;
    let ui = t.u_index();
    let t0 = Instant::now();
    let rad = jacobson_radical(&t.u, ui)?;
    let rt = t0.elapsed();
    out.push(verify_radical(&t.u, ui, &rad), rt);
    out.run(|| {
        let mut r = CheckReport::new("irreducibles");
        for sg in [Sign::Plus, Sign::Minus] {
            for s in 1..=p {
                let tag = format!("L{}{}", sg.as_char(), s);
                match irreducible_module(p, sg, s) {
                    Ok(m) => {
                        r.count("modules", 1);
                        let mut rel = m.check_relations();
                        rel.name = format!("{}_relations", tag);
                        r.absorb(&rel);
                        let mut rep = m.check_representation(&t.u, ui);
                        rep.name = format!("{}_representation", tag);
                        r.absorb(&rep);
                        if !m.is_simple() {
                            r.mark_failed(tag, "not simple");
                        }
                    }
                    Err(e) => r.mark_failed(tag, e),
                }
            }
        }
        r
    });
    out.run(|| {
        let mut r = CheckReport::new("dimension_audit");
        for q in 2..=6 {
            let (total, want) = dimension_audit(q);
            r.detail(format!("p={}", q), format!("{} of {}", total, want));
            if total != want {
                r.mark_failed(format!("p={}", q), format!("{} vs {}", total, want));
            }
        }
        r
    });
    let hm = HbarModules::new(t);
    let run_dec = |out: &mut Checks, name: &str, carrier: Carrier, want: &dyn Fn(Sign, usize) -> Option<usize>| {
        out.run(|| match hm.decompose(carrier, &rad) {
            Ok(d) => decomposition_check(name, &d, p, want),
            Err(e) => CheckReport::new(name).fail("module", e),
        })
    };
    run_dec(out, "decompose_hbar", Carrier::Hbar, &|_, s| Some(s));
    run_dec(out, "decompose_czd", Carrier::Czd, &|sg, s| Some(czd_expected(p, sg, s)));
    run_dec(out, "decompose_lambda_p", Carrier::LambdaPower(p), &|sg, s| Some(czd_expected(p, flip(sg), s)));
    out.run(|| {
        let mut r = CheckReport::new("decompose_lambda_blocks");
        for l in 0..2 * p {
            match hm.decompose(Carrier::LambdaPower(l), &rad) {
                Ok(d) => {
                    r.detail(format!("lambda^{}", l), &d);
                    if !d.audit_passes() {
                        r.mark_failed(format!("lambda^{}", l), "audit");
                    }
                }
                Err(e) => r.mark_failed(format!("lambda^{}", l), e),
            }
        }
        r
    });
    out.run(|| {
        let (mut r, d) = hm.odd_projective_subalgebra(&rad);
        if let Some(d) = d {
            r.detail("decomposition", d);
        }
        r
    });
    out.run(|| hm.check_lambda_degree());
    out.run(|| hm.verify_p1());
    out.run(|| hm.verify_p2());
    out.run(|| hm.check_sigma());
    out.run(|| {
        let mut r = CheckReport::new("basis_change_invariance");
        let m = match hm.module(Carrier::Czd) {
            Ok(m) => m,
            Err(e) => return r.fail("module", e),
        };
        let base = top_multiplicities(&m, &rad, ui);
        let tm = unitriangular(m.dim, sess.cfg.seed, sess.ctx.field);
        match m.conjugate(&tm) {
            Ok(m2) => {
                let other = top_multiplicities(&m2, &rad, ui);
                if other.multiplicities != base.multiplicities {
                    r.mark_failed("multiplicities", format!("{} vs {}", base, other));
                }
            }
            Err(e) => r.mark_failed("conjugate", e),
        }
        r
    });
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum DerhamCheck {
    Relations,
    Leibniz,
    Equivariance,
    Corners,
    All,
}

fn omega_checks(o: &Omega, which: DerhamCheck, cfg: &SweepConfig, out: &mut Checks) {
    let rename = |mut r: CheckReport| {
        r.name = format!("{}_{}", o.name, r.name);
        r
    };
    let all = which == DerhamCheck::All;
    if all || which == DerhamCheck::Relations {
        out.run(|| rename(o.check_relations(cfg)));
    }
    if all || which == DerhamCheck::Leibniz {
        out.run(|| rename(o.check_leibniz(cfg)));
    }
    if all || which == DerhamCheck::Equivariance {
        out.run(|| rename(o.check_equivariance(cfg)));
    }
    if all || which == DerhamCheck::Corners {
        out.run(|| rename(verify_corner_diagrams(o)));
    }
}

pub fn derham(sess: &Session, out: &mut Checks, which: DerhamCheck) -> Result<()> {
    let p = sess.p;
    let cfg = &sess.cfg;
    let t = Instant::now();
    let czd = build_omega_czd(p)?;
    out.push(CheckReport::new("omega_czd_build"), t.elapsed());
    omega_checks(&czd, which, cfg, out);
    let t = Instant::now();
    let hb = sess.omega()?;
    out.push(CheckReport::new("omega_hbar_build"), t.elapsed());
    omega_checks(hb, which, cfg, out);
    if which == DerhamCheck::All {
        let tr = sess.truncation()?;
        out.run(|| compare_with_hbar(hb, tr));
        let t = Instant::now();
        let one = build_omega_hbar_with(p, sess.ctx.field.one())?;
        let mut r = one.verify(cfg);
        r.name = "omega_hbar_unit_lambda".into();
        out.push(r, t.elapsed());
    }
    Ok(())
}
