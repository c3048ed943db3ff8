//! One line per acceptance criterion, PASS or FAIL. All comparisons are exact
//! (tolerance 0: equality in Q(ζ)); the two runtime budgets are stated in seconds.

use std::collections::BTreeSet;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use hopfdouble::session::Session;
use hopfdouble::suites::{self, Checks, DerhamCheck};
use hopfdouble_core::hopf::{verify_hopf_named, SweepConfig};
use hopfdouble_core::{CheckReport, Status};

const TOLERANCE: &str = "exact, tolerance 0";
const MODULE_ALGEBRA_BUDGET: Duration = Duration::from_secs(5 * 60);
const DERHAM_BUDGET: Duration = Duration::from_secs(15 * 60);

fn session(p: usize) -> &'static Session {
    static S: [OnceLock<Session>; 5] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    S[p].get_or_init(|| Session::new(p, SweepConfig::default()).unwrap())
}

fn report(name: &str, reports: &[CheckReport]) -> CheckReport {
    reports
        .iter()
        .find(|r| r.name == name)
        .unwrap_or_else(|| panic!("no check named {}", name))
        .clone()
}

fn collect(f: impl FnOnce(&mut Checks)) -> Vec<CheckReport> {
    let mut c = Checks::default();
    f(&mut c);
    c.0.into_iter().map(|t| t.report).collect()
}

fn line(n: u32, ok: bool, what: &str) {
    println!("criterion {} {}: {} [{}]", n, if ok { "PASS" } else { "FAIL" }, what, TOLERANCE);
}

fn failures(rs: &[CheckReport]) -> Vec<String> {
    rs.iter().filter(|r| r.status == Status::Fail).map(|r| r.to_string()).collect()
}

#[test]
fn criterion_1_module_algebra_theorem() {
    let s = session(2);
    let t = Instant::now();
    let rs = collect(|c| suites::module_algebra(s, c));
    let wall = t.elapsed();
    let r = report("heterotic_module_algebra", &rs);
    let pairs = r.counts.get("pairs").copied().unwrap_or(0);
    let ok = r.passed() && pairs == 4 * 256 * 256 && wall <= MODULE_ALGEBRA_BUDGET;
    line(
        1,
        ok,
        &format!("p=2 heterotic module algebra, gens E F k K, {} host pairs, {:.1}s of {}s", pairs, wall.as_secs_f64(), MODULE_ALGEBRA_BUDGET.as_secs()),
    );
    assert!(ok, "{}", r);
}

#[test]
fn criterion_2_cross_halves() {
    let s = session(2);
    let rs = collect(|c| suites::module_algebra(s, c));
    let first = report("r_cross_first_half", &rs);
    let second = report("r_cross_second_half_fails", &rs);
    let witness = second.details.get("witness").cloned().unwrap_or_default();
    let ok = first.passed() && first.counts["pairs"] == 256 && second.passed() && !witness.is_empty();
    line(2, ok, &format!("first half on all 256 pairs; second half witness {}", witness));
    assert!(ok, "{}\n{}", first, second);
}

#[test]
fn criterion_3_closed_forms() {
    let cfg = SweepConfig {
        seed: 7,
        samples: 10_000,
        ..SweepConfig::default()
    };
    let s3 = Session::new(3, cfg).unwrap();
    let r2 = collect(|c| suites::closed_forms(session(2), c).unwrap());
    let r3 = collect(|c| suites::closed_forms(&s3, c).unwrap());
    let exhaustive = report("closed_form_product", &r2).counts.get("product_cases").copied() == Some(256 * 256);
    let samples = report("closed_form_product", &r3).counts.get("product_samples").copied().unwrap_or(0);
    let ok = failures(&r2).is_empty() && failures(&r3).is_empty() && exhaustive && samples >= 10_000;
    line(3, ok, &format!("closed forms exhaustive at p=2, {} seeded samples at p=3", samples));
    assert!(ok, "{:?} {:?}", failures(&r2), failures(&r3));
}

#[test]
fn criterion_4_double_hopf_and_r_matrix() {
    let s = session(2);
    let h = verify_hopf_named(&s.ctx.d, &s.cfg, "double_hopf");
    let q = hopfdouble_core::doubles::quasitriangularity_check(&s.ctx.d);
    let sampled = h.counts.keys().chain(q.counts.keys()).any(|k| k.ends_with("_samples"));
    let ok = h.passed() && q.passed() && !sampled;
    line(4, ok, "D(B) Hopf axioms and the three R-matrix identities, exhaustive at p=2");
    assert!(ok, "{}\n{}", h, q);
}

#[test]
fn criterion_5_truncation() {
    let mut ok = true;
    let mut bad = Vec::new();
    for p in 2..=4 {
        let rs = collect(|c| suites::truncate(session(p), c).unwrap());
        for name in ["truncation_dims", "psi_span", "big_lambda", "descent", "hbar_module", "u_hopf", "kappa_k_central"] {
            let r = report(name, &rs);
            if !r.passed() {
                ok = false;
                bad.push(format!("p={} {}", p, r));
            }
        }
    }
    line(5, ok, "dim U = dim H̄ = 2p³, Ψ-span closure, Λ centrality and sign rules, p=2,3,4");
    assert!(ok, "{:?}", bad);
}

/// λ = κ#k has λ^{4p} = −1 in H(B*) and λ^{2p} ≠ 1 in H̄, so the literal
/// λ relations fail; everything else in the presentation must hold.
#[test]
fn criterion_6_presentation() {
    let mut ok = true;
    let mut unexpected = Vec::new();
    let mut summary = Vec::new();
    for p in 2..=4 {
        let rs = collect(|c| suites::truncate(session(p), c).unwrap());
        for name in ["zdl_relations", "action_table", "zdl_basis", "power_commutation", "matp_isomorphism"] {
            let r = report(name, &rs);
            if !r.passed() {
                ok = false;
                summary.push(format!("p={} {}: {:?}", p, name, r.witness.keys().collect::<Vec<_>>()));
                let allowed: BTreeSet<&str> = match name {
                    "zdl_relations" => ["lambda^4p = 1"].into(),
                    "matp_isomorphism" => ["lambda_order"].into(),
                    _ => BTreeSet::new(),
                };
                for k in r.witness.keys() {
                    if !allowed.contains(k.as_str()) {
                        unexpected.push(format!("p={} {}", p, r));
                    }
                }
            }
        }
        let m = report("matp_isomorphism", &rs);
        if m.counts.get("rank").copied() != Some((p * p) as u64) {
            unexpected.push(format!("p={} Mat_p rank {:?}", p, m.counts.get("rank")));
        }
    }
    line(
        6,
        ok,
        &format!("relations, action table, Mat_p rank p² at p=2,3,4; failing: {}", if summary.is_empty() { "none".into() } else { summary.join("; ") }),
    );
    assert!(unexpected.is_empty(), "{:?}", unexpected);
}

#[test]
fn criterion_7_decompositions() {
    let mut ok = true;
    let mut bad = Vec::new();
    for p in 2..=4 {
        let rs = collect(|c| suites::decompose(session(p), c).unwrap());
        let mut names = vec!["P1", "dimension_audit", "jacobson_radical"];
        if p <= 3 {
            names.extend(["decompose_czd", "decompose_hbar"]);
        }
        for n in names {
            let r = report(n, &rs);
            if !r.passed() {
                ok = false;
                bad.push(format!("p={} {}", p, r));
            }
        }
        let p2 = report("P2", &rs);
        let want = if p == 2 { Status::Degenerate } else { Status::Pass };
        if p <= 3 && p2.status != want {
            ok = false;
            bad.push(format!("p={} {}", p, p2));
        }
    }
    line(7, ok, "C_q[z,∂] and H̄ decompositions at p=2,3; audit p≤6; P1 at p=2,3,4; P2 at p=3, degenerate at p=2");
    assert!(ok, "{:?}", bad);
}

#[test]
fn criterion_8_de_rham() {
    let mut ok = true;
    let mut bad = Vec::new();
    let mut wall3 = Duration::ZERO;
    for p in 2..=3 {
        let t = Instant::now();
        let rs = collect(|c| suites::derham(session(p), c, DerhamCheck::All).unwrap());
        if p == 3 {
            wall3 = t.elapsed();
        }
        for r in rs.iter().filter(|r| !r.passed()) {
            ok = false;
            bad.push(format!("p={} {}", p, r));
        }
        for n in ["omega_czd_corner_diagrams", "omega_hbar_corner_diagrams", "omega_hbar_leibniz", "omega_hbar_equivariance"] {
            report(n, &rs);
        }
    }
    let within = wall3 <= DERHAM_BUDGET;
    line(
        8,
        ok && within,
        &format!("d² = 0, Leibniz, equivariance, module algebra, d(λ^2p) = 0, corners at p=2,3; p=3 in {:.1}s of {}s", wall3.as_secs_f64(), DERHAM_BUDGET.as_secs()),
    );
    assert!(ok && within, "{:?}", bad);
}
