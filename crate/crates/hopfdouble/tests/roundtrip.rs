use std::sync::OnceLock;

use hopfdouble::expr::parse_expr;
use hopfdouble::json::{cyc_from_json, cyc_to_json, hopf_from_json, hopf_to_json};
use hopfdouble::session::{AlgebraKind, Session};
use hopfdouble_core::hopf::{Algebra, Coalgebra, Hopf, SweepConfig};
use hopfdouble_core::linalg::Vector;
use hopfdouble_core::{CycField, CycNumber};
use num_bigint::BigInt;
use proptest::prelude::*;

fn session(p: usize) -> &'static Session {
    static S: [OnceLock<Session>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    S[p].get_or_init(|| Session::new(p, SweepConfig::default()).unwrap())
}

fn number(f: &'static CycField, num: &[i64], den: &[i64]) -> CycNumber {
    let d = f.degree();
    let n: Vec<BigInt> = (0..d).map(|i| BigInt::from(num[i % num.len()])).collect();
    let q: Vec<BigInt> = (0..d).map(|i| BigInt::from(den[i % den.len()])).collect();
    f.from_fraction_coeffs(&n, &q).unwrap()
}

fn coeffs() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (prop::collection::vec(-9i64..10, 1..6), prop::collection::vec(1i64..7, 1..6))
}

fn element(f: &'static CycField, dim: usize, terms: &[(usize, (Vec<i64>, Vec<i64>))]) -> Vector {
    Vector::from_unsorted(terms.iter().map(|(i, (n, d))| (i % dim, number(f, n, d))).collect())
}

fn roundtrip(kind: AlgebraKind, p: usize, terms: &[(usize, (Vec<i64>, Vec<i64>))]) -> Result<(), TestCaseError> {
    let s = session(p);
    let dim = s.algebra(kind).unwrap().dim();
    let v = element(s.ctx.field, dim, terms);
    let text = s.print(kind, &v).unwrap();
    let back = s.eval(kind, &text).map_err(|e| TestCaseError::fail(format!("{}: {}", text, e)))?;
    prop_assert_eq!(back, v, "{}", text);
    Ok(())
}

fn terms() -> impl Strategy<Value = Vec<(usize, (Vec<i64>, Vec<i64>))>> {
    prop::collection::vec((0usize..100_000, coeffs()), 0..5)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printed_elements_parse_back(t in terms(), which in 0usize..6) {
        let kind = [
            AlgebraKind::B,
            AlgebraKind::Bstar,
            AlgebraKind::Double,
            AlgebraKind::Heisenberg,
            AlgebraKind::Hbar,
            AlgebraKind::Omega,
        ][which];
        roundtrip(kind, 2, &t)?;
    }

    #[test]
    fn printed_elements_parse_back_p3(t in terms()) {
        roundtrip(AlgebraKind::Heisenberg, 3, &t)?;
        roundtrip(AlgebraKind::Hbar, 3, &t)?;
    }

    #[test]
    fn scalars_roundtrip_through_json(c in coeffs(), p in 2usize..5, big in any::<bool>()) {
        let f = CycField::get(p).unwrap();
        let mut x = number(f, &c.0, &c.1);
        if big {
            // push coefficients beyond i64
            x = x.pow(60);
        }
        let v = cyc_to_json(&x);
        prop_assert_eq!(cyc_from_json(f, &v).unwrap(), x);
    }

    /// Evaluation is a homomorphism from the expression syntax.
    #[test]
    fn eval_respects_sum_and_product(a in 0usize..256, b in 0usize..256, c in coeffs()) {
        let s = session(2);
        let h = &s.ctx.h;
        let f = s.ctx.field;
        let (x, y) = (h.basis(a), h.basis(b));
        let (tx, ty) = (s.print(AlgebraKind::Heisenberg, &x).unwrap(), s.print(AlgebraKind::Heisenberg, &y).unwrap());
        let k = number(f, &c.0, &c.1);
        let scalar = s.print(AlgebraKind::Heisenberg, &h.unit().scale(&k)).unwrap();
        let prod = s.eval(AlgebraKind::Heisenberg, &format!("({})*({})", tx, ty)).unwrap();
        prop_assert_eq!(prod, h.mul(&x, &y));
        let sum = s.eval(AlgebraKind::Heisenberg, &format!("{} + ({})*({})", tx, scalar, ty)).unwrap();
        prop_assert_eq!(sum, x.add(&y.scale(&k)));
    }
}

#[test]
fn grammar_examples() {
    let s = session(2);
    let f = s.ctx.field;
    let del = s.eval(AlgebraKind::Heisenberg, "(q - q^-1)*F # 1").unwrap();
    assert_eq!(del, s.ctx.del());
    assert!(parse_expr("k |> F*K^3 # E*k").unwrap().is_action());
    assert!(parse_expr("E*k^2 $").is_err());
    // k ▷ (F^aκ^b # E^ck^d) = q^{-a+c-b/2}·same, κ ▷ (…) = q^{a+d/2}·same
    let x = s.eval(AlgebraKind::Heisenberg, "F*K^3 # E*k").unwrap();
    let kx = s.act(AlgebraKind::Heisenberg, "k |> F*K^3 # E*k").unwrap();
    assert_eq!(kx, x.scale(&f.zeta_pow(-3)));
    let kappa_x = s.act(AlgebraKind::Heisenberg, "K |> F*K^3 # E*k").unwrap();
    assert_eq!(kappa_x, x.scale(&f.zeta_pow(3)));
}

#[test]
fn structure_constants_roundtrip() {
    let s = session(2);
    for h in [&*s.ctx.b, &*s.ctx.bstar] {
        let back = hopf_from_json(&hopf_to_json(h, 2)).unwrap();
        assert_eq!(back.dim(), h.dim());
        for i in 0..h.dim() {
            assert_eq!(back.comul_basis(i), h.comul_basis(i));
            assert_eq!(back.antipode(&h.basis(i)), h.antipode(&h.basis(i)));
            assert_eq!(back.counit_basis(i), h.counit_basis(i));
            for j in 0..h.dim() {
                assert_eq!(back.mul_basis(i, j), h.mul_basis(i, j));
            }
        }
    }
    let d = hopf_from_json(&hopf_to_json(&s.ctx.d, 2)).unwrap();
    for i in (0..256).step_by(7) {
        for j in (0..256).step_by(5) {
            assert_eq!(d.mul_basis(i, j), s.ctx.d.mul_basis(i, j));
        }
    }
}
