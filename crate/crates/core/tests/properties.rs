use std::sync::{Arc, OnceLock};

use hopfdouble_core::derham::{build_omega_czd, Omega, OmegaOp};
use hopfdouble_core::hopf::{tensor_mul, Algebra, Coalgebra, Hopf, SweepConfig};
use hopfdouble_core::rep_theory::{jacobson_radical, top_multiplicities, Carrier, HbarModules, Radical};
use hopfdouble_core::taft::truncation::Truncation;
use hopfdouble_core::taft::TaftContext;
use hopfdouble_core::{CycField, CycNumber, Matrix, Vector};
use num_bigint::BigInt;
use proptest::prelude::*;

fn number(f: &'static CycField, num: &[i64], den: &[i64]) -> CycNumber {
    let d = f.degree();
    let n: Vec<BigInt> = (0..d).map(|i| BigInt::from(num[i % num.len()])).collect();
    let q: Vec<BigInt> = (0..d).map(|i| BigInt::from(den[i % den.len()])).collect();
    f.from_fraction_coeffs(&n, &q).unwrap()
}

fn raw() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (prop::collection::vec(-20i64..21, 1..9), prop::collection::vec(1i64..9, 1..9))
}

fn ctx(p: usize) -> &'static Arc<TaftContext> {
    static C: [OnceLock<Arc<TaftContext>>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    C[p].get_or_init(|| {
        let c = Arc::new(TaftContext::build(p).unwrap());
        if p == 2 {
            c.materialize();
        }
        c
    })
}

fn truncation(p: usize) -> &'static (Truncation, Radical) {
    static T: [OnceLock<(Truncation, Radical)>; 4] = [OnceLock::new(), OnceLock::new(), OnceLock::new(), OnceLock::new()];
    T[p].get_or_init(|| {
        let t = Truncation::build(ctx(p).clone(), &SweepConfig::default()).unwrap();
        let rad = jacobson_radical(&t.u, t.u_index()).unwrap();
        (t, rad)
    })
}

fn omega_czd3() -> &'static Omega {
    static O: OnceLock<Omega> = OnceLock::new();
    O.get_or_init(|| build_omega_czd(3).unwrap())
}

fn element(f: &'static CycField, dim: usize, terms: &[(usize, i64)]) -> Vector {
    Vector::from_unsorted(terms.iter().map(|&(i, c)| (i % dim, f.int(c))).collect())
}

fn terms() -> impl Strategy<Value = Vec<(usize, i64)>> {
    prop::collection::vec((0usize..1_000_000, -3i64..4), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_undoes_multiplication(a in raw(), b in raw(), p in 2usize..7) {
        let f = CycField::get(p).unwrap();
        let (x, y) = (number(f, &a.0, &a.1), number(f, &b.0, &b.1));
        prop_assume!(!y.is_zero());
        prop_assert_eq!(&(&x * &y) * &y.inv().unwrap(), x);
    }

    #[test]
    fn ring_laws(a in raw(), b in raw(), c in raw(), p in 2usize..7) {
        let f = CycField::get(p).unwrap();
        let (x, y, z) = (number(f, &a.0, &a.1), number(f, &b.0, &b.1), number(f, &c.0, &c.1));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&(&x - &y) + &y, x);
    }

    /// Rebuilding a number from its stored coefficients is the identity.
    #[test]
    fn reduction_is_idempotent(a in raw(), p in 2usize..7) {
        let f = CycField::get(p).unwrap();
        let x = number(f, &a.0, &a.1);
        let (n, d): (Vec<BigInt>, Vec<BigInt>) = x.coefficient_fractions().into_iter().unzip();
        prop_assert_eq!(f.from_fraction_coeffs(&n, &d).unwrap(), x);
    }

    #[test]
    fn galois_conjugation_is_a_field_map(a in raw(), b in raw(), p in 2usize..6, k in 0usize..24) {
        let f = CycField::get(p).unwrap();
        let units: Vec<usize> = (1..f.order()).filter(|j| num_integer::gcd(*j, f.order()) == 1).collect();
        let k = units[k % units.len()];
        let (x, y) = (number(f, &a.0, &a.1), number(f, &b.0, &b.1));
        prop_assert_eq!((&x * &y).galois(k), &x.galois(k) * &y.galois(k));
    }

    #[test]
    fn double_is_hopf_on_random_elements(a in terms(), b in terms()) {
        let d = &ctx(2).d;
        let f = d.field();
        let (x, y) = (element(f, d.dim(), &a), element(f, d.dim(), &b));
        let xy = d.mul(&x, &y);
        prop_assert_eq!(d.antipode(&xy), d.mul(&d.antipode(&y), &d.antipode(&x)));
        prop_assert_eq!(d.comul(&xy), tensor_mul(d, &d.comul(&x), &d.comul(&y)));
        prop_assert_eq!(d.counit(&xy), &d.counit(&x) * &d.counit(&y));
        prop_assert_eq!(d.antipode_inv(&d.antipode(&x)), x);
    }

    #[test]
    fn heisenberg_is_associative_p3(a in terms(), b in terms(), c in terms()) {
        let h = &ctx(3).h;
        let f = h.field();
        let (x, y, z) = (element(f, h.dim(), &a), element(f, h.dim(), &b), element(f, h.dim(), &c));
        prop_assert_eq!(h.mul(&h.mul(&x, &y), &z), h.mul(&x, &h.mul(&y, &z)));
    }

    /// Once it holds for g and h, the module-algebra rule holds for gh.
    #[test]
    fn module_algebra_rule_propagates_to_products(a in terms(), b in terms(), x in terms(), y in terms()) {
        let c = ctx(2);
        let (d, h, act) = (&c.d, &c.h, &c.heterotic);
        let f = c.field;
        let g = d.mul(&element(f, d.dim(), &a), &element(f, d.dim(), &b));
        let (x, y) = (element(f, h.dim(), &x), element(f, h.dim(), &y));
        let lhs = act.act(&g, &h.mul(&x, &y));
        let n = d.dim();
        let mut rhs = Vector::zero();
        for (k, coef) in d.comul(&g).iter() {
            let l = act.act(&d.basis(k / n), &x);
            let r = act.act(&d.basis(k % n), &y);
            rhs = rhs.add_scaled(&h.mul(&l, &r), coef);
        }
        prop_assert_eq!(lhs, rhs);
    }

    /// Multiplicities do not depend on the basis chosen for the module.
    #[test]
    fn top_multiplicities_are_basis_independent(
        extra in prop::collection::vec((0usize..64, 0usize..64, -2i64..3), 0..40),
        p in 2usize..4,
        which in 0usize..3,
    ) {
        let (t, rad) = truncation(p);
        let hm = HbarModules::new(t);
        let carrier = [Carrier::Czd, Carrier::LambdaPower(p), Carrier::OddSubalgebra][which];
        let m = hm.module(carrier).unwrap();
        let f = t.ctx.field;
        let n = m.dim;
        // identity plus a sparse random perturbation
        let mut cols: Vec<Vec<(usize, CycNumber)>> = (0..n).map(|j| vec![(j, f.one())]).collect();
        for &(i, j, c) in &extra {
            cols[j % n].push((i % n, f.int(c)));
        }
        let tm = Matrix::from_columns(n, cols.into_iter().map(Vector::from_unsorted).collect());
        prop_assume!(tm.inverse(f).is_ok());
        let base = top_multiplicities(&m, rad, t.u_index());
        let other = top_multiplicities(&m.conjugate(&tm).unwrap(), rad, t.u_index());
        prop_assert_eq!(base.multiplicities, other.multiplicities);
    }

    #[test]
    fn differential_squares_to_zero_and_commutes_with_u(a in terms()) {
        let o = omega_czd3();
        let v = element(o.field(), o.dim(), &a);
        let dv = o.alg.differential(&v);
        prop_assert!(o.alg.differential(&dv).is_zero());
        for op in [OmegaOp::E, OmegaOp::F, OmegaOp::K] {
            prop_assert_eq!(o.alg.differential(&o.act(op, &v)), o.act(op, &dv));
        }
    }
}

#[test]
fn cyclotomic_polynomial_vanishes_at_zeta() {
    for p in 2..=8 {
        let f = CycField::get(p).unwrap();
        let mut acc = f.zero();
        for (j, c) in f.modulus().iter().enumerate() {
            acc += &f.int(*c) * &f.zeta_pow(j as i64);
        }
        assert!(acc.is_zero(), "p={}", p);
        assert_eq!(f.zeta_pow(f.order() as i64), f.one());
        assert_ne!(f.zeta_pow(f.order() as i64 / 2), f.one());
    }
}

#[test]
fn q_binomials_symmetric_and_pascal() {
    for p in 2..=7 {
        let f = CycField::get(p).unwrap();
        for a in 0..p as i64 {
            for m in 0..=a {
                let b = f.q_binom(a, m).unwrap();
                assert_eq!(b, f.q_binom(a, a - m).unwrap(), "p={} a={} m={}", p, a, m);
                if a >= 1 && m >= 1 && m < a {
                    let rhs = &(&f.q_powi(m) * &f.q_binom(a - 1, m).unwrap()) + &(&f.q_powi(-(a - m)) * &f.q_binom(a - 1, m - 1).unwrap());
                    assert_eq!(b, rhs, "p={} a={} m={}", p, a, m);
                }
            }
        }
    }
}

#[test]
fn taft_pairing_is_nondegenerate() {
    for p in 2..=3 {
        let c = ctx(p);
        let f = c.field;
        let n = c.b.dim();
        let cols: Vec<Vector> = (0..n)
            .map(|j| Vector::from_unsorted((0..n).map(|i| (i, c.pair.pair_basis(i, j))).collect()))
            .collect();
        assert!(Matrix::from_columns(n, cols).inverse(f).is_ok(), "p={}", p);
    }
}
