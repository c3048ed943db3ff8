//! Lazily built objects for one value of p, and expression evaluation against them.

use std::sync::{Arc, OnceLock};

use hopfdouble_core::derham::{build_omega_hbar, Omega, OmegaOp};
use hopfdouble_core::doubles::Action;
use hopfdouble_core::hopf::{Algebra, SweepConfig};
use hopfdouble_core::linalg::{Basis, Vector};
use hopfdouble_core::rep_theory::HbarModules;
use hopfdouble_core::taft::zdl::hbar_monomials;
use hopfdouble_core::taft::truncation::Truncation;
use hopfdouble_core::taft::{monomial, TaftContext};
use hopfdouble_core::{Error, Result};

use crate::expr::{eval, parse_expr, AlgebraTarget, Expr, ExprError, Gen, OperatorTarget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum AlgebraKind {
    /// the Taft algebra B
    B,
    /// its dual B*
    Bstar,
    /// the Drinfeld double D(B)
    Double,
    /// the Heisenberg double H(B*)
    Heisenberg,
    /// the 2p³-dimensional truncation H̄
    Hbar,
    /// the differential calculus on H̄
    Omega,
}

pub struct Session {
    pub p: usize,
    pub ctx: Arc<TaftContext>,
    pub cfg: SweepConfig,
    truncation: OnceLock<Result<Truncation>>,
    omega: OnceLock<Result<Omega>>,
    hbar_basis: OnceLock<Basis>,
}

impl Session {
    pub fn new(p: usize, cfg: SweepConfig) -> Result<Session> {
        let ctx = Arc::new(TaftContext::build(p)?);
        if p == 2 {
            ctx.materialize();
        }
        Ok(Session {
            p,
            ctx,
            cfg,
            truncation: OnceLock::new(),
            omega: OnceLock::new(),
            hbar_basis: OnceLock::new(),
        })
    }

    pub fn truncation(&self) -> Result<&Truncation> {
        self.truncation
            .get_or_init(|| Truncation::build(self.ctx.clone(), &self.cfg))
            .as_ref()
            .map_err(Clone::clone)
    }

    pub fn omega(&self) -> Result<&Omega> {
        self.omega.get_or_init(|| build_omega_hbar(self.p)).as_ref().map_err(Clone::clone)
    }

    fn hbar_basis(&self) -> Result<&Basis> {
        let t = self.truncation()?;
        Ok(self.hbar_basis.get_or_init(|| {
            Basis::new(hbar_monomials(&t.hbar), self.ctx.field).expect("monomials are a basis")
        }))
    }

    pub fn algebra(&self, kind: AlgebraKind) -> Result<&dyn Algebra> {
        Ok(match kind {
            AlgebraKind::B => &*self.ctx.b,
            AlgebraKind::Bstar => &*self.ctx.bstar,
            AlgebraKind::Double => &self.ctx.d,
            AlgebraKind::Heisenberg => &self.ctx.h,
            AlgebraKind::Hbar => &*self.truncation()?.hbar,
            AlgebraKind::Omega => &self.omega()?.alg.pbw,
        })
    }

    pub fn target(&self, kind: AlgebraKind) -> Result<AlgebraTarget<'_>> {
        let c = &*self.ctx;
        let n = 4 * self.p as u32;
        let cyc = vec![(Gen::SmallK, n), (Gen::Kappa, n), (Gen::Lambda, 2 * n)];
        let gens = match kind {
            AlgebraKind::B => vec![(Gen::E, c.b.basis(c.b_idx(1, 0))), (Gen::SmallK, c.b.basis(c.b_idx(0, 1)))],
            AlgebraKind::Bstar => vec![(Gen::F, c.bstar.basis(c.bs_idx(1, 0))), (Gen::Kappa, c.bstar.basis(c.bs_idx(0, 1)))],
            AlgebraKind::Double => vec![
                (Gen::E, c.d_alg(1, 0)),
                (Gen::SmallK, c.d_alg(0, 1)),
                (Gen::F, c.d_dual(1, 0)),
                (Gen::Kappa, c.d_dual(0, 1)),
            ],
            AlgebraKind::Heisenberg => vec![
                (Gen::E, c.dh_basis(0, 0, 1, 0)),
                (Gen::SmallK, c.dh_basis(0, 0, 0, 1)),
                (Gen::F, c.dh_basis(1, 0, 0, 0)),
                (Gen::Kappa, c.dh_basis(0, 1, 0, 0)),
                (Gen::Z, c.z()),
                (Gen::Del, c.del()),
                (Gen::Lambda, c.lambda()),
            ],
            AlgebraKind::Hbar => {
                let hb = &self.truncation()?.hbar;
                vec![(Gen::Z, hb.z()), (Gen::Del, hb.del()), (Gen::Lambda, hb.lambda())]
            }
            AlgebraKind::Omega => {
                let o = self.omega()?;
                let g = o.alg.gens;
                vec![
                    (Gen::Z, o.alg.generator(g.z)),
                    (Gen::Del, o.alg.generator(g.del)),
                    (Gen::Lambda, o.alg.generator(g.lambda.expect("ΩH̄ has λ"))),
                    (Gen::Dz, o.alg.generator(g.dz)),
                    (Gen::Ddel, o.alg.generator(g.ddel)),
                    (Gen::Dlambda, o.alg.generator(g.dlambda.expect("ΩH̄ has dλ"))),
                ]
            }
        };
        Ok(AlgebraTarget {
            alg: self.algebra(kind)?,
            gens,
            orders: cyc,
        })
    }

    /// Prints an element of the given algebra in a form `parse_expr` reads back.
    pub fn print(&self, kind: AlgebraKind, v: &Vector) -> Result<String> {
        let c = &*self.ctx;
        Ok(match kind {
            AlgebraKind::Double | AlgebraKind::Heisenberg => {
                let db = c.b.dim();
                crate::expr::print_with(v, &|i| format!("{} # {}", c.bstar.label(i / db), c.b.label(i % db)))
            }
            AlgebraKind::Hbar => {
                let p = self.p;
                let coords = self
                    .hbar_basis()?
                    .coordinates(v)
                    .ok_or_else(|| Error::Verification("not in H̄".into()))?;
                crate::expr::print_with(&coords, &|i| {
                    monomial(&[("z", i / (2 * p) / p), ("d", (i / (2 * p)) % p), ("l", i % (2 * p))])
                })
            }
            _ => {
                let a = self.algebra(kind)?;
                crate::expr::print_with(v, &|i| a.label(i))
            }
        })
    }

    pub fn eval(&self, kind: AlgebraKind, text: &str) -> std::result::Result<Vector, ExprError> {
        let e = parse_expr(text)?;
        self.eval_expr(kind, &e)
    }

    pub fn eval_expr(&self, kind: AlgebraKind, e: &Expr) -> std::result::Result<Vector, ExprError> {
        let t = self.target(kind)?;
        eval(&t, e)
    }

    /// Infers where an element lives: Ω if it mentions a differential, H(B*) otherwise.
    pub fn infer_kind(e: &Expr) -> AlgebraKind {
        let gens = e.generators();
        if gens.iter().any(|g| matches!(g, Gen::Dz | Gen::Ddel | Gen::Dlambda)) {
            AlgebraKind::Omega
        } else {
            AlgebraKind::Heisenberg
        }
    }

    /// `h |> x`: D(B) on H(B*) through the heterotic action, or U on H̄ or Ω.
    pub fn act(&self, host: AlgebraKind, text: &str) -> std::result::Result<Vector, ExprError> {
        let e = parse_expr(text)?;
        let Expr::Action(h, x) = e else {
            return Err(ExprError::Eval("expected `h |> x`".into()));
        };
        match host {
            AlgebraKind::Heisenberg => {
                let hv = self.eval_expr(AlgebraKind::Double, &h)?;
                let xv = self.eval_expr(AlgebraKind::Heisenberg, &x)?;
                let inner = &self.ctx.heterotic.inner;
                let mut acc = hopfdouble_core::linalg::Accumulator::new();
                for (i, c) in hv.iter() {
                    acc.add_scaled(&inner.act_on(i, &xv), c);
                }
                Ok(acc.finish())
            }
            AlgebraKind::Hbar => {
                let t = self.truncation()?;
                let hm = HbarModules::new(t);
                let f = self.ctx.field;
                let ops = OperatorTarget {
                    field: f,
                    k_inv: hm.k.pow(2 * self.p as u32 - 1, f),
                    e: hm.e,
                    f: hm.f,
                    k: hm.k,
                };
                let m = eval(&ops, &h)?;
                Ok(m.apply(&self.eval_expr(AlgebraKind::Hbar, &x)?))
            }
            AlgebraKind::Omega => {
                let o = self.omega()?;
                let ops = OperatorTarget {
                    field: self.ctx.field,
                    e: o.action.matrix(OmegaOp::E).clone(),
                    f: o.action.matrix(OmegaOp::F).clone(),
                    k: o.action.matrix(OmegaOp::K).clone(),
                    k_inv: o.action.matrix(OmegaOp::KInv).clone(),
                };
                let m = eval(&ops, &h)?;
                Ok(m.apply(&self.eval_expr(AlgebraKind::Omega, &x)?))
            }
            other => Err(ExprError::Eval(format!("no action on {:?}", other))),
        }
    }
}
