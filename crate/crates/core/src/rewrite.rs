//! Normal forms for algebras presented by ordered generators, pairwise
//! reordering rules and power rules (PBW-type presentations).

use alloc::borrow::Cow;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::cyclotomic::{CycField, CycNumber};
use crate::error::{Error, Result};
use crate::hopf::{fresh_id, Algebra, AlgebraId};
use crate::linalg::{Accumulator, Vector};
use crate::report::CheckReport;
use crate::sweep;

/// What happens when a generator reaches its bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerRule {
    /// g^N = 0.
    Nilpotent(u32),
    /// g^N = 1.
    Cyclic(u32),
}

impl PowerRule {
    pub fn bound(self) -> u32 {
        match self {
            PowerRule::Nilpotent(n) | PowerRule::Cyclic(n) => n,
        }
    }
}

/// A linear combination of words in the generators.
pub type WordSum = Vec<(Vec<usize>, CycNumber)>;

/// Generators in their normal order with rules rewriting `h g` for h > g.
#[derive(Clone)]
pub struct RewriteSystem {
    pub field: &'static CycField,
    pub names: Vec<String>,
    pub powers: Vec<PowerRule>,
    /// c in g^N = c for cyclic generators.
    pub power_scalars: Vec<CycNumber>,
    swaps: Vec<Option<WordSum>>,
}

/// Which reducible position to rewrite first.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

impl RewriteSystem {
    pub fn new(field: &'static CycField, names: &[&str], powers: &[PowerRule]) -> RewriteSystem {
        let n = names.len();
        RewriteSystem {
            field,
            names: names.iter().map(|s| String::from(*s)).collect(),
            powers: powers.to_vec(),
            power_scalars: vec![field.one(); n],
            swaps: vec![None; n * n],
        }
    }

    pub fn gens(&self) -> usize {
        self.names.len()
    }

    /// Sets `h g = rhs` for h > g in the normal order.
    pub fn swap(&mut self, h: usize, g: usize, rhs: WordSum) {
        assert!(h > g, "rules rewrite out-of-order pairs only");
        let n = self.gens();
        self.swaps[h * n + g] = Some(rhs);
    }

    /// Replaces g^N = 1 by g^N = c for a cyclic generator.
    pub fn set_power_scalar(&mut self, g: usize, c: CycNumber) {
        assert!(matches!(self.powers[g], PowerRule::Cyclic(_)));
        self.power_scalars[g] = c;
    }

    /// Shorthand for `h g = c g h`.
    pub fn skew(&mut self, h: usize, g: usize, c: CycNumber) {
        self.swap(h, g, vec![(vec![g, h], c)]);
    }

    fn rule(&self, h: usize, g: usize) -> Result<&WordSum> {
        self.swaps[h * self.gens() + g]
            .as_ref()
            .ok_or_else(|| Error::NotApplicable(alloc::format!("no rule for {} {}", self.names[h], self.names[g])))
    }

    fn reducible(&self, w: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for i in 0..w.len() {
            if i + 1 < w.len() && w[i] > w[i + 1] {
                out.push(i);
                continue;
            }
            let b = self.powers[w[i]].bound() as usize;
            if i + b <= w.len() && w[i..i + b].iter().all(|&x| x == w[i]) {
                out.push(i);
            }
        }
        out
    }

    /// Rewrites a word to normal form by single rule applications, returning normal words.
    pub fn rewrite_word(&self, word: &[usize], strategy: Strategy, max_steps: usize) -> Result<WordSum> {
        let mut rng = match strategy {
            Strategy::Random(s) => Some(sweep::rng(s)),
            _ => None,
        };
        let mut todo: Vec<(Vec<usize>, CycNumber)> = vec![(word.to_vec(), self.field.one())];
        let mut done: Vec<(Vec<usize>, CycNumber)> = Vec::new();
        let mut steps = 0;
        while let Some((w, c)) = todo.pop() {
            let red = self.reducible(&w);
            if red.is_empty() {
                done.push((w, c));
                continue;
            }
            steps += 1;
            if steps > max_steps {
                return Err(Error::Verification("rewriting did not terminate".into()));
            }
            let i = match strategy {
                Strategy::Leftmost => red[0],
                Strategy::Rightmost => red[red.len() - 1],
                Strategy::Random(_) => red[rng.as_mut().unwrap().gen_range(0..red.len())],
            };
            if i + 1 < w.len() && w[i] > w[i + 1] {
                for (rw, rc) in self.rule(w[i], w[i + 1])? {
                    let mut nw = w[..i].to_vec();
                    nw.extend_from_slice(rw);
                    nw.extend_from_slice(&w[i + 2..]);
                    todo.push((nw, &c * rc));
                }
            } else {
                let b = self.powers[w[i]].bound() as usize;
                if let PowerRule::Cyclic(_) = self.powers[w[i]] {
                    let mut nw = w[..i].to_vec();
                    nw.extend_from_slice(&w[i + b..]);
                    todo.push((nw, &c * &self.power_scalars[w[i]]));
                }
            }
        }
        Ok(done)
    }
}

/// The algebra with basis the normal monomials g_0^{e_0} ⋯ g_{n−1}^{e_{n−1}}.
pub struct PbwAlgebra {
    id: AlgebraId,
    pub sys: RewriteSystem,
    strides: Vec<usize>,
    dim: usize,
    /// right[m * gens + g] = m · g.
    right: Vec<Vector>,
}

impl PbwAlgebra {
    pub fn new(sys: RewriteSystem) -> Result<PbwAlgebra> {
        let n = sys.gens();
        let mut strides = vec![1usize; n];
        for i in (0..n.saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sys.powers[i + 1].bound() as usize;
        }
        let dim = if n == 0 { 1 } else { strides[0] * sys.powers[0].bound() as usize };
        let mut b = Builder {
            sys: &sys,
            strides: &strides,
            memo: vec![None; dim * n],
            busy: vec![false; dim * n],
        };
        for m in 0..dim {
            for g in 0..n {
                b.right(m, g)?;
            }
        }
        let right = b.memo.into_iter().map(|v| v.unwrap()).collect();
        Ok(PbwAlgebra {
            id: fresh_id(),
            sys,
            strides,
            dim,
            right,
        })
    }

    pub fn gens(&self) -> usize {
        self.sys.gens()
    }

    pub fn exponents(&self, m: usize) -> Vec<u32> {
        (0..self.gens())
            .map(|i| ((m / self.strides[i]) % self.sys.powers[i].bound() as usize) as u32)
            .collect()
    }

    pub fn index(&self, exps: &[u32]) -> usize {
        exps.iter().zip(&self.strides).map(|(&e, &s)| e as usize * s).sum()
    }

    pub fn word(&self, m: usize) -> Vec<usize> {
        let mut w = Vec::new();
        for (g, e) in self.exponents(m).into_iter().enumerate() {
            w.extend(core::iter::repeat(g).take(e as usize));
        }
        w
    }

    pub fn generator(&self, g: usize) -> Vector {
        self.right_mul_gen(&self.unit(), g)
    }

    pub fn right_mul_gen(&self, v: &Vector, g: usize) -> Vector {
        let mut acc = Accumulator::new();
        for (m, c) in v.iter() {
            acc.add_scaled(&self.right[m * self.gens() + g], c);
        }
        acc.finish()
    }

    /// Evaluates a word sum.
    pub fn eval(&self, ws: &WordSum) -> Vector {
        let mut acc = Accumulator::new();
        for (w, c) in ws {
            acc.add_scaled(&self.eval_word(w), c);
        }
        acc.finish()
    }

    pub fn eval_word(&self, w: &[usize]) -> Vector {
        w.iter().fold(self.unit(), |v, &g| self.right_mul_gen(&v, g))
    }

    /// Converts normal words to a vector.
    pub fn from_normal_words(&self, ws: &WordSum) -> Vector {
        let mut acc = Accumulator::new();
        for (w, c) in ws {
            let mut e = vec![0u32; self.gens()];
            for &g in w {
                e[g] += 1;
            }
            acc.push(self.index(&e), c.clone());
        }
        acc.finish()
    }

    /// Every rule lhs equals its rhs after left multiplication by every normal monomial,
    /// and sampled triples associate.
    pub fn verify_consistency(&self, samples: usize, seed: u64) -> CheckReport {
        let mut r = CheckReport::new("rewriting_consistency");
        let n = self.gens();
        let w = sweep::find_first(self.dim, |m| {
            let x = self.basis(m);
            for h in 0..n {
                for g in 0..h {
                    if let Some(rhs) = &self.sys.swaps[h * n + g] {
                        let lhs = self.right_mul_gen(&self.right_mul_gen(&x, h), g);
                        let mut acc = Accumulator::new();
                        for (rw, c) in rhs {
                            acc.add_scaled(&rw.iter().fold(x.clone(), |v, &t| self.right_mul_gen(&v, t)), c);
                        }
                        if lhs != acc.finish() {
                            return Some(alloc::format!("{} · {}{}", self.label(m), self.sys.names[h], self.sys.names[g]));
                        }
                    }
                }
                let b = self.sys.powers[h].bound();
                let pw = (0..b).fold(x.clone(), |v, _| self.right_mul_gen(&v, h));
                let want = match self.sys.powers[h] {
                    PowerRule::Nilpotent(_) => Vector::zero(),
                    PowerRule::Cyclic(_) => x.scale(&self.sys.power_scalars[h]),
                };
                if pw != want {
                    return Some(alloc::format!("{} · {}^{}", self.label(m), self.sys.names[h], b));
                }
            }
            None
        });
        r.count("monomials", self.dim as u64);
        if let Some(s) = w {
            r.mark_failed("rule", s);
            return r;
        }
        let t = sweep::sample_tuples(seed, self.dim, 3, samples);
        r.count("associativity_samples", t.len() as u64);
        let w = sweep::find_first(t.len(), |k| {
            let (a, b, c) = (self.basis(t[k][0]), self.basis(t[k][1]), self.basis(t[k][2]));
            (self.mul(&self.mul(&a, &b), &c) != self.mul(&a, &self.mul(&b, &c))).then_some(k)
        });
        if let Some(k) = w {
            r.mark_failed("associativity", t[k].iter().map(|&i| self.label(i)).collect::<Vec<_>>().join(", "));
        }
        r
    }

    /// Compares leftmost, rightmost and random single-step rewriting on random words.
    pub fn verify_confluence(&self, words: usize, max_len: usize, seed: u64) -> CheckReport {
        let mut r = CheckReport::new("confluence");
        let n = self.gens();
        let mut rng = sweep::rng(seed);
        let ws: Vec<Vec<usize>> = (0..words)
            .map(|_| {
                let len = rng.gen_range(0..=max_len);
                (0..len).map(|_| rng.gen_range(0..n)).collect()
            })
            .collect();
        r.count("words", ws.len() as u64);
        let w = sweep::find_first(ws.len(), |k| {
            let reference = self.eval_word(&ws[k]);
            for s in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(seed ^ k as u64)] {
                match self.sys.rewrite_word(&ws[k], s, 1_000_000) {
                    Ok(nf) if self.from_normal_words(&nf) == reference => {}
                    _ => return Some(k),
                }
            }
            None
        });
        if let Some(k) = w {
            let word: Vec<&str> = ws[k].iter().map(|&g| self.sys.names[g].as_str()).collect();
            r.mark_failed("word", word.join(" "));
        }
        r
    }
}

struct Builder<'a> {
    sys: &'a RewriteSystem,
    strides: &'a [usize],
    memo: Vec<Option<Vector>>,
    busy: Vec<bool>,
}

impl Builder<'_> {
    fn bound(&self, g: usize) -> usize {
        self.sys.powers[g].bound() as usize
    }

    fn exp(&self, m: usize, g: usize) -> usize {
        (m / self.strides[g]) % self.bound(g)
    }

    fn right(&mut self, m: usize, g: usize) -> Result<Vector> {
        let n = self.sys.gens();
        let key = m * n + g;
        if let Some(v) = &self.memo[key] {
            return Ok(v.clone());
        }
        if self.busy[key] {
            return Err(Error::Verification("rewriting rules loop".into()));
        }
        self.busy[key] = true;
        let f = self.sys.field;
        let last = (0..n).rev().find(|&h| self.exp(m, h) > 0);
        let v = match last {
            Some(h) if h > g => {
                // m = m′ h, and h g is rewritten
                let mp = m - self.strides[h];
                let mut acc = Accumulator::new();
                for (w, c) in self.sys.rule(h, g)?.clone() {
                    let mut cur = Vector::basis(mp, f);
                    for &t in &w {
                        cur = self.right_vec(&cur, t)?;
                    }
                    acc.add_scaled(&cur, &c);
                }
                acc.finish()
            }
            Some(h) if h == g && self.exp(m, g) + 1 == self.bound(g) => match self.sys.powers[g] {
                PowerRule::Nilpotent(_) => Vector::zero(),
                PowerRule::Cyclic(_) => Vector::single(
                    m - self.exp(m, g) * self.strides[g],
                    self.sys.power_scalars[g].clone(),
                ),
            },
            _ if self.bound(g) == 1 => match self.sys.powers[g] {
                PowerRule::Nilpotent(_) => Vector::zero(),
                PowerRule::Cyclic(_) => Vector::single(m, self.sys.power_scalars[g].clone()),
            },
            _ => Vector::basis(m + self.strides[g], f),
        };
        self.busy[key] = false;
        self.memo[key] = Some(v.clone());
        Ok(v)
    }

    fn right_vec(&mut self, v: &Vector, g: usize) -> Result<Vector> {
        let mut acc = Accumulator::new();
        for (m, c) in v.iter() {
            acc.add_scaled(&self.right(m, g)?, c);
        }
        Ok(acc.finish())
    }
}

impl Algebra for PbwAlgebra {
    fn id(&self) -> AlgebraId {
        self.id
    }
    fn field(&self) -> &'static CycField {
        self.sys.field
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn unit(&self) -> Vector {
        Vector::basis(0, self.sys.field)
    }
    fn mul_basis(&self, i: usize, j: usize) -> Cow<'_, Vector> {
        let mut v = Vector::basis(i, self.sys.field);
        for g in self.word(j) {
            v = self.right_mul_gen(&v, g);
        }
        Cow::Owned(v)
    }
    fn label(&self, i: usize) -> String {
        let parts: Vec<(&str, usize)> = self
            .exponents(i)
            .into_iter()
            .enumerate()
            .map(|(g, e)| (self.sys.names[g].as_str(), e as usize))
            .collect();
        crate::taft::monomial(&parts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// q-plane yx = q xy with x³ = y³ = 0 at p = 3.
    fn qplane() -> PbwAlgebra {
        let f = CycField::get(3).unwrap();
        let mut s = RewriteSystem::new(f, &["x", "y"], &[PowerRule::Nilpotent(3), PowerRule::Nilpotent(3)]);
        s.skew(1, 0, f.q());
        PbwAlgebra::new(s).unwrap()
    }

    #[test]
    fn qplane_products() {
        let a = qplane();
        let f = a.field();
        assert_eq!(a.dim(), 9);
        let x = a.generator(0);
        let y = a.generator(1);
        assert_eq!(a.mul(&y, &x), a.mul(&x, &y).scale(&f.q()));
        assert!(a.pow(&x, 3).is_zero());
        let yx2 = a.mul(&y, &a.mul(&x, &x));
        assert_eq!(yx2, Vector::single(a.index(&[2, 1]), f.q_powi(2)));
        assert!(a.verify_consistency(200, 1).passed());
        assert!(a.verify_confluence(200, 6, 2).passed());
    }

    #[test]
    fn cyclic_power() {
        let f = CycField::get(2).unwrap();
        let s = RewriteSystem::new(f, &["g"], &[PowerRule::Cyclic(4)]);
        let a = PbwAlgebra::new(s).unwrap();
        let g = a.generator(0);
        assert_eq!(a.pow(&g, 4), a.unit());
        assert_eq!(a.pow(&g, 5), g);
        let mut s = RewriteSystem::new(f, &["g"], &[PowerRule::Cyclic(4)]);
        s.set_power_scalar(0, -f.one());
        let a = PbwAlgebra::new(s).unwrap();
        let g = a.generator(0);
        assert_eq!(a.pow(&g, 4), a.unit().neg());
        assert!(a.verify_consistency(50, 0).passed());
    }

    #[test]
    fn inconsistent_rules_detected() {
        // yx = xy + 1 with x² = y² = 0: (yx)x = 2x but y(xx) = 0
        let f = CycField::get(2).unwrap();
        let mut s = RewriteSystem::new(f, &["x", "y"], &[PowerRule::Nilpotent(2), PowerRule::Nilpotent(2)]);
        s.swap(1, 0, vec![(vec![0, 1], f.one()), (vec![], f.one())]);
        match PbwAlgebra::new(s) {
            Ok(a) => assert!(!a.verify_consistency(500, 3).passed()),
            Err(_) => {}
        }
    }
}
