//! Exact arithmetic in the cyclotomic field Q(ζ), ζ a primitive 4p-th root of unity.
//!
//! Numbers are polynomials in ζ of degree below φ(4p), reduced modulo the
//! cyclotomic polynomial Φ_{4p}, with rational coefficients stored over a
//! common positive denominator. The deformation parameter is q = ζ², so
//! q^{1/2} = ζ, q^p = -1 and q^{2p} = 1.
//!
//! Coefficients live in `i64` while they fit and fall back to `BigInt`
//! otherwise; the representation is canonical either way, so structural
//! equality is value equality.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use once_cell::race::OnceBox;
use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest `p` for which a field context can be built.
pub const MAX_P: usize = 64;

type Coeffs = SmallVec<[i64; 8]>;
type Wide = SmallVec<[i128; 16]>;

static FIELDS: [OnceBox<CycField>; MAX_P + 1] = [const { OnceBox::new() }; MAX_P + 1];

/// Field context for Q(ζ_{4p}). Immutable and shared for the life of the program.
pub struct CycField {
    p: usize,
    order: usize,
    degree: usize,
    /// Φ_{4p}, low degree first, monic.
    modulus: Vec<i64>,
    /// ζ^j reduced, for j in 0..4p.
    powers: Vec<Coeffs>,
    /// Exponents k coprime to 4p, k != 1 (the nontrivial Galois automorphisms ζ -> ζ^k).
    galois: Vec<usize>,
    /// 1/(q - q^{-1}).
    qdiff_inv: Repr,
}

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CycField")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .finish()
    }
}

impl PartialEq for CycField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}
impl Eq for CycField {}

/// Integer polynomial coefficients of Φ_n, computed by dividing x^n - 1 by Φ_d for all proper divisors d.
fn cyclotomic_polynomial(n: usize) -> Vec<i64> {
    let mut poly = vec![0i64; n + 1];
    poly[0] = -1;
    poly[n] = 1;
    for d in 1..n {
        if n % d == 0 {
            let divisor = cyclotomic_polynomial(d);
            poly = exact_div_monic(&poly, &divisor);
        }
    }
    poly
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = num.len() - 1;
    let mut quot = vec![0i64; nd - dd + 1];
    for k in (0..=nd - dd).rev() {
        let c = rem[k + dd];
        quot[k] = c;
        if c != 0 {
            for (i, &di) in den.iter().enumerate() {
                rem[k + i] -= c * di;
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

impl CycField {
    /// The context for a given `p >= 2`. Contexts are built once per `p` and cached.
    pub fn get(p: usize) -> Result<&'static CycField> {
        if p < 2 || p > MAX_P {
            return Err(Error::InvalidP(p));
        }
        Ok(FIELDS[p].get_or_init(|| alloc::boxed::Box::new(CycField::build(p))))
    }

    fn build(p: usize) -> CycField {
        let order = 4 * p;
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order);
        let mut cur: Coeffs = SmallVec::from_elem(0, degree);
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by ζ
            let top = cur[degree - 1];
            let mut next: Coeffs = SmallVec::from_elem(0, degree);
            for i in (1..degree).rev() {
                next[i] = cur[i - 1];
            }
            for i in 0..degree {
                next[i] -= top * modulus[i];
            }
            cur = next;
        }
        let galois = (2..order).filter(|k| k.gcd(&order) == 1).collect();
        let mut field = CycField {
            p,
            order,
            degree,
            modulus,
            powers,
            galois,
            qdiff_inv: Repr::zero(degree),
        };
        let q = Repr::from_ints(field.powers[2].clone(), 1);
        let qinv = Repr::from_ints(field.powers[order - 2].clone(), 1);
        let diff = field.sub_repr(&q, &qinv);
        field.qdiff_inv = field.inv_repr(&diff).expect("q - q^-1 is nonzero");
        field
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Order of ζ, i.e. 4p.
    pub fn order(&self) -> usize {
        self.order
    }

    /// φ(4p), the number of stored coefficients.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of Φ_{4p}, lowest degree first.
    pub fn modulus(&self) -> &[i64] {
        &self.modulus
    }

    fn wrap(&'static self, repr: Repr) -> CycNumber {
        CycNumber { field: self, repr }
    }

    pub fn zero(&'static self) -> CycNumber {
        self.wrap(Repr::zero(self.degree))
    }

    pub fn one(&'static self) -> CycNumber {
        self.int(1)
    }

    pub fn int(&'static self, n: i64) -> CycNumber {
        let mut c: Coeffs = SmallVec::from_elem(0, self.degree);
        c[0] = n;
        self.wrap(Repr::from_ints(c, 1))
    }

    /// The rational number `num/den`.
    pub fn rational(&'static self, num: i64, den: i64) -> Result<CycNumber> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let mut c: Coeffs = SmallVec::from_elem(0, self.degree);
        c[0] = num;
        Ok(self.wrap(Repr::from_ints(c, den)))
    }

    /// Builds a number from rational coefficients in the ζ-power basis.
    pub fn from_fraction_coeffs(&'static self, num: &[BigInt], den: &[BigInt]) -> Result<CycNumber> {
        if num.len() != self.degree || den.len() != self.degree {
            return Err(Error::Parse(alloc::format!(
                "expected {} coefficients, got {}/{}",
                self.degree,
                num.len(),
                den.len()
            )));
        }
        let mut common = BigInt::one();
        for d in den {
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
            common = common.lcm(d);
        }
        let nums: Vec<BigInt> = num
            .iter()
            .zip(den)
            .map(|(n, d)| n * (&common / d))
            .collect();
        Ok(self.wrap(Repr::big_normalized(nums, common)))
    }

    /// ζ^j for any integer j.
    pub fn zeta_pow(&'static self, j: i64) -> CycNumber {
        let k = j.rem_euclid(self.order as i64) as usize;
        self.wrap(Repr::Small {
            num: self.powers[k].clone(),
            den: 1,
        })
    }

    /// ζ itself, i.e. the fixed branch of q^{1/2}.
    pub fn zeta(&'static self) -> CycNumber {
        self.zeta_pow(1)
    }

    /// q = ζ².
    pub fn q(&'static self) -> CycNumber {
        self.zeta_pow(2)
    }

    /// q^e for half-integer e, i.e. ζ^{2e}.
    pub fn q_pow(&'static self, e: HalfInt) -> CycNumber {
        self.zeta_pow(e.twice())
    }

    /// q^n for integer n.
    pub fn q_powi(&'static self, n: i64) -> CycNumber {
        self.zeta_pow(2 * n)
    }

    /// q - q^{-1}.
    pub fn q_diff(&'static self) -> CycNumber {
        self.q() - self.q_powi(-1)
    }

    /// 1/(q - q^{-1}).
    pub fn q_diff_inv(&'static self) -> CycNumber {
        self.wrap(self.qdiff_inv.clone())
    }

    /// The q-integer [n] = (q^n - q^{-n})/(q - q^{-1}), n possibly half-integer.
    pub fn q_int(&'static self, n: HalfInt) -> CycNumber {
        let num = self.q_pow(n) - self.q_pow(-n);
        num * self.q_diff_inv()
    }

    /// [n] for integer n.
    pub fn q_inti(&'static self, n: i64) -> CycNumber {
        self.q_int(HalfInt::from_int(n))
    }

    /// [n]! = [1][2]...[n]; vanishes once n >= p.
    pub fn q_fac(&'static self, n: u64) -> CycNumber {
        let mut acc = self.one();
        for i in 1..=n {
            acc = acc * self.q_inti(i as i64);
        }
        acc
    }

    /// Gaussian binomial [a choose m]. Zero when m < 0 or m > a.
    ///
    /// Evaluated as a product of ratios of q-integers; rejected when every
    /// such presentation divides by [p] = 0.
    pub fn q_binom(&'static self, a: i64, m: i64) -> Result<CycNumber> {
        if m < 0 || m > a {
            return Ok(self.zero());
        }
        let m = m.min(a - m);
        if m >= self.p as i64 {
            return Err(Error::QBinomialUndefined { a, m });
        }
        let mut num = self.one();
        let mut den = self.one();
        for i in 0..m {
            num *= self.q_inti(a - i);
            den *= self.q_inti(i + 1);
        }
        num.checked_div(&den)
    }

    // ---- arithmetic on representations ----

    fn add_repr(&self, a: &Repr, b: &Repr) -> Repr {
        if let (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) = (a, b) {
            if let Some(r) = add_small(an, *ad, bn, *bd) {
                return r;
            }
        }
        let (an, ad) = a.to_big();
        let (bn, bd) = b.to_big();
        let nums = an
            .iter()
            .zip(&bn)
            .map(|(x, y)| x * &bd + y * &ad)
            .collect();
        Repr::big_normalized(nums, ad * bd)
    }

    fn neg_repr(&self, a: &Repr) -> Repr {
        match a {
            Repr::Small { num, den } => Repr::Small {
                num: num.iter().map(|&x| -x).collect(),
                den: *den,
            },
            Repr::Big { num, den } => Repr::Big {
                num: num.iter().map(|x| -x).collect(),
                den: den.clone(),
            },
        }
    }

    fn sub_repr(&self, a: &Repr, b: &Repr) -> Repr {
        self.add_repr(a, &self.neg_repr(b))
    }

    fn mul_repr(&self, a: &Repr, b: &Repr) -> Repr {
        if a.is_zero() || b.is_zero() {
            return Repr::zero(self.degree);
        }
        if let (Repr::Small { num: an, den: ad }, Repr::Small { num: bn, den: bd }) = (a, b) {
            if let Some(r) = self.mul_small(an, *ad, bn, *bd) {
                return r;
            }
        }
        let (an, ad) = a.to_big();
        let (bn, bd) = b.to_big();
        let d = self.degree;
        let mut acc = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in an.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bn.iter().enumerate() {
                if !y.is_zero() {
                    acc[i + j] += x * y;
                }
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = core::mem::take(&mut acc[k]);
            if c.is_zero() {
                continue;
            }
            for i in 0..d {
                let m = self.modulus[i];
                if m != 0 {
                    acc[k - d + i] -= &c * m;
                }
            }
        }
        acc.truncate(d);
        Repr::big_normalized(acc, ad * bd)
    }

    fn mul_small(&self, a: &[i64], ad: i64, b: &[i64], bd: i64) -> Option<Repr> {
        let d = self.degree;
        let mut acc: Wide = SmallVec::from_elem(0, 2 * d - 1);
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let x = x as i128;
            for (j, &y) in b.iter().enumerate() {
                if y != 0 {
                    acc[i + j] = acc[i + j].checked_add(x * y as i128)?;
                }
            }
        }
        for k in (d..2 * d - 1).rev() {
            let c = acc[k];
            if c == 0 {
                continue;
            }
            acc[k] = 0;
            for i in 0..d {
                let m = self.modulus[i];
                if m != 0 {
                    acc[k - d + i] = acc[k - d + i].checked_sub(c.checked_mul(m as i128)?)?;
                }
            }
        }
        acc.truncate(d);
        let den = (ad as i128) * (bd as i128);
        normalize_wide(acc, den)
    }

    /// Image of `a` under ζ -> ζ^k.
    fn galois_repr(&self, a: &Repr, k: usize) -> Repr {
        let (an, ad) = a.to_big();
        let mut acc = vec![BigInt::zero(); self.degree];
        for (j, x) in an.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let pw = &self.powers[(j * k) % self.order];
            for (i, &c) in pw.iter().enumerate() {
                if c != 0 {
                    acc[i] += x * c;
                }
            }
        }
        Repr::big_normalized(acc, ad)
    }

    /// Inverse via the norm: a^{-1} = (product of nontrivial conjugates) / N(a).
    fn inv_repr(&self, a: &Repr) -> Option<Repr> {
        if a.is_zero() {
            return None;
        }
        let mut conj = Repr::one(self.degree);
        for &k in &self.galois {
            conj = self.mul_repr(&conj, &self.galois_repr(a, k));
        }
        let norm = self.mul_repr(a, &conj);
        let (nn, nd) = norm.to_big();
        debug_assert!(nn[1..].iter().all(|x| x.is_zero()));
        let n0 = nn[0].clone();
        // conj * nd / n0
        let (cn, cd) = conj.to_big();
        let mut num: Vec<BigInt> = cn.into_iter().map(|x| x * &nd).collect();
        let mut den = cd * n0;
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -core::mem::take(x);
            }
        }
        Some(Repr::big_normalized(num, den))
    }
}

fn add_small(a: &[i64], ad: i64, b: &[i64], bd: i64) -> Option<Repr> {
    if ad == bd {
        let acc: Wide = a
            .iter()
            .zip(b)
            .map(|(&x, &y)| x as i128 + y as i128)
            .collect();
        return normalize_wide(acc, ad as i128);
    }
    let (ad, bd) = (ad as i128, bd as i128);
    let g = ad.gcd(&bd);
    let (sa, sb) = (bd / g, ad / g);
    let mut acc: Wide = SmallVec::with_capacity(a.len());
    for (&x, &y) in a.iter().zip(b) {
        acc.push((x as i128).checked_mul(sa)?.checked_add((y as i128).checked_mul(sb)?)?);
    }
    normalize_wide(acc, ad.checked_mul(sa)?)
}

/// Reduce by the gcd of all entries and the denominator; `None` when the result overflows i64.
fn normalize_wide(mut num: Wide, mut den: i128) -> Option<Repr> {
    if den < 0 {
        den = den.checked_neg()?;
        for x in num.iter_mut() {
            *x = x.checked_neg()?;
        }
    }
    if num.iter().all(|&x| x == 0) {
        return Some(Repr::Small {
            num: SmallVec::from_elem(0, num.len()),
            den: 1,
        });
    }
    if den != 1 {
        let mut g = den;
        for &x in num.iter() {
            if x != 0 {
                g = g.gcd(&x);
                if g == 1 {
                    break;
                }
            }
        }
        if g != 1 {
            den /= g;
            for x in num.iter_mut() {
                *x /= g;
            }
        }
    }
    let lim = i64::MAX as i128;
    if den > lim || num.iter().any(|&x| x > lim || x < -lim) {
        return None;
    }
    Some(Repr::Small {
        num: num.iter().map(|&x| x as i64).collect(),
        den: den as i64,
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small { num: Coeffs, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

impl Repr {
    fn zero(degree: usize) -> Repr {
        Repr::Small {
            num: SmallVec::from_elem(0, degree),
            den: 1,
        }
    }

    fn one(degree: usize) -> Repr {
        let mut num: Coeffs = SmallVec::from_elem(0, degree);
        num[0] = 1;
        Repr::Small { num, den: 1 }
    }

    fn from_ints(num: Coeffs, den: i64) -> Repr {
        let wide: Wide = num.iter().map(|&x| x as i128).collect();
        normalize_wide(wide, den as i128).unwrap_or_else(|| {
            Repr::big_normalized(num.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(den))
        })
    }

    fn is_zero(&self) -> bool {
        match self {
            Repr::Small { num, .. } => num.iter().all(|&x| x == 0),
            Repr::Big { num, .. } => num.iter().all(|x| x.is_zero()),
        }
    }

    fn to_big(&self) -> (Vec<BigInt>, BigInt) {
        match self {
            Repr::Small { num, den } => (num.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(*den)),
            Repr::Big { num, den } => (num.clone(), den.clone()),
        }
    }

    fn big_normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Repr {
        if den.is_negative() {
            den = -den;
            for x in num.iter_mut() {
                *x = -core::mem::take(x);
            }
        }
        if num.iter().all(|x| x.is_zero()) {
            return Repr::zero(num.len());
        }
        let mut g = den.clone();
        for x in &num {
            if !x.is_zero() {
                g = g.gcd(x);
                if g.is_one() {
                    break;
                }
            }
        }
        if !g.is_one() {
            den /= &g;
            for x in num.iter_mut() {
                *x /= &g;
            }
        }
        let small_num: Option<Coeffs> = num.iter().map(|x| x.to_i64().filter(|&v| v != i64::MIN)).collect();
        match (small_num, den.to_i64()) {
            (Some(num), Some(den)) => Repr::Small { num, den },
            _ => Repr::Big { num, den },
        }
    }
}

/// An element of Q(ζ_{4p}).
#[derive(Clone)]
pub struct CycNumber {
    field: &'static CycField,
    repr: Repr,
}

impl PartialEq for CycNumber {
    fn eq(&self, other: &Self) -> bool {
        self.field.p == other.field.p && self.repr == other.repr
    }
}
impl Eq for CycNumber {}

impl core::hash::Hash for CycNumber {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.repr.hash(state);
    }
}

impl CycNumber {
    pub fn field(&self) -> &'static CycField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.repr.is_zero()
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Small { num, den } => *den == 1 && num[0] == 1 && num[1..].iter().all(|&x| x == 0),
            Repr::Big { .. } => false,
        }
    }

    /// Numerators and the common denominator of the ζ-power coefficients.
    pub fn to_fraction_parts(&self) -> (Vec<BigInt>, BigInt) {
        self.repr.to_big()
    }

    /// Per-coefficient reduced fractions (numerator, denominator) in ζ-power order.
    pub fn coefficient_fractions(&self) -> Vec<(BigInt, BigInt)> {
        let (num, den) = self.repr.to_big();
        num.into_iter()
            .map(|n| {
                if n.is_zero() {
                    (n, BigInt::one())
                } else {
                    let g = n.gcd(&den);
                    (n / &g, &den / &g)
                }
            })
            .collect()
    }

    /// Coefficient of ζ^j as an `(i64, i64)` fraction when it fits.
    pub fn coefficient_i64(&self, j: usize) -> Option<(i64, i64)> {
        let (n, d) = self.coefficient_fractions().into_iter().nth(j)?;
        Some((n.to_i64()?, d.to_i64()?))
    }

    /// True when the number is rational (only the ζ^0 coefficient is nonzero).
    pub fn is_rational(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num[1..].iter().all(|&x| x == 0),
            Repr::Big { num, .. } => num[1..].iter().all(|x| x.is_zero()),
        }
    }

    pub fn inv(&self) -> Result<CycNumber> {
        self.field
            .inv_repr(&self.repr)
            .map(|repr| CycNumber { field: self.field, repr })
            .ok_or(Error::DivisionByZero)
    }

    pub fn checked_div(&self, other: &CycNumber) -> Result<CycNumber> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, mut e: u64) -> CycNumber {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Signed integer power; fails for negative exponents of zero.
    pub fn powi(&self, e: i64) -> Result<CycNumber> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Image under the Galois automorphism ζ -> ζ^k (k coprime to 4p).
    pub fn galois(&self, k: usize) -> CycNumber {
        CycNumber {
            field: self.field,
            repr: self.field.galois_repr(&self.repr, k % self.field.order),
        }
    }

    fn check_field(&self, other: &CycNumber) {
        assert!(
            self.field.p == other.field.p,
            "mixing cyclotomic numbers of different fields (p = {} and p = {})",
            self.field.p,
            other.field.p
        );
    }

    /// Number of nonzero ζ-power coefficients.
    pub fn support_len(&self) -> usize {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().filter(|&&x| x != 0).count(),
            Repr::Big { num, .. } => num.iter().filter(|x| !x.is_zero()).count(),
        }
    }
}

impl<'a> Add<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn add(self, rhs: &CycNumber) -> CycNumber {
        self.check_field(rhs);
        CycNumber {
            field: self.field,
            repr: self.field.add_repr(&self.repr, &rhs.repr),
        }
    }
}

impl<'a> Sub<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn sub(self, rhs: &CycNumber) -> CycNumber {
        self.check_field(rhs);
        CycNumber {
            field: self.field,
            repr: self.field.sub_repr(&self.repr, &rhs.repr),
        }
    }
}

impl<'a> Mul<&'a CycNumber> for &'a CycNumber {
    type Output = CycNumber;
    fn mul(self, rhs: &CycNumber) -> CycNumber {
        self.check_field(rhs);
        CycNumber {
            field: self.field,
            repr: self.field.mul_repr(&self.repr, &rhs.repr),
        }
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber {
            field: self.field,
            repr: self.field.neg_repr(&self.repr),
        }
    }
}

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: &CycNumber) -> CycNumber {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<CycNumber> for &'a CycNumber {
            type Output = CycNumber;
            fn $m(self, rhs: CycNumber) -> CycNumber {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: &CycNumber) {
        *self = &*self + rhs;
    }
}
impl AddAssign<CycNumber> for CycNumber {
    fn add_assign(&mut self, rhs: CycNumber) {
        *self = &*self + &rhs;
    }
}
impl SubAssign<&CycNumber> for CycNumber {
    fn sub_assign(&mut self, rhs: &CycNumber) {
        *self = &*self - rhs;
    }
}
impl SubAssign<CycNumber> for CycNumber {
    fn sub_assign(&mut self, rhs: CycNumber) {
        *self = &*self - &rhs;
    }
}
impl MulAssign<&CycNumber> for CycNumber {
    fn mul_assign(&mut self, rhs: &CycNumber) {
        *self = &*self * rhs;
    }
}
impl MulAssign<CycNumber> for CycNumber {
    fn mul_assign(&mut self, rhs: CycNumber) {
        *self = &*self * &rhs;
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, n: &BigInt, d: &BigInt) -> fmt::Result {
    if d.is_one() {
        write!(f, "{}", n)
    } else {
        write!(f, "{}/{}", n, d)
    }
}

/// Prints as a polynomial in q and w = q^{1/2}: each ζ^j becomes q^{⌊j/2⌋} w^{j mod 2}.
impl fmt::Display for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fr = self.coefficient_fractions();
        let mut first = true;
        for (j, (n, d)) in fr.iter().enumerate() {
            if n.is_zero() {
                continue;
            }
            let neg = n.is_negative();
            let abs = n.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let qe = j / 2;
            let w = j % 2 == 1;
            let mut parts: Vec<alloc::string::String> = Vec::new();
            if qe == 1 {
                parts.push("q".into());
            } else if qe > 1 {
                parts.push(alloc::format!("q^{}", qe));
            }
            if w {
                parts.push("w".into());
            }
            let unit_coeff = abs.is_one() && d.is_one();
            if !unit_coeff || parts.is_empty() {
                write_rational(f, &abs, d)?;
                if !parts.is_empty() {
                    f.write_str("*")?;
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber[p={}]({})", self.field.p, self)
    }
}

/// An exact half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt(i64);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);
    pub const HALF: HalfInt = HalfInt(1);

    pub const fn from_int(n: i64) -> HalfInt {
        HalfInt(2 * n)
    }

    pub const fn from_twice(t: i64) -> HalfInt {
        HalfInt(t)
    }

    /// n/2.
    pub const fn halves(n: i64) -> HalfInt {
        HalfInt(n)
    }

    pub const fn twice(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 + rhs.0)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt(self.0 - rhs.0)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt(-self.0)
    }
}

impl Mul<i64> for HalfInt {
    type Output = HalfInt;
    fn mul(self, rhs: i64) -> HalfInt {
        HalfInt(self.0 * rhs)
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> HalfInt {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl PartialOrd for CycField {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.p.cmp(&other.p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    #[allow(unused_imports)]
    use alloc::string::ToString;

    fn f(p: usize) -> &'static CycField {
        CycField::get(p).unwrap()
    }

    #[test]
    fn rejects_small_p() {
        assert!(matches!(CycField::get(1), Err(Error::InvalidP(1))));
        assert!(CycField::get(0).is_err());
    }

    #[test]
    fn known_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(8), vec![1, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(16), vec![1, 0, 0, 0, 0, 0, 0, 0, 1]);
        assert_eq!(cyclotomic_polynomial(20), vec![1, 0, -1, 0, 1, 0, -1, 0, 1]);
    }

    #[test]
    fn root_of_unity_identities() {
        for p in 2..=7 {
            let k = f(p);
            assert!((k.q_powi(p as i64) + k.one()).is_zero(), "q^p = -1 at p={p}");
            assert!(k.q_powi(2 * p as i64).is_one());
            assert!(k.q_pow(HalfInt::from_int(2 * p as i64)).is_one());
            assert_eq!(k.q_pow(HalfInt::HALF), k.zeta());
            assert!(k.q_inti(p as i64).is_zero());
            assert!(k.q_inti(1).is_one());
            assert!(k.q_inti(0).is_zero());
        }
        let k = f(2);
        assert!((k.q() * k.q() + k.one()).is_zero());
    }

    #[test]
    fn zeta_satisfies_its_minimal_polynomial() {
        for p in 2..=6 {
            let k = f(p);
            let mut acc = k.zero();
            for (i, &c) in k.modulus().iter().enumerate() {
                acc += k.int(c) * k.zeta_pow(i as i64);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn inverse_and_division() {
        let k = f(3);
        let a = k.q() + k.int(3) * k.zeta();
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
        assert!(k.zero().inv().is_err());
        let half = k.rational(1, 2).unwrap();
        assert_eq!((&half + &half), k.one());
    }

    #[test]
    fn q_factorial_vanishes_past_p() {
        let k = f(3);
        assert!(!k.q_fac(2).is_zero());
        assert!(k.q_fac(3).is_zero());
    }

    #[test]
    fn q_binomial_ranges() {
        let k = f(3);
        assert!(k.q_binom(2, 3).unwrap().is_zero());
        assert!(k.q_binom(2, -1).unwrap().is_zero());
        assert!(k.q_binom(2, 0).unwrap().is_one());
        // [2 choose 1] = [2]
        assert_eq!(k.q_binom(2, 1).unwrap(), k.q_inti(2));
        // a >= p but m < p is still a well-defined product of ratios
        assert!(k.q_binom(3, 1).unwrap().is_zero());
        assert!(k.q_binom(7, 3).is_err());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let k = f(2);
        let big = k.int(i64::MAX / 2 + 7);
        let sq = &big * &big;
        let back = sq.checked_div(&big).unwrap();
        assert_eq!(back, big);
        let sum = &sq - &sq;
        assert!(sum.is_zero());
    }

    #[test]
    fn display_uses_q_and_w() {
        let k = f(3);
        assert_eq!(k.one().to_string(), "1");
        assert_eq!(k.zeta().to_string(), "w");
        assert_eq!(k.q().to_string(), "q");
        assert_eq!((k.q() * k.zeta()).to_string(), "q*w");
        assert_eq!(k.zero().to_string(), "0");
        assert_eq!(k.rational(-1, 2).unwrap().to_string(), "-1/2");
    }
}
