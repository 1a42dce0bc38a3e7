//! Exact arithmetic in the cyclotomic field `Q(ζ_n)` and the quantum integers
//! `[k] = (q^k - q^-k) / (q - q^-1)` for `q = ζ_{2r}^m`.
//!
//! Elements are stored as a common positive denominator over integer numerator
//! coefficients of a polynomial in `ζ_n`, fully reduced modulo the cyclotomic
//! polynomial `Φ_n`. Because `Φ_n` is irreducible, the reduced form is unique and
//! equality is a componentwise comparison.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numeric::{bits_for_digits, real_from_int, BigComplex, DEFAULT_PRECISION, MIN_PRECISION, RM};

pub type Rational = BigRational;

/// Coefficients (lowest degree first) of the `n`-th cyclotomic polynomial,
/// obtained by dividing `x^n - 1` by `Φ_d` for every proper divisor `d` of `n`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache lock").get(&n) {
        return p.clone();
    }
    assert!(n >= 1, "cyclotomic polynomial of order 0");
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = exact_monic_div(&num, &cyclotomic_polynomial(d));
    }
    cache.lock().expect("cache lock").insert(n, num.clone());
    num
}

fn exact_monic_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= &c * d;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|k| k.gcd(&n) == 1).count() as u32
}

/// The field `Q(ζ_n)` together with its reduction data.
#[derive(Debug)]
pub struct CyclotomicField {
    order: u32,
    modulus: Vec<BigInt>,
    /// `ζ^k mod Φ_n` for `k = 0..order`.
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicField {
    pub fn new(order: u32) -> Arc<Self> {
        static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
        let fields = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = fields.lock().expect("field lock").get(&order) {
            return Arc::clone(f);
        }
        let modulus = cyclotomic_polynomial(order);
        let degree = modulus.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by x and reduce
            let top = cur[degree - 1].clone();
            for j in (1..degree).rev() {
                cur[j] = cur[j - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for (j, c) in cur.iter_mut().enumerate() {
                    *c -= &top * &modulus[j];
                }
            }
        }
        let field = Arc::new(CyclotomicField { order, modulus, powers });
        fields.lock().expect("field lock").insert(order, Arc::clone(&field));
        field
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Vector-space dimension `φ(n)`.
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    fn reduce(&self, mut wide: Vec<BigInt>) -> Vec<BigInt> {
        let d = self.degree();
        for k in (d..wide.len()).rev() {
            let c = std::mem::take(&mut wide[k]);
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                wide[k - d + j] -= &c * &self.modulus[j];
            }
        }
        wide.truncate(d);
        wide.resize(d, BigInt::zero());
        wide
    }
}

/// An exact element of `Q(ζ_n)`.
#[derive(Clone)]
pub struct CycNum {
    field: Arc<CyclotomicField>,
    num: Vec<BigInt>,
    den: BigInt,
}

impl CycNum {
    fn from_parts(field: Arc<CyclotomicField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            num.iter_mut().for_each(|c| *c = -std::mem::take(c));
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            num.iter_mut().for_each(|c| *c /= &g);
            den /= &g;
        }
        CycNum { field, num, den }
    }

    pub fn zero(field: &Arc<CyclotomicField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: &Arc<CyclotomicField>) -> Self {
        Self::from_int(field, 1)
    }

    pub fn from_int(field: &Arc<CyclotomicField>, n: i64) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = BigInt::from(n);
        CycNum { field: Arc::clone(field), num, den: BigInt::one() }
    }

    pub fn from_rational(field: &Arc<CyclotomicField>, q: &Rational) -> Self {
        let mut num = vec![BigInt::zero(); field.degree()];
        num[0] = q.numer().clone();
        Self::from_parts(Arc::clone(field), num, q.denom().clone())
    }

    /// Builds an element from rational coefficients of `1, ζ, ζ², …` (any length).
    pub fn from_coeffs(field: &Arc<CyclotomicField>, coeffs: &[Rational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let wide: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let mut acc = vec![BigInt::zero(); field.degree()];
        for (k, c) in wide.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &field.powers[k % field.order as usize];
            for (a, b) in acc.iter_mut().zip(row) {
                *a += c * b;
            }
        }
        Self::from_parts(Arc::clone(field), acc, den)
    }

    /// `ζ_n^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CyclotomicField>, k: i64) -> Self {
        let idx = k.rem_euclid(field.order as i64) as usize;
        CycNum { field: Arc::clone(field), num: field.powers[idx].clone(), den: BigInt::one() }
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order
    }

    /// Reduced rational coefficients, length `φ(n)`.
    pub fn coeffs(&self) -> Vec<Rational> {
        self.num.iter().map(|c| Rational::new(c.clone(), self.den.clone())).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(Zero::is_zero)
    }

    /// The integer value if this element is a rational integer.
    pub fn is_rational_integer(&self) -> Option<BigInt> {
        if self.den.is_one() && self.num[1..].iter().all(Zero::is_zero) {
            Some(self.num[0].clone())
        } else {
            None
        }
    }

    pub fn as_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    fn check_field(&self, other: &CycNum) -> Result<()> {
        if self.field.order != other.field.order {
            return Err(Error::OrderMismatch(self.field.order, other.field.order));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &CycNum) -> Result<CycNum> {
        self.check_field(other)?;
        if self.den == other.den {
            let num = self.num.iter().zip(&other.num).map(|(a, b)| a + b).collect();
            return Ok(Self::from_parts(Arc::clone(&self.field), num, self.den.clone()));
        }
        let num = self.num.iter().zip(&other.num).map(|(a, b)| a * &other.den + b * &self.den).collect();
        Ok(Self::from_parts(Arc::clone(&self.field), num, &self.den * &other.den))
    }

    pub fn try_sub(&self, other: &CycNum) -> Result<CycNum> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &CycNum) -> Result<CycNum> {
        self.check_field(other)?;
        let d = self.field.degree();
        let mut wide = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.num.iter().enumerate() {
                if !b.is_zero() {
                    wide[i + j] += a * b;
                }
            }
        }
        let num = self.field.reduce(wide);
        Ok(Self::from_parts(Arc::clone(&self.field), num, &self.den * &other.den))
    }

    pub fn try_div(&self, other: &CycNum) -> Result<CycNum> {
        self.try_mul(&other.inv()?)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Φ_n`.
    pub fn inv(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let a: Vec<Rational> = trim(self.coeffs());
        let m: Vec<Rational> = self.field.modulus.iter().map(|c| Rational::from(c.clone())).collect();
        // invariant: s_i * a ≡ r_i (mod Φ)
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1) = (Vec::<Rational>::new(), vec![Rational::one()]);
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            if r1.is_empty() {
                return Err(Error::Internal("non-invertible element in a field".into()));
            }
        }
        let c = r1[0].clone();
        let coeffs: Vec<Rational> = s1.iter().map(|s| s / &c).collect();
        Ok(CycNum::from_coeffs(&self.field, &coeffs))
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, e: i64) -> Result<CycNum> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = CycNum::one(&self.field);
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &b;
            }
            b = &b * &b;
            k >>= 1;
        }
        Ok(acc)
    }

    pub fn scale_int(&self, k: i64) -> CycNum {
        let k = BigInt::from(k);
        Self::from_parts(Arc::clone(&self.field), self.num.iter().map(|c| c * &k).collect(), self.den.clone())
    }

    /// Evaluates at `ζ_n = exp(2πi/n)` using precomputed numeric powers.
    pub fn embed_with(&self, zeta_powers: &[BigComplex], bits: usize) -> BigComplex {
        let mut re = real_from_int(&BigInt::zero(), bits);
        let mut im = re.clone();
        for (c, z) in self.num.iter().zip(zeta_powers) {
            if c.is_zero() {
                continue;
            }
            let c = real_from_int(c, bits);
            re = re.add(&c.mul(z.re(), bits, RM), bits, RM);
            im = im.add(&c.mul(z.im(), bits, RM), bits, RM);
        }
        if !self.den.is_one() {
            let d = real_from_int(&self.den, bits);
            re = re.div(&d, bits, RM);
            im = im.div(&d, bits, RM);
        }
        BigComplex::new(re, im, bits)
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(Rational::zero);
            let y = b.get(i).cloned().unwrap_or_else(Rational::zero);
            x - y
        })
        .collect();
    trim(out)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    if rem.len() < b.len() {
        return (Vec::new(), trim(rem));
    }
    let lead = b[db].clone();
    let mut quot = vec![Rational::zero(); rem.len() - db];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + db] / &lead;
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] -= &c * bj;
        }
        quot[k] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.den == other.den && self.num == other.num
    }
}

impl Eq for CycNum {}

impl std::hash::Hash for CycNum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.order.hash(state);
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[Q(ζ_{})]({self})", self.field.order)
    }
}

/// Shows the element as a polynomial in `ζ`, e.g. `(1 + 2ζ^3)/5`.
impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (k, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (k, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => "ζ".to_string(),
                (1, false) => format!("{mag}ζ"),
                (_, true) => format!("ζ^{k}"),
                (_, false) => format!("{mag}ζ^{k}"),
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (i, (sign, body)) in terms.iter().enumerate() {
            match (i, *sign) {
                (0, "-") => s.push('-'),
                (0, _) => {}
                (_, sg) => s.push_str(&format!(" {sg} ")),
            }
            s.push_str(body);
        }
        if self.den.is_one() {
            f.write_str(&s)
        } else if terms.len() == 1 {
            write!(f, "{s}/{}", self.den)
        } else {
            write!(f, "({s})/{}", self.den)
        }
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a CycNum> for &'a CycNum {
            type Output = CycNum;
            /// Panics if the operands live in different cyclotomic fields.
            fn $method(self, rhs: &CycNum) -> CycNum {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $method(self, rhs: CycNum) -> CycNum {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { field: Arc::clone(&self.field), num: self.num.iter().map(|c| -c).collect(), den: self.den.clone() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

/// `[n]` for `q = ζ_{2r}^m` computed in `field = Q(ζ_{2r})`, with no primitivity check.
///
/// `[n] = q^{n-1} + q^{n-3} + … + q^{-(n-1)}`, and `[0] = 0`.
pub fn quantum_integer_in(field: &Arc<CyclotomicField>, m: i64, n: u32) -> CycNum {
    let mut acc = vec![BigInt::zero(); field.degree()];
    for k in 0..n as i64 {
        let e = m * (n as i64 - 1 - 2 * k);
        let row = &field.powers[e.rem_euclid(field.order as i64) as usize];
        for (a, b) in acc.iter_mut().zip(row) {
            *a += b;
        }
    }
    CycNum { field: Arc::clone(field), num: acc, den: BigInt::one() }
}

/// A validated choice of `r` and of the root `q = ζ_{2r}^m`, with the numeric
/// embedding data for a given decimal precision.
#[derive(Clone, Debug)]
pub struct QContext {
    r: u32,
    m: u32,
    precision: u32,
    bits: usize,
    field: Arc<CyclotomicField>,
    zeta_powers: Arc<Vec<BigComplex>>,
}

impl QContext {
    pub fn new(r: i64, m: i64, precision: u32) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidOrder(r));
        }
        if m < 1 || m > 2 * r - 1 {
            return Err(Error::SelectorOutOfRange { m, max: 2 * r - 1 });
        }
        if m == r {
            return Err(Error::QIsMinusOne(r));
        }
        let order = r / m.gcd(&r);
        if order != r {
            return Err(Error::NotPrimitive { r, m, order });
        }
        Self::build(r as u32, m as u32, precision)
    }

    pub fn with_default_precision(r: i64, m: i64) -> Result<Self> {
        Self::new(r, m, DEFAULT_PRECISION)
    }

    fn build(r: u32, m: u32, precision: u32) -> Result<Self> {
        if precision < MIN_PRECISION {
            return Err(Error::PrecisionTooLow(precision));
        }
        let field = CyclotomicField::new(2 * r);
        let bits = bits_for_digits(precision);
        let zeta_powers = zeta_table(2 * r, field.degree(), bits);
        Ok(QContext { r, m, precision, bits, field, zeta_powers })
    }

    /// All selectors `m` for which `q^2` is a primitive `r`-th root of unity.
    pub fn valid_selectors(r: u32) -> Vec<u32> {
        (1..2 * r).filter(|&m| m != r && m.gcd(&r) == 1).collect()
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn bits(&self) -> usize {
        self.bits
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Number of rational coefficient slots, `φ(2r)`.
    pub fn slots(&self) -> usize {
        self.field.degree()
    }

    pub fn zeta(&self) -> CycNum {
        CycNum::zeta_pow(&self.field, 1)
    }

    pub fn q(&self) -> CycNum {
        CycNum::zeta_pow(&self.field, self.m as i64)
    }

    pub fn zero(&self) -> CycNum {
        CycNum::zero(&self.field)
    }

    pub fn one(&self) -> CycNum {
        CycNum::one(&self.field)
    }

    pub fn int(&self, n: i64) -> CycNum {
        CycNum::from_int(&self.field, n)
    }

    /// `q^r`, which is `+1` or `-1`.
    pub fn q_to_r(&self) -> i64 {
        if self.m.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Sign `s` with `[r - n] = s · [n]` for `0 < n < r`.
    pub fn reflection_sign(&self) -> i64 {
        -self.q_to_r()
    }

    pub fn qint(&self, n: u32) -> CycNum {
        quantum_integer_in(&self.field, self.m as i64, n)
    }

    /// `[n]! = [n][n-1]…[1]`, with `[0]! = 1`.
    pub fn qfact(&self, n: u32) -> CycNum {
        (1..=n).fold(self.one(), |acc, k| &acc * &self.qint(k))
    }

    pub fn embed(&self, a: &CycNum) -> BigComplex {
        assert_eq!(a.order(), self.field.order, "embedding an element of another field");
        a.embed_with(&self.zeta_powers, self.bits)
    }
}

type ZetaTables = Mutex<HashMap<(u32, usize), Arc<Vec<BigComplex>>>>;

fn zeta_table(order: u32, degree: usize, bits: usize) -> Arc<Vec<BigComplex>> {
    static TABLES: OnceLock<ZetaTables> = OnceLock::new();
    let tables = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = tables.lock().expect("zeta lock").get(&(order, bits)) {
        return Arc::clone(t);
    }
    let t: Arc<Vec<BigComplex>> =
        Arc::new((0..degree as i64).map(|k| BigComplex::root_of_unity(k, order as u64, bits)).collect());
    tables.lock().expect("zeta lock").insert((order, bits), Arc::clone(&t));
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::Tolerance;
    use proptest::prelude::*;

    fn ctx(r: i64, m: i64) -> QContext {
        QContext::new(r, m, 100).unwrap()
    }

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |n| cyclotomic_polynomial(n).iter().map(|c| i64::try_from(c).unwrap()).collect::<Vec<_>>();
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(14), vec![1, -1, 1, -1, 1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        for n in 1..60 {
            assert_eq!(cyclotomic_polynomial(n).len() - 1, euler_phi(n) as usize);
        }
    }

    #[test]
    fn context_validation() {
        let c = ctx(7, 1);
        assert_eq!(c.slots(), 6);
        assert!(matches!(QContext::new(7, 7, 100), Err(Error::QIsMinusOne(7))));
        assert!(QContext::new(7, 2, 100).is_ok());
        assert!(matches!(QContext::new(6, 2, 100), Err(Error::NotPrimitive { order: 3, .. })));
        assert!(matches!(QContext::new(7, 14, 100), Err(Error::SelectorOutOfRange { .. })));
        assert!(matches!(QContext::new(1, 1, 100), Err(Error::InvalidOrder(1))));
        assert!(matches!(QContext::new(7, 1, 20), Err(Error::PrecisionTooLow(20))));
        assert_eq!(QContext::valid_selectors(7).len(), 12);
    }

    #[test]
    fn selector_validity_matches_brute_force_order() {
        for r in 2..16u32 {
            let n = 2 * r;
            for m in 1..n {
                // multiplicative order of ζ^{2m} in Z/n
                let step = (2 * m) % n;
                let mut k = 1;
                let mut acc = step;
                while acc != 0 {
                    acc = (acc + step) % n;
                    k += 1;
                }
                let valid = m != r && k == r;
                assert_eq!(QContext::new(r as i64, m as i64, 60).is_ok(), valid, "r={r} m={m}");
            }
        }
    }

    #[test]
    fn zeta_inverse_and_quantum_integers() {
        let c = ctx(7, 1);
        let f = c.field();
        assert!((CycNum::zeta_pow(f, 1) * CycNum::zeta_pow(f, 13)).is_one());
        assert!(c.qint(1).is_one());
        assert!(c.qint(7).is_zero());
        assert!(c.qint(0).is_zero());
        let q = c.q();
        let q2 = &q * &q;
        let expected = &(&q2 + &c.one()) + &q2.inv().unwrap();
        assert_eq!(c.qint(3), expected);
        let tol = Tolerance::from_exponent(50, c.bits());
        let two_cos = 2.0 * (std::f64::consts::PI / 7.0).cos();
        let (re, im) = c.embed(&c.qint(2)).to_f64_lossy();
        assert!((re - two_cos).abs() < 1e-15 && im.abs() < 1e-15);
        let (re, _) = c.embed(&c.qint(3)).to_f64_lossy();
        assert!((re - 2.246_979_603_717_467).abs() < 1e-14);
        assert!(c.embed(&c.one()).within(&BigComplex::one(c.bits()), tol.value()));
    }

    #[test]
    fn factorials() {
        let c = ctx(7, 1);
        assert!(c.qfact(0).is_one());
        assert!(c.qfact(1).is_one());
        assert!(c.qfact(7).is_zero());
        assert_eq!(c.qfact(4), &(&c.qint(4) * &c.qint(3)) * &c.qint(2));
    }

    #[test]
    fn quantum_integer_identity_and_reflection() {
        for r in [3u32, 4, 5, 6, 7, 9] {
            for m in QContext::valid_selectors(r) {
                let c = ctx(r as i64, m as i64);
                let q = c.q();
                let qinv = q.inv().unwrap();
                let diff = &q - &qinv;
                for n in 0..=2 * r {
                    let lhs = &c.qint(n) * &diff;
                    let rhs = &q.pow(n as i64).unwrap() - &qinv.pow(n as i64).unwrap();
                    assert_eq!(lhs, rhs, "r={r} m={m} n={n}");
                }
                assert!(c.qint(r).is_zero());
                for n in 1..r {
                    let refl = c.qint(n).scale_int(c.reflection_sign());
                    assert_eq!(c.qint(r - n), refl, "r={r} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn conjugate_sum_of_three_is_rational_integer() {
        let c1 = ctx(7, 1);
        let f = c1.field();
        let sum = [1i64, 2, 3].iter().fold(CycNum::zero(f), |acc, &m| &acc + &quantum_integer_in(f, m, 3));
        assert_eq!(sum.is_rational_integer(), Some(BigInt::from(2)));
        assert_eq!(c1.one().is_rational_integer(), Some(BigInt::from(1)));
        assert_eq!(c1.zeta().is_rational_integer(), None);
        let half = CycNum::from_rational(f, &Rational::new(1.into(), 2.into()));
        assert_eq!(half.is_rational_integer(), None);
    }

    #[test]
    fn mismatched_fields_are_rejected() {
        let a = ctx(7, 1).one();
        let b = ctx(5, 1).one();
        assert!(matches!(a.try_add(&b), Err(Error::OrderMismatch(14, 10))));
        assert!(matches!(a.try_mul(&b), Err(Error::OrderMismatch(14, 10))));
        assert!(matches!(ctx(7, 1).zero().inv(), Err(Error::DivisionByZero)));
    }

    #[test]
    fn display_as_polynomial_in_zeta() {
        let c = ctx(7, 1);
        assert_eq!(c.qint(2).to_string(), "1 + ζ^2 - ζ^3 + ζ^4 - ζ^5");
        assert_eq!(c.zero().to_string(), "0");
        let half = CycNum::from_rational(c.field(), &Rational::new(1.into(), 2.into()));
        assert_eq!(half.to_string(), "1/2");
    }

    fn arb_cyc(order: u32) -> impl Strategy<Value = CycNum> {
        let degree = euler_phi(order) as usize;
        prop::collection::vec((-20i64..20, 1i64..6), degree).prop_map(move |cs| {
            let field = CyclotomicField::new(order);
            let coeffs: Vec<Rational> = cs.iter().map(|&(n, d)| Rational::new(n.into(), d.into())).collect();
            CycNum::from_coeffs(&field, &coeffs)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn field_axioms(a in arb_cyc(14), b in arb_cyc(14), c in arb_cyc(14)) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a + &(-&a)).is_zero());
            if !a.is_zero() {
                prop_assert!((&a.inv().unwrap() * &a).is_one());
            }
        }

        #[test]
        fn inverse_in_other_fields(a in arb_cyc(18), b in arb_cyc(20)) {
            if !a.is_zero() {
                prop_assert!((&a.inv().unwrap() * &a).is_one());
            }
            if !b.is_zero() {
                prop_assert!((&b.inv().unwrap() * &b).is_one());
            }
        }

        #[test]
        fn embedding_is_multiplicative(a in arb_cyc(14), b in arb_cyc(14)) {
            let c = QContext::new(7, 1, 100).unwrap();
            let tol = Tolerance::from_exponent(90, c.bits());
            let lhs = c.embed(&(&a * &b));
            let rhs = &c.embed(&a) * &c.embed(&b);
            prop_assert!(lhs.within(&rhs, tol.value()));
        }
    }
}
