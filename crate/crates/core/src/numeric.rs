//! Arbitrary-precision complex numbers used for the numeric embedding of
//! cyclotomic values and for systems whose data is only known numerically.
//!
//! All arithmetic rounds to nearest-even at a fixed binary precision that is
//! derived from a decimal digit count, so results are reproducible bit for bit.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::Error;

pub const RM: RoundingMode = RoundingMode::ToEven;

/// Default number of decimal digits carried by numeric values.
pub const DEFAULT_PRECISION: u32 = 100;

/// Smallest accepted precision (decimal digits).
pub const MIN_PRECISION: u32 = 50;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|cc| f(&mut cc.borrow_mut()))
}

/// Binary precision (in bits) used for `digits` decimal digits, with guard bits.
pub fn bits_for_digits(digits: u32) -> usize {
    let bits = (digits as f64 * std::f64::consts::LOG2_10).ceil() as usize + 64;
    bits.div_ceil(64) * 64
}

pub fn real_from_int(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let wide = p.max(64 * digits.len() + 64);
    let base = BigFloat::from_u64(u64::MAX, wide).add(&BigFloat::from_u64(1, wide), wide, RM);
    let mut acc = BigFloat::from_u64(0, wide);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, wide, RM).add(&BigFloat::from_u64(*d, wide), wide, RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc = acc.neg();
    }
    let mut out = acc;
    out.set_precision(p, RM).expect("precision");
    out
}

pub fn real_from_rational(q: &BigRational, p: usize) -> BigFloat {
    let n = real_from_int(q.numer(), p);
    if q.denom() == &BigInt::from(1) {
        return n;
    }
    n.div(&real_from_int(q.denom(), p), p, RM)
}

pub fn real_from_i64(n: i64, p: usize) -> BigFloat {
    BigFloat::from_i64(n, p)
}

pub fn pi(p: usize) -> BigFloat {
    with_consts(|cc| cc.pi(p, RM))
}

pub fn cos(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.cos(p, RM, cc))
}

pub fn sin(x: &BigFloat, p: usize) -> BigFloat {
    with_consts(|cc| x.sin(p, RM, cc))
}

pub fn parse_real(s: &str, p: usize) -> Result<BigFloat, Error> {
    let v = with_consts(|cc| BigFloat::parse(s.trim(), Radix::Dec, p, RM, cc));
    if v.is_nan() || v.is_inf() {
        return Err(Error::Parse { line: 0, message: format!("not a decimal number: {s:?}") });
    }
    Ok(v)
}

/// `10^(-exponent)` at precision `p`.
pub fn power_of_ten_neg(exponent: u32, p: usize) -> BigFloat {
    parse_real(&format!("1e-{exponent}"), p).expect("valid literal")
}

fn cmp_real(a: &BigFloat, b: &BigFloat) -> Ordering {
    match a.cmp(b) {
        Some(c) if c < 0 => Ordering::Less,
        Some(c) if c > 0 => Ordering::Greater,
        _ => Ordering::Equal,
    }
}

/// Formats `x` in scientific notation with exactly `digits` significant digits.
pub fn format_real(x: &BigFloat, digits: usize) -> String {
    let digits = digits.max(1);
    if x.is_zero() {
        return format!("0.{}e0", "0".repeat(digits - 1));
    }
    let raw = with_consts(|cc| x.format(Radix::Dec, RM, cc)).expect("finite value");
    let (negative, body) = match raw.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, raw.as_str()),
    };
    let (mantissa, exponent) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().expect("exponent")),
        None => (body, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let mut all: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    let mut exponent = exponent + int_part.len() as i64 - 1;
    // strip leading zeros, the formatter normally emits none
    while all.len() > 1 && all[0] == 0 {
        all.remove(0);
        exponent -= 1;
    }
    let round_up = all.len() > digits && all[digits] >= 5;
    all.resize(digits.max(all.len()), 0);
    all.truncate(digits);
    if round_up {
        let mut i = digits;
        loop {
            if i == 0 {
                all.insert(0, 1);
                all.truncate(digits);
                exponent += 1;
                break;
            }
            i -= 1;
            if all[i] == 9 {
                all[i] = 0;
            } else {
                all[i] += 1;
                break;
            }
        }
    }
    let text: String = all.iter().map(|d| char::from(b'0' + d)).collect();
    let sign = if negative { "-" } else { "" };
    if digits == 1 {
        format!("{sign}{text}e{exponent}")
    } else {
        format!("{sign}{}.{}e{exponent}", &text[..1], &text[1..])
    }
}

/// A complex number with arbitrary-precision real and imaginary parts.
#[derive(Clone, Debug)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
    prec: usize,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        BigComplex { re, im, prec }
    }

    pub fn from_real(re: BigFloat, prec: usize) -> Self {
        BigComplex { re, im: BigFloat::from_u64(0, prec), prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn i(prec: usize) -> Self {
        BigComplex::new(BigFloat::from_u64(0, prec), BigFloat::from_u64(1, prec), prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self::from_real(BigFloat::from_i64(n, prec), prec)
    }

    pub fn from_rational(q: &BigRational, prec: usize) -> Self {
        Self::from_real(real_from_rational(q, prec), prec)
    }

    /// `exp(2πi · k / n)`.
    pub fn root_of_unity(k: i64, n: u64, prec: usize) -> Self {
        let work = prec + 64;
        let k = k.rem_euclid(n as i64);
        let angle =
            pi(work).mul(&BigFloat::from_i64(2 * k, work), work, RM).div(&BigFloat::from_u64(n, work), work, RM);
        let mut re = cos(&angle, work);
        let mut im = sin(&angle, work);
        re.set_precision(prec, RM).expect("precision");
        im.set_precision(prec, RM).expect("precision");
        BigComplex { re, im, prec }
    }

    pub fn re(&self) -> &BigFloat {
        &self.re
    }

    pub fn im(&self) -> &BigFloat {
        &self.im
    }

    pub fn precision_bits(&self) -> usize {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), BigFloat::neg(&self.im), self.prec)
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }

    pub fn scale(&self, k: &BigFloat) -> Self {
        let p = self.prec;
        BigComplex::new(self.re.mul(k, p, RM), self.im.mul(k, p, RM), p)
    }

    pub fn div(&self, other: &BigComplex) -> Result<Self, Error> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec.max(other.prec);
        let den = other.norm_sqr();
        let num = self * &other.conj();
        Ok(BigComplex::new(num.re.div(&den, p, RM), num.im.div(&den, p, RM), p))
    }

    pub fn inv(&self) -> Result<Self, Error> {
        BigComplex::one(self.prec).div(self)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = BigComplex::one(self.prec);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        if self.im.is_zero() {
            return sqrt_real(&self.re, p);
        }
        let two = BigFloat::from_u64(2, p);
        let r = self.abs();
        let re = r.add(&self.re, p, RM).div(&two, p, RM).sqrt(p, RM);
        let mut im = r.sub(&self.re, p, RM).div(&two, p, RM).sqrt(p, RM);
        if self.im.is_negative() {
            im = im.neg();
        }
        BigComplex::new(re, im, p)
    }

    /// `|self - other|`.
    pub fn distance(&self, other: &BigComplex) -> BigFloat {
        (self - other).abs()
    }

    pub fn within(&self, other: &BigComplex, tolerance: &BigFloat) -> bool {
        cmp_real(&self.distance(other), tolerance) != Ordering::Greater
    }

    /// Renders `re` and `im` with `digits` significant digits each.
    pub fn to_decimal_strings(&self, digits: usize) -> (String, String) {
        (format_real(&self.re, digits), format_real(&self.im, digits))
    }

    pub fn to_f64_lossy(&self) -> (f64, f64) {
        let (re, im) = self.to_decimal_strings(20);
        (re.parse().unwrap_or(f64::NAN), im.parse().unwrap_or(f64::NAN))
    }
}

/// Principal square root of a real number: `sqrt(x)` for `x ≥ 0`, `i·sqrt(-x)` otherwise.
pub fn sqrt_real(x: &BigFloat, p: usize) -> BigComplex {
    if x.is_negative() {
        BigComplex::new(BigFloat::from_u64(0, p), BigFloat::neg(x).sqrt(p, RM), p)
    } else {
        BigComplex::new(x.sqrt(p, RM), BigFloat::from_u64(0, p), p)
    }
}

pub fn max_real(a: BigFloat, b: BigFloat) -> BigFloat {
    if cmp_real(&a, &b) == Ordering::Less {
        b
    } else {
        a
    }
}

pub fn real_le(a: &BigFloat, b: &BigFloat) -> bool {
    cmp_real(a, b) != Ordering::Greater
}

pub fn real_cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
    cmp_real(a, b)
}

pub fn is_negative(x: &BigFloat) -> bool {
    x.sign() == Some(Sign::Neg) && !x.is_zero()
}

/// Real root of the integer polynomial `coeffs` (lowest degree first) by Newton
/// iteration from `seed`, refined to `p` bits.
pub fn newton_real_root(coeffs: &[i64], seed: f64, p: usize) -> Result<BigFloat, Error> {
    let work = p + 64;
    let eval = |x: &BigFloat| -> (BigFloat, BigFloat) {
        let mut v = BigFloat::from_u64(0, work);
        let mut d = BigFloat::from_u64(0, work);
        for &c in coeffs.iter().rev() {
            d = d.mul(x, work, RM).add(&v, work, RM);
            v = v.mul(x, work, RM).add(&BigFloat::from_i64(c, work), work, RM);
        }
        (v, d)
    };
    let threshold = BigFloat::from_u64(1, work).div(&BigFloat::from_u64(2, work).powi(p - 8, work, RM), work, RM);
    let mut x = BigFloat::from_f64(seed, work);
    for _ in 0..200 {
        let (v, d) = eval(&x);
        if d.is_zero() {
            break;
        }
        let step = v.div(&d, work, RM);
        x = x.sub(&step, work, RM);
        if real_le(&step.abs(), &threshold) {
            let mut out = x;
            out.set_precision(p, RM).map_err(|e| Error::Internal(e.to_string()))?;
            return Ok(out);
        }
    }
    Err(Error::Internal(format!("Newton iteration from {seed} did not converge")))
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec.max(rhs.prec);
        BigComplex::new(self.re.add(&rhs.re, p, RM), self.im.add(&rhs.im, p, RM), p)
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec.max(rhs.prec);
        BigComplex::new(self.re.sub(&rhs.re, p, RM), self.im.sub(&rhs.im, p, RM), p)
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec.max(rhs.prec);
        if self.im.is_zero() && rhs.im.is_zero() {
            return BigComplex::from_real(self.re.mul(&rhs.re, p, RM), p);
        }
        let re = self.re.mul(&rhs.re, p, RM).sub(&self.im.mul(&rhs.im, p, RM), p, RM);
        let im = self.re.mul(&rhs.im, p, RM).add(&self.im.mul(&rhs.re, p, RM), p, RM);
        BigComplex::new(re, im, p)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(BigFloat::neg(&self.re), BigFloat::neg(&self.im), self.prec)
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let (re, im) = self.to_decimal_strings(digits);
        if self.im.is_zero() {
            write!(f, "{re}")
        } else {
            write!(f, "{re} + {im}i")
        }
    }
}

/// Absolute tolerance for numeric comparisons.
#[derive(Clone, Debug)]
pub struct Tolerance {
    value: BigFloat,
    text: String,
}

impl Tolerance {
    /// `10^(-exponent)`.
    pub fn from_exponent(exponent: u32, prec: usize) -> Self {
        Tolerance { value: power_of_ten_neg(exponent, prec), text: format!("1e-{exponent}") }
    }

    pub fn parse(s: &str, prec: usize) -> Result<Self, Error> {
        let value = parse_real(s, prec)?;
        if is_negative(&value) {
            return Err(Error::InvalidArgument(format!("negative tolerance {s}")));
        }
        Ok(Tolerance { value, text: s.trim().to_string() })
    }

    /// Default comparison tolerance for a precision: `10^(-digits/2)`.
    pub fn for_precision(digits: u32) -> Self {
        Self::from_exponent(digits / 2, bits_for_digits(digits))
    }

    pub fn value(&self) -> &BigFloat {
        &self.value
    }

    pub fn accepts(&self, residual: &BigFloat) -> bool {
        real_le(residual, &self.value)
    }
}

impl fmt::Display for Tolerance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}
