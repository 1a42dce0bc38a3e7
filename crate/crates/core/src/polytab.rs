//! Integer polynomials whose roots are the distinct values of `[3]_r`.

use std::fmt;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{quantum_integer_in, CycNum, CyclotomicField, QContext};
use crate::error::{Error, Result};
use crate::numeric::{bits_for_digits, real_from_int, BigComplex, Tolerance, RM};
use crate::systems::gamma_roots;

/// Polynomial with integer coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree; the zero polynomial has degree `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn eval_cyc(&self, x: &CycNum) -> CycNum {
        let field = x.field();
        self.coeffs.iter().rev().fold(CycNum::zero(field), |acc, c| {
            let c = i64::try_from(c).expect("small coefficient");
            &(&acc * x) + &CycNum::from_int(field, c)
        })
    }

    pub fn eval_real(&self, x: &BigFloat, p: usize) -> BigFloat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigFloat::from_u64(0, p), |acc, c| acc.mul(x, p, RM).add(&real_from_int(c, p), p, RM))
    }

    fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// `x^d · p(1 - 1/x)` for `d = deg p`.
    pub fn tau_transform(&self) -> IntPoly {
        let Some(d) = self.degree() else { return self.clone() };
        let x_minus_1 = IntPoly::from_i64s(&[-1, 1]);
        let mut acc = IntPoly::new(Vec::new());
        let mut power = IntPoly::from_i64s(&[1]);
        for (k, c) in self.coeffs.iter().enumerate() {
            // c · (x-1)^k · x^(d-k)
            let mut term: Vec<BigInt> = vec![BigInt::zero(); d - k];
            term.extend(power.coeffs.iter().map(|p| p * c));
            acc = acc.add(&IntPoly::new(term));
            power = power.mul(&x_minus_1);
        }
        acc
    }

    fn add(&self, other: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    fn scale(&self, k: i64) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            if !a.is_one() || k == 0 {
                write!(f, "{a}")?;
            }
            match k {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

/// The monic polynomial whose roots are the distinct values of `[3]_r`
/// over all `q = ζ_{2r}^m ≠ ±1`.
pub fn th_polynomial(r: u32) -> Result<IntPoly> {
    if r < 5 || r.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("th_polynomial needs odd r >= 5, got {r}")));
    }
    let field = CyclotomicField::new(2 * r);
    let mut values: Vec<CycNum> = Vec::new();
    for m in (1..2 * r as i64).filter(|&m| m != r as i64) {
        let v = quantum_integer_in(&field, m, 3);
        if !values.contains(&v) {
            values.push(v);
        }
    }
    // Π (x - v) with coefficients in the field, lowest degree first
    let mut prod = vec![CycNum::one(&field)];
    for v in &values {
        let mut next = vec![CycNum::zero(&field); prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            next[k + 1] = &next[k + 1] + c;
            next[k] = &next[k] - &(c * v);
        }
        prod = next;
    }
    let coeffs = prod
        .iter()
        .enumerate()
        .map(|(index, c)| c.is_rational_integer().ok_or(Error::NonIntegralCoefficient { index }))
        .collect::<Result<Vec<_>>>()?;
    Ok(IntPoly::new(coeffs))
}

/// Reference rows `(order, polynomial)` for orders 3 to 11 (`r = 2·order - 1`).
pub fn reference_table() -> Vec<(u32, IntPoly)> {
    let rows: [(u32, &[i64]); 9] = [
        (3, &[-1, -1, 1]),
        (4, &[1, -1, -2, 1]),
        (5, &[0, 3, 0, -3, 1]),
        (6, &[-1, -2, 5, 2, -4, 1]),
        (7, &[1, -2, -7, 6, 5, -5, 1]),
        (8, &[0, 5, 0, -15, 5, 9, -6, 1]),
        (9, &[-1, -3, 12, 9, -25, 1, 14, -7, 1]),
        (10, &[1, -3, -15, 18, 29, -35, -7, 20, -8, 1]),
        (11, &[0, 7, 0, -42, 14, 63, -42, -20, 27, -9, 1]),
    ];
    rows.iter().map(|(o, c)| (*o, IntPoly::from_i64s(c))).collect()
}

/// `T(x) = x³ - 2x² - x + 1`.
pub fn t_polynomial() -> IntPoly {
    IntPoly::from_i64s(&[1, -1, -2, 1])
}

/// Evaluates `T([3]_7)` exactly for the selector `m`; the result must be zero.
pub fn verify_t_root(m: i64) -> Result<CycNum> {
    let ctx = QContext::new(7, m, crate::numeric::DEFAULT_PRECISION)?;
    let value = t_polynomial().eval_cyc(&ctx.qint(3));
    if !value.is_zero() {
        return Err(Error::Internal(format!("T([3]) = {value} for m = {m}")));
    }
    Ok(value)
}

/// Checks `x^d · p(1 - 1/x) = ±p(x)`; returns the sign when it holds.
pub fn verify_tau_identity(p: &IntPoly) -> Result<Option<i64>> {
    if p.coeff(0).is_zero() {
        return Err(Error::InvalidArgument("tau identity needs p(0) != 0".into()));
    }
    let t = p.tau_transform();
    Ok([1, -1].into_iter().find(|&s| t == p.scale(s)))
}

/// `(m, k)`: the selector `m` gives `[3]_7 = γ_k`.
pub fn root_assignment(precision: u32) -> Result<Vec<(u32, u32)>> {
    let roots = gamma_roots(precision)?;
    let tol = Tolerance::for_precision(precision);
    let bits = bits_for_digits(precision);
    let mut out = Vec::new();
    for m in QContext::valid_selectors(7) {
        let ctx = QContext::new(7, m as i64, precision)?;
        let v = ctx.embed(&ctx.qint(3));
        let k = roots
            .iter()
            .position(|g| v.within(&BigComplex::from_real(g.clone(), bits), tol.value()))
            .ok_or_else(|| Error::NoRootMatch { m: m as i64, value: v.to_string() })?;
        out.push((m, k as u32 + 1));
    }
    Ok(out)
}
