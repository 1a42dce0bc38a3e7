//! Quantum 6j-symbols of the Turaev–Viro invariant of order `r`.
//!
//! A symbol `⟨i j k | l m n⟩` is attached to a tetrahedron whose faces carry the
//! triples `(i,j,k)`, `(k,l,m)`, `(m,n,i)` and `(j,l,n)`; the pairs `i–l`, `j–m`,
//! `k–n` are opposite edges. Values are kept exact: a fourth root of unity, a
//! product of square roots of distinct quantum integers, and a cyclotomic factor.
//!
//! The radical part is canonical. Every quantum integer exponent is collected,
//! `[r-n]` is folded onto `[n]` (they differ by the sign `-q^r`), even powers move
//! into the factor, and what remains is `√[n₁]·√[n₂]·…` with distinct `nᵢ ≤ r/2`.
//! Each `√[n]` is the principal root of the real number `[n]`. Since every face
//! contributes its `Δ` to exactly two tetrahedra, this choice is a per-face sign
//! convention and does not affect state sums.

use std::fmt;

use crate::cyclotomic::{CycNum, QContext};
use crate::error::{Error, Result};
use crate::numeric::{sqrt_real, BigComplex, Tolerance};

pub type Colour = u32;

/// A six-tuple `(i, j, k, l, m, n)` of colours.
pub type SixKey = [Colour; 6];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColourTriple {
    pub x: Colour,
    pub y: Colour,
    pub z: Colour,
}

impl ColourTriple {
    pub fn new(x: Colour, y: Colour, z: Colour) -> Self {
        ColourTriple { x, y, z }
    }

    /// The same triple with components in ascending order.
    pub fn sorted(self) -> Self {
        let mut v = [self.x, self.y, self.z];
        v.sort_unstable();
        ColourTriple::new(v[0], v[1], v[2])
    }
}

impl fmt::Display for ColourTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Admissibility for order `r` without range checks: triangle inequalities,
/// even sum and `x + y + z ≤ 2r - 4`.
pub fn is_admissible(r: u32, x: Colour, y: Colour, z: Colour) -> bool {
    let s = x + y + z;
    x + y >= z && y + z >= x && z + x >= y && s.is_multiple_of(2) && s + 4 <= 2 * r
}

fn check_colour(r: u32, c: Colour) -> Result<()> {
    if c + 2 > r {
        return Err(Error::ColourOutOfRange { colour: c, max: r - 2 });
    }
    Ok(())
}

pub fn admissible(ctx: &QContext, t: ColourTriple) -> Result<bool> {
    for c in [t.x, t.y, t.z] {
        check_colour(ctx.r(), c)?;
    }
    Ok(is_admissible(ctx.r(), t.x, t.y, t.z))
}

/// The four face triples of a symbol, in the order `(i,j,k)`, `(k,l,m)`, `(m,n,i)`, `(j,l,n)`.
pub fn face_triples(key: &SixKey) -> [ColourTriple; 4] {
    let [i, j, k, l, m, n] = *key;
    [ColourTriple::new(i, j, k), ColourTriple::new(k, l, m), ColourTriple::new(m, n, i), ColourTriple::new(j, l, n)]
}

/// All 24 keys related to `key` by the symmetries of the tetrahedron: any
/// permutation of the columns `(i,l)`, `(j,m)`, `(k,n)`, combined with swapping
/// upper and lower entries in an even number of columns.
pub fn tetrahedral_images(key: &SixKey) -> [SixKey; 24] {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    const FLIPS: [[bool; 3]; 4] =
        [[false, false, false], [true, true, false], [true, false, true], [false, true, true]];
    let cols = [(key[0], key[3]), (key[1], key[4]), (key[2], key[5])];
    let mut out = [[0; 6]; 24];
    let mut idx = 0;
    for p in PERMS {
        for f in FLIPS {
            let mut img = [0; 6];
            for c in 0..3 {
                let (a, b) = cols[p[c]];
                let (top, bottom) = if f[c] { (b, a) } else { (a, b) };
                img[c] = top;
                img[c + 3] = bottom;
            }
            out[idx] = img;
            idx += 1;
        }
    }
    out
}

/// Lexicographically smallest key in the tetrahedral orbit of `key`.
pub fn canonical_key(key: &SixKey) -> SixKey {
    *tetrahedral_images(key).iter().min().expect("nonempty orbit")
}

/// A fourth root of unity, `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_quarter_turns(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn quarter_turns(self) -> u8 {
        self.0
    }

    /// `phase²`, which is `±1`.
    pub fn squared_sign(self) -> i64 {
        if self.0.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_real(self) -> bool {
        self.0.is_multiple_of(2)
    }

    pub fn embed(self, prec: usize) -> BigComplex {
        match self.0 {
            0 => BigComplex::one(prec),
            1 => BigComplex::i(prec),
            2 => BigComplex::from_i64(-1, prec),
            _ => -&BigComplex::i(prec),
        }
    }
}

impl std::ops::Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["+1", "+i", "-1", "-i"][self.0 as usize])
    }
}

/// Which square root is taken for each `√[n]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SqrtBranch {
    /// The principal root of the real embedding.
    #[default]
    Principal,
    /// The negative of the principal root, for every radical at once.
    Flipped,
}

/// `phase · √[n₁]·…·√[n_k] · factor`.
#[derive(Clone, Debug)]
pub struct RadicalValue {
    phase: Phase,
    /// `(n, [n])` for each square-rooted quantum integer, `n` strictly increasing.
    radicals: Vec<(u32, CycNum)>,
    factor: CycNum,
}

impl RadicalValue {
    pub fn zero(ctx: &QContext) -> Self {
        RadicalValue { phase: Phase::ONE, radicals: Vec::new(), factor: ctx.zero() }
    }

    pub fn one(ctx: &QContext) -> Self {
        RadicalValue { phase: Phase::ONE, radicals: Vec::new(), factor: ctx.one() }
    }

    pub fn from_factor(factor: CycNum) -> Self {
        RadicalValue { phase: Phase::ONE, radicals: Vec::new(), factor }.canonical()
    }

    fn canonical(self) -> Self {
        if self.factor.is_zero() {
            let zero = self.factor;
            RadicalValue { phase: Phase::ONE, radicals: Vec::new(), factor: zero }
        } else {
            self
        }
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn factor(&self) -> &CycNum {
        &self.factor
    }

    /// Indices `n` whose square roots `√[n]` appear in the value.
    pub fn radical_indices(&self) -> Vec<u32> {
        self.radicals.iter().map(|(n, _)| *n).collect()
    }

    /// The product under the square root; `1` when there is none.
    pub fn radicand(&self) -> CycNum {
        self.radicals.iter().fold(CycNum::one(self.factor.field()), |acc, (_, v)| &acc * v)
    }

    pub fn is_zero(&self) -> bool {
        self.factor.is_zero()
    }

    /// `phase² · radicand · factor²`, the exact square of the value.
    pub fn squared_exact(&self) -> CycNum {
        let f2 = &self.factor * &self.factor;
        (&f2 * &self.radicand()).scale_int(self.phase.squared_sign())
    }

    /// Product of two radical values; shared radicals are absorbed into the factor.
    pub fn mul(&self, other: &RadicalValue) -> RadicalValue {
        let mut factor = &self.factor * &other.factor;
        let mut radicals = Vec::new();
        let (mut a, mut b) = (self.radicals.iter().peekable(), other.radicals.iter().peekable());
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) if x.0 == y.0 => {
                    factor = &factor * &x.1;
                    a.next();
                    b.next();
                }
                (Some(x), Some(y)) if x.0 < y.0 => {
                    radicals.push((*x).clone());
                    a.next();
                }
                (Some(_), Some(y)) => {
                    radicals.push((*y).clone());
                    b.next();
                }
                (Some(x), None) => {
                    radicals.push((*x).clone());
                    a.next();
                }
                (None, Some(y)) => {
                    radicals.push((*y).clone());
                    b.next();
                }
                (None, None) => break,
            }
        }
        RadicalValue { phase: self.phase * other.phase, radicals, factor }.canonical()
    }

    /// Numeric value under the embedding of `ctx`.
    ///
    /// Each `√[n]` is the principal square root of the real number `[n]`, which is
    /// `i·√|[n]|` when `[n] < 0`.
    pub fn embed(&self, ctx: &QContext, branch: SqrtBranch) -> Result<BigComplex> {
        let bits = ctx.bits();
        if self.is_zero() {
            return Ok(BigComplex::zero(bits));
        }
        let tol = Tolerance::for_precision(ctx.precision());
        let mut acc = self.phase.embed(bits);
        for (n, v) in &self.radicals {
            let x = ctx.embed(v);
            if !tol.accepts(&x.im().abs()) {
                return Err(Error::Internal(format!("radicand [{n}] has a non-real embedding")));
            }
            acc = &acc * &sqrt_real(x.re(), bits);
        }
        if branch == SqrtBranch::Flipped && self.radicals.len() % 2 == 1 {
            acc = -&acc;
        }
        Ok(&acc * &ctx.embed(&self.factor))
    }
}

impl PartialEq for RadicalValue {
    fn eq(&self, other: &Self) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.phase == other.phase && self.factor == other.factor && self.radical_indices() == other.radical_indices()
    }
}

impl fmt::Display for RadicalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        write!(f, "{}", self.phase)?;
        for (n, _) in &self.radicals {
            write!(f, " · √[{n}]")?;
        }
        write!(f, " · ({})", self.factor)
    }
}

/// `radical_mul(a, b) = a · b`.
pub fn radical_mul(a: &RadicalValue, b: &RadicalValue) -> RadicalValue {
    a.mul(b)
}

pub fn radical_embed(ctx: &QContext, a: &RadicalValue) -> Result<BigComplex> {
    a.embed(ctx, SqrtBranch::Principal)
}

/// Evaluator with the quantum integers and factorials of one context cached.
#[derive(Clone, Debug)]
pub struct SixJ {
    ctx: QContext,
    qint: Vec<CycNum>,
    qint_inv: Vec<Option<CycNum>>,
    fact: Vec<CycNum>,
    fact_inv: Vec<Option<CycNum>>,
}

impl SixJ {
    pub fn new(ctx: &QContext) -> Self {
        let r = ctx.r();
        let top = 2 * r;
        let qint: Vec<CycNum> = (0..=top).map(|n| ctx.qint(n)).collect();
        let qint_inv = qint.iter().map(|v| v.inv().ok()).collect();
        let mut fact = vec![ctx.one()];
        for n in 1..=top as usize {
            let next = &fact[n - 1] * &qint[n];
            fact.push(next);
        }
        let mut fact_inv: Vec<Option<CycNum>> = vec![Some(ctx.one())];
        for n in 1..=top as usize {
            let next = match (&fact_inv[n - 1], qint[n].inv().ok()) {
                (Some(prev), Some(inv)) => Some(prev * &inv),
                _ => None,
            };
            fact_inv.push(next);
        }
        SixJ { ctx: ctx.clone(), qint, qint_inv, fact, fact_inv }
    }

    pub fn context(&self) -> &QContext {
        &self.ctx
    }

    pub fn r(&self) -> u32 {
        self.ctx.r()
    }

    pub fn qint(&self, n: u32) -> &CycNum {
        &self.qint[n as usize]
    }

    pub fn qfact(&self, n: u32) -> &CycNum {
        &self.fact[n as usize]
    }

    fn inv_fact(&self, n: i64) -> Result<&CycNum> {
        if n < 0 {
            return Err(Error::Internal(format!("negative factorial argument {n}")));
        }
        self.fact_inv
            .get(n as usize)
            .and_then(Option::as_ref)
            .ok_or_else(|| Error::Internal(format!("vanishing factorial [{n}]! in a denominator")))
    }

    pub fn admissible(&self, x: Colour, y: Colour, z: Colour) -> bool {
        is_admissible(self.r(), x, y, z)
    }

    fn check_range(&self, colours: &[Colour]) -> Result<()> {
        colours.iter().try_for_each(|&c| check_colour(self.r(), c))
    }

    /// Quantum-integer exponents of `Δ(x, y, z)²`, indexed by `n` in `0..r`.
    fn delta_exponents(&self, x: Colour, y: Colour, z: Colour, acc: &mut [i64]) {
        let (x, y, z) = (x as i64, y as i64, z as i64);
        let mut add_fact = |k: i64, sign: i64| {
            for e in &mut acc[1..=k as usize] {
                *e += sign;
            }
        };
        add_fact((x + y - z) / 2, 1);
        add_fact((y + z - x) / 2, 1);
        add_fact((z + x - y) / 2, 1);
        add_fact((x + y + z) / 2 + 1, -1);
    }

    /// Square root of `Π [n]^{e_n}` in canonical radical form.
    fn canonical_root(&self, mut exps: Vec<i64>) -> Result<RadicalValue> {
        let r = self.r() as usize;
        let sigma = self.ctx.reflection_sign();
        let mut phase = Phase::ONE;
        for n in (r / 2 + 1)..r {
            let e = std::mem::take(&mut exps[n]);
            if e == 0 {
                continue;
            }
            exps[r - n] += e;
            if sigma < 0 {
                phase = phase * Phase::from_quarter_turns(e);
            }
        }
        let mut factor = self.ctx.one();
        let mut radicals = Vec::new();
        for (n, &e) in exps.iter().enumerate().take(r / 2 + 1).skip(2) {
            let odd = e.rem_euclid(2);
            let half = (e - odd) / 2;
            if odd == 1 {
                radicals.push((n as u32, self.qint[n].clone()));
            }
            for _ in 0..half.abs() {
                let q = if half > 0 {
                    &self.qint[n]
                } else {
                    self.qint_inv[n]
                        .as_ref()
                        .ok_or_else(|| Error::Internal(format!("[{n}] vanishes under a square root")))?
                };
                factor = &factor * q;
            }
        }
        Ok(RadicalValue { phase, radicals, factor })
    }

    /// `Δ(x, y, z)` for an admissible triple.
    pub fn delta(&self, x: Colour, y: Colour, z: Colour) -> Result<RadicalValue> {
        self.check_range(&[x, y, z])?;
        if !self.admissible(x, y, z) {
            return Err(Error::Inadmissible(x, y, z));
        }
        let mut exps = vec![0i64; self.r() as usize];
        self.delta_exponents(x, y, z, &mut exps);
        self.canonical_root(exps)
    }

    /// The first inadmissible face triple of `key`, if any.
    pub fn inadmissible_face(&self, key: &SixKey) -> Option<ColourTriple> {
        face_triples(key).into_iter().find(|t| !self.admissible(t.x, t.y, t.z))
    }

    /// The alternating sum `Σ_z (-1)^z [z+1]! / (B·C)` for an admissible key.
    fn racah_sum(&self, key: &SixKey) -> Result<CycNum> {
        let [i, j, k, l, m, n] = key.map(|c| c as i64);
        let lower = [i + j + k, i + m + n, j + l + n, k + l + m];
        let upper = [i + j + l + m, i + k + l + n, j + k + m + n];
        if lower.iter().chain(&upper).any(|s| s % 2 != 0) {
            return Err(Error::Internal(format!("odd hat sum for {key:?}")));
        }
        let lower = lower.map(|s| s / 2);
        let upper = upper.map(|s| s / 2);
        let alpha = *lower.iter().max().expect("four sums");
        let beta = *upper.iter().min().expect("three sums");
        let mut sum = self.ctx.zero();
        for z in alpha..=beta {
            let top = &self.fact[(z + 1) as usize];
            if top.is_zero() {
                continue;
            }
            let mut term = top.clone();
            for s in lower {
                term = &term * self.inv_fact(z - s)?;
            }
            for s in upper {
                term = &term * self.inv_fact(s - z)?;
            }
            sum = if z % 2 == 0 { &sum + &term } else { &sum - &term };
        }
        Ok(sum)
    }

    /// `⟨i j k | l m n⟩`; zero when a face triple is inadmissible.
    pub fn sixj(&self, key: &SixKey) -> Result<RadicalValue> {
        self.check_range(key)?;
        if self.inadmissible_face(key).is_some() {
            return Ok(RadicalValue::zero(&self.ctx));
        }
        let mut exps = vec![0i64; self.r() as usize];
        for t in face_triples(key) {
            self.delta_exponents(t.x, t.y, t.z, &mut exps);
        }
        let root = self.canonical_root(exps)?;
        let sum = self.racah_sum(key)?;
        let colour_sum: i64 = key.iter().map(|&c| c as i64).sum();
        Ok(RadicalValue {
            phase: root.phase * Phase::from_quarter_turns(colour_sum),
            radicals: root.radicals,
            factor: &root.factor * &sum,
        }
        .canonical())
    }

    pub fn sixj_squared_exact(&self, key: &SixKey) -> Result<CycNum> {
        Ok(self.sixj(key)?.squared_exact())
    }

    /// Colour weight `w_i = (-1)^i [i+1]`.
    pub fn weight(&self, i: Colour) -> CycNum {
        let v = self.qint[(i + 1) as usize].clone();
        if i.is_multiple_of(2) {
            v
        } else {
            -v
        }
    }
}

pub fn delta(ctx: &QContext, i: Colour, j: Colour, k: Colour) -> Result<RadicalValue> {
    SixJ::new(ctx).delta(i, j, k)
}

pub fn sixj(ctx: &QContext, key: &SixKey) -> Result<RadicalValue> {
    SixJ::new(ctx).sixj(key)
}

pub fn sixj_squared_exact(ctx: &QContext, key: &SixKey) -> Result<CycNum> {
    SixJ::new(ctx).sixj_squared_exact(key)
}

/// Admissible triples for order `r`, each unordered triple once, sorted.
pub fn admissible_triples(r: u32) -> Vec<ColourTriple> {
    let mut out = Vec::new();
    for x in 0..r - 1 {
        for y in x..r - 1 {
            for z in y..r - 1 {
                if is_admissible(r, x, y, z) {
                    out.push(ColourTriple::new(x, y, z));
                }
            }
        }
    }
    out
}
