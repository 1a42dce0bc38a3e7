//! 6j-systems: colour weights plus a sparse symbol table.
//!
//! Symbols are stored once per tetrahedral-symmetry orbit, under the
//! lexicographically smallest key of the orbit; lookups canonicalize.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use astro_float::BigFloat;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::QContext;
use crate::error::{Error, Result};
use crate::numeric::{bits_for_digits, format_real, newton_real_root, parse_real, real_cmp, BigComplex, Tolerance};
use crate::sixj::{canonical_key, face_triples, tetrahedral_images, ColourTriple, SixJ, SixKey, SqrtBranch};

/// A stored symbol value.
#[derive(Clone, Debug)]
pub struct Symbol {
    pub value: BigComplex,
    /// Whether the value changes sign when every square root flips its branch.
    pub odd_radicals: bool,
}

/// How a system was produced.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root: Option<u32>,
    pub precision: u32,
}

#[derive(Clone, Debug)]
pub struct SixJSystem {
    order: u32,
    precision: u32,
    weights: Vec<BigComplex>,
    symbols: BTreeMap<SixKey, Symbol>,
    label: String,
    generator: Generator,
}

impl SixJSystem {
    pub fn new(order: u32, weights: Vec<BigComplex>, label: &str, generator: Generator) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidOrder(order as i64));
        }
        if weights.len() != (order - 1) as usize {
            return Err(Error::InvalidArgument(format!(
                "order {order} needs {} weights, got {}",
                order - 1,
                weights.len()
            )));
        }
        Ok(SixJSystem {
            order,
            precision: generator.precision,
            weights,
            symbols: BTreeMap::new(),
            label: label.to_string(),
            generator,
        })
    }

    /// The order-2 system: one colour, weight 1, `⟨000000⟩ = 1`.
    pub fn trivial(precision: u32) -> Self {
        let bits = bits_for_digits(precision);
        let generator = Generator { kind: "trivial".into(), r: None, m: None, root: None, precision };
        let mut sys = SixJSystem::new(2, vec![BigComplex::one(bits)], "trivial", generator).expect("order 2");
        sys.insert([0; 6], BigComplex::one(bits), false).expect("key in range");
        sys
    }

    /// Sets the symbol of `key` (and of its whole orbit). Zero values are dropped.
    pub fn insert(&mut self, key: SixKey, value: BigComplex, odd_radicals: bool) -> Result<()> {
        let max = self.order - 2;
        if let Some(&c) = key.iter().find(|&&c| c > max) {
            return Err(Error::ColourOutOfRange { colour: c, max });
        }
        let key = canonical_key(&key);
        if value.is_zero() {
            self.symbols.remove(&key);
        } else {
            self.symbols.insert(key, Symbol { value, odd_radicals });
        }
        Ok(())
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Number of colours, `order - 1`.
    pub fn colour_count(&self) -> u32 {
        self.order - 1
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn bits(&self) -> usize {
        bits_for_digits(self.precision)
    }

    pub fn weights(&self) -> &[BigComplex] {
        &self.weights
    }

    pub fn weight(&self, i: u32) -> &BigComplex {
        &self.weights[i as usize]
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn generator(&self) -> &Generator {
        &self.generator
    }

    /// The symbol of `key`, `None` when it is zero.
    pub fn symbol(&self, key: &SixKey) -> Option<&BigComplex> {
        self.symbols.get(&canonical_key(key)).map(|s| &s.value)
    }

    /// Stored orbit representatives in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&SixKey, &Symbol)> {
        self.symbols.iter()
    }

    /// Number of nonzero orbits.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Triples that occur as a face of some nonzero symbol, sorted.
    pub fn face_set(&self) -> BTreeSet<ColourTriple> {
        self.symbols.keys().flat_map(|k| face_triples(k).map(|t| t.sorted())).collect()
    }

    /// The same system with every square root taken on the other branch.
    pub fn with_sqrt_branch(&self, branch: SqrtBranch) -> SixJSystem {
        let mut out = self.clone();
        if branch == SqrtBranch::Flipped {
            for s in out.symbols.values_mut() {
                if s.odd_radicals {
                    s.value = -&s.value;
                }
            }
            out.label = format!("{} (flipped roots)", self.label);
        }
        out
    }

    /// Multiplies each symbol by `-1` once per face triple listed in `flips`.
    pub fn apply_face_gauge(&self, flips: &BTreeSet<ColourTriple>) -> SixJSystem {
        let mut out = self.clone();
        for (key, s) in out.symbols.iter_mut() {
            let count = face_triples(key).iter().filter(|t| flips.contains(&t.sorted())).count();
            if count % 2 == 1 {
                s.value = -&s.value;
            }
        }
        out
    }

    /// Lookup table over the full orbit closure.
    pub fn table(&self) -> SymbolTable {
        SymbolTable::new(self)
    }
}

const DENSE_LIMIT: usize = 1 << 21;

/// Symbol lookup without canonicalization: dense when the colour set is small.
#[derive(Clone, Debug)]
pub enum SymbolTable {
    Dense { colours: usize, values: Vec<Option<BigComplex>> },
    Sparse(HashMap<SixKey, BigComplex>),
}

impl SymbolTable {
    fn new(sys: &SixJSystem) -> Self {
        let n = sys.colour_count() as usize;
        let size = n.pow(6);
        if size <= DENSE_LIMIT {
            let mut values = vec![None; size];
            for (key, s) in &sys.symbols {
                for img in tetrahedral_images(key) {
                    values[dense_index(n, &img)] = Some(s.value.clone());
                }
            }
            SymbolTable::Dense { colours: n, values }
        } else {
            let mut map = HashMap::new();
            for (key, s) in &sys.symbols {
                for img in tetrahedral_images(key) {
                    map.insert(img, s.value.clone());
                }
            }
            SymbolTable::Sparse(map)
        }
    }

    pub fn get(&self, key: &SixKey) -> Option<&BigComplex> {
        match self {
            SymbolTable::Dense { colours, values } => values[dense_index(*colours, key)].as_ref(),
            SymbolTable::Sparse(map) => map.get(key),
        }
    }
}

fn dense_index(n: usize, key: &SixKey) -> usize {
    key.iter().fold(0, |acc, &c| acc * n + c as usize)
}

/// The Turaev–Viro system of order `r` for the root selected by `ctx`.
pub fn build_tv(ctx: &QContext) -> SixJSystem {
    let r = ctx.r();
    let eval = SixJ::new(ctx);
    let weights = (0..r - 1).map(|i| ctx.embed(&eval.weight(i))).collect();
    let generator =
        Generator { kind: "tv".into(), r: Some(r), m: Some(ctx.m()), root: None, precision: ctx.precision() };
    let label = format!("TV_{r} (m = {})", ctx.m());
    let mut sys = SixJSystem::new(r, weights, &label, generator).expect("valid order");

    let n = r - 1;
    let mut keys = Vec::new();
    let mut key = [0u32; 6];
    for idx in 0..(n as usize).pow(6) {
        let mut rest = idx;
        for slot in key.iter_mut().rev() {
            *slot = (rest % n as usize) as u32;
            rest /= n as usize;
        }
        if eval.inadmissible_face(&key).is_none() && canonical_key(&key) == key {
            keys.push(key);
        }
    }
    let values: Vec<(SixKey, Option<(BigComplex, bool)>)> = keys
        .par_iter()
        .map(|k| {
            let v = eval.sixj(k).expect("admissible key in range");
            if v.is_zero() {
                return (*k, None);
            }
            let odd = v.radical_indices().len() % 2 == 1;
            let x = v.embed(ctx, SqrtBranch::Principal).expect("real radicands");
            (*k, Some((x, odd)))
        })
        .collect();
    for (k, v) in values {
        if let Some((x, odd)) = v {
            sys.symbols.insert(k, Symbol { value: x, odd_radicals: odd });
        }
    }
    sys
}

/// The system of order `(r+1)/2` on even colours: `w'_i = w_{2i}`,
/// `⟨i j k|l m n⟩' = ⟨2i 2j 2k|2l 2m 2n⟩`.
pub fn homologically_trivial(sys: &SixJSystem) -> Result<SixJSystem> {
    let r = sys.order;
    if r.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("homologically trivial part needs odd order, got {r}")));
    }
    let order = r.div_ceil(2);
    let weights = (0..order - 1).map(|i| sys.weight(2 * i).clone()).collect();
    let generator = Generator { kind: "th".into(), ..sys.generator.clone() };
    let label = format!("TH_{order} from {}", sys.label);
    let mut out = SixJSystem::new(order, weights, &label, generator)?;
    for (key, s) in &sys.symbols {
        if key.iter().all(|c| c % 2 == 0) {
            let half = key.map(|c| c / 2);
            out.symbols.insert(canonical_key(&half), s.clone());
        }
    }
    Ok(out)
}

/// Roots of `x² - x - 1`, positive first.
pub fn epsilon_roots(precision: u32) -> Result<[BigFloat; 2]> {
    let bits = bits_for_digits(precision);
    Ok([newton_real_root(&[-1, -1, 1], 1.618, bits)?, newton_real_root(&[-1, -1, 1], -0.618, bits)?])
}

/// Roots `γ₁ > γ₂ > γ₃` of `x³ - 2x² - x + 1`.
pub fn gamma_roots(precision: u32) -> Result<[BigFloat; 3]> {
    let bits = bits_for_digits(precision);
    let t = [1, -1, -2, 1];
    Ok([
        newton_real_root(&t, 2.2469796, bits)?,
        newton_real_root(&t, 0.5549581, bits)?,
        newton_real_root(&t, -0.8019377, bits)?,
    ])
}

/// Which root of `x² - x - 1` the ε-system uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EpsilonBranch {
    #[default]
    Positive,
    Negative,
}

/// The ε-invariant system of order 3 (`ε` either root of `x² - x - 1`).
pub fn epsilon_system(branch: EpsilonBranch, precision: u32) -> Result<SixJSystem> {
    let roots = epsilon_roots(precision)?;
    let (eps, root) = match branch {
        EpsilonBranch::Positive => (roots[0].clone(), 1),
        EpsilonBranch::Negative => (roots[1].clone(), 2),
    };
    epsilon_system_at(&BigComplex::from_real(eps, bits_for_digits(precision)), Some(root), precision)
}

/// The ε-system for an explicit value of `ε`.
pub fn epsilon_system_at(eps: &BigComplex, root: Option<u32>, precision: u32) -> Result<SixJSystem> {
    let bits = bits_for_digits(precision);
    let one = BigComplex::one(bits);
    let inv = eps.inv()?;
    let generator = Generator { kind: "epsilon".into(), r: None, m: None, root, precision };
    let mut sys = SixJSystem::new(3, vec![one.clone(), eps.clone()], "epsilon", generator)?;
    sys.insert([0, 0, 0, 0, 0, 0], one, false)?;
    sys.insert([0, 0, 0, 1, 1, 1], eps.sqrt().inv()?, true)?;
    sys.insert([0, 1, 1, 0, 1, 1], inv.clone(), false)?;
    sys.insert([0, 1, 1, 1, 1, 1], inv.clone(), false)?;
    sys.insert([1, 1, 1, 1, 1, 1], -&(&inv * &inv), false)?;
    Ok(sys)
}

/// The γ-invariant system of order 4 for `γ = γ_k`, `k ∈ {1, 2, 3}`.
pub fn gamma_system(root_index: u32, precision: u32) -> Result<SixJSystem> {
    if !(1..=3).contains(&root_index) {
        return Err(Error::InvalidArgument(format!("gamma root index {root_index} not in 1..=3")));
    }
    let roots = gamma_roots(precision)?;
    let g = BigComplex::from_real(roots[root_index as usize - 1].clone(), bits_for_digits(precision));
    gamma_system_at(&g, Some(root_index), precision)
}

/// The γ-system for an explicit value of `γ`.
pub fn gamma_system_at(g: &BigComplex, root: Option<u32>, precision: u32) -> Result<SixJSystem> {
    let bits = bits_for_digits(precision);
    let one = BigComplex::one(bits);
    let gm1 = g - &one;
    let sg = g.sqrt();
    let s1 = gm1.sqrt();
    let ig = g.inv()?;
    let ig2 = &ig * &ig;
    let gm1_over_g = &gm1 * &ig;
    let generator = Generator { kind: "gamma".into(), r: None, m: None, root, precision };
    let label = match root {
        Some(k) => format!("gamma_{k}"),
        None => "gamma".to_string(),
    };
    let weights = vec![one.clone(), g.clone(), g.div(&gm1)?];
    let mut sys = SixJSystem::new(4, weights, &label, generator)?;
    let entries: [(SixKey, BigComplex, bool); 17] = [
        ([0, 0, 0, 0, 0, 0], one.clone(), false),
        ([0, 0, 0, 1, 1, 1], -&sg.inv()?, true),
        ([0, 0, 0, 2, 2, 2], s1.div(&sg)?, false),
        ([0, 1, 1, 0, 1, 1], ig.clone(), false),
        ([0, 1, 1, 1, 1, 1], ig.clone(), false),
        ([0, 1, 1, 1, 2, 2], -&(&s1 * &ig), true),
        ([0, 1, 1, 2, 1, 1], ig.clone(), false),
        ([0, 1, 1, 2, 2, 2], -&(&s1 * &ig), true),
        ([0, 2, 2, 0, 2, 2], gm1_over_g.clone(), false),
        ([0, 2, 2, 1, 2, 2], gm1_over_g.clone(), false),
        ([1, 1, 1, 1, 1, 1], &ig2 * &ig, false),
        ([1, 1, 1, 1, 1, 2], -&(&ig * &gm1.inv()?), false),
        ([1, 1, 1, 1, 2, 2], -&(&ig * &sg.inv()?), true),
        ([1, 1, 1, 2, 2, 2], gm1.div(&(g * &sg))?, true),
        ([1, 1, 2, 1, 1, 2], ig2.clone(), false),
        ([1, 1, 2, 1, 2, 2], ig.clone(), false),
        ([1, 2, 2, 1, 2, 2], -&(&gm1 * &ig2), false),
    ];
    for (key, value, odd) in entries {
        sys.insert(key, value, odd)?;
    }
    Ok(sys)
}

/// Index pattern of the right-hand side of the defining relation
/// `⟨i j k|l m n⟩·⟨i j k|l' m' n'⟩ = Σ_z w_z · A · B · C`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RelationPattern {
    /// `A = ⟨i m n|z n' m'⟩`, `B = ⟨j l n|z n' m'⟩`, `C = ⟨k l m|z m' l'⟩`.
    Printed,
    /// `A = ⟨i m n|z n' m'⟩`, `B = ⟨j l n|z n' l'⟩`, `C = ⟨k l m|z m' l'⟩`.
    #[default]
    Book,
}

impl RelationPattern {
    fn factors(self, t: &[u32; 9], z: u32) -> [SixKey; 3] {
        let [i, j, k, l, m, n, l2, m2, n2] = *t;
        let b = match self {
            RelationPattern::Printed => [j, l, n, z, n2, m2],
            RelationPattern::Book => [j, l, n, z, n2, l2],
        };
        [[i, m, n, z, n2, m2], b, [k, l, m, z, m2, l2]]
    }
}

impl fmt::Display for RelationPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationPattern::Printed => "printed",
            RelationPattern::Book => "book",
        })
    }
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub total: u64,
    pub max_residual: BigFloat,
    pub worst_tuple: [u32; 9],
    /// Tuples whose residual exceeds the tolerance, sorted.
    pub failures: Vec<[u32; 9]>,
    pub tolerance: Tolerance,
    pub pattern: RelationPattern,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the defining relation on every 9-tuple of colours.
pub fn verify_relation(sys: &SixJSystem, tolerance: &Tolerance, pattern: RelationPattern) -> RelationReport {
    let n = sys.colour_count();
    let bits = sys.bits();
    let table = sys.table();
    let lookup = |k: &SixKey| table.get(k);

    let per_prefix: Vec<(BigFloat, [u32; 9], Vec<[u32; 9]>)> = (0..n * n * n)
        .into_par_iter()
        .map(|prefix| {
            let (i, j, k) = (prefix / (n * n), (prefix / n) % n, prefix % n);
            let mut worst = BigFloat::from_u64(0, bits);
            let mut worst_tuple = [i, j, k, 0, 0, 0, 0, 0, 0];
            let mut failures = Vec::new();
            for rest in 0..n.pow(6) {
                let mut t = [i, j, k, 0, 0, 0, 0, 0, 0];
                let mut x = rest;
                for slot in t[3..].iter_mut().rev() {
                    *slot = x % n;
                    x /= n;
                }
                let lhs = match (lookup(&[i, j, k, t[3], t[4], t[5]]), lookup(&[i, j, k, t[6], t[7], t[8]])) {
                    (Some(a), Some(b)) => a * b,
                    _ => BigComplex::zero(bits),
                };
                let mut rhs = BigComplex::zero(bits);
                for z in 0..n {
                    let [fa, fb, fc] = pattern.factors(&t, z);
                    if let (Some(a), Some(b), Some(c)) = (lookup(&fa), lookup(&fb), lookup(&fc)) {
                        let term = &(&(a * b) * c) * sys.weight(z);
                        rhs = &rhs + &term;
                    }
                }
                let residual = lhs.distance(&rhs);
                if !tolerance.accepts(&residual) {
                    failures.push(t);
                }
                if real_cmp(&residual, &worst) == std::cmp::Ordering::Greater {
                    worst = residual;
                    worst_tuple = t;
                }
            }
            (worst, worst_tuple, failures)
        })
        .collect();

    let mut max_residual = BigFloat::from_u64(0, bits);
    let mut worst_tuple = [0; 9];
    let mut failures = Vec::new();
    for (w, t, f) in per_prefix {
        if real_cmp(&w, &max_residual) == std::cmp::Ordering::Greater {
            max_residual = w;
            worst_tuple = t;
        }
        failures.extend(f);
    }
    failures.sort_unstable();
    RelationReport {
        total: (n as u64).pow(9),
        max_residual,
        worst_tuple,
        failures,
        tolerance: tolerance.clone(),
        pattern,
    }
}

/// How symbol signs may be reconciled before comparing two systems.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Alignment {
    /// Entrywise comparison as stored.
    #[default]
    Strict,
    /// Allow a sign per face triple (a change of square-root branches) before comparing.
    SqrtSigns,
}

#[derive(Clone, Debug)]
pub enum Difference {
    Weight {
        index: u32,
        left: String,
        right: String,
    },
    Symbol {
        key: SixKey,
        left: String,
        right: String,
    },
    /// Symbols agree up to sign, but no choice of face signs accounts for the signs.
    Gauge {
        key: SixKey,
    },
}

impl fmt::Display for Difference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Difference::Weight { index, left, right } => write!(f, "weight w_{index}: {left} vs {right}"),
            Difference::Symbol { key, left, right } => write!(f, "symbol {key:?}: {left} vs {right}"),
            Difference::Gauge { key } => write!(f, "no consistent face signs (conflict at symbol {key:?})"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub equal: bool,
    pub first_difference: Option<Difference>,
    /// Entries that differ before any sign alignment.
    pub strict_mismatches: usize,
    /// Face triples whose sign was flipped on the right-hand system.
    pub face_flips: BTreeSet<ColourTriple>,
}

fn short(x: Option<&BigComplex>) -> String {
    match x {
        Some(v) => {
            let (re, im) = v.to_decimal_strings(20);
            format!("{re} + {im}i")
        }
        None => "0".into(),
    }
}

fn strict_diff(a: &SixJSystem, b: &SixJSystem, tol: &BigFloat) -> (usize, Option<Difference>) {
    let bits = a.bits().max(b.bits());
    let zero = BigComplex::zero(bits);
    let mut count = 0;
    let mut first = None;
    for i in 0..a.colour_count() {
        if !a.weight(i).within(b.weight(i), tol) {
            count += 1;
            first.get_or_insert(Difference::Weight {
                index: i,
                left: short(Some(a.weight(i))),
                right: short(Some(b.weight(i))),
            });
        }
    }
    let keys: BTreeSet<SixKey> = a.symbols.keys().chain(b.symbols.keys()).copied().collect();
    for key in keys {
        let (x, y) = (a.symbol(&key), b.symbol(&key));
        if !x.unwrap_or(&zero).within(y.unwrap_or(&zero), tol) {
            count += 1;
            first.get_or_insert(Difference::Symbol { key, left: short(x), right: short(y) });
        }
    }
    (count, first)
}

/// Entrywise comparison of weights and symbols within `tolerance`.
pub fn systems_equal(
    a: &SixJSystem,
    b: &SixJSystem,
    tolerance: &Tolerance,
    alignment: Alignment,
) -> Result<Comparison> {
    if a.order != b.order {
        return Err(Error::SystemOrderMismatch(a.order, b.order));
    }
    let tol = tolerance.value();
    let (strict_mismatches, first) = strict_diff(a, b, tol);
    if strict_mismatches == 0 || alignment == Alignment::Strict {
        return Ok(Comparison {
            equal: strict_mismatches == 0,
            first_difference: first,
            strict_mismatches,
            face_flips: BTreeSet::new(),
        });
    }

    let faces: Vec<ColourTriple> = a.face_set().union(&b.face_set()).copied().collect();
    let index: HashMap<ColourTriple, usize> = faces.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut rows = Vec::new();
    let keys: BTreeSet<SixKey> = a.symbols.keys().chain(b.symbols.keys()).copied().collect();
    for key in &keys {
        let (Some(x), Some(y)) = (a.symbol(key), b.symbol(key)) else {
            // one side zero: no sign can fix it
            return Ok(Comparison {
                equal: false,
                first_difference: first,
                strict_mismatches,
                face_flips: BTreeSet::new(),
            });
        };
        let rhs = if x.within(y, tol) {
            false
        } else if x.within(&-y, tol) {
            true
        } else {
            return Ok(Comparison {
                equal: false,
                first_difference: Some(Difference::Symbol { key: *key, left: short(Some(x)), right: short(Some(y)) }),
                strict_mismatches,
                face_flips: BTreeSet::new(),
            });
        };
        let mut row = vec![false; faces.len()];
        for t in face_triples(key) {
            let i = index[&t.sorted()];
            row[i] = !row[i];
        }
        rows.push((row, rhs, *key));
    }
    let solution = match solve_gf2(rows, faces.len()) {
        Ok(x) => x,
        Err(key) => {
            return Ok(Comparison {
                equal: false,
                first_difference: Some(Difference::Gauge { key }),
                strict_mismatches,
                face_flips: BTreeSet::new(),
            })
        }
    };
    let flips: BTreeSet<ColourTriple> = faces.iter().zip(&solution).filter(|(_, &s)| s).map(|(t, _)| *t).collect();
    let gauged = b.apply_face_gauge(&flips);
    let (count, diff) = strict_diff(a, &gauged, tol);
    Ok(Comparison { equal: count == 0, first_difference: diff, strict_mismatches, face_flips: flips })
}

/// Solves `rows · x = rhs` over GF(2); on inconsistency returns the key of the offending row.
fn solve_gf2(mut rows: Vec<(Vec<bool>, bool, SixKey)>, vars: usize) -> std::result::Result<Vec<bool>, SixKey> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..vars {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].0[c]) else { continue };
        rows.swap(r, p);
        let (pivot_row, pivot_rhs) = (rows[r].0.clone(), rows[r].1);
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.0[c] {
                for (x, y) in row.0.iter_mut().zip(&pivot_row) {
                    *x ^= *y;
                }
                row.1 ^= pivot_rhs;
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    if let Some(bad) = rows[r..].iter().find(|row| row.1) {
        return Err(bad.2);
    }
    let mut x = vec![false; vars];
    for (row, c) in pivots {
        x[c] = rows[row].1;
    }
    Ok(x)
}

#[derive(Serialize, Deserialize)]
struct ExportDoc {
    order: u32,
    weights: Vec<String>,
    symbols: Vec<ExportSymbol>,
    label: String,
    generator: Generator,
}

#[derive(Serialize, Deserialize)]
struct ExportSymbol {
    key: SixKey,
    re: String,
    im: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    odd_radicals: bool,
}

/// Serializes a system as JSON with sorted keys and `precision` significant digits.
pub fn export_system(sys: &SixJSystem) -> Result<String> {
    let digits = sys.precision as usize;
    let tol = Tolerance::for_precision(sys.precision);
    let mut weights = Vec::new();
    for (i, w) in sys.weights.iter().enumerate() {
        if !tol.accepts(&w.im().abs()) {
            return Err(Error::InvalidArgument(format!("weight w_{i} is not real")));
        }
        weights.push(format_real(w.re(), digits));
    }
    let symbols = sys
        .symbols
        .iter()
        .map(|(key, s)| {
            let (re, im) = s.value.to_decimal_strings(digits);
            ExportSymbol { key: *key, re, im, odd_radicals: s.odd_radicals }
        })
        .collect();
    let doc =
        ExportDoc { order: sys.order, weights, symbols, label: sys.label.clone(), generator: sys.generator.clone() };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn import_system(text: &str) -> Result<SixJSystem> {
    let doc: ExportDoc = serde_json::from_str(text)?;
    let bits = bits_for_digits(doc.generator.precision);
    let weights = doc
        .weights
        .iter()
        .map(|w| Ok(BigComplex::from_real(parse_real(w, bits)?, bits)))
        .collect::<Result<Vec<_>>>()?;
    let mut sys = SixJSystem::new(doc.order, weights, &doc.label, doc.generator)?;
    for s in doc.symbols {
        let value = BigComplex::new(parse_real(&s.re, bits)?, parse_real(&s.im, bits)?, bits);
        sys.insert(s.key, value, s.odd_radicals)?;
    }
    Ok(sys)
}
