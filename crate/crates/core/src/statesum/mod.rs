//! State sums of 6j-systems over closed triangulations.
//!
//! For a system with weights `w` and a triangulation with `V` vertices the value is
//!
//! ```text
//! N^{-V} · Σ_colourings Π_edges w_{c(e)}^p · Π_tets ⟨c01 c02 c12 | c23 c13 c03⟩
//! ```
//!
//! with `N = Σ w_i²` (or `Σ w_i`) over the colours the filter allows, and `p ∈ {1, 2}`.

mod triangulation;

use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

pub use triangulation::{parse_triangulation, EdgeClassTable, Gluing, Perm, Triangulation, EDGES};

use crate::error::{Error, Result};
use crate::numeric::BigComplex;
use crate::systems::{SixJSystem, SymbolTable};

/// Restriction on the colours an edge may carry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ColourFilter {
    #[default]
    All,
    /// Only even colours; for odd `r` this picks out the homologically trivial part.
    Even,
}

impl ColourFilter {
    pub fn allows(self, c: u32) -> bool {
        match self {
            ColourFilter::All => true,
            ColourFilter::Even => c.is_multiple_of(2),
        }
    }
}

pub fn even_filter() -> ColourFilter {
    ColourFilter::Even
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Normalization {
    /// `N = Σ w_i²`
    #[default]
    SumOfSquares,
    /// `N = Σ w_i`
    SumOfWeights,
}

#[derive(Clone, Debug)]
pub struct StateSumOptions {
    pub normalization: Normalization,
    /// Exponent `p` of the edge weights.
    pub edge_exponent: u32,
    pub filter: ColourFilter,
    /// Maximum number of partial colourings visited.
    pub budget: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for StateSumOptions {
    fn default() -> Self {
        StateSumOptions {
            normalization: Normalization::SumOfSquares,
            edge_exponent: 1,
            filter: ColourFilter::All,
            budget: 100_000_000,
            threads: None,
        }
    }
}

/// Colour of each edge class.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Colouring {
    pub assignment: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct StateSum {
    pub value: BigComplex,
    /// The unnormalized sum.
    pub raw: BigComplex,
    pub normalizer: BigComplex,
    /// Colourings with a nonzero contribution.
    pub colourings: u64,
    pub nodes: u64,
    pub vertex_count: usize,
    pub edge_count: usize,
}

/// Precomputed enumeration order: what can be checked once a class is coloured.
struct Plan<'a> {
    colours: Vec<u32>,
    admissible: Vec<bool>,
    n: usize,
    /// Faces (as class triples) whose last class is at each position.
    faces_at: Vec<Vec<[usize; 3]>>,
    /// Tetrahedra (as class sextuples) whose last class is at each position.
    tets_at: Vec<Vec<[usize; 6]>>,
    table: Option<&'a SymbolTable>,
    edge_weights: Vec<BigComplex>,
    bits: usize,
    budget: u64,
    nodes: &'a AtomicU64,
}

impl<'a> Plan<'a> {
    fn new(
        tri: &Triangulation,
        classes: &EdgeClassTable,
        sys: &SixJSystem,
        filter: ColourFilter,
        nodes: &'a AtomicU64,
    ) -> Self {
        let n = sys.colour_count() as usize;
        let mut admissible = vec![false; n * n * n];
        for t in sys.face_set() {
            for [a, b, c] in permutations3([t.x, t.y, t.z]) {
                admissible[(a as usize * n + b as usize) * n + c as usize] = true;
            }
        }
        let e = classes.edge_count();
        let mut faces_at = vec![Vec::new(); e];
        for (t, f) in tri.faces() {
            let edges = classes.tet_edges(t);
            let triple: Vec<usize> =
                EDGES.iter().enumerate().filter(|(_, &(a, b))| a != f && b != f).map(|(i, _)| edges[i]).collect();
            let triple = [triple[0], triple[1], triple[2]];
            faces_at[*triple.iter().max().expect("three edges")].push(triple);
        }
        let mut tets_at = vec![Vec::new(); e];
        for t in 0..tri.tet_count() {
            let edges = classes.tet_edges(t);
            tets_at[*edges.iter().max().expect("six edges")].push(edges);
        }
        Plan {
            colours: (0..n as u32).filter(|&c| filter.allows(c)).collect(),
            admissible,
            n,
            faces_at,
            tets_at,
            table: None,
            edge_weights: sys.weights().to_vec(),
            bits: sys.bits(),
            budget: u64::MAX,
            nodes,
        }
    }

    /// Turns a counting plan into one that multiplies weights and symbols.
    fn weighted(mut self, table: &'a SymbolTable, edge_exponent: u32, budget: u64) -> Self {
        self.edge_weights = self.edge_weights.iter().map(|w| w.powi(edge_exponent)).collect();
        self.table = Some(table);
        self.budget = budget;
        self
    }

    fn face_ok(&self, asg: &[u32], f: &[usize; 3]) -> bool {
        let [a, b, c] = f.map(|i| asg[i] as usize);
        self.admissible[(a * self.n + b) * self.n + c]
    }
}

fn permutations3<T: Copy>(v: [T; 3]) -> [[T; 3]; 6] {
    let [a, b, c] = v;
    [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]]
}

/// Depth-first walk; `visit` receives complete colourings and their products.
struct Walker<'p, 'a, F> {
    plan: &'p Plan<'a>,
    asg: Vec<u32>,
    local_nodes: u64,
    visit: F,
}

impl<F: FnMut(&[u32], Option<&BigComplex>)> Walker<'_, '_, F> {
    fn flush(&mut self) -> Result<()> {
        let total = self.plan.nodes.fetch_add(self.local_nodes, Ordering::Relaxed) + self.local_nodes;
        self.local_nodes = 0;
        if total > self.plan.budget {
            return Err(Error::BudgetExceeded(self.plan.budget));
        }
        Ok(())
    }

    fn walk(&mut self, pos: usize, prod: Option<BigComplex>) -> Result<()> {
        self.local_nodes += 1;
        if self.local_nodes >= 4096 {
            self.flush()?;
        }
        if pos == self.asg.len() {
            (self.visit)(&self.asg, prod.as_ref());
            return Ok(());
        }
        for &c in &self.plan.colours {
            self.step(pos, c, prod.as_ref())?;
        }
        Ok(())
    }

    /// Colours class `pos` with `c` and continues if nothing is violated.
    fn step(&mut self, pos: usize, c: u32, prod: Option<&BigComplex>) -> Result<()> {
        let plan = self.plan;
        self.asg[pos] = c;
        if !plan.faces_at[pos].iter().all(|f| plan.face_ok(&self.asg, f)) {
            return Ok(());
        }
        let next = match (prod, plan.table) {
            (Some(p), Some(table)) => {
                let mut acc = p * &plan.edge_weights[c as usize];
                if acc.is_zero() {
                    return Ok(());
                }
                for tet in &plan.tets_at[pos] {
                    let key = tet.map(|i| self.asg[i]);
                    match table.get(&key) {
                        Some(v) => acc = &acc * v,
                        None => return Ok(()),
                    }
                }
                Some(acc)
            }
            _ => None,
        };
        self.walk(pos + 1, next)
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn check_orders(tri: &Triangulation, classes: &EdgeClassTable) -> Result<()> {
    if classes.edge_count() == 0 || tri.tet_count() == 0 {
        return Err(Error::Triangulation("empty triangulation".into()));
    }
    Ok(())
}

/// All colourings admissible on every face, in lexicographic order of class colours.
pub fn enumerate_colourings(tri: &Triangulation, sys: &SixJSystem, filter: ColourFilter) -> Result<Vec<Colouring>> {
    let classes = tri.edge_classes();
    check_orders(tri, &classes)?;
    let nodes = AtomicU64::new(0);
    let plan = Plan::new(tri, &classes, sys, filter, &nodes);
    let mut out = Vec::new();
    let mut walker = Walker {
        plan: &plan,
        asg: vec![0; classes.edge_count()],
        local_nodes: 0,
        visit: |a: &[u32], _: Option<&BigComplex>| out.push(Colouring { assignment: a.to_vec() }),
    };
    walker.walk(0, None)?;
    Ok(out)
}

/// Normalized state sum of `sys` on `tri`.
pub fn state_sum(tri: &Triangulation, sys: &SixJSystem, options: &StateSumOptions) -> Result<StateSum> {
    if !(1..=2).contains(&options.edge_exponent) {
        return Err(Error::InvalidArgument(format!("edge exponent {} not in {{1, 2}}", options.edge_exponent)));
    }
    let classes = tri.edge_classes();
    check_orders(tri, &classes)?;
    let table = sys.table();
    let nodes = AtomicU64::new(0);
    let plan =
        Plan::new(tri, &classes, sys, options.filter, &nodes).weighted(&table, options.edge_exponent, options.budget);
    let bits = plan.bits;
    let e = classes.edge_count();

    let branch = |c: u32| -> Result<(BigComplex, u64)> {
        let mut sum = BigComplex::zero(bits);
        let mut count = 0u64;
        let mut walker = Walker {
            plan: &plan,
            asg: vec![0; e],
            local_nodes: 0,
            visit: |_: &[u32], v: Option<&BigComplex>| {
                if let Some(v) = v {
                    sum = &sum + v;
                    count += 1;
                }
            },
        };
        walker.step(0, c, Some(&BigComplex::one(bits)))?;
        walker.flush()?;
        drop(walker);
        Ok((sum, count))
    };

    let parts: Vec<Result<(BigComplex, u64)>> =
        with_threads(options.threads, || plan.colours.par_iter().map(|&c| branch(c)).collect())?;
    let mut raw = BigComplex::zero(bits);
    let mut colourings = 0;
    for p in parts {
        let (s, k) = p?;
        raw = &raw + &s;
        colourings += k;
    }

    let normalizer = plan.colours.iter().fold(BigComplex::zero(bits), |acc, &c| {
        let w = sys.weight(c);
        match options.normalization {
            Normalization::SumOfSquares => &acc + &(w * w),
            Normalization::SumOfWeights => &acc + w,
        }
    });
    let scale = normalizer.powi(classes.vertex_count as u32);
    let value = raw.div(&scale)?;
    Ok(StateSum {
        value,
        raw,
        normalizer,
        colourings,
        nodes: nodes.load(Ordering::Relaxed),
        vertex_count: classes.vertex_count,
        edge_count: e,
    })
}
