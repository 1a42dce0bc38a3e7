//! Closed triangulations given by face gluings, in the `.tri` text format:
//!
//! ```text
//! # comment
//! tets 2
//! tet 0: 1/0123 1/0123 1/0123 1/0123
//! tet 1: 0/0123 0/0123 0/0123 0/0123
//! ```
//!
//! Entry `k` of a `tet` line glues face `k` (opposite vertex `k`) to the given
//! tetrahedron; the four digits are the images of vertices 0, 1, 2, 3.

use std::fmt;

use crate::error::{Error, Result};

/// Edges of a tetrahedron in symbol order `(e01, e02, e12 | e23, e13, e03)`.
pub const EDGES: [(u8, u8); 6] = [(0, 1), (0, 2), (1, 2), (2, 3), (1, 3), (0, 3)];

fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGES.iter().position(|&e| e == (a, b)).expect("distinct vertices")
}

/// A permutation of `{0, 1, 2, 3}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Perm([u8; 4]);

impl Perm {
    pub const IDENTITY: Perm = Perm([0, 1, 2, 3]);

    pub fn new(images: [u8; 4]) -> Result<Self> {
        let mut seen = [false; 4];
        for &x in &images {
            if x > 3 || seen[x as usize] {
                return Err(Error::InvalidArgument(format!("{images:?} is not a permutation of 0..4")));
            }
            seen[x as usize] = true;
        }
        Ok(Perm(images))
    }

    pub fn transposition(a: u8, b: u8) -> Self {
        let mut p = [0, 1, 2, 3];
        p.swap(a as usize, b as usize);
        Perm(p)
    }

    pub fn apply(self, v: u8) -> u8 {
        self.0[v as usize]
    }

    pub fn inverse(self) -> Self {
        let mut inv = [0; 4];
        for (i, &x) in self.0.iter().enumerate() {
            inv[x as usize] = i as u8;
        }
        Perm(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(self, other: Perm) -> Self {
        Perm(other.0.map(|v| self.0[v as usize]))
    }

    pub fn is_odd(self) -> bool {
        let mut inversions = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if self.0[i] > self.0[j] {
                    inversions += 1;
                }
            }
        }
        inversions % 2 == 1
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for x in self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub tet: usize,
    pub perm: Perm,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    name: String,
    gluings: Vec<[Gluing; 4]>,
}

/// Partition of tetrahedron edges (and vertices) into classes.
#[derive(Clone, Debug)]
pub struct EdgeClassTable {
    /// Members `(tet, edge index)` of each class; classes are numbered by smallest member.
    pub classes: Vec<Vec<(usize, usize)>>,
    /// Class of slot `6·tet + edge`.
    pub slot_class: Vec<usize>,
    pub vertex_count: usize,
}

impl EdgeClassTable {
    pub fn edge_count(&self) -> usize {
        self.classes.len()
    }

    /// Edge classes of `tet` in symbol order.
    pub fn tet_edges(&self, tet: usize) -> [usize; 6] {
        std::array::from_fn(|e| self.slot_class[6 * tet + e])
    }
}

/// Union-find that tracks a parity bit relative to the root.
struct ParityUnionFind {
    parent: Vec<usize>,
    parity: Vec<bool>,
}

impl ParityUnionFind {
    fn new(n: usize) -> Self {
        ParityUnionFind { parent: (0..n).collect(), parity: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, up) = self.find(p);
        self.parent[x] = root;
        self.parity[x] ^= up;
        (root, self.parity[x])
    }

    /// Joins `a` and `b` with relative parity `odd`; false on a contradiction.
    fn union(&mut self, a: usize, b: usize, odd: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == odd;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        self.parity[hi] = pa ^ pb ^ odd;
        true
    }
}

impl Triangulation {
    /// Builds and validates a triangulation from its gluing table.
    pub fn from_gluings(name: &str, gluings: Vec<[Gluing; 4]>) -> Result<Self> {
        let t = Triangulation { name: name.to_string(), gluings };
        t.validate()?;
        Ok(t)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: &str) {
        self.name = name.to_string();
    }

    pub fn tet_count(&self) -> usize {
        self.gluings.len()
    }

    pub fn gluing(&self, tet: usize, face: u8) -> Gluing {
        self.gluings[tet][face as usize]
    }

    fn validate(&self) -> Result<()> {
        let n = self.gluings.len();
        if n == 0 {
            return Err(Error::Triangulation("no tetrahedra".into()));
        }
        for (t, faces) in self.gluings.iter().enumerate() {
            for f in 0..4u8 {
                let g = faces[f as usize];
                if g.tet >= n {
                    return Err(Error::Triangulation(format!("tet {t} face {f}: no tetrahedron {}", g.tet)));
                }
                let target = g.perm.apply(f);
                if g.tet == t && target == f {
                    return Err(Error::Triangulation(format!("tet {t} face {f} is glued to itself")));
                }
                let back = self.gluings[g.tet][target as usize];
                if back.tet != t || back.perm != g.perm.inverse() {
                    return Err(Error::Triangulation(format!(
                        "gluing is not an involution: tet {t} face {f} -> tet {} face {target}, \
                         which points to tet {} via {}",
                        g.tet, back.tet, back.perm
                    )));
                }
            }
        }
        let classes = self.compute_classes()?;
        let (v, e, f) = (classes.vertex_count as i64, classes.edge_count() as i64, 2 * n as i64);
        if v - e + f - n as i64 != 0 {
            return Err(Error::Triangulation(format!(
                "Euler characteristic V - E + F - T = {v} - {e} + {f} - {n} is not 0"
            )));
        }
        Ok(())
    }

    fn compute_classes(&self) -> Result<EdgeClassTable> {
        let n = self.gluings.len();
        let mut edges = ParityUnionFind::new(6 * n);
        let mut verts = ParityUnionFind::new(4 * n);
        for (t, faces) in self.gluings.iter().enumerate() {
            for f in 0..4u8 {
                let g = faces[f as usize];
                for (e, &(a, b)) in EDGES.iter().enumerate() {
                    if a == f || b == f {
                        continue;
                    }
                    let (pa, pb) = (g.perm.apply(a), g.perm.apply(b));
                    if !edges.union(6 * t + e, 6 * g.tet + edge_index(pa, pb), pa > pb) {
                        return Err(Error::Triangulation(format!(
                            "edge {a}{b} of tet {t} is identified with itself in reverse"
                        )));
                    }
                }
                for v in (0..4u8).filter(|&v| v != f) {
                    verts.union(4 * t + v as usize, 4 * g.tet + g.perm.apply(v) as usize, false);
                }
            }
        }
        let mut root_to_class = std::collections::HashMap::new();
        let mut classes: Vec<Vec<(usize, usize)>> = Vec::new();
        let mut slot_class = vec![0; 6 * n];
        for (slot, class) in slot_class.iter_mut().enumerate() {
            let root = edges.find(slot).0;
            let c = *root_to_class.entry(root).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push((slot / 6, slot % 6));
            *class = c;
        }
        let vertex_count = (0..4 * n).filter(|&x| verts.find(x).0 == x).count();
        Ok(EdgeClassTable { classes, slot_class, vertex_count })
    }

    pub fn edge_classes(&self) -> EdgeClassTable {
        self.compute_classes().expect("validated triangulation")
    }

    /// Each face pair once, as `(tet, face)` with the smaller end first.
    pub fn faces(&self) -> Vec<(usize, u8)> {
        let mut out = Vec::new();
        for (t, faces) in self.gluings.iter().enumerate() {
            for f in 0..4u8 {
                let g = faces[f as usize];
                if (t, f) < (g.tet, g.perm.apply(f)) {
                    out.push((t, f));
                }
            }
        }
        out
    }

    /// True if the tetrahedra can be oriented so every gluing reverses orientation.
    pub fn is_orientable(&self) -> bool {
        let n = self.gluings.len();
        let mut uf = ParityUnionFind::new(n);
        self.gluings.iter().enumerate().all(|(t, faces)| faces.iter().all(|g| uf.union(t, g.tet, !g.perm.is_odd())))
    }

    /// Serializes in the `.tri` format.
    pub fn to_tri(&self) -> String {
        let mut out = String::new();
        if !self.name.is_empty() {
            out.push_str(&format!("# {}\n", self.name));
        }
        out.push_str(&format!("tets {}\n", self.gluings.len()));
        for (t, faces) in self.gluings.iter().enumerate() {
            let cells: Vec<String> = faces.iter().map(|g| format!("{}/{}", g.tet, g.perm)).collect();
            out.push_str(&format!("tet {t}: {}\n", cells.join(" ")));
        }
        out
    }

    /// Rebuilds the gluing table after a local move. `relabel(t, f)` gives the new
    /// position `(tet, face, σ)` of an old external face, where `σ` maps old vertex
    /// labels to new ones; faces mapped to `None` vanish. `internal` lists new
    /// gluings `(tet, face, partner, perm)` created by the move (both directions).
    fn rebuild(
        &self,
        name: String,
        new_count: usize,
        relabel: impl Fn(usize, u8) -> Option<(usize, u8, Perm)>,
        internal: &[(usize, u8, usize, Perm)],
    ) -> Result<Triangulation> {
        let placeholder = Gluing { tet: usize::MAX, perm: Perm::IDENTITY };
        let mut gluings = vec![[placeholder; 4]; new_count];
        for (t, faces) in self.gluings.iter().enumerate() {
            for f in 0..4u8 {
                let Some((nt, nf, sigma)) = relabel(t, f) else { continue };
                let g = faces[f as usize];
                let (pt, _, tau) = relabel(g.tet, g.perm.apply(f))
                    .ok_or_else(|| Error::Internal("external face glued to a removed face".into()))?;
                gluings[nt][nf as usize] = Gluing { tet: pt, perm: tau.compose(g.perm).compose(sigma.inverse()) };
            }
        }
        for &(t, f, partner, perm) in internal {
            gluings[t][f as usize] = Gluing { tet: partner, perm };
        }
        if gluings.iter().flatten().any(|g| g.tet == usize::MAX) {
            return Err(Error::Internal("move left a face unglued".into()));
        }
        Triangulation::from_gluings(&name, gluings)
    }

    /// 1–4 move: replaces `tet` by four tetrahedra around a new interior vertex.
    pub fn move_1_4(&self, tet: usize) -> Result<Triangulation> {
        let n = self.tet_count();
        if tet >= n {
            return Err(Error::InvalidArgument(format!("no tetrahedron {tet}")));
        }
        // piece k replaces vertex k of `tet` by the new vertex
        let piece = |k: u8| if k == 0 { tet } else { n + k as usize - 1 };
        let relabel =
            |t: usize, f: u8| Some(if t == tet { (piece(f), f, Perm::IDENTITY) } else { (t, f, Perm::IDENTITY) });
        let mut internal = Vec::new();
        for j in 0..4u8 {
            for k in 0..4u8 {
                if j != k {
                    internal.push((piece(j), k, piece(k), Perm::transposition(j, k)));
                }
            }
        }
        self.rebuild(format!("{} + 1-4", self.name), n + 3, relabel, &internal)
    }

    /// 2–3 move across face `face` of `tet`; the two tetrahedra sharing it must differ.
    pub fn move_2_3(&self, tet: usize, face: u8) -> Result<Triangulation> {
        let n = self.tet_count();
        if tet >= n || face > 3 {
            return Err(Error::InvalidArgument(format!("no face {face} of tetrahedron {tet}")));
        }
        let (a, fa) = (tet, face);
        let g = self.gluing(a, fa);
        let (b, p) = (g.tet, g.perm);
        let fb = p.apply(fa);
        if a == b {
            return Err(Error::InvalidArgument("2-3 move needs two distinct tetrahedra".into()));
        }
        let tri: Vec<u8> = (0..4u8).filter(|&v| v != fa).collect();
        // new tet for triangle vertex x: vertices [y, z, apex of a, apex of b]
        let slots: [usize; 3] = [a, b, n];
        let others = |x: u8| -> (u8, u8) {
            let o: Vec<u8> = tri.iter().copied().filter(|&v| v != x).collect();
            (o[0], o[1])
        };
        let index_of = |x: u8| tri.iter().position(|&v| v == x).expect("triangle vertex");
        let relabel_a = |x: u8| -> Perm {
            let (y, z) = others(x);
            let mut s = [0u8; 4];
            s[y as usize] = 0;
            s[z as usize] = 1;
            s[fa as usize] = 2;
            s[x as usize] = 3;
            Perm(s)
        };
        let relabel_b = |x: u8| -> Perm {
            let (y, z) = others(x);
            let mut s = [0u8; 4];
            s[p.apply(y) as usize] = 0;
            s[p.apply(z) as usize] = 1;
            s[p.apply(x) as usize] = 2;
            s[fb as usize] = 3;
            Perm(s)
        };
        let relabel = |t: usize, f: u8| -> Option<(usize, u8, Perm)> {
            if t == a {
                if f == fa {
                    return None;
                }
                Some((slots[index_of(f)], 3, relabel_a(f)))
            } else if t == b {
                if f == fb {
                    return None;
                }
                let x = p.inverse().apply(f);
                Some((slots[index_of(x)], 2, relabel_b(x)))
            } else {
                Some((t, f, Perm::IDENTITY))
            }
        };
        let mut internal = Vec::new();
        for &x in &tri {
            let (y, z) = others(x);
            for (pos, w) in [(0u8, y), (1u8, z)] {
                // face `pos` of T_x (opposite w) is shared with T_w, where it is opposite x
                let (wy, wz) = others(w);
                let label_x = [y, z, 10, 11];
                let label_w = [wy, wz, 10, 11];
                let perm: [u8; 4] = std::array::from_fn(|i| {
                    let l = if label_x[i] == w { x } else { label_x[i] };
                    label_w.iter().position(|&m| m == l).expect("shared label") as u8
                });
                internal.push((slots[index_of(x)], pos, slots[index_of(w)], Perm::new(perm)?));
            }
        }
        self.rebuild(format!("{} + 2-3", self.name), n + 1, relabel, &internal)
    }
}

impl fmt::Display for Triangulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_tri())
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

/// Parses and validates a `.tri` document.
pub fn parse_triangulation(text: &str) -> Result<Triangulation> {
    let mut count: Option<usize> = None;
    let mut rows: Vec<Option<[Gluing; 4]>> = Vec::new();
    let mut name = String::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let (content, comment) = match raw.find('#') {
            Some(i) => (&raw[..i], Some(raw[i + 1..].trim())),
            None => (raw, None),
        };
        if count.is_none() && name.is_empty() {
            if let Some(c) = comment.filter(|c| !c.is_empty()) {
                name = c.to_string();
            }
        }
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let mut words = content.split_whitespace();
        match (count, words.next()) {
            (None, Some("tets")) => {
                let n: usize = words
                    .next()
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| parse_error(line_no, "expected `tets <n>`"))?;
                if words.next().is_some() {
                    return Err(parse_error(line_no, "trailing text after tetrahedron count"));
                }
                count = Some(n);
                rows = vec![None; n];
            }
            (None, _) => return Err(parse_error(line_no, "expected `tets <n>` first")),
            (Some(n), Some("tet")) => {
                let id_word = words.next().ok_or_else(|| parse_error(line_no, "missing tetrahedron id"))?;
                let id: usize = id_word
                    .strip_suffix(':')
                    .and_then(|w| w.parse().ok())
                    .ok_or_else(|| parse_error(line_no, format!("bad tetrahedron id `{id_word}`")))?;
                if id >= n {
                    return Err(parse_error(line_no, format!("tetrahedron id {id} out of range")));
                }
                if rows[id].is_some() {
                    return Err(parse_error(line_no, format!("tetrahedron {id} listed twice")));
                }
                let cells: Vec<&str> = words.collect();
                if cells.len() != 4 {
                    return Err(parse_error(line_no, format!("expected 4 gluings, found {}", cells.len())));
                }
                let mut row = [Gluing { tet: 0, perm: Perm::IDENTITY }; 4];
                for (face, cell) in cells.iter().enumerate() {
                    row[face] = parse_cell(cell, id, face).map_err(|m| parse_error(line_no, m))?;
                }
                rows[id] = Some(row);
            }
            (Some(_), Some(w)) => return Err(parse_error(line_no, format!("unexpected `{w}`"))),
            (Some(_), None) => unreachable!("empty lines are skipped"),
        }
    }
    let n = count.ok_or_else(|| parse_error(0, "missing `tets <n>` line"))?;
    let gluings = rows
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| parse_error(0, format!("tetrahedron {i} missing"))))
        .collect::<Result<Vec<_>>>()?;
    if gluings.len() != n {
        return Err(parse_error(0, "tetrahedron count mismatch"));
    }
    Triangulation::from_gluings(&name, gluings)
}

fn parse_cell(cell: &str, tet: usize, face: usize) -> std::result::Result<Gluing, String> {
    if cell == "-" || cell.starts_with("-1") {
        return Err(format!("boundary face: face {face} of tetrahedron {tet} is not glued"));
    }
    let (t, p) = cell.split_once('/').ok_or_else(|| format!("bad gluing `{cell}`, expected <tet>/<perm>"))?;
    let t: usize = t.parse().map_err(|_| format!("bad tetrahedron index `{t}`"))?;
    let digits: Vec<u8> = p.bytes().map(|b| b.wrapping_sub(b'0')).collect();
    if digits.len() != 4 {
        return Err(format!("permutation `{p}` must have 4 digits"));
    }
    let perm = Perm::new([digits[0], digits[1], digits[2], digits[3]]).map_err(|e| e.to_string())?;
    Ok(Gluing { tet: t, perm })
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO: &str = "tets 2\ntet 0: 1/0123 1/0123 1/0123 1/0123\ntet 1: 0/0123 0/0123 0/0123 0/0123\n";
    const ONE: &str = "tets 1\ntet 0: 0/1230 0/3012 0/0132 0/0132\n";

    #[test]
    fn two_tet_sphere() {
        let t = parse_triangulation(TWO).unwrap();
        let c = t.edge_classes();
        assert_eq!((t.tet_count(), c.vertex_count, c.edge_count()), (2, 4, 6));
        assert_eq!(c.classes.iter().map(Vec::len).sum::<usize>(), 12);
        assert!(t.is_orientable());
        assert_eq!(parse_triangulation(&t.to_tri()).unwrap(), t);
    }

    #[test]
    fn one_tet_sphere() {
        let t = parse_triangulation(ONE).unwrap();
        let c = t.edge_classes();
        assert_eq!((c.vertex_count, c.edge_count()), (1, 2));
    }

    #[test]
    fn rejects_bad_input() {
        let boundary = "tets 2\ntet 0: 1/0123 1/0123 1/0123 -\ntet 1: 0/0123 0/0123 0/0123 0/0123\n";
        assert!(matches!(parse_triangulation(boundary), Err(Error::Parse { line: 2, .. })));
        let broken = "tets 2\ntet 0: 1/0123 1/0123 1/0123 1/0123\ntet 1: 0/0123 0/0123 0/0123 1/0123\n";
        assert!(matches!(parse_triangulation(broken), Err(Error::Triangulation(_))));
        let not_inv = "tets 2\ntet 0: 1/0123 1/0123 1/0123 1/0123\ntet 1: 0/0123 0/0123 0/0123 0/1023\n";
        assert!(parse_triangulation(not_inv).is_err());
        assert!(matches!(parse_triangulation("tet 0: 0/0123"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_triangulation("tets 1\ntet 0: 0/0122 0/0123 0/0123 0/0123"), Err(Error::Parse { .. })));
    }

    #[test]
    fn moves_keep_a_valid_closed_triangulation() {
        let two = parse_triangulation(TWO).unwrap();
        let three = two.move_2_3(0, 3).unwrap();
        let c = three.edge_classes();
        assert_eq!((three.tet_count(), c.vertex_count, c.edge_count()), (3, 4, 7));
        let one = parse_triangulation(ONE).unwrap();
        let four = one.move_1_4(0).unwrap();
        let c = four.edge_classes();
        assert_eq!((four.tet_count(), c.vertex_count, c.edge_count()), (4, 2, 6));
        assert!(four.is_orientable() && three.is_orientable());
    }
}
