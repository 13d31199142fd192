//! Octahedral ideal triangulations of the knot complement.
//!
//! Every crossing carries an octahedron with vertices `A..D` on the corners
//! of the diagram and `E`, `F` above and below. The Yokota subdivision cuts it
//! into four tetrahedra around the vertical axis `EF`; the Thurston
//! subdivision into five tetrahedra around the horizontal square. Faces are
//! glued along the diagram, edges along the split side collapse to points and
//! the collapse is propagated through every triangle until it stabilises.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{pos_label, Slot, TangleGraph, Variables, A, B, C, D, LABEL_NAMES};
use crate::numerics::{bloch_wigner, dprime, is_degenerate, prime, shape_triple, Cx};
use crate::potential::{corner_ratio, Monomial};

/// Octahedron apex above the diagram.
pub const E: usize = 4;
/// Octahedron apex below the diagram.
pub const F: usize = 5;

/// Errors raised while building or checking a triangulation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum TriangulationError {
    #[error("collapse pattern not covered: {0}")]
    Collapse(String),
    #[error("shape {0} is degenerate at this point")]
    NonEssentialPoint(String),
    #[error("degenerate shape in a move: {0}")]
    DegenerateShape(String),
    #[error("no strand segment carries a meridian annulus")]
    NoMeridian,
}

/// Which octahedral subdivision a triangulation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    Yokota,
    Thurston,
}

/// An ideal tetrahedron with vertices `(p, q, r, s)`: the shape `u` sits on
/// `pq` and `rs`, `u'` on `ps` and `qr`, `u''` on `pr` and `qs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tetrahedron {
    pub crossing: usize,
    pub vertices: [usize; 4],
    pub name: String,
    pub shape: Monomial,
    pub orientation: i8,
}

impl Tetrahedron {
    /// Index into the shape triple for the edge `{x, y}`.
    pub fn dihedral(&self, x: usize, y: usize) -> usize {
        let [p, q, r, s] = self.vertices;
        let e = |a: usize, b: usize| (x == a && y == b) || (x == b && y == a);
        if e(p, q) || e(r, s) {
            0
        } else if e(p, s) || e(q, r) {
            1
        } else {
            2
        }
    }

    /// The six edges as vertex pairs.
    pub fn edges(&self) -> [(usize, usize); 6] {
        let [p, q, r, s] = self.vertices;
        [(p, q), (r, s), (p, s), (q, r), (p, r), (q, s)]
    }

    /// Readable vertex word such as `ABDF`.
    pub fn word(&self) -> String {
        self.vertices.iter().map(|&v| LABEL_NAMES[v]).collect()
    }
}

/// Classification of an edge class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    /// Contains a surviving horizontal edge.
    A,
    /// Only non-horizontal edges through `E` or `F`.
    B,
    /// Only diagonals `AC` or `BD` of the square.
    C,
}

/// One tetrahedron edge inside a class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EdgeRef {
    pub tet: usize,
    pub a: usize,
    pub b: usize,
}

/// An equivalence class of glued tetrahedron edges.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeClass {
    pub kind: EdgeKind,
    pub members: Vec<EdgeRef>,
}

/// Meridian annulus along one strand segment joining an under-crossing and
/// an over-crossing.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CuspPath {
    pub arc: usize,
    pub over_tet: usize,
    pub under_tet: usize,
    pub over_edge: (usize, usize),
    pub under_edge: (usize, usize),
}

/// Ideal triangulation with shapes expressed as monomials in the diagram
/// variables.
#[derive(Debug, Clone, Serialize)]
pub struct Triangulation {
    pub variant: Variant,
    pub variable_count: usize,
    pub tetrahedra: Vec<Tetrahedron>,
    pub edge_classes: Vec<EdgeClass>,
    /// Class of the horizontal edge at each `(crossing, corner)`, when it
    /// belongs to a surviving class.
    pub horizontal_class: Vec<[Option<usize>; 4]>,
    pub cusp: Option<CuspPath>,
    /// Horizontal classes that absorbed non-horizontal edges.
    pub audit: Vec<String>,
}

struct EdgeUf {
    parent: Vec<usize>,
}

fn eid(n: usize, x: usize, y: usize) -> usize {
    n * 36 + x * 6 + y
}

impl EdgeUf {
    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
    fn glue(&mut self, n1: usize, a: (usize, usize), n2: usize, b: (usize, usize)) -> bool {
        let x = self.union(eid(n1, a.0, a.1), eid(n2, b.0, b.1));
        let y = self.union(eid(n1, a.1, a.0), eid(n2, b.1, b.0));
        x || y
    }
}

const THURSTON: [([usize; 4], &str); 5] = [
    ([A, F, B, D], "u3"),
    ([C, F, D, B], "u1"),
    ([B, D, C, A], "u5"),
    ([B, E, A, C], "u4"),
    ([D, E, C, A], "u2"),
];

const YOKOTA: [([usize; 4], usize); 4] = [([A, B, E, F], A), ([B, C, E, F], B), ([C, D, E, F], C), ([D, A, E, F], D)];

fn apex(x: usize) -> usize {
    if x == B || x == D {
        E
    } else {
        F
    }
}

fn over_type(x: usize) -> bool {
    x == A || x == C
}

struct Complex {
    uf: EdgeUf,
    collapsed_seed: Vec<usize>,
    collapsed: Vec<bool>,
    alive: Vec<(usize, [usize; 4], usize)>,
}

impl Complex {
    fn is_collapsed(&mut self, n: usize, x: usize, y: usize) -> bool {
        let r = self.uf.find(eid(n, x, y));
        self.collapsed[r]
    }

    fn refresh_collapsed(&mut self) {
        let len = self.uf.parent.len();
        self.collapsed = vec![false; len];
        for k in 0..self.collapsed_seed.len() {
            let e = self.collapsed_seed[k];
            let (n, x, y) = (e / 36, (e % 36) / 6, e % 6);
            let r1 = self.uf.find(e);
            let r2 = self.uf.find(eid(n, y, x));
            self.collapsed[r1] = true;
            self.collapsed[r2] = true;
        }
    }

    fn vmap(&mut self, n: usize) -> [usize; 6] {
        let mut m = [0, 1, 2, 3, 4, 5];
        loop {
            let mut changed = false;
            for x in 0..6 {
                for y in 0..6 {
                    if x != y && self.is_collapsed(n, x, y) {
                        let lo = m[x].min(m[y]);
                        if m[x] != lo || m[y] != lo {
                            m[x] = lo;
                            m[y] = lo;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return m;
            }
        }
    }
}

fn build_complex(g: &TangleGraph, tets: &[[usize; 4]]) -> Result<Complex, TriangulationError> {
    let d = &g.diagram;
    let nc = d.crossing_count();
    let mut uf = EdgeUf { parent: (0..nc * 36).collect() };
    for n in 0..nc {
        uf.glue(n, (A, E), n, (C, E));
        uf.glue(n, (B, F), n, (D, F));
    }
    let mut seed = Vec::new();
    for a in 1..=d.arc_count {
        let (i, p) = d.tail(a);
        let (i2, p2) = d.head(a);
        let x = pos_label(d.crossings[i].sign, p);
        let y = pos_label(d.crossings[i2].sign, p2);
        let (px, py) = (apex(x), apex(y));
        if a == g.split {
            for (n, l, pp) in [(i, x, px), (i2, y, py)] {
                for (u, v) in [(pp, l), (pp, (l + 1) % 4), (pp, (l + 3) % 4), (l, (l + 1) % 4), (l, (l + 3) % 4)] {
                    seed.push(eid(n, u, v));
                }
            }
            continue;
        }
        for (u, fp) in [((x + 1) % 4, p), ((x + 3) % 4, (p + 3) % 4)] {
            let f = d.face(i, fp);
            let at = d.face(i2, p2) == f;
            let before = d.face(i2, (p2 + 3) % 4) == f;
            let u2 = match (at, before) {
                (true, false) => (y + 1) % 4,
                (false, true) => (y + 3) % 4,
                _ => {
                    return Err(TriangulationError::Collapse(format!(
                        "arc {a} bounds the same face on both sides"
                    )))
                }
            };
            let (qx, qu) = if over_type(x) == over_type(y) { (y, u2) } else { (u2, y) };
            uf.glue(i, (px, x), i2, (py, qx));
            uf.glue(i, (px, u), i2, (py, qu));
            uf.glue(i, (x, u), i2, (qx, qu));
        }
    }
    let mut tris: Vec<(usize, [usize; 3])> = Vec::new();
    for n in 0..nc {
        for x in 0..4 {
            for p in [E, F] {
                tris.push((n, [x, (x + 1) % 4, p]));
            }
        }
        for t in tets {
            for skip in 0..4 {
                let mut tri = [0; 3];
                let mut k = 0;
                for (idx, &v) in t.iter().enumerate() {
                    if idx != skip {
                        tri[k] = v;
                        k += 1;
                    }
                }
                tris.push((n, tri));
            }
        }
    }
    let mut cx = Complex { uf, collapsed_seed: seed, collapsed: Vec::new(), alive: Vec::new() };
    loop {
        // Propagate collapses through every triangle.
        loop {
            cx.refresh_collapsed();
            let mut changed = false;
            for &(n, [p, q, r]) in &tris {
                for (a, b, c) in [(p, q, r), (q, r, p), (r, p, q)] {
                    if cx.is_collapsed(n, a, b) && cx.uf.find(eid(n, a, c)) != cx.uf.find(eid(n, b, c)) {
                        cx.uf.glue(n, (a, c), n, (b, c));
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let mut alive = Vec::new();
        for n in 0..nc {
            for (k, t) in tets.iter().enumerate() {
                let mut ok = true;
                for x in 0..4 {
                    for y in x + 1..4 {
                        if cx.is_collapsed(n, t[x], t[y]) {
                            ok = false;
                        }
                    }
                }
                if ok {
                    alive.push((n, *t, k));
                }
            }
        }
        let mut removed = vec![false; alive.len()];
        let mut pairs = Vec::new();
        for i1 in 0..alive.len() {
            for i2 in i1 + 1..alive.len() {
                if removed[i1] || removed[i2] || alive[i1].0 != alive[i2].0 {
                    continue;
                }
                let n = alive[i1].0;
                let m = cx.vmap(n);
                let mut s1: Vec<usize> = alive[i1].1.iter().map(|&v| m[v]).collect();
                let mut s2: Vec<usize> = alive[i2].1.iter().map(|&v| m[v]).collect();
                s1.sort_unstable();
                s2.sort_unstable();
                s1.dedup();
                s2.dedup();
                if s1 == s2 {
                    removed[i1] = true;
                    removed[i2] = true;
                    pairs.push((n, alive[i1].1, alive[i2].1));
                }
            }
        }
        let mut changed = false;
        for (n, t1, t2) in pairs {
            let m = cx.vmap(n);
            let corr = |x: usize| *t2.iter().find(|&&y| m[y] == m[x]).expect("matched vertex");
            for a in 0..4 {
                for b in a + 1..4 {
                    let (x, y) = (t1[a], t1[b]);
                    if cx.uf.glue(n, (x, y), n, (corr(x), corr(y))) {
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            cx.alive = alive.into_iter().zip(removed).filter(|(_, r)| !r).map(|(a, _)| a).collect();
            cx.refresh_collapsed();
            return Ok(cx);
        }
    }
}

fn finish(
    g: &TangleGraph,
    mut cx: Complex,
    variant: Variant,
    variable_count: usize,
    tetrahedra: Vec<Tetrahedron>,
) -> Triangulation {
    let nc = g.diagram.crossing_count();
    let mut root_class: std::collections::BTreeMap<usize, usize> = Default::default();
    let mut classes: Vec<EdgeClass> = Vec::new();
    for (ti, t) in tetrahedra.iter().enumerate() {
        for (a, b) in t.edges() {
            let r1 = cx.uf.find(eid(t.crossing, a, b));
            let r2 = cx.uf.find(eid(t.crossing, b, a));
            let key = r1.min(r2);
            let ci = *root_class.entry(key).or_insert_with(|| {
                classes.push(EdgeClass { kind: EdgeKind::C, members: Vec::new() });
                classes.len() - 1
            });
            classes[ci].members.push(EdgeRef { tet: ti, a, b });
        }
    }
    let mut horizontal_class = vec![[None; 4]; nc];
    for (n, row) in horizontal_class.iter_mut().enumerate() {
        for (l, slot) in row.iter_mut().enumerate() {
            let (x, y) = (l, (l + 1) % 4);
            if cx.is_collapsed(n, x, y) {
                continue;
            }
            let key = cx.uf.find(eid(n, x, y)).min(cx.uf.find(eid(n, y, x)));
            if let Some(&ci) = root_class.get(&key) {
                *slot = Some(ci);
                classes[ci].kind = EdgeKind::A;
            }
        }
    }
    let mut audit = Vec::new();
    for (ci, cl) in classes.iter_mut().enumerate() {
        let vertical = cl.members.iter().any(|e| e.a >= E || e.b >= E);
        if cl.kind != EdgeKind::A && vertical {
            cl.kind = EdgeKind::B;
        }
        if cl.kind == EdgeKind::A && vertical {
            audit.push(format!(
                "class {ci}: horizontal edges identified with non-horizontal edges {}",
                cl.members
                    .iter()
                    .filter(|e| e.a >= E || e.b >= E)
                    .map(|e| format!("{}{}{}", LABEL_NAMES[e.a], LABEL_NAMES[e.b], tetrahedra[e.tet].crossing))
                    .collect::<Vec<_>>()
                    .join(" ")
            ));
        }
    }
    let mut tri = Triangulation {
        variant,
        variable_count,
        tetrahedra,
        edge_classes: classes,
        horizontal_class,
        cusp: None,
        audit,
    };
    if variant == Variant::Thurston {
        tri.cusp = find_cusp(g, &mut cx, &tri);
    }
    tri
}

fn find_cusp(g: &TangleGraph, cx: &mut Complex, t: &Triangulation) -> Option<CuspPath> {
    let d = &g.diagram;
    let find_tet = |n: usize, name: &str| t.tetrahedra.iter().position(|x| x.crossing == n && x.name == name);
    let under_tet = |l: usize| if l == D { ("u2", (D, E)) } else { ("u4", (B, E)) };
    for a in 1..=d.arc_count {
        if g.i_arcs.contains(&a) || g.j_arcs.contains(&a) {
            continue;
        }
        let (nt, pt) = d.tail(a);
        let (nh, ph) = d.head(a);
        let (lt, lh) = (d.label(nt, pt), d.label(nh, ph));
        // Under-crossing followed by over-crossing, or over followed by under.
        let (over_n, over_name, over_edge, over_arm, under_n, under_l) = if !d.is_over(nt, pt) && lh == A {
            (nh, "u3", (A, F), A, nt, lt)
        } else if lt == C && !d.is_over(nh, ph) {
            (nt, "u1", (C, F), C, nh, lh)
        } else {
            continue;
        };
        let (uname, uedge) = under_tet(under_l);
        let (Some(t1), Some(t2)) = (find_tet(over_n, over_name), find_tet(under_n, uname)) else {
            continue;
        };
        if cx.uf.find(eid(over_n, F, over_arm)) != cx.uf.find(eid(under_n, E, (under_l + 1) % 4)) {
            continue;
        }
        return Some(CuspPath { arc: a, over_tet: t1, under_tet: t2, over_edge, under_edge: uedge });
    }
    None
}

fn region_mono(vars: &Variables, r: usize) -> Monomial {
    Monomial::from_slot(vars.m, vars.region[r])
}

/// Thurston triangulation with shapes in the region variables.
pub fn build_thurston(g: &TangleGraph, vars: &Variables) -> Result<Triangulation, TriangulationError> {
    let tets: Vec<[usize; 4]> = THURSTON.iter().map(|(t, _)| *t).collect();
    let cx = build_complex(g, &tets)?;
    let mut out = Vec::new();
    for &(n, t, k) in &cx.alive {
        let v = g.vertex(n).ok_or_else(|| {
            TriangulationError::Collapse(format!("tetrahedron survives at removed crossing {n}"))
        })?;
        let w = |l: usize| region_mono(vars, v.corner_region[l]);
        let name = THURSTON[k].1;
        let shape = match name {
            "u1" => &w(B) / &w(C),
            "u2" => &w(D) / &w(C),
            "u3" => &w(D) / &w(A),
            "u4" => &w(B) / &w(A),
            _ => &(&w(C) * &w(A)) / &(&w(D) * &w(B)),
        };
        if shape.zero != 0 || shape.is_constant() {
            return Err(TriangulationError::Collapse(format!(
                "tetrahedron {} at crossing {n} has constant shape {}",
                name,
                shape.display()
            )));
        }
        out.push(Tetrahedron { crossing: n, vertices: t, name: name.to_string(), shape, orientation: 1 });
    }
    Ok(finish(g, cx, Variant::Thurston, vars.m, out))
}

/// Yokota triangulation with shapes in the side variables.
pub fn build_yokota(g: &TangleGraph, vars: &Variables) -> Result<Triangulation, TriangulationError> {
    let tets: Vec<[usize; 4]> = YOKOTA.iter().map(|(t, _)| *t).collect();
    let cx = build_complex(g, &tets)?;
    let mut out = Vec::new();
    for &(n, t, k) in &cx.alive {
        let v = g.vertex(n).ok_or_else(|| {
            TriangulationError::Collapse(format!("tetrahedron survives at removed crossing {n}"))
        })?;
        let corner = YOKOTA[k].1;
        if !g.corner_alive(v, corner) {
            return Err(TriangulationError::Collapse(format!(
                "tetrahedron {}{} at crossing {n} survives on a collapsed corner",
                LABEL_NAMES[corner],
                LABEL_NAMES[(corner + 1) % 4]
            )));
        }
        let shape = corner_ratio(g, vars, v, corner);
        out.push(Tetrahedron {
            crossing: n,
            vertices: t,
            name: format!("t{}{}", LABEL_NAMES[corner], LABEL_NAMES[(corner + 1) % 4]),
            shape,
            orientation: 1,
        });
    }
    let alive_corners: usize = g.vertices.iter().map(|v| (0..4).filter(|&l| g.corner_alive(v, l)).count()).sum();
    if alive_corners != out.len() {
        return Err(TriangulationError::Collapse(format!(
            "{} surviving tetrahedra for {} surviving corners",
            out.len(),
            alive_corners
        )));
    }
    Ok(finish(g, cx, Variant::Yokota, vars.g, out))
}

/// Residual of one edge class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeResidual {
    pub class: usize,
    pub kind: EdgeKind,
    pub product: Cx,
    pub residual: f64,
    pub structural: bool,
}

/// Edge-relation residuals at a point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeReport {
    pub classes: Vec<EdgeResidual>,
    pub max_residual: f64,
}

impl Triangulation {
    /// Evaluated shapes of all tetrahedra.
    pub fn shapes(&self, x: &[Cx]) -> Vec<Cx> {
        self.tetrahedra.iter().map(|t| t.shape.eval(x)).collect()
    }

    /// Shapes at `x`, failing if any is degenerate.
    pub fn essential_shapes(&self, x: &[Cx], tol: f64) -> Result<Vec<Cx>, TriangulationError> {
        let s = self.shapes(x);
        for (t, u) in self.tetrahedra.iter().zip(&s) {
            if is_degenerate(*u, tol) {
                return Err(TriangulationError::NonEssentialPoint(format!("{}@{}", t.name, t.crossing)));
            }
        }
        Ok(s)
    }

    /// Product of the shape parameters around edge class `ci`.
    pub fn class_product(&self, ci: usize, shapes: &[Cx]) -> Cx {
        self.edge_classes[ci]
            .members
            .iter()
            .map(|e| {
                let t = &self.tetrahedra[e.tet];
                shape_triple(shapes[e.tet]).map(|s| s[t.dihedral(e.a, e.b)]).unwrap_or(Cx::new(f64::NAN, f64::NAN))
            })
            .product()
    }

    /// Signed Bloch-Wigner volume at `x`.
    pub fn volume(&self, x: &[Cx]) -> Result<f64, TriangulationError> {
        let mut v = 0.0;
        for t in &self.tetrahedra {
            let u = t.shape.eval(x);
            v += t.orientation as f64
                * bloch_wigner(u).map_err(|_| TriangulationError::NonEssentialPoint(t.name.clone()))?;
        }
        Ok(v)
    }

    /// Serializable summary with vertex words, shape exponents and edge
    /// classes.
    pub fn dump(&self) -> TriangulationDump {
        let mut edge_of = vec![vec![0usize; 6]; self.tetrahedra.len()];
        for (ci, cl) in self.edge_classes.iter().enumerate() {
            for e in &cl.members {
                let k = self.tetrahedra[e.tet].edges().iter().position(|&p| p == (e.a, e.b)).unwrap_or(0);
                edge_of[e.tet][k] = ci;
            }
        }
        TriangulationDump {
            variant: self.variant,
            variable_count: self.variable_count,
            tetrahedra: self
                .tetrahedra
                .iter()
                .zip(edge_of)
                .map(|(t, ec)| TetrahedronDump {
                    crossing: t.crossing,
                    vertices: t.word(),
                    name: t.name.clone(),
                    exponents: t.shape.exponents.clone(),
                    orientation: t.orientation,
                    edge_classes: ec,
                })
                .collect(),
            edge_class_kinds: self.edge_classes.iter().map(|c| c.kind).collect(),
            audit: self.audit.clone(),
        }
    }

    /// JSON rendering of [`Triangulation::dump`].
    pub fn to_json(&self) -> String {
        self.dump().to_json()
    }
}

/// One tetrahedron of a [`TriangulationDump`]; edge classes follow the order
/// of [`Tetrahedron::edges`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TetrahedronDump {
    pub crossing: usize,
    pub vertices: String,
    pub name: String,
    pub exponents: Vec<i32>,
    pub orientation: i8,
    pub edge_classes: Vec<usize>,
}

/// Plain-data form of a triangulation written by `--dump-triangulation`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangulationDump {
    pub variant: Variant,
    pub variable_count: usize,
    pub tetrahedra: Vec<TetrahedronDump>,
    pub edge_class_kinds: Vec<EdgeKind>,
    pub audit: Vec<String>,
}

impl TriangulationDump {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("triangulation serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Edge relations at `x`; classes of kind `B` and `C` are structural.
pub fn verify_edge_relations(t: &Triangulation, x: &[Cx]) -> Result<EdgeReport, TriangulationError> {
    let shapes = t.essential_shapes(x, 1e-12)?;
    let classes: Vec<EdgeResidual> = (0..t.edge_classes.len())
        .map(|ci| {
            let p = t.class_product(ci, &shapes);
            EdgeResidual {
                class: ci,
                kind: t.edge_classes[ci].kind,
                product: p,
                residual: (p - 1.0).norm(),
                structural: t.edge_classes[ci].kind != EdgeKind::A,
            }
        })
        .collect();
    let max_residual = classes.iter().map(|c| c.residual).fold(0.0, f64::max);
    Ok(EdgeReport { classes, max_residual })
}

/// Residual `|h - 1|` of the meridian holonomy along the recorded annulus.
pub fn verify_cusp(t: &Triangulation, x: &[Cx]) -> Result<f64, TriangulationError> {
    let path = t.cusp.as_ref().ok_or(TriangulationError::NoMeridian)?;
    let shapes = t.essential_shapes(x, 1e-12)?;
    let dihedral = |ti: usize, e: (usize, usize)| {
        let tet = &t.tetrahedra[ti];
        shape_triple(shapes[ti]).map(|s| s[tet.dihedral(e.0, e.1)])
    };
    let over = dihedral(path.over_tet, path.over_edge).map_err(|e| TriangulationError::NonEssentialPoint(e.to_string()))?;
    let under = dihedral(path.under_tet, path.under_edge).map_err(|e| TriangulationError::NonEssentialPoint(e.to_string()))?;
    Ok((over / under - 1.0).norm())
}

/// Class of the horizontal edges bounding region `r`, if they agree.
pub fn region_class(t: &Triangulation, g: &TangleGraph, r: usize) -> Option<usize> {
    let mut found = None;
    for v in &g.vertices {
        for l in 0..4 {
            if v.corner_region[l] != r {
                continue;
            }
            if let Some(ci) = t.horizontal_class[v.crossing][l] {
                match found {
                    None => found = Some(ci),
                    Some(c) if c != ci => return None,
                    _ => {}
                }
            }
        }
    }
    found
}

/// Region whose horizontal edges form class `ci`, for every class-A class
/// attached to a variable region.
pub fn region_variable_classes(t: &Triangulation, g: &TangleGraph, vars: &Variables) -> Vec<(usize, Option<usize>)> {
    (0..g.regions.len())
        .filter_map(|r| match vars.region[r] {
            Slot::Var(i) => Some((i, region_class(t, g, r))),
            _ => None,
        })
        .collect()
}

fn check_shapes(vals: &[Cx]) -> Result<(), TriangulationError> {
    for (i, u) in vals.iter().enumerate() {
        if is_degenerate(*u, 1e-14) {
            return Err(TriangulationError::DegenerateShape(format!("shape {} = {u}", i + 1)));
        }
    }
    Ok(())
}

/// Shape transport of the 4-5 move from the four Yokota tetrahedra
/// `(t₁, t₂, t₃, t₄)` to the five Thurston tetrahedra `(u₁..u₅)`.
pub fn move_45(t: [Cx; 4]) -> Result<[Cx; 5], TriangulationError> {
    check_shapes(&t)?;
    let [t1, t2, t3, t4] = t;
    let u = [
        prime(t1) * dprime(t4),
        prime(t1) * dprime(t2),
        prime(t3) * dprime(t2),
        prime(t3) * dprime(t4),
        (prime(t1) * dprime(t2) * prime(t3) * dprime(t4)).inv(),
    ];
    check_shapes(&u)?;
    Ok(u)
}

/// Inverse of [`move_45`] on the constraint surface `t₁t₂t₃t₄ = 1`.
pub fn move_45_inverse(u: [Cx; 5]) -> Result<[Cx; 4], TriangulationError> {
    check_shapes(&u)?;
    let [u1, u2, u3, u4, u5] = u;
    let t = [
        dprime(u1) * dprime(u2) * prime(u5),
        prime(u2) * prime(u3) * dprime(u5),
        dprime(u3) * dprime(u4) * prime(u5),
        prime(u4) * prime(u1) * dprime(u5),
    ];
    check_shapes(&t)?;
    Ok(t)
}

/// Shape transport of the 3-2 move `(t₁, t₂, t₄) → (u₁, u₂)`.
pub fn move_32(t: [Cx; 3]) -> Result<[Cx; 2], TriangulationError> {
    check_shapes(&t)?;
    let [t1, t2, t4] = t;
    let u = [prime(t1) * dprime(t4), prime(t1) * dprime(t2)];
    check_shapes(&u)?;
    Ok(u)
}

/// Inverse of [`move_32`] on the constraint surface `t₁t₂t₄ = 1`.
pub fn move_32_inverse(u: [Cx; 2]) -> Result<[Cx; 3], TriangulationError> {
    check_shapes(&u)?;
    let [u1, u2] = u;
    let t = [dprime(u1) * dprime(u2), u1 * prime(u2), prime(u1) * u2];
    check_shapes(&t)?;
    Ok(t)
}
