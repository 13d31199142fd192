//! Planar diagram codes, (1,1)-tangles and the reduced graph `G`.
//!
//! A crossing `X(a,b,c,d)` lists its four arcs counterclockwise starting from
//! the incoming under-strand. Corners of a crossing carry the labels `A..D`
//! counterclockwise with `A` on the incoming over-strand, so `A` and `C` are
//! over-arms and `B`, `D` are under-arms. The corner `XY` is the one lying
//! counterclockwise after arm `X`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Corner and arm labels.
pub const A: usize = 0;
pub const B: usize = 1;
pub const C: usize = 2;
pub const D: usize = 3;

/// Letters for the labels `A..F` used in dumps and reports.
pub const LABEL_NAMES: [char; 6] = ['A', 'B', 'C', 'D', 'E', 'F'];

/// Errors raised while reading a diagram or opening it into a tangle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagramError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid diagram: {0}")]
    Validation(String),
    #[error("split side {0}: the endpoints of I and J coincide")]
    EndpointClash(usize),
    #[error("assumption violated: {0}")]
    AssumptionViolation(String),
    #[error("region {0} cannot carry the unit value")]
    InvalidRegion(usize),
}

/// A signed crossing with its arcs in PD order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Crossing {
    pub sign: i8,
    pub arcs: [usize; 4],
}

/// Position of the arm carrying label `l` at a crossing of the given sign.
pub fn label_pos(sign: i8, l: usize) -> usize {
    if sign > 0 {
        (l + 3) % 4
    } else {
        (l + 1) % 4
    }
}

/// Label of the arm at PD position `p`.
pub fn pos_label(sign: i8, p: usize) -> usize {
    if sign > 0 {
        (p + 1) % 4
    } else {
        (p + 3) % 4
    }
}

/// Oriented knot diagram given by a PD code, together with its faces.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotDiagram {
    pub name: Option<String>,
    pub crossings: Vec<Crossing>,
    pub arc_count: usize,
    ends: Vec<[(usize, usize); 2]>,
    tail: Vec<(usize, usize)>,
    head: Vec<(usize, usize)>,
    face: Vec<[usize; 4]>,
    face_count: usize,
}

/// Parses PD text: `X(a,b,c,d)` tokens, `#` comments and an optional
/// `knot <name>` header line.
pub fn parse_pd(text: &str) -> Result<KnotDiagram, DiagramError> {
    let mut name = None;
    let mut tuples = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("knot") {
            if rest.starts_with(char::is_whitespace) {
                if name.is_some() || !tuples.is_empty() {
                    return Err(DiagramError::Parse(format!(
                        "line {}: header must precede crossings",
                        lineno + 1
                    )));
                }
                name = Some(rest.trim().to_string());
                continue;
            }
        }
        let mut rest = line;
        while !rest.is_empty() {
            let body = rest
                .strip_prefix("X(")
                .ok_or_else(|| DiagramError::Parse(format!("line {}: expected X(", lineno + 1)))?;
            let close = body
                .find(')')
                .ok_or_else(|| DiagramError::Parse(format!("line {}: missing )", lineno + 1)))?;
            let nums: Result<Vec<usize>, _> =
                body[..close].split(',').map(|s| s.trim().parse::<usize>()).collect();
            let nums = nums
                .map_err(|e| DiagramError::Parse(format!("line {}: {}", lineno + 1, e)))?;
            if nums.len() != 4 || nums.contains(&0) {
                return Err(DiagramError::Parse(format!(
                    "line {}: a crossing needs four positive arc ids",
                    lineno + 1
                )));
            }
            tuples.push([nums[0], nums[1], nums[2], nums[3]]);
            rest = body[close + 1..].trim_start();
        }
    }
    if tuples.is_empty() {
        return Err(DiagramError::Parse("no crossings".into()));
    }
    KnotDiagram::from_tuples(name, &tuples)
}

impl KnotDiagram {
    /// Builds and validates a diagram from raw PD tuples.
    pub fn from_tuples(name: Option<String>, tuples: &[[usize; 4]]) -> Result<Self, DiagramError> {
        let n = 2 * tuples.len();
        let mut count = vec![0usize; n + 1];
        for t in tuples {
            for &a in t {
                if a > n {
                    return Err(DiagramError::Validation(format!(
                        "arc {a} exceeds the arc count {n}"
                    )));
                }
                count[a] += 1;
            }
            if t.iter().collect::<BTreeSet<_>>().len() < 4 {
                return Err(DiagramError::Validation(format!(
                    "crossing {t:?} bounds a kink"
                )));
            }
        }
        if let Some(a) = (1..=n).find(|&a| count[a] != 2) {
            return Err(DiagramError::Validation(format!(
                "arc {a} is used {} times",
                count[a]
            )));
        }
        let succ = |x: usize| x % n + 1;
        let mut crossings = Vec::with_capacity(tuples.len());
        for t in tuples {
            if t[2] != succ(t[0]) {
                return Err(DiagramError::Validation(format!(
                    "under-strand of {t:?} does not follow the arc numbering"
                )));
            }
            let sign = if t[1] == succ(t[3]) {
                1
            } else if t[3] == succ(t[1]) {
                -1
            } else {
                return Err(DiagramError::Validation(format!(
                    "over-strand of {t:?} does not follow the arc numbering"
                )));
            };
            crossings.push(Crossing { sign, arcs: *t });
        }
        let mut ends = vec![[(usize::MAX, 0); 2]; n + 1];
        let mut seen = vec![0usize; n + 1];
        let mut tail = vec![(usize::MAX, 0); n + 1];
        let mut head = vec![(usize::MAX, 0); n + 1];
        for (i, cr) in crossings.iter().enumerate() {
            for p in 0..4 {
                let a = cr.arcs[p];
                ends[a][seen[a]] = (i, p);
                seen[a] += 1;
                let l = pos_label(cr.sign, p);
                let outgoing = l == C || (l == D && cr.sign > 0) || (l == B && cr.sign < 0);
                let slot = if outgoing { &mut tail[a] } else { &mut head[a] };
                if slot.0 != usize::MAX {
                    return Err(DiagramError::Validation(format!(
                        "arc {a} is inconsistently oriented"
                    )));
                }
                *slot = (i, p);
            }
        }
        let mut d = KnotDiagram {
            name,
            crossings,
            arc_count: n,
            ends,
            tail,
            head,
            face: Vec::new(),
            face_count: 0,
        };
        let mut visited = vec![false; n + 1];
        let mut a = 1;
        let mut steps = 0;
        while !visited[a] {
            visited[a] = true;
            steps += 1;
            let (i, p) = d.head[a];
            a = d.crossings[i].arcs[(p + 2) % 4];
        }
        if steps != n {
            return Err(DiagramError::Validation(format!(
                "diagram has more than one component ({steps} of {n} arcs reached)"
            )));
        }
        d.trace_faces();
        if d.face_count != d.crossings.len() + 2 {
            return Err(DiagramError::Validation(format!(
                "cyclic orders are not planar ({} faces for {} crossings)",
                d.face_count,
                d.crossings.len()
            )));
        }
        Ok(d)
    }

    fn trace_faces(&mut self) {
        let c = self.crossings.len();
        let mut face = vec![[usize::MAX; 4]; c];
        let mut fid = 0;
        for i in 0..c {
            for p in 0..4 {
                if face[i][p] != usize::MAX {
                    continue;
                }
                let mut cur = (i, p);
                while face[cur.0][cur.1] == usize::MAX {
                    face[cur.0][cur.1] = fid;
                    cur = self.other_end(cur.0, (cur.1 + 1) % 4);
                }
                fid += 1;
            }
        }
        self.face = face;
        self.face_count = fid;
    }

    /// Number of crossings.
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Number of faces of the diagram in the plane.
    pub fn face_count(&self) -> usize {
        self.face_count
    }

    /// Face id of the corner lying counterclockwise after PD position `p`.
    pub fn face(&self, i: usize, p: usize) -> usize {
        self.face[i][p % 4]
    }

    /// The other endpoint of the arc leaving crossing `i` at position `p`.
    pub fn other_end(&self, i: usize, p: usize) -> (usize, usize) {
        let a = self.crossings[i].arcs[p];
        let e = self.ends[a];
        if e[0] == (i, p) {
            e[1]
        } else {
            e[0]
        }
    }

    /// Crossing and position where arc `a` starts.
    pub fn tail(&self, a: usize) -> (usize, usize) {
        self.tail[a]
    }

    /// Crossing and position where arc `a` ends.
    pub fn head(&self, a: usize) -> (usize, usize) {
        self.head[a]
    }

    /// Whether the strand through position `p` of crossing `i` passes over.
    pub fn is_over(&self, i: usize, p: usize) -> bool {
        let l = pos_label(self.crossings[i].sign, p);
        l == A || l == C
    }

    /// Label of the arm at position `p` of crossing `i`.
    pub fn label(&self, i: usize, p: usize) -> usize {
        pos_label(self.crossings[i].sign, p)
    }

    /// Position of the arm labelled `l` at crossing `i`.
    pub fn pos(&self, i: usize, l: usize) -> usize {
        label_pos(self.crossings[i].sign, l)
    }

    /// Face of the corner starting at label `l` of crossing `i`.
    pub fn corner_face(&self, i: usize, l: usize) -> usize {
        self.face[i][self.pos(i, l)]
    }

    /// Canonical PD text; parsing it again yields an equal diagram.
    pub fn to_pd_string(&self) -> String {
        let mut s = String::new();
        if let Some(n) = &self.name {
            let _ = writeln!(s, "knot {n}");
        }
        let toks: Vec<String> = self
            .crossings
            .iter()
            .map(|c| format!("X({},{},{},{})", c.arcs[0], c.arcs[1], c.arcs[2], c.arcs[3]))
            .collect();
        s.push_str(&toks.join(" "));
        s.push('\n');
        s
    }

    /// Mirror image: every crossing changes sign.
    pub fn mirror(&self) -> KnotDiagram {
        let tuples: Vec<[usize; 4]> = self
            .crossings
            .iter()
            .map(|c| [c.arcs[0], c.arcs[3], c.arcs[2], c.arcs[1]])
            .collect();
        KnotDiagram::from_tuples(self.name.clone(), &tuples).expect("mirror of a valid diagram")
    }
}

/// A side of `G`: a chain of arcs between two surviving arms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Side {
    /// Surviving arms `(crossing, position)` at both ends.
    pub ends: [(usize, usize); 2],
    /// Arcs of the diagram merged into this side.
    pub arcs: Vec<usize>,
    /// The two regions on either side.
    pub regions: [usize; 2],
    pub contributing: bool,
}

/// A region of `G`: a union of diagram faces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub faces: Vec<usize>,
    /// Sorted arc ids on the boundary of the merged faces.
    pub arcs: Vec<usize>,
}

/// Role of a region in the variable assignment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionKind {
    Unbounded,
    Unit,
    Variable(usize),
}

/// Value assigned to a side or region: a constant or a variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Slot {
    Zero,
    One,
    Var(usize),
}

/// Variable assignment for sides (`z`) and regions (`w`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variables {
    pub side: Vec<Slot>,
    pub region: Vec<Slot>,
    pub g: usize,
    pub m: usize,
    pub unit_region: usize,
}

/// Valence and role of a surviving crossing of `G`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Vertex {
    pub crossing: usize,
    pub sign: i8,
    pub valence: u8,
    /// Label of the arm removed at an endpoint of `I` or `J`.
    pub removed_arm: Option<usize>,
    /// Corner regions indexed by starting label.
    pub corner_region: [usize; 4],
}

/// Kinds of local patterns excluded by the diagram assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ViolationKind {
    Composite,
    Reducible,
    CoincidentEndpoints,
}

/// One offending pattern found by [`check_assumptions`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub crossing: usize,
    pub detail: String,
}

/// Outcome of [`check_assumptions`]; empty `violations` means accepted.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub violations: Vec<Violation>,
    pub notes: Vec<String>,
}

impl AssumptionReport {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The reduced graph `G` of a (1,1)-tangle.
#[derive(Debug, Clone)]
pub struct TangleGraph {
    pub diagram: KnotDiagram,
    pub split: usize,
    /// Endpoint of `I` (last under-crossing) and the position of its removed arm.
    pub i_endpoint: (usize, usize),
    /// Endpoint of `J` (first over-crossing) and the position of its removed arm.
    pub j_endpoint: (usize, usize),
    pub i_arcs: Vec<usize>,
    pub j_arcs: Vec<usize>,
    pub removed: Vec<usize>,
    pub vertices: Vec<Vertex>,
    pub sides: Vec<Side>,
    pub regions: Vec<Region>,
    pub unbounded: usize,
    pub unit: usize,
    vertex_index: Vec<Option<usize>>,
    side_of_arm: Vec<[Option<usize>; 4]>,
    region_of_face: Vec<usize>,
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Splits side `split` open and removes the extended `I ∪ J`.
pub fn open_tangle(d: &KnotDiagram, split: usize) -> Result<TangleGraph, DiagramError> {
    if split == 0 || split > d.arc_count {
        return Err(DiagramError::Validation(format!("no arc {split}")));
    }
    let (ti, tp) = d.tail(split);
    let (hi, hp) = d.head(split);
    if !d.is_over(ti, tp) {
        return Err(DiagramError::AssumptionViolation(format!(
            "split {split}: I is not in an over-bridge"
        )));
    }
    if d.is_over(hi, hp) {
        return Err(DiagramError::AssumptionViolation(format!(
            "split {split}: J is not in an under-bridge"
        )));
    }
    let mut j_arcs = vec![split];
    let mut removed = BTreeSet::new();
    let mut cur = (hi, hp);
    let j_endpoint = loop {
        let (i, p) = cur;
        if d.is_over(i, p) {
            break (i, p);
        }
        removed.insert(i);
        let a = d.crossings[i].arcs[(p + 2) % 4];
        j_arcs.push(a);
        cur = d.head(a);
        if j_arcs.len() > d.arc_count {
            return Err(DiagramError::AssumptionViolation("J never reaches an over-crossing".into()));
        }
    };
    let mut i_arcs = vec![split];
    let mut cur = (ti, tp);
    let i_endpoint = loop {
        let (i, p) = cur;
        if !d.is_over(i, p) {
            break (i, p);
        }
        removed.insert(i);
        let a = d.crossings[i].arcs[(p + 2) % 4];
        i_arcs.push(a);
        cur = d.tail(a);
        if i_arcs.len() > d.arc_count {
            return Err(DiagramError::AssumptionViolation("I never reaches an under-crossing".into()));
        }
    };
    if i_arcs[1..].iter().any(|a| j_arcs[1..].contains(a)) {
        return Err(DiagramError::AssumptionViolation(format!(
            "split {split}: I and J overlap"
        )));
    }
    if i_endpoint.0 == j_endpoint.0 {
        return Err(DiagramError::EndpointClash(split));
    }
    if removed.contains(&i_endpoint.0) || removed.contains(&j_endpoint.0) {
        return Err(DiagramError::AssumptionViolation(format!(
            "split {split}: an endpoint of I or J is a removed crossing"
        )));
    }

    let mut dsu = Dsu::new(d.face_count);
    for &a in i_arcs.iter().chain(j_arcs.iter()) {
        let (i, p) = d.tail(a);
        dsu.union(d.face(i, (p + 3) % 4), d.face(i, p));
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_group = vec![usize::MAX; d.face_count];
    for f in 0..d.face_count {
        let r = dsu.find(f);
        if root_group[r] == usize::MAX {
            root_group[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_group[r]].push(f);
    }
    let mut face_arcs = vec![BTreeSet::new(); d.face_count];
    for (i, cr) in d.crossings.iter().enumerate() {
        for p in 0..4 {
            face_arcs[d.face(i, p)].insert(cr.arcs[(p + 1) % 4]);
        }
    }
    let mut regions: Vec<Region> = groups
        .into_iter()
        .map(|faces| {
            let arcs: BTreeSet<usize> = faces.iter().flat_map(|&f| face_arcs[f].iter().copied()).collect();
            Region { faces, arcs: arcs.into_iter().collect() }
        })
        .collect();
    regions.sort_by(|x, y| x.arcs.cmp(&y.arcs).then(x.faces.cmp(&y.faces)));
    let mut region_of_face = vec![0; d.face_count];
    for (r, reg) in regions.iter().enumerate() {
        for &f in &reg.faces {
            region_of_face[f] = r;
        }
    }
    let unbounded = region_of_face[d.face(ti, tp)];

    let removed: Vec<usize> = removed.into_iter().collect();
    let dead_arm = |i: usize, p: usize| (i, p) == i_endpoint || (i, p) == j_endpoint;
    let alive: Vec<usize> = (0..d.crossing_count()).filter(|i| !removed.contains(i)).collect();
    let mut sides: Vec<Side> = Vec::new();
    let mut side_of_arm = vec![[None; 4]; d.crossing_count()];
    for &v in &alive {
        for p in 0..4 {
            if dead_arm(v, p) || side_of_arm[v][p].is_some() {
                continue;
            }
            let mut arcs = vec![d.crossings[v].arcs[p]];
            let mut cur = d.other_end(v, p);
            while removed.contains(&cur.0) {
                let q = (cur.1 + 2) % 4;
                arcs.push(d.crossings[cur.0].arcs[q]);
                cur = d.other_end(cur.0, q);
            }
            let regs = [
                region_of_face[d.face(v, (p + 3) % 4)],
                region_of_face[d.face(v, p)],
            ];
            let id = sides.len();
            side_of_arm[v][p] = Some(id);
            side_of_arm[cur.0][cur.1] = Some(id);
            arcs.sort_unstable();
            sides.push(Side {
                ends: [(v, p), cur],
                arcs,
                regions: regs,
                contributing: !regs.contains(&unbounded),
            });
        }
    }
    let mut order: Vec<usize> = (0..sides.len()).collect();
    order.sort_by(|&x, &y| sides[x].arcs.cmp(&sides[y].arcs));
    let mut rank = vec![0; sides.len()];
    for (k, &s) in order.iter().enumerate() {
        rank[s] = k;
    }
    let sides: Vec<Side> = order.iter().map(|&s| sides[s].clone()).collect();
    for row in side_of_arm.iter_mut() {
        for e in row.iter_mut() {
            *e = e.map(|s| rank[s]);
        }
    }

    if alive.len() as i64 - sides.len() as i64 + regions.len() as i64 != 2 {
        return Err(DiagramError::Validation(format!(
            "reduced graph violates the Euler relation ({} - {} + {})",
            alive.len(),
            sides.len(),
            regions.len()
        )));
    }

    let mut vertex_index = vec![None; d.crossing_count()];
    let vertices: Vec<Vertex> = alive
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            vertex_index[v] = Some(k);
            let sign = d.crossings[v].sign;
            let removed_arm = if v == i_endpoint.0 {
                Some(pos_label(sign, i_endpoint.1))
            } else if v == j_endpoint.0 {
                Some(pos_label(sign, j_endpoint.1))
            } else {
                None
            };
            let mut corner_region = [0; 4];
            for (l, cr) in corner_region.iter_mut().enumerate() {
                *cr = region_of_face[d.corner_face(v, l)];
            }
            Vertex {
                crossing: v,
                sign,
                valence: if removed_arm.is_some() { 3 } else { 4 },
                removed_arm,
                corner_region,
            }
        })
        .collect();

    let mut g = TangleGraph {
        diagram: d.clone(),
        split,
        i_endpoint,
        j_endpoint,
        i_arcs,
        j_arcs,
        removed,
        vertices,
        sides,
        regions,
        unbounded,
        unit: 0,
        vertex_index,
        side_of_arm,
        region_of_face,
    };
    g.unit = g.default_unit_region();
    Ok(g)
}

impl TangleGraph {
    /// Bounded region with the most incident surviving crossings; ties go to
    /// the smallest region index.
    pub fn default_unit_region(&self) -> usize {
        let mut best = (0usize, usize::MAX);
        for r in 0..self.regions.len() {
            if r == self.unbounded {
                continue;
            }
            let cnt = self.vertices.iter().filter(|v| v.corner_region.contains(&r)).count();
            if best.1 == usize::MAX || cnt > best.0 {
                best = (cnt, r);
            }
        }
        best.1
    }

    /// Vertex record of a surviving crossing.
    pub fn vertex(&self, crossing: usize) -> Option<&Vertex> {
        self.vertex_index[crossing].map(|k| &self.vertices[k])
    }

    /// Side attached to the arm labelled `l` at crossing `v`, if it survives.
    pub fn arm_side(&self, v: usize, l: usize) -> Option<usize> {
        let p = self.diagram.pos(v, l);
        self.side_of_arm[v][p]
    }

    /// Region containing diagram face `f`.
    pub fn region_of_face(&self, f: usize) -> usize {
        self.region_of_face[f]
    }

    /// Whether the corner starting at label `l` of vertex `v` carries a
    /// surviving tetrahedron of the four-term subdivision.
    pub fn corner_alive(&self, v: &Vertex, l: usize) -> bool {
        if v.corner_region[l] == self.unbounded {
            return false;
        }
        match v.removed_arm {
            Some(dl) => l != (dl + 3) % 4 && l != dl,
            None => true,
        }
    }

    /// Corner labels whose horizontal edge is collapsed at vertex `v`.
    pub fn collapsed_corners(&self, v: &Vertex) -> Vec<usize> {
        (0..4).filter(|&l| !self.corner_alive(v, l)).collect()
    }

    /// Kind of each region under the current unit choice.
    pub fn region_kind(&self, r: usize) -> RegionKind {
        if r == self.unbounded {
            RegionKind::Unbounded
        } else if r == self.unit {
            RegionKind::Unit
        } else {
            let idx = (0..r).filter(|&q| q != self.unbounded && q != self.unit).count();
            RegionKind::Variable(idx)
        }
    }

    /// Returns a copy of `self` with a different unit region.
    pub fn with_unit_region(&self, unit: usize) -> Result<TangleGraph, DiagramError> {
        if unit >= self.regions.len() || unit == self.unbounded {
            return Err(DiagramError::InvalidRegion(unit));
        }
        let mut g = self.clone();
        g.unit = unit;
        Ok(g)
    }
}

/// Reports the local patterns excluded by the diagram assumptions.
pub fn check_assumptions(g: &TangleGraph) -> AssumptionReport {
    let mut violations = Vec::new();
    for v in &g.vertices {
        let regs = v.corner_region;
        match v.removed_arm {
            Some(dl) => {
                let merged = regs[(dl + 3) % 4];
                if merged == g.unbounded {
                    violations.push(Violation {
                        kind: ViolationKind::Composite,
                        crossing: v.crossing,
                        detail: "merged corner at an endpoint lies in the unbounded region".into(),
                    });
                }
                let set: BTreeSet<usize> = [merged, regs[(dl + 1) % 4], regs[(dl + 2) % 4]].into();
                if set.len() != 3 {
                    violations.push(Violation {
                        kind: ViolationKind::Reducible,
                        crossing: v.crossing,
                        detail: "an endpoint touches one region twice".into(),
                    });
                }
            }
            None => {
                if regs.iter().filter(|&&r| r == g.unbounded).count() > 1 {
                    violations.push(Violation {
                        kind: ViolationKind::Composite,
                        crossing: v.crossing,
                        detail: "two horizontal edges collapse".into(),
                    });
                }
                let set: BTreeSet<usize> = regs.into();
                if set.len() != 4 {
                    violations.push(Violation {
                        kind: ViolationKind::Reducible,
                        crossing: v.crossing,
                        detail: "a region meets the crossing twice".into(),
                    });
                }
            }
        }
    }
    if g.i_endpoint.0 == g.j_endpoint.0 {
        violations.push(Violation {
            kind: ViolationKind::CoincidentEndpoints,
            crossing: g.i_endpoint.0,
            detail: "I and J end at the same crossing".into(),
        });
    }
    AssumptionReport {
        violations,
        notes: vec!["only local reduction patterns and endpoint distinctness are certified".into()],
    }
}

/// Tries split sides in index order and returns the first accepted graph.
pub fn auto_open(d: &KnotDiagram) -> Result<TangleGraph, DiagramError> {
    let mut reasons = Vec::new();
    for s in 1..=d.arc_count {
        match open_tangle(d, s) {
            Ok(g) => {
                let rep = check_assumptions(&g);
                if rep.accepted() {
                    return Ok(g);
                }
                reasons.push(format!("split {s}: {}", rep.violations[0].detail));
            }
            Err(e) => reasons.push(e.to_string()),
        }
    }
    Err(DiagramError::AssumptionViolation(format!(
        "no side of the diagram can be opened: {}",
        reasons.join("; ")
    )))
}

/// Numbers contributing sides as `z` variables and bounded regions other
/// than `unit_region` as `w` variables.
pub fn assign_variables(g: &TangleGraph, unit_region: usize) -> Result<Variables, DiagramError> {
    if unit_region >= g.regions.len() || unit_region == g.unbounded {
        return Err(DiagramError::InvalidRegion(unit_region));
    }
    let mut gcount = 0;
    let side = g
        .sides
        .iter()
        .map(|s| {
            if s.contributing {
                gcount += 1;
                Slot::Var(gcount - 1)
            } else {
                Slot::One
            }
        })
        .collect();
    let mut m = 0;
    let region = (0..g.regions.len())
        .map(|r| {
            if r == g.unbounded {
                Slot::Zero
            } else if r == unit_region {
                Slot::One
            } else {
                m += 1;
                Slot::Var(m - 1)
            }
        })
        .collect();
    Ok(Variables { side, region, g: gcount, m, unit_region })
}
