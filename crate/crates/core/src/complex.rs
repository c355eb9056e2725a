//! The dual intersection complex of a resolution with its weight function.
//!
//! Faces are abstract pairs `(J, copy)`, one per connected component of `E_J`.
//! A face records its facets explicitly; when a facet's index set has several
//! copies the first one is used, since the datum does not say which component
//! of `E_J'` contains a given component of `E_J`.

use crate::arith::{int, BigRat};
use crate::datum::ResolutionDatum;
use crate::error::{Error, Result};
use crate::poles::{lct_from_datum, rat_string, Outcome};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

pub const DEFAULT_COLLAPSE_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: String,
    #[serde(serialize_with = "rat_string")]
    pub weight: BigRat,
    pub exceptional: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Face {
    /// Sorted vertex indices.
    pub verts: Vec<usize>,
    pub copy: u32,
    /// `facets[i]` is the face opposite `verts[i]`; empty for vertices.
    pub facets: Vec<usize>,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.verts.len() - 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaComplex {
    pub vertices: Vec<Vertex>,
    /// Vertices first, then by dimension, vertex set and copy.
    pub faces: Vec<Face>,
    #[serde(skip)]
    cofaces: Vec<Vec<usize>>,
}

/// A set of faces closed under taking facets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subcomplex {
    pub faces: BTreeSet<usize>,
    pub tag: String,
}

pub fn build_complex(d: &ResolutionDatum) -> Result<DeltaComplex> {
    d.ensure_valid()?;
    let comps: Vec<_> = d.components.iter().filter(|c| c.meets_fiber).collect();
    let index: BTreeMap<&str, usize> = comps.iter().enumerate().map(|(i, c)| (c.id.as_str(), i)).collect();
    let vertices: Vec<Vertex> = comps
        .iter()
        .map(|c| Vertex { id: c.id.clone(), weight: c.weight(), exceptional: c.exceptional })
        .collect();
    let mut higher: Vec<(Vec<usize>, u32)> = Vec::new();
    for s in d.strata.iter().filter(|s| s.j.len() >= 2) {
        let Some(mut verts) = s.j.iter().map(|id| index.get(id.as_str()).copied()).collect::<Option<Vec<_>>>() else {
            continue;
        };
        verts.sort_unstable();
        for c in 0..s.connected_components {
            higher.push((verts.clone(), c));
        }
    }
    higher.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
    let mut faces: Vec<Face> = (0..vertices.len()).map(|i| Face { verts: vec![i], copy: 0, facets: vec![] }).collect();
    let mut first_copy: BTreeMap<Vec<usize>, usize> = (0..vertices.len()).map(|i| (vec![i], i)).collect();
    for (verts, copy) in higher {
        let mut facets = Vec::with_capacity(verts.len());
        for i in 0..verts.len() {
            let mut sub = verts.clone();
            sub.remove(i);
            let f = *first_copy.get(&sub).ok_or_else(|| {
                let names: Vec<&str> = verts.iter().map(|v| vertices[*v].id.as_str()).collect();
                Error::Complex(format!("face {{{}}} has a missing facet", names.join(",")))
            })?;
            facets.push(f);
        }
        first_copy.entry(verts.clone()).or_insert(faces.len());
        faces.push(Face { verts, copy, facets });
    }
    let mut cofaces = vec![Vec::new(); faces.len()];
    for (g, face) in faces.iter().enumerate() {
        for f in &face.facets {
            cofaces[*f].push(g);
        }
    }
    Ok(DeltaComplex { vertices, faces, cofaces })
}

impl DeltaComplex {
    pub fn dim(&self) -> usize {
        self.faces.iter().map(Face::dim).max().unwrap_or(0)
    }

    pub fn count_faces(&self, dim: usize) -> usize {
        self.faces.iter().filter(|f| f.dim() == dim).count()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn face_name(&self, f: usize) -> String {
        let face = &self.faces[f];
        let ids: Vec<&str> = face.verts.iter().map(|v| self.vertices[*v].id.as_str()).collect();
        if face.copy == 0 {
            format!("{{{}}}", ids.join(","))
        } else {
            format!("{{{}}}#{}", ids.join(","), face.copy)
        }
    }

    pub fn min_weight(&self) -> Option<BigRat> {
        self.vertices.iter().map(|v| v.weight.clone()).min()
    }

    fn face_weights(&self, f: usize) -> impl Iterator<Item = &BigRat> {
        self.faces[f].verts.iter().map(|v| &self.vertices[*v].weight)
    }

    /// Full subcomplex on the vertices satisfying `keep`.
    fn spanned(&self, tag: String, keep: impl Fn(&Vertex) -> bool) -> Subcomplex {
        let faces = (0..self.faces.len())
            .filter(|f| self.faces[*f].verts.iter().all(|v| keep(&self.vertices[*v])))
            .collect();
        Subcomplex { faces, tag }
    }

    pub fn full(&self) -> Subcomplex {
        self.spanned("full".into(), |_| true)
    }

    pub fn exc(&self) -> Subcomplex {
        self.spanned("exc".into(), |v| v.exceptional)
    }

    pub fn is_subcomplex(&self, s: &BTreeSet<usize>) -> bool {
        s.iter().all(|f| self.faces.get(*f).is_some_and(|face| face.facets.iter().all(|g| s.contains(g))))
    }

    /// Maximal faces of the whole complex.
    pub fn maximal_faces(&self) -> Vec<usize> {
        (0..self.faces.len()).filter(|f| self.cofaces[*f].is_empty()).collect()
    }

    /// DOT rendering of the 1-skeleton with the minimum locus highlighted.
    pub fn to_dot(&self) -> String {
        let min = min_locus(self);
        let mut s = String::from("graph dual {\n  node [shape=circle];\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let color = if min.faces.contains(&i) { ", style=filled, fillcolor=\"#f4a582\"" } else { "" };
            let shape = if v.exceptional { "" } else { ", shape=box" };
            let _ = writeln!(s, "  \"{}\" [label=\"{} (ν/N = {})\"{shape}{color}];", v.id, v.id, v.weight);
        }
        for (i, f) in self.faces.iter().enumerate().filter(|(_, f)| f.dim() == 1) {
            let color = if min.faces.contains(&i) { " [color=\"#ca0020\", penwidth=2]" } else { "" };
            let _ = writeln!(s, "  \"{}\" -- \"{}\"{color};", self.vertices[f.verts[0]].id, self.vertices[f.verts[1]].id);
        }
        for i in (0..self.faces.len()).filter(|i| self.faces[*i].dim() >= 2) {
            let _ = writeln!(s, "  // face {}", self.face_name(i));
        }
        s.push_str("}\n");
        s
    }
}

/// Value of the weight function at a point given in barycentric coordinates
/// on the face spanned by `ids`.
pub fn weight_at(c: &DeltaComplex, ids: &[&str], coords: &[BigRat]) -> Result<BigRat> {
    if ids.len() != coords.len() || ids.is_empty() {
        return Err(Error::Complex("one barycentric coordinate per vertex is needed".into()));
    }
    if coords.iter().any(|x| x.is_negative()) || coords.iter().sum::<BigRat>() != BigRat::one() {
        return Err(Error::Complex("barycentric coordinates must be non-negative with sum 1".into()));
    }
    let idx = ids
        .iter()
        .map(|id| c.vertex_index(id).ok_or_else(|| Error::Complex(format!("unknown vertex {id}"))))
        .collect::<Result<Vec<_>>>()?;
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != idx.len() || !c.faces.iter().any(|f| f.verts == sorted) {
        return Err(Error::Complex(format!("no face spanned by {}", ids.join(","))));
    }
    Ok(idx.iter().zip(coords).map(|(i, x)| &c.vertices[*i].weight * x).sum())
}

/// Union of the closed faces on which the weight is identically minimal.
pub fn min_locus(c: &DeltaComplex) -> Subcomplex {
    let Some(m) = c.min_weight() else {
        return Subcomplex { faces: BTreeSet::new(), tag: "min".into() };
    };
    c.spanned("min".into(), |v| v.weight == m)
}

pub fn sublevel(c: &DeltaComplex, w: &BigRat, exc_only: bool) -> Subcomplex {
    let tag = format!("{}<={w}", if exc_only { "exc" } else { "full" });
    c.spanned(tag, |v| v.weight <= *w && (!exc_only || v.exceptional))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseStep {
    pub face: usize,
    pub coface: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CollapseOutcome {
    Found(Vec<CollapseStep>),
    /// No sequence found. Not a proof that none exists when the budget ran out.
    NotFound { budget_exhausted: bool },
}

impl CollapseOutcome {
    pub fn found(&self) -> Option<&[CollapseStep]> {
        match self {
            CollapseOutcome::Found(s) => Some(s),
            CollapseOutcome::NotFound { .. } => None,
        }
    }
}

fn free_pairs(c: &DeltaComplex, cur: &BTreeSet<usize>, target: &BTreeSet<usize>) -> Vec<CollapseStep> {
    let mut moves = Vec::new();
    for f in cur.iter().copied().filter(|f| !target.contains(f)) {
        let mut up = c.cofaces[f].iter().filter(|g| cur.contains(g));
        let (Some(&g), None) = (up.next(), up.next()) else {
            continue;
        };
        let incidences = c.faces[g].facets.iter().filter(|x| **x == f).count();
        if target.contains(&g) || incidences != 1 || c.cofaces[g].iter().any(|h| cur.contains(h)) {
            continue;
        }
        moves.push(CollapseStep { face: f, coface: g });
    }
    let key = |m: &CollapseStep| {
        let face = &c.faces[m.face];
        (std::cmp::Reverse(face.dim()), face.verts.clone(), face.copy)
    };
    moves.sort_by_key(key);
    moves
}

/// Depth-first search for a sequence of elementary collapses from `sub` to
/// `target`, trying free faces in a fixed order and backtracking on dead ends.
pub fn collapse_search(c: &DeltaComplex, sub: &Subcomplex, target: &Subcomplex, budget: usize) -> Result<CollapseOutcome> {
    if !c.is_subcomplex(&sub.faces) || !c.is_subcomplex(&target.faces) {
        return Err(Error::Complex("collapse endpoints must be subcomplexes".into()));
    }
    if !target.faces.is_subset(&sub.faces) {
        return Err(Error::Complex(format!("{} is not contained in {}", target.tag, sub.tag)));
    }
    let mut seen: HashSet<BTreeSet<usize>> = HashSet::new();
    let mut path: Vec<CollapseStep> = Vec::new();
    // each frame: the state reached and the moves still to try from it
    let mut stack: Vec<(BTreeSet<usize>, Vec<CollapseStep>)> = Vec::new();
    let start = sub.faces.clone();
    let mut moves = free_pairs(c, &start, &target.faces);
    moves.reverse();
    stack.push((start, moves));
    let mut nodes = 0usize;
    while let Some((cur, moves)) = stack.last_mut() {
        if *cur == target.faces {
            return Ok(CollapseOutcome::Found(path));
        }
        let Some(m) = moves.pop() else {
            stack.pop();
            path.pop();
            continue;
        };
        let mut next = cur.clone();
        next.remove(&m.face);
        next.remove(&m.coface);
        if !seen.insert(next.clone()) {
            continue;
        }
        nodes += 1;
        if nodes > budget {
            return Ok(CollapseOutcome::NotFound { budget_exhausted: true });
        }
        let mut nm = free_pairs(c, &next, &target.faces);
        nm.reverse();
        path.push(m);
        stack.push((next, nm));
    }
    Ok(CollapseOutcome::NotFound { budget_exhausted: false })
}

/// Applies a collapse sequence, checking that every step removes a free pair.
pub fn replay(c: &DeltaComplex, sub: &Subcomplex, steps: &[CollapseStep]) -> Result<BTreeSet<usize>> {
    let mut cur = sub.faces.clone();
    for s in steps {
        let ok = cur.contains(&s.face)
            && cur.contains(&s.coface)
            && c.cofaces[s.face].iter().filter(|g| cur.contains(g)).count() == 1
            && c.faces[s.coface].facets.contains(&s.face)
            && !c.cofaces[s.coface].iter().any(|h| cur.contains(h));
        if !ok {
            return Err(Error::Complex(format!(
                "{} is not a free face of {}",
                c.face_name(s.face),
                c.face_name(s.coface)
            )));
        }
        cur.remove(&s.face);
        cur.remove(&s.coface);
    }
    Ok(cur)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub faces: usize,
    pub euler: i64,
    pub b0: usize,
    pub b1: usize,
}

fn rank(mut rows: Vec<Vec<BigRat>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|i| !rows[*i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r][col].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = &rows[i][col] / &pivot;
                for j in col..ncols {
                    let delta = &rows[r][j] * &factor;
                    rows[i][j] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}

/// Boundary matrix from `dim`-faces to `(dim-1)`-faces of a subcomplex.
fn boundary_rank(c: &DeltaComplex, s: &BTreeSet<usize>, dim: usize) -> usize {
    let lower: Vec<usize> = s.iter().copied().filter(|f| c.faces[*f].dim() == dim - 1).collect();
    let pos: BTreeMap<usize, usize> = lower.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let rows: Vec<Vec<BigRat>> = s
        .iter()
        .filter(|f| c.faces[**f].dim() == dim)
        .map(|f| {
            let mut row = vec![BigRat::zero(); lower.len()];
            for (i, g) in c.faces[*f].facets.iter().enumerate() {
                let sign = if i % 2 == 0 { int(1) } else { int(-1) };
                row[pos[g]] += sign;
            }
            row
        })
        .collect();
    if rows.is_empty() || lower.is_empty() {
        0
    } else {
        rank(rows)
    }
}

/// Homotopy invariants used as necessary conditions for a collapse.
pub fn invariants(c: &DeltaComplex, s: &BTreeSet<usize>) -> Invariants {
    let count = |d: usize| s.iter().filter(|f| c.faces[**f].dim() == d).count();
    let euler = (0..=c.dim()).map(|d| if d % 2 == 0 { count(d) as i64 } else { -(count(d) as i64) }).sum();
    let r1 = boundary_rank(c, s, 1);
    let r2 = if c.dim() >= 2 { boundary_rank(c, s, 2) } else { 0 };
    Invariants { faces: s.len(), euler, b0: count(0) - r1, b1: count(1) - r1 - r2 }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxFaceReport {
    pub outcome: Outcome,
    /// Maximal faces with constant weight different from the minimum.
    pub offending: Vec<String>,
}

pub fn check_max_face(c: &DeltaComplex, lct: &BigRat) -> MaxFaceReport {
    let mut offending = Vec::new();
    for f in c.maximal_faces() {
        let mut w = c.face_weights(f);
        let first = w.next().expect("faces have vertices").clone();
        if w.all(|x| *x == first) && first != *lct {
            offending.push(format!("{} has constant weight {first}", c.face_name(f)));
        }
    }
    let outcome = if offending.is_empty() { Outcome::Pass } else { Outcome::Fail };
    MaxFaceReport { outcome, offending }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdCheck {
    #[serde(serialize_with = "rat_string")]
    pub w: BigRat,
    pub collapse_steps: Option<usize>,
    pub invariants: Invariants,
    pub invariants_match: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseReport {
    pub outcome: Outcome,
    /// `true` when lct = 1 and the full complex is used.
    pub log_canonical: bool,
    pub min_locus: Invariants,
    pub thresholds: Vec<ThresholdCheck>,
    /// A single sequence collapsing every sublevel complex at once was found.
    pub simultaneous: bool,
}

/// Checks that every sublevel complex collapses onto the minimum locus.
///
/// A threshold passes when an explicit collapse is found. If none is found but
/// the homotopy invariants agree the result is inconclusive; differing
/// invariants rule out any collapse and fail the check.
pub fn check_collapse_theorem(c: &DeltaComplex, d: &ResolutionDatum, budget: usize) -> Result<CollapseReport> {
    if !d.is_reduced() {
        return Err(Error::Precondition("div(f) is not reduced: a strict transform component has N > 1".into()));
    }
    let lct = lct_from_datum(d)?;
    let log_canonical = lct.is_one();
    let exc_only = !log_canonical;
    let base = if exc_only { c.exc() } else { c.full() };
    let min = min_locus(c);
    if !min.faces.is_subset(&base.faces) {
        return Err(Error::Complex("minimum locus is not contained in the base complex".into()));
    }
    let min_inv = invariants(c, &min.faces);
    let mut ws: Vec<BigRat> = base
        .faces
        .iter()
        .filter(|f| c.faces[**f].dim() == 0)
        .map(|f| c.vertices[c.faces[*f].verts[0]].weight.clone())
        .filter(|w| *w >= lct)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if ws.is_empty() {
        ws.push(lct.clone());
    }

    let mut thresholds = Vec::new();
    let mut levels = vec![min.clone()];
    for w in &ws {
        let s = sublevel(c, w, exc_only);
        let inv = invariants(c, &s.faces);
        let invariants_match = (inv.euler, inv.b0, inv.b1) == (min_inv.euler, min_inv.b0, min_inv.b1);
        let steps = collapse_search(c, &s, &min, budget)?.found().map(<[_]>::len);
        thresholds.push(ThresholdCheck { w: w.clone(), collapse_steps: steps, invariants_match, invariants: inv });
        levels.push(s);
    }
    // collapsing each level onto the one below and concatenating, top level
    // first, restricts to a collapse of every lower level
    let mut simultaneous = true;
    for pair in levels.windows(2) {
        if collapse_search(c, &pair[1], &pair[0], budget)?.found().is_none() {
            simultaneous = false;
            break;
        }
    }
    let outcome = if thresholds.iter().any(|t| !t.invariants_match) {
        Outcome::Fail
    } else if thresholds.iter().all(|t| t.collapse_steps.is_some()) {
        Outcome::Pass
    } else {
        Outcome::Inconclusive
    };
    Ok(CollapseReport { outcome, log_canonical, min_locus: min_inv, thresholds, simultaneous })
}
