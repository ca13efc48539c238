//! The product-of-two-Tate-curves example family: periodic regular
//! triangulations of the square torus, an intersection engine for triple
//! products of vertex divisors, α-numbers through a refinement covering,
//! the dominant-term valuation of the Weierstrass x-function, and a builder
//! for the full skeleton of the pair together with `F = -log|x₁ - x₂|`.
//!
//! All triple intersection numbers reduce to transversal triangle counts by
//! two linear relations: the sum of all vertex divisors is principal, and
//! the pull-back of a circle-factor vertex divisor is the sum of the vertex
//! divisors in its fiber. The second relation needs the fiber triangulation
//! to have no multiple edges, which is why values on the coarse square
//! triangulation are computed on a refinement and pushed down.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::balance::{from_multiplicities, PLFunction};
use crate::rat::Rat;
use crate::skeleton::{
    build_from_simplicial, AlphaSpec, AttachmentSpec, GlueSpec, SimplexSpec, SimplicialData,
    SkeletonError, WeakTropicalComplex,
};

/// A grid point of `(1/m)Z²`, stored in grid units.
pub type GridPt = (i64, i64);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    NotVertexDetermined,
    IrreducibleTriple,
    NotAnEdge(String),
    NotARefinement,
    LiftInconsistency(String),
    UnsupportedInstance(String),
    OutOfRange(String),
    Skeleton(SkeletonError),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::NotVertexDetermined => {
                write!(
                    f,
                    "triangulation is not determined by vertex sets; refine first"
                )
            }
            EngineError::IrreducibleTriple => {
                write!(f, "no coordinate projection separates the vertices")
            }
            EngineError::NotAnEdge(e) => write!(f, "{e} is not an edge of the triangulation"),
            EngineError::NotARefinement => {
                write!(f, "the fine triangulation does not refine the coarse one")
            }
            EngineError::LiftInconsistency(e) => write!(f, "lifts of edge {e} disagree"),
            EngineError::UnsupportedInstance(m) => write!(f, "unsupported instance: {m}"),
            EngineError::OutOfRange(m) => write!(f, "out of range: {m}"),
            EngineError::Skeleton(e) => write!(f, "{e}"),
        }
    }
}

impl From<SkeletonError> for EngineError {
    fn from(e: SkeletonError) -> Self {
        EngineError::Skeleton(e)
    }
}

/// A Λ-periodic regular triangulation of `R²/Z²` with vertices on the
/// `(1/m)`-grid, each small square cut by one diagonal. Triangles are kept
/// as geometric representatives with the lexicographically smallest corner
/// translated into the fundamental square.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusTriangulation {
    m: i64,
    triangles: Vec<[GridPt; 3]>,
}

fn canonicalize(corners: &mut [GridPt], m: i64) {
    let minx = corners.iter().map(|c| c.0).min().unwrap();
    let miny = corners.iter().map(|c| c.1).min().unwrap();
    let dx = m * minx.div_euclid(m);
    let dy = m * miny.div_euclid(m);
    for c in corners.iter_mut() {
        c.0 -= dx;
        c.1 -= dy;
    }
    corners.sort_unstable();
}

fn reduce(p: GridPt, m: i64) -> GridPt {
    (p.0.rem_euclid(m), p.1.rem_euclid(m))
}

impl TorusTriangulation {
    /// The square triangulation with grid denominator 2: four half-unit
    /// squares per fundamental domain, the two long diagonals drawn.
    pub fn build_c() -> TorusTriangulation {
        TorusTriangulation::generate(2)
    }

    /// The pattern at grid denominator `m` (even): the small square with
    /// lower-left corner `(x, y)` carries the main diagonal when `x ≡ y`
    /// (mod 2), the antidiagonal otherwise. `build_c` is `m = 2`, and
    /// scaling by `1/k` preserves the pattern.
    fn generate(m: i64) -> TorusTriangulation {
        assert!(m >= 2 && m % 2 == 0);
        let mut triangles = Vec::new();
        for x in 0..m {
            for y in 0..m {
                let (a, b, c, d) = ((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1));
                let (t1, t2) = if (x + y) % 2 == 0 {
                    // main diagonal a - d
                    ([a, b, d], [a, c, d])
                } else {
                    // antidiagonal b - c
                    ([a, b, c], [b, c, d])
                };
                for mut t in [t1, t2] {
                    canonicalize(&mut t, m);
                    triangles.push(t);
                }
            }
        }
        triangles.sort_unstable();
        TorusTriangulation { m, triangles }
    }

    /// Scales by `1/k`: the triangulation whose image under multiplication
    /// by `k` is this one. `refine(1)` is the identity.
    pub fn refine(&self, k: i64) -> TorusTriangulation {
        assert!(k >= 1, "refinement factor must be positive");
        let m = self.m * k;
        let mut triangles = Vec::new();
        for t in &self.triangles {
            for a in 0..k {
                for b in 0..k {
                    let mut c = [
                        (t[0].0 + a * self.m, t[0].1 + b * self.m),
                        (t[1].0 + a * self.m, t[1].1 + b * self.m),
                        (t[2].0 + a * self.m, t[2].1 + b * self.m),
                    ];
                    canonicalize(&mut c, m);
                    triangles.push(c);
                }
            }
        }
        triangles.sort_unstable();
        TorusTriangulation { m, triangles }
    }

    pub fn grid_denominator(&self) -> i64 {
        self.m
    }

    /// The length `v(π) = 1/m` of every canonical simplex (with `v(q) = 1`).
    pub fn v_pi(&self) -> Rat {
        Rat::new(1, self.m)
    }

    pub fn triangles(&self) -> &[[GridPt; 3]] {
        &self.triangles
    }

    /// Quotient vertices, sorted; the index is the vertex id.
    pub fn vertices(&self) -> Vec<GridPt> {
        let mut set: BTreeSet<GridPt> = BTreeSet::new();
        for t in &self.triangles {
            for &c in t {
                set.insert(reduce(c, self.m));
            }
        }
        set.into_iter().collect()
    }

    pub fn vertex_id(&self, p: GridPt) -> Option<usize> {
        let p = reduce(p, self.m);
        self.vertices().binary_search(&p).ok()
    }

    /// Display name on the pre-identification grid: index
    /// `1 + x + (m+1) y`, prefixed `P` on the coarse square triangulation
    /// and `Q` on refinements.
    pub fn vertex_name(&self, p: GridPt) -> String {
        let (x, y) = reduce(p, self.m);
        let prefix = if self.m == 2 { "P" } else { "Q" };
        format!("{prefix}{}", 1 + x + (self.m + 1) * y)
    }

    /// Geometric quotient edges, canonicalized and sorted.
    pub fn edges(&self) -> Vec<[GridPt; 2]> {
        let mut set: BTreeSet<[GridPt; 2]> = BTreeSet::new();
        for t in &self.triangles {
            for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                let mut e = [t[i], t[j]];
                canonicalize(&mut e, self.m);
                set.insert(e);
            }
        }
        set.into_iter().collect()
    }

    /// Name of a geometric edge from the grid labels of its canonical
    /// representative.
    pub fn edge_name(&self, e: &[GridPt; 2]) -> String {
        let la = 1 + e[0].0 + (self.m + 1) * e[0].1;
        let lb = 1 + e[1].0 + (self.m + 1) * e[1].1;
        let (la, lb) = if la <= lb { (la, lb) } else { (lb, la) };
        if la <= 9 && lb <= 9 {
            format!("e{la}{lb}")
        } else {
            format!("e{la}_{lb}")
        }
    }

    pub fn triangle_name(&self, t: &[GridPt; 3]) -> String {
        let mut labels: Vec<i64> = t.iter().map(|c| 1 + c.0 + (self.m + 1) * c.1).collect();
        labels.sort_unstable();
        if labels.iter().all(|&l| l <= 9) {
            format!("t{}{}{}", labels[0], labels[1], labels[2])
        } else {
            format!("t{}_{}_{}", labels[0], labels[1], labels[2])
        }
    }

    /// The triangles adjacent to a geometric edge.
    pub fn triangles_on_edge(&self, e: &[GridPt; 2]) -> Vec<usize> {
        let mut target = *e;
        canonicalize(&mut target, self.m);
        let mut out = Vec::new();
        for (i, t) in self.triangles.iter().enumerate() {
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                let mut cand = [t[a], t[b]];
                canonicalize(&mut cand, self.m);
                if cand == target {
                    out.push(i);
                    break;
                }
            }
        }
        out
    }

    /// Whether every simplex is determined by its quotient vertex set and
    /// both circle projections are free of multiple edges (at least three
    /// subdivision points). The intersection relations are only valid then.
    pub fn is_vertex_determined(&self) -> bool {
        if self.m < 3 {
            return false; // circle factors have two vertices: double edges
        }
        let mut tri_sets = BTreeSet::new();
        for t in &self.triangles {
            let set: BTreeSet<GridPt> = t.iter().map(|&c| reduce(c, self.m)).collect();
            if set.len() != 3 || !tri_sets.insert(set) {
                return false;
            }
        }
        let mut edge_sets = BTreeSet::new();
        for e in self.edges() {
            let set: BTreeSet<GridPt> = e.iter().map(|&c| reduce(c, self.m)).collect();
            if set.len() != 2 || !edge_sets.insert(set) {
                return false;
            }
        }
        true
    }
}

/// A finite formal integer combination of vertex divisors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorExpr {
    pub coefficients: BTreeMap<usize, i64>,
}

impl DivisorExpr {
    pub fn vertex(id: usize) -> Self {
        let mut coefficients = BTreeMap::new();
        coefficients.insert(id, 1);
        DivisorExpr { coefficients }
    }

    pub fn zero() -> Self {
        DivisorExpr::default()
    }
}

/// The intersection engine: an eagerly built table of all triple products
/// of vertex divisors on a vertex-determined triangulation.
pub struct IntersectionEngine<'a> {
    triangulation: &'a TorusTriangulation,
    vertices: Vec<GridPt>,
    /// triangle quotient-vertex triples, sorted
    triangle_sets: BTreeSet<[usize; 3]>,
    edge_sets: BTreeSet<[usize; 2]>,
    table: BTreeMap<[usize; 3], Rat>,
}

impl<'a> IntersectionEngine<'a> {
    pub fn new(triangulation: &'a TorusTriangulation) -> Result<Self, EngineError> {
        if !triangulation.is_vertex_determined() {
            return Err(EngineError::NotVertexDetermined);
        }
        let vertices = triangulation.vertices();
        let vid = |p: GridPt| -> usize {
            vertices
                .binary_search(&reduce(p, triangulation.m))
                .expect("triangle corner is a vertex")
        };
        let mut triangle_sets = BTreeSet::new();
        for t in &triangulation.triangles {
            let mut ids = [vid(t[0]), vid(t[1]), vid(t[2])];
            ids.sort_unstable();
            triangle_sets.insert(ids);
        }
        let mut edge_sets = BTreeSet::new();
        for e in triangulation.edges() {
            let mut ids = [vid(e[0]), vid(e[1])];
            ids.sort_unstable();
            edge_sets.insert(ids);
        }
        let mut engine = IntersectionEngine {
            triangulation,
            vertices,
            triangle_sets,
            edge_sets,
            table: BTreeMap::new(),
        };
        engine.build_table()?;
        Ok(engine)
    }

    fn coords(&self, v: usize) -> GridPt {
        self.vertices[v]
    }

    /// Transversal product of three distinct vertex divisors:
    /// `v(π) ·` the number of triangles on that vertex set.
    fn transversal(&self, mut ids: [usize; 3]) -> Rat {
        ids.sort_unstable();
        if self.triangle_sets.contains(&ids) {
            self.triangulation.v_pi()
        } else {
            Rat::zero()
        }
    }

    /// Reduces `D_b · D_b · D_c` (`b != c`) through the fiber relation of
    /// whichever coordinate projection separates `b` from `c`.
    fn double(&self, b: usize, c: usize) -> Result<Rat, EngineError> {
        let (pb, pc) = (self.coords(b), self.coords(c));
        let axis = if pb.0 != pc.0 {
            0
        } else if pb.1 != pc.1 {
            1
        } else {
            return Err(EngineError::IrreducibleTriple);
        };
        let fiber = |p: GridPt| if axis == 0 { p.0 } else { p.1 };
        let mut sum = Rat::zero();
        for e in 0..self.vertices.len() {
            if e == b || fiber(self.coords(e)) != fiber(pb) {
                continue;
            }
            sum += &self.transversal([e, b, c]);
        }
        Ok(-sum)
    }

    /// `D_a · D_a · D_a` through the principal-divisor relation.
    fn triple_equal(&self, a: usize) -> Result<Rat, EngineError> {
        let mut sum = Rat::zero();
        for e in 0..self.vertices.len() {
            if e == a {
                continue;
            }
            sum += &self.double(a, e)?;
        }
        Ok(-sum)
    }

    fn build_table(&mut self) -> Result<(), EngineError> {
        let n = self.vertices.len();
        let mut table = BTreeMap::new();
        for a in 0..n {
            for b in a..n {
                for c in b..n {
                    let value = if a != b && b != c {
                        self.transversal([a, b, c])
                    } else if a == b && b == c {
                        self.triple_equal(a)?
                    } else if a == b {
                        self.double(a, c)?
                    } else {
                        self.double(b, a)?
                    };
                    table.insert([a, b, c], value);
                }
            }
        }
        self.table = table;
        Ok(())
    }

    /// The triple intersection number `D_a · D_b · D_c` (symmetric).
    pub fn triple(&self, a: usize, b: usize, c: usize) -> Rat {
        let mut ids = [a, b, c];
        ids.sort_unstable();
        self.table[&ids].clone()
    }

    /// `expr · T̄_{ab}`: pairing with the curve carried by the edge `{a, b}`,
    /// which unfolds to `Σ coef(c) · triple(c, a, b) / v(π)`.
    pub fn divisor_dot_edge_curve(
        &self,
        expr: &DivisorExpr,
        a: usize,
        b: usize,
    ) -> Result<Rat, EngineError> {
        let mut key = [a, b];
        key.sort_unstable();
        if !self.edge_sets.contains(&key) {
            return Err(EngineError::NotAnEdge(format!(
                "{}-{}",
                self.triangulation.vertex_name(self.coords(a)),
                self.triangulation.vertex_name(self.coords(b))
            )));
        }
        let mut sum = Rat::zero();
        for (&c, &k) in &expr.coefficients {
            sum += &(&Rat::from_int(k) * &self.triple(c, a, b));
        }
        Ok(&sum / &self.triangulation.v_pi())
    }
}

/// Top-level entry matching the engine operations on a triangulation.
pub fn triple_number(
    t: &TorusTriangulation,
    a: usize,
    b: usize,
    c: usize,
) -> Result<Rat, EngineError> {
    Ok(IntersectionEngine::new(t)?.triple(a, b, c))
}

/// α(u, e) on the coarse triangulation via a refinement: minus the sum of
/// `D'_{u'} · T̄'_{e'}` over the lifts `u'` of `u`, computed for every lift
/// `e'` of the edge and required to agree.
pub fn alpha_via_covering(
    coarse: &TorusTriangulation,
    fine: &TorusTriangulation,
    edge: &[GridPt; 2],
    u: GridPt,
) -> Result<i64, EngineError> {
    if fine.m % coarse.m != 0 {
        return Err(EngineError::NotARefinement);
    }
    let k = fine.m / coarse.m;
    if &coarse.refine(k) != fine {
        return Err(EngineError::NotARefinement);
    }
    let engine = IntersectionEngine::new(fine)?;
    let mc = coarse.m;

    // Lifts of a coarse grid point under multiplication by k: the k² fine
    // points (x + a·mc, y + b·mc).
    let lifts_of_point = |p: GridPt| -> Vec<usize> {
        let p = reduce(p, mc);
        let mut out = Vec::new();
        for a in 0..k {
            for b in 0..k {
                let q = (p.0 + a * mc, p.1 + b * mc);
                out.push(
                    engine
                        .vertices
                        .binary_search(&reduce(q, fine.m))
                        .expect("lift is a fine vertex"),
                );
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    };
    let mut expr = DivisorExpr::zero();
    for v in lifts_of_point(u) {
        expr.coefficients.insert(v, 1);
    }

    let mut value: Option<Rat> = None;
    for a in 0..k {
        for b in 0..k {
            let p = (edge[0].0 + a * mc, edge[0].1 + b * mc);
            let q = (edge[1].0 + a * mc, edge[1].1 + b * mc);
            let pa = engine
                .vertices
                .binary_search(&reduce(p, fine.m))
                .map_err(|_| EngineError::NotARefinement)?;
            let qb = engine
                .vertices
                .binary_search(&reduce(q, fine.m))
                .map_err(|_| EngineError::NotARefinement)?;
            let v = -engine.divisor_dot_edge_curve(&expr, pa, qb)?;
            match &value {
                None => value = Some(v),
                Some(prev) => {
                    if *prev != v {
                        return Err(EngineError::LiftInconsistency(coarse.edge_name(edge)));
                    }
                }
            }
        }
    }
    let v = value.expect("k >= 1 lift");
    v.to_integer()
        .and_then(|n| i64::try_from(n).ok())
        .ok_or_else(|| EngineError::LiftInconsistency(coarse.edge_name(edge)))
}

/// The valuation `-log|x(ζ)|` of the Weierstrass x-coordinate at the
/// skeleton point of the Tate curve with `-log|ζ| = t`, `v(q) = 1`: the
/// dominant Laurent term gives `min(t, 1 - t)` on `(0, 1)` and `0` at the
/// vertex.
pub fn tate_val_x(t: &Rat) -> Result<Rat, EngineError> {
    if t.is_negative() || *t >= Rat::one() {
        return Err(EngineError::OutOfRange(format!("{t} is not in [0, 1)")));
    }
    Ok(t.clone().min(&Rat::one() - t))
}

/// Note attached to the example data: the balancing identity pins the
/// retraction coefficients on the horizontal and vertical edges to -2.
pub const E2_DISCREPANCY_NOTE: &str = "retraction coefficients on e12, e23, e14, e47 are -2 \
(the x-coordinate has a double pole at the origin, and -2 is the unique value satisfying \
div(F) + tau(f) = 0 with these vertex values); a commonly quoted table lists -1 for these \
edges, which fails the balancing identity and is flagged here as a known discrepancy";

/// The edges whose retraction coefficient differs from the commonly quoted
/// value, with (derived, quoted) coefficients.
pub fn e2_discrepancy_edges() -> (Vec<&'static str>, Rat, Rat) {
    (
        vec!["e12", "e23", "e14", "e47"],
        Rat::from_int(-2),
        Rat::from_int(-1),
    )
}

/// Classifies a coarse edge by its direction: the diagonal, antidiagonal,
/// horizontal and vertical families carry the boundary components 1-4.
fn edge_label_family(e: &[GridPt; 2]) -> usize {
    let d = (e[1].0 - e[0].0, e[1].1 - e[0].1);
    match d {
        (1, 1) | (-1, -1) => 0, // diagonal: H1
        (1, -1) | (-1, 1) => 1, // antidiagonal: H2
        (1, 0) | (-1, 0) => 2,  // horizontal: H3
        (0, 1) | (0, -1) => 3,  // vertical: H4
        _ => unreachable!("edges of the square triangulation are unit steps"),
    }
}

/// Builds the skeleton of the blown-up pair over the square triangulation:
/// the bounded complex with engine-computed α-numbers on all twelve edges,
/// eight half-stripes along the boundary components, the quadrants over
/// the deep vertices, and the function `F = -log|x₁ - x₂|` (vertex values
/// from the dominant-term valuation; ray slopes 1, 1, -2, -2 on the four
/// determined components; the exceptional component is left undetermined).
pub fn build_e2_pair(
    coarse: &TorusTriangulation,
    fine: &TorusTriangulation,
) -> Result<(WeakTropicalComplex, PLFunction), EngineError> {
    if coarse != &TorusTriangulation::build_c() {
        return Err(EngineError::UnsupportedInstance(
            "the builder supports the square triangulation with grid denominator 2".into(),
        ));
    }
    if fine != &coarse.refine(2) {
        return Err(EngineError::UnsupportedInstance(
            "the builder needs the twofold refinement as covering data".into(),
        ));
    }
    let verts = coarse.vertices();
    let vertex_names: Vec<String> = verts.iter().map(|&p| coarse.vertex_name(p)).collect();
    let vid = |p: GridPt| -> usize {
        verts
            .binary_search(&reduce(p, coarse.m))
            .expect("corner is a vertex")
    };

    let simplices: Vec<SimplexSpec> = coarse
        .triangles
        .iter()
        .map(|t| SimplexSpec {
            name: coarse.triangle_name(t),
            vertices: t.iter().map(|&c| vid(c)).collect(),
            length: coarse.v_pi(),
        })
        .collect();

    // One glue per geometric edge, across its two adjacent triangles.
    let mut glue: Vec<GlueSpec> = Vec::new();
    let mut edge_cells: Vec<([GridPt; 2], String)> = Vec::new();
    for e in coarse.edges() {
        let adjacent = coarse.triangles_on_edge(&e);
        if adjacent.len() != 2 {
            return Err(EngineError::UnsupportedInstance(format!(
                "edge {} has {} adjacent triangles",
                coarse.edge_name(&e),
                adjacent.len()
            )));
        }
        let name = coarse.edge_name(&e);
        glue.push(GlueSpec {
            name: Some(name.clone()),
            a: adjacent[0],
            b: adjacent[1],
            vertices: vec![vid(e[0]), vid(e[1])],
        });
        edge_cells.push((e, name));
    }

    // Engine-computed α on every edge endpoint.
    let mut alpha_vertex: Vec<AlphaSpec> = Vec::new();
    for (e, _) in &edge_cells {
        let adjacent = coarse.triangles_on_edge(e);
        for &endpoint in e {
            let value = alpha_via_covering(coarse, fine, e, endpoint)?;
            alpha_vertex.push(AlphaSpec {
                simplex: adjacent[0],
                face_vertices: vec![vid(e[0]), vid(e[1])],
                vertex: vid(endpoint),
                value,
            });
        }
    }

    // Half-stripes: each edge family extends along its boundary component.
    let ray_labels: Vec<String> = (1..=5).map(|i| format!("H{i}")).collect();
    let mut attachments: Vec<AttachmentSpec> = Vec::new();
    for (e, name) in &edge_cells {
        let fam = edge_label_family(e);
        // Diagonal edges carry H1, antidiagonal H2; among axis edges only
        // those through the origin vertex carry H3/H4 (those components are
        // the coordinate sections): horizontal e12, e23 and vertical e14,
        // e47 touch P1, while e45, e56, e25, e58 carry no stripe.
        let attach = match fam {
            0 | 1 => true,
            2 | 3 => e.iter().any(|&p| reduce(p, coarse.m) == (0, 0)),
            _ => false,
        };
        if attach {
            let adjacent = coarse.triangles_on_edge(e);
            attachments.push(AttachmentSpec {
                name: format!("{name}*H{}", fam + 1),
                simplex: adjacent[0],
                base_vertices: vec![vid(e[0]), vid(e[1])],
                labels: vec![fam],
            });
        }
    }

    // Quadrants: two copies between H1 and H2 over the deep vertex P5, and
    // the five quadrants over the origin vertex P1.
    let p5 = vid((1, 1));
    let p1 = vid((0, 0));
    let simplex_with = |v: usize| -> usize {
        simplices
            .iter()
            .position(|s| s.vertices.contains(&v))
            .expect("every vertex lies on a triangle")
    };
    attachments.push(AttachmentSpec {
        name: "P5*H1H2#1".into(),
        simplex: simplex_with(p5),
        base_vertices: vec![p5],
        labels: vec![0, 1],
    });
    attachments.push(AttachmentSpec {
        name: "P5*H1H2#2".into(),
        simplex: simplex_with(p5),
        base_vertices: vec![p5],
        labels: vec![0, 1],
    });
    for (label, partner) in [(0usize, 4usize), (1, 4), (2, 4), (3, 4)] {
        attachments.push(AttachmentSpec {
            name: format!("P1*H{}H5", label + 1),
            simplex: simplex_with(p1),
            base_vertices: vec![p1],
            labels: vec![label, partner],
        });
    }
    attachments.push(AttachmentSpec {
        name: "P1*H1H2".into(),
        simplex: simplex_with(p1),
        base_vertices: vec![p1],
        labels: vec![0, 1],
    });

    let data = SimplicialData {
        vertices: vertex_names,
        ray_labels,
        simplices,
        vertex_determined: false,
        glue,
        attachments,
        alpha_vertex,
        notes: vec![String::from(E2_DISCREPANCY_NOTE)],
    };
    let complex = build_from_simplicial(&data)?;

    // F = -log|x₁ - x₂|: vertex values min(val(t₁), val(t₂)); the boundary
    // multiplicities are 1 on the two separating components and -2 on the
    // two coordinate-section components (double pole of x at the origin).
    let mut vertical = BTreeMap::new();
    for (id, &p) in verts.iter().enumerate() {
        let t1 = Rat::new(p.0, coarse.m);
        let t2 = Rat::new(p.1, coarse.m);
        let v1 = tate_val_x(&t1)?;
        let v2 = tate_val_x(&t2)?;
        vertical.insert(id, v1.min(v2));
    }
    let mut horizontal = BTreeMap::new();
    horizontal.insert(0usize, 1i64); // H1
    horizontal.insert(1usize, 1i64); // H2
    horizontal.insert(2usize, -2i64); // H3
    horizontal.insert(3usize, -2i64); // H4
    let f = from_multiplicities(&complex, &vertical, &horizontal).map_err(|e| {
        EngineError::UnsupportedInstance(format!("function data inconsistent: {e}"))
    })?;

    Ok((complex, f))
}

/// The engine α-table for the twelve edges of the square triangulation,
/// as (edge name, vertex name, α).
pub fn e2_alpha_table(
    coarse: &TorusTriangulation,
    fine: &TorusTriangulation,
) -> Result<Vec<(String, String, i64)>, EngineError> {
    let mut out = Vec::new();
    for e in coarse.edges() {
        for &endpoint in &e {
            let a = alpha_via_covering(coarse, fine, &e, endpoint)?;
            out.push((coarse.edge_name(&e), coarse.vertex_name(endpoint), a));
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn build_c_shape() {
        let c = TorusTriangulation::build_c();
        assert_eq!(c.vertices().len(), 4);
        assert_eq!(c.edges().len(), 12);
        assert_eq!(c.triangles().len(), 8);
        assert_eq!(c.v_pi(), rat(1, 2));
        assert!(!c.is_vertex_determined());
    }

    #[test]
    fn refine_shapes() {
        let c = TorusTriangulation::build_c();
        assert_eq!(c.refine(1), c);
        let half = c.refine(2);
        assert_eq!(half.vertices().len(), 16);
        assert_eq!(half.triangles().len(), 32);
        assert_eq!(half.v_pi(), rat(1, 4));
        assert!(half.is_vertex_determined());
    }

    #[test]
    fn e15_adjacent_triangles() {
        let c = TorusTriangulation::build_c();
        let e15 = [(0, 0), (1, 1)];
        let adj = c.triangles_on_edge(&e15);
        let names: Vec<String> = adj
            .iter()
            .map(|&i| c.triangle_name(&c.triangles[i]))
            .collect();
        assert!(names.contains(&"t125".into()));
        assert!(names.contains(&"t145".into()));
    }

    #[test]
    fn refinement_vertices_over_p5() {
        let c = TorusTriangulation::build_c();
        let half = c.refine(2);
        // lifts of (1,1) on the quarter grid: the Q-names 7, 9, 17, 19
        let mut names: Vec<String> = [(1, 1), (3, 1), (1, 3), (3, 3)]
            .iter()
            .map(|&p| half.vertex_name(p))
            .collect();
        names.sort();
        assert_eq!(names, vec!["Q17", "Q19", "Q7", "Q9"]);
    }

    #[test]
    fn engine_rejects_coarse() {
        let c = TorusTriangulation::build_c();
        assert!(matches!(
            IntersectionEngine::new(&c),
            Err(EngineError::NotVertexDetermined)
        ));
    }

    #[test]
    fn half_c_triple_products() {
        let c = TorusTriangulation::build_c();
        let half = c.refine(2);
        let engine = IntersectionEngine::new(&half).unwrap();
        let id = |p: GridPt| half.vertex_id(p).unwrap();
        let (q1, q2, q3, q7) = (id((0, 0)), id((1, 0)), id((2, 0)), id((1, 1)));
        // one triangle on {Q1, Q2, Q7}
        assert_eq!(engine.triple(q7, q2, q1), rat(1, 4));
        // the doubled factor reduces through its own fiber: for {Q7, Q1}
        // the single surviving neighbour is Q2
        assert_eq!(engine.triple(q7, q7, q1), rat(-1, 4));
        // doubling Q2 against Q7 sees the two triangles through their edge
        // with third vertex Q1 resp. Q3 in the fiber of Q2
        assert_eq!(engine.triple(q2, q2, q7), rat(-1, 2));
        // doubling Q7 against Q2 sees no triangle in the fiber of Q7
        assert_eq!(engine.triple(q7, q7, q2), Rat::zero());
        let _ = q3;
    }

    #[test]
    fn edge_curve_pairings() {
        let c = TorusTriangulation::build_c();
        let half = c.refine(2);
        let engine = IntersectionEngine::new(&half).unwrap();
        let id = |p: GridPt| half.vertex_id(p).unwrap();
        let (q1, q7, q9, q13) = (id((0, 0)), id((1, 1)), id((3, 1)), id((2, 2)));
        assert_eq!(
            engine
                .divisor_dot_edge_curve(&DivisorExpr::vertex(q7), q1, q7)
                .unwrap(),
            rat(-1, 1)
        );
        assert_eq!(
            engine
                .divisor_dot_edge_curve(&DivisorExpr::vertex(q9), q1, q7)
                .unwrap(),
            Rat::zero()
        );
        assert_eq!(
            engine
                .divisor_dot_edge_curve(&DivisorExpr::zero(), q1, q7)
                .unwrap(),
            Rat::zero()
        );
        // {Q1, Q13} is not an edge
        assert!(matches!(
            engine.divisor_dot_edge_curve(&DivisorExpr::vertex(q7), q1, q13),
            Err(EngineError::NotAnEdge(_))
        ));
    }

    #[test]
    fn principal_relation_holds_on_every_edge() {
        let c = TorusTriangulation::build_c();
        let half = c.refine(2);
        let engine = IntersectionEngine::new(&half).unwrap();
        let n = engine.vertices.len();
        for e in &engine.edge_sets.clone() {
            let mut sum = Rat::zero();
            for v in 0..n {
                sum += &engine.triple(v, e[0], e[1]);
            }
            assert!(sum.is_zero(), "principal relation fails on an edge");
        }
    }

    #[test]
    fn alpha_values_on_coarse_edges() {
        let c = TorusTriangulation::build_c();
        let half = c.refine(2);
        let e15 = [(0, 0), (1, 1)];
        assert_eq!(alpha_via_covering(&c, &half, &e15, (1, 1)).unwrap(), 1);
        assert_eq!(alpha_via_covering(&c, &half, &e15, (0, 0)).unwrap(), 1);
        let e25 = [(1, 0), (1, 1)];
        assert_eq!(alpha_via_covering(&c, &half, &e25, (1, 1)).unwrap(), 0);
        assert_eq!(alpha_via_covering(&c, &half, &e25, (1, 0)).unwrap(), 2);
    }

    #[test]
    fn alpha_independent_of_refinement_factor() {
        let c = TorusTriangulation::build_c();
        let e15 = [(0, 0), (1, 1)];
        for k in [2, 3] {
            let fine = c.refine(k);
            assert_eq!(
                alpha_via_covering(&c, &fine, &e15, (1, 1)).unwrap(),
                1,
                "k = {k}"
            );
        }
    }

    #[test]
    fn tate_valuation() {
        assert_eq!(tate_val_x(&rat(1, 4)).unwrap(), rat(1, 4));
        assert_eq!(tate_val_x(&rat(1, 2)).unwrap(), rat(1, 2));
        assert_eq!(tate_val_x(&rat(3, 4)).unwrap(), rat(1, 4));
        assert_eq!(tate_val_x(&Rat::zero()).unwrap(), Rat::zero());
        assert!(tate_val_x(&Rat::one()).is_err());
        assert!(tate_val_x(&rat(-1, 2)).is_err());
    }

    #[test]
    fn pair_complex_builds_and_validates() {
        let c = TorusTriangulation::build_c();
        let half = c.refine(2);
        let (complex, f) = build_e2_pair(&c, &half).unwrap();
        assert!(complex.validate().is_valid());
        assert_eq!(complex.dimension(), 2);
        let p5 = complex.find_vertex("P5").unwrap();
        assert_eq!(f.value(p5), Some(&rat(1, 2)));
        for name in ["P1", "P2", "P4"] {
            let u = complex.find_vertex(name).unwrap();
            assert_eq!(f.value(u), Some(&Rat::zero()), "{name}");
        }
        // cell census: 4 + 12 + 8 bounded, 8 stripes, 9 rays, 7 quadrants
        assert_eq!(complex.cells().len(), 48);
        let e15 = complex.find_cell("e15").unwrap();
        assert_eq!(complex.deg_b(e15).unwrap(), 2);
        assert_eq!(complex.deg_u(e15).unwrap(), 1);
    }

    #[test]
    fn boundary_divisor_on_the_stripes() {
        let c = TorusTriangulation::build_c();
        let half = c.refine(2);
        let (complex, f) = build_e2_pair(&c, &half).unwrap();
        let tau_hat = crate::balance::boundary_divisor(&complex, &f).unwrap();
        assert_eq!(tau_hat.len(), 8);
        let by_name: alloc::collections::BTreeMap<(String, String), i64> = tau_hat
            .iter()
            .map(|(&(t, l), &v)| {
                (
                    (
                        complex.cell(t).name.clone(),
                        complex.ray_label_names()[l].clone(),
                    ),
                    v,
                )
            })
            .collect();
        assert_eq!(by_name[&("e15".into(), "H1".into())], 1);
        assert_eq!(by_name[&("e59".into(), "H1".into())], 1);
        assert_eq!(by_name[&("e35".into(), "H2".into())], 1);
        assert_eq!(by_name[&("e57".into(), "H2".into())], 1);
        assert_eq!(by_name[&("e12".into(), "H3".into())], -2);
        assert_eq!(by_name[&("e23".into(), "H3".into())], -2);
        assert_eq!(by_name[&("e14".into(), "H4".into())], -2);
        assert_eq!(by_name[&("e47".into(), "H4".into())], -2);

        // the zero function has a vanishing boundary divisor
        let zero = crate::balance::PLFunction {
            vertex_values: f.vertex_values.keys().map(|&u| (u, Rat::zero())).collect(),
            ray_slopes: f.ray_slopes.keys().map(|&l| (l, 0)).collect(),
            subdivisions: alloc::collections::BTreeMap::new(),
        };
        let tau_zero = crate::balance::boundary_divisor(&complex, &zero).unwrap();
        assert!(tau_zero.values().all(|&v| v == 0));
    }

    #[test]
    fn bounded_subcomplex_is_the_torus_complex() {
        let c = TorusTriangulation::build_c();
        let half = c.refine(2);
        let (complex, _) = build_e2_pair(&c, &half).unwrap();
        let bounded = complex.bounded_subcomplex();
        assert!(bounded.validate().is_valid());
        assert_eq!(bounded.dimension(), 2);
        let mut by_dim = [0usize; 3];
        for cell in bounded.cells() {
            by_dim[cell.dim()] += 1;
        }
        assert_eq!(by_dim, [4, 12, 8]);
        assert_eq!(bounded.bounded_subcomplex(), bounded);
    }

    #[test]
    fn tate_valuation_is_symmetric_and_unit_sloped() {
        for k in 1..8i64 {
            let t = rat(k, 8);
            let v = tate_val_x(&t).unwrap();
            let w = tate_val_x(&(&Rat::one() - &t)).unwrap();
            assert_eq!(v, w, "symmetry at {t}");
        }
        // slopes +-1: consecutive eighth steps change the value by 1/8
        for k in 0..3i64 {
            let a = tate_val_x(&rat(k, 8)).unwrap();
            let b = tate_val_x(&rat(k + 1, 8)).unwrap();
            assert_eq!(&b - &a, rat(1, 8));
        }
        for k in 4..7i64 {
            let a = tate_val_x(&rat(k, 8)).unwrap();
            let b = tate_val_x(&rat(k + 1, 8)).unwrap();
            assert_eq!(&b - &a, rat(-1, 8));
        }
    }

    #[test]
    fn unsupported_instances_rejected() {
        let c = TorusTriangulation::build_c();
        let half = c.refine(2);
        let quarter = c.refine(4);
        assert!(matches!(
            build_e2_pair(&half, &quarter),
            Err(EngineError::UnsupportedInstance(_))
        ));
        assert!(matches!(
            build_e2_pair(&c, &quarter),
            Err(EngineError::UnsupportedInstance(_))
        ));
    }
}
