//! Weak tropical complexes: the combinatorial skeleton of a strictly
//! semistable pair.
//!
//! A complex is a collection of canonical cells, each abstractly the
//! polyhedron `Δ(r,π) × R₊ˢ` in `R^{r+s+1}`, glued along chart faces. The
//! face poset, lengths, horizontal ray labels and α-numbers are all data;
//! `validate` checks the structural laws they must satisfy, most
//! importantly that the α-numbers at every codimension-one cell sum to the
//! bounded degree of that cell.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::polyhedron::{Halfspace, Polyhedron};
use crate::rat::Rat;

pub type CellId = usize;
pub type VertexId = usize;
pub type LabelId = usize;

/// One canonical cell `Δ(r,π) × R₊ˢ`, with its chart coordinates ordered as
/// the sorted global vertex ids followed by the sorted ray labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalCell {
    pub name: String,
    pub stratum_label: String,
    /// Declared dimension of the backing stratum, when known; checked
    /// against `dim(cell) + stratum_dim == dimension`.
    pub stratum_dim: Option<usize>,
    pub r: usize,
    pub s: usize,
    /// Length `v(π)` of the finite simplex; zero exactly when `r == 0`.
    pub length: Rat,
    /// `r + 1` distinct vertex ids, strictly increasing.
    pub vertex_ids: Vec<VertexId>,
    /// `s` distinct horizontal labels, strictly increasing.
    pub ray_labels: Vec<LabelId>,
}

impl CanonicalCell {
    pub fn dim(&self) -> usize {
        self.r + self.s
    }

    pub fn is_bounded(&self) -> bool {
        self.s == 0
    }

    /// Chart coordinate count: `r + s + 1`.
    pub fn chart_rank(&self) -> usize {
        self.r + self.s + 1
    }

    /// The chart polyhedron `{v ∈ R₊^{r+s+1} : v₀ + … + v_r = length}`.
    pub fn chart(&self) -> Polyhedron {
        let n = self.chart_rank();
        let mut ineqs = Vec::with_capacity(n);
        for i in 0..n {
            let mut u = vec![0i64; n];
            u[i] = 1;
            ineqs.push(Halfspace::new(u, Rat::zero()));
        }
        let mut sum = vec![0i64; n];
        for u in sum.iter_mut().take(self.r + 1) {
            *u = 1;
        }
        let eq = Halfspace::new(sum, -&self.length);
        Polyhedron::new(n, ineqs, vec![eq])
    }
}

/// Records that `child` is the face of `parent` obtained by zeroing every
/// parent chart coordinate outside the image of `coordinate_map`. The map
/// sends child coordinate `k` to parent coordinate `coordinate_map[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceInclusion {
    pub child: CellId,
    pub parent: CellId,
    pub coordinate_map: Vec<usize>,
}

/// Direction in which a maximal cell extends a codimension-one face.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Extension {
    /// The finite part grows: carries the extra vertex.
    Bounded(VertexId),
    /// An extra unbounded direction: carries the extra ray label.
    Unbounded(LabelId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SkeletonError {
    NotCodimOne(String),
    NotAFace(String, String),
    InvalidInput(String),
}

impl fmt::Display for SkeletonError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkeletonError::NotCodimOne(c) => write!(f, "cell {c} is not of codimension one"),
            SkeletonError::NotAFace(t, s) => write!(f, "{t} is not a face of {s}"),
            SkeletonError::InvalidInput(m) => write!(f, "invalid input: {m}"),
        }
    }
}

/// One violated invariant found by `validate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub subject: String,
    pub message: String,
}

/// Deterministically ordered list of violations; empty iff the complex is
/// valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The skeleton data model: cells, face inclusions, α-numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeakTropicalComplex {
    dimension: usize,
    vertex_names: Vec<String>,
    ray_label_names: Vec<String>,
    cells: Vec<CanonicalCell>,
    inclusions: Vec<FaceInclusion>,
    alpha_vertex: BTreeMap<(CellId, VertexId), i64>,
    alpha_ray: BTreeMap<(CellId, LabelId), i64>,
    notes: Vec<String>,
    // derived adjacency: inclusion indices keyed by child / by parent
    by_child: Vec<Vec<usize>>,
    by_parent: Vec<Vec<usize>>,
}

impl WeakTropicalComplex {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dimension: usize,
        vertex_names: Vec<String>,
        ray_label_names: Vec<String>,
        cells: Vec<CanonicalCell>,
        inclusions: Vec<FaceInclusion>,
        alpha_vertex: BTreeMap<(CellId, VertexId), i64>,
        alpha_ray: BTreeMap<(CellId, LabelId), i64>,
        notes: Vec<String>,
    ) -> Self {
        let mut by_child = vec![Vec::new(); cells.len()];
        let mut by_parent = vec![Vec::new(); cells.len()];
        for (k, inc) in inclusions.iter().enumerate() {
            if inc.child < cells.len() {
                by_child[inc.child].push(k);
            }
            if inc.parent < cells.len() {
                by_parent[inc.parent].push(k);
            }
        }
        WeakTropicalComplex {
            dimension,
            vertex_names,
            ray_label_names,
            cells,
            inclusions,
            alpha_vertex,
            alpha_ray,
            notes,
            by_child,
            by_parent,
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn cells(&self) -> &[CanonicalCell] {
        &self.cells
    }

    pub fn cell(&self, id: CellId) -> &CanonicalCell {
        &self.cells[id]
    }

    pub fn inclusions(&self) -> &[FaceInclusion] {
        &self.inclusions
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }

    pub fn ray_label_names(&self) -> &[String] {
        &self.ray_label_names
    }

    pub fn notes(&self) -> &[String] {
        &self.notes
    }

    pub fn alpha_vertex_entries(&self) -> &BTreeMap<(CellId, VertexId), i64> {
        &self.alpha_vertex
    }

    pub fn alpha_ray_entries(&self) -> &BTreeMap<(CellId, LabelId), i64> {
        &self.alpha_ray
    }

    pub fn find_cell(&self, name: &str) -> Option<CellId> {
        self.cells.iter().position(|c| c.name == name)
    }

    pub fn find_vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_names.iter().position(|n| n == name)
    }

    pub fn find_label(&self, name: &str) -> Option<LabelId> {
        self.ray_label_names.iter().position(|n| n == name)
    }

    /// Maximal cells are those that are not a proper face of any cell.
    pub fn is_maximal(&self, id: CellId) -> bool {
        self.by_child[id].is_empty()
    }

    pub fn maximal_cells(&self) -> Vec<CellId> {
        (0..self.cells.len())
            .filter(|&c| self.is_maximal(c))
            .collect()
    }

    pub fn is_codim_one(&self, id: CellId) -> bool {
        self.cells[id].dim() + 1 == self.dimension
    }

    pub fn codim_one_cells(&self) -> Vec<CellId> {
        (0..self.cells.len())
            .filter(|&c| self.is_codim_one(c))
            .collect()
    }

    /// Cells having `id` as a proper face, ascending and deduplicated.
    pub fn parents(&self, id: CellId) -> Vec<CellId> {
        let mut out: Vec<CellId> = self.by_child[id]
            .iter()
            .map(|&k| self.inclusions[k].parent)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Proper faces of `id`, ascending and deduplicated.
    pub fn faces(&self, id: CellId) -> Vec<CellId> {
        let mut out: Vec<CellId> = self.by_parent[id]
            .iter()
            .map(|&k| self.inclusions[k].child)
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn inclusion_between(&self, child: CellId, parent: CellId) -> Option<&FaceInclusion> {
        self.by_child[child]
            .iter()
            .map(|&k| &self.inclusions[k])
            .find(|inc| inc.parent == parent)
    }

    /// How `parent` extends its codimension-one face `child`: by the unique
    /// extra vertex, or the unique extra ray.
    pub fn extension_direction(
        &self,
        child: CellId,
        parent: CellId,
    ) -> Result<Extension, SkeletonError> {
        let inc = self.inclusion_between(child, parent).ok_or_else(|| {
            SkeletonError::NotAFace(
                self.cells[child].name.clone(),
                self.cells[parent].name.clone(),
            )
        })?;
        let (c, p) = (&self.cells[inc.child], &self.cells[inc.parent]);
        if c.dim() + 1 != p.dim() {
            return Err(SkeletonError::NotAFace(c.name.clone(), p.name.clone()));
        }
        if p.r == c.r + 1 {
            let extra = p
                .vertex_ids
                .iter()
                .find(|v| !c.vertex_ids.contains(v))
                .expect("codimension-one face misses exactly one vertex");
            Ok(Extension::Bounded(*extra))
        } else {
            let extra = p
                .ray_labels
                .iter()
                .find(|l| !c.ray_labels.contains(l))
                .expect("codimension-one face misses exactly one ray");
            Ok(Extension::Unbounded(*extra))
        }
    }

    /// The maximal cells over a codimension-one cell with their extension
    /// directions, ascending by cell id.
    pub fn extensions(&self, id: CellId) -> Result<Vec<(CellId, Extension)>, SkeletonError> {
        if !self.is_codim_one(id) {
            return Err(SkeletonError::NotCodimOne(self.cells[id].name.clone()));
        }
        let mut out = Vec::new();
        for parent in self.parents(id) {
            if self.cells[parent].dim() == self.dimension {
                out.push((parent, self.extension_direction(id, parent)?));
            }
        }
        Ok(out)
    }

    /// Number of maximal cells extending `id` in a bounded direction.
    pub fn deg_b(&self, id: CellId) -> Result<usize, SkeletonError> {
        Ok(self
            .extensions(id)?
            .iter()
            .filter(|(_, e)| matches!(e, Extension::Bounded(_)))
            .count())
    }

    /// Number of maximal cells extending `id` in an unbounded direction.
    pub fn deg_u(&self, id: CellId) -> Result<usize, SkeletonError> {
        Ok(self
            .extensions(id)?
            .iter()
            .filter(|(_, e)| matches!(e, Extension::Unbounded(_)))
            .count())
    }

    /// α(u, T) for a codimension-one cell `T` and vertex `u` of `T`: the
    /// stored value, or `deg_b(T)` when the finite part of `T` is a single
    /// vertex (the number is definitional there).
    pub fn alpha_vertex(&self, cell: CellId, vertex: VertexId) -> Option<i64> {
        if let Some(v) = self.alpha_vertex.get(&(cell, vertex)) {
            return Some(*v);
        }
        if self.cells[cell].r == 0
            && self.cells[cell].vertex_ids.contains(&vertex)
            && self.is_codim_one(cell)
        {
            return self.deg_b(cell).ok().map(|d| d as i64);
        }
        None
    }

    /// α(r, T): only ever a stored value. A missing entry means the datum
    /// is not determined by the available data; nothing constrains the sum
    /// of the ray numbers.
    pub fn alpha_ray(&self, cell: CellId, label: LabelId) -> Option<i64> {
        self.alpha_ray.get(&(cell, label)).copied()
    }

    /// The subcomplex of bounded cells (`s == 0`), carrying the α data that
    /// is still meaningful there.
    pub fn bounded_subcomplex(&self) -> WeakTropicalComplex {
        let keep: Vec<CellId> = (0..self.cells.len())
            .filter(|&c| self.cells[c].is_bounded())
            .collect();
        let mut remap: BTreeMap<CellId, CellId> = BTreeMap::new();
        for (new, &old) in keep.iter().enumerate() {
            remap.insert(old, new);
        }
        let cells: Vec<CanonicalCell> = keep.iter().map(|&c| self.cells[c].clone()).collect();
        let dimension = cells.iter().map(CanonicalCell::dim).max().unwrap_or(0);
        let cells: Vec<CanonicalCell> = cells
            .into_iter()
            .map(|mut c| {
                if c.stratum_dim.is_some() {
                    // stratum dimensions are relative to the ambient complex;
                    // they stay meaningful only if the dimension is unchanged
                    if dimension != self.dimension {
                        c.stratum_dim = None;
                    }
                }
                c
            })
            .collect();
        let inclusions: Vec<FaceInclusion> = self
            .inclusions
            .iter()
            .filter(|inc| remap.contains_key(&inc.child) && remap.contains_key(&inc.parent))
            .map(|inc| FaceInclusion {
                child: remap[&inc.child],
                parent: remap[&inc.parent],
                coordinate_map: inc.coordinate_map.clone(),
            })
            .collect();
        let alpha_vertex: BTreeMap<(CellId, VertexId), i64> = self
            .alpha_vertex
            .iter()
            .filter_map(|(&(c, v), &a)| {
                let nc = *remap.get(&c)?;
                (cells[nc].dim() + 1 == dimension).then_some(((nc, v), a))
            })
            .collect();
        WeakTropicalComplex::new(
            dimension,
            self.vertex_names.clone(),
            self.ray_label_names.clone(),
            cells,
            inclusions,
            alpha_vertex,
            BTreeMap::new(),
            self.notes.clone(),
        )
    }

    /// Checks every structural invariant; returns all violations, ordered
    /// by subject.
    pub fn validate(&self) -> ValidationReport {
        let mut v: Vec<Violation> = Vec::new();
        let mut push = |subject: &str, message: String| {
            v.push(Violation {
                subject: subject.to_string(),
                message,
            });
        };

        // Per-cell structure.
        let mut names = BTreeSet::new();
        for cell in &self.cells {
            if !names.insert(cell.name.clone()) {
                push(&cell.name, "duplicate cell name".to_string());
            }
            if cell.vertex_ids.len() != cell.r + 1 {
                push(
                    &cell.name,
                    format!(
                        "expected {} vertex ids, found {}",
                        cell.r + 1,
                        cell.vertex_ids.len()
                    ),
                );
            }
            if !strictly_increasing(&cell.vertex_ids) {
                push(
                    &cell.name,
                    "vertex ids must be distinct and sorted".to_string(),
                );
            }
            if cell
                .vertex_ids
                .iter()
                .any(|&u| u >= self.vertex_names.len())
            {
                push(&cell.name, "vertex id out of range".to_string());
            }
            if cell.ray_labels.len() != cell.s {
                push(
                    &cell.name,
                    format!(
                        "expected {} ray labels, found {}",
                        cell.s,
                        cell.ray_labels.len()
                    ),
                );
            }
            if !strictly_increasing(&cell.ray_labels) {
                push(
                    &cell.name,
                    "ray labels must be distinct and sorted".to_string(),
                );
            }
            if cell
                .ray_labels
                .iter()
                .any(|&l| l >= self.ray_label_names.len())
            {
                push(&cell.name, "ray label out of range".to_string());
            }
            if cell.r == 0 && !cell.length.is_zero() {
                push(
                    &cell.name,
                    "a cell with a single finite vertex has length zero by convention".to_string(),
                );
            }
            if cell.r >= 1 && !cell.length.is_positive() {
                push(
                    &cell.name,
                    "positive-dimensional finite part needs a positive length".to_string(),
                );
            }
            if let Some(sd) = cell.stratum_dim {
                if sd + cell.dim() != self.dimension {
                    push(
                        &cell.name,
                        format!(
                            "declared stratum dimension {sd} inconsistent with cell dimension {} in dimension {}",
                            cell.dim(),
                            self.dimension
                        ),
                    );
                }
            }
        }

        // Inclusion structure.
        let mut seen_pairs = BTreeSet::new();
        for inc in &self.inclusions {
            let subject = format!(
                "{} <= {}",
                self.cells.get(inc.child).map_or("?", |c| c.name.as_str()),
                self.cells.get(inc.parent).map_or("?", |c| c.name.as_str())
            );
            if inc.child >= self.cells.len() || inc.parent >= self.cells.len() {
                push(&subject, "inclusion references a missing cell".to_string());
                continue;
            }
            if inc.child == inc.parent {
                push(
                    &subject,
                    "a cell cannot be a proper face of itself".to_string(),
                );
                continue;
            }
            if !seen_pairs.insert((inc.child, inc.parent)) {
                push(
                    &subject,
                    "duplicate inclusion for this cell pair".to_string(),
                );
            }
            let (c, p) = (&self.cells[inc.child], &self.cells[inc.parent]);
            if inc.coordinate_map.len() != c.chart_rank() {
                push(&subject, "coordinate map has the wrong arity".to_string());
                continue;
            }
            if !strictly_increasing(&inc.coordinate_map) {
                push(
                    &subject,
                    "coordinate map must be strictly increasing".to_string(),
                );
                continue;
            }
            if inc.coordinate_map.iter().any(|&k| k >= p.chart_rank()) {
                push(
                    &subject,
                    "coordinate map exceeds the parent chart".to_string(),
                );
                continue;
            }
            let mut ok = true;
            for (k, &pk) in inc.coordinate_map.iter().enumerate() {
                if k <= c.r {
                    if pk > p.r {
                        push(
                            &subject,
                            "finite coordinate mapped to a ray coordinate".to_string(),
                        );
                        ok = false;
                        break;
                    }
                    if c.vertex_ids[k] != p.vertex_ids[pk] {
                        push(
                            &subject,
                            "vertex ids not carried along the embedding".to_string(),
                        );
                        ok = false;
                        break;
                    }
                } else {
                    if pk <= p.r {
                        push(
                            &subject,
                            "ray coordinate mapped to a finite coordinate".to_string(),
                        );
                        ok = false;
                        break;
                    }
                    if c.ray_labels[k - c.r - 1] != p.ray_labels[pk - p.r - 1] {
                        push(
                            &subject,
                            "ray labels not carried along the embedding".to_string(),
                        );
                        ok = false;
                        break;
                    }
                }
            }
            if ok && c.r >= 1 && c.length != p.length {
                push(
                    &subject,
                    "face and parent disagree on the length".to_string(),
                );
            }
            if ok && c.dim() >= p.dim() {
                push(
                    &subject,
                    "face must have strictly smaller dimension".to_string(),
                );
            }
        }

        // Chart-face closure: every proper face of every chart corresponds
        // to exactly one recorded inclusion, and every inclusion lands on a
        // proper chart face.
        for (p, cell) in self.cells.iter().enumerate() {
            let nfin = cell.r + 1;
            let nray = cell.s;
            if nfin + nray > 16 {
                push(
                    &cell.name,
                    "cell too large for face enumeration".to_string(),
                );
                continue;
            }
            let mut expected: BTreeSet<Vec<usize>> = BTreeSet::new();
            for amask in 1u32..(1u32 << nfin) {
                for bmask in 0u32..(1u32 << nray) {
                    if amask == (1 << nfin) - 1 && bmask == (1 << nray) - 1 {
                        continue; // the cell itself
                    }
                    let mut image = Vec::new();
                    for k in 0..nfin {
                        if amask & (1 << k) != 0 {
                            image.push(k);
                        }
                    }
                    for k in 0..nray {
                        if bmask & (1 << k) != 0 {
                            image.push(nfin + k);
                        }
                    }
                    expected.insert(image);
                }
            }
            let mut found: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
            for &k in &self.by_parent[p] {
                *found
                    .entry(self.inclusions[k].coordinate_map.clone())
                    .or_insert(0) += 1;
            }
            for face in &expected {
                match found.get(face).copied().unwrap_or(0) {
                    0 => push(
                        &cell.name,
                        format!("chart face {face:?} has no corresponding cell"),
                    ),
                    1 => {}
                    n => push(
                        &cell.name,
                        format!("chart face {face:?} matched by {n} inclusions"),
                    ),
                }
            }
            for face in found.keys() {
                if !expected.contains(face) {
                    push(
                        &cell.name,
                        format!("inclusion image {face:?} is not a proper chart face"),
                    );
                }
            }
        }

        // Maximal cells realize the dimension of the complex.
        let max_dim = self.cells.iter().map(CanonicalCell::dim).max().unwrap_or(0);
        if !self.cells.is_empty() && max_dim != self.dimension {
            push(
                "complex",
                format!(
                    "declared dimension {} but the largest cell has dimension {max_dim}",
                    self.dimension
                ),
            );
        }
        for c in 0..self.cells.len() {
            if self.is_maximal(c) && self.cells[c].dim() != self.dimension {
                push(
                    &self.cells[c].name,
                    format!(
                        "maximal cell of dimension {} in a complex of dimension {}",
                        self.cells[c].dim(),
                        self.dimension
                    ),
                );
            }
        }

        // Cells connected through finite faces of positive dimension share
        // one length.
        let mut uf = UnionFind::new(self.cells.len());
        for inc in &self.inclusions {
            if inc.child < self.cells.len()
                && inc.parent < self.cells.len()
                && self.cells[inc.child].r >= 1
                && self.cells[inc.parent].r >= 1
            {
                uf.union(inc.child, inc.parent);
            }
        }
        let mut comp_length: BTreeMap<usize, (Rat, String)> = BTreeMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            if cell.r == 0 {
                continue;
            }
            let root = uf.find(c);
            match comp_length.get(&root) {
                None => {
                    comp_length.insert(root, (cell.length.clone(), cell.name.clone()));
                }
                Some((len, witness)) => {
                    if *len != cell.length {
                        push(
                            &cell.name,
                            format!(
                                "length {} differs from {} of {} in the same finite-face component",
                                cell.length, len, witness
                            ),
                        );
                    }
                }
            }
        }

        // α bookkeeping on codimension-one cells.
        for (t, cell) in self.cells.iter().enumerate() {
            if !self.is_codim_one(t) {
                continue;
            }
            let Ok(degb) = self.deg_b(t) else { continue };
            if cell.r == 0 {
                let u = cell.vertex_ids[0];
                if let Some(&a) = self.alpha_vertex.get(&(t, u)) {
                    if a != degb as i64 {
                        push(
                            &cell.name,
                            format!(
                                "α({}, {}) = {a} but a single-vertex finite part forces deg_b = {degb}",
                                self.vertex_names[u], cell.name
                            ),
                        );
                    }
                }
            } else {
                let mut sum: i64 = 0;
                let mut complete = true;
                for &u in &cell.vertex_ids {
                    match self.alpha_vertex.get(&(t, u)) {
                        Some(&a) => sum += a,
                        None => {
                            push(
                                &cell.name,
                                format!("missing α({}, {})", self.vertex_names[u], cell.name),
                            );
                            complete = false;
                        }
                    }
                }
                if complete && sum != degb as i64 {
                    push(
                        &cell.name,
                        format!(
                            "α-numbers on {} sum to {sum}, but deg_b = {degb}",
                            cell.name
                        ),
                    );
                }
            }
        }
        for &(t, u) in self.alpha_vertex.keys() {
            if t >= self.cells.len() {
                push("alpha_vertex", format!("entry for missing cell {t}"));
                continue;
            }
            let cell = &self.cells[t];
            if !self.is_codim_one(t) {
                push(
                    &cell.name,
                    "α-number on a cell that is not of codimension one".to_string(),
                );
            } else if !cell.vertex_ids.contains(&u) {
                push(
                    &cell.name,
                    format!("α-number keyed by a vertex not on {}", cell.name),
                );
            }
        }
        // Ray α-numbers must sit on rays of codimension-one cells. Nothing
        // ties their sum to deg_u, and entries may be absent.
        for &(t, l) in self.alpha_ray.keys() {
            if t >= self.cells.len() {
                push("alpha_ray", format!("entry for missing cell {t}"));
                continue;
            }
            let cell = &self.cells[t];
            if !self.is_codim_one(t) {
                push(
                    &cell.name,
                    "ray α-number on a cell that is not of codimension one".to_string(),
                );
            } else if !cell.ray_labels.contains(&l) {
                push(
                    &cell.name,
                    format!(
                        "ray α-number keyed by a ray not in the recession cone of {}",
                        cell.name
                    ),
                );
            }
        }

        v.sort_by(|a, b| a.subject.cmp(&b.subject).then(a.message.cmp(&b.message)));
        ValidationReport { violations: v }
    }
}

fn strictly_increasing(xs: &[usize]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

/// Input for `build_from_simplicial`: maximal bounded simplices plus
/// optional gluing, unbounded attachments and α data.
///
/// Vertices are always global. Faces of one simplex are addressed by their
/// vertex subsets, so each simplex must have at most one face per subset.
/// With `vertex_determined`, faces of different simplices with equal vertex
/// sets are identified automatically; otherwise shared faces must be glued
/// explicitly.
#[derive(Clone, Debug, Default)]
pub struct SimplicialData {
    pub vertices: Vec<String>,
    pub ray_labels: Vec<String>,
    pub simplices: Vec<SimplexSpec>,
    pub vertex_determined: bool,
    pub glue: Vec<GlueSpec>,
    pub attachments: Vec<AttachmentSpec>,
    pub alpha_vertex: Vec<AlphaSpec>,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct SimplexSpec {
    pub name: String,
    pub vertices: Vec<VertexId>,
    pub length: Rat,
}

/// Identifies the `vertices`-face of simplex `a` with that of simplex `b`.
#[derive(Clone, Debug)]
pub struct GlueSpec {
    pub name: Option<String>,
    pub a: usize,
    pub b: usize,
    pub vertices: Vec<VertexId>,
}

/// Attaches the unbounded maximal cell `base × R₊^labels`, where `base` is
/// the proper face of `simplex` spanned by `base_vertices`.
#[derive(Clone, Debug)]
pub struct AttachmentSpec {
    pub name: String,
    pub simplex: usize,
    pub base_vertices: Vec<VertexId>,
    pub labels: Vec<LabelId>,
}

/// α(vertex, face) addressed through a containing simplex.
#[derive(Clone, Debug)]
pub struct AlphaSpec {
    pub simplex: usize,
    pub face_vertices: Vec<VertexId>,
    pub vertex: VertexId,
    pub value: i64,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum CellKey {
    FaceClass(usize),
    Simplex(usize),
    /// (face class of the base, sorted labels, copy number; 0 = shared face)
    Unbounded(usize, Vec<LabelId>, usize),
}

/// Builds the complex generated by the given simplices: all faces, all
/// inclusions, attachments and α data, then validates. The first violated
/// invariant aborts the build.
pub fn build_from_simplicial(data: &SimplicialData) -> Result<WeakTropicalComplex, SkeletonError> {
    let fail = |m: String| Err(SkeletonError::InvalidInput(m));
    let nv = data.vertices.len();

    // Normalize and sanity-check the simplices.
    let mut simplex_verts: Vec<Vec<VertexId>> = Vec::with_capacity(data.simplices.len());
    let mut dim0: Option<usize> = None;
    for sx in &data.simplices {
        let mut vs = sx.vertices.clone();
        vs.sort_unstable();
        if vs.iter().any(|&u| u >= nv) {
            return fail(format!(
                "simplex {} references a dangling vertex id",
                sx.name
            ));
        }
        if !strictly_increasing(&vs) {
            return fail(format!("simplex {} repeats a vertex", sx.name));
        }
        match dim0 {
            None => dim0 = Some(vs.len() - 1),
            Some(d) => {
                if vs.len() - 1 != d {
                    return fail(format!("simplex {} breaks the uniform dimension", sx.name));
                }
            }
        }
        if vs.len() >= 2 && !sx.length.is_positive() {
            return fail(format!("simplex {} needs a positive length", sx.name));
        }
        simplex_verts.push(vs);
    }
    if data.vertex_determined {
        let mut seen = BTreeSet::new();
        for (i, vs) in simplex_verts.iter().enumerate() {
            if !seen.insert(vs.clone()) {
                return fail(format!(
                    "simplex {} duplicates a vertex set in a vertex-determined complex",
                    data.simplices[i].name
                ));
            }
        }
    }

    // Face nodes (simplex, proper nonempty subset), identified by union-find.
    let mut nodes: Vec<(usize, Vec<VertexId>)> = Vec::new();
    let mut node_id: BTreeMap<(usize, Vec<VertexId>), usize> = BTreeMap::new();
    for (i, vs) in simplex_verts.iter().enumerate() {
        let full = (1u32 << vs.len()) - 1;
        for mask in 1u32..full {
            let subset: Vec<VertexId> = vs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &u)| u)
                .collect();
            let key = (i, subset.clone());
            node_id.entry(key).or_insert_with(|| {
                nodes.push((i, subset));
                nodes.len() - 1
            });
        }
    }
    let mut uf = UnionFind::new(nodes.len());
    // Vertices are global.
    let mut vertex_node: BTreeMap<VertexId, usize> = BTreeMap::new();
    for (id, (_, subset)) in nodes.iter().enumerate() {
        if subset.len() == 1 {
            match vertex_node.get(&subset[0]) {
                None => {
                    vertex_node.insert(subset[0], id);
                }
                Some(&other) => uf.union(id, other),
            }
        }
    }
    if data.vertex_determined {
        let mut by_set: BTreeMap<Vec<VertexId>, usize> = BTreeMap::new();
        for (id, (_, subset)) in nodes.iter().enumerate() {
            match by_set.get(subset) {
                None => {
                    by_set.insert(subset.clone(), id);
                }
                Some(&other) => uf.union(id, other),
            }
        }
    }
    let mut glue_name_raw: Vec<(usize, String)> = Vec::new();
    for g in &data.glue {
        if g.a >= simplex_verts.len() || g.b >= simplex_verts.len() {
            return fail("glue references a missing simplex".to_string());
        }
        let mut vs = g.vertices.clone();
        vs.sort_unstable();
        vs.dedup();
        for (side, which) in [(g.a, "first"), (g.b, "second")] {
            if !vs.iter().all(|u| simplex_verts[side].contains(u)) {
                return fail(format!("glue face is not a subset of its {which} simplex"));
            }
        }
        if vs.len() >= simplex_verts[g.a].len() || vs.len() >= simplex_verts[g.b].len() {
            return fail("glue face must be proper".to_string());
        }
        let na = node_id[&(g.a, vs.clone())];
        let nb = node_id[&(g.b, vs)];
        uf.union(na, nb);
        if let Some(name) = &g.name {
            glue_name_raw.push((na, name.clone()));
        }
    }
    let node_roots: Vec<usize> = {
        let mut roots = Vec::with_capacity(nodes.len());
        for i in 0..nodes.len() {
            roots.push(uf.find(i));
        }
        roots
    };
    let mut glue_names: BTreeMap<usize, String> = BTreeMap::new();
    for (node, name) in glue_name_raw {
        if let Some(prev) = glue_names.insert(node_roots[node], name.clone()) {
            if prev != name {
                return fail(format!(
                    "conflicting names {prev} and {name} for one glued face"
                ));
            }
        }
    }

    // One bounded proto-cell per face class.
    struct ProtoCell {
        name: String,
        vertices: Vec<VertexId>,
        length: Rat,
        rep: (usize, Vec<VertexId>),
    }
    let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut protos: Vec<ProtoCell> = Vec::new();
    for id in 0..nodes.len() {
        let root = node_roots[id];
        if class_of_root.contains_key(&root) {
            continue;
        }
        let mut rep = nodes[id].clone();
        let mut length: Option<(Rat, usize)> = None;
        for (other, node) in nodes.iter().enumerate() {
            if node_roots[other] != root {
                continue;
            }
            if (node.0, &node.1) < (rep.0, &rep.1) {
                rep = node.clone();
            }
            if node.1.len() >= 2 {
                let l = data.simplices[node.0].length.clone();
                match &length {
                    None => length = Some((l, node.0)),
                    Some((prev, w)) => {
                        if *prev != l {
                            return fail(format!(
                                "face shared by simplices {} and {} of different lengths",
                                data.simplices[*w].name, data.simplices[node.0].name
                            ));
                        }
                    }
                }
            }
        }
        let subset = rep.1.clone();
        let name = match glue_names.get(&root) {
            Some(n) => n.clone(),
            None => {
                if subset.len() == 1 {
                    data.vertices[subset[0]].clone()
                } else {
                    let parts: Vec<&str> =
                        subset.iter().map(|&u| data.vertices[u].as_str()).collect();
                    format!("{}:{}", data.simplices[rep.0].name, parts.join("+"))
                }
            }
        };
        class_of_root.insert(root, protos.len());
        protos.push(ProtoCell {
            name,
            vertices: subset,
            length: length.map_or(Rat::zero(), |(l, _)| l),
            rep,
        });
    }
    let face_class = |sx: usize, subset: &[VertexId]| -> Result<usize, SkeletonError> {
        let id = node_id.get(&(sx, subset.to_vec())).ok_or_else(|| {
            SkeletonError::InvalidInput(format!(
                "no proper face of simplex {} matches the requested vertex set",
                data.simplices.get(sx).map_or("?", |s| s.name.as_str()),
            ))
        })?;
        Ok(class_of_root[&node_roots[*id]])
    };

    struct Proto2 {
        key: CellKey,
        name: String,
        vertices: Vec<VertexId>,
        labels: Vec<LabelId>,
        length: Rat,
    }
    let mut all: Vec<Proto2> = Vec::new();
    for (ci, p) in protos.iter().enumerate() {
        all.push(Proto2 {
            key: CellKey::FaceClass(ci),
            name: p.name.clone(),
            vertices: p.vertices.clone(),
            labels: Vec::new(),
            length: if p.vertices.len() >= 2 {
                p.length.clone()
            } else {
                Rat::zero()
            },
        });
    }
    for (i, sx) in data.simplices.iter().enumerate() {
        all.push(Proto2 {
            key: CellKey::Simplex(i),
            name: sx.name.clone(),
            vertices: simplex_verts[i].clone(),
            labels: Vec::new(),
            length: if simplex_verts[i].len() >= 2 {
                sx.length.clone()
            } else {
                Rat::zero()
            },
        });
    }

    // Unbounded cells: each attachment is its own maximal cell; proper
    // unbounded faces are shared by (base face class, label subset).
    let mut shared_unbounded: BTreeSet<(usize, Vec<LabelId>)> = BTreeSet::new();
    for (ai, at) in data.attachments.iter().enumerate() {
        if at.simplex >= simplex_verts.len() {
            return fail(format!(
                "attachment {} references a missing simplex",
                at.name
            ));
        }
        let mut base = at.base_vertices.clone();
        base.sort_unstable();
        base.dedup();
        if !base.iter().all(|u| simplex_verts[at.simplex].contains(u)) {
            return fail(format!(
                "attachment {} base is not a face of its simplex",
                at.name
            ));
        }
        if base.len() >= simplex_verts[at.simplex].len() {
            return fail(format!("attachment {} base must be a proper face", at.name));
        }
        let mut labels = at.labels.clone();
        labels.sort_unstable();
        if labels.is_empty()
            || !strictly_increasing(&labels)
            || labels.iter().any(|&l| l >= data.ray_labels.len())
        {
            return fail(format!("attachment {} has invalid labels", at.name));
        }
        let base_class = face_class(at.simplex, &base)?;
        all.push(Proto2 {
            key: CellKey::Unbounded(base_class, labels.clone(), ai + 1),
            name: at.name.clone(),
            vertices: protos[base_class].vertices.clone(),
            labels: labels.clone(),
            length: protos[base_class].length.clone(),
        });
        // Register the shared proper faces.
        let mut base_faces: Vec<usize> = vec![base_class];
        let bverts = &protos[base_class].vertices;
        let (rep_sx, _) = protos[base_class].rep;
        for mask in 1u32..(1u32 << bverts.len()) - 1 {
            let subset: Vec<VertexId> = bverts
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &u)| u)
                .collect();
            base_faces.push(face_class(rep_sx, &subset)?);
        }
        for &bf in &base_faces {
            for lmask in 1u32..(1u32 << labels.len()) {
                let lsub: Vec<LabelId> = labels
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| lmask & (1 << k) != 0)
                    .map(|(_, &l)| l)
                    .collect();
                if bf == base_class && lsub == labels {
                    continue;
                }
                shared_unbounded.insert((bf, lsub));
            }
        }
    }
    for (bf, lsub) in &shared_unbounded {
        let label_names: Vec<&str> = lsub.iter().map(|&l| data.ray_labels[l].as_str()).collect();
        all.push(Proto2 {
            key: CellKey::Unbounded(*bf, lsub.clone(), 0),
            name: format!("{}*{}", protos[*bf].name, label_names.join("")),
            vertices: protos[*bf].vertices.clone(),
            labels: lsub.clone(),
            length: protos[*bf].length.clone(),
        });
    }

    // Deterministic cell order: by (dimension, name, key).
    all.sort_by(|a, b| {
        let da = a.vertices.len() - 1 + a.labels.len();
        let db = b.vertices.len() - 1 + b.labels.len();
        da.cmp(&db)
            .then_with(|| a.name.cmp(&b.name))
            .then_with(|| a.key.cmp(&b.key))
    });
    let mut key_index: BTreeMap<CellKey, usize> = BTreeMap::new();
    for (i, p) in all.iter().enumerate() {
        if key_index.insert(p.key.clone(), i).is_some() {
            return fail(format!("internal: duplicate cell key for {}", p.name));
        }
    }

    let dimension = all
        .iter()
        .map(|p| p.vertices.len() - 1 + p.labels.len())
        .max()
        .unwrap_or(0);
    let cells: Vec<CanonicalCell> = all
        .iter()
        .map(|p| {
            let r = p.vertices.len() - 1;
            let s = p.labels.len();
            CanonicalCell {
                name: p.name.clone(),
                stratum_label: p.name.clone(),
                stratum_dim: Some(dimension - (r + s)),
                r,
                s,
                length: if r >= 1 {
                    p.length.clone()
                } else {
                    Rat::zero()
                },
                vertex_ids: p.vertices.clone(),
                ray_labels: p.labels.clone(),
            }
        })
        .collect();

    // Inclusions.
    let coordinate_map = |child: &CanonicalCell, parent: &CanonicalCell| -> Vec<usize> {
        let mut map = Vec::with_capacity(child.chart_rank());
        for u in &child.vertex_ids {
            map.push(
                parent
                    .vertex_ids
                    .iter()
                    .position(|x| x == u)
                    .expect("vertex carried along the face"),
            );
        }
        for l in &child.ray_labels {
            map.push(
                parent.r
                    + 1
                    + parent
                        .ray_labels
                        .iter()
                        .position(|x| x == l)
                        .expect("label carried along the face"),
            );
        }
        map
    };
    let mut incl: BTreeMap<(usize, usize), FaceInclusion> = BTreeMap::new();
    // Bounded: subset pairs within each simplex.
    for (i, vs) in simplex_verts.iter().enumerate() {
        let full = (1u32 << vs.len()) - 1;
        let subset = |mask: u32| -> Vec<VertexId> {
            vs.iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &u)| u)
                .collect()
        };
        for pmask in 1u32..=full {
            for cmask in 1u32..pmask {
                if cmask & pmask != cmask {
                    continue;
                }
                let child_key = CellKey::FaceClass(face_class(i, &subset(cmask))?);
                let parent_key = if pmask == full {
                    CellKey::Simplex(i)
                } else {
                    CellKey::FaceClass(face_class(i, &subset(pmask))?)
                };
                let (c, p) = (key_index[&child_key], key_index[&parent_key]);
                if c == p {
                    continue;
                }
                incl.entry((c, p)).or_insert_with(|| FaceInclusion {
                    child: c,
                    parent: p,
                    coordinate_map: coordinate_map(&cells[c], &cells[p]),
                });
            }
        }
    }
    // Unbounded: faces of every unbounded cell.
    let unbounded: Vec<(CellKey, usize, Vec<LabelId>)> = all
        .iter()
        .filter_map(|p| match &p.key {
            CellKey::Unbounded(bf, labels, copy) => Some((
                CellKey::Unbounded(*bf, labels.clone(), *copy),
                *bf,
                labels.clone(),
            )),
            _ => None,
        })
        .collect();
    for (key, base_class, labels) in &unbounded {
        let parent_ix = key_index[key];
        let bverts = protos[*base_class].vertices.clone();
        let (rep_sx, _) = protos[*base_class].rep;
        let mut base_faces: Vec<usize> = vec![*base_class];
        for mask in 1u32..(1u32 << bverts.len()) - 1 {
            let subset: Vec<VertexId> = bverts
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &u)| u)
                .collect();
            base_faces.push(face_class(rep_sx, &subset)?);
        }
        for &bf in &base_faces {
            for lmask in 0u32..(1u32 << labels.len()) {
                let lsub: Vec<LabelId> = labels
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| lmask & (1 << k) != 0)
                    .map(|(_, &l)| l)
                    .collect();
                if bf == *base_class && lsub == *labels {
                    continue;
                }
                let child_key = if lsub.is_empty() {
                    CellKey::FaceClass(bf)
                } else {
                    CellKey::Unbounded(bf, lsub, 0)
                };
                let c = *key_index.get(&child_key).ok_or_else(|| {
                    SkeletonError::InvalidInput("internal: missing unbounded face cell".to_string())
                })?;
                incl.entry((c, parent_ix)).or_insert_with(|| FaceInclusion {
                    child: c,
                    parent: parent_ix,
                    coordinate_map: coordinate_map(&cells[c], &cells[parent_ix]),
                });
            }
        }
    }

    // α data.
    let mut alpha_vertex: BTreeMap<(CellId, VertexId), i64> = BTreeMap::new();
    for a in &data.alpha_vertex {
        if a.simplex >= simplex_verts.len() {
            return fail("α entry references a missing simplex".to_string());
        }
        let mut face = a.face_vertices.clone();
        face.sort_unstable();
        let class = face_class(a.simplex, &face)?;
        let cell = key_index[&CellKey::FaceClass(class)];
        if !face.contains(&a.vertex) {
            return fail(format!(
                "α entry keyed by a vertex not on face {}",
                cells[cell].name
            ));
        }
        if let Some(prev) = alpha_vertex.insert((cell, a.vertex), a.value) {
            if prev != a.value {
                return fail(format!("conflicting α values for {}", cells[cell].name));
            }
        }
    }

    let complex = WeakTropicalComplex::new(
        dimension,
        data.vertices.clone(),
        data.ray_labels.clone(),
        cells,
        incl.into_values().collect(),
        alpha_vertex,
        BTreeMap::new(),
        data.notes.clone(),
    );
    let report = complex.validate();
    if let Some(first) = report.violations.first() {
        return fail(format!("{}: {}", first.subject, first.message));
    }
    Ok(complex)
}
