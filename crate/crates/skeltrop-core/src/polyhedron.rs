//! Integral Γ-affine polyhedra and maps.
//!
//! A polyhedron is cut out by integer normals and rational constants:
//! `<u, x> + γ >= 0` (or `= 0`). All derived data (emptiness, dimension,
//! vertices, rays, direction lattices, images, lattice indices) is computed
//! exactly. V-representations are found by enumerating active constraint
//! subsets, which is the right trade at the sizes this crate handles.

// index loops are clearer than iterator chains in the matrix code here
#![allow(clippy::needless_range_loop)]

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::fm::{self, Constraint, Extremum};
use crate::lattice::{lattice_index, primitive_vector, Index, Lattice};
use crate::linalg::{rational_rank, solve_affine, solve_integer, AffineSolution, IntMatrix};
use crate::rat::{dot_int, Rat};

/// One constraint `<normal, x> + constant (>= or =) 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vec<BigInt>,
    pub constant: Rat,
}

impl Halfspace {
    pub fn new(normal: Vec<i64>, constant: Rat) -> Self {
        Halfspace {
            normal: normal.into_iter().map(BigInt::from).collect(),
            constant,
        }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        &dot_int(&self.normal, x) + &self.constant
    }

    fn homogenized(&self) -> Halfspace {
        Halfspace {
            normal: self.normal.clone(),
            constant: Rat::zero(),
        }
    }
}

/// Errors shared by the polyhedron operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolyhedronError {
    Empty,
    HasLineality,
    RankMismatch,
}

impl fmt::Display for PolyhedronError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyhedronError::Empty => write!(f, "empty polyhedron"),
            PolyhedronError::HasLineality => write!(f, "polyhedron contains a line"),
            PolyhedronError::RankMismatch => write!(f, "ambient ranks differ"),
        }
    }
}

/// An integral Γ-affine polyhedron in `Q^rank`. Emptiness is decided at
/// construction time; everything else is recomputed from the constraints.
#[derive(Clone, PartialEq, Eq)]
pub struct Polyhedron {
    rank: usize,
    ineqs: Vec<Halfspace>,
    eqs: Vec<Halfspace>,
    empty: bool,
}

/// `(vertices, rays, lines)` of a possibly non-pointed polyhedron.
type Generators = (Vec<Vec<Rat>>, Vec<Vec<BigInt>>, Vec<Vec<BigInt>>);

/// Exact V-representation: the polyhedron is the convex hull of the
/// vertices plus the cone over the (primitive) rays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VRep {
    pub vertices: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<BigInt>>,
}

impl Polyhedron {
    pub fn new(rank: usize, ineqs: Vec<Halfspace>, eqs: Vec<Halfspace>) -> Self {
        for h in ineqs.iter().chain(&eqs) {
            assert_eq!(h.normal.len(), rank, "constraint of wrong arity");
        }
        let mut p = Polyhedron {
            rank,
            ineqs,
            eqs,
            empty: false,
        };
        p.empty = !fm::feasible(&p.to_fm(), rank);
        p
    }

    /// The whole space `Q^rank`.
    pub fn full_space(rank: usize) -> Self {
        Polyhedron::new(rank, Vec::new(), Vec::new())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ineqs(&self) -> &[Halfspace] {
        &self.ineqs
    }

    pub fn eqs(&self) -> &[Halfspace] {
        &self.eqs
    }

    pub fn is_empty(&self) -> bool {
        self.empty
    }

    pub fn contains_point(&self, x: &[Rat]) -> bool {
        assert_eq!(x.len(), self.rank);
        self.eqs.iter().all(|h| h.eval(x).is_zero())
            && self.ineqs.iter().all(|h| !h.eval(x).is_negative())
    }

    fn to_fm(&self) -> Vec<Constraint> {
        let mut out = Vec::with_capacity(self.ineqs.len() + 2 * self.eqs.len());
        for h in &self.ineqs {
            out.push(Constraint::ge(
                h.normal
                    .iter()
                    .map(|u| Rat::from_bigint(u.clone()))
                    .collect(),
                h.constant.clone(),
            ));
        }
        for h in &self.eqs {
            let coeffs: Vec<Rat> = h
                .normal
                .iter()
                .map(|u| Rat::from_bigint(u.clone()))
                .collect();
            out.push(Constraint::ge(coeffs.clone(), h.constant.clone()));
            out.push(Constraint::ge(
                coeffs.iter().map(|c| -c).collect(),
                -&h.constant,
            ));
        }
        out
    }

    /// Supremum of `<u, x> + c` over the polyhedron.
    fn sup(&self, u: &[Rat], c: &Rat) -> Extremum {
        fm::supremum(&self.to_fm(), self.rank, u, c)
    }

    fn inf(&self, u: &[Rat], c: &Rat) -> Extremum {
        fm::infimum(&self.to_fm(), self.rank, u, c)
    }

    /// Indices of inequalities that hold with equality on all of the
    /// polyhedron: those whose strict version is infeasible together with
    /// the other constraints. Empty polyhedra have none.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        if self.empty {
            return Vec::new();
        }
        let base = self.to_fm();
        let mut out = Vec::new();
        for (i, h) in self.ineqs.iter().enumerate() {
            let u: Vec<Rat> = h
                .normal
                .iter()
                .map(|x| Rat::from_bigint(x.clone()))
                .collect();
            let mut cs = base.clone();
            cs.push(Constraint::gt(u, h.constant.clone()));
            if !fm::feasible(&cs, self.rank) {
                out.push(i);
            }
        }
        out
    }

    /// All normals that vanish identically on the polyhedron: the declared
    /// equalities plus the implicit ones.
    fn equality_normals(&self) -> Vec<Vec<BigInt>> {
        let mut rows: Vec<Vec<BigInt>> = self.eqs.iter().map(|h| h.normal.clone()).collect();
        for i in self.implicit_equalities() {
            rows.push(self.ineqs[i].normal.clone());
        }
        rows
    }

    /// Dimension of the polyhedron; `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        if self.empty {
            return None;
        }
        let rows = self.equality_normals();
        let rat_rows: Vec<Vec<Rat>> = rows
            .iter()
            .map(|r| r.iter().map(|x| Rat::from_bigint(x.clone())).collect())
            .collect();
        Some(self.rank - rational_rank(rat_rows))
    }

    /// `N ∩ span(P - v)`: the saturated lattice of integer directions along
    /// the polyhedron. Its rank equals `dim(P)`.
    pub fn direction_lattice(&self) -> Result<Lattice, PolyhedronError> {
        if self.empty {
            return Err(PolyhedronError::Empty);
        }
        let rows = self.equality_normals();
        if rows.is_empty() {
            return Ok(Lattice::standard(self.rank));
        }
        let m = IntMatrix::from_columns(self.rank, &rows).transpose();
        let kernel = crate::linalg::integer_kernel(&m);
        Ok(Lattice::from_generators(self.rank, &kernel))
    }

    /// The lineality space `{x : u.x = 0 for every normal u}` as a lattice.
    pub fn lineality_lattice(&self) -> Lattice {
        let rows: Vec<Vec<BigInt>> = self
            .eqs
            .iter()
            .chain(&self.ineqs)
            .map(|h| h.normal.clone())
            .collect();
        if rows.is_empty() {
            return Lattice::standard(self.rank);
        }
        let m = IntMatrix::from_columns(self.rank, &rows).transpose();
        Lattice::from_generators(self.rank, &crate::linalg::integer_kernel(&m))
    }

    /// Homogenizes the constraints: the recession cone.
    pub fn recession_cone(&self) -> Result<Polyhedron, PolyhedronError> {
        if self.empty {
            return Err(PolyhedronError::Empty);
        }
        Ok(Polyhedron::new(
            self.rank,
            self.ineqs.iter().map(Halfspace::homogenized).collect(),
            self.eqs.iter().map(Halfspace::homogenized).collect(),
        ))
    }

    /// True iff `x` lies in the relative interior: every equality (declared
    /// or implicit) holds exactly and every other inequality strictly.
    pub fn relint_contains(&self, x: &[Rat]) -> bool {
        assert_eq!(x.len(), self.rank);
        if self.empty {
            return false;
        }
        if !self.eqs.iter().all(|h| h.eval(x).is_zero()) {
            return false;
        }
        let implicit: BTreeSet<usize> = self.implicit_equalities().into_iter().collect();
        self.ineqs.iter().enumerate().all(|(i, h)| {
            let v = h.eval(x);
            if implicit.contains(&i) {
                v.is_zero()
            } else {
                v.is_positive()
            }
        })
    }

    /// Concatenates the constraint systems. The result may be empty.
    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron, PolyhedronError> {
        if self.rank != other.rank {
            return Err(PolyhedronError::RankMismatch);
        }
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        let mut eqs = self.eqs.clone();
        eqs.extend(other.eqs.iter().cloned());
        Ok(Polyhedron::new(self.rank, ineqs, eqs))
    }

    /// Exact V-representation by enumeration of maximal-rank active subsets.
    /// Rejects polyhedra containing a line.
    pub fn vertices_and_rays(&self) -> Result<VRep, PolyhedronError> {
        if self.empty {
            return Err(PolyhedronError::Empty);
        }
        if !self.lineality_lattice().is_zero() {
            return Err(PolyhedronError::HasLineality);
        }
        let n = self.rank;
        let all: Vec<&Halfspace> = self.eqs.iter().chain(&self.ineqs).collect();

        let mut vertices: BTreeSet<Vec<Rat>> = BTreeSet::new();
        if n == 0 {
            vertices.insert(Vec::new());
        }
        for subset in combinations(all.len(), n) {
            let a: Vec<Vec<Rat>> = subset
                .iter()
                .map(|&i| {
                    all[i]
                        .normal
                        .iter()
                        .map(|x| Rat::from_bigint(x.clone()))
                        .collect()
                })
                .collect();
            let b: Vec<Rat> = subset.iter().map(|&i| -&all[i].constant).collect();
            if let AffineSolution::Solution { point, kernel } = solve_affine(&a, &b) {
                if kernel.is_empty() && self.contains_point(&point) {
                    vertices.insert(point);
                }
            }
        }

        let mut rays: BTreeSet<Vec<BigInt>> = BTreeSet::new();
        if n >= 1 {
            let cone = self.recession_cone()?;
            for subset in combinations(all.len(), n - 1) {
                let a: Vec<Vec<Rat>> = subset
                    .iter()
                    .map(|&i| {
                        all[i]
                            .normal
                            .iter()
                            .map(|x| Rat::from_bigint(x.clone()))
                            .collect()
                    })
                    .collect();
                let b = vec![Rat::zero(); subset.len()];
                if let AffineSolution::Solution { kernel, .. } = solve_affine(&a, &b) {
                    if kernel.len() != 1 {
                        continue;
                    }
                    let g = primitive_vector(&kernel[0]).expect("kernel generator is nonzero");
                    for cand in [g.clone(), g.iter().map(|x| -x).collect::<Vec<_>>()] {
                        let as_rat: Vec<Rat> =
                            cand.iter().map(|x| Rat::from_bigint(x.clone())).collect();
                        if cone.contains_point(&as_rat) {
                            rays.insert(cand);
                        }
                    }
                }
            }
        }

        Ok(VRep {
            vertices: vertices.into_iter().collect(),
            rays: rays.into_iter().collect(),
        })
    }

    /// Generators allowing lineality: `(vertices, rays, lines)` with the
    /// polyhedron equal to `conv(vertices) + cone(rays) + span(lines)`.
    fn generators(&self) -> Result<Generators, PolyhedronError> {
        if self.empty {
            return Err(PolyhedronError::Empty);
        }
        let lin = self.lineality_lattice();
        if lin.is_zero() {
            let v = self.vertices_and_rays()?;
            return Ok((v.vertices, v.rays, Vec::new()));
        }
        // Slice with the orthogonal complement of the lineality space to get
        // a pointed section, then add the lineality generators back as lines.
        let lines = lin.basis_columns();
        let mut eqs = self.eqs.clone();
        for l in &lines {
            eqs.push(Halfspace {
                normal: l.clone(),
                constant: Rat::zero(),
            });
        }
        let sliced = Polyhedron::new(self.rank, self.ineqs.clone(), eqs);
        let v = sliced.vertices_and_rays()?;
        Ok((v.vertices, v.rays, lines))
    }

    /// A point of the polyhedron (a vertex of a pointed section).
    pub fn some_point(&self) -> Result<Vec<Rat>, PolyhedronError> {
        let (vertices, _, _) = self.generators()?;
        Ok(vertices
            .into_iter()
            .next()
            .expect("nonempty pointed section has a vertex"))
    }

    /// Rebuilds an H-representation from generators. `vertices` must be
    /// nonempty; `lines` may be empty.
    pub fn from_generators(
        rank: usize,
        vertices: &[Vec<Rat>],
        rays: &[Vec<BigInt>],
        lines: &[Vec<BigInt>],
    ) -> Polyhedron {
        assert!(!vertices.is_empty(), "generator description needs a vertex");
        // Homogenize into Q^{rank+1}: (1, v) for vertices, (0, r) for rays
        // and both signs of the lines.
        let mut gens: Vec<Vec<Rat>> = Vec::new();
        for v in vertices {
            assert_eq!(v.len(), rank);
            let mut g = vec![Rat::one()];
            g.extend(v.iter().cloned());
            gens.push(g);
        }
        let mut push_dir = |r: &[BigInt]| {
            let mut g = vec![Rat::zero()];
            g.extend(r.iter().map(|x| Rat::from_bigint(x.clone())));
            gens.push(g);
        };
        for r in rays {
            assert_eq!(r.len(), rank);
            push_dir(r);
        }
        for l in lines {
            assert_eq!(l.len(), rank);
            push_dir(l);
            let neg: Vec<BigInt> = l.iter().map(|x| -x).collect();
            push_dir(&neg);
        }

        // Affine-hull equalities: the rational kernel of the generator rows.
        let zeros = vec![Rat::zero(); gens.len()];
        let hull_kernel = match solve_affine(&gens, &zeros) {
            AffineSolution::Solution { kernel, .. } => kernel,
            AffineSolution::NoSolution => unreachable!("homogeneous system"),
        };
        let mut eqs = Vec::new();
        for w in &hull_kernel {
            let (u, c) = split_homogeneous(w);
            // w = (c, u) with u != 0: <u, x> + c = 0 on the hull.
            eqs.push(Halfspace {
                normal: u,
                constant: c,
            });
        }

        let span_dim = rank + 1 - hull_kernel.len();

        // Facet candidates: for each (span_dim - 1)-subset of generators,
        // the orthogonal directions modulo the hull kernel.
        let mut ineqs: Vec<Halfspace> = Vec::new();
        let mut seen: BTreeSet<Vec<Rat>> = BTreeSet::new();
        if span_dim >= 1 {
            for subset in combinations(gens.len(), span_dim - 1) {
                let a: Vec<Vec<Rat>> = subset.iter().map(|&i| gens[i].clone()).collect();
                let b = vec![Rat::zero(); subset.len()];
                let kernel = match solve_affine(&a, &b) {
                    AffineSolution::Solution { kernel, .. } => kernel,
                    AffineSolution::NoSolution => unreachable!("homogeneous system"),
                };
                // Need the candidate space to be exactly one bigger than the
                // hull kernel.
                if kernel.len() != hull_kernel.len() + 1 {
                    continue;
                }
                for w in &kernel {
                    let w = reduce_modulo(w, &hull_kernel);
                    if w.iter().all(Rat::is_zero) {
                        continue;
                    }
                    let mut sign = 0i32;
                    let mut ok = true;
                    for g in &gens {
                        let v = crate::rat::dot(&w, g);
                        if v.is_zero() {
                            continue;
                        }
                        let s = if v.is_positive() { 1 } else { -1 };
                        if sign == 0 {
                            sign = s;
                        } else if sign != s {
                            ok = false;
                            break;
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let oriented: Vec<Rat> = if sign < 0 {
                        w.iter().map(|x| -x).collect()
                    } else {
                        w.clone()
                    };
                    let canon = canonical_direction(&oriented);
                    if !seen.insert(canon.clone()) {
                        continue;
                    }
                    let (u, c) = split_homogeneous(&canon);
                    if u.iter().all(BigInt::is_zero) {
                        continue; // the facet at infinity
                    }
                    ineqs.push(Halfspace {
                        normal: u,
                        constant: c,
                    });
                    break; // one representative per subset
                }
            }
        }
        Polyhedron::new(rank, ineqs, eqs)
    }

    /// Containment of another polyhedron, decided by bounding each of this
    /// polyhedron's constraints over the other one.
    pub fn contains_polyhedron(&self, other: &Polyhedron) -> Result<bool, PolyhedronError> {
        if self.rank != other.rank {
            return Err(PolyhedronError::RankMismatch);
        }
        if other.empty {
            return Ok(true);
        }
        for h in &self.ineqs {
            let u: Vec<Rat> = h
                .normal
                .iter()
                .map(|x| Rat::from_bigint(x.clone()))
                .collect();
            match other.inf(&u, &h.constant) {
                Extremum::Finite(v) if !v.is_negative() => {}
                _ => return Ok(false),
            }
        }
        for h in &self.eqs {
            let u: Vec<Rat> = h
                .normal
                .iter()
                .map(|x| Rat::from_bigint(x.clone()))
                .collect();
            match other.inf(&u, &h.constant) {
                Extremum::Finite(v) if v.is_zero() => {}
                _ => return Ok(false),
            }
            match other.sup(&u, &h.constant) {
                Extremum::Finite(v) if v.is_zero() => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// Point-set equality via mutual containment.
    pub fn same_set(&self, other: &Polyhedron) -> Result<bool, PolyhedronError> {
        if self.empty || other.empty {
            return Ok(self.empty == other.empty);
        }
        Ok(self.contains_polyhedron(other)? && other.contains_polyhedron(self)?)
    }
}

impl fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polyhedron(rank={}", self.rank)?;
        for h in &self.eqs {
            write!(f, ", {:?}.x + {} = 0", h.normal, h.constant)?;
        }
        for h in &self.ineqs {
            write!(f, ", {:?}.x + {} >= 0", h.normal, h.constant)?;
        }
        write!(f, ")")
    }
}

/// Splits a homogeneous normal `(c, u)` into an integer normal `u` and a
/// rational constant, scaling by the positive rational that makes the whole
/// vector primitive integer.
fn split_homogeneous(w: &[Rat]) -> (Vec<BigInt>, Rat) {
    let ints = primitive_vector(w).expect("nonzero homogeneous normal");
    let c = Rat::from_bigint(ints[0].clone());
    (ints[1..].to_vec(), c)
}

/// Reduces `w` modulo the span of `basis` by eliminating the basis pivots.
fn reduce_modulo(w: &[Rat], basis: &[Vec<Rat>]) -> Vec<Rat> {
    let mut rows: Vec<Vec<Rat>> = basis.to_vec();
    let mut w = w.to_vec();
    let cols = w.len();
    let mut r = 0usize;
    for col in 0..cols {
        let Some(src) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, src);
        let inv = rows[r][col].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for j in 0..cols {
                    let t = &f * &rows[r][j];
                    rows[i][j] -= &t;
                }
            }
        }
        if !w[col].is_zero() {
            let f = w[col].clone();
            for j in 0..cols {
                let t = &f * &rows[r][j];
                w[j] -= &t;
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    w
}

/// Canonical positive-primitive representative of a direction vector.
fn canonical_direction(w: &[Rat]) -> Vec<Rat> {
    let ints = primitive_vector(w).expect("nonzero direction");
    ints.into_iter().map(Rat::from_bigint).collect()
}

/// All `k`-element index subsets of `0..n`, in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// An integral Γ-affine map `x -> linear * x + translation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub linear: IntMatrix,
    pub translation: Vec<Rat>,
}

/// Diagnostic for the unimodularity test, recording which of the equivalent
/// characterizations was evaluated.
#[derive(Clone, Debug)]
pub struct UnimodularityReport {
    pub injective: bool,
    pub index: Option<Index>,
    pub condition: &'static str,
}

impl UnimodularityReport {
    pub fn holds(&self) -> bool {
        self.injective && self.index.as_ref().is_some_and(Index::is_one)
    }
}

impl AffineMap {
    pub fn new(linear: IntMatrix, translation: Vec<Rat>) -> Self {
        assert_eq!(linear.rows(), translation.len());
        AffineMap {
            linear,
            translation,
        }
    }

    pub fn identity(rank: usize) -> Self {
        AffineMap::new(IntMatrix::identity(rank), vec![Rat::zero(); rank])
    }

    pub fn source_rank(&self) -> usize {
        self.linear.cols()
    }

    pub fn target_rank(&self) -> usize {
        self.linear.rows()
    }

    pub fn apply(&self, x: &[Rat]) -> Vec<Rat> {
        let mut y = self.linear.mul_rat_vec(x);
        for (yi, t) in y.iter_mut().zip(&self.translation) {
            *yi += t;
        }
        y
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let linear = self.linear.mul(&other.linear);
        let mut translation = self.linear.mul_rat_vec(&other.translation);
        for (t, s) in translation.iter_mut().zip(&self.translation) {
            *t += s;
        }
        AffineMap::new(linear, translation)
    }

    /// The image polyhedron `F(P)`, via generator push-forward and exact
    /// H-representation re-derivation.
    pub fn image_polyhedron(&self, p: &Polyhedron) -> Result<Polyhedron, PolyhedronError> {
        assert_eq!(self.source_rank(), p.rank());
        let (vertices, rays, lines) = p.generators()?;
        let img_vertices: Vec<Vec<Rat>> = vertices.iter().map(|v| self.apply(v)).collect();
        let mut img_rays: Vec<Vec<BigInt>> = Vec::new();
        for r in &rays {
            let img = self.linear.mul_vec(r);
            if img.iter().all(BigInt::is_zero) {
                continue;
            }
            img_rays.push(crate::lattice::primitive_vector_int(&img).expect("nonzero"));
        }
        let mut img_lines: Vec<Vec<BigInt>> = Vec::new();
        for l in &lines {
            let img = self.linear.mul_vec(l);
            if img.iter().all(BigInt::is_zero) {
                continue;
            }
            img_lines.push(img);
        }
        Ok(Polyhedron::from_generators(
            self.target_rank(),
            &img_vertices,
            &img_rays,
            &img_lines,
        ))
    }

    /// The image of the direction lattice of `P` under the linear part.
    pub fn image_direction_lattice(&self, p: &Polyhedron) -> Result<Lattice, PolyhedronError> {
        let dl = p.direction_lattice()?;
        let images: Vec<Vec<BigInt>> = dl
            .basis_columns()
            .iter()
            .map(|c| self.linear.mul_vec(c))
            .collect();
        Ok(Lattice::from_generators(self.target_rank(), &images))
    }

    /// Whether the map is injective on the affine span of `P`.
    pub fn injective_on(&self, p: &Polyhedron) -> Result<bool, PolyhedronError> {
        let dl = p.direction_lattice()?;
        Ok(self.image_direction_lattice(p)?.rank() == dl.rank())
    }

    /// The lattice index `[N'_{F(P)} : F(N_P)]`; infinite iff the map is not
    /// injective on the span of `P`.
    pub fn lattice_index_on(&self, p: &Polyhedron) -> Result<Index, PolyhedronError> {
        let dl = p.direction_lattice()?;
        let img = self.image_direction_lattice(p)?;
        if img.rank() < dl.rank() {
            return Ok(Index::Infinite);
        }
        // N'_{Δ'} is the saturation of the image directions inside Z^m.
        let sup = img.saturate();
        Ok(lattice_index(&img, &sup).expect("image is contained in its saturation"))
    }

    /// Unimodularity on `P`: injective with lattice index one. The report
    /// records the evaluated characterization.
    pub fn unimodularity_on(&self, p: &Polyhedron) -> Result<UnimodularityReport, PolyhedronError> {
        let injective = self.injective_on(p)?;
        let index = self.lattice_index_on(p)?;
        Ok(UnimodularityReport {
            injective,
            index: Some(index),
            condition: "injectivity with lattice index one",
        })
    }

    pub fn is_unimodular_on(&self, p: &Polyhedron) -> Result<bool, PolyhedronError> {
        Ok(self.unimodularity_on(p)?.holds())
    }

    /// An integral Γ-affine inverse `F(P) -> P`, when one exists. Existence
    /// of such an inverse is one of the equivalent forms of unimodularity.
    pub fn integral_affine_inverse(
        &self,
        p: &Polyhedron,
    ) -> Result<Option<AffineMap>, PolyhedronError> {
        if !self.injective_on(p)? {
            return Ok(None);
        }
        let dl = p.direction_lattice()?;
        let w = dl.basis(); // n x r
        let y = self.linear.mul(w); // m x r
        let yt = y.transpose(); // r x m
                                // Row i of G solves Y^T g = w_i.
        let n = self.source_rank();
        let m = self.target_rank();
        let mut g = IntMatrix::zero(n, m);
        for i in 0..n {
            let wi: Vec<BigInt> = (0..w.cols()).map(|j| w[(i, j)].clone()).collect();
            match solve_integer(&yt, &wi) {
                Some(row) => {
                    for j in 0..m {
                        g[(i, j)] = row[j].clone();
                    }
                }
                None => return Ok(None),
            }
        }
        let base = p.some_point()?;
        let gfp = g.mul_rat_vec(&self.apply(&base));
        let translation: Vec<Rat> = base.iter().zip(&gfp).map(|(b, v)| b - v).collect();
        Ok(Some(AffineMap::new(g, translation)))
    }

    /// Whether the integral affine functional `x -> <w, x> (+ const)` on `P`
    /// factors through this map as an integral affine functional on the
    /// image. Another of the equivalent forms of unimodularity, quantified
    /// over all `w`.
    pub fn functional_factors(
        &self,
        p: &Polyhedron,
        w: &[BigInt],
    ) -> Result<bool, PolyhedronError> {
        assert_eq!(w.len(), self.source_rank());
        let dl = p.direction_lattice()?;
        let wt = dl.basis().transpose(); // r x n
        let a = wt.mul(&self.linear.transpose()); // r x m
        let b = wt.mul_vec(w); // r
        Ok(solve_integer(&a, &b).is_some())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn interval(a: i64, b: i64) -> Polyhedron {
        Polyhedron::new(
            1,
            vec![
                Halfspace::new(vec![1], Rat::from_int(-a)),
                Halfspace::new(vec![-1], Rat::from_int(b)),
            ],
            vec![],
        )
    }

    fn unit_square() -> Polyhedron {
        Polyhedron::new(
            2,
            vec![
                Halfspace::new(vec![1, 0], Rat::zero()),
                Halfspace::new(vec![-1, 0], Rat::one()),
                Halfspace::new(vec![0, 1], Rat::zero()),
                Halfspace::new(vec![0, -1], Rat::one()),
            ],
            vec![],
        )
    }

    /// The chart `{v >= 0, v0 + ... + vr = length}` used throughout.
    fn simplex(r: usize, length: Rat) -> Polyhedron {
        let n = r + 1;
        let ineqs = (0..n)
            .map(|i| {
                let mut u = vec![0i64; n];
                u[i] = 1;
                Halfspace::new(u, Rat::zero())
            })
            .collect();
        let eq = Halfspace::new(vec![1; n], -length);
        Polyhedron::new(n, ineqs, vec![eq])
    }

    #[test]
    fn standard_simplex_vrep() {
        let p = simplex(1, Rat::one());
        let v = p.vertices_and_rays().unwrap();
        assert_eq!(
            v.vertices,
            vec![vec![Rat::zero(), Rat::one()], vec![Rat::one(), Rat::zero()]]
        );
        assert!(v.rays.is_empty());
    }

    #[test]
    fn simplex_times_ray_vrep() {
        // Δ(1,π) x R+ in R^3: vertices (1,0,0),(0,1,0); ray (0,0,1)
        let mut ineqs = Vec::new();
        for i in 0..3 {
            let mut u = vec![0i64; 3];
            u[i] = 1;
            ineqs.push(Halfspace::new(u, Rat::zero()));
        }
        let eq = Halfspace::new(vec![1, 1, 0], -Rat::one());
        let p = Polyhedron::new(3, ineqs, vec![eq]);
        let v = p.vertices_and_rays().unwrap();
        assert_eq!(v.vertices.len(), 2);
        assert_eq!(
            v.rays,
            vec![vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)]]
        );
    }

    #[test]
    fn inconsistent_is_empty() {
        let p = Polyhedron::new(
            1,
            vec![
                Halfspace::new(vec![1], Rat::zero()),
                Halfspace::new(vec![-1], Rat::one()),
                Halfspace::new(vec![1], Rat::from_int(-2)),
            ],
            vec![],
        );
        assert!(p.is_empty());
        assert_eq!(p.vertices_and_rays(), Err(PolyhedronError::Empty));
    }

    #[test]
    fn lineality_rejected() {
        let p = Polyhedron::new(2, vec![Halfspace::new(vec![1, 0], Rat::zero())], vec![]);
        assert_eq!(p.vertices_and_rays(), Err(PolyhedronError::HasLineality));
    }

    #[test]
    fn recession_cone_shapes() {
        let p = interval(0, 1);
        let c = p.recession_cone().unwrap();
        let v = c.vertices_and_rays().unwrap();
        assert_eq!(v.vertices, vec![vec![Rat::zero()]]);
        assert!(v.rays.is_empty());
    }

    #[test]
    fn recession_cone_of_half_plane_drops_the_constant() {
        let p = Polyhedron::new(2, vec![Halfspace::new(vec![1, 0], rat(5, 3))], vec![]);
        let cone = p.recession_cone().unwrap();
        let expected = Polyhedron::new(2, vec![Halfspace::new(vec![1, 0], Rat::zero())], vec![]);
        assert!(cone.same_set(&expected).unwrap());
        assert!(!cone.same_set(&p).unwrap());
    }

    #[test]
    fn direction_lattice_of_diagonal_segment() {
        // segment from (0,0) to (1/2,1/2)
        let p = Polyhedron::new(
            2,
            vec![
                Halfspace::new(vec![1, 0], Rat::zero()),
                Halfspace::new(vec![-1, 0], rat(1, 2)),
            ],
            vec![Halfspace::new(vec![1, -1], Rat::zero())],
        );
        let dl = p.direction_lattice().unwrap();
        assert_eq!(dl, Lattice::from_generators_i64(2, &[&[1, 1]]));
        assert_eq!(p.dim(), Some(1));
    }

    #[test]
    fn direction_lattice_of_point_and_square() {
        let sq = unit_square();
        assert_eq!(sq.direction_lattice().unwrap(), Lattice::standard(2));
        let pt = Polyhedron::new(
            2,
            vec![],
            vec![
                Halfspace::new(vec![1, 0], Rat::zero()),
                Halfspace::new(vec![0, 1], Rat::zero()),
            ],
        );
        assert!(pt.direction_lattice().unwrap().is_zero());
    }

    #[test]
    fn relint_of_segment() {
        let p = interval(0, 1);
        assert!(p.relint_contains(&[rat(1, 2)]));
        assert!(!p.relint_contains(&[Rat::zero()]));
        assert!(!p.relint_contains(&[rat(2, 1)]));
        // lower-dimensional cell: implicit equality detection
        let seg = Polyhedron::new(
            2,
            vec![
                Halfspace::new(vec![0, 1], Rat::zero()),
                Halfspace::new(vec![0, -1], Rat::zero()),
                Halfspace::new(vec![1, 0], Rat::zero()),
                Halfspace::new(vec![-1, 0], Rat::one()),
            ],
            vec![],
        );
        assert!(seg.relint_contains(&[rat(1, 2), Rat::zero()]));
        assert!(!seg.relint_contains(&[Rat::zero(), Rat::zero()]));
        assert!(!seg.relint_contains(&[rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn intersect_examples() {
        let a = interval(0, 1);
        let b = interval(1, 2);
        let c = a.intersect(&b).unwrap();
        assert!(!c.is_empty());
        let v = c.vertices_and_rays().unwrap();
        assert_eq!(v.vertices, vec![vec![Rat::one()]]);
        let d = interval(3, 4);
        assert!(a.intersect(&d).unwrap().is_empty());
        assert!(a.intersect(&a).unwrap().same_set(&a).unwrap());
    }

    #[test]
    fn image_identity_and_projection() {
        let sq = unit_square();
        let id = AffineMap::identity(2);
        assert!(id.image_polyhedron(&sq).unwrap().same_set(&sq).unwrap());
        let proj = AffineMap::new(IntMatrix::from_rows(&[&[1, 0]]), vec![Rat::zero()]);
        let img = proj.image_polyhedron(&sq).unwrap();
        assert!(img.same_set(&interval(0, 1)).unwrap());
    }

    #[test]
    fn image_doubling() {
        let p = interval(0, 1);
        let double = AffineMap::new(IntMatrix::from_rows(&[&[2]]), vec![Rat::zero()]);
        let img = double.image_polyhedron(&p).unwrap();
        assert!(img.same_set(&interval(0, 2)).unwrap());
        assert_eq!(
            double.lattice_index_on(&p).unwrap(),
            Index::Finite(2u32.into())
        );
        assert!(!double.is_unimodular_on(&p).unwrap());
    }

    #[test]
    fn index_identity_and_rank_defect() {
        let sq = unit_square();
        let id = AffineMap::identity(2);
        assert!(id.lattice_index_on(&sq).unwrap().is_one());
        let sum = AffineMap::new(IntMatrix::from_rows(&[&[1, 1]]), vec![Rat::zero()]);
        assert_eq!(sum.lattice_index_on(&sq).unwrap(), Index::Infinite);
    }

    #[test]
    fn shear_is_unimodular() {
        let sq = unit_square();
        let shear = AffineMap::new(
            IntMatrix::from_rows(&[&[1, 1], &[0, 1]]),
            vec![Rat::zero(), Rat::zero()],
        );
        assert!(shear.is_unimodular_on(&sq).unwrap());
        let inv = shear.integral_affine_inverse(&sq).unwrap().unwrap();
        let v = sq.vertices_and_rays().unwrap();
        for vertex in &v.vertices {
            assert_eq!(inv.apply(&shear.apply(vertex)), *vertex);
        }
    }

    #[test]
    fn segment_inclusion_is_unimodular() {
        // t -> (t, t) embeds [0,1] with primitive image direction (1,1)
        let p = interval(0, 1);
        let inc = AffineMap::new(
            IntMatrix::from_rows(&[&[1], &[1]]),
            vec![Rat::zero(), Rat::zero()],
        );
        assert!(inc.is_unimodular_on(&p).unwrap());
    }

    #[test]
    fn hrep_vrep_round_trip_on_simplex() {
        let p = simplex(2, rat(1, 2));
        let v = p.vertices_and_rays().unwrap();
        let q = Polyhedron::from_generators(3, &v.vertices, &v.rays, &[]);
        assert!(q.same_set(&p).unwrap());
    }
}
