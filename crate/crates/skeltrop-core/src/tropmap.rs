//! Cellwise integral Γ-affine maps from a complex into `Q^n` and the
//! derived quantities: fibers over generic rational points, the sum of
//! lattice indices over a fiber, tropical multiplicities, faithfulness
//! certificates and section certificates.
//!
//! Maps are given per maximal cell as one affine map on chart coordinates,
//! or as finitely many pieces covering the chart. Genericity of a query
//! point is enforced, never patched over: a point meeting the image of
//! anything of dimension below the top is a hard error.

// index loops are clearer than iterator chains in the matrix code here
#![allow(clippy::needless_range_loop)]

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::fm::{self, Constraint};
use crate::lattice::{lattice_index, Index, Lattice};
use crate::linalg::{solve_affine, AffineSolution};
use crate::polyhedron::{AffineMap, Polyhedron};
use crate::rat::Rat;
use crate::skeleton::{CellId, WeakTropicalComplex};

/// One piece of the map on a maximal cell: an affine map valid on a
/// sub-polyhedron of the chart.
#[derive(Clone, Debug)]
pub struct MapPiece {
    pub domain: Polyhedron,
    pub map: AffineMap,
}

/// A cellwise integral Γ-affine map to `Q^target_rank`.
#[derive(Clone, Debug)]
pub struct CellwiseTropMap {
    pub target_rank: usize,
    pub pieces: BTreeMap<CellId, Vec<MapPiece>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TropError {
    GenericityViolated { cell: String },
    InconsistentSpans,
    NonIntegralMultiplicity { sum: BigUint, degree: u64 },
    InvalidMap(String),
    EmptyFiber,
}

impl fmt::Display for TropError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TropError::GenericityViolated { cell } => write!(
                f,
                "query point is not generic: hits a low-dimensional image at {cell}"
            ),
            TropError::InconsistentSpans => {
                write!(f, "fiber cells do not share one top-dimensional image span")
            }
            TropError::NonIntegralMultiplicity { sum, degree } => {
                write!(f, "index sum {sum} is not divisible by the degree {degree}")
            }
            TropError::InvalidMap(m) => write!(f, "invalid cellwise map: {m}"),
            TropError::EmptyFiber => write!(f, "the query point has an empty fiber"),
        }
    }
}

/// A point of the fiber: a maximal cell, the piece, and the preimage in
/// chart coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberPoint {
    pub cell: CellId,
    pub piece: usize,
    pub point: Vec<Rat>,
}

/// The lattice-index sum over a fiber.
#[derive(Clone, Debug)]
pub struct STResult {
    pub omega: Vec<Rat>,
    /// `(cell, piece, index)` per fiber point, ascending by cell.
    pub entries: Vec<(CellId, usize, BigUint)>,
    pub sum: BigUint,
}

/// Verdict of the faithfulness certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Faithfulness {
    Pass,
    NotUnimodular {
        cell: String,
        piece: usize,
        index: String,
    },
    OverlappingImages {
        cell_a: String,
        piece_a: usize,
        cell_b: String,
        piece_b: usize,
    },
}

impl Faithfulness {
    pub fn passed(&self) -> bool {
        matches!(self, Faithfulness::Pass)
    }
}

/// Verdict of the section certificate at a point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SectionVerdict {
    Pass { cell: String },
    MultipleFiberCells(usize),
    IndexNotOne { cell: String, index: BigUint },
}

impl SectionVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, SectionVerdict::Pass { .. })
    }
}

impl CellwiseTropMap {
    /// A map given by one affine map per maximal cell (the whole chart as
    /// the single piece).
    pub fn single(
        complex: &WeakTropicalComplex,
        target_rank: usize,
        maps: BTreeMap<CellId, AffineMap>,
    ) -> CellwiseTropMap {
        let pieces = maps
            .into_iter()
            .map(|(cell, map)| {
                (
                    cell,
                    vec![MapPiece {
                        domain: complex.cell(cell).chart(),
                        map,
                    }],
                )
            })
            .collect();
        CellwiseTropMap {
            target_rank,
            pieces,
        }
    }

    /// Structural validation: every maximal cell carries pieces of matching
    /// arity, the pieces stay in the chart and cover it, they agree on
    /// overlaps, and maps of adjacent cells agree on shared faces.
    pub fn validate(&self, complex: &WeakTropicalComplex) -> Result<(), TropError> {
        for cell in complex.maximal_cells() {
            let name = &complex.cell(cell).name;
            let Some(pieces) = self.pieces.get(&cell) else {
                return Err(TropError::InvalidMap(format!(
                    "maximal cell {name} has no pieces"
                )));
            };
            if pieces.is_empty() {
                return Err(TropError::InvalidMap(format!(
                    "maximal cell {name} has no pieces"
                )));
            }
            let chart = complex.cell(cell).chart();
            for (i, p) in pieces.iter().enumerate() {
                if p.domain.rank() != chart.rank() {
                    return Err(TropError::InvalidMap(format!(
                        "piece {i} of {name} lives in the wrong chart space"
                    )));
                }
                if p.map.source_rank() != chart.rank() || p.map.target_rank() != self.target_rank {
                    return Err(TropError::InvalidMap(format!(
                        "piece {i} of {name} has a map of the wrong arity"
                    )));
                }
                if !chart
                    .contains_polyhedron(&p.domain)
                    .map_err(|e| TropError::InvalidMap(format!("{e}")))?
                {
                    return Err(TropError::InvalidMap(format!(
                        "piece {i} of {name} leaves the chart"
                    )));
                }
            }
            // Cover: the chart minus the union of the domains is empty.
            let domains: Vec<&Polyhedron> = pieces.iter().map(|p| &p.domain).collect();
            if !covered(&chart, &domains) {
                return Err(TropError::InvalidMap(format!(
                    "pieces of {name} do not cover the chart"
                )));
            }
            // Agreement on overlaps within the cell.
            for i in 0..pieces.len() {
                for j in i + 1..pieces.len() {
                    let overlap = pieces[i]
                        .domain
                        .intersect(&pieces[j].domain)
                        .map_err(|e| TropError::InvalidMap(format!("{e}")))?;
                    if !maps_agree_on(&pieces[i].map, &pieces[j].map, &overlap) {
                        return Err(TropError::InvalidMap(format!(
                            "pieces {i} and {j} of {name} disagree on their overlap"
                        )));
                    }
                }
            }
        }
        // Agreement across shared faces of maximal cells.
        let maximal = complex.maximal_cells();
        for (ai, &a) in maximal.iter().enumerate() {
            for &b in maximal.iter().skip(ai + 1) {
                let faces_b = complex.faces(b);
                let shared: Vec<CellId> = complex
                    .faces(a)
                    .into_iter()
                    .filter(|t| faces_b.contains(t))
                    .collect();
                for t in shared {
                    let emb_a = chart_embedding(complex, t, a);
                    let emb_b = chart_embedding(complex, t, b);
                    let chart_t = complex.cell(t).chart();
                    for (i, pa) in self.pieces[&a].iter().enumerate() {
                        for (j, pb) in self.pieces[&b].iter().enumerate() {
                            let ra = pullback(&pa.domain, &emb_a);
                            let rb = pullback(&pb.domain, &emb_b);
                            let region = match ra.intersect(&rb).and_then(|r| r.intersect(&chart_t))
                            {
                                Ok(r) => r,
                                Err(e) => return Err(TropError::InvalidMap(format!("{e}"))),
                            };
                            let ma = pa.map.compose(&emb_a);
                            let mb = pb.map.compose(&emb_b);
                            if !maps_agree_on(&ma, &mb, &region) {
                                return Err(TropError::InvalidMap(format!(
                                    "pieces {i} of {} and {j} of {} disagree on the shared face {}",
                                    complex.cell(a).name,
                                    complex.cell(b).name,
                                    complex.cell(t).name
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The affine embedding of the chart of `child` into the chart of `parent`
/// recorded by their inclusion.
pub fn chart_embedding(complex: &WeakTropicalComplex, child: CellId, parent: CellId) -> AffineMap {
    let inc = complex
        .inclusion_between(child, parent)
        .expect("child is a face of parent");
    let (c, p) = (complex.cell(child), complex.cell(parent));
    let mut linear = crate::linalg::IntMatrix::zero(p.chart_rank(), c.chart_rank());
    for (k, &pk) in inc.coordinate_map.iter().enumerate() {
        linear[(pk, k)] = num_bigint::BigInt::from(1);
    }
    let mut translation = vec![Rat::zero(); p.chart_rank()];
    // A vertex face sits at coordinate value `length` in the parent simplex.
    if c.r == 0 && p.r >= 1 {
        translation[inc.coordinate_map[0]] = p.length.clone();
    }
    AffineMap::new(linear, translation)
}

/// Pulls the constraints of `q` back through an affine map: the polyhedron
/// `{x : map(x) ∈ q}` in the source space.
fn pullback(q: &Polyhedron, map: &AffineMap) -> Polyhedron {
    use crate::polyhedron::Halfspace;
    let lt = map.linear.transpose();
    let transform = |h: &Halfspace| -> Halfspace {
        let normal = lt.mul_vec(&h.normal);
        let shift = crate::rat::dot_int(&h.normal, &map.translation);
        Halfspace {
            normal,
            constant: &h.constant + &shift,
        }
    };
    Polyhedron::new(
        map.source_rank(),
        q.ineqs().iter().map(transform).collect(),
        q.eqs().iter().map(transform).collect(),
    )
}

/// Affine maps agree on a polyhedron iff they agree on its vertices and
/// their linear parts agree on its rays.
fn maps_agree_on(a: &AffineMap, b: &AffineMap, region: &Polyhedron) -> bool {
    if region.is_empty() {
        return true;
    }
    let Ok(v) = region.vertices_and_rays() else {
        // chart subsets are pointed, so this does not occur for valid input
        return false;
    };
    for vertex in &v.vertices {
        if a.apply(vertex) != b.apply(vertex) {
            return false;
        }
    }
    for ray in &v.rays {
        if a.linear.mul_vec(ray) != b.linear.mul_vec(ray) {
            return false;
        }
    }
    true
}

fn poly_constraints(p: &Polyhedron) -> Vec<Constraint> {
    let mut out = Vec::new();
    for h in p.ineqs() {
        out.push(Constraint::ge(
            h.normal
                .iter()
                .map(|x| Rat::from_bigint(x.clone()))
                .collect(),
            h.constant.clone(),
        ));
    }
    for h in p.eqs() {
        let coeffs: Vec<Rat> = h
            .normal
            .iter()
            .map(|x| Rat::from_bigint(x.clone()))
            .collect();
        out.push(Constraint::ge(coeffs.clone(), h.constant.clone()));
        out.push(Constraint::ge(
            coeffs.iter().map(|c| -c).collect(),
            -&h.constant,
        ));
    }
    out
}

/// Whether `region` is covered by the closed polyhedra `covers`, decided
/// exactly by recursive complementation with strict constraints.
fn covered(region: &Polyhedron, covers: &[&Polyhedron]) -> bool {
    fn go(region: Vec<Constraint>, vars: usize, covers: &[&Polyhedron]) -> bool {
        if !fm::feasible(&region, vars) {
            return true;
        }
        let Some((first, rest)) = covers.split_first() else {
            return false;
        };
        // region \ first = the union of the strict complements of first's
        // constraints; each branch must be covered by the rest.
        for c in poly_constraints(first) {
            let mut branch = region.clone();
            branch.push(Constraint::gt(
                c.coeffs.iter().map(|x| -x).collect(),
                -&c.constant,
            ));
            if !go(branch, vars, rest) {
                return false;
            }
        }
        true
    }
    go(poly_constraints(region), region.rank(), covers)
}

/// The fiber of the map over a rational point: for every maximal cell and
/// piece whose image contains the point, the unique preimage, which must
/// land in the relative interior. Any hit on an image of dimension below
/// the top of the complex is a genericity violation.
pub fn fiber_cells(
    complex: &WeakTropicalComplex,
    map: &CellwiseTropMap,
    omega: &[Rat],
) -> Result<Vec<FiberPoint>, TropError> {
    assert_eq!(omega.len(), map.target_rank, "query point of wrong arity");
    let d = complex.dimension();
    let mut out = Vec::new();
    for cell in complex.maximal_cells() {
        let name = &complex.cell(cell).name;
        let Some(pieces) = map.pieces.get(&cell) else {
            return Err(TropError::InvalidMap(format!(
                "maximal cell {name} has no pieces"
            )));
        };
        for (pi, piece) in pieces.iter().enumerate() {
            if piece.domain.is_empty() {
                continue;
            }
            let dom_dim = piece.domain.dim().expect("nonempty");
            let rank_on_dom = piece
                .map
                .image_direction_lattice(&piece.domain)
                .map_err(|e| TropError::InvalidMap(format!("{e}")))?
                .rank();
            if dom_dim < d || rank_on_dom < d {
                // The image is low-dimensional: the point must avoid it.
                if preimage_meets(piece, omega) {
                    return Err(TropError::GenericityViolated { cell: name.clone() });
                }
                continue;
            }
            // Full rank: the preimage within the affine hull is at most one
            // point. Solve map(x) = omega together with the hull equalities.
            let mut rows: Vec<Vec<Rat>> = Vec::new();
            let mut rhs: Vec<Rat> = Vec::new();
            for i in 0..piece.map.target_rank() {
                let row: Vec<Rat> = (0..piece.map.source_rank())
                    .map(|j| Rat::from_bigint(piece.map.linear[(i, j)].clone()))
                    .collect();
                rows.push(row);
                rhs.push(&omega[i] - &piece.map.translation[i]);
            }
            for h in piece.domain.eqs() {
                rows.push(
                    h.normal
                        .iter()
                        .map(|x| Rat::from_bigint(x.clone()))
                        .collect(),
                );
                rhs.push(-&h.constant);
            }
            for i in piece.domain.implicit_equalities() {
                let h = &piece.domain.ineqs()[i];
                rows.push(
                    h.normal
                        .iter()
                        .map(|x| Rat::from_bigint(x.clone()))
                        .collect(),
                );
                rhs.push(-&h.constant);
            }
            match solve_affine(&rows, &rhs) {
                AffineSolution::NoSolution => continue,
                AffineSolution::Solution { point, kernel } => {
                    if !kernel.is_empty() {
                        return Err(TropError::InvalidMap(format!(
                            "piece {pi} of {name} is not injective on its affine hull"
                        )));
                    }
                    if !piece.domain.contains_point(&point) {
                        continue;
                    }
                    if !piece.domain.relint_contains(&point) {
                        return Err(TropError::GenericityViolated { cell: name.clone() });
                    }
                    out.push(FiberPoint {
                        cell,
                        piece: pi,
                        point,
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| a.cell.cmp(&b.cell).then(a.piece.cmp(&b.piece)));
    Ok(out)
}

/// Whether the preimage of the point meets the piece domain, decided by
/// feasibility of the combined system.
fn preimage_meets(piece: &MapPiece, omega: &[Rat]) -> bool {
    let mut cs = poly_constraints(&piece.domain);
    for i in 0..piece.map.target_rank() {
        let coeffs: Vec<Rat> = (0..piece.map.source_rank())
            .map(|j| Rat::from_bigint(piece.map.linear[(i, j)].clone()))
            .collect();
        let shift = &piece.map.translation[i] - &omega[i];
        cs.push(Constraint::ge(coeffs.clone(), shift.clone()));
        cs.push(Constraint::ge(coeffs.iter().map(|c| -c).collect(), -&shift));
    }
    fm::feasible(&cs, piece.map.source_rank())
}

/// The lattice-index sum over the fiber of `omega`: every fiber cell
/// contributes the index of its image direction lattice in the saturated
/// direction lattice of the common image span.
pub fn st_sum(
    complex: &WeakTropicalComplex,
    map: &CellwiseTropMap,
    omega: &[Rat],
) -> Result<STResult, TropError> {
    let fiber = fiber_cells(complex, map, omega)?;
    let mut common: Option<Lattice> = None;
    let mut entries = Vec::new();
    let mut sum = BigUint::zero();
    for fp in &fiber {
        let piece = &map.pieces[&fp.cell][fp.piece];
        let image = piece
            .map
            .image_direction_lattice(&piece.domain)
            .map_err(|e| TropError::InvalidMap(format!("{e}")))?;
        let saturated = image.saturate();
        match &common {
            None => common = Some(saturated.clone()),
            Some(prev) => {
                if prev != &saturated {
                    return Err(TropError::InconsistentSpans);
                }
            }
        }
        let index = match lattice_index(&image, &saturated) {
            Ok(Index::Finite(n)) => n,
            _ => return Err(TropError::InconsistentSpans),
        };
        sum += &index;
        entries.push((fp.cell, fp.piece, index));
    }
    Ok(STResult {
        omega: omega.to_vec(),
        entries,
        sum,
    })
}

/// The tropical multiplicity derived from the index sum and the degree of
/// the map: `sum / degree`, which must be integral.
pub fn tropical_multiplicity(
    complex: &WeakTropicalComplex,
    map: &CellwiseTropMap,
    omega: &[Rat],
    degree: u64,
) -> Result<BigUint, TropError> {
    assert!(degree > 0, "degree must be positive");
    let st = st_sum(complex, map, omega)?;
    let d = BigUint::from(degree);
    if (&st.sum % &d) != BigUint::zero() {
        return Err(TropError::NonIntegralMultiplicity {
            sum: st.sum,
            degree,
        });
    }
    Ok(st.sum / d)
}

/// The faithfulness certificate: every piece embeds unimodularly, and the
/// images of any two distinct pieces meet in exactly the image of their
/// shared locus.
pub fn faithfulness_certificate(
    complex: &WeakTropicalComplex,
    map: &CellwiseTropMap,
) -> Result<Faithfulness, TropError> {
    map.validate(complex)?;
    let maximal = complex.maximal_cells();
    // (i) unimodularity of every piece.
    for &cell in &maximal {
        for (i, piece) in map.pieces[&cell].iter().enumerate() {
            let report = piece
                .map
                .unimodularity_on(&piece.domain)
                .map_err(|e| TropError::InvalidMap(format!("{e}")))?;
            if !report.holds() {
                return Ok(Faithfulness::NotUnimodular {
                    cell: complex.cell(cell).name.clone(),
                    piece: i,
                    index: match report.index {
                        Some(ix) => format!("{ix}"),
                        None => String::from("unknown"),
                    },
                });
            }
        }
    }
    // (ii) exact intersection of images.
    let err = |e: crate::polyhedron::PolyhedronError| TropError::InvalidMap(format!("{e}"));
    for (ai, &a) in maximal.iter().enumerate() {
        for &b in maximal.iter().skip(ai) {
            let pieces_a = &map.pieces[&a];
            let pieces_b = &map.pieces[&b];
            for (i, pa) in pieces_a.iter().enumerate() {
                for (j, pb) in pieces_b.iter().enumerate() {
                    if a == b && j <= i {
                        continue;
                    }
                    let img_a = pa.map.image_polyhedron(&pa.domain).map_err(err)?;
                    let img_b = pb.map.image_polyhedron(&pb.domain).map_err(err)?;
                    let meet = img_a.intersect(&img_b).map_err(err)?;
                    if meet.is_empty() {
                        continue;
                    }
                    // Expected overlap: images of the shared loci.
                    let mut expected: Vec<Polyhedron> = Vec::new();
                    if a == b {
                        let shared = pa.domain.intersect(&pb.domain).map_err(err)?;
                        if !shared.is_empty() {
                            expected.push(pa.map.image_polyhedron(&shared).map_err(err)?);
                        }
                    } else {
                        let faces_b = complex.faces(b);
                        for t in complex.faces(a) {
                            if !faces_b.contains(&t) {
                                continue;
                            }
                            let emb_a = chart_embedding(complex, t, a);
                            let emb_b = chart_embedding(complex, t, b);
                            let region = pullback(&pa.domain, &emb_a)
                                .intersect(&pullback(&pb.domain, &emb_b))
                                .and_then(|r| r.intersect(&complex.cell(t).chart()))
                                .map_err(err)?;
                            if region.is_empty() {
                                continue;
                            }
                            let m = pa.map.compose(&emb_a);
                            expected.push(m.image_polyhedron(&region).map_err(err)?);
                        }
                    }
                    let refs: Vec<&Polyhedron> = expected.iter().collect();
                    if !covered(&meet, &refs) {
                        return Ok(Faithfulness::OverlappingImages {
                            cell_a: complex.cell(a).name.clone(),
                            piece_a: i,
                            cell_b: complex.cell(b).name.clone(),
                            piece_b: j,
                        });
                    }
                }
            }
        }
    }
    Ok(Faithfulness::Pass)
}

/// The section certificate at a point: passes exactly when the fiber is a
/// single cell of lattice index one, so an integral affine partial section
/// exists through the point.
pub fn section_certificate(
    complex: &WeakTropicalComplex,
    map: &CellwiseTropMap,
    omega: &[Rat],
) -> Result<SectionVerdict, TropError> {
    let st = st_sum(complex, map, omega)?;
    if st.entries.is_empty() {
        return Err(TropError::EmptyFiber);
    }
    if st.entries.len() > 1 {
        return Ok(SectionVerdict::MultipleFiberCells(st.entries.len()));
    }
    let (cell, _, index) = &st.entries[0];
    let name = complex.cell(*cell).name.clone();
    if index == &BigUint::from(1u32) {
        Ok(SectionVerdict::Pass { cell: name })
    } else {
        Ok(SectionVerdict::IndexNotOne {
            cell: name,
            index: index.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::rat::rat;

    #[test]
    fn single_cell_unit_slope() {
        let (complex, map) = instances::subdivided_segment(&[1]);
        map.validate(&complex).unwrap();
        let st = st_sum(&complex, &map, &[rat(1, 2)]).unwrap();
        assert_eq!(st.entries.len(), 1);
        assert_eq!(st.sum, 1u32.into());
        assert!(section_certificate(&complex, &map, &[rat(1, 2)])
            .unwrap()
            .passed());
    }

    #[test]
    fn doubling_has_index_two() {
        let (complex, map) = instances::subdivided_segment(&[2]);
        let st = st_sum(&complex, &map, &[rat(1, 1)]).unwrap();
        assert_eq!(st.sum, 2u32.into());
        assert_eq!(
            tropical_multiplicity(&complex, &map, &[rat(1, 1)], 2).unwrap(),
            1u32.into()
        );
        assert!(matches!(
            tropical_multiplicity(&complex, &map, &[rat(1, 1)], 3),
            Err(TropError::NonIntegralMultiplicity { .. })
        ));
        match section_certificate(&complex, &map, &[rat(1, 1)]).unwrap() {
            SectionVerdict::IndexNotOne { index, .. } => assert_eq!(index, 2u32.into()),
            v => panic!("expected index failure, got {v:?}"),
        }
        match faithfulness_certificate(&complex, &map).unwrap() {
            Faithfulness::NotUnimodular { .. } => {}
            v => panic!("expected unimodularity failure, got {v:?}"),
        }
    }

    #[test]
    fn fold_is_counted_twice() {
        let (complex, map) = instances::fold();
        let st = st_sum(&complex, &map, &[rat(1, 2)]).unwrap();
        assert_eq!(st.entries.len(), 2);
        assert_eq!(st.sum, 2u32.into());
        match section_certificate(&complex, &map, &[rat(1, 2)]).unwrap() {
            SectionVerdict::MultipleFiberCells(2) => {}
            v => panic!("expected two fiber cells, got {v:?}"),
        }
        match faithfulness_certificate(&complex, &map).unwrap() {
            Faithfulness::OverlappingImages { .. } => {}
            v => panic!("expected overlapping images, got {v:?}"),
        }
    }

    #[test]
    fn vertex_image_violates_genericity() {
        let (complex, map) = instances::subdivided_segment(&[1, 1]);
        // omega = 1 is the image of the middle vertex
        assert!(matches!(
            fiber_cells(&complex, &map, &[rat(1, 1)]),
            Err(TropError::GenericityViolated { .. })
        ));
    }

    #[test]
    fn triangle_embedding_is_faithful() {
        let (complex, map) = instances::triangle_embedding();
        assert_eq!(
            faithfulness_certificate(&complex, &map).unwrap(),
            Faithfulness::Pass
        );
        let st = st_sum(&complex, &map, &[rat(1, 2), Rat::zero()]).unwrap();
        assert_eq!(st.sum, 1u32.into());
        assert!(
            section_certificate(&complex, &map, &[rat(1, 2), Rat::zero()])
                .unwrap()
                .passed()
        );
    }

    #[test]
    fn st_matches_slope_oracle() {
        let slopes = [2i64, -1, 3];
        let (complex, map) = instances::subdivided_segment(&slopes);
        let omega = rat(3, 2);
        let st = st_sum(&complex, &map, core::slice::from_ref(&omega)).unwrap();
        let mut expect = 0u64;
        let mut base = Rat::zero();
        for &a in &slopes {
            let next = &base + &Rat::from_int(a);
            let (lo, hi) = if base < next {
                (base.clone(), next.clone())
            } else {
                (next.clone(), base.clone())
            };
            if lo < omega && omega < hi {
                expect += a.unsigned_abs();
            }
            base = next;
        }
        assert_eq!(st.sum, expect.into());
    }
}
