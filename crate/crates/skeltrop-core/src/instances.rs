//! Small named instances: subdivided segments with integer-slope maps,
//! folds, embedded triangle graphs, stars, and segments with boundary
//! rays. These drive the certificate examples and the randomized suites.

// index loops are clearer than iterator chains in the matrix code here
#![allow(clippy::needless_range_loop)]

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::balance::PLFunction;
use crate::linalg::IntMatrix;
use crate::polyhedron::AffineMap;
use crate::rat::Rat;
use crate::skeleton::{
    build_from_simplicial, AlphaSpec, AttachmentSpec, CanonicalCell, FaceInclusion, SimplexSpec,
    SimplicialData, WeakTropicalComplex,
};
use crate::tropmap::{CellwiseTropMap, MapPiece};

/// A path of unit-length edges `x0 - x1 - … - xk` mapped to the line with
/// the given integer slope on edge `i` and breakpoints accumulating from 0.
/// Slopes must be nonzero for the index computations to be meaningful, but
/// nothing here enforces that.
pub fn subdivided_segment(slopes: &[i64]) -> (WeakTropicalComplex, CellwiseTropMap) {
    let k = slopes.len();
    assert!(k >= 1);
    let vertices: Vec<String> = (0..=k).map(|i| format!("x{i}")).collect();
    let simplices: Vec<SimplexSpec> = (0..k)
        .map(|i| SimplexSpec {
            name: format!("s{i}"),
            vertices: vec![i, i + 1],
            length: Rat::one(),
        })
        .collect();
    let complex = build_from_simplicial(&SimplicialData {
        vertices,
        simplices,
        vertex_determined: true,
        ..Default::default()
    })
    .expect("path complex is valid");

    let mut maps = BTreeMap::new();
    let mut breakpoint = 0i64;
    for i in 0..k {
        let cell = complex.find_cell(&format!("s{i}")).expect("edge cell");
        // chart coordinate 1 is the distance from vertex x_i
        let linear = IntMatrix::from_rows(&[&[0, slopes[i]]]);
        maps.insert(
            cell,
            AffineMap::new(linear, vec![Rat::from_int(breakpoint)]),
        );
        breakpoint += slopes[i];
    }
    let map = CellwiseTropMap::single(&complex, 1, maps);
    (complex, map)
}

/// Two unit edges folded onto the same segment of the line.
pub fn fold() -> (WeakTropicalComplex, CellwiseTropMap) {
    subdivided_segment(&[1, -1])
}

/// The triangle graph embedded in the plane on the vertices `(0,0)`,
/// `(1,0)`, `(0,1)`, each edge mapped unimodularly; a faithful instance.
pub fn triangle_embedding() -> (WeakTropicalComplex, CellwiseTropMap) {
    let complex = build_from_simplicial(&SimplicialData {
        vertices: vec!["a".into(), "b".into(), "c".into()],
        simplices: vec![
            SimplexSpec {
                name: "ab".into(),
                vertices: vec![0, 1],
                length: Rat::one(),
            },
            SimplexSpec {
                name: "bc".into(),
                vertices: vec![1, 2],
                length: Rat::one(),
            },
            SimplexSpec {
                name: "ac".into(),
                vertices: vec![0, 2],
                length: Rat::one(),
            },
        ],
        vertex_determined: true,
        ..Default::default()
    })
    .expect("triangle graph is valid");

    // On each chart the map sends (v0, v1) to v0 * P + v1 * Q for the two
    // embedded endpoints P, Q in sorted vertex order.
    let coords = [(0i64, 0i64), (1, 0), (0, 1)];
    let mut maps = BTreeMap::new();
    for (name, ends) in [("ab", (0usize, 1usize)), ("bc", (1, 2)), ("ac", (0, 2))] {
        let cell = complex.find_cell(name).unwrap();
        let (p, q) = (coords[ends.0], coords[ends.1]);
        let linear = IntMatrix::from_rows(&[&[p.0, q.0], &[p.1, q.1]]);
        maps.insert(cell, AffineMap::new(linear, vec![Rat::zero(), Rat::zero()]));
    }
    let map = CellwiseTropMap::single(&complex, 2, maps);
    (complex, map)
}

/// Two triangles glued along an edge, mapped affinely into the plane by
/// placing the four vertices; `folded` places the fourth vertex on top of
/// the first so the images coincide.
pub fn two_triangle_embedding(folded: bool) -> (WeakTropicalComplex, CellwiseTropMap) {
    // edge alpha numbers: the boundary edges put their weight on the lower
    // endpoint (deg_b = 1), the shared edge splits 1 + 1 (deg_b = 2)
    let alpha = |sx: usize, face: [usize; 2], vertex: usize, value: i64| AlphaSpec {
        simplex: sx,
        face_vertices: face.to_vec(),
        vertex,
        value,
    };
    let complex = build_from_simplicial(&SimplicialData {
        vertices: vec!["a".into(), "b".into(), "c".into(), "d".into()],
        simplices: vec![
            SimplexSpec {
                name: "T1".into(),
                vertices: vec![0, 1, 2],
                length: Rat::one(),
            },
            SimplexSpec {
                name: "T2".into(),
                vertices: vec![1, 2, 3],
                length: Rat::one(),
            },
        ],
        vertex_determined: true,
        alpha_vertex: vec![
            alpha(0, [0, 1], 0, 1),
            alpha(0, [0, 1], 1, 0),
            alpha(0, [0, 2], 0, 1),
            alpha(0, [0, 2], 2, 0),
            alpha(0, [1, 2], 1, 1),
            alpha(0, [1, 2], 2, 1),
            alpha(1, [1, 3], 1, 1),
            alpha(1, [1, 3], 3, 0),
            alpha(1, [2, 3], 2, 1),
            alpha(1, [2, 3], 3, 0),
        ],
        ..Default::default()
    })
    .expect("two glued triangles are valid");
    let d = if folded { (0i64, 0i64) } else { (1, 1) };
    let coords = [(0i64, 0i64), (1, 0), (0, 1), d];
    let mut maps = BTreeMap::new();
    for (name, verts) in [("T1", [0usize, 1, 2]), ("T2", [1, 2, 3])] {
        let cell = complex.find_cell(name).unwrap();
        let cols: Vec<(i64, i64)> = verts.iter().map(|&v| coords[v]).collect();
        let linear = IntMatrix::from_rows(&[
            &[cols[0].0, cols[1].0, cols[2].0],
            &[cols[0].1, cols[1].1, cols[2].1],
        ]);
        maps.insert(cell, AffineMap::new(linear, vec![Rat::zero(), Rat::zero()]));
    }
    let map = CellwiseTropMap::single(&complex, 2, maps);
    (complex, map)
}

/// A single vertex with `k` unbounded rays and the function with the given
/// ray slopes. The balancing identity at the vertex asks the slopes to sum
/// to zero.
pub fn star(slopes: &[i64]) -> (WeakTropicalComplex, PLFunction) {
    let k = slopes.len();
    assert!(k >= 1);
    let labels: Vec<String> = (0..k).map(|i| format!("R{i}")).collect();
    let mut cells = vec![CanonicalCell {
        name: "o".into(),
        stratum_label: "o".into(),
        stratum_dim: None,
        r: 0,
        s: 0,
        length: Rat::zero(),
        vertex_ids: vec![0],
        ray_labels: vec![],
    }];
    let mut inclusions = Vec::new();
    for i in 0..k {
        cells.push(CanonicalCell {
            name: format!("o*R{i}"),
            stratum_label: format!("o*R{i}"),
            stratum_dim: None,
            r: 0,
            s: 1,
            length: Rat::zero(),
            vertex_ids: vec![0],
            ray_labels: vec![i],
        });
        inclusions.push(FaceInclusion {
            child: 0,
            parent: i + 1,
            coordinate_map: vec![0],
        });
    }
    let complex = WeakTropicalComplex::new(
        1,
        vec!["o".into()],
        labels,
        cells,
        inclusions,
        BTreeMap::new(),
        BTreeMap::new(),
        Vec::new(),
    );
    debug_assert!(complex.validate().is_valid());
    let mut vertex_values = BTreeMap::new();
    vertex_values.insert(0usize, Rat::zero());
    let ray_slopes: BTreeMap<usize, i64> = slopes.iter().copied().enumerate().collect();
    let f = PLFunction {
        vertex_values,
        ray_slopes,
        subdivisions: BTreeMap::new(),
    };
    (complex, f)
}

/// A unit segment whose endpoints carry one boundary ray each, together
/// with the linear function of slope one: its divisor is cancelled by the
/// retraction of the boundary multiplicities -1 and +1.
pub fn segment_with_boundary_rays() -> (WeakTropicalComplex, PLFunction) {
    let complex = build_from_simplicial(&SimplicialData {
        vertices: vec!["x0".into(), "x1".into()],
        ray_labels: vec!["L0".into(), "L1".into()],
        simplices: vec![SimplexSpec {
            name: "e".into(),
            vertices: vec![0, 1],
            length: Rat::one(),
        }],
        vertex_determined: true,
        attachments: vec![
            AttachmentSpec {
                name: "x0*L0".into(),
                simplex: 0,
                base_vertices: vec![0],
                labels: vec![0],
            },
            AttachmentSpec {
                name: "x1*L1".into(),
                simplex: 0,
                base_vertices: vec![1],
                labels: vec![1],
            },
        ],
        ..Default::default()
    })
    .expect("segment with boundary rays is valid");
    let mut vertex_values = BTreeMap::new();
    vertex_values.insert(0usize, Rat::zero());
    vertex_values.insert(1usize, Rat::one());
    let mut ray_slopes = BTreeMap::new();
    ray_slopes.insert(0usize, -1i64);
    ray_slopes.insert(1usize, 1i64);
    let f = PLFunction {
        vertex_values,
        ray_slopes,
        subdivisions: BTreeMap::new(),
    };
    (complex, f)
}

/// A piecewise map on one edge, split at the midpoint into two pieces with
/// the given slopes; continuity fixes the second breakpoint.
pub fn two_piece_segment(slope_a: i64, slope_b: i64) -> (WeakTropicalComplex, CellwiseTropMap) {
    use crate::polyhedron::{Halfspace, Polyhedron};
    let complex = build_from_simplicial(&SimplicialData {
        vertices: vec!["x0".into(), "x1".into()],
        simplices: vec![SimplexSpec {
            name: "e".into(),
            vertices: vec![0, 1],
            length: Rat::one(),
        }],
        vertex_determined: true,
        ..Default::default()
    })
    .expect("segment is valid");
    let cell = complex.find_cell("e").unwrap();
    let chart = complex.cell(cell).chart();
    let half = Rat::new(1, 2);
    let lower = chart
        .intersect(&Polyhedron::new(
            2,
            vec![Halfspace::new(vec![0, -1], half.clone())],
            vec![],
        ))
        .unwrap();
    let upper = chart
        .intersect(&Polyhedron::new(
            2,
            vec![Halfspace::new(vec![0, 1], -half)],
            vec![],
        ))
        .unwrap();
    // first piece: a * v1; second piece: a/2 + b (v1 - 1/2), with the
    // common value at the midpoint baked into the translation
    let piece_a = MapPiece {
        domain: lower,
        map: AffineMap::new(IntMatrix::from_rows(&[&[0, slope_a]]), vec![Rat::zero()]),
    };
    let piece_b = MapPiece {
        domain: upper,
        map: AffineMap::new(
            IntMatrix::from_rows(&[&[0, slope_b]]),
            vec![Rat::new(slope_a - slope_b, 2)],
        ),
    };
    let mut pieces = BTreeMap::new();
    pieces.insert(cell, vec![piece_a, piece_b]);
    (
        complex,
        CellwiseTropMap {
            target_rank: 1,
            pieces,
        },
    )
}
