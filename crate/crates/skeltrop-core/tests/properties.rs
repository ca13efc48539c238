//! Property tests for the arithmetic substrate and the polyhedral layer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use skeltrop_core::lattice::{lattice_index, primitive_vector, Index, Lattice};
use skeltrop_core::linalg::{column_hermite_form, smith_normal_form, IntMatrix};
use skeltrop_core::polyhedron::{AffineMap, Halfspace, Polyhedron};
use skeltrop_core::rat::{rat, Rat};
use skeltrop_core::tropmap::{st_sum, CellwiseTropMap};
use skeltrop_core::{balance, instances};

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec(-6i64..=6, rows * cols).prop_map(move |v| {
        IntMatrix::from_entries(rows, cols, v.into_iter().map(BigInt::from).collect())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_recomposes(rows in 1usize..=3, cols in 1usize..=3, seed in proptest::collection::vec(-6i64..=6, 9)) {
        let entries: Vec<BigInt> = seed.into_iter().take(rows * cols).map(BigInt::from).collect();
        prop_assume!(entries.len() == rows * cols);
        let a = IntMatrix::from_entries(rows, cols, entries);
        let snf = smith_normal_form(&a);
        prop_assert_eq!(snf.u.det().abs(), BigInt::one());
        prop_assert_eq!(snf.v.det().abs(), BigInt::one());
        prop_assert_eq!(snf.u.mul(&a).mul(&snf.v), snf.s.clone());
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn hermite_is_canonical(gens in proptest::collection::vec(proptest::collection::vec(-5i64..=5, 3), 1..4), perm in 0usize..6) {
        // the Hermite form does not depend on the generating set: permuting
        // generators or adding a generator already in the span is invisible
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let a = IntMatrix::from_columns(3, &cols);
        let mut shuffled = cols.clone();
        shuffled.rotate_left(perm % cols.len().max(1));
        // add the sum of all generators
        let mut sum = vec![BigInt::zero(); 3];
        for c in &cols {
            for (s, x) in sum.iter_mut().zip(c) {
                *s += x;
            }
        }
        shuffled.push(sum);
        let b = IntMatrix::from_columns(3, &shuffled);
        prop_assert_eq!(column_hermite_form(&a), column_hermite_form(&b));
    }

    #[test]
    fn primitive_vector_scale_invariant(v in proptest::collection::vec(-9i64..=9, 1..4), num in 1i64..=7, den in 1i64..=7) {
        prop_assume!(v.iter().any(|&x| x != 0));
        let x: Vec<Rat> = v.iter().map(|&a| Rat::from_int(a)).collect();
        let scale = rat(num, den);
        let scaled: Vec<Rat> = x.iter().map(|a| a * &scale).collect();
        prop_assert_eq!(primitive_vector(&x).unwrap(), primitive_vector(&scaled).unwrap());
    }

    #[test]
    fn saturation_is_idempotent_with_finite_index(gens in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 3), 1..4)) {
        let cols: Vec<Vec<BigInt>> = gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let l = Lattice::from_generators(3, &cols);
        let s = l.saturate();
        prop_assert_eq!(s.clone(), s.saturate());
        if !l.is_zero() {
            match lattice_index(&l, &s).unwrap() {
                Index::Finite(_) => {}
                Index::Infinite => prop_assert!(false, "saturation changed the rank"),
            }
        }
    }

    #[test]
    fn index_multiplicative_along_towers(m1 in small_matrix(2, 2), m2 in small_matrix(2, 2)) {
        prop_assume!(!m1.det().is_zero() && !m2.det().is_zero());
        let c = Lattice::standard(2);
        let b = Lattice::from_generators(2, &m1.columns());
        let a_cols: Vec<Vec<BigInt>> = m1.mul(&m2).columns();
        let a = Lattice::from_generators(2, &a_cols);
        let iab = lattice_index(&a, &b).unwrap();
        let ibc = lattice_index(&b, &c).unwrap();
        let iac = lattice_index(&a, &c).unwrap();
        prop_assert_eq!(
            iac.finite().unwrap().clone(),
            iab.finite().unwrap() * ibc.finite().unwrap()
        );
    }

    #[test]
    fn vrep_hrep_round_trip(points in proptest::collection::vec(proptest::collection::vec(-4i64..=4, 2), 1..5)) {
        // polytope = hull of small integer points; round-trip through the
        // V-representation must reproduce the same point set
        let vertices: Vec<Vec<Rat>> = points
            .iter()
            .map(|p| p.iter().map(|&x| Rat::from_int(x)).collect())
            .collect();
        let p = Polyhedron::from_generators(2, &vertices, &[], &[]);
        let v = p.vertices_and_rays().unwrap();
        let q = Polyhedron::from_generators(2, &v.vertices, &v.rays, &[]);
        prop_assert!(p.same_set(&q).unwrap());
        for x in &vertices {
            prop_assert!(p.contains_point(x));
        }
    }

    #[test]
    fn hrep_vrep_round_trip_from_random_constraints(
        rank in 2usize..=3,
        normals in proptest::collection::vec(proptest::collection::vec(-3i64..=3, 3), 1..8),
        consts in proptest::collection::vec(-4i64..=4, 8),
    ) {
        let ineqs: Vec<Halfspace> = normals
            .iter()
            .zip(&consts)
            .map(|(u, &c)| Halfspace::new(u[..rank].to_vec(), Rat::new(c, 2)))
            .collect();
        let p = Polyhedron::new(rank, ineqs, vec![]);
        prop_assume!(!p.is_empty());
        let v = match p.vertices_and_rays() {
            Ok(v) => v,
            Err(_) => return Ok(()), // lineality: out of scope for the V-representation
        };
        let q = Polyhedron::from_generators(rank, &v.vertices, &v.rays, &[]);
        prop_assert!(p.same_set(&q).unwrap());
    }

    #[test]
    fn index_multiplicative_under_composition(f in small_matrix(2, 2), g in small_matrix(2, 2)) {
        // on the unit square; composition of injective maps
        prop_assume!(!f.det().is_zero() && !g.det().is_zero());
        let square = Polyhedron::new(
            2,
            vec![
                Halfspace::new(vec![1, 0], Rat::zero()),
                Halfspace::new(vec![-1, 0], Rat::one()),
                Halfspace::new(vec![0, 1], Rat::zero()),
                Halfspace::new(vec![0, -1], Rat::one()),
            ],
            vec![],
        );
        let fm = AffineMap::new(f, vec![Rat::zero(), Rat::zero()]);
        let gm = AffineMap::new(g, vec![Rat::zero(), Rat::zero()]);
        let gf = gm.compose(&fm);
        let image = fm.image_polyhedron(&square).unwrap();
        let i_f = fm.lattice_index_on(&square).unwrap();
        let i_g = gm.lattice_index_on(&image).unwrap();
        let i_gf = gf.lattice_index_on(&square).unwrap();
        prop_assert_eq!(
            i_gf.finite().unwrap().clone(),
            i_f.finite().unwrap() * i_g.finite().unwrap()
        );
    }
}

#[test]
fn values_are_shareable_across_threads() {
    // everything is immutable after construction and safe to share
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Rat>();
    assert_send_sync::<IntMatrix>();
    assert_send_sync::<Lattice>();
    assert_send_sync::<Polyhedron>();
    assert_send_sync::<AffineMap>();
    assert_send_sync::<skeltrop_core::WeakTropicalComplex>();
    assert_send_sync::<skeltrop_core::balance::PLFunction>();
    assert_send_sync::<CellwiseTropMap>();
    assert_send_sync::<skeltrop_core::mumford::TorusTriangulation>();

    let (complex, f) = instances::segment_with_boundary_rays();
    let complex = std::sync::Arc::new(complex);
    let f = std::sync::Arc::new(f);
    let handles: Vec<_> = (0..4)
        .map(|_| {
            let complex = complex.clone();
            let f = f.clone();
            std::thread::spawn(move || {
                balance::check_bounded_formula(&complex, &f)
                    .unwrap()
                    .passed()
            })
        })
        .collect();
    for h in handles {
        assert!(h.join().unwrap());
    }
}

#[test]
fn recession_cone_commutes_with_injective_images() {
    // P = [0,1] x R+ under a shear and under an embedding into rank 3
    let p = Polyhedron::new(
        2,
        vec![
            Halfspace::new(vec![1, 0], Rat::zero()),
            Halfspace::new(vec![-1, 0], Rat::one()),
            Halfspace::new(vec![0, 1], Rat::zero()),
        ],
        vec![],
    );
    let maps = [
        AffineMap::new(
            IntMatrix::from_rows(&[&[1, 1], &[0, 1]]),
            vec![rat(1, 2), Rat::zero()],
        ),
        AffineMap::new(
            IntMatrix::from_rows(&[&[1, 0], &[0, 1], &[1, -1]]),
            vec![Rat::zero(), Rat::zero(), rat(3, 1)],
        ),
    ];
    for f in maps {
        let img = f.image_polyhedron(&p).unwrap();
        let lhs = img.recession_cone().unwrap();
        let linear_only = AffineMap::new(f.linear.clone(), vec![Rat::zero(); f.target_rank()]);
        let rhs = linear_only
            .image_polyhedron(&p.recession_cone().unwrap())
            .unwrap();
        assert!(lhs.same_set(&rhs).unwrap());
    }
}

#[test]
fn st_sum_invariant_under_common_translation() {
    let (complex, map) = instances::subdivided_segment(&[2, -1, 3]);
    let omega = vec![rat(3, 2)];
    let before = st_sum(&complex, &map, &omega).unwrap();
    let shift = rat(7, 3);
    let shifted = CellwiseTropMap {
        target_rank: map.target_rank,
        pieces: map
            .pieces
            .iter()
            .map(|(&c, pieces)| {
                (
                    c,
                    pieces
                        .iter()
                        .map(|p| skeltrop_core::tropmap::MapPiece {
                            domain: p.domain.clone(),
                            map: AffineMap::new(
                                p.map.linear.clone(),
                                p.map.translation.iter().map(|t| t + &shift).collect(),
                            ),
                        })
                        .collect(),
                )
            })
            .collect(),
    };
    let after = st_sum(&complex, &shifted, &[&omega[0] + &shift]).unwrap();
    assert_eq!(before.sum, after.sum);
    assert_eq!(before.entries, after.entries);
}

#[test]
fn index_invariant_under_unimodular_reparameterization() {
    // reparameterizing the chart by a determinant +-1 integer affine change
    // of coordinates leaves every lattice index unchanged
    let (complex, map) = instances::subdivided_segment(&[3]);
    let cell = complex.find_cell("s0").unwrap();
    let piece = &map.pieces[&cell][0];
    let reparams = [
        (
            IntMatrix::from_rows(&[&[0, 1], &[1, 0]]),
            IntMatrix::from_rows(&[&[0, 1], &[1, 0]]),
        ),
        (
            IntMatrix::from_rows(&[&[1, 2], &[0, 1]]),
            IntMatrix::from_rows(&[&[1, -2], &[0, 1]]),
        ),
        (
            IntMatrix::from_rows(&[&[1, 0], &[3, 1]]),
            IntMatrix::from_rows(&[&[1, 0], &[-3, 1]]),
        ),
    ];
    let base = piece.map.lattice_index_on(&piece.domain).unwrap();
    for (a, a_inv) in reparams {
        assert_eq!(a.mul(&a_inv), IntMatrix::identity(2));
        let fwd = AffineMap::new(a, vec![rat(1, 3), rat(-2, 1)]);
        let domain = fwd.image_polyhedron(&piece.domain).unwrap();
        let inv_translation: Vec<Rat> = {
            let t = a_inv.mul_rat_vec(&fwd.translation);
            t.iter().map(|x| -x).collect()
        };
        let back = AffineMap::new(a_inv, inv_translation);
        let new_map = piece.map.compose(&back);
        assert_eq!(new_map.lattice_index_on(&domain).unwrap(), base);
    }
}

#[test]
fn bounded_check_reduces_to_div_when_no_unbounded_cells() {
    // with all horizontal orders zero on a complex without unbounded cells,
    // the retraction divisor vanishes and the bounded identity is div F = 0
    let (complex, map) = instances::subdivided_segment(&[1, 1]);
    drop(map);
    let mut values = BTreeMap::new();
    values.insert(0usize, Rat::zero());
    values.insert(1usize, Rat::one());
    values.insert(2usize, rat(2, 1));
    let f = balance::from_multiplicities(&complex, &values, &BTreeMap::new()).unwrap();
    let tau = balance::retraction_divisor(&complex, &f).unwrap();
    assert!(tau.is_zero());
    // with tau = 0 the check is exactly "div F = 0": the interior vertex
    // balances, the two endpoints each report their single outgoing slope
    let report = balance::check_bounded_formula(&complex, &f).unwrap();
    let mut violated: Vec<(String, Rat)> = report.violations.clone();
    violated.sort();
    let mut expected: Vec<(String, Rat)> = Vec::new();
    for t in complex.codim_one_cells() {
        let d = balance::div_coefficient(&complex, &f, t).unwrap();
        if !d.is_zero() {
            expected.push((complex.cell(t).name.clone(), d));
        }
    }
    expected.sort();
    assert_eq!(violated, expected);
    assert_eq!(violated.len(), 2);
}

#[test]
fn faithful_implies_section_at_generic_points() {
    let (complex, map) = instances::triangle_embedding();
    assert!(
        skeltrop_core::tropmap::faithfulness_certificate(&complex, &map)
            .unwrap()
            .passed()
    );
    let generic = [
        vec![rat(1, 3), Rat::zero()],
        vec![Rat::zero(), rat(2, 5)],
        vec![rat(1, 2), rat(1, 2)],
        vec![rat(1, 4), rat(3, 4)],
    ];
    for omega in &generic {
        let verdict = skeltrop_core::tropmap::section_certificate(&complex, &map, omega).unwrap();
        assert!(verdict.passed(), "at {omega:?}: {verdict:?}");
    }
}
