//! Piecewise-linear functions on weak tropical complexes and the slope
//! calculus: bounded and unbounded slopes, div and hat-div, the retraction
//! divisors, and checkers for the two balancing identities.
//!
//! A function is stored as rational vertex values plus one integer slope
//! per horizontal label; that data is canonical (per-cell linear functionals
//! are not, since the chart coordinates satisfy a linear relation), and
//! continuity across faces is automatic.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::polyhedron::Polyhedron;
use crate::rat::Rat;
use crate::skeleton::{CellId, Extension, LabelId, VertexId, WeakTropicalComplex};

/// A piece of an optional per-cell subdivision: an affine functional on a
/// sub-polyhedron of the chart. Functions carrying subdivisions are outside
/// the slope calculus and are rejected by it.
#[derive(Clone, Debug)]
pub struct SubdivisionPiece {
    pub domain: Polyhedron,
    pub coefficients: Vec<Rat>,
    pub constant: Rat,
}

/// A piecewise integral Γ-affine function on a complex.
#[derive(Clone, Debug, Default)]
pub struct PLFunction {
    pub vertex_values: BTreeMap<VertexId, Rat>,
    pub ray_slopes: BTreeMap<LabelId, i64>,
    /// Cells on which the function is given by an explicit subdivision
    /// instead of canonical data.
    pub subdivisions: BTreeMap<CellId, Vec<SubdivisionPiece>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BalanceError {
    NotCodimOne(String),
    NotAFace(String, String),
    MissingVertexValue(String),
    MissingRaySlope(String),
    MissingAlphaVertex { cell: String, vertex: String },
    MissingAlphaRay { cell: String, label: String },
    DivisionByZeroDegree(String),
    IntegralityViolation { cell: String, detail: String },
    SubdividedCell(String),
}

impl fmt::Display for BalanceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BalanceError::NotCodimOne(c) => write!(f, "cell {c} is not of codimension one"),
            BalanceError::NotAFace(t, s) => write!(f, "{t} is not a face of {s}"),
            BalanceError::MissingVertexValue(u) => write!(f, "no value at vertex {u}"),
            BalanceError::MissingRaySlope(l) => write!(f, "no slope for label {l}"),
            BalanceError::MissingAlphaVertex { cell, vertex } => {
                write!(f, "missing α({vertex}, {cell})")
            }
            BalanceError::MissingAlphaRay { cell, label } => {
                write!(f, "missing ray α({label}, {cell})")
            }
            BalanceError::DivisionByZeroDegree(c) => {
                write!(f, "degree of {c} is zero in the slope formula")
            }
            BalanceError::IntegralityViolation { cell, detail } => {
                write!(f, "integrality violated on {cell}: {detail}")
            }
            BalanceError::SubdividedCell(c) => write!(
                f,
                "cell {c} carries a subdivision; the slope calculus needs canonical data"
            ),
        }
    }
}

/// A formal rational combination of codimension-one cells.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CodimOneDivisor {
    pub coefficients: BTreeMap<CellId, Rat>,
}

impl CodimOneDivisor {
    pub fn coefficient(&self, cell: CellId) -> Rat {
        self.coefficients
            .get(&cell)
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    fn set(&mut self, cell: CellId, value: Rat) {
        if value.is_zero() {
            self.coefficients.remove(&cell);
        } else {
            self.coefficients.insert(cell, value);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// Outcome of one balancing check: violations are genuine failures of the
/// identity; skipped cells lacked the data needed to evaluate it.
#[derive(Clone, Debug, Default)]
pub struct BalanceReport {
    pub violations: Vec<(String, Rat)>,
    pub skipped: Vec<(String, String)>,
    pub checked: usize,
}

impl BalanceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl PLFunction {
    pub fn value(&self, u: VertexId) -> Option<&Rat> {
        self.vertex_values.get(&u)
    }

    pub fn ray_slope(&self, l: LabelId) -> Option<i64> {
        self.ray_slopes.get(&l).copied()
    }

    /// Pointwise sum.
    pub fn add(&self, other: &PLFunction) -> PLFunction {
        let mut vertex_values = self.vertex_values.clone();
        for (u, v) in &other.vertex_values {
            let entry = vertex_values.entry(*u).or_insert_with(Rat::zero);
            *entry = &*entry + v;
        }
        let mut ray_slopes = self.ray_slopes.clone();
        for (l, s) in &other.ray_slopes {
            *ray_slopes.entry(*l).or_insert(0) += s;
        }
        PLFunction {
            vertex_values,
            ray_slopes,
            subdivisions: BTreeMap::new(),
        }
    }

    /// `F + c` for a constant.
    pub fn add_constant(&self, c: &Rat) -> PLFunction {
        let mut out = self.clone();
        for v in out.vertex_values.values_mut() {
            *v += c;
        }
        out
    }

    /// Whether every ray label of a cell has a slope.
    pub fn covers_cell(&self, complex: &WeakTropicalComplex, cell: CellId) -> bool {
        complex
            .cell(cell)
            .ray_labels
            .iter()
            .all(|l| self.ray_slopes.contains_key(l))
    }
}

/// Builds the function determined by per-component orders: vertex values
/// from the vertical orders, ray slopes from the horizontal ones. Fails
/// when the vertex data cannot come from a single function (the difference
/// of two values on a cell of length `v(π)` must lie in `v(π)·Z`).
///
/// Horizontal orders may be partial; cells whose labels have no slope are
/// simply not covered by the resulting function, and checks over them are
/// reported as skipped.
pub fn from_multiplicities(
    complex: &WeakTropicalComplex,
    vertical_ord: &BTreeMap<VertexId, Rat>,
    horizontal_ord: &BTreeMap<LabelId, i64>,
) -> Result<PLFunction, BalanceError> {
    for u in 0..complex.vertex_names().len() {
        if !vertical_ord.contains_key(&u) {
            return Err(BalanceError::MissingVertexValue(
                complex.vertex_names()[u].clone(),
            ));
        }
    }
    let f = PLFunction {
        vertex_values: vertical_ord.clone(),
        ray_slopes: horizontal_ord.clone(),
        subdivisions: BTreeMap::new(),
    };
    check_integrality(complex, &f)?;
    Ok(f)
}

/// The integrality constraint: within each cell of positive length, vertex
/// value differences are integer multiples of the length.
pub fn check_integrality(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
) -> Result<(), BalanceError> {
    for cell in complex.cells() {
        if cell.r == 0 {
            continue;
        }
        for pair in cell.vertex_ids.windows(2) {
            let a = value_of(complex, f, pair[0])?;
            let b = value_of(complex, f, pair[1])?;
            let diff = &b - &a;
            if !diff.is_multiple_of(&cell.length) {
                return Err(BalanceError::IntegralityViolation {
                    cell: cell.name.clone(),
                    detail: format!(
                        "{} - {} = {} is not a multiple of the length {}",
                        complex.vertex_names()[pair[1]],
                        complex.vertex_names()[pair[0]],
                        diff,
                        cell.length
                    ),
                });
            }
        }
    }
    Ok(())
}

fn value_of(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
    u: VertexId,
) -> Result<Rat, BalanceError> {
    f.vertex_values
        .get(&u)
        .cloned()
        .ok_or_else(|| BalanceError::MissingVertexValue(complex.vertex_names()[u].clone()))
}

fn guard_unsubdivided(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
    cell: CellId,
) -> Result<(), BalanceError> {
    if f.subdivisions.contains_key(&cell) {
        return Err(BalanceError::SubdividedCell(
            complex.cell(cell).name.clone(),
        ));
    }
    Ok(())
}

/// The slope of `F` at the codimension-one cell `t` along the maximal cell
/// `s` containing it.
///
/// Bounded extension by the vertex `w`:
/// `(F(w) - (1/deg_b) Σ_u α(u,t) F(u)) / length(s)`.
/// Unbounded extension by the ray `l`:
/// `d_l F - (1/deg_u) Σ_{r ⊂ ρ(t)} α(r,t) d_r F`.
pub fn slope(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
    t: CellId,
    s: CellId,
) -> Result<Rat, BalanceError> {
    if !complex.is_codim_one(t) {
        return Err(BalanceError::NotCodimOne(complex.cell(t).name.clone()));
    }
    guard_unsubdivided(complex, f, t)?;
    guard_unsubdivided(complex, f, s)?;
    let direction = complex.extension_direction(t, s).map_err(|_| {
        BalanceError::NotAFace(complex.cell(t).name.clone(), complex.cell(s).name.clone())
    })?;
    let tcell = complex.cell(t);
    match direction {
        Extension::Bounded(w) => {
            let degb = complex
                .deg_b(t)
                .map_err(|_| BalanceError::NotCodimOne(tcell.name.clone()))?;
            if degb == 0 {
                return Err(BalanceError::DivisionByZeroDegree(tcell.name.clone()));
            }
            let mut weighted = Rat::zero();
            for &u in &tcell.vertex_ids {
                let alpha =
                    complex
                        .alpha_vertex(t, u)
                        .ok_or_else(|| BalanceError::MissingAlphaVertex {
                            cell: tcell.name.clone(),
                            vertex: complex.vertex_names()[u].clone(),
                        })?;
                weighted += &(&Rat::from_int(alpha) * &value_of(complex, f, u)?);
            }
            let fw = value_of(complex, f, w)?;
            let length = &complex.cell(s).length;
            Ok(&(&fw - &(&weighted / &Rat::from_int(degb as i64))) / length)
        }
        Extension::Unbounded(l) => {
            let degu = complex
                .deg_u(t)
                .map_err(|_| BalanceError::NotCodimOne(tcell.name.clone()))?;
            if degu == 0 {
                return Err(BalanceError::DivisionByZeroDegree(tcell.name.clone()));
            }
            let dsf = f.ray_slope(l).ok_or_else(|| {
                BalanceError::MissingRaySlope(complex.ray_label_names()[l].clone())
            })?;
            let mut weighted = Rat::zero();
            for &r in &tcell.ray_labels {
                let alpha =
                    complex
                        .alpha_ray(t, r)
                        .ok_or_else(|| BalanceError::MissingAlphaRay {
                            cell: tcell.name.clone(),
                            label: complex.ray_label_names()[r].clone(),
                        })?;
                let drf = f.ray_slope(r).ok_or_else(|| {
                    BalanceError::MissingRaySlope(complex.ray_label_names()[r].clone())
                })?;
                weighted += &(&Rat::from_int(alpha) * &Rat::from_int(drf));
            }
            Ok(&Rat::from_int(dsf) - &(&weighted / &Rat::from_int(degu as i64)))
        }
    }
}

/// `m(div F, t)`: the sum of the slopes along bounded maximal cells over a
/// bounded codimension-one cell; zero by definition on unbounded cells.
pub fn div_coefficient(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
    t: CellId,
) -> Result<Rat, BalanceError> {
    if !complex.is_codim_one(t) {
        return Err(BalanceError::NotCodimOne(complex.cell(t).name.clone()));
    }
    if !complex.cell(t).is_bounded() {
        return Ok(Rat::zero());
    }
    let mut sum = Rat::zero();
    for (s, ext) in complex
        .extensions(t)
        .map_err(|_| BalanceError::NotCodimOne(complex.cell(t).name.clone()))?
    {
        if matches!(ext, Extension::Bounded(_)) {
            sum += &slope(complex, f, t, s)?;
        }
    }
    Ok(sum)
}

/// `m(hat-div F, t)`: the sum of the slopes along all maximal cells.
pub fn hatdiv_coefficient(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
    t: CellId,
) -> Result<Rat, BalanceError> {
    if !complex.is_codim_one(t) {
        return Err(BalanceError::NotCodimOne(complex.cell(t).name.clone()));
    }
    let mut sum = Rat::zero();
    for (s, _) in complex
        .extensions(t)
        .map_err(|_| BalanceError::NotCodimOne(complex.cell(t).name.clone()))?
    {
        sum += &slope(complex, f, t, s)?;
    }
    Ok(sum)
}

/// τ(f): the retraction of the boundary multiplicities to the bounded
/// skeleton. On a bounded codimension-one cell the coefficient is the sum
/// of the ray slopes over the unbounded maximal cells extending it.
pub fn retraction_divisor(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
) -> Result<CodimOneDivisor, BalanceError> {
    let mut out = CodimOneDivisor::default();
    for t in complex.codim_one_cells() {
        if !complex.cell(t).is_bounded() {
            continue;
        }
        let mut coeff = Rat::zero();
        for (_, ext) in complex
            .extensions(t)
            .map_err(|_| BalanceError::NotCodimOne(complex.cell(t).name.clone()))?
        {
            if let Extension::Unbounded(l) = ext {
                let d = f.ray_slope(l).ok_or_else(|| {
                    BalanceError::MissingRaySlope(complex.ray_label_names()[l].clone())
                })?;
                coeff += &Rat::from_int(d);
            }
        }
        out.set(t, coeff);
    }
    Ok(out)
}

/// τ̂(f) at infinity: for every maximal stripe-shaped cell `T × R₊` (one
/// unbounded direction), the slope in that direction, keyed by the bounded
/// face and the label.
pub fn boundary_divisor(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
) -> Result<BTreeMap<(CellId, LabelId), i64>, BalanceError> {
    let mut out = BTreeMap::new();
    for s in complex.maximal_cells() {
        let cell = complex.cell(s);
        if cell.s != 1 {
            continue;
        }
        let label = cell.ray_labels[0];
        // The bounded face with the same finite part.
        let t = complex
            .faces(s)
            .into_iter()
            .find(|&t| {
                let c = complex.cell(t);
                c.is_bounded() && c.vertex_ids == cell.vertex_ids
            })
            .expect("a stripe has its finite part as a face");
        let d = f.ray_slope(label).ok_or_else(|| {
            BalanceError::MissingRaySlope(complex.ray_label_names()[label].clone())
        })?;
        out.insert((t, label), d);
    }
    Ok(out)
}

fn is_data_gap(e: &BalanceError) -> bool {
    matches!(
        e,
        BalanceError::MissingAlphaRay { .. }
            | BalanceError::MissingAlphaVertex { .. }
            | BalanceError::MissingRaySlope(_)
            | BalanceError::MissingVertexValue(_)
    )
}

/// Checks the balancing identity `hat-div(F) = 0` on every codimension-one
/// cell. Cells whose evaluation needs data the complex does not carry are
/// reported as skipped, not violated.
pub fn check_pair_formula(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
) -> Result<BalanceReport, BalanceError> {
    let mut report = BalanceReport::default();
    for t in complex.codim_one_cells() {
        match hatdiv_coefficient(complex, f, t) {
            Ok(c) => {
                report.checked += 1;
                if !c.is_zero() {
                    report.violations.push((complex.cell(t).name.clone(), c));
                }
            }
            Err(e) if is_data_gap(&e) => {
                report
                    .skipped
                    .push((complex.cell(t).name.clone(), format!("{e}")));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Checks the bounded balancing identity `div(F) + τ(f) = 0` coefficient
/// by coefficient on the bounded codimension-one cells.
pub fn check_bounded_formula(
    complex: &WeakTropicalComplex,
    f: &PLFunction,
) -> Result<BalanceReport, BalanceError> {
    let mut report = BalanceReport::default();
    for t in complex.codim_one_cells() {
        if !complex.cell(t).is_bounded() {
            continue;
        }
        let total = div_coefficient(complex, f, t).and_then(|div| {
            let mut tau = Rat::zero();
            for (_, ext) in complex
                .extensions(t)
                .map_err(|_| BalanceError::NotCodimOne(complex.cell(t).name.clone()))?
            {
                if let Extension::Unbounded(l) = ext {
                    let d = f.ray_slope(l).ok_or_else(|| {
                        BalanceError::MissingRaySlope(complex.ray_label_names()[l].clone())
                    })?;
                    tau += &Rat::from_int(d);
                }
            }
            Ok(&div + &tau)
        });
        match total {
            Ok(c) => {
                report.checked += 1;
                if !c.is_zero() {
                    report.violations.push((complex.cell(t).name.clone(), c));
                }
            }
            Err(e) if is_data_gap(&e) => {
                report
                    .skipped
                    .push((complex.cell(t).name.clone(), format!("{e}")));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Pretty form of a divisor keyed by cell names.
pub fn divisor_by_name(
    complex: &WeakTropicalComplex,
    d: &CodimOneDivisor,
) -> BTreeMap<String, Rat> {
    d.coefficients
        .iter()
        .map(|(&c, v)| (complex.cell(c).name.clone(), v.clone()))
        .collect()
}
