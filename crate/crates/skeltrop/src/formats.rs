//! JSON interchange formats and their conversions to the core types.
//!
//! Rationals travel as strings `"p/q"` in lowest terms with positive
//! denominator (`"p"` when integral); matrices as row-major arrays.
//! Cells, vertices and labels are referenced by name.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context, Result};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use skeltrop_core::balance::PLFunction;
use skeltrop_core::linalg::IntMatrix;
use skeltrop_core::polyhedron::{AffineMap, Halfspace, Polyhedron};
use skeltrop_core::rat::Rat;
use skeltrop_core::skeleton::{CanonicalCell, FaceInclusion, WeakTropicalComplex};
use skeltrop_core::tropmap::{CellwiseTropMap, MapPiece};

fn parse_rat(s: &str) -> Result<Rat> {
    Rat::parse(s).map_err(|e| anyhow!("{e}"))
}

#[derive(Serialize, Deserialize)]
pub struct ComplexFile {
    pub dimension: usize,
    pub vertices: Vec<String>,
    #[serde(default)]
    pub ray_labels: Vec<String>,
    pub cells: Vec<CellEntry>,
    pub inclusions: Vec<InclusionEntry>,
    #[serde(default)]
    pub alpha_vertex: BTreeMap<String, BTreeMap<String, i64>>,
    #[serde(default)]
    pub alpha_ray: BTreeMap<String, BTreeMap<String, i64>>,
    #[serde(default)]
    pub notes: Vec<String>,
}

#[derive(Serialize, Deserialize)]
pub struct CellEntry {
    pub id: String,
    #[serde(default)]
    pub stratum: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stratum_dim: Option<usize>,
    pub r: usize,
    pub s: usize,
    pub length: String,
    pub vertex_ids: Vec<String>,
    #[serde(default)]
    pub ray_labels: Vec<String>,
}

#[derive(Serialize, Deserialize)]
pub struct InclusionEntry {
    pub child: String,
    pub parent: String,
    pub coordinate_map: Vec<usize>,
}

pub fn complex_to_file(c: &WeakTropicalComplex) -> ComplexFile {
    let cells = c
        .cells()
        .iter()
        .map(|cell| CellEntry {
            id: cell.name.clone(),
            stratum: cell.stratum_label.clone(),
            stratum_dim: cell.stratum_dim,
            r: cell.r,
            s: cell.s,
            length: cell.length.to_string(),
            vertex_ids: cell
                .vertex_ids
                .iter()
                .map(|&u| c.vertex_names()[u].clone())
                .collect(),
            ray_labels: cell
                .ray_labels
                .iter()
                .map(|&l| c.ray_label_names()[l].clone())
                .collect(),
        })
        .collect();
    let inclusions = c
        .inclusions()
        .iter()
        .map(|inc| InclusionEntry {
            child: c.cell(inc.child).name.clone(),
            parent: c.cell(inc.parent).name.clone(),
            coordinate_map: inc.coordinate_map.clone(),
        })
        .collect();
    let mut alpha_vertex: BTreeMap<String, BTreeMap<String, i64>> = BTreeMap::new();
    for (&(cell, u), &a) in c.alpha_vertex_entries() {
        alpha_vertex
            .entry(c.cell(cell).name.clone())
            .or_default()
            .insert(c.vertex_names()[u].clone(), a);
    }
    let mut alpha_ray: BTreeMap<String, BTreeMap<String, i64>> = BTreeMap::new();
    for (&(cell, l), &a) in c.alpha_ray_entries() {
        alpha_ray
            .entry(c.cell(cell).name.clone())
            .or_default()
            .insert(c.ray_label_names()[l].clone(), a);
    }
    ComplexFile {
        dimension: c.dimension(),
        vertices: c.vertex_names().to_vec(),
        ray_labels: c.ray_label_names().to_vec(),
        cells,
        inclusions,
        alpha_vertex,
        alpha_ray,
        notes: c.notes().to_vec(),
    }
}

pub fn complex_from_file(file: &ComplexFile) -> Result<WeakTropicalComplex> {
    let vertex_id = |name: &str| -> Result<usize> {
        file.vertices
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| anyhow!("unknown vertex {name:?}"))
    };
    let label_id = |name: &str| -> Result<usize> {
        file.ray_labels
            .iter()
            .position(|l| l == name)
            .ok_or_else(|| anyhow!("unknown ray label {name:?}"))
    };
    let cell_id = |name: &str| -> Result<usize> {
        file.cells
            .iter()
            .position(|c| c.id == name)
            .ok_or_else(|| anyhow!("unknown cell {name:?}"))
    };
    let mut cells = Vec::new();
    for entry in &file.cells {
        let vertex_ids = entry
            .vertex_ids
            .iter()
            .map(|v| vertex_id(v))
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("cell {}", entry.id))?;
        let ray_labels = entry
            .ray_labels
            .iter()
            .map(|l| label_id(l))
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("cell {}", entry.id))?;
        cells.push(CanonicalCell {
            name: entry.id.clone(),
            stratum_label: entry.stratum.clone(),
            stratum_dim: entry.stratum_dim,
            r: entry.r,
            s: entry.s,
            length: parse_rat(&entry.length).with_context(|| format!("cell {}", entry.id))?,
            vertex_ids,
            ray_labels,
        });
    }
    let mut inclusions = Vec::new();
    for inc in &file.inclusions {
        inclusions.push(FaceInclusion {
            child: cell_id(&inc.child)?,
            parent: cell_id(&inc.parent)?,
            coordinate_map: inc.coordinate_map.clone(),
        });
    }
    let mut alpha_vertex = BTreeMap::new();
    for (cell, entries) in &file.alpha_vertex {
        let c = cell_id(cell)?;
        for (vertex, &a) in entries {
            alpha_vertex.insert((c, vertex_id(vertex)?), a);
        }
    }
    let mut alpha_ray = BTreeMap::new();
    for (cell, entries) in &file.alpha_ray {
        let c = cell_id(cell)?;
        for (label, &a) in entries {
            alpha_ray.insert((c, label_id(label)?), a);
        }
    }
    Ok(WeakTropicalComplex::new(
        file.dimension,
        file.vertices.clone(),
        file.ray_labels.clone(),
        cells,
        inclusions,
        alpha_vertex,
        alpha_ray,
        file.notes.clone(),
    ))
}

#[derive(Serialize, Deserialize)]
pub struct PlFunctionFile {
    pub vertex_values: BTreeMap<String, String>,
    #[serde(default)]
    pub ray_slopes: BTreeMap<String, i64>,
    /// Optional per-cell keying of the ray slopes. A label carries one
    /// slope throughout the complex, so overrides must all agree (with the
    /// global table and with each other) and merely re-state it per cell.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub cell_ray_slopes: BTreeMap<String, BTreeMap<String, i64>>,
}

pub fn plfunction_to_file(c: &WeakTropicalComplex, f: &PLFunction) -> PlFunctionFile {
    PlFunctionFile {
        vertex_values: f
            .vertex_values
            .iter()
            .map(|(&u, v)| (c.vertex_names()[u].clone(), v.to_string()))
            .collect(),
        ray_slopes: f
            .ray_slopes
            .iter()
            .map(|(&l, &s)| (c.ray_label_names()[l].clone(), s))
            .collect(),
        cell_ray_slopes: BTreeMap::new(),
    }
}

pub fn plfunction_from_file(c: &WeakTropicalComplex, file: &PlFunctionFile) -> Result<PLFunction> {
    let mut vertex_values = BTreeMap::new();
    for (name, value) in &file.vertex_values {
        let u = c
            .find_vertex(name)
            .ok_or_else(|| anyhow!("unknown vertex {name:?}"))?;
        vertex_values.insert(
            u,
            parse_rat(value).with_context(|| format!("vertex {name}"))?,
        );
    }
    let mut ray_slopes = BTreeMap::new();
    for (name, &slope) in &file.ray_slopes {
        let l = c
            .find_label(name)
            .ok_or_else(|| anyhow!("unknown ray label {name:?}"))?;
        ray_slopes.insert(l, slope);
    }
    for (cell_name, entries) in &file.cell_ray_slopes {
        let cell = c
            .find_cell(cell_name)
            .ok_or_else(|| anyhow!("unknown cell {cell_name:?}"))?;
        for (label_name, &slope) in entries {
            let l = c
                .find_label(label_name)
                .ok_or_else(|| anyhow!("unknown ray label {label_name:?}"))?;
            if !c.cell(cell).ray_labels.contains(&l) {
                bail!("cell {cell_name} has no ray {label_name}");
            }
            match ray_slopes.get(&l) {
                Some(&prev) if prev != slope => bail!(
                    "per-cell slope {slope} for {label_name} on {cell_name} disagrees with {prev}"
                ),
                _ => {
                    ray_slopes.insert(l, slope);
                }
            }
        }
    }
    Ok(PLFunction {
        vertex_values,
        ray_slopes,
        subdivisions: BTreeMap::new(),
    })
}

#[derive(Serialize, Deserialize)]
pub struct PolyhedronJson {
    pub rank: usize,
    #[serde(default)]
    pub ineqs: Vec<HalfspaceJson>,
    #[serde(default)]
    pub eqs: Vec<HalfspaceJson>,
}

#[derive(Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub u: Vec<i64>,
    pub gamma: String,
}

pub fn polyhedron_from_json(p: &PolyhedronJson) -> Result<Polyhedron> {
    let conv = |h: &HalfspaceJson| -> Result<Halfspace> {
        if h.u.len() != p.rank {
            bail!("normal of arity {} in rank {}", h.u.len(), p.rank);
        }
        Ok(Halfspace::new(h.u.clone(), parse_rat(&h.gamma)?))
    };
    Ok(Polyhedron::new(
        p.rank,
        p.ineqs.iter().map(&conv).collect::<Result<Vec<_>>>()?,
        p.eqs.iter().map(&conv).collect::<Result<Vec<_>>>()?,
    ))
}

#[derive(Serialize, Deserialize)]
pub struct AffineMapJson {
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<String>,
}

pub fn affine_map_from_json(m: &AffineMapJson) -> Result<AffineMap> {
    let rows = m.linear.len();
    let cols = m.linear.first().map_or(0, Vec::len);
    if m.linear.iter().any(|r| r.len() != cols) {
        bail!("ragged linear part");
    }
    if m.translation.len() != rows {
        bail!(
            "translation of arity {} for {} rows",
            m.translation.len(),
            rows
        );
    }
    let entries: Vec<BigInt> = m
        .linear
        .iter()
        .flat_map(|r| r.iter().map(|&x| BigInt::from(x)))
        .collect();
    let translation = m
        .translation
        .iter()
        .map(|t| parse_rat(t))
        .collect::<Result<Vec<_>>>()?;
    Ok(AffineMap::new(
        IntMatrix::from_entries(rows, cols, entries),
        translation,
    ))
}

#[derive(Serialize, Deserialize)]
pub struct TropMapFile {
    pub target_rank: usize,
    pub cells: BTreeMap<String, CellMapJson>,
}

#[derive(Serialize, Deserialize)]
pub struct CellMapJson {
    pub pieces: Vec<PieceJson>,
}

#[derive(Serialize, Deserialize)]
pub struct PieceJson {
    pub domain: PolyhedronJson,
    pub map: AffineMapJson,
}

pub fn tropmap_from_file(c: &WeakTropicalComplex, file: &TropMapFile) -> Result<CellwiseTropMap> {
    let mut pieces = BTreeMap::new();
    for (name, entry) in &file.cells {
        let cell = c
            .find_cell(name)
            .ok_or_else(|| anyhow!("unknown cell {name:?}"))?;
        let ps = entry
            .pieces
            .iter()
            .map(|p| {
                Ok(MapPiece {
                    domain: polyhedron_from_json(&p.domain)?,
                    map: affine_map_from_json(&p.map)?,
                })
            })
            .collect::<Result<Vec<_>>>()
            .with_context(|| format!("cell {name}"))?;
        pieces.insert(cell, ps);
    }
    Ok(CellwiseTropMap {
        target_rank: file.target_rank,
        pieces,
    })
}

pub fn polyhedron_to_json(p: &Polyhedron) -> Result<PolyhedronJson> {
    let conv = |h: &Halfspace| -> Result<HalfspaceJson> {
        let u = h
            .normal
            .iter()
            .map(|x| i64::try_from(x.clone()).map_err(|_| anyhow!("normal entry too large")))
            .collect::<Result<Vec<_>>>()?;
        Ok(HalfspaceJson {
            u,
            gamma: h.constant.to_string(),
        })
    };
    Ok(PolyhedronJson {
        rank: p.rank(),
        ineqs: p.ineqs().iter().map(&conv).collect::<Result<Vec<_>>>()?,
        eqs: p.eqs().iter().map(&conv).collect::<Result<Vec<_>>>()?,
    })
}

pub fn affine_map_to_json(m: &AffineMap) -> Result<AffineMapJson> {
    let mut linear = Vec::new();
    for i in 0..m.linear.rows() {
        let mut row = Vec::new();
        for j in 0..m.linear.cols() {
            row.push(
                i64::try_from(m.linear[(i, j)].clone())
                    .map_err(|_| anyhow!("linear entry too large"))?,
            );
        }
        linear.push(row);
    }
    Ok(AffineMapJson {
        linear,
        translation: m.translation.iter().map(|t| t.to_string()).collect(),
    })
}

pub fn tropmap_to_file(c: &WeakTropicalComplex, map: &CellwiseTropMap) -> Result<TropMapFile> {
    let mut cells = BTreeMap::new();
    for (&cell, pieces) in &map.pieces {
        let ps = pieces
            .iter()
            .map(|p| {
                Ok(PieceJson {
                    domain: polyhedron_to_json(&p.domain)?,
                    map: affine_map_to_json(&p.map)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        cells.insert(c.cell(cell).name.clone(), CellMapJson { pieces: ps });
    }
    Ok(TropMapFile {
        target_rank: map.target_rank,
        cells,
    })
}

/// Parses a comma-separated rational vector like `1/2,3,-5/4`.
pub fn parse_omega(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(|part| parse_rat(part.trim()))
        .collect::<Result<Vec<_>>>()
        .context("query point must be a comma-separated list of rationals")
}
