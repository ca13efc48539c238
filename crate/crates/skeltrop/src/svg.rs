//! SVG rendering of the two-dimensional bounded complex over a torus
//! triangulation: the fundamental square unrolled, vertices labeled with
//! function values, unbounded stripes drawn as truncated dashed arrows.
//! All coordinates are integers, so the output is byte-stable.

use std::fmt::Write as _;

use skeltrop_core::balance::PLFunction;
use skeltrop_core::mumford::TorusTriangulation;
use skeltrop_core::skeleton::{Extension, WeakTropicalComplex};

const SCALE: i64 = 120;
const MARGIN: i64 = 90;

pub fn render(
    triangulation: &TorusTriangulation,
    complex: &WeakTropicalComplex,
    f: &PLFunction,
) -> String {
    let m = triangulation.grid_denominator();
    let size = m * SCALE + 2 * MARGIN;
    let px = |i: i64| -> i64 { MARGIN + i * SCALE };
    // flip the y axis so the origin sits at the lower left
    let py = |j: i64| -> i64 { MARGIN + (m - j) * SCALE };

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size} {size}\" width=\"{size}\" height=\"{size}\">"
    );
    let _ = writeln!(
        s,
        "<rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"white\"/>"
    );

    // edges of the triangulation, unrolled over the fundamental square:
    // periodic translates that still land in [0, m]^2 are drawn too
    for e in triangulation.edges() {
        for shift in [(0, 0), (m, 0), (0, m), (m, m), (-m, 0), (0, -m)] {
            let a = (e[0].0 + shift.0, e[0].1 + shift.1);
            let b = (e[1].0 + shift.0, e[1].1 + shift.1);
            let inside = |p: (i64, i64)| p.0 >= 0 && p.0 <= m && p.1 >= 0 && p.1 <= m;
            if !inside(a) || !inside(b) {
                continue;
            }
            let _ = writeln!(
                s,
                "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\" stroke-width=\"2\"/>",
                px(a.0),
                py(a.1),
                px(b.0),
                py(b.1)
            );
        }
    }

    // truncated arrows for the stripes: for every edge carrying an
    // unbounded maximal cell, a dashed stub from the midpoint in the
    // outward perpendicular direction, labeled by the component
    for e in triangulation.edges() {
        let name = triangulation.edge_name(&e);
        let Some(cell) = complex.find_cell(&name) else {
            continue;
        };
        let Ok(extensions) = complex.extensions(cell) else {
            continue;
        };
        let mut offset = 0i64;
        for (_, ext) in extensions {
            let Extension::Unbounded(label) = ext else {
                continue;
            };
            let (mx2, my2) = (e[0].0 + e[1].0, e[0].1 + e[1].1); // midpoint * 2
            let (dx, dy) = (e[1].0 - e[0].0, e[1].1 - e[0].1);
            let (nx, ny) = (dy, -dx); // perpendicular, unit-ish in grid terms
            let base_x = MARGIN + mx2 * SCALE / 2;
            let base_y = MARGIN + (2 * m - my2) * SCALE / 2;
            let tip_x = base_x + nx * SCALE / 3 + offset * nx * 12;
            let tip_y = base_y - ny * SCALE / 3 - offset * ny * 12;
            let _ = writeln!(
                s,
                "<line x1=\"{base_x}\" y1=\"{base_y}\" x2=\"{tip_x}\" y2=\"{tip_y}\" stroke=\"gray\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>"
            );
            let _ = writeln!(
                s,
                "<text x=\"{}\" y=\"{}\" font-size=\"20\" fill=\"gray\">{}</text>",
                tip_x + 4,
                tip_y,
                complex.ray_label_names()[label]
            );
            offset += 1;
        }
    }

    // vertices with their function values
    for p in triangulation.vertices() {
        let name = triangulation.vertex_name(p);
        let value = complex
            .find_vertex(&name)
            .and_then(|u| f.value(u))
            .map(|v| v.to_string())
            .unwrap_or_default();
        let _ = writeln!(
            s,
            "<circle cx=\"{}\" cy=\"{}\" r=\"6\" fill=\"black\"/>",
            px(p.0),
            py(p.1)
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-size=\"24\">{} F={}</text>",
            px(p.0) + 10,
            py(p.1) - 10,
            name,
            value
        );
    }
    s.push_str("</svg>\n");
    s
}
