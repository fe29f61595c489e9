//! Structured mapped triangulations of subgraph domains.
//!
//! Every domain here is vertically convex ({-D < y < H(x)}), so the mesh is
//! built from vertical fibers: nodes on each fiber run from the top curve to
//! the flat bottom with geometrically graded spacing (fine at the Robin top,
//! coarse at depth), and each quad between neighbouring fibers is split along
//! its shorter diagonal. Vertex numbering is deterministic fiber-major order,
//! and uniform refinement keeps parent vertices as a prefix so refined FEM
//! spaces are nested.

use crate::error::{invalid, Error, Result};
use crate::geometry::PlanarDomain;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

/// Which stretch of the domain boundary an edge belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundaryTag {
    RobinTop,
    SideLeft,
    SideRight,
    Bottom,
}

impl BoundaryTag {
    pub const ALL: [BoundaryTag; 4] = [
        BoundaryTag::RobinTop,
        BoundaryTag::SideLeft,
        BoundaryTag::SideRight,
        BoundaryTag::Bottom,
    ];
}

impl fmt::Display for BoundaryTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundaryTag::RobinTop => "RobinTop",
            BoundaryTag::SideLeft => "SideLeft",
            BoundaryTag::SideRight => "SideRight",
            BoundaryTag::Bottom => "Bottom",
        };
        f.write_str(s)
    }
}

impl FromStr for BoundaryTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "RobinTop" => Ok(BoundaryTag::RobinTop),
            "SideLeft" => Ok(BoundaryTag::SideLeft),
            "SideRight" => Ok(BoundaryTag::SideRight),
            "Bottom" => Ok(BoundaryTag::Bottom),
            other => Err(Error::UnknownTag(other.to_string())),
        }
    }
}

/// Conforming triangulation with tagged boundary edges.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 2]>,
    /// Vertex-index triples, counterclockwise.
    pub triangles: Vec<[usize; 3]>,
    pub boundary_edges: Vec<(usize, usize, BoundaryTag)>,
}

/// Meshing knobs: fiber count, layer count, geometric grading toward the top.
#[derive(Debug, Clone)]
pub struct MeshPolicy {
    /// Base number of horizontal intervals across the full width.
    pub nx: usize,
    /// Minimum number of vertical layers per fiber (raised automatically
    /// until the top layer of the longest fiber is at most `first_layer`).
    pub ny: usize,
    /// Geometric ratio of consecutive layer thicknesses, in [1, 2].
    pub grading: f64,
    /// Target thickness of the layer adjacent to the top boundary.
    pub first_layer: f64,
    /// Optional per-interval fiber-density multipliers (x_lo, x_hi, factor).
    pub local_refine: Vec<(f64, f64, f64)>,
}

impl MeshPolicy {
    pub fn validate(&self) -> Result<()> {
        if self.nx < 1 || self.ny < 1 {
            return Err(invalid("mesh policy needs nx >= 1 and ny >= 1"));
        }
        if !(self.grading >= 1.0 && self.grading <= 2.0) {
            return Err(invalid(format!(
                "grading ratio {} must lie in [1, 2]",
                self.grading
            )));
        }
        if !(self.first_layer > 0.0) {
            return Err(invalid("first_layer must be > 0"));
        }
        for &(lo, hi, f) in &self.local_refine {
            if !(lo < hi) || !(f >= 1.0) {
                return Err(invalid(format!(
                    "bad local_refine entry ({lo}, {hi}, {f})"
                )));
            }
        }
        Ok(())
    }
}

/// Number of geometric layers with first thickness `d0` and ratio `r` needed
/// to cover a fiber of length `len`.
fn layers_to_cover(len: f64, d0: f64, r: f64) -> usize {
    if r <= 1.0 + 1e-12 {
        (len / d0).ceil().max(1.0) as usize
    } else {
        // d0·(r^n - 1)/(r - 1) >= len
        let n = ((1.0 + len * (r - 1.0) / d0).ln() / r.ln()).ceil();
        n.max(1.0) as usize
    }
}

/// Cumulative layer fractions from the top: f_0 = 0 < … < f_n = 1 with layer
/// j proportional to r^j, so the top layer is thinnest.
fn layer_fractions(n: usize, r: f64) -> Vec<f64> {
    let mut f = Vec::with_capacity(n + 1);
    if r <= 1.0 + 1e-12 {
        for j in 0..=n {
            f.push(j as f64 / n as f64);
        }
    } else {
        let denom = r.powi(n as i32) - 1.0;
        for j in 0..=n {
            f.push((r.powi(j as i32) - 1.0) / denom);
        }
    }
    f
}

/// Fiber abscissas: uniform spacing `width/nx` refined by the largest
/// applicable local-refine factor per piece, with breakpoints at all domain
/// junctions and refine-interval endpoints so features align with fibers.
fn fiber_abscissas(domain: &PlanarDomain, policy: &MeshPolicy) -> Vec<f64> {
    let (xl, xr) = (domain.x_left(), domain.x_right());
    let mut breaks: Vec<f64> = domain.junctions.clone();
    for &(lo, hi, _) in &policy.local_refine {
        for v in [lo, hi] {
            if v > xl && v < xr {
                breaks.push(v);
            }
        }
    }
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    let base_dx = (xr - xl) / policy.nx as f64;
    let mut xs = vec![xl];
    for w in breaks.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let mid = 0.5 * (lo + hi);
        let factor = policy
            .local_refine
            .iter()
            .filter(|&&(a, b, _)| a <= mid && mid <= b)
            .map(|&(_, _, f)| f)
            .fold(1.0, f64::max);
        let n = ((hi - lo) / (base_dx / factor)).ceil().max(1.0) as usize;
        for i in 1..=n {
            xs.push(lo + (hi - lo) * i as f64 / n as f64);
        }
    }
    xs
}

/// Build the mapped structured mesh of a domain under a policy.
pub fn generate_mapped_mesh(domain: &PlanarDomain, policy: &MeshPolicy) -> Result<TriangleMesh> {
    policy.validate()?;
    let xs = fiber_abscissas(domain, policy);
    let tops: Vec<f64> = xs.iter().map(|&x| domain.height(x)).collect();
    let mut t_max: f64 = 0.0;
    for (&x, &top) in xs.iter().zip(&tops) {
        let len = top + domain.depth;
        if !(len > 0.0) {
            return Err(Error::DegenerateFiber { x, len });
        }
        t_max = t_max.max(len);
    }
    let ny = policy
        .ny
        .max(layers_to_cover(t_max, policy.first_layer, policy.grading));
    let fractions = layer_fractions(ny, policy.grading);

    let nfib = xs.len();
    let mut vertices = Vec::with_capacity(nfib * (ny + 1));
    for (i, &x) in xs.iter().enumerate() {
        let len = tops[i] + domain.depth;
        for &f in &fractions {
            vertices.push([x, tops[i] - f * len]);
        }
    }
    let vid = |i: usize, j: usize| i * (ny + 1) + j;

    let mut triangles = Vec::with_capacity(2 * (nfib - 1) * ny);
    for i in 0..nfib - 1 {
        for j in 0..ny {
            let (a, b) = (vid(i, j), vid(i, j + 1));
            let (c, d) = (vid(i + 1, j), vid(i + 1, j + 1));
            let diag_ad = dist2(&vertices, a, d);
            let diag_bc = dist2(&vertices, b, c);
            let quads = if diag_ad <= diag_bc {
                [[a, b, d], [a, d, c]]
            } else {
                [[a, b, c], [b, d, c]]
            };
            for t in quads {
                triangles.push(orient_ccw(&vertices, t, triangles.len())?);
            }
        }
    }

    let mut boundary_edges = Vec::new();
    for i in 0..nfib - 1 {
        boundary_edges.push((vid(i, 0), vid(i + 1, 0), BoundaryTag::RobinTop));
    }
    for j in 0..ny {
        boundary_edges.push((vid(nfib - 1, j), vid(nfib - 1, j + 1), BoundaryTag::SideRight));
    }
    for i in (0..nfib - 1).rev() {
        boundary_edges.push((vid(i + 1, ny), vid(i, ny), BoundaryTag::Bottom));
    }
    for j in (0..ny).rev() {
        boundary_edges.push((vid(0, j + 1), vid(0, j), BoundaryTag::SideLeft));
    }

    Ok(TriangleMesh {
        vertices,
        triangles,
        boundary_edges,
    })
}

fn dist2(vertices: &[[f64; 2]], a: usize, b: usize) -> f64 {
    let dx = vertices[a][0] - vertices[b][0];
    let dy = vertices[a][1] - vertices[b][1];
    dx * dx + dy * dy
}

fn orient_ccw(vertices: &[[f64; 2]], t: [usize; 3], index: usize) -> Result<[usize; 3]> {
    let area = signed_area(vertices, t);
    let scale = dist2(vertices, t[0], t[1]).max(dist2(vertices, t[0], t[2]));
    if area.abs() <= 1e-14 * scale {
        return Err(Error::DegenerateTriangle { index, area });
    }
    if area > 0.0 {
        Ok(t)
    } else {
        Ok([t[0], t[2], t[1]])
    }
}

/// Signed area of a vertex-index triple; positive for counterclockwise order.
pub fn signed_area(vertices: &[[f64; 2]], [a, b, c]: [usize; 3]) -> f64 {
    let (pa, pb, pc) = (vertices[a], vertices[b], vertices[c]);
    0.5 * ((pb[0] - pa[0]) * (pc[1] - pa[1]) - (pc[0] - pa[0]) * (pb[1] - pa[1]))
}

/// Split every triangle into four by edge midpoints. Parent vertices are kept
/// as a prefix of the new vertex list (nested P1 spaces); boundary edges are
/// split in two and inherit their tag.
pub fn refine_uniform(mesh: &TriangleMesh) -> TriangleMesh {
    let mut vertices = mesh.vertices.clone();
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut mid = |a: usize, b: usize, vertices: &mut Vec<[f64; 2]>| -> usize {
        let key = (a.min(b), a.max(b));
        *midpoint.entry(key).or_insert_with(|| {
            let p = [
                0.5 * (vertices[a][0] + vertices[b][0]),
                0.5 * (vertices[a][1] + vertices[b][1]),
            ];
            vertices.push(p);
            vertices.len() - 1
        })
    };

    let mut triangles = Vec::with_capacity(4 * mesh.triangles.len());
    for &[a, b, c] in &mesh.triangles {
        let ab = mid(a, b, &mut vertices);
        let bc = mid(b, c, &mut vertices);
        let ca = mid(c, a, &mut vertices);
        triangles.push([a, ab, ca]);
        triangles.push([ab, b, bc]);
        triangles.push([ca, bc, c]);
        triangles.push([ab, bc, ca]);
    }

    let mut boundary_edges = Vec::with_capacity(2 * mesh.boundary_edges.len());
    for &(a, b, tag) in &mesh.boundary_edges {
        let m = mid(a, b, &mut vertices);
        boundary_edges.push((a, m, tag));
        boundary_edges.push((m, b, tag));
    }

    TriangleMesh {
        vertices,
        triangles,
        boundary_edges,
    }
}

/// Extremal element statistics: (min angle in degrees, max edge-length
/// aspect ratio, vertex count, triangle count).
pub fn mesh_quality(mesh: &TriangleMesh) -> (f64, f64, usize, usize) {
    let mut min_angle = f64::INFINITY;
    let mut max_aspect: f64 = 1.0;
    for &[a, b, c] in &mesh.triangles {
        let e = [
            dist2(&mesh.vertices, b, c).sqrt(),
            dist2(&mesh.vertices, c, a).sqrt(),
            dist2(&mesh.vertices, a, b).sqrt(),
        ];
        let (lo, hi) = (
            e.iter().cloned().fold(f64::INFINITY, f64::min),
            e.iter().cloned().fold(0.0, f64::max),
        );
        max_aspect = max_aspect.max(hi / lo);
        for k in 0..3 {
            let (opp, p, q) = (e[k], e[(k + 1) % 3], e[(k + 2) % 3]);
            let cos = ((p * p + q * q - opp * opp) / (2.0 * p * q)).clamp(-1.0, 1.0);
            min_angle = min_angle.min(cos.acos().to_degrees());
        }
    }
    (min_angle, max_aspect, mesh.vertices.len(), mesh.triangles.len())
}

/// Structured polar mesh of the regular `n_sectors`-gon inscribed in the
/// circle of the given radius: boundary-graded rings (thickness growing
/// inward by `grading` from `first_layer`) plus a central fan. The whole
/// boundary is tagged `RobinTop`.
pub fn generate_disk_mesh(
    radius: f64,
    n_sectors: usize,
    first_layer: f64,
    grading: f64,
) -> Result<TriangleMesh> {
    if !(radius > 0.0) || n_sectors < 3 {
        return Err(invalid("disk mesh needs radius > 0 and n_sectors >= 3"));
    }
    if !(first_layer > 0.0 && (1.0..=2.0).contains(&grading)) {
        return Err(invalid("disk mesh needs first_layer > 0, grading in [1, 2]"));
    }
    let mut radii = vec![radius];
    let mut d = first_layer;
    loop {
        let r = *radii.last().unwrap();
        // Stop once the next ring would undershoot its own thickness; the
        // remaining core becomes the central fan.
        if r - d < d {
            break;
        }
        radii.push(r - d);
        d *= grading;
    }

    let mut vertices = Vec::with_capacity(radii.len() * n_sectors + 1);
    for &r in &radii {
        for s in 0..n_sectors {
            let phi = 2.0 * std::f64::consts::PI * s as f64 / n_sectors as f64;
            vertices.push([r * phi.cos(), r * phi.sin()]);
        }
    }
    let center = vertices.len();
    vertices.push([0.0, 0.0]);
    let vid = |ring: usize, s: usize| ring * n_sectors + s % n_sectors;

    let mut triangles = Vec::new();
    for ring in 0..radii.len() - 1 {
        for s in 0..n_sectors {
            let (a, b) = (vid(ring, s), vid(ring, s + 1));
            let (c, dd) = (vid(ring + 1, s), vid(ring + 1, s + 1));
            let quads = if dist2(&vertices, a, dd) <= dist2(&vertices, b, c) {
                [[a, b, dd], [a, dd, c]]
            } else {
                [[a, b, c], [b, dd, c]]
            };
            for t in quads {
                triangles.push(orient_ccw(&vertices, t, triangles.len())?);
            }
        }
    }
    let last = radii.len() - 1;
    for s in 0..n_sectors {
        triangles.push(orient_ccw(
            &vertices,
            [vid(last, s), vid(last, s + 1), center],
            triangles.len(),
        )?);
    }

    let boundary_edges = (0..n_sectors)
        .map(|s| (vid(0, s), vid(0, s + 1), BoundaryTag::RobinTop))
        .collect();

    Ok(TriangleMesh {
        vertices,
        triangles,
        boundary_edges,
    })
}

/// Serialize a mesh (`mesh v1` text format: `v x y`, `t i j k`,
/// `b i j TAG` lines, 0-based indices).
pub fn write_mesh(mesh: &TriangleMesh) -> String {
    let mut out = String::from("mesh v1\n");
    for v in &mesh.vertices {
        out.push_str(&format!("v {} {}\n", v[0], v[1]));
    }
    for t in &mesh.triangles {
        out.push_str(&format!("t {} {} {}\n", t[0], t[1], t[2]));
    }
    for &(a, b, tag) in &mesh.boundary_edges {
        out.push_str(&format!("b {a} {b} {tag}\n"));
    }
    out
}

/// Parse the `mesh v1` text format.
pub fn parse_mesh(text: &str) -> Result<TriangleMesh> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("mesh v1") {
        return Err(Error::Parse("missing `mesh v1` header".into()));
    }
    let mut mesh = TriangleMesh {
        vertices: Vec::new(),
        triangles: Vec::new(),
        boundary_edges: Vec::new(),
    };
    for (idx, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let kind = parts.next().unwrap();
        let fields: Vec<&str> = parts.collect();
        let bad = || Error::Parse(format!("mesh line {}: `{line}`", idx + 2));
        match (kind, fields.as_slice()) {
            ("v", [x, y]) => mesh.vertices.push([
                x.parse().map_err(|_| bad())?,
                y.parse().map_err(|_| bad())?,
            ]),
            ("t", [i, j, k]) => mesh.triangles.push([
                i.parse().map_err(|_| bad())?,
                j.parse().map_err(|_| bad())?,
                k.parse().map_err(|_| bad())?,
            ]),
            ("b", [i, j, tag]) => mesh.boundary_edges.push((
                i.parse().map_err(|_| bad())?,
                j.parse().map_err(|_| bad())?,
                tag.parse()?,
            )),
            _ => return Err(bad()),
        }
    }
    Ok(mesh)
}

/// Total mesh area (sum of triangle areas).
pub fn total_area(mesh: &TriangleMesh) -> f64 {
    mesh.triangles
        .iter()
        .map(|&t| signed_area(&mesh.vertices, t))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_block, SectorBlockParams};
    use crate::quad::adaptive_simpson;
    use std::collections::HashSet;
    use std::f64::consts::FRAC_PI_4;

    /// Unit square as a single flat segment (one fiber piece, so nx is the
    /// exact interval count).
    fn square_domain() -> crate::geometry::PlanarDomain {
        crate::geometry::PlanarDomain {
            segments: vec![crate::geometry::Segment {
                x_lo: 0.0,
                x_hi: 1.0,
                shape: crate::geometry::Shape::Flat,
            }],
            junctions: vec![0.0, 1.0],
            depth: 1.0,
        }
    }

    fn uniform_policy(nx: usize, ny: usize) -> MeshPolicy {
        MeshPolicy {
            nx,
            ny,
            grading: 1.0,
            first_layer: 10.0,
            local_refine: vec![],
        }
    }

    #[test]
    fn minimal_square_grid() {
        let mesh = generate_mapped_mesh(&square_domain(), &uniform_policy(1, 1)).unwrap();
        assert_eq!(mesh.vertices.len(), 4);
        assert_eq!(mesh.triangles.len(), 2);
        assert_eq!(mesh.boundary_edges.len(), 4);
        assert!((total_area(&mesh) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rectangle_boundary_count() {
        let (nx, ny) = (7, 4);
        let mesh = generate_mapped_mesh(&square_domain(), &uniform_policy(nx, ny)).unwrap();
        assert_eq!(mesh.boundary_edges.len(), 2 * nx + 2 * ny);
    }

    #[test]
    fn block_mesh_area_matches_quadrature() {
        let params = SectorBlockParams::new(FRAC_PI_4, 1.0, 0.1, 1.2).unwrap();
        let domain = build_block(params, 1.0, 2.0).unwrap();
        let policy = MeshPolicy {
            nx: 200,
            ny: 40,
            grading: 1.1,
            first_layer: 0.05,
            local_refine: vec![],
        };
        let mesh = generate_mapped_mesh(&domain, &policy).unwrap();
        let exact = adaptive_simpson(
            &mut |x| domain.height(x) + domain.depth,
            domain.x_left(),
            domain.x_right(),
            1e-10,
        )
        .unwrap();
        // The mesh is the polygon under the piecewise-linear interpolant of
        // H; with 200+ fibers that is within 1e-6 relative of the integral.
        let area = total_area(&mesh);
        assert!(
            ((area - exact) / exact).abs() < 1e-6,
            "area {area} vs {exact}"
        );
    }

    #[test]
    fn all_triangles_positive_and_euler() {
        let params = SectorBlockParams::new(FRAC_PI_4, 1.0, 0.1, 1.2).unwrap();
        let domain = build_block(params, 0.5, 1.0).unwrap();
        let policy = MeshPolicy {
            nx: 31,
            ny: 9,
            grading: 1.3,
            first_layer: 0.02,
            local_refine: vec![(-0.3, 0.3, 3.0)],
        };
        let mesh = generate_mapped_mesh(&domain, &policy).unwrap();
        for (i, &t) in mesh.triangles.iter().enumerate() {
            assert!(signed_area(&mesh.vertices, t) > 0.0, "triangle {i}");
        }
        // Euler characteristic of a disk-like complex: V - E + T = 1.
        let mut edges: HashSet<(usize, usize)> = HashSet::new();
        for &[a, b, c] in &mesh.triangles {
            for (p, q) in [(a, b), (b, c), (c, a)] {
                edges.insert((p.min(q), p.max(q)));
            }
        }
        let euler =
            mesh.vertices.len() as i64 - edges.len() as i64 + mesh.triangles.len() as i64;
        assert_eq!(euler, 1);
        // Each boundary edge belongs to exactly one triangle.
        let mut count: HashMap<(usize, usize), usize> = HashMap::new();
        for &[a, b, c] in &mesh.triangles {
            for (p, q) in [(a, b), (b, c), (c, a)] {
                *count.entry((p.min(q), p.max(q))).or_default() += 1;
            }
        }
        for &(a, b, _) in &mesh.boundary_edges {
            assert_eq!(count[&(a.min(b), a.max(b))], 1);
        }
    }

    #[test]
    fn fiber_grading_is_geometric() {
        let policy = MeshPolicy {
            nx: 4,
            ny: 12,
            grading: 1.25,
            first_layer: 0.01,
            local_refine: vec![],
        };
        let mesh = generate_mapped_mesh(&square_domain(), &policy).unwrap();
        // Fiber-major numbering: the first fiber occupies the first ny+1
        // vertices, top to bottom.
        let ny = mesh.vertices.len() / 5 - 1;
        let fiber: Vec<f64> = (0..=ny).map(|j| mesh.vertices[j][1]).collect();
        let spacings: Vec<f64> = fiber.windows(2).map(|w| w[0] - w[1]).collect();
        assert!(spacings[0] <= policy.first_layer * (1.0 + 1e-9));
        for w in spacings.windows(2) {
            assert!((w[1] / w[0] - policy.grading).abs() < 1e-9);
        }
    }

    #[test]
    fn refine_counts_and_nesting() {
        let mesh = generate_mapped_mesh(&square_domain(), &uniform_policy(1, 1)).unwrap();
        let fine = refine_uniform(&mesh);
        assert_eq!(fine.triangles.len(), 8);
        assert_eq!(fine.vertices.len(), 9);
        assert_eq!(fine.boundary_edges.len(), 8);
        for (i, v) in mesh.vertices.iter().enumerate() {
            assert_eq!(*v, fine.vertices[i]);
        }
        assert!((total_area(&fine) - total_area(&mesh)).abs() < 1e-15);
        let (a0, _, _, _) = mesh_quality(&mesh);
        let (a1, _, _, _) = mesh_quality(&fine);
        assert!((a0 - a1).abs() < 1e-12);
        assert!((a0 - 45.0).abs() < 1e-12);
    }

    #[test]
    fn quality_on_graded_mesh() {
        let policy = MeshPolicy {
            nx: 8,
            ny: 8,
            grading: 1.2,
            first_layer: 0.02,
            local_refine: vec![],
        };
        let mesh = generate_mapped_mesh(&square_domain(), &policy).unwrap();
        let (min_angle, max_aspect, nv, nt) = mesh_quality(&mesh);
        assert!(min_angle > 0.0 && max_aspect >= 1.0);
        assert_eq!(nv, mesh.vertices.len());
        assert_eq!(nt, mesh.triangles.len());
    }

    #[test]
    fn disk_mesh_sane() {
        let mesh = generate_disk_mesh(1.0, 64, 0.05, 1.3).unwrap();
        for &t in &mesh.triangles {
            assert!(signed_area(&mesh.vertices, t) > 0.0);
        }
        assert_eq!(mesh.boundary_edges.len(), 64);
        // Area of the inscribed 64-gon.
        let exact = 0.5 * 64.0 * (2.0 * std::f64::consts::PI / 64.0).sin();
        assert!((total_area(&mesh) - exact).abs() < 1e-12);
    }

    #[test]
    fn dump_round_trip() {
        let mesh = generate_mapped_mesh(&square_domain(), &uniform_policy(2, 2)).unwrap();
        let text = write_mesh(&mesh);
        let back = parse_mesh(&text).unwrap();
        assert_eq!(back.vertices, mesh.vertices);
        assert_eq!(back.triangles, mesh.triangles);
        assert_eq!(back.boundary_edges, mesh.boundary_edges);
    }
}
