//! Randomized invariant checks for the profile geometry, the mapped mesh
//! generator, and the CSV serialization.

use proptest::prelude::*;
use robin_bands::geometry::{MollifiedProfile, PlanarDomain, SectorBlockParams, Segment, Shape};
use robin_bands::harness::{parse_csv, write_csv, SweepRow};
use robin_bands::mesh::{generate_mapped_mesh, signed_area, MeshPolicy};

fn flat_box(width: f64, depth: f64) -> PlanarDomain {
    PlanarDomain {
        segments: vec![Segment {
            x_lo: 0.0,
            x_hi: width,
            shape: Shape::Flat,
        }],
        junctions: vec![0.0, width],
        depth,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The mollified profile is even, non-negative, matches the tent outside
    /// the three mollification zones, and its slope never exceeds the tent
    /// slope in magnitude.
    #[test]
    fn profile_invariants(
        theta in 0.3f64..1.3,
        l in 1.0f64..8.0,
        eps_frac in 0.05f64..0.45,
        x_frac in -1.1f64..1.1,
    ) {
        let half = l * theta.tan();
        let eps = eps_frac * half;
        let m = half + eps + 0.5;
        let params = SectorBlockParams::new(theta, l, eps, m).unwrap();
        let profile = MollifiedProfile::new(params).unwrap();
        let hs = params.half_support();
        let x = x_frac * hs;

        let h = profile.height(x);
        prop_assert!(h >= 0.0, "height {} < 0 at x = {}", h, x);
        let h_mirror = profile.height(-x);
        prop_assert!((h - h_mirror).abs() <= 1e-12 * (1.0 + h.abs()),
            "asymmetric: h({}) = {}, h({}) = {}", x, h, -x, h_mirror);

        let s = profile.slope(x);
        prop_assert!(s.abs() <= params.cot() + 1e-10,
            "slope {} exceeds bound {} at x = {}", s, params.cot(), x);

        let ax = x.abs();
        let in_zone = ax <= eps || (ax - half).abs() <= eps;
        if !in_zone {
            let tent = (l - ax * params.cot()).max(0.0);
            prop_assert!((h - tent).abs() <= 1e-11 * (1.0 + tent),
                "profile {} != tent {} at x = {}", h, tent, x);
        }
    }

    /// Every mapped mesh has positive triangle areas, the Euler
    /// characteristic of a disk, and each boundary edge lies on exactly one
    /// triangle.
    #[test]
    fn mapped_mesh_invariants(
        width in 0.5f64..6.0,
        depth in 0.5f64..4.0,
        nx in 2usize..14,
        ny in 2usize..10,
        grading in 1.0f64..2.0,
    ) {
        let domain = flat_box(width, depth);
        let policy = MeshPolicy {
            nx,
            ny,
            grading,
            first_layer: depth / (2.0 * ny as f64),
            local_refine: vec![],
        };
        let mesh = generate_mapped_mesh(&domain, &policy).unwrap();

        let mut edge_use = std::collections::HashMap::new();
        for (t, tri) in mesh.triangles.iter().enumerate() {
            let a = signed_area(&mesh.vertices, *tri);
            prop_assert!(a > 0.0, "triangle {} has area {}", t, a);
            for (p, q) in [(tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])] {
                *edge_use.entry((p.min(q), p.max(q))).or_insert(0usize) += 1;
            }
        }

        let v = mesh.vertices.len() as i64;
        let t = mesh.triangles.len() as i64;
        let e = edge_use.len() as i64;
        prop_assert_eq!(v - e + t, 1, "Euler characteristic violated");

        for &(p, q, _) in &mesh.boundary_edges {
            let key = (p.min(q), p.max(q));
            prop_assert_eq!(edge_use.get(&key).copied(), Some(1),
                "boundary edge {:?} not on exactly one triangle", key);
        }
        let interior = edge_use.values().filter(|&&c| c == 2).count();
        prop_assert_eq!(interior + mesh.boundary_edges.len(), edge_use.len(),
            "some edge is neither interior nor tagged boundary");
    }

    /// CSV serialization round-trips every double bit-for-bit (NaN allowed
    /// in the ratio column, where an undefined ratio is recorded).
    #[test]
    fn csv_round_trip(
        alpha in prop::num::f64::NORMAL | prop::num::f64::ZERO,
        lambda in prop::num::f64::NORMAL | prop::num::f64::ZERO,
        ratio in prop::num::f64::NORMAL | prop::num::f64::ZERO,
        nan_ratio in any::<bool>(),
        n_vertices in 0usize..1_000_000,
        iterations in 0usize..10_000,
        wall in 0.0f64..1e6,
    ) {
        let row = SweepRow {
            alpha,
            lambda,
            ratio: if nan_ratio { f64::NAN } else { ratio },
            n_vertices,
            iterations,
            wall_time_s: wall,
        };
        let text = write_csv(&[row.clone()]);
        let back = parse_csv(&text).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(back[0].alpha.to_bits(), row.alpha.to_bits());
        prop_assert_eq!(back[0].lambda.to_bits(), row.lambda.to_bits());
        if nan_ratio {
            prop_assert!(back[0].ratio.is_nan());
        } else {
            prop_assert_eq!(back[0].ratio.to_bits(), row.ratio.to_bits());
        }
        prop_assert_eq!(back[0].n_vertices, row.n_vertices);
        prop_assert_eq!(back[0].iterations, row.iterations);
        prop_assert_eq!(back[0].wall_time_s.to_bits(), row.wall_time_s.to_bits());
        prop_assert_eq!(write_csv(&back), text);
    }
}
