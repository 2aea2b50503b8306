use proptest::prelude::*;

use super::*;
use crate::degeneracy::{classify_hyperplane, classify_point_dual};
use crate::graph::configuration_graph;
use crate::rational::ratio;

fn config(d: usize, points: &[&[i64]], hyperplanes: &[(&[i64], i64)]) -> Configuration {
    Configuration::new(
        d,
        points.iter().map(|c| Point::from_ints(c).unwrap()).collect(),
        hyperplanes.iter().map(|(c, o)| Hyperplane::from_ints(c, *o).unwrap()).collect(),
    )
    .unwrap()
}

fn assert_transposed(c: &Configuration, dual: &Configuration) {
    let g = configuration_graph(c);
    let h = configuration_graph(dual);
    assert_eq!(g.edge_count(), h.edge_count());
    for i in 0..c.m() {
        for j in 0..c.n() {
            assert_eq!(g.has_edge(i, j), h.has_edge(j, i));
        }
    }
}

fn flat(base: &[i64], dirs: &[&[i64]]) -> Flat {
    let base: Vec<Rational> = base.iter().map(|&x| int(x)).collect();
    let dirs = dirs.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect();
    Flat::from_generators(&base, dirs).proper().unwrap()
}

#[test]
fn duality_swaps_incidences() {
    let c = config(
        3,
        &[&[0, 0, 0], &[1, 2, 3], &[1, 0, 0], &[2, 2, 1]],
        &[(&[1, 1, 1], 0), (&[0, 0, 1], 3), (&[1, -1, 1], -1)],
    );
    let dual = dualize(&c);
    assert!(dual.shear.is_none());
    assert_eq!(dual.config.m(), 3);
    assert_eq!(dual.config.n(), 4);
    assert_transposed(&c, &dual.config);
}

#[test]
fn vertical_hyperplanes_are_sheared_first() {
    // x = 1 and x = y are parallel to the x_d axis in R^2
    let c = config(2, &[&[1, 1], &[1, 5], &[0, 0], &[3, 3]], &[(&[1, 0], 1), (&[1, -1], 0)]);
    let dual = dualize(&c);
    assert!(dual.shear.is_some());
    assert_transposed(&c, &dual.config);
    assert_eq!(configuration_graph(&dual.config).edge_count(), 5);
}

#[test]
fn double_dual_restores_the_graph() {
    let c = config(
        4,
        &[&[0, 0, 0, 0], &[1, 0, 0, 1], &[2, 3, 0, 0]],
        &[(&[0, 0, 0, 1], 0), (&[1, 1, 1, 1], 5), (&[1, 0, 0, 0], 0)],
    );
    let twice = dualize(&dualize(&c).config);
    assert_eq!(configuration_graph(&twice.config), configuration_graph(&c));
}

#[test]
fn empty_configuration_dualizes_to_empty() {
    let c = Configuration::empty(3).unwrap();
    let dual = dualize(&c);
    assert!(dual.config.is_empty());
    let p = generic_project(&[], &[], 2, 1, &ProjectionOptions::default()).unwrap();
    assert!(p.low.is_empty() && p.high.is_empty());
    assert_eq!(p.edge_count, 0);
}

#[test]
fn planes_sharing_a_line_become_lines_through_a_point() {
    let line = flat(&[0, 0, 0, 0], &[&[1, 0, 0, 0]]);
    let p1 = flat(&[0, 0, 0, 0], &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
    let p2 = flat(&[0, 0, 0, 0], &[&[1, 0, 0, 0], &[0, 0, 1, 0]]);
    let proj = generic_project(&[line], &[p1, p2], 2, 42, &ProjectionOptions::default()).unwrap();
    assert_eq!(proj.low.len(), 1);
    assert_eq!(proj.low[0].dim(), 0);
    assert!(proj.high.iter().all(|h| h.dim() == 1));
    assert_ne!(proj.high[0], proj.high[1]);
    assert_eq!(proj.edge_count, 2);
    let c = proj.to_configuration().unwrap();
    assert_eq!((c.dim(), c.m(), c.n()), (2, 1, 2));
    assert_eq!(configuration_graph(&c).edge_count(), 2);
}

#[test]
fn non_containment_is_preserved() {
    // a line meeting a plane in one point is not contained in it
    let line = flat(&[0, 0, 0, 1], &[&[1, 0, 0, 0]]);
    let other = flat(&[0, 0, 0, 0], &[&[0, 1, 0, 0]]);
    let plane = flat(&[0, 0, 0, 0], &[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
    let proj = generic_project(&[line, other], &[plane], 2, 9, &ProjectionOptions::default()).unwrap();
    assert_eq!(proj.edge_count, 1);
    assert_eq!(proj.map.low_dim, 1);
    assert_eq!(proj.map.high_dim, 2);
}

fn crowded_points() -> (Vec<Flat>, Vec<Flat>) {
    let mut low = Vec::new();
    for x in 0..2 {
        for y in 0..2 {
            for z in 0..2 {
                low.push(flat(&[x, y, z], &[]));
            }
        }
    }
    let high = vec![flat(&[0, 0, 0], &[&[1, 1, 1]]), flat(&[0, 1, 2], &[&[1, 0, 0]])];
    (low, high)
}

#[test]
fn degenerate_draws_are_retried() {
    let (low, high) = crowded_points();
    let opts = ProjectionOptions {
        entry_bound: 1,
        retry_cap: 32,
    };
    let retried = (0..200u64)
        .filter_map(|seed| generic_project(&low, &high, 2, seed, &opts).ok())
        .find(|p| p.map.retries_used >= 1)
        .expect("some seed needs a redraw");
    assert_eq!(retried.low.len(), 8);
    let original = build_graph(&low, &high).unwrap();
    assert_eq!(build_graph(&retried.low, &retried.high).unwrap(), original);
}

#[test]
fn retry_cap_is_reported() {
    let (low, high) = crowded_points();
    let opts = ProjectionOptions {
        entry_bound: 1,
        retry_cap: 0,
    };
    let hit = (0..200u64).any(|seed| {
        matches!(
            generic_project(&low, &high, 2, seed, &opts),
            Err(Error::RetryCapExceeded(0))
        )
    });
    assert!(hit);
}

#[test]
fn rejects_impossible_dimensions() {
    let point = flat(&[0, 0, 0], &[]);
    let plane = flat(&[0, 0, 0], &[&[1, 0, 0], &[0, 1, 0]]);
    // a plane over points cannot become a hyperplane of R^2
    assert!(generic_project(&[point], &[plane], 2, 0, &ProjectionOptions::default()).is_err());
    let line = flat(&[0, 0, 0], &[&[1, 0, 0]]);
    let mixed = [line, flat(&[0, 0, 0], &[])];
    assert!(generic_project(&mixed, &[], 2, 0, &ProjectionOptions::default()).is_err());
}

fn small_config(d: usize) -> impl Strategy<Value = Configuration> {
    let point = prop::collection::vec(-3i64..=3, d);
    let hyper = (prop::collection::vec(-2i64..=2, d), -3i64..=3);
    (prop::collection::vec(point, 0..8), prop::collection::vec(hyper, 0..6)).prop_map(move |(ps, hs)| {
        let mut points: Vec<Point> = ps.iter().map(|c| Point::from_ints(c).unwrap()).collect();
        points.sort_by(|a, b| a.coords().cmp(b.coords()));
        points.dedup();
        let mut hyperplanes: Vec<Hyperplane> = hs
            .iter()
            .filter_map(|(c, o)| Hyperplane::from_ints(c, *o).ok())
            .collect();
        hyperplanes.sort_by(|a, b| (a.coeffs(), a.offset()).cmp(&(b.coeffs(), b.offset())));
        hyperplanes.dedup();
        Configuration::new(d, points, hyperplanes).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dualize_preserves_incidences(c in (2usize..=4).prop_flat_map(small_config)) {
        let dual = dualize(&c);
        assert_transposed(&c, &dual.config);
    }

    /// Dual classification of a point equals primal classification of its
    /// dual hyperplane, up to the strict/non-strict tie.
    #[test]
    fn dual_route_agrees(
        base in prop::collection::vec(-2i64..=2, 3),
        normals in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 2..8),
        num in 1i64..4,
    ) {
        let p = Point::from_ints(&base).unwrap();
        let mut hs: Vec<Hyperplane> = normals
            .iter()
            .filter_map(|c| {
                let coeffs: Vec<Rational> = c.iter().map(|&x| int(x)).collect();
                let offset = dot(&coeffs, p.coords());
                Hyperplane::new(coeffs, offset).ok()
            })
            .collect();
        hs.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        hs.dedup();
        prop_assume!(hs.len() >= 2);
        let beta = ratio(num, 4);
        let dual_v = classify_point_dual(&p, &hs, &beta).unwrap();

        let c = Configuration::new(3, vec![p.clone()], hs.clone()).unwrap();
        let dual = dualize(&c).config;
        let primal_v = classify_hyperplane(&dual.hyperplanes()[0], dual.points(), &beta).unwrap();

        prop_assert_eq!(dual_v.total, primal_v.total);
        prop_assert_eq!(dual_v.witness_count, primal_v.witness_count);
        if dual_v.verdict != primal_v.verdict {
            prop_assert!(dual_v.at_boundary && primal_v.at_boundary);
        }
    }

    #[test]
    fn projection_is_deterministic_and_faithful(
        c in small_config(3),
        seed in any::<u64>(),
    ) {
        let low: Vec<Flat> = c.points().iter().map(Flat::point).collect();
        let high: Vec<Flat> = c.hyperplanes().iter().map(Hyperplane::to_flat).collect();
        // lines: intersections of consecutive planes
        let lines: Vec<Flat> = high
            .windows(2)
            .filter_map(|w| w[0].intersect(&w[1]).proper())
            .filter(|f| f.dim() == 1)
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        let opts = ProjectionOptions::default();
        let a = generic_project(&low, &lines, 2, seed, &opts).unwrap();
        let b = generic_project(&low, &lines, 2, seed, &opts).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(build_graph(&a.low, &a.high).unwrap(), build_graph(&low, &lines).unwrap());
    }
}
