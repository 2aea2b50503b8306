use proptest::prelude::*;

use super::*;
use crate::geometry::{Configuration, Hyperplane, Point};
use crate::graph::{configuration_graph, Side};
use crate::oracle::{max_biclique_oracle, validate_biclique};

fn pt(c: &[i64]) -> Point {
    Point::from_ints(c).unwrap()
}

fn hp(c: &[i64], o: i64) -> Hyperplane {
    Hyperplane::from_ints(c, o).unwrap()
}

fn run(c: &Configuration) -> Extraction {
    extract(c, &ExtractionParams::default()).unwrap()
}

fn check_sound(c: &Configuration, e: &Extraction) {
    assert!(validate_biclique(c, &e.biclique).unwrap());
    for cand in e.trace.candidates() {
        assert!(validate_biclique(c, &cand.biclique).unwrap());
        assert!(cand.biclique.rs <= e.biclique.rs);
    }
    for step in &e.trace.steps {
        if let Some(p) = &step.pigeonhole {
            assert!(p.holds, "{:?}", step.step);
        }
    }
    let g = configuration_graph(c);
    let floor = g.max_degree(Side::Left).max(g.max_degree(Side::Right)) as u64;
    assert!(e.biclique.rs >= floor);
}

#[test]
fn threshold_examples() {
    let p = ExtractionParams::default();
    let t = compute_thresholds(1, 1, 1, 4, &p).unwrap();
    assert_eq!(t.s0.exact, Some(int(1)));
    assert_eq!(t.r0.exact, Some(int(1)));
    assert_eq!(t.log_factor, Some(1.0));

    let t = compute_thresholds(16, 16, 256, 5, &p).unwrap();
    assert_eq!(t.s0.exact, Some(int(16)));
    assert_eq!(t.r0.exact, Some(int(16)));
    assert_eq!(t.t0.unwrap().exact, Some(int(16)));

    let t = compute_thresholds(16, 16, 256, 4, &p).unwrap();
    assert_eq!(t.s0.exact, Some(ratio(1, 256)));

    let t = compute_thresholds(3, 5, 7, 4, &p).unwrap();
    assert!(t.s0.exact.is_none());
    let l = 15f64.log2();
    let expect = 7f64.powf(1.5) / (3f64.powf(1.5) * 5f64.sqrt() * l.powi(4));
    assert!(((t.s0.value - expect) / expect).abs() < 1e-12);

    assert!(compute_thresholds(2, 2, 5, 4, &p).is_err());
    assert!(compute_thresholds(2, 2, 1, 3, &p).is_err());
}

#[test]
fn hypothesis_examples() {
    let one = int(1);
    assert!(check_hypothesis(1 << 15, 1 << 10, 1 << 22, 4, &one).unwrap());
    assert!(!check_hypothesis(1 << 15, 1 << 10, 0, 4, &one).unwrap());
    assert!(!check_hypothesis(1, 1, 0, 5, &int(3)).unwrap());
    assert!(check_hypothesis(1 << 10, 1 << 10, 1 << 19, 5, &one).unwrap());
    // 2^(65/3) + 2^19 is about 3.853e6
    assert!(!check_hypothesis(1 << 15, 1 << 10, 3_850_000, 4, &one).unwrap());
    assert!(check_hypothesis(1 << 15, 1 << 10, 3_860_000, 4, &one).unwrap());
    // both radicals exact: 32 * 8^(2/3) + 8 * 32^(3/5) = 128 + 64
    assert!(check_hypothesis(32, 8, 192, 4, &one).unwrap());
    assert!(!check_hypothesis(32, 8, 191, 4, &one).unwrap());
    assert!(check_hypothesis(32, 8, 96, 4, &ratio(1, 2)).unwrap());
    assert!(check_hypothesis(2, 2, 4, 3, &one).is_err());
}

/// A plane in R^4 with a 5x4 grid of points, fifteen hyperplanes through it,
/// and a little noise.
fn planted_plane() -> Configuration {
    let mut points = Vec::new();
    for a in 0..5 {
        for b in 0..4 {
            points.push(pt(&[a, b, 0, 0]));
        }
    }
    points.extend([pt(&[1, 2, 3, 4]), pt(&[7, 0, 1, 1]), pt(&[2, 2, 2, 9])]);
    let mut hyperplanes: Vec<Hyperplane> = (0..14).map(|k| hp(&[0, 0, 1, k], 0)).collect();
    hyperplanes.push(hp(&[0, 0, 0, 1], 0));
    hyperplanes.extend([hp(&[1, 1, 1, 1], 5), hp(&[1, 0, 0, 0], 2)]);
    Configuration::new(4, points, hyperplanes).unwrap()
}

#[test]
fn planted_plane_is_recovered() {
    let c = planted_plane();
    let e = run(&c);
    check_sound(&c, &e);
    assert!(e.biclique.rs >= 300);
    assert_eq!(e.trace.chosen, Some(Step::Witness));
    assert_eq!(e.biclique.witness.as_ref().unwrap().dim(), 2);
}

#[test]
fn single_hyperplane_gives_star() {
    let points = (0..6).map(|i| pt(&[i, i * i, 0])).collect();
    let c = Configuration::new(3, points, vec![hp(&[0, 0, 1], 0)]).unwrap();
    let e = run(&c);
    assert_eq!((e.biclique.r, e.biclique.s, e.biclique.rs), (6, 1, 6));
    check_sound(&c, &e);
}

#[test]
fn empty_and_planar_inputs() {
    let c = Configuration::empty(4).unwrap();
    let e = run(&c);
    assert_eq!(e.biclique.rs, 0);
    assert_eq!(e.trace.steps.len(), 1);

    let c = Configuration::new(
        2,
        vec![pt(&[0, 0]), pt(&[1, 1]), pt(&[2, 2]), pt(&[0, 1])],
        vec![hp(&[1, -1], 0), hp(&[0, 1], 1), hp(&[1, 0], 0)],
    )
    .unwrap();
    let e = run(&c);
    assert_eq!(e.biclique.rs, 3);
    assert_eq!(e.trace.steps.len(), 1);
    assert_eq!(e.trace.steps[0].branch, Branch::Exhausted);
}

#[test]
fn planar_lines_in_space() {
    // seven points on a line in R^3, four planes through that line
    let mut points: Vec<Point> = (0..7).map(|t| pt(&[t, 2 * t, 1])).collect();
    points.push(pt(&[3, 0, 5]));
    let hyperplanes = vec![
        hp(&[0, 0, 1], 1),
        hp(&[2, -1, 0], 0),
        hp(&[2, -1, 1], 1),
        hp(&[2, -1, 3], 3),
        hp(&[1, 1, 1], 8),
    ];
    let c = Configuration::new(3, points, hyperplanes).unwrap();
    let e = run(&c);
    check_sound(&c, &e);
    assert_eq!(e.biclique.rs, 28);
    assert!(e.trace.step(Step::Base).is_some());
    assert_eq!(e.biclique.rs, max_biclique_oracle(&c).unwrap().rs);
}

/// Points on a line shared by four planes in R^4, two extra points per
/// plane, three hyperplanes through each plane.
fn pencil_of_planes() -> Configuration {
    let mut points: Vec<Point> = (0..8).map(|t| pt(&[t, 0, 0, 0])).collect();
    let dirs = [[0, 1, 0, 0], [0, 0, 1, 0], [0, 1, 1, 0], [0, 1, 2, 0]];
    for d in &dirs {
        for t in [1, 2] {
            points.push(pt(&[1, d[1] * t, d[2] * t, 0]));
        }
    }
    // normals orthogonal to e1 and each plane direction
    let normals: [[[i64; 4]; 3]; 4] = [
        [[0, 0, 1, 0], [0, 0, 1, 1], [0, 0, 1, 2]],
        [[0, 1, 0, 0], [0, 1, 0, 1], [0, 1, 0, 2]],
        [[0, 1, -1, 0], [0, 1, -1, 1], [0, 1, -1, 2]],
        [[0, 2, -1, 0], [0, 2, -1, 1], [0, 2, -1, 2]],
    ];
    let hyperplanes = normals.iter().flatten().map(|n| hp(n, 0)).collect();
    Configuration::new(4, points, hyperplanes).unwrap()
}

#[test]
fn four_dimensional_layers() {
    let c = pencil_of_planes();
    let e = run(&c);
    check_sound(&c, &e);
    let steps: Vec<Step> = e.trace.steps.iter().map(|s| s.step).collect();
    assert_eq!(
        steps,
        [Step::Degree, Step::RichFilter, Step::Witness, Step::FlatBuckets, Step::DualLayer, Step::LineBuckets, Step::Base]
    );
    let witness = e.trace.step(Step::Witness).unwrap();
    assert_eq!(witness.get_metric("witnesses"), Some(4.0));
    let dual = e.trace.step(Step::DualLayer).unwrap();
    assert_eq!(dual.get_metric("lines"), Some(1.0));
    // the shared line: 8 points in all 12 hyperplanes
    assert_eq!(e.biclique.rs, 96);
    let base = e.trace.step(Step::Base).unwrap();
    assert_eq!(base.get_metric("incidences"), base.get_metric("projected_incidences"));
    assert_eq!(e.biclique.rs, max_biclique_oracle(&c).unwrap().rs);
}

/// A 5x4 grid on a plane in R^5, four 3-flats through the plane and three
/// hyperplanes through each 3-flat.
fn five_dimensional_tower() -> Configuration {
    let mut points = Vec::new();
    for a in 0..5 {
        for b in 0..4 {
            points.push(pt(&[a, b, 0, 0, 0]));
        }
    }
    let mut hyperplanes = Vec::new();
    for b in 0..4i64 {
        // 3-flat spanned by e1, e2 and (0, 0, 1, b, b^2); normals avoid it
        let v = [1, b, b * b];
        let basis = [[-b, 1, 0], [-b * b, 0, 1]];
        for (s, t) in [(1, 0), (0, 1), (1, 1)] {
            let n: Vec<i64> = (0..3).map(|k| s * basis[0][k] + t * basis[1][k]).collect();
            assert_eq!(n.iter().zip(v).map(|(x, y)| x * y).sum::<i64>(), 0);
            let h = hp(&[0, 0, n[0], n[1], n[2]], 0);
            if !hyperplanes.contains(&h) {
                hyperplanes.push(h);
            }
        }
    }
    Configuration::new(5, points, hyperplanes).unwrap()
}

#[test]
fn five_dimensional_layers() {
    let c = five_dimensional_tower();
    let e = run(&c);
    check_sound(&c, &e);
    let steps: Vec<Step> = e.trace.steps.iter().map(|s| s.step).collect();
    assert_eq!(
        steps,
        [
            Step::Degree,
            Step::RichFilter,
            Step::Witness,
            Step::FlatBuckets,
            Step::DualLayer,
            Step::LineBuckets,
            Step::FlatLayer,
            Step::PlaneBuckets,
            Step::Base
        ]
    );
    assert_eq!(e.biclique.r, 20);
    assert_eq!(e.biclique.s, c.n());
    let layer = e.trace.step(Step::FlatLayer).unwrap();
    assert_eq!(layer.get_metric("projected_incidences"), layer.get_metric("layer_incidences"));
    assert!(e.trace.thresholds.as_ref().unwrap().t0.as_ref().unwrap().exact.is_some());
}

#[test]
fn extraction_is_deterministic() {
    let c = five_dimensional_tower();
    let p = ExtractionParams {
        seed: 77,
        ..ExtractionParams::default()
    };
    assert_eq!(extract(&c, &p).unwrap(), extract(&c, &p).unwrap());
}

#[test]
fn bad_parameters_are_reported() {
    let c = planted_plane();
    let p = ExtractionParams {
        beta: int(1),
        ..ExtractionParams::default()
    };
    let err = extract(&c, &p).unwrap_err();
    assert!(matches!(err.error, Error::InvalidArgument(_)));
    assert_eq!(err.best.rs, 0);
}

fn random_config(d: usize) -> impl Strategy<Value = Configuration> {
    let point = prop::collection::vec(-1i64..=1, d);
    let hyper = (prop::collection::vec(-1i64..=1, d), -1i64..=1);
    (prop::collection::vec(point, 0..=8), prop::collection::vec(hyper, 0..=8)).prop_map(move |(ps, hs)| {
        let mut points: Vec<Point> = ps.iter().map(|c| pt(c)).collect();
        points.sort_by(|a, b| a.coords().cmp(b.coords()));
        points.dedup();
        let mut hyperplanes: Vec<Hyperplane> = hs.iter().filter_map(|(c, o)| Hyperplane::from_ints(c, *o).ok()).collect();
        hyperplanes.sort_by(|a, b| (a.coeffs(), a.offset()).cmp(&(b.coeffs(), b.offset())));
        hyperplanes.dedup();
        Configuration::new(d, points, hyperplanes).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn extraction_is_sound_and_dominated(c in (2usize..=5).prop_flat_map(random_config), seed in any::<u64>()) {
        let p = ExtractionParams { seed, ..ExtractionParams::default() };
        let e = extract(&c, &p).unwrap();
        check_sound(&c, &e);
        let oracle = max_biclique_oracle(&c).unwrap();
        prop_assert!(e.biclique.rs <= oracle.rs);

        // a witness that reached s0 with enough points forces a large answer
        if let Some(t) = &e.trace.thresholds {
            let need = to_f64(&p.beta) * e.trace.incidences as f64 / (p.rich_divisor * c.n() as u64) as f64;
            for cand in e.trace.candidates().filter(|x| x.source == Step::Witness && x.exceeds_threshold) {
                if cand.biclique.r as f64 >= need {
                    prop_assert!(e.biclique.rs as f64 >= need * t.s0.value * (1.0 - 1e-12));
                }
            }
        }
    }
}
