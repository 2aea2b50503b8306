use proptest::prelude::*;

use super::*;
use crate::geometry::affine_hull;
use crate::rational::{int, ratio};

fn pts(coords: &[&[i64]]) -> Vec<Point> {
    coords.iter().map(|c| Point::from_ints(c).unwrap()).collect()
}

/// Naive oracle: hulls of every nonempty subset of points on `h`.
fn naive_richest(h: &Hyperplane, points: &[Point]) -> usize {
    let on: Vec<&Point> = points.iter().filter(|p| h.contains(p)).collect();
    let mut best = 0;
    for mask in 1u32..(1 << on.len()) {
        let subset: Vec<Point> = (0..on.len()).filter(|i| mask >> i & 1 == 1).map(|i| on[i].clone()).collect();
        if let Span::Proper(f) = affine_hull(&subset).unwrap() {
            if f.dim() < h.dim() - 1 {
                best = best.max(on.iter().filter(|p| f.contains_point(p)).count());
            }
        }
    }
    best
}

fn six_of_ten() -> (Hyperplane, Vec<Point>) {
    // plane z = 0 in R^3, six points on the x-axis plus four scattered ones
    let h = Hyperplane::from_ints(&[0, 0, 1], 0).unwrap();
    let p = pts(&[
        &[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[3, 0, 0], &[4, 0, 0], &[5, 0, 0],
        &[1, 1, 0], &[3, 4, 0], &[7, 2, 0], &[2, 9, 0],
    ]);
    (h, p)
}

fn five_of_ten() -> (Hyperplane, Vec<Point>) {
    let h = Hyperplane::from_ints(&[0, 0, 1], 0).unwrap();
    let p = pts(&[
        &[0, 0, 0], &[1, 0, 0], &[2, 0, 0], &[3, 0, 0], &[4, 0, 0],
        &[1, 1, 0], &[3, 4, 0], &[7, 2, 0], &[2, 9, 0], &[11, 5, 0],
    ]);
    (h, p)
}

#[test]
fn six_collinear_of_ten() {
    let (h, p) = six_of_ten();
    assert_eq!(naive_richest(&h, &p), 6);
    let (flat, count) = richest_proper_subflat_of_points(&h.to_flat(), &p).unwrap();
    assert_eq!(count, 6);
    let axis = affine_hull(&p[..2]).unwrap().proper().unwrap();
    assert_eq!(flat, axis);

    let v = classify_hyperplane(&h, &p, &ratio(1, 2)).unwrap();
    assert!(v.is_degenerate());
    assert_eq!(v.witness.as_ref(), Some(&axis));
    assert_eq!(v.witness_count, 6);
    assert!(!v.at_boundary);

    let v = classify_hyperplane(&h, &p, &ratio(2, 3)).unwrap();
    assert!(!v.is_degenerate());
    assert!(v.witness.is_none());
}

#[test]
fn strict_boundary_is_nondegenerate() {
    let (h, p) = five_of_ten();
    assert_eq!(naive_richest(&h, &p), 5);
    let v = classify_hyperplane(&h, &p, &ratio(1, 2)).unwrap();
    assert_eq!(v.witness_count, 5);
    assert!(!v.is_degenerate());
    assert!(v.at_boundary);
}

#[test]
fn general_position_and_spanning_triples() {
    let h = Hyperplane::from_ints(&[0, 0, 1], 0).unwrap();
    let five = pts(&[&[0, 0, 0], &[1, 3, 0], &[4, 1, 0], &[6, 5, 0], &[2, 7, 0]]);
    let (f, c) = richest_proper_subflat_of_points(&h.to_flat(), &five).unwrap();
    assert_eq!((f.dim(), c), (1, 2));

    let three = pts(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
    let (f, c) = richest_proper_subflat_of_points(&h.to_flat(), &three).unwrap();
    assert_eq!((f.dim(), c), (1, 2));
    // hulls equal to the container are never returned
    assert_ne!(f, h.to_flat());
}

#[test]
fn tiny_inputs() {
    let h = Hyperplane::from_ints(&[0, 0, 1], 0).unwrap();
    let one = pts(&[&[0, 0, 0]]);
    assert!(richest_proper_subflat_of_points(&h.to_flat(), &one).is_err());
    let v = classify_hyperplane(&h, &one, &ratio(1, 2)).unwrap();
    assert!(!v.is_degenerate());
    assert!(classify_hyperplane(&h, &one, &int(1)).is_err());
    let off = pts(&[&[0, 0, 0], &[0, 0, 1]]);
    assert!(richest_proper_subflat_of_points(&h.to_flat(), &off).is_err());
}

#[test]
fn witness_extends_to_codim_one() {
    // R^4: hyperplane x4 = 0 holding 6 collinear points and one more point
    let h = Hyperplane::from_ints(&[0, 0, 0, 1], 0).unwrap();
    let mut p: Vec<Point> = (0..6).map(|t| Point::from_ints(&[t, 0, 0, 0]).unwrap()).collect();
    p.push(Point::from_ints(&[0, 1, 1, 0]).unwrap());
    let v = classify_hyperplane(&h, &p, &ratio(1, 2)).unwrap();
    assert!(v.is_degenerate());
    let core = v.core.unwrap();
    let w = v.witness.unwrap();
    // the plane through the line and the extra point is the richest proper subflat
    assert_eq!((core.dim(), v.witness_count), (2, 7));
    assert_eq!(w.dim(), 2);
    assert!(core.is_subset_of(&w));

    // all points collinear: the line must be grown by a direction of h
    let q: Vec<Point> = (0..6).map(|t| Point::from_ints(&[t, 0, 0, 0]).unwrap()).collect();
    let v = classify_hyperplane(&h, &q, &ratio(1, 2)).unwrap();
    let w = v.witness.unwrap();
    assert_eq!(w.dim(), 2);
    assert!(w.lies_in(&h));
    assert_eq!(q.iter().filter(|p| w.contains_point(p)).count(), 6);

    // with a guide hyperplane through the line, the witness follows it
    let guide = Hyperplane::from_ints(&[0, 1, -1, 0], 0).unwrap().to_flat();
    let v = classify_hyperplane_guided(&h, &q, &ratio(1, 2), std::slice::from_ref(&guide)).unwrap();
    let w = v.witness.unwrap();
    assert!(w.is_subset_of(&guide));
    assert_eq!(w, h.to_flat().intersect(&guide).proper().unwrap());
}

fn origin4() -> Point {
    Point::from_ints(&[0, 0, 0, 0]).unwrap()
}

fn through_x1_axis() -> Vec<Hyperplane> {
    [
        [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [0, 1, 1, 0],
        [0, 1, 0, 1], [0, 0, 1, 1], [0, 1, 2, 3], [0, 3, -1, 2],
    ]
    .iter()
    .map(|c| Hyperplane::from_ints(c, 0).unwrap())
    .collect()
}

#[test]
fn dual_point_common_line() {
    let mut hs = through_x1_axis();
    hs.push(Hyperplane::from_ints(&[1, 1, 0, 0], 0).unwrap());
    hs.push(Hyperplane::from_ints(&[1, 0, 1, 2], 0).unwrap());
    let v = classify_point_dual(&origin4(), &hs, &ratio(1, 2)).unwrap();
    assert!(v.is_degenerate());
    assert_eq!(v.witness_count, 8);
    let axis = affine_hull(&[origin4(), Point::from_ints(&[1, 0, 0, 0]).unwrap()])
        .unwrap()
        .proper()
        .unwrap();
    assert_eq!(v.witness, Some(axis));

    let single = classify_point_dual(&origin4(), &hs[..1], &ratio(1, 2)).unwrap();
    assert!(!single.is_degenerate());

    // non-strict threshold: in R^3 four generic planes through p share lines
    // pairwise only, so 2 of 4 at beta = 1/2 is degenerate
    let o3 = Point::from_ints(&[0, 0, 0]).unwrap();
    let four: Vec<Hyperplane> = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1]]
        .iter()
        .map(|c| Hyperplane::from_ints(c, 0).unwrap())
        .collect();
    let v = classify_point_dual(&o3, &four, &ratio(1, 2)).unwrap();
    assert_eq!(v.witness_count, 2);
    assert!(v.is_degenerate());
    assert!(v.at_boundary);

    let off = vec![Hyperplane::from_ints(&[1, 0, 0, 0], 1).unwrap(), hs[0].clone()];
    assert!(classify_point_dual(&origin4(), &off, &ratio(1, 2)).is_err());
}

/// Naive dual oracle: lines through p in pairwise (or single) intersections.
fn naive_dual_count(p: &Point, hs: &[Hyperplane]) -> usize {
    let flats: Vec<Flat> = hs.iter().map(Hyperplane::to_flat).collect();
    let mut best = 0;
    for mask in 1u32..(1 << hs.len()) {
        let chosen: Vec<&Flat> = (0..hs.len()).filter(|i| mask >> i & 1 == 1).map(|i| &flats[i]).collect();
        let mut inter = chosen[0].clone();
        let mut ok = true;
        for f in &chosen[1..] {
            match inter.intersect(f) {
                Span::Proper(g) => inter = g,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || inter.dim() == 0 {
            continue;
        }
        // every line of inter through p lies in all chosen hyperplanes
        best = best.max(chosen.len());
    }
    let _ = p;
    best
}

fn hyperplane_strategy(d: usize) -> impl Strategy<Value = (Vec<i64>, i64)> {
    (prop::collection::vec(-2i64..=2, d), -2i64..=2).prop_filter("normal", |(c, _)| c[0] != 0)
}

fn points_on(h: &Hyperplane, raw: &[Vec<i64>]) -> Vec<Point> {
    let a1 = h.coeffs()[0].clone();
    let mut out: Vec<Point> = Vec::new();
    for tail in raw {
        let mut coords = vec![Rational::zero()];
        coords.extend(tail.iter().map(|&x| int(x)));
        let rest: Rational = h.coeffs()[1..].iter().zip(&coords[1..]).map(|(a, x)| a * x).sum();
        coords[0] = (h.offset() - rest) / &a1;
        let p = Point::new(coords).unwrap();
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hyperplane_verdict_matches_naive(
        d in 3usize..=4,
        hyp in hyperplane_strategy(4),
        raw in prop::collection::vec(prop::collection::vec(0i64..3, 3), 2..=10),
        beta_num in 1i64..10,
    ) {
        let h = Hyperplane::from_ints(&hyp.0[..d], hyp.1).unwrap();
        let raw: Vec<Vec<i64>> = raw.iter().map(|v| v[..d - 1].to_vec()).collect();
        let points = points_on(&h, &raw);
        prop_assume!(points.len() >= 2);
        let beta = ratio(beta_num, 10);
        let naive = naive_richest(&h, &points);
        let v = classify_hyperplane(&h, &points, &beta).unwrap();
        prop_assert_eq!(v.witness_count, naive);
        let expect_degenerate = int(naive as i64) > &beta * int(points.len() as i64);
        prop_assert_eq!(v.is_degenerate(), expect_degenerate);
        if let Some(w) = &v.witness {
            prop_assert_eq!(w.dim(), d - 2);
            prop_assert!(w.lies_in(&h));
            prop_assert!(v.core.as_ref().unwrap().is_subset_of(w));
            prop_assert_eq!(points.iter().filter(|p| w.contains_point(p)).count(), naive);
        }
        // monotone in beta
        if v.is_degenerate() {
            for smaller in 1..beta_num {
                let lower = classify_hyperplane(&h, &points, &ratio(smaller, 10)).unwrap();
                prop_assert!(lower.is_degenerate());
            }
        }
    }

    #[test]
    fn dual_verdict_matches_naive(
        normals in prop::collection::btree_set(prop::collection::vec(-1i64..=1, 4), 2..=7),
        beta_num in 1i64..10,
    ) {
        let p = origin4();
        let hs: Vec<Hyperplane> = normals
            .iter()
            .filter_map(|c| Hyperplane::from_ints(c, 0).ok())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect();
        prop_assume!(hs.len() >= 2);
        let beta = ratio(beta_num, 10);
        let v = classify_point_dual(&p, &hs, &beta).unwrap();
        prop_assert_eq!(v.witness_count, naive_dual_count(&p, &hs));
        let expect = int(v.witness_count as i64) >= &beta * int(hs.len() as i64);
        prop_assert_eq!(v.is_degenerate(), expect);
    }
}
