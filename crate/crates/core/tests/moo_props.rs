// Copyright 2026 The lcdiscard Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


mod common;

use std::collections::BTreeMap;

use lcdiscard::moo::{
    average_rank, curve_rank_export, dominates, hypervolume_2d, pareto_front, reference_point, relative_hvi,
    MethodCell, Point2,
};
use lcdiscard::simulator::ObjectivePoint;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn point() -> impl Strategy<Value = Point2> {
    // a coarse grid keeps duplicates and ties in play
    (1u32..40, 1u32..40).prop_map(|(l, i)| Point2::new(l as f64 / 40.0, (i * 25) as f64))
}

#[test]
fn front_matches_pairwise_oracle_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..1000 {
        let n = rng.random_range(1..=200);
        let grid = rng.random_range(5..60);
        let pts: Vec<Point2> = (0..n)
            .map(|_| Point2::new(rng.random_range(1..grid) as f64 / grid as f64, rng.random_range(1..grid) as f64 * 10.0))
            .collect();
        let front = pareto_front(&pts);
        assert_eq!(front.points(), common::pareto_oracle(&pts).as_slice());
        for p in front.points() {
            assert!(!front.points().iter().any(|q| dominates(q, p)));
        }
    }
}

#[test]
fn front_examples() {
    let pts = [(1.0, 10.0), (2.0, 5.0), (3.0, 1.0), (3.0, 8.0)].map(|(l, i)| Point2::new(l, i));
    let front = pareto_front(&pts);
    assert_eq!(front.len(), 3);
    assert!(!front.contains(&Point2::new(3.0, 8.0)));
    assert_eq!(pareto_front(&[Point2::new(0.2, 7.0); 5]).len(), 1);
}

#[test]
fn hypervolume_examples() {
    let r = Point2::new(10.0, 10.0);
    assert_eq!(hypervolume_2d(&pareto_front(&[r]), r).unwrap(), 0.0);
    let hv = hypervolume_2d(&pareto_front(&[Point2::new(1.0, 1.0)]), r).unwrap();
    assert!((hv - 1.0).abs() < 1e-15);
    // beyond the box on one axis: contributes nothing
    let outside = hypervolume_2d(&pareto_front(&[Point2::new(0.1, 20.0)]), r).unwrap();
    assert_eq!(outside, 0.0);
    // zero error is clipped, not rejected
    assert!(hypervolume_2d(&pareto_front(&[Point2::new(0.0, 1.0)]), r).unwrap() > 1.0);
}

#[test]
fn hypervolume_matches_raster_on_ten_point_fronts() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..20 {
        let pts: Vec<Point2> = (0..10)
            .map(|_| Point2::new(10f64.powf(rng.random_range(-2.0..0.0)), 10f64.powf(rng.random_range(2.0..4.3))))
            .collect();
        let r = Point2::new(1.2, 25_000.0);
        let hv = hypervolume_2d(&pareto_front(&pts), r).unwrap();
        let raster = common::raster_hypervolume(&pts, r, 2000);
        assert!((hv - raster).abs() <= 1e-3 * raster, "{hv} vs {raster}");
    }
}

proptest! {
    #[test]
    fn hypervolume_equals_slab_decomposition(pts in prop::collection::vec(point(), 1..30)) {
        let r = Point2::new(1.0, 1000.0);
        let hv = hypervolume_2d(&pareto_front(&pts), r).unwrap();
        let slab = common::slab_hypervolume(&pts, r);
        prop_assert!((hv - slab).abs() <= 1e-9 * slab.max(1.0));
    }

    #[test]
    fn hypervolume_monotone_under_insertion(pts in prop::collection::vec(point(), 1..30), extra in point()) {
        let r = Point2::new(1.0, 1000.0);
        let before = hypervolume_2d(&pareto_front(&pts), r).unwrap();
        let mut more = pts.clone();
        more.push(extra);
        let after = hypervolume_2d(&pareto_front(&more), r).unwrap();
        prop_assert!(after >= before - 1e-15);
    }

    #[test]
    fn hypervolume_scale_invariance(
        pts in prop::collection::vec(point(), 1..30),
        sl in 0.01f64..100.0,
        si in 0.01f64..100.0,
    ) {
        let r = Point2::new(1.0, 1000.0);
        let hv = hypervolume_2d(&pareto_front(&pts), r).unwrap();
        let scaled: Vec<Point2> = pts.iter().map(|p| Point2::new(p.y_l * sl, p.y_i * si)).collect();
        let hv_scaled = hypervolume_2d(&pareto_front(&scaled), Point2::new(r.y_l * sl, r.y_i * si)).unwrap();
        prop_assert!((hv - hv_scaled).abs() <= 1e-12 * hv.max(1.0), "{hv} vs {hv_scaled}");
    }

    #[test]
    fn relative_hvi_bounded_with_unit_union(
        a in prop::collection::vec(point(), 1..10),
        b in prop::collection::vec(point(), 1..10),
    ) {
        let mut m = BTreeMap::new();
        m.insert("a".to_string(), a.clone());
        m.insert("b".to_string(), b.clone());
        let r = Point2::new(1.0, 1000.0);
        match relative_hvi(&m, r) {
            Ok(rel) => {
                prop_assert_eq!(rel.union_score, 1.0);
                for v in rel.scores.values() {
                    prop_assert!((0.0..=1.0 + 1e-12).contains(v));
                }
            }
            Err(e) => prop_assert!(matches!(e, lcdiscard::moo::MooError::ZeroTotalHypervolume)),
        }
    }
}

#[test]
fn relative_hvi_of_constructed_fronts() {
    // Powers of ten make every rectangle an integer area in log space.
    // Reference (1, 10^4) spans x in [0, 4] and y in [-inf, 0].
    let p = |l: i32, i: i32| Point2::new(10f64.powi(l), 10f64.powi(i));
    let mut m = BTreeMap::new();
    // A: (x=1, y=-2) -> 3*2 = 6
    m.insert("A".to_string(), vec![p(-2, 1)]);
    // B: (x=2, y=-3) and (x=3, y=-1) -> 2*3 = 6
    m.insert("B".to_string(), vec![p(-3, 2), p(-1, 3)]);
    // C: (x=0, y=-1) -> 4*1 = 4
    m.insert("C".to_string(), vec![p(-1, 0)]);
    // union front: (0,-1), (1,-2), (2,-3) -> 1*1 + 1*2 + 2*3 = 9
    let rel = relative_hvi(&m, p(0, 4)).unwrap();
    assert!((rel.union_hypervolume - 9.0).abs() < 1e-12);
    assert!((rel.scores["A"] - 6.0 / 9.0).abs() < 1e-12);
    assert!((rel.scores["B"] - 6.0 / 9.0).abs() < 1e-12);
    assert!((rel.scores["C"] - 4.0 / 9.0).abs() < 1e-12);

    let mut single = BTreeMap::new();
    single.insert("only".to_string(), vec![p(-2, 1), p(-1, 2)]);
    assert_eq!(relative_hvi(&single, p(0, 4)).unwrap().scores["only"], 1.0);
}

#[test]
fn reference_point_is_elementwise_upper_bound() {
    let cell = |l: f64, sl: f64, i: f64, si: f64| MethodCell {
        method: "m".into(),
        parameter: 1.0,
        mean_yl: l,
        stderr_yl: sl,
        mean_yi: i,
        stderr_yi: si,
        n_seeds: 10,
    };
    let one = reference_point(&[cell(0.2, 0.01, 1000.0, 50.0)]).unwrap();
    assert!((one.y_l - 0.21).abs() < 1e-15 && one.y_i == 1050.0);
    let two = reference_point(&[cell(0.2, 0.05, 900.0, 10.0), cell(0.24, 0.0, 800.0, 200.0)]).unwrap();
    assert!((two.y_l - 0.25).abs() < 1e-15 && two.y_i == 1000.0);
    assert!(reference_point(&[]).is_err());
}

#[test]
fn method_cell_aggregates_seeds() {
    let pts: Vec<ObjectivePoint> = [(0.1, 500), (0.2, 700), (0.3, 600)]
        .iter()
        .map(|(l, i)| ObjectivePoint { y_l: *l, y_i: *i })
        .collect();
    let cell = MethodCell::from_points("i-Epoch", 1.0, &pts).unwrap();
    assert!((cell.mean_yl - 0.2).abs() < 1e-15);
    assert_eq!(cell.mean_yi, 600.0);
    // sample sd 0.1 over 3 seeds
    assert!((cell.stderr_yl - 0.1 / 3f64.sqrt()).abs() < 1e-15);
    assert_eq!(cell.n_seeds, 3);
}

/// Rank oracle: for each method, count strictly larger scores and ties.
fn rank_oracle(tables: &[BTreeMap<String, f64>]) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    for m in tables[0].keys() {
        let mut total = 0.0;
        for t in tables {
            let v = t[m];
            let better = t.values().filter(|w| **w > v).count() as f64;
            let tied = t.values().filter(|w| **w == v).count() as f64;
            total += better + (tied + 1.0) / 2.0;
        }
        out.insert(m.clone(), total / tables.len() as f64);
    }
    out
}

#[test]
fn average_rank_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let methods = ["i-Epoch", "r-SHA", "rho-LCE", "other"];
    for _ in 0..50 {
        let tables: Vec<BTreeMap<String, f64>> = (0..17)
            .map(|_| methods.iter().map(|m| (m.to_string(), rng.random_range(0..5) as f64 / 4.0)).collect())
            .collect();
        let got = average_rank(&tables).unwrap();
        let want = rank_oracle(&tables);
        for m in methods {
            assert!((got[m] - want[m]).abs() < 1e-12);
        }
    }
    let t = |a: f64, b: f64| BTreeMap::from([("A".to_string(), a), ("B".to_string(), b)]);
    let one = average_rank(&[t(0.9, 0.5)]).unwrap();
    assert_eq!((one["A"], one["B"]), (1.0, 2.0));
    let two = average_rank(&[t(0.9, 0.5), t(0.5, 0.9)]).unwrap();
    assert_eq!((two["A"], two["B"]), (1.5, 1.5));
    assert!(average_rank(&[t(0.9, 0.5), BTreeMap::from([("A".to_string(), 0.1)])]).is_err());
}

#[test]
fn curve_rank_export_ranks_and_flags() {
    let bench = common::benchmark(
        "tiny",
        vec![
            common::curve("good", &[0.9, 0.2], &[0.9, 0.2]),
            common::curve("bad", &[0.7, 1.2], &[0.7, 1.2]),
            common::curve("mid", &[0.8, 0.5], &[0.8, 0.5]),
        ],
    );
    let report = curve_rank_export(&bench, 3, 0).unwrap();
    let ranks: Vec<(&str, usize, bool)> = report
        .records
        .iter()
        .map(|r| (r.candidate_id.as_str(), r.final_rank, r.worse_than_constant))
        .collect();
    assert_eq!(ranks, vec![("good", 1, false), ("mid", 2, false), ("bad", 3, true)]);
    assert!((report.worse_than_constant_fraction - 1.0 / 3.0).abs() < 1e-15);
    // epoch-1 order is the reverse of the final order
    assert!((report.first_final_spearman + 1.0).abs() < 1e-12);
    assert!(curve_rank_export(&bench, 4, 0).is_err());
    assert_eq!(curve_rank_export(&bench, 2, 5).unwrap(), curve_rank_export(&bench, 2, 5).unwrap());
}
