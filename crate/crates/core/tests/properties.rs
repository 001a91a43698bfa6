use proptest::prelude::*;
use tropca::fitting::distance_sum;
use tropca::milp::{lp_string, read_lp};
use tropca::phylo::positive_representative;
use tropca::{
    build_model, fermat_weber, fit_polytope_pca, fit_stiefel_pca, parse_newick, simulate_trees, trop_det,
    trop_volume, ultrametric_to_tree, LinearSpace, Matrix, Point, Polytope, SearchConfig, SimConfig, SimMode,
};

fn point(e: usize) -> impl Strategy<Value = Point<f64>> {
    prop::collection::vec(-20.0..20.0f64, e).prop_map(|v| Point::new(v).unwrap())
}

fn cloud(e: usize, n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Point<f64>>> {
    prop::collection::vec(point(e), n)
}

fn square(n: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-10.0..10.0f64, n), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_a_metric_on_the_torus(a in point(4), b in point(4), c in point(4), t in -5.0..5.0f64) {
        let ab = a.distance(&b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert!((ab - b.distance(&a).unwrap()).abs() <= 1e-12);
        prop_assert!(ab <= a.distance(&c).unwrap() + c.distance(&b).unwrap() + 1e-9);
        prop_assert!(a.distance(&a.shifted(t)).unwrap() <= 1e-12);
        prop_assert!((a.shifted(t).distance(&b).unwrap() - ab).abs() <= 1e-9);
    }

    #[test]
    fn second_best_never_beats_best(rows in square(5), shift in prop::collection::vec(-3.0..3.0f64, 5)) {
        let m = Matrix::from_rows(&rows).unwrap();
        let r = trop_det(&m).unwrap();
        prop_assert!(r.second.as_ref().unwrap().value <= r.best.value);
        // Adding a constant to a row moves both values together.
        let shifted: Vec<Vec<f64>> = rows.iter().zip(&shift).map(|(row, s)| row.iter().map(|x| x + s).collect()).collect();
        let vol = trop_volume(&m).unwrap();
        prop_assert!((trop_volume(&Matrix::from_rows(&shifted).unwrap()).unwrap() - vol).abs() <= 1e-9);
        prop_assert!(vol >= 0.0);
    }

    #[test]
    fn blue_rule_splits_points(gens in cloud(5, 2..4), u in point(5)) {
        let l = LinearSpace::stiefel(&Matrix::from_points(&gens).unwrap()).unwrap();
        let w = l.blue_project(&u).unwrap();
        let v = l.red_residual(&u).unwrap();
        for i in 0..5 {
            prop_assert!((u[i] - w[i] - v[i]).abs() <= 1e-9);
        }
        prop_assert!(l.contains(&w).unwrap());
        prop_assert!(l.blue_project(&w).unwrap().same_class(&w));
        for g in &gens {
            prop_assert!(l.contains(g).unwrap());
            prop_assert!(l.distance(g).unwrap() <= 1e-9);
        }
    }

    #[test]
    fn polytope_projection_is_a_retraction(verts in cloud(4, 1..5), x in point(4)) {
        let p = Polytope::new(verts.clone()).unwrap();
        let pi = p.project(&x).unwrap();
        prop_assert!(p.contains(&pi).unwrap());
        prop_assert!(p.project(&pi).unwrap().same_class(&pi));
        prop_assert!((p.distance(&x).unwrap() - x.distance(&pi).unwrap()).abs() <= 1e-9);
        for v in &verts {
            prop_assert!(p.distance(v).unwrap() <= 1e-9);
            // The projection is at least as close as any vertex.
            prop_assert!(p.distance(&x).unwrap() <= x.distance(v).unwrap() + 1e-9);
        }
    }

    #[test]
    fn linear_space_contains_the_polytope(verts in cloud(5, 2..4), x in point(5)) {
        let m = Matrix::from_points(&verts).unwrap();
        let l = LinearSpace::stiefel(&m).unwrap();
        let p = Polytope::new(verts).unwrap();
        prop_assert!(l.distance(&x).unwrap() <= p.distance(&x).unwrap() + 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn fermat_weber_beats_every_data_point(data in cloud(3, 2..7)) {
        let (x, value) = fermat_weber(&data).unwrap();
        prop_assert!((distance_sum(&x, &data).unwrap() - value).abs() <= 1e-9);
        for p in &data {
            prop_assert!(value <= distance_sum(p, &data).unwrap() + 1e-6);
        }
    }

    #[test]
    fn sampled_search_is_monotone_and_deterministic(data in cloud(4, 5..12), seed in 0..1000u64) {
        let cfg = SearchConfig { convergence_window: 10, rng_seed: seed, ..Default::default() };
        for fit in [fit_polytope_pca::<f64>, fit_stiefel_pca::<f64>] {
            let a = fit(&data, 3, &cfg).unwrap();
            prop_assert!(a.trace.windows(2).all(|w| w[1] <= w[0]));
            prop_assert_eq!(*a.trace.last().unwrap(), a.total_distance);
            prop_assert!(a.proportion_r >= 0.0 && a.proportion_r <= 1.0);
            prop_assert_eq!(&a, &fit(&data, 3, &cfg).unwrap());
        }
    }

    #[test]
    fn lp_text_round_trips(data in cloud(3, 3..6)) {
        let milp = build_model(&data).unwrap();
        prop_assert_eq!(read_lp(&lp_string(&milp.model)).unwrap(), milp.model.clone());
        let poly = Polytope::new(data[..3].to_vec()).unwrap();
        let check = milp.check_solution(&milp.assignment_for(&poly).unwrap()).unwrap();
        prop_assert!(check.feasible, "{:?}", check.violations);
    }

    #[test]
    fn simulated_trees_survive_newick_and_ultrametric_round_trips(seed in 0..10_000u64, m in 3..9usize) {
        let cfg = SimConfig { num_trees: 3, num_leaves: m, species_tree: None, mode: SimMode::Kingman, rng_seed: seed };
        for t in simulate_trees(&cfg).unwrap() {
            let back = parse_newick(&t.to_newick()).unwrap();
            prop_assert_eq!(back.topology(), t.topology());
            let c = t.cophenetic();
            prop_assert!(c.ultrametric);
            let rebuilt = ultrametric_to_tree(&positive_representative(&c.values), &c.labels).unwrap();
            prop_assert_eq!(rebuilt.topology(), t.topology());
            let c2 = ultrametric_to_tree(&c.values, &c.labels).unwrap().cophenetic();
            for (x, y) in c.values.iter().zip(&c2.values) {
                prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0));
            }
        }
    }
}
