use pnn_chm::chm::{
    chm_train, derive_seed, fitness_of, probe_phase, run_portfolio, single_train, ChmConfig, LooObjective,
};
use pnn_chm::dataset::Dataset;
use pnn_chm::metaheuristics::{
    CountingObjective, FnObjective, Method, MethodParams, Objective, Population, SearchSpace,
};
use pnn_chm::pnn::SmoothingKind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Straight transcription of the class density with a diagonal bandwidth
/// per class, used to classify each pattern with itself left out.
fn brute_loo_error(rows: &[Vec<f64>], labels: &[usize], g: usize, h: &dyn Fn(usize, usize) -> f64) -> f64 {
    let kernel = |u: f64| 2.0 / (std::f64::consts::PI * (u * u + 1.0).powi(2));
    let mut wrong = 0;
    for i in 0..rows.len() {
        let mut best = (0usize, f64::NEG_INFINITY);
        for j in 0..g {
            let mut sum = 0.0;
            let mut count = 0;
            for p in 0..rows.len() {
                if p == i || labels[p] != j {
                    continue;
                }
                let mut k = 1.0;
                for (f, (a, b)) in rows[i].iter().zip(&rows[p]).enumerate() {
                    k *= kernel((a - b) / h(j, f)) / h(j, f);
                }
                sum += k;
                count += 1;
            }
            let d = if count == 0 { 0.0 } else { sum / count as f64 };
            if d > best.1 {
                best = (j, d);
            }
        }
        if best.0 != labels[i] {
            wrong += 1;
        }
    }
    wrong as f64 / rows.len() as f64
}

fn random_set(rng: &mut ChaCha8Rng, n: usize, nf: usize, g: usize) -> (Vec<Vec<f64>>, Vec<usize>) {
    let labels: Vec<usize> = (0..n).map(|i| i % g).collect();
    let rows = labels
        .iter()
        .map(|&y| (0..nf).map(|_| y as f64 * 0.7 + rng.random::<f64>() * 2.0).collect())
        .collect();
    (rows, labels)
}

#[test]
fn loo_objective_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..40 {
        let g = 2 + trial % 3;
        let nf = 1 + trial % 4;
        let (rows, labels) = random_set(&mut rng, 6 + trial, nf, g);
        let ds = Dataset::new(rows.clone(), labels.clone()).unwrap();
        for kind in [SmoothingKind::Scalar, SmoothingKind::PerClass, SmoothingKind::PerFeature, SmoothingKind::Matrix] {
            let dim = kind.dimension(g, nf);
            let cand: Vec<f64> = (0..dim).map(|_| 0.05 + rng.random::<f64>() * 3.0).collect();
            let h = |j: usize, f: usize| match kind {
                SmoothingKind::Scalar => cand[0],
                SmoothingKind::PerClass => cand[j],
                SmoothingKind::PerFeature => cand[f],
                SmoothingKind::Matrix => cand[j * nf + f],
            };
            let expected = brute_loo_error(&rows, &labels, g, &h);
            let obj = LooObjective::new(&ds, kind).unwrap();
            assert_eq!(obj.evaluate(&cand), expected, "trial {trial} {kind:?}");
            assert_eq!(obj.cost(), rows.len() as u64);
        }
    }
}

#[test]
fn loo_objective_rejects_wrong_length() {
    let ds = Dataset::new(vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![2.0, 2.0]], vec![0, 1, 0]).unwrap();
    let obj = LooObjective::new(&ds, SmoothingKind::PerFeature).unwrap();
    assert!(obj.try_evaluate(&[1.0]).is_err());
    assert!(obj.try_evaluate(&[1.0, 1.0]).is_ok());
}

#[test]
fn fitness_of_examples() {
    let train = Dataset::new(vec![vec![0.0], vec![0.5], vec![10.0], vec![10.5]], vec![0, 0, 1, 1]).unwrap();
    let test = Dataset::new(vec![vec![0.2], vec![10.2]], vec![0, 1]).unwrap();
    assert_eq!(fitness_of(SmoothingKind::PerFeature, &[1.0], &train, &test).unwrap(), 0.0);

    // Three of ten test points sit on the wrong side of the midpoint 5.25.
    let xs = [1.0, 2.0, 3.0, 4.0, 6.0, 7.0, 8.0, 9.0, 9.5, 4.9];
    let ys = [0, 0, 0, 1, 0, 1, 1, 1, 0, 0];
    let test = Dataset::with_classes(xs.iter().map(|&x| vec![x]).collect(), ys.to_vec(), 2).unwrap();
    assert!((fitness_of(SmoothingKind::PerFeature, &[1.0], &train, &test).unwrap() - 0.3).abs() < 1e-15);
}

#[test]
fn fitness_of_matches_hand_densities() {
    // Class 0 at {0, 2}, class 1 at {3}; query 1.8 with h = 1.
    // f0 = (K(1.8) + K(0.2)) / 2, f1 = K(1.2).
    let k = |u: f64| 2.0 / (std::f64::consts::PI * (u * u + 1.0).powi(2));
    let f0 = (k(1.8) + k(0.2)) / 2.0;
    let f1 = k(1.2);
    let expected_class = usize::from(f1 > f0);
    let train = Dataset::new(vec![vec![0.0], vec![2.0], vec![3.0]], vec![0, 0, 1]).unwrap();
    let test = Dataset::new(vec![vec![1.8], vec![3.0]], vec![0, 1]).unwrap().subset(&[0]);
    let err = fitness_of(SmoothingKind::PerFeature, &[1.0], &train, &test).unwrap();
    assert_eq!(err, if expected_class == 0 { 0.0 } else { 1.0 });
}

fn frozen_except_fpa() -> MethodParams {
    let mut p = MethodParams::default();
    p.pso.omega = 0.0;
    p.pso.c1 = 0.0;
    p.pso.c2 = 0.0;
    p.pso.adjust_omega = false;
    p.bat.loudness = 0.0;
    p.bat.max_f = 0.0;
    p.bfo.c_i = 0.0;
    p.bfo.p_ed = 0.0;
    p.sa.d = 0.0;
    p
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| (v - 5.0).powi(2)).sum()
}

#[test]
fn dominant_method_always_wins() {
    let space = SearchSpace::new([0.0, 10.0], [0.0, 10.0]).unwrap();
    let params = frozen_except_fpa();
    for seed in 0..10 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pop = Population::random(10, 3, [0.0, 10.0], &mut rng);
        let seeds: Vec<u64> = (0..5).map(|k| derive_seed(seed, 0, k)).collect();
        let out = probe_phase(&pop, &Method::ALL, &params, space, 2_000, &sphere, &seeds, 0.0, &mut rng).unwrap();
        assert_eq!(out.winner_method(), Method::Fpa, "seed {seed}");
        let initial = pop.members().iter().map(|m| sphere(&m.position)).fold(f64::INFINITY, f64::min);
        for r in &out.records {
            if r.method != Method::Fpa {
                assert_eq!(r.best_fitness, Some(initial));
            }
        }
    }
}

#[test]
fn probe_budget_per_method() {
    let space = SearchSpace::new([0.0, 10.0], [0.0, 10.0]).unwrap();
    let base = FnObjective::new(sphere, 50);
    let pop = Population::random(20, 2, [0.0, 10.0], &mut ChaCha8Rng::seed_from_u64(1));
    let cap = 20 * 50 * 30;
    for (k, m) in Method::ALL.into_iter().enumerate() {
        let counting = CountingObjective::new(&base);
        let out = probe_phase(
            &pop,
            &[m],
            &MethodParams::default(),
            space,
            cap,
            &counting,
            &[k as u64],
            -1.0,
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap();
        assert_eq!(counting.calls() * 50, out.records[0].fe_used);
        assert!(out.records[0].fe_used <= cap + 20 * 50);
        assert!(out.records[0].fe_used + 20 * 50 >= cap);
    }
}

#[test]
fn tie_break_is_uniform() {
    // Constant objective: every method ties, so the winner must be uniform.
    let space = SearchSpace::new([0.0, 10.0], [0.0, 10.0]).unwrap();
    let pop = Population::random(4, 2, [0.0, 10.0], &mut ChaCha8Rng::seed_from_u64(3));
    let mut counts = [0usize; 5];
    let seeds: Vec<u64> = (0..5).collect();
    for seed in 0..500 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let out = probe_phase(
            &pop,
            &Method::ALL,
            &MethodParams::default(),
            space,
            8,
            &|_: &[f64]| 0.25,
            &seeds,
            0.0,
            &mut rng,
        )
        .unwrap();
        counts[out.winner] += 1;
    }
    let expected = 100.0;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    // 99th percentile of chi-square with 4 degrees of freedom.
    assert!(chi2 < 13.277, "counts {counts:?} chi2 {chi2}");
    assert!(counts.iter().all(|&c| c > 0));
}

fn blobs(seed: u64, n_per: usize, gap: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for c in 0..2 {
        for _ in 0..n_per {
            rows.push(vec![c as f64 * gap + rng.random::<f64>(), rng.random::<f64>()]);
            labels.push(c);
        }
    }
    Dataset::new(rows, labels).unwrap()
}

fn overlapping(seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for i in 0..40 {
        let c = i % 2;
        rows.push(vec![c as f64 + rng.random::<f64>() * 2.5, rng.random::<f64>() * 3.0]);
        labels.push(c);
    }
    Dataset::new(rows, labels).unwrap()
}

fn small_cfg(seed: u64) -> ChmConfig {
    ChmConfig {
        n: 3,
        n_p: 6,
        probing_multiplier: 3,
        fit_multiplier: 6,
        seed,
        ..ChmConfig::default()
    }
}

#[test]
fn separable_set_stops_early() {
    let train = blobs(1, 15, 100.0);
    let test = blobs(2, 5, 100.0);
    let cfg = ChmConfig { n: 5, ..ChmConfig::default() };
    let result = chm_train(&train, &test, &cfg, &MethodParams::default()).unwrap();
    assert_eq!(result.fitness, 0.0);
    assert_eq!(result.trace.iterations.len(), 1);
    let first = &result.trace.iterations[0];
    // Convergence inside probing: nothing else is charged after the hit.
    assert!(first.probes[0].fe_used <= train.len() as u64 * cfg.n_p as u64);
    assert!(first.probes.iter().skip(1).all(|p| p.fe_used == 0 && p.best_fitness.is_none()));
    assert_eq!(first.fit_fe_used, 0);
}

#[test]
fn deterministic_and_globally_consistent() {
    let train = overlapping(5);
    let test = overlapping(6);
    let cfg = small_cfg(9);
    let a = chm_train(&train, &test, &cfg, &MethodParams::default()).unwrap();
    let b = chm_train(&train, &test, &cfg, &MethodParams::default()).unwrap();
    assert_eq!(a, b);
    for it in &a.trace.iterations {
        assert!(a.fitness <= it.fit_best_fitness);
        for p in &it.probes {
            assert!(p.best_fitness.is_none_or(|f| a.fitness <= f));
        }
        assert!(cfg.methods.contains(&it.selected));
    }
    let obj = LooObjective::new(&train, cfg.smoothing).unwrap();
    assert_eq!(obj.evaluate(&a.smoothing.as_vector()), a.fitness);
}

#[test]
fn per_iteration_budget() {
    let train = overlapping(7);
    let test = overlapping(8);
    let cfg = small_cfg(2);
    let n_t = train.len() as u64;
    let batch = cfg.n_p as u64 * n_t;
    let res = chm_train(&train, &test, &cfg, &MethodParams::default()).unwrap();
    for it in &res.trace.iterations {
        let total: u64 = it.fit_fe_used + it.probes.iter().map(|p| p.fe_used).sum::<u64>();
        let k = cfg.methods.len() as u64;
        assert!(total <= k * cfg.probing_budget(train.len()) + cfg.fit_budget(train.len()) + (k + 1) * batch);
    }
}

#[test]
fn single_method_portfolio() {
    let train = overlapping(11);
    let cfg = ChmConfig {
        methods: vec![Method::Sa],
        fitness_threshold: -1.0,
        ..small_cfg(4)
    };
    let obj = LooObjective::new(&train, cfg.smoothing).unwrap();
    let (_, trace) = run_portfolio(&obj, 2, &cfg, &MethodParams::default(), |_| Ok(1.0)).unwrap();
    assert_eq!(trace.iterations.len(), cfg.n);
    for it in &trace.iterations {
        assert_eq!(it.selected, Method::Sa);
        let n_t = train.len() as u64;
        assert!(it.probes[0].fe_used + it.fit_fe_used <= cfg.probing_budget(40) + cfg.fit_budget(40));
        assert!(it.probes[0].fe_used + it.fit_fe_used + 2 * n_t >= cfg.probing_budget(40) + cfg.fit_budget(40));
    }
}

#[test]
fn trace_round_trips_as_json_lines() {
    let res = chm_train(&overlapping(1), &overlapping(2), &small_cfg(1), &MethodParams::default()).unwrap();
    let text = res.trace.to_json_lines().unwrap();
    assert_eq!(text.lines().count(), res.trace.iterations.len());
    assert_eq!(pnn_chm::chm::ChmTrace::from_json_lines(&text).unwrap(), res.trace);
    let counts = res.trace.selection_counts(&small_cfg(1).methods);
    assert_eq!(counts.iter().sum::<usize>(), res.trace.iterations.len());
}

#[test]
fn single_train_uses_equal_budget() {
    let train = overlapping(3);
    let cfg = small_cfg(3);
    let (spec, fit) = single_train(&train, Method::Pso, &cfg, &MethodParams::default()).unwrap();
    let obj = LooObjective::new(&train, cfg.smoothing).unwrap();
    assert_eq!(obj.evaluate(&spec.as_vector()), fit);
    assert!(cfg.validate().is_ok());
    assert_eq!(
        cfg.equivalent_single_budget(40),
        3 * (5 * 6 * 40 * 3 + 6 * 40 * 6)
    );
}

#[test]
fn invalid_config_rejected() {
    let ds = overlapping(1);
    for cfg in [
        ChmConfig { n: 0, ..ChmConfig::default() },
        ChmConfig { methods: vec![], ..ChmConfig::default() },
        ChmConfig { init_range: [0.0, 20_000.0], ..ChmConfig::default() },
    ] {
        assert!(chm_train(&ds, &ds, &cfg, &MethodParams::default()).is_err());
    }
}
