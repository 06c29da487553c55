//! Cross-cutting properties: agreement between independent decision
//! routes, invariance under variable permutation, soundness of the
//! necessary-condition prefilters, and determinism across thread
//! counts.

use proptest::prelude::*;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use semireg::{
    element_add, element_mul, estimate_proportion, ffd_vs_index_veto, hilbert_series, ideal_index,
    is_d_semiregular, is_semiregular, predicted_index_if_semiregular, quadratic_census,
    quadratic_rank, random_element, semiregular_via_maps, sigma, sigma_semiregular_predicted,
    Budget, Element, ExperimentCtx, GradedBasisIndex, IdealSpec,
};

fn budget() -> Budget {
    Budget::default()
}

fn all_nonzero_elements(n: usize, d: usize) -> Vec<Element> {
    let masks: Vec<u64> = GradedBasisIndex::new(n, d).unwrap().iter_masks().collect();
    (1u64..(1 << masks.len()))
        .map(|code| {
            let support: Vec<u64> = masks
                .iter()
                .enumerate()
                .filter(|(j, _)| code >> j & 1 == 1)
                .map(|(_, &m)| m)
                .collect();
            Element::from_masks(n, d, &support).unwrap()
        })
        .collect()
}

fn permute_element(e: &Element, perm: &[usize]) -> Element {
    let moved: Vec<u64> = e
        .support_masks()
        .iter()
        .map(|&mask| {
            let mut out = 0u64;
            for (i, &target) in perm.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    out |= 1 << target;
                }
            }
            out
        })
        .collect();
    Element::from_masks(e.n(), e.degree(), &moved).unwrap()
}

fn random_perm(n: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.gen_range(0..=i);
        perm.swap(i, j);
    }
    perm
}

#[test]
fn every_quadratic_in_four_and_five_variables_agrees_across_routes() {
    for n in [4usize, 5] {
        for q in all_nonzero_elements(n, 2) {
            let rank = quadratic_rank(&q).unwrap();
            let by_rank = rank == 4; // ranks 2 and 4 are the only options here
            let ideal = IdealSpec::single(q.clone()).unwrap();
            let by_series = is_semiregular(&ideal, &budget()).unwrap().verdict;
            let by_maps = semiregular_via_maps(&q, &budget()).unwrap();
            assert_eq!(by_series, by_rank, "series vs rank at n={n}, q={q}");
            assert_eq!(by_maps, by_rank, "maps vs rank at n={n}, q={q}");
        }
    }
}

#[test]
fn full_semiregularity_equals_degree_bounded_at_the_ideal_index() {
    // Two routes to the same property: the series comparison, and the
    // definitional syzygy criterion bounded at the ideal's own index.
    for q in all_nonzero_elements(4, 2) {
        let ideal = IdealSpec::single(q.clone()).unwrap();
        let r = is_semiregular(&ideal, &budget()).unwrap();
        let index = ideal_index(&ideal, &budget()).unwrap();
        let bounded = is_d_semiregular(&ideal, index, &budget()).unwrap();
        assert_eq!(r.verdict, bounded, "q = {q}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..12 {
        let n = 5 + (rng.next_u32() as usize % 2);
        let gens = vec![
            random_element(n, 2, &mut rng).unwrap(),
            random_element(n, 2, &mut rng).unwrap(),
        ];
        let ideal = IdealSpec::new(n, gens).unwrap();
        let r = is_semiregular(&ideal, &budget()).unwrap();
        let index = ideal_index(&ideal, &budget()).unwrap();
        let bounded = is_d_semiregular(&ideal, index, &budget()).unwrap();
        assert_eq!(r.verdict, bounded);
    }
}

#[test]
fn verdicts_and_dimensions_are_permutation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for trial in 0..12 {
        let n = 5 + (trial % 3);
        let m = 1 + (trial % 3);
        let gens: Vec<Element> = (0..m)
            .map(|i| random_element(n, 2 + (i % 2), &mut rng).unwrap())
            .collect();
        let perm = random_perm(n, &mut rng);
        let permuted: Vec<Element> = gens.iter().map(|g| permute_element(g, &perm)).collect();
        let a = IdealSpec::new(n, gens).unwrap();
        let b = IdealSpec::new(n, permuted).unwrap();
        let ha = hilbert_series(&a, &budget()).unwrap();
        let hb = hilbert_series(&b, &budget()).unwrap();
        assert_eq!(ha, hb, "trial {trial}");
        assert_eq!(
            is_semiregular(&a, &budget()).unwrap().verdict,
            is_semiregular(&b, &budget()).unwrap().verdict,
            "trial {trial}"
        );
    }
}

#[test]
fn semiregular_elements_pass_every_necessary_condition() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    let mut semiregular_seen = 0;
    for _ in 0..60 {
        let d = 2 + (rng.next_u32() as usize % 3);
        let span = d.min(4);
        let n = d + (rng.next_u32() as usize % (2 * span + 1)); // d <= n <= 3d for small d
        if n > 3 * d {
            continue;
        }
        let lambda = random_element(n, d, &mut rng).unwrap();
        let ideal = IdealSpec::single(lambda).unwrap();
        let verdict = is_semiregular(&ideal, &budget()).unwrap().verdict;
        let vetoed = ffd_vs_index_veto(&ideal, &budget()).unwrap();
        if verdict {
            semiregular_seen += 1;
            assert!(!vetoed, "a semi-regular element was vetoed");
            let index = ideal_index(&ideal, &budget()).unwrap();
            assert_eq!(index, predicted_index_if_semiregular(n, d).unwrap());
        }
        if vetoed {
            assert!(!verdict, "a vetoed element was declared semi-regular");
        }
    }
    assert!(
        semiregular_seen > 0,
        "sweep never saw a semi-regular element"
    );
}

#[test]
fn appending_a_generator_never_raises_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..10 {
        let n = 5 + (rng.next_u32() as usize % 3);
        let gens: Vec<Element> = (0..3)
            .map(|_| random_element(n, 2, &mut rng).unwrap())
            .collect();
        let mut prev: Option<Vec<u64>> = None;
        for i in 1..=3 {
            let ideal = IdealSpec::new(n, gens[..i].to_vec()).unwrap();
            let h = hilbert_series(&ideal, &budget()).unwrap();
            if let Some(p) = prev {
                for (k, (cur, cap)) in h.dims.iter().zip(&p).enumerate() {
                    assert!(cur <= cap, "dimension rose at degree {k}");
                }
            }
            prev = Some(h.dims);
        }
    }
}

#[test]
fn top_and_near_top_degree_elements_are_always_semiregular() {
    for n in 2..=5usize {
        for d in [n - 1, n] {
            if d == 0 {
                continue;
            }
            for e in all_nonzero_elements(n, d) {
                let ideal = IdealSpec::single(e.clone()).unwrap();
                assert!(
                    is_semiregular(&ideal, &budget()).unwrap().verdict,
                    "n={n} d={d} e={e}"
                );
                assert!(!ffd_vs_index_veto(&ideal, &budget()).unwrap());
            }
        }
    }
}

#[test]
fn symmetric_elements_match_their_classification_on_a_small_grid() {
    for d in 2..=6usize {
        for n in d..=(3 * d).min(12) {
            let ideal = IdealSpec::single(sigma(d, n).unwrap()).unwrap();
            let direct = is_semiregular(&ideal, &budget()).unwrap().verdict;
            let predicted = sigma_semiregular_predicted(d, n).unwrap();
            assert_eq!(direct, predicted, "sigma({d},{n})");
        }
    }
}

#[test]
fn degree_bounded_semiregularity_is_monotone_in_the_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for _ in 0..8 {
        let n = 5 + (rng.next_u32() as usize % 2);
        let gens = vec![
            random_element(n, 2, &mut rng).unwrap(),
            random_element(n, 3, &mut rng).unwrap(),
        ];
        let ideal = IdealSpec::new(n, gens).unwrap();
        let verdicts: Vec<bool> = (1..=n + 2)
            .map(|bound| is_d_semiregular(&ideal, bound, &budget()).unwrap())
            .collect();
        for w in verdicts.windows(2) {
            assert!(
                w[0] || !w[1],
                "degree-bounded semi-regularity regained at a larger bound"
            );
        }
    }
}

#[test]
fn forced_zero_region_has_no_semiregular_elements() {
    // Degree-d elements with n > 3d, sampled directly at the boundary
    // and one past it.
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for (n, d, draws) in [(10usize, 3usize, 25), (11, 3, 15), (13, 4, 6)] {
        for _ in 0..draws {
            let lambda = random_element(n, d, &mut rng).unwrap();
            let ideal = IdealSpec::single(lambda).unwrap();
            assert!(!is_semiregular(&ideal, &budget()).unwrap().verdict);
        }
    }
    // At the boundary n = 3d itself the classification still knows the
    // exact verdict for every quadratic rank class.
    let ctx = ExperimentCtx::default();
    let boundary = quadratic_census(&ctx, 6).unwrap();
    let verdicts: Vec<(usize, bool)> = boundary
        .classes
        .iter()
        .map(|c| (c.rank, c.semiregular))
        .collect();
    assert_eq!(verdicts, vec![(2, false), (4, false), (6, true)]);
    let past = quadratic_census(&ctx, 7).unwrap();
    assert!(past.classes.iter().all(|c| !c.semiregular));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run = || {
        let ctx = ExperimentCtx::default();
        let cell = estimate_proportion(&ctx, 8, 2, 2, 30).unwrap();
        let census = quadratic_census(&ctx, 5).unwrap();
        let ideal =
            IdealSpec::single("2:12:{1.2,3.4,5.6,7.8,9.10,11.12}".parse().unwrap()).unwrap();
        let h = hilbert_series(&ideal, &budget()).unwrap();
        (
            serde_json::to_string(&cell).unwrap(),
            serde_json::to_string(&census).unwrap(),
            h,
        )
    };
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(run);
    let multi = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap()
        .install(run);
    assert_eq!(single, multi);
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 48,
        .. ProptestConfig::default()
    })]

    #[test]
    fn elements_roundtrip_through_text_and_json(n in 1usize..10, d_raw in 0usize..10, seed in any::<u64>()) {
        let d = d_raw.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = if d == 0 {
            Element::unit(n).unwrap()
        } else {
            random_element(n, d, &mut rng).unwrap()
        };
        let text = e.to_string();
        let back: Element = text.parse().unwrap();
        prop_assert_eq!(&back, &e);
        let json = serde_json::to_string(&e).unwrap();
        let back: Element = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&back, &e);
    }

    #[test]
    fn multiplication_distributes_over_addition(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 4 + (rng.next_u32() as usize % 5);
        let da = 1 + (rng.next_u32() as usize % 2);
        let dc = 1 + (rng.next_u32() as usize % (n - da).max(1)).min(n - da);
        let a = random_element(n, da, &mut rng).unwrap();
        let b = random_element(n, da, &mut rng).unwrap();
        let c = random_element(n, dc, &mut rng).unwrap();
        let left = element_mul(&element_add(&a, &b).unwrap(), &c).unwrap();
        let right = element_add(
            &element_mul(&a, &c).unwrap(),
            &element_mul(&b, &c).unwrap(),
        ).unwrap();
        prop_assert_eq!(left, right);
    }
}
