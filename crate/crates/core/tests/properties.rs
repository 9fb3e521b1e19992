mod common;

use std::collections::BTreeSet;

use common::*;
use cviews::fca::{enumerate_concepts, BitSet, ConceptLattice, FormalContext, DEFAULT_MAX_CONCEPTS};
use cviews::interpretation::{evaluate, subgroup_discovery, SearchParams, Selector};
use cviews::similarity::{gw_distance, GwConfig};
use proptest::prelude::*;
use rand::Rng;

fn context_strategy() -> impl Strategy<Value = FormalContext> {
    (1usize..7, 1usize..9, 0u64..u64::MAX, prop::sample::select(vec![0.2, 0.5, 0.8]))
        .prop_map(|(g, m, seed, d)| random_context(&mut rng(seed), g, m, d))
}

fn subset(rng: &mut rand_chacha::ChaCha8Rng, n: usize) -> BitSet {
    BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn galois_connection(ctx in context_strategy(), seed in any::<u64>()) {
        let mut r = rng(seed);
        let (g, m) = (ctx.object_count(), ctx.attribute_count());
        let a1 = subset(&mut r, g);
        let mut a2 = a1.clone();
        a2.union_with(&subset(&mut r, g));
        let a1i = ctx.derive_objects(&a1).unwrap();
        let a2i = ctx.derive_objects(&a2).unwrap();
        prop_assert!(a2i.is_subset(&a1i));
        prop_assert!(a1.is_subset(&ctx.derive_attributes(&a1i).unwrap()));
        let a1iii = ctx.derive_objects(&ctx.derive_attributes(&a1i).unwrap()).unwrap();
        prop_assert_eq!(a1iii, a1i);
        let b = subset(&mut r, m);
        let bii = ctx.derive_objects(&ctx.derive_attributes(&b).unwrap()).unwrap();
        prop_assert!(b.is_subset(&bii));
    }

    #[test]
    fn concepts_are_lectic_distinct_and_bounded(ctx in context_strategy()) {
        let concepts = enumerate_concepts(&ctx, DEFAULT_MAX_CONCEPTS).unwrap();
        for w in concepts.windows(2) {
            prop_assert_eq!(w[0].intent().lectic_cmp(w[1].intent()), std::cmp::Ordering::Less);
        }
        let bound = 1usize << ctx.object_count().min(ctx.attribute_count());
        prop_assert!(concepts.len() <= bound);
    }

    #[test]
    fn meet_irreducibles_bounded_by_attributes(ctx in context_strategy()) {
        let lattice = ConceptLattice::from_context(&ctx, DEFAULT_MAX_CONCEPTS).unwrap();
        prop_assert!(lattice.meet_irreducibles().len() <= ctx.attribute_count());
    }

    #[test]
    fn shared_counts_symmetric_and_diagonal_dominant(ctx in context_strategy()) {
        let lattice = ConceptLattice::from_context(&ctx, DEFAULT_MAX_CONCEPTS).unwrap();
        let shared = lattice.shared_concept_counts(ctx.objects()).unwrap();
        let n = ctx.object_count();
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(shared.counts[a][b], shared.counts[b][a]);
                prop_assert!(shared.counts[a][b] <= shared.counts[a][a]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn gw_symmetric_reflexive_and_relabelling_invariant(seed in any::<u64>(), n in 2usize..6, m in 2usize..6) {
        let mut r = rng(seed);
        let x = random_space(&mut r, n, 2);
        let y = random_space(&mut r, m, 2);
        let cfg = GwConfig::default();
        let xy = gw_distance(&x, &y, &cfg).unwrap();
        let yx = gw_distance(&y, &x, &cfg).unwrap();
        prop_assert!((xy.distance - yx.distance).abs() <= 1e-6);
        prop_assert!(gw_distance(&x, &x, &cfg).unwrap().distance <= 1e-6);
        let mut perm: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            perm.swap(i, r.gen_range(0..=i));
        }
        let px = x.permuted(&perm).unwrap();
        prop_assert!(gw_distance(&px, &x, &cfg).unwrap().distance <= 1e-6);
        let moved = gw_distance(&px, &y, &cfg).unwrap();
        prop_assert!((moved.distance - xy.distance).abs() <= 1e-6, "{} vs {}", moved.distance, xy.distance);
    }

    #[test]
    fn gw_marginals_and_monotone_trace(seed in any::<u64>(), n in 2usize..7, m in 2usize..7) {
        let mut r = rng(seed);
        let x = random_space(&mut r, n, 3);
        let y = random_space(&mut r, m, 1);
        let res = gw_distance(&x, &y, &GwConfig::default()).unwrap();
        for (s, p) in res.coupling.row_sums().iter().zip(x.measure()) {
            prop_assert!((s - p).abs() <= 1e-8);
        }
        for (s, q) in res.coupling.col_sums().iter().zip(y.measure()) {
            prop_assert!((s - q).abs() <= 1e-8);
        }
        for w in res.trace.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn subgroup_invariants(seed in any::<u64>(), g in 2usize..10, m in 2usize..6, present in any::<bool>()) {
        let ctx = random_context(&mut rng(seed), g, m, 0.5);
        let target = Selector { attribute: "m0".into(), present };
        prop_assert_eq!(evaluate(&ctx, &target, &[]).unwrap().quality, 0.0);
        let p0 = evaluate(&ctx, &target, &[]).unwrap().share;
        let found = subgroup_discovery(&ctx, &target, &SearchParams::default()).unwrap();
        for s in &found {
            prop_assert!(s.size >= 1 && s.size >= s.positives);
            prop_assert!(s.quality.abs() <= p0 * (1.0 - p0) + 1e-12);
            let attrs: BTreeSet<&str> = s.selectors.iter().map(|x| x.attribute.as_str()).collect();
            prop_assert_eq!(attrs.len(), s.selectors.len());
        }
    }

    #[test]
    fn wide_beam_matches_exhaustive_search(seed in any::<u64>()) {
        let ctx = random_context(&mut rng(seed), 8, 6, 0.5);
        let params = SearchParams { beam_width: 64, max_depth: 2, top_k: 1 };
        let found = subgroup_discovery(&ctx, &Selector::present("m0"), &params).unwrap();
        let best = best_wracc_oracle(&incidence(&ctx), 0, 2).unwrap();
        prop_assert!((found[0].quality - best as f64 / 64.0).abs() < 1e-15);
    }
}
