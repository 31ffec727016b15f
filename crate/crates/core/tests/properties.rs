use proptest::prelude::*;

use excomp::bhk::{element_leq, psub_equiv, Context, Formula, Presubobject, Signature, Term};
use excomp::depprod::{
    beta_is_monic, build_dependent_product, check_family_properties, iso_between, iso_to_oracle,
    oracle_dependent_product,
};
use excomp::excompletion::{ex_compose, ex_eq, ExCompletion};
use excomp::finset::{equalizer, sections_of};
use excomp::fullness::{self, build_full_family};
use excomp::qcart::{find_pseudo_eqrel_witnesses, weak_pullback, ElementRelation, Span};
use excomp::suite::{compatible_arrows, partition_object, seeded_depprod_instances};
use excomp::{FiniteMap, FiniteSet, Limits, WeakLimitStrategy};

const STRATEGIES: [WeakLimitStrategy; 2] = [WeakLimitStrategy::Minimal, WeakLimitStrategy::Padded(2)];

fn map_strategy(max_dom: usize, max_cod: usize) -> impl Strategy<Value = (usize, usize, Vec<usize>)> {
    (0..=max_dom, 1..=max_cod).prop_flat_map(|(n, m)| (Just(n), Just(m), proptest::collection::vec(0..m, n)))
}

fn to_map(prefix: &str, (n, m, table): (usize, usize, Vec<usize>)) -> FiniteMap {
    let dom = FiniteSet::numbered(&format!("{prefix}d"), n);
    let cod = FiniteSet::numbered(&format!("{prefix}c"), m);
    FiniteMap::new(dom, cod, table).unwrap()
}

fn relation_strategy(max: usize) -> impl Strategy<Value = (usize, Vec<bool>)> {
    (1..=max).prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * n)))
}

fn naive_transitive(r: &ElementRelation) -> bool {
    let n = r.rows();
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| !(r.holds(a, b) && r.holds(b, c)) || r.holds(a, c))))
}

/// Sections of `g` over each fiber of `f`, counted on classes: the product,
/// over the X-classes above an index class, of the Y-classes above each.
fn brute_force_sections(inst: &excomp::suite::DepProdInstance) -> Vec<usize> {
    let (i, x, y) = (inst.f.dst(), inst.f.src(), inst.g.src());
    let above_x = |c: usize| y.representatives().iter().filter(|&&b| x.class_of(inst.g.apply(b)) == c).count();
    i.representatives()
        .iter()
        .map(|&a| {
            x.representatives()
                .iter()
                .filter(|&&c| i.class_of(inst.f.apply(c)) == i.class_of(a))
                .map(|&c| above_x(x.class_of(c)))
                .product()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sections_exist_exactly_for_surjections(spec in map_strategy(4, 3)) {
        let f = to_map("s", spec);
        let sections = sections_of(&f);
        prop_assert_eq!(!sections.is_empty(), f.is_surjective());
        for s in &sections {
            prop_assert!(s.then(&f).unwrap().is_identity());
        }
    }

    #[test]
    fn equalizer_lands_where_the_maps_agree((n, m, a) in map_strategy(4, 3), seed in any::<u64>()) {
        let f = to_map("e", (n, m, a));
        let b: Vec<usize> = (0..n).map(|k| ((seed >> (2 * k)) as usize) % m).collect();
        let g = FiniteMap::new(f.dom().clone(), f.cod().clone(), b).unwrap();
        let (e, incl) = equalizer(&f, &g).unwrap();
        let agree = (0..n).filter(|&x| f.apply(x) == g.apply(x)).count();
        prop_assert_eq!(e.len(), agree);
        prop_assert!(incl.is_injective());
        prop_assert!(incl.then(&f).unwrap().same_as(&incl.then(&g).unwrap()));
    }

    #[test]
    fn weak_pullback_image_is_the_fibered_product(
        (m, a, b) in (1usize..=3).prop_flat_map(|m| (
            Just(m),
            proptest::collection::vec(0..m, 0..=3),
            proptest::collection::vec(0..m, 0..=3),
        ))
    ) {
        let f = to_map("f", (a.len(), m, a));
        let g = FiniteMap::new(FiniteSet::numbered("g", b.len()), f.cod().clone(), b).unwrap();
        for s in STRATEGIES {
            let p = weak_pullback(&f, &g, s).unwrap();
            let image = p.image();
            for x in f.dom().elements() {
                for y in g.dom().elements() {
                    prop_assert_eq!(image.holds(x, y), f.apply(x) == g.apply(y));
                }
            }
        }
    }

    #[test]
    fn transitivity_test_matches_the_definition((n, bits) in relation_strategy(6)) {
        let r = ElementRelation::from_fn(n, n, |a, b| bits[a * n + b]);
        prop_assert_eq!(r.is_transitive(), naive_transitive(&r));
    }

    #[test]
    fn witness_search_succeeds_exactly_for_equivalences((n, bits) in relation_strategy(4), pad in 1usize..3) {
        let x = FiniteSet::numbered("r", n);
        let r = ElementRelation::from_fn(n, n, |a, b| bits[a * n + b]);
        let span = Span::from_relation(&r, &x, &x).padded(pad);
        for s in STRATEGIES {
            let found = find_pseudo_eqrel_witnesses(&span, s).unwrap();
            prop_assert_eq!(found.is_ok(), r.is_equivalence());
            if let Ok(eq) = found {
                prop_assert!(eq.check_squares().is_ok());
            }
        }
    }

    #[test]
    fn quotients_are_effective(blocks in proptest::collection::vec(0usize..3, 1..5)) {
        let ex = ExCompletion::default();
        let obj = partition_object(&ex, "q", &blocks).unwrap();
        let q = ex.quotient(&obj);
        let kp = ex.kernel_pair(&q).unwrap();
        prop_assert_eq!(&kp.relation(), obj.relation());
        let (coeq, _) = ex.coequalizer(&kp.k1, &kp.k2).unwrap();
        prop_assert_eq!(coeq.relation(), obj.relation());
    }

    #[test]
    fn composition_respects_equality(a in proptest::collection::vec(0usize..2, 1..4),
                                     b in proptest::collection::vec(0usize..2, 1..4),
                                     c in proptest::collection::vec(0usize..2, 1..3)) {
        let ex = ExCompletion::default();
        let (a, b, c) = (
            partition_object(&ex, "a", &a).unwrap(),
            partition_object(&ex, "b", &b).unwrap(),
            partition_object(&ex, "c", &c).unwrap(),
        );
        let fs = compatible_arrows(&a, &b);
        let gs = compatible_arrows(&b, &c);
        for f in &fs {
            for f2 in fs.iter().filter(|f2| ex_eq(f, f2).unwrap()) {
                for g in &gs {
                    for g2 in gs.iter().filter(|g2| ex_eq(g, g2).unwrap()) {
                        let l = ex_compose(g, f).unwrap();
                        let r = ex_compose(g2, f2).unwrap();
                        prop_assert!(ex_eq(&l, &r).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn full_families_have_partial_sections_indexed_by_f(f in map_strategy(3, 3), seed in any::<u64>()) {
        let f = to_map("ff", f);
        let n = if f.dom().is_empty() { 0 } else { (seed % 4) as usize };
        let y = FiniteSet::numbered("fy", n);
        let g = FiniteMap::from_fn(&y, f.dom(), |b| ((seed >> (8 + 2 * b)) as usize) % f.dom().len());
        let fam = build_full_family(&f, &g, Limits::default()).unwrap();
        prop_assert!(fullness::check_family_properties(&fam).is_ok());
        let report = fullness::check_fullness(&fam, Limits::default()).unwrap();
        prop_assert!(report.passed());
    }

    #[test]
    fn conjunction_is_intersection(f in map_strategy(3, 3), seed in any::<u64>()) {
        let f = to_map("b", f);
        let x = f.dom().clone();
        let ctx = Context::new(&[("x", &x), ("x'", &x)]);
        let sig = Signature::default().with_map("f", f.clone());
        let same = Formula::Eq(Term::app("f", Term::var("x")), Term::app("f", Term::var("x'")));
        let pick = Formula::Eq(Term::var("x"), Term::var("x'"));
        let both = Formula::and(same.clone(), if seed % 2 == 0 { pick.clone() } else { Formula::Truth });
        for s in STRATEGIES {
            let i = excomp::bhk::interpret;
            let (a, b, ab) = (
                i(&same, &ctx, &sig, s).unwrap(),
                i(if seed % 2 == 0 { &pick } else { &Formula::Truth }, &ctx, &sig, s).unwrap(),
                i(&both, &ctx, &sig, s).unwrap(),
            );
            let meet: Vec<bool> = a.elements().iter().zip(b.elements()).map(|(p, q)| *p && q).collect();
            prop_assert_eq!(ab.elements(), meet);
            let other = i(&both, &ctx, &sig, WeakLimitStrategy::Minimal).unwrap();
            prop_assert!(psub_equiv(&ab, &other).unwrap());
            prop_assert!(element_leq(&ab, &a).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dependent_products_count_sections(seed in any::<u64>()) {
        let ex = ExCompletion::default();
        let inst = &seeded_depprod_instances(&ex, seed, 1, 3).unwrap()[0];
        let res = build_dependent_product(&inst.f, &inst.g, WeakLimitStrategy::Minimal, Limits::default()).unwrap();
        prop_assert!(res.g_obj.relation().is_equivalence());
        prop_assert!(naive_transitive(res.g_obj.relation()));
        prop_assert!(check_family_properties(&res).is_ok());
        prop_assert!(beta_is_monic(&res));
        let expected = brute_force_sections(inst);
        prop_assert_eq!(res.classes_per_index(), expected.clone());
        let oracle = oracle_dependent_product(&inst.f, &inst.g).unwrap();
        prop_assert_eq!(&oracle.sections_per_index, &expected);
        prop_assert!(iso_to_oracle(&res, &oracle).is_ok());
    }

    #[test]
    fn padding_does_not_change_dependent_products(seed in any::<u64>()) {
        let ex = ExCompletion::default();
        let inst = &seeded_depprod_instances(&ex, seed, 1, 2).unwrap()[0];
        let minimal = build_dependent_product(&inst.f, &inst.g, WeakLimitStrategy::Minimal, Limits::default()).unwrap();
        let padded = build_dependent_product(&inst.f, &inst.g, WeakLimitStrategy::Padded(2), Limits::default());
        prop_assume!(padded.is_ok());
        let padded = padded.unwrap();
        prop_assert_eq!(padded.classes_per_index(), minimal.classes_per_index());
        let oracle = oracle_dependent_product(&inst.f, &inst.g).unwrap();
        prop_assert!(iso_between(&minimal, &padded, &oracle).is_ok());
    }
}

#[test]
fn presubobjects_compare_by_factorization() {
    let x = FiniteSet::numbered("p", 2);
    let top = Presubobject::top(&x);
    let doubled = Presubobject::new(FiniteMap::new(FiniteSet::numbered("d", 4), x.clone(), vec![0, 1, 1, 0]).unwrap());
    assert!(psub_equiv(&top, &doubled).unwrap());
}
