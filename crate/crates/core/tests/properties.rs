use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use awarekit::genmodels::{gen_fh, gen_hms, gen_implicit, Caps};
use awarekit::hms::{event_basis, UnawarenessStructure};
use awarekit::io::{parse_model, render_model, AnyModel};
use awarekit::lpa::{check_proof, instance, is_tautology, parse_proof, random_formula, render_proof, Justification, ProofLine, Substitution, SCHEMATA};
use awarekit::semantics::{truth_table, TruthValue};
use awarekit::syntax::{parse_any_agent, Formula, Modality};
use awarekit::{Law, Report};

fn formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Top),
        prop::sample::select(vec!["p", "q", "r"]).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (
                prop::sample::select(Modality::ALL.to_vec()),
                prop::sample::select(vec!["1", "2"]),
                inner
            )
                .prop_map(|(m, i, f)| Formula::modal(m, i, f)),
        ]
    })
}

fn caps() -> impl Strategy<Value = Caps> {
    (1usize..=3, 1usize..=4, 1usize..=2).prop_map(|(k, m, n)| Caps::new(k, m, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rendering_parses_back(f in formula()) {
        prop_assert_eq!(parse_any_agent(&f.render()).unwrap(), f);
    }

    #[test]
    fn excluded_middle_is_a_tautology(f in formula()) {
        prop_assert_eq!(is_tautology(&Formula::or(f.clone(), Formula::not(f))), Some(true));
    }

    #[test]
    fn generated_models_validate(seed in any::<u64>(), caps in caps()) {
        let k = gen_fh(seed, caps).unwrap();
        prop_assert!(k.validate().is_empty(), "{}", k.validate());
        let m = gen_hms(seed, caps).unwrap();
        prop_assert!(m.validate().is_empty(), "{}", m.validate());
        let im = gen_implicit(seed, caps).unwrap();
        prop_assert!(im.validate().is_empty(), "{}", im.validate());
    }

    #[test]
    fn generation_is_deterministic(seed in any::<u64>(), caps in caps()) {
        let a = render_model(&AnyModel::Complemented(gen_hms(seed, caps).unwrap()));
        let b = render_model(&AnyModel::Complemented(gen_hms(seed, caps).unwrap()));
        prop_assert_eq!(a, b);
    }

    #[test]
    fn model_files_round_trip(seed in any::<u64>(), caps in caps()) {
        for m in [
            AnyModel::Fh(gen_fh(seed, caps).unwrap()),
            AnyModel::Complemented(gen_hms(seed, caps).unwrap()),
            AnyModel::Implicit(gen_implicit(seed, caps).unwrap()),
        ] {
            let text = render_model(&m);
            let back = parse_model(&text).unwrap();
            prop_assert_eq!(back.family(), m.family());
            prop_assert_eq!(render_model(&back), text);
        }
    }

    #[test]
    fn event_algebra_laws(seed in any::<u64>(), caps in caps(), picks in prop::collection::vec(any::<prop::sample::Index>(), 3)) {
        let m = gen_hms(seed, caps).unwrap();
        let l = m.lattice();
        let basis = event_basis(&m, 32);
        let [a, b, c] = [&picks[0], &picks[1], &picks[2]].map(|i| i.get(&basis).clone());
        prop_assert_eq!(l.negate(&l.negate(&a)), a.clone());
        let up = |e: &awarekit::hms::Event| l.up_closure(e);
        // conjunction is intersection of up-closures
        let mut both = up(&a);
        both.intersect_with(&up(&b));
        prop_assert_eq!(up(&l.conjoin(&a, &b)), both);
        prop_assert_eq!(l.conjoin(&a, &b), l.conjoin(&b, &a));
        prop_assert_eq!(l.conjoin(&l.conjoin(&a, &b), &c), l.conjoin(&a, &l.conjoin(&b, &c)));
        // E and not-E partition the states whose space contains S(E)
        let (pos, neg) = (up(&a), up(&l.negate(&a)));
        prop_assert!(pos.is_disjoint(&neg));
        let mut all = pos;
        all.union_with(&neg);
        prop_assert_eq!(all, l.up_of(a.space(), &l.space_set(a.space())));
        prop_assert!(l.event_subset(&l.conjoin(&a, &b), &a));
    }

    #[test]
    fn definedness_follows_the_atoms(seed in any::<u64>(), caps in caps(), fseed in any::<u64>()) {
        let m = gen_hms(seed, caps).unwrap();
        let l = m.lattice();
        let mut rng = ChaCha8Rng::seed_from_u64(fseed);
        let f = random_formula(&mut rng, l.atoms().names(), m.agents(), 2);
        let atoms = f.atom_set(l.atoms()).unwrap();
        let table = truth_table(&m, &f).unwrap();
        let negated = truth_table(&m, &Formula::not(f)).unwrap();
        for (s, (t, n)) in table.iter().zip(&negated).enumerate() {
            let defined = atoms.is_subset(l.space_of(s));
            prop_assert_eq!(*t != TruthValue::Undefined, defined);
            match t {
                TruthValue::True => prop_assert_eq!(*n, TruthValue::False),
                TruthValue::False => prop_assert_eq!(*n, TruthValue::True),
                TruthValue::Undefined => prop_assert_eq!(*n, TruthValue::Undefined),
            }
        }
    }

    #[test]
    fn schema_instances_are_one_line_proofs(fseed in any::<u64>(), which in 0..SCHEMATA.len()) {
        let mut rng = ChaCha8Rng::seed_from_u64(fseed);
        let atoms = ["p".to_string(), "q".to_string()];
        let agents = ["1".to_string(), "2".to_string()];
        let mut sub = Substitution::default();
        for v in ["phi", "psi"] {
            sub.formulas.insert(v.into(), random_formula(&mut rng, &atoms, &agents, 2));
        }
        sub.agents.insert("i".into(), "1".into());
        sub.agents.insert("j".into(), "2".into());
        let name = SCHEMATA[which].0;
        let f = instance(name, &sub).unwrap();
        let proof = vec![
            ProofLine { formula: f.clone(), by: Justification::Axiom { name: name.into(), sub: None } },
            ProofLine { formula: Formula::implicit("2", f), by: Justification::Necessitation { from: 1 } },
        ];
        prop_assert!(check_proof(&proof).accepted);
        prop_assert_eq!(parse_proof(&render_proof(&proof)).unwrap(), proof);
    }

    #[test]
    fn reports_round_trip_through_json(witnesses in prop::collection::vec("[a-z ]{0,12}", 0..5)) {
        let mut r = Report::new();
        for w in &witnesses {
            r.push(Law::Confinement, w.clone());
        }
        let back: Report = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        prop_assert_eq!(back, r);
    }
}
