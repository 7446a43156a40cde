use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weft_core::anyon::{projective_distance, word_unitary, Charge, Chirality, FusionBasis, ModelConstants};
use weft_core::compiler::{compile, verify_compilation, CompilePlan, CompileError, CompileRequest, Segment};
use weft_core::injection::{brute_force_injection, InjectionLibrary, SearchConfig};
use weft_core::random::random_word;
use weft_core::BraidWord;

/// Injections found at lengths 6, 14, 22 and 26.
fn library() -> &'static InjectionLibrary {
    static LIB: OnceLock<InjectionLibrary> = OnceLock::new();
    LIB.get_or_init(|| {
        let mut lib = InjectionLibrary::new(Chirality::Plus);
        for max_length in [6, 14, 22, 26] {
            let cfg = SearchConfig {
                max_length,
                ..SearchConfig::default()
            };
            lib.insert(brute_force_injection(&cfg).unwrap().best.unwrap());
        }
        lib
    })
}

fn braid() -> impl Strategy<Value = BraidWord> {
    (3usize..=8).prop_flat_map(|n| {
        let g = prop_oneof![(1..n as i32), (1..n as i32).prop_map(|s| -s)];
        prop::collection::vec(g, 0..=40).prop_map(move |v| BraidWord::from_signed(n, &v).unwrap())
    })
}

fn request(braid: BraidWord, epsilon: f64) -> CompileRequest<'static> {
    CompileRequest {
        braid,
        epsilon,
        library: library(),
        return_home: false,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// A loose epsilon keeps the short injections in play; the checks here
    /// are about structure, not accuracy.
    #[test]
    fn compiled_words_are_weaves_with_sound_parity(b in braid()) {
        let out = compile(&request(b.clone(), 1e6)).unwrap();
        let (n, p) = (b.strands(), b.len());
        prop_assert!(out.word.is_weave(1));
        prop_assert_eq!(out.warp_start, 1);
        let inj = out.injection.as_ref().map(|i| i.word.clone()).unwrap_or(BraidWord::identity(3).unwrap());
        prop_assert_eq!(&out.plan.flatten(&inj, n).unwrap(), &out.word);
        let k = out.plan.injection_count();
        prop_assert!(k <= p * (n - 2).div_ceil(2));
        prop_assert!(out.word.len() <= p + k * inj.len());

        let trace = out.word.warp_trace(1).unwrap().positions;
        let mut at = 0;
        let mut step = 0;
        for seg in &out.plan.segments {
            match *seg {
                Segment::MultipleInjection { from, to, q } => {
                    prop_assert_eq!(trace[at], from);
                    prop_assert_eq!(from % 2, to % 2);
                    prop_assert_eq!(to as i64 - from as i64, 2 * q);
                    at += q.unsigned_abs() as usize * inj.len();
                    prop_assert_eq!(trace[at], to);
                }
                Segment::OriginalGenerator { s, r } => {
                    step += 1;
                    let g = b.gens()[step - 1];
                    prop_assert_eq!((s, r), (g.index(), g.sign().as_i32()));
                    let before = trace[at];
                    prop_assert!(before == s || before == s + 1);
                    prop_assert_eq!(before % 2, step % 2);
                    at += 1;
                }
            }
        }
        prop_assert_eq!(at, out.word.len());
        prop_assert_eq!(step, p);
    }

    #[test]
    fn identity_mock_reproduces_the_source(b in braid()) {
        let model = ModelConstants::<f64>::fibonacci(Chirality::Plus);
        let plan = CompilePlan::new(&b, 0.1, false).unwrap();
        let word = plan.flatten(&BraidWord::identity(3).unwrap(), b.strands()).unwrap();
        let basis = FusionBasis::enumerate(b.strands(), Charge::Tau).unwrap();
        let d = projective_distance(
            &word_unitary(&model, &basis, &b).unwrap(),
            &word_unitary(&model, &basis, &word).unwrap(),
        )
        .unwrap();
        prop_assert!(d < 1e-10);
    }
}

#[test]
fn figure_braid_compiles_within_epsilon() {
    let model = ModelConstants::<f64>::fibonacci(Chirality::Plus);
    let b = BraidWord::from_signed(4, &[1, -2, -3, 2, 1]).unwrap();
    let out = compile(&request(b.clone(), 0.1)).unwrap();
    assert!(out.word.is_weave(1));
    assert_eq!(out.budget.delta, 0.1 / 20.0);
    assert_eq!(out.budget.injection_count, 2);
    assert!(out.budget.guaranteed_bound <= 0.1);
    for charge in Charge::ALL {
        let basis = FusionBasis::enumerate(4, charge).unwrap();
        let v = verify_compilation(&model, &b, &out.word, &basis, 0.1, Some(out.budget.guaranteed_bound)).unwrap();
        assert!(v.passed, "{v:?}");
        assert_eq!(v.within_bound, Some(true));
    }
    let same = verify_compilation(&model, &b, &b, &FusionBasis::enumerate(4, Charge::Tau).unwrap(), 0.1, None).unwrap();
    assert_eq!(same.distance, 0.0);
}

#[test]
fn budget_is_sound_on_random_braids() {
    let model = ModelConstants::<f64>::fibonacci(Chirality::Plus);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (n, p, epsilon) in [(3, 6, 0.2), (4, 8, 0.1), (5, 6, 0.1), (6, 4, 0.3)] {
        for _ in 0..3 {
            let b = random_word(n, p, &mut rng);
            let out = compile(&request(b.clone(), epsilon)).unwrap();
            assert!(out.budget.guaranteed_bound <= epsilon);
            for charge in Charge::ALL {
                let basis = FusionBasis::enumerate(n, charge).unwrap();
                let v = verify_compilation(&model, &b, &out.word, &basis, epsilon, Some(out.budget.guaranteed_bound))
                    .unwrap();
                assert!(v.passed && v.within_bound == Some(true), "n={n} {charge}: {v:?}");
            }
        }
    }
}

#[test]
fn return_home_closes_the_warp() {
    let b = BraidWord::from_signed(5, &[1, 2, 3, 4, -3, -2]).unwrap();
    let home = compile(&CompileRequest {
        return_home: true,
        ..request(b.clone(), 1e6)
    })
    .unwrap();
    assert!(home.word.is_pureweave(1));
    assert!(matches!(home.plan.segments.last(), Some(Segment::MultipleInjection { to: 1, .. })));
    let odd = BraidWord::from_signed(5, &[1, 2, 3]).unwrap();
    let err = compile(&CompileRequest {
        return_home: true,
        ..request(odd, 1e6)
    })
    .unwrap_err();
    assert_eq!(err, CompileError::ReturnHomeParity(4));
}

#[test]
fn compilation_is_deterministic() {
    let b = BraidWord::from_signed(6, &[5, -4, 3, -2, 1, 2, -3, 4]).unwrap();
    let a = compile(&request(b.clone(), 0.05)).unwrap();
    let again = compile(&request(b, 0.05)).unwrap();
    assert_eq!(a, again);
}

#[test]
fn impossible_budget_names_delta() {
    let mut lib = InjectionLibrary::new(Chirality::Plus);
    let cfg = SearchConfig {
        max_length: 14,
        ..SearchConfig::default()
    };
    lib.insert(brute_force_injection(&cfg).unwrap().best.unwrap());
    let err = compile(&CompileRequest {
        braid: BraidWord::from_signed(4, &[3]).unwrap(),
        epsilon: 0.01,
        library: &lib,
        return_home: false,
    })
    .unwrap_err();
    assert!(matches!(err, CompileError::NoInjection { best: None, .. }));
    assert!(err.to_string().contains("2.500e-3"), "{err}");
}
