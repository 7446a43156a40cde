use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use weft_core::random::{random_pureweave, random_purebraid, random_weave};
use weft_core::BraidWord;

fn word(max_n: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (2..=max_n).prop_flat_map(move |n| {
        let g = prop_oneof![(1..n as i32), (1..n as i32).prop_map(|s| -s)];
        prop::collection::vec(g, 0..=max_len).prop_map(move |v| BraidWord::from_signed(n, &v).unwrap())
    })
}

fn pair(max_n: usize, max_len: usize) -> impl Strategy<Value = (BraidWord, BraidWord, BraidWord)> {
    word(max_n, max_len).prop_flat_map(move |a| {
        let n = a.strands();
        let w = move || {
            let g = prop_oneof![(1..n as i32), (1..n as i32).prop_map(|s| -s)];
            prop::collection::vec(g, 0..=max_len).prop_map(move |v| BraidWord::from_signed(n, &v).unwrap())
        };
        (Just(a), w(), w())
    })
}

proptest! {
    #[test]
    fn composition_is_associative((a, b, c) in pair(8, 40)) {
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_reduces_to_identity(a in word(8, 40)) {
        prop_assert!(a.compose(&a.inverse()).unwrap().free_reduce().is_empty());
        prop_assert!(a.inverse().compose(&a).unwrap().free_reduce().is_empty());
        prop_assert_eq!(a.inverse().inverse(), a.clone());
        let r = a.free_reduce();
        prop_assert_eq!(r.free_reduce(), r.clone());
        prop_assert_eq!(r.permutation(), a.permutation());
        prop_assert_eq!(r.writhe(), a.writhe());
    }

    #[test]
    fn permutation_is_a_homomorphism((a, b, _c) in pair(8, 40)) {
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.permutation(), a.permutation().then(&b.permutation()));
        prop_assert!(a.compose(&a.inverse()).unwrap().permutation().is_identity());
        prop_assert_eq!(ab.writhe(), a.writhe() + b.writhe());
    }

    #[test]
    fn warp_trace_follows_the_permutation(a in word(8, 40), k in 1usize..=8) {
        let k = 1 + (k - 1) % a.strands();
        let t = a.warp_trace(k).unwrap();
        prop_assert_eq!(t.positions.len(), a.len() + 1);
        prop_assert_eq!(t.positions[0], k);
        prop_assert_eq!(t.end(), a.permutation().apply(k));
        for (i, g) in a.gens().iter().enumerate() {
            prop_assert_eq!(t.positions[i + 1], g.move_position(t.positions[i]));
        }
        // a weave moves its warp at every crossing
        prop_assert_eq!(a.is_weave(k), t.positions.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn random_weaves_are_weaves(seed in any::<u64>(), n in 3usize..=8, len in 0usize..=40) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = 1 + (seed as usize) % n;
        let w = random_weave(n, start, len, &mut rng);
        prop_assert!(w.is_weave(start));
        let pw = random_pureweave(n, 30, &mut rng);
        prop_assert!(pw.is_pureweave(1));
        prop_assert_eq!(pw.erase_strand(1).unwrap().strands(), n - 1);
    }
}

/// Conjugating a pureweave by a purebraid stays in the kernel of erasing
/// the warp: erasure gives a freely trivial word, and the permutation is
/// still the identity.
#[test]
fn conjugated_pureweaves_erase_to_nothing() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let n = 5;
    for _ in 0..200 {
        let b = random_purebraid(n, 30, &mut rng);
        let w = random_pureweave(n, 30, &mut rng);
        assert!(b.len() <= 30 && w.len() <= 30);
        let c = b.compose(&w).unwrap().compose(&b.inverse()).unwrap();
        assert!(c.is_purebraid(), "{c}");
        assert!(c.erase_strand(1).unwrap().free_reduce().is_empty(), "b = {b}, w = {w}");
    }
}
