use num_complex::Complex64;
use proptest::prelude::*;
use weft_core::anyon::{projective_distance, word_unitary, Charge, Chirality, FusionBasis, ModelConstants, Unitary};
use weft_core::BraidWord;

fn signed(n: usize, max_len: usize) -> impl Strategy<Value = Vec<i32>> {
    let g = prop_oneof![(1..n as i32), (1..n as i32).prop_map(|s| -s)];
    prop::collection::vec(g, 0..=max_len)
}

fn setup() -> impl Strategy<Value = (FusionBasis, Vec<i32>, Vec<i32>, Vec<i32>)> {
    (3usize..=6, prop::bool::ANY).prop_flat_map(|(n, tau)| {
        let charge = if tau { Charge::Tau } else { Charge::Vacuum };
        (
            Just(FusionBasis::enumerate(n, charge).unwrap()),
            signed(n, 20),
            signed(n, 20),
            signed(n, 20),
        )
    })
}

fn unitary(model: &ModelConstants<f64>, basis: &FusionBasis, w: &[i32]) -> Unitary<f64> {
    let word = BraidWord::from_signed(basis.n(), w).unwrap();
    word_unitary(model, basis, &word).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn word_unitaries_are_unitary((basis, a, _, _) in setup()) {
        for chirality in [Chirality::Plus, Chirality::Minus] {
            let model = ModelConstants::fibonacci(chirality);
            prop_assert!(unitary(&model, &basis, &a).unitarity_residual() < 1e-12);
        }
    }

    /// Later crossings act on the left.
    #[test]
    fn representation_is_a_homomorphism((basis, a, b, _) in setup()) {
        let model = ModelConstants::fibonacci(Chirality::Plus);
        let ab: Vec<i32> = a.iter().chain(&b).copied().collect();
        let lhs = unitary(&model, &basis, &ab);
        let rhs = unitary(&model, &basis, &b).try_mul(&unitary(&model, &basis, &a)).unwrap();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        let inv: Vec<i32> = a.iter().rev().map(|g| -g).collect();
        let round = unitary(&model, &basis, &a).try_mul(&unitary(&model, &basis, &inv)).unwrap();
        prop_assert!(round.max_abs_diff(&Unitary::identity(basis.dim())) < 1e-12);
    }

    #[test]
    fn projective_distance_is_a_metric((basis, a, b, c) in setup(), theta in -3.2f64..3.2) {
        let model = ModelConstants::fibonacci(Chirality::Plus);
        let (u, v, w) = (unitary(&model, &basis, &a), unitary(&model, &basis, &b), unitary(&model, &basis, &c));
        let d = |x: &Unitary<f64>, y: &Unitary<f64>| projective_distance(x, y).unwrap();
        prop_assert!(d(&u, &u) < 1e-7);
        prop_assert!((d(&u, &v) - d(&v, &u)).abs() < 1e-12);
        // distances near zero carry ~1e-8 of rounding from the square root
        prop_assert!(d(&u, &w) <= d(&u, &v) + d(&v, &w) + 1e-7);
        let phased = u.scale(Complex64::from_polar(1.0, theta));
        prop_assert!((d(&phased, &v).powi(2) - d(&u, &v).powi(2)).abs() < 1e-12);
        prop_assert!(d(&u, &v) <= 2f64.sqrt() + 1e-12);
    }
}

#[test]
fn mirror_chirality_conjugates_every_entry() {
    let basis = FusionBasis::enumerate(5, Charge::Tau).unwrap();
    let w = [1, -2, 3, 4, -1, 2];
    let plus = unitary(&ModelConstants::fibonacci(Chirality::Plus), &basis, &w);
    let minus = unitary(&ModelConstants::fibonacci(Chirality::Minus), &basis, &w);
    for (a, b) in plus.entries().iter().zip(minus.entries()) {
        assert!((a.conj() - b).norm() < 1e-12);
    }
}
