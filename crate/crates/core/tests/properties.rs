mod common;

use common::*;
use proptest::prelude::*;
use slice_radon::eval::{evaluate_samples, generate_corpus, CorpusSpec};
use slice_radon::image::{degrade, synth_sign, Degradation, SignSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn projection_is_linear(
        f in dyadic_image(24),
        seed in 0u64..1000,
        a in 0.0..0.5f64,
        b in 0.0..0.5f64,
        angle in angle(),
        backend in backend(),
        ramp in any::<bool>(),
    ) {
        check_linearity(&f, seed, a, b, angle, backend, ramp)?;
    }

    #[test]
    fn spectrum_is_hermitian(img in dyadic_image(20), pad in 1usize..=3) {
        check_hermitian(&img, pad)?;
    }

    #[test]
    fn mass_is_conserved(img in dyadic_image(24), angle in angle()) {
        check_mass(&img, angle)?;
    }

    #[test]
    fn extrema_shrink_with_prominence(
        values in prop::collection::vec(-5.0..5.0f64, 3..80),
        p1 in 1e-3..2.0f64,
        p2 in 1e-3..2.0f64,
    ) {
        check_extrema_monotone(&values, p1, p2)?;
    }

    #[test]
    fn pgm_round_trips(levels in prop::collection::vec(any::<u8>(), 1..200), w in 1usize..12) {
        prop_assume!(levels.len() >= w);
        check_pgm_round_trip(&levels, w)?;
    }

    #[test]
    fn synthesized_signs_are_valid_images(img in sign()) {
        prop_assert_eq!(img.width(), img.height());
        prop_assert!(img.pixels().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn detector_ignores_brightness(img in sign(), a in 0.3..1.0f64, t in 0.0..1.0f64, backend in backend()) {
        check_affine_invariance(&img, a, t * (1.0 - a), backend)?;
    }

    #[test]
    fn degradation_is_seeded(seed in any::<u64>(), blur in 0.0..1.5f64, noise in 0.0..0.2f64) {
        let img = synth_sign(&SignSpec::end_of_restriction(32)).unwrap();
        let d = Degradation { gaussian_blur_sigma: blur, noise_sigma: noise, target_size: Some(16), seed };
        prop_assert_eq!(degrade(&img, &d).unwrap(), degrade(&img, &d).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn hough_matches_the_exhaustive_oracle(
        cx in 4.0..12.0f64,
        cy in 4.0..12.0f64,
        radius in 2.0..7.0f64,
        contrast in 0.0..0.7f64,
        noise in prop::option::of(any::<u64>()),
    ) {
        check_hough_oracle(&ring_image(16, cx, cy, radius, 0.9, contrast, noise), 2, 8)?;
    }
}

#[test]
fn corpus_and_evaluation_are_seeded_and_order_free() {
    let spec = CorpusSpec {
        positives: 12,
        speed_limit: 12,
        other_negative: 12,
        seed: 99,
        ..Default::default()
    };
    let a = generate_corpus(&spec).unwrap();
    assert_eq!(a, generate_corpus(&spec).unwrap());
    assert_ne!(
        a,
        generate_corpus(&CorpusSpec {
            seed: 100,
            ..spec.clone()
        })
        .unwrap()
    );

    let settings = Default::default();
    let one = evaluate_samples(&a, &settings, Some(1)).unwrap();
    let many = evaluate_samples(&a, &settings, Some(4)).unwrap();
    let mut reversed = a.clone();
    reversed.reverse();
    let rev = evaluate_samples(&reversed, &settings, None).unwrap();
    assert_eq!(one.rows, many.rows);
    assert_eq!(one.rows, rev.rows);
}
