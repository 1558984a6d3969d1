//! Heavier randomized stress for the decomposition: larger grids, denser
//! complexes, and full window truncations of random involutions.

use hfklab_core::bicomplex::{
    classify_staircases, decompose,
    synth::{random_equivariant, random_planted_bicomplex},
    tate_bicomplex, total_homology_from_decomposition, verify_decomposition_detailed,
};
use hfklab_core::rng::SplitMix64;

#[test]
fn dense_planted_complexes_round_trip() {
    let mut rng = SplitMix64::new(0x5712e55);
    for case in 0..120 {
        let (b, planted) = random_planted_bicomplex(&mut rng, 6, 5, 8, 24);
        let d = decompose(&b).unwrap_or_else(|e| panic!("case {case}: {e}"));
        if let Err(msg) = verify_decomposition_detailed(&b, &d) {
            panic!("case {case}: {msg}");
        }
        assert_eq!(&d.generator_counts(), b.dims(), "case {case}");
        assert_eq!(d.squares.len(), planted.squares, "case {case}");
        assert_eq!(classify_staircases(&d), planted.staircases, "case {case}");
        assert_eq!(
            b.total_complex().homology(),
            total_homology_from_decomposition(&d),
            "case {case}"
        );
    }
}

#[test]
fn tate_windows_of_random_involutions_decompose() {
    let mut rng = SplitMix64::new(0x7a7e);
    for case in 0..40 {
        let e = random_equivariant(&mut rng, 3, 2, 2);
        if e.chain_complex().grading_range().is_none() {
            continue;
        }
        let t = tate_bicomplex(&e, 8).unwrap();
        let d = decompose(&t).unwrap_or_else(|err| panic!("case {case}: {err}"));
        if let Err(msg) = verify_decomposition_detailed(&t, &d) {
            panic!("case {case}: {msg}");
        }
        assert_eq!(&d.generator_counts(), t.dims(), "case {case}");
        assert_eq!(
            t.total_complex().homology(),
            total_homology_from_decomposition(&d),
            "case {case}"
        );
    }
}
