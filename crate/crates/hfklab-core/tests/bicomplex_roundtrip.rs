//! Round-trip and batch checks for the square/staircase machinery.

use std::collections::BTreeMap;

use hfklab_core::bicomplex::{
    check_floyd, check_open_staircases, check_smith, classify_staircases, decompose,
    floyd_witnesses, no_open_top_closed_bottom, per_grading_comparison,
    synth::{random_equivariant, random_planted_bicomplex, s2_reflection},
    tate_bicomplex, tate_column_page_ranks, total_homology_from_decomposition,
    verify_decomposition, verify_decomposition_detailed, Bicomplex, Pos, Staircase,
};
use hfklab_core::f2lin::F2Matrix;
use hfklab_core::rng::SplitMix64;

fn square_at(corner: Pos) -> Bicomplex {
    let (p, q) = corner;
    let mut b = Bicomplex::new();
    for pos in [(p, q), (p - 1, q), (p, q - 1), (p - 1, q - 1)] {
        b.set_dim(pos, 1);
    }
    let unit = F2Matrix::identity(1);
    b.set_dh((p, q), unit.clone());
    b.set_dv((p, q), unit.clone());
    b.set_dv((p - 1, q), unit.clone());
    b.set_dh((p, q - 1), unit);
    b
}

#[test]
fn validate_accepts_and_rejects() {
    assert!(Bicomplex::new().validate().is_ok());
    assert!(square_at((1, 1)).validate().is_ok());
    // Break commutation: drop one side of the square.
    let mut bad = square_at((1, 1));
    bad.set_dv((0, 1), F2Matrix::zeros(1, 1));
    let err = bad.validate().unwrap_err();
    assert!(err.to_string().contains("d_h o d_v"), "got {err}");
}

#[test]
fn single_square_decomposes_to_one_square() {
    let b = square_at((1, 1));
    let d = decompose(&b).unwrap();
    assert_eq!(d.squares.len(), 1);
    assert!(d.staircases.is_empty());
    assert!(verify_decomposition(&b, &d));
}

#[test]
fn zero_differentials_give_singleton_staircases() {
    let mut b = Bicomplex::new();
    b.set_dim((0, 0), 3);
    b.set_dim((2, 1), 2);
    let d = decompose(&b).unwrap();
    assert!(d.squares.is_empty());
    assert_eq!(d.staircases.len(), 5);
    for s in &d.staircases {
        assert_eq!(s.length(), 0);
        assert!(s.open_top && s.open_bottom);
    }
    assert!(verify_decomposition(&b, &d));
}

#[test]
fn planted_round_trip_and_summand_recovery() {
    let mut rng = SplitMix64::new(0xb1c0);
    for case in 0..200 {
        let (b, planted) = random_planted_bicomplex(&mut rng, 4, 4, 6, 8);
        let d = decompose(&b).unwrap_or_else(|e| panic!("case {case}: decompose failed: {e}"));
        if let Err(msg) = verify_decomposition_detailed(&b, &d) {
            panic!("case {case}: certificate rejected: {msg}");
        }
        // Generator counts per bigrading are conserved.
        assert_eq!(&d.generator_counts(), b.dims(), "case {case}: counts");
        // Krull-Schmidt: the planted multiset is recovered exactly.
        assert_eq!(d.squares.len(), planted.squares, "case {case}: squares");
        assert_eq!(
            classify_staircases(&d),
            planted.staircases,
            "case {case}: staircase classes"
        );
        // Homology of the total complex matches the staircase prediction.
        let direct = b.total_complex().homology();
        let predicted = total_homology_from_decomposition(&d);
        assert_eq!(direct, predicted, "case {case}: total homology");
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let mut rng = SplitMix64::new(7);
    let (b, _) = random_planted_bicomplex(&mut rng, 3, 3, 4, 6);
    let d = decompose(&b).unwrap();
    assert!(verify_decomposition(&b, &d));

    // Tamper with a basis change.
    if let Some((&pos, m)) = d.basis_change.iter().next() {
        if m.rows() >= 1 {
            let mut bad = d.clone();
            let mut mm = m.clone();
            let flip = !mm.get(0, 0);
            mm.set(0, 0, flip);
            bad.basis_change.insert(pos, mm);
            assert!(!verify_decomposition(&b, &bad));
        }
    }

    // Delete a staircase arrow by splitting a staircase in two.
    if let Some(i) = d.staircases.iter().position(|s: &Staircase| s.cells.len() >= 2) {
        let mut bad = d.clone();
        let s = bad.staircases.remove(i);
        let (head, tail) = s.cells.split_at(1);
        bad.staircases.push(Staircase {
            cells: head.to_vec(),
            open_top: true,
            open_bottom: true,
        });
        bad.staircases.push(Staircase {
            cells: tail.to_vec(),
            open_top: true,
            open_bottom: true,
        });
        assert!(!verify_decomposition(&b, &bad));
    }
}

#[test]
fn homology_of_small_models() {
    let s2 = s2_reflection();
    let h = s2.chain_complex().homology();
    assert_eq!(h, BTreeMap::from([(0, 1), (2, 1)]));

    // A circle: one vertex, one edge, zero boundary.
    let mut circle = hfklab_core::bicomplex::ChainComplex::new();
    circle.set_dim(0, 1);
    circle.set_dim(1, 1);
    assert_eq!(circle.homology(), BTreeMap::from([(0, 1), (1, 1)]));

    let mut point = hfklab_core::bicomplex::ChainComplex::new();
    point.set_dim(0, 1);
    assert_eq!(point.homology(), BTreeMap::from([(0, 1)]));
}

#[test]
fn fixed_subcomplex_of_the_reflection_sphere_is_a_circle() {
    let s2 = s2_reflection();
    let fixed = s2.fixed_subcomplex().unwrap();
    assert_eq!(fixed.homology(), BTreeMap::from([(0, 1), (1, 1)]));
    // All cells fixed, identity involution: the full complex.
    let mut rng = SplitMix64::new(5);
    let e = random_equivariant(&mut rng, 2, 3, 0);
    let fixed = e.fixed_subcomplex().unwrap();
    assert_eq!(fixed.homology(), e.chain_complex().homology());
}

#[test]
fn smith_and_floyd_on_the_reflection_sphere() {
    let s2 = s2_reflection();
    let smith = check_smith(&s2).unwrap();
    assert!(smith.passed);
    assert_eq!((smith.rows[0].lhs, smith.rows[0].rhs), (2, 2));

    let floyd = check_floyd(&s2).unwrap();
    assert!(floyd.passed);
    let by_n: BTreeMap<i64, (i64, i64)> =
        floyd.rows.iter().map(|r| (r.a, (r.lhs, r.rhs))).collect();
    assert_eq!(by_n[&2], (1, 0));
    assert_eq!(by_n[&1], (1, 1));
    assert_eq!(by_n[&0], (2, 2));

    // The naive per-grading comparison fails at grading 1.
    let per = per_grading_comparison(&s2).unwrap();
    let at1 = per.iter().find(|&&(i, _, _)| i == 1).unwrap();
    assert_eq!((at1.1, at1.2), (0, 1));
}

#[test]
fn smith_equals_lowest_floyd_row() {
    let mut rng = SplitMix64::new(40);
    for _ in 0..30 {
        let e = random_equivariant(&mut rng, 3, 2, 2);
        let smith = check_smith(&e).unwrap();
        let floyd = check_floyd(&e).unwrap();
        let lowest = floyd.rows.iter().min_by_key(|r| r.a).unwrap();
        assert_eq!((lowest.lhs, lowest.rhs), (smith.rows[0].lhs, smith.rows[0].rhs));
    }
}

#[test]
fn floyd_passes_on_random_equivariant_complexes() {
    let mut rng = SplitMix64::new(0xf107d);
    for case in 0..100 {
        let e = random_equivariant(&mut rng, 3, 2, 2);
        let report = check_floyd(&e).unwrap();
        assert!(report.passed, "case {case} failed: {report:?}");
        assert!(check_smith(&e).unwrap().passed);
    }
}

#[test]
fn tate_bicomplex_shape_and_page_ranks() {
    let s2 = s2_reflection();
    let w = 6;
    let t = tate_bicomplex(&s2, w).unwrap();
    assert!(t.validate().is_ok());
    assert_eq!(t.dim((0, 0)), 2);
    assert_eq!(t.dim((5, 2)), 2);
    // Horizontal maps have rank 1 exactly where cells are swapped.
    assert_eq!(t.dh((1, 2)).rank(), 1);
    assert!(t.dh((1, 0)).is_zero());

    // ker(1+tau)/im(1+tau) counts fixed cells per grading.
    let ranks = tate_column_page_ranks(&s2);
    assert_eq!(ranks, BTreeMap::from([(0, 2), (1, 2), (2, 0)]));
    let mut rng = SplitMix64::new(9);
    for _ in 0..50 {
        let e = random_equivariant(&mut rng, 3, 2, 2);
        for (i, rank) in tate_column_page_ranks(&e) {
            assert_eq!(rank, e.fixed_cells(i).len(), "grading {i}");
        }
    }
}

#[test]
fn tate_decomposition_of_a_point() {
    // A single fixed point: every horizontal map is zero, so the window
    // decomposes into singleton staircases.
    let mut e = hfklab_core::bicomplex::EquivariantComplex::new();
    e.set_grading(0, 1, F2Matrix::identity(1), std::collections::BTreeSet::from([0]));
    let t = tate_bicomplex(&e, 4).unwrap();
    let d = decompose(&t).unwrap();
    assert_eq!(d.staircases.len(), 4);
    assert!(d.staircases.iter().all(|s| s.length() == 0));
    assert!(verify_decomposition(&t, &d));
}

#[test]
fn tate_free_orbit_has_rank_one_horizontals() {
    // Two points swapped by the involution.
    let mut e = hfklab_core::bicomplex::EquivariantComplex::new();
    let swap = F2Matrix::from_fn(2, 2, |i, j| i != j);
    e.set_grading(0, 2, swap, std::collections::BTreeSet::new());
    let t = tate_bicomplex(&e, 5).unwrap();
    for col in 1..5 {
        assert_eq!(t.dh((col, 0)).rank(), 1);
    }
    let d = decompose(&t).unwrap();
    assert!(verify_decomposition(&t, &d));
}

#[test]
fn open_staircase_check_on_models_and_random_complexes() {
    let s2 = s2_reflection();
    assert!(check_open_staircases(&s2, s2.default_window()).unwrap());

    let mut e = hfklab_core::bicomplex::EquivariantComplex::new();
    e.set_grading(0, 1, F2Matrix::identity(1), std::collections::BTreeSet::from([0]));
    assert!(check_open_staircases(&e, e.default_window()).unwrap());

    let mut rng = SplitMix64::new(0x27);
    for case in 0..100 {
        let e = random_equivariant(&mut rng, 2, 2, 2);
        if e.chain_complex().grading_range().is_none() {
            continue;
        }
        let ok = check_open_staircases(&e, e.default_window())
            .unwrap_or_else(|err| panic!("case {case}: {err}"));
        assert!(ok, "case {case}");
    }
}

#[test]
fn floyd_witnesses_descend() {
    let s2 = s2_reflection();
    let t = tate_bicomplex(&s2, s2.default_window()).unwrap();
    let d = decompose(&t).unwrap();
    let witnesses = floyd_witnesses(&d);
    assert!(!witnesses.is_empty());
    for (top, bottom) in witnesses {
        assert!(top >= bottom);
    }
}

#[test]
fn forbidden_staircase_shape_detection() {
    // A vertical-then-horizontal staircase: b0 -> a1 <- b1.
    let mut b = Bicomplex::new();
    b.set_dim((0, 1), 1); // b0
    b.set_dim((0, 0), 1); // a1
    b.set_dim((1, 0), 1); // b1
    b.set_dv((0, 1), F2Matrix::identity(1));
    b.set_dh((1, 0), F2Matrix::identity(1));
    let d = decompose(&b).unwrap();
    assert!(verify_decomposition(&b, &d));
    assert!(!no_open_top_closed_bottom(&d));

    let sq = square_at((1, 1));
    assert!(no_open_top_closed_bottom(&decompose(&sq).unwrap()));
    let mut zeros = Bicomplex::new();
    zeros.set_dim((0, 0), 4);
    assert!(no_open_top_closed_bottom(&decompose(&zeros).unwrap()));
}

#[test]
fn json_round_trips() {
    let mut rng = SplitMix64::new(123);
    let (b, _) = random_planted_bicomplex(&mut rng, 3, 3, 4, 6);
    let parsed = Bicomplex::from_json(&b.to_json()).unwrap();
    assert_eq!(parsed.dims(), b.dims());
    for &pos in b.dims().keys() {
        assert_eq!(parsed.dh(pos), b.dh(pos));
        assert_eq!(parsed.dv(pos), b.dv(pos));
    }

    let e = random_equivariant(&mut rng, 3, 2, 2);
    let parsed = hfklab_core::bicomplex::EquivariantComplex::from_json(&e.to_json()).unwrap();
    assert!(parsed.validate().is_ok());
    for i in e.chain_complex().gradings() {
        assert_eq!(parsed.dim(i), e.dim(i));
        assert_eq!(parsed.tau(i), e.tau(i));
        assert_eq!(parsed.fixed_cells(i), e.fixed_cells(i));
        assert_eq!(parsed.chain_complex().boundary(i), e.chain_complex().boundary(i));
    }
}
