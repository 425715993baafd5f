mod props;

#[test]
fn reflection_is_an_involutive_isometry() {
    props::reflection_is_an_involutive_isometry(256).unwrap();
}

#[test]
fn fold_is_idempotent() {
    props::fold_is_idempotent(256).unwrap();
}

#[test]
fn gradient_matches_finite_differences() {
    props::gradient_matches_finite_differences(48).unwrap();
}

#[test]
fn pair_field_is_swap_symmetric() {
    props::pair_field_is_swap_symmetric(64).unwrap();
}

#[test]
fn disjoint_union_spectrum_merges() {
    props::disjoint_union_spectrum_merges(8).unwrap();
}

#[test]
fn ball_modes_are_monotone() {
    props::ball_modes_are_monotone(24).unwrap();
}
