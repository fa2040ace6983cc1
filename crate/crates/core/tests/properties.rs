mod suites;

#[test]
fn matrix_tree_matches_enumeration() {
    suites::matrix_tree_matches_enumeration();
}

#[test]
fn hashimoto_identity() {
    suites::hashimoto_identity();
}

#[test]
fn connectedness_criterion_matches_component_search() {
    suites::connectedness_criterion_matches_component_search();
}

#[test]
fn artin_and_class_number_identities() {
    suites::artin_and_class_number_identities();
}

#[test]
fn factorization_through_cap_32() {
    suites::factorization_through_cap_32();
}

#[test]
fn mu_lambda_additive_under_products() {
    suites::mu_lambda_additive_under_products();
}

#[test]
fn rho_is_a_homomorphism() {
    suites::rho_is_a_homomorphism();
}

#[test]
fn lambda_is_odd_for_odd_primes() {
    suites::lambda_is_odd_for_odd_primes();
}

#[test]
fn characteristic_series_vanishes_at_zero() {
    suites::characteristic_series_vanishes_at_zero();
}

#[test]
fn kida_formula_on_random_towers() {
    suites::kida_formula_on_random_towers();
}

#[test]
fn group_axioms() {
    suites::group_axioms();
}

#[test]
fn modular_reduction_is_a_ring_map() {
    suites::modular_reduction_is_a_ring_map();
}
