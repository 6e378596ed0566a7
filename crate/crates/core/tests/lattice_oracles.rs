mod support;

use k3n_core::existence::{unique_in_genus, Genus, Tri};
use num_traits::Signed;
use support::{coset_profile, form_profile, lattice, random_sums, small_lattices, CATALOGUE};

#[test]
fn milgram_matches_signature_on_catalogue_and_sums() {
    let mut all: Vec<(String, _)> = CATALOGUE.iter().map(|e| (e.to_string(), lattice(e))).collect();
    all.extend(random_sums(0x9e3779b97f4a7c15, 60));
    for (expr, l) in all {
        let sig = l.signature().unwrap();
        let f = l.discriminant_form().unwrap().form;
        assert_eq!(f.milgram_signature().unwrap(), sig.index().rem_euclid(8), "{expr}");
    }
}

#[test]
fn discriminant_forms_match_coset_enumeration() {
    let lattices = small_lattices(0xd1b54a32d192ed03);
    assert!(lattices.len() > 300);
    for l in lattices {
        let df = l.discriminant_form().unwrap();
        let order: i64 = df.form.orders().iter().product();
        assert_eq!(num_bigint::BigInt::from(order), l.determinant().abs(), "{l}");
        assert_eq!(form_profile(&df.form), coset_profile(&l), "{l}");
    }
}

#[test]
fn genus_identities() {
    for (a, b) in [("U + E6 + A2", "U(3) + E8"), ("U + 3*A2", "U(3) + E6"), ("U(3) + 3*A2", "U + E6dual3")] {
        let ga = Genus::of_lattice(&lattice(a)).unwrap();
        let gb = Genus::of_lattice(&lattice(b)).unwrap();
        assert!(ga.matches(&gb).unwrap(), "{a} vs {b}");
        assert_eq!(unique_in_genus(&ga), Tri::Yes);
        assert_eq!(unique_in_genus(&gb), Tri::Yes);
    }
    let ga = Genus::of_lattice(&lattice("U + E6")).unwrap();
    let gb = Genus::of_lattice(&lattice("U(3) + A2 + A2")).unwrap();
    assert!(!ga.matches(&gb).unwrap());
}
