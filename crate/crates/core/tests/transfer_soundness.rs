//! Transfer rules against direct profiles, on every decomposition and on
//! arbitrary inflations.

use permgf::perm::Permutation;
use permgf::property::{Property, PropertyUniverse};
use proptest::prelude::*;

fn universe(specs: &[&str], inverse_closed: bool) -> PropertyUniverse {
    let props: Vec<Property> = specs.iter().map(|s| s.parse().unwrap()).collect();
    PropertyUniverse::close(&props, inverse_closed).unwrap()
}

fn families() -> Vec<PropertyUniverse> {
    vec![
        universe(&["avoid:132"], false),
        universe(&["avoid:2413", "avoid:3142", "avoid:2143"], false),
        universe(&["alternating"], false),
        universe(&["alternating"], true),
        universe(&["even"], false),
        universe(&["dumont1"], false),
        universe(&["dumont1"], true),
        universe(&["avoid_vincular:1-32"], false),
        universe(&["avoid_vincular:1-32"], true),
        universe(&["avoid_vincular:^2-1", "avoid_vincular:12$"], false),
        universe(&["avoid_vincular:3-12", "avoid:2413"], true),
    ]
}

#[test]
fn decompositions_up_to_length_seven() {
    for u in families() {
        for n in 2..=7 {
            for pi in Permutation::all_of_length(n) {
                let d = pi.decompose();
                let kids: Vec<_> = d.children.iter().map(|c| u.profile(c)).collect();
                let got = u.transfer(&d.skeleton, &kids).unwrap();
                assert_eq!(u.describe(got), u.describe(u.profile(&pi)), "{pi} = {d} in {:?}", u.properties());
            }
        }
    }
}

fn perm(max: usize) -> impl Strategy<Value = Permutation> {
    (1..=max).prop_flat_map(|n| {
        Just((1..=n as u8).collect::<Vec<u8>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
    })
}

fn skeleton() -> impl Strategy<Value = Permutation> {
    prop::sample::select(vec!["12", "21", "321", "2413", "3142", "25314", "246135", "132"])
        .prop_map(|s| s.parse::<Permutation>().unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    // any inflation, decomposition-shaped or not
    #[test]
    fn arbitrary_inflations(sigma in skeleton(), kids in prop::collection::vec(perm(4), 6)) {
        let children: Vec<Permutation> = kids[..sigma.len()].to_vec();
        let pi = sigma.inflate(&children).unwrap();
        for u in families() {
            let profiles: Vec<_> = children.iter().map(|c| u.profile(c)).collect();
            let got = u.transfer(&sigma, &profiles).unwrap();
            prop_assert_eq!(u.describe(got), u.describe(u.profile(&pi)), "{}", pi);
        }
    }
}
