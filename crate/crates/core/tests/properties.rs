use proptest::prelude::*;

use bsc4_core::analytic::{codeword_distances, lambda_analytic, spectrum_analytic, WeightTuple};
use bsc4_core::code::{row_permutations, CodeProfile, Row, NUM_TYPES};
use bsc4_core::oracle::{lambda_bruteforce, spectrum_bruteforce};
use bsc4_core::prob::RationalProb;

fn profile(max_n: u64) -> impl Strategy<Value = CodeProfile> {
    proptest::collection::vec(0u8..NUM_TYPES as u8, 1..=max_n as usize).prop_map(|cols| {
        let mut c = [0u64; NUM_TYPES];
        for t in cols {
            c[t as usize] += 1;
        }
        CodeProfile::new(c).unwrap()
    })
}

fn probability() -> impl Strategy<Value = RationalProb> {
    (1u64..50, 0u64..50).prop_map(|(p, extra)| RationalProb::new(p, 2 * p + 1 + extra).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonicalize_is_idempotent(p in profile(20)) {
        let c = p.canonicalize();
        prop_assert_eq!(c.canonicalize(), c);
        prop_assert_eq!(c.n(), p.n());
    }

    #[test]
    fn materialize_round_trips(p in profile(20)) {
        prop_assert_eq!(p.materialize().profile().unwrap(), p);
    }

    #[test]
    fn canonical_spectrum_matches(p in profile(10)) {
        prop_assert_eq!(
            spectrum_bruteforce(&p.materialize()).unwrap(),
            spectrum_bruteforce(&p.canonicalize().materialize()).unwrap()
        );
    }

    #[test]
    fn analytic_matches_oracle(p in profile(12), e in probability()) {
        let book = p.materialize();
        prop_assert_eq!(spectrum_analytic(&p), spectrum_bruteforce(&book).unwrap());
        prop_assert_eq!(lambda_analytic(&p, &e), lambda_bruteforce(&book, &e).unwrap());
    }

    #[test]
    fn row_permutations_keep_spectrum(p in profile(14), k in 0usize..24) {
        let perm = row_permutations()[k];
        prop_assert_eq!(spectrum_analytic(&p.permute_rows(perm)), spectrum_analytic(&p));
        prop_assert_eq!(p.orbit_representative(), p.permute_rows(perm).orbit_representative());
    }

    #[test]
    fn zero_tuple_gives_row_weights(p in profile(40)) {
        let d = codeword_distances(&p, &WeightTuple::default()).unwrap();
        for (j, r) in Row::ALL.iter().enumerate() {
            prop_assert_eq!(d[j], p.row_weight(*r));
        }
    }

    #[test]
    fn spectrum_sums_to_power_of_two(p in profile(45)) {
        let s = spectrum_analytic(&p);
        prop_assert_eq!(s.total(), num_bigint::BigUint::from(1u8) << p.n() as usize);
    }

    #[test]
    fn lambda_decreases_with_noise(p in profile(12)) {
        let a = lambda_analytic(&p, &RationalProb::new(1u32, 10u32).unwrap());
        let b = lambda_analytic(&p, &RationalProb::new(1u32, 4u32).unwrap());
        prop_assert!(a >= b);
    }

    #[test]
    fn profile_text_round_trips(p in profile(40)) {
        prop_assert_eq!(p.to_string().parse::<CodeProfile>().unwrap(), p);
        let json = serde_json::to_string(&p).unwrap();
        prop_assert_eq!(serde_json::from_str::<CodeProfile>(&json).unwrap(), p);
    }
}
