use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use z2kit::gen::random_presentation;
use z2kit::resolve::{certificate, free_cover, swap_action, verify_certificate};
use z2kit::exactla::lattice_contains;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_certificates_verify(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_presentation(&mut rng, 4, 6);
        let cover = free_cover(&p).unwrap();
        // equivariance of the cover modulo relations
        let twisted = &(&cover.tau * &swap_action(cover.rank)) - &(&p.gamma * &cover.tau);
        prop_assert!(lattice_contains(&p.relations, &twisted));

        let cert = certificate(&p, seed).unwrap();
        let rep = verify_certificate(&p, &cert);
        prop_assert!(rep.all_passed(), "{}", rep);
        // same input, same seed, same bytes
        let again = certificate(&p, seed).unwrap();
        prop_assert_eq!(serde_json::to_string(&cert).unwrap(), serde_json::to_string(&again).unwrap());
    }
}
