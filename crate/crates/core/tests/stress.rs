//! Higher-rank spot checks beyond the acceptance grid: build, certify,
//! recognize and normalize at m+n up to 6.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rootsuper::oracle::{forms_for, random_params};
use rootsuper::weyl::{apply_word_all, check_preserves_r};
use rootsuper::{bases, canon, CanonicalForm, Family, SystemDescriptor, Vector};
use std::collections::BTreeSet;

#[test]
fn rank_six_round_trips() {
    let mut rng = StdRng::seed_from_u64(606);
    let systems = [
        SystemDescriptor::new(Family::AOddOdd2, 3, 3).unwrap(),
        SystemDescriptor::new(Family::AEvenOdd2, 2, 4).unwrap(),
        SystemDescriptor::new(Family::AEvenEven4, 3, 3).unwrap(),
        SystemDescriptor::new(Family::D2, 4, 2).unwrap(),
    ];
    for sys in systems {
        for form in forms_for(&sys) {
            for _ in 0..6 {
                let p = random_params(&sys, form, &mut rng, 2);
                let base = canon::build_base(&sys, &p).unwrap();
                let verdict = bases::is_base(&base, 5);
                assert!(verdict.is_certified(), "{p:?} in {sys}: {verdict:?}");
                assert_eq!(canon::match_canonical(&base).unwrap(), p.canonicalized());
            }
        }
    }
}

#[test]
fn rank_six_normalization_and_conjugacy() {
    let mut rng = StdRng::seed_from_u64(607);
    let sys = SystemDescriptor::new(Family::AOddOdd2, 3, 3).unwrap();
    for form in [CanonicalForm::B2, CanonicalForm::B3, CanonicalForm::B4] {
        for _ in 0..4 {
            let mut pa = random_params(&sys, form, &mut rng, 2);
            let mut pb = random_params(&sys, form, &mut rng, 2);
            pa.global_sign = rootsuper::Sign::Plus;
            pb.global_sign = rootsuper::Sign::Plus;
            let a = canon::build_base(&sys, &pa).unwrap();
            let b = canon::build_base(&sys, &pb).unwrap();
            let (wa_f, a_f) = canon::make_fine(&a).unwrap();
            let (wa_a, a_n) = canon::make_admissible(&a_f).unwrap();
            let (wb_f, b_f) = canon::make_fine(&b).unwrap();
            let (wb_a, b_n) = canon::make_admissible(&b_f).unwrap();
            let pa_n = canon::match_canonical(&a_n).unwrap();
            assert!(pa_n.is_fine() && pa_n.admissible_level() == sys.rank());
            assert!(check_preserves_r(&wa_a.compose(&wa_f), &sys, 4));
            let bridge = canon::conjugacy_word(&a_n, &b_n).unwrap();
            let word = wa_a
                .compose(&wa_f)
                .inverse()
                .compose(&bridge)
                .compose(&wb_a.compose(&wb_f));
            let image: BTreeSet<Vector> =
                apply_word_all(&word, &b.elements).unwrap().into_iter().collect();
            assert_eq!(image, a.element_set());
        }
    }
}
