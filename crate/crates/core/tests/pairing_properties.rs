use proptest::prelude::*;

use sovcat_core::pairing::{self, PairingOptions};
use sovcat_core::{zoo, Error, ObjectWord, RepCategory, SimpleLabel, Tolerance};

fn cat(name: &str) -> RepCategory {
    RepCategory::new(zoo::group(name).unwrap(), Tolerance::default())
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn sigma_is_an_involution_inside_pi_cycles(pi in (1usize..10).prop_flat_map(permutation)) {
        let sigma = pairing::sigma_from_pi(&pi, |_| true).unwrap();
        let cycles = pairing::cycles(&pi);
        for i in 0..pi.len() {
            prop_assert_eq!(sigma[sigma[i]], i);
            let cycle = cycles.iter().find(|c| c.contains(&i)).unwrap();
            prop_assert!(cycle.contains(&sigma[i]));
            prop_assert_eq!(sigma[i] == i, cycle.len() % 2 == 1);
        }
    }

    #[test]
    fn involutive_pi_is_kept(pairs in prop::collection::vec(any::<bool>(), 1..6)) {
        // positions 2k, 2k+1 swapped when pairs[k]
        let mut pi = Vec::new();
        for (k, &swap) in pairs.iter().enumerate() {
            if swap {
                pi.extend([2 * k + 1, 2 * k]);
            } else {
                pi.extend([2 * k, 2 * k + 1]);
            }
        }
        prop_assert_eq!(pairing::sigma_from_pi(&pi, |_| true).unwrap(), pi);
    }

    #[test]
    fn realizing_words_reach_the_target(sigma_seed in (1usize..6).prop_flat_map(permutation)) {
        let required = pairing::required_order(&sigma_seed);
        for w in pairing::reduced_words(&required, 50) {
            prop_assert_eq!(pairing::apply_braid_word(required.len(), &w).unwrap(), required.clone());
        }
        let bubble = pairing::bubble_sort_word(&required);
        prop_assert_eq!(pairing::apply_braid_word(required.len(), &bubble).unwrap(), required);
    }
}

#[test]
fn partner_property_holds_for_every_family() {
    // build_iso_family checks the partner property and reports any failure
    for g in zoo::GROUP_NAMES {
        let c = cat(g);
        let simples = c.simples();
        let letters: Vec<SimpleLabel> = simples.iter().flat_map(|x| [x.clone(), x.dual()]).collect();
        for a in &letters {
            for b in &letters {
                let tuple = vec![a.clone(), b.clone()];
                let Some(pi) = pairing::find_pi(&c, &tuple).unwrap() else {
                    continue;
                };
                let sp = pairing::build_sigma(&c, &tuple, &pi).unwrap();
                let fam = pairing::build_iso_family(&c, &tuple, &sp.sigma).unwrap();
                assert_eq!(fam.f.len(), 2);
                if pi == vec![0, 1] && c.isomorphic(b, &a.dual()).unwrap() {
                    // a self-dual pair can also be treated as a 2-orbit
                    let fam = pairing::build_iso_family(&c, &tuple, &[1, 0]).unwrap();
                    assert_eq!(fam.p, vec![1, 1], "{g}: {}", ObjectWord(tuple.clone()));
                }
            }
        }
    }
}

#[test]
fn dual_letters_in_tuples() {
    let c3 = cat("C3");
    let tuple: ObjectWord = "omega,omega^,omegabar^,omegabar".parse().unwrap();
    let r = pairing::pairing_matrix(&c3, tuple.factors(), &PairingOptions::default()).unwrap();
    assert!(r.theorem_holds(c3.tol()));
    assert_eq!(r.dim_h, 1);
}

#[test]
fn supplied_pi_is_validated() {
    let q8 = cat("Q8");
    let tuple: ObjectWord = "V,ri,V".parse().unwrap();
    let opts = PairingOptions {
        pi: Some(vec![2, 1, 0]),
        braid_word: None,
    };
    let r = pairing::pairing_matrix(&q8, tuple.factors(), &opts).unwrap();
    assert_eq!(r.sigma, vec![2, 1, 0]);
    assert_eq!(r.p, vec![1, 1, 1]);
    let bad = PairingOptions {
        pi: Some(vec![1, 0, 2]),
        braid_word: None,
    };
    assert!(matches!(
        pairing::pairing_matrix(&q8, tuple.factors(), &bad),
        Err(Error::HypothesisViolation(_))
    ));
}
