mod common;

use common::*;
use cosan::coeff::{find_isomorphism, InjCoeff, SurCoeff};
use cosan::finset::{compose, enumerate, window_functions_of};
use cosan::random::random_inj_coeff;
use cosan::{Error, FinFun, FunKind};
use rand::rngs::StdRng;
use rand::SeedableRng;

const BUILTINS: [&str; 6] = ["powerset", "partition", "constant", "exp:1", "exp:2", "exp:3"];

#[test]
fn action_respects_decomposition() {
    for name in BUILTINS {
        let a = InjCoeff::builtin(name, 4).unwrap();
        for g in window_functions_of(FunKind::Inj, 4) {
            for k in 0..=g.dom() {
                for h in enumerate(FunKind::Inj, k, g.dom()) {
                    let f = compose(&g, &h).unwrap();
                    for x in 0..a.level_size(g.cod()) {
                        let stepwise = a.act_inj(&h, a.act_inj(&g, x).unwrap()).unwrap();
                        assert_eq!(stepwise, a.act_inj(&f, x).unwrap(), "{name}: {h} then {g}");
                    }
                }
            }
        }
    }
}

#[test]
fn permutations_act_on_the_right() {
    for name in BUILTINS {
        let a = InjCoeff::builtin(name, 4).unwrap();
        for n in 0..=4 {
            let perms = enumerate(FunKind::Bij, n, n);
            for s in &perms {
                for t in &perms {
                    let st = compose(s, t).unwrap();
                    for x in 0..a.level_size(n) {
                        let lhs = a.act_inj(&st, x).unwrap();
                        let rhs = a.act_inj(t, a.act_inj(s, x).unwrap()).unwrap();
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }
}

#[test]
fn representable_acts_by_precomposition() {
    let a = InjCoeff::builtin("exp:2", 3).unwrap();
    let id = a.sets()[2].iter().position(|s| s == "2>2:1,2").unwrap();
    let swap = a.sets()[2].iter().position(|s| s == "2>2:2,1").unwrap();
    let hit2 = a.act_inj(&ff("1>2:2"), id).unwrap();
    assert_eq!(a.name(1, hit2), "1>2:2");
    assert_eq!(a.act_inj(&ff("2>2:2,1"), swap).unwrap(), id);
    assert_eq!(a.act_inj(&FinFun::identity(2), swap).unwrap(), swap);
    assert!(matches!(a.act_inj(&ff("2>2:1,1"), id), Err(Error::NotInjective(_))));
    assert!(matches!(a.act_inj(&ff("2>4:1,2"), 0), Err(Error::OutOfWindow { .. })));
}

#[test]
fn powerset_is_exp2_up_to_renaming() {
    let p = InjCoeff::builtin("powerset", 4).unwrap();
    let e = InjCoeff::builtin("exp:2", 4).unwrap();
    assert!(find_isomorphism(&p, &e).is_some());
    assert!(find_isomorphism(&p, &InjCoeff::builtin("exp:3", 4).unwrap()).is_none());
}

#[test]
fn single_entry_mutations_break_functoriality() {
    let a = InjCoeff::builtin("exp:2", 3).unwrap();
    let mut flagged = 0;
    for (f, t) in a.tables() {
        for x in 0..t.dom() {
            for y in 0..t.cod() {
                if y == t.at(x) {
                    continue;
                }
                let mutated = InjCoeff::from_action(3, a.sets().to_vec(), |g, z| {
                    if g == f && z == x {
                        y
                    } else {
                        a.act_inj(g, z).unwrap()
                    }
                })
                .unwrap();
                assert!(mutated.validate().is_err(), "mutation of {f} at {x} went unnoticed");
                flagged += 1;
            }
        }
    }
    assert!(flagged > 0);
}

#[test]
fn pplus_action_is_constant_and_functorial() {
    let p = SurCoeff::builtin("pplus").unwrap();
    assert_eq!(p.validate(5), Ok(()));
    for s in window_functions_of(FunKind::Sur, 5) {
        if s.dom() > 0 {
            assert_eq!(p.act_sur(&s, 0), Ok(0));
        }
    }
    let sizes: Vec<usize> = (0..=4).map(|n| p.level_size(n).unwrap()).collect();
    assert_eq!(sizes, vec![0, 1, 1, 1, 1]);
    let id = SurCoeff::builtin("identity-unit").unwrap();
    let sizes: Vec<usize> = (0..=4).map(|n| id.level_size(n).unwrap()).collect();
    assert_eq!(sizes, vec![0, 1, 0, 0, 0]);
    assert_eq!(id.validate(5), Ok(()));
    assert!(matches!(p.act_sur(&ff("1>2:1"), 0), Err(Error::NotSurjective(_))));
}

#[test]
fn rule_coefficients_are_stable_across_queries() {
    let p = SurCoeff::builtin("pplus-singleton").unwrap();
    assert_eq!(p.materialize(7).unwrap(), p.materialize(7).unwrap());
    let t = p.materialize(4).unwrap();
    assert_eq!(t.validate(4), Ok(()));
    assert!(matches!(t.level_size(5), Err(Error::LevelUnavailable(5))));
}

#[test]
fn random_coefficients_are_functors() {
    let mut rng = StdRng::seed_from_u64(2024);
    for _ in 0..30 {
        let a = random_inj_coeff(&mut rng, 3, 2);
        assert_eq!(a.validate(), Ok(()));
        assert!(find_isomorphism(&a, &a).is_some());
    }
}

/// All level maps `A → B` that pass validation, by exhaustive enumeration.
fn brute_force_nats(a: &InjCoeff, b: &InjCoeff) -> Vec<Vec<Vec<usize>>> {
    let slots: Vec<(usize, usize)> = (0..=a.window())
        .flat_map(|n| (0..a.level_size(n)).map(move |x| (n, x)))
        .collect();
    let mut out = Vec::new();
    let mut current: Vec<Vec<usize>> = a.sizes().iter().map(|&s| vec![0; s]).collect();
    let total: usize = slots.iter().map(|&(n, _)| b.level_size(n)).product();
    for mut code in 0..total {
        for &(n, x) in slots.iter().rev() {
            current[n][x] = code % b.level_size(n);
            code /= b.level_size(n);
        }
        let nat = cosan::InjNat::from_indices(a.clone(), b.clone(), &current).unwrap();
        if nat.validate().is_ok() {
            out.push(current.clone());
        }
    }
    out
}

#[test]
fn transformation_search_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(77);
    for _ in 0..25 {
        let a = random_inj_coeff(&mut rng, 3, 2);
        let b = random_inj_coeff(&mut rng, 3, 2);
        let mut found: Vec<Vec<Vec<usize>>> = cosan::coeff::all_natural_transformations(&a, &b)
            .iter()
            .map(|t| {
                t.levels()
                    .iter()
                    .map(|l| l.as_ref().unwrap().values().iter().map(|v| v - 1).collect())
                    .collect()
            })
            .collect();
        found.sort();
        let mut expected = brute_force_nats(&a, &b);
        expected.sort();
        assert_eq!(found, expected);
    }
    // automorphisms of a representable are its permutations
    let e3 = InjCoeff::builtin("exp:3", 3).unwrap();
    assert_eq!(cosan::coeff::all_natural_transformations(&e3, &e3).len(), 6);
}
