mod common;

use common::*;
use cosan::finset::{
    canonical_epi_form, compose, enumerate, epi_mono_factorize, is_pullback_square, pullback,
    pushout, PullbackVerdict, Square,
};
use cosan::{FinFun, FunKind};
use proptest::prelude::*;

fn funs(m: usize, n: usize) -> Vec<FinFun> {
    enumerate(FunKind::All, m, n)
}

#[test]
fn composition_is_associative_and_unital() {
    const MAX: usize = 4;
    let table: Vec<Vec<Vec<FinFun>>> = (0..=MAX)
        .map(|m| (0..=MAX).map(|n| funs(m, n)).collect())
        .collect();
    for m in 0..=MAX {
        for n in 0..=MAX {
            for f in &table[m][n] {
                assert_eq!(&compose(&FinFun::identity(n), f).unwrap(), f);
                assert_eq!(&compose(f, &FinFun::identity(m)).unwrap(), f);
            }
        }
    }
    for m in 0..=MAX {
        for n in 0..=MAX {
            for p in 0..=MAX {
                for q in 0..=MAX {
                    for f in &table[m][n] {
                        for g in &table[n][p] {
                            let gf = compose(g, f).unwrap();
                            for h in &table[p][q] {
                                let left = compose(h, &gf).unwrap();
                                let right = compose(&compose(h, g).unwrap(), f).unwrap();
                                assert_eq!(left, right);
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn compose_rejects_mismatched_maps() {
    assert!(compose(&ff("2>1:1,1"), &ff("1>3:2")).is_err());
}

#[test]
fn factorization_splits_every_function() {
    for m in 0..=4 {
        for n in 0..=4 {
            for f in funs(m, n) {
                let (e, mono) = epi_mono_factorize(&f);
                assert!(e.is_surjective() && mono.is_injective(), "{f}");
                assert!(mono.values().windows(2).all(|w| w[0] < w[1]));
                assert_eq!(compose(&mono, &e).unwrap(), f);
                assert_eq!(e.cod(), direct_image(&f, &(1..=m).collect::<Vec<_>>()).len());
            }
        }
    }
}

#[test]
fn canonical_epi_is_constant_on_orbits() {
    for k in 0..=4 {
        for n in 0..=4 {
            let perms = enumerate(FunKind::Bij, n, n);
            for x in enumerate(FunKind::Sur, k, n) {
                let (sigma, c) = canonical_epi_form(&x).unwrap();
                assert_eq!(compose(&sigma, &c).unwrap(), x);
                for p in &perms {
                    let (_, c2) = canonical_epi_form(&compose(p, &x).unwrap()).unwrap();
                    assert_eq!(c2, c);
                }
            }
        }
    }
}

#[test]
fn permutations_act_freely_on_epis() {
    for k in 0..=4 {
        for n in 0..=4 {
            let perms = enumerate(FunKind::Bij, n, n);
            for x in enumerate(FunKind::Sur, k, n) {
                for p in &perms {
                    if compose(p, &x).unwrap() == x {
                        assert!(p.is_identity(), "{p} fixes {x}");
                    }
                }
            }
        }
    }
}

#[test]
fn non_epis_have_no_canonical_form() {
    assert!(canonical_epi_form(&ff("2>3:1,3")).is_err());
}

#[test]
fn enumeration_counts_match_closed_forms() {
    for m in 0..=5 {
        for n in 0..=5 {
            let all = enumerate(FunKind::All, m, n);
            assert_eq!(all.len() as u64, (n as u64).pow(m as u32));
            let falling = if m <= n { factorial(n) / factorial(n - m) } else { 0 };
            assert_eq!(enumerate(FunKind::Inj, m, n).len() as u64, falling);
            assert_eq!(
                enumerate(FunKind::Sur, m, n).len() as u64,
                factorial(n) * stirling2(m, n)
            );
            let bij = if m == n { factorial(n) } else { 0 };
            assert_eq!(enumerate(FunKind::Bij, m, n).len() as u64, bij);
            // lexicographic order on value sequences
            let seqs: Vec<Vec<usize>> = all.iter().map(|f| f.values().to_vec()).collect();
            assert_eq!(seqs, all_sequences(m, n));
        }
    }
}

#[test]
fn enumerated_kinds_agree_with_brute_force_filters() {
    for m in 0..=4 {
        for n in 0..=4 {
            let seqs = all_sequences(m, n);
            let sur: Vec<Vec<usize>> = seqs.iter().filter(|v| is_onto(v, n)).cloned().collect();
            let inj: Vec<Vec<usize>> = seqs.iter().filter(|v| is_one_to_one(v)).cloned().collect();
            let got = |k| -> Vec<Vec<usize>> {
                enumerate(k, m, n).iter().map(|f| f.values().to_vec()).collect()
            };
            assert_eq!(got(FunKind::Sur), sur);
            assert_eq!(got(FunKind::Inj), inj);
        }
    }
}

/// Checks the pushout against its defining property: every cocone
/// `(u, v)` into `(t]` factors through it exactly once.
fn assert_universal(f: &FinFun, g: &FinFun) {
    let po = pushout(f, g).unwrap();
    assert_eq!(compose(&po.in_x, f).unwrap(), compose(&po.in_y, g).unwrap());
    for t in 0..=3 {
        for u in funs(f.cod(), t) {
            for v in funs(g.cod(), t) {
                if compose(&u, f).unwrap() != compose(&v, g).unwrap() {
                    continue;
                }
                let factors: Vec<FinFun> = funs(po.size, t)
                    .into_iter()
                    .filter(|h| compose(h, &po.in_x).unwrap() == u && compose(h, &po.in_y).unwrap() == v)
                    .collect();
                assert_eq!(factors.len(), 1, "pushout of {f} and {g} against {u}, {v}");
            }
        }
    }
}

#[test]
fn pushouts_are_universal() {
    for z in 0..=3 {
        for x in 0..=3 {
            for y in 0..=2 {
                for f in funs(z, x) {
                    for g in funs(z, y) {
                        assert_universal(&f, &g);
                    }
                }
            }
        }
    }
}

#[test]
fn pushout_of_epi_has_epi_leg() {
    for z in 0..=4 {
        for x in 0..=z {
            for y in 0..=4 {
                for f in enumerate(FunKind::Sur, z, x) {
                    for g in funs(z, y) {
                        let po = pushout(&f, &g).unwrap();
                        assert!(po.in_y.is_surjective(), "{f}, {g}");
                        assert!(po.size <= y);
                    }
                }
            }
        }
    }
}

#[test]
fn pullbacks_match_brute_force_pairs() {
    for a in 0..=3 {
        for b in 0..=3 {
            for z in 0..=3 {
                for f in funs(a, z) {
                    for g in funs(b, z) {
                        let pb = pullback(&f, &g).unwrap();
                        let mut expected = Vec::new();
                        for i in 1..=a {
                            for j in 1..=b {
                                if f.apply(i) == g.apply(j) {
                                    expected.push((i, j));
                                }
                            }
                        }
                        assert_eq!(pb.pairs, expected);
                        let sq = Square::new(
                            pb.proj_left.clone(),
                            pb.proj_right.clone(),
                            f.clone(),
                            g.clone(),
                        )
                        .unwrap();
                        assert_eq!(is_pullback_square(&sq).unwrap(), PullbackVerdict::Pullback);
                    }
                }
            }
        }
    }
}

fn finfun(max: usize) -> impl Strategy<Value = FinFun> {
    (0..=max, 1..=max).prop_flat_map(|(m, n)| {
        proptest::collection::vec(1..=n, m).prop_map(move |v| FinFun::new(n, v).unwrap())
    })
}

fn composable_triple() -> impl Strategy<Value = (FinFun, FinFun, FinFun)> {
    (0..=6usize, 1..=6usize, 1..=6usize, 1..=6usize).prop_flat_map(|(m, n, p, q)| {
        (
            proptest::collection::vec(1..=n, m).prop_map(move |v| FinFun::new(n, v).unwrap()),
            proptest::collection::vec(1..=p, n).prop_map(move |v| FinFun::new(p, v).unwrap()),
            proptest::collection::vec(1..=q, p).prop_map(move |v| FinFun::new(q, v).unwrap()),
        )
    })
}

proptest! {
    #[test]
    fn prop_literal_round_trip(f in finfun(7)) {
        let text = f.to_string();
        prop_assert_eq!(text.parse::<FinFun>().unwrap(), f);
    }

    #[test]
    fn prop_composition_associates((f, g, h) in composable_triple()) {
        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn prop_factorization(f in finfun(7)) {
        let (e, m) = epi_mono_factorize(&f);
        prop_assert!(e.is_surjective());
        prop_assert!(m.is_injective());
        prop_assert_eq!(compose(&m, &e).unwrap(), f);
    }

    #[test]
    fn prop_classification_by_fibers(f in finfun(7)) {
        let c = f.classify();
        prop_assert_eq!(c.injective, is_one_to_one(f.values()));
        prop_assert_eq!(c.surjective, is_onto(f.values(), f.cod()));
        prop_assert_eq!(c.bijective, c.injective && c.surjective);
    }

    #[test]
    fn prop_pushout_square_commutes((f, g) in (0..=6usize, 1..=6usize, 1..=6usize).prop_flat_map(|(z, x, y)| (
        proptest::collection::vec(1..=x, z).prop_map(move |v| FinFun::new(x, v).unwrap()),
        proptest::collection::vec(1..=y, z).prop_map(move |v| FinFun::new(y, v).unwrap()),
    ))) {
        let po = pushout(&f, &g).unwrap();
        prop_assert_eq!(compose(&po.in_x, &f).unwrap(), compose(&po.in_y, &g).unwrap());
        // the legs are jointly surjective
        let mut hit = vec![false; po.size + 1];
        for &v in po.in_x.values().iter().chain(po.in_y.values()) {
            hit[v] = true;
        }
        prop_assert!(hit[1..].iter().all(|&h| h));
    }
}
