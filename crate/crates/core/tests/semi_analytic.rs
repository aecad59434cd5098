mod common;

use std::collections::BTreeSet;

use common::*;
use cosan::finset::{compose, enumerate, window_functions};
use cosan::san::{
    check_algebra_laws, exponential_algebra, pointwise_algebra, san_evaluate, san_map, SanElem,
};
use cosan::{Algebra, FunKind, SurCoeff};

fn pplus() -> SurCoeff {
    SurCoeff::builtin("pplus").unwrap()
}

#[test]
fn evaluation_sizes_are_binomial_sums() {
    for name in ["pplus", "identity"] {
        let b = SurCoeff::builtin(name).unwrap();
        for k in 0..=6 {
            let expected: u64 = (0..=k)
                .map(|n| b.level_size(n).unwrap() as u64 * binomial(k, n))
                .sum();
            assert_eq!(san_evaluate(&b, k).unwrap().len() as u64, expected);
        }
    }
    assert_eq!(san_evaluate(&pplus(), 5).unwrap().len(), 31);
}

#[test]
fn covariant_functoriality() {
    let b = pplus();
    let fs = window_functions(3);
    for f in &fs {
        for g in fs.iter().filter(|g| g.dom() == f.cod()) {
            let gf = compose(g, f).unwrap();
            for e in san_evaluate(&b, f.dom()).unwrap() {
                let stepwise = san_map(&b, g, &san_map(&b, f, &e).unwrap()).unwrap();
                assert_eq!(san_map(&b, &gf, &e).unwrap(), stepwise);
            }
        }
    }
}

#[test]
fn pplus_acts_by_direct_image() {
    let b = pplus();
    for k in 0..=4 {
        let subsets: BTreeSet<Vec<usize>> = san_evaluate(&b, k)
            .unwrap()
            .into_iter()
            .map(|e| e.mono.values().to_vec())
            .collect();
        assert_eq!(subsets.len(), (1 << k) - 1);
        assert!(!subsets.contains(&vec![]));
    }
    for f in window_functions(3) {
        for e in san_evaluate(&b, f.dom()).unwrap() {
            let image = san_map(&b, &f, &e).unwrap();
            assert_eq!(image.mono.values(), direct_image(&f, e.mono.values()).as_slice());
        }
    }
}

#[test]
fn exponential_structure_is_pointwise() {
    let b = pplus();
    for n in 2..=3 {
        let alg = Algebra::max(&b, n).unwrap();
        for x in 0..=2 {
            let nfun = enumerate(FunKind::All, x, n).len();
            for t in san_evaluate(&b, nfun).unwrap() {
                let exp = exponential_algebra(&b, &alg, x, &t).unwrap();
                let point = pointwise_algebra(&b, &alg, x, &t).unwrap();
                assert_eq!(exp, point);
                // independent oracle: pointwise maximum over the chosen functions
                let fns = enumerate(FunKind::All, x, n);
                for i in 1..=x {
                    let max = t.mono.values().iter().map(|&j| fns[j - 1].apply(i)).max().unwrap();
                    assert_eq!(exp.apply(i), max);
                }
            }
        }
    }
}

#[test]
fn max_is_an_algebra() {
    let b = pplus();
    for n in 1..=3 {
        assert!(check_algebra_laws(&b, &Algebra::max(&b, n).unwrap()).passed());
    }
}

#[test]
fn singleton_is_fixed_by_the_exponential_structure() {
    let b = pplus();
    let alg = Algebra::max(&b, 2).unwrap();
    let fns = enumerate(FunKind::All, 2, 2);
    for (j, g) in fns.iter().enumerate() {
        let t = SanElem {
            level: 1,
            coeff: 0,
            mono: cosan::FinFun::new(fns.len(), vec![j + 1]).unwrap(),
        };
        assert_eq!(&exponential_algebra(&b, &alg, 2, &t).unwrap(), g);
    }
}
