//! Negative controls: small tabulated objects that some check must reject.

use crate::coeff::InjCoeff;
use crate::cosan::tabulate_cosan;
use crate::error::Result;
use crate::finset::FinFun;
use crate::tab::{TabFunctor, TabNat};

fn powerset(window: usize) -> Result<TabFunctor> {
    Ok(tabulate_cosan(&InjCoeff::builtin("powerset", window)?, window)?.into_functor())
}

/// `𝒫` with one extra element `phantom` at level 2. Permutations fix it and
/// every other map out of level 2 treats it like the swap-invariant subset
/// `∅`. The result is not a functor, and no cocone at `(2]` separates the
/// phantom from `∅`.
pub fn phantom_powerset(window: usize) -> Result<TabFunctor> {
    let p = powerset(window.max(2))?;
    let swap = FinFun::from_indices(2, &[1, 0])?;
    let q = (0..p.size(2))
        .find(|&x| p.apply(&swap, x) == x)
        .expect("the empty subset is fixed by the swap");
    let extra = p.size(2);
    let mutant = p.with_extra_element(2, "phantom", |f| {
        if f.dom() == 2 && f.is_injective() {
            extra
        } else {
            p.apply(f, q)
        }
    })?;
    Ok(mutant)
}

/// The neighbourhood functor `X ↦ 𝒫(𝒫(X))`, `F(f)(S) = {U : f(U) ∈ S}`:
/// contravariant powerset after covariant powerset. It is a functor but does
/// not send pushouts along epis to pullbacks. Element `s` of level `k` is the
/// family whose bitmask over subsets of `(k]` is `s`.
pub fn neighbourhood_functor(window: usize) -> Result<TabFunctor> {
    let subsets = |k: usize| 1usize << k;
    let sets = (0..=window)
        .map(|k| {
            (0..1usize << subsets(k))
                .map(|s| {
                    let members: Vec<String> = (0..subsets(k))
                        .filter(|u| s & 1 << u != 0)
                        .map(|u| {
                            let items: Vec<String> = (1..=k)
                                .filter(|i| u & 1 << (i - 1) != 0)
                                .map(|i| i.to_string())
                                .collect();
                            format!("{{{}}}", items.join(","))
                        })
                        .collect();
                    format!("{{{}}}", members.join(","))
                })
                .collect()
        })
        .collect();
    TabFunctor::from_fn(window, sets, |f| {
        let m = f.dom();
        // direct image of every subset of the domain, as a bit position
        let image: Vec<usize> = (0..subsets(m))
            .map(|u| {
                (1..=m)
                    .filter(|i| u & 1 << (i - 1) != 0)
                    .fold(0, |acc, i| acc | 1 << (f.apply(i) - 1))
            })
            .collect();
        Ok((0..1usize << subsets(f.cod()))
            .map(|s| {
                (0..subsets(m))
                    .filter(|&u| s & 1 << image[u] != 0)
                    .fold(0, |acc, u| acc | 1 << u)
            })
            .collect())
    })
}

/// The transformation `𝒫 → 1` collapsing every subset to the point, where
/// `1` is the tabulation of the `constant` coefficients.
pub fn collapse(window: usize) -> Result<TabNat> {
    let source = powerset(window)?;
    let target = tabulate_cosan(&InjCoeff::builtin("constant", window)?, window)?.into_functor();
    let maps: Vec<Vec<usize>> = source.sizes().iter().map(|&s| vec![0; s]).collect();
    TabNat::from_indices(source, target, &maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{check_pullback_preservation, validate_tab_functor, validate_tab_nat};

    #[test]
    fn neighbourhood_is_a_functor_failing_pullbacks() {
        let f = neighbourhood_functor(3).unwrap();
        assert_eq!(f.sizes(), vec![2, 4, 16, 256]);
        assert!(validate_tab_functor(&f).passed());
        let r = check_pullback_preservation(&f);
        assert!(!r.passed());
        assert_eq!(r.witness.unwrap()["f"], "2>1:1,1");
    }

    #[test]
    fn phantom_is_not_a_functor() {
        let f = phantom_powerset(3).unwrap();
        assert_eq!(f.sizes(), vec![1, 2, 5, 8]);
        assert!(!validate_tab_functor(&f).passed());
    }

    #[test]
    fn collapse_is_natural() {
        assert!(validate_tab_nat(&collapse(3).unwrap()).passed());
    }
}
