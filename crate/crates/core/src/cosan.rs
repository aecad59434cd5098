//! Evaluation of `Ǎ(X) = Σ_n A_n ⊗_n Epi(X, (n])` and its contravariant
//! action.
//!
//! An element is an orbit `[a, x]` of pairs under `⟨a, σ∘x⟩ ∼ ⟨a·σ, x⟩`. It is
//! always stored through its unique representative whose epi introduces
//! labels in first-occurrence order, so equality is structural.

use std::collections::HashMap;

use crate::coeff::{InjCoeff, InjNat};
use crate::error::{Error, Result};
use crate::finset::{canonical_epi_form, canonical_epis, epi_mono_factorize, FinFun};
use crate::tab::{TabFunctor, TabNat};

/// A canonical orbit representative `[a, x]` with `a ∈ A_level` (0-based)
/// and `x: X → (level]` a canonical surjection. Ordering is by level, then
/// coefficient, then epi values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CosanElem {
    pub level: usize,
    pub coeff: usize,
    pub epi: FinFun,
}

impl CosanElem {
    /// Display name `[a|v1,…,vk]`.
    pub fn display(&self, a: &InjCoeff) -> String {
        let vals: Vec<String> = self.epi.values().iter().map(usize::to_string).collect();
        format!("[{}|{}]", a.name(self.level, self.coeff), vals.join(","))
    }
}

fn check_level(a: &InjCoeff, n: usize, coeff: usize) -> Result<()> {
    if n > a.window() {
        return Err(Error::OutOfWindow {
            size: n,
            window: a.window(),
        });
    }
    if coeff >= a.level_size(n) {
        return Err(Error::IndexOutOfRange {
            index: coeff + 1,
            bound: a.level_size(n),
        });
    }
    Ok(())
}

/// The representative of the orbit of `(a, x)` for an epi `x: X → (n]`.
pub fn canonicalize_pair(a: &InjCoeff, n: usize, coeff: usize, x: &FinFun) -> Result<CosanElem> {
    if x.cod() != n {
        return Err(Error::LevelMismatch {
            expected: n,
            found: x.cod(),
        });
    }
    check_level(a, n, coeff)?;
    let (sigma, c) = canonical_epi_form(x)?;
    let coeff = if sigma.is_identity() {
        coeff
    } else {
        a.act_inj(&sigma, coeff)?
    };
    Ok(CosanElem {
        level: n,
        coeff,
        epi: c,
    })
}

/// Normal form of a general coend pair `[a, f]` with `f: X → (n]` arbitrary:
/// factor `f = m ∘ q` and return the orbit of `(a·m, q)`.
pub fn normalize_general_pair(
    a: &InjCoeff,
    n: usize,
    coeff: usize,
    f: &FinFun,
) -> Result<CosanElem> {
    if f.cod() != n {
        return Err(Error::LevelMismatch {
            expected: n,
            found: f.cod(),
        });
    }
    check_level(a, n, coeff)?;
    let (q, m) = epi_mono_factorize(f);
    let coeff = if m.is_identity() {
        coeff
    } else {
        a.act_inj(&m, coeff)?
    };
    canonicalize_pair(a, q.cod(), coeff, &q)
}

/// All elements of `Ǎ((k])` in canonical order.
pub fn evaluate(a: &InjCoeff, k: usize) -> Result<Vec<CosanElem>> {
    if k > a.window() {
        return Err(Error::OutOfWindow {
            size: k,
            window: a.window(),
        });
    }
    let mut out = Vec::new();
    for n in 0..=k {
        let epis = canonical_epis(k, n);
        for coeff in 0..a.level_size(n) {
            out.extend(epis.iter().map(|c| CosanElem {
                level: n,
                coeff,
                epi: c.clone(),
            }));
        }
    }
    Ok(out)
}

/// `Ǎ(f)(e)` for `f: Y → X` and `e` over `X`.
pub fn cosan_map(a: &InjCoeff, f: &FinFun, e: &CosanElem) -> Result<CosanElem> {
    if f.cod() > a.window() || f.dom() > a.window() {
        return Err(Error::OutOfWindow {
            size: f.cod().max(f.dom()),
            window: a.window(),
        });
    }
    let xf = e.epi.after(f)?;
    normalize_general_pair(a, e.level, e.coeff, &xf)
}

/// `τ̌(e)`: replace the coefficient by its image under `τ`.
pub fn apply_nat(tau: &InjNat, e: &CosanElem) -> Result<CosanElem> {
    let b = tau.apply(e.level, e.coeff)?;
    canonicalize_pair(tau.target(), e.level, b, &e.epi)
}

/// `Ǎ` tabulated on a window, with the element listings used to build it.
#[derive(Clone, Debug)]
pub struct CosanTable {
    functor: TabFunctor,
    elems: Vec<Vec<CosanElem>>,
    index: Vec<HashMap<CosanElem, usize>>,
}

impl CosanTable {
    pub fn functor(&self) -> &TabFunctor {
        &self.functor
    }

    pub fn into_functor(self) -> TabFunctor {
        self.functor
    }

    pub fn elems(&self, k: usize) -> &[CosanElem] {
        &self.elems[k]
    }

    pub fn index_of(&self, e: &CosanElem) -> Option<usize> {
        self.index.get(e.epi.dom())?.get(e).copied()
    }
}

pub fn tabulate_cosan(a: &InjCoeff, window: usize) -> Result<CosanTable> {
    let elems = (0..=window)
        .map(|k| evaluate(a, k))
        .collect::<Result<Vec<_>>>()?;
    let index: Vec<HashMap<CosanElem, usize>> = elems
        .iter()
        .map(|l| l.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    let sets = elems
        .iter()
        .map(|l| l.iter().map(|e| e.display(a)).collect())
        .collect();
    let functor = TabFunctor::from_fn(window, sets, |f| {
        elems[f.cod()]
            .iter()
            .map(|e| {
                let image = cosan_map(a, f, e)?;
                Ok(index[f.dom()][&image])
            })
            .collect()
    })?;
    Ok(CosanTable {
        functor,
        elems,
        index,
    })
}

/// `τ̌` tabulated between the tabulations of its source and target.
pub fn tabulate_nat(tau: &InjNat, window: usize) -> Result<(CosanTable, CosanTable, TabNat)> {
    let src = tabulate_cosan(tau.source(), window)?;
    let tgt = tabulate_cosan(tau.target(), window)?;
    let maps = (0..=window)
        .map(|k| {
            src.elems(k)
                .iter()
                .map(|e| {
                    let image = apply_nat(tau, e)?;
                    Ok(tgt.index_of(&image).expect("canonical element is listed"))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let nat = TabNat::from_indices(src.functor.clone(), tgt.functor.clone(), &maps)?;
    Ok((src, tgt, nat))
}
