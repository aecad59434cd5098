//! The action of semi-analytic functors on co-semi-analytic ones:
//! `H = F_B ∘ Ǎ`, tabulated and re-extracted.

use std::collections::HashMap;

use crate::coeff::{InjCoeff, SurCoeff};
use crate::cosan::tabulate_cosan;
use crate::error::{Error, Result};
use crate::finset::FinFun;
use crate::san::{san_count, san_evaluate, san_map, SanElem};
use crate::tab::{CheckReport, TabFunctor};
use crate::verify::{check_phi_iso, extract_coefficients, Extraction};

/// Default bound on the number of elements of any composite level.
pub const DEFAULT_CAP: usize = 10_000;

/// Tabulates `H_k = F_B(Ǎ((k]))` with `H(f) = F_B(Ǎ(f))`. Levels whose size
/// would exceed `cap` are rejected before anything is materialized.
pub fn compose_tabulate(b: &SurCoeff, a: &InjCoeff, window: usize, cap: usize) -> Result<TabFunctor> {
    let inner = tabulate_cosan(a, window)?;
    let inner_names = inner.functor().sets().to_vec();
    for (k, names) in inner_names.iter().enumerate() {
        let count = san_count(b, names.len())?;
        if count > cap as u128 {
            return Err(Error::ResourceBound {
                level: k,
                size: usize::try_from(count).unwrap_or(usize::MAX),
                cap,
            });
        }
    }
    let levels: Vec<Vec<SanElem>> = inner_names
        .iter()
        .map(|names| san_evaluate(b, names.len()))
        .collect::<Result<_>>()?;
    let index: Vec<HashMap<&SanElem, usize>> = levels
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, e)| (e, i)).collect())
        .collect();
    let sets = levels
        .iter()
        .zip(&inner_names)
        .map(|(l, names)| {
            l.iter()
                .map(|e| {
                    let members: Vec<&str> =
                        e.mono.values().iter().map(|&v| names[v - 1].as_str()).collect();
                    format!("{}{{{}}}", b.name(e.level, e.coeff), members.join(";"))
                })
                .collect()
        })
        .collect();
    let inner = inner.into_functor();
    TabFunctor::from_fn(window, sets, |f| {
        let af: &FinFun = inner.map(f);
        levels[f.cod()]
            .iter()
            .map(|e| {
                let image = san_map(b, af, e)?;
                index[f.dom()]
                    .get(&image)
                    .copied()
                    .ok_or(Error::IllTyped(image.level))
            })
            .collect()
    })
}

/// The composite tabulation together with its extracted coefficients and
/// the extraction and `φ` reports.
#[derive(Clone, Debug)]
pub struct Composite {
    pub functor: TabFunctor,
    pub extraction: Option<Extraction>,
    pub reports: Vec<CheckReport>,
}

impl Composite {
    pub fn passed(&self) -> bool {
        self.extraction.is_some() && self.reports.iter().all(CheckReport::passed)
    }
}

pub fn compose_extract(b: &SurCoeff, a: &InjCoeff, window: usize, cap: usize) -> Result<Composite> {
    let functor = compose_tabulate(b, a, window, cap)?;
    let (extraction, report) = extract_coefficients(&functor);
    let mut reports = vec![report];
    if let Some(ext) = &extraction {
        reports.push(check_phi_iso(&functor, ext));
    }
    Ok(Composite {
        functor,
        extraction,
        reports,
    })
}
