//! Fully tabulated contravariant functors on a window of finite sets.

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::finset::{enumerate, rank_of, window_functions, FinFun, FunKind};

/// A contravariant functor restricted to the sets `(0], …, (W]`. For every
/// `f: (m] → (n]` it stores the table `F(f): F_n → F_m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabFunctor {
    window: usize,
    sets: Vec<Vec<String>>,
    // tables[m][n][rank(f)]
    tables: Vec<Vec<Vec<FinFun>>>,
}

impl TabFunctor {
    /// Builds the functor by asking `table(f)` for the 0-based image of
    /// every element of `F_n`, for every window function `f: (m] → (n]`.
    pub fn from_fn(
        window: usize,
        sets: Vec<Vec<String>>,
        mut table: impl FnMut(&FinFun) -> Result<Vec<usize>>,
    ) -> Result<Self> {
        if sets.len() != window + 1 {
            return Err(Error::Schema(format!(
                "expected {} levels, found {}",
                window + 1,
                sets.len()
            )));
        }
        let mut tables = Vec::with_capacity(window + 1);
        for m in 0..=window {
            let mut row = Vec::with_capacity(window + 1);
            for n in 0..=window {
                let mut col = Vec::new();
                for f in enumerate(FunKind::All, m, n) {
                    let image = table(&f)?;
                    if image.len() != sets[n].len() {
                        return Err(Error::Schema(format!(
                            "table for {f} has {} entries, expected {}",
                            image.len(),
                            sets[n].len()
                        )));
                    }
                    col.push(FinFun::from_indices(sets[m].len(), &image).map_err(|e| {
                        Error::Schema(format!("table for {f}: {e}"))
                    })?);
                }
                row.push(col);
            }
            tables.push(row);
        }
        Ok(Self {
            window,
            sets,
            tables,
        })
    }

    /// Assembles the functor from one `(f, table)` entry per window function.
    pub fn from_entries(
        window: usize,
        sets: Vec<Vec<String>>,
        entries: Vec<(FinFun, FinFun)>,
    ) -> Result<Self> {
        let expected = window_functions(window).len();
        if entries.len() != expected {
            return Err(Error::Schema(format!(
                "expected {expected} function tables, found {}",
                entries.len()
            )));
        }
        let mut lookup = std::collections::HashMap::with_capacity(entries.len());
        for (f, t) in entries {
            if f.dom() > window || f.cod() > window {
                return Err(Error::Schema(format!("function {f} outside the window")));
            }
            if lookup.insert(f.clone(), t).is_some() {
                return Err(Error::Schema(format!("duplicate table for {f}")));
            }
        }
        Self::from_fn(window, sets, |f| {
            let t = lookup
                .get(f)
                .ok_or_else(|| Error::Schema(format!("missing table for {f}")))?;
            Ok((0..t.dom()).map(|i| t.at(i)).collect())
        })
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn size(&self, k: usize) -> usize {
        self.sets[k].len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn sets(&self) -> &[Vec<String>] {
        &self.sets
    }

    pub fn name(&self, k: usize, x: usize) -> &str {
        &self.sets[k][x]
    }

    /// The table `F(f): F_n → F_m` for `f: (m] → (n]` inside the window.
    pub fn map(&self, f: &FinFun) -> &FinFun {
        &self.tables[f.dom()][f.cod()][f.rank()]
    }

    pub(crate) fn map_by_rank(&self, m: usize, n: usize, rank: usize) -> &FinFun {
        &self.tables[m][n][rank]
    }

    pub(crate) fn map_values(&self, values: &[usize], n: usize) -> &FinFun {
        &self.tables[values.len()][n][rank_of(values, n)]
    }

    /// `F(f)(x)` on 0-based element indices.
    pub fn apply(&self, f: &FinFun, x: usize) -> usize {
        self.map(f).at(x)
    }

    /// Every `(f, F(f))` in window order.
    pub fn entries(&self) -> impl Iterator<Item = (FinFun, &FinFun)> + '_ {
        window_functions(self.window)
            .into_iter()
            .map(move |f| {
                let t = self.map(&f);
                (f, t)
            })
    }

    /// Overwrites one table entry: `F(f)(src) := dst` (0-based).
    pub fn set_entry(&mut self, f: &FinFun, src: usize, dst: usize) -> Result<()> {
        if f.dom() > self.window || f.cod() > self.window {
            return Err(Error::OutOfWindow {
                size: f.dom().max(f.cod()),
                window: self.window,
            });
        }
        let slot = &mut self.tables[f.dom()][f.cod()][f.rank()];
        let mut values: Vec<usize> = (0..slot.dom()).map(|i| slot.at(i)).collect();
        let bound = values.len();
        let entry = values.get_mut(src).ok_or(Error::IndexOutOfRange {
            index: src + 1,
            bound,
        })?;
        *entry = dst;
        *slot = FinFun::from_indices(slot.cod(), &values)?;
        Ok(())
    }

    /// Appends a new element to level `k`. For every `f: (m] → (k]`,
    /// `out_of(f)` gives its image under `F(f)`; the new element has index
    /// `self.size(k)`. Tables into level `k` never hit it.
    pub fn with_extra_element(
        &self,
        k: usize,
        name: &str,
        mut out_of: impl FnMut(&FinFun) -> usize,
    ) -> Result<TabFunctor> {
        let mut sets = self.sets.clone();
        sets[k].push(name.to_string());
        TabFunctor::from_fn(self.window, sets, |f| {
            let t = self.map(f);
            let mut image: Vec<usize> = (0..t.dom()).map(|i| t.at(i)).collect();
            if f.cod() == k {
                image.push(out_of(f));
            }
            Ok(image)
        })
    }
}

/// A levelwise family `ψ_k: F_k → G_k` between two tabulated functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabNat {
    source: TabFunctor,
    target: TabFunctor,
    levels: Vec<FinFun>,
}

impl TabNat {
    pub fn new(source: TabFunctor, target: TabFunctor, levels: Vec<FinFun>) -> Result<Self> {
        if source.window != target.window || levels.len() != source.window + 1 {
            return Err(Error::Schema(
                "transformation levels must match the common window".into(),
            ));
        }
        for (k, l) in levels.iter().enumerate() {
            if l.dom() != source.size(k) || l.cod() != target.size(k) {
                return Err(Error::Schema(format!("level {k} map {l} has the wrong shape")));
            }
        }
        Ok(Self {
            source,
            target,
            levels,
        })
    }

    pub fn from_indices(source: TabFunctor, target: TabFunctor, maps: &[Vec<usize>]) -> Result<Self> {
        let levels = maps
            .iter()
            .enumerate()
            .map(|(k, m)| {
                let cod = target.sets.get(k).map_or(0, Vec::len);
                FinFun::from_indices(cod, m)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, levels)
    }

    pub fn identity(f: &TabFunctor) -> Self {
        Self {
            source: f.clone(),
            target: f.clone(),
            levels: f.sizes().into_iter().map(FinFun::identity).collect(),
        }
    }

    pub fn source(&self) -> &TabFunctor {
        &self.source
    }

    pub fn target(&self) -> &TabFunctor {
        &self.target
    }

    pub fn level(&self, k: usize) -> &FinFun {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[FinFun] {
        &self.levels
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

/// Result of one verification check. Failing reports carry a concrete
/// witness; `detail` holds optional supplementary data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub result: Outcome,
    pub witness: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<Value>,
}

impl CheckReport {
    pub fn pass(check: &str) -> Self {
        Self {
            check: check.to_string(),
            result: Outcome::Pass,
            witness: None,
            detail: None,
        }
    }

    pub fn fail(check: &str, witness: Value) -> Self {
        Self {
            check: check.to_string(),
            result: Outcome::Fail,
            witness: Some(witness),
            detail: None,
        }
    }

    pub fn error(check: &str, witness: Value) -> Self {
        Self {
            check: check.to_string(),
            result: Outcome::Error,
            witness: Some(witness),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn passed(&self) -> bool {
        self.result == Outcome::Pass
    }
}
