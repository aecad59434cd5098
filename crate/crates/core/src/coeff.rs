//! Coefficient functors.
//!
//! [`InjCoeff`] is a presheaf on injections truncated at a window `W`: sets
//! `A_0, …, A_W` and, for every injection `f: (n] → (m]` with `m ≤ W`, a table
//! `A_m → A_n` written `a ↦ a·f`. [`SurCoeff`] is a covariant functor on
//! surjections, either tabulated or produced by a named rule.
//!
//! Elements are identified by `(level, index)` with 0-based indices; names are
//! display metadata.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finset::{enumerate, window_functions_of, FinFun, FunKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjCoeff {
    window: usize,
    sets: Vec<Vec<String>>,
    actions: BTreeMap<FinFun, FinFun>,
}

/// A failed functor law, carrying the offending maps and element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub law: &'static str,
    pub maps: Vec<String>,
    pub level: usize,
    pub element: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} law fails at element {} of level {} for [{}]",
            self.law,
            self.element,
            self.level,
            self.maps.join(", ")
        )
    }
}

impl InjCoeff {
    /// Assembles a coefficient functor from explicit tables. Every injection
    /// in the window must have exactly one table of the right shape.
    pub fn new(
        window: usize,
        sets: Vec<Vec<String>>,
        actions: BTreeMap<FinFun, FinFun>,
    ) -> Result<Self> {
        if sets.len() != window + 1 {
            return Err(Error::Schema(format!(
                "expected {} levels, found {}",
                window + 1,
                sets.len()
            )));
        }
        let injections = window_functions_of(FunKind::Inj, window);
        if actions.len() != injections.len() {
            return Err(Error::Schema(format!(
                "expected {} injection tables, found {}",
                injections.len(),
                actions.len()
            )));
        }
        for f in &injections {
            let table = actions
                .get(f)
                .ok_or_else(|| Error::Schema(format!("missing table for injection {f}")))?;
            if table.dom() != sets[f.cod()].len() || table.cod() != sets[f.dom()].len() {
                return Err(Error::Schema(format!(
                    "table for {f} has shape {}>{}, expected {}>{}",
                    table.dom(),
                    table.cod(),
                    sets[f.cod()].len(),
                    sets[f.dom()].len()
                )));
            }
        }
        Ok(Self {
            window,
            sets,
            actions,
        })
    }

    /// Builds tables by evaluating `act(f, a)` (0-based) for every injection.
    pub fn from_action(
        window: usize,
        sets: Vec<Vec<String>>,
        act: impl Fn(&FinFun, usize) -> usize,
    ) -> Result<Self> {
        let mut actions = BTreeMap::new();
        for f in window_functions_of(FunKind::Inj, window) {
            if sets.len() <= f.cod() {
                return Err(Error::Schema("too few levels".into()));
            }
            let image: Vec<usize> = (0..sets[f.cod()].len()).map(|a| act(&f, a)).collect();
            let table = FinFun::from_indices(sets[f.dom()].len(), &image)?;
            actions.insert(f, table);
        }
        Self::new(window, sets, actions)
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn level_size(&self, n: usize) -> usize {
        self.sets.get(n).map_or(0, Vec::len)
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn sets(&self) -> &[Vec<String>] {
        &self.sets
    }

    pub fn name(&self, n: usize, a: usize) -> &str {
        &self.sets[n][a]
    }

    pub fn table(&self, f: &FinFun) -> Option<&FinFun> {
        self.actions.get(f)
    }

    pub fn tables(&self) -> impl Iterator<Item = (&FinFun, &FinFun)> {
        self.actions.iter()
    }

    /// `a·f` for an injection `f: (n] → (m]` and `a ∈ A_m`.
    pub fn act_inj(&self, f: &FinFun, a: usize) -> Result<usize> {
        if !f.is_injective() {
            return Err(Error::NotInjective(f.to_string()));
        }
        if f.cod() > self.window {
            return Err(Error::OutOfWindow {
                size: f.cod(),
                window: self.window,
            });
        }
        let bound = self.level_size(f.cod());
        if a >= bound {
            return Err(Error::IndexOutOfRange {
                index: a + 1,
                bound,
            });
        }
        Ok(self.actions[f].at(a))
    }

    /// Checks identity and contravariant composition laws over every
    /// composable pair of injections in the window.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for n in 0..=self.window {
            let id = &self.actions[&FinFun::identity(n)];
            if let Some(a) = (0..self.level_size(n)).find(|&a| id.at(a) != a) {
                return Err(Violation {
                    law: "identity",
                    maps: vec![FinFun::identity(n).to_string()],
                    level: n,
                    element: self.sets[n][a].clone(),
                });
            }
        }
        for b in 0..=self.window {
            for c in b..=self.window {
                for g in enumerate(FunKind::Inj, b, c) {
                    let tg = &self.actions[&g];
                    for a in 0..=b {
                        for f in enumerate(FunKind::Inj, a, b) {
                            let tf = &self.actions[&f];
                            let gf = g.after(&f).expect("composable");
                            let tgf = &self.actions[&gf];
                            for x in 0..self.level_size(c) {
                                if tgf.at(x) != tf.at(tg.at(x)) {
                                    return Err(Violation {
                                        law: "composition",
                                        maps: vec![f.to_string(), g.to_string()],
                                        level: c,
                                        element: self.sets[c][x].clone(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Built-in coefficient functors: `powerset`, `partition`, `constant`,
    /// and the representables `exp:n`.
    pub fn builtin(name: &str, window: usize) -> Result<Self> {
        let name = name.strip_prefix("builtin:").unwrap_or(name);
        match name {
            "powerset" => representable(2, window, |f| {
                let vals: Vec<String> = f.values().iter().map(usize::to_string).collect();
                format!("{{{}}}", vals.join(","))
            }),
            "partition" => Self::from_action(window, vec![vec!["*".into()]; window + 1], |_, _| 0),
            "constant" => {
                let sets = (0..=window)
                    .map(|n| if n <= 1 { vec!["*".to_string()] } else { vec![] })
                    .collect();
                Self::from_action(window, sets, |_, _| 0)
            }
            _ => {
                let n = name
                    .strip_prefix("exp:")
                    .and_then(|n| n.parse::<usize>().ok())
                    .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
                representable(n, window, FinFun::to_string)
            }
        }
    }
}

/// The representable `Inj(−, (n])`, acting by precomposition.
fn representable(n: usize, window: usize, name: impl Fn(&FinFun) -> String) -> Result<InjCoeff> {
    let levels: Vec<Vec<FinFun>> = (0..=window)
        .map(|m| enumerate(FunKind::Inj, m, n))
        .collect();
    let index: Vec<HashMap<&FinFun, usize>> = levels
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, f)| (f, i)).collect())
        .collect();
    let sets = levels
        .iter()
        .map(|l| l.iter().map(&name).collect())
        .collect();
    InjCoeff::from_action(window, sets, |f, a| {
        let composite = levels[f.cod()][a].after(f).expect("composable");
        index[f.dom()][&composite]
    })
}

/// A natural transformation between two [`InjCoeff`] with the same window.
/// A level map may be absent when no total map exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjNat {
    source: InjCoeff,
    target: InjCoeff,
    levels: Vec<Option<FinFun>>,
}

impl InjNat {
    pub fn new(source: InjCoeff, target: InjCoeff, levels: Vec<Option<FinFun>>) -> Result<Self> {
        if source.window != target.window || levels.len() != source.window + 1 {
            return Err(Error::Schema(
                "transformation levels must match the common window".into(),
            ));
        }
        for (n, map) in levels.iter().enumerate() {
            if let Some(m) = map {
                if m.dom() != source.level_size(n) || m.cod() != target.level_size(n) {
                    return Err(Error::Schema(format!("level {n} map {m} has the wrong shape")));
                }
            }
        }
        Ok(Self {
            source,
            target,
            levels,
        })
    }

    /// Builds level maps from 0-based index vectors.
    pub fn from_indices(source: InjCoeff, target: InjCoeff, maps: &[Vec<usize>]) -> Result<Self> {
        let levels = maps
            .iter()
            .enumerate()
            .map(|(n, m)| FinFun::from_indices(target.level_size(n), m).map(Some))
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, levels)
    }

    pub fn identity(a: &InjCoeff) -> Self {
        let levels = (0..=a.window)
            .map(|n| Some(FinFun::identity(a.level_size(n))))
            .collect();
        Self {
            source: a.clone(),
            target: a.clone(),
            levels,
        }
    }

    pub fn source(&self) -> &InjCoeff {
        &self.source
    }

    pub fn target(&self) -> &InjCoeff {
        &self.target
    }

    pub fn level(&self, n: usize) -> Option<&FinFun> {
        self.levels.get(n).and_then(Option::as_ref)
    }

    pub fn levels(&self) -> &[Option<FinFun>] {
        &self.levels
    }

    /// `τ_n(a)`.
    pub fn apply(&self, n: usize, a: usize) -> Result<usize> {
        let map = self.level(n).ok_or(Error::IllTyped(n))?;
        if a >= map.dom() {
            return Err(Error::IndexOutOfRange {
                index: a + 1,
                bound: map.dom(),
            });
        }
        Ok(map.at(a))
    }

    /// Checks `τ_n ∘ A(f) = B(f) ∘ τ_m` for every injection `f: (n] → (m]`.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        for (n, map) in self.levels.iter().enumerate() {
            if map.is_none() && self.source.level_size(n) > 0 {
                return Err(Violation {
                    law: "totality",
                    maps: vec![],
                    level: n,
                    element: self.source.sets[n][0].clone(),
                });
            }
        }
        for (f, ta) in &self.source.actions {
            let tb = &self.target.actions[f];
            let (n, m) = (f.dom(), f.cod());
            for a in 0..self.source.level_size(m) {
                let lhs = self.levels[n].as_ref().map(|t| t.at(ta.at(a)));
                let rhs = self.levels[m].as_ref().map(|t| tb.at(t.at(a)));
                if lhs != rhs {
                    return Err(Violation {
                        law: "naturality",
                        maps: vec![f.to_string()],
                        level: m,
                        element: self.source.sets[m][a].clone(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Finds a levelwise bijection `A ≅ B` commuting with every injection action,
/// returned as `iso[n][a] = b`.
pub fn find_isomorphism(a: &InjCoeff, b: &InjCoeff) -> Option<Vec<Vec<usize>>> {
    if a.window != b.window || a.sizes() != b.sizes() {
        return None;
    }
    let mut found = None;
    MapSearch::new(a, b, true).solve(0, &mut |maps| {
        found = Some(maps);
        false
    });
    found
}

/// Every natural transformation `A → B`, in lexicographic order of their
/// level maps (higher levels first).
pub fn all_natural_transformations(a: &InjCoeff, b: &InjCoeff) -> Vec<InjNat> {
    let mut out = Vec::new();
    if a.window != b.window {
        return out;
    }
    MapSearch::new(a, b, false).solve(0, &mut |maps| {
        let nat = InjNat::from_indices(a.clone(), b.clone(), &maps).expect("shapes match");
        debug_assert!(nat.validate().is_ok());
        out.push(nat);
        true
    });
    out
}

/// Backtracking search for levelwise maps `A → B` commuting with the
/// injection actions. Elements are assigned from the top level down; an
/// assignment at `(m, x)` forces `τ_n(A(f)(x)) = B(f)(τ_m(x))` for every
/// injection `f: (n] → (m]`, so conflicts surface immediately.
struct MapSearch<'a> {
    a: &'a InjCoeff,
    b: &'a InjCoeff,
    bijective: bool,
    fwd: Vec<Vec<Option<usize>>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    /// Injections with codomain `m`, per `m`.
    incoming: Vec<Vec<FinFun>>,
    order: Vec<(usize, usize)>,
}

impl<'a> MapSearch<'a> {
    fn new(a: &'a InjCoeff, b: &'a InjCoeff, bijective: bool) -> Self {
        Self {
            a,
            b,
            bijective,
            fwd: a.sets.iter().map(|s| vec![None; s.len()]).collect(),
            used: b.sets.iter().map(|s| vec![false; s.len()]).collect(),
            trail: Vec::new(),
            incoming: (0..=a.window)
                .map(|m| a.actions.keys().filter(|f| f.cod() == m).cloned().collect())
                .collect(),
            order: (0..=a.window)
                .rev()
                .flat_map(|n| (0..a.level_size(n)).map(move |x| (n, x)))
                .collect(),
        }
    }

    /// Calls `emit` on each solution; stops once it returns false. Returns
    /// false when stopped.
    fn solve(&mut self, pos: usize, emit: &mut dyn FnMut(Vec<Vec<usize>>) -> bool) -> bool {
        let Some(&(n, x)) = self.order.get(pos) else {
            let maps = self
                .fwd
                .iter()
                .map(|l| l.iter().map(|x| x.expect("total")).collect())
                .collect();
            return emit(maps);
        };
        if self.fwd[n][x].is_some() {
            return self.solve(pos + 1, emit);
        }
        for y in 0..self.b.level_size(n) {
            if self.bijective && self.used[n][y] {
                continue;
            }
            let mark = self.trail.len();
            let keep_going = !self.assign(n, x, y) || self.solve(pos + 1, emit);
            self.undo(mark);
            if !keep_going {
                return false;
            }
        }
        true
    }

    fn assign(&mut self, n: usize, x: usize, y: usize) -> bool {
        let mut queue = vec![(n, x, y)];
        while let Some((n, x, y)) = queue.pop() {
            match self.fwd[n][x] {
                Some(z) if z == y => continue,
                Some(_) => return false,
                None if self.bijective && self.used[n][y] => return false,
                None => {}
            }
            self.fwd[n][x] = Some(y);
            self.used[n][y] = true;
            self.trail.push((n, x));
            for f in &self.incoming[n] {
                let xa = self.a.actions[f].at(x);
                let yb = self.b.actions[f].at(y);
                queue.push((f.dom(), xa, yb));
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (n, x) = self.trail.pop().expect("nonempty");
            let y = self.fwd[n][x].take().expect("assigned");
            // with non-injective maps `used` is only consulted in bijective mode
            self.used[n][y] = false;
        }
    }
}

/// The rule-given surjection coefficients in the built-in catalog.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SurRule {
    /// Nonempty finite powerset: `B_n = {*}` for `n ≥ 1`, `B_0 = ∅`.
    PPlus,
    /// Identity functor: `B_1 = {*}`, every other level empty.
    Identity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SurCoeff {
    Tabulated {
        window: usize,
        sets: Vec<Vec<String>>,
        maps: BTreeMap<FinFun, FinFun>,
    },
    Rule(SurRule),
}

impl SurCoeff {
    pub fn builtin(name: &str) -> Result<Self> {
        match name.strip_prefix("builtin:").unwrap_or(name) {
            "pplus" | "pplus-singleton" => Ok(SurCoeff::Rule(SurRule::PPlus)),
            "identity" | "identity-unit" => Ok(SurCoeff::Rule(SurRule::Identity)),
            other => Err(Error::UnknownBuiltin(other.to_string())),
        }
    }

    /// A tabulated coefficient functor; every surjection in the window needs
    /// a table `B_n → B_m` of the right shape.
    pub fn tabulated(
        window: usize,
        sets: Vec<Vec<String>>,
        maps: BTreeMap<FinFun, FinFun>,
    ) -> Result<Self> {
        if sets.len() != window + 1 {
            return Err(Error::Schema(format!(
                "expected {} levels, found {}",
                window + 1,
                sets.len()
            )));
        }
        let surjections = window_functions_of(FunKind::Sur, window);
        if maps.len() != surjections.len() {
            return Err(Error::Schema(format!(
                "expected {} surjection tables, found {}",
                surjections.len(),
                maps.len()
            )));
        }
        for s in &surjections {
            let t = maps
                .get(s)
                .ok_or_else(|| Error::Schema(format!("missing table for surjection {s}")))?;
            if t.dom() != sets[s.dom()].len() || t.cod() != sets[s.cod()].len() {
                return Err(Error::Schema(format!("table for {s} has the wrong shape")));
            }
        }
        Ok(SurCoeff::Tabulated { window, sets, maps })
    }

    pub fn is_pplus(&self) -> bool {
        matches!(self, SurCoeff::Rule(SurRule::PPlus))
    }

    pub fn level_size(&self, n: usize) -> Result<usize> {
        match self {
            SurCoeff::Tabulated { window, sets, .. } => {
                if n > *window {
                    Err(Error::LevelUnavailable(n))
                } else {
                    Ok(sets[n].len())
                }
            }
            SurCoeff::Rule(SurRule::PPlus) => Ok(usize::from(n >= 1)),
            SurCoeff::Rule(SurRule::Identity) => Ok(usize::from(n == 1)),
        }
    }

    pub fn name(&self, n: usize, b: usize) -> String {
        match self {
            SurCoeff::Tabulated { sets, .. } => sets[n][b].clone(),
            SurCoeff::Rule(_) => "*".to_string(),
        }
    }

    /// Covariant action `B(s)(b)` of a surjection `s: (n] → (m]`.
    pub fn act_sur(&self, s: &FinFun, b: usize) -> Result<usize> {
        if !s.is_surjective() {
            return Err(Error::NotSurjective(s.to_string()));
        }
        let size = self.level_size(s.dom())?;
        if b >= size {
            return Err(Error::IndexOutOfRange {
                index: b + 1,
                bound: size,
            });
        }
        match self {
            SurCoeff::Tabulated { maps, .. } => Ok(maps[s].at(b)),
            SurCoeff::Rule(SurRule::PPlus) => Ok(0),
            SurCoeff::Rule(SurRule::Identity) => {
                // B_1 is the only inhabited level, and the only surjection out of (1] is the identity
                Ok(0)
            }
        }
    }

    /// Covariant functoriality `B(s'∘s) = B(s')∘B(s)` and identities, for
    /// levels up to `up_to`.
    pub fn validate(&self, up_to: usize) -> std::result::Result<(), Violation> {
        let fail = |law, maps: Vec<String>, level, b: usize| Violation {
            law,
            maps,
            level,
            element: self.name(level, b),
        };
        for n in 0..=up_to {
            let Ok(size) = self.level_size(n) else {
                break;
            };
            for b in 0..size {
                if self.act_sur(&FinFun::identity(n), b) != Ok(b) {
                    return Err(fail("identity", vec![FinFun::identity(n).to_string()], n, b));
                }
            }
            for m in 0..=n {
                for s in enumerate(FunKind::Sur, n, m) {
                    for l in 0..=m {
                        for t in enumerate(FunKind::Sur, m, l) {
                            let ts = t.after(&s).expect("composable");
                            for b in 0..size {
                                let lhs = self.act_sur(&ts, b);
                                let rhs = self
                                    .act_sur(&s, b)
                                    .and_then(|x| self.act_sur(&t, x));
                                if lhs != rhs {
                                    return Err(fail(
                                        "composition",
                                        vec![s.to_string(), t.to_string()],
                                        n,
                                        b,
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Materializes levels `0..=window` as a tabulated functor.
    pub fn materialize(&self, window: usize) -> Result<SurCoeff> {
        let sets = (0..=window)
            .map(|n| {
                let size = self.level_size(n)?;
                Ok((0..size).map(|b| self.name(n, b)).collect())
            })
            .collect::<Result<Vec<Vec<String>>>>()?;
        let mut maps = BTreeMap::new();
        for s in window_functions_of(FunKind::Sur, window) {
            let image = (0..sets[s.dom()].len())
                .map(|b| self.act_sur(&s, b))
                .collect::<Result<Vec<_>>>()?;
            maps.insert(s.clone(), FinFun::from_indices(sets[s.cod()].len(), &image)?);
        }
        SurCoeff::tabulated(window, sets, maps)
    }
}
