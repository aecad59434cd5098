//! Semi-analytic functors `F_B(X) = Σ_n B_n ⊗_n Mono((n], X)` for coefficients
//! on surjections, their covariant action, the strength, and algebras for the
//! nonempty-powerset monad.
//!
//! Orbits `[b, i]` are stored with `i` strictly ascending; the identification
//! is `⟨b, i∘σ⟩ ∼ ⟨B(σ)(b), i⟩`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::coeff::SurCoeff;
use crate::error::{Error, Result};
use crate::finset::{
    ascending_monos, enumerate, epi_mono_factorize, is_pullback_square, FinFun, FunKind,
    PullbackVerdict, Square,
};
use crate::tab::CheckReport;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SanElem {
    pub level: usize,
    pub coeff: usize,
    pub mono: FinFun,
}

impl SanElem {
    /// Display name `b<v1,…,vn>`.
    pub fn display(&self, b: &SurCoeff) -> String {
        let vals: Vec<String> = self.mono.values().iter().map(usize::to_string).collect();
        format!("{}<{}>", b.name(self.level, self.coeff), vals.join(","))
    }
}

/// `|F_B((k])| = Σ_n |B_n|·C(k, n)`, saturating.
pub fn san_count(b: &SurCoeff, k: usize) -> Result<u128> {
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    for n in 0..=k {
        if n > 0 {
            binom = binom.saturating_mul((k + 1 - n) as u128) / n as u128;
        }
        total = total.saturating_add((b.level_size(n)? as u128).saturating_mul(binom));
    }
    Ok(total)
}

/// All elements of `F_B((k])`, ordered by level, coefficient, then mono.
pub fn san_evaluate(b: &SurCoeff, k: usize) -> Result<Vec<SanElem>> {
    let mut out = Vec::new();
    for n in 0..=k {
        let size = b.level_size(n)?;
        if size == 0 {
            continue;
        }
        let monos = ascending_monos(n, k);
        for coeff in 0..size {
            out.extend(monos.iter().map(|m| SanElem {
                level: n,
                coeff,
                mono: m.clone(),
            }));
        }
    }
    Ok(out)
}

/// `F_B(f)(e)`: factor `f ∘ i = i' ∘ s` and act on the coefficient by `s`.
pub fn san_map(b: &SurCoeff, f: &FinFun, e: &SanElem) -> Result<SanElem> {
    let fi = f.after(&e.mono)?;
    let (s, i) = epi_mono_factorize(&fi);
    let coeff = if s.is_identity() {
        e.coeff
    } else {
        b.act_sur(&s, e.coeff)?
    };
    Ok(SanElem {
        level: s.cod(),
        coeff,
        mono: i,
    })
}

/// Index of `(x, y)` in `(X] × (Y]` under the row-major convention
/// `(x − 1)·Y + y`.
pub fn product_index(x: usize, y: usize, ny: usize) -> usize {
    (x - 1) * ny + y
}

/// `x̄: (Y] → (X·Y]`, `y ↦ (x, y)`.
pub fn section(nx: usize, ny: usize, x: usize) -> Result<FinFun> {
    if x == 0 || x > nx {
        return Err(Error::IndexOutOfRange { index: x, bound: nx });
    }
    FinFun::new(nx * ny, (1..=ny).map(|y| product_index(x, y, ny)).collect())
}

/// `st_{X,Y}(x, t) = T(x̄)(t)`.
pub fn strength(b: &SurCoeff, nx: usize, ny: usize, x: usize, t: &SanElem) -> Result<SanElem> {
    if t.mono.cod() != ny {
        return Err(Error::CodMismatch {
            left: t.mono.cod(),
            right: ny,
        });
    }
    san_map(b, &section(nx, ny, x)?, t)
}

/// `F_B((k])` with an element index.
struct Level {
    elems: Vec<SanElem>,
    index: HashMap<SanElem, usize>,
}

impl Level {
    fn new(b: &SurCoeff, k: usize) -> Result<Self> {
        let elems = san_evaluate(b, k)?;
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok(Self { elems, index })
    }

    fn position(&self, e: &SanElem) -> Result<usize> {
        self.index.get(e).copied().ok_or(Error::IndexOutOfRange {
            index: 0,
            bound: self.elems.len(),
        })
    }
}

struct LevelCache<'a> {
    b: &'a SurCoeff,
    levels: HashMap<usize, Level>,
}

impl<'a> LevelCache<'a> {
    fn new(b: &'a SurCoeff) -> Self {
        Self {
            b,
            levels: HashMap::new(),
        }
    }

    fn get(&mut self, k: usize) -> Result<&Level> {
        if !self.levels.contains_key(&k) {
            let level = Level::new(self.b, k)?;
            self.levels.insert(k, level);
        }
        Ok(&self.levels[&k])
    }
}

/// A strength-like map `(B, X, Y, x, t) ↦ element of T(X×Y)`; lets the
/// semicartesian check run against alternative product conventions.
pub type StrengthFn = dyn Fn(&SurCoeff, usize, usize, usize, &SanElem) -> Result<SanElem>;

/// Checks that the naturality squares of the strength at pairs of monos
/// `u: X' → X`, `v: Y' → Y` (sizes ≤ `window`) are pullbacks. Monos in the
/// first variable, the second variable, and both jointly are reported
/// separately in the detail.
pub fn check_strength_semicartesian(b: &SurCoeff, window: usize) -> CheckReport {
    check_strength_semicartesian_with(b, window, &strength)
}

pub fn check_strength_semicartesian_with(
    b: &SurCoeff,
    window: usize,
    st: &StrengthFn,
) -> CheckReport {
    const CHECK: &str = "strength";
    let mut cache = LevelCache::new(b);
    let monos: Vec<FinFun> = (0..=window)
        .flat_map(|n| (n..=window).flat_map(move |m| enumerate(FunKind::Inj, n, m)))
        .collect();
    let mut first_failure = None;
    let mut modes = serde_json::Map::new();
    for mode in ["first", "second", "joint"] {
        let mut ok = true;
        'pairs: for u in &monos {
            for v in &monos {
                let keep = match mode {
                    "first" => v.is_identity(),
                    "second" => u.is_identity(),
                    _ => true,
                };
                if !keep {
                    continue;
                }
                match strength_square(&mut cache, st, u, v) {
                    Ok(PullbackVerdict::Pullback) => {}
                    Ok(verdict) => {
                        ok = false;
                        first_failure.get_or_insert_with(|| {
                            json!({"mode": mode, "u": u, "v": v, "verdict": format!("{verdict:?}")})
                        });
                        break 'pairs;
                    }
                    Err(e) => {
                        ok = false;
                        first_failure.get_or_insert_with(|| {
                            json!({"mode": mode, "u": u, "v": v, "error": e.to_string()})
                        });
                        break 'pairs;
                    }
                }
            }
        }
        modes.insert(mode.to_string(), json!(if ok { "pass" } else { "fail" }));
    }
    let report = match first_failure {
        None => CheckReport::pass(CHECK),
        Some(w) => CheckReport::fail(CHECK, w),
    };
    report.with_detail(serde_json::Value::Object(modes))
}

fn strength_square(
    cache: &mut LevelCache<'_>,
    st: &StrengthFn,
    u: &FinFun,
    v: &FinFun,
) -> Result<PullbackVerdict> {
    let b = cache.b;
    let (xs, x) = (u.dom(), u.cod());
    let (ys, y) = (v.dom(), v.cod());
    let ty_small = cache.get(ys)?.elems.clone();
    let ty_len = cache.get(y)?.elems.len();
    let tp_small_len = cache.get(xs * ys)?.elems.len();
    let tp_len = cache.get(x * y)?.elems.len();

    // corner X'×T(Y') and bottom-left X×T(Y), both row-major
    let mut top = Vec::with_capacity(xs * ty_small.len());
    let mut left = Vec::with_capacity(xs * ty_small.len());
    for xp in 1..=xs {
        for t in &ty_small {
            let s = st(b, xs, ys, xp, t)?;
            top.push(cache.get(xs * ys)?.position(&s)?);
            let tv = san_map(b, v, t)?;
            let tv_idx = cache.get(y)?.position(&tv)?;
            left.push((u.apply(xp) - 1) * ty_len + tv_idx);
        }
    }
    let uv = FinFun::new(
        x * y,
        (1..=xs)
            .flat_map(|xp| (1..=ys).map(move |yp| (xp, yp)))
            .map(|(xp, yp)| product_index(u.apply(xp), v.apply(yp), y))
            .collect(),
    )?;
    let small = cache.get(xs * ys)?.elems.clone();
    let mut right = Vec::with_capacity(small.len());
    for s in &small {
        let image = san_map(b, &uv, s)?;
        right.push(cache.get(x * y)?.position(&image)?);
    }
    let ty = cache.get(y)?.elems.clone();
    let mut bottom = Vec::with_capacity(x * ty.len());
    for xx in 1..=x {
        for t in &ty {
            let s = st(b, x, y, xx, t)?;
            bottom.push(cache.get(x * y)?.position(&s)?);
        }
    }
    let sq = Square::new(
        FinFun::from_indices(tp_small_len, &top)?,
        FinFun::from_indices(x * ty_len, &left)?,
        FinFun::from_indices(tp_len, &right)?,
        FinFun::from_indices(tp_len, &bottom)?,
    )?;
    is_pullback_square(&sq)
}

/// An algebra structure `α: T((n]) → (n]`, listed in evaluation order of
/// `T((n])`, with values in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Algebra {
    pub carrier: usize,
    pub alpha: Vec<usize>,
}

impl Algebra {
    pub fn new(b: &SurCoeff, carrier: usize, alpha: Vec<usize>) -> Result<Self> {
        let size = san_evaluate(b, carrier)?.len();
        if alpha.len() != size {
            return Err(Error::Schema(format!(
                "algebra on ({carrier}] needs {size} entries, found {}",
                alpha.len()
            )));
        }
        if let Some(&v) = alpha.iter().find(|&&v| v == 0 || v > carrier) {
            return Err(Error::IndexOutOfRange {
                index: v,
                bound: carrier,
            });
        }
        Ok(Self { carrier, alpha })
    }

    /// `((n], max)` for the nonempty-powerset coefficients: a subset goes to
    /// its largest element.
    pub fn max(b: &SurCoeff, n: usize) -> Result<Self> {
        let alpha = san_evaluate(b, n)?
            .iter()
            .map(|e| e.mono.values().last().copied().ok_or(Error::IllTyped(0)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(b, n, alpha)
    }

    /// Parses `max:n`.
    pub fn builtin(b: &SurCoeff, name: &str) -> Result<Self> {
        let name = name.strip_prefix("builtin:").unwrap_or(name);
        let n = name
            .strip_prefix("max:")
            .and_then(|n| n.parse().ok())
            .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
        Self::max(b, n)
    }

    fn structure(&self, b: &SurCoeff) -> Result<(Vec<SanElem>, HashMap<SanElem, usize>)> {
        let elems = san_evaluate(b, self.carrier)?;
        let index = elems.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        Ok((elems, index))
    }
}

fn require_pplus(b: &SurCoeff) -> Result<()> {
    if b.is_pplus() {
        Ok(())
    } else {
        Err(Error::UnknownBuiltin(
            "the monad structure is only available for pplus".into(),
        ))
    }
}

/// `η(x) = {x}`.
pub fn pplus_unit(n: usize, x: usize) -> Result<SanElem> {
    Ok(SanElem {
        level: 1,
        coeff: 0,
        mono: FinFun::new(n, vec![x])?,
    })
}

/// `μ`: a nonempty family of nonempty subsets of `(n]`, given over the
/// listing `inner` of `T((n])`, goes to its union.
pub fn pplus_multiply(n: usize, inner: &[SanElem], tt: &SanElem) -> Result<SanElem> {
    let mut hit = vec![false; n + 1];
    for &j in tt.mono.values() {
        for &v in inner[j - 1].mono.values() {
            hit[v] = true;
        }
    }
    let union: Vec<usize> = (1..=n).filter(|&v| hit[v]).collect();
    Ok(SanElem {
        level: union.len(),
        coeff: 0,
        mono: FinFun::new(n, union)?,
    })
}

/// Unit and multiplication laws `α∘η = id`, `α∘μ = α∘T(α)` for the
/// nonempty-powerset monad.
pub fn check_algebra_laws(b: &SurCoeff, alg: &Algebra) -> CheckReport {
    const CHECK: &str = "algebra-laws";
    let run = || -> Result<Option<serde_json::Value>> {
        require_pplus(b)?;
        let n = alg.carrier;
        let (elems, index) = alg.structure(b)?;
        let alpha_of = |e: &SanElem| -> Result<usize> {
            index
                .get(e)
                .map(|&i| alg.alpha[i])
                .ok_or(Error::IndexOutOfRange { index: 0, bound: elems.len() })
        };
        for x in 1..=n {
            if alpha_of(&pplus_unit(n, x)?)? != x {
                return Ok(Some(json!({"law": "unit", "x": x})));
            }
        }
        let alpha_fun = FinFun::new(n, alg.alpha.clone())?;
        for tt in san_evaluate(b, elems.len())? {
            let lhs = alpha_of(&pplus_multiply(n, &elems, &tt)?)?;
            let rhs = alpha_of(&san_map(b, &alpha_fun, &tt)?)?;
            if lhs != rhs {
                let members: Vec<String> =
                    tt.mono.values().iter().map(|&j| elems[j - 1].display(b)).collect();
                return Ok(Some(json!({"law": "multiplication", "element": members})));
            }
        }
        Ok(None)
    };
    match run() {
        Ok(None) => CheckReport::pass(CHECK),
        Ok(Some(w)) => CheckReport::fail(CHECK, w),
        Err(e) => CheckReport::error(CHECK, json!(e.to_string())),
    }
}

fn check_function_set(alg: &Algebra, nx: usize, t: &SanElem) -> Result<Vec<FinFun>> {
    let functions = enumerate(FunKind::All, nx, alg.carrier);
    if t.mono.cod() != functions.len() {
        return Err(Error::CodMismatch {
            left: t.mono.cod(),
            right: functions.len(),
        });
    }
    Ok(functions)
}

/// The algebra structure on `(n]^X` as the exponential adjoint of
/// `α ∘ T(ev) ∘ st`. Elements of `(n]^X` are indexed lexicographically and
/// `t` lives over that index set.
pub fn exponential_algebra(b: &SurCoeff, alg: &Algebra, nx: usize, t: &SanElem) -> Result<FinFun> {
    let functions = check_function_set(alg, nx, t)?;
    let nfun = functions.len();
    let (_, index) = alg.structure(b)?;
    let ev = FinFun::new(
        alg.carrier,
        (1..=nx)
            .flat_map(|x| functions.iter().map(move |g| g.apply(x)))
            .collect(),
    )?;
    let values = (1..=nx)
        .map(|x| {
            let s = strength(b, nx, nfun, x, t)?;
            let image = san_map(b, &ev, &s)?;
            index
                .get(&image)
                .map(|&i| alg.alpha[i])
                .ok_or(Error::IllTyped(image.level))
        })
        .collect::<Result<Vec<_>>>()?;
    FinFun::new(alg.carrier, values)
}

/// The pointwise structure: `result(x) = α(T(eval_x)(t))`.
pub fn pointwise_algebra(b: &SurCoeff, alg: &Algebra, nx: usize, t: &SanElem) -> Result<FinFun> {
    let functions = check_function_set(alg, nx, t)?;
    let (_, index) = alg.structure(b)?;
    let values = (1..=nx)
        .map(|x| {
            let eval_x = FinFun::new(alg.carrier, functions.iter().map(|g| g.apply(x)).collect())?;
            let image = san_map(b, &eval_x, t)?;
            index
                .get(&image)
                .map(|&i| alg.alpha[i])
                .ok_or(Error::IllTyped(image.level))
        })
        .collect::<Result<Vec<_>>>()?;
    FinFun::new(alg.carrier, values)
}

/// Compares the exponential and pointwise structures on `(n]^X` for every
/// `|X| ≤ max_x` and every `t ∈ T((n]^X)`.
pub fn check_exponential_pointwise(b: &SurCoeff, alg: &Algebra, max_x: usize) -> CheckReport {
    const CHECK: &str = "exponential";
    let run = || -> Result<std::result::Result<usize, serde_json::Value>> {
        let mut compared = 0usize;
        for nx in 0..=max_x {
            let nfun = alg.carrier.pow(nx as u32);
            for t in san_evaluate(b, nfun)? {
                let e = exponential_algebra(b, alg, nx, &t)?;
                let p = pointwise_algebra(b, alg, nx, &t)?;
                if e != p {
                    return Ok(Err(json!({
                        "x": nx,
                        "t": t.display(b),
                        "exponential": e,
                        "pointwise": p,
                    })));
                }
                compared += 1;
            }
        }
        Ok(Ok(compared))
    };
    match run() {
        Ok(Ok(n)) => CheckReport::pass(CHECK).with_detail(json!({"compared": n})),
        Ok(Err(w)) => CheckReport::fail(CHECK, w),
        Err(e) => CheckReport::error(CHECK, json!(e.to_string())),
    }
}
