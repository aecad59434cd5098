//! The skeletal category of finite sets `(n] = {1, …, n}`.
//!
//! Functions are stored as value sequences with 1-based entries, so the
//! function `(3] → (2]` sending `1 ↦ 1, 2 ↦ 1, 3 ↦ 2` is `[1, 1, 2]` and
//! prints as `3>2:1,1,2`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::uf::UnionFind;

/// A function `(dom] → (cod]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct FinFun {
    dom: usize,
    cod: usize,
    values: Vec<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Classification {
    pub injective: bool,
    pub surjective: bool,
    pub bijective: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FunKind {
    All,
    Inj,
    Sur,
    Bij,
}

impl FinFun {
    pub fn new(cod: usize, values: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = values.iter().find(|&&v| v == 0 || v > cod) {
            return Err(Error::InvalidFun(format!(
                "value {bad} outside 1..={cod} in {values:?}"
            )));
        }
        Ok(Self {
            dom: values.len(),
            cod,
            values,
        })
    }

    /// Builds a function from 0-based indices, as used by action tables.
    pub fn from_indices(cod: usize, indices: &[usize]) -> Result<Self> {
        Self::new(cod, indices.iter().map(|&i| i + 1).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            dom: n,
            cod: n,
            values: (1..=n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// `f(i)` for `i ∈ 1..=dom`.
    pub fn apply(&self, i: usize) -> usize {
        self.values[i - 1]
    }

    /// The same map on 0-based indices.
    pub fn at(&self, i: usize) -> usize {
        self.values[i] - 1
    }

    pub fn is_identity(&self) -> bool {
        self.dom == self.cod && self.values.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod + 1];
        self.values.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod + 1];
        for &v in &self.values {
            seen[v] = true;
        }
        seen[1..].iter().all(|&s| s)
    }

    pub fn classify(&self) -> Classification {
        let mut fiber = vec![0usize; self.cod + 1];
        for &v in &self.values {
            fiber[v] += 1;
        }
        let injective = fiber.iter().all(|&c| c <= 1);
        let surjective = fiber[1..].iter().all(|&c| c >= 1);
        Classification {
            injective,
            surjective,
            bijective: injective && surjective,
        }
    }

    /// `self ∘ f`.
    pub fn after(&self, f: &FinFun) -> Result<FinFun> {
        compose(self, f)
    }

    /// Inverse of a bijection.
    pub fn inverse(&self) -> Result<FinFun> {
        if !self.classify().bijective {
            return Err(Error::NotInjective(self.to_string()));
        }
        let mut inv = vec![0; self.dom];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        FinFun::new(self.dom, inv)
    }

    /// Position of this function in `enumerate(All, dom, cod)`.
    pub fn rank(&self) -> usize {
        rank_of(&self.values, self.cod)
    }

    /// The image as an ascending list.
    pub fn image(&self) -> Vec<usize> {
        let mut hit = vec![false; self.cod + 1];
        for &v in &self.values {
            hit[v] = true;
        }
        (1..=self.cod).filter(|&v| hit[v]).collect()
    }
}

pub(crate) fn rank_of(values: &[usize], cod: usize) -> usize {
    values.iter().fold(0, |acc, &v| acc * cod + (v - 1))
}

impl fmt::Display for FinFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}>{}:", self.dom, self.cod)?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl FromStr for FinFun {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidFun(format!("expected \"m>n:v1,…,vm\", got {s:?}"));
        let (head, body) = s.trim().split_once(':').ok_or_else(bad)?;
        let (m, n) = head.split_once('>').ok_or_else(bad)?;
        let m: usize = m.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        let values = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|v| v.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?
        };
        if values.len() != m {
            return Err(Error::InvalidFun(format!(
                "{s:?} declares domain {m} but lists {} values",
                values.len()
            )));
        }
        FinFun::new(n, values)
    }
}

impl serde::Serialize for FinFun {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for FinFun {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `g ∘ f`.
pub fn compose(g: &FinFun, f: &FinFun) -> Result<FinFun> {
    if f.cod != g.dom {
        return Err(Error::CodMismatch {
            left: f.cod,
            right: g.dom,
        });
    }
    Ok(FinFun {
        dom: f.dom,
        cod: g.cod,
        values: f.values.iter().map(|&v| g.values[v - 1]).collect(),
    })
}

/// Splits `f = m ∘ e` with `e` surjective and `m` the ascending injection
/// enumerating the image of `f`.
pub fn epi_mono_factorize(f: &FinFun) -> (FinFun, FinFun) {
    let image = f.image();
    let mut slot = vec![0; f.cod + 1];
    for (i, &v) in image.iter().enumerate() {
        slot[v] = i + 1;
    }
    let k = image.len();
    let e = FinFun {
        dom: f.dom,
        cod: k,
        values: f.values.iter().map(|&v| slot[v]).collect(),
    };
    let m = FinFun {
        dom: k,
        cod: f.cod,
        values: image,
    };
    (e, m)
}

/// Writes a surjection as `x = σ ∘ c` where `c` introduces labels in the
/// order 1, 2, 3, … when scanned left to right and `σ` is a permutation.
pub fn canonical_epi_form(x: &FinFun) -> Result<(FinFun, FinFun)> {
    if !x.is_surjective() {
        return Err(Error::NotEpi(x.to_string()));
    }
    let n = x.cod;
    let mut relabel = vec![0; n + 1];
    let mut sigma = Vec::with_capacity(n);
    let mut c = Vec::with_capacity(x.dom);
    for &v in &x.values {
        if relabel[v] == 0 {
            sigma.push(v);
            relabel[v] = sigma.len();
        }
        c.push(relabel[v]);
    }
    Ok((
        FinFun {
            dom: n,
            cod: n,
            values: sigma,
        },
        FinFun {
            dom: x.dom,
            cod: n,
            values: c,
        },
    ))
}

pub fn is_canonical_epi(x: &FinFun) -> bool {
    let mut next = 1;
    for &v in &x.values {
        if v == next {
            next += 1;
        } else if v > next {
            return false;
        }
    }
    next == x.cod + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pushout {
    pub size: usize,
    pub in_x: FinFun,
    pub in_y: FinFun,
}

/// Pushout of `X ←f− Z −g→ Y`.
pub fn pushout(f: &FinFun, g: &FinFun) -> Result<Pushout> {
    if f.dom != g.dom {
        return Err(Error::DomMismatch {
            left: f.dom,
            right: g.dom,
        });
    }
    let (nx, ny) = (f.cod, g.cod);
    let mut uf = UnionFind::new(nx + ny);
    for (&a, &b) in f.values.iter().zip(&g.values) {
        uf.union(a - 1, nx + b - 1);
    }
    let mut label: HashMap<usize, usize> = HashMap::new();
    let mut labels = Vec::with_capacity(nx + ny);
    for i in 0..nx + ny {
        let root = uf.find(i);
        let next = label.len() + 1;
        labels.push(*label.entry(root).or_insert(next));
    }
    let size = label.len();
    Ok(Pushout {
        size,
        in_x: FinFun::new(size, labels[..nx].to_vec())?,
        in_y: FinFun::new(size, labels[nx..].to_vec())?,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pullback {
    /// Pairs `(i, j)` with `f(i) = g(j)`, 1-based and in lexicographic order.
    pub pairs: Vec<(usize, usize)>,
    pub proj_left: FinFun,
    pub proj_right: FinFun,
}

pub fn pullback(f: &FinFun, g: &FinFun) -> Result<Pullback> {
    if f.cod != g.cod {
        return Err(Error::CodMismatch {
            left: f.cod,
            right: g.cod,
        });
    }
    let mut fiber: Vec<Vec<usize>> = vec![Vec::new(); g.cod + 1];
    for (j, &v) in g.values.iter().enumerate() {
        fiber[v].push(j + 1);
    }
    let pairs: Vec<(usize, usize)> = f
        .values
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| fiber[v].iter().map(move |&j| (i + 1, j)))
        .collect();
    let proj_left = FinFun::new(f.dom, pairs.iter().map(|p| p.0).collect())?;
    let proj_right = FinFun::new(g.dom, pairs.iter().map(|p| p.1).collect())?;
    Ok(Pullback {
        pairs,
        proj_left,
        proj_right,
    })
}

/// A square whose top-left corner `P` is the candidate pullback:
///
/// ```text
///   P --top--> Q
///   |          |
///  left      right
///   v          v
///   R -bottom> S
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Square {
    pub top: FinFun,
    pub left: FinFun,
    pub right: FinFun,
    pub bottom: FinFun,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PullbackVerdict {
    Pullback,
    /// The fiber-product element `(q, r)` has no preimage in the corner.
    Missed { q: usize, r: usize },
    /// Corner elements `p1 < p2` land on the same fiber-product element.
    Collision { p1: usize, p2: usize },
}

impl PullbackVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, PullbackVerdict::Pullback)
    }
}

impl Square {
    pub fn new(top: FinFun, left: FinFun, right: FinFun, bottom: FinFun) -> Result<Self> {
        let sq = Square {
            top,
            left,
            right,
            bottom,
        };
        sq.check_shape()?;
        Ok(sq)
    }

    fn check_shape(&self) -> Result<()> {
        let pairs = [
            (self.top.dom, self.left.dom),
            (self.right.cod, self.bottom.cod),
        ];
        for (a, b) in pairs {
            if a != b {
                return Err(Error::DomMismatch { left: a, right: b });
            }
        }
        if self.top.cod != self.right.dom {
            return Err(Error::CodMismatch {
                left: self.top.cod,
                right: self.right.dom,
            });
        }
        if self.left.cod != self.bottom.dom {
            return Err(Error::CodMismatch {
                left: self.left.cod,
                right: self.bottom.dom,
            });
        }
        Ok(())
    }

    pub fn commutes(&self) -> bool {
        self.top
            .values
            .iter()
            .zip(&self.left.values)
            .all(|(&q, &r)| self.right.values[q - 1] == self.bottom.values[r - 1])
    }
}

/// Decides whether the corner of `sq` is a pullback of `right` and `bottom`.
pub fn is_pullback_square(sq: &Square) -> Result<PullbackVerdict> {
    sq.check_shape()?;
    if !sq.commutes() {
        return Err(Error::NonCommuting);
    }
    let mut seen: HashMap<(usize, usize), usize> = HashMap::with_capacity(sq.top.dom);
    for p in 1..=sq.top.dom {
        let key = (sq.top.apply(p), sq.left.apply(p));
        if let Some(&p1) = seen.get(&key) {
            return Ok(PullbackVerdict::Collision { p1, p2: p });
        }
        seen.insert(key, p);
    }
    let mut fiber: Vec<Vec<usize>> = vec![Vec::new(); sq.bottom.cod + 1];
    for r in 1..=sq.bottom.dom {
        fiber[sq.bottom.apply(r)].push(r);
    }
    for q in 1..=sq.right.dom {
        for &r in &fiber[sq.right.apply(q)] {
            if !seen.contains_key(&(q, r)) {
                return Ok(PullbackVerdict::Missed { q, r });
            }
        }
    }
    Ok(PullbackVerdict::Pullback)
}

/// All functions `(m] → (n]` of the given kind, in lexicographic order.
pub fn enumerate(kind: FunKind, m: usize, n: usize) -> Vec<FinFun> {
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(m);
    let mut used = vec![false; n + 1];
    let injective_only = matches!(kind, FunKind::Inj | FunKind::Bij);
    if kind == FunKind::Bij && m != n {
        return out;
    }
    fill(m, n, injective_only, &mut buf, &mut used, &mut |vals| {
        let f = FinFun {
            dom: m,
            cod: n,
            values: vals.to_vec(),
        };
        if kind != FunKind::Sur || f.is_surjective() {
            out.push(f);
        }
    });
    out
}

fn fill(
    m: usize,
    n: usize,
    injective: bool,
    buf: &mut Vec<usize>,
    used: &mut [bool],
    emit: &mut dyn FnMut(&[usize]),
) {
    if buf.len() == m {
        emit(buf);
        return;
    }
    for v in 1..=n {
        if injective && used[v] {
            continue;
        }
        used[v] = true;
        buf.push(v);
        fill(m, n, injective, buf, used, emit);
        buf.pop();
        used[v] = false;
    }
}

/// Surjections `(k] → (n]` in first-occurrence canonical form, lexicographic.
/// These are the restricted growth strings of length `k` with maximum `n`.
pub fn canonical_epis(k: usize, n: usize) -> Vec<FinFun> {
    fn go(k: usize, n: usize, max: usize, buf: &mut Vec<usize>, out: &mut Vec<FinFun>) {
        let remaining = k - buf.len();
        if remaining == 0 {
            if max == n {
                out.push(FinFun {
                    dom: k,
                    cod: n,
                    values: buf.clone(),
                });
            }
            return;
        }
        if n - max > remaining {
            return;
        }
        for v in 1..=(max + 1).min(n) {
            buf.push(v);
            go(k, n, max.max(v), buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    if n <= k {
        go(k, n, 0, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// Strictly increasing injections `(n] → (k]`, lexicographic.
pub fn ascending_monos(n: usize, k: usize) -> Vec<FinFun> {
    fn go(n: usize, k: usize, start: usize, buf: &mut Vec<usize>, out: &mut Vec<FinFun>) {
        if buf.len() == n {
            out.push(FinFun {
                dom: n,
                cod: k,
                values: buf.clone(),
            });
            return;
        }
        let need = n - buf.len();
        for v in start..=k + 1 - need {
            buf.push(v);
            go(n, k, v + 1, buf, out);
            buf.pop();
        }
    }
    let mut out = Vec::new();
    if n <= k {
        go(n, k, 1, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// Every function between sets of size at most `window`, ordered by
/// domain, then codomain, then lexicographically.
pub fn window_functions(window: usize) -> Vec<FinFun> {
    (0..=window)
        .flat_map(|m| (0..=window).flat_map(move |n| enumerate(FunKind::All, m, n)))
        .collect()
}

pub fn window_functions_of(kind: FunKind, window: usize) -> Vec<FinFun> {
    (0..=window)
        .flat_map(|m| (0..=window).flat_map(move |n| enumerate(kind, m, n)))
        .collect()
}
