//! Checks on tabulated contravariant functors: functor laws, the two image
//! conditions, semicartesian transformations, coefficient and
//! transformation extraction, and the comparison map `φ`.
//!
//! Every check enumerates in a fixed order and reports the first failure,
//! so reports are deterministic.

use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Value};

use crate::coeff::{InjCoeff, InjNat};
use crate::cosan::{tabulate_cosan, tabulate_nat, CosanElem};
use crate::error::{Error, Result};
use crate::finset::{
    enumerate, is_pullback_square, pushout, window_functions_of, FinFun, FunKind,
    PullbackVerdict, Square,
};
use crate::tab::{CheckReport, TabFunctor, TabNat};
use crate::uf::UnionFind;

fn run_check(name: &str, body: impl FnOnce() -> Result<Option<Value>>) -> CheckReport {
    match body() {
        Ok(None) => CheckReport::pass(name),
        Ok(Some(w)) => CheckReport::fail(name, w),
        Err(e) => CheckReport::error(name, json!(e.to_string())),
    }
}

fn verdict_json(verdict: &PullbackVerdict) -> Value {
    match verdict {
        PullbackVerdict::Pullback => json!("pullback"),
        PullbackVerdict::Missed { q, r } => json!({"missed": [q, r]}),
        PullbackVerdict::Collision { p1, p2 } => json!({"collision": [p1, p2]}),
    }
}

fn square_json(sq: &Square) -> Value {
    json!({"top": sq.top, "left": sq.left, "right": sq.right, "bottom": sq.bottom})
}

/// Exhaustive identity and composition laws `F(g∘f) = F(f)∘F(g)`.
pub fn validate_tab_functor(f: &TabFunctor) -> CheckReport {
    run_check("functor", || {
        let w = f.window();
        for n in 0..=w {
            let t = f.map(&FinFun::identity(n));
            if let Some(x) = (0..f.size(n)).find(|&x| t.at(x) != x) {
                return Ok(Some(json!({
                    "law": "identity", "fun": FinFun::identity(n), "element": f.name(n, x),
                })));
            }
        }
        let funs: Vec<Vec<Vec<FinFun>>> = (0..=w)
            .map(|m| (0..=w).map(|n| enumerate(FunKind::All, m, n)).collect())
            .collect();
        let mut composite = Vec::with_capacity(w);
        for m in 0..=w {
            for n in 0..=w {
                for p in 0..=w {
                    for (rg, g) in funs[n][p].iter().enumerate() {
                        let tg = f.map_by_rank(n, p, rg);
                        for (rf, h) in funs[m][n].iter().enumerate() {
                            let th = f.map_by_rank(m, n, rf);
                            composite.clear();
                            composite.extend(h.values().iter().map(|&v| g.apply(v)));
                            let tgh = f.map_values(&composite, p);
                            if let Some(x) = (0..f.size(p)).find(|&x| tgh.at(x) != th.at(tg.at(x))) {
                                return Ok(Some(json!({
                                    "law": "composition", "f": h, "g": g, "element": f.name(p, x),
                                })));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    })
}

fn naturality_failure(psi: &TabNat) -> Option<Value> {
    let (src, tgt) = (psi.source(), psi.target());
    for (h, th) in src.entries() {
        let (m, n) = (h.dom(), h.cod());
        let tg = tgt.map(&h);
        let x = (0..src.size(n)).find(|&x| psi.level(m).at(th.at(x)) != tg.at(psi.level(n).at(x)));
        if let Some(x) = x {
            return Some(json!({"fun": h, "element": src.name(n, x)}));
        }
    }
    None
}

/// Naturality `ψ_m ∘ F(h) = G(h) ∘ ψ_n` for every window function.
pub fn validate_tab_nat(psi: &TabNat) -> CheckReport {
    run_check("naturality", || Ok(naturality_failure(psi)))
}

/// For every epi `f: Z → X` and every `g: Z → Y` in the window, the image of
/// the pushout square of `f` and `g` must be a pullback.
pub fn check_pullback_preservation(f: &TabFunctor) -> CheckReport {
    run_check("pullbacks", || {
        let w = f.window();
        for z in 0..=w {
            for x in 0..=z {
                for e in enumerate(FunKind::Sur, z, x) {
                    for y in 0..=w {
                        for g in enumerate(FunKind::All, z, y) {
                            let po = pushout(&e, &g)?;
                            let sq = Square::new(
                                f.map(&po.in_x).clone(),
                                f.map(&po.in_y).clone(),
                                f.map(&e).clone(),
                                f.map(&g).clone(),
                            )?;
                            let verdict = is_pullback_square(&sq)?;
                            if !verdict.holds() {
                                return Ok(Some(json!({
                                    "f": e, "g": g, "pushout": po.size,
                                    "square": square_json(&sq), "verdict": verdict_json(&verdict),
                                })));
                            }
                        }
                    }
                }
            }
        }
        Ok(None)
    })
}

/// The canonical cocone at `(k]`: the quotient of `Σ_n F_n × Fun((k], (n])`,
/// `n ≤ W`, by `(f, F(g)(c)) ∼ (g∘f, c)` must map bijectively onto `F_k`
/// via `(f, c) ↦ F(f)(c)`.
pub fn check_cocone_colimit(f: &TabFunctor, k: usize) -> CheckReport {
    run_check("cocone", || {
        let w = f.window();
        if k > w {
            return Err(Error::OutOfWindow { size: k, window: w });
        }
        let legs: Vec<Vec<FinFun>> = (0..=w).map(|n| enumerate(FunKind::All, k, n)).collect();
        // node (n, leg, c) lives at offset[n] + leg * |F_n| + c
        let mut offset = vec![0; w + 2];
        for n in 0..=w {
            offset[n + 1] = offset[n] + legs[n].len() * f.size(n);
        }
        let mut uf = UnionFind::new(offset[w + 1]);
        let mut composite = Vec::with_capacity(k);
        for n in 0..=w {
            for p in 0..=w {
                for g in enumerate(FunKind::All, n, p) {
                    let tg = f.map(&g);
                    for (li, leg) in legs[n].iter().enumerate() {
                        composite.clear();
                        composite.extend(leg.values().iter().map(|&v| g.apply(v)));
                        let gl = crate::finset::rank_of(&composite, p);
                        for c in 0..f.size(p) {
                            let lhs = offset[n] + li * f.size(n) + tg.at(c);
                            let rhs = offset[p] + gl * f.size(p) + c;
                            uf.union(lhs, rhs);
                        }
                    }
                }
            }
        }
        // each class must hit exactly one element of F_k, and every element
        // must be hit
        let mut class_image: HashMap<usize, (usize, usize, usize, usize)> = HashMap::new();
        let mut hit: Vec<Option<usize>> = vec![None; f.size(k)];
        for n in 0..=w {
            for (li, leg) in legs[n].iter().enumerate() {
                let t = f.map(leg);
                for c in 0..f.size(n) {
                    let node = offset[n] + li * f.size(n) + c;
                    let image = t.at(c);
                    let root = uf.find(node);
                    match class_image.get(&root) {
                        Some(&(x, n0, l0, c0)) if x != image => {
                            return Ok(Some(json!({
                                "k": k,
                                "reason": "class maps to two elements",
                                "pair": [
                                    {"leg": legs[n0][l0], "element": f.name(n0, c0)},
                                    {"leg": leg, "element": f.name(n, c)},
                                ],
                            })));
                        }
                        Some(_) => {}
                        None => {
                            class_image.insert(root, (image, n, li, c));
                        }
                    }
                    match hit[image] {
                        Some(r) if r != root => {
                            let (_, n0, l0, c0) = class_image[&r];
                            return Ok(Some(json!({
                                "k": k,
                                "reason": "two classes map to one element",
                                "element": f.name(k, image),
                                "pair": [
                                    {"leg": legs[n0][l0], "element": f.name(n0, c0)},
                                    {"leg": leg, "element": f.name(n, c)},
                                ],
                            })));
                        }
                        _ => hit[image] = Some(root),
                    }
                }
            }
        }
        if let Some(x) = hit.iter().position(Option::is_none) {
            return Ok(Some(json!({"k": k, "reason": "not jointly surjective", "element": f.name(k, x)})));
        }
        Ok(None)
    })
}

/// Naturality squares of `ψ` at every surjection `g: (m] → (n]` must be
/// pullbacks. A non-natural `ψ` is reported as an error.
pub fn check_semicartesian(psi: &TabNat) -> CheckReport {
    run_check("semicartesian", || {
        if let Some(w) = naturality_failure(psi) {
            return Err(Error::NotNatural(w.to_string()));
        }
        let (src, tgt) = (psi.source(), psi.target());
        for g in window_functions_of(FunKind::Sur, src.window()) {
            let sq = Square::new(
                psi.level(g.cod()).clone(),
                src.map(&g).clone(),
                tgt.map(&g).clone(),
                psi.level(g.dom()).clone(),
            )?;
            let verdict = is_pullback_square(&sq)?;
            if !verdict.holds() {
                return Ok(Some(json!({
                    "g": g, "square": square_json(&sq), "verdict": verdict_json(&verdict),
                })));
            }
        }
        Ok(None)
    })
}

/// Coefficients recovered from a tabulated functor, with each `A_n` listed
/// as a subset of `F_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    pub coeff: InjCoeff,
    pub embedding: Vec<Vec<usize>>,
}

/// `A_n = F_n ∖ ⋃ im F(h)` over the surjections `h: (n] → (m]` with `m < n`,
/// acted on by the restrictions of `F(f)` for injections `f`. A restricted
/// value escaping `A` is reported as a well-definedness failure.
pub fn extract_coefficients(f: &TabFunctor) -> (Option<Extraction>, CheckReport) {
    const CHECK: &str = "extract";
    let w = f.window();
    let mut embedding = Vec::with_capacity(w + 1);
    for n in 0..=w {
        let mut decomposable = vec![false; f.size(n)];
        for m in 0..n {
            for h in enumerate(FunKind::Sur, n, m) {
                let t = f.map(&h);
                for c in 0..t.dom() {
                    decomposable[t.at(c)] = true;
                }
            }
        }
        embedding.push((0..f.size(n)).filter(|&x| !decomposable[x]).collect::<Vec<_>>());
    }
    let position: Vec<HashMap<usize, usize>> = embedding
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, &x)| (x, i)).collect())
        .collect();
    let mut actions = BTreeMap::new();
    for inj in window_functions_of(FunKind::Inj, w) {
        let t = f.map(&inj);
        let mut table = Vec::with_capacity(embedding[inj.cod()].len());
        for &x in &embedding[inj.cod()] {
            let image = t.at(x);
            match position[inj.dom()].get(&image) {
                Some(&i) => table.push(i),
                None => {
                    let witness = json!({
                        "reason": "well-definedness",
                        "fun": inj,
                        "element": f.name(inj.cod(), x),
                        "image": f.name(inj.dom(), image),
                    });
                    return (None, CheckReport::fail(CHECK, witness));
                }
            }
        }
        match FinFun::from_indices(embedding[inj.dom()].len(), &table) {
            Ok(t) => {
                actions.insert(inj, t);
            }
            Err(e) => return (None, CheckReport::error(CHECK, json!(e.to_string()))),
        }
    }
    let sets = embedding
        .iter()
        .enumerate()
        .map(|(n, l)| l.iter().map(|&x| f.name(n, x).to_string()).collect())
        .collect();
    match InjCoeff::new(w, sets, actions) {
        Ok(coeff) => {
            let sizes = coeff.sizes();
            (
                Some(Extraction { coeff, embedding }),
                CheckReport::pass(CHECK).with_detail(json!({ "sizes": sizes })),
            )
        }
        Err(e) => (None, CheckReport::error(CHECK, json!(e.to_string()))),
    }
}

/// `φ([a, x]) = F(x)(a)` must be a natural bijection from the tabulation of
/// the extracted coefficients onto `F`.
pub fn check_phi_iso(f: &TabFunctor, ext: &Extraction) -> CheckReport {
    run_check("phi-iso", || {
        let w = f.window();
        let a = &ext.coeff;
        if a.window() < w {
            return Err(Error::OutOfWindow { size: w, window: a.window() });
        }
        if ext.embedding.len() <= w
            || (0..=w).any(|n| ext.embedding[n].len() != a.level_size(n))
            || ext.embedding[..=w].iter().enumerate().any(|(n, l)| l.iter().any(|&x| x >= f.size(n)))
        {
            return Err(Error::Schema("embedding does not fit the functor".into()));
        }
        let table = tabulate_cosan(a, w)?;
        let mut phi = Vec::with_capacity(w + 1);
        for k in 0..=w {
            let level: Vec<usize> = table
                .elems(k)
                .iter()
                .map(|e| f.map(&e.epi).at(ext.embedding[e.level][e.coeff]))
                .collect();
            let mut preimage: Vec<Option<usize>> = vec![None; f.size(k)];
            for (i, &x) in level.iter().enumerate() {
                if let Some(j) = preimage[x] {
                    return Ok(Some(json!({
                        "reason": "not injective", "level": k,
                        "elements": [table.elems(k)[j].display(a), table.elems(k)[i].display(a)],
                    })));
                }
                preimage[x] = Some(i);
            }
            if let Some(x) = preimage.iter().position(Option::is_none) {
                return Ok(Some(json!({
                    "reason": "not surjective", "level": k, "missed": f.name(k, x),
                })));
            }
            phi.push(level);
        }
        let cosan = table.functor();
        for (h, th) in f.entries() {
            let tc = cosan.map(&h);
            let (m, n) = (h.dom(), h.cod());
            if let Some(i) = (0..cosan.size(n)).find(|&i| phi[m][tc.at(i)] != th.at(phi[n][i])) {
                return Ok(Some(json!({
                    "reason": "not natural", "fun": h, "element": table.elems(n)[i].display(a),
                })));
            }
        }
        Ok(None)
    })
}

/// Transports an extraction along an isomorphism `iso[n][i] = j` sending
/// element `i` of `coeff` to element `j` of the extracted coefficients.
pub fn relabel_extraction(ext: &Extraction, coeff: &InjCoeff, iso: &[Vec<usize>]) -> Extraction {
    let embedding = iso
        .iter()
        .enumerate()
        .map(|(n, l)| l.iter().map(|&j| ext.embedding[n][j]).collect())
        .collect();
    Extraction {
        coeff: coeff.clone(),
        embedding,
    }
}

/// Recovers `τ: A → B` from `ψ: Ǎ → B̌` tabulated on the window by reading
/// `ψ` at the elements `[a, id]`.
pub fn extract_nat(a: &InjCoeff, b: &InjCoeff, psi: &TabNat) -> Result<InjNat> {
    let w = psi.source().window();
    let src = tabulate_cosan(a, w)?;
    let tgt = tabulate_cosan(b, w)?;
    if src.functor().sizes() != psi.source().sizes() || tgt.functor().sizes() != psi.target().sizes() {
        return Err(Error::Schema(
            "transformation does not run between the tabulated coefficients".into(),
        ));
    }
    if let Some(witness) = naturality_failure(psi) {
        return Err(Error::NotNatural(witness.to_string()));
    }
    let mut maps = Vec::with_capacity(w + 1);
    for m in 0..=w {
        let mut level = Vec::with_capacity(a.level_size(m));
        for coeff in 0..a.level_size(m) {
            let e = CosanElem {
                level: m,
                coeff,
                epi: FinFun::identity(m),
            };
            let i = src.index_of(&e).ok_or(Error::IllTyped(m))?;
            let image = &tgt.elems(m)[psi.level(m).at(i)];
            if !image.epi.is_injective() {
                return Err(Error::NonSemicartesian {
                    level: m,
                    witness: image.epi.to_string(),
                });
            }
            // a bijective canonical epi is the identity, so `image.level == m`
            level.push(b.act_inj(&image.epi, image.coeff)?);
        }
        maps.push(level);
    }
    let tau = InjNat::from_indices(a.clone(), b.clone(), &maps)?;
    let (_, _, rebuilt) = tabulate_nat(&tau, w)?;
    if let Some(k) = (0..=w).find(|&k| rebuilt.level(k) != psi.level(k)) {
        return Err(Error::RoundTripMismatch(format!("level {k}")));
    }
    Ok(tau)
}

/// Checks that inverse images along every window function preserve unions,
/// intersections, complements, the empty set and the full set, on the
/// tabulated power-set functor.
pub fn boolean_hom_check(window: usize) -> CheckReport {
    let run = || -> Result<(TabFunctor, usize)> {
        // level 2 carries the characteristic element, so tabulate at least
        // that far
        let w = window.max(2);
        let a = InjCoeff::builtin("exp:2", w)?;
        let table = tabulate_cosan(&a, w)?;
        let u = powerset_generator(&a, &table)?;
        Ok((table.into_functor(), u))
    };
    match run() {
        Ok((f, u)) => boolean_hom_check_upto(&f, u, window),
        Err(e) => CheckReport::error("boolean-hom", json!(e.to_string())),
    }
}

/// The element `[id, id] ∈ Ǎ((2])` for `A = exp:2`, i.e. the subset `{1}`.
pub fn powerset_generator(a: &InjCoeff, table: &crate::cosan::CosanTable) -> Result<usize> {
    let id = a.sets()[2]
        .iter()
        .position(|s| s == "2>2:1,2")
        .ok_or(Error::IllTyped(2))?;
    table
        .index_of(&CosanElem {
            level: 2,
            coeff: id,
            epi: FinFun::identity(2),
        })
        .ok_or(Error::IllTyped(2))
}

/// Decodes `F_k` as subsets of `(k]` through `u ∈ F_2`: the element
/// `F(g)(u)` for `g: (k] → (2]` is the subset `g⁻¹(1)`. Fails unless this is
/// a bijection at every level, then checks the Boolean operations.
pub fn boolean_hom_check_tab(f: &TabFunctor, u: usize) -> CheckReport {
    boolean_hom_check_upto(f, u, f.window())
}

fn boolean_hom_check_upto(f: &TabFunctor, u: usize, limit: usize) -> CheckReport {
    run_check("boolean-hom", || {
        let w = f.window();
        if w < 2 || u >= f.size(2) {
            return Err(Error::IndexOutOfRange { index: u + 1, bound: f.size(2.min(w)) });
        }
        let mut decode: Vec<Vec<u32>> = Vec::with_capacity(w + 1);
        let mut encode: Vec<Vec<usize>> = Vec::with_capacity(w + 1);
        for k in 0..=w {
            let mut dec = vec![u32::MAX; f.size(k)];
            let mut enc = vec![usize::MAX; 1 << k];
            for g in enumerate(FunKind::All, k, 2) {
                let mask = (1..=k)
                    .filter(|&i| g.apply(i) == 1)
                    .fold(0u32, |m, i| m | 1 << (i - 1));
                let x = f.apply(&g, u);
                if dec[x] != u32::MAX {
                    return Ok(Some(json!({
                        "reason": "subset decoding is not injective", "level": k, "element": f.name(k, x),
                    })));
                }
                dec[x] = mask;
                enc[mask as usize] = x;
            }
            if let Some(x) = dec.iter().position(|&m| m == u32::MAX) {
                return Ok(Some(json!({
                    "reason": "subset decoding is not surjective", "level": k, "element": f.name(k, x),
                })));
            }
            decode.push(dec);
            encode.push(enc);
        }
        let subset = |k: usize, mask: u32| -> Vec<usize> {
            (1..=k).filter(|&i| mask & 1 << (i - 1) != 0).collect()
        };
        for (h, t) in f.entries() {
            let (m, n) = (h.dom(), h.cod());
            if m > limit || n > limit {
                continue;
            }
            let pre = |mask: u32| decode[m][t.at(encode[n][mask as usize])];
            let full_n = (1u32 << n) - 1;
            let full_m = (1u32 << m) - 1;
            let fail = |op: &str, operands: Vec<Vec<usize>>| {
                Some(json!({"fun": h, "operation": op, "operands": operands}))
            };
            if pre(0) != 0 {
                return Ok(fail("bottom", vec![]));
            }
            if pre(full_n) != full_m {
                return Ok(fail("top", vec![]));
            }
            for s in 0..=full_n {
                if pre(full_n & !s) != full_m & !pre(s) {
                    return Ok(fail("complement", vec![subset(n, s)]));
                }
                for r in 0..=full_n {
                    if pre(s | r) != pre(s) | pre(r) {
                        return Ok(fail("union", vec![subset(n, s), subset(n, r)]));
                    }
                    if pre(s & r) != pre(s) & pre(r) {
                        return Ok(fail("intersection", vec![subset(n, s), subset(n, r)]));
                    }
                }
            }
        }
        Ok(None)
    })
}
