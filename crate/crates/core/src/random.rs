//! Random coefficient functors and transformations for test suites.
//!
//! A random coefficient functor is a coproduct of orbit functors
//! `Inj(−, (n]) / H` for subgroups `H ≤ S_n` acting by postcomposition,
//! optionally divided by the smallest congruence identifying a random pair
//! of elements. Every presheaf on injections is such a quotient, and the
//! construction is functorial by design.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;

use crate::coeff::{all_natural_transformations, InjCoeff, InjNat};
use crate::finset::{enumerate, window_functions_of, FinFun, FunKind};
use crate::uf::UnionFind;

/// A random subgroup of `S_n`, generated by up to two random permutations.
fn random_subgroup(rng: &mut impl Rng, n: usize) -> Vec<FinFun> {
    let perms = enumerate(FunKind::Bij, n, n);
    let mut group: BTreeSet<FinFun> = BTreeSet::from([FinFun::identity(n)]);
    let gens: Vec<FinFun> = (0..rng.gen_range(0..=2))
        .map(|_| perms.choose(rng).expect("S_n is nonempty").clone())
        .collect();
    loop {
        let products: Vec<FinFun> = group
            .iter()
            .flat_map(|h| gens.iter().map(move |g| g.after(h).expect("same size")))
            .filter(|p| !group.contains(p))
            .collect();
        if products.is_empty() {
            return group.into_iter().collect();
        }
        group.extend(products);
    }
}

/// Elements of level `m` of the orbit functor, as lex-least orbit
/// representatives.
fn orbit_reps(group: &[FinFun], n: usize, m: usize) -> Vec<FinFun> {
    enumerate(FunKind::Inj, m, n)
        .into_iter()
        .filter(|i| group.iter().all(|h| &h.after(i).expect("composable") >= i))
        .collect()
}

fn orbit_rep(group: &[FinFun], i: &FinFun) -> FinFun {
    group
        .iter()
        .map(|h| h.after(i).expect("composable"))
        .min()
        .expect("group contains the identity")
}

/// A random valid coefficient functor on the window with every level of
/// size at most `max_size` and at least one nonempty level.
pub fn random_inj_coeff(rng: &mut impl Rng, window: usize, max_size: usize) -> InjCoeff {
    loop {
        if let Some(a) = try_random_inj_coeff(rng, window, max_size) {
            return a;
        }
    }
}

fn try_random_inj_coeff(rng: &mut impl Rng, window: usize, max_size: usize) -> Option<InjCoeff> {
    let summands: Vec<(usize, Vec<FinFun>)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let n = rng.gen_range(0..=window);
            (n, random_subgroup(rng, n))
        })
        .collect();
    // elements (summand, representative) per level
    let levels: Vec<Vec<(usize, FinFun)>> = (0..=window)
        .map(|m| {
            summands
                .iter()
                .enumerate()
                .flat_map(|(s, (n, h))| orbit_reps(h, *n, m).into_iter().map(move |r| (s, r)))
                .collect()
        })
        .collect();
    let offset: Vec<usize> = levels
        .iter()
        .scan(0, |acc, l| {
            let o = *acc;
            *acc += l.len();
            Some(o)
        })
        .collect();
    let total: usize = levels.iter().map(Vec::len).sum();
    if total == 0 {
        return None;
    }
    let act = |f: &FinFun, x: usize| -> usize {
        let (s, rep) = &levels[f.cod()][x];
        let image = orbit_rep(&summands[*s].1, &rep.after(f).expect("composable"));
        levels[f.dom()]
            .iter()
            .position(|(t, r)| t == s && *r == image)
            .expect("orbit representative is listed")
    };
    let injections = window_functions_of(FunKind::Inj, window);
    let mut uf = UnionFind::new(total);
    if rng.gen_bool(0.5) {
        let candidates: Vec<usize> = (0..=window).filter(|&m| levels[m].len() >= 2).collect();
        if let Some(&m) = candidates.choose(rng) {
            let x = rng.gen_range(0..levels[m].len());
            let y = rng.gen_range(0..levels[m].len());
            uf.union(offset[m] + x, offset[m] + y);
            close_congruence(&mut uf, &levels, &offset, &injections, &act);
        }
    }
    // classes per level, named by their first member
    let mut class_of: Vec<Vec<usize>> = Vec::with_capacity(window + 1);
    let mut sets: Vec<Vec<String>> = Vec::with_capacity(window + 1);
    for m in 0..=window {
        let mut roots: BTreeMap<usize, usize> = BTreeMap::new();
        let mut names = Vec::new();
        let mut classes = Vec::with_capacity(levels[m].len());
        for (x, (s, rep)) in levels[m].iter().enumerate() {
            let root = uf.find(offset[m] + x);
            let next = roots.len();
            let c = *roots.entry(root).or_insert_with(|| {
                names.push(format!("g{s}:{rep}"));
                next
            });
            classes.push(c);
        }
        if names.len() > max_size {
            return None;
        }
        class_of.push(classes);
        sets.push(names);
    }
    let first_member: Vec<Vec<usize>> = class_of
        .iter()
        .zip(&sets)
        .map(|(classes, names)| {
            (0..names.len())
                .map(|c| classes.iter().position(|&d| d == c).expect("class is inhabited"))
                .collect()
        })
        .collect();
    let a = InjCoeff::from_action(window, sets, |f, c| {
        class_of[f.dom()][act(f, first_member[f.cod()][c])]
    })
    .ok()?;
    debug_assert!(a.validate().is_ok());
    Some(a)
}

/// Merges `f·x` with `f·y` whenever `x ∼ y`, until nothing changes.
fn close_congruence(
    uf: &mut UnionFind,
    levels: &[Vec<(usize, FinFun)>],
    offset: &[usize],
    injections: &[FinFun],
    act: &impl Fn(&FinFun, usize) -> usize,
) {
    let mut changed = true;
    while changed {
        changed = false;
        for f in injections {
            let (n, m) = (f.dom(), f.cod());
            for x in 0..levels[m].len() {
                for y in x + 1..levels[m].len() {
                    if uf.find(offset[m] + x) == uf.find(offset[m] + y) {
                        changed |= uf.union(offset[n] + act(f, x), offset[n] + act(f, y));
                    }
                }
            }
        }
    }
}

/// A random natural transformation between random coefficient functors,
/// drawn uniformly from all transformations of a random pair that admits
/// one.
pub fn random_inj_nat(rng: &mut impl Rng, window: usize, max_size: usize) -> InjNat {
    loop {
        let a = random_inj_coeff(rng, window, max_size);
        let b = random_inj_coeff(rng, window, max_size);
        let nats = all_natural_transformations(&a, &b);
        if let Some(tau) = nats.choose(rng) {
            return tau.clone();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    #[test]
    fn random_coefficients_are_valid_and_bounded() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut distinct = BTreeSet::new();
        for _ in 0..40 {
            let a = random_inj_coeff(&mut rng, 3, 2);
            assert_eq!(a.validate(), Ok(()));
            assert!(a.sizes().iter().all(|&s| s <= 2));
            distinct.insert(a.sizes());
        }
        assert!(distinct.len() >= 4, "too little variety: {distinct:?}");
    }

    #[test]
    fn random_transformations_are_natural() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let tau = random_inj_nat(&mut rng, 3, 2);
            assert_eq!(tau.validate(), Ok(()));
        }
    }

    #[test]
    fn subgroups_are_closed() {
        let mut rng = StdRng::seed_from_u64(3);
        for n in 0..=3 {
            let g = random_subgroup(&mut rng, n);
            for a in &g {
                for b in &g {
                    assert!(g.contains(&a.after(b).unwrap()));
                }
            }
        }
    }
}
