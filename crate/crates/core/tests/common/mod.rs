#![allow(dead_code)]

use cosan::FinFun;

pub fn ff(s: &str) -> FinFun {
    s.parse().expect("valid function literal")
}

/// Stirling numbers of the second kind from `S(k, n) = n·S(k−1, n) + S(k−1, n−1)`.
pub fn stirling2(k: usize, n: usize) -> u64 {
    let mut row = vec![0u64; n + 1];
    row[0] = 1;
    for _ in 0..k {
        for j in (0..=n).rev() {
            row[j] = if j == 0 { 0 } else { j as u64 * row[j] + row[j - 1] };
        }
    }
    row[n]
}

pub fn binomial(k: usize, n: usize) -> u64 {
    if n > k {
        return 0;
    }
    (0..n).fold(1u64, |acc, i| acc * (k - i) as u64 / (i + 1) as u64)
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Every value sequence of length `m` over `1..=n`, by counting in base `n`.
pub fn all_sequences(m: usize, n: usize) -> Vec<Vec<usize>> {
    if m > 0 && n == 0 {
        return vec![];
    }
    let total = n.pow(m as u32);
    (0..total)
        .map(|mut r| {
            let mut v = vec![0; m];
            for slot in v.iter_mut().rev() {
                *slot = r % n + 1;
                r /= n;
            }
            v
        })
        .collect()
}

pub fn is_onto(values: &[usize], n: usize) -> bool {
    (1..=n).all(|y| values.contains(&y))
}

pub fn is_one_to_one(values: &[usize]) -> bool {
    let mut seen = values.to_vec();
    seen.sort_unstable();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// Inverse image of a subset as a sorted list.
pub fn preimage(f: &FinFun, subset: &[usize]) -> Vec<usize> {
    (1..=f.dom()).filter(|&i| subset.contains(&f.apply(i))).collect()
}

/// Direct image of a subset as a sorted list.
pub fn direct_image(f: &FinFun, subset: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = subset.iter().map(|&i| f.apply(i)).collect();
    out.sort_unstable();
    out.dedup();
    out
}
