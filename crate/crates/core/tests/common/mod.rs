//! Brute-force oracles shared by the integration tests. They work on raw
//! table indices and never call the explorer.

#![allow(dead_code)]

use nielsen_core::groups::FiniteGroup;
use std::collections::HashMap;

fn find(parent: &mut [usize], mut a: usize) -> usize {
    while parent[a] != a {
        parent[a] = parent[parent[a]];
        a = parent[a];
    }
    a
}

fn all_tuples(order: usize, n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..order as u32).map(move |a| {
                    let mut u = t.clone();
                    u.push(a);
                    u
                })
            })
            .collect();
    }
    out
}

/// Neighbours of `t` under R, L, I and, if `ac`, conjugation by every element.
pub fn neighbours(f: &FiniteGroup, t: &[u32], ac: bool) -> Vec<Vec<u32>> {
    let n = t.len();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for b in [t[j], f.inv(t[j])] {
                let mut u = t.to_vec();
                u[i] = f.mul(t[i], b);
                out.push(u.clone());
                u[i] = f.mul(b, t[i]);
                out.push(u);
            }
        }
        let mut u = t.to_vec();
        u[i] = f.inv(t[i]);
        out.push(u);
        if ac {
            for s in 0..f.order() as u32 {
                let mut u = t.to_vec();
                u[i] = f.mul(f.mul(f.inv(s), t[i]), s);
                out.push(u);
            }
        }
    }
    out
}

/// Component labelling of the (normally) generating `n`-tuples.
pub struct Oracle {
    pub vertices: Vec<Vec<u32>>,
    pub label: HashMap<Vec<u32>, usize>,
    pub components: usize,
}

pub fn components(f: &FiniteGroup, n: usize, ac: bool) -> Oracle {
    let order = f.order();
    let vertices: Vec<Vec<u32>> = all_tuples(order, n)
        .into_iter()
        .filter(|t| {
            let span = if ac {
                f.normal_closure(t)
            } else {
                f.closure(t)
            };
            span.count() == order
        })
        .collect();
    let index: HashMap<Vec<u32>, usize> = vertices
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, t)| (t, i))
        .collect();
    let mut parent: Vec<usize> = (0..vertices.len()).collect();
    for (i, t) in vertices.iter().enumerate() {
        for u in neighbours(f, t, ac) {
            let j = index[&u];
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut roots = HashMap::new();
    let mut label = HashMap::new();
    for (i, t) in vertices.iter().enumerate() {
        let r = find(&mut parent, i);
        let next = roots.len();
        let c = *roots.entry(r).or_insert(next);
        label.insert(t.clone(), c);
    }
    Oracle {
        components: roots.len(),
        vertices,
        label,
    }
}

/// Lower central series reaches the identity.
pub fn nilpotent_by_series(f: &FiniteGroup) -> bool {
    let all: Vec<u32> = (0..f.order() as u32).collect();
    let mut current = all.clone();
    loop {
        let mut gens = Vec::new();
        for &a in &current {
            for &g in &all {
                gens.push(f.mul(f.mul(f.inv(a), f.inv(g)), f.mul(a, g)));
            }
        }
        gens.sort_unstable();
        gens.dedup();
        let span = f.closure(&gens);
        let next: Vec<u32> = (0..f.order() as u32)
            .filter(|&x| span.contains(x))
            .collect();
        if next.len() == 1 {
            return true;
        }
        if next.len() == current.len() {
            return false;
        }
        current = next;
    }
}

/// Euler's totient by trial division.
pub fn phi(m: u64) -> u64 {
    (1..=m).filter(|&k| gcd(k, m) == 1).count() as u64
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
