//! Small finite groups as Cayley tables, plus a name lookup used by the CLI.

use crate::error::{Error, Result};
use crate::groups::{Group, GroupSpec};

fn table_group(labels: Vec<String>, mul: impl Fn(usize, usize) -> usize, gens: &[usize]) -> Group {
    let n = labels.len();
    let table = (0..n)
        .map(|a| (0..n).map(|b| mul(a, b)).collect())
        .collect();
    let generators = gens.iter().map(|&g| labels[g].clone()).collect();
    Group::from_spec(GroupSpec::CayleyTable {
        elements: labels,
        table,
        generators,
    })
    .expect("corpus tables are groups")
}

/// `Z_n` with labels `0..n-1`, generated by `1`.
pub fn cyclic(n: usize) -> Group {
    assert!(n >= 1);
    let labels = (0..n).map(|k| k.to_string()).collect();
    let gens: &[usize] = if n > 1 { &[1] } else { &[] };
    table_group(labels, |a, b| (a + b) % n, gens)
}

/// `Z_{m_1} x ... x Z_{m_k}` as a table with labels `(a,b,...)`.
pub fn abelian_table(moduli: &[usize]) -> Group {
    let order: usize = moduli.iter().product();
    let decode = |mut x: usize| {
        let mut v = vec![0; moduli.len()];
        for (slot, &m) in v.iter_mut().zip(moduli).rev() {
            *slot = x % m;
            x /= m;
        }
        v
    };
    let encode = |v: &[usize]| v.iter().zip(moduli).fold(0, |acc, (&c, &m)| acc * m + c);
    let labels = (0..order)
        .map(|x| {
            let parts: Vec<String> = decode(x).iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let gens: Vec<usize> = (0..moduli.len())
        .filter(|&i| moduli[i] > 1)
        .map(|i| {
            let mut v = vec![0; moduli.len()];
            v[i] = 1;
            encode(&v)
        })
        .collect();
    table_group(
        labels,
        |a, b| {
            let (x, y) = (decode(a), decode(b));
            let s: Vec<usize> = x
                .iter()
                .zip(&y)
                .zip(moduli)
                .map(|((p, q), m)| (p + q) % m)
                .collect();
            encode(&s)
        },
        &gens,
    )
}

/// Dihedral group of order `2n`: `r^k` is rotation, `sr^k` a reflection.
pub fn dihedral(n: usize) -> Group {
    assert!(n >= 2);
    let label = |refl: usize, k: usize| match (refl, k) {
        (0, 0) => "e".to_string(),
        (0, 1) => "r".to_string(),
        (0, k) => format!("r{k}"),
        (_, 0) => "s".to_string(),
        (_, 1) => "sr".to_string(),
        (_, k) => format!("sr{k}"),
    };
    let labels = (0..2 * n).map(|x| label(x / n, x % n)).collect();
    // s^a r^k * s^b r^l = s^(a+b) r^(l + (-1)^b k)
    let mul = |x: usize, y: usize| {
        let (a, k) = (x / n, x % n);
        let (b, l) = (y / n, y % n);
        let k = if b == 1 { (n - k) % n } else { k };
        ((a + b) % 2) * n + (k + l) % n
    };
    table_group(labels, mul, &[1, n])
}

/// Quaternion group with labels `1,-1,i,-i,j,-j,k,-k`, generated by `i, j`.
pub fn quaternion() -> Group {
    let labels: Vec<String> = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    // unit index u in {1,i,j,k} and sign; index = 2u + (sign < 0)
    const UNIT: [[(usize, bool); 4]; 4] = [
        [(0, false), (1, false), (2, false), (3, false)],
        [(1, false), (0, true), (3, false), (2, true)],
        [(2, false), (3, true), (0, true), (1, false)],
        [(3, false), (2, false), (1, true), (0, true)],
    ];
    let mul = |a: usize, b: usize| {
        let (u, v) = (a / 2, b / 2);
        let (w, neg) = UNIT[u][v];
        let sign = (a % 2 == 1) ^ (b % 2 == 1) ^ neg;
        2 * w + usize::from(sign)
    };
    table_group(labels, mul, &[2, 4])
}

fn cycle_label(p: &[usize]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push((x + 1).to_string());
            x = p[x];
        }
        out.push_str(&format!("({})", cycle.join(" ")));
    }
    if out.is_empty() {
        "()".to_string()
    } else {
        out
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn rec(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == cur.len() {
            out.push(cur.clone());
            return;
        }
        for i in k..cur.len() {
            cur.swap(k, i);
            rec(k + 1, cur, out);
            cur.swap(k, i);
        }
    }
    rec(0, &mut cur, &mut out);
    out.sort();
    out
}

fn is_even(p: &[usize]) -> bool {
    let inversions = (0..p.len())
        .flat_map(|i| (i + 1..p.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p[i] > p[j])
        .count();
    inversions % 2 == 0
}

fn permutation_group(perms: Vec<Vec<usize>>, gens: &[Vec<usize>]) -> Group {
    let labels: Vec<String> = perms.iter().map(|p| cycle_label(p)).collect();
    let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed");
    // (a * b)(x) = b(a(x)): apply a first
    let mul = |a: usize, b: usize| {
        let c: Vec<usize> = perms[a].iter().map(|&x| perms[b][x]).collect();
        index(&c)
    };
    let gens: Vec<usize> = gens.iter().map(index).collect();
    table_group(labels, mul, &gens)
}

/// Symmetric group on `n` points, generated by `(1 2)` and `(1 2 ... n)`.
pub fn symmetric(n: usize) -> Group {
    assert!(n >= 1);
    let perms = permutations(n);
    let mut gens = Vec::new();
    if n >= 2 {
        let mut t: Vec<usize> = (0..n).collect();
        t.swap(0, 1);
        gens.push(t);
    }
    if n >= 3 {
        gens.push((0..n).map(|i| (i + 1) % n).collect());
    }
    permutation_group(perms, &gens)
}

/// Alternating group on `n >= 3` points, generated by `(1 2 k)`, `k = 3..n`.
pub fn alternating(n: usize) -> Group {
    assert!(n >= 3);
    let perms: Vec<Vec<usize>> = permutations(n).into_iter().filter(|p| is_even(p)).collect();
    let gens: Vec<Vec<usize>> = (2..n)
        .map(|k| {
            let mut p: Vec<usize> = (0..n).collect();
            p[0] = 1;
            p[1] = k;
            p[k] = 0;
            p
        })
        .collect();
    permutation_group(perms, &gens)
}

/// Direct product of two finite groups as a table, labels `(a,b)`.
pub fn direct_product(g: &Group, h: &Group) -> Result<Group> {
    let (f, k) = (g.finite()?, h.finite()?);
    let (n, m) = (f.order(), k.order());
    let labels = (0..n * m)
        .map(|x| format!("({},{})", f.label((x / m) as u32), k.label((x % m) as u32)))
        .collect();
    let mut gens: Vec<usize> = f
        .generating_set()
        .iter()
        .map(|&a| a as usize * m + k.identity() as usize)
        .collect();
    gens.extend(
        k.generating_set()
            .iter()
            .map(|&b| f.identity() as usize * m + b as usize),
    );
    gens.retain(|&x| x != f.identity() as usize * m + k.identity() as usize);
    gens.dedup();
    Ok(table_group(
        labels,
        |x, y| {
            let a = f.mul((x / m) as u32, (y / m) as u32) as usize;
            let b = k.mul((x % m) as u32, (y % m) as u32) as usize;
            a * m + b
        },
        &gens,
    ))
}

/// Re-expresses any finite backend as a Cayley table with the same
/// distinguished generators.
pub fn as_table(g: &Group) -> Result<Group> {
    if g.is_table() {
        return Ok(g.clone());
    }
    let f = g.finite()?;
    let n = f.order();
    let labels = f.labels().to_vec();
    let table = (0..n as u32)
        .map(|a| (0..n as u32).map(|b| f.mul(a, b) as usize).collect())
        .collect();
    let generators = f
        .generators()
        .iter()
        .map(|&i| labels[i as usize].clone())
        .collect();
    Group::from_spec(GroupSpec::CayleyTable {
        elements: labels,
        table,
        generators,
    })
}

pub fn modular_heisenberg(k: usize, m: u64) -> Group {
    Group::from_spec(GroupSpec::heisenberg(k, Some(m))).expect("valid heisenberg parameters")
}

/// The finite test corpus: name and group.
pub fn finite_corpus() -> Vec<(String, Group)> {
    let mut out: Vec<(String, Group)> = Vec::new();
    for n in [2, 3, 4, 5, 6, 7, 8, 9, 12] {
        out.push((format!("Z{n}"), cyclic(n)));
    }
    for n in 3..=6 {
        out.push((format!("D{n}"), dihedral(n)));
    }
    out.push(("Q8".into(), quaternion()));
    out.push(("S3".into(), symmetric(3)));
    out.push(("S4".into(), symmetric(4)));
    out.push(("A4".into(), alternating(4)));
    out.push(("Z2xZ4".into(), abelian_table(&[2, 4])));
    out.push(("Z2xZ2".into(), abelian_table(&[2, 2])));
    out.push(("Z3xZ3".into(), abelian_table(&[3, 3])));
    out.push(("H1_2".into(), modular_heisenberg(1, 2)));
    out.push(("H1_3".into(), modular_heisenberg(1, 3)));
    out
}

fn parse_num<T: std::str::FromStr>(s: &str, name: &str) -> Result<T> {
    s.parse()
        .map_err(|_| Error::InvalidSpec(format!("unknown builtin group {name:?}")))
}

/// Looks up a group by name: `Z<n>`, `Z2xZ4`, `D<n>` (order 2n), `Q8`,
/// `S<n>`, `A<n>`, `H<k>` (integer Heisenberg), `H<k>_<m>` (modular),
/// `F2_<c>` (free nilpotent of class c).
pub fn builtin(name: &str) -> Result<Group> {
    let unknown = || Error::InvalidSpec(format!("unknown builtin group {name:?}"));
    if name == "Q8" {
        return Ok(quaternion());
    }
    if name.contains('x') {
        let moduli = name
            .split('x')
            .map(|p| {
                p.strip_prefix('Z')
                    .ok_or_else(unknown)
                    .and_then(|m| parse_num::<usize>(m, name))
            })
            .collect::<Result<Vec<_>>>()?;
        if moduli.iter().any(|&m| m < 1) || moduli.iter().product::<usize>() > 4096 {
            return Err(unknown());
        }
        return Ok(abelian_table(&moduli));
    }
    if let Some(c) = name.strip_prefix("F2_") {
        return Group::from_spec(GroupSpec::free_nilpotent(parse_num(c, name)?));
    }
    let (head, rest) = name.split_at(name.chars().next().map_or(0, char::len_utf8));
    match head {
        "Z" => {
            let n: usize = parse_num(rest, name)?;
            if n == 0 || n > 4096 {
                return Err(unknown());
            }
            Ok(cyclic(n))
        }
        "D" => {
            let n: usize = parse_num(rest, name)?;
            if !(2..=2048).contains(&n) {
                return Err(unknown());
            }
            Ok(dihedral(n))
        }
        "S" => {
            let n: usize = parse_num(rest, name)?;
            if !(1..=6).contains(&n) {
                return Err(unknown());
            }
            Ok(symmetric(n))
        }
        "A" => {
            let n: usize = parse_num(rest, name)?;
            if !(3..=6).contains(&n) {
                return Err(unknown());
            }
            Ok(alternating(n))
        }
        "H" => match rest.split_once('_') {
            Some((k, m)) => Group::from_spec(GroupSpec::heisenberg(
                parse_num(k, name)?,
                Some(parse_num(m, name)?),
            )),
            None => Group::from_spec(GroupSpec::heisenberg(parse_num(rest, name)?, None)),
        },
        _ => Err(unknown()),
    }
}
