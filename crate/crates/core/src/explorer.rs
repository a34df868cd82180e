//! Exhaustive Nielsen and Andrews-Curtis graphs of finite groups.
//!
//! A tuple `(g_1, ..., g_n)` of table indices is encoded as the mixed-radix
//! key `sum g_i |G|^(n-1-i)`, so key order is lexicographic order on
//! tuples. Vertices live in a dense union-find over the whole key space;
//! edges are generated on the fly and never stored.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::groups::{FiniteGroup, Group, GroupElement, Tuple};
use crate::moves::{
    Certificate, CertificateKind, Conjugator, Move, MoveSequence, Step, StepOrigin,
};
use crate::structure::{is_class_c, rank_and_weight, WordTree};
use crate::words::{Letter, Word};

/// Largest tuple length handled by the explorer.
pub const MAX_TUPLE_LEN: usize = 32;

/// Above this order, AC mode with the default conjugator set conjugates by a
/// generating set instead of every element; the components are the same.
pub const FULL_CONJUGATION_THRESHOLD: usize = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Nielsen,
    Ac,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Nielsen => "nielsen",
            Mode::Ac => "ac",
        }
    }

    pub fn parse(s: &str) -> Result<Mode> {
        match s {
            "nielsen" => Ok(Mode::Nielsen),
            "ac" => Ok(Mode::Ac),
            other => Err(Error::InvalidSpec(format!("unknown mode {other:?}"))),
        }
    }

    fn kind(self) -> CertificateKind {
        match self {
            Mode::Nielsen => CertificateKind::Nielsen,
            Mode::Ac => CertificateKind::Ac,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest key space `|G|^n`.
    pub max_vertices: u64,
    /// Largest estimated working memory in bytes.
    pub max_bytes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_vertices: 10_000_000,
            max_bytes: 1 << 30,
        }
    }
}

/// Bytes of dense state per key: union-find parent, component id, membership.
const BYTES_PER_KEY: u64 = 9;

#[derive(Clone, Debug)]
pub struct GraphQuery {
    pub group: Group,
    pub n: usize,
    pub mode: Mode,
    /// AC conjugator set `S`; `None` means the whole group.
    pub conjugators: Option<Vec<GroupElement>>,
    pub budget: Budget,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl GraphQuery {
    pub fn new(group: &Group, n: usize, mode: Mode) -> GraphQuery {
        GraphQuery {
            group: group.clone(),
            n,
            mode,
            conjugators: None,
            budget: Budget::default(),
            workers: None,
        }
    }

    pub fn with_conjugators(mut self, s: Vec<GroupElement>) -> GraphQuery {
        self.conjugators = Some(s);
        self
    }

    pub fn with_budget(mut self, budget: Budget) -> GraphQuery {
        self.budget = budget;
        self
    }

    pub fn with_workers(mut self, workers: usize) -> GraphQuery {
        self.workers = Some(workers);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum MoveDesc {
    R(usize, usize, i8),
    L(usize, usize, i8),
    I(usize),
    /// Conjugate entry `i` by the element with this table index.
    Conj(usize, u32),
}

/// Prepared graph: table, encoding and move list.
struct Graph<'a> {
    group: &'a Group,
    f: &'a FiniteGroup,
    n: usize,
    order: u64,
    pow: Vec<u64>,
    keys: u64,
    mode: Mode,
    moves: Vec<MoveDesc>,
    notes: Vec<String>,
}

fn run_in_pool<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(job()),
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidSpec(format!("cannot start worker pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

impl<'a> Graph<'a> {
    fn new(q: &'a GraphQuery) -> Result<Graph<'a>> {
        let f = q.group.finite()?;
        if q.n == 0 {
            return Err(Error::InvalidSpec(
                "tuple length n must be at least 1".into(),
            ));
        }
        if q.n > MAX_TUPLE_LEN {
            return Err(Error::Unsupported(format!(
                "tuple length {} above {MAX_TUPLE_LEN}",
                q.n
            )));
        }
        let order = f.order() as u64;
        let keys = order
            .checked_pow(q.n as u32)
            .filter(|&k| k <= u64::from(u32::MAX))
            .ok_or(Error::BudgetExceeded {
                what: "vertex keys".into(),
                required: u64::MAX,
                limit: q.budget.max_vertices,
            })?;
        if keys > q.budget.max_vertices {
            return Err(Error::BudgetExceeded {
                what: "vertex keys".into(),
                required: keys,
                limit: q.budget.max_vertices,
            });
        }
        let bytes = keys.saturating_mul(BYTES_PER_KEY);
        if bytes > q.budget.max_bytes {
            return Err(Error::BudgetExceeded {
                what: "memory bytes".into(),
                required: bytes,
                limit: q.budget.max_bytes,
            });
        }
        let pow: Vec<u64> = (0..q.n).map(|i| order.pow((q.n - 1 - i) as u32)).collect();

        let mut notes = Vec::new();
        let mut moves = Vec::new();
        for i in 0..q.n {
            for j in 0..q.n {
                if i != j {
                    for s in [1, -1] {
                        moves.push(MoveDesc::R(i, j, s));
                        moves.push(MoveDesc::L(i, j, s));
                    }
                }
            }
        }
        for j in 0..q.n {
            moves.push(MoveDesc::I(j));
        }
        if q.mode == Mode::Ac {
            let base: Vec<u32> = match &q.conjugators {
                Some(s) => s
                    .iter()
                    .map(|e| q.group.index_of(e))
                    .collect::<Result<_>>()?,
                None if f.order() > FULL_CONJUGATION_THRESHOLD => {
                    notes.push(format!(
                        "conjugating by a generating set of size {} instead of all {} elements",
                        f.generating_set().len(),
                        f.order()
                    ));
                    f.generating_set()
                }
                None => (0..f.order() as u32).collect(),
            };
            let mut conj: Vec<u32> = base.iter().flat_map(|&s| [s, f.inv(s)]).collect();
            conj.sort_unstable();
            conj.dedup();
            conj.retain(|&s| s != f.identity());
            for i in 0..q.n {
                for &s in &conj {
                    moves.push(MoveDesc::Conj(i, s));
                }
            }
        }
        Ok(Graph {
            group: &q.group,
            f,
            n: q.n,
            order,
            pow,
            keys,
            mode: q.mode,
            moves,
            notes,
        })
    }

    fn decode(&self, mut key: u64, out: &mut [u32]) {
        for slot in out.iter_mut().rev() {
            *slot = (key % self.order) as u32;
            key /= self.order;
        }
    }

    fn encode(&self, idx: &[u32]) -> u64 {
        idx.iter()
            .fold(0, |acc, &x| acc * self.order + u64::from(x))
    }

    fn tuple_of(&self, key: u64) -> Result<Tuple> {
        let mut idx = vec![0u32; self.n];
        self.decode(key, &mut idx);
        Tuple::from_indices(self.group, &idx)
    }

    fn key_of(&self, t: &Tuple) -> Result<u64> {
        if t.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: t.len(),
            });
        }
        if t.group() != self.group {
            return Err(Error::BackendMismatch(
                "tuple belongs to another group".into(),
            ));
        }
        Ok(self.encode(&t.indices()?))
    }

    /// Neighbor key under one move.
    fn apply(&self, key: u64, idx: &[u32], m: MoveDesc) -> u64 {
        let f = self.f;
        let (slot, new) = match m {
            MoveDesc::R(i, j, s) => {
                let y = if s > 0 { idx[j] } else { f.inv(idx[j]) };
                (i, f.mul(idx[i], y))
            }
            MoveDesc::L(i, j, s) => {
                let y = if s > 0 { idx[j] } else { f.inv(idx[j]) };
                (i, f.mul(y, idx[i]))
            }
            MoveDesc::I(j) => (j, f.inv(idx[j])),
            MoveDesc::Conj(i, s) => (i, f.conjugate(idx[i], s)),
        };
        key - u64::from(idx[slot]) * self.pow[slot] + u64::from(new) * self.pow[slot]
    }

    fn is_member_set(&self, set: &[u32]) -> bool {
        let count = match self.mode {
            Mode::Nielsen => self.f.closure(set).count(),
            Mode::Ac => self.f.normal_closure(set).count(),
        };
        count == self.f.order()
    }

    /// Membership of every key, memoised over sorted entry multisets.
    fn membership(&self) -> Vec<bool> {
        let n = self.n;
        let mut multisets = Vec::new();
        let mut cur = vec![0u32; n];
        'outer: loop {
            multisets.push(self.encode(&cur));
            let mut pos = n;
            loop {
                if pos == 0 {
                    break 'outer;
                }
                pos -= 1;
                if u64::from(cur[pos]) + 1 < self.order {
                    let v = cur[pos] + 1;
                    for slot in cur[pos..].iter_mut() {
                        *slot = v;
                    }
                    break;
                }
            }
        }
        let memo: HashMap<u64, bool> = multisets
            .par_iter()
            .map(|&k| {
                let mut idx = vec![0u32; n];
                self.decode(k, &mut idx);
                idx.dedup();
                (k, self.is_member_set(&idx))
            })
            .collect();
        (0..self.keys)
            .into_par_iter()
            .map_init(
                || vec![0u32; n],
                |idx, k| {
                    self.decode(k, idx);
                    idx.sort_unstable();
                    memo[&self.encode(idx)]
                },
            )
            .collect()
    }

    fn is_member(&self, key: u64) -> bool {
        let mut idx = vec![0u32; self.n];
        self.decode(key, &mut idx);
        idx.sort_unstable();
        idx.dedup();
        self.is_member_set(&idx)
    }

    /// Turns a move descriptor into a portable [`Move`].
    fn to_move(&self, m: MoveDesc, words: &mut Option<WordTree>) -> Move {
        match m {
            MoveDesc::R(i, j, s) => Move::r(i + 1, j + 1, s),
            MoveDesc::L(i, j, s) => Move::l(i + 1, j + 1, s),
            MoveDesc::I(j) => Move::inv(j + 1),
            MoveDesc::Conj(i, s) => Move::ac(i + 1, conjugator_for(self.f, s, words), 1),
        }
    }
}

/// A word over the distinguished generators for table index `s`, or the
/// element itself when the generators do not reach it.
fn conjugator_for(f: &FiniteGroup, s: u32, words: &mut Option<WordTree>) -> Conjugator {
    let gens = f.generators();
    let tree = words.get_or_insert_with(|| WordTree::new(f, gens));
    match tree.path(s) {
        Some(path) if !gens.is_empty() => {
            let letters = path.into_iter().map(|k| Letter::new(k + 1, 1)).collect();
            Conjugator::Word(Word::from_letters(gens.len(), letters).expect("indices in range"))
        }
        _ => Conjugator::Element(f.element(s).clone()),
    }
}

/// Public form of [`conjugator_for`] for callers holding an element.
pub fn portable_conjugator(group: &Group, s: &GroupElement) -> Result<Conjugator> {
    let f = group.finite()?;
    let mut words = None;
    Ok(conjugator_for(f, group.index_of(s)?, &mut words))
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    /// The smaller root wins, so every root is its component's least key.
    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb as usize] = ra;
        } else if rb < ra {
            self.parent[ra as usize] = rb;
        }
    }
}

/// Partition of the vertex set into connected components.
#[derive(Clone, Debug)]
pub struct ComponentsReport {
    pub group: Group,
    pub n: usize,
    pub mode: Mode,
    pub vertex_count: u64,
    pub component_count: u64,
    /// Lexicographically least tuple of each component, in increasing order.
    pub representatives: Vec<Tuple>,
    pub sizes: Vec<u64>,
    pub notes: Vec<String>,
    component: Vec<u32>,
    order: u64,
}

const NOT_A_VERTEX: u32 = u32::MAX;

impl ComponentsReport {
    /// Component index of a tuple, or `None` if it is not a vertex.
    pub fn component_of(&self, t: &Tuple) -> Result<Option<usize>> {
        if t.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: t.len(),
            });
        }
        let key = t
            .indices()?
            .iter()
            .fold(0u64, |acc, &x| acc * self.order + u64::from(x));
        Ok(self.component_of_key(key))
    }

    fn component_of_key(&self, key: u64) -> Option<usize> {
        match self.component[key as usize] {
            NOT_A_VERTEX => None,
            c => Some(c as usize),
        }
    }

    /// Every vertex with its component index, in key order.
    pub fn vertices(&self) -> impl Iterator<Item = (u64, usize)> + '_ {
        self.component
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != NOT_A_VERTEX)
            .map(|(k, &c)| (k as u64, c as usize))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "group": self.group.spec().to_json_value(),
            "n": self.n,
            "mode": self.mode.as_str(),
            "vertex_count": self.vertex_count,
            "component_count": self.component_count,
            "representatives": self.representatives.iter().map(Tuple::to_json).collect::<Vec<_>>(),
            "component_sizes": self.sizes,
            "notes": self.notes,
        })
    }
}

const EDGE_BATCH: usize = 1 << 15;

/// Exact component partition of the Nielsen or AC graph.
pub fn components(q: &GraphQuery) -> Result<ComponentsReport> {
    let graph = Graph::new(q)?;
    run_in_pool(q.workers, || components_in(&graph))?
}

fn components_in(graph: &Graph<'_>) -> Result<ComponentsReport> {
    let member = graph.membership();
    let vertices: Vec<u32> = (0..graph.keys as u32)
        .filter(|&k| member[k as usize])
        .collect();
    let mut uf = UnionFind::new(graph.keys as usize);
    for batch in vertices.chunks(EDGE_BATCH) {
        let edges: Vec<(u32, u32)> = batch
            .par_iter()
            .map_init(
                || vec![0u32; graph.n],
                |idx, &k| {
                    graph.decode(u64::from(k), idx);
                    let mut out = Vec::new();
                    for &m in &graph.moves {
                        let nb = graph.apply(u64::from(k), idx, m) as u32;
                        // Every move has an inverse move, so each edge is
                        // seen from both ends; keep one orientation.
                        if nb < k {
                            out.push((k, nb));
                        }
                    }
                    out
                },
            )
            .flatten_iter()
            .collect();
        for (a, b) in edges {
            uf.union(a, b);
        }
    }
    let mut component = vec![NOT_A_VERTEX; graph.keys as usize];
    let mut representatives = Vec::new();
    let mut sizes: Vec<u64> = Vec::new();
    for &k in &vertices {
        let root = uf.find(k);
        let id = if root == k {
            representatives.push(graph.tuple_of(u64::from(k))?);
            sizes.push(0);
            (representatives.len() - 1) as u32
        } else {
            component[root as usize]
        };
        component[k as usize] = id;
        sizes[id as usize] += 1;
    }
    Ok(ComponentsReport {
        group: graph.group.clone(),
        n: graph.n,
        mode: graph.mode,
        vertex_count: vertices.len() as u64,
        component_count: representatives.len() as u64,
        representatives,
        sizes,
        notes: graph.notes.clone(),
        component,
        order: graph.order,
    })
}

/// Shortest certificate from `from` to `to`, or `None` if they lie in
/// different components.
pub fn find_path(q: &GraphQuery, from: &Tuple, to: &Tuple) -> Result<Option<Certificate>> {
    let graph = Graph::new(q)?;
    let (src, dst) = (graph.key_of(from)?, graph.key_of(to)?);
    if !graph.is_member(src) || !graph.is_member(dst) {
        return Err(Error::NotAVertex);
    }
    let mut parent: HashMap<u64, (u64, usize)> = HashMap::new();
    let mut queue = VecDeque::from([src]);
    let mut found = src == dst;
    let mut idx = vec![0u32; graph.n];
    while let Some(k) = queue.pop_front() {
        if found {
            break;
        }
        graph.decode(k, &mut idx);
        for (mi, &m) in graph.moves.iter().enumerate() {
            let nb = graph.apply(k, &idx, m);
            if nb == src || parent.contains_key(&nb) {
                continue;
            }
            parent.insert(nb, (k, mi));
            if nb == dst {
                found = true;
                break;
            }
            queue.push_back(nb);
        }
    }
    if !found {
        return Ok(None);
    }
    let mut path = Vec::new();
    let mut cur = dst;
    while cur != src {
        let (p, mi) = parent[&cur];
        path.push(graph.moves[mi]);
        cur = p;
    }
    path.reverse();
    let mut words = None;
    let moves: Vec<Move> = path
        .into_iter()
        .map(|m| graph.to_move(m, &mut words))
        .collect();
    let ms = MoveSequence::new(graph.n, moves)?;
    let steps = vec![Step {
        origin: StepOrigin::Search,
        label: "breadth-first search".into(),
        moves: ms.len(),
    }];
    Certificate::new(q.mode.kind(), from.clone(), to.clone(), ms, steps).map(Some)
}

#[derive(Clone, Debug)]
pub struct PreimageReport {
    pub holds: bool,
    /// Every component of the group maps into one component of `Ab(G)`.
    pub well_defined: bool,
    /// Distinct components map to distinct components.
    pub injective: bool,
    /// Every component of `Ab(G)` is hit.
    pub surjective: bool,
    pub group_components: u64,
    pub abelian_components: u64,
    pub group_vertices: u64,
    pub weight: usize,
    pub class_c: bool,
    /// `n >= max(w(G), 2)`.
    pub finite_group_hypothesis: bool,
    /// Class C and `n >= w(G)`.
    pub class_c_hypothesis: bool,
    pub notes: Vec<String>,
}

impl PreimageReport {
    pub fn to_json(&self) -> Value {
        json!({
            "holds": self.holds,
            "well_defined": self.well_defined,
            "injective": self.injective,
            "surjective": self.surjective,
            "group_components": self.group_components,
            "abelian_components": self.abelian_components,
            "group_vertices": self.group_vertices,
            "weight": self.weight,
            "class_c": self.class_c,
            "hypotheses": {
                "finite_group_n_at_least_max_weight_2": self.finite_group_hypothesis,
                "class_c_n_at_least_weight": self.class_c_hypothesis,
            },
            "notes": self.notes,
        })
    }
}

/// Checks that the components of the AC graph of `G` are exactly the
/// preimages of the components of the AC graph of `Ab(G)`.
pub fn verify_preimage_theorem(g: &Group, n: usize, budget: Budget) -> Result<PreimageReport> {
    let q = GraphQuery::new(g, n, Mode::Ac).with_budget(budget);
    let upstairs = components(&q)?;
    let ab = g.abelianization()?;
    let target = ab.target().clone();
    let qa = GraphQuery::new(&target, n, Mode::Ac).with_budget(budget);
    let downstairs = components(&qa)?;

    let f = g.finite()?;
    let fa = target.finite()?;
    let image: Vec<u32> = (0..f.order() as u32)
        .map(|a| target.index_of(&ab.project(f.element(a))?))
        .collect::<Result<_>>()?;
    let mut assigned: Vec<Option<usize>> = vec![None; upstairs.component_count as usize];
    let mut well_defined = true;
    let mut idx = vec![0u32; n];
    for (key, c) in upstairs.vertices() {
        let mut k = key;
        for slot in idx.iter_mut().rev() {
            *slot = (k % f.order() as u64) as u32;
            k /= f.order() as u64;
        }
        let akey = idx.iter().fold(0u64, |acc, &x| {
            acc * fa.order() as u64 + u64::from(image[x as usize])
        });
        let Some(d) = downstairs.component_of_key(akey) else {
            well_defined = false;
            continue;
        };
        match assigned[c] {
            None => assigned[c] = Some(d),
            Some(prev) if prev != d => well_defined = false,
            _ => {}
        }
    }
    let mut hit: Vec<usize> = assigned.iter().flatten().copied().collect();
    let total = hit.len();
    hit.sort_unstable();
    hit.dedup();
    let injective = hit.len() == total;
    let surjective = hit.len() as u64 == downstairs.component_count;

    let (_, weight) = rank_and_weight(g)?;
    let class_c = is_class_c(g)?;
    let finite_group_hypothesis = n >= weight.max(2);
    let class_c_hypothesis = class_c && n >= weight;
    let mut notes = upstairs.notes.clone();
    if !finite_group_hypothesis && !class_c_hypothesis {
        notes.push("n is outside the hypotheses of both preimage theorems".into());
    }
    Ok(PreimageReport {
        holds: well_defined && injective,
        well_defined,
        injective,
        surjective,
        group_components: upstairs.component_count,
        abelian_components: downstairs.component_count,
        group_vertices: upstairs.vertex_count,
        weight,
        class_c,
        finite_group_hypothesis,
        class_c_hypothesis,
        notes,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Dot,
    Json,
}

/// Vertex and edge lists of the graph (loops and parallel edges removed),
/// each edge labelled with the first move, in move order, joining its ends.
pub fn export_graph(q: &GraphQuery, format: ExportFormat) -> Result<String> {
    let graph = Graph::new(q)?;
    let member = run_in_pool(q.workers, || graph.membership())?;
    let vertices: Vec<u64> = (0..graph.keys).filter(|&k| member[k as usize]).collect();
    let id: HashMap<u64, usize> = vertices.iter().enumerate().map(|(i, &k)| (k, i)).collect();
    let mut edges: Vec<(usize, usize, Move)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut words = None;
    let mut idx = vec![0u32; graph.n];
    for &k in &vertices {
        graph.decode(k, &mut idx);
        for &m in &graph.moves {
            let nb = graph.apply(k, &idx, m);
            if nb > k && seen.insert((k, nb)) {
                edges.push((id[&k], id[&nb], graph.to_move(m, &mut words)));
            }
        }
    }
    let tuples: Vec<Tuple> = vertices
        .iter()
        .map(|&k| graph.tuple_of(k))
        .collect::<Result<_>>()?;
    Ok(match format {
        ExportFormat::Json => {
            let doc = json!({
                "group": q.group.spec().to_json_value(),
                "n": q.n,
                "mode": q.mode.as_str(),
                "vertex_count": vertices.len(),
                "edge_count": edges.len(),
                "vertices": tuples.iter().enumerate()
                    .map(|(i, t)| json!({"id": i, "tuple": t.to_json()}))
                    .collect::<Vec<_>>(),
                "edges": edges.iter()
                    .map(|(a, b, m)| json!({"source": a, "target": b, "move": m.to_json(&q.group)}))
                    .collect::<Vec<_>>(),
                "notes": graph.notes,
            });
            serde_json::to_string_pretty(&doc).expect("graph serializes")
        }
        ExportFormat::Dot => {
            let mut out = format!("graph {} {{\n", q.mode.as_str());
            for (i, t) in tuples.iter().enumerate() {
                out.push_str(&format!(
                    "  {i} [label=\"{}\"];\n",
                    t.to_string().replace('"', "\\\"")
                ));
            }
            for (a, b, m) in &edges {
                out.push_str(&format!("  {a} -- {b} [label=\"{m}\"];\n"));
            }
            out.push_str("}\n");
            out
        }
    })
}
