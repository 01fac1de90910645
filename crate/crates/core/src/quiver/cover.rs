use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Arrow, Quiver, QuiverProblem};
use crate::arith::{int, IntVec};
use crate::component::RhoMap;
use crate::error::{Error, Result};
use crate::matrix::{rank, IntMatrix};

/// A character of `𝒯`.
pub type Grade = Vec<i64>;

/// Enumeration stops with `TooLarge` past this many connected supports.
const MAX_SUPPORTS: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoverEntry {
    pub vertex: usize,
    pub grade: Grade,
    pub mult: u64,
}

/// A dimension vector on `Q̂` with finite support, stored as its nonzero
/// entries sorted by `(vertex, grade)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CoverVector {
    entries: Vec<CoverEntry>,
}

impl CoverVector {
    pub fn new(entries: Vec<CoverEntry>) -> Self {
        let mut map: BTreeMap<(usize, Grade), u64> = BTreeMap::new();
        for e in entries {
            *map.entry((e.vertex, e.grade)).or_default() += e.mult;
        }
        CoverVector {
            entries: map
                .into_iter()
                .filter(|(_, m)| *m > 0)
                .map(|((vertex, grade), mult)| CoverEntry { vertex, grade, mult })
                .collect(),
        }
    }

    pub fn from_triples(triples: &[(usize, &[i64], u64)]) -> Self {
        CoverVector::new(
            triples
                .iter()
                .map(|(v, g, m)| CoverEntry { vertex: *v, grade: g.to_vec(), mult: *m })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[CoverEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, vertex: usize, grade: &[i64]) -> u64 {
        self.entries
            .iter()
            .find(|e| e.vertex == vertex && e.grade == grade)
            .map_or(0, |e| e.mult)
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.mult).sum()
    }

    /// `(Σ_χ β_{i,χ})_i`.
    pub fn alpha(&self, vertex_count: usize) -> Vec<u64> {
        let mut out = vec![0; vertex_count];
        for e in &self.entries {
            out[e.vertex] += e.mult;
        }
        out
    }

    pub fn support(&self) -> Vec<(usize, Grade)> {
        self.entries.iter().map(|e| (e.vertex, e.grade.clone())).collect()
    }

    /// `ξ.β`: shifts every grade by `-ξ`, so that `(ξ.β)_{i,χ} = β_{i,χ+ξ}`.
    pub fn translate(&self, xi: &[i64]) -> Self {
        CoverVector::new(
            self.entries
                .iter()
                .map(|e| CoverEntry {
                    vertex: e.vertex,
                    grade: e.grade.iter().zip(xi).map(|(g, x)| g - x).collect(),
                    mult: e.mult,
                })
                .collect(),
        )
    }

    /// The translate whose lexicographically smallest grade is `0`.
    pub fn canonical(&self) -> Self {
        match self.entries.iter().map(|e| &e.grade).min() {
            Some(g) => self.translate(&g.clone()),
            None => self.clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    /// `G_β` as a product of general linear groups modulo the diagonal scalars.
    pub fn centralizer_name(&self) -> String {
        let mut counts: BTreeMap<u64, usize> = BTreeMap::new();
        for e in &self.entries {
            *counts.entry(e.mult).or_default() += 1;
        }
        let factors: Vec<String> = counts
            .iter()
            .rev()
            .map(|(d, k)| if *k == 1 { format!("GL({d})") } else { format!("GL({d})^{k}") })
            .collect();
        format!("({})/C^*", factors.join(" x "))
    }
}

/// A box `lo <= χ <= hi` in `Z^aux`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    pub fn new(lo: Vec<i64>, hi: Vec<i64>) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::DimMismatch { expected: lo.len(), found: hi.len() });
        }
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return Err(Error::Invalid("window has lo > hi".into()));
        }
        Ok(Window { lo, hi })
    }

    pub fn cube(aux_rank: usize, radius: i64) -> Self {
        Window { lo: vec![-radius; aux_rank], hi: vec![radius; aux_rank] }
    }

    /// Radius `(Σ α_i) · max_a |w_a|_∞`. A connected support of a cover of `α`
    /// has at most `Σ α_i` vertices, so its grades differ by at most
    /// `(Σ α_i - 1) · max |w_a|_∞` and some translate fits.
    pub fn default_for(problem: &QuiverProblem) -> Self {
        let r = problem.total_dimension() as i64 * problem.weights().max_norm();
        Window::cube(problem.weights().aux_rank(), r)
    }

    pub fn contains(&self, g: &[i64]) -> bool {
        g.iter().zip(self.lo.iter().zip(&self.hi)).all(|(x, (l, h))| l <= x && x <= h)
    }

    /// Does some translate of a set of grades fit?
    pub fn fits<'a>(&self, grades: impl Iterator<Item = &'a Grade> + Clone) -> bool {
        (0..self.lo.len()).all(|k| {
            let min = grades.clone().map(|g| g[k]).min();
            let max = grades.clone().map(|g| g[k]).max();
            match (min, max) {
                (Some(a), Some(b)) => b - a <= self.hi[k] - self.lo[k],
                _ => true,
            }
        })
    }

    pub fn points(&self) -> Vec<Grade> {
        let mut out = vec![vec![]];
        for k in 0..self.lo.len() {
            out = out
                .into_iter()
                .flat_map(|p: Grade| {
                    (self.lo[k]..=self.hi[k]).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        out
    }
}

fn add(a: &[i64], b: &[i64]) -> Grade {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn minus(a: &[i64], b: &[i64]) -> Grade {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// The finite part of `Q̂` over a window, with vertex labels `(i, χ)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringWindow {
    pub quiver: Quiver,
    pub labels: Vec<(usize, Grade)>,
    /// For each arrow of `quiver`, the arrow of `Q` it lifts.
    pub arrow_origin: Vec<usize>,
}

/// The full subquiver of `Q̂` on `Q_0 × window`.
pub fn covering_quiver_window(problem: &QuiverProblem, window: &Window) -> CoveringWindow {
    let q = problem.quiver();
    let points = window.points();
    let mut labels = Vec::new();
    let mut index: BTreeMap<(usize, Grade), usize> = BTreeMap::new();
    for i in 0..q.vertex_count() {
        for p in &points {
            index.insert((i, p.clone()), labels.len());
            labels.push((i, p.clone()));
        }
    }
    let mut arrows = Vec::new();
    let mut arrow_origin = Vec::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        for p in &points {
            let tgt = add(p, problem.weights().weight(ai));
            if let Some(&t) = index.get(&(a.target, tgt)) {
                arrows.push(Arrow {
                    name: format!("{}@{}", a.name, grade_label(p)),
                    source: index[&(a.source, p.clone())],
                    target: t,
                });
                arrow_origin.push(ai);
            }
        }
    }
    let names = labels
        .iter()
        .map(|(i, g)| format!("{}@{}", q.vertices()[*i], grade_label(g)))
        .collect();
    CoveringWindow { quiver: Quiver::new(names, arrows).expect("indices are valid"), labels, arrow_origin }
}

fn grade_label(g: &[i64]) -> String {
    let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

/// Neighbours of `(i, χ)` in the underlying graph of `Q̂`.
fn neighbours(problem: &QuiverProblem, v: &(usize, Grade)) -> Vec<(usize, Grade)> {
    let mut out = Vec::new();
    for (ai, a) in problem.quiver().arrows().iter().enumerate() {
        let w = problem.weights().weight(ai);
        if a.source == v.0 {
            out.push((a.target, add(&v.1, w)));
        }
        if a.target == v.0 {
            out.push((a.source, minus(&v.1, w)));
        }
    }
    out.retain(|u| u != v);
    out
}

fn canonical_support(mut s: Vec<(usize, Grade)>) -> Vec<(usize, Grade)> {
    if let Some(min) = s.iter().map(|(_, g)| g.clone()).min() {
        for (_, g) in s.iter_mut() {
            *g = minus(g, &min);
        }
    }
    s.sort();
    s
}

/// All covers of `α` with connected support that fit in `window`, one per
/// translation class, sorted.
///
/// Connected supports are grown one vertex at a time from single vertices,
/// never placing more than `α_i` grades over vertex `i`; then `α_i` is
/// distributed over the chosen grades in every possible way.
pub fn enumerate_covers(problem: &QuiverProblem, window: &Window) -> Result<Vec<CoverVector>> {
    let alpha = problem.alpha();
    if window.lo.len() != problem.weights().aux_rank() {
        return Err(Error::DimMismatch { expected: problem.weights().aux_rank(), found: window.lo.len() });
    }
    let needed: Vec<usize> = (0..alpha.len()).filter(|&i| alpha[i] > 0).collect();
    if needed.is_empty() {
        return Ok(vec![CoverVector::default()]);
    }
    let aux = problem.weights().aux_rank();
    let total = problem.total_dimension() as usize;
    let mut level: BTreeSet<Vec<(usize, Grade)>> =
        needed.iter().map(|&i| vec![(i, vec![0; aux])]).collect();
    let mut complete: Vec<Vec<(usize, Grade)>> = Vec::new();
    let mut seen = level.len();
    for size in 1..=total {
        for s in &level {
            if needed.iter().all(|i| s.iter().any(|(v, _)| v == i)) {
                complete.push(s.clone());
            }
        }
        if size == total {
            break;
        }
        let mut next: BTreeSet<Vec<(usize, Grade)>> = BTreeSet::new();
        for s in &level {
            let members: BTreeSet<&(usize, Grade)> = s.iter().collect();
            for v in s {
                for u in neighbours(problem, v) {
                    if alpha[u.0] == 0 || members.contains(&u) {
                        continue;
                    }
                    if s.iter().filter(|(i, _)| *i == u.0).count() as u64 >= alpha[u.0] {
                        continue;
                    }
                    let mut t = s.clone();
                    t.push(u);
                    if !window.fits(t.iter().map(|(_, g)| g)) {
                        continue;
                    }
                    next.insert(canonical_support(t));
                }
            }
        }
        seen += next.len();
        if seen > MAX_SUPPORTS {
            return Err(Error::TooLarge(format!("more than {MAX_SUPPORTS} connected supports")));
        }
        level = next;
    }
    let mut out = BTreeSet::new();
    for s in complete {
        for mults in distributions(&s, alpha) {
            let entries = s
                .iter()
                .zip(mults)
                .map(|((v, g), m)| CoverEntry { vertex: *v, grade: g.clone(), mult: m })
                .collect();
            out.insert(CoverVector::new(entries));
        }
    }
    Ok(out.into_iter().collect())
}

/// Every way of writing `α_i` as an ordered sum of positive parts, one part per
/// grade over `i`.
fn distributions(support: &[(usize, Grade)], alpha: &[u64]) -> Vec<Vec<u64>> {
    let mut per_vertex: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, (v, _)) in support.iter().enumerate() {
        per_vertex.entry(*v).or_default().push(k);
    }
    let mut out = vec![vec![0u64; support.len()]];
    for (v, slots) in per_vertex {
        let mut next = Vec::new();
        for comp in compositions(alpha[v], slots.len()) {
            for base in &out {
                let mut m = base.clone();
                for (slot, c) in slots.iter().zip(&comp) {
                    m[*slot] = *c;
                }
                next.push(m);
            }
        }
        out = next;
    }
    out
}

fn compositions(n: u64, k: usize) -> Vec<Vec<u64>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    if k == 1 {
        return if n >= 1 { vec![vec![n]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..n {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Is the support of `β` connected in `Q̂`? (Union-find on the support.)
pub fn support_is_connected(problem: &QuiverProblem, beta: &CoverVector) -> bool {
    let support = beta.support();
    let index: BTreeMap<&(usize, Grade), usize> = support.iter().enumerate().map(|(k, v)| (v, k)).collect();
    let mut parent: Vec<usize> = (0..support.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for v in &support {
        for u in neighbours(problem, v) {
            if let Some(&k) = index.get(&u) {
                let a = find(&mut parent, index[v]);
                let b = find(&mut parent, k);
                parent[a] = b;
            }
        }
    }
    let roots: BTreeSet<usize> = (0..support.len()).map(|x| find(&mut parent, x)).collect();
    roots.len() <= 1
}

/// The weights of `T = T_α / Δ` on `V_ρ` span `X^*(T)_Q`.
///
/// `T_α` has one coordinate per basis vector of `V_i`, and `V_ρ` contains the
/// matrix entry from copy `r` of `(i, χ)` to copy `s` of `(j, χ + w_a)` for each
/// arrow `a: i -> j`, with weight `y_s - y_r`.
pub fn necessary_condition(problem: &QuiverProblem, beta: &CoverVector) -> bool {
    let (copies, n) = copy_offsets(beta);
    if n == 0 {
        return true;
    }
    let mut rows: Vec<IntVec> = Vec::new();
    for (ai, a) in problem.quiver().arrows().iter().enumerate() {
        let w = problem.weights().weight(ai);
        for (k, e) in beta.entries().iter().enumerate() {
            if e.vertex != a.source {
                continue;
            }
            let tgt = add(&e.grade, w);
            let Some(l) = beta.entries().iter().position(|f| f.vertex == a.target && f.grade == tgt) else {
                continue;
            };
            for r in copies[k]..copies[k] + e.mult as usize {
                for s in copies[l]..copies[l] + beta.entries()[l].mult as usize {
                    if r == s {
                        continue;
                    }
                    let mut v = vec![int(0); n];
                    v[s] += 1;
                    v[r] -= 1;
                    rows.push(v);
                }
            }
        }
    }
    rank(&rows) + 1 == n
}

fn copy_offsets(beta: &CoverVector) -> (Vec<usize>, usize) {
    let mut offs = Vec::new();
    let mut n = 0;
    for e in beta.entries() {
        offs.push(n);
        n += e.mult as usize;
    }
    (offs, n)
}

/// `dim R(Q̂, β) - dim G_β + 1`.
pub fn component_dimension(problem: &QuiverProblem, beta: &CoverVector) -> Result<i64> {
    if beta.is_empty() {
        return Err(Error::ZeroDimensionVector);
    }
    let mut d: i64 = 0;
    for (ai, a) in problem.quiver().arrows().iter().enumerate() {
        let w = problem.weights().weight(ai);
        for e in beta.entries().iter().filter(|e| e.vertex == a.source) {
            d += (e.mult * beta.get(a.target, &add(&e.grade, w))) as i64;
        }
    }
    let squares: i64 = beta.entries().iter().map(|e| (e.mult * e.mult) as i64).sum();
    Ok(d - squares + 1)
}

/// `θ̂_{i,χ} = θ_i` on the support of `β`.
pub fn theta_hat(problem: &QuiverProblem, beta: &CoverVector) -> Vec<i64> {
    let th: Vec<i64> = beta.entries().iter().map(|e| problem.theta()[e.vertex]).collect();
    debug_assert_eq!(
        th.iter().zip(beta.entries()).map(|(t, e)| t * e.mult as i64).sum::<i64>(),
        0
    );
    th
}

/// The full subquiver of `Q̂` on the support of `β`, with `β` and `θ̂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportQuiver {
    pub quiver: Quiver,
    pub dims: Vec<usize>,
    pub theta: Vec<i64>,
}

pub fn support_quiver(problem: &QuiverProblem, beta: &CoverVector) -> SupportQuiver {
    let q = problem.quiver();
    let names = beta
        .entries()
        .iter()
        .map(|e| format!("{}@{}", q.vertices()[e.vertex], grade_label(&e.grade)))
        .collect();
    let mut arrows = Vec::new();
    for (ai, a) in q.arrows().iter().enumerate() {
        let w = problem.weights().weight(ai);
        for (k, e) in beta.entries().iter().enumerate() {
            if e.vertex != a.source {
                continue;
            }
            let tgt = add(&e.grade, w);
            if let Some(l) = beta.entries().iter().position(|f| f.vertex == a.target && f.grade == tgt) {
                arrows.push(Arrow { name: format!("{}@{}", a.name, grade_label(&e.grade)), source: k, target: l });
            }
        }
    }
    SupportQuiver {
        quiver: Quiver::new(names, arrows).expect("indices are valid"),
        dims: beta.entries().iter().map(|e| e.mult as usize).collect(),
        theta: theta_hat(problem, beta),
    }
}

/// Sort the rows of `ρ` within each vertex block.
pub fn weyl_canonical(rho: &RhoMap, blocks: &[u64]) -> RhoMap {
    let rows = rho.rows();
    let mut out = Vec::with_capacity(rows.len());
    let mut start = 0;
    for &b in blocks {
        let mut block: Vec<IntVec> = rows[start..start + b as usize].to_vec();
        block.sort();
        out.extend(block);
        start += b as usize;
    }
    out.extend(rows[start..].iter().cloned());
    RhoMap::new(IntMatrix::from_rows(rho.source_rank(), &out))
}

/// The diagonal `ρ: 𝒯 -> T_α` whose weight spaces have dimensions `β`: at
/// vertex `i`, row `χ` repeated `β_{i,χ}` times, in ascending order.
pub fn covers_to_rho(beta: &CoverVector, vertex_count: usize, aux_rank: usize) -> RhoMap {
    let mut rows = Vec::new();
    for i in 0..vertex_count {
        for e in beta.entries().iter().filter(|e| e.vertex == i) {
            for _ in 0..e.mult {
                rows.push(e.grade.iter().map(|&x| int(x)).collect::<IntVec>());
            }
        }
    }
    RhoMap::new(IntMatrix::from_rows(aux_rank, &rows))
}

/// The canonical cover whose weight multiset at vertex `i` is the `i`-th block of rows.
pub fn rho_to_cover(rho: &RhoMap, alpha: &[u64]) -> Result<CoverVector> {
    let total: u64 = alpha.iter().sum();
    if total as usize != rho.target_rank() {
        return Err(Error::DimMismatch { expected: total as usize, found: rho.target_rank() });
    }
    let rows = rho.matrix().to_i64_rows();
    let mut entries = Vec::new();
    let mut start = 0;
    for (i, &a) in alpha.iter().enumerate() {
        for row in &rows[start..start + a as usize] {
            entries.push(CoverEntry { vertex: i, grade: row.clone(), mult: 1 });
        }
        start += a as usize;
    }
    Ok(CoverVector::new(entries).canonical())
}
