//! Quiver representations over small prime fields and King's stability test
//! by exhaustive enumeration of subrepresentations.
//!
//! A stable representation found over `F_p` only shows that the stable locus
//! is nonempty over `F_p`; the certificate is labelled accordingly.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::component::Status;
use crate::error::{Error, Result};
use crate::quiver::Quiver;

/// A dense matrix over `F_p`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FpMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[&[u32]], cols: usize) -> Self {
        let data: Vec<u32> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        assert_eq!(data.len(), rows.len() * cols);
        FpMatrix { rows: rows.len(), cols, data }
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    fn apply(&self, v: &[u32], p: u32) -> Vec<u32> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0u64, |acc, j| (acc + self.get(i, j) as u64 * v[j] as u64) % p as u64) as u32
            })
            .collect()
    }
}

/// A representation of a quiver over `F_p`: one `dim(t) × dim(s)` matrix per arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RepFq {
    pub prime: u32,
    pub dims: Vec<usize>,
    pub maps: Vec<FpMatrix>,
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl RepFq {
    pub fn new(q: &Quiver, dims: Vec<usize>, prime: u32, maps: Vec<FpMatrix>) -> Result<Self> {
        if !is_prime(prime) {
            return Err(Error::Invalid(format!("{prime} is not prime")));
        }
        if dims.len() != q.vertex_count() {
            return Err(Error::DimMismatch { expected: q.vertex_count(), found: dims.len() });
        }
        if maps.len() != q.arrow_count() {
            return Err(Error::DimMismatch { expected: q.arrow_count(), found: maps.len() });
        }
        for (a, m) in q.arrows().iter().zip(&maps) {
            if m.rows != dims[a.target] || m.cols != dims[a.source] {
                return Err(Error::Invalid(format!(
                    "matrix of arrow {} must be {}x{}",
                    a.name, dims[a.target], dims[a.source]
                )));
            }
            if m.data.iter().any(|&x| x >= prime) {
                return Err(Error::Invalid(format!("entries of arrow {} must lie in 0..{prime}", a.name)));
            }
        }
        Ok(RepFq { prime, dims, maps })
    }

    pub fn zero(q: &Quiver, dims: Vec<usize>, prime: u32) -> Result<Self> {
        let maps = q.arrows().iter().map(|a| FpMatrix::zeros(dims[a.target], dims[a.source])).collect();
        RepFq::new(q, dims, prime, maps)
    }

    /// Uniformly random matrices.
    pub fn random<R: Rng>(q: &Quiver, dims: &[usize], prime: u32, rng: &mut R) -> Self {
        let maps = q
            .arrows()
            .iter()
            .map(|a| {
                let (r, c) = (dims[a.target], dims[a.source]);
                FpMatrix { rows: r, cols: c, data: (0..r * c).map(|_| rng.gen_range(0..prime)).collect() }
            })
            .collect();
        RepFq { prime, dims: dims.to_vec(), maps }
    }
}

/// Guards for the exhaustive searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub max_total_dim: usize,
    pub max_prime: u32,
    /// Upper bound on the number of tuples of subspaces examined.
    pub max_tuples: u128,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_total_dim: 8, max_prime: 5, max_tuples: 5_000_000 }
    }
}

/// A subspace of `F_p^n` by its reduced row echelon basis.
#[derive(Clone, Debug)]
struct Subspace {
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Subspace {
    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn contains(&self, v: &[u32], p: u32) -> bool {
        let mut v = v.to_vec();
        for (row, &c) in self.basis.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = ((*x as u64 + (p - f) as u64 * *r as u64) % p as u64) as u32;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }
}

/// Number of subspaces of `F_p^n`.
fn subspace_count(n: usize, p: u32) -> u128 {
    // Gaussian binomials via the recursion [n,k] = [n-1,k-1] + p^k [n-1,k].
    let mut row = vec![1u128];
    for m in 1..=n {
        let mut next = vec![1u128; m + 1];
        for k in 1..m {
            next[k] = row[k - 1].saturating_add((p as u128).saturating_pow(k as u32).saturating_mul(row[k]));
        }
        row = next;
    }
    row.iter().fold(0u128, |a, b| a.saturating_add(*b))
}

fn all_subspaces(n: usize, p: u32) -> Vec<Subspace> {
    let mut out = Vec::new();
    for k in 0..=n {
        for pivots in combinations(n, k) {
            // Free entries: row i, column j > pivot_i, j not a pivot.
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| {
                    let pv = &pivots;
                    ((pv[i] + 1)..n).filter(move |j| !pv.contains(j)).map(move |j| (i, j))
                })
                .collect();
            let total = (p as u64).pow(free.len() as u32);
            for code in 0..total {
                let mut basis = vec![vec![0u32; n]; k];
                for (i, &c) in pivots.iter().enumerate() {
                    basis[i][c] = 1;
                }
                let mut x = code;
                for &(i, j) in &free {
                    basis[i][j] = (x % p as u64) as u32;
                    x /= p as u64;
                }
                out.push(Subspace { basis, pivots: pivots.clone() });
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(n, k, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, 0, &mut Vec::new(), &mut out);
    out
}

fn check_guards(m: &RepFq, limits: &OracleLimits) -> Result<()> {
    let total: usize = m.dims.iter().sum();
    if total > limits.max_total_dim {
        return Err(Error::TooLarge(format!(
            "total dimension {total} exceeds the limit {}",
            limits.max_total_dim
        )));
    }
    if m.prime > limits.max_prime {
        return Err(Error::TooLarge(format!("prime {} exceeds the limit {}", m.prime, limits.max_prime)));
    }
    let tuples = m
        .dims
        .iter()
        .fold(1u128, |acc, &d| acc.saturating_mul(subspace_count(d, m.prime)));
    if tuples > limits.max_tuples {
        return Err(Error::TooLarge(format!(
            "{tuples} tuples of subspaces exceed the limit {}",
            limits.max_tuples
        )));
    }
    Ok(())
}

/// Dimension vectors of all subrepresentations, by exhaustive search.
pub fn subrep_dimension_vectors(q: &Quiver, m: &RepFq, limits: &OracleLimits) -> Result<BTreeSet<Vec<usize>>> {
    check_guards(m, limits)?;
    let p = m.prime;
    let mut cache: HashMap<usize, Vec<Subspace>> = HashMap::new();
    for &d in &m.dims {
        cache.entry(d).or_insert_with(|| all_subspaces(d, p));
    }
    let n = q.vertex_count();
    let mut out = BTreeSet::new();
    let mut chosen: Vec<Option<&Subspace>> = vec![None; n];
    search(q, m, &cache, 0, &mut chosen, &mut out);
    Ok(out)
}

fn search<'a>(
    q: &Quiver,
    m: &RepFq,
    cache: &'a HashMap<usize, Vec<Subspace>>,
    v: usize,
    chosen: &mut Vec<Option<&'a Subspace>>,
    out: &mut BTreeSet<Vec<usize>>,
) {
    if v == q.vertex_count() {
        out.insert(chosen.iter().map(|s| s.expect("all chosen").dim()).collect());
        return;
    }
    for u in &cache[&m.dims[v]] {
        chosen[v] = Some(u);
        if closed_at(q, m, chosen, v) {
            search(q, m, cache, v + 1, chosen, out);
        }
    }
    chosen[v] = None;
}

/// Arrows between vertex `v` and already chosen vertices map chosen subspaces into each other.
fn closed_at(q: &Quiver, m: &RepFq, chosen: &[Option<&Subspace>], v: usize) -> bool {
    for (a, map) in q.arrows().iter().zip(&m.maps) {
        if a.source != v && a.target != v {
            continue;
        }
        let (Some(us), Some(ut)) = (chosen[a.source], chosen[a.target]) else { continue };
        if !us.basis.iter().all(|b| ut.contains(&map.apply(b, m.prime), m.prime)) {
            return false;
        }
    }
    true
}

fn pairing(theta: &[i64], d: &[usize]) -> i64 {
    theta.iter().zip(d).map(|(t, x)| t * *x as i64).sum()
}

/// `θ(U) > 0` for every nonzero proper subrepresentation `U`.
pub fn is_stable_rep(q: &Quiver, m: &RepFq, theta: &[i64], limits: &OracleLimits) -> Result<bool> {
    let dims = subrep_dimension_vectors(q, m, limits)?;
    let zero = vec![0; m.dims.len()];
    Ok(dims.iter().filter(|d| **d != zero && **d != m.dims).all(|d| pairing(theta, d) > 0))
}

/// `θ(U) >= 0` for every subrepresentation `U`.
pub fn is_semistable_rep(q: &Quiver, m: &RepFq, theta: &[i64], limits: &OracleLimits) -> Result<bool> {
    let dims = subrep_dimension_vectors(q, m, limits)?;
    Ok(dims.iter().all(|d| pairing(theta, d) >= 0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifyOptions {
    pub prime: u32,
    pub trials: usize,
    pub seed: u64,
    pub limits: OracleLimits,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { prime: 5, trials: 200, seed: 0, limits: OracleLimits::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub status: Status,
    pub reason: String,
    pub witness: Option<RepFq>,
}

/// A subrepresentation present in every representation of the given shape
/// with `θ(U) <= 0`, found from the arrow pattern alone.
///
/// For a successor-closed vertex set `Z`, take `U_z = V_z` on `Z`, and for a
/// vertex `v` outside `Z` take `U_v` of dimension
/// `max(0, d_v - Σ_{a: v -> w, w ∉ Z} d_w)` inside the kernel of the maps
/// leaving `Z^c`; every representation has such a subrepresentation.
pub fn forced_destabilizer(q: &Quiver, dims: &[usize], theta: &[i64]) -> Option<Vec<usize>> {
    let n = q.vertex_count();
    if n > 16 {
        return None;
    }
    let total: usize = dims.iter().sum();
    let mut best: Option<Vec<usize>> = None;
    for zmask in 0u32..(1 << n) {
        let in_z = |v: usize| zmask & (1 << v) != 0;
        if q.arrows().iter().any(|a| in_z(a.source) && !in_z(a.target)) {
            continue;
        }
        let forced: Vec<usize> = (0..n)
            .map(|v| {
                if in_z(v) {
                    return 0;
                }
                let out: usize = q.arrows().iter().filter(|a| a.source == v && !in_z(a.target)).map(|a| dims[a.target]).sum();
                dims[v].saturating_sub(out)
            })
            .collect();
        let optional: Vec<usize> = (0..n).filter(|&v| forced[v] > 0 && theta[v] < 0).collect();
        for kmask in 0u32..(1 << optional.len()) {
            let mut u: Vec<usize> = (0..n).map(|v| if in_z(v) { dims[v] } else { 0 }).collect();
            for (b, &v) in optional.iter().enumerate() {
                if kmask & (1 << b) != 0 {
                    u[v] = forced[v];
                }
            }
            let size: usize = u.iter().sum();
            if size == 0 || size == total {
                continue;
            }
            if pairing(theta, &u) <= 0 && best.as_ref().is_none_or(|b| u < *b) {
                best = Some(u);
            }
        }
    }
    best
}

/// Decide the status of the stable locus of representations of shape `dims`.
///
/// `EmptyVerified` comes only from [`forced_destabilizer`]. Otherwise `trials`
/// random representations over `F_p` are tested, each from its own stream of a
/// seeded generator, and the lowest-numbered stable one is the witness.
pub fn certify_component(q: &Quiver, dims: &[usize], theta: &[i64], opts: &CertifyOptions) -> Result<Certificate> {
    let shape = RepFq::zero(q, dims.to_vec(), opts.prime)?;
    check_guards(&shape, &opts.limits)?;
    if let Some(u) = forced_destabilizer(q, dims, theta) {
        return Ok(Certificate {
            status: Status::EmptyVerified,
            reason: format!("forced subrepresentation of dimension {u:?} with theta <= 0"),
            witness: None,
        });
    }
    let found = (0..opts.trials).into_par_iter().find_map_first(|trial| {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(trial as u64);
        let m = RepFq::random(q, dims, opts.prime, &mut rng);
        match is_stable_rep(q, &m, theta, &opts.limits) {
            Ok(true) => Some((trial, m)),
            _ => None,
        }
    });
    Ok(match found {
        Some((trial, m)) => Certificate {
            status: Status::NonemptyVerified,
            reason: format!("finite-field witness over F_{} (trial {trial})", opts.prime),
            witness: Some(m),
        },
        None => Certificate {
            status: Status::CandidateOnly,
            reason: format!("no stable representation in {} trials over F_{}", opts.trials, opts.prime),
            witness: None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lim() -> OracleLimits {
        OracleLimits::default()
    }

    #[test]
    fn subspace_counts() {
        assert_eq!(all_subspaces(2, 5).len(), 8);
        assert_eq!(all_subspaces(3, 2).len(), subspace_count(3, 2) as usize);
        assert_eq!(subspace_count(3, 5), 64);
        assert_eq!(subspace_count(0, 5), 1);
    }

    #[test]
    fn zero_rep_has_every_subdimension() {
        let q = Quiver::kronecker(3);
        let m = RepFq::zero(&q, vec![2, 3], 5).unwrap();
        let dims = subrep_dimension_vectors(&q, &m, &lim()).unwrap();
        assert_eq!(dims.len(), 12);
        assert!(!is_stable_rep(&q, &m, &[-3, 2], &lim()).unwrap());
    }

    #[test]
    fn identity_arrow() {
        let q = Quiver::kronecker(1);
        let m = RepFq::new(&q, vec![1, 1], 5, vec![FpMatrix::from_rows(&[&[1]], 1)]).unwrap();
        let dims = subrep_dimension_vectors(&q, &m, &lim()).unwrap();
        assert_eq!(dims, [vec![0, 0], vec![0, 1], vec![1, 1]].into_iter().collect());
        assert!(is_stable_rep(&q, &m, &[-1, 1], &lim()).unwrap());
        assert!(is_semistable_rep(&q, &m, &[-1, 1], &lim()).unwrap());
    }

    #[test]
    fn kronecker_type_one_shape_is_stable() {
        // A only in row 1, B only in row 2, C only in row 3.
        let q = Quiver::kronecker(3);
        let a = FpMatrix::from_rows(&[&[1, 2], &[0, 0], &[0, 0]], 2);
        let b = FpMatrix::from_rows(&[&[0, 0], &[1, 3], &[0, 0]], 2);
        let c = FpMatrix::from_rows(&[&[0, 0], &[0, 0], &[1, 1]], 2);
        let m = RepFq::new(&q, vec![2, 3], 5, vec![a, b, c]).unwrap();
        assert!(is_stable_rep(&q, &m, &[-3, 2], &lim()).unwrap());
        let dims = subrep_dimension_vectors(&q, &m, &lim()).unwrap();
        assert!(dims.iter().filter(|d| **d != vec![0, 0] && **d != vec![2, 3]).all(|d| -3 * d[0] as i64 + 2 * d[1] as i64 > 0));
    }

    #[test]
    fn guards() {
        let q = Quiver::kronecker(1);
        let big = RepFq::zero(&q, vec![5, 4], 5).unwrap();
        assert!(matches!(subrep_dimension_vectors(&q, &big, &lim()), Err(Error::TooLarge(_))));
        let p7 = RepFq::zero(&q, vec![1, 1], 7).unwrap();
        assert!(matches!(subrep_dimension_vectors(&q, &p7, &lim()), Err(Error::TooLarge(_))));
        assert!(RepFq::zero(&q, vec![1, 1], 4).is_err());
    }

    #[test]
    fn simple_is_certified() {
        let q = Quiver::new(vec!["x".into()], vec![]).unwrap();
        let c = certify_component(&q, &[1], &[0], &CertifyOptions::default()).unwrap();
        assert_eq!(c.status, Status::NonemptyVerified);
    }

    #[test]
    fn forced_kernel_destabilizes() {
        // Support of the abcb pattern: (1,0) -> three layer-2 vertices, (1,ξ) -> one of them.
        let q = Quiver::from_names(
            &["u0", "u1", "wa", "wb", "wc"],
            &[("a", "u0", "wa"), ("b", "u0", "wb"), ("c", "u0", "wc"), ("b'", "u1", "wc")],
        )
        .unwrap();
        let dims = [1, 1, 1, 1, 1];
        let theta = [-3, -3, 2, 2, 2];
        assert!(forced_destabilizer(&q, &dims, &theta).is_some());
        let c = certify_component(&q, &dims, &theta, &CertifyOptions::default()).unwrap();
        assert_eq!(c.status, Status::EmptyVerified);
    }

    #[test]
    fn certification_is_deterministic() {
        let q = Quiver::kronecker(3);
        let opts = CertifyOptions { seed: 7, ..Default::default() };
        let a = certify_component(&q, &[2, 3], &[-3, 2], &opts).unwrap();
        let b = certify_component(&q, &[2, 3], &[-3, 2], &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.status, Status::NonemptyVerified);
    }
}
