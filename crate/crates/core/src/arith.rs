//! Integer and rational vectors.
//!
//! Everything is arbitrary precision. Vectors are plain `Vec`s; the helpers
//! here cover the handful of operations the cone and lattice code needs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;
pub type IntVec = Vec<Int>;
pub type RatVec = Vec<Rat>;

pub fn int(x: i64) -> Int {
    Int::from(x)
}

pub fn rat(x: i64) -> Rat {
    Rat::from_integer(Int::from(x))
}

pub fn ivec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| Int::from(x)).collect()
}

pub fn rvec(xs: &[i64]) -> RatVec {
    xs.iter().map(|&x| rat(x)).collect()
}

pub fn to_rat(v: &[Int]) -> RatVec {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn rdot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// Pairing of an integer vector with a rational one.
pub fn mixed_dot(a: &[Int], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, y)| acc + y * x)
}

pub fn is_zero(v: &[Int]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn gcd_of(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

/// Divides out the content. The zero vector is returned unchanged.
pub fn primitive(v: &[Int]) -> IntVec {
    let g = gcd_of(v);
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn is_primitive(v: &[Int]) -> bool {
    gcd_of(v).is_one()
}

/// Clears denominators and returns the primitive integer vector on the same ray.
pub fn primitive_from_rat(v: &[Rat]) -> IntVec {
    let l = v
        .iter()
        .fold(Int::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: IntVec = v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect();
    primitive(&scaled)
}

pub fn neg(v: &[Int]) -> IntVec {
    v.iter().map(|x| -x).collect()
}

pub fn sub(a: &[Int], b: &[Int]) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_add(a: &[Int], sa: &Int, b: &[Int], sb: &Int) -> IntVec {
    a.iter().zip(b).map(|(x, y)| x * sa + y * sb).collect()
}

/// Quadratic form `x^T Q y` for an integer form and rational vectors.
pub fn qform(q: &[IntVec], x: &[Rat], y: &[Rat]) -> Rat {
    let mut acc = Rat::zero();
    for (i, row) in q.iter().enumerate() {
        if x[i].is_zero() {
            continue;
        }
        let qy = row
            .iter()
            .zip(y)
            .fold(Rat::zero(), |a, (qij, yj)| a + yj * qij);
        acc += &x[i] * qy;
    }
    acc
}

pub fn identity_form(n: usize) -> Vec<IntVec> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect()
}

pub fn max_abs(v: &[Int]) -> Int {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Int::zero)
}
