use std::collections::BTreeSet;

use fixedloci::arith::{int, rat, rdot, to_rat, IntVec, Rat, RatVec};
use fixedloci::cone::RationalCone;
use fixedloci::grassmann::{classify, GrassmannProblem};
use fixedloci::hm::{
    adapted_one_ps, default_form, is_semistable_support, is_stable_support, is_stable_support_direct, limit_cone,
    m_value, MValue, SupportSet, WeightedAction,
};
use fixedloci::quiver::{covers_to_rho, rho_to_cover, weyl_canonical, ArrowWeights, CoverVector, Quiver, QuiverProblem};
use fixedloci::rep::{is_stable_rep, FpMatrix, OracleLimits, RepFq};
use fixedloci::toric::{minimally_stable_subsets, ToricQuotient};
use num_traits::Zero;
use proptest::prelude::*;

fn small_vec(dim: usize, bound: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-bound..=bound, dim)
}

fn gens(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(small_vec(dim, 3), 0..=max)
}

fn iv(v: &[i64]) -> IntVec {
    v.iter().map(|&x| int(x)).collect()
}

/// `(r, weights, theta, support mask)`
fn action_strategy() -> impl Strategy<Value = (usize, Vec<Vec<i64>>, Vec<i64>, u32)> {
    (1usize..=3).prop_flat_map(|r| (Just(r), prop::collection::vec(small_vec(r, 3), 1..=6), small_vec(r, 3), any::<u32>()))
}

fn build(r: usize, weights: &[Vec<i64>], theta: &[i64], mask: u32) -> (WeightedAction, SupportSet) {
    let ws: Vec<(&[i64], usize)> = weights.iter().map(|w| (w.as_slice(), 1)).collect();
    let a = WeightedAction::from_weights(&ws, theta).unwrap();
    let s: Vec<usize> = (0..weights.len()).filter(|i| mask & (1 << i) != 0).collect();
    assert_eq!(a.g_rank(), r);
    (a, SupportSet::from_indices(&s))
}

/// All `f` with entries in `[-10, 10]` whose solution set spans `Q^2`, in plain `i64`.
fn brute_force_maps(e: &[(Vec<i64>, Vec<i64>)]) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for code in 0..21i64.pow(4) {
        let mut c = code;
        let mut f = [0i64; 4];
        for x in f.iter_mut() {
            *x = c % 21 - 10;
            c /= 21;
        }
        let hits: Vec<&Vec<i64>> = e
            .iter()
            .filter(|(x, y)| f[0] * x[0] + f[1] * x[1] == y[0] && f[2] * x[0] + f[3] * x[1] == y[1])
            .map(|(x, _)| x)
            .collect();
        let spans = hits.iter().any(|a| hits.iter().any(|b| a[0] * b[1] - a[1] * b[0] != 0));
        if spans {
            out.push(f);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_dual_is_identity(dim in 1usize..=3, g in gens(3, 5)) {
        let g: Vec<IntVec> = g.iter().map(|v| iv(&v[..dim])).collect();
        let c = RationalCone::generated_by(dim, &g).unwrap();
        prop_assert_eq!(c.dual().dual(), c);
    }

    #[test]
    fn membership_agrees_with_inequalities(g in gens(3, 5), x in small_vec(3, 4)) {
        let g: Vec<IntVec> = g.iter().map(|v| iv(v)).collect();
        let c = RationalCone::generated_by(3, &g).unwrap();
        let x = to_rat(&iv(&x));
        prop_assert_eq!(c.contains(&x).unwrap(), c.satisfies_inequalities(&x).unwrap());
    }

    #[test]
    fn projection_variational_inequality(g in gens(3, 4), x in small_vec(3, 4), d in small_vec(3, 2)) {
        let g: Vec<IntVec> = g.iter().map(|v| iv(v)).collect();
        let c = RationalCone::generated_by(3, &g).unwrap();
        // Diagonal positive-definite form.
        let q: Vec<IntVec> = (0..3).map(|i| (0..3).map(|j| int(if i == j { d[i].abs() + 1 } else { 0 })).collect()).collect();
        let x = to_rat(&iv(&x));
        let p = c.project(&x, &q).unwrap();
        prop_assert!(c.contains(&p).unwrap());
        let res: RatVec = x.iter().zip(&p).map(|(a, b)| a - b).collect();
        let qdot = |a: &[Rat], b: &[Rat]| fixedloci::arith::qform(&q, a, b);
        prop_assert!(qdot(&res, &p).is_zero());
        for gen in c.generators() {
            prop_assert!(qdot(&res, &to_rat(gen)) <= Rat::zero());
        }
    }

    #[test]
    fn stability_formulations_agree((r, w, th, mask) in action_strategy()) {
        let (a, s) = build(r, &w, &th, mask);
        prop_assert_eq!(is_stable_support(&a, &s), is_stable_support_direct(&a, &s));
        let m = m_value(&a, &s, &default_form(&a)).unwrap();
        prop_assert_eq!(is_semistable_support(&a, &s), !m.is_negative());
        if is_stable_support(&a, &s) {
            prop_assert!(is_semistable_support(&a, &s));
        }
    }

    #[test]
    fn adapted_subgroup_is_optimal((r, w, th, mask) in action_strategy(), probes in prop::collection::vec(prop::collection::vec(0i64..=4, 12), 20)) {
        let (a, s) = build(r, &w, &th, mask);
        let q = default_form(&a);
        let Ok(lambda) = adapted_one_ps(&a, &s, &q) else { return Ok(()) };
        let cone = limit_cone(&a, &s);
        prop_assert!(fixedloci::arith::is_primitive(&lambda));
        prop_assert!(cone.contains_int(&lambda).unwrap());
        let MValue::Finite { square, .. } = m_value(&a, &s, &q).unwrap() else { panic!("unstable has finite m") };
        let theta = to_rat(a.theta());
        let ratio = |eta: &[Rat]| {
            let t = rdot(&theta, eta);
            (t.clone() * t.clone(), t)
        };
        let l = to_rat(&lambda);
        let (lsq, lsign) = ratio(&l);
        prop_assert!(lsign < Rat::zero());
        prop_assert_eq!(lsq / rdot(&l, &l), square.clone());
        let generators = cone.generators();
        for coeffs in &probes {
            let mut eta = vec![rat(0); r];
            for (k, gen) in generators.iter().enumerate() {
                for (e, x) in eta.iter_mut().zip(gen) {
                    *e += rat(coeffs[k % coeffs.len()]) * Rat::from_integer(x.clone());
                }
            }
            if eta.iter().all(Zero::is_zero) { continue; }
            let (sq, t) = ratio(&eta);
            if t < Rat::zero() {
                prop_assert!(sq / rdot(&eta, &eta) <= square.clone());
            }
        }
    }

    #[test]
    fn semistable_is_monotone_in_support((r, w, th, mask) in action_strategy(), extra in any::<u32>()) {
        let (a, s) = build(r, &w, &th, mask);
        let (_, bigger) = build(r, &w, &th, mask | extra);
        if is_semistable_support(&a, &s) {
            prop_assert!(is_semistable_support(&a, &bigger));
        }
        if is_stable_support(&a, &s) {
            prop_assert!(is_stable_support(&a, &bigger));
        }
    }

    #[test]
    fn toric_bijection((r, w, th, _mask) in action_strategy()) {
        let ws: Vec<(&[i64], usize)> = w.iter().map(|v| (v.as_slice(), 1)).collect();
        let a = WeightedAction::from_weights(&ws, &th).unwrap();
        let Ok(q) = ToricQuotient::new(a.clone()) else { return Ok(()) };
        let minimal = minimally_stable_subsets(&a);
        let Ok(fan) = q.quotient_fan() else { return Ok(()) };
        prop_assert_eq!(fan.maximal_cones().len(), minimal.len());
        let mut seen = BTreeSet::new();
        for s in &minimal {
            prop_assert_eq!(s.len(), r);
            let rho = q.rho_from_stable_subset(s).unwrap();
            prop_assert_eq!(&q.s_rho(&rho), s);
            prop_assert!(q.necessary_condition(&rho));
            prop_assert!(seen.insert(rho));
        }
        prop_assert!(fan.is_simplicial() && fan.is_face_closed());
        prop_assert!(fan.intersections_are_faces());
    }

    #[test]
    fn linear_maps_are_complete(e in prop::collection::vec((small_vec(2, 2), small_vec(2, 2)), 0..=5)) {
        let pairs: Vec<(IntVec, IntVec)> = e.iter().map(|(x, y)| (iv(x), iv(y))).collect();
        let got = fixedloci::toric::enumerate_linear_maps(2, 2, &pairs);
        let mut brute = Vec::new();
        for f in brute_force_maps(&e) {
            brute.push(fixedloci::matrix::IntMatrix::from_i64(&[&f[0..2], &f[2..4]]));
        }
        brute.sort();
        prop_assert_eq!(got, brute);
    }

    #[test]
    fn cover_translation_invariance(xi in small_vec(3, 5), shift in small_vec(3, 5)) {
        let b = CoverVector::from_triples(&[(0, &xi, 1), (1, &[xi[0] + 1, xi[1], xi[2]], 2), (0, &[xi[0], xi[1] - 1, xi[2]], 1)]);
        let c = b.canonical();
        prop_assert_eq!(c.canonical(), c.clone());
        prop_assert_eq!(b.translate(&shift).canonical(), c);
    }

    #[test]
    fn rho_round_trip(rows in prop::collection::vec(small_vec(3, 3), 5)) {
        let r: Vec<IntVec> = rows.iter().map(|v| iv(v)).collect();
        let rho = fixedloci::component::RhoMap::from_rows(3, &r);
        let cover = rho_to_cover(&rho, &[2, 3]).unwrap();
        prop_assert_eq!(cover.alpha(2), vec![2, 3]);
        let back = covers_to_rho(&cover, 2, 3);
        prop_assert_eq!(rho_to_cover(&back, &[2, 3]).unwrap(), cover.clone());
        // Same W-orbit up to a common translation.
        let shift: Vec<i64> = {
            let min_orig = rho.matrix().to_i64_rows().into_iter().min().unwrap();
            min_orig
        };
        let shifted: Vec<IntVec> = back.matrix().to_i64_rows().iter().map(|row| iv(&row.iter().zip(&shift).map(|(a, b)| a + b).collect::<Vec<_>>())).collect();
        let shifted = fixedloci::component::RhoMap::from_rows(3, &shifted);
        prop_assert_eq!(weyl_canonical(&shifted, &[2, 3]), weyl_canonical(&rho, &[2, 3]));
    }

    #[test]
    fn grassmann_is_permutation_invariant(w in prop::collection::vec(0i64..=2, 1..=5), m in 1usize..=3, seed in any::<u64>()) {
        let n = w.len();
        prop_assume!(m <= n);
        let mut perm = w.clone();
        let k = (seed as usize) % n;
        perm.rotate_left(k);
        perm.reverse();
        let a = classify(&GrassmannProblem::new(m, n, w).unwrap());
        let b = classify(&GrassmannProblem::new(m, n, perm).unwrap());
        prop_assert!(a.iter().all(|c| c.factors.iter().map(|f| f.0).sum::<usize>() == m));
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Adding a vertex with the zero map never makes an unstable representation stable.
    #[test]
    fn zero_block_never_stabilizes(entries in prop::collection::vec(0u32..5, 6)) {
        let q = Quiver::kronecker(3);
        let mats: Vec<FpMatrix> = (0..3).map(|k| FpMatrix::from_rows(&[&entries[2 * k..2 * k + 2]], 2)).collect();
        let m = RepFq::new(&q, vec![2, 1], 5, mats.clone()).unwrap();
        let lim = OracleLimits::default();
        let before = is_stable_rep(&q, &m, &[-1, 2], &lim).unwrap();
        let big = Quiver::from_names(&["1", "2", "3"], &[("a", "1", "2"), ("b", "1", "2"), ("c", "1", "2"), ("d", "1", "3")]).unwrap();
        let mut bm = mats;
        bm.push(FpMatrix::zeros(1, 2));
        let m2 = RepFq::new(&big, vec![2, 1, 1], 5, bm).unwrap();
        let after = is_stable_rep(&big, &m2, &[-2, 2, 2], &lim).unwrap();
        prop_assert!(before || !after);
    }

    /// With one-dimensional pieces, King stability is the Hilbert-Mumford
    /// criterion for the torus acting through the nonzero entries.
    #[test]
    fn king_agrees_with_torus_stability(nonzero in prop::collection::vec(any::<bool>(), 4), th in prop::collection::vec(-2i64..=2, 2)) {
        // Quiver on four vertices: 0 -> 1, 0 -> 2, 3 -> 2, 3 -> 1.
        let q = Quiver::from_names(&["p", "q", "r", "s"], &[("a", "p", "q"), ("b", "p", "r"), ("c", "s", "r"), ("d", "s", "q")]).unwrap();
        let theta = vec![th[0], th[1], -th[0] - th[1] - 1, 1];
        let mats: Vec<FpMatrix> = nonzero.iter().map(|&nz| FpMatrix::from_rows(&[&[u32::from(nz)]], 1)).collect();
        let m = RepFq::new(&q, vec![1, 1, 1, 1], 5, mats).unwrap();
        let king = is_stable_rep(&q, &m, &theta, &OracleLimits::default()).unwrap();
        // T = (C^*)^4 / C^*, basis f_k = e_k - e_0; arrow i -> j has weight e_j - e_i.
        let coords = |v: usize| -> Vec<i64> { (1..4).map(|k| i64::from(k == v)).collect() };
        let weights: Vec<Vec<i64>> = q
            .arrows()
            .iter()
            .map(|a| coords(a.target).iter().zip(coords(a.source)).map(|(x, y)| x - y).collect())
            .collect();
        let ws: Vec<(&[i64], usize)> = weights.iter().map(|w| (w.as_slice(), 1)).collect();
        let a = WeightedAction::from_weights(&ws, &theta[1..]).unwrap();
        let s: Vec<usize> = (0..4).filter(|&i| nonzero[i]).collect();
        prop_assert_eq!(king, is_stable_support(&a, &SupportSet::from_indices(&s)));
    }
}

#[test]
fn kronecker_problem_is_well_formed() {
    let q = Quiver::kronecker(3);
    assert!(QuiverProblem::new(q.clone(), vec![2, 3], vec![-3, 2], ArrowWeights::full_arrow_torus(&q)).is_ok());
}
