use fixedloci::arith::ivec;
use fixedloci::hm::WeightedAction;
use fixedloci::matrix::IntMatrix;
use fixedloci::toric::{ToricFan, ToricQuotient};

fn hirzebruch(d: i64) -> WeightedAction {
    WeightedAction::from_weights(&[(&[1, 0], 2), (&[0, 1], 1), (&[d, 1], 1)], &[d + 1, 1]).unwrap()
}

fn classical_fan(d: i64) -> ToricFan {
    ToricFan::new(
        2,
        vec![ivec(&[1, 0]), ivec(&[-1, d]), ivec(&[0, 1]), ivec(&[0, -1])],
        vec![vec![0, 2], vec![1, 2], vec![0, 3], vec![1, 3]],
    )
}

#[test]
fn hirzebruch_fan_is_classical() {
    for d in 0..4 {
        let fan = ToricQuotient::new(hirzebruch(d)).unwrap().quotient_fan().unwrap();
        assert!(fan.is_isomorphic(&classical_fan(d)), "d = {d}");
        assert!(fan.is_simplicial() && fan.is_face_closed() && fan.intersections_are_faces());
        for other in 0..4 {
            assert_eq!(fan.is_isomorphic(&classical_fan(other)), other == d);
        }
    }
}

#[test]
fn different_sections_keep_the_count() {
    let d = 2;
    let pi = IntMatrix::from_i64(&[&[1, -1, 0, 0], &[0, d, 1, -1]]);
    let c1 = IntMatrix::from_i64(&[&[1, 0], &[0, 0], &[0, 1], &[0, 0]]);
    let c2 = IntMatrix::from_i64(&[&[0, 0], &[-1, 0], &[0, 0], &[-2, -1]]);
    let a = ToricQuotient::with_section(hirzebruch(d), pi.clone(), c1).unwrap();
    let b = ToricQuotient::with_section(hirzebruch(d), pi, c2).unwrap();
    let fa = a.fixed_points().unwrap();
    let fb = b.fixed_points().unwrap();
    assert_eq!(fa.len(), fb.len());
    let sa: Vec<_> = fa.iter().map(|f| f.v_rho.clone()).collect();
    let sb: Vec<_> = fb.iter().map(|f| f.v_rho.clone()).collect();
    assert_eq!(sa, sb);
    assert_ne!(fa[0].rho, fb[0].rho);
}

#[test]
fn orbit_dimensions() {
    let q = ToricQuotient::new(hirzebruch(1)).unwrap();
    let orbits = q.orbits().unwrap();
    // 1 open orbit, 4 curves, 4 points.
    let count = |k| orbits.iter().filter(|o| o.dimension == k).count();
    assert_eq!((count(2), count(1), count(0)), (1, 4, 4));
}
