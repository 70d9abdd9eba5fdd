use stiefel_bp::arith::{binom_int, int_vp};
use stiefel_bp::obstruction::{
    check_bp_adams, check_sq2, derive_constraint, evaluate, scan, steenrod_family, MapQuery, ScanRanges, Verdict,
};
use stiefel_bp::{Exec, Prime};

#[test]
fn no_criterion_fires_where_a_map_exists() {
    for n in 1..=30 {
        for k in 1..=n {
            for k2 in 1..=k {
                let r = evaluate(&MapQuery::new(n, k, n, k2).unwrap());
                assert_eq!(r.verdict, Verdict::Inconclusive, "{n},{k} -> {n},{k2}: {r:?}");
            }
        }
    }
}

#[test]
fn sq2_fires_on_the_whole_family() {
    let mut accepted = 0;
    for r in 1..=500 {
        match steenrod_family(r) {
            Ok(q) => {
                assert!(check_sq2(&q).fires);
                assert_eq!((q.n, q.k, q.m, q.l), (16 * r - 5, 7, 16 * r - 2, 10));
                accepted += 1;
            }
            Err(_) => assert!(![8, 7, 3].contains(&(r % 9)) || ![2, 1, 5].contains(&(r % 7))),
        }
    }
    // 3 * 3 residues out of 63
    assert!(accepted >= 60, "{accepted}");
}

#[test]
fn bp_adams_fires_on_the_square_family() {
    let mut hits = 0;
    for n in (2..=64).step_by(2) {
        for m in 2..=n {
            let odd = int_vp(&binom_int(m as u64, 2), Prime::TWO) == 0;
            let exists_s = (1..7).any(|s| m < (1 << s) + 1 && (1 << s) < n);
            if !(odd && exists_s) {
                continue;
            }
            let q = MapQuery::new(n, n, m, m - 1).unwrap();
            let c = check_bp_adams(&q);
            assert!(c.fires, "{q}");
            let s = c.witness["s"].as_u64().unwrap() as u32;
            let constraint = derive_constraint(&q, s).unwrap();
            assert!(!constraint.satisfiable, "{q}");
            hits += 1;
        }
    }
    assert!(hits > 100);
}

#[test]
fn constraint_verdict_matches_bp_adams() {
    let ranges = ScanRanges { n: 1..=14, k: 1..=14, m: 1..=14, l: 1..=14 };
    for report in scan(&ranges, Exec::Parallel) {
        let q = report.query();
        let fires = check_bp_adams(&q);
        if fires.fires {
            let s = fires.witness["s"].as_u64().unwrap() as u32;
            assert!(!derive_constraint(&q, s).unwrap().satisfiable, "{q}");
        } else {
            assert!(derive_constraint(&q, 1).is_err() && derive_constraint(&q, 2).is_err());
        }
    }
}
