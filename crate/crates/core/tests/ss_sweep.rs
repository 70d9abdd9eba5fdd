use stiefel_bp::ss::{cross_check, run_pages, SsConfig};
use stiefel_bp::{Exec, Prime};

#[test]
fn engine_matches_closed_form_up_to_ten() {
    for n in 1..=10 {
        for k in 1..=n {
            for p in [Prime::TWO, Prime::THREE] {
                let cfg = SsConfig::covering(n, k, p).unwrap();
                let report = cross_check(&cfg, Exec::Parallel);
                assert!(report.agree, "{report:?}");
            }
        }
    }
}

#[test]
fn every_page_is_the_homology_of_the_one_before() {
    for (n, k) in [(6, 4), (7, 3), (8, 3), (8, 8)] {
        for p in [Prime::TWO, Prime::THREE] {
            let cfg = SsConfig::new(n, k, p).unwrap();
            let pages = run_pages(&cfg, Exec::Parallel);
            assert_eq!(pages.first().unwrap().r, 2);
            assert_eq!(pages.last().unwrap().r, 2 * n + 1);
            for pair in pages.windows(2) {
                assert!(pair[0].d_squared_vanishes());
                for degree in 0..=cfg.validity_window() {
                    for s in (0..=degree).step_by(2) {
                        assert_eq!(
                            pair[0].homology_shape(s, degree - s).unwrap(),
                            pair[1].shape(s, degree - s).unwrap(),
                            "({n},{k}) p={} r={} at ({s},{})",
                            p.get(),
                            pair[0].r,
                            degree - s
                        );
                    }
                }
            }
        }
    }
}
