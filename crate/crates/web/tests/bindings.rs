use regsub_web::{census_doc, staircase_doc, t_perm_doc, MAX_DEMO_P};

#[test]
fn census_doc_matches_known_counts() {
    let r = census_doc(3, 3).unwrap();
    assert_eq!(r.reg_count_enumerated, Some(27));
    assert_eq!(r.b_h, Some(27));
    assert!(r.all_ok());
}

#[test]
fn census_doc_skips_instead_of_blocking_on_large_cases() {
    let r = census_doc(5, 5).unwrap();
    assert_eq!(r.b_h, None);
    assert!(r.skipped.iter().any(|s| s == "enumeration"));
}

#[test]
fn census_doc_rejects_bad_input() {
    assert!(census_doc(4, 4).is_err());
    assert!(census_doc(3, 7).is_err());
    assert!(census_doc(MAX_DEMO_P + 4, MAX_DEMO_P + 4).is_err());
}

#[test]
fn staircase_marks_monomials_by_total_degree() {
    let s = staircase_doc(5, 6).unwrap();
    assert_eq!(s.cells.len(), 25);
    for c in &s.cells {
        assert_eq!(c.in_ik, c.i + c.j >= 6, "({}, {})", c.i, c.j);
    }
    assert_eq!((s.dim_ik, s.dim_ak, s.dim_bk), (6, 3, 3));
    // a^4 b^j is killed by a for every j; a^i b^4 by b.
    for c in &s.cells {
        if c.i == 4 && c.in_ik {
            assert!(c.in_ak);
        }
        if c.j == 4 && c.in_ik {
            assert!(c.in_bk);
        }
    }
}

#[test]
fn t_perm_doc_reports_order_and_cycle_type() {
    // g = 0: t is the pure translation along x, p² cycles of length p.
    let zero = t_perm_doc(3, "000000000", false).unwrap();
    assert_eq!(zero.order, 3);
    assert!(zero.order_is_p);
    assert_eq!(zero.cycle_type.get(&3), Some(&9));

    // g = 1 at (0, 0) only: the sum over an x-cycle is non-zero, so the order jumps to p².
    let lifted = t_perm_doc(3, "100000000", false).unwrap();
    assert_eq!(lifted.order, 9);
    assert!(!lifted.order_is_p);

    assert!(t_perm_doc(3, "12", false).is_err());
    assert!(t_perm_doc(3, "300000000", true).is_err());
}
