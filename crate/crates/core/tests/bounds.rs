use rm_pmepr::algebra::Modulus;
use rm_pmepr::bounds::{class_tables, lb_closed_form, tightness_verdict, SweepBudget, Verdict, TIGHT_TOL};
use rm_pmepr::constructions::{alpha_beta_family, davis_jedwab_family, AlphaBetaMember};
use rm_pmepr::exec::Executor;
use rm_pmepr::spectral::coset_lower_bound;

fn z(q: u32) -> Modulus {
    Modulus::new(q).unwrap()
}

/// The first family member of every class, in table order.
fn one_per_class(q: u32, p: u32, m: usize) -> Vec<(f64, AlphaBetaMember)> {
    let fam = alpha_beta_family(z(q), p, m).unwrap();
    class_tables(z(q), p, m)
        .unwrap()
        .into_iter()
        .map(|row| {
            let mem = fam.iter().find(|x| (x.rep.upper_bound - row.row.bound).abs() < 1e-9).unwrap().clone();
            (row.row.bound, mem)
        })
        .collect()
}

#[test]
fn octal_p4_classes_are_tight() {
    let ex = Executor::new(0).unwrap();
    let budget = SweepBudget::default();
    for (bound, mem) in one_per_class(8, 4, 3) {
        let r = tightness_verdict(&mem.rep, &budget, &ex).unwrap();
        assert!(!r.sampled);
        let measured = r.measured.unwrap();
        assert!((measured - bound).abs() <= TIGHT_TOL, "bound {bound}: measured {measured}");
        assert_eq!(r.tight, Verdict::Tight);
    }
}

#[test]
fn p8_classes_are_tight_for_q16() {
    let ex = Executor::new(0).unwrap();
    let rows = one_per_class(16, 8, 3);
    assert_eq!(rows.len(), 9);
    for (bound, mem) in rows {
        let r = tightness_verdict(&mem.rep, &SweepBudget::default(), &ex).unwrap();
        assert_eq!(r.words, 1 << 16);
        assert!((r.measured.unwrap() - bound).abs() <= TIGHT_TOL, "bound {bound}: {:?}", r.measured);
    }
}

#[test]
fn second_octal_class_at_m4_peaks_at_three() {
    let ex = Executor::new(0).unwrap();
    let (bound, mem) = one_per_class(8, 4, 4).swap_remove(1);
    assert_eq!(bound, 3.0);
    let r = tightness_verdict(&mem.rep, &SweepBudget::default(), &ex).unwrap();
    assert_eq!(r.words, 32768);
    assert!((r.measured.unwrap() - 3.0).abs() <= 0.01);
}

#[test]
fn golay_verdicts() {
    let ex = Executor::new(0).unwrap();
    let budget = SweepBudget::default();
    let r = tightness_verdict(&davis_jedwab_family(z(4), 3).unwrap()[0], &budget, &ex).unwrap();
    assert!((r.measured.unwrap() - 2.0).abs() <= 0.01);
    assert_eq!(r.tight, Verdict::Tight);
    for q in [2u32, 6] {
        let c = (std::f64::consts::PI / q as f64).cos();
        for rep in davis_jedwab_family(z(q), 4).unwrap() {
            let r = tightness_verdict(&rep, &budget, &ex).unwrap();
            assert!((r.lower - (1.0 + c * c)).abs() < 1e-9);
            assert!(r.measured.unwrap() >= 1.0 + c * c - 0.01);
        }
    }
}

#[test]
fn measured_values_lie_between_the_bounds() {
    let ex = Executor::new(0).unwrap();
    let budget = SweepBudget::default();
    for (q, p) in [(2u32, 2u32), (4, 2), (4, 4), (8, 4)] {
        for m in [3usize, 4] {
            for mem in alpha_beta_family(z(q), p, m).unwrap().into_iter().step_by(5) {
                let r = tightness_verdict(&mem.rep, &budget, &ex).unwrap();
                let measured = r.measured.unwrap();
                assert!(r.lower <= r.upper + 1e-9);
                assert!(measured >= r.lower - TIGHT_TOL && measured <= r.upper + TIGHT_TOL, "{q} {p} {m}: {r:?}");
            }
        }
    }
}

#[test]
fn closed_form_is_a_restriction_of_the_full_transform() {
    for (q, p) in [(4u32, 2u32), (4, 4), (8, 4), (8, 8), (16, 8)] {
        for m in [3usize, 4] {
            for mem in alpha_beta_family(z(q), p, m).unwrap().into_iter().step_by(3) {
                let lb = lb_closed_form(&mem.rep.kernel, m).unwrap();
                assert!(lb <= coset_lower_bound(&mem.rep.gbf).unwrap() + 1e-9);
                assert!(lb <= mem.rep.upper_bound + 1e-9);
            }
        }
    }
}

#[test]
fn cumulative_counts() {
    let t = class_tables(z(8), 4, 5).unwrap();
    let f = 120;
    assert_eq!(t.iter().map(|r| r.cosets).collect::<Vec<_>>(), [f / 2, 2 * f, 4 * f, f]);
    assert_eq!(t[1].cumulative, 5 * f / 2);
    let t = class_tables(z(16), 8, 4).unwrap();
    assert_eq!(t.last().unwrap().cumulative, 63 * 12);
}
