//! Closed-form values against the exact LP, uniqueness of the conic
//! coefficients, dual-norm divergence, and the lsc-failure witnesses for
//! the truncated Hilbert-space program.

use gaplab_core::hilbert::{
    dual_norm_lower_bound, dual_norm_lower_bound_sq, harmonic, lsc_failure_witness,
    project_cone_combination, recover_primal, truncated_dual_optimum, truncated_lp, value,
    HilbertModel, HilbertValueOracle, OddVector,
};
use gaplab_core::lp::{solve, Status};
use gaplab_core::oracle::{check_positive_homogeneity, check_subadditivity, Point};
use gaplab_core::rat::{rat, Rat};
use gaplab_core::seq::SparseSeq;
use gaplab_core::xreal::XReal;
use gaplab_core::Error;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn fin(v: Rat) -> XReal {
    XReal::Finite(v)
}

#[test]
fn generator_gram_matrix_is_the_identity_exactly() {
    let m = HilbertModel::new(6);
    for n in 1..=6 {
        for k in 1..=6 {
            let expect = if n == k { Rat::ONE } else { Rat::ZERO };
            assert_eq!(m.gram(n, k), expect, "gram({n}, {k})");
        }
        let e = m.eta(n);
        assert!(e.is_positive() && e < Rat::ONE);
        assert!(m.musq(n).is_positive() && m.musq(n) < Rat::ONE);
    }
    // The square-summability margin: partial sums of eta^2 stay below 1/3.
    for big in [1u32, 2, 8, 32] {
        let model = HilbertModel::new(big);
        let mut acc = Rat::ZERO;
        for n in 1..=big {
            let e = model.eta(n);
            acc = &acc + &(&e * &e);
        }
        assert!(acc < rat(1, 3), "eta tail too heavy at {big}");
    }
}

#[test]
fn closed_form_value_and_domain() {
    let m = HilbertModel::new(4);
    let y = OddVector::from_pairs([(1, rat(1, 2))]);
    let v = value(&m, &y);
    match &v {
        XReal::Finite(r) => {
            assert_eq!(r, &(-&(&m.mu_hat(1) / &rat(2, 1))));
            assert!((r.approx() + 0.43301).abs() < 1e-5);
        }
        _ => panic!("finite value expected"),
    }
    assert_eq!(value(&m, &OddVector::zero()), fin(Rat::ZERO));
    assert_eq!(
        value(&m, &OddVector::from_pairs([(1, rat(-1, 1))])),
        XReal::PosInf
    );
}

#[test]
fn exact_lp_reproduces_the_closed_form_and_the_unique_point() {
    let m = HilbertModel::new(4);
    let y = OddVector::from_pairs([(1, rat(1, 2))]);
    let lp = truncated_lp(&m, &y).unwrap();
    let sol = solve(&lp).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    assert_eq!(sol.value, value(&m, &y), "LP and closed form disagree");
    assert_eq!(
        sol.primal,
        Some(vec![Rat::ONE, Rat::ZERO, Rat::ZERO, Rat::ZERO]),
        "the unique conic point is lambda_1 = gamma_1/eta_1 = 1"
    );

    let m8 = HilbertModel::new(8);
    let mut rng = StdRng::seed_from_u64(301);
    for _ in 0..20 {
        let y = OddVector::from_pairs(
            (1..=3u32).map(|n| (n, rat(rng.gen_range(0..=32), 16))),
        );
        let lp = truncated_lp(&m8, &y).unwrap();
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, Status::Optimal);
        assert_eq!(sol.value, value(&m8, &y));
        let mut dense = vec![Rat::ZERO; 8];
        for (n, l) in recover_primal(&m8, &y).unwrap() {
            dense[(n - 1) as usize] = l;
        }
        assert_eq!(
            sol.primal,
            Some(dense),
            "feasible point is not the recovered one"
        );
    }
}

#[test]
fn primal_recovery_is_the_exact_inverse_of_projection() {
    let m = HilbertModel::new(4);
    // y = eta_1 e_1 corresponds to lambda = (1, 0, 0, ...).
    let y = OddVector::from_pairs([(1, m.eta(1))]);
    assert_eq!(recover_primal(&m, &y).unwrap(), vec![(1, Rat::ONE)]);
    assert_eq!(recover_primal(&m, &OddVector::zero()).unwrap(), vec![]);
    let y2 = OddVector::from_pairs([(2, &rat(3, 1) * &m.eta(2))]);
    assert_eq!(recover_primal(&m, &y2).unwrap(), vec![(2, rat(3, 1))]);
    assert_eq!(
        recover_primal(&m, &OddVector::from_pairs([(1, rat(-1, 4))])),
        Err(Error::NotInDomain)
    );

    let mut rng = StdRng::seed_from_u64(302);
    for _ in 0..50 {
        let mut lambda: Vec<(u32, Rat)> = Vec::new();
        for n in 1..=4u32 {
            if rng.gen_range(0..2u8) == 1 {
                lambda.push((n, rat(rng.gen_range(0..=20), 4)));
            }
        }
        let y = project_cone_combination(&m, &lambda);
        let back = recover_primal(&m, &y).unwrap();
        let nonzero: Vec<(u32, Rat)> =
            lambda.into_iter().filter(|(_, l)| !l.is_zero()).collect();
        assert_eq!(back, nonzero);
    }
}

#[test]
fn dual_norm_floor_matches_the_geometric_closed_form_and_diverges() {
    let m1 = HilbertModel::new(1);
    assert_eq!(dual_norm_lower_bound_sq(&m1), rat(3, 4));
    assert!((dual_norm_lower_bound(&m1).approx() - 0.86603).abs() < 1e-5);

    let m4 = HilbertModel::new(4);
    assert_eq!(dual_norm_lower_bound_sq(&m4), rat(939, 256));
    assert!((dual_norm_lower_bound(&m4).approx() - 1.91520).abs() < 1e-5);

    let mut quarter_pow = Rat::ONE;
    let mut prev_sq = Rat::ZERO;
    let mut prev = Rat::ZERO;
    for n in 1..=64u32 {
        quarter_pow = &quarter_pow / &rat(4, 1);
        let m = HilbertModel::new(n);
        let sq = dual_norm_lower_bound_sq(&m);
        // Independent geometric form N - (1 - 4^{-N})/3.
        let closed = &Rat::from_int(n as i64)
            - &(&(&Rat::ONE - &quarter_pow) / &rat(3, 1));
        assert_eq!(sq, closed, "closed form fails at N = {n}");
        let floor = &Rat::from_int(n as i64) - &rat(1, 3);
        assert!(sq > floor, "divergence floor fails at N = {n}");
        assert!(sq > prev_sq, "squared bound must increase at N = {n}");
        let b = dual_norm_lower_bound(&m);
        assert!(b > prev, "bound must increase at N = {n}");
        prev_sq = sq;
        prev = b;
    }
}

#[test]
fn each_truncation_has_a_dual_optimum_attaining_the_value() {
    let m = HilbertModel::new(4);
    let y = OddVector::from_pairs([(1, m.eta(1))]);
    let opt = truncated_dual_optimum(&m, &y).unwrap();
    assert!(opt.strong_duality);
    assert_eq!(opt.dual_value, value(&m, &y));
    assert_eq!(opt.lambda, vec![(1, -&m.mu_hat(1))]);

    let zero = truncated_dual_optimum(&m, &OddVector::zero()).unwrap();
    assert_eq!(zero.dual_value, fin(Rat::ZERO));

    let m8 = HilbertModel::new(8);
    let mut rng = StdRng::seed_from_u64(303);
    for _ in 0..20 {
        let y = OddVector::from_pairs(
            (1..=3u32).map(|n| (n, rat(rng.gen_range(0..=32), 16))),
        );
        let opt = truncated_dual_optimum(&m8, &y).unwrap();
        assert!(opt.strong_duality);
        assert_eq!(opt.dual_value, value(&m8, &y));
    }
    assert!(matches!(
        truncated_dual_optimum(&m, &OddVector::from_pairs([(2, rat(-1, 8))])),
        Err(Error::NotInDomain)
    ));
}

#[test]
fn lsc_failure_rows_sink_the_value_while_approaching_the_base() {
    let m = HilbertModel::new(8);
    let rows = lsc_failure_witness(&m, &OddVector::zero(), 4).unwrap();
    assert_eq!(rows.len(), 5);

    // m = 0: the base itself.
    assert_eq!(rows[0].b_m, OddVector::zero());
    assert_eq!(rows[0].distance, Rat::ZERO);
    assert_eq!(rows[0].value_bound, Rat::ZERO);
    assert_eq!(rows[0].value, fin(Rat::ZERO));

    // m = 1: H_1 = 1, so the step is exactly 1 and the value is -mu_hat(1).
    assert_eq!(rows[1].value, fin(-&m.mu_hat(1)));
    assert_eq!(rows[1].distance, Rat::ONE);

    // m = 4: H_4 = 25/12; the analytic ceiling -mu_1 sqrt(H_4) collapses to
    // exactly -5/4, and the perturbation norm is sqrt(41/60).
    assert_eq!(harmonic(4), rat(25, 12));
    assert!((rows[4].value_bound.approx() + 1.25).abs() < 1e-12);
    assert!((rows[4].distance.approx() - 0.82664).abs() < 1e-5);

    for (i, row) in rows.iter().enumerate() {
        assert!(
            row.value <= fin(row.value_bound.clone()),
            "value above its ceiling at m = {i}"
        );
        if i >= 1 {
            assert!(
                row.value_bound < rows[i - 1].value_bound,
                "ceiling must strictly decrease at m = {i}"
            );
        }
        if i >= 2 {
            assert!(
                row.distance < rows[i - 1].distance,
                "distance must strictly decrease at m = {i}"
            );
        }
    }

    assert!(matches!(
        lsc_failure_witness(&m, &OddVector::from_pairs([(1, rat(-1, 2))]), 2),
        Err(Error::NotInDomain)
    ));
}

#[test]
#[should_panic(expected = "witness depth exceeds the truncation")]
fn lsc_witness_depth_is_capped_by_the_truncation() {
    let m = HilbertModel::new(2);
    let _ = lsc_failure_witness(&m, &OddVector::zero(), 3);
}

#[test]
fn value_function_is_sublinear_with_zero_tolerance() {
    let f = HilbertValueOracle {
        model: HilbertModel::new(8),
    };
    let scales = [rat(1, 2), rat(2, 1), rat(5, 1)];
    let hom = check_positive_homogeneity(&f, 60, &scales, &Rat::ZERO, 91).unwrap();
    assert!(hom.pass, "homogeneity witnesses: {:?}", hom.witnesses);
    let sub = check_subadditivity(&f, 60, &Rat::ZERO, 92).unwrap();
    assert!(sub.pass, "subadditivity witnesses: {:?}", sub.witnesses);
}

#[test]
fn value_is_exactly_linear_on_the_domain() {
    let m = HilbertModel::new(8);
    let mut rng = StdRng::seed_from_u64(304);
    for _ in 0..100 {
        let g1 = SparseSeq::from_pairs(
            (1..=4u32).map(|n| (n, rat(rng.gen_range(0..=16), 8))),
        );
        let g2 = SparseSeq::from_pairs(
            (5..=8u32).map(|n| (n, rat(rng.gen_range(0..=16), 8))),
        );
        let a = rat(rng.gen_range(0..=12), 4);
        let v1 = value(&m, &OddVector { gammas: g1.clone() });
        let v2 = value(&m, &OddVector { gammas: g2.clone() });
        let sum = value(
            &m,
            &OddVector {
                gammas: g1.plus(&g2),
            },
        );
        assert_eq!(sum, v1.clone().checked_add(&v2).unwrap());
        let scaled = value(
            &m,
            &OddVector {
                gammas: g1.scale(&a),
            },
        );
        if a.is_zero() {
            assert_eq!(scaled, fin(Rat::ZERO));
        } else {
            assert_eq!(scaled, v1.scale_pos(&a));
        }
    }
}
