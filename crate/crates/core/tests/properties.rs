use nalgebra::DMatrix;
use parsum_core::generators::{random_projection_pair, random_unitary, seeded_rng};
use parsum_core::parallel_sum::check_projection;
use parsum_core::perturbation::{
    error_matrix, f_eval, factorization_residual, h_and_t, lambda_coeff, minimize_f, mu_coeff, one_sided_bounds,
    one_sided_error, parameterized_bound, two_sided_shared_bounds, two_sided_shared_error,
};
use parsum_core::spectral::{abs_hermitian, loewner_margin};
use parsum_core::upper_bounds::{commutator_norm, compare_with_c_bound};
use parsum_core::*;
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn norm(m: &HermitianMatrix) -> f64 {
    spectral_norm(m).unwrap()
}

fn dist(a: &HermitianMatrix, b: &HermitianMatrix) -> f64 {
    norm(&(a - b))
}

/// `G G*` with the trailing `n - rank` columns of `G` zeroed.
fn gram(n: usize, entries: &[f64], rank: usize) -> PsdMatrix {
    let g = CMatrix::from_fn(n, n, |i, j| {
        if j < rank {
            C64::new(entries[2 * (i * n + j)], entries[2 * (i * n + j) + 1])
        } else {
            C64::new(0.0, 0.0)
        }
    });
    PsdMatrix::new(HermitianMatrix::new(&g * g.adjoint(), &tol()).unwrap(), &tol()).unwrap()
}

fn psd_of_dim(n: usize) -> impl Strategy<Value = PsdMatrix> {
    (prop::collection::vec(-2.0f64..2.0, 2 * n * n), 0..=n).prop_map(move |(v, r)| gram(n, &v, r))
}

fn hermitian_of_dim(n: usize) -> impl Strategy<Value = HermitianMatrix> {
    prop::collection::vec(-3.0f64..3.0, 2 * n * n).prop_map(move |v| {
        let m = CMatrix::from_fn(n, n, |i, j| C64::new(v[2 * (i * n + j)], v[2 * (i * n + j) + 1]));
        HermitianMatrix::new((&m + m.adjoint()).scale(0.5), &tol()).unwrap()
    })
}

fn psd() -> impl Strategy<Value = PsdMatrix> {
    (1usize..=6).prop_flat_map(psd_of_dim)
}

fn psd_pair() -> impl Strategy<Value = (PsdMatrix, PsdMatrix)> {
    (1usize..=6).prop_flat_map(|n| (psd_of_dim(n), psd_of_dim(n)))
}

fn problem() -> impl Strategy<Value = PerturbationProblem> {
    (1usize..=6).prop_flat_map(|n| (psd_of_dim(n), psd_of_dim(n), psd_of_dim(n), psd_of_dim(n))).prop_map(
        |(a, b, x, y)| PerturbationProblem::new(a, b, x, y).unwrap(),
    )
}

/// Two PSD matrices diagonal in one random unitary basis.
fn commuting_pair() -> impl Strategy<Value = (PsdMatrix, PsdMatrix)> {
    (1usize..=6, any::<u64>()).prop_flat_map(|(n, seed)| {
        (
            Just((n, seed)),
            prop::collection::vec(0.0f64..3.0, n),
            prop::collection::vec(0.0f64..3.0, n),
        )
            .prop_map(|((n, seed), d1, d2)| {
                let u = random_unitary(&mut seeded_rng(seed), n, true);
                let conj = |d: &[f64]| {
                    let m = &u * DMatrix::from_fn(n, n, |i, j| C64::new(if i == j { d[i] } else { 0.0 }, 0.0)) * u.adjoint();
                    PsdMatrix::from_matrix((&m + m.adjoint()).scale(0.5), &tol()).unwrap()
                };
                (conj(&d1), conj(&d2))
            })
    })
}

// spectral core

proptest! {
    #[test]
    fn eigendecomposition_reconstructs(h in (1usize..=7).prop_flat_map(hermitian_of_dim)) {
        let e = eig_hermitian(&h).unwrap();
        let u = e.eigenvectors();
        let n = h.dim();
        let lam = CMatrix::from_fn(n, n, |i, j| C64::new(if i == j { e.eigenvalues()[i] } else { 0.0 }, 0.0));
        let recon = operator_norm(&(u * lam * u.adjoint() - h.as_matrix())).unwrap();
        prop_assert!(recon <= tol().residual_tol * (1.0 + norm(&h)));
        prop_assert!(operator_norm(&(u.adjoint() * u - CMatrix::identity(n, n))).unwrap() <= tol().residual_tol);
        prop_assert!(e.eigenvalues().windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn penrose_identities(a in psd()) {
        let r = penrose_residuals(&a, &tol()).unwrap();
        prop_assert!(r.within(&tol()), "{:?}", r);
        let ap = pinv_psd(&a, &tol()).unwrap();
        let (m, mp) = (a.as_matrix(), ap.as_matrix());
        prop_assert!(operator_norm(&(m * mp - mp * m)).unwrap() <= tol().residual_tol * (1.0 + r.norm * r.pinv_norm));
    }

    #[test]
    fn square_root_squares_back(a in psd()) {
        let t = tol();
        let r = psd_sqrt(&a, &t).unwrap();
        let sq = HermitianMatrix::new(r.as_matrix() * r.as_matrix(), &t).unwrap();
        prop_assert!(dist(&sq, &a) <= t.residual_tol * (1.0 + norm(&a)));
    }

    // A roundoff eigenvalue near 1e-16 is cut from A but its square root is
    // not cut from A^(1/2); with the spectrum gapped away from zero a looser
    // cutoff makes both sides agree on the rank.
    #[test]
    fn square_root_commutes_with_pseudoinverse(
        (n, seed, d) in (1usize..=6, any::<u64>())
            .prop_flat_map(|(n, s)| (Just(n), Just(s), prop::collection::vec(prop_oneof![Just(0.0), 0.1f64..4.0], n))),
    ) {
        let t = ToleranceConfig { rank_rel_tol: Some(1e-6), ..tol() };
        let u = random_unitary(&mut seeded_rng(seed), n, true);
        let m = &u * DMatrix::from_fn(n, n, |i, j| C64::new(if i == j { d[i] } else { 0.0 }, 0.0)) * u.adjoint();
        let m = (&m + m.adjoint()).scale(0.5);
        let a = PsdMatrix::from_matrix(m, &t).unwrap();
        let lhs = psd_sqrt(&pinv_psd(&a, &t).unwrap(), &t).unwrap();
        let rhs = pinv_psd(&psd_sqrt(&a, &t).unwrap(), &t).unwrap();
        prop_assert!(dist(&lhs, &rhs) <= t.residual_tol * (1.0 + norm(&lhs)));
    }

    #[test]
    fn loewner_monotonicity((a, c) in psd_pair()) {
        let t = tol();
        let b = &a + &c;
        prop_assert!(loewner_geq(&b, &a, &t).unwrap());
        prop_assert!(norm(&a) <= norm(&b) + t.psd_tol);
        prop_assert!(range_contained(&a, &b, &t).unwrap());
    }

    #[test]
    fn spectral_norm_is_a_norm(
        (x, y) in (1usize..=6).prop_flat_map(|n| (hermitian_of_dim(n), hermitian_of_dim(n))),
        s in -5.0f64..5.0,
    ) {
        prop_assert!((norm(&x.scale(s)) - s.abs() * norm(&x)).abs() <= 1e-12 * (1.0 + norm(&x)));
        prop_assert!(norm(&(&x + &y)) <= norm(&x) + norm(&y) + 1e-12);
    }
}

// parallel sum

proptest! {
    #[test]
    fn parallel_sum_identities_and_norm_bound((a, b) in psd_pair()) {
        let t = tol();
        let (na, nb) = (norm(&a), norm(&b));
        let r = parallel_sum_identity_residuals(&a, &b, &t).unwrap();
        prop_assert!(r.max() <= t.residual_tol * (1.0 + na + nb), "{:?}", r);
        let ps = parallel_sum(&a, &b, &t).unwrap();
        prop_assert!(norm(&ps) <= parallel_sum_norm_bound(&a, &b).unwrap() + t.psd_tol);
    }

    #[test]
    fn parallel_sum_range_is_the_intersection((a, b) in psd_pair()) {
        let t = tol();
        let ps = parallel_sum(&a, &b, &t).unwrap();
        let rank = |m: &PsdMatrix| numerical_rank(m, &t).unwrap();
        // R(A) + R(B) = R(A + B) for PSD A, B
        let intersection = rank(&a) + rank(&b) - rank(&(&a + &b));
        // the relative cutoff is tiny, so judge the rank of A:B against its inputs' scale
        let scale = norm(&a).max(norm(&b));
        let cut = 1e-9 * scale;
        let ps_rank = ps.eig().unwrap().eigenvalues().iter().filter(|&&v| v > cut).count();
        prop_assert_eq!(ps_rank, intersection);
    }

    #[test]
    fn parallel_sum_is_homogeneous((a, b) in psd_pair(), s in 0.01f64..100.0) {
        let t = tol();
        let lhs = parallel_sum(&a.scaled(s).unwrap(), &b.scaled(s).unwrap(), &t).unwrap();
        let rhs = parallel_sum(&a, &b, &t).unwrap().scale(s);
        prop_assert!(dist(&lhs, &rhs) <= t.residual_tol * (1.0 + norm(&rhs)));
    }

    #[test]
    fn projection_parallel_sum_is_half_the_intersection(seed in any::<u64>(), n in 1usize..=8) {
        let t = tol();
        let (p, q) = random_projection_pair(&mut seeded_rng(seed), n, true);
        let p0 = range_intersection_projector(&p, &q, &t).unwrap();
        check_projection(&p0, &t).unwrap();
        let ps = parallel_sum(&p, &q, &t).unwrap();
        prop_assert!(dist(&ps, &p0.scale(0.5)) <= t.residual_tol);
    }
}

// upper bounds

proptest! {
    #[test]
    fn join_is_a_common_upper_bound_below_c((x, y) in psd_pair()) {
        let t = tol();
        let w = join(&x, &y, &t).unwrap();
        let c = c_bound(&x, &y, &t).unwrap();
        let j = w.join.as_hermitian();
        prop_assert!(loewner_geq(j, &x, &t).unwrap());
        prop_assert!(loewner_geq(j, &y, &t).unwrap());
        prop_assert!(loewner_geq(&c, j, &t).unwrap());
        let zero = HermitianMatrix::zeros(x.dim());
        let scale = norm(&(&x + &y));
        prop_assert!(loewner_margin(&w.quarter_gap, &zero).unwrap() >= t.psd_floor(scale));
        prop_assert!(loewner_margin(&w.w, &zero).unwrap() >= t.psd_floor(norm(&w.w)));
    }

    #[test]
    fn join_norm_sandwich((x, y) in psd_pair()) {
        let t = tol();
        let jn = norm(&join(&x, &y, &t).unwrap().join);
        let cn = norm(&c_bound(&x, &y, &t).unwrap());
        prop_assert!(norm(&x).max(norm(&y)) - t.psd_tol * (1.0 + jn) <= jn);
        prop_assert!(jn <= cn + t.psd_tol * (1.0 + cn));
        prop_assert!(cn <= norm(&(&x + &y)) + t.psd_tol * (1.0 + cn));
    }

    #[test]
    fn join_is_homogeneous((x, y) in psd_pair(), s in 0.01f64..100.0) {
        let t = tol();
        let lhs = join(&x.scaled(s).unwrap(), &y.scaled(s).unwrap(), &t).unwrap().join;
        let rhs = join(&x, &y, &t).unwrap().join.scale(s);
        prop_assert!(dist(&lhs, &rhs) <= t.residual_tol * (1.0 + norm(&rhs)));
    }

    #[test]
    fn scaled_join_dominates((x, y) in psd_pair(), alpha in 0.1f64..10.0, beta in 0.1f64..10.0) {
        let t = tol();
        let z = join_scaled(&x, &y, alpha, beta, &t).unwrap();
        prop_assert!(loewner_geq(&z.scale(alpha), &x, &t).unwrap());
        prop_assert!(loewner_geq(&z.scale(beta), &y, &t).unwrap());
    }

    #[test]
    fn commuting_join_matches_closed_form((x, y) in commuting_pair()) {
        let t = tol();
        let closed = join_commuting(&x, &y, &t).unwrap();
        let j = join(&x, &y, &t).unwrap().join;
        prop_assert!(dist(&closed, &j) <= t.residual_tol * (1.0 + norm(&j)));
        prop_assert!((norm(&j) - norm(&x).max(norm(&y))).abs() <= t.psd_tol * (1.0 + norm(&j)));
    }

    #[test]
    fn ordered_join_is_the_larger((x, c) in psd_pair()) {
        let t = tol();
        let y = &x + &c;
        let j = join(&x, &y, &t).unwrap().join;
        prop_assert!(dist(&j, &y) <= t.residual_tol * (1.0 + norm(&y)));
    }

    #[test]
    fn projection_join(seed in any::<u64>(), n in 1usize..=8) {
        let t = tol();
        let (p, q) = random_projection_pair(&mut seeded_rng(seed), n, true);
        let closed = join_projections(&p, &q, &t).unwrap();
        let j = join(&p, &q, &t).unwrap().join;
        prop_assert!(dist(&closed, &j) <= t.residual_tol);
        let bounded = norm(&j) <= 1.0 + t.psd_tol;
        let commutes = commutator_norm(&p, &q).unwrap() <= t.residual_tol;
        prop_assert_eq!(bounded, commutes);
    }

    #[test]
    fn c_bound_equality_diagnostic((x, y) in psd_pair()) {
        prop_assert!(compare_with_c_bound(&x, &y, &tol()).unwrap().consistent(&tol()));
    }
}

// perturbation

proptest! {
    #[test]
    fn factorization_and_positivity(p in problem()) {
        let t = tol();
        let (h, tt) = h_and_t(&p, &t).unwrap();
        let r = factorization_residual(&p, &t).unwrap();
        prop_assert!(r <= t.residual_tol * (1.0 + norm(&h) + norm(&tt)));
        let zero = HermitianMatrix::zeros(p.dim());
        let scale = norm(&(p.a() + p.b())) + norm(&(p.x() + p.y()));
        prop_assert!(loewner_margin(&h, &zero).unwrap() >= t.psd_floor(scale));
        let e = error_matrix(&p, &t).unwrap();
        prop_assert!(loewner_margin(&e, &zero).unwrap() >= t.psd_floor(scale));
    }

    #[test]
    fn coefficient_order((a, b) in psd_pair()) {
        let t = tol();
        prop_assert!(mu_coeff(&a, &b, &t).unwrap() <= lambda_coeff(&a, &b, &t).unwrap() + t.psd_tol);
    }

    #[test]
    fn parameterized_bound_dominates_and_is_scale_invariant(
        p in problem(), alpha in 0.1f64..10.0, beta in 0.1f64..10.0,
    ) {
        let t = tol();
        let e = norm(&error_matrix(&p, &t).unwrap());
        let b = parameterized_bound(&p, alpha, beta, &t).unwrap();
        prop_assert!(e <= b + t.psd_tol * (1.0 + b));
        // the simplified form is f at t = beta / alpha
        let f = f_eval(&p, beta / alpha, &t).unwrap();
        prop_assert!(b <= f + t.psd_tol * (1.0 + f));
        for s in [0.1, 10.0] {
            let bs = parameterized_bound(&p, s * alpha, s * beta, &t).unwrap();
            prop_assert!((bs - b).abs() <= t.residual_tol * (1.0 + b));
        }
    }

    #[test]
    fn one_sided_is_the_y_free_case(p in problem()) {
        let t = tol();
        let g = one_sided_error(p.a(), p.b(), p.x(), &t).unwrap();
        let zero = PsdMatrix::zeros(p.dim());
        let q = PerturbationProblem::new(p.a().clone(), p.b().clone(), p.x().clone(), zero).unwrap();
        let e = error_matrix(&q, &t).unwrap();
        prop_assert!(dist(&g, &e) <= t.residual_tol * (1.0 + norm(&e)));
        let bd = one_sided_bounds(p.a(), p.b(), p.x(), &t).unwrap();
        prop_assert!(norm(&g) <= bd.sharp + t.psd_tol);
        prop_assert!(bd.sharp <= bd.classical + t.psd_tol);
    }

    #[test]
    fn shared_direction_bounds((a, b, z) in (1usize..=6).prop_flat_map(|n| (psd_of_dim(n), psd_of_dim(n), psd_of_dim(n))),
        alpha in 0.1f64..10.0, beta in 0.1f64..10.0,
    ) {
        let t = tol();
        let f = norm(&two_sided_shared_error(&a, &b, &z, alpha, beta, &t).unwrap());
        let bd = two_sided_shared_bounds(&a, &b, &z, alpha, beta, &t).unwrap();
        prop_assert!(f <= bd.refined + t.psd_tol * (1.0 + f));
        prop_assert!(bd.refined <= bd.simplified + t.psd_tol * (1.0 + bd.refined));
    }

    #[test]
    fn equal_pairs_attain_the_mu_bound((a, x) in psd_pair()) {
        let t = tol();
        let p = PerturbationProblem::new(a.clone(), a, x.clone(), x.clone()).unwrap();
        let e = norm(&error_matrix(&p, &t).unwrap());
        let mu_bound = mu_coeff(p.a(), p.b(), &t).unwrap() * norm(&join(&x, &x, &t).unwrap().join);
        prop_assert!((mu_bound - e).abs() <= t.psd_tol * (1.0 + norm(&x)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bound_chain(p in problem()) {
        let t = tol();
        let cfg = OptimizerConfig::default();
        let r = bound_report(&p, &cfg, &t).unwrap();
        let slack = |v: f64| t.psd_tol * (1.0 + v);
        for b in r.bounds() {
            prop_assert!(r.error_norm <= b + slack(b));
        }
        prop_assert!(r.f_inf_bound <= r.mu_bound + t.residual_tol);
        let jn = norm(&join(p.x(), p.y(), &t).unwrap().join);
        prop_assert!(r.mu_bound <= r.lambda * jn + slack(r.lambda * jn));
        prop_assert!(r.lambda * jn <= r.ad_bound + slack(r.ad_bound));

        // minimize_f post-conditions
        let m = minimize_f(&p, &cfg, &t).unwrap();
        prop_assert_eq!(m.value, f_eval(&p, m.t, &t).unwrap());
        for s in cfg.log_grid() {
            prop_assert!(m.value <= f_eval(&p, s.exp(), &t).unwrap() + cfg.refine_tol * (1.0 + m.value));
        }
    }

    #[test]
    fn spectral_absolute_value_squares_back(h in (1usize..=6).prop_flat_map(hermitian_of_dim)) {
        let t = tol();
        let a = abs_hermitian(&h).unwrap();
        let sq = HermitianMatrix::new(a.as_matrix() * a.as_matrix(), &t).unwrap();
        let h2 = HermitianMatrix::new(h.as_matrix() * h.as_matrix(), &t).unwrap();
        prop_assert!(dist(&sq, &h2) <= t.residual_tol * (1.0 + norm(&h2)));
    }
}
