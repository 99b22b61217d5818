use std::f64::consts::PI;

use proptest::prelude::*;
use reflect_core::constants::{estimate_c_with, operator_norm, reflection_norm, CConfig};
use reflect_core::coxeter::{build_graph, classify, cosine_matrix, order_matrix, DEFAULT_ORDER_CAP};
use reflect_core::decomposition::{decompose, hilbert_pairs, StripKind, StripTestConfig};
use reflect_core::fixtures::{self, fixture};
use reflect_core::group::{
    averaging_projection, complement_bound_slack, coordinate_projection, four_squares_residual,
    generate_from_reflections, invariant_product, product_projection,
};
use reflect_core::linalg::plane_rotation;
use reflect_core::polytope::Membership;
use reflect_core::rational::{to_f64, QVector, Rational};
use reflect_core::reflections::{
    angle, commute, make_reflection, max_isometry_violation, orthogonal_reflection, product_order, sign_change,
    ProductOrder, Reflection,
};
use reflect_core::spaces::{norm_axioms_check, sample_sphere, Exponent, Functional, NormSpec, Vector};
use reflect_core::Matrix;

fn exponent() -> impl Strategy<Value = Exponent> {
    prop_oneof![
        4 => (1.0f64..6.0).prop_map(Exponent::Finite),
        1 => Just(Exponent::Finite(1.0)),
        1 => Just(Exponent::Infinity),
    ]
}

fn ideal_spec() -> impl Strategy<Value = NormSpec> {
    prop_oneof![
        (1usize..6, exponent()).prop_map(|(n, p)| NormSpec::lp(n, p).unwrap()),
        (exponent(), prop::collection::vec(0.2f64..5.0, 1..6))
            .prop_map(|(p, w)| NormSpec::weighted_lp(p, w).unwrap()),
        prop::collection::vec(1.0f64..5.0, 1..6).prop_map(|ps| NormSpec::orlicz_nakano(ps).unwrap()),
        Just(fixtures::example_6_8_3()),
        Just(fixtures::example_6_8_4()),
    ]
}

fn any_spec() -> impl Strategy<Value = NormSpec> {
    prop_oneof![
        4 => ideal_spec(),
        1 => Just(fixtures::remark_4_7(3).unwrap()),
    ]
}

fn spec_with_points(k: usize) -> impl Strategy<Value = (NormSpec, Vec<Vec<f64>>)> {
    any_spec().prop_flat_map(move |s| {
        let n = s.dim();
        (Just(s), prop::collection::vec(prop::collection::vec(-3.0f64..3.0, n), k))
    })
}

fn nonzero(x: &[f64]) -> bool {
    x.iter().any(|v| v.abs() > 1e-6)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn homogeneity((spec, xs) in spec_with_points(2), t in -5.0f64..5.0) {
        let x = &xs[0];
        let tx: Vec<f64> = x.iter().map(|v| t * v).collect();
        let lhs = spec.norm(&tx);
        let rhs = t.abs() * spec.norm(x);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
    }

    #[test]
    fn triangle_inequality((spec, xs) in spec_with_points(2)) {
        let s: Vec<f64> = xs[0].iter().zip(&xs[1]).map(|(a, b)| a + b).collect();
        prop_assert!(spec.norm(&s) <= spec.norm(&xs[0]) + spec.norm(&xs[1]) + 1e-12 * (1.0 + spec.norm(&s)));
    }

    #[test]
    fn norming_functional_duality((spec, xs) in spec_with_points(8)) {
        let e = &xs[0];
        prop_assume!(nonzero(e));
        let f = spec.norming_functional(&Vector(e.clone())).unwrap().functional;
        let ne = spec.norm(e);
        prop_assert!((f.apply(e) - ne).abs() <= 1e-9 * (1.0 + ne));
        for x in &xs[1..] {
            prop_assert!(f.apply(x).abs() <= spec.norm(x) * (1.0 + 1e-9) + 1e-12);
        }
    }

    #[test]
    fn ideal_monotonicity(spec in ideal_spec(), seed in 0u64..1000, shrink in prop::collection::vec(0.0f64..1.0, 6)) {
        prop_assume!(spec.is_ideal());
        let sample = sample_sphere(&spec, 4, seed);
        for x in &sample.points {
            let y: Vec<f64> = x.0.iter().zip(&shrink).map(|(v, s)| v * s).collect();
            prop_assert!(spec.norm(&y) <= spec.norm(x.as_slice()) + 1e-12);
        }
    }

    #[test]
    fn polytope_membership_agrees_with_gauge(num in prop::collection::vec(-12i64..12, 3), den in 1i64..6) {
        let spec = fixtures::remark_4_7(3).unwrap();
        let x = QVector(num.iter().map(|&v| Rational::new(v.into(), den.into())).collect());
        let g = spec.as_polytope().unwrap().gauge_exact(&x);
        let m = spec.polytope_membership(&x).unwrap();
        let one = Rational::from_integer(1.into());
        match m {
            Membership::Inside => prop_assert!(g < one),
            Membership::Boundary => prop_assert!(g == one),
            Membership::Outside(_) => prop_assert!(g > one),
        }
        prop_assert!((spec.norm(&x.to_f64()) - to_f64(&g)).abs() <= 1e-12 * (1.0 + to_f64(&g)));
    }
}

#[test]
fn polytope_vertices_have_norm_one() {
    for n in [2, 3, 4] {
        let spec = fixtures::remark_4_7(n).unwrap();
        let poly = spec.as_polytope().unwrap();
        for v in poly.vertices() {
            assert_eq!(poly.gauge_exact(v), Rational::from_integer(1.into()));
        }
    }
}

#[test]
fn fixtures_pass_axiom_checks() {
    let mut names = fixtures::ideal_norm_names();
    names.push("remark_4_7(3)".into());
    names.push("remark_4_7(4)".into());
    for name in names {
        let f = fixture(&name).unwrap();
        let spec = f.norm().unwrap();
        let report = norm_axioms_check(spec, &sample_sphere(spec, 64, 3));
        assert!(report.max_violation() <= 1e-9, "{name}: {report:?}");
    }
}

fn unit_pair(n: usize) -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (prop::collection::vec(-1.0f64..1.0, n), prop::collection::vec(-1.0f64..1.0, n))
}

fn skew_reflection(e: &[f64], f: &[f64]) -> Option<Reflection> {
    let pairing: f64 = e.iter().zip(f).map(|(a, b)| a * b).sum();
    if pairing.abs() < 0.1 {
        return None;
    }
    make_reflection(Vector(e.to_vec()), Functional(f.iter().map(|v| v / pairing).collect())).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn reflections_are_involutions((e, f) in unit_pair(4)) {
        prop_assume!(nonzero(&e));
        if let Some(s) = skew_reflection(&e, &f) {
            prop_assert!(s.matrix().mul(s.matrix()).is_identity(1e-10));
        }
    }

    #[test]
    fn angle_is_symmetric((a, b) in unit_pair(3)) {
        prop_assume!(nonzero(&a) && nonzero(&b));
        let (s1, s2) = (orthogonal_reflection(&a).unwrap(), orthogonal_reflection(&b).unwrap());
        let (x, y) = (angle(&s1, &s2).unwrap(), angle(&s2, &s1).unwrap());
        prop_assert_eq!(x.alpha, y.alpha);
        prop_assert_eq!(x.cos_sq, y.cos_sq);
    }

    #[test]
    fn commutation_iff_right_or_zero_angle((a, b) in unit_pair(3), snap in 0u8..3) {
        prop_assume!(nonzero(&a) && nonzero(&b));
        let b = match snap {
            0 => b,
            1 => a.iter().map(|v| -2.0 * v).collect(),
            _ => vec![a[1], -a[0], 0.0],
        };
        prop_assume!(nonzero(&b));
        let (s1, s2) = (orthogonal_reflection(&a).unwrap(), orthogonal_reflection(&b).unwrap());
        let alpha = angle(&s1, &s2).unwrap().alpha;
        let special = alpha.abs() <= 1e-6 || (alpha - PI / 2.0).abs() <= 1e-6;
        prop_assert_eq!(commute(&s1, &s2), special);
    }

    #[test]
    fn product_order_matches_angle(m in 2u64..13, k in 1u64..13, rot in 0.0f64..PI) {
        prop_assume!(k < m);
        let t = PI * k as f64 / m as f64;
        let a = [rot.cos(), rot.sin()];
        let b = [(rot + t).cos(), (rot + t).sin()];
        let (s1, s2) = (orthogonal_reflection(&a).unwrap(), orthogonal_reflection(&b).unwrap());
        if let ProductOrder::Finite(order) = product_order(&s1, &s2, DEFAULT_ORDER_CAP) {
            let alpha = angle(&s1, &s2).unwrap().alpha;
            let hit = (1..order).any(|j| {
                num_integer::gcd(j, order) == 1 && (alpha / PI - j as f64 / order as f64).abs() <= 1e-9
            });
            prop_assert!(hit, "order {} alpha/π {}", order, alpha / PI);
        } else {
            prop_assert!(false, "finite dihedral pair reported infinite");
        }
    }
}

fn group_fixtures() -> Vec<(&'static str, Vec<Reflection>, usize)> {
    vec![
        ("simple_A(3)", fixtures::simple_a(3).unwrap(), 4),
        ("simple_B(3)", fixtures::simple_b(3).unwrap(), 3),
        ("H3", fixture("H3").unwrap().reflections().unwrap().to_vec(), 3),
        ("I2(7)", fixtures::i2(7).unwrap(), 2),
    ]
}

#[test]
fn closure_is_closed_under_products() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    for (name, refl, dim) in group_fixtures() {
        let closure = generate_from_reflections(&refl, dim, 10_000).unwrap();
        let set: Vec<&Matrix> = closure.elements.iter().collect();
        for _ in 0..100 {
            let a = set[rng.random_range(0..set.len())];
            let b = set[rng.random_range(0..set.len())];
            let ab = a.mul(b);
            assert!(set.iter().any(|g| g.max_abs_diff(&ab) <= 1e-9), "{name}");
        }
    }
}

#[test]
fn invariant_product_and_averaging_projection() {
    for (name, refl, dim) in group_fixtures() {
        let closure = generate_from_reflections(&refl, dim, 10_000).unwrap();
        let inv = invariant_product(&closure).unwrap();
        let spec = NormSpec::lp(dim, Exponent::Finite(2.0)).unwrap();
        let sample = sample_sphere(&spec, 16, 2);
        for g in &closure.elements {
            for (x, y) in sample.points.iter().zip(sample.points.iter().skip(1)) {
                let (gx, gy) = (g.mul_vec(x.as_slice()), g.mul_vec(y.as_slice()));
                assert!((inv.inner(&gx, &gy) - inv.inner(x.as_slice(), y.as_slice())).abs() <= 1e-9, "{name}");
            }
        }
        let p = averaging_projection(&spec, &closure, &sample).unwrap();
        for g in &closure.elements {
            assert!(p.matrix.mul(g).max_abs_diff(&p.matrix) <= 1e-10, "{name}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn product_projection_is_a_bicontractive_idempotent(spec in ideal_spec(), mask in prop::collection::vec(any::<bool>(), 6)) {
        let n = spec.dim();
        let coords: Vec<usize> = (0..n).filter(|&i| mask[i]).collect();
        let refl: Vec<Reflection> = coords.iter().map(|&i| sign_change(n, i)).collect();
        let sample = sample_sphere(&spec, 64, 5);
        let cert = product_projection(&spec, &refl, &sample).unwrap();
        prop_assert!(cert.idempotency_defect() <= 1e-10);
        let u = Matrix::identity(n).sub(&cert.matrix.scale(2.0));
        prop_assert!(u.mul(&u).is_identity(1e-10));
        prop_assert!(cert.norm_p <= 1.0 + 1e-9);
        prop_assert!(cert.norm_complement <= 2.0 + 1e-9);
    }

    #[test]
    fn complement_slack_nonnegative(spec in ideal_spec(), seed in 0u64..500) {
        let n = spec.dim();
        prop_assume!(n >= 2);
        let projections: Vec<Matrix> = (0..n).map(|i| coordinate_projection(n, &[i])).collect();
        for x in &sample_sphere(&spec, 16, seed).points {
            prop_assert!(complement_bound_slack(&spec, &projections, x) >= -1e-9);
        }
    }
}

#[test]
fn graph_edges_are_noncommuting_pairs() {
    let mut sets: Vec<Vec<Reflection>> = group_fixtures().into_iter().map(|(_, r, _)| r).collect();
    sets.push(fixtures::close_axes_triple().unwrap());
    sets.push(fixture("sign_changes(3)").unwrap().reflections().unwrap().to_vec());
    for refl in sets {
        let g = build_graph(&refl, DEFAULT_ORDER_CAP).unwrap();
        for i in 0..refl.len() {
            for j in 0..refl.len() {
                if i != j {
                    assert_eq!(g.weight(i, j).is_some(), !commute(&refl[i], &refl[j]));
                }
            }
        }
    }
}

#[test]
fn infinite_labels_have_nonpositive_cosine_eigenvalue() {
    for refl in [fixtures::close_axes_triple().unwrap(), fixtures::infinite_pair().unwrap()] {
        let g = build_graph(&refl, DEFAULT_ORDER_CAP).unwrap();
        let c = classify(&g, &g.components[0]).unwrap();
        assert!(!c.label.is_finite());
        let mats: Vec<Matrix> = refl.iter().map(|r| r.matrix().clone()).collect();
        let eig = cosine_matrix(&order_matrix(&mats, DEFAULT_ORDER_CAP)).symmetric_eigenvalues();
        assert!(eig.iter().cloned().fold(f64::INFINITY, f64::min) <= 1e-9);
        assert!(generate_from_reflections(&refl, 3, 2_000).unwrap().capped);
    }
}

fn decomposition_specs() -> Vec<NormSpec> {
    vec![
        fixtures::example_6_8_3(),
        fixtures::example_6_8_4(),
        fixture("orlicz_nakano(2,2,2,3,3,4)").unwrap().norm().unwrap().clone(),
        NormSpec::lp(3, Exponent::Finite(2.0)).unwrap(),
        NormSpec::lp(4, Exponent::Finite(3.0)).unwrap(),
        NormSpec::weighted_lp(Exponent::Finite(3.0), vec![1.0, 2.0, 2.0]).unwrap(),
    ]
}

#[test]
fn strips_partition_the_coordinates() {
    let cfg = StripTestConfig::default();
    for spec in decomposition_specs() {
        let r = decompose(&spec, &cfg).unwrap();
        let mut seen = vec![0usize; spec.dim()];
        for (_, s) in r.strips() {
            for i in s {
                seen[i] += 1;
            }
        }
        assert!(seen.iter().all(|&c| c <= 1));
        assert!(r.uncovered.is_empty());
        assert!(seen.iter().all(|&c| c == 1));
        assert!(r.partition_preserved);
    }
}

#[test]
fn hilbert_strips_are_certified() {
    let cfg = StripTestConfig::default();
    for spec in decomposition_specs() {
        let r = decompose(&spec, &cfg).unwrap();
        let n = spec.dim();
        for s in &r.hilbert_strips {
            assert!(s.four_squares_residual <= 1e-9);
            let pairs = reflect_core::decomposition::supported_pairs(n, &s.indices, 100, 9);
            assert!(four_squares_residual(&spec, &pairs) <= 1e-9);
        }
        // Merged pairs survive 32 rotations × 64 fresh points.
        let sample = sample_sphere(&spec, 64, 77);
        for s in &r.hilbert_strips {
            for (a, &i) in s.indices.iter().enumerate() {
                for &j in &s.indices[a + 1..] {
                    for k in 0..32 {
                        let rot = plane_rotation(n, i, j, 2.0 * PI * (k as f64 + 0.37) / 32.0);
                        assert!(max_isometry_violation(&rot, &spec, &sample) <= cfg.tolerance);
                    }
                }
            }
        }
        for w in &r.witnesses {
            assert!(w.residual > 10.0 * cfg.tolerance);
        }
    }
}

#[test]
fn generators_preserve_strip_shape() {
    let cfg = StripTestConfig::default();
    for spec in decomposition_specs() {
        let r = decompose(&spec, &cfg).unwrap();
        let strips = r.strips();
        let hp = hilbert_pairs(&spec, &(0..spec.dim()).collect::<Vec<_>>(), &cfg).unwrap();
        let mut gens: Vec<Matrix> = hp.generators.clone();
        for c in &r.coxeter_strips {
            gens.extend(c.reflections.iter().map(|s| s.matrix().clone()));
        }
        for g in &gens {
            assert!(reflect_core::decomposition::preserves_partition(g, &strips));
        }
        assert!(strips.iter().all(|(k, _)| matches!(k, StripKind::Hilbert | StripKind::Coxeter)));
    }
}

#[test]
fn tighter_tolerance_never_merges_more() {
    for spec in decomposition_specs() {
        let mut prev: Option<Vec<Vec<usize>>> = None;
        for tol in [1e-6, 1e-9, 1e-12] {
            let cfg = StripTestConfig { tolerance: tol, ..StripTestConfig::default() };
            let classes = decompose(&spec, &cfg).unwrap().hilbert_indices();
            if let Some(coarse) = &prev {
                for c in &classes {
                    assert!(coarse.iter().any(|d| c.iter().all(|i| d.contains(i))));
                }
            }
            prev = Some(classes);
        }
    }
}

fn quick_cfg() -> CConfig {
    CConfig { iterations: 60, ..CConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn reflection_constant_invariants(p in 1.0f64..5.0, dim in 2usize..4, seed in 0u64..1000) {
        let spec = NormSpec::lp(dim, Exponent::Finite(p)).unwrap();
        let cfg = quick_cfg();
        let est = estimate_c_with(&spec, 3, seed, &cfg).unwrap();
        prop_assert!(est.value >= 1.0 - 1e-6 && est.value <= 3.0 + 1e-6);
        for t in &est.traces {
            prop_assert!(t.windows(2).all(|w| w[1] <= w[0]));
        }
        prop_assert!((est.argmin_e_star.apply(est.argmin_e.as_slice()) - 1.0).abs() <= 1e-9);
        let again = reflection_norm(&spec, &est.argmin_e, &est.argmin_e_star, &cfg, seed);
        prop_assert!((again - est.value).abs() <= 1e-9);
        let twice = estimate_c_with(&spec, 3, seed, &cfg).unwrap();
        prop_assert_eq!(&est, &twice);
        // Coordinate sign changes are isometric in every ℓ_p^n.
        prop_assert!(est.value <= 1.0 + 1e-6);
    }
}

#[test]
fn operator_norm_of_identity_is_one() {
    let spec = NormSpec::lp(3, Exponent::Finite(1.5)).unwrap();
    let sample = sample_sphere(&spec, 32, 0);
    assert!((operator_norm(&Matrix::identity(3), &spec, &sample, 4).value - 1.0).abs() <= 1e-12);
}
