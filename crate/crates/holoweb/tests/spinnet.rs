//! Spin-network behavior on concrete webs: loop traces, gauge invariance,
//! the closed-form inner product against Monte-Carlo integration, and
//! orthonormal families with a completeness count.

mod common;

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{loop_web, random_connection, theta_web, web_point};
use holoweb::{
    build_spin_network, decompose_family, evaluate, gauge_transform, inner_product,
    orthonormal_family, sample_uniform, wigner_d, Element, GaugeMap, Group, HalfInt, SpinError,
    TasselLabel, VertexId,
};

fn spins(js: &[i32]) -> TasselLabel {
    TasselLabel::Spins(js.iter().map(|&t| HalfInt::from_twice(t)).collect())
}

#[test]
fn loop_network_evaluates_to_wilson_trace() {
    let (web, _) = loop_web();
    let g = Group::su2();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for twice in [1, 2, 3] {
        let sn = build_spin_network(
            &web,
            vec![spins(&[twice, twice]), spins(&[twice, twice])],
            vec![None, None],
            &g,
        )
        .unwrap();
        // Identity connection: the value is the dimension 2j + 1.
        let id_point = vec![g.identity(); 4];
        let v = evaluate(&sn, &id_point, &g).unwrap();
        let dim = HalfInt::from_twice(twice).dim() as f64;
        assert!((v - Complex64::new(dim, 0.0)).norm() < 1e-10, "j twice {twice}: {v}");
        // Random connections: the value is tr D^j of the loop holonomy.
        for _ in 0..20 {
            let conn = random_connection(&web.complex, &g, &mut rng);
            let point = web_point(&web, &g, &conn);
            let v = evaluate(&sn, &point, &g).unwrap();
            // Loop holonomy through the four half-edges a.0, a.1, b.0, b.1.
            let hol = ["a.0", "a.1", "b.0", "b.1"].iter().fold(g.identity(), |acc, name| {
                let e = web.complex.edge_by_name(name).unwrap();
                g.mul(&acc, conn.value(e)).unwrap()
            });
            let q = match hol {
                Element::Quat(q) => q,
                _ => unreachable!(),
            };
            let expect = wigner_d(HalfInt::from_twice(twice), &q).trace();
            assert!((v - expect).norm() < 1e-9, "j twice {twice}: {v} vs {expect}");
        }
    }
}

#[test]
fn circle_loop_network_is_total_charge_phase() {
    let (web, _) = loop_web();
    let g = Group::Circle;
    let m = 3i64;
    let sn = build_spin_network(
        &web,
        vec![
            TasselLabel::Abelian(vec![m, -m]),
            TasselLabel::Abelian(vec![-m, m]),
        ],
        vec![None, None],
        &g,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let conn = random_connection(&web.complex, &g, &mut rng);
        let point = web_point(&web, &g, &conn);
        let v = evaluate(&sn, &point, &g).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-12);
        let theta_total: f64 = ["a.0", "a.1", "b.0", "b.1"]
            .iter()
            .map(|name| match conn.value(web.complex.edge_by_name(name).unwrap()) {
                Element::Angle(t) => *t,
                _ => unreachable!(),
            })
            .sum();
        let expect = Complex64::from_polar(1.0, m as f64 * theta_total);
        assert!((v - expect).norm() < 1e-9);
    }
}

#[test]
fn theta_web_constraints() {
    let web = theta_web();
    let g = Group::su2();
    // (1/2, 1/2, 1) on matched pairs: valid, base intertwiners exist.
    let sn = build_spin_network(
        &web,
        vec![spins(&[1, 1, 2]), spins(&[1, 1, 2])],
        vec![None, None],
        &g,
    );
    assert!(sn.is_ok());
    // (1/2, 1/2, 1/2): no invariant vector.
    let err = build_spin_network(
        &web,
        vec![spins(&[1, 1, 1]), spins(&[1, 1, 1])],
        vec![None, None],
        &g,
    )
    .unwrap_err();
    assert!(matches!(err, SpinError::NoInvariantVector { .. }));
    // Mismatched duals at a shared midpoint.
    let err = build_spin_network(
        &web,
        vec![spins(&[1, 1, 2]), spins(&[1, 2, 1])],
        vec![None, None],
        &g,
    )
    .unwrap_err();
    assert!(matches!(
        err,
        SpinError::DualityMismatch { .. } | SpinError::NoInvariantVector { .. }
    ));
}

#[test]
fn single_tassel_endpoints_must_be_trivial() {
    // The decomposition of a single path edge gives two one-curve tassels
    // sharing one midpoint; a second family member makes a lone endpoint.
    let k = common::complex(&["u", "v", "w"], &[("a", "u", "v"), ("b", "v", "w")]);
    let fam = common::family(&k, &[&["a"], &["b"]]);
    let dec = decompose_family(&fam);
    let web = Arc::new(dec.web);
    let g = Group::su2();
    // Spin 1/2 on a curve whose endpoint bounds only one tassel: rejected.
    let labels: Vec<TasselLabel> = web
        .tassels
        .iter()
        .map(|t| spins(&vec![1; t.family.len()]))
        .collect();
    let err = build_spin_network(&web, labels, vec![None; 3], &g).unwrap_err();
    assert!(
        matches!(err, SpinError::NontrivialSingleEndpoint { .. })
            || matches!(err, SpinError::NoInvariantVector { .. })
    );
}

#[test]
fn evaluate_is_gauge_invariant() {
    let web = theta_web();
    let union = web.union_family();
    let su2 = Group::su2();
    let sn = build_spin_network(
        &web,
        vec![spins(&[1, 1, 2]), spins(&[1, 1, 2])],
        vec![None, None],
        &su2,
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let conn = random_connection(&web.complex, &su2, &mut rng);
        let point = web_point(&web, &su2, &conn);
        let v0 = evaluate(&sn, &point, &su2).unwrap();
        let gauge: GaugeMap = (0..web.complex.n_vertices())
            .map(|v| (VertexId(v), su2.haar_sample(&mut rng)))
            .collect();
        let gauged = gauge_transform(&gauge, &su2, &union, &point).unwrap();
        let v1 = evaluate(&sn, &gauged, &su2).unwrap();
        assert!((v0 - v1).norm() < 1e-9, "{v0} vs {v1}");
    }

    // Abelian backend: exact to rounding.
    let u1 = Group::Circle;
    let sn = build_spin_network(
        &web,
        vec![
            TasselLabel::Abelian(vec![2, -1, -1]),
            TasselLabel::Abelian(vec![-2, 1, 1]),
        ],
        vec![None, None],
        &u1,
    )
    .unwrap();
    for _ in 0..50 {
        let conn = random_connection(&web.complex, &u1, &mut rng);
        let point = web_point(&web, &u1, &conn);
        let v0 = evaluate(&sn, &point, &u1).unwrap();
        let gauge: GaugeMap = (0..web.complex.n_vertices())
            .map(|v| (VertexId(v), u1.haar_sample(&mut rng)))
            .collect();
        let gauged = gauge_transform(&gauge, &u1, &union, &point).unwrap();
        let v1 = evaluate(&sn, &gauged, &u1).unwrap();
        assert!((v0 - v1).norm() < 1e-12);
    }
}

#[test]
fn inner_product_formula_matches_monte_carlo() {
    let web = theta_web();
    let g = Group::su2();
    let sn = build_spin_network(
        &web,
        vec![spins(&[1, 1, 2]), spins(&[1, 1, 2])],
        vec![None, None],
        &g,
    )
    .unwrap();
    let formula = inner_product(&sn, &sn, &g).unwrap();
    assert!((formula - Complex64::new(1.0, 0.0)).norm() < 1e-12);

    // A distinct label: orthogonal by the formula.
    let other = build_spin_network(
        &web,
        vec![spins(&[2, 2, 2]), spins(&[2, 2, 2])],
        vec![None, None],
        &g,
    )
    .unwrap();
    assert_eq!(inner_product(&sn, &other, &g).unwrap(), Complex64::new(0.0, 0.0));

    // Monte-Carlo check of |f|^2 against the uniform web measure.
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let n = 200_000u64;
    let mut acc = 0.0f64;
    for _ in 0..n {
        let point = sample_uniform(&web, &g, &mut rng).unwrap();
        let v = evaluate(&sn, &point, &g).unwrap();
        acc += v.norm_sqr();
    }
    let mean = acc / n as f64;
    assert!((mean - 1.0).abs() < 0.02, "MC <f,f> = {mean}");

    // Cross term against the distinct label vanishes within noise.
    let mut cross = Complex64::new(0.0, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..n {
        let point = sample_uniform(&web, &g, &mut rng).unwrap();
        let v1 = evaluate(&sn, &point, &g).unwrap();
        let v2 = evaluate(&other, &point, &g).unwrap();
        cross += v1.conj() * v2;
    }
    let mean = cross / n as f64;
    assert!(mean.norm() < 0.03, "MC cross = {mean}");
}

#[test]
fn orthonormal_family_gram_is_identity() {
    // Z_2 theta web: exhaustive family, exact Gram identity.
    let web = theta_web();
    let z2 = Group::cyclic(2);
    let fam = orthonormal_family(&web, &z2, 0).unwrap();
    assert!(!fam.is_empty());
    for (i, a) in fam.iter().enumerate() {
        for (k, b) in fam.iter().enumerate() {
            let ip = inner_product(a, b, &z2).unwrap();
            let expect = if i == k { 1.0 } else { 0.0 };
            assert_eq!(ip, Complex64::new(expect, 0.0));
        }
    }

    // Circle theta web with |m| <= 2.
    let u1 = Group::Circle;
    let fam = orthonormal_family(&web, &u1, 2).unwrap();
    assert!(!fam.is_empty());
    for (i, a) in fam.iter().enumerate() {
        for (k, b) in fam.iter().enumerate() {
            let ip = inner_product(a, b, &u1).unwrap();
            let expect = if i == k { 1.0 } else { 0.0 };
            assert_eq!(ip, Complex64::new(expect, 0.0));
        }
    }

    // A web whose curves all end at one-tassel endpoints only admits the
    // trivial network.
    let k = common::complex(&["u", "v", "w"], &[("a", "u", "v"), ("b", "v", "w")]);
    let fam2 = common::family(&k, &[&["a"], &["b"]]);
    let dec = decompose_family(&fam2);
    // Keep only the tassel at v (both its endpoints are shared midpoints,
    // but the web of that single tassel leaves them single-bounded).
    let tassel_v = dec
        .web
        .tassels
        .iter()
        .find(|t| dec.web.complex.vertex_name(t.base) == "v")
        .cloned()
        .unwrap();
    let single = Arc::new(holoweb::check_web(vec![tassel_v]).unwrap());
    let z3 = Group::cyclic(3);
    let fam3 = orthonormal_family(&single, &z3, 0).unwrap();
    assert_eq!(fam3.len(), 1);
    assert!(matches!(&fam3[0].labels[0], TasselLabel::Abelian(m) if m.iter().all(|&x| x == 0)));
}

/// Dimension of the gauge-invariant function space on the enumerated
/// attainable set, by Burnside counting over all finite gauge tuples.
fn invariant_dimension(web: &Arc<holoweb::Web>, g: &Group, n: u32) -> u64 {
    let union = web.union_family();
    let table = holoweb::measure::uniform_web_table(web, g, 1_000_000).unwrap();
    let points: Vec<Vec<u16>> = table.counts.keys().cloned().collect();
    let point_set: std::collections::BTreeSet<&Vec<u16>> = points.iter().collect();

    let mut vertices: Vec<VertexId> =
        union.curves.iter().flat_map(|c| [c.start(), c.end()]).collect();
    vertices.sort();
    vertices.dedup();

    let mut total_fixed = 0u64;
    let mut gauge_count = 0u64;
    let mut assignment = vec![0u32; vertices.len()];
    loop {
        let gauge: GaugeMap = vertices
            .iter()
            .zip(assignment.iter())
            .map(|(v, &x)| (*v, Element::Finite(x)))
            .collect();
        for p in &points {
            let els: Vec<Element> = p.iter().map(|&x| Element::Finite(u32::from(x))).collect();
            let moved = gauge_transform(&gauge, g, &union, &els).unwrap();
            let key: Vec<u16> = moved
                .iter()
                .map(|e| match e {
                    Element::Finite(x) => *x as u16,
                    _ => unreachable!(),
                })
                .collect();
            assert!(point_set.contains(&key), "gauge left the attainable set");
            if &key == p {
                total_fixed += 1;
            }
        }
        gauge_count += 1;
        // Mixed-radix advance; stop after wrapping back to all zeros.
        let mut d = 0;
        while d < assignment.len() {
            assignment[d] += 1;
            if assignment[d] < n {
                break;
            }
            assignment[d] = 0;
            d += 1;
        }
        if d == assignment.len() {
            break;
        }
    }
    assert_eq!(total_fixed % gauge_count, 0);
    total_fixed / gauge_count
}

#[test]
fn orthonormal_family_spans_the_gauge_invariant_subspace() {
    // Completeness on finite abelian backends: the family size equals the
    // dimension of the gauge-invariant subspace.
    for n in [2u32, 3] {
        let g = Group::cyclic(n);
        let web = theta_web();
        let fam = orthonormal_family(&web, &g, 0).unwrap();
        let dim = invariant_dimension(&web, &g, n);
        assert_eq!(fam.len() as u64, dim, "Z_{n}");
    }
    // The loop web as well.
    for n in [2u32, 3] {
        let g = Group::cyclic(n);
        let (web, _) = loop_web();
        let fam = orthonormal_family(&web, &g, 0).unwrap();
        let dim = invariant_dimension(&web, &g, n);
        assert_eq!(fam.len() as u64, dim, "loop Z_{n}");
    }
}
