//! Shared fixtures for integration tests.

#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;

use holoweb::{
    decompose_family, Connection, Curve, CurveFamily, Element, Group, OneComplex, OrientedEdge,
    Web,
};

pub fn complex(vertices: &[&str], edges: &[(&str, &str, &str)]) -> Arc<OneComplex> {
    Arc::new(
        OneComplex::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            edges
                .iter()
                .map(|(n, s, d)| (n.to_string(), s.to_string(), d.to_string()))
                .collect(),
        )
        .unwrap(),
    )
}

pub fn curve(complex: &Arc<OneComplex>, spec: &[&str]) -> Curve {
    let word = spec
        .iter()
        .map(|s| {
            if let Some(rest) = s.strip_prefix('~') {
                OrientedEdge::rev(complex.edge_by_name(rest).unwrap())
            } else {
                OrientedEdge::fwd(complex.edge_by_name(s).unwrap())
            }
        })
        .collect();
    Curve::new(complex, word).unwrap()
}

pub fn family(complex: &Arc<OneComplex>, specs: &[&[&str]]) -> CurveFamily {
    CurveFamily::new(Arc::clone(complex), specs.iter().map(|s| curve(complex, s)).collect())
}

/// The two-edge loop a: u -> v, b: v -> u, decomposed into its star web.
pub fn loop_web() -> (Arc<Web>, CurveFamily) {
    let k = complex(&["u", "v"], &[("a", "u", "v"), ("b", "v", "u")]);
    let fam = family(&k, &[&["a", "b"]]);
    let dec = decompose_family(&fam);
    (Arc::new(dec.web), fam)
}

/// Three parallel edges u -> v, decomposed into two star tassels sharing
/// three midpoints.
pub fn theta_web() -> Arc<Web> {
    let k = complex(
        &["u", "v"],
        &[("e1", "u", "v"), ("e2", "u", "v"), ("e3", "u", "v")],
    );
    let fam = family(&k, &[&["e1", "~e2"], &["e2", "~e3"]]);
    let dec = decompose_family(&fam);
    Arc::new(dec.web)
}

/// The triangle complex and its loop family.
pub fn triangle() -> (Arc<OneComplex>, CurveFamily) {
    let k = complex(
        &["u", "v", "w"],
        &[("a", "u", "v"), ("b", "v", "w"), ("c", "w", "u")],
    );
    let fam = family(&k, &[&["a", "b", "c"]]);
    (k, fam)
}

/// Holonomies of every web curve under a connection on the web's complex.
pub fn web_point(web: &Web, group: &Group, conn: &Connection) -> Vec<Element> {
    web.union_family()
        .curves
        .iter()
        .map(|c| holoweb::holonomy(group, conn, c).unwrap())
        .collect()
}

pub fn random_connection<R: Rng>(
    complex: &Arc<OneComplex>,
    group: &Group,
    rng: &mut R,
) -> Connection {
    Connection::new(complex, (0..complex.n_edges()).map(|_| group.haar_sample(rng)).collect())
        .unwrap()
}
