//! Finite one-complexes and the curve algebra: words of oriented edges,
//! products, inverses, midpoint subdivision, and word factorization.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dir {
    Fwd,
    Rev,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Fwd => Dir::Rev,
            Dir::Rev => Dir::Fwd,
        }
    }
}

/// An edge with a traversal direction; the letters of curve words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedEdge {
    pub edge: EdgeId,
    pub dir: Dir,
}

impl OrientedEdge {
    pub fn fwd(edge: EdgeId) -> Self {
        OrientedEdge { edge, dir: Dir::Fwd }
    }

    pub fn rev(edge: EdgeId) -> Self {
        OrientedEdge { edge, dir: Dir::Rev }
    }

    pub fn reversed(self) -> Self {
        OrientedEdge { edge: self.edge, dir: self.dir.flip() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub name: String,
    pub src: VertexId,
    pub dst: VertexId,
}

#[derive(Debug, Error)]
pub enum ComplexError {
    #[error("duplicate {kind} identifier `{name}`")]
    DuplicateId { kind: &'static str, name: String },
    #[error("edge `{edge}` refers to unknown vertex `{vertex}`")]
    UnknownVertex { edge: String, vertex: String },
    #[error("edge `{0}` is a self-loop; model loops with at least two edges")]
    SelfLoop(String),
    #[error("unknown edge `{0}`")]
    UnknownEdge(String),
    #[error("empty curve word")]
    EmptyWord,
    #[error("word does not chain at letter {position}: `{at}` starts at `{got}` but the previous letter ends at `{expected}`")]
    BrokenChain { position: usize, at: String, expected: String, got: String },
    #[error("curves live on different complexes")]
    ComplexMismatch,
    #[error("cannot compose: first curve ends at `{end}`, second starts at `{start}`")]
    EndpointMismatch { end: String, start: String },
}

/// A finite graph of named vertices and directed edges, with self-loops
/// rejected so midpoint subdivision stays unambiguous.
#[derive(Debug, PartialEq)]
pub struct OneComplex {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    vertex_index: BTreeMap<String, VertexId>,
    edge_index: BTreeMap<String, EdgeId>,
}

impl OneComplex {
    pub fn new(
        vertices: Vec<String>,
        edges: Vec<(String, String, String)>,
    ) -> Result<Self, ComplexError> {
        let mut vertex_index = BTreeMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if vertex_index.insert(v.clone(), VertexId(i)).is_some() {
                return Err(ComplexError::DuplicateId { kind: "vertex", name: v.clone() });
            }
        }
        let mut edge_index = BTreeMap::new();
        let mut edge_records = Vec::with_capacity(edges.len());
        for (i, (name, src, dst)) in edges.into_iter().enumerate() {
            let sv = *vertex_index
                .get(&src)
                .ok_or_else(|| ComplexError::UnknownVertex { edge: name.clone(), vertex: src.clone() })?;
            let dv = *vertex_index
                .get(&dst)
                .ok_or_else(|| ComplexError::UnknownVertex { edge: name.clone(), vertex: dst.clone() })?;
            if sv == dv {
                return Err(ComplexError::SelfLoop(name));
            }
            if edge_index.insert(name.clone(), EdgeId(i)).is_some() {
                return Err(ComplexError::DuplicateId { kind: "edge", name });
            }
            edge_records.push(Edge { name, src: sv, dst: dv });
        }
        Ok(OneComplex { vertices, edges: edge_records, vertex_index, edge_index })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn vertex(&self, name: &str) -> Option<VertexId> {
        self.vertex_index.get(name).copied()
    }

    pub fn edge(&self, id: EdgeId) -> &Edge {
        &self.edges[id.0]
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edge_index.get(name).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Start vertex of an oriented traversal.
    pub fn start_of(&self, oe: OrientedEdge) -> VertexId {
        match oe.dir {
            Dir::Fwd => self.edges[oe.edge.0].src,
            Dir::Rev => self.edges[oe.edge.0].dst,
        }
    }

    /// End vertex of an oriented traversal.
    pub fn end_of(&self, oe: OrientedEdge) -> VertexId {
        match oe.dir {
            Dir::Fwd => self.edges[oe.edge.0].dst,
            Dir::Rev => self.edges[oe.edge.0].src,
        }
    }

    pub fn letter_name(&self, oe: OrientedEdge) -> String {
        match oe.dir {
            Dir::Fwd => self.edges[oe.edge.0].name.clone(),
            Dir::Rev => format!("~{}", self.edges[oe.edge.0].name),
        }
    }
}

/// A curve: a nonempty word of oriented edges whose letters chain.
///
/// Equality is equality of words; no reduction or homotopy is applied, so
/// `[a, ~a]` is a valid curve distinct from any other word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Curve {
    word: Vec<OrientedEdge>,
    start: VertexId,
    end: VertexId,
}

impl Curve {
    pub fn new(complex: &OneComplex, word: Vec<OrientedEdge>) -> Result<Self, ComplexError> {
        if word.is_empty() {
            return Err(ComplexError::EmptyWord);
        }
        for (k, pair) in word.windows(2).enumerate() {
            let e = complex.end_of(pair[0]);
            let s = complex.start_of(pair[1]);
            if e != s {
                return Err(ComplexError::BrokenChain {
                    position: k + 1,
                    at: complex.letter_name(pair[1]),
                    expected: complex.vertex_name(e).to_string(),
                    got: complex.vertex_name(s).to_string(),
                });
            }
        }
        let start = complex.start_of(word[0]);
        let end = complex.end_of(*word.last().unwrap());
        Ok(Curve { word, start, end })
    }

    pub fn word(&self) -> &[OrientedEdge] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    /// Vertices visited in order, starting at `start`.
    pub fn visited(&self, complex: &OneComplex) -> Vec<VertexId> {
        let mut out = Vec::with_capacity(self.word.len() + 1);
        out.push(self.start);
        for oe in &self.word {
            out.push(complex.end_of(*oe));
        }
        out
    }
}

/// Concatenation of chainable curves; associative, never reduced.
pub fn compose(complex: &OneComplex, c1: &Curve, c2: &Curve) -> Result<Curve, ComplexError> {
    if c1.end != c2.start {
        return Err(ComplexError::EndpointMismatch {
            end: complex.vertex_name(c1.end).to_string(),
            start: complex.vertex_name(c2.start).to_string(),
        });
    }
    let mut word = c1.word.clone();
    word.extend_from_slice(&c2.word);
    Ok(Curve { word, start: c1.start, end: c2.end })
}

/// Reversed word with every letter flipped; an involution.
pub fn invert(c: &Curve) -> Curve {
    let word = c.word.iter().rev().map(|oe| oe.reversed()).collect();
    Curve { word, start: c.end, end: c.start }
}

/// An ordered family of curves over one complex. Ordering is part of the
/// identity and duplicates are permitted.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveFamily {
    pub complex: Arc<OneComplex>,
    pub curves: Vec<Curve>,
}

impl CurveFamily {
    pub fn new(complex: Arc<OneComplex>, curves: Vec<Curve>) -> Self {
        CurveFamily { complex, curves }
    }

    pub fn len(&self) -> usize {
        self.curves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.curves.is_empty()
    }

    /// Edge ids used by any curve, sorted and deduplicated.
    pub fn used_edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self
            .curves
            .iter()
            .flat_map(|c| c.word().iter().map(|oe| oe.edge))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// One signed factor of a dependence: a base-family curve or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignedIndex {
    pub index: usize,
    pub inverted: bool,
}

impl fmt::Display for SignedIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // One-based signed form used by the document formats.
        if self.inverted {
            write!(f, "-{}", self.index + 1)
        } else {
            write!(f, "+{}", self.index + 1)
        }
    }
}

/// Expresses each curve of a dependent family as a product of base-family
/// curves and their inverses; expanding the factors reproduces each word
/// exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct DependenceMap {
    pub factors: Vec<Vec<SignedIndex>>,
}

impl DependenceMap {
    /// Expands one curve's factors into a concatenated word over the base
    /// family.
    pub fn expand(&self, base: &CurveFamily, curve: usize) -> Vec<OrientedEdge> {
        let mut out = Vec::new();
        for f in &self.factors[curve] {
            let c = &base.curves[f.index];
            if f.inverted {
                out.extend(c.word().iter().rev().map(|oe| oe.reversed()));
            } else {
                out.extend_from_slice(c.word());
            }
        }
        out
    }
}

#[derive(Debug, Error)]
pub enum FactorizeError {
    #[error("families live on different complexes")]
    ComplexMismatch,
    #[error("curve {curve} does not depend on the base family; furthest factorizable prefix has length {reachable_prefix}")]
    NotDependent { curve: usize, reachable_prefix: usize },
    #[error("holonomy tuple has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
}

/// Factorizes every curve of `c` as a product of curves of `d` and their
/// inverses, or reports the first curve that fails.
///
/// The decision is exact via dynamic programming over word positions. When
/// several factors match at a position, the lowest base index wins, then
/// forward orientation, then the longest factor; output is deterministic.
pub fn factorize(c: &CurveFamily, d: &CurveFamily) -> Result<DependenceMap, FactorizeError> {
    if !Arc::ptr_eq(&c.complex, &d.complex) && c.complex != d.complex {
        return Err(FactorizeError::ComplexMismatch);
    }
    // Candidate factors in tie-break order.
    struct Candidate {
        index: usize,
        inverted: bool,
        word: Vec<OrientedEdge>,
    }
    let mut candidates: Vec<Candidate> = Vec::with_capacity(d.len() * 2);
    for (i, base) in d.curves.iter().enumerate() {
        candidates.push(Candidate { index: i, inverted: false, word: base.word().to_vec() });
        candidates.push(Candidate {
            index: i,
            inverted: true,
            word: base.word().iter().rev().map(|oe| oe.reversed()).collect(),
        });
    }
    candidates.sort_by(|a, b| {
        a.index
            .cmp(&b.index)
            .then(a.inverted.cmp(&b.inverted))
            .then(b.word.len().cmp(&a.word.len()))
    });

    let mut factors = Vec::with_capacity(c.len());
    for (ci, curve) in c.curves.iter().enumerate() {
        let word = curve.word();
        let n = word.len();
        // can_finish[i]: the suffix starting at i splits into factors.
        let mut can_finish = vec![false; n + 1];
        can_finish[n] = true;
        for i in (0..n).rev() {
            can_finish[i] = candidates.iter().any(|cand| {
                let l = cand.word.len();
                i + l <= n && word[i..i + l] == cand.word[..] && can_finish[i + l]
            });
        }
        if !can_finish[0] {
            let words: Vec<&[OrientedEdge]> =
                candidates.iter().map(|cand| cand.word.as_slice()).collect();
            let reachable = furthest_prefix(word, &words);
            return Err(FactorizeError::NotDependent { curve: ci, reachable_prefix: reachable });
        }
        let mut seq = Vec::new();
        let mut i = 0;
        while i < n {
            let cand = candidates
                .iter()
                .find(|cand| {
                    let l = cand.word.len();
                    i + l <= n && word[i..i + l] == cand.word[..] && can_finish[i + l]
                })
                .expect("reachability established above");
            seq.push(SignedIndex { index: cand.index, inverted: cand.inverted });
            i += cand.word.len();
        }
        factors.push(seq);
    }
    Ok(DependenceMap { factors })
}

fn furthest_prefix(word: &[OrientedEdge], candidates: &[&[OrientedEdge]]) -> usize {
    let n = word.len();
    let mut reachable = vec![false; n + 1];
    reachable[0] = true;
    let mut best = 0;
    for i in 0..n {
        if !reachable[i] {
            continue;
        }
        for w in candidates {
            let l = w.len();
            if i + l <= n && word[i..i + l] == **w {
                reachable[i + l] = true;
                if i + l > best {
                    best = i + l;
                }
            }
        }
    }
    best
}

/// Result of one midpoint-subdivision round.
#[derive(Debug)]
pub struct Subdivision {
    /// The refined complex: one midpoint per edge, two half-edges.
    pub complex: Arc<OneComplex>,
    /// Input families rewritten letter-by-letter onto the half-edges.
    pub families: Vec<CurveFamily>,
    /// One two-letter curve per original edge, in original edge order; the
    /// base family the dependence maps refer to.
    pub edge_family: CurveFamily,
    /// Per input family: each rewritten curve as signed edge-curve factors,
    /// which is the original word read off against `edge_family`.
    pub maps: Vec<DependenceMap>,
    /// Half-edge pair per original edge: (source half, target half).
    pub halves: Vec<(EdgeId, EdgeId)>,
    /// Original vertices carried over, by index.
    pub old_vertices: Vec<VertexId>,
}

/// Replaces every edge `e: u -> v` by `u -> m_e -> v` and rewrites each
/// curve word letter-by-letter, so any connection that composes the half
/// labels reproduces the original holonomies.
pub fn subdivide(complex: &Arc<OneComplex>, families: &[&CurveFamily]) -> Subdivision {
    let mut vertices: Vec<String> = complex.vertices().to_vec();
    let mut edges: Vec<(String, String, String)> = Vec::with_capacity(2 * complex.n_edges());
    let mut halves = Vec::with_capacity(complex.n_edges());
    for e in complex.edges() {
        let mid = format!("{}.m", e.name);
        vertices.push(mid.clone());
        edges.push((
            format!("{}.0", e.name),
            complex.vertex_name(e.src).to_string(),
            mid.clone(),
        ));
        edges.push((format!("{}.1", e.name), mid, complex.vertex_name(e.dst).to_string()));
    }
    let refined = Arc::new(
        OneComplex::new(vertices, edges).expect("subdivision of a valid complex is valid"),
    );
    for (i, e) in complex.edges().iter().enumerate() {
        let lo = refined.edge_by_name(&format!("{}.0", e.name)).unwrap();
        let hi = refined.edge_by_name(&format!("{}.1", e.name)).unwrap();
        debug_assert_eq!((lo.0, hi.0), (2 * i, 2 * i + 1));
        halves.push((lo, hi));
    }
    let old_vertices = (0..complex.n_vertices()).map(VertexId).collect();

    let edge_curves: Vec<Curve> = halves
        .iter()
        .map(|&(lo, hi)| {
            Curve::new(&refined, vec![OrientedEdge::fwd(lo), OrientedEdge::fwd(hi)])
                .expect("half-edges chain")
        })
        .collect();
    let edge_family = CurveFamily::new(Arc::clone(&refined), edge_curves);

    let mut out_families = Vec::with_capacity(families.len());
    let mut maps = Vec::with_capacity(families.len());
    for family in families {
        let mut curves = Vec::with_capacity(family.len());
        let mut factors = Vec::with_capacity(family.len());
        for curve in &family.curves {
            let mut word = Vec::with_capacity(curve.len() * 2);
            let mut seq = Vec::with_capacity(curve.len());
            for oe in curve.word() {
                let (lo, hi) = halves[oe.edge.0];
                match oe.dir {
                    Dir::Fwd => {
                        word.push(OrientedEdge::fwd(lo));
                        word.push(OrientedEdge::fwd(hi));
                    }
                    Dir::Rev => {
                        word.push(OrientedEdge::rev(hi));
                        word.push(OrientedEdge::rev(lo));
                    }
                }
                seq.push(SignedIndex { index: oe.edge.0, inverted: oe.dir == Dir::Rev });
            }
            curves.push(Curve::new(&refined, word).expect("rewritten word chains"));
            factors.push(seq);
        }
        out_families.push(CurveFamily::new(Arc::clone(&refined), curves));
        maps.push(DependenceMap { factors });
    }

    Subdivision {
        complex: refined,
        families: out_families,
        edge_family,
        maps,
        halves,
        old_vertices,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn path_complex(n_edges: usize) -> Arc<OneComplex> {
        let vertices = (0..=n_edges).map(|i| format!("v{i}")).collect();
        let edges = (0..n_edges)
            .map(|i| {
                let name = char::from(b'a' + i as u8).to_string();
                (name, format!("v{i}"), format!("v{}", i + 1))
            })
            .collect();
        Arc::new(OneComplex::new(vertices, edges).unwrap())
    }

    fn letters(complex: &OneComplex, spec: &[&str]) -> Vec<OrientedEdge> {
        spec.iter()
            .map(|s| {
                if let Some(rest) = s.strip_prefix('~') {
                    OrientedEdge::rev(complex.edge_by_name(rest).unwrap())
                } else {
                    OrientedEdge::fwd(complex.edge_by_name(s).unwrap())
                }
            })
            .collect()
    }

    pub(crate) fn curve(complex: &Arc<OneComplex>, spec: &[&str]) -> Curve {
        Curve::new(complex, letters(complex, spec)).unwrap()
    }

    #[test]
    fn self_loops_rejected() {
        let err = OneComplex::new(
            vec!["u".into()],
            vec![("a".into(), "u".into(), "u".into())],
        )
        .unwrap_err();
        assert!(matches!(err, ComplexError::SelfLoop(_)));
    }

    #[test]
    fn compose_concatenates_and_checks_endpoints() {
        let k = path_complex(3);
        let ab = compose(&k, &curve(&k, &["a"]), &curve(&k, &["b"])).unwrap();
        assert_eq!(ab, curve(&k, &["a", "b"]));
        assert!(compose(&k, &curve(&k, &["b"]), &curve(&k, &["a"])).is_err());
        // Associativity on a chainable triple.
        let c1 = curve(&k, &["a"]);
        let c2 = curve(&k, &["b"]);
        let c3 = curve(&k, &["c"]);
        let left = compose(&k, &compose(&k, &c1, &c2).unwrap(), &c3).unwrap();
        let right = compose(&k, &c1, &compose(&k, &c2, &c3).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn no_cancellation_in_products() {
        let k = path_complex(1);
        let a = curve(&k, &["a"]);
        let back = compose(&k, &a, &invert(&a)).unwrap();
        assert_eq!(back.len(), 2);
        assert_eq!(back, curve(&k, &["a", "~a"]));
    }

    #[test]
    fn invert_is_an_anti_involution() {
        let k = path_complex(2);
        let ab = curve(&k, &["a", "b"]);
        assert_eq!(invert(&ab), curve(&k, &["~b", "~a"]));
        assert_eq!(invert(&invert(&ab)), ab);
        let c1 = curve(&k, &["a"]);
        let c2 = curve(&k, &["b"]);
        let lhs = invert(&compose(&k, &c1, &c2).unwrap());
        let rhs = compose(&k, &invert(&c2), &invert(&c1)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn broken_chains_are_rejected() {
        let k = path_complex(3);
        let word = letters(&k, &["a", "c"]);
        assert!(matches!(
            Curve::new(&k, word),
            Err(ComplexError::BrokenChain { position: 1, .. })
        ));
    }

    #[test]
    fn subdivision_rewrites_words_and_counts() {
        let k = path_complex(1);
        let fam = CurveFamily::new(Arc::clone(&k), vec![curve(&k, &["a"])]);
        let sub = subdivide(&k, &[&fam]);
        assert_eq!(sub.complex.n_vertices(), k.n_vertices() + k.n_edges());
        assert_eq!(sub.complex.n_edges(), 2 * k.n_edges());
        let rewritten = &sub.families[0].curves[0];
        assert_eq!(rewritten, &curve(&sub.complex, &["a.0", "a.1"]));

        let fam_rev = CurveFamily::new(Arc::clone(&k), vec![curve(&k, &["~a"])]);
        let sub = subdivide(&k, &[&fam_rev]);
        assert_eq!(
            &sub.families[0].curves[0],
            &curve(&sub.complex, &["~a.1", "~a.0"])
        );
        // The map expands to the rewritten word exactly.
        let expanded = sub.maps[0].expand(&sub.edge_family, 0);
        assert_eq!(expanded, sub.families[0].curves[0].word().to_vec());
    }

    #[test]
    fn factorize_direct_split() {
        let k = path_complex(2);
        let c = CurveFamily::new(Arc::clone(&k), vec![curve(&k, &["a", "b"])]);
        let d = CurveFamily::new(Arc::clone(&k), vec![curve(&k, &["a"]), curve(&k, &["b"])]);
        let map = factorize(&c, &d).unwrap();
        assert_eq!(
            map.factors,
            vec![vec![
                SignedIndex { index: 0, inverted: false },
                SignedIndex { index: 1, inverted: false }
            ]]
        );
    }

    #[test]
    fn factorize_whole_curve_inverse() {
        let k = path_complex(2);
        let c = CurveFamily::new(Arc::clone(&k), vec![curve(&k, &["~b", "~a"])]);
        let d = CurveFamily::new(Arc::clone(&k), vec![curve(&k, &["a", "b"])]);
        let map = factorize(&c, &d).unwrap();
        assert_eq!(map.factors, vec![vec![SignedIndex { index: 0, inverted: true }]]);
    }

    #[test]
    fn factorize_prefers_low_index_and_matches_brute_force() {
        let k = path_complex(3);
        let c = CurveFamily::new(Arc::clone(&k), vec![curve(&k, &["a", "b", "c"])]);
        let d = CurveFamily::new(
            Arc::clone(&k),
            vec![curve(&k, &["a", "b"]), curve(&k, &["c"]), curve(&k, &["b", "c"])],
        );
        let map = factorize(&c, &d).unwrap();
        assert_eq!(
            map.factors[0],
            vec![
                SignedIndex { index: 0, inverted: false },
                SignedIndex { index: 1, inverted: false }
            ]
        );
        // Independent oracle: enumerate every segmentation.
        let all = enumerate_factorizations(&c.curves[0], &d);
        assert!(all.contains(&map.factors[0]));
        assert!(all.iter().all(|f| {
            let expanded = DependenceMap { factors: vec![f.clone()] }.expand(&d, 0);
            expanded == c.curves[0].word().to_vec()
        }));
        // The returned one is minimal under the tie-break order.
        let key = |f: &Vec<SignedIndex>| -> Vec<(usize, bool)> {
            f.iter().map(|s| (s.index, s.inverted)).collect()
        };
        let mut sorted = all.clone();
        sorted.sort_by_key(key);
        assert_eq!(map.factors[0], sorted[0]);
    }

    /// Brute-force enumeration of all factorizations, used as a test oracle.
    fn enumerate_factorizations(curve: &Curve, d: &CurveFamily) -> Vec<Vec<SignedIndex>> {
        fn go(
            word: &[OrientedEdge],
            pos: usize,
            d: &CurveFamily,
            acc: &mut Vec<SignedIndex>,
            out: &mut Vec<Vec<SignedIndex>>,
        ) {
            if pos == word.len() {
                out.push(acc.clone());
                return;
            }
            for (i, base) in d.curves.iter().enumerate() {
                for inverted in [false, true] {
                    let w: Vec<OrientedEdge> = if inverted {
                        base.word().iter().rev().map(|oe| oe.reversed()).collect()
                    } else {
                        base.word().to_vec()
                    };
                    if pos + w.len() <= word.len() && word[pos..pos + w.len()] == w[..] {
                        acc.push(SignedIndex { index: i, inverted });
                        go(word, pos + w.len(), d, acc, out);
                        acc.pop();
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(curve.word(), 0, d, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn factorize_failure_reports_prefix() {
        let k = path_complex(3);
        let c = CurveFamily::new(Arc::clone(&k), vec![curve(&k, &["a", "b", "c"])]);
        let d = CurveFamily::new(Arc::clone(&k), vec![curve(&k, &["a"])]);
        match factorize(&c, &d) {
            Err(FactorizeError::NotDependent { curve: 0, reachable_prefix: 1 }) => {}
            other => panic!("unexpected result: {other:?}"),
        }
    }
}
