//! Consistent parametrization, tassels, support hierarchies, webs, and the
//! decomposition of an arbitrary curve family into a star web it depends on.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::complex::{
    subdivide, Curve, CurveFamily, DependenceMap, Dir, EdgeId, OneComplex, OrientedEdge,
    SignedIndex, Subdivision, VertexId,
};

#[derive(Debug, Error, PartialEq)]
pub enum Violation {
    #[error("edge `{edge}` occurs at positions {position_a} (curve {curve_a}) and {position_b} (curve {curve_b})")]
    PositionClash {
        edge: String,
        curve_a: usize,
        position_a: usize,
        curve_b: usize,
        position_b: usize,
    },
    #[error("edge `{edge}` is traversed in both orientations (curves {curve_a} and {curve_b}, position {position})")]
    OrientationClash { edge: String, curve_a: usize, curve_b: usize, position: usize },
    #[error("curve {curve} visits vertex `{vertex}` twice")]
    VertexRevisit { curve: usize, vertex: String },
    #[error("curve {curve} starts at `{start}`, not at the base `{base}`")]
    NotBased { curve: usize, start: String, base: String },
    #[error("curves {curve_a} and {curve_b} share edge `{edge}` at position {position} but their prefixes differ at position {differs_at}")]
    PrefixClosure {
        curve_a: usize,
        curve_b: usize,
        edge: String,
        position: usize,
        differs_at: usize,
    },
    #[error("tassels {tassel_a} and {tassel_b} share edge `{edge}`")]
    SharedEdge { tassel_a: usize, tassel_b: usize, edge: String },
    #[error("tassels {tassel_a} and {tassel_b} share vertex `{vertex}`, which is not a curve right-endpoint in both")]
    BadSharedVertex { tassel_a: usize, tassel_b: usize, vertex: String },
    #[error("vertex `{vertex}` is shared by three or more tassels")]
    OvershardVertex { vertex: String },
    #[error("tassels must live on one complex")]
    ComplexMismatch,
}

/// Letter positions (1-based) per curve; consistency means every shared
/// edge sits at one common position with one common orientation, and each
/// curve is vertex-simple.
#[derive(Clone, Debug, PartialEq)]
pub struct Parametrization {
    /// Per edge used by the family: (position, orientation).
    pub edge_slots: BTreeMap<EdgeId, (usize, Dir)>,
}

/// The curves passing through one (edge, position) letter slot.
#[derive(Clone, Debug, PartialEq)]
pub struct TypeSupport {
    pub support: BTreeSet<usize>,
    pub witness: OrientedEdge,
    pub position: usize,
}

/// A node of the laminar support forest; runs of equal supports at
/// consecutive positions are merged with a multiplicity count.
#[derive(Clone, Debug, PartialEq)]
pub struct HierarchyNode {
    pub support: BTreeSet<usize>,
    pub multiplicity: usize,
    pub parent: Option<usize>,
    /// Witness letters, one per merged position in order.
    pub witnesses: Vec<(OrientedEdge, usize)>,
}

/// The distinct supports of a tassel as a laminar forest, with each curve's
/// chain of node visits by position.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportHierarchy {
    pub nodes: Vec<HierarchyNode>,
    /// Per curve, the node id at each letter position (so consecutive equal
    /// entries step through one node's multiplicity).
    pub curve_chains: Vec<Vec<usize>>,
}

impl SupportHierarchy {
    /// Total number of independent draws needed by the uniform sampler.
    pub fn draw_count(&self) -> usize {
        self.nodes.iter().map(|n| n.multiplicity).sum()
    }

    /// Distinct supports, one per node.
    pub fn supports(&self) -> impl Iterator<Item = &BTreeSet<usize>> {
        self.nodes.iter().map(|n| &n.support)
    }

    /// True when every support is a singleton (a star tassel).
    pub fn all_singletons(&self) -> bool {
        self.nodes.iter().all(|n| n.support.len() == 1)
    }
}

/// A consistently parametrized, prefix-closed family based at one vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct Tassel {
    pub family: CurveFamily,
    pub base: VertexId,
    pub parametrization: Parametrization,
    pub hierarchy: SupportHierarchy,
}

/// An ordered, edge-disjoint collection of tassels meeting only at curve
/// right-endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct Web {
    pub complex: Arc<OneComplex>,
    pub tassels: Vec<Tassel>,
}

impl Web {
    /// All tassel curves concatenated in web order, as one family.
    pub fn union_family(&self) -> CurveFamily {
        let curves = self
            .tassels
            .iter()
            .flat_map(|t| t.family.curves.iter().cloned())
            .collect();
        CurveFamily::new(Arc::clone(&self.complex), curves)
    }

    pub fn curve_count(&self) -> usize {
        self.tassels.iter().map(|t| t.family.len()).sum()
    }

    /// Offset of each tassel's curves inside the union family.
    pub fn tassel_offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.tassels.len());
        let mut acc = 0;
        for t in &self.tassels {
            out.push(acc);
            acc += t.family.len();
        }
        out
    }

    /// Vertices where curves end, with the (tassel, curve) slots ending there.
    pub fn endpoints(&self) -> BTreeMap<VertexId, Vec<(usize, usize)>> {
        let mut out: BTreeMap<VertexId, Vec<(usize, usize)>> = BTreeMap::new();
        for (ti, t) in self.tassels.iter().enumerate() {
            for (ci, c) in t.family.curves.iter().enumerate() {
                out.entry(c.end()).or_default().push((ti, ci));
            }
        }
        out
    }
}

/// Checks that letter positions parametrize the family consistently.
pub fn consistent_parametrization(family: &CurveFamily) -> Result<Parametrization, Violation> {
    let complex = &family.complex;
    for (ci, c) in family.curves.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for v in c.visited(complex) {
            if !seen.insert(v) {
                return Err(Violation::VertexRevisit {
                    curve: ci,
                    vertex: complex.vertex_name(v).to_string(),
                });
            }
        }
    }
    let mut edge_slots: BTreeMap<EdgeId, (usize, Dir, usize)> = BTreeMap::new();
    for (ci, c) in family.curves.iter().enumerate() {
        for (k, oe) in c.word().iter().enumerate() {
            let position = k + 1;
            match edge_slots.get(&oe.edge) {
                None => {
                    edge_slots.insert(oe.edge, (position, oe.dir, ci));
                }
                Some(&(pos, dir, owner)) => {
                    if pos != position {
                        return Err(Violation::PositionClash {
                            edge: complex.edge(oe.edge).name.clone(),
                            curve_a: owner,
                            position_a: pos,
                            curve_b: ci,
                            position_b: position,
                        });
                    }
                    if dir != oe.dir {
                        return Err(Violation::OrientationClash {
                            edge: complex.edge(oe.edge).name.clone(),
                            curve_a: owner,
                            curve_b: ci,
                            position,
                        });
                    }
                }
            }
        }
    }
    Ok(Parametrization {
        edge_slots: edge_slots.into_iter().map(|(e, (p, d, _))| (e, (p, d))).collect(),
    })
}

/// One support per distinct (edge, position) letter of the family.
pub fn types_of(family: &CurveFamily, _par: &Parametrization) -> Vec<TypeSupport> {
    let mut slots: BTreeMap<(usize, EdgeId), (BTreeSet<usize>, Dir)> = BTreeMap::new();
    for (ci, c) in family.curves.iter().enumerate() {
        for (k, oe) in c.word().iter().enumerate() {
            let entry = slots
                .entry((k + 1, oe.edge))
                .or_insert_with(|| (BTreeSet::new(), oe.dir));
            entry.0.insert(ci);
        }
    }
    slots
        .into_iter()
        .map(|((position, edge), (support, dir))| TypeSupport {
            support,
            witness: OrientedEdge { edge, dir },
            position,
        })
        .collect()
}

/// Validates the tassel conditions at `base` and builds the support
/// hierarchy; the laminar structure is a consequence of prefix-closure.
pub fn check_tassel(family: &CurveFamily, base: VertexId) -> Result<Tassel, Violation> {
    let complex = &family.complex;
    for (ci, c) in family.curves.iter().enumerate() {
        if c.start() != base {
            return Err(Violation::NotBased {
                curve: ci,
                start: complex.vertex_name(c.start()).to_string(),
                base: complex.vertex_name(base).to_string(),
            });
        }
    }
    let parametrization = consistent_parametrization(family)?;

    // Prefix-closure: curves sharing a letter at position k share all
    // letters up to k.
    let n = family.len();
    for a in 0..n {
        for b in (a + 1)..n {
            let wa = family.curves[a].word();
            let wb = family.curves[b].word();
            let common = wa.len().min(wb.len());
            let mut differs_at: Option<usize> = None;
            for k in 0..common {
                if wa[k] == wb[k] {
                    if let Some(d) = differs_at {
                        return Err(Violation::PrefixClosure {
                            curve_a: a,
                            curve_b: b,
                            edge: complex.edge(wa[k].edge).name.clone(),
                            position: k + 1,
                            differs_at: d + 1,
                        });
                    }
                } else if differs_at.is_none() {
                    differs_at = Some(k);
                }
            }
        }
    }

    let hierarchy = build_hierarchy(family);
    Ok(Tassel { family: family.clone(), base, parametrization, hierarchy })
}

fn build_hierarchy(family: &CurveFamily) -> SupportHierarchy {
    let n = family.len();
    // Support at position k of curve i: all curves sharing the same letter.
    let mut node_of_support: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    let mut nodes: Vec<HierarchyNode> = Vec::new();
    let mut curve_chains: Vec<Vec<usize>> = vec![Vec::new(); n];

    let max_len = family.curves.iter().map(|c| c.len()).max().unwrap_or(0);
    for k in 0..max_len {
        // Group active curves by their letter at position k.
        let mut groups: BTreeMap<OrientedEdge, BTreeSet<usize>> = BTreeMap::new();
        for (ci, c) in family.curves.iter().enumerate() {
            if let Some(oe) = c.word().get(k) {
                groups.entry(*oe).or_default().insert(ci);
            }
        }
        for (oe, support) in groups {
            let node = match node_of_support.get(&support) {
                Some(&id) => {
                    nodes[id].multiplicity += 1;
                    nodes[id].witnesses.push((oe, k + 1));
                    id
                }
                None => {
                    let id = nodes.len();
                    nodes.push(HierarchyNode {
                        support: support.clone(),
                        multiplicity: 1,
                        parent: None,
                        witnesses: vec![(oe, k + 1)],
                    });
                    node_of_support.insert(support.clone(), id);
                    id
                }
            };
            for &ci in &nodes[node].support.clone() {
                curve_chains[ci].push(node);
            }
        }
    }

    // Parents: the smallest strictly containing support. With prefix
    // closure, each curve's chain is weakly decreasing, so the previous
    // distinct node along any member curve is the parent.
    for id in 0..nodes.len() {
        let member = *nodes[id].support.iter().next().expect("nonempty support");
        let chain = &curve_chains[member];
        let first_pos = chain.iter().position(|&x| x == id).expect("member visits node");
        if first_pos > 0 {
            nodes[id].parent = Some(chain[first_pos - 1]);
        }
    }
    SupportHierarchy { nodes, curve_chains }
}

/// Verifies laminarity of a support family; used as an internal invariant
/// check and by tests.
pub fn is_laminar<'a>(supports: impl Iterator<Item = &'a BTreeSet<usize>>) -> bool {
    let all: Vec<&BTreeSet<usize>> = supports.collect();
    for (i, a) in all.iter().enumerate() {
        for b in all.iter().skip(i + 1) {
            let inter = a.intersection(b).count();
            if inter != 0 && inter != a.len().min(b.len()) {
                return false;
            }
            if inter == a.len().min(b.len()) && !(a.is_subset(b) || b.is_subset(a)) {
                return false;
            }
        }
    }
    true
}

/// Validates edge-disjointness and the shared-vertex rules for a web.
pub fn check_web(tassels: Vec<Tassel>) -> Result<Web, Violation> {
    if tassels.is_empty() {
        return Err(Violation::ComplexMismatch);
    }
    let complex = Arc::clone(&tassels[0].family.complex);
    for t in &tassels[1..] {
        if t.family.complex != complex {
            return Err(Violation::ComplexMismatch);
        }
    }

    // Edge-disjointness.
    let mut edge_owner: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (ti, t) in tassels.iter().enumerate() {
        for e in t.family.used_edges() {
            if let Some(&other) = edge_owner.get(&e) {
                return Err(Violation::SharedEdge {
                    tassel_a: other,
                    tassel_b: ti,
                    edge: complex.edge(e).name.clone(),
                });
            }
            edge_owner.insert(e, ti);
        }
    }

    // Vertex roles per tassel: whether each visited vertex is only ever a
    // curve right-endpoint there.
    let mut visitors: BTreeMap<VertexId, Vec<(usize, bool)>> = BTreeMap::new();
    for (ti, t) in tassels.iter().enumerate() {
        let mut role: BTreeMap<VertexId, bool> = BTreeMap::new();
        for c in &t.family.curves {
            let visited = c.visited(&complex);
            for (k, v) in visited.iter().enumerate() {
                let is_right_end = k + 1 == visited.len();
                role.entry(*v)
                    .and_modify(|r| *r &= is_right_end)
                    .or_insert(is_right_end);
            }
        }
        for (v, only_endpoint) in role {
            visitors.entry(v).or_default().push((ti, only_endpoint));
        }
    }
    for (v, list) in &visitors {
        if list.len() >= 3 {
            return Err(Violation::OvershardVertex {
                vertex: complex.vertex_name(*v).to_string(),
            });
        }
        if list.len() == 2 && !(list[0].1 && list[1].1) {
            return Err(Violation::BadSharedVertex {
                tassel_a: list[0].0,
                tassel_b: list[1].0,
                vertex: complex.vertex_name(*v).to_string(),
            });
        }
    }
    Ok(Web { complex, tassels })
}

/// A family decomposed over a star web on the subdivided complex.
#[derive(Debug)]
pub struct Decomposition {
    /// The subdivision round: refined complex plus the rewritten family.
    pub subdivision: Subdivision,
    /// Star web of half-edge tassels, one per touched original vertex.
    pub web: Web,
    /// Factorization of each rewritten curve over the web's union family.
    pub map: DependenceMap,
}

impl Decomposition {
    pub fn rewritten_family(&self) -> &CurveFamily {
        &self.subdivision.families[0]
    }
}

/// Decomposes any family into a web it depends on: subdivide once, then
/// collect for each touched original vertex the star tassel of half-edge
/// curves oriented away from it.
pub fn decompose_family(family: &CurveFamily) -> Decomposition {
    let complex = &family.complex;
    let sub = subdivide(complex, &[family]);

    // Which (vertex, edge-end) half-edges does the family use?
    let used = family.used_edges();
    // Tassels ordered by original vertex name; curves by original edge name.
    let mut star: BTreeMap<String, BTreeMap<String, Curve>> = BTreeMap::new();
    for e in &used {
        let rec = complex.edge(*e);
        let (lo, hi) = sub.halves[e.0];
        let away_src = Curve::new(&sub.complex, vec![OrientedEdge::fwd(lo)]).unwrap();
        let away_dst = Curve::new(&sub.complex, vec![OrientedEdge::rev(hi)]).unwrap();
        star.entry(complex.vertex_name(rec.src).to_string())
            .or_default()
            .insert(rec.name.clone(), away_src);
        star.entry(complex.vertex_name(rec.dst).to_string())
            .or_default()
            .insert(rec.name.clone(), away_dst);
    }

    let mut tassels = Vec::with_capacity(star.len());
    // Signed index of each half-edge curve inside the union family, keyed
    // by the oriented half-edge a forward traversal crosses.
    let mut slot_of_half: BTreeMap<EdgeId, SignedIndex> = BTreeMap::new();
    let mut offset = 0;
    for (vname, curves) in &star {
        let base = sub.complex.vertex(vname).expect("original vertex survives");
        let list: Vec<Curve> = curves.values().cloned().collect();
        for (ci, c) in list.iter().enumerate() {
            let oe = c.word()[0];
            let slot = SignedIndex { index: offset + ci, inverted: oe.dir == Dir::Rev };
            slot_of_half.insert(oe.edge, slot);
        }
        offset += list.len();
        let fam = CurveFamily::new(Arc::clone(&sub.complex), list);
        let tassel = check_tassel(&fam, base).expect("star construction yields a tassel");
        tassels.push(tassel);
    }
    let web = check_web(tassels).expect("star construction yields a web");

    // Factorize each rewritten curve letter-by-letter: a half-edge letter
    // matches the away-oriented curve of exactly one star tassel.
    let rewritten = &sub.families[0];
    let factors = rewritten
        .curves
        .iter()
        .map(|c| {
            c.word()
                .iter()
                .map(|oe| {
                    let slot = slot_of_half[&oe.edge];
                    match oe.dir {
                        Dir::Fwd => slot,
                        Dir::Rev => SignedIndex { index: slot.index, inverted: !slot.inverted },
                    }
                })
                .collect()
        })
        .collect();
    let map = DependenceMap { factors };

    debug_assert!({
        let union = web.union_family();
        rewritten
            .curves
            .iter()
            .enumerate()
            .all(|(i, c)| map.expand(&union, i) == c.word().to_vec())
    });

    Decomposition { subdivision: sub, web, map }
}

/// Rewrites a web onto the subdivided complex; tassel structure survives a
/// subdivision round unchanged.
pub fn subdivide_web(web: &Web) -> (Web, Subdivision) {
    let families: Vec<&CurveFamily> = web.tassels.iter().map(|t| &t.family).collect();
    let sub = subdivide(&web.complex, &families);
    let tassels: Vec<Tassel> = web
        .tassels
        .iter()
        .zip(sub.families.iter())
        .map(|(t, fam)| {
            let base = sub
                .complex
                .vertex(web.complex.vertex_name(t.base))
                .expect("original vertex survives");
            check_tassel(fam, base).expect("subdivision preserves tassels")
        })
        .collect();
    let web2 = check_web(tassels).expect("subdivision preserves webs");
    (web2, sub)
}
