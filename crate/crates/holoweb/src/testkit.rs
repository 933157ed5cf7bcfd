//! Fixture generators for verification suites: random prefix-closed
//! tassels, random webs of disjoint tassels, and exhaustive enumeration of
//! small tassel structures and curve families.
//!
//! A tassel structure is a rooted edge-forest: each curve is a root-to-node
//! path, and curves sharing a node share the whole prefix above it. Every
//! structure generated here materializes to a valid tassel by construction.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::complex::{Curve, CurveFamily, OneComplex, OrientedEdge, VertexId};
use crate::web::{check_tassel, check_web, Tassel, Web};

/// A tassel structure before materialization: per position, the node id of
/// each curve (`usize::MAX` once the curve has ended).
#[derive(Clone, Debug)]
pub struct TasselStructure {
    pub n_curves: usize,
    pub lengths: Vec<usize>,
    pub node_ids: Vec<Vec<usize>>,
    pub node_count: usize,
    /// Traversal-reversed edges by node id.
    pub reversed: Vec<bool>,
}

impl TasselStructure {
    /// Builds the complex and family; the base vertex is `{prefix}base`.
    pub fn materialize(&self, prefix: &str) -> (Arc<OneComplex>, CurveFamily, VertexId) {
        let base = format!("{prefix}base");
        let mut vertices: Vec<String> = vec![base.clone()];
        vertices.extend((0..self.node_count).map(|n| format!("{prefix}n{n}")));

        // Parent vertex per node: the previous node along any member path.
        let mut parent: Vec<String> = vec![base.clone(); self.node_count];
        for (k, ids) in self.node_ids.iter().enumerate() {
            for i in 0..self.n_curves {
                let id = ids[i];
                if id != usize::MAX && k > 0 {
                    let up = self.node_ids[k - 1][i];
                    parent[id] = format!("{prefix}n{up}");
                }
            }
        }
        let mut edges = Vec::with_capacity(self.node_count);
        for n in 0..self.node_count {
            let child = format!("{prefix}n{n}");
            let name = format!("{prefix}e{n}");
            if self.reversed[n] {
                edges.push((name, child, parent[n].clone()));
            } else {
                edges.push((name, parent[n].clone(), child));
            }
        }
        let complex = Arc::new(OneComplex::new(vertices, edges).expect("structure is a forest"));
        let curves: Vec<Curve> = (0..self.n_curves)
            .map(|i| {
                let word: Vec<OrientedEdge> = (0..self.lengths[i])
                    .map(|p| {
                        let n = self.node_ids[p][i];
                        let e = complex.edge_by_name(&format!("{prefix}e{n}")).unwrap();
                        if self.reversed[n] {
                            OrientedEdge::rev(e)
                        } else {
                            OrientedEdge::fwd(e)
                        }
                    })
                    .collect();
                Curve::new(&complex, word).expect("forest paths chain")
            })
            .collect();
        let family = CurveFamily::new(Arc::clone(&complex), curves);
        let base = complex.vertex(&base).unwrap();
        (complex, family, base)
    }

    pub fn into_tassel(&self, prefix: &str) -> Tassel {
        let (_, family, base) = self.materialize(prefix);
        check_tassel(&family, base).expect("generated structures are tassels")
    }
}

/// A random structure with at most the given sizes; node count never
/// exceeds `max_edges`.
pub fn random_structure<R: Rng>(
    rng: &mut R,
    max_curves: usize,
    max_len: usize,
    max_edges: usize,
) -> TasselStructure {
    loop {
        let n_curves = rng.random_range(1..=max_curves);
        let lengths: Vec<usize> =
            (0..n_curves).map(|_| rng.random_range(1..=max_len)).collect();
        let mut node_ids: Vec<Vec<usize>> = Vec::new();
        let mut node_count = 0usize;
        let mut overflow = false;
        let mut clipped = vec![0usize; n_curves];
        for k in 0..max_len {
            let active: Vec<usize> = (0..n_curves).filter(|&i| lengths[i] > k).collect();
            if active.is_empty() {
                break;
            }
            // Refine the previous partition, splitting blocks at random.
            let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for &i in &active {
                let prev = if k == 0 { 0 } else { node_ids[k - 1][i] };
                groups.entry(prev).or_default().push(i);
            }
            let mut ids = vec![usize::MAX; n_curves];
            let mut fresh = node_count;
            for (_, members) in groups {
                if members.len() == 1 || rng.random_bool(0.55) {
                    for &i in &members {
                        ids[i] = fresh;
                    }
                    fresh += 1;
                } else {
                    let cut = rng.random_range(1..members.len());
                    for (pos, &i) in members.iter().enumerate() {
                        ids[i] = fresh + usize::from(pos >= cut);
                    }
                    fresh += 2;
                }
            }
            if fresh > max_edges {
                overflow = true;
                break;
            }
            node_count = fresh;
            for &i in &active {
                clipped[i] = k + 1;
            }
            node_ids.push(ids);
        }
        if node_count == 0 {
            continue;
        }
        let lengths = if overflow { clipped } else { lengths };
        if lengths.iter().any(|&l| l == 0) {
            continue;
        }
        let reversed = (0..node_count).map(|_| rng.random_bool(0.3)).collect();
        return TasselStructure { n_curves, lengths, node_ids, node_count, reversed };
    }
}

pub fn random_tassel<R: Rng>(
    rng: &mut R,
    max_curves: usize,
    max_len: usize,
    max_edges: usize,
) -> Tassel {
    random_structure(rng, max_curves, max_len, max_edges).into_tassel("t")
}

/// A web of vertex-disjoint random tassels on one merged complex.
pub fn random_web<R: Rng>(
    rng: &mut R,
    n_tassels: usize,
    max_curves: usize,
    max_len: usize,
    max_edges_per_tassel: usize,
) -> Web {
    let structures: Vec<TasselStructure> = (0..n_tassels)
        .map(|_| random_structure(rng, max_curves, max_len, max_edges_per_tassel))
        .collect();
    merge_into_web(&structures)
}

/// Materializes disjoint structures onto one complex and validates the web.
pub fn merge_into_web(structures: &[TasselStructure]) -> Web {
    let parts: Vec<(Arc<OneComplex>, CurveFamily, VertexId)> = structures
        .iter()
        .enumerate()
        .map(|(t, s)| s.materialize(&format!("w{t}_")))
        .collect();
    let mut vertices: Vec<String> = Vec::new();
    let mut edges: Vec<(String, String, String)> = Vec::new();
    for (k, _, _) in &parts {
        vertices.extend(k.vertices().iter().cloned());
        for e in k.edges() {
            edges.push((
                e.name.clone(),
                k.vertex_name(e.src).to_string(),
                k.vertex_name(e.dst).to_string(),
            ));
        }
    }
    let merged = Arc::new(OneComplex::new(vertices, edges).expect("disjoint parts merge"));
    let tassels: Vec<Tassel> = parts
        .iter()
        .map(|(k, fam, base)| {
            let curves: Vec<Curve> = fam
                .curves
                .iter()
                .map(|c| {
                    let word = c
                        .word()
                        .iter()
                        .map(|oe| OrientedEdge {
                            edge: merged.edge_by_name(&k.edge(oe.edge).name).unwrap(),
                            dir: oe.dir,
                        })
                        .collect();
                    Curve::new(&merged, word).unwrap()
                })
                .collect();
            let fam = CurveFamily::new(Arc::clone(&merged), curves);
            check_tassel(&fam, merged.vertex(k.vertex_name(*base)).unwrap())
                .expect("structure stays a tassel after merging")
        })
        .collect();
    check_web(tassels).expect("disjoint tassels form a web")
}

/// Every set partition of `items`, each as a list of blocks.
fn set_partitions(items: &[usize]) -> Vec<Vec<Vec<usize>>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let first = items[0];
    let rest = set_partitions(&items[1..]);
    let mut out = Vec::new();
    for p in rest {
        // Insert into each existing block, or as a new block.
        for b in 0..p.len() {
            let mut q = p.clone();
            q[b].insert(0, first);
            out.push(q);
        }
        let mut q = p.clone();
        q.insert(0, vec![first]);
        out.push(q);
    }
    out
}

/// Exhaustively enumerates tassel structures with at most the given curve
/// count, word length, and edge budget. Forward orientations, plus one
/// alternating-reversal variant per structure.
pub fn exhaustive_structures(
    max_curves: usize,
    max_len: usize,
    max_edges: usize,
) -> Vec<TasselStructure> {
    let mut out = Vec::new();
    for n_curves in 1..=max_curves {
        let mut lengths = vec![1usize; n_curves];
        loop {
            // Enumerate partition chains for these lengths.
            enumerate_chains(n_curves, &lengths, max_edges, &mut out);
            let mut i = 0;
            while i < n_curves {
                lengths[i] += 1;
                if lengths[i] <= max_len {
                    break;
                }
                lengths[i] = 1;
                i += 1;
            }
            if i == n_curves {
                break;
            }
        }
    }
    // Orientation variant: reverse every other node.
    let mut variants = Vec::with_capacity(out.len() * 2);
    for s in out {
        let mut alt = s.clone();
        for (n, r) in alt.reversed.iter_mut().enumerate() {
            *r = n % 2 == 1;
        }
        variants.push(s);
        variants.push(alt);
    }
    variants
}

fn enumerate_chains(
    n_curves: usize,
    lengths: &[usize],
    max_edges: usize,
    out: &mut Vec<TasselStructure>,
) {
    fn go(
        k: usize,
        n_curves: usize,
        lengths: &[usize],
        max_edges: usize,
        node_ids: &mut Vec<Vec<usize>>,
        node_count: usize,
        out: &mut Vec<TasselStructure>,
    ) {
        let max_len = lengths.iter().copied().max().unwrap();
        if k == max_len {
            out.push(TasselStructure {
                n_curves,
                lengths: lengths.to_vec(),
                node_ids: node_ids.clone(),
                node_count,
                reversed: vec![false; node_count],
            });
            return;
        }
        let active: Vec<usize> = (0..n_curves).filter(|&i| lengths[i] > k).collect();
        if active.is_empty() {
            out.push(TasselStructure {
                n_curves,
                lengths: lengths.to_vec(),
                node_ids: node_ids.clone(),
                node_count,
                reversed: vec![false; node_count],
            });
            return;
        }
        // Group by previous node, then partition each group independently.
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &i in &active {
            let prev = if k == 0 { 0 } else { node_ids[k - 1][i] };
            groups.entry(prev).or_default().push(i);
        }
        let group_partitions: Vec<Vec<Vec<Vec<usize>>>> =
            groups.values().map(|members| set_partitions(members)).collect();
        // Cartesian product over groups.
        let mut pick = vec![0usize; group_partitions.len()];
        loop {
            let mut ids = vec![usize::MAX; n_curves];
            let mut fresh = node_count;
            for (gi, parts) in group_partitions.iter().enumerate() {
                for block in &parts[pick[gi]] {
                    for &i in block {
                        ids[i] = fresh;
                    }
                    fresh += 1;
                }
            }
            if fresh <= max_edges {
                node_ids.push(ids);
                go(k + 1, n_curves, lengths, max_edges, node_ids, fresh, out);
                node_ids.pop();
            }
            let mut g = 0;
            while g < pick.len() {
                pick[g] += 1;
                if pick[g] < group_partitions[g].len() {
                    break;
                }
                pick[g] = 0;
                g += 1;
            }
            if g == pick.len() {
                break;
            }
        }
    }
    go(0, n_curves, lengths, max_edges, &mut Vec::new(), 0, out);
}

/// All chainable words up to the given length on a complex, then all
/// families of up to `max_curves` of them. Sized for triangle-scale
/// complexes.
pub fn small_family_corpus(
    complex: &Arc<OneComplex>,
    max_len: usize,
    max_curves: usize,
) -> Vec<CurveFamily> {
    let mut words: Vec<Vec<OrientedEdge>> = Vec::new();
    // Seed with single letters.
    let mut frontier: Vec<Vec<OrientedEdge>> = Vec::new();
    for e in 0..complex.n_edges() {
        use crate::complex::EdgeId;
        frontier.push(vec![OrientedEdge::fwd(EdgeId(e))]);
        frontier.push(vec![OrientedEdge::rev(EdgeId(e))]);
    }
    for _ in 0..max_len {
        words.extend(frontier.iter().cloned());
        let mut next = Vec::new();
        for w in &frontier {
            let end = complex.end_of(*w.last().unwrap());
            for e in 0..complex.n_edges() {
                use crate::complex::EdgeId;
                for oe in [OrientedEdge::fwd(EdgeId(e)), OrientedEdge::rev(EdgeId(e))] {
                    if complex.start_of(oe) == end {
                        let mut w2 = w.clone();
                        w2.push(oe);
                        next.push(w2);
                    }
                }
            }
        }
        frontier = next;
    }
    let curves: Vec<Curve> = words
        .into_iter()
        .map(|w| Curve::new(complex, w).unwrap())
        .collect();
    let mut families = Vec::new();
    for i in 0..curves.len() {
        families.push(CurveFamily::new(Arc::clone(complex), vec![curves[i].clone()]));
        if max_curves >= 2 {
            for j in i..curves.len() {
                families.push(CurveFamily::new(
                    Arc::clone(complex),
                    vec![curves[i].clone(), curves[j].clone()],
                ));
            }
        }
    }
    families
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_structures_are_valid_tassels() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let t = random_tassel(&mut rng, 4, 4, 8);
            assert!(crate::web::is_laminar(t.hierarchy.supports()));
        }
    }

    #[test]
    fn random_webs_validate() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let w = random_web(&mut rng, 3, 3, 3, 5);
            assert_eq!(w.tassels.len(), 3);
        }
    }

    #[test]
    fn exhaustive_structures_materialize() {
        let all = exhaustive_structures(2, 2, 4);
        assert!(!all.is_empty());
        for s in &all {
            let _ = s.into_tassel("x");
        }
    }

    #[test]
    fn exhaustive_counts_are_stable() {
        // One curve of length <= 3 gives three chains, each in two
        // orientation variants.
        let singles = exhaustive_structures(1, 3, 6);
        assert_eq!(singles.len(), 6);
    }
}
