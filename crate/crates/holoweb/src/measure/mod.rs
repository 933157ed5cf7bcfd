//! Connections, holonomy, attainable sets, the uniform web measure with its
//! sampler, and exact consistency checks between dependent webs.

mod integrate;
mod kernel;

pub use integrate::{
    integrate, invariance_check, IntegralReport, IntegrateOptions, InvarianceReport, Method,
};
pub use kernel::{CylinderFunction, Kernel};

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use thiserror::Error;

use crate::complex::{CurveFamily, Curve, DependenceMap, Dir, EdgeId, OneComplex, VertexId};
use crate::group::{enumerate_subgroup, Element, Group, GroupError};
use crate::web::{SupportHierarchy, Tassel, Web};

#[derive(Debug, Error)]
pub enum MeasureError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Factorize(#[from] crate::complex::FactorizeError),
    #[error("connection does not label edge `{0}`")]
    MissingEdge(String),
    #[error("gauge does not assign vertex `{0}`")]
    MissingVertex(String),
    #[error("enumeration of {needed} labelings exceeds cap {cap}")]
    ResourceExceeded { needed: u128, cap: u64 },
    #[error("unsupported for group {group}: {reason}")]
    Unsupported { group: String, reason: String },
    #[error("tuple has length {got}, expected {expected}")]
    Arity { expected: usize, got: usize },
    #[error("kernel: {0}")]
    Kernel(String),
    #[error("a seed is required for stochastic methods")]
    SeedRequired,
}

/// Default cap on exhaustive enumerations.
pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// An edge-to-element assignment; reverse traversal uses the inverse.
#[derive(Clone, Debug)]
pub struct Connection {
    values: Vec<Element>,
}

impl Connection {
    /// A connection must label every edge of the complex.
    pub fn new(complex: &OneComplex, values: Vec<Element>) -> Result<Self, MeasureError> {
        if values.len() != complex.n_edges() {
            return Err(MeasureError::Arity { expected: complex.n_edges(), got: values.len() });
        }
        Ok(Connection { values })
    }

    pub fn value(&self, e: EdgeId) -> &Element {
        &self.values[e.0]
    }
}

/// Ordered product of letter values along a curve; the evaluation-level
/// homomorphism from the curve algebra into the group.
pub fn holonomy(group: &Group, conn: &Connection, curve: &Curve) -> Result<Element, MeasureError> {
    let mut acc = group.identity();
    for oe in curve.word() {
        let v = conn.value(oe.edge);
        let factor = match oe.dir {
            Dir::Fwd => v.clone(),
            Dir::Rev => group.inv(v)?,
        };
        acc = group.mul(&acc, &factor)?;
    }
    Ok(acc)
}

/// Applies a dependence map to a base-family holonomy tuple.
pub fn apply_dependence(
    map: &DependenceMap,
    group: &Group,
    base: &[Element],
) -> Result<Vec<Element>, MeasureError> {
    let mut out = Vec::with_capacity(map.factors.len());
    for seq in &map.factors {
        let mut acc = group.identity();
        for f in seq {
            let v = base.get(f.index).ok_or(MeasureError::Arity {
                expected: f.index + 1,
                got: base.len(),
            })?;
            let factor = if f.inverted { group.inv(v)? } else { v.clone() };
            acc = group.mul(&acc, &factor)?;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Index-level dependence application for finite backends.
pub fn apply_dependence_idx(map: &DependenceMap, group: &Group, base: &[u32]) -> Vec<u32> {
    map.factors
        .iter()
        .map(|seq| {
            let mut acc = group.identity_idx();
            for f in seq {
                let v = base[f.index];
                let factor = if f.inverted { group.inv_idx(v) } else { v };
                acc = group.mul_idx(acc, factor);
            }
            acc
        })
        .collect()
}

/// The set of holonomy tuples a family can attain, in the representation
/// each backend supports.
#[derive(Clone, Debug, PartialEq)]
pub enum AttainableSet {
    /// Explicit sorted tuples of element indices (finite backends).
    Finite(BTreeSet<Vec<u16>>),
    /// Abelian backends: a character (m_1..m_n) of G^n restricts trivially
    /// to the attainable subgroup iff every listed support sums to zero.
    Constraints(Vec<BTreeSet<usize>>),
    /// SU(2): the support hierarchy itself describes the subgroup.
    Symbolic(SupportHierarchy),
}

impl AttainableSet {
    pub fn finite(&self) -> Option<&BTreeSet<Vec<u16>>> {
        match self {
            AttainableSet::Finite(s) => Some(s),
            _ => None,
        }
    }
}

fn check_cap(order: u64, count: usize, cap: u64) -> Result<u64, MeasureError> {
    let mut space: u128 = 1;
    for _ in 0..count {
        space = space.saturating_mul(u128::from(order));
        if space > u128::from(cap) {
            return Err(MeasureError::ResourceExceeded { needed: space, cap });
        }
    }
    Ok(space as u64)
}

/// Exact image of all edge labelings under the holonomy map, by exhaustive
/// enumeration over the used edges.
pub fn attainable_set(
    family: &CurveFamily,
    group: &Group,
    cap: u64,
) -> Result<AttainableSet, MeasureError> {
    let order = group.order().ok_or_else(|| MeasureError::Unsupported {
        group: group.to_string(),
        reason: "attainable-set enumeration needs a finite group".into(),
    })?;
    let used = family.used_edges();
    check_cap(order, used.len(), cap)?;
    let slot: BTreeMap<EdgeId, usize> =
        used.iter().enumerate().map(|(i, e)| (*e, i)).collect();
    // Per curve: (used-edge slot, inverted) per letter.
    let programs: Vec<Vec<(usize, bool)>> = family
        .curves
        .iter()
        .map(|c| {
            c.word()
                .iter()
                .map(|oe| (slot[&oe.edge], oe.dir == Dir::Rev))
                .collect()
        })
        .collect();

    let mut out = BTreeSet::new();
    let mut labels = vec![0u32; used.len()];
    loop {
        let tuple: Vec<u16> = programs
            .iter()
            .map(|prog| {
                let mut acc = group.identity_idx();
                for &(s, inverted) in prog {
                    let v = if inverted { group.inv_idx(labels[s]) } else { labels[s] };
                    acc = group.mul_idx(acc, v);
                }
                acc as u16
            })
            .collect();
        out.insert(tuple);
        // Mixed-radix increment.
        let mut i = 0;
        loop {
            if i == labels.len() {
                return Ok(AttainableSet::Finite(out));
            }
            labels[i] += 1;
            if u64::from(labels[i]) < order {
                break;
            }
            labels[i] = 0;
            i += 1;
        }
    }
}

/// The subgroup generated by the tassel's types: explicit for finite
/// backends, support constraints for abelian ones, symbolic for SU(2).
pub fn generated_group(
    tassel: &Tassel,
    group: &Group,
    cap: u64,
) -> Result<AttainableSet, MeasureError> {
    let n = tassel.family.len();
    match group {
        Group::Circle => Ok(AttainableSet::Constraints(
            tassel.hierarchy.supports().cloned().collect(),
        )),
        Group::Su2 { .. } => Ok(AttainableSet::Symbolic(tassel.hierarchy.clone())),
        _ => {
            let order = group.order().expect("finite backend");
            check_cap(order, n, cap)?;
            if tassel.hierarchy.all_singletons() {
                // Star tassel: the types already span each factor.
                let mut out = BTreeSet::new();
                let mut tuple = vec![0u32; n];
                loop {
                    out.insert(tuple.iter().map(|&x| x as u16).collect());
                    let mut i = 0;
                    loop {
                        if i == n {
                            return Ok(AttainableSet::Finite(out));
                        }
                        tuple[i] += 1;
                        if u64::from(tuple[i]) < order {
                            break;
                        }
                        tuple[i] = 0;
                        i += 1;
                    }
                }
            }
            let mut gens: Vec<Vec<u32>> = Vec::new();
            for support in tassel.hierarchy.supports() {
                for g in 0..order as u32 {
                    if g == group.identity_idx() {
                        continue;
                    }
                    let mut tuple = vec![group.identity_idx(); n];
                    for &i in support {
                        tuple[i] = g;
                    }
                    gens.push(tuple);
                }
            }
            let set = enumerate_subgroup(group, n, &gens, cap)?;
            Ok(AttainableSet::Finite(
                set.into_iter()
                    .map(|t| t.into_iter().map(|x| x as u16).collect())
                    .collect(),
            ))
        }
    }
}

/// One uniform draw from the web measure: per tassel, one independent Haar
/// draw per hierarchy node occurrence, multiplied along each curve's chain
/// in position order; tassels are independent.
pub fn sample_uniform<R: Rng>(
    web: &Web,
    group: &Group,
    rng: &mut R,
) -> Result<Vec<Element>, MeasureError> {
    let mut out = Vec::with_capacity(web.curve_count());
    for tassel in &web.tassels {
        let h = &tassel.hierarchy;
        let draws: Vec<Vec<Element>> = h
            .nodes
            .iter()
            .map(|node| (0..node.multiplicity).map(|_| group.haar_sample(rng)).collect())
            .collect();
        for chain in &h.curve_chains {
            let mut acc = group.identity();
            let mut occ: BTreeMap<usize, usize> = BTreeMap::new();
            for &node in chain {
                let k = occ.entry(node).or_insert(0);
                acc = group.mul(&acc, &draws[node][*k])?;
                *k += 1;
            }
            out.push(acc);
        }
    }
    Ok(out)
}

/// Index-level sampler for finite backends.
pub fn sample_uniform_idx<R: Rng>(web: &Web, group: &Group, rng: &mut R) -> Vec<u32> {
    let mut out = Vec::with_capacity(web.curve_count());
    for tassel in &web.tassels {
        let h = &tassel.hierarchy;
        let draws: Vec<Vec<u32>> = h
            .nodes
            .iter()
            .map(|node| (0..node.multiplicity).map(|_| group.haar_sample_idx(rng)).collect())
            .collect();
        for chain in &h.curve_chains {
            let mut acc = group.identity_idx();
            let mut occ: BTreeMap<usize, usize> = BTreeMap::new();
            for &node in chain {
                let k = occ.entry(node).or_insert(0);
                acc = group.mul_idx(acc, draws[node][*k]);
                *k += 1;
            }
            out.push(acc);
        }
    }
    out
}

/// An exact distribution over holonomy tuples as integer counts; the
/// probability of a tuple is count / total.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureTable {
    pub arity: usize,
    pub counts: BTreeMap<Vec<u16>, u64>,
    pub total: u64,
}

impl MeasureTable {
    pub fn uniform_over(set: &BTreeSet<Vec<u16>>) -> Self {
        let arity = set.iter().next().map_or(0, |t| t.len());
        let counts: BTreeMap<Vec<u16>, u64> = set.iter().map(|t| (t.clone(), 1)).collect();
        let total = counts.len() as u64;
        MeasureTable { arity, counts, total }
    }

    /// Probability normalization: counts are positive and sum to total.
    pub fn is_normalized(&self) -> bool {
        self.total > 0
            && self.counts.values().all(|&c| c > 0)
            && self.counts.values().sum::<u64>() == self.total
    }

    /// Exact equality as distributions (cross-multiplied integer compare).
    pub fn same_distribution(&self, other: &MeasureTable) -> bool {
        self.arity == other.arity
            && self.counts.len() == other.counts.len()
            && self.counts.iter().all(|(t, &c)| {
                other.counts.get(t).is_some_and(|&d| {
                    u128::from(c) * u128::from(other.total) == u128::from(d) * u128::from(self.total)
                })
            })
    }

    /// Total-variation distance, exact in rational arithmetic and reported
    /// as a float.
    pub fn tv_distance(&self, other: &MeasureTable) -> f64 {
        let keys: BTreeSet<&Vec<u16>> = self.counts.keys().chain(other.counts.keys()).collect();
        let mut acc = 0.0f64;
        for k in keys {
            let p = *self.counts.get(k).unwrap_or(&0) as f64 / self.total as f64;
            let q = *other.counts.get(k).unwrap_or(&0) as f64 / other.total as f64;
            acc += (p - q).abs();
        }
        acc / 2.0
    }
}

/// The uniform measure of a web over a finite backend, as the product of
/// uniform tables on each tassel's generated subgroup.
pub fn uniform_web_table(
    web: &Web,
    group: &Group,
    cap: u64,
) -> Result<MeasureTable, MeasureError> {
    let mut per_tassel: Vec<Vec<Vec<u16>>> = Vec::with_capacity(web.tassels.len());
    let mut space: u128 = 1;
    for t in &web.tassels {
        let set = match generated_group(t, group, cap)? {
            AttainableSet::Finite(s) => s.into_iter().collect::<Vec<_>>(),
            _ => {
                return Err(MeasureError::Unsupported {
                    group: group.to_string(),
                    reason: "explicit web tables need a finite group".into(),
                })
            }
        };
        space = space.saturating_mul(set.len() as u128);
        if space > u128::from(cap) {
            return Err(MeasureError::ResourceExceeded { needed: space, cap });
        }
        per_tassel.push(set);
    }
    let arity = web.curve_count();
    let mut counts = BTreeMap::new();
    let mut idx = vec![0usize; per_tassel.len()];
    let total = space as u64;
    if per_tassel.is_empty() {
        return Ok(MeasureTable { arity, counts: BTreeMap::from([(vec![], 1)]), total: 1 });
    }
    loop {
        let mut tuple = Vec::with_capacity(arity);
        for (j, set) in per_tassel.iter().enumerate() {
            tuple.extend_from_slice(&set[idx[j]]);
        }
        counts.insert(tuple, 1);
        let mut j = 0;
        loop {
            if j == per_tassel.len() {
                return Ok(MeasureTable { arity, counts, total });
            }
            idx[j] += 1;
            if idx[j] < per_tassel[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

/// Pushes an exact table forward through a dependence map.
pub fn pushforward_table(
    table: &MeasureTable,
    map: &DependenceMap,
    group: &Group,
) -> MeasureTable {
    let mut counts: BTreeMap<Vec<u16>, u64> = BTreeMap::new();
    for (tuple, &c) in &table.counts {
        let base: Vec<u32> = tuple.iter().map(|&x| u32::from(x)).collect();
        let image = apply_dependence_idx(map, group, &base);
        let key: Vec<u16> = image.into_iter().map(|x| x as u16).collect();
        *counts.entry(key).or_insert(0) += c;
    }
    MeasureTable { arity: map.factors.len(), counts, total: table.total }
}

/// Result of checking that one web measure pushes to another.
#[derive(Clone, Debug)]
pub struct ConsistencyReport {
    pub exact_match: bool,
    pub max_tv_distance: f64,
    pub pushed_support: usize,
    pub direct_support: usize,
}

/// Verifies that the uniform measure of `x` pushes forward to the uniform
/// measure of `w` along the factorization of w's curves over x's; exact
/// backends must report distance zero.
pub fn pushforward_check(
    w: &Web,
    x: &Web,
    group: &Group,
    cap: u64,
) -> Result<ConsistencyReport, MeasureError> {
    let wf = w.union_family();
    let xf = x.union_family();
    let map = crate::complex::factorize(&wf, &xf)?;
    let nu_x = uniform_web_table(x, group, cap)?;
    let pushed = pushforward_table(&nu_x, &map, group);
    let nu_w = uniform_web_table(w, group, cap)?;
    Ok(compare_tables(&pushed, &nu_w))
}

/// Compares a pushed table against a directly constructed one.
pub fn compare_tables(pushed: &MeasureTable, direct: &MeasureTable) -> ConsistencyReport {
    ConsistencyReport {
        exact_match: pushed.same_distribution(direct),
        max_tv_distance: pushed.tv_distance(direct),
        pushed_support: pushed.counts.len(),
        direct_support: direct.counts.len(),
    }
}

/// Vertex-indexed gauge data.
pub type GaugeMap = BTreeMap<VertexId, Element>;

/// Transforms a holonomy tuple by h(start) · g · h(end)^{-1} per curve.
pub fn gauge_transform(
    gauge: &GaugeMap,
    group: &Group,
    family: &CurveFamily,
    hols: &[Element],
) -> Result<Vec<Element>, MeasureError> {
    if hols.len() != family.len() {
        return Err(MeasureError::Arity { expected: family.len(), got: hols.len() });
    }
    let complex = &family.complex;
    let lookup = |v: VertexId| -> Result<&Element, MeasureError> {
        gauge
            .get(&v)
            .ok_or_else(|| MeasureError::MissingVertex(complex.vertex_name(v).to_string()))
    };
    family
        .curves
        .iter()
        .zip(hols.iter())
        .map(|(c, g)| {
            let hs = lookup(c.start())?;
            let he = lookup(c.end())?;
            let out = group.mul(&group.mul(hs, g)?, &group.inv(he)?)?;
            Ok(out)
        })
        .collect()
}
