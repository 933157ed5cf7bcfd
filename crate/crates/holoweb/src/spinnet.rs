//! Spin-network states on webs: irrep labels per tassel, base intertwiners,
//! canonical endpoint pairings, evaluation, and the closed-form inner
//! product. Exact for abelian groups on arbitrary webs and for SU(2) on
//! star webs.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::complex::VertexId;
use crate::group::{char_value, clebsch_gordan, wigner_d, Element, Group, HalfInt, IrrepLabel};
use crate::web::Web;

#[derive(Debug, Error)]
pub enum SpinError {
    #[error("backend unsupported: {0}")]
    Unsupported(String),
    #[error("spin {j} exceeds the configured bound {j_max}")]
    SpinLimit { j: HalfInt, j_max: HalfInt },
    #[error("tassel {tassel} admits no base-invariant vector for these labels")]
    NoInvariantVector { tassel: usize },
    #[error("tassel {tassel} has a {dim}-dimensional invariant space; choose an intertwiner path")]
    AmbiguousIntertwiner { tassel: usize, dim: usize },
    #[error("intertwiner path for tassel {tassel} is not a valid zero-coupling")]
    BadIntertwiner { tassel: usize },
    #[error("endpoint `{vertex}` bounds one tassel but carries a nontrivial label")]
    NontrivialSingleEndpoint { vertex: String },
    #[error("labels at shared endpoint `{vertex}` are not dual")]
    DualityMismatch { vertex: String },
    #[error("label count mismatch: tassel {tassel} has {curves} curves, got {got} labels")]
    LabelArity { tassel: usize, curves: usize, got: usize },
    #[error("spin networks must share one web")]
    WebMismatch,
    #[error("evaluation point has arity {got}, expected {expected}")]
    PointArity { expected: usize, got: usize },
    #[error(transparent)]
    Group(#[from] crate::group::GroupError),
}

/// Irrep data per tassel: one character exponent per curve (abelian), or
/// one spin per curve (SU(2) star tassels).
#[derive(Clone, Debug, PartialEq)]
pub enum TasselLabel {
    Abelian(Vec<i64>),
    Spins(Vec<HalfInt>),
}

/// A base intertwiner: a unit invariant vector at the tassel base.
///
/// For SU(2) the vector lives in the tensor product of the curve spins and
/// is presented in a left-comb coupling-tree basis; `path` lists the
/// intermediate spins after coupling each further curve (the last entry is
/// always zero). Components are real in the Condon-Shortley convention.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantVector {
    pub path: Vec<HalfInt>,
    pub components: Vec<f64>,
}

impl InvariantVector {
    fn scalar() -> Self {
        InvariantVector { path: Vec::new(), components: vec![1.0] }
    }
}

/// Canonical pairing data at one endpoint vertex.
#[derive(Clone, Debug, PartialEq)]
pub enum EndpointPairing {
    /// Bounds one tassel: the incident label is trivial.
    Trivial { vertex: VertexId, slot: (usize, usize) },
    /// Bounds two tassels: the canonical normalized invariant element of
    /// V (x) V* pairing the two dual slots.
    Dual { vertex: VertexId, first: (usize, usize), second: (usize, usize) },
}

/// A gauge-invariant state on a web: labels, base intertwiners, and the
/// canonical endpoint pairings.
#[derive(Clone, Debug)]
pub struct SpinNetwork {
    pub web: Arc<Web>,
    pub labels: Vec<TasselLabel>,
    pub vectors: Vec<InvariantVector>,
    pub pairings: Vec<EndpointPairing>,
}

fn abelian_modulus(group: &Group) -> Option<Option<i64>> {
    match group {
        Group::Cyclic(n) => Some(Some(i64::from(*n))),
        Group::Circle => Some(None),
        _ => None,
    }
}

fn reduce(v: i64, modulus: Option<i64>) -> i64 {
    match modulus {
        Some(n) => v.rem_euclid(n),
        None => v,
    }
}

impl SpinNetwork {
    /// Canonical per-tassel label identity: node exponent sums for abelian
    /// labels (two exponent vectors agreeing on the attainable subgroup
    /// reduce identically), spins verbatim for SU(2).
    pub fn canonical_label(&self, tassel: usize, group: &Group) -> Vec<i64> {
        match &self.labels[tassel] {
            TasselLabel::Abelian(m) => {
                let modulus = abelian_modulus(group).expect("abelian labels");
                self.web.tassels[tassel]
                    .hierarchy
                    .supports()
                    .map(|s| reduce(s.iter().map(|&i| m[i]).sum(), modulus))
                    .collect()
            }
            TasselLabel::Spins(js) => js.iter().map(|j| i64::from(j.twice())).collect(),
        }
    }
}

/// Orthonormal basis of the base-invariant subspace for the given labels:
/// the scalar for abelian labels with vanishing total exponent, and all
/// zero-total-spin coupling paths for SU(2).
pub fn invariant_basis(
    label: &TasselLabel,
    group: &Group,
) -> Result<Vec<InvariantVector>, SpinError> {
    match (label, group) {
        (TasselLabel::Abelian(m), _) => {
            let modulus = abelian_modulus(group).ok_or_else(|| {
                SpinError::Unsupported(format!("abelian labels on group {group}"))
            })?;
            let total: i64 = m.iter().sum();
            if reduce(total, modulus) == 0 {
                Ok(vec![InvariantVector::scalar()])
            } else {
                Ok(vec![])
            }
        }
        (TasselLabel::Spins(js), Group::Su2 { j_max }) => {
            for j in js {
                if j.twice() > j_max.twice() {
                    return Err(SpinError::SpinLimit { j: *j, j_max: *j_max });
                }
            }
            Ok(zero_coupling_basis(js))
        }
        (TasselLabel::Spins(_), _) => {
            Err(SpinError::Unsupported(format!("spin labels on group {group}")))
        }
    }
}

/// All left-comb coupling paths with total spin zero, as orthonormal real
/// vectors in the tensor product of the spins (slot-major, m descending).
fn zero_coupling_basis(spins: &[HalfInt]) -> Vec<InvariantVector> {
    if spins.is_empty() {
        return vec![InvariantVector::scalar()];
    }
    if spins.len() == 1 {
        return if spins[0] == HalfInt::ZERO {
            vec![InvariantVector { path: vec![HalfInt::ZERO], components: vec![1.0] }]
        } else {
            vec![]
        };
    }
    // States carried forward: coupled total spin J with a (rows x (2J+1))
    // coefficient matrix over the slots consumed so far.
    struct Partial {
        path: Vec<HalfInt>,
        j: HalfInt,
        mat: Vec<f64>,
        rows: usize,
    }
    let d0 = spins[0].dim();
    let mut states = vec![Partial {
        path: Vec::new(),
        j: spins[0],
        mat: {
            let mut id = vec![0.0; d0 * d0];
            for i in 0..d0 {
                id[i * d0 + i] = 1.0;
            }
            id
        },
        rows: d0,
    }];
    for &next in &spins[1..] {
        let dnext = next.dim();
        let mut grown = Vec::new();
        for st in &states {
            let cols = st.j.dim();
            for block in clebsch_gordan(st.j, next) {
                let jc = block.j;
                let ncols = jc.dim();
                let nrows = st.rows * dnext;
                // new[(r, s), M'] = sum_{M, m} st[r, M] * CG[(M, m), M'].
                let mut mat = vec![0.0f64; nrows * ncols];
                for r in 0..st.rows {
                    for mcol in 0..cols {
                        let cur = st.mat[r * cols + mcol];
                        if cur == 0.0 {
                            continue;
                        }
                        for s in 0..dnext {
                            for mp in 0..ncols {
                                let cg = block.coeffs[(mcol * dnext + s, mp)];
                                if cg != 0.0 {
                                    mat[(r * dnext + s) * ncols + mp] += cur * cg;
                                }
                            }
                        }
                    }
                }
                let mut path = st.path.clone();
                path.push(jc);
                grown.push(Partial { path, j: jc, mat, rows: nrows });
            }
        }
        states = grown;
    }
    let mut out: Vec<InvariantVector> = states
        .into_iter()
        .filter(|st| st.j == HalfInt::ZERO)
        .map(|st| InvariantVector { path: st.path, components: st.mat })
        .collect();
    out.sort_by_key(|v| v.path.iter().map(|j| j.twice()).collect::<Vec<_>>());
    out
}

/// Builds and validates a spin network: labels per tassel (arity-checked),
/// optional intertwiner paths where the invariant space has dimension
/// above one, duality at shared endpoints, and triviality at single-tassel
/// endpoints. Pairings are the canonical normalized invariant elements.
pub fn build_spin_network(
    web: &Arc<Web>,
    labels: Vec<TasselLabel>,
    intertwiners: Vec<Option<Vec<HalfInt>>>,
    group: &Group,
) -> Result<SpinNetwork, SpinError> {
    if labels.len() != web.tassels.len() {
        return Err(SpinError::LabelArity {
            tassel: web.tassels.len(),
            curves: web.tassels.len(),
            got: labels.len(),
        });
    }
    if labels
        .windows(2)
        .any(|w| matches!(w[0], TasselLabel::Abelian(_)) != matches!(w[1], TasselLabel::Abelian(_)))
    {
        return Err(SpinError::Unsupported("mixed label backends".into()));
    }
    for (ti, (t, l)) in web.tassels.iter().zip(labels.iter()).enumerate() {
        let got = match l {
            TasselLabel::Abelian(m) => m.len(),
            TasselLabel::Spins(js) => js.len(),
        };
        if got != t.family.len() {
            return Err(SpinError::LabelArity { tassel: ti, curves: t.family.len(), got });
        }
        if matches!(l, TasselLabel::Spins(_)) && !t.hierarchy.all_singletons() {
            return Err(SpinError::Unsupported(
                "spin labels need star tassels (all-singleton types)".into(),
            ));
        }
    }

    // Base intertwiners.
    let mut vectors = Vec::with_capacity(labels.len());
    for (ti, label) in labels.iter().enumerate() {
        let basis = invariant_basis(label, group)?;
        if basis.is_empty() {
            return Err(SpinError::NoInvariantVector { tassel: ti });
        }
        let chosen = match intertwiners.get(ti).and_then(|p| p.as_ref()) {
            None => {
                if basis.len() > 1 {
                    return Err(SpinError::AmbiguousIntertwiner { tassel: ti, dim: basis.len() });
                }
                basis.into_iter().next().unwrap()
            }
            Some(path) => basis
                .into_iter()
                .find(|v| &v.path == path)
                .ok_or(SpinError::BadIntertwiner { tassel: ti })?,
        };
        vectors.push(chosen);
    }

    // Endpoint structure: duality at shared vertices, triviality at
    // single-tassel vertices.
    let modulus = abelian_modulus(group);
    let mut pairings = Vec::new();
    for (vertex, slots) in web.endpoints() {
        let vname = || web.complex.vertex_name(vertex).to_string();
        let tassels_here: Vec<usize> = {
            let mut ts: Vec<usize> = slots.iter().map(|s| s.0).collect();
            ts.dedup();
            ts
        };
        match &labels[0] {
            TasselLabel::Spins(_) => {
                if slots.len() > tassels_here.len() {
                    return Err(SpinError::Unsupported(format!(
                        "two curves of one tassel end at `{}`",
                        vname()
                    )));
                }
                let spin_of = |slot: (usize, usize)| -> HalfInt {
                    match &labels[slot.0] {
                        TasselLabel::Spins(js) => js[slot.1],
                        TasselLabel::Abelian(_) => unreachable!("mixed backends rejected"),
                    }
                };
                match slots.as_slice() {
                    [only] => {
                        if spin_of(*only) != HalfInt::ZERO {
                            return Err(SpinError::NontrivialSingleEndpoint { vertex: vname() });
                        }
                        pairings.push(EndpointPairing::Trivial { vertex, slot: *only });
                    }
                    [first, second] => {
                        // SU(2) irreps are self-dual: dual labels are equal.
                        if spin_of(*first) != spin_of(*second) {
                            return Err(SpinError::DualityMismatch { vertex: vname() });
                        }
                        pairings.push(EndpointPairing::Dual {
                            vertex,
                            first: *first,
                            second: *second,
                        });
                    }
                    _ => {
                        return Err(SpinError::Unsupported(format!(
                            "endpoint `{}` bounds more than two slots",
                            vname()
                        )))
                    }
                }
            }
            TasselLabel::Abelian(_) => {
                let modulus = modulus.ok_or_else(|| {
                    SpinError::Unsupported(format!("abelian labels on group {group}"))
                })?;
                // Endpoint charge per tassel: the sum over curves ending here.
                let mut charge: BTreeMap<usize, i64> = BTreeMap::new();
                for (ti, ci) in &slots {
                    let m = match &labels[*ti] {
                        TasselLabel::Abelian(m) => m[*ci],
                        TasselLabel::Spins(_) => unreachable!("mixed backends rejected"),
                    };
                    *charge.entry(*ti).or_insert(0) += m;
                }
                match tassels_here.as_slice() {
                    [only] => {
                        if reduce(charge[only], modulus) != 0 {
                            return Err(SpinError::NontrivialSingleEndpoint { vertex: vname() });
                        }
                        pairings.push(EndpointPairing::Trivial { vertex, slot: slots[0] });
                    }
                    [a, b] => {
                        if reduce(charge[a] + charge[b], modulus) != 0 {
                            return Err(SpinError::DualityMismatch { vertex: vname() });
                        }
                        pairings.push(EndpointPairing::Dual {
                            vertex,
                            first: slots[0],
                            second: *slots.last().unwrap(),
                        });
                    }
                    _ => unreachable!("webs bound vertices by at most two tassels"),
                }
            }
        }
    }

    Ok(SpinNetwork { web: Arc::clone(web), labels, vectors, pairings })
}

/// Evaluates the network at a holonomy tuple over the web's curves (web
/// order). The point must lie in the web's attainable set.
pub fn evaluate(
    sn: &SpinNetwork,
    point: &[Element],
    group: &Group,
) -> Result<Complex64, SpinError> {
    let web = &sn.web;
    if point.len() != web.curve_count() {
        return Err(SpinError::PointArity { expected: web.curve_count(), got: point.len() });
    }
    let offsets = web.tassel_offsets();
    match &sn.labels[0] {
        TasselLabel::Abelian(_) => {
            // Reduces to a product of character values.
            let mut acc = Complex64::new(1.0, 0.0);
            for (ti, label) in sn.labels.iter().enumerate() {
                let m = match label {
                    TasselLabel::Abelian(m) => m,
                    _ => unreachable!(),
                };
                for (ci, &exp) in m.iter().enumerate() {
                    let g = &point[offsets[ti] + ci];
                    acc *= char_value(group, &IrrepLabel::Exponent(exp), g)?;
                }
            }
            Ok(acc)
        }
        TasselLabel::Spins(_) => evaluate_su2(sn, point, group),
    }
}

fn evaluate_su2(
    sn: &SpinNetwork,
    point: &[Element],
    group: &Group,
) -> Result<Complex64, SpinError> {
    let web = &sn.web;
    let offsets = web.tassel_offsets();
    let spins_of = |ti: usize| -> &[HalfInt] {
        match &sn.labels[ti] {
            TasselLabel::Spins(js) => js,
            _ => unreachable!(),
        }
    };

    // Per tassel: contract the base vector with the Wigner matrices along
    // the row side, leaving a tensor over column indices.
    let mut contracted: Vec<Vec<Complex64>> = Vec::with_capacity(web.tassels.len());
    let mut prefactor = 1.0f64;
    for (ti, _t) in web.tassels.iter().enumerate() {
        let spins = spins_of(ti);
        let dims: Vec<usize> = spins.iter().map(|j| j.dim()).collect();
        let total: usize = dims.iter().product();
        prefactor *= (total as f64).sqrt();
        let mut tensor: Vec<Complex64> = sn.vectors[ti]
            .components
            .iter()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        debug_assert_eq!(tensor.len(), total);
        let mut stride_after: Vec<usize> = vec![1; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            stride_after[i] = stride_after[i + 1] * dims[i + 1];
        }
        // Apply D^T on each slot: new[.. c ..] = sum_r D[r, c] old[.. r ..].
        for (slot, &j) in spins.iter().enumerate() {
            let q = match &point[offsets[ti] + slot] {
                Element::Quat(q) => q,
                _ => {
                    return Err(SpinError::Unsupported(
                        "spin networks need SU2 holonomies".into(),
                    ))
                }
            };
            if let Group::Su2 { j_max } = group {
                if j.twice() > j_max.twice() {
                    return Err(SpinError::SpinLimit { j, j_max: *j_max });
                }
            }
            let d = wigner_d(j, q);
            let dim = dims[slot];
            let stride = stride_after[slot];
            let outer = total / (dim * stride);
            let mut next = vec![Complex64::new(0.0, 0.0); total];
            for o in 0..outer {
                for s in 0..stride {
                    let base = o * dim * stride + s;
                    for c in 0..dim {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for r in 0..dim {
                            acc += d[(r, c)] * tensor[base + r * stride];
                        }
                        next[base + c * stride] = acc;
                    }
                }
            }
            tensor = next;
        }
        contracted.push(tensor);
    }

    // Contract the endpoint pairings over the column indices. Each dual
    // pairing is the normalized invariant element with components
    // (-1)^(k - m) delta_{m, -m'} / sqrt(2k + 1), slots ordered
    // (first, second) by (tassel, curve).
    let dims_of = |slot: (usize, usize)| spins_of(slot.0)[slot.1].dim();
    let duals: Vec<(&EndpointPairing, usize)> = sn
        .pairings
        .iter()
        .filter_map(|p| match p {
            EndpointPairing::Dual { first, .. } => Some((p, dims_of(*first))),
            EndpointPairing::Trivial { .. } => None,
        })
        .collect();

    let n_tassels = web.tassels.len();
    let mut cols: Vec<Vec<usize>> =
        (0..n_tassels).map(|ti| vec![0usize; spins_of(ti).len()]).collect();
    let mut choice = vec![0usize; duals.len()];
    let mut acc = Complex64::new(0.0, 0.0);
    loop {
        let mut coeff = 1.0f64;
        for (di, (p, dim)) in duals.iter().enumerate() {
            if let EndpointPairing::Dual { first, second, .. } = p {
                let idx_m = choice[di];
                // m descends from k; the partner slot takes -m, and
                // (-1)^(k - m) alternates with the row index.
                cols[first.0][first.1] = idx_m;
                cols[second.0][second.1] = dim - 1 - idx_m;
                let sign = if idx_m % 2 == 0 { 1.0 } else { -1.0 };
                coeff *= sign / (*dim as f64).sqrt();
            }
        }
        let mut term = Complex64::new(coeff, 0.0);
        for (ti, tensor) in contracted.iter().enumerate() {
            let dims: Vec<usize> = spins_of(ti).iter().map(|j| j.dim()).collect();
            let mut flat = 0usize;
            for (slot, &c) in cols[ti].iter().enumerate() {
                flat = flat * dims[slot] + c;
            }
            term *= tensor[flat];
        }
        acc += term;

        let mut d = 0;
        loop {
            if d == duals.len() {
                return Ok(acc * prefactor);
            }
            choice[d] += 1;
            if choice[d] < duals[d].1 {
                break;
            }
            choice[d] = 0;
            d += 1;
        }
    }
}

/// Closed-form inner product: zero when any tassel label differs as a
/// character of the attainable subgroup, else the product of intertwiner
/// and pairing inner products.
pub fn inner_product(
    a: &SpinNetwork,
    b: &SpinNetwork,
    group: &Group,
) -> Result<Complex64, SpinError> {
    if a.web != b.web {
        return Err(SpinError::WebMismatch);
    }
    for ti in 0..a.web.tassels.len() {
        if a.canonical_label(ti, group) != b.canonical_label(ti, group) {
            return Ok(Complex64::new(0.0, 0.0));
        }
    }
    // Same labels: the canonical pairings coincide and have unit norm, so
    // only the intertwiners contribute.
    let mut acc = 1.0f64;
    for (va, vb) in a.vectors.iter().zip(b.vectors.iter()) {
        debug_assert_eq!(va.components.len(), vb.components.len());
        acc *= va
            .components
            .iter()
            .zip(vb.components.iter())
            .map(|(x, y)| x * y)
            .sum::<f64>();
    }
    Ok(Complex64::new(acc, 0.0))
}

/// Enumerates every spin network on an abelian backend with exponents in
/// range (all residues for Z_n, |m| <= bound for the circle), deduplicated
/// as characters of the attainable subgroups; the result is orthonormal.
pub fn orthonormal_family(
    web: &Arc<Web>,
    group: &Group,
    bound: i64,
) -> Result<Vec<SpinNetwork>, SpinError> {
    let modulus = abelian_modulus(group).ok_or_else(|| {
        SpinError::Unsupported(format!("orthonormal families need an abelian group, got {group}"))
    })?;
    let range: Vec<i64> = match modulus {
        Some(n) => (0..n).collect(),
        None => (-bound..=bound).collect(),
    };

    // Per tassel: candidate exponent vectors with trivial diagonal total,
    // deduplicated by their action on the attainable subgroup.
    let mut per_tassel: Vec<Vec<Vec<i64>>> = Vec::with_capacity(web.tassels.len());
    for t in &web.tassels {
        let n = t.family.len();
        let mut seen: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
        let mut idx = vec![0usize; n];
        'enumerate: loop {
            let m: Vec<i64> = idx.iter().map(|&i| range[i]).collect();
            let total: i64 = m.iter().sum();
            if reduce(total, modulus) == 0 {
                let canon: Vec<i64> = t
                    .hierarchy
                    .supports()
                    .map(|s| reduce(s.iter().map(|&i| m[i]).sum(), modulus))
                    .collect();
                seen.entry(canon).or_insert(m);
            }
            let mut d = 0;
            loop {
                if d == n {
                    break 'enumerate;
                }
                idx[d] += 1;
                if idx[d] < range.len() {
                    break;
                }
                idx[d] = 0;
                d += 1;
            }
        }
        per_tassel.push(seen.into_values().collect());
    }

    // Cross product over tassels, filtered by the endpoint rules.
    let mut out = Vec::new();
    let mut idx = vec![0usize; per_tassel.len()];
    loop {
        let labels: Vec<TasselLabel> = idx
            .iter()
            .enumerate()
            .map(|(ti, &i)| TasselLabel::Abelian(per_tassel[ti][i].clone()))
            .collect();
        match build_spin_network(web, labels, vec![None; per_tassel.len()], group) {
            Ok(sn) => out.push(sn),
            Err(SpinError::NontrivialSingleEndpoint { .. } | SpinError::DualityMismatch { .. }) => {
            }
            Err(e) => return Err(e),
        }
        let mut d = 0;
        loop {
            if d == per_tassel.len() {
                return Ok(out);
            }
            idx[d] += 1;
            if idx[d] < per_tassel[d].len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Quaternion;
    use rand::SeedableRng;

    #[test]
    fn invariant_basis_dimensions() {
        let g = Group::su2();
        let half = HalfInt::from_twice(1);
        let one = HalfInt::from_int(1);
        // (1/2, 1/2): the singlet alone.
        let b = invariant_basis(&TasselLabel::Spins(vec![half, half]), &g).unwrap();
        assert_eq!(b.len(), 1);
        let s = &b[0].components;
        let r = 1.0 / 2.0f64.sqrt();
        assert!((s[1] - r).abs() < 1e-12 && (s[2] + r).abs() < 1e-12);
        // (1/2, 1/2, 1/2): none (half-integer total).
        let b = invariant_basis(&TasselLabel::Spins(vec![half, half, half]), &g).unwrap();
        assert!(b.is_empty());
        // (1, 1, 1): one vector, and it passes the invariance check below.
        let b = invariant_basis(&TasselLabel::Spins(vec![one, one, one]), &g).unwrap();
        assert_eq!(b.len(), 1);
        // (1/2, 1/2, 1): one vector via the intermediate spin 1.
        let b = invariant_basis(&TasselLabel::Spins(vec![half, half, one]), &g).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].path, vec![one, HalfInt::ZERO]);
    }

    #[test]
    fn invariant_vectors_are_unit_and_diagonal_invariant() {
        let g = Group::su2();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let half = HalfInt::from_twice(1);
        let one = HalfInt::from_int(1);
        for spins in [vec![half, half], vec![one, one, one], vec![half, half, one]] {
            let basis = invariant_basis(&TasselLabel::Spins(spins.clone()), &g).unwrap();
            for v in &basis {
                let norm: f64 = v.components.iter().map(|x| x * x).sum();
                assert!((norm - 1.0).abs() < 1e-12);
                for _ in 0..10 {
                    let q = match g.haar_sample(&mut rng) {
                        Element::Quat(q) => q,
                        _ => unreachable!(),
                    };
                    let rotated = apply_diagonal(&spins, &v.components, &q);
                    for (x, y) in v.components.iter().zip(rotated.iter()) {
                        assert!((Complex64::new(*x, 0.0) - y).norm() < 1e-10);
                    }
                }
            }
        }
    }

    fn apply_diagonal(spins: &[HalfInt], comps: &[f64], q: &Quaternion) -> Vec<Complex64> {
        let dims: Vec<usize> = spins.iter().map(|j| j.dim()).collect();
        let total: usize = dims.iter().product();
        let mut cur: Vec<Complex64> = comps.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let mut stride_after = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            stride_after[i] = stride_after[i + 1] * dims[i + 1];
        }
        for (slot, &j) in spins.iter().enumerate() {
            let d = wigner_d(j, q);
            let dim = dims[slot];
            let stride = stride_after[slot];
            let outer = total / (dim * stride);
            let mut next = vec![Complex64::new(0.0, 0.0); total];
            for o in 0..outer {
                for s in 0..stride {
                    let base = o * dim * stride + s;
                    for r in 0..dim {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for c in 0..dim {
                            acc += d[(r, c)] * cur[base + c * stride];
                        }
                        next[base + r * stride] = acc;
                    }
                }
            }
            cur = next;
        }
        cur
    }
}
