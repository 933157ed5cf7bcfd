//! Compact-group backends: elements, multiplication, Haar sampling and
//! subgroup enumeration over finite tables, plus SU(2) representation data.

mod irrep;
mod su2;
mod table;

pub use irrep::{char_value, characters, Irrep, IrrepCatalog, IrrepLabel};
pub use su2::{clebsch_gordan, wigner_d, CgBlock, HalfInt, Quaternion};
pub use table::FiniteTable;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("element does not belong to this group backend")]
    SpecMismatch,
    #[error("operation unsupported for group {0}")]
    Unsupported(String),
    #[error("irrep limit exceeded: j = {j} > j_max = {j_max}")]
    SpinLimit { j: HalfInt, j_max: HalfInt },
    #[error("enumeration of {needed} states exceeds cap {cap}")]
    ResourceExceeded { needed: u128, cap: u64 },
    #[error("unknown built-in table `{0}`")]
    UnknownTable(String),
    #[error("multiplication table is not a group: {0}")]
    BadTable(String),
    #[error("unknown irrep `{0}` for this group")]
    UnknownIrrep(String),
}

/// A group element. The owning [`Group`] fixes the interpretation.
#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    /// Index into a finite element list, or a residue mod n for cyclic groups.
    Finite(u32),
    /// Angle in `[0, 2π)` on the circle group.
    Angle(f64),
    /// Unit quaternion for SU(2).
    Quat(Quaternion),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Finite(i) => write!(f, "{i}"),
            Element::Angle(t) => write!(f, "{t:.12}"),
            Element::Quat(q) => write!(f, "({:.9},{:.9},{:.9},{:.9})", q.w, q.x, q.y, q.z),
        }
    }
}

/// One of the supported compact-group backends.
#[derive(Clone, Debug, PartialEq)]
pub enum Group {
    /// The cyclic group Z_n under addition mod n.
    Cyclic(u32),
    /// The circle group U(1), elements as angles.
    Circle,
    /// SU(2) as unit quaternions; `j_max` bounds representation data.
    Su2 { j_max: HalfInt },
    /// An explicit finite multiplication table.
    Table(Arc<FiniteTable>),
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Cyclic(n) => write!(f, "Z{n}"),
            Group::Circle => write!(f, "U1"),
            Group::Su2 { j_max } => write!(f, "SU2(j_max={j_max})"),
            Group::Table(t) => write!(f, "{}", t.name()),
        }
    }
}

const TWO_PI: f64 = std::f64::consts::TAU;

impl Group {
    pub fn cyclic(n: u32) -> Self {
        assert!(n > 0, "cyclic group order must be positive");
        Group::Cyclic(n)
    }

    pub fn su2() -> Self {
        Group::Su2 { j_max: HalfInt::from_twice(8) }
    }

    pub fn table(t: FiniteTable) -> Self {
        Group::Table(Arc::new(t))
    }

    /// Number of elements for finite backends, `None` for continuous ones.
    pub fn order(&self) -> Option<u64> {
        match self {
            Group::Cyclic(n) => Some(u64::from(*n)),
            Group::Table(t) => Some(t.order() as u64),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// Abelian backends support character (Fourier) integration.
    pub fn is_abelian(&self) -> bool {
        match self {
            Group::Cyclic(_) | Group::Circle => true,
            Group::Su2 { .. } => false,
            Group::Table(t) => t.is_abelian(),
        }
    }

    pub fn identity(&self) -> Element {
        match self {
            Group::Cyclic(_) => Element::Finite(0),
            Group::Circle => Element::Angle(0.0),
            Group::Su2 { .. } => Element::Quat(Quaternion::identity()),
            Group::Table(t) => Element::Finite(t.identity()),
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element, GroupError> {
        match (self, a, b) {
            (Group::Cyclic(n), Element::Finite(x), Element::Finite(y)) => {
                if x >= n || y >= n {
                    return Err(GroupError::SpecMismatch);
                }
                Ok(Element::Finite((x + y) % n))
            }
            (Group::Circle, Element::Angle(s), Element::Angle(t)) => {
                Ok(Element::Angle((s + t).rem_euclid(TWO_PI)))
            }
            (Group::Su2 { .. }, Element::Quat(p), Element::Quat(q)) => {
                Ok(Element::Quat(p.mul(q).normalized()))
            }
            (Group::Table(t), Element::Finite(x), Element::Finite(y)) => {
                if *x as usize >= t.order() || *y as usize >= t.order() {
                    return Err(GroupError::SpecMismatch);
                }
                Ok(Element::Finite(t.mul(*x, *y)))
            }
            _ => Err(GroupError::SpecMismatch),
        }
    }

    pub fn inv(&self, a: &Element) -> Result<Element, GroupError> {
        match (self, a) {
            (Group::Cyclic(n), Element::Finite(x)) => {
                if x >= n {
                    return Err(GroupError::SpecMismatch);
                }
                Ok(Element::Finite(if *x == 0 { 0 } else { n - x }))
            }
            (Group::Circle, Element::Angle(t)) => Ok(Element::Angle((-t).rem_euclid(TWO_PI))),
            (Group::Su2 { .. }, Element::Quat(q)) => Ok(Element::Quat(q.conjugate())),
            (Group::Table(t), Element::Finite(x)) => {
                if *x as usize >= t.order() {
                    return Err(GroupError::SpecMismatch);
                }
                Ok(Element::Finite(t.inv(*x)))
            }
            _ => Err(GroupError::SpecMismatch),
        }
    }

    /// Index-level product for finite backends (hot path for enumeration).
    pub fn mul_idx(&self, a: u32, b: u32) -> u32 {
        match self {
            Group::Cyclic(n) => (a + b) % n,
            Group::Table(t) => t.mul(a, b),
            _ => panic!("mul_idx requires a finite backend"),
        }
    }

    pub fn inv_idx(&self, a: u32) -> u32 {
        match self {
            Group::Cyclic(n) => {
                if a == 0 {
                    0
                } else {
                    n - a
                }
            }
            Group::Table(t) => t.inv(a),
            _ => panic!("inv_idx requires a finite backend"),
        }
    }

    pub fn identity_idx(&self) -> u32 {
        match self {
            Group::Cyclic(_) => 0,
            Group::Table(t) => t.identity(),
            _ => panic!("identity_idx requires a finite backend"),
        }
    }

    pub fn element(&self, idx: u32) -> Element {
        debug_assert!(self.order().map_or(false, |n| u64::from(idx) < n));
        Element::Finite(idx)
    }

    pub fn element_name(&self, idx: u32) -> String {
        match self {
            Group::Table(t) => t.element_name(idx).to_string(),
            _ => idx.to_string(),
        }
    }

    /// One Haar-distributed draw from an explicitly seeded stream.
    pub fn haar_sample<R: Rng>(&self, rng: &mut R) -> Element {
        match self {
            Group::Cyclic(n) => Element::Finite(rng.random_range(0..*n)),
            Group::Circle => Element::Angle(rng.random_range(0.0..TWO_PI)),
            Group::Su2 { .. } => {
                // Four standard normals normalized to the 3-sphere.
                loop {
                    let w: f64 = StandardNormal.sample(rng);
                    let x: f64 = StandardNormal.sample(rng);
                    let y: f64 = StandardNormal.sample(rng);
                    let z: f64 = StandardNormal.sample(rng);
                    let n2 = w * w + x * x + y * y + z * z;
                    if n2 > 1e-12 {
                        let n = n2.sqrt();
                        return Element::Quat(Quaternion::new(w / n, x / n, y / n, z / n));
                    }
                }
            }
            Group::Table(t) => Element::Finite(rng.random_range(0..t.order() as u32)),
        }
    }

    pub fn haar_sample_idx<R: Rng>(&self, rng: &mut R) -> u32 {
        match self {
            Group::Cyclic(n) => rng.random_range(0..*n),
            Group::Table(t) => rng.random_range(0..t.order() as u32),
            _ => panic!("haar_sample_idx requires a finite backend"),
        }
    }

    /// Approximate equality; exact on finite backends.
    pub fn approx_eq(&self, a: &Element, b: &Element, tol: f64) -> bool {
        match (a, b) {
            (Element::Finite(x), Element::Finite(y)) => x == y,
            (Element::Angle(s), Element::Angle(t)) => {
                let d = (s - t).rem_euclid(TWO_PI);
                d < tol || TWO_PI - d < tol
            }
            (Element::Quat(p), Element::Quat(q)) => p.dist(q) < tol,
            _ => false,
        }
    }
}

/// Breadth-first closure of a generating set of tuples inside `G^n`.
///
/// Returns the generated subgroup as a sorted list of index tuples. Fails
/// when `|G|^n` exceeds `cap`.
pub fn enumerate_subgroup(
    group: &Group,
    arity: usize,
    generators: &[Vec<u32>],
    cap: u64,
) -> Result<Vec<Vec<u32>>, GroupError> {
    let order = group
        .order()
        .ok_or_else(|| GroupError::Unsupported(format!("{group} is not finite")))?;
    let mut space: u128 = 1;
    for _ in 0..arity {
        space = space.saturating_mul(u128::from(order));
        if space > u128::from(cap) {
            return Err(GroupError::ResourceExceeded { needed: space, cap });
        }
    }
    for g in generators {
        assert_eq!(g.len(), arity, "generator arity mismatch");
    }

    let id: Vec<u32> = vec![group.identity_idx(); arity];
    let mut gens: Vec<Vec<u32>> = Vec::with_capacity(generators.len() * 2);
    for g in generators {
        let ginv: Vec<u32> = g.iter().map(|&x| group.inv_idx(x)).collect();
        gens.push(g.clone());
        gens.push(ginv);
    }

    let mut seen = std::collections::HashSet::new();
    seen.insert(id.clone());
    let mut queue = std::collections::VecDeque::new();
    queue.push_back(id);
    while let Some(t) = queue.pop_front() {
        for g in &gens {
            let next: Vec<u32> = t
                .iter()
                .zip(g.iter())
                .map(|(&a, &b)| group.mul_idx(a, b))
                .collect();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<Vec<u32>> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}
