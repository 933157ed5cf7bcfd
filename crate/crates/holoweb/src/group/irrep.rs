//! Irreducible-representation labels and character evaluation.

use std::fmt;

use num_complex::Complex64;

use super::{Element, Group, GroupError, HalfInt};

/// Names an irreducible unitary representation of a supported backend.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum IrrepLabel {
    /// Character exponent for Z_n or U(1).
    Exponent(i64),
    /// Spin for SU(2).
    Spin(HalfInt),
    /// Stored irrep of a built-in finite table.
    Named(String),
}

impl fmt::Display for IrrepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrepLabel::Exponent(m) => write!(f, "chi[{m}]"),
            IrrepLabel::Spin(j) => write!(f, "D[{j}]"),
            IrrepLabel::Named(n) => write!(f, "{n}"),
        }
    }
}

/// One catalog entry: a label, its dimension, and its character.
#[derive(Clone, Debug)]
pub struct Irrep {
    pub label: IrrepLabel,
    pub dim: usize,
}

/// The available irreps of a backend, finite or truncated.
#[derive(Clone, Debug)]
pub struct IrrepCatalog {
    pub irreps: Vec<Irrep>,
    /// True when the list is complete rather than cut off at a bound.
    pub complete: bool,
}

/// Irrep catalog with characters.
///
/// Cyclic groups and the circle use exponential characters; built-in finite
/// tables use their stored data; SU(2) lists spins up to `j_max`. General
/// finite tables without stored data are unsupported.
pub fn characters(group: &Group) -> Result<IrrepCatalog, GroupError> {
    match group {
        Group::Cyclic(n) => Ok(IrrepCatalog {
            irreps: (0..i64::from(*n))
                .map(|m| Irrep { label: IrrepLabel::Exponent(m), dim: 1 })
                .collect(),
            complete: true,
        }),
        Group::Circle => Ok(IrrepCatalog {
            // The full catalog is all integers; report a window for display.
            irreps: (-4..=4)
                .map(|m| Irrep { label: IrrepLabel::Exponent(m), dim: 1 })
                .collect(),
            complete: false,
        }),
        Group::Su2 { j_max } => Ok(IrrepCatalog {
            irreps: (0..=j_max.twice())
                .map(|t| {
                    let j = HalfInt::from_twice(t);
                    Irrep { label: IrrepLabel::Spin(j), dim: j.dim() }
                })
                .collect(),
            complete: false,
        }),
        Group::Table(t) => {
            if t.irreps().is_empty() {
                return Err(GroupError::Unsupported(format!(
                    "no stored character data for table {}",
                    t.name()
                )));
            }
            Ok(IrrepCatalog {
                irreps: t
                    .irreps()
                    .iter()
                    .map(|i| Irrep { label: IrrepLabel::Named(i.name.clone()), dim: i.dim })
                    .collect(),
                complete: true,
            })
        }
    }
}

/// Dimension of a labeled irrep.
pub fn irrep_dim(group: &Group, label: &IrrepLabel) -> Result<usize, GroupError> {
    match (group, label) {
        (Group::Cyclic(_) | Group::Circle, IrrepLabel::Exponent(_)) => Ok(1),
        (Group::Su2 { j_max }, IrrepLabel::Spin(j)) => {
            if j.twice() > j_max.twice() || j.twice() < 0 {
                Err(GroupError::SpinLimit { j: *j, j_max: *j_max })
            } else {
                Ok(j.dim())
            }
        }
        (Group::Table(t), IrrepLabel::Named(name)) => t
            .irreps()
            .iter()
            .find(|i| &i.name == name)
            .map(|i| i.dim)
            .ok_or_else(|| GroupError::UnknownIrrep(name.clone())),
        _ => Err(GroupError::Unsupported(format!(
            "irrep {label} does not belong to group {group}"
        ))),
    }
}

/// Character value of `label` at `g`.
pub fn char_value(group: &Group, label: &IrrepLabel, g: &Element) -> Result<Complex64, GroupError> {
    match (group, label, g) {
        (Group::Cyclic(n), IrrepLabel::Exponent(m), Element::Finite(x)) => {
            if x >= n {
                return Err(GroupError::SpecMismatch);
            }
            let phase = std::f64::consts::TAU * (*m as f64) * f64::from(*x) / f64::from(*n);
            Ok(Complex64::from_polar(1.0, phase))
        }
        (Group::Circle, IrrepLabel::Exponent(m), Element::Angle(t)) => {
            Ok(Complex64::from_polar(1.0, (*m as f64) * t))
        }
        (Group::Su2 { j_max }, IrrepLabel::Spin(j), Element::Quat(q)) => {
            if j.twice() > j_max.twice() || j.twice() < 0 {
                return Err(GroupError::SpinLimit { j: *j, j_max: *j_max });
            }
            Ok(Complex64::new(q.character(*j), 0.0))
        }
        (Group::Table(t), IrrepLabel::Named(name), Element::Finite(x)) => {
            if *x as usize >= t.order() {
                return Err(GroupError::SpecMismatch);
            }
            let irrep = t
                .irreps()
                .iter()
                .find(|i| &i.name == name)
                .ok_or_else(|| GroupError::UnknownIrrep(name.clone()))?;
            Ok(irrep.chi[*x as usize])
        }
        _ => Err(GroupError::Unsupported(format!(
            "character {label} at {g} in group {group}"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteTable;

    #[test]
    fn cyclic_characters_orthonormal_exact_average() {
        let g = Group::cyclic(3);
        let cat = characters(&g).unwrap();
        assert_eq!(cat.irreps.len(), 3);
        for a in &cat.irreps {
            for b in &cat.irreps {
                let mut acc = Complex64::new(0.0, 0.0);
                for x in 0..3 {
                    let el = Element::Finite(x);
                    acc += char_value(&g, &a.label, &el).unwrap().conj()
                        * char_value(&g, &b.label, &el).unwrap();
                }
                acc /= 3.0;
                let expect = if a.label == b.label { 1.0 } else { 0.0 };
                assert!((acc - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn circle_character_orthogonality_by_quadrature() {
        let g = Group::Circle;
        // Uniform grid quadrature is exact on trigonometric polynomials.
        let n = 64;
        for (a, b) in [(1i64, 1i64), (1, 2), (-2, 2), (0, 0), (3, -3)] {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                let t = std::f64::consts::TAU * (k as f64) / (n as f64);
                let el = Element::Angle(t);
                acc += char_value(&g, &IrrepLabel::Exponent(a), &el).unwrap().conj()
                    * char_value(&g, &IrrepLabel::Exponent(b), &el).unwrap();
            }
            acc /= n as f64;
            let expect = if a == b { 1.0 } else { 0.0 };
            assert!((acc - expect).norm() < 1e-12);
        }
    }

    #[test]
    fn s3_sign_character_on_transposition() {
        let table = FiniteTable::s3();
        let s = table.element_index("s").unwrap();
        let g = Group::table(table);
        let v = char_value(&g, &IrrepLabel::Named("sign".into()), &Element::Finite(s)).unwrap();
        assert_eq!(v, Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn nontrivial_cyclic_character_sums_to_zero() {
        let g = Group::cyclic(3);
        let sum: Complex64 = (0..3)
            .map(|x| char_value(&g, &IrrepLabel::Exponent(1), &Element::Finite(x)).unwrap())
            .sum();
        assert!(sum.norm() < 1e-12);
    }

    #[test]
    fn spin_limit_enforced() {
        let g = Group::Su2 { j_max: HalfInt::from_int(1) };
        let q = Element::Quat(crate::group::Quaternion::identity());
        assert!(char_value(&g, &IrrepLabel::Spin(HalfInt::from_int(2)), &q).is_err());
    }
}
