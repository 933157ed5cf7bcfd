//! Kernel expression trees for cylinder functions. One representation
//! serves the exact, Fourier, and Monte-Carlo integration paths.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::complex::CurveFamily;
use crate::group::{char_value, wigner_d, Element, Group, GroupError, HalfInt, IrrepLabel};

use super::MeasureError;

/// A bounded expression in the holonomies of a curve family: characters,
/// Wigner-D matrix entries, constants, products, sums, and conjugation.
#[derive(Clone, Debug, PartialEq)]
pub enum Kernel {
    Const(Complex64),
    /// Character of the holonomy of one family curve.
    Char { label: IrrepLabel, curve: usize },
    /// SU(2) matrix entry `D^j[row, col]` of one curve's holonomy,
    /// zero-indexed from the highest weight.
    Entry { j: HalfInt, row: usize, col: usize, curve: usize },
    Conj(Box<Kernel>),
    Mul(Vec<Kernel>),
    Add(Vec<Kernel>),
}

impl Kernel {
    pub fn constant(re: f64) -> Self {
        Kernel::Const(Complex64::new(re, 0.0))
    }

    /// Highest curve index referenced, if any.
    pub fn max_curve(&self) -> Option<usize> {
        match self {
            Kernel::Const(_) => None,
            Kernel::Char { curve, .. } | Kernel::Entry { curve, .. } => Some(*curve),
            Kernel::Conj(k) => k.max_curve(),
            Kernel::Mul(ks) | Kernel::Add(ks) => ks.iter().filter_map(|k| k.max_curve()).max(),
        }
    }

    pub fn eval(&self, group: &Group, tuple: &[Element]) -> Result<Complex64, MeasureError> {
        match self {
            Kernel::Const(c) => Ok(*c),
            Kernel::Char { label, curve } => {
                let g = tuple.get(*curve).ok_or(MeasureError::Arity {
                    expected: *curve + 1,
                    got: tuple.len(),
                })?;
                Ok(char_value(group, label, g)?)
            }
            Kernel::Entry { j, row, col, curve } => {
                let g = tuple.get(*curve).ok_or(MeasureError::Arity {
                    expected: *curve + 1,
                    got: tuple.len(),
                })?;
                match (group, g) {
                    (Group::Su2 { j_max }, Element::Quat(q)) => {
                        if j.twice() > j_max.twice() {
                            return Err(GroupError::SpinLimit { j: *j, j_max: *j_max }.into());
                        }
                        let d = wigner_d(*j, q);
                        if *row >= j.dim() || *col >= j.dim() {
                            return Err(MeasureError::Kernel(format!(
                                "entry ({row},{col}) out of range for spin {j}"
                            )));
                        }
                        Ok(d[(*row, *col)])
                    }
                    _ => Err(MeasureError::Unsupported {
                        group: group.to_string(),
                        reason: "matrix entries need the SU2 backend".into(),
                    }),
                }
            }
            Kernel::Conj(k) => Ok(k.eval(group, tuple)?.conj()),
            Kernel::Mul(ks) => {
                let mut acc = Complex64::new(1.0, 0.0);
                for k in ks {
                    acc *= k.eval(group, tuple)?;
                }
                Ok(acc)
            }
            Kernel::Add(ks) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in ks {
                    acc += k.eval(group, tuple)?;
                }
                Ok(acc)
            }
        }
    }

    /// Expands the kernel into character monomials with one exponent per
    /// family curve; only abelian character kernels qualify.
    pub fn monomials(&self, arity: usize) -> Result<Vec<Monomial>, MeasureError> {
        let raw = self.expand(arity)?;
        // Combine like terms.
        let mut combined: BTreeMap<Vec<i64>, Complex64> = BTreeMap::new();
        for m in raw {
            *combined.entry(m.exps).or_insert(Complex64::new(0.0, 0.0)) += m.coeff;
        }
        Ok(combined
            .into_iter()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(exps, coeff)| Monomial { coeff, exps })
            .collect())
    }

    fn expand(&self, arity: usize) -> Result<Vec<Monomial>, MeasureError> {
        match self {
            Kernel::Const(c) => Ok(vec![Monomial { coeff: *c, exps: vec![0; arity] }]),
            Kernel::Char { label, curve } => match label {
                IrrepLabel::Exponent(m) => {
                    let mut exps = vec![0i64; arity];
                    exps[*curve] = *m;
                    Ok(vec![Monomial { coeff: Complex64::new(1.0, 0.0), exps }])
                }
                _ => Err(MeasureError::Kernel(format!(
                    "character {label} is not an abelian exponent"
                ))),
            },
            Kernel::Entry { .. } => Err(MeasureError::Kernel(
                "matrix entries have no abelian monomial expansion".into(),
            )),
            Kernel::Conj(k) => Ok(k
                .expand(arity)?
                .into_iter()
                .map(|m| Monomial {
                    coeff: m.coeff.conj(),
                    exps: m.exps.iter().map(|e| -e).collect(),
                })
                .collect()),
            Kernel::Mul(ks) => {
                let mut acc = vec![Monomial {
                    coeff: Complex64::new(1.0, 0.0),
                    exps: vec![0; arity],
                }];
                for k in ks {
                    let rhs = k.expand(arity)?;
                    let mut next = Vec::with_capacity(acc.len() * rhs.len());
                    for a in &acc {
                        for b in &rhs {
                            next.push(Monomial {
                                coeff: a.coeff * b.coeff,
                                exps: a
                                    .exps
                                    .iter()
                                    .zip(b.exps.iter())
                                    .map(|(x, y)| x + y)
                                    .collect(),
                            });
                        }
                    }
                    acc = next;
                }
                Ok(acc)
            }
            Kernel::Add(ks) => {
                let mut acc = Vec::new();
                for k in ks {
                    acc.extend(k.expand(arity)?);
                }
                Ok(acc)
            }
        }
    }
}

/// One character monomial: coeff · Π_i χ_{exps[i]}(g_i).
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coeff: Complex64,
    pub exps: Vec<i64>,
}

/// A curve family together with a kernel of matching arity.
#[derive(Clone, Debug)]
pub struct CylinderFunction {
    pub family: CurveFamily,
    pub kernel: Kernel,
}

impl CylinderFunction {
    pub fn new(family: CurveFamily, kernel: Kernel) -> Result<Self, MeasureError> {
        if let Some(max) = kernel.max_curve() {
            if max >= family.len() {
                return Err(MeasureError::Arity { expected: max + 1, got: family.len() });
            }
        }
        Ok(CylinderFunction { family, kernel })
    }
}
