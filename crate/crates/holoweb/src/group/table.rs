//! Finite groups given by explicit multiplication tables, with built-in
//! tables (Z_n, S3, Q8) carrying stored character data.

use num_complex::Complex64;

use super::GroupError;

/// Character data for one irreducible representation of a finite table.
#[derive(Clone, Debug, PartialEq)]
pub struct TableIrrep {
    pub name: String,
    pub dim: usize,
    /// Character value per element, in element order.
    pub chi: Vec<Complex64>,
}

/// A finite group as an element list plus a multiplication table.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteTable {
    name: String,
    element_names: Vec<String>,
    /// Row-major products: `table[a * n + b] = a * b`.
    table: Vec<u32>,
    inverse: Vec<u32>,
    identity: u32,
    abelian: bool,
    irreps: Vec<TableIrrep>,
}

impl FiniteTable {
    /// Validates the group axioms and derives identity and inverses.
    ///
    /// Associativity is checked exhaustively up to order 24 and on sampled
    /// triples beyond that.
    pub fn new(
        name: impl Into<String>,
        element_names: Vec<String>,
        table: Vec<u32>,
    ) -> Result<Self, GroupError> {
        let n = element_names.len();
        if n == 0 {
            return Err(GroupError::BadTable("empty element list".into()));
        }
        if table.len() != n * n {
            return Err(GroupError::BadTable(format!(
                "table has {} entries, expected {}",
                table.len(),
                n * n
            )));
        }
        if table.iter().any(|&x| x as usize >= n) {
            return Err(GroupError::BadTable("product out of range".into()));
        }
        let mul = |a: usize, b: usize| table[a * n + b] as usize;

        let mut identity = None;
        for e in 0..n {
            if (0..n).all(|g| mul(e, g) == g && mul(g, e) == g) {
                identity = Some(e);
                break;
            }
        }
        let identity = identity
            .ok_or_else(|| GroupError::BadTable("no two-sided identity".into()))? as u32;

        let mut inverse = vec![u32::MAX; n];
        for g in 0..n {
            let inv = (0..n).find(|&h| mul(g, h) == identity as usize && mul(h, g) == identity as usize);
            match inv {
                Some(h) => inverse[g] = h as u32,
                None => {
                    return Err(GroupError::BadTable(format!(
                        "element {g} has no two-sided inverse"
                    )))
                }
            }
        }

        if n <= 24 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                            return Err(GroupError::BadTable(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut state = 0x9E3779B97F4A7C15u64;
            for _ in 0..2000 {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let a = (state >> 33) as usize % n;
                let b = (state >> 17) as usize % n;
                let c = state as usize % n;
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(GroupError::BadTable(format!(
                        "associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }

        let abelian = (0..n).all(|a| (a..n).all(|b| mul(a, b) == mul(b, a)));
        Ok(FiniteTable {
            name: name.into(),
            element_names,
            table,
            inverse,
            identity,
            abelian,
            irreps: Vec::new(),
        })
    }

    /// Built-in tables by name: `S3`, `Q8`, `Z<k>`, and `x`-separated
    /// direct products such as `Z2xZ2` or `S3xZ2`.
    pub fn builtin(name: &str) -> Result<Self, GroupError> {
        if let Some((left, right)) = split_product(name) {
            let a = FiniteTable::builtin(left)?;
            let b = FiniteTable::builtin(right)?;
            return Ok(FiniteTable::direct_product(&a, &b));
        }
        if let Some(k) = name.strip_prefix('Z').and_then(|s| s.parse::<u32>().ok()) {
            if k == 0 {
                return Err(GroupError::UnknownTable(name.into()));
            }
            return Ok(Self::cyclic(k));
        }
        match name {
            "S3" => Ok(Self::s3()),
            "Q8" => Ok(Self::q8()),
            _ => Err(GroupError::UnknownTable(name.into())),
        }
    }

    pub fn cyclic(n: u32) -> Self {
        let names = (0..n).map(|i| i.to_string()).collect();
        let mut table = vec![0u32; (n * n) as usize];
        for a in 0..n {
            for b in 0..n {
                table[(a * n + b) as usize] = (a + b) % n;
            }
        }
        let mut t = FiniteTable::new(format!("Z{n}"), names, table).expect("Z_n is a group");
        let omega = std::f64::consts::TAU / f64::from(n);
        for m in 0..n {
            let chi = (0..n)
                .map(|g| Complex64::from_polar(1.0, omega * f64::from(m * g % n)))
                .collect();
            t.irreps.push(TableIrrep { name: format!("chi{m}"), dim: 1, chi });
        }
        t
    }

    /// The symmetric group on three letters; elements e, r, rr, s, sr, srr
    /// with r a 3-cycle and s a transposition.
    pub fn s3() -> Self {
        // Permutations of {0,1,2} in one-line notation.
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2], // e
            [1, 2, 0], // r
            [2, 0, 1], // rr
            [1, 0, 2], // s
            [0, 2, 1], // sr
            [2, 1, 0], // srr
        ];
        let names = ["e", "r", "rr", "s", "sr", "srr"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let compose = |p: &[usize; 3], q: &[usize; 3]| [p[q[0]], p[q[1]], p[q[2]]];
        let mut table = vec![0u32; 36];
        for a in 0..6 {
            for b in 0..6 {
                let c = compose(&perms[a], &perms[b]);
                let idx = perms.iter().position(|p| *p == c).unwrap();
                table[a * 6 + b] = idx as u32;
            }
        }
        let mut t = FiniteTable::new("S3", names, table).expect("S3 is a group");
        let re = |v: [f64; 6]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        t.irreps.push(TableIrrep {
            name: "triv".into(),
            dim: 1,
            chi: re([1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
        });
        t.irreps.push(TableIrrep {
            name: "sign".into(),
            dim: 1,
            chi: re([1.0, 1.0, 1.0, -1.0, -1.0, -1.0]),
        });
        t.irreps.push(TableIrrep {
            name: "std".into(),
            dim: 2,
            chi: re([2.0, -1.0, -1.0, 0.0, 0.0, 0.0]),
        });
        t
    }

    /// The quaternion group {±1, ±i, ±j, ±k}.
    pub fn q8() -> Self {
        // Encode q = (sign, axis) with axes 1,i,j,k at indices 0..3.
        let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        // Axis products: axis_mul[a][b] = (sign, axis).
        let axis_mul: [[(i32, usize); 4]; 4] = [
            [(1, 0), (1, 1), (1, 2), (1, 3)],
            [(1, 1), (-1, 0), (1, 3), (-1, 2)],
            [(1, 2), (-1, 3), (-1, 0), (1, 1)],
            [(1, 3), (1, 2), (-1, 1), (-1, 0)],
        ];
        let decode = |idx: usize| (if idx % 2 == 0 { 1 } else { -1 }, idx / 2);
        let encode = |sign: i32, axis: usize| axis * 2 + usize::from(sign < 0);
        let mut table = vec![0u32; 64];
        for a in 0..8 {
            for b in 0..8 {
                let (sa, xa) = decode(a);
                let (sb, xb) = decode(b);
                let (sp, xp) = axis_mul[xa][xb];
                table[a * 8 + b] = encode(sa * sb * sp, xp) as u32;
            }
        }
        let mut t = FiniteTable::new("Q8", names, table).expect("Q8 is a group");
        let re = |v: [f64; 8]| v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        t.irreps.push(TableIrrep {
            name: "triv".into(),
            dim: 1,
            chi: re([1.0; 8]),
        });
        t.irreps.push(TableIrrep {
            name: "ki".into(),
            dim: 1,
            chi: re([1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0]),
        });
        t.irreps.push(TableIrrep {
            name: "kj".into(),
            dim: 1,
            chi: re([1.0, 1.0, -1.0, -1.0, 1.0, 1.0, -1.0, -1.0]),
        });
        t.irreps.push(TableIrrep {
            name: "kk".into(),
            dim: 1,
            chi: re([1.0, 1.0, -1.0, -1.0, -1.0, -1.0, 1.0, 1.0]),
        });
        t.irreps.push(TableIrrep {
            name: "twodim".into(),
            dim: 2,
            chi: re([2.0, -2.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
        });
        t
    }

    pub fn direct_product(a: &FiniteTable, b: &FiniteTable) -> Self {
        let na = a.order();
        let nb = b.order();
        let n = na * nb;
        let names: Vec<String> = (0..n)
            .map(|i| format!("{}|{}", a.element_name((i / nb) as u32), b.element_name((i % nb) as u32)))
            .collect();
        let mut table = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let pa = a.mul((x / nb) as u32, (y / nb) as u32) as usize;
                let pb = b.mul((x % nb) as u32, (y % nb) as u32) as usize;
                table[x * n + y] = (pa * nb + pb) as u32;
            }
        }
        let mut t = FiniteTable::new(format!("{}x{}", a.name, b.name), names, table)
            .expect("product of groups is a group");
        for ia in &a.irreps {
            for ib in &b.irreps {
                let chi = (0..n)
                    .map(|i| ia.chi[i / nb] * ib.chi[i % nb])
                    .collect();
                t.irreps.push(TableIrrep {
                    name: format!("{}|{}", ia.name, ib.name),
                    dim: ia.dim * ib.dim,
                    chi,
                });
            }
        }
        t
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.element_names.len()
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn is_abelian(&self) -> bool {
        self.abelian
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.order() + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inverse[a as usize]
    }

    pub fn element_name(&self, idx: u32) -> &str {
        &self.element_names[idx as usize]
    }

    pub fn element_index(&self, name: &str) -> Option<u32> {
        self.element_names.iter().position(|n| n == name).map(|i| i as u32)
    }

    pub fn irreps(&self) -> &[TableIrrep] {
        &self.irreps
    }
}

fn split_product(name: &str) -> Option<(&str, &str)> {
    // Split on the first 'x' that separates two non-empty parts and is not
    // part of a leading token like "Zx" (ids never contain 'x' otherwise).
    let pos = name.find('x')?;
    let (l, r) = (&name[..pos], &name[pos + 1..]);
    if l.is_empty() || r.is_empty() {
        None
    } else {
        Some((l, r))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_is_a_group_with_standard_structure() {
        let t = FiniteTable::s3();
        assert_eq!(t.order(), 6);
        assert!(!t.is_abelian());
        // Two transpositions compose to a rotation: s * sr = ?
        let s = t.element_index("s").unwrap();
        let sr = t.element_index("sr").unwrap();
        let prod = t.mul(s, sr);
        assert!(["r", "rr"].contains(&t.element_name(prod)));
        // Sign character on a transposition.
        let sign = t.irreps().iter().find(|i| i.name == "sign").unwrap();
        assert_eq!(sign.chi[s as usize], Complex64::new(-1.0, 0.0));
    }

    #[test]
    fn q8_structure() {
        let t = FiniteTable::q8();
        let i = t.element_index("i").unwrap();
        let j = t.element_index("j").unwrap();
        assert_eq!(t.element_name(t.mul(i, j)), "k");
        assert_eq!(t.element_name(t.mul(j, i)), "-k");
        assert_eq!(t.element_name(t.mul(i, i)), "-1");
        assert_eq!(t.inv(i), t.element_index("-i").unwrap());
    }

    #[test]
    fn character_orthogonality_builtin_tables() {
        for name in ["Z3", "S3", "Q8", "Z2xZ2"] {
            let t = FiniteTable::builtin(name).unwrap();
            let n = t.order() as f64;
            for a in t.irreps() {
                for b in t.irreps() {
                    let ip: Complex64 = (0..t.order())
                        .map(|g| a.chi[g].conj() * b.chi[g])
                        .sum::<Complex64>()
                        / n;
                    let expect = if a.name == b.name { 1.0 } else { 0.0 };
                    assert!((ip - expect).norm() < 1e-12, "{name}: <{},{}> = {ip}", a.name, b.name);
                }
            }
        }
    }

    #[test]
    fn z3_character_sums() {
        let t = FiniteTable::cyclic(3);
        let chi1 = &t.irreps()[1];
        let sum: Complex64 = chi1.chi.iter().sum();
        assert!(sum.norm() < 1e-12);
    }

    #[test]
    fn bad_tables_are_rejected() {
        // A latin square that is not associative (order 5 loop).
        let names: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        let rows: [[u32; 5]; 5] = [
            [0, 1, 2, 3, 4],
            [1, 0, 3, 4, 2],
            [2, 4, 0, 1, 3],
            [3, 2, 4, 0, 1],
            [4, 3, 1, 2, 0],
        ];
        let table: Vec<u32> = rows.iter().flatten().copied().collect();
        assert!(FiniteTable::new("loop5", names, table).is_err());
    }
}
