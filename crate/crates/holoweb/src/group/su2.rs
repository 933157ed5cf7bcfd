//! SU(2) as unit quaternions: Wigner-D matrices and Clebsch-Gordan data.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// A spin value stored as twice its value, so `HalfInt(3)` is j = 3/2.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct HalfInt(i32);

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt(0);

    pub fn from_twice(twice: i32) -> Self {
        HalfInt(twice)
    }

    pub fn from_int(j: i32) -> Self {
        HalfInt(2 * j)
    }

    pub fn twice(self) -> i32 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// 2j + 1 for a spin-j representation.
    pub fn dim(self) -> usize {
        assert!(self.0 >= 0, "dimension of a negative spin");
        (self.0 + 1) as usize
    }

    pub fn value(self) -> f64 {
        f64::from(self.0) / 2.0
    }

    /// Parses "2", "3/2" or a numeral like 1.5 rendered as text.
    pub fn parse(s: &str) -> Option<Self> {
        if let Some((num, den)) = s.split_once('/') {
            let n: i32 = num.trim().parse().ok()?;
            let d: i32 = den.trim().parse().ok()?;
            if d == 2 {
                return Some(HalfInt(n));
            }
            if d == 1 {
                return Some(HalfInt(2 * n));
            }
            return None;
        }
        if let Ok(n) = s.trim().parse::<i32>() {
            return Some(HalfInt(2 * n));
        }
        let x: f64 = s.trim().parse().ok()?;
        let t = (2.0 * x).round();
        if ((2.0 * x) - t).abs() < 1e-9 {
            Some(HalfInt(t as i32))
        } else {
            None
        }
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// Unit quaternion (w, x, y, z); the 2x2 matrix is w·I + i(x σ1 + y σ2 + z σ3).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn identity() -> Self {
        Quaternion::new(1.0, 0.0, 0.0, 0.0)
    }

    pub fn norm(&self) -> f64 {
        (self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Quaternion::new(self.w / n, self.x / n, self.y / n, self.z / n)
    }

    pub fn mul(&self, o: &Quaternion) -> Quaternion {
        Quaternion::new(
            self.w * o.w - self.x * o.x - self.y * o.y - self.z * o.z,
            self.w * o.x + self.x * o.w + self.y * o.z - self.z * o.y,
            self.w * o.y - self.x * o.z + self.y * o.w + self.z * o.x,
            self.w * o.z + self.x * o.y - self.y * o.x + self.z * o.w,
        )
    }

    /// Conjugate, which is the inverse on the unit sphere.
    pub fn conjugate(&self) -> Quaternion {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    /// Distance treating q and -q as distinct (SU(2), not SO(3)).
    pub fn dist(&self, o: &Quaternion) -> f64 {
        ((self.w - o.w).powi(2)
            + (self.x - o.x).powi(2)
            + (self.y - o.y).powi(2)
            + (self.z - o.z).powi(2))
        .sqrt()
    }

    /// Entries of the defining 2x2 matrix [[a, b], [c, d]], via
    /// w·I - i(x σ1 + y σ2 + z σ3) so that Hamilton products map to matrix
    /// products.
    pub fn su2_entries(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (
            Complex64::new(self.w, -self.z),
            Complex64::new(-self.y, -self.x),
            Complex64::new(self.y, -self.x),
            Complex64::new(self.w, self.z),
        )
    }

    /// Character of the spin-j representation at this element.
    pub fn character(&self, j: HalfInt) -> f64 {
        // Eigenvalues of the defining matrix are exp(±i phi) with cos phi = w.
        let phi = self.w.clamp(-1.0, 1.0).acos();
        let mut sum = 0.0;
        let t = j.twice();
        let mut tm = -t;
        while tm <= t {
            sum += (f64::from(tm) * phi).cos();
            tm += 2;
        }
        sum
    }
}

fn factorial(n: i32) -> f64 {
    assert!(n >= 0);
    (1..=n).map(f64::from).product()
}

fn cpow(z: Complex64, n: i32) -> Complex64 {
    let mut out = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        out *= z;
    }
    out
}

/// Wigner-D matrix of spin j at a unit quaternion, rows and columns ordered
/// by m = j, j-1, ..., -j. Multiplicative: D(gh) = D(g) D(h), and D at spin
/// 1/2 is the defining matrix.
pub fn wigner_d(j: HalfInt, g: &Quaternion) -> DMatrix<Complex64> {
    let (a, b, c, d) = g.su2_entries();
    let t = j.twice();
    let dim = j.dim();
    let mut out = DMatrix::zeros(dim, dim);
    // Matrix elements of the action on degree-2j polynomials in two variables.
    for (row, tmp) in (0..dim).map(|r| (r, t - 2 * r as i32)) {
        for (col, tm) in (0..dim).map(|cidx| (cidx, t - 2 * cidx as i32)) {
            // tmp = 2m', tm = 2m.
            let jpm = (t + tm) / 2;
            let jmm = (t - tm) / 2;
            let jpmp = (t + tmp) / 2;
            let jmmp = (t - tmp) / 2;
            let norm = (factorial(jpmp) * factorial(jmmp) * factorial(jpm) * factorial(jmm)).sqrt();
            let mut sum = Complex64::new(0.0, 0.0);
            let kmin = 0.max((tm - tmp) / 2);
            let kmax = jpm.min(jmmp);
            let mut k = kmin;
            while k <= kmax {
                let ea = jpm - k;
                let eb = (tmp - tm) / 2 + k;
                let ec = k;
                let ed = jmmp - k;
                if ea >= 0 && eb >= 0 && ec >= 0 && ed >= 0 {
                    let denom =
                        factorial(ea) * factorial(k) * factorial(eb) * factorial(ed);
                    sum += cpow(a, ea) * cpow(b, eb) * cpow(c, ec) * cpow(d, ed) / denom;
                }
                k += 1;
            }
            out[(row, col)] = norm * sum;
        }
    }
    out
}

/// One coupled block of a tensor product: the spin-j component with its
/// real coefficient matrix of shape (dim1 * dim2) x (2j + 1).
///
/// Rows run over (m1, m2) pairs with m1 outermost, both descending; columns
/// over m = j .. -j. Phases follow the Condon-Shortley convention.
#[derive(Clone, Debug)]
pub struct CgBlock {
    pub j: HalfInt,
    pub coeffs: DMatrix<f64>,
}

/// Clebsch-Gordan decomposition of spin j1 tensor spin j2, blocks ordered by
/// decreasing total spin from j1 + j2 down to |j1 - j2|.
pub fn clebsch_gordan(j1: HalfInt, j2: HalfInt) -> Vec<CgBlock> {
    let t1 = j1.twice();
    let t2 = j2.twice();
    assert!(t1 >= 0 && t2 >= 0);
    let d1 = j1.dim();
    let d2 = j2.dim();
    let dim = d1 * d2;
    let idx = |tm1: i32, tm2: i32| -> usize {
        let r1 = ((t1 - tm1) / 2) as usize;
        let r2 = ((t2 - tm2) / 2) as usize;
        r1 * d2 + r2
    };
    // Lowering coefficients: L |j m> = sqrt(j(j+1) - m(m-1)) |j m-1>, from
    // twice-values: j(j+1) - m(m-1) = (t(t+2) - tm(tm-2)) / 4.
    let lower_coeff = |t: i32, tm: i32| -> f64 {
        (f64::from(t * (t + 2) - tm * (tm - 2)) / 4.0).sqrt()
    };

    let mut blocks: Vec<CgBlock> = Vec::new();
    // Highest-weight vectors of each total spin, found by orthogonality to
    // the already-coupled blocks inside the same weight space.
    let mut tj = t1 + t2;
    let tmin = (t1 - t2).abs();
    while tj >= tmin {
        let j = HalfInt::from_twice(tj);
        // Weight space of M = j: pairs with tm1 + tm2 = tj, ordered by
        // descending m1 so the leading entry carries the sign convention.
        let mut pairs: Vec<(i32, i32)> = Vec::new();
        let mut tm1 = t1.min(tj + t2);
        while tm1 >= -t1 {
            let tm2 = tj - tm1;
            if tm2 >= -t2 && tm2 <= t2 {
                pairs.push((tm1, tm2));
            }
            tm1 -= 2;
        }
        let mut v = vec![0.0f64; dim];
        v[idx(pairs[0].0, pairs[0].1)] = 1.0;
        // Project out the M = j columns of all higher-spin blocks.
        for b in &blocks {
            let col = ((b.j.twice() - tj) / 2) as usize;
            let mut dot = 0.0;
            for r in 0..dim {
                dot += b.coeffs[(r, col)] * v[r];
            }
            for r in 0..dim {
                v[r] -= dot * b.coeffs[(r, col)];
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        assert!(norm > 1e-9, "degenerate highest-weight space");
        let lead = v[idx(pairs[0].0, pairs[0].1)];
        let scale = if lead < 0.0 { -1.0 / norm } else { 1.0 / norm };
        for x in v.iter_mut() {
            *x *= scale;
        }

        // Fill the block by repeated lowering.
        let cols = j.dim();
        let mut coeffs = DMatrix::zeros(dim, cols);
        for r in 0..dim {
            coeffs[(r, 0)] = v[r];
        }
        let mut tm = tj;
        for col in 1..cols {
            let denom = lower_coeff(tj, tm);
            let mut next = vec![0.0f64; dim];
            for (r1, tma) in (0..d1).map(|r| (r, t1 - 2 * r as i32)) {
                for (r2, tmb) in (0..d2).map(|r| (r, t2 - 2 * r as i32)) {
                    let cur = coeffs[(r1 * d2 + r2, col - 1)];
                    if cur == 0.0 {
                        continue;
                    }
                    if tma - 2 >= -t1 {
                        next[idx(tma - 2, tmb)] += lower_coeff(t1, tma) * cur / denom;
                    }
                    if tmb - 2 >= -t2 {
                        next[idx(tma, tmb - 2)] += lower_coeff(t2, tmb) * cur / denom;
                    }
                }
            }
            for r in 0..dim {
                coeffs[(r, col)] = next[r];
            }
            tm -= 2;
        }
        blocks.push(CgBlock { j, coeffs });
        tj -= 2;
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_quat(rng: &mut ChaCha8Rng) -> Quaternion {
        use rand_distr::{Distribution, StandardNormal};
        let w: f64 = StandardNormal.sample(rng);
        let x: f64 = StandardNormal.sample(rng);
        let y: f64 = StandardNormal.sample(rng);
        let z: f64 = StandardNormal.sample(rng);
        Quaternion::new(w, x, y, z).normalized()
    }

    #[test]
    fn half_int_parsing_and_display() {
        assert_eq!(HalfInt::parse("3/2"), Some(HalfInt::from_twice(3)));
        assert_eq!(HalfInt::parse("2"), Some(HalfInt::from_int(2)));
        assert_eq!(HalfInt::parse("1.5"), Some(HalfInt::from_twice(3)));
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_int(2).to_string(), "2");
        assert_eq!(HalfInt::from_twice(3).dim(), 4);
    }

    #[test]
    fn defining_matrix_at_spin_half() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let q = random_quat(&mut rng);
            let d = wigner_d(HalfInt::from_twice(1), &q);
            let (a, b, c, dd) = q.su2_entries();
            assert!((d[(0, 0)] - a).norm() < 1e-12);
            assert!((d[(0, 1)] - b).norm() < 1e-12);
            assert!((d[(1, 0)] - c).norm() < 1e-12);
            assert!((d[(1, 1)] - dd).norm() < 1e-12);
        }
    }

    #[test]
    fn wigner_identity_is_identity() {
        for t in 0..=8 {
            let j = HalfInt::from_twice(t);
            let d = wigner_d(j, &Quaternion::identity());
            let id = DMatrix::<Complex64>::identity(j.dim(), j.dim());
            assert!((&d - &id).norm() < 1e-12, "j = {j}");
        }
    }

    #[test]
    fn wigner_unitary_and_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for t in [1, 2, 3, 4, 8] {
            let j = HalfInt::from_twice(t);
            for _ in 0..10 {
                let g = random_quat(&mut rng);
                let h = random_quat(&mut rng);
                let dg = wigner_d(j, &g);
                let dh = wigner_d(j, &h);
                let dgh = wigner_d(j, &g.mul(&h));
                let id = DMatrix::<Complex64>::identity(j.dim(), j.dim());
                assert!((&dg * dg.adjoint() - &id).norm() < 1e-10, "unitarity j={j}");
                assert!((&dg * &dh - &dgh).norm() < 1e-10, "multiplicativity j={j}");
            }
        }
    }

    #[test]
    fn character_matches_trace_and_cg_series() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let half = HalfInt::from_twice(1);
        let one = HalfInt::from_int(1);
        for _ in 0..100 {
            let g = random_quat(&mut rng);
            let tr_half: Complex64 = wigner_d(half, &g).trace();
            assert!((tr_half.re - g.character(half)).abs() < 1e-10);
            assert!(tr_half.im.abs() < 1e-10);
            // chi_{1/2}^2 = chi_1 + chi_0.
            let lhs = g.character(half).powi(2);
            let rhs = g.character(one) + 1.0;
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn cg_singlet_matches_raising_operator_null_space() {
        // Oracle: in the (m1, m2) = (+-, -+) weight-zero space, the raising
        // operator sends both basis vectors to |++>, so its null space is
        // spanned by (1, -1)/sqrt(2); Condon-Shortley picks +1 on the
        // leading (m1 = 1/2) pair.
        let blocks = clebsch_gordan(HalfInt::from_twice(1), HalfInt::from_twice(1));
        assert_eq!(blocks.len(), 2);
        let singlet = blocks.iter().find(|b| b.j == HalfInt::ZERO).unwrap();
        let expect = [0.0, 1.0 / 2.0f64.sqrt(), -1.0 / 2.0f64.sqrt(), 0.0];
        for r in 0..4 {
            assert!((singlet.coeffs[(r, 0)] - expect[r]).abs() < 1e-12);
        }
    }

    #[test]
    fn cg_with_trivial_factor_is_identity() {
        let j = HalfInt::from_twice(3);
        let blocks = clebsch_gordan(j, HalfInt::ZERO);
        assert_eq!(blocks.len(), 1);
        let b = &blocks[0];
        assert_eq!(b.j, j);
        let id = DMatrix::<f64>::identity(4, 4);
        assert!((&b.coeffs - &id).norm() < 1e-12);
    }

    #[test]
    fn cg_columns_orthonormal() {
        for (t1, t2) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let blocks = clebsch_gordan(HalfInt::from_twice(t1), HalfInt::from_twice(t2));
            let dim = HalfInt::from_twice(t1).dim() * HalfInt::from_twice(t2).dim();
            let mut all: Vec<Vec<f64>> = Vec::new();
            for b in &blocks {
                for c in 0..b.coeffs.ncols() {
                    all.push((0..dim).map(|r| b.coeffs[(r, c)]).collect());
                }
            }
            assert_eq!(all.len(), dim);
            for (i, u) in all.iter().enumerate() {
                for (k, v) in all.iter().enumerate() {
                    let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
                    let expect = if i == k { 1.0 } else { 0.0 };
                    assert!((dot - expect).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn cg_intertwines_tensor_action() {
        // (D^j1 (x) D^j2) C_j = C_j D^j on random group elements.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let j1 = HalfInt::from_int(1);
        let j2 = HalfInt::from_twice(1);
        let blocks = clebsch_gordan(j1, j2);
        for _ in 0..50 {
            let g = random_quat(&mut rng);
            let d1 = wigner_d(j1, &g);
            let d2 = wigner_d(j2, &g);
            let kron = d1.kronecker(&d2);
            for b in &blocks {
                let c = b.coeffs.map(|x| Complex64::new(x, 0.0));
                let dj = wigner_d(b.j, &g);
                assert!((&kron * &c - &c * &dj).norm() < 1e-10, "j = {}", b.j);
            }
        }
    }

    #[test]
    fn spin_one_from_projected_product() {
        // D^1 built from CG projection of D^(1/2) (x) D^(1/2) agrees with the
        // direct formula.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let half = HalfInt::from_twice(1);
        let one = HalfInt::from_int(1);
        let blocks = clebsch_gordan(half, half);
        let c1 = blocks
            .iter()
            .find(|b| b.j == one)
            .unwrap()
            .coeffs
            .map(|x| Complex64::new(x, 0.0));
        for _ in 0..20 {
            let g = random_quat(&mut rng);
            let kron = wigner_d(half, &g).kronecker(&wigner_d(half, &g));
            let projected = c1.adjoint() * kron * &c1;
            assert!((projected - wigner_d(one, &g)).norm() < 1e-10);
        }
    }
}
