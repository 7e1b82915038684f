//! Lattices in `F²`, normalized CM data `(φ, τ)`, conductors, the embedding
//! `ψ_τ`, and the column `δτ` with its Iwasawa decomposition.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{
    int, parse_p_rational, pow_p, reduce_mod, val_f, ExtKind, FScalar, QuadElem, QuadExtDesc,
    Val,
};

/// A 2×2 matrix over `F`, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2(pub [[FScalar; 2]; 2]);

impl Mat2 {
    pub fn new(a: FScalar, b: FScalar, c: FScalar, d: FScalar) -> Self {
        Mat2([[a, b], [c, d]])
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(int(a), int(b), int(c), int(d))
    }

    pub fn identity() -> Self {
        Mat2::from_ints(1, 0, 0, 1)
    }

    pub fn diag(a: FScalar, d: FScalar) -> Self {
        Mat2::new(a, FScalar::zero(), FScalar::zero(), d)
    }

    pub fn det(&self) -> FScalar {
        let m = &self.0;
        &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0]
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let entry = |i: usize, j: usize| &a[i][0] * &b[0][j] + &a[i][1] * &b[1][j];
        Mat2([[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
    }

    pub fn scale(&self, c: &FScalar) -> Mat2 {
        let m = &self.0;
        Mat2([[&m[0][0] * c, &m[0][1] * c], [&m[1][0] * c, &m[1][1] * c]])
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let m = &self.0;
        let inv = det.recip();
        Ok(Mat2([
            [&m[1][1] * &inv, -&m[0][1] * &inv],
            [-&m[1][0] * &inv, &m[0][0] * &inv],
        ]))
    }

    pub fn is_integral(&self, p: u64) -> bool {
        self.entries().all(|x| val_f(x, p) >= Val::Fin(0))
    }

    pub fn entries(&self) -> impl Iterator<Item = &FScalar> {
        self.0.iter().flatten()
    }

    /// Column `j` as a vector.
    pub fn col(&self, j: usize) -> [FScalar; 2] {
        [self.0[0][j].clone(), self.0[1][j].clone()]
    }

    /// Parses `"a,b;c,d"` (rows; entries rationals with p-power denominators).
    pub fn parse(s: &str, p: u64) -> Result<Mat2> {
        let rows: Vec<&str> = s.split(';').collect();
        if rows.len() != 2 {
            return Err(Error::Parse(format!("expected two rows in {s:?}")));
        }
        let mut out = Vec::with_capacity(4);
        for row in rows {
            let cells: Vec<&str> = row.split(',').collect();
            if cells.len() != 2 {
                return Err(Error::Parse(format!("expected two entries in row {row:?}")));
            }
            for c in cells {
                out.push(parse_p_rational(c, p)?);
            }
        }
        let mut it = out.into_iter();
        let mut next = || it.next().expect("four entries");
        Ok(Mat2::new(next(), next(), next(), next()))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0;
        let s = |x: &FScalar| {
            if x.denom().is_one() {
                x.numer().to_string()
            } else {
                format!("{}/{}", x.numer(), x.denom())
            }
        };
        write!(f, "{},{};{},{}", s(&m[0][0]), s(&m[0][1]), s(&m[1][0]), s(&m[1][1]))
    }
}

/// Exponents `(a₁, a₂)`, `a₁ ≤ a₂`, of the elementary divisors `p^{a₁}, p^{a₂}`
/// of `M` over `Z_p`.
///
/// Pivots on an entry of minimal valuation (first in row-major order), then
/// clears its row and column; the quotients are integral by minimality.
pub fn elementary_divisors(m: &Mat2, p: u64) -> Result<(i64, i64)> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    let mut a = m.0.clone();
    let mut best = (0usize, 0usize);
    let mut best_val = Val::Inf;
    for i in 0..2 {
        for j in 0..2 {
            let v = val_f(&a[i][j], p);
            if v < best_val {
                best_val = v;
                best = (i, j);
            }
        }
    }
    if best.0 == 1 {
        a.swap(0, 1);
    }
    if best.1 == 1 {
        for row in a.iter_mut() {
            row.swap(0, 1);
        }
    }
    let pivot = a[0][0].clone();
    // Clearing a[1][0] by a row operation and a[0][1] by a column operation
    // leaves a[1][1] - a[1][0]·a[0][1]/pivot, which is det / pivot.
    let rest = &a[1][1] - &a[1][0] * &a[0][1] / &pivot;
    let v1 = best_val.finite().expect("nonsingular");
    let v2 = val_f(&rest, p).finite().expect("nonsingular");
    debug_assert!(v1 <= v2);
    Ok((v1, v2))
}

/// The shortest interval `[r, s]` with `ϖ^{-r}O² ⊆ L ⊆ ϖ^{-s}O²`, where `L`
/// is spanned by the columns of `m`.
pub fn elementary_interval(m: &Mat2, p: u64) -> Result<(i64, i64)> {
    let (a1, a2) = elementary_divisors(m, p)?;
    Ok((-a2, -a1))
}

/// Matrix of multiplication by `t` on the basis `{1, ω}` (columns are the
/// images of `1` and `ω`).
pub fn regular_rep(ext: &QuadExtDesc, t: &QuadElem) -> Mat2 {
    Mat2::new(
        t.x.clone(),
        ext.delta() * &t.y,
        t.y.clone(),
        t.x.clone(),
    )
}

/// A normalized representative `(φ, τ)` of a CM datum with `r = 0`.
///
/// `φ` enters only through its height, which equals the conductor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LtDatum {
    ext: QuadExtDesc,
    m_tau: Mat2,
    s: u32,
    theta: (QuadElem, QuadElem),
}

impl LtDatum {
    pub fn ext(&self) -> &QuadExtDesc {
        &self.ext
    }

    /// Columns are `τ(1)` and `τ(ω)`.
    pub fn m_tau(&self) -> &Mat2 {
        &self.m_tau
    }

    pub fn conductor(&self) -> u32 {
        self.s
    }

    pub fn phi_height(&self) -> u32 {
        self.s
    }

    /// `δτ = (θ₁, θ₂)`.
    pub fn theta(&self) -> &(QuadElem, QuadElem) {
        &self.theta
    }

    /// The same datum with `δ` replaced by another generator of the different.
    pub fn with_ext(&self, ext: QuadExtDesc) -> Result<LtDatum> {
        make_datum(&self.m_tau, &ext)
    }
}

/// `c(φ, τ) = s - r = s`.
pub fn conductor(d: &LtDatum) -> u32 {
    d.s
}

/// Smallest `k` such that `ψ(ϖ^k ω)` is integral: the multiplier ring of
/// `τ⁻¹(O_F²)` is then `O_F + ϖ^k O_E`.
fn multiplier_conductor(ext: &QuadExtDesc, m: &Mat2, bound: u32) -> Result<u32> {
    let inv = m.inverse()?;
    let p = ext.p();
    for k in 0..=bound {
        let t = QuadElem::new(FScalar::zero(), pow_p(p, k as i64));
        if m.mul(&regular_rep(ext, &t)).mul(&inv).is_integral(p) {
            return Ok(k);
        }
    }
    Ok(bound + 1)
}

/// Normalizes `M` to the representative with `O_F² ⊆ τ(O_E) ⊆ ϖ^{-s}O_F²`
/// optimally, and `s` equal to the conductor of the multiplier ring.
///
/// Rescaling by `ϖ^r ∈ F^×` fixes `r = 0`. In the ramified case the lattice
/// `τ⁻¹(O_F²)` may be `ϖ_E` times a proper ideal; one further twist by `ω`
/// brings it to the form `u·(O_F + ϖ^s O_E)`.
pub fn make_datum(m: &Mat2, ext: &QuadExtDesc) -> Result<LtDatum> {
    let p = ext.p();
    let mut m = m.clone();
    for _ in 0..3 {
        let (r, s) = elementary_interval(&m, p)?;
        m = m.scale(&pow_p(p, r));
        let s = (s - r) as u32;
        let c = multiplier_conductor(ext, &m, s)?;
        if c == s {
            let theta = compute_delta_tau(ext, &m);
            return Ok(LtDatum { ext: ext.clone(), m_tau: m, s, theta });
        }
        debug_assert_eq!(ext.kind(), ExtKind::Ramified);
        m = m.mul(&regular_rep(ext, &QuadElem::omega()));
    }
    unreachable!("normalization converges after one twist by omega")
}

/// `[O_E^× : (O_F + ϖ^s O_E)^×]`, by counting units of `O_E/p^{s+1}` and
/// those lying in the order.
pub fn order_unit_index(ext: &QuadExtDesc, s: u32) -> u64 {
    if s == 0 {
        return 1;
    }
    let p = ext.p();
    let modulus = p.pow(s + 1);
    let order_mod = p.pow(s);
    let delta = reduce_mod(ext.delta(), p, p).expect("delta integral");
    let mut units = 0u64;
    let mut in_order = 0u64;
    for x in 0..modulus {
        for y in 0..modulus {
            let (x0, y0) = (x % p, y % p);
            let n = (x0 * x0 + p - (delta * y0 * y0) % p) % p;
            if n == 0 {
                continue;
            }
            units += 1;
            if y % order_mod == 0 {
                in_order += 1;
            }
        }
    }
    units / in_order
}

/// `ψ_τ(t) = M_τ R(t) M_τ⁻¹`, so that `ψ(t)τ(x) = τ(tx)`.
pub fn psi_matrix(d: &LtDatum, t: &QuadElem) -> Mat2 {
    let inv = d.m_tau.inverse().expect("datum is nonsingular");
    d.m_tau.mul(&regular_rep(&d.ext, t)).mul(&inv)
}

/// Row `i` of `M_τ` is the functional `τ_i(x + yω) = M_{i0} x + M_{i1} y`.
/// Writing `τ_i(t) = Tr(θ'_i t)` gives `θ'_i = M_{i0}/2 + M_{i1}/(2Δ)·ω`, and
/// `θ_i = δ θ'_i`.
fn compute_delta_tau(ext: &QuadExtDesc, m: &Mat2) -> (QuadElem, QuadElem) {
    let two = int(2);
    let two_delta = ext.delta() * &two;
    let row = |i: usize| {
        let dual = QuadElem::new(&m.0[i][0] / &two, &m.0[i][1] / &two_delta);
        ext.mul(ext.different(), &dual)
    };
    (row(0), row(1))
}

pub fn delta_tau(d: &LtDatum) -> (QuadElem, QuadElem) {
    d.theta.clone()
}

/// Which of the two elementary decompositions was used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IwasawaBranch {
    /// `v(θ₁) ≤ v(θ₂)`.
    FirstPivot,
    SecondPivot,
}

pub type QuadMat = [[QuadElem; 2]; 2];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Iwasawa {
    pub gamma: QuadMat,
    pub p: QuadElem,
    pub q: QuadElem,
    /// The off-diagonal entry of the triangular factor.
    pub upper: QuadElem,
    pub branch: IwasawaBranch,
}

impl Iwasawa {
    /// `Γ · [[P, *], [0, Q]]`.
    pub fn reconstruct(&self, ext: &QuadExtDesc) -> QuadMat {
        let t = [[self.p.clone(), self.upper.clone()], [QuadElem::zero(), self.q.clone()]];
        quad_mat_mul(ext, &self.gamma, &t)
    }
}

pub fn quad_mat_mul(ext: &QuadExtDesc, a: &QuadMat, b: &QuadMat) -> QuadMat {
    let entry = |i: usize, j: usize| &ext.mul(&a[i][0], &b[0][j]) + &ext.mul(&a[i][1], &b[1][j]);
    [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]]
}

pub fn quad_mat_det(ext: &QuadExtDesc, a: &QuadMat) -> QuadElem {
    &ext.mul(&a[0][0], &a[1][1]) - &ext.mul(&a[0][1], &a[1][0])
}

/// Iwasawa decomposition `(δτ | conj(δτ)) = Γ_τ [[P_τ, *], [0, Q_τ]]` with
/// `Γ_τ ∈ GL₂(O_E)`.
pub fn iwasawa(d: &LtDatum) -> Result<Iwasawa> {
    let ext = &d.ext;
    let (t1, t2) = &d.theta;
    if t1.is_zero() && t2.is_zero() {
        return Err(Error::DegenerateColumn);
    }
    let (c1, c2) = (t1.conj(), t2.conj());
    let (branch, gamma, p, upper, q) = if ext.val_e(t1) <= ext.val_e(t2) {
        let ratio = ext.div(t2, t1)?;
        let q = &c2 - &ext.mul(&c1, &ratio);
        let gamma = [[QuadElem::one(), QuadElem::zero()], [ratio, QuadElem::one()]];
        (IwasawaBranch::FirstPivot, gamma, t1.clone(), c1, q)
    } else {
        let ratio = ext.div(t1, t2)?;
        let q = &c1 - &ext.mul(&c2, &ratio);
        let gamma = [[ratio, QuadElem::one()], [QuadElem::one(), QuadElem::zero()]];
        (IwasawaBranch::SecondPivot, gamma, t2.clone(), c2, q)
    };
    if q.is_zero() {
        return Err(Error::DegenerateColumn);
    }
    Ok(Iwasawa { gamma, p, q, upper, branch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::{rat, ExtKind};

    fn e3u() -> QuadExtDesc {
        QuadExtDesc::new(3, ExtKind::Unramified, int(-1)).unwrap()
    }

    fn e3r() -> QuadExtDesc {
        QuadExtDesc::new(3, ExtKind::Ramified, int(3)).unwrap()
    }

    fn diag_tau(s: u32) -> Mat2 {
        Mat2::diag(int(1), pow_p(3, -(s as i64)))
    }

    /// Elementary divisors from the gcd of entries and the determinant.
    fn divisors_oracle(m: &Mat2, p: u64) -> (i64, i64) {
        let v1 = m.entries().map(|x| val_f(x, p)).min().unwrap().finite().unwrap();
        let vd = val_f(&m.det(), p).finite().unwrap();
        (v1, vd - v1)
    }

    #[test]
    fn interval_examples() {
        assert_eq!(elementary_interval(&Mat2::diag(int(1), rat(1, 3)), 3).unwrap(), (0, 1));
        assert_eq!(elementary_interval(&Mat2::identity(), 3).unwrap(), (0, 0));
        assert_eq!(elementary_interval(&Mat2::identity().scale(&rat(1, 3)), 3).unwrap(), (1, 1));
        assert_eq!(
            elementary_interval(&Mat2::from_ints(1, 1, 1, 1), 3),
            Err(Error::SingularMatrix)
        );
    }

    #[test]
    fn make_datum_examples() {
        let e = e3u();
        let d = make_datum(&diag_tau(2), &e).unwrap();
        assert_eq!(d.conductor(), 2);
        assert_eq!(d.phi_height(), 2);
        let d2 = make_datum(&diag_tau(2).scale(&rat(1, 3)), &e).unwrap();
        assert_eq!(d2, d);
        assert_eq!(make_datum(&Mat2::from_ints(1, 2, 2, 4), &e), Err(Error::SingularMatrix));
        for s in 0..3 {
            assert_eq!(conductor(&make_datum(&diag_tau(s), &e).unwrap()), s);
        }
    }

    #[test]
    fn ramified_twist_normalization() {
        // τ⁻¹(O²) = Z_3·ω + 9·O_E has interval length 2 but multiplier
        // conductor 1; the twist by ω fixes it.
        let e = e3r();
        let m = Mat2::new(int(0), int(1), rat(1, 9), int(0));
        let d = make_datum(&m, &e).unwrap();
        assert_eq!(d.conductor(), 1);
        let (r, s) = elementary_interval(d.m_tau(), 3).unwrap();
        assert_eq!((r, s), (0, 1));
    }

    #[test]
    fn order_unit_index_examples() {
        assert_eq!(order_unit_index(&e3u(), 1), 4);
        assert_eq!(order_unit_index(&e3u(), 0), 1);
        assert_eq!(order_unit_index(&e3r(), 1), 3);
        // ζ_E(1)⁻¹ ζ_F(1) q^s
        for s in 1..4 {
            assert_eq!(order_unit_index(&e3u(), s), 4 * 3u64.pow(s - 1));
            assert_eq!(order_unit_index(&e3r(), s), 3u64.pow(s));
        }
        let e5 = QuadExtDesc::standard(5, ExtKind::Unramified).unwrap();
        assert_eq!(order_unit_index(&e5, 2), 30);
    }

    #[test]
    fn psi_examples() {
        let e = e3u();
        let id = make_datum(&Mat2::identity(), &e).unwrap();
        assert_eq!(psi_matrix(&id, &QuadElem::omega()), Mat2::from_ints(0, -1, 1, 0));
        let d = make_datum(&diag_tau(1), &e).unwrap();
        assert_eq!(
            psi_matrix(&d, &QuadElem::omega()),
            Mat2::new(int(0), int(-3), rat(1, 3), int(0))
        );
        assert_eq!(
            psi_matrix(&d, &QuadElem::new(int(0), int(3))),
            Mat2::from_ints(0, -9, 1, 0)
        );
    }

    #[test]
    fn delta_tau_examples() {
        let e = e3u();
        let id = make_datum(&Mat2::identity(), &e).unwrap();
        assert_eq!(
            delta_tau(&id),
            (QuadElem::from_f(rat(1, 2)), QuadElem::new(int(0), rat(-1, 2)))
        );
        for s in 1..4 {
            let d = make_datum(&diag_tau(s), &e).unwrap();
            let (t1, t2) = delta_tau(&d);
            assert_eq!(t1, QuadElem::from_f(rat(1, 2)));
            assert_eq!(t2, QuadElem::new(int(0), pow_p(3, -(s as i64)) * rat(-1, 2)));
        }
        // δ ↦ −δ negates θ and keeps absolute values.
        let neg = e.clone().with_different(QuadElem::from_f(int(-1))).unwrap();
        let d = make_datum(&diag_tau(1), &e).unwrap();
        let dn = d.with_ext(neg.clone()).unwrap();
        assert_eq!(dn.theta().0, -&d.theta().0);
        assert_eq!(dn.theta().1, -&d.theta().1);
        assert_eq!(neg.abs_e(&dn.theta().1).unwrap(), e.abs_e(&d.theta().1).unwrap());
    }

    /// `τ_i(t) = Tr(δ⁻¹ θ_i t)` on the basis of `O_E`.
    #[test]
    fn delta_tau_reproduces_tau() {
        for e in [e3u(), e3r()] {
            let m = Mat2::new(int(2), rat(1, 3), int(5), rat(-4, 9));
            let d = make_datum(&m, &e).unwrap();
            let dinv = e.inv(e.different()).unwrap();
            let thetas = [&d.theta().0, &d.theta().1];
            for (i, th) in thetas.iter().enumerate() {
                for (j, basis) in [QuadElem::one(), QuadElem::omega()].iter().enumerate() {
                    let val = e.trace(&e.mul(&e.mul(&dinv, th), basis));
                    assert_eq!(val, d.m_tau().0[i][j]);
                }
            }
        }
    }

    #[test]
    fn iwasawa_examples() {
        let e = e3u();
        for m in [Mat2::identity(), diag_tau(1), Mat2::new(int(0), int(1), rat(1, 27), int(2))] {
            let d = make_datum(&m, &e).unwrap();
            let iw = iwasawa(&d).unwrap();
            let (t1, t2) = d.theta();
            let target = [[t1.clone(), t1.conj()], [t2.clone(), t2.conj()]];
            assert_eq!(iw.reconstruct(&e), target);
            for row in &iw.gamma {
                for x in row {
                    assert!(e.is_integral(x));
                }
            }
            assert!(e.is_unit(&quad_mat_det(&e, &iw.gamma)));
            // det(δτ | conj) = P·Q·det(Γ)
            let lhs = e.val_norm(&quad_mat_det(&e, &target));
            let rhs = e.val_norm(&e.mul(&iw.p, &iw.q));
            assert_eq!(lhs, rhs);
        }
        let id = make_datum(&Mat2::identity(), &e).unwrap();
        assert_eq!(e.val_e(&iwasawa(&id).unwrap().p), Val::Fin(0));
        // θ₂ = −ω/6 has the smaller valuation, so it is the pivot; pivoting
        // on θ₁ would put θ₂/θ₁ ∉ O_E into Γ.
        let d1 = make_datum(&diag_tau(1), &e).unwrap();
        let iw = iwasawa(&d1).unwrap();
        assert_eq!(iw.branch, IwasawaBranch::SecondPivot);
        assert_eq!(e.val_norm(&iw.p), Val::Fin(-2));
    }

    #[test]
    fn parse_matrix() {
        let m = Mat2::parse("1,0;0,1/3", 3).unwrap();
        assert_eq!(m, diag_tau(1));
        assert_eq!(m.to_string(), "1,0;0,1/3");
        assert!(Mat2::parse("1,0;0", 3).is_err());
        assert!(Mat2::parse("1,0;0,1/2", 3).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn raw_matrix() -> impl Strategy<Value = Mat2> {
            prop::array::uniform4((-30i64..30, 0u32..4)).prop_map(|e| {
                let f = |(n, k): (i64, u32)| rat(n, 3i64.pow(k));
                Mat2::new(f(e[0]), f(e[1]), f(e[2]), f(e[3]))
            })
        }

        fn unimodular() -> impl Strategy<Value = Mat2> {
            prop::array::uniform4(-6i64..6)
                .prop_filter("unit determinant", |a| (a[0] * a[3] - a[1] * a[2]) % 3 != 0)
                .prop_map(|a| Mat2::from_ints(a[0], a[1], a[2], a[3]))
        }

        proptest! {
            #[test]
            fn divisors_match_gcd_det(m in raw_matrix()) {
                prop_assume!(!m.det().is_zero());
                prop_assert_eq!(elementary_divisors(&m, 3).unwrap(), divisors_oracle(&m, 3));
            }

            #[test]
            fn interval_invariant_under_gl2_and_units(m in raw_matrix(), g in unimodular(),
                                                      ux in -5i64..5, uy in -5i64..5, ram in any::<bool>()) {
                prop_assume!(!m.det().is_zero());
                let e = if ram { e3r() } else { e3u() };
                let u = QuadElem::new(int(3 * ux + 1), int(uy));
                let base = elementary_interval(&m, 3).unwrap();
                prop_assert_eq!(elementary_interval(&m.mul(&g), 3).unwrap(), base);
                prop_assert_eq!(elementary_interval(&m.mul(&regular_rep(&e, &u)), 3).unwrap(), base);
            }

            #[test]
            fn make_datum_idempotent_and_multiplier(m in raw_matrix(), ram in any::<bool>()) {
                prop_assume!(!m.det().is_zero());
                let e = if ram { e3r() } else { e3u() };
                let d = make_datum(&m, &e).unwrap();
                prop_assert_eq!(&make_datum(d.m_tau(), &e).unwrap(), &d);
                let s = d.conductor() as i64;
                // ψ(t) integral iff t ∈ O_F + ϖ^s O_E, over a grid of t.
                for a in -2i64..=2 {
                    for k in -1..=s + 2 {
                        for b in [1i64, 2] {
                            let t = QuadElem::new(int(a), int(b) * pow_p(3, k));
                            let in_order = k >= s;
                            prop_assert_eq!(psi_matrix(&d, &t).is_integral(3), in_order);
                        }
                    }
                }
                // θ₁, θ₂ are F-linearly independent.
                let (t1, t2) = d.theta();
                prop_assert!(!(&t1.x * &t2.y - &t1.y * &t2.x).is_zero());
                let iw = iwasawa(&d).unwrap();
                let target = [[t1.clone(), t1.conj()], [t2.clone(), t2.conj()]];
                prop_assert_eq!(iw.reconstruct(&e), target);
            }
        }
    }
}
