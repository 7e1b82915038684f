//! Local zeta constants, Haar volumes, the Haar integral and the assembled
//! intersection multiplicities.

mod integral;

pub use integral::{haar_integral, haar_integral_with, CellRecord, IntegralOptions, IntegralResult};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::LtDatum;
use crate::levels::{check_primitive, gl2_order, unit_indices_with, CongruenceSubgroup};
use crate::padic::{pow_p, Val};

/// `(1 - q^{-k})^{-1}`.
pub fn zeta_q(q: u64, k: u32) -> BigRational {
    assert!(q >= 2 && k >= 1, "zeta_q needs q >= 2, k >= 1");
    let qk = BigInt::from(q).pow(k);
    BigRational::new(qk.clone(), qk - 1)
}

fn ratio(n: u128, d: u128) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaConstants {
    pub q: u64,
    pub e: u32,
    pub zeta_f1: BigRational,
    pub zeta_f2: BigRational,
    pub zeta_e1: BigRational,
}

impl ZetaConstants {
    pub fn new(ext: &crate::padic::QuadExtDesc) -> Self {
        ZetaConstants {
            q: ext.q(),
            e: ext.e(),
            zeta_f1: zeta_q(ext.q(), 1),
            zeta_f2: zeta_q(ext.q(), 2),
            zeta_e1: zeta_q(ext.q_e(), 1),
        }
    }

    fn q2n(&self, n: u32) -> BigRational {
        pow_p(self.q, 2 * n as i64)
    }

    pub fn d_n(&self, n: u32) -> BigRational {
        self.q2n(n)
    }

    pub fn d_e_n(&self, n: u32) -> BigRational {
        int(self.e as u128) / &self.zeta_e1 * self.q2n(n)
    }

    pub fn d_ig_n(&self, n: u32) -> BigRational {
        self.q2n(n) / &self.zeta_f1
    }

    /// `ζ_E(1) / (e ζ_F(2))`.
    pub fn multiplicity_factor(&self) -> BigRational {
        &self.zeta_e1 / (int(self.e as u128) * &self.zeta_f2)
    }
}

/// `vol(U) = |H| / |GL₂(Z/p^m)|`, with `vol(GL₂(O_F)) = 1`.
pub fn haar_volume(u: &CongruenceSubgroup) -> BigRational {
    ratio(u.order() as u128, gl2_order(u.p(), u.depth()))
}

/// `q^s · |λ₁θ₁ + λ₂θ₂|_E^{-1}`.
pub fn fg_multiplicity(d: &LtDatum, row: [i64; 2]) -> Result<BigRational> {
    let ext = d.ext();
    check_primitive(row, ext.p())?;
    let (t1, t2) = d.theta();
    let x = &t1.scale(&crate::padic::int(row[0])) + &t2.scale(&crate::padic::int(row[1]));
    match ext.val_norm(&x) {
        Val::Fin(v) => Ok(pow_p(ext.q(), d.conductor() as i64 + v)),
        Val::Inf => Err(Error::DegenerateColumn),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    Corollary,
    TheoremB,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Corollary => "corollary",
            Variant::TheoremB => "theorem_b",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corollary" => Ok(Variant::Corollary),
            "theorem_b" | "theorem-b" => Ok(Variant::TheoremB),
            _ => Err(Error::Parse(format!("unknown variant {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityReport {
    pub m: BigRational,
    /// `ζ_E(1) / (e ζ_F(2))`.
    pub zeta: BigRational,
    pub i_e: u64,
    pub i_f: u64,
    pub e: u32,
    pub q_pow_s: u128,
    pub vol_u: BigRational,
    pub integral: IntegralResult,
    /// Only for the Theorem B variant.
    pub residue_degree: Option<u32>,
    /// `m / m_corollary`; only for the Theorem B variant.
    pub ratio_to_corollary: Option<BigRational>,
    pub integer: bool,
    pub variant: Variant,
}

impl MultiplicityReport {
    /// The product of the recorded factors; always equals `m`.
    pub fn factor_product(&self) -> BigRational {
        let lead = match self.variant {
            Variant::Corollary => int(self.e as u128 * self.i_e as u128),
            Variant::TheoremB => int(self.residue_degree.unwrap_or(1) as u128 * self.i_e as u128),
        };
        lead * &self.zeta * int(self.i_f as u128) * int(self.q_pow_s) * &self.integral.value
    }
}

fn assemble(
    d: &LtDatum,
    integral: IntegralResult,
    u: &CongruenceSubgroup,
    opts: &IntegralOptions,
    variant: Variant,
    residue_degree: Option<u32>,
) -> MultiplicityReport {
    let consts = ZetaConstants::new(d.ext());
    let (i_e, i_f) = unit_indices_with(d, u, opts.exec);
    let q_pow_s = (d.ext().q() as u128).pow(d.conductor());
    let mut r = MultiplicityReport {
        m: BigRational::zero(),
        zeta: consts.multiplicity_factor(),
        i_e,
        i_f,
        e: d.ext().e(),
        q_pow_s,
        vol_u: haar_volume(u),
        integral,
        residue_degree,
        ratio_to_corollary: None,
        integer: false,
        variant,
    };
    r.m = r.factor_product();
    r.integer = r.m.is_integer();
    r
}

/// `ζ_E(1)/(eζ_F(2)) · (e·I_E) · I_F · q^s · ∫_U |λgδτ|_E^{-1} dg`.
pub fn intersection_corollary(d: &LtDatum, row: [i64; 2], u: &CongruenceSubgroup) -> Result<MultiplicityReport> {
    intersection_corollary_with(d, row, u, &IntegralOptions::default())
}

pub fn intersection_corollary_with(
    d: &LtDatum,
    row: [i64; 2],
    u: &CongruenceSubgroup,
    opts: &IntegralOptions,
) -> Result<MultiplicityReport> {
    let integral = haar_integral_with(d, row, u, opts)?;
    Ok(assemble(d, integral, u, opts, Variant::Corollary, None))
}

/// `f · I_E · I_F · ζ_E(1)/(eζ_F(2)) · q^s · ∫`, `f` the residue degree.
pub fn intersection_theorem_b(
    d: &LtDatum,
    row: [i64; 2],
    u: &CongruenceSubgroup,
    residue_degree: u32,
) -> Result<MultiplicityReport> {
    intersection_theorem_b_with(d, row, u, residue_degree, &IntegralOptions::default())
}

pub fn intersection_theorem_b_with(
    d: &LtDatum,
    row: [i64; 2],
    u: &CongruenceSubgroup,
    residue_degree: u32,
    opts: &IntegralOptions,
) -> Result<MultiplicityReport> {
    if residue_degree == 0 {
        return Err(Error::Parse("residue degree must be at least 1".into()));
    }
    let integral = haar_integral_with(d, row, u, opts)?;
    let mut r = assemble(d, integral, u, opts, Variant::TheoremB, Some(residue_degree));
    r.ratio_to_corollary = Some(ratio(residue_degree as u128, r.e as u128));
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiCanonicalDegree {
    pub value: BigRational,
    /// Set for `s = 0`, outside the quasi-canonical range.
    pub flagged: bool,
}

/// `m_s = ζ_F(1) ζ_E(1)^{-1} e q^s`.
pub fn quasicanonical_degree(ext: &crate::padic::QuadExtDesc, s: u32) -> QuasiCanonicalDegree {
    let c = ZetaConstants::new(ext);
    let value = &c.zeta_f1 / &c.zeta_e1 * int(c.e as u128) * int((c.q as u128).pow(s));
    if s >= 1 {
        debug_assert!(value.is_integer());
    }
    QuasiCanonicalDegree { value, flagged: s == 0 }
}

/// `e · I_E`.
pub fn total_fiber_multiplicity(d: &LtDatum, u: &CongruenceSubgroup) -> u64 {
    total_fiber_multiplicity_with(d, u, crate::exec::Exec::default())
}

pub fn total_fiber_multiplicity_with(d: &LtDatum, u: &CongruenceSubgroup, exec: crate::exec::Exec) -> u64 {
    d.ext().e() as u64 * unit_indices_with(d, u, exec).0
}

/// Closed form `vol(U_n) = ζ_F(1)ζ_F(2)q^{-4n}` of the principal congruence
/// subgroup.
pub fn principal_volume(q: u64, n: u32) -> BigRational {
    if n == 0 {
        return BigRational::one();
    }
    zeta_q(q, 1) * zeta_q(q, 2) * pow_p(q, -4 * n as i64)
}
