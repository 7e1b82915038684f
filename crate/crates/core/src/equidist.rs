//! Conductor families in a fixed basin and the proximity exponents
//! `t_λ = m_λ / MT` of their CM points to each component.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::intersect::{
    intersection_corollary_with, quasicanonical_degree, total_fiber_multiplicity_with, IntegralOptions,
};
use crate::lattice::{make_datum, LtDatum, Mat2};
use crate::levels::{basin_class, components_with, in_basin_at, CongruenceSubgroup, LambdaClass};
use crate::padic::{pow_p, QuadExtDesc};

/// `τ_s = g₀ ∘ diag(1, p^{-s})` for `s_min ≤ s ≤ s_max`.
#[derive(Debug, Clone)]
pub struct FamilySpec {
    pub ext: QuadExtDesc,
    pub level: CongruenceSubgroup,
    pub s_min: u32,
    pub s_max: u32,
    /// Must lie in `GL₂(Z_p)`.
    pub g0: Option<Mat2>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityEntry {
    pub class: LambdaClass,
    pub m: BigRational,
    /// `t_λ = m_λ / MT`; the seminorm value is `q^{-t_λ}`.
    pub exponent: BigRational,
    pub in_basin: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProximityProfile {
    pub s: u32,
    pub mt: u64,
    pub basin: LambdaClass,
    /// In component order.
    pub entries: Vec<ProximityEntry>,
}

impl ProximityProfile {
    /// The class with the largest exponent; ties go to the first class.
    pub fn argmax(&self) -> &LambdaClass {
        let mut best = &self.entries[0];
        for e in &self.entries[1..] {
            if e.exponent > best.exponent {
                best = e;
            }
        }
        &best.class
    }

    pub fn basin_entry(&self) -> &ProximityEntry {
        self.entries.iter().find(|e| e.in_basin).expect("one class is the basin")
    }

    /// `Σ_λ m_λ`, reported as a diagnostic only.
    pub fn m_sum(&self) -> BigRational {
        self.entries.iter().fold(BigRational::zero(), |a, e| a + &e.m)
    }
}

/// A component whose basin membership at level `n` differs from the
/// membership at `n(U)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasinLevelDisagreement {
    pub s: u32,
    pub n: u32,
    pub class: LambdaClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdicts {
    /// Every non-basin exponent sequence is strictly decreasing.
    pub non_basin_decreasing: bool,
    /// The basin exponents are positive and non-decreasing.
    pub basin_bounded_below: bool,
    pub basin_infimum: BigRational,
    /// Least `s₀` such that the argmax class is the basin class for all
    /// `s ≥ s₀` in the range.
    pub argmax_from: Option<u32>,
    pub basin_level_disagreements: Vec<BasinLevelDisagreement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceReport {
    pub profiles: Vec<ProximityProfile>,
    pub verdicts: Verdicts,
}

fn family_member(spec: &FamilySpec, s: u32) -> Result<LtDatum> {
    let p = spec.ext.p();
    let mut m = Mat2::diag(crate::padic::int(1), pow_p(p, -(s as i64)));
    if let Some(g0) = &spec.g0 {
        m = g0.mul(&m);
    }
    let d = make_datum(&m, &spec.ext)?;
    if d.conductor() != s {
        return Err(Error::InvalidLevel(format!(
            "family member for s = {s} has conductor {}",
            d.conductor()
        )));
    }
    Ok(d)
}

fn check_spec(spec: &FamilySpec) -> Result<()> {
    if spec.level.p() != spec.ext.p() {
        return Err(Error::InvalidLevel("level and extension use different primes".into()));
    }
    if let Some(g0) = &spec.g0 {
        let p = spec.ext.p();
        if !g0.is_integral(p) || crate::padic::val_f(&g0.det(), p) != crate::padic::Val::Fin(0) {
            return Err(Error::InvalidLevel(format!("g0 = {g0} is not in GL2(Z_p)")));
        }
    }
    let n = spec.level.level_n();
    if spec.s_min > spec.s_max {
        return Err(Error::Parse(format!("empty conductor range {}..{}", spec.s_min, spec.s_max)));
    }
    if spec.s_min < n.max(1) {
        return Err(Error::ConductorTooSmall { n: n.max(1), s: spec.s_min });
    }
    Ok(())
}

/// The family data in conductor order. Their basin class is checked to be
/// constant.
pub fn family_generate(spec: &FamilySpec) -> Result<Vec<LtDatum>> {
    check_spec(spec)?;
    let data: Vec<LtDatum> = (spec.s_min..=spec.s_max)
        .map(|s| family_member(spec, s))
        .collect::<Result<_>>()?;
    let first = basin_class(&data[0], &spec.level)?;
    for d in &data[1..] {
        let b = basin_class(d, &spec.level)?;
        if b != first {
            return Err(Error::InvalidLevel(format!(
                "basin class changes along the family: {first} at s = {}, {b} at s = {}",
                spec.s_min,
                d.conductor()
            )));
        }
    }
    Ok(data)
}

pub fn proximity_profile(d: &LtDatum, u: &CongruenceSubgroup) -> Result<ProximityProfile> {
    proximity_profile_with(d, u, Exec::default())
}

pub fn proximity_profile_with(d: &LtDatum, u: &CongruenceSubgroup, exec: Exec) -> Result<ProximityProfile> {
    let s = d.conductor();
    if s < u.level_n() {
        return Err(Error::ConductorTooSmall { n: u.level_n(), s });
    }
    let basin = basin_class(d, u)?;
    let mt = total_fiber_multiplicity_with(d, u, exec);
    let opts = IntegralOptions { exec, ..Default::default() };
    let classes = components_with(u, exec);
    let ms = exec::map_collect(exec, &classes, |c| intersection_corollary_with(d, c.row(), u, &opts));
    let mt_q = BigRational::from_integer(mt.into());
    let mut entries = Vec::with_capacity(classes.len());
    for (class, m) in classes.into_iter().zip(ms) {
        let m = m?.m;
        let exponent = &m / &mt_q;
        let in_basin = class == basin;
        entries.push(ProximityEntry { class, m, exponent, in_basin });
    }
    Ok(ProximityProfile { s, mt, basin, entries })
}

/// Components whose membership at some `n(U) ≤ n ≤ s` disagrees with the
/// membership at `n(U)`.
pub fn basin_level_disagreements(d: &LtDatum, u: &CongruenceSubgroup) -> Result<Vec<BasinLevelDisagreement>> {
    let s = d.conductor();
    let base = u.level_n();
    let mut out = Vec::new();
    for class in components_with(u, Exec::Sequential) {
        let reference = in_basin_at(d, class.row(), u, base)?;
        for n in (base + 1)..=s {
            if in_basin_at(d, class.row(), u, n)? != reference {
                out.push(BasinLevelDisagreement { s, n, class: class.clone() });
            }
        }
    }
    Ok(out)
}

pub fn convergence_report(spec: &FamilySpec) -> Result<ConvergenceReport> {
    convergence_report_with(spec, Exec::default())
}

pub fn convergence_report_with(spec: &FamilySpec, exec: Exec) -> Result<ConvergenceReport> {
    let data = family_generate(spec)?;
    let profiles: Vec<ProximityProfile> = exec::map_collect(exec, &data, |d| proximity_profile_with(d, &spec.level, exec))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut disagreements = Vec::new();
    for d in &data {
        disagreements.extend(basin_level_disagreements(d, &spec.level)?);
    }

    let n_classes = profiles[0].entries.len();
    let non_basin_decreasing = (0..n_classes).all(|i| {
        profiles[0].entries[i].in_basin
            || profiles.windows(2).all(|w| w[1].entries[i].exponent < w[0].entries[i].exponent)
    });
    let basin: Vec<&BigRational> = profiles.iter().map(|p| &p.basin_entry().exponent).collect();
    let basin_infimum = basin.iter().copied().min().cloned().unwrap_or_else(BigRational::one);
    let basin_bounded_below =
        basin_infimum > BigRational::zero() && basin.windows(2).all(|w| w[1] >= w[0]);
    let mut argmax_from = None;
    for p in profiles.iter().rev() {
        if p.argmax() != &p.basin {
            break;
        }
        argmax_from = Some(p.s);
    }
    Ok(ConvergenceReport {
        profiles,
        verdicts: Verdicts {
            non_basin_decreasing,
            basin_bounded_below,
            basin_infimum,
            argmax_from,
            basin_level_disagreements: disagreements,
        },
    })
}

/// `1 / m_s`: the CM point lies on the circle `|u| = |ϖ|^{1/m_s}`.
pub fn gross_radius_exponent(ext: &QuadExtDesc, s: u32) -> Result<BigRational> {
    if s == 0 {
        return Err(Error::ConductorTooSmall { n: 1, s });
    }
    Ok(quasicanonical_degree(ext, s).value.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levels::{subgroup_build, LevelSpec};
    use crate::padic::{int, rat, ExtKind};

    fn e3u() -> QuadExtDesc {
        QuadExtDesc::new(3, ExtKind::Unramified, int(-1)).unwrap()
    }

    fn family(spec: LevelSpec, s_max: u32, g0: Option<Mat2>) -> FamilySpec {
        FamilySpec { ext: e3u(), level: subgroup_build(&spec, 3).unwrap(), s_min: 1, s_max, g0 }
    }

    #[test]
    fn family_examples() {
        let data = family_generate(&family(LevelSpec::Principal(1), 3, None)).unwrap();
        assert_eq!(data.iter().map(|d| d.conductor()).collect::<Vec<_>>(), [1, 2, 3]);
        let u = subgroup_build(&LevelSpec::Principal(1), 3).unwrap();
        for d in &data {
            assert_eq!(basin_class(d, &u).unwrap().to_string(), "[1:0]");
            assert_eq!(&make_datum(d.m_tau(), d.ext()).unwrap(), d);
        }
        let mut bad = family(LevelSpec::Principal(2), 3, None);
        assert!(matches!(family_generate(&bad), Err(Error::ConductorTooSmall { .. })));
        bad.s_min = 2;
        bad.g0 = Some(Mat2::from_ints(3, 0, 0, 1));
        assert!(matches!(family_generate(&bad), Err(Error::InvalidLevel(_))));
    }

    #[test]
    fn profile_examples() {
        let d = |s| family_member(&family(LevelSpec::Full, s, None), s).unwrap();
        let full = subgroup_build(&LevelSpec::Full, 3).unwrap();
        let pf = proximity_profile(&d(1), &full).unwrap();
        assert_eq!(pf.entries.len(), 1);
        assert_eq!(pf.entries[0].exponent, int(1));

        let p1 = subgroup_build(&LevelSpec::Principal(1), 3).unwrap();
        let p = proximity_profile(&d(1), &p1).unwrap();
        assert_eq!(p.mt, 24);
        for entry in &p.entries {
            let want = if entry.in_basin { rat(1, 8) } else { rat(1, 72) };
            assert_eq!(entry.exponent, want, "{}", entry.class);
        }
        let p = proximity_profile(&d(2), &p1).unwrap();
        for entry in &p.entries {
            let want = if entry.in_basin { rat(11, 72) } else { rat(1, 216) };
            assert_eq!(entry.exponent, want);
        }
        assert_eq!(p.basin_entry().class.to_string(), "[1:0]");
        assert_eq!(p.m_sum(), int(12));
    }

    #[test]
    fn convergence_examples() {
        let rep = convergence_report(&family(LevelSpec::Principal(1), 4, None)).unwrap();
        let non_basin: Vec<BigRational> = rep
            .profiles
            .iter()
            .map(|p| p.entries.iter().find(|e| !e.in_basin).unwrap().exponent.clone())
            .collect();
        assert_eq!(non_basin[..3], [rat(1, 72), rat(1, 216), rat(1, 648)]);
        let basin_m: Vec<BigRational> = rep.profiles.iter().map(|p| p.basin_entry().m.clone()).collect();
        assert_eq!(basin_m[..3], [int(3), int(11), int(35)]);
        let v = &rep.verdicts;
        assert!(v.non_basin_decreasing && v.basin_bounded_below);
        assert_eq!(v.basin_infimum, rat(1, 8));
        assert_eq!(v.argmax_from, Some(1));
        assert!(v.basin_level_disagreements.is_empty());

        let full = convergence_report(&family(LevelSpec::Full, 3, None)).unwrap();
        assert!(full.profiles.iter().all(|p| p.entries[0].exponent == int(1)));
    }

    #[test]
    fn relabeling_and_twisting() {
        // A g₀ in U moves the basin but not the multiset of exponents.
        let base = convergence_report(&family(LevelSpec::Iwahori(1), 3, None)).unwrap();
        let moved = convergence_report(&family(LevelSpec::Iwahori(1), 3, Some(Mat2::from_ints(1, 1, 0, 1)))).unwrap();
        for (a, b) in base.profiles.iter().zip(&moved.profiles) {
            assert_eq!(a.basin, b.basin);
            assert_eq!(a.entries, b.entries);
        }
        let sequential = convergence_report_with(&family(LevelSpec::Iwahori(1), 3, None), Exec::Sequential).unwrap();
        assert_eq!(sequential, base);
    }

    #[test]
    fn gross_radius_examples() {
        let er = QuadExtDesc::new(3, ExtKind::Ramified, int(3)).unwrap();
        assert_eq!(gross_radius_exponent(&e3u(), 1).unwrap(), rat(1, 4));
        assert_eq!(gross_radius_exponent(&e3u(), 2).unwrap(), rat(1, 12));
        assert_eq!(gross_radius_exponent(&er, 1).unwrap(), rat(1, 6));
        for ext in [e3u(), er] {
            for s in 1..6 {
                let a = gross_radius_exponent(&ext, s).unwrap();
                let b = gross_radius_exponent(&ext, s + 1).unwrap();
                assert_eq!(b / a, rat(1, 3));
            }
        }
        assert!(gross_radius_exponent(&e3u(), 0).is_err());
    }
}
