//! Embedded golden values and oracle cross-checks, run by `cmbasin selftest`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::equidist::{convergence_report_with, gross_radius_exponent, FamilySpec};
use crate::error::Result;
use crate::exec::Exec;
use crate::intersect::{
    haar_integral_with, haar_volume, intersection_corollary_with, intersection_theorem_b_with, quasicanonical_degree,
    total_fiber_multiplicity_with, zeta_q, IntegralOptions,
};
use crate::lattice::{make_datum, LtDatum, Mat2};
use crate::levels::{basin_class, components_with, gl2_order, subgroup_build, unit_indices_with, CongruenceSubgroup, LevelSpec};
use crate::padic::{format_rational, int, pow_p, ExtKind, QuadExtDesc, Val};

/// Deliberate defects used to check that the self-test notices them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// `zeta_q` computes `(1 - q^{-k})^{-1} + 1`.
    ZetaOffByOne,
}

impl std::str::FromStr for Fault {
    type Err = crate::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zeta-off-by-one" => Ok(Fault::ZetaOffByOne),
            _ => Err(crate::Error::Parse(format!("unknown fault {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    pub fn render(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            let _ = write!(out, "{tag}  {:width$}  expected {}", c.name, c.expected);
            if !c.passed() {
                let _ = write!(out, ", got {}", c.actual);
            }
            out.push('\n');
        }
        let ok = self.checks.iter().filter(|c| c.passed()).count();
        let _ = writeln!(out, "{ok}/{} checks passed", self.checks.len());
        out
    }
}

struct Grid {
    exec: Exec,
    fault: Option<Fault>,
    checks: Vec<Check>,
}

impl Grid {
    fn push(&mut self, name: impl Into<String>, expected: impl ToString, actual: Result<String>) {
        let actual = actual.unwrap_or_else(|e| format!("error {}", e.code()));
        self.checks.push(Check { name: name.into(), expected: expected.to_string(), actual });
    }

    fn opts(&self) -> IntegralOptions {
        IntegralOptions { exec: self.exec, ..Default::default() }
    }

    fn zeta(&self, q: u64, k: u32) -> BigRational {
        let z = zeta_q(q, k);
        match self.fault {
            Some(Fault::ZetaOffByOne) => z + int(1),
            None => z,
        }
    }
}

fn ext(p: u64, kind: ExtKind) -> QuadExtDesc {
    QuadExtDesc::standard(p, kind).expect("standard extension")
}

fn diag(e: &QuadExtDesc, s: u32) -> LtDatum {
    make_datum(&Mat2::diag(int(1), pow_p(e.p(), -(s as i64))), e).expect("diagonal datum")
}

fn level(spec: LevelSpec, p: u64) -> CongruenceSubgroup {
    subgroup_build(&spec, p).expect("standard level")
}

fn fmt(x: &BigRational) -> String {
    format_rational(x)
}

/// Integral by enumerating every `g ∈ GL₂(Z/p^D)` over `H`.
fn matrix_enumeration(d: &LtDatum, row: [i64; 2], u: &CongruenceSubgroup, depth: u32) -> BigRational {
    let p = u.p();
    let md = p.pow(depth);
    let m = u.modulus();
    let lam = [row[0].rem_euclid(md as i64) as u64, row[1].rem_euclid(md as i64) as u64];
    let mut tally: BTreeMap<[u64; 2], u64> = BTreeMap::new();
    for a in 0..md {
        for b in 0..md {
            for c in 0..md {
                for e in 0..md {
                    if (a * e + md * md - b * c) % p == 0 || !u.contains(&[a % m, b % m, c % m, e % m]) {
                        continue;
                    }
                    *tally.entry([(lam[0] * a + lam[1] * c) % md, (lam[0] * b + lam[1] * e) % md]).or_insert(0) += 1;
                }
            }
        }
    }
    let (t1, t2) = d.theta();
    let total = BigInt::from(gl2_order(p, depth));
    let mut sum = BigRational::zero();
    for (w, n) in tally {
        let x = &t1.scale(&int(w[0] as i64)) + &t2.scale(&int(w[1] as i64));
        let Val::Fin(v) = d.ext().val_norm(&x) else { unreachable!("θ₁, θ₂ independent") };
        sum += pow_p(p, v) * BigRational::new(BigInt::from(n), total.clone());
    }
    sum
}

pub fn run_selftest(exec: Exec, fault: Option<Fault>) -> SelftestReport {
    let mut g = Grid { exec, fault, checks: Vec::new() };
    let e3 = ext(3, ExtKind::Unramified);
    let e3r = ext(3, ExtKind::Ramified);
    let e5 = ext(5, ExtKind::Unramified);
    let full3 = level(LevelSpec::Full, 3);
    let p1 = level(LevelSpec::Principal(1), 3);

    for (q, k, want) in [(3, 1, "3/2"), (9, 1, "9/8"), (3, 2, "9/8")] {
        let z = g.zeta(q, k);
        g.push(format!("zeta_q({q},{k})"), want, Ok(fmt(&z)));
    }
    for (spec, want) in [(LevelSpec::Full, "1/1"), (LevelSpec::Principal(1), "1/48"), (LevelSpec::Iwahori(1), "1/4")] {
        let v = haar_volume(&level(spec.clone(), 3));
        g.push(format!("vol({spec}) p=3"), want, Ok(fmt(&v)));
    }
    // vol(U_1) against ζ_F(1)ζ_F(2)q^{-4}.
    let closed = g.zeta(3, 1) * g.zeta(3, 2) * pow_p(3, -4);
    g.push("vol(principal:1) closed form", "1/48", Ok(fmt(&closed)));

    g.push("conductor diag(1,1/27)", 3, Ok(diag(&e3, 3).conductor().to_string()));
    let b = basin_class(&diag(&e3, 3), &p1).map(|c| c.to_string());
    g.push("basin diag(1,1/27) principal:1", "[1:0]", b);
    g.push("components principal:1", 4, Ok(components_with(&p1, exec).len().to_string()));
    for (s, want) in [(1, "(24, 2)"), (2, "(72, 2)")] {
        let ui = unit_indices_with(&diag(&e3, s), &p1, exec);
        g.push(format!("unit_indices principal:1 s={s}"), want, Ok(format!("{ui:?}")));
    }

    let integrals = [
        (1, [1, 0], &full3, "1/3"),
        (2, [1, 0], &full3, "1/9"),
        (1, [1, 0], &p1, "1/48"),
        (1, [0, 1], &p1, "1/432"),
    ];
    for (s, row, u, want) in integrals {
        let v = haar_integral_with(&diag(&e3, s), row, u, &g.opts()).map(|r| fmt(&r.value));
        g.push(format!("integral s={s} lambda={row:?} {}", u.spec()), want, v);
    }
    // Cell engine against matrix enumeration.
    for (s, row, u) in [(1, [1, 0], &full3), (1, [0, 1], &p1), (2, [1, 1], &p1)] {
        let d = diag(&e3, s);
        let res = haar_integral_with(&d, row, u, &g.opts()).map(|r| {
            let brute = matrix_enumeration(&d, row, u, r.depth.max(u.depth()));
            (fmt(&brute), fmt(&r.value))
        });
        let (want, got) = match res {
            Ok(pair) => pair,
            Err(e) => ("oracle".into(), format!("error {}", e.code())),
        };
        g.push(format!("oracle integral s={s} lambda={row:?} {}", u.spec()), want, Ok(got));
    }

    // Full-level degree identity.
    for e in [&e3, &e5] {
        let full = level(LevelSpec::Full, e.p());
        for s in 1..=3 {
            let want = fmt(&quasicanonical_degree(e, s).value);
            let m = intersection_corollary_with(&diag(e, s), [1, 0], &full, &g.opts()).map(|r| fmt(&r.m));
            g.push(format!("corollary full p={} s={s}", e.p()), want, m);
        }
    }
    let mult_factor = |gr: &Grid, e: &QuadExtDesc| gr.zeta(e.q_e(), 1) / (int(e.e() as i64) * gr.zeta(e.q(), 2));
    g.push("zeta factor p=3 unramified", "1/1", Ok(fmt(&mult_factor(&g, &e3))));
    g.push("zeta factor p=3 ramified", "2/3", Ok(fmt(&mult_factor(&g, &e3r))));
    for (e, s, want) in [(&e3, 1, "4/1"), (&e3, 2, "12/1"), (&e3r, 1, "6/1")] {
        let c = g.zeta(e.q(), 1) / g.zeta(e.q_e(), 1) * int(e.e() as i64 * e.q().pow(s) as i64);
        g.push(format!("msdegree closed form p=3 {} s={s}", e.kind().as_str()), want, Ok(fmt(&c)));
    }
    // The two formula variants differ by e on the ramified grid.
    for s in 1..=3 {
        let d = diag(&e3r, s);
        let r = intersection_corollary_with(&d, [1, 0], &full3, &g.opts()).and_then(|c| {
            let b = intersection_theorem_b_with(&d, [1, 0], &full3, 1, &g.opts())?;
            Ok(fmt(&(c.m / b.m)))
        });
        g.push(format!("corollary/theorem_b ramified s={s}"), "2/1", r);
    }
    for (u, s, want) in [(&full3, 1, 4), (&p1, 1, 24), (&p1, 2, 72)] {
        g.push(
            format!("total_fiber {} s={s}", u.spec()),
            want,
            Ok(total_fiber_multiplicity_with(&diag(&e3, s), u, exec).to_string()),
        );
    }
    for (e, s, want) in [(&e3, 1, "1/4"), (&e3, 2, "1/12"), (&e3, 3, "1/36"), (&e3r, 1, "1/6")] {
        g.push(
            format!("gross radius p=3 {} s={s}", e.kind().as_str()),
            want,
            gross_radius_exponent(e, s).map(|x| fmt(&x)),
        );
    }

    // Equidistribution along the diagonal family.
    let spec = FamilySpec { ext: e3.clone(), level: p1.clone(), s_min: 1, s_max: 4, g0: None };
    match convergence_report_with(&spec, exec) {
        Ok(rep) => {
            let basin: Vec<String> = rep.profiles.iter().map(|p| fmt(&p.basin_entry().m)).collect();
            g.push("basin m s=1..4", "3/1 11/1 35/1 107/1", Ok(basin.join(" ")));
            let off: Vec<String> = rep
                .profiles
                .iter()
                .map(|p| fmt(&p.entries.iter().find(|e| !e.in_basin).expect("non-basin class").exponent))
                .collect();
            g.push("non-basin exponents s=1..4", "1/72 1/216 1/648 1/1944", Ok(off.join(" ")));
            let v = &rep.verdicts;
            g.push("verdict non-basin decreasing", true, Ok(v.non_basin_decreasing.to_string()));
            g.push("verdict basin bounded below", true, Ok(v.basin_bounded_below.to_string()));
            g.push("verdict argmax from", "Some(1)", Ok(format!("{:?}", v.argmax_from)));
            g.push("basin level disagreements", 0, Ok(v.basin_level_disagreements.len().to_string()));
        }
        Err(e) => g.push("convergence report", "ok", Err(e)),
    }
    SelftestReport { checks: g.checks }
}
