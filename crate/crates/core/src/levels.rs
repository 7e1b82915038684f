//! Compact open subgroups `U ⊆ GL₂(O_F)`, the component classes `P¹(F)/U`,
//! the truncated lines `L_n(τ)`, `L_n(λ)`, and the basin classifier.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::lattice::{psi_matrix, LtDatum};
use crate::padic::{inv_mod_u64, mul_mod, pow_p, reduce_mod, QuadElem};

/// Largest explicit subgroup we are willing to store.
pub const MAX_SUBGROUP_ORDER: usize = 10_000_000;

/// An element `[a, b, c, d]` (row-major) of `GL₂(Z/p^m)`.
pub type Gl2Elem = [u64; 4];

pub(crate) fn gl2_mul(x: &Gl2Elem, y: &Gl2Elem, m: u64) -> Gl2Elem {
    let f = |a: u64, b: u64, c: u64, d: u64| (mul_mod(a, b, m) + mul_mod(c, d, m)) % m;
    [
        f(x[0], y[0], x[1], y[2]),
        f(x[0], y[1], x[1], y[3]),
        f(x[2], y[0], x[3], y[2]),
        f(x[2], y[1], x[3], y[3]),
    ]
}

pub(crate) fn gl2_det(x: &Gl2Elem, m: u64) -> u64 {
    (mul_mod(x[0], x[3], m) + m - mul_mod(x[1], x[2], m)) % m
}

/// `|GL₂(Z/p^m)| = p^{4(m-1)} (p²-1)(p²-p)` for `m ≥ 1`.
pub fn gl2_order(p: u64, m: u32) -> u128 {
    if m == 0 {
        return 1;
    }
    let p = p as u128;
    p.pow(4 * (m - 1)) * (p * p - 1) * (p * p - p)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LevelSpec {
    Full,
    Principal(u32),
    Iwahori(u32),
    Custom { depth: u32, generators: Vec<[i64; 4]> },
}

impl LevelSpec {
    /// `full`, `principal:n`, `iwahori:m`, `custom:m:a,b,c,d;...`.
    pub fn parse(s: &str) -> Result<LevelSpec> {
        let bad = |why: &str| Error::Parse(format!("level {s:?}: {why}"));
        let parse_depth = |t: &str| t.trim().parse::<u32>().map_err(|_| bad("bad depth"));
        let mut parts = s.splitn(3, ':');
        let head = parts.next().unwrap_or("");
        let spec = match head {
            "full" => LevelSpec::Full,
            "principal" => LevelSpec::Principal(parse_depth(parts.next().ok_or_else(|| bad("missing n"))?)?),
            "iwahori" => LevelSpec::Iwahori(parse_depth(parts.next().ok_or_else(|| bad("missing m"))?)?),
            "custom" => {
                let depth = parse_depth(parts.next().ok_or_else(|| bad("missing m"))?)?;
                let gens = parts.next().ok_or_else(|| bad("missing generators"))?;
                let mut generators = Vec::new();
                for g in gens.split(';').filter(|g| !g.trim().is_empty()) {
                    let entries: Vec<i64> = g
                        .split(',')
                        .map(|x| x.trim().parse::<i64>().map_err(|_| bad("bad generator entry")))
                        .collect::<Result<_>>()?;
                    let arr: [i64; 4] = entries.try_into().map_err(|_| bad("generator needs 4 entries"))?;
                    generators.push(arr);
                }
                LevelSpec::Custom { depth, generators }
            }
            _ => return Err(bad("unknown family")),
        };
        if parts.next().is_some() && !matches!(spec, LevelSpec::Custom { .. }) {
            return Err(bad("trailing fields"));
        }
        Ok(spec)
    }
}

impl fmt::Display for LevelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LevelSpec::Full => write!(f, "full"),
            LevelSpec::Principal(n) => write!(f, "principal:{n}"),
            LevelSpec::Iwahori(m) => write!(f, "iwahori:{m}"),
            LevelSpec::Custom { depth, generators } => {
                let gens: Vec<String> = generators
                    .iter()
                    .map(|g| format!("{},{},{},{}", g[0], g[1], g[2], g[3]))
                    .collect();
                write!(f, "custom:{depth}:{}", gens.join(";"))
            }
        }
    }
}

/// `U` = full preimage in `GL₂(O_F)` of an explicit subgroup `H ⊆ GL₂(Z/p^m)`.
#[derive(Debug, Clone)]
pub struct CongruenceSubgroup {
    p: u64,
    depth: u32,
    modulus: u64,
    spec: LevelSpec,
    /// Sorted.
    elements: Vec<Gl2Elem>,
    level_n: u32,
    /// `H mod p^n` for `n = level_n`, sorted.
    reduced: Vec<Gl2Elem>,
}

impl CongruenceSubgroup {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// The depth `m` at which `H` is stored. The full group is stored at
    /// depth 1.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn spec(&self) -> &LevelSpec {
        &self.spec
    }

    pub fn elements(&self) -> &[Gl2Elem] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// `[GL₂(O_F) : U]`.
    pub fn index(&self) -> u128 {
        gl2_order(self.p, self.depth) / self.elements.len() as u128
    }

    /// The minimal `n` with `U_n ⊆ U`.
    pub fn level_n(&self) -> u32 {
        self.level_n
    }

    pub fn contains(&self, g: &Gl2Elem) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// `H mod p^n` with `n = level_n()`.
    pub fn reduced_elements(&self) -> &[Gl2Elem] {
        &self.reduced
    }

    /// Integer matrices reduced into `GL₂(Z/p^m)`; checks membership.
    pub fn contains_int(&self, g: &[i64; 4]) -> bool {
        self.contains(&reduce_int_matrix(g, self.modulus))
    }
}

pub(crate) fn reduce_int_matrix(g: &[i64; 4], m: u64) -> Gl2Elem {
    let r = |x: i64| x.rem_euclid(m as i64) as u64;
    [r(g[0]), r(g[1]), r(g[2]), r(g[3])]
}

fn reduce_elem(g: &Gl2Elem, m: u64) -> Gl2Elem {
    [g[0] % m, g[1] % m, g[2] % m, g[3] % m]
}

fn all_of_gl2(p: u64, modulus: u64, keep: impl Fn(&Gl2Elem) -> bool) -> Vec<Gl2Elem> {
    let mut out = Vec::new();
    for a in 0..modulus {
        for b in 0..modulus {
            for c in 0..modulus {
                for d in 0..modulus {
                    let g = [a, b, c, d];
                    if gl2_det(&g, modulus) % p != 0 && keep(&g) {
                        out.push(g);
                    }
                }
            }
        }
    }
    out
}

fn check_capacity(size: u128) -> Result<()> {
    if size > MAX_SUBGROUP_ORDER as u128 {
        return Err(Error::CapacityExceeded(format!(
            "subgroup of order {size} exceeds the limit {MAX_SUBGROUP_ORDER}"
        )));
    }
    Ok(())
}

pub fn subgroup_build(spec: &LevelSpec, p: u64) -> Result<CongruenceSubgroup> {
    if p < 3 || !crate::padic::is_prime(p) {
        return Err(Error::UnsupportedPrime(p));
    }
    let (depth, elements) = match spec {
        LevelSpec::Full | LevelSpec::Principal(0) | LevelSpec::Iwahori(0) => {
            check_capacity(gl2_order(p, 1))?;
            (1, all_of_gl2(p, p, |_| true))
        }
        LevelSpec::Principal(n) => {
            checked_modulus(p, *n)?;
            (*n, vec![[1, 0, 0, 1]])
        }
        LevelSpec::Iwahori(m) => {
            let modulus = checked_modulus(p, *m)?;
            let unit_count = (modulus - modulus / p) as u128;
            check_capacity(unit_count * unit_count * modulus as u128)?;
            let mut els = Vec::new();
            for a in (0..modulus).filter(|a| a % p != 0) {
                for b in 0..modulus {
                    for d in (0..modulus).filter(|d| d % p != 0) {
                        els.push([a, b, 0, d]);
                    }
                }
            }
            (*m, els)
        }
        LevelSpec::Custom { depth, generators } => {
            if *depth == 0 {
                return Err(Error::InvalidLevel("custom level needs depth >= 1".into()));
            }
            let modulus = checked_modulus(p, *depth)?;
            let gens: Vec<Gl2Elem> = generators.iter().map(|g| reduce_int_matrix(g, modulus)).collect();
            for (g, raw) in gens.iter().zip(generators) {
                if gl2_det(g, modulus) % p == 0 {
                    return Err(Error::NonInvertibleGenerator(format!("{raw:?}")));
                }
            }
            (*depth, closure(&gens, modulus)?)
        }
    };
    let mut elements = elements;
    elements.sort_unstable();
    let modulus = p.pow(depth);
    let level_n = minimal_level(&elements, p, depth);
    let nmod = p.pow(level_n);
    let reduced: BTreeSet<Gl2Elem> = elements.iter().map(|g| reduce_elem(g, nmod)).collect();
    Ok(CongruenceSubgroup {
        p,
        depth,
        modulus,
        spec: spec.clone(),
        elements,
        level_n,
        reduced: reduced.into_iter().collect(),
    })
}

fn checked_modulus(p: u64, m: u32) -> Result<u64> {
    p.checked_pow(m)
        .filter(|&x| x < (1 << 31))
        .ok_or_else(|| Error::CapacityExceeded(format!("modulus {p}^{m} is too large")))
}

fn closure(gens: &[Gl2Elem], modulus: u64) -> Result<Vec<Gl2Elem>> {
    let identity = [1 % modulus, 0, 0, 1 % modulus];
    let mut seen: HashSet<Gl2Elem> = HashSet::from([identity]);
    let mut frontier = vec![identity];
    while let Some(x) = frontier.pop() {
        for g in gens {
            let y = gl2_mul(&x, g, modulus);
            if seen.insert(y) {
                if seen.len() > MAX_SUBGROUP_ORDER {
                    return Err(Error::CapacityExceeded(format!(
                        "generated subgroup exceeds {MAX_SUBGROUP_ORDER} elements"
                    )));
                }
                frontier.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// Minimal `n ≤ m` such that `H` contains the kernel of reduction mod `p^n`,
/// i.e. `|H| = |H mod p^n| · |ker|`.
fn minimal_level(elements: &[Gl2Elem], p: u64, m: u32) -> u32 {
    let total = gl2_order(p, m);
    for n in 0..=m {
        let kernel = total / gl2_order(p, n);
        let nmod = p.pow(n);
        let image: HashSet<Gl2Elem> = elements.iter().map(|g| reduce_elem(g, nmod)).collect();
        if image.len() as u128 * kernel == elements.len() as u128 {
            return n;
        }
    }
    m
}

/// Canonical form of a primitive vector mod `p^k` up to unit scaling: the
/// first unit coordinate is scaled to 1.
pub(crate) fn canonical_point(a: u64, b: u64, p: u64, modulus: u64) -> (u64, u64) {
    if a % p != 0 {
        let inv = inv_mod_u64(a, modulus).expect("unit");
        (1 % modulus, mul_mod(b, inv, modulus))
    } else {
        let inv = inv_mod_u64(b, modulus).expect("primitive vector");
        (mul_mod(a, inv, modulus), 1 % modulus)
    }
}

/// A class `λ ∈ P¹(F)/U`, i.e. an irreducible component of the special fiber.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LambdaClass {
    /// Canonical representative mod `p^m`, the least point of its orbit.
    pub rep: (u64, u64),
    pub depth: u32,
    /// Number of points of `P¹(Z/p^m)` in the orbit.
    pub orbit_size: u64,
}

impl LambdaClass {
    pub fn row(&self) -> [i64; 2] {
        [self.rep.0 as i64, self.rep.1 as i64]
    }
}

impl fmt::Display for LambdaClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.rep.0, self.rep.1)
    }
}

/// Checks that `(a, b)` is primitive over `Z_p`.
pub fn check_primitive(row: [i64; 2], p: u64) -> Result<()> {
    let p = p as i64;
    if row[0].rem_euclid(p) == 0 && row[1].rem_euclid(p) == 0 {
        return Err(Error::NotPrimitive(format!("({}, {})", row[0], row[1])));
    }
    Ok(())
}

/// The orbit of `row` under the right action of `H`, as canonical points.
fn orbit_of(u: &CongruenceSubgroup, row: (u64, u64), exec: Exec) -> Vec<(u64, u64)> {
    let (p, m) = (u.p, u.modulus);
    let pts = exec::map_collect(exec, &u.elements, |h| {
        let a = (mul_mod(row.0, h[0], m) + mul_mod(row.1, h[2], m)) % m;
        let b = (mul_mod(row.0, h[1], m) + mul_mod(row.1, h[3], m)) % m;
        canonical_point(a, b, p, m)
    });
    let set: BTreeSet<(u64, u64)> = pts.into_iter().collect();
    set.into_iter().collect()
}

/// All points of `P¹(Z/p^m)` in canonical form, sorted.
pub fn projective_points(p: u64, modulus: u64) -> Vec<(u64, u64)> {
    let mut pts: Vec<(u64, u64)> = (0..modulus).map(|b| (1 % modulus, b)).collect();
    pts.extend((0..modulus).filter(|a| a % p == 0).map(|a| (a, 1 % modulus)));
    pts.sort_unstable();
    pts
}

/// Orbits of the right `U`-action on `P¹(Z/p^m)`, sorted by representative.
pub fn components(u: &CongruenceSubgroup) -> Vec<LambdaClass> {
    components_with(u, Exec::default())
}

pub fn components_with(u: &CongruenceSubgroup, exec: Exec) -> Vec<LambdaClass> {
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut out = Vec::new();
    for pt in projective_points(u.p, u.modulus) {
        if seen.contains(&pt) {
            continue;
        }
        let orbit = orbit_of(u, pt, exec);
        out.push(LambdaClass { rep: orbit[0], depth: u.depth, orbit_size: orbit.len() as u64 });
        seen.extend(orbit);
    }
    out.sort();
    out
}

/// The component class containing the primitive row `row`.
pub fn class_of(u: &CongruenceSubgroup, row: [i64; 2]) -> Result<LambdaClass> {
    check_primitive(row, u.p)?;
    let m = u.modulus;
    let a = row[0].rem_euclid(m as i64) as u64;
    let b = row[1].rem_euclid(m as i64) as u64;
    let orbit = orbit_of(u, canonical_point(a, b, u.p, m), Exec::Sequential);
    Ok(LambdaClass { rep: orbit[0], depth: u.depth, orbit_size: orbit.len() as u64 })
}

/// A free rank-one direct summand of `(Z/p^n)²`, by its canonical generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedLine {
    pub n: u32,
    pub generator: (u64, u64),
}

impl TruncatedLine {
    /// The image of the line in `(Z/p^k)²`, `k ≤ n`.
    pub fn reduce(&self, k: u32, p: u64) -> TruncatedLine {
        assert!(k <= self.n);
        let m = p.pow(k);
        let (a, b) = (self.generator.0 % m, self.generator.1 % m);
        TruncatedLine { n: k, generator: canonical_point(a, b, p, m) }
    }
}

impl fmt::Display for TruncatedLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span({},{}) mod p^{}", self.generator.0, self.generator.1, self.n)
    }
}

/// `L_n(τ) = ϖ^{s-n}τ(O_E)/O_F² ⊂ (ϖ^{-n}O_F/O_F)²`, identified with a line
/// in `(Z/p^n)²` by multiplying with `ϖ^n`: the column span of `p^s M_τ`
/// modulo `p^n`.
pub fn line_of_tau(d: &LtDatum, n: u32) -> Result<TruncatedLine> {
    if n == 0 {
        return Err(Error::InvalidLevel("line level must be at least 1".into()));
    }
    let s = d.conductor();
    if n > s {
        return Err(Error::ConductorTooSmall { n, s });
    }
    let p = d.ext().p();
    let modulus = p.pow(n);
    let scaled = d.m_tau().scale(&pow_p(p, s as i64));
    for j in 0..2 {
        let col = scaled.col(j);
        let a = reduce_mod(&col[0], p, modulus).expect("p^s tau(O_E) is integral");
        let b = reduce_mod(&col[1], p, modulus).expect("p^s tau(O_E) is integral");
        if a % p != 0 || b % p != 0 {
            return Ok(TruncatedLine { n, generator: canonical_point(a, b, p, modulus) });
        }
    }
    unreachable!("p^s M_tau has a unit elementary divisor")
}

/// `L_n(λ) = Ker[(ϖ^{-n}O/O)² → ϖ^{-n}O/O]`, spanned by `(-b, a)`.
pub fn line_of_lambda(row: [i64; 2], n: u32, p: u64) -> Result<TruncatedLine> {
    check_primitive(row, p)?;
    if n == 0 {
        return Err(Error::InvalidLevel("line level must be at least 1".into()));
    }
    let modulus = p.pow(n);
    let r = |x: i64| x.rem_euclid(modulus as i64) as u64;
    let (a, b) = (r(-row[1]), r(row[0]));
    Ok(TruncatedLine { n, generator: canonical_point(a, b, p, modulus) })
}

fn act_on_line(h: &Gl2Elem, v: (u64, u64), p: u64, m: u64) -> (u64, u64) {
    let a = (mul_mod(h[0], v.0, m) + mul_mod(h[1], v.1, m)) % m;
    let b = (mul_mod(h[2], v.0, m) + mul_mod(h[3], v.1, m)) % m;
    canonical_point(a, b, p, m)
}

/// Whether two lines at level `n` lie in the same `U`-orbit (`U` acting on
/// column vectors from the left).
///
/// For `n > m` the kernel `U_m` moves a line to every lift of its reduction
/// mod `p^m`, so the test is carried out at level `m`.
pub fn same_orbit(u: &CongruenceSubgroup, x: &TruncatedLine, y: &TruncatedLine) -> bool {
    assert_eq!(x.n, y.n);
    if x.n > u.depth {
        let (x, y) = (x.reduce(u.depth, u.p), y.reduce(u.depth, u.p));
        return same_orbit(u, &x, &y);
    }
    let m = u.p.pow(x.n);
    let hs: Vec<Gl2Elem> = if x.n == u.level_n {
        u.reduced.clone()
    } else {
        let set: BTreeSet<Gl2Elem> = u.elements.iter().map(|g| reduce_elem(g, m)).collect();
        set.into_iter().collect()
    };
    hs.iter().any(|h| act_on_line(h, x.generator, u.p, m) == y.generator)
}

/// Basin membership `L_n(τ) = L_n(λ) (mod U)` at `n = n(U)`.
pub fn in_basin(d: &LtDatum, row: [i64; 2], u: &CongruenceSubgroup) -> Result<bool> {
    in_basin_at(d, row, u, u.level_n)
}

/// Basin membership evaluated at an explicit level `n` with `U_n ⊆ U`.
pub fn in_basin_at(d: &LtDatum, row: [i64; 2], u: &CongruenceSubgroup, n: u32) -> Result<bool> {
    check_primitive(row, u.p)?;
    if n < u.level_n {
        return Err(Error::InvalidLevel(format!(
            "U_{n} is not contained in U (need n >= {})",
            u.level_n
        )));
    }
    if n == 0 {
        return Ok(true);
    }
    let s = d.conductor();
    if s < n {
        return Err(Error::ConductorTooSmall { n, s });
    }
    let lt = line_of_tau(d, n)?;
    let ll = line_of_lambda(row, n, u.p)?;
    Ok(same_orbit(u, &lt, &ll))
}

/// The unique component class whose basin contains `d`.
pub fn basin_class(d: &LtDatum, u: &CongruenceSubgroup) -> Result<LambdaClass> {
    let n = u.level_n;
    if n == 0 {
        return class_of(u, [1, 0]);
    }
    let s = d.conductor();
    if s < n {
        return Err(Error::ConductorTooSmall { n, s });
    }
    let v = line_of_tau(d, n)?.generator;
    // λ = (v₂, −v₁) has kernel span(v).
    class_of(u, [v.1 as i64, -(v.0 as i64)])
}

/// Units of `O_E/p^k`: `p^{2k}(1 - q_E^{-1})`.
fn unit_count(d: &LtDatum, k: u32) -> u128 {
    let p = d.ext().p() as u128;
    let total = p.pow(2 * k);
    total - total / d.ext().q_e() as u128
}

/// `(I_E, I_F) = ([O_E^× : ψ_τ⁻¹(U)], [O_F^× : U ∩ O_F^×])`.
///
/// `ψ_τ⁻¹(U)` lies in the order `O_z = O_F + ϖ^s O_E` and contains
/// `1 + p^{m+s}O_E`, so it suffices to count `t = x + p^s y'ω ∈ O_z` with
/// `x, y'` mod `p^m` and `ψ(t) = x + y'·ψ(p^s ω)` in `H`; each such residue
/// lifts to `p^s` residues mod `p^{m+s}`.
pub fn unit_indices(d: &LtDatum, u: &CongruenceSubgroup) -> (u64, u64) {
    unit_indices_with(d, u, Exec::default())
}

pub fn unit_indices_with(d: &LtDatum, u: &CongruenceSubgroup, exec: Exec) -> (u64, u64) {
    let ext = d.ext();
    let p = ext.p();
    let s = d.conductor();
    let m = u.modulus;
    let w = psi_matrix(d, &QuadElem::new(crate::padic::int(0), pow_p(p, s as i64)));
    let w: Vec<u64> = w
        .entries()
        .map(|x| reduce_mod(x, p, m).expect("psi(p^s omega) is integral"))
        .collect();
    let delta = reduce_mod(ext.delta(), p, p).expect("delta integral");
    let is_unit = |x: u64, y: u64| {
        let (x0, y0) = (x % p, y % p);
        (x0 * x0 + p - (delta * y0 * y0) % p) % p != 0
    };
    let count = exec::sum_range(exec, m, |x| {
        (0..m)
            .filter(|&yp| {
                let y = if s == 0 { yp } else { 0 };
                if !is_unit(x, y) {
                    return false;
                }
                let g = [
                    (x + mul_mod(yp, w[0], m)) % m,
                    mul_mod(yp, w[1], m),
                    mul_mod(yp, w[2], m),
                    (x + mul_mod(yp, w[3], m)) % m,
                ];
                u.contains(&g)
            })
            .count() as u64
    });
    let k = u.depth + s;
    let in_c = count as u128 * (p as u128).pow(s);
    let units = unit_count(d, k);
    debug_assert_eq!(units % in_c, 0);
    let i_e = (units / in_c) as u64;

    let scalars = (0..m).filter(|&x| x % p != 0 && u.contains(&[x, 0, 0, x])).count() as u64;
    let i_f = (m - m / p) / scalars;
    (i_e, i_f)
}

/// Representatives of the left cosets `g U'` of `U' ⊆ U`, as matrices mod
/// `p^{m'}` (`m'` the depth of `U'`), sorted.
pub fn coset_reps(u: &CongruenceSubgroup, sub: &CongruenceSubgroup) -> Result<Vec<Gl2Elem>> {
    if u.p != sub.p || sub.depth < u.depth {
        return Err(Error::InvalidLevel(format!("{} is not refined by {}", u.spec, sub.spec)));
    }
    let (m, msub) = (u.modulus, sub.modulus);
    let lift = msub / m;
    let lifts = lift.pow(4) as u128;
    check_capacity(u.elements.len() as u128 * lifts)?;
    let mut reps: BTreeSet<Gl2Elem> = BTreeSet::new();
    let mut covered: HashSet<Gl2Elem> = HashSet::new();
    for h in &u.elements {
        for k in 0..lifts as u64 {
            let x = [k % lift, (k / lift) % lift, (k / lift / lift) % lift, k / lift / lift / lift];
            let g: Gl2Elem = std::array::from_fn(|i| (h[i] + m * x[i]) % msub);
            if covered.contains(&g) {
                continue;
            }
            let coset: Vec<Gl2Elem> = sub.elements.iter().map(|y| gl2_mul(&g, y, msub)).collect();
            if coset.iter().any(|y| !u.contains(&reduce_elem(y, m))) {
                return Err(Error::InvalidLevel(format!("{} is not contained in {}", sub.spec, u.spec)));
            }
            reps.insert(*coset.iter().min().expect("nonempty"));
            covered.extend(coset);
        }
    }
    debug_assert_eq!(covered.len() as u128, u.elements.len() as u128 * lifts);
    Ok(reps.into_iter().collect())
}
