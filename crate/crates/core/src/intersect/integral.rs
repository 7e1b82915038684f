//! Certified evaluation of `∫_U |λ g δτ|_E^{-1} dg`.
//!
//! The integrand depends on `g` only through the row `w = λg`. Writing
//! `U = ⊔_{h ∈ H} h̃ U_m`, the pushforward of Haar measure on `h̃ U_m` under
//! `g ↦ λg` is uniform on the ball `λh̃ + p^m O_F²` (for `X ∈ M₂(O_F)` Haar
//! distributed, `wX` is Haar distributed on `O_F²` whenever `w` is
//! primitive). So the integral is a sum over balls, and each ball is split
//! into residue cells until the integrand is provably constant on every cell.
//!
//! On the cell `w₀ + p^k O_F²` the integrand argument is
//! `x₀ + p^k (u₁θ₁ + u₂θ₂)`; the perturbation has `v_E ≥ e·k + C` with
//! `C = min v_E(θᵢ)`, so `v_E(x) = v_E(x₀)` on the whole cell as soon as
//! `v_E(x₀) < e·k + C`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::lattice::LtDatum;
use crate::levels::{check_primitive, gl2_order, CongruenceSubgroup, LevelSpec};
use crate::padic::{mul_mod, pow_p, reduce_mod, val_f, ExtKind, FScalar, Val};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IntegralOptions {
    pub exec: Exec,
    /// Enumerate every residue vector down to this depth before adaptive
    /// refinement starts (the flat vector enumeration).
    pub uniform_depth: Option<u32>,
    /// Keep the list of certified cells in the result.
    pub record_cells: bool,
}

/// A certified residue cell `w + p^depth O_F²`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellRecord {
    pub row: [u64; 2],
    pub depth: u32,
    /// Number of `h ∈ H` whose ball contributes this cell.
    pub weight: u64,
    /// `v_F(N(w δτ))` on the cell.
    pub val_norm: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegralResult {
    pub value: BigRational,
    /// Deepest refinement level reached.
    pub depth: u32,
    /// `v_F(N(λgδτ))` → Haar measure of the set where it takes that value.
    pub histogram: BTreeMap<i64, BigRational>,
    pub certified: bool,
    /// Number of certified cells.
    pub cells: u64,
    pub cell_records: Option<Vec<CellRecord>>,
}

impl IntegralResult {
    /// `Σ_v measure(v)·q^v`.
    pub fn value_from_histogram(&self, p: u64) -> BigRational {
        self.histogram
            .iter()
            .map(|(v, mu)| mu * pow_p(p, *v))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn total_measure(&self) -> BigRational {
        self.histogram.values().fold(BigRational::zero(), |a, b| a + b)
    }
}

/// `δτ` reduced to machine integers: `p^c θᵢ = Xᵢ + Yᵢω` with coordinates
/// modulo `p^K`.
#[derive(Debug, Clone)]
pub(crate) struct Integrand {
    p: u64,
    e: i64,
    ramified: bool,
    k_exp: u32,
    modulus: u64,
    xs: [u64; 2],
    ys: [u64; 2],
    shift: i64,
    /// `C = min v_E(θᵢ)`.
    floor: i64,
    pub(crate) depth_cap: u32,
}

impl Integrand {
    pub(crate) fn new(d: &LtDatum) -> Result<Self> {
        let ext = d.ext();
        let p = ext.p();
        let (t1, t2) = d.theta();
        let coords = [&t1.x, &t2.x, &t1.y, &t2.y];
        let min_val = coords
            .iter()
            .filter_map(|x| val_f(x, p).finite())
            .min()
            .expect("θ₁, θ₂ are not both zero");
        let shift = (-min_val).max(0);
        let floor = match (ext.val_e(t1), ext.val_e(t2)) {
            (Val::Fin(a), Val::Fin(b)) => a.min(b),
            (Val::Fin(a), Val::Inf) | (Val::Inf, Val::Fin(a)) => a,
            (Val::Inf, Val::Inf) => return Err(Error::DegenerateColumn),
        };
        let depth_cap = (d.conductor() as i64 + floor.abs() + 4) as u32;
        let k_exp = depth_cap + shift as u32 + 2;
        let modulus = p
            .checked_pow(k_exp)
            .filter(|&m| m < 1 << 62)
            .ok_or_else(|| Error::CapacityExceeded(format!("working modulus {p}^{k_exp}")))?;
        let scale = pow_p(p, shift);
        let red = |x: &FScalar| reduce_mod(&(x * &scale), p, modulus).expect("scaled coordinates are integral");
        Ok(Integrand {
            p,
            e: ext.e() as i64,
            ramified: ext.kind() == ExtKind::Ramified,
            k_exp,
            modulus,
            xs: [red(&t1.x), red(&t2.x)],
            ys: [red(&t1.y), red(&t2.y)],
            shift,
            floor,
            depth_cap,
        })
    }

    fn val_mod(&self, x: u64) -> i64 {
        if x == 0 {
            return self.k_exp as i64;
        }
        crate::padic::val_u64(x, self.p) as i64
    }

    /// `v_E(w δτ)` if it is certified constant on the cell of depth `k`.
    pub(crate) fn certified_val_e(&self, w: [u64; 2], k: u32) -> Option<i64> {
        let m = self.modulus;
        let x = (mul_mod(w[0], self.xs[0], m) + mul_mod(w[1], self.xs[1], m)) % m;
        let y = (mul_mod(w[0], self.ys[0], m) + mul_mod(w[1], self.ys[1], m)) % m;
        let (vx, vy) = (self.val_mod(x), self.val_mod(y));
        let scaled = if self.ramified { (2 * vx).min(2 * vy + 1) } else { vx.min(vy) };
        // Exact only below e·K; the threshold below stays under that bound.
        let threshold = self.e * k as i64 + self.floor;
        let v = scaled - self.e * self.shift;
        debug_assert!(threshold + self.e * self.shift <= self.e * self.k_exp as i64);
        (v < threshold).then_some(v)
    }

    /// `v_F(N(x)) = f·v_E(x)`.
    pub(crate) fn val_norm_from_val_e(&self, v: i64) -> i64 {
        v * (2 / self.e)
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    row: [u64; 2],
    depth: u32,
    weight: u64,
}

/// Starting balls `λh mod p^m` with multiplicities.
fn start_cells(row: [i64; 2], u: &CongruenceSubgroup) -> Vec<Cell> {
    let (p, m, depth) = (u.p(), u.modulus(), u.depth());
    let r = |x: i64| x.rem_euclid(m as i64) as u64;
    let lam = [r(row[0]), r(row[1])];
    match u.spec() {
        LevelSpec::Full | LevelSpec::Principal(0) | LevelSpec::Iwahori(0) => {
            // Depth 1, H = GL₂(F_p): every nonzero vector, each p² - p times.
            let weight = p * p - p;
            let mut cells = Vec::with_capacity((p * p - 1) as usize);
            for a in 0..p {
                for b in 0..p {
                    if a != 0 || b != 0 {
                        cells.push(Cell { row: [a, b], depth, weight });
                    }
                }
            }
            cells
        }
        LevelSpec::Principal(_) => vec![Cell { row: lam, depth, weight: 1 }],
        _ => {
            let mut counts: BTreeMap<[u64; 2], u64> = BTreeMap::new();
            for h in u.elements() {
                let a = (mul_mod(lam[0], h[0], m) + mul_mod(lam[1], h[2], m)) % m;
                let b = (mul_mod(lam[0], h[1], m) + mul_mod(lam[1], h[3], m)) % m;
                *counts.entry([a, b]).or_insert(0) += 1;
            }
            counts
                .into_iter()
                .map(|(row, weight)| Cell { row, depth, weight })
                .collect()
        }
    }
}

fn children(c: &Cell, p: u64, out: &mut Vec<Cell>) {
    let step = p.pow(c.depth);
    for u1 in 0..p {
        for u2 in 0..p {
            out.push(Cell {
                row: [c.row[0] + u1 * step, c.row[1] + u2 * step],
                depth: c.depth + 1,
                weight: c.weight,
            });
        }
    }
}

pub fn haar_integral(d: &LtDatum, row: [i64; 2], u: &CongruenceSubgroup) -> Result<IntegralResult> {
    haar_integral_with(d, row, u, &IntegralOptions::default())
}

pub fn haar_integral_with(
    d: &LtDatum,
    row: [i64; 2],
    u: &CongruenceSubgroup,
    opts: &IntegralOptions,
) -> Result<IntegralResult> {
    let p = u.p();
    if p != d.ext().p() {
        return Err(Error::InvalidLevel(format!("level is for p = {p}, datum for p = {}", d.ext().p())));
    }
    check_primitive(row, p)?;
    let integrand = Integrand::new(d)?;
    let mut frontier = start_cells(row, u);

    if let Some(target) = opts.uniform_depth {
        if target > integrand.depth_cap {
            return Err(Error::CapacityExceeded(format!(
                "uniform depth {target} exceeds the refinement cap {}",
                integrand.depth_cap
            )));
        }
        while frontier.first().is_some_and(|c| c.depth < target) {
            let mut next = Vec::with_capacity(frontier.len() * (p * p) as usize);
            for c in &frontier {
                children(c, p, &mut next);
            }
            frontier = next;
        }
    }

    // (v_F(N), depth) → summed weight.
    let mut tally: BTreeMap<(i64, u32), u128> = BTreeMap::new();
    let mut records = opts.record_cells.then(Vec::new);
    let mut cells = 0u64;
    let mut max_depth = u.depth();
    while !frontier.is_empty() {
        let depth = frontier[0].depth;
        if depth > integrand.depth_cap {
            return Err(Error::NonterminatingCell(depth));
        }
        max_depth = max_depth.max(depth);
        let vals = exec::map_collect(opts.exec, &frontier, |c| {
            debug_assert_eq!(c.depth, depth);
            integrand.certified_val_e(c.row, c.depth)
        });
        let mut next = Vec::new();
        for (c, v) in frontier.iter().zip(vals) {
            match v {
                Some(v) => {
                    let vn = integrand.val_norm_from_val_e(v);
                    *tally.entry((vn, c.depth)).or_insert(0) += c.weight as u128;
                    cells += 1;
                    if let Some(r) = records.as_mut() {
                        r.push(CellRecord { row: c.row, depth: c.depth, weight: c.weight, val_norm: vn });
                    }
                }
                None => children(c, p, &mut next),
            }
        }
        frontier = next;
    }

    let m = u.depth();
    let vol_um = BigRational::new(BigInt::one(), BigInt::from(gl2_order(p, m)));
    let mut histogram: BTreeMap<i64, BigRational> = BTreeMap::new();
    for ((v, k), w) in tally {
        let mass = &vol_um * pow_p(p, -2 * (k - m) as i64) * BigRational::from_integer(BigInt::from(w));
        *histogram.entry(v).or_insert_with(BigRational::zero) += mass;
    }
    let mut result = IntegralResult {
        value: BigRational::zero(),
        depth: max_depth,
        histogram,
        certified: true,
        cells,
        cell_records: records,
    };
    result.value = result.value_from_histogram(p);
    Ok(result)
}
