//! Serialized shapes. Struct field order is the JSON key order.

use std::collections::BTreeMap;

use cmbasin::padic::format_rational;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

pub fn q(x: &BigRational) -> String {
    format_rational(x)
}

/// `[["v", "measure"], ...]` in increasing `v`.
pub fn histogram(h: &BTreeMap<i64, BigRational>) -> Vec<[String; 2]> {
    h.iter().map(|(v, mu)| [v.to_string(), q(mu)]).collect()
}

/// `%.12g`-style rendering.
pub fn sig12(x: &BigRational) -> String {
    format_sig(x.to_f64().unwrap_or(f64::NAN), 12)
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { x.to_string() };
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mant, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..digits as i32).contains(&exp) {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{}{:02}", trim_fraction(mant), if exp < 0 { '-' } else { '+' }, exp.abs())
    }
}

#[derive(Debug, Serialize)]
pub struct Field {
    pub p: u64,
    pub ext: &'static str,
    pub delta: String,
}

#[derive(Debug, Serialize)]
pub struct ConductorOut {
    #[serde(flatten)]
    pub field: Field,
    pub tau: String,
    pub normalized_tau: String,
    pub conductor: u32,
}

#[derive(Debug, Serialize)]
pub struct BasinOut {
    #[serde(flatten)]
    pub field: Field,
    pub tau: String,
    pub level: String,
    pub level_n: u32,
    pub basin: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub in_basin: Option<bool>,
}

#[derive(Debug, Serialize)]
pub struct ComponentOut {
    pub class: String,
    pub orbit_size: u64,
}

#[derive(Debug, Serialize)]
pub struct ComponentsOut {
    pub p: u64,
    pub level: String,
    pub index: String,
    pub level_n: u32,
    pub components: Vec<ComponentOut>,
}

#[derive(Debug, Serialize)]
pub struct Input {
    #[serde(flatten)]
    pub field: Field,
    pub tau: String,
    pub lambda: String,
    pub level: String,
}

#[derive(Debug, Serialize)]
pub struct IntegralOut {
    pub input: Input,
    pub value: String,
    pub depth: u32,
    pub histogram: Vec<[String; 2]>,
    pub certified: bool,
    pub cells: u64,
}

#[derive(Debug, Serialize)]
pub struct Factors {
    pub zeta: String,
    #[serde(rename = "I_E")]
    pub i_e: u64,
    #[serde(rename = "I_F")]
    pub i_f: u64,
    pub e: u32,
    pub q_pow_s: u128,
    pub integral: String,
    #[serde(rename = "vol_U")]
    pub vol_u: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residue_degree: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio_to_corollary: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct IntersectOut {
    pub input: Input,
    pub m: String,
    pub factors: Factors,
    pub integral_histogram: Vec<[String; 2]>,
    pub integral_depth: u32,
    pub integer: bool,
    pub variant: &'static str,
}

#[derive(Debug, Serialize)]
pub struct MsdegreeOut {
    #[serde(flatten)]
    pub field: Field,
    pub s: u32,
    pub m_s: String,
    pub flagged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gross_radius_exponent: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct FamilyOut {
    #[serde(flatten)]
    pub field: Field,
    pub level: String,
    pub s_min: u32,
    pub s_max: u32,
    pub g0: Option<String>,
    pub basin: String,
}

#[derive(Debug, Serialize)]
pub struct EntryOut {
    pub lambda: String,
    pub m: String,
    pub exponent: String,
    pub in_basin: bool,
}

#[derive(Debug, Serialize)]
pub struct ProfileOut {
    pub s: u32,
    #[serde(rename = "MT")]
    pub mt: u64,
    pub basin: String,
    pub argmax: String,
    pub m_sum: String,
    pub entries: Vec<EntryOut>,
}

#[derive(Debug, Serialize)]
pub struct DisagreementOut {
    pub s: u32,
    pub n: u32,
    pub lambda: String,
}

#[derive(Debug, Serialize)]
pub struct VerdictsOut {
    pub non_basin_decreasing: bool,
    pub basin_bounded_below: bool,
    pub basin_infimum: String,
    pub argmax_from: Option<u32>,
    pub basin_level_disagreements: Vec<DisagreementOut>,
}

#[derive(Debug, Serialize)]
pub struct EquidistOut {
    pub family: FamilyOut,
    pub profiles: Vec<ProfileOut>,
    pub verdicts: VerdictsOut,
}

#[derive(Debug, Serialize)]
pub struct ErrorOut<'a> {
    pub error: &'a str,
    pub message: String,
}

pub fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("serializable");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(1.0 / 72.0, 12), "0.0138888888889");
        assert_eq!(format_sig(0.125, 12), "0.125");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(123456.0, 12), "123456");
        assert_eq!(format_sig(1.0 / 3.0 * 1e-7, 12), "3.33333333333e-08");
        assert_eq!(format_sig(2e15, 12), "2e+15");
        assert_eq!(format_sig(0.0, 12), "0");
    }
}
