//! Closed-form combinatorial invariants of the eigenspaces H^n(X)_(i).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Params {
    pub n: usize,
    pub m: usize,
    pub r: u32,
    pub i: u32,
}

impl Params {
    pub fn new(n: usize, m: usize, r: u32, i: u32) -> Self {
        Self { n, m, r, i }
    }

    pub fn validate(&self) -> Result<()> {
        let Params { n, m, r, i } = *self;
        if n == 0 {
            return Err(Error::BadParameters("n must be positive".into()));
        }
        if r < 2 {
            return Err(Error::BadParameters(format!("r = {r} must be at least 2")));
        }
        if m % r as usize != 0 {
            return Err(Error::BadParameters(format!("r = {r} does not divide m = {m}")));
        }
        if m < n + 3 {
            return Err(Error::BadParameters(format!("m = {m} < n + 3 = {}", n + 3)));
        }
        if i == 0 || i >= r {
            return Err(Error::BadParameters(format!("i = {i} outside 1..={}", r - 1)));
        }
        Ok(())
    }

    /// k·i with k = m/r.
    pub fn ki(&self) -> usize {
        self.m / self.r as usize * self.i as usize
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(n={}, m={}, r={}, i={})", self.n, self.m, self.r, self.i)
    }
}

/// C(a, b), zero outside 0 ≤ b ≤ a.
pub fn binom(a: i64, b: i64) -> u128 {
    if a < 0 || b < 0 || b > a {
        return 0;
    }
    let b = b.min(a - b);
    (0..b).fold(1u128, |acc, j| acc * (a - j) as u128 / (j + 1) as u128)
}

pub fn signature_formula(p: &Params) -> Result<(u128, u128)> {
    p.validate()?;
    let n = p.n as i64;
    let ki = p.ki() as i64;
    let a = p.m as i64 - ki - 1;
    let b = ki - 1;
    let mut pp = 0;
    let mut qq = 0;
    for j in 0..=n / 2 + 1 {
        pp += binom(a, n - 2 * j) * binom(b, 2 * j);
        qq += binom(a, n - 2 * j - 1) * binom(b, 2 * j + 1);
    }
    Ok((pp, qq))
}

pub fn curve_hodge_numbers(m: usize, r: u32, i: u32) -> Result<(usize, usize)> {
    crate::pham::check_cyclic_params(m, r, i)?;
    let mi = m * i as usize;
    if !mi.is_multiple_of(r as usize) {
        return Err(Error::BadParameters(format!("mi/r = {mi}/{r} not integral")));
    }
    let k = mi / r as usize;
    if k == 0 || m < k + 1 {
        return Err(Error::BadParameters(format!(
            "(m, r, i) = ({m}, {r}, {i}) out of range"
        )));
    }
    Ok((m - k - 1, k - 1))
}

/// Compares the i0-eigenspace of the r-fold cover with the primitive
/// eigenspace of the (r/i0)-fold cover.
pub fn cover_comparison(p: &Params, i0: u32) -> Result<bool> {
    if i0 == 0 || !p.r.is_multiple_of(i0) || p.r / i0 < 2 {
        return Err(Error::BadParameters(format!(
            "i0 = {i0} is not a proper divisor of r = {}",
            p.r
        )));
    }
    let here = signature_formula(&Params { i: i0, ..*p })?;
    let there = signature_formula(&Params {
        r: p.r / i0,
        i: 1,
        ..*p
    })?;
    Ok(here == there)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupLabel {
    Sp(u128),
    SO(u128),
    SU(u128, u128),
    HypothesisNotMet(String),
}

impl GroupLabel {
    pub fn hypothesis_ok(&self) -> bool {
        !matches!(self, GroupLabel::HypothesisNotMet(_))
    }
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Sp(d) => write!(f, "Sp({d})"),
            GroupLabel::SO(d) => write!(f, "SO({d})"),
            GroupLabel::SU(p, q) => write!(f, "SU({p},{q})"),
            GroupLabel::HypothesisNotMet(why) => write!(f, "HYPOTHESIS_NOT_MET({why})"),
        }
    }
}

impl FromStr for GroupLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a group label: {s:?}"));
        let (head, rest) = s.split_once('(').ok_or_else(bad)?;
        let body = rest.strip_suffix(')').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<u128>().map_err(|_| bad());
        match head {
            "Sp" => Ok(GroupLabel::Sp(num(body)?)),
            "SO" => Ok(GroupLabel::SO(num(body)?)),
            "SU" => {
                let (p, q) = body.split_once(',').ok_or_else(bad)?;
                Ok(GroupLabel::SU(num(p)?, num(q)?))
            }
            "HYPOTHESIS_NOT_MET" => Ok(GroupLabel::HypothesisNotMet(body.to_string())),
            _ => Err(bad()),
        }
    }
}

impl Serialize for GroupLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GroupLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub fn expected_group(p: &Params) -> GroupLabel {
    if let Err(e) = p.validate() {
        let why = match e {
            Error::BadParameters(s) => s,
            other => other.to_string(),
        };
        return GroupLabel::HypothesisNotMet(why);
    }
    if 2 * p.i > p.r {
        return GroupLabel::HypothesisNotMet("i > r/2".into());
    }
    if p.m * (p.i as usize) < 2 * p.r as usize {
        return GroupLabel::HypothesisNotMet("mi < 2r".into());
    }
    let (pp, qq) = signature_formula(p).expect("validated");
    if p.r == 2 * p.i {
        if p.n % 2 == 1 {
            GroupLabel::Sp(pp + qq)
        } else {
            GroupLabel::SO(pp + qq)
        }
    } else {
        GroupLabel::SU(pp.max(qq), pp.min(qq))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    pub p: u128,
    pub q: u128,
    pub h10: usize,
    pub h01: usize,
    pub expected_group: GroupLabel,
    pub hypothesis_ok: bool,
}

pub fn invariants_report(p: &Params) -> Result<InvariantsReport> {
    let (pp, qq) = signature_formula(p)?;
    let (h10, h01) = curve_hodge_numbers(p.m, p.r, p.i)?;
    let g = expected_group(p);
    Ok(InvariantsReport {
        p: pp,
        q: qq,
        h10,
        h01,
        hypothesis_ok: g.hypothesis_ok(),
        expected_group: g,
    })
}

/// Every admissible tuple with m ≤ `m_max` and n ≤ `n_max`, in
/// lexicographic order of (n, m, r, i).
pub fn valid_params(n_max: usize, m_max: usize) -> Vec<Params> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        for m in n + 3..=m_max {
            for r in 2..=m as u32 {
                if m % r as usize != 0 {
                    continue;
                }
                for i in 1..r {
                    out.push(Params::new(n, m, r, i));
                }
            }
        }
    }
    out
}
