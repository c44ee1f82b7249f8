//! Spin form of a QUBO under `x = (1 + s) / 2`.
//!
//! Convention: `E(s) = offset + sum_i h_i s_i + sum_{i<j} J_ij s_i s_j` with
//! `s_i` in `{-1, +1}`. Flipping the signs of `h` and `J` gives the
//! `-sum h s - sum J s s` convention used on annealing hardware.

use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use super::model::QuboModel;
use super::QuboError;

/// Exact rational with denominator 4, stored as its numerator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Quarter(pub i64);

impl Quarter {
    pub const ZERO: Quarter = Quarter(0);

    pub fn from_int(v: i64) -> Self {
        Quarter(4 * v)
    }

    pub fn to_f64(self) -> f64 {
        self.0 as f64 / 4.0
    }

    /// The integer value, if this is one.
    pub fn to_int(self) -> Option<i64> {
        (self.0 % 4 == 0).then_some(self.0 / 4)
    }
}

impl Add for Quarter {
    type Output = Quarter;
    fn add(self, rhs: Quarter) -> Quarter {
        Quarter(self.0 + rhs.0)
    }
}

impl AddAssign for Quarter {
    fn add_assign(&mut self, rhs: Quarter) {
        self.0 += rhs.0;
    }
}

impl Sub for Quarter {
    type Output = Quarter;
    fn sub(self, rhs: Quarter) -> Quarter {
        Quarter(self.0 - rhs.0)
    }
}

impl Neg for Quarter {
    type Output = Quarter;
    fn neg(self) -> Quarter {
        Quarter(-self.0)
    }
}

impl Mul<i64> for Quarter {
    type Output = Quarter;
    fn mul(self, rhs: i64) -> Quarter {
        Quarter(self.0 * rhs)
    }
}

impl fmt::Display for Quarter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let a = self.0.unsigned_abs();
        match a % 4 {
            0 => write!(f, "{sign}{}", a / 4),
            1 => write!(f, "{sign}{}.25", a / 4),
            2 => write!(f, "{sign}{}.5", a / 4),
            _ => write!(f, "{sign}{}.75", a / 4),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsingModel {
    pub num_vars: usize,
    pub h: BTreeMap<usize, Quarter>,
    pub j: BTreeMap<(usize, usize), Quarter>,
    pub offset: Quarter,
}

fn bump<K: Ord>(map: &mut BTreeMap<K, Quarter>, key: K, c: Quarter) {
    let e = map.entry(key).or_default();
    *e += c;
}

impl IsingModel {
    /// Energy for spins in `{-1, +1}`.
    pub fn energy(&self, spins: &[i8]) -> Quarter {
        assert_eq!(spins.len(), self.num_vars, "assignment length mismatch");
        let mut e = self.offset;
        for (&i, &h) in &self.h {
            e += h * spins[i] as i64;
        }
        for (&(i, j), &c) in &self.j {
            e += c * (spins[i] as i64 * spins[j] as i64);
        }
        e
    }
}

/// Spin `s = 2x - 1` for each bit.
pub fn spins_of(x: &[bool]) -> alloc::vec::Vec<i8> {
    x.iter().map(|&b| if b { 1 } else { -1 }).collect()
}

/// `a x = a/2 + (a/2) s` and `b x_i x_j = b/4 (1 + s_i + s_j + s_i s_j)`.
pub fn to_ising(model: &QuboModel) -> IsingModel {
    let mut h = BTreeMap::new();
    let mut j = BTreeMap::new();
    let mut offset = Quarter::from_int(model.offset());
    for (&i, &a) in model.linear() {
        // a/2 in quarters is 2a
        bump(&mut h, i, Quarter(2 * a));
        offset += Quarter(2 * a);
    }
    for (&(i, k), &b) in model.quadratic() {
        bump(&mut j, (i, k), Quarter(b));
        bump(&mut h, i, Quarter(b));
        bump(&mut h, k, Quarter(b));
        offset += Quarter(b);
    }
    h.retain(|_, v| *v != Quarter::ZERO);
    j.retain(|_, v| *v != Quarter::ZERO);
    IsingModel {
        num_vars: model.num_vars(),
        h,
        j,
        offset,
    }
}

/// Inverse map with `s = 2x - 1`. Fails when a resulting QUBO coefficient
/// is not an integer.
pub fn to_qubo(im: &IsingModel) -> Result<QuboModel, QuboError> {
    let mut linear: BTreeMap<usize, Quarter> = BTreeMap::new();
    let mut quadratic = BTreeMap::new();
    let mut offset = im.offset;
    // h s = 2h x - h
    for (&i, &h) in &im.h {
        bump(&mut linear, i, h * 2);
        offset = offset - h;
    }
    // J s_i s_j = 4J x_i x_j - 2J x_i - 2J x_j + J
    for (&(i, k), &c) in &im.j {
        if i == k {
            return Err(QuboError::IsingSelfCoupling(i));
        }
        quadratic.insert((i.min(k), i.max(k)), c * 4);
        bump(&mut linear, i, -(c * 2));
        bump(&mut linear, k, -(c * 2));
        offset += c;
    }
    let int = |q: Quarter| q.to_int().ok_or(QuboError::NonIntegral);
    let linear = linear
        .into_iter()
        .map(|(i, q)| int(q).map(|c| (i, c)))
        .collect::<Result<alloc::vec::Vec<_>, _>>()?;
    let quadratic = quadratic
        .into_iter()
        .map(|(p, q)| int(q).map(|c| (p, c)))
        .collect::<Result<alloc::vec::Vec<_>, _>>()?;
    Ok(QuboModel::from_coefficients(
        im.num_vars,
        linear,
        quadratic,
        int(offset)?,
    ))
}
