//! Exact serialization helpers: rationals as "num/den" strings, never floats.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::exactnum::{CycloElem, Rat};

pub fn rat_str(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let d: num_bigint::BigInt = d.trim().parse().ok()?;
            if d == 0.into() {
                return None;
            }
            Some(Rat::new(n.trim().parse().ok()?, d))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

pub fn rat<S: Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rat_str(r))
}

pub fn rats<S: Serializer>(r: &[Rat], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(r.iter().map(rat_str))
}

pub fn opt_rats<S: Serializer>(r: &Option<[Rat; 3]>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(v) => rats(v, s),
        None => s.serialize_none(),
    }
}

pub fn rat_matrix<S: Serializer>(m: &[Vec<Rat>], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(m.iter().map(|row| row.iter().map(rat_str).collect::<Vec<_>>()))
}

impl Serialize for CycloElem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CycloElem", 2)?;
        st.serialize_field("modulus", &self.modulus())?;
        st.serialize_field("coeffs", &self.coeffs().iter().map(rat_str).collect::<Vec<_>>())?;
        st.end()
    }
}
