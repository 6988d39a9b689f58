//! Serde helpers: fiber indices are 0-based in memory and 1-based on the wire.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cover::CoverVertex;

fn up(q: usize) -> usize {
    q + 1
}

fn down<E: serde::de::Error>(q: usize) -> Result<usize, E> {
    q.checked_sub(1)
        .ok_or_else(|| E::custom("fiber indices are 1-based"))
}

pub mod one_based {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|&q| up(q)).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        Vec::<usize>::deserialize(d)?.into_iter().map(down).collect()
    }
}

pub mod one_based_pairs {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[[usize; 2]], s: S) -> Result<S::Ok, S::Error> {
        v.iter()
            .map(|&[a, b]| [up(a), up(b)])
            .collect::<Vec<_>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<[usize; 2]>, D::Error> {
        Vec::<[usize; 2]>::deserialize(d)?
            .into_iter()
            .map(|[a, b]| Ok([down(a)?, down(b)?]))
            .collect()
    }
}

impl Serialize for CoverVertex {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.v, up(self.q)].serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoverVertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let [v, q] = <[usize; 2]>::deserialize(d)?;
        Ok(CoverVertex::new(v, down::<D::Error>(q).map_err(D::Error::custom)?))
    }
}
