//! Serde adapters writing integers as decimal strings.

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serializer};

fn parse(s: &str) -> Result<i64, String> {
    s.trim()
        .parse::<i64>()
        .map_err(|e| format!("bad integer {s:?}: {e}"))
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[i64], ser: S) -> Result<S::Ok, S::Error> {
        ser.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<i64>, D::Error> {
        let raw = Vec::<String>::deserialize(de)?;
        raw.iter().map(|s| parse(s).map_err(D::Error::custom)).collect()
    }
}

pub mod opt_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &Option<Vec<i64>>, ser: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => super::vec::serialize(v, ser),
            None => ser.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Option<Vec<i64>>, D::Error> {
        let raw = Option::<Vec<String>>::deserialize(de)?;
        match raw {
            None => Ok(None),
            Some(raw) => raw
                .iter()
                .map(|s| parse(s).map_err(D::Error::custom))
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }
}
