//! Structured pass/fail/inconclusive records with numeric witnesses.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Inconclusive,
    Fail,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Fail => 2,
            Status::Inconclusive => 3,
        }
    }

    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(with = "witness_values")]
    pub witnesses: BTreeMap<String, f64>,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, status: Status, tolerance: f64) -> Self {
        Check { name: name.into(), status, witnesses: BTreeMap::new(), tolerance, note: None }
    }

    pub fn witness(mut self, key: impl Into<String>, value: f64) -> Self {
        self.witnesses.insert(key.into(), value);
        self
    }

    pub fn note(mut self, text: impl Into<String>) -> Self {
        self.note = Some(text.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub title: String,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        VerificationReport { title: title.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    /// Worst status over all checks; an empty report is inconclusive.
    pub fn status(&self) -> Status {
        self.checks.iter().map(|c| c.status).max().unwrap_or(Status::Inconclusive)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// JSON has no NaN or infinity; those witnesses are written as the strings
/// "nan", "inf" and "-inf".
mod witness_values {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    #[serde(untagged)]
    enum Value {
        Num(f64),
        Text(String),
    }

    pub fn serialize<S: Serializer>(map: &BTreeMap<String, f64>, s: S) -> Result<S::Ok, S::Error> {
        let out: BTreeMap<&String, Value> = map
            .iter()
            .map(|(k, &v)| {
                let v = if v.is_finite() {
                    Value::Num(v)
                } else if v.is_nan() {
                    Value::Text("nan".into())
                } else if v > 0.0 {
                    Value::Text("inf".into())
                } else {
                    Value::Text("-inf".into())
                };
                (k, v)
            })
            .collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<String, f64>, D::Error> {
        let raw = BTreeMap::<String, Value>::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                let x = match v {
                    Value::Num(x) => x,
                    Value::Text(t) => match t.as_str() {
                        "nan" => f64::NAN,
                        "inf" => f64::INFINITY,
                        "-inf" => f64::NEG_INFINITY,
                        _ => return Err(serde::de::Error::custom(format!("bad witness value {t:?}"))),
                    },
                };
                Ok((k, x))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_witnesses_round_trip() {
        let c = Check::new("x", Status::Pass, 1.0).witness("a", f64::INFINITY).witness("b", 2.5).witness("c", f64::NAN);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"inf\"") && text.contains("\"nan\""));
        let back: Check = serde_json::from_str(&text).unwrap();
        assert_eq!(back.witnesses["a"], f64::INFINITY);
        assert_eq!(back.witnesses["b"], 2.5);
        assert!(back.witnesses["c"].is_nan());
    }
}
