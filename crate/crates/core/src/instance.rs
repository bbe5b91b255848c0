//! JSON instance files: a ring with an optional presented module, and/or an
//! ordinal.
//!
//! ```json
//! {"ring": {"kind": "zmod", "n": 12}, "module": {"generators": 1, "relations": [[2]]}}
//! {"ring": {"kind": "zloc", "primes": [2, 3]}, "module": {"generators": 0, "relations": []}}
//! {"ring": {"kind": "table", "elements": ["0", "1"], "add": [[0, 1], [1, 0]], "mul": [[0, 0], [0, 1]]}, ...}
//! {"ordinal": "w+1"}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::module::Presentation;
use crate::ordinal::Ordinal;
use crate::ring::table::TableRing;
use crate::ring::RingInstance;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum RingSpec {
    Zmod {
        n: u64,
    },
    Zloc {
        primes: Vec<u64>,
    },
    Table {
        elements: Vec<String>,
        add: Vec<Vec<usize>>,
        mul: Vec<Vec<usize>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub generators: usize,
    #[serde(default)]
    pub relations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ring: Option<RingSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub module: Option<ModuleSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ordinal: Option<Ordinal>,
}

/// A validated instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceFile {
    pub ring: Option<RingInstance>,
    pub module: Option<Presentation>,
    pub ordinal: Option<Ordinal>,
}

impl RingSpec {
    pub fn build(&self) -> Result<RingInstance> {
        match self {
            RingSpec::Zmod { n } => RingInstance::zmod(*n),
            RingSpec::Zloc { primes } => RingInstance::zloc(primes),
            RingSpec::Table { elements, add, mul } => Ok(RingInstance::table(TableRing::new(
                elements.clone(),
                add.clone(),
                mul.clone(),
            )?)),
        }
    }

    pub fn of(ring: &RingInstance) -> Self {
        match ring {
            RingInstance::ZMod { n } => RingSpec::Zmod { n: *n },
            RingInstance::ZLoc { primes } => RingSpec::Zloc {
                primes: primes.clone(),
            },
            RingInstance::Table(t) => RingSpec::Table {
                elements: t.labels().to_vec(),
                add: t.add_table().to_vec(),
                mul: t.mul_table().to_vec(),
            },
        }
    }
}

impl InstanceFile {
    pub fn module(m: Presentation) -> Self {
        InstanceFile {
            ring: Some(m.ring().clone()),
            module: Some(m),
            ordinal: None,
        }
    }

    pub fn ordinal(alpha: Ordinal) -> Self {
        InstanceFile {
            ring: None,
            module: None,
            ordinal: Some(alpha),
        }
    }

    pub fn from_spec(spec: &InstanceSpec) -> Result<Self> {
        let ring = spec.ring.as_ref().map(RingSpec::build).transpose()?;
        if spec.module.is_none() && spec.ordinal.is_none() {
            return Err(Error::MalformedInstance(
                "instance needs a module or an ordinal".into(),
            ));
        }
        let module = match (&spec.module, &ring) {
            (Some(m), Some(r)) => Some(Presentation::new(
                r.clone(),
                m.generators,
                m.relations.clone(),
            )?),
            (Some(_), None) => {
                return Err(Error::MalformedInstance(
                    "module given without a ring".into(),
                ))
            }
            (None, _) => None,
        };
        Ok(InstanceFile {
            ring,
            module,
            ordinal: spec.ordinal,
        })
    }

    pub fn to_spec(&self) -> InstanceSpec {
        InstanceSpec {
            ring: self.ring.as_ref().map(RingSpec::of),
            module: self.module.as_ref().map(|m| ModuleSpec {
                generators: m.generators(),
                relations: m.relations().to_vec(),
            }),
            ordinal: self.ordinal,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_spec()).expect("instance specs serialize")
    }
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let spec: InstanceSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    InstanceFile::from_spec(&spec)
}
