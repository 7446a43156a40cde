use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sk::SkNet;
use super::{sector_distances, InjectionWeave, Metric, Provenance};
use crate::anyon::{Chirality, ModelConstants};
use crate::braid::BraidWord;

/// Net size used when a library does not say otherwise.
pub const DEFAULT_NET_MAX_LENGTH: usize = 24;

const REVALIDATION_TOL: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum LibraryError {
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed library: {0}")]
    Format(#[from] serde_json::Error),
    #[error("unsupported model {0:?} (only \"fibonacci\")")]
    Model(String),
    #[error("record {index} ({word}): {reason}")]
    Record { index: usize, word: String, reason: String },
}

#[derive(Serialize, Deserialize)]
struct RecordFile {
    word: Vec<i32>,
    warp_start: usize,
    warp_end: usize,
    length: usize,
    distance_2d: f64,
    distance_full: f64,
    metric: Metric,
    generator: Provenance,
}

#[derive(Serialize, Deserialize)]
struct LibraryFile {
    model: String,
    chirality: Chirality,
    generator: Provenance,
    tool_version: String,
    net_max_length: usize,
    records: Vec<RecordFile>,
}

/// Injection weaves for one model, sorted by `distance_full`, then length,
/// then word. The refinement net is rebuilt on demand from
/// `net_max_length` rather than stored.
#[derive(Debug)]
pub struct InjectionLibrary {
    pub chirality: Chirality,
    pub net_max_length: usize,
    records: Vec<InjectionWeave>,
    net: OnceLock<SkNet>,
    // refinements already run, keyed by the bits of the requested bound
    refined: Mutex<HashMap<u64, InjectionWeave>>,
}

impl Clone for InjectionLibrary {
    fn clone(&self) -> Self {
        InjectionLibrary {
            chirality: self.chirality,
            net_max_length: self.net_max_length,
            records: self.records.clone(),
            net: OnceLock::new(),
            refined: Mutex::default(),
        }
    }
}

impl PartialEq for InjectionLibrary {
    fn eq(&self, other: &Self) -> bool {
        self.chirality == other.chirality
            && self.net_max_length == other.net_max_length
            && self.records == other.records
    }
}

fn order_key(r: &InjectionWeave) -> (f64, usize, Vec<i32>) {
    (r.distance_full, r.len(), r.word.to_signed())
}

impl InjectionLibrary {
    pub fn new(chirality: Chirality) -> Self {
        InjectionLibrary {
            chirality,
            net_max_length: DEFAULT_NET_MAX_LENGTH,
            records: Vec::new(),
            net: OnceLock::new(),
            refined: Mutex::default(),
        }
    }

    pub fn model(&self) -> ModelConstants<f64> {
        ModelConstants::fibonacci(self.chirality)
    }

    pub fn records(&self) -> &[InjectionWeave] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Adds a record unless the same word is already present. Returns
    /// whether it was added.
    pub fn insert(&mut self, record: InjectionWeave) -> bool {
        if self.records.iter().any(|r| r.word == record.word) {
            return false;
        }
        let key = order_key(&record);
        let at = self
            .records
            .partition_point(|r| order_key(r).partial_cmp(&key) == Some(std::cmp::Ordering::Less));
        self.records.insert(at, record);
        true
    }

    pub fn net(&self) -> &SkNet {
        self.net
            .get_or_init(|| SkNet::build(&self.model(), self.net_max_length))
    }

    pub(crate) fn cached_refinement(&self, bound: f64) -> Option<InjectionWeave> {
        self.refined.lock().expect("cache lock").get(&bound.to_bits()).cloned()
    }

    pub(crate) fn cache_refinement(&self, bound: f64, injection: &InjectionWeave) {
        self.refined
            .lock()
            .expect("cache lock")
            .insert(bound.to_bits(), injection.clone());
    }

    /// `brute_force` unless some record came from refinement.
    pub fn generator(&self) -> Provenance {
        if self.records.iter().any(|r| r.source == Provenance::Sk) {
            Provenance::Sk
        } else {
            Provenance::BruteForce
        }
    }

    /// Pretty JSON with a trailing newline; stable field order.
    pub fn to_json(&self) -> String {
        let file = LibraryFile {
            model: "fibonacci".into(),
            chirality: self.chirality,
            generator: self.generator(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            net_max_length: self.net_max_length,
            records: self
                .records
                .iter()
                .map(|r| RecordFile {
                    word: r.word.to_signed(),
                    warp_start: r.warp_start,
                    warp_end: r.warp_end,
                    length: r.len(),
                    distance_2d: r.distance_2d,
                    distance_full: r.distance_full,
                    metric: r.metric,
                    generator: r.source,
                })
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&file).expect("library serializes");
        s.push('\n');
        s
    }

    /// Parses and re-validates every record against the representation.
    pub fn from_json(text: &str) -> Result<Self, LibraryError> {
        let file: LibraryFile = serde_json::from_str(text)?;
        if file.model != "fibonacci" {
            return Err(LibraryError::Model(file.model));
        }
        let model = ModelConstants::fibonacci(file.chirality);
        let mut lib = InjectionLibrary::new(file.chirality);
        lib.net_max_length = file.net_max_length;
        for (index, rec) in file.records.into_iter().enumerate() {
            let word_text = format!("{:?}", rec.word);
            let fail = |reason: String| LibraryError::Record {
                index,
                word: word_text.clone(),
                reason,
            };
            let word = BraidWord::from_signed(3, &rec.word).map_err(|e| fail(e.to_string()))?;
            if rec.length != word.len() {
                return Err(fail(format!("length {} but word has {}", rec.length, word.len())));
            }
            let endpoints_ok = matches!((rec.warp_start, rec.warp_end), (1, 3) | (3, 1))
                && word.is_weave(rec.warp_start)
                && word.warp_trace(rec.warp_start).map(|t| t.end()) == Ok(rec.warp_end);
            if !endpoints_ok {
                return Err(fail(format!(
                    "not a weave from {} to {}",
                    rec.warp_start, rec.warp_end
                )));
            }
            let (d2, full) = sector_distances(&model, &word).map_err(|e| fail(e.to_string()))?;
            for (name, stored, actual) in [("distance_2d", rec.distance_2d, d2), ("distance_full", rec.distance_full, full)] {
                if !((stored - actual).abs() <= REVALIDATION_TOL) {
                    return Err(fail(format!("{name} {stored:e} but word gives {actual:e}")));
                }
            }
            lib.records.push(InjectionWeave {
                word,
                warp_start: rec.warp_start,
                warp_end: rec.warp_end,
                distance_2d: rec.distance_2d,
                distance_full: rec.distance_full,
                metric: rec.metric,
                source: rec.generator,
            });
        }
        lib.records.sort_by(|a, b| order_key(a).partial_cmp(&order_key(b)).expect("finite distances"));
        Ok(lib)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), LibraryError> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|source| LibraryError::Io {
            path: path.display().to_string(),
            source,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LibraryError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| LibraryError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }
}
