//! Corpus CSV ingestion, result records and the on-disk result cache.

use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::algebra::{AlgebraKind, ConwayAlgebra};
use crate::diagram::{braid_to_diagram, parse_braid, parse_pd, Diagram, DiagramError};
use crate::laurent::{JsonTerm, LaurentPoly};

/// Bumped whenever value text or term ordering changes; older cache entries
/// are ignored.
pub const ENGINE_VERSION: &str = concat!("conway-skein ", env!("CARGO_PKG_VERSION"), " terms-v1");

pub const BUNDLED_CORPUS: &str = include_str!("../data/corpus.csv");

const HEADER: [&str; 5] = ["name", "crossings", "components", "writhe", "pd"];

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("bad header: expected `name,crossings,components,writhe,pd` (optionally followed by `source`), found `{0}`")]
    Header(String),
    #[error("{}", format_rows(.0))]
    Rows(Vec<RowError>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub row: u64,
    pub message: String,
}

fn format_rows(rows: &[RowError]) -> String {
    rows.iter().map(|r| format!("row {}: {}", r.row, r.message)).collect::<Vec<_>>().join("\n")
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub crossings: usize,
    pub components: usize,
    pub writhe: i32,
    pub pd: String,
    pub source: Option<String>,
    pub diagram: Diagram,
}

/// Parses PD text or a `braid(...)` word.
pub fn parse_input(text: &str) -> Result<Diagram, DiagramError> {
    if text.trim_start().starts_with("braid") {
        braid_to_diagram(&parse_braid(text)?)
    } else {
        parse_pd(text)
    }
}

pub fn load_catalog(path: &Path) -> Result<Vec<CorpusEntry>, CatalogError> {
    let text = fs::read_to_string(path).map_err(|source| CatalogError::Io { path: path.display().to_string(), source })?;
    parse_catalog(&text)
}

pub fn bundled_catalog() -> Vec<CorpusEntry> {
    parse_catalog(BUNDLED_CORPUS).expect("bundled corpus is valid")
}

/// Validates every row; any invalid row rejects the whole file, with all
/// failures reported by row number (the header is row 1).
pub fn parse_catalog(text: &str) -> Result<Vec<CorpusEntry>, CatalogError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| CatalogError::Header(e.to_string()))?.clone();
    if header.is_empty() || (header.len() == 1 && header[0].is_empty()) {
        return Ok(Vec::new());
    }
    let names: Vec<&str> = header.iter().map(str::trim).collect();
    let ok = names.len() >= 5 && names[..5] == HEADER && (names.len() == 5 || (names.len() == 6 && names[5] == "source"));
    if !ok {
        return Err(CatalogError::Header(names.join(",")));
    }
    let mut entries = Vec::new();
    let mut errors = Vec::new();
    for record in reader.records() {
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let row = e.position().map_or(0, |p| p.line());
                errors.push(RowError { row, message: e.to_string() });
                continue;
            }
        };
        let row = record.position().map_or(0, |p| p.line());
        match parse_row(&record, names.len()) {
            Ok(entry) => entries.push(entry),
            Err(message) => errors.push(RowError { row, message }),
        }
    }
    if errors.is_empty() {
        Ok(entries)
    } else {
        Err(CatalogError::Rows(errors))
    }
}

fn parse_row(record: &csv::StringRecord, width: usize) -> Result<CorpusEntry, String> {
    if record.len() != width {
        return Err(format!("expected {width} fields, found {}", record.len()));
    }
    let field = |i: usize| record[i].trim();
    let name = field(0).to_string();
    if name.is_empty() {
        return Err("empty name".into());
    }
    let int = |i: usize| -> Result<i64, String> {
        field(i).parse().map_err(|_| format!("{} `{}` is not an integer", HEADER[i], field(i)))
    };
    let (crossings, components, writhe) = (int(1)?, int(2)?, int(3)?);
    let pd = field(4).to_string();
    let diagram = parse_input(&pd).map_err(|e| format!("{name}: {e}"))?;
    let actual = (diagram.num_crossings() as i64, diagram.num_components() as i64, diagram.writhe() as i64);
    if actual != (crossings, components, writhe) {
        return Err(format!(
            "{name}: columns say crossings={crossings} components={components} writhe={writhe}, diagram has {}/{}/{}",
            actual.0, actual.1, actual.2
        ));
    }
    Ok(CorpusEntry {
        name,
        crossings: crossings as usize,
        components: components as usize,
        writhe: writhe as i32,
        pd,
        source: (width == 6).then(|| field(5).to_string()),
        diagram,
    })
}

pub fn find_entry<'a>(entries: &'a [CorpusEntry], name: &str) -> Option<&'a CorpusEntry> {
    entries.iter().find(|e| e.name == name)
}

/// One evaluated diagram, as stored in the cache and printed by `--json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub engine: String,
    pub input: String,
    pub algebra: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    pub value: String,
    pub terms: Vec<JsonTerm>,
}

impl ResultRecord {
    pub fn new(d: &Diagram, alg: &ConwayAlgebra, value: &LaurentPoly) -> Self {
        let k = match alg.kind() {
            AlgebraKind::NonlinearK(k) => Some(k),
            AlgebraKind::Linear => None,
        };
        ResultRecord {
            engine: ENGINE_VERSION.to_string(),
            input: d.canonical_encode(),
            algebra: alg.name().to_string(),
            k,
            value: alg.to_formal(value).unwrap_or_else(|_| value.to_text()),
            terms: value.to_json_terms(),
        }
    }

    /// The stored polynomial (for nonlinear algebras, the k-th power).
    pub fn stored_value(&self, alg: &ConwayAlgebra) -> Option<LaurentPoly> {
        LaurentPoly::from_json_terms(alg.vars(), &self.terms).ok()
    }
}

pub fn cache_key(canonical: &str, alg: &ConwayAlgebra) -> String {
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    h.update(b"\n");
    h.update(alg.label().as_bytes());
    hex::encode(h.finalize())
}

/// Directory of `<key>.json` result records.
#[derive(Debug, Clone)]
pub struct ResultCache {
    dir: PathBuf,
}

impl ResultCache {
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(ResultCache { dir: dir.to_path_buf() })
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A record for this key written by the current engine, if present.
    pub fn get(&self, key: &str) -> Option<ResultRecord> {
        let mut text = String::new();
        fs::File::open(self.path(key)).ok()?.read_to_string(&mut text).ok()?;
        let rec: ResultRecord = serde_json::from_str(&text).ok()?;
        (rec.engine == ENGINE_VERSION).then_some(rec)
    }

    /// Writes through a temporary file so concurrent readers never see a
    /// partial record.
    pub fn put(&self, key: &str, rec: &ResultRecord) -> io::Result<()> {
        let tmp = self.dir.join(format!("{key}.json.tmp{}", std::process::id()));
        let text = serde_json::to_string_pretty(rec).map_err(io::Error::other)?;
        fs::write(&tmp, text)?;
        fs::rename(&tmp, self.path(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;

    #[test]
    fn bundled_corpus_validates() {
        let entries = bundled_catalog();
        for name in ["unknot", "T2", "T3", "hopf+", "hopf-", "trefoil+", "trefoil-", "figure8", "7_7"] {
            assert!(find_entry(&entries, name).is_some(), "{name}");
        }
        assert!(entries.iter().any(|e| e.components == 3 && e.crossings == 6));
    }

    #[test]
    fn header_only_is_empty() {
        assert!(parse_catalog("name,crossings,components,writhe,pd\n").unwrap().is_empty());
        assert!(parse_catalog("").unwrap().is_empty());
    }

    #[test]
    fn bad_rows_are_reported_by_number() {
        let text = "name,crossings,components,writhe,pd\n\
                    ok,0,1,0,PD[]+O^1\n\
                    once,3,1,-3,\"PD[X[1,4,2,5],X[3,6,4,1],X[5,2,6,7]]\"\n\
                    wrong,0,2,0,PD[]+O^1\n";
        match parse_catalog(text) {
            Err(CatalogError::Rows(rows)) => {
                assert_eq!(rows.len(), 2);
                assert_eq!(rows[0].row, 3);
                assert!(rows[0].message.contains("appears 1 time"), "{}", rows[0].message);
                assert_eq!(rows[1].row, 4);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_header() {
        assert!(matches!(parse_catalog("name,pd\nx,PD[]+O^1\n"), Err(CatalogError::Header(_))));
    }

    #[test]
    fn braid_rows_are_accepted() {
        let text = "name,crossings,components,writhe,pd\nt,3,1,3,braid(2; 1 1 1)\n";
        assert_eq!(parse_catalog(text).unwrap()[0].diagram.writhe(), 3);
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ResultCache::open(dir.path()).unwrap();
        let alg = make_algebra("homflypt", None).unwrap();
        let d = parse_input("braid(2; 1 1 1)").unwrap();
        let v = crate::skein::evaluate(&d, &alg).unwrap();
        let rec = ResultRecord::new(&d, &alg, &v);
        let key = cache_key(&rec.input, &alg);
        assert!(cache.get(&key).is_none());
        cache.put(&key, &rec).unwrap();
        let back = cache.get(&key).unwrap();
        assert_eq!(back, rec);
        assert_eq!(back.stored_value(&alg).unwrap(), v);
        assert_ne!(key, cache_key(&rec.input, &make_algebra("gen-homflypt", None).unwrap()));
    }
}
