//! JSON formats and fixture lookup.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use strata_cones::classes::{stratum_class, CycleClass, CLASS_COUNT};
use strata_cones::labels::{Label, Stratum};
use strata_cones::lifts::{kv_lift, KvLift};
use strata_cones::linalg::{format_rational, parse_rational, Rational};
use strata_cones::plane::{surface_class, Field, PointConfig};

use crate::CliError;

pub const FIXTURE_ENV: &str = "STRATA_CONES_FIXTURES";

pub fn fixture_dir() -> PathBuf {
    std::env::var_os(FIXTURE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
}

/// An existing file, or `<fixture dir>/<name>.json`.
pub fn resolve(arg: &str) -> Result<PathBuf, CliError> {
    let direct = PathBuf::from(arg);
    if direct.is_file() {
        return Ok(direct);
    }
    let named = fixture_dir().join(format!("{arg}.json"));
    if named.is_file() {
        return Ok(named);
    }
    Err(CliError::Invalid(format!(
        "{arg:?} is neither a file nor a fixture in {}",
        fixture_dir().display()
    )))
}

/// A file read once, so the digest covers exactly what was parsed.
pub struct Input {
    pub name: String,
    pub bytes: Vec<u8>,
}

impl Input {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let bytes = fs::read(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        let name = path
            .file_name()
            .map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned());
        Ok(Input { name, bytes })
    }

    fn json(&self) -> Result<Value, CliError> {
        serde_json::from_slice(&self.bytes).map_err(|e| CliError::Invalid(format!("{}: malformed JSON: {e}", self.name)))
    }
}

#[derive(Serialize, Deserialize)]
struct FieldJson {
    char: u32,
}

/// `{"field": {"char": p}, "points": [[x, y, z], …], "labels": [..]?}`.
/// Coordinates are integers or `"a/b"` strings.
#[derive(Serialize, Deserialize)]
pub struct PointsJson {
    field: FieldJson,
    points: Vec<[Value; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Label>>,
}

fn coordinate(v: &Value) -> Result<Rational, CliError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        other => return Err(CliError::Invalid(format!("coordinate {other} is not an integer or \"a/b\" string"))),
    };
    parse_rational(&text).map_err(CliError::from)
}

impl PointsJson {
    pub fn from_config(c: &PointConfig) -> Self {
        let points = c
            .points()
            .map(|(_, p)| p.coords().clone().map(|x| Value::String(format_rational(&x))))
            .collect();
        PointsJson {
            field: FieldJson {
                char: c.field().characteristic(),
            },
            points,
            labels: Some(c.labels().iter().collect()),
        }
    }

    pub fn to_config(&self) -> Result<PointConfig, CliError> {
        let field = Field::from_characteristic(self.field.char)?;
        let coords = self
            .points
            .iter()
            .map(|p| Ok([coordinate(&p[0])?, coordinate(&p[1])?, coordinate(&p[2])?]))
            .collect::<Result<Vec<_>, CliError>>()?;
        let config = match &self.labels {
            None => PointConfig::new(field, coords)?,
            Some(labels) if labels.len() == coords.len() => {
                PointConfig::labeled(field, labels.iter().copied().zip(coords).collect())?
            }
            Some(labels) => {
                return Err(CliError::Invalid(format!(
                    "{} labels for {} points",
                    labels.len(),
                    coords.len()
                )))
            }
        };
        Ok(config)
    }
}

pub fn points(input: &Input) -> Result<PointConfig, CliError> {
    let parsed: PointsJson = serde_json::from_value(input.json()?)
        .map_err(|e| CliError::Invalid(format!("{}: not a point configuration: {e}", input.name)))?;
    parsed.to_config()
}

/// `{"coords": [420 integers]}`.
#[derive(Serialize, Deserialize)]
pub struct CoordsJson {
    pub coords: Vec<i64>,
}

/// A cone-membership target and where it came from.
pub struct Target {
    pub description: String,
    pub class: CycleClass,
    pub input: Option<Input>,
}

/// `stratum:I,J,K`, `kv:ab,m,ij`, or a class or point file (path or
/// fixture name).
pub fn target(arg: &str) -> Result<Target, CliError> {
    if let Some(s) = arg.strip_prefix("stratum:") {
        let s: Stratum = s.parse()?;
        return Ok(Target {
            description: s.to_string(),
            class: stratum_class(s),
            input: None,
        });
    }
    if let Some(s) = arg.strip_prefix("kv:") {
        let lift: KvLift = s.parse()?;
        return Ok(Target {
            description: format!("σKV_{{{lift}}}"),
            class: kv_lift(lift),
            input: None,
        });
    }
    let input = Input::read(&resolve(arg)?)?;
    let json = input.json()?;
    let class = if json.get("coords").is_some() {
        let parsed: CoordsJson = serde_json::from_value(json)
            .map_err(|e| CliError::Invalid(format!("{}: not a class vector: {e}", input.name)))?;
        if parsed.coords.len() != CLASS_COUNT {
            return Err(CliError::Invalid(format!(
                "{}: {} coordinates, expected {CLASS_COUNT}",
                input.name,
                parsed.coords.len()
            )));
        }
        CycleClass::from_coords(parsed.coords)
    } else if json.get("points").is_some() {
        surface_class(&points(&input)?)?
    } else {
        return Err(CliError::Invalid(format!("{}: expected \"coords\" or \"points\"", input.name)));
    };
    Ok(Target {
        description: input.name.clone(),
        class,
        input: Some(input),
    })
}
