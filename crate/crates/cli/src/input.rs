//! Input files: exponent-keyed exact coefficients plus optional run options.

use hopf3_core::field::{FieldSpec, PolyField3};
use hopf3_core::fixtures;
use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

/// A malformed input, with its position when known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// Source name.
    pub source: String,
    /// 1-based line and column.
    pub position: Option<(usize, usize)>,
    /// What went wrong.
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.position {
            Some((l, c)) => write!(f, "{}:{l}:{c}: {}", self.source, self.message),
            None => write!(f, "{}: {}", self.source, self.message),
        }
    }
}

impl std::error::Error for Diagnostic {}

/// Coefficients of one component, validated while parsing so that errors
/// carry the position of the offending entry.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Coefficients(pub BTreeMap<String, String>);

impl<'de> Deserialize<'de> for Coefficients {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Coefficients;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a table mapping \"i,j,k\" exponent keys to exact rationals")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Coefficients, A::Error> {
                let mut out = BTreeMap::new();
                while let Some(key) = map.next_key::<String>()? {
                    let value = map.next_value::<Rational>()?.0;
                    let probe = FieldSpec { x: BTreeMap::from([(key.clone(), value.clone())]), ..FieldSpec::default() };
                    if let Err(e) = probe.to_field() {
                        let msg = e.to_string().replace("component 0 does not vanish at the origin", "constant terms are not allowed (the field must vanish at the origin)").replace("invalid input: ", "").replace("component x, ", "").replace("component x: ", "");
                        return Err(de::Error::custom(format!("entry `{key}`: {}", msg.trim_start_matches(&format!("key {key}: ")))));
                    }
                    if out.insert(key.clone(), value).is_some() {
                        return Err(de::Error::custom(format!("duplicate monomial key `{key}`")));
                    }
                }
                Ok(Coefficients(out))
            }
        }
        d.deserialize_map(V)
    }
}

/// An exact rational written as a string (`"-3/8"`, `"0.25"`) or an integer.
struct Rational(String);

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an exact rational as a string (e.g. \"-3/8\") or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                Ok(Rational(v.to_string()))
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational(v.to_string()))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational(v.to_string()))
            }
            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
                Err(E::custom(format!("floating-point coefficient {v} is not exact; write it as a string such as \"1/4\"")))
            }
        }
        d.deserialize_any(V)
    }
}

/// Components of the vector field.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldInput {
    /// `∂x` coefficients.
    #[serde(default)]
    pub x: Coefficients,
    /// `∂y` coefficients.
    #[serde(default)]
    pub y: Coefficients,
    /// `∂z` coefficients.
    #[serde(default)]
    pub z: Coefficients,
}

/// Run options stored alongside the field; command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputOptions {
    /// Normal-form order.
    pub order: Option<u32>,
    /// Blow-up budget.
    pub budget: Option<u32>,
    /// Box margin `ε` (exact rational).
    pub epsilon: Option<String>,
    /// Initial box height `δ` (exact rational).
    pub delta: Option<String>,
    /// Maximal Poincaré jet order `K`.
    pub fix_order: Option<u32>,
    /// Random seed of the numeric lab.
    pub seed: Option<u64>,
    /// Number of numeric seeds.
    pub seeds: Option<usize>,
    /// Radius of the sampling ball.
    pub region: Option<f64>,
}

/// A parsed input file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSpec {
    /// The vector field.
    pub field: FieldInput,
    /// Options.
    #[serde(default)]
    pub options: InputOptions,
}

impl InputSpec {
    /// The field as an exact polynomial vector field.
    pub fn to_field(&self) -> Result<PolyField3, String> {
        let spec = FieldSpec { x: self.field.x.0.clone(), y: self.field.y.0.clone(), z: self.field.z.0.clone() };
        spec.to_field().map_err(|e| e.to_string())
    }

    /// Input spec of a field with rational coefficients.
    pub fn from_field(f: &PolyField3) -> Option<InputSpec> {
        let s = FieldSpec::from_field(f).ok()?;
        Some(InputSpec {
            field: FieldInput { x: Coefficients(s.x), y: Coefficients(s.y), z: Coefficients(s.z) },
            options: InputOptions::default(),
        })
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// Parses TOML input text.
pub fn parse_toml(source: &str, text: &str) -> Result<InputSpec, Diagnostic> {
    toml::from_str(text).map_err(|e| {
        let message = e.message().trim().to_string();
        // Entry errors are reported on the enclosing table; point at the entry instead.
        let position = e.span().map(|span| {
            let entry = message
                .strip_prefix("entry `")
                .and_then(|m| m.split_once('`'))
                .and_then(|(key, _)| text.get(span.start..).and_then(|t| t.find(&format!("\"{key}\""))));
            line_col(text, span.start + entry.unwrap_or(0))
        });
        Diagnostic { source: source.into(), position, message }
    })
}

/// Parses JSON input text.
pub fn parse_json(source: &str, text: &str) -> Result<InputSpec, Diagnostic> {
    serde_json::from_str(text).map_err(|e| {
        let full = e.to_string();
        let message = match full.rfind(" at line ") {
            Some(i) => full[..i].to_string(),
            None => full,
        };
        Diagnostic { source: source.into(), position: (e.line() > 0).then(|| (e.line(), e.column())), message }
    })
}

/// A resolved input: the field, the options and where it came from.
#[derive(Debug, Clone)]
pub struct LoadedInput {
    /// Display name.
    pub source: String,
    /// The field.
    pub field: PolyField3,
    /// Options from the file.
    pub options: InputOptions,
}

/// Loads a TOML (`.toml`) or JSON (`.json`) file, or a built-in fixture by name.
pub fn load(arg: &str) -> Result<LoadedInput, Diagnostic> {
    let path = Path::new(arg);
    if !path.exists() {
        if let Some(field) = fixtures::by_name(arg) {
            return Ok(LoadedInput { source: format!("fixture {arg}"), field, options: InputOptions::default() });
        }
        return Err(Diagnostic {
            source: arg.into(),
            position: None,
            message: format!("no such file, and not a fixture name (fixtures: {})", fixtures::NAMES.join(", ")),
        });
    }
    let text = std::fs::read_to_string(path).map_err(|e| Diagnostic { source: arg.into(), position: None, message: e.to_string() })?;
    let spec = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => parse_json(arg, &text)?,
        _ => parse_toml(arg, &text)?,
    };
    let field = spec.to_field().map_err(|message| Diagnostic { source: arg.into(), position: None, message })?;
    Ok(LoadedInput { source: arg.into(), field, options: spec.options })
}
