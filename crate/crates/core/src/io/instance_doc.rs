//! The JSON instance format.
//!
//! ```json
//! {
//!   "classes": [{"name": "A", "size": 3, "degree": 2}],
//!   "matrix": [[3]]
//! }
//! ```
//!
//! Matrix entries are non-negative integers or the string `"*"`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::instance::{ClassLayout, JdmInstance};
use crate::star::{StarEntry, StarInstance};

/// A parsed instance: plain when no entry is a wildcard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParsedInstance {
    Plain(JdmInstance),
    Star(StarInstance),
}

impl ParsedInstance {
    pub fn layout(&self) -> &Arc<ClassLayout> {
        match self {
            ParsedInstance::Plain(i) => i.layout(),
            ParsedInstance::Star(s) => s.layout(),
        }
    }

    /// The instance as a wildcard instance (plain ones convert losslessly).
    pub fn to_star(&self) -> StarInstance {
        match self {
            ParsedInstance::Plain(i) => StarInstance::from_plain(i),
            ParsedInstance::Star(s) => s.clone(),
        }
    }

    /// The plain instance, or an error naming the first wildcard.
    pub fn into_plain(self) -> Result<JdmInstance> {
        match self {
            ParsedInstance::Plain(i) => Ok(i),
            ParsedInstance::Star(s) => {
                let k = s.class_count();
                let (i, j) = (0..k)
                    .flat_map(|i| (0..k).map(move |j| (i, j)))
                    .find(|&(i, j)| s.is_wildcard(i, j))
                    .unwrap_or((0, 0));
                Err(Error::InvalidInstance(format!(
                    "matrix[{i}][{j}] is a wildcard; this operation needs exact entries"
                )))
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassDoc {
    name: String,
    size: usize,
    degree: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    classes: Vec<ClassDoc>,
    matrix: Vec<Vec<Value>>,
}

fn syntax(err: serde_json::Error) -> Error {
    Error::parse(
        format!("line {}, column {}", err.line(), err.column()),
        err.to_string(),
    )
}

fn entry(value: &Value, i: usize, j: usize) -> Result<StarEntry> {
    let location = || format!("matrix[{i}][{j}]");
    match value {
        Value::String(s) if s == "*" => Ok(StarEntry::Any),
        Value::Number(num) => {
            if let Some(c) = num.as_u64() {
                Ok(StarEntry::Count(c as usize))
            } else if num.as_i64().is_some_and(|x| x < 0) {
                Err(Error::parse(location(), format!("entry {num} is negative")))
            } else {
                Err(Error::parse(location(), format!("entry {num} is not an integer")))
            }
        }
        other => Err(Error::parse(
            location(),
            format!("expected a non-negative integer or \"*\", found {other}"),
        )),
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<ParsedInstance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(syntax)?;
    let k = doc.classes.len();
    if k == 0 {
        return Err(Error::parse("classes", "at least one class is required"));
    }
    for (i, c) in doc.classes.iter().enumerate() {
        if c.size == 0 {
            return Err(Error::parse(format!("classes[{i}].size"), "class size must be positive"));
        }
    }
    if doc.matrix.len() != k {
        return Err(Error::parse(
            "matrix",
            format!("{} rows for {k} classes", doc.matrix.len()),
        ));
    }
    let mut matrix = Vec::with_capacity(k);
    for (i, row) in doc.matrix.iter().enumerate() {
        if row.len() != k {
            return Err(Error::parse(
                format!("matrix[{i}]"),
                format!("{} entries for {k} classes", row.len()),
            ));
        }
        matrix.push(
            row.iter()
                .enumerate()
                .map(|(j, v)| entry(v, i, j))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    for i in 0..k {
        for j in i + 1..k {
            if matrix[i][j] != matrix[j][i] {
                return Err(Error::parse(
                    format!("matrix cells ({i},{j})/({j},{i})"),
                    format!(
                        "matrix is not symmetric: {} vs {}",
                        matrix[i][j], matrix[j][i]
                    ),
                ));
            }
        }
    }
    let names = doc.classes.iter().map(|c| c.name.clone()).collect();
    let sizes = doc.classes.iter().map(|c| c.size).collect();
    let degrees: Vec<usize> = doc.classes.iter().map(|c| c.degree).collect();
    let layout = Arc::new(
        ClassLayout::with_names(names, sizes).map_err(|e| Error::parse("classes", e.to_string()))?,
    );
    let star = StarInstance::from_layout(layout, degrees, matrix)?;
    Ok(match star.to_plain() {
        Some(plain) => ParsedInstance::Plain(plain),
        None => ParsedInstance::Star(star),
    })
}

/// Writes an instance document; [`parse_instance`] reads it back unchanged.
pub fn emit_instance(inst: &ParsedInstance) -> String {
    let star = inst.to_star();
    let layout = star.layout();
    let classes = (0..star.class_count())
        .map(|i| ClassDoc {
            name: layout.name(i).to_string(),
            size: layout.size(i),
            degree: star.degrees()[i],
        })
        .collect();
    let matrix = star
        .matrix()
        .iter()
        .map(|row| {
            row.iter()
                .map(|e| match e {
                    StarEntry::Count(c) => Value::from(*c),
                    StarEntry::Any => Value::from("*"),
                })
                .collect()
        })
        .collect();
    let doc = InstanceDoc { classes, matrix };
    let mut text = serde_json::to_string_pretty(&doc).expect("instance documents serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let text = r#"{"classes":[{"name":"A","size":3,"degree":2}],"matrix":[[3]]}"#;
        match parse_instance(text).unwrap() {
            ParsedInstance::Plain(i) => {
                assert_eq!(i.sizes(), &[3]);
                assert_eq!(i.layout().name(0), "A");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn asymmetry_names_both_cells() {
        let text = r#"{"classes":[{"name":"A","size":2,"degree":1},{"name":"B","size":2,"degree":1}],
                       "matrix":[[1,2],[3,0]]}"#;
        let err = parse_instance(text).unwrap_err().to_string();
        assert!(err.contains("(0,1)") && err.contains("(1,0)"), "{err}");
    }

    #[test]
    fn wildcard_gives_star_instance() {
        let text = r#"{"classes":[{"name":"A","size":2,"degree":1},{"name":"B","size":2,"degree":1}],
                       "matrix":[[0,"*"],["*",0]]}"#;
        let parsed = parse_instance(text).unwrap();
        assert!(matches!(parsed, ParsedInstance::Star(_)));
        assert_eq!(parse_instance(&emit_instance(&parsed)).unwrap(), parsed);
    }

    #[test]
    fn negative_and_syntax_errors_are_located() {
        let neg = r#"{"classes":[{"name":"A","size":3,"degree":2}],"matrix":[[-3]]}"#;
        let err = parse_instance(neg).unwrap_err();
        assert!(matches!(&err, Error::Parse { location, .. } if location == "matrix[0][0]"));
        let broken = "{\"classes\": [\n  {\"name\": \"A\",}\n]}";
        let err = parse_instance(broken).unwrap_err();
        assert!(matches!(&err, Error::Parse { location, .. } if location.starts_with("line 2")));
    }

    #[test]
    fn unknown_fields_rejected() {
        let text = r#"{"classes":[{"name":"A","size":3,"degree":2,"colour":1}],"matrix":[[3]]}"#;
        assert!(parse_instance(text).is_err());
    }
}
