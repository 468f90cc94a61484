//! Reading and writing instances, graphs and certificates.

mod graph_doc;
mod instance_doc;

pub use graph_doc::{emit_graph, parse_graph, GraphFormat, FORMAT_ENV};
pub use instance_doc::{emit_instance, parse_instance, ParsedInstance};

use serde::{Deserialize, Serialize};

use crate::connected::{evaluate_certificate, Certificate, CertificateEvaluation};
use crate::error::{Error, Result};
use crate::instance::{ClassLayout, JdmInstance};

/// A certificate with classes named; any evaluation alongside is ignored.
#[derive(Deserialize)]
struct CertificateDoc {
    family: Vec<String>,
    groups: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct CertificateOut<'a> {
    family: Vec<&'a str>,
    groups: Vec<Vec<&'a str>>,
    evaluation: &'a CertificateEvaluation,
}

/// Writes `cert` as JSON, naming classes and including the collapsed
/// weighted graph with its verdict.
pub fn emit_certificate(inst: &JdmInstance, cert: &Certificate) -> Result<String> {
    let layout = inst.layout();
    let eval = evaluate_certificate(inst, cert)?;
    let doc = CertificateOut {
        family: cert.family.iter().map(|&c| layout.name(c)).collect(),
        groups: cert
            .groups
            .iter()
            .map(|g| g.iter().map(|&c| layout.name(c)).collect())
            .collect(),
        evaluation: &eval,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("certificates serialize");
    text.push('\n');
    Ok(text)
}

/// Reads a certificate written by [`emit_certificate`]; any evaluation in
/// the document is ignored and must be recomputed.
pub fn parse_certificate(text: &str, layout: &ClassLayout) -> Result<Certificate> {
    let doc: CertificateDoc = serde_json::from_str(text).map_err(|e| {
        Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
    })?;
    let class = |name: &str, location: String| {
        layout
            .class_by_name(name)
            .ok_or_else(|| Error::parse(location, format!("unknown class `{name}`")))
    };
    let family = doc
        .family
        .iter()
        .enumerate()
        .map(|(i, n)| class(n, format!("family[{i}]")))
        .collect::<Result<_>>()?;
    let groups = doc
        .groups
        .iter()
        .enumerate()
        .map(|(g, names)| {
            names
                .iter()
                .enumerate()
                .map(|(i, n)| class(n, format!("groups[{g}][{i}]")))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(Certificate { family, groups })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_round_trip() {
        let inst = JdmInstance::new(vec![3, 3], vec![2, 2], vec![vec![3, 0], vec![0, 3]]).unwrap();
        let cert = Certificate {
            family: vec![0, 1],
            groups: vec![vec![0], vec![1]],
        };
        let text = emit_certificate(&inst, &cert).unwrap();
        assert!(text.contains("\"refutes\": true"));
        assert_eq!(parse_certificate(&text, inst.layout()).unwrap(), cert);
        assert!(parse_certificate(r#"{"family":["Z"],"groups":[["Z"]]}"#, inst.layout()).is_err());
    }
}
