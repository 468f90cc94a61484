//! Checking certificates `(F, A)` against an instance.

use serde::Serialize;

use super::{contract, Certificate, ContractedInstance};
use crate::error::{Error, Result};
use crate::instance::JdmInstance;

/// A vertex of the collapsed weighted graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum CertNode {
    /// `alpha_i`, the collapse of group `i`.
    Group(usize),
    /// `u_j`, a class outside the family.
    Class(usize),
}

/// The collapsed weighted graph of a certificate and the verdict on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateEvaluation {
    pub nodes: Vec<CertNode>,
    /// `(a, b, weight)` with `a < b` indexing `nodes`; only positive weights.
    pub edges: Vec<(usize, usize, usize)>,
    pub total_weight: usize,
    /// `|A| + sum_{i not in F} |V~_i| - 1`.
    pub required: i64,
    pub connected: bool,
    /// Whether the necessary condition fails, i.e. the certificate is sound.
    pub refutes: bool,
}

/// Builds the collapsed graph of `cert` over the contraction of `inst`.
///
/// Errors with [`Error::MalformedCertificate`] unless `groups` partitions
/// `family` into non-empty groups of valid class indices.
pub fn evaluate_certificate(inst: &JdmInstance, cert: &Certificate) -> Result<CertificateEvaluation> {
    evaluate_contracted(&contract(inst), cert)
}

/// Whether `cert` proves that `inst` has no connected realization.
pub fn verify_certificate(inst: &JdmInstance, cert: &Certificate) -> Result<bool> {
    Ok(evaluate_certificate(inst, cert)?.refutes)
}

fn check_structure(k: usize, cert: &Certificate) -> Result<()> {
    let bad = |msg: String| Err(Error::MalformedCertificate(msg));
    let mut in_family = vec![false; k];
    for &c in &cert.family {
        if c >= k {
            return bad(format!("class {c} out of range 0..{k}"));
        }
        if in_family[c] {
            return bad(format!("class {c} listed twice in the family"));
        }
        in_family[c] = true;
    }
    let mut grouped = vec![false; k];
    for (g, group) in cert.groups.iter().enumerate() {
        if group.is_empty() {
            return bad(format!("group {g} is empty"));
        }
        for &c in group {
            if c >= k || !in_family[c] {
                return bad(format!("group {g} holds class {c}, which is not in the family"));
            }
            if grouped[c] {
                return bad(format!("class {c} appears in two groups"));
            }
            grouped[c] = true;
        }
    }
    if let Some(c) = (0..k).find(|&c| in_family[c] && !grouped[c]) {
        return bad(format!("class {c} of the family is in no group"));
    }
    Ok(())
}

pub(crate) fn evaluate_contracted(
    c: &ContractedInstance,
    cert: &Certificate,
) -> Result<CertificateEvaluation> {
    let k = c.sizes().len();
    check_structure(k, cert)?;
    let d = c.matrix();
    let mut in_family = vec![false; k];
    for &x in &cert.family {
        in_family[x] = true;
    }
    let outside: Vec<usize> = (0..k).filter(|&j| !in_family[j]).collect();

    let mut nodes: Vec<CertNode> = (0..cert.groups.len()).map(CertNode::Group).collect();
    nodes.extend(outside.iter().map(|&j| CertNode::Class(j)));

    let weight = |a: CertNode, b: CertNode| -> usize {
        match (a, b) {
            (CertNode::Group(i), CertNode::Group(j)) => {
                let linked = cert.groups[i]
                    .iter()
                    .any(|&x| cert.groups[j].iter().any(|&y| d[x][y] > 0));
                usize::from(linked)
            }
            (CertNode::Group(i), CertNode::Class(j)) | (CertNode::Class(j), CertNode::Group(i)) => {
                let sum: usize = cert.groups[i].iter().map(|&x| d[x][j]).sum();
                sum.min(c.sizes()[j])
            }
            (CertNode::Class(i), CertNode::Class(j)) => d[i][j],
        }
    };

    let mut edges = Vec::new();
    for a in 0..nodes.len() {
        for b in a + 1..nodes.len() {
            let w = weight(nodes[a], nodes[b]);
            if w > 0 {
                edges.push((a, b, w));
            }
        }
    }
    let total_weight = edges.iter().map(|e| e.2).sum();
    let outside_size: usize = outside.iter().map(|&j| c.sizes()[j]).sum();
    let required = cert.groups.len() as i64 + outside_size as i64 - 1;

    let mut seen = vec![false; nodes.len()];
    let mut stack = Vec::new();
    if !nodes.is_empty() {
        seen[0] = true;
        stack.push(0);
    }
    while let Some(a) = stack.pop() {
        for &(x, y, _) in &edges {
            let other = if x == a {
                y
            } else if y == a {
                x
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
            }
        }
    }
    let connected = seen.iter().all(|&s| s);
    let refutes = !connected || (total_weight as i64) < required;
    Ok(CertificateEvaluation {
        nodes,
        edges,
        total_weight,
        required,
        connected,
        refutes,
    })
}
