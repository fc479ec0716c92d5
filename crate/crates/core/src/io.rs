//! JSON formats for graphs, boundary families, certificates and clopen sets.
//!
//! Syntax and type errors carry the line and column reported by the parser;
//! structural errors name the offending field.
//!
//! ```json
//! {"type": "finite", "rows": [[1, 1], [1, 0]], "boundary": "auto"}
//! {"type": "block", "classes": [{"card": 2}, {"card": "inf"}], "block": [[1, 1], [0, 1]]}
//! {"type": "banded", "prefix": [], "offsets": [1], "cross": []}
//! ```

use serde::{Deserialize, Serialize};

use crate::cylinder::ClopenSet;
use crate::error::{Error, Result};
use crate::graph::{Cardinality, GraphSpec, Presentation};
use crate::path_space::{BoundaryFamily, BoundaryPattern, MarkovModel, SpectrumPoint};
use crate::sse::IntMatrix;

#[derive(Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum GraphFile {
    Finite {
        rows: Vec<Vec<u8>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary: Option<BoundaryJson>,
    },
    Block {
        classes: Vec<ClassJson>,
        block: Vec<Vec<u8>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary: Option<BoundaryJson>,
    },
    Banded {
        prefix: Vec<Vec<u8>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cutoff: Option<usize>,
        offsets: Vec<usize>,
        #[serde(default)]
        cross: Vec<Vec<u8>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        boundary: Option<BoundaryJson>,
    },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassJson {
    card: CardJson,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CardJson {
    Count(usize),
    Word(String),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum BoundaryJson {
    Keyword(String),
    List(Vec<PatternJson>),
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PatternJson {
    #[serde(default)]
    finite: Vec<usize>,
    #[serde(default)]
    classes: Vec<usize>,
}

fn bits(rows: &[Vec<bool>]) -> Vec<Vec<u8>> {
    rows.iter().map(|r| r.iter().map(|&b| b as u8).collect()).collect()
}

fn family_from_json(b: Option<BoundaryJson>) -> Result<BoundaryFamily> {
    match b {
        None => Ok(BoundaryFamily::Auto),
        Some(BoundaryJson::Keyword(k)) if k == "auto" => Ok(BoundaryFamily::Auto),
        Some(BoundaryJson::Keyword(k)) => Err(Error::validation(
            "boundary",
            format!("expected \"auto\" or a list of patterns, found {k:?}"),
        )),
        Some(BoundaryJson::List(list)) => Ok(BoundaryFamily::Explicit(
            list.into_iter().map(|p| BoundaryPattern::raw(p.finite, p.classes)).collect(),
        )),
    }
}

/// A graph file, with its boundary family (`auto` when absent).
pub fn parse_graph(text: &str) -> Result<(GraphSpec, BoundaryFamily)> {
    let file: GraphFile = serde_json::from_str(text)?;
    match file {
        GraphFile::Finite { rows, boundary } => Ok((GraphSpec::finite(rows)?, family_from_json(boundary)?)),
        GraphFile::Block { classes, block, boundary } => {
            let cards = classes
                .into_iter()
                .enumerate()
                .map(|(k, c)| match c.card {
                    CardJson::Count(n) => Ok(Cardinality::Finite(n)),
                    CardJson::Word(w) if w == "inf" || w == "infinite" => Ok(Cardinality::Infinite),
                    CardJson::Word(w) => Err(Error::validation(
                        format!("classes[{k}].card"),
                        format!("expected a count or \"inf\", found {w:?}"),
                    )),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((GraphSpec::block(cards, block)?, family_from_json(boundary)?))
        }
        GraphFile::Banded { prefix, cutoff, offsets, cross, boundary } => {
            if let Some(c) = cutoff {
                if c != prefix.len() {
                    return Err(Error::validation(
                        "cutoff",
                        format!("cutoff {c} does not match the {} prefix rows", prefix.len()),
                    ));
                }
            }
            Ok((GraphSpec::banded(prefix, offsets, cross)?, family_from_json(boundary)?))
        }
    }
}

/// Parse a graph file and validate its model.
pub fn parse_model(text: &str) -> Result<MarkovModel> {
    let (g, fam) = parse_graph(text)?;
    crate::path_space::validate_model(&g, &fam)
}

/// The value of a `--boundary` option: `auto` or a JSON list of patterns.
pub fn parse_boundary(text: &str) -> Result<BoundaryFamily> {
    if text.trim() == "auto" {
        return Ok(BoundaryFamily::Auto);
    }
    family_from_json(Some(serde_json::from_str(text)?))
}

pub fn graph_to_json(g: &GraphSpec, family: &BoundaryFamily) -> String {
    let boundary = match family {
        BoundaryFamily::Auto => None,
        BoundaryFamily::Explicit(list) => Some(BoundaryJson::List(
            list.iter()
                .map(|p| PatternJson {
                    finite: p.vertices().iter().copied().collect(),
                    classes: p.class_ids().iter().copied().collect(),
                })
                .collect(),
        )),
    };
    let file = match g.presentation() {
        Presentation::Finite { rows } => GraphFile::Finite { rows: bits(rows), boundary },
        Presentation::Block { classes, block } => GraphFile::Block {
            classes: classes
                .iter()
                .map(|c| ClassJson {
                    card: match c {
                        Cardinality::Finite(n) => CardJson::Count(*n),
                        Cardinality::Infinite => CardJson::Word("inf".into()),
                    },
                })
                .collect(),
            block: bits(block),
            boundary,
        },
        Presentation::Banded { prefix, offsets, cross } => GraphFile::Banded {
            prefix: bits(prefix),
            cutoff: None,
            offsets: offsets.clone(),
            cross: bits(cross),
            boundary,
        },
    };
    serde_json::to_string(&file).expect("plain data serializes")
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateFile {
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<i64>>,
    #[serde(default)]
    chain: Option<Vec<StepJson>>,
    #[serde(rename = "R", default)]
    r: Option<Vec<Vec<i64>>>,
    #[serde(rename = "S", default)]
    s: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    lag: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct StepJson {
    #[serde(rename = "R")]
    r: Vec<Vec<i64>>,
    #[serde(rename = "S")]
    s: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// A strong shift equivalence: a chain of elementary pairs.
    Chain {
        a: IntMatrix,
        b: IntMatrix,
        chain: Vec<(IntMatrix, IntMatrix)>,
    },
    /// A shift equivalence of the given lag.
    Lag {
        a: IntMatrix,
        b: IntMatrix,
        r: IntMatrix,
        s: IntMatrix,
        lag: u32,
    },
}

impl Certificate {
    pub fn a(&self) -> &IntMatrix {
        match self {
            Certificate::Chain { a, .. } | Certificate::Lag { a, .. } => a,
        }
    }

    pub fn b(&self) -> &IntMatrix {
        match self {
            Certificate::Chain { b, .. } | Certificate::Lag { b, .. } => b,
        }
    }

    /// The single elementary pair, if the certificate is one.
    pub fn elementary_pair(&self) -> Option<(&IntMatrix, &IntMatrix)> {
        match self {
            Certificate::Chain { chain, .. } if chain.len() == 1 => Some((&chain[0].0, &chain[0].1)),
            Certificate::Lag { r, s, lag: 1, .. } => Some((r, s)),
            _ => None,
        }
    }
}

fn matrix(field: &str, rows: &[Vec<i64>]) -> Result<IntMatrix> {
    IntMatrix::from_rows(rows).map_err(|e| Error::validation(field, e.to_string()))
}

pub fn parse_certificate(text: &str) -> Result<Certificate> {
    let f: CertificateFile = serde_json::from_str(text)?;
    let a = matrix("A", &f.a)?;
    let b = matrix("B", &f.b)?;
    match (f.chain, f.r, f.s) {
        (Some(chain), None, None) => {
            if f.lag.is_some() {
                return Err(Error::validation("lag", "a chain certificate has no lag"));
            }
            let chain = chain
                .iter()
                .enumerate()
                .map(|(i, st)| Ok((matrix(&format!("chain[{i}].R"), &st.r)?, matrix(&format!("chain[{i}].S"), &st.s)?)))
                .collect::<Result<_>>()?;
            Ok(Certificate::Chain { a, b, chain })
        }
        (None, Some(r), Some(s)) => Ok(Certificate::Lag {
            a,
            b,
            r: matrix("R", &r)?,
            s: matrix("S", &s)?,
            lag: f.lag.unwrap_or(1),
        }),
        _ => Err(Error::validation(
            "certificate",
            "expected either \"chain\" or both \"R\" and \"S\"",
        )),
    }
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum MatrixFile {
    Bare(Vec<Vec<i64>>),
    Named {
        #[serde(rename = "A")]
        a: Vec<Vec<i64>>,
        #[serde(rename = "B", default)]
        b: Option<Vec<Vec<i64>>>,
    },
}

/// `[[...]]`, `{"A": [[...]]}` or `{"A": ..., "B": ...}`.
pub fn parse_matrices(text: &str) -> Result<(IntMatrix, Option<IntMatrix>)> {
    // Parse once as a value to keep syntax positions, then match the shape.
    let value: serde_json::Value = serde_json::from_str(text)?;
    let f: MatrixFile = serde_json::from_value(value)
        .map_err(|_| Error::validation("matrix", "expected an array of rows or an object with \"A\""))?;
    match f {
        MatrixFile::Bare(a) => Ok((matrix("A", &a)?, None)),
        MatrixFile::Named { a, b } => Ok((matrix("A", &a)?, b.map(|b| matrix("B", &b)).transpose()?)),
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClopenJson {
    level: usize,
    members: Vec<String>,
}

pub fn clopen_to_json(c: &ClopenSet) -> String {
    serde_json::to_string(&ClopenJson {
        level: c.level(),
        members: c.render_members(),
    })
    .expect("plain data serializes")
}

pub fn clopen_from_json(model: &MarkovModel, text: &str) -> Result<ClopenSet> {
    let f: ClopenJson = serde_json::from_str(text)?;
    let members = f
        .members
        .iter()
        .enumerate()
        .map(|(k, s)| {
            SpectrumPoint::parse(s, model.graph()).map_err(|e| Error::validation(format!("members[{k}]"), e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    ClopenSet::new(model, f.level, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinder::base_sets;
    use proptest::prelude::*;

    #[test]
    fn graph_formats() {
        let (g, fam) = parse_graph(r#"{"type":"finite","rows":[[1,1],[1,0]]}"#).unwrap();
        assert_eq!(g.vertex_count(), Some(2));
        assert_eq!(fam, BoundaryFamily::Auto);
        let (g, fam) = parse_graph(r#"{"type":"finite","rows":[[1,1],[1,1]],"boundary":[{"finite":[1,2]}]}"#).unwrap();
        assert_eq!(fam, BoundaryFamily::Explicit(vec![BoundaryPattern::everything(&g)]));
        let (g, _) = parse_graph(r#"{"type":"block","classes":[{"card":"inf"}],"block":[[1]]}"#).unwrap();
        assert!(!g.is_finite());
        let (g, _) = parse_graph(r#"{"type":"banded","prefix":[],"cutoff":0,"offsets":[1]}"#).unwrap();
        assert!(g.edge(4, 5));
    }

    #[test]
    fn diagnostics() {
        match parse_graph("{\"type\":\"finite\",\n \"rows\": [[1,1],[1,]]}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match parse_graph(r#"{"type":"finite","rows":[[1,2],[1,0]]}"#) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "rows[0][1]"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_graph(r#"{"type":"finite","rows":[[1]],"extra":1}"#), Err(Error::Parse { .. })));
        match parse_graph(r#"{"type":"finite","rows":[[1]],"boundary":"none"}"#) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "boundary"),
            other => panic!("{other:?}"),
        }
        match parse_model(r#"{"type":"finite","rows":[[1]],"boundary":[{"finite":[4]}]}"#) {
            Err(Error::Validation { field, .. }) => assert_eq!(field, "boundary[0].finite"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn certificates() {
        let c = parse_certificate(r#"{"A":[[2]],"B":[[1,1],[1,1]],"chain":[{"R":[[1,1]],"S":[[1],[1]]}]}"#).unwrap();
        assert!(c.elementary_pair().is_some());
        let c = parse_certificate(r#"{"A":[[2]],"B":[[2]],"R":[[2]],"S":[[2]],"lag":2}"#).unwrap();
        assert!(matches!(c, Certificate::Lag { lag: 2, .. }));
        assert!(c.elementary_pair().is_none());
        assert!(matches!(parse_certificate(r#"{"A":[[2]],"B":[[2]]}"#), Err(Error::Validation { .. })));
        assert!(matches!(parse_certificate(r#"{"A":[[2],[1,1]],"B":[[2]],"R":[[1]],"S":[[1]]}"#), Err(Error::Validation { ref field, .. }) if field == "A"));
        let (a, b) = parse_matrices("[[3]]").unwrap();
        assert_eq!(a.to_string(), "[[3]]");
        assert!(b.is_none());
        let (_, b) = parse_matrices(r#"{"A":[[2]],"B":[[1,1],[1,1]]}"#).unwrap();
        assert!(b.is_some());
    }

    #[test]
    fn clopen_roundtrip() {
        let m = parse_model(r#"{"type":"finite","rows":[[1,1],[1,1]],"boundary":[{"finite":[1,2]}]}"#).unwrap();
        let v = base_sets(&m, 1).unwrap().1;
        let text = clopen_to_json(&v);
        assert_eq!(text, r#"{"level":0,"members":["1","2","∅;I"]}"#);
        assert_eq!(clopen_from_json(&m, &text).unwrap(), v);
        assert!(clopen_from_json(&m, r#"{"level":0,"members":["3"]}"#).is_err());
    }

    proptest! {
        #[test]
        fn finite_graph_roundtrip(n in 1usize..=4, bits in any::<u16>(), fam_bits in any::<u8>()) {
            let rows: Vec<Vec<u8>> = (0..n).map(|i| (0..n).map(|j| ((bits >> ((i * n + j) % 16)) & 1) as u8).collect()).collect();
            let g = GraphSpec::finite(rows).unwrap();
            let fam = if fam_bits & 1 == 0 {
                BoundaryFamily::Auto
            } else {
                BoundaryFamily::Explicit(vec![BoundaryPattern::from_vertices((1..=n).filter(|v| fam_bits >> v & 1 == 1))])
            };
            let (g2, fam2) = parse_graph(&graph_to_json(&g, &fam)).unwrap();
            prop_assert_eq!(g2, g);
            prop_assert_eq!(fam2, fam);
        }
    }
}
