use std::collections::BTreeMap;

use thiserror::Error;

use super::{canonical_code, canonical_form, CanonicalCode, PlaneGraph, PlaneGraphError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ArchiveError {
    #[error("line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: PlaneGraphError,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Entry {
    Comment(String),
    Graph(PlaneGraph),
}

/// A line-oriented list of graphs with `#` comment lines.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Archive {
    pub entries: Vec<Entry>,
}

/// Parses one `F1;F2;...` line. `line_no` is used for error positions.
pub fn parse_graph_line(text: &str, line_no: usize) -> Result<PlaneGraph, ArchiveError> {
    let mut faces = Vec::new();
    let mut col = 1;
    for part in text.split(';') {
        let mut face = Vec::new();
        let mut c = col;
        for tok in part.split(' ') {
            if tok.is_empty() {
                c += 1;
                continue;
            }
            let v: usize = tok.parse().map_err(|_| ArchiveError::Syntax {
                line: line_no,
                col: c,
                msg: format!("expected a vertex index, found `{tok}`"),
            })?;
            face.push(v);
            c += tok.len() + 1;
        }
        if face.is_empty() {
            return Err(ArchiveError::Syntax {
                line: line_no,
                col,
                msg: "empty face".into(),
            });
        }
        faces.push(face);
        col += part.len() + 1;
    }
    PlaneGraph::build(&faces).map_err(|source| ArchiveError::Invalid {
        line: line_no,
        source,
    })
}

impl Archive {
    pub fn parse(text: &str) -> Result<Archive, ArchiveError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            if line.starts_with('#') {
                entries.push(Entry::Comment(line.to_string()));
            } else if line.trim().is_empty() {
                continue;
            } else {
                entries.push(Entry::Graph(parse_graph_line(line, i + 1)?));
            }
        }
        Ok(Archive { entries })
    }

    pub fn emit(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            match e {
                Entry::Comment(c) => s.push_str(c),
                Entry::Graph(g) => s.push_str(&g.to_line()),
            }
            s.push('\n');
        }
        s
    }

    /// Canonicalizes, deduplicates and sorts `graphs` by canonical code.
    /// Each header line gets a `# ` prefix.
    pub fn from_graphs<I: IntoIterator<Item = PlaneGraph>>(header: &[String], graphs: I) -> Archive {
        let mut by_code: BTreeMap<CanonicalCode, PlaneGraph> = BTreeMap::new();
        for g in graphs {
            let (c, h) = canonical_form(&g);
            by_code.entry(c).or_insert(h);
        }
        let mut entries: Vec<Entry> = header.iter().map(|h| Entry::Comment(format!("# {h}"))).collect();
        entries.extend(by_code.into_values().map(Entry::Graph));
        Archive { entries }
    }

    pub fn graphs(&self) -> impl Iterator<Item = &PlaneGraph> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Graph(g) => Some(g),
            Entry::Comment(_) => None,
        })
    }

    pub fn comments(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().filter_map(|e| match e {
            Entry::Comment(c) => Some(c.as_str()),
            Entry::Graph(_) => None,
        })
    }

    pub fn codes(&self) -> BTreeMap<CanonicalCode, PlaneGraph> {
        self.graphs().map(|g| (canonical_code(g), g.clone())).collect()
    }
}

/// Graphs of `reference` absent from `generated` (missing) and the converse
/// (extra), compared up to isomorphism.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ArchiveDiff {
    pub missing: Vec<PlaneGraph>,
    pub extra: Vec<PlaneGraph>,
}

impl ArchiveDiff {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }

    pub fn report(&self) -> String {
        let mut s = String::new();
        for g in &self.missing {
            s.push_str("- ");
            s.push_str(&g.to_line());
            s.push('\n');
        }
        for g in &self.extra {
            s.push_str("+ ");
            s.push_str(&g.to_line());
            s.push('\n');
        }
        s
    }
}

pub fn archive_diff(generated: &Archive, reference: &Archive) -> ArchiveDiff {
    let a = generated.codes();
    let b = reference.codes();
    ArchiveDiff {
        missing: b
            .iter()
            .filter(|(c, _)| !a.contains_key(c))
            .map(|(_, g)| g.clone())
            .collect(),
        extra: a
            .iter()
            .filter(|(c, _)| !b.contains_key(c))
            .map(|(_, g)| g.clone())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::super::catalog;
    use super::*;

    #[test]
    fn roundtrip() {
        let a = Archive::from_graphs(
            &["test".to_string()],
            catalog::all().into_iter().map(|x| x.1),
        );
        let text = a.emit();
        let b = Archive::parse(&text).unwrap();
        assert_eq!(b.emit(), text);
        assert!(archive_diff(&a, &b).is_empty());
    }

    #[test]
    fn dedup_and_missing() {
        let g = catalog::cuboctahedron();
        let a = Archive::from_graphs(&[], [g.clone(), g.opposite(), catalog::icosahedron()]);
        assert_eq!(a.graphs().count(), 2);
        let b = Archive::from_graphs(&[], [g]);
        let d = archive_diff(&b, &a);
        assert_eq!(d.missing.len(), 1);
        assert!(d.extra.is_empty());
    }

    #[test]
    fn parse_errors_are_located() {
        let e = Archive::parse("# c\n0 1 2;2 1 x\n").unwrap_err();
        assert_eq!(
            e,
            ArchiveError::Syntax {
                line: 2,
                col: 11,
                msg: "expected a vertex index, found `x`".into()
            }
        );
        assert!(matches!(
            Archive::parse("0 1 2;0 1 2").unwrap_err(),
            ArchiveError::Invalid { line: 1, .. }
        ));
    }
}
