//! Hierarchical instance paths: dot-separated identifiers with optional
//! array indices, e.g. `mcu.digital[0]`.

use crate::error::{Error, Result};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub name: String,
    pub index: Option<usize>,
}

impl Segment {
    pub fn new(name: impl Into<String>) -> Segment {
        Segment {
            name: name.into(),
            index: None,
        }
    }

    pub fn indexed(name: impl Into<String>, index: usize) -> Segment {
        Segment {
            name: name.into(),
            index: Some(index),
        }
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.index {
            Some(i) => write!(f, "{}[{}]", self.name, i),
            None => write!(f, "{}", self.name),
        }
    }
}

/// A non-empty sequence of segments naming a block instance, port element,
/// parameter or link in the elaborated design.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path(Vec<Segment>);

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Path {
    pub fn new(segments: Vec<Segment>) -> Result<Path> {
        if segments.is_empty() {
            return Err(Error::PathSyntax(String::new()));
        }
        for seg in &segments {
            if !is_identifier(&seg.name) {
                return Err(Error::PathSyntax(seg.to_string()));
            }
        }
        Ok(Path(segments))
    }

    pub fn root(name: impl Into<String>) -> Path {
        Path(vec![Segment::new(name)])
    }

    pub fn segments(&self) -> &[Segment] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last(&self) -> &Segment {
        self.0.last().expect("paths are non-empty")
    }

    pub fn first(&self) -> &Segment {
        self.0.first().expect("paths are non-empty")
    }

    pub fn parent(&self) -> Option<Path> {
        if self.0.len() <= 1 {
            None
        } else {
            Some(Path(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn child(&self, name: impl Into<String>) -> Path {
        let mut segs = self.0.clone();
        segs.push(Segment::new(name));
        Path(segs)
    }

    pub fn child_indexed(&self, name: impl Into<String>, index: usize) -> Path {
        let mut segs = self.0.clone();
        segs.push(Segment::indexed(name, index));
        Path(segs)
    }

    pub fn join(&self, rel: &Path) -> Path {
        let mut segs = self.0.clone();
        segs.extend(rel.0.iter().cloned());
        Path(segs)
    }

    pub fn starts_with(&self, prefix: &Path) -> bool {
        self.0.len() >= prefix.0.len() && self.0[..prefix.0.len()] == prefix.0[..]
    }

    /// Path formed by the segments after `prefix`. None if not a strict prefix.
    pub fn strip_prefix(&self, prefix: &Path) -> Option<Path> {
        if self.starts_with(prefix) && self.0.len() > prefix.0.len() {
            Some(Path(self.0[prefix.0.len()..].to_vec()))
        } else {
            None
        }
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, seg) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ".")?;
            }
            write!(f, "{seg}")?;
        }
        Ok(())
    }
}

impl FromStr for Path {
    type Err = Error;

    fn from_str(text: &str) -> Result<Path> {
        if text.is_empty() {
            return Err(Error::PathSyntax(text.to_string()));
        }
        let mut segments = Vec::new();
        for part in text.split('.') {
            let (name, index) = match part.find('[') {
                Some(open) => {
                    if !part.ends_with(']') {
                        return Err(Error::PathSyntax(text.to_string()));
                    }
                    let idx_text = &part[open + 1..part.len() - 1];
                    let index: usize = idx_text
                        .parse()
                        .map_err(|_| Error::PathSyntax(text.to_string()))?;
                    (&part[..open], Some(index))
                }
                None => (part, None),
            };
            if !is_identifier(name) {
                return Err(Error::PathSyntax(text.to_string()));
            }
            segments.push(Segment {
                name: name.to_string(),
                index,
            });
        }
        Path::new(segments)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_indexed_path() {
        let p: Path = "mcu.digital[0]".parse().unwrap();
        assert_eq!(p.segments().len(), 2);
        assert_eq!(p.segments()[0], Segment::new("mcu"));
        assert_eq!(p.segments()[1], Segment::indexed("digital", 0));
    }

    #[test]
    fn parses_single_segment() {
        let p: Path = "led".parse().unwrap();
        assert_eq!(p, Path::root("led"));
    }

    #[test]
    fn rejects_empty_segment() {
        let err = "a..b".parse::<Path>().unwrap_err();
        assert_eq!(err.code(), "E_PATH_SYNTAX");
    }

    #[test]
    fn rejects_bad_index() {
        assert!("a[x]".parse::<Path>().is_err());
        assert!("a[1".parse::<Path>().is_err());
        assert!("".parse::<Path>().is_err());
        assert!("1abc".parse::<Path>().is_err());
    }

    fn segment_strategy() -> impl Strategy<Value = String> {
        ("[a-z_][a-z0-9_]{0,5}", proptest::option::of(0usize..8)).prop_map(
            |(name, idx)| match idx {
                Some(i) => format!("{name}[{i}]"),
                None => name,
            },
        )
    }

    proptest! {
        #[test]
        fn round_trip(parts in proptest::collection::vec(segment_strategy(), 1..5)) {
            let text = parts.join(".");
            let parsed: Path = text.parse().unwrap();
            let rendered = parsed.to_string();
            prop_assert_eq!(&rendered, &text);
            let reparsed: Path = rendered.parse().unwrap();
            prop_assert_eq!(reparsed, parsed);
        }
    }
}
