//! Source locations attached to parsed ontology elements.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

/// A region of an ontology source file. Lines and columns are 1-based and
/// counted in characters; `length` is the number of characters covered.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SourceSpan {
    pub file: Arc<Path>,
    pub line: usize,
    pub column: usize,
    pub length: usize,
}

impl SourceSpan {
    pub fn new(file: Arc<Path>, line: usize, column: usize, length: usize) -> Self {
        SourceSpan {
            file,
            line,
            column,
            length,
        }
    }

    /// Extracts the covered text from the source the span was produced from.
    pub fn slice<'a>(&self, text: &'a str) -> Option<&'a str> {
        let line = text.lines().nth(self.line.checked_sub(1)?)?;
        let start = line
            .char_indices()
            .nth(self.column.checked_sub(1)?)
            .map(|(i, _)| i)?;
        let end = line[start..]
            .char_indices()
            .nth(self.length)
            .map(|(i, _)| start + i)
            .unwrap_or(line.len());
        Some(&line[start..end])
    }
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.file.display(), self.line, self.column)
    }
}
