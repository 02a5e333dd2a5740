use std::fmt;
use std::sync::Arc;

/// Index of a labeled null. Indices are minted monotonically per instance,
/// starting at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NullId(pub u64);

impl fmt::Display for NullId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:n{}", self.0)
    }
}

/// A domain value: a constant identified by its lexical form, or a labeled
/// null. The derived order puts all constants (lexicographically) before all
/// nulls (by index); it is used for reproducible output only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Const(Arc<str>),
    Null(NullId),
}

impl Value {
    pub fn constant(lexical: &str) -> Self {
        Value::Const(Arc::from(lexical))
    }

    pub fn null(index: u64) -> Self {
        Value::Null(NullId(index))
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null(_))
    }

    pub fn as_null(&self) -> Option<NullId> {
        match self {
            Value::Null(n) => Some(*n),
            Value::Const(_) => None,
        }
    }

    pub fn as_const(&self) -> Option<&str> {
        match self {
            Value::Const(c) => Some(c),
            Value::Null(_) => None,
        }
    }

    /// Plain rendering: the lexical form of a constant, `_:n<k>` for a null.
    pub fn raw(&self) -> RawValue<'_> {
        RawValue(self)
    }
}

impl From<&str> for Value {
    fn from(s: &str) -> Self {
        Value::constant(s)
    }
}

/// Renders a constant bare when it lexes as an identifier or number and
/// double-quoted otherwise, so the output can be read back by the parser.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Const(c) if is_bare_constant(c) => f.write_str(c),
            Value::Const(c) => write_quoted(f, c),
            Value::Null(n) => n.fmt(f),
        }
    }
}

pub struct RawValue<'a>(&'a Value);

impl fmt::Display for RawValue<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Value::Const(c) => f.write_str(c),
            Value::Null(n) => n.fmt(f),
        }
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

pub(crate) fn is_number(s: &str) -> bool {
    let digits = s.strip_prefix('-').unwrap_or(s);
    let (int, frac) = match digits.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (digits, None),
    };
    !int.is_empty()
        && int.bytes().all(|b| b.is_ascii_digit())
        && frac.is_none_or(|f| !f.is_empty() && f.bytes().all(|b| b.is_ascii_digit()))
}

pub(crate) fn is_bare_constant(s: &str) -> bool {
    is_identifier(s) || is_number(s)
}

pub(crate) fn write_quoted(f: &mut impl fmt::Write, s: &str) -> fmt::Result {
    f.write_char('"')?;
    for c in s.chars() {
        match c {
            '"' => f.write_str("\\\"")?,
            '\\' => f.write_str("\\\\")?,
            '\n' => f.write_str("\\n")?,
            '\t' => f.write_str("\\t")?,
            '\r' => f.write_str("\\r")?,
            c => f.write_char(c)?,
        }
    }
    f.write_char('"')
}
