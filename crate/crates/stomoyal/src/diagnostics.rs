use std::fmt;

use serde::Serialize;

/// Stable diagnostic codes. Each failure class has its own code so scripts can
/// match on them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Code {
    JsonSyntax,
    BlockSyntax,
    Schema,
    UnresolvedKernel,
    UnresolvedVariable,
    UnknownFunctional,
    GridLength,
    MalformedRational,
    Expression,
    Duplicate,
    InvalidName,
    Usage,
    Engine,
    Io,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::JsonSyntax => "E100",
            Code::BlockSyntax => "E101",
            Code::Schema => "E102",
            Code::UnresolvedKernel => "E200",
            Code::UnresolvedVariable => "E201",
            Code::UnknownFunctional => "E202",
            Code::GridLength => "E300",
            Code::MalformedRational => "E400",
            Code::Expression => "E500",
            Code::Duplicate => "E600",
            Code::InvalidName => "E601",
            Code::Usage => "E700",
            Code::Engine => "E800",
            Code::Io => "E900",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// 1-based position in the input text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
pub struct Diagnostic {
    pub code: Code,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub location: Option<Location>,
}

impl Diagnostic {
    pub fn new(code: Code, message: impl Into<String>) -> Self {
        Self { code, message: message.into(), location: None }
    }

    pub fn at(mut self, location: Option<Location>) -> Self {
        if self.location.is_none() {
            self.location = location;
        }
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("diagnostics serialize")
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.code, self.message)?;
        if let Some(loc) = self.location {
            write!(f, " (line {}, column {})", loc.line, loc.column)?;
        }
        Ok(())
    }
}

/// Location of byte offset `offset` in `text`.
pub fn location_of(text: &str, offset: usize) -> Location {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    Location { line, column }
}

/// Location of the `nth` (0-based) occurrence of `needle` in `text`.
pub fn find_location(text: &str, needle: &str, nth: usize) -> Option<Location> {
    text.match_indices(needle).nth(nth).map(|(i, _)| location_of(text, i))
}
