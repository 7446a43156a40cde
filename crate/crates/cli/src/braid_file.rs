//! Text format for braid words:
//!
//! ```text
//! # four strands, warp at the bottom
//! strands: 4
//! warp: 1
//! 1 -2 -3 2 1
//! ```
//!
//! Header lines come first; the body is signed generator indices in
//! temporal order. `#` starts a comment running to the end of the line.

use std::fmt;

use thiserror::Error;
use weft_core::BraidWord;

const PER_LINE: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidFile {
    pub word: BraidWord,
    pub warp: Option<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Tokens of one line with their 1-based columns, comments removed.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in body.char_indices() {
        match (c == ' ' || c == '\t', start) {
            (true, Some(s)) => {
                out.push((s, &body[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(byte, tok)| (body[..byte].chars().count() + 1, tok))
        .collect()
}

impl BraidFile {
    pub fn new(word: BraidWord) -> Self {
        BraidFile { word, warp: None }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut strands: Option<usize> = None;
        let mut warp: Option<usize> = None;
        let mut values: Vec<i32> = Vec::new();
        let mut in_body = false;
        for (idx, raw) in text.split('\n').enumerate() {
            let line_no = idx + 1;
            if let Some(col) = raw.find('\r') {
                return Err(err(line_no, raw[..col].chars().count() + 1, "carriage return; use LF line endings"));
            }
            let toks = tokens(raw);
            let Some(&(col, first)) = toks.first() else {
                continue;
            };
            if let Some(key) = first.strip_suffix(':') {
                if in_body {
                    return Err(err(line_no, col, format!("header {key:?} after the word body")));
                }
                let &[_, (vcol, value)] = toks.as_slice() else {
                    return Err(err(line_no, col, format!("expected `{key}: <int>`")));
                };
                let parsed: usize = value
                    .parse()
                    .map_err(|_| err(line_no, vcol, format!("{key} must be a positive integer, got {value:?}")))?;
                let slot = match key {
                    "strands" => &mut strands,
                    "warp" => &mut warp,
                    _ => return Err(err(line_no, col, format!("unknown header {key:?}"))),
                };
                if slot.replace(parsed).is_some() {
                    return Err(err(line_no, col, format!("duplicate header {key:?}")));
                }
                if key == "strands" && parsed < 2 {
                    return Err(err(line_no, vcol, "strands must be at least 2"));
                }
                continue;
            }
            in_body = true;
            let Some(n) = strands else {
                return Err(err(line_no, col, "word body before the `strands:` header"));
            };
            for (col, tok) in toks {
                let v: i32 = tok
                    .parse()
                    .map_err(|_| err(line_no, col, format!("expected a signed integer, got {tok:?}")))?;
                if v == 0 || v.unsigned_abs() as usize > n - 1 {
                    return Err(err(
                        line_no,
                        col,
                        format!("generator {v} out of range for {n} strands (1 <= |i| <= {})", n - 1),
                    ));
                }
                values.push(v);
            }
        }
        let n = strands.ok_or_else(|| err(1, 1, "missing `strands:` header"))?;
        if let Some(k) = warp {
            if k == 0 || k > n {
                return Err(err(1, 1, format!("warp {k} out of range for {n} strands")));
            }
        }
        let word = BraidWord::from_signed(n, &values).map_err(|e| err(1, 1, e.to_string()))?;
        Ok(BraidFile { word, warp })
    }
}

/// Canonical form: headers, then at most 20 generators per line, LF endings.
impl fmt::Display for BraidFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "strands: {}", self.word.strands())?;
        if let Some(k) = self.warp {
            writeln!(f, "warp: {k}")?;
        }
        for chunk in self.word.to_signed().chunks(PER_LINE) {
            let line: Vec<String> = chunk.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_headers_comments_and_body() {
        let text = "# example\nstrands: 4\nwarp: 1\n\n1 -2   -3 # trailing\n 2 1\n";
        let f = BraidFile::parse(text).unwrap();
        assert_eq!(f.word.to_signed(), vec![1, -2, -3, 2, 1]);
        assert_eq!(f.warp, Some(1));
        assert_eq!(f.to_string(), "strands: 4\nwarp: 1\n1 -2 -3 2 1\n");
    }

    #[test]
    fn empty_body_is_the_identity() {
        let f = BraidFile::parse("strands: 3\n").unwrap();
        assert!(f.word.is_empty());
        assert_eq!(f.to_string(), "strands: 3\n");
    }

    #[test]
    fn errors_carry_line_and_column() {
        let e = BraidFile::parse("strands: 3\n1 2\n1  3\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 4));
        let e = BraidFile::parse("1 2\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = BraidFile::parse("strands: 3\n1 x2\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        assert!(BraidFile::parse("strands: 3\nwarp: 4\n").is_err());
        assert!(BraidFile::parse("strands: 3\r\n").is_err());
        assert!(BraidFile::parse("strands: 3\n1\nwarp: 1\n").is_err());
        assert!(BraidFile::parse("strands: 3\nstrands: 3\n").is_err());
        assert!(BraidFile::parse("strands: 3\n0\n").is_err());
    }

    #[test]
    fn long_words_wrap_at_twenty() {
        let values: Vec<i32> = (0..45).map(|i| if i % 2 == 0 { 1 } else { -2 }).collect();
        let f = BraidFile::new(BraidWord::from_signed(3, &values).unwrap());
        let text = f.to_string();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(BraidFile::parse(&text).unwrap(), f);
    }
}
