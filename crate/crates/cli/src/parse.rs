//! Surface syntax for words, pairs, endomorphism files and oracle files.
//!
//! A word is a whitespace-separated list of tokens such as `a3`, `b1^-1` or
//! `a2^3`; `1` is the empty word. A pair is two words separated by `|`.

use prodfree::{Alphabet, EndoSpec, FreeWord, PairElement, SubgroupBasisInput, Tag};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("column {column}: unknown generator {token:?}")]
    UnknownGenerator { column: usize, token: String },
    #[error("column {column}: {token:?} is not in alphabet {expected}")]
    WrongAlphabet { column: usize, token: String, expected: Alphabet },
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("line {line}: {inner}")]
    Line { line: usize, inner: Box<ParseError> },
    #[error("{0}")]
    Document(String),
}

impl ParseError {
    fn at_line(self, line: usize) -> ParseError {
        ParseError::Line { line, inner: Box::new(self) }
    }
}

fn syntax(column: usize, message: impl Into<String>) -> ParseError {
    ParseError::Syntax { column, message: message.into() }
}

/// Splits on whitespace, keeping the 1-based column of each token.
fn tokens(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices().chain(std::iter::once((text.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &text[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    out
}

/// One token: its tag, generator index and exponent.
fn parse_token(column: usize, token: &str) -> Result<Option<(Tag, usize, i64)>, ParseError> {
    if token == "1" {
        return Ok(None);
    }
    let (base, exp) = match token.split_once('^') {
        Some((b, e)) => {
            let k: i64 = e.parse().map_err(|_| syntax(column + b.len() + 1, format!("bad exponent {e:?}")))?;
            (b, k)
        }
        None => (token, 1),
    };
    let mut chars = base.chars();
    let tag = match chars.next() {
        Some('a') => Tag::A,
        Some('b') => Tag::B,
        _ => return Err(ParseError::UnknownGenerator { column, token: token.into() }),
    };
    let index: usize = chars
        .as_str()
        .parse()
        .map_err(|_| ParseError::UnknownGenerator { column, token: token.into() })?;
    if index == 0 {
        return Err(ParseError::UnknownGenerator { column, token: token.into() });
    }
    Ok(Some((tag, index, exp)))
}

/// Parses a word over `alphabet`, reducing it.
pub fn parse_word(text: &str, alphabet: Alphabet) -> Result<FreeWord, ParseError> {
    parse_word_at(text, alphabet, 0)
}

fn parse_word_at(text: &str, alphabet: Alphabet, offset: usize) -> Result<FreeWord, ParseError> {
    let toks = tokens(text);
    if toks.is_empty() {
        return Err(syntax(offset + 1, "empty word (write 1 for the identity)"));
    }
    let mut raw = Vec::new();
    for (col, tok) in toks {
        let column = col + offset;
        let Some((tag, index, exp)) = parse_token(column, tok)? else { continue };
        if tag != alphabet.tag || index > alphabet.rank {
            return Err(ParseError::WrongAlphabet { column, token: tok.into(), expected: alphabet });
        }
        let letter = index as i32 * exp.signum() as i32;
        raw.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
    }
    Ok(FreeWord::reduce(&raw, alphabet).expect("letters checked against the alphabet"))
}

/// Largest generator index per tag mentioned in `texts`; used to infer ranks.
pub fn infer_ranks<'a>(texts: impl IntoIterator<Item = &'a str>) -> (usize, usize) {
    let (mut n, mut m) = (2, 2);
    for text in texts {
        for (col, tok) in tokens(text) {
            if let Ok(Some((tag, index, _))) = parse_token(col, tok) {
                match tag {
                    Tag::A => n = n.max(index),
                    Tag::B => m = m.max(index),
                }
            }
        }
    }
    (n, m)
}

/// Tag of the first generator in `text`, if any.
pub fn leading_tag(text: &str) -> Option<Tag> {
    tokens(text)
        .into_iter()
        .find_map(|(col, tok)| parse_token(col, tok).ok().flatten().map(|(t, _, _)| t))
}

/// Parses `x | y`.
pub fn parse_pair(text: &str, n: usize, m: usize) -> Result<PairElement, ParseError> {
    parse_pair_offset(text, n, m, 0)
}

pub fn print_pair(g: &PairElement) -> String {
    format!("{} | {}", g.x, g.y)
}

/// Parses an endomorphism document, line-oriented or JSON.
pub fn parse_endo(text: &str) -> Result<EndoSpec, ParseError> {
    if text.trim_start().starts_with('{') {
        return parse_endo_json(text);
    }
    let (mut n, mut m) = (None, None);
    let mut images: Vec<(usize, Tag, usize, &str)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap().trim_end();
        if line.trim().is_empty() {
            continue;
        }
        let indent = line.len() - line.trim_start().len();
        let line = line.trim_start();
        if let Some((key, value)) = line.split_once(':') {
            let v: usize = value
                .trim()
                .parse()
                .map_err(|_| syntax(indent + key.len() + 2, format!("bad rank {:?}", value.trim())).at_line(line_no))?;
            match key.trim() {
                "n" => n = Some(v),
                "m" => m = Some(v),
                other => return Err(syntax(indent + 1, format!("unknown key {other:?}")).at_line(line_no)),
            }
        } else if let Some((lhs, rhs)) = line.split_once("->") {
            let gen = lhs.trim();
            let Ok(Some((tag, index, 1))) = parse_token(indent + 1, gen) else {
                return Err(syntax(indent + 1, format!("expected a generator, found {gen:?}")).at_line(line_no));
            };
            images.push((line_no, tag, index, rhs));
        } else {
            return Err(syntax(indent + 1, "expected `key: value` or `generator -> x | y`").at_line(line_no));
        }
    }
    let n = n.ok_or_else(|| ParseError::Document("missing `n:` line".into()))?;
    let m = m.ok_or_else(|| ParseError::Document("missing `m:` line".into()))?;
    let mut images_a = vec![None; n];
    let mut images_b = vec![None; m];
    for (line_no, tag, index, rhs) in images {
        let slot = match tag {
            Tag::A => images_a.get_mut(index - 1),
            Tag::B => images_b.get_mut(index - 1),
        };
        let Some(slot) = slot else {
            return Err(ParseError::Document(format!("line {line_no}: generator {}{index} out of range", tag.symbol())));
        };
        if slot.is_some() {
            return Err(ParseError::Document(format!("line {line_no}: image of {}{index} given twice", tag.symbol())));
        }
        let raw = text.lines().nth(line_no - 1).unwrap();
        let offset = raw.find("->").unwrap() + 2;
        *slot = Some(parse_pair_offset(rhs, n, m, offset).map_err(|e| e.at_line(line_no))?);
    }
    build_spec(n, m, images_a, images_b)
}

fn parse_pair_offset(text: &str, n: usize, m: usize, offset: usize) -> Result<PairElement, ParseError> {
    let Some((x, y)) = text.split_once('|') else {
        return Err(syntax(offset + 1, "expected `x | y`"));
    };
    let x = parse_word_at(x, Alphabet::a(n), offset)?;
    let y = parse_word_at(y, Alphabet::b(m), offset + text.find('|').unwrap() + 1)?;
    Ok(PairElement::new(x, y))
}

fn build_spec(n: usize, m: usize, a: Vec<Option<PairElement>>, b: Vec<Option<PairElement>>) -> Result<EndoSpec, ParseError> {
    let missing = |tag: Tag, v: &[Option<PairElement>]| v.iter().position(|g| g.is_none()).map(|i| format!("missing image of {}{}", tag.symbol(), i + 1));
    if let Some(msg) = missing(Tag::A, &a).or_else(|| missing(Tag::B, &b)) {
        return Err(ParseError::Document(msg));
    }
    EndoSpec::new(n, m, a.into_iter().flatten().collect(), b.into_iter().flatten().collect()).map_err(|e| ParseError::Document(e.to_string()))
}

fn parse_endo_json(text: &str) -> Result<EndoSpec, ParseError> {
    let doc: Value = serde_json::from_str(text).map_err(|e| ParseError::Document(format!("JSON: {e}")))?;
    let rank = |key: &str| {
        doc.get(key)
            .and_then(Value::as_u64)
            .map(|v| v as usize)
            .ok_or_else(|| ParseError::Document(format!("JSON: missing integer field {key:?}")))
    };
    let (n, m) = (rank("n")?, rank("m")?);
    let images = |key: &str| -> Result<Vec<Option<PairElement>>, ParseError> {
        let arr = doc
            .get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| ParseError::Document(format!("JSON: missing array field {key:?}")))?;
        arr.iter()
            .enumerate()
            .map(|(i, item)| {
                let pair = item.as_array().filter(|p| p.len() == 2).and_then(|p| Some((p[0].as_str()?, p[1].as_str()?)));
                let (x, y) = pair.ok_or_else(|| ParseError::Document(format!("JSON: {key}[{i}] must be [x-word, y-word]")))?;
                let err = |e: ParseError| ParseError::Document(format!("JSON: {key}[{i}]: {e}"));
                Ok(Some(PairElement::new(parse_word(x, Alphabet::a(n)).map_err(err)?, parse_word(y, Alphabet::b(m)).map_err(err)?)))
            })
            .collect()
    };
    let (a, b) = (images("images_a")?, images("images_b")?);
    if a.len() != n || b.len() != m {
        return Err(ParseError::Document(format!("JSON: expected {n} + {m} images, got {} + {}", a.len(), b.len())));
    }
    build_spec(n, m, a, b)
}

/// Canonical line-oriented form of a spec.
pub fn print_endo(spec: &EndoSpec) -> String {
    let mut out = format!("n: {}\nm: {}\n", spec.n, spec.m);
    for (i, g) in spec.images_a.iter().enumerate() {
        out.push_str(&format!("a{} -> {}\n", i + 1, print_pair(g)));
    }
    for (j, g) in spec.images_b.iter().enumerate() {
        out.push_str(&format!("b{} -> {}\n", j + 1, print_pair(g)));
    }
    out
}

/// Parses an oracle file: lines `a: word` or `b: word`; a bare `a:` declares
/// the trivial subgroup.
pub fn parse_oracle(text: &str, n: usize, m: usize) -> Result<SubgroupBasisInput, ParseError> {
    let mut a: Option<Vec<FreeWord>> = None;
    let mut b: Option<Vec<FreeWord>> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap();
        if line.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once(':') else {
            return Err(syntax(1, "expected `a: word` or `b: word`").at_line(k + 1));
        };
        let (slot, al) = match key.trim() {
            "a" => (&mut a, Alphabet::a(n)),
            "b" => (&mut b, Alphabet::b(m)),
            other => return Err(syntax(1, format!("unknown key {other:?}")).at_line(k + 1)),
        };
        let words = slot.get_or_insert_with(Vec::new);
        if !value.trim().is_empty() {
            words.push(parse_word_at(value, al, key.len() + 1).map_err(|e| e.at_line(k + 1))?);
        }
    }
    let mut out = SubgroupBasisInput::default();
    if let Some(w) = a {
        out = out.with(Tag::A, w);
    }
    if let Some(w) = b {
        out = out.with(Tag::B, w);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn words() {
        let al = Alphabet::a(2);
        assert!(parse_word("a1 a1^-1", al).unwrap().is_empty());
        assert!(parse_word("1", al).unwrap().is_empty());
        assert_eq!(parse_word("a2 a1^-1 a2", al).unwrap().letters(), &[2, -1, 2]);
        assert_eq!(parse_word("a1^3", al).unwrap().letters(), &[1, 1, 1]);
    }

    #[test]
    fn word_errors_carry_columns() {
        let al = Alphabet::a(2);
        assert_eq!(
            parse_word("a1 b2^-1", al),
            Err(ParseError::WrongAlphabet { column: 4, token: "b2^-1".into(), expected: al })
        );
        assert!(matches!(parse_word("a1  c1", al), Err(ParseError::UnknownGenerator { column: 5, .. })));
        assert!(matches!(parse_word("a1 a3", al), Err(ParseError::WrongAlphabet { column: 4, .. })));
        assert!(matches!(parse_word("a1^x", al), Err(ParseError::Syntax { column: 4, .. })));
        assert!(matches!(parse_word("  ", al), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn endo_round_trip() {
        let text = "# swap\nn: 2\nm: 2\na1 -> 1 | b1\na2 -> 1 | b2\nb1 -> a1 | 1\nb2 -> a2 | 1\n";
        let spec = parse_endo(text).unwrap();
        assert_eq!(print_endo(&spec), text.lines().skip(1).map(|l| format!("{l}\n")).collect::<String>());
        let json = r#"{"n": 2, "m": 2, "images_a": [["1", "b1"], ["1", "b2"]], "images_b": [["a1", "1"], ["a2", "1"]]}"#;
        assert_eq!(parse_endo(json).unwrap(), spec);
    }

    #[test]
    fn endo_errors() {
        let err = parse_endo("n: 2\nm: 2\na1 -> a1 | b3\n").unwrap_err();
        assert!(matches!(err, ParseError::Line { line: 3, ref inner } if matches!(**inner, ParseError::WrongAlphabet { column: 12, .. })), "{err:?}");
        assert!(matches!(parse_endo("n: 2\nm: 2\na1 -> a1 | b1\n"), Err(ParseError::Document(_))));
    }

    #[test]
    fn oracle() {
        let o = parse_oracle("a: a2\na: a1 a2 a1^-1\nb:\n", 2, 2).unwrap();
        assert_eq!(o.get(Tag::A).unwrap().len(), 2);
        assert_eq!(o.get(Tag::B).unwrap().len(), 0);
    }
}
