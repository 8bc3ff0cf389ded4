//! Recursive-descent parser for pulse programs.
//!
//! ```text
//! sequence := [event ("-" event)*]
//! event    := "R" axis spins "(" expr ")" | "Gz" | "tau" | "d" "(" expr ")"
//! axis     := "x" | "y" | "z"
//! spins    := "1" | "2" | "12"
//! expr     := term (("+" | "-") term)*
//! term     := unary (("*" | "/") unary)*
//! unary    := "-" unary | primary
//! primary  := NUMBER | "pi" | "n" | "J" | "(" expr ")"
//! ```
//!
//! Whitespace is ignored and `#` starts a comment running to end of line. A
//! comment of the form `# name: <text>` ahead of the first event names the
//! sequence.

use std::fmt;

use thiserror::Error;

use super::ast::{AngleExpr, Axis, BinaryOp, PulseEvent, PulseSequence, Spins, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedChar(char),
    UnexpectedToken(String),
    UnexpectedEnd,
    InvalidAxis(char),
    InvalidSpins(String),
    UnknownIdentifier(String),
    UnbalancedParen,
    InvalidNumber(String),
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedChar(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken(t) => write!(f, "unexpected {t}"),
            ParseErrorKind::UnexpectedEnd => f.write_str("unexpected end of input"),
            ParseErrorKind::InvalidAxis(c) => write!(f, "invalid axis {c:?}"),
            ParseErrorKind::InvalidSpins(s) => write!(f, "invalid spin designator {s:?}"),
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier {s:?}"),
            ParseErrorKind::UnbalancedParen => f.write_str("unbalanced parentheses"),
            ParseErrorKind::InvalidNumber(s) => write!(f, "invalid number {s:?}"),
        }
    }
}

/// Syntax error at a byte offset into the source text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: {kind}{}", expected_suffix(.expected))]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
    pub expected: Vec<&'static str>,
}

fn expected_suffix(expected: &[&str]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected one of: {})", expected.join(", "))
    }
}

const EVENT_START: &[&str] = &["R<axis><spins>(...)", "Gz", "tau", "d(...)"];
const OPERAND: &[&str] = &["number", "pi", "n", "J", "(", "-"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Word(String),
    Number(f64),
    Plus,
    Minus,
    Star,
    Slash,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("identifier {w:?}"),
            Tok::Number(x) => format!("number {x}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    name: Option<String>,
    started: bool,
}

impl<'a> Lexer<'a> {
    fn peek_char(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek_char() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else if c == '#' {
                let rest = &self.src[self.pos..];
                let line_len = rest.find('\n').unwrap_or(rest.len());
                let comment = rest[1..line_len].trim();
                if let (false, Some(name)) = (self.started, comment.strip_prefix("name:")) {
                    self.name.get_or_insert_with(|| name.trim().to_string());
                }
                self.pos += line_len;
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Result<(usize, Tok), ParseError> {
        self.skip_trivia();
        let start = self.pos;
        let Some(c) = self.peek_char() else {
            return Ok((start, Tok::End));
        };
        self.started = true;
        let single = |tok| Ok((start, tok));
        match c {
            '+' => {
                self.pos += 1;
                single(Tok::Plus)
            }
            '-' => {
                self.pos += 1;
                single(Tok::Minus)
            }
            '*' => {
                self.pos += 1;
                single(Tok::Star)
            }
            '/' => {
                self.pos += 1;
                single(Tok::Slash)
            }
            '(' => {
                self.pos += 1;
                single(Tok::LParen)
            }
            ')' => {
                self.pos += 1;
                single(Tok::RParen)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let len = self.src[start..]
                    .find(|ch: char| !(ch.is_ascii_alphanumeric() || ch == '_'))
                    .unwrap_or(self.src.len() - start);
                self.pos += len;
                Ok((start, Tok::Word(self.src[start..self.pos].to_string())))
            }
            c if c.is_ascii_digit() || c == '.' => self.number(start),
            other => Err(ParseError {
                offset: start,
                kind: ParseErrorKind::UnexpectedChar(other),
                expected: vec![],
            }),
        }
    }

    fn number(&mut self, start: usize) -> Result<(usize, Tok), ParseError> {
        let bytes = self.src.as_bytes();
        let digits = |mut i: usize| {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            i
        };
        let mut end = digits(start);
        if end < bytes.len() && bytes[end] == b'.' {
            end = digits(end + 1);
        }
        if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
            let mut exp = end + 1;
            if exp < bytes.len() && (bytes[exp] == b'+' || bytes[exp] == b'-') {
                exp += 1;
            }
            if exp < bytes.len() && bytes[exp].is_ascii_digit() {
                end = digits(exp);
            }
        }
        let text = &self.src[start..end];
        let value: f64 = text.parse().map_err(|_| ParseError {
            offset: start,
            kind: ParseErrorKind::InvalidNumber(text.to_string()),
            expected: vec![],
        })?;
        self.pos = end;
        Ok((start, Tok::Number(value)))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    offset: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseError> {
        let mut lexer = Lexer {
            src,
            pos: 0,
            name: None,
            started: false,
        };
        let (offset, tok) = lexer.next()?;
        Ok(Self { lexer, tok, offset })
    }

    fn bump(&mut self) -> Result<(usize, Tok), ParseError> {
        let (offset, tok) = self.lexer.next()?;
        let prev_offset = std::mem::replace(&mut self.offset, offset);
        let prev = std::mem::replace(&mut self.tok, tok);
        Ok((prev_offset, prev))
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        let kind = match &self.tok {
            Tok::End => ParseErrorKind::UnexpectedEnd,
            Tok::RParen => ParseErrorKind::UnbalancedParen,
            other => ParseErrorKind::UnexpectedToken(other.describe()),
        };
        ParseError {
            offset: self.offset,
            kind,
            expected: expected.to_vec(),
        }
    }

    fn sequence(&mut self) -> Result<PulseSequence, ParseError> {
        let mut events = Vec::new();
        if self.tok == Tok::End {
            return Ok(PulseSequence {
                name: self.lexer.name.take(),
                events,
            });
        }
        loop {
            events.push(self.event()?);
            match self.tok {
                Tok::End => break,
                Tok::Minus => {
                    self.bump()?;
                }
                _ => return Err(self.error(&["-", "end of input"])),
            }
        }
        Ok(PulseSequence {
            name: self.lexer.name.take(),
            events,
        })
    }

    fn event(&mut self) -> Result<PulseEvent, ParseError> {
        let Tok::Word(word) = &self.tok else {
            return Err(self.error(EVENT_START));
        };
        let word = word.clone();
        let start = self.offset;
        match word.as_str() {
            "Gz" => {
                self.bump()?;
                Ok(PulseEvent::GradientCrush)
            }
            "tau" => {
                self.bump()?;
                Ok(PulseEvent::Tau)
            }
            "d" => {
                self.bump()?;
                Ok(PulseEvent::Delay(self.parenthesised()?))
            }
            w if w.starts_with('R') => {
                let (axis, spins) = rf_designator(w, start)?;
                self.bump()?;
                let angle = self.parenthesised()?;
                Ok(PulseEvent::Rf { axis, spins, angle })
            }
            _ => Err(ParseError {
                offset: start,
                kind: ParseErrorKind::UnknownIdentifier(word),
                expected: EVENT_START.to_vec(),
            }),
        }
    }

    fn parenthesised(&mut self) -> Result<AngleExpr, ParseError> {
        if self.tok != Tok::LParen {
            return Err(self.error(&["("]));
        }
        let (open, _) = self.bump()?;
        let e = self.expr()?;
        self.close(open)?;
        Ok(e)
    }

    fn close(&mut self, open: usize) -> Result<(), ParseError> {
        if self.tok == Tok::RParen {
            self.bump()?;
            return Ok(());
        }
        let mut err = self.error(&[")"]);
        if matches!(self.tok, Tok::End) {
            // point at the paren that was never closed
            err.offset = open;
            err.kind = ParseErrorKind::UnbalancedParen;
        }
        Err(err)
    }

    fn expr(&mut self) -> Result<AngleExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.tok {
                Tok::Plus => BinaryOp::Add,
                Tok::Minus => BinaryOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = AngleExpr::binary(op, lhs, self.term()?);
        }
    }

    fn term(&mut self) -> Result<AngleExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.tok {
                Tok::Star => BinaryOp::Mul,
                Tok::Slash => BinaryOp::Div,
                _ => return Ok(lhs),
            };
            self.bump()?;
            lhs = AngleExpr::binary(op, lhs, self.unary()?);
        }
    }

    fn unary(&mut self) -> Result<AngleExpr, ParseError> {
        if self.tok == Tok::Minus {
            self.bump()?;
            return Ok(AngleExpr::neg(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<AngleExpr, ParseError> {
        match &self.tok {
            Tok::Number(x) => {
                let x = *x;
                self.bump()?;
                Ok(AngleExpr::Number(x))
            }
            Tok::Word(w) => match Symbol::from_name(w) {
                Some(s) => {
                    self.bump()?;
                    Ok(AngleExpr::Symbol(s))
                }
                None => Err(ParseError {
                    offset: self.offset,
                    kind: ParseErrorKind::UnknownIdentifier(w.clone()),
                    expected: OPERAND.to_vec(),
                }),
            },
            Tok::LParen => {
                let (open, _) = self.bump()?;
                let e = self.expr()?;
                self.close(open)?;
                Ok(e)
            }
            // an empty or truncated operand, not an extra paren
            Tok::RParen => Err(ParseError {
                offset: self.offset,
                kind: ParseErrorKind::UnexpectedToken(Tok::RParen.describe()),
                expected: OPERAND.to_vec(),
            }),
            _ => Err(self.error(OPERAND)),
        }
    }
}

fn rf_designator(word: &str, start: usize) -> Result<(Axis, Spins), ParseError> {
    let mut chars = word[1..].chars();
    let axis = match chars.next() {
        Some('x') => Axis::X,
        Some('y') => Axis::Y,
        Some('z') => Axis::Z,
        other => {
            return Err(ParseError {
                offset: start + 1,
                kind: match other {
                    Some(c) => ParseErrorKind::InvalidAxis(c),
                    None => ParseErrorKind::UnexpectedToken(format!("identifier {word:?}")),
                },
                expected: vec!["x", "y", "z"],
            })
        }
    };
    let spins = match &word[2..] {
        "1" => Spins::First,
        "2" => Spins::Second,
        "12" => Spins::Both,
        other => {
            return Err(ParseError {
                offset: start + 2,
                kind: ParseErrorKind::InvalidSpins(other.to_string()),
                expected: vec!["1", "2", "12"],
            })
        }
    };
    Ok((axis, spins))
}

/// Parses a pulse program. Empty (or comment-only) input is the empty sequence.
pub fn parse(text: &str) -> Result<PulseSequence, ParseError> {
    Parser::new(text)?.sequence()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::ast::render;

    fn pi_over(d: f64) -> AngleExpr {
        AngleExpr::binary(
            BinaryOp::Div,
            AngleExpr::Symbol(Symbol::Pi),
            AngleExpr::Number(d),
        )
    }

    fn minus_pi_over(d: f64) -> AngleExpr {
        AngleExpr::binary(
            BinaryOp::Div,
            AngleExpr::neg(AngleExpr::Symbol(Symbol::Pi)),
            AngleExpr::Number(d),
        )
    }

    const PREP: &str = "Rx1(pi/3) - Gz - Rx1(pi/4) - tau - Ry1(-pi/4) - Gz";

    #[test]
    fn parses_preparation_sequence() {
        let seq = parse(PREP).unwrap();
        let want = vec![
            PulseEvent::rf(Axis::X, Spins::First, pi_over(3.0)),
            PulseEvent::GradientCrush,
            PulseEvent::rf(Axis::X, Spins::First, pi_over(4.0)),
            PulseEvent::Tau,
            PulseEvent::rf(Axis::Y, Spins::First, minus_pi_over(4.0)),
            PulseEvent::GradientCrush,
        ];
        assert_eq!(seq.events, want);
        assert_eq!(render(&seq), PREP);
    }

    #[test]
    fn empty_and_comment_only_inputs() {
        assert!(parse("").unwrap().is_empty());
        assert!(parse("  \n\t # nothing here\n").unwrap().is_empty());
    }

    #[test]
    fn named_sequences_round_trip() {
        let seq = parse("# name: prep\nRx1(pi/3) - Gz").unwrap();
        assert_eq!(seq.name.as_deref(), Some("prep"));
        assert_eq!(parse(&render(&seq)).unwrap(), seq);
    }

    #[test]
    fn invalid_axis_reported_at_axis_letter() {
        let err = parse("Rq1(pi)").unwrap_err();
        assert_eq!(err.offset, 1);
        assert_eq!(err.kind, ParseErrorKind::InvalidAxis('q'));
        assert_eq!(err.expected, vec!["x", "y", "z"]);
    }

    #[test]
    fn invalid_spins() {
        let err = parse("Gz - Rx3(pi)").unwrap_err();
        assert_eq!(err.offset, 7);
        assert!(matches!(err.kind, ParseErrorKind::InvalidSpins(ref s) if s == "3"));
        assert!(parse("Rx21(pi)").is_err());
        assert!(parse("Rx(pi)").is_err());
    }

    #[test]
    fn unbalanced_parentheses() {
        let err = parse("Rx1((pi/2)").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnbalancedParen);
        assert_eq!(err.offset, 3);
        let err = parse("Rx1(pi))").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::UnbalancedParen);
        assert_eq!(err.offset, 7);
    }

    #[test]
    fn unknown_identifiers_are_errors() {
        let err = parse("Rx1(theta)").unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("theta".into()));
        let err = parse("Gx").unwrap_err();
        assert_eq!(err.offset, 0);
    }

    #[test]
    fn separators_are_required() {
        assert!(parse("Gz Gz").is_err());
        assert!(parse("Gz -").is_err());
        assert!(parse("- Gz").is_err());
        assert!(parse("Gz - - Gz").is_err());
    }

    #[test]
    fn precedence_and_unary_minus() {
        let seq = parse("d(1 + 2*J - -n/3)").unwrap();
        let PulseEvent::Delay(e) = &seq.events[0] else {
            panic!()
        };
        assert_eq!(e.to_string(), "1 + 2*J - -n/3");
        let seq = parse("Rz12(2e-3 * (pi + 1.5E+1))").unwrap();
        assert_eq!(seq.events[0].to_string(), "Rz12(0.002*(pi + 15))");
    }

    #[test]
    fn stray_characters() {
        let err = parse("Rx1(pi) ; Gz").unwrap_err();
        assert_eq!(err.offset, 8);
        assert_eq!(err.kind, ParseErrorKind::UnexpectedChar(';'));
    }
}
