use thiserror::Error;

use super::term::Term;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    TVar(String),
    Int(usize),
    Fn,
    Let,
    Val,
    In,
    End,
    Forall,
    Arrow,  // =>
    TArrow, // ->
    LParen,
    RParen,
    Comma,
    Eq,
    Star,
    Dot,
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

/// Shared lexer for the term and type syntaxes. `(* ... *)` comments nest.
pub(crate) fn lex(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| SyntaxError {
        line,
        column,
        message,
    };
    macro_rules! bump {
        () => {{
            if chars[i] == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            i += 1;
        }};
    }
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            bump!();
            continue;
        }
        let (tl, tc) = (line, col);
        if c == '(' && chars.get(i + 1) == Some(&'*') {
            let mut depth = 0usize;
            loop {
                if i >= chars.len() {
                    return Err(err(tl, tc, "unterminated comment".into()));
                }
                if chars[i] == '(' && chars.get(i + 1) == Some(&'*') {
                    depth += 1;
                    bump!();
                    bump!();
                } else if chars[i] == '*' && chars.get(i + 1) == Some(&')') {
                    depth -= 1;
                    bump!();
                    bump!();
                    if depth == 0 {
                        break;
                    }
                } else {
                    bump!();
                }
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                bump!();
            }
            let word: String = chars[start..i].iter().collect();
            let tok = match word.as_str() {
                "fn" => Tok::Fn,
                "let" => Tok::Let,
                "val" => Tok::Val,
                "in" => Tok::In,
                "end" => Tok::End,
                "forall" => Tok::Forall,
                _ => Tok::Ident(word),
            };
            out.push(Token {
                tok,
                line: tl,
                column: tc,
            });
            continue;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!();
            }
            let digits: String = chars[start..i].iter().collect();
            let n = digits
                .parse()
                .map_err(|_| err(tl, tc, format!("integer `{digits}` out of range")))?;
            out.push(Token {
                tok: Tok::Int(n),
                line: tl,
                column: tc,
            });
            continue;
        } else if c == '\'' {
            let start = i;
            bump!();
            if i >= chars.len() || !(chars[i].is_ascii_alphabetic() || chars[i] == '_') {
                return Err(err(tl, tc, "expected identifier after `'`".into()));
            }
            while i < chars.len()
                && (chars[i].is_ascii_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                bump!();
            }
            out.push(Token {
                tok: Tok::TVar(chars[start..i].iter().collect()),
                line: tl,
                column: tc,
            });
            continue;
        } else {
            let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
            if two == "=>" || two == "->" {
                bump!();
                bump!();
                out.push(Token {
                    tok: if two == "=>" { Tok::Arrow } else { Tok::TArrow },
                    line: tl,
                    column: tc,
                });
                continue;
            }
            match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                ',' => Tok::Comma,
                '=' => Tok::Eq,
                '*' => Tok::Star,
                '.' => Tok::Dot,
                other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
            }
        };
        bump!();
        out.push(Token {
            tok,
            line: tl,
            column: tc,
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

pub(crate) struct Cursor {
    toks: Vec<Token>,
    pos: usize,
}

impl Cursor {
    pub(crate) fn new(toks: Vec<Token>) -> Self {
        Cursor { toks, pos: 0 }
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub(crate) fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> SyntaxError {
        let t = &self.toks[self.pos];
        SyntaxError {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    pub(crate) fn expect(&mut self, want: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == want {
            self.next();
            Ok(())
        } else {
            Err(self.error(format!("expected {what}, found {}", describe(self.peek()))))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.next();
                Ok(s)
            }
            other => Err(self.error(format!("expected identifier, found {}", describe(&other)))),
        }
    }

    pub(crate) fn finish(&self) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", describe(self.peek()))))
        }
    }
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::TVar(s) => format!("type variable `{s}`"),
        Tok::Int(n) => format!("integer `{n}`"),
        Tok::Fn => "`fn`".into(),
        Tok::Let => "`let`".into(),
        Tok::Val => "`val`".into(),
        Tok::In => "`in`".into(),
        Tok::End => "`end`".into(),
        Tok::Forall => "`forall`".into(),
        Tok::Arrow => "`=>`".into(),
        Tok::TArrow => "`->`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Star => "`*`".into(),
        Tok::Dot => "`.`".into(),
        Tok::Eof => "end of input".into(),
    }
}

/// Parses the concrete term syntax. Application is left-associative and
/// `fn x=>` extends as far right as possible.
pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut cur = Cursor::new(lex(src)?);
    let t = term(&mut cur)?;
    cur.finish()?;
    Ok(t)
}

fn term(cur: &mut Cursor) -> Result<Term, SyntaxError> {
    match cur.peek() {
        Tok::Fn => {
            cur.next();
            let x = cur.ident()?;
            cur.expect(Tok::Arrow, "`=>`")?;
            Ok(Term::abs(x, term(cur)?))
        }
        Tok::Let => {
            cur.next();
            cur.expect(Tok::Val, "`val`")?;
            cur.expect(Tok::LParen, "`(`")?;
            let x = cur.ident()?;
            cur.expect(Tok::Comma, "`,`")?;
            let y = cur.ident()?;
            if x == y {
                return Err(cur.error(format!("pattern binds `{x}` twice")));
            }
            cur.expect(Tok::RParen, "`)`")?;
            cur.expect(Tok::Eq, "`=`")?;
            let rhs = term(cur)?;
            cur.expect(Tok::In, "`in`")?;
            let body = term(cur)?;
            cur.expect(Tok::End, "`end`")?;
            Ok(Term::let_pair(x, y, rhs, body))
        }
        _ => {
            let mut t = atom(cur)?;
            while matches!(cur.peek(), Tok::Ident(_) | Tok::LParen) {
                t = Term::app(t, atom(cur)?);
            }
            Ok(t)
        }
    }
}

fn atom(cur: &mut Cursor) -> Result<Term, SyntaxError> {
    match cur.peek().clone() {
        Tok::Ident(x) => {
            cur.next();
            Ok(Term::Var(x))
        }
        Tok::LParen => {
            cur.next();
            let a = term(cur)?;
            match cur.peek() {
                Tok::Comma => {
                    cur.next();
                    let b = term(cur)?;
                    cur.expect(Tok::RParen, "`)`")?;
                    Ok(Term::pair(a, b))
                }
                _ => {
                    cur.expect(Tok::RParen, "`)` or `,`")?;
                    Ok(a)
                }
            }
        }
        other => Err(cur.error(format!("expected a term, found {}", describe(&other)))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_term("fn x=> x").unwrap(),
            Term::abs("x", Term::var("x"))
        );
        let v0 = parse_term("fn f1=> fn f0=> fn x=> f0 (f1 x)").unwrap();
        assert_eq!(
            v0,
            Term::abss(
                ["f1", "f0", "x"],
                Term::app(Term::var("f0"), Term::app(Term::var("f1"), Term::var("x")))
            )
        );
        assert_eq!(
            parse_term("let val (x,y)=p in (x,y) end").unwrap(),
            Term::let_pair(
                "x",
                "y",
                Term::var("p"),
                Term::pair(Term::var("x"), Term::var("y"))
            )
        );
    }

    #[test]
    fn application_is_left_associative_and_fn_extends_right() {
        let t = parse_term("fn x=> a b c").unwrap();
        assert_eq!(
            t,
            Term::abs(
                "x",
                Term::app(Term::app(Term::var("a"), Term::var("b")), Term::var("c"))
            )
        );
    }

    #[test]
    fn comments_are_skipped() {
        let t = parse_term("(* identity (* nested *) *) fn x=> (* body *) x").unwrap();
        assert_eq!(t, Term::abs("x", Term::var("x")));
    }

    #[test]
    fn reports_positions() {
        let e = parse_term("fn x=>\n  (x, ").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        let e = parse_term("fn => x").unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        assert!(parse_term("let val (x,x)=p in x end").is_err());
        assert!(parse_term("(* open").is_err());
        assert!(parse_term("f fn x=> x").is_err());
    }
}
