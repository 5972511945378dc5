use super::{FoError, Formula, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Var(String),
    Identity,
    Forall,
    Exists,
    Dot,
    LParen,
    RParen,
    Star,
    InvOp,
    Equals,
    Not,
    And,
    Or,
    Arrow,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Var(v) => format!("variable {v:?}"),
            Tok::Identity => "\"e\"".into(),
            Tok::Forall => "\"A\"".into(),
            Tok::Exists => "\"E\"".into(),
            Tok::Dot => "\".\"".into(),
            Tok::LParen => "\"(\"".into(),
            Tok::RParen => "\")\"".into(),
            Tok::Star => "\"*\"".into(),
            Tok::InvOp => "\"^-1\"".into(),
            Tok::Equals => "\"=\"".into(),
            Tok::Not => "\"!\"".into(),
            Tok::And => "\"&\"".into(),
            Tok::Or => "\"|\"".into(),
            Tok::Arrow => "\"->\"".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self, Tok::Var(_) | Tok::Identity | Tok::LParen)
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, expected: &str, found: String) -> FoError {
    FoError::Syntax { line, column, expected: expected.to_string(), found }
}

fn lex(text: &str) -> Result<Vec<Spanned>, FoError> {
    let mut out = vec![];
    let chars: Vec<char> = text.chars().collect();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (l, col) = (line, column);
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            column += n;
        };
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                column = 1;
                continue;
            }
            c if c.is_whitespace() => {
                advance(1, &mut i);
                continue;
            }
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '*' | '·' => Tok::Star,
            '=' => Tok::Equals,
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '^' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'1') {
                    advance(3, &mut i);
                    out.push(Spanned { tok: Tok::InvOp, line: l, column: col });
                    continue;
                }
                return Err(syntax(l, col, "\"^-1\"", format!("{:?}", c)));
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    advance(2, &mut i);
                    out.push(Spanned { tok: Tok::Arrow, line: l, column: col });
                    continue;
                }
                return Err(syntax(l, col, "\"->\"", "\"-\"".into()));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                column += i - start;
                let word: String = chars[start..i].iter().collect();
                let tok = match word.as_str() {
                    "A" => Tok::Forall,
                    "E" => Tok::Exists,
                    "e" => Tok::Identity,
                    _ => Tok::Var(word),
                };
                out.push(Spanned { tok, line: l, column: col });
                continue;
            }
            other => return Err(syntax(l, col, "a formula token", format!("{other:?}"))),
        };
        advance(1, &mut i);
        out.push(Spanned { tok, line: l, column: col });
    }
    out.push(Spanned { tok: Tok::End, line, column });
    Ok(out)
}

/// Unbalanced parentheses are reported where they are, before parsing.
fn check_parens(toks: &[Spanned]) -> Result<(), FoError> {
    let mut open: Vec<&Spanned> = vec![];
    for t in toks {
        match t.tok {
            Tok::LParen => open.push(t),
            Tok::RParen => {
                if open.pop().is_none() {
                    return Err(syntax(t.line, t.column, "a formula before \")\"", "unmatched \")\"".into()));
                }
            }
            _ => {}
        }
    }
    match open.last() {
        Some(t) => Err(syntax(t.line, t.column, "a matching \")\"", "end of input".into())),
        None => Ok(()),
    }
}

/// Failure at a token index; the furthest failure wins when alternatives
/// are tried.
struct Fail {
    at: usize,
    expected: &'static str,
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, Fail>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn fail<T>(&self, expected: &'static str) -> PResult<T> {
        Err(Fail { at: self.pos, expected })
    }

    fn expect(&mut self, tok: Tok, expected: &'static str) -> PResult<()> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(expected)
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Forall | Tok::Exists => self.quantifier(),
            _ => self.implication(),
        }
    }

    fn quantifier(&mut self) -> PResult<Formula> {
        let universal = *self.peek() == Tok::Forall;
        self.pos += 1;
        let Tok::Var(v) = self.peek().clone() else { return self.fail("a variable after the quantifier") };
        self.pos += 1;
        self.expect(Tok::Dot, "\".\" after the bound variable")?;
        let body = self.formula()?;
        Ok(if universal { Formula::forall(&v, body) } else { Formula::exists(&v, body) })
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut f = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.pos += 1;
            f = Formula::or(f, self.conjunction()?);
        }
        Ok(f)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::And {
            self.pos += 1;
            f = Formula::and(f, self.unary()?);
        }
        Ok(f)
    }

    fn unary(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Not => {
                self.pos += 1;
                Ok(Formula::not(self.unary()?))
            }
            Tok::Forall | Tok::Exists => self.quantifier(),
            Tok::LParen => {
                // `(x y) = z` is an atom, `(x = y)` a parenthesized formula
                let start = self.pos;
                let atom_err = match self.atom() {
                    Ok(f) => return Ok(f),
                    Err(e) => e,
                };
                self.pos = start + 1;
                let inner = self.formula().and_then(|f| self.expect(Tok::RParen, "\")\"").map(|_| f));
                match inner {
                    Ok(f) => Ok(f),
                    Err(e) => Err(if atom_err.at > e.at { atom_err } else { e }),
                }
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        self.expect(Tok::Equals, "\"=\"")?;
        let rhs = self.term()?;
        Ok(Formula::eq(lhs, rhs))
    }

    fn term(&mut self) -> PResult<Term> {
        let mut t = self.factor()?;
        loop {
            if *self.peek() == Tok::Star {
                self.pos += 1;
                t = Term::mul(t, self.factor()?);
            } else if self.peek().starts_factor() {
                t = Term::mul(t, self.factor()?);
            } else {
                return Ok(t);
            }
        }
    }

    fn factor(&mut self) -> PResult<Term> {
        let mut t = match self.peek().clone() {
            Tok::Var(v) => {
                self.pos += 1;
                Term::Var(v)
            }
            Tok::Identity => {
                self.pos += 1;
                Term::Identity
            }
            Tok::LParen => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(Tok::RParen, "\")\"")?;
                t
            }
            _ => return self.fail("a term"),
        };
        while *self.peek() == Tok::InvOp {
            self.pos += 1;
            t = Term::inv(t);
        }
        Ok(t)
    }
}

/// Parses one formula. Free variables are allowed here; see
/// [`Formula::is_sentence`].
pub fn parse(text: &str) -> Result<Formula, FoError> {
    let toks = lex(text)?;
    check_parens(&toks)?;
    let mut p = Parser { toks, pos: 0 };
    let result = p.formula().and_then(|f| p.expect(Tok::End, "end of input").map(|_| f));
    result.map_err(|e| {
        let t = &p.toks[e.at];
        syntax(t.line, t.column, e.expected, t.tok.describe())
    })
}

/// One non-blank line of a sentence file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceLine {
    pub line: usize,
    pub text: String,
    pub sentence: Result<Formula, FoError>,
}

/// One sentence per line; `#` starts a comment. Positions in errors refer
/// to the file. Formulas with free variables are rejected.
pub fn read_sentences(text: &str) -> Vec<SentenceLine> {
    let mut out = vec![];
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let sentence = parse(body)
            .map_err(|e| match e {
                FoError::Syntax { column, expected, found, .. } => FoError::Syntax { line: i + 1, column, expected, found },
                other => other,
            })
            .and_then(|f| {
                let free = f.free_vars();
                if free.is_empty() {
                    Ok(f)
                } else {
                    Err(FoError::FreeVariables(free.into_iter().collect()))
                }
            });
        out.push(SentenceLine { line: i + 1, text: body.trim().to_string(), sentence });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }

    #[test]
    fn commutativity() {
        let f = parse("A x. A y. x*y = y*x").unwrap();
        let want = Formula::forall(
            "x",
            Formula::forall("y", Formula::eq(Term::mul(v("x"), v("y")), Term::mul(v("y"), v("x")))),
        );
        assert_eq!(f, want);
        assert_eq!(parse("A x. A y. x y = y x").unwrap(), want);
        assert_eq!(parse(&want.to_string()).unwrap(), want);
    }

    #[test]
    fn involution_precedence() {
        let f = parse("E x. !(x = e) & x*x = e").unwrap();
        let want = Formula::exists(
            "x",
            Formula::and(
                Formula::not(Formula::eq(v("x"), Term::Identity)),
                Formula::eq(Term::mul(v("x"), v("x")), Term::Identity),
            ),
        );
        assert_eq!(f, want);
    }

    #[test]
    fn precedence_and_associativity() {
        let f = parse("x = e | y = e & !z = e -> x = y -> y = z").unwrap();
        let a = |x: &str, y: Term| Formula::eq(v(x), y);
        let want = Formula::implies(
            Formula::or(a("x", Term::Identity), Formula::and(a("y", Term::Identity), Formula::not(a("z", Term::Identity)))),
            Formula::implies(a("x", v("y")), a("y", v("z"))),
        );
        assert_eq!(f, want);
        // quantifiers reach as far right as possible, even after a connective
        let g = parse("x = e & A y. y = e | y = x").unwrap();
        assert!(matches!(g, Formula::And(_, ref r) if matches!(**r, Formula::Forall(..))));
        // multiplication associates to the left, ^-1 binds tightest
        let t = parse("x y z^-1 = e").unwrap();
        assert_eq!(t, Formula::eq(Term::mul(Term::mul(v("x"), v("y")), Term::inv(v("z"))), Term::Identity));
    }

    #[test]
    fn parenthesized_terms_and_formulas() {
        assert_eq!(parse("(x y)^-1 = y^-1 x^-1").unwrap().to_string(), "(x * y)^-1 = (y^-1 * x^-1)");
        assert_eq!(parse("((x = y))").unwrap(), Formula::eq(v("x"), v("y")));
        assert_eq!(parse("(x) = (y)").unwrap(), Formula::eq(v("x"), v("y")));
    }

    #[test]
    fn errors_have_positions() {
        // the dangling parenthesis itself
        assert_eq!(parse("A x. (").unwrap_err().position(), Some((1, 6)));
        assert_eq!(parse("A x. ((x = e)").unwrap_err().position(), Some((1, 6)));
        assert_eq!(parse("x = e)").unwrap_err().position(), Some((1, 6)));
        assert_eq!(parse("A . x = e").unwrap_err().position(), Some((1, 3)));
        assert_eq!(parse("x = ").unwrap_err().position(), Some((1, 5)));
        assert_eq!(parse("x = e\n & y ^ 2 = e").unwrap_err().position(), Some((2, 6)));
        assert_eq!(parse("x $ y").unwrap_err().position(), Some((1, 3)));
        // juxtaposition: e e is a product
        assert!(parse("x = e e").is_ok());
        assert_eq!(parse("x = e = e").unwrap_err().position(), Some((1, 7)));
        assert_eq!(parse("A e. e = e").unwrap_err().position(), Some((1, 3)));
        assert_eq!(parse("").unwrap_err().position(), Some((1, 1)));
    }

    #[test]
    fn sentence_files() {
        let text = "# header\nA x. x = x\n\nE y. y = z  # free z\nA x. (\n";
        let lines = read_sentences(text);
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0].line, 2);
        assert!(lines[0].sentence.is_ok());
        assert_eq!(lines[1].sentence, Err(FoError::FreeVariables(vec!["z".into()])));
        assert_eq!(lines[2].sentence.as_ref().unwrap_err().position(), Some((5, 6)));
    }
}
