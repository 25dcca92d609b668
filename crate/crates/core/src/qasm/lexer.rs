use super::ParseError;

/// Exact text of the slicing directive.
pub const BREAKBARRIER_DIRECTIVE: &str = "// cirquo:breakbarrier";

#[derive(Debug, Clone, PartialEq)]
pub enum Tok {
    Ident(String),
    Int(u64),
    Real(f64),
    Str(String),
    Semi,
    Comma,
    LBracket,
    RBracket,
    LParen,
    RParen,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    BreakDirective,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Int(v) => v.to_string(),
            Tok::Real(v) => v.to_string(),
            Tok::Str(s) => format!("\"{s}\""),
            Tok::Semi => ";".into(),
            Tok::Comma => ",".into(),
            Tok::LBracket => "[".into(),
            Tok::RBracket => "]".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
            Tok::Arrow => "->".into(),
            Tok::Plus => "+".into(),
            Tok::Minus => "-".into(),
            Tok::Star => "*".into(),
            Tok::Slash => "/".into(),
            Tok::Caret => "^".into(),
            Tok::BreakDirective => BREAKBARRIER_DIRECTIVE.into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub column: usize,
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let mut line_has_token = false;

    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            line_has_token = false;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            let end = chars[i..]
                .iter()
                .position(|&c| c == '\n')
                .map_or(chars.len(), |p| i + p);
            let comment: String = chars[i..end].iter().collect();
            if !line_has_token && comment.trim_end() == BREAKBARRIER_DIRECTIVE {
                out.push(Token {
                    tok: Tok::BreakDirective,
                    line: start_line,
                    column: start_col,
                });
            }
            col += end - i;
            i = end;
            continue;
        }
        line_has_token = true;

        let single = match c {
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            '[' => Some(Tok::LBracket),
            ']' => Some(Tok::RBracket),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '+' => Some(Tok::Plus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                col += 1;
                Some(Tok::Arrow)
            }
            '-' => Some(Tok::Minus),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
            });
            i += 1;
            col += 1;
            continue;
        }

        if c.is_ascii_alphabetic() || c == '_' {
            let len = chars[i..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric() || **c == '_')
                .count();
            out.push(Token {
                tok: Tok::Ident(chars[i..i + len].iter().collect()),
                line: start_line,
                column: start_col,
            });
            i += len;
            col += len;
            continue;
        }

        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let mut j = i;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let mut real = false;
            if j < chars.len() && chars[j] == '.' {
                real = true;
                j += 1;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
            }
            if j < chars.len() && (chars[j] == 'e' || chars[j] == 'E') {
                let mut k = j + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    real = true;
                    j = k;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
            }
            let s: String = chars[i..j].iter().collect();
            let tok = if real {
                Tok::Real(s.parse().map_err(|_| {
                    ParseError::new("malformed number", start_line, start_col, &s)
                })?)
            } else {
                Tok::Int(s.parse().map_err(|_| {
                    ParseError::new("integer literal too large", start_line, start_col, &s)
                })?)
            };
            out.push(Token {
                tok,
                line: start_line,
                column: start_col,
            });
            col += j - i;
            i = j;
            continue;
        }

        if c == '"' {
            let Some(len) = chars[i + 1..].iter().position(|&c| c == '"' || c == '\n') else {
                return Err(ParseError::new(
                    "unterminated string",
                    start_line,
                    start_col,
                    "\"",
                ));
            };
            if chars[i + 1 + len] == '\n' {
                return Err(ParseError::new(
                    "unterminated string",
                    start_line,
                    start_col,
                    "\"",
                ));
            }
            out.push(Token {
                tok: Tok::Str(chars[i + 1..i + 1 + len].iter().collect()),
                line: start_line,
                column: start_col,
            });
            i += len + 2;
            col += len + 2;
            continue;
        }

        return Err(ParseError::new(
            "unexpected character",
            start_line,
            start_col,
            &c.to_string(),
        ));
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<Tok> {
        tokenize(text).unwrap().into_iter().map(|t| t.tok).collect()
    }

    #[test]
    fn basic_tokens() {
        assert_eq!(
            kinds("cp(pi/2) q[0],q[1];"),
            vec![
                Tok::Ident("cp".into()),
                Tok::LParen,
                Tok::Ident("pi".into()),
                Tok::Slash,
                Tok::Int(2),
                Tok::RParen,
                Tok::Ident("q".into()),
                Tok::LBracket,
                Tok::Int(0),
                Tok::RBracket,
                Tok::Comma,
                Tok::Ident("q".into()),
                Tok::LBracket,
                Tok::Int(1),
                Tok::RBracket,
                Tok::Semi,
                Tok::Eof
            ]
        );
        assert_eq!(kinds("1.5e-3 2e3 .5")[..3], [Tok::Real(1.5e-3), Tok::Real(2e3), Tok::Real(0.5)]);
        assert_eq!(kinds("measure q -> c;")[2], Tok::Arrow);
    }

    #[test]
    fn directive_only_on_own_line() {
        let toks = tokenize("h q[0];\n  // cirquo:breakbarrier\nx q[0]; // cirquo:breakbarrier\n").unwrap();
        let directives: Vec<_> = toks.iter().filter(|t| t.tok == Tok::BreakDirective).collect();
        assert_eq!(directives.len(), 1);
        assert_eq!((directives[0].line, directives[0].column), (2, 3));
        assert_eq!(kinds("// cirquo:breakbarrier2\n"), vec![Tok::Eof]);
    }

    #[test]
    fn positions() {
        let toks = tokenize("a\n  b").unwrap();
        assert_eq!((toks[1].line, toks[1].column), (2, 3));
        let err = tokenize("h q[0];\n  $").unwrap_err();
        assert_eq!((err.line, err.column), (2, 3));
    }
}
