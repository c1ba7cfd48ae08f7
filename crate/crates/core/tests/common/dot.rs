//! A small recursive-descent checker for the DOT language (graph, node,
//! edge and attribute statements), used to validate exports.

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eq,
    Semi,
    Comma,
    Arrow,
    Line,
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '{' => {
                toks.push(Tok::LBrace);
                i += 1
            }
            '}' => {
                toks.push(Tok::RBrace);
                i += 1
            }
            '[' => {
                toks.push(Tok::LBracket);
                i += 1
            }
            ']' => {
                toks.push(Tok::RBracket);
                i += 1
            }
            '=' => {
                toks.push(Tok::Eq);
                i += 1
            }
            ';' => {
                toks.push(Tok::Semi);
                i += 1
            }
            ',' => {
                toks.push(Tok::Comma);
                i += 1
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                toks.push(Tok::Arrow);
                i += 2
            }
            '-' if chars.get(i + 1) == Some(&'-') => {
                toks.push(Tok::Line);
                i += 2
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => break,
                        Some('\\') => {
                            let next = chars.get(i + 1).ok_or("dangling escape")?;
                            s.push('\\');
                            s.push(*next);
                            i += 2;
                        }
                        Some(c) => {
                            s.push(*c);
                            i += 1;
                        }
                    }
                }
                i += 1;
                toks.push(Tok::Id(s));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' || c == '-' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                if i == start {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let numeral = word.chars().all(|c| c.is_ascii_digit() || c == '.' || c == '-');
                let ident = !word.starts_with(|c: char| c.is_ascii_digit()) && !word.contains('.');
                if !numeral && !ident {
                    return Err(format!("bad identifier {word:?}"));
                }
                toks.push(Tok::Id(word));
            }
            c => return Err(format!("unexpected character {c:?}")),
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
    directed: bool,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), String> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            got => Err(format!("expected {t:?}, got {got:?} at token {}", self.pos - 1)),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.next() {
            Some(Tok::Id(s)) => Ok(s),
            got => Err(format!("expected identifier, got {got:?} at token {}", self.pos - 1)),
        }
    }

    fn attr_list(&mut self) -> Result<(), String> {
        while self.peek() == Some(&Tok::LBracket) {
            self.next();
            while self.peek() != Some(&Tok::RBracket) {
                self.id()?;
                self.expect(Tok::Eq)?;
                self.id()?;
                if matches!(self.peek(), Some(Tok::Comma) | Some(Tok::Semi)) {
                    self.next();
                }
            }
            self.expect(Tok::RBracket)?;
        }
        Ok(())
    }

    fn stmt(&mut self) -> Result<(), String> {
        let first = self.id()?;
        match self.peek() {
            Some(Tok::Eq) => {
                self.next();
                self.id()?;
            }
            Some(Tok::Arrow) | Some(Tok::Line) => {
                while let Some(op @ (Tok::Arrow | Tok::Line)) = self.peek().cloned() {
                    if (op == Tok::Arrow) != self.directed {
                        return Err("edge operator does not match graph type".into());
                    }
                    self.next();
                    self.id()?;
                }
                self.attr_list()?;
            }
            _ => {
                if matches!(first.as_str(), "graph" | "node" | "edge") && self.peek() != Some(&Tok::LBracket) {
                    return Err(format!("{first} statement without attributes"));
                }
                self.attr_list()?;
            }
        }
        if self.peek() == Some(&Tok::Semi) {
            self.next();
        }
        Ok(())
    }

    fn graph(&mut self) -> Result<(), String> {
        let mut head = self.id()?;
        if head == "strict" {
            head = self.id()?;
        }
        self.directed = match head.as_str() {
            "digraph" => true,
            "graph" => false,
            other => return Err(format!("expected graph or digraph, got {other}")),
        };
        if matches!(self.peek(), Some(Tok::Id(_))) {
            self.next();
        }
        self.expect(Tok::LBrace)?;
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek().is_none() {
                return Err("unterminated graph body".into());
            }
            self.stmt()?;
        }
        self.expect(Tok::RBrace)?;
        if self.pos != self.toks.len() {
            return Err("trailing tokens after graph".into());
        }
        Ok(())
    }
}

/// Ok when `src` is one syntactically valid DOT graph.
pub fn check_dot(src: &str) -> Result<(), String> {
    let toks = lex(src)?;
    Parser { toks, pos: 0, directed: true }.graph()
}
