//! The line-oriented algebra format:
//!
//! ```text
//! # comment
//! field QQ
//! vertices 1 2
//! arrow a : 1 -> 1
//! arrow c : 1 -> 2
//! relation a*a
//! relation 2/3*a*c
//! ```
//!
//! See `docs/algebra-format.md` for the grammar.

use std::fmt;

use qhh::{AlgebraElement, Field, Presentation, Quiver, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// A parsed algebra file.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraFile {
    pub presentation: Presentation,
}

impl AlgebraFile {
    pub fn field(&self) -> Field {
        self.presentation.field
    }
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '_' | '°' | '\'' | '.')
}

/// Cursor over one line; columns are 1-based character positions.
struct Cursor<'a> {
    line: usize,
    chars: Vec<(usize, char)>,
    pos: usize,
    text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(line: usize, text: &'a str) -> Self {
        Cursor { line, chars: text.char_indices().collect(), pos: 0, text }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn err<T>(&self, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: self.line, column, message: message.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|c| c.1)
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseError> {
        self.skip_ws();
        let start = self.chars.get(self.pos).map_or(self.text.len(), |c| c.0);
        if self.text[start..].starts_with(tok) {
            self.pos += tok.chars().count();
            Ok(())
        } else {
            self.err(self.column(), format!("expected `{tok}`"))
        }
    }

    fn name(&mut self) -> Result<(usize, String), ParseError> {
        self.skip_ws();
        let col = self.column();
        let mut out = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !is_name_char(c) {
                break;
            }
            out.push(c);
            self.pos += 1;
        }
        if out.is_empty() {
            return self.err(col, "expected a name");
        }
        Ok((col, out))
    }

    fn rest(&mut self) -> (usize, &'a str) {
        self.skip_ws();
        let col = self.column();
        let start = self.chars.get(self.pos).map_or(self.text.len(), |c| c.0);
        self.pos = self.chars.len();
        (col, self.text[start..].trim_end())
    }

    fn integer(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let col = self.column();
        let mut out = String::new();
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            if !c.is_ascii_digit() {
                break;
            }
            out.push(c);
            self.pos += 1;
        }
        (!out.is_empty()).then_some((col, out))
    }
}

/// Parses an algebra file. Relations must be combinations of composable
/// paths of length ≥ 2 over declared arrows.
pub fn parse_algebra(text: &str) -> Result<AlgebraFile, ParseError> {
    parse_algebra_with_field(text, None)
}

/// As [`parse_algebra`], with the file's `field` line replaced by `over`.
pub fn parse_algebra_with_field(text: &str, over: Option<Field>) -> Result<AlgebraFile, ParseError> {
    let mut field: Option<Field> = None;
    let mut vertices: Vec<String> = Vec::new();
    let mut arrows: Vec<(String, String, String)> = Vec::new();
    let mut quiver: Option<Quiver> = None;
    let mut relations: Vec<AlgebraElement> = Vec::new();
    let mut last_line = 0;

    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        last_line = lineno;
        let body = raw.split('#').next().unwrap_or("");
        let mut cur = Cursor::new(lineno, body);
        if cur.at_end() {
            continue;
        }
        let (col, keyword) = cur.name()?;
        match keyword.as_str() {
            "field" => {
                if field.is_some() {
                    return cur.err(col, "duplicate `field` line");
                }
                let (fcol, spec) = cur.rest();
                let parsed = spec.parse::<Field>().map_err(|e| ParseError {
                    line: lineno,
                    column: fcol,
                    message: e.to_string(),
                })?;
                field = Some(over.unwrap_or(parsed));
            }
            "vertices" => {
                if quiver.is_some() {
                    return cur.err(col, "vertices must be declared before the first relation");
                }
                while !cur.at_end() {
                    let (vcol, v) = cur.name()?;
                    if vertices.contains(&v) {
                        return cur.err(vcol, format!("duplicate vertex `{v}`"));
                    }
                    vertices.push(v);
                }
            }
            "arrow" => {
                if quiver.is_some() {
                    return cur.err(col, "arrows must be declared before the first relation");
                }
                let (acol, name) = cur.name()?;
                cur.expect(":")?;
                let (ocol, origin) = cur.name()?;
                cur.expect("->")?;
                let (tcol, tail) = cur.name()?;
                if !cur.at_end() {
                    return cur.err(cur.column(), "unexpected text after arrow");
                }
                if arrows.iter().any(|a| a.0 == name) {
                    return cur.err(acol, format!("duplicate arrow `{name}`"));
                }
                for (c, v) in [(ocol, &origin), (tcol, &tail)] {
                    if !vertices.contains(v) {
                        return cur.err(c, format!("unknown vertex `{v}`"));
                    }
                }
                arrows.push((name, origin, tail));
            }
            "relation" => {
                let f = field.ok_or_else(|| ParseError {
                    line: lineno,
                    column: col,
                    message: "`field` must precede relations".into(),
                })?;
                if quiver.is_none() {
                    quiver = Some(Quiver::new(&vertices, &arrows).map_err(|e| ParseError {
                        line: lineno,
                        column: col,
                        message: e.to_string(),
                    })?);
                }
                relations.push(parse_combination(&mut cur, f, quiver.as_ref().unwrap())?);
            }
            other => return cur.err(col, format!("unknown directive `{other}`")),
        }
    }
    let field =
        field.ok_or(ParseError { line: last_line.max(1), column: 1, message: "missing `field` line".into() })?;
    if vertices.is_empty() {
        return Err(ParseError { line: last_line.max(1), column: 1, message: "no vertices declared".into() });
    }
    let quiver = match quiver {
        Some(q) => q,
        None => Quiver::new(&vertices, &arrows).map_err(|e| ParseError {
            line: last_line.max(1),
            column: 1,
            message: e.to_string(),
        })?,
    };
    Ok(AlgebraFile { presentation: Presentation::new(field, quiver, relations) })
}

fn parse_combination(cur: &mut Cursor, f: Field, q: &Quiver) -> Result<AlgebraElement, ParseError> {
    let mut out = AlgebraElement::zero(f);
    let mut first = true;
    loop {
        let mut neg = false;
        match cur.peek() {
            None if first => return cur.err(cur.column(), "empty relation"),
            None => break,
            Some('+') if !first => {
                cur.pos += 1;
            }
            Some('-') => {
                cur.pos += 1;
                neg = true;
            }
            Some(c) if !first => return cur.err(cur.column(), format!("expected `+` or `-`, found `{c}`")),
            Some(_) => {}
        }
        first = false;
        let term_col = {
            cur.skip_ws();
            cur.column()
        };
        let mut coef = f.one();
        if let Some((ncol, num)) = cur.integer() {
            let n: i64 = num.parse().map_err(|_| ParseError {
                line: cur.line,
                column: ncol,
                message: "coefficient too large".into(),
            })?;
            let mut c = f.from_i64(n);
            if cur.peek() == Some('/') {
                cur.pos += 1;
                let (dcol, den) = cur.integer().ok_or(ParseError {
                    line: cur.line,
                    column: cur.column(),
                    message: "expected a denominator".into(),
                })?;
                let d: i64 = den.parse().map_err(|_| ParseError {
                    line: cur.line,
                    column: dcol,
                    message: "denominator too large".into(),
                })?;
                c = f.from_fraction(n, d).map_err(|e| ParseError {
                    line: cur.line,
                    column: dcol,
                    message: e.to_string(),
                })?;
            }
            coef = c;
            cur.expect("*")?;
        }
        if neg {
            coef = -coef;
        }
        let path = parse_path(cur, q)?;
        if path.len() < 2 {
            return cur.err(
                term_col,
                format!("relation term `{}` has length {} < 2 (not admissible)", q.path_to_string(&path), path.len()),
            );
        }
        out.add_term(&coef, path);
    }
    Ok(out)
}

fn parse_path(cur: &mut Cursor, q: &Quiver) -> Result<qhh::Path, ParseError> {
    let mut arrows = Vec::new();
    loop {
        let (col, name) = cur.name()?;
        let a = q.arrow(&name).map_err(|_| ParseError {
            line: cur.line,
            column: col,
            message: format!("unknown arrow `{name}`"),
        })?;
        if let Some(&prev) = arrows.last() {
            let p: u32 = prev;
            if q.arrow_info(p).tail != q.arrow_info(a).origin {
                return cur.err(
                    col,
                    format!(
                        "non-composable path: `{}` ends at `{}` but `{name}` starts at `{}`",
                        q.arrow_info(p).name,
                        q.vertex_name(q.arrow_info(p).tail),
                        q.vertex_name(q.arrow_info(a).origin)
                    ),
                );
            }
        }
        arrows.push(a);
        if cur.peek() == Some('*') {
            cur.pos += 1;
        } else {
            break;
        }
    }
    Ok(q.path(&arrows).expect("composability checked"))
}

/// Prints a presentation in the file format; parsing the output yields the
/// same presentation.
pub fn print_algebra(p: &Presentation) -> String {
    let q = &p.quiver;
    let mut out = format!("field {}\nvertices {}\n", p.field, q.vertex_names().join(" "));
    for a in q.arrows() {
        out.push_str(&format!("arrow {} : {} -> {}\n", a.name, q.vertex_name(a.origin), q.vertex_name(a.tail)));
    }
    for r in &p.relations {
        out.push_str(&format!("relation {}\n", display_relation(r, q)));
    }
    out
}

fn display_relation(r: &AlgebraElement, q: &Quiver) -> String {
    let mut out = String::new();
    for (k, (path, c)) in r.terms().enumerate() {
        let neg = c.is_negative_looking();
        let mag: Scalar = if neg { -c } else { c.clone() };
        out.push_str(match (k, neg) {
            (0, false) => "",
            (0, true) => "-",
            (_, false) => " + ",
            (_, true) => " - ",
        });
        if !mag.is_one() {
            out.push_str(&format!("{mag}*"));
        }
        out.push_str(&q.path_to_string(path));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const XU: &str = "field GF(2)\nvertices 1 2\narrow a : 1 -> 1\narrow b : 1 -> 1\narrow c : 1 -> 2\n\
                      relation a*a\nrelation b*b\nrelation a*b - b*a\nrelation a*c\n";

    #[test]
    fn parses_the_counterexample() {
        let f = parse_algebra(XU).unwrap();
        assert_eq!(f.presentation, qhh::presentation::xu(Field::Prime(2)));
    }

    #[test]
    fn positioned_errors() {
        let bad = XU.replace("relation a*c", "relation c*a");
        let e = parse_algebra(&bad).unwrap_err();
        assert_eq!((e.line, e.column), (9, 12));
        assert!(e.message.contains("non-composable"), "{e}");

        let e = parse_algebra(&XU.replace("relation a*c", "relation a*d")).unwrap_err();
        assert!(e.message.contains("unknown arrow `d`"));
        let e = parse_algebra(&XU.replace("relation a*c", "relation a + a*c")).unwrap_err();
        assert!(e.message.contains("not admissible"));
        let e = parse_algebra(&XU.replace("GF(2)", "GF(4)")).unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_algebra(&XU.replace("1 -> 2", "1 -> 3")).unwrap_err();
        assert!(e.message.contains("unknown vertex `3`"));
    }

    #[test]
    fn fractions_and_comments() {
        let text = "field QQ # rationals\nvertices v\narrow x : v -> v\narrow y : v -> v\n\
                    relation x*x\nrelation x*y - 2/3*y*x\nrelation -y*y\n";
        let f = parse_algebra(text).unwrap();
        let printed = print_algebra(&f.presentation);
        assert_eq!(parse_algebra(&printed).unwrap(), f);
    }
}
