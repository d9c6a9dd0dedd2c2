//! Newick form of a caterpillar line.
//!
//! The spine is written as a nested chain rooted at the vertex nearest `q`:
//! each vertex lists the subtree of its predecessor (with the inner edge
//! length) followed by its own rays. Rays are unbounded and carry no length.
//! The root carries a comment `[&p=RAY:OFFSET,q=RAY:OFFSET]` recording the
//! marks. Labels are 1-based and lengths are exact (`3`, `7/2`).

use troplin::tree::MetricTree;
use troplin::Scalar;

use crate::error::CliError;

/// The combinatorial and metric content of a Newick line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewickLine {
    /// Rays at each spine vertex, from `p` to `q`, 0-based and sorted.
    pub spine: Vec<Vec<usize>>,
    pub edges: Vec<Scalar>,
    /// Ray and offset of `p`.
    pub p: (usize, Scalar),
    /// Ray and offset of `q`.
    pub q: (usize, Scalar),
}

impl NewickLine {
    pub fn from_tree(t: &MetricTree) -> NewickLine {
        NewickLine {
            spine: t
                .vertices
                .iter()
                .map(|v| {
                    let mut l = v.leaves.clone();
                    l.sort_unstable();
                    l
                })
                .collect(),
            edges: t.edges.iter().map(|e| e.length).collect(),
            p: (t.p_mark.leaf, t.p_mark.offset),
            q: (t.q_mark.leaf, t.q_mark.offset),
        }
    }

    pub fn to_newick(&self) -> String {
        let mut out = String::new();
        for (k, rays) in self.spine.iter().enumerate() {
            let mut inner = Vec::new();
            if k > 0 {
                inner.push(format!("{}:{}", out, self.edges[k - 1]));
            }
            inner.extend(rays.iter().map(|r| (r + 1).to_string()));
            out = format!("({})", inner.join(","));
        }
        format!("{out}[&p={}:{},q={}:{}];", self.p.0 + 1, self.p.1, self.q.0 + 1, self.q.1)
    }
}

pub fn write(t: &MetricTree) -> String {
    NewickLine::from_tree(t).to_newick()
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, reason: impl ToString) -> CliError {
        CliError::parse("Newick", format!("at byte {}: {}", self.pos, reason.to_string()))
    }

    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.text[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.text[self.pos..].chars().next()
    }

    fn expect(&mut self, c: char) -> Result<(), CliError> {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.err(format!("expected {c:?}")))
        }
    }

    fn token(&mut self) -> &'a str {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest.find(|c: char| "(),:;[]".contains(c) || c.is_whitespace()).unwrap_or(rest.len());
        self.pos += end;
        &rest[..end]
    }

    fn label(&mut self) -> Result<usize, CliError> {
        let tok = self.token();
        match tok.parse::<usize>() {
            Ok(x) if x >= 1 => Ok(x - 1),
            _ => Err(self.err(format!("{tok:?} is not a ray label"))),
        }
    }

    fn length(&mut self) -> Result<Scalar, CliError> {
        self.expect(':')?;
        let tok = self.token();
        tok.parse::<Scalar>().map_err(|_| self.err(format!("{tok:?} is not a length")))
    }

    /// Parses one vertex, appending its predecessors and then itself to
    /// `spine` and the inner edge lengths to `edges`.
    fn vertex(&mut self, spine: &mut Vec<Vec<usize>>, edges: &mut Vec<Scalar>) -> Result<(), CliError> {
        self.expect('(')?;
        let mut rays = Vec::new();
        let mut nested = false;
        loop {
            if self.peek() == Some('(') {
                if nested {
                    return Err(self.err("more than one inner edge at a vertex; not a caterpillar"));
                }
                nested = true;
                self.vertex(spine, edges)?;
                edges.push(self.length()?);
            } else {
                rays.push(self.label()?);
            }
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(self.err("expected ',' or ')'")),
            }
        }
        rays.sort_unstable();
        spine.push(rays);
        Ok(())
    }

    fn mark(&mut self, key: char) -> Result<(usize, Scalar), CliError> {
        self.expect(key)?;
        self.expect('=')?;
        let ray = {
            self.skip_ws();
            let rest = &self.text[self.pos..];
            let end = rest.find(':').ok_or_else(|| self.err("expected ':' in mark"))?;
            let tok = rest[..end].trim();
            self.pos += end;
            match tok.parse::<usize>() {
                Ok(x) if x >= 1 => x - 1,
                _ => return Err(self.err(format!("{tok:?} is not a ray label"))),
            }
        };
        self.expect(':')?;
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let end = rest.find([',', ']']).ok_or_else(|| self.err("unterminated mark"))?;
        let tok = rest[..end].trim();
        self.pos += end;
        let offset = tok.parse::<Scalar>().map_err(|_| self.err(format!("{tok:?} is not an offset")))?;
        Ok((ray, offset))
    }
}

/// Parses the Newick form written by [`NewickLine::to_newick`].
pub fn parse(text: &str) -> Result<NewickLine, CliError> {
    let mut parser = Parser { text, pos: 0 };
    let (mut spine, mut edges) = (Vec::new(), Vec::new());
    parser.vertex(&mut spine, &mut edges)?;
    parser.expect('[')?;
    parser.expect('&')?;
    let p = parser.mark('p')?;
    parser.expect(',')?;
    let q = parser.mark('q')?;
    parser.expect(']')?;
    parser.expect(';')?;
    if parser.peek().is_some() {
        return Err(parser.err("trailing input"));
    }
    Ok(NewickLine { spine, edges, p, q })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn caterpillar_text() {
        let line = NewickLine {
            spine: vec![vec![1, 6], vec![2], vec![3], vec![5], vec![0, 4]],
            edges: vec![s(9), s(1), s(1), Scalar::new(5, 2)],
            p: (1, s(3)),
            q: (0, s(18)),
        };
        let text = line.to_newick();
        assert_eq!(text, "(((((2,7):9,3):1,4):1,6):5/2,1,5)[&p=2:3,q=1:18];");
        assert_eq!(parse(&text).unwrap(), line);
    }

    #[test]
    fn single_vertex() {
        let line = NewickLine { spine: vec![vec![0, 1, 2, 3]], edges: vec![], p: (1, s(0)), q: (0, s(4)) };
        assert_eq!(line.to_newick(), "(1,2,3,4)[&p=2:0,q=1:4];");
        assert_eq!(parse(&line.to_newick()).unwrap(), line);
    }

    #[test]
    fn whitespace_and_decimals_are_accepted() {
        let line = parse(" ( (1 , 2) : 1.5 , 3 ) [&p=2:0.25, q=1:1] ; ").unwrap();
        assert_eq!(line.edges, vec![Scalar::new(3, 2)]);
        assert_eq!(line.p, (1, Scalar::new(1, 4)));
    }

    #[test]
    fn rejects_malformed() {
        for bad in [
            "",
            "(1,2,3);",
            "((1,2),3)[&p=1:0,q=2:0];",
            "((1,2):1,(3,4):1)[&p=1:0,q=2:0];",
            "(1,2,3)[&p=0:0,q=2:0];",
            "(1,2,x)[&p=1:0,q=2:0];",
            "(1,2,3)[&p=1:0,q=2:0]; extra",
        ] {
            assert_eq!(parse(bad).unwrap_err().exit_code(), 2, "{bad:?}");
        }
    }
}
