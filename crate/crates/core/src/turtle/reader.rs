use std::collections::HashMap;

use super::lexer::{Lexer, Tok};
use super::{Pos, TurtleError};
use crate::kb::{vocab, Iri, PrefixMap};

const INTEGER_TYPES: &[&str] = &[
    "int",
    "integer",
    "long",
    "short",
    "byte",
    "nonNegativeInteger",
    "positiveInteger",
    "nonPositiveInteger",
    "negativeInteger",
    "unsignedInt",
    "unsignedLong",
    "unsignedShort",
    "unsignedByte",
];

/// A node of the parsed graph, before lifting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(super) enum Node {
    Iri(Iri),
    Blank(u32),
    Integer(i64),
    /// Any non-integer literal: lexical form and datatype.
    Text(String, Option<Iri>),
}

#[derive(Clone, Debug)]
pub(super) struct RawTriple {
    pub subject: Node,
    pub predicate: Iri,
    pub object: Node,
    /// Position of the predicate token.
    pub pos: Pos,
}

pub(super) struct Reader<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    pos: Pos,
    last_pos: Pos,
    pub prefixes: PrefixMap,
    labels: HashMap<String, u32>,
    next_blank: u32,
    pub triples: Vec<RawTriple>,
}

impl<'a> Reader<'a> {
    pub(super) fn new(src: &'a str) -> Result<Self, TurtleError> {
        let mut lexer = Lexer::new(src);
        let (tok, pos) = lexer.next_token()?;
        Ok(Reader {
            lexer,
            tok,
            pos,
            last_pos: pos,
            prefixes: PrefixMap::standard(),
            labels: HashMap::new(),
            next_blank: 0,
            triples: Vec::new(),
        })
    }

    fn advance(&mut self) -> Result<(Tok, Pos), TurtleError> {
        let (next, pos) = self.lexer.next_token()?;
        let tok = std::mem::replace(&mut self.tok, next);
        let at = std::mem::replace(&mut self.pos, pos);
        self.last_pos = at;
        Ok((tok, at))
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, TurtleError> {
        Err(TurtleError::syntax(
            self.pos,
            format!("expected {wanted}, found {}", self.tok.describe()),
        ))
    }

    fn expect(&mut self, tok: Tok, wanted: &str) -> Result<(), TurtleError> {
        if self.tok == tok {
            self.advance()?;
            Ok(())
        } else if self.tok == Tok::Eof {
            // Point at the last token of the unfinished construct.
            Err(TurtleError::syntax(
                self.last_pos,
                format!("expected {wanted} before end of input"),
            ))
        } else {
            self.unexpected(wanted)
        }
    }

    fn fresh(&mut self) -> Node {
        let b = Node::Blank(self.next_blank);
        self.next_blank += 1;
        b
    }

    pub(super) fn parse_document(&mut self) -> Result<(), TurtleError> {
        while self.tok != Tok::Eof {
            if self.tok == Tok::PrefixDirective {
                self.prefix_directive()?;
            } else {
                self.statement()?;
            }
        }
        Ok(())
    }

    fn prefix_directive(&mut self) -> Result<(), TurtleError> {
        self.advance()?;
        let label = match &self.tok {
            Tok::PName { prefix, local } if local.is_empty() => prefix.clone(),
            _ => return self.unexpected("a prefix label such as `nis:`"),
        };
        self.advance()?;
        let ns = match &self.tok {
            Tok::Iri(i) => i.clone(),
            _ => return self.unexpected("a namespace IRI"),
        };
        self.advance()?;
        self.expect(Tok::Dot, "`.` after the prefix directive")?;
        self.prefixes.insert(label, ns);
        Ok(())
    }

    fn statement(&mut self) -> Result<(), TurtleError> {
        match self.tok {
            Tok::LBracket => {
                let subject = self.blank_property_list()?;
                if self.tok != Tok::Dot {
                    self.predicate_object_list(&subject)?;
                }
            }
            _ => {
                let subject = self.subject()?;
                self.predicate_object_list(&subject)?;
            }
        }
        self.expect(Tok::Dot, "`.` to end the statement")
    }

    fn resolve(&self, prefix: &str, local: &str, at: Pos) -> Result<Iri, TurtleError> {
        let ns = self
            .prefixes
            .get(prefix)
            .ok_or_else(|| TurtleError::syntax(at, format!("unknown prefix `{prefix}:`")))?;
        if local.is_empty() {
            return Err(TurtleError::syntax(
                at,
                format!("`{prefix}:` needs a local name here"),
            ));
        }
        Ok(Iri::from_parts(ns, local))
    }

    fn iri_token(&mut self) -> Result<Option<Iri>, TurtleError> {
        let iri = match &self.tok {
            Tok::Iri(i) => Iri::new(i),
            Tok::PName { prefix, local } => self.resolve(prefix, local, self.pos)?,
            _ => return Ok(None),
        };
        self.advance()?;
        Ok(Some(iri))
    }

    fn blank_label(&mut self) -> Result<Option<Node>, TurtleError> {
        let Tok::Blank(label) = &self.tok else {
            return Ok(None);
        };
        let id = match self.labels.get(label) {
            Some(&id) => id,
            None => {
                let id = self.next_blank;
                self.next_blank += 1;
                self.labels.insert(label.clone(), id);
                id
            }
        };
        self.advance()?;
        Ok(Some(Node::Blank(id)))
    }

    fn subject(&mut self) -> Result<Node, TurtleError> {
        if let Some(i) = self.iri_token()? {
            return Ok(Node::Iri(i));
        }
        if let Some(b) = self.blank_label()? {
            return Ok(b);
        }
        if self.tok == Tok::LParen {
            return self.collection();
        }
        self.unexpected("a subject")
    }

    fn predicate_object_list(&mut self, subject: &Node) -> Result<(), TurtleError> {
        loop {
            let at = self.pos;
            let predicate = if self.tok == Tok::A {
                self.advance()?;
                vocab::RDF_TYPE.clone()
            } else {
                match self.iri_token()? {
                    Some(i) => i,
                    None => return self.unexpected("a predicate"),
                }
            };
            loop {
                let object = self.object()?;
                self.triples.push(RawTriple {
                    subject: subject.clone(),
                    predicate: predicate.clone(),
                    object,
                    pos: at,
                });
                if self.tok != Tok::Comma {
                    break;
                }
                self.advance()?;
            }
            if self.tok != Tok::Semi {
                return Ok(());
            }
            while self.tok == Tok::Semi {
                self.advance()?;
            }
            if matches!(self.tok, Tok::Dot | Tok::RBracket) {
                return Ok(());
            }
        }
    }

    fn object(&mut self) -> Result<Node, TurtleError> {
        if let Some(i) = self.iri_token()? {
            return Ok(Node::Iri(i));
        }
        if let Some(b) = self.blank_label()? {
            return Ok(b);
        }
        match self.tok.clone() {
            Tok::LBracket => self.blank_property_list(),
            Tok::LParen => self.collection(),
            Tok::Integer(v) => {
                self.advance()?;
                Ok(Node::Integer(v))
            }
            Tok::Str(s) => {
                let at = self.pos;
                self.advance()?;
                self.literal(s, at)
            }
            Tok::Eof => Err(TurtleError::syntax(
                self.last_pos,
                "expected an object before end of input",
            )),
            _ => self.unexpected("an object"),
        }
    }

    fn literal(&mut self, lexical: String, at: Pos) -> Result<Node, TurtleError> {
        if self.tok != Tok::DatatypeMark {
            return Ok(Node::Text(lexical, None));
        }
        self.advance()?;
        let Some(datatype) = self.iri_token()? else {
            return self.unexpected("a datatype IRI after `^^`");
        };
        let is_integer = datatype
            .as_str()
            .strip_prefix(crate::kb::XSD_NS)
            .is_some_and(|local| INTEGER_TYPES.contains(&local));
        if !is_integer {
            return Ok(Node::Text(lexical, Some(datatype)));
        }
        lexical
            .trim()
            .parse::<i64>()
            .map(Node::Integer)
            .map_err(|_| TurtleError::syntax(at, format!("`{lexical}` is not a valid integer")))
    }

    fn blank_property_list(&mut self) -> Result<Node, TurtleError> {
        self.advance()?;
        let node = self.fresh();
        if self.tok != Tok::RBracket {
            self.predicate_object_list(&node)?;
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok(node)
    }

    fn collection(&mut self) -> Result<Node, TurtleError> {
        let open = self.pos;
        self.advance()?;
        let mut items = Vec::new();
        while self.tok != Tok::RParen {
            if matches!(self.tok, Tok::Eof | Tok::Dot) {
                return Err(TurtleError::syntax(
                    open,
                    "unterminated collection: missing `)`",
                ));
            }
            let at = self.pos;
            items.push((self.object()?, at));
        }
        self.advance()?;
        let nil = Node::Iri(vocab::RDF_NIL.clone());
        let cells: Vec<Node> = items.iter().map(|_| self.fresh()).collect();
        for (i, (item, at)) in items.into_iter().enumerate() {
            self.triples.push(RawTriple {
                subject: cells[i].clone(),
                predicate: vocab::RDF_FIRST.clone(),
                object: item,
                pos: at,
            });
            self.triples.push(RawTriple {
                subject: cells[i].clone(),
                predicate: vocab::RDF_REST.clone(),
                object: cells.get(i + 1).cloned().unwrap_or_else(|| nil.clone()),
                pos: at,
            });
        }
        Ok(cells.into_iter().next().unwrap_or(nil))
    }
}
