//! Explicit parity games and the PGSolver text format.
//!
//! A game file is an optional header `parity <maxid>;` followed by one record
//! per vertex: `<id> <priority> <owner> <succ>(,<succ>)* ("name")? ;`.
//! The header is treated as a hint and not validated against the actual ids.

use std::collections::{HashMap, HashSet};
use std::fmt;

use thiserror::Error;

/// The two players: 0 (even) and 1 (odd).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn from_index(i: u64) -> Option<Player> {
        match i {
            0 => Some(Player::Even),
            1 => Some(Player::Odd),
            _ => None,
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }

    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player that wins a play dominated by `priority`.
    pub fn of_priority(priority: u32) -> Player {
        if priority % 2 == 0 {
            Player::Even
        } else {
            Player::Odd
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.index())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexRecord {
    pub id: u64,
    pub priority: u32,
    pub owner: Player,
    pub successors: Vec<u64>,
    pub name: Option<String>,
}

/// Adjacency-list parity game with validated structure: unique ids, resolvable
/// successors, and a nonempty successor list per vertex (left-totality).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitGame {
    vertices: Vec<VertexRecord>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameFormatError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("vertex {id} declared more than once")]
    DuplicateId { id: u64 },
    #[error("vertex {id} lists unknown successor {successor}")]
    DanglingSuccessor { id: u64, successor: u64 },
    #[error("vertex {id} has no successors (edge relation must be left-total)")]
    EmptySuccessorList { id: u64 },
    #[error("owner of vertex {id} must be 0 or 1 (got {owner})")]
    BadOwner { id: u64, owner: u64 },
    #[error("a game must have at least one vertex")]
    EmptyGame,
}

impl ExplicitGame {
    pub fn new(vertices: Vec<VertexRecord>) -> Result<Self, GameFormatError> {
        if vertices.is_empty() {
            return Err(GameFormatError::EmptyGame);
        }
        let mut ids = HashSet::new();
        for v in &vertices {
            if !ids.insert(v.id) {
                return Err(GameFormatError::DuplicateId { id: v.id });
            }
        }
        for v in &vertices {
            if v.successors.is_empty() {
                return Err(GameFormatError::EmptySuccessorList { id: v.id });
            }
            for &s in &v.successors {
                if !ids.contains(&s) {
                    return Err(GameFormatError::DanglingSuccessor { id: v.id, successor: s });
                }
            }
        }
        Ok(ExplicitGame { vertices })
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.vertices.iter().map(|v| v.successors.len()).sum()
    }

    pub fn max_priority(&self) -> u32 {
        self.vertices.iter().map(|v| v.priority).max().unwrap_or(0)
    }

    /// Map from id to position in the vertex list (the compact index used by
    /// the symbolic encoder).
    pub fn id_index(&self) -> HashMap<u64, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id, i))
            .collect()
    }
}

struct Scanner<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Scanner<'a> {
    fn new(text: &'a str) -> Self {
        Scanner { text, pos: 0, line: 1, column: 1 }
    }

    fn error(&self, message: impl Into<String>) -> GameFormatError {
        GameFormatError::Syntax {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_whitespace(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_whitespace();
        self.peek().is_none()
    }

    fn number(&mut self) -> Result<u64, GameFormatError> {
        self.skip_whitespace();
        let mut digits = String::new();
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            digits.push(self.bump().unwrap());
        }
        if digits.is_empty() {
            return Err(self.error(format!(
                "expected a number, found {:?}",
                self.peek().map(String::from).unwrap_or_else(|| "end of input".into())
            )));
        }
        digits
            .parse()
            .map_err(|_| self.error(format!("number {digits} out of range")))
    }

    fn expect(&mut self, c: char) -> Result<(), GameFormatError> {
        self.skip_whitespace();
        match self.peek() {
            Some(found) if found == c => {
                self.bump();
                Ok(())
            }
            found => Err(self.error(format!(
                "expected '{c}', found {:?}",
                found.map(String::from).unwrap_or_else(|| "end of input".into())
            ))),
        }
    }

    fn try_consume(&mut self, c: char) -> bool {
        self.skip_whitespace();
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_whitespace();
        if self.text[self.pos..].starts_with(word) {
            for _ in 0..word.len() {
                self.bump();
            }
            true
        } else {
            false
        }
    }

    fn quoted_string(&mut self) -> Result<String, GameFormatError> {
        // opening quote already consumed
        let mut s = String::new();
        loop {
            match self.bump() {
                Some('"') => return Ok(s),
                Some(c) => s.push(c),
                None => return Err(self.error("unterminated vertex name")),
            }
        }
    }
}

/// Parses PGSolver text into a validated game.
pub fn parse_pgsolver(text: &str) -> Result<ExplicitGame, GameFormatError> {
    let mut scanner = Scanner::new(text);
    if scanner.keyword("parity") {
        // header is a hint only
        scanner.number()?;
        scanner.expect(';')?;
    }
    let mut vertices = Vec::new();
    while !scanner.at_end() {
        let id = scanner.number()?;
        let priority = scanner.number()?;
        let priority = u32::try_from(priority)
            .map_err(|_| scanner.error(format!("priority {priority} out of range")))?;
        let owner_raw = scanner.number()?;
        let owner = Player::from_index(owner_raw)
            .ok_or(GameFormatError::BadOwner { id, owner: owner_raw })?;
        let mut successors = Vec::new();
        scanner.skip_whitespace();
        if scanner.peek() == Some(';') {
            return Err(GameFormatError::EmptySuccessorList { id });
        }
        loop {
            successors.push(scanner.number()?);
            if !scanner.try_consume(',') {
                break;
            }
        }
        let name = if scanner.try_consume('"') {
            Some(scanner.quoted_string()?)
        } else {
            None
        };
        scanner.expect(';')?;
        vertices.push(VertexRecord { id, priority, owner, successors, name });
    }
    ExplicitGame::new(vertices)
}

/// Serialises a game; `parse_pgsolver(write_pgsolver(g))` reproduces `g`.
pub fn write_pgsolver(game: &ExplicitGame) -> String {
    let max_id = game.vertices().iter().map(|v| v.id).max().unwrap_or(0);
    let mut out = format!("parity {max_id};\n");
    for v in game.vertices() {
        let successors: Vec<String> = v.successors.iter().map(u64::to_string).collect();
        out.push_str(&format!("{} {} {} {}", v.id, v.priority, v.owner, successors.join(",")));
        if let Some(name) = &v.name {
            out.push_str(&format!(" \"{name}\""));
        }
        out.push_str(";\n");
    }
    out
}
