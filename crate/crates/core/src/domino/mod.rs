//! A deterministic grid micro-world of dominoes.
//!
//! Cells are numbered row-major (`c{y*width + x}`), `x` grows east and `y`
//! grows south. A falling domino strikes the neighbour in its falling
//! direction; if that neighbour is upright and no barrier sits on the shared
//! edge, it falls in the direction its routing assigns to the incoming
//! direction. Every domino falls at most once.

mod actions;
mod family;
mod scenario;
mod sim;

use std::collections::BTreeSet;
use std::fmt;

pub use actions::MicroAction;
pub use family::{
    build_bounded_model, build_bounded_model_with, chain_family, AbstractionKind, ChainOptions,
    DominoModels, DominoSpec, Family, FamilyParams, CHAIN_LAYOUT,
};
pub use scenario::{Scenario, SCENARIO_LAYOUT, ScenarioBarrier, ScenarioDomino, ScenarioPush};
pub use sim::micro_proc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dir {
    N,
    E,
    S,
    W,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::N, Dir::E, Dir::S, Dir::W];

    pub fn letter(self) -> char {
        match self {
            Dir::N => 'N',
            Dir::E => 'E',
            Dir::S => 'S',
            Dir::W => 'W',
        }
    }

    pub fn parse(s: &str) -> Result<Dir> {
        match s {
            "N" => Ok(Dir::N),
            "E" => Ok(Dir::E),
            "S" => Ok(Dir::S),
            "W" => Ok(Dir::W),
            _ => Err(Error::InvalidScenario(format!("unknown direction '{s}'"))),
        }
    }

    pub fn opposite(self) -> Dir {
        match self {
            Dir::N => Dir::S,
            Dir::E => Dir::W,
            Dir::S => Dir::N,
            Dir::W => Dir::E,
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Grid {
    pub width: usize,
    pub height: usize,
}

impl Grid {
    pub fn new(width: usize, height: usize) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidScenario("grid must be at least 1×1".into()));
        }
        Ok(Self { width, height })
    }

    pub fn cells(&self) -> usize {
        self.width * self.height
    }

    pub fn at(&self, x: usize, y: usize) -> Result<Cell> {
        if x < self.width && y < self.height {
            Ok(Cell(y * self.width + x))
        } else {
            Err(Error::InvalidScenario(format!(
                "cell ({x},{y}) is outside the {}×{} grid",
                self.width, self.height
            )))
        }
    }

    pub fn coords(&self, c: Cell) -> (usize, usize) {
        (c.0 % self.width, c.0 / self.width)
    }

    pub fn neighbor(&self, c: Cell, d: Dir) -> Option<Cell> {
        let (x, y) = self.coords(c);
        let (nx, ny) = match d {
            Dir::N => (Some(x), y.checked_sub(1)),
            Dir::S => (Some(x), Some(y + 1)),
            Dir::E => (Some(x + 1), Some(y)),
            Dir::W => (x.checked_sub(1), Some(y)),
        };
        match (nx, ny) {
            (Some(nx), Some(ny)) if nx < self.width && ny < self.height => {
                Some(Cell(ny * self.width + nx))
            }
            _ => None,
        }
    }

    pub fn cell_label(&self, c: Cell) -> String {
        format!("c{}", c.0)
    }

    pub fn parse_cell(&self, s: &str) -> Result<Cell> {
        s.strip_prefix('c')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|&n| n < self.cells())
            .map(Cell)
            .ok_or_else(|| Error::InvalidScenario(format!("unknown cell '{s}'")))
    }

    pub fn edge(&self, a: Cell, b: Cell) -> Result<Edge> {
        if Dir::ALL.iter().any(|&d| self.neighbor(a, d) == Some(b)) {
            Ok(Edge {
                lo: a.min(b),
                hi: a.max(b),
            })
        } else {
            Err(Error::InvalidScenario(format!(
                "cells c{} and c{} are not adjacent",
                a.0, b.0
            )))
        }
    }

    pub fn edge_label(&self, e: Edge) -> String {
        format!("c{}-c{}", e.lo.0, e.hi.0)
    }

    pub fn parse_edge(&self, s: &str) -> Result<Edge> {
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| Error::InvalidScenario(format!("bad edge '{s}'")))?;
        self.edge(self.parse_cell(a)?, self.parse_cell(b)?)
    }
}

/// The shared side of two adjacent cells, `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub lo: Cell,
    pub hi: Cell,
}

/// Falling direction for each incoming direction, indexed N, E, S, W.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Routing(pub [Dir; 4]);

impl Routing {
    pub const IDENTITY: Routing = Routing([Dir::N, Dir::E, Dir::S, Dir::W]);
    /// Clockwise quarter turn: N→E, E→S, S→W, W→N.
    pub const TURN_RIGHT: Routing = Routing([Dir::E, Dir::S, Dir::W, Dir::N]);
    pub const TURN_LEFT: Routing = Routing([Dir::W, Dir::N, Dir::E, Dir::S]);

    pub fn route(&self, incoming: Dir) -> Dir {
        self.0[incoming.index()]
    }

    pub fn label(&self) -> String {
        match *self {
            Routing::IDENTITY => "id".into(),
            Routing::TURN_RIGHT => "turn-right".into(),
            Routing::TURN_LEFT => "turn-left".into(),
            Routing(ds) => ds.iter().map(|d| d.letter()).collect(),
        }
    }

    /// `id`, `turn-right`, `turn-left`, or four direction letters giving
    /// the falling direction for incoming N, E, S, W.
    pub fn parse(s: &str) -> Result<Routing> {
        match s {
            "id" => Ok(Routing::IDENTITY),
            "turn-right" => Ok(Routing::TURN_RIGHT),
            "turn-left" => Ok(Routing::TURN_LEFT),
            _ if s.chars().count() == 4 => {
                let mut out = [Dir::N; 4];
                for (slot, c) in out.iter_mut().zip(s.chars()) {
                    *slot = Dir::parse(&c.to_string())?;
                }
                Ok(Routing(out))
            }
            _ => Err(Error::InvalidScenario(format!("unknown routing '{s}'"))),
        }
    }
}

impl Default for Routing {
    fn default() -> Self {
        Routing::IDENTITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placed {
    pub cell: Cell,
    pub routing: Routing,
    /// Nuisance detail with no dynamical role.
    pub tag: u8,
}

/// A micro state. `dominoes` is indexed by the world census; `push` names a
/// census domino and may point at one that is currently removed, in which
/// case nothing falls.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MicroState {
    pub dominoes: Vec<Option<Placed>>,
    pub barriers: BTreeSet<Edge>,
    pub push: Option<(usize, Dir)>,
}

impl MicroState {
    pub fn empty(census: usize) -> Self {
        Self {
            dominoes: vec![None; census],
            barriers: BTreeSet::new(),
            push: None,
        }
    }

    pub fn occupant(&self, c: Cell) -> Option<usize> {
        self.dominoes
            .iter()
            .position(|d| d.is_some_and(|p| p.cell == c))
    }

    pub fn blocked(&self, a: Cell, b: Cell) -> bool {
        self.barriers.contains(&Edge {
            lo: a.min(b),
            hi: a.max(b),
        })
    }

    /// The same state with every nuisance tag set to zero.
    pub fn without_tags(&self) -> Self {
        let mut s = self.clone();
        for p in s.dominoes.iter_mut().flatten() {
            p.tag = 0;
        }
        s
    }
}

/// Grid plus the census of domino ids every state is indexed by.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct World {
    pub grid: Grid,
    pub census: Vec<String>,
}

impl World {
    pub fn domino(&self, id: &str) -> Result<usize> {
        self.census
            .iter()
            .position(|d| d == id)
            .ok_or_else(|| Error::InvalidScenario(format!("unknown domino '{id}'")))
    }

    /// At most one domino per cell, all cells on the grid, push in census.
    pub fn validate(&self, s: &MicroState) -> Result<()> {
        if s.dominoes.len() != self.census.len() {
            return Err(Error::InvalidScenario("state does not match census".into()));
        }
        let mut seen = BTreeSet::new();
        for (i, p) in s.dominoes.iter().enumerate() {
            if let Some(p) = p {
                if p.cell.0 >= self.grid.cells() {
                    return Err(Error::InvalidScenario(format!(
                        "{} is off the grid",
                        self.census[i]
                    )));
                }
                if !seen.insert(p.cell) {
                    return Err(Error::InvalidScenario(format!(
                        "two dominoes share cell c{}",
                        p.cell.0
                    )));
                }
            }
        }
        if let Some((d, _)) = s.push {
            if d >= self.census.len() {
                return Err(Error::InvalidScenario("push names no domino".into()));
            }
        }
        Ok(())
    }

    /// Canonical label, e.g. `d1@c0,d2@c1#2,d3:-;b=c0-c1;p=d1>E`. Routing is
    /// shown when not the identity, the tag when non-zero.
    pub fn state_label(&self, s: &MicroState) -> String {
        let mut out = self
            .census
            .iter()
            .zip(&s.dominoes)
            .map(|(id, p)| match p {
                None => format!("{id}:-"),
                Some(p) => {
                    let mut l = format!("{id}@c{}", p.cell.0);
                    if p.routing != Routing::IDENTITY {
                        l.push('/');
                        l.push_str(&p.routing.label());
                    }
                    if p.tag != 0 {
                        l.push_str(&format!("#{}", p.tag));
                    }
                    l
                }
            })
            .collect::<Vec<_>>()
            .join(",");
        if !s.barriers.is_empty() {
            let b: Vec<String> = s.barriers.iter().map(|&e| self.grid.edge_label(e)).collect();
            out.push_str(";b=");
            out.push_str(&b.join(","));
        }
        if let Some((d, dir)) = s.push {
            out.push_str(&format!(";p={}>{}", self.census[d], dir.letter()));
        }
        out
    }

    pub fn outcome_label(&self, o: &MicroOutcome) -> String {
        self.census
            .iter()
            .zip(&o.0)
            .map(|(id, st)| format!("{id}:{st}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Upright,
    Fallen(Dir),
    Absent,
}

impl Status {
    /// Value order of every per-domino outcome variable.
    pub const ALL: [Status; 6] = [
        Status::Upright,
        Status::Fallen(Dir::N),
        Status::Fallen(Dir::E),
        Status::Fallen(Dir::S),
        Status::Fallen(Dir::W),
        Status::Absent,
    ];

    pub fn index(self) -> usize {
        match self {
            Status::Upright => 0,
            Status::Fallen(d) => 1 + d.index(),
            Status::Absent => 5,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Upright => write!(f, "upright"),
            Status::Fallen(d) => write!(f, "fallen-{}", d.letter()),
            Status::Absent => write!(f, "absent"),
        }
    }
}

/// Terminal status of every census domino.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MicroOutcome(pub Vec<Status>);
