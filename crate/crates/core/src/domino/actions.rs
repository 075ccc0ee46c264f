use crate::domino::{Cell, Dir, Edge, MicroState, Placed, Routing, World};
use crate::error::{Error, Result};

/// A named micro-intervention.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MicroAction {
    /// `init-<layout>`: reset to a fixed layout.
    Init { layout: String, state: MicroState },
    /// `place-<d>-at-<cell>[-<routing>]`: move or add a domino with tag 0.
    /// No effect if another domino holds the cell.
    Place {
        domino: usize,
        cell: Cell,
        routing: Routing,
    },
    /// `remove-<d>`. The push designation is kept.
    Remove { domino: usize },
    /// `add-barrier-<cell>-<cell>`
    AddBarrier(Edge),
    /// `remove-barrier-<cell>-<cell>`
    RemoveBarrier(Edge),
    /// `choose-push-<d>-<dir>`. Choosing an absent domino clears the push.
    ChoosePush { domino: usize, dir: Dir },
}

impl MicroAction {
    pub fn parse(world: &World, label: &str, layouts: &[(String, MicroState)]) -> Result<Self> {
        let bad = || Error::UnknownLabel(label.to_string());
        if let Some(name) = label.strip_prefix("init-") {
            let (_, state) = layouts.iter().find(|(n, _)| n == name).ok_or_else(bad)?;
            return Ok(MicroAction::Init {
                layout: name.to_string(),
                state: state.clone(),
            });
        }
        if let Some(rest) = label.strip_prefix("add-barrier-") {
            return Ok(MicroAction::AddBarrier(world.grid.parse_edge(rest).map_err(|_| bad())?));
        }
        if let Some(rest) = label.strip_prefix("remove-barrier-") {
            return Ok(MicroAction::RemoveBarrier(world.grid.parse_edge(rest).map_err(|_| bad())?));
        }
        if let Some(rest) = label.strip_prefix("remove-") {
            return Ok(MicroAction::Remove {
                domino: world.domino(rest).map_err(|_| bad())?,
            });
        }
        if let Some(rest) = label.strip_prefix("choose-push-") {
            let (d, dir) = rest.rsplit_once('-').ok_or_else(bad)?;
            return Ok(MicroAction::ChoosePush {
                domino: world.domino(d).map_err(|_| bad())?,
                dir: Dir::parse(dir).map_err(|_| bad())?,
            });
        }
        if let Some(rest) = label.strip_prefix("place-") {
            let (d, at) = rest.split_once("-at-").ok_or_else(bad)?;
            let (cell, routing) = match at.split_once('-') {
                Some((c, r)) => (c, Routing::parse(r).map_err(|_| bad())?),
                None => (at, Routing::IDENTITY),
            };
            return Ok(MicroAction::Place {
                domino: world.domino(d).map_err(|_| bad())?,
                cell: world.grid.parse_cell(cell).map_err(|_| bad())?,
                routing,
            });
        }
        Err(bad())
    }

    pub fn label(&self, world: &World) -> String {
        match self {
            MicroAction::Init { layout, .. } => format!("init-{layout}"),
            MicroAction::Place {
                domino,
                cell,
                routing,
            } => {
                let mut l = format!("place-{}-at-c{}", world.census[*domino], cell.0);
                if *routing != Routing::IDENTITY {
                    l.push('-');
                    l.push_str(&routing.label());
                }
                l
            }
            MicroAction::Remove { domino } => format!("remove-{}", world.census[*domino]),
            MicroAction::AddBarrier(e) => format!("add-barrier-{}", world.grid.edge_label(*e)),
            MicroAction::RemoveBarrier(e) => {
                format!("remove-barrier-{}", world.grid.edge_label(*e))
            }
            MicroAction::ChoosePush { domino, dir } => {
                format!("choose-push-{}-{}", world.census[*domino], dir.letter())
            }
        }
    }

    pub fn apply(&self, s: &MicroState) -> MicroState {
        let mut out = s.clone();
        match self {
            MicroAction::Init { state, .. } => return state.clone(),
            MicroAction::Place {
                domino,
                cell,
                routing,
            } => match s.occupant(*cell) {
                Some(k) if k != *domino => {}
                _ => {
                    out.dominoes[*domino] = Some(Placed {
                        cell: *cell,
                        routing: *routing,
                        tag: 0,
                    })
                }
            },
            MicroAction::Remove { domino } => out.dominoes[*domino] = None,
            MicroAction::AddBarrier(e) => {
                out.barriers.insert(*e);
            }
            MicroAction::RemoveBarrier(e) => {
                out.barriers.remove(e);
            }
            MicroAction::ChoosePush { domino, dir } => {
                out.push = s.dominoes[*domino].map(|_| (*domino, *dir));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domino::Grid;

    fn world() -> World {
        World {
            grid: Grid::new(3, 1).unwrap(),
            census: vec!["d1".into(), "d2".into()],
        }
    }

    #[test]
    fn labels_round_trip() {
        let w = world();
        let layouts = vec![("chain".to_string(), MicroState::empty(2))];
        for l in [
            "init-chain",
            "place-d2-at-c2",
            "place-d1-at-c0-turn-left",
            "remove-d1",
            "add-barrier-c0-c1",
            "remove-barrier-c1-c2",
            "choose-push-d2-W",
        ] {
            let a = MicroAction::parse(&w, l, &layouts).unwrap();
            assert_eq!(a.label(&w), l);
        }
        for l in ["init-other", "remove-d9", "place-d1-at-c7", "choose-push-d1-X", "add-barrier-c0-c2", "jump"] {
            assert!(MicroAction::parse(&w, l, &layouts).is_err(), "{l}");
        }
    }

    #[test]
    fn place_onto_an_occupied_cell_is_ignored() {
        let w = world();
        let mut s = MicroState::empty(2);
        s = MicroAction::parse(&w, "place-d1-at-c0", &[]).unwrap().apply(&s);
        let blocked = MicroAction::parse(&w, "place-d2-at-c0", &[]).unwrap().apply(&s);
        assert_eq!(blocked, s);
        let moved = MicroAction::parse(&w, "place-d1-at-c2", &[]).unwrap().apply(&s);
        assert_eq!(moved.occupant(Cell(2)), Some(0));
        assert_eq!(moved.occupant(Cell(0)), None);
    }

    #[test]
    fn push_and_remove_do_not_commute() {
        let w = world();
        let mut s = MicroState::empty(2);
        s.dominoes[0] = Some(Placed {
            cell: Cell(0),
            routing: Routing::IDENTITY,
            tag: 0,
        });
        let push = MicroAction::parse(&w, "choose-push-d1-E", &[]).unwrap();
        let remove = MicroAction::parse(&w, "remove-d1", &[]).unwrap();
        assert_ne!(push.apply(&remove.apply(&s)), remove.apply(&push.apply(&s)));
    }
}
