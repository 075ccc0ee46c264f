use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::domino::{
    micro_proc, Dir, DominoSpec, Edge, FamilyParams, Grid, MicroAction, MicroOutcome,
    MicroState, Placed, Routing, World,
};
use crate::error::{Error, Result};
use crate::model::ActionWord;

/// Layout name of a scenario's starting state, reachable via `init-scenario`.
pub const SCENARIO_LAYOUT: &str = "scenario";

/// A concrete domino layout plus the actions of interest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    /// `[width, height]`
    pub grid: [usize; 2],
    pub dominoes: Vec<ScenarioDomino>,
    #[serde(default)]
    pub barriers: Vec<ScenarioBarrier>,
    #[serde(default)]
    pub push: Option<ScenarioPush>,
    #[serde(default)]
    pub actions: Vec<String>,
    /// Tag values the bounded family ranges over; defaults to the tags in use
    /// plus 0.
    #[serde(default)]
    pub tags: Option<Vec<u8>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDomino {
    pub id: String,
    /// `[x, y]`
    pub cell: [usize; 2],
    #[serde(default)]
    pub routing: Option<String>,
    #[serde(default)]
    pub tag: Option<u8>,
}

/// Two adjacent cells `[[x, y], [x, y]]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioBarrier(pub [usize; 2], pub [usize; 2]);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioPush {
    pub id: String,
    pub dir: String,
}

impl Scenario {
    pub fn world(&self) -> Result<World> {
        let grid = Grid::new(self.grid[0], self.grid[1])?;
        let census: Vec<String> = self.dominoes.iter().map(|d| d.id.clone()).collect();
        let mut seen = BTreeSet::new();
        for id in &census {
            if !seen.insert(id.as_str()) {
                return Err(Error::InvalidScenario(format!("duplicate domino id '{id}'")));
            }
        }
        Ok(World { grid, census })
    }

    pub fn initial_state(&self) -> Result<MicroState> {
        let world = self.world()?;
        let mut s = MicroState::empty(self.dominoes.len());
        for (k, d) in self.dominoes.iter().enumerate() {
            s.dominoes[k] = Some(Placed {
                cell: world.grid.at(d.cell[0], d.cell[1])?,
                routing: match &d.routing {
                    Some(r) => Routing::parse(r)?,
                    None => Routing::IDENTITY,
                },
                tag: d.tag.unwrap_or(0),
            });
        }
        for ScenarioBarrier(a, b) in &self.barriers {
            let a = world.grid.at(a[0], a[1])?;
            let b = world.grid.at(b[0], b[1])?;
            s.barriers.insert(world.grid.edge(a, b)?);
        }
        if let Some(p) = &self.push {
            s.push = Some((world.domino(&p.id)?, Dir::parse(&p.dir)?));
        }
        world.validate(&s)?;
        Ok(s)
    }

    fn layouts(&self) -> Result<Vec<(String, MicroState)>> {
        Ok(vec![(SCENARIO_LAYOUT.to_string(), self.initial_state()?)])
    }

    fn parsed_actions(&self, world: &World) -> Result<Vec<MicroAction>> {
        let layouts = self.layouts()?;
        self.actions
            .iter()
            .map(|l| MicroAction::parse(world, l, &layouts))
            .collect()
    }

    /// Apply `word` (rightmost first) to the starting state.
    pub fn run(&self, word: &ActionWord) -> Result<(World, MicroState, MicroOutcome)> {
        let world = self.world()?;
        let layouts = self.layouts()?;
        let mut s = self.initial_state()?;
        for label in word.labels().iter().rev() {
            s = MicroAction::parse(&world, label, &layouts)?.apply(&s);
        }
        let out = micro_proc(&world, &s);
        Ok((world, s, out))
    }

    /// The smallest family holding the starting state that the listed
    /// actions can move around in: each domino ranges over its home cell and
    /// any cell it is placed at, is optional only if it can be removed, and
    /// barriers and pushes range over those mentioned.
    pub fn family(&self) -> Result<FamilyParams> {
        let world = self.world()?;
        let start = self.initial_state()?;
        let actions = self.parsed_actions(&world)?;
        let mut dominoes: Vec<DominoSpec> = world
            .census
            .iter()
            .zip(&start.dominoes)
            .map(|(id, p)| {
                let p = p.expect("scenario dominoes are placed");
                DominoSpec {
                    id: id.clone(),
                    cells: vec![p.cell],
                    routings: vec![p.routing],
                    optional: false,
                }
            })
            .collect();
        let mut edges: Vec<Edge> = start.barriers.iter().copied().collect();
        let mut pushes: Vec<(String, Dir)> = start
            .push
            .iter()
            .map(|(d, dir)| (world.census[*d].clone(), *dir))
            .collect();
        let mut placed_any = false;
        let push_unique = |pushes: &mut Vec<(String, Dir)>, p: (String, Dir)| {
            if !pushes.contains(&p) {
                pushes.push(p);
            }
        };
        for a in &actions {
            match a {
                MicroAction::Place {
                    domino,
                    cell,
                    routing,
                } => {
                    placed_any = true;
                    let spec = &mut dominoes[*domino];
                    if !spec.cells.contains(cell) {
                        spec.cells.push(*cell);
                    }
                    if !spec.routings.contains(routing) {
                        spec.routings.push(*routing);
                    }
                }
                MicroAction::Remove { domino } => dominoes[*domino].optional = true,
                MicroAction::AddBarrier(e) | MicroAction::RemoveBarrier(e) => {
                    if !edges.contains(e) {
                        edges.push(*e);
                    }
                }
                MicroAction::ChoosePush { domino, dir } => {
                    push_unique(&mut pushes, (world.census[*domino].clone(), *dir))
                }
                MicroAction::Init { .. } => {}
            }
        }
        let tags = match &self.tags {
            Some(t) => t.clone(),
            None => {
                let mut t: Vec<u8> = start.dominoes.iter().flatten().map(|p| p.tag).collect();
                if placed_any || t.is_empty() {
                    t.push(0);
                }
                t.sort_unstable();
                t.dedup();
                t
            }
        };
        Ok(FamilyParams {
            grid: world.grid,
            dominoes,
            tags,
            barrier_edges: edges,
            pushes,
            layouts: self.layouts()?,
            actions: self.actions.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Scenario {
        serde_json::from_str(
            r#"{
                "grid": [3, 1],
                "dominoes": [
                    {"id": "d1", "cell": [0, 0]},
                    {"id": "d2", "cell": [1, 0], "tag": 2},
                    {"id": "d3", "cell": [2, 0]}
                ],
                "barriers": [[[1, 0], [2, 0]]],
                "push": {"id": "d1", "dir": "E"},
                "actions": ["init-scenario", "remove-d2", "remove-barrier-c1-c2"]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn runs_words_rightmost_first() {
        let sc = sample();
        let (w, _, out) = sc.run(&ActionWord::empty()).unwrap();
        assert_eq!(w.outcome_label(&out), "d1:fallen-E,d2:fallen-E,d3:upright");
        let (w, _, out) = sc.run(&ActionWord::parse("remove-barrier-c1-c2")).unwrap();
        assert_eq!(w.outcome_label(&out), "d1:fallen-E,d2:fallen-E,d3:fallen-E");
        let (w, _, out) = sc
            .run(&ActionWord::parse("init-scenario,remove-barrier-c1-c2"))
            .unwrap();
        assert_eq!(w.outcome_label(&out), "d1:fallen-E,d2:fallen-E,d3:upright");
    }

    #[test]
    fn family_covers_the_mentioned_moves() {
        let p = sample().family().unwrap();
        assert_eq!(p.tags, vec![0, 2]);
        assert!(p.dominoes[1].optional && !p.dominoes[0].optional);
        assert_eq!(p.barrier_edges.len(), 1);
        let m = crate::domino::build_bounded_model(&p).unwrap();
        assert!(m.micro.states().len() > 1);
    }

    #[test]
    fn unknown_fields_and_bad_cells_are_rejected() {
        assert!(serde_json::from_str::<Scenario>(r#"{"grid":[1,1],"dominoes":[],"extra":1}"#).is_err());
        let mut sc = sample();
        sc.dominoes[0].cell = [5, 0];
        assert!(sc.initial_state().is_err());
    }
}
