use std::collections::HashMap;
use std::sync::Arc;

use crate::abstraction::ModelMorphism;
use crate::domino::{
    micro_proc, Cell, Dir, Edge, Grid, MicroAction, MicroOutcome, MicroState, Placed, Routing,
    Status, World,
};
use crate::error::{Error, Result};
use crate::factored::{FactoredSpace, Variable};
use crate::limits::Limits;
use crate::map::TotalMap;
use crate::model::{ActionModel, IDENTITY};
use crate::set::FiniteSet;

/// Layout name used by [`chain_family`].
pub const CHAIN_LAYOUT: &str = "chain";

/// Where a domino may stand, and whether it may be missing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominoSpec {
    pub id: String,
    pub cells: Vec<Cell>,
    pub routings: Vec<Routing>,
    pub optional: bool,
}

/// A finite family of micro states closed under a list of actions.
#[derive(Debug, Clone)]
pub struct FamilyParams {
    pub grid: Grid,
    pub dominoes: Vec<DominoSpec>,
    /// Tag values every present domino may carry.
    pub tags: Vec<u8>,
    /// Edges that may carry a barrier.
    pub barrier_edges: Vec<Edge>,
    /// Push designations `(domino id, direction)`; "no push" is always allowed.
    pub pushes: Vec<(String, Dir)>,
    pub layouts: Vec<(String, MicroState)>,
    /// Action labels, turned into generators.
    pub actions: Vec<String>,
}

impl FamilyParams {
    pub fn world(&self) -> World {
        World {
            grid: self.grid,
            census: self.dominoes.iter().map(|d| d.id.clone()).collect(),
        }
    }

    /// Upper bound on the family size before collisions are removed.
    pub fn raw_size(&self) -> u128 {
        let per_domino: u128 = self
            .dominoes
            .iter()
            .map(|d| {
                (d.cells.len() * d.routings.len() * self.tags.len()) as u128 + d.optional as u128
            })
            .product();
        per_domino * (1u128 << self.barrier_edges.len().min(100)) * (self.pushes.len() as u128 + 1)
    }
}

/// An enumerated family, in mixed-radix order with the first domino most
/// significant and the push designation fastest.
#[derive(Debug, Clone)]
pub struct Family {
    pub world: World,
    pub states: Vec<MicroState>,
    index: HashMap<MicroState, usize>,
}

impl Family {
    pub fn enumerate(params: &FamilyParams, limits: &Limits) -> Result<Self> {
        let world = params.world();
        limits.check("domino family", params.raw_size())?;
        let options: Vec<Vec<Option<Placed>>> = params
            .dominoes
            .iter()
            .map(|d| {
                let mut opts = Vec::new();
                if d.optional {
                    opts.push(None);
                }
                for &cell in &d.cells {
                    for &routing in &d.routings {
                        for &tag in &params.tags {
                            opts.push(Some(Placed { cell, routing, tag }));
                        }
                    }
                }
                opts
            })
            .collect();
        let mut pushes = vec![None];
        for (id, dir) in &params.pushes {
            pushes.push(Some((world.domino(id)?, *dir)));
        }
        let mut radices: Vec<usize> = options.iter().map(Vec::len).collect();
        radices.push(1 << params.barrier_edges.len());
        radices.push(pushes.len());

        let mut states = Vec::new();
        let mut index = HashMap::new();
        let mut digits = vec![0usize; radices.len()];
        if radices.iter().all(|&r| r > 0) {
            loop {
                let n = options.len();
                let state = MicroState {
                    dominoes: (0..n).map(|i| options[i][digits[i]]).collect(),
                    barriers: params
                        .barrier_edges
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| digits[n] >> k & 1 == 1)
                        .map(|(_, e)| *e)
                        .collect(),
                    push: pushes[digits[n + 1]],
                };
                if world.validate(&state).is_ok() && !index.contains_key(&state) {
                    index.insert(state.clone(), states.len());
                    states.push(state);
                }
                let mut k = radices.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    digits[k] += 1;
                    if digits[k] < radices[k] {
                        break;
                    }
                    digits[k] = 0;
                }
                if digits.iter().all(|&d| d == 0) {
                    break;
                }
            }
        }
        if states.is_empty() {
            return Err(Error::InvalidScenario("domino family is empty".into()));
        }
        Ok(Self {
            world,
            states,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &MicroState) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn state_set(&self) -> Result<Arc<FiniteSet>> {
        Ok(FiniteSet::new(
            "X",
            self.states.iter().map(|s| self.world.state_label(s)),
        )?
        .shared())
    }

    /// The table of `action` over the family.
    pub fn action_table(&self, action: &MicroAction) -> Result<Vec<usize>> {
        self.states
            .iter()
            .map(|s| {
                let t = action.apply(s);
                self.index_of(&t).ok_or_else(|| Error::LeavesFamily {
                    action: action.label(&self.world),
                    state: self.world.state_label(s),
                })
            })
            .collect()
    }
}

/// How the abstract model coarsens the micro world.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbstractionKind {
    /// Forget nuisance tags only.
    ForgetTags,
    /// Also forget barriers; barrier actions become `id`. Not natural in
    /// general, useful as a negative control.
    ForgetTagsAndBarriers,
}

/// A micro model, its per-domino abstraction, and the morphism between them.
#[derive(Debug, Clone)]
pub struct DominoModels {
    pub micro_family: Family,
    pub abstract_family: Family,
    pub micro: Arc<ActionModel>,
    pub abstract_model: Arc<ActionModel>,
    pub morphism: ModelMorphism,
}

fn is_barrier_action(a: &MicroAction) -> bool {
    matches!(a, MicroAction::AddBarrier(_) | MicroAction::RemoveBarrier(_))
}

fn coarsen(s: &MicroState, kind: AbstractionKind) -> MicroState {
    let mut out = s.without_tags();
    if kind == AbstractionKind::ForgetTagsAndBarriers {
        out.barriers.clear();
    }
    out
}

fn status_space(world: &World, limits: &Limits) -> Result<FactoredSpace> {
    let statuses = FiniteSet::new("status", Status::ALL.iter().map(|s| s.to_string()))?.shared();
    FactoredSpace::with_limits(
        world
            .census
            .iter()
            .map(|id| Variable {
                id: id.clone(),
                values: statuses.clone(),
            })
            .collect(),
        limits,
    )
}

fn encode_outcome(space: &FactoredSpace, o: &MicroOutcome) -> usize {
    let coords: Vec<usize> = o.0.iter().map(|s| s.index()).collect();
    space.encode(&coords)
}

pub fn build_bounded_model(params: &FamilyParams) -> Result<DominoModels> {
    build_bounded_model_with(params, AbstractionKind::ForgetTags, &Limits::default())
}

/// Enumerate the family, build the micro model (outcome = the full terminal
/// configuration), the abstract per-domino status model, and the morphism.
pub fn build_bounded_model_with(
    params: &FamilyParams,
    kind: AbstractionKind,
    limits: &Limits,
) -> Result<DominoModels> {
    let micro_family = Family::enumerate(params, limits)?;
    let world = micro_family.world.clone();
    let actions: Vec<MicroAction> = params
        .actions
        .iter()
        .map(|l| MicroAction::parse(&world, l, &params.layouts))
        .collect::<Result<_>>()?;

    let micro_states = micro_family.state_set()?;
    let mut micro_generators = Vec::new();
    for a in &actions {
        let table = micro_family.action_table(a)?;
        micro_generators.push((
            a.label(&world),
            TotalMap::from_table(micro_states.clone(), micro_states.clone(), table),
        ));
    }
    let outcomes: Vec<MicroOutcome> = micro_family
        .states
        .iter()
        .map(|s| micro_proc(&world, s))
        .collect();
    let mut distinct: Vec<&MicroOutcome> = Vec::new();
    let mut outcome_index: HashMap<&MicroOutcome, usize> = HashMap::new();
    for o in &outcomes {
        outcome_index.entry(o).or_insert_with(|| {
            distinct.push(o);
            distinct.len() - 1
        });
    }
    let micro_outcome_set = FiniteSet::new(
        "outcome",
        distinct.iter().map(|o| world.outcome_label(o)),
    )?
    .shared();
    let micro_process = TotalMap::from_table(
        micro_states.clone(),
        micro_outcome_set.clone(),
        outcomes.iter().map(|o| outcome_index[o]).collect(),
    );
    let micro = Arc::new(ActionModel::with_limits(
        micro_states.clone(),
        FactoredSpace::single("outcome", micro_outcome_set.clone()),
        micro_generators,
        micro_process,
        limits,
    )?);

    let mut abstract_params = params.clone();
    abstract_params.tags = vec![0];
    if kind == AbstractionKind::ForgetTagsAndBarriers {
        abstract_params.barrier_edges.clear();
        for (_, s) in abstract_params.layouts.iter_mut() {
            s.barriers.clear();
        }
    }
    for (_, s) in abstract_params.layouts.iter_mut() {
        *s = s.without_tags();
    }
    let abstract_family = Family::enumerate(&abstract_params, limits)?;
    let abstract_states = abstract_family.state_set()?;
    let mut abstract_generators = Vec::new();
    let mut alphabet = Vec::new();
    for a in &actions {
        let label = a.label(&world);
        if kind == AbstractionKind::ForgetTagsAndBarriers && is_barrier_action(a) {
            alphabet.push((label, IDENTITY.to_string()));
            continue;
        }
        let a = MicroAction::parse(&world, &label, &abstract_params.layouts)?;
        let table = abstract_family.action_table(&a)?;
        abstract_generators.push((
            label.clone(),
            TotalMap::from_table(abstract_states.clone(), abstract_states.clone(), table),
        ));
        alphabet.push((label.clone(), label));
    }
    let status = status_space(&world, limits)?;
    let abstract_process = TotalMap::from_table(
        abstract_states.clone(),
        status.total().clone(),
        abstract_family
            .states
            .iter()
            .map(|s| encode_outcome(&status, &micro_proc(&world, s)))
            .collect(),
    );
    let abstract_model = Arc::new(ActionModel::with_limits(
        abstract_states.clone(),
        status.clone(),
        abstract_generators,
        abstract_process,
        limits,
    )?);

    let state_table = micro_family
        .states
        .iter()
        .map(|s| {
            abstract_family
                .index_of(&coarsen(s, kind))
                .ok_or_else(|| Error::LeavesFamily {
                    action: "abstraction".into(),
                    state: world.state_label(s),
                })
        })
        .collect::<Result<Vec<_>>>()?;
    let state_map = TotalMap::from_table(micro_states, abstract_states, state_table);
    let outcome_map = TotalMap::from_table(
        micro_outcome_set,
        status.total().clone(),
        distinct.iter().map(|o| encode_outcome(&status, o)).collect(),
    );
    let morphism = ModelMorphism::new(
        micro.clone(),
        abstract_model.clone(),
        state_map,
        outcome_map,
        &alphabet,
    )?;
    Ok(DominoModels {
        micro_family,
        abstract_family,
        micro,
        abstract_model,
        morphism,
    })
}

/// Options for [`chain_family`].
#[derive(Debug, Clone)]
pub struct ChainOptions {
    /// Dominoes may be removed and put back at their home cell.
    pub removable: bool,
    /// Every internal edge may carry a barrier.
    pub barriers: bool,
    pub tags: Vec<u8>,
    pub push_dirs: Vec<Dir>,
}

impl Default for ChainOptions {
    fn default() -> Self {
        Self {
            removable: true,
            barriers: true,
            tags: vec![0],
            push_dirs: vec![Dir::E, Dir::W],
        }
    }
}

/// `n` dominoes `d1..dn` in a 1×n row, `dk` at cell `c{k-1}`, with layout
/// `chain` (all present, no barriers, no push) and the actions `init-chain`,
/// `remove-dk`, `place-dk-at-c{k-1}`, `add-barrier`/`remove-barrier` on each
/// internal edge, and `choose-push-dk-<dir>`.
pub fn chain_family(n: usize, opts: &ChainOptions) -> Result<FamilyParams> {
    let grid = Grid::new(n, 1)?;
    let ids: Vec<String> = (1..=n).map(|k| format!("d{k}")).collect();
    let dominoes: Vec<DominoSpec> = ids
        .iter()
        .enumerate()
        .map(|(k, id)| DominoSpec {
            id: id.clone(),
            cells: vec![Cell(k)],
            routings: vec![Routing::IDENTITY],
            optional: opts.removable,
        })
        .collect();
    let edges: Vec<Edge> = if opts.barriers {
        (1..n)
            .map(|k| grid.edge(Cell(k - 1), Cell(k)))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let mut layout = MicroState::empty(n);
    for k in 0..n {
        layout.dominoes[k] = Some(Placed {
            cell: Cell(k),
            routing: Routing::IDENTITY,
            tag: opts.tags.first().copied().unwrap_or(0),
        });
    }
    let mut actions = vec![format!("init-{CHAIN_LAYOUT}")];
    if opts.removable {
        for (k, id) in ids.iter().enumerate() {
            actions.push(format!("remove-{id}"));
            actions.push(format!("place-{id}-at-c{k}"));
        }
    }
    for e in &edges {
        let l = grid.edge_label(*e);
        actions.push(format!("add-barrier-{l}"));
        actions.push(format!("remove-barrier-{l}"));
    }
    let mut pushes = Vec::new();
    for id in &ids {
        for d in &opts.push_dirs {
            pushes.push((id.clone(), *d));
            actions.push(format!("choose-push-{id}-{}", d.letter()));
        }
    }
    Ok(FamilyParams {
        grid,
        dominoes,
        tags: opts.tags.clone(),
        barrier_edges: edges,
        pushes,
        layouts: vec![(CHAIN_LAYOUT.to_string(), layout)],
        actions,
    })
}
