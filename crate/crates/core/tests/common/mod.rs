#![allow(dead_code)]

use std::sync::Arc;

use causal_ground::{ActionModel, FactoredSpace, FiniteSet, TotalMap, Variable};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random model with `|X| ≤ 6`, 1 to 3 outcome variables of size 1 to 3,
/// and 1 to 3 random generators `g0, g1, …`.
pub fn random_model(seed: u64) -> ActionModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_states = rng.gen_range(1..=6);
    let states = FiniteSet::new("X", (0..n_states).map(|k| format!("x{k}")))
        .unwrap()
        .shared();
    let n_vars = rng.gen_range(1..=3);
    let vars: Vec<Variable> = (0..n_vars)
        .map(|v| {
            let size = rng.gen_range(1..=3);
            Variable {
                id: format!("v{v}"),
                values: FiniteSet::new(format!("v{v}"), (0..size).map(|k| k.to_string()))
                    .unwrap()
                    .shared(),
            }
        })
        .collect();
    let space = FactoredSpace::new(vars).unwrap();
    let n_out = space.total().len();
    let process = TotalMap::from_table(
        states.clone(),
        space.total().clone(),
        (0..n_states).map(|_| rng.gen_range(0..n_out)).collect(),
    );
    let n_gens = rng.gen_range(1..=3);
    let gens = (0..n_gens)
        .map(|g| {
            let table = (0..n_states).map(|_| rng.gen_range(0..n_states)).collect();
            (
                format!("g{g}"),
                TotalMap::from_table(states.clone(), states.clone(), table),
            )
        })
        .collect();
    ActionModel::new(states, space, gens, process).unwrap()
}

/// Every subset of `0..n` as a sorted index list, smallest first.
pub fn subsets(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = (0..1usize << n)
        .map(|mask| (0..n).filter(|k| mask >> k & 1 == 1).collect())
        .collect();
    out.sort_by_key(|s| s.len());
    out
}

/// Every map `0..dom → 0..cod` as a table, or `None` above `limit` maps.
pub fn all_maps(dom: usize, cod: usize, limit: usize) -> Option<Vec<Vec<usize>>> {
    let count = (cod as u128).checked_pow(dom as u32)?;
    if count > limit as u128 {
        return None;
    }
    let mut out = Vec::with_capacity(count as usize);
    for mut code in 0..count as usize {
        let mut t = vec![0; dom];
        for slot in t.iter_mut() {
            *slot = code % cod;
            code /= cod;
        }
        out.push(t);
    }
    Some(out)
}

/// Status of a domino on a 1×n line, written independently of the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LineStatus {
    Upright,
    FallenE,
    FallenW,
    Absent,
}

impl LineStatus {
    pub fn label(self) -> &'static str {
        match self {
            LineStatus::Upright => "upright",
            LineStatus::FallenE => "fallen-E",
            LineStatus::FallenW => "fallen-W",
            LineStatus::Absent => "absent",
        }
    }
}

/// Chain reaction on a line where domino `k` sits at cell `k`.
/// `barrier[k]` blocks the edge between cells `k` and `k+1`.
pub fn line_outcome(
    present: &[bool],
    barrier: &[bool],
    push: Option<(usize, bool)>,
) -> Vec<LineStatus> {
    let mut out: Vec<LineStatus> = present
        .iter()
        .map(|&p| if p { LineStatus::Upright } else { LineStatus::Absent })
        .collect();
    if let Some((k, east)) = push {
        if present[k] {
            let status = if east { LineStatus::FallenE } else { LineStatus::FallenW };
            out[k] = status;
            let mut i = k;
            loop {
                let next = if east { i + 1 } else { i.wrapping_sub(1) };
                if next >= present.len() {
                    break;
                }
                let edge = i.min(next);
                if barrier[edge] || out[next] != LineStatus::Upright {
                    break;
                }
                out[next] = status;
                i = next;
            }
        }
    }
    out
}

pub fn shared(m: ActionModel) -> Arc<ActionModel> {
    Arc::new(m)
}
