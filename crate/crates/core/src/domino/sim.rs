use crate::domino::{MicroOutcome, MicroState, Status, World};

/// Run the chain reaction started by the designated push. The pushed domino
/// falls in the push direction; nothing falls if it is absent.
pub fn micro_proc(world: &World, s: &MicroState) -> MicroOutcome {
    let mut status: Vec<Status> = s
        .dominoes
        .iter()
        .map(|p| match p {
            Some(_) => Status::Upright,
            None => Status::Absent,
        })
        .collect();
    let Some((first, dir)) = s.push else {
        return MicroOutcome(status);
    };
    let Some(placed) = s.dominoes[first] else {
        return MicroOutcome(status);
    };
    status[first] = Status::Fallen(dir);
    let (mut cell, mut dir) = (placed.cell, dir);
    while let Some(next) = world.grid.neighbor(cell, dir) {
        if s.blocked(cell, next) {
            break;
        }
        let Some(k) = s.occupant(next) else { break };
        if status[k] != Status::Upright {
            break;
        }
        let routing = s.dominoes[k].expect("occupant is placed").routing;
        dir = routing.route(dir);
        status[k] = Status::Fallen(dir);
        cell = next;
    }
    MicroOutcome(status)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domino::{Cell, Dir, Grid, Placed, Routing};

    fn line(n: usize) -> (World, MicroState) {
        let world = World {
            grid: Grid::new(n, 1).unwrap(),
            census: (1..=n).map(|i| format!("d{i}")).collect(),
        };
        let mut s = MicroState::empty(n);
        for i in 0..n {
            s.dominoes[i] = Some(Placed {
                cell: Cell(i),
                routing: Routing::IDENTITY,
                tag: 0,
            });
        }
        (world, s)
    }

    fn labels(w: &World, s: &MicroState) -> String {
        w.outcome_label(&micro_proc(w, s))
    }

    #[test]
    fn no_push_leaves_everything_upright() {
        let (w, s) = line(3);
        assert_eq!(labels(&w, &s), "d1:upright,d2:upright,d3:upright");
    }

    #[test]
    fn push_east_topples_the_line() {
        let (w, mut s) = line(3);
        s.push = Some((0, Dir::E));
        assert_eq!(labels(&w, &s), "d1:fallen-E,d2:fallen-E,d3:fallen-E");
        s.push = Some((1, Dir::W));
        assert_eq!(labels(&w, &s), "d1:fallen-W,d2:fallen-W,d3:upright");
    }

    #[test]
    fn barrier_and_gap_stop_propagation() {
        let (w, mut s) = line(4);
        s.push = Some((0, Dir::E));
        s.barriers.insert(w.grid.edge(Cell(1), Cell(2)).unwrap());
        assert_eq!(
            labels(&w, &s),
            "d1:fallen-E,d2:fallen-E,d3:upright,d4:upright"
        );
        s.barriers.clear();
        s.dominoes[1] = None;
        assert_eq!(labels(&w, &s), "d1:fallen-E,d2:absent,d3:upright,d4:upright");
    }

    #[test]
    fn absent_pushed_domino_means_nothing_falls() {
        let (w, mut s) = line(2);
        s.push = Some((0, Dir::E));
        s.dominoes[0] = None;
        assert_eq!(labels(&w, &s), "d1:absent,d2:upright");
    }

    #[test]
    fn routing_turns_the_cascade() {
        // d1 at (0,0), d2 at (1,0) turning right, d3 at (1,1)
        let world = World {
            grid: Grid::new(2, 2).unwrap(),
            census: vec!["d1".into(), "d2".into(), "d3".into()],
        };
        let p = |c, r| {
            Some(Placed {
                cell: Cell(c),
                routing: r,
                tag: 0,
            })
        };
        let s = MicroState {
            dominoes: vec![p(0, Routing::IDENTITY), p(1, Routing::TURN_RIGHT), p(3, Routing::IDENTITY)],
            barriers: Default::default(),
            push: Some((0, Dir::E)),
        };
        assert_eq!(labels(&world, &s), "d1:fallen-E,d2:fallen-S,d3:fallen-S");
    }

    #[test]
    fn a_cycle_terminates() {
        // four turn-right dominoes on a 2×2 square
        let world = World {
            grid: Grid::new(2, 2).unwrap(),
            census: (1..=4).map(|i| format!("d{i}")).collect(),
        };
        let p = |c| {
            Some(Placed {
                cell: Cell(c),
                routing: Routing::TURN_RIGHT,
                tag: 0,
            })
        };
        let s = MicroState {
            dominoes: vec![p(0), p(1), p(3), p(2)],
            barriers: Default::default(),
            push: Some((0, Dir::E)),
        };
        let out = micro_proc(&world, &s);
        assert!(out.0.iter().all(|st| matches!(st, Status::Fallen(_))));
    }
}
