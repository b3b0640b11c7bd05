use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use crate::world::{GridCoord, WorldState};

/// Cells an agent may not enter this tick.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Blocked {
    pub cells: BTreeSet<GridCoord>,
}

impl Blocked {
    /// Object footprints plus every agent's cell except `agent`'s own.
    pub fn for_agent(world: &WorldState, agent: &str) -> Self {
        let mut cells = world.blocked_by_objects();
        cells.extend(world.agents.iter().filter(|a| a.id != agent).map(|a| a.pose.cell));
        Self { cells }
    }

    pub fn contains(&self, cell: GridCoord) -> bool {
        self.cells.contains(&cell)
    }
}

/// Shortest 4-connected path from `from` to any free goal, start included.
///
/// Among goals at the same distance the one listed first wins. The start
/// cell is never treated as blocked.
pub fn find_path(
    world: &WorldState,
    blocked: &Blocked,
    from: GridCoord,
    goals: &[GridCoord],
) -> Option<Vec<GridCoord>> {
    let walkable = |c: GridCoord| c == from || (world.is_walkable(c) && !blocked.contains(c));
    find_path_with(walkable, from, goals)
}

/// [`find_path`] over an arbitrary walkability predicate.
pub fn find_path_with(
    walkable: impl Fn(GridCoord) -> bool,
    from: GridCoord,
    goals: &[GridCoord],
) -> Option<Vec<GridCoord>> {
    let mut goal_index: BTreeMap<GridCoord, usize> = BTreeMap::new();
    for (i, g) in goals.iter().enumerate() {
        if walkable(*g) {
            goal_index.entry(*g).or_insert(i);
        }
    }
    if goal_index.is_empty() {
        return None;
    }
    let h = |c: GridCoord| goal_index.keys().map(|g| c.manhattan(*g)).min().unwrap_or(0);

    let mut g_cost: BTreeMap<GridCoord, u32> = BTreeMap::from([(from, 0)]);
    let mut came_from: BTreeMap<GridCoord, GridCoord> = BTreeMap::new();
    let mut closed = BTreeSet::new();
    let mut open = BinaryHeap::new();
    open.push(Reverse((h(from), h(from), from.z, from.x)));
    let mut best: Option<(u32, usize, GridCoord)> = None;

    while let Some(Reverse((f, _, z, x))) = open.pop() {
        if best.is_some_and(|(len, _, _)| f > len) {
            break;
        }
        let cell = GridCoord { x, z };
        if !closed.insert(cell) {
            continue;
        }
        let g = g_cost[&cell];
        if let Some(&idx) = goal_index.get(&cell) {
            if best.is_none_or(|(len, i, _)| (g, idx) < (len, i)) {
                best = Some((g, idx, cell));
            }
            continue;
        }
        for next in cell.neighbors() {
            if closed.contains(&next) || !walkable(next) {
                continue;
            }
            let ng = g + 1;
            if g_cost.get(&next).is_none_or(|&old| ng < old) {
                g_cost.insert(next, ng);
                came_from.insert(next, cell);
                let hn = h(next);
                open.push(Reverse((ng + hn, hn, next.z, next.x)));
            }
        }
    }

    let (_, _, goal) = best?;
    let mut path = vec![goal];
    let mut cur = goal;
    while let Some(prev) = came_from.get(&cur) {
        path.push(*prev);
        cur = *prev;
    }
    path.reverse();
    Some(path)
}
