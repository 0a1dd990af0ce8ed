use serde::Serialize;

use crate::analysis::SelfMap;
use crate::error::{Error, Result};
use crate::spaces::Point;

/// A minimal non-empty `T`-invariant subset, as indices into the input point
/// list (ascending) together with the points themselves.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantSet {
    pub indices: Vec<usize>,
    pub points: Vec<Point>,
}

/// All minimal invariant subsets of a self-map of a finite point list: the
/// cycles of its functional graph, ordered by smallest member index.
pub fn minimal_invariant_sets<M: SelfMap + ?Sized>(
    points: &[Point],
    map: &M,
) -> Result<Vec<InvariantSet>> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let next = points
        .iter()
        .map(|p| {
            let image = map.apply(p)?;
            points
                .iter()
                .position(|q| *q == image)
                .ok_or_else(|| Error::ImageOutsideDomain(image.into_coords()))
        })
        .collect::<Result<Vec<usize>>>()?;

    // 0 = unvisited, 1 = on the current walk, 2 = finished
    let mut state = vec![0u8; points.len()];
    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..points.len() {
        let mut walk = Vec::new();
        let mut i = start;
        while state[i] == 0 {
            state[i] = 1;
            walk.push(i);
            i = next[i];
        }
        if state[i] == 1 {
            let pos = walk.iter().position(|&w| w == i).unwrap_or(0);
            let mut cycle = walk[pos..].to_vec();
            cycle.sort_unstable();
            cycles.push(cycle);
        }
        for w in walk {
            state[w] = 2;
        }
    }
    cycles.sort_by_key(|c| c[0]);
    Ok(cycles
        .into_iter()
        .map(|indices| InvariantSet {
            points: indices.iter().map(|&i| points[i].clone()).collect(),
            indices,
        })
        .collect())
}
