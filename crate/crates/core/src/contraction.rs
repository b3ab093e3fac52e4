//! Quotients and contractions over vertex partitions, contraction sequences,
//! and the predicates that classify an edge contraction set.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, Graph, MultiGraph};
use crate::partition::{cell_neighborhood, edge_contraction_partition, Chain, Partition};
use crate::tucker::tucker_matrix;

/// Exhaustive node-removal witness search runs only up to this order.
pub const EXHAUSTIVE_WITNESS_LIMIT: usize = 10;

fn check_ground_set(g: &Graph, pi: &Partition) -> Result<()> {
    if g.n() != pi.n() {
        return Err(Error::MismatchedGroundSet(g.n(), pi.n()));
    }
    Ok(())
}

/// `G/π`: one (possibly looped) edge per edge of `G`.
pub fn quotient(g: &Graph, pi: &Partition) -> Result<MultiGraph> {
    check_ground_set(g, pi)?;
    let mut q = MultiGraph::new(pi.len());
    for e in g.edges() {
        q.add_edge(pi.cell_of(e.head()), pi.cell_of(e.tail()))?;
    }
    Ok(q)
}

/// `G⫽π`: the quotient with loops and parallel edges removed.
pub fn contract(g: &Graph, pi: &Partition) -> Result<Graph> {
    check_ground_set(g, pi)?;
    let edges = g.edges().iter().filter_map(|e| {
        let (a, b) = (pi.cell_of(e.head()), pi.cell_of(e.tail()));
        Edge::new(a, b).ok()
    });
    Graph::from_edges(pi.len(), edges)
}

/// `G⫽E_cs`, the contraction over the edge contraction partition.
pub fn contract_edges(g: &Graph, e_cs: &[Edge]) -> Result<Graph> {
    let pi = edge_contraction_partition(g, e_cs)?;
    contract(g, &pi)
}

/// Contracts along a chain: starts from `G⫽π_N` (the finest partition) and
/// applies the coarsenings from the fine end back to `π_1`. The last graph
/// equals `G⫽π_1`.
pub fn contraction_sequence(g: &Graph, chain: &Chain) -> Result<Vec<Graph>> {
    let partitions = chain.partitions();
    let finest = partitions.last().expect("chains are nonempty");
    check_ground_set(g, finest)?;
    let mut out = vec![contract(g, finest)?];
    for delta in chain.coarsenings().iter().rev() {
        let next = contract(out.last().expect("nonempty"), delta)?;
        out.push(next);
    }
    Ok(out)
}

/// Classification of an edge contraction `G⫽E_cs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionClass {
    /// Surviving edges map one-to-one onto contracted edges.
    pub edge_matching: bool,
    /// Every contracted edge is a bridge, so no cycle is touched.
    pub cycle_invariant: bool,
    /// A vertex set `V_S` with `G⫽E_cs = G \ V_S` under the representative
    /// labelling, when one was found.
    pub node_removal_witness: Option<Vec<usize>>,
    /// Chen's disjoint-neighbourhood condition on the merged pair; `None`
    /// unless the edge contraction partition is an atom partition.
    pub disjoint_neighborhood_atom: Option<bool>,
}

impl ContractionClass {
    pub fn node_removal_equivalent(&self) -> bool {
        self.node_removal_witness.is_some()
    }
}

/// Classifies `G⫽E_cs`. `G` must be connected.
pub fn classify(g: &Graph, e_cs: &[Edge]) -> Result<ContractionClass> {
    g.check_edges(e_cs)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let pi = edge_contraction_partition(g, e_cs)?;
    let reduced = contract(g, &pi)?;

    let mut unique = e_cs.to_vec();
    unique.sort_unstable();
    unique.dedup();
    let edge_matching = g.m() - unique.len() == reduced.m();

    let (tree, _) = g.spanning_tree_and_cotree()?;
    let zero_rows = tucker_matrix(g, &tree)?.zero_rows();
    let cycle_invariant = unique.iter().all(|e| zero_rows.binary_search(e).is_ok());

    let node_removal_witness = constructive_witness(g, &unique, &pi, &reduced)
        .or_else(|| exhaustive_witness(g, &pi, &reduced));

    let disjoint_neighborhood_atom = if pi.is_atom() {
        let pair = pi
            .cells()
            .iter()
            .find(|c| c.len() == 2)
            .expect("atom partition has a pair");
        Some(disjoint_neighborhoods(g, pair[0], pair[1])?)
    } else {
        None
    };

    Ok(ContractionClass {
        edge_matching,
        cycle_invariant,
        node_removal_witness,
        disjoint_neighborhood_atom,
    })
}

/// Chen's hypothesis `N_u ∩ (N_v ∪ {v}) = ∅`: `u`, `v` are not adjacent and
/// share no neighbour.
pub fn disjoint_neighborhoods(g: &Graph, u: usize, v: usize) -> Result<bool> {
    let nu = g.neighbors(u)?;
    let nv = g.neighbors(v)?;
    Ok(u != v && !nu.contains(&v) && !nu.iter().any(|w| nv.binary_search(w).is_ok()))
}

/// A cut pair `(anchor, component)`: `component` is a connected component of
/// `G \ anchor`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnchoredCell {
    pub anchor: usize,
    pub cell: Vec<usize>,
}

impl AnchoredCell {
    /// `E(G[cell ∪ anchor])` in canonical order.
    pub fn edges(&self, g: &Graph) -> Vec<Edge> {
        let inside = |v: usize| v == self.anchor || self.cell.binary_search(&v).is_ok();
        g.edges()
            .iter()
            .copied()
            .filter(|e| inside(e.head()) && inside(e.tail()))
            .collect()
    }
}

/// Every `(v, C)` with `C` a component of `G \ v`.
pub fn anchored_cells(g: &Graph) -> Result<Vec<AnchoredCell>> {
    let mut out = Vec::new();
    for v in g.vertices() {
        if g.n() == 1 {
            break;
        }
        let (rest, map) = g.remove_vertices(&[v])?;
        let survivors = map.survivors();
        for comp in rest.connected_components().cells() {
            out.push(AnchoredCell {
                anchor: v,
                cell: comp.iter().map(|&i| survivors[i - 1]).collect(),
            });
        }
    }
    Ok(out)
}

/// Whether a set of anchored cells can be contracted together: cells are
/// pairwise disjoint and no cell swallows another pair's anchor.
pub fn compatible(a: &AnchoredCell, b: &AnchoredCell) -> bool {
    let disjoint = a.cell.iter().all(|v| b.cell.binary_search(v).is_err());
    disjoint && a.cell.binary_search(&b.anchor).is_err() && b.cell.binary_search(&a.anchor).is_err()
}

/// Tier one: write `E_cs` as a disjoint union of sets `E(G[C ∪ v])` drawn
/// from compatible anchored cells; the union of the cells is the witness.
///
/// Each cell `C ∪ v` lies inside one cell `K` of `π`, and `K` keeps a single
/// survivor, which must then anchor every chosen cell in `K`. The chosen
/// cells are the components of `G \ s` inside `K`, and their edge sets cover
/// exactly the edges touching `K \ s`. So a cover exists iff every cell `K`
/// has a vertex `s` such that all other members of `K` have every incident
/// edge in `E_cs`.
fn constructive_witness(
    g: &Graph,
    e_cs: &[Edge],
    pi: &Partition,
    reduced: &Graph,
) -> Option<Vec<usize>> {
    if e_cs.is_empty() {
        return None;
    }
    let mut contracted_degree = vec![0usize; g.n()];
    for e in e_cs {
        contracted_degree[e.head() - 1] += 1;
        contracted_degree[e.tail() - 1] += 1;
    }
    let degrees = g.degrees();
    let saturated = |v: usize| contracted_degree[v - 1] == degrees[v - 1];
    let mut witness = Vec::new();
    for cell in pi.cells() {
        let open: Vec<usize> = cell.iter().copied().filter(|&v| !saturated(v)).collect();
        let survivor = match open.as_slice() {
            [] => cell[0],
            [s] => *s,
            _ => return None,
        };
        witness.extend(cell.iter().copied().filter(|&v| v != survivor));
    }
    witness.sort_unstable();
    is_node_removal_witness(g, pi, reduced, &witness).then_some(witness)
}

/// Tier two: try every `V_S` of size `n - r` (only for `n <= 10`).
fn exhaustive_witness(g: &Graph, pi: &Partition, reduced: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    let size = n - pi.len();
    if n > EXHAUSTIVE_WITNESS_LIMIT || size == 0 {
        return None;
    }
    let mut subset: Vec<usize> = (1..=size).collect();
    loop {
        if is_node_removal_witness(g, pi, reduced, &subset) {
            return Some(subset);
        }
        // next combination in lexicographic order
        let mut i = size;
        while i > 0 && subset[i - 1] == n - size + i {
            i -= 1;
        }
        if i == 0 {
            return None;
        }
        subset[i - 1] += 1;
        for j in i..size {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Checks `G⫽π = G \ V_S` where every cell keeps exactly one vertex outside
/// `V_S` and that vertex stands in for the cell.
pub fn is_node_removal_witness(
    g: &Graph,
    pi: &Partition,
    reduced: &Graph,
    removed: &[usize],
) -> bool {
    let n = g.n();
    if removed.len() + pi.len() != n || reduced.n() != pi.len() {
        return false;
    }
    let mut gone = vec![false; n];
    for &v in removed {
        if v == 0 || v > n || gone[v - 1] {
            return false;
        }
        gone[v - 1] = true;
    }
    let mut survivors_per_cell = vec![0usize; pi.len()];
    for v in 1..=n {
        if !gone[v - 1] {
            survivors_per_cell[pi.cell_of(v) - 1] += 1;
        }
    }
    if survivors_per_cell.iter().any(|&c| c != 1) {
        return false;
    }
    let mut mapped: Vec<Edge> = g
        .edges()
        .iter()
        .filter(|e| !gone[e.head() - 1] && !gone[e.tail() - 1])
        .map(|e| Edge::new(pi.cell_of(e.head()), pi.cell_of(e.tail())).expect("distinct cells"))
        .collect();
    mapped.sort_unstable();
    mapped.dedup();
    mapped == reduced.edges()
}

/// Exact contracted degree and the upper bound `Σ d_v − 2(|C| − 1)` for one
/// contracted vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBound {
    pub exact: usize,
    pub bound: usize,
}

/// Per contracted vertex of `G⫽E_cs`, in cell order.
pub fn contracted_degrees(g: &Graph, e_cs: &[Edge]) -> Result<Vec<DegreeBound>> {
    let pi = edge_contraction_partition(g, e_cs)?;
    let reduced = contract(g, &pi)?;
    let degrees = g.degrees();
    pi.cells()
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            let total: usize = cell.iter().map(|&v| degrees[v - 1]).sum();
            Ok(DegreeBound {
                exact: reduced.degree(i + 1)?,
                bound: total - 2 * (cell.len() - 1),
            })
        })
        .collect()
}

/// `|f_π(N_C)|` for every cell, computed from cell neighbourhoods rather
/// than from the contracted graph.
pub fn degrees_from_cell_neighborhoods(g: &Graph, pi: &Partition) -> Result<Vec<usize>> {
    (1..=pi.len())
        .map(|i| {
            let nbhd = cell_neighborhood(g, pi, i)?;
            Ok(pi.partition_function(&nbhd)?.len())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::e;
    use crate::partition::atom_chain;

    fn g5() -> Graph {
        Graph::new(5, &[(1, 3), (2, 3), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    fn cells(n: usize, c: &[&[usize]]) -> Partition {
        Partition::from_cells(n, &c.iter().map(|c| c.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn triangle() -> Graph {
        Graph::new(3, &[(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    #[test]
    fn quotient_examples() {
        let g = g5();
        let q = quotient(&g, &cells(5, &[&[1], &[2], &[3], &[4, 5]])).unwrap();
        assert_eq!(q.n(), 4);
        assert_eq!(q.loop_count(), 1);
        assert_eq!(q.multiplicity(4, 4), 1);
        assert_eq!(q.total_multiplicity() - q.loop_count(), 4);
        assert_eq!(q.multiplicity(3, 4), 2);

        let id = quotient(&g, &Partition::identity(5)).unwrap();
        assert_eq!(id.simplify(), g);
        assert_eq!(id.total_multiplicity(), 5);

        let k3 = quotient(&triangle(), &Partition::single(3)).unwrap();
        assert_eq!((k3.n(), k3.loop_count()), (1, 3));
        assert!(quotient(&g, &Partition::identity(4)).is_err());
    }

    #[test]
    fn contraction_examples() {
        let g = g5();
        assert_eq!(
            contract(&g, &cells(5, &[&[1, 2, 3], &[4], &[5]])).unwrap(),
            triangle()
        );
        assert_eq!(contract(&g, &Partition::identity(5)).unwrap(), g);
        let atom = contract(&g, &cells(5, &[&[1], &[2], &[3], &[4, 5]])).unwrap();
        assert_eq!((atom.n(), atom.m()), (4, 3));

        assert_eq!(contract_edges(&g, &[e(1, 3), e(2, 3)]).unwrap(), triangle());
        assert_eq!(contract_edges(&g, &[]).unwrap(), g);
        let merged = contract_edges(&g, &[e(4, 5)]).unwrap();
        assert_eq!(merged.edges(), &[e(1, 3), e(2, 3), e(3, 4)]);
        assert!(contract_edges(&g, &[e(1, 5)]).is_err());
    }

    #[test]
    fn contraction_sequences() {
        let g = g5();
        let p2 = cells(5, &[&[1, 2, 3], &[4, 5]]);
        let p3 = cells(5, &[&[1, 2], &[3], &[4, 5]]);
        let chain = Chain::new(vec![p2.clone(), p3.clone()]).unwrap();
        let seq = contraction_sequence(&g, &chain).unwrap();
        assert_eq!(seq.len(), 2);
        assert_eq!(seq[0], contract(&g, &p3).unwrap());
        assert_eq!(seq[1], contract(&g, &p2).unwrap());

        let id = Chain::new(vec![Partition::identity(5)]).unwrap();
        assert_eq!(contraction_sequence(&g, &id).unwrap(), vec![g.clone()]);

        let pi = cells(5, &[&[1, 2, 3], &[4], &[5]]);
        let seq = contraction_sequence(&g, &atom_chain(&pi)).unwrap();
        assert_eq!(seq.last().unwrap(), &triangle());
        assert_eq!(seq.len(), 3);
    }

    #[test]
    fn classify_figure_two() {
        let c = classify(&g5(), &[e(1, 3), e(2, 3)]).unwrap();
        assert!(c.edge_matching);
        assert!(c.cycle_invariant);
        assert_eq!(c.node_removal_witness, Some(vec![1, 2]));
        assert_eq!(c.disjoint_neighborhood_atom, None);
    }

    #[test]
    fn classify_with_chord() {
        let g = Graph::new(5, &[(1, 3), (2, 3), (3, 4), (4, 5), (3, 5), (1, 5)]).unwrap();
        let c = classify(&g, &[e(1, 3), e(2, 3)]).unwrap();
        assert!(!c.cycle_invariant);
        assert_eq!(c.node_removal_witness, Some(vec![1, 2]));
    }

    #[test]
    fn classify_parallel_collapse() {
        let c = classify(&g5(), &[e(4, 5)]).unwrap();
        assert!(!c.edge_matching);
        assert!(!c.cycle_invariant);
        // an edge-based pair is always adjacent
        assert_eq!(c.disjoint_neighborhood_atom, Some(false));
    }

    #[test]
    fn classify_errors() {
        assert_eq!(
            classify(&g5(), &[e(1, 2)]),
            Err(Error::UnknownEdge(e(1, 2)))
        );
        let split = Graph::new(4, &[(1, 2), (3, 4)]).unwrap();
        assert_eq!(classify(&split, &[e(1, 2)]), Err(Error::Disconnected));
    }

    #[test]
    fn disjoint_neighbourhood_pairs() {
        let p5 = Graph::new(5, &[(1, 2), (2, 3), (3, 4), (4, 5)]).unwrap();
        assert!(disjoint_neighborhoods(&p5, 1, 4).unwrap());
        assert!(!disjoint_neighborhoods(&p5, 1, 3).unwrap());
        assert!(!disjoint_neighborhoods(&p5, 1, 2).unwrap());
    }

    #[test]
    fn degree_bounds() {
        let g = g5();
        let d = contracted_degrees(&g, &[e(1, 3), e(2, 3)]).unwrap();
        assert_eq!(d[0], DegreeBound { exact: 2, bound: 2 });
        let d = contracted_degrees(&g, &[]).unwrap();
        let degs = g.degrees();
        assert!(d
            .iter()
            .zip(&degs)
            .all(|(b, &deg)| b.exact == deg && b.bound == deg));
        let d = contracted_degrees(&g, &[e(4, 5)]).unwrap();
        // d_4 = d_5 = 2 in G5
        assert_eq!(d[3], DegreeBound { exact: 1, bound: 2 });
    }

    #[test]
    fn anchored_cells_of_g5() {
        let cells = anchored_cells(&g5()).unwrap();
        let at3: Vec<&Vec<usize>> = cells
            .iter()
            .filter(|c| c.anchor == 3)
            .map(|c| &c.cell)
            .collect();
        assert_eq!(at3, vec![&vec![1], &vec![2], &vec![4, 5]]);
        let c = cells.iter().find(|c| c.anchor == 3 && c.cell == [4, 5]).unwrap();
        assert_eq!(c.edges(&g5()), vec![e(3, 4), e(3, 5), e(4, 5)]);
    }

    #[test]
    fn witness_check_requires_one_survivor_per_cell() {
        let g = g5();
        let pi = cells(5, &[&[1, 2, 3], &[4], &[5]]);
        let reduced = contract(&g, &pi).unwrap();
        assert!(is_node_removal_witness(&g, &pi, &reduced, &[1, 2]));
        assert!(is_node_removal_witness(&g, &pi, &reduced, &[2, 3]) == false);
        assert!(!is_node_removal_witness(&g, &pi, &reduced, &[4, 5]));
        assert!(!is_node_removal_witness(&g, &pi, &reduced, &[1]));
    }
}
