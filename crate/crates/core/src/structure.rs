//! Zero-pattern analysis of the citation graph: strong connectivity,
//! periodicity, dangling rows and uncited journals.

use serde::Serialize;

use crate::model::CitationMatrix;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// The citation graph is strongly connected.
    pub irreducible: bool,
    /// The gcd of all directed cycle lengths is 1.
    pub aperiodic: bool,
    /// gcd of cycle lengths over all strongly connected components; `None`
    /// when the graph has no cycle at all.
    pub period: Option<usize>,
    /// Journals that give no citations.
    pub dangling_rows: Vec<usize>,
    /// Journals that receive no citations.
    pub zero_columns: Vec<usize>,
    /// Strongly connected components, each sorted ascending. The first
    /// component is closed: none of its journals cites outside it.
    pub components: Vec<Vec<usize>>,
}

impl StructureReport {
    /// A set of journals with no citations leaving it, when one exists
    /// besides the whole set.
    pub fn closed_component(&self) -> Option<&[usize]> {
        if self.irreducible {
            None
        } else {
            self.components.first().map(Vec::as_slice)
        }
    }
}

/// Analyses the directed graph with an edge `i -> j` wherever `c_ij > 0`.
pub fn structure(matrix: &CitationMatrix) -> StructureReport {
    let n = matrix.n();
    let adjacency: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            matrix
                .row(i)
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c > 0.0)
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    let dangling_rows = (0..n).filter(|&i| adjacency[i].is_empty()).collect();
    let mut cited = vec![false; n];
    for targets in &adjacency {
        for &j in targets {
            cited[j] = true;
        }
    }
    let zero_columns = (0..n).filter(|&j| !cited[j]).collect();

    let components = strongly_connected_components(&adjacency);
    let irreducible = n > 0 && components.len() == 1;
    let period = cycle_period(&adjacency, &components);

    StructureReport {
        irreducible,
        aperiodic: period == Some(1),
        period,
        dangling_rows,
        zero_columns,
        components,
    }
}

/// Iterative Tarjan. Components come out in reverse topological order of the
/// condensation, so the first one has no outgoing edges.
pub(crate) fn strongly_connected_components(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adjacency.len();
    let mut index = vec![UNVISITED; n];
    let mut lowlink = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut components = Vec::new();
    let mut next_index = 0;
    // (node, position of the next edge to explore)
    let mut call_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call_stack.push((root, 0));
        while let Some(&mut (v, ref mut edge)) = call_stack.last_mut() {
            if *edge == 0 && index[v] == UNVISITED {
                index[v] = next_index;
                lowlink[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adjacency[v].get(*edge) {
                *edge += 1;
                if index[w] == UNVISITED {
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    lowlink[v] = lowlink[v].min(index[w]);
                }
                continue;
            }
            call_stack.pop();
            if let Some(&(parent, _)) = call_stack.last() {
                lowlink[parent] = lowlink[parent].min(lowlink[v]);
            }
            if lowlink[v] == index[v] {
                let mut component = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    component.push(w);
                    if w == v {
                        break;
                    }
                }
                component.sort_unstable();
                components.push(component);
            }
        }
    }
    components
}

/// gcd over every component of `level(u) + 1 - level(v)` for intra-component
/// edges `u -> v`, with BFS levels from an arbitrary root. Equals the gcd of
/// cycle lengths.
fn cycle_period(adjacency: &[Vec<usize>], components: &[Vec<usize>]) -> Option<usize> {
    let n = adjacency.len();
    let mut component_of = vec![0; n];
    for (c, members) in components.iter().enumerate() {
        for &v in members {
            component_of[v] = c;
        }
    }
    let mut level = vec![usize::MAX; n];
    let mut period = 0usize;
    for (c, members) in components.iter().enumerate() {
        let root = members[0];
        level[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &v in &adjacency[u] {
                if component_of[v] != c {
                    continue;
                }
                if level[v] == usize::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                } else {
                    let diff = (level[u] + 1).abs_diff(level[v]);
                    period = gcd(period, diff);
                }
            }
        }
    }
    // A component with edges but all diffs zero cannot occur: any cycle
    // closes with a back edge whose diff is the cycle length mod levels.
    (period > 0).then_some(period)
}

fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn matrix(rows: &[&[f64]]) -> CitationMatrix {
        CitationMatrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    /// Brute force: i reaches j for every pair via repeated boolean squaring.
    fn reachability_oracle(m: &CitationMatrix) -> bool {
        let n = m.n();
        let mut reach: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| i == j || m.get(i, j) > 0.0).collect())
            .collect();
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    if reach[i][k] && reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
        reach.iter().all(|r| r.iter().all(|&b| b))
    }

    #[test]
    fn table1_is_irreducible_and_aperiodic() {
        let data = crate::synth::table1_instance();
        let report = structure(data.matrix());
        assert!(reachability_oracle(data.matrix()));
        assert!(report.irreducible);
        assert!(report.aperiodic);
        assert_eq!(report.period, Some(1));
        assert!(report.dangling_rows.is_empty());
        assert!(report.zero_columns.is_empty());
    }

    #[test]
    fn pure_two_cycle_is_periodic() {
        let report = structure(&matrix(&[&[0.0, 1.0], &[1.0, 0.0]]));
        assert!(report.irreducible);
        assert!(!report.aperiodic);
        assert_eq!(report.period, Some(2));
    }

    #[test]
    fn disconnected_self_loops() {
        let report = structure(&matrix(&[&[1.0, 0.0], &[0.0, 1.0]]));
        assert!(!report.irreducible);
        assert_eq!(report.components.len(), 2);
        assert_eq!(report.period, Some(1));
    }

    #[test]
    fn three_cycle_with_chord_is_aperiodic() {
        // cycles of length 3 and 2 -> gcd 1
        let report = structure(&matrix(&[
            &[0.0, 1.0, 0.0],
            &[1.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0],
        ]));
        assert!(report.irreducible);
        assert_eq!(report.period, Some(1));
        let report = structure(&matrix(&[
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
            &[1.0, 0.0, 0.0],
        ]));
        assert_eq!(report.period, Some(3));
    }

    #[test]
    fn dangling_and_uncited() {
        let report = structure(&matrix(&[
            &[1.0, 1.0, 0.0],
            &[1.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0],
        ]));
        assert_eq!(report.dangling_rows, vec![2]);
        assert_eq!(report.zero_columns, vec![2]);
        assert!(!report.irreducible);
    }

    #[test]
    fn first_component_is_closed() {
        // 0 -> 1 -> 2 <-> 3 ; {2,3} is closed
        let m = matrix(&[
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ]);
        let report = structure(&m);
        assert_eq!(report.closed_component(), Some(&[2usize, 3][..]));
        for &i in report.closed_component().unwrap() {
            for j in 0..4 {
                if m.get(i, j) > 0.0 {
                    assert!([2, 3].contains(&j));
                }
            }
        }
    }

    #[test]
    fn irreducibility_agrees_with_oracle_on_small_patterns() {
        // all 3x3 zero patterns
        for mask in 0u32..(1 << 9) {
            let rows: Vec<Vec<f64>> = (0..3)
                .map(|i| (0..3).map(|j| ((mask >> (i * 3 + j)) & 1) as f64).collect())
                .collect();
            let m = CitationMatrix::from_rows(rows).unwrap();
            assert_eq!(
                structure(&m).irreducible,
                reachability_oracle(&m),
                "mask {mask:b}"
            );
        }
    }

    #[test]
    fn empty_matrix() {
        let report = structure(&CitationMatrix::from_dense(0, vec![]));
        assert!(!report.irreducible);
        assert!(report.components.is_empty());
    }
}
