//! Small hand-built tasks used by tests, benches and the CLI self-checks.

use crate::generator::{CnfInstance, Literal};
use crate::graph::{CoreTypeId, TypedDag, Vertex};
use crate::weight::Weight;

fn vertex(wcet: i64, s: usize) -> Vertex {
    Vertex::new(Weight::from(wcet), CoreTypeId(s))
}

/// Two types, `len = 19`, `vol_0 = 11`, `vol_1 = 34`.
///
/// The longest path is `0 → 1 → 2 → 3 → 4` (weights 1, 8, 2, 7, 1); three
/// more vertices hang between source and sink.
pub fn example_two_graph() -> TypedDag {
    let vertices = vec![
        vertex(1, 0),
        vertex(8, 1),
        vertex(2, 0),
        vertex(7, 1),
        vertex(1, 0),
        vertex(9, 1),
        vertex(10, 1),
        vertex(7, 0),
    ];
    let edges = [
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (0, 5),
        (5, 4),
        (0, 6),
        (6, 4),
        (0, 7),
        (7, 4),
    ];
    TypedDag::new(vertices, &edges).expect("fixture is acyclic")
}

/// `k` diamonds in series, `2^k` complete paths. Vertex `i` has type
/// `i % type_count` and WCET `1 + i % 5`.
pub fn stacked_diamonds(k: usize, type_count: usize) -> TypedDag {
    let mk = |i: usize| vertex(1 + (i % 5) as i64, i % type_count.max(1));
    let mut vertices = vec![mk(0)];
    let mut edges = Vec::new();
    let mut join = 0;
    for _ in 0..k {
        let a = vertices.len();
        vertices.extend((a..a + 3).map(mk));
        edges.extend([(join, a), (join, a + 1), (a, a + 2), (a + 1, a + 2)]);
        join = a + 2;
    }
    TypedDag::new(vertices, &edges).expect("fixture is acyclic")
}

/// A chain of `n` unit-WCET vertices of type 0.
pub fn unit_chain(n: usize) -> TypedDag {
    let vertices = (0..n).map(|_| vertex(1, 0)).collect();
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    TypedDag::new(vertices, &edges).expect("fixture is acyclic")
}

/// `(x1 ∨ ¬x2 ∨ x3) ∧ (x1 ∨ ¬x2 ∨ ¬x3) ∧ (x1 ∨ x2 ∨ ¬x3) ∧ (¬x1 ∨ ¬x2 ∨ x3)`.
pub fn four_clause_cnf() -> CnfInstance {
    let l = Literal::from_dimacs;
    CnfInstance::new(
        3,
        vec![
            [l(1), l(-2), l(3)],
            [l(1), l(-2), l(-3)],
            [l(1), l(2), l(-3)],
            [l(-1), l(-2), l(3)],
        ],
    )
    .expect("fixture is well formed")
}
