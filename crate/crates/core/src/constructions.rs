//! Extremal and lower-bound graph families.

use thiserror::Error;

use crate::graph::{complete, disjoint_union, empty, join, matching, Graph, GraphError};
use crate::treelab::{self, TreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("hypothesis violated: {0}")]
    Domain(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Forest(#[from] TreeError),
}

fn domain(msg: impl Into<String>) -> ConstructionError {
    ConstructionError::Domain(msg.into())
}

/// Which of the two generic compositions to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    /// `G_ex ∪ K_{kv-1}`.
    Union,
    /// `G_ex + K_{k-1}`.
    Join,
}

/// `K_{k-1} + M_{n-k+1}`.
pub fn p3_extremal(n: usize, k: usize) -> Result<Graph, ConstructionError> {
    if k == 0 || n < k {
        return Err(domain(format!("need n >= k >= 1, got n={n}, k={k}")));
    }
    Ok(join(&complete(k - 1)?, &matching(n - k + 1)?)?)
}

/// `K_t + E_{n-t}` with `t = k*floor(l/2) - 1`, plus the edge `(t, t+1)`
/// when `l` is odd.
pub fn pl_extremal(n: usize, k: usize, l: usize) -> Result<Graph, ConstructionError> {
    if k < 2 || l < 4 {
        return Err(domain(format!("need k >= 2 and l >= 4, got k={k}, l={l}")));
    }
    let t = k * (l / 2) - 1;
    if n < t + 2 {
        return Err(domain(format!("need n >= {}, got {n}", t + 2)));
    }
    let g = join(&complete(t)?, &empty(n - t)?)?;
    if l % 2 == 1 {
        Ok(g.with_edge(t, t + 1)?)
    } else {
        Ok(g)
    }
}

/// `floor(n/(l-1))` disjoint copies of `K_{l-1}` and a clique on the
/// remaining vertices.
pub fn erdos_gallai_extremal(n: usize, l: usize) -> Result<Graph, ConstructionError> {
    if l < 2 {
        return Err(domain(format!("need l >= 2, got {l}")));
    }
    let block = l - 1;
    let mut g = empty(0)?;
    let clique = complete(block)?;
    for _ in 0..n / block {
        g = disjoint_union(&g, &clique)?;
    }
    Ok(disjoint_union(&g, &complete(n % block)?)?)
}

/// `K_{l-1} + E_{n-l+1}` when `h` has a perfect matching, else
/// `E_{l-1} + E_{n-l+1}`.
pub fn forest_extremal(n: usize, h: &Graph) -> Result<Graph, ConstructionError> {
    let info = treelab::validate_forest(h)?;
    let l = info.l;
    if n < l - 1 {
        return Err(domain(format!("need n >= {}, got {n}", l - 1)));
    }
    let core = if info.has_perfect_matching {
        complete(l - 1)?
    } else {
        empty(l - 1)?
    };
    Ok(join(&core, &empty(n + 1 - l)?)?)
}

/// The two generic compositions avoiding `k` disjoint copies of a connected
/// `v`-vertex graph, given an extremal graph `g_extremal` for one copy.
pub fn gorgol_construction(
    n: usize,
    k: usize,
    g_extremal: &Graph,
    v: usize,
    which: Composition,
) -> Result<Graph, ConstructionError> {
    if k == 0 || v == 0 || n < k * v {
        return Err(domain(format!("need k, v >= 1 and n >= kv, got n={n}, k={k}, v={v}")));
    }
    let expected = match which {
        Composition::Union => n - k * v + 1,
        Composition::Join => n - k + 1,
    };
    if g_extremal.n() != expected {
        return Err(domain(format!(
            "extremal graph must have {expected} vertices, got {}",
            g_extremal.n()
        )));
    }
    Ok(match which {
        Composition::Union => disjoint_union(g_extremal, &complete(k * v - 1)?)?,
        Composition::Join => join(&complete(k - 1)?, g_extremal)?,
    })
}

/// `K_{3k-1} ∪ M_{n-3k+1}`, the graph behind the low piece of the `k*P3`
/// lower bound.
pub fn gorgol_low_p3(n: usize, k: usize) -> Result<Graph, ConstructionError> {
    if k == 0 || n < 3 * k {
        return Err(domain(format!("need k >= 1 and n >= 3k, got n={n}, k={k}")));
    }
    Ok(disjoint_union(&complete(3 * k - 1)?, &matching(n - 3 * k + 1)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{double_star, path};

    #[test]
    fn edge_counts() {
        assert_eq!(p3_extremal(14, 2).unwrap().m(), 19);
        assert_eq!(p3_extremal(5, 1).unwrap().m(), 2);
        assert_eq!(p3_extremal(9, 2).unwrap().m(), 12);
        assert_eq!(pl_extremal(20, 2, 5).unwrap().m(), 55);
        assert_eq!(pl_extremal(20, 2, 4).unwrap().m(), 54);
        assert!(pl_extremal(20, 2, 5).unwrap().has_edge(3, 4));
        assert_eq!(erdos_gallai_extremal(10, 6).unwrap().m(), 20);
        assert_eq!(erdos_gallai_extremal(5, 6).unwrap().m(), 10);
        assert_eq!(erdos_gallai_extremal(11, 6).unwrap().m(), 20);
        assert_eq!(gorgol_low_p3(6, 2).unwrap().m(), 10);
    }

    #[test]
    fn forests() {
        let two_edges = disjoint_union(&path(2).unwrap(), &path(2).unwrap()).unwrap();
        assert_eq!(forest_extremal(100, &two_edges).unwrap().m(), 99);
        let h = disjoint_union(&path(2).unwrap(), &double_star(2, 2).unwrap()).unwrap();
        let g = forest_extremal(100, &h).unwrap();
        assert_eq!(g.m(), 291);
        assert_eq!(g.edges_within(&(0..3).collect()), 0);
        assert!(forest_extremal(10, &path(6).unwrap()).is_err());
    }

    #[test]
    fn compositions() {
        let m1 = matching(1).unwrap();
        let g = gorgol_construction(6, 2, &m1, 3, Composition::Union).unwrap();
        assert_eq!((g.n(), g.m()), (6, 10));
        let m5 = matching(5).unwrap();
        assert_eq!(gorgol_construction(5, 1, &m5, 3, Composition::Join).unwrap(), m5);
        assert!(gorgol_construction(6, 2, &m5, 3, Composition::Union).is_err());
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(p3_extremal(1, 2).is_err());
        assert!(pl_extremal(20, 1, 4).is_err());
        assert!(pl_extremal(20, 2, 3).is_err());
        assert!(erdos_gallai_extremal(5, 1).is_err());
    }
}
