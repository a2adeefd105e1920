//! Small named cubic graphs used throughout tests and the CLI.

use crate::graph::Multigraph;

/// Two vertices joined by three parallel edges.
pub fn theta() -> Multigraph {
    Multigraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap()
}

pub fn k4() -> Multigraph {
    Multigraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

/// Parts `{0,1,2}` and `{3,4,5}`.
pub fn k33() -> Multigraph {
    let mut pairs = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            pairs.push((a, b));
        }
    }
    Multigraph::from_pairs(6, &pairs).unwrap()
}

/// Triangular prism: triangles 0-1-2 and 3-4-5, rungs `i -- i+3`.
pub fn prism() -> Multigraph {
    Multigraph::from_pairs(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]).unwrap()
}

/// 3-cube on 3-bit vertex labels; edges join labels differing in one bit.
pub fn cube() -> Multigraph {
    let mut pairs = Vec::new();
    for v in 0..8usize {
        for bit in 0..3 {
            let w = v ^ (1 << bit);
            if v < w {
                pairs.push((v, w));
            }
        }
    }
    Multigraph::from_pairs(8, &pairs).unwrap()
}

/// Outer 5-cycle 0..4, spokes `i -- i+5`, inner pentagram.
pub fn petersen() -> Multigraph {
    let mut pairs = Vec::new();
    for i in 0..5 {
        pairs.push((i, (i + 1) % 5));
    }
    for i in 0..5 {
        pairs.push((i, i + 5));
    }
    for i in 0..5 {
        pairs.push((5 + i, 5 + (i + 2) % 5));
    }
    Multigraph::from_pairs(10, &pairs).unwrap()
}

pub fn by_name(name: &str) -> Option<Multigraph> {
    match name.to_ascii_lowercase().as_str() {
        "theta" => Some(theta()),
        "k4" => Some(k4()),
        "k33" | "k3,3" => Some(k33()),
        "prism" => Some(prism()),
        "cube" => Some(cube()),
        "petersen" => Some(petersen()),
        _ => None,
    }
}
