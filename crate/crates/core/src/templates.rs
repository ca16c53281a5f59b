//! Path templates: k-th powers of paths, connecting paths and tight paths.
//! Vertex `i - 1` plays the role of `u_i`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

/// Which spanning structure is sought: the `k`-th power of a cycle in a graph,
/// or a tight cycle in a `(k+1)`-uniform hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Power,
    Tight,
}

impl Mode {
    /// Host uniformity for path parameter `k`.
    pub fn host_uniformity(self, k: usize) -> usize {
        match self {
            Mode::Power => 2,
            Mode::Tight => k + 1,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Power => "power",
            Mode::Tight => "tight",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(Mode::Power),
            "tight" => Ok(Mode::Tight),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// `P^k_ℓ`: pairs `{i, j}` with `0 < j - i <= k`.
pub fn power_path_template(k: usize, ell: usize) -> Result<Hypergraph> {
    if k < 1 || ell <= k {
        return Err(Error::invalid(format!("power path needs ell > k >= 1, got k={k}, ell={ell}")));
    }
    Ok(power_path_edges(k, ell, |_, _| true))
}

fn power_path_edges(k: usize, ell: usize, keep: impl Fn(usize, usize) -> bool) -> Hypergraph {
    let mut flat = Vec::new();
    for i in 0..ell {
        for j in i + 1..ell.min(i + k + 1) {
            if keep(i, j) {
                flat.extend_from_slice(&[i as u32, j as u32]);
            }
        }
    }
    Hypergraph::from_sorted_flat(2, ell, flat)
}

/// `CP^k_ℓ`: the power path without the edges inside the first `k` or the last `k` vertices.
pub fn connecting_path_template(k: usize, ell: usize) -> Result<Hypergraph> {
    if k < 1 || ell <= 2 * k {
        return Err(Error::invalid(format!("connecting path needs ell > 2k, got k={k}, ell={ell}")));
    }
    Ok(power_path_edges(k, ell, |i, j| !(j < k || i >= ell - k)))
}

/// `H^k_ℓ`: the `(k+1)`-uniform tight path with edges `{i, …, i + k}`.
pub fn tight_path_template(k: usize, ell: usize) -> Result<Hypergraph> {
    if k < 1 || ell <= k {
        return Err(Error::invalid(format!("tight path needs ell > k, got k={k}, ell={ell}")));
    }
    let flat: Vec<u32> = (0..=ell - k - 1).flat_map(|i| (i..=i + k).map(|v| v as u32)).collect();
    Ok(Hypergraph::from_sorted_flat(k + 1, ell, flat))
}

/// The template used to connect two `k`-tuples in the given mode.
pub fn connector_template(mode: Mode, k: usize, ell: usize) -> Result<Hypergraph> {
    match mode {
        Mode::Power => connecting_path_template(k, ell),
        Mode::Tight => {
            if ell <= 2 * k {
                return Err(Error::invalid(format!("connecting path needs ell > 2k, got k={k}, ell={ell}")));
            }
            tight_path_template(k, ell)
        }
    }
}

/// Root of a connector: the first `k` and the last `k` template vertices.
pub fn connector_root(k: usize, ell: usize) -> Vec<u32> {
    (0..k as u32).chain((ell - k) as u32..ell as u32).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_examples() {
        assert_eq!(power_path_template(2, 8).unwrap().edge_count(), 13);
        let e = power_path_template(1, 2).unwrap();
        assert_eq!(e.edges().next().unwrap(), &[0, 1]);
        assert_eq!(power_path_template(3, 4).unwrap(), Hypergraph::complete(2, 4));
        assert!(power_path_template(3, 3).is_err());
        let cp = connecting_path_template(2, 8).unwrap();
        assert_eq!(cp.edge_count(), 11);
        assert!(!cp.contains_edge(&[0, 1]) && !cp.contains_edge(&[6, 7]));
        assert_eq!(connecting_path_template(1, 3).unwrap().edge_count(), 2);
        assert_eq!(connecting_path_template(2, 5).unwrap().edge_count(), 5);
        assert_eq!(tight_path_template(2, 8).unwrap().edge_count(), 6);
        assert_eq!(tight_path_template(2, 3).unwrap(), Hypergraph::complete(3, 3));
        assert_eq!(tight_path_template(3, 7).unwrap().edge_count(), 4);
    }

    #[test]
    fn rejects_degenerate_lengths() {
        assert!(power_path_template(0, 3).is_err());
        assert!(power_path_template(2, 1).is_err());
        assert!(connecting_path_template(2, 4).is_err());
        assert!(tight_path_template(3, 3).is_err());
    }

    #[test]
    fn closed_form_counts() {
        for k in 1..=3usize {
            for ell in k + 1..=20 {
                let p = power_path_template(k, ell).unwrap().edge_count();
                assert_eq!(p, k * ell - k * (k + 1) / 2);
                assert_eq!(tight_path_template(k, ell).unwrap().edge_count(), ell - k);
                if ell > 2 * k {
                    let cp = connecting_path_template(k, ell).unwrap().edge_count();
                    assert_eq!(cp, p - k * (k - 1));
                }
            }
        }
    }
}
