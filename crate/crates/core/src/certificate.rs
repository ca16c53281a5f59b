//! Cycle certificates and the verifiers used as the final gate.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::hypergraph::{parse_numbers, Hypergraph};
use crate::templates::Mode;

/// A cyclic ordering claimed to be the `k`-th power of a Hamilton cycle
/// (power mode, graph host) or a tight Hamilton cycle (tight mode, `(k+1)`-uniform host).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleCertificate {
    pub mode: Mode,
    pub k: usize,
    pub order: Vec<u32>,
}

impl CycleCertificate {
    pub fn new(mode: Mode, k: usize, order: Vec<u32>) -> Result<Self> {
        check_permutation(&order, order.len())?;
        Ok(CycleCertificate { mode, k, order })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.order.len() * 6 + 32);
        let _ = writeln!(s, "{} {} {}", self.mode, self.k, self.order.len());
        for (i, v) in self.order.iter().enumerate() {
            if i > 0 {
                s.push(' ');
            }
            let _ = write!(s, "{v}");
        }
        s.push('\n');
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty certificate".into()))?;
        let mut parts = header.split_whitespace();
        let mode: Mode = parts.next().ok_or_else(|| Error::Parse("missing mode".into()))?.parse()?;
        let rest = parse_numbers(&parts.collect::<Vec<_>>().join(" "))?;
        let [k, n] = rest[..] else {
            return Err(Error::Parse(format!("header must be `mode k n`, got {header:?}")));
        };
        let order = match lines.next() {
            Some(l) => parse_numbers(l)?,
            None => Vec::new(),
        };
        if order.len() != n as usize {
            return Err(Error::Parse(format!("header promises {n} vertices, found {}", order.len())));
        }
        Self::new(mode, k as usize, order)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }
}

fn check_permutation(order: &[u32], n: usize) -> Result<()> {
    if order.len() != n {
        return Err(Error::NotPermutation(format!("{} entries for {n} vertices", order.len())));
    }
    let mut seen = vec![false; n];
    for &v in order {
        let slot = seen.get_mut(v as usize).ok_or_else(|| Error::NotPermutation(format!("vertex {v} out of range")))?;
        if *slot {
            return Err(Error::NotPermutation(format!("vertex {v} repeated")));
        }
        *slot = true;
    }
    Ok(())
}

fn check_mode(g: &Hypergraph, mode: Mode, k: usize) -> Result<()> {
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    let expected = mode.host_uniformity(k);
    if g.uniformity() != expected {
        return Err(Error::UniformityMismatch { expected, found: g.uniformity() });
    }
    Ok(())
}

/// Checks a certificate against its host.
pub fn verify_certificate(g: &Hypergraph, cert: &CycleCertificate) -> Result<bool> {
    check_mode(g, cert.mode, cert.k)?;
    check_permutation(&cert.order, g.vertex_count())?;
    let n = cert.order.len();
    let o = &cert.order;
    Ok(match cert.mode {
        Mode::Power => (0..n).all(|i| (1..=cert.k.min(n / 2)).all(|d| g.has_pair(o[i], o[(i + d) % n]))),
        Mode::Tight => {
            let r = g.uniformity();
            if n == 0 {
                true
            } else if n < r {
                false
            } else {
                let mut w = Vec::with_capacity(r);
                (0..n).all(|i| {
                    w.clear();
                    w.extend((0..r).map(|d| o[(i + d) % n]));
                    g.contains_edge(&w)
                })
            }
        }
    })
}

/// True iff `order` has distinct vertices and every pair at distance `<= k` is an edge.
pub fn is_power_path(g: &Hypergraph, order: &[u32], k: usize) -> bool {
    g.uniformity() == 2
        && distinct_in_range(order, g.vertex_count())
        && (0..order.len()).all(|i| (i + 1..order.len().min(i + k + 1)).all(|j| g.has_pair(order[i], order[j])))
}

/// True iff `order` has distinct vertices and every window of `uniformity` consecutive vertices is an edge.
pub fn is_tight_path(g: &Hypergraph, order: &[u32]) -> bool {
    distinct_in_range(order, g.vertex_count()) && order.windows(g.uniformity()).all(|w| g.contains_edge(w))
}

/// Mode-dispatching path check with path parameter `k`.
pub fn is_k_path(g: &Hypergraph, order: &[u32], mode: Mode, k: usize) -> bool {
    match mode {
        Mode::Power => is_power_path(g, order, k),
        Mode::Tight => g.uniformity() == k + 1 && is_tight_path(g, order),
    }
}

fn distinct_in_range(order: &[u32], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.iter().all(|&v| match seen.get_mut(v as usize) {
        Some(s) if !*s => {
            *s = true;
            true
        }
        _ => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c5() -> Hypergraph {
        Hypergraph::new(2, 5, [[0, 1], [1, 2], [2, 3], [3, 4], [0, 4]]).unwrap()
    }

    #[test]
    fn known_examples() {
        let k5 = Hypergraph::complete(2, 5);
        let cert = CycleCertificate::new(Mode::Power, 2, vec![0, 1, 2, 3, 4]).unwrap();
        assert!(verify_certificate(&k5, &cert).unwrap());
        assert!(!verify_certificate(&c5(), &cert).unwrap());
        let h = Hypergraph::complete(3, 5);
        let tight = CycleCertificate::new(Mode::Tight, 2, vec![3, 0, 4, 1, 2]).unwrap();
        assert!(verify_certificate(&h, &tight).unwrap());
    }

    #[test]
    fn k1_is_plain_hamilton_cycle() {
        let cert = CycleCertificate::new(Mode::Power, 1, vec![0, 1, 2, 3, 4]).unwrap();
        assert!(verify_certificate(&c5(), &cert).unwrap());
        let bad = CycleCertificate::new(Mode::Power, 1, vec![0, 2, 1, 3, 4]).unwrap();
        assert!(!verify_certificate(&c5(), &bad).unwrap());
    }

    #[test]
    fn errors() {
        assert!(CycleCertificate::new(Mode::Power, 1, vec![0, 0]).is_err());
        let cert = CycleCertificate::new(Mode::Power, 1, vec![0, 1, 2]).unwrap();
        assert!(matches!(verify_certificate(&c5(), &cert), Err(Error::NotPermutation(_))));
        let tight = CycleCertificate::new(Mode::Tight, 2, (0..5).collect()).unwrap();
        assert!(matches!(verify_certificate(&c5(), &tight), Err(Error::UniformityMismatch { .. })));
    }

    #[test]
    fn text_round_trip() {
        let cert = CycleCertificate::new(Mode::Tight, 2, vec![2, 0, 1]).unwrap();
        assert_eq!(cert.to_text(), "tight 2 3\n2 0 1\n");
        assert_eq!(CycleCertificate::from_text(&cert.to_text()).unwrap(), cert);
        assert!(CycleCertificate::from_text("power 2 3\n0 1\n").is_err());
    }

    #[test]
    fn path_checks() {
        let k5 = Hypergraph::complete(2, 5);
        assert!(is_power_path(&k5, &[4, 2, 0], 2));
        assert!(!is_power_path(&k5, &[4, 4], 1));
        assert!(is_power_path(&c5(), &[0, 1, 2, 3], 1));
        assert!(!is_power_path(&c5(), &[0, 1, 2, 3], 2));
        assert!(is_tight_path(&Hypergraph::complete(3, 4), &[3, 1, 0, 2]));
    }
}
