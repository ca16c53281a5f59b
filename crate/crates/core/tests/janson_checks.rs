use hamabsorb::density::RootedTemplate;
use hamabsorb::janson::{
    delta_rooted_bound, delta_upper_bound, exact_mu_delta, exact_rooted_mu_delta, expected_lex_copies,
    expected_rooted_copies, lower_tail_bound, JansonParams,
};
use hamabsorb::random::sample_gnp;
use hamabsorb::templates::{connecting_path_template, connector_root};
use hamabsorb::Hypergraph;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(1.0)
}

fn small_templates() -> Vec<Hypergraph> {
    vec![
        Hypergraph::complete(2, 2),
        Hypergraph::complete(2, 3),
        Hypergraph::complete(2, 4),
        Hypergraph::new(2, 3, [[0, 1], [1, 2]]).unwrap(),
        Hypergraph::new(2, 4, [[0, 1], [1, 2], [2, 3], [0, 3]]).unwrap(),
        Hypergraph::new(2, 4, [[0, 1], [0, 2], [0, 3]]).unwrap(),
        Hypergraph::complete(3, 3),
        Hypergraph::complete(3, 4),
        Hypergraph::new(3, 4, [[0, 1, 2], [1, 2, 3]]).unwrap(),
    ]
}

#[test]
fn triangle_on_five() {
    let t = Hypergraph::complete(2, 3);
    let (mu, delta) = exact_mu_delta(5, &t, 0.5).unwrap();
    assert!(close(mu, 1.25));
    assert!(close(delta, 1.875));
    assert!(close(expected_lex_copies(5, &t, 0.5).unwrap(), mu));
    assert!(delta_upper_bound(5, &t, 0.5).unwrap() >= delta);
    let bound = JansonParams::new(1.25, 1.875, 0.5).unwrap().bound;
    assert!(close(bound, (-0.0625f64).exp()));
}

#[test]
fn tail_bound_examples() {
    assert_eq!(JansonParams::new(0.0, 3.0, 0.5).unwrap().bound, 1.0);
    assert!(close(JansonParams::new(8.0, 0.0, 0.5).unwrap().bound, (-1.0f64).exp()));
    assert!(JansonParams::new(1.0, 1.0, 1.0).is_err());
    assert!(JansonParams::new(1.0, 1.0, 0.0).is_err());
    let p = JansonParams { mu: 4.0, delta: 2.0, gamma: 0.5, bound: 0.0 };
    assert!(close(lower_tail_bound(&p).unwrap(), (-0.25 * 16.0 / 12.0f64).exp()));
}

#[test]
fn monotonicity() {
    let at = |mu: f64, delta: f64| JansonParams::new(mu, delta, 0.5).unwrap().bound;
    for ratio in [0.0, 0.5, 3.0] {
        let mut last = 1.0;
        for mu in [0.5, 1.0, 2.0, 8.0, 30.0] {
            let b = at(mu, ratio * mu);
            assert!(b <= last);
            last = b;
        }
    }
    assert!(at(5.0, 1.0) <= at(5.0, 2.0));
}

#[test]
fn bound_dominates_exact_delta() {
    for h in small_templates() {
        for n in [h.vertex_count(), 6, 9, 12] {
            for p in [0.3, 0.5, 0.9] {
                let (mu, delta) = exact_mu_delta(n, &h, p).unwrap();
                assert!(close(mu, expected_lex_copies(n, &h, p).unwrap()));
                let bound = delta_upper_bound(n, &h, p).unwrap();
                assert!(
                    bound >= delta * (1.0 - 1e-9),
                    "v={} e={} n={n} p={p}: {bound} < {delta}",
                    h.vertex_count(),
                    h.edge_count()
                );
                if n == h.vertex_count() {
                    assert_eq!(delta, 0.0);
                }
            }
        }
        assert!(delta_upper_bound(30, &h, 1e-9).unwrap() < 1e-6);
    }
    let k4 = Hypergraph::complete(2, 4);
    let (mu, delta) = exact_mu_delta(6, &k4, 1.0).unwrap();
    assert_eq!(mu, 15.0);
    // any two 4-sets of [6] meet in at least two vertices, so every ordered pair overlaps
    assert_eq!(delta, 15.0 * 14.0);
    assert!(exact_mu_delta(60, &k4, 0.5).is_err());
}

#[test]
fn rooted_bound_dominates_exact() {
    let edge = RootedTemplate::new(Hypergraph::complete(2, 2), vec![0]).unwrap();
    let (d1, d2) = delta_rooted_bound(&edge, 20, 10, 3, 0.5).unwrap();
    assert_eq!(d1, 0.0);
    let (_, exact) = exact_rooted_mu_delta(&edge, 10, 3, 0.5).unwrap();
    assert!(d1 + d2 >= exact);
    let cp = RootedTemplate::new(connecting_path_template(1, 4).unwrap(), connector_root(1, 4)).unwrap();
    for p in [0.3, 0.6, 0.9] {
        let (mu, exact) = exact_rooted_mu_delta(&cp, 9, 3, p).unwrap();
        assert!(close(mu, expected_rooted_copies(&cp, 9, 3, p).unwrap()));
        let (d1, d2) = delta_rooted_bound(&cp, 15, 9, 3, p).unwrap();
        assert!(d1 + d2 >= exact * (1.0 - 1e-9));
    }
    let (d1, d2) = delta_rooted_bound(&cp, 15, 9, 3, 1e-12).unwrap();
    assert!(d1 + d2 < 1e-9);
}

fn triangles(g: &Hypergraph) -> usize {
    let n = g.vertex_count();
    let mut adj = vec![0u32; n];
    for e in g.edges() {
        adj[e[0] as usize] |= 1 << e[1];
        adj[e[1] as usize] |= 1 << e[0];
    }
    g.edges().map(|e| (adj[e[0] as usize] & adj[e[1] as usize]).count_ones() as usize).sum::<usize>() / 3
}

#[test]
fn empirical_lower_tail() {
    let t = Hypergraph::complete(2, 3);
    let (n, p, samples) = (12, 0.4, 10_000);
    let (mu, delta) = exact_mu_delta(n, &t, p).unwrap();
    let bound = JansonParams::new(mu, delta, 0.5).unwrap().bound;
    let low = (0..samples).filter(|&s| (triangles(&sample_gnp(n, p, s).unwrap()) as f64) < mu / 2.0).count();
    let freq = low as f64 / samples as f64;
    let sigma = (bound * (1.0 - bound) / samples as f64).sqrt();
    assert!(freq <= bound + 3.0 * sigma, "{freq} > {bound}");
}
