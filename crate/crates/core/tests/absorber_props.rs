use hamabsorb::absorber::{
    absorb, absorb_single, backbone_template, build_chain_absorber, chain_absorber_size, fresh_chain_absorber,
    is_path_between, AbsorberConfig, ChainAbsorber,
};
use hamabsorb::matcher::ConnectOptions;
use hamabsorb::pipeline::{minimal_connector_len, Plan};
use hamabsorb::random::{derive_seed, rng, sample_gnp, shuffle, uniform_below};
use hamabsorb::{Error, Hypergraph, Mode, Parameters, VertexSet};

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

/// `absorb(x_prime)` is an a–b path on exactly `V(A) \ X'` in every host given.
fn check_absorb(hosts: &[&Hypergraph], a: &ChainAbsorber, x_prime: &[u32]) {
    let order = absorb(a, x_prime).unwrap();
    let expected: Vec<u32> = sorted(a.vertices()).into_iter().filter(|v| !x_prime.contains(v)).collect();
    assert_eq!(sorted(order.clone()), expected);
    for g in hosts {
        assert!(is_path_between(g, &order, &a.a(), &a.b(), a.mode, a.k), "X' = {x_prime:?}");
    }
}

#[test]
fn backbone_goldens() {
    let b = backbone_template(2, 5, Mode::Power).unwrap();
    assert_eq!(b.vertex_count(), 21);
    assert_eq!(b.template.edge_count(), 42);
    assert_eq!(backbone_template(3, 7, Mode::Power).unwrap().template.edge_count(), 129);
    assert_eq!(backbone_template(2, 5, Mode::Tight).unwrap().template.edge_count(), 21);
    assert!(backbone_template(2, 4, Mode::Power).is_err());
    assert!(backbone_template(2, 3, Mode::Power).is_err());
}

#[test]
fn single_absorbers_exhaustive() {
    for mode in [Mode::Power, Mode::Tight] {
        for k in [2, 3] {
            for ell in [5, 7] {
                let (host, chain) = fresh_chain_absorber(k, ell, mode, 1, minimal_connector_len(mode, k)).unwrap();
                let complete = Hypergraph::complete(host.uniformity(), host.vertex_count());
                let single = &chain.parts[0];
                let with_x = absorb_single(single, true);
                let without = absorb_single(single, false);
                assert_eq!(with_x.len(), host.vertex_count());
                assert_eq!(without.len(), host.vertex_count() - 1);
                assert!(!without.contains(&single.x()));
                for order in [&with_x, &without] {
                    assert!(is_path_between(&host, order, &single.a(), &single.b(), mode, k));
                    assert!(is_path_between(&complete, order, &single.a(), &single.b(), mode, k));
                }
                check_absorb(&[&host, &complete], &chain, &[]);
                check_absorb(&[&host, &complete], &chain, &[single.x()]);
            }
        }
    }
}

#[test]
fn chains_over_random_subsets() {
    for (k, ell, mode, t) in
        [(2, 5, Mode::Power, 8), (3, 5, Mode::Power, 4), (2, 7, Mode::Tight, 6), (1, 5, Mode::Power, 10)]
    {
        let lc = minimal_connector_len(mode, k);
        let (host, chain) = fresh_chain_absorber(k, ell, mode, t, lc).unwrap();
        assert_eq!(chain.vertex_count(), chain_absorber_size(k, ell, lc, t));
        assert_eq!(host.vertex_count(), chain.vertex_count());
        chain.check(&host).unwrap();
        let xs = chain.absorbable();
        check_absorb(&[&host], &chain, &[]);
        check_absorb(&[&host], &chain, &xs);
        let mut r = rng(t as u64);
        for _ in 0..100 {
            let mut pick = xs.clone();
            shuffle(&mut r, &mut pick);
            pick.truncate(xs.len() / 2);
            check_absorb(&[&host], &chain, &pick);
        }
        let stray = (0..host.vertex_count() as u32).find(|v| !xs.contains(v)).unwrap();
        assert!(absorb(&chain, &[stray]).is_err());
    }
}

fn config(plan: &Plan) -> AbsorberConfig {
    AbsorberConfig {
        backbone_len: plan.backbone_len,
        connector_len: plan.connector_len,
        count: plan.absorb_count,
        rounds: plan.rounds,
        connect: ConnectOptions::relaxed(Some(1_000_000)),
        factor_budget: Some(1_000_000),
    }
}

#[test]
fn complete_host_chain() {
    let n = 400;
    let plan = Plan::derive(n, &Parameters::new(2, Mode::Power)).unwrap();
    let g = Hypergraph::complete(2, n);
    let a = build_chain_absorber(&g, 2, Mode::Power, &config(&plan)).unwrap();
    a.check(&g).unwrap();
    assert!(2 * a.vertex_count() <= n);
    let xs = a.absorbable();
    let mut r = rng(7);
    for _ in 0..20 {
        let mut pick = xs.clone();
        shuffle(&mut r, &mut pick);
        pick.truncate(uniform_below(&mut r, xs.len() as u64 + 1) as usize);
        check_absorb(&[&g], &a, &pick);
    }
}

#[test]
fn too_small_hosts_fail() {
    let g = Hypergraph::complete(2, 40);
    assert!(Plan::derive(40, &Parameters::new(2, Mode::Power)).is_err());
    let cfg = AbsorberConfig {
        backbone_len: 5,
        connector_len: 6,
        count: 1,
        rounds: 6,
        connect: ConnectOptions::relaxed(None),
        factor_budget: None,
    };
    assert!(build_chain_absorber(&g, 2, Mode::Power, &cfg).is_err());
    assert!(build_chain_absorber(&g, 2, Mode::Power, &AbsorberConfig { count: 0, ..cfg }).is_err());
    let h = Hypergraph::complete(3, 200);
    assert!(matches!(
        build_chain_absorber(&h, 2, Mode::Power, &AbsorberConfig { count: 1, ..cfg }),
        Err(Error::UniformityMismatch { .. })
    ));
}

#[test]
fn random_host_build_rate() {
    let (n, q) = (2000, 0.8);
    let plan = Plan::derive(n, &Parameters::new(2, Mode::Power)).unwrap();
    let cfg = config(&plan);
    let mut wins = 0;
    for trial in 0..30 {
        let g = sample_gnp(n, q, derive_seed(2000, trial)).unwrap();
        if let Ok(a) = build_chain_absorber(&g, 2, Mode::Power, &cfg) {
            a.check(&g).unwrap();
            assert_eq!(VertexSet::from_iter(n, a.vertices()).len(), a.vertex_count());
            wins += 1;
        }
    }
    assert!(wins >= 24, "{wins}/30");
}
