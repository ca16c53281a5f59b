use hamabsorb::density::RootedTemplate;
use hamabsorb::matcher::{
    connect_family, connect_paths, default_rounds, find_rooted_copy, partition_reservoir, ConnectOptions,
    ConnectionRequest, Hypothesis, SearchPlan,
};
use hamabsorb::random::{derive_seed, rng, sample_gnp, sample_uniform_hypergraph, shuffle};
use hamabsorb::templates::{connecting_path_template, connector_root, tight_path_template, Mode};
use hamabsorb::{is_embedding, Embedding, Hypergraph, VertexSet, VertexTuple};
use proptest::prelude::*;

/// First copy in lexicographic order over the plan's placement order, checking
/// every edge only once the assignment is complete.
fn brute_first(g: &Hypergraph, rt: &RootedTemplate, y: &[u32], allowed: &[u32]) -> Option<Embedding> {
    let order = SearchPlan::new(rt).order().to_vec();
    let mut images = vec![u32::MAX; rt.template.vertex_count()];
    for (&x, &w) in rt.root.iter().zip(y) {
        images[x as usize] = w;
    }
    fn rec(
        g: &Hypergraph,
        rt: &RootedTemplate,
        order: &[u32],
        allowed: &[u32],
        images: &mut Vec<u32>,
        depth: usize,
    ) -> bool {
        if depth == order.len() {
            return is_embedding(&rt.template, g, &Embedding::new(images.clone())).unwrap();
        }
        for &w in allowed {
            if images.contains(&w) {
                continue;
            }
            images[order[depth] as usize] = w;
            if rec(g, rt, order, allowed, images, depth + 1) {
                return true;
            }
        }
        images[order[depth] as usize] = u32::MAX;
        false
    }
    rec(g, rt, &order, allowed, &mut images, 0).then(|| Embedding::new(images))
}

fn rooted_cases() -> Vec<RootedTemplate> {
    let rt = |h: Hypergraph, root: Vec<u32>| RootedTemplate::new(h, root).unwrap();
    vec![
        rt(Hypergraph::complete(2, 2), vec![0]),
        rt(Hypergraph::complete(2, 3), vec![0]),
        rt(Hypergraph::new(2, 4, [[0, 1], [1, 2], [2, 3], [0, 3]]).unwrap(), vec![0, 2]),
        rt(connecting_path_template(2, 5).unwrap(), connector_root(2, 5)),
        rt(connecting_path_template(1, 5).unwrap(), connector_root(1, 5)),
        RootedTemplate::unrooted(Hypergraph::complete(2, 4)),
        rt(tight_path_template(2, 6).unwrap(), connector_root(2, 6)),
    ]
}

#[test]
fn trivial_cases() {
    let edge = RootedTemplate::new(Hypergraph::complete(2, 2), vec![0]).unwrap();
    let g = Hypergraph::complete(2, 6);
    assert!(find_rooted_copy(&g, &edge, &[0], &VertexSet::new(6)).unwrap().is_none());
    let f = find_rooted_copy(&g, &edge, &[0], &VertexSet::from_iter(6, [3, 5])).unwrap().unwrap();
    assert_eq!(f.images(), &[0, 3]);
    assert!(find_rooted_copy(&g, &edge, &[0], &VertexSet::from_iter(6, [0, 1])).is_err());
    assert!(find_rooted_copy(&g, &edge, &[0, 1], &VertexSet::from_iter(6, [3])).is_err());
}

#[test]
fn connecting_path_in_k9() {
    let rt = RootedTemplate::new(connecting_path_template(2, 5).unwrap(), connector_root(2, 5)).unwrap();
    let g = Hypergraph::complete(2, 9);
    for (y, allowed) in [([0, 1, 2, 3], vec![8]), ([8, 2, 5, 0], vec![1, 3, 4]), ([3, 4, 5, 6], vec![0])] {
        let set = VertexSet::from_iter(9, allowed.iter().copied());
        let f = find_rooted_copy(&g, &rt, &y, &set).unwrap().unwrap();
        assert!(is_embedding(&rt.template, &g, &f).unwrap());
        assert_eq!(Some(f), brute_first(&g, &rt, &y, &allowed));
    }
}

#[test]
fn reservoir_partition() {
    let w: Vec<u32> = (0..1024).rev().collect();
    let parts = partition_reservoir(&w, 10).unwrap();
    let sizes: Vec<usize> = parts.iter().map(Vec::len).collect();
    assert_eq!(sizes, vec![256, 128, 64, 51, 51, 51, 51, 51, 51, 51]);
    assert_eq!(parts[0], (0..256).collect::<Vec<u32>>());
    assert_eq!(partition_reservoir(&w, 1).unwrap()[0].len(), 512);
    assert!(partition_reservoir(&[], 3).is_err());
    assert_eq!(default_rounds(1024), 10);
    assert_eq!(default_rounds(1), 1);
}

/// Every invariant of a rooted matching.
fn check_matching(g: &Hypergraph, req: &ConnectionRequest, copies: &[Embedding]) {
    let n = g.vertex_count();
    let w = VertexSet::from_iter(n, req.reservoir.iter().copied());
    let mut used = VertexSet::new(n);
    for (f, y) in copies.iter().zip(&req.family) {
        assert!(is_embedding(&req.template.template, g, f).unwrap());
        assert_eq!(f.map_tuple(&req.template.root), y.as_slice());
        for x in req.template.internal_vertices() {
            let v = f.image(x as usize);
            assert!(w.contains(v) && !used.contains(v));
            used.insert(v);
        }
    }
}

#[test]
fn complete_hosts_match_everything() {
    let g = Hypergraph::complete(2, 60);
    let rt = RootedTemplate::new(connecting_path_template(2, 6).unwrap(), connector_root(2, 6)).unwrap();
    let family: Vec<VertexTuple> = (0..5).map(|i| VertexTuple::new((4 * i..4 * i + 4).collect()).unwrap()).collect();
    let req = ConnectionRequest { template: rt, family, reservoir: (20..60).collect() };
    let m = connect_family(&g, &req, 4, &ConnectOptions::default()).unwrap();
    check_matching(&g, &req, &m.copies);
    assert_eq!(m.residuals, vec![0]);
    let empty = ConnectionRequest { family: Vec::new(), ..req.clone() };
    assert!(connect_family(&g, &empty, 4, &ConnectOptions::default()).unwrap().copies.is_empty());
    // too many requests for the lemma's quarter-reservoir hypothesis
    let tight = ConnectionRequest { reservoir: (20..40).collect(), ..req };
    assert!(connect_family(&g, &tight, 4, &ConnectOptions::default()).is_err());
    assert!(connect_family(&g, &tight, 4, &ConnectOptions::relaxed(None)).is_ok());
}

#[test]
fn connect_paths_edge_cases() {
    let g = Hypergraph::complete(2, 24);
    let opts = ConnectOptions::default();
    assert!(connect_paths(&g, &[], &[5, 6], 2, 5, Mode::Power, 2, &opts).unwrap().is_empty());
    let pair = (VertexTuple::new(vec![0, 1]).unwrap(), VertexTuple::new(vec![2, 3]).unwrap());
    let w: Vec<u32> = (4..24).collect();
    let paths = connect_paths(&g, std::slice::from_ref(&pair), &w, 2, 5, Mode::Power, 2, &opts).unwrap();
    assert!(is_embedding(&connecting_path_template(2, 5).unwrap(), &g, &paths[0]).unwrap());
    assert!(connect_paths(&g, std::slice::from_ref(&pair), &w, 2, 4, Mode::Power, 2, &opts).is_err());
    let h = Hypergraph::complete(3, 24);
    assert!(connect_paths(&h, std::slice::from_ref(&pair), &w, 2, 5, Mode::Power, 2, &opts).is_err());
    let tight = connect_paths(&h, &[pair], &w, 2, 5, Mode::Tight, 2, &opts).unwrap();
    assert!(is_embedding(&tight_path_template(2, 5).unwrap(), &h, &tight[0]).unwrap());
}

#[test]
fn rooted_edge_matching_rate() {
    let (n, p, t) = (600, 0.15, 100);
    let rt = RootedTemplate::new(Hypergraph::complete(2, 2), vec![0]).unwrap();
    let mut wins = 0;
    for trial in 0..100 {
        let g = sample_gnp(n, p, derive_seed(601, trial)).unwrap();
        let family = (0..t as u32).map(|v| VertexTuple::new(vec![v]).unwrap()).collect();
        let req = ConnectionRequest { template: rt.clone(), family, reservoir: (t as u32..n as u32).collect() };
        if let Ok(m) = connect_family(&g, &req, default_rounds(n), &ConnectOptions::default()) {
            check_matching(&g, &req, &m.copies);
            assert!(m.residuals.windows(2).all(|w| w[1] <= w[0]));
            wins += 1;
        }
    }
    assert!(wins >= 95, "{wins}/100");
}

#[test]
fn connecting_paths_rate() {
    let (n, p, k, ell) = (800, 0.45, 2, 10);
    let pairs_count = 15;
    let template = connecting_path_template(k, ell).unwrap();
    let mut wins = 0;
    for trial in 0..50 {
        let g = sample_gnp(n, p, derive_seed(802, trial)).unwrap();
        let mut verts: Vec<u32> = (0..n as u32).collect();
        shuffle(&mut rng(trial), &mut verts);
        let (ends, rest) = verts.split_at(4 * pairs_count);
        let pairs: Vec<(VertexTuple, VertexTuple)> = ends
            .chunks(4)
            .map(|c| (VertexTuple::new(c[..2].to_vec()).unwrap(), VertexTuple::new(c[2..].to_vec()).unwrap()))
            .collect();
        let w = &rest[..4 * ell * pairs_count];
        if let Ok(paths) =
            connect_paths(&g, &pairs, w, k, ell, Mode::Power, default_rounds(n), &ConnectOptions::default())
        {
            let mut seen = VertexSet::new(n);
            for (f, (a, b)) in paths.iter().zip(&pairs) {
                assert!(is_embedding(&template, &g, f).unwrap());
                assert!(f.images().starts_with(a) && f.images().ends_with(b));
                for &v in f.images() {
                    assert!(!seen.contains(v));
                    seen.insert(v);
                }
            }
            wins += 1;
        }
    }
    assert!(wins >= 45, "{wins}/50");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn search_agrees_with_brute_force(case in 0usize..7, n in 6usize..=10, p in 0.2f64..0.9, seed in any::<u64>(), split in any::<u64>()) {
        let rt = rooted_cases().swap_remove(case);
        let k = rt.template.uniformity();
        let g = if k == 2 { sample_gnp(n, p, seed).unwrap() } else { sample_uniform_hypergraph(k, n, p, seed).unwrap() };
        let mut verts: Vec<u32> = (0..n as u32).collect();
        shuffle(&mut rng(split), &mut verts);
        let r = rt.root.len();
        prop_assume!(r < n);
        let y = &verts[..r];
        let mut allowed: Vec<u32> = verts[r..].iter().copied().filter(|&v| (split >> (v % 64)) & 1 == 1 || v % 3 == 0).collect();
        allowed.sort_unstable();
        let set = VertexSet::from_iter(n, allowed.iter().copied());
        let got = find_rooted_copy(&g, &rt, y, &set).unwrap();
        let expected = brute_first(&g, &rt, y, &allowed);
        if let Some(f) = &got {
            prop_assert!(is_embedding(&rt.template, &g, f).unwrap());
        }
        prop_assert_eq!(got, expected);
    }

    #[test]
    fn matchings_are_valid_and_deterministic(n in 20usize..40, p in 0.3f64..0.9, seed in any::<u64>(), t in 0usize..4) {
        let g = sample_gnp(n, p, seed).unwrap();
        let rt = RootedTemplate::new(Hypergraph::complete(2, 3), vec![0]).unwrap();
        let family = (0..t as u32).map(|v| VertexTuple::new(vec![v]).unwrap()).collect();
        let req = ConnectionRequest { template: rt, family, reservoir: (t as u32..n as u32).collect() };
        let opts = ConnectOptions { hypothesis: Hypothesis::Relaxed, sweep: true, node_budget: None };
        let first = connect_family(&g, &req, 3, &opts);
        if let Ok(m) = &first {
            check_matching(&g, &req, &m.copies);
        }
        prop_assert_eq!(format!("{first:?}"), format!("{:?}", connect_family(&g, &req, 3, &opts)));
    }
}
