use kernelbench_core::datasets::{find, load_dataset, load_edge_list, load_gml, parse_edge_list, parse_gml, zachary};

fn to_edge_list(g: &kernelbench_core::Graph) -> (String, String) {
    let mut edges = String::new();
    for i in 0..g.n() {
        for j in (i + 1)..g.n() {
            if g.adjacency()[(i, j)] != 0.0 {
                edges.push_str(&format!("{i} {j}\n"));
            }
        }
    }
    let labels = g.labels().unwrap().iter().map(|l| format!("{l}\n")).collect();
    (edges, labels)
}

#[test]
fn gml_and_edge_list_agree() {
    let g = zachary();
    let (edges, labels) = to_edge_list(&g);
    let h = parse_edge_list(&edges, Some(&labels)).unwrap();
    // Edge lists number nodes by first appearance.
    let mut order: Vec<usize> = Vec::new();
    for id in edges.split_whitespace().map(|s| s.parse::<usize>().unwrap()) {
        if !order.contains(&id) {
            order.push(id);
        }
    }
    assert!(g.permuted(&order).unwrap() == h);
}

#[test]
fn loading_files_is_idempotent() {
    let dir = std::env::temp_dir().join(format!("kernelbench-datasets-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (edges, labels) = to_edge_list(&zachary());
    std::fs::write(dir.join("k.edges"), edges).unwrap();
    std::fs::write(dir.join("k.labels"), labels).unwrap();
    let gml = include_str!("../data/karate.gml");
    std::fs::write(dir.join("karate.gml"), gml).unwrap();

    let a = load_edge_list(&dir.join("k.edges"), Some(&dir.join("k.labels"))).unwrap();
    let b = load_edge_list(&dir.join("k.edges"), Some(&dir.join("k.labels"))).unwrap();
    assert_eq!(a, b);
    assert_eq!(load_gml(&dir.join("karate.gml")).unwrap(), parse_gml(gml).unwrap());
    assert_eq!(load_dataset(&find("zachary").unwrap(), &dir).unwrap(), zachary());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn size_mismatch_is_reported() {
    let dir = std::env::temp_dir().join(format!("kernelbench-mismatch-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    std::fs::write(dir.join("football.gml"), include_str!("../data/karate.gml")).unwrap();
    let err = load_dataset(&find("football").unwrap(), &dir).unwrap_err();
    assert!(matches!(err, kernelbench_core::Error::DatasetMismatch { nodes: 34, .. }));
    std::fs::remove_dir_all(&dir).unwrap();
}
