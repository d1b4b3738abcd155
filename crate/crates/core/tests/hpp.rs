mod common;

use common::{grid, intersection_area, shortest_hamiltonian_path, TestRng};
use farmroute::geometry::{antipodal_pairs, convex_hull, AntipodalPair, Point};
use farmroute::hpp::{
    cluster_hull, hpp_solve, is_valid_cluster, kmeans, lane_directions, plan, route_cluster, serpentine_route,
};
use farmroute::instances::{generate, FarmInstance, GeneratorConfig};
use farmroute::solution::{path_length, route_length};
use farmroute::Error;

fn corners(w: usize, h: usize) -> Vec<usize> {
    let mut c = vec![0, w - 1, w * (h - 1), w * h - 1];
    c.sort_unstable();
    c.dedup();
    c
}

/// Shortest serpentine between two grid corners over every admissible lane
/// direction (the line direction for single-row grids).
fn best_serpentine(nodes: &[Point], s: usize, t: usize) -> (Vec<usize>, f64) {
    let members: Vec<usize> = (0..nodes.len()).collect();
    let dirs = match cluster_hull(nodes, &members) {
        Ok((hull, ids)) => {
            let i = ids.iter().position(|&v| v == s).unwrap();
            let j = ids.iter().position(|&v| v == t).unwrap();
            let pair = AntipodalPair::new(i, j);
            assert!(antipodal_pairs(&hull).contains(&pair), "corners {s},{t} are not antipodal");
            lane_directions(&hull, pair)
        }
        Err(_) => vec![(nodes[nodes.len() - 1] - nodes[0]).unit()],
    };
    dirs.iter()
        .map(|&d| {
            let order = serpentine_route(nodes, &members, s, t, d, 1.0);
            let len = path_length(nodes, &order);
            (order, len)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap()
}

#[test]
fn serpentine_is_optimal_on_complete_small_grids() {
    for w in 1..=3 {
        for h in 1..=3 {
            if w * h < 2 {
                continue;
            }
            let nodes = grid(w, h);
            for &s in &corners(w, h) {
                for &t in &corners(w, h) {
                    if s == t {
                        continue;
                    }
                    let (order, len) = best_serpentine(&nodes, s, t);
                    let mut seen = order.clone();
                    seen.sort_unstable();
                    assert_eq!(seen, (0..w * h).collect::<Vec<_>>());
                    assert_eq!((order[0], *order.last().unwrap()), (s, t));
                    let opt = shortest_hamiltonian_path(&nodes, s, t);
                    assert!((len - opt).abs() < 1e-9, "{w}x{h} {s}->{t}: serpentine {len}, optimum {opt}");
                }
            }
        }
    }
}

#[test]
fn two_by_two_diagonal_needs_one_diagonal_step() {
    // Bipartite parity rules out a length-3 path between opposite corners.
    let nodes = grid(2, 2);
    let opt = shortest_hamiltonian_path(&nodes, 0, 3);
    assert!((opt - (2.0 + 2f64.sqrt())).abs() < 1e-12);
    assert!((best_serpentine(&nodes, 0, 3).1 - opt).abs() < 1e-12);
}

/// Best closed tour depot -> s -> (all nodes) -> t -> depot over all endpoint pairs.
fn best_tour_through(nodes: &[Point], depot: Point) -> f64 {
    let n = nodes.len();
    let mut best = f64::INFINITY;
    for s in 0..n {
        for t in 0..n {
            if s != t {
                best = best.min(depot.dist(nodes[s]) + shortest_hamiltonian_path(nodes, s, t) + nodes[t].dist(depot));
            }
        }
    }
    best
}

#[test]
fn three_node_cluster_matches_brute_force() {
    let nodes = vec![Point::new(0.0, 0.0), Point::new(1.0, 0.2), Point::new(0.3, 1.1)];
    for depot in [Point::new(-6.0, 0.5), Point::new(4.0, -3.0), Point::new(0.5, 8.0)] {
        let route = route_cluster(&nodes, &[0, 1, 2], depot, 1.0).unwrap();
        assert!((route.length - best_tour_through(&nodes, depot)).abs() < 1e-12);
    }
}

#[test]
fn three_by_three_cluster_with_depot_below() {
    let nodes = grid(3, 3);
    let depot = Point::new(1.0, -5.0);
    let members: Vec<usize> = (0..9).collect();
    let route = route_cluster(&nodes, &members, depot, 1.0).unwrap();
    let lower = best_tour_through(&nodes, depot);
    assert!(route.length >= lower - 1e-9);
    assert!(route.length <= 1.05 * lower, "{} vs {}", route.length, lower);
    let internal = path_length(&nodes, &route.nodes);
    let legs = route.length - internal;
    assert!((legs - depot.dist(nodes[route.nodes[0]]) - depot.dist(nodes[*route.nodes.last().unwrap()])).abs() < 1e-12);
}

#[test]
fn separated_triangles_become_one_route_each() {
    let tri = [Point::new(0.0, 0.0), Point::new(0.1, 0.0), Point::new(0.0, 0.1)];
    let offsets = [Point::new(0.0, 0.0), Point::new(5.0, 0.0), Point::new(0.0, 5.0), Point::new(5.0, 5.0)];
    let nodes: Vec<Point> = offsets.iter().flat_map(|&o| tri.iter().map(move |&p| p + o)).collect();
    let p = plan(&nodes, Point::new(2.5, -1.0), None, 4, 0).unwrap();
    let mut groups: Vec<Vec<usize>> = p
        .routes
        .iter()
        .map(|r| {
            let mut v = r.nodes.clone();
            v.sort_unstable();
            v
        })
        .collect();
    groups.sort();
    assert_eq!(groups, vec![vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8], vec![9, 10, 11]]);
}

#[test]
fn routes_start_and_end_on_antipodal_hull_vertices() {
    for seed in 0..20 {
        let inst = generate(&GeneratorConfig::new(120, seed)).unwrap();
        let p = plan(&inst.nodes, inst.depot, Some(inst.spacing), 5, seed).unwrap();
        for (c, route) in p.routes.iter().enumerate() {
            let members = p.repaired.members(c);
            let mut got = route.nodes.clone();
            got.sort_unstable();
            assert_eq!(got, members);
            let (hull, ids) = cluster_hull(&inst.nodes, &members).unwrap();
            let i = ids.iter().position(|&v| v == route.nodes[0]).expect("start is a hull vertex");
            let j = ids.iter().position(|&v| v == *route.nodes.last().unwrap()).expect("end is a hull vertex");
            assert!(antipodal_pairs(&hull).contains(&AntipodalPair::new(i, j)));
        }
    }
}

#[test]
fn solutions_partition_audit_and_serialize_deterministically() {
    for seed in 0..10 {
        let inst = generate(&GeneratorConfig::new(200, seed)).unwrap();
        let a = hpp_solve(&inst, 5, 3).unwrap();
        let b = hpp_solve(&inst, 5, 3).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        a.check_partition(inst.len()).unwrap();
        assert_eq!(a.routes.len(), 5);
        for r in &a.routes {
            let again = route_length(inst.depot, &inst.nodes, &r.nodes);
            assert!((again - r.length).abs() <= 1e-9 * r.length);
        }
    }
}

#[test]
fn infeasible_route_counts() {
    let inst = generate(&GeneratorConfig::new(12, 1)).unwrap();
    assert!(matches!(hpp_solve(&inst, 5, 0), Err(Error::RepairImpossible(_))));
    assert!(matches!(hpp_solve(&inst, 0, 0), Err(Error::InvalidK { .. })));
    let sol = hpp_solve(&inst, 4, 0).unwrap();
    sol.check_partition(12).unwrap();
}

fn sse(nodes: &[Point], labels: &[usize], k: usize) -> f64 {
    (0..k)
        .map(|c| {
            let m: Vec<Point> = nodes.iter().zip(labels).filter(|(_, &l)| l == c).map(|(p, _)| *p).collect();
            if m.is_empty() {
                return 0.0;
            }
            let g = Point::new(
                m.iter().map(|p| p.x).sum::<f64>() / m.len() as f64,
                m.iter().map(|p| p.y).sum::<f64>() / m.len() as f64,
            );
            m.iter().map(|p| p.dist_sq(g)).sum::<f64>()
        })
        .sum()
}

#[test]
fn kmeans_on_a_four_by_four_grid_reaches_the_brute_force_optimum() {
    let nodes = grid(4, 4);
    let mut best = f64::INFINITY;
    for mask in 0u32..1 << 15 {
        // Node 15 is pinned to cluster 1 to skip mirrored labellings.
        let labels: Vec<usize> = (0..16).map(|i| if i == 15 { 1 } else { (mask >> i & 1) as usize }).collect();
        if labels.iter().all(|&l| l == 1) {
            continue;
        }
        best = best.min(sse(&nodes, &labels, 2));
    }
    let a = kmeans(&nodes, 2, 0).unwrap();
    assert!((sse(&nodes, &a.labels, 2) - best).abs() < 1e-9);
    assert_eq!(a.sizes(), vec![8, 8]);
}

#[test]
fn pre_repair_cluster_hulls_do_not_overlap() {
    let mut rng = TestRng::new(5);
    for seed in 0..20 {
        let nodes = rng.points(150);
        let a = kmeans(&nodes, 5, seed).unwrap();
        let hulls: Vec<Vec<Point>> = a
            .clusters()
            .iter()
            .filter_map(|m| convex_hull(&m.iter().map(|&i| nodes[i]).collect::<Vec<_>>()).ok())
            .map(|h| h.vertices().to_vec())
            .collect();
        for i in 0..hulls.len() {
            for j in i + 1..hulls.len() {
                assert!(intersection_area(&hulls[i], &hulls[j]) < 1e-12);
            }
        }
    }
}

#[test]
fn repaired_clusters_are_valid_on_generated_instances() {
    for seed in 0..30 {
        let inst: FarmInstance = generate(&GeneratorConfig::new(50, seed)).unwrap();
        let p = plan(&inst.nodes, inst.depot, Some(inst.spacing), 5, seed).unwrap();
        for c in 0..5 {
            assert!(is_valid_cluster(&inst.nodes, &p.repaired.members(c)));
        }
    }
}
