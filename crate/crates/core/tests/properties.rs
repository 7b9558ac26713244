use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_complex::Complex64 as C;
use proptest::prelude::*;

use kissing_core::angle::{angle_map, lamination_of, Angle, Lamination};
use kissing_core::geometry::{AntiMobius, Circle, SpherePoint};
use kissing_core::graph::enumerate::{connected, two_connected};
use kissing_core::graph::{glue_along_outer, is_isomorphic, outerplanar_from_chords, unmate};
use kissing_core::group::{KissingGroup, Word};
use kissing_core::mating::{detect_obstruction, ray_classes};
use kissing_core::packing::{solve_packing, verify_contact};
use kissing_core::PlaneGraph;

fn library(n: usize, two: bool) -> &'static [PlaneGraph] {
    static CONNECTED: OnceLock<Vec<Vec<PlaneGraph>>> = OnceLock::new();
    static TWO: OnceLock<Vec<Vec<PlaneGraph>>> = OnceLock::new();
    let cell = if two { &TWO } else { &CONNECTED };
    let all = cell.get_or_init(|| {
        (0..=7)
            .map(|n| {
                if n < 3 {
                    Vec::new()
                } else if two {
                    two_connected(n)
                } else {
                    connected(n)
                }
            })
            .collect()
    });
    &all[n]
}

fn graph(two: bool, max_n: usize) -> impl Strategy<Value = PlaneGraph> {
    (3..=max_n, any::<prop::sample::Index>()).prop_map(move |(n, i)| {
        let list = library(n, two);
        list[i.index(list.len())].clone()
    })
}

/// Random labeled 2-connected outerplanar graph: a random triangulation of
/// the polygon with some diagonals removed.
fn outerplanar(max_n: usize) -> impl Strategy<Value = PlaneGraph> {
    (3..=max_n, any::<u64>()).prop_map(|(n, bits)| {
        let mut chords = Vec::new();
        let mut stack = vec![(0usize, n - 1)];
        let mut k = 0;
        while let Some((a, b)) = stack.pop() {
            if b - a < 2 {
                continue;
            }
            let m = a + 1 + ((bits >> (k % 60)) as usize) % (b - a - 1);
            k += 3;
            for (x, y) in [(a, m), (m, b)] {
                if y - x >= 2 && !(x == 0 && y == n - 1) {
                    chords.push((x, y));
                }
                stack.push((x, y));
            }
        }
        let kept: Vec<_> = chords
            .into_iter()
            .enumerate()
            .filter(|(i, _)| bits.rotate_left(*i as u32 * 7) & 1 == 1)
            .map(|(_, c)| c)
            .collect();
        outerplanar_from_chords(n, &kept).unwrap()
    })
}

fn brute_k_connected(g: &PlaneGraph, k: usize) -> bool {
    let n = g.vertex_count();
    if n <= k {
        return false;
    }
    let adj = g.simple_adjacency();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize != k - 1 {
            continue;
        }
        let start = (0..n).find(|&v| mask >> v & 1 == 0).unwrap();
        let mut seen = vec![false; n];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if mask >> u & 1 == 0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if (0..n).any(|v| mask >> v & 1 == 0 && !seen[v]) {
            return false;
        }
    }
    true
}

fn same_cycle(a: &[usize], b: &[usize]) -> bool {
    let n = a.len();
    if b.len() != n {
        return false;
    }
    let Some(s) = b.iter().position(|&x| x == a[0]) else {
        return false;
    };
    (0..n).all(|i| a[i] == b[(s + i) % n]) || (0..n).all(|i| a[i] == b[(s + n - i) % n])
}

fn circle() -> impl Strategy<Value = Circle<f64>> {
    (-5.0..5.0f64, -5.0..5.0f64, 0.05..4.0f64, any::<bool>()).prop_map(|(x, y, r, flip)| {
        let c = Circle::new(C::new(x, y), r);
        if flip {
            c.reversed()
        } else {
            c
        }
    })
}

fn angle(den: i64) -> impl Strategy<Value = Angle> {
    (0..den).prop_map(move |k| Angle::new(k, den).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn euler_and_double_dual(g in graph(false, 7)) {
        let (v, e, f) = (g.vertex_count() as i64, g.edge_count() as i64, g.face_count() as i64);
        prop_assert_eq!(v - e + f, 2);
        let d = g.planar_dual();
        prop_assert_eq!(d.vertex_count() as i64 - d.edge_count() as i64 + d.face_count() as i64, 2);
        prop_assert!(is_isomorphic(&d.planar_dual(), &g));
    }

    #[test]
    fn connectivity_matches_vertex_removal(g in graph(false, 7)) {
        for k in 1..=3 {
            prop_assert_eq!(g.is_k_connected(k).unwrap(), brute_k_connected(&g, k), "k = {}", k);
        }
    }

    #[test]
    fn outer_face_is_hamiltonian(g in graph(true, 7)) {
        if let Some(f) = g.outerplanar_face() {
            let boundary = g.face_vertices(f);
            let cycles = g.hamiltonian_cycles().unwrap();
            prop_assert!(cycles.iter().any(|c| same_cycle(c, &boundary)));
        }
    }

    #[test]
    fn unmate_then_glue(g in graph(true, 7)) {
        for cycle in g.hamiltonian_cycles().unwrap() {
            let (plus, minus) = unmate(&g, &cycle).unwrap();
            let n = g.vertex_count();
            let glued = glue_along_outer(&plus, &minus, n - 1).unwrap();
            prop_assert!(is_isomorphic(&glued, &g));
        }
    }

    #[test]
    fn reflection_is_an_involution(c in circle(), x in -6.0..6.0f64, y in -6.0..6.0f64) {
        let r = AntiMobius::reflection(&c).unwrap();
        let z = SpherePoint::finite(C::new(x, y));
        // small far circles lose about |c| |z - c| / r^2 ulps on the way back
        prop_assert!(r.apply(r.apply(z)).chordal(z) < 1e-10);
        // the image of another circle is a circle
        let other = Circle::new(C::new(y, x), 1.0);
        let img = r.apply_circle(&other);
        prop_assert!(img.is_line() || img.radius() > 0.0);
    }

    #[test]
    fn reflection_in_f32(x in -3.0..3.0f32, y in -3.0..3.0f32, r in 0.5..2.0f32) {
        let c = Circle::new(num_complex::Complex32::new(x, y), r);
        let refl = AntiMobius::reflection(&c).unwrap();
        let z = SpherePoint::finite(num_complex::Complex32::new(y, x));
        prop_assert!(refl.apply(refl.apply(z)).chordal(z) < 1e-4);
    }

    #[test]
    fn lamination_is_valid(g in outerplanar(9)) {
        let l = lamination_of(&g).unwrap();
        l.validate().unwrap();
        let d = l.degree;
        for leaf in &l.leaves {
            let [a, b] = leaf.angles();
            // principal leaves are 2-cycles: the map swaps the endpoints
            prop_assert_eq!(&angle_map(a, d), b);
            prop_assert_eq!(&angle_map(b, d), a);
        }
        prop_assert_eq!(l.mirror().mirror(), l);
    }

    #[test]
    fn obstruction_is_symmetric(p in outerplanar(7), q in outerplanar(7), k in 0usize..7) {
        prop_assume!(p.vertex_count() == q.vertex_count());
        let lp = lamination_of(&p).unwrap();
        let lq = lamination_of(&q).unwrap().rotate(k as i64);
        let a = detect_obstruction(&lp, &lq).unwrap();
        let b = detect_obstruction(&lq, &lp).unwrap();
        prop_assert_eq!(a.obstructed, b.obstructed);
        if a.obstructed {
            prop_assert!(a.witness.len() == 2 || a.witness.len() == 4, "witness {:?}", a.witness);
        }
        // the closure never leaves the orbits of the principal angles
        let g = ray_classes(&lp, &lq).unwrap();
        let mut orbit: BTreeSet<Angle> = lp.angles().into_iter().chain(lq.mirror().angles()).collect();
        for t in orbit.clone() {
            orbit.insert(angle_map(&t, lp.degree));
        }
        prop_assert!(g.angles.iter().all(|t| orbit.contains(t)));
    }

    #[test]
    fn mirror_is_an_involution(a in angle(24), b in angle(24)) {
        prop_assume!(a != b);
        let l = Lamination { degree: 5, leaves: [kissing_core::Leaf::new(a, b)].into(), singletons: BTreeSet::new() };
        prop_assert_eq!(l.mirror().mirror(), l);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn packing_residual_and_contacts(g in graph(false, 7)) {
        let p = solve_packing(&g, 1e-10).unwrap();
        let report = verify_contact(&p);
        prop_assert!(report.max_residual <= 1e-10);
        prop_assert!(report.spurious.is_empty());
        let group = KissingGroup::new(&p).unwrap();
        for cusp in group.cusp_points() {
            prop_assert!((cusp.trace_abs - 2.0).abs() < 1e-9, "trace {} residual {}", cusp.trace_abs, report.max_residual);
        }
    }

    #[test]
    fn level_counts_and_connectivity(g in graph(false, 6)) {
        let p = solve_packing(&g, 1e-9).unwrap();
        let group = KissingGroup::new(&p).unwrap();
        let n = g.vertex_count();
        for l in 0..=3 {
            prop_assert_eq!(group.level_disks(l, None).unwrap().disks.len(), n * (n - 1).pow(l as u32));
        }
        prop_assert_eq!(group.level_connectivity(4).unwrap(), g.is_k_connected(2).unwrap());
        let mut prev = f64::INFINITY;
        for l in [1, 3, 6] {
            let d = group.max_diameter_at_level(l);
            prop_assert!(d < prev);
            prev = d;
        }
    }

    #[test]
    fn words_nest_in_their_first_disk(g in graph(true, 6), letters in prop::collection::vec(0usize..6, 1..6)) {
        let p = solve_packing(&g, 1e-9).unwrap();
        let group = KissingGroup::new(&p).unwrap();
        let n = g.vertex_count();
        let mut w = Word::empty();
        for j in letters {
            if let Some(next) = w.push(j % n) {
                w = next;
            }
        }
        let i = w.first().unwrap();
        let cycle = g.hamiltonian_cycles().unwrap().into_iter().next();
        let Some(cycle) = cycle else { return Ok(()); };
        for tile in group.interstices(&cycle).unwrap() {
            for arc in &tile.arcs {
                let z = group.apply_point(&w, arc.points[1]).unwrap();
                let v = p.circles[i].value_at(z);
                prop_assert!(v <= 1e-7 * (1.0 + p.circles[i].radius().powi(2)), "value {}", v);
            }
        }
    }

    #[test]
    fn side_tiles_do_not_overlap(g in graph(true, 5)) {
        let p = solve_packing(&g, 1e-9).unwrap();
        let group = KissingGroup::new(&p).unwrap();
        let cycle = g.hamiltonian_cycles().unwrap().into_iter().next();
        let Some(cycle) = cycle else { return Ok(()); };
        for l in 0..=1 {
            let (plus, minus) = group.omega_side_tiles(&cycle, l).unwrap();
            for t in plus.iter().chain(&minus) {
                let Some(poly) = t.polyline() else { continue };
                // points just inside the tile next to each arc midpoint
                for arc in &t.arcs {
                    let Some(m) = arc.points[1].to_finite() else { continue };
                    for z in [m + C::new(1e-4, 0.0), m - C::new(1e-4, 0.0), m + C::new(0.0, 1e-4), m - C::new(0.0, 1e-4)] {
                        if !t.contains(z) {
                            continue;
                        }
                        let others = if t.side > 0 { &minus } else { &plus };
                        prop_assert!(!others.iter().any(|o| o.contains(z)), "{} tiles overlap", poly.len());
                    }
                }
            }
        }
    }
}
