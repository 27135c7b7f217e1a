//! Acceptance gate: runs every criterion and prints one PASS/FAIL line each.

mod common;

use std::collections::HashSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;

use rand::seq::SliceRandom;
use rand::Rng;

use shapesig::fixtures::{self, CONGRUENT_CYCLES};
use shapesig::geometry::uniform_arcs;
use shapesig::homology::BoundarySpace;
use shapesig::nerve::ground_set;
use shapesig::proximity::{describe, Described};
use shapesig::signature::distance_terms;
use shapesig::{
    build_signature, conjecture_report, descriptive_intersection, descriptive_nerve, dnear, gf2_rank, h1_basis,
    homology_nerve, in_boundary_span, leader_cover, spatial_intersection, strongly_near, Arc, Chain,
    Complex, Cycle, DistanceWeights, Element, FeatureVector, PhiConfig, ProximityConfig, SignatureConfig,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

const BIN: &str = env!("CARGO_BIN_EXE_shapesig");

fn fixture_path(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn run_cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn cycle(k: &Complex, t: &[u32]) -> Cycle {
    Cycle::from_traversal(k, t).expect("fixture cycle")
}

fn c1_fig2_ranks() -> Outcome {
    let (code, out) = run_cli(&["betti", &fixture_path("fig2.cplx")]);
    ensure!(code == 0, "betti exited with {code}");
    ensure!(out == "b0=1 b1=1 rZ1=5 rB1=4\n", "betti printed {out:?}");
    let k = fixtures::fig2();
    let h = h1_basis(&k);
    ensure!(h.rank_h1 == h.rank_z1 - h.rank_b1, "rank identity");
    ensure!(h.h1_representatives.len() == 1, "one representative");
    let hole = k.edge_chain(&[(3, 4), (4, 6), (3, 6)]).unwrap();
    let rep = h.h1_representatives[0].edges();
    ensure!(in_boundary_span(&k, &rep.add(&hole)), "representative is not homologous to e3+e6+e7");
    ensure!(!in_boundary_span(&k, rep), "representative bounds");
    Ok(format!("b0=1 b1=1 rZ1=5 rB1=4; rep {:?} ~ hole", h.h1_representatives[0].traversal().unwrap()))
}

fn mask_chain(k: &Complex, mask: u32) -> Chain {
    Chain::from_indices(k, 1, (0..k.num_edges()).filter(|&e| mask >> e & 1 == 1))
}

/// Brute force over all `2^E` edge sets.
fn brute_force(k: &Complex) -> Result<(), String> {
    let (nv, ne) = (k.num_vertices(), k.num_edges());
    let ends: Vec<u32> = (0..ne)
        .map(|e| {
            let [a, b] = k.edge_ends(e);
            (1 << a) | (1 << b)
        })
        .collect();
    let tri: Vec<u32> = (0..k.num_triangles())
        .map(|t| k.triangle_edges(t).iter().fold(0, |m, &e| m | 1 << e))
        .collect();
    let mut cycles = Vec::new();
    for mask in 0u32..1 << ne {
        let bd = (0..ne).filter(|&e| mask >> e & 1 == 1).fold(0, |b, e| b ^ ends[e]);
        if bd == 0 {
            cycles.push(mask);
        }
    }
    let mut bounds: HashSet<u32> = HashSet::from([0]);
    for &t in &tri {
        let shifted: Vec<u32> = bounds.iter().map(|b| b ^ t).collect();
        bounds.extend(shifted);
    }
    let log2 = |n: usize| n.trailing_zeros() as usize;
    let (z, b) = (log2(cycles.len()), log2(bounds.len()));
    let h = h1_basis(k);
    ensure!(h.rank_z1 == z && h.rank_b1 == b && h.rank_h1 == z - b, "ranks {}/{}/{} vs oracle {z}/{b}", h.rank_z1, h.rank_b1, h.rank_h1);
    let d2 = gf2_rank(&k.boundary_matrix(2).unwrap());
    ensure!(h.rank_h1 + d2 + nv == ne + h.betti0, "E - V + b0 - rank d2 formula");
    let space = BoundarySpace::new(k);
    for &m in &cycles {
        ensure!(space.contains(&mask_chain(k, m)) == bounds.contains(&m), "membership of {m:#b}");
    }
    let mask_of = |c: &Chain| c.support().into_iter().fold(0u32, |m, e| m | 1 << e);
    let zset: HashSet<u32> = cycles.iter().copied().collect();
    for c in &h.z1_basis {
        ensure!(zset.contains(&mask_of(c)), "basis chain is not a cycle");
    }
    for r in &h.h1_representatives {
        let m = mask_of(r.edges());
        ensure!(zset.contains(&m) && !bounds.contains(&m), "representative {m:#b} is trivial or not a cycle");
    }
    Ok(())
}

fn c2_random_oracle() -> Outcome {
    let mut rng = common::rng(2);
    let mut with_h1 = 0;
    for i in 0..200 {
        let k = common::random_complex(&mut rng);
        brute_force(&k).map_err(|e| format!("complex {i}: {e}"))?;
        with_h1 += usize::from(h1_basis(&k).rank_h1 > 0);
    }
    Ok(format!("200 complexes, {with_h1} with nontrivial H1"))
}

fn d1_d2_zero(k: &Complex) -> bool {
    let (d1, d2) = (k.boundary_matrix(1).unwrap(), k.boundary_matrix(2).unwrap());
    d1.mul(&d2).is_zero()
}

fn c3_boundary_of_boundary() -> Outcome {
    let mut n = 0;
    for k in [fixtures::tri(), fixtures::fig2(), fixtures::fig3(), fixtures::twohole(), fixtures::congruent()] {
        ensure!(d1_d2_zero(&k), "fixture fails");
        n += 1;
    }
    let mut rng = common::rng(3);
    for _ in 0..200 {
        ensure!(d1_d2_zero(&common::random_complex(&mut rng)), "random complex fails");
        n += 1;
    }
    for _ in 0..50 {
        ensure!(d1_d2_zero(&common::random_shape(&mut rng)), "triangulated polygon fails");
        n += 1;
    }
    Ok(format!("{n} complexes"))
}

fn random_set(rng: &mut rand::rngs::StdRng, tag: usize) -> Vec<Described<(usize, usize)>> {
    let n = rng.gen_range(0..4);
    (0..n)
        .map(|i| {
            let fv = FeatureVector::new()
                .with("a", rng.gen_range(0..3) as f64 * 0.05)
                .with("b", rng.gen_range(0..3) as f64 * 0.05);
            Described::new((tag, i), fv)
        })
        .collect()
}

fn union<T: Clone>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().chain(b).cloned().collect()
}

fn arcs_with_edges(k: &Complex, c: &Cycle) -> Vec<Element> {
    let t = c.traversal().unwrap();
    let mut out: Vec<Element> = uniform_arcs(k, c, 0.05).unwrap().into_iter().map(Element::Arc).collect();
    for i in 0..t.len() {
        out.push(Element::Arc(Arc::new(k, vec![t[i], t[(i + 1) % t.len()]]).unwrap()));
    }
    out.push(Element::Cycle(c.clone()));
    out
}

fn c4_proximity_axioms() -> Outcome {
    let mut rng = common::rng(4);
    let mut lodato_live = 0;
    for round in 0..500 {
        let (a, b, c) = (random_set(&mut rng, 0), random_set(&mut rng, 1), random_set(&mut rng, 2));
        let empty: Vec<Described<(usize, usize)>> = vec![];
        for eps in [0.0, 0.1] {
            ensure!(!dnear(&empty, &a, eps) && !dnear(&a, &empty, eps), "dP0 fails in round {round}");
            ensure!(dnear(&a, &b, eps) == dnear(&b, &a, eps), "dP1 fails in round {round}");
            ensure!(
                dnear(&a, &b, eps) == !descriptive_intersection(&a, &b, eps).is_empty(),
                "dP2 fails in round {round}"
            );
            ensure!(
                dnear(&a, &union(&b, &c), eps) == (dnear(&a, &b, eps) || dnear(&a, &c, eps)),
                "dP3 fails in round {round}"
            );
        }
        // C gets a copy of every description in B plus noise, so the premise
        // holds whenever A is near B
        let mut c_live = c.clone();
        c_live.extend(b.iter().enumerate().map(|(i, x)| Described::new((3, i), x.description.clone())));
        for c in [&c, &c_live] {
            let premise = dnear(&a, &b, 0.0) && b.iter().all(|x| dnear(std::slice::from_ref(x), c, 0.0));
            if premise {
                lodato_live += 1;
                ensure!(dnear(&a, c, 0.0), "dP4 fails in round {round}");
            }
        }
    }
    let cfg = PhiConfig::default();
    for i in 0..200 {
        let (n, m) = (rng.gen_range(2..=5), rng.gen_range(2..=5));
        let grid = common::Grid::new(&mut rng, n, m);
        let k = &grid.complex;
        let (p, q) = grid.strongly_near_pair(&mut rng);
        ensure!(strongly_near(&p, &q) && strongly_near(&q, &p), "pair {i} is not strongly near");
        ensure!(!spatial_intersection(&p, &q).is_empty(), "pair {i} has empty intersection");
        let (dp, dq) = (
            describe(k, arcs_with_edges(k, &p), &cfg).unwrap(),
            describe(k, arcs_with_edges(k, &q), &cfg).unwrap(),
        );
        ensure!(dnear(&dp, &dq, 0.0), "pair {i}: shared edge gives no descriptive nearness");
    }
    Ok(format!("500 rounds (dP4 premise live in {lodato_live}), 200 strongly near pairs"))
}

fn c5_nuclei() -> Outcome {
    let cfg = ProximityConfig::default();
    let mut checked = 0;
    for k in [fixtures::tri(), fixtures::fig2(), fixtures::fig3(), fixtures::twohole(), fixtures::congruent()] {
        let cycles: Vec<Cycle> = ground_set(&k, &h1_basis(&k)).into_iter().map(|g| g.cycle).collect();
        for i in 0..cycles.len() {
            let n = descriptive_nerve(i, &cycles, &k, &cfg).map_err(|e| e.to_string())?;
            ensure!(n.members.contains(&i), "cycle {i} missing from its own nerve");
            checked += 1;
        }
    }
    let k = fixtures::congruent();
    let cycles: Vec<Cycle> = CONGRUENT_CYCLES.iter().map(|t| cycle(&k, t)).collect();
    let b = descriptive_nerve(1, &cycles, &k, &cfg).map_err(|e| e.to_string())?;
    ensure!(b.members == vec![1, 2, 3], "nucleus B gives {:?}", b.members);
    let cover = leader_cover(&cycles, &k, &cfg).map_err(|e| e.to_string())?;
    ensure!(
        cover.clusters[1].members == cover.clusters[2].members && cover.clusters[2].members == cover.clusters[3].members,
        "clusters of B, C, D differ"
    );
    ensure!(cover.covers(cycles.len()), "cover misses a cycle");
    Ok(format!("{checked} nuclei reflexive; B -> {{B, C, D}}"))
}

fn c6_shared_arc_nerve() -> Outcome {
    let k = fixtures::fig3();
    let cs = vec![cycle(&k, &[1, 2, 3, 6, 4, 5]), cycle(&k, &[3, 7, 8, 9, 4, 6])];
    let n = homology_nerve(&cs).map_err(|e| e.to_string())?;
    ensure!(n.maximal_faces() == [vec![0, 1]], "maximal faces {:?}", n.maximal_faces());
    ensure!(n.max_face_size() == 2, "max face size");
    Ok("maximal face {A, B}".into())
}

fn c7_triangulation() -> Outcome {
    let mut rng = common::rng(7);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let holes = i % 4;
        let (poly, area) = common::random_polygon(&mut rng, holes);
        let k = shapesig::io::triangulate_polygon(&poly).map_err(|e| format!("polygon {i}: {e}"))?;
        let h = h1_basis(&k);
        ensure!(h.rank_h1 == holes && h.betti0 == 1, "polygon {i}: b1 = {} for {holes} holes", h.rank_h1);
        let covered: f64 = k
            .triangles()
            .iter()
            .map(|t| {
                let p = |id| k.point(k.vertex_index(id).unwrap());
                let (a, b, c) = (p(t.corners[0]), p(t.corners[1]), p(t.corners[2]));
                ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).abs() / 2.0
            })
            .sum();
        worst = worst.max((covered - area).abs());
        ensure!((covered - area).abs() <= 1e-9, "polygon {i}: area {covered} vs {area}");
    }
    Ok(format!("50 polygons, max area error {worst:.1e}"))
}

fn c8_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("sig.json");
    let out_s = out.to_str().unwrap();
    let signature_of = |input: &str| -> Result<Vec<u8>, String> {
        let (code, _) = run_cli(&["signature", input, "-o", out_s]);
        ensure!(code == 0, "signature exited with {code}");
        std::fs::read(&out).map_err(|e| e.to_string())
    };
    let reference = signature_of(&fixture_path("fig2.cplx"))?;
    for _ in 0..9 {
        ensure!(signature_of(&fixture_path("fig2.cplx"))? == reference, "repeat run differs");
    }
    let mut rng = common::rng(8);
    let mut lines: Vec<String> = fixtures::FIG2.lines().map(str::to_owned).collect();
    for i in 0..5 {
        lines.shuffle(&mut rng);
        let path = dir.path().join(format!("perm{i}.cplx"));
        std::fs::write(&path, lines.join("\n")).unwrap();
        ensure!(signature_of(path.to_str().unwrap())? == reference, "permutation {i} differs");
    }
    let k = fixtures::fig2();
    let cfg = SignatureConfig::default();
    let base = build_signature(&k, &cfg).unwrap();
    ensure!(base.to_json().as_bytes() == reference.as_slice(), "library and CLI disagree");
    for (theta, dx, dy) in [(0.0, 3.25, -7.5), (std::f64::consts::FRAC_PI_2, 0.0, 0.0), (0.7, 1.0, 2.0), (2.5, -4.0, 0.5)] {
        let moved = build_signature(&common::rigid(&k, theta, dx, dy), &cfg).unwrap();
        ensure!(moved == base, "rigid motion ({theta}, {dx}, {dy}) changes the signature");
    }
    Ok("10 runs, 5 permutations, 4 rigid motions identical".into())
}

fn c9_conjecture_witness() -> Outcome {
    let k = fixtures::fig2();
    let r = conjecture_report(&k, &ProximityConfig::default()).map_err(|e| e.to_string())?;
    let w = r.nerve_meets_hole.ok_or("no witness")?;
    ensure!(w.shared_edges.contains(&3), "witness shares edges {:?}", w.shared_edges);
    ensure!(w.members.len() >= 2, "witness is a single cycle");
    Ok(format!("nerve {:?} meets the hole on e3", w.members))
}

fn c10_metric() -> Outcome {
    let mut rng = common::rng(10);
    let cfg = SignatureConfig::default();
    let w = DistanceWeights::default();
    for i in 0..100 {
        let a = build_signature(&common::random_shape(&mut rng), &cfg).map_err(|e| e.to_string())?;
        let b = build_signature(&common::random_shape(&mut rng), &cfg).map_err(|e| e.to_string())?;
        let d = |x, y| distance_terms(x, y, &w).map(|t| t.total()).map_err(|e| e.to_string());
        ensure!(d(&a, &a)? == 0.0 && d(&b, &b)? == 0.0, "pair {i}: self distance is not 0");
        let (ab, ba) = (d(&a, &b)?, d(&b, &a)?);
        ensure!(ab == ba, "pair {i}: {ab} != {ba}");
        ensure!(ab >= 0.0, "pair {i}: negative distance");
    }
    Ok("100 pairs".into())
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("FIG2 Betti numbers and hole class", c1_fig2_ranks),
        ("random complexes against 2^E brute force", c2_random_oracle),
        ("boundary of boundary vanishes", c3_boundary_of_boundary),
        ("proximity axioms and shared-edge nearness", c4_proximity_axioms),
        ("nuclei and the congruent cluster", c5_nuclei),
        ("shared arc gives a 2-face", c6_shared_arc_nerve),
        ("triangulated polygons: b1 and area", c7_triangulation),
        ("signature determinism", c8_determinism),
        ("FIG2 nerve meets the hole", c9_conjecture_witness),
        ("signature metric", c10_metric),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
