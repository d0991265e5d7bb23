//! Acceptance criteria, one line of output each. Exits nonzero if any
//! criterion fails or exceeds its time bound.

mod common;

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use common::{coverage_oracle, dual_rays_oracle, box_points, in_cone_oracle, in_dual, irreducibles_oracle, minor_gcd};
use toroidal_core::chevalley::SpecialLinear;
use toroidal_core::lattice::{IntVector, Matrix, Rat};
use toroidal_core::polyhedral::{dual_cone, Cone, Fan};
use toroidal_core::root_datum::{CartanType, RootDatum};
use toroidal_core::toric::ChartPoint;
use toroidal_core::verify::{self, Context, PropertyResult};

const SEED: u64 = 42;

type Outcome = Result<String, String>;

fn run(number: usize, title: &str, bound_secs: f64, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = body();
    let secs = start.elapsed().as_secs_f64();
    let in_time = secs < bound_secs;
    let ok = outcome.is_ok() && in_time;
    let detail = match &outcome {
        Ok(s) => s.clone(),
        Err(s) => s.clone(),
    };
    let timing = if in_time {
        format!("{secs:.2}s < {bound_secs}s")
    } else {
        format!("{secs:.2}s exceeds {bound_secs}s")
    };
    println!(
        "criterion {number:>2} {}  {title} [{timing}] {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// The named property must have passed with exactly `cases` in-domain cases
/// (`None` for catalog-driven properties).
fn require(props: &[PropertyResult], name: &str, cases: Option<usize>, label: &str) -> Result<usize, String> {
    let p = props
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| format!("{label}: property {name} missing"))?;
    ensure(p.passed, || {
        format!("{label}: {name} failed after {} cases: {}", p.cases, p.counterexample.clone().unwrap_or(Value::Null))
    })?;
    if let Some(c) = cases {
        ensure(p.cases == c, || format!("{label}: {name} ran {} of {c} cases", p.cases))?;
    }
    Ok(p.cases)
}

fn ctx(rank: usize) -> Context {
    Context::new(rank).expect("supported rank")
}

fn r(x: i64) -> Rat {
    Rat::from_int(x)
}

fn criterion_1() -> Outcome {
    let mut checked = 0;
    for n in 2..=4 {
        let g = SpecialLinear::new(n).map_err(|e| e.to_string())?;
        let table = g.chevalley_signs().map_err(|e| e.to_string())?;
        for i in 0..n - 1 {
            let ni = g.weyl_generator::<Rat>(i);
            let ni_inv = ni.inverse().expect("invertible");
            // s_i permutes the indices i and i+1
            let swap = |a: usize| if a == i { i + 1 } else if a == i + 1 { i } else { a };
            for k in 0..g.root_count() {
                let (a, b) = g.position(k);
                let target = (swap(a), swap(b));
                let eps = table.get(i, k);
                ensure(eps == 1 || eps == -1, || format!("SL_{n}: sign {eps}"))?;
                for x in [1, 2] {
                    let conj = &(&ni * &g.pin(k, r(x))) * &ni_inv;
                    let expect = Matrix::from_fn(n, n, |p, q| {
                        if (p, q) == target {
                            r(eps * x)
                        } else {
                            r(i64::from(p == q))
                        }
                    });
                    ensure(conj == expect, || format!("SL_{n}: n_{} p_{k}({x}) n^-1 = {conj}", i + 1))?;
                    checked += 1;
                }
            }
            for neg in [false, true] {
                let k = g.simple_root_index(i, neg);
                ensure(table.get(i, k) == -1, || format!("SL_{n}: sign of simple root {k} under s_{} is not -1", i + 1))?;
            }
        }
    }
    Ok(format!("{checked} conjugations over SL_2..SL_4"))
}

fn criterion_2() -> Outcome {
    let mut checked = 0;
    for n in 2..=5 {
        let g = SpecialLinear::new(n).map_err(|e| e.to_string())?;
        for i in 0..n - 1 {
            // n_i from its definition, independent of the library helper
            let a = g.simple_root_index(i, false);
            let b = g.simple_root_index(i, true);
            let ni = &(&g.pin(a, r(1)) * &g.pin(b, r(-1))) * &g.pin(a, r(1));
            ensure(ni == g.weyl_generator::<Rat>(i), || format!("SL_{n}: n_{} disagrees", i + 1))?;
            let sq = &ni * &ni;
            ensure((&sq * &sq).is_identity(), || format!("SL_{n}: n_{}^4 != e", i + 1))?;
            ensure(!sq.is_identity(), || format!("SL_{n}: n_{}^2 = e", i + 1))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} generators for n <= 5"))
}

fn criterion_3() -> Outcome {
    for rank in [1, 2] {
        let props = verify::suite_f_i(&ctx(rank), 1000, SEED);
        require(&props, "torus_agreement", Some(1000), &format!("SL_{}", rank + 1))?;
    }
    Ok("1000/1000 in-domain cases for SL_2 and SL_3".into())
}

fn criterion_4() -> Outcome {
    for rank in [1, 2] {
        let props = verify::suite_f_i(&ctx(rank), 100, SEED);
        require(&props, "boundary_formula", Some(100), &format!("SL_{}", rank + 1))?;
    }
    Ok("100/100 cases for SL_2 and SL_3".into())
}

fn criterion_5() -> Outcome {
    let mut boundary = 0;
    for rank in [1, 2] {
        let label = format!("SL_{}", rank + 1);
        let c = ctx(rank);
        let props = verify::suite_theta(&c, 500, SEED);
        require(&props, "direct_agreement", Some(500), &label)?;
        boundary += require(&props, "boundary_identity", None, &label)?;
        require(&props, "anchor_certificate", None, &label)?;
        let eq = verify::suite_theta(&c, 100, SEED + 1);
        require(&eq, "equivariance", Some(100), &label)?;
    }
    Ok(format!("500 direct cases and 100 equivariance cases per group, {boundary} boundary charts"))
}

fn criterion_6() -> Outcome {
    let mut boundary = 0;
    for rank in [1, 2] {
        let label = format!("SL_{}", rank + 1);
        let props = verify::suite_action(&ctx(rank), 500, SEED);
        require(&props, "direct_agreement", Some(500), &label)?;
        boundary += require(&props, "boundary_identity", None, &label)?;
    }
    Ok(format!("500 direct cases per group, {boundary} boundary points"))
}

fn criterion_7() -> Outcome {
    for rank in [1, 2] {
        let label = format!("SL_{}", rank + 1);
        let props = verify::suite_limits(&ctx(rank), 100, SEED);
        for name in ["f_i_commutes", "theta_commutes", "action_commutes"] {
            require(&props, name, Some(100), &label)?;
        }
        require(&props, "limit_points", None, &label)?;
    }
    Ok("100 curves per construction for SL_2 and SL_3".into())
}

fn criterion_8() -> Outcome {
    for rank in [1, 2] {
        let label = format!("SL_{}", rank + 1);
        let props = verify::suite_equivalence(&ctx(rank), 100, SEED);
        require(&props, "witness_consistency", Some(100), &label)?;
        require(&props, "engineered_inequivalence", Some(100), &label)?;
        require(&props, "examples", None, &label)?;
    }
    Ok("100 equivalent and 100 inequivalent pairs, 100 witnesses each, SL_2 and SL_3".into())
}

/// Thirty cones in ranks 1 to 3: hand-picked ones and seeded random ones.
fn cone_catalog() -> Vec<(usize, Vec<IntVector>)> {
    let fixed: Vec<(usize, Vec<IntVector>)> = vec![
        (1, vec![vec![1]]),
        (1, vec![vec![-1]]),
        (1, vec![]),
        (2, vec![vec![1, 0], vec![1, 2]]),
        (2, vec![vec![1, 0], vec![0, 1]]),
        (2, vec![vec![1, 0], vec![1, 5]]),
        (2, vec![vec![2, -1], vec![1, 3]]),
        (2, vec![vec![-1, -1], vec![-3, -5]]),
        (2, vec![vec![-2, -1], vec![-1, -2]]),
        (2, vec![vec![-2, -1], vec![-3, -2]]),
        (2, vec![vec![1, 2]]),
        (2, vec![]),
        (3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        (3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 2]]),
        (3, vec![vec![1, 0, 1], vec![0, 1, 1], vec![-1, 0, 1], vec![0, -1, 1]]),
        (3, vec![vec![-3, -2, -1], vec![-1, -2, -1], vec![-1, -2, -3]]),
        (3, vec![vec![1, 0, 0], vec![0, 1, 0]]),
        (3, vec![vec![1, 1, 1]]),
    ];
    let mut out = fixed;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    while out.len() < 30 {
        let dim = if out.len() % 2 == 0 { 2 } else { 3 };
        let count = rng.random_range(dim..=dim + 1);
        let rays: Vec<IntVector> = (0..count)
            .map(|_| (0..dim).map(|_| rng.random_range(-3i64..=3)).collect())
            .collect();
        if let Ok(c) = Cone::new(dim, &rays) {
            if c.cone_dim() == dim && !out.iter().any(|(_, rs)| rs == c.rays()) {
                out.push((dim, c.rays().to_vec()));
            }
        }
    }
    out
}

fn fan_catalog() -> Vec<(String, RootDatum, Fan)> {
    let mut out = Vec::new();
    let chamber_fan = |kind: CartanType, rank: usize, pick: &dyn Fn(&Cone) -> bool, name: &str| {
        let rd = RootDatum::named(kind, rank).expect("datum");
        let chamber = Cone::new(rank, &rd.negative_chamber_rays()).expect("chamber");
        let cones: Vec<Cone> = chamber.faces().into_iter().filter(|f| pick(f)).collect();
        (name.to_string(), rd, Fan::from_cones(rank, cones))
    };
    out.push(chamber_fan(CartanType::A, 1, &|_| true, "A1 half line"));
    out.push(chamber_fan(CartanType::A, 1, &|f| f.is_zero(), "A1 origin"));
    out.push(chamber_fan(CartanType::A, 2, &|_| true, "A2 chamber"));
    out.push(chamber_fan(CartanType::A, 2, &|f| f.cone_dim() < 2, "A2 walls"));
    out.push(chamber_fan(CartanType::A, 2, &|f| f.cone_dim() == 1 && f.rays()[0] == vec![-2, -1], "A2 one wall"));
    out.push(chamber_fan(CartanType::B, 2, &|_| true, "B2 chamber"));
    out.push(chamber_fan(CartanType::G, 2, &|f| f.cone_dim() < 2, "G2 walls"));
    out.push(chamber_fan(CartanType::A, 3, &|_| true, "A3 chamber"));
    out.push(chamber_fan(CartanType::A, 3, &|f| f.cone_dim() < 3, "A3 walls"));
    let rd = RootDatum::named(CartanType::A, 2).expect("datum");
    let split = vec![
        Cone::new(2, &[vec![-2, -1], vec![-1, -1]]).expect("cone"),
        Cone::new(2, &[vec![-1, -1], vec![-1, -2]]).expect("cone"),
    ];
    out.push(("A2 subdivided chamber".into(), rd, Fan::from_cones(2, split)));
    out
}

fn criterion_9() -> Outcome {
    let catalog = cone_catalog();
    let mut hilbert_compared = 0;
    for (dim, rays) in &catalog {
        let c = Cone::new(*dim, rays).map_err(|e| format!("{rays:?}: {e}"))?;
        let h = c.hilbert();
        // double duality against the Carathéodory oracle
        let dual = dual_cone(*dim, rays);
        for m in &dual {
            ensure(in_dual(rays, m), || format!("{rays:?}: dual generator {m:?} not in dual"))?;
        }
        let mut back = dual_cone(*dim, &dual);
        back.sort();
        ensure(back == c.rays(), || format!("{rays:?}: double dual {back:?}"))?;
        for ray in c.rays() {
            ensure(in_cone_oracle(rays, ray), || format!("{rays:?}: ray {ray:?} outside"))?;
        }
        // smoothness against the gcd of maximal minors
        let g = minor_gcd(c.rays(), *dim);
        ensure(c.is_smooth() == (g == 1), || format!("{rays:?}: is_smooth {} but minor gcd {g}", c.is_smooth()))?;
        if g != 0 {
            ensure(c.lattice_index() as i128 == g, || format!("{rays:?}: index {} vs {g}", c.lattice_index()))?;
        }
        // Hilbert basis
        for m in h.elements() {
            ensure(in_dual(rays, m), || format!("{rays:?}: Hilbert element {m:?} not in dual"))?;
        }
        if c.cone_dim() == *dim {
            let oracle_rays = dual_rays_oracle(c.rays(), *dim);
            let mut lib_rays = c.dual_generators();
            lib_rays.sort();
            ensure(lib_rays == oracle_rays, || format!("{rays:?}: dual {lib_rays:?} vs {oracle_rays:?}"))?;
            let expect = irreducibles_oracle(rays, &oracle_rays, *dim);
            let mut got = h.elements().to_vec();
            got.sort();
            ensure(got == expect, || format!("{rays:?}: Hilbert {got:?} vs enumeration {expect:?}"))?;
            hilbert_compared += 1;
        } else {
            // nonpointed dual: every small lattice point of σ∨ decomposes
            for m in box_points(*dim, 4) {
                match c.monoid_decompose(&m) {
                    Ok(coeffs) => {
                        let mut sum = vec![0i64; *dim];
                        for (k, e) in h.elements().iter().enumerate() {
                            for (s, x) in sum.iter_mut().zip(e) {
                                *s += coeffs[k] as i64 * x;
                            }
                        }
                        ensure(sum == m && in_dual(rays, &m), || format!("{rays:?}: bad decomposition of {m:?}"))?;
                    }
                    Err(_) => ensure(!in_dual(rays, &m), || format!("{rays:?}: {m:?} not decomposed"))?,
                }
            }
        }
    }

    let fans = fan_catalog();
    let mut verdicts = Vec::new();
    for (name, rd, fan) in &fans {
        fan.validate().map_err(|v| format!("{name}: {v}"))?;
        ensure(fan.supported_in_chamber(rd), || format!("{name}: not in chamber"))?;
        let w = rd.weyl_group().map_err(|e| e.to_string())?;
        let orbit = fan.weyl_orbit(&w).map_err(|e| format!("{name}: {e}"))?;
        let proper = fan.is_proper(&w).map_err(|e| e.to_string())?;
        let covered = coverage_oracle(&orbit, 100_000, SEED);
        ensure(proper == covered, || format!("{name}: is_proper {proper}, coverage {covered}"))?;
        verdicts.push(format!("{name}={proper}"));
    }
    let expect_a = [("A1 half line", true), ("A1 origin", false), ("A2 chamber", true), ("A2 walls", false)];
    for (name, want) in expect_a {
        ensure(verdicts.contains(&format!("{name}={want}")), || format!("{name}: expected proper={want}"))?;
    }
    Ok(format!(
        "{} cones ({hilbert_compared} Hilbert bases enumerated), {} fans at 100000 points",
        catalog.len(),
        fans.len()
    ))
}

fn criterion_10() -> Outcome {
    let mut chains = 0;
    for rank in 1..=3 {
        let props = verify::suite_functoriality(&ctx(rank), SEED);
        chains += require(&props, "inclusion_chains", None, &format!("rank {rank}"))?;
        require(&props, "gluing_invariants", None, &format!("rank {rank}"))?;
    }
    // chains and witnesses on the polyhedral catalog
    let t = [r(2), r(-3), Rat::new(5, 7)];
    for (dim, rays) in cone_catalog() {
        let c = Arc::new(Cone::new(dim, &rays).map_err(|e| e.to_string())?);
        let faces: Vec<Arc<Cone>> = c.faces().into_iter().map(Arc::new).collect();
        for a in &faces {
            for b in faces.iter().filter(|b| b.is_face(a)) {
                let p = ChartPoint::torus_point(a.clone(), &t[..dim]).map_err(|e| e.to_string())?;
                let two = p.chart_inclusion(b.clone()).and_then(|q| q.chart_inclusion(c.clone()));
                let one = p.chart_inclusion(c.clone());
                ensure(matches!((&two, &one), (Ok(x), Ok(y)) if x == y), || {
                    format!("{rays:?}: inclusion via {:?} differs", b.rays())
                })?;
                chains += 1;
            }
            let u = c.face_witness(a).ok_or_else(|| format!("{rays:?}: no witness for {:?}", a.rays()))?;
            ensure(in_dual(c.rays(), &u), || format!("{rays:?}: witness {u:?} not in dual"))?;
            for ray in c.rays() {
                let zero = ray.iter().zip(&u).map(|(x, y)| x * y).sum::<i64>() == 0;
                ensure(zero == a.rays().contains(ray), || format!("{rays:?}: witness {u:?} cuts wrong face"))?;
            }
        }
        // a non-face never has a witness
        if c.rays().len() >= 2 && c.cone_dim() == dim {
            let sum: IntVector = (0..dim).map(|i| c.rays().iter().map(|v| v[i]).sum()).collect();
            let inner = Cone::new(dim, &[sum]).map_err(|e| e.to_string())?;
            ensure(c.face_witness(&inner).is_none(), || format!("{rays:?}: interior ray has a witness"))?;
        }
    }
    Ok(format!("{chains} face chains"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

struct Run {
    code: i32,
    stdout: Vec<u8>,
    stderr: Vec<u8>,
    report: Option<Vec<u8>>,
}

fn invoke(args: &[String], out: &Path) -> Run {
    let mut full: Vec<String> = args.to_vec();
    if !args.is_empty() {
        full.push("--out".into());
        full.push(out.display().to_string());
    }
    let _ = std::fs::remove_file(out);
    let o = Command::new(env!("CARGO_BIN_EXE_toroidal"))
        .args(&full)
        .current_dir(fixtures())
        .output()
        .expect("binary runs");
    Run {
        code: o.status.code().unwrap_or(-1),
        stdout: o.stdout,
        stderr: o.stderr,
        report: std::fs::read(out).ok(),
    }
}

fn criterion_11() -> Outcome {
    let cases: Value = serde_json::from_str(
        &std::fs::read_to_string(fixtures().join("cases.json")).map_err(|e| e.to_string())?,
    )
    .map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut count = 0;
    for case in cases.as_array().ok_or("cases.json is not a list")? {
        let name = case["name"].as_str().ok_or("case without name")?;
        let args: Vec<String> = case["args"]
            .as_array()
            .ok_or("case without args")?
            .iter()
            .map(|a| a.as_str().unwrap_or_default().to_string())
            .collect();
        let want = case["exit"].as_i64().ok_or("case without exit")? as i32;
        let first = invoke(&args, &dir.path().join(format!("{name}.1.json")));
        let second = invoke(&args, &dir.path().join(format!("{name}.2.json")));
        ensure(first.code == want, || {
            format!("{name}: exit {} (want {want}): {}", first.code, String::from_utf8_lossy(&first.stderr))
        })?;
        ensure(
            first.code == second.code
                && first.stdout == second.stdout
                && first.stderr == second.stderr
                && first.report == second.report,
            || format!("{name}: reruns differ"),
        )?;
        ensure(want != 0 || first.report.is_some() || !first.stdout.is_empty(), || {
            format!("{name}: no report written")
        })?;
        count += 1;
    }

    // spot checks of report contents
    let report = |args: &[&str]| -> Result<Value, String> {
        let args: Vec<String> = args.iter().map(|s| s.to_string()).collect();
        let run = invoke(&args, &dir.path().join("spot.json"));
        serde_json::from_slice(&run.report.ok_or("no report")?).map_err(|e| e.to_string())
    };
    let a1 = report(&["analyze", "--root-datum", "root_data/a1.json", "--fan", "fans/a1_half_line.json"])?;
    ensure(
        a1["valid"] == true
            && a1["supported_in_chamber"] == true
            && a1["smooth"] == true
            && a1["proper"] == true
            && a1["chart_count"] == 2,
        || format!("A1 report: {a1}"),
    )?;
    let a2 = report(&["analyze", "--root-datum", "root_data/a2.json", "--fan", "fans/a2_index_two.json"])?;
    let top = a2["cones"]
        .as_array()
        .and_then(|cs| cs.iter().find(|c| c["rays"].as_array().is_some_and(|r| r.len() == 2)))
        .ok_or("A2 report without top cone")?;
    ensure(a2["smooth"] == false && top["index"] == 2, || format!("A2 report: {a2}"))?;
    let h = report(&["hilbert", "--rays", "[[1,0],[1,2]]"])?;
    let sorted = |v: &Value| -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = serde_json::from_value(v.clone()).unwrap_or_default();
        out.sort();
        out
    };
    ensure(
        sorted(&h["dual"]) == vec![vec![0, 1], vec![2, -1]]
            && sorted(&h["hilbert_basis"]) == vec![vec![0, 1], vec![1, 0], vec![2, -1]],
        || format!("hilbert report: {h}"),
    )?;
    let signs = report(&["verify", "--suite", "signs", "--rank", "3"])?;
    ensure(signs["passed"] == true, || format!("signs report: {signs}"))?;
    Ok(format!("{count} fixture cases, each run twice"))
}

fn main() {
    let results = [
        run(1, "Chevalley signs", 5.0, criterion_1),
        run(2, "Weyl relations", 1.0, criterion_2),
        run(3, "f_i torus agreement", 30.0, criterion_3),
        run(4, "f_i boundary formula", 5.0, criterion_4),
        run(5, "Theta reconstruction", 60.0, criterion_5),
        run(6, "A_sigma reconstruction", 60.0, criterion_6),
        run(7, "limit commutation", 60.0, criterion_7),
        run(8, "equivalence tester soundness", 120.0, criterion_8),
        run(9, "polyhedral oracle equivalence", 60.0, criterion_9),
        run(10, "functoriality", 10.0, criterion_10),
        run(11, "CLI determinism and exit codes", 10.0, criterion_11),
    ];
    let passed = results.iter().filter(|&&ok| ok).count();
    println!("{passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
