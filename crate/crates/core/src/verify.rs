//! Seeded verification suites comparing the boundary constructions against
//! independent oracles (matrix conjugation, group multiplication, big cell
//! factorization, specialization of `ℚ(ε)` curves).

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bigcell::{lift, matrix_json, Calculus, CalculusError, Equivalence, MixedPoint};
use crate::chevalley::SpecialLinear;
use crate::lattice::{dot, Field, IntVector, Matrix, Rat, RatFun};
use crate::polyhedral::{Cone, Fan};
use crate::toric::ChartPoint;

pub const SUITES: [&str; 8] = [
    "signs",
    "f_i",
    "theta",
    "action",
    "equivalence",
    "functoriality",
    "limits",
    "all",
];

/// Largest root datum rank accepted by `run`.
pub const MAX_RANK: usize = 4;

/// Anchor search budget used by the suites.
const ANCHOR_BUDGET: usize = 16;

/// Word length of the random group elements in the equivalence suite. The
/// representatives compose three such elements, so entry growth matters.
const EQUIV_STEPS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}")]
    UnknownSuite(String),
    #[error("rank must be in 1..={MAX_RANK}, got {0}")]
    BadRank(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyResult {
    pub name: String,
    /// Cases in which the property was evaluated.
    pub cases: usize,
    /// Sampled inputs outside the domain of the construction.
    pub skipped: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub rank: usize,
    pub seed: u64,
    pub cases: usize,
    pub properties: Vec<PropertyResult>,
    pub passed: bool,
}

impl VerificationReport {
    pub fn property(&self, name: &str) -> Option<&PropertyResult> {
        self.properties.iter().find(|p| p.name == name)
    }
}

enum Case {
    Pass,
    Skip,
    Fail(Value),
}

/// Runs `body` until `target` cases pass or fail, allowing up to
/// `20·target + 100` draws in total.
fn sampled(name: &str, target: usize, mut body: impl FnMut(usize) -> Case) -> PropertyResult {
    let mut cases = 0;
    let mut skipped = 0;
    let limit = 20 * target + 100;
    let mut draw = 0;
    while cases < target && draw < limit {
        match body(draw) {
            Case::Pass => cases += 1,
            Case::Skip => skipped += 1,
            Case::Fail(ce) => {
                return PropertyResult {
                    name: name.into(),
                    cases: cases + 1,
                    skipped,
                    passed: false,
                    counterexample: Some(ce),
                }
            }
        }
        draw += 1;
    }
    PropertyResult {
        name: name.into(),
        cases,
        skipped,
        passed: cases == target,
        counterexample: (cases < target)
            .then(|| json!({"reason": "too few in-domain samples"})),
    }
}

/// Runs `body` over every item of a fixed catalog.
fn exhaustive<T>(name: &str, items: &[T], mut body: impl FnMut(&T) -> Case) -> PropertyResult {
    let mut cases = 0;
    let mut skipped = 0;
    for it in items {
        match body(it) {
            Case::Pass => cases += 1,
            Case::Skip => skipped += 1,
            Case::Fail(ce) => {
                return PropertyResult {
                    name: name.into(),
                    cases: cases + 1,
                    skipped,
                    passed: false,
                    counterexample: Some(ce),
                }
            }
        }
    }
    PropertyResult {
        name: name.into(),
        cases,
        skipped,
        passed: cases > 0,
        counterexample: None,
    }
}

fn check(ok: bool, ce: impl FnOnce() -> Value) -> Case {
    if ok {
        Case::Pass
    } else {
        Case::Fail(ce())
    }
}

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn vec_json<F: Field>(v: &[F]) -> Value {
    Value::from(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

/// Shared fixtures for one rank.
pub struct Context {
    pub calc: Calculus,
    pub chamber: Arc<Cone>,
    /// Faces of the negative chamber, smallest first.
    pub faces: Vec<Arc<Cone>>,
}

impl Context {
    pub fn new(rank: usize) -> Result<Self, VerifyError> {
        if !(1..=MAX_RANK).contains(&rank) {
            return Err(VerifyError::BadRank(rank));
        }
        let calc = Calculus::new(rank + 1).expect("type A of supported rank");
        let rays = calc.group().root_datum().negative_chamber_rays();
        let chamber = Arc::new(Cone::new(rank, &rays).expect("chamber is strongly convex"));
        let faces = chamber
            .faces()
            .into_iter()
            .map(|f| Arc::new(Cone::new(rank, f.rays()).expect("face")))
            .collect();
        Ok(Context {
            calc,
            chamber,
            faces,
        })
    }

    fn group(&self) -> &SpecialLinear {
        self.calc.group()
    }

    pub fn rank(&self) -> usize {
        self.group().rank()
    }

    fn random_torus_point(&self, rng: &mut ChaCha8Rng) -> MixedPoint<Rat> {
        let t = self.group().random_torus(rng);
        MixedPoint {
            u_minus: self.group().random_unipotent(rng, false),
            chart: ChartPoint::torus_point(self.chamber.clone(), &t).expect("nonzero torus"),
            u_plus: self.group().random_unipotent(rng, true),
        }
    }

    /// Fixed nonidentity torus coordinates `(2, −1/3, 5, −3/7)` truncated.
    fn fixed_torus(&self) -> Vec<Rat> {
        ["2", "-1/3", "5", "-3/7"][..self.rank()]
            .iter()
            .map(|s| s.parse().expect("literal"))
            .collect()
    }

    /// Charts `t·λ_τ(0)` over each catalog cone `σ`, for every nonzero face
    /// `τ ⊆ σ` and `t ∈ {e, fixed}`.
    pub fn boundary_charts(&self) -> Vec<ChartPoint<Rat>> {
        let mut out = Vec::new();
        for sigma in &self.faces {
            for tau in sigma.faces().iter().filter(|t| !t.is_zero()) {
                let lam = tau.interior_cocharacter().expect("nonzero");
                let base = ChartPoint::limit_point(sigma.clone(), &lam).expect("λ ∈ τ ⊆ σ");
                out.push(base.torus_translate(&self.fixed_torus()).expect("nonzero"));
                out.push(base);
            }
        }
        out
    }

    /// Boundary charts with identity and with seeded random unipotent parts.
    pub fn boundary_points(&self, seed: u64) -> Vec<MixedPoint<Rat>> {
        let mut rng = rng_for(seed, 77);
        let n = self.group().n();
        let mut out = Vec::new();
        for chart in self.boundary_charts() {
            out.push(MixedPoint {
                u_minus: Matrix::identity(n),
                chart: chart.clone(),
                u_plus: Matrix::identity(n),
            });
            out.push(MixedPoint {
                u_minus: self.group().random_unipotent(&mut rng, false),
                chart,
                u_plus: self.group().random_unipotent(&mut rng, true),
            });
        }
        out
    }

    /// A random cocharacter in the chamber: a nonzero combination of the
    /// chamber rays with coefficients in `0..=2`.
    fn random_chamber_cocharacter(&self, rng: &mut ChaCha8Rng) -> IntVector {
        loop {
            let mut v = vec![0; self.rank()];
            for r in self.chamber.rays() {
                let c = rng.random_range(0i64..=2);
                for (x, y) in v.iter_mut().zip(r) {
                    *x += c * y;
                }
            }
            if v.iter().any(|&x| x != 0) {
                return v;
            }
        }
    }
}

fn conj(a: &Matrix<Rat>, g: &Matrix<Rat>, a_inv: &Matrix<Rat>) -> Matrix<Rat> {
    &(a * g) * a_inv
}

pub fn suite_signs(ctx: &Context) -> Vec<PropertyResult> {
    let g = ctx.group();
    let signs = g.chevalley_signs();
    let single = PropertyResult {
        name: "single_root_image".into(),
        cases: g.rank() * g.root_count(),
        skipped: 0,
        passed: signs.is_ok(),
        counterexample: signs.as_ref().err().map(|e| json!({"error": e.to_string()})),
    };
    let mut out = vec![single];
    if let Ok(table) = signs {
        let simple: Vec<(usize, usize)> = (0..g.rank())
            .flat_map(|i| [(i, g.simple_root_index(i, false)), (i, g.simple_root_index(i, true))])
            .collect();
        out.push(exhaustive("simple_signs_negative", &simple, |&(i, k)| {
            check(table.get(i, k) == -1, || json!({"simple": i, "root": k}))
        }));
        let all: Vec<((usize, usize), i64)> = table.entries().collect();
        out.push(exhaustive("sign_values", &all, |&((i, k), e)| {
            let x = Rat::from_int(3);
            let ni = g.weyl_generator::<Rat>(i);
            let lhs = conj(&ni, &g.pin(k, x.clone()), &g.weyl_generator_inv(i));
            let rhs = g.pin(g.reflect_root(i, k), Rat::from_int(e) * x);
            check(lhs == rhs, || json!({"simple": i, "root": k, "sign": e}))
        }));
    }
    let simples: Vec<usize> = (0..g.rank()).collect();
    out.push(exhaustive("weyl_relations", &simples, |&i| {
        let ni = g.weyl_generator::<Rat>(i);
        let sq = &ni * &ni;
        check((&sq * &sq).is_identity(), || json!({"simple": i}))
    }));
    out
}

pub fn suite_f_i(ctx: &Context, cases: usize, seed: u64) -> Vec<PropertyResult> {
    let calc = &ctx.calc;
    let g = ctx.group();
    let mut out = Vec::new();

    let mut rng = rng_for(seed, 1);
    out.push(sampled("torus_agreement", cases, |_| {
        let p = ctx.random_torus_point(&mut rng);
        let i = rng.random_range(0..g.rank());
        match calc.f_i(&p, i) {
            Err(CalculusError::OutsideV { .. }) => Case::Skip,
            Err(e) => Case::Fail(json!({"input": p.to_json(), "error": e.to_string()})),
            Ok(q) => {
                let omega = calc.to_group(&p).expect("torus point");
                let expect = conj(&g.weyl_generator(i), &omega, &g.weyl_generator_inv(i));
                check(calc.to_group(&q).as_ref() == Some(&expect), || {
                    json!({"simple": i, "input": p.to_json(), "output": q.to_json()})
                })
            }
        }
    }));

    let mut rng = rng_for(seed, 2);
    out.push(sampled("order_independence", cases, |_| {
        let p = ctx.random_torus_point(&mut rng);
        let i = rng.random_range(0..g.rank());
        let mut minus = g.negative_order();
        let mut plus = g.positive_order();
        minus.shuffle(&mut rng);
        plus.shuffle(&mut rng);
        match (calc.f_i(&p, i), calc.f_i_with_orders(&p, i, &minus, &plus)) {
            (Ok(a), Ok(b)) => check(a == b, || json!({"simple": i, "input": p.to_json()})),
            (Err(_), Err(_)) => Case::Skip,
            _ => Case::Fail(json!({"simple": i, "input": p.to_json(), "reason": "domains differ"})),
        }
    }));

    let mut rng = rng_for(seed, 3);
    out.push(sampled("double_application", cases, |_| {
        let p = ctx.random_torus_point(&mut rng);
        let i = rng.random_range(0..g.rank());
        let Ok(q) = calc.f_i(&p, i).and_then(|q| calc.f_i(&q, i)) else {
            return Case::Skip;
        };
        let ni = g.weyl_generator::<Rat>(i);
        let n2 = &ni * &ni;
        let omega = calc.to_group(&p).expect("torus point");
        let expect = conj(&n2, &omega, &n2.inverse().expect("invertible"));
        check(calc.to_group(&q).as_ref() == Some(&expect), || {
            json!({"simple": i, "input": p.to_json()})
        })
    }));

    let mut rng = rng_for(seed, 4);
    out.push(sampled("boundary_formula", cases, |_| {
        let mut p = ctx.random_torus_point(&mut rng);
        let lam = ctx.chamber.interior_cocharacter().expect("nonzero chamber");
        let t = g.random_torus(&mut rng);
        p.chart = ChartPoint::limit_point(ctx.chamber.clone(), &lam)
            .expect("λ in chamber")
            .torus_translate(&t)
            .expect("nonzero torus");
        let i = rng.random_range(0..g.rank());
        let neg = g.simple_root_index(i, true);
        let pos = g.simple_root_index(i, false);
        let mut minus: Vec<usize> = g.negative_order().into_iter().filter(|&k| k != neg).collect();
        minus.push(neg);
        let mut plus = vec![pos];
        plus.extend(g.positive_order().into_iter().filter(|&k| k != pos));
        let xs = g.unipotent_refactor(&p.u_minus, &minus).expect("lower unitriangular");
        let ys = g.unipotent_refactor(&p.u_plus, &plus).expect("upper unitriangular");
        let (x, y) = (xs.last().expect("nonempty").clone(), ys[0].clone());
        if x.is_zero() || y.is_zero() {
            return Case::Skip;
        }
        let q = match calc.f_i(&p, i) {
            Ok(q) => q,
            Err(e) => return Case::Fail(json!({"input": p.to_json(), "error": e.to_string()})),
        };
        let qx = g.unipotent_refactor(&q.u_minus, &minus).expect("lower");
        let qy = g.unipotent_refactor(&q.u_plus, &plus).expect("upper");
        let ok = *qx.last().expect("nonempty") == -(x.recip().expect("nonzero"))
            && qy[0] == -(y.recip().expect("nonzero"))
            && q.chart.in_closed_orbit();
        check(ok, || json!({"simple": i, "input": p.to_json(), "output": q.to_json()}))
    }));

    let n0 = calc.n0().clone();
    let n0_inv = calc.n0_inv();
    let mut rng = rng_for(seed, 5);
    out.push(sampled("longest_element_agreement", cases, |_| {
        let p = ctx.random_torus_point(&mut rng);
        let Ok(q) = calc.f_w0(&p) else { return Case::Skip };
        let omega = calc.to_group(&p).expect("torus point");
        check(calc.to_group(&q) == Some(conj(&n0, &omega, &n0_inv)), || json!({"input": p.to_json()}))
    }));

    let mut rng = rng_for(seed, 6);
    out.push(sampled("inverse_longest_agreement", cases, |_| {
        let p = ctx.random_torus_point(&mut rng);
        let Ok(q) = calc.f_w0_inv(&p) else { return Case::Skip };
        let omega = calc.to_group(&p).expect("torus point");
        check(calc.to_group(&q) == Some(conj(&n0_inv, &omega, &n0)), || json!({"input": p.to_json()}))
    }));

    let mut rng = rng_for(seed, 7);
    out.push(sampled("round_trip", cases, |_| {
        let p = ctx.random_torus_point(&mut rng);
        let Ok(q) = calc.f_w0(&p).and_then(|q| calc.f_w0_inv(&q)) else {
            return Case::Skip;
        };
        check(q == p, || json!({"input": p.to_json(), "output": q.to_json()}))
    }));

    let closed: Vec<ChartPoint<Rat>> = ctx
        .boundary_charts()
        .into_iter()
        .filter(|c| c.in_closed_orbit() && *c.cone() == ctx.chamber)
        .collect();
    let mut rng = rng_for(seed, 8);
    out.push(sampled("boundary_closed_orbit", cases, |_| {
        let p = MixedPoint {
            u_minus: g.random_unipotent(&mut rng, false),
            chart: closed[rng.random_range(0..closed.len())].clone(),
            u_plus: g.random_unipotent(&mut rng, true),
        };
        match calc.f_w0(&p) {
            Ok(q) => check(q.chart.in_closed_orbit(), || json!({"input": p.to_json()})),
            Err(_) => Case::Skip,
        }
    }));
    out
}

pub fn suite_theta(ctx: &Context, cases: usize, seed: u64) -> Vec<PropertyResult> {
    let calc = &ctx.calc;
    let g = ctx.group();
    let n = g.n();
    let mut out = Vec::new();

    out.push(exhaustive("anchor_certificate", &ctx.faces, |c| {
        check(calc.certify_anchors(c, 50).is_ok(), || json!({"cone": c.rays()}))
    }));

    let mut rng = rng_for(seed, 11);
    out.push(sampled("direct_agreement", cases, |k| {
        let up = g.random_unipotent(&mut rng, true);
        let lo = g.random_unipotent(&mut rng, false);
        let t = g.random_torus(&mut rng);
        let direct = match calc.theta_direct(&up, &t, &lo) {
            Ok(b) => calc.from_triple(&b, ctx.chamber.clone()).expect("torus point"),
            Err(_) => return Case::Skip,
        };
        let chart = ChartPoint::torus_point(ctx.chamber.clone(), &t).expect("nonzero");
        let ce = || json!({"u_plus": matrix_json(&up), "torus": vec_json(&t), "u_minus": matrix_json(&lo)});
        match calc.theta_auto(&up, &chart, &lo, ANCHOR_BUDGET, k as u64) {
            Ok(q) => check(q == direct, ce),
            Err(_) => Case::Fail(ce()),
        }
    }));

    let charts = ctx.boundary_charts();
    out.push(exhaustive("boundary_identity", &charts, |chart| {
        let e = Matrix::identity(n);
        let expect = MixedPoint { u_minus: e.clone(), chart: chart.clone(), u_plus: e.clone() };
        match calc.theta_auto(&e, chart, &e, ANCHOR_BUDGET, 0) {
            Ok(q) => check(q == expect, || json!({"chart": chart.to_json()})),
            Err(_) => Case::Fail(json!({"chart": chart.to_json(), "reason": "outside domain"})),
        }
    }));

    let mut rng = rng_for(seed, 12);
    out.push(sampled("equivariance", cases, |k| {
        let chart = charts[rng.random_range(0..charts.len())].clone();
        let vp = g.random_unipotent(&mut rng, true);
        let vm = g.random_unipotent(&mut rng, false);
        let t = g.random_torus(&mut rng);
        let tm = g.torus(&t).expect("nonzero");
        let tm_inv = tm.inverse().expect("invertible");
        let moved_in = conj(&tm, &vp, &tm_inv);
        let Ok(lhs) = calc.theta_auto(&moved_in, &chart.torus_translate(&t).expect("nonzero"), &vm, ANCHOR_BUDGET, k as u64)
        else {
            return Case::Skip;
        };
        let Ok(q) = calc.theta_auto(&vp, &chart, &vm, ANCHOR_BUDGET, k as u64) else {
            return Case::Skip;
        };
        let rhs = MixedPoint {
            u_minus: conj(&tm, &q.u_minus, &tm_inv),
            chart: q.chart.torus_translate(&t).expect("nonzero"),
            u_plus: q.u_plus,
        };
        check(lhs == rhs, || {
            json!({"u_plus": matrix_json(&vp), "chart": chart.to_json(), "u_minus": matrix_json(&vm), "t": vec_json(&t)})
        })
    }));
    out
}

pub fn suite_action(ctx: &Context, cases: usize, seed: u64) -> Vec<PropertyResult> {
    let calc = &ctx.calc;
    let g = ctx.group();
    let n = g.n();
    let mut out = Vec::new();

    let mut rng = rng_for(seed, 21);
    out.push(sampled("direct_agreement", cases, |_| {
        let g1 = g.random_element(&mut rng, 10);
        let g2 = g.random_element(&mut rng, 10);
        let p = ctx.random_torus_point(&mut rng);
        let ce = || json!({"g1": matrix_json(&g1), "point": p.to_json(), "g2": matrix_json(&g2)});
        let recon = calc.action_reconstructed(&g1, &p, &g2);
        let direct = calc.action_direct(&g1, &p, &g2);
        match (recon, direct) {
            (Ok(a), Ok(b)) => {
                let b = calc.from_triple(&b, ctx.chamber.clone()).expect("torus point");
                check(a == b, ce)
            }
            (Ok(_), Err(_)) => Case::Fail(ce()),
            (Err(e), _) if e.is_domain_failure() => Case::Skip,
            (Err(_), _) => Case::Fail(ce()),
        }
    }));

    let boundary = ctx.boundary_points(seed);
    let e = Matrix::identity(n);
    out.push(exhaustive("boundary_identity", &boundary, |p| {
        match calc.action_reconstructed(&e, p, &e) {
            Ok(q) => check(q == *p, || json!({"point": p.to_json(), "output": q.to_json()})),
            Err(err) => Case::Fail(json!({"point": p.to_json(), "error": err.to_string()})),
        }
    }));

    let mut rng = rng_for(seed, 22);
    out.push(sampled("phi_inverse", cases, |_| {
        let p = boundary[rng.random_range(0..boundary.len())].clone();
        let a = g.random_element(&mut rng, 10);
        let b = g.random_element(&mut rng, 10);
        match calc.phi((&a, &b), (&a, &b), &p) {
            Ok(q) => check(q == p, || json!({"a": matrix_json(&a), "b": matrix_json(&b), "point": p.to_json()})),
            Err(_) => Case::Skip,
        }
    }));

    let mut rng = rng_for(seed, 23);
    out.push(sampled("phi_direct", cases, |_| {
        let p = ctx.random_torus_point(&mut rng);
        let (a1, b1, a2, b2) = (
            g.random_element(&mut rng, 10),
            g.random_element(&mut rng, 10),
            g.random_element(&mut rng, 10),
            g.random_element(&mut rng, 10),
        );
        let Ok(q) = calc.phi((&a1, &b1), (&a2, &b2), &p) else {
            return Case::Skip;
        };
        let omega = calc.to_group(&p).expect("torus point");
        let inv = |m: &Matrix<Rat>| m.inverse().expect("invertible");
        let expect = &(&(&(&inv(&a1) * &a2) * &omega) * &inv(&b2)) * &b1;
        check(calc.to_group(&q) == Some(expect), || json!({"point": p.to_json()}))
    }));
    out
}

/// An equivalent pair `(g1, ω, g2) ∼ (g1·h1⁻¹, A(h1, ω, h2), g2·h2⁻¹)`.
fn equivalent_pair(
    ctx: &Context,
    rng: &mut ChaCha8Rng,
    pool: &[MixedPoint<Rat>],
) -> Option<((Matrix<Rat>, MixedPoint<Rat>, Matrix<Rat>), (Matrix<Rat>, MixedPoint<Rat>, Matrix<Rat>))> {
    let g = ctx.group();
    let p = pool[rng.random_range(0..pool.len())].clone();
    let g1 = g.random_element(rng, EQUIV_STEPS);
    let g2 = g.random_element(rng, EQUIV_STEPS);
    let h1 = g.random_element(rng, EQUIV_STEPS);
    let h2 = g.random_element(rng, EQUIV_STEPS);
    let moved = ctx.calc.action_reconstructed(&h1, &p, &h2).ok()?;
    let inv = |m: &Matrix<Rat>| m.inverse().expect("invertible");
    Some(((g1.clone(), p, g2.clone()), (&g1 * &inv(&h1), moved, &g2 * &inv(&h2))))
}

/// A pair that cannot be equivalent: either the boundary charts lie in
/// different torus orbits, or a torus point is moved by a nontrivial root
/// group element.
fn inequivalent_pair(
    ctx: &Context,
    rng: &mut ChaCha8Rng,
    pool: &[MixedPoint<Rat>],
) -> ((Matrix<Rat>, MixedPoint<Rat>, Matrix<Rat>), (Matrix<Rat>, MixedPoint<Rat>, Matrix<Rat>)) {
    let g = ctx.group();
    let g1 = g.random_element(rng, EQUIV_STEPS);
    let g2 = g.random_element(rng, EQUIV_STEPS);
    if rng.random_range(0..2) == 0 {
        let p = ctx.random_torus_point(rng);
        let k = rng.random_range(0..g.root_count());
        let c = Rat::from_int(rng.random_range(1i64..=3));
        ((g1.clone(), p.clone(), g2.clone()), (&g.pin(k, c) * &g1, p, g2))
    } else {
        let zeros = |p: &MixedPoint<Rat>| -> Vec<bool> {
            ctx.chamber
                .hilbert()
                .elements()
                .iter()
                .map(|h| p.chart.evaluate_character(h).map(|v| v.is_zero()).unwrap_or(false))
                .collect()
        };
        loop {
            let a = &pool[rng.random_range(0..pool.len())];
            let b = &pool[rng.random_range(0..pool.len())];
            if zeros(a) != zeros(b) {
                let h1 = g.random_element(rng, EQUIV_STEPS);
                let h2 = g.random_element(rng, EQUIV_STEPS);
                return ((g1, a.clone(), g2), (h1, b.clone(), h2));
            }
        }
    }
}

/// Chart points over the full chamber: torus points and translated limit
/// points of every face.
fn chamber_pool(ctx: &Context, seed: u64) -> Vec<MixedPoint<Rat>> {
    let mut rng = rng_for(seed, 31);
    let mut pool: Vec<MixedPoint<Rat>> = ctx
        .boundary_points(seed)
        .into_iter()
        .filter(|p| *p.chart.cone() == ctx.chamber)
        .collect();
    for _ in 0..4 {
        pool.push(ctx.random_torus_point(&mut rng));
    }
    pool
}

fn rep_json(r: &(Matrix<Rat>, MixedPoint<Rat>, Matrix<Rat>)) -> Value {
    json!({"g1": matrix_json(&r.0), "point": r.1.to_json(), "g2": matrix_json(&r.2)})
}

pub fn suite_equivalence(ctx: &Context, cases: usize, seed: u64) -> Vec<PropertyResult> {
    let calc = &ctx.calc;
    let g = ctx.group();
    let n = g.n();
    let witnesses = cases.min(100);
    let pool = chamber_pool(ctx, seed);
    let mut out = Vec::new();

    let mut rng = rng_for(seed, 41);
    out.push(sampled("witness_consistency", cases, |k| {
        let Some((a, b)) = equivalent_pair(ctx, &mut rng, &pool) else {
            return Case::Skip;
        };
        let verdict = calc.check_equivalence(&a, &b, 50, seed ^ k as u64);
        let ce = || json!({"a": rep_json(&a), "b": rep_json(&b)});
        match verdict {
            Equivalence::Inconclusive { .. } => Case::Skip,
            Equivalence::NotEquivalent { .. } => Case::Fail(ce()),
            Equivalence::Equivalent { .. } => {
                let mut confirmed = 0;
                let mut draws = 0;
                while confirmed < witnesses && draws < 20 * witnesses {
                    draws += 1;
                    let w = (g.random_element(&mut rng, EQUIV_STEPS), g.random_element(&mut rng, EQUIV_STEPS));
                    if let (Ok(l), Ok(r)) = (calc.act_with_witness(&a, &w), calc.act_with_witness(&b, &w)) {
                        if l != r {
                            return Case::Fail(ce());
                        }
                        confirmed += 1;
                    }
                }
                check(confirmed == witnesses, ce)
            }
        }
    }));

    let mut rng = rng_for(seed, 42);
    out.push(sampled("engineered_inequivalence", cases, |k| {
        let (a, b) = inequivalent_pair(ctx, &mut rng, &pool);
        let ce = || json!({"a": rep_json(&a), "b": rep_json(&b)});
        match calc.check_equivalence(&a, &b, 50, seed ^ k as u64) {
            Equivalence::Equivalent { .. } => return Case::Fail(ce()),
            Equivalence::Inconclusive { .. } => return Case::Skip,
            Equivalence::NotEquivalent { .. } => {}
        }
        let mut tested = 0;
        let mut draws = 0;
        while tested < witnesses && draws < 20 * witnesses {
            draws += 1;
            let w = (g.random_element(&mut rng, EQUIV_STEPS), g.random_element(&mut rng, EQUIV_STEPS));
            if let (Ok(l), Ok(r)) = (calc.act_with_witness(&a, &w), calc.act_with_witness(&b, &w)) {
                if l == r {
                    return Case::Fail(ce());
                }
                tested += 1;
            }
        }
        check(tested == witnesses, ce)
    }));

    // fixed examples
    let e = Matrix::<Rat>::identity(n);
    let id = calc.identity_point::<Rat>(ctx.chamber.clone());
    let pa = g.pin(g.simple_root_index(0, false), Rat::one());
    let shifted = MixedPoint { u_plus: pa.clone(), ..id.clone() };
    let n1 = g.weyl_generator::<Rat>(0);
    let examples = vec![
        ((pa.clone(), id.clone(), e.clone()), (e.clone(), shifted, e.clone()), true),
        ((n1.clone(), id.clone(), e.clone()), (e.clone(), id.clone(), n1.inverse().expect("invertible")), true),
        ((e.clone(), id.clone(), e.clone()), (pa, id, e.clone()), false),
    ];
    out.push(exhaustive("examples", &examples, |(a, b, eq)| {
        let v = calc.check_equivalence(a, b, 50, seed);
        let ok = match v {
            Equivalence::Equivalent { .. } => *eq,
            Equivalence::NotEquivalent { .. } => !*eq,
            Equivalence::Inconclusive { .. } => false,
        };
        check(ok, || json!({"a": rep_json(a), "b": rep_json(b)}))
    }));
    out
}

pub fn suite_functoriality(ctx: &Context, seed: u64) -> Vec<PropertyResult> {
    let mut chains = Vec::new();
    for a in &ctx.faces {
        for b in ctx.faces.iter().filter(|b| b.is_face(a)) {
            for c in ctx.faces.iter().filter(|c| c.is_face(b)) {
                chains.push((a.clone(), b.clone(), c.clone()));
            }
        }
    }
    let mut rng = rng_for(seed, 51);
    let t = ctx.group().random_torus(&mut rng);
    let mut out = Vec::new();
    out.push(exhaustive("inclusion_chains", &chains, |(a, b, c)| {
        let mut points = vec![ChartPoint::torus_point(a.clone(), &t).expect("nonzero")];
        for f in a.faces().iter().filter(|f| !f.is_zero()) {
            let lam = f.interior_cocharacter().expect("nonzero");
            let p = ChartPoint::<Rat>::limit_point(a.clone(), &lam).expect("λ ∈ a");
            points.push(p.torus_translate(&t).expect("nonzero"));
        }
        for p in points {
            let two = p.chart_inclusion(b.clone()).and_then(|q| q.chart_inclusion(c.clone()));
            let one = p.chart_inclusion(c.clone());
            match (two, one) {
                (Ok(x), Ok(y)) if x == y => {}
                _ => return Case::Fail(json!({"point": p.to_json(), "via": b.rays(), "to": c.rays()})),
            }
        }
        Case::Pass
    }));

    let fan = Fan::from_cones(ctx.rank(), vec![(*ctx.chamber).clone()]);
    let glue = fan.gluing_data();
    out.push(exhaustive("gluing_invariants", &glue, |gd| {
        let ok = gd.is_consistent()
            && gd.sigma.dual_contains(&gd.u)
            && gd.sigma.rays().iter().all(|r| (dot(&gd.u, r) == 0) == gd.tau.rays().contains(r))
            && gd.inclusion().len() == gd.sigma.hilbert().len();
        check(ok, || json!({"tau": gd.tau.rays(), "sigma": gd.sigma.rays(), "u": gd.u}))
    }));
    out
}

pub fn suite_limits(ctx: &Context, cases: usize, seed: u64) -> Vec<PropertyResult> {
    let calc = &ctx.calc;
    let g = ctx.group();
    let mut out = Vec::new();

    let deltas: Vec<IntVector> = {
        let mut v = vec![vec![]];
        for _ in 0..ctx.rank() {
            v = v
                .into_iter()
                .flat_map(|p: IntVector| {
                    (-3i64..=3).map(move |x| {
                        let mut q = p.clone();
                        q.push(x);
                        q
                    })
                })
                .collect();
        }
        v.into_iter().filter(|d| ctx.chamber.contains(d)).collect()
    };
    out.push(exhaustive("limit_points", &deltas, |d| {
        let t: Vec<RatFun> = d.iter().map(|&k| RatFun::monomial(Rat::one(), k)).collect();
        let p = ChartPoint::torus_point(ctx.chamber.clone(), &t).expect("nonzero");
        let lim = ChartPoint::<Rat>::limit_point(ctx.chamber.clone(), d).expect("δ ∈ σ");
        check(p.evaluate_at_zero().ok() == Some(lim), || json!({"delta": d}))
    }));

    // (u⁻, t·δ(ε), u⁺) and its specialization (u⁻, t·δ(0), u⁺)
    let curve = |rng: &mut ChaCha8Rng| -> (MixedPoint<RatFun>, MixedPoint<Rat>, Value) {
        let base = ctx.random_torus_point(rng);
        let t = base.chart.torus_coordinates().expect("torus point");
        let delta = ctx.random_chamber_cocharacter(rng);
        let coords: Vec<RatFun> = t
            .iter()
            .zip(&delta)
            .map(|(c, &k)| RatFun::monomial(c.clone(), k))
            .collect();
        let generic = MixedPoint {
            u_minus: lift(&base.u_minus),
            chart: ChartPoint::torus_point(ctx.chamber.clone(), &coords).expect("nonzero"),
            u_plus: lift(&base.u_plus),
        };
        let special = generic.evaluate_at_zero().expect("δ in chamber");
        let ce = json!({"point": base.to_json(), "delta": delta});
        (generic, special, ce)
    };

    let mut rng = rng_for(seed, 61);
    out.push(sampled("f_i_commutes", cases, |_| {
        let (generic, special, ce) = curve(&mut rng);
        let i = rng.random_range(0..g.rank());
        let Ok(at_zero) = calc.f_i(&special, i) else { return Case::Skip };
        match calc.f_i(&generic, i).map(|q| q.evaluate_at_zero()) {
            Ok(Ok(q)) => check(q == at_zero, || ce),
            _ => Case::Fail(ce),
        }
    }));

    let mut rng = rng_for(seed, 62);
    out.push(sampled("theta_commutes", cases, |k| {
        let (generic, special, ce) = curve(&mut rng);
        let Ok(at_zero) = calc.theta_auto(&special.u_plus, &special.chart, &special.u_minus, ANCHOR_BUDGET, k as u64)
        else {
            return Case::Skip;
        };
        match calc
            .theta_auto(&generic.u_plus, &generic.chart, &generic.u_minus, ANCHOR_BUDGET, k as u64)
            .map(|q| q.evaluate_at_zero())
        {
            Ok(Ok(q)) => check(q == at_zero, || ce),
            _ => Case::Fail(ce),
        }
    }));

    let mut rng = rng_for(seed, 63);
    out.push(sampled("action_commutes", cases, |_| {
        let (generic, special, ce) = curve(&mut rng);
        let g1 = g.random_element(&mut rng, 10);
        let g2 = g.random_element(&mut rng, 10);
        let Ok(at_zero) = calc.action_reconstructed(&g1, &special, &g2) else {
            return Case::Skip;
        };
        match calc
            .action_reconstructed(&lift(&g1), &generic, &lift(&g2))
            .map(|q| q.evaluate_at_zero())
        {
            Ok(Ok(q)) => check(q == at_zero, || ce),
            _ => Case::Fail(ce),
        }
    }));
    out
}

/// Run a named suite. `rank` is the rank of the root datum, so the group is
/// `SL_{rank+1}`.
pub fn run(suite: &str, rank: usize, cases: usize, seed: u64) -> Result<VerificationReport, VerifyError> {
    if !SUITES.contains(&suite) {
        return Err(VerifyError::UnknownSuite(suite.to_string()));
    }
    let ctx = Context::new(rank)?;
    let properties = run_with(&ctx, suite, cases, seed);
    let passed = properties.iter().all(|p| p.passed);
    Ok(VerificationReport {
        suite: suite.to_string(),
        rank,
        seed,
        cases,
        properties,
        passed,
    })
}

fn run_with(ctx: &Context, suite: &str, cases: usize, seed: u64) -> Vec<PropertyResult> {
    let prefixed = |name: &str, props: Vec<PropertyResult>| -> Vec<PropertyResult> {
        props
            .into_iter()
            .map(|mut p| {
                p.name = format!("{name}/{}", p.name);
                p
            })
            .collect()
    };
    match suite {
        "signs" => suite_signs(ctx),
        "f_i" => suite_f_i(ctx, cases, seed),
        "theta" => suite_theta(ctx, cases, seed),
        "action" => suite_action(ctx, cases, seed),
        "equivalence" => suite_equivalence(ctx, cases, seed),
        "functoriality" => suite_functoriality(ctx, seed),
        "limits" => suite_limits(ctx, cases, seed),
        "all" => SUITES[..SUITES.len() - 1]
            .iter()
            .flat_map(|s| prefixed(s, run_with(ctx, s, cases, seed)))
            .collect(),
        _ => unreachable!("suite names checked by run"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert_eq!(run("nope", 1, 1, 0), Err(VerifyError::UnknownSuite("nope".into())));
        assert_eq!(run("signs", 0, 1, 0), Err(VerifyError::BadRank(0)));
    }

    #[test]
    fn small_runs_pass() {
        for suite in ["signs", "f_i", "theta", "action", "functoriality", "limits"] {
            let r = run(suite, 1, 5, 3).unwrap();
            assert!(r.passed, "{}", serde_json::to_string_pretty(&r).unwrap());
        }
    }

    #[test]
    fn runs_are_reproducible() {
        let a = serde_json::to_string(&run("f_i", 2, 5, 7).unwrap()).unwrap();
        let b = serde_json::to_string(&run("f_i", 2, 5, 7).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
