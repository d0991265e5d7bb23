//! Birational constructions on `Ω̄_σ = U⁻ × T̄_σ × U⁺`: the maps `f_i`
//! extending conjugation by `n_i`, their composites `f` and `f′` for the
//! longest element, the multiplication map `Θ : U⁺ × T̄_σ × U⁻ ⇢ Ω̄_σ`, the
//! two-sided action `A_σ`, and the equivalence tester built on it.
//!
//! Every construction is a rational map. Leaving its domain is reported as a
//! [`DomainReport`] rather than a panic.

use std::fmt;
use std::sync::Arc;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chevalley::{ldu, BigCellTriple, ChevalleyError, SignTable, SpecialLinear};
use crate::lattice::{Field, Matrix, Rat, RatFun};
use crate::polyhedral::Cone;
use crate::toric::{ChartPoint, ToricError};

/// A point `(u⁻, t̄, u⁺)` of `Ω̄_σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedPoint<F: Field> {
    pub u_minus: Matrix<F>,
    pub chart: ChartPoint<F>,
    pub u_plus: Matrix<F>,
}

impl<F: Field> MixedPoint<F> {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "u_minus": matrix_json(&self.u_minus),
            "chart": self.chart.to_json(),
            "u_plus": matrix_json(&self.u_plus),
        })
    }
}

impl MixedPoint<Rat> {
    pub fn to_ratfun(&self) -> MixedPoint<RatFun> {
        MixedPoint {
            u_minus: lift(&self.u_minus),
            chart: self.chart.to_ratfun(),
            u_plus: lift(&self.u_plus),
        }
    }
}

impl MixedPoint<RatFun> {
    /// Specialize at `ε = 0`.
    pub fn evaluate_at_zero(&self) -> Result<MixedPoint<Rat>, ToricError> {
        let at_zero = |m: &Matrix<RatFun>| m.try_map(|x| x.evaluate_at_zero());
        Ok(MixedPoint {
            u_minus: at_zero(&self.u_minus)?,
            chart: self.chart.evaluate_at_zero()?,
            u_plus: at_zero(&self.u_plus)?,
        })
    }
}

/// Rows of exact value strings.
pub fn matrix_json<F: Field>(m: &Matrix<F>) -> serde_json::Value {
    serde_json::Value::from(
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|x| x.to_string()).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    )
}

/// One domain predicate evaluated while running a construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DomainReport {
    pub step: String,
    pub predicate: String,
    pub holds: bool,
}

impl fmt::Display for DomainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.holds { "holds" } else { "fails" };
        write!(f, "{}: {} {}", self.step, self.predicate, verdict)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CalculusError {
    #[error("outside V_{simple}: {report}")]
    OutsideV { simple: usize, report: DomainReport },
    #[error("outside the domain: {report}")]
    OutsideDomain {
        report: DomainReport,
        trail: Vec<DomainReport>,
    },
    #[error("not in the big cell (leading minor {0} vanishes)")]
    NotInBigCell(usize),
    #[error(transparent)]
    Toric(#[from] ToricError),
    #[error(transparent)]
    Chevalley(#[from] ChevalleyError),
    #[error("no anchors certified for this cone within the search budget")]
    NoAnchors,
}

impl CalculusError {
    /// Whether the error only says the input is outside a rational map's
    /// domain.
    pub fn is_domain_failure(&self) -> bool {
        matches!(
            self,
            CalculusError::OutsideV { .. }
                | CalculusError::OutsideDomain { .. }
                | CalculusError::NotInBigCell(_)
        )
    }
}

/// Records predicates checked along a construction.
#[derive(Debug, Default, Clone)]
pub struct Trail {
    reports: Vec<DomainReport>,
}

impl Trail {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn reports(&self) -> &[DomainReport] {
        &self.reports
    }

    fn check(&mut self, step: &str, predicate: &str, holds: bool) -> Result<(), CalculusError> {
        let report = DomainReport {
            step: step.to_string(),
            predicate: predicate.to_string(),
            holds,
        };
        self.reports.push(report.clone());
        if holds {
            Ok(())
        } else {
            Err(CalculusError::OutsideDomain {
                report,
                trail: self.reports.clone(),
            })
        }
    }
}

/// The pair `(u0⁻, u0⁺)` used to reach the boundary in the reconstruction of
/// `Θ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Anchors {
    pub minus: Matrix<Rat>,
    pub plus: Matrix<Rat>,
}

/// Outcome of comparing two representatives `(g1, ω, g2)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Equivalence {
    Equivalent { witness: (Matrix<Rat>, Matrix<Rat>) },
    NotEquivalent { witness: (Matrix<Rat>, Matrix<Rat>) },
    Inconclusive { attempts: usize },
}

/// A representative `(g1, ω, g2)` of a point of the glued space.
pub type Representative = (Matrix<Rat>, MixedPoint<Rat>, Matrix<Rat>);

pub fn lift<F: Field>(m: &Matrix<Rat>) -> Matrix<F> {
    m.map(F::from_rat)
}

fn inverse<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    m.inverse().expect("group elements are invertible")
}

/// Context for the constructions on `SL_n`.
#[derive(Debug, Clone)]
pub struct Calculus {
    group: SpecialLinear,
    signs: SignTable,
    /// Reduced word `[i_m, …, i_1]` of the longest element, `n_0 = n_{i_m}⋯n_{i_1}`.
    w0_word: Vec<usize>,
    n0: Matrix<Rat>,
}

impl Calculus {
    pub fn new(n: usize) -> Result<Self, CalculusError> {
        Self::from_group(SpecialLinear::new(n)?)
    }

    pub fn from_group(group: SpecialLinear) -> Result<Self, CalculusError> {
        let signs = group.chevalley_signs()?;
        let w0_word = group
            .root_datum()
            .weyl_group()
            .expect("small Weyl group")
            .longest_word();
        let n0 = group.weyl_representative(&w0_word)?;
        Ok(Calculus {
            group,
            signs,
            w0_word,
            n0,
        })
    }

    pub fn group(&self) -> &SpecialLinear {
        &self.group
    }

    pub fn signs(&self) -> &SignTable {
        &self.signs
    }

    pub fn longest_word(&self) -> &[usize] {
        &self.w0_word
    }

    pub fn n0(&self) -> &Matrix<Rat> {
        &self.n0
    }

    pub fn n0_inv(&self) -> Matrix<Rat> {
        inverse(&self.n0)
    }

    pub fn identity_point<F: Field>(&self, cone: Arc<Cone>) -> MixedPoint<F> {
        let n = self.group.n();
        MixedPoint {
            u_minus: Matrix::identity(n),
            chart: ChartPoint::identity(cone),
            u_plus: Matrix::identity(n),
        }
    }

    /// `u⁻ t u⁺` when the chart component is a torus point.
    pub fn to_group<F: Field>(&self, p: &MixedPoint<F>) -> Option<Matrix<F>> {
        let t = self.group.torus(&p.chart.torus_coordinates()?).ok()?;
        Some(&(&p.u_minus * &t) * &p.u_plus)
    }

    /// The mixed point of a big cell triple, with the torus part placed in
    /// the chart of `cone`.
    pub fn from_triple<F: Field>(
        &self,
        b: &BigCellTriple<F>,
        cone: Arc<Cone>,
    ) -> Result<MixedPoint<F>, CalculusError> {
        Ok(MixedPoint {
            u_minus: self.group.assemble(&b.minus_order, &b.minus),
            chart: ChartPoint::torus_point(cone, &b.torus)?,
            u_plus: self.group.assemble(&b.plus_order, &b.plus),
        })
    }

    /// Factor `g` as a mixed point over `cone`.
    pub fn factor<F: Field>(
        &self,
        g: &Matrix<F>,
        cone: Arc<Cone>,
    ) -> Result<MixedPoint<F>, CalculusError> {
        let b = self.group.big_cell_factor_default(g).map_err(not_in_cell)?;
        self.from_triple(&b, cone)
    }

    fn split<F: Field>(
        &self,
        step: &str,
        g: &Matrix<F>,
        trail: &mut Trail,
    ) -> Result<(Matrix<F>, Vec<F>, Matrix<F>), CalculusError> {
        let b = ldu(g);
        trail.check(step, "product lies in the big cell", b.is_ok())?;
        let (l, d, u) = b.expect("checked");
        Ok((l, self.group.torus_coords(&d), u))
    }

    fn torus_matrix<F: Field>(&self, c: &[F]) -> Matrix<F> {
        self.group.torus(c).expect("factorization yields nonzero torus coordinates")
    }

    /// The extension of `Ad(n_i)` to `Ω̄_σ` on the principal open set
    /// `D = e(−α_i)(t̄) + x·y ≠ 0`.
    pub fn f_i<F: Field>(&self, p: &MixedPoint<F>, i: usize) -> Result<MixedPoint<F>, CalculusError> {
        self.f_i_with_orders(p, i, &self.group.negative_order(), &self.group.positive_order())
    }

    /// As [`Calculus::f_i`], with the outer factors enumerated following the
    /// given orders of `Ψ⁻` and `Ψ⁺` (the simple slots are moved next to the
    /// torus).
    pub fn f_i_with_orders<F: Field>(
        &self,
        p: &MixedPoint<F>,
        i: usize,
        minus_base: &[usize],
        plus_base: &[usize],
    ) -> Result<MixedPoint<F>, CalculusError> {
        if i >= self.group.rank() {
            return Err(ChevalleyError::BadIndex(i).into());
        }
        let g = &self.group;
        let neg = g.simple_root_index(i, true);
        let pos = g.simple_root_index(i, false);
        let mut minus_order: Vec<usize> = minus_base.iter().copied().filter(|&k| k != neg).collect();
        minus_order.push(neg);
        let mut plus_order = vec![pos];
        plus_order.extend(plus_base.iter().copied().filter(|&k| k != pos));

        let xs = g.unipotent_refactor(&p.u_minus, &minus_order)?;
        let ys = g.unipotent_refactor(&p.u_plus, &plus_order)?;
        let x = xs.last().expect("nonempty").clone();
        let y = ys[0].clone();
        let neg_alpha: Vec<i64> = g.root_datum().simple_root(i).iter().map(|v| -v).collect();
        let d = p.chart.evaluate_character(&neg_alpha)? + x.clone() * y.clone();
        if d.is_zero() {
            return Err(CalculusError::OutsideV {
                simple: i,
                report: DomainReport {
                    step: format!("f_{}", i + 1),
                    predicate: "e(-alpha_i)(t) + x*y != 0".into(),
                    holds: false,
                },
            });
        }
        let dinv = d.inv().expect("nonzero");

        let mut new_minus_order = Vec::with_capacity(minus_order.len());
        let mut new_minus = Vec::with_capacity(minus_order.len());
        for (&k, c) in minus_order.iter().zip(&xs).take(minus_order.len() - 1) {
            new_minus_order.push(g.reflect_root(i, k));
            new_minus.push(F::from_int(self.signs.get(i, k)) * c.clone());
        }
        new_minus_order.push(neg);
        new_minus.push(-(y * dinv.clone()));

        let mut new_plus_order = vec![pos];
        let mut new_plus = vec![-(x * dinv)];
        for (&k, c) in plus_order.iter().zip(&ys).skip(1) {
            new_plus_order.push(g.reflect_root(i, k));
            new_plus.push(F::from_int(self.signs.get(i, k)) * c.clone());
        }
        let coroot = g.root_datum().simple_coroot(i);
        Ok(MixedPoint {
            u_minus: g.assemble(&new_minus_order, &new_minus),
            chart: p.chart.coweight_scale(&coroot, &d)?,
            u_plus: g.assemble(&new_plus_order, &new_plus),
        })
    }

    fn apply_chain<F: Field>(
        &self,
        label: &str,
        p: &MixedPoint<F>,
        steps: &[usize],
        trail: &mut Trail,
    ) -> Result<MixedPoint<F>, CalculusError> {
        let mut q = p.clone();
        for (k, &i) in steps.iter().enumerate() {
            let step = format!("{label}[{k}]: f_{}", i + 1);
            match self.f_i(&q, i) {
                Ok(next) => {
                    trail.check(&step, "e(-alpha_i)(t) + x*y != 0", true)?;
                    q = next;
                }
                Err(CalculusError::OutsideV { .. }) => {
                    trail.check(&step, "e(-alpha_i)(t) + x*y != 0", false)?;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(q)
    }

    /// Simple indices in application order for `f = f_{i_m} ∘ ⋯ ∘ f_{i_1}`.
    pub fn f_w0_steps(&self) -> Vec<usize> {
        self.w0_word.iter().rev().copied().collect()
    }

    /// Application order for `f′`, extending conjugation by
    /// `n_0⁻¹ = n_{i_1}³ ⋯ n_{i_m}³`.
    pub fn f_w0_inv_steps(&self) -> Vec<usize> {
        self.w0_word.iter().flat_map(|&i| [i, i, i]).collect()
    }

    /// `f`, extending `Ad(n_0)`.
    pub fn f_w0<F: Field>(&self, p: &MixedPoint<F>) -> Result<MixedPoint<F>, CalculusError> {
        self.f_w0_traced(p, &mut Trail::new())
    }

    pub fn f_w0_traced<F: Field>(
        &self,
        p: &MixedPoint<F>,
        trail: &mut Trail,
    ) -> Result<MixedPoint<F>, CalculusError> {
        self.apply_chain("f", p, &self.f_w0_steps(), trail)
    }

    /// `f′`, extending `Ad(n_0⁻¹)`.
    pub fn f_w0_inv<F: Field>(&self, p: &MixedPoint<F>) -> Result<MixedPoint<F>, CalculusError> {
        self.f_w0_inv_traced(p, &mut Trail::new())
    }

    pub fn f_w0_inv_traced<F: Field>(
        &self,
        p: &MixedPoint<F>,
        trail: &mut Trail,
    ) -> Result<MixedPoint<F>, CalculusError> {
        self.apply_chain("f'", p, &self.f_w0_inv_steps(), trail)
    }

    /// Big cell factorization of `u⁺·t·u⁻`.
    pub fn theta_direct<F: Field>(
        &self,
        u_plus: &Matrix<F>,
        t: &[F],
        u_minus: &Matrix<F>,
    ) -> Result<BigCellTriple<F>, CalculusError> {
        let prod = &(u_plus * &self.group.torus(t)?) * u_minus;
        self.group.big_cell_factor_default(&prod).map_err(not_in_cell)
    }

    pub fn default_anchors(&self) -> Anchors {
        let g = &self.group;
        let ones = |order: &[usize]| vec![Rat::one(); order.len()];
        Anchors {
            minus: g.assemble(&g.negative_order(), &ones(&g.negative_order())),
            plus: g.assemble(&g.positive_order(), &ones(&g.positive_order())),
        }
    }

    fn random_anchors(&self, rng: &mut ChaCha8Rng) -> Anchors {
        let g = &self.group;
        let coords = |order: &[usize], rng: &mut ChaCha8Rng| -> Vec<Rat> {
            order.iter().map(|_| Rat::from_int(rng.random_range(1i64..=9))).collect()
        };
        let neg = g.negative_order();
        let pos = g.positive_order();
        let minus = g.assemble(&neg, &coords(&neg, rng));
        let plus = g.assemble(&pos, &coords(&pos, rng));
        Anchors { minus, plus }
    }

    /// Anchors for which `Θ′(e, λ(0), e)` is defined and equals
    /// `(e, λ(0), e)`, with `λ` the interior cocharacter of `cone`. Tries
    /// the all-ones anchors first, then a seeded search with entries in
    /// `1..=9`.
    pub fn certify_anchors(&self, cone: &Arc<Cone>, budget: usize) -> Result<(Anchors, usize), CalculusError> {
        let lam = cone
            .interior_cocharacter()
            .unwrap_or_else(|_| vec![0; cone.dim()]);
        let base: ChartPoint<Rat> = ChartPoint::limit_point(cone.clone(), &lam)?;
        let target = self.identity_point::<Rat>(cone.clone());
        let target = MixedPoint { chart: base.clone(), ..target };
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for attempt in 0..=budget {
            let anchors = if attempt == 0 {
                self.default_anchors()
            } else {
                self.random_anchors(&mut rng)
            };
            let e = Matrix::identity(self.group.n());
            if let Ok(q) = self.theta_reconstructed(&e, &base, &e, &anchors) {
                if q == target {
                    return Ok((anchors, attempt));
                }
            }
        }
        Err(CalculusError::NoAnchors)
    }

    /// `Θ′`: the three-step reconstruction of the multiplication map, valid
    /// on boundary charts.
    pub fn theta_reconstructed<F: Field>(
        &self,
        u_plus: &Matrix<F>,
        chart: &ChartPoint<F>,
        u_minus: &Matrix<F>,
        anchors: &Anchors,
    ) -> Result<MixedPoint<F>, CalculusError> {
        self.theta_reconstructed_traced(u_plus, chart, u_minus, anchors, &mut Trail::new())
    }

    pub fn theta_reconstructed_traced<F: Field>(
        &self,
        u_plus: &Matrix<F>,
        chart: &ChartPoint<F>,
        u_minus: &Matrix<F>,
        anchors: &Anchors,
        trail: &mut Trail,
    ) -> Result<MixedPoint<F>, CalculusError> {
        let u0m: Matrix<F> = lift(&anchors.minus);
        let u0p: Matrix<F> = lift(&anchors.plus);
        let n0: Matrix<F> = lift(&self.n0);
        let n0_inv = inverse(&n0);

        // first step
        let (um_dot, t_dot, up_dot) = self.split("theta.step1.left", &(u_plus * &inverse(&u0m)), trail)?;
        let (vm_dot, s_dot, vp_dot) = self.split("theta.step1.right", &(&inverse(&u0p) * u_minus), trail)?;
        let tm = self.torus_matrix(&t_dot);
        let tm_inv = inverse(&tm);
        let sm = self.torus_matrix(&s_dot);
        let sm_inv = inverse(&sm);

        // second step
        let ts: Vec<F> = t_dot.iter().zip(&s_dot).map(|(a, b)| a.clone() * b.clone()).collect();
        let inner = MixedPoint {
            u_minus: &(&tm * &u0m) * &tm_inv,
            chart: chart.torus_translate(&ts)?,
            u_plus: &(&sm_inv * &u0p) * &sm,
        };
        let after_f = self.f_w0_traced(&inner, trail)?;
        let left = &(&n0 * &(&(&tm * &up_dot) * &tm_inv)) * &n0_inv;
        let right = &(&n0 * &(&(&sm_inv * &vm_dot) * &sm)) * &n0_inv;
        let outer = MixedPoint {
            u_minus: &left * &after_f.u_minus,
            chart: after_f.chart,
            u_plus: &after_f.u_plus * &right,
        };
        let after_f_inv = self.f_w0_inv_traced(&outer, trail)?;

        // third step
        Ok(MixedPoint {
            u_minus: &um_dot * &after_f_inv.u_minus,
            chart: after_f_inv.chart,
            u_plus: &after_f_inv.u_plus * &vp_dot,
        })
    }

    /// `Θ′` with the all-ones anchors, falling back to seeded random anchors.
    /// The value does not depend on the anchors wherever it is defined.
    pub fn theta_auto<F: Field>(
        &self,
        u_plus: &Matrix<F>,
        chart: &ChartPoint<F>,
        u_minus: &Matrix<F>,
        budget: usize,
        seed: u64,
    ) -> Result<MixedPoint<F>, CalculusError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut last = None;
        for attempt in 0..=budget {
            let anchors = if attempt == 0 {
                self.default_anchors()
            } else {
                self.random_anchors(&mut rng)
            };
            match self.theta_reconstructed(u_plus, chart, u_minus, &anchors) {
                Ok(q) => return Ok(q),
                Err(e) if e.is_domain_failure() => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }

    /// Big cell factorization of `g1·(u⁻tu⁺)·g2⁻¹`.
    pub fn action_direct<F: Field>(
        &self,
        g1: &Matrix<F>,
        p: &MixedPoint<F>,
        g2: &Matrix<F>,
    ) -> Result<BigCellTriple<F>, CalculusError> {
        let omega = self
            .to_group(p)
            .ok_or(ToricError::Malformed("action_direct needs a torus chart".into()))?;
        let prod = &(g1 * &omega) * &inverse(g2);
        self.group.big_cell_factor_default(&prod).map_err(not_in_cell)
    }

    /// The extension `A_σ` of `(g1, ω, g2) ↦ g1·ω·g2⁻¹` to `Ω̄_σ`.
    pub fn action_reconstructed<F: Field>(
        &self,
        g1: &Matrix<F>,
        p: &MixedPoint<F>,
        g2: &Matrix<F>,
    ) -> Result<MixedPoint<F>, CalculusError> {
        self.action_reconstructed_traced(g1, p, g2, &mut Trail::new())
    }

    pub fn action_reconstructed_traced<F: Field>(
        &self,
        g1: &Matrix<F>,
        p: &MixedPoint<F>,
        g2: &Matrix<F>,
        trail: &mut Trail,
    ) -> Result<MixedPoint<F>, CalculusError> {
        let (u1m, t1, u1p) = self.split("action.g1", g1, trail)?;
        self.split("action.g2", g2, trail)?;
        let (h2m, t2_hat, h2p) = self.split("action.g2_inverse", &inverse(g2), trail)?;
        let (u1m_dot, t1_dot, up_dot) = self.split("action.left_product", &(&u1p * &p.u_minus), trail)?;
        let (um_dot, t2_dot, u2p_dot) = self.split("action.right_product", &(&p.u_plus * &h2m), trail)?;

        let t1d = self.torus_matrix(&t1_dot);
        let t1d_inv = inverse(&t1d);
        let t2d = self.torus_matrix(&t2_dot);
        let t2d_inv = inverse(&t2d);
        let coords: Vec<F> = t1_dot.iter().zip(&t2_dot).map(|(a, b)| a.clone() * b.clone()).collect();
        let chart = p.chart.torus_translate(&coords)?;
        let theta_plus = &(&t1d * &up_dot) * &t1d_inv;
        let theta_minus = &(&t2d_inv * &um_dot) * &t2d;
        let q = match self.theta_auto(&theta_plus, &chart, &theta_minus, 16, 0) {
            Err(e) if !e.is_domain_failure() => return Err(e),
            q => q,
        };
        trail.check("action.theta", "theta is defined", q.is_ok())?;
        let q = q.expect("checked");

        let t1m = self.torus_matrix(&t1);
        let t1m_inv = inverse(&t1m);
        let t2h = self.torus_matrix(&t2_hat);
        let t2h_inv = inverse(&t2h);
        let u_minus = &(&u1m * &(&(&t1m * &u1m_dot) * &t1m_inv)) * &(&(&t1m * &q.u_minus) * &t1m_inv);
        let u_plus = &(&(&(&t2h_inv * &q.u_plus) * &t2h) * &(&(&t2h_inv * &u2p_dot) * &t2h)) * &h2p;
        let both: Vec<F> = t1.iter().zip(&t2_hat).map(|(a, b)| a.clone() * b.clone()).collect();
        Ok(MixedPoint {
            u_minus,
            chart: q.chart.torus_translate(&both)?,
            u_plus,
        })
    }

    /// `φ((a1, b1), (a2, b2), p) = A(a1⁻¹, A(a2, p, b2), b1⁻¹)`.
    pub fn phi<F: Field>(
        &self,
        first: (&Matrix<F>, &Matrix<F>),
        second: (&Matrix<F>, &Matrix<F>),
        p: &MixedPoint<F>,
    ) -> Result<MixedPoint<F>, CalculusError> {
        let inner = self.action_reconstructed(second.0, p, second.1)?;
        self.action_reconstructed(&inverse(first.0), &inner, &inverse(first.1))
    }

    /// Search for a witness `(a1, a2)` at which both
    /// `A(a1·g1, ω, a2·g2)` and `A(a1·g1′, ω′, a2·g2′)` are defined, then
    /// compare. The identity witness is tried first.
    pub fn check_equivalence(
        &self,
        a: &Representative,
        b: &Representative,
        budget: usize,
        seed: u64,
    ) -> Equivalence {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.group.n();
        for attempt in 0..budget.max(1) {
            let (a1, a2) = if attempt == 0 {
                (Matrix::identity(n), Matrix::identity(n))
            } else {
                (
                    self.group.random_element(&mut rng, 10),
                    self.group.random_element(&mut rng, 10),
                )
            };
            let left = self.action_reconstructed(&(&a1 * &a.0), &a.1, &(&a2 * &a.2));
            let right = self.action_reconstructed(&(&a1 * &b.0), &b.1, &(&a2 * &b.2));
            if let (Ok(l), Ok(r)) = (left, right) {
                let witness = (a1, a2);
                return if l == r {
                    Equivalence::Equivalent { witness }
                } else {
                    Equivalence::NotEquivalent { witness }
                };
            }
        }
        Equivalence::Inconclusive { attempts: budget.max(1) }
    }

    /// `A(a1·g1, ω, a2·g2)` for a given witness.
    pub fn act_with_witness(
        &self,
        rep: &Representative,
        witness: &(Matrix<Rat>, Matrix<Rat>),
    ) -> Result<MixedPoint<Rat>, CalculusError> {
        self.action_reconstructed(&(&witness.0 * &rep.0), &rep.1, &(&witness.1 * &rep.2))
    }
}

fn not_in_cell(e: ChevalleyError) -> CalculusError {
    match e {
        ChevalleyError::NotInBigCell(k) => CalculusError::NotInBigCell(k),
        other => CalculusError::Chevalley(other),
    }
}
