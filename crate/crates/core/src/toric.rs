//! Points of the affine toric chart `T̄_σ = Spec k[σ∨ ∩ M]`, stored as
//! multiplicative monoid maps on the Hilbert basis of `σ∨ ∩ M`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::lattice::{dot, Field, IntVector, LatticeError, Rat, RatFun};
use crate::polyhedral::Cone;
use crate::root_datum::RootDatum;

/// Multisets of Hilbert basis elements up to this size are compared by the
/// relation validator.
pub const RELATION_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToricError {
    #[error("torus coordinates must be nonzero")]
    ZeroCoordinate,
    #[error("cocharacter {0:?} is not in the cone, so the limit does not exist")]
    LimitDoesNotExist(IntVector),
    #[error("character {0:?} is not in the monoid σ∨ ∩ M")]
    NotInMonoid(IntVector),
    #[error("zero raised to a negative power")]
    ZeroScalar,
    #[error("source cone is not a face of the target cone")]
    NotAFace,
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("no value given for Hilbert basis element {0:?}")]
    MissingValue(IntVector),
    #[error("values violate the relation {lhs:?} = {rhs:?}")]
    RelationViolated { lhs: Vec<IntVector>, rhs: Vec<IntVector> },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("malformed chart point: {0}")]
    Malformed(String),
}

/// A point of `T̄_σ` over the field `F`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartPoint<F: Field> {
    cone: Arc<Cone>,
    values: Vec<F>,
}

/// `m(t) = Π t_j^{m_j}` for torus coordinates `t` in the `N`-basis.
pub fn character_value<F: Field>(t: &[F], m: &[i64]) -> Result<F, ToricError> {
    let mut acc = F::one();
    for (c, &e) in t.iter().zip(m) {
        acc = acc * c.pow(e).ok_or(ToricError::ZeroScalar)?;
    }
    Ok(acc)
}

impl<F: Field> ChartPoint<F> {
    fn check_len(cone: &Cone, v: &[impl Sized]) -> Result<(), ToricError> {
        if v.len() != cone.dim() {
            return Err(ToricError::DimensionMismatch {
                expected: cone.dim(),
                got: v.len(),
            });
        }
        Ok(())
    }

    /// Image of the torus point with coordinates `t`.
    pub fn torus_point(cone: Arc<Cone>, t: &[F]) -> Result<Self, ToricError> {
        Self::check_len(&cone, t)?;
        if t.iter().any(Field::is_zero) {
            return Err(ToricError::ZeroCoordinate);
        }
        let values = cone
            .hilbert()
            .elements()
            .iter()
            .map(|h| character_value(t, h))
            .collect::<Result<_, _>>()?;
        Ok(ChartPoint { cone, values })
    }

    pub fn identity(cone: Arc<Cone>) -> Self {
        let n = cone.hilbert().len();
        ChartPoint {
            cone,
            values: vec![F::one(); n],
        }
    }

    /// `lim_{ε→0} δ(ε)`: value 1 where `⟨h, δ⟩ = 0`, else 0.
    pub fn limit_point(cone: Arc<Cone>, delta: &[i64]) -> Result<Self, ToricError> {
        Self::check_len(&cone, delta)?;
        if !cone.contains(delta) {
            return Err(ToricError::LimitDoesNotExist(delta.to_vec()));
        }
        let values = cone
            .hilbert()
            .elements()
            .iter()
            .map(|h| if dot(h, delta) == 0 { F::one() } else { F::zero() })
            .collect();
        Ok(ChartPoint { cone, values })
    }

    /// Accepts arbitrary values only if they pass the relation validator.
    pub fn from_values(cone: Arc<Cone>, values: Vec<F>) -> Result<Self, ToricError> {
        let expected = cone.hilbert().len();
        if values.len() != expected {
            return Err(ToricError::DimensionMismatch {
                expected,
                got: values.len(),
            });
        }
        let p = ChartPoint { cone, values };
        p.validate()?;
        Ok(p)
    }

    pub fn cone(&self) -> &Arc<Cone> {
        &self.cone
    }

    /// Values aligned with `cone().hilbert().elements()`.
    pub fn values(&self) -> &[F] {
        &self.values
    }

    pub fn value_of(&self, h: &[i64]) -> Option<&F> {
        let idx = self.cone.hilbert().elements().iter().position(|e| e == h)?;
        Some(&self.values[idx])
    }

    pub fn evaluate_character(&self, m: &[i64]) -> Result<F, ToricError> {
        Self::check_len(&self.cone, m)?;
        let coeffs = self
            .cone
            .monoid_decompose(m)
            .map_err(|_| ToricError::NotInMonoid(m.to_vec()))?;
        let mut acc = F::one();
        for (v, &c) in self.values.iter().zip(&coeffs) {
            if c > 0 {
                acc = acc * v.pow(c as i64).expect("nonnegative exponent");
            }
        }
        Ok(acc)
    }

    /// `values'(m) = m(t)·values(m)`.
    pub fn torus_translate(&self, t: &[F]) -> Result<Self, ToricError> {
        Self::check_len(&self.cone, t)?;
        if t.iter().any(Field::is_zero) {
            return Err(ToricError::ZeroCoordinate);
        }
        let values = self
            .cone
            .hilbert()
            .elements()
            .iter()
            .zip(&self.values)
            .map(|(h, v)| Ok(character_value(t, h)? * v.clone()))
            .collect::<Result<_, ToricError>>()?;
        Ok(ChartPoint {
            cone: self.cone.clone(),
            values,
        })
    }

    /// Translate by `δ(d)`: `values'(m) = d^{⟨m, δ⟩}·values(m)`.
    pub fn coweight_scale(&self, delta: &[i64], d: &F) -> Result<Self, ToricError> {
        Self::check_len(&self.cone, delta)?;
        if d.is_zero() {
            return Err(ToricError::ZeroScalar);
        }
        let values = self
            .cone
            .hilbert()
            .elements()
            .iter()
            .zip(&self.values)
            .map(|(h, v)| d.pow(dot(h, delta)).expect("nonzero base") * v.clone())
            .collect();
        Ok(ChartPoint {
            cone: self.cone.clone(),
            values,
        })
    }

    /// Push forward along `T̄_τ ⊂ T̄_σ` for a face `τ` of `σ`.
    pub fn chart_inclusion(&self, sigma: Arc<Cone>) -> Result<ChartPoint<F>, ToricError> {
        if !sigma.is_face(&self.cone) {
            return Err(ToricError::NotAFace);
        }
        let values = sigma
            .hilbert()
            .elements()
            .iter()
            .map(|h| self.evaluate_character(h))
            .collect::<Result<_, _>>()?;
        Ok(ChartPoint {
            cone: sigma,
            values,
        })
    }

    /// `(−α_i)` evaluated at the point, for each simple root.
    pub fn wonderful_coords(&self, rd: &RootDatum) -> Result<Vec<F>, ToricError> {
        (0..rd.rank())
            .map(|i| {
                let neg: IntVector = rd.simple_root(i).iter().map(|x| -x).collect();
                self.evaluate_character(&neg)
            })
            .collect()
    }

    /// Zero on every Hilbert element that does not vanish on the cone.
    pub fn in_closed_orbit(&self) -> bool {
        self.cone
            .hilbert()
            .elements()
            .iter()
            .zip(&self.values)
            .all(|(h, v)| self.cone.rays().iter().all(|r| dot(h, r) == 0) || v.is_zero())
    }

    /// Torus coordinates `t` with `values(h) = h(t)`, if this is a torus
    /// point. Each basis character `e_k` is written as `(e_k + N·u) − N·u`
    /// for `u` the sum of the Hilbert basis, which is interior to `σ∨`.
    pub fn torus_coordinates(&self) -> Option<Vec<F>> {
        if !self.is_torus_point() {
            return None;
        }
        let dim = self.cone.dim();
        let elements = self.cone.hilbert().elements();
        let u: IntVector = (0..dim).map(|j| elements.iter().map(|h| h[j]).sum()).collect();
        let scale = self
            .cone
            .rays()
            .iter()
            .flat_map(|r| r.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0);
        let chi_u = self.evaluate_character(&u).ok()?;
        let denom = chi_u.pow(scale)?;
        (0..dim)
            .map(|k| {
                let m: IntVector = (0..dim)
                    .map(|j| i64::from(j == k) + scale * u[j])
                    .collect();
                self.evaluate_character(&m).ok()?.checked_div(&denom)
            })
            .collect()
    }

    pub fn is_torus_point(&self) -> bool {
        self.values.iter().all(|v| !v.is_zero())
    }

    pub fn map_values<G: Field, E>(
        &self,
        f: impl Fn(&F) -> Result<G, E>,
    ) -> Result<ChartPoint<G>, E> {
        Ok(ChartPoint {
            cone: self.cone.clone(),
            values: self.values.iter().map(f).collect::<Result<_, _>>()?,
        })
    }

    /// Checks every binomial relation among multisets of Hilbert elements of
    /// size at most [`RELATION_DEGREE`].
    pub fn validate(&self) -> Result<(), ToricError> {
        let elements = self.cone.hilbert().elements();
        let mut seen: BTreeMap<IntVector, (Vec<usize>, F)> = BTreeMap::new();
        let dim = self.cone.dim();
        let mut stack: Vec<(Vec<usize>, IntVector, F)> = vec![(vec![], vec![0; dim], F::one())];
        while let Some((ms, weight, prod)) = stack.pop() {
            match seen.get(&weight) {
                Some((other, val)) => {
                    if *val != prod {
                        let name = |s: &[usize]| s.iter().map(|&i| elements[i].clone()).collect();
                        return Err(ToricError::RelationViolated {
                            lhs: name(&ms),
                            rhs: name(other),
                        });
                    }
                }
                None => {
                    seen.insert(weight.clone(), (ms.clone(), prod.clone()));
                }
            }
            if ms.len() == RELATION_DEGREE {
                continue;
            }
            let start = ms.last().copied().unwrap_or(0);
            for k in start..elements.len() {
                let mut next = ms.clone();
                next.push(k);
                let w: IntVector = weight.iter().zip(&elements[k]).map(|(a, b)| a + b).collect();
                stack.push((next, w, prod.clone() * self.values[k].clone()));
            }
        }
        Ok(())
    }

    /// `{"cone": rays, "values": [[h, "value"], ...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "cone": self.cone.rays(),
            "values": self
                .cone
                .hilbert()
                .elements()
                .iter()
                .zip(&self.values)
                .map(|(h, v)| json!([h, v.to_string()]))
                .collect::<Vec<_>>(),
        })
    }
}

impl ChartPoint<RatFun> {
    /// Specialize at `ε = 0`.
    pub fn evaluate_at_zero(&self) -> Result<ChartPoint<Rat>, ToricError> {
        self.map_values(|v| v.evaluate_at_zero().map_err(ToricError::from))
    }
}

impl ChartPoint<Rat> {
    pub fn to_ratfun(&self) -> ChartPoint<RatFun> {
        self.map_values::<RatFun, ToricError>(|v| Ok(RatFun::from_rat(v)))
            .expect("infallible")
    }

    /// Parse the JSON form; values are checked by the relation validator.
    pub fn from_json(v: &Value) -> Result<Self, ToricError> {
        let rays: Vec<IntVector> = serde_json::from_value(v["cone"].clone())
            .map_err(|e| ToricError::Malformed(e.to_string()))?;
        let pairs: Vec<(IntVector, Rat)> = serde_json::from_value(v["values"].clone())
            .map_err(|e| ToricError::Malformed(e.to_string()))?;
        let dim = rays
            .first()
            .map(Vec::len)
            .or_else(|| pairs.first().map(|(h, _)| h.len()))
            .ok_or_else(|| ToricError::Malformed("cannot infer lattice rank".into()))?;
        let cone = Arc::new(
            Cone::new(dim, &rays).map_err(|e| ToricError::Malformed(e.to_string()))?,
        );
        let values = cone
            .hilbert()
            .elements()
            .iter()
            .map(|h| {
                pairs
                    .iter()
                    .find(|(k, _)| k == h)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| ToricError::MissingValue(h.clone()))
            })
            .collect::<Result<_, _>>()?;
        ChartPoint::from_values(cone, values)
    }
}
