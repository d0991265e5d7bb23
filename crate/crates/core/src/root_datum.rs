//! Root data from Cartan matrices: the full root set, Weyl group
//! enumeration and the negative Weyl chamber.
//!
//! Conventions: `N` (cocharacters) has the simple coroots as its basis and
//! `M` (characters) the dual basis of fundamental weights, so the pairing is
//! the dot product. With `C[i][j] = ⟨α_j, α_i∨⟩`, the simple root `α_j` has
//! `M`-coordinates equal to column `j` of `C`. For type A this is the weight
//! lattice of `SL_{l+1}`.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::lattice::{dot, neg_vec, primitive_from_rats, IntMatrix, IntVector, Rat};

/// Largest root system accepted (E8 has 240 roots).
pub const MAX_ROOTS: usize = 240;
/// Weyl groups larger than this are not enumerated.
pub const MAX_WEYL_ORDER: usize = 100_000;
pub const MAX_RANK: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootDatumError {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("Cartan matrix is not of finite type (more than {MAX_ROOTS} roots)")]
    NotFiniteType,
    #[error("unsupported type {kind}{rank}")]
    UnsupportedType { kind: String, rank: usize },
    #[error("Weyl group exceeds {MAX_WEYL_ORDER} elements")]
    WeylGroupTooLarge,
    #[error("vector has length {got}, expected rank {expected}")]
    RankMismatch { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    G,
}

impl CartanType {
    pub fn cartan_matrix(self, rank: usize) -> Result<IntMatrix, RootDatumError> {
        let unsupported = || RootDatumError::UnsupportedType {
            kind: format!("{self:?}"),
            rank,
        };
        let ok = match self {
            CartanType::A => rank >= 1,
            CartanType::B | CartanType::C => rank >= 2,
            CartanType::D => rank >= 3,
            CartanType::G => rank == 2,
        };
        if !ok || rank > MAX_RANK {
            return Err(unsupported());
        }
        let mut c = IntMatrix::identity(rank);
        for i in 0..rank {
            c[(i, i)] = 2;
        }
        let chain = |c: &mut IntMatrix, upto: usize| {
            for i in 0..upto.saturating_sub(1) {
                c[(i, i + 1)] = -1;
                c[(i + 1, i)] = -1;
            }
        };
        match self {
            CartanType::A => chain(&mut c, rank),
            CartanType::B => {
                chain(&mut c, rank);
                c[(rank - 1, rank - 2)] = -2;
            }
            CartanType::C => {
                chain(&mut c, rank);
                c[(rank - 2, rank - 1)] = -2;
            }
            CartanType::D => {
                chain(&mut c, rank - 1);
                c[(rank - 1, rank - 3)] = -1;
                c[(rank - 3, rank - 1)] = -1;
            }
            CartanType::G => {
                c[(0, 1)] = -1;
                c[(1, 0)] = -3;
            }
        }
        Ok(c)
    }
}

/// JSON input: `{"type": "A", "rank": 2}` or `{"cartan_matrix": [[2,-1],[-1,2]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum RootDatumSpec {
    Named {
        #[serde(rename = "type")]
        kind: CartanType,
        rank: usize,
    },
    Cartan { cartan_matrix: Vec<Vec<i64>> },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Root {
    /// Coordinates in the basis of simple roots.
    pub coeffs: IntVector,
    /// Coordinates in `M` (fundamental weight basis).
    pub weight: IntVector,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coeffs.iter().sum()
    }

    pub fn is_positive(&self) -> bool {
        self.height() > 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    label: String,
    cartan_type: Option<CartanType>,
    cartan: IntMatrix,
    /// Positive roots sorted by height, then negatives in the same order.
    roots: Vec<Root>,
}

impl RootDatum {
    pub fn named(kind: CartanType, rank: usize) -> Result<Self, RootDatumError> {
        let c = kind.cartan_matrix(rank)?;
        let mut rd = Self::from_cartan(&c)?;
        rd.label = format!("{kind:?}{rank}");
        rd.cartan_type = Some(kind);
        Ok(rd)
    }

    pub fn from_spec(spec: &RootDatumSpec) -> Result<Self, RootDatumError> {
        match spec {
            RootDatumSpec::Named { kind, rank } => Self::named(*kind, *rank),
            RootDatumSpec::Cartan { cartan_matrix } => {
                let l = cartan_matrix.len();
                if l == 0 || cartan_matrix.iter().any(|r| r.len() != l) {
                    return Err(RootDatumError::InvalidCartan("matrix must be square and nonempty".into()));
                }
                Self::from_cartan(&IntMatrix::from_rows(cartan_matrix, l))
            }
        }
    }

    pub fn from_cartan(c: &IntMatrix) -> Result<Self, RootDatumError> {
        let l = c.rows();
        if l == 0 || c.cols() != l {
            return Err(RootDatumError::InvalidCartan("matrix must be square and nonempty".into()));
        }
        if l > MAX_RANK {
            return Err(RootDatumError::InvalidCartan(format!("rank {l} exceeds {MAX_RANK}")));
        }
        for i in 0..l {
            if c[(i, i)] != 2 {
                return Err(RootDatumError::InvalidCartan(format!("diagonal entry {i} is not 2")));
            }
            for j in 0..l {
                if i != j && (c[(i, j)] > 0 || (c[(i, j)] == 0) != (c[(j, i)] == 0)) {
                    return Err(RootDatumError::InvalidCartan(format!(
                        "off-diagonal pair ({i},{j}) violates sign/zero pattern"
                    )));
                }
            }
        }
        let positive = close_positive_roots(c)?;
        let weight_of = |coeffs: &IntVector| -> IntVector {
            (0..l).map(|k| (0..l).map(|j| c[(k, j)] * coeffs[j]).sum()).collect()
        };
        let mut roots: Vec<Root> = positive
            .iter()
            .map(|b| Root { coeffs: b.clone(), weight: weight_of(b) })
            .collect();
        let negatives: Vec<Root> = roots
            .iter()
            .map(|r| Root { coeffs: neg_vec(&r.coeffs), weight: neg_vec(&r.weight) })
            .collect();
        roots.extend(negatives);
        Ok(RootDatum {
            label: "custom".into(),
            cartan_type: None,
            cartan: c.clone(),
            roots,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn cartan_type(&self) -> Option<CartanType> {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.cartan.rows()
    }

    pub fn cartan(&self) -> &IntMatrix {
        &self.cartan
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.roots[..self.roots.len() / 2]
    }

    pub fn negative_roots(&self) -> &[Root] {
        &self.roots[self.roots.len() / 2..]
    }

    /// `α_i` in `M`-coordinates.
    pub fn simple_root(&self, i: usize) -> IntVector {
        self.cartan.col(i)
    }

    /// `α_i∨` in `N`-coordinates.
    pub fn simple_coroot(&self, i: usize) -> IntVector {
        (0..self.rank()).map(|k| i64::from(k == i)).collect()
    }

    pub fn root_index_by_weight(&self, weight: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r.weight == weight)
    }

    fn check_len(&self, v: &[i64]) -> Result<(), RootDatumError> {
        if v.len() != self.rank() {
            return Err(RootDatumError::RankMismatch { expected: self.rank(), got: v.len() });
        }
        Ok(())
    }

    /// `⟨α_i, v⟩ ≤ 0` for every simple root.
    pub fn in_negative_chamber(&self, v: &[i64]) -> Result<bool, RootDatumError> {
        self.check_len(v)?;
        Ok((0..self.rank()).all(|i| dot(&self.simple_root(i), v) <= 0))
    }

    /// Primitive generators of the negative Weyl chamber: the negatives of
    /// the fundamental coweights, scaled into `N`.
    pub fn negative_chamber_rays(&self) -> Vec<IntVector> {
        let l = self.rank();
        let ct = self.cartan.transpose().to_rat();
        (0..l)
            .map(|i| {
                let e: Vec<Rat> = (0..l).map(|k| Rat::from_int(i64::from(k == i))).collect();
                let w = ct.solve(&e).expect("Cartan matrix of finite type is invertible");
                neg_vec(&primitive_from_rats(&w))
            })
            .collect()
    }

    /// `s_i` acting on `M`.
    pub fn reflect_weight(&self, i: usize, m: &[i64]) -> IntVector {
        let a = self.simple_root(i);
        m.iter().zip(&a).map(|(x, y)| x - m[i] * y).collect()
    }

    /// `s_i` acting on `N`.
    pub fn reflect_coweight(&self, i: usize, v: &[i64]) -> IntVector {
        let p = dot(&self.simple_root(i), v);
        let mut out = v.to_vec();
        out[i] -= p;
        out
    }

    /// Matrix of `s_i` on `N` (acting on column vectors).
    pub fn reflection_on_n(&self, i: usize) -> IntMatrix {
        let l = self.rank();
        let cols: Vec<IntVector> = (0..l).map(|j| self.reflect_coweight(i, &self.simple_coroot(j))).collect();
        IntMatrix::from_rows(&cols, l).transpose()
    }

    /// Matrix of `s_i` on `M` (acting on column vectors).
    pub fn reflection_on_m(&self, i: usize) -> IntMatrix {
        let l = self.rank();
        let cols: Vec<IntVector> = (0..l)
            .map(|j| {
                let e: IntVector = (0..l).map(|k| i64::from(k == j)).collect();
                self.reflect_weight(i, &e)
            })
            .collect();
        IntMatrix::from_rows(&cols, l).transpose()
    }

    pub fn weyl_group(&self) -> Result<WeylGroup, RootDatumError> {
        WeylGroup::enumerate(self)
    }
}

/// Closure of the simple roots under simple reflections, in simple-root
/// coordinates. Only positive roots are kept; `s_i` permutes `Ψ⁺ \ {α_i}`.
fn close_positive_roots(c: &IntMatrix) -> Result<Vec<IntVector>, RootDatumError> {
    let l = c.rows();
    let mut seen: Vec<IntVector> = Vec::new();
    let mut queue: VecDeque<IntVector> = VecDeque::new();
    for i in 0..l {
        let e: IntVector = (0..l).map(|k| i64::from(k == i)).collect();
        seen.push(e.clone());
        queue.push_back(e);
    }
    while let Some(beta) = queue.pop_front() {
        for i in 0..l {
            // ⟨β, α_i∨⟩ = Σ_j β_j C[i][j]
            let p: i64 = (0..l).map(|j| beta[j] * c[(i, j)]).sum();
            if p == 0 {
                continue;
            }
            let mut image = beta.clone();
            image[i] -= p;
            if image.iter().all(|&x| x <= 0) {
                // only -α_i can arise from a positive root β = α_i
                continue;
            }
            if image.iter().any(|&x| x < 0) {
                return Err(RootDatumError::NotFiniteType);
            }
            if !seen.contains(&image) {
                seen.push(image.clone());
                if seen.len() * 2 > MAX_ROOTS {
                    return Err(RootDatumError::NotFiniteType);
                }
                queue.push_back(image);
            }
        }
    }
    seen.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    Ok(seen)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    /// Action on `N` (column vectors).
    pub on_n: IntMatrix,
    /// Action on `M` (column vectors).
    pub on_m: IntMatrix,
    /// Reduced word `[i_m, …, i_1]`, meaning `s_{i_m} ⋯ s_{i_1}`.
    pub word: Vec<usize>,
}

impl WeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

/// Full enumeration of a Weyl group by breadth-first search over left
/// multiplication by simple reflections, so stored words are reduced.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    rank: usize,
    gens_n: Vec<IntMatrix>,
    gens_m: Vec<IntMatrix>,
    elements: Vec<WeylElement>,
    longest: usize,
}

impl WeylGroup {
    fn enumerate(rd: &RootDatum) -> Result<Self, RootDatumError> {
        let l = rd.rank();
        let gens_n: Vec<IntMatrix> = (0..l).map(|i| rd.reflection_on_n(i)).collect();
        let gens_m: Vec<IntMatrix> = (0..l).map(|i| rd.reflection_on_m(i)).collect();
        let id = WeylElement {
            on_n: IntMatrix::identity(l),
            on_m: IntMatrix::identity(l),
            word: vec![],
        };
        let mut index: HashMap<IntMatrix, usize> = HashMap::new();
        index.insert(id.on_n.clone(), 0);
        let mut elements = vec![id];
        let mut frontier = 0;
        while frontier < elements.len() {
            for i in 0..l {
                let w = &elements[frontier];
                let on_n = &gens_n[i] * &w.on_n;
                if index.contains_key(&on_n) {
                    continue;
                }
                let on_m = &gens_m[i] * &w.on_m;
                let mut word = vec![i];
                word.extend_from_slice(&w.word);
                index.insert(on_n.clone(), elements.len());
                elements.push(WeylElement { on_n, on_m, word });
                if elements.len() > MAX_WEYL_ORDER {
                    return Err(RootDatumError::WeylGroupTooLarge);
                }
            }
            frontier += 1;
        }
        let longest = elements.len() - 1;
        Ok(WeylGroup { rank: l, gens_n, gens_m, elements, longest })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }

    pub fn generator_on_n(&self, i: usize) -> &IntMatrix {
        &self.gens_n[i]
    }

    pub fn generator_on_m(&self, i: usize) -> &IntMatrix {
        &self.gens_m[i]
    }

    pub fn longest_element(&self) -> &WeylElement {
        &self.elements[self.longest]
    }

    /// A reduced word `[i_m, …, i_1]` for `w0 = s_{i_m} ⋯ s_{i_1}` (0-based).
    pub fn longest_word(&self) -> Vec<usize> {
        self.longest_element().word.clone()
    }

    /// Product of simple reflections on `N` for a word read left to right.
    pub fn evaluate_word_on_n(&self, word: &[usize]) -> IntMatrix {
        word.iter()
            .fold(IntMatrix::identity(self.rank), |acc, &i| &acc * &self.gens_n[i])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(kind: CartanType, rank: usize) -> (usize, usize) {
        let rd = RootDatum::named(kind, rank).unwrap();
        let w = rd.weyl_group().unwrap();
        (rd.roots().len(), w.order())
    }

    #[test]
    fn type_a1() {
        let rd = RootDatum::named(CartanType::A, 1).unwrap();
        assert_eq!(rd.roots().len(), 2);
        assert_eq!(rd.simple_root(0), vec![2]);
        assert_eq!(rd.weyl_group().unwrap().order(), 2);
        assert_eq!(rd.weyl_group().unwrap().longest_word(), vec![0]);
    }

    #[test]
    fn type_a2() {
        let rd = RootDatum::named(CartanType::A, 2).unwrap();
        let pos: Vec<_> = rd.positive_roots().iter().map(|r| r.coeffs.clone()).collect();
        assert_eq!(pos, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        let w = rd.weyl_group().unwrap();
        assert_eq!(w.order(), 6);
        let word = w.longest_word();
        assert_eq!(word.len(), 3);
        assert!(word == vec![0, 1, 0] || word == vec![1, 0, 1]);
    }

    #[test]
    fn orders_of_classical_and_g2() {
        assert_eq!(count(CartanType::A, 3), (12, 24));
        assert_eq!(count(CartanType::B, 2), (8, 8));
        assert_eq!(count(CartanType::C, 3), (18, 48));
        assert_eq!(count(CartanType::D, 4), (24, 192));
        assert_eq!(count(CartanType::G, 2), (12, 12));
        assert_eq!(count(CartanType::B, 4), (32, 384));
    }

    #[test]
    fn longest_word_a3_has_length_six() {
        let w = RootDatum::named(CartanType::A, 3).unwrap().weyl_group().unwrap();
        assert_eq!(w.longest_word().len(), 6);
    }

    #[test]
    fn g2_from_cartan() {
        let rd = RootDatum::from_spec(&RootDatumSpec::Cartan {
            cartan_matrix: vec![vec![2, -1], vec![-3, 2]],
        })
        .unwrap();
        assert_eq!(rd.roots().len(), 12);
    }

    #[test]
    fn affine_is_rejected() {
        let c = IntMatrix::from_slices(&[&[2, -2], &[-2, 2]]);
        assert_eq!(RootDatum::from_cartan(&c), Err(RootDatumError::NotFiniteType));
    }

    #[test]
    fn malformed_cartan_is_rejected() {
        let c = IntMatrix::from_slices(&[&[2, 1], &[-1, 2]]);
        assert!(matches!(RootDatum::from_cartan(&c), Err(RootDatumError::InvalidCartan(_))));
        let c = IntMatrix::from_slices(&[&[2, 0], &[-1, 2]]);
        assert!(matches!(RootDatum::from_cartan(&c), Err(RootDatumError::InvalidCartan(_))));
    }

    #[test]
    fn unsupported_names() {
        assert!(RootDatum::named(CartanType::G, 3).is_err());
        assert!(RootDatum::named(CartanType::B, 1).is_err());
        assert!(RootDatum::named(CartanType::A, 0).is_err());
    }

    #[test]
    fn chamber_membership() {
        let a1 = RootDatum::named(CartanType::A, 1).unwrap();
        assert!(a1.in_negative_chamber(&[-1]).unwrap());
        assert!(!a1.in_negative_chamber(&[1]).unwrap());
        assert!(a1.in_negative_chamber(&[1, 2]).is_err());
        let a2 = RootDatum::named(CartanType::A, 2).unwrap();
        // -(ω1∨ + ω2∨) = -(α1∨ + α2∨)
        assert!(a2.in_negative_chamber(&[-1, -1]).unwrap());
        assert_eq!(a2.negative_chamber_rays(), vec![vec![-2, -1], vec![-1, -2]]);
    }

    #[test]
    fn json_specs() {
        let s: RootDatumSpec = serde_json::from_str(r#"{"type": "A", "rank": 2}"#).unwrap();
        assert_eq!(s, RootDatumSpec::Named { kind: CartanType::A, rank: 2 });
        let s: RootDatumSpec = serde_json::from_str(r#"{"cartan_matrix": [[2,-1],[-3,2]]}"#).unwrap();
        assert!(matches!(s, RootDatumSpec::Cartan { .. }));
        assert!(serde_json::from_str::<RootDatumSpec>(r#"{"type": "Q", "rank": 2}"#).is_err());
    }

    fn all_data() -> Vec<RootDatum> {
        vec![
            RootDatum::named(CartanType::A, 1).unwrap(),
            RootDatum::named(CartanType::A, 2).unwrap(),
            RootDatum::named(CartanType::A, 3).unwrap(),
            RootDatum::named(CartanType::B, 3).unwrap(),
            RootDatum::named(CartanType::C, 2).unwrap(),
            RootDatum::named(CartanType::D, 4).unwrap(),
            RootDatum::named(CartanType::G, 2).unwrap(),
        ]
    }

    #[test]
    fn longest_element_swaps_signs() {
        for rd in all_data() {
            let w = rd.weyl_group().unwrap();
            let w0 = w.longest_element();
            let mut images: Vec<IntVector> = rd
                .positive_roots()
                .iter()
                .map(|r| w0.on_m.mul_vec(&r.weight))
                .collect();
            let mut neg: Vec<IntVector> = rd.negative_roots().iter().map(|r| r.weight.clone()).collect();
            images.sort();
            neg.sort();
            assert_eq!(images, neg, "{}", rd.label());
            assert_eq!(w.evaluate_word_on_n(&w.longest_word()), w0.on_n);
            assert_eq!(w0.length(), rd.positive_roots().len());
        }
    }

    #[test]
    fn weyl_stability_and_involutions() {
        for rd in all_data() {
            let w = rd.weyl_group().unwrap();
            for i in 0..rd.rank() {
                let s = w.generator_on_n(i);
                assert_eq!(s * s, IntMatrix::identity(rd.rank()));
            }
            for el in w.elements() {
                for r in rd.roots() {
                    let img = el.on_m.mul_vec(&r.weight);
                    assert!(rd.root_index_by_weight(&img).is_some(), "{}", rd.label());
                }
            }
        }
    }

    #[test]
    fn reflections_are_contragredient() {
        for rd in all_data() {
            let l = rd.rank();
            let samples: Vec<IntVector> = (0..l)
                .flat_map(|i| {
                    [
                        (0..l).map(|k| if k == i { 3 } else { -1 }).collect::<IntVector>(),
                        (0..l).map(|k| (k as i64) - (i as i64)).collect(),
                    ]
                })
                .collect();
            for i in 0..l {
                for m in &samples {
                    for v in &samples {
                        assert_eq!(
                            dot(m, &rd.reflect_coweight(i, v)),
                            dot(&rd.reflect_weight(i, m), v)
                        );
                    }
                }
            }
        }
    }
}
