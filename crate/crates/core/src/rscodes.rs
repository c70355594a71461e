//! Reed-Solomon codes `RS(P, k−1)` and LRC Reed-Solomon codes built on the
//! curve `y = p(x)`.
//!
//! An LRC-RS code evaluates the space
//! `V = ⊕_{i=0}^{r−2} ⟨1, y, …, y^{l_i}⟩·x^i` at every point of the full
//! fibres of `α ↦ p(α)` (fibres with exactly `r + 1 = deg p` members). On a
//! single fibre `y` is constant, so the restricted code is an RS code of
//! dimension `r − 1`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::codeops::{CodeError, CoordSet, LinearCode};
use crate::galois::{Felt, Field, FieldError, Poly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("evaluation points are not distinct ({0} repeats)")]
    DuplicatePoints(Felt),
    #[error("dimension {k} invalid for {n} points")]
    BadDimension { k: usize, n: usize },
    #[error("no fibre of p(x) has {0} points")]
    NoFullFibres(usize),
    #[error("degree bound δ = {delta} is not below n = {n}")]
    DegreeOverflow { delta: usize, n: usize },
    #[error("l vector has length {got}, expected r − 1 = {expected}")]
    BadLVector { got: usize, expected: usize },
    #[error("p(x) must have degree at least 3, got {0:?}")]
    DegreeTooSmall(Option<usize>),
    #[error("evaluation map is not injective: rank {rank} < dim V = {dim}")]
    NotInjective { rank: usize, dim: usize },
    #[error("message length {got}, expected {expected}")]
    BadMessageLength { got: usize, expected: usize },
    #[error("interpolation needs exactly {expected} positions, got {got}")]
    WrongCount { got: usize, expected: usize },
    #[error("interpolation positions repeat")]
    DuplicatePositions,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// `RS(P, k − 1)`: evaluations of polynomials of degree below `k` at `points`.
#[derive(Debug, Clone)]
pub struct RsSpec {
    field: Arc<Field>,
    points: Vec<Felt>,
    k: usize,
}

impl RsSpec {
    pub fn new(field: Arc<Field>, points: Vec<Felt>, k: usize) -> Result<Self, ConstructionError> {
        let mut seen = vec![false; field.order() as usize];
        for &a in &points {
            let slot = seen
                .get_mut(a.0 as usize)
                .ok_or(FieldError::OutOfRange { value: a.0 as i64, q: field.order() })?;
            if std::mem::replace(slot, true) {
                return Err(ConstructionError::DuplicatePoints(a));
            }
        }
        if k == 0 || k > points.len() {
            return Err(ConstructionError::BadDimension { k, n: points.len() });
        }
        Ok(RsSpec { field, points, k })
    }

    /// All of `F_q` in canonical order.
    pub fn full_line(field: Arc<Field>, k: usize) -> Result<Self, ConstructionError> {
        let points = field.elements().collect();
        Self::new(field, points, k)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn points(&self) -> &[Felt] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Rows are the evaluations of `1, x, …, x^{k−1}`.
    pub fn generator_rows(&self) -> Vec<Vec<Felt>> {
        (0..self.k)
            .map(|e| self.points.iter().map(|&a| self.field.pow(a, e as u64)).collect())
            .collect()
    }

    pub fn code(&self) -> LinearCode {
        LinearCode::from_rows(self.field.clone(), self.n(), self.generator_rows())
            .expect("rows have length n")
    }

    /// Evaluates the message polynomial `b_0 + b_1 x + … + b_{k−1} x^{k−1}`.
    pub fn encode(&self, message: &[Felt]) -> Result<Vec<Felt>, ConstructionError> {
        if message.len() != self.k {
            return Err(ConstructionError::BadMessageLength { got: message.len(), expected: self.k });
        }
        let poly = Poly::new(message.to_vec());
        Ok(self.points.iter().map(|&a| poly.eval(&self.field, a)).collect())
    }

    /// Lagrange interpolation from exactly `k` known coordinates; returns the
    /// message coefficients.
    pub fn interpolate(&self, positions: &CoordSet, values: &[Felt]) -> Result<Vec<Felt>, ConstructionError> {
        if positions.len() != self.k || values.len() != self.k {
            return Err(ConstructionError::WrongCount {
                got: positions.len().max(values.len()),
                expected: self.k,
            });
        }
        if let Some(&index) = positions.indices().iter().find(|&&i| i >= self.n()) {
            return Err(CodeError::IndexOutOfRange { index, n: self.n() }.into());
        }
        let f = &self.field;
        let xs: Vec<Felt> = positions.indices().iter().map(|&i| self.points[i]).collect();
        let mut acc = Poly::zero();
        for (j, (&xj, &yj)) in xs.iter().zip(values).enumerate() {
            let mut basis = Poly::constant(Felt::ONE);
            let mut denom = Felt::ONE;
            for (m, &xm) in xs.iter().enumerate() {
                if m == j {
                    continue;
                }
                basis = basis.mul(f, &Poly::new(vec![f.neg(xm), Felt::ONE]));
                denom = f.mul(denom, f.sub(xj, xm));
            }
            acc = acc.add(f, &basis.scale(f, f.div(yj, denom)?));
        }
        let mut coeffs = acc.coeffs().to_vec();
        coeffs.resize(self.k, Felt::ZERO);
        Ok(coeffs)
    }
}

/// `x^i y^j`, with `y = p(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Monomial {
    pub x_exp: usize,
    pub y_exp: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fibre {
    pub beta: Felt,
    pub members: Vec<Felt>,
}

/// An LRC-RS code from the curve `y = p(x)`.
#[derive(Debug, Clone)]
pub struct LrcRsSpec {
    field: Arc<Field>,
    p_poly: Poly,
    r: usize,
    l: Vec<usize>,
    fibres: Vec<Fibre>,
    points: Vec<Felt>,
    basis: Vec<Monomial>,
    delta: usize,
    rows: Vec<Vec<Felt>>,
}

impl LrcRsSpec {
    pub fn new(field: Arc<Field>, p_poly: Poly, l: Vec<usize>) -> Result<Self, ConstructionError> {
        let deg = p_poly.degree();
        let r = match deg {
            Some(d) if d >= 3 => d - 1,
            _ => return Err(ConstructionError::DegreeTooSmall(deg)),
        };
        if l.len() != r - 1 {
            return Err(ConstructionError::BadLVector { got: l.len(), expected: r - 1 });
        }
        let fibres = full_fibres(&field, &p_poly);
        if fibres.is_empty() {
            return Err(ConstructionError::NoFullFibres(r + 1));
        }
        let points: Vec<Felt> = fibres.iter().flat_map(|fb| fb.members.iter().copied()).collect();
        let n = points.len();
        let delta = l.iter().enumerate().map(|(i, &li)| (r + 1) * li + i).max().unwrap_or(0);
        if delta >= n {
            return Err(ConstructionError::DegreeOverflow { delta, n });
        }
        let basis: Vec<Monomial> = l
            .iter()
            .enumerate()
            .flat_map(|(i, &li)| (0..=li).map(move |j| Monomial { x_exp: i, y_exp: j }))
            .collect();
        let rows: Vec<Vec<Felt>> = basis
            .iter()
            .map(|mono| {
                points
                    .iter()
                    .map(|&a| {
                        let y = p_poly.eval(&field, a);
                        field.mul(field.pow(a, mono.x_exp as u64), field.pow(y, mono.y_exp as u64))
                    })
                    .collect()
            })
            .collect();
        let spec = LrcRsSpec { field, p_poly, r, l, fibres, points, basis, delta, rows };
        let rank = spec.code().dim();
        if rank != spec.basis.len() {
            return Err(ConstructionError::NotInjective { rank, dim: spec.basis.len() });
        }
        Ok(spec)
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn p_poly(&self) -> &Poly {
        &self.p_poly
    }

    /// Local recovery size; `deg p = r + 1`.
    pub fn r(&self) -> usize {
        self.r
    }

    pub fn l(&self) -> &[usize] {
        &self.l
    }

    pub fn fibres(&self) -> &[Fibre] {
        &self.fibres
    }

    pub fn u(&self) -> usize {
        self.fibres.len()
    }

    /// Evaluation points: fibres ordered by `β`, members by value.
    pub fn points(&self) -> &[Felt] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }

    /// `Σ (l_i + 1)`.
    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Lower bound `n − δ` on the minimum distance.
    pub fn goppa_bound(&self) -> usize {
        self.n() - self.delta
    }

    /// Basis monomials in message order (`x`-exponent major).
    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn generator_rows(&self) -> &[Vec<Felt>] {
        &self.rows
    }

    pub fn code(&self) -> LinearCode {
        LinearCode::from_rows(self.field.clone(), self.n(), self.rows.clone()).expect("rows have length n")
    }

    /// Coordinates of the fibre that contains coordinate `i`.
    pub fn fibre_coords(&self, i: usize) -> Result<Vec<usize>, CodeError> {
        if i >= self.n() {
            return Err(CodeError::IndexOutOfRange { index: i, n: self.n() });
        }
        let size = self.r + 1;
        let start = i / size * size;
        Ok((start..start + size).collect())
    }

    pub fn encode(&self, message: &[Felt]) -> Result<Vec<Felt>, ConstructionError> {
        if message.len() != self.k() {
            return Err(ConstructionError::BadMessageLength { got: message.len(), expected: self.k() });
        }
        let f = &self.field;
        let mut out = vec![Felt::ZERO; self.n()];
        for (row, &m) in self.rows.iter().zip(message) {
            for (o, &g) in out.iter_mut().zip(row) {
                *o = f.add(*o, f.mul(m, g));
            }
        }
        Ok(out)
    }
}

/// Fibres of `α ↦ p(α)` with exactly `deg p` members, sorted by `β`.
pub fn full_fibres(field: &Field, p_poly: &Poly) -> Vec<Fibre> {
    let Some(deg) = p_poly.degree() else {
        return Vec::new();
    };
    let mut groups: BTreeMap<Felt, Vec<Felt>> = BTreeMap::new();
    for a in field.elements() {
        groups.entry(p_poly.eval(field, a)).or_default().push(a);
    }
    groups
        .into_iter()
        .filter(|(_, members)| members.len() == deg)
        .map(|(beta, members)| Fibre { beta, members })
        .collect()
}

/// `x^{r+1}` when `(r + 1) | (q − 1)`; its nonzero fibres are then all full.
pub fn suggest_p_poly(field: &Field, r: usize) -> Option<Poly> {
    let q1 = field.order() as usize - 1;
    (r >= 2 && q1.is_multiple_of(r + 1)).then(|| Poly::monomial(Felt::ONE, r + 1))
}
