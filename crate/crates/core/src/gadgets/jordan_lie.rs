//! Rewriting `z rho_{r_1}...rho_{r_k} + h.c.` as nested anticommutators and
//! `i`-commutators, which are Hermitian at every node.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, C64, I, VALIDATION_TOL};

/// Expression tree over generator states. Leaf indices are 0-based.
#[derive(Clone, Debug, PartialEq)]
pub enum JordanLieExpr {
    Leaf(usize),
    /// `{a, b} = ab + ba`
    AntiComm(Box<JordanLieExpr>, Box<JordanLieExpr>),
    /// `i[a, b] = i(ab - ba)`
    ICommutator(Box<JordanLieExpr>, Box<JordanLieExpr>),
    Scale(f64, Box<JordanLieExpr>),
    Sum(Vec<JordanLieExpr>),
}

impl JordanLieExpr {
    pub fn anti(a: Self, b: Self) -> Self {
        Self::AntiComm(Box::new(a), Box::new(b))
    }

    pub fn icomm(a: Self, b: Self) -> Self {
        Self::ICommutator(Box::new(a), Box::new(b))
    }

    pub fn scale(s: f64, e: Self) -> Self {
        if s == 1.0 { e } else { Self::Scale(s, Box::new(e)) }
    }

    /// Largest leaf index, if any.
    pub fn max_leaf(&self) -> Option<usize> {
        match self {
            Self::Leaf(i) => Some(*i),
            Self::AntiComm(a, b) | Self::ICommutator(a, b) => a.max_leaf().max(b.max_leaf()),
            Self::Scale(_, e) => e.max_leaf(),
            Self::Sum(v) => v.iter().filter_map(Self::max_leaf).max(),
        }
    }
}

impl fmt::Display for JordanLieExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Leaf(i) => write!(f, "p{}", i + 1),
            Self::AntiComm(a, b) => write!(f, "{{{a}, {b}}}"),
            Self::ICommutator(a, b) => write!(f, "i[{a}, {b}]"),
            Self::Scale(s, e) => write!(f, "{s}*({e})"),
            Self::Sum(v) => {
                for (n, e) in v.iter().enumerate() {
                    if n > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

/// Expands `z rho_{r_1}...rho_{r_k} + h.c.`.
///
/// Each product splits as `XY = ({X,Y} + [X,Y]) / 2`, left-nested. A nest with
/// `c` commutators is Hermitian for even `c` and anti-Hermitian for odd `c`, so
/// adding the conjugate keeps `2 Re z` or `2i Im z`; rewriting `[.,.] = -i (i[.,.])`
/// leaves the real weights `2 Re z (-1)^{c/2}` and `2 Im z (-1)^{(c-1)/2}`.
pub fn jordan_lie_expand(indices: &[usize], z: C64) -> Result<JordanLieExpr> {
    let (&first, rest) = indices
        .split_first()
        .ok_or_else(|| Error::invalid("index string must be nonempty"))?;
    let k = indices.len();
    let norm = 0.5f64.powi(k as i32 - 1);
    let mut terms = Vec::new();
    for mask in 0u32..(1 << rest.len()) {
        let c = mask.count_ones() as i32;
        let weight = if c % 2 == 0 {
            2.0 * z.re * if (c / 2) % 2 == 0 { 1.0 } else { -1.0 }
        } else {
            2.0 * z.im * if ((c - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 }
        } * norm;
        if weight == 0.0 {
            continue;
        }
        let nest = rest.iter().enumerate().fold(JordanLieExpr::Leaf(first), |acc, (pos, &j)| {
            if mask & (1 << pos) != 0 {
                JordanLieExpr::icomm(acc, JordanLieExpr::Leaf(j))
            } else {
                JordanLieExpr::anti(acc, JordanLieExpr::Leaf(j))
            }
        });
        terms.push(JordanLieExpr::scale(weight, nest));
    }
    Ok(match terms.len() {
        0 => JordanLieExpr::Scale(0.0, Box::new(JordanLieExpr::Leaf(first))),
        1 => terms.pop().expect("one term"),
        _ => JordanLieExpr::Sum(terms),
    })
}

fn eval(expr: &JordanLieExpr, states: &[DensityMatrix]) -> Result<ComplexMatrix> {
    Ok(match expr {
        JordanLieExpr::Leaf(i) => states
            .get(*i)
            .ok_or_else(|| Error::invalid(format!("leaf {} out of range", i + 1)))?
            .matrix()
            .clone(),
        JordanLieExpr::AntiComm(a, b) => ComplexMatrix::anticommutator(&eval(a, states)?, &eval(b, states)?),
        JordanLieExpr::ICommutator(a, b) => {
            ComplexMatrix::commutator(&eval(a, states)?, &eval(b, states)?).scale(I)
        }
        JordanLieExpr::Scale(s, e) => eval(e, states)?.scale_real(*s),
        JordanLieExpr::Sum(v) => {
            let first = v.first().ok_or_else(|| Error::invalid("empty sum"))?;
            let mut acc = eval(first, states)?;
            for e in &v[1..] {
                acc += &eval(e, states)?;
            }
            acc
        }
    })
}

/// Evaluates the tree on concrete states.
pub fn eval_jordan_lie(expr: &JordanLieExpr, states: &[DensityMatrix]) -> Result<ComplexMatrix> {
    if let Some(first) = states.first() {
        if let Some(bad) = states.iter().find(|s| s.dim() != first.dim()) {
            return Err(Error::DimensionMismatch { expected: first.dim(), found: bad.dim() });
        }
    }
    let out = eval(expr, states)?;
    out.require_hermitian(VALIDATION_TOL)?;
    Ok(out)
}

/// `z rho_{r_1}...rho_{r_k} + h.c.` by direct multiplication.
pub fn monomial_plus_adjoint(indices: &[usize], z: C64, states: &[DensityMatrix]) -> Result<ComplexMatrix> {
    let mats = indices
        .iter()
        .map(|&i| {
            states
                .get(i)
                .map(DensityMatrix::matrix)
                .ok_or_else(|| Error::invalid(format!("index {} out of range", i + 1)))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = super::gadget::product_term(&mats, z.arg())?;
    Ok(h.scale_real(2.0 * z.norm()))
}
