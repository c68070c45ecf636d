//! Dense complex state vectors over a composite Hilbert space.
//!
//! A [`SpaceLayout`] names the tensor factors and fixes a row-major
//! flat-index convention; [`StateVector`] carries the amplitudes. All
//! operations are pure and return new values.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::{EPS_NORM, EPS_UNITARY, EPS_ZERO};

/// Canonical factor labels for the protocol layout.
pub const ATOM1: &str = "atom1";
pub const ATOM2: &str = "atom2";
pub const CAV1: &str = "cav1";
pub const CAV2: &str = "cav2";

/// Atomic basis convention: index 0 is the excited state |↑⟩.
pub const ATOM_UP: usize = 0;
/// Atomic basis convention: index 1 is the ground state |↓⟩.
pub const ATOM_DOWN: usize = 1;

/// One tensor factor: a label and its dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub label: String,
    pub dim: usize,
}

/// Ordered list of tensor factors with row-major index arithmetic.
///
/// The flat index of a multi-index `(i_0, ..., i_{k-1})` is
/// `((i_0 * d_1 + i_1) * d_2 + i_2) * ...`, i.e. the *last* factor varies
/// fastest. Every module in this crate uses one canonical ordering,
/// `(atom1, atom2, cav1, cav2)`, produced by [`SpaceLayout::canonical`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceLayout {
    factors: Vec<Factor>,
}

impl SpaceLayout {
    /// Build a layout from `(label, dim)` pairs.
    ///
    /// Errors on a repeated label or a zero dimension.
    pub fn new<L: Into<String>>(factors: impl IntoIterator<Item = (L, usize)>) -> Result<Self> {
        let factors: Vec<Factor> = factors
            .into_iter()
            .map(|(label, dim)| Factor {
                label: label.into(),
                dim,
            })
            .collect();
        for (k, f) in factors.iter().enumerate() {
            if f.dim == 0 {
                return Err(Error::ParameterRange {
                    name: "factor dim",
                    value: 0.0,
                    range: "[1, ∞)",
                });
            }
            if factors[..k].iter().any(|g| g.label == f.label) {
                return Err(Error::LabelCollision(f.label.clone()));
            }
        }
        Ok(Self { factors })
    }

    /// Single-factor layout.
    pub fn single(label: impl Into<String>, dim: usize) -> Result<Self> {
        Self::new([(label.into(), dim)])
    }

    /// The protocol layout `[atom1:2, atom2:2, cav1:cutoff+1, cav2:cutoff+1]`.
    pub fn canonical(cutoff: usize) -> Self {
        Self::new([
            (ATOM1, 2),
            (ATOM2, 2),
            (CAV1, cutoff + 1),
            (CAV2, cutoff + 1),
        ])
        .expect("canonical layout is well-formed")
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Product of all factor dimensions.
    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|f| f.dim).product()
    }

    /// Position of a label in the factor list.
    pub fn position(&self, label: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|f| f.label == label)
            .ok_or_else(|| Error::UnknownFactor(label.to_string()))
    }

    /// Dimension of the named factor.
    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.factors[self.position(label)?].dim)
    }

    /// Row-major strides, one per factor.
    pub fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.factors.len()];
        for k in (0..self.factors.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.factors[k + 1].dim;
        }
        s
    }

    /// Flat index of a multi-index. Panics on a malformed multi-index;
    /// callers own the bounds.
    pub fn flatten(&self, multi: &[usize]) -> usize {
        assert_eq!(multi.len(), self.factors.len(), "multi-index arity");
        let mut flat = 0;
        for (i, f) in multi.iter().zip(&self.factors) {
            debug_assert!(*i < f.dim, "index {} out of bounds for `{}`", i, f.label);
            flat = flat * f.dim + i;
        }
        flat
    }

    /// Multi-index of a flat index.
    pub fn unflatten(&self, mut flat: usize) -> Vec<usize> {
        let mut multi = vec![0usize; self.factors.len()];
        for k in (0..self.factors.len()).rev() {
            multi[k] = flat % self.factors[k].dim;
            flat /= self.factors[k].dim;
        }
        multi
    }

    /// Concatenation of two layouts; errors on a label collision.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        Self::new(
            self.factors
                .iter()
                .chain(&other.factors)
                .map(|f| (f.label.clone(), f.dim)),
        )
    }

    fn describe(&self) -> String {
        self.factors
            .iter()
            .map(|f| format!("{}:{}", f.label, f.dim))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Dense complex amplitude vector over a [`SpaceLayout`].
///
/// Operations that produce unnormalized vectors say so; everything else
/// keeps the squared norm within `EPS_NORM` of one.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    layout: SpaceLayout,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Wrap an amplitude vector; errors if the length does not match the layout.
    pub fn new(layout: SpaceLayout, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != layout.total_dim() {
            return Err(Error::AmplitudeLength {
                expected: layout.total_dim(),
                got: amps.len(),
            });
        }
        Ok(Self { layout, amps })
    }

    /// Basis ket |multi⟩: amplitude one at the given multi-index.
    pub fn basis(layout: SpaceLayout, multi: &[usize]) -> Result<Self> {
        for (i, f) in multi.iter().zip(layout.factors()) {
            if *i >= f.dim {
                return Err(Error::IndexOutOfRange {
                    label: f.label.clone(),
                    index: *i,
                    dim: f.dim,
                });
            }
        }
        let mut amps = vec![Complex64::ZERO; layout.total_dim()];
        let flat = layout.flatten(multi);
        amps[flat] = Complex64::ONE;
        Ok(Self { layout, amps })
    }

    pub fn layout(&self) -> &SpaceLayout {
        &self.layout
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude at a multi-index.
    pub fn amplitude(&self, multi: &[usize]) -> Complex64 {
        self.amps[self.layout.flatten(multi)]
    }

    /// Squared norm Σ|c_i|².
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Whether the squared norm sits within `EPS_NORM` of one.
    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= EPS_NORM
    }

    /// Rescale to unit norm; errors on a numerically zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 < EPS_ZERO {
            return Err(Error::ZeroProbability { prob: n2 });
        }
        let inv = 1.0 / n2.sqrt();
        Ok(Self {
            layout: self.layout.clone(),
            amps: self.amps.iter().map(|c| c * inv).collect(),
        })
    }

    /// Scalar multiple of the state (unnormalized in general).
    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            layout: self.layout.clone(),
            amps: self.amps.iter().map(|c| c * factor).collect(),
        }
    }

    /// Elementwise sum with another state over the same layout (unnormalized
    /// in general).
    pub fn add(&self, other: &Self) -> Result<Self> {
        check_same_layout(self, other)?;
        Ok(Self {
            layout: self.layout.clone(),
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Sub-state on the remaining factors, with the given factors held at
    /// fixed basis indices. The result is unnormalized: its squared norm is
    /// the weight the state carries on that slice.
    pub fn restrict(&self, fixed: &[Projector]) -> Result<Self> {
        for p in fixed {
            p.check(&self.layout)?;
        }
        let fixed_pos: Vec<usize> = fixed
            .iter()
            .map(|p| self.layout.position(&p.factor_label))
            .collect::<Result<_>>()?;
        let strides = self.layout.strides();
        let base: usize = fixed
            .iter()
            .zip(&fixed_pos)
            .map(|(p, &pos)| p.basis_index * strides[pos])
            .sum();

        let kept: Vec<usize> = (0..self.layout.factors.len())
            .filter(|k| !fixed_pos.contains(k))
            .collect();
        let sub_layout = SpaceLayout::new(kept.iter().map(|&k| {
            (
                self.layout.factors[k].label.clone(),
                self.layout.factors[k].dim,
            )
        }))?;
        let mut amps = Vec::with_capacity(sub_layout.total_dim());
        for j in 0..sub_layout.total_dim() {
            let sub_multi = sub_layout.unflatten(j);
            let offset: usize = sub_multi
                .iter()
                .zip(&kept)
                .map(|(i, &k)| i * strides[k])
                .sum();
            amps.push(self.amps[base + offset]);
        }
        StateVector::new(sub_layout, amps)
    }
}

/// Projector onto one basis index of one factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Projector {
    pub factor_label: String,
    pub basis_index: usize,
}

impl Projector {
    pub fn new(factor_label: impl Into<String>, basis_index: usize) -> Self {
        Self {
            factor_label: factor_label.into(),
            basis_index,
        }
    }

    fn check(&self, layout: &SpaceLayout) -> Result<()> {
        let dim = layout.dim_of(&self.factor_label)?;
        if self.basis_index >= dim {
            return Err(Error::IndexOutOfRange {
                label: self.factor_label.clone(),
                index: self.basis_index,
                dim,
            });
        }
        Ok(())
    }
}

fn check_same_layout(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.layout != b.layout {
        return Err(Error::LayoutMismatch(
            a.layout.describe(),
            b.layout.describe(),
        ));
    }
    Ok(())
}

/// Tensor product a ⊗ b. The result's layout is the concatenation and the
/// amplitude at `(i, j)` is `a_i · b_j`.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let layout = a.layout.concat(&b.layout)?;
    let mut amps = Vec::with_capacity(layout.total_dim());
    for ai in &a.amps {
        for bj in &b.amps {
            amps.push(ai * bj);
        }
    }
    StateVector::new(layout, amps)
}

/// Inner product ⟨a|b⟩ = Σ conj(a_i)·b_i over identical layouts.
pub fn inner(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    check_same_layout(a, b)?;
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(ai, bi)| ai.conj() * bi)
        .sum())
}

/// Squared overlap |⟨a|b⟩|², invariant under a global phase on either state.
pub fn squared_overlap(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(inner(a, b)?.norm_sqr())
}

/// Project a normalized state onto fixed basis indices of the named factors.
///
/// Returns the outcome probability and the renormalized post-measurement
/// state. The layout is unchanged: projected factors stay in place, pinned to
/// their measured index. Errors if the input is not normalized, if the
/// outcome probability is below `EPS_ZERO`, or if two projectors name the
/// same factor.
pub fn project(state: &StateVector, projs: &[Projector]) -> Result<(f64, StateVector)> {
    if !state.is_normalized() {
        return Err(Error::NotNormalized {
            norm_sqr: state.norm_sqr(),
        });
    }
    for (k, p) in projs.iter().enumerate() {
        p.check(&state.layout)?;
        if projs[..k].iter().any(|q| q.factor_label == p.factor_label) {
            return Err(Error::LabelCollision(p.factor_label.clone()));
        }
    }
    let positions: Vec<usize> = projs
        .iter()
        .map(|p| state.layout.position(&p.factor_label))
        .collect::<Result<_>>()?;

    let mut amps = vec![Complex64::ZERO; state.amps.len()];
    let mut prob = 0.0;
    for (flat, amp) in state.amps.iter().enumerate() {
        let multi = state.layout.unflatten(flat);
        let selected = positions
            .iter()
            .zip(projs)
            .all(|(&pos, p)| multi[pos] == p.basis_index);
        if selected {
            prob += amp.norm_sqr();
            amps[flat] = *amp;
        }
    }
    if prob < EPS_ZERO {
        return Err(Error::ZeroProbability { prob });
    }
    let inv = Complex64::from(1.0 / prob.sqrt());
    let collapsed = StateVector::new(state.layout.clone(), amps)?.scaled(inv);
    Ok((prob, collapsed))
}

/// Maximum absolute entry of U†U − I.
pub fn unitarity_deviation(u: &Array2<Complex64>) -> f64 {
    let n = u.nrows();
    let udag = u.t().mapv(|z| z.conj());
    let prod = udag.dot(u);
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j {
                Complex64::ONE
            } else {
                Complex64::ZERO
            };
            worst = worst.max((prod[[i, j]] - expect).norm());
        }
    }
    worst
}

/// Apply a unitary on the named factors, identity elsewhere.
///
/// The operator's basis is the row-major product of the named factors *in
/// the order given*. The input must pass a unitarity check
/// (`unitarity_deviation < EPS_UNITARY`); the norm of the state is then
/// preserved to roundoff.
pub fn apply_on_factors(
    state: &StateVector,
    labels: &[&str],
    u: &Array2<Complex64>,
) -> Result<StateVector> {
    let positions: Vec<usize> = labels
        .iter()
        .map(|l| state.layout.position(l))
        .collect::<Result<_>>()?;
    for (k, pos) in positions.iter().enumerate() {
        if positions[..k].contains(pos) {
            return Err(Error::LabelCollision(labels[k].to_string()));
        }
    }
    let target_dims: Vec<usize> = positions
        .iter()
        .map(|&p| state.layout.factors[p].dim)
        .collect();
    let block_dim: usize = target_dims.iter().product();
    if u.nrows() != block_dim || u.ncols() != block_dim {
        return Err(Error::DimensionMismatch {
            expected: block_dim,
            got: u.nrows(),
        });
    }
    let deviation = unitarity_deviation(u);
    if deviation >= EPS_UNITARY {
        return Err(Error::NotUnitary { deviation });
    }

    let strides = state.layout.strides();
    // Flat offset of each operator basis index, row-major over `labels`.
    let mut block_offsets = vec![0usize; block_dim];
    for (j, offset) in block_offsets.iter_mut().enumerate() {
        let mut rem = j;
        for k in (0..target_dims.len()).rev() {
            let idx = rem % target_dims[k];
            rem /= target_dims[k];
            *offset += idx * strides[positions[k]];
        }
    }
    // Enumerate the untouched factors' joint indices as base offsets.
    let rest: Vec<usize> = (0..state.layout.factors.len())
        .filter(|k| !positions.contains(k))
        .collect();
    let rest_dim: usize = rest.iter().map(|&k| state.layout.factors[k].dim).product();

    let mut amps = state.amps.clone();
    let mut block_in = vec![Complex64::ZERO; block_dim];
    for r in 0..rest_dim {
        let mut rem = r;
        let mut base = 0usize;
        for &k in rest.iter().rev() {
            let dim = state.layout.factors[k].dim;
            base += (rem % dim) * strides[k];
            rem /= dim;
        }
        for (j, &off) in block_offsets.iter().enumerate() {
            block_in[j] = amps[base + off];
        }
        for (i, &off) in block_offsets.iter().enumerate() {
            let mut acc = Complex64::ZERO;
            for (j, amp) in block_in.iter().enumerate() {
                acc += u[[i, j]] * amp;
            }
            amps[base + off] = acc;
        }
    }
    StateVector::new(state.layout.clone(), amps)
}
