//! Finite-support superpositions of configurations.

use std::collections::HashMap;
use std::hash::{BuildHasherDefault, DefaultHasher};
use std::sync::Arc;

use num_complex::Complex;

use crate::config::Configuration;
use crate::error::{QtmError, Result};
use crate::machine::MachineSpec;
use crate::real::Real;
use crate::tape::Tape;

/// Deviation of `‖ψ‖` from 1 tolerated for a state to count as normalized.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-10;

// Fixed hasher so that iteration order, and hence floating-point summation order, is
// reproducible from run to run.
type AmplitudeMap<T> = HashMap<Configuration, Complex<T>, BuildHasherDefault<DefaultHasher>>;

/// A vector `Σ_C α_C |C⟩` with finitely many non-zero amplitudes.
///
/// Amplitudes of magnitude at or below [`Real::dust`] are dropped after every linear operation.
#[derive(Clone, Debug)]
pub struct QuantumState<T: Real> {
    spec: Arc<MachineSpec>,
    amplitudes: AmplitudeMap<T>,
}

pub(crate) fn same_spec(a: &Arc<MachineSpec>, b: &Arc<MachineSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Exact equality of amplitudes.
impl<T: Real> PartialEq for QuantumState<T> {
    fn eq(&self, other: &Self) -> bool {
        same_spec(&self.spec, &other.spec) && self.amplitudes == other.amplitudes
    }
}

impl<T: Real> QuantumState<T> {
    /// The zero vector.
    pub fn zero(spec: Arc<MachineSpec>) -> Self {
        Self {
            spec,
            amplitudes: AmplitudeMap::default(),
        }
    }

    /// `|C⟩`.
    pub fn basis(spec: Arc<MachineSpec>, config: Configuration) -> Result<Self> {
        config.check(&spec)?;
        let mut state = Self::zero(spec);
        state.amplitudes.insert(config, Complex::new(T::one(), T::zero()));
        Ok(state)
    }

    /// `|q₀⟩|T_in⟩|0⟩`.
    pub fn initial(spec: Arc<MachineSpec>, input: Tape) -> Result<Self> {
        let q0 = spec.initial();
        Self::basis(spec, Configuration::new(q0, input, 0))
    }

    /// Sums the given terms; repeated configurations accumulate.
    pub fn from_terms(
        spec: Arc<MachineSpec>,
        terms: impl IntoIterator<Item = (Configuration, Complex<T>)>,
    ) -> Result<Self> {
        let mut state = Self::zero(spec);
        for (config, amp) in terms {
            config.check(&state.spec)?;
            state.accumulate(config, amp);
        }
        state.prune();
        Ok(state)
    }

    pub fn spec(&self) -> &Arc<MachineSpec> {
        &self.spec
    }

    pub(crate) fn accumulate(&mut self, config: Configuration, amp: Complex<T>) {
        *self.amplitudes.entry(config).or_default() += amp;
    }

    pub(crate) fn insert_raw(&mut self, config: Configuration, amp: Complex<T>) {
        self.amplitudes.insert(config, amp);
    }

    /// Drops amplitudes of magnitude at or below the dust threshold.
    pub(crate) fn prune(&mut self) {
        let dust = T::dust();
        self.amplitudes.retain(|_, a| a.norm() > dust);
    }

    pub fn amplitude(&self, config: &Configuration) -> Complex<T> {
        self.amplitudes.get(config).copied().unwrap_or_default()
    }

    /// Number of stored (non-negligible) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_zero(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Stored terms in unspecified (but reproducible) order.
    pub fn iter(&self) -> impl Iterator<Item = (&Configuration, &Complex<T>)> {
        self.amplitudes.iter()
    }

    /// Stored terms in canonical configuration order.
    pub fn sorted(&self) -> Vec<(&Configuration, Complex<T>)> {
        let mut terms: Vec<_> = self.amplitudes.iter().map(|(c, a)| (c, *a)).collect();
        terms.sort_by(|a, b| a.0.cmp(b.0));
        terms
    }

    pub fn norm_sqr(&self) -> T {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm() - T::one()).abs() <= T::lit(NORMALIZATION_TOLERANCE)
    }

    pub(crate) fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(QtmError::Unnormalized {
                norm: self.norm().to_f64().unwrap_or(f64::NAN),
            })
        }
    }

    fn require_same_spec(&self, other: &Self) -> Result<()> {
        if same_spec(&self.spec, &other.spec) {
            Ok(())
        } else {
            Err(QtmError::SpecMismatch)
        }
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex<T>> {
        self.require_same_spec(other)?;
        let mut acc = Complex::default();
        // Sum in the left operand's order regardless of which side is iterated.
        if self.amplitudes.len() <= other.amplitudes.len() {
            for (c, a) in &self.amplitudes {
                if let Some(b) = other.amplitudes.get(c) {
                    acc += a.conj() * b;
                }
            }
        } else {
            for (c, b) in &other.amplitudes {
                if let Some(a) = self.amplitudes.get(c) {
                    acc += a.conj() * b;
                }
            }
        }
        Ok(acc)
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        let mut out = Self::zero(self.spec.clone());
        for (c, a) in &self.amplitudes {
            out.amplitudes.insert(c.clone(), a * factor);
        }
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, Complex::new(T::one(), T::zero()))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, Complex::new(-T::one(), T::zero()))
    }

    fn combine(&self, other: &Self, weight: Complex<T>) -> Result<Self> {
        self.require_same_spec(other)?;
        let mut out = self.clone();
        for (c, b) in &other.amplitudes {
            out.accumulate(c.clone(), b * weight);
        }
        out.prune();
        Ok(out)
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &Self) -> Result<T> {
        self.require_same_spec(other)?;
        let mut total = T::zero();
        for (c, a) in &self.amplitudes {
            total += (a - other.amplitude(c)).norm_sqr();
        }
        for (c, b) in &other.amplitudes {
            if !self.amplitudes.contains_key(c) {
                total += b.norm_sqr();
            }
        }
        Ok(total.sqrt())
    }

    /// `ψ / ‖ψ‖`; the zero vector is returned unchanged.
    pub fn normalized(&self) -> Self {
        let norm = self.norm();
        if norm == T::zero() {
            return self.clone();
        }
        self.scale(Complex::new(norm.recip(), T::zero()))
    }

    /// Keeps the terms whose configuration satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Configuration) -> bool) -> Self {
        let mut out = Self::zero(self.spec.clone());
        for (c, a) in &self.amplitudes {
            if keep(c) {
                out.amplitudes.insert(c.clone(), *a);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Processor, Symbol};
    use num_complex::Complex64;

    fn spec() -> Arc<MachineSpec> {
        Arc::new(MachineSpec::new(["q0", "qf"], "q0", "qf", ["B", "a", "b"], "B").unwrap())
    }

    fn cfg(q: u16, cells: &[(i64, u16)], head: i64) -> Configuration {
        Configuration::new(
            Processor(q),
            Tape::from_cells(Symbol(0), cells.iter().map(|&(c, s)| (c, Symbol(s)))),
            head,
        )
    }

    #[test]
    fn basis_state_is_normalized_and_orthogonal() {
        let spec = spec();
        let a = QuantumState::<f64>::basis(spec.clone(), cfg(0, &[], 0)).unwrap();
        let b = QuantumState::<f64>::basis(spec.clone(), cfg(0, &[(0, 1)], 0)).unwrap();
        assert_eq!(a.amplitude(&cfg(0, &[], 0)), Complex64::new(1.0, 0.0));
        assert_eq!(a.norm(), 1.0);
        assert_eq!(a.inner_product(&a).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(a.inner_product(&b).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn inner_product_is_linear_in_right_argument() {
        let spec = spec();
        let c = cfg(0, &[], 0);
        let c2 = cfg(1, &[], 3);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let sup = QuantumState::from_terms(
            spec.clone(),
            [(c.clone(), Complex64::new(h, 0.0)), (c2, Complex64::new(h, 0.0))],
        )
        .unwrap();
        let basis = QuantumState::basis(spec, c).unwrap();
        let ip = sup.inner_product(&basis).unwrap();
        assert!((ip - Complex64::new(h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn initial_state_places_head_at_zero() {
        let spec = spec();
        let input = Tape::from_cells(Symbol(0), [(0, Symbol(1)), (1, Symbol(2))]);
        let psi = QuantumState::<f64>::initial(spec.clone(), input.clone()).unwrap();
        assert_eq!(psi.support_len(), 1);
        assert_eq!(psi.amplitude(&Configuration::new(spec.initial(), input, 0)).re, 1.0);
        assert!(psi.is_normalized());
    }

    #[test]
    fn mismatched_specs_are_rejected() {
        let other = Arc::new(MachineSpec::new(["p"], "p", "p", ["B"], "B").unwrap());
        let a = QuantumState::<f64>::basis(spec(), cfg(0, &[], 0)).unwrap();
        let b = QuantumState::<f64>::basis(other, cfg(0, &[], 0)).unwrap();
        assert_eq!(a.inner_product(&b), Err(QtmError::SpecMismatch));
    }

    #[test]
    fn dust_is_dropped() {
        let spec = spec();
        let psi = QuantumState::from_terms(
            spec,
            [
                (cfg(0, &[], 0), Complex64::new(1.0, 0.0)),
                (cfg(0, &[], 1), Complex64::new(1e-16, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(psi.support_len(), 1);
    }

    #[test]
    fn invalid_configuration_is_rejected() {
        assert!(QuantumState::<f64>::basis(spec(), cfg(2, &[], 0)).is_err());
        assert!(QuantumState::<f64>::basis(spec(), cfg(0, &[(0, 7)], 0)).is_err());
    }
}
