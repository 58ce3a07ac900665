//! Exact check of the four local conditions that make `U` unitary.
//!
//! With `D` viewed as one column vector per `(q, σ)` indexed by `(p, τ, d)`:
//!
//! * (a) every column has unit norm;
//! * (b) distinct columns are orthogonal;
//! * (c) for all `(q, σ, τ)`, `(q′, σ′, τ′)`: `Σ_p D(q′,σ′,p,τ′,1)* D(q,σ,p,τ,−1) = 0`;
//! * (d) for the same index pairs: `Σ_{p, d∈{0,1}} D(q′,σ′,p,τ′,d−1)* D(q,σ,p,τ,d) = 0`.
//!
//! (c) covers two heads two cells apart meeting in the middle, (d) two adjacent heads where one
//! stays and the other moves onto it.

use num_complex::Complex;

use super::{LocalTransitionFunction, Move};
use crate::error::{QtmError, Result};
use crate::machine::{Processor, Symbol};
use crate::real::Real;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum WitnessIndex {
    /// `(q, σ)`, for condition (a).
    Column(Processor, Symbol),
    /// `((q, σ), (q′, σ′))`, for condition (b).
    ColumnPair((Processor, Symbol), (Processor, Symbol)),
    /// `((q, σ, τ), (q′, σ′, τ′))`, for conditions (c) and (d).
    WritePair((Processor, Symbol, Symbol), (Processor, Symbol, Symbol)),
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Witness<T> {
    pub index: WitnessIndex,
    /// `|sum − expected|`.
    pub residual: T,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ConditionReport<T> {
    pub passed: bool,
    /// Largest residual over every index checked, violating or not.
    pub max_residual: T,
    pub witnesses: Vec<Witness<T>>,
}

impl<T: Real> ConditionReport<T> {
    fn new() -> Self {
        Self {
            passed: true,
            max_residual: T::zero(),
            witnesses: Vec::new(),
        }
    }

    fn record(&mut self, index: WitnessIndex, residual: T, tolerance: T) {
        if residual > self.max_residual || residual.is_nan() {
            self.max_residual = residual;
        }
        if !(residual <= tolerance) {
            self.passed = false;
            self.witnesses.push(Witness { index, residual });
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct ValidationReport<T> {
    pub tolerance: T,
    pub condition_a: ConditionReport<T>,
    pub condition_b: ConditionReport<T>,
    pub condition_c: ConditionReport<T>,
    pub condition_d: ConditionReport<T>,
}

impl<T: Real> ValidationReport<T> {
    pub fn passed(&self) -> bool {
        self.conditions().iter().all(|(_, c)| c.passed)
    }

    /// `[('a', …), ('b', …), ('c', …), ('d', …)]`.
    pub fn conditions(&self) -> [(char, &ConditionReport<T>); 4] {
        [
            ('a', &self.condition_a),
            ('b', &self.condition_b),
            ('c', &self.condition_c),
            ('d', &self.condition_d),
        ]
    }

    /// Labels of the failing conditions.
    pub fn failed_conditions(&self) -> Vec<char> {
        self.conditions()
            .iter()
            .filter(|(_, c)| !c.passed)
            .map(|(l, _)| *l)
            .collect()
    }
}

/// Dense copy of `D` indexed by `(q, σ, p, τ, d)`.
struct DenseTable<T> {
    nq: usize,
    ns: usize,
    values: Vec<Complex<T>>,
}

impl<T: Real> DenseTable<T> {
    fn new(d_fn: &LocalTransitionFunction<T>) -> Self {
        let nq = d_fn.spec().processor_count();
        let ns = d_fn.spec().symbol_count();
        let mut values = vec![Complex::default(); nq * ns * nq * ns * 3];
        for (key, &amp) in d_fn.entries() {
            let i = Self::index(nq, ns, key.state.index(), key.read.index(), key.next.index(), key.write.index(), key.movement);
            values[i] = amp;
        }
        Self { nq, ns, values }
    }

    fn index(nq: usize, ns: usize, q: usize, s: usize, p: usize, t: usize, m: Move) -> usize {
        (((q * ns + s) * nq + p) * ns + t) * 3 + m.slot()
    }

    fn get(&self, q: usize, s: usize, p: usize, t: usize, m: Move) -> Complex<T> {
        self.values[Self::index(self.nq, self.ns, q, s, p, t, m)]
    }

    fn column(&self, q: usize, s: usize) -> &[Complex<T>] {
        let len = self.nq * self.ns * 3;
        let start = (q * self.ns + s) * len;
        &self.values[start..start + len]
    }
}

/// Evaluates conditions (a)–(d) exactly over the finite index sets, collecting every violation.
pub fn validate<T: Real>(d_fn: &LocalTransitionFunction<T>, tolerance: T) -> Result<ValidationReport<T>> {
    if !(tolerance > T::zero() && tolerance.is_finite()) {
        return Err(QtmError::InvalidTolerance(tolerance.to_f64().unwrap_or(f64::NAN)));
    }
    let table = DenseTable::new(d_fn);
    let (nq, ns) = (table.nq, table.ns);
    let pairs: Vec<(usize, usize)> = (0..nq).flat_map(|q| (0..ns).map(move |s| (q, s))).collect();
    let proc = |q: usize| Processor(q as u16);
    let sym = |s: usize| Symbol(s as u16);

    let mut a = ConditionReport::new();
    for &(q, s) in &pairs {
        let norm: T = table.column(q, s).iter().map(|z| z.norm_sqr()).sum();
        a.record(WitnessIndex::Column(proc(q), sym(s)), (norm - T::one()).abs(), tolerance);
    }

    let mut b = ConditionReport::new();
    for (i, &(q, s)) in pairs.iter().enumerate() {
        for &(q2, s2) in &pairs[i + 1..] {
            let overlap: Complex<T> = table
                .column(q2, s2)
                .iter()
                .zip(table.column(q, s))
                .map(|(x, y)| x.conj() * y)
                .sum();
            b.record(
                WitnessIndex::ColumnPair((proc(q), sym(s)), (proc(q2), sym(s2))),
                overlap.norm(),
                tolerance,
            );
        }
    }

    let triples: Vec<(usize, usize, usize)> = pairs
        .iter()
        .flat_map(|&(q, s)| (0..ns).map(move |t| (q, s, t)))
        .collect();
    let mut c = ConditionReport::new();
    let mut d = ConditionReport::new();
    for &(q, s, t) in &triples {
        for &(q2, s2, t2) in &triples {
            let index = WitnessIndex::WritePair((proc(q), sym(s), sym(t)), (proc(q2), sym(s2), sym(t2)));
            let mut meet = Complex::default();
            let mut adjacent = Complex::default();
            for p in 0..nq {
                meet += table.get(q2, s2, p, t2, Move::Right).conj() * table.get(q, s, p, t, Move::Left);
                adjacent += table.get(q2, s2, p, t2, Move::Left).conj() * table.get(q, s, p, t, Move::Stay);
                adjacent += table.get(q2, s2, p, t2, Move::Stay).conj() * table.get(q, s, p, t, Move::Right);
            }
            c.record(index, meet.norm(), tolerance);
            d.record(index, adjacent.norm(), tolerance);
        }
    }

    Ok(ValidationReport {
        tolerance,
        condition_a: a,
        condition_b: b,
        condition_c: c,
        condition_d: d,
    })
}
