//! Brute-force unitarity check on a cyclic tape.
//!
//! The tape is truncated to `N` cells with wrap-around head motion, `U` is written out as an
//! explicit dense matrix, and `U†U` and `UU†` are compared with the identity. Nothing here
//! shares code with the local validator in [`crate::transition`].

use num_complex::Complex;

use crate::error::{QtmError, Result};
use crate::machine::{Processor, Symbol};
use crate::real::Real;
use crate::transition::{LocalTransitionFunction, Move, TransitionKey};

/// Largest basis the oracle will materialize.
pub const MAX_DIMENSION: usize = 10_000;

/// Default cell count for cross-checks.
pub const DEFAULT_CELLS: usize = 4;

/// Basis of `Q × Σ^N × Z_N`, ordered lexicographically by `(q, word, head)` with cell 0 the
/// most significant letter of the word.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct CyclicConfigSpace {
    processors: usize,
    symbols: usize,
    cells: usize,
    words: usize,
}

impl CyclicConfigSpace {
    pub fn new(processors: usize, symbols: usize, cells: usize) -> Result<Self> {
        if cells < 3 {
            return Err(QtmError::TooFewCells(cells));
        }
        let dimension = (symbols as u128)
            .checked_pow(cells as u32)
            .and_then(|w| w.checked_mul(processors as u128))
            .and_then(|d| d.checked_mul(cells as u128))
            .unwrap_or(u128::MAX);
        if dimension > MAX_DIMENSION as u128 {
            return Err(QtmError::DimensionGuard {
                dimension,
                limit: MAX_DIMENSION,
            });
        }
        Ok(Self {
            processors,
            symbols,
            cells,
            words: symbols.pow(cells as u32),
        })
    }

    pub fn for_machine<T: Real>(d_fn: &LocalTransitionFunction<T>, cells: usize) -> Result<Self> {
        Self::new(d_fn.spec().processor_count(), d_fn.spec().symbol_count(), cells)
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn dimension(&self) -> usize {
        self.processors * self.words * self.cells
    }

    pub fn index(&self, processor: Processor, word: &[Symbol], head: usize) -> usize {
        debug_assert_eq!(word.len(), self.cells);
        let w = word
            .iter()
            .fold(0usize, |acc, s| acc * self.symbols + s.index());
        (processor.index() * self.words + w) * self.cells + head
    }

    pub fn config(&self, index: usize) -> (Processor, Vec<Symbol>, usize) {
        let head = index % self.cells;
        let rest = index / self.cells;
        let mut w = rest % self.words;
        let processor = Processor((rest / self.words) as u16);
        let mut word = vec![Symbol(0); self.cells];
        for slot in word.iter_mut().rev() {
            *slot = Symbol((w % self.symbols) as u16);
            w /= self.symbols;
        }
        (processor, word, head)
    }
}

/// Square complex matrix, row-major.
#[derive(Clone, PartialEq, Debug)]
pub struct DenseMatrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> DenseMatrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::default(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.dim + col] = value;
    }

    fn add_to(&mut self, row: usize, col: usize, value: Complex<T>) {
        self.data[row * self.dim + col] += value;
    }

    /// `Σ_k conj(M[k, i]) M[k, j]`.
    pub fn column_inner(&self, i: usize, j: usize) -> Complex<T> {
        (0..self.dim).map(|k| self.get(k, i).conj() * self.get(k, j)).sum()
    }
}

/// `⟨to|U|from⟩` on the cyclic tape: the local matrix element with head positions taken mod `N`.
pub fn build_cyclic_matrix<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    space: &CyclicConfigSpace,
) -> Result<DenseMatrix<T>> {
    let spec = d_fn.spec();
    if space.processors != spec.processor_count() || space.symbols != spec.symbol_count() {
        return Err(QtmError::SpecMismatch);
    }
    let n = space.cells;
    let mut matrix = DenseMatrix::zeros(space.dimension());
    for from in 0..space.dimension() {
        let (q, word, head) = space.config(from);
        let read = word[head];
        for p in spec.processors() {
            for tau in spec.symbols() {
                for movement in Move::ALL {
                    let amp = d_fn.amplitude(&TransitionKey::new(q, read, p, tau, movement));
                    if amp == Complex::default() {
                        continue;
                    }
                    let mut next_word = word.clone();
                    next_word[head] = tau;
                    let next_head = (head as i64 + movement.offset()).rem_euclid(n as i64) as usize;
                    matrix.add_to(space.index(p, &next_word, next_head), from, amp);
                }
            }
        }
    }
    Ok(matrix)
}

/// Max-norm deviation of `M†M` and `MM†` from the identity, and whether it is within `tolerance`.
pub fn is_unitary<T: Real>(matrix: &DenseMatrix<T>, tolerance: T) -> (bool, T) {
    let n = matrix.dim;
    let row_nonzeros: Vec<Vec<usize>> = (0..n)
        .map(|r| (0..n).filter(|&c| matrix.get(r, c) != Complex::default()).collect())
        .collect();
    let col_nonzeros: Vec<Vec<usize>> = (0..n)
        .map(|c| (0..n).filter(|&r| matrix.get(r, c) != Complex::default()).collect())
        .collect();

    // Zero entries contribute nothing to either product, so only non-zero pairs are summed.
    let mut gram = DenseMatrix::<T>::zeros(n);
    for (k, cols) in row_nonzeros.iter().enumerate() {
        for &i in cols {
            let left = matrix.get(k, i).conj();
            for &j in cols {
                gram.add_to(i, j, left * matrix.get(k, j));
            }
        }
    }
    let mut cogram = DenseMatrix::<T>::zeros(n);
    for (k, rows) in col_nonzeros.iter().enumerate() {
        for &i in rows {
            let left = matrix.get(i, k);
            for &j in rows {
                cogram.add_to(i, j, left * matrix.get(j, k).conj());
            }
        }
    }
    let identity = DenseMatrix::<T>::identity(n);
    let deviation = gram
        .data
        .iter()
        .chain(&cogram.data)
        .zip(identity.data.iter().chain(&identity.data))
        .map(|(a, b)| (a - b).norm())
        .fold(T::zero(), |acc, d| if d > acc || d.is_nan() { d } else { acc });
    (deviation <= tolerance, deviation)
}

#[derive(Clone, Copy, PartialEq, Debug)]
pub struct OracleVerdict<T> {
    pub cells: usize,
    pub dimension: usize,
    pub unitary: bool,
    pub deviation: T,
}

/// Builds the cyclic matrix on `cells` cells and checks it.
pub fn certify<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    cells: usize,
    tolerance: T,
) -> Result<OracleVerdict<T>> {
    let space = CyclicConfigSpace::for_machine(d_fn, cells)?;
    let matrix = build_cyclic_matrix(d_fn, &space)?;
    let (unitary, deviation) = is_unitary(&matrix, tolerance);
    Ok(OracleVerdict {
        cells,
        dimension: space.dimension(),
        unitary,
        deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::machine::MachineSpec;
    use std::sync::Arc;

    #[test]
    fn index_is_a_bijection() {
        let space = CyclicConfigSpace::new(2, 3, 4).unwrap();
        assert_eq!(space.dimension(), 2 * 81 * 4);
        for i in 0..space.dimension() {
            let (q, word, head) = space.config(i);
            assert_eq!(space.index(q, &word, head), i);
        }
        let (q, word, head) = space.config(0);
        assert_eq!((q, word, head), (Processor(0), vec![Symbol(0); 4], 0));
        assert_eq!(space.index(Processor(0), &[Symbol(0), Symbol(0), Symbol(0), Symbol(1)], 0), 4);
    }

    #[test]
    fn guards() {
        assert!(matches!(CyclicConfigSpace::new(1, 1, 2), Err(QtmError::TooFewCells(2))));
        assert!(matches!(CyclicConfigSpace::new(2, 3, 8), Err(QtmError::DimensionGuard { .. })));
        assert!(matches!(CyclicConfigSpace::new(2, 2, 64), Err(QtmError::DimensionGuard { .. })));
        assert!(CyclicConfigSpace::new(2, 2, 9).is_ok());
    }

    #[test]
    fn identity_matrix() {
        let d_fn = gallery::identity::<f64>();
        let m = build_cyclic_matrix(&d_fn, &CyclicConfigSpace::for_machine(&d_fn, 3).unwrap()).unwrap();
        assert_eq!(m, DenseMatrix::identity(3));
        assert_eq!(is_unitary(&m, 1e-9), (true, 0.0));
    }

    #[test]
    fn right_mover_is_a_cyclic_shift() {
        let d_fn = gallery::right_mover::<f64>();
        let m = build_cyclic_matrix(&d_fn, &CyclicConfigSpace::for_machine(&d_fn, 3).unwrap()).unwrap();
        for row in 0..3 {
            for col in 0..3 {
                let expected = if row == (col + 1) % 3 { 1.0 } else { 0.0 };
                assert_eq!(m.get(row, col), Complex::new(expected, 0.0));
            }
        }
        let (unitary, deviation) = is_unitary(&m, 1e-9);
        assert!(unitary && deviation <= 1e-15);
    }

    #[test]
    fn head_splitter_columns_collide() {
        let d_fn = gallery::head_splitter::<f64>();
        let m = build_cyclic_matrix(&d_fn, &CyclicConfigSpace::for_machine(&d_fn, 4).unwrap()).unwrap();
        for i in 0..4 {
            assert!((m.column_inner(i, i).re - 1.0).abs() < 1e-12);
            // Heads two cells apart reach both intermediate cells, each contributing 1/2.
            assert!((m.column_inner(i, (i + 2) % 4).re - 1.0).abs() < 1e-12);
            assert!(m.column_inner(i, (i + 1) % 4).norm() < 1e-12);
        }
        let (unitary, deviation) = is_unitary(&m, 1e-9);
        assert!(!unitary);
        assert!(deviation >= 0.5 - 1e-12);
    }

    #[test]
    fn head_splitter_rejected_at_every_size() {
        for cells in 3..=6 {
            assert!(!certify(&gallery::head_splitter::<f64>(), cells, 1e-9).unwrap().unitary);
            assert!(!certify(&gallery::stay_right_splitter::<f64>(), cells, 1e-9).unwrap().unitary);
        }
    }

    #[test]
    fn gallery_valid_machines_certified() {
        for (name, d_fn) in gallery::all::<f64>() {
            let expected = !matches!(name, "head-splitter" | "stay-right-splitter");
            for cells in [3, 4, 5] {
                assert_eq!(certify(&d_fn, cells, 1e-9).unwrap().unitary, expected, "{name} N={cells}");
            }
        }
    }

    /// Left and right moves with a relative phase of `i` cancel on rings of 3 and 4 cells.
    #[test]
    fn short_rings_miss_a_phase_cancellation() {
        let spec = Arc::new(MachineSpec::new(["q"], "q", "q", ["B"], "B").unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let d_fn = LocalTransitionFunction::from_named(
            spec,
            &[("q", "B", "q", "B", 1, Complex::new(h, 0.0)), ("q", "B", "q", "B", -1, Complex::new(0.0, h))],
        )
        .unwrap();
        assert!(!certify(&d_fn, 3, 1e-9).unwrap().unitary);
        assert!(certify(&d_fn, 4, 1e-9).unwrap().unitary);
        for cells in 5..=8 {
            assert!(!certify(&d_fn, cells, 1e-9).unwrap().unitary, "N={cells}");
        }
    }

    #[test]
    fn spec_mismatch() {
        let d_fn = gallery::coin::<f64>();
        let space = CyclicConfigSpace::new(1, 1, 3).unwrap();
        assert!(matches!(build_cyclic_matrix(&d_fn, &space), Err(QtmError::SpecMismatch)));
    }
}
