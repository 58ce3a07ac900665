//! Bi-infinite tapes with finitely many non-blank cells.

use std::fmt;

use crate::error::Result;
use crate::machine::{MachineSpec, Symbol};

/// Tape contents `T`, with `T(m) = B` outside a finite window.
///
/// Stored in canonical form: the window `[origin, origin + cells.len())` is trimmed so that its
/// first and last cells are non-blank, and the empty tape has `origin = 0`. Structural equality is
/// therefore equality of the functions `m ↦ T(m)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tape {
    blank: Symbol,
    origin: i64,
    cells: Vec<Symbol>,
}

impl Tape {
    /// The all-blank tape.
    pub fn new(blank: Symbol) -> Self {
        Self {
            blank,
            origin: 0,
            cells: Vec::new(),
        }
    }

    /// Builds a tape from `(cell, symbol)` pairs; later pairs overwrite earlier ones.
    pub fn from_cells(blank: Symbol, cells: impl IntoIterator<Item = (i64, Symbol)>) -> Self {
        let mut tape = Self::new(blank);
        for (cell, symbol) in cells {
            tape.set(cell, symbol);
        }
        tape
    }

    pub fn blank_symbol(&self) -> Symbol {
        self.blank
    }

    /// `T(m)`.
    pub fn read(&self, cell: i64) -> Symbol {
        cell.checked_sub(self.origin)
            .and_then(|offset| usize::try_from(offset).ok())
            .and_then(|offset| self.cells.get(offset).copied())
            .unwrap_or(self.blank)
    }

    /// Returns `T` with `symbol` written at `cell`, rejecting symbols outside `Σ`.
    pub fn write(&self, spec: &MachineSpec, cell: i64, symbol: Symbol) -> Result<Tape> {
        spec.check_symbol(symbol)?;
        let mut out = self.clone();
        out.set(cell, symbol);
        Ok(out)
    }

    /// In-place write without alphabet checking. Writing the blank erases the cell.
    pub fn set(&mut self, cell: i64, symbol: Symbol) {
        if self.cells.is_empty() {
            if symbol != self.blank {
                self.origin = cell;
                self.cells.push(symbol);
            }
            return;
        }
        let end = self.origin + self.cells.len() as i64;
        if cell < self.origin {
            if symbol == self.blank {
                return;
            }
            let gap = (self.origin - cell) as usize;
            self.cells
                .splice(0..0, std::iter::repeat_n(self.blank, gap));
            self.cells[0] = symbol;
            self.origin = cell;
        } else if cell >= end {
            if symbol == self.blank {
                return;
            }
            let gap = (cell - end) as usize;
            self.cells.extend(std::iter::repeat_n(self.blank, gap));
            self.cells.push(symbol);
        } else {
            self.cells[(cell - self.origin) as usize] = symbol;
            if symbol == self.blank {
                self.trim();
            }
        }
    }

    fn trim(&mut self) {
        let blank = self.blank;
        match self.cells.iter().position(|&s| s != blank) {
            None => {
                self.cells.clear();
                self.origin = 0;
            }
            Some(first) => {
                let last = self.cells.iter().rposition(|&s| s != blank).unwrap();
                self.cells.truncate(last + 1);
                self.cells.drain(..first);
                self.origin += first as i64;
            }
        }
    }

    /// Non-blank cells in increasing cell order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Symbol)> + '_ {
        let blank = self.blank;
        self.cells
            .iter()
            .enumerate()
            .filter(move |(_, &s)| s != blank)
            .map(move |(i, &s)| (self.origin + i as i64, s))
    }

    /// Number of non-blank cells.
    pub fn len(&self) -> usize {
        self.iter().count()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Smallest and largest non-blank cell.
    pub fn bounds(&self) -> Option<(i64, i64)> {
        (!self.cells.is_empty()).then(|| (self.origin, self.origin + self.cells.len() as i64 - 1))
    }

    /// Renders the tape with symbol names, e.g. `{0:a, 2:b}`.
    pub fn display<'a>(&'a self, spec: &'a MachineSpec) -> impl fmt::Display + 'a {
        TapeDisplay { tape: self, spec }
    }
}

impl fmt::Debug for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.iter().map(|(c, s)| (c, s.0))).finish()
    }
}

struct TapeDisplay<'a> {
    tape: &'a Tape,
    spec: &'a MachineSpec,
}

impl fmt::Display for TapeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (cell, symbol)) in self.tape.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{cell}:{}", self.spec.symbol_name(symbol))?;
        }
        f.write_str("}")
    }
}
