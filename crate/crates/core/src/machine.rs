//! Symbol sets of a machine: processor symbols `Q`, tape symbols `Σ`, and the alphabet `Γ = Σ \ {B}`.

use std::collections::HashSet;
use std::fmt;

use crate::error::{QtmError, Result};

/// Index of a processor symbol in the ordered set `Q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Processor(pub u16);

/// Index of a tape symbol in the ordered set `Σ`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Symbol(pub u16);

impl Processor {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Processor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q#{}", self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s#{}", self.0)
    }
}

/// The finite symbol sets of a quantum Turing machine.
///
/// Symbols are referred to by their position in the declared order. That order fixes the
/// numbering used by the processor and tape-cell observables, the enumeration of data-slot
/// strings, and the basis order of the cyclic oracle.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MachineSpec {
    processors: Vec<String>,
    initial: Processor,
    halting: Processor,
    symbols: Vec<String>,
    blank: Symbol,
}

fn check_names(kind: &str, names: &[String]) -> Result<()> {
    if names.is_empty() {
        return Err(QtmError::InvalidSpec(format!("{kind} symbol set is empty")));
    }
    if names.len() > u16::MAX as usize {
        return Err(QtmError::InvalidSpec(format!("too many {kind} symbols")));
    }
    let mut seen = HashSet::new();
    for name in names {
        if name.is_empty() {
            return Err(QtmError::InvalidSpec(format!("empty {kind} symbol name")));
        }
        if !seen.insert(name.as_str()) {
            return Err(QtmError::InvalidSpec(format!("duplicate {kind} symbol `{name}`")));
        }
    }
    Ok(())
}

impl MachineSpec {
    pub fn new<S: Into<String>>(
        processors: impl IntoIterator<Item = S>,
        initial: &str,
        halting: &str,
        symbols: impl IntoIterator<Item = S>,
        blank: &str,
    ) -> Result<Self> {
        let processors: Vec<String> = processors.into_iter().map(Into::into).collect();
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        check_names("processor", &processors)?;
        check_names("tape", &symbols)?;
        let find = |names: &[String], kind: &'static str, name: &str| {
            names
                .iter()
                .position(|n| n == name)
                .map(|i| i as u16)
                .ok_or_else(|| QtmError::UnknownSymbol {
                    kind,
                    name: name.to_string(),
                })
        };
        let initial = Processor(find(&processors, "processor", initial)?);
        let halting = Processor(find(&processors, "processor", halting)?);
        let blank = Symbol(find(&symbols, "tape", blank)?);
        if initial == halting && processors.len() > 1 {
            return Err(QtmError::InvalidSpec(
                "initial and final processor symbols coincide but |Q| > 1".into(),
            ));
        }
        Ok(Self {
            processors,
            initial,
            halting,
            symbols,
            blank,
        })
    }

    pub fn processor_count(&self) -> usize {
        self.processors.len()
    }

    pub fn symbol_count(&self) -> usize {
        self.symbols.len()
    }

    /// `q₀`.
    pub fn initial(&self) -> Processor {
        self.initial
    }

    /// `q_f`, the processor symbol signalled by the halt flag.
    pub fn halting(&self) -> Processor {
        self.halting
    }

    pub fn blank(&self) -> Symbol {
        self.blank
    }

    /// `q₀ = q_f`, only legal for a single processor symbol.
    pub fn is_degenerate(&self) -> bool {
        self.initial == self.halting
    }

    pub fn processors(&self) -> impl ExactSizeIterator<Item = Processor> + Clone {
        (0..self.processors.len() as u16).map(Processor)
    }

    pub fn symbols(&self) -> impl ExactSizeIterator<Item = Symbol> + Clone {
        (0..self.symbols.len() as u16).map(Symbol)
    }

    /// The alphabet `Γ`: every tape symbol except the blank, in declared order.
    pub fn alphabet(&self) -> impl Iterator<Item = Symbol> + Clone + '_ {
        self.symbols().filter(move |&s| s != self.blank)
    }

    pub fn alphabet_len(&self) -> usize {
        self.symbols.len() - 1
    }

    /// Position of `symbol` within `Γ`, or `None` for the blank.
    pub fn alphabet_rank(&self, symbol: Symbol) -> Option<usize> {
        match symbol.cmp(&self.blank) {
            std::cmp::Ordering::Less => Some(symbol.index()),
            std::cmp::Ordering::Equal => None,
            std::cmp::Ordering::Greater => Some(symbol.index() - 1),
        }
    }

    pub fn processor_name(&self, q: Processor) -> &str {
        &self.processors[q.index()]
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        &self.symbols[s.index()]
    }

    pub fn processor_names(&self) -> &[String] {
        &self.processors
    }

    pub fn symbol_names(&self) -> &[String] {
        &self.symbols
    }

    pub fn processor(&self, name: &str) -> Result<Processor> {
        self.processors
            .iter()
            .position(|n| n == name)
            .map(|i| Processor(i as u16))
            .ok_or_else(|| QtmError::UnknownSymbol {
                kind: "processor",
                name: name.to_string(),
            })
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.symbols
            .iter()
            .position(|n| n == name)
            .map(|i| Symbol(i as u16))
            .ok_or_else(|| QtmError::UnknownSymbol {
                kind: "tape",
                name: name.to_string(),
            })
    }

    pub fn check_processor(&self, q: Processor) -> Result<()> {
        if q.index() < self.processors.len() {
            Ok(())
        } else {
            Err(QtmError::SymbolOutOfRange {
                kind: "processor",
                index: q.index(),
                len: self.processors.len(),
            })
        }
    }

    pub fn check_symbol(&self, s: Symbol) -> Result<()> {
        if s.index() < self.symbols.len() {
            Ok(())
        } else {
            Err(QtmError::SymbolOutOfRange {
                kind: "tape",
                index: s.index(),
                len: self.symbols.len(),
            })
        }
    }
}
