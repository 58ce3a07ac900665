//! Encoding of Γ-strings onto the data slot of a tape, and decoding back.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{QtmError, Result};
use crate::machine::{MachineSpec, Symbol};
use crate::tape::Tape;

/// The data slot `S = {m_0 < m_1 < …}`, here the arithmetic progression `m_n = offset + stride·n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct DataSlot {
    offset: i64,
    stride: i64,
}

impl Default for DataSlot {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl DataSlot {
    /// `m_n = n`.
    pub const IDENTITY: DataSlot = DataSlot { offset: 0, stride: 1 };

    pub fn new(offset: i64, stride: i64) -> Result<Self> {
        if offset < 0 {
            return Err(QtmError::InvalidSlot(format!("offset {offset} is negative")));
        }
        if stride < 1 {
            return Err(QtmError::InvalidSlot(format!("stride {stride} is not positive")));
        }
        Ok(Self { offset, stride })
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn stride(&self) -> i64 {
        self.stride
    }

    /// `m_n`, or `None` past the end of the cell range.
    pub fn cell(&self, n: usize) -> Option<i64> {
        i64::try_from(n)
            .ok()
            .and_then(|n| n.checked_mul(self.stride))
            .and_then(|m| m.checked_add(self.offset))
    }

    /// `e(x)`: cell `m_n` holds `x(n)` for `n < |x|`, every other cell is blank.
    pub fn encode(&self, spec: &MachineSpec, x: &GammaString) -> Tape {
        Tape::from_cells(
            spec.blank(),
            x.symbols().iter().enumerate().map(|(n, &s)| {
                (self.cell(n).expect("data slot cell index overflow"), s)
            }),
        )
    }

    /// `d(T)`: the symbols at `m_0, m_1, …` up to (excluding) the first blank slot cell.
    pub fn decode(&self, tape: &Tape) -> GammaString {
        let blank = tape.blank_symbol();
        let mut out = Vec::new();
        let Some((_, last)) = tape.bounds() else {
            return GammaString(out);
        };
        for n in 0.. {
            match self.cell(n) {
                Some(m) if m <= last => {
                    let s = tape.read(m);
                    if s == blank {
                        break;
                    }
                    out.push(s);
                }
                _ => break,
            }
        }
        GammaString(out)
    }
}

/// A finite string over `Γ` (never containing the blank).
///
/// Ordered by length first, then lexicographically in alphabet order; this is the enumeration
/// used to number data-slot strings.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GammaString(Vec<Symbol>);

impl GammaString {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new(spec: &MachineSpec, symbols: Vec<Symbol>) -> Result<Self> {
        for &s in &symbols {
            spec.check_symbol(s)?;
            if s == spec.blank() {
                return Err(QtmError::BlankInString);
            }
        }
        Ok(Self(symbols))
    }

    /// Parses symbol names. Text containing commas or whitespace is split on them; otherwise each
    /// character is one symbol.
    pub fn parse(spec: &MachineSpec, text: &str) -> Result<Self> {
        let names: Vec<String> = if text.contains(|c: char| c == ',' || c.is_whitespace()) {
            text.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .map(str::to_string)
                .collect()
        } else {
            text.chars().map(|c| c.to_string()).collect()
        };
        let symbols = names
            .iter()
            .map(|n| spec.symbol(n))
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, symbols)
    }

    /// Every string of length at most `max_len`, in enumeration order.
    pub fn enumerate(spec: &MachineSpec, max_len: usize) -> Vec<GammaString> {
        let alphabet: Vec<Symbol> = spec.alphabet().collect();
        let mut out = vec![GammaString::empty()];
        let mut layer = vec![GammaString::empty()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|x| {
                    alphabet.iter().map(move |&s| {
                        let mut next = x.0.clone();
                        next.push(s);
                        GammaString(next)
                    })
                })
                .collect();
            out.extend(layer.iter().cloned());
        }
        out
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Symbol names, concatenated when all are single characters and comma-separated otherwise.
    pub fn display<'a>(&'a self, spec: &'a MachineSpec) -> impl fmt::Display + 'a {
        GammaDisplay { string: self, spec }
    }
}

impl Ord for GammaString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for GammaString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

struct GammaDisplay<'a> {
    string: &'a GammaString,
    spec: &'a MachineSpec,
}

impl fmt::Display for GammaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.string.0.iter().map(|&s| self.spec.symbol_name(s)).collect();
        if names.iter().all(|n| n.chars().count() == 1) {
            f.write_str(&names.concat())
        } else {
            f.write_str(&names.join(","))
        }
    }
}
