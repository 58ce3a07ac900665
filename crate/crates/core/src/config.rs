use std::fmt;

use crate::error::Result;
use crate::machine::{MachineSpec, Processor};
use crate::tape::Tape;

/// A computational-basis label `(q, T, ξ)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Configuration {
    pub processor: Processor,
    pub tape: Tape,
    pub head: i64,
}

impl Configuration {
    pub fn new(processor: Processor, tape: Tape, head: i64) -> Self {
        Self {
            processor,
            tape,
            head,
        }
    }

    /// Checks that every symbol belongs to `spec`.
    pub fn check(&self, spec: &MachineSpec) -> Result<()> {
        spec.check_processor(self.processor)?;
        spec.check_symbol(self.tape.blank_symbol())?;
        if self.tape.blank_symbol() != spec.blank() {
            return Err(crate::QtmError::InvalidSpec(
                "tape blank differs from the machine's blank symbol".into(),
            ));
        }
        self.tape.iter().try_for_each(|(_, s)| spec.check_symbol(s))
    }

    pub fn display<'a>(&'a self, spec: &'a MachineSpec) -> impl fmt::Display + 'a {
        ConfigDisplay { config: self, spec }
    }
}

struct ConfigDisplay<'a> {
    config: &'a Configuration,
    spec: &'a MachineSpec,
}

impl fmt::Display for ConfigDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "|{}, {}, {}>",
            self.spec.processor_name(self.config.processor),
            self.config.tape.display(self.spec),
            self.config.head
        )
    }
}
