//! JSON machine files.
//!
//! ```json
//! {
//!   "name": "right-mover",
//!   "processor_symbols": ["q"],
//!   "initial": "q",
//!   "final": "q",
//!   "tape_symbols": ["B"],
//!   "blank": "B",
//!   "transitions": [
//!     {"state": "q", "read": "B", "next": "q", "write": "B", "move": 1, "amplitude": [1.0, 0.0]}
//!   ]
//! }
//! ```
//!
//! `name` and `data_slot` (`{"offset": 0, "stride": 1}`) are optional. Serializing a parsed file
//! gives a canonical form: transitions in key order, exact zeros dropped.

use std::sync::Arc;

use qtm_core::{Complex, DataSlot, MachineSpec, Move, QtmError, Transition, TransitionKey};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MachineFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub processor_symbols: Vec<String>,
    pub initial: String,
    #[serde(rename = "final")]
    pub halting: String,
    pub tape_symbols: Vec<String>,
    pub blank: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub data_slot: Option<SlotRecord>,
    pub transitions: Vec<TransitionRecord>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotRecord {
    pub offset: i64,
    pub stride: i64,
}

#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionRecord {
    pub state: String,
    pub read: String,
    pub next: String,
    pub write: String,
    #[serde(rename = "move")]
    pub movement: i64,
    /// `[re, im]`.
    pub amplitude: [f64; 2],
}

/// A parsed machine file.
#[derive(Clone, Debug)]
pub struct Machine {
    pub name: Option<String>,
    pub transition: Transition,
    pub slot: DataSlot,
}

impl Machine {
    pub fn new(name: Option<String>, transition: Transition, slot: DataSlot) -> Self {
        Self { name, transition, slot }
    }

    pub fn spec(&self) -> &Arc<MachineSpec> {
        self.transition.spec()
    }

    /// Parses JSON text. Syntax and schema errors carry the line and column.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: MachineFile = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: strip_position(&e.to_string()),
        })?;
        file.into_machine()
    }

    pub fn to_file(&self) -> MachineFile {
        let spec = self.spec();
        let slot = (self.slot != DataSlot::IDENTITY).then(|| SlotRecord {
            offset: self.slot.offset(),
            stride: self.slot.stride(),
        });
        MachineFile {
            name: self.name.clone(),
            processor_symbols: spec.processor_names().to_vec(),
            initial: spec.processor_name(spec.initial()).to_string(),
            halting: spec.processor_name(spec.halting()).to_string(),
            tape_symbols: spec.symbol_names().to_vec(),
            blank: spec.symbol_name(spec.blank()).to_string(),
            data_slot: slot,
            transitions: self
                .transition
                .entries()
                .map(|(key, amp)| TransitionRecord {
                    state: spec.processor_name(key.state).to_string(),
                    read: spec.symbol_name(key.read).to_string(),
                    next: spec.processor_name(key.next).to_string(),
                    write: spec.symbol_name(key.write).to_string(),
                    movement: key.movement.offset(),
                    // Adding zero turns -0.0 into 0.0.
                    amplitude: [amp.re + 0.0, amp.im + 0.0],
                })
                .collect(),
        }
    }

    /// Canonical JSON: one field per line, one transition per line, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let file = self.to_file();
        let list = |items: &[String]| format!("[{}]", items.iter().map(js).collect::<Vec<_>>().join(", "));
        let mut fields: Vec<(&str, String)> = Vec::new();
        if let Some(name) = &file.name {
            fields.push(("name", js(name)));
        }
        fields.push(("processor_symbols", list(&file.processor_symbols)));
        fields.push(("initial", js(&file.initial)));
        fields.push(("final", js(&file.halting)));
        fields.push(("tape_symbols", list(&file.tape_symbols)));
        fields.push(("blank", js(&file.blank)));
        if let Some(slot) = &file.data_slot {
            fields.push(("data_slot", format!("{{\"offset\": {}, \"stride\": {}}}", slot.offset, slot.stride)));
        }
        let rows: Vec<String> = file
            .transitions
            .iter()
            .map(|t| {
                format!(
                    "    {{\"state\": {}, \"read\": {}, \"next\": {}, \"write\": {}, \"move\": {}, \"amplitude\": [{}, {}]}}",
                    js(&t.state),
                    js(&t.read),
                    js(&t.next),
                    js(&t.write),
                    t.movement,
                    js(&t.amplitude[0]),
                    js(&t.amplitude[1])
                )
            })
            .collect();
        let transitions = if rows.is_empty() {
            "[]".to_string()
        } else {
            format!("[\n{}\n  ]", rows.join(",\n"))
        };
        fields.push(("transitions", transitions));
        let body: Vec<String> = fields.iter().map(|(k, v)| format!("  \"{k}\": {v}")).collect();
        format!("{{\n{}\n}}\n", body.join(",\n"))
    }
}

fn js<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string(value).expect("machine files serialize")
}

impl MachineFile {
    pub fn into_machine(self) -> Result<Machine, CliError> {
        let spec = MachineSpec::new(
            self.processor_symbols,
            &self.initial,
            &self.halting,
            self.tape_symbols,
            &self.blank,
        )?;
        let spec = Arc::new(spec);
        let entries = self
            .transitions
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let at = |e: QtmError| CliError::Transition { index: i, source: e };
                let movement = Move::from_offset(t.movement)
                    .ok_or_else(|| at(QtmError::InvalidSpec(format!("move {} is not -1, 0 or 1", t.movement))))?;
                let key = TransitionKey::new(
                    spec.processor(&t.state).map_err(at)?,
                    spec.symbol(&t.read).map_err(at)?,
                    spec.processor(&t.next).map_err(at)?,
                    spec.symbol(&t.write).map_err(at)?,
                    movement,
                );
                Ok((key, Complex::new(t.amplitude[0], t.amplitude[1])))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let transition = Transition::new(spec, entries)?;
        let slot = match self.data_slot {
            Some(s) => DataSlot::new(s.offset, s.stride)?,
            None => DataSlot::IDENTITY,
        };
        Ok(Machine::new(self.name, transition, slot))
    }
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use qtm_core::gallery;

    const RIGHT_MOVER: &str = r#"{
  "name": "right-mover",
  "processor_symbols": ["q"],
  "initial": "q",
  "final": "q",
  "tape_symbols": ["B"],
  "blank": "B",
  "transitions": [
    {"state": "q", "read": "B", "next": "q", "write": "B", "move": 1, "amplitude": [1.0, 0.0]}
  ]
}"#;

    #[test]
    fn parses_a_machine() {
        let m = Machine::parse(RIGHT_MOVER).unwrap();
        assert_eq!(m.name.as_deref(), Some("right-mover"));
        assert_eq!(m.transition, gallery::right_mover());
        assert_eq!(m.slot, DataSlot::IDENTITY);
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        for (name, d_fn) in gallery::all::<f64>() {
            let m = Machine::new(Some(name.to_string()), d_fn, DataSlot::IDENTITY);
            let text = m.to_canonical_json();
            let back = Machine::parse(&text).unwrap();
            assert_eq!(back.transition, m.transition, "{name}");
            assert_eq!(back.to_canonical_json(), text, "{name}");
        }
    }

    #[test]
    fn slot_round_trips() {
        let m = Machine::new(None, gallery::coin(), DataSlot::new(1, 2).unwrap());
        let back = Machine::parse(&m.to_canonical_json()).unwrap();
        assert_eq!(back.slot, m.slot);
        assert!(back.name.is_none());
    }

    #[test]
    fn malformed_amplitude_reports_the_line() {
        let text = RIGHT_MOVER.replace("[1.0, 0.0]", "\"one\"");
        match Machine::parse(&text) {
            Err(CliError::Parse { line, .. }) => assert_eq!(line, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_entries() {
        let dup = RIGHT_MOVER.replace(
            "{\"state\": \"q\", \"read\": \"B\", \"next\": \"q\", \"write\": \"B\", \"move\": 1, \"amplitude\": [1.0, 0.0]}",
            "{\"state\": \"q\", \"read\": \"B\", \"next\": \"q\", \"write\": \"B\", \"move\": 1, \"amplitude\": [1.0, 0.0]},\n    {\"state\": \"q\", \"read\": \"B\", \"next\": \"q\", \"write\": \"B\", \"move\": 1, \"amplitude\": [0.0, 1.0]}",
        );
        assert!(matches!(Machine::parse(&dup), Err(CliError::Core(QtmError::InvalidSpec(_)))));
        let far = RIGHT_MOVER.replace("\"move\": 1", "\"move\": 2");
        assert!(matches!(Machine::parse(&far), Err(CliError::Transition { index: 0, .. })));
        let unknown = RIGHT_MOVER.replace("\"write\": \"B\"", "\"write\": \"X\"");
        assert!(matches!(Machine::parse(&unknown), Err(CliError::Transition { index: 0, .. })));
        let extra = RIGHT_MOVER.replace("\"blank\": \"B\",", "\"blank\": \"B\", \"colour\": 3,");
        assert!(matches!(Machine::parse(&extra), Err(CliError::Parse { .. })));
    }
}
