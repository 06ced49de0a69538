//! Line-oriented text format.
//!
//! ```text
//! protocol ESP
//! qubits 12
//! resource 0 3 bell
//! output 0 5 bell
//! PREP X 0; PREP Z 3
//! BELL 0 3
//! CNOT 3 2; CZ 2 4
//! MZZ 3 2 -> t3 t2; MZ 9 -> t9
//! BP X 5 if t2^t6
//! ```
//!
//! Header directives come first. Every other non-blank line is one time
//! step with `;`-separated operations; `-` is an empty step. `#` starts a
//! comment.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;
use crate::pauli::{Basis, Gate1, Gate2, Pauli};

use super::{Circuit, Condition, OperationKind, OutcomeLabel, PairKind, QubitPair, TimeStep};

impl fmt::Display for OperationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OperationKind::Prepare { basis, q } => write!(f, "PREP {basis} {q}"),
            OperationKind::Entangle2 { kind, a, b } => {
                let name = match kind {
                    PairKind::BellPhiPlus => "BELL",
                    PairKind::TwoQubitCluster => "CLUSTER",
                };
                write!(f, "{name} {a} {b}")
            }
            OperationKind::Gate1 { gate, q } => write!(f, "{gate} {q}"),
            OperationKind::Gate2 { gate, a, b } => write!(f, "{gate} {a} {b}"),
            OperationKind::Measure { basis, q, label } => write!(f, "M{basis} {q} -> {label}"),
            OperationKind::MeasurePair {
                a,
                b,
                label_a,
                label_b,
            } => write!(f, "MZZ {a} {b} -> {label_a} {label_b}"),
            OperationKind::Byproduct {
                pauli,
                target,
                condition,
            } => write!(f, "BP {pauli} {target} if {condition}"),
        }
    }
}

fn qubit(tok: Option<&str>) -> Result<usize, Error> {
    let tok = tok.ok_or_else(|| Error::parse("missing qubit index"))?;
    tok.parse()
        .map_err(|_| Error::parse(format!("bad qubit index {tok:?}")))
}

fn end(mut toks: impl Iterator<Item = impl AsRef<str>>) -> Result<(), Error> {
    match toks.next() {
        None => Ok(()),
        Some(t) => Err(Error::parse(format!("unexpected token {:?}", t.as_ref()))),
    }
}

impl FromStr for OperationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (lhs, rhs) = match s.split_once("->") {
            Some((l, r)) => (l, Some(r)),
            None => (s, None),
        };
        let (lhs, cond) = match lhs.split_once(" if ") {
            Some((l, c)) => (l, Some(c)),
            None => (lhs, None),
        };
        let mut toks = lhs.split_whitespace();
        let head = toks
            .next()
            .ok_or_else(|| Error::parse("empty operation"))?
            .to_ascii_uppercase();
        let labels: Vec<OutcomeLabel> = match rhs {
            Some(r) => r
                .split_whitespace()
                .map(str::parse)
                .collect::<Result<_, _>>()?,
            None => Vec::new(),
        };
        let want_labels = |n: usize| -> Result<(), Error> {
            if labels.len() == n {
                Ok(())
            } else {
                Err(Error::parse(format!(
                    "{head}: expected {n} outcome label(s), found {}",
                    labels.len()
                )))
            }
        };
        if cond.is_some() && head != "BP" {
            return Err(Error::parse(format!("{head}: unexpected condition")));
        }

        let op = match head.as_str() {
            "PREP" => {
                let basis: Basis = toks
                    .next()
                    .ok_or_else(|| Error::parse("PREP: missing basis"))?
                    .parse()?;
                want_labels(0)?;
                OperationKind::Prepare {
                    basis,
                    q: qubit(toks.next())?,
                }
            }
            "BELL" | "CLUSTER" => {
                want_labels(0)?;
                let kind = if head == "BELL" {
                    PairKind::BellPhiPlus
                } else {
                    PairKind::TwoQubitCluster
                };
                OperationKind::Entangle2 {
                    kind,
                    a: qubit(toks.next())?,
                    b: qubit(toks.next())?,
                }
            }
            "H" | "S" | "X" | "Y" | "Z" => {
                want_labels(0)?;
                OperationKind::Gate1 {
                    gate: head.parse::<Gate1>()?,
                    q: qubit(toks.next())?,
                }
            }
            "CZ" | "CNOT" | "CX" => {
                want_labels(0)?;
                OperationKind::Gate2 {
                    gate: head.parse::<Gate2>()?,
                    a: qubit(toks.next())?,
                    b: qubit(toks.next())?,
                }
            }
            "MX" | "MY" | "MZ" => {
                want_labels(1)?;
                OperationKind::Measure {
                    basis: head[1..].parse()?,
                    q: qubit(toks.next())?,
                    label: labels[0],
                }
            }
            "MZZ" => {
                want_labels(2)?;
                OperationKind::MeasurePair {
                    a: qubit(toks.next())?,
                    b: qubit(toks.next())?,
                    label_a: labels[0],
                    label_b: labels[1],
                }
            }
            "BP" => {
                want_labels(0)?;
                let pauli: Pauli = toks
                    .next()
                    .ok_or_else(|| Error::parse("BP: missing Pauli"))?
                    .parse()?;
                let target = qubit(toks.next())?;
                let cond = cond.ok_or_else(|| Error::parse("BP: missing `if` condition"))?;
                let labels = cond
                    .split('^')
                    .map(str::parse)
                    .collect::<Result<Vec<OutcomeLabel>, _>>()?;
                OperationKind::Byproduct {
                    pauli,
                    target,
                    condition: Condition::xor_of(labels),
                }
            }
            other => return Err(Error::parse(format!("unknown operation {other:?}"))),
        };
        end(toks)?;
        Ok(op)
    }
}

impl fmt::Display for TimeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.operations.is_empty() {
            return f.write_str("-");
        }
        for (i, op) in self.operations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{op}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.protocol {
            writeln!(f, "protocol {p}")?;
        }
        writeln!(f, "qubits {}", self.qubit_count)?;
        for r in &self.resource_pairs {
            writeln!(f, "resource {} {} {}", r.a, r.b, r.kind.keyword())?;
        }
        for o in &self.outputs {
            writeln!(f, "output {} {} {}", o.a, o.b, o.kind.keyword())?;
        }
        for step in &self.steps {
            writeln!(f, "{step}")?;
        }
        Ok(())
    }
}

fn pair_directive(rest: &str) -> Result<QubitPair, Error> {
    let mut toks = rest.split_whitespace();
    let a = qubit(toks.next())?;
    let b = qubit(toks.next())?;
    let kind: PairKind = toks
        .next()
        .ok_or_else(|| Error::parse("missing pair kind"))?
        .parse()?;
    end(toks)?;
    Ok(QubitPair::new(a, b, kind))
}

impl FromStr for Circuit {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut circuit = Circuit {
            qubit_count: 0,
            steps: vec![],
            resource_pairs: vec![],
            outputs: vec![],
            protocol: None,
        };
        let mut qubits_seen = false;
        for (i, raw) in s.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let at = |e: Error| match e {
                Error::Parse { message, .. } => Error::parse_at(lineno, message),
                other => other,
            };
            let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match word {
                "protocol" => {
                    circuit.protocol = Some(rest.parse().map_err(|_| {
                        Error::parse_at(lineno, format!("unknown protocol {rest:?}"))
                    })?)
                }
                "qubits" => {
                    circuit.qubit_count = rest
                        .trim()
                        .parse()
                        .map_err(|_| Error::parse_at(lineno, "bad qubit count"))?;
                    qubits_seen = true;
                }
                "resource" => circuit
                    .resource_pairs
                    .push(pair_directive(rest).map_err(at)?),
                "output" => circuit.outputs.push(pair_directive(rest).map_err(at)?),
                "-" => circuit.steps.push(TimeStep::default()),
                _ => {
                    let operations = line
                        .split(';')
                        .map(str::trim)
                        .filter(|t| !t.is_empty())
                        .map(str::parse)
                        .collect::<Result<Vec<OperationKind>, _>>()
                        .map_err(at)?;
                    circuit.steps.push(TimeStep { operations });
                }
            }
        }
        if !qubits_seen {
            return Err(Error::parse("missing `qubits` directive"));
        }
        if circuit.qubit_count > 64 {
            return Err(Error::parse("at most 64 qubits are supported"));
        }
        Ok(circuit)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{build_protocol, ProtocolId};

    #[test]
    fn round_trip_all_protocols() {
        for id in ProtocolId::ALL {
            let c = build_protocol(id);
            let text = c.to_string();
            let back: Circuit = text.parse().unwrap();
            assert_eq!(back, c, "{id}");
        }
    }

    #[test]
    fn operation_syntax() {
        assert_eq!(
            "CZ 2 4".parse::<OperationKind>().unwrap(),
            OperationKind::Gate2 {
                gate: Gate2::Cz,
                a: 2,
                b: 4
            }
        );
        assert_eq!(
            "MZ 9 -> t9".parse::<OperationKind>().unwrap(),
            OperationKind::Measure {
                basis: Basis::Z,
                q: 9,
                label: OutcomeLabel(9)
            }
        );
        assert_eq!(
            "BP X 0 if t9".parse::<OperationKind>().unwrap(),
            OperationKind::Byproduct {
                pauli: Pauli::X,
                target: 0,
                condition: Condition::xor_of([OutcomeLabel(9)])
            }
        );
        assert_eq!(
            "BP Z 4 if t2^t6"
                .parse::<OperationKind>()
                .unwrap()
                .to_string(),
            "BP Z 4 if t2^t6"
        );
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = "qubits 2\nH 0\nFOO 1\n".parse::<Circuit>().unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        assert!("BP X 0".parse::<OperationKind>().is_err());
        assert!("MZ 1".parse::<OperationKind>().is_err());
        assert!("CZ 1 2 3".parse::<OperationKind>().is_err());
    }
}
