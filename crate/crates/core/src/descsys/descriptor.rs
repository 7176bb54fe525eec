//! Line-oriented system descriptor files.
//!
//! See `docs/descriptor.md` for the grammar. The parser is strict: every
//! field is separated by exactly one TAB, strings are written in `0`/`1`
//! (`-` for the empty string), and anything not matching the grammar is a
//! [`Error::Parse`] carrying the 1-based line number.

use std::fmt;

use crate::codec::BitString;
use crate::descsys::family::Family;
use crate::descsys::set::FiniteSet;
use crate::descsys::{DescriptionSystem, SystemBuilder, MAX_UNIVERSE};
use crate::error::{Error, Result};

/// One record of a descriptor file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Record {
    Data {
        program: BitString,
        output: BitString,
    },
    Set {
        program: BitString,
        elements: Vec<BitString>,
    },
    Cond {
        program: BitString,
        output: BitString,
        elements: Vec<BitString>,
    },
    DataFamily {
        tag: BitString,
        family: Family,
    },
    SetFamily {
        tag: BitString,
        family: Family,
    },
}

/// A parsed descriptor: the universe length and its records in file order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Descriptor {
    pub universe: u32,
    pub records: Vec<Record>,
}

impl Descriptor {
    /// Expands families and validates every namespace.
    pub fn build(&self) -> Result<DescriptionSystem> {
        self.builder()?.build()
    }

    pub fn builder(&self) -> Result<SystemBuilder> {
        let n = self.universe;
        let mut b = SystemBuilder::new(n);
        for r in &self.records {
            match r {
                Record::Data { program, output } => {
                    b.data(program.clone(), output)?;
                }
                Record::Set { program, elements } => {
                    b.set(program.clone(), FiniteSet::from_strings(n, elements.iter())?);
                }
                Record::Cond {
                    program,
                    output,
                    elements,
                } => {
                    b.cond(
                        program.clone(),
                        FiniteSet::from_strings(n, elements.iter())?,
                        output,
                    )?;
                }
                Record::DataFamily { tag, family } => {
                    b.data_family(tag, *family)?;
                }
                Record::SetFamily { tag, family } => {
                    b.set_family(tag, *family)?;
                }
            }
        }
        Ok(b)
    }
}

fn list(elements: &[BitString]) -> String {
    elements
        .iter()
        .map(BitString::to_token)
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "universe\t{}", self.universe)?;
        for r in &self.records {
            match r {
                Record::Data { program, output } => {
                    writeln!(f, "data\t{}\t{}", program.to_token(), output.to_token())?
                }
                Record::Set { program, elements } => {
                    writeln!(f, "set\t{}\t{}", program.to_token(), list(elements))?
                }
                Record::Cond {
                    program,
                    output,
                    elements,
                } => writeln!(
                    f,
                    "cond\t{}\t{}\t{}",
                    program.to_token(),
                    output.to_token(),
                    list(elements)
                )?,
                Record::DataFamily { tag, family } => {
                    writeln!(f, "data\t{}\t{}", tag.to_token(), family)?
                }
                Record::SetFamily { tag, family } => {
                    writeln!(f, "set\t{}\t{}", tag.to_token(), family)?
                }
            }
        }
        Ok(())
    }
}

fn bits(line: usize, field: &str, what: &str) -> Result<BitString> {
    if field.is_empty() {
        return Err(Error::parse(line, format!("empty {what} field (write - for the empty string)")));
    }
    if field == "ε" {
        return Err(Error::parse(line, format!("{what}: write - for the empty string")));
    }
    field
        .parse()
        .map_err(|e: Error| Error::parse(line, format!("{what}: {e}")))
}

fn universe_string(line: usize, field: &str, n: u32, what: &str) -> Result<BitString> {
    let s = bits(line, field, what)?;
    if s.len() as u32 != n {
        return Err(Error::parse(
            line,
            format!("{what} {field} is not a {n}-bit string"),
        ));
    }
    Ok(s)
}

fn elements(line: usize, field: &str, n: u32) -> Result<Vec<BitString>> {
    let mut out = Vec::new();
    for item in field.split(',') {
        out.push(universe_string(line, item, n, "element")?);
    }
    let mut sorted = out.clone();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::parse(
            line,
            format!("element {} listed twice", w[0].to_token()),
        ));
    }
    Ok(out)
}

fn family(line: usize, field: &str) -> Result<Family> {
    field
        .parse()
        .map_err(|e: Error| Error::parse(line, e.to_string()))
}

/// Parses descriptor text.
pub fn parse_descriptor(text: &str) -> Result<Descriptor> {
    let mut universe: Option<u32> = None;
    let mut records = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim_end();
        if content.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split('\t').collect();
        let kind = fields[0];
        let Some(n) = universe else {
            if kind != "universe" {
                return Err(Error::parse(line, "the first record must be `universe<TAB>n`"));
            }
            if fields.len() != 2 {
                return Err(Error::parse(line, "universe record takes exactly one field"));
            }
            let digits = fields[1];
            if digits.is_empty() || digits.len() > 2 || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(Error::parse(line, format!("bad universe length {digits:?}")));
            }
            let n: u32 = digits.parse().expect("checked digits");
            if n > MAX_UNIVERSE {
                return Err(Error::parse(
                    line,
                    format!("universe length {n} exceeds {MAX_UNIVERSE}"),
                ));
            }
            universe = Some(n);
            continue;
        };
        let arity = match kind {
            "data" | "set" => 3,
            "cond" => 4,
            "universe" => return Err(Error::parse(line, "universe declared twice")),
            other => return Err(Error::parse(line, format!("unknown record kind {other:?}"))),
        };
        if fields.len() != arity {
            return Err(Error::parse(
                line,
                format!("{kind} record takes {} fields, found {}", arity - 1, fields.len() - 1),
            ));
        }
        let program = bits(line, fields[1], "program")?;
        let payload = fields[2];
        let record = match kind {
            "data" if payload.starts_with('@') => {
                let family = family(line, payload)?;
                if !family.is_data_family() {
                    return Err(Error::parse(line, format!("{family} is not a data family")));
                }
                Record::DataFamily { tag: program, family }
            }
            "data" => Record::Data {
                program,
                output: universe_string(line, payload, n, "output")?,
            },
            "set" if payload.starts_with('@') => {
                let family = family(line, payload)?;
                if family.is_data_family() {
                    return Err(Error::parse(line, format!("{family} is not a set family")));
                }
                Record::SetFamily { tag: program, family }
            }
            "set" => Record::Set {
                program,
                elements: elements(line, payload, n)?,
            },
            _ => Record::Cond {
                program,
                output: universe_string(line, payload, n, "output")?,
                elements: elements(line, fields[3], n)?,
            },
        };
        records.push(record);
    }
    let universe = universe.ok_or_else(|| Error::parse(0, "missing universe record"))?;
    Ok(Descriptor { universe, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descsys::FIXTURE_A;

    #[test]
    fn fixture_round_trips_through_text() {
        let d = parse_descriptor(FIXTURE_A).unwrap();
        assert_eq!(d.universe, 2);
        assert_eq!(d.records.len(), 7);
        let again = parse_descriptor(&d.to_string()).unwrap();
        assert_eq!(again, d);
    }

    #[test]
    fn family_rows() {
        let text = "universe\t8\ndata\t-\t@family:literal()\nset\t01\t@family:hamming()\n";
        let sys = parse_descriptor(text).unwrap().build().unwrap();
        assert_eq!(sys.set_programs().len(), 9);
        assert_eq!(sys.data_programs().len(), 256);
        assert!(sys.kraft().set <= num_rational::BigRational::from_integer(1.into()));
    }

    #[test]
    fn prefix_violation_is_reported() {
        let text = "universe\t1\ndata\t0\t0\ndata\t01\t1\n";
        let err = parse_descriptor(text).unwrap().build().unwrap_err();
        assert_eq!(
            err,
            Error::NotPrefixFree {
                namespace: "data".into(),
                shorter: "0".into(),
                longer: "01".into()
            }
        );
    }

    #[test]
    fn rejects_malformed_lines() {
        let bad = [
            "data\t0\t0\n",                      // no universe
            "universe\t2\nuniverse\t2\n",       // twice
            "universe\t2\ndata\t0\n",           // missing field
            "universe\t2\ndata\t0\t00\t1\n",    // extra field
            "universe\t2\ndata\t0\t000\n",      // wrong width
            "universe\t2\nset\t0\t00,00\n",     // duplicate element
            "universe\t2\nset\t0\t00,,01\n",    // empty element
            "universe\t2\nset\t\t00\n",         // empty program
            "universe\t2\nsets\t0\t00\n",       // unknown kind
            "universe\t2\ndata\t0 \t00\n",      // stray space
            "universe\t2\nset\t0\t@family:literal()\n",
            "universe\t2\ndata\t0\t@family:cube()\n",
            "universe\t99\n",
            "universe\t-1\n",
        ];
        for text in bad {
            assert!(
                matches!(parse_descriptor(text), Err(Error::Parse { .. })),
                "accepted {text:?}"
            );
        }
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# header\n\nuniverse\t1   # one bit\r\ndata\t0\t0\ndata\t1\t1 # tail\n";
        let d = parse_descriptor(text).unwrap();
        assert_eq!(d.records.len(), 2);
    }
}
