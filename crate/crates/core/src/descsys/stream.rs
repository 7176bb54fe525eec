use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::codec::BitString;
use crate::descsys::DescriptionSystem;

/// What a halting program printed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    /// A data program printed this universe word.
    Data(u64),
    /// A set program printed the representable set with this id.
    Set(usize),
    /// A conditional program; index into [`DescriptionSystem::cond_programs`].
    Cond(usize),
}

/// "Program `program` halted at step `time`, printing `kind`."
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EnumerationEvent {
    pub time: u64,
    pub program: BitString,
    pub kind: EventKind,
}

impl DescriptionSystem {
    /// Every program of the system exactly once, in an order that is a pure
    /// function of the system and `seed`.
    pub fn enumeration_stream(&self, seed: u64) -> Vec<EnumerationEvent> {
        let mut events: Vec<(BitString, EventKind)> = Vec::with_capacity(self.program_count());
        events.extend(
            self.data_programs()
                .iter()
                .map(|(p, x)| (p.clone(), EventKind::Data(*x))),
        );
        events.extend(
            self.set_programs()
                .iter()
                .map(|(p, id)| (p.clone(), EventKind::Set(*id))),
        );
        events.extend(
            self.cond_programs()
                .iter()
                .enumerate()
                .map(|(i, c)| (c.program.clone(), EventKind::Cond(i))),
        );
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        events.shuffle(&mut rng);
        events
            .into_iter()
            .enumerate()
            .map(|(t, (program, kind))| EnumerationEvent {
                time: t as u64,
                program,
                kind,
            })
            .collect()
    }
}
