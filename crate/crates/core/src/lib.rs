//! Decision procedures and constructions for variable-length codes under
//! edit relations (deletion, insertion, substitution and their unions and
//! compositions).
//!
//! The crate is layered bottom-up: [`words`] and [`automata`] provide the
//! language substrate, [`transducers`] realizes edit relations as normal-form
//! transducers, [`codes`] holds the classical code tests, [`independence`]
//! and [`closed`] the error-detection and closure theory, and [`channel`] a
//! block channel simulator.

pub mod automata;
pub mod channel;
pub mod closed;
pub mod codes;
pub mod error;
pub mod independence;
pub mod transducers;
pub mod words;

pub use automata::{compile, Language};
pub use error::{Error, Result};
pub use words::{Alphabet, Word};
