//! Church synthesis over discrete time and over continuous time.
//!
//! Specifications enter as deterministic parity automata over a product
//! alphabet `Σ_in × Σ_out`. The crate provides:
//!
//! * [`automaton`]: parity automata, runs on lasso words, convention
//!   conversion and safety-monitor products.
//! * [`omega_word`]: ultimately periodic words and their normal forms.
//! * [`signal`]: finitely presented finite-variability signals with exact
//!   rational time, and the point/interval (`D`) codec.
//! * [`discrete_game`]: the discrete-time game, Zielonka solving, Mealy and
//!   Moore witnesses.
//! * [`definable_synth`]: synthesis of finite-state operators over signals.
//! * [`state_monoid`]: the state-string congruence, its class table and the
//!   finite move vocabulary `UP(Q)`.
//! * [`arena`]: the finite timed arenas for right-continuous and
//!   finite-variability semantics.
//! * [`continuous_synth`]: enumeration of almost-positional strategies and
//!   the winning-strategy check.
//! * [`game_sim`]: timed play simulation and adjudication.
//! * [`sample`]: seeded random instances.
//!
//! The crate is `no_std` and needs only `alloc`.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod arena;
pub mod automaton;
pub mod continuous_synth;
pub mod definable_synth;
pub mod discrete_game;
pub mod fixtures;
pub mod game_sim;
mod graph;
pub mod omega_word;
pub mod sample;
pub mod signal;
pub mod state_monoid;
pub mod time;

pub use arena::{Arena, Semantics};
pub use automaton::{Convention, ParityAutomaton};
pub use omega_word::LassoWord;
pub use time::Time;
