//! Specification automata used across tests, examples and the CLI.
//!
//! All fixtures use `Σ_in = Σ_out = {0,1}` and the max-even convention. The
//! continuous-time specs are read over the interleaved sequence of point and
//! interval letters (`point_0, interval_0, point_1, …`) for FV signals, and
//! over one letter per constant piece for right-continuous signals.

use crate::automaton::{AutomatonBuilder, Convention, ParityAutomaton};

const BITS: [&str; 2] = ["0", "1"];

fn builder() -> AutomatonBuilder {
    AutomatonBuilder::new(&BITS, &BITS, Convention::MaxEven)
}

/// Output equals input at every letter.
pub fn psi_copy() -> ParityAutomaton {
    builder()
        .state("ok", 0)
        .state("bad", 1)
        .default_to("ok", "bad")
        .default_to("bad", "bad")
        .transition("ok", "0", "0", "ok")
        .transition("ok", "1", "1", "ok")
        .build()
        .expect("fixture")
}

pub fn psi_true() -> ParityAutomaton {
    builder().state("t", 0).default_to("t", "t").build().expect("fixture")
}

pub fn psi_false() -> ParityAutomaton {
    builder().state("f", 1).default_to("f", "f").build().expect("fixture")
}

/// The output at step `i` must equal the input at step `i+1`.
pub fn predict_next() -> ParityAutomaton {
    let mut b = builder().state("S", 0).state("P0", 0).state("P1", 0).state("Bad", 1);
    b = b.default_to("Bad", "Bad");
    for x in BITS {
        for y in BITS {
            let to = if y == "0" { "P0" } else { "P1" };
            b = b.transition("S", x, y, to);
            for p in ["P0", "P1"] {
                let ok = (p == "P0") == (x == "0");
                b = b.transition(p, x, y, if ok { to } else { "Bad" });
            }
        }
    }
    b.build().expect("fixture")
}

/// Toggles between two states on input 1 with output 0; otherwise stays.
pub fn toggle() -> ParityAutomaton {
    builder()
        .state("s0", 0)
        .state("s1", 1)
        .default_to("s0", "s0")
        .default_to("s1", "s1")
        .transition("s0", "1", "0", "s1")
        .transition("s1", "1", "0", "s0")
        .build()
        .expect("fixture")
}

/// The output jumps somewhere in `(0,∞)`, over interleaved letters: the
/// point at 0 is skipped, the first interval fixes the reference output,
/// and any later letter with a different output accepts.
pub fn psi_jump() -> ParityAutomaton {
    let mut b = builder()
        .state("init", 1)
        .state("skip", 1)
        .state("M0", 1)
        .state("M1", 1)
        .state("J", 2)
        .default_to("init", "skip")
        .default_to("J", "J");
    for x in BITS {
        for y in BITS {
            b = b.transition("skip", x, y, if y == "0" { "M0" } else { "M1" });
            b = b.transition("M0", x, y, if y == "0" { "M0" } else { "J" });
            b = b.transition("M1", x, y, if y == "1" { "M1" } else { "J" });
        }
    }
    b.build().expect("fixture")
}

/// Some `t > 0` has the input constant on `(0,t]` and the output jumping at
/// `t`; one letter per right-continuous piece.
pub fn psi_indet_rc() -> ParityAutomaton {
    let mut b = builder().state("init", 1);
    for x in BITS {
        for y in BITS {
            b = b.state(&s_name("S", x, y), 1);
        }
    }
    b = b.state("J", 2).state("D", 1).default_to("J", "J").default_to("D", "D");
    for x in BITS {
        for y in BITS {
            b = b.transition("init", x, y, &s_name("S", x, y));
            let here = s_name("S", x, y);
            for x2 in BITS {
                for y2 in BITS {
                    let to = if x2 != x {
                        "D".into()
                    } else if y2 != y {
                        "J".into()
                    } else {
                        here.clone()
                    };
                    b = b.transition(&here, x2, y2, &to);
                }
            }
        }
    }
    b.build().expect("fixture")
}

/// The same property over interleaved point/interval letters.
pub fn psi_indet_fv() -> ParityAutomaton {
    let mut b = builder().state("init", 1).state("P", 1);
    for c in BITS {
        for y in BITS {
            b = b.state(&s_name("Int", c, y), 1).state(&s_name("Pt", c, y), 1);
        }
    }
    b = b.state("J", 2).state("D", 1).default_to("init", "P").default_to("J", "J").default_to("D", "D");
    for c in BITS {
        for y in BITS {
            b = b.transition("P", c, y, &s_name("Int", c, y));
            let int = s_name("Int", c, y);
            let pt = s_name("Pt", c, y);
            for x in BITS {
                for y2 in BITS {
                    // point after an interval
                    let to = if x != c {
                        "D".into()
                    } else if y2 != y {
                        "J".into()
                    } else {
                        pt.clone()
                    };
                    b = b.transition(&int, x, y2, &to);
                    // interval after a point
                    let to = if y2 != y {
                        "J".into()
                    } else if x != c {
                        "D".into()
                    } else {
                        int.clone()
                    };
                    b = b.transition(&pt, x, y2, &to);
                }
            }
        }
    }
    b.build().expect("fixture")
}

fn s_name(base: &str, x: &str, y: &str) -> alloc::string::String {
    alloc::format!("{base}{x}{y}")
}
