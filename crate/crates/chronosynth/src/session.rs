//! Plays of the arena game with a human or a script as the input player.
//!
//! Script lines (and interactive input) are one command each:
//! `accept`, `choose <letter|node>`, `interrupt <letter> <time> [left|right]`,
//! `late <letter>` (big edge, at least one time unit into the block),
//! `lag <letter>` (first position after the lag), `quit`. Transcript lines
//! are accepted too, so a printed transcript replays as a script.

use std::io::{BufRead, Write};

use chronosynth_core::arena::{EdgeSize, InterruptKind, NodeKind, Owner};
use chronosynth_core::continuous_synth::witness_to_player;
use chronosynth_core::continuous_synth::{enumerate_choices, PositionalChoice};
use chronosynth_core::game_sim::{
    adjudicate, interrupt_along, IMove, OutputPlayer, PlayOutcome, PlayState, Reason, Undecided,
};
use chronosynth_core::time::{parse_time, Time};
use chronosynth_core::Arena;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    Accept,
    Choose(String),
    Interrupt { letter: String, time: Time, kind: Option<InterruptKind> },
    Late(String),
    AfterLag(String),
    Quit,
}

fn kind_of(s: &str) -> Result<InterruptKind, String> {
    match s {
        "left" => Ok(InterruptKind::Left),
        "right" => Ok(InterruptKind::Right),
        _ => Err(format!("unknown interrupt kind `{s}`")),
    }
}

/// `None` for blank lines, comments and output-player transcript lines.
pub fn parse_command(line: &str) -> Result<Option<Command>, String> {
    let line = line.trim();
    if line.is_empty() || line.starts_with('#') || line.starts_with("O ") {
        return Ok(None);
    }
    let line = line.strip_prefix("I ").unwrap_or(line);
    let words: Vec<&str> = line.split_whitespace().collect();
    let need =
        |n: usize| if words.len() >= n { Ok(()) } else { Err(format!("`{}` needs {} argument(s)", words[0], n - 1)) };
    let cmd = match words[0] {
        "accept" => Command::Accept,
        "quit" | "q" => Command::Quit,
        "choose" => {
            need(2)?;
            Command::Choose(words[1..].join(" "))
        }
        "late" => {
            need(2)?;
            Command::Late(words[1].to_string())
        }
        "lag" => {
            need(2)?;
            Command::AfterLag(words[1].to_string())
        }
        "interrupt" if words.get(1).is_some_and(|w| w.contains('=')) => {
            let field = |k: &str| words.iter().find_map(|w| w.strip_prefix(k).and_then(|r| r.strip_prefix('=')));
            let time = parse_time(field("t").ok_or("missing t=")?).map_err(|e| e.to_string())?;
            let letter = field("letter").ok_or("missing letter=")?.to_string();
            let kind = field("kind").map(kind_of).transpose()?;
            Command::Interrupt { letter, time, kind }
        }
        "interrupt" => {
            need(3)?;
            let time = parse_time(words[2]).map_err(|e| e.to_string())?;
            let kind = words.get(3).map(|k| kind_of(k)).transpose()?;
            Command::Interrupt { letter: words[1].to_string(), time, kind }
        }
        other => return Err(format!("unknown command `{other}`")),
    };
    Ok(Some(cmd))
}

fn letter_index(ar: &Arena, name: &str) -> Result<usize, String> {
    ar.automaton.in_index(name).ok_or_else(|| format!("`{name}` is not an input letter"))
}

/// Translates a command into a move at the current node.
pub fn to_move(play: &PlayState, cmd: &Command) -> Result<IMove, String> {
    let ar = play.arena();
    let v = play.node();
    let at_up = matches!(ar.nodes[v], NodeKind::Up { .. });
    let first_big = |b: usize| {
        ar.out[v]
            .iter()
            .copied()
            .filter(|&e| ar.edges[e].size == EdgeSize::Big && ar.edges[e].letter == Some(b))
            .min_by_key(|&e| ar.edges[e].position)
            .ok_or_else(|| format!("no interrupt with letter `{}` here", ar.automaton.sigma_in[b]))
    };
    match cmd {
        Command::Accept => Ok(IMove::Accept),
        Command::Quit => Err("quit".into()),
        Command::Choose(t) if !at_up => ar.out[v]
            .iter()
            .copied()
            .find(|&e| {
                let ed = &ar.edges[e];
                ar.node_label(ed.to) == *t || ed.letter.is_some_and(|l| ar.automaton.sigma_in[l] == *t)
            })
            .map(|edge| IMove::Choose { edge })
            .ok_or_else(|| format!("no edge `{t}` from {}", ar.node_label(v))),
        Command::Interrupt { letter, time, kind } if at_up => {
            Ok(IMove::Interrupt { time: time.clone(), letter: letter_index(ar, letter)?, kind: *kind })
        }
        Command::Late(b) if at_up => Ok(interrupt_along(play, first_big(letter_index(ar, b)?)?, true)),
        Command::AfterLag(b) if at_up => Ok(interrupt_along(play, first_big(letter_index(ar, b)?)?, false)),
        _ if at_up => Err("the input player must accept or interrupt here".into()),
        _ => Err("no committed block to interrupt; use `choose`".into()),
    }
}

pub fn reason_name(r: Reason) -> &'static str {
    match r {
        Reason::AcceptedFinal => "accepted_final",
        Reason::RejectedFinal => "rejected_final",
        Reason::ZenoOWin => "zeno_o_win",
        Reason::ParityEven => "parity_even",
        Reason::ParityOdd => "parity_odd",
    }
}

pub fn outcome_line(o: &Result<PlayOutcome, Undecided>) -> String {
    match o {
        Ok(p) => {
            let w = if p.winner == Owner::Output { "O" } else { "I" };
            format!("outcome: winner={w} reason={}", reason_name(p.reason))
        }
        Err(Undecided(why)) => format!("outcome: undecided ({why})"),
    }
}

/// The synthesized witness when there is one, otherwise the first complete
/// choice, so that losing specs can be played too.
pub fn output_choice(arena: &Arena, witness: Option<PositionalChoice>) -> PositionalChoice {
    witness.unwrap_or_else(|| {
        enumerate_choices(arena, 1).into_iter().next().unwrap_or_else(|| PositionalChoice::empty(arena))
    })
}

fn options_hint(play: &PlayState) -> String {
    let ar = play.arena();
    let v = play.node();
    match ar.nodes[v] {
        NodeKind::Up { .. } => {
            let w = ar.up_word(v).expect("up node");
            let (start, scale) = play.block().expect("block");
            let names = |s: &[usize]| s.iter().map(|&q| ar.automaton.states[q].as_str()).collect::<Vec<_>>().join(" ");
            format!(
                "block from t={start} scale={scale} u={}({})^w; lag ends at t={}; accept | interrupt <letter> <time> [left|right] | late <letter> | lag <letter>",
                names(&w.lag),
                names(&w.period),
                play.time_of_position(w.lag.len()).expect("block"),
            )
        }
        _ => {
            let opts: Vec<String> = ar.out[v]
                .iter()
                .map(|&e| {
                    let l = ar.edges[e].letter.map(|l| ar.automaton.sigma_in[l].clone()).unwrap_or_default();
                    format!("{l} -> {}", ar.node_label(ar.edges[e].to))
                })
                .collect();
            format!("choose one of: {}", opts.join(", "))
        }
    }
}

pub struct SessionReport {
    pub transcript: Vec<String>,
    pub duration: Time,
    pub outcome: Result<PlayOutcome, Undecided>,
}

impl SessionReport {
    pub fn render(&self) -> String {
        let mut s = String::new();
        for l in &self.transcript {
            s.push_str(l);
            s.push('\n');
        }
        s.push_str(&format!("duration: {}\n", self.duration));
        s.push_str(&outcome_line(&self.outcome));
        s.push('\n');
        s
    }
}

/// Runs a play with `choice` as the output strategy and input moves read
/// from `input`. Interactive sessions print prompts to `prompt` and re-prompt
/// on bad input; scripts fail on the first bad line.
pub fn run_session(
    arena: &Arena,
    choice: &PositionalChoice,
    input: &mut dyn BufRead,
    prompt: Option<&mut dyn Write>,
    step_cap: usize,
) -> Result<SessionReport, String> {
    let mut o = witness_to_player(choice);
    let mut play = PlayState::new(arena);
    let mut prompt = prompt;
    let mut line_no = 0;
    'play: while !play.is_over() && play.trace().len() < step_cap {
        if play.to_move() == Owner::Output {
            if choice.get(play.node()).is_none() {
                return Err(format!("output strategy undefined at {}", arena.node_label(play.node())));
            }
            let m = o.choose(&play);
            play.apply_o(m).map_err(|e| e.to_string())?;
            continue;
        }
        loop {
            if let Some(p) = prompt.as_deref_mut() {
                let _ = writeln!(p, "t={} at {}", play.time(), arena.node_label(play.node()));
                let _ = writeln!(p, "  {}", options_hint(&play));
                let _ = write!(p, "> ");
                let _ = p.flush();
            }
            let mut line = String::new();
            if input.read_line(&mut line).map_err(|e| e.to_string())? == 0 {
                break 'play;
            }
            line_no += 1;
            let attempt = parse_command(&line).and_then(|c| match c {
                None => Ok(None),
                Some(Command::Quit) => Err("quit".to_string()),
                Some(c) => to_move(&play, &c).map(Some),
            });
            let m = match attempt {
                Ok(None) => continue,
                Ok(Some(m)) => m,
                Err(q) if q == "quit" => break 'play,
                Err(e) => match prompt.as_deref_mut() {
                    Some(p) => {
                        let _ = writeln!(p, "  rejected: {e}");
                        continue;
                    }
                    None => return Err(format!("line {line_no}: {e}")),
                },
            };
            match play.apply_i(m) {
                Ok(()) => break,
                Err(e) => match prompt.as_deref_mut() {
                    Some(p) => {
                        let _ = writeln!(p, "  illegal move: {e}");
                    }
                    None => return Err(format!("line {line_no}: illegal move: {e}")),
                },
            }
        }
    }
    Ok(SessionReport { transcript: play.transcript(), duration: play.time().clone(), outcome: adjudicate(&play) })
}
