//! Panic isolation for dovetailed tasks, the NDJSON trace format and the
//! demonstration task family behind `picardkit dovetail --demo`.

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use picardkit_core::dovetail::{Event, Geometric, SearchTask, Status, Step, Task};
use serde::{Deserialize, Serialize};

use crate::report::{DovetailSection, FailureEntry, HaltEntry};

/// Turns a panic inside `step` into [`Step::Failed`]; the scheduler then
/// retires the task and keeps running the others.
pub struct Isolated<T> {
    inner: Box<dyn Task<Output = T>>,
}

impl<T> Isolated<T> {
    pub fn new(inner: Box<dyn Task<Output = T>>) -> Self {
        Isolated { inner }
    }
}

fn panic_message(p: &(dyn std::any::Any + Send)) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        s.to_string()
    } else if let Some(s) = p.downcast_ref::<String>() {
        s.clone()
    } else {
        String::from("task panicked")
    }
}

impl<T> Task for Isolated<T> {
    type Output = T;
    fn step(&mut self) -> Step<T> {
        match catch_unwind(AssertUnwindSafe(|| self.inner.step())) {
            Ok(s) => s,
            Err(p) => Step::Failed(panic_message(p.as_ref())),
        }
    }
}

/// One line of the trace file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TraceEvent {
    pub round: u32,
    pub task_id: usize,
    pub quanta: u64,
    /// `running`, `halted` or `failed`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TraceEvent {
    pub fn from_event(e: &Event<u64>) -> Self {
        let (status, value, error) = match &e.status {
            Status::Running => ("running", None, None),
            Status::Halted(v) => ("halted", Some(*v), None),
            Status::Failed(m) => ("failed", None, Some(m.clone())),
        };
        TraceEvent { round: e.round, task_id: e.task_id, quanta: e.quanta, status: status.to_string(), value, error }
    }
}

pub fn write_trace(out: &mut dyn Write, events: &[Event<u64>]) -> std::io::Result<()> {
    for e in events {
        serde_json::to_writer(&mut *out, &TraceEvent::from_event(e))?;
        out.write_all(b"\n")?;
    }
    out.flush()
}

/// Modulus of the demonstration searches.
pub const DEMO_MODULUS: u64 = 1009;

/// Task `i` searches for `m >= 1` with `m^2 = i (mod 1009)`. It halts
/// exactly when `i` is a nonzero square mod 1009 (the first non-square is
/// 11) and runs forever otherwise, which is the shape of a semidecision
/// procedure.
pub fn demo_task(i: usize, panic_at: Option<usize>) -> Box<dyn Task<Output = u64>> {
    let target = i as u64 % DEMO_MODULUS;
    let explode = panic_at == Some(i);
    let search = SearchTask::new(1, move |m: u64| {
        if explode && m == 1 {
            panic!("injected failure in task {i}");
        }
        target != 0 && (m % DEMO_MODULUS) * (m % DEMO_MODULUS) % DEMO_MODULUS == target
    });
    Box::new(Isolated::new(Box::new(search)))
}

/// Summary of a finished run plus the raw events.
pub fn summarize(events: &[Event<u64>], tasks: usize, rounds: u32) -> DovetailSection {
    let mut halts = Vec::new();
    let mut failures = Vec::new();
    let mut running_max = Vec::new();
    let mut best = 0u64;
    for (k, e) in events.iter().enumerate() {
        match &e.status {
            Status::Halted(v) => {
                best = best.max(*v);
                running_max.push(best);
                halts.push(HaltEntry { task_id: e.task_id, value: *v, round: e.round, at_quantum: k as u64 + 1 });
            }
            Status::Failed(m) => failures.push(FailureEntry { task_id: e.task_id, message: m.clone() }),
            Status::Running => {}
        }
    }
    DovetailSection { tasks, total_quanta: events.len() as u64, rounds, halts, failures, running_max }
}

/// Run the demonstration family with tasks appended lazily, one per round.
pub fn run_demo(tasks: usize, quanta: u64, quantum: u64, panic_at: Option<usize>) -> (Vec<Event<u64>>, DovetailSection) {
    let source = move |i: usize| if i <= tasks { Some(demo_task(i, panic_at)) } else { None };
    let mut g: Geometric<u64> = Geometric::with_source(quantum, Box::new(source));
    let events = g.run(quanta, |_, _| {});
    let summary = summarize(&events, g.len(), g.round());
    (events, summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn panics_become_failures_and_others_continue() {
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {}));
        let (events, s) = run_demo(6, 20_000, 1, Some(2));
        std::panic::set_hook(prev);
        assert_eq!(s.failures.len(), 1);
        assert_eq!(s.failures[0].task_id, 2);
        assert!(s.failures[0].message.contains("injected"));
        assert!(events.iter().filter(|e| e.task_id == 2).count() <= 3);
        let halted: Vec<usize> = s.halts.iter().map(|h| h.task_id).collect();
        assert!(halted.contains(&1) && halted.contains(&3) && halted.contains(&4));
        for h in &s.halts {
            assert_eq!(h.value * h.value % DEMO_MODULUS, h.task_id as u64);
        }
    }

    #[test]
    fn trace_lines_parse_back() {
        let (events, _) = run_demo(4, 200, 1, None);
        let mut buf = Vec::new();
        write_trace(&mut buf, &events).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let parsed: Vec<TraceEvent> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        assert_eq!(parsed.len(), events.len());
        assert_eq!(parsed, events.iter().map(TraceEvent::from_event).collect::<Vec<_>>());
    }
}
