//! Deterministic interleaving of semidecision procedures.
//!
//! [`Geometric`] runs tasks in doubling rounds: in round `R`, task `i <= R`
//! receives `2^{R-i}` quanta, so task `i` gets about a `2^{-i}` share of all
//! work. Within a round the quanta are interleaved in ruler order: slot `s`
//! (`1 <= s < 2^R`) goes to task `1 + v_2(s)`. [`day_night`] alternates two
//! tasks strictly.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

/// Outcome of one step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Step<T> {
    Running,
    Halted(T),
    Failed(String),
}

/// A resumable unit of search. `step` must be deterministic.
pub trait Task {
    type Output;
    fn step(&mut self) -> Step<Self::Output>;
}

impl<T, U: Task<Output = T> + ?Sized> Task for Box<U> {
    type Output = T;
    fn step(&mut self) -> Step<T> {
        (**self).step()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status<T> {
    Running,
    Halted(T),
    Failed(String),
}

/// One executed quantum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Event<T> {
    pub round: u32,
    /// 1-based.
    pub task_id: usize,
    /// Quanta this task has received so far, including this one.
    pub quanta: u64,
    pub status: Status<T>,
}

struct Slot<T> {
    task: Box<dyn Task<Output = T>>,
    quanta: u64,
    done: bool,
}

/// Supplies task `i` (1-based) when round `i` begins; `None` if no more
/// tasks exist yet.
pub type TaskSource<T> = Box<dyn FnMut(usize) -> Option<Box<dyn Task<Output = T>>>>;

pub struct Geometric<T> {
    slots: Vec<Slot<T>>,
    source: Option<TaskSource<T>>,
    quantum: u64,
    round: u32,
    pos: u128,
    total: u64,
}

impl<T: Clone> Geometric<T> {
    /// `quantum` steps per quantum.
    pub fn new(quantum: u64) -> Self {
        Geometric { slots: Vec::new(), source: None, quantum: quantum.max(1), round: 0, pos: 0, total: 0 }
    }

    pub fn with_source(quantum: u64, source: TaskSource<T>) -> Self {
        let mut g = Self::new(quantum);
        g.source = Some(source);
        g
    }

    pub fn push(&mut self, task: Box<dyn Task<Output = T>>) -> usize {
        self.slots.push(Slot { task, quanta: 0, done: false });
        self.slots.len()
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    pub fn round(&self) -> u32 {
        self.round
    }

    /// Quanta executed so far.
    pub fn total_quanta(&self) -> u64 {
        self.total
    }

    pub fn quanta_of(&self, task_id: usize) -> u64 {
        self.slots[task_id - 1].quanta
    }

    fn live(&self) -> bool {
        self.slots.iter().any(|s| !s.done)
    }

    fn begin_round(&mut self) {
        self.round += 1;
        self.pos = 0;
        if let Some(src) = self.source.as_mut() {
            match src(self.slots.len() + 1) {
                Some(t) => self.slots.push(Slot { task: t, quanta: 0, done: false }),
                None => self.source = None,
            }
        }
    }

    /// Next slot after `pos` belonging to task `t`: an odd multiple of `2^{t-1}`.
    fn next_slot(t: usize, pos: u128) -> u128 {
        let a = 1u128 << (t - 1);
        let mut m = pos / a + 1;
        if m % 2 == 0 {
            m += 1;
        }
        m * a
    }

    /// Run the next quantum. `None` once every task has finished and the
    /// source is exhausted.
    pub fn next_event(&mut self) -> Option<Event<T>> {
        loop {
            if self.round == 0 {
                self.begin_round();
            }
            let end = 1u128 << self.round;
            let upto = (self.round as usize).min(self.slots.len());
            let next = (1..=upto)
                .filter(|&t| !self.slots[t - 1].done)
                .map(|t| (Self::next_slot(t, self.pos), t))
                .min();
            let (pos, id) = match next {
                Some((p, t)) if p < end => (p, t),
                _ => {
                    if !self.live() && self.source.is_none() {
                        return None;
                    }
                    self.begin_round();
                    continue;
                }
            };
            self.pos = pos;
            let slot = &mut self.slots[id - 1];
            slot.quanta += 1;
            self.total += 1;
            let mut status = Status::Running;
            for _ in 0..self.quantum {
                match slot.task.step() {
                    Step::Running => {}
                    Step::Halted(v) => {
                        status = Status::Halted(v);
                        break;
                    }
                    Step::Failed(msg) => {
                        status = Status::Failed(msg);
                        break;
                    }
                }
            }
            if !matches!(status, Status::Running) {
                slot.done = true;
            }
            return Some(Event { round: self.round, task_id: id, quanta: slot.quanta, status });
        }
    }

    /// Run up to `max_quanta` quanta, calling `on_halt(task_id, value)` once
    /// per halting task. Returns the events.
    pub fn run(&mut self, max_quanta: u64, mut on_halt: impl FnMut(usize, &T)) -> Vec<Event<T>> {
        let mut out = Vec::new();
        for _ in 0..max_quanta {
            let Some(ev) = self.next_event() else { break };
            if let Status::Halted(v) = &ev.status {
                on_halt(ev.task_id, v);
            }
            out.push(ev);
        }
        out
    }
}

/// Which side of [`day_night`] finished first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DayNight<A, B> {
    Day { value: A, quanta: u64 },
    Night { value: B, quanta: u64 },
    /// Neither halted within the cap. Failed tasks are listed by side.
    Undecided { cap: u64, day_failed: Option<String>, night_failed: Option<String> },
}

/// Alternate one quantum of `day` and one of `night`, day first, until one
/// halts or `cap` total quanta have run. A failed task stops being scheduled.
pub fn day_night<A, B>(
    day: &mut dyn Task<Output = A>,
    night: &mut dyn Task<Output = B>,
    quantum: u64,
    cap: Option<u64>,
) -> DayNight<A, B> {
    let quantum = quantum.max(1);
    let mut day_failed = None;
    let mut night_failed = None;
    let mut used = 0u64;
    loop {
        if cap.is_some_and(|c| used >= c) || (day_failed.is_some() && night_failed.is_some()) {
            return DayNight::Undecided { cap: cap.unwrap_or(used), day_failed, night_failed };
        }
        let is_day = used % 2 == 0;
        used += 1;
        if is_day {
            if day_failed.is_some() {
                continue;
            }
            for _ in 0..quantum {
                match day.step() {
                    Step::Running => {}
                    Step::Halted(value) => return DayNight::Day { value, quanta: used },
                    Step::Failed(m) => {
                        day_failed = Some(m);
                        break;
                    }
                }
            }
        } else {
            if night_failed.is_some() {
                continue;
            }
            for _ in 0..quantum {
                match night.step() {
                    Step::Running => {}
                    Step::Halted(value) => return DayNight::Night { value, quanta: used },
                    Step::Failed(m) => {
                        night_failed = Some(m);
                        break;
                    }
                }
            }
        }
    }
}

/// Halts with `value` on its `halt_at`-th step; never halts if `None`.
#[derive(Clone, Debug)]
pub struct Countdown<T> {
    pub halt_at: Option<u64>,
    pub value: T,
    pub steps: u64,
}

impl<T> Countdown<T> {
    pub fn new(halt_at: Option<u64>, value: T) -> Self {
        Countdown { halt_at, value, steps: 0 }
    }
}

impl<T: Clone> Task for Countdown<T> {
    type Output = T;
    fn step(&mut self) -> Step<T> {
        self.steps += 1;
        match self.halt_at {
            Some(h) if self.steps >= h => Step::Halted(self.value.clone()),
            _ => Step::Running,
        }
    }
}

/// Search `m = start, start+1, ...` for the first `m` with `pred(m)`; one
/// candidate per step. Stands in for searches with no effective bound, such
/// as looking for a rational equivalence between two cycles.
pub struct SearchTask<P> {
    pub next: u64,
    pred: P,
}

impl<P: FnMut(u64) -> bool> SearchTask<P> {
    pub fn new(start: u64, pred: P) -> Self {
        SearchTask { next: start, pred }
    }
}

impl<P: FnMut(u64) -> bool> Task for SearchTask<P> {
    type Output = u64;
    fn step(&mut self) -> Step<u64> {
        let m = self.next;
        self.next += 1;
        if (self.pred)(m) {
            Step::Halted(m)
        } else {
            Step::Running
        }
    }
}
