//! Event simulation of reaction-limited execution.
//!
//! Times are integer nanoseconds. Factories all start at t=0 and deliver
//! states round-robin; states are consumed first-in first-out in node order.
//! Events at equal times keep their creation order.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factory::{self, FactorySpec, PhysicalAssumptions};
use crate::rational::{self, int, Q};

/// Converts µs to ns, rounding up to the next whole ns.
pub fn to_ns(us: &Q) -> Result<u64> {
    if *us < int(0) {
        return Err(Error::argument(format!("negative duration {us} µs")));
    }
    u64::try_from(rational::ceil(&(us * int(1000))))
        .map_err(|_| Error::capacity(format!("duration {us} µs does not fit in ns")))
}

/// Dependencies between Toffolis. Node ids are a topological order: every
/// edge `(a, b)` has `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToffoliDag {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    measurement_depth: usize,
}

impl ToffoliDag {
    pub fn new(num_nodes: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        for &(a, b) in &edges {
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::argument(format!(
                    "edge ({a}, {b}) out of range for {num_nodes} nodes"
                )));
            }
            if a >= b {
                return Err(Error::contract(format!(
                    "edge ({a}, {b}) is not forward; the graph must be acyclic and topologically numbered"
                )));
            }
        }
        let mut dag = ToffoliDag {
            num_nodes,
            edges,
            measurement_depth: 0,
        };
        dag.measurement_depth = dag.longest_path();
        Ok(dag)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Nodes on the longest dependency path.
    pub fn measurement_depth(&self) -> usize {
        self.measurement_depth
    }

    pub fn predecessors(&self) -> Vec<Vec<usize>> {
        let mut preds = vec![Vec::new(); self.num_nodes];
        for &(a, b) in &self.edges {
            preds[b].push(a);
        }
        preds
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        let mut succ = vec![Vec::new(); self.num_nodes];
        for &(a, b) in &self.edges {
            succ[a].push(b);
        }
        succ
    }

    fn longest_path(&self) -> usize {
        let preds = self.predecessors();
        let mut depth = vec![0usize; self.num_nodes];
        for v in 0..self.num_nodes {
            depth[v] = 1 + preds[v].iter().map(|&p| depth[p]).max().unwrap_or(0);
        }
        depth.into_iter().max().unwrap_or(0)
    }
}

/// The ripple-carry adder's Toffolis: one chain of `2m - 3`.
pub fn build_adder_dag(m: usize) -> Result<ToffoliDag> {
    if m < 2 {
        return Err(Error::argument(format!(
            "adder width must be at least 2, got {m}"
        )));
    }
    let n = 2 * m - 3;
    ToffoliDag::new(n, (1..n).map(|i| (i - 1, i)).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    StateReady,
    Consume,
    ReactionDecision,
    CnotWindow,
    PhaseBoundary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Event {
    pub time_ns: u64,
    pub kind: EventKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factory: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corridor: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ns: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase: Option<String>,
}

impl Event {
    fn new(time_ns: u64, kind: EventKind) -> Self {
        Event {
            time_ns,
            kind,
            factory: None,
            state: None,
            node: None,
            corridor: None,
            duration_ns: None,
            phase: None,
        }
    }
}

/// What sets the pace of a simulated run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Limiter {
    Reaction,
    Access,
    Supply,
}

impl fmt::Display for Limiter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limiter::Reaction => "reaction time",
            Limiter::Access => "CNOT access",
            Limiter::Supply => "CCZ supply",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScheduleTrace {
    pub events: Vec<Event>,
    pub makespan_ns: u64,
    pub limiter: Limiter,
    pub n_factories: usize,
    /// States each factory delivered by the makespan.
    pub produced: Vec<usize>,
    /// States taken from each factory.
    pub consumed: Vec<usize>,
}

impl ScheduleTrace {
    pub fn makespan_ms(&self) -> f64 {
        self.makespan_ns as f64 / 1e6
    }

    pub fn decisions(&self) -> impl Iterator<Item = &Event> {
        self.events
            .iter()
            .filter(|e| e.kind == EventKind::ReactionDecision)
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&serde_json::to_string(e).expect("events serialize"));
            out.push('\n');
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "makespan         {:.3} ms", self.makespan_ms());
        let _ = writeln!(s, "limited by       {}", self.limiter);
        let _ = writeln!(s, "factories        {}", self.n_factories);
        let _ = writeln!(
            s,
            "states consumed  {}",
            self.consumed.iter().sum::<usize>()
        );
        let _ = writeln!(s, "utilization per factory (consumed / delivered)");
        for (f, (&c, &p)) in self.consumed.iter().zip(&self.produced).enumerate() {
            let u = if p == 0 { 0.0 } else { c as f64 / p as f64 };
            let _ = writeln!(s, "  factory {f:>3}  {c:>6} / {p:<6} {:>6.1}%", 100.0 * u);
        }
        s
    }

    /// Keeps only events within `[from_ns, to_ns]`.
    pub fn window(&self, from_ns: u64, to_ns: u64) -> ScheduleTrace {
        ScheduleTrace {
            events: self
                .events
                .iter()
                .filter(|e| (from_ns..=to_ns).contains(&e.time_ns))
                .cloned()
                .collect(),
            ..self.clone()
        }
    }
}

/// Options shared by the simulators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SimOptions {
    /// Delivered-but-unconsumed states allowed to wait; a factory holding a
    /// finished state stalls until a slot frees. `None` is unbounded.
    pub buffer: Option<usize>,
}

/// Ready times of states delivered round-robin by `n` factories of depth
/// `depth`, following the consumption times fed back through `consumed`.
struct Supply {
    n: usize,
    depth: u64,
    buffer: Option<usize>,
    /// Time each delivered state entered the buffer.
    enter: Vec<u64>,
}

impl Supply {
    fn new(n: usize, depth: u64, buffer: Option<usize>) -> Self {
        Supply {
            n,
            depth,
            buffer,
            enter: Vec::new(),
        }
    }

    /// Delivery time of state `j`; `consume` holds the consumption times of
    /// states before `j` that have been used. Returns `None` when the state
    /// would wait on a consumption that never happens.
    fn deliver(&mut self, j: usize, consume: &[u64]) -> Option<u64> {
        debug_assert_eq!(j, self.enter.len());
        let start = if j >= self.n {
            self.enter[j - self.n]
        } else {
            0
        };
        let done = start + self.depth;
        let enter = match self.buffer {
            Some(w) if j >= w => done.max(*consume.get(j - w)?),
            _ => done,
        };
        self.enter.push(enter);
        Some(enter)
    }
}

fn check_factories(n_factories: usize) -> Result<()> {
    if n_factories == 0 {
        return Err(Error::argument("need at least one factory"));
    }
    Ok(())
}

fn supply_limited(spec: &FactorySpec, a: &PhysicalAssumptions, n: usize) -> bool {
    let (_, _, eff, _) = factory::rates(spec, a);
    eff * int(n as i128) < a.reaction_rate_khz()
}

/// Adds delivered states after the last consumption up to `makespan` and
/// builds the per-factory counts.
fn finish(
    mut events: Vec<Event>,
    supply: &mut Supply,
    consume: &[u64],
    makespan: u64,
    limiter: Limiter,
) -> ScheduleTrace {
    let n = supply.n;
    let mut j = supply.enter.len();
    loop {
        match supply.deliver(j, consume) {
            Some(t) if t <= makespan => {
                let mut e = Event::new(t, EventKind::StateReady);
                e.factory = Some(j % n);
                e.state = Some(j);
                events.push(e);
                j += 1;
            }
            _ => break,
        }
    }
    let mut produced = vec![0; n];
    let mut consumed = vec![0; n];
    for e in &events {
        match e.kind {
            EventKind::StateReady => produced[e.factory.expect("set")] += 1,
            EventKind::Consume => consumed[e.factory.expect("set")] += 1,
            _ => {}
        }
    }
    // Stable: equal times keep creation order.
    events.sort_by_key(|e| e.time_ns);
    ScheduleTrace {
        events,
        makespan_ns: makespan,
        limiter,
        n_factories: n,
        produced,
        consumed,
    }
}

/// Each node waits for its predecessors' decisions and for a delivered
/// state, then decides one reaction time later.
pub fn simulate_reaction_limited(
    dag: &ToffoliDag,
    spec: &FactorySpec,
    a: &PhysicalAssumptions,
    n_factories: usize,
    options: SimOptions,
) -> Result<ScheduleTrace> {
    check_factories(n_factories)?;
    spec.validate()?;
    let depth = to_ns(&(spec.ccz_depth_cycles() * a.cycle_time))?;
    let reaction = to_ns(&a.reaction_time)?;
    let preds = dag.predecessors();
    let mut supply = Supply::new(n_factories, depth, options.buffer);
    let mut consume = Vec::with_capacity(dag.num_nodes());
    let mut decision = vec![0u64; dag.num_nodes()];
    let mut events = Vec::with_capacity(3 * dag.num_nodes());
    for v in 0..dag.num_nodes() {
        let ready = supply
            .deliver(v, &consume)
            .ok_or_else(|| Error::argument("buffer of zero states can never be filled"))?;
        let mut e = Event::new(ready, EventKind::StateReady);
        e.factory = Some(v % n_factories);
        e.state = Some(v);
        events.push(e);
        let after = preds[v].iter().map(|&p| decision[p]).max().unwrap_or(0);
        let start = after.max(ready);
        consume.push(start);
        let mut e = Event::new(start, EventKind::Consume);
        e.factory = Some(v % n_factories);
        e.state = Some(v);
        e.node = Some(v);
        events.push(e);
        decision[v] = start + reaction;
        let mut e = Event::new(decision[v], EventKind::ReactionDecision);
        e.node = Some(v);
        events.push(e);
    }
    let makespan = decision.iter().copied().max().unwrap_or(0);
    let limiter = if supply_limited(spec, a, n_factories) {
        Limiter::Supply
    } else {
        Limiter::Reaction
    };
    Ok(finish(events, &mut supply, &consume, makespan, limiter))
}

/// Multi-target CNOT rate through `sides` access corridors, in kHz.
pub fn cnot_access_rate(d: u32, a: &PhysicalAssumptions, sides: u32) -> Result<Q> {
    if d < 3 {
        return Err(Error::argument(format!(
            "code distance must be at least 3, got {d}"
        )));
    }
    if !(1..=2).contains(&sides) {
        return Err(Error::argument(format!(
            "access sides must be 1 or 2, got {sides}"
        )));
    }
    if a.cycle_time <= int(0) {
        return Err(Error::argument("cycle time must be positive"));
    }
    Ok(int(1000 * i128::from(sides)) / (int(d.into()) * a.cycle_time))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LookupSpec {
    pub entries: usize,
    pub output_bits: usize,
    pub access_sides: u32,
    pub toffoli_count: usize,
}

impl LookupSpec {
    /// Unary iteration: `entries - 1` Toffolis.
    pub fn new(entries: usize, output_bits: usize, access_sides: u32) -> Result<Self> {
        if entries < 2 {
            return Err(Error::argument("a lookup needs at least 2 entries"));
        }
        let spec = LookupSpec {
            entries,
            output_bits,
            access_sides,
            toffoli_count: entries - 1,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.access_sides) {
            return Err(Error::argument(format!(
                "access sides must be 1 or 2, got {}",
                self.access_sides
            )));
        }
        if self.toffoli_count == 0 {
            return Err(Error::argument("toffoli count must be at least 1"));
        }
        Ok(())
    }
}

/// Step rates (kHz) of the three constraints on a lookup.
pub fn lookup_rates(
    lookup: &LookupSpec,
    spec: &FactorySpec,
    a: &PhysicalAssumptions,
    n_factories: usize,
) -> Result<[(Limiter, Q); 3]> {
    let (_, _, eff, _) = factory::rates(spec, a);
    Ok([
        (Limiter::Reaction, a.reaction_rate_khz()),
        (
            Limiter::Access,
            cnot_access_rate(spec.d2, a, lookup.access_sides)?,
        ),
        (Limiter::Supply, eff * int(n_factories as i128)),
    ])
}

/// Each Toffoli step opens a `d2`-cycle CNOT window on the next corridor in
/// turn; a corridor takes no new window until its last one closes.
pub fn simulate_lookup(
    lookup: &LookupSpec,
    spec: &FactorySpec,
    a: &PhysicalAssumptions,
    n_factories: usize,
    options: SimOptions,
) -> Result<ScheduleTrace> {
    lookup.validate()?;
    check_factories(n_factories)?;
    spec.validate()?;
    let depth = to_ns(&(spec.ccz_depth_cycles() * a.cycle_time))?;
    let reaction = to_ns(&a.reaction_time)?;
    let window = to_ns(&(int(spec.d2.into()) * a.cycle_time))?;
    let sides = lookup.access_sides as usize;
    let mut corridor_free = vec![0u64; sides];
    let mut supply = Supply::new(n_factories, depth, options.buffer);
    let mut consume = Vec::with_capacity(lookup.toffoli_count);
    let mut events = Vec::with_capacity(4 * lookup.toffoli_count);
    let mut last = 0u64;
    for v in 0..lookup.toffoli_count {
        let c = v % sides;
        let ready = supply
            .deliver(v, &consume)
            .ok_or_else(|| Error::argument("buffer of zero states can never be filled"))?;
        let mut e = Event::new(ready, EventKind::StateReady);
        e.factory = Some(v % n_factories);
        e.state = Some(v);
        events.push(e);
        let start = last.max(ready).max(corridor_free[c]);
        consume.push(start);
        let mut e = Event::new(start, EventKind::Consume);
        e.factory = Some(v % n_factories);
        e.state = Some(v);
        e.node = Some(v);
        events.push(e);
        let mut e = Event::new(start, EventKind::CnotWindow);
        e.node = Some(v);
        e.corridor = Some(c);
        e.duration_ns = Some(window);
        events.push(e);
        corridor_free[c] = start + window;
        last = start + reaction;
        let mut e = Event::new(last, EventKind::ReactionDecision);
        e.node = Some(v);
        events.push(e);
    }
    let makespan = last.max(corridor_free.iter().copied().max().unwrap_or(0));
    let rates = lookup_rates(lookup, spec, a, n_factories)?;
    let limiter = rates
        .iter()
        .min_by(|x, y| x.1.cmp(&y.1))
        .map(|r| r.0)
        .expect("three rates");
    Ok(finish(events, &mut supply, &consume, makespan, limiter))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Phase {
    pub name: String,
    pub start_ns: u64,
    pub duration_ns: u64,
    pub toffolis: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timeline {
    pub phases: Vec<Phase>,
    pub trace: ScheduleTrace,
}

impl Timeline {
    pub fn total_ns(&self) -> u64 {
        self.phases.iter().map(|p| p.duration_ns).sum()
    }
}

/// Lookup followed by an addition of the looked-up value.
///
/// Phases: `spread` and `squeeze` are one `d2`-cycle rearrangement each;
/// `lookup` comes from [`simulate_lookup`]; `add_up` (the MAJ wave) and
/// `add_down` (the UMA wave) split the [`simulate_reaction_limited`] run;
/// `uncompute` is measurement based, costs no Toffolis and one reaction time.
pub fn phase_timeline(
    lookup: &LookupSpec,
    adder_m: usize,
    spec: &FactorySpec,
    a: &PhysicalAssumptions,
    n_factories: usize,
) -> Result<Timeline> {
    let dag = build_adder_dag(adder_m)?;
    let lookup_trace = simulate_lookup(lookup, spec, a, n_factories, SimOptions::default())?;
    let add = simulate_reaction_limited(&dag, spec, a, n_factories, SimOptions::default())?;
    let rearrange = to_ns(&(int(spec.d2.into()) * a.cycle_time))?;
    let maj = adder_m - 1;
    let up_end = add
        .decisions()
        .find(|e| e.node == Some(maj - 1))
        .map(|e| e.time_ns)
        .expect("MAJ wave has a last node");
    let durations = [
        ("spread", rearrange, 0),
        ("lookup", lookup_trace.makespan_ns, lookup.toffoli_count),
        ("squeeze", rearrange, 0),
        ("add_up", up_end, maj),
        ("add_down", add.makespan_ns - up_end, dag.num_nodes() - maj),
        ("uncompute", to_ns(&a.reaction_time)?, 0),
    ];
    let mut phases = Vec::new();
    let mut events = Vec::new();
    let mut t = 0u64;
    for (name, duration, toffolis) in durations {
        let mut e = Event::new(t, EventKind::PhaseBoundary);
        e.phase = Some(name.to_string());
        e.duration_ns = Some(duration);
        events.push(e);
        phases.push(Phase {
            name: name.to_string(),
            start_ns: t,
            duration_ns: duration,
            toffolis,
        });
        t += duration;
    }
    let mut end = Event::new(t, EventKind::PhaseBoundary);
    end.phase = Some("end".to_string());
    events.push(end);
    let trace = ScheduleTrace {
        events,
        makespan_ns: t,
        limiter: lookup_trace.limiter,
        n_factories,
        produced: lookup_trace.produced,
        consumed: lookup_trace.consumed,
    };
    Ok(Timeline { phases, trace })
}
