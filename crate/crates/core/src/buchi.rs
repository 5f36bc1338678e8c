//! Büchi automata over the digit alphabets of the twin dragon, together
//! with the graph machinery the dimension computation needs: product,
//! trimming, SCC decomposition with incidence matrices, and cardinality
//! classification of the ω-language.
//!
//! Every automaton in this artifact has all states terminal, so
//! acceptance of an infinite word reduces to the existence of an
//! infinite run. Operations that rely on this assert it.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cns::{digit_table, GaussianInt};
use crate::{Error, Result};

/// The alphabet of an automaton. `Binary` is the two-letter {0,1}
/// alphabet of the base α boundary automaton; `Blocks` is the 16-letter
/// alphabet of base −4 digits indexed by their 4-bit α-expansions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Alphabet {
    Binary,
    Blocks,
}

impl Alphabet {
    pub fn len(&self) -> usize {
        match self {
            Alphabet::Binary => 2,
            Alphabet::Blocks => 16,
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The digit value of a letter.
    pub fn digit(&self, letter: usize) -> GaussianInt {
        match self {
            Alphabet::Binary => GaussianInt::new(letter as i64, 0),
            Alphabet::Blocks => digit_table()[letter].value,
        }
    }

    pub fn label(&self, letter: usize) -> String {
        match self {
            Alphabet::Binary => letter.to_string(),
            Alphabet::Blocks => digit_table()[letter].value.to_string(),
        }
    }
}

/// A Büchi automaton (Q, A, E, I, T) with named states and letters
/// indexed into the shared alphabet. Duplicate (src, letter, dst)
/// triples are never stored twice; parallel edges with distinct labels
/// stay distinct because the dimension of the attractor depends on edge
/// counts, not adjacency.
#[derive(Clone, Debug)]
pub struct BuchiAutomaton {
    alphabet: Alphabet,
    names: Vec<String>,
    edges: BTreeSet<(usize, usize, usize)>,
    initial: BTreeSet<usize>,
    terminal: BTreeSet<usize>,
}

/// Cardinality class of an ω-language.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Cardinality {
    Finite(u64),
    CountablyInfinite,
    Uncountable,
}

impl BuchiAutomaton {
    pub fn new(alphabet: Alphabet) -> Self {
        BuchiAutomaton {
            alphabet,
            names: Vec::new(),
            edges: BTreeSet::new(),
            initial: BTreeSet::new(),
            terminal: BTreeSet::new(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn add_state(&mut self, name: impl Into<String>) -> usize {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn add_edge(&mut self, src: usize, letter: usize, dst: usize) {
        assert!(src < self.names.len() && dst < self.names.len());
        assert!(letter < self.alphabet.len());
        self.edges.insert((src, letter, dst));
    }

    pub fn mark_initial(&mut self, state: usize) {
        assert!(state < self.names.len());
        self.initial.insert(state);
    }

    pub fn mark_terminal(&mut self, state: usize) {
        assert!(state < self.names.len());
        self.terminal.insert(state);
    }

    pub fn mark_all_terminal(&mut self) {
        self.terminal = (0..self.names.len()).collect();
    }

    pub fn state_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.names[state]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn initial(&self) -> impl Iterator<Item = usize> + '_ {
        self.initial.iter().copied()
    }

    pub fn is_initial(&self, state: usize) -> bool {
        self.initial.contains(&state)
    }

    pub fn is_terminal(&self, state: usize) -> bool {
        self.terminal.contains(&state)
    }

    pub fn all_terminal(&self) -> bool {
        self.terminal.len() == self.names.len()
    }

    /// True when the ω-language is empty (no state remains after trim).
    pub fn is_empty_language(&self) -> Result<bool> {
        Ok(self.trim()?.state_count() == 0)
    }

    fn out_edges(&self, state: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges
            .range((state, 0, 0)..(state + 1, 0, 0))
            .map(|&(_, l, d)| (l, d))
    }

    /// Product automaton accepting L(A) ∩ L(B). Requires a shared
    /// alphabet and at least one all-terminal operand.
    pub fn product(&self, other: &BuchiAutomaton) -> Result<BuchiAutomaton> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        if !self.all_terminal() && !other.all_terminal() {
            return Err(Error::NotAllTerminal);
        }
        let mut prod = BuchiAutomaton::new(self.alphabet);
        let nb = other.state_count();
        for a in 0..self.state_count() {
            for b in 0..nb {
                prod.add_state(format!("({},{})", self.names[a], other.names[b]));
            }
        }
        for &(a, l, a2) in &self.edges {
            for &(b, lb, b2) in &other.edges {
                if l == lb {
                    prod.add_edge(a * nb + b, l, a2 * nb + b2);
                }
            }
        }
        for &a in &self.initial {
            for &b in &other.initial {
                prod.mark_initial(a * nb + b);
            }
        }
        for &a in &self.terminal {
            for &b in &other.terminal {
                prod.mark_terminal(a * nb + b);
            }
        }
        Ok(prod)
    }

    /// States lying on some cycle (nontrivial SCC or self-loop).
    fn recurrent_states(&self) -> Vec<bool> {
        let sccs = tarjan(self.state_count(), &self.adjacency());
        let mut rec = vec![false; self.state_count()];
        for comp in &sccs {
            if comp.len() > 1 {
                for &s in comp {
                    rec[s] = true;
                }
            }
        }
        for &(s, _, d) in &self.edges {
            if s == d {
                rec[s] = true;
            }
        }
        rec
    }

    fn adjacency(&self) -> Vec<BTreeSet<usize>> {
        let mut adj = vec![BTreeSet::new(); self.state_count()];
        for &(s, _, d) in &self.edges {
            adj[s].insert(d);
        }
        adj
    }

    /// Restricts to the states that carry infinite runs from an initial
    /// state: reachable from `I` and able to reach a cycle. The
    /// ω-language is unchanged. Requires all states terminal.
    pub fn trim(&self) -> Result<BuchiAutomaton> {
        if !self.all_terminal() {
            return Err(Error::NotAllTerminal);
        }
        let n = self.state_count();
        let adj = self.adjacency();
        // Forward reachability from initial states.
        let mut reach = vec![false; n];
        let mut stack: Vec<usize> = self.initial.iter().copied().collect();
        for &s in &stack {
            reach[s] = true;
        }
        while let Some(s) = stack.pop() {
            for &d in &adj[s] {
                if !reach[d] {
                    reach[d] = true;
                    stack.push(d);
                }
            }
        }
        // Backward closure of the recurrent states.
        let mut radj = vec![Vec::new(); n];
        for &(s, _, d) in &self.edges {
            radj[d].push(s);
        }
        let mut live = self.recurrent_states();
        let mut stack: Vec<usize> = (0..n).filter(|&s| live[s]).collect();
        while let Some(s) = stack.pop() {
            for &p in &radj[s] {
                if !live[p] {
                    live[p] = true;
                    stack.push(p);
                }
            }
        }
        let keep: Vec<usize> = (0..n).filter(|&s| reach[s] && live[s]).collect();
        let mut remap = vec![usize::MAX; n];
        let mut out = BuchiAutomaton::new(self.alphabet);
        for &s in &keep {
            remap[s] = out.add_state(self.names[s].clone());
        }
        for &(s, l, d) in &self.edges {
            if remap[s] != usize::MAX && remap[d] != usize::MAX {
                out.add_edge(remap[s], l, remap[d]);
            }
        }
        for &s in &self.initial {
            if remap[s] != usize::MAX {
                out.mark_initial(remap[s]);
            }
        }
        out.mark_all_terminal();
        Ok(out)
    }

    /// Checks that `self` is its own trim, i.e. every state lies on an
    /// infinite run from an initial state.
    pub fn is_trimmed(&self) -> Result<bool> {
        Ok(self.trim()?.state_count() == self.state_count())
    }

    /// SCC partition with per-component incidence matrices. Entry (i,j)
    /// counts labeled edges from state i to state j inside the
    /// component, parallel letters counted with multiplicity.
    pub fn scc_decompose(&self) -> SccDecomposition {
        let components = tarjan(self.state_count(), &self.adjacency());
        let mut component_of = vec![usize::MAX; self.state_count()];
        for (ci, comp) in components.iter().enumerate() {
            for &s in comp {
                component_of[s] = ci;
            }
        }
        let mut condensation = vec![BTreeSet::new(); components.len()];
        for &(s, _, d) in &self.edges {
            let (cs, cd) = (component_of[s], component_of[d]);
            if cs != cd {
                condensation[cs].insert(cd);
            }
        }
        let mut incidence = Vec::with_capacity(components.len());
        for comp in &components {
            let index: BTreeMap<usize, usize> =
                comp.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let k = comp.len();
            let mut m = vec![vec![0u64; k]; k];
            for &(s, _, d) in &self.edges {
                if let (Some(&i), Some(&j)) = (index.get(&s), index.get(&d)) {
                    m[i][j] += 1;
                }
            }
            incidence.push(m);
        }
        SccDecomposition {
            components,
            component_of,
            condensation: condensation
                .into_iter()
                .map(|s| s.into_iter().collect())
                .collect(),
            incidence,
        }
    }

    /// Classifies the cardinality of the ω-language of a trimmed,
    /// all-terminal automaton.
    pub fn classify_cardinality(&self) -> Result<Cardinality> {
        if !self.is_trimmed()? {
            return Err(Error::NotTrimmed);
        }
        let scc = self.scc_decompose();
        // Components that contain a cycle.
        let mut cyclic = vec![false; scc.components.len()];
        for (ci, comp) in scc.components.iter().enumerate() {
            if comp.len() > 1 {
                cyclic[ci] = true;
            }
        }
        for &(s, _, d) in &self.edges {
            if s == d {
                cyclic[scc.component_of[s]] = true;
            }
        }
        // Uncountable: a cyclic component that is not a simple cycle,
        // i.e. some state with at least two outgoing edges inside it.
        for (ci, comp) in scc.components.iter().enumerate() {
            if !cyclic[ci] {
                continue;
            }
            for &s in comp {
                let internal = self
                    .out_edges(s)
                    .filter(|&(_, d)| scc.component_of[d] == ci)
                    .count();
                if internal >= 2 {
                    return Ok(Cardinality::Uncountable);
                }
            }
        }
        // Countably infinite: one cycle can reach another.
        let ncomp = scc.components.len();
        for start in 0..ncomp {
            if !cyclic[start] {
                continue;
            }
            let mut seen = vec![false; ncomp];
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(c) = stack.pop() {
                for &d in &scc.condensation[c] {
                    if !seen[d] {
                        seen[d] = true;
                        stack.push(d);
                        if cyclic[d] {
                            return Ok(Cardinality::CountablyInfinite);
                        }
                    }
                }
            }
        }
        // Finite: runs are paths into simple cycles; at depth ≥ |Q| the
        // prefix set has one element per run.
        let depth = self.state_count().max(1);
        Ok(Cardinality::Finite(
            self.enumerate_prefixes(depth).len() as u64
        ))
    }

    /// All length-n prefixes of accepted ω-words of a trimmed automaton,
    /// as words of letter indices.
    pub fn enumerate_prefixes(&self, n: usize) -> BTreeSet<Vec<usize>> {
        let mut words = BTreeSet::new();
        let mut word = Vec::with_capacity(n);
        for &s in &self.initial {
            self.enumerate_rec(s, n, &mut word, &mut words);
        }
        words
    }

    fn enumerate_rec(
        &self,
        state: usize,
        remaining: usize,
        word: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if remaining == 0 {
            out.insert(word.clone());
            return;
        }
        for (l, d) in self.out_edges(state) {
            word.push(l);
            self.enumerate_rec(d, remaining - 1, word, out);
            word.pop();
        }
    }

    /// The accepted runs of an automaton with a finite ω-language, as
    /// eventually periodic label words (preperiod, period). Fails unless
    /// `classify_cardinality` returns `Finite`.
    pub fn finite_runs(&self) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
        match self.classify_cardinality()? {
            Cardinality::Finite(_) => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "ω-language is infinite; runs are not enumerable".into(),
                ))
            }
        }
        let mut runs = BTreeSet::new();
        for &s in &self.initial {
            let mut path = vec![s];
            let mut labels = Vec::new();
            self.finite_runs_rec(&mut path, &mut labels, &mut runs);
        }
        Ok(runs.into_iter().collect())
    }

    fn finite_runs_rec(
        &self,
        path: &mut Vec<usize>,
        labels: &mut Vec<usize>,
        runs: &mut BTreeSet<(Vec<usize>, Vec<usize>)>,
    ) {
        let state = *path.last().unwrap();
        for (l, d) in self.out_edges(state) {
            if let Some(pos) = path.iter().position(|&s| s == d) {
                labels.push(l);
                let mut pre = labels[..pos].to_vec();
                let mut per = labels[pos..].to_vec();
                normalize_run(&mut pre, &mut per);
                runs.insert((pre, per));
                labels.pop();
            } else {
                path.push(d);
                labels.push(l);
                self.finite_runs_rec(path, labels, runs);
                labels.pop();
                path.pop();
            }
        }
    }

    /// Graph-description export: one node line per state, one edge line
    /// per labeled edge, deterministic (states sorted by name, edges
    /// lexicographically).
    pub fn export_graph(&self) -> String {
        let order = self.sorted_state_order();
        let mut out = String::new();
        for &s in &order {
            out.push_str(&self.names[s]);
            if self.initial.contains(&s) {
                out.push_str(" [initial]");
            }
            if self.terminal.contains(&s) {
                out.push_str(" [terminal]");
            }
            out.push('\n');
        }
        let mut lines: Vec<String> = self
            .edges
            .iter()
            .map(|&(s, l, d)| {
                format!(
                    "{} -> {} [label=\"{}\"]",
                    self.names[s],
                    self.names[d],
                    self.alphabet.label(l)
                )
            })
            .collect();
        lines.sort();
        for line in lines {
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    /// Structured-data export: a single JSON document with `states`,
    /// `alphabet` (digits as {re,im} pairs), `edges` (index triples),
    /// `initial` and `terminal`. Indices refer to the sorted state list.
    pub fn export_json(&self) -> String {
        #[derive(Serialize)]
        struct Digit {
            re: i64,
            im: i64,
        }
        #[derive(Serialize)]
        struct Doc {
            states: Vec<String>,
            alphabet: Vec<Digit>,
            edges: Vec<(usize, usize, usize)>,
            initial: Vec<usize>,
            terminal: Vec<usize>,
        }
        let order = self.sorted_state_order();
        let mut rank = vec![0usize; self.names.len()];
        for (i, &s) in order.iter().enumerate() {
            rank[s] = i;
        }
        let mut edges: Vec<(usize, usize, usize)> = self
            .edges
            .iter()
            .map(|&(s, l, d)| (rank[s], l, rank[d]))
            .collect();
        edges.sort();
        let mut initial: Vec<usize> = self.initial.iter().map(|&s| rank[s]).collect();
        initial.sort();
        let mut terminal: Vec<usize> = self.terminal.iter().map(|&s| rank[s]).collect();
        terminal.sort();
        let doc = Doc {
            states: order.iter().map(|&s| self.names[s].clone()).collect(),
            alphabet: (0..self.alphabet.len())
                .map(|l| {
                    let d = self.alphabet.digit(l);
                    Digit { re: d.re, im: d.im }
                })
                .collect(),
            edges,
            initial,
            terminal,
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }

    fn sorted_state_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.names.len()).collect();
        order.sort_by(|&a, &b| self.names[a].cmp(&self.names[b]));
        order
    }
}

/// Rolls a (preperiod, period) pair into canonical form: the period is
/// primitive and cannot be rotated further into the preperiod.
fn normalize_run(pre: &mut Vec<usize>, per: &mut Vec<usize>) {
    // Reduce the period to its primitive root.
    let m = per.len();
    for k in 1..=m / 2 {
        if m % k == 0 && (k..m).all(|i| per[i] == per[i - k]) {
            per.truncate(k);
            break;
        }
    }
    // Absorb trailing preperiod letters that match the period's tail.
    while let Some(&last) = pre.last() {
        if last == *per.last().unwrap() {
            pre.pop();
            per.rotate_right(1);
        } else {
            break;
        }
    }
}

/// SCC decomposition in topological order of the condensation.
#[derive(Clone, Debug)]
pub struct SccDecomposition {
    /// State ids per component, each sorted ascending.
    pub components: Vec<Vec<usize>>,
    /// Component index of each state.
    pub component_of: Vec<usize>,
    /// Condensation DAG: successor components of each component.
    pub condensation: Vec<Vec<usize>>,
    /// Per-component incidence matrix (edge multiplicity between the
    /// component's states, indexed as in `components`).
    pub incidence: Vec<Vec<Vec<u64>>>,
}

/// SCC partition via Tarjan's algorithm, in topological order of the
/// condensation (so condensation edges point forward).
fn tarjan(n: usize, adj: &[BTreeSet<usize>]) -> Vec<Vec<usize>> {
    let mut graph = petgraph::graph::DiGraph::<(), ()>::with_capacity(n, 0);
    let nodes: Vec<_> = (0..n).map(|_| graph.add_node(())).collect();
    for (s, succs) in adj.iter().enumerate() {
        for &d in succs {
            graph.add_edge(nodes[s], nodes[d], ());
        }
    }
    let mut comps: Vec<Vec<usize>> = petgraph::algo::tarjan_scc(&graph)
        .into_iter()
        .map(|comp| {
            let mut states: Vec<usize> = comp.into_iter().map(|ix| ix.index()).collect();
            states.sort_unstable();
            states
        })
        .collect();
    comps.reverse();
    comps
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// A small all-terminal binary automaton for property tests.
    fn build(n: usize, edges: &[(usize, usize, usize)], initial: &[usize]) -> BuchiAutomaton {
        let mut a = BuchiAutomaton::new(Alphabet::Binary);
        for i in 0..n {
            a.add_state(format!("s{i}"));
        }
        for &(s, l, d) in edges {
            a.add_edge(s % n, l % 2, d % n);
        }
        for &s in initial {
            a.mark_initial(s % n);
        }
        a.mark_all_terminal();
        a
    }

    /// Words of length `len` readable along raw edges from the initial
    /// states, ignoring liveness.
    fn raw_walk_words(a: &BuchiAutomaton, len: usize) -> BTreeSet<Vec<usize>> {
        let mut words = BTreeSet::new();
        fn rec(
            a: &BuchiAutomaton,
            s: usize,
            word: &mut Vec<usize>,
            len: usize,
            out: &mut BTreeSet<Vec<usize>>,
        ) {
            if word.len() == len {
                out.insert(word.clone());
                return;
            }
            for (l, d) in a.out_edges(s) {
                word.push(l);
                rec(a, d, word, len, out);
                word.pop();
            }
        }
        for s in a.initial() {
            rec(a, s, &mut Vec::new(), len, &mut words);
        }
        words
    }

    /// Liveness of product pairs by iterated removal (an implementation
    /// independent of trim's SCC route).
    fn live_pairs(a: &BuchiAutomaton, b: &BuchiAutomaton) -> BTreeSet<(usize, usize)> {
        let mut live: BTreeSet<(usize, usize)> = (0..a.state_count())
            .flat_map(|x| (0..b.state_count()).map(move |y| (x, y)))
            .collect();
        loop {
            let next: BTreeSet<(usize, usize)> = live
                .iter()
                .copied()
                .filter(|&(x, y)| {
                    a.out_edges(x).any(|(l, x2)| {
                        b.out_edges(y).any(|(lb, y2)| l == lb && live.contains(&(x2, y2)))
                    })
                })
                .collect();
            if next == live {
                return live;
            }
            live = next;
        }
    }

    /// Length-n prefixes of L(A) ∩ L(B) by stepwise pair-set simulation.
    fn product_prefix_oracle(a: &BuchiAutomaton, b: &BuchiAutomaton, n: usize) -> BTreeSet<Vec<usize>> {
        let live = live_pairs(a, b);
        let mut out = BTreeSet::new();
        let start: BTreeSet<(usize, usize)> = a
            .initial()
            .flat_map(|x| b.initial().map(move |y| (x, y)))
            .collect();
        let mut frontier = vec![(start, Vec::new())];
        for _ in 0..n {
            let mut next = Vec::new();
            for (pairs, word) in frontier {
                for letter in 0..2 {
                    let stepped: BTreeSet<(usize, usize)> = pairs
                        .iter()
                        .flat_map(|&(x, y)| {
                            a.out_edges(x)
                                .filter(move |&(l, _)| l == letter)
                                .flat_map(move |(_, x2)| {
                                    b.out_edges(y)
                                        .filter(move |&(l, _)| l == letter)
                                        .map(move |(_, y2)| (x2, y2))
                                })
                                .collect::<Vec<_>>()
                        })
                        .collect();
                    if !stepped.is_empty() {
                        let mut w = word.clone();
                        w.push(letter);
                        next.push((stepped, w));
                    }
                }
            }
            frontier = next;
        }
        for (pairs, word) in frontier {
            if pairs.iter().any(|p| live.contains(p)) {
                out.insert(word);
            }
        }
        out
    }

    #[test]
    fn trim_drops_dead_branches() {
        // s0 loops; s1 is a dead end; s2 is unreachable but cyclic.
        let a = build(3, &[(0, 0, 0), (0, 1, 1), (2, 0, 2)], &[0]);
        let t = a.trim().unwrap();
        assert_eq!(t.state_count(), 1);
        assert_eq!(t.state_name(0), "s0");
        assert!(t.is_trimmed().unwrap());
        assert!(!a.is_trimmed().unwrap());
        assert!(!a.is_empty_language().unwrap());
    }

    #[test]
    fn trim_requires_all_terminal() {
        let mut a = BuchiAutomaton::new(Alphabet::Binary);
        let s = a.add_state("s");
        a.add_edge(s, 0, s);
        a.mark_initial(s);
        assert!(matches!(a.trim(), Err(Error::NotAllTerminal)));
    }

    #[test]
    fn product_with_universal_preserves_language() {
        let mut u = BuchiAutomaton::new(Alphabet::Binary);
        let s = u.add_state("u");
        u.add_edge(s, 0, s);
        u.add_edge(s, 1, s);
        u.mark_initial(s);
        u.mark_all_terminal();
        let a = build(2, &[(0, 0, 1), (1, 1, 0)], &[0]);
        let p = a.product(&u).unwrap().trim().unwrap();
        for n in 0..6 {
            assert_eq!(p.enumerate_prefixes(n), a.enumerate_prefixes(n));
        }
    }

    #[test]
    fn product_alphabet_mismatch() {
        let a = build(1, &[(0, 0, 0)], &[0]);
        let mut b = BuchiAutomaton::new(Alphabet::Blocks);
        let s = b.add_state("b");
        b.add_edge(s, 0, s);
        b.mark_initial(s);
        b.mark_all_terminal();
        assert!(matches!(a.product(&b), Err(Error::AlphabetMismatch)));
    }

    #[test]
    fn product_of_disjoint_languages_is_empty() {
        let zeros = build(1, &[(0, 0, 0)], &[0]);
        let ones = build(1, &[(0, 1, 0)], &[0]);
        let p = zeros.product(&ones).unwrap();
        assert!(p.is_empty_language().unwrap());
    }

    #[test]
    fn cardinality_examples() {
        // Single self-loop: one word 0^ω.
        let a = build(1, &[(0, 0, 0)], &[0]);
        assert_eq!(a.classify_cardinality().unwrap(), Cardinality::Finite(1));
        // Two-state cycle: one word (01)^ω.
        let a = build(2, &[(0, 0, 1), (1, 1, 0)], &[0]);
        assert_eq!(a.classify_cardinality().unwrap(), Cardinality::Finite(1));
        // Two self-loops on the same state: uncountable.
        let a = build(1, &[(0, 0, 0), (0, 1, 0)], &[0]);
        assert_eq!(a.classify_cardinality().unwrap(), Cardinality::Uncountable);
        // Cycle that can move to a second cycle: countably infinite
        // (words 0^k 1^ω).
        let a = build(2, &[(0, 0, 0), (0, 1, 1), (1, 1, 1)], &[0]);
        assert_eq!(
            a.classify_cardinality().unwrap(),
            Cardinality::CountablyInfinite
        );
    }

    #[test]
    fn finite_runs_canonical_form() {
        // Path 0 then cycle (10): the unique run is 0·(10)^ω, whose
        // canonical form absorbs the preperiod into the rotated period:
        // (01)^ω.
        let a = build(3, &[(0, 0, 1), (1, 1, 2), (2, 0, 1)], &[0]);
        let runs = a.finite_runs().unwrap();
        assert_eq!(runs, vec![(vec![], vec![0, 1])]);
        // An infinite language refuses run enumeration.
        let a = build(2, &[(0, 0, 0), (0, 1, 1), (1, 1, 1)], &[0]);
        assert!(a.finite_runs().is_err());
    }

    #[test]
    fn finite_runs_period_is_primitive() {
        // Four-state cycle reading (01)^4: primitive period (01).
        let a = build(
            4,
            &[(0, 0, 1), (1, 1, 2), (2, 0, 3), (3, 1, 0)],
            &[0],
        );
        assert_eq!(a.finite_runs().unwrap(), vec![(vec![], vec![0, 1])]);
    }

    #[test]
    fn scc_topological_order_and_incidence() {
        let a = build(
            3,
            &[(0, 0, 0), (0, 1, 1), (1, 0, 2), (2, 1, 1), (2, 0, 2)],
            &[0],
        );
        let scc = a.scc_decompose();
        assert_eq!(scc.components, vec![vec![0], vec![1, 2]]);
        assert_eq!(scc.incidence[0], vec![vec![1u64]]);
        assert_eq!(scc.incidence[1], vec![vec![0u64, 1], vec![1, 1]]);
        // Condensation edges point forward in topological order.
        for (c, succs) in scc.condensation.iter().enumerate() {
            for &d in succs {
                assert!(d > c);
            }
        }
    }

    #[test]
    fn parallel_letters_count_in_incidence() {
        let a = build(1, &[(0, 0, 0), (0, 1, 0)], &[0]);
        let scc = a.scc_decompose();
        assert_eq!(scc.incidence[0], vec![vec![2u64]]);
    }

    #[test]
    fn export_graph_golden() {
        let mut a = BuchiAutomaton::new(Alphabet::Binary);
        let b = a.add_state("b");
        let c = a.add_state("a");
        a.add_edge(b, 1, c);
        a.add_edge(c, 0, b);
        a.mark_initial(b);
        a.mark_all_terminal();
        assert_eq!(
            a.export_graph(),
            "a [terminal]\nb [initial] [terminal]\na -> b [label=\"0\"]\nb -> a [label=\"1\"]\n"
        );
    }

    #[test]
    fn export_json_is_sorted_and_parseable() {
        let mut a = BuchiAutomaton::new(Alphabet::Binary);
        let b = a.add_state("b");
        let c = a.add_state("a");
        a.add_edge(b, 1, c);
        a.add_edge(c, 0, b);
        a.mark_initial(b);
        a.mark_all_terminal();
        let doc: serde_json::Value = serde_json::from_str(&a.export_json()).unwrap();
        assert_eq!(doc["states"], serde_json::json!(["a", "b"]));
        assert_eq!(doc["edges"], serde_json::json!([[0, 0, 1], [1, 1, 0]]));
        assert_eq!(doc["initial"], serde_json::json!([1]));
    }

    #[test]
    fn duplicate_edges_are_deduplicated() {
        let mut a = BuchiAutomaton::new(Alphabet::Binary);
        let s = a.add_state("s");
        a.add_edge(s, 0, s);
        a.add_edge(s, 0, s);
        assert_eq!(a.edge_count(), 1);
    }

    proptest! {
        #[test]
        fn trim_matches_extension_oracle(
            n in 1usize..=4,
            edges in proptest::collection::vec((0usize..4, 0usize..2, 0usize..4), 0..10),
            initial in proptest::collection::vec(0usize..4, 1..3),
        ) {
            let a = build(n, &edges, &initial);
            let t = a.trim().unwrap();
            let depth = 4;
            // A word survives trimming iff it extends |Q| more steps.
            let long = raw_walk_words(&a, depth + a.state_count());
            let expect: BTreeSet<Vec<usize>> =
                long.iter().map(|w| w[..depth].to_vec()).collect();
            prop_assert_eq!(t.enumerate_prefixes(depth), expect);
            // Trimming is idempotent.
            prop_assert!(t.is_trimmed().unwrap());
        }

        #[test]
        fn product_matches_pair_simulation(
            na in 1usize..=3,
            ea in proptest::collection::vec((0usize..3, 0usize..2, 0usize..3), 0..7),
            nb in 1usize..=3,
            eb in proptest::collection::vec((0usize..3, 0usize..2, 0usize..3), 0..7),
        ) {
            let a = build(na, &ea, &[0]);
            let b = build(nb, &eb, &[0]);
            let p = a.product(&b).unwrap().trim().unwrap();
            for depth in [0, 2, 4] {
                prop_assert_eq!(
                    p.enumerate_prefixes(depth),
                    product_prefix_oracle(&a, &b, depth)
                );
            }
        }

        #[test]
        fn finite_language_prefix_count_is_stable(
            n in 1usize..=4,
            edges in proptest::collection::vec((0usize..4, 0usize..2, 0usize..4), 0..10),
            initial in proptest::collection::vec(0usize..4, 1..3),
        ) {
            let t = build(n, &edges, &initial).trim().unwrap();
            if let Cardinality::Finite(k) = t.classify_cardinality().unwrap() {
                let q = t.state_count().max(1);
                prop_assert_eq!(t.enumerate_prefixes(q).len() as u64, k);
                prop_assert_eq!(t.enumerate_prefixes(q + 3).len() as u64, k);
                if k > 0 {
                    prop_assert_eq!(t.finite_runs().unwrap().len() as u64, k);
                }
            }
        }

        #[test]
        fn incidence_row_sums_count_internal_edges(
            n in 1usize..=4,
            edges in proptest::collection::vec((0usize..4, 0usize..2, 0usize..4), 0..12),
        ) {
            let a = build(n, &edges, &[0]);
            let scc = a.scc_decompose();
            let internal: u64 = scc
                .incidence
                .iter()
                .map(|m| m.iter().flatten().sum::<u64>())
                .sum();
            let expect = a
                .edges()
                .filter(|&(s, _, d)| scc.component_of[s] == scc.component_of[d])
                .count() as u64;
            prop_assert_eq!(internal, expect);
        }
    }
}
