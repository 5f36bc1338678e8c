//! Exact interval and endpoint computations for the axis-parallel and
//! diagonal line intersections, 1-D attractor extraction from vertical
//! line automata, and the box-counting estimator used as a numeric
//! cross-check of the spectral dimensions.

use std::collections::HashSet;

use crate::buchi::{Alphabet, BuchiAutomaton};
use crate::cns::{
    digit_table, eval_periodic, eval_prefix, GaussianInt, GaussianRational, Rational,
};
use crate::line::{build_line_automaton, normalize_line};
use crate::{Error, Result};

/// Maximum digit modulus in 𝒟: |3+2i| = √13. The tail of an expansion
/// after n digits is bounded by (√13/3)·4^{−n}.
pub fn tail_bound(n: usize) -> f64 {
    (13.0f64.sqrt() / 3.0) * 4.0f64.powi(-(n as i32))
}

/// A finite union of disjoint closed rational intervals, sorted.
/// Touching endpoints merge.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct IntervalUnion {
    intervals: Vec<(Rational, Rational)>,
}

impl IntervalUnion {
    pub fn empty() -> Self {
        IntervalUnion::default()
    }

    pub fn from_intervals(intervals: &[(Rational, Rational)]) -> Result<Self> {
        let mut u = IntervalUnion::empty();
        for &(lo, hi) in intervals {
            u.insert(lo, hi)?;
        }
        Ok(u)
    }

    pub fn insert(&mut self, lo: Rational, hi: Rational) -> Result<()> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!(
                "interval [{lo}, {hi}] is empty"
            )));
        }
        let mut merged = (lo, hi);
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        for &(a, b) in &self.intervals {
            if b < merged.0 || a > merged.1 {
                out.push((a, b));
            } else {
                merged.0 = merged.0.min(a);
                merged.1 = merged.1.max(b);
            }
        }
        out.push(merged);
        out.sort();
        self.intervals = out;
        Ok(())
    }

    pub fn intervals(&self) -> &[(Rational, Rational)] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn total_length(&self) -> Result<Rational> {
        let mut sum = Rational::ZERO;
        for &(a, b) in &self.intervals {
            sum = sum.checked_add(b.checked_sub(a)?)?;
        }
        Ok(sum)
    }
}

impl std::fmt::Display for IntervalUnion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.intervals.is_empty() {
            return write!(f, "∅");
        }
        for (i, (a, b)) in self.intervals.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "[{a}, {b}]")?;
        }
        Ok(())
    }
}

/// The exact x-extremes of K: (−13/15, 7/15), obtained from the greedy
/// alternating digit expansions (3,−1)^ω and (−1,3)^ω.
pub fn extremes() -> (Rational, Rational) {
    let three = GaussianInt::new(3, 0);
    let minus_one = GaussianInt::new(-1, 0);
    let min = eval_periodic(&[], &[three, minus_one]).expect("tiny").x;
    let max = eval_periodic(&[], &[minus_one, three]).expect("tiny").x;
    (min, max)
}

/// An eventually periodic {0,1} sequence: preperiod followed by an
/// infinitely repeated nonempty period.
#[derive(Clone, Debug)]
pub struct BinarySeq {
    pub pre: Vec<u8>,
    pub per: Vec<u8>,
}

impl BinarySeq {
    pub fn new(pre: Vec<u8>, per: Vec<u8>) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::InvalidArgument("empty period".into()));
        }
        if pre.iter().chain(&per).any(|&b| b > 1) {
            return Err(Error::InvalidArgument("sequence digits must be 0/1".into()));
        }
        Ok(BinarySeq { pre, per })
    }

    /// True when the tail of the sequence is the alternating word
    /// 0101… or 1010…, the case excluded by the vertical-line theorem.
    pub fn tail_alternates(&self) -> bool {
        let p = &self.per;
        let doubled: Vec<u8> = p.iter().chain(p.iter()).copied().collect();
        doubled.windows(2).all(|w| w[0] != w[1])
    }
}

/// The vertical-line intersection data for r = Σ 2a_k (−4)^{−k}.
#[derive(Clone, Debug)]
pub struct VerticalIntersection {
    pub r: Rational,
    /// The two boundary points r+(r−2/5)i and r+(r+3/5)i.
    pub endpoints: [GaussianRational; 2],
    /// The y-range [r−2/5, r+3/5] of the full segment K ∩ Δ_{1,0,r}.
    pub segment: (Rational, Rational),
}

/// Endpoints of ∂K ∩ Δ_{1,0,r} for an admissible eventually periodic
/// sequence (one whose tail is not alternating).
pub fn vertical_line_endpoints(seq: &BinarySeq) -> Result<VerticalIntersection> {
    if seq.tail_alternates() {
        return Err(Error::AlternatingTail);
    }
    let to_digits = |bits: &[u8]| -> Vec<GaussianInt> {
        bits.iter()
            .map(|&b| GaussianInt::new(2 * b as i64, 0))
            .collect()
    };
    let r = eval_periodic(&to_digits(&seq.pre), &to_digits(&seq.per))?.x;
    let lo = r.checked_sub(Rational::new(2, 5)?)?;
    let hi = r.checked_add(Rational::new(3, 5)?)?;
    Ok(VerticalIntersection {
        r,
        endpoints: [GaussianRational::new(r, lo), GaussianRational::new(r, hi)],
        segment: (lo, hi),
    })
}

/// Enumerates the exact depth-n prefix points of a trimmed automaton.
pub fn prefix_points(a: &BuchiAutomaton, depth: usize) -> Result<Vec<GaussianRational>> {
    let table = digit_table();
    let mut points = Vec::new();
    for word in a.enumerate_prefixes(depth) {
        let blocks: Vec<GaussianInt> = word
            .iter()
            .map(|&l| match a.alphabet() {
                Alphabet::Blocks => table[l].value,
                Alphabet::Binary => GaussianInt::new(l as i64, 0),
            })
            .collect();
        points.push(eval_prefix(&blocks)?);
    }
    Ok(points)
}

fn hausdorff_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let directed = |from: &[(f64, f64)], to: &[(f64, f64)]| -> f64 {
        let mut worst = 0.0f64;
        for &(x, y) in from {
            let mut best = f64::INFINITY;
            for &(u, v) in to {
                let d2 = (x - u) * (x - u) + (y - v) * (y - v);
                if d2 < best {
                    best = d2;
                }
            }
            worst = worst.max(best.sqrt());
        }
        worst
    };
    directed(a, b).max(directed(b, a))
}

/// Verifies the four diagonal/axis self-similarity identities at
/// resolution 4^{−depth} by comparing mapped prefix point clouds:
///
///   −2i·(K ∩ Δ_{0,1,r/2})      = (K ∩ Δ_{1,0,r}) + {0, i}
///   (−1+i)·(K ∩ Δ_{1,1,−r})    =  K ∩ Δ_{1,0,r}
///   (−1+i)·(K ∩ Δ_{1,−1,r/2})  = (K ∩ Δ_{0,1,r/2}) + {0, 1}
///   2(1+i)·(K ∩ Δ_{1,−1,r/2})  = (K ∩ Δ_{1,0,r}) + {−2i, −i, 0, i}
///
/// Valid for −8/15 < r < 2/15.
pub fn diagonal_relations_check(r: Rational, depth: usize) -> Result<bool> {
    let lo = Rational::new(-8, 15)?;
    let hi = Rational::new(2, 15)?;
    if r <= lo || r >= hi {
        return Err(Error::OutOfRange(format!(
            "r = {r} is outside the open range (-8/15, 2/15)"
        )));
    }
    let one = Rational::ONE;
    let half = Rational::new(1, 2)?;
    let r_half = r.checked_mul(half)?;

    // Clouds are enumerated one level deeper than the comparison
    // resolution so that both sides sit well inside the tolerance.
    let cloud = |p: Rational, q: Rational, c: Rational| -> Result<Vec<GaussianRational>> {
        let l = normalize_line(p, q, c)?;
        prefix_points(&build_line_automaton(&l)?, depth + 1)
    };
    let c10 = cloud(one, Rational::ZERO, r)?;
    let c01 = cloud(Rational::ZERO, one, r_half)?;
    let c11 = cloud(one, one, r.neg())?;
    let c1m1 = cloud(one, one.neg(), r_half)?;

    let map = |cloud: &[GaussianRational], factor: GaussianInt| -> Result<Vec<(f64, f64)>> {
        cloud
            .iter()
            .map(|p| p.mul_gaussian(factor).map(GaussianRational::to_f64))
            .collect()
    };
    let offset =
        |cloud: &[GaussianRational], offsets: &[GaussianInt]| -> Result<Vec<(f64, f64)>> {
            let mut out = Vec::with_capacity(cloud.len() * offsets.len());
            for &o in offsets {
                let shift = GaussianRational::from_gaussian_int(o);
                for p in cloud {
                    out.push(p.checked_add(shift)?.to_f64());
                }
            }
            Ok(out)
        };

    let g = GaussianInt::new;
    let zero = [g(0, 0)];
    let tol = 2.0 * tail_bound(depth);
    let checks = [
        (map(&c01, g(0, -2))?, offset(&c10, &[g(0, 0), g(0, 1)])?),
        (map(&c11, g(-1, 1))?, offset(&c10, &zero)?),
        (map(&c1m1, g(-1, 1))?, offset(&c01, &[g(0, 0), g(1, 0)])?),
        (
            map(&c1m1, g(2, 2))?,
            offset(&c10, &[g(0, -2), g(0, -1), g(0, 0), g(0, 1)])?,
        ),
    ];
    for (lhs, rhs) in &checks {
        if lhs.is_empty() || rhs.is_empty() {
            return Ok(false);
        }
        if hausdorff_distance(lhs, rhs) > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Result of 1-D attractor extraction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum IntervalResult {
    Union(IntervalUnion),
    NotAnIntervalUnion,
}

// ------------------------------------------------------------------
// Exact per-state value bounds of a 1-D graph-directed system.
//
// For each state s of an automaton with real digit labels d, the value
// set is V_s = {Σ d_k (−4)^{−k} over infinite paths from s}. Its
// extremes satisfy
//     min_s = −(max over edges (d,s') of d + max_{s'}) / 4,
//     max_s = −(min over edges (d,s') of d + min_{s'}) / 4.
// The optimizing edge choices form a stationary policy; given a policy
// every variable depends affinely on exactly one other, so the chains
// close into cycles solvable exactly over the rationals. Policy
// iteration converges because the underlying operator is a contraction.
// ------------------------------------------------------------------

struct BoundsSolver {
    /// Out-edges per state: (digit, dst).
    out: Vec<Vec<(i64, usize)>>,
}

impl BoundsSolver {
    fn solve(&self) -> Result<(Vec<Rational>, Vec<Rational>)> {
        let n = self.out.len();
        // Variables: 0..n are max_s, n..2n are min_s.
        // max_s = −(d + min_{s'})/4 for the policy edge of s,
        // min_s = −(d + max_{s'})/4 for its policy edge.
        let mut policy_max = vec![0usize; n];
        let mut policy_min = vec![0usize; n];
        for _ in 0..4 * n + 8 {
            let values = self.evaluate(&policy_max, &policy_min)?;
            let (maxv, minv) = (&values.0, &values.1);
            let mut changed = false;
            for s in 0..n {
                // Improve max_s: minimize d + min_{s'}.
                let mut best = policy_max[s];
                let key = |e: usize| -> Result<Rational> {
                    let (d, t) = self.out[s][e];
                    Rational::from_int(d).checked_add(minv[t])
                };
                for e in 0..self.out[s].len() {
                    if key(e)? < key(best)? {
                        best = e;
                    }
                }
                if best != policy_max[s] && key(best)? < key(policy_max[s])? {
                    policy_max[s] = best;
                    changed = true;
                }
                // Improve min_s: maximize d + max_{s'}.
                let mut best = policy_min[s];
                let key = |e: usize| -> Result<Rational> {
                    let (d, t) = self.out[s][e];
                    Rational::from_int(d).checked_add(maxv[t])
                };
                for e in 0..self.out[s].len() {
                    if key(e)? > key(best)? {
                        best = e;
                    }
                }
                if best != policy_min[s] && key(best)? > key(policy_min[s])? {
                    policy_min[s] = best;
                    changed = true;
                }
            }
            if !changed {
                return Ok(values);
            }
        }
        Err(Error::InvalidArgument(
            "value-bound policy iteration did not converge".into(),
        ))
    }

    /// Exact solve of the affine chains induced by a fixed policy.
    fn evaluate(
        &self,
        policy_max: &[usize],
        policy_min: &[usize],
    ) -> Result<(Vec<Rational>, Vec<Rational>)> {
        let n = self.out.len();
        let nvars = 2 * n;
        // var v = (−d_v − var dep_v) / 4.
        let mut dep = vec![0usize; nvars];
        let mut digit = vec![0i64; nvars];
        for s in 0..n {
            let (d, t) = self.out[s][policy_max[s]];
            dep[s] = n + t;
            digit[s] = d;
            let (d, t) = self.out[s][policy_min[s]];
            dep[n + s] = t;
            digit[n + s] = d;
        }
        let quarter = Rational::new(-1, 4)?;
        let mut solved: Vec<Option<Rational>> = vec![None; nvars];
        for start in 0..nvars {
            if solved[start].is_some() {
                continue;
            }
            // Follow the chain until a solved variable or a cycle.
            let mut chain = Vec::new();
            let mut pos = vec![usize::MAX; nvars];
            let mut v = start;
            let base: Rational;
            loop {
                if let Some(val) = solved[v] {
                    base = val;
                    break;
                }
                if pos[v] != usize::MAX {
                    // Cycle from pos[v] to the end of the chain:
                    // v = a·v + b with |a| = 4^{−L} < 1.
                    let mut a = Rational::ONE;
                    let mut b = Rational::ZERO;
                    for &u in chain[pos[v]..].iter().rev() {
                        // u = (−digit[u] − next)/4 composes as
                        // val = quarter·(digit + val_next).
                        let du = Rational::from_int(digit[u]);
                        b = quarter.checked_mul(du.checked_add(b)?)?;
                        a = a.checked_mul(quarter)?;
                    }
                    let cycle_val = b.checked_div(Rational::ONE.checked_sub(a)?)?;
                    solved[v] = Some(cycle_val);
                    base = cycle_val;
                    break;
                }
                pos[v] = chain.len();
                chain.push(v);
                v = dep[v];
            }
            // Back-substitute along the chain.
            let mut val = base;
            for &u in chain.iter().rev() {
                if solved[u].is_some() {
                    val = solved[u].unwrap();
                    continue;
                }
                let du = Rational::from_int(digit[u]);
                val = quarter.checked_mul(du.checked_add(val)?)?;
                solved[u] = Some(val);
            }
        }
        let maxv: Vec<Rational> = (0..n).map(|s| solved[s].unwrap()).collect();
        let minv: Vec<Rational> = (n..2 * n).map(|s| solved[s].unwrap()).collect();
        Ok((maxv, minv))
    }
}

const EXTRACT_MAX_ITERS: usize = 64;
const EXTRACT_MAX_PIECES: usize = 4096;

/// Extracts the exact finite union of closed intervals of the 1-D
/// attractor of a trimmed automaton whose labels are projected to their
/// imaginary parts (the convention for vertical lines).
///
/// The interval-rich case is decided structurally: every state on a
/// cycle must carry a complete residue system modulo 4 on its outgoing
/// digits, with all its successors again on cycles. The union itself is
/// then obtained as the exact fixed point of the per-state interval
/// refinement, started from the exact value bounds; stabilization of
/// the full tuple certifies exactness because the refinement map is a
/// contraction with the attractor as its unique fixed point.
pub fn extract_interval_union(a: &BuchiAutomaton) -> Result<IntervalResult> {
    if !a.is_trimmed()? {
        return Err(Error::NotTrimmed);
    }
    let n = a.state_count();
    if n == 0 {
        return Ok(IntervalResult::Union(IntervalUnion::empty()));
    }
    let mut out: Vec<Vec<(i64, usize)>> = vec![Vec::new(); n];
    for (s, l, d) in a.edges() {
        out[s].push((a.alphabet().digit(l).im, d));
    }

    // Structural interior-richness check on the cycle states.
    let scc = a.scc_decompose();
    let mut cyclic_state = vec![false; n];
    for comp in &scc.components {
        if comp.len() > 1 {
            for &s in comp {
                cyclic_state[s] = true;
            }
        }
    }
    for (s, _, d) in a.edges() {
        if s == d {
            cyclic_state[s] = true;
        }
    }
    for s in 0..n {
        if !cyclic_state[s] {
            continue;
        }
        if out[s].len() != 4 {
            return Ok(IntervalResult::NotAnIntervalUnion);
        }
        let mut residues: Vec<i64> = out[s].iter().map(|(d, _)| d.rem_euclid(4)).collect();
        residues.sort_unstable();
        if residues != [0, 1, 2, 3] {
            return Ok(IntervalResult::NotAnIntervalUnion);
        }
        if out[s].iter().any(|&(_, t)| !cyclic_state[t]) {
            return Ok(IntervalResult::NotAnIntervalUnion);
        }
    }

    // Exact value bounds, then interval refinement to the fixed point.
    let solver = BoundsSolver { out: out.clone() };
    let (maxv, minv) = solver.solve()?;
    let mut unions: Vec<IntervalUnion> = (0..n)
        .map(|s| IntervalUnion::from_intervals(&[(minv[s], maxv[s])]))
        .collect::<Result<_>>()?;
    let quarter = Rational::new(-1, 4)?;
    for _ in 0..EXTRACT_MAX_ITERS {
        let mut next = Vec::with_capacity(n);
        for s in 0..n {
            let mut u = IntervalUnion::empty();
            for &(d, t) in &out[s] {
                let dr = Rational::from_int(d);
                for &(lo, hi) in unions[t].intervals() {
                    // ([lo,hi] + d)/(−4) = [−(hi+d)/4, −(lo+d)/4].
                    let a2 = hi.checked_add(dr)?.checked_mul(quarter)?;
                    let b2 = lo.checked_add(dr)?.checked_mul(quarter)?;
                    u.insert(a2, b2)?;
                }
            }
            if u.len() > EXTRACT_MAX_PIECES {
                return Ok(IntervalResult::NotAnIntervalUnion);
            }
            next.push(u);
        }
        if next == unions {
            let mut result = IntervalUnion::empty();
            for s0 in a.initial() {
                for &(lo, hi) in unions[s0].intervals() {
                    result.insert(lo, hi)?;
                }
            }
            return Ok(IntervalResult::Union(result));
        }
        unions = next;
    }
    Ok(IntervalResult::NotAnIntervalUnion)
}

/// The universal automaton for K itself: one state looping on all 16
/// digits.
pub fn full_k_automaton() -> BuchiAutomaton {
    let mut aut = BuchiAutomaton::new(Alphabet::Blocks);
    let s = aut.add_state("K");
    for letter in 0..16 {
        aut.add_edge(s, letter, s);
    }
    aut.mark_initial(s);
    aut.mark_all_terminal();
    aut
}

/// Streams the depth-n prefix points of a trimmed automaton as f64
/// pairs, without materializing the word set.
pub fn stream_cloud<F: FnMut(f64, f64)>(a: &BuchiAutomaton, depth: usize, f: &mut F) {
    let digits: Vec<(f64, f64)> = (0..a.alphabet().len())
        .map(|l| {
            let d = a.alphabet().digit(l);
            (d.re as f64, d.im as f64)
        })
        .collect();
    let mut out: Vec<Vec<(usize, usize)>> = vec![Vec::new(); a.state_count()];
    for (s, l, d) in a.edges() {
        out[s].push((l, d));
    }
    fn rec<F: FnMut(f64, f64)>(
        out: &[Vec<(usize, usize)>],
        digits: &[(f64, f64)],
        state: usize,
        x: f64,
        y: f64,
        scale: f64,
        remaining: usize,
        f: &mut F,
    ) {
        if remaining == 0 {
            f(x, y);
            return;
        }
        let s = scale * -0.25;
        for &(l, d) in &out[state] {
            let (dre, dim) = digits[l];
            rec(out, digits, d, x + dre * s, y + dim * s, s, remaining - 1, f);
        }
    }
    for s0 in a.initial() {
        rec(&out, &digits, s0, 0.0, 0.0, 1.0, depth, f);
    }
}

/// Cheap multiply-xor hasher for the packed box keys; the keys are
/// already well mixed by the splitmix finalizer below.
#[derive(Default, Clone)]
struct KeyHasher(u64);

impl std::hash::Hasher for KeyHasher {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for &b in bytes {
            self.0 = (self.0 ^ b as u64).wrapping_mul(0x100000001b3);
        }
    }
    fn write_u64(&mut self, x: u64) {
        let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        self.0 = z ^ (z >> 31);
    }
}

type KeySet = HashSet<u64, std::hash::BuildHasherDefault<KeyHasher>>;

fn pack(i: i64, j: i64) -> u64 {
    ((i as i32 as u32 as u64) << 32) | (j as i32 as u32 as u64)
}

fn unpack(key: u64) -> (i64, i64) {
    (((key >> 32) as u32 as i32) as i64, (key as u32 as i32) as i64)
}

enum CounterMode {
    Generic(Vec<HashSet<(i64, i64)>>),
    /// All scales are power-of-two multiples of the finest: only the
    /// finest grid is stored, coarser counts follow by index shifting.
    Dyadic { shifts: Vec<u32>, finest: KeySet },
}

/// Counts occupied boxes of a streamed point cloud at several scales
/// and fits the box-counting slope.
pub struct BoxCounter {
    scales: Vec<f64>,
    mode: CounterMode,
}

impl BoxCounter {
    pub fn new(scales: &[f64]) -> Result<Self> {
        if scales.len() < 3 {
            return Err(Error::InvalidArgument(
                "box counting needs at least 3 scales".into(),
            ));
        }
        if scales.iter().any(|&s| !(s > 0.0)) {
            return Err(Error::InvalidArgument("scales must be positive".into()));
        }
        let finest = scales.iter().cloned().fold(f64::INFINITY, f64::min);
        let shifts: Vec<u32> = scales
            .iter()
            .map(|&s| {
                let ratio = s / finest;
                let m = ratio.log2().round() as u32;
                if m < 32 && ((1u64 << m) as f64 - ratio).abs() < 1e-9 * ratio {
                    Some(m)
                } else {
                    None
                }
            })
            .collect::<Option<_>>()
            .unwrap_or_default();
        let mode = if shifts.len() == scales.len() {
            CounterMode::Dyadic {
                shifts,
                finest: KeySet::default(),
            }
        } else {
            CounterMode::Generic(vec![HashSet::new(); scales.len()])
        };
        Ok(BoxCounter {
            scales: scales.to_vec(),
            mode,
        })
    }

    pub fn add_point(&mut self, x: f64, y: f64) {
        match &mut self.mode {
            CounterMode::Generic(boxes) => {
                for (eps, set) in self.scales.iter().zip(boxes) {
                    set.insert(((x / eps).floor() as i64, (y / eps).floor() as i64));
                }
            }
            CounterMode::Dyadic { finest, .. } => {
                let eps = self.scales.iter().cloned().fold(f64::INFINITY, f64::min);
                finest.insert(pack((x / eps).floor() as i64, (y / eps).floor() as i64));
            }
        }
    }

    pub fn counts(&self) -> Vec<usize> {
        match &self.mode {
            CounterMode::Generic(boxes) => boxes.iter().map(|s| s.len()).collect(),
            CounterMode::Dyadic { shifts, finest } => shifts
                .iter()
                .map(|&m| {
                    if m == 0 {
                        finest.len()
                    } else {
                        let mut coarse = KeySet::default();
                        for &key in finest.iter() {
                            let (i, j) = unpack(key);
                            coarse.insert(pack(i >> m, j >> m));
                        }
                        coarse.len()
                    }
                })
                .collect(),
        }
    }

    /// Least-squares slope of log N(ε) against log(1/ε).
    pub fn slope(&self) -> f64 {
        let xs: Vec<f64> = self.scales.iter().map(|&e| (1.0 / e).ln()).collect();
        let ys: Vec<f64> = self
            .counts()
            .iter()
            .map(|&n| (n as f64).ln())
            .collect();
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
        num / den
    }
}

/// Box-counting slope of the depth-n cloud of a trimmed automaton.
pub fn box_counting(a: &BuchiAutomaton, depth: usize, scales: &[f64]) -> Result<f64> {
    let mut counter = BoxCounter::new(scales)?;
    stream_cloud(a, depth, &mut |x, y| counter.add_point(x, y));
    Ok(counter.slope())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line::LineParams;

    fn q(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn extremes_exact() {
        let (min, max) = extremes();
        assert_eq!(min, q(-13, 15));
        assert_eq!(max, q(7, 15));
        assert!(min < Rational::ZERO && Rational::ZERO < max);
    }

    #[test]
    fn interval_union_merging() {
        let mut u = IntervalUnion::empty();
        u.insert(q(0, 1), q(1, 2)).unwrap();
        u.insert(q(1, 2), q(3, 4)).unwrap();
        u.insert(q(2, 1), q(3, 1)).unwrap();
        assert_eq!(u.len(), 2);
        assert_eq!(u.intervals()[0], (q(0, 1), q(3, 4)));
        assert!(u.insert(q(1, 1), q(0, 1)).is_err());
    }

    #[test]
    fn vertical_endpoints_zero_sequence() {
        let seq = BinarySeq::new(vec![], vec![0]).unwrap();
        let v = vertical_line_endpoints(&seq).unwrap();
        assert_eq!(v.r, Rational::ZERO);
        assert_eq!(v.endpoints[0], GaussianRational::new(q(0, 1), q(-2, 5)));
        assert_eq!(v.endpoints[1], GaussianRational::new(q(0, 1), q(3, 5)));
    }

    #[test]
    fn vertical_endpoints_one_then_zeros() {
        let seq = BinarySeq::new(vec![1], vec![0]).unwrap();
        let v = vertical_line_endpoints(&seq).unwrap();
        assert_eq!(v.r, q(-1, 2));
        assert_eq!(v.endpoints[0], GaussianRational::new(q(-1, 2), q(-9, 10)));
        assert_eq!(v.endpoints[1], GaussianRational::new(q(-1, 2), q(1, 10)));
    }

    #[test]
    fn alternating_tail_rejected() {
        let seq = BinarySeq::new(vec![1, 1], vec![0, 1]).unwrap();
        assert!(seq.tail_alternates());
        assert!(matches!(
            vertical_line_endpoints(&seq),
            Err(Error::AlternatingTail)
        ));
        let seq = BinarySeq::new(vec![], vec![1, 0, 1, 0]).unwrap();
        assert!(seq.tail_alternates());
        let seq = BinarySeq::new(vec![], vec![1, 1, 0, 0]).unwrap();
        assert!(!seq.tail_alternates());
    }

    #[test]
    fn interval_extraction_vertical_axis() {
        let l = LineParams { p: 1, q: 0, r: 0 };
        let aut = build_line_automaton(&l).unwrap();
        match extract_interval_union(&aut).unwrap() {
            IntervalResult::Union(u) => {
                assert_eq!(u.intervals(), &[(q(-2, 5), q(3, 5))]);
            }
            other => panic!("expected union, got {other:?}"),
        }
    }

    #[test]
    fn interval_extraction_quarter_line() {
        let l = LineParams { p: 4, q: 0, r: -1 };
        let aut = build_line_automaton(&l).unwrap();
        match extract_interval_union(&aut).unwrap() {
            IntervalResult::Union(u) => {
                assert_eq!(
                    u.intervals(),
                    &[
                        (q(-9, 10), q(-13, 20)),
                        (q(-2, 5), q(1, 10)),
                        (q(7, 20), q(3, 5)),
                    ]
                );
                // Total length 1/4 + 1/2 + 1/4 = 1.
                assert_eq!(u.total_length().unwrap(), Rational::ONE);
            }
            other => panic!("expected union, got {other:?}"),
        }
    }

    #[test]
    fn interval_extraction_rejects_boundary_attractor() {
        let l = LineParams { p: 5, q: 0, r: -1 };
        let aut = crate::line::boundary_line_automaton(&l).unwrap();
        assert_eq!(
            extract_interval_union(&aut).unwrap(),
            IntervalResult::NotAnIntervalUnion
        );
    }

    #[test]
    fn diagonal_identities_hold() {
        assert!(diagonal_relations_check(Rational::ZERO, 5).unwrap());
        assert!(diagonal_relations_check(q(1, 10), 5).unwrap());
        assert_eq!(
            diagonal_relations_check(q(1, 2), 5),
            Err(Error::OutOfRange(
                "r = 1/2 is outside the open range (-8/15, 2/15)".into()
            ))
        );
    }

    #[test]
    fn segment_containment_for_vertical_lines() {
        // Depth-n prefix points of Δ_{1,0,0} stay near the segment.
        let l = LineParams { p: 1, q: 0, r: 0 };
        let aut = build_line_automaton(&l).unwrap();
        let n = 6;
        let bound = tail_bound(n);
        for p in prefix_points(&aut, n).unwrap() {
            let (x, y) = p.to_f64();
            assert!(x.abs() <= bound + 1e-12);
            let (lo, hi) = (-2.0 / 5.0, 3.0 / 5.0);
            let dy = if y < lo {
                lo - y
            } else if y > hi {
                y - hi
            } else {
                0.0
            };
            assert!(dy <= bound + 1e-12, "y={y}");
        }
    }

    #[test]
    fn boundary_runs_on_imaginary_axis_give_the_two_endpoints() {
        // ∂K ∩ Δ_{1,0,0} = {−2i/5, 3i/5}: the product automaton has
        // finitely many runs and they evaluate to exactly these points.
        let l = LineParams { p: 1, q: 0, r: 0 };
        let aut = crate::line::boundary_line_automaton(&l).unwrap();
        let table = digit_table();
        let mut points: Vec<(Rational, Rational)> = Vec::new();
        for (pre, per) in aut.finite_runs().unwrap() {
            let to_blocks =
                |w: &[usize]| -> Vec<GaussianInt> { w.iter().map(|&l| table[l].value).collect() };
            let v = eval_periodic(&to_blocks(&pre), &to_blocks(&per)).unwrap();
            points.push((v.x, v.y));
        }
        points.sort();
        points.dedup();
        assert_eq!(
            points,
            vec![(Rational::ZERO, q(-2, 5)), (Rational::ZERO, q(3, 5))]
        );
    }

    #[test]
    fn box_counter_requires_three_scales() {
        assert!(BoxCounter::new(&[0.1, 0.2]).is_err());
    }
}
