//! Construction of the Büchi automata recognizing K ∩ Δ_{p,q,r}, the
//! boundary automata (base α and base −4), and their product for
//! ∂K ∩ Δ_{p,q,r}.

use crate::buchi::{Alphabet, BuchiAutomaton};
use crate::cns::{digit_table, DigitBlock, Rational};
use crate::{Error, Result};

/// A normalized rational line Δ_{p,q,r} = {x+iy : px+qy = r}: integer
/// coefficients with gcd 1 and the leading nonzero of (p,q) positive.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct LineParams {
    pub p: i64,
    pub q: i64,
    pub r: i64,
}

impl std::fmt::Display for LineParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Δ_{{{},{},{}}}", self.p, self.q, self.r)
    }
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Clears denominators and normalizes signs: the rational triple
/// (p, q, r) becomes an integer triple defining the same line.
pub fn normalize_line(p: Rational, q: Rational, r: Rational) -> Result<LineParams> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::DegenerateLine);
    }
    let mut scale = p.den();
    scale = scale / gcd(scale, q.den()) * q.den();
    scale = scale / gcd(scale, r.den()) * r.den();
    let pi = p.num() * (scale / p.den());
    let qi = q.num() * (scale / q.den());
    let ri = r.num() * (scale / r.den());
    let mut g = gcd(gcd(pi, qi), ri);
    if g == 0 {
        g = 1;
    }
    let (mut pi, mut qi, mut ri) = (pi / g, qi / g, ri / g);
    if pi < 0 || (pi == 0 && qi < 0) {
        pi = -pi;
        qi = -qi;
        ri = -ri;
    }
    let to_i64 = |v: i128| i64::try_from(v).map_err(|_| Error::Overflow);
    Ok(LineParams {
        p: to_i64(pi)?,
        q: to_i64(qi)?,
        r: to_i64(ri)?,
    })
}

impl LineParams {
    pub fn from_integers(p: i64, q: i64, r: i64) -> Result<LineParams> {
        normalize_line(
            Rational::from_int(p),
            Rational::from_int(q),
            Rational::from_int(r),
        )
    }
}

/// The weight p·Re(b) + q·Im(b) of a digit for a given line.
fn weight(l: &LineParams, b: &DigitBlock) -> Result<i64> {
    let pw = l.p.checked_mul(b.value.re).ok_or(Error::Overflow)?;
    let qw = l.q.checked_mul(b.value.im).ok_or(Error::Overflow)?;
    pw.checked_add(qw).ok_or(Error::Overflow)
}

/// The bound c(p,q) = max{|p·Re(b) + q·Im(b)| : b ∈ 𝒟} / 3 on states
/// that can occur on an accepted run.
pub fn state_bound(l: &LineParams) -> Result<Rational> {
    let table = digit_table();
    let mut max_w: i64 = 0;
    for b in &table {
        max_w = max_w.max(weight(l, b)?.abs());
    }
    Rational::new(max_w as i128, 3)
}

pub(crate) fn build_line_automaton_untrimmed_with_table(
    l: &LineParams,
    table: &[DigitBlock; 16],
) -> Result<BuchiAutomaton> {
    let mut max_w: i64 = 0;
    for b in table {
        max_w = max_w.max(weight(l, b)?.abs());
    }
    // |s| ≤ c(p,q) = max_w/3 for integer s means 3|s| ≤ max_w.
    let floor_c = max_w / 3;
    let start = l.r.checked_neg().ok_or(Error::Overflow)?;

    let mut aut = BuchiAutomaton::new(Alphabet::Blocks);
    let mut states: Vec<i64> = (-floor_c..=floor_c).collect();
    if !states.contains(&start) {
        states.push(start);
        states.sort_unstable();
    }
    let index = |s: i64| states.binary_search(&s).ok();
    for &s in &states {
        aut.add_state(s.to_string());
    }
    for (si, &s) in states.iter().enumerate() {
        for b in table {
            let w = weight(l, b)?;
            let s2 = w
                .checked_sub(s.checked_mul(4).ok_or(Error::Overflow)?)
                .ok_or(Error::Overflow)?;
            if 3 * s2.abs() <= max_w {
                if let Some(di) = index(s2) {
                    aut.add_edge(si, b.letter(), di);
                }
            }
        }
    }
    aut.mark_initial(index(start).expect("start state present"));
    aut.mark_all_terminal();
    Ok(aut)
}

/// The automaton of the edge relation s →ᵇ s' = p·Re(b)+q·Im(b)−4s over
/// the bounded state set, before trimming. Accepted ω-words are exactly
/// the base −4 digit sequences of points of K ∩ Δ_{p,q,r}.
pub fn build_line_automaton_untrimmed(l: &LineParams) -> Result<BuchiAutomaton> {
    build_line_automaton_untrimmed_with_table(l, &digit_table())
}

/// Trimmed automaton for K ∩ Δ_{p,q,r}.
pub fn build_line_automaton(l: &LineParams) -> Result<BuchiAutomaton> {
    build_line_automaton_untrimmed(l)?.trim()
}

/// The 6-state automaton characterizing ∂K in base α (all states
/// initial and terminal).
pub fn boundary_automaton_alpha() -> BuchiAutomaton {
    let mut aut = BuchiAutomaton::new(Alphabet::Binary);
    let g: Vec<usize> = (1..=6).map(|i| aut.add_state(format!("g{i}"))).collect();
    let edges: [(usize, usize, usize); 10] = [
        (2, 1, 1),
        (1, 0, 3),
        (3, 0, 2),
        (3, 1, 2),
        (3, 0, 4),
        (4, 1, 3),
        (4, 0, 5),
        (4, 1, 5),
        (5, 0, 6),
        (6, 1, 4),
    ];
    for (src, letter, dst) in edges {
        aut.add_edge(g[src - 1], letter, g[dst - 1]);
    }
    for &s in &g {
        aut.mark_initial(s);
        aut.mark_terminal(s);
    }
    aut
}

pub(crate) fn boundary_automaton_base4_with_table(table: &[DigitBlock; 16]) -> BuchiAutomaton {
    let alpha = boundary_automaton_alpha();
    let mut aut = BuchiAutomaton::new(Alphabet::Blocks);
    for s in 0..alpha.state_count() {
        aut.add_state(alpha.state_name(s).to_string());
        aut.mark_initial(s);
    }
    // Index blocks by bits so a corrupted table shows up in the labels.
    let letter_of_bits = |bits: [u8; 4]| -> usize {
        table
            .iter()
            .position(|b| b.bits == bits)
            .expect("bits present in table")
    };
    // Every length-4 path becomes one edge labeled by its digit block.
    for start in 0..alpha.state_count() {
        let mut stack = vec![(start, [0u8; 4], 0usize)];
        while let Some((state, bits, depth)) = stack.pop() {
            if depth == 4 {
                aut.add_edge(start, letter_of_bits(bits), state);
                continue;
            }
            for (s2, l2, d2) in alpha.edges() {
                if s2 == state {
                    let mut next = bits;
                    next[depth] = l2 as u8;
                    stack.push((d2, next, depth + 1));
                }
            }
        }
    }
    aut.mark_all_terminal();
    aut
}

/// The boundary automaton 𝒢 in base −4: same six states, one edge per
/// length-4 path of the base α automaton, labeled by the corresponding
/// digit block.
pub fn boundary_automaton_base4() -> BuchiAutomaton {
    boundary_automaton_base4_with_table(&digit_table())
}

/// Trimmed product automaton describing ∂K ∩ Δ_{p,q,r}.
pub fn boundary_line_automaton(l: &LineParams) -> Result<BuchiAutomaton> {
    build_line_automaton(l)?
        .product(&boundary_automaton_base4())?
        .trim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cns::{eval_prefix, GaussianInt};

    fn rat(n: i128, d: i128) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let l = normalize_line(rat(1, 1), rat(0, 1), rat(-1, 5)).unwrap();
        assert_eq!(l, LineParams { p: 5, q: 0, r: -1 });
        let l = normalize_line(rat(1, 1), rat(0, 1), rat(-1, 4)).unwrap();
        assert_eq!(l, LineParams { p: 4, q: 0, r: -1 });
        let l = normalize_line(rat(2, 1), rat(2, 1), rat(-2, 1)).unwrap();
        assert_eq!(l, LineParams { p: 1, q: 1, r: -1 });
        let l = normalize_line(rat(0, 1), rat(-3, 1), rat(6, 1)).unwrap();
        assert_eq!(l, LineParams { p: 0, q: 1, r: -2 });
        assert_eq!(
            normalize_line(rat(0, 1), rat(0, 1), rat(1, 1)),
            Err(Error::DegenerateLine)
        );
    }

    #[test]
    fn state_bound_examples() {
        let l = LineParams { p: 5, q: 0, r: -1 };
        assert_eq!(state_bound(&l).unwrap(), rat(5, 1));
        let l = LineParams { p: 1, q: 0, r: 0 };
        assert_eq!(state_bound(&l).unwrap(), rat(1, 1));
    }

    #[test]
    fn line_5_0_m1_trims_to_one_state() {
        let l = LineParams { p: 5, q: 0, r: -1 };
        let aut = build_line_automaton(&l).unwrap();
        assert_eq!(aut.state_count(), 1);
        assert_eq!(aut.state_name(0), "1");
        let mut labels: Vec<String> = aut
            .edges()
            .map(|(_, l, _)| aut.alphabet().label(l))
            .collect();
        labels.sort();
        assert_eq!(labels, ["1", "1+3i", "1+i", "1-2i"]);
    }

    #[test]
    fn line_1_0_0_trims_to_one_state() {
        let l = LineParams { p: 1, q: 0, r: 0 };
        let aut = build_line_automaton(&l).unwrap();
        assert_eq!(aut.state_count(), 1);
        assert_eq!(aut.state_name(0), "0");
        let mut labels: Vec<String> = aut
            .edges()
            .map(|(_, l, _)| aut.alphabet().label(l))
            .collect();
        labels.sort();
        assert_eq!(labels, ["-2i", "-i", "0", "i"]);
    }

    #[test]
    fn line_far_outside_is_empty() {
        let l = LineParams { p: 1, q: 0, r: 10 };
        let aut = build_line_automaton(&l).unwrap();
        assert_eq!(aut.state_count(), 0);
    }

    #[test]
    fn boundary_alpha_shape() {
        let aut = boundary_automaton_alpha();
        assert_eq!(aut.state_count(), 6);
        assert_eq!(aut.edge_count(), 10);
        let g5 = (0..6).find(|&s| aut.state_name(s) == "g5").unwrap();
        let out: Vec<_> = aut.edges().filter(|&(s, _, _)| s == g5).collect();
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn boundary_base4_edges() {
        let aut = boundary_automaton_base4();
        assert_eq!(aut.state_count(), 6);
        let table = digit_table();
        let find = |name: &str| (0..6).find(|&s| aut.state_name(s) == name).unwrap();
        let (g3, g4) = (find("g3"), find("g4"));
        // g₃ →[0100] g₄ carries digit −2i.
        let l0100 = table.iter().position(|b| b.bits == [0, 1, 0, 0]).unwrap();
        assert_eq!(table[l0100].value, GaussianInt::new(0, -2));
        assert!(aut.edges().any(|e| e == (g3, l0100, g4)));
        // g₄ →[1011] g₃ carries digit 2+3i.
        let l1011 = table.iter().position(|b| b.bits == [1, 0, 1, 1]).unwrap();
        assert_eq!(table[l1011].value, GaussianInt::new(2, 3));
        assert!(aut.edges().any(|e| e == (g4, l1011, g3)));
    }

    #[test]
    fn boundary_base4_counts_match_path_counts() {
        // Total out-edges from each state must equal the number of
        // length-4 paths from it, computed by direct matrix power.
        let alpha = boundary_automaton_alpha();
        let n = alpha.state_count();
        let mut adj = vec![vec![0u64; n]; n];
        for (s, _, d) in alpha.edges() {
            adj[s][d] += 1;
        }
        let mut pow = adj.clone();
        for _ in 0..3 {
            let mut next = vec![vec![0u64; n]; n];
            for i in 0..n {
                for k in 0..n {
                    for j in 0..n {
                        next[i][j] += pow[i][k] * adj[k][j];
                    }
                }
            }
            pow = next;
        }
        let base4 = boundary_automaton_base4();
        for s in 0..n {
            let expected: u64 = pow[s].iter().sum();
            let actual = base4.edges().filter(|&(src, _, _)| src == s).count() as u64;
            assert_eq!(actual, expected, "state {}", base4.state_name(s));
        }
    }

    #[test]
    fn base4_paths_round_trip_through_blocks() {
        // Projecting each length-4 α-path to its block and re-expanding
        // the bits recovers the label word.
        let table = digit_table();
        let base4 = boundary_automaton_base4();
        for (_, letter, _) in base4.edges() {
            let block = &table[letter];
            assert_eq!(block.letter(), letter);
            assert_eq!(crate::cns::alpha_eval(&block.bits).unwrap(), block.value);
        }
    }

    #[test]
    fn geometric_soundness_of_prefixes() {
        // Accepted prefixes stay near the line.
        let table = digit_table();
        for (p, q, r) in [(1i64, 0, 0), (5, 0, -1), (1, 1, -1), (2, -1, 1)] {
            let l = LineParams::from_integers(p, q, r).unwrap();
            let aut = build_line_automaton(&l).unwrap();
            if aut.state_count() == 0 {
                continue;
            }
            let n = 6;
            let norm = ((l.p * l.p + l.q * l.q) as f64).sqrt();
            let cw = state_bound(&l).unwrap().to_f64();
            for word in aut.enumerate_prefixes(n) {
                let blocks: Vec<GaussianInt> = word.iter().map(|&i| table[i].value).collect();
                let (x, y) = eval_prefix(&blocks).unwrap().to_f64();
                let dist = (l.p as f64 * x + l.q as f64 * y - l.r as f64).abs() / norm;
                let bound = cw * 4.0f64.powi(-(n as i32)) / norm;
                assert!(dist <= bound + 1e-12, "Δ_{{{p},{q},{r}}} dist={dist}");
            }
        }
    }
}
