//! Self-verification suite: every documented exact constant and
//! structural claim, executed end to end. Used by the `verify`
//! subcommand and by the acceptance test target.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::buchi::{BuchiAutomaton, Cardinality};
use crate::cns::{digit_table, eval_periodic, DigitBlock, GaussianInt, Rational};
use crate::dimension::{check_not_s_minus_1, hausdorff_dimension, lambda_constants};
use crate::geometry::{
    box_counting, diagonal_relations_check, extract_interval_union, extremes, full_k_automaton,
    vertical_line_endpoints, BinarySeq, IntervalResult,
};
use crate::line::{
    boundary_automaton_base4, boundary_line_automaton, build_line_automaton, normalize_line,
    LineParams,
};
use crate::Result;

#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

fn run_check(name: &'static str, f: impl FnOnce() -> Result<String>) -> CheckResult {
    match f() {
        Ok(details) => CheckResult {
            name,
            passed: true,
            details,
        },
        Err(e) => CheckResult {
            name,
            passed: false,
            details: e.to_string(),
        },
    }
}

fn fail(msg: String) -> crate::Error {
    crate::Error::InvalidArgument(msg)
}

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d).unwrap()
}

/// Check 1: the boundary automaton restricted to Δ_{5,0,−1} is the
/// two-state system with incidence [[1,2],[2,1]], char poly x²−2x−3,
/// β = 3, dimension log3/log4.
pub fn check_fig5() -> Result<String> {
    let l = LineParams { p: 5, q: 0, r: -1 };
    let aut = boundary_line_automaton(&l)?;
    check_fig5_structure(&aut)
}

pub(crate) fn check_fig5_structure(aut: &BuchiAutomaton) -> Result<String> {
    if aut.state_count() != 2 {
        return Err(fail(format!("expected 2 states, got {}", aut.state_count())));
    }
    // Identify the state with an imag −2 self-loop.
    let mut self_loops: Vec<Vec<i64>> = vec![Vec::new(); 2];
    for (s, letter, d) in aut.edges() {
        if s == d {
            self_loops[s].push(aut.alphabet().digit(letter).im);
        }
    }
    let a = match (self_loops[0].as_slice(), self_loops[1].as_slice()) {
        ([-2], _) => 0,
        (_, [-2]) => 1,
        _ => return Err(fail(format!("self-loop labels {self_loops:?}"))),
    };
    let b = 1 - a;
    let mut labels = std::collections::BTreeMap::new();
    for (s, letter, d) in aut.edges() {
        labels
            .entry((s, d))
            .or_insert_with(Vec::new)
            .push(aut.alphabet().digit(letter).im);
    }
    for v in labels.values_mut() {
        v.sort_unstable();
    }
    let expect = [
        ((a, a), vec![-2]),
        ((a, b), vec![-2, 0]),
        ((b, b), vec![3]),
        ((b, a), vec![1, 3]),
    ];
    for (key, want) in &expect {
        if labels.get(key) != Some(want) {
            return Err(fail(format!(
                "edge labels {key:?}: got {:?}, want {want:?}",
                labels.get(key)
            )));
        }
    }
    let report = hausdorff_dimension(aut)?;
    let scc = aut.scc_decompose();
    if scc.components.len() != 1 || scc.incidence[0] != vec![vec![1u64, 2], vec![2, 1]] {
        return Err(fail(format!("incidence {:?}", scc.incidence)));
    }
    let poly = &report.char_polys[0];
    if poly != &["-3".to_string(), "-2".to_string(), "1".to_string()] {
        return Err(fail(format!("char poly coefficients {poly:?}")));
    }
    let beta = report.beta.ok_or_else(|| fail("no beta".into()))?;
    let dim = report.dimension.ok_or_else(|| fail("no dimension".into()))?;
    if (beta - 3.0).abs() > 1e-12 {
        return Err(fail(format!("beta = {beta}")));
    }
    let want = 3.0f64.ln() / 4.0f64.ln();
    if (dim - want).abs() > 1e-9 {
        return Err(fail(format!("dimension = {dim}")));
    }
    Ok(format!(
        "2 states, incidence [[1,2],[2,1]], x^2 - 2x - 3, beta = {beta:.12}, dim = {dim:.12}"
    ))
}

/// Check 2: on the imaginary axis the boundary intersection is the
/// two-point set {−2i/5, 3i/5} and the full intersection the segment
/// [−2/5, 3/5]i.
pub fn check_vertical_r0() -> Result<String> {
    let l = LineParams { p: 1, q: 0, r: 0 };
    let boundary = boundary_line_automaton(&l)?;
    let card = boundary.classify_cardinality()?;
    if card != Cardinality::Finite(2) {
        return Err(fail(format!("cardinality {card:?}")));
    }
    let table = digit_table();
    let mut points: Vec<(Rational, Rational)> = Vec::new();
    for (pre, per) in boundary.finite_runs()? {
        let blocks = |w: &[usize]| -> Vec<GaussianInt> { w.iter().map(|&i| table[i].value).collect() };
        let v = eval_periodic(&blocks(&pre), &blocks(&per))?;
        points.push((v.x, v.y));
    }
    points.sort();
    points.dedup();
    let want = vec![(Rational::ZERO, q(-2, 5)), (Rational::ZERO, q(3, 5))];
    if points != want {
        return Err(fail(format!("boundary points {points:?}")));
    }
    let seg = vertical_line_endpoints(&BinarySeq::new(vec![], vec![0])?)?;
    if seg.segment != (q(-2, 5), q(3, 5)) {
        return Err(fail(format!("segment {:?}", seg.segment)));
    }
    match extract_interval_union(&build_line_automaton(&l)?)? {
        IntervalResult::Union(u) if u.intervals() == [(q(-2, 5), q(3, 5))] => {}
        other => return Err(fail(format!("interval extraction {other:?}"))),
    }
    Ok("two boundary points -2i/5, 3i/5; segment [-2/5, 3/5]".into())
}

/// Check 3: the three-interval decomposition on Δ_{4,0,−1}.
pub fn check_quarter_line_intervals() -> Result<String> {
    let l = LineParams { p: 4, q: 0, r: -1 };
    let aut = build_line_automaton(&l)?;
    let want = [
        (q(-9, 10), q(-13, 20)),
        (q(-2, 5), q(1, 10)),
        (q(7, 20), q(3, 5)),
    ];
    match extract_interval_union(&aut)? {
        IntervalResult::Union(u) if u.intervals() == want => Ok(format!("{u}")),
        other => Err(fail(format!("got {other:?}"))),
    }
}

/// Check 4: exact x-extremes −13/15 and 7/15, and emptiness of every
/// vertical line beyond them (50 seeded random rationals).
pub fn check_extremes() -> Result<String> {
    let (min, max) = extremes();
    if (min, max) != (q(-13, 15), q(7, 15)) {
        return Err(fail(format!("extremes ({min}, {max})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x00D1A60);
    let mut tested = 0;
    let mut samples: Vec<Rational> = vec![
        q(7, 15).checked_add(q(1, 1000))?,
        q(-13, 15).checked_sub(q(1, 1000))?,
    ];
    while samples.len() < 50 {
        let den = rng.gen_range(1i128..=15);
        let num = rng.gen_range(den..=1000);
        let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
        samples.push(q(sign * num, den));
    }
    for r in samples {
        if r > q(-13, 15) && r < q(7, 15) {
            return Err(fail(format!("sample {r} is not outside the range")));
        }
        let l = normalize_line(Rational::ONE, Rational::ZERO, r)?;
        let aut = build_line_automaton(&l)?;
        if aut.state_count() != 0 {
            return Err(fail(format!("Δ_(1,0,{r}) should trim to empty")));
        }
        tested += 1;
    }
    Ok(format!("extremes -13/15, 7/15; {tested} outside lines empty"))
}

/// Check 5: spectral radius of the base −4 boundary automaton is λ⁴,
/// and log β / log 4 ≈ 1.5236.
pub fn check_boundary_spectrum() -> Result<String> {
    let aut = boundary_automaton_base4();
    let report = hausdorff_dimension(&aut)?;
    let beta = report.beta.ok_or_else(|| fail("no beta".into()))?;
    let s_est = report.dimension.ok_or_else(|| fail("no dimension".into()))?;
    let consts = lambda_constants();
    let lambda4 = consts.lambda.powi(4);
    if (beta - lambda4).abs() > 1e-9 {
        return Err(fail(format!("beta = {beta}, lambda^4 = {lambda4}")));
    }
    if (s_est - 1.5236).abs() > 5e-5 {
        return Err(fail(format!("log beta / log 4 = {s_est}")));
    }
    Ok(format!("beta = {beta:.12} = lambda^4, log beta/log 4 = {s_est:.6}"))
}

/// Check 6: every nonempty boundary intersection with |p|,|q|,|r| ≤ 4
/// has dimension bounded away from 𝔰 − 1, with the cubic's rational
/// root test as certificate.
pub fn check_never_s_minus_1() -> Result<String> {
    let mut lines = BTreeSet::new();
    for p in -4i64..=4 {
        for qq in -4i64..=4 {
            for r in -4i64..=4 {
                if p == 0 && qq == 0 {
                    continue;
                }
                if let Ok(l) = LineParams::from_integers(p, qq, r) {
                    lines.insert((l.p, l.q, l.r));
                }
            }
        }
    }
    let mut nonempty = 0;
    for &(p, qq, r) in &lines {
        let l = LineParams { p, q: qq, r };
        let aut = boundary_line_automaton(&l)?;
        if aut.state_count() == 0 {
            continue;
        }
        nonempty += 1;
        let report = hausdorff_dimension(&aut)?;
        let cert = check_not_s_minus_1(&report)?;
        if !cert.ok {
            return Err(fail(format!("certificate failed for {l}: {cert:?}")));
        }
    }
    Ok(format!(
        "{} normalized lines, {nonempty} nonempty, all certified |beta - lambda^4/4| > 1e-9",
        lines.len()
    ))
}

/// Brute-force prefix oracle: raw state recursion with a separately
/// computed live-state set, no automaton machinery.
pub(crate) fn oracle_prefixes(l: &LineParams, depth: usize) -> Result<BTreeSet<Vec<usize>>> {
    let table = digit_table();
    let weights: Vec<i64> = table
        .iter()
        .map(|b| l.p * b.value.re + l.q * b.value.im)
        .collect();
    let max_w = weights.iter().map(|w| w.abs()).max().unwrap();
    let in_range = |s: i64| 3 * s.abs() <= max_w;
    // Greatest fixed point: s is live iff some digit keeps it in range
    // and leads to a live state.
    let bound = max_w / 3;
    let idx = |s: i64| (s + bound) as usize;
    let mut live = vec![true; (2 * bound + 1) as usize];
    loop {
        let mut changed = false;
        for s in -bound..=bound {
            if !live[idx(s)] {
                continue;
            }
            let ok = weights
                .iter()
                .any(|&w| in_range(w - 4 * s) && live[idx(w - 4 * s)]);
            if !ok {
                live[idx(s)] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let is_live = |s: i64| in_range(s) && live[idx(s)];
    let mut words = BTreeSet::new();
    fn rec(
        weights: &[i64],
        in_range: &dyn Fn(i64) -> bool,
        is_live: &dyn Fn(i64) -> bool,
        s: i64,
        word: &mut Vec<usize>,
        depth: usize,
        words: &mut BTreeSet<Vec<usize>>,
    ) {
        if word.len() == depth {
            if is_live(s) {
                words.insert(word.clone());
            }
            return;
        }
        for (letter, &w) in weights.iter().enumerate() {
            let s2 = w - 4 * s;
            if in_range(s2) {
                word.push(letter);
                rec(weights, in_range, is_live, s2, word, depth, words);
                word.pop();
            }
        }
    }
    let mut word = Vec::new();
    rec(
        &weights,
        &in_range,
        &is_live,
        -l.r,
        &mut word,
        depth,
        &mut words,
    );
    Ok(words)
}

/// Check 7: automaton prefix languages match the brute-force oracle for
/// all normalized lines with |p|,|q|,|r| ≤ 3 at depth 8.
pub fn check_oracle_equivalence() -> Result<String> {
    let mut lines = BTreeSet::new();
    for p in -3i64..=3 {
        for qq in -3i64..=3 {
            for r in -3i64..=3 {
                if p == 0 && qq == 0 {
                    continue;
                }
                if let Ok(l) = LineParams::from_integers(p, qq, r) {
                    lines.insert((l.p, l.q, l.r));
                }
            }
        }
    }
    let depth = 8;
    let mut total_words = 0usize;
    for &(p, qq, r) in &lines {
        let l = LineParams { p, q: qq, r };
        let aut = build_line_automaton(&l)?;
        let got = aut.enumerate_prefixes(depth);
        let want = oracle_prefixes(&l, depth)?;
        if got != want {
            return Err(fail(format!(
                "{l}: automaton {} words, oracle {} words at depth {depth}",
                got.len(),
                want.len()
            )));
        }
        total_words += got.len();
    }
    Ok(format!(
        "{} lines agree with the oracle at depth {depth} ({total_words} words)",
        lines.len()
    ))
}

/// Check 8: the four diagonal/axis identities at depth 5 across the
/// admissible range of r.
pub fn check_diagonal_identities() -> Result<String> {
    let rs = [
        Rational::ZERO,
        q(1, 10),
        q(-1, 2),
        q(-8, 15).checked_add(q(1, 100))?,
    ];
    for &r in &rs {
        if !diagonal_relations_check(r, 5)? {
            return Err(fail(format!("identities fail at r = {r}")));
        }
    }
    Ok(format!("all four identities hold at depth 5 for {} values of r", rs.len()))
}

/// Check 9: box-counting slopes agree coarsely with the exact
/// dimensions (boundary ≈ 1.5236, Figure-5 attractor ≈ log3/log4,
/// full K ≈ 2).
pub fn check_box_counting() -> Result<String> {
    let scales: Vec<f64> = (5..=9).map(|k| 0.5f64.powi(k)).collect();
    let boundary = boundary_automaton_base4();
    let s_boundary = box_counting(&boundary, 7, &scales)?;
    if (s_boundary - 1.5236).abs() > 0.05 {
        return Err(fail(format!("boundary slope {s_boundary}")));
    }
    let l = LineParams { p: 5, q: 0, r: -1 };
    let attractor = boundary_line_automaton(&l)?;
    let s_attr = box_counting(&attractor, 12, &scales)?;
    let want = 3.0f64.ln() / 4.0f64.ln();
    if (s_attr - want).abs() > 0.05 {
        return Err(fail(format!("attractor slope {s_attr}, want {want}")));
    }
    // The filled dragon needs finer boxes before the fractal-boundary
    // contribution to N(ε) stops flattening the slope.
    let fine: Vec<f64> = (9..=12).map(|k| 0.5f64.powi(k)).collect();
    let s_full = box_counting(&full_k_automaton(), 7, &fine)?;
    if (s_full - 2.0).abs() > 0.05 {
        return Err(fail(format!("full-K slope {s_full}")));
    }
    Ok(format!(
        "slopes: boundary {s_boundary:.4}, attractor {s_attr:.4}, full {s_full:.4}"
    ))
}

/// Check 10: the 16-entry digit table.
pub fn check_digit_table() -> Result<String> {
    check_digit_table_against(&digit_table())
}

pub(crate) fn check_digit_table_against(table: &[DigitBlock; 16]) -> Result<String> {
    let want: [(u8, i64, i64); 16] = [
        (0b0000, 0, 0),
        (0b0001, 1, 0),
        (0b0010, -1, 1),
        (0b0011, 0, 1),
        (0b0100, 0, -2),
        (0b0101, 1, -2),
        (0b0110, -1, -1),
        (0b0111, 0, -1),
        (0b1000, 2, 2),
        (0b1001, 3, 2),
        (0b1010, 1, 3),
        (0b1011, 2, 3),
        (0b1100, 2, 0),
        (0b1101, 3, 0),
        (0b1110, 1, 1),
        (0b1111, 2, 1),
    ];
    for (bits, re, im) in want {
        let entry = &table[bits as usize];
        let packed = entry.bits[0] * 8 + entry.bits[1] * 4 + entry.bits[2] * 2 + entry.bits[3];
        if packed != bits || entry.value != GaussianInt::new(re, im) {
            return Err(fail(format!(
                "entry {bits:04b}: got bits {packed:04b} value {}",
                entry.value
            )));
        }
    }
    Ok("all 16 digit blocks match".into())
}

/// Runs the whole suite in order.
pub fn run_all() -> Vec<CheckResult> {
    vec![
        run_check("figure-5 boundary restriction", check_fig5),
        run_check("vertical line r=0", check_vertical_r0),
        run_check("quarter-line interval decomposition", check_quarter_line_intervals),
        run_check("x-extremes and outside emptiness", check_extremes),
        run_check("boundary spectral radius", check_boundary_spectrum),
        run_check("dimension never equals s-1", check_never_s_minus_1),
        run_check("prefix oracle equivalence", check_oracle_equivalence),
        run_check("diagonal identities", check_diagonal_identities),
        run_check("box-counting cross-checks", check_box_counting),
        run_check("digit table", check_digit_table),
    ]
}
