use dirdyn::blocking::{detect_spreading, strip_width, verify_blocking, verify_blocking_capped};
use dirdyn::classify::{classify, ClassifyParams, Confidence, Verdict};
use dirdyn::curve::Curve;
use dirdyn::language::{generic_limit_sample, image_language, is_surjective};
use dirdyn::measure::BernoulliMeasure;
use dirdyn::rng::SplitMix64;
use dirdyn::rule::{directional_orbit, iterated_extents, Extents};
use dirdyn::symbolic::{PeriodicConfig, Word};
use dirdyn::zoo::{builtin, NAMES};
use num_rational::Rational64;

fn word(name: &str, text: &str) -> Word {
    builtin(name).unwrap().rule.alphabet().parse_word(text).unwrap()
}

#[test]
fn orbit_rows_ignore_cells_outside_the_cone() {
    let mut g = SplitMix64::new(7);
    let period = 64usize;
    let w = 2usize;
    for name in NAMES {
        let rule = builtin(name).unwrap().rule;
        let q = rule.alphabet().len() as u64;
        for h in [Curve::slope(-1, 1), Curve::slope(0, 1), Curve::slope(1, 2), Curve::slope(2, 1)] {
            let base: Vec<u8> = (0..period).map(|_| g.below(q) as u8).collect();
            let x = PeriodicConfig::new(rule.alphabet().clone(), base.clone(), 0).unwrap();
            let steps = 5u64;
            let trace = directional_orbit(&rule, &h, &x, steps, w).unwrap();
            for t in 0..=steps {
                let (lo, hi) = match iterated_extents(&rule, t).unwrap() {
                    Extents::Span { memory, anticipation } => {
                        (h.eval(t) - w as i64 + memory, h.eval(t) + w as i64 + anticipation)
                    }
                    Extents::Constant(_) => (h.eval(t), h.eval(t) - 1),
                };
                for _ in 0..8 {
                    let j = hi + 1 + g.below((period as i64 - (hi - lo + 1)) as u64) as i64;
                    let mut mutated = base.clone();
                    let cell = j.rem_euclid(period as i64) as usize;
                    mutated[cell] = ((mutated[cell] as u64 + 1 + g.below(q - 1)) % q) as u8;
                    let y = PeriodicConfig::new(rule.alphabet().clone(), mutated, 0).unwrap();
                    let other = directional_orbit(&rule, &h, &y, steps, w).unwrap();
                    assert_eq!(trace.rows[t as usize], other.rows[t as usize], "{name} {h} t={t} cell {j}");
                }
            }
        }
    }
}

#[test]
fn superwords_of_a_blocking_word_block() {
    let rule = builtin("min").unwrap().rule;
    let h = Curve::slope(-1, 2);
    assert!(verify_blocking(&rule, &h, &word("min", "0"), 0, 30).unwrap().is_strong());
    for a in ["0", "1"] {
        for b in ["0", "1"] {
            let w = word("min", &format!("{a}0{b}"));
            assert!(verify_blocking(&rule, &h, &w, -1, 30).unwrap().is_strong(), "{w}");
        }
    }
}

#[test]
fn blocking_holds_between_two_certified_directions() {
    let rule = builtin("min").unwrap().rule;
    let u = word("min", "0");
    for (p, q) in [(-1, 1), (0, 1), (-1, 2)] {
        assert!(verify_blocking(&rule, &Curve::slope(p, q), &u, 0, 40).unwrap().is_strong());
    }
}

#[test]
fn spreading_states_block_across_the_cone() {
    for name in NAMES {
        let rule = builtin(name).unwrap().rule;
        let alphabet = rule.alphabet().clone();
        for a in detect_spreading(&rule) {
            let (lo, hi) = (-rule.anticipation(), -rule.memory());
            let slopes = [
                Rational64::from_integer(lo),
                Rational64::new(lo + hi, 2),
                Rational64::from_integer(hi),
            ];
            for s in slopes {
                let h = Curve::linear(s);
                // The strip itself must be covered at time 0.
                let u = Word::new(alphabet.clone(), vec![a; strip_width(&rule, &h).max(1)]);
                let v = verify_blocking_capped(&rule, &h, &u, 0, 50, 256).unwrap();
                assert!(v.is_strong(), "{name} symbol {a} slope {s}");
                assert!(v.colors.iter().all(|c| c.iter().all(|&b| b == a)));
            }
        }
    }
}

#[test]
fn surjectivity_matches_full_images() {
    for name in NAMES {
        let rule = builtin(name).unwrap().rule;
        let surjective = is_surjective(&rule);
        let all_full = (0..=3).all(|t| (1..=4).all(|len| image_language(&rule, t, len).unwrap().is_full()));
        assert_eq!(surjective, all_full, "{name}");
    }
}

#[test]
fn sampled_windows_lie_in_the_image() {
    for name in NAMES {
        let rule = builtin(name).unwrap().rule;
        let mu = BernoulliMeasure::uniform(rule.alphabet().clone());
        let s = generic_limit_sample(&rule, &Curve::slope(0, 1), &mu, 100, 4, 4, 3, 11).unwrap();
        let image = image_language(&rule, 4, 3).unwrap();
        assert!(s.support().is_subset(&image), "{name}");
    }
}

#[test]
fn shift_samples_see_every_word_along_any_direction() {
    let rule = builtin("shift").unwrap().rule;
    let mu = BernoulliMeasure::uniform(rule.alphabet().clone());
    for h in [Curve::slope(-1, 1), Curve::slope(0, 1), Curve::slope(3, 2)] {
        let s = generic_limit_sample(&rule, &h, &mu, 400, 10, 10, 3, 5).unwrap();
        assert!(s.support().is_full(), "{h}");
    }
}

#[test]
fn equal_seeds_give_equal_histograms() {
    let rule = builtin("just-gliders").unwrap().rule;
    let mu = BernoulliMeasure::parse(rule.alphabet().clone(), "1/4,1/2,1/4").unwrap();
    let run = |seed| generic_limit_sample(&rule, &Curve::slope(1, 3), &mu, 300, 5, 9, 4, seed).unwrap();
    assert_eq!(run(42).histogram, run(42).histogram);
    assert_ne!(run(42).histogram, run(43).histogram);
}

#[test]
fn classification_respects_exact_facts() {
    for name in NAMES {
        let rule = builtin(name).unwrap().rule;
        let r = classify(&rule, name, &ClassifyParams::defaults_for(&rule)).unwrap();
        if r.surjective {
            assert!(!matches!(r.verdict, Verdict::Class1 | Verdict::Class3), "{name}");
        }
        if matches!(r.nilpotency, dirdyn::language::NilpotencyProbe::NilpotentAt { .. }) {
            assert_eq!(r.verdict, Verdict::Class1);
        }
        let grid = ClassifyParams::defaults_for(&rule).slope_grid;
        let idx: Vec<usize> = r
            .ae_slopes
            .iter()
            .map(|s| grid.iter().position(|g| g == s).unwrap())
            .collect();
        let contiguous = idx.windows(2).all(|p| p[1] == p[0] + 1);
        assert!(contiguous || r.verdict == Verdict::Inconclusive, "{name}");
    }
}

#[test]
fn more_evidence_keeps_certified_verdicts() {
    for name in NAMES {
        let rule = builtin(name).unwrap().rule;
        let base = ClassifyParams::defaults_for(&rule);
        let r = classify(&rule, name, &base).unwrap();
        if r.confidence != Confidence::Certified {
            continue;
        }
        let mut bigger = base.clone();
        bigger.word_len += 1;
        bigger.horizon += 10;
        let s = classify(&rule, name, &bigger).unwrap();
        assert_eq!((s.verdict, s.confidence), (r.verdict, r.confidence), "{name}");
    }
}
