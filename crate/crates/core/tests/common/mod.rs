//! Random traces and formulas shared by the integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use sfomon::logic::{parse, Formula};
use sfomon::rational::Rational;
use sfomon::signals::{SamplePoint, Trace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

/// Uniformly sampled values in `[-4, 4]` with step 1/2, times `k·period`.
pub fn uniform_samples(rng: &mut ChaCha8Rng, signals: &[&str], n: usize, period: &Rational) -> Vec<SamplePoint> {
    (0..n)
        .map(|i| SamplePoint {
            time: period * &Rational::from(i as i64),
            values: signals
                .iter()
                .map(|f| (f.to_string(), rat(rng.gen_range(-8..=8), 2)))
                .collect(),
        })
        .collect()
}

pub fn uniform_trace(rng: &mut ChaCha8Rng, signals: &[&str], n: usize, period: &Rational) -> Trace {
    Trace::from_samples(&uniform_samples(rng, signals, n, period)).unwrap()
}

/// A rational time in `[lo, hi]`, often off the breakpoints.
pub fn time_in(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational) -> Rational {
    let den = *[1i64, 2, 3, 7, 13].choose(rng).unwrap();
    let k = rng.gen_range(0..=den * 8);
    lo + &(&(hi - lo) * &rat(k, den * 8))
}

/// Generator of random temporal bounded-response formulas in surface
/// syntax. Depth counts connectives and quantifiers of the text.
pub struct FormulaGen<'a> {
    pub rng: &'a mut ChaCha8Rng,
    pub signals: Vec<&'static str>,
    pub max_depth: usize,
    pub max_quantifiers: usize,
    /// Only non-positive access offsets (past-time formulas).
    pub past_only: bool,
    /// Allow unbounded value quantifiers.
    pub unbounded_values: bool,
    used: usize,
    fresh: usize,
}

enum Bound {
    Time(String),
    Value(String),
}

impl<'a> FormulaGen<'a> {
    pub fn new(rng: &'a mut ChaCha8Rng) -> Self {
        FormulaGen {
            rng,
            signals: vec!["f", "g"],
            max_depth: 4,
            max_quantifiers: 2,
            past_only: false,
            unbounded_values: true,
            used: 0,
            fresh: 0,
        }
    }

    fn constant(&mut self) -> String {
        let n = self.rng.gen_range(-6..=6);
        match self.rng.gen_range(0..3) {
            0 => format!("{}", n),
            1 => format!("{}/2", n),
            _ => format!("{}/3", n),
        }
    }

    fn offset(&mut self, scope: &[Bound]) -> String {
        let mut s = String::from("t");
        for b in scope {
            if let Bound::Time(x) = b {
                if self.rng.gen_bool(0.7) {
                    if self.past_only {
                        s.push_str(&format!(" - {x}"));
                    } else {
                        s.push_str(if self.rng.gen_bool(0.5) { " + " } else { " - " });
                        s.push_str(x);
                    }
                }
            }
        }
        let deltas: &[&str] = if self.past_only {
            &["", " - 1/2", " - 1", " - 3/2"]
        } else {
            &["", " - 1/2", " + 1/2", " - 1", " + 1"]
        };
        s.push_str(deltas.choose(self.rng).unwrap());
        s
    }

    fn access(&mut self, scope: &[Bound]) -> String {
        let f = *self.signals.choose(self.rng).unwrap();
        format!("{f}({})", self.offset(scope))
    }

    fn term(&mut self, scope: &[Bound]) -> String {
        let values: Vec<&String> = scope
            .iter()
            .filter_map(|b| match b {
                Bound::Value(r) => Some(r),
                _ => None,
            })
            .collect();
        match self.rng.gen_range(0..10) {
            0..=3 => self.access(scope),
            4 => self.constant(),
            5 if !values.is_empty() => values.choose(self.rng).unwrap().to_string(),
            6 => format!("{} - {}", self.access(scope), self.access(scope)),
            7 if !values.is_empty() => {
                let r = values.choose(self.rng).unwrap().to_string();
                format!("{} - {r}", self.access(scope))
            }
            _ => format!("{} + {}", self.access(scope), self.constant()),
        }
    }

    fn atom(&mut self, scope: &[Bound]) -> String {
        let op = *["<", "<=", ">", ">="].choose(self.rng).unwrap();
        if self.rng.gen_bool(0.15) {
            let c = self.rng.gen_range(1..=4);
            return format!("|{} - {}| {op} {c}/2", self.access(scope), self.term(scope));
        }
        let a = self.term(scope);
        let mut b = self.term(scope);
        if !a.contains('(') && !b.contains('(') {
            b = self.access(scope);
        }
        format!("{a} {op} {b}")
    }

    fn interval(&mut self, time: bool) -> &'static str {
        if time {
            if self.past_only {
                ["[0,1]", "[0,2]", "(0,1)", "[1/2,3/2]", "(0,1]", "[0,1/2]"].choose(self.rng).unwrap()
            } else {
                ["[0,1]", "[0,2]", "(0,1)", "[-1,0]", "[1/2,3/2]", "[-2,-1]", "(0,1]"]
                    .choose(self.rng)
                    .unwrap()
            }
        } else if self.unbounded_values {
            ["[-3,3]", "(-inf,inf)", "[0,5]", "(-inf,0]", "(-2,2)"].choose(self.rng).unwrap()
        } else {
            ["[-3,3]", "[0,5]", "(-2,2)", "[-1,4]"].choose(self.rng).unwrap()
        }
    }

    fn formula(&mut self, depth: usize, scope: &mut Vec<Bound>) -> String {
        if depth == 0 {
            return self.atom(scope);
        }
        let quant_ok = self.used < self.max_quantifiers;
        match self.rng.gen_range(0..10) {
            0 | 1 => self.atom(scope),
            2 => format!("!({})", self.formula(depth - 1, scope)),
            3 => format!("({}) || ({})", self.formula(depth - 1, scope), self.formula(depth - 1, scope)),
            4 => format!("({}) && ({})", self.formula(depth - 1, scope), self.formula(depth - 1, scope)),
            5 => format!("({}) -> ({})", self.formula(depth - 1, scope), self.formula(depth - 1, scope)),
            _ if quant_ok => {
                self.used += 1;
                self.fresh += 1;
                let time = self.rng.gen_bool(0.7);
                let name = if time { format!("x{}", self.fresh) } else { format!("r{}", self.fresh) };
                let iv = self.interval(time);
                let q = if self.rng.gen_bool(0.5) { "E" } else { "A" };
                scope.push(if time { Bound::Time(name.clone()) } else { Bound::Value(name.clone()) });
                let mut body = self.formula(depth - 1, scope);
                if time && !body.contains(&name) {
                    // The variable must be read inside an access to be a time variable.
                    let f = *self.signals.choose(self.rng).unwrap();
                    let sign = if self.past_only { "-" } else { "+" };
                    body = format!("{f}(t {sign} {name}) < {}", self.constant());
                }
                scope.pop();
                format!("{q} {name} in {iv}. ({body})")
            }
            _ => self.atom(scope),
        }
    }

    /// A fresh random formula, as text and parsed.
    pub fn generate(&mut self) -> (String, Formula) {
        self.used = 0;
        self.fresh = 0;
        let depth = self.rng.gen_range(0..=self.max_depth);
        let text = self.formula(depth, &mut Vec::new());
        let phi = parse(&text).unwrap_or_else(|e| panic!("generated `{text}` does not parse: {e}"));
        (text, phi)
    }
}
