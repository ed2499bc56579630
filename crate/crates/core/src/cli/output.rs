//! JSON-lines wire form of robustness segments.

use serde::{Deserialize, Serialize};

use crate::monitor::{RobustnessSegment, TimePiece, ValueAnnotation};
use crate::polyhedra::{LinExpr, Var};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineText {
    pub slope: String,
    pub intercept: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutputValue {
    Affine { affine: AffineText },
    /// `"+inf"` or `"-inf"`
    Infinite(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputPiece {
    pub t_lo: String,
    pub t_hi: String,
    pub lo_strict: bool,
    pub hi_strict: bool,
    pub value: OutputValue,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputSegment {
    pub segment: u64,
    pub t_lo: String,
    pub t_hi: String,
    pub pieces: Vec<OutputPiece>,
}

/// How rationals are printed: exact `p/q`, or rounded to `k` decimals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NumberFormat {
    #[default]
    Exact,
    Decimal(usize),
}

impl NumberFormat {
    pub fn show(self, r: &Rational) -> String {
        match self {
            NumberFormat::Exact => r.to_string(),
            NumberFormat::Decimal(k) => r.to_decimal_string(k),
        }
    }
}

pub fn piece_to_wire(p: &TimePiece, t: Var, fmt: NumberFormat) -> OutputPiece {
    let value = match &p.value {
        ValueAnnotation::PlusInf => OutputValue::Infinite("+inf".into()),
        ValueAnnotation::MinusInf => OutputValue::Infinite("-inf".into()),
        ValueAnnotation::Affine(_) => {
            let (slope, intercept) = p.slope_intercept(t).expect("finite annotation");
            OutputValue::Affine {
                affine: AffineText {
                    slope: fmt.show(&slope),
                    intercept: fmt.show(&intercept),
                },
            }
        }
    };
    OutputPiece {
        t_lo: fmt.show(&p.lo),
        t_hi: fmt.show(&p.hi),
        lo_strict: p.lo_strict,
        hi_strict: p.hi_strict,
        value,
    }
}

pub fn segment_to_wire(s: &RobustnessSegment, t: Var, fmt: NumberFormat) -> OutputSegment {
    OutputSegment {
        segment: s.index,
        t_lo: fmt.show(&s.t_lo),
        t_hi: fmt.show(&s.t_hi),
        pieces: s.pieces.iter().map(|p| piece_to_wire(p, t, fmt)).collect(),
    }
}

fn number(text: &str) -> Result<Rational, String> {
    text.parse().map_err(|_| format!("invalid number `{text}`"))
}

/// Parse an exactly printed segment back.
pub fn segment_from_wire(w: &OutputSegment, t: Var) -> Result<RobustnessSegment, String> {
    let mut pieces = Vec::with_capacity(w.pieces.len());
    for p in &w.pieces {
        let value = match &p.value {
            OutputValue::Affine { affine } => ValueAnnotation::Affine(LinExpr::from_terms(
                [(t, number(&affine.slope)?)],
                number(&affine.intercept)?,
            )),
            OutputValue::Infinite(s) if s == "+inf" => ValueAnnotation::PlusInf,
            OutputValue::Infinite(s) if s == "-inf" => ValueAnnotation::MinusInf,
            OutputValue::Infinite(s) => return Err(format!("invalid value `{s}`")),
        };
        pieces.push(TimePiece {
            lo: number(&p.t_lo)?,
            lo_strict: p.lo_strict,
            hi: number(&p.t_hi)?,
            hi_strict: p.hi_strict,
            value,
        });
    }
    Ok(RobustnessSegment {
        index: w.segment,
        t_lo: number(&w.t_lo)?,
        t_hi: number(&w.t_hi)?,
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn round_trip() {
        let t = Var::new("t");
        let seg = RobustnessSegment {
            index: 3,
            t_lo: q(2, 1),
            t_hi: q(3, 1),
            pieces: vec![
                TimePiece {
                    lo: q(2, 1),
                    lo_strict: false,
                    hi: q(11, 5),
                    hi_strict: true,
                    value: ValueAnnotation::Affine(LinExpr::from_terms([(t, q(-3, 1))], q(6, 1))),
                },
                TimePiece {
                    lo: q(11, 5),
                    lo_strict: false,
                    hi: q(3, 1),
                    hi_strict: true,
                    value: ValueAnnotation::PlusInf,
                },
            ],
        };
        let wire = segment_to_wire(&seg, t, NumberFormat::Exact);
        let text = serde_json::to_string(&wire).unwrap();
        assert!(text.contains(r#""t_hi":"11/5""#), "{text}");
        assert!(text.contains(r#""value":"+inf""#), "{text}");
        let back: OutputSegment = serde_json::from_str(&text).unwrap();
        assert_eq!(segment_from_wire(&back, t).unwrap(), seg);
        let dec = segment_to_wire(&seg, t, NumberFormat::Decimal(3));
        assert_eq!(dec.pieces[0].t_hi, "2.200");
    }
}
