//! Plain-text rendering. Values are exact `p/q`; the optional decimal
//! column is an approximation for reading only.

use desir_core::cone::{Decomposition, NonPositiveCombination};
use desir_core::{Gamble, PrevisionValue, Rational};
use num_traits::ToPrimitive;

#[derive(Clone, Copy, Debug, Default)]
pub struct Style {
    pub decimal: bool,
    pub quiet: bool,
}

impl Style {
    pub fn rational(&self, r: &Rational) -> String {
        if self.decimal && !r.is_integer() {
            match r.to_f64() {
                Some(x) => format!("{r} [~{x:.6}]"),
                None => r.to_string(),
            }
        } else {
            r.to_string()
        }
    }

    pub fn tuple(&self, values: &[Rational]) -> String {
        let parts: Vec<String> = values.iter().map(|v| self.rational(v)).collect();
        format!("({})", parts.join(", "))
    }

    /// `key=value` pairs in domain order.
    pub fn gamble(&self, g: &Gamble) -> String {
        let domain = g.domain();
        let parts: Vec<String> = g
            .values()
            .iter()
            .enumerate()
            .map(|(i, v)| format!("{}={}", domain.key(i), self.rational(v)))
            .collect();
        parts.join(" ")
    }

    pub fn prevision(&self, p: &PrevisionValue) -> String {
        match p {
            PrevisionValue::Value(v) => self.rational(v),
            other => other.to_string(),
        }
    }

    pub fn combination(&self, witness: &NonPositiveCombination) -> Vec<String> {
        let mut lines = vec![
            format!("  assessment weights: {}", self.tuple(&witness.assessment_weights)),
            format!("  positive weights: {}", self.tuple(&witness.positive_weights)),
        ];
        if !witness.lineality_weights.is_empty() {
            lines.push(format!("  lineality weights: {}", self.tuple(&witness.lineality_weights)));
        }
        lines.push(format!("  combination: {}", self.gamble(&witness.combination)));
        lines
    }

    pub fn decomposition(&self, d: &Decomposition) -> Vec<String> {
        let mut lines = vec![
            format!("  generator weights: {}", self.tuple(&d.generator_weights)),
            format!("  positive part: {}", self.tuple(&d.positive_weights)),
        ];
        if !d.lineality_weights.is_empty() {
            lines.push(format!("  lineality weights: {}", self.tuple(&d.lineality_weights)));
        }
        lines
    }
}
