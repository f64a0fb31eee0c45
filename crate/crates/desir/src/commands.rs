//! The operations behind each subcommand and script query. Each returns the
//! report lines and an exit code.

use std::cell::OnceCell;

use desir_core::bernstein::{
    coeff_range, degree_raise, extend_infinite, from_count_gamble, from_sequence_gamble, BernsteinPoly,
    FrequencyVector, InfiniteExtension,
};
use desir_core::exchangeable::{exchangeable_extension, extend_finite, ExchangeableModel, FiniteExtension};
use desir_core::symmetry::{count_representation, kernel_basis};
use desir_core::{
    avoids_nonpositivity, Coherence, CountVector, DesirCone, Domain, Error, Gamble, Rational, SequenceSpace,
};

use crate::error::CliError;
use crate::format::{index_of_key, Assessment, Lineality};
use crate::report::Style;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub lines: Vec<String>,
    pub code: i32,
}

impl Output {
    fn ok(lines: Vec<String>) -> Self {
        Self { lines, code: 0 }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

enum Model {
    Plain(DesirCone),
    Exchangeable(ExchangeableModel),
}

/// An assessment together with the settings it is queried under. The
/// natural extension is built on first use and kept.
pub struct Session {
    assessment: Assessment,
    exchangeable: bool,
    pub cap: usize,
    pub style: Style,
    model: OnceCell<Model>,
}

fn sequence_space(domain: &Domain, what: &str) -> Result<SequenceSpace, CliError> {
    match domain {
        Domain::Sequences(s) => Ok(s.clone()),
        _ => Err(CliError::Schema(format!("{what} needs an assessment on a sequence space"))),
    }
}

/// Symbols of a sample such as `"bw"` or `"b,w"`.
pub fn parse_sample(space: &SequenceSpace, text: &str) -> Result<Vec<usize>, CliError> {
    let cats = space.categories();
    let labels: Vec<String> = if text.contains(',') {
        text.split(',').map(|s| s.trim().to_string()).collect()
    } else if cats.iter().all(|c| c.chars().count() == 1) {
        text.chars().map(String::from).collect()
    } else {
        return Err(CliError::schema("sample", "separate multi-character labels with commas"));
    };
    labels
        .iter()
        .map(|l| {
            cats.iter()
                .position(|c| c == l)
                .ok_or_else(|| CliError::schema("sample", format!("unknown category {l:?}")))
        })
        .collect()
}

/// A count vector such as `"1,0"`.
pub fn parse_counts(text: &str) -> Result<CountVector, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::schema("counts", format!("not a count: {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(CountVector::new)
}

impl Session {
    pub fn new(assessment: Assessment, exchangeable: bool, cap: usize, style: Style) -> Result<Self, CliError> {
        let exchangeable = exchangeable || assessment.lineality == Lineality::Exchangeable;
        if exchangeable {
            sequence_space(&assessment.domain, "exchangeability")?;
            if matches!(assessment.lineality, Lineality::Gambles(_)) {
                return Err(CliError::schema(
                    "lineality",
                    "explicit lineality cannot be combined with exchangeability",
                ));
            }
        }
        Ok(Self {
            assessment,
            exchangeable,
            cap,
            style,
            model: OnceCell::new(),
        })
    }

    pub fn domain(&self) -> &Domain {
        &self.assessment.domain
    }

    fn lineality(&self) -> Result<Vec<Gamble>, CliError> {
        Ok(match &self.assessment.lineality {
            Lineality::Gambles(v) => v.clone(),
            _ if self.exchangeable => kernel_basis(&sequence_space(self.domain(), "exchangeability")?),
            _ => Vec::new(),
        })
    }

    fn model(&self) -> Result<&Model, CliError> {
        if let Some(m) = self.model.get() {
            return Ok(m);
        }
        let gens = self.assessment.generators.clone();
        let model = if self.exchangeable {
            let space = sequence_space(self.domain(), "exchangeability")?;
            Model::Exchangeable(exchangeable_extension(&space, gens)?)
        } else {
            let cone = DesirCone::new(self.domain().clone(), self.lineality()?, gens)?;
            cone.ensure_coherent()?;
            Model::Plain(cone)
        };
        Ok(self.model.get_or_init(|| model))
    }

    fn gamble_on_domain(&self, f: &Gamble) -> Result<(), CliError> {
        if f.domain() != self.domain() {
            return Err(CliError::schema("gamble", "space differs from the assessment space"));
        }
        Ok(())
    }

    pub fn check(&self) -> Result<Output, CliError> {
        let lineality = self.lineality()?;
        let verdict = avoids_nonpositivity(self.domain(), &self.assessment.generators, &lineality)?;
        let label = if self.exchangeable {
            "avoids non-positivity under exchangeability"
        } else {
            "avoids non-positivity"
        };
        Ok(match verdict {
            Coherence::Avoids => Output::ok(vec![format!("{label}: true")]),
            Coherence::Fails(witness) => {
                let mut lines = vec![format!("{label}: false")];
                if !self.style.quiet {
                    lines.push("non-positive combination:".into());
                    lines.extend(self.style.combination(&witness));
                }
                Output { lines, code: 2 }
            }
        })
    }

    pub fn member(&self, f: &Gamble) -> Result<Output, CliError> {
        self.gamble_on_domain(f)?;
        let style = &self.style;
        let mut lines = Vec::new();
        match self.model()? {
            Model::Plain(cone) => {
                let d = cone.decompose(f)?;
                lines.push(format!("member: {}", yes_no(d.is_some())));
                if let (Some(d), false) = (d, style.quiet) {
                    lines.push("decomposition:".into());
                    lines.extend(style.decomposition(&d));
                }
            }
            Model::Exchangeable(model) => {
                let member = model.contains(f)?;
                lines.push(format!("member: {}", yes_no(member)));
                if member && !style.quiet {
                    let g = count_representation(f)?;
                    if let Some(d) = model.count_cone().decompose(&g)? {
                        lines.push(format!("count representation: {}", style.gamble(&g)));
                        lines.push("count-level decomposition:".into());
                        lines.extend(style.decomposition(&d));
                    }
                }
            }
        }
        Ok(Output::ok(lines))
    }

    pub fn prevision(&self, f: &Gamble, upper: bool) -> Result<Output, CliError> {
        self.gamble_on_domain(f)?;
        let value = match (self.model()?, upper) {
            (Model::Plain(c), false) => c.lower_prevision(f)?,
            (Model::Plain(c), true) => c.upper_prevision(f)?,
            (Model::Exchangeable(m), false) => m.lower_prevision(f)?,
            (Model::Exchangeable(m), true) => m.upper_prevision(f)?,
        };
        Ok(Output::ok(vec![self.style.prevision(&value)]))
    }

    pub fn marginal(&self, f: &Gamble) -> Result<Output, CliError> {
        self.gamble_on_domain(f)?;
        let cone = match self.model()? {
            Model::Plain(c) => c,
            Model::Exchangeable(m) => m.sequence_cone(),
        };
        Ok(Output::ok(vec![format!(
            "marginally desirable: {}",
            yes_no(cone.is_marginally_desirable(f)?)
        )]))
    }

    /// Updating on an observed sample; `f` lives on the remaining variables.
    pub fn update_sample(&self, sample: &str, f: &Gamble) -> Result<Output, CliError> {
        let Model::Exchangeable(model) = self.model()? else {
            return Err(CliError::Schema("updating on a sample needs an exchangeable model".into()));
        };
        let sample = parse_sample(model.space(), sample)?;
        let member = model.updated_sample_member(&sample, f)?;
        Ok(Output::ok(vec![format!("updated member: {}", yes_no(member))]))
    }

    /// Updating on an observed count vector; `g` is a count gamble on the
    /// remaining variables.
    pub fn update_counts(&self, counts: &str, g: &Gamble) -> Result<Output, CliError> {
        let Model::Exchangeable(model) = self.model()? else {
            return Err(CliError::Schema("updating on counts needs an exchangeable model".into()));
        };
        let member = model.updated_member(&parse_counts(counts)?, g)?;
        Ok(Output::ok(vec![format!("updated member: {}", yes_no(member))]))
    }

    /// Updating on an event given by domain keys.
    pub fn update_event(&self, keys: &[String], f: &Gamble) -> Result<Output, CliError> {
        self.gamble_on_domain(f)?;
        let event = keys
            .iter()
            .map(|k| index_of_key(self.domain(), k, "event"))
            .collect::<Result<Vec<_>, _>>()?;
        let cone = match self.model()? {
            Model::Plain(c) => c,
            Model::Exchangeable(m) => m.sequence_cone(),
        };
        Ok(Output::ok(vec![format!("updated member: {}", yes_no(cone.updated_member(&event, f)?))]))
    }

    fn plain_generators(&self, what: &str) -> Result<SequenceSpace, CliError> {
        if matches!(self.assessment.lineality, Lineality::Gambles(_)) {
            return Err(CliError::Schema(format!("{what} does not take explicit lineality")));
        }
        sequence_space(self.domain(), what)
    }

    pub fn extend_finite(&self, k: usize) -> Result<Output, CliError> {
        let space = self.plain_generators("finite extension")?;
        let target = space.length() + k;
        let style = &self.style;
        Ok(match extend_finite(&space, &self.assessment.generators, k)? {
            FiniteExtension::Extendable(model) => {
                let mut lines = vec![format!("extendable to length {target}")];
                if !style.quiet {
                    lines.push("extended count generators:".into());
                    for g in model.count_cone().generators() {
                        lines.push(format!("  {}", style.gamble(g)));
                    }
                }
                Output::ok(lines)
            }
            FiniteExtension::NotExtendable(w) => {
                let mut lines = vec![format!("not-extendable to length {target}")];
                if !style.quiet {
                    lines.push("extended count generators:".into());
                    for g in &w.extended_generators {
                        lines.push(format!("  {}", style.gamble(g)));
                    }
                    lines.push("non-positive combination:".into());
                    lines.extend(style.combination(&w.combination));
                    lines.push(format!("  on sequences: {}", style.gamble(&w.sequence_image)));
                }
                Output { lines, code: 2 }
            }
        })
    }

    pub fn extend_infinite(&self) -> Result<Output, CliError> {
        let space = self.plain_generators("infinite extension")?;
        let style = &self.style;
        Ok(match extend_infinite(&space, &self.assessment.generators, self.cap)? {
            InfiniteExtension::Extendable { degree, .. } => {
                Output::ok(vec![format!("extendable: certified at degree {degree}")])
            }
            InfiniteExtension::NotExtendable {
                degree,
                weights,
                combination,
            } => {
                let mut lines = vec![format!("not-extendable: non-positive at degree {degree}")];
                if !style.quiet {
                    lines.push(format!("  weights: {}", style.tuple(&weights)));
                    lines.push(format!("  coefficients: {}", style.gamble(&combination)));
                }
                Output { lines, code: 2 }
            }
            InfiniteExtension::Undecided { cap } => Output::ok(vec![format!("undecided up to degree {cap}")]),
        })
    }
}

/// Bernstein coefficients of a sequence or count gamble.
pub fn bernstein_expand(f: &Gamble, style: &Style) -> Result<Output, CliError> {
    let p = match f.domain() {
        Domain::Sequences(_) => from_sequence_gamble(f)?,
        Domain::Counts(_) => from_count_gamble(f)?,
        Domain::Outcomes(_) => return Err(CliError::schema("gamble.space", "needs categories")),
    };
    Ok(Output::ok(polynomial_lines(&p, style)))
}

fn polynomial_lines(p: &BernsteinPoly, style: &Style) -> Vec<String> {
    let mut lines = vec![format!(
        "degree {}: {}",
        p.degree(),
        style.tuple(p.coefficients().values())
    )];
    if !style.quiet {
        lines.push(format!("  {}", style.gamble(p.coefficients())));
    }
    lines
}

pub fn bernstein_raise(p: &BernsteinPoly, to: usize, style: &Style) -> Result<Output, CliError> {
    Ok(Output::ok(polynomial_lines(&degree_raise(p, to)?, style)))
}

pub fn bernstein_range(p: &BernsteinPoly, degree: Option<usize>, style: &Style) -> Result<Output, CliError> {
    let n = degree.unwrap_or(p.degree());
    let (lo, hi) = coeff_range(p, n)?;
    Ok(Output::ok(vec![format!(
        "coefficient range at degree {n}: [{}, {}]",
        style.rational(&lo),
        style.rational(&hi)
    )]))
}

pub fn bernstein_eval(p: &BernsteinPoly, theta: Vec<Rational>, style: &Style) -> Result<Output, CliError> {
    let theta = FrequencyVector::new(theta).map_err(|e: Error| CliError::schema("at", e))?;
    Ok(Output::ok(vec![format!("value: {}", style.rational(&p.evaluate(&theta)?))]))
}
