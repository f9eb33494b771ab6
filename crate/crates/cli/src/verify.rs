//! Verification reports: every algebraic property of a symbol measured exactly
//! and compared against what its family is expected to satisfy.

use std::fmt;

use num_traits::Zero;

use pseudospline::analysis::{
    analyze, box_support, interpolatory_support, predicted_support, support_of, tensor_support,
    DegreeProbe, DegreeReport, SupportOctagon, SupportReport, DEFAULT_MAX_CHECK,
};
use pseudospline::format::format_fraction;
use pseudospline::symbols::{Family, SchemeSymbol};

use crate::CliResult;

/// Expected properties. `None` fields are measured and reported but not judged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Expectations {
    pub generation: Option<i64>,
    pub reproduction: Option<i64>,
    pub interpolatory: Option<bool>,
    pub support: Option<SupportOctagon>,
}

pub fn expected_support(symbol: &SchemeSymbol) -> Option<SupportOctagon> {
    expectations(symbol).support
}

pub fn expectations(symbol: &SchemeSymbol) -> Expectations {
    let p = &symbol.params;
    match (symbol.family, p.n, p.l) {
        (Family::Pseudo | Family::Variant | Family::Tensor, Some(n), Some(l)) if l < n => {
            let zero_mu = p.mu.iter().all(Zero::is_zero);
            let support = if symbol.family == Family::Tensor {
                tensor_support(n, l)
            } else {
                predicted_support(n, l).expect("l < n")
            };
            Expectations {
                generation: Some(2 * n as i64 - 1),
                reproduction: Some(2 * l as i64 + 1),
                interpolatory: Some(l + 1 == n && zero_mu),
                support: Some(support),
            }
        }
        (Family::FourDirBox, Some(n), _) if n >= 1 => Expectations {
            generation: Some(2 * n as i64 - 1),
            reproduction: Some(1),
            interpolatory: Some(n == 1),
            support: Some(box_support(n.div_ceil(2), n.div_ceil(2), n / 2)),
        },
        (Family::Interpolatory, Some(n), _) if n >= 1 => Expectations {
            generation: Some(2 * n as i64 - 1),
            reproduction: Some(2 * n as i64 - 1),
            interpolatory: Some(true),
            support: Some(interpolatory_support(n)),
        },
        (Family::ExampleAmu, _, _) if p.mu.len() == 1 => Expectations {
            generation: Some(3),
            reproduction: Some(3),
            interpolatory: Some(p.mu[0].is_zero()),
            support: Some(SupportOctagon::new(3, 3, 2)),
        },
        _ => Expectations::default(),
    }
}

/// One judged property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub expected: Option<String>,
    pub measured: String,
    pub pass: bool,
    /// Witness or other diagnostic supporting the measurement.
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub scheme: String,
    pub expectations: Expectations,
    pub degrees: DegreeReport,
    pub support: SupportReport,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn describe(symbol: &SchemeSymbol) -> String {
    let p = &symbol.params;
    let mut s = symbol.family.name().to_string();
    if let Some(n) = p.n {
        s.push_str(&format!(" n={n}"));
    }
    if let Some(l) = p.l {
        s.push_str(&format!(" l={l}"));
    }
    if !p.mu.is_empty() {
        let mu: Vec<String> = p.mu.iter().map(format_fraction).collect();
        s.push_str(&format!(" mu={}", mu.join(",")));
    }
    s
}

fn witness_text(probe: &DegreeProbe, what: &str) -> String {
    match &probe.witness {
        Some(w) => format!(
            "{what} D^({},{}) a{:?} = {}",
            w.order.0,
            w.order.1,
            w.point,
            format_fraction(&w.value)
        ),
        None => format!("no nonzero derivative through order {}", probe.degree),
    }
}

fn judged<T: PartialEq + ToString>(
    name: &'static str,
    expected: Option<T>,
    measured: T,
    detail: Option<String>,
) -> Check {
    Check {
        name,
        pass: expected.as_ref().is_none_or(|e| *e == measured),
        expected: expected.map(|e| e.to_string()),
        measured: measured.to_string(),
        detail,
    }
}

fn octagon_text(o: &SupportOctagon) -> String {
    format!("({}, {}, {})", o.m, o.n, o.l)
}

/// Measures every property of `symbol` and judges it against its family.
pub fn verify(symbol: &SchemeSymbol) -> CliResult<VerifyReport> {
    let expect = expectations(symbol);
    let max_check = expect
        .generation
        .map_or(DEFAULT_MAX_CHECK, |g| (g + 3).max(1) as u32);
    let degrees = analyze(&symbol.poly, max_check);
    let support = support_of(&symbol.poly)?;

    let mut checks = vec![
        judged("symmetry", Some(true), degrees.symmetric, None),
        judged(
            "convergence-necessary",
            Some(true),
            degrees.convergence_necessary,
            (!degrees.convergence_necessary)
                .then(|| "a(1,1) != 4 or a does not vanish at (-1,1), (1,-1), (-1,-1)".to_string()),
        ),
    ];
    let gen = &degrees.generation;
    checks.push(judged(
        "generation",
        expect.generation,
        degrees.generation_degree,
        Some(witness_text(gen, "first nonzero")),
    ));
    checks.push(judged(
        "reproduction",
        expect.reproduction,
        degrees.reproduction_degree,
        Some(match &degrees.reproduction {
            Some(probe) => witness_text(probe, "first nonzero"),
            None => "undefined: necessary convergence conditions fail".into(),
        }),
    ));
    checks.push(judged("interpolatory", expect.interpolatory, degrees.interpolatory, None));
    let measured = support.octagon;
    checks.push(Check {
        name: "support",
        expected: expect.support.as_ref().map(octagon_text),
        measured: octagon_text(&measured),
        pass: expect.support.is_none_or(|e| support.octagonal && e == measured),
        detail: Some(if support.octagonal {
            measured.to_string()
        } else {
            format!("not octagonal; max |a1|+|a2| = {}", support.max_l1)
        }),
    });

    Ok(VerifyReport {
        scheme: describe(symbol),
        expectations: expect,
        degrees,
        support,
        checks,
    })
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "scheme: {}", self.scheme)?;
        for c in &self.checks {
            let status = match (&c.expected, c.pass) {
                (None, _) => "info",
                (Some(_), true) => "pass",
                (Some(_), false) => "FAIL",
            };
            let mut line = format!(
                "{status:<4}  {:<22} measured {:<10} expected {:<10}",
                c.name,
                c.measured,
                c.expected.as_deref().unwrap_or("-")
            );
            if let Some(d) = &c.detail {
                line.push_str(&format!("  [{d}]"));
            }
            writeln!(f, "{}", line.trim_end())?;
        }
        let failed: Vec<&str> = self.checks.iter().filter(|c| !c.pass).map(|c| c.name).collect();
        if failed.is_empty() {
            writeln!(f, "result: PASS")
        } else {
            writeln!(f, "result: FAIL ({})", failed.join(", "))
        }
    }
}
