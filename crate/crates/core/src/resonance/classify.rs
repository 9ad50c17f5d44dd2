use serde::Serialize;

use super::{h_function, quartic_terms, QuarticCoefficients};
use crate::u2param::{sin_cos_mu, ExtendedLength, PointInteraction};
use crate::{Error, Result};

/// Default relative tolerance for the defining equalities.
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-10;

/// Number of spacings reported per incidental root.
pub const SPACING_COUNT: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseIIISubcase {
    #[serde(rename = "i")]
    I,
    #[serde(rename = "ii")]
    Ii,
    #[serde(rename = "iii")]
    Iii,
    #[serde(rename = "iv")]
    Iv,
}

impl CaseIIISubcase {
    pub const ALL: [CaseIIISubcase; 4] = [Self::I, Self::Ii, Self::Iii, Self::Iv];

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::I => "i",
            Self::Ii => "ii",
            Self::Iii => "iii",
            Self::Iv => "iv",
        }
    }

    /// `(L2+, L2-)` demanded of interaction 2, and the required sign of `L1+ + L1-`.
    fn pattern(&self, lp: f64, lm: f64) -> ((f64, f64), f64) {
        match self {
            Self::I => ((lm, -lp), 1.0),
            Self::Ii => ((-lp, lm), -1.0),
            Self::Iii => ((lp, -lm), 1.0),
            Self::Iv => ((-lm, lp), -1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ResonanceKind {
    CaseI,
    CaseII,
    CaseIII(CaseIIISubcase),
    Incidental { k_squared: f64 },
    Wall,
    NoneFound,
}

impl ResonanceKind {
    pub fn label(&self) -> String {
        match self {
            Self::CaseI => "CaseI".into(),
            Self::CaseII => "CaseII".into(),
            Self::CaseIII(s) => format!("CaseIII-{}", s.as_str()),
            Self::Incidental { .. } => "Incidental".into(),
            Self::Wall => "Wall".into(),
            Self::NoneFound => "NoneFound".into(),
        }
    }

    /// One of the infinite resonance families.
    pub fn is_family(&self) -> bool {
        matches!(self, Self::CaseI | Self::CaseII | Self::CaseIII(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityCheck {
    pub name: String,
    pub residual: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseMatch {
    pub case: String,
    pub checks: Vec<EqualityCheck>,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResonanceClass {
    pub kind: ResonanceKind,
    pub matches: Vec<CaseMatch>,
    /// Some length is infinite, so the quartic was skipped.
    pub infinite_lengths: bool,
    pub quartic: Option<QuarticCoefficients>,
}

impl ResonanceClass {
    /// Every case whose defining equalities all held.
    pub fn matched_cases(&self) -> Vec<&str> {
        self.matches
            .iter()
            .filter(|m| m.matched)
            .map(|m| m.case.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncidentalResonance {
    pub k: f64,
    /// Smallest positive spacings `xi2 - xi1` that make `k` resonate, ascending.
    pub spacings: Vec<f64>,
}

struct Checker {
    tol: f64,
    scale: f64,
    checks: Vec<EqualityCheck>,
}

impl Checker {
    fn new(tol: f64, scale: f64) -> Self {
        Checker {
            tol,
            scale,
            checks: Vec::new(),
        }
    }

    fn push(&mut self, name: &str, residual: f64) {
        self.checks.push(EqualityCheck {
            name: name.into(),
            residual,
            holds: residual <= self.tol,
        });
    }

    fn equal(&mut self, name: &str, a: f64, b: f64) {
        self.equal_with_floor(name, a, b, self.scale);
    }

    fn equal_with_floor(&mut self, name: &str, a: f64, b: f64, floor: f64) {
        let denom = a.abs().max(b.abs()).max(floor);
        let residual = if denom == 0.0 { 0.0 } else { (a - b).abs() / denom };
        self.push(name, residual);
    }

    fn finish(self, case: String) -> CaseMatch {
        let matched = self.checks.iter().all(|c| c.holds);
        CaseMatch {
            case,
            checks: self.checks,
            matched,
        }
    }
}

fn extended_residual(a: ExtendedLength, b: ExtendedLength, scale: f64) -> f64 {
    match (a.finite_value(), b.finite_value()) {
        (Some(x), Some(y)) => {
            let denom = x.abs().max(y.abs()).max(scale);
            if denom == 0.0 {
                0.0
            } else {
                (x - y).abs() / denom
            }
        }
        _ if a == b => 0.0,
        _ => 1.0,
    }
}

fn wall_match(p1: &PointInteraction, p2: &PointInteraction, tol: f64, scale: f64) -> CaseMatch {
    let mut c = Checker::new(tol, scale);
    c.push(
        "L1+ = L1-",
        extended_residual(p1.l_plus(), p1.l_minus(), scale),
    );
    c.push(
        "L2+ = L2-",
        extended_residual(p2.l_plus(), p2.l_minus(), scale),
    );
    c.push("sin(mu1) = 0", sin_cos_mu(p1.mu()).0.abs());
    c.push("sin(mu2) = 0", sin_cos_mu(p2.mu()).0.abs());
    // a wall needs any one of these, not all
    let matched = c.checks.iter().any(|e| e.holds);
    CaseMatch {
        case: "Wall".into(),
        checks: c.checks,
        matched,
    }
}

fn quartic_checks(c: &mut Checker, terms: &[(f64, f64); 3]) {
    for (name, (a, b)) in ["alpha = 0", "beta = 0", "gamma = 0"].iter().zip(terms) {
        let denom = a.abs().max(b.abs());
        let residual = if denom == 0.0 { 0.0 } else { (a - b).abs() / denom };
        c.push(name, residual);
    }
}

/// Places the pair in the case analysis of perfect transmission.
///
/// The cases are tried in the fixed order Wall, I, II, III-i..iv, Incidental.
/// Every case's equalities are recorded in `matches`, so an input that fits
/// several patterns is visible even though only the first is reported.
pub fn classify(p1: &PointInteraction, p2: &PointInteraction, tol: f64) -> ResonanceClass {
    let finite: Vec<f64> = [p1.l_plus(), p1.l_minus(), p2.l_plus(), p2.l_minus()]
        .iter()
        .filter_map(|l| l.finite_value())
        .collect();
    let scale = finite.iter().fold(0.0_f64, |m, x| m.max(x.abs()));

    let wall = wall_match(p1, p2, tol, scale);
    let is_wall = wall.matched;
    let mut matches = vec![wall];
    if is_wall {
        return ResonanceClass {
            kind: ResonanceKind::Wall,
            matches,
            infinite_lengths: finite.len() < 4,
            quartic: quartic_terms(p1, p2).ok().map(coefficients),
        };
    }
    let Ok(terms) = quartic_terms(p1, p2) else {
        return ResonanceClass {
            kind: ResonanceKind::NoneFound,
            matches,
            infinite_lengths: true,
            quartic: None,
        };
    };
    let quartic = coefficients(terms);
    let (l1p, l1m, l2p, l2m) = (finite[0], finite[1], finite[2], finite[3]);
    let sin1 = sin_cos_mu(p1.mu()).0;
    let sin2 = sin_cos_mu(p2.mu()).0;

    let mut case_i = Checker::new(tol, scale);
    quartic_checks(&mut case_i, &terms);
    case_i.equal_with_floor("sin^2(mu2) = sin^2(mu1)", sin2 * sin2, sin1 * sin1, 1.0);
    case_i.equal("L2+ = L1+", l2p, l1p);
    case_i.equal("L2- = L1-", l2m, l1m);
    matches.push(case_i.finish(ResonanceKind::CaseI.label()));

    let mut case_ii = Checker::new(tol, scale);
    quartic_checks(&mut case_ii, &terms);
    case_ii.equal_with_floor("sin^2(mu2) = sin^2(mu1)", sin2 * sin2, sin1 * sin1, 1.0);
    case_ii.equal("L2+ = -L1-", l2p, -l1m);
    case_ii.equal("L2- = -L1+", l2m, -l1p);
    matches.push(case_ii.finish(ResonanceKind::CaseII.label()));

    let sum = l1p + l1m;
    let diff = l1p - l1m;
    for sub in CaseIIISubcase::ALL {
        let ((want_p, want_m), sign) = sub.pattern(l1p, l1m);
        let mut c = Checker::new(tol, scale);
        quartic_checks(&mut c, &terms);
        c.equal_with_floor(
            "(L1+ + L1-)^2 sin^2(mu2) = (L1+ - L1-)^2 sin^2(mu1)",
            sum * sum * sin2 * sin2,
            diff * diff * sin1 * sin1,
            scale * scale,
        );
        c.push(
            if sign > 0.0 { "L1+ + L1- > 0" } else { "L1+ + L1- < 0" },
            if sum * sign > 0.0 { 0.0 } else { 1.0 },
        );
        let (np, nm) = match sub {
            CaseIIISubcase::I => ("L2+ = L1-", "L2- = -L1+"),
            CaseIIISubcase::Ii => ("L2+ = -L1+", "L2- = L1-"),
            CaseIIISubcase::Iii => ("L2+ = L1+", "L2- = -L1-"),
            CaseIIISubcase::Iv => ("L2+ = -L1-", "L2- = L1+"),
        };
        c.equal(np, l2p, want_p);
        c.equal(nm, l2m, want_m);
        matches.push(c.finish(ResonanceKind::CaseIII(sub).label()));
    }

    let family = matches[1..].iter().position(|m| m.matched).map(|i| match i {
        0 => ResonanceKind::CaseI,
        1 => ResonanceKind::CaseII,
        j => ResonanceKind::CaseIII(CaseIIISubcase::ALL[j - 2]),
    });
    let kind = match family {
        Some(kind) => kind,
        None => match incidental_roots(&quartic, &terms, tol) {
            Ok(roots) => ResonanceKind::Incidental {
                k_squared: roots[0],
            },
            Err(_) => ResonanceKind::NoneFound,
        },
    };
    ResonanceClass {
        kind,
        matches,
        infinite_lengths: false,
        quartic: Some(quartic),
    }
}

fn coefficients(terms: [(f64, f64); 3]) -> QuarticCoefficients {
    QuarticCoefficients {
        alpha: terms[0].0 - terms[0].1,
        beta: terms[1].0 - terms[1].1,
        gamma: terms[2].0 - terms[2].1,
    }
}

fn incidental_roots(q: &QuarticCoefficients, terms: &[(f64, f64); 3], tol: f64) -> Result<Vec<f64>> {
    let negligible = |(a, b): (f64, f64)| (a - b).abs() <= tol * a.abs().max(b.abs());
    if terms.iter().all(|&t| negligible(t)) {
        return Err(Error::DegenerateQuartic);
    }
    let positive: Vec<f64> = q
        .roots_in_k_squared()
        .into_iter()
        .filter(|&x| x > 0.0 && x.is_finite())
        .collect();
    if positive.is_empty() {
        Err(Error::NoPositiveRoot)
    } else {
        Ok(positive)
    }
}

/// Isolated resonances allowed by a non-vanishing quartic.
///
/// For each positive root `k^2` the pair transmits perfectly at `k` only for
/// spacings `d_n = (arg h(k) + 2 pi n) / (2k)`; the first [`SPACING_COUNT`]
/// positive ones are returned.
pub fn incidental_resonance(
    p1: &PointInteraction,
    p2: &PointInteraction,
) -> Result<Vec<IncidentalResonance>> {
    let terms = quartic_terms(p1, p2)?;
    let q = coefficients(terms);
    let roots = incidental_roots(&q, &terms, DEFAULT_CLASSIFY_TOL)?;
    roots
        .into_iter()
        .map(|x| {
            let k = x.sqrt();
            let phase = h_function(p1, p2, k)?.arg();
            let first = if phase > 0.0 { 0 } else { 1 };
            let spacings = (first..first + SPACING_COUNT as i64)
                .map(|n| (phase + 2.0 * std::f64::consts::PI * n as f64) / (2.0 * k))
                .collect();
            Ok(IncidentalResonance { k, spacings })
        })
        .collect()
}
