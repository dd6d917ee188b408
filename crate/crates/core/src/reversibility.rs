//! Reverse parameters under the symmetries of the square, the polynomial
//! invariants governing them, and checkers for the sufficient conditions.

use serde::{Deserialize, Serialize};

use crate::params::{Intensities, Parameter};
use crate::rng::RngStream;
use crate::symmetry::SymmetryElement;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// `|l - r| <= tol * max(1, |l|, |r|)`.
pub fn approx_eq(l: f64, r: f64, tol: f64) -> bool {
    (l - r).abs() <= tol * 1f64.max(l.abs()).max(r.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReversibilityInvariants {
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "BV")]
    pub bv: f64,
    #[serde(rename = "BH")]
    pub bh: f64,
}

pub fn invariants_of(p: &Parameter) -> ReversibilityInvariants {
    let (rv, rh) = (p.vertical_rate(), p.horizontal_rate());
    let death = p.p_h + p.p_v;
    ReversibilityInvariants {
        a: rh * rv - p.tau_v * p.tau_h,
        bv: death * rv - p.p_v * p.lambda_v,
        bh: death * rh - p.p_h * p.lambda_h,
    }
}

/// Exchange of the vertical and horizontal roles.
pub fn r_reverse(p: &Parameter) -> Parameter {
    Parameter {
        lambda0: p.lambda0,
        lambda_v: p.lambda_h,
        lambda_h: p.lambda_v,
        tau_v: p.tau_h,
        tau_h: p.tau_v,
        p_v: p.p_h,
        p_h: p.p_v,
        p0: p.p0,
    }
}

/// One elementary construction used to reach a reverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step {
    /// Diagonal flip, always available.
    R,
    /// Half turn from the invariants.
    Pi,
    /// Quarter turn from the invariants.
    Pi2,
}

/// A reverse model with its entry laws: `forward_law` is the Poisson law
/// stationary for the original model and `reverse_law` the one under which
/// the reverse is its image. Laws are absent when unknown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReversePair {
    pub element: SymmetryElement,
    pub reverse_params: Parameter,
    pub forward_law: Option<Intensities>,
    pub reverse_law: Option<Intensities>,
    /// Constructions applied, first to last.
    pub route: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inapplicable {
    pub reason: String,
}

impl Inapplicable {
    fn new(reason: impl Into<String>) -> Self {
        Inapplicable { reason: reason.into() }
    }
}

impl std::fmt::Display for Inapplicable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "not applicable: {}", self.reason)
    }
}

fn nonzero_invariants(p: &Parameter, tol: f64) -> Result<ReversibilityInvariants, Inapplicable> {
    let inv = invariants_of(p);
    for (name, v) in [("A", inv.a), ("BV", inv.bv), ("BH", inv.bh)] {
        if v.abs() <= tol {
            return Err(Inapplicable::new(format!("{name} = {v} vanishes")));
        }
    }
    Ok(inv)
}

fn stationary_law(inv: &ReversibilityInvariants) -> Intensities {
    Intensities { nu_h: inv.a / inv.bh, nu_v: inv.a / inv.bv }
}

fn finish(p: [f64; 8]) -> Result<Parameter, Inapplicable> {
    Parameter::from_tuple(p).map_err(|e| Inapplicable::new(format!("reverse is not a valid parameter: {e}")))
}

/// Half-turn reverse computed from the invariants, with the stationary
/// Poisson law `(A / BH, A / BV)` shared by both models.
pub fn corollary_pi(p: &Parameter, tol: f64) -> Result<ReversePair, Inapplicable> {
    let inv = nonzero_invariants(p, tol)?;
    let (a, bv, bh) = (inv.a, inv.bv, inv.bh);
    let (l, r) = (bh * bv * p.lambda0, a * a * p.p0);
    if !approx_eq(l, r, tol) {
        return Err(Inapplicable::new(format!("BH BV lambda0 = {l} differs from A^2 p0 = {r}")));
    }
    let reverse = finish([
        p.lambda0,
        a / bh * p.p_v,
        a / bv * p.p_h,
        bv / bh * p.tau_h,
        bh / bv * p.tau_v,
        bh / a * p.lambda_v,
        bv / a * p.lambda_h,
        p.p0,
    ])?;
    let nu = stationary_law(&inv);
    Ok(ReversePair {
        element: SymmetryElement::Pi,
        reverse_params: reverse,
        forward_law: Some(nu),
        reverse_law: Some(nu),
        route: vec![Step::Pi],
    })
}

/// Quarter-turn reverse computed from the invariants. The reverse runs
/// under the swapped Poisson law.
pub fn corollary_pi2(p: &Parameter, tol: f64) -> Result<ReversePair, Inapplicable> {
    let inv = nonzero_invariants(p, tol)?;
    let (a, bv, bh) = (inv.a, inv.bv, inv.bh);
    let (l, r) = (bv * p.lambda0, a * p.tau_v);
    if !approx_eq(l, r, tol) {
        return Err(Inapplicable::new(format!("BV lambda0 = {l} differs from A tauV = {r}")));
    }
    let (l, r) = (a * p.p0, bh * p.tau_v);
    if !approx_eq(l, r, tol) {
        return Err(Inapplicable::new(format!("A p0 = {l} differs from BH tauV = {r}")));
    }
    let reverse = finish([
        a / bv * p.tau_v,
        a / bv * p.p_h,
        p.lambda_v,
        bh / bv * p.tau_v,
        p.tau_v,
        bv / a * p.lambda_h,
        p.p_v,
        bv / a * p.tau_h,
    ])?;
    let nu = stationary_law(&inv);
    Ok(ReversePair {
        element: SymmetryElement::Pi2,
        reverse_params: reverse,
        forward_law: Some(nu),
        reverse_law: Some(nu.swapped()),
        route: vec![Step::Pi2],
    })
}

/// Reverse under any element of D4, composed from the diagonal flip and the
/// two constructions above.
pub fn reverse_under(g: SymmetryElement, p: &Parameter, tol: f64) -> Result<ReversePair, Inapplicable> {
    use SymmetryElement::*;
    let known_law = || corollary_pi(p, tol).ok().and_then(|rp| rp.forward_law);
    let pair = |reverse_params, forward_law, reverse_law, route| ReversePair {
        element: g,
        reverse_params,
        forward_law,
        reverse_law,
        route,
    };
    Ok(match g {
        Id => {
            let nu = known_law();
            pair(*p, nu, nu, vec![])
        }
        R => {
            let nu = known_law();
            pair(r_reverse(p), nu, nu.map(Intensities::swapped), vec![Step::R])
        }
        Pi => corollary_pi(p, tol)?,
        Pi2 => corollary_pi2(p, tol)?,
        RPi => {
            let h = corollary_pi(p, tol)?;
            pair(
                r_reverse(&h.reverse_params),
                h.forward_law,
                h.reverse_law.map(Intensities::swapped),
                vec![Step::Pi, Step::R],
            )
        }
        RPi2 => {
            let q = corollary_pi2(p, tol)?;
            pair(
                r_reverse(&q.reverse_params),
                q.forward_law,
                q.reverse_law.map(Intensities::swapped),
                vec![Step::Pi2, Step::R],
            )
        }
        Pi32 => {
            // r, then the quarter turn, then r again.
            let q = corollary_pi2(&r_reverse(p), tol)?;
            let mu = q.forward_law.map(Intensities::swapped);
            pair(r_reverse(&q.reverse_params), mu, q.forward_law, vec![Step::R, Step::Pi2, Step::R])
        }
        RPi32 => {
            let q = corollary_pi2(&r_reverse(p), tol)?;
            let mu = q.forward_law.map(Intensities::swapped);
            pair(q.reverse_params, mu, q.reverse_law, vec![Step::R, Step::Pi2])
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equality {
    pub label: String,
    pub left: f64,
    pub right: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub id: u8,
    pub equalities: Vec<Equality>,
    pub satisfied: bool,
}

/// Outcome of checking the five sufficient conditions for a pair of models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub conditions: Vec<Condition>,
    pub passed: bool,
}

impl ConditionReport {
    fn build(groups: Vec<Vec<(&str, f64, f64)>>, tol: f64) -> Self {
        let conditions: Vec<Condition> = groups
            .into_iter()
            .enumerate()
            .map(|(i, eqs)| {
                let equalities: Vec<Equality> = eqs
                    .into_iter()
                    .map(|(label, left, right)| Equality {
                        label: label.to_string(),
                        left,
                        right,
                        satisfied: approx_eq(left, right, tol),
                    })
                    .collect();
                let satisfied = equalities.iter().all(|e| e.satisfied);
                Condition { id: i as u8 + 1, equalities, satisfied }
            })
            .collect();
        let passed = conditions.iter().all(|c| c.satisfied);
        ConditionReport { conditions, passed }
    }

    /// Ids of the conditions that fail.
    pub fn failed(&self) -> Vec<u8> {
        self.conditions.iter().filter(|c| !c.satisfied).map(|c| c.id).collect()
    }
}

/// Half-turn conditions for `p` and its candidate reverse `pt` under
/// Poisson entries of intensities `nu_v` (bottom) and `nu_h` (left).
pub fn check_theorem_pi(p: &Parameter, pt: &Parameter, nu_v: f64, nu_h: f64, tol: f64) -> ConditionReport {
    ConditionReport::build(
        vec![
            vec![
                ("lambdaH~ + tauH~ = lambdaH + tauH", pt.horizontal_rate(), p.horizontal_rate()),
                ("lambdaV~ + tauV~ = lambdaV + tauV", pt.vertical_rate(), p.vertical_rate()),
            ],
            vec![
                ("lambda0~ = lambda0", pt.lambda0, p.lambda0),
                ("lambda0 = nuV nuH p0", p.lambda0, nu_v * nu_h * p.p0),
                ("lambdaV~ = nuH pV", pt.lambda_v, nu_h * p.p_v),
                ("lambdaH~ = nuV pH", pt.lambda_h, nu_v * p.p_h),
            ],
            vec![
                ("nuV tauV~ = nuH tauH", nu_v * pt.tau_v, nu_h * p.tau_h),
                ("nuH tauH~ = nuV tauV", nu_h * pt.tau_h, nu_v * p.tau_v),
            ],
            vec![
                ("nuH pV~ = lambdaV", nu_h * pt.p_v, p.lambda_v),
                ("nuV pH~ = lambdaH", nu_v * pt.p_h, p.lambda_h),
                ("p0~ = p0", pt.p0, p.p0),
            ],
            vec![("pV~ + pH~ + p0~ = pV + pH + p0", pt.p_v + pt.p_h + pt.p0, p.p_v + p.p_h + p.p0)],
        ],
        tol,
    )
}

/// Quarter-turn conditions for `p` and its candidate reverse `pt` with
/// bottom-edge intensity `nu_v`.
pub fn check_theorem_pi2(p: &Parameter, pt: &Parameter, nu_v: f64, tol: f64) -> ConditionReport {
    ConditionReport::build(
        vec![
            vec![
                ("lambdaH~ + tauH~ = lambdaV + tauV", pt.horizontal_rate(), p.vertical_rate()),
                ("lambdaV~ + tauV~ = lambdaH + tauH", pt.vertical_rate(), p.horizontal_rate()),
            ],
            vec![
                ("lambda0~ = lambda0", pt.lambda0, p.lambda0),
                ("lambda0 = nuV tauV", p.lambda0, nu_v * p.tau_v),
                ("lambdaV~ = nuV pH", pt.lambda_v, nu_v * p.p_h),
                ("lambdaH~ = lambdaV", pt.lambda_h, p.lambda_v),
            ],
            vec![("tauV~ = nuV p0", pt.tau_v, nu_v * p.p0), ("nuV tauH~ = lambda0", nu_v * pt.tau_h, p.lambda0)],
            vec![
                ("nuV pV~ = lambdaH", nu_v * pt.p_v, p.lambda_h),
                ("pH~ = pV", pt.p_h, p.p_v),
                ("nuV p0~ = tauH", nu_v * pt.p0, p.tau_h),
            ],
            vec![("pV~ + pH~ + p0~ = pV + pH + p0", pt.p_v + pt.p_h + pt.p0, p.p_v + p.p_h + p.p0)],
        ],
        tol,
    )
}

/// Rates uniform on `[0, 2]`, meeting probabilities uniform on the simplex
/// `pV + pH + p0 <= 1`.
pub fn random_parameter(rng: &mut RngStream) -> Parameter {
    let rates: Vec<f64> = (0..5).map(|_| rng.uniform_in(0.0, 2.0)).collect();
    let mut cuts = [rng.uniform(), rng.uniform(), rng.uniform()];
    cuts.sort_by(f64::total_cmp);
    Parameter {
        lambda0: rates[0],
        lambda_v: rates[1],
        lambda_h: rates[2],
        tau_v: rates[3],
        tau_h: rates[4],
        p_v: cuts[0],
        p_h: cuts[1] - cuts[0],
        p0: cuts[2] - cuts[1],
    }
}

const MIN_INVARIANT: f64 = 1e-3;

fn well_conditioned(p: &Parameter) -> bool {
    let inv = invariants_of(p);
    inv.a > MIN_INVARIANT && inv.bv > MIN_INVARIANT && inv.bh > MIN_INVARIANT
}

/// Random parameter on the surface where the half-turn construction
/// applies: `lambda0` is solved for.
pub fn random_parameter_pi(rng: &mut RngStream) -> Parameter {
    loop {
        let mut p = random_parameter(rng);
        if !well_conditioned(&p) {
            continue;
        }
        let inv = invariants_of(&p);
        p.lambda0 = inv.a * inv.a * p.p0 / (inv.bh * inv.bv);
        if p.validate().is_ok() {
            return p;
        }
    }
}

/// Random parameter on the surface where the quarter-turn construction
/// applies: `tauV` and then `lambda0` are solved for.
pub fn random_parameter_pi2(rng: &mut RngStream) -> Parameter {
    loop {
        let mut p = random_parameter(rng);
        // BH does not involve tauV, and A is affine in it.
        let bh = invariants_of(&p).bh;
        let denom = bh - p.p0 * p.lambda_h;
        if denom <= MIN_INVARIANT {
            continue;
        }
        p.tau_v = p.p0 * p.horizontal_rate() * p.lambda_v / denom;
        if !well_conditioned(&p) {
            continue;
        }
        let inv = invariants_of(&p);
        p.lambda0 = inv.a * p.tau_v / inv.bv;
        if p.validate().is_ok() {
            return p;
        }
    }
}
