//! Exact replays of the auxiliary currents used to push Lelong numbers above
//! the `2/5` and `1/2` thresholds, and of the residual rescaling along a line.

use crate::covercheck::beta_of;
use crate::currents::DivisorCurrent;
use crate::error::{Error, Result};
use crate::projgeom::{collinear, line_through, multiplicity, Curve, ProjLine, ProjPoint};
use crate::rational::{int, rat, Rational};

/// A Lelong value at a probe point and the bound it must strictly exceed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointBound {
    pub point: ProjPoint,
    pub value: Rational,
    pub bound: Rational,
}

impl PointBound {
    pub fn passes(&self) -> bool {
        self.value > self.bound
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuxCurrentReport {
    pub constructed: DivisorCurrent,
    pub lines: Vec<ProjLine>,
    pub alpha_prime: Rational,
    pub bounds: Vec<PointBound>,
}

impl AuxCurrentReport {
    pub fn mass_check(&self) -> bool {
        self.constructed.mass() == int(1)
    }

    pub fn all_bounds_pass(&self) -> bool {
        self.bounds.iter().all(PointBound::passes)
    }

    /// Recomputes every stored value from `constructed`.
    pub fn recheck(&self) -> bool {
        self.bounds
            .iter()
            .all(|b| self.constructed.lelong_number(&b.point) == b.value)
    }
}

fn check_alpha_prime(alpha_prime: &Rational) -> Result<()> {
    if alpha_prime <= &rat(2, 5) {
        return Err(Error::BadAlphaPrime(alpha_prime.clone()));
    }
    Ok(())
}

fn check_unit_mass(t: &DivisorCurrent) -> Result<()> {
    let m = t.mass();
    if m != int(1) {
        return Err(Error::NonUnitMass(m));
    }
    Ok(())
}

fn aux_current(
    t: &DivisorCurrent,
    lines: Vec<ProjLine>,
    line_weight: Rational,
    alpha_prime: &Rational,
    probes: &[ProjPoint],
) -> Result<AuxCurrentReport> {
    let t_weight = int(2) / (int(5) * alpha_prime);
    let line_part = DivisorCurrent::new(
        lines
            .iter()
            .map(|l| (line_weight.clone(), Curve::Line(l.clone()))),
    )?;
    let constructed = t.scale(&t_weight)?.add(&line_part)?;
    let bounds = probes
        .iter()
        .map(|p| PointBound {
            point: p.clone(),
            value: constructed.lelong_number(p),
            bound: rat(2, 5),
        })
        .collect();
    Ok(AuxCurrentReport {
        constructed,
        lines,
        alpha_prime: alpha_prime.clone(),
        bounds,
    })
}

/// `R = ((5α′−2)/(15α′)) Σ [L_jk] + (2/(5α′)) T` over the three lines joining
/// three non-collinear points; `‖R‖ = 1` when `‖T‖ = 1`.
pub fn aux_three_lines(
    t: &DivisorCurrent,
    points: [&ProjPoint; 3],
    alpha_prime: &Rational,
    probes: &[ProjPoint],
) -> Result<AuxCurrentReport> {
    check_alpha_prime(alpha_prime)?;
    check_unit_mass(t)?;
    let [p1, p2, p3] = points;
    if p1 == p2 || p1 == p3 || p2 == p3 || collinear(p1, p2, p3) {
        return Err(Error::CollinearPoints);
    }
    let lines = vec![
        line_through(p1, p2)?,
        line_through(p1, p3)?,
        line_through(p2, p3)?,
    ];
    let weight = (int(5) * alpha_prime - int(2)) / (int(15) * alpha_prime);
    aux_current(t, lines, weight, alpha_prime, probes)
}

/// `R = ((5α′−2)/(5α′)) [L] + (2/(5α′)) T`.
pub fn aux_single_line(
    t: &DivisorCurrent,
    line: &ProjLine,
    alpha_prime: &Rational,
    probes: &[ProjPoint],
) -> Result<AuxCurrentReport> {
    check_alpha_prime(alpha_prime)?;
    check_unit_mass(t)?;
    let weight = (int(5) * alpha_prime - int(2)) / (int(5) * alpha_prime);
    aux_current(t, vec![line.clone()], weight, alpha_prime, probes)
}

/// `(4α′ − 1)/3`: the weight a line must carry once four heavy points on it
/// are accounted for.
pub fn threshold_a(alpha_prime: &Rational) -> Result<Rational> {
    check_alpha_prime(alpha_prime)?;
    Ok((int(4) * alpha_prime - int(1)) / int(3))
}

/// `4α′ + 6β′` with `β′ = (2/3)(1 − α′)`; always 4.
pub fn balance(alpha_prime: &Rational) -> Result<Rational> {
    let beta_prime = beta_of(alpha_prime).map_err(|_| Error::BadAlphaPrime(alpha_prime.clone()))?;
    Ok(int(4) * alpha_prime + int(6) * beta_prime)
}

/// `α′ / (1 − (4α′−1)/3) = 3α′/(4 − 4α′)`, the rescaled lower bound for heavy
/// points off the line.
pub fn heavy_ratio_bound(alpha_prime: &Rational) -> Result<Rational> {
    let a = threshold_a(alpha_prime)?;
    Ok(alpha_prime / (int(1) - a))
}

/// `β′ / (1 − (4α′−1)/3)`, which collapses to exactly `1/2`.
pub fn light_ratio_bound(alpha_prime: &Rational) -> Result<Rational> {
    let a = threshold_a(alpha_prime)?;
    let beta_prime = rat(2, 3) * (int(1) - alpha_prime);
    Ok(beta_prime / (int(1) - a))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualPoint {
    pub point: ProjPoint,
    /// `ν(S, p)` evaluated on the rescaled current.
    pub value: Rational,
    /// `(ν(T, p) − a·mult_p(L)) / (1 − a)`.
    pub closed_form: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualReport {
    pub line: ProjLine,
    /// Generic Lelong number of `T` along the line.
    pub a: Rational,
    pub rescaled: DivisorCurrent,
    pub alpha_prime: Rational,
    pub threshold: Rational,
    /// `(2/3)(1 − α′)/(1 − a)`.
    pub ratio_bound: Rational,
    pub points: Vec<ResidualPoint>,
}

impl ResidualReport {
    pub fn mass_check(&self) -> bool {
        self.rescaled.mass() == int(1)
    }

    pub fn exceeds_threshold(&self) -> bool {
        self.a > self.threshold
    }

    pub fn ratio_bound_exceeds_half(&self) -> bool {
        self.ratio_bound > rat(1, 2)
    }

    pub fn closed_forms_agree(&self) -> bool {
        self.points.iter().all(|p| p.value == p.closed_form)
    }
}

/// Splits `T = a[L] + R` and rescales `S = R/(1 − a)` back to unit mass.
pub fn residual_rescale(
    t: &DivisorCurrent,
    line: &ProjLine,
    alpha_prime: &Rational,
    probes: &[ProjPoint],
) -> Result<ResidualReport> {
    check_alpha_prime(alpha_prime)?;
    check_unit_mass(t)?;
    let curve = Curve::Line(line.clone());
    let a = t.generic_lelong_along(&curve);
    if a == int(1) {
        return Err(Error::FullWeightLine);
    }
    let rest = int(1) - &a;
    let rescaled = t.siu_subtract(&curve, &a)?.scale(&(int(1) / &rest))?;
    let points = probes
        .iter()
        .map(|p| {
            let mult = Rational::from_integer(multiplicity(p, &curve).into());
            ResidualPoint {
                point: p.clone(),
                value: rescaled.lelong_number(p),
                closed_form: (t.lelong_number(p) - &a * mult) / &rest,
            }
        })
        .collect();
    Ok(ResidualReport {
        line: line.clone(),
        threshold: threshold_a(alpha_prime)?,
        ratio_bound: rat(2, 3) * (int(1) - alpha_prime) / &rest,
        alpha_prime: alpha_prime.clone(),
        a,
        rescaled,
        points,
    })
}
