//! The four inequalities on the inertia of the partition form, and the
//! classical bounds on the Euler characteristic of `{f >= 0}` for
//! nonsingular curves.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::catalog::MilnorData;
use crate::qform::{InertiaTriple, RationalSymmetricForm};
use crate::rational::{as_text, frac, int, Rational, RationalText};
use crate::scheme::{CurveScheme, SchemeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Consistent,
    Prohibited,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Consistent => "CONSISTENT",
            Verdict::Prohibited => "PROHIBITED",
        })
    }
}

/// Everything the check computed. Field names are the JSON keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InequalityReport {
    pub k: u32,
    pub r: u32,
    pub nu: u32,
    pub regions: Vec<String>,
    pub partition_form: Vec<Vec<RationalText>>,
    pub sigma: InertiaTriple,
    pub mu_plus: u32,
    pub mu_minus: u32,
    #[serde(rename = "chi_XR")]
    pub chi_xr: i64,
    pub lhs1: usize,
    pub lhs2: usize,
    pub lhs3: usize,
    pub lhs4: usize,
    #[serde(with = "as_text")]
    pub rhs1: Rational,
    #[serde(with = "as_text")]
    pub rhs2: Rational,
    #[serde(with = "as_text")]
    pub rhs3: Rational,
    #[serde(with = "as_text")]
    pub rhs4: Rational,
    pub holds1: bool,
    pub holds2: bool,
    pub holds3: bool,
    pub holds4: bool,
    #[serde(rename = "b2_plus_Y", with = "as_text")]
    pub b2_plus_y: Rational,
    #[serde(rename = "b2_minus_Y", with = "as_text")]
    pub b2_minus_y: Rational,
    pub petrovskii_lower_holds: Option<bool>,
    pub petrovskii_upper_holds: Option<bool>,
    pub verdict: Verdict,
}

/// Betti numbers `(b2+, b2-)` of the resolved double plane.
pub fn b2_of_double_plane(k: u32, milnor: MilnorData, chi_xr: i64) -> (Rational, Rational) {
    let k = k as i64;
    let plus = frac((k - 1) * (k - 2) - milnor.mu_plus as i64, 2);
    let minus = frac(3 * k * (k - 1) + chi_xr - milnor.mu_minus as i64, 2);
    (plus, minus)
}

/// Right-hand sides of the four inequalities, in order.
pub fn right_hand_sides(k: u32, r: u32, nu: u32, milnor: MilnorData, chi_xr: i64) -> [Rational; 4] {
    let k = k as i64;
    let slack = int(r as i64 - nu as i64);
    let first = frac((k - 1) * (k - 2), 2) - frac(milnor.mu_plus as i64, 2);
    let third = frac(3 * k * (k - 1), 2) + frac(chi_xr, 2) - frac(milnor.mu_minus as i64, 2);
    [first.clone(), first + &slack, third.clone(), third + slack]
}

/// `(lower, upper)`: whether `-3k(k-1)/2 <= chi(W) <= 3k(k-1)/2 + 1` hold.
pub fn check_petrovskii(chi_w: i64, k: u32) -> (bool, bool) {
    let t = 3 * (k as i64) * (k as i64 - 1);
    (2 * chi_w >= -t, 2 * chi_w <= t + 2)
}

impl InequalityReport {
    /// Evaluates the inequalities for an assembled partition form.
    /// `chi_w` enables the classical bounds; pass it only for nonsingular
    /// curves.
    pub fn evaluate(
        form: &RationalSymmetricForm,
        k: u32,
        r: u32,
        nu: u32,
        milnor: MilnorData,
        chi_xr: i64,
        chi_w: Option<i64>,
    ) -> Self {
        let sigma = form.inertia();
        let [rhs1, rhs2, rhs3, rhs4] = right_hand_sides(k, r, nu, milnor, chi_xr);
        let (b2_plus_y, b2_minus_y) = b2_of_double_plane(k, milnor, chi_xr);
        let lhs1 = sigma.sigma_plus;
        let lhs2 = sigma.sigma_plus + sigma.sigma_zero;
        let lhs3 = sigma.sigma_minus;
        let lhs4 = sigma.sigma_minus + sigma.sigma_zero;
        let le = |l: usize, r: &Rational| int(l as i64) <= *r;
        let holds = [
            le(lhs1, &rhs1),
            le(lhs2, &rhs2),
            le(lhs3, &rhs3),
            le(lhs4, &rhs4),
        ];
        let petrovskii = chi_w.map(|c| check_petrovskii(c, k));
        InequalityReport {
            k,
            r,
            nu,
            regions: form.labels().to_vec(),
            partition_form: form
                .rows()
                .into_iter()
                .map(|row| row.into_iter().map(RationalText).collect())
                .collect(),
            sigma,
            mu_plus: milnor.mu_plus,
            mu_minus: milnor.mu_minus,
            chi_xr,
            lhs1,
            lhs2,
            lhs3,
            lhs4,
            rhs1,
            rhs2,
            rhs3,
            rhs4,
            holds1: holds[0],
            holds2: holds[1],
            holds3: holds[2],
            holds4: holds[3],
            b2_plus_y,
            b2_minus_y,
            petrovskii_lower_holds: petrovskii.map(|p| p.0),
            petrovskii_upper_holds: petrovskii.map(|p| p.1),
            verdict: if holds.iter().all(|h| *h) {
                Verdict::Consistent
            } else {
                Verdict::Prohibited
            },
        }
    }

    pub fn holds(&self) -> [bool; 4] {
        [self.holds1, self.holds2, self.holds3, self.holds4]
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Plain-text table for terminals.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let form = RationalSymmetricForm::new(
            self.regions.clone(),
            self.partition_form
                .iter()
                .map(|r| r.iter().map(|c| c.0.clone()).collect())
                .collect(),
        )
        .map(|f| f.to_string())
        .unwrap_or_default();
        let _ = writeln!(
            out,
            "partition form (k = {}, r = {}, nu = {}):",
            self.k, self.r, self.nu
        );
        for line in form.lines() {
            let _ = writeln!(out, "  {line}");
        }
        let _ = writeln!(out, "inertia (plus, minus, zero): {}", self.sigma);
        let _ = writeln!(
            out,
            "milnor (plus, minus): ({}, {})   chi(X_R) = {}",
            self.mu_plus, self.mu_minus, self.chi_xr
        );
        let _ = writeln!(
            out,
            "b2+(Y) = {}   b2-(Y) = {}",
            self.b2_plus_y, self.b2_minus_y
        );
        let _ = writeln!(out);
        let names = [
            "s+ <= b2+",
            "s+ + s0 <= b2+ + r - nu",
            "s- <= b2-",
            "s- + s0 <= b2- + r - nu",
        ];
        let lhs = [self.lhs1, self.lhs2, self.lhs3, self.lhs4];
        let rhs = [&self.rhs1, &self.rhs2, &self.rhs3, &self.rhs4];
        let _ = writeln!(
            out,
            "  #  {:<24} {:>5} {:>7}  holds",
            "inequality", "lhs", "rhs"
        );
        for i in 0..4 {
            let _ = writeln!(
                out,
                "  {}  {:<24} {:>5} {:>7}  {}",
                i + 1,
                names[i],
                lhs[i],
                rhs[i].to_string(),
                if self.holds()[i] { "yes" } else { "NO" }
            );
        }
        let show = |b: Option<bool>| match b {
            Some(true) => "holds",
            Some(false) => "FAILS",
            None => "n/a",
        };
        let _ = writeln!(
            out,
            "classical chi(W) bounds: lower {}, upper {}",
            show(self.petrovskii_lower_holds),
            show(self.petrovskii_upper_holds)
        );
        let _ = writeln!(out, "verdict: {}", self.verdict);
        out
    }
}

/// Runs the full check on a scheme.
pub fn check_theorem_a(s: &CurveScheme) -> Result<InequalityReport, SchemeError> {
    let form = s.assemble_partition_form()?;
    let milnor = s.total_milnor()?;
    let chi_xr = s.chi_xr()?;
    let chi_w = if s.singular_points().is_empty() {
        s.chi_w().or((chi_xr % 2 == 0).then_some(chi_xr / 2))
    } else {
        None
    };
    let report = InequalityReport::evaluate(&form, s.k(), s.r(), s.nu(), milnor, chi_xr, chi_w);
    debug_assert_eq!(report.rhs1, report.b2_plus_y);
    debug_assert_eq!(report.rhs3, report.b2_minus_y);
    Ok(report)
}
