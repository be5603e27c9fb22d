//! Assembly of the full finiteness report for a presheaf.

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::site::{Presheaf, SubPresheaf};

use super::kuratowski::kuratowski_check;
use super::locally::{fibre_profile, is_locally_constant, splitting_object, SplittingData};
use super::{connected_components, is_decidable, ComponentDecomposition, FinitenessError};

/// Three-valued outcome for capped checks: decided true/false, or skipped
/// with the cap that stopped it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CappedFlag {
    Decided(bool),
    Skipped(SkippedTag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SkippedTag {
    #[serde(rename = "skipped(cap)")]
    Cap,
}

impl CappedFlag {
    pub fn is_skipped(self) -> bool {
        matches!(self, CappedFlag::Skipped(_))
    }

    pub fn decided(self) -> Option<bool> {
        match self {
            CappedFlag::Decided(b) => Some(b),
            CappedFlag::Skipped(_) => None,
        }
    }
}

/// The finiteness report: every predicate of the calculus on one object.
/// `finite` means locally finite with finitely many components, which is
/// decided exactly; `kuratowski_finite` is the independently computed
/// cross-check and may be skipped under caps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinitenessReport {
    pub connected: bool,
    pub component_count: usize,
    pub decidable: bool,
    pub locally_constant: bool,
    pub locally_finite: bool,
    /// common fibre size when uniform across site components
    pub n: Option<usize>,
    /// fibre size per site component, when locally constant
    pub fibre_sizes: Option<Vec<usize>>,
    pub kuratowski_finite: CappedFlag,
    pub finite: bool,
}

/// Witness data backing a report.
#[derive(Debug, Clone)]
pub struct FinitenessWitnesses {
    pub components: ComponentDecomposition,
    pub diagonal_complement: Option<SubPresheaf>,
    pub splitting: Option<SplittingData>,
}

pub fn analyze(x: &Presheaf, caps: &Caps) -> (FinitenessReport, FinitenessWitnesses) {
    let components = connected_components(x);
    let diagonal_complement = is_decidable(x);
    let decidable = diagonal_complement.is_some();
    let locally_constant = is_locally_constant(x);
    let profile = fibre_profile(x);
    let locally_finite = locally_constant;
    let n = profile.as_ref().and_then(|sizes| {
        let first = sizes.first().copied();
        if sizes.iter().all(|&s| Some(s) == first) {
            first
        } else {
            None
        }
    });
    let kuratowski_finite = if !decidable {
        CappedFlag::Decided(false)
    } else {
        match kuratowski_check(x, caps) {
            Ok(flag) => CappedFlag::Decided(flag),
            Err(FinitenessError::CapExceeded { .. }) => CappedFlag::Skipped(SkippedTag::Cap),
            Err(_) => CappedFlag::Decided(false),
        }
    };
    let splitting = if locally_finite && x.site().is_connected() {
        splitting_object(x, caps).ok()
    } else {
        None
    };
    let report = FinitenessReport {
        connected: components.is_connected(),
        component_count: components.component_count(),
        decidable,
        locally_constant,
        locally_finite,
        n,
        fibre_sizes: profile,
        kuratowski_finite,
        finite: locally_finite,
    };
    (
        report,
        FinitenessWitnesses {
            components,
            diagonal_complement,
            splitting,
        },
    )
}

/// Shorthand: is the object finite (locally finite and a finite sum of
/// connected objects, the latter automatic at this scale)?
pub fn is_finite(x: &Presheaf) -> bool {
    is_locally_constant(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::site::ops::constant;
    use crate::site::stock::*;

    #[test]
    fn constant_two_on_trivial_site_reports_as_specified() {
        let site = trivial_site();
        let x = constant(&site, &["1".into(), "2".into()]);
        let (report, witnesses) = analyze(&x, &Caps::default());
        assert!(!report.connected);
        assert_eq!(report.component_count, 2);
        assert!(report.decidable);
        assert!(report.locally_finite);
        assert_eq!(report.n, Some(2));
        assert_eq!(report.kuratowski_finite, CappedFlag::Decided(true));
        assert!(report.finite);
        assert!(witnesses.diagonal_complement.is_some());
        assert!(witnesses.splitting.is_some());
    }

    #[test]
    fn skipped_cap_is_reported_not_guessed() {
        let site = trivial_site();
        let names: Vec<String> = (0..12).map(|i| format!("e{i}")).collect();
        let x = constant(&site, &names);
        let (report, _) = analyze(&x, &Caps::default());
        assert!(report.kuratowski_finite.is_skipped());
        assert!(report.finite, "finiteness itself is decided exactly");
    }

    #[test]
    fn main_equivalence_on_tiny_arrow_site_corpus() {
        // locally finite <=> decidable && kuratowski on everything small
        // enough to decide
        let site = arrow_site();
        for a in 0..=2usize {
            for b in 0..=2usize {
                let count = if a == 0 { 1 } else { a.pow(b as u32) };
                for mask in 0..count {
                    if a == 0 && b > 0 {
                        continue;
                    }
                    let mut rest = Vec::new();
                    let mut m = mask;
                    for _ in 0..b {
                        rest.push(m % a);
                        m /= a;
                    }
                    let x = crate::site::Presheaf::new(
                        site.clone(),
                        vec![
                            (0..a).map(|i| format!("a{i}")).collect(),
                            (0..b).map(|i| format!("b{i}")).collect(),
                        ],
                        vec![rest],
                    )
                    .unwrap();
                    let (report, _) = analyze(&x, &Caps::default());
                    if let Some(k) = report.kuratowski_finite.decided() {
                        assert_eq!(
                            report.locally_finite,
                            report.decidable && k,
                            "a={a} b={b} mask={mask}"
                        );
                    }
                }
            }
        }
    }
}
