//! Rule engine for codimension-1 foliations of the spatial section by surfaces
//! transverse to cosmic strings.
//!
//! Nothing here builds a manifold. A [`FoliationScenario`] is a set of
//! assumption flags (how many leaves are compact, whether a compact leaf meets
//! a string, what its π₁ is) and [`classify`] applies two theorems as axioms:
//!
//! * a C² codimension-1 foliation of a 3-manifold with finite π₁ has a compact
//!   leaf;
//! * Reeb stability: a compact leaf with finite π₁ forces every leaf to be
//!   compact with finite π₁.
//!
//! Combined with the observational genus-1 result for surfaces that meet
//! strings, every scenario lands in one of three topological possibilities or
//! is ruled out.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};

/// Quote anchors attached to emitted claims. Output golden files depend on
/// these strings byte for byte.
pub mod anchors {
    pub const PI1_INFINITE: &str = "$\\pi_1(\\Sigma)$ is infinite";
    pub const NOT_SIMPLY_CONNECTED: &str = "$\\Sigma$ is not simply-connected";
    pub const REEB_EXCLUDED: &str = "Reeb stability removes the possibility";
    pub const COSMOLOGICALLY_SMALL: &str = "would have to be small (cosmologically)";
    pub const REEB_COMPONENT: &str = "foliated internally by planes";
    pub const ALL_TORI: &str = "the surfaces transverse to these strings are tori";

    pub const ALL: [&str; 6] = [
        PI1_INFINITE,
        NOT_SIMPLY_CONNECTED,
        REEB_EXCLUDED,
        COSMOLOGICALLY_SMALL,
        REEB_COMPONENT,
        ALL_TORI,
    ];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CompactLeaves {
    None,
    AtLeastOne,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LeafPi1 {
    Finite,
    Infinite,
    Unknown,
}

/// Assumptions about the foliation of the spatial section.
///
/// `intersects_strings` is set exactly when `compact_leaves` is
/// [`CompactLeaves::AtLeastOne`], and `leaf_pi1` exactly when that compact
/// leaf misses every string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FoliationScenario {
    compact_leaves: CompactLeaves,
    intersects_strings: Option<bool>,
    leaf_pi1: Option<LeafPi1>,
    strings_exist: bool,
    observational_constraints_hold: bool,
    smooth_c2: bool,
}

pub const SCENARIO_KEYS: [&str; 5] = [
    "no-compact",
    "one-nonintersecting-finite",
    "one-nonintersecting-infinite",
    "one-intersecting",
    "all-compact",
];

impl FoliationScenario {
    pub fn new(
        compact_leaves: CompactLeaves,
        intersects_strings: Option<bool>,
        leaf_pi1: Option<LeafPi1>,
        strings_exist: bool,
        observational_constraints_hold: bool,
    ) -> Result<Self> {
        let at_least_one = compact_leaves == CompactLeaves::AtLeastOne;
        match (at_least_one, intersects_strings) {
            (true, None) => {
                return Err(Error::InvalidScenario(
                    "intersects_strings is required when exactly some leaves are compact".into(),
                ))
            }
            (false, Some(_)) => {
                return Err(Error::InvalidScenario(
                    "intersects_strings only applies when exactly some leaves are compact".into(),
                ))
            }
            _ => {}
        }
        let nonintersecting = at_least_one && intersects_strings == Some(false);
        match (nonintersecting, leaf_pi1) {
            (true, None) => {
                return Err(Error::InvalidScenario(
                    "leaf_pi1 is required for a compact leaf that misses the strings".into(),
                ))
            }
            (false, Some(_)) => {
                return Err(Error::InvalidScenario(
                    "leaf_pi1 only applies to a compact leaf that misses the strings".into(),
                ))
            }
            _ => {}
        }
        Ok(Self {
            compact_leaves,
            intersects_strings,
            leaf_pi1,
            strings_exist,
            observational_constraints_hold,
            smooth_c2: true,
        })
    }

    pub fn no_compact() -> Self {
        Self::new(CompactLeaves::None, None, None, true, true).expect("valid")
    }

    pub fn one_intersecting() -> Self {
        Self::new(CompactLeaves::AtLeastOne, Some(true), None, true, true).expect("valid")
    }

    pub fn one_nonintersecting(pi1: LeafPi1) -> Self {
        Self::new(
            CompactLeaves::AtLeastOne,
            Some(false),
            Some(pi1),
            true,
            true,
        )
        .expect("valid")
    }

    pub fn all_compact() -> Self {
        Self::new(CompactLeaves::All, None, None, true, true).expect("valid")
    }

    pub fn from_key(key: &str) -> Result<Self> {
        match key {
            "no-compact" => Ok(Self::no_compact()),
            "one-nonintersecting-finite" => Ok(Self::one_nonintersecting(LeafPi1::Finite)),
            "one-nonintersecting-infinite" => Ok(Self::one_nonintersecting(LeafPi1::Infinite)),
            "one-nonintersecting-unknown" => Ok(Self::one_nonintersecting(LeafPi1::Unknown)),
            "one-intersecting" => Ok(Self::one_intersecting()),
            "all-compact" => Ok(Self::all_compact()),
            other => Err(Error::InvalidScenario(format!(
                "unknown scenario key '{other}' (expected one of {})",
                SCENARIO_KEYS.join(", ")
            ))),
        }
    }

    pub fn key(&self) -> &'static str {
        match (self.compact_leaves, self.intersects_strings, self.leaf_pi1) {
            (CompactLeaves::None, ..) => "no-compact",
            (CompactLeaves::All, ..) => "all-compact",
            (CompactLeaves::AtLeastOne, Some(true), _) => "one-intersecting",
            (_, _, Some(LeafPi1::Finite)) => "one-nonintersecting-finite",
            (_, _, Some(LeafPi1::Infinite)) => "one-nonintersecting-infinite",
            _ => "one-nonintersecting-unknown",
        }
    }

    pub fn with_strings(
        mut self,
        strings_exist: bool,
        observational_constraints_hold: bool,
    ) -> Self {
        self.strings_exist = strings_exist;
        self.observational_constraints_hold = observational_constraints_hold;
        self
    }

    pub fn with_smoothness_c2(mut self, smooth_c2: bool) -> Self {
        self.smooth_c2 = smooth_c2;
        self
    }

    pub fn compact_leaves(&self) -> CompactLeaves {
        self.compact_leaves
    }

    pub fn intersects_strings(&self) -> Option<bool> {
        self.intersects_strings
    }

    pub fn leaf_pi1(&self) -> Option<LeafPi1> {
        self.leaf_pi1
    }

    pub fn strings_exist(&self) -> bool {
        self.strings_exist
    }

    pub fn observational_constraints_hold(&self) -> bool {
        self.observational_constraints_hold
    }

    pub fn smooth_c2(&self) -> bool {
        self.smooth_c2
    }

    fn string_claims_allowed(&self) -> bool {
        self.strings_exist && self.observational_constraints_hold
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StatementId {
    Pi1Infinite,
    NotSimplyConnected,
    ReebExcluded,
    CosmologicallySmallLeaf,
    LeafGenusOne,
    ReebComponent,
    ToroidalSurgery,
    AllLeavesTori,
    StableAndGlobal,
    IfFiniteReebExcluded,
    IfInfiniteCosmologicallySmall,
}

impl StatementId {
    pub fn code(self) -> &'static str {
        match self {
            StatementId::Pi1Infinite => "pi1-infinite",
            StatementId::NotSimplyConnected => "not-simply-connected",
            StatementId::ReebExcluded => "reeb-excluded",
            StatementId::CosmologicallySmallLeaf => "small-compact-leaf",
            StatementId::LeafGenusOne => "leaf-genus-one",
            StatementId::ReebComponent => "reeb-component",
            StatementId::ToroidalSurgery => "toroidal-surgery",
            StatementId::AllLeavesTori => "all-leaves-tori",
            StatementId::StableAndGlobal => "stable-and-global",
            StatementId::IfFiniteReebExcluded => "if-finite-reeb-excluded",
            StatementId::IfInfiniteCosmologicallySmall => "if-infinite-small-compact-leaf",
        }
    }

    pub fn text(self) -> &'static str {
        match self {
            StatementId::Pi1Infinite => "the fundamental group of the spatial section is infinite",
            StatementId::NotSimplyConnected => "the spatial section is not simply-connected",
            StatementId::ReebExcluded => {
                "ruled out: every leaf would have finite fundamental group, but leaves meeting strings are tori"
            }
            StatementId::CosmologicallySmallLeaf => {
                "the compact leaf must be cosmologically small to avoid the strings; the rest of the topology is unknown"
            }
            StatementId::LeafGenusOne => "the compact leaf is a genus-1 surface (torus)",
            StatementId::ReebComponent => "the foliation contains a Reeb component: a solid torus foliated by planes",
            StatementId::ToroidalSurgery => "the bounding tori can serve as toroidal elements of a surgery description",
            StatementId::AllLeavesTori => "every leaf is a genus-1 torus",
            StatementId::StableAndGlobal => "the genus-1 condition is stable and global",
            StatementId::IfFiniteReebExcluded => {
                "if the leaf has finite fundamental group: ruled out by Reeb stability"
            }
            StatementId::IfInfiniteCosmologicallySmall => {
                "if the leaf has infinite fundamental group: it must be cosmologically small"
            }
        }
    }

    pub fn anchor(self) -> &'static str {
        match self {
            StatementId::Pi1Infinite => anchors::PI1_INFINITE,
            StatementId::NotSimplyConnected => anchors::NOT_SIMPLY_CONNECTED,
            StatementId::ReebExcluded | StatementId::IfFiniteReebExcluded => anchors::REEB_EXCLUDED,
            StatementId::CosmologicallySmallLeaf | StatementId::IfInfiniteCosmologicallySmall => {
                anchors::COSMOLOGICALLY_SMALL
            }
            StatementId::LeafGenusOne
            | StatementId::ReebComponent
            | StatementId::ToroidalSurgery => anchors::REEB_COMPONENT,
            StatementId::AllLeavesTori | StatementId::StableAndGlobal => anchors::ALL_TORI,
        }
    }

    /// Claims that rely on strings existing and the tension bounds holding.
    pub fn needs_strings(self) -> bool {
        !matches!(
            self,
            StatementId::Pi1Infinite | StatementId::NotSimplyConnected
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Claim {
    pub statement_id: StatementId,
    pub human_text: &'static str,
    pub paper_anchor: &'static str,
}

impl From<StatementId> for Claim {
    fn from(id: StatementId) -> Self {
        Self {
            statement_id: id,
            human_text: id.text(),
            paper_anchor: id.anchor(),
        }
    }
}

/// Which of the possible topologies a verdict belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VerdictClass {
    /// No compact leaves; Σ is not simply-connected.
    NotSimplyConnected,
    /// Torus leaves: Reeb components bounded by tori, or a foliation by tori.
    ToroidalLeaves,
    /// A single cosmologically small compact leaf.
    SmallCompactLeaf,
    /// Ruled out by Reeb stability.
    ReebExcluded,
    /// The leaf's π₁ is unknown; both sub-verdicts are listed conditionally.
    Undetermined,
    /// Every applicable claim was withheld.
    Withheld,
}

impl VerdictClass {
    pub fn label(self) -> &'static str {
        match self {
            VerdictClass::NotSimplyConnected => "no compact leaves, not simply-connected",
            VerdictClass::ToroidalLeaves => "toroidal leaves / Reeb components",
            VerdictClass::SmallCompactLeaf => "single cosmologically small compact leaf",
            VerdictClass::ReebExcluded => "excluded by Reeb stability",
            VerdictClass::Undetermined => "undetermined (conditional on leaf pi1)",
            VerdictClass::Withheld => "withheld (hypotheses unmet)",
        }
    }
}

impl fmt::Display for VerdictClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TopologyVerdict {
    pub claims: Vec<Claim>,
    pub excluded: bool,
    /// Claims that would apply but whose hypotheses were switched off.
    pub withheld: Vec<StatementId>,
    pub class: VerdictClass,
}

/// A compact leaf is forced when π₁(Σ) is finite and the foliation is at
/// least C².
pub fn theorem_compact_leaf_exists(
    pi1_finite: bool,
    foliation_smoothness_at_least_c2: bool,
) -> bool {
    pi1_finite && foliation_smoothness_at_least_c2
}

/// Reeb stability: true when every leaf is then compact with finite π₁.
pub fn reeb_stability_propagates(compact_leaf_pi1_finite: bool) -> bool {
    compact_leaf_pi1_finite
}

pub fn classify(s: &FoliationScenario) -> TopologyVerdict {
    use StatementId::*;

    let (candidates, class, excluded): (Vec<StatementId>, VerdictClass, bool) =
        match (s.compact_leaves, s.intersects_strings, s.leaf_pi1) {
            (CompactLeaves::None, ..) => {
                // a finite π₁ would force a compact leaf, and there is none
                if theorem_compact_leaf_exists(true, s.smooth_c2) {
                    (
                        vec![Pi1Infinite, NotSimplyConnected],
                        VerdictClass::NotSimplyConnected,
                        false,
                    )
                } else {
                    return withheld(vec![Pi1Infinite, NotSimplyConnected]);
                }
            }
            (CompactLeaves::AtLeastOne, Some(false), Some(LeafPi1::Finite)) => {
                if s.smooth_c2 && reeb_stability_propagates(true) {
                    (vec![ReebExcluded], VerdictClass::ReebExcluded, true)
                } else {
                    return withheld(vec![ReebExcluded]);
                }
            }
            (CompactLeaves::AtLeastOne, Some(false), Some(LeafPi1::Infinite)) => {
                debug_assert!(!reeb_stability_propagates(false));
                (
                    vec![CosmologicallySmallLeaf],
                    VerdictClass::SmallCompactLeaf,
                    false,
                )
            }
            (CompactLeaves::AtLeastOne, Some(false), _) => {
                let mut ids = vec![IfInfiniteCosmologicallySmall];
                if s.smooth_c2 {
                    ids.insert(0, IfFiniteReebExcluded);
                }
                (ids, VerdictClass::Undetermined, false)
            }
            (CompactLeaves::AtLeastOne, ..) => (
                vec![LeafGenusOne, ReebComponent, ToroidalSurgery],
                VerdictClass::ToroidalLeaves,
                false,
            ),
            (CompactLeaves::All, ..) => (
                vec![AllLeavesTori, StableAndGlobal],
                VerdictClass::ToroidalLeaves,
                false,
            ),
        };

    if s.string_claims_allowed() {
        return TopologyVerdict {
            claims: candidates.into_iter().map(Claim::from).collect(),
            excluded,
            withheld: Vec::new(),
            class,
        };
    }
    let (kept, dropped): (Vec<_>, Vec<_>) =
        candidates.into_iter().partition(|id| !id.needs_strings());
    if kept.is_empty() {
        return withheld(dropped);
    }
    TopologyVerdict {
        claims: kept.into_iter().map(Claim::from).collect(),
        excluded: false,
        withheld: dropped,
        class,
    }
}

fn withheld(ids: Vec<StatementId>) -> TopologyVerdict {
    TopologyVerdict {
        claims: Vec::new(),
        excluded: false,
        withheld: ids,
        class: VerdictClass::Withheld,
    }
}

/// Every valid scenario with determinate flags, classified.
///
/// `leaf_pi1 = Unknown` is left out: its verdict is the disjunction of the
/// finite and infinite cases, which are both enumerated.
pub fn enumerate_scenarios() -> Vec<(FoliationScenario, TopologyVerdict)> {
    enumerate_scenarios_with(true, true)
}

pub fn enumerate_scenarios_with(
    strings_exist: bool,
    observational_constraints_hold: bool,
) -> Vec<(FoliationScenario, TopologyVerdict)> {
    let leaves = [
        CompactLeaves::None,
        CompactLeaves::AtLeastOne,
        CompactLeaves::All,
    ];
    let intersects = [None, Some(true), Some(false)];
    let pi1 = [None, Some(LeafPi1::Finite), Some(LeafPi1::Infinite)];
    let mut out = Vec::new();
    for &cl in &leaves {
        for &i in &intersects {
            for &p in &pi1 {
                if let Ok(s) =
                    FoliationScenario::new(cl, i, p, strings_exist, observational_constraints_hold)
                {
                    let v = classify(&s);
                    out.push((s, v));
                }
            }
        }
    }
    out
}

/// Groups enumerated scenarios by verdict class.
pub fn partition_by_class(
    table: &[(FoliationScenario, TopologyVerdict)],
) -> BTreeMap<VerdictClass, Vec<&'static str>> {
    let mut map: BTreeMap<VerdictClass, Vec<&'static str>> = BTreeMap::new();
    for (s, v) in table {
        map.entry(v.class).or_default().push(s.key());
    }
    map
}
