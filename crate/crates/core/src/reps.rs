//! Character tables of `S₅` and `A₅` and the restriction computations behind
//! the multiplicity granularity of eigenvalues on `S₅`-symmetric manifolds.
//!
//! An eigenspace of an isometry-invariant operator is a representation of
//! the isometry group. If it has no vectors fixed by a subgroup `H`, it is
//! a sum of irreducibles without `H`-invariants, so its dimension is at
//! least the smallest such irreducible.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const CHECK_TOL: f64 = 1e-12;
const INTEGER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Irrep {
    pub name: String,
    pub dimension: u32,
    /// Character value on each conjugacy class, in table column order.
    pub character: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteGroupCharacterTable {
    pub group_name: String,
    pub class_labels: Vec<String>,
    pub class_sizes: Vec<u32>,
    pub irreps: Vec<Irrep>,
}

fn irrep(name: &str, character: &[f64]) -> Irrep {
    Irrep {
        name: name.to_string(),
        dimension: character[0] as u32,
        character: character.to_vec(),
    }
}

fn labels(l: &[&str]) -> Vec<String> {
    l.iter().map(|s| s.to_string()).collect()
}

impl FiniteGroupCharacterTable {
    /// The symmetric group on five letters. Classes are indexed by cycle
    /// type.
    pub fn s5() -> Self {
        Self {
            group_name: "S5".into(),
            class_labels: labels(&["e", "(12)", "(12)(34)", "(123)", "(123)(45)", "(1234)", "(12345)"]),
            class_sizes: vec![1, 10, 15, 20, 20, 30, 24],
            irreps: vec![
                irrep("trivial", &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]),
                irrep("sign", &[1.0, -1.0, 1.0, 1.0, -1.0, -1.0, 1.0]),
                irrep("standard", &[4.0, 2.0, 0.0, 1.0, -1.0, 0.0, -1.0]),
                irrep("standard⊗sign", &[4.0, -2.0, 0.0, 1.0, 1.0, 0.0, -1.0]),
                irrep("V5", &[5.0, 1.0, 1.0, -1.0, 1.0, -1.0, 0.0]),
                irrep("V5⊗sign", &[5.0, -1.0, 1.0, -1.0, -1.0, 1.0, 0.0]),
                irrep("Λ²standard", &[6.0, 0.0, -2.0, 0.0, 0.0, 0.0, 1.0]),
            ],
        }
    }

    /// The alternating group on five letters. The 5-cycles split into two
    /// classes of size 12.
    pub fn a5() -> Self {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        Self {
            group_name: "A5".into(),
            class_labels: labels(&["e", "(12)(34)", "(123)", "(12345)", "(13524)"]),
            class_sizes: vec![1, 15, 20, 12, 12],
            irreps: vec![
                irrep("trivial", &[1.0, 1.0, 1.0, 1.0, 1.0]),
                irrep("3", &[3.0, -1.0, 0.0, phi, 1.0 - phi]),
                irrep("3'", &[3.0, -1.0, 0.0, 1.0 - phi, phi]),
                irrep("4", &[4.0, 0.0, 1.0, -1.0, -1.0]),
                irrep("5", &[5.0, 1.0, -1.0, 0.0, 0.0]),
            ],
        }
    }

    pub fn order(&self) -> u32 {
        self.class_sizes.iter().sum()
    }

    pub fn irrep_index(&self, name: &str) -> Option<usize> {
        self.irreps.iter().position(|r| r.name == name)
    }

    /// Index of the trivial representation: the irrep with constant
    /// character 1.
    pub fn trivial_index(&self) -> Option<usize> {
        self.irreps
            .iter()
            .position(|r| r.character.iter().all(|&c| c == 1.0))
    }

    fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let s: f64 = self
            .class_sizes
            .iter()
            .zip(a.iter().zip(b))
            .map(|(&n, (x, y))| n as f64 * x * y)
            .sum();
        s / self.order() as f64
    }

    /// Checks class sizes, dimensions and both orthogonality relations.
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Characters(format!("{}: {msg}", self.group_name)));
        let k = self.class_sizes.len();
        if self.class_labels.len() != k || self.irreps.len() != k {
            return fail(format!(
                "{} classes, {} labels and {} irreps",
                k,
                self.class_labels.len(),
                self.irreps.len()
            ));
        }
        if self.class_sizes.iter().any(|&s| s == 0) || self.class_sizes[0] != 1 {
            return fail("class sizes must be positive with the identity class first".into());
        }
        let order = self.order() as f64;
        let dim2: f64 = self.irreps.iter().map(|r| (r.dimension as f64).powi(2)).sum();
        if dim2 != order {
            return fail(format!("sum of squared dimensions {dim2} differs from group order {order}"));
        }
        for r in &self.irreps {
            if r.character.len() != k {
                return fail(format!("irrep {} has {} character values", r.name, r.character.len()));
            }
            if r.character[0] != r.dimension as f64 {
                return fail(format!("irrep {}: χ(e) differs from the dimension", r.name));
            }
        }
        for (i, a) in self.irreps.iter().enumerate() {
            for (j, b) in self.irreps.iter().enumerate() {
                let ip = self.inner(&a.character, &b.character);
                let expect = if i == j { 1.0 } else { 0.0 };
                if (ip - expect).abs() > CHECK_TOL {
                    return fail(format!(
                        "row orthogonality ⟨{}, {}⟩ = {ip}, expected {expect}",
                        a.name, b.name
                    ));
                }
            }
        }
        for c in 0..k {
            for d in 0..k {
                let s: f64 = self.irreps.iter().map(|r| r.character[c] * r.character[d]).sum();
                let expect = if c == d {
                    order / self.class_sizes[c] as f64
                } else {
                    0.0
                };
                if (s - expect).abs() > CHECK_TOL * order {
                    return fail(format!(
                        "column orthogonality for classes {} and {}: {s}, expected {expect}",
                        self.class_labels[c], self.class_labels[d]
                    ));
                }
            }
        }
        Ok(())
    }
}

/// For each class of a subgroup, the class of the big group containing it.
pub type FusionMap = Vec<usize>;

/// Fusion of `A₅` classes into `S₅` classes.
pub fn a5_in_s5() -> FusionMap {
    vec![0, 2, 3, 6, 6]
}

/// Identity fusion of a group into itself.
pub fn identity_fusion(table: &FiniteGroupCharacterTable) -> FusionMap {
    (0..table.class_sizes.len()).collect()
}

fn check_fusion(
    big: &FiniteGroupCharacterTable,
    small: &FiniteGroupCharacterTable,
    fusion: &[usize],
) -> Result<()> {
    if fusion.len() != small.class_sizes.len() {
        return Err(Error::Characters(format!(
            "fusion map has {} entries for {} classes of {}",
            fusion.len(),
            small.class_sizes.len(),
            small.group_name
        )));
    }
    if big.order() % small.order() != 0 {
        return Err(Error::Characters(format!(
            "|{}| does not divide |{}|",
            small.group_name, big.group_name
        )));
    }
    let mut covered = vec![0u32; big.class_sizes.len()];
    for (c, &b) in fusion.iter().enumerate() {
        let slot = covered.get_mut(b).ok_or_else(|| {
            Error::Characters(format!("fusion target {b} is not a class of {}", big.group_name))
        })?;
        *slot += small.class_sizes[c];
    }
    for (b, (&n, &size)) in covered.iter().zip(&big.class_sizes).enumerate() {
        if n > size {
            return Err(Error::Characters(format!(
                "{} elements of {} fused into class {} of size {size}",
                n, small.group_name, big.class_labels[b]
            )));
        }
    }
    if fusion[0] != 0 {
        return Err(Error::Characters("identity must fuse to identity".into()));
    }
    Ok(())
}

/// Multiplicity of the subgroup irrep `irrep_small` in the restriction of
/// `irrep_big`.
pub fn restriction_multiplicity(
    big: &FiniteGroupCharacterTable,
    small: &FiniteGroupCharacterTable,
    fusion: &[usize],
    irrep_big: usize,
    irrep_small: usize,
) -> Result<u32> {
    check_fusion(big, small, fusion)?;
    let chi = &big
        .irreps
        .get(irrep_big)
        .ok_or_else(|| Error::InvalidArgument(format!("no irrep #{irrep_big} in {}", big.group_name)))?
        .character;
    let psi = &small
        .irreps
        .get(irrep_small)
        .ok_or_else(|| Error::InvalidArgument(format!("no irrep #{irrep_small} in {}", small.group_name)))?
        .character;
    let restricted: Vec<f64> = fusion.iter().map(|&b| chi[b]).collect();
    let m = small.inner(&restricted, psi);
    let rounded = m.round();
    if (m - rounded).abs() > INTEGER_TOL || rounded < 0.0 {
        return Err(Error::Characters(format!(
            "restriction multiplicity {m} is not a nonnegative integer"
        )));
    }
    Ok(rounded as u32)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimalIrrep {
    pub dimension: u32,
    pub witness: String,
}

/// Smallest dimension of an irrep of `big` whose restriction to `small` has
/// no invariant vectors. `None` means every irrep has invariants, so no
/// granularity is gained.
pub fn min_dim_without_subgroup_invariants(
    big: &FiniteGroupCharacterTable,
    small: &FiniteGroupCharacterTable,
    fusion: &[usize],
) -> Result<Option<MinimalIrrep>> {
    let trivial = small
        .trivial_index()
        .ok_or_else(|| Error::Characters(format!("{} has no trivial irrep", small.group_name)))?;
    let mut best: Option<MinimalIrrep> = None;
    for (i, r) in big.irreps.iter().enumerate() {
        if restriction_multiplicity(big, small, fusion, i, trivial)? == 0
            && best.as_ref().map_or(true, |b| r.dimension < b.dimension)
        {
            best = Some(MinimalIrrep {
                dimension: r.dimension,
                witness: r.name.clone(),
            });
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GranularityMode {
    Manifold,
    OrientationReversingOrbifold,
    #[serde(rename = "S5-quotient")]
    S5Quotient,
}

impl GranularityMode {
    pub const ALL: [GranularityMode; 3] = [
        GranularityMode::Manifold,
        GranularityMode::OrientationReversingOrbifold,
        GranularityMode::S5Quotient,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GranularityMode::Manifold => "manifold",
            GranularityMode::OrientationReversingOrbifold => "orientation-reversing-orbifold",
            GranularityMode::S5Quotient => "S5-quotient",
        }
    }
}

impl std::str::FromStr for GranularityMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown granularity mode `{s}` (expected manifold, orientation-reversing-orbifold or S5-quotient)"
                ))
            })
    }
}

impl std::fmt::Display for GranularityMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Granularity {
    pub value: u32,
    pub note: String,
}

/// Multiplicity granularity `m` for a dataset: every eigenspace dimension is
/// a multiple of `m`, or at least `m` when it is nonzero.
pub fn granularity_for(dataset_name: &str, mode: GranularityMode) -> Granularity {
    let (value, reason) = match mode {
        GranularityMode::Manifold => (1, "no symmetry assumed".to_string()),
        GranularityMode::OrientationReversingOrbifold => (
            2,
            "an orientation-reversing isometry commutes with Δ and anticommutes with ⋆d, \
             so coexact eigenspaces are even dimensional"
                .to_string(),
        ),
        GranularityMode::S5Quotient => {
            let dim = min_dim_without_subgroup_invariants(
                &FiniteGroupCharacterTable::s5(),
                &FiniteGroupCharacterTable::a5(),
                &a5_in_s5(),
            )
            .ok()
            .flatten()
            .map_or(4, |m| m.dimension);
            (
                dim,
                format!(
                    "eigenspaces are S5-representations without A5-invariants (requires the \
                     exclusion certificate of the A5 quotient); smallest such irrep has dimension {dim}"
                ),
            )
        }
    };
    Granularity {
        value,
        note: format!("{dataset_name}: mode {mode}, m = {value}: {reason}"),
    }
}
