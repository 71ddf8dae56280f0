//! Elliptic and bad-hyperbolic conjugacy classes of the rotation subgroup of
//! a Coxeter orthoscheme group.
//!
//! Each edge of the orthoscheme with dihedral angle `π/n` lies on a rotation
//! axis of order `n`. The axes through `OF`, `VE` (order `p = r`) and `OV`
//! (order `q`) are closed geodesics of length twice the edge. The three
//! right-angled edges `OE`, `EF`, `FV` lie on a single order-2 axis whose
//! closed geodesic `h_e` has length `2(|OE| + |EF| + |FV|)`.
//!
//! The classes for `[3,5,3]` follow the same pattern but have not been
//! checked against published lists; [`OrbifoldClassData::verified`] is false
//! for that symbol.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use super::{CoxeterSymbol, CoxeterTetrahedron};
use crate::error::{Error, Result};
use crate::spectrum::{wrap_angle, ClassKind, ConjugacyClassEntry, SpectrumDataset};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipticClass {
    pub order: u32,
    pub holonomy: f64,
    pub covolume: f64,
    pub torsion: f64,
    /// Number of distinct classes with these data.
    pub count: u32,
    /// Edges of the orthoscheme on the rotation axis.
    pub axis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BadAxis {
    pub order: u32,
    pub primitive_length: f64,
    /// Holonomies of the `n` elements `h·γʲ`, in `[0, 2π)`.
    pub primitive_holonomies: Vec<f64>,
    pub covolume_per_class: f64,
    pub axis: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbifoldClassData {
    pub symbol: CoxeterSymbol,
    pub elliptic_classes: Vec<EllipticClass>,
    pub bad_axes: Vec<BadAxis>,
    pub verified: bool,
}

impl OrbifoldClassData {
    pub fn elliptic_class_count(&self) -> u32 {
        self.elliptic_classes.iter().map(|c| c.count).sum()
    }

    pub fn shortest_bad_length(&self) -> f64 {
        self.bad_axes
            .iter()
            .map(|a| a.primitive_length)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Primitive holonomies of the hyperbolic elements `h·γʲ` on an order-`n`
/// axis, where `h` is the shortest translation along it.
fn bad_holonomies(n: u32) -> Result<Vec<f64>> {
    let list = match n {
        2 => vec![0.0, PI],
        3 => vec![0.0, TAU / 3.0, 2.0 * TAU / 3.0],
        5 => vec![PI / 5.0, 3.0 * PI / 5.0, PI, 7.0 * PI / 5.0, 9.0 * PI / 5.0],
        _ => {
            return Err(Error::InvalidArgument(format!(
                "no holonomy list for rotation order {n}"
            )))
        }
    };
    Ok(list)
}

struct Axis {
    order: u32,
    label: &'static str,
    length: f64,
}

/// Rotation axes of the orthoscheme group for the supported symbols.
fn axes(tet: &CoxeterTetrahedron) -> Result<Vec<Axis>> {
    let sym = tet.symbol();
    let verified = sym == CoxeterSymbol::new(5, 3, 5);
    if !verified && sym != CoxeterSymbol::new(3, 5, 3) {
        return Err(sym.unsupported("class data is only available for [5,3,5] and [3,5,3]"));
    }
    let e = |a: &str, b: &str| tet.edge(a, b);
    let h_e = 2.0 * (e("O", "E") + e("E", "F") + e("F", "V"));
    Ok(vec![
        Axis { order: sym.p, label: "OF", length: 2.0 * e("O", "F") },
        Axis { order: sym.r, label: "VE", length: 2.0 * e("V", "E") },
        Axis { order: sym.q, label: "OV", length: 2.0 * e("O", "V") },
        Axis { order: 2, label: "OE+EF+FV", length: h_e },
    ])
}

/// Elliptic classes and bad-hyperbolic axes with their centralizer
/// covolumes.
pub fn centralizer_covolumes(tet: &CoxeterTetrahedron) -> Result<OrbifoldClassData> {
    let axes = axes(tet)?;
    let mut elliptic_classes: Vec<EllipticClass> = Vec::new();
    let mut bad_axes = Vec::new();
    for axis in &axes {
        let n = axis.order;
        let torsion = if n == 2 { 0.5 } else { 1.0 };
        let covolume = axis.length / n as f64;
        for k in 1..=n / 2 {
            let holonomy = TAU * k as f64 / n as f64;
            match elliptic_classes.iter_mut().find(|c| {
                c.order == n
                    && (c.holonomy - holonomy).abs() < 1e-12
                    && (c.covolume - covolume).abs() < 1e-9
            }) {
                Some(c) => {
                    c.count += 1;
                    c.axis = format!("{},{}", c.axis, axis.label);
                }
                None => elliptic_classes.push(EllipticClass {
                    order: n,
                    holonomy,
                    covolume,
                    torsion,
                    count: 1,
                    axis: axis.label.to_string(),
                }),
            }
        }
        bad_axes.push(BadAxis {
            order: n,
            primitive_length: axis.length,
            primitive_holonomies: bad_holonomies(n)?,
            covolume_per_class: axis.length / n as f64,
            axis: axis.label.to_string(),
        });
    }
    Ok(OrbifoldClassData {
        symbol: tet.symbol(),
        elliptic_classes,
        bad_axes,
        verified: tet.symbol() == CoxeterSymbol::new(5, 3, 5),
    })
}

/// Elliptic and bad-hyperbolic part of the class list up to `cutoff`, as a
/// dataset ready to be merged with an imported good-geodesic spectrum.
pub fn emit_orbifold_dataset(
    tet: &CoxeterTetrahedron,
    cutoff: f64,
    volume: f64,
) -> Result<SpectrumDataset> {
    if !(cutoff > 0.0) || !cutoff.is_finite() {
        return Err(Error::InvalidArgument(format!("cutoff must be positive, got {cutoff}")));
    }
    let data = centralizer_covolumes(tet)?;
    let mut classes = Vec::new();
    for c in &data.elliptic_classes {
        classes.push(
            ConjugacyClassEntry::elliptic(c.holonomy, c.covolume, c.torsion)
                .with_multiplicity(c.count),
        );
    }
    for axis in &data.bad_axes {
        let n = axis.order as f64;
        let base = axis.primitive_holonomies[0];
        let mut k = 1u32;
        while k as f64 * axis.primitive_length <= cutoff {
            let length = k as f64 * axis.primitive_length;
            let mut hols: Vec<f64> = (0..axis.order)
                .map(|j| wrap_angle(k as f64 * base + TAU * j as f64 / n))
                .collect();
            hols.sort_by(f64::total_cmp);
            // θ and −θ contribute identically; keep one record per pair.
            let mut used = vec![false; hols.len()];
            for i in 0..hols.len() {
                if used[i] {
                    continue;
                }
                used[i] = true;
                let theta = hols[i];
                let partner = (0..hols.len())
                    .find(|&j| !used[j] && (hols[j] + theta).abs() < 1e-9 && theta.abs() > 1e-9);
                let paired = match partner {
                    Some(j) => {
                        used[j] = true;
                        true
                    }
                    None => false,
                };
                classes.push(
                    ConjugacyClassEntry::hyperbolic(
                        ClassKind::BadHyperbolic,
                        length,
                        theta.abs(),
                        axis.covolume_per_class,
                    )
                    .paired(paired),
                );
            }
            k += 1;
        }
    }
    let name = format!("orbifold{}-elliptic-bad", tet.symbol());
    let mut ds = SpectrumDataset::new(name, volume, 0, cutoff, classes)?
        .with_provenance("generator", "coxeter-orthoscheme")
        .with_provenance("symbol", tet.symbol().to_string());
    if !data.verified {
        ds = ds.with_provenance("class_lists", "unverified");
    }
    Ok(ds)
}
