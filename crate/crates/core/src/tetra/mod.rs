//! Compact hyperbolic Coxeter orthoschemes `[p,q,r]`.
//!
//! The faces `0..4` of the orthoscheme are the mirrors of the linear
//! Coxeter diagram `0 -p- 1 -q- 2 -r- 3`, so the face Gram matrix has ones
//! on the diagonal, `-cos(π/m)` between consecutive faces and zero
//! elsewhere. Vertex `i` is the vertex opposite face `i`; its dual vector has
//! Gram matrix `face_gram⁻¹`, whose diagonal is negative exactly when every
//! vertex lies inside hyperbolic space.
//!
//! Vertices are labelled `O, F, E, V` in index order. For `[5,3,5]` this is
//! the characteristic simplex of the regular dodecahedral tiling: `O` the center, `F` a face center, `E` an edge midpoint and `V` a
//! vertex. The dihedral angles are then `π/q` along `OV`, `π/r` along `OF`,
//! `π/p` along `VE` and `π/2` along `OE`, `EF`, `FV`.

mod classes;
mod volume;

use std::f64::consts::PI;

use nalgebra::{Matrix4, SymmetricEigen, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use classes::{
    centralizer_covolumes, emit_orbifold_dataset, BadAxis, EllipticClass, OrbifoldClassData,
};
pub use volume::{lobachevsky, orthoscheme_volume, orthoscheme_volume_lobachevsky};

pub const VERTEX_LABELS: [&str; 4] = ["O", "F", "E", "V"];

/// Index of a vertex by its label.
pub fn vertex(label: &str) -> Option<usize> {
    VERTEX_LABELS.iter().position(|&l| l == label)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterSymbol {
    pub p: u32,
    pub q: u32,
    pub r: u32,
}

impl CoxeterSymbol {
    pub fn new(p: u32, q: u32, r: u32) -> Self {
        Self { p, q, r }
    }

    pub fn reversed(self) -> Self {
        Self::new(self.r, self.q, self.p)
    }

    /// Coxeter matrix entry between faces `i` and `j` (`i ≠ j`).
    pub fn order(&self, i: usize, j: usize) -> u32 {
        match (i.min(j), i.max(j)) {
            (0, 1) => self.p,
            (1, 2) => self.q,
            (2, 3) => self.r,
            _ => 2,
        }
    }

    fn unsupported(&self, reason: impl Into<String>) -> Error {
        Error::UnsupportedSymbol {
            p: self.p,
            q: self.q,
            r: self.r,
            reason: reason.into(),
        }
    }
}

impl std::fmt::Display for CoxeterSymbol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{},{},{}]", self.p, self.q, self.r)
    }
}

impl std::str::FromStr for CoxeterSymbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        let parts: Vec<u32> = trimmed
            .split(',')
            .map(|x| x.trim().parse::<u32>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("Coxeter symbol `{s}` is not of the form p,q,r")))?;
        match parts.as_slice() {
            &[p, q, r] => Ok(Self::new(p, q, r)),
            _ => Err(Error::Parse(format!("Coxeter symbol `{s}` needs three entries"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoxeterTetrahedron {
    symbol: CoxeterSymbol,
    face_gram: Matrix4<f64>,
    vertex_gram: Matrix4<f64>,
    edge_lengths: [[f64; 4]; 4],
}

impl CoxeterTetrahedron {
    /// Builds the orthoscheme and checks that it is a compact hyperbolic
    /// tetrahedron.
    pub fn new(symbol: CoxeterSymbol) -> Result<Self> {
        if [symbol.p, symbol.q, symbol.r].iter().any(|&m| m < 2) {
            return Err(symbol.unsupported("every label must be at least 2"));
        }
        let mut face_gram = Matrix4::identity();
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    face_gram[(i, j)] = -(PI / symbol.order(i, j) as f64).cos();
                }
            }
        }
        let eigen = SymmetricEigen::new(face_gram);
        let negative = eigen.eigenvalues.iter().filter(|&&l| l < -1e-12).count();
        let positive = eigen.eigenvalues.iter().filter(|&&l| l > 1e-12).count();
        if (positive, negative) != (3, 1) {
            return Err(symbol.unsupported(format!(
                "Gram matrix has signature ({positive},{negative}), not (3,1): not hyperbolic"
            )));
        }
        let vertex_gram = face_gram
            .try_inverse()
            .ok_or_else(|| symbol.unsupported("singular Gram matrix"))?;
        for i in 0..4 {
            if vertex_gram[(i, i)] >= -1e-12 {
                return Err(symbol.unsupported(format!(
                    "vertex {} is ideal or hyperideal: not compact",
                    VERTEX_LABELS[i]
                )));
            }
        }
        let mut edge_lengths = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    let c = -vertex_gram[(i, j)]
                        / (vertex_gram[(i, i)] * vertex_gram[(j, j)]).sqrt();
                    edge_lengths[i][j] = c.acosh();
                }
            }
        }
        Ok(Self {
            symbol,
            face_gram,
            vertex_gram,
            edge_lengths,
        })
    }

    pub fn from_symbol(p: u32, q: u32, r: u32) -> Result<Self> {
        Self::new(CoxeterSymbol::new(p, q, r))
    }

    pub fn symbol(&self) -> CoxeterSymbol {
        self.symbol
    }

    pub fn face_gram(&self) -> &Matrix4<f64> {
        &self.face_gram
    }

    pub fn vertex_gram(&self) -> &Matrix4<f64> {
        &self.vertex_gram
    }

    /// Hyperbolic length of the edge between vertices `i` and `j`.
    pub fn edge_length(&self, i: usize, j: usize) -> f64 {
        self.edge_lengths[i][j]
    }

    /// Edge length by vertex labels, e.g. `edge("O", "F")`.
    pub fn edge(&self, a: &str, b: &str) -> f64 {
        let i = vertex(a).expect("vertex label");
        let j = vertex(b).expect("vertex label");
        self.edge_lengths[i][j]
    }

    /// Dihedral angle along the edge joining vertices `i` and `j`, which is
    /// the intersection of the two faces opposite the other two vertices.
    pub fn dihedral_angle(&self, i: usize, j: usize) -> f64 {
        assert!(i != j && i < 4 && j < 4);
        let mut rest = (0..4).filter(|&k| k != i && k != j);
        let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
        PI / self.symbol.order(a, b) as f64
    }

    /// Dihedral angles of the three edges at `v`, ordered by the other
    /// endpoint's index. These are the angles of the spherical link
    /// triangle at `v`.
    pub fn link_angles(&self, v: usize) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (slot, w) in (0..4).filter(|&w| w != v).enumerate() {
            out[slot] = self.dihedral_angle(v, w);
        }
        out
    }

    /// Angle at `v` of the face triangle `(v, u, w)`, from the spherical
    /// link at `v`: the link side between the directions of `u` and `w` is
    /// opposite the link vertex of the fourth edge.
    pub fn face_angle_from_link(&self, v: usize, u: usize, w: usize) -> Result<f64> {
        let x = (0..4).find(|&k| k != v && k != u && k != w).expect("four vertices");
        let angles = [
            self.dihedral_angle(v, x),
            self.dihedral_angle(v, u),
            self.dihedral_angle(v, w),
        ];
        link_triangle_side(angles, 0)
    }

    /// Same angle computed from the vertex Gram matrix via the hyperbolic
    /// law of cosines on the edge lengths.
    pub fn face_angle_from_gram(&self, v: usize, u: usize, w: usize) -> f64 {
        let (a, b, c) = (
            self.edge_lengths[v][u],
            self.edge_lengths[v][w],
            self.edge_lengths[u][w],
        );
        ((a.cosh() * b.cosh() - c.cosh()) / (a.sinh() * b.sinh())).acos()
    }

    /// Length of edge `(i, j)` computed from the face triangle `(i, j, k)`
    /// using only spherical-link trigonometry and the angle form of the
    /// hyperbolic law of cosines.
    pub fn edge_length_from_links(&self, i: usize, j: usize, k: usize) -> Result<f64> {
        let at_i = self.face_angle_from_link(i, j, k)?;
        let at_j = self.face_angle_from_link(j, i, k)?;
        let at_k = self.face_angle_from_link(k, i, j)?;
        hyperbolic_triangle_side(at_k, at_i, at_j)
    }

    /// Unit timelike vectors of the vertices in `R^{3,1}` (last coordinate
    /// is time), realizing the vertex Gram matrix up to normalization.
    pub fn vertex_vectors(&self) -> Result<[Vector4<f64>; 4]> {
        let eigen = SymmetricEigen::new(self.face_gram);
        let time_axis = eigen
            .eigenvalues
            .iter()
            .position(|&l| l < 0.0)
            .expect("signature checked at construction");
        // Face normals as rows of Q·|Λ|^{1/2}; reorder coordinates so that
        // the negative direction is last.
        let mut perm: Vec<usize> = (0..4).filter(|&k| k != time_axis).collect();
        perm.push(time_axis);
        let mut normals = Matrix4::zeros();
        for i in 0..4 {
            for (col, &k) in perm.iter().enumerate() {
                normals[(i, col)] = eigen.eigenvectors[(i, k)] * eigen.eigenvalues[k].abs().sqrt();
            }
        }
        let form = Matrix4::from_diagonal(&Vector4::new(1.0, 1.0, 1.0, -1.0));
        let inv = normals
            .try_inverse()
            .ok_or_else(|| Error::Numerical("face normals are linearly dependent".into()))?;
        let duals = form * inv;
        let mut out = [Vector4::zeros(); 4];
        for (j, slot) in out.iter_mut().enumerate() {
            let mut v: Vector4<f64> = duals.column(j).into_owned();
            let norm2 = v.x * v.x + v.y * v.y + v.z * v.z - v.w * v.w;
            if norm2 >= 0.0 {
                return Err(Error::Numerical(format!(
                    "vertex {} is not timelike",
                    VERTEX_LABELS[j]
                )));
            }
            v /= (-norm2).sqrt();
            if v.w < 0.0 {
                v = -v;
            }
            *slot = v;
        }
        Ok(out)
    }

    /// Vertex positions in the Klein ball model.
    pub fn klein_vertices(&self) -> Result<[[f64; 3]; 4]> {
        let v = self.vertex_vectors()?;
        Ok(v.map(|x| [x.x / x.w, x.y / x.w, x.z / x.w]))
    }
}

/// Side of a spherical triangle opposite `angles[opposite]`, by the polar
/// law of cosines `cos a = (cos A + cos B cos C) / (sin B sin C)`.
pub fn link_triangle_side(angles: [f64; 3], opposite: usize) -> Result<f64> {
    if opposite > 2 {
        return Err(Error::InvalidArgument(format!("opposite index {opposite} out of range")));
    }
    if angles.iter().any(|&a| !(a > 0.0 && a < PI)) {
        return Err(Error::InvalidArgument(format!("angles {angles:?} must lie in (0, π)")));
    }
    if angles.iter().sum::<f64>() <= PI {
        return Err(Error::InvalidArgument(format!(
            "angles {angles:?} sum to at most π: not a spherical triangle"
        )));
    }
    let a = angles[opposite];
    let b = angles[(opposite + 1) % 3];
    let c = angles[(opposite + 2) % 3];
    let cos_side = (a.cos() + b.cos() * c.cos()) / (b.sin() * c.sin());
    Ok(cos_side.clamp(-1.0, 1.0).acos())
}

/// Side of a hyperbolic triangle opposite the angle `opposite`, given the
/// two adjacent angles: `cosh a = (cos α + cos β cos γ) / (sin β sin γ)`.
pub fn hyperbolic_triangle_side(opposite: f64, adjacent1: f64, adjacent2: f64) -> Result<f64> {
    if opposite + adjacent1 + adjacent2 >= PI {
        return Err(Error::InvalidArgument(
            "angle sum must be below π for a hyperbolic triangle".into(),
        ));
    }
    let c = (opposite.cos() + adjacent1.cos() * adjacent2.cos()) / (adjacent1.sin() * adjacent2.sin());
    if c < 1.0 {
        return Err(Error::InvalidArgument("angles do not determine a hyperbolic triangle".into()));
    }
    Ok(c.acosh())
}

/// Leg opposite `angle` in a hyperbolic right triangle whose other acute
/// angle is `other_angle`: `cosh a = cos A / sin B`.
pub fn right_triangle_leg(angle: f64, other_angle: f64) -> Result<f64> {
    let ratio = angle.cos() / other_angle.sin();
    if !(ratio > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "cos A / sin B = {ratio} ≤ 1: no hyperbolic right triangle with these angles"
        )));
    }
    Ok(ratio.acosh())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t535() -> CoxeterTetrahedron {
        CoxeterTetrahedron::from_symbol(5, 3, 5).unwrap()
    }

    #[test]
    fn symbol_parsing() {
        assert_eq!("5,3,5".parse::<CoxeterSymbol>().unwrap(), CoxeterSymbol::new(5, 3, 5));
        assert_eq!("[3, 5, 3]".parse::<CoxeterSymbol>().unwrap(), CoxeterSymbol::new(3, 5, 3));
        assert!("5,3".parse::<CoxeterSymbol>().is_err());
        assert!("a,b,c".parse::<CoxeterSymbol>().is_err());
    }

    #[test]
    fn rejects_non_hyperbolic_symbols() {
        assert!(matches!(
            CoxeterTetrahedron::from_symbol(2, 2, 2),
            Err(Error::UnsupportedSymbol { .. })
        ));
        // [4,3,4] is the Euclidean cubic honeycomb; [6,3,6] has ideal vertices.
        assert!(CoxeterTetrahedron::from_symbol(4, 3, 4).is_err());
        assert!(CoxeterTetrahedron::from_symbol(6, 3, 6).is_err());
        assert!(CoxeterTetrahedron::from_symbol(1, 3, 5).is_err());
    }

    #[test]
    fn gram_structure() {
        for sym in [(5, 3, 5), (3, 5, 3), (4, 3, 5), (5, 3, 4)] {
            let t = CoxeterTetrahedron::from_symbol(sym.0, sym.1, sym.2).unwrap();
            assert!(t.face_gram().determinant() < 0.0);
            for i in 0..4 {
                assert_eq!(t.face_gram()[(i, i)], 1.0);
                assert!(t.vertex_gram()[(i, i)] < 0.0);
                for j in 0..4 {
                    assert_eq!(t.face_gram()[(i, j)], t.face_gram()[(j, i)]);
                    assert_eq!(t.edge_length(i, j), t.edge_length(j, i));
                    if i != j {
                        assert!(t.edge_length(i, j) > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn link_angle_multisets() {
        let t = t535();
        let sorted = |v: usize| {
            let mut a = t.link_angles(v);
            a.sort_by(f64::total_cmp);
            a
        };
        let ov = [PI / 5.0, PI / 3.0, PI / 2.0];
        let ef = [PI / 5.0, PI / 2.0, PI / 2.0];
        assert_eq!(sorted(vertex("O").unwrap()), ov);
        assert_eq!(sorted(vertex("V").unwrap()), ov);
        assert_eq!(sorted(vertex("E").unwrap()), ef);
        assert_eq!(sorted(vertex("F").unwrap()), ef);
        assert_eq!(t.dihedral_angle(0, 3), PI / 3.0);
        assert_eq!(t.dihedral_angle(0, 1), PI / 5.0);
        assert_eq!(t.dihedral_angle(3, 2), PI / 5.0);
    }

    #[test]
    fn reference_lengths() {
        let t = t535();
        let of = t.edge("O", "F");
        assert!((of.cosh() - 1.5388).abs() < 5e-4);
        assert!((of - 0.9963).abs() < 5e-4);
        assert!((t.edge("O", "V") - 3.0 * 1.2685 / 2.0).abs() < 5e-4);
        assert!((of - t.edge("V", "E")).abs() < 1e-12);
    }

    #[test]
    fn link_side_examples() {
        let eof = link_triangle_side([PI / 3.0, PI / 2.0, PI / 5.0], 0).unwrap();
        assert!((eof - ((5f64.sqrt() - 1.0) / 2.0).atan()).abs() < 1e-14);
        let oct = link_triangle_side([PI / 2.0; 3], 1).unwrap();
        assert!((oct - PI / 2.0).abs() < 1e-15);
        assert!(link_triangle_side([PI / 3.0, PI / 3.0, PI / 3.0], 0).is_err());
        assert!(link_triangle_side([PI / 2.0; 3], 3).is_err());
    }

    #[test]
    fn eof_from_link_and_gram_agree() {
        let t = t535();
        let (o, e, f) = (vertex("O").unwrap(), vertex("E").unwrap(), vertex("F").unwrap());
        let link = t.face_angle_from_link(o, e, f).unwrap();
        let gram = t.face_angle_from_gram(o, e, f);
        assert!((link - gram).abs() < 1e-10);
        assert!((t.face_angle_from_link(e, o, f).unwrap() - PI / 5.0).abs() < 1e-14);
        assert!((t.face_angle_from_link(f, o, e).unwrap() - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn right_triangle_examples() {
        let eof = ((5f64.sqrt() - 1.0) / 2.0).atan();
        let of = right_triangle_leg(PI / 5.0, eof).unwrap();
        assert!((of - 0.9963).abs() < 5e-4);
        assert!((of - t535().edge("O", "F")).abs() < 1e-10);

        // cot A = 1 + ε with A = B: the leg shrinks to zero with ε.
        let mut prev = f64::INFINITY;
        for eps in [1e-2, 1e-4, 1e-6] {
            let a = (1.0f64 / (1.0 + eps)).atan();
            let leg = right_triangle_leg(a, a).unwrap();
            assert!(leg < prev);
            prev = leg;
        }
        assert!(prev < 2e-3);
        assert!(right_triangle_leg(PI / 3.0, PI / 3.0).is_err());
    }

    #[test]
    fn all_edges_by_two_routes() {
        for sym in [(5, 3, 5), (3, 5, 3), (4, 3, 5)] {
            let t = CoxeterTetrahedron::from_symbol(sym.0, sym.1, sym.2).unwrap();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    for k in (0..4).filter(|&k| k != i && k != j) {
                        let trig = t.edge_length_from_links(i, j, k).unwrap();
                        assert!((trig - t.edge_length(i, j)).abs() < 1e-10, "{sym:?} edge {i}{j} via {k}");
                    }
                }
            }
        }
    }

    #[test]
    fn klein_realization_reproduces_lengths() {
        let t = t535();
        let v = t.vertex_vectors().unwrap();
        let lorentz = |a: &Vector4<f64>, b: &Vector4<f64>| a.x * b.x + a.y * b.y + a.z * b.z - a.w * b.w;
        for i in 0..4 {
            for j in (i + 1)..4 {
                let d = (-lorentz(&v[i], &v[j])).acosh();
                assert!((d - t.edge_length(i, j)).abs() < 1e-10);
            }
        }
        for p in t.klein_vertices().unwrap() {
            assert!(p.iter().map(|x| x * x).sum::<f64>() < 1.0);
        }
    }
}
