//! Cones in `N¹(Y) ≅ R²` and the Mori chamber picture of `Y`.
//!
//! All tests are exact integer cross products.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::coxring::CoxGrading;
use crate::error::{Error, Result};
use crate::picard::{ConstructionParams, DivisorClassY};

fn cross(u: DivisorClassY, v: DivisorClassY) -> i64 {
    u.a * v.b - u.b * v.a
}

/// Primitive generator of the ray through a nonzero vector.
pub fn primitive(v: DivisorClassY) -> DivisorClassY {
    let g = v.a.gcd(&v.b);
    if g == 0 {
        v
    } else {
        DivisorClassY::new(v.a / g, v.b / g)
    }
}

/// A full-dimensional, strictly convex cone `⟨ray1, ray2⟩` with primitive rays
/// ordered counterclockwise (`ray1 × ray2 > 0`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Cone2D {
    pub ray1: DivisorClassY,
    pub ray2: DivisorClassY,
}

impl Cone2D {
    /// Accepts the two rays in either order.
    pub fn new(u: DivisorClassY, v: DivisorClassY) -> Result<Self> {
        let (u, v) = (primitive(u), primitive(v));
        match cross(u, v).cmp(&0) {
            Ordering::Greater => Ok(Self { ray1: u, ray2: v }),
            Ordering::Less => Ok(Self { ray1: v, ray2: u }),
            Ordering::Equal => Err(Error::Degenerate(format!("rays {u} and {v} do not span a cone"))),
        }
    }

    /// Closed membership.
    pub fn contains(&self, v: DivisorClassY) -> bool {
        cross(self.ray1, v) >= 0 && cross(v, self.ray2) >= 0
    }

    pub fn contains_in_interior(&self, v: DivisorClassY) -> bool {
        cross(self.ray1, v) > 0 && cross(v, self.ray2) > 0
    }

    pub fn contains_cone(&self, other: &Cone2D) -> bool {
        self.contains(other.ray1) && self.contains(other.ray2)
    }

    /// Full-dimensional intersection, if any.
    pub fn intersect(&self, other: &Cone2D) -> Option<Cone2D> {
        let lo = if cross(self.ray1, other.ray1) >= 0 { other.ray1 } else { self.ray1 };
        let hi = if cross(self.ray2, other.ray2) >= 0 { self.ray2 } else { other.ray2 };
        let inside = |v| self.contains(v) && other.contains(v);
        (inside(lo) && inside(hi) && cross(lo, hi) > 0).then_some(Cone2D { ray1: lo, ray2: hi })
    }

    /// Nonnegative rational coordinates `(s, t)` with `v = s·ray1 + t·ray2`,
    /// returned as numerators over the common denominator `ray1 × ray2`.
    pub fn coordinates(&self, v: DivisorClassY) -> (i64, i64, i64) {
        (cross(v, self.ray2), cross(self.ray1, v), cross(self.ray1, self.ray2))
    }
}

impl fmt::Display for Cone2D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.ray1, self.ray2)
    }
}

/// `Nef(Y) = ⟨D, H⟩`.
pub fn nef_cone(_params: &ConstructionParams) -> Cone2D {
    Cone2D { ray1: DivisorClassY::D, ray2: DivisorClassY::H }
}

/// `Eff(Y) = ⟨D - 2mH, H⟩`.
pub fn effective_cone(params: &ConstructionParams) -> Cone2D {
    Cone2D { ray1: DivisorClassY::new(1, -params.fiber_twist()), ray2: DivisorClassY::H }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ChamberLabel {
    #[serde(rename = "NEF_Y")]
    NefY,
    #[serde(rename = "FLIP_CHAMBER")]
    FlipChamber,
}

impl fmt::Display for ChamberLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChamberLabel::NefY => "NEF_Y",
            ChamberLabel::FlipChamber => "FLIP_CHAMBER",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Chamber {
    pub cone: Cone2D,
    pub label: ChamberLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChamberDecomposition {
    pub effective: Cone2D,
    pub movable: Cone2D,
    /// Primitive generator rays inside the movable cone, counterclockwise.
    pub walls: Vec<DivisorClassY>,
    /// Counterclockwise; consecutive chambers share a wall.
    pub chambers: Vec<Chamber>,
}

impl ChamberDecomposition {
    pub fn chamber_containing(&self, v: DivisorClassY) -> Option<&Chamber> {
        self.chambers.iter().find(|c| c.cone.contains(v))
    }
}

/// Cone spanned by a list of nonzero vectors, when full-dimensional and
/// strictly convex.
fn span(vectors: &[DivisorClassY]) -> Result<Cone2D> {
    let rays: Vec<_> = vectors.iter().copied().filter(|v| *v != DivisorClassY::ZERO).collect();
    let opposite = |u: DivisorClassY, v: DivisorClassY| cross(u, v) == 0 && u.a * v.a + u.b * v.b < 0;
    if rays.iter().any(|&u| rays.iter().any(|&v| opposite(u, v))) {
        return Err(Error::Degenerate("generator degrees contain opposite rays".into()));
    }
    let first = rays
        .iter()
        .copied()
        .find(|&u| rays.iter().all(|&v| cross(u, v) >= 0) && rays.iter().any(|&v| cross(u, v) > 0));
    let last = rays
        .iter()
        .copied()
        .find(|&u| rays.iter().all(|&v| cross(v, u) >= 0) && rays.iter().any(|&v| cross(v, u) > 0));
    match (first, last) {
        (Some(u), Some(v)) => Cone2D::new(u, v),
        _ => Err(Error::Degenerate(
            "generator degrees do not span a full-dimensional strictly convex cone".into(),
        )),
    }
}

/// GIT chamber decomposition from the degrees of the Cox generators.
///
/// `Mov` is the intersection, over each generator, of the cone spanned by the
/// remaining generators. Walls are the generator rays inside `Mov`.
pub fn chamber_decomposition(
    generator_degrees: &[DivisorClassY],
    params: &ConstructionParams,
) -> Result<ChamberDecomposition> {
    if generator_degrees.contains(&DivisorClassY::ZERO) {
        return Err(Error::Degenerate("generator of degree zero".into()));
    }
    let effective = span(generator_degrees)?;

    let mut movable = effective;
    for skip in 0..generator_degrees.len() {
        let rest: Vec<_> = generator_degrees
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &v)| v)
            .collect();
        let cone = span(&rest).map_err(|_| {
            Error::Degenerate(format!(
                "removing generator of degree {} leaves no full-dimensional cone; movable cone is degenerate",
                generator_degrees[skip]
            ))
        })?;
        movable = movable
            .intersect(&cone)
            .ok_or_else(|| Error::Degenerate("movable cone is not full-dimensional".into()))?;
    }

    let mut walls: Vec<DivisorClassY> = generator_degrees
        .iter()
        .map(|&v| primitive(v))
        .chain([movable.ray1, movable.ray2])
        .filter(|&v| movable.contains(v))
        .collect();
    walls.sort_by(|&u, &v| cross(v, u).cmp(&0));
    walls.dedup();

    let nef = nef_cone(params);
    let chambers = walls
        .windows(2)
        .map(|w| {
            let cone = Cone2D::new(w[0], w[1])?;
            let label = if cone == nef { ChamberLabel::NefY } else { ChamberLabel::FlipChamber };
            Ok(Chamber { cone, label })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ChamberDecomposition { effective, movable, walls, chambers })
}

/// The decomposition for `Y`'s own Cox generators.
pub fn chambers_of_y(params: &ConstructionParams) -> ChamberDecomposition {
    chamber_decomposition(&CoxGrading::new(params).generator_degrees(), params)
        .expect("Y's generator degrees span a strictly convex cone")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub class: DivisorClassY,
    pub effective: bool,
    pub big: bool,
    pub movable: bool,
    pub nef: bool,
    pub ample: bool,
}

pub fn classify(cls: DivisorClassY, params: &ConstructionParams) -> PositivityReport {
    let eff = effective_cone(params);
    let nef = nef_cone(params);
    let mov = chambers_of_y(params).movable;
    PositivityReport {
        class: cls,
        effective: eff.contains(cls),
        big: eff.contains_in_interior(cls),
        movable: mov.contains(cls),
        nef: nef.contains(cls),
        ample: nef.contains_in_interior(cls),
    }
}
