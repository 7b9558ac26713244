//! The conjugacy between `θ ↦ −dθ` and the Nielsen map of the regular
//! polygon group, evaluated exactly on rational angles.

use std::collections::HashMap;

use num_complex::Complex64;

use super::{angle_map, check_degree, Angle};
use crate::error::AngleError;
use crate::geometry::SpherePoint;
use crate::group::KissingGroup;
use crate::packing::regular_polygon_packing;

type C = Complex64;

/// Default bound on the orbit length searched for a period.
pub const DEFAULT_QMARK_DEPTH: usize = 1 << 16;

/// The attracting fixed point of `g_{s_0} ∘ ... ∘ g_{s_{q-1}}`, found by
/// applying the reflections pointwise from a point of the arc under `D_{s_0}`.
fn periodic_point(group: &KissingGroup, cycle: &[usize]) -> SpherePoint<f64> {
    let c = group.packing.circles[cycle[0]].center();
    let mut z = SpherePoint::finite(c / c.norm());
    let max_rounds = (1usize << 20) / cycle.len() + 64;
    let mut settled = 0;
    for _ in 0..max_rounds {
        let prev = z;
        for &s in cycle.iter().rev() {
            z = group.reflections[s].apply(z).normalized();
        }
        if z.chordal(prev) < 1e-15 {
            settled += 1;
            if settled == 3 {
                break;
            }
        } else {
            settled = 0;
        }
    }
    z
}

/// The point `φ(θ)` of the unit circle whose Nielsen itinerary is the
/// itinerary of `θ`, normalized by `φ(j/(d+1)) = e^{2πij/(d+1)}`.
/// `depth` bounds the orbit length searched for a cusp or a period.
pub fn question_mark(theta: &Angle, d: usize, depth: usize) -> Result<C, AngleError> {
    check_degree(d)?;
    let group = KissingGroup::new(&regular_polygon_packing(d)?).expect("polygon circles are proper");
    let m = d + 1;
    let mut seen: HashMap<Angle, usize> = HashMap::new();
    let mut symbols = Vec::new();
    let mut t = theta.clone();
    let (prefix_len, tail) = loop {
        if symbols.len() >= depth.max(1) {
            return Err(AngleError::DepthInsufficient(depth));
        }
        match t.arc_index(m) {
            Err(j) => {
                let z = C::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64);
                break (symbols.len(), SpherePoint::finite(z));
            }
            Ok(j) => {
                if let Some(&start) = seen.get(&t) {
                    break (start, periodic_point(&group, &symbols[start..]));
                }
                seen.insert(t.clone(), symbols.len());
                symbols.push(j);
                t = angle_map(&t, d);
            }
        }
    };
    let mut z = tail;
    for &s in symbols[..prefix_len].iter().rev() {
        z = group.reflections[s].apply(z).normalized();
    }
    let z = z.to_finite().ok_or(AngleError::DepthInsufficient(depth))?;
    // the limit set is the unit circle; drop rounding drift
    Ok(z / z.norm())
}
