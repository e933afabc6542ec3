//! Phenomena as scalar fields with readings in `[0, 1]`.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::{NodeId, Point2, SensorLayout};

/// Reading inside a two-level phenomenon unless configured otherwise.
pub const DEFAULT_INSIDE: f64 = 0.8;
/// Reading outside a two-level phenomenon unless configured otherwise.
pub const DEFAULT_OUTSIDE: f64 = 0.1;

const UNIT_NORMAL_TOLERANCE: f64 = 1e-12;

/// A phenomenon sampled by the network.
///
/// The geometric variants are closed on the inside: a sensor exactly on the
/// boundary reads the inside level.
#[derive(Debug, Clone, PartialEq)]
pub enum PhenomenonField {
    /// Inside is `{p : normal · p >= offset}`.
    HalfPlane {
        normal: (f64, f64),
        offset: f64,
        inside: f64,
        outside: f64,
    },
    Disk {
        center: Point2,
        radius: f64,
        inside: f64,
        outside: f64,
    },
    /// The base field dimmed by a brightness factor.
    ScaledGray {
        base: Box<PhenomenonField>,
        brightness: f64,
    },
    /// Reading 1 on the listed nodes and 0 elsewhere.
    BinaryActivation { active: Vec<NodeId> },
}

fn is_level(v: f64) -> bool {
    (0.0..=1.0).contains(&v)
}

impl PhenomenonField {
    /// Half-plane whose inside lies in the direction of `normal` from the
    /// line through `point`.
    pub fn half_plane_through(point: Point2, normal: (f64, f64), inside: f64, outside: f64) -> Result<Self> {
        let len = libm::hypot(normal.0, normal.1);
        if !(len > 0.0 && len.is_finite()) {
            return Err(Error::InvalidParameter("half-plane normal must be non-zero"));
        }
        let normal = (normal.0 / len, normal.1 / len);
        let field = PhenomenonField::HalfPlane {
            normal,
            offset: normal.0 * point.x() + normal.1 * point.y(),
            inside,
            outside,
        };
        field.validate()?;
        Ok(field)
    }

    pub fn disk(center: Point2, radius: f64, inside: f64, outside: f64) -> Result<Self> {
        let field = PhenomenonField::Disk {
            center,
            radius,
            inside,
            outside,
        };
        field.validate()?;
        Ok(field)
    }

    pub fn scaled(base: PhenomenonField, brightness: f64) -> Result<Self> {
        let field = PhenomenonField::ScaledGray {
            base: Box::new(base),
            brightness,
        };
        field.validate()?;
        Ok(field)
    }

    pub fn activation(active: Vec<NodeId>) -> Self {
        PhenomenonField::BinaryActivation { active }
    }

    /// Checks levels, radius and normal. Node ids are checked by [`sample`].
    pub fn validate(&self) -> Result<()> {
        match self {
            PhenomenonField::HalfPlane {
                normal,
                offset,
                inside,
                outside,
            } => {
                let len = libm::hypot(normal.0, normal.1);
                if len.is_nan() || (len - 1.0).abs() > UNIT_NORMAL_TOLERANCE {
                    return Err(Error::InvalidParameter("half-plane normal must have unit length"));
                }
                if !offset.is_finite() {
                    return Err(Error::InvalidParameter("half-plane offset must be finite"));
                }
                if !is_level(*inside) || !is_level(*outside) {
                    return Err(Error::InvalidParameter("readings must lie in [0, 1]"));
                }
            }
            PhenomenonField::Disk {
                radius,
                inside,
                outside,
                ..
            } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidParameter("disk radius must be positive"));
                }
                if !is_level(*inside) || !is_level(*outside) {
                    return Err(Error::InvalidParameter("readings must lie in [0, 1]"));
                }
            }
            PhenomenonField::ScaledGray { base, brightness } => {
                if !is_level(*brightness) {
                    return Err(Error::InvalidParameter("brightness must lie in [0, 1]"));
                }
                base.validate()?;
            }
            PhenomenonField::BinaryActivation { .. } => {}
        }
        Ok(())
    }

    /// Whether `p` is inside a geometric phenomenon. `None` for activation
    /// sets, which are not defined on positions.
    pub fn contains(&self, p: &Point2) -> Option<bool> {
        match self {
            PhenomenonField::HalfPlane { normal, offset, .. } => Some(normal.0 * p.x() + normal.1 * p.y() >= *offset),
            PhenomenonField::Disk { center, radius, .. } => Some(center.distance(p) <= *radius),
            PhenomenonField::ScaledGray { base, .. } => base.contains(p),
            PhenomenonField::BinaryActivation { .. } => None,
        }
    }

    fn value_at(&self, p: &Point2) -> f64 {
        match self {
            PhenomenonField::HalfPlane { inside, outside, .. } | PhenomenonField::Disk { inside, outside, .. } => {
                if self.contains(p) == Some(true) {
                    *inside
                } else {
                    *outside
                }
            }
            _ => unreachable!("sampled structurally"),
        }
    }
}

/// Per-node readings, each in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Readings(Vec<f64>);

impl Readings {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().all(|v| is_level(*v)) {
            Ok(Readings(values))
        } else {
            Err(Error::InvalidParameter("readings must lie in [0, 1]"))
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, id: NodeId) -> f64 {
        self.0[id]
    }

    /// Reading 1 on `active`, 0 elsewhere.
    pub fn binary(n: usize, active: &[NodeId]) -> Result<Self> {
        let mut values = vec![0.0; n];
        for &id in active {
            if id >= n {
                return Err(Error::InvalidNodeId { id, n });
            }
            values[id] = 1.0;
        }
        Ok(Readings(values))
    }
}

/// Samples `field` at every sensor of `layout`.
pub fn sample(field: &PhenomenonField, layout: &SensorLayout) -> Result<Readings> {
    field.validate()?;
    match field {
        PhenomenonField::BinaryActivation { active } => Readings::binary(layout.len(), active),
        PhenomenonField::ScaledGray { base, brightness } => {
            let base = sample(base, layout)?;
            Ok(Readings(base.0.iter().map(|v| v * brightness).collect()))
        }
        _ => Ok(Readings(layout.points().iter().map(|p| field.value_at(p)).collect())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::BoundingBox;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y).unwrap()
    }

    fn grid_layout() -> SensorLayout {
        let pts = (0..5)
            .flat_map(|i| (0..5).map(move |j| p(i as f64 * 0.25, j as f64 * 0.25)))
            .collect();
        SensorLayout::new(pts, BoundingBox::unit()).unwrap()
    }

    #[test]
    fn disk_center_reads_inside() {
        let layout = SensorLayout::new(vec![p(0.5, 0.5), p(0.0, 0.0)], BoundingBox::unit()).unwrap();
        let f = PhenomenonField::disk(p(0.5, 0.5), 0.2, 0.8, 0.1).unwrap();
        assert_eq!(sample(&f, &layout).unwrap().values(), &[0.8, 0.1]);
    }

    #[test]
    fn boundary_points_read_inside() {
        let layout = grid_layout();
        let disk = PhenomenonField::disk(p(0.5, 0.5), 0.25, 0.8, 0.1).unwrap();
        let r = sample(&disk, &layout).unwrap();
        // (0.75, 0.5) is node 3 * 5 + 2 and sits exactly on the circle.
        assert_eq!(r.get(17), 0.8);
        let hp = PhenomenonField::half_plane_through(p(0.5, 0.0), (1.0, 0.0), 0.9, 0.2).unwrap();
        let r = sample(&hp, &layout).unwrap();
        assert_eq!(r.get(10), 0.9);
        assert_eq!(r.get(5), 0.2);
    }

    #[test]
    fn zero_brightness_annihilates() {
        let layout = grid_layout();
        let base = PhenomenonField::disk(p(0.5, 0.5), 0.3, 0.8, 0.1).unwrap();
        let f = PhenomenonField::scaled(base, 0.0).unwrap();
        assert!(sample(&f, &layout).unwrap().values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn activation_out_of_range() {
        let layout = grid_layout();
        let f = PhenomenonField::activation(vec![3, 25]);
        assert_eq!(sample(&f, &layout), Err(Error::InvalidNodeId { id: 25, n: 25 }));
        let f = PhenomenonField::activation(vec![3, 24]);
        let r = sample(&f, &layout).unwrap();
        assert_eq!(r.values().iter().filter(|&&v| v == 1.0).count(), 2);
        assert_eq!(r.get(24), 1.0);
    }

    #[test]
    fn scaled_activation() {
        let layout = grid_layout();
        let f = PhenomenonField::scaled(PhenomenonField::activation(vec![0]), 0.5).unwrap();
        let r = sample(&f, &layout).unwrap();
        assert_eq!(r.get(0), 0.5);
        assert_eq!(r.get(1), 0.0);
    }

    #[test]
    fn invalid_parameters() {
        assert!(PhenomenonField::disk(p(0.5, 0.5), 0.0, 0.8, 0.1).is_err());
        assert!(PhenomenonField::disk(p(0.5, 0.5), 0.1, 1.2, 0.1).is_err());
        assert!(PhenomenonField::half_plane_through(p(0.5, 0.5), (0.0, 0.0), 0.8, 0.1).is_err());
        let skew = PhenomenonField::HalfPlane {
            normal: (1.0, 1.0),
            offset: 0.0,
            inside: 0.8,
            outside: 0.1,
        };
        assert!(skew.validate().is_err());
        let base = PhenomenonField::disk(p(0.5, 0.5), 0.1, 0.8, 0.1).unwrap();
        assert!(PhenomenonField::scaled(base, 1.5).is_err());
        assert!(Readings::new(vec![0.0, -0.1]).is_err());
    }
}
