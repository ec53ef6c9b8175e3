use std::io::Read;

use nalgebra::{DVector, Isometry3, Matrix3, Rotation3, SymmetricEigen, Translation3, Unit, UnitQuaternion, Vector3};
use serde::Deserialize;

use crate::error::{Error, Result};

const REFERENCE_MODEL: &str = include_str!("../../data/panda_gaz2019.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JointType {
    Revolute,
    Prismatic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Link {
    pub name: String,
    pub mass: f64,
    /// Centre of mass in the link frame, m.
    pub com: Vector3<f64>,
    /// Inertia about the centre of mass, expressed in the link frame, kg·m².
    pub inertia: Matrix3<f64>,
    /// Whether the link contributes to the total moving mass used by the
    /// constant effective-mass approximation.
    pub moving: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Joint {
    pub name: String,
    pub joint_type: JointType,
    /// Fixed transform from the parent link frame to the joint frame.
    pub origin: Isometry3<f64>,
    pub axis: Unit<Vector3<f64>>,
    pub lower: f64,
    pub upper: f64,
    /// Link moved by this joint.
    pub link: Link,
}

/// A point rigidly attached to one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactPoint {
    /// Index of the link (equivalently of its joint).
    pub link: usize,
    /// Offset in the link frame, m.
    pub offset: Vector3<f64>,
}

/// Serial chain of joints, each carrying one link. Immutable after load.
#[derive(Debug, Clone, PartialEq)]
pub struct ManipulatorModel {
    pub name: String,
    pub source: String,
    pub joints: Vec<Joint>,
    pub flange: ContactPoint,
    /// Nominal configuration, used to seed inverse kinematics.
    pub home: DVector<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawModel {
    name: String,
    #[serde(default)]
    source: String,
    home: Option<Vec<f64>>,
    flange: RawPoint,
    joints: Vec<RawJoint>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPoint {
    link: String,
    #[serde(default)]
    offset: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJoint {
    name: String,
    #[serde(rename = "type")]
    joint_type: JointType,
    #[serde(default)]
    origin_xyz: [f64; 3],
    #[serde(default)]
    origin_rpy: [f64; 3],
    axis: [f64; 3],
    limits: [f64; 2],
    link: RawLink,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLink {
    name: String,
    mass: f64,
    #[serde(default)]
    com: [f64; 3],
    /// ixx, ixy, ixz, iyy, iyz, izz
    #[serde(default)]
    inertia: [f64; 6],
    #[serde(default = "yes")]
    moving: bool,
}

fn yes() -> bool {
    true
}

impl ManipulatorModel {
    /// The bundled 7-DoF reference arm.
    pub fn reference() -> Self {
        Self::from_toml_str(REFERENCE_MODEL).expect("bundled robot model is valid")
    }

    pub fn reference_toml() -> &'static str {
        REFERENCE_MODEL
    }

    pub fn load<R: Read>(mut source: R) -> Result<Self> {
        let mut text = String::new();
        source.read_to_string(&mut text)?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawModel = toml::from_str(text)?;
        if raw.joints.is_empty() {
            return Err(Error::Model("model has no joints".into()));
        }
        let mut joints = Vec::with_capacity(raw.joints.len());
        for j in raw.joints {
            joints.push(build_joint(j)?);
        }
        let link = joints
            .iter()
            .position(|j| j.link.name == raw.flange.link)
            .ok_or_else(|| Error::Model(format!("flange link '{}' not found", raw.flange.link)))?;
        let flange = ContactPoint {
            link,
            offset: Vector3::from(raw.flange.offset),
        };
        let n = joints.len();
        let home = match raw.home {
            Some(h) if h.len() == n => DVector::from_vec(h),
            Some(h) => {
                return Err(Error::Model(format!("home has {} entries for {} joints", h.len(), n)));
            }
            None => DVector::from_iterator(n, joints.iter().map(|j| 0.5 * (j.lower + j.upper))),
        };
        let model = ManipulatorModel {
            name: raw.name,
            source: raw.source,
            joints,
            flange,
            home,
        };
        model.check_limits(&model.home)?;
        Ok(model)
    }

    pub fn dof(&self) -> usize {
        self.joints.len()
    }

    pub fn total_mass(&self) -> f64 {
        self.joints.iter().map(|j| j.link.mass).sum()
    }

    /// Sum of the masses flagged as moving.
    pub fn moving_mass(&self) -> f64 {
        self.joints.iter().filter(|j| j.link.moving).map(|j| j.link.mass).sum()
    }

    pub fn within_limits(&self, q: &DVector<f64>) -> bool {
        q.len() == self.dof()
            && self
                .joints
                .iter()
                .zip(q.iter())
                .all(|(j, &v)| v >= j.lower && v <= j.upper)
    }

    pub fn check_limits(&self, q: &DVector<f64>) -> Result<()> {
        if q.len() != self.dof() {
            return Err(Error::domain(format!(
                "configuration has {} entries, model has {} joints",
                q.len(),
                self.dof()
            )));
        }
        for (j, &v) in self.joints.iter().zip(q.iter()) {
            if !(v >= j.lower && v <= j.upper) {
                return Err(Error::domain(format!(
                    "joint {} = {v} outside limits [{}, {}]",
                    j.name, j.lower, j.upper
                )));
            }
        }
        Ok(())
    }

    pub fn clamp_to_limits(&self, q: &mut DVector<f64>) {
        for (j, v) in self.joints.iter().zip(q.iter_mut()) {
            *v = v.clamp(j.lower, j.upper);
        }
    }

    /// Poses and joint axes at configuration `q`.
    pub fn kinematics(&self, q: &DVector<f64>) -> ChainState {
        let n = self.dof();
        let mut frames = Vec::with_capacity(n);
        let mut axes = Vec::with_capacity(n);
        let mut origins = Vec::with_capacity(n);
        let mut parent = Isometry3::identity();
        for (joint, &qi) in self.joints.iter().zip(q.iter()) {
            let before = parent * joint.origin;
            let axis_world = before.rotation * joint.axis.into_inner();
            let motion = match joint.joint_type {
                JointType::Revolute => Isometry3::from_parts(
                    Translation3::identity(),
                    UnitQuaternion::from_axis_angle(&joint.axis, qi),
                ),
                JointType::Prismatic => Isometry3::from_parts(
                    Translation3::from(joint.axis.into_inner() * qi),
                    UnitQuaternion::identity(),
                ),
            };
            let frame = before * motion;
            axes.push(axis_world);
            origins.push(before.translation.vector);
            frames.push(frame);
            parent = frame;
        }
        ChainState { frames, axes, origins }
    }

    pub fn point_position(&self, q: &DVector<f64>, point: &ContactPoint) -> Vector3<f64> {
        self.kinematics(q).point(point)
    }
}

/// World-frame quantities of the chain at one configuration.
#[derive(Debug, Clone)]
pub struct ChainState {
    /// Link frames after joint motion.
    pub frames: Vec<Isometry3<f64>>,
    /// Unit joint axes.
    pub axes: Vec<Vector3<f64>>,
    /// A point on each joint axis (the joint frame origin before motion).
    pub origins: Vec<Vector3<f64>>,
}

impl ChainState {
    pub fn point(&self, point: &ContactPoint) -> Vector3<f64> {
        self.frames[point.link].transform_point(&point.offset.into()).coords
    }

    /// Pose of a frame attached at `point` with the orientation of its link.
    pub fn point_pose(&self, point: &ContactPoint) -> Isometry3<f64> {
        let f = self.frames[point.link];
        Isometry3::from_parts(Translation3::from(self.point(point)), f.rotation)
    }
}

fn build_joint(j: RawJoint) -> Result<Joint> {
    let axis = Vector3::from(j.axis);
    if !(axis.norm() > 1e-12) || axis.iter().any(|v| !v.is_finite()) {
        return Err(Error::Model(format!("joint {}: axis must be non-zero", j.name)));
    }
    let [lower, upper] = j.limits;
    if !(lower < upper) {
        return Err(Error::Model(format!(
            "joint {}: limits must satisfy lower < upper",
            j.name
        )));
    }
    let [r, p, y] = j.origin_rpy;
    let origin = Isometry3::from_parts(
        Translation3::from(Vector3::from(j.origin_xyz)),
        UnitQuaternion::from_rotation_matrix(&Rotation3::from_euler_angles(r, p, y)),
    );
    let l = j.link;
    if !(l.mass.is_finite() && l.mass >= 0.0) {
        return Err(Error::Model(format!("link {}: mass must be non-negative", l.name)));
    }
    let [ixx, ixy, ixz, iyy, iyz, izz] = l.inertia;
    let inertia = Matrix3::new(ixx, ixy, ixz, ixy, iyy, iyz, ixz, iyz, izz);
    let eig = SymmetricEigen::new(inertia).eigenvalues;
    let scale = inertia.trace().abs().max(1e-12);
    if eig.iter().any(|&e| e < -1e-9 * scale) {
        return Err(Error::Model(format!(
            "link {}: inertia tensor is not positive semi-definite (eigenvalues {:?})",
            l.name,
            eig.as_slice()
        )));
    }
    Ok(Joint {
        name: j.name,
        joint_type: j.joint_type,
        origin,
        axis: Unit::new_normalize(axis),
        lower,
        upper,
        link: Link {
            name: l.name,
            mass: l.mass,
            com: Vector3::from(l.com),
            inertia,
            moving: l.moving,
        },
    })
}

/// Hand-built models for tests and examples.
pub mod fixtures {
    use super::*;

    fn link(name: &str, mass: f64, com: Vector3<f64>, inertia: Matrix3<f64>) -> Link {
        Link {
            name: name.into(),
            mass,
            com,
            inertia,
            moving: true,
        }
    }

    fn joint(name: &str, joint_type: JointType, origin: Isometry3<f64>, axis: Vector3<f64>, link: Link) -> Joint {
        Joint {
            name: name.into(),
            joint_type,
            origin,
            axis: Unit::new_normalize(axis),
            lower: -10.0,
            upper: 10.0,
            link,
        }
    }

    /// One prismatic joint along x carrying a point mass.
    pub fn single_prismatic(mass: f64) -> ManipulatorModel {
        ManipulatorModel {
            name: "prismatic".into(),
            source: "fixture".into(),
            joints: vec![joint(
                "x",
                JointType::Prismatic,
                Isometry3::identity(),
                Vector3::x(),
                link("slider", mass, Vector3::zeros(), Matrix3::zeros()),
            )],
            flange: ContactPoint {
                link: 0,
                offset: Vector3::zeros(),
            },
            home: DVector::zeros(1),
        }
    }

    /// Gantry: a prismatic x stage (mass `m1`) carrying a prismatic y stage (mass `m2`).
    pub fn xy_gantry(m1: f64, m2: f64) -> ManipulatorModel {
        ManipulatorModel {
            name: "gantry".into(),
            source: "fixture".into(),
            joints: vec![
                joint(
                    "x",
                    JointType::Prismatic,
                    Isometry3::identity(),
                    Vector3::x(),
                    link("carriage_x", m1, Vector3::zeros(), Matrix3::zeros()),
                ),
                joint(
                    "y",
                    JointType::Prismatic,
                    Isometry3::identity(),
                    Vector3::y(),
                    link("carriage_y", m2, Vector3::zeros(), Matrix3::zeros()),
                ),
            ],
            flange: ContactPoint {
                link: 1,
                offset: Vector3::zeros(),
            },
            home: DVector::zeros(2),
        }
    }

    /// Planar two-link arm rotating about z; links lie along their local x.
    pub fn planar_two_link(masses: [f64; 2], lengths: [f64; 2], com_dist: [f64; 2], izz: [f64; 2]) -> ManipulatorModel {
        let inertia = |i: f64| Matrix3::from_diagonal(&Vector3::new(i, i, i));
        ManipulatorModel {
            name: "planar2".into(),
            source: "fixture".into(),
            joints: vec![
                joint(
                    "shoulder",
                    JointType::Revolute,
                    Isometry3::identity(),
                    Vector3::z(),
                    link("upper", masses[0], Vector3::new(com_dist[0], 0.0, 0.0), inertia(izz[0])),
                ),
                joint(
                    "elbow",
                    JointType::Revolute,
                    Isometry3::translation(lengths[0], 0.0, 0.0),
                    Vector3::z(),
                    link("fore", masses[1], Vector3::new(com_dist[1], 0.0, 0.0), inertia(izz[1])),
                ),
            ],
            flange: ContactPoint {
                link: 1,
                offset: Vector3::new(lengths[1], 0.0, 0.0),
            },
            home: DVector::zeros(2),
        }
    }
}
