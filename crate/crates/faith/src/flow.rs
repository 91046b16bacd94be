//! Pinhole camera flow model and the synthetic flow oracle.
//!
//! Flow is expressed in px/s in the public interface; the model works
//! internally in normalized image coordinates (x = X/Z, y = Y/Z) and
//! converts through the focal lengths. The synthesizer produces
//! derotated translational normal flow with configurable aperture,
//! jitter and outlier noise, and serves as the ground-truth oracle for
//! the benchmark.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geometry::{HalfPlane, Point2};
use crate::{Error, Result};

/// Pinhole intrinsics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CameraModel {
    pub width: usize,
    pub height: usize,
    pub fx: f64,
    pub fy: f64,
    pub cx: f64,
    pub cy: f64,
}

impl CameraModel {
    /// 240x180 sensor with a +/-30 degree horizontal half-FOV:
    /// fx = fy = (240/2) / tan(30 deg) ~ 207.85 px.
    pub fn default_dvs() -> Self {
        let fx = 120.0 / (30.0f64.to_radians()).tan();
        CameraModel {
            width: 240,
            height: 180,
            fx,
            fy: fx,
            cx: 120.0,
            cy: 90.0,
        }
    }

    pub fn contains_pixel(&self, p: &Point2) -> bool {
        p.x >= 0.0 && p.x < self.width as f64 && p.y >= 0.0 && p.y < self.height as f64
    }

    /// Pixel position to normalized image coordinates.
    pub fn normalized(&self, p: &Point2) -> (f64, f64) {
        ((p.x - self.cx) / self.fx, (p.y - self.cy) / self.fy)
    }
}

/// 6-DOF camera velocity: translation in m/s, body rates in rad/s.
///
/// `lateral` moves along the image x axis, `vertical` along image y,
/// `forward` along the principal axis. The rates are rotations about
/// the same three axes.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EgoMotion {
    pub lateral: f64,
    pub vertical: f64,
    pub forward: f64,
    pub pitch_rate: f64,
    pub yaw_rate: f64,
    pub roll_rate: f64,
}

impl EgoMotion {
    pub fn translation(lateral: f64, vertical: f64, forward: f64) -> Self {
        EgoMotion {
            lateral,
            vertical,
            forward,
            ..Default::default()
        }
    }

    pub fn rates(&self) -> (f64, f64, f64) {
        (self.pitch_rate, self.yaw_rate, self.roll_rate)
    }

    pub fn without_rotation(&self) -> Self {
        EgoMotion {
            pitch_rate: 0.0,
            yaw_rate: 0.0,
            roll_rate: 0.0,
            ..*self
        }
    }
}

/// A 3D point in the camera frame, metres, Z along the principal axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenePoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ScenePoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        ScenePoint { x, y, z }
    }
}

/// One sparse optic-flow measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowVector {
    /// Measurement timestamp, seconds.
    pub t: f64,
    pub pos: Point2,
    /// Horizontal flow, px/s.
    pub u: f64,
    /// Vertical flow, px/s.
    pub v: f64,
}

impl FlowVector {
    pub fn new(t: f64, pos: Point2, u: f64, v: f64) -> Self {
        FlowVector { t, pos, u, v }
    }

    pub fn magnitude(&self) -> f64 {
        (self.u * self.u + self.v * self.v).sqrt()
    }

    /// The half-plane guaranteed to contain the FOE for expanding flow.
    pub fn negative_half_plane(&self) -> Result<HalfPlane> {
        HalfPlane::negative_of_flow(self.pos, self.u, self.v)
    }
}

/// Noise applied by the synthesizer, all stages seeded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Fraction of vectors replaced by their projection onto a random
    /// edge normal (the aperture problem).
    pub aperture_fraction: f64,
    /// Gaussian angular jitter, radians.
    pub direction_sigma: f64,
    /// Relative std of multiplicative magnitude noise.
    pub magnitude_sigma: f64,
    /// Fraction of vectors replaced by uniform random flow.
    pub outlier_fraction: f64,
    pub seed: u64,
}

impl NoiseModel {
    pub fn none(seed: u64) -> Self {
        NoiseModel {
            aperture_fraction: 0.0,
            direction_sigma: 0.0,
            magnitude_sigma: 0.0,
            outlier_fraction: 0.0,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let frac = |name: &str, v: f64| {
            if !(0.0..=1.0).contains(&v) {
                Err(Error::Domain(format!("{name} must be in [0, 1], got {v}")))
            } else {
                Ok(())
            }
        };
        frac("aperture_fraction", self.aperture_fraction)?;
        frac("outlier_fraction", self.outlier_fraction)?;
        if self.direction_sigma < 0.0 || self.magnitude_sigma < 0.0 {
            return Err(Error::Domain("noise sigmas must be >= 0".into()));
        }
        Ok(())
    }
}

/// Projects a scene point to pixels.
pub fn project(p: &ScenePoint, cam: &CameraModel) -> Result<Point2> {
    if p.z <= 0.0 {
        return Err(Error::BehindCamera(p.z));
    }
    Ok(Point2::new(
        cam.cx + cam.fx * p.x / p.z,
        cam.cy + cam.fy * p.y / p.z,
    ))
}

/// Rotational flow component at a pixel position, px/s. Depends only
/// on the body rates, not on depth.
pub fn rotational_flow(pos: &Point2, rates: (f64, f64, f64), cam: &CameraModel) -> (f64, f64) {
    let (x, y) = cam.normalized(pos);
    let (a, b, c) = rates;
    let u_r = a * x * y - b * x * x - b + c * y;
    let v_r = a + a * y * y - b * x * y - c * x;
    (cam.fx * u_r, cam.fy * v_r)
}

/// Translational flow component for a scene point, px/s.
pub fn translational_flow(p: &ScenePoint, ego: &EgoMotion, cam: &CameraModel) -> Result<(f64, f64)> {
    if p.z <= 0.0 {
        return Err(Error::BehindCamera(p.z));
    }
    let x = p.x / p.z;
    let y = p.y / p.z;
    let u_t = -ego.lateral / p.z + x * ego.forward / p.z;
    let v_t = -ego.vertical / p.z + y * ego.forward / p.z;
    Ok((cam.fx * u_t, cam.fy * v_t))
}

/// Full flow of a scene point under the given ego-motion.
pub fn true_flow(p: &ScenePoint, ego: &EgoMotion, cam: &CameraModel) -> Result<FlowVector> {
    let pos = project(p, cam)?;
    let (u_t, v_t) = translational_flow(p, ego, cam)?;
    let (u_r, v_r) = rotational_flow(&pos, ego.rates(), cam);
    Ok(FlowVector::new(0.0, pos, u_t + u_r, v_t + v_r))
}

/// Subtracts the rotation-induced flow at the vector's position, given
/// the body rates (e.g. from an IMU).
pub fn derotate(v: &FlowVector, rates: (f64, f64, f64), cam: &CameraModel) -> FlowVector {
    let (u_r, v_r) = rotational_flow(&v.pos, rates, cam);
    FlowVector::new(v.t, v.pos, v.u - u_r, v.v - v_r)
}

/// Pixel position of the focus of expansion for the given ego-motion.
/// May lie outside the image bounds. Pure lateral motion has no FOE.
pub fn ground_truth_foe(ego: &EgoMotion, cam: &CameraModel) -> Result<Point2> {
    if ego.forward == 0.0 {
        return Err(Error::NoFoe);
    }
    Ok(Point2::new(
        cam.cx + cam.fx * ego.lateral / ego.forward,
        cam.cy + cam.fy * ego.vertical / ego.forward,
    ))
}

/// Horizontal and vertical course angles of an FOE location, degrees.
pub fn course_angle(foe: &Point2, cam: &CameraModel) -> (f64, f64) {
    (
        ((foe.x - cam.cx) / cam.fx).atan().to_degrees(),
        ((foe.y - cam.cy) / cam.fy).atan().to_degrees(),
    )
}

/// Angle between the view rays of two image points, degrees.
pub fn angular_error_deg(a: &Point2, b: &Point2, cam: &CameraModel) -> f64 {
    let ray = |p: &Point2| {
        let (x, y) = cam.normalized(p);
        let n = (x * x + y * y + 1.0).sqrt();
        (x / n, y / n, 1.0 / n)
    };
    let ra = ray(a);
    let rb = ray(b);
    let dot = (ra.0 * rb.0 + ra.1 * rb.1 + ra.2 * rb.2).clamp(-1.0, 1.0);
    dot.acos().to_degrees()
}

/// Samples `n` scene points uniformly over the image with depths
/// uniform in `[z_min, z_max]`.
pub fn random_scene(
    n: usize,
    cam: &CameraModel,
    z_min: f64,
    z_max: f64,
    seed: u64,
) -> Vec<ScenePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let px = rng.gen_range(0.0..cam.width as f64);
            let py = rng.gen_range(0.0..cam.height as f64);
            let z = rng.gen_range(z_min..z_max);
            ScenePoint::new((px - cam.cx) / cam.fx * z, (py - cam.cy) / cam.fy * z, z)
        })
        .collect()
}

/// Generates a derotated translational normal-flow field for the scene
/// and applies the noise model. Deterministic for a fixed seed; points
/// behind the camera or projecting outside the image are skipped.
pub fn synthesize_flow_field(
    scene: &[ScenePoint],
    ego: &EgoMotion,
    cam: &CameraModel,
    noise: &NoiseModel,
) -> Result<Vec<FlowVector>> {
    noise.validate()?;
    let mut field = Vec::with_capacity(scene.len());
    for p in scene {
        if p.z <= 0.0 {
            continue;
        }
        let pos = project(p, cam)?;
        if !cam.contains_pixel(&pos) {
            continue;
        }
        let (u, v) = translational_flow(p, ego, cam)?;
        field.push(FlowVector::new(0.0, pos, u, v));
    }
    if field.is_empty() {
        return Err(Error::EmptyField);
    }

    let mean_mag =
        field.iter().map(FlowVector::magnitude).sum::<f64>() / field.len() as f64;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    for f in &mut field {
        if noise.aperture_fraction > 0.0 && rng.gen_bool(noise.aperture_fraction) {
            // Project the flow onto a random edge normal.
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let n = (a.cos(), a.sin());
            let dot = f.u * n.0 + f.v * n.1;
            f.u = dot * n.0;
            f.v = dot * n.1;
        }
        if noise.direction_sigma > 0.0 {
            let a = gaussian(&mut rng) * noise.direction_sigma;
            let (sin, cos) = a.sin_cos();
            let (u, v) = (f.u, f.v);
            f.u = u * cos - v * sin;
            f.v = u * sin + v * cos;
        }
        if noise.magnitude_sigma > 0.0 {
            let scale = (1.0 + gaussian(&mut rng) * noise.magnitude_sigma).max(1e-3);
            f.u *= scale;
            f.v *= scale;
        }
        if noise.outlier_fraction > 0.0 && rng.gen_bool(noise.outlier_fraction) {
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            let mag = rng.gen_range(0.5..1.5) * mean_mag.max(1e-6);
            f.u = mag * a.cos();
            f.v = mag * a.sin();
        }
    }
    Ok(field)
}

/// Standard normal draw (Box-Muller, one value per call).
fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}
