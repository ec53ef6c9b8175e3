use nalgebra::Vector3;

use crate::error::{Error, Result};

/// `n` nearly uniform unit vectors on the sphere (Fibonacci lattice).
pub fn direction_set(n: usize) -> Result<Vec<Vector3<f64>>> {
    if n == 0 {
        return Err(Error::domain("direction count must be at least 1"));
    }
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    Ok((0..n)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z).normalize()
        })
        .collect())
}
